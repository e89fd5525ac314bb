use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constant in front of the `log k` (JL) term.
pub const DEFAULT_C_JL: f64 = 8.0;
/// Constant in front of the `d / alpha^2` (ball-expansion) term.
pub const DEFAULT_C_EXP: f64 = 9.0;
/// Operator-norm constant: `||G x|| <= c0 sqrt(d) ||x||` for all `x`, w.h.p.
pub const DEFAULT_C0: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Vanilla,
    Outliers,
    Constrained,
    Doubling,
}

fn default_c_jl() -> f64 {
    DEFAULT_C_JL
}
fn default_c_exp() -> f64 {
    DEFAULT_C_EXP
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetDimParams {
    pub alpha: f64,
    pub k: usize,
    pub d: usize,
    #[serde(default = "default_c_jl")]
    pub c_jl: f64,
    #[serde(default = "default_c_exp")]
    pub c_exp: f64,
    #[serde(default)]
    pub z: usize,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub ddim: Option<f64>,
}

impl TargetDimParams {
    pub fn new(alpha: f64, k: usize, d: usize) -> Self {
        TargetDimParams {
            alpha,
            k,
            d,
            c_jl: DEFAULT_C_JL,
            c_exp: DEFAULT_C_EXP,
            z: 0,
            eps: None,
            ddim: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > 1.0) || !self.alpha.is_finite() {
            return Err(Error::invalid("alpha", "must be > 1"));
        }
        if self.k == 0 {
            return Err(Error::invalid("k", "must be >= 1"));
        }
        if self.d == 0 {
            return Err(Error::invalid("d", "must be >= 1"));
        }
        if !(self.c_jl >= 0.0) || !(self.c_exp >= 0.0) {
            return Err(Error::invalid("c_jl/c_exp", "constants must be nonnegative"));
        }
        Ok(())
    }
}

/// Target dimension for each variant, capped at `d` and floored at 1.
///
/// - vanilla: `c_jl ln(k+2) + c_exp d / alpha^2`
/// - outliers: `c_jl ln((k+2)(z+2)) + c_exp d / alpha^2`
/// - constrained: `c_jl ln(k+2) + c_exp d / alpha`
/// - doubling: `c_jl ln(k+2) / eps^2 + c_exp ln(2/eps) ddim / eps^2`
pub fn target_dimension(params: &TargetDimParams, variant: Variant) -> Result<usize> {
    params.validate()?;
    let k = params.k as f64;
    let d = params.d as f64;
    let a = params.alpha;
    let raw = match variant {
        Variant::Vanilla => params.c_jl * (k + 2.0).ln() + params.c_exp * d / (a * a),
        Variant::Outliers => {
            let z = params.z as f64;
            params.c_jl * ((k + 2.0) * (z + 2.0)).ln() + params.c_exp * d / (a * a)
        }
        Variant::Constrained => params.c_jl * (k + 2.0).ln() + params.c_exp * d / a,
        Variant::Doubling => {
            let eps = params
                .eps
                .ok_or_else(|| Error::invalid("eps", "required for the doubling variant"))?;
            let ddim = params
                .ddim
                .ok_or_else(|| Error::invalid("ddim", "required for the doubling variant"))?;
            if !(eps > 0.0 && eps < 1.0) {
                return Err(Error::invalid("eps", "must lie in (0, 1)"));
            }
            if !(ddim >= 0.0) {
                return Err(Error::invalid("ddim", "must be >= 0"));
            }
            let e2 = eps * eps;
            params.c_jl * (k + 2.0).ln() / e2 + params.c_exp * (2.0 / eps).ln() * ddim / e2
        }
    };
    Ok((raw.ceil() as usize).clamp(1, params.d))
}
