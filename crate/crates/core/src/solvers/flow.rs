//! Dinic max-flow, plus feasibility of flows with lower bounds via the
//! usual reduction to a max-flow between a super source and super sink.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    cap: i64,
}

#[derive(Debug, Clone)]
pub(crate) struct Dinic {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    pub fn new(nodes: usize) -> Self {
        Dinic {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
            level: vec![0; nodes],
            iter: vec![0; nodes],
        }
    }

    /// Adds `u -> v` with capacity `cap`; returns the edge id.
    pub fn add_edge(&mut self, u: usize, v: usize, cap: i64) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to: v, cap });
        self.adj[u].push(id);
        self.edges.push(Edge { to: u, cap: 0 });
        self.adj[v].push(id + 1);
        id
    }

    /// Flow currently pushed through edge `id`.
    pub fn flow(&self, id: usize) -> i64 {
        self.edges[id ^ 1].cap
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &e in &self.adj[u] {
                let Edge { to, cap } = self.edges[e];
                if cap > 0 && self.level[to] < 0 {
                    self.level[to] = self.level[u] + 1;
                    q.push_back(to);
                }
            }
        }
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: i64) -> i64 {
        if u == t {
            return pushed;
        }
        while self.iter[u] < self.adj[u].len() {
            let e = self.adj[u][self.iter[u]];
            let Edge { to, cap } = self.edges[e];
            if cap > 0 && self.level[to] == self.level[u] + 1 {
                let got = self.dfs(to, t, pushed.min(cap));
                if got > 0 {
                    self.edges[e].cap -= got;
                    self.edges[e ^ 1].cap += got;
                    return got;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return total;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
    }
}

/// A flow network whose edges carry `[lower, upper]` bounds.
#[derive(Debug, Clone)]
pub(crate) struct BoundedFlow {
    nodes: usize,
    edges: Vec<(usize, usize, i64, i64)>,
}

impl BoundedFlow {
    pub fn new(nodes: usize) -> Self {
        BoundedFlow {
            nodes,
            edges: Vec::new(),
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, lower: i64, upper: i64) -> usize {
        self.edges.push((u, v, lower, upper));
        self.edges.len() - 1
    }

    /// Looks for an `s -> t` flow respecting every bound (with unlimited
    /// return capacity `t -> s`). Returns the flow on each edge if one exists.
    pub fn feasible(&self, s: usize, t: usize) -> Option<Vec<i64>> {
        if self.edges.iter().any(|&(_, _, lo, hi)| lo > hi || lo < 0) {
            return None;
        }
        let ss = self.nodes;
        let tt = self.nodes + 1;
        let mut g = Dinic::new(self.nodes + 2);
        let mut excess = vec![0i64; self.nodes];
        let ids: Vec<usize> = self
            .edges
            .iter()
            .map(|&(u, v, lo, hi)| {
                excess[v] += lo;
                excess[u] -= lo;
                g.add_edge(u, v, hi - lo)
            })
            .collect();
        g.add_edge(t, s, i64::MAX / 4);
        let mut demand = 0;
        for (v, &e) in excess.iter().enumerate() {
            if e > 0 {
                g.add_edge(ss, v, e);
                demand += e;
            } else if e < 0 {
                g.add_edge(v, tt, -e);
            }
        }
        if g.max_flow(ss, tt) != demand {
            return None;
        }
        Some(
            ids.iter()
                .zip(&self.edges)
                .map(|(&id, &(_, _, lo, _))| lo + g.flow(id))
                .collect(),
        )
    }
}
