//! Maximum-cardinality 2-matchings and triangle-free 2-matchings.
//!
//! Both solvers are exact branch-and-bound searches over edge indices,
//! adequate at desk scale and deliberately kept behind a small interface
//! so a polynomial-time implementation can replace them without caller
//! changes. When the budget runs out the best incumbent is returned with
//! `optimal = false` instead of failing.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::{EdgeSet, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("vertex {v} has degree {d} > 2")]
    DegreeTooHigh { v: usize, d: usize },
}

/// Limits for the exponential solvers. The node limit is the deterministic
/// budget; the time limit is a wall-clock safety net.
#[derive(Debug, Clone, Copy)]
pub struct SolverBudget {
    node_limit: u64,
    time_limit: Duration,
}

impl SolverBudget {
    pub fn new(node_limit: u64, time_limit: Duration) -> SolverBudget {
        assert!(node_limit > 0, "node limit must be positive");
        assert!(!time_limit.is_zero(), "time limit must be positive");
        SolverBudget {
            node_limit,
            time_limit,
        }
    }

    pub fn node_limit(&self) -> u64 {
        self.node_limit
    }

    pub fn time_limit(&self) -> Duration {
        self.time_limit
    }
}

impl Default for SolverBudget {
    fn default() -> SolverBudget {
        SolverBudget::new(10_000_000, Duration::from_secs(60))
    }
}

/// An edge set with every vertex incident to at most two member edges.
#[derive(Debug, Clone)]
pub struct TwoMatching {
    edges: EdgeSet,
    degrees: Vec<usize>,
}

impl TwoMatching {
    pub fn new(edges: EdgeSet) -> Result<TwoMatching, MatchingError> {
        let degrees: Vec<usize> = (0..edges.graph().n()).map(|v| edges.degree(v)).collect();
        if let Some(v) = degrees.iter().position(|&d| d > 2) {
            return Err(MatchingError::DegreeTooHigh { v, d: degrees[v] });
        }
        Ok(TwoMatching { edges, degrees })
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

pub fn is_two_matching(f: &EdgeSet) -> bool {
    (0..f.graph().n()).all(|v| f.degree(v) <= 2)
}

#[derive(Debug, Clone)]
pub struct MatchingResult {
    pub matching: TwoMatching,
    /// True unless the search was cut short by the budget.
    pub optimal: bool,
    pub nodes_explored: u64,
}

/// Maximum-cardinality 2-matching.
pub fn max_two_matching(g: &Graph, budget: &SolverBudget) -> MatchingResult {
    solve(g, budget, false)
}

/// Maximum-cardinality 2-matching whose edge set has no triangle component.
pub fn max_triangle_free_two_matching(g: &Graph, budget: &SolverBudget) -> MatchingResult {
    solve(g, budget, true)
}

fn solve(g: &Graph, budget: &SolverBudget, triangle_free: bool) -> MatchingResult {
    let mut search = Search {
        g,
        triangle_free,
        deg: vec![0; g.n()],
        chosen_adj: vec![Vec::new(); g.n()],
        chosen: Vec::new(),
        free_capacity: 2 * g.n(),
        best: Vec::new(),
        nodes: 0,
        node_limit: budget.node_limit(),
        deadline: Instant::now() + budget.time_limit(),
        exhausted: false,
    };
    search.dfs(0);
    let edges = EdgeSet::from_indices(g, search.best.iter().copied()).expect("edges of g");
    let matching = TwoMatching::new(edges).expect("solver respects degree bounds");
    MatchingResult {
        matching,
        optimal: !search.exhausted,
        nodes_explored: search.nodes,
    }
}

struct Search<'a> {
    g: &'a Graph,
    triangle_free: bool,
    deg: Vec<usize>,
    /// Current matching as adjacency lists, for path walks.
    chosen_adj: Vec<Vec<usize>>,
    chosen: Vec<usize>,
    /// Sum over vertices of remaining degree capacity, max(0, 2 - deg).
    free_capacity: usize,
    best: Vec<usize>,
    nodes: u64,
    node_limit: u64,
    deadline: Instant,
    exhausted: bool,
}

impl Search<'_> {
    fn dfs(&mut self, next_edge: usize) {
        self.nodes += 1;
        if self.nodes > self.node_limit
            || (self.nodes % 4096 == 0 && Instant::now() >= self.deadline)
        {
            self.exhausted = true;
            return;
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if next_edge == self.g.m() {
            return;
        }
        let remaining = self.g.m() - next_edge;
        let upper = self.chosen.len() + remaining.min(self.free_capacity / 2);
        if upper <= self.best.len() {
            return;
        }
        let (u, v) = self.g.ends(next_edge);
        // Include branch first: reaches large incumbents early.
        if self.deg[u] < 2 && self.deg[v] < 2 && !(self.triangle_free && self.closes_triangle(u, v))
        {
            self.include(next_edge, u, v);
            self.dfs(next_edge + 1);
            self.undo(next_edge, u, v);
            if self.exhausted {
                return;
            }
        }
        self.dfs(next_edge + 1);
    }

    fn include(&mut self, e: usize, u: usize, v: usize) {
        for x in [u, v] {
            debug_assert!(self.deg[x] < 2);
            self.free_capacity -= 1;
            self.deg[x] += 1;
        }
        self.chosen_adj[u].push(v);
        self.chosen_adj[v].push(u);
        self.chosen.push(e);
    }

    fn undo(&mut self, e: usize, u: usize, v: usize) {
        debug_assert_eq!(self.chosen.pop(), Some(e));
        self.chosen_adj[u].pop();
        self.chosen_adj[v].pop();
        for x in [u, v] {
            self.deg[x] -= 1;
            self.free_capacity += 1;
        }
    }

    /// Would adding `uv` close a cycle of length 3? In a partial 2-matching
    /// a triangle component is permanent (all three vertices saturated), so
    /// refusing it at creation time is a complete pruning rule.
    fn closes_triangle(&self, u: usize, v: usize) -> bool {
        if self.deg[u] != 1 || self.deg[v] != 1 {
            return false;
        }
        // Triangle iff u's unique matched neighbor is also matched to v.
        let x = self.chosen_adj[u][0];
        self.chosen_adj[x].contains(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn k(n: usize) -> Graph {
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                pairs.push((u, v));
            }
        }
        Graph::build(n, &pairs).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::build(n, &pairs).unwrap()
    }

    fn bowtie() -> Graph {
        Graph::build(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]).unwrap()
    }

    /// Exhaustive reference maximum, used to pin expected sizes.
    fn brute_force_max(g: &Graph, triangle_free: bool) -> usize {
        let m = g.m();
        assert!(m <= 20);
        let mut best = 0;
        for mask in 0u32..(1 << m) {
            let set = EdgeSet::from_indices(g, (0..m).filter(|&e| mask >> e & 1 == 1)).unwrap();
            if is_two_matching(&set) && (!triangle_free || set.is_triangle_free()) {
                best = best.max(set.len());
            }
        }
        best
    }

    #[test]
    fn is_two_matching_examples() {
        assert!(is_two_matching(&EdgeSet::full(&cycle(5))));
        let star = Graph::build(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(!is_two_matching(&EdgeSet::full(&star)));
        assert!(is_two_matching(&EdgeSet::empty(&star)));
    }

    #[test]
    fn max_two_matching_small_graphs() {
        let budget = SolverBudget::default();
        assert_eq!(max_two_matching(&k(3), &budget).matching.len(), 3);
        let path = Graph::build(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(max_two_matching(&path, &budget).matching.len(), 3);
        let k4 = k(4);
        let result = max_two_matching(&k4, &budget);
        assert_eq!(result.matching.len(), brute_force_max(&k4, false));
        assert_eq!(result.matching.len(), 4);
        assert!(result.optimal);
    }

    #[test]
    fn max_triangle_free_two_matching_small_graphs() {
        let budget = SolverBudget::default();
        assert_eq!(
            max_triangle_free_two_matching(&k(3), &budget).matching.len(),
            2
        );
        assert_eq!(
            max_triangle_free_two_matching(&cycle(4), &budget)
                .matching
                .len(),
            4
        );
        let bt = bowtie();
        let result = max_triangle_free_two_matching(&bt, &budget);
        assert_eq!(result.matching.len(), brute_force_max(&bt, true));
        assert_eq!(result.matching.len(), 4);
        let k4 = k(4);
        let result = max_triangle_free_two_matching(&k4, &budget);
        assert_eq!(result.matching.len(), brute_force_max(&k4, true));
        assert_eq!(result.matching.len(), 4);
    }

    #[test]
    fn solver_outputs_satisfy_predicates() {
        let budget = SolverBudget::default();
        for g in [k(5), bowtie(), cycle(7)] {
            let r = max_triangle_free_two_matching(&g, &budget);
            assert!(is_two_matching(r.matching.edges()));
            assert!(r.matching.edges().is_triangle_free());
            let r = max_two_matching(&g, &budget);
            assert!(is_two_matching(r.matching.edges()));
        }
    }

    #[test]
    fn budget_exhaustion_returns_incumbent() {
        let budget = SolverBudget::new(1, Duration::from_secs(60));
        let r = max_two_matching(&k(6), &budget);
        assert!(!r.optimal);
        assert!(is_two_matching(r.matching.edges()));
    }

    #[test]
    fn solver_matches_brute_force_on_enumerated_graphs() {
        let budget = SolverBudget::default();
        // All graphs on 4 vertices, both solver variants.
        for mask in 0u32..(1 << 6) {
            let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
            let chosen: Vec<_> = (0..6)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| pairs[i])
                .collect();
            let g = Graph::build(4, &chosen).unwrap();
            assert_eq!(
                max_two_matching(&g, &budget).matching.len(),
                brute_force_max(&g, false)
            );
            assert_eq!(
                max_triangle_free_two_matching(&g, &budget).matching.len(),
                brute_force_max(&g, true)
            );
        }
    }
}
