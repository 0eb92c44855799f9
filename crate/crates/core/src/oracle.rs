//! Exact brute-force solvers used as ground truth on small instances.
//!
//! The searches run over raw edge bitmasks with their own connectivity and
//! bridge checks, deliberately not sharing the solver code paths they are
//! used to validate.

use thiserror::Error;

use crate::graph::{EdgeSet, Graph};

pub const DEFAULT_EDGE_LIMIT: usize = 20;
pub const MAX_ENUMERATION_VERTICES: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {m} edges, oracle limit is {limit}")]
    TooLarge { m: usize, limit: usize },
    #[error("no feasible subset exists")]
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub value: usize,
    pub witness: EdgeSet,
    pub nodes_explored: u64,
    /// Oracle results are exact by construction.
    pub exact: bool,
}

/// Minimum-size 2-edge-connected spanning subgraph by ascending-cardinality
/// subset search.
pub fn exact_min_2ecss(g: &Graph, limit: usize) -> Result<OracleResult, OracleError> {
    check_limit(g, limit)?;
    let ctx = Ctx::new(g);
    if !ctx.is_spanning_two_edge_connected(full_mask(g.m())) {
        return Err(OracleError::Infeasible);
    }
    let mut nodes = 0;
    // Degrees at least 2 everywhere force at least n edges.
    for k in g.n()..=g.m() {
        if let Some(mask) = first_subset(g.m(), k, &mut nodes, |mask| {
            ctx.is_spanning_two_edge_connected(mask)
        }) {
            return Ok(result(g, mask, k, nodes));
        }
    }
    Err(OracleError::Infeasible)
}

/// Maximum-size triangle-free 2-matching by descending-cardinality subset
/// search.
pub fn exact_max_tf_2matching(g: &Graph, limit: usize) -> Result<OracleResult, OracleError> {
    check_limit(g, limit)?;
    let ctx = Ctx::new(g);
    let mut nodes = 0;
    for k in (0..=g.m().min(g.n())).rev() {
        if let Some(mask) = first_subset(g.m(), k, &mut nodes, |mask| {
            ctx.max_degree(mask) <= 2 && ctx.is_triangle_free(mask)
        }) {
            return Ok(result(g, mask, k, nodes));
        }
    }
    unreachable!("the empty set is always feasible")
}

/// Minimum-size triangle-free 2-edge-cover by ascending-cardinality subset
/// search.
pub fn exact_min_tf_cover(g: &Graph, limit: usize) -> Result<OracleResult, OracleError> {
    check_limit(g, limit)?;
    let ctx = Ctx::new(g);
    let mut nodes = 0;
    for k in g.n()..=g.m() {
        if let Some(mask) = first_subset(g.m(), k, &mut nodes, |mask| {
            ctx.min_degree(mask) >= 2 && ctx.is_triangle_free(mask)
        }) {
            return Ok(result(g, mask, k, nodes));
        }
    }
    Err(OracleError::Infeasible)
}

/// All labeled simple graphs on `n <= 7` vertices passing `filter`, streamed
/// in bitmask order over the lexicographic pair list.
pub fn enumerate_small_graphs(
    n: usize,
    filter: impl Fn(&Graph) -> bool + 'static,
) -> Result<impl Iterator<Item = Graph>, OracleError> {
    if n > MAX_ENUMERATION_VERTICES {
        return Err(OracleError::TooLarge {
            m: n,
            limit: MAX_ENUMERATION_VERTICES,
        });
    }
    let pairs = vertex_pairs(n);
    let total: u64 = 1 << pairs.len();
    Ok((0..total).filter_map(move |mask| {
        let chosen: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let g = Graph::build(n.max(1), &chosen).expect("enumerated graphs are simple");
        filter(&g).then_some(g)
    }))
}

/// All unordered vertex pairs of `0..n` in lexicographic order.
pub fn vertex_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            pairs.push((u, v));
        }
    }
    pairs
}

fn check_limit(g: &Graph, limit: usize) -> Result<(), OracleError> {
    if g.m() > limit || g.m() >= 64 {
        return Err(OracleError::TooLarge {
            m: g.m(),
            limit: limit.min(63),
        });
    }
    Ok(())
}

fn full_mask(m: usize) -> u64 {
    if m == 0 {
        0
    } else {
        u64::MAX >> (64 - m)
    }
}

fn result(g: &Graph, mask: u64, value: usize, nodes: u64) -> OracleResult {
    let witness =
        EdgeSet::from_indices(g, (0..g.m()).filter(|&e| mask >> e & 1 == 1)).expect("valid edges");
    OracleResult {
        value,
        witness,
        nodes_explored: nodes,
        exact: true,
    }
}

/// First k-subset of `0..m` (as a bitmask, lexicographic by index set)
/// satisfying `feasible`.
fn first_subset(
    m: usize,
    k: usize,
    nodes: &mut u64,
    feasible: impl Fn(u64) -> bool,
) -> Option<u64> {
    if k > m {
        return None;
    }
    if k == 0 {
        *nodes += 1;
        return feasible(0).then_some(0);
    }
    // Gosper's hack enumerates k-bit masks in increasing numeric order.
    let mut mask: u64 = (1 << k) - 1;
    let limit = full_mask(m);
    loop {
        *nodes += 1;
        if feasible(mask) {
            return Some(mask);
        }
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        let next = (((r ^ mask) >> 2) / c) | r;
        if next > limit {
            return None;
        }
        mask = next;
    }
}

/// Per-graph scratch for mask-based feasibility checks.
struct Ctx {
    n: usize,
    m: usize,
    ends: Vec<(usize, usize)>,
}

impl Ctx {
    fn new(g: &Graph) -> Ctx {
        Ctx {
            n: g.n(),
            m: g.m(),
            ends: g.edges().to_vec(),
        }
    }

    fn degrees(&self, mask: u64) -> Vec<u8> {
        let mut deg = vec![0u8; self.n];
        for e in 0..self.m {
            if mask >> e & 1 == 1 {
                let (u, v) = self.ends[e];
                deg[u] += 1;
                deg[v] += 1;
            }
        }
        deg
    }

    fn max_degree(&self, mask: u64) -> u8 {
        self.degrees(mask).into_iter().max().unwrap_or(0)
    }

    fn min_degree(&self, mask: u64) -> u8 {
        self.degrees(mask).into_iter().min().unwrap_or(0)
    }

    /// Component id per vertex under the masked edge set.
    fn component_ids(&self, mask: u64) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.n];
        let mut count = 0;
        for root in 0..self.n {
            if comp[root] != usize::MAX {
                continue;
            }
            comp[root] = count;
            let mut stack = vec![root];
            while let Some(x) = stack.pop() {
                for e in 0..self.m {
                    if mask >> e & 1 == 1 {
                        let (a, b) = self.ends[e];
                        let y = if a == x {
                            b
                        } else if b == x {
                            a
                        } else {
                            continue;
                        };
                        if comp[y] == usize::MAX {
                            comp[y] = count;
                            stack.push(y);
                        }
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    fn is_triangle_free(&self, mask: u64) -> bool {
        let (comp, count) = self.component_ids(mask);
        let mut vertices = vec![0usize; count];
        let mut edges = vec![0usize; count];
        for v in 0..self.n {
            vertices[comp[v]] += 1;
        }
        for e in 0..self.m {
            if mask >> e & 1 == 1 {
                edges[comp[self.ends[e].0]] += 1;
            }
        }
        (0..count).all(|c| !(vertices[c] == 3 && edges[c] == 3))
    }

    /// Connected on all vertices and bridge-free, by the definition: drop
    /// each member edge in turn and recount components.
    fn is_spanning_two_edge_connected(&self, mask: u64) -> bool {
        if self.component_ids(mask).1 != 1 {
            return false;
        }
        for e in 0..self.m {
            if mask >> e & 1 == 1 && self.component_ids(mask & !(1 << e)).1 != 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> Graph {
        Graph::build(n, &vertex_pairs(n)).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::build(n, &pairs).unwrap()
    }

    fn bowtie() -> Graph {
        Graph::build(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]).unwrap()
    }

    #[test]
    fn min_2ecss_values() {
        assert_eq!(exact_min_2ecss(&cycle(5), 20).unwrap().value, 5);
        assert_eq!(exact_min_2ecss(&k(4), 20).unwrap().value, 4);
        assert_eq!(exact_min_2ecss(&k(5), 20).unwrap().value, 5);
    }

    #[test]
    fn min_2ecss_infeasible_on_trees() {
        let path = Graph::build(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(exact_min_2ecss(&path, 20), Err(OracleError::Infeasible));
    }

    #[test]
    fn max_tf_2matching_values() {
        assert_eq!(exact_max_tf_2matching(&k(3), 20).unwrap().value, 2);
        assert_eq!(exact_max_tf_2matching(&cycle(4), 20).unwrap().value, 4);
        assert_eq!(exact_max_tf_2matching(&bowtie(), 20).unwrap().value, 4);
    }

    #[test]
    fn min_tf_cover_values() {
        assert_eq!(exact_min_tf_cover(&k(3), 20), Err(OracleError::Infeasible));
        assert_eq!(exact_min_tf_cover(&cycle(4), 20).unwrap().value, 4);
        assert_eq!(exact_min_tf_cover(&bowtie(), 20).unwrap().value, 6);
    }

    #[test]
    fn witnesses_satisfy_their_predicates() {
        let g = bowtie();
        let r = exact_min_tf_cover(&g, 20).unwrap();
        assert!(crate::cover::is_two_edge_cover(&r.witness));
        assert!(r.witness.is_triangle_free());
        let r = exact_max_tf_2matching(&g, 20).unwrap();
        assert!(crate::matching::is_two_matching(&r.witness));
        assert!(r.witness.is_triangle_free());
    }

    #[test]
    fn oracle_rejects_large_instances() {
        assert!(matches!(
            exact_min_2ecss(&k(7), 20),
            Err(OracleError::TooLarge { .. })
        ));
    }

    #[test]
    fn enumeration_counts_and_filters() {
        let all: Vec<_> = enumerate_small_graphs(2, |_| true).unwrap().collect();
        assert_eq!(all.len(), 2);
        let candidates: Vec<_> = enumerate_small_graphs(3, |g| {
            (0..g.n()).all(|v| g.degree(v) >= 2) && EdgeSet::full(g).component_count() == 1
        })
        .unwrap()
        .collect();
        assert_eq!(candidates.len(), 1);
        assert_eq!(candidates[0].m(), 3);
        let with_min_deg2: Vec<_> = enumerate_small_graphs(4, |g| {
            (0..g.n()).all(|v| g.degree(v) >= 2) && EdgeSet::full(g).component_count() == 1
        })
        .unwrap()
        .collect();
        // C4 (three labelings), diamond (six), K4 (one) and the triangle
        // with one doubled... on simple graphs: C4, diamond, K4 labelings.
        assert!(with_min_deg2.iter().any(|g| g.m() == 4));
        assert!(with_min_deg2.iter().any(|g| g.m() == 5));
        assert!(with_min_deg2.iter().any(|g| g.m() == 6));
    }

    #[test]
    fn duality_on_small_graphs() {
        // Minimum triangle-free cover and maximum triangle-free matching
        // satisfy min = 2n - max whenever the cover exists.
        for g in [cycle(4), cycle(5), k(4), k(5), bowtie()] {
            let cover = exact_min_tf_cover(&g, 20).unwrap();
            let matching = exact_max_tf_2matching(&g, 20).unwrap();
            assert_eq!(cover.value, 2 * g.n() - matching.value);
        }
    }
}
