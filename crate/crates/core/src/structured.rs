//! Detectors for the structural properties the rewrite system's correctness
//! arguments rely on: 2-vertex-connectivity, a size threshold of `2/eps`
//! vertices, absence of irrelevant edges (edges whose endpoint pair
//! disconnects the rest) and absence of non-isolating 2-vertex-cuts.
//!
//! Contractible-subgraph detection is undecided here in general; the report
//! says so explicitly and carries only the two special-case scans that the
//! rewrite proofs actually use.

use num_traits::Zero;
use thiserror::Error;

use crate::graph::Graph;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructuredError {
    #[error("epsilon {0} outside (0, 1/24]")]
    EpsilonOutOfRange(Rational),
}

/// A vertex pair whose removal leaves at least three components, or exactly
/// two components each with at least two vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCut {
    pub u: usize,
    pub v: usize,
    /// Sizes of the components of `G - {u, v}`, descending.
    pub component_sizes: Vec<usize>,
}

/// Edges `uv` such that `G - {u, v}` is not connected. Definition-based:
/// delete the pair, count components.
pub fn find_irrelevant_edges(g: &Graph) -> Vec<usize> {
    (0..g.m())
        .filter(|&e| {
            let (u, v) = g.ends(e);
            component_sizes_without(g, u, v).len() > 1
        })
        .collect()
}

/// All non-isolating 2-vertex-cuts, ordered by `(u, v)`.
pub fn find_non_isolating_two_cuts(g: &Graph) -> Vec<TwoCut> {
    let n = g.n();
    let mut out = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let sizes = component_sizes_without(g, u, v);
            let non_isolating =
                sizes.len() >= 3 || (sizes.len() == 2 && sizes.iter().all(|&s| s >= 2));
            if non_isolating {
                out.push(TwoCut {
                    u,
                    v,
                    component_sizes: sizes,
                });
            }
        }
    }
    out
}

/// Component sizes of `G - {u, v}`, descending.
fn component_sizes_without(g: &Graph, u: usize, v: usize) -> Vec<usize> {
    let n = g.n();
    let mut seen = vec![false; n];
    seen[u] = true;
    seen[v] = true;
    let mut sizes = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        let mut size = 1;
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for &(y, _) in g.adjacency(x) {
                if !seen[y] {
                    seen[y] = true;
                    size += 1;
                    stack.push(y);
                }
            }
        }
        sizes.push(size);
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// True iff the graph has at least `2/epsilon` vertices. Epsilon must lie
/// in `(0, 1/24]`.
pub fn check_size(g: &Graph, epsilon: Rational) -> Result<bool, StructuredError> {
    if epsilon <= Rational::zero() || epsilon > Rational::new(1, 24) {
        return Err(StructuredError::EpsilonOutOfRange(epsilon));
    }
    Ok(size_ok(g.n(), epsilon))
}

fn size_ok(n: usize, epsilon: Rational) -> bool {
    Rational::from_integer(n as i64) * epsilon >= Rational::from_integer(2)
}

/// A complete bipartite `K_{2,3}` subgraph whose three degree-2 vertices
/// force all six edges into every 2-edge-connected spanning subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PinnedK23 {
    pub hubs: [usize; 2],
    pub spokes: [usize; 3],
}

/// Results of the two special-case contractibility scans. General
/// contractible-subgraph detection is not attempted.
#[derive(Debug, Clone)]
pub struct ContractibilityScan {
    /// `K_{2,3}` subgraphs with all spoke degrees exactly 2 in the graph.
    pub pinned_k23: Vec<PinnedK23>,
    /// Chordless cycles of length 4 or 5 in which all vertices but one have
    /// no neighbors outside the cycle; every feasible solution then needs
    /// four in-cycle edges.
    pub pinned_cycles: Vec<Vec<usize>>,
    /// False when the cycle scan was skipped because the graph is too large.
    pub cycles_exhaustive: bool,
}

pub const CONTRACTIBILITY_NOTE: &str =
    "general contractible-subgraph detection not attempted; only the two special-case scans run";

#[derive(Debug, Clone)]
pub struct StructureReport {
    pub epsilon: Rational,
    pub two_vertex_connected: bool,
    pub size_ok: bool,
    pub irrelevant_edges: Vec<usize>,
    pub non_isolating_cuts: Vec<TwoCut>,
    pub contractibility: ContractibilityScan,
}

impl StructureReport {
    /// True iff all properties this module can decide hold. Necessary but
    /// not sufficient for full structuredness (contractibility is open).
    pub fn decidable_checks_pass(&self) -> bool {
        self.two_vertex_connected
            && self.irrelevant_edges.is_empty()
            && self.non_isolating_cuts.is_empty()
    }

    /// Key/value text block.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("epsilon: {}\n", self.epsilon));
        out.push_str(&format!(
            "two_vertex_connected: {}\n",
            self.two_vertex_connected
        ));
        out.push_str(&format!("size_ok: {}\n", self.size_ok));
        out.push_str(&format!(
            "irrelevant_edges: {:?}\n",
            self.irrelevant_edges
        ));
        let cuts: Vec<(usize, usize)> =
            self.non_isolating_cuts.iter().map(|c| (c.u, c.v)).collect();
        out.push_str(&format!("non_isolating_two_cuts: {cuts:?}\n"));
        out.push_str(&format!("contractibility: {CONTRACTIBILITY_NOTE}\n"));
        out.push_str(&format!(
            "pinned_k23_subgraphs: {:?}\n",
            self.contractibility
                .pinned_k23
                .iter()
                .map(|w| (w.hubs, w.spokes))
                .collect::<Vec<_>>()
        ));
        out.push_str(&format!(
            "pinned_small_cycles: {:?}\n",
            self.contractibility.pinned_cycles
        ));
        out.push_str(&format!(
            "pinned_cycle_scan_exhaustive: {}\n",
            self.contractibility.cycles_exhaustive
        ));
        out
    }
}

/// Aggregates all decidable structure checks. Requires only `epsilon > 0`;
/// the strict `(0, 1/24]` gate is [`check_size`]'s.
pub fn structure_report(g: &Graph, epsilon: Rational) -> Result<StructureReport, StructuredError> {
    if epsilon <= Rational::zero() {
        return Err(StructuredError::EpsilonOutOfRange(epsilon));
    }
    Ok(StructureReport {
        epsilon,
        two_vertex_connected: g.is_two_vertex_connected(),
        size_ok: size_ok(g.n(), epsilon),
        irrelevant_edges: find_irrelevant_edges(g),
        non_isolating_cuts: find_non_isolating_two_cuts(g),
        contractibility: contractibility_scan(g),
    })
}

const CYCLE_SCAN_EDGE_LIMIT: usize = 400;

fn contractibility_scan(g: &Graph) -> ContractibilityScan {
    let mut pinned_k23 = Vec::new();
    for a in 0..g.n() {
        for b in (a + 1)..g.n() {
            let common: Vec<usize> = (0..g.n())
                .filter(|&w| {
                    w != a
                        && w != b
                        && g.degree(w) == 2
                        && g.edge_between(w, a).is_some()
                        && g.edge_between(w, b).is_some()
                })
                .collect();
            if common.len() >= 3 {
                pinned_k23.push(PinnedK23 {
                    hubs: [a, b],
                    spokes: [common[0], common[1], common[2]],
                });
            }
        }
    }
    let cycles_exhaustive = g.m() <= CYCLE_SCAN_EDGE_LIMIT;
    let pinned_cycles = if cycles_exhaustive {
        pinned_small_cycles(g)
    } else {
        Vec::new()
    };
    ContractibilityScan {
        pinned_k23,
        pinned_cycles,
        cycles_exhaustive,
    }
}

/// Chordless 4- and 5-cycles `v1..vl` where every vertex except `v1` has all
/// its neighbors inside the cycle. Cycles are reported once, rooted at the
/// free vertex.
fn pinned_small_cycles(g: &Graph) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut path: Vec<usize> = Vec::new();
    for start in 0..g.n() {
        path.push(start);
        extend_cycle(g, &mut path, &mut out);
        path.pop();
    }
    out
}

fn extend_cycle(g: &Graph, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let last = *path.last().unwrap();
    if path.len() >= 4 && g.edge_between(last, path[0]).is_some() {
        check_pinned_cycle(g, path, out);
    }
    if path.len() == 5 {
        return;
    }
    for &(w, _) in g.adjacency(last) {
        // Canonical rooting: the start is the smallest vertex.
        if w > path[0] && !path.contains(&w) {
            path.push(w);
            extend_cycle(g, path, out);
            path.pop();
        }
    }
}

fn check_pinned_cycle(g: &Graph, cycle: &[usize], out: &mut Vec<Vec<usize>>) {
    let l = cycle.len();
    // Chordless: only consecutive cycle vertices adjacent.
    for i in 0..l {
        for j in (i + 1)..l {
            let consecutive = j == i + 1 || (i == 0 && j == l - 1);
            if !consecutive && g.edge_between(cycle[i], cycle[j]).is_some() {
                return;
            }
        }
    }
    // All vertices but one confined to the cycle.
    let confined = |v: usize| g.adjacency(v).iter().all(|&(w, _)| cycle.contains(&w));
    let free: Vec<usize> = cycle.iter().copied().filter(|&v| !confined(v)).collect();
    if free.len() <= 1 {
        // Root the listing at the free vertex (or the smallest if none).
        let root = free.first().copied().unwrap_or(cycle[0]);
        let pos = cycle.iter().position(|&v| v == root).unwrap();
        let mut rotated: Vec<usize> = cycle[pos..].iter().chain(&cycle[..pos]).copied().collect();
        // One orientation per cycle.
        if rotated.len() > 2 && rotated[1] > rotated[l - 1] {
            rotated[1..].reverse();
        }
        if !out.contains(&rotated) {
            out.push(rotated);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

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

    #[test]
    fn irrelevant_edge_on_path() {
        // Path a-b-c-d: removing {b, c} leaves {a}, {d}.
        let g = Graph::build(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(find_irrelevant_edges(&g), vec![1]);
    }

    #[test]
    fn no_irrelevant_edges_in_k4_or_c4() {
        assert!(find_irrelevant_edges(&k(4)).is_empty());
        assert!(find_irrelevant_edges(&cycle(4)).is_empty());
    }

    #[test]
    fn non_isolating_cut_in_glued_squares() {
        // Two 4-cycles sharing two opposite vertices 0 and 2.
        let g = Graph::build(6, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 2), (2, 5), (5, 0)])
            .unwrap();
        let cuts = find_non_isolating_two_cuts(&g);
        assert!(cuts.iter().any(|c| (c.u, c.v) == (0, 2)));
    }

    #[test]
    fn k5_and_c5_have_no_non_isolating_cuts() {
        assert!(find_non_isolating_two_cuts(&k(5)).is_empty());
        assert!(find_non_isolating_two_cuts(&cycle(5)).is_empty());
    }

    #[test]
    fn size_threshold() {
        let eps = Rational::new(1, 24);
        assert!(check_size(&cycle(48), eps).unwrap());
        assert!(!check_size(&cycle(47), eps).unwrap());
        assert!(check_size(&cycle(20), Rational::new(1, 10)).unwrap());
        assert!(check_size(&cycle(3), Rational::new(2, 1)).is_err());
        assert!(check_size(&cycle(3), Rational::new(0, 1)).is_err());
    }

    #[test]
    fn report_on_k5() {
        let r = structure_report(&k(5), Rational::new(1, 2)).unwrap();
        assert!(r.two_vertex_connected);
        assert!(r.size_ok);
        assert!(r.irrelevant_edges.is_empty());
        assert!(r.non_isolating_cuts.is_empty());
        assert!(r.decidable_checks_pass());
    }

    #[test]
    fn report_on_path() {
        let g = Graph::build(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let r = structure_report(&g, Rational::new(1, 24)).unwrap();
        assert!(!r.two_vertex_connected);
        assert!(!r.decidable_checks_pass());
    }

    #[test]
    fn pinned_k23_scan() {
        let g = Graph::build(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap();
        let r = structure_report(&g, Rational::new(1, 24)).unwrap();
        assert_eq!(r.contractibility.pinned_k23.len(), 1);
        assert_eq!(r.contractibility.pinned_k23[0].hubs, [0, 1]);
    }

    #[test]
    fn pinned_cycle_scan_on_bare_square() {
        // C4 alone: every vertex is confined, counts as pinned.
        let r = structure_report(&cycle(4), Rational::new(1, 24)).unwrap();
        assert_eq!(r.contractibility.pinned_cycles.len(), 1);
        // K4: its 4-cycles all have chords.
        let r = structure_report(&k(4), Rational::new(1, 24)).unwrap();
        assert!(r.contractibility.pinned_cycles.is_empty());
    }
}
