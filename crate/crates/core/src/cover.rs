//! 2-edge-covers and the conversions between triangle-free 2-matchings and
//! triangle-free 2-edge-covers, including the minimum triangle-free
//! 2-edge-cover computation built on the matching solver.
//!
//! The two conversion loops are potential-function arguments made
//! executable: expansion adds edges while the total deficiency
//! `sum_v max(2 - d(v), 0)` strictly drops, contraction removes edges while
//! the total excess `sum_v max(d(v) - 2, 0)` strictly drops. Every step is
//! recorded in a [`ConversionTrace`] so the accounting can be replayed.

use thiserror::Error;

use crate::graph::{EdgeSet, Graph};
use crate::matching::{
    max_triangle_free_two_matching, max_two_matching, SolverBudget, TwoMatching,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("not a 2-edge-cover: vertex {v} has degree {d}")]
    NotACover { v: usize, d: usize },
    #[error("graph is not connected")]
    NotConnected,
    #[error("vertex {v} has degree {d} < 2 in the graph")]
    MinDegreeBelowTwo { v: usize, d: usize },
    #[error("graph has {n} < 4 vertices")]
    TooFewVertices { n: usize },
    #[error("matching is not triangle-free")]
    MatchingNotTriangleFree,
    #[error("cover is not triangle-free")]
    CoverNotTriangleFree,
    #[error("no triangle-free 2-edge-cover exists: {witness}")]
    NoCoverExists { witness: InfeasibilityWitness },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Why no (triangle-free) 2-edge-cover can exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InfeasibilityWitness {
    /// A vertex of degree below two can never be covered twice.
    LowDegreeVertex { v: usize, degree: usize },
    /// A component whose only 2-edge-cover is a triangle.
    TriangleOnlyComponent { vertices: Vec<usize> },
}

impl std::fmt::Display for InfeasibilityWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InfeasibilityWitness::LowDegreeVertex { v, degree } => {
                write!(f, "vertex {v} has degree {degree}")
            }
            InfeasibilityWitness::TriangleOnlyComponent { vertices } => {
                write!(f, "component {vertices:?} admits only the triangle itself")
            }
        }
    }
}

/// An edge set with every vertex incident to at least two member edges.
#[derive(Debug, Clone)]
pub struct Cover {
    edges: EdgeSet,
    degrees: Vec<usize>,
}

impl Cover {
    pub fn new(edges: EdgeSet) -> Result<Cover, CoverError> {
        let degrees: Vec<usize> = (0..edges.graph().n()).map(|v| edges.degree(v)).collect();
        if let Some(v) = degrees.iter().position(|&d| d < 2) {
            return Err(CoverError::NotACover { v, d: degrees[v] });
        }
        Ok(Cover { edges, degrees })
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

pub fn is_two_edge_cover(f: &EdgeSet) -> bool {
    (0..f.graph().n()).all(|v| f.degree(v) >= 2)
}

/// Total missing degree: `sum_v max(2 - d_F(v), 0)`.
pub fn deficiency(f: &EdgeSet) -> usize {
    (0..f.graph().n())
        .map(|v| 2usize.saturating_sub(f.degree(v)))
        .sum()
}

/// Total surplus degree: `sum_v max(d_F(v) - 2, 0)`.
pub fn excess(f: &EdgeSet) -> usize {
    (0..f.graph().n())
        .map(|v| f.degree(v).saturating_sub(2))
        .sum()
}

/// Which rewrite rule a conversion step applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConversionRule {
    /// Expansion: add one edge at a deficient vertex.
    ExpandDirect,
    /// Expansion: the added edge would close a triangle component, so an
    /// escape edge out of the triangle is added as well.
    ExpandWithEscape,
    /// Contraction: remove one edge at an overfull vertex.
    ShrinkDirect,
    /// Contraction: removal would isolate a triangle at the chosen vertex,
    /// so a triangle edge at the chosen vertex is removed instead.
    ShrinkAtChosen,
    /// Contraction: removal would isolate a triangle at the far endpoint,
    /// so a triangle edge there is removed instead.
    ShrinkAtOther,
}

#[derive(Debug, Clone)]
pub struct ConversionStep {
    pub rule: ConversionRule,
    pub added: Vec<usize>,
    pub removed: Vec<usize>,
    /// The vertex whose degree violation triggered the step.
    pub pivot: usize,
    pub potential_before: usize,
    pub potential_after: usize,
}

#[derive(Debug, Clone, Default)]
pub struct ConversionTrace {
    pub steps: Vec<ConversionStep>,
}

/// Expands a triangle-free 2-matching into a triangle-free 2-edge-cover of
/// size at most `2n - |M|`. Requires the graph to be connected with minimum
/// degree at least 2 and at least 4 vertices.
pub fn matching_to_cover(m: &TwoMatching) -> Result<(Cover, ConversionTrace), CoverError> {
    let g = m.edges().graph().clone();
    if g.n() < 4 {
        return Err(CoverError::TooFewVertices { n: g.n() });
    }
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) < 2) {
        return Err(CoverError::MinDegreeBelowTwo {
            v,
            d: g.degree(v),
        });
    }
    if EdgeSet::full(&g).component_count() != 1 {
        return Err(CoverError::NotConnected);
    }
    if !m.edges().is_triangle_free() {
        return Err(CoverError::MatchingNotTriangleFree);
    }

    let mut f = m.edges().clone();
    let mut deg: Vec<usize> = (0..g.n()).map(|v| f.degree(v)).collect();
    let mut trace = ConversionTrace::default();
    loop {
        let v = match (0..g.n()).find(|&v| deg[v] < 2) {
            Some(v) => v,
            None => break,
        };
        let potential_before = deficiency(&f);
        let (w, vw) = g
            .adjacency(v)
            .iter()
            .copied()
            .filter(|&(_, e)| !f.contains(e))
            .min_by_key(|&(_, e)| e)
            .expect("deficient vertex has a spare graph edge");
        f.insert(vw);
        deg[v] += 1;
        deg[w] += 1;
        // If vw closed a triangle component, route one more edge out of it.
        let triangle = triangle_component_at(&f, v);
        let step = match triangle {
            None => ConversionStep {
                rule: ConversionRule::ExpandDirect,
                added: vec![vw],
                removed: vec![],
                pivot: v,
                potential_before,
                potential_after: deficiency(&f),
            },
            Some(tri) => {
                let escape = lowest_leaving_edge(&g, &f, &tri).ok_or_else(|| {
                    CoverError::Internal(format!(
                        "triangle component {tri:?} has no edge to the rest of a connected graph"
                    ))
                })?;
                let (a, b) = g.ends(escape);
                f.insert(escape);
                deg[a] += 1;
                deg[b] += 1;
                ConversionStep {
                    rule: ConversionRule::ExpandWithEscape,
                    added: vec![vw, escape],
                    removed: vec![],
                    pivot: v,
                    potential_before,
                    potential_after: deficiency(&f),
                }
            }
        };
        let drop = step.potential_before - step.potential_after;
        let changed = step.added.len();
        if drop < changed {
            return Err(CoverError::Internal(format!(
                "expansion step changed {changed} edges but dropped potential by {drop}"
            )));
        }
        debug_assert!(f.is_triangle_free());
        trace.steps.push(step);
    }
    let cover = Cover::new(f)?;
    debug_assert!(cover.edges().is_triangle_free());
    if cover.len() > 2 * g.n() - m.len() {
        return Err(CoverError::Internal(format!(
            "cover size {} exceeds 2n - |M| = {}",
            cover.len(),
            2 * g.n() - m.len()
        )));
    }
    Ok((cover, trace))
}

/// Shrinks a triangle-free 2-edge-cover into a triangle-free 2-matching of
/// size at least `2n - |C|`.
pub fn cover_to_matching(c: &Cover) -> Result<(TwoMatching, ConversionTrace), CoverError> {
    if !c.edges().is_triangle_free() {
        return Err(CoverError::CoverNotTriangleFree);
    }
    let g = c.edges().graph().clone();
    let mut f = c.edges().clone();
    let mut deg: Vec<usize> = (0..g.n()).map(|v| f.degree(v)).collect();
    let mut trace = ConversionTrace::default();
    loop {
        let v = match (0..g.n()).find(|&v| deg[v] > 2) {
            Some(v) => v,
            None => break,
        };
        let potential_before = excess(&f);
        let (w, vw) = g
            .adjacency(v)
            .iter()
            .copied()
            .filter(|&(_, e)| f.contains(e))
            .min_by_key(|&(_, e)| e)
            .expect("overfull vertex has a member edge");
        f.remove(vw);
        deg[v] -= 1;
        deg[w] -= 1;
        let step = if let Some(tri) = triangle_component_at(&f, v) {
            // Removing vw strands a triangle at v; take a triangle edge at v
            // instead, which keeps the component attached through vw.
            f.insert(vw);
            deg[v] += 1;
            deg[w] += 1;
            let removed = lowest_triangle_edge_at(&g, &f, &tri, v);
            let (a, b) = g.ends(removed);
            f.remove(removed);
            deg[a] -= 1;
            deg[b] -= 1;
            ConversionStep {
                rule: ConversionRule::ShrinkAtChosen,
                added: vec![],
                removed: vec![removed],
                pivot: v,
                potential_before,
                potential_after: excess(&f),
            }
        } else if let Some(tri) = triangle_component_at(&f, w) {
            f.insert(vw);
            deg[v] += 1;
            deg[w] += 1;
            if deg[w] != 3 {
                return Err(CoverError::Internal(format!(
                    "far endpoint {w} has degree {} before the swap, expected 3",
                    deg[w]
                )));
            }
            let removed = lowest_triangle_edge_at(&g, &f, &tri, w);
            let (a, b) = g.ends(removed);
            f.remove(removed);
            deg[a] -= 1;
            deg[b] -= 1;
            ConversionStep {
                rule: ConversionRule::ShrinkAtOther,
                added: vec![],
                removed: vec![removed],
                pivot: w,
                potential_before,
                potential_after: excess(&f),
            }
        } else {
            ConversionStep {
                rule: ConversionRule::ShrinkDirect,
                added: vec![],
                removed: vec![vw],
                pivot: v,
                potential_before,
                potential_after: excess(&f),
            }
        };
        if step.potential_after >= step.potential_before {
            return Err(CoverError::Internal(
                "contraction step did not drop the potential".into(),
            ));
        }
        debug_assert!(f.is_triangle_free());
        trace.steps.push(step);
    }
    let matching = TwoMatching::new(f)
        .map_err(|e| CoverError::Internal(format!("contraction left degree > 2: {e}")))?;
    debug_assert!(matching.edges().is_triangle_free());
    if matching.len() + c.len() < 2 * g.n() {
        return Err(CoverError::Internal(format!(
            "matching size {} below 2n - |C| = {}",
            matching.len(),
            (2 * g.n()).saturating_sub(c.len())
        )));
    }
    Ok((matching, trace))
}

/// The triangle component of `f` containing `v`, if any.
fn triangle_component_at(f: &EdgeSet, v: usize) -> Option<[usize; 3]> {
    let g = f.graph();
    let mut members = vec![v];
    let mut stack = vec![v];
    let mut edge_count = 0;
    while let Some(x) = stack.pop() {
        for &(y, e) in g.adjacency(x) {
            if !f.contains(e) {
                continue;
            }
            edge_count += 1;
            if !members.contains(&y) {
                if members.len() == 3 {
                    return None;
                }
                members.push(y);
                stack.push(y);
            }
        }
        if members.len() > 3 {
            return None;
        }
    }
    // Each internal edge was seen from both endpoints.
    if members.len() == 3 && edge_count == 6 {
        members.sort_unstable();
        Some([members[0], members[1], members[2]])
    } else {
        None
    }
}

/// Lowest-index graph edge leaving the vertex set `tri`. Such an edge is
/// never a member of `f`, since `tri` is a whole component of `f`.
fn lowest_leaving_edge(g: &Graph, f: &EdgeSet, tri: &[usize; 3]) -> Option<usize> {
    let e = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(_, &(a, b))| tri.contains(&a) != tri.contains(&b))
        .map(|(e, _)| e)
        .next();
    if let Some(e) = e {
        debug_assert!(!f.contains(e));
    }
    e
}

/// Lowest-index member edge of the triangle `tri` incident to `pivot`.
fn lowest_triangle_edge_at(g: &Graph, f: &EdgeSet, tri: &[usize; 3], pivot: usize) -> usize {
    g.adjacency(pivot)
        .iter()
        .filter(|&&(w, e)| f.contains(e) && tri.contains(&w))
        .map(|&(_, e)| e)
        .min()
        .expect("pivot keeps two triangle edges")
}

#[derive(Debug, Clone)]
pub struct CoverResult {
    pub cover: Cover,
    /// True iff every per-component matching was solved to optimality, in
    /// which case the cover is a minimum triangle-free 2-edge-cover.
    pub optimal: bool,
}

/// Minimum-cardinality triangle-free 2-edge-cover, if one exists: per
/// connected component, a maximum triangle-free 2-matching expanded by
/// [`matching_to_cover`], yielding exactly `2|V| - |M*|` edges per component.
pub fn min_triangle_free_cover(g: &Graph, budget: &SolverBudget) -> Result<CoverResult, CoverError> {
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) < 2) {
        return Err(CoverError::NoCoverExists {
            witness: InfeasibilityWitness::LowDegreeVertex {
                v,
                degree: g.degree(v),
            },
        });
    }
    let mut chosen = EdgeSet::empty(g);
    let mut optimal = true;
    for comp in EdgeSet::full(g).components() {
        if comp.len() < 4 {
            // Minimum degree 2 forces a simple component on < 4 vertices to
            // be a triangle, whose only 2-edge-cover is itself.
            return Err(CoverError::NoCoverExists {
                witness: InfeasibilityWitness::TriangleOnlyComponent { vertices: comp },
            });
        }
        let (sub, _vertex_map, edge_map) = g.induced_subgraph(&comp);
        let result = max_triangle_free_two_matching(&sub, budget);
        optimal &= result.optimal;
        let (sub_cover, _trace) = matching_to_cover(&result.matching)?;
        if result.optimal && sub_cover.len() != 2 * sub.n() - result.matching.len() {
            return Err(CoverError::Internal(format!(
                "optimal component cover has size {}, expected 2n - |M*| = {}",
                sub_cover.len(),
                2 * sub.n() - result.matching.len()
            )));
        }
        for e in sub_cover.edges().iter() {
            chosen.insert(edge_map[e]);
        }
    }
    let cover = Cover::new(chosen)?;
    debug_assert!(cover.edges().is_triangle_free());
    Ok(CoverResult { cover, optimal })
}

/// Minimum-cardinality 2-edge-cover ignoring triangle-freeness: a maximum
/// 2-matching expanded greedily at deficient vertices.
pub fn min_cover(g: &Graph, budget: &SolverBudget) -> Result<CoverResult, CoverError> {
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) < 2) {
        return Err(CoverError::NoCoverExists {
            witness: InfeasibilityWitness::LowDegreeVertex {
                v,
                degree: g.degree(v),
            },
        });
    }
    let result = max_two_matching(g, budget);
    let mut f = result.matching.edges().clone();
    let mut deg: Vec<usize> = (0..g.n()).map(|v| f.degree(v)).collect();
    while let Some(v) = (0..g.n()).find(|&v| deg[v] < 2) {
        let (w, vw) = g
            .adjacency(v)
            .iter()
            .copied()
            .filter(|&(_, e)| !f.contains(e))
            .min_by_key(|&(_, e)| e)
            .expect("deficient vertex has a spare graph edge");
        f.insert(vw);
        deg[v] += 1;
        deg[w] += 1;
    }
    let cover = Cover::new(f)?;
    debug_assert!(cover.len() <= 2 * g.n() - result.matching.len());
    Ok(CoverResult {
        cover,
        optimal: result.optimal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::matching::is_two_matching;

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

    /// Exhaustive minimum 2-edge-cover size, optionally triangle-free.
    fn brute_force_min_cover(g: &Graph, triangle_free: bool) -> Option<usize> {
        let m = g.m();
        assert!(m <= 20);
        let mut best: Option<usize> = None;
        for mask in 0u32..(1 << m) {
            let set =
                EdgeSet::from_indices(g, (0..m).filter(|&e| mask >> e & 1 == 1)).unwrap();
            if is_two_edge_cover(&set) && (!triangle_free || set.is_triangle_free()) {
                best = Some(best.map_or(set.len(), |b: usize| b.min(set.len())));
            }
        }
        best
    }

    #[test]
    fn cover_predicate_examples() {
        assert!(is_two_edge_cover(&EdgeSet::full(&cycle(4))));
        let path = Graph::build(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!is_two_edge_cover(&EdgeSet::full(&path)));
        assert!(is_two_edge_cover(&EdgeSet::full(&k(3))));
    }

    #[test]
    fn deficiency_and_excess() {
        let g = k(5);
        assert_eq!(deficiency(&EdgeSet::empty(&g)), 10);
        let c4 = cycle(4);
        assert_eq!(deficiency(&EdgeSet::full(&c4)), 0);
        assert_eq!(excess(&EdgeSet::full(&c4)), 0);
        // Perfect matching on 4 vertices: each vertex misses one edge.
        let pm = EdgeSet::from_indices(&k(4), [0, 5]).unwrap(); // (0,1), (2,3)
        assert_eq!(deficiency(&pm), 4);
        let k4 = EdgeSet::full(&k(4));
        assert_eq!(excess(&k4), 4);
        let star = Graph::build(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(excess(&EdgeSet::full(&star)), 1);
    }

    #[test]
    fn expansion_of_a_cover_is_identity() {
        let c4 = cycle(4);
        let m = TwoMatching::new(EdgeSet::full(&c4)).unwrap();
        let (cover, trace) = matching_to_cover(&m).unwrap();
        assert_eq!(cover.len(), 4);
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn expansion_on_bowtie_path_matching() {
        // Path 1-0-3-4 plus 1-2: a 4-edge triangle-free 2-matching with
        // deficient vertices 2 and 4.
        let g = bowtie();
        let edges = EdgeSet::from_indices(
            &g,
            [
                g.edge_between(1, 2).unwrap(),
                g.edge_between(0, 1).unwrap(),
                g.edge_between(0, 3).unwrap(),
                g.edge_between(3, 4).unwrap(),
            ],
        )
        .unwrap();
        let m = TwoMatching::new(edges).unwrap();
        let (cover, _trace) = matching_to_cover(&m).unwrap();
        assert!(is_two_edge_cover(cover.edges()));
        assert!(cover.edges().is_triangle_free());
        assert!(cover.len() <= 2 * 5 - 4);
        assert_eq!(cover.len(), 6);
    }

    #[test]
    fn expansion_on_k4_cycle_matching() {
        let k4 = k(4);
        let cyc = EdgeSet::from_indices(
            &k4,
            [
                k4.edge_between(0, 1).unwrap(),
                k4.edge_between(1, 2).unwrap(),
                k4.edge_between(2, 3).unwrap(),
                k4.edge_between(3, 0).unwrap(),
            ],
        )
        .unwrap();
        let m = TwoMatching::new(cyc).unwrap();
        let (cover, trace) = matching_to_cover(&m).unwrap();
        assert_eq!(cover.len(), 4);
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn expansion_rejects_bad_inputs() {
        let k3 = k(3);
        let m = TwoMatching::new(EdgeSet::empty(&k3)).unwrap();
        assert_eq!(
            matching_to_cover(&m),
            Err(CoverError::TooFewVertices { n: 3 })
        );
    }

    #[test]
    fn contraction_of_a_matching_is_identity() {
        let c4 = cycle(4);
        let c = Cover::new(EdgeSet::full(&c4)).unwrap();
        let (m, trace) = cover_to_matching(&c).unwrap();
        assert_eq!(m.len(), 4);
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn contraction_of_bowtie_cover() {
        let g = bowtie();
        let c = Cover::new(EdgeSet::full(&g)).unwrap();
        let (m, _trace) = cover_to_matching(&c).unwrap();
        assert!(is_two_matching(m.edges()));
        assert!(m.edges().is_triangle_free());
        assert!(m.len() >= 2 * 5 - 6);
    }

    #[test]
    fn contraction_of_k4() {
        let k4 = k(4);
        let c = Cover::new(EdgeSet::full(&k4)).unwrap();
        let (m, _trace) = cover_to_matching(&c).unwrap();
        assert!(is_two_matching(m.edges()));
        assert!(m.edges().is_triangle_free());
        assert!(m.len() >= 2);
    }

    #[test]
    fn min_triangle_free_cover_on_k3_is_infeasible() {
        let budget = SolverBudget::default();
        match min_triangle_free_cover(&k(3), &budget) {
            Err(CoverError::NoCoverExists {
                witness: InfeasibilityWitness::TriangleOnlyComponent { vertices },
            }) => assert_eq!(vertices, vec![0, 1, 2]),
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn min_triangle_free_cover_small_graphs() {
        let budget = SolverBudget::default();
        let r = min_triangle_free_cover(&cycle(4), &budget).unwrap();
        assert_eq!(r.cover.len(), 4);
        assert!(r.optimal);
        let bt = bowtie();
        let r = min_triangle_free_cover(&bt, &budget).unwrap();
        assert_eq!(Some(r.cover.len()), brute_force_min_cover(&bt, true));
        assert_eq!(r.cover.len(), 6);
    }

    #[test]
    fn min_cover_small_graphs() {
        let budget = SolverBudget::default();
        assert_eq!(min_cover(&k(3), &budget).unwrap().cover.len(), 3);
        assert_eq!(min_cover(&cycle(4), &budget).unwrap().cover.len(), 4);
        let bt = bowtie();
        let r = min_cover(&bt, &budget).unwrap();
        assert_eq!(Some(r.cover.len()), brute_force_min_cover(&bt, false));
        assert_eq!(r.cover.len(), 6);
    }

    #[test]
    fn min_cover_rejects_degree_one() {
        let budget = SolverBudget::default();
        let g = Graph::build(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        assert!(matches!(
            min_cover(&g, &budget),
            Err(CoverError::NoCoverExists {
                witness: InfeasibilityWitness::LowDegreeVertex { v: 3, .. }
            })
        ));
    }
}
