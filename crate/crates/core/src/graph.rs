//! Simple undirected graphs with indexed edges, edge subsets, and the
//! structural decompositions (connected components, bridges, blocks,
//! 2-edge-connected components) everything else is built on.
//!
//! A [`Graph`] is immutable after construction and cheap to clone (shared
//! storage). An [`EdgeSet`] is a subset of one graph's edges identified by
//! edge index; 2-matchings, 2-edge-covers and solutions are all edge sets
//! with extra validated properties.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use thiserror::Error;

static NEXT_GRAPH_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph needs at least one vertex")]
    NoVertices,
    #[error("self-loop ({u}, {v}) is not allowed")]
    SelfLoop { u: usize, v: usize },
    #[error("parallel edge ({u}, {v}) is not allowed")]
    ParallelEdge { u: usize, v: usize },
    #[error("edge ({u}, {v}) out of range for {n} vertices")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("edge index {index} out of range for {m} edges")]
    EdgeIndexOutOfRange { index: usize, m: usize },
}

/// Errors from reading the text graph format.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: expected header \"n m\"")]
    BadHeader { line: usize },
    #[error("line {line}: expected edge line \"u v\"")]
    BadEdgeLine { line: usize },
    #[error("expected {expected} edges, found {found}")]
    WrongEdgeCount { expected: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

struct Inner {
    id: u64,
    n: usize,
    /// Endpoints in input order; the position in this list is the edge index.
    ends: Vec<(usize, usize)>,
    /// adjacency[v] lists (neighbor, edge index) in edge-index order.
    adjacency: Vec<Vec<(usize, usize)>>,
}

/// An immutable simple undirected graph. Vertices are `0..n`, edges carry a
/// stable index equal to their position in the construction list.
#[derive(Clone)]
pub struct Graph {
    inner: Arc<Inner>,
}

impl Graph {
    /// Builds a graph from a vertex count and a list of endpoint pairs.
    /// Edge indices are assigned in input order.
    pub fn build(n: usize, edge_pairs: &[(usize, usize)]) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut ends = Vec::with_capacity(edge_pairs.len());
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edge_pairs {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { u, v });
            }
            if adjacency[u].iter().any(|&(w, _)| w == v) {
                return Err(GraphError::ParallelEdge { u, v });
            }
            let index = ends.len();
            ends.push((u, v));
            adjacency[u].push((v, index));
            adjacency[v].push((u, index));
        }
        Ok(Graph {
            inner: Arc::new(Inner {
                id: NEXT_GRAPH_ID.fetch_add(1, Ordering::Relaxed),
                n,
                ends,
                adjacency,
            }),
        })
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn m(&self) -> usize {
        self.inner.ends.len()
    }

    /// Identity token; two `Graph` values compare edge sets only if their
    /// tokens match.
    pub fn id(&self) -> u64 {
        self.inner.id
    }

    pub fn ends(&self, e: usize) -> (usize, usize) {
        self.inner.ends[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.inner.ends
    }

    /// `(neighbor, edge index)` pairs of `v`, in edge-index order.
    pub fn adjacency(&self, v: usize) -> &[(usize, usize)] {
        &self.inner.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.inner.adjacency[v].len()
    }

    /// Edge index of `{u, v}` if present.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.inner.adjacency[u]
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
    }

    /// True iff `|V| >= 3`, the graph is connected, and no single vertex
    /// removal disconnects it.
    pub fn is_two_vertex_connected(&self) -> bool {
        let n = self.n();
        if n < 3 {
            return false;
        }
        if !self.connected_without(None) {
            return false;
        }
        (0..n).all(|v| self.connected_without(Some(v)))
    }

    fn connected_without(&self, skip: Option<usize>) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let start = match (0..n).find(|&v| Some(v) != skip) {
            Some(s) => s,
            None => return true,
        };
        let mut stack = vec![start];
        seen[start] = true;
        let mut visited = 1;
        while let Some(v) = stack.pop() {
            for &(w, _) in self.adjacency(v) {
                if Some(w) != skip && !seen[w] {
                    seen[w] = true;
                    visited += 1;
                    stack.push(w);
                }
            }
        }
        let target = if skip.is_some() { n - 1 } else { n };
        visited == target
    }

    /// Subgraph induced by `vertices`, with maps from new vertex/edge indices
    /// back to the originals. Vertices are relabeled in the given order;
    /// edges keep their relative order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> (Graph, Vec<usize>, Vec<usize>) {
        let mut new_index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            new_index[v] = i;
        }
        let mut pairs = Vec::new();
        let mut edge_map = Vec::new();
        for (e, &(u, v)) in self.edges().iter().enumerate() {
            if new_index[u] != usize::MAX && new_index[v] != usize::MAX {
                pairs.push((new_index[u], new_index[v]));
                edge_map.push(e);
            }
        }
        let sub = Graph::build(vertices.len(), &pairs).expect("induced subgraph is simple");
        (sub, vertices.to_vec(), edge_map)
    }

    /// Parses the text format: first line `n m`, then `m` lines `u v`.
    /// Lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Graph, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (header_line, header) = lines.next().ok_or(ParseError::BadHeader { line: 1 })?;
        let mut parts = header.split_whitespace();
        let n: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or(ParseError::BadHeader { line: header_line })?;
        let m: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or(ParseError::BadHeader { line: header_line })?;
        if parts.next().is_some() {
            return Err(ParseError::BadHeader { line: header_line });
        }
        let mut pairs = Vec::with_capacity(m);
        for (line, text) in lines {
            let mut parts = text.split_whitespace();
            let u: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or(ParseError::BadEdgeLine { line })?;
            let v: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or(ParseError::BadEdgeLine { line })?;
            if parts.next().is_some() {
                return Err(ParseError::BadEdgeLine { line });
            }
            pairs.push((u, v));
        }
        if pairs.len() != m {
            return Err(ParseError::WrongEdgeCount {
                expected: m,
                found: pairs.len(),
            });
        }
        Ok(Graph::build(n, &pairs)?)
    }

    /// Inverse of [`Graph::parse`]: `parse(g.to_text())` reproduces `g`
    /// exactly, including edge order and endpoint order.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.m());
        for &(u, v) in self.edges() {
            out.push_str(&format!("{} {}\n", u, v));
        }
        out
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.inner.n == other.inner.n && self.inner.ends == other.inner.ends
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n(), self.m())
    }
}

/// A subset of one graph's edges, stored as a bitmap over edge indices.
#[derive(Clone)]
pub struct EdgeSet {
    graph: Graph,
    words: Vec<u64>,
    len: usize,
}

impl EdgeSet {
    pub fn empty(graph: &Graph) -> EdgeSet {
        EdgeSet {
            graph: graph.clone(),
            words: vec![0; graph.m().div_ceil(64)],
            len: 0,
        }
    }

    pub fn full(graph: &Graph) -> EdgeSet {
        let mut set = EdgeSet::empty(graph);
        for e in 0..graph.m() {
            set.insert(e);
        }
        set
    }

    pub fn from_indices(
        graph: &Graph,
        indices: impl IntoIterator<Item = usize>,
    ) -> Result<EdgeSet, GraphError> {
        let mut set = EdgeSet::empty(graph);
        for e in indices {
            if e >= graph.m() {
                return Err(GraphError::EdgeIndexOutOfRange {
                    index: e,
                    m: graph.m(),
                });
            }
            set.insert(e);
        }
        Ok(set)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, e: usize) -> bool {
        debug_assert!(e < self.graph.m());
        self.words[e / 64] >> (e % 64) & 1 == 1
    }

    /// Returns true if the edge was newly inserted.
    pub fn insert(&mut self, e: usize) -> bool {
        assert!(e < self.graph.m(), "edge index {e} out of range");
        let word = &mut self.words[e / 64];
        let bit = 1u64 << (e % 64);
        if *word & bit == 0 {
            *word |= bit;
            self.len += 1;
            true
        } else {
            false
        }
    }

    /// Returns true if the edge was present.
    pub fn remove(&mut self, e: usize) -> bool {
        assert!(e < self.graph.m(), "edge index {e} out of range");
        let word = &mut self.words[e / 64];
        let bit = 1u64 << (e % 64);
        if *word & bit != 0 {
            *word &= !bit;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    /// Member edge indices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.graph.m()).filter(|&e| self.contains(e))
    }

    /// Number of member edges incident to `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.graph
            .adjacency(v)
            .iter()
            .filter(|&&(_, e)| self.contains(e))
            .count()
    }

    fn check_same_graph(&self, other: &EdgeSet) {
        assert_eq!(
            self.graph.id(),
            other.graph.id(),
            "edge sets of different graphs combined"
        );
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        self.check_same_graph(other);
        let mut out = self.clone();
        for e in other.iter() {
            out.insert(e);
        }
        out
    }

    pub fn difference(&self, other: &EdgeSet) -> EdgeSet {
        self.check_same_graph(other);
        let mut out = self.clone();
        for e in other.iter() {
            out.remove(e);
        }
        out
    }

    /// Connected components of the spanning subgraph `(V, F)`. Isolated
    /// vertices form singleton components. Components are ordered by their
    /// minimum vertex and each lists its vertices in ascending order.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.graph.n();
        let mut comp = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for root in 0..n {
            if comp[root] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![root];
            comp[root] = id;
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                for &(w, e) in self.graph.adjacency(v) {
                    if self.contains(e) && comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Component id per vertex, matching the order of [`EdgeSet::components`].
    pub fn component_ids(&self) -> Vec<usize> {
        let n = self.graph.n();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        for root in 0..n {
            if comp[root] != usize::MAX {
                continue;
            }
            comp[root] = next;
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                for &(w, e) in self.graph.adjacency(v) {
                    if self.contains(e) && comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        let ids = self.component_ids();
        ids.iter().copied().max().map_or(0, |m| m + 1)
    }

    /// Bridges of `(V, F)`: member edges whose removal increases the number
    /// of connected components. Low-link traversal, `O(n + |F|)`; returned
    /// ascending.
    pub fn bridges(&self) -> Vec<usize> {
        let n = self.graph.n();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![usize::MAX; n];
        let mut out = Vec::new();
        let mut timer = 0;
        // frame: (vertex, edge used to enter, position in adjacency)
        let mut stack: Vec<(usize, usize, usize)> = Vec::new();
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            stack.push((root, usize::MAX, 0));
            while let Some(frame) = stack.last_mut() {
                let (v, enter_edge, pos) = (frame.0, frame.1, frame.2);
                if pos < self.graph.adjacency(v).len() {
                    frame.2 += 1;
                    let (w, e) = self.graph.adjacency(v)[pos];
                    if !self.contains(e) || e == enter_edge {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, e, 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(parent) = stack.last() {
                        let p = parent.0;
                        low[p] = low[p].min(low[v]);
                        if low[v] > disc[p] {
                            out.push(enter_edge);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// True iff `(V, F)` is connected on the whole vertex set and has no
    /// bridge. A connected piece that does not span all of `V` fails.
    pub fn is_two_edge_connected(&self) -> bool {
        self.component_count() == 1 && self.bridges().is_empty()
    }

    /// True iff no connected component of `F` is a triangle (3 vertices,
    /// 3 edges). A triangle inside a larger component is fine.
    pub fn is_triangle_free(&self) -> bool {
        let ids = self.component_ids();
        let count = ids.iter().copied().max().map_or(0, |m| m + 1);
        let mut vertices = vec![0usize; count];
        let mut edges = vec![0usize; count];
        for v in 0..self.graph.n() {
            vertices[ids[v]] += 1;
        }
        for e in self.iter() {
            edges[ids[self.graph.ends(e).0]] += 1;
        }
        (0..count).all(|c| !(vertices[c] == 3 && edges[c] == 3))
    }

    /// Full structural decomposition; see [`Decomposition`].
    pub fn decompose(&self) -> Decomposition {
        let n = self.graph.n();
        let components = self.components();
        let comp_ids = self.component_ids();
        let bridges = self.bridges();
        let mut is_bridge = vec![false; self.graph.m()];
        for &b in &bridges {
            is_bridge[b] = true;
        }
        // Pieces: components after deleting bridges. Every piece with at
        // least one edge is a maximal 2-edge-connected subgraph.
        let mut piece = vec![usize::MAX; n];
        let mut piece_vertices: Vec<Vec<usize>> = Vec::new();
        for root in 0..n {
            if piece[root] != usize::MAX {
                continue;
            }
            let id = piece_vertices.len();
            piece[root] = id;
            let mut members = vec![root];
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                for &(w, e) in self.graph.adjacency(v) {
                    if self.contains(e) && !is_bridge[e] && piece[w] == usize::MAX {
                        piece[w] = id;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            piece_vertices.push(members);
        }
        let mut piece_edges: Vec<Vec<usize>> = vec![Vec::new(); piece_vertices.len()];
        for e in self.iter() {
            if !is_bridge[e] {
                piece_edges[piece[self.graph.ends(e).0]].push(e);
            }
        }
        let mut incident_bridges = vec![0usize; piece_vertices.len()];
        let mut comp_has_bridge = vec![false; components.len()];
        for &b in &bridges {
            let (u, v) = self.graph.ends(b);
            incident_bridges[piece[u]] += 1;
            incident_bridges[piece[v]] += 1;
            comp_has_bridge[comp_ids[u]] = true;
        }
        let mut blocks = Vec::new();
        let mut twoec_components = Vec::new();
        for (id, vertices) in piece_vertices.into_iter().enumerate() {
            let edges = std::mem::take(&mut piece_edges[id]);
            if edges.is_empty() {
                continue;
            }
            if comp_has_bridge[comp_ids[vertices[0]]] {
                debug_assert!(vertices.len() >= 3);
                blocks.push(Block {
                    is_leaf: incident_bridges[id] == 1,
                    vertices,
                    edges,
                });
            } else {
                let cycle_len = (edges.len() == vertices.len()).then_some(vertices.len());
                twoec_components.push(TwoEcComponent {
                    vertices,
                    edges,
                    cycle_len,
                });
            }
        }
        blocks.sort_by_key(|b| b.vertices[0]);
        twoec_components.sort_by_key(|c| c.vertices[0]);
        Decomposition {
            components,
            bridges,
            blocks,
            twoec_components,
        }
    }
}

impl PartialEq for EdgeSet {
    fn eq(&self, other: &Self) -> bool {
        self.graph.id() == other.graph.id() && self.words == other.words
    }
}

impl Eq for EdgeSet {}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EdgeSet{:?}", self.iter().collect::<Vec<_>>())
    }
}

/// A maximal 2-edge-connected subgraph that is not a whole component.
/// Always has at least 3 vertices. Leaf blocks have exactly one incident
/// bridge.
#[derive(Debug, Clone)]
pub struct Block {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub is_leaf: bool,
}

/// A connected component that is itself 2-edge-connected. `cycle_len` is
/// `Some(i)` when the component is a cycle of length `i` (`|E| = |V| = i`).
#[derive(Debug, Clone)]
pub struct TwoEcComponent {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub cycle_len: Option<usize>,
}

impl TwoEcComponent {
    pub fn is_cycle(&self) -> bool {
        self.cycle_len.is_some()
    }

    pub fn is_triangle(&self) -> bool {
        self.cycle_len == Some(3)
    }
}

/// Structural decomposition of an edge set: vertex partition into connected
/// components, bridges, blocks with leaf/inner flags, and 2EC components
/// with cycle classification. Every member edge is in exactly one of:
/// bridges, a block, a 2EC component. Components, blocks and 2EC components
/// are ordered by minimum contained vertex.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub components: Vec<Vec<usize>>,
    pub bridges: Vec<usize>,
    pub blocks: Vec<Block>,
    pub twoec_components: Vec<TwoEcComponent>,
}

impl Decomposition {
    pub fn triangle_components(&self) -> impl Iterator<Item = &TwoEcComponent> {
        self.twoec_components.iter().filter(|c| c.is_triangle())
    }

    /// Total edges accounted for by bridges, blocks, and 2EC components.
    pub fn edge_total(&self) -> usize {
        self.bridges.len()
            + self.blocks.iter().map(|b| b.edges.len()).sum::<usize>()
            + self
                .twoec_components
                .iter()
                .map(|c| c.edges.len())
                .sum::<usize>()
    }
}
