//! Undirected graphs with vector-valued edge weights.
//!
//! Vertices are numbered `1..=n`. Every edge is stored with its endpoints in
//! canonical orientation (`tail < head`), and the edge list is kept sorted, so
//! that edge indices are stable and the flow constraints of the MILP model can
//! refer to a fixed direction.
//!
//! The cut of a vertex set `S` is the set of edges with exactly one endpoint
//! in `S`; its multidimensional weight is the minimum, over coordinates, of the
//! per-coordinate weight sums.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// A vertex identifier. Original vertices are `1..=n`; `0` is reserved for the
/// artificial root of the extended graph.
pub type Vertex = usize;

/// An ordered set of vertices.
pub type VertexSet = BTreeSet<Vertex>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("graph needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("edge ({tail},{head}): coordinate {coordinate} has weight {value}, weights must be finite and strictly positive")]
    NonPositiveWeight {
        tail: Vertex,
        head: Vertex,
        coordinate: usize,
        value: f64,
    },
    #[error("weight vector has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge ({0},{1})")]
    DuplicateEdge(Vertex, Vertex),
    #[error("vertex {vertex} is outside 1..={n}")]
    BadEndpoint { vertex: Vertex, n: usize },
    #[error("vertex set is empty")]
    EmptySet,
}

/// The weight of one edge: `k >= 1` strictly positive coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(values: Vec<f64>) -> Result<Self, GraphError> {
        if values.is_empty() {
            return Err(GraphError::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if let Some((coordinate, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(GraphError::NonPositiveWeight {
                tail: 0,
                head: 0,
                coordinate: coordinate + 1,
                value,
            });
        }
        Ok(WeightVector(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// The smallest coordinate.
    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub tail: Vertex,
    pub head: Vertex,
    pub weight: WeightVector,
}

impl Edge {
    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.tail, self.head)
    }
}

/// Immutable weighted graph.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    k: usize,
    edges: Vec<Edge>,
    // adjacency[v] = (neighbour, edge index), sorted by neighbour; slot 0 unused
    adjacency: Vec<Vec<(Vertex, usize)>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.k == other.k && self.edges == other.edges
    }
}

/// Which side of a bisection a vertex sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    One,
    Two,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::One => f.write_str("V1"),
            Side::Two => f.write_str("V2"),
        }
    }
}

/// Edges of a cut together with their per-coordinate sums.
#[derive(Debug, Clone, PartialEq)]
pub struct CutReport {
    pub cut_edges: Vec<(Vertex, Vertex)>,
    pub coordinate_sums: Vec<f64>,
    /// Minimum of `coordinate_sums`; 0 for an empty cut.
    pub weight: f64,
}

/// A two-colouring of the vertex set.
///
/// The type does not enforce balance or connectivity, so malformed candidates
/// can be represented and rejected by [`Graph::is_feasible_bisection`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bisection {
    pub side_one: VertexSet,
    pub side_two: VertexSet,
}

impl Bisection {
    /// Builds the bisection `(side, V \ side)` over `1..=n`, relabelled so
    /// that vertex 1 lies in `side_one`.
    pub fn from_side(n: usize, side: impl IntoIterator<Item = Vertex>) -> Self {
        let side_one: VertexSet = side.into_iter().collect();
        let side_two: VertexSet = (1..=n).filter(|v| !side_one.contains(v)).collect();
        Bisection { side_one, side_two }.canonical()
    }

    /// Swaps the sides if vertex 1 is not in `side_one`.
    pub fn canonical(self) -> Self {
        if !self.side_one.contains(&1) && self.side_two.contains(&1) {
            Bisection {
                side_one: self.side_two,
                side_two: self.side_one,
            }
        } else {
            self
        }
    }

    /// True if both bisections describe the same unordered pair of sides.
    pub fn same_partition(&self, other: &Bisection) -> bool {
        (self.side_one == other.side_one && self.side_two == other.side_two)
            || (self.side_one == other.side_two && self.side_two == other.side_one)
    }

    pub fn side_of(&self, v: Vertex) -> Option<Side> {
        if self.side_one.contains(&v) {
            Some(Side::One)
        } else if self.side_two.contains(&v) {
            Some(Side::Two)
        } else {
            None
        }
    }
}

/// Why a candidate bisection is not feasible.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Infeasibility {
    #[error("sides do not partition the vertex set")]
    NotAPartition,
    #[error("sides have sizes {0} and {1}, expected n/2 each")]
    Unbalanced(usize, usize),
    #[error("side {0} induces a disconnected subgraph")]
    Disconnected(Side),
}

impl Graph {
    /// Builds a graph, inferring the weight dimension from the first edge
    /// (an edgeless graph gets `k = 1`).
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex, Vec<f64>)>,
    {
        let edges: Vec<_> = edges.into_iter().collect();
        let k = edges.first().map_or(1, |e| e.2.len().max(1));
        Self::with_dimension(n, k, edges)
    }

    /// Builds a graph whose weight vectors must all have exactly `k` coordinates.
    pub fn with_dimension<I>(n: usize, k: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex, Vec<f64>)>,
    {
        if n < 2 {
            return Err(GraphError::TooFewVertices(n));
        }
        if k == 0 {
            return Err(GraphError::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        let mut list = Vec::new();
        for (a, b, w) in edges {
            for v in [a, b] {
                if v == 0 || v > n {
                    return Err(GraphError::BadEndpoint { vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if w.len() != k {
                return Err(GraphError::DimensionMismatch {
                    expected: k,
                    found: w.len(),
                });
            }
            let (tail, head) = (a.min(b), a.max(b));
            let weight = WeightVector::new(w).map_err(|e| match e {
                GraphError::NonPositiveWeight {
                    coordinate, value, ..
                } => GraphError::NonPositiveWeight {
                    tail,
                    head,
                    coordinate,
                    value,
                },
                other => other,
            })?;
            list.push(Edge { tail, head, weight });
        }
        list.sort_by_key(Edge::endpoints);
        if let Some(w) = list
            .windows(2)
            .find(|w| w[0].endpoints() == w[1].endpoints())
        {
            return Err(GraphError::DuplicateEdge(w[0].tail, w[0].head));
        }
        let mut adjacency = vec![Vec::new(); n + 1];
        for (idx, e) in list.iter().enumerate() {
            adjacency[e.tail].push((e.head, idx));
            adjacency[e.head].push((e.tail, idx));
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        Ok(Graph {
            n,
            k,
            edges: list,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Weight dimension `k`.
    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n
    }

    /// Neighbours of `v` in ascending order, paired with the connecting edge index.
    pub fn neighbours(&self, v: Vertex) -> &[(Vertex, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    /// Index of edge `{a, b}` in [`Graph::edges`], if present.
    pub fn edge_index(&self, a: Vertex, b: Vertex) -> Option<usize> {
        if a == 0 || a > self.n {
            return None;
        }
        self.adjacency[a]
            .binary_search_by_key(&b, |&(w, _)| w)
            .ok()
            .map(|pos| self.adjacency[a][pos].1)
    }

    /// Per-coordinate sum of all edge weights.
    pub fn total_weight(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.k];
        for e in &self.edges {
            for (s, w) in sums.iter_mut().zip(e.weight.values()) {
                *s += w;
            }
        }
        sums
    }

    /// Membership mask of length `n + 1` (slot 0 unused).
    pub fn membership(&self, s: &VertexSet) -> Result<Vec<bool>, GraphError> {
        let mut mask = vec![false; self.n + 1];
        for &v in s {
            if v == 0 || v > self.n {
                return Err(GraphError::BadEndpoint {
                    vertex: v,
                    n: self.n,
                });
            }
            mask[v] = true;
        }
        Ok(mask)
    }

    /// Edges with exactly one endpoint in `s`, in canonical edge order.
    pub fn cut_edges(&self, s: &VertexSet) -> Result<Vec<(Vertex, Vertex)>, GraphError> {
        let mask = self.membership(s)?;
        Ok(self
            .cut_indices(&mask)
            .map(|i| self.edges[i].endpoints())
            .collect())
    }

    pub fn cut_weight(&self, s: &VertexSet) -> Result<CutReport, GraphError> {
        let mask = self.membership(s)?;
        Ok(self.cut_report(&mask))
    }

    /// Whether the subgraph induced by `s` is connected.
    pub fn is_connected(&self, s: &VertexSet) -> Result<bool, GraphError> {
        if s.is_empty() {
            return Err(GraphError::EmptySet);
        }
        let mask = self.membership(s)?;
        Ok(self.induces_connected(&mask))
    }

    pub fn is_feasible_bisection(&self, b: &Bisection) -> bool {
        self.check_bisection(b).is_ok()
    }

    /// Like [`Graph::is_feasible_bisection`], but reports the first failed condition.
    pub fn check_bisection(&self, b: &Bisection) -> Result<(), Infeasibility> {
        let in_range = |s: &VertexSet| s.iter().all(|&v| v >= 1 && v <= self.n);
        if !in_range(&b.side_one)
            || !in_range(&b.side_two)
            || b.side_one.len() + b.side_two.len() != self.n
            || !b.side_one.is_disjoint(&b.side_two)
        {
            return Err(Infeasibility::NotAPartition);
        }
        let (a, c) = (b.side_one.len(), b.side_two.len());
        if !self.n.is_multiple_of(2) || a != c {
            return Err(Infeasibility::Unbalanced(a, c));
        }
        for (side, set) in [(Side::One, &b.side_one), (Side::Two, &b.side_two)] {
            // membership cannot fail after the range check
            let mask = self
                .membership(set)
                .map_err(|_| Infeasibility::NotAPartition)?;
            if !self.induces_connected(&mask) {
                return Err(Infeasibility::Disconnected(side));
            }
        }
        Ok(())
    }

    pub(crate) fn cut_indices<'a>(&'a self, mask: &'a [bool]) -> impl Iterator<Item = usize> + 'a {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| mask[e.tail] != mask[e.head])
            .map(|(i, _)| i)
    }

    pub(crate) fn cut_report(&self, mask: &[bool]) -> CutReport {
        let mut coordinate_sums = vec![0.0; self.k];
        let mut cut_edges = Vec::new();
        for i in self.cut_indices(mask) {
            let e = &self.edges[i];
            cut_edges.push(e.endpoints());
            for (s, w) in coordinate_sums.iter_mut().zip(e.weight.values()) {
                *s += w;
            }
        }
        let weight = if cut_edges.is_empty() {
            0.0
        } else {
            coordinate_sums
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min)
        };
        CutReport {
            cut_edges,
            coordinate_sums,
            weight,
        }
    }

    /// Multidimensional cut weight of a membership mask without collecting edges.
    pub(crate) fn mask_weight(&self, mask: &[bool], scratch: &mut [f64]) -> f64 {
        scratch.iter_mut().for_each(|s| *s = 0.0);
        let mut any = false;
        for e in &self.edges {
            if mask[e.tail] != mask[e.head] {
                any = true;
                for (s, w) in scratch.iter_mut().zip(e.weight.values()) {
                    *s += w;
                }
            }
        }
        if any {
            scratch.iter().copied().fold(f64::INFINITY, f64::min)
        } else {
            0.0
        }
    }

    /// Connectivity of the subgraph induced by the `true` entries of `mask`.
    /// An empty set counts as connected.
    pub(crate) fn induces_connected(&self, mask: &[bool]) -> bool {
        let Some(start) = (1..=self.n).find(|&v| mask[v]) else {
            return true;
        };
        let total = mask.iter().skip(1).filter(|&&m| m).count();
        self.reach_count(start, |v| mask[v]) == total
    }

    /// Number of vertices reachable from `start` while staying inside `allowed`.
    pub(crate) fn reach_count(&self, start: Vertex, allowed: impl Fn(Vertex) -> bool) -> usize {
        let mut seen = vec![false; self.n + 1];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &self.adjacency[v] {
                if !seen[w] && allowed(w) {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(vs: &[Vertex]) -> VertexSet {
        vs.iter().copied().collect()
    }

    fn cycle4() -> Graph {
        Graph::new(
            4,
            vec![
                (1, 2, vec![1.0, 5.0]),
                (2, 3, vec![4.0, 1.0]),
                (3, 4, vec![3.0, 3.0]),
                (1, 4, vec![2.0, 2.0]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn smallest_graph() {
        let g = Graph::new(2, vec![(2, 1, vec![5.0, 3.0])]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.dimension(), 2);
        assert_eq!(g.edges()[0].endpoints(), (1, 2));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            Graph::new(3, vec![(1, 1, vec![1.0])]),
            Err(GraphError::SelfLoop(1))
        );
        assert_eq!(
            Graph::new(3, vec![(1, 4, vec![1.0])]),
            Err(GraphError::BadEndpoint { vertex: 4, n: 3 })
        );
        assert_eq!(
            Graph::new(3, vec![(1, 2, vec![1.0]), (2, 1, vec![2.0])]),
            Err(GraphError::DuplicateEdge(1, 2))
        );
        assert_eq!(
            Graph::new(3, vec![(1, 2, vec![1.0]), (2, 3, vec![2.0, 1.0])]),
            Err(GraphError::DimensionMismatch {
                expected: 1,
                found: 2
            })
        );
        assert!(matches!(
            Graph::new(3, vec![(2, 3, vec![1.0, 0.0])]),
            Err(GraphError::NonPositiveWeight {
                tail: 2,
                head: 3,
                coordinate: 2,
                ..
            })
        ));
        assert!(matches!(
            Graph::new(3, vec![(2, 3, vec![-1.0])]),
            Err(GraphError::NonPositiveWeight { .. })
        ));
        assert!(matches!(
            Graph::new(3, vec![(2, 3, vec![f64::NAN])]),
            Err(GraphError::NonPositiveWeight { .. })
        ));
        assert_eq!(Graph::new(1, vec![]), Err(GraphError::TooFewVertices(1)));
    }

    #[test]
    fn edges_sorted_canonically() {
        let g = Graph::new(
            4,
            vec![(4, 3, vec![1.0]), (2, 1, vec![1.0]), (3, 1, vec![1.0])],
        )
        .unwrap();
        let ends: Vec<_> = g.edges().iter().map(Edge::endpoints).collect();
        assert_eq!(ends, vec![(1, 2), (1, 3), (3, 4)]);
        assert_eq!(g.edge_index(3, 1), Some(1));
        assert_eq!(g.edge_index(2, 4), None);
    }

    #[test]
    fn four_cycle_cut() {
        let g = cycle4();
        assert_eq!(g.cut_edges(&set(&[2, 3])).unwrap(), vec![(1, 2), (3, 4)]);
        assert_eq!(g.cut_edges(&set(&[])).unwrap(), vec![]);
        let r = g.cut_weight(&set(&[2, 3])).unwrap();
        assert_eq!(r.coordinate_sums, vec![4.0, 8.0]);
        assert_eq!(r.weight, 4.0);
        assert!(matches!(
            g.cut_edges(&set(&[7])),
            Err(GraphError::BadEndpoint { vertex: 7, .. })
        ));
    }

    #[test]
    fn empty_cut_weighs_zero() {
        let g = cycle4();
        let r = g.cut_weight(&set(&[1, 2, 3, 4])).unwrap();
        assert!(r.cut_edges.is_empty());
        assert_eq!(r.coordinate_sums, vec![0.0, 0.0]);
        assert_eq!(r.weight, 0.0);
    }

    #[test]
    fn single_edge_takes_min_coordinate() {
        let g = Graph::new(2, vec![(1, 2, vec![5.0, 3.0])]).unwrap();
        let r = g.cut_weight(&set(&[1])).unwrap();
        assert_eq!(r.coordinate_sums, vec![5.0, 3.0]);
        assert_eq!(r.weight, 3.0);
    }

    #[test]
    fn connectivity() {
        let g = cycle4();
        assert!(!g.is_connected(&set(&[1, 3])).unwrap());
        assert!(g.is_connected(&set(&[3])).unwrap());
        assert!(g.is_connected(&set(&[1, 2, 3])).unwrap());
        assert_eq!(g.is_connected(&set(&[])), Err(GraphError::EmptySet));
    }

    #[test]
    fn feasibility() {
        let g = cycle4();
        assert!(!g.is_feasible_bisection(&Bisection::from_side(4, [1, 3])));
        assert_eq!(
            g.check_bisection(&Bisection::from_side(4, [1, 3])),
            Err(Infeasibility::Disconnected(Side::One))
        );
        assert!(g.is_feasible_bisection(&Bisection::from_side(4, [1, 2])));
        assert_eq!(
            g.check_bisection(&Bisection::from_side(4, [1])),
            Err(Infeasibility::Unbalanced(1, 3))
        );
        let overlapping = Bisection {
            side_one: set(&[1, 2]),
            side_two: set(&[2, 3]),
        };
        assert!(!g.is_feasible_bisection(&overlapping));

        let pair = Graph::new(2, vec![(1, 2, vec![1.0])]).unwrap();
        assert!(pair.is_feasible_bisection(&Bisection::from_side(2, [1])));
    }

    #[test]
    fn canonical_labelling() {
        let b = Bisection::from_side(6, [2, 3, 4]);
        assert_eq!(b.side_one, set(&[1, 5, 6]));
        assert_eq!(b.side_two, set(&[2, 3, 4]));
        assert!(b.same_partition(&Bisection {
            side_one: set(&[2, 3, 4]),
            side_two: set(&[1, 5, 6])
        }));
    }
}
