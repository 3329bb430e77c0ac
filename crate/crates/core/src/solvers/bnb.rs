//! Depth-first branch-and-bound over vertex memberships.
//!
//! Vertices are decided in index order, `V1` branch first, so leaves are met
//! in lexicographic order of `V1`; a node is pruned when its bound does not
//! beat the incumbent, which keeps the lexicographically smallest optimum.
//!
//! The bound is `min_l (cut_l + open_l)`, where `cut_l` sums coordinate `l`
//! over decided cut edges and `open_l` over edges with an undecided endpoint.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use super::{require_even, solution_from_mask, SolveError, SolveReport, Status};
use crate::graph::{Graph, Side, Vertex};

/// Snapshot of one search node, handed to an observer.
#[derive(Debug)]
pub struct NodeTrace<'a> {
    /// Decision per vertex (slot 0 unused).
    pub sides: &'a [Option<Side>],
    pub upper_bound: f64,
}

type Observer<'o> = Box<dyn FnMut(&NodeTrace<'_>) + 'o>;

pub struct BranchAndBound<'g, 'o> {
    graph: &'g Graph,
    time_limit: Option<Duration>,
    observer: Option<Observer<'o>>,
}

impl<'g, 'o> BranchAndBound<'g, 'o> {
    pub fn new(graph: &'g Graph) -> Self {
        BranchAndBound {
            graph,
            time_limit: None,
            observer: None,
        }
    }

    pub fn time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }

    /// Calls `f` at every node, before pruning.
    pub fn observe(mut self, f: impl FnMut(&NodeTrace<'_>) + 'o) -> Self {
        self.observer = Some(Box::new(f));
        self
    }

    pub fn solve(self) -> Result<SolveReport, SolveError> {
        let g = self.graph;
        require_even(g)?;
        let start = Instant::now();
        let n = g.vertex_count();
        let mut search = Search {
            g,
            half: n / 2,
            sides: vec![None; n + 1],
            counts: [0, 0],
            cut: vec![0.0; g.dimension()],
            open: g.total_weight(),
            best: None,
            nodes: 0,
            deadline: self.time_limit.map(|d| start + d),
            aborted: false,
            observer: self.observer,
        };
        search.assign(1, Side::One);
        search.descend(2);

        let aborted = search.aborted;
        let best = search.best.map(|(_, mask)| solution_from_mask(g, &mask));
        let status = match (&best, aborted) {
            (Some(_), false) => Status::Optimal,
            (None, false) => Status::Infeasible,
            (Some(_), true) => Status::Feasible,
            (None, true) => Status::Unknown,
        };
        Ok(SolveReport {
            status,
            best,
            nodes_explored: search.nodes,
            elapsed: start.elapsed(),
            optimality_proved: !aborted,
        })
    }
}

/// Exact search; `None` means no time limit.
pub fn branch_and_bound_solve(
    g: &Graph,
    time_limit: Option<Duration>,
) -> Result<SolveReport, SolveError> {
    let mut bnb = BranchAndBound::new(g);
    if let Some(limit) = time_limit {
        bnb = bnb.time_limit(limit);
    }
    bnb.solve()
}

struct Search<'g, 'o> {
    g: &'g Graph,
    half: usize,
    sides: Vec<Option<Side>>,
    counts: [usize; 2],
    cut: Vec<f64>,
    open: Vec<f64>,
    best: Option<(f64, Vec<bool>)>,
    nodes: u64,
    deadline: Option<Instant>,
    aborted: bool,
    observer: Option<Observer<'o>>,
}

fn slot(side: Side) -> usize {
    match side {
        Side::One => 0,
        Side::Two => 1,
    }
}

impl Search<'_, '_> {
    fn assign(&mut self, v: Vertex, side: Side) {
        self.sides[v] = Some(side);
        self.counts[slot(side)] += 1;
        for &(w, e) in self.g.neighbours(v) {
            let Some(other) = self.sides[w] else { continue };
            let weights = self.g.edges()[e].weight.values();
            for (o, x) in self.open.iter_mut().zip(weights) {
                *o -= x;
            }
            if other != side {
                for (c, x) in self.cut.iter_mut().zip(weights) {
                    *c += x;
                }
            }
        }
    }

    fn unassign(&mut self, v: Vertex) {
        if let Some(side) = self.sides[v].take() {
            self.counts[slot(side)] -= 1;
        }
    }

    fn upper_bound(&self) -> f64 {
        self.cut
            .iter()
            .zip(&self.open)
            .map(|(c, o)| c + o)
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether each partial side can still end up connected: all of its
    /// vertices must lie in one component of the graph induced by the side
    /// plus (if the side is not yet full) the undecided vertices.
    fn sides_can_connect(&self) -> bool {
        [Side::One, Side::Two].into_iter().all(|side| {
            let members = self.counts[slot(side)];
            let Some(start) = (1..self.sides.len()).find(|&v| self.sides[v] == Some(side)) else {
                return true;
            };
            let full = members == self.half;
            let allowed = |v: Vertex| match self.sides[v] {
                Some(s) => s == side,
                None => !full,
            };
            let mut seen = vec![false; self.sides.len()];
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            let mut reached = 0;
            while let Some(v) = queue.pop_front() {
                if self.sides[v] == Some(side) {
                    reached += 1;
                }
                for &(w, _) in self.g.neighbours(v) {
                    if !seen[w] && allowed(w) {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            reached == members
        })
    }

    fn descend(&mut self, next: Vertex) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.aborted = true;
                    return;
                }
            }
        }

        let bound = self.upper_bound();
        if let Some(observer) = self.observer.as_mut() {
            observer(&NodeTrace {
                sides: &self.sides,
                upper_bound: bound,
            });
        }
        if matches!(&self.best, Some((w, _)) if bound <= *w) {
            return;
        }
        if !self.sides_can_connect() {
            return;
        }
        if next == self.sides.len() {
            // every edge is decided, so the bound is the exact weight
            let mask = self.sides.iter().map(|s| *s == Some(Side::One)).collect();
            self.best = Some((bound, mask));
            return;
        }
        for side in [Side::One, Side::Two] {
            if self.counts[slot(side)] < self.half {
                let saved = (self.cut.clone(), self.open.clone());
                self.assign(next, side);
                self.descend(next + 1);
                self.unassign(next);
                (self.cut, self.open) = saved;
            }
        }
    }
}
