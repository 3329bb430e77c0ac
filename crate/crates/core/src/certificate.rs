//! Conversions between connected bisections and feasible model assignments.
//!
//! [`build_certificate`] turns a connected balanced bisection into an integral
//! assignment of every model variable: each side gets a depth-first spanning
//! tree hung from the root vertex `0`, and the flow on a tree edge is the size
//! of the subtree below it, signed by the edge's canonical orientation.
//! [`decode_assignment`] goes the other way and trusts nothing but `x`.

use thiserror::Error;

use crate::formulation::{
    variable_layout, Assignment, EdgeKey, ExtendedGraph, FormulationError, MilpModel, VariableId,
    DEFAULT_TOLERANCE,
};
use crate::graph::{Bisection, CutReport, Graph, Infeasibility, Vertex, VertexSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertificateError {
    #[error("bisection is not feasible: {0}")]
    InfeasibleBisection(Infeasibility),
    #[error("assignment does not describe a feasible bisection: {0}")]
    InfeasibleAssignment(String),
    #[error(transparent)]
    Formulation(#[from] FormulationError),
}

/// How the tree root of each side is chosen.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum RootRule {
    /// Highest degree in the whole graph, ties to the smallest index.
    #[default]
    MaxDegree,
    /// Smallest vertex index.
    MinIndex,
}

impl RootRule {
    fn pick(self, g: &Graph, side: &VertexSet) -> Option<Vertex> {
        match self {
            RootRule::MinIndex => side.first().copied(),
            // max_by_key keeps the last maximum, so scan in descending order
            RootRule::MaxDegree => side.iter().rev().copied().max_by_key(|&v| g.degree(v)),
        }
    }
}

/// A feasible assignment witnessing one bisection.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub assignment: Assignment,
    /// Tree roots `(p, q)` with `p` in `V1` and `q` in `V2`.
    pub roots: (Vertex, Vertex),
    /// Edges of each rooted tree, including the star edge to its root.
    pub trees: (Vec<EdgeKey>, Vec<EdgeKey>),
}

/// Depth-first spanning tree of `side` from `root`, neighbours in ascending
/// order. Returns `(edge, flow)` for every tree edge.
fn tree_flows(g: &Graph, side: &VertexSet, root: Vertex) -> Vec<(EdgeKey, f64)> {
    let n = g.vertex_count();
    let mut parent: Vec<Option<Vertex>> = vec![None; n + 1];
    let mut visited = vec![false; n + 1];
    let mut preorder = Vec::with_capacity(side.len());
    // (vertex, position of the next neighbour to look at)
    let mut stack = vec![(root, 0usize)];
    visited[root] = true;
    preorder.push(root);
    while let Some((v, next)) = stack.last_mut() {
        let v = *v;
        let adj = g.neighbours(v);
        match adj[*next..]
            .iter()
            .position(|&(w, _)| side.contains(&w) && !visited[w])
        {
            Some(offset) => {
                let w = adj[*next + offset].0;
                *next += offset + 1;
                visited[w] = true;
                parent[w] = Some(v);
                preorder.push(w);
                stack.push((w, 0));
            }
            None => {
                stack.pop();
            }
        }
    }

    let mut size = vec![0usize; n + 1];
    for &v in preorder.iter().rev() {
        size[v] += 1;
        if let Some(p) = parent[v] {
            size[p] += size[v];
        }
    }
    preorder
        .iter()
        .filter_map(|&child| {
            let p = parent[child]?;
            let flow = size[child] as f64;
            Some(if p < child {
                (EdgeKey::new(p, child), flow)
            } else {
                (EdgeKey::new(child, p), -flow)
            })
        })
        .collect()
}

pub fn build_certificate(
    eg: &ExtendedGraph,
    b: &Bisection,
) -> Result<Certificate, CertificateError> {
    build_certificate_with(eg, b, RootRule::default())
}

pub fn build_certificate_with(
    eg: &ExtendedGraph,
    b: &Bisection,
    rule: RootRule,
) -> Result<Certificate, CertificateError> {
    use VariableId::*;

    let g = &eg.base;
    g.check_bisection(b)
        .map_err(CertificateError::InfeasibleBisection)?;

    let mut a = Assignment::new();
    for v in variable_layout(eg) {
        a.set(v.id, 0.0);
    }
    for &v in &b.side_one {
        a.set(Member(v), 1.0);
    }
    let mask = g
        .membership(&b.side_one)
        .map_err(|_| CertificateError::InfeasibleBisection(Infeasibility::NotAPartition))?;
    let cut = g.cut_report(&mask);
    for &(i, j) in &cut.cut_edges {
        a.set(Cut(EdgeKey::new(i, j)), 1.0);
    }
    a.set(Objective, cut.weight);

    let mut roots = [0; 2];
    let mut trees: [Vec<EdgeKey>; 2] = Default::default();
    for (slot, side) in [&b.side_one, &b.side_two].into_iter().enumerate() {
        let root = rule
            .pick(g, side)
            .ok_or(CertificateError::InfeasibleBisection(
                Infeasibility::NotAPartition,
            ))?;
        roots[slot] = root;
        let star = EdgeKey::star(root);
        let mut edges = vec![(star, side.len() as f64)];
        edges.extend(tree_flows(g, side, root));
        for (e, flow) in edges {
            a.set(if slot == 0 { TreeOne(e) } else { TreeTwo(e) }, 1.0);
            a.set(Flow(e), flow);
            trees[slot].push(e);
        }
    }
    let [t1, t2] = trees;
    Ok(Certificate {
        assignment: a,
        roots: (roots[0], roots[1]),
        trees: (t1, t2),
    })
}

/// Recovers the bisection encoded by `x`, recomputing the cut from the graph.
pub fn decode_assignment(
    model: &MilpModel,
    a: &Assignment,
) -> Result<(Bisection, CutReport), CertificateError> {
    decode_assignment_with_tol(model, a, DEFAULT_TOLERANCE)
}

pub fn decode_assignment_with_tol(
    model: &MilpModel,
    a: &Assignment,
    tol: f64,
) -> Result<(Bisection, CutReport), CertificateError> {
    let g = &model.graph;
    let mut b = Bisection {
        side_one: VertexSet::new(),
        side_two: VertexSet::new(),
    };
    for v in g.vertices() {
        let id = VariableId::Member(v);
        let x = a.get(id).ok_or(FormulationError::MissingVariable(id))?;
        if (x - 1.0).abs() <= tol {
            b.side_one.insert(v);
        } else if x.abs() <= tol {
            b.side_two.insert(v);
        } else {
            return Err(CertificateError::InfeasibleAssignment(format!(
                "{id} = {x} is not binary"
            )));
        }
    }
    g.check_bisection(&b)
        .map_err(|e| CertificateError::InfeasibleAssignment(e.to_string()))?;
    let b = b.canonical();
    let mask = g
        .membership(&b.side_one)
        .map_err(|e| CertificateError::InfeasibleAssignment(e.to_string()))?;
    let cut = g.cut_report(&mask);
    Ok((b, cut))
}

/// Checks the root-flow property: exactly two star edges carry flow, each
/// equal to `n/2`, and their heads lie on opposite sides.
pub fn verify_lemma1(c: &Certificate) -> bool {
    let a = &c.assignment;
    let n = a
        .iter()
        .filter(|(id, _)| matches!(id, VariableId::Member(_)))
        .count();
    let half = n as f64 / 2.0;
    let loaded: Vec<(Vertex, f64)> = a
        .iter()
        .filter_map(|(id, value)| match id {
            VariableId::Flow(e) if e.is_star() && value != 0.0 => Some((e.head, value)),
            _ => None,
        })
        .collect();
    let [(p, fp), (q, fq)] = loaded.as_slice() else {
        return false;
    };
    let side = |v: Vertex| a.get(VariableId::Member(v));
    *fp == half && *fq == half && side(*p).is_some() && side(*q).is_some() && side(*p) != side(*q)
}
