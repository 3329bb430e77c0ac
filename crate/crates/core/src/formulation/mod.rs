//! Flow-based MILP model for the connected multidimensional maximum bisection.
//!
//! The model lives on the extended graph: the original vertices plus a root
//! vertex `0` joined to every original vertex by a star edge. Variables:
//!
//! | name      | index | meaning                                          |
//! |-----------|-------|--------------------------------------------------|
//! | `x_i`     | V     | 1 iff vertex `i` is in `V1`                      |
//! | `t_i_j`   | E     | 1 iff edge `(i,j)` is in the cut                 |
//! | `y_i_j`   | Ē     | 1 iff the edge is in the rooted tree of `V1`     |
//! | `z_i_j`   | Ē     | 1 iff the edge is in the rooted tree of `V2`     |
//! | `u_i_j`   | Ē     | signed flow along the edge, in `[-n/2, n/2]`     |
//! | `U`       |       | objective, the multidimensional cut weight       |
//!
//! Every row carries the tag of the constraint family it instantiates
//! (7 to 21), and rows are named `c<tag>_<running index>`.

mod lp;
mod solution;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, Vertex};

pub use lp::{emit_lp, parse_lp};
pub use solution::read_external_solution;

/// Default tolerance for checking externally produced solutions.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormulationError {
    #[error("the model needs an even number of vertices, got {0}")]
    OddVertexCount(usize),
    #[error("assignment has no value for variable {0}")]
    MissingVariable(VariableId),
    #[error("unknown variable name `{0}`")]
    UnknownVariableName(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// An edge of the extended graph; `tail == 0` for star edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey {
    pub tail: Vertex,
    pub head: Vertex,
}

impl EdgeKey {
    pub fn new(tail: Vertex, head: Vertex) -> Self {
        EdgeKey { tail, head }
    }

    pub fn star(head: Vertex) -> Self {
        EdgeKey { tail: 0, head }
    }

    pub fn is_star(&self) -> bool {
        self.tail == 0
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.tail, self.head)
    }
}

/// The graph plus the root vertex `0` and star edges `(0, i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedGraph {
    pub base: Graph,
    pub star_edges: Vec<EdgeKey>,
}

impl ExtendedGraph {
    pub fn new(base: Graph) -> Self {
        let star_edges = base.vertices().map(EdgeKey::star).collect();
        ExtendedGraph { base, star_edges }
    }

    /// Original edges in canonical order followed by the star edges.
    pub fn edges(&self) -> impl Iterator<Item = EdgeKey> + '_ {
        self.base
            .edges()
            .iter()
            .map(|e| EdgeKey::new(e.tail, e.head))
            .chain(self.star_edges.iter().copied())
    }

    pub fn edge_count(&self) -> usize {
        self.base.edge_count() + self.star_edges.len()
    }
}

pub fn extend_graph(g: &Graph) -> ExtendedGraph {
    ExtendedGraph::new(g.clone())
}

/// Identifies one model variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VariableId {
    /// `U`
    Objective,
    /// `x_i`
    Member(Vertex),
    /// `t_e`
    Cut(EdgeKey),
    /// `y_e`
    TreeOne(EdgeKey),
    /// `z_e`
    TreeTwo(EdgeKey),
    /// `u_e`
    Flow(EdgeKey),
}

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (prefix, e) = match self {
            VariableId::Objective => return f.write_str("U"),
            VariableId::Member(v) => return write!(f, "x_{v}"),
            VariableId::Cut(e) => ("t", e),
            VariableId::TreeOne(e) => ("y", e),
            VariableId::TreeTwo(e) => ("z", e),
            VariableId::Flow(e) => ("u", e),
        };
        write!(f, "{prefix}_{}_{}", e.tail, e.head)
    }
}

impl FromStr for VariableId {
    type Err = FormulationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || FormulationError::UnknownVariableName(s.to_string());
        if s == "U" {
            return Ok(VariableId::Objective);
        }
        let mut parts = s.split('_');
        let kind = parts.next().ok_or_else(unknown)?;
        let idx: Vec<Vertex> = parts
            .map(|p| p.parse::<Vertex>().map_err(|_| unknown()))
            .collect::<Result<_, _>>()?;
        match (kind, idx.as_slice()) {
            ("x", &[v]) => Ok(VariableId::Member(v)),
            ("t", &[a, b]) => Ok(VariableId::Cut(EdgeKey::new(a, b))),
            ("y", &[a, b]) => Ok(VariableId::TreeOne(EdgeKey::new(a, b))),
            ("z", &[a, b]) => Ok(VariableId::TreeTwo(EdgeKey::new(a, b))),
            ("u", &[a, b]) => Ok(VariableId::Flow(EdgeKey::new(a, b))),
            _ => Err(unknown()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Binary,
    Continuous { lower: f64, upper: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub id: VariableId,
    pub domain: Domain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        })
    }
}

/// Constraint family; the discriminant is the number of the displayed
/// constraint it instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Tag {
    /// `U <= Σ_e w_el t_e`, one row per coordinate.
    CutWeight = 7,
    /// `x_i + x_j - t_e >= 0`
    CutLower = 8,
    /// `x_i + x_j + t_e <= 2`
    CutUpper = 9,
    /// `Σ x_i = n/2`
    Balance = 10,
    /// `y_e <= x_i/2 + x_j/2` on original edges.
    TreeOneEdge = 11,
    /// `z_e <= 1 - x_i/2 - x_j/2` on original edges.
    TreeTwoEdge = 12,
    /// `y_(0,i) <= x_i`
    TreeOneRoot = 13,
    /// `z_(0,i) <= 1 - x_i`
    TreeTwoRoot = 14,
    /// `u_e <= n/2 y_e + n/2 z_e`
    FlowUpper = 15,
    /// `u_e >= -n/2 y_e - n/2 z_e`
    FlowLower = 16,
    /// Inflow minus outflow equals 1 at every original vertex.
    FlowConservation = 17,
    /// Total flow out of the root equals `n`.
    RootOutflow = 18,
    /// `Σ_{e in E} y_e = n/2 - 1`
    TreeOneSize = 19,
    /// `Σ_{e in E} z_e = n/2 - 1`
    TreeTwoSize = 20,
    /// Exactly two star edges are used.
    RootDegree = 21,
}

impl Tag {
    pub const ALL: [Tag; 15] = [
        Tag::CutWeight,
        Tag::CutLower,
        Tag::CutUpper,
        Tag::Balance,
        Tag::TreeOneEdge,
        Tag::TreeTwoEdge,
        Tag::TreeOneRoot,
        Tag::TreeTwoRoot,
        Tag::FlowUpper,
        Tag::FlowLower,
        Tag::FlowConservation,
        Tag::RootOutflow,
        Tag::TreeOneSize,
        Tag::TreeTwoSize,
        Tag::RootDegree,
    ];

    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn from_number(n: u8) -> Option<Tag> {
        Tag::ALL.into_iter().find(|t| t.number() == n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    pub tag: Tag,
    /// 1-based running index within the tag.
    pub index: usize,
    pub terms: Vec<(VariableId, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl LinearConstraint {
    /// Row name, e.g. `c17_4`.
    pub fn name(&self) -> String {
        format!("c{}_{}", self.tag.number(), self.index)
    }

    pub fn lhs(&self, a: &Assignment) -> Result<f64, FormulationError> {
        self.terms.iter().try_fold(0.0, |acc, &(id, c)| {
            a.get(id)
                .map(|v| acc + c * v)
                .ok_or(FormulationError::MissingVariable(id))
        })
    }
}

/// The full model: maximize `U` subject to `constraints`.
#[derive(Debug, Clone, PartialEq)]
pub struct MilpModel {
    pub graph: Graph,
    pub variables: Vec<Variable>,
    pub constraints: Vec<LinearConstraint>,
}

impl MilpModel {
    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn binary_count(&self) -> usize {
        self.variables
            .iter()
            .filter(|v| v.domain == Domain::Binary)
            .count()
    }

    pub fn continuous_count(&self) -> usize {
        self.variables.len() - self.binary_count()
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn constraints_with(&self, tag: Tag) -> impl Iterator<Item = &LinearConstraint> {
        self.constraints.iter().filter(move |c| c.tag == tag)
    }

    pub fn constraint(&self, name: &str) -> Option<&LinearConstraint> {
        self.constraints.iter().find(|c| c.name() == name)
    }

    pub fn has_variable(&self, id: VariableId) -> bool {
        self.variables.iter().any(|v| v.id == id)
    }
}

/// Variable values keyed by id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Assignment {
    values: BTreeMap<VariableId, f64>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every model variable set to zero.
    pub fn zeros(model: &MilpModel) -> Self {
        Assignment {
            values: model.variables.iter().map(|v| (v.id, 0.0)).collect(),
        }
    }

    pub fn get(&self, id: VariableId) -> Option<f64> {
        self.values.get(&id).copied()
    }

    pub fn set(&mut self, id: VariableId, value: f64) {
        self.values.insert(id, value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (VariableId, f64)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (VariableId, f64)> + '_ {
        self.iter().filter(|&(_, v)| v != 0.0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ViolationSource {
    Row { name: String, tag: Tag },
    Bound(VariableId),
    Integrality(VariableId),
}

/// One violated condition. `slack` is the signed amount by which the relation
/// `lhs <relation> rhs` fails (always positive for a reported violation).
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub source: ViolationSource,
    pub lhs: f64,
    pub relation: Relation,
    pub rhs: f64,
    pub slack: f64,
}

impl Violation {
    pub fn tag(&self) -> Option<Tag> {
        match &self.source {
            ViolationSource::Row { tag, .. } => Some(*tag),
            _ => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match &self.source {
            ViolationSource::Row { name, .. } => name.clone(),
            ViolationSource::Bound(id) => format!("bound {id}"),
            ViolationSource::Integrality(id) => format!("binary {id}"),
        };
        write!(
            f,
            "{what}: {} {} {} (off by {})",
            crate::text::format_number(self.lhs),
            self.relation,
            crate::text::format_number(self.rhs),
            crate::text::format_number(self.slack)
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn tags(&self) -> Vec<Tag> {
        let mut tags: Vec<Tag> = self.violations.iter().filter_map(Violation::tag).collect();
        tags.sort();
        tags.dedup();
        tags
    }
}

/// Variables in model order: `U`, `x`, `t`, `y`, `z`, `u`.
pub fn variable_layout(eg: &ExtendedGraph) -> Vec<Variable> {
    let half = eg.base.vertex_count() as f64 / 2.0;
    let binary = |id| Variable {
        id,
        domain: Domain::Binary,
    };
    let mut vars = vec![Variable {
        id: VariableId::Objective,
        domain: Domain::Continuous {
            lower: 0.0,
            upper: f64::INFINITY,
        },
    }];
    vars.extend(eg.base.vertices().map(|v| binary(VariableId::Member(v))));
    vars.extend(
        eg.base
            .edges()
            .iter()
            .map(|e| binary(VariableId::Cut(EdgeKey::new(e.tail, e.head)))),
    );
    vars.extend(eg.edges().map(|e| binary(VariableId::TreeOne(e))));
    vars.extend(eg.edges().map(|e| binary(VariableId::TreeTwo(e))));
    vars.extend(eg.edges().map(|e| Variable {
        id: VariableId::Flow(e),
        domain: Domain::Continuous {
            lower: -half,
            upper: half,
        },
    }));
    vars
}

struct RowBuilder {
    rows: Vec<LinearConstraint>,
    counters: HashMap<Tag, usize>,
}

impl RowBuilder {
    fn push(&mut self, tag: Tag, terms: Vec<(VariableId, f64)>, relation: Relation, rhs: f64) {
        let index = self.counters.entry(tag).or_insert(0);
        *index += 1;
        self.rows.push(LinearConstraint {
            tag,
            index: *index,
            terms,
            relation,
            rhs,
        });
    }
}

pub fn build_model(eg: &ExtendedGraph) -> Result<MilpModel, FormulationError> {
    use VariableId::*;

    let g = &eg.base;
    let n = g.vertex_count();
    if !n.is_multiple_of(2) {
        return Err(FormulationError::OddVertexCount(n));
    }
    let half = n as f64 / 2.0;
    let original: Vec<EdgeKey> = g
        .edges()
        .iter()
        .map(|e| EdgeKey::new(e.tail, e.head))
        .collect();
    let extended: Vec<EdgeKey> = eg.edges().collect();
    let mut b = RowBuilder {
        rows: Vec::new(),
        counters: HashMap::new(),
    };

    for l in 0..g.dimension() {
        let mut terms: Vec<_> = g
            .edges()
            .iter()
            .map(|e| (Cut(EdgeKey::new(e.tail, e.head)), -e.weight.values()[l]))
            .collect();
        terms.push((Objective, 1.0));
        b.push(Tag::CutWeight, terms, Relation::Le, 0.0);
    }
    for &e in &original {
        let terms = vec![(Member(e.tail), 1.0), (Member(e.head), 1.0), (Cut(e), -1.0)];
        b.push(Tag::CutLower, terms, Relation::Ge, 0.0);
    }
    for &e in &original {
        let terms = vec![(Member(e.tail), 1.0), (Member(e.head), 1.0), (Cut(e), 1.0)];
        b.push(Tag::CutUpper, terms, Relation::Le, 2.0);
    }
    b.push(
        Tag::Balance,
        g.vertices().map(|v| (Member(v), 1.0)).collect(),
        Relation::Eq,
        half,
    );
    for &e in &original {
        let terms = vec![
            (TreeOne(e), 1.0),
            (Member(e.tail), -0.5),
            (Member(e.head), -0.5),
        ];
        b.push(Tag::TreeOneEdge, terms, Relation::Le, 0.0);
    }
    for &e in &original {
        let terms = vec![
            (TreeTwo(e), 1.0),
            (Member(e.tail), 0.5),
            (Member(e.head), 0.5),
        ];
        b.push(Tag::TreeTwoEdge, terms, Relation::Le, 1.0);
    }
    for &e in &eg.star_edges {
        let terms = vec![(TreeOne(e), 1.0), (Member(e.head), -1.0)];
        b.push(Tag::TreeOneRoot, terms, Relation::Le, 0.0);
    }
    for &e in &eg.star_edges {
        let terms = vec![(TreeTwo(e), 1.0), (Member(e.head), 1.0)];
        b.push(Tag::TreeTwoRoot, terms, Relation::Le, 1.0);
    }
    for &e in &extended {
        let terms = vec![(Flow(e), 1.0), (TreeOne(e), -half), (TreeTwo(e), -half)];
        b.push(Tag::FlowUpper, terms, Relation::Le, 0.0);
    }
    for &e in &extended {
        let terms = vec![(Flow(e), 1.0), (TreeOne(e), half), (TreeTwo(e), half)];
        b.push(Tag::FlowLower, terms, Relation::Ge, 0.0);
    }
    for i in g.vertices() {
        let incoming = extended
            .iter()
            .filter(|e| e.head == i)
            .map(|&e| (Flow(e), 1.0));
        let outgoing = extended
            .iter()
            .filter(|e| e.tail == i)
            .map(|&e| (Flow(e), -1.0));
        b.push(
            Tag::FlowConservation,
            incoming.chain(outgoing).collect(),
            Relation::Eq,
            1.0,
        );
    }
    b.push(
        Tag::RootOutflow,
        eg.star_edges.iter().map(|&e| (Flow(e), 1.0)).collect(),
        Relation::Eq,
        n as f64,
    );
    b.push(
        Tag::TreeOneSize,
        original.iter().map(|&e| (TreeOne(e), 1.0)).collect(),
        Relation::Eq,
        half - 1.0,
    );
    b.push(
        Tag::TreeTwoSize,
        original.iter().map(|&e| (TreeTwo(e), 1.0)).collect(),
        Relation::Eq,
        half - 1.0,
    );
    let root_terms = eg
        .star_edges
        .iter()
        .map(|&e| (TreeOne(e), 1.0))
        .chain(eg.star_edges.iter().map(|&e| (TreeTwo(e), 1.0)))
        .collect();
    b.push(Tag::RootDegree, root_terms, Relation::Eq, 2.0);

    Ok(MilpModel {
        graph: g.clone(),
        variables: variable_layout(eg),
        constraints: b.rows,
    })
}

/// Evaluates every row, bound and integrality condition of `model` under `a`.
pub fn check_assignment(
    model: &MilpModel,
    a: &Assignment,
    tol: f64,
) -> Result<ViolationReport, FormulationError> {
    let mut violations = Vec::new();
    for var in &model.variables {
        let value = a
            .get(var.id)
            .ok_or(FormulationError::MissingVariable(var.id))?;
        match var.domain {
            Domain::Binary => {
                let nearest = if value >= 0.5 { 1.0 } else { 0.0 };
                let off = (value - nearest).abs();
                if off > tol || value.is_nan() {
                    violations.push(Violation {
                        source: ViolationSource::Integrality(var.id),
                        lhs: value,
                        relation: Relation::Eq,
                        rhs: nearest,
                        slack: off,
                    });
                }
            }
            Domain::Continuous { lower, upper } => {
                if value < lower - tol || value.is_nan() {
                    violations.push(Violation {
                        source: ViolationSource::Bound(var.id),
                        lhs: value,
                        relation: Relation::Ge,
                        rhs: lower,
                        slack: lower - value,
                    });
                }
                if value > upper + tol {
                    violations.push(Violation {
                        source: ViolationSource::Bound(var.id),
                        lhs: value,
                        relation: Relation::Le,
                        rhs: upper,
                        slack: value - upper,
                    });
                }
            }
        }
    }
    for row in &model.constraints {
        let lhs = row.lhs(a)?;
        let slack = match row.relation {
            Relation::Le => lhs - row.rhs,
            Relation::Ge => row.rhs - lhs,
            Relation::Eq => (lhs - row.rhs).abs(),
        };
        if slack > tol || lhs.is_nan() {
            violations.push(Violation {
                source: ViolationSource::Row {
                    name: row.name(),
                    tag: row.tag,
                },
                lhs,
                relation: row.relation,
                rhs: row.rhs,
                slack,
            });
        }
    }
    Ok(ViolationReport { violations })
}
