//! Connected multidimensional maximum bisection.
//!
//! Split a graph whose edges carry weight vectors into two equally sized,
//! connected halves so that the smallest per-coordinate cut sum is as large as
//! possible. The crate provides:
//!
//! - [`graph`]: graphs, cuts, connectivity and bisection feasibility;
//! - [`formulation`]: the flow-based MILP model, an assignment checker, and
//!   LP text / solution listing I/O;
//! - [`certificate`]: bisection-to-assignment construction and decoding;
//! - [`solvers`]: exhaustive, branch-and-bound and local search engines;
//! - [`io`]: instance files and random instances.

pub mod certificate;
pub mod formulation;
pub mod graph;
pub mod io;
pub mod solvers;
mod text;

pub use certificate::{
    build_certificate, decode_assignment, verify_lemma1, Certificate, CertificateError,
};
pub use formulation::{
    build_model, check_assignment, emit_lp, extend_graph, parse_lp, read_external_solution,
    Assignment, EdgeKey, ExtendedGraph, FormulationError, MilpModel, VariableId,
};
pub use graph::{Bisection, CutReport, Graph, GraphError, Vertex, VertexSet};
pub use io::{parse_instance, random_instance, write_instance, GeneratorConfig, InstanceError};
pub use solvers::{
    branch_and_bound_solve, brute_force_solve, local_search_solve, Solution, SolveError,
    SolveReport, Status,
};
pub use text::format_number;
