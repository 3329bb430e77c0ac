use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use cmmbp::certificate::{build_certificate, decode_assignment, verify_lemma1};
use cmmbp::formulation::{
    build_model, check_assignment, emit_lp, extend_graph, read_external_solution, DEFAULT_TOLERANCE,
};
use cmmbp::solvers::{branch_and_bound_solve, brute_force_solve, local_search_solve, Status};
use cmmbp::{format_number, parse_instance, random_instance, write_instance};
use cmmbp::{Bisection, CutReport, GeneratorConfig, Graph, Vertex};

/// Connected multidimensional maximum bisection toolkit.
#[derive(Parser)]
#[command(name = "cmmbp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    /// Exhaustive enumeration.
    Brute,
    /// Branch-and-bound.
    Bnb,
    /// Local search.
    Ls,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and print the best bisection.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "bnb")]
        engine: Engine,
        /// Time limit in seconds (branch-and-bound only).
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Swap moves for local search.
        #[arg(long, default_value_t = 100)]
        iterations: usize,
    },
    /// Check whether a partition is a feasible bisection and report its cut.
    Verify {
        file: PathBuf,
        /// Comma-separated vertices of one side.
        #[arg(long, value_delimiter = ',', required = true)]
        partition: Vec<Vertex>,
    },
    /// Build the model assignment for a partition and list its nonzero variables.
    Certificate {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        partition: Vec<Vertex>,
    },
    /// Write the MILP model in LP format.
    EmitLp {
        file: PathBuf,
        /// Output path; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Validate a solver's `name value` solution listing against the model.
    CheckSolution {
        file: PathBuf,
        #[arg(long)]
        lp_solution: PathBuf,
    },
    /// Generate a random connected instance.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        lo: u32,
        #[arg(long, default_value_t = 10)]
        hi: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

const INFEASIBLE: u8 = 2;

fn load(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn print_bisection(b: &Bisection, cut: &CutReport) {
    println!("side_one: {}", join(&b.side_one));
    println!("side_two: {}", join(&b.side_two));
    println!(
        "cut_edges: {}",
        join(cut.cut_edges.iter().map(|(i, j)| format!("({i},{j})")))
    );
    println!(
        "coordinate_sums: {}",
        join(cut.coordinate_sums.iter().map(|&s| format_number(s)))
    );
    println!("weight: {}", format_number(cut.weight));
}

fn partition(g: &Graph, side: &[Vertex]) -> Result<Bisection> {
    if let Some(&v) = side.iter().find(|&&v| v == 0 || v > g.vertex_count()) {
        bail!("vertex {v} is outside 1..={}", g.vertex_count());
    }
    Ok(Bisection::from_side(g.vertex_count(), side.iter().copied()))
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Solve {
            file,
            engine,
            time_limit,
            seed,
            iterations,
        } => {
            let g = load(&file)?;
            let report = match engine {
                Engine::Brute => brute_force_solve(&g)?,
                Engine::Bnb => {
                    let limit = time_limit
                        .map(Duration::try_from_secs_f64)
                        .transpose()
                        .context("invalid --time-limit")?;
                    branch_and_bound_solve(&g, limit)?
                }
                Engine::Ls => local_search_solve(&g, seed, iterations)?,
            };
            println!("status: {}", report.status);
            if let Some(best) = &report.best {
                print_bisection(&best.bisection, &best.cut);
            }
            println!("nodes: {}", report.nodes_explored);
            println!("elapsed_ms: {:.3}", report.elapsed.as_secs_f64() * 1e3);
            Ok(match report.status {
                Status::Optimal | Status::Feasible => 0,
                Status::Infeasible => INFEASIBLE,
                Status::Unknown => 1,
            })
        }
        Command::Verify {
            file,
            partition: side,
        } => {
            let g = load(&file)?;
            let b = partition(&g, &side)?;
            let cut = g.cut_weight(&b.side_one)?;
            let verdict = g.check_bisection(&b);
            match &verdict {
                Ok(()) => println!("feasible: yes"),
                Err(reason) => println!("feasible: no ({reason})"),
            }
            print_bisection(&b, &cut);
            Ok(if verdict.is_ok() { 0 } else { INFEASIBLE })
        }
        Command::Certificate {
            file,
            partition: side,
        } => {
            let g = load(&file)?;
            let b = partition(&g, &side)?;
            let eg = extend_graph(&g);
            let cert = match build_certificate(&eg, &b) {
                Ok(c) => c,
                Err(e) => {
                    println!("# {e}");
                    return Ok(INFEASIBLE);
                }
            };
            let model = build_model(&eg)?;
            let report = check_assignment(&model, &cert.assignment, 0.0)?;
            println!("# roots: p={} q={}", cert.roots.0, cert.roots.1);
            println!("# violations: {}", report.violations.len());
            println!(
                "# root flows: {}",
                if verify_lemma1(&cert) { "ok" } else { "FAILED" }
            );
            let objective = cert
                .assignment
                .get(cmmbp::VariableId::Objective)
                .unwrap_or_default();
            println!("# U = {}", format_number(objective));
            // listing order follows the model layout: x, t, y, z, then u
            for var in &model.variables {
                if var.id == cmmbp::VariableId::Objective {
                    continue;
                }
                let value = cert.assignment.get(var.id).unwrap_or_default();
                if value != 0.0 {
                    println!("{} {}", var.id, format_number(value));
                }
            }
            for v in &report.violations {
                eprintln!("violation: {v}");
            }
            Ok(if report.is_feasible() { 0 } else { 1 })
        }
        Command::EmitLp { file, output } => {
            let g = load(&file)?;
            let model = build_model(&extend_graph(&g))?;
            write_output(output.as_deref(), &emit_lp(&model))?;
            Ok(0)
        }
        Command::CheckSolution { file, lp_solution } => {
            let g = load(&file)?;
            let model = build_model(&extend_graph(&g))?;
            let text = fs::read_to_string(&lp_solution)
                .with_context(|| format!("reading {}", lp_solution.display()))?;
            let assignment = read_external_solution(&model, &text)?;
            let report = check_assignment(&model, &assignment, DEFAULT_TOLERANCE)?;
            println!("violations: {}", report.violations.len());
            for v in &report.violations {
                println!("  {v}");
            }
            match decode_assignment(&model, &assignment) {
                Ok((b, cut)) => {
                    println!("decoded: feasible bisection");
                    print_bisection(&b, &cut);
                    Ok(if report.is_feasible() { 0 } else { INFEASIBLE })
                }
                Err(e) => {
                    println!("decoded: {e}");
                    Ok(INFEASIBLE)
                }
            }
        }
        Command::Generate {
            n,
            p,
            k,
            lo,
            hi,
            seed,
            output,
        } => {
            let g = random_instance(&GeneratorConfig {
                n,
                edge_probability: p,
                k,
                weight_range: (lo, hi),
                seed,
            })?;
            write_output(output.as_deref(), &write_instance(&g))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
