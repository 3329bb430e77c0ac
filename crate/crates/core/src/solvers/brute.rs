use std::time::Instant;

use super::{require_even, solution_from_mask, SolveError, SolveReport, Status};
use crate::graph::{Bisection, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForceOptions {
    /// When false, both sides may be disconnected (plain balanced max-cut).
    pub require_connectivity: bool,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        BruteForceOptions {
            require_connectivity: true,
        }
    }
}

/// Calls `visit` with the membership mask of every balanced vertex set that
/// contains vertex 1, in lexicographic order of the sorted sets.
fn for_each_balanced(n: usize, mut visit: impl FnMut(&[bool])) {
    let r = n / 2 - 1;
    let mut mask = vec![false; n + 1];
    mask[1] = true;
    // comb holds r increasing values from 2..=n
    let mut comb: Vec<usize> = (2..2 + r).collect();
    loop {
        for &v in &comb {
            mask[v] = true;
        }
        visit(&mask);
        for &v in &comb {
            mask[v] = false;
        }
        let Some(i) = (0..r).rev().find(|&i| comb[i] < n - (r - 1 - i)) else {
            return;
        };
        comb[i] += 1;
        for j in i + 1..r {
            comb[j] = comb[j - 1] + 1;
        }
    }
}

/// Every balanced bisection (connected or not), canonical labels, in
/// lexicographic order of `V1`.
pub fn balanced_bisections(g: &Graph) -> Result<Vec<Bisection>, SolveError> {
    require_even(g)?;
    let n = g.vertex_count();
    let mut out = Vec::new();
    for_each_balanced(n, |mask| {
        out.push(Bisection::from_side(n, (1..=n).filter(|&v| mask[v])));
    });
    Ok(out)
}

/// Every feasible (balanced, both sides connected) bisection.
pub fn feasible_bisections(g: &Graph) -> Result<Vec<Bisection>, SolveError> {
    Ok(balanced_bisections(g)?
        .into_iter()
        .filter(|b| g.is_feasible_bisection(b))
        .collect())
}

/// Exhaustive search over all `C(n-1, n/2-1)` candidate sides.
pub fn brute_force_solve(g: &Graph) -> Result<SolveReport, SolveError> {
    brute_force_solve_with(g, BruteForceOptions::default())
}

pub fn brute_force_solve_with(
    g: &Graph,
    options: BruteForceOptions,
) -> Result<SolveReport, SolveError> {
    require_even(g)?;
    let start = Instant::now();
    let n = g.vertex_count();
    let mut scratch = vec![0.0; g.dimension()];
    let mut best: Option<(f64, Vec<bool>)> = None;
    let mut nodes = 0u64;
    for_each_balanced(n, |mask| {
        nodes += 1;
        if options.require_connectivity {
            let complement: Vec<bool> =
                mask.iter().enumerate().map(|(v, &m)| v > 0 && !m).collect();
            if !g.induces_connected(mask) || !g.induces_connected(&complement) {
                return;
            }
        }
        let w = g.mask_weight(mask, &mut scratch);
        if best.as_ref().is_none_or(|(bw, _)| w > *bw) {
            best = Some((w, mask.to_vec()));
        }
    });
    let best = best.map(|(_, mask)| solution_from_mask(g, &mask));
    Ok(SolveReport {
        status: if best.is_some() {
            Status::Optimal
        } else {
            Status::Infeasible
        },
        best,
        nodes_explored: nodes,
        elapsed: start.elapsed(),
        optimality_proved: true,
    })
}
