use std::ffi::CString;

use highs::{ColProblem, HighsModelStatus, Model, Sense};

use super::{LinearProgram, LpSolution, LpStatus};
use crate::error::{Error, Result};

const ITERATION_LIMIT: i32 = 50_000_000;
const FEASIBILITY_TOL: f64 = 1e-9;

/// Rows as handed to the backend: a pair `e ≤ b₁, −e ≤ b₂` written
/// consecutively becomes the single ranged row `−b₂ ≤ e ≤ b₁`.
struct RangedRows {
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// Index into the program's rows for each ranged row.
    source: Vec<usize>,
}

fn is_negated_pair(lp: &LinearProgram, r: usize) -> bool {
    let (c0, v0, _) = lp.row(r);
    let (c1, v1, _) = lp.row(r + 1);
    !c0.is_empty() && c0 == c1 && v0.iter().zip(v1).all(|(a, b)| *a == -*b)
}

fn ranged_rows(lp: &LinearProgram) -> RangedRows {
    let m = lp.row_count();
    let mut out = RangedRows {
        lower: Vec::with_capacity(m / 2 + 1),
        upper: Vec::with_capacity(m / 2 + 1),
        source: Vec::with_capacity(m / 2 + 1),
    };
    let mut r = 0;
    while r < m {
        let (_, _, b) = lp.row(r);
        if r + 1 < m && is_negated_pair(lp, r) {
            let (_, _, b_neg) = lp.row(r + 1);
            out.lower.push(-b_neg);
            out.upper.push(b);
            out.source.push(r);
            r += 2;
        } else {
            out.lower.push(f64::NEG_INFINITY);
            out.upper.push(b);
            out.source.push(r);
            r += 1;
        }
    }
    out
}

fn int_info(model: &highs::SolvedModel, key: &str) -> u64 {
    let name = CString::new(key).expect("static name");
    let mut count: highs_sys::HighsInt = 0;
    // SAFETY: the pointer is owned by `model` and outlives the call; the
    // name is a valid NUL-terminated string.
    let status = unsafe {
        highs_sys::Highs_getIntInfoValue(model.as_ptr() as *mut _, name.as_ptr(), &mut count)
    };
    if status == highs_sys::STATUS_ERROR {
        0
    } else {
        count.max(0) as u64
    }
}

/// Simplex plus interior point iterations (crossover counts as simplex).
fn iteration_count(model: &highs::SolvedModel) -> u64 {
    int_info(model, "simplex_iteration_count") + int_info(model, "ipm_iteration_count")
}

/// Algorithm used by the backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    DualSimplex,
    PrimalSimplex,
    /// Interior point followed by crossover to a basic solution. Much
    /// faster than simplex on large spanner programs.
    #[default]
    InteriorPoint,
}

fn run(lp: &LinearProgram, presolve: bool, method: Method) -> Result<(HighsModelStatus, Vec<f64>, u64)> {
    let n = lp.var_count();
    let rows = ranged_rows(lp);

    let mut problem = ColProblem::default();
    let handles: Vec<_> = rows
        .lower
        .iter()
        .zip(&rows.upper)
        .map(|(&lo, &hi)| problem.add_row(lo..=hi))
        .collect();

    // transpose the kept rows into columns
    let mut col_entries: Vec<Vec<(highs::Row, f64)>> = vec![Vec::new(); n];
    for (k, &r) in rows.source.iter().enumerate() {
        let (cols, vals, _) = lp.row(r);
        for (&c, &v) in cols.iter().zip(vals) {
            col_entries[c].push((handles[k], v));
        }
    }
    for (j, entries) in col_entries.into_iter().enumerate() {
        let (lo, hi) = lp.bounds(j);
        problem.add_column(lp.objective()[j], lo..=hi, entries);
    }

    let mut model = Model::try_new(problem).map_err(|status| Error::Solver {
        iterations: 0,
        message: format!("HiGHS rejected the program: {status:?}"),
    })?;
    model.make_quiet();
    model.set_sense(Sense::Maximise);
    model.set_option("threads", 1);
    model.set_option("presolve", if presolve { "on" } else { "off" });
    model.set_option("primal_feasibility_tolerance", FEASIBILITY_TOL);
    model.set_option("dual_feasibility_tolerance", FEASIBILITY_TOL);
    model.set_option("simplex_iteration_limit", ITERATION_LIMIT);
    match method {
        Method::DualSimplex => {
            model.set_option("solver", "simplex");
            model.set_option("simplex_strategy", 1);
        }
        Method::PrimalSimplex => {
            model.set_option("solver", "simplex");
            model.set_option("simplex_strategy", 4);
        }
        Method::InteriorPoint => {
            model.set_option("solver", "ipm");
            model.set_option("run_crossover", "on");
        }
    }
    let solved = model.try_solve().map_err(|status| Error::Solver {
        iterations: 0,
        message: format!("HiGHS run failed: {status:?}"),
    })?;
    let iterations = iteration_count(&solved);
    let status = solved.status();
    let primal = if status == HighsModelStatus::Optimal {
        solved.get_solution().columns().to_vec()
    } else {
        Vec::new()
    };
    Ok((status, primal, iterations))
}

/// Solves `lp` with the HiGHS dual simplex.
///
/// The returned objective is recomputed as `c·x` from the primal vector, so
/// it always agrees with the certificate the caller receives. Solves are
/// independent and may run on separate threads.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    solve_with(lp, Method::default())
}

/// [`solve`] with an explicit algorithm.
pub fn solve_with(lp: &LinearProgram, method: Method) -> Result<LpSolution> {
    lp.validate()?;
    if lp.var_count() == 0 {
        return Ok(LpSolution {
            status: if lp.rhs.iter().all(|&b| b >= 0.0) {
                LpStatus::Optimal
            } else {
                LpStatus::Infeasible
            },
            objective_value: 0.0,
            primal: Vec::new(),
            iterations: 0,
        });
    }

    let (mut status, mut primal, mut iterations) = run(lp, true, method)?;
    if status == HighsModelStatus::Optimal && lp.max_violation(&primal) > 10.0 * FEASIBILITY_TOL {
        // postsolve residue; polish on the original program
        (status, primal, iterations) = run(lp, false, method)?;
    }
    if status == HighsModelStatus::UnboundedOrInfeasible {
        (status, primal, iterations) = run(lp, false, method)?;
    }
    let status = match status {
        HighsModelStatus::Optimal => LpStatus::Optimal,
        HighsModelStatus::Infeasible => LpStatus::Infeasible,
        HighsModelStatus::Unbounded => LpStatus::Unbounded,
        HighsModelStatus::ReachedIterationLimit => {
            return Err(Error::Solver {
                iterations,
                message: "iteration limit reached".into(),
            })
        }
        other => {
            return Err(Error::Solver {
                iterations,
                message: format!("unexpected model status {other:?}"),
            })
        }
    };
    let objective_value = if status == LpStatus::Optimal {
        lp.evaluate(&primal)
    } else {
        f64::NAN
    };
    Ok(LpSolution {
        status,
        objective_value,
        primal,
        iterations,
    })
}
