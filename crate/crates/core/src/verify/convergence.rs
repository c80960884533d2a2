use super::mms::{standard_mms_case, MmsCase};
use crate::error::{Error, Result};
use crate::fem::{l2_error, P1Space};
use crate::mesh::square_mesh;
use crate::model::{Discretization, SolutionState};
use crate::solver::{initial_guess, newton_solve, NewtonConfig, SolveReport};
use rayon::prelude::*;

pub const FIELD_NAMES: [&str; 4] = ["yC", "yA", "phi", "n"];

/// `log(e_{j+1}/e_j) / log(h_{j+1}/h_j)` for consecutive pairs; `None` where an
/// error is zero and the order is undefined.
pub fn convergence_order(errors: &[f64], h: &[f64]) -> Result<Vec<Option<f64>>> {
    if errors.len() != h.len() || errors.len() < 2 {
        return Err(Error::DimensionMismatch(format!(
            "need matching error and mesh-size lists of length >= 2, got {} and {}",
            errors.len(),
            h.len()
        )));
    }
    if h.iter().any(|&v| !(v > 0.0)) || errors.iter().any(|&e| e < 0.0) {
        return Err(Error::InvalidParameter("mesh sizes must be positive and errors non-negative".into()));
    }
    Ok(errors
        .windows(2)
        .zip(h.windows(2))
        .map(|(e, hh)| {
            if e[0] == 0.0 || e[1] == 0.0 {
                None
            } else {
                Some((e[1] / e[0]).ln() / (hh[1] / hh[0]).ln())
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub h: f64,
    /// L² errors in the order of [`FIELD_NAMES`].
    pub errors: [f64; 4],
    /// Observed orders against the previous row; `None` on the first row.
    pub orders: [Option<f64>; 4],
    pub report: SolveReport,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

fn fmt_order(o: Option<f64>) -> String {
    o.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"))
}

impl ConvergenceTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("h,err_yC,ord_yC,err_yA,ord_yA,err_phi,ord_phi,err_n,ord_n\n");
        for r in &self.rows {
            out.push_str(&format!("{:.16e}", r.h));
            for f in 0..4 {
                let ord = r.orders[f].map_or_else(String::new, |v| format!("{v:.16e}"));
                out.push_str(&format!(",{:.16e},{ord}", r.errors[f]));
            }
            out.push('\n');
        }
        out
    }

    /// Aligned text table: h, then error and order per field.
    pub fn to_text(&self) -> String {
        let mut out = format!("{:>9}", "h");
        for name in FIELD_NAMES {
            out.push_str(&format!("  {:>12} {:>7}", format!("L2({name})"), "order"));
        }
        out.push('\n');
        for r in &self.rows {
            let h = if (1.0 / r.h).fract().abs() < 1e-9 {
                format!("1/{}", (1.0 / r.h).round())
            } else {
                format!("{:.4e}", r.h)
            };
            out.push_str(&format!("{h:>9}"));
            for f in 0..4 {
                out.push_str(&format!("  {:>12.4e} {:>7}", r.errors[f], fmt_order(r.orders[f])));
            }
            out.push('\n');
        }
        out
    }
}

/// Solves the manufactured problem on an `cells x cells` square mesh.
pub fn solve_mms(case: &MmsCase, cells: usize, config: &NewtonConfig) -> Result<(Discretization, SolutionState, SolveReport)> {
    let space = P1Space::new(square_mesh(cells, cells)?)?;
    let disc = Discretization::new(space, case.spec.num_ions());
    let start = initial_guess(&case.spec, &disc, case)?;
    let (state, report) = newton_solve(&case.spec, &disc, &start, case, config)?;
    if !report.converged {
        return Err(Error::NotConverged(format!(
            "manufactured problem on {cells}x{cells}: residual {:.3e} after {} iterations",
            report.residual_norm, report.iterations
        )));
    }
    Ok((disc, state, report))
}

/// L² errors of `[y_C, y_A, φ, n]` against the exact fields.
pub fn mms_errors(case: &MmsCase, disc: &Discretization, state: &SolutionState) -> [f64; 4] {
    let space = disc.space();
    [
        l2_error(space, &state.y[0], |x| case.cation.value(x)),
        l2_error(space, &state.y[1], |x| case.anion.value(x)),
        l2_error(space, &state.phi, |x| case.potential.value(x)),
        l2_error(space, &state.n, |x| case.density.value(x)),
    ]
}

/// Runs the manufactured-solution study on square meshes with the given
/// cells per side, which must be strictly increasing. Levels are solved in
/// parallel; the table is ordered by decreasing `h`.
pub fn run_convergence_study(levels: &[usize], config: &NewtonConfig) -> Result<ConvergenceTable> {
    if levels.is_empty() || levels.contains(&0) || levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(format!(
            "levels must be positive and strictly increasing, got {levels:?}"
        )));
    }
    let case = standard_mms_case();
    let solved: Vec<Result<([f64; 4], SolveReport)>> = levels
        .par_iter()
        .map(|&cells| {
            let (disc, state, report) = solve_mms(&case, cells, config)?;
            Ok((mms_errors(&case, &disc, &state), report))
        })
        .collect();
    let mut table = ConvergenceTable::default();
    for (&cells, res) in levels.iter().zip(solved) {
        let (errors, report) = res?;
        table.rows.push(ConvergenceRow {
            h: 1.0 / cells as f64,
            errors,
            orders: [None; 4],
            report,
        });
    }
    for j in 1..table.rows.len() {
        let h = [table.rows[j - 1].h, table.rows[j].h];
        for f in 0..4 {
            let e = [table.rows[j - 1].errors[f], table.rows[j].errors[f]];
            table.rows[j].orders[f] = convergence_order(&e, &h)?[0];
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn truncated4(v: f64) -> f64 {
        (v * 1e4).trunc() / 1e4
    }

    #[test]
    fn printed_pairs_reproduce_printed_orders() {
        let h = [0.25, 0.125];
        let o = convergence_order(&[1.7360e-3, 4.4202e-4], &h).unwrap()[0].unwrap();
        assert_eq!(truncated4(o), 1.9735);
        let o = convergence_order(&[2.8330e-3, 8.2360e-4], &h).unwrap()[0].unwrap();
        assert_eq!(truncated4(o), 1.7823);
    }

    #[test]
    fn quartered_error_gives_order_two() {
        let o = convergence_order(&[4.0, 1.0], &[0.5, 0.25]).unwrap()[0].unwrap();
        assert!((o - 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_error_order_is_undefined() {
        assert_eq!(convergence_order(&[1.0, 0.0], &[0.5, 0.25]).unwrap(), vec![None]);
        assert!(convergence_order(&[1.0], &[0.5]).is_err());
        assert!(convergence_order(&[1.0, 2.0], &[0.5]).is_err());
    }

    #[test]
    fn rejects_unsorted_levels() {
        assert!(run_convergence_study(&[8, 4], &NewtonConfig::default()).is_err());
        assert!(run_convergence_study(&[], &NewtonConfig::default()).is_err());
    }
}
