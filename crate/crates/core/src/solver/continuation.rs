use super::{initial_guess, newton_solve, NewtonConfig, SolveReport, ESCALATION};
use crate::error::{Error, Result};
use crate::model::{Discretization, MixtureSpec, ProblemData, Ramped, SolutionState};

/// Solves with the Dirichlet data ramped as `k / K` for `k = 1..=K`.
///
/// `K` starts at `config.continuation_steps`; if any level fails the whole
/// ramp is retried with the larger counts of [`ESCALATION`].
pub fn continuation_solve(
    spec: &MixtureSpec,
    disc: &Discretization,
    data: &dyn ProblemData,
    config: &NewtonConfig,
) -> Result<(SolutionState, SolveReport)> {
    config.validate()?;
    let first = config.continuation_steps;
    let attempts = std::iter::once(first).chain(ESCALATION.iter().copied().filter(|&k| k > first));
    let mut last_err = None;
    for steps in attempts {
        match ramp(spec, disc, data, config, steps) {
            Ok(done) => return Ok(done),
            Err(e) => {
                log::info!("continuation with {steps} levels failed: {e}");
                last_err = Some(e);
            }
        }
    }
    Err(last_err.expect("at least one attempt"))
}

fn ramp(
    spec: &MixtureSpec,
    disc: &Discretization,
    data: &dyn ProblemData,
    config: &NewtonConfig,
    steps: usize,
) -> Result<(SolutionState, SolveReport)> {
    let mut total = SolveReport {
        continuation_levels: steps,
        ..Default::default()
    };
    let mut state: Option<SolutionState> = None;
    for level in 1..=steps {
        let ramped = Ramped {
            inner: data,
            factor: level as f64 / steps as f64,
        };
        let start = match state.take() {
            Some(s) => s,
            None => initial_guess(spec, disc, &ramped)?,
        };
        let fail = |reason: String, total: SolveReport| Error::ContinuationFailed {
            level,
            levels: steps,
            reason,
            report: Box::new(total),
        };
        let (s, report) = match newton_solve(spec, disc, &start, &ramped, config) {
            Ok(done) => done,
            Err(e) => return Err(fail(e.to_string(), total)),
        };
        total.iterations += report.iterations;
        total.residual_history.extend(&report.residual_history);
        total.damping_history.extend(&report.damping_history);
        total.residual_norm = report.residual_norm;
        if !report.converged {
            return Err(fail(
                format!(
                    "no convergence after {} iterations, residual {:.3e}",
                    report.iterations, report.residual_norm
                ),
                total,
            ));
        }
        state = Some(s);
    }
    total.converged = true;
    Ok((state.expect("at least one level"), total))
}
