use super::{euclidean, NewtonConfig, SolveReport};
use crate::error::{Error, Result};
use crate::model::{Discretization, MixtureSpec, ProblemData, SolutionState};

/// Damped Newton iteration from `state0`, after imposing the electrode values.
///
/// Each step is halved until the residual norm strictly decreases and the
/// iterate stays admissible. Running out of iterations, a step that cannot
/// reduce the residual, or a step below `rel_tol` relative to the iterate
/// returns the last iterate with `converged == false`.
pub fn newton_solve(
    spec: &MixtureSpec,
    disc: &Discretization,
    state0: &SolutionState,
    data: &dyn ProblemData,
    config: &NewtonConfig,
) -> Result<(SolutionState, SolveReport)> {
    config.validate()?;
    let layout = disc.layout();
    // electrode rows then stay satisfied and drop out of the merit function
    let mut state = state0.clone();
    disc.impose_dirichlet(&mut state, data);
    let mut x = state.to_vector();
    let mut r = disc.residual(spec, &state, data)?;
    let mut norm = euclidean(&r);
    let mut report = SolveReport {
        residual_history: vec![norm],
        continuation_levels: 1,
        ..Default::default()
    };

    while norm > config.abs_tol && report.iterations < config.max_iter {
        let system = disc.linearize(spec, &state, data)?;
        let dx = disc.solver().solve(&system)?;
        let tiny = euclidean(&dx) <= config.rel_tol * (1.0 + euclidean(&x));

        let mut t = 1.0;
        let mut depleted = None;
        let accepted = loop {
            let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, d)| a - t * d).collect();
            let candidate = SolutionState::from_vector(layout, &trial)?;
            match disc.residual(spec, &candidate, data) {
                Ok(rt) => {
                    let nt = euclidean(&rt);
                    if nt < norm {
                        break Some((trial, candidate, rt, nt));
                    }
                }
                Err(e @ Error::SolventDepletion { .. }) => depleted = Some(e),
                Err(e) => return Err(e),
            }
            t *= 0.5;
            if t < config.damping_min {
                break None;
            }
        };

        match accepted {
            Some((trial, candidate, rt, nt)) => {
                x = trial;
                state = candidate;
                r = rt;
                norm = nt;
                report.iterations += 1;
                report.damping_history.push(t);
                report.residual_history.push(norm);
                log::debug!("newton: iteration {} step {t} residual {norm:.3e}", report.iterations);
                if tiny && norm > config.abs_tol {
                    log::debug!("newton: step below relative tolerance, stopping");
                    break;
                }
            }
            None => {
                if let Some(Error::SolventDepletion { node, location, detail }) = depleted {
                    return Err(Error::SolventDepletion {
                        node,
                        location,
                        detail: format!("{detail}; refine mesh or ramp voltage"),
                    });
                }
                log::debug!("newton: line search stalled at residual {norm:.3e}");
                break;
            }
        }
    }
    debug_assert_eq!(r.len(), layout.size());
    report.residual_norm = norm;
    report.converged = norm <= config.abs_tol;
    Ok((state, report))
}
