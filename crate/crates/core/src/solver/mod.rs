//! Damped Newton iteration and voltage continuation.

mod continuation;
mod newton;

pub use continuation::continuation_solve;
pub use newton::newton_solve;

use crate::error::{Error, Result};
use crate::fem::{laplace_matrix, solve_direct, LinearSystem};
use crate::mesh::BoundaryTag;
use crate::model::{Discretization, MixtureSpec, ProblemData, SolutionState};

/// Step counts tried, in order, when continuation has to escalate.
pub const ESCALATION: [usize; 3] = [2, 4, 8];

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonConfig {
    /// Converged once the Euclidean residual norm drops to this value.
    pub abs_tol: f64,
    /// Stops early once a Newton step is this small relative to the iterate.
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Smallest step fraction tried by the backtracking line search.
    pub damping_min: f64,
    /// Number of voltage ramp levels tried first.
    pub continuation_steps: usize,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_iter: 50,
            damping_min: 1.0 / 64.0,
            continuation_steps: 1,
        }
    }
}

impl NewtonConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return bad("solver tolerances must be positive");
        }
        if self.max_iter == 0 {
            return bad("max_iter must be at least 1");
        }
        if !(self.damping_min > 0.0 && self.damping_min <= 1.0) {
            return bad("damping_min must lie in (0, 1]");
        }
        if self.continuation_steps == 0 {
            return bad("continuation needs at least one step");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    pub residual_norm: f64,
    /// Residual norm before each iteration and after the last one.
    pub residual_history: Vec<f64>,
    /// Accepted step fraction of every iteration.
    pub damping_history: Vec<f64>,
    /// Ramp levels of the successful (or last) continuation attempt.
    pub continuation_levels: usize,
    pub converged: bool,
}

pub(crate) fn euclidean(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Constant fields at their prescribed means, zero multipliers and the
/// harmonic potential matching the boundary data.
pub fn initial_guess(spec: &MixtureSpec, disc: &Discretization, data: &dyn ProblemData) -> Result<SolutionState> {
    let space = disc.space();
    let nv = space.dof_count();
    let y: Vec<f64> = spec.species.iter().map(|s| s.y_avg).collect();
    let mut state = SolutionState::constant(&y, spec.n_avg, 0.0, nv);
    if disc.dirichlet_nodes().is_empty() {
        return Ok(state);
    }
    let mut system = LinearSystem::new(laplace_matrix(space)?, 0);
    let dim = space.dim();
    let fq = space.facet_quadrature();
    let ref_measure = crate::fem::reference_measure(dim - 1);
    for f in space.boundary() {
        if f.tag != BoundaryTag::GammaN {
            continue;
        }
        for (bary, &w) in fq.points.iter().zip(&fq.weights) {
            let x = space.map_facet_point(f, bary);
            let g = data.potential_normal_flux(&x[..dim], &f.normal[..dim]);
            for (&v, &lam) in space.facet_dofs(f).iter().zip(bary) {
                system.rhs[v] += w * f.measure / ref_measure * g * lam;
            }
        }
    }
    for &(v, tag) in disc.dirichlet_nodes() {
        system.matrix.set_identity_row(v);
        system.rhs[v] = data.dirichlet(space.mesh().vertex(v), tag);
    }
    state.phi = solve_direct(&system)?;
    Ok(state)
}
