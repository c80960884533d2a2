//! Dimensionless equilibrium model: coefficients, weak form and pressure.

mod coeffs;
mod mixture;
mod problem;
mod state;
mod weak_form;

pub use coeffs::{charge_fraction, check_fractions, diff_coeffs, flux, free_charge, solvent_fraction, DiffCoeffs, GUARD};
pub use mixture::{nondimensionalize, DimensionlessGroups, MixtureSpec, PhysicalScales, SpeciesSpec};
pub use problem::{ElectrodeVoltage, ProblemData, Ramped};
pub use state::{DofKind, Layout, SolutionState};
pub use weak_form::Discretization;

/// Nodal pressure `K̂ (n / n⁰ − 1)` relative to the reference state.
pub fn pressure_recover(spec: &MixtureSpec, state: &SolutionState) -> Vec<f64> {
    state.n.iter().map(|&n| spec.khat * (n / spec.n_avg - 1.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pressure_examples() {
        let mut spec = MixtureSpec::symmetric_default();
        let mut state = SolutionState::constant(&[0.4, 0.4], 1.0, 0.0, 3);
        assert_eq!(pressure_recover(&spec, &state), vec![0.0; 3]);
        state.n[1] = 1.5;
        assert_eq!(pressure_recover(&spec, &state)[1], 0.5);
        spec.khat = 2.0;
        assert_eq!(pressure_recover(&spec, &state)[1], 1.0);
    }
}
