use super::mixture::MixtureSpec;
use crate::error::{Error, Result};

/// Smallest admissible atomic fraction, for both ions and solvent.
pub const GUARD: f64 = 1e-12;

/// Pointwise transport coefficients of one ionic species.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiffCoeffs {
    /// Self coefficient, multiplies `∇y_α`.
    pub d_aa: f64,
    /// Cross coefficient, multiplies `∇y_i` for `i ≠ α`.
    pub d_ai: f64,
    /// Electric coefficient, multiplies `∇φ`.
    pub d_aphi: f64,
}

pub fn solvent_fraction(y: &[f64]) -> f64 {
    1.0 - y.iter().sum::<f64>()
}

/// Checks `GUARD < y_α < 1 - GUARD` and `y_N > GUARD`, describing the first failure.
pub fn check_fractions(y: &[f64]) -> std::result::Result<(), String> {
    for (a, &v) in y.iter().enumerate() {
        if !(v > GUARD && v < 1.0 - GUARD) {
            return Err(format!("ion fraction y[{a}] = {v} outside ({GUARD}, 1 - {GUARD})"));
        }
    }
    let yn = solvent_fraction(y);
    if !(yn > GUARD) {
        return Err(format!("solvent fraction {yn} not above {GUARD}"));
    }
    Ok(())
}

fn pointwise_guard(y: &[f64]) -> Result<f64> {
    check_fractions(y).map_err(|detail| Error::SolventDepletion {
        node: None,
        location: Vec::new(),
        detail,
    })?;
    Ok(solvent_fraction(y))
}

/// `Σ z_i y_i`
pub fn charge_fraction(spec: &MixtureSpec, y: &[f64]) -> f64 {
    spec.species.iter().zip(y).map(|(s, &v)| s.charge as f64 * v).sum()
}

/// Electric coefficient without the guard; it is linear in `y`.
pub(crate) fn electric_coeff(spec: &MixtureSpec, alpha: usize, charge_fraction: f64) -> f64 {
    let s = &spec.species[alpha];
    spec.psi * ((1.0 / s.mass_ratio - 1.0) * charge_fraction - s.charge as f64 / s.mass_ratio)
}

pub fn diff_coeffs(spec: &MixtureSpec, alpha: usize, y: &[f64]) -> Result<DiffCoeffs> {
    let yn = pointwise_guard(y)?;
    let m = spec.species[alpha].mass_ratio;
    Ok(DiffCoeffs {
        d_aa: -(1.0 / (m * y[alpha]) + 1.0 / yn),
        d_ai: -1.0 / yn,
        d_aphi: electric_coeff(spec, alpha, charge_fraction(spec, y)),
    })
}

/// `J_α = D_αα ∇y_α + Σ_{i≠α} D_αi ∇y_i + D_αφ ∇φ`.
pub fn flux(
    spec: &MixtureSpec,
    alpha: usize,
    grad_y: &[[f64; 3]],
    grad_phi: [f64; 3],
    y: &[f64],
) -> Result<[f64; 3]> {
    let c = diff_coeffs(spec, alpha, y)?;
    let mut j = [0.0; 3];
    for d in 0..3 {
        let mut v = c.d_aphi * grad_phi[d];
        for (i, g) in grad_y.iter().enumerate() {
            v += if i == alpha { c.d_aa } else { c.d_ai } * g[d];
        }
        j[d] = v;
    }
    Ok(j)
}

/// Dimensionless free charge `Σ z_α y_α n`.
pub fn free_charge(spec: &MixtureSpec, y: &[f64], n: f64) -> f64 {
    charge_fraction(spec, y) * n
}
