use crate::error::{Error, Result};

/// One ionic constituent. The solvent is implicit (charge zero, fraction `1 - Σ y`).
#[derive(Clone, Debug, PartialEq)]
pub struct SpeciesSpec {
    pub name: String,
    /// Charge number `z`.
    pub charge: i32,
    /// Mass relative to the solvent, `m / m_solvent`.
    pub mass_ratio: f64,
    /// Prescribed domain average of the atomic fraction.
    pub y_avg: f64,
}

/// Dimensionless mixture description.
#[derive(Clone, Debug, PartialEq)]
pub struct MixtureSpec {
    pub species: Vec<SpeciesSpec>,
    /// Dielectric susceptibility; the relative permittivity is `1 + chi`.
    pub chi: f64,
    /// Electrode potential over the thermal voltage.
    pub psi: f64,
    /// Squared ratio of domain length to Debye length (up to permittivity).
    pub lambda: f64,
    /// Bulk modulus over the thermal energy density.
    pub khat: f64,
    /// Prescribed domain average of the total number density.
    pub n_avg: f64,
}

impl MixtureSpec {
    /// Symmetric 1:1 electrolyte used by the compressible studies.
    pub fn symmetric_default() -> Self {
        MixtureSpec {
            species: vec![
                SpeciesSpec {
                    name: "cation".into(),
                    charge: 1,
                    mass_ratio: 0.1,
                    y_avg: 0.4,
                },
                SpeciesSpec {
                    name: "anion".into(),
                    charge: -1,
                    mass_ratio: 0.1,
                    y_avg: 0.4,
                },
            ],
            chi: 1.0,
            psi: 1.0,
            lambda: 1000.0,
            khat: 1.0,
            n_avg: 1.0,
        }
    }

    pub fn num_ions(&self) -> usize {
        self.species.len()
    }

    pub fn eps_r(&self) -> f64 {
        1.0 + self.chi
    }

    /// Coefficient `Λ / (Ψ ε_r)` of the free charge in the Poisson equation.
    pub fn poisson_coupling(&self) -> f64 {
        self.lambda / (self.psi * self.eps_r())
    }

    /// Coefficient `Ψ / K̂` of the density equation.
    pub fn density_coupling(&self) -> f64 {
        self.psi / self.khat
    }

    /// Same mixture at temperature `tau * T`: Ψ, Λ and K̂ all scale with `1 / tau`.
    pub fn at_temperature_scale(&self, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!("temperature scale must be positive, got {tau}")));
        }
        Ok(MixtureSpec {
            psi: self.psi / tau,
            lambda: self.lambda / tau,
            khat: self.khat / tau,
            ..self.clone()
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.species.is_empty() {
            return Err(Error::InvalidParameter("mixture needs at least one ionic species".into()));
        }
        for s in &self.species {
            if !(s.mass_ratio > 0.0 && s.mass_ratio.is_finite()) {
                return Err(Error::InvalidParameter(format!("{}: mass ratio must be positive", s.name)));
            }
            if !(s.y_avg > 0.0 && s.y_avg < 1.0) {
                return Err(Error::InvalidParameter(format!("{}: average fraction must lie in (0, 1)", s.name)));
            }
        }
        let total: f64 = self.species.iter().map(|s| s.y_avg).sum();
        if total >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "average ion fractions sum to {total}; the solvent fraction must stay positive"
            )));
        }
        for (name, v) in [("psi", self.psi), ("lambda", self.lambda), ("khat", self.khat), ("n_avg", self.n_avg)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be finite and positive, got {v}")));
            }
        }
        if !(self.chi >= 0.0 && self.chi.is_finite()) {
            return Err(Error::InvalidParameter(format!("chi must be non-negative, got {}", self.chi)));
        }
        Ok(())
    }
}

/// Physical reference values from which the dimensionless groups follow.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalScales {
    /// Temperature in K.
    pub temperature: f64,
    /// Elementary charge in C.
    pub e0: f64,
    /// Boltzmann constant in J/K.
    pub kb: f64,
    /// Vacuum permittivity in F/m.
    pub eps0: f64,
    /// Reference number density in 1/m^3.
    pub n0: f64,
    /// Length scale in m.
    pub x0: f64,
    /// Potential scale in V.
    pub phi_bc: f64,
    /// Bulk modulus in Pa.
    pub bulk_modulus: f64,
}

impl PhysicalScales {
    pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
    pub const BOLTZMANN: f64 = 1.380_649e-23;
    pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DimensionlessGroups {
    pub psi: f64,
    pub lambda: f64,
    pub khat: f64,
}

/// `Ψ = e0 φ_BC / (k T)`, `Λ = e0² n0 x0² / (ε0 k T)`, `K̂ = K / (n0 k T)`.
pub fn nondimensionalize(s: &PhysicalScales) -> Result<DimensionlessGroups> {
    if !(s.temperature > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "temperature must be positive, got {}",
            s.temperature
        )));
    }
    for (name, v) in [
        ("e0", s.e0),
        ("kb", s.kb),
        ("eps0", s.eps0),
        ("n0", s.n0),
        ("x0", s.x0),
        ("phi_bc", s.phi_bc),
        ("bulk_modulus", s.bulk_modulus),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} must be finite and positive, got {v}")));
        }
    }
    let kt = s.kb * s.temperature;
    Ok(DimensionlessGroups {
        psi: s.e0 * s.phi_bc / kt,
        lambda: s.e0 * s.e0 * s.n0 * s.x0 * s.x0 / (s.eps0 * kt),
        khat: s.bulk_modulus / (s.n0 * kt),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scales(t: f64) -> PhysicalScales {
        PhysicalScales {
            temperature: t,
            e0: PhysicalScales::ELEMENTARY_CHARGE,
            kb: PhysicalScales::BOLTZMANN,
            eps0: PhysicalScales::VACUUM_PERMITTIVITY,
            n0: 1e26,
            x0: 1e-9,
            phi_bc: PhysicalScales::BOLTZMANN * 300.0 / PhysicalScales::ELEMENTARY_CHARGE,
            bulk_modulus: 1e26 * PhysicalScales::BOLTZMANN * 300.0,
        }
    }

    #[test]
    fn thermal_voltage_gives_unit_psi() {
        let g = nondimensionalize(&scales(300.0)).unwrap();
        assert!((g.psi - 1.0).abs() < 1e-14);
        assert!((scales(300.0).phi_bc - 0.025_852).abs() < 1e-5);
        // K = n0 k T
        assert!((g.khat - 1.0).abs() < 1e-14);
    }

    #[test]
    fn doubling_temperature_halves_groups() {
        let a = nondimensionalize(&scales(300.0)).unwrap();
        let b = nondimensionalize(&scales(600.0)).unwrap();
        for (x, y) in [(a.psi, b.psi), (a.lambda, b.lambda), (a.khat, b.khat)] {
            assert!((x / y - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn non_positive_temperature_rejected() {
        assert!(nondimensionalize(&scales(0.0)).is_err());
        assert!(nondimensionalize(&scales(-5.0)).is_err());
    }

    #[test]
    fn defaults_are_valid() {
        let m = MixtureSpec::symmetric_default();
        m.validate().unwrap();
        assert_eq!(m.eps_r(), 2.0);
        assert_eq!(m.poisson_coupling(), 500.0);
    }

    #[test]
    fn temperature_scale_divides_groups() {
        let m = MixtureSpec::symmetric_default().at_temperature_scale(2.0).unwrap();
        assert_eq!((m.psi, m.lambda, m.khat), (0.5, 500.0, 0.5));
        assert!(MixtureSpec::symmetric_default().at_temperature_scale(0.0).is_err());
    }

    #[test]
    fn solvent_must_stay_positive() {
        let mut m = MixtureSpec::symmetric_default();
        m.species[0].y_avg = 0.6;
        assert!(m.validate().is_err());
    }
}
