use crate::mesh::BoundaryTag;

/// Boundary and forcing data of the coupled system.
///
/// Everything except the Dirichlet values defaults to zero, which is the
/// setting of all physical studies. `normal` is the outward unit normal.
pub trait ProblemData: Sync {
    /// Potential prescribed on the electrode boundaries.
    fn dirichlet(&self, x: &[f64], tag: BoundaryTag) -> f64;

    /// Whether any source or Neumann term below is nonzero. When false the
    /// assembly skips their evaluation.
    fn has_forcing(&self) -> bool {
        false
    }

    fn ion_source(&self, _alpha: usize, _x: &[f64]) -> f64 {
        0.0
    }

    fn density_source(&self, _x: &[f64]) -> f64 {
        0.0
    }

    fn potential_source(&self, _x: &[f64]) -> f64 {
        0.0
    }

    /// Prescribed `J_α · ν` on the whole boundary.
    fn ion_normal_flux(&self, _alpha: usize, _x: &[f64], _normal: &[f64]) -> f64 {
        0.0
    }

    /// Prescribed `(∇n + κ q n ∇φ) · ν` on the whole boundary.
    fn density_normal_flux(&self, _x: &[f64], _normal: &[f64]) -> f64 {
        0.0
    }

    /// Prescribed `∇φ · ν` on the Neumann part of the boundary.
    fn potential_normal_flux(&self, _x: &[f64], _normal: &[f64]) -> f64 {
        0.0
    }
}

/// Constant potentials on the two electrodes, no forcing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElectrodeVoltage {
    pub left: f64,
    pub right: f64,
}

impl ElectrodeVoltage {
    /// `-voltage` on the left electrode, `+voltage` on the right.
    pub fn symmetric(voltage: f64) -> Self {
        ElectrodeVoltage {
            left: -voltage,
            right: voltage,
        }
    }
}

impl ProblemData for ElectrodeVoltage {
    fn dirichlet(&self, _x: &[f64], tag: BoundaryTag) -> f64 {
        match tag {
            BoundaryTag::GammaDR => self.right,
            _ => self.left,
        }
    }
}

/// Scales the Dirichlet data of `inner` by `factor`; used by voltage continuation.
pub struct Ramped<'a> {
    pub inner: &'a dyn ProblemData,
    pub factor: f64,
}

impl ProblemData for Ramped<'_> {
    fn dirichlet(&self, x: &[f64], tag: BoundaryTag) -> f64 {
        self.factor * self.inner.dirichlet(x, tag)
    }

    fn has_forcing(&self) -> bool {
        self.inner.has_forcing()
    }

    fn ion_source(&self, alpha: usize, x: &[f64]) -> f64 {
        self.inner.ion_source(alpha, x)
    }

    fn density_source(&self, x: &[f64]) -> f64 {
        self.inner.density_source(x)
    }

    fn potential_source(&self, x: &[f64]) -> f64 {
        self.inner.potential_source(x)
    }

    fn ion_normal_flux(&self, alpha: usize, x: &[f64], normal: &[f64]) -> f64 {
        self.inner.ion_normal_flux(alpha, x, normal)
    }

    fn density_normal_flux(&self, x: &[f64], normal: &[f64]) -> f64 {
        self.inner.density_normal_flux(x, normal)
    }

    fn potential_normal_flux(&self, x: &[f64], normal: &[f64]) -> f64 {
        self.inner.potential_normal_flux(x, normal)
    }
}
