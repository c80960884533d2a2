use crate::fem::quadrature;
use crate::mesh::BoundaryTag;
use crate::model::{MixtureSpec, ProblemData, SpeciesSpec};

/// `u = 1 / (c + x^p + y^q)` with analytic first and second derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RationalField {
    pub c: f64,
    pub p: i32,
    pub q: i32,
}

impl RationalField {
    fn s(&self, x: &[f64]) -> f64 {
        self.c + x[0].powi(self.p) + x[1].powi(self.q)
    }

    fn ds(&self, x: &[f64]) -> [f64; 2] {
        let (p, q) = (self.p as f64, self.q as f64);
        [p * x[0].powi(self.p - 1), q * x[1].powi(self.q - 1)]
    }

    fn d2s(&self, x: &[f64]) -> [f64; 2] {
        let (p, q) = (self.p as f64, self.q as f64);
        [p * (p - 1.0) * x[0].powi(self.p - 2), q * (q - 1.0) * x[1].powi(self.q - 2)]
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        1.0 / self.s(x)
    }

    pub fn grad(&self, x: &[f64]) -> [f64; 2] {
        let s = self.s(x);
        let ds = self.ds(x);
        [-ds[0] / (s * s), -ds[1] / (s * s)]
    }

    /// Second derivatives `[u_xx, u_xy, u_yy]`.
    pub fn hessian(&self, x: &[f64]) -> [f64; 3] {
        let s = self.s(x);
        let ds = self.ds(x);
        let d2 = self.d2s(x);
        let s3 = s * s * s;
        [
            2.0 * ds[0] * ds[0] / s3 - d2[0] / (s * s),
            2.0 * ds[0] * ds[1] / s3,
            2.0 * ds[1] * ds[1] / s3 - d2[1] / (s * s),
        ]
    }

    pub fn laplacian(&self, x: &[f64]) -> f64 {
        let h = self.hessian(x);
        h[0] + h[2]
    }
}

/// Manufactured solution on the unit square with a cation and an anion.
#[derive(Clone, Debug, PartialEq)]
pub struct MmsCase {
    /// Mixture with the exact field means as constraint targets.
    pub spec: MixtureSpec,
    pub cation: RationalField,
    pub anion: RationalField,
    pub potential: RationalField,
    pub density: RationalField,
}

fn dot2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Integral over the unit square by composite 3-point Gauss rules on a 32 x 32 grid.
fn unit_square_integral(f: impl Fn(&[f64]) -> f64) -> f64 {
    let rule = quadrature(1, 4).expect("interval rule");
    let m = 32;
    let h = 1.0 / m as f64;
    let mut sum = 0.0;
    for i in 0..m {
        for j in 0..m {
            for (pa, wa) in rule.points.iter().zip(&rule.weights) {
                for (pb, wb) in rule.points.iter().zip(&rule.weights) {
                    let x = [(i as f64 + pa[1]) * h, (j as f64 + pb[1]) * h];
                    sum += wa * wb * h * h * f(&x);
                }
            }
        }
    }
    sum
}

/// The verification setup: unit masses, `K̂ = 1`, `Λ = 1000`, `Ψ = 1`, `χ = 1`.
pub fn standard_mms_case() -> MmsCase {
    let cation = RationalField { c: 2.0, p: 4, q: 3 };
    let anion = RationalField { c: 3.0, p: 3, q: 2 };
    let potential = RationalField { c: 5.0, p: 2, q: 3 };
    let density = RationalField { c: 1.0, p: 3, q: 3 };
    let spec = MixtureSpec {
        species: vec![
            SpeciesSpec {
                name: "cation".into(),
                charge: 1,
                mass_ratio: 1.0,
                y_avg: unit_square_integral(|x| cation.value(x)),
            },
            SpeciesSpec {
                name: "anion".into(),
                charge: -1,
                mass_ratio: 1.0,
                y_avg: unit_square_integral(|x| anion.value(x)),
            },
        ],
        chi: 1.0,
        psi: 1.0,
        lambda: 1000.0,
        khat: 1.0,
        n_avg: unit_square_integral(|x| density.value(x)),
    };
    MmsCase {
        spec,
        cation,
        anion,
        potential,
        density,
    }
}

impl MmsCase {
    pub fn ions(&self) -> [&RationalField; 2] {
        [&self.cation, &self.anion]
    }

    fn charges(&self) -> [f64; 2] {
        [self.spec.species[0].charge as f64, self.spec.species[1].charge as f64]
    }

    /// Exact `[y_C, y_A, n, φ]` at `x`.
    pub fn exact(&self, x: &[f64]) -> [f64; 4] {
        [
            self.cation.value(x),
            self.anion.value(x),
            self.density.value(x),
            self.potential.value(x),
        ]
    }

    /// Exact ion flux `J_α`.
    pub fn ion_flux(&self, alpha: usize, x: &[f64]) -> [f64; 2] {
        let ions = self.ions();
        let y: Vec<f64> = ions.iter().map(|f| f.value(x)).collect();
        let g: Vec<[f64; 2]> = ions.iter().map(|f| f.grad(x)).collect();
        let m = self.spec.species[alpha].mass_ratio;
        let yn = 1.0 - y.iter().sum::<f64>();
        let z = self.charges();
        let q: f64 = z.iter().zip(&y).map(|(a, b)| a * b).sum();
        let dphi = self.spec.psi * ((1.0 / m - 1.0) * q - z[alpha] / m);
        let gp = self.potential.grad(x);
        let mut j = [0.0; 2];
        for d in 0..2 {
            let s: f64 = g.iter().map(|gi| gi[d]).sum();
            j[d] = -g[alpha][d] / (m * y[alpha]) - s / yn + dphi * gp[d];
        }
        j
    }

    /// Exact `∇n + κ q n ∇φ`.
    pub fn density_flux(&self, x: &[f64]) -> [f64; 2] {
        let kappa = self.spec.density_coupling();
        let q = self.charge_fraction(x);
        let n = self.density.value(x);
        let gn = self.density.grad(x);
        let gp = self.potential.grad(x);
        [gn[0] + kappa * q * n * gp[0], gn[1] + kappa * q * n * gp[1]]
    }

    fn charge_fraction(&self, x: &[f64]) -> f64 {
        let z = self.charges();
        z[0] * self.cation.value(x) + z[1] * self.anion.value(x)
    }

    /// `f_α = −∇·J_α`
    pub fn ion_source(&self, alpha: usize, x: &[f64]) -> f64 {
        let ions = self.ions();
        let y: Vec<f64> = ions.iter().map(|f| f.value(x)).collect();
        let g: Vec<[f64; 2]> = ions.iter().map(|f| f.grad(x)).collect();
        let lap: Vec<f64> = ions.iter().map(|f| f.laplacian(x)).collect();
        let m = self.spec.species[alpha].mass_ratio;
        let z = self.charges();
        let yn = 1.0 - y.iter().sum::<f64>();
        let s = [g[0][0] + g[1][0], g[0][1] + g[1][1]];
        let lap_sum: f64 = lap.iter().sum();
        let q: f64 = z.iter().zip(&y).map(|(a, b)| a * b).sum();
        let grad_q = [z[0] * g[0][0] + z[1] * g[1][0], z[0] * g[0][1] + z[1] * g[1][1]];
        let psi = self.spec.psi;
        let dphi = psi * ((1.0 / m - 1.0) * q - z[alpha] / m);
        let grad_dphi = [psi * (1.0 / m - 1.0) * grad_q[0], psi * (1.0 / m - 1.0) * grad_q[1]];
        let gp = self.potential.grad(x);
        let ya = y[alpha];
        // ∇·(∇y/(M y)) and ∇·(S / y_N) with ∇y_N = −S
        let self_term = lap[alpha] / (m * ya) - dot2(g[alpha], g[alpha]) / (m * ya * ya);
        let cross_term = lap_sum / yn + dot2(s, s) / (yn * yn);
        let electric = dphi * self.potential.laplacian(x) + dot2(grad_dphi, gp);
        let div = -self_term - cross_term + electric;
        -div
    }

    /// `f_n = −∇·(∇n + κ q n ∇φ)`
    pub fn density_source(&self, x: &[f64]) -> f64 {
        let kappa = self.spec.density_coupling();
        let z = self.charges();
        let gc = self.cation.grad(x);
        let ga = self.anion.grad(x);
        let grad_q = [z[0] * gc[0] + z[1] * ga[0], z[0] * gc[1] + z[1] * ga[1]];
        let q = self.charge_fraction(x);
        let n = self.density.value(x);
        let gn = self.density.grad(x);
        let gp = self.potential.grad(x);
        let div = self.density.laplacian(x)
            + kappa * (n * dot2(grad_q, gp) + q * dot2(gn, gp) + q * n * self.potential.laplacian(x));
        -div
    }

    /// `f_φ = −Δφ − λ q n`
    pub fn potential_source(&self, x: &[f64]) -> f64 {
        -self.potential.laplacian(x) - self.spec.poisson_coupling() * self.charge_fraction(x) * self.density.value(x)
    }
}

impl ProblemData for MmsCase {
    fn dirichlet(&self, x: &[f64], _tag: BoundaryTag) -> f64 {
        self.potential.value(x)
    }

    fn has_forcing(&self) -> bool {
        true
    }

    fn ion_source(&self, alpha: usize, x: &[f64]) -> f64 {
        MmsCase::ion_source(self, alpha, x)
    }

    fn density_source(&self, x: &[f64]) -> f64 {
        MmsCase::density_source(self, x)
    }

    fn potential_source(&self, x: &[f64]) -> f64 {
        MmsCase::potential_source(self, x)
    }

    fn ion_normal_flux(&self, alpha: usize, x: &[f64], normal: &[f64]) -> f64 {
        let j = self.ion_flux(alpha, x);
        j[0] * normal[0] + j[1] * normal[1]
    }

    fn density_normal_flux(&self, x: &[f64], normal: &[f64]) -> f64 {
        let f = self.density_flux(x);
        f[0] * normal[0] + f[1] * normal[1]
    }

    fn potential_normal_flux(&self, x: &[f64], normal: &[f64]) -> f64 {
        let g = self.potential.grad(x);
        g[0] * normal[0] + g[1] * normal[1]
    }
}
