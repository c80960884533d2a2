//! Discrete weak form of the coupled system and its Newton linearization.
//!
//! For test function `v` and the outward normal `ν`, the rows are
//!
//! ```text
//! ion α:    ∫ J_α·∇v − ∫_∂Ω g_α v + c_α ∫ v − ∫ f_α v
//! density:  ∫ (∇n + κ q n ∇φ)·∇v − ∫_∂Ω g_n v + c_n ∫ v − ∫ f_n v
//! potential: ∫ ∇φ·∇v − ∫_ΓN g_φ v − ∫ λ q n v − ∫ f_φ v
//! ```
//!
//! with `q = Σ z_α y_α`, `κ = Ψ / K̂` and `λ = Λ / (Ψ ε_r)`, followed by one
//! mean constraint per multiplier. Potential rows at electrode nodes are
//! replaced by `φ − g`.

use super::coeffs::{check_fractions, electric_coeff};
use super::mixture::MixtureSpec;
use super::problem::ProblemData;
use super::state::{Layout, SolutionState};
use crate::error::{Error, Result};
use crate::fem::{assemble, block_pattern, reference_measure, DirectSolver, ElementData, LinearSystem, LocalSystem, P1Space};
use crate::mesh::BoundaryTag;

/// Function space, dof layout and reusable sparsity data for a fixed mesh and species count.
pub struct Discretization {
    space: P1Space,
    layout: Layout,
    template: LinearSystem,
    solver: DirectSolver,
    dirichlet: Vec<(usize, BoundaryTag)>,
}

impl Discretization {
    pub fn new(space: P1Space, ions: usize) -> Self {
        let layout = Layout::new(ions, space.dof_count());
        let template = LinearSystem::new(block_pattern(&space, layout.fields()), layout.multipliers());
        let solver = DirectSolver::new(&template);
        let mut tags: Vec<Option<BoundaryTag>> = vec![None; layout.nodes];
        for f in space.boundary() {
            if f.tag.is_dirichlet() {
                for &v in space.facet_dofs(f) {
                    tags[v].get_or_insert(f.tag);
                }
            }
        }
        let dirichlet = tags.iter().enumerate().filter_map(|(v, t)| t.map(|t| (v, t))).collect();
        Discretization {
            space,
            layout,
            template,
            solver,
            dirichlet,
        }
    }

    pub fn space(&self) -> &P1Space {
        &self.space
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn solver(&self) -> &DirectSolver {
        &self.solver
    }

    /// Electrode vertices with the tag of their electrode.
    pub fn dirichlet_nodes(&self) -> &[(usize, BoundaryTag)] {
        &self.dirichlet
    }

    /// Sets the potential at electrode nodes to the prescribed values.
    pub fn impose_dirichlet(&self, state: &mut SolutionState, data: &dyn ProblemData) {
        for &(v, tag) in &self.dirichlet {
            state.phi[v] = data.dirichlet(self.space.mesh().vertex(v), tag);
        }
    }

    /// Domain average of a nodal field, exact for P1.
    pub fn mean(&self, field: &[f64]) -> f64 {
        crate::fem::integrate(&self.space, field) / self.space.domain_measure()
    }

    /// Largest deviation of the field means from their prescribed values.
    pub fn constraint_violation(&self, spec: &MixtureSpec, state: &SolutionState) -> f64 {
        let mut worst = (self.mean(&state.n) - spec.n_avg).abs();
        for (f, s) in state.y.iter().zip(&spec.species) {
            worst = worst.max((self.mean(f) - s.y_avg).abs());
        }
        worst
    }

    /// Nodal admissibility: ion and solvent fractions inside the guard band, `n > 0`.
    pub fn check_admissible(&self, state: &SolutionState) -> Result<()> {
        let mut y = vec![0.0; self.layout.ions];
        for i in 0..self.layout.nodes {
            for (a, f) in state.y.iter().enumerate() {
                y[a] = f[i];
            }
            let mut detail = check_fractions(&y).err();
            if detail.is_none() && !(state.n[i] > 0.0) {
                detail = Some(format!("number density {} not positive", state.n[i]));
            }
            if let Some(detail) = detail {
                return Err(Error::SolventDepletion {
                    node: Some(i),
                    location: self.space.mesh().vertex(i).to_vec(),
                    detail,
                });
            }
        }
        Ok(())
    }

    pub fn residual(&self, spec: &MixtureSpec, state: &SolutionState, data: &dyn ProblemData) -> Result<Vec<f64>> {
        self.evaluate(spec, state, data, None)
    }

    /// Jacobian at `state`, with the residual as right-hand side.
    pub fn linearize(
        &self,
        spec: &MixtureSpec,
        state: &SolutionState,
        data: &dyn ProblemData,
    ) -> Result<LinearSystem> {
        let mut system = self.template.clone();
        let r = self.evaluate(spec, state, data, Some(&mut system))?;
        system.rhs = r;
        Ok(system)
    }

    fn evaluate(
        &self,
        spec: &MixtureSpec,
        state: &SolutionState,
        data: &dyn ProblemData,
        mut system: Option<&mut LinearSystem>,
    ) -> Result<Vec<f64>> {
        let l = self.layout;
        if spec.num_ions() != l.ions {
            return Err(Error::DimensionMismatch(format!(
                "mixture has {} ions, discretization {}",
                spec.num_ions(),
                l.ions
            )));
        }
        state.check_dimensions(l.nodes, l.ions)?;
        self.check_admissible(state)?;

        let space = &self.space;
        let dim = space.dim();
        let forcing = data.has_forcing();
        let mut r = vec![0.0; l.size()];
        let mut work = Workspace::new(l.ions, dim + 1);
        let jac = system.is_some();
        let matrix = system.as_deref_mut().map(|s| &mut s.matrix);
        assemble(space, l.fields(), matrix, &mut r[..l.core_size()], |e, local| {
            element(spec, state, data, forcing, jac, dim, e, local, &mut work)
        })?;

        // multipliers couple into ion and density rows through the node masses
        let mass = space.node_mass();
        let coupled: Vec<usize> = (0..l.ions).chain([l.density_field()]).collect();
        let c_values: Vec<f64> = state.c.iter().copied().chain([state.c_n]).collect();
        for (j, &field) in coupled.iter().enumerate() {
            for (i, &m) in mass.iter().enumerate() {
                r[l.dof(field, i)] += c_values[j] * m;
            }
        }

        if forcing {
            self.boundary_terms(data, &mut r);
        }

        let measure = space.domain_measure();
        for (j, &field) in coupled.iter().enumerate() {
            let (values, target) = if field == l.density_field() {
                (&state.n, spec.n_avg)
            } else {
                (&state.y[field], spec.species[field].y_avg)
            };
            let integral: f64 = mass.iter().zip(values).map(|(m, u)| m * u).sum();
            r[l.multiplier(j)] = integral - target * measure;
        }

        let pf = l.potential_field();
        for &(v, tag) in &self.dirichlet {
            let x = space.mesh().vertex(v);
            r[l.dof(pf, v)] = state.phi[v] - data.dirichlet(x, tag);
        }

        if let Some(i) = r.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteResidual { dof: i });
        }

        if let Some(s) = system {
            for (j, &field) in coupled.iter().enumerate() {
                for (i, &m) in mass.iter().enumerate() {
                    s.border_cols[j][l.dof(field, i)] = m;
                    s.border_rows[j][l.dof(field, i)] = m;
                }
            }
            for &(v, _) in &self.dirichlet {
                s.matrix.set_identity_row(l.dof(pf, v));
            }
        }
        Ok(r)
    }

    fn boundary_terms(&self, data: &dyn ProblemData, r: &mut [f64]) {
        let l = self.layout;
        let space = &self.space;
        let dim = space.dim();
        let fq = space.facet_quadrature();
        let scale_ref = reference_measure(dim - 1);
        for f in space.boundary() {
            let dofs = space.facet_dofs(f);
            let normal = &f.normal[..dim];
            for (bary, &wq) in fq.points.iter().zip(&fq.weights) {
                let w = wq * f.measure / scale_ref;
                let x = space.map_facet_point(f, bary);
                let x = &x[..dim];
                for a in 0..l.ions {
                    let g = data.ion_normal_flux(a, x, normal);
                    for (&v, &lam) in dofs.iter().zip(bary) {
                        r[l.dof(a, v)] -= w * g * lam;
                    }
                }
                let g = data.density_normal_flux(x, normal);
                for (&v, &lam) in dofs.iter().zip(bary) {
                    r[l.dof(l.density_field(), v)] -= w * g * lam;
                }
                if f.tag == BoundaryTag::GammaN {
                    let g = data.potential_normal_flux(x, normal);
                    for (&v, &lam) in dofs.iter().zip(bary) {
                        r[l.dof(l.potential_field(), v)] -= w * g * lam;
                    }
                }
            }
        }
    }
}

/// Per-cell scratch buffers.
struct Workspace {
    y_nodes: Vec<Vec<f64>>,
    grad_y: Vec<[f64; 3]>,
    y_q: Vec<f64>,
    gg: Vec<f64>,
    y_dot: Vec<f64>,
    s_dot: Vec<f64>,
    phi_dot: Vec<f64>,
}

impl Workspace {
    fn new(ions: usize, k: usize) -> Self {
        Workspace {
            y_nodes: vec![vec![0.0; k]; ions],
            grad_y: vec![[0.0; 3]; ions],
            y_q: vec![0.0; ions],
            gg: vec![0.0; k * k],
            y_dot: vec![0.0; ions * k],
            s_dot: vec![0.0; k],
            phi_dot: vec![0.0; k],
        }
    }
}

#[inline]
fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn gradient(grads: &[[f64; 3]], values: impl Iterator<Item = f64>) -> [f64; 3] {
    let mut g = [0.0; 3];
    for (ga, u) in grads.iter().zip(values) {
        for d in 0..3 {
            g[d] += ga[d] * u;
        }
    }
    g
}

#[allow(clippy::too_many_arguments)]
fn element(
    spec: &MixtureSpec,
    state: &SolutionState,
    data: &dyn ProblemData,
    forcing: bool,
    jac: bool,
    dim: usize,
    e: &ElementData<'_>,
    local: &mut LocalSystem,
    w: &mut Workspace,
) -> Result<()> {
    let ions = spec.num_ions();
    let k = e.vertices.len();
    let fn_ = ions;
    let fp = ions + 1;
    let g = &e.geometry.grads;
    let scale = e.geometry.measure / reference_measure(dim);
    let kappa = spec.density_coupling();
    let lc = spec.poisson_coupling();

    for a in 0..ions {
        for (i, &v) in e.vertices.iter().enumerate() {
            w.y_nodes[a][i] = state.y[a][v];
        }
        w.grad_y[a] = gradient(g, w.y_nodes[a].iter().copied());
    }
    let n_nodes: Vec<f64> = e.vertices.iter().map(|&v| state.n[v]).collect();
    let grad_n = gradient(g, n_nodes.iter().copied());
    let grad_phi = gradient(g, e.vertices.iter().map(|&v| state.phi[v]));
    let mut s = [0.0; 3];
    for gy in &w.grad_y {
        for d in 0..3 {
            s[d] += gy[d];
        }
    }
    for a in 0..k {
        for b in 0..k {
            w.gg[a * k + b] = dot(&g[a], &g[b]);
        }
        w.s_dot[a] = dot(&s, &g[a]);
        w.phi_dot[a] = dot(&grad_phi, &g[a]);
        for al in 0..ions {
            w.y_dot[al * k + a] = dot(&w.grad_y[al], &g[a]);
        }
    }
    let charges: Vec<f64> = spec.species.iter().map(|s| s.charge as f64).collect();
    let grad_n_dot: Vec<f64> = g.iter().map(|ga| dot(&grad_n, ga)).collect();

    let quad = e.quadrature;
    for (q, lam) in quad.points.iter().enumerate() {
        let wq = quad.weights[q] * scale;
        let x = &e.points[q][..dim];
        for al in 0..ions {
            w.y_q[al] = (0..k).map(|i| lam[i] * w.y_nodes[al][i]).sum();
        }
        let nq: f64 = (0..k).map(|i| lam[i] * n_nodes[i]).sum();
        let yn = 1.0 - w.y_q.iter().sum::<f64>();
        let qc: f64 = charges.iter().zip(&w.y_q).map(|(z, y)| z * y).sum();

        for al in 0..ions {
            let m = spec.species[al].mass_ratio;
            let ya = w.y_q[al];
            let dphi = electric_coeff(spec, al, qc);
            let src = if forcing { data.ion_source(al, x) } else { 0.0 };
            let row = al * k;
            for a in 0..k {
                // J·∇λ_a
                let jg = -w.y_dot[row + a] / (m * ya) - w.s_dot[a] / yn + dphi * w.phi_dot[a];
                local.vector[row + a] += wq * (jg - src * lam[a]);
            }
            if !jac {
                continue;
            }
            let cross = spec.psi * (1.0 / m - 1.0);
            for a in 0..k {
                let i = row + a;
                for be in 0..ions {
                    for b in 0..k {
                        let gab = w.gg[a * k + b];
                        let mut v = -gab / yn - w.s_dot[a] * lam[b] / (yn * yn)
                            + cross * charges[be] * lam[b] * w.phi_dot[a];
                        if be == al {
                            v += w.y_dot[row + a] * lam[b] / (m * ya * ya) - gab / (m * ya);
                        }
                        local.add_matrix(i, be * k + b, wq * v);
                    }
                }
                for b in 0..k {
                    local.add_matrix(i, fp * k + b, wq * dphi * w.gg[a * k + b]);
                }
            }
        }

        let src_n = if forcing { data.density_source(x) } else { 0.0 };
        let src_phi = if forcing { data.potential_source(x) } else { 0.0 };
        for a in 0..k {
            let fg = grad_n_dot[a] + kappa * qc * nq * w.phi_dot[a];
            local.vector[fn_ * k + a] += wq * (fg - src_n * lam[a]);
            let pg = w.phi_dot[a] - lc * qc * nq * lam[a] - src_phi * lam[a];
            local.vector[fp * k + a] += wq * pg;
        }
        if !jac {
            continue;
        }
        for a in 0..k {
            let (rn, rp) = (fn_ * k + a, fp * k + a);
            for b in 0..k {
                let gab = w.gg[a * k + b];
                for be in 0..ions {
                    local.add_matrix(rn, be * k + b, wq * kappa * charges[be] * lam[b] * nq * w.phi_dot[a]);
                    local.add_matrix(rp, be * k + b, -wq * lc * charges[be] * nq * lam[b] * lam[a]);
                }
                local.add_matrix(rn, fn_ * k + b, wq * (gab + kappa * qc * lam[b] * w.phi_dot[a]));
                local.add_matrix(rn, fp * k + b, wq * kappa * qc * nq * gab);
                local.add_matrix(rp, fn_ * k + b, -wq * lc * qc * lam[b] * lam[a]);
                local.add_matrix(rp, fp * k + b, wq * gab);
            }
        }
    }
    Ok(())
}
