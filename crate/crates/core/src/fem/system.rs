use super::lu::{CscMatrix, SparseLu};
use super::ordering::nested_dissection;
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 0.1;
const REFINEMENT_STEPS: usize = 3;
/// Backward-error bound demanded of [`DirectSolver::solve`].
pub const BACKWARD_ERROR_TOL: f64 = 1e-10;

/// Sparse core block bordered by dense rows and columns, one per constraint.
///
/// ```text
/// [ A   C ] [x]   [b]
/// [ R   Z ] [c] = [d]
/// ```
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub matrix: CsrMatrix,
    /// `C`: column `j` couples multiplier `j` into the core rows.
    pub border_cols: Vec<Vec<f64>>,
    /// `R`: row `j` is constraint `j` acting on the core unknowns.
    pub border_rows: Vec<Vec<f64>>,
    /// `Z`, row-major `k x k`.
    pub corner: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl LinearSystem {
    /// Zero bordered system on the given core pattern with `k` constraints.
    pub fn new(matrix: CsrMatrix, k: usize) -> Self {
        let n = matrix.nrows();
        LinearSystem {
            border_cols: vec![vec![0.0; n]; k],
            border_rows: vec![vec![0.0; n]; k],
            corner: vec![0.0; k * k],
            rhs: vec![0.0; n + k],
            matrix,
        }
    }

    pub fn core_size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn border_count(&self) -> usize {
        self.border_rows.len()
    }

    pub fn size(&self) -> usize {
        self.core_size() + self.border_count()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.core_size();
        let k = self.border_count();
        assert_eq!(x.len(), n + k);
        let mut y = self.matrix.mul_vec(&x[..n]);
        for (j, col) in self.border_cols.iter().enumerate() {
            let cj = x[n + j];
            if cj != 0.0 {
                for (yi, &v) in y.iter_mut().zip(col) {
                    *yi += v * cj;
                }
            }
        }
        for (j, row) in self.border_rows.iter().enumerate() {
            let mut s: f64 = row.iter().zip(&x[..n]).map(|(a, b)| a * b).sum();
            for (i, xi) in x[n..].iter().enumerate() {
                s += self.corner[j * k + i] * xi;
            }
            y.push(s);
        }
        y
    }

    pub fn norm_inf(&self) -> f64 {
        let n = self.core_size();
        let k = self.border_count();
        let mut norm: f64 = 0.0;
        for r in 0..n {
            let s: f64 = self.matrix.row(r).map(|(_, v)| v.abs()).sum::<f64>()
                + self.border_cols.iter().map(|c| c[r].abs()).sum::<f64>();
            norm = norm.max(s);
        }
        for (j, row) in self.border_rows.iter().enumerate() {
            let s: f64 = row.iter().map(|v| v.abs()).sum::<f64>()
                + self.corner[j * k..(j + 1) * k].iter().map(|v| v.abs()).sum::<f64>();
            norm = norm.max(s);
        }
        norm
    }

    /// Full matrix in CSC form; exact zeros in the dense border are dropped.
    pub fn to_csc(&self) -> CscMatrix {
        let n = self.core_size();
        let k = self.border_count();
        let total = n + k;
        let m = &self.matrix;
        let mut counts = vec![0usize; total];
        for &c in m.col_idx() {
            counts[c] += 1;
        }
        for row in &self.border_rows {
            for (c, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    counts[c] += 1;
                }
            }
        }
        for j in 0..k {
            counts[n + j] = self.border_cols[j].iter().filter(|&&v| v != 0.0).count()
                + (0..k).filter(|&i| self.corner[i * k + j] != 0.0).count();
        }
        let mut col_ptr = Vec::with_capacity(total + 1);
        col_ptr.push(0);
        for c in &counts {
            col_ptr.push(col_ptr.last().unwrap() + c);
        }
        let nnz = *col_ptr.last().unwrap();
        let mut next = col_ptr.clone();
        let mut row_idx = vec![0; nnz];
        let mut values = vec![0.0; nnz];
        let mut put = |r: usize, c: usize, v: f64| {
            let p = next[c];
            row_idx[p] = r;
            values[p] = v;
            next[c] += 1;
        };
        // rows visited in increasing order keep each column sorted
        for r in 0..n {
            for (c, v) in m.row(r) {
                put(r, c, v);
            }
            for (j, col) in self.border_cols.iter().enumerate() {
                if col[r] != 0.0 {
                    put(r, n + j, col[r]);
                }
            }
        }
        for (j, row) in self.border_rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    put(n + j, c, v);
                }
            }
            for i in 0..k {
                let v = self.corner[j * k + i];
                if v != 0.0 {
                    put(n + j, n + i, v);
                }
            }
        }
        CscMatrix {
            n: total,
            col_ptr,
            row_idx,
            values,
        }
    }
}

/// Direct solver holding a fill-reducing order computed once per sparsity pattern.
#[derive(Clone, Debug)]
pub struct DirectSolver {
    order: Vec<usize>,
}

impl DirectSolver {
    /// Orders the core block by nested dissection; border unknowns go last.
    pub fn new(system: &LinearSystem) -> Self {
        let m = &system.matrix;
        let n = m.nrows();
        let mut adj: Vec<Vec<usize>> = (0..n)
            .map(|r| m.row(r).map(|(c, _)| c).filter(|&c| c != r).collect())
            .collect();
        // symmetrize in case the pattern is not
        for r in 0..n {
            for idx in 0..adj[r].len() {
                let c = adj[r][idx];
                if c > r && adj[c].binary_search(&r).is_err() {
                    adj[c].push(r);
                }
            }
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        let mut order = nested_dissection(&adj);
        order.extend(n..n + system.border_count());
        DirectSolver { order }
    }

    /// Factorizes and solves, with a few steps of iterative refinement.
    pub fn solve(&self, system: &LinearSystem) -> Result<Vec<f64>> {
        let total = system.size();
        if self.order.len() != total || system.rhs.len() != total {
            return Err(Error::DimensionMismatch(format!(
                "system of size {total} with rhs of length {} and ordering of length {}",
                system.rhs.len(),
                self.order.len()
            )));
        }
        let csc = system.to_csc();
        let lu = SparseLu::factor(&csc, &self.order, PIVOT_TOL)?;
        let b = &system.rhs;
        let mut x = lu.solve(b);
        let a_norm = system.norm_inf();
        let b_norm = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for _ in 0..REFINEMENT_STEPS {
            let ax = system.mul_vec(&x);
            let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
            let r_norm = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let x_norm = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if r_norm <= 1e-3 * BACKWARD_ERROR_TOL * (a_norm * x_norm + b_norm) {
                break;
            }
            let dx = lu.solve(&r);
            for (xi, d) in x.iter_mut().zip(dx) {
                *xi += d;
            }
        }
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::SingularMatrix { pivot: i });
        }
        Ok(x)
    }
}

/// One-off direct solve of a bordered system.
pub fn solve_direct(system: &LinearSystem) -> Result<Vec<f64>> {
    DirectSolver::new(system).solve(system)
}

/// Relative backward error `‖Ax − b‖∞ / (‖A‖∞‖x‖∞ + ‖b‖∞)`.
pub fn backward_error(system: &LinearSystem, x: &[f64]) -> f64 {
    let ax = system.mul_vec(x);
    let r = system.rhs.iter().zip(&ax).fold(0.0f64, |m, (b, a)| m.max((b - a).abs()));
    let x_norm = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let b_norm = system.rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    r / (system.norm_inf() * x_norm + b_norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{laplace_matrix, mass_matrix, P1Space};
    use crate::mesh::{interval_mesh, square_mesh};

    fn dense_oracle(system: &LinearSystem) -> Vec<f64> {
        let n = system.size();
        let mut a = nalgebra::DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let col = system.mul_vec(&e);
            for i in 0..n {
                a[(i, j)] = col[i];
            }
        }
        let b = nalgebra::DVector::from_column_slice(&system.rhs);
        a.lu().solve(&b).expect("dense oracle: singular").as_slice().to_vec()
    }

    #[test]
    fn identity_returns_rhs() {
        let mut s = LinearSystem::new(CsrMatrix::identity(5), 0);
        s.rhs = vec![1.0, -2.0, 3.5, 0.0, 7.0];
        assert_eq!(solve_direct(&s).unwrap(), s.rhs);
    }

    #[test]
    fn poisson_1d_is_nodally_exact() {
        let n = 16;
        let space = P1Space::new(interval_mesh(n).unwrap()).unwrap();
        let mut s = LinearSystem::new(laplace_matrix(&space).unwrap(), 0);
        s.rhs[..n + 1].copy_from_slice(space.node_mass());
        for b in [0, n] {
            s.matrix.set_identity_row(b);
            s.rhs[b] = 0.0;
        }
        let u = solve_direct(&s).unwrap();
        for (i, ui) in u.iter().enumerate() {
            let x = i as f64 / n as f64;
            assert!((ui - x * (1.0 - x) / 2.0).abs() < 1e-14);
        }
    }

    fn neumann_bordered(nx: usize) -> (P1Space, LinearSystem) {
        let space = P1Space::new(square_mesh(nx, nx).unwrap()).unwrap();
        let nv = space.dof_count();
        let mut s = LinearSystem::new(laplace_matrix(&space).unwrap(), 1);
        s.border_cols[0].copy_from_slice(space.node_mass());
        s.border_rows[0].copy_from_slice(space.node_mass());
        // source with nonzero mean: the multiplier absorbs the incompatibility
        let m = mass_matrix(&space).unwrap();
        let f = space.interpolate(|x| (3.0 * x[0]).sin() + x[1] * x[1]);
        let mf = m.mul_vec(&f);
        s.rhs[..nv].copy_from_slice(&mf);
        (space, s)
    }

    #[test]
    fn bordered_pure_neumann_matches_dense_oracle() {
        let (space, s) = neumann_bordered(6);
        let x = solve_direct(&s).unwrap();
        let oracle = dense_oracle(&s);
        for (a, b) in x.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-11, "{a} vs {b}");
        }
        let nv = space.dof_count();
        let mean: f64 = crate::fem::integrate(&space, &x[..nv]);
        assert!(mean.abs() < 1e-13);
        assert!(backward_error(&s, &x) < BACKWARD_ERROR_TOL);
    }

    #[test]
    fn backward_error_bound_on_larger_system() {
        let (_, s) = neumann_bordered(40);
        let x = solve_direct(&s).unwrap();
        assert!(backward_error(&s, &x) < BACKWARD_ERROR_TOL);
    }

    #[test]
    fn pure_neumann_without_border_is_singular() {
        let space = P1Space::new(square_mesh(4, 4).unwrap()).unwrap();
        let s = LinearSystem::new(laplace_matrix(&space).unwrap(), 0);
        assert!(matches!(solve_direct(&s), Err(Error::SingularMatrix { .. })));
    }
}
