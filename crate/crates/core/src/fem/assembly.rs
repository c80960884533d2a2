use super::quadrature::QuadratureRule;
use super::space::{CellGeometry, P1Space};
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

/// Global dof of `(field, vertex)` in the field-blocked numbering.
#[inline]
pub fn block_dof(nodes: usize, field: usize, vertex: usize) -> usize {
    field * nodes + vertex
}

/// Sparsity pattern coupling every field with every field over the vertex graph.
pub fn block_pattern(space: &P1Space, fields: usize) -> CsrMatrix {
    let nv = space.dof_count();
    let mut rows = Vec::with_capacity(fields * nv);
    for _ in 0..fields {
        for nb in space.neighbors() {
            let mut r = Vec::with_capacity(fields * nb.len());
            for g in 0..fields {
                r.extend(nb.iter().map(|&v| block_dof(nv, g, v)));
            }
            rows.push(r);
        }
    }
    CsrMatrix::from_pattern(fields * nv, rows)
}

/// Per-cell data handed to an element kernel.
pub struct ElementData<'a> {
    pub cell: usize,
    pub vertices: &'a [usize],
    pub geometry: &'a CellGeometry,
    pub quadrature: &'a QuadratureRule,
    /// Physical coordinates of the quadrature points.
    pub points: &'a [[f64; 3]],
}

/// Local matrix and vector, indexed by `field * (dim + 1) + local_vertex`.
pub struct LocalSystem {
    pub n: usize,
    pub matrix: Vec<f64>,
    pub vector: Vec<f64>,
}

impl LocalSystem {
    fn new(n: usize) -> Self {
        LocalSystem {
            n,
            matrix: vec![0.0; n * n],
            vector: vec![0.0; n],
        }
    }

    #[inline]
    pub fn add_matrix(&mut self, i: usize, j: usize, v: f64) {
        self.matrix[i * self.n + j] += v;
    }

    fn clear(&mut self) {
        self.matrix.fill(0.0);
        self.vector.fill(0.0);
    }
}

/// Accumulates element contributions into `matrix` and `vector`.
///
/// Cells are visited in index order, so repeated assemblies of the same data
/// are bit-identical. Non-finite local entries abort with the cell id.
pub fn assemble<K>(
    space: &P1Space,
    fields: usize,
    mut matrix: Option<&mut CsrMatrix>,
    vector: &mut [f64],
    mut kernel: K,
) -> Result<()>
where
    K: FnMut(&ElementData<'_>, &mut LocalSystem) -> Result<()>,
{
    let nv = space.dof_count();
    let k = space.dim() + 1;
    let quad = space.quadrature();
    let mut local = LocalSystem::new(fields * k);
    let mut points = vec![[0.0; 3]; quad.len()];
    let mut global = vec![0usize; fields * k];
    for c in 0..space.mesh().num_cells() {
        let vertices = space.cell_dofs(c);
        for (q, p) in points.iter_mut().enumerate() {
            *p = space.map_point(c, &quad.points[q]);
        }
        local.clear();
        let data = ElementData {
            cell: c,
            vertices,
            geometry: space.cell_geometry(c),
            quadrature: quad,
            points: &points,
        };
        kernel(&data, &mut local)?;
        if local.matrix.iter().chain(&local.vector).any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteKernel { cell: c });
        }
        for f in 0..fields {
            for (a, &v) in vertices.iter().enumerate() {
                global[f * k + a] = block_dof(nv, f, v);
            }
        }
        for (i, &gi) in global.iter().enumerate() {
            vector[gi] += local.vector[i];
        }
        if let Some(m) = matrix.as_deref_mut() {
            for (i, &gi) in global.iter().enumerate() {
                for (j, &gj) in global.iter().enumerate() {
                    let v = local.matrix[i * local.n + j];
                    if v != 0.0 {
                        m.add(gi, gj, v);
                    }
                }
            }
        }
    }
    Ok(())
}

/// Stiffness matrix of `-Δ` for a single scalar field.
pub fn laplace_matrix(space: &P1Space) -> Result<CsrMatrix> {
    let mut m = block_pattern(space, 1);
    let mut dummy = vec![0.0; space.dof_count()];
    assemble(space, 1, Some(&mut m), &mut dummy, |e, local| {
        let g = &e.geometry.grads;
        for a in 0..g.len() {
            for b in 0..g.len() {
                let dot: f64 = (0..3).map(|d| g[a][d] * g[b][d]).sum();
                local.add_matrix(a, b, e.geometry.measure * dot);
            }
        }
        Ok(())
    })?;
    Ok(m)
}

/// Consistent mass matrix for a single scalar field.
pub fn mass_matrix(space: &P1Space) -> Result<CsrMatrix> {
    let mut m = block_pattern(space, 1);
    let mut dummy = vec![0.0; space.dof_count()];
    assemble(space, 1, Some(&mut m), &mut dummy, |e, local| {
        let quad = e.quadrature;
        for q in 0..quad.len() {
            let w = quad.weights[q] * e.geometry.measure / super::quadrature::reference_measure(quad.dim);
            let phi = &quad.points[q];
            for a in 0..phi.len() {
                for b in 0..phi.len() {
                    local.add_matrix(a, b, w * phi[a] * phi[b]);
                }
            }
        }
        Ok(())
    })?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{interval_mesh, square_mesh};

    #[test]
    fn laplace_rows_sum_to_zero() {
        let space = P1Space::new(square_mesh(1, 1).unwrap()).unwrap();
        let k = laplace_matrix(&space).unwrap();
        for v in k.mul_vec(&[1.0; 4]) {
            assert!(v.abs() < 1e-15);
        }
    }

    #[test]
    fn mass_total_is_domain_measure() {
        let space = P1Space::new(square_mesh(3, 4).unwrap()).unwrap();
        let m = mass_matrix(&space).unwrap();
        assert!((m.values().iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn non_finite_kernel_aborts_with_cell() {
        let space = P1Space::new(interval_mesh(4).unwrap()).unwrap();
        let mut v = vec![0.0; 5];
        let err = assemble(&space, 1, None, &mut v, |e, local| {
            if e.cell == 2 {
                local.vector[0] = f64::NAN;
            }
            Ok(())
        })
        .unwrap_err();
        assert!(matches!(err, Error::NonFiniteKernel { cell: 2 }));
    }

    #[test]
    fn assembly_is_deterministic() {
        let space = P1Space::new(square_mesh(6, 5).unwrap()).unwrap();
        let a = mass_matrix(&space).unwrap();
        let b = mass_matrix(&space).unwrap();
        assert!(a.values().iter().zip(b.values()).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
}
