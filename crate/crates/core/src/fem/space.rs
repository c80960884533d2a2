use std::collections::HashMap;

use super::quadrature::{quadrature, QuadratureRule};
use crate::error::{Error, Result};
use crate::mesh::{facet_measure, BoundaryTag, Mesh};

/// Quadrature degree used for every cell and facet integral.
pub const QUADRATURE_DEGREE: usize = 4;

#[derive(Clone, Debug)]
pub struct CellGeometry {
    pub measure: f64,
    /// Physical gradients of the `dim + 1` barycentric functions.
    pub grads: Vec<[f64; 3]>,
}

#[derive(Clone, Debug)]
pub struct FacetGeometry {
    /// Index into `mesh.boundary_facets()`.
    pub facet: usize,
    pub tag: BoundaryTag,
    /// Cell owning the facet.
    pub cell: usize,
    /// Unit outward normal.
    pub normal: [f64; 3],
    pub measure: f64,
}

/// Continuous piecewise-linear space on a mesh: one dof per vertex.
#[derive(Clone, Debug)]
pub struct P1Space {
    mesh: Mesh,
    cells: Vec<CellGeometry>,
    facets: Vec<FacetGeometry>,
    node_mass: Vec<f64>,
    neighbors: Vec<Vec<usize>>,
    measure: f64,
    quad: QuadratureRule,
    facet_quad: QuadratureRule,
}

impl P1Space {
    pub fn new(mesh: Mesh) -> Result<Self> {
        let dim = mesh.dim();
        let nv = mesh.num_vertices();
        let mut cells = Vec::with_capacity(mesh.num_cells());
        let mut node_mass = vec![0.0; nv];
        let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for (c, cell) in mesh.cells().enumerate() {
            let measure = mesh.signed_measure(c);
            if !(measure > 0.0) {
                return Err(Error::InvalidMesh(format!("cell {c} has non-positive measure {measure}")));
            }
            let grads = barycentric_gradients(&mesh, cell)
                .ok_or_else(|| Error::InvalidMesh(format!("cell {c} is degenerate")))?;
            for &v in cell {
                node_mass[v] += measure / (dim + 1) as f64;
                neighbors[v].extend_from_slice(cell);
            }
            cells.push(CellGeometry { measure, grads });
        }
        for n in &mut neighbors {
            n.sort_unstable();
            n.dedup();
        }

        let mut owner: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
        for (c, cell) in mesh.cells().enumerate() {
            for opp in 0..=dim {
                let mut key: Vec<usize> = (0..=dim).filter(|&i| i != opp).map(|i| cell[i]).collect();
                key.sort_unstable();
                owner.insert(key, (c, opp));
            }
        }
        let mut facets = Vec::with_capacity(mesh.boundary_facets().len());
        for (i, f) in mesh.boundary_facets().iter().enumerate() {
            let mut key = f.vertices.clone();
            key.sort_unstable();
            let &(cell, opp) = owner
                .get(&key)
                .ok_or_else(|| Error::InvalidMesh(format!("boundary facet {i} belongs to no cell")))?;
            let g = cells[cell].grads[opp];
            let norm = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
            let normal = [-g[0] / norm, -g[1] / norm, -g[2] / norm];
            let pts: Vec<&[f64]> = f.vertices.iter().map(|&v| mesh.vertex(v)).collect();
            let measure = facet_measure(&pts);
            facets.push(FacetGeometry {
                facet: i,
                tag: f.tag,
                cell,
                normal,
                measure,
            });
        }
        let measure = cells.iter().map(|c| c.measure).sum();
        Ok(P1Space {
            quad: quadrature(dim, QUADRATURE_DEGREE)?,
            facet_quad: quadrature(dim - 1, QUADRATURE_DEGREE)?,
            mesh,
            cells,
            facets,
            node_mass,
            neighbors,
            measure,
        })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn dim(&self) -> usize {
        self.mesh.dim()
    }

    pub fn dof_count(&self) -> usize {
        self.mesh.num_vertices()
    }

    pub fn cell_dofs(&self, c: usize) -> &[usize] {
        self.mesh.cell(c)
    }

    pub fn cell_geometry(&self, c: usize) -> &CellGeometry {
        &self.cells[c]
    }

    pub fn boundary(&self) -> &[FacetGeometry] {
        &self.facets
    }

    pub fn facet_dofs(&self, f: &FacetGeometry) -> &[usize] {
        &self.mesh.boundary_facets()[f.facet].vertices
    }

    /// `∫ φ_i dx` for every basis function.
    pub fn node_mass(&self) -> &[f64] {
        &self.node_mass
    }

    /// Sorted vertex neighbourhoods (including the vertex itself).
    pub fn neighbors(&self) -> &[Vec<usize>] {
        &self.neighbors
    }

    pub fn domain_measure(&self) -> f64 {
        self.measure
    }

    pub fn quadrature(&self) -> &QuadratureRule {
        &self.quad
    }

    pub fn facet_quadrature(&self) -> &QuadratureRule {
        &self.facet_quad
    }

    /// Physical coordinates of the point with barycentric coordinates `bary` in cell `c`.
    pub fn map_point(&self, c: usize, bary: &[f64]) -> [f64; 3] {
        let mut x = [0.0; 3];
        for (&v, &b) in self.mesh.cell(c).iter().zip(bary) {
            for (xk, pk) in x.iter_mut().zip(self.mesh.vertex(v)) {
                *xk += b * pk;
            }
        }
        x
    }

    /// Physical coordinates of a facet quadrature point.
    pub fn map_facet_point(&self, f: &FacetGeometry, bary: &[f64]) -> [f64; 3] {
        let mut x = [0.0; 3];
        for (&v, &b) in self.facet_dofs(f).iter().zip(bary) {
            for (xk, pk) in x.iter_mut().zip(self.mesh.vertex(v)) {
                *xk += b * pk;
            }
        }
        x
    }

    /// Nodal interpolant of `f`.
    pub fn interpolate(&self, f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
        self.mesh.vertices().map(f).collect()
    }

    /// Barycentric coordinates of `x` with respect to cell `c`.
    pub fn barycentric(&self, c: usize, x: &[f64]) -> Vec<f64> {
        let cell = self.mesh.cell(c);
        let g = &self.cells[c].grads;
        (0..cell.len())
            .map(|i| {
                let pi = self.mesh.vertex(cell[i]);
                // λ_i(x) = 1 + ∇λ_i·(x - p_i)
                1.0 + (0..self.dim()).map(|k| g[i][k] * (x[k] - pi[k])).sum::<f64>()
            })
            .collect()
    }

    /// Cell containing `x` and its barycentric coordinates, by linear search.
    pub fn locate(&self, x: &[f64]) -> Option<(usize, Vec<f64>)> {
        let tol = 1e-10;
        (0..self.mesh.num_cells())
            .map(|c| (c, self.barycentric(c, x)))
            .find(|(_, b)| b.iter().all(|&l| l >= -tol))
    }

    /// Evaluates the P1 field `u` at `x`; `None` when `x` is outside the mesh.
    pub fn evaluate(&self, u: &[f64], x: &[f64]) -> Option<f64> {
        let (c, bary) = self.locate(x)?;
        Some(self.mesh.cell(c).iter().zip(&bary).map(|(&v, &b)| u[v] * b).sum())
    }
}

fn barycentric_gradients(mesh: &Mesh, cell: &[usize]) -> Option<Vec<[f64; 3]>> {
    let dim = mesh.dim();
    let p0 = mesh.vertex(cell[0]);
    // columns of B are p_i - p_0; gradient of λ_i (i >= 1) is row i-1 of B^{-1}
    let mut b = [[0.0; 3]; 3];
    for i in 0..dim {
        let pi = mesh.vertex(cell[i + 1]);
        for k in 0..dim {
            b[k][i] = pi[k] - p0[k];
        }
    }
    let inv = invert(dim, &b)?;
    let mut grads = vec![[0.0; 3]; dim + 1];
    for i in 0..dim {
        for k in 0..dim {
            grads[i + 1][k] = inv[i][k];
            grads[0][k] -= inv[i][k];
        }
    }
    Some(grads)
}

fn invert(dim: usize, b: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let mut inv = [[0.0; 3]; 3];
    match dim {
        1 => {
            if b[0][0] == 0.0 {
                return None;
            }
            inv[0][0] = 1.0 / b[0][0];
        }
        2 => {
            let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
            if det == 0.0 {
                return None;
            }
            inv[0][0] = b[1][1] / det;
            inv[0][1] = -b[0][1] / det;
            inv[1][0] = -b[1][0] / det;
            inv[1][1] = b[0][0] / det;
        }
        3 => {
            let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
                - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
                + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
            if det == 0.0 {
                return None;
            }
            for i in 0..3 {
                for j in 0..3 {
                    // cofactor transpose
                    let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
                    let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
                    inv[i][j] = (b[r0][c0] * b[r1][c1] - b[r0][c1] * b[r1][c0]) / det;
                }
            }
        }
        _ => return None,
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{annulus_mesh, cube_mesh, interval_mesh, square_mesh};

    #[test]
    fn gradients_reproduce_linear_functions() {
        for mesh in [interval_mesh(3).unwrap(), square_mesh(3, 2).unwrap(), cube_mesh(2, 2, 1).unwrap()] {
            let space = P1Space::new(mesh).unwrap();
            let dim = space.dim();
            let coef = [0.7, -1.3, 2.1];
            let u = space.interpolate(|x| 0.5 + x.iter().zip(coef).map(|(a, b)| a * b).sum::<f64>());
            for c in 0..space.mesh().num_cells() {
                let g = &space.cell_geometry(c).grads;
                for k in 0..dim {
                    let d: f64 = space.cell_dofs(c).iter().zip(g).map(|(&v, gi)| u[v] * gi[k]).sum();
                    assert!((d - coef[k]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn mass_and_measure() {
        let space = P1Space::new(square_mesh(5, 3).unwrap()).unwrap();
        assert!((space.node_mass().iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!((space.domain_measure() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn outward_normals() {
        let space = P1Space::new(square_mesh(2, 2).unwrap()).unwrap();
        for f in space.boundary() {
            let x = space.map_facet_point(f, &[0.5, 0.5]);
            let expected = if x[0] == 0.0 {
                [-1.0, 0.0]
            } else if x[0] == 1.0 {
                [1.0, 0.0]
            } else if x[1] == 0.0 {
                [0.0, -1.0]
            } else {
                [0.0, 1.0]
            };
            assert!((f.normal[0] - expected[0]).abs() < 1e-14 && (f.normal[1] - expected[1]).abs() < 1e-14);
            assert!((f.measure - 0.5).abs() < 1e-14);
        }
        let space = P1Space::new(annulus_mesh(1.0, 2.0, 2, 12).unwrap()).unwrap();
        for f in space.boundary() {
            let x = space.map_facet_point(f, &[0.5, 0.5]);
            let radial = x[0] * f.normal[0] + x[1] * f.normal[1];
            match f.tag {
                BoundaryTag::GammaDL => assert!(radial < 0.0),
                _ => assert!(radial > 0.0),
            }
        }
    }

    #[test]
    fn point_evaluation() {
        let space = P1Space::new(square_mesh(4, 4).unwrap()).unwrap();
        let u = space.interpolate(|x| 2.0 * x[0] - x[1]);
        let v = space.evaluate(&u, &[0.33, 0.71]).unwrap();
        assert!((v - (0.66 - 0.71)).abs() < 1e-12);
        assert!(space.evaluate(&u, &[1.5, 0.5]).is_none());
    }
}
