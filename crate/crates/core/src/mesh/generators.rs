use std::collections::HashMap;
use std::f64::consts::PI;

use super::{distance, simplex_signed_measure, BoundaryFacet, BoundaryTag, Mesh};
use crate::error::{Error, Result};

/// Radius of the electrode patches around the opposing corners of the unit cube.
pub const CORNER_PATCH_RADIUS: f64 = 0.25;

const TAG_EPS: f64 = 1e-12;

/// Uniform mesh of `[0, 1]` with `x = 0` on the left electrode and `x = 1` on the right.
pub fn interval_mesh(num_cells: usize) -> Result<Mesh> {
    if num_cells == 0 {
        return Err(Error::InvalidMesh("interval needs at least one cell".into()));
    }
    let n = num_cells;
    let coords: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let cells: Vec<usize> = (0..n).flat_map(|i| [i, i + 1]).collect();
    build(1, coords, cells, |pts| {
        if pts[0][0] < 0.5 {
            BoundaryTag::GammaDL
        } else {
            BoundaryTag::GammaDR
        }
    })
}

/// Structured triangulation of `[0, 1]^2`; every quad is cut along its
/// lower-left to upper-right diagonal.
pub fn square_mesh(nx: usize, ny: usize) -> Result<Mesh> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidMesh("square needs nx, ny >= 1".into()));
    }
    let idx = |i: usize, j: usize| j * (nx + 1) + i;
    let mut coords = Vec::with_capacity(2 * (nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            coords.push(i as f64 / nx as f64);
            coords.push(j as f64 / ny as f64);
        }
    }
    let mut cells = Vec::with_capacity(6 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (v0, v1, v2, v3) = (idx(i, j), idx(i + 1, j), idx(i, j + 1), idx(i + 1, j + 1));
            cells.extend_from_slice(&[v0, v1, v3, v0, v3, v2]);
        }
    }
    build(2, coords, cells, |pts| {
        if pts.iter().all(|p| p[0].abs() < TAG_EPS) {
            BoundaryTag::GammaDL
        } else if pts.iter().all(|p| (p[0] - 1.0).abs() < TAG_EPS) {
            BoundaryTag::GammaDR
        } else {
            BoundaryTag::GammaN
        }
    })
}

/// Structured tetrahedral mesh of `[0, 1]^3`.
///
/// Each hexahedron is split into the six tetrahedra sharing its main diagonal
/// (Kuhn subdivision), which is conforming across neighbouring hexahedra. The
/// electrodes are the boundary patches within [`CORNER_PATCH_RADIUS`] of the
/// corners `(0,0,0)` (left) and `(1,1,1)` (right).
pub fn cube_mesh(nx: usize, ny: usize, nz: usize) -> Result<Mesh> {
    if nx == 0 || ny == 0 || nz == 0 {
        return Err(Error::InvalidMesh("cube needs nx, ny, nz >= 1".into()));
    }
    let idx = |i: usize, j: usize, k: usize| (k * (ny + 1) + j) * (nx + 1) + i;
    let mut coords = Vec::with_capacity(3 * (nx + 1) * (ny + 1) * (nz + 1));
    for k in 0..=nz {
        for j in 0..=ny {
            for i in 0..=nx {
                coords.extend_from_slice(&[i as f64 / nx as f64, j as f64 / ny as f64, k as f64 / nz as f64]);
            }
        }
    }
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut cells = Vec::with_capacity(24 * nx * ny * nz);
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                for perm in PERMS {
                    let mut p = [i, j, k];
                    cells.push(idx(p[0], p[1], p[2]));
                    for axis in perm {
                        p[axis] += 1;
                        cells.push(idx(p[0], p[1], p[2]));
                    }
                }
            }
        }
    }
    let left = [0.0, 0.0, 0.0];
    let right = [1.0, 1.0, 1.0];
    build(3, coords, cells, |pts| {
        let near = |c: &[f64]| pts.iter().all(|p| distance(p, c) <= CORNER_PATCH_RADIUS + TAG_EPS);
        if near(&left) {
            BoundaryTag::GammaDL
        } else if near(&right) {
            BoundaryTag::GammaDR
        } else {
            BoundaryTag::GammaN
        }
    })
}

/// Polar structured mesh of the annulus `r_in <= r <= r_out`.
///
/// `n_radial + 1` rings of `n_angular` vertices; boundary vertices lie on the
/// circles and boundary facets are chords. Inner circle is the left electrode,
/// outer circle the right one.
pub fn annulus_mesh(r_in: f64, r_out: f64, n_radial: usize, n_angular: usize) -> Result<Mesh> {
    if !(r_in > 0.0 && r_in < r_out && r_out.is_finite()) {
        return Err(Error::InvalidMesh(format!("annulus needs 0 < r_in < r_out, got {r_in}, {r_out}")));
    }
    if n_radial == 0 || n_angular < 3 {
        return Err(Error::InvalidMesh("annulus needs n_radial >= 1 and n_angular >= 3".into()));
    }
    let dr = (r_out - r_in) / n_radial as f64;
    let mut coords = Vec::with_capacity(2 * (n_radial + 1) * n_angular);
    for k in 0..=n_radial {
        let r = if k == n_radial { r_out } else { r_in + k as f64 * dr };
        for j in 0..n_angular {
            let theta = 2.0 * PI * j as f64 / n_angular as f64;
            coords.push(r * theta.cos());
            coords.push(r * theta.sin());
        }
    }
    let idx = |k: usize, j: usize| k * n_angular + (j % n_angular);
    let mut cells = Vec::with_capacity(6 * n_radial * n_angular);
    for k in 0..n_radial {
        for j in 0..n_angular {
            let (a, b, c, d) = (idx(k, j), idx(k, j + 1), idx(k + 1, j), idx(k + 1, j + 1));
            cells.extend_from_slice(&[a, c, d, a, d, b]);
        }
    }
    let tol = 1e-9 * r_out;
    build(2, coords, cells, |pts| {
        let radius = |p: &[f64]| (p[0] * p[0] + p[1] * p[1]).sqrt();
        if pts.iter().all(|p| (radius(p) - r_in).abs() < tol) {
            BoundaryTag::GammaDL
        } else if pts.iter().all(|p| (radius(p) - r_out).abs() < tol) {
            BoundaryTag::GammaDR
        } else {
            BoundaryTag::GammaN
        }
    })
}

/// Orients cells positively, extracts the topological boundary and tags it.
fn build(
    dim: usize,
    coords: Vec<f64>,
    mut cells: Vec<usize>,
    tag: impl Fn(&[&[f64]]) -> BoundaryTag,
) -> Result<Mesh> {
    let k = dim + 1;
    let vertex = |i: usize| &coords[i * dim..(i + 1) * dim];
    for cell in cells.chunks_exact_mut(k) {
        let pts: Vec<&[f64]> = cell.iter().map(|&v| vertex(v)).collect();
        if simplex_signed_measure(&pts) < 0.0 {
            cell.swap(k - 2, k - 1);
        }
    }
    let facets = boundary_facets(dim, &cells);
    let boundary = facets
        .into_iter()
        .map(|vertices| {
            let pts: Vec<&[f64]> = vertices.iter().map(|&v| vertex(v)).collect();
            let tag = tag(&pts);
            BoundaryFacet { vertices, tag }
        })
        .collect();
    Mesh::new(dim, coords, cells, boundary)
}

/// Facets owned by exactly one cell, in order of first appearance.
/// The vertex order follows the owning cell so the facet keeps its orientation.
pub(crate) fn boundary_facets(dim: usize, cells: &[usize]) -> Vec<Vec<usize>> {
    let k = dim + 1;
    let mut count: HashMap<Vec<usize>, (usize, usize, Vec<usize>)> = HashMap::new();
    let mut order = 0;
    for cell in cells.chunks_exact(k) {
        for skip in 0..k {
            let facet: Vec<usize> = (0..k).filter(|&i| i != skip).map(|i| cell[i]).collect();
            let mut key = facet.clone();
            key.sort_unstable();
            let entry = count.entry(key).or_insert_with(|| {
                order += 1;
                (0, order, facet)
            });
            entry.0 += 1;
        }
    }
    let mut out: Vec<(usize, Vec<usize>)> = count
        .into_values()
        .filter(|(n, _, _)| *n == 1)
        .map(|(_, ord, f)| (ord, f))
        .collect();
    out.sort_unstable_by_key(|(ord, _)| *ord);
    out.into_iter().map(|(_, f)| f).collect()
}
