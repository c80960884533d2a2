//! Conforming simplicial meshes in one, two and three dimensions.
//!
//! A [`Mesh`] stores vertex coordinates, cells as `dim + 1` vertex indices and
//! the boundary facets with their [`BoundaryTag`]. Meshes are immutable once
//! built; the generators in [`generators`] produce positively oriented cells.

mod generators;
mod io;
mod validate;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use generators::{annulus_mesh, cube_mesh, interval_mesh, square_mesh, CORNER_PATCH_RADIUS};
pub use io::{format_mesh, parse_mesh, read_mesh, write_mesh};
pub use validate::{validate, MeshReport, Violation};

/// Which part of the boundary a facet belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryTag {
    /// Electrode held at the negative potential.
    GammaDL,
    /// Electrode held at the positive potential.
    GammaDR,
    /// Insulating wall.
    GammaN,
}

impl BoundaryTag {
    pub const ALL: [BoundaryTag; 3] = [BoundaryTag::GammaDL, BoundaryTag::GammaDR, BoundaryTag::GammaN];

    pub fn name(self) -> &'static str {
        match self {
            BoundaryTag::GammaDL => "GammaDL",
            BoundaryTag::GammaDR => "GammaDR",
            BoundaryTag::GammaN => "GammaN",
        }
    }

    pub fn is_dirichlet(self) -> bool {
        !matches!(self, BoundaryTag::GammaN)
    }
}

impl fmt::Display for BoundaryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundaryTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "GammaDL" => Ok(BoundaryTag::GammaDL),
            "GammaDR" => Ok(BoundaryTag::GammaDR),
            "GammaN" => Ok(BoundaryTag::GammaN),
            other => Err(Error::Parse(format!("unknown boundary tag `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryFacet {
    pub vertices: Vec<usize>,
    pub tag: BoundaryTag,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    dim: usize,
    coords: Vec<f64>,
    cells: Vec<usize>,
    boundary: Vec<BoundaryFacet>,
}

impl Mesh {
    /// Builds a mesh from flat coordinate and connectivity arrays.
    ///
    /// Only shapes and index ranges are checked here; geometric and
    /// topological invariants are the job of [`validate`].
    pub fn new(dim: usize, coords: Vec<f64>, cells: Vec<usize>, boundary: Vec<BoundaryFacet>) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidMesh(format!("dimension {dim} not in 1..=3")));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidMesh("coordinate array length is not a multiple of dim".into()));
        }
        if !cells.len().is_multiple_of(dim + 1) {
            return Err(Error::InvalidMesh("cell array length is not a multiple of dim + 1".into()));
        }
        let nv = coords.len() / dim;
        if let Some(&bad) = cells.iter().find(|&&v| v >= nv) {
            return Err(Error::InvalidMesh(format!("cell references vertex {bad} of {nv}")));
        }
        for f in &boundary {
            if f.vertices.len() != dim {
                return Err(Error::InvalidMesh(format!(
                    "boundary facet has {} vertices, expected {dim}",
                    f.vertices.len()
                )));
            }
            if let Some(&bad) = f.vertices.iter().find(|&&v| v >= nv) {
                return Err(Error::InvalidMesh(format!("facet references vertex {bad} of {nv}")));
            }
        }
        Ok(Mesh {
            dim,
            coords,
            cells,
            boundary,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vertices(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len() / (self.dim + 1)
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vertices(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn cell(&self, c: usize) -> &[usize] {
        let k = self.dim + 1;
        &self.cells[c * k..(c + 1) * k]
    }

    pub fn cells(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.cells.chunks_exact(self.dim + 1)
    }

    pub fn boundary_facets(&self) -> &[BoundaryFacet] {
        &self.boundary
    }

    pub fn count_tag(&self, tag: BoundaryTag) -> usize {
        self.boundary.iter().filter(|f| f.tag == tag).count()
    }

    /// Re-tags every boundary facet with the tag chosen by `rule`, which
    /// receives the facet vertex coordinates.
    pub fn retag(&mut self, mut rule: impl FnMut(&[&[f64]]) -> BoundaryTag) {
        let dim = self.dim;
        let coords = &self.coords;
        for f in &mut self.boundary {
            let pts: Vec<&[f64]> = f.vertices.iter().map(|&v| &coords[v * dim..(v + 1) * dim]).collect();
            f.tag = rule(&pts);
        }
    }

    /// Signed length/area/volume of cell `c`.
    pub fn signed_measure(&self, c: usize) -> f64 {
        let pts: Vec<&[f64]> = self.cell(c).iter().map(|&v| self.vertex(v)).collect();
        simplex_signed_measure(&pts)
    }

    pub fn total_measure(&self) -> f64 {
        (0..self.num_cells()).map(|c| self.signed_measure(c)).sum()
    }

    /// Mesh size `h`: the longest edge over all cells.
    pub fn max_edge_length(&self) -> f64 {
        let mut h: f64 = 0.0;
        for cell in self.cells() {
            for a in 0..cell.len() {
                for b in a + 1..cell.len() {
                    h = h.max(distance(self.vertex(cell[a]), self.vertex(cell[b])));
                }
            }
        }
        h
    }
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Signed measure of a simplex given by `dim + 1` points of dimension `dim`.
pub(crate) fn simplex_signed_measure(pts: &[&[f64]]) -> f64 {
    match pts.len() {
        2 => pts[1][0] - pts[0][0],
        3 => {
            let (a, b, c) = (pts[0], pts[1], pts[2]);
            0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
        }
        4 => {
            let o = pts[0];
            let e = |p: &[f64]| [p[0] - o[0], p[1] - o[1], p[2] - o[2]];
            let (u, v, w) = (e(pts[1]), e(pts[2]), e(pts[3]));
            let det = u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
                + u[2] * (v[0] * w[1] - v[1] * w[0]);
            det / 6.0
        }
        _ => unreachable!("simplices have 2 to 4 vertices"),
    }
}

/// Unsigned measure of a facet (point, segment or triangle) embedded in `dim` space.
pub(crate) fn facet_measure(pts: &[&[f64]]) -> f64 {
    match pts.len() {
        1 => 1.0,
        2 => distance(pts[0], pts[1]),
        3 => {
            let (a, b, c) = (pts[0], pts[1], pts[2]);
            let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
            let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
            let cx = u[1] * v[2] - u[2] * v[1];
            let cy = u[2] * v[0] - u[0] * v[2];
            let cz = u[0] * v[1] - u[1] * v[0];
            0.5 * (cx * cx + cy * cy + cz * cz).sqrt()
        }
        _ => unreachable!("facets have 1 to 3 vertices"),
    }
}
