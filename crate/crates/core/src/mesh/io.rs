//! Plain-text mesh format.
//!
//! ```text
//! dim n_vertices n_cells n_bfacets
//! x [y [z]]                 one line per vertex, 17 significant digits
//! v0 v1 ...                 one line per cell, 0-based
//! v0 [v1 [v2]] TagName      one line per boundary facet
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{BoundaryFacet, Mesh};
use crate::error::{Error, Result};

pub fn write_mesh(mesh: &Mesh, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_mesh(mesh)).map_err(|e| Error::io(path, e))
}

pub fn read_mesh(path: impl AsRef<Path>) -> Result<Mesh> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_mesh(&text)
}

pub fn format_mesh(mesh: &Mesh) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} {} {}",
        mesh.dim(),
        mesh.num_vertices(),
        mesh.num_cells(),
        mesh.boundary_facets().len()
    );
    for v in mesh.vertices() {
        let line: Vec<String> = v.iter().map(|x| format!("{x:.16e}")).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    for c in mesh.cells() {
        let line: Vec<String> = c.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    for f in mesh.boundary_facets() {
        let line: Vec<String> = f.vertices.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(out, "{} {}", line.join(" "), f.tag);
    }
    out
}

pub fn parse_mesh(text: &str) -> Result<Mesh> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty mesh file".into()))?;
    let head: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header token `{t}`"))))
        .collect::<Result<_>>()?;
    let [dim, nv, nc, nf] = head[..] else {
        return Err(Error::Parse(format!("header needs 4 integers, got `{header}`")));
    };
    let mut next = |what: &str| lines.next().ok_or_else(|| Error::Parse(format!("file ends inside {what} block")));

    let mut coords = Vec::with_capacity(nv * dim);
    for _ in 0..nv {
        let line = next("vertex")?;
        let before = coords.len();
        for t in line.split_whitespace() {
            coords.push(t.parse::<f64>().map_err(|_| Error::Parse(format!("bad coordinate `{t}`")))?);
        }
        if coords.len() - before != dim {
            return Err(Error::Parse(format!("vertex line `{line}` has wrong arity")));
        }
    }
    let mut cells = Vec::with_capacity(nc * (dim + 1));
    for _ in 0..nc {
        let line = next("cell")?;
        let before = cells.len();
        for t in line.split_whitespace() {
            cells.push(t.parse::<usize>().map_err(|_| Error::Parse(format!("bad vertex index `{t}`")))?);
        }
        if cells.len() - before != dim + 1 {
            return Err(Error::Parse(format!("cell line `{line}` has wrong arity")));
        }
    }
    let mut boundary = Vec::with_capacity(nf);
    for _ in 0..nf {
        let line = next("facet")?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let (tag, idx) = tokens
            .split_last()
            .ok_or_else(|| Error::Parse("empty facet line".into()))?;
        let vertices = idx
            .iter()
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad vertex index `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        boundary.push(BoundaryFacet {
            vertices,
            tag: tag.parse()?,
        });
    }
    Mesh::new(dim, coords, cells, boundary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{annulus_mesh, cube_mesh};

    #[test]
    fn text_round_trip_is_exact() {
        for mesh in [annulus_mesh(1.0, 2.0, 3, 7).unwrap(), cube_mesh(2, 1, 1).unwrap()] {
            let back = parse_mesh(&format_mesh(&mesh)).unwrap();
            assert_eq!(back, mesh);
        }
    }

    #[test]
    fn header_line() {
        let text = format_mesh(&crate::mesh::square_mesh(2, 2).unwrap());
        assert_eq!(text.lines().next().unwrap(), "2 9 8 8");
    }

    #[test]
    fn truncated_file_rejected() {
        assert!(parse_mesh("1 2 1 2\n0.0\n").is_err());
        assert!(parse_mesh("1 2 1 2\n0\n1\n0 1\n0 Bogus\n1 GammaDR\n").is_err());
    }
}
