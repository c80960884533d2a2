use super::cross_section::CrossSection;
use crate::error::{Error, Result};
use crate::model::{pressure_recover, Discretization, MixtureSpec, SolutionState};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Scientific notation with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn species_label(spec: &MixtureSpec, alpha: usize) -> String {
    match (spec.species.len(), alpha) {
        (2, 0) => "y_C".into(),
        (2, 1) => "y_A".into(),
        _ => format!("y_{}", spec.species[alpha].name),
    }
}

fn field_columns(spec: &MixtureSpec, state: &SolutionState) -> Vec<(String, Vec<f64>)> {
    let mut cols: Vec<(String, Vec<f64>)> = state
        .y
        .iter()
        .enumerate()
        .map(|(a, f)| (species_label(spec, a), f.clone()))
        .collect();
    cols.push(("n".into(), state.n.clone()));
    cols.push(("phi".into(), state.phi.clone()));
    cols.push(("p_hat".into(), pressure_recover(spec, state)));
    cols
}

/// VTK legacy ASCII unstructured grid with one scalar per field.
pub fn vtk_string(disc: &Discretization, spec: &MixtureSpec, state: &SolutionState) -> String {
    let mesh = disc.space().mesh();
    let mut s = String::new();
    s.push_str("# vtk DataFile Version 3.0\nelectrolyte equilibrium fields\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {} double", mesh.num_vertices());
    for x in mesh.vertices() {
        let mut p = [0.0; 3];
        p[..x.len()].copy_from_slice(x);
        let _ = writeln!(s, "{} {} {}", fmt17(p[0]), fmt17(p[1]), fmt17(p[2]));
    }
    let k = mesh.dim() + 1;
    let _ = writeln!(s, "CELLS {} {}", mesh.num_cells(), mesh.num_cells() * (k + 1));
    for c in mesh.cells() {
        let ids: Vec<String> = c.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "{k} {}", ids.join(" "));
    }
    let cell_type = match mesh.dim() {
        1 => 3,
        2 => 5,
        _ => 10,
    };
    let _ = writeln!(s, "CELL_TYPES {}", mesh.num_cells());
    for _ in 0..mesh.num_cells() {
        let _ = writeln!(s, "{cell_type}");
    }
    let _ = writeln!(s, "POINT_DATA {}", mesh.num_vertices());
    for (name, values) in field_columns(spec, state) {
        let _ = writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default");
        for v in values {
            s.push_str(&fmt17(v));
            s.push('\n');
        }
    }
    s
}

/// CSV of vertex coordinates and nodal fields.
pub fn nodal_csv(disc: &Discretization, spec: &MixtureSpec, state: &SolutionState) -> String {
    let mesh = disc.space().mesh();
    let axes = ["x", "y", "z"];
    let cols = field_columns(spec, state);
    let mut header: Vec<String> = axes[..mesh.dim()].iter().map(|s| s.to_string()).collect();
    header.extend(cols.iter().map(|(n, _)| n.clone()));
    let mut s = header.join(",");
    s.push('\n');
    for (i, x) in mesh.vertices().enumerate() {
        let mut row: Vec<String> = x.iter().map(|&v| fmt17(v)).collect();
        row.extend(cols.iter().map(|(_, v)| fmt17(v[i])));
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

fn section_rows(spec: &MixtureSpec, cs: &CrossSection) -> (Vec<String>, Vec<Vec<f64>>) {
    let dim = cs.points.first().map_or(0, |p| p.len());
    let axes = ["x", "y", "z"];
    let mut header = vec!["s".to_string()];
    header.extend(axes[..dim].iter().map(|a| a.to_string()));
    header.extend((0..cs.y.len()).map(|a| species_label(spec, a)));
    header.extend(["n", "phi", "p_hat"].map(String::from));
    let rows = (0..cs.len())
        .map(|k| {
            let mut r = vec![cs.arc[k]];
            r.extend(&cs.points[k]);
            r.extend(cs.y.iter().map(|f| f[k]));
            r.extend([cs.n[k], cs.phi[k], cs.p_hat[k]]);
            r
        })
        .collect();
    (header, rows)
}

pub fn cross_section_csv(spec: &MixtureSpec, cs: &CrossSection) -> String {
    let (header, rows) = section_rows(spec, cs);
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|&v| fmt17(v)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// Whitespace-separated columns with a `#` header, for gnuplot.
pub fn cross_section_dat(spec: &MixtureSpec, cs: &CrossSection) -> String {
    let (header, rows) = section_rows(spec, cs);
    let mut s = format!("# {}\n", header.join(" "));
    for r in rows {
        let cells: Vec<String> = r.iter().map(|&v| fmt17(v)).collect();
        s.push_str(&cells.join(" "));
        s.push('\n');
    }
    s
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes `fields.vtk`, `fields.csv`, `cross_section.csv` and
/// `cross_section.dat` into `dir`, returning the paths written.
pub fn export_fields(
    disc: &Discretization,
    spec: &MixtureSpec,
    state: &SolutionState,
    section: &CrossSection,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    let files = [
        ("fields.vtk", vtk_string(disc, spec, state)),
        ("fields.csv", nodal_csv(disc, spec, state)),
        ("cross_section.csv", cross_section_csv(spec, section)),
        ("cross_section.dat", cross_section_dat(spec, section)),
    ];
    let mut written = Vec::new();
    for (name, contents) in files {
        let path = dir.join(name);
        write_file(&path, &contents)?;
        written.push(path);
    }
    Ok(written)
}
