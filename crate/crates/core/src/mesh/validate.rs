use std::collections::HashMap;

use super::{BoundaryTag, Mesh};

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// Cell with zero or negative signed measure.
    DegenerateCell { cell: usize, measure: f64 },
    /// A facet shared by more than two cells.
    NonConforming { facet: Vec<usize>, cells: usize },
    /// A listed boundary facet that is not on the topological boundary.
    DanglingFacet { index: usize, facet: Vec<usize> },
    /// A topological boundary facet missing from the tagged list.
    TagGap { facet: Vec<usize> },
    /// The same boundary facet listed more than once.
    DuplicateFacet { facet: Vec<usize> },
}

#[derive(Clone, Debug)]
pub struct MeshReport {
    pub min_measure: f64,
    pub max_measure: f64,
    /// Smallest interior angle of any triangle (cells in 2D, cell faces in 3D), in degrees.
    pub min_angle_deg: Option<f64>,
    pub boundary_facets: usize,
    pub tag_counts: [(BoundaryTag, usize); 3],
    pub violations: Vec<Violation>,
}

impl MeshReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks orientation, conformity and boundary tagging by exhaustive facet hashing.
pub fn validate(mesh: &Mesh) -> MeshReport {
    let mut violations = Vec::new();
    let mut min_measure = f64::INFINITY;
    let mut max_measure = f64::NEG_INFINITY;
    for c in 0..mesh.num_cells() {
        let m = mesh.signed_measure(c);
        min_measure = min_measure.min(m);
        max_measure = max_measure.max(m);
        if !(m > 0.0) {
            violations.push(Violation::DegenerateCell { cell: c, measure: m });
        }
    }

    let k = mesh.dim() + 1;
    let mut owners: HashMap<Vec<usize>, usize> = HashMap::new();
    for cell in mesh.cells() {
        for skip in 0..k {
            let mut key: Vec<usize> = (0..k).filter(|&i| i != skip).map(|i| cell[i]).collect();
            key.sort_unstable();
            *owners.entry(key).or_default() += 1;
        }
    }
    let mut over: Vec<(&Vec<usize>, &usize)> = owners.iter().filter(|(_, &n)| n > 2).collect();
    over.sort();
    for (facet, &cells) in over {
        violations.push(Violation::NonConforming {
            facet: facet.clone(),
            cells,
        });
    }

    let mut listed: HashMap<Vec<usize>, usize> = HashMap::new();
    for (index, f) in mesh.boundary_facets().iter().enumerate() {
        let mut key = f.vertices.clone();
        key.sort_unstable();
        if owners.get(&key) != Some(&1) {
            violations.push(Violation::DanglingFacet {
                index,
                facet: f.vertices.clone(),
            });
        }
        let seen = listed.entry(key.clone()).or_default();
        *seen += 1;
        if *seen == 2 {
            violations.push(Violation::DuplicateFacet { facet: key });
        }
    }
    let mut gaps: Vec<&Vec<usize>> = owners
        .iter()
        .filter(|(key, &n)| n == 1 && !listed.contains_key(*key))
        .map(|(key, _)| key)
        .collect();
    gaps.sort();
    for facet in gaps {
        violations.push(Violation::TagGap { facet: facet.clone() });
    }

    let tag_counts = BoundaryTag::ALL.map(|t| (t, mesh.count_tag(t)));
    MeshReport {
        min_measure,
        max_measure,
        min_angle_deg: min_angle(mesh),
        boundary_facets: mesh.boundary_facets().len(),
        tag_counts,
        violations,
    }
}

fn min_angle(mesh: &Mesh) -> Option<f64> {
    let triangles: Vec<[usize; 3]> = match mesh.dim() {
        1 => return None,
        2 => mesh.cells().map(|c| [c[0], c[1], c[2]]).collect(),
        _ => mesh
            .cells()
            .flat_map(|c| [[c[0], c[1], c[2]], [c[0], c[1], c[3]], [c[0], c[2], c[3]], [c[1], c[2], c[3]]])
            .collect(),
    };
    let mut best = f64::INFINITY;
    for t in triangles {
        for i in 0..3 {
            let o = mesh.vertex(t[i]);
            let a = mesh.vertex(t[(i + 1) % 3]);
            let b = mesh.vertex(t[(i + 2) % 3]);
            let u: Vec<f64> = a.iter().zip(o).map(|(p, q)| p - q).collect();
            let v: Vec<f64> = b.iter().zip(o).map(|(p, q)| p - q).collect();
            let dot: f64 = u.iter().zip(&v).map(|(p, q)| p * q).sum();
            let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let cos = if nu > 0.0 && nv > 0.0 { (dot / (nu * nv)).clamp(-1.0, 1.0) } else { 1.0 };
            best = best.min(cos.acos().to_degrees());
        }
    }
    Some(best)
}
