use crate::error::{Error, Result};
use crate::fem::block_dof;

/// Field-blocked dof numbering: ion fractions, then `n`, then `φ`, then the
/// multipliers (one per ion, then the one for `n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub ions: usize,
    pub nodes: usize,
}

impl Layout {
    pub fn new(ions: usize, nodes: usize) -> Self {
        Layout { ions, nodes }
    }

    pub fn fields(&self) -> usize {
        self.ions + 2
    }

    pub fn density_field(&self) -> usize {
        self.ions
    }

    pub fn potential_field(&self) -> usize {
        self.ions + 1
    }

    pub fn multipliers(&self) -> usize {
        self.ions + 1
    }

    pub fn core_size(&self) -> usize {
        self.fields() * self.nodes
    }

    pub fn size(&self) -> usize {
        self.core_size() + self.multipliers()
    }

    #[inline]
    pub fn dof(&self, field: usize, vertex: usize) -> usize {
        block_dof(self.nodes, field, vertex)
    }

    /// Index of multiplier `j` (ion `j`, or `ions` for the density).
    pub fn multiplier(&self, j: usize) -> usize {
        self.core_size() + j
    }

    /// Splits a global index into `(field, vertex)` or a multiplier.
    pub fn locate(&self, dof: usize) -> DofKind {
        if dof < self.core_size() {
            DofKind::Node {
                field: dof / self.nodes,
                vertex: dof % self.nodes,
            }
        } else {
            DofKind::Multiplier(dof - self.core_size())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DofKind {
    Node { field: usize, vertex: usize },
    Multiplier(usize),
}

/// Nodal fields and multipliers of the discrete problem.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionState {
    /// `y[α][vertex]`
    pub y: Vec<Vec<f64>>,
    pub n: Vec<f64>,
    pub phi: Vec<f64>,
    /// Multipliers of the ion mean constraints.
    pub c: Vec<f64>,
    pub c_n: f64,
}

impl SolutionState {
    /// Spatially constant state with zero multipliers.
    pub fn constant(y: &[f64], n: f64, phi: f64, nodes: usize) -> Self {
        SolutionState {
            y: y.iter().map(|&v| vec![v; nodes]).collect(),
            n: vec![n; nodes],
            phi: vec![phi; nodes],
            c: vec![0.0; y.len()],
            c_n: 0.0,
        }
    }

    pub fn layout(&self) -> Layout {
        Layout::new(self.y.len(), self.n.len())
    }

    pub fn to_vector(&self) -> Vec<f64> {
        let l = self.layout();
        let mut v = Vec::with_capacity(l.size());
        for f in &self.y {
            v.extend_from_slice(f);
        }
        v.extend_from_slice(&self.n);
        v.extend_from_slice(&self.phi);
        v.extend_from_slice(&self.c);
        v.push(self.c_n);
        v
    }

    pub fn from_vector(layout: Layout, v: &[f64]) -> Result<Self> {
        if v.len() != layout.size() {
            return Err(Error::DimensionMismatch(format!(
                "state vector of length {} for layout of size {}",
                v.len(),
                layout.size()
            )));
        }
        let nv = layout.nodes;
        let field = |f: usize| v[f * nv..(f + 1) * nv].to_vec();
        let tail = &v[layout.core_size()..];
        Ok(SolutionState {
            y: (0..layout.ions).map(field).collect(),
            n: field(layout.density_field()),
            phi: field(layout.potential_field()),
            c: tail[..layout.ions].to_vec(),
            c_n: tail[layout.ions],
        })
    }

    /// Ion fractions at one vertex.
    pub fn fractions_at(&self, vertex: usize) -> Vec<f64> {
        self.y.iter().map(|f| f[vertex]).collect()
    }

    /// Solvent fraction `1 - Σ y_α` at every vertex.
    pub fn solvent(&self) -> Vec<f64> {
        (0..self.n.len())
            .map(|i| 1.0 - self.y.iter().map(|f| f[i]).sum::<f64>())
            .collect()
    }

    pub fn check_dimensions(&self, nodes: usize, ions: usize) -> Result<()> {
        let ok = self.y.len() == ions
            && self.c.len() == ions
            && self.y.iter().all(|f| f.len() == nodes)
            && self.n.len() == nodes
            && self.phi.len() == nodes;
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "state does not match {ions} ion fields on {nodes} nodes"
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_round_trip() {
        let mut s = SolutionState::constant(&[0.3, 0.2], 1.0, 0.5, 4);
        s.y[1][2] = 0.25;
        s.c = vec![1.5, -2.0];
        s.c_n = 3.0;
        let v = s.to_vector();
        assert_eq!(v.len(), 4 * 4 + 3);
        let back = SolutionState::from_vector(s.layout(), &v).unwrap();
        assert_eq!(back, s);
        assert!(SolutionState::from_vector(s.layout(), &v[1..]).is_err());
    }

    #[test]
    fn layout_locates_dofs() {
        let l = Layout::new(2, 5);
        assert_eq!(l.locate(l.dof(3, 4)), DofKind::Node { field: 3, vertex: 4 });
        assert_eq!(l.locate(l.multiplier(2)), DofKind::Multiplier(2));
        assert_eq!(l.size(), 23);
    }
}
