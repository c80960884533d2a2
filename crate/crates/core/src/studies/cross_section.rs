use crate::model::{pressure_recover, Discretization, MixtureSpec, SolutionState};

/// Fields sampled along a straight line by P1 interpolation.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossSection {
    /// Sample points.
    pub points: Vec<Vec<f64>>,
    /// Arc length from the first sample.
    pub arc: Vec<f64>,
    /// `y[α][sample]`
    pub y: Vec<Vec<f64>>,
    pub n: Vec<f64>,
    pub phi: Vec<f64>,
    pub p_hat: Vec<f64>,
}

impl CrossSection {
    /// Samples `samples` evenly spaced points from `a` to `b`. Points outside
    /// the mesh are dropped.
    pub fn sample(
        disc: &Discretization,
        spec: &MixtureSpec,
        state: &SolutionState,
        a: &[f64],
        b: &[f64],
        samples: usize,
    ) -> Self {
        let space = disc.space();
        let p_hat = pressure_recover(spec, state);
        let length = a.iter().zip(b).map(|(p, q)| (q - p) * (q - p)).sum::<f64>().sqrt();
        let mut cs = CrossSection {
            points: Vec::new(),
            arc: Vec::new(),
            y: vec![Vec::new(); state.y.len()],
            n: Vec::new(),
            phi: Vec::new(),
            p_hat: Vec::new(),
        };
        let samples = samples.max(2);
        for k in 0..samples {
            let t = k as f64 / (samples - 1) as f64;
            let x: Vec<f64> = a.iter().zip(b).map(|(p, q)| p + t * (q - p)).collect();
            let Some((cell, bary)) = space.locate(&x) else {
                continue;
            };
            let dofs = space.cell_dofs(cell);
            let eval = |u: &[f64]| -> f64 { dofs.iter().zip(&bary).map(|(&v, &l)| u[v] * l).sum() };
            for (col, field) in cs.y.iter_mut().zip(&state.y) {
                col.push(eval(field));
            }
            cs.n.push(eval(&state.n));
            cs.phi.push(eval(&state.phi));
            cs.p_hat.push(eval(&p_hat));
            cs.arc.push(t * length);
            cs.points.push(x);
        }
        cs
    }

    pub fn len(&self) -> usize {
        self.arc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arc.is_empty()
    }
}
