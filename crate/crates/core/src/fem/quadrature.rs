use crate::error::{Error, Result};

/// Quadrature rule on the reference simplex.
///
/// Points are stored in barycentric coordinates (`dim + 1` entries each);
/// weights sum to the reference measure `1 / dim!`.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub dim: usize,
    pub degree: usize,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Reference-coordinate view of point `q` (barycentric entries 1..=dim).
    pub fn reference_point(&self, q: usize) -> &[f64] {
        &self.points[q][1..]
    }
}

pub fn reference_measure(dim: usize) -> f64 {
    match dim {
        0 => 1.0,
        1 => 1.0,
        2 => 0.5,
        3 => 1.0 / 6.0,
        _ => unreachable!("dimension out of range"),
    }
}

/// Returns the rule of the requested `degree` in dimension `dim`.
///
/// Supported degrees are 1, 2 and 4 in dimensions 1 to 3. Dimension 0 (the
/// facet of an interval) is the single point with unit weight.
pub fn quadrature(dim: usize, degree: usize) -> Result<QuadratureRule> {
    let unsupported = Error::UnsupportedQuadrature { dim, degree };
    let (points, weights): (Vec<Vec<f64>>, Vec<f64>) = match (dim, degree) {
        (0, _) => (vec![vec![1.0]], vec![1.0]),
        (1, 1) => (vec![vec![0.5, 0.5]], vec![1.0]),
        (1, 2) => {
            let a = 0.5 - 0.5 / 3f64.sqrt();
            (vec![vec![1.0 - a, a], vec![a, 1.0 - a]], vec![0.5, 0.5])
        }
        (1, 4) => {
            let a = 0.5 - 0.5 * (0.6f64).sqrt();
            (
                vec![vec![1.0 - a, a], vec![0.5, 0.5], vec![a, 1.0 - a]],
                vec![5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0],
            )
        }
        (2, 1) => (vec![vec![1.0 / 3.0; 3]], vec![0.5]),
        (2, 2) => {
            let (a, b) = (1.0 / 6.0, 2.0 / 3.0);
            (vec![vec![b, a, a], vec![a, b, a], vec![a, a, b]], vec![1.0 / 6.0; 3])
        }
        (2, 4) => {
            // 6-point symmetric rule, exact to degree 4
            let mut pts = Vec::new();
            let mut w = Vec::new();
            for (a, wa) in [
                (0.445_948_490_915_965, 0.223_381_589_678_011),
                (0.091_576_213_509_771, 0.109_951_743_655_322),
            ] {
                let b = 1.0 - 2.0 * a;
                for p in [[b, a, a], [a, b, a], [a, a, b]] {
                    pts.push(p.to_vec());
                    w.push(0.5 * wa);
                }
            }
            (pts, w)
        }
        (3, 1) => (vec![vec![0.25; 4]], vec![1.0 / 6.0]),
        (3, 2) => {
            let a = 0.138_196_601_125_010_5;
            let b = 1.0 - 3.0 * a;
            let pts = (0..4)
                .map(|i| (0..4).map(|j| if i == j { b } else { a }).collect())
                .collect();
            (pts, vec![1.0 / 24.0; 4])
        }
        (3, 4) => {
            // 14-point rule with positive weights (exact to degree 5)
            let mut pts = Vec::new();
            let mut w = Vec::new();
            for (a, wa) in [
                (0.310_885_919_263_300_6, 0.112_687_925_718_015_85),
                (0.092_735_250_310_891_23, 0.073_493_043_116_361_95),
            ] {
                let b = 1.0 - 3.0 * a;
                for i in 0..4 {
                    pts.push((0..4).map(|j| if i == j { b } else { a }).collect());
                    w.push(wa / 6.0);
                }
            }
            let a = 0.045_503_704_125_649_65;
            let b = 0.5 - a;
            for (i, j) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
                pts.push((0..4).map(|k| if k == i || k == j { a } else { b }).collect());
                w.push(0.042_546_020_777_081_466 / 6.0);
            }
            (pts, w)
        }
        _ => return Err(unsupported),
    };
    Ok(QuadratureRule {
        dim,
        degree,
        points,
        weights,
    })
}
