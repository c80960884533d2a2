use super::quadrature::reference_measure;
use super::space::P1Space;

/// `‖u_h − u‖_{L²}` by degree-4 quadrature on every cell.
pub fn l2_error(space: &P1Space, field: &[f64], exact: impl Fn(&[f64]) -> f64) -> f64 {
    let quad = space.quadrature();
    let dim = space.dim();
    let scale = 1.0 / reference_measure(dim);
    let mut sum = 0.0;
    for c in 0..space.mesh().num_cells() {
        let dofs = space.cell_dofs(c);
        let measure = space.cell_geometry(c).measure;
        for (bary, &w) in quad.points.iter().zip(&quad.weights) {
            let uh: f64 = dofs.iter().zip(bary).map(|(&v, &b)| field[v] * b).sum();
            let x = space.map_point(c, bary);
            let e = uh - exact(&x[..dim]);
            sum += w * scale * measure * e * e;
        }
    }
    sum.sqrt()
}

/// Domain integral of a P1 field (exact).
pub fn integrate(space: &P1Space, field: &[f64]) -> f64 {
    space.node_mass().iter().zip(field).map(|(m, u)| m * u).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::square_mesh;

    #[test]
    fn interpolant_of_linear_is_exact() {
        let space = P1Space::new(square_mesh(3, 3).unwrap()).unwrap();
        let f = |x: &[f64]| 1.0 + 2.0 * x[0] - 0.5 * x[1];
        let u = space.interpolate(f);
        assert!(l2_error(&space, &u, f) < 1e-14);
    }

    #[test]
    fn zero_against_one_on_unit_square() {
        let space = P1Space::new(square_mesh(2, 2).unwrap()).unwrap();
        let e = l2_error(&space, &vec![0.0; space.dof_count()], |_| 1.0);
        assert!((e - 1.0).abs() < 1e-14);
    }
}
