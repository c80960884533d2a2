/// P1 shape functions on the reference simplex at reference point `point`.
///
/// Values are the barycentric coordinates `(1 - sum(xi), xi_1, ..., xi_dim)`;
/// gradients (with respect to reference coordinates) are constant.
pub fn reference_basis(dim: usize, point: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    assert_eq!(point.len(), dim, "reference point has wrong dimension");
    let mut values = Vec::with_capacity(dim + 1);
    values.push(1.0 - point.iter().sum::<f64>());
    values.extend_from_slice(point);
    let mut grads = Vec::with_capacity(dim + 1);
    grads.push(vec![-1.0; dim]);
    for i in 0..dim {
        let mut g = vec![0.0; dim];
        g[i] = 1.0;
        grads.push(g);
    }
    (values, grads)
}
