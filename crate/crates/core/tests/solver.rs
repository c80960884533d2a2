use electrolyte_fem::fem::P1Space;
use electrolyte_fem::mesh::{interval_mesh, Mesh};
use electrolyte_fem::model::{Discretization, ElectrodeVoltage, MixtureSpec, SolutionState};
use electrolyte_fem::solver::{continuation_solve, initial_guess, newton_solve, NewtonConfig};

fn disc(mesh: Mesh, spec: &MixtureSpec) -> Discretization {
    Discretization::new(P1Space::new(mesh).unwrap(), spec.num_ions())
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

#[test]
fn uncharged_mixture_is_linear_in_the_potential() {
    let mut spec = MixtureSpec::symmetric_default();
    for s in &mut spec.species {
        s.charge = 0;
    }
    let d = disc(electrolyte_fem::mesh::square_mesh(6, 6).unwrap(), &spec);
    let data = ElectrodeVoltage::symmetric(1.0);
    let start = SolutionState::constant(&[0.4, 0.4], 1.0, 0.0, d.layout().nodes);
    let (s, report) = newton_solve(&spec, &d, &start, &data, &NewtonConfig::default()).unwrap();
    assert!(report.converged);
    assert_eq!(report.iterations, 1);
    for (x, p) in d.space().mesh().vertices().zip(&s.phi) {
        assert!((p - (2.0 * x[0] - 1.0)).abs() < 1e-12);
    }
}

#[test]
fn constant_state_recovered_quickly() {
    let spec = MixtureSpec::symmetric_default();
    let d = disc(interval_mesh(32).unwrap(), &spec);
    let data = ElectrodeVoltage::symmetric(0.0);
    let start = initial_guess(&spec, &d, &data).unwrap();
    let (s, report) = newton_solve(&spec, &d, &start, &data, &NewtonConfig::default()).unwrap();
    assert!(report.converged);
    assert!(report.iterations <= 2);
    assert!(s.phi.iter().all(|p| p.abs() < 1e-10));
    assert!(s.n.iter().all(|n| (n - 1.0).abs() < 1e-10));
}

#[test]
fn table_defaults_on_the_interval() {
    let spec = MixtureSpec::symmetric_default();
    let d = disc(interval_mesh(128).unwrap(), &spec);
    let data = ElectrodeVoltage::symmetric(1.0);
    let (s, report) = continuation_solve(&spec, &d, &data, &NewtonConfig::default()).unwrap();
    assert!(report.converged);
    // accepted steps never increase the residual
    for w in report.residual_history.windows(2) {
        assert!(w[1] < w[0]);
    }
    // terminal quadratic phase
    let h = &report.residual_history;
    let k = h.len() - 1;
    assert!(h[k] / (h[k - 1] * h[k - 1]) < 1e3);
    assert!(d.constraint_violation(&spec, &s) < 1e-10);

    let middle: Vec<usize> = d
        .space()
        .mesh()
        .vertices()
        .enumerate()
        .filter(|(_, x)| x[0] > 1.0 / 3.0 && x[0] < 2.0 / 3.0)
        .map(|(i, _)| i)
        .collect();
    for &i in &middle {
        assert!((s.y[0][i] - 0.4).abs() < 0.01 * 0.4);
        assert!((s.y[1][i] - 0.4).abs() < 0.01 * 0.4);
    }
    // the density plateau is flat; its level sits below n⁰ by the excess held in the layers
    let (lo, hi) = middle
        .iter()
        .fold((f64::MAX, f64::MIN), |(a, b), &i| (a.min(s.n[i]), b.max(s.n[i])));
    assert!(hi - lo < 1e-4);
    assert!(hi < 1.0);
    assert!(s.n[0] > 1.0 && s.n[128] > 1.0);
    // cations pile up at the negative electrode
    assert!(s.y[0].windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn continuation_count_does_not_change_the_solution() {
    let spec = MixtureSpec::symmetric_default();
    let d = disc(interval_mesh(64).unwrap(), &spec);
    let data = ElectrodeVoltage::symmetric(1.0);
    let solve = |k: usize| {
        let config = NewtonConfig {
            continuation_steps: k,
            ..Default::default()
        };
        continuation_solve(&spec, &d, &data, &config).unwrap().0
    };
    let reference = solve(1).to_vector();
    for k in [2, 4, 8] {
        let s = solve(k).to_vector();
        let n = d.layout().core_size();
        assert!(max_diff(&reference[..n], &s[..n]) < 1e-8, "K = {k}");
    }
}

#[test]
fn mirror_symmetry_on_the_interval() {
    let spec = MixtureSpec::symmetric_default();
    let cells = 100;
    let d = disc(interval_mesh(cells).unwrap(), &spec);
    let (s, _) = continuation_solve(&spec, &d, &ElectrodeVoltage::symmetric(1.0), &NewtonConfig::default()).unwrap();
    let mesh = d.space().mesh();
    for i in 0..=cells {
        let x = mesh.vertex(i)[0];
        let j = (0..=cells).find(|&j| (mesh.vertex(j)[0] - (1.0 - x)).abs() < 1e-12).unwrap();
        assert!((s.y[0][i] - s.y[1][j]).abs() < 1e-8);
        assert!((s.n[i] - s.n[j]).abs() < 1e-8);
        assert!((s.phi[i] + s.phi[j]).abs() < 1e-8);
    }
}
