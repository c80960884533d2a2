//! Analytic Jacobian against central finite differences of the residual.

use electrolyte_fem::fem::P1Space;
use electrolyte_fem::mesh::{cube_mesh, interval_mesh, square_mesh, Mesh};
use electrolyte_fem::model::{Discretization, ElectrodeVoltage, MixtureSpec, SolutionState, SpeciesSpec};
use proptest::prelude::*;

const STEP: f64 = 1e-7;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Interior state built from unit-interval samples: fractions stay well inside
/// the admissible set, potentials and multipliers are O(1).
fn state_from(d: &Discretization, u: &[f64]) -> SolutionState {
    let l = d.layout();
    let nv = l.nodes;
    let mut s = SolutionState::constant(&vec![0.0; l.ions], 1.0, 0.0, nv);
    for i in 0..nv {
        for a in 0..l.ions {
            s.y[a][i] = 0.05 + 0.8 / l.ions as f64 * u[a * nv + i];
        }
        s.n[i] = 0.5 + u[l.ions * nv + i];
        s.phi[i] = 2.0 * u[(l.ions + 1) * nv + i] - 1.0;
    }
    let tail = &u[l.core_size()..];
    for a in 0..l.ions {
        s.c[a] = 4.0 * tail[a] - 2.0;
    }
    s.c_n = 4.0 * tail[l.ions] - 2.0;
    s
}

fn check(mesh: Mesh, spec: &MixtureSpec, u: &[f64], dir: &[f64]) -> Result<(), TestCaseError> {
    let d = Discretization::new(P1Space::new(mesh).unwrap(), spec.num_ions());
    let l = d.layout();
    let state = state_from(&d, u);
    let data = ElectrodeVoltage::symmetric(0.8);
    let sys = d.linearize(spec, &state, &data).unwrap();
    let jd = sys.mul_vec(dir);

    let x = state.to_vector();
    let shifted = |sign: f64| {
        let v: Vec<f64> = x.iter().zip(dir).map(|(a, b)| a + sign * STEP * b).collect();
        let s = SolutionState::from_vector(l, &v).unwrap();
        d.residual(spec, &s, &data).unwrap()
    };
    let (rp, rm) = (shifted(1.0), shifted(-1.0));
    let fd: Vec<f64> = rp.iter().zip(&rm).map(|(a, b)| (a - b) / (2.0 * STEP)).collect();
    let diff: Vec<f64> = fd.iter().zip(&jd).map(|(a, b)| a - b).collect();
    let rel = norm(&diff) / norm(&jd);
    prop_assert!(rel < 1e-6, "relative error {rel}");
    Ok(())
}

fn three_species() -> MixtureSpec {
    let mut s = MixtureSpec::symmetric_default();
    s.species[0].mass_ratio = 0.3;
    s.species.push(SpeciesSpec {
        name: "divalent".into(),
        charge: 2,
        mass_ratio: 2.5,
        y_avg: 0.1,
    });
    s.khat = 3.0;
    s.psi = 1.7;
    s
}

fn samples(len: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (
        prop::collection::vec(0.0f64..1.0, len),
        prop::collection::vec(-1.0f64..1.0, len),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn interval_two_ions((u, dir) in samples(9 * 4 + 3)) {
        check(interval_mesh(8).unwrap(), &MixtureSpec::symmetric_default(), &u, &dir)?;
    }

    #[test]
    fn square_two_ions((u, dir) in samples(25 * 4 + 3)) {
        check(square_mesh(4, 4).unwrap(), &MixtureSpec::symmetric_default(), &u, &dir)?;
    }

    #[test]
    fn square_three_ions((u, dir) in samples(16 * 5 + 4)) {
        check(square_mesh(3, 3).unwrap(), &three_species(), &u, &dir)?;
    }

    #[test]
    fn cube_two_ions((u, dir) in samples(27 * 4 + 3)) {
        check(cube_mesh(2, 2, 2).unwrap(), &MixtureSpec::symmetric_default(), &u, &dir)?;
    }
}
