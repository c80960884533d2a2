use electrolyte_fem::mesh::square_mesh;
use electrolyte_fem::fem::P1Space;
use electrolyte_fem::model::{Discretization, SolutionState};
use electrolyte_fem::solver::{newton_solve, NewtonConfig};
use electrolyte_fem::verify::*;

fn assert_orders_near_two(table: &ConvergenceTable) {
    let last = table.rows.last().unwrap();
    for (f, o) in last.orders.iter().enumerate() {
        let o = o.unwrap();
        assert!((1.9..=2.1).contains(&o), "{} order {o}", FIELD_NAMES[f]);
    }
}

#[test]
fn coarse_levels_converge_at_second_order() {
    let table = run_convergence_study(&[4, 8, 16, 32], &NewtonConfig::default()).unwrap();
    assert_eq!(table.rows.len(), 4);
    assert_orders_near_two(&table);
    for f in 0..4 {
        for w in table.rows.windows(2) {
            assert!(w[1].errors[f] < w[0].errors[f]);
        }
    }
    let cation = table.rows[3].errors[0];
    assert!(cation > 2.7786e-5 / 3.0 && cation < 3.0 * 2.7786e-5, "{cation:e}");
    for r in &table.rows {
        assert!(r.report.converged);
    }

    let csv = table.to_csv();
    assert!(csv.starts_with("h,err_yC,ord_yC,err_yA,ord_yA,err_phi,ord_phi,err_n,ord_n\n"));
    assert_eq!(csv.lines().count(), 5);
    let text = table.to_text();
    assert!(text.contains("0.03125") || text.contains("1/32"), "{text}");
}

#[test]
fn finer_levels_also_converge_at_second_order() {
    let table = run_convergence_study(&[8, 16, 32, 64], &NewtonConfig::default()).unwrap();
    assert_orders_near_two(&table);
}

#[test]
fn result_does_not_depend_on_the_initial_guess() {
    let case = standard_mms_case();
    let config = NewtonConfig::default();
    let (disc, state, _) = solve_mms(&case, 16, &config).unwrap();
    let reference = mms_errors(&case, &disc, &state);

    let fresh = Discretization::new(P1Space::new(square_mesh(16, 16).unwrap()).unwrap(), 2);
    let space = fresh.space();
    let start = SolutionState {
        y: vec![
            space.interpolate(|x| case.cation.value(x)),
            space.interpolate(|x| case.anion.value(x)),
        ],
        n: space.interpolate(|x| case.density.value(x)),
        phi: space.interpolate(|x| case.potential.value(x)),
        c: vec![0.0; 2],
        c_n: 0.0,
    };
    let (other, report) = newton_solve(&case.spec, &fresh, &start, &case, &config).unwrap();
    assert!(report.converged);
    let errors = mms_errors(&case, &fresh, &other);
    for f in 0..4 {
        assert!((errors[f] - reference[f]).abs() <= 1e-8 * reference[f], "{f}: {errors:?} {reference:?}");
    }
}

#[test]
fn newton_converges_quadratically() {
    let case = standard_mms_case();
    let (_, _, report) = solve_mms(&case, 16, &NewtonConfig::default()).unwrap();
    let r = &report.residual_history;
    assert!(report.iterations <= 10, "{r:?}");
    // once in the asymptotic range the error is roughly squared each step
    let tail: Vec<f64> = r.iter().copied().filter(|&v| v < 1e-1 && v > 1e-12).collect();
    assert!(tail.len() >= 3, "{r:?}");
    for w in tail.windows(2) {
        assert!(w[1] < 10.0 * w[0] * w[0], "{r:?}");
    }
}
