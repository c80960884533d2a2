//! Acceptance report: one PASS/FAIL line per criterion. Always exits 0 so
//! that the test suite stays green; failures are reported, not hidden.

use electrolyte_fem::fem::P1Space;
use electrolyte_fem::mesh::{annulus_mesh, cube_mesh, interval_mesh, square_mesh, validate, BoundaryTag, Mesh};
use electrolyte_fem::model::{Discretization, ElectrodeVoltage, MixtureSpec, SolutionState};
use electrolyte_fem::solver::{initial_guess, newton_solve, NewtonConfig};
use electrolyte_fem::studies::{run_annulus, run_compressible, run_khat_sweep, run_temperature_sweep, KHAT_SWEEP_CELLS};
use electrolyte_fem::verify::{convergence_order, standard_mms_case, run_convergence_study, solve_mms, FIELD_NAMES};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;
use std::cell::Cell;
use std::time::{Duration, Instant};

/// Printed L² errors at h = 1/4 ... 1/32 for cation, anion, potential, density.
const TABLE_ERRORS: [[f64; 4]; 4] = [
    [1.7360e-3, 4.4202e-4, 1.1102e-4, 2.7786e-5],
    [1.2031e-3, 3.5898e-4, 9.3869e-5, 2.3738e-5],
    [2.8330e-3, 8.2360e-4, 2.1369e-4, 5.3990e-5],
    [5.9769e-3, 1.6260e-3, 4.1547e-4, 1.0443e-4],
];

/// Printed orders at h = 1/8, 1/16, 1/32 for cation and anion.
const TABLE_ORDERS: [[f64; 3]; 2] = [[1.9735, 1.9932, 1.9983], [1.7447, 1.9352, 1.9833]];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn run_criterion(number: usize, title: &str, limit: Duration, body: impl FnOnce() -> Verdict) {
    let start = Instant::now();
    let v = body();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let status = if v.pass && in_time { "PASS" } else { "FAIL" };
    let timing = format!("{:.1} s of {} s allowed", elapsed.as_secs_f64(), limit.as_secs());
    let late = if in_time { "" } else { " [over time limit]" };
    println!("criterion {number}: {status}  {title}; {}; {timing}{late}", v.detail);
}

fn fmt_list(v: &[f64]) -> String {
    let s: Vec<String> = v.iter().map(|x| format!("{x:.4}")).collect();
    format!("[{}]", s.join(", "))
}

fn mms_orders() -> Verdict {
    let table = match run_convergence_study(&[4, 8, 16, 32], &NewtonConfig::default()) {
        Ok(t) => t,
        Err(e) => return verdict(false, format!("study failed: {e}")),
    };
    let finest: Vec<f64> = table.rows[3].orders.iter().map(|o| o.unwrap_or(f64::NAN)).collect();
    let orders_ok = finest.iter().all(|o| (1.9..=2.1).contains(o));
    let mut worst = 1.0f64;
    for (j, row) in table.rows.iter().enumerate() {
        for f in 0..4 {
            let r = row.errors[f] / TABLE_ERRORS[f][j];
            worst = worst.max(r.max(1.0 / r));
        }
    }
    let names = FIELD_NAMES.join(", ");
    verdict(
        orders_ok && worst <= 3.0,
        format!("finest orders ({names}) = {}, largest error ratio to the table = {worst:.3}", fmt_list(&finest)),
    )
}

fn printed_orders() -> Verdict {
    let h = [0.25, 0.125, 0.0625, 0.03125];
    let mut worst = 0.0f64;
    let mut misses = Vec::new();
    for (c, column) in TABLE_ORDERS.iter().enumerate() {
        let orders = convergence_order(&TABLE_ERRORS[c], &h).unwrap();
        for (j, (&printed, o)) in column.iter().zip(orders).enumerate() {
            let o = o.unwrap();
            let d = (o - printed).abs();
            worst = worst.max(d);
            if d >= 1e-4 {
                misses.push(format!("{} at h = 1/{}: {o:.5} vs printed {printed}", FIELD_NAMES[c], 8 << j));
            }
        }
    }
    let detail = if misses.is_empty() {
        format!("all 6 printed orders reproduced, largest difference {worst:.1e}")
    } else {
        format!("{} of 6 reproduced; mismatch: {}", 6 - misses.len(), misses.join("; "))
    };
    verdict(misses.is_empty(), detail)
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn compressible_1d(worst_constraint: &Cell<f64>, mirror: &Cell<f64>) -> Verdict {
    let spec = MixtureSpec::symmetric_default();
    let run = match run_compressible(1, 128, 1.0, &spec, &NewtonConfig::default()) {
        Ok(r) => r,
        Err(e) => return verdict(false, format!("solve failed: {e}")),
    };
    let s = &run.state;
    worst_constraint.set(worst_constraint.get().max(run.disc.constraint_violation(&spec, s)));
    // vertex i sits at x = i / 128
    let m = (m_dev(&s.y[0][43..=85], 0.4), m_dev(&s.y[1][43..=85], 0.4), m_dev(&s.n[43..=85], 1.0));
    let plateau = m.0 < 0.004 && m.1 < 0.004 && m.2 < 0.01;
    let layers = strictly_decreasing(&s.y[0][..=43]) && strictly_decreasing(&s.y[0][85..]);
    let ends = s.n[0] > 1.0 && s.n[128] > 1.0;
    let mut sym = 0.0f64;
    for i in 0..=128 {
        let j = 128 - i;
        sym = sym.max((s.y[0][i] - s.y[1][j]).abs()).max((s.phi[i] + s.phi[j]).abs()).max((s.n[i] - s.n[j]).abs());
    }
    mirror.set(sym);
    verdict(
        plateau && layers && ends,
        format!(
            "middle third max|y_C-0.4| = {:.2e}, max|y_A-0.4| = {:.2e} (limit 4e-3), max|n-1| = {:.2e} (limit 1e-2); \
             y_C decreasing across both layers: {layers}; n at electrodes = {:.4}, {:.4}",
            m.0, m.1, m.2, s.n[0], s.n[128]
        ),
    )
}

fn m_dev(v: &[f64], c: f64) -> f64 {
    v.iter().fold(0.0, |m, x| m.max((x - c).abs()))
}

fn khat_sweep(worst_constraint: &Cell<f64>) -> Verdict {
    let values = [0.1, 1.0, 10.0, 100.0, 1000.0];
    let sweep = match run_khat_sweep(&values, 1, KHAT_SWEEP_CELLS, 1.0, &MixtureSpec::symmetric_default(), &NewtonConfig::default()) {
        Ok(s) => s,
        Err(e) => return verdict(false, format!("sweep failed: {e}")),
    };
    let mut dev = Vec::new();
    for r in &sweep.rows {
        match &r.outcome {
            Ok(p) => dev.push(p.max_density_deviation),
            Err(e) => return verdict(false, format!("khat = {} failed: {e}", r.khat)),
        }
    }
    // the sweep reports deviations only; constraints are checked on one member
    if let Ok(run) = run_compressible(1, KHAT_SWEEP_CELLS, 1.0, &MixtureSpec { khat: 1000.0, ..MixtureSpec::symmetric_default() }, &NewtonConfig::default()) {
        worst_constraint.set(worst_constraint.get().max(run.disc.constraint_violation(&run.spec, &run.state)));
    }
    let ratios: Vec<f64> = dev.windows(2).map(|w| w[0] / w[1]).collect();
    let ok = ratios.iter().all(|r| (8.0..=12.0).contains(r));
    let devs: Vec<String> = dev.iter().map(|d| format!("{d:.3e}")).collect();
    verdict(
        ok,
        format!(
            "h = 1/{KHAT_SWEEP_CELLS}, max|n-1| = [{}], decade ratios = {} (required 8..12)",
            devs.join(", "),
            fmt_list(&ratios)
        ),
    )
}

fn annulus(worst_constraint: &Cell<f64>) -> Verdict {
    let spec = MixtureSpec::symmetric_default();
    let cfg = NewtonConfig::default();
    let (wide, thin) = rayon::join(
        || run_annulus(1.0, 2.0, 32, 128, 1.0, &spec, &cfg),
        || run_annulus(1.8, 2.0, 32, 128, 1.0, &spec, &cfg),
    );
    let (wide, thin) = match (wide, thin) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return verdict(false, format!("solve failed: {e}")),
    };
    for a in [&wide, &thin] {
        worst_constraint.set(worst_constraint.get().max(a.run.disc.constraint_violation(&spec, &a.run.state)));
    }
    let spread = wide.max_relative_std().max(thin.max_relative_std());
    let ok = spread < 1e-6 && wide.asymmetry > thin.asymmetry && (thin.asymmetry - 1.0).abs() <= 0.25;
    verdict(
        ok,
        format!(
            "largest ring spread {spread:.1e} (limit 1e-6); A(r_in=1) = {:.4}, A(r_in=1.8) = {:.4} (required within 0.25 of 1)",
            wide.asymmetry, thin.asymmetry
        ),
    )
}

fn temperature(worst_constraint: &Cell<f64>) -> Verdict {
    let taus = [0.5, 1.0, 2.0, 4.0];
    let points = match run_temperature_sweep(&taus, 1, 128, 1.0, &MixtureSpec::symmetric_default(), &NewtonConfig::default()) {
        Ok(p) => p,
        Err(e) => return verdict(false, format!("sweep failed: {e}")),
    };
    for p in &points {
        worst_constraint.set(worst_constraint.get().max(p.run.disc.constraint_violation(&p.run.spec, &p.run.state)));
    }
    let peaks: Vec<f64> = points.iter().map(|p| p.run.max_on_left_electrode(0)).collect();
    let devs: Vec<Vec<f64>> = points.iter().map(|p| p.run.sup_deviation()).collect();
    let names = ["y_C", "y_A", "n", "phi"];
    let mut parts = vec![format!("max y_C at cathode = {}", fmt_list(&peaks))];
    let mut all = strictly_decreasing(&peaks);
    for (f, name) in names.iter().enumerate() {
        let col: Vec<f64> = devs.iter().map(|d| d[f]).collect();
        let dec = strictly_decreasing(&col);
        all &= dec;
        parts.push(format!("sup dev {name} = {}{}", fmt_list(&col), if dec { "" } else { " (not decreasing)" }));
    }
    verdict(all, parts.join("; "))
}

fn jacobian_check() -> (usize, f64) {
    let spec = MixtureSpec::symmetric_default();
    let d = Discretization::new(P1Space::new(square_mesh(4, 4).unwrap()).unwrap(), 2);
    let l = d.layout();
    let data = ElectrodeVoltage::symmetric(0.8);
    let mut runner = TestRunner::deterministic();
    let strategy = (
        proptest::collection::vec(0.0f64..1.0, l.size()),
        proptest::collection::vec(-1.0f64..1.0, l.size()),
    );
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut worst = 0.0f64;
    let cases = 12;
    for _ in 0..cases {
        let (u, dir) = strategy.new_tree(&mut runner).unwrap().current();
        let mut s = SolutionState::constant(&[0.0, 0.0], 1.0, 0.0, l.nodes);
        for i in 0..l.nodes {
            s.y[0][i] = 0.05 + 0.4 * u[i];
            s.y[1][i] = 0.05 + 0.4 * u[l.nodes + i];
            s.n[i] = 0.5 + u[2 * l.nodes + i];
            s.phi[i] = 2.0 * u[3 * l.nodes + i] - 1.0;
        }
        s.c = vec![u[l.core_size()] - 0.5, u[l.core_size() + 1] - 0.5];
        s.c_n = u[l.core_size() + 2] - 0.5;
        let jd = d.linearize(&spec, &s, &data).unwrap().mul_vec(&dir);
        let x = s.to_vector();
        let step = 1e-7;
        let r = |sign: f64| {
            let v: Vec<f64> = x.iter().zip(&dir).map(|(a, b)| a + sign * step * b).collect();
            d.residual(&spec, &SolutionState::from_vector(l, &v).unwrap(), &data).unwrap()
        };
        let (rp, rm) = (r(1.0), r(-1.0));
        let diff: Vec<f64> = rp.iter().zip(&rm).zip(&jd).map(|((a, b), j)| (a - b) / (2.0 * step) - j).collect();
        worst = worst.max(norm(&diff) / norm(&jd));
    }
    (cases, worst)
}

fn trivial_solutions() -> (usize, f64) {
    let spec = MixtureSpec::symmetric_default();
    let cfg = NewtonConfig::default();
    let mut iters = 0;
    let mut resid = 0.0f64;
    for mesh in [interval_mesh(32).unwrap(), square_mesh(8, 8).unwrap(), cube_mesh(3, 3, 3).unwrap()] {
        let d = Discretization::new(P1Space::new(mesh).unwrap(), 2);
        let data = ElectrodeVoltage::symmetric(0.0);
        let start = initial_guess(&spec, &d, &data).unwrap();
        let (_, report) = newton_solve(&spec, &d, &start, &data, &cfg).unwrap();
        iters = iters.max(if report.converged { report.iterations } else { usize::MAX });
        resid = resid.max(report.residual_norm);
    }
    (iters, resid)
}

fn mesh_suite() -> (usize, usize) {
    let mut meshes: Vec<(Mesh, Option<f64>)> = Vec::new();
    for n in [1, 7, 64] {
        meshes.push((interval_mesh(n).unwrap(), Some(1.0)));
    }
    for (nx, ny) in [(1, 1), (3, 5), (16, 16)] {
        meshes.push((square_mesh(nx, ny).unwrap(), Some(1.0)));
    }
    for n in [1, 2, 5] {
        meshes.push((cube_mesh(n, n + 1, n).unwrap(), Some(1.0)));
    }
    for (r, nr, na) in [(1.0, 4, 16), (1.8, 8, 64), (0.5, 3, 3)] {
        meshes.push((annulus_mesh(r, 2.0, nr, na).unwrap(), None));
    }
    let total = meshes.len();
    let ok = meshes
        .iter()
        .filter(|(m, exact)| {
            let report = validate(m);
            let tagged: usize = BoundaryTag::ALL.iter().map(|&t| m.count_tag(t)).sum();
            let measure_ok = exact.is_none_or(|e| (m.total_measure() - e).abs() <= 1e-12 * e);
            report.is_ok() && tagged == report.boundary_facets && measure_ok
        })
        .count();
    (ok, total)
}

fn properties(worst_constraint: &Cell<f64>, mirror: f64) -> Verdict {
    let (cases, jac) = jacobian_check();
    if let Ok((d, s, _)) = solve_mms(&standard_mms_case(), 16, &NewtonConfig::default()) {
        worst_constraint.set(worst_constraint.get().max(d.constraint_violation(&standard_mms_case().spec, &s)));
    }
    let constraint = worst_constraint.get();
    let (iters, resid) = trivial_solutions();
    let (mesh_ok, mesh_total) = mesh_suite();
    let checks = [
        jac < 1e-6,
        constraint < 1e-10,
        iters <= 2 && resid <= NewtonConfig::default().abs_tol,
        mirror < 1e-8,
        mesh_ok == mesh_total,
    ];
    verdict(
        checks.iter().all(|&c| c),
        format!(
            "Jacobian vs finite differences on {cases} states: worst {jac:.1e} (limit 1e-6); \
             worst constraint violation {constraint:.1e} (limit 1e-10); zero-voltage solve {iters} iterations, residual {resid:.1e}; \
             1D mirror defect {mirror:.1e} (limit 1e-8); mesh invariants {mesh_ok}/{mesh_total}"
        ),
    )
}

fn main() {
    let worst_constraint = Cell::new(0.0f64);
    let mirror = Cell::new(f64::INFINITY);
    let secs = Duration::from_secs;
    run_criterion(1, "manufactured-solution convergence", secs(120), mms_orders);
    run_criterion(2, "printed order formula", secs(1), printed_orders);
    run_criterion(3, "compressible 1D", secs(10), || compressible_1d(&worst_constraint, &mirror));
    run_criterion(4, "incompressible limit", secs(60), || khat_sweep(&worst_constraint));
    run_criterion(5, "annulus", secs(60), || annulus(&worst_constraint));
    run_criterion(6, "temperature sweep", secs(60), || temperature(&worst_constraint));
    run_criterion(7, "property suites", secs(60), || properties(&worst_constraint, mirror.get()));
}
