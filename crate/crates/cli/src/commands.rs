use crate::config::{Command, Manifest, RunConfig};
use crate::Failure;
use electrolyte_fem::solver::SolveReport;
use electrolyte_fem::studies::{
    export_fields, fmt17, run_annulus, run_compressible, run_khat_sweep, run_temperature_sweep, temperature_overlay_dat,
    StudyRun,
};
use electrolyte_fem::verify::{run_convergence_study, FIELD_NAMES};
use electrolyte_fem::Error;
use std::fmt::Write as _;
use std::path::Path;

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error, p: &Path| Failure::Io(format!("cannot write {}: {e}", p.display()));
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| io(e, dir))?;
    }
    std::fs::write(path, text).map_err(|e| io(e, path))
}

fn push_report(m: &mut Manifest, prefix: &str, r: &SolveReport) {
    let history: Vec<String> = r.residual_history.iter().map(|v| format!("{v:e}")).collect();
    m.push(format!("{prefix}converged"), r.converged);
    m.push(format!("{prefix}iterations"), r.iterations);
    m.push(format!("{prefix}residual_norm"), format!("{:e}", r.residual_norm));
    m.push(format!("{prefix}continuation_levels"), r.continuation_levels);
    m.push(format!("{prefix}residual_history"), history.join(","));
}

/// Records a failed solve in the manifest, then hands the failure back.
fn fail(mut m: Manifest, err: Error) -> Failure {
    m.push("status", "failed");
    m.push("error", err.to_string().replace('\n', " "));
    if let Error::ContinuationFailed { report, .. } = &err {
        push_report(&mut m, "", report);
    }
    let failure = Failure::from(err);
    match write(&m.config.out.join("manifest.txt"), &m.to_text()) {
        Ok(()) => failure,
        Err(io) => io,
    }
}

fn finish(mut m: Manifest) -> Result<(), Failure> {
    m.push("status", "ok");
    write(&m.config.out.join("manifest.txt"), &m.to_text())
}

pub fn execute(cfg: &RunConfig) -> Result<(), Failure> {
    log::info!("running `{}` into {}", cfg.command.name(), cfg.out.display());
    match cfg.command {
        Command::Mms => mms(cfg),
        Command::Run => run(cfg),
        Command::Sweep => sweep(cfg),
        Command::Annulus => annulus(cfg),
        Command::Temperature => temperature(cfg),
    }
}

fn mms(cfg: &RunConfig) -> Result<(), Failure> {
    let mut m = Manifest::new(cfg.clone());
    let table = match run_convergence_study(&cfg.levels, &cfg.newton) {
        Ok(t) => t,
        Err(e) => return Err(fail(m, e)),
    };
    write(&cfg.out.join("convergence.csv"), &table.to_csv())?;
    write(&cfg.out.join("convergence.txt"), &table.to_text())?;
    for (row, cells) in table.rows.iter().zip(&cfg.levels) {
        push_report(&mut m, &format!("level.{cells}."), &row.report);
    }
    if let Some(last) = table.rows.last() {
        for (name, o) in FIELD_NAMES.iter().zip(last.orders) {
            if let Some(o) = o {
                m.push(format!("order.{name}"), o);
            }
        }
    }
    print!("{}", table.to_text());
    finish(m)
}

fn export_run(run: &StudyRun, out: &Path) -> Result<(), Failure> {
    export_fields(&run.disc, &run.spec, &run.state, &run.section, out)?;
    Ok(())
}

fn run(cfg: &RunConfig) -> Result<(), Failure> {
    let mut m = Manifest::new(cfg.clone());
    let run = match run_compressible(cfg.dim, cfg.effective_cells(), cfg.voltage, &cfg.mixture, &cfg.newton) {
        Ok(r) => r,
        Err(e) => return Err(fail(m, e)),
    };
    export_run(&run, &cfg.out)?;
    push_report(&mut m, "", &run.report);
    m.push("constraint_violation", format!("{:e}", run.disc.constraint_violation(&run.spec, &run.state)));
    println!(
        "converged in {} iterations, residual {:.3e}; fields written to {}",
        run.report.iterations,
        run.report.residual_norm,
        cfg.out.display()
    );
    finish(m)
}

fn sweep(cfg: &RunConfig) -> Result<(), Failure> {
    let mut m = Manifest::new(cfg.clone());
    let sweep = match run_khat_sweep(&cfg.khat_values, cfg.dim, cfg.effective_cells(), cfg.voltage, &cfg.mixture, &cfg.newton) {
        Ok(s) => s,
        Err(e) => return Err(fail(m, e)),
    };
    let csv = sweep.to_csv();
    write(&cfg.out.join("khat_sweep.csv"), &csv)?;
    print!("{csv}");
    let mut failed = Vec::new();
    for r in &sweep.rows {
        match &r.outcome {
            Ok(p) => m.push(format!("khat.{}.max_abs_n_minus_n0", r.khat), fmt17(p.max_density_deviation)),
            Err(e) => {
                m.push(format!("khat.{}.error", r.khat), e);
                failed.push(r.khat);
            }
        }
    }
    if failed.is_empty() {
        finish(m)
    } else {
        m.push("status", "partial");
        write(&cfg.out.join("manifest.txt"), &m.to_text())?;
        Err(Failure::Solver(format!("sweep members failed for khat = {failed:?}; see khat_sweep.csv")))
    }
}

fn annulus(cfg: &RunConfig) -> Result<(), Failure> {
    let mut m = Manifest::new(cfg.clone());
    let a = match run_annulus(cfg.r_in, cfg.r_out, cfg.n_radial, cfg.n_angular, cfg.voltage, &cfg.mixture, &cfg.newton) {
        Ok(a) => a,
        Err(e) => return Err(fail(m, e)),
    };
    export_run(&a.run, &cfg.out)?;
    let mut rings = String::from("radius");
    for s in &cfg.mixture.species {
        let _ = write!(rings, ",rel_std_{}", s.name);
    }
    rings.push_str(",rel_std_n,rel_std_phi\n");
    for r in &a.rings {
        rings.push_str(&fmt17(r.radius));
        for v in &r.relative_std {
            let _ = write!(rings, ",{}", fmt17(*v));
        }
        rings.push('\n');
    }
    write(&cfg.out.join("rings.csv"), &rings)?;
    push_report(&mut m, "", &a.run.report);
    m.push("asymmetry", a.asymmetry);
    m.push("max_ring_relative_std", format!("{:e}", a.max_relative_std()));
    println!("asymmetry A = {:.6}, largest ring spread {:.3e}", a.asymmetry, a.max_relative_std());
    finish(m)
}

fn temperature(cfg: &RunConfig) -> Result<(), Failure> {
    let mut m = Manifest::new(cfg.clone());
    let points = match run_temperature_sweep(&cfg.tau_values, cfg.dim, cfg.effective_cells(), cfg.voltage, &cfg.mixture, &cfg.newton) {
        Ok(p) => p,
        Err(e) => return Err(fail(m, e)),
    };
    let mut table = String::from("tau,max_y0_left_electrode");
    for s in &cfg.mixture.species {
        let _ = write!(table, ",sup_dev_{}", s.name);
    }
    table.push_str(",sup_dev_n,sup_dev_phi\n");
    for p in &points {
        export_run(&p.run, &cfg.out.join(format!("tau_{}", p.tau)))?;
        let _ = write!(table, "{},{}", fmt17(p.tau), fmt17(p.run.max_on_left_electrode(0)));
        for d in p.run.sup_deviation() {
            let _ = write!(table, ",{}", fmt17(d));
        }
        table.push('\n');
        push_report(&mut m, &format!("tau.{}.", p.tau), &p.run.report);
    }
    write(&cfg.out.join("temperature.csv"), &table)?;
    write(&cfg.out.join("cross_sections.dat"), &temperature_overlay_dat(&points))?;
    print!("{table}");
    finish(m)
}
