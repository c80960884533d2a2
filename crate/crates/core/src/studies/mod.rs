//! Drivers for the physical studies and their file output.

mod cross_section;
mod export;

pub use cross_section::CrossSection;
pub use export::{cross_section_csv, cross_section_dat, export_fields, fmt17, nodal_csv, vtk_string};

use crate::error::{Error, Result};
use crate::fem::P1Space;
use crate::mesh::{annulus_mesh, cube_mesh, interval_mesh, square_mesh, Mesh};
use crate::model::{pressure_recover, Discretization, ElectrodeVoltage, MixtureSpec, SolutionState};
use crate::solver::{continuation_solve, NewtonConfig, SolveReport};
use rayon::prelude::*;
use std::fmt::Write as _;

/// Default cells per side for the unit-box runs, indexed by dimension.
pub fn default_cells(dim: usize) -> usize {
    match dim {
        1 => 128,
        2 => 64,
        _ => 16,
    }
}

/// Cells used by the bulk-modulus sweep. At `K̂ = 0.1` the density layer is
/// too thin for the default 1D mesh.
pub const KHAT_SWEEP_CELLS: usize = 512;

/// Samples taken along each cross-section line in 2D and 3D.
const SECTION_SAMPLES: usize = 257;

/// A converged solve with everything needed to post-process it.
pub struct StudyRun {
    pub spec: MixtureSpec,
    pub disc: Discretization,
    pub state: SolutionState,
    pub report: SolveReport,
    pub section: CrossSection,
}

impl StudyRun {
    pub fn pressure(&self) -> Vec<f64> {
        pressure_recover(&self.spec, &self.state)
    }

    /// Largest `|u - mean|` per field, in the order of the ions, then `n`, then `φ`.
    /// Ions and `n` are measured against their prescribed averages.
    pub fn sup_deviation(&self) -> Vec<f64> {
        let sup = |u: &[f64], m: f64| u.iter().fold(0.0f64, |acc, v| acc.max((v - m).abs()));
        let mut out: Vec<f64> = self
            .state
            .y
            .iter()
            .zip(&self.spec.species)
            .map(|(f, s)| sup(f, s.y_avg))
            .collect();
        out.push(sup(&self.state.n, self.spec.n_avg));
        out.push(sup(&self.state.phi, self.disc.mean(&self.state.phi)));
        out
    }

    /// Largest nodal value of ion `alpha` on the left electrode.
    pub fn max_on_left_electrode(&self, alpha: usize) -> f64 {
        self.disc
            .dirichlet_nodes()
            .iter()
            .filter(|(_, tag)| *tag == crate::mesh::BoundaryTag::GammaDL)
            .map(|&(v, _)| self.state.y[alpha][v])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn box_mesh(dim: usize, cells: usize) -> Result<Mesh> {
    match dim {
        1 => interval_mesh(cells),
        2 => square_mesh(cells, cells),
        3 => cube_mesh(cells, cells, cells),
        _ => Err(Error::InvalidParameter(format!("dimension must be 1, 2 or 3, got {dim}"))),
    }
}

/// Endpoints of the reported line: the whole interval, the horizontal
/// midline of the square, the main diagonal of the cube (joining the two
/// electrode corners).
fn box_section(dim: usize) -> (Vec<f64>, Vec<f64>) {
    match dim {
        1 => (vec![0.0], vec![1.0]),
        2 => (vec![0.0, 0.5], vec![1.0, 0.5]),
        _ => (vec![0.0; 3], vec![1.0; 3]),
    }
}

fn solve_on(mesh: Mesh, spec: &MixtureSpec, voltage: f64, config: &NewtonConfig, line: (Vec<f64>, Vec<f64>), samples: usize) -> Result<StudyRun> {
    spec.validate()?;
    let disc = Discretization::new(P1Space::new(mesh)?, spec.num_ions());
    let data = ElectrodeVoltage::symmetric(voltage);
    let (state, report) = continuation_solve(spec, &disc, &data, config)?;
    let section = CrossSection::sample(&disc, spec, &state, &line.0, &line.1, samples);
    Ok(StudyRun {
        spec: spec.clone(),
        disc,
        state,
        report,
        section,
    })
}

/// Solves on `[0, 1]^dim` with `-voltage` on the left electrode and `+voltage` on the right.
pub fn run_compressible(dim: usize, cells: usize, voltage: f64, spec: &MixtureSpec, config: &NewtonConfig) -> Result<StudyRun> {
    if cells == 0 {
        return Err(Error::InvalidParameter("cells must be positive".into()));
    }
    let mesh = box_mesh(dim, cells)?;
    // in 1D sample exactly at the vertices
    let samples = if dim == 1 { cells + 1 } else { SECTION_SAMPLES };
    solve_on(mesh, spec, voltage, config, box_section(dim), samples)
}

#[derive(Clone, Debug, PartialEq)]
pub struct KhatPoint {
    pub max_density_deviation: f64,
    pub pressure_min: f64,
    pub pressure_max: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KhatRow {
    pub khat: f64,
    /// Error message when this member failed.
    pub outcome: std::result::Result<KhatPoint, String>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct KhatSweep {
    pub rows: Vec<KhatRow>,
}

impl KhatSweep {
    pub fn deviation(&self, khat: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.khat == khat)
            .and_then(|r| r.outcome.as_ref().ok())
            .map(|p| p.max_density_deviation)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("khat,max_abs_n_minus_n0,p_hat_min,p_hat_max,iterations,status\n");
        for r in &self.rows {
            match &r.outcome {
                Ok(p) => {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},ok",
                        fmt17(r.khat),
                        fmt17(p.max_density_deviation),
                        fmt17(p.pressure_min),
                        fmt17(p.pressure_max),
                        p.iterations
                    );
                }
                Err(e) => {
                    let _ = writeln!(s, "{},,,,,\"failed: {}\"", fmt17(r.khat), e.replace('"', "'"));
                }
            }
        }
        s
    }
}

/// Solves once per bulk modulus, in parallel. A failing member is recorded
/// and does not stop the others.
pub fn run_khat_sweep(
    values: &[f64],
    dim: usize,
    cells: usize,
    voltage: f64,
    spec: &MixtureSpec,
    config: &NewtonConfig,
) -> Result<KhatSweep> {
    if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidParameter(format!("bulk modulus values must be positive, got {v}")));
    }
    box_mesh(dim, cells.max(1))?;
    let rows = values
        .par_iter()
        .map(|&khat| {
            let member = MixtureSpec { khat, ..spec.clone() };
            let outcome = run_compressible(dim, cells, voltage, &member, config)
                .map(|run| {
                    let p = run.pressure();
                    KhatPoint {
                        max_density_deviation: run.state.n.iter().fold(0.0f64, |m, n| m.max((n - member.n_avg).abs())),
                        pressure_min: p.iter().copied().fold(f64::INFINITY, f64::min),
                        pressure_max: p.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                        iterations: run.report.iterations,
                    }
                })
                .map_err(|e| e.to_string());
            KhatRow { khat, outcome }
        })
        .collect();
    Ok(KhatSweep { rows })
}

/// Relative angular spread of every field on one ring of the annulus mesh.
#[derive(Clone, Debug, PartialEq)]
pub struct RingSpread {
    pub radius: f64,
    /// Standard deviation over the ring divided by the absolute ring mean;
    /// ions, `n`, `φ`.
    pub relative_std: Vec<f64>,
}

pub struct AnnulusRun {
    pub run: StudyRun,
    /// `|n(r_in) - n⁰| / |n(r_out) - n⁰|` on the positive x-axis.
    pub asymmetry: f64,
    pub rings: Vec<RingSpread>,
}

impl AnnulusRun {
    pub fn max_relative_std(&self) -> f64 {
        self.rings
            .iter()
            .flat_map(|r| r.relative_std.iter().copied())
            .fold(0.0, f64::max)
    }
}

/// Annulus with `-voltage` on the inner circle and `+voltage` on the outer one.
pub fn run_annulus(
    r_in: f64,
    r_out: f64,
    n_radial: usize,
    n_angular: usize,
    voltage: f64,
    spec: &MixtureSpec,
    config: &NewtonConfig,
) -> Result<AnnulusRun> {
    let mesh = annulus_mesh(r_in, r_out, n_radial, n_angular)?;
    let run = solve_on(mesh, spec, voltage, config, (vec![r_in, 0.0], vec![r_out, 0.0]), n_radial + 1)?;
    let n = &run.section.n;
    let (first, last) = (n[0], n[n.len() - 1]);
    let asymmetry = (first - spec.n_avg).abs() / (last - spec.n_avg).abs();

    // vertices are stored ring by ring
    let mesh = run.disc.space().mesh();
    let mut fields: Vec<&[f64]> = run.state.y.iter().map(|f| f.as_slice()).collect();
    fields.push(&run.state.n);
    fields.push(&run.state.phi);
    let rings = (0..=n_radial)
        .map(|k| {
            let range = k * n_angular..(k + 1) * n_angular;
            let x = mesh.vertex(range.start);
            let relative_std = fields
                .iter()
                .map(|f| {
                    let vals = &f[range.clone()];
                    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
                    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / vals.len() as f64;
                    var.sqrt() / mean.abs()
                })
                .collect();
            RingSpread {
                radius: x[0].hypot(x[1]),
                relative_std,
            }
        })
        .collect();
    Ok(AnnulusRun { run, asymmetry, rings })
}

pub struct TemperaturePoint {
    pub tau: f64,
    pub run: StudyRun,
}

/// Solves with Ψ, Λ and K̂ of `spec` divided by each `tau`, in parallel.
pub fn run_temperature_sweep(
    taus: &[f64],
    dim: usize,
    cells: usize,
    voltage: f64,
    spec: &MixtureSpec,
    config: &NewtonConfig,
) -> Result<Vec<TemperaturePoint>> {
    let specs = taus
        .iter()
        .map(|&tau| spec.at_temperature_scale(tau))
        .collect::<Result<Vec<_>>>()?;
    taus.par_iter()
        .zip(specs.par_iter())
        .map(|(&tau, s)| run_compressible(dim, cells, voltage, s, config).map(|run| TemperaturePoint { tau, run }))
        .collect()
}

/// Cross-sections of a temperature sweep side by side: one block per `tau`,
/// separated by blank lines (gnuplot `index`).
pub fn temperature_overlay_dat(points: &[TemperaturePoint]) -> String {
    let mut s = String::new();
    for p in points {
        let _ = writeln!(s, "# tau = {}", p.tau);
        s.push_str(&cross_section_dat(&p.run.spec, &p.run.section));
        s.push_str("\n\n");
    }
    s
}
