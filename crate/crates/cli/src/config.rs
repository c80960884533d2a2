//! Effective run configuration, the `key = value` file format and manifests.

use electrolyte_fem::model::{MixtureSpec, SpeciesSpec};
use electrolyte_fem::solver::NewtonConfig;
use electrolyte_fem::studies::{default_cells, KHAT_SWEEP_CELLS};
use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Mms,
    Run,
    Sweep,
    Annulus,
    Temperature,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Mms => "mms",
            Command::Run => "run",
            Command::Sweep => "sweep",
            Command::Annulus => "annulus",
            Command::Temperature => "temperature",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "mms" => Command::Mms,
            "run" => Command::Run,
            "sweep" => Command::Sweep,
            "annulus" => Command::Annulus,
            "temperature" => Command::Temperature,
            other => return Err(format!("unknown command `{other}`")),
        })
    }
}

/// Every parameter a run depends on.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub out: PathBuf,
    pub dim: usize,
    /// Cells per side of the unit box; `None` picks the default for `dim`.
    pub cells: Option<usize>,
    pub voltage: f64,
    pub khat_values: Vec<f64>,
    pub tau_values: Vec<f64>,
    pub r_in: f64,
    pub r_out: f64,
    pub n_radial: usize,
    pub n_angular: usize,
    pub levels: Vec<usize>,
    pub newton: NewtonConfig,
    pub mixture: MixtureSpec,
}

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        RunConfig {
            command,
            out: PathBuf::from("output").join(command.name()),
            dim: 1,
            cells: None,
            voltage: 1.0,
            khat_values: vec![0.1, 1.0, 10.0, 100.0, 1000.0],
            tau_values: vec![0.5, 1.0, 2.0, 4.0],
            r_in: 1.0,
            r_out: 2.0,
            n_radial: 32,
            n_angular: 128,
            levels: vec![4, 8, 16, 32],
            newton: NewtonConfig::default(),
            mixture: MixtureSpec::symmetric_default(),
        }
    }

    pub fn effective_cells(&self) -> usize {
        self.cells.unwrap_or(match (self.command, self.dim) {
            (Command::Sweep, 1) => KHAT_SWEEP_CELLS,
            _ => default_cells(self.dim),
        })
    }

    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let bad = |e: &dyn fmt::Display| format!("{key} = {value}: {e}");
        let f = |v: &str| v.parse::<f64>().map_err(|e| bad(&e));
        let u = |v: &str| v.parse::<usize>().map_err(|e| bad(&e));
        let list = |v: &str| -> Result<Vec<f64>, String> { v.split(',').map(|x| f(x.trim())).collect() };
        match key {
            "command" => {
                let c: Command = value.parse()?;
                if c != self.command {
                    return Err(format!("file is for `{}` but `{}` was requested", c.name(), self.command.name()));
                }
            }
            "out" => self.out = PathBuf::from(value),
            "dim" => self.dim = u(value)?,
            "cells" => self.cells = Some(u(value)?),
            "voltage" => self.voltage = f(value)?,
            "khat_values" => self.khat_values = list(value)?,
            "tau_values" => self.tau_values = list(value)?,
            "r_in" => self.r_in = f(value)?,
            "r_out" => self.r_out = f(value)?,
            "n_radial" => self.n_radial = u(value)?,
            "n_angular" => self.n_angular = u(value)?,
            "levels" => self.levels = value.split(',').map(|x| u(x.trim())).collect::<Result<_, _>>()?,
            "newton.abs_tol" => self.newton.abs_tol = f(value)?,
            "newton.rel_tol" => self.newton.rel_tol = f(value)?,
            "newton.max_iter" => self.newton.max_iter = u(value)?,
            "newton.damping_min" => self.newton.damping_min = f(value)?,
            "newton.continuation_steps" => self.newton.continuation_steps = u(value)?,
            "mixture.chi" => self.mixture.chi = f(value)?,
            "mixture.psi" => self.mixture.psi = f(value)?,
            "mixture.lambda" => self.mixture.lambda = f(value)?,
            "mixture.khat" => self.mixture.khat = f(value)?,
            "mixture.n_avg" => self.mixture.n_avg = f(value)?,
            "mixture.ions" => {
                let n = u(value)?;
                let defaults = MixtureSpec::symmetric_default().species;
                self.mixture.species.resize_with(n, || SpeciesSpec {
                    name: String::new(),
                    charge: 0,
                    mass_ratio: 1.0,
                    y_avg: 0.0,
                });
                for (i, s) in self.mixture.species.iter_mut().enumerate() {
                    if s.name.is_empty() {
                        *s = defaults.get(i).cloned().unwrap_or(SpeciesSpec {
                            name: format!("ion{i}"),
                            ..s.clone()
                        });
                    }
                }
            }
            _ => return self.set_species(key, value),
        }
        Ok(())
    }

    fn set_species(&mut self, key: &str, value: &str) -> Result<(), String> {
        let unknown = || format!("unknown key `{key}`");
        let rest = key.strip_prefix("species.").ok_or_else(unknown)?;
        let (index, field) = rest.split_once('.').ok_or_else(unknown)?;
        let i: usize = index.parse().map_err(|_| unknown())?;
        let count = self.mixture.species.len();
        let s = self
            .mixture
            .species
            .get_mut(i)
            .ok_or_else(|| format!("{key}: species index {i} but only {count} species (set mixture.ions first)"))?;
        let bad = |e: &dyn fmt::Display| format!("{key} = {value}: {e}");
        match field {
            "name" => s.name = value.to_string(),
            "charge" => s.charge = value.parse().map_err(|e| bad(&e))?,
            "mass_ratio" => s.mass_ratio = value.parse().map_err(|e| bad(&e))?,
            "y_avg" => s.y_avg = value.parse().map_err(|e| bad(&e))?,
            _ => return Err(unknown()),
        }
        Ok(())
    }

    /// Reads `key = value` lines. `#` starts a comment; `report.*` keys are
    /// results of an earlier run and are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<(), String> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
            let (k, v) = (k.trim(), v.trim());
            if !k.starts_with("report.") {
                pairs.push((lineno + 1, k, v));
            }
        }
        // the species count has to be known before per-species keys
        pairs.sort_by_key(|(_, k, _)| *k != "mixture.ions");
        for (lineno, k, v) in pairs {
            self.set(k, v).map_err(|e| format!("line {lineno}: {e}"))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), String> {
        self.newton.validate().map_err(|e| e.to_string())?;
        self.mixture.validate().map_err(|e| e.to_string())?;
        if !self.voltage.is_finite() {
            return Err("voltage must be finite".into());
        }
        match self.command {
            Command::Mms => {
                if self.levels.is_empty() || self.levels.contains(&0) || self.levels.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(format!("levels must be positive and strictly increasing, got {:?}", self.levels));
                }
            }
            Command::Annulus => {
                if !(self.r_in > 0.0 && self.r_in < self.r_out && self.r_out.is_finite()) {
                    return Err(format!("annulus needs 0 < r_in < r_out, got r_in = {}, r_out = {}", self.r_in, self.r_out));
                }
                if self.n_radial == 0 || self.n_angular < 3 {
                    return Err("annulus needs n_radial >= 1 and n_angular >= 3".into());
                }
            }
            Command::Run | Command::Sweep | Command::Temperature => {
                if !(1..=3).contains(&self.dim) {
                    return Err(format!("dim must be 1, 2 or 3, got {}", self.dim));
                }
                if self.effective_cells() == 0 {
                    return Err("cells must be positive".into());
                }
            }
        }
        let positive = |name: &str, v: &[f64]| {
            if v.is_empty() || v.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
                Err(format!("{name} must be a non-empty list of positive values, got {v:?}"))
            } else {
                Ok(())
            }
        };
        match self.command {
            Command::Sweep => positive("khat_values", &self.khat_values),
            Command::Temperature => positive("tau_values", &self.tau_values),
            _ => Ok(()),
        }
    }

    /// `key = value` lines for every parameter the command uses.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("command", self.command.name().into());
        kv("out", self.out.display().to_string());
        match self.command {
            Command::Mms => {
                let levels: Vec<String> = self.levels.iter().map(|l| l.to_string()).collect();
                kv("levels", levels.join(","));
            }
            Command::Annulus => {
                kv("r_in", self.r_in.to_string());
                kv("r_out", self.r_out.to_string());
                kv("n_radial", self.n_radial.to_string());
                kv("n_angular", self.n_angular.to_string());
                kv("voltage", self.voltage.to_string());
            }
            Command::Run | Command::Sweep | Command::Temperature => {
                kv("dim", self.dim.to_string());
                kv("cells", self.effective_cells().to_string());
                kv("voltage", self.voltage.to_string());
            }
        }
        match self.command {
            Command::Sweep => kv("khat_values", join(&self.khat_values)),
            Command::Temperature => kv("tau_values", join(&self.tau_values)),
            _ => {}
        }
        let n = &self.newton;
        kv("newton.abs_tol", n.abs_tol.to_string());
        kv("newton.rel_tol", n.rel_tol.to_string());
        kv("newton.max_iter", n.max_iter.to_string());
        kv("newton.damping_min", n.damping_min.to_string());
        kv("newton.continuation_steps", n.continuation_steps.to_string());
        // the manufactured problem fixes its own mixture
        if self.command != Command::Mms {
            let m = &self.mixture;
            kv("mixture.chi", m.chi.to_string());
            kv("mixture.psi", m.psi.to_string());
            kv("mixture.lambda", m.lambda.to_string());
            kv("mixture.khat", m.khat.to_string());
            kv("mixture.n_avg", m.n_avg.to_string());
            kv("mixture.ions", m.species.len().to_string());
            for (i, sp) in m.species.iter().enumerate() {
                kv(&format!("species.{i}.name"), sp.name.clone());
                kv(&format!("species.{i}.charge"), sp.charge.to_string());
                kv(&format!("species.{i}.mass_ratio"), sp.mass_ratio.to_string());
                kv(&format!("species.{i}.y_avg"), sp.y_avg.to_string());
            }
        }
        s
    }
}

/// Run manifest: the effective configuration followed by `report.*` results.
pub struct Manifest {
    pub config: RunConfig,
    pub report: Vec<(String, String)>,
}

impl Manifest {
    pub fn new(config: RunConfig) -> Self {
        Manifest { config, report: Vec::new() }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.report.push((format!("report.{}", key.into()), value.to_string()));
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("# electrolyte run manifest; feed back with --config to repeat the run\n");
        s.push_str(&self.config.to_text());
        for (k, v) in &self.report {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }
}
