//! Batch sweeps driven by a TOML configuration, written as CSV.
//!
//! ```toml
//! scenario = "sweep_loss"
//! output_path = "loss.csv"
//!
//! [physics]
//! nbar = 100
//! tau = 5.75          # in units of 2π/Ω̄
//!
//! [grid]
//! start = 0.0
//! stop = 0.3
//! steps = 120
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::execution::{Execution, ExecutionMode};
use crate::fiber_transfer::{build_fiber, transfer_amplitude, FiberConfig};
use crate::fock_core::{coherent_tail_mass, default_n_max, C64, COHERENT_TAIL_TOL};
use crate::helstrom_povm::{povm, PovmResult};
use crate::linearized_oracle::{approx_prior, linearization_valid, DEFAULT_MARGIN};
use crate::loss_channel::{lossy_scenario, LossParams};
use crate::ramsey_dynamics::{joint_pure_state, InteractionParams, DEFAULT_OMEGA};

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Ratio `Δ/Ω̄₀` of the weak-coupling preset.
pub const WEAK_COUPLING_RATIO: f64 = 5.0;

/// Interaction time of the loss study, in units of `2π/Ω̄`.
pub const LOSS_STUDY_TAU: f64 = 23.0 / 4.0;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    #[default]
    SweepTau,
    SweepTauWeak,
    SweepLoss,
    FiberTransfer,
    SinglePoint,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Scenario::SweepTau,
        Scenario::SweepTauWeak,
        Scenario::SweepLoss,
        Scenario::FiberTransfer,
        Scenario::SinglePoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::SweepTau => "sweep_tau",
            Scenario::SweepTauWeak => "sweep_tau_weak",
            Scenario::SweepLoss => "sweep_loss",
            Scenario::FiberTransfer => "fiber_transfer",
            Scenario::SinglePoint => "single_point",
        }
    }

    fn parse(s: &str) -> Option<Scenario> {
        Scenario::ALL.into_iter().find(|x| x.name() == s)
    }

    fn default_grid(self) -> Grid {
        let (start, stop, steps) = match self {
            Scenario::SweepTau => (0.0, 12.0, 200),
            Scenario::SweepTauWeak => (0.0, 10.0, 200),
            Scenario::SweepLoss => (0.0, 0.3, 120),
            Scenario::FiberTransfer => (501.0, 2001.0, 3),
            Scenario::SinglePoint => (0.0, 0.0, 2),
        };
        Grid { start, stop, steps }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Physics {
    pub nbar: f64,
    pub delta_over_omega0: f64,
    pub omega: f64,
    pub g: f64,
    pub g_phase: f64,
    pub e0: f64,
    pub e1: f64,
    pub n_max: usize,
    /// Fixed interaction time of the loss study, in units of `2π/Ω̄`.
    pub tau: f64,
}

impl Physics {
    /// Interaction parameters with `τ = cycles · 2π/Ω̄` and readout at `2τ`.
    pub fn params(&self, cycles: f64) -> InteractionParams {
        let mut p = InteractionParams::new(self.nbar, 0.0, 0.0);
        p.g_mag = self.g;
        p.g_phase = self.g_phase;
        p.delta = self.delta_over_omega0 * p.omega0_bar();
        p.omega = self.omega;
        p.e0 = self.e0;
        p.e1 = self.e1;
        p.n_max = self.n_max;
        p.with_tau(cycles * 2.0 * std::f64::consts::PI / p.omega_bar())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Grid {
    /// Evenly spaced values with both ends included.
    pub fn values(&self) -> Vec<f64> {
        if self.steps < 2 {
            return vec![self.start];
        }
        let span = self.stop - self.start;
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.stop
                } else {
                    self.start + span * i as f64 / last as f64
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Loss {
    pub gamma_t: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FiberSettings {
    pub length_l: f64,
    pub c: f64,
    pub omega: f64,
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub gamma_t1: f64,
    pub gamma_t2: f64,
    pub engineered: bool,
}

impl FiberSettings {
    /// Configuration with `2K + 1` modes for the mode count `m` rounded to the nearest odd value.
    pub fn config(&self, m: f64) -> (FiberConfig, usize) {
        let k = ((m - 1.0) / 2.0).round().max(0.0) as usize;
        let spacing = 2.0 * std::f64::consts::PI * self.c / self.length_l;
        let cfg = FiberConfig {
            length_l: self.length_l,
            c: self.c,
            omega: self.omega,
            band: (k as f64 + 0.5) * spacing,
            gamma_a: self.gamma_a,
            gamma_b: self.gamma_b,
            gamma_t1: self.gamma_t1,
            gamma_t2: self.gamma_t2,
            engineered: self.engineered,
        };
        (cfg, 2 * k + 1)
    }
}

impl Default for FiberSettings {
    fn default() -> Self {
        let m = FiberConfig::matched(0);
        Self {
            length_l: m.length_l,
            c: m.c,
            omega: m.omega,
            gamma_a: m.gamma_a,
            gamma_b: m.gamma_b,
            gamma_t1: m.gamma_t1,
            gamma_t2: m.gamma_t2,
            engineered: m.engineered,
        }
    }
}

/// Fully resolved configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub scenario: Scenario,
    pub output_path: PathBuf,
    pub physics: Physics,
    pub grid: Grid,
    pub loss: Loss,
    pub fiber: FiberSettings,
    pub execution: Execution,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub scenario: Option<Scenario>,
    pub nbar: Option<f64>,
    pub delta_over_omega0: Option<f64>,
    pub tau_start: Option<f64>,
    pub tau_stop: Option<f64>,
    pub steps: Option<usize>,
    pub gamma_t_max: Option<f64>,
    pub out: Option<PathBuf>,
    pub execution: Option<ExecutionMode>,
}

const SECTIONS: [(&str, &[&str]); 5] = [
    (
        "physics",
        &[
            "nbar",
            "delta_over_omega0",
            "omega",
            "g",
            "g_phase",
            "e0",
            "e1",
            "n_max",
            "tau",
        ],
    ),
    ("grid", &["start", "stop", "steps"]),
    ("loss", &["gamma_t"]),
    (
        "fiber",
        &[
            "length_l",
            "c",
            "omega",
            "gamma_a",
            "gamma_b",
            "gamma_t1",
            "gamma_t2",
            "engineered",
        ],
    ),
    ("execution", &["mode", "threads"]),
];

/// Flat `section.key -> value` view of a checked configuration table.
struct Raw {
    entries: Vec<(String, Value)>,
}

impl Raw {
    fn parse(text: &str) -> Result<Self> {
        let table: Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::config("config", e.message().to_string()))?;
        let mut entries = Vec::new();
        for (key, value) in table {
            match key.as_str() {
                "scenario" | "output_path" => entries.push((key, value)),
                _ => {
                    let Some((_, allowed)) = SECTIONS.iter().find(|(s, _)| *s == key) else {
                        return Err(Error::config(key, "unknown key"));
                    };
                    let Value::Table(inner) = value else {
                        return Err(Error::config(key, "expected a table"));
                    };
                    for (k, v) in inner {
                        let path = format!("{key}.{k}");
                        if !allowed.contains(&k.as_str()) {
                            return Err(Error::config(path, "unknown key"));
                        }
                        entries.push((path, v));
                    }
                }
            }
        }
        Ok(Self { entries })
    }

    fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    fn set(&mut self, key: &str, value: Value) {
        self.entries.retain(|(k, _)| k != key);
        self.entries.push((key.to_string(), value));
    }

    fn f64(&self, key: &str) -> Result<Option<f64>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Float(x)) => Ok(Some(*x)),
            Some(Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(v) => Err(Error::config(
                key,
                format!("expected a number, found {}", v.type_str()),
            )),
        }
    }

    fn usize(&self, key: &str) -> Result<Option<usize>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Integer(i)) => usize::try_from(*i)
                .map(Some)
                .map_err(|_| Error::config(key, format!("{i} must be non-negative"))),
            Some(v) => Err(Error::config(
                key,
                format!("expected an integer, found {}", v.type_str()),
            )),
        }
    }

    fn bool(&self, key: &str) -> Result<Option<bool>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Boolean(b)) => Ok(Some(*b)),
            Some(v) => Err(Error::config(
                key,
                format!("expected a boolean, found {}", v.type_str()),
            )),
        }
    }

    fn str(&self, key: &str) -> Result<Option<&str>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(v) => Err(Error::config(
                key,
                format!("expected a string, found {}", v.type_str()),
            )),
        }
    }
}

fn reject(flag: &str, scenario: Scenario) -> Error {
    Error::config(flag, format!("not used by {scenario}"))
}

fn apply_overrides(raw: &mut Raw, scenario: Scenario, o: &Overrides) -> Result<()> {
    if let Some(x) = o.nbar {
        raw.set("physics.nbar", Value::Float(x));
    }
    if let Some(x) = o.delta_over_omega0 {
        raw.set("physics.delta_over_omega0", Value::Float(x));
    }
    if let Some(p) = &o.out {
        raw.set(
            "output_path",
            Value::String(p.to_string_lossy().into_owned()),
        );
    }
    if let Some(m) = o.execution {
        let name = match m {
            ExecutionMode::Parallel => "parallel",
            ExecutionMode::Sequential => "sequential",
        };
        raw.set("execution.mode", Value::String(name.into()));
    }
    let steps = o.steps.map(|s| Value::Integer(s as i64));
    match scenario {
        Scenario::SweepTau | Scenario::SweepTauWeak => {
            if o.gamma_t_max.is_some() {
                return Err(reject("--gamma-t-max", scenario));
            }
            if let Some(x) = o.tau_start {
                raw.set("grid.start", Value::Float(x));
            }
            if let Some(x) = o.tau_stop {
                raw.set("grid.stop", Value::Float(x));
            }
            if let Some(v) = steps {
                raw.set("grid.steps", v);
            }
        }
        Scenario::SweepLoss => {
            if o.tau_stop.is_some() {
                return Err(reject("--tau-stop", scenario));
            }
            if let Some(x) = o.tau_start {
                raw.set("physics.tau", Value::Float(x));
            }
            if let Some(x) = o.gamma_t_max {
                raw.set("grid.stop", Value::Float(x));
            }
            if let Some(v) = steps {
                raw.set("grid.steps", v);
            }
        }
        Scenario::SinglePoint => {
            if o.tau_stop.is_some() {
                return Err(reject("--tau-stop", scenario));
            }
            if o.steps.is_some() {
                return Err(reject("--steps", scenario));
            }
            if let Some(x) = o.tau_start {
                raw.set("grid.start", Value::Float(x));
            }
            if let Some(x) = o.gamma_t_max {
                raw.set("loss.gamma_t", Value::Float(x));
            }
        }
        Scenario::FiberTransfer => {
            for (flag, set) in [
                ("--nbar", o.nbar.is_some()),
                ("--delta-over-omega0", o.delta_over_omega0.is_some()),
                ("--tau-start", o.tau_start.is_some()),
                ("--tau-stop", o.tau_stop.is_some()),
                ("--gamma-t-max", o.gamma_t_max.is_some()),
            ] {
                if set {
                    return Err(reject(flag, scenario));
                }
            }
            if let Some(v) = steps {
                raw.set("grid.steps", v);
            }
        }
    }
    Ok(())
}

fn require(key: &str, ok: bool, message: impl Into<String>) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::config(key, message))
    }
}

fn positive(key: &str, v: f64) -> Result<()> {
    require(
        key,
        v.is_finite() && v > 0.0,
        format!("{v} must be positive"),
    )
}

fn finite(key: &str, v: f64) -> Result<()> {
    require(key, v.is_finite(), format!("{v} must be finite"))
}

/// Resolves a configuration text (empty for all defaults) and command-line overrides.
pub fn parse_config(text: &str, overrides: &Overrides) -> Result<SweepConfig> {
    let mut raw = Raw::parse(text)?;

    let from_file = match raw.str("scenario")? {
        Some(s) => Some(
            Scenario::parse(s)
                .ok_or_else(|| Error::config("scenario", format!("unknown scenario `{s}`")))?,
        ),
        None => None,
    };
    let mut scenario = match (overrides.scenario, from_file) {
        (Some(Scenario::SweepTau), Some(Scenario::SweepTauWeak)) => Scenario::SweepTauWeak,
        (Some(s), _) => s,
        (None, Some(s)) => s,
        (None, None) => Scenario::default(),
    };
    apply_overrides(&mut raw, scenario, overrides)?;

    let ratio = raw.f64("physics.delta_over_omega0")?;
    if scenario == Scenario::SweepTau && ratio == Some(WEAK_COUPLING_RATIO) {
        scenario = Scenario::SweepTauWeak;
    }
    let ratio = ratio.unwrap_or(if scenario == Scenario::SweepTauWeak {
        WEAK_COUPLING_RATIO
    } else {
        0.0
    });
    finite("physics.delta_over_omega0", ratio)?;

    let nbar = raw.f64("physics.nbar")?.unwrap_or(100.0);
    positive("physics.nbar", nbar)?;
    let n_max = match raw.usize("physics.n_max")? {
        Some(n) => {
            require("physics.n_max", n >= 1, "must be at least 1")?;
            let tail = coherent_tail_mass(nbar.sqrt(), n);
            require(
                "physics.n_max",
                tail < COHERENT_TAIL_TOL,
                format!("{n} leaves coherent tail mass {tail:.3e} above {COHERENT_TAIL_TOL:e}"),
            )?;
            n
        }
        None => default_n_max(nbar),
    };
    let physics = Physics {
        nbar,
        delta_over_omega0: ratio,
        omega: raw.f64("physics.omega")?.unwrap_or(DEFAULT_OMEGA),
        g: raw.f64("physics.g")?.unwrap_or(1.0),
        g_phase: raw.f64("physics.g_phase")?.unwrap_or(0.0),
        e0: raw.f64("physics.e0")?.unwrap_or(0.0),
        e1: raw.f64("physics.e1")?.unwrap_or(1.0),
        n_max,
        tau: raw.f64("physics.tau")?.unwrap_or(LOSS_STUDY_TAU),
    };
    finite("physics.omega", physics.omega)?;
    positive("physics.g", physics.g)?;
    finite("physics.g_phase", physics.g_phase)?;
    finite("physics.e0", physics.e0)?;
    finite("physics.e1", physics.e1)?;
    require(
        "physics.tau",
        physics.tau.is_finite() && physics.tau >= 0.0,
        format!("{} must be non-negative", physics.tau),
    )?;

    let d = scenario.default_grid();
    let grid = Grid {
        start: raw.f64("grid.start")?.unwrap_or(d.start),
        stop: raw.f64("grid.stop")?.unwrap_or(d.stop),
        steps: raw.usize("grid.steps")?.unwrap_or(d.steps),
    };
    let lower = if scenario == Scenario::FiberTransfer {
        1.0
    } else {
        0.0
    };
    require(
        "grid.start",
        grid.start.is_finite() && grid.start >= lower,
        format!("{} must be finite and at least {lower}", grid.start),
    )?;
    if scenario != Scenario::SinglePoint {
        require(
            "grid.stop",
            grid.stop.is_finite() && grid.stop >= grid.start,
            format!("{} must be finite and not below grid.start", grid.stop),
        )?;
        require(
            "grid.steps",
            grid.steps >= 2,
            format!("{} must be at least 2", grid.steps),
        )?;
    }

    let loss = Loss {
        gamma_t: raw.f64("loss.gamma_t")?.unwrap_or(0.0),
    };
    require(
        "loss.gamma_t",
        loss.gamma_t.is_finite() && loss.gamma_t >= 0.0,
        format!("{} must be non-negative", loss.gamma_t),
    )?;

    let fd = FiberSettings::default();
    let fiber = FiberSettings {
        length_l: raw.f64("fiber.length_l")?.unwrap_or(fd.length_l),
        c: raw.f64("fiber.c")?.unwrap_or(fd.c),
        omega: raw.f64("fiber.omega")?.unwrap_or(fd.omega),
        gamma_a: raw.f64("fiber.gamma_a")?.unwrap_or(fd.gamma_a),
        gamma_b: raw.f64("fiber.gamma_b")?.unwrap_or(fd.gamma_b),
        gamma_t1: raw.f64("fiber.gamma_t1")?.unwrap_or(fd.gamma_t1),
        gamma_t2: raw.f64("fiber.gamma_t2")?.unwrap_or(fd.gamma_t2),
        engineered: raw.bool("fiber.engineered")?.unwrap_or(fd.engineered),
    };
    for (k, v) in [
        ("fiber.length_l", fiber.length_l),
        ("fiber.c", fiber.c),
        ("fiber.omega", fiber.omega),
        ("fiber.gamma_a", fiber.gamma_a),
        ("fiber.gamma_b", fiber.gamma_b),
        ("fiber.gamma_t1", fiber.gamma_t1),
        ("fiber.gamma_t2", fiber.gamma_t2),
    ] {
        positive(k, v)?;
    }

    let mode = match raw.str("execution.mode")? {
        None | Some("parallel") => ExecutionMode::Parallel,
        Some("sequential") => ExecutionMode::Sequential,
        Some(other) => {
            return Err(Error::config(
                "execution.mode",
                format!("unknown mode `{other}`"),
            ))
        }
    };
    let execution = Execution {
        mode,
        threads: raw.usize("execution.threads")?.unwrap_or(0),
    };

    let output_path = match raw.str("output_path")? {
        Some("") => return Err(Error::config("output_path", "must not be empty")),
        Some(s) => PathBuf::from(s),
        None => PathBuf::from(format!("{scenario}.csv")),
    };

    Ok(SweepConfig {
        scenario,
        output_path,
        physics,
        grid,
        loss,
        fiber,
        execution,
    })
}

/// Reads `path` when given, otherwise starts from the defaults.
pub fn load_config(path: Option<&Path>, overrides: &Overrides) -> Result<SweepConfig> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Error::config("--config", format!("cannot read {}: {e}", p.display())))?,
        None => String::new(),
    };
    parse_config(&text, overrides)
}

/// One CSV row; empty cells mark quantities a scenario does not produce.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub sweep_value: f64,
    pub p_prior: Option<f64>,
    pub p_bell: Option<f64>,
    pub e_min: Option<f64>,
    pub f_opt: Option<f64>,
    pub t1_rank: Option<usize>,
    pub lin_valid: Option<bool>,
    pub lin_p: Option<f64>,
    pub wall_ms: f64,
}

impl Row {
    fn from_povm(sweep_value: f64, r: &PovmResult) -> Self {
        Row {
            sweep_value,
            p_prior: Some(r.p_prior),
            p_bell: Some(r.p_bell),
            e_min: Some(r.e_min),
            f_opt: r.f_opt,
            t1_rank: Some(r.t1_rank),
            lin_valid: None,
            lin_p: None,
            wall_ms: 0.0,
        }
    }
}

fn tau_row(cfg: &SweepConfig, cycles: f64, gamma_t: f64) -> Result<Row> {
    let p = cfg.physics.params(cycles);
    let r = if gamma_t > 0.0 {
        lossy_scenario(&p, LossParams::new(gamma_t)?)?
    } else {
        povm(&joint_pure_state(&p)?)?
    };
    let mut row = Row::from_povm(cycles, &r);
    row.lin_valid = Some(linearization_valid(&p, DEFAULT_MARGIN).0);
    row.lin_p = Some(approx_prior(&p));
    Ok(row)
}

fn loss_row(cfg: &SweepConfig, gamma_t: f64) -> Result<Row> {
    let p = cfg.physics.params(cfg.physics.tau);
    let r = lossy_scenario(&p, LossParams::new(gamma_t)?)?;
    Ok(Row::from_povm(gamma_t, &r))
}

fn fiber_row(cfg: &SweepConfig, m: f64) -> Result<Row> {
    let (fc, modes) = cfg.fiber.config(m);
    let r = transfer_amplitude(&build_fiber(&fc)?, C64::new(1.0, 0.0))?;
    Ok(Row {
        sweep_value: modes as f64,
        p_prior: None,
        p_bell: None,
        e_min: None,
        f_opt: Some(r.fidelity),
        t1_rank: None,
        lin_valid: None,
        lin_p: None,
        wall_ms: 0.0,
    })
}

/// Evaluates one grid value of the configured scenario.
pub fn evaluate_point(cfg: &SweepConfig, value: f64) -> Result<Row> {
    let start = Instant::now();
    let mut row = match cfg.scenario {
        Scenario::SweepTau | Scenario::SweepTauWeak | Scenario::SinglePoint => {
            tau_row(cfg, value, cfg.loss.gamma_t)?
        }
        Scenario::SweepLoss => loss_row(cfg, value)?,
        Scenario::FiberTransfer => fiber_row(cfg, value)?,
    };
    row.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(row)
}

/// All rows of the configured sweep, sorted by `sweep_value`.
pub fn evaluate(cfg: &SweepConfig) -> Result<Vec<Row>> {
    let values = match cfg.scenario {
        Scenario::SinglePoint => vec![cfg.grid.start],
        _ => cfg.grid.values(),
    };
    let mut rows = cfg.execution.map(&values, |&v| evaluate_point(cfg, v))?;
    rows.sort_by(|a, b| a.sweep_value.total_cmp(&b.sweep_value));
    if cfg.scenario == Scenario::FiberTransfer {
        rows.dedup_by(|a, b| a.sweep_value == b.sweep_value);
    }
    Ok(rows)
}

/// Metadata header, column header and rows.
pub fn render_csv(cfg: &SweepConfig, rows: &[Row]) -> Result<String> {
    let mut out = String::new();
    out.push_str(&format!("# photon-bell {CODE_VERSION}\n"));
    out.push_str(&format!("# n_max = {}\n", cfg.physics.n_max));
    let resolved = toml::to_string(cfg).map_err(|e| Error::config("config", e.to_string()))?;
    for line in resolved.lines().filter(|l| !l.is_empty()) {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    if rows.is_empty() {
        w.write_record([
            "sweep_value",
            "p_prior",
            "p_bell",
            "e_min",
            "f_opt",
            "t1_rank",
            "lin_valid",
            "lin_p",
            "wall_ms",
        ])?;
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    out.push_str(&String::from_utf8(body).expect("csv output is UTF-8"));
    Ok(out)
}

/// Evaluates the sweep and writes the CSV to `output_path`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<Row>> {
    let rows = evaluate(cfg)?;
    std::fs::write(&cfg.output_path, render_csv(cfg, &rows)?)?;
    Ok(rows)
}
