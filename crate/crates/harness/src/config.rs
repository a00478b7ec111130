//! TOML run configuration and scenario files.
//!
//! Everything is optional; an empty document yields the seven-module
//! actuator calibrated to the default anchors. Units in the files are the
//! bench units (mm, deg, kPa, N); conversion to radians happens here.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use hybrid_actuator::{
    ActuatorSpec64, CalibrationAnchors64, ChamberParams, LockConfig, Obstacle64, PinLock, Point2,
    Preset, ShellParams, SolverOptions64,
};
use serde::Deserialize;

use crate::error::{HarnessError, Result};

/// Pressure sweep `start, start + step, …, stop` (kPa); `stop` is always included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ramp {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Ramp {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(field_error("ramp.step_kpa", format!("must be > 0, got {step}")));
        }
        if !(start.is_finite() && start >= 0.0) {
            return Err(field_error("ramp.start_kpa", format!("must be >= 0, got {start}")));
        }
        if !(stop.is_finite() && stop >= start) {
            return Err(field_error(
                "ramp.stop_kpa",
                format!("must be >= start_kpa ({start}), got {stop}"),
            ));
        }
        Ok(Self { start, stop, step })
    }

    pub fn pressures(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = 0usize;
        loop {
            let p = self.start + self.step * k as f64;
            if p >= self.stop - self.step * 1e-9 {
                break;
            }
            out.push(p);
            k += 1;
        }
        out.push(self.stop);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LockSelection {
    Preset(Preset),
    Pins(LockConfig),
}

impl LockSelection {
    pub fn lock_config(&self) -> LockConfig {
        match self {
            LockSelection::Preset(p) => p.lock_config(),
            LockSelection::Pins(cfg) => cfg.clone(),
        }
    }

    /// Used in output file names.
    pub fn label(&self) -> String {
        match self {
            LockSelection::Preset(p) => p.name().to_string(),
            LockSelection::Pins(_) => "custom".to_string(),
        }
    }
}

impl Default for LockSelection {
    fn default() -> Self {
        LockSelection::Preset(Preset::SixR)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub obstacle: Obstacle64,
    /// Defaults to the shell radius when absent.
    pub clearance: Option<f64>,
    pub final_pressure: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputOptions {
    pub dir: PathBuf,
    pub svg: bool,
}

impl Default for OutputOptions {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            svg: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub spec: ActuatorSpec64,
    pub anchors: CalibrationAnchors64,
    /// rad
    pub joint_limit: f64,
    pub lock: LockSelection,
    pub ramp: Option<Ramp>,
    pub scenario: Option<Scenario>,
    pub solver: SolverOptions64,
    /// mm
    pub gap_threshold: f64,
    pub output: OutputOptions,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            spec: ActuatorSpec64::default(),
            anchors: CalibrationAnchors64::default(),
            joint_limit: hybrid_actuator::default_joint_limit(),
            lock: LockSelection::default(),
            ramp: None,
            scenario: None,
            solver: SolverOptions64::default(),
            gap_threshold: hybrid_actuator::contact::DEFAULT_GAP_THRESHOLD,
            output: OutputOptions::default(),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
struct RawConfig {
    actuator: Option<RawActuator>,
    model: Option<RawModel>,
    anchors: Option<RawAnchors>,
    lock: Option<RawLock>,
    ramp: Option<RawRamp>,
    scenario: Option<RawScenarioRef>,
    solver: Option<RawSolver>,
    output: Option<RawOutput>,
}

#[derive(Debug, Default, Deserialize)]
struct RawActuator {
    module_count: Option<usize>,
    module_pitch_mm: Option<f64>,
    shell: Option<RawShell>,
    chamber: Option<RawChamber>,
}

#[derive(Debug, Default, Deserialize)]
struct RawShell {
    effective_length_mm: Option<f64>,
    opening_angle_deg: Option<f64>,
    joint_radius_mm: Option<f64>,
    shell_radius_mm: Option<f64>,
    wall_thickness_mm: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
struct RawChamber {
    sphere_radius_mm: Option<f64>,
    chamber_thickness_mm: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
struct RawModel {
    joint_limit_deg: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
struct RawAnchors {
    bend_pressure_kpa: Option<f64>,
    bend_tip_angle_deg: Option<f64>,
    bend_config: Option<String>,
    force_pressure_kpa: Option<f64>,
    force_value_n: Option<f64>,
    force_config: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawLock {
    Name(String),
    Pins { pins: Vec<[usize; 2]> },
}

#[derive(Debug, Default, Deserialize)]
struct RawRamp {
    start_kpa: Option<f64>,
    stop_kpa: Option<f64>,
    step_kpa: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawScenarioRef {
    Path(PathBuf),
    Inline(RawScenario),
}

#[derive(Debug, Deserialize)]
struct RawScenario {
    name: Option<String>,
    #[allow(dead_code)]
    description: Option<String>,
    clearance_mm: Option<f64>,
    final_pressure_kpa: Option<f64>,
    obstacle: RawObstacle,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
enum RawObstacle {
    Circle {
        center_mm: [f64; 2],
        radius_mm: f64,
    },
    Rectangle {
        center_mm: [f64; 2],
        width_mm: f64,
        height_mm: f64,
        #[serde(default)]
        rotation_deg: f64,
    },
}

#[derive(Debug, Default, Deserialize)]
struct RawSolver {
    ramp_step_kpa: Option<f64>,
    samples_per_link: Option<usize>,
    max_iterations: Option<usize>,
    penetration_tol_mm: Option<f64>,
    stationarity_tol: Option<f64>,
    gap_threshold_mm: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
struct RawOutput {
    dir: Option<PathBuf>,
    svg: Option<bool>,
}

fn field_error(field: &str, reason: impl std::fmt::Display) -> HarnessError {
    HarnessError::Config(format!("`{field}` {reason}"))
}

/// Deserialises `text`, reporting every key the schema does not know.
fn parse_strict<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    let de = toml::Deserializer::new(text);
    let mut unknown = BTreeSet::new();
    let value: T = serde_ignored::deserialize(de, |path| {
        // Option layers show up as `?` segments.
        let key: Vec<String> = path.to_string().split('.').filter(|s| *s != "?").map(String::from).collect();
        unknown.insert(key.join("."));
    })
    .map_err(|e| HarnessError::Config(format!("{what}: {}", e.message().trim())))?;
    if !unknown.is_empty() {
        let keys: Vec<String> = unknown.into_iter().collect();
        return Err(HarnessError::Config(format!("{what}: unknown keys: {}", keys.join(", "))));
    }
    Ok(value)
}

/// Parses and validates a run configuration. Relative scenario paths are
/// resolved against `base_dir`.
pub fn parse_config_in(text: &str, base_dir: &Path) -> Result<RunConfig> {
    let raw: RawConfig = parse_strict(text, "config")?;
    let mut cfg = RunConfig::default();

    if let Some(a) = raw.actuator {
        let d = ActuatorSpec64::default();
        let shell = a.shell.unwrap_or_default();
        let chamber = a.chamber.unwrap_or_default();
        cfg.spec = ActuatorSpec64 {
            module_count: a.module_count.unwrap_or(d.module_count),
            module_pitch: a.module_pitch_mm.unwrap_or(d.module_pitch),
            shell: ShellParams {
                effective_length: shell.effective_length_mm.unwrap_or(d.shell.effective_length),
                opening_angle: shell
                    .opening_angle_deg
                    .map(f64::to_radians)
                    .unwrap_or(d.shell.opening_angle),
                joint_radius: shell.joint_radius_mm.unwrap_or(d.shell.joint_radius),
                shell_radius: shell.shell_radius_mm.unwrap_or(d.shell.shell_radius),
                wall_thickness: shell.wall_thickness_mm.unwrap_or(d.shell.wall_thickness),
            },
            chamber: ChamberParams {
                sphere_radius: chamber.sphere_radius_mm.unwrap_or(d.chamber.sphere_radius),
                chamber_thickness: chamber.chamber_thickness_mm.unwrap_or(d.chamber.chamber_thickness),
            },
        };
    }
    cfg.spec.validate()?;

    if let Some(m) = raw.model {
        if let Some(limit) = m.joint_limit_deg {
            cfg.joint_limit = limit.to_radians();
        }
    }
    hybrid_actuator::mechanics::validate_joint_limit(cfg.joint_limit)
        .map_err(|_| field_error("model.joint_limit_deg", "must lie in (0, 90]"))?;

    if let Some(a) = raw.anchors {
        let d = CalibrationAnchors64::default();
        cfg.anchors = CalibrationAnchors64 {
            bend_pressure: a.bend_pressure_kpa.unwrap_or(d.bend_pressure),
            bend_tip_angle: a.bend_tip_angle_deg.map(f64::to_radians).unwrap_or(d.bend_tip_angle),
            bend_config: a.bend_config.as_deref().map(parse_preset).transpose()?.unwrap_or(d.bend_config),
            force_pressure: a.force_pressure_kpa.unwrap_or(d.force_pressure),
            force_value: a.force_value_n.unwrap_or(d.force_value),
            force_config: a.force_config.as_deref().map(parse_preset).transpose()?.unwrap_or(d.force_config),
        };
    }
    cfg.anchors.validate()?;

    if let Some(lock) = raw.lock {
        cfg.lock = match lock {
            RawLock::Name(name) => LockSelection::Preset(parse_preset(&name)?),
            RawLock::Pins { pins } => LockSelection::Pins(LockConfig::new(
                pins.into_iter().map(|[s, k]| PinLock::new(s, k)).collect(),
            )),
        };
    }
    hybrid_actuator::resolve_mask(&cfg.spec, &cfg.lock.lock_config())?;

    if let Some(r) = raw.ramp {
        let start = r.start_kpa.unwrap_or(0.0);
        let stop = r.stop_kpa.ok_or_else(|| field_error("ramp.stop_kpa", "is required in a [ramp] table"))?;
        let step = r.step_kpa.unwrap_or(10.0);
        cfg.ramp = Some(Ramp::new(start, stop, step)?);
    }

    if let Some(s) = raw.scenario {
        cfg.scenario = Some(match s {
            RawScenarioRef::Path(p) => load_scenario(&base_dir.join(p))?,
            RawScenarioRef::Inline(raw) => scenario_from_raw(raw, "inline")?,
        });
    }

    if let Some(s) = raw.solver {
        let o = &mut cfg.solver;
        if let Some(v) = s.ramp_step_kpa {
            if !(v.is_finite() && v > 0.0) {
                return Err(field_error("solver.ramp_step_kpa", "must be > 0"));
            }
            o.ramp_step = v;
        }
        if let Some(v) = s.samples_per_link {
            if v < 8 {
                return Err(field_error("solver.samples_per_link", "must be >= 8"));
            }
            o.samples_per_link = v;
        }
        if let Some(v) = s.max_iterations {
            if v == 0 {
                return Err(field_error("solver.max_iterations", "must be > 0"));
            }
            o.max_iterations = v;
        }
        if let Some(v) = s.penetration_tol_mm {
            if !(v.is_finite() && v > 0.0) {
                return Err(field_error("solver.penetration_tol_mm", "must be > 0"));
            }
            o.penetration_tol = v;
        }
        if let Some(v) = s.stationarity_tol {
            if !(v.is_finite() && v > 0.0) {
                return Err(field_error("solver.stationarity_tol", "must be > 0"));
            }
            o.stationarity_tol = v;
        }
        if let Some(v) = s.gap_threshold_mm {
            if !(v.is_finite() && v >= 0.0) {
                return Err(field_error("solver.gap_threshold_mm", "must be >= 0"));
            }
            cfg.gap_threshold = v;
        }
    }

    if let Some(o) = raw.output {
        if let Some(dir) = o.dir {
            cfg.output.dir = dir;
        }
        if let Some(svg) = o.svg {
            cfg.output.svg = svg;
        }
    }
    Ok(cfg)
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_in(text, Path::new("."))
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_config_in(&text, path.parent().unwrap_or(Path::new(".")))
}

fn parse_preset(name: &str) -> Result<Preset> {
    Ok(name.parse::<Preset>()?)
}

pub fn parse_scenario(text: &str, fallback_name: &str) -> Result<Scenario> {
    let raw: RawScenario = parse_strict(text, "scenario")?;
    scenario_from_raw(raw, fallback_name)
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
    parse_scenario(&text, stem)
}

fn scenario_from_raw(raw: RawScenario, fallback_name: &str) -> Result<Scenario> {
    let obstacle = match raw.obstacle {
        RawObstacle::Circle { center_mm, radius_mm } => {
            Obstacle64::circle(Point2::new(center_mm[0], center_mm[1]), radius_mm)
        }
        RawObstacle::Rectangle {
            center_mm,
            width_mm,
            height_mm,
            rotation_deg,
        } => Obstacle64::rectangle(
            Point2::new(center_mm[0], center_mm[1]),
            width_mm,
            height_mm,
            rotation_deg.to_radians(),
        ),
    };
    obstacle.validate()?;
    if let Some(c) = raw.clearance_mm {
        if !(c.is_finite() && c >= 0.0) {
            return Err(field_error("scenario.clearance_mm", "must be >= 0"));
        }
    }
    if let Some(p) = raw.final_pressure_kpa {
        if !(p.is_finite() && p >= 0.0) {
            return Err(field_error("scenario.final_pressure_kpa", "must be >= 0"));
        }
    }
    let name = raw.name.unwrap_or_else(|| fallback_name.to_string());
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        return Err(field_error("scenario.name", "must be a non-empty [A-Za-z0-9_-] identifier"));
    }
    Ok(Scenario {
        name,
        obstacle,
        clearance: raw.clearance_mm,
        final_pressure: raw.final_pressure_kpa,
    })
}
