//! One function per experiment. Each builds its table in memory, then
//! writes it (and optional SVG frames) into the configured output directory.

use std::path::{Path, PathBuf};

use hybrid_actuator::{
    bending_sweep, calibrate, conformity, force_sweep, free_equilibrium, ramp_outcome, resolve_mask,
    ActiveJointMask, ActuationModel64, ContactSolution64, Error, JointState64, Preset, Scene64,
};

use crate::config::{Ramp, RunConfig};
use crate::error::{HarnessError, Result};
use crate::svg::{render_scene, render_svg, save_svg};
use crate::table::SweepTable;

/// Final pressure of an adaptation run when neither the scenario nor the
/// command line sets one (kPa).
pub const DEFAULT_ADAPT_PRESSURE: f64 = 100.0;

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub table: SweepTable,
    pub files: Vec<PathBuf>,
}

pub fn model(cfg: &RunConfig) -> Result<ActuationModel64> {
    Ok(calibrate(&cfg.anchors, &cfg.spec, cfg.joint_limit)?)
}

pub fn mask(cfg: &RunConfig) -> Result<ActiveJointMask> {
    Ok(resolve_mask(&cfg.spec, &cfg.lock.lock_config())?)
}

fn bend_ramp(cfg: &RunConfig) -> Ramp {
    cfg.ramp.unwrap_or(Ramp {
        start: 0.0,
        stop: cfg.anchors.bend_pressure,
        step: 10.0,
    })
}

fn force_ramp(cfg: &RunConfig) -> Ramp {
    cfg.ramp.unwrap_or(Ramp {
        start: 0.0,
        stop: cfg.anchors.force_pressure,
        step: 10.0,
    })
}

fn joint_columns(n: usize) -> impl Iterator<Item = String> {
    (1..=n).map(|j| format!("j{j}_deg"))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))
}

fn frame_name(prefix: &str, index: usize) -> String {
    format!("{prefix}_frame{index:03}.svg")
}

pub fn bend_table(cfg: &RunConfig) -> Result<SweepTable> {
    let model = model(cfg)?;
    let mask = mask(cfg)?;
    let rows = bending_sweep(&model, &cfg.spec, &mask, &bend_ramp(cfg).pressures())?;
    let mut table = SweepTable::new(
        ["pressure_kPa".to_string(), "tip_angle_deg".to_string()]
            .into_iter()
            .chain(joint_columns(cfg.spec.joint_count())),
    );
    for r in rows {
        let mut row = vec![r.pressure, r.tip_angle_deg];
        row.extend(r.joint_angles_deg);
        table.push_row(row)?;
    }
    Ok(table)
}

/// Writes `bend_<lock>.csv`, plus one SVG frame per row when enabled.
pub fn run_bend(cfg: &RunConfig) -> Result<RunOutput> {
    let table = bend_table(cfg)?;
    let dir = &cfg.output.dir;
    ensure_dir(dir)?;
    let stem = format!("bend_{}", cfg.lock.label());
    let csv = dir.join(format!("{stem}.csv"));
    table.save(&csv)?;
    let mut files = vec![csv];
    if cfg.output.svg {
        let model = model(cfg)?;
        let mask = mask(cfg)?;
        for (i, p) in bend_ramp(cfg).pressures().into_iter().enumerate() {
            let state = free_equilibrium(&model, &mask, p)?;
            let path = dir.join(frame_name(&stem, i));
            save_svg(&path, &render_svg(&cfg.spec, &state, None)?)?;
            files.push(path);
        }
    }
    Ok(RunOutput { table, files })
}

pub fn force_table(cfg: &RunConfig) -> Result<SweepTable> {
    let model = model(cfg)?;
    let mask = mask(cfg)?;
    let rows = force_sweep(&model, &cfg.spec, &mask, &force_ramp(cfg).pressures())?;
    let mut table = SweepTable::new(["pressure_kPa", "force_N"]);
    for r in rows {
        table.push_row(vec![r.pressure, r.force])?;
    }
    Ok(table)
}

/// Writes `force_<lock>.csv`.
pub fn run_force(cfg: &RunConfig) -> Result<RunOutput> {
    let table = force_table(cfg)?;
    ensure_dir(&cfg.output.dir)?;
    let csv = cfg.output.dir.join(format!("force_{}.csv", cfg.lock.label()));
    table.save(&csv)?;
    Ok(RunOutput { table, files: vec![csv] })
}

pub fn scene(cfg: &RunConfig) -> Result<Scene64> {
    let scenario = cfg
        .scenario
        .as_ref()
        .ok_or_else(|| HarnessError::Config("this command needs a scenario".into()))?;
    let mut scene = Scene64::new(cfg.spec, model(cfg)?, mask(cfg)?, scenario.obstacle);
    if let Some(c) = scenario.clearance {
        scene = scene.with_clearance(c);
    }
    Ok(scene)
}

pub fn adapt_pressure(cfg: &RunConfig) -> f64 {
    cfg.scenario
        .as_ref()
        .and_then(|s| s.final_pressure)
        .unwrap_or(DEFAULT_ADAPT_PRESSURE)
}

fn adapt_row(scene: &Scene64, sol: &ContactSolution64, gap_threshold: f64) -> Vec<f64> {
    let c = conformity(sol, scene, gap_threshold);
    let mut row = vec![sol.pressure, c.mean_gap, c.max_gap, c.contact_fraction, sol.max_penetration];
    row.extend(sol.state.degrees());
    row
}

/// Table of the ramped contact solve, and the solver failure if the ramp
/// stopped early. The failing step's diagnostics form the last row.
pub fn adapt_table(cfg: &RunConfig, pressure: f64) -> Result<(SweepTable, Option<Error>)> {
    let scene = scene(cfg)?;
    let outcome = ramp_outcome(&scene, pressure, &cfg.solver)?;
    let mut table = SweepTable::new(
        [
            "pressure_kPa",
            "mean_gap_mm",
            "max_gap_mm",
            "contact_fraction",
            "max_penetration_mm",
        ]
        .into_iter()
        .map(String::from)
        .chain(joint_columns(cfg.spec.joint_count())),
    );
    for sol in &outcome.steps {
        table.push_row(adapt_row(&scene, sol, cfg.gap_threshold))?;
    }
    if let Some(Error::SolverFailure(d)) = &outcome.failure {
        let failed = ContactSolution64 {
            pressure: d.pressure_kpa,
            state: JointState64::new(d.angles_rad.clone())?,
            max_penetration: d.max_penetration_mm,
            stationarity_residual: d.stationarity_residual,
            iterations: d.iterations,
            energy: f64::NAN,
            penalty: d.penalty,
            samples_per_link: cfg.solver.samples_per_link,
        };
        table.push_row(adapt_row(&scene, &failed, cfg.gap_threshold))?;
    }
    Ok((table, outcome.failure))
}

/// Writes `adapt_<scenario>_<lock>.csv`, plus one SVG frame per ramp step
/// when enabled. On solver failure the file is still written before the
/// error is returned.
pub fn run_adapt(cfg: &RunConfig, pressure: Option<f64>) -> Result<RunOutput> {
    let pressure = pressure.unwrap_or_else(|| adapt_pressure(cfg));
    let (table, failure) = adapt_table(cfg, pressure)?;
    let name = &cfg.scenario.as_ref().expect("checked by adapt_table").name;
    let dir = &cfg.output.dir;
    ensure_dir(dir)?;
    let stem = format!("adapt_{name}_{}", cfg.lock.label());
    let csv = dir.join(format!("{stem}.csv"));
    table.save(&csv)?;
    let mut files = vec![csv];
    if cfg.output.svg {
        let scene = scene(cfg)?;
        let n = cfg.spec.joint_count();
        for (i, row) in table.rows().iter().enumerate() {
            let state = JointState64::from_degrees(&row[row.len() - n..])?;
            let path = dir.join(frame_name(&stem, i));
            save_svg(&path, &render_scene(&scene, &state)?)?;
            files.push(path);
        }
    }
    match failure {
        Some(err) => Err(err.into()),
        None => Ok(RunOutput { table, files }),
    }
}

/// Renders the equilibrium at `pressure`: in contact when a scenario is
/// configured, free otherwise. Writes `render_<lock>.svg` or
/// `render_<scenario>_<lock>.svg`.
pub fn run_render(cfg: &RunConfig, pressure: f64) -> Result<PathBuf> {
    let (stem, document) = match &cfg.scenario {
        Some(s) => {
            let scene = scene(cfg)?;
            let sol = hybrid_actuator::solve_equilibrium_with_contact(&scene, pressure, &cfg.solver)?;
            (format!("render_{}_{}", s.name, cfg.lock.label()), render_scene(&scene, &sol.state)?)
        }
        None => {
            let state = free_equilibrium(&model(cfg)?, &mask(cfg)?, pressure)?;
            (format!("render_{}", cfg.lock.label()), render_svg(&cfg.spec, &state, None)?)
        }
    };
    ensure_dir(&cfg.output.dir)?;
    let path = cfg.output.dir.join(format!("{stem}.svg"));
    save_svg(&path, &document)?;
    Ok(path)
}

/// Fitted coefficients as `key = value` lines.
pub fn calibration_report(cfg: &RunConfig) -> Result<String> {
    let m = model(cfg)?;
    Ok(format!(
        "torque_coeff_Nmm_per_kPa = {}\nspring_coeff_Nmm_per_rad = {}\njoint_limit_deg = {}\nsaturation_pressure_kPa = {}\n",
        m.torque_coeff,
        m.spring_coeff,
        m.joint_limit.to_degrees(),
        m.saturation_pressure()
    ))
}

/// One line per preset: name, pins and active joints.
pub fn presets_report(cfg: &RunConfig) -> Result<String> {
    let mut out = String::new();
    for p in Preset::ALL {
        let lock = p.lock_config();
        let mask = resolve_mask(&cfg.spec, &lock)?;
        let pins: Vec<String> = lock.pins.iter().map(|pin| format!("({},{})", pin.start_module, pin.span)).collect();
        let active: Vec<String> = mask.active_joints().iter().map(|j| format!("J{j}")).collect();
        out.push_str(&format!(
            "{:<3} pins [{}] active {{{}}} dof {}\n",
            p.name(),
            pins.join(" "),
            active.join(","),
            mask.dof()
        ));
    }
    Ok(out)
}
