use std::path::{Path, PathBuf};
use std::process::Command;

use hybrid_actuator::{Obstacle64, Point64, Preset};
use hybrid_actuator_harness::config::{parse_config, LockSelection, Ramp, RunConfig, Scenario};
use hybrid_actuator_harness::{run, SweepTable};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hactuate"))
}

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(format!("{name}.scenario"))
}

fn cfg(preset: Preset, dir: &Path) -> RunConfig {
    let mut c = RunConfig {
        lock: LockSelection::Preset(preset),
        ..RunConfig::default()
    };
    c.output.dir = dir.to_path_buf();
    c
}

#[test]
fn default_bend_sweep_has_thirteen_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = run::run_bend(&cfg(Preset::SixR, dir.path())).unwrap();
    assert_eq!(out.table.len(), 13);
    assert_eq!(out.table.last_value("tip_angle_deg"), Some(230.0));
    assert_eq!(out.files, vec![dir.path().join("bend_6R.csv")]);
    assert_eq!(
        out.table.columns(),
        ["pressure_kPa", "tip_angle_deg", "j1_deg", "j2_deg", "j3_deg", "j4_deg", "j5_deg", "j6_deg"]
    );
}

#[test]
fn zero_length_ramp_gives_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = cfg(Preset::TwoR, dir.path());
    c.ramp = Some(Ramp::new(50.0, 50.0, 10.0).unwrap());
    assert_eq!(run::bend_table(&c).unwrap().len(), 1);
}

#[test]
fn tip_angle_grows_with_dof() {
    let dir = tempfile::tempdir().unwrap();
    let angles: Vec<f64> = Preset::ALL
        .iter()
        .map(|&p| {
            let mut c = cfg(p, dir.path());
            c.ramp = Some(Ramp::new(0.0, 100.0, 10.0).unwrap());
            run::bend_table(&c).unwrap().last_value("tip_angle_deg").unwrap()
        })
        .collect();
    assert!(angles.windows(2).all(|w| w[0] < w[1]), "{angles:?}");
}

#[test]
fn force_sweep_examples() {
    let dir = tempfile::tempdir().unwrap();
    let c = cfg(Preset::SixR, dir.path());
    let t = run::run_force(&c).unwrap().table;
    assert_eq!(t.rows()[0], vec![0.0, 0.0]);
    assert_eq!(t.last_value("force_N"), Some(4.0));
    let mut half = c.clone();
    half.ramp = Some(Ramp::new(0.0, 82.5, 10.0).unwrap());
    assert_eq!(run::force_table(&half).unwrap().last_value("force_N"), Some(2.0));
}

#[test]
fn unreachable_obstacle_reproduces_bend_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = cfg(Preset::SixR, dir.path());
    c.scenario = Some(Scenario {
        name: "far".into(),
        obstacle: Obstacle64::circle(Point64::new(500.0, 0.0), 35.0),
        clearance: None,
        final_pressure: None,
    });
    c.ramp = Some(Ramp::new(0.0, 100.0, 5.0).unwrap());
    let (adapt, failure) = run::adapt_table(&c, 100.0).unwrap();
    assert!(failure.is_none());
    let bend = run::bend_table(&c).unwrap();
    assert_eq!(adapt.len(), bend.len());
    for (a, b) in adapt.rows().iter().zip(bend.rows()) {
        assert_eq!(a[0], b[0]);
        assert_eq!(a[5..], b[2..]);
        assert_eq!(a[3], 0.0);
    }
}

#[test]
fn can_contact_fraction_favours_six_r() {
    let dir = tempfile::tempdir().unwrap();
    let frac = |p| {
        let mut c = cfg(p, dir.path());
        c.scenario = Some(hybrid_actuator_harness::load_scenario(&scenario_path("can")).unwrap());
        run::run_adapt(&c, None).unwrap().table.last_value("contact_fraction").unwrap()
    };
    assert!(frac(Preset::SixR) > frac(Preset::TwoR));
}

#[test]
fn box_favours_two_r() {
    let dir = tempfile::tempdir().unwrap();
    let gap = |p| {
        let mut c = cfg(p, dir.path());
        c.scenario = Some(hybrid_actuator_harness::load_scenario(&scenario_path("box")).unwrap());
        run::run_adapt(&c, None).unwrap().table.last_value("mean_gap_mm").unwrap()
    };
    let two = gap(Preset::TwoR);
    assert!(two < gap(Preset::FourR) && two < gap(Preset::SixR));
}

#[test]
fn emitted_csv_parses_back_to_the_same_table() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = cfg(Preset::FourR, dir.path());
    c.scenario = Some(hybrid_actuator_harness::load_scenario(&scenario_path("can")).unwrap());
    for out in [run::run_bend(&c).unwrap(), run::run_force(&c).unwrap(), run::run_adapt(&c, None).unwrap()] {
        let parsed = SweepTable::read_csv(std::fs::File::open(&out.files[0]).unwrap()).unwrap();
        assert_eq!(parsed.columns(), out.table.columns());
        for (a, b) in parsed.rows().iter().zip(out.table.rows()) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn render_annotates_anchor_angle() {
    let dir = tempfile::tempdir().unwrap();
    let path = run::run_render(&cfg(Preset::SixR, dir.path()), 120.0).unwrap();
    let svg = std::fs::read_to_string(path).unwrap();
    assert!(svg.contains(">230.0°</text>"));
}

#[test]
fn solver_failure_keeps_diagnostics_row() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = cfg(Preset::SixR, dir.path());
    c.scenario = Some(hybrid_actuator_harness::load_scenario(&scenario_path("can")).unwrap());
    c.solver.max_iterations = 1;
    let err = run::run_adapt(&c, None).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    let t = SweepTable::read_csv(std::fs::File::open(dir.path().join("adapt_can_6R.csv")).unwrap()).unwrap();
    assert!(!t.is_empty());
}

#[test]
fn config_file_drives_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "lock = \"2R\"\nscenario = {:?}\n[ramp]\nstop_kpa = 60\nstep_kpa = 20\n[output]\ndir = {:?}\n",
        scenario_path("box"),
        dir.path()
    );
    let c = parse_config(&text).unwrap();
    assert_eq!(c.scenario.as_ref().unwrap().name, "box");
    assert_eq!(run::run_bend(&c).unwrap().table.len(), 4);
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();

    let ok = bin().args(["bend", "--out", out, "--lock", "4R"]).output().unwrap().status;
    assert_eq!(ok.code(), Some(0));
    assert!(dir.path().join("bend_4R.csv").exists());

    let bad_lock = bin().args(["bend", "--out", out, "--lock", "5R"]).output().unwrap().status;
    assert_eq!(bad_lock.code(), Some(2));

    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[ramp]\nstop_kpa = 10\nstep_kpa = 0\n").unwrap();
    let o = bin().args(["bend", "--config", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ramp.step_kpa"));

    let no_scenario = bin().args(["adapt", "--out", out]).output().unwrap().status;
    assert_eq!(no_scenario.code(), Some(2));

    let missing = bin().args(["adapt", "--scenario", "/nonexistent/x.scenario"]).output().unwrap().status;
    assert_eq!(missing.code(), Some(4));

    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let unwritable = bin().args(["force", "--out", blocker.join("sub").to_str().unwrap()]).output().unwrap().status;
    assert_eq!(unwritable.code(), Some(4));

    let budget = dir.path().join("budget.toml");
    std::fs::write(&budget, "[solver]\nmax_iterations = 1\n").unwrap();
    let fail = bin()
        .args(["adapt", "--config", budget.to_str().unwrap(), "--out", out])
        .arg("--scenario")
        .arg(scenario_path("can"))
        .output()
        .unwrap()
        .status;
    assert_eq!(fail.code(), Some(3));

    let presets = bin().arg("presets").output().unwrap();
    assert!(String::from_utf8_lossy(&presets.stdout).contains("1R  pins [(1,3) (4,4)] active {J3}"));
}
