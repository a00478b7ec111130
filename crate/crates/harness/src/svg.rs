//! SVG 1.1 snapshots of a chain state over a 10 mm reference grid.

use std::fmt::Write as _;
use std::path::Path;

use hybrid_actuator::{ActuatorSpec64, JointState64, Obstacle64, PlanarPose64, Point64, Scene64};

use crate::error::{HarnessError, Result};

const GRID: f64 = 10.0;
/// Pixels per millimetre in the declared width/height.
const SCALE: f64 = 4.0;

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

/// World (y up) to document (y down) mapping for a snapped bounding box.
struct Frame {
    min_x: f64,
    max_x: f64,
    min_y: f64,
    max_y: f64,
}

impl Frame {
    fn around(points: &[Point64], pad: f64) -> Self {
        let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for p in points {
            lo_x = lo_x.min(p.x);
            hi_x = hi_x.max(p.x);
            lo_y = lo_y.min(p.y);
            hi_y = hi_y.max(p.y);
        }
        let snap_lo = |v: f64| ((v - pad) / GRID).floor() * GRID;
        let snap_hi = |v: f64| ((v + pad) / GRID).ceil() * GRID;
        Self {
            min_x: snap_lo(lo_x),
            max_x: snap_hi(hi_x),
            min_y: snap_lo(lo_y),
            max_y: snap_hi(hi_y),
        }
    }

    fn x(&self, x: f64) -> f64 {
        x - self.min_x
    }

    fn y(&self, y: f64) -> f64 {
        self.max_y - y
    }

    fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    fn height(&self) -> f64 {
        self.max_y - self.min_y
    }
}

fn obstacle_outline(obstacle: &Obstacle64) -> Vec<Point64> {
    match *obstacle {
        Obstacle64::Circle { center, radius } => {
            vec![
                center + Point64::new(radius, radius),
                center - Point64::new(radius, radius),
            ]
        }
        Obstacle64::Rectangle {
            center,
            width,
            height,
            rotation,
        } => [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]
            .iter()
            .map(|&(a, b)| center + Point64::new(a * width / 2.0, b * height / 2.0).rotated(rotation))
            .collect(),
    }
}

/// Renders the chain in `state`, optionally next to `obstacle`.
pub fn render_svg(spec: &ActuatorSpec64, state: &JointState64, obstacle: Option<&Obstacle64>) -> Result<String> {
    let poses = hybrid_actuator::forward_kinematics(spec, state)?;
    Ok(draw(spec, &poses, obstacle, hybrid_actuator::tip_deflection_angle(state)))
}

/// Renders a contact scene, honouring its curl direction.
pub fn render_scene(scene: &Scene64, state: &JointState64) -> Result<String> {
    scene.validate()?;
    if state.len() != scene.spec.joint_count() {
        return Err(hybrid_actuator::Error::DimensionMismatch {
            expected: scene.spec.joint_count(),
            found: state.len(),
        }
        .into());
    }
    let poses = scene.poses(state);
    Ok(draw(&scene.spec, &poses, Some(&scene.obstacle), hybrid_actuator::tip_deflection_angle(state)))
}

fn draw(spec: &ActuatorSpec64, poses: &[PlanarPose64], obstacle: Option<&Obstacle64>, tip_deg: f64) -> String {
    let r_shell = spec.shell.shell_radius;
    let r_joint = spec.shell.joint_radius;

    // Link k runs from pose k to pose k+1 along the heading of pose k.
    let mut extent: Vec<Point64> = poses.iter().map(|p| p.position()).collect();
    if let Some(o) = obstacle {
        extent.extend(obstacle_outline(o));
    }
    let frame = Frame::around(&extent, r_shell + GRID);

    let mut out = String::new();
    let (w, h) = (frame.width(), frame.height());
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        num(w * SCALE),
        num(h * SCALE),
        num(w),
        num(h)
    )
    .unwrap();
    writeln!(out, r##"<rect x="0" y="0" width="{}" height="{}" fill="#ffffff"/>"##, num(w), num(h)).unwrap();

    writeln!(out, r##"<g class="grid" stroke="#d0d0d0" stroke-width="0.2">"##).unwrap();
    let nx = (w / GRID).round() as i64;
    let ny = (h / GRID).round() as i64;
    for i in 0..=nx {
        let x = i as f64 * GRID;
        writeln!(out, r#"<line x1="{0}" y1="0.000" x2="{0}" y2="{1}"/>"#, num(x), num(h)).unwrap();
    }
    for j in 0..=ny {
        let y = j as f64 * GRID;
        writeln!(out, r#"<line x1="0.000" y1="{0}" x2="{1}" y2="{0}"/>"#, num(y), num(w)).unwrap();
    }
    writeln!(out, "</g>").unwrap();

    if let Some(o) = obstacle {
        match *o {
            Obstacle64::Circle { center, radius } => writeln!(
                out,
                r##"<circle class="obstacle" cx="{}" cy="{}" r="{}" fill="none" stroke="#c03030" stroke-width="0.6"/>"##,
                num(frame.x(center.x)),
                num(frame.y(center.y)),
                num(radius)
            )
            .unwrap(),
            Obstacle64::Rectangle { .. } => {
                let pts: Vec<String> = obstacle_outline(o)
                    .iter()
                    .map(|p| format!("{},{}", num(frame.x(p.x)), num(frame.y(p.y))))
                    .collect();
                writeln!(
                    out,
                    r##"<polygon class="obstacle" points="{}" fill="none" stroke="#c03030" stroke-width="0.6"/>"##,
                    pts.join(" ")
                )
                .unwrap()
            }
        }
    }

    let pitch = spec.module_pitch;
    for pose in poses.iter().take(poses.len() - 1) {
        let p = pose.position();
        // Document y points down, so world headings turn the other way.
        let deg = -pose.heading.to_degrees();
        writeln!(
            out,
            r##"<rect class="link" x="0.000" y="{}" width="{}" height="{}" rx="{}" transform="translate({} {}) rotate({})" fill="#8fb3d9" fill-opacity="0.6" stroke="#24507a" stroke-width="0.4"/>"##,
            num(-r_shell),
            num(pitch),
            num(2.0 * r_shell),
            num(r_shell.min(pitch / 2.0)),
            num(frame.x(p.x)),
            num(frame.y(p.y)),
            num(deg)
        )
        .unwrap();
    }
    for pose in &poses[1..poses.len() - 1] {
        let p = pose.position();
        writeln!(
            out,
            r##"<circle class="joint" cx="{}" cy="{}" r="{}" fill="none" stroke="#24507a" stroke-width="0.4"/>"##,
            num(frame.x(p.x)),
            num(frame.y(p.y)),
            num(r_joint)
        )
        .unwrap();
    }

    let tip = poses.last().unwrap().position();
    writeln!(
        out,
        r#"<text class="tip-angle" x="{}" y="{}" font-family="sans-serif" font-size="5">{:.1}°</text>"#,
        num(frame.x(tip.x) + 2.0),
        num(frame.y(tip.y) - 2.0),
        tip_deg
    )
    .unwrap();
    writeln!(out, "</svg>").unwrap();
    out
}

pub fn save_svg(path: &Path, document: &str) -> Result<()> {
    std::fs::write(path, document).map_err(|e| HarnessError::io(path, e))
}
