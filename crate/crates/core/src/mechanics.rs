//! Pressure-driven joint actuation, its two-anchor calibration, and the
//! closed-form free-bending and blocked-force predictions.
//!
//! Every active joint sees the same pressure moment `torque_coeff * p`
//! (one continuous chamber) and resists with a linear rotational spring
//! `spring_coeff * angle`, clipped by a hard stop at `joint_limit`.

use crate::error::{Error, Result};
use crate::geometry::{invalid, ActuatorSpec, JointState};
use crate::locking::{resolve_mask, ActiveJointMask, Preset};
use crate::scalar::Scalar;

/// Calibrated joint actuation. Units: N·mm/kPa, N·mm/rad, rad.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActuationModel<T> {
    pub torque_coeff: T,
    pub spring_coeff: T,
    pub joint_limit: T,
}

impl<T: Scalar> ActuationModel<T> {
    pub fn new(torque_coeff: T, spring_coeff: T, joint_limit: T) -> Result<Self> {
        let model = Self {
            torque_coeff,
            spring_coeff,
            joint_limit,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.torque_coeff.is_finite() && self.torque_coeff > T::zero()) {
            return Err(invalid("torque_coeff", "must be finite and > 0"));
        }
        if !(self.spring_coeff.is_finite() && self.spring_coeff > T::zero()) {
            return Err(invalid("spring_coeff", "must be finite and > 0"));
        }
        validate_joint_limit(self.joint_limit)
    }

    /// Pressure at which an unobstructed joint reaches its travel stop.
    pub fn saturation_pressure(&self) -> T {
        self.spring_coeff * self.joint_limit / self.torque_coeff
    }

    /// Unconstrained per-joint equilibrium angle, clipped to the travel stop.
    pub fn free_joint_angle(&self, pressure: T) -> T {
        (self.torque_coeff * pressure / self.spring_coeff).min(self.joint_limit)
    }

    /// Elastic energy minus pressure work, summed over active joints (N·mm).
    pub fn energy(&self, mask: &ActiveJointMask, pressure: T, state: &JointState<T>) -> T {
        let drive = self.torque_coeff * pressure;
        mask.active_indices()
            .into_iter()
            .map(|i| {
                let a = state.angles()[i];
                T::half() * self.spring_coeff * a * a - drive * a
            })
            .fold(T::zero(), |acc, e| acc + e)
    }
}

/// The two measured operating points the model is fitted through.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationAnchors<T> {
    /// kPa
    pub bend_pressure: T,
    /// rad
    pub bend_tip_angle: T,
    pub bend_config: Preset,
    /// kPa
    pub force_pressure: T,
    /// N
    pub force_value: T,
    pub force_config: Preset,
}

impl<T: Scalar> Default for CalibrationAnchors<T> {
    fn default() -> Self {
        Self {
            bend_pressure: T::of(120.0),
            bend_tip_angle: T::of(230.0).to_radians(),
            bend_config: Preset::SixR,
            force_pressure: T::of(165.0),
            force_value: T::of(4.0),
            force_config: Preset::SixR,
        }
    }
}

impl<T: Scalar> CalibrationAnchors<T> {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("anchors.bend_pressure", self.bend_pressure),
            ("anchors.bend_tip_angle", self.bend_tip_angle),
            ("anchors.force_pressure", self.force_pressure),
            ("anchors.force_value", self.force_value),
        ];
        for (field, v) in checks {
            if !(v.is_finite() && v > T::zero()) {
                return Err(invalid(field, format!("must be finite and > 0, got {v}")));
            }
        }
        Ok(())
    }
}

pub fn default_joint_limit<T: Scalar>() -> T {
    T::of(45.0).to_radians()
}

pub fn validate_joint_limit<T: Scalar>(joint_limit: T) -> Result<()> {
    if joint_limit.is_finite() && joint_limit > T::zero() && joint_limit <= T::FRAC_PI_2() {
        Ok(())
    } else {
        Err(invalid("joint_limit", "must lie in (0, 90] deg"))
    }
}

/// Distance from the most distal active joint to the tip (mm).
pub fn tip_lever<T: Scalar>(spec: &ActuatorSpec<T>, mask: &ActiveJointMask) -> Result<T> {
    let joint = mask.distal_active_joint().ok_or_else(|| {
        Error::DegenerateConfiguration("no active joints".into())
    })?;
    let lever = spec.total_length() - spec.joint_position(joint);
    if lever <= T::zero() {
        return Err(Error::DegenerateSpec(format!(
            "distal active joint J{joint} sits at the tip"
        )));
    }
    Ok(lever)
}

pub fn calibrate<T: Scalar>(
    anchors: &CalibrationAnchors<T>,
    spec: &ActuatorSpec<T>,
    joint_limit: T,
) -> Result<ActuationModel<T>> {
    spec.validate()?;
    anchors.validate()?;
    validate_joint_limit(joint_limit)?;

    let bend_mask = resolve_mask(spec, &anchors.bend_config.lock_config())?;
    let bend_dof = bend_mask.dof();
    if bend_dof == 0 {
        return Err(Error::DegenerateConfiguration(format!(
            "bend anchor configuration {} has no active joints",
            anchors.bend_config
        )));
    }
    let per_joint = anchors.bend_tip_angle / T::from_usize(bend_dof).unwrap();
    if per_joint > joint_limit {
        return Err(Error::InfeasibleCalibration {
            per_joint_deg: per_joint.to_degrees().as_f64(),
            limit_deg: joint_limit.to_degrees().as_f64(),
        });
    }

    let force_mask = resolve_mask(spec, &anchors.force_config.lock_config())?;
    let lever = tip_lever(spec, &force_mask)?;
    let torque_coeff = anchors.force_value * lever / anchors.force_pressure;
    let spring_coeff = torque_coeff * anchors.bend_pressure / per_joint;
    ActuationModel::new(torque_coeff, spring_coeff, joint_limit)
}

fn check_pressure<T: Scalar>(pressure: T) -> Result<()> {
    if pressure.is_finite() && pressure >= T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidPressure(pressure.as_f64()))
    }
}

/// Closed-form unobstructed equilibrium. Locked joints stay at zero.
pub fn free_equilibrium<T: Scalar>(
    model: &ActuationModel<T>,
    mask: &ActiveJointMask,
    pressure: T,
) -> Result<JointState<T>> {
    check_pressure(pressure)?;
    let angle = model.free_joint_angle(pressure);
    let angles = mask
        .as_slice()
        .iter()
        .map(|&a| if a { angle } else { T::zero() })
        .collect();
    JointState::new(angles)
}

/// Tip force against a post while a platform holds the chain straight (N).
///
/// The platform reacts every joint proximal to the distal active joint, so
/// the sensor balances only that joint's moment over the rigid tip lever.
pub fn blocked_tip_force<T: Scalar>(
    model: &ActuationModel<T>,
    spec: &ActuatorSpec<T>,
    mask: &ActiveJointMask,
    pressure: T,
) -> Result<T> {
    check_pressure(pressure)?;
    let lever = tip_lever(spec, mask)?;
    Ok(model.torque_coeff * pressure / lever)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BendRow<T> {
    pub pressure: T,
    pub tip_angle_deg: T,
    pub joint_angles_deg: Vec<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceRow<T> {
    pub pressure: T,
    pub force: T,
}

fn check_ascending<T: Scalar>(pressures: &[T]) -> Result<()> {
    for &p in pressures {
        check_pressure(p)?;
    }
    if pressures.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("pressures", "must be ascending"));
    }
    Ok(())
}

pub fn bending_sweep<T: Scalar>(
    model: &ActuationModel<T>,
    spec: &ActuatorSpec<T>,
    mask: &ActiveJointMask,
    pressures: &[T],
) -> Result<Vec<BendRow<T>>> {
    check_ascending(pressures)?;
    if mask.len() != spec.joint_count() {
        return Err(Error::DimensionMismatch {
            expected: spec.joint_count(),
            found: mask.len(),
        });
    }
    pressures
        .iter()
        .map(|&p| {
            let state = free_equilibrium(model, mask, p)?;
            Ok(BendRow {
                pressure: p,
                tip_angle_deg: crate::geometry::tip_deflection_angle(&state),
                joint_angles_deg: state.degrees(),
            })
        })
        .collect()
}

pub fn force_sweep<T: Scalar>(
    model: &ActuationModel<T>,
    spec: &ActuatorSpec<T>,
    mask: &ActiveJointMask,
    pressures: &[T],
) -> Result<Vec<ForceRow<T>>> {
    check_ascending(pressures)?;
    pressures
        .iter()
        .map(|&p| {
            Ok(ForceRow {
                pressure: p,
                force: blocked_tip_force(model, spec, mask, p)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::tip_deflection_angle;
    use crate::locking::PinLock;
    use crate::locking::LockConfig;

    fn setup() -> (ActuatorSpec<f64>, ActuationModel<f64>) {
        let spec = ActuatorSpec::default();
        let model = calibrate(&CalibrationAnchors::default(), &spec, default_joint_limit()).unwrap();
        (spec, model)
    }

    fn mask(spec: &ActuatorSpec<f64>, p: Preset) -> ActiveJointMask {
        resolve_mask(spec, &p.lock_config()).unwrap()
    }

    #[test]
    fn calibration_coefficients() {
        let (_, model) = setup();
        // 4 N * 15 mm / 165 kPa
        assert!((model.torque_coeff - 0.363_636_363_6).abs() < 1e-9);
        // per-joint 230/6 deg = 0.66904 rad
        let per_joint = (230.0f64 / 6.0).to_radians();
        assert!((per_joint - 0.669_042_6).abs() < 1e-6);
        assert!((model.spring_coeff - 0.363_636_363_6 * 120.0 / per_joint).abs() < 1e-6);
        assert!((model.spring_coeff - 65.222).abs() < 5e-3);
    }

    #[test]
    fn infeasible_anchor_rejected() {
        let anchors = CalibrationAnchors {
            bend_tip_angle: 280f64.to_radians(),
            ..Default::default()
        };
        let err = calibrate(&anchors, &ActuatorSpec::default(), 45f64.to_radians()).unwrap_err();
        match err {
            Error::InfeasibleCalibration { per_joint_deg, .. } => {
                assert!((per_joint_deg - 46.6667).abs() < 1e-3)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn free_bend_round_trip_and_saturation() {
        let (spec, model) = setup();
        let six = mask(&spec, Preset::SixR);
        let s = free_equilibrium(&model, &six, 120.0).unwrap();
        assert!((tip_deflection_angle(&s) - 230.0).abs() < 1e-9);

        let zero = free_equilibrium(&model, &six, 0.0).unwrap();
        assert!(zero.angles().iter().all(|&a| a == 0.0));

        let one = mask(&spec, Preset::OneR);
        let s1 = free_equilibrium(&model, &one, 120.0).unwrap();
        assert!((tip_deflection_angle(&s1) - 230.0 / 6.0).abs() < 1e-9);

        assert!((model.saturation_pressure() - 140.87).abs() < 0.01);
        let sat = free_equilibrium(&model, &six, 150.0).unwrap();
        assert!((tip_deflection_angle(&sat) - 270.0).abs() < 1e-9);
    }

    #[test]
    fn negative_pressure_rejected() {
        let (spec, model) = setup();
        let m = mask(&spec, Preset::SixR);
        assert!(matches!(
            free_equilibrium(&model, &m, -1.0),
            Err(Error::InvalidPressure(_))
        ));
        assert!(blocked_tip_force(&model, &spec, &m, -1.0).is_err());
    }

    #[test]
    fn blocked_force_examples() {
        let (spec, model) = setup();
        let m = mask(&spec, Preset::SixR);
        assert!((blocked_tip_force(&model, &spec, &m, 165.0).unwrap() - 4.0).abs() < 1e-9);
        assert_eq!(blocked_tip_force(&model, &spec, &m, 0.0).unwrap(), 0.0);
        assert!((blocked_tip_force(&model, &spec, &m, 82.5).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn blocked_force_needs_active_joint() {
        let (spec, model) = setup();
        let locked = resolve_mask(&spec, &LockConfig::new(vec![PinLock::new(1, 7)])).unwrap();
        assert!(matches!(
            blocked_tip_force(&model, &spec, &locked, 10.0),
            Err(Error::DegenerateConfiguration(_))
        ));
    }

    #[test]
    fn bending_sweep_examples() {
        let (spec, model) = setup();
        let six = mask(&spec, Preset::SixR);
        let pressures: Vec<f64> = (0..=12).map(|i| i as f64 * 10.0).collect();
        let rows = bending_sweep(&model, &spec, &six, &pressures).unwrap();
        assert_eq!(rows.len(), 13);
        assert!((rows[12].tip_angle_deg - 230.0).abs() < 1e-9);
        assert!(bending_sweep(&model, &spec, &six, &[]).unwrap().is_empty());
        assert!(bending_sweep(&model, &spec, &six, &[10.0, 5.0]).is_err());

        let tips: Vec<f64> = Preset::ALL
            .iter()
            .map(|&p| bending_sweep(&model, &spec, &mask(&spec, p), &[100.0]).unwrap()[0].tip_angle_deg)
            .collect();
        assert!(tips.windows(2).all(|w| w[0] < w[1]), "{tips:?}");
    }

    #[test]
    fn force_sweep_is_homogeneous() {
        let (spec, model) = setup();
        let six = mask(&spec, Preset::SixR);
        let p: Vec<f64> = (0..=16).map(|i| i as f64 * 10.0).chain([165.0]).collect();
        let rows = force_sweep(&model, &spec, &six, &p).unwrap();
        assert!((rows.last().unwrap().force - 4.0).abs() < 1e-9);
        let doubled: Vec<f64> = p.iter().map(|v| 2.0 * v).collect();
        let rows2 = force_sweep(&model, &spec, &six, &doubled).unwrap();
        for (a, b) in rows.iter().zip(&rows2) {
            assert!((2.0 * a.force - b.force).abs() < 1e-12);
            // through the origin
            if a.pressure > 0.0 {
                assert!((a.force / a.pressure - 4.0 / 165.0).abs() < 1e-12);
            }
        }
    }

    /// Brute-force minimiser of the joint energy over a 1e-3 rad grid on the box.
    fn grid_minimum(model: &ActuationModel<f64>, dof: usize, pressure: f64) -> Vec<f64> {
        let h = 1e-3;
        let steps = (model.joint_limit / h).floor() as usize;
        let axis: Vec<f64> = (0..=steps).map(|i| i as f64 * h).chain([model.joint_limit]).collect();
        let e = |a: f64| 0.5 * model.spring_coeff * a * a - model.torque_coeff * pressure * a;
        let mut best = (f64::INFINITY, vec![0.0; dof]);
        let mut idx = vec![0usize; dof];
        loop {
            let point: Vec<f64> = idx.iter().map(|&i| axis[i]).collect();
            let energy: f64 = point.iter().map(|&a| e(a)).sum();
            if energy < best.0 {
                best = (energy, point);
            }
            let mut k = 0;
            loop {
                if k == dof {
                    return best.1;
                }
                idx[k] += 1;
                if idx[k] < axis.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn free_equilibrium_matches_grid_oracle() {
        let (spec, model) = setup();
        for (preset, dof) in [(Preset::OneR, 1), (Preset::TwoR, 2)] {
            let m = mask(&spec, preset);
            for p in [0.0, 37.0, 100.0, 150.0] {
                let state = free_equilibrium(&model, &m, p).unwrap();
                let oracle = grid_minimum(&model, dof, p);
                for (i, &j) in m.active_indices().iter().enumerate() {
                    assert!((state.angles()[j] - oracle[i]).abs() <= 1e-3, "{preset} {p}");
                }
            }
        }
    }
}
