//! Obstacles, contact-constrained equilibrium and shape-conformity scoring.

mod conformity;
mod linalg;
mod obstacle;
mod solver;

pub use conformity::{conformity, ConformityReport, DEFAULT_GAP_THRESHOLD};
pub use obstacle::{signed_distance, Obstacle};
pub use solver::{
    pressure_ramp, ramp_outcome, solve_contact_ramp, solve_equilibrium_with_contact,
    ContactSolution, RampOutcome, SolverOptions,
};

use crate::error::{Error, Result};
use crate::geometry::{chain_poses, invalid, outline_from_poses, ActuatorSpec, JointState, PlanarPose, Point2};
use crate::locking::ActiveJointMask;
use crate::mechanics::ActuationModel;
use crate::scalar::Scalar;

/// Which way positive joint angles turn the chain in the world frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Curl {
    #[default]
    CounterClockwise,
    Clockwise,
}

impl Curl {
    fn sign<T: Scalar>(self) -> T {
        match self {
            Curl::CounterClockwise => T::one(),
            Curl::Clockwise => -T::one(),
        }
    }
}

/// One actuator configuration next to one fixed obstacle.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene<T> {
    pub spec: ActuatorSpec<T>,
    pub model: ActuationModel<T>,
    pub mask: ActiveJointMask,
    pub obstacle: Obstacle<T>,
    /// Required separation between the chain centerline and the obstacle (mm).
    pub clearance: T,
    pub curl: Curl,
}

impl<T: Scalar> Scene<T> {
    /// Clearance defaults to the shell radius.
    pub fn new(spec: ActuatorSpec<T>, model: ActuationModel<T>, mask: ActiveJointMask, obstacle: Obstacle<T>) -> Self {
        Self {
            clearance: spec.shell.shell_radius,
            spec,
            model,
            mask,
            obstacle,
            curl: Curl::default(),
        }
    }

    pub fn with_clearance(mut self, clearance: T) -> Self {
        self.clearance = clearance;
        self
    }

    pub fn with_curl(mut self, curl: Curl) -> Self {
        self.curl = curl;
        self
    }

    /// The same scene reflected about the x-axis, bending the other way.
    pub fn mirrored(&self) -> Self {
        let curl = match self.curl {
            Curl::CounterClockwise => Curl::Clockwise,
            Curl::Clockwise => Curl::CounterClockwise,
        };
        Self {
            obstacle: self.obstacle.mirrored(),
            curl,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        self.model.validate()?;
        self.obstacle.validate()?;
        if self.mask.len() != self.spec.joint_count() {
            return Err(Error::DimensionMismatch {
                expected: self.spec.joint_count(),
                found: self.mask.len(),
            });
        }
        if !(self.clearance.is_finite() && self.clearance >= T::zero()) {
            return Err(invalid("clearance", "must be finite and >= 0"));
        }
        Ok(())
    }

    pub(crate) fn world_angles(&self, state: &JointState<T>) -> Vec<T> {
        let s = self.curl.sign::<T>();
        state.angles().iter().map(|&a| a * s).collect()
    }

    /// World-frame poses for `state`, honouring the curl direction.
    pub fn poses(&self, state: &JointState<T>) -> Vec<PlanarPose<T>> {
        chain_poses(self.spec.module_pitch, &self.world_angles(state))
    }

    /// World-frame centerline samples for `state`, honouring the curl direction.
    pub fn outline(&self, state: &JointState<T>, samples_per_link: usize) -> Vec<Point2<T>> {
        outline_from_poses(&self.poses(state), self.spec.module_pitch, samples_per_link.max(2))
    }

    /// Largest violation of the clearance over the sampled centerline (mm).
    pub fn max_penetration(&self, state: &JointState<T>, samples_per_link: usize) -> T {
        self.outline(state, samples_per_link)
            .into_iter()
            .map(|q| (self.clearance - self.obstacle.signed_distance(q)).max(T::zero()))
            .fold(T::zero(), T::max)
    }

    pub fn energy(&self, pressure: T, state: &JointState<T>) -> T {
        self.model.energy(&self.mask, pressure, state)
    }
}
