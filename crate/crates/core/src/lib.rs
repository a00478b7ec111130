//! Planar quasi-static model of a hybrid rigid/soft pneumatic bending actuator.
//!
//! The actuator is a serial chain of rigid shell modules joined by parallel
//! revolute joints and driven by one pressurised soft chamber. Pins can lock
//! runs of joints to reprogram the bending, and the chain can be pressed
//! against a rigid obstacle to score how well it conforms to the shape.
//!
//! All model types are generic over [`Scalar`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar to `f64`. Lengths are in mm, angles in
//! rad, pressures in kPa, forces in N and moments in N·mm.

pub mod contact;
pub mod error;
pub mod geometry;
pub mod locking;
pub mod mechanics;
pub mod scalar;

pub use contact::{
    conformity, pressure_ramp, ramp_outcome, signed_distance, solve_contact_ramp,
    solve_equilibrium_with_contact, ConformityReport, ContactSolution, Curl, Obstacle,
    RampOutcome, Scene, SolverOptions,
};
pub use error::{Error, Result, SolverDiagnostics};
pub use geometry::{
    chain_outline, forward_kinematics, tip_deflection_angle, total_length, ActuatorSpec,
    ChamberParams, JointState, PlanarPose, Point2, ShellParams,
};
pub use locking::{dof, preset, resolve_mask, ActiveJointMask, LockConfig, PinLock, Preset};
pub use mechanics::{
    blocked_tip_force, bending_sweep, calibrate, default_joint_limit, force_sweep,
    free_equilibrium, tip_lever, ActuationModel, BendRow, CalibrationAnchors, ForceRow,
};
pub use scalar::Scalar;

pub type ActuatorSpec64 = ActuatorSpec<f64>;
pub type ShellParams64 = ShellParams<f64>;
pub type ChamberParams64 = ChamberParams<f64>;
pub type JointState64 = JointState<f64>;
pub type PlanarPose64 = PlanarPose<f64>;
pub type Point64 = Point2<f64>;
pub type ActuationModel64 = ActuationModel<f64>;
pub type CalibrationAnchors64 = CalibrationAnchors<f64>;
pub type Obstacle64 = Obstacle<f64>;
pub type Scene64 = Scene<f64>;
pub type ContactSolution64 = ContactSolution<f64>;
pub type ConformityReport64 = ConformityReport<f64>;
pub type SolverOptions64 = SolverOptions<f64>;

pub type ActuatorSpec32 = ActuatorSpec<f32>;
pub type JointState32 = JointState<f32>;
pub type ActuationModel32 = ActuationModel<f32>;
