//! Actuator description and planar forward kinematics of the jointed shell chain.
//!
//! The chain lives in the sagittal plane. The mounted module starts at the
//! origin heading along +x; joint `Ji` (1-based) sits between module `Mi`
//! and `Mi+1`. Positive joint angles curl the chain counter-clockwise.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn origin() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Self) -> T {
        (self - other).norm()
    }

    /// Counter-clockwise quarter turn.
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn rotated(self, angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl<T: Scalar> Add for Point2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Scalar> Sub for Point2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Scalar> Mul<T> for Point2<T> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        Self::new(self.x * rhs, self.y * rhs)
    }
}

impl<T: Scalar> Neg for Point2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Position and heading of a frame in the plane (mm, mm, rad).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlanarPose<T> {
    pub x: T,
    pub y: T,
    pub heading: T,
}

impl<T: Scalar> PlanarPose<T> {
    pub fn new(x: T, y: T, heading: T) -> Self {
        Self { x, y, heading }
    }

    pub fn identity() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn position(&self) -> Point2<T> {
        Point2::new(self.x, self.y)
    }

    /// Moves `distance` along the current heading.
    pub fn advanced(&self, distance: T) -> Self {
        let (s, c) = self.heading.sin_cos();
        Self::new(self.x + distance * c, self.y + distance * s, self.heading)
    }

    pub fn rotated(&self, angle: T) -> Self {
        Self::new(self.x, self.y, self.heading + angle)
    }

    /// Maps a point expressed in this frame to the parent frame.
    pub fn transform_point(&self, local: Point2<T>) -> Point2<T> {
        self.position() + local.rotated(self.heading)
    }

    /// `self ∘ other`: `other` is expressed in the frame of `self`.
    pub fn compose(&self, other: &Self) -> Self {
        let p = self.transform_point(other.position());
        Self::new(p.x, p.y, self.heading + other.heading)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.heading.is_finite()
    }
}

/// Rigid shell outline parameters. Lengths in mm, opening angle in rad.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellParams<T> {
    pub effective_length: T,
    pub opening_angle: T,
    pub joint_radius: T,
    pub shell_radius: T,
    pub wall_thickness: T,
}

impl<T: Scalar> Default for ShellParams<T> {
    fn default() -> Self {
        Self {
            effective_length: T::of(14.0),
            opening_angle: T::of(75.0).to_radians(),
            joint_radius: T::of(10.0),
            shell_radius: T::of(12.0),
            wall_thickness: T::of(1.0),
        }
    }
}

impl<T: Scalar> ShellParams<T> {
    pub fn validate(&self) -> Result<()> {
        positive("shell.effective_length", self.effective_length)?;
        positive("shell.opening_angle", self.opening_angle)?;
        positive("shell.joint_radius", self.joint_radius)?;
        positive("shell.shell_radius", self.shell_radius)?;
        positive("shell.wall_thickness", self.wall_thickness)?;
        if self.opening_angle >= T::PI() {
            return Err(invalid("shell.opening_angle", "must be below 180 deg"));
        }
        if self.wall_thickness >= self.joint_radius {
            return Err(invalid("shell.wall_thickness", "must be below joint_radius"));
        }
        if self.joint_radius >= self.shell_radius {
            return Err(invalid("shell.joint_radius", "must be below shell_radius"));
        }
        Ok(())
    }
}

/// Soft chamber modelled as a run of semi-spheres (mm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChamberParams<T> {
    pub sphere_radius: T,
    pub chamber_thickness: T,
}

impl<T: Scalar> Default for ChamberParams<T> {
    fn default() -> Self {
        Self {
            sphere_radius: T::of(9.0),
            chamber_thickness: T::of(1.5),
        }
    }
}

impl<T: Scalar> ChamberParams<T> {
    pub fn validate(&self, shell: &ShellParams<T>) -> Result<()> {
        positive("chamber.sphere_radius", self.sphere_radius)?;
        positive("chamber.chamber_thickness", self.chamber_thickness)?;
        if self.chamber_thickness >= self.sphere_radius {
            return Err(invalid("chamber.chamber_thickness", "must be below sphere_radius"));
        }
        if self.sphere_radius >= shell.joint_radius {
            return Err(invalid("chamber.sphere_radius", "must be below shell.joint_radius"));
        }
        Ok(())
    }
}

/// Complete geometric description of one actuator.
///
/// `module_pitch` is the joint-to-joint spacing; it is independent of
/// `shell.effective_length`, which only affects the drawn shell outline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActuatorSpec<T> {
    pub module_count: usize,
    pub module_pitch: T,
    pub shell: ShellParams<T>,
    pub chamber: ChamberParams<T>,
}

impl<T: Scalar> Default for ActuatorSpec<T> {
    fn default() -> Self {
        Self {
            module_count: 7,
            module_pitch: T::of(15.0),
            shell: ShellParams::default(),
            chamber: ChamberParams::default(),
        }
    }
}

impl<T: Scalar> ActuatorSpec<T> {
    /// Default shells and chamber with the given module layout.
    pub fn with_modules(module_count: usize, module_pitch: T) -> Result<Self> {
        let spec = Self {
            module_count,
            module_pitch,
            ..Self::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.module_count < 2 {
            return Err(invalid("module_count", "must be at least 2"));
        }
        positive("module_pitch", self.module_pitch)?;
        self.shell.validate()?;
        self.chamber.validate(&self.shell)
    }

    pub fn joint_count(&self) -> usize {
        self.module_count - 1
    }

    /// Arc position of joint `joint` (1-based) measured from the base.
    pub fn joint_position(&self, joint: usize) -> T {
        T::from_usize(joint).unwrap() * self.module_pitch
    }

    pub fn total_length(&self) -> T {
        total_length(self)
    }
}

/// Joint angles in rad, one per joint, base to tip.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState<T> {
    angles: Vec<T>,
}

impl<T: Scalar> JointState<T> {
    pub fn new(angles: Vec<T>) -> Result<Self> {
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(invalid("angles", "joint angles must be finite"));
        }
        Ok(Self { angles })
    }

    pub fn zeros(joint_count: usize) -> Self {
        Self {
            angles: vec![T::zero(); joint_count],
        }
    }

    pub fn from_degrees(degrees: &[T]) -> Result<Self> {
        Self::new(degrees.iter().map(|d| d.to_radians()).collect())
    }

    pub fn angles(&self) -> &[T] {
        &self.angles
    }

    pub fn angles_mut(&mut self) -> &mut [T] {
        &mut self.angles
    }

    pub fn into_angles(self) -> Vec<T> {
        self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn degrees(&self) -> Vec<T> {
        self.angles.iter().map(|a| a.to_degrees()).collect()
    }

    fn check_len(&self, spec: &ActuatorSpec<T>) -> Result<()> {
        if self.angles.len() != spec.joint_count() {
            return Err(Error::DimensionMismatch {
                expected: spec.joint_count(),
                found: self.angles.len(),
            });
        }
        Ok(())
    }
}

/// Poses of the base, every joint (after its rotation) and the tip.
///
/// Returns `module_count + 1` poses.
pub fn forward_kinematics<T: Scalar>(
    spec: &ActuatorSpec<T>,
    state: &JointState<T>,
) -> Result<Vec<PlanarPose<T>>> {
    spec.validate()?;
    state.check_len(spec)?;
    Ok(chain_poses(spec.module_pitch, state.angles()))
}

pub(crate) fn chain_poses<T: Scalar>(pitch: T, angles: &[T]) -> Vec<PlanarPose<T>> {
    let mut poses = Vec::with_capacity(angles.len() + 2);
    let mut pose = PlanarPose::identity();
    poses.push(pose);
    for &angle in angles {
        pose = pose.advanced(pitch).rotated(angle);
        poses.push(pose);
    }
    poses.push(pose.advanced(pitch));
    poses
}

/// Heading of the distal segment relative to the straight pose, in degrees.
pub fn tip_deflection_angle<T: Scalar>(state: &JointState<T>) -> T {
    state
        .angles()
        .iter()
        .fold(T::zero(), |acc, &a| acc + a)
        .to_degrees()
}

/// Uniform samples along each link centerline, base to tip.
///
/// Each link contributes `samples_per_link` points including both of its
/// end points, so neighbouring links share a duplicated joint position.
pub fn chain_outline<T: Scalar>(
    spec: &ActuatorSpec<T>,
    state: &JointState<T>,
    samples_per_link: usize,
) -> Result<Vec<Point2<T>>> {
    spec.validate()?;
    state.check_len(spec)?;
    if samples_per_link < 2 {
        return Err(invalid("samples_per_link", "must be at least 2"));
    }
    let poses = chain_poses(spec.module_pitch, state.angles());
    Ok(outline_from_poses(&poses, spec.module_pitch, samples_per_link))
}

pub(crate) fn outline_from_poses<T: Scalar>(
    poses: &[PlanarPose<T>],
    pitch: T,
    samples_per_link: usize,
) -> Vec<Point2<T>> {
    let links = poses.len() - 1;
    let denom = T::from_usize(samples_per_link - 1).unwrap();
    let mut points = Vec::with_capacity(links * samples_per_link);
    for link in 0..links {
        let start = poses[link];
        for s in 0..samples_per_link {
            if s + 1 == samples_per_link {
                // Land exactly on the next frame origin.
                points.push(poses[link + 1].position());
            } else {
                let t = T::from_usize(s).unwrap() / denom;
                points.push(start.advanced(pitch * t).position());
            }
        }
    }
    points
}

pub fn total_length<T: Scalar>(spec: &ActuatorSpec<T>) -> T {
    T::from_usize(spec.module_count).unwrap() * spec.module_pitch
}

fn positive<T: Scalar>(field: &'static str, value: T) -> Result<()> {
    if value.is_finite() && value > T::zero() {
        Ok(())
    } else {
        Err(invalid(field, format!("must be finite and > 0, got {value}")))
    }
}

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        field,
        reason: reason.into(),
    }
}
