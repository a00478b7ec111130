use crate::geometry::{invalid, Point2};
use crate::error::Result;
use crate::scalar::Scalar;

/// Planar cross-section of a rigid object fixed next to the actuator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Obstacle<T> {
    Circle {
        center: Point2<T>,
        radius: T,
    },
    /// Axis-aligned in its own frame, rotated by `rotation` rad about `center`.
    Rectangle {
        center: Point2<T>,
        width: T,
        height: T,
        rotation: T,
    },
}

/// Signed distance together with its spatial gradient and curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct DistanceSample<T> {
    pub distance: T,
    /// Unit outward normal (gradient of the distance field).
    pub normal: Point2<T>,
    /// `1 / r` when the closest feature is a point (circle centre or corner),
    /// zero when it is a straight edge.
    pub curvature: T,
}

impl<T: Scalar> Obstacle<T> {
    pub fn circle(center: Point2<T>, radius: T) -> Self {
        Obstacle::Circle { center, radius }
    }

    pub fn rectangle(center: Point2<T>, width: T, height: T, rotation: T) -> Self {
        Obstacle::Rectangle {
            center,
            width,
            height,
            rotation,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Obstacle::Circle { center, radius } => {
                if !center.is_finite() {
                    return Err(invalid("obstacle.center", "must be finite"));
                }
                if !(radius.is_finite() && radius > T::zero()) {
                    return Err(invalid("obstacle.radius", "must be finite and > 0"));
                }
            }
            Obstacle::Rectangle {
                center,
                width,
                height,
                rotation,
            } => {
                if !center.is_finite() || !rotation.is_finite() {
                    return Err(invalid("obstacle.center", "must be finite"));
                }
                if !(width.is_finite() && width > T::zero()) {
                    return Err(invalid("obstacle.width", "must be finite and > 0"));
                }
                if !(height.is_finite() && height > T::zero()) {
                    return Err(invalid("obstacle.height", "must be finite and > 0"));
                }
            }
        }
        Ok(())
    }

    pub fn center(&self) -> Point2<T> {
        match *self {
            Obstacle::Circle { center, .. } | Obstacle::Rectangle { center, .. } => center,
        }
    }

    /// Reflection about the x-axis.
    pub fn mirrored(&self) -> Self {
        match *self {
            Obstacle::Circle { center, radius } => Obstacle::Circle {
                center: Point2::new(center.x, -center.y),
                radius,
            },
            Obstacle::Rectangle {
                center,
                width,
                height,
                rotation,
            } => Obstacle::Rectangle {
                center: Point2::new(center.x, -center.y),
                width,
                height,
                rotation: -rotation,
            },
        }
    }

    /// Same shape with its centre moved by `offset`.
    pub fn translated(&self, offset: Point2<T>) -> Self {
        match *self {
            Obstacle::Circle { center, radius } => Obstacle::Circle {
                center: center + offset,
                radius,
            },
            Obstacle::Rectangle {
                center,
                width,
                height,
                rotation,
            } => Obstacle::Rectangle {
                center: center + offset,
                width,
                height,
                rotation,
            },
        }
    }

    pub(crate) fn sample(&self, point: Point2<T>) -> DistanceSample<T> {
        match *self {
            Obstacle::Circle { center, radius } => {
                let d = point - center;
                let r = d.norm();
                let normal = if r > T::zero() {
                    d * (T::one() / r)
                } else {
                    Point2::new(T::one(), T::zero())
                };
                let curvature = if r > T::zero() { T::one() / r } else { T::zero() };
                DistanceSample {
                    distance: r - radius,
                    normal,
                    curvature,
                }
            }
            Obstacle::Rectangle {
                center,
                width,
                height,
                rotation,
            } => {
                let local = (point - center).rotated(-rotation);
                let hw = width * T::half();
                let hh = height * T::half();
                let sx = if local.x < T::zero() { -T::one() } else { T::one() };
                let sy = if local.y < T::zero() { -T::one() } else { T::one() };
                let dx = local.x.abs() - hw;
                let dy = local.y.abs() - hh;
                let (distance, n_local, curvature) = if dx > T::zero() && dy > T::zero() {
                    let r = dx.hypot(dy);
                    (r, Point2::new(sx * dx / r, sy * dy / r), T::one() / r)
                } else if dx > dy {
                    // Nearest feature is a side edge (outside or inside).
                    (dx, Point2::new(sx, T::zero()), T::zero())
                } else {
                    (dy, Point2::new(T::zero(), sy), T::zero())
                };
                DistanceSample {
                    distance,
                    normal: n_local.rotated(rotation),
                    curvature,
                }
            }
        }
    }

    /// Positive outside, negative inside, zero on the boundary (mm).
    pub fn signed_distance(&self, point: Point2<T>) -> T {
        self.sample(point).distance
    }
}

pub fn signed_distance<T: Scalar>(obstacle: &Obstacle<T>, point: Point2<T>) -> T {
    obstacle.signed_distance(point)
}
