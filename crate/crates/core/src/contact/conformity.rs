use crate::contact::{ContactSolution, Scene};
use crate::scalar::Scalar;

pub const DEFAULT_GAP_THRESHOLD: f64 = 1.0;

/// Gap statistics between the movable part of the chain and the obstacle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformityReport<T> {
    /// mm
    pub mean_gap: T,
    /// mm
    pub max_gap: T,
    /// Fraction of samples whose gap is within the threshold.
    pub contact_fraction: T,
    pub sample_count: usize,
}

/// Scores how closely the equilibrium chain hugs the obstacle.
///
/// Only links distal to the first active joint are scored; the gap of a
/// centerline sample is its signed distance minus the clearance, clamped
/// at zero.
pub fn conformity<T: Scalar>(
    solution: &ContactSolution<T>,
    scene: &Scene<T>,
    gap_threshold: T,
) -> ConformityReport<T> {
    let samples = solution.samples_per_link.max(2);
    let Some(first) = scene.mask.proximal_active_joint() else {
        return ConformityReport {
            mean_gap: T::zero(),
            max_gap: T::zero(),
            contact_fraction: T::zero(),
            sample_count: 0,
        };
    };
    // Link `l` (0-based) starts at joint `Jl`; links before the first active joint never move.
    let points = scene.outline(&solution.state, samples);
    let gaps: Vec<T> = points[first * samples..]
        .iter()
        .map(|&q| (scene.obstacle.signed_distance(q) - scene.clearance).max(T::zero()))
        .collect();
    let count = T::from_usize(gaps.len()).unwrap();
    let sum = gaps.iter().fold(T::zero(), |acc, &g| acc + g);
    let max_gap = gaps.iter().fold(T::zero(), |acc, &g| acc.max(g));
    let touching = gaps.iter().filter(|&&g| g <= gap_threshold).count();
    ConformityReport {
        mean_gap: sum / count,
        max_gap,
        contact_fraction: T::from_usize(touching).unwrap() / count,
        sample_count: gaps.len(),
    }
}
