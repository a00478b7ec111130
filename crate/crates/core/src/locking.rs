//! Pin locks that rigidly join runs of adjacent shell modules.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::ActuatorSpec;
use crate::scalar::Scalar;

/// A pin spanning `span` consecutive modules starting at `start_module` (1-based).
///
/// A pin of span `k` locks the `k - 1` joints between the modules it covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PinLock {
    pub start_module: usize,
    pub span: usize,
}

impl PinLock {
    pub const fn new(start_module: usize, span: usize) -> Self {
        Self { start_module, span }
    }

    pub fn last_module(&self) -> usize {
        self.start_module + self.span - 1
    }

    pub fn validate(&self, module_count: usize) -> Result<()> {
        if self.span < 2 || self.start_module < 1 || self.last_module() > module_count {
            return Err(Error::PinOutOfRange {
                start_module: self.start_module,
                span: self.span,
                module_count,
            });
        }
        Ok(())
    }

    /// Joint `Ji` sits between modules `Mi` and `Mi+1`.
    pub fn locks_joint(&self, joint: usize) -> bool {
        joint >= self.start_module && joint < self.last_module()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LockConfig {
    pub pins: Vec<PinLock>,
}

impl LockConfig {
    pub fn new(pins: Vec<PinLock>) -> Self {
        Self { pins }
    }

    pub fn unlocked() -> Self {
        Self::default()
    }

    pub fn with_pin(mut self, pin: PinLock) -> Self {
        self.pins.push(pin);
        self
    }
}

/// Which joints are free to rotate. Index 0 is `J1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActiveJointMask {
    active: Vec<bool>,
}

impl ActiveJointMask {
    pub fn new(active: Vec<bool>) -> Self {
        Self { active }
    }

    pub fn all_active(joint_count: usize) -> Self {
        Self::new(vec![true; joint_count])
    }

    pub fn len(&self) -> usize {
        self.active.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.active
    }

    /// `joint` is 1-based.
    pub fn is_active(&self, joint: usize) -> bool {
        joint >= 1 && self.active.get(joint - 1).copied().unwrap_or(false)
    }

    /// 0-based indices of the active joints, ascending.
    pub fn active_indices(&self) -> Vec<usize> {
        self.active
            .iter()
            .enumerate()
            .filter_map(|(i, &a)| a.then_some(i))
            .collect()
    }

    /// 1-based joint labels of the active joints.
    pub fn active_joints(&self) -> Vec<usize> {
        self.active_indices().into_iter().map(|i| i + 1).collect()
    }

    pub fn dof(&self) -> usize {
        dof(self)
    }

    /// 1-based index of the most distal active joint.
    pub fn distal_active_joint(&self) -> Option<usize> {
        self.active.iter().rposition(|&a| a).map(|i| i + 1)
    }

    /// 1-based index of the most proximal active joint.
    pub fn proximal_active_joint(&self) -> Option<usize> {
        self.active.iter().position(|&a| a).map(|i| i + 1)
    }
}

pub fn resolve_mask<T: Scalar>(spec: &ActuatorSpec<T>, config: &LockConfig) -> Result<ActiveJointMask> {
    for pin in &config.pins {
        pin.validate(spec.module_count)?;
    }
    let active = (1..=spec.joint_count())
        .map(|joint| !config.pins.iter().any(|pin| pin.locks_joint(joint)))
        .collect();
    Ok(ActiveJointMask::new(active))
}

pub fn dof(mask: &ActiveJointMask) -> usize {
    mask.active.iter().filter(|&&a| a).count()
}

/// The four lock layouts tested on the seven-module actuator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    OneR,
    TwoR,
    FourR,
    SixR,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::OneR, Preset::TwoR, Preset::FourR, Preset::SixR];

    pub fn name(self) -> &'static str {
        match self {
            Preset::OneR => "1R",
            Preset::TwoR => "2R",
            Preset::FourR => "4R",
            Preset::SixR => "6R",
        }
    }

    pub fn nominal_dof(self) -> usize {
        match self {
            Preset::OneR => 1,
            Preset::TwoR => 2,
            Preset::FourR => 4,
            Preset::SixR => 6,
        }
    }

    pub fn lock_config(self) -> LockConfig {
        let pins = match self {
            Preset::SixR => vec![],
            Preset::OneR => vec![PinLock::new(1, 3), PinLock::new(4, 4)],
            Preset::TwoR => vec![PinLock::new(1, 3), PinLock::new(5, 3)],
            Preset::FourR => vec![PinLock::new(1, 2), PinLock::new(6, 2)],
        };
        LockConfig::new(pins)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "1R" => Ok(Preset::OneR),
            "2R" => Ok(Preset::TwoR),
            "4R" => Ok(Preset::FourR),
            "6R" => Ok(Preset::SixR),
            _ => Err(Error::UnknownPreset(s.to_string())),
        }
    }
}

pub fn preset(name: &str) -> Result<LockConfig> {
    Ok(name.parse::<Preset>()?.lock_config())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> ActuatorSpec<f64> {
        ActuatorSpec::default()
    }

    fn active(name: &str) -> Vec<usize> {
        resolve_mask(&spec(), &preset(name).unwrap())
            .unwrap()
            .active_joints()
    }

    #[test]
    fn no_pins_is_six_r() {
        let mask = resolve_mask(&spec(), &LockConfig::unlocked()).unwrap();
        assert_eq!(mask.active_joints(), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(dof(&mask), 6);
    }

    #[test]
    fn presets_match_tested_layouts() {
        assert_eq!(active("1R"), vec![3]);
        assert_eq!(active("2R"), vec![3, 4]);
        assert_eq!(active("4R"), vec![2, 3, 4, 5]);
        assert_eq!(active("6R"), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(active("2r"), vec![3, 4]);
    }

    #[test]
    fn explicit_one_r_pins() {
        let cfg = LockConfig::new(vec![PinLock::new(1, 3), PinLock::new(4, 4)]);
        assert_eq!(resolve_mask(&spec(), &cfg).unwrap().active_joints(), vec![3]);
    }

    #[test]
    fn overlapping_pins_union() {
        let cfg = LockConfig::new(vec![PinLock::new(1, 3), PinLock::new(2, 3)]);
        let mask = resolve_mask(&spec(), &cfg).unwrap();
        assert_eq!(mask.active_joints(), vec![4, 5, 6]);
    }

    #[test]
    fn fully_pinned_chain_has_zero_dof() {
        let cfg = LockConfig::new(vec![PinLock::new(1, 7)]);
        let mask = resolve_mask(&spec(), &cfg).unwrap();
        assert_eq!(dof(&mask), 0);
        assert_eq!(mask.distal_active_joint(), None);
    }

    #[test]
    fn out_of_range_pins_rejected() {
        for pin in [PinLock::new(0, 2), PinLock::new(6, 3), PinLock::new(2, 1)] {
            let err = resolve_mask(&spec(), &LockConfig::new(vec![pin])).unwrap_err();
            assert!(matches!(err, Error::PinOutOfRange { .. }), "{pin:?}");
        }
    }

    #[test]
    fn unknown_preset_rejected() {
        assert_eq!(preset("3R").unwrap_err(), Error::UnknownPreset("3R".into()));
    }
}
