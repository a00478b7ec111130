use hybrid_actuator::{
    chain_outline, forward_kinematics, tip_deflection_angle, total_length, ActuatorSpec32, ActuatorSpec64,
    JointState32, JointState64, PlanarPose64,
};
use proptest::prelude::*;

fn angles(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.2f64..1.2, n)
}

proptest! {
    #[test]
    fn fk_matches_composed_link_transforms(a in angles(6)) {
        let spec = ActuatorSpec64::default();
        let poses = forward_kinematics(&spec, &JointState64::new(a.clone()).unwrap()).unwrap();
        // Compose one homogeneous transform per module by hand.
        let link = |phi: f64| PlanarPose64::new(15.0, 0.0, phi);
        let mut acc = PlanarPose64::identity();
        for (k, &phi) in a.iter().enumerate() {
            acc = acc.compose(&link(phi));
            let p = poses[k + 1];
            prop_assert!((p.x - acc.x).abs() < 1e-12 && (p.y - acc.y).abs() < 1e-12);
            prop_assert!((p.heading - acc.heading).abs() < 1e-12);
        }
        let tip = acc.compose(&PlanarPose64::new(15.0, 0.0, 0.0));
        let t = poses.last().unwrap();
        prop_assert!((t.x - tip.x).abs() < 1e-12 && (t.y - tip.y).abs() < 1e-12);
    }

    #[test]
    fn reach_never_exceeds_length(a in angles(6)) {
        let spec = ActuatorSpec64::default();
        let tip = forward_kinematics(&spec, &JointState64::new(a.clone()).unwrap()).unwrap().last().unwrap().position();
        let reach = tip.norm();
        prop_assert!(reach <= 105.0 + 1e-9);
        if a.iter().any(|&x| x.abs() > 1e-3) {
            prop_assert!(reach < 105.0);
        }
    }

    #[test]
    fn outline_arc_length_is_total_length(a in angles(6), samples in 2usize..16) {
        let spec = ActuatorSpec64::default();
        let pts = chain_outline(&spec, &JointState64::new(a).unwrap(), samples).unwrap();
        let len: f64 = pts.windows(2).map(|w| w[0].distance(w[1])).sum();
        prop_assert!((len - 105.0).abs() < 1e-9);
    }

    #[test]
    fn tip_heading_is_angle_sum(a in angles(6)) {
        let spec = ActuatorSpec64::default();
        let state = JointState64::new(a.clone()).unwrap();
        let tip = forward_kinematics(&spec, &state).unwrap();
        let sum: f64 = a.iter().sum();
        prop_assert!((tip.last().unwrap().heading - sum).abs() < 1e-12);
        prop_assert!((tip_deflection_angle(&state) - sum.to_degrees()).abs() < 1e-9);
    }

    #[test]
    fn single_precision_tracks_double(a in prop::collection::vec(-0.8f32..0.8, 6)) {
        let p32 = forward_kinematics(&ActuatorSpec32::default(), &JointState32::new(a.clone()).unwrap()).unwrap();
        let wide: Vec<f64> = a.iter().map(|&x| x as f64).collect();
        let p64 = forward_kinematics(&ActuatorSpec64::default(), &JointState64::new(wide).unwrap()).unwrap();
        for (s, d) in p32.iter().zip(&p64) {
            prop_assert!((s.x as f64 - d.x).abs() < 1e-3 && (s.y as f64 - d.y).abs() < 1e-3);
        }
    }
}

#[test]
fn straight_chain_reaches_full_length() {
    let spec = ActuatorSpec64::default();
    let tip = forward_kinematics(&spec, &JointState64::zeros(6)).unwrap().last().unwrap().position();
    assert_eq!((tip.x, tip.y), (105.0, 0.0));
    assert_eq!(total_length(&spec), 105.0);
}

#[test]
fn longer_chains_scale() {
    let spec = ActuatorSpec64::with_modules(10, 15.0).unwrap();
    assert_eq!(spec.joint_count(), 9);
    assert_eq!(total_length(&spec), 150.0);
    let poses = forward_kinematics(&spec, &JointState64::zeros(9)).unwrap();
    assert_eq!(poses.len(), 11);
}
