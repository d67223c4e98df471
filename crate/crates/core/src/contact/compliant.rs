//! Hunt-Crossley normal force with smooth Coulomb friction, both routable
//! through neural attachment points.

use super::{corner_kinematics, ContactPoint, NORMAL};
use crate::dynamics::spatial::{add, cross, Vec3};
use crate::dynamics::Wrench;
use crate::error::{Error, Result};
use crate::model::ContactScalars;
use crate::neural::NeuralRegistry;
use crate::scalar::Scalar;

/// Corners at or below the ground plane. `q`/`qd` are free-body coordinates.
pub fn detect_contacts<S: Scalar>(
    q: &[S],
    qd: &[S],
    half_extents: &Vec3<S>,
    ground_height: f64,
) -> Result<Vec<ContactPoint<S>>> {
    if q.len() != 7 || qd.len() != 6 {
        return Err(Error::Dimension(format!(
            "free body state needs 7 positions and 6 velocities, got {} and {}",
            q.len(),
            qd.len()
        )));
    }
    let mut out = Vec::new();
    for (corner, (p, lever, v)) in corner_kinematics(q, qd, half_extents).into_iter().enumerate() {
        let depth = S::from_f64(ground_height) - p[2].clone();
        if depth.re() < 0.0 {
            continue;
        }
        let [vx, vy, vz] = v;
        out.push(ContactPoint {
            corner,
            world_position: p,
            lever,
            depth,
            depth_rate: -vz,
            normal: NORMAL,
            tangential_velocity: [vx, vy],
        });
    }
    Ok(out)
}

/// `max(0, k δ^{3/2} (1 + c δ̇))`.
pub fn hunt_crossley_normal<S: Scalar>(
    stiffness: &S,
    damping: &S,
    depth: &S,
    depth_rate: &S,
) -> Result<S> {
    if depth.re() < 0.0 {
        return Err(Error::Domain {
            function: "hunt_crossley_normal",
            value: depth.re(),
        });
    }
    let f = stiffness.clone() * depth.powf(1.5) * (S::one() + damping.clone() * depth_rate.clone());
    Ok(f.clamp_positive())
}

/// Tangential contact force. Records `vt_x`, `vt_y`, `f_n` and `depth` in the
/// registry, then resolves `contact_friction` with the smooth Coulomb law
/// `-mu0 f_n tanh(v_t / eps_v)` as its analytical part.
pub fn neural_friction<S: Scalar>(
    registry: &mut NeuralRegistry<'_, S>,
    params: &ContactScalars<S>,
    tangential_velocity: &[S; 2],
    normal_force: &S,
    depth: &S,
) -> Result<[S; 2]> {
    if params.neural_friction && !registry.has_attachment("contact_friction") {
        return Err(Error::Config(
            "hybrid friction requested but the blueprint has no `contact_friction` attachment".into(),
        ));
    }
    registry.record("vt_x", &tangential_velocity[0]);
    registry.record("vt_y", &tangential_velocity[1]);
    registry.record("f_n", normal_force);
    registry.record("depth", depth);
    let coulomb = |v: &S| {
        -(params.mu0.clone() * normal_force.clone() * (v.clone() / params.eps_v.clone()).tanh())
    };
    let analytical = vec![coulomb(&tangential_velocity[0]), coulomb(&tangential_velocity[1])];
    let mut f = registry.resolve_vec("contact_friction", analytical)?;
    let fy = f.pop().expect("two components");
    let fx = f.pop().expect("two components");
    Ok([fx, fy])
}

/// Net contact force and torque about the centre of mass, world frame,
/// together with the active contact points.
///
/// Besides the friction inputs, `depth_rate` is recorded so a
/// `contact_normal` attachment can use it.
pub fn contact_wrench<S: Scalar>(
    registry: &mut NeuralRegistry<'_, S>,
    params: &ContactScalars<S>,
    half_extents: &Vec3<S>,
    q: &[S],
    qd: &[S],
) -> Result<(Wrench<S>, Vec<ContactPoint<S>>)> {
    let contacts = detect_contacts(q, qd, half_extents, params.ground_height)?;
    let mut wrench = Wrench::zero();
    for c in &contacts {
        registry.record("vt_x", &c.tangential_velocity[0]);
        registry.record("vt_y", &c.tangential_velocity[1]);
        registry.record("depth", &c.depth);
        registry.record("depth_rate", &c.depth_rate);
        let hc = hunt_crossley_normal(&params.stiffness, &params.damping, &c.depth, &c.depth_rate)?;
        let f_n = registry.resolve("contact_normal", hc)?.clamp_positive();
        let [fx, fy] = neural_friction(registry, params, &c.tangential_velocity, &f_n, &c.depth)?;
        let force = [fx, fy, f_n];
        wrench.torque = add(&wrench.torque, &cross(&c.lever, &force));
        wrench.force = add(&wrench.force, &force);
    }
    Ok((wrench, contacts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neural::{NetworkSpec, NeuralBlueprint};

    fn params(mu0: f64) -> ContactScalars<f64> {
        ContactScalars {
            stiffness: 1e4,
            damping: 0.0,
            mu0,
            eps_v: 1e-3,
            ground_height: 0.0,
            neural_friction: false,
        }
    }

    fn resting(z: f64) -> Vec<f64> {
        vec![0.3, -0.2, z, 1.0, 0.0, 0.0, 0.0]
    }

    #[test]
    fn flat_cube_touching_has_four_contacts() {
        let h = [0.05; 3];
        let c = detect_contacts(&resting(0.05), &[0.0; 6], &h, 0.0).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.iter().all(|p| p.depth == 0.0));
        assert!(detect_contacts(&resting(0.06), &[0.0; 6], &h, 0.0).unwrap().is_empty());
    }

    #[test]
    fn tilted_corner_matches_hand_rotation() {
        // rotate 45 degrees about x, then about y by atan(1/sqrt 2) so the
        // (-,-,-) corner points straight down
        let a = std::f64::consts::FRAC_PI_4;
        let b = (1.0 / 2f64.sqrt()).atan();
        let qx = [(a / 2.0).cos(), (a / 2.0).sin(), 0.0, 0.0];
        let qy = [(-b / 2.0).cos(), 0.0, (-b / 2.0).sin(), 0.0];
        let rot = crate::dynamics::spatial::quat_mul(&qy, &qx);
        let h = 0.05;
        let half_diag = h * 3f64.sqrt();
        let z = half_diag - 0.002;
        let q = vec![0.0, 0.0, z, rot[0], rot[1], rot[2], rot[3]];
        let c = detect_contacts(&q, &[0.0; 6], &[h; 3], 0.0).unwrap();
        assert_eq!(c.len(), 1);
        assert!((c[0].depth - 0.002).abs() < 1e-12);

        // hand rotation of the corner with explicit matrices
        let rx = |v: [f64; 3]| [v[0], a.cos() * v[1] - a.sin() * v[2], a.sin() * v[1] + a.cos() * v[2]];
        let ry = |v: [f64; 3]| {
            [(-b).cos() * v[0] + (-b).sin() * v[2], v[1], -(-b).sin() * v[0] + (-b).cos() * v[2]]
        };
        let mut candidates: Vec<[f64; 3]> = super::super::corners(&[h; 3]).iter().map(|c| ry(rx(*c))).collect();
        candidates.sort_by(|p, q| p[2].total_cmp(&q[2]));
        let lowest = candidates[0];
        let p = c[0].world_position;
        assert!((p[0] - lowest[0]).abs() < 1e-12);
        assert!((p[1] - lowest[1]).abs() < 1e-12);
        assert!((p[2] - (z + lowest[2])).abs() < 1e-12);
    }

    #[test]
    fn corner_velocity_includes_rotation() {
        let h = [0.05; 3];
        // spin about body z at 2 rad/s while touching
        let c = detect_contacts(&resting(0.05), &[0.1, 0.0, -0.5, 0.0, 0.0, 2.0], &h, 0.0).unwrap();
        for p in &c {
            let r = p.lever;
            assert!((p.tangential_velocity[0] - (0.1 - 2.0 * r[1])).abs() < 1e-15);
            assert!((p.tangential_velocity[1] - 2.0 * r[0]).abs() < 1e-15);
            assert_eq!(p.depth_rate, 0.5);
        }
    }

    #[test]
    fn hunt_crossley_examples() {
        assert_eq!(hunt_crossley_normal(&1e4, &0.5, &0.0, &3.0).unwrap(), 0.0);
        let f = hunt_crossley_normal(&1e4, &0.0, &1e-2, &0.0).unwrap();
        assert!((f - 10.0).abs() < 1e-12);
        assert_eq!(hunt_crossley_normal(&1e4, &2.0, &1e-2, &-1.0).unwrap(), 0.0);
        assert!(hunt_crossley_normal(&1e4, &0.0, &-1e-3, &0.0).is_err());
    }

    #[test]
    fn hunt_crossley_is_continuous_at_touchdown() {
        for rate in [-2.0, 0.0, 3.0] {
            let f = hunt_crossley_normal(&1e5, &0.8, &1e-12, &rate).unwrap();
            assert!(f < 1e-9);
        }
    }

    #[test]
    fn coulomb_friction_examples() {
        let bp = NeuralBlueprint::empty();
        let mut reg = NeuralRegistry::new(&bp, &[]).unwrap();
        let p = params(0.5);
        let f = neural_friction(&mut reg, &p, &[0.0, 0.0], &10.0, &1e-3).unwrap();
        assert_eq!(f, [0.0, 0.0]);
        let f = neural_friction(&mut reg, &p, &[1.0, -1.0], &10.0, &1e-3).unwrap();
        assert!((f[0] + 5.0).abs() < 1e-9 && (f[1] - 5.0).abs() < 1e-9);
    }

    #[test]
    fn hybrid_friction_without_attachment_is_a_config_error() {
        let bp = NeuralBlueprint::empty();
        let mut reg = NeuralRegistry::new(&bp, &[]).unwrap();
        let mut p = params(0.5);
        p.neural_friction = true;
        let err = neural_friction(&mut reg, &p, &[0.1, 0.0], &1.0, &1e-3).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn friction_network_matches_standalone_mlp() {
        let spec = NetworkSpec::new(
            vec!["vt_x".into(), "vt_y".into(), "f_n".into(), "depth".into()],
            vec![3],
            2,
        )
        .unwrap();
        let mut bp = NeuralBlueprint::empty();
        bp.attach("contact_friction", spec.clone(), Default::default(), None, Some(7)).unwrap();
        let w: Vec<f64> = (0..bp.num_weights()).map(|i| ((i * 37 % 11) as f64 - 5.0) * 0.1).collect();
        let mut reg = NeuralRegistry::new(&bp, &w).unwrap();
        reg.begin_step();
        let p = params(0.4);
        let f = neural_friction(&mut reg, &p, &[0.02, -0.01], &3.0, &2e-3).unwrap();
        let nn = crate::neural::mlp_forward(&spec, &w, &[0.02, -0.01, 3.0, 2e-3]).unwrap();
        let phi = |v: f64| -0.4 * 3.0 * (v / 1e-3).tanh();
        assert_eq!(f[0], phi(0.02) + nn[0]);
        assert_eq!(f[1], phi(-0.01) + nn[1]);
    }

    #[test]
    fn airborne_cube_gets_zero_wrench() {
        let bp = NeuralBlueprint::empty();
        let mut reg = NeuralRegistry::new(&bp, &[]).unwrap();
        let (w, c) =
            contact_wrench(&mut reg, &params(0.5), &[0.05; 3], &resting(0.2), &[1.0, 0.0, -1.0, 0.0, 0.0, 0.0])
                .unwrap();
        assert!(c.is_empty());
        assert_eq!(w.force, [0.0; 3]);
        assert_eq!(w.torque, [0.0; 3]);
    }

    #[test]
    fn symmetric_penetration_gives_pure_vertical_force() {
        let bp = NeuralBlueprint::empty();
        let mut reg = NeuralRegistry::new(&bp, &[]).unwrap();
        let (w, c) =
            contact_wrench(&mut reg, &params(0.5), &[0.05; 3], &resting(0.04), &[0.0; 6]).unwrap();
        assert_eq!(c.len(), 4);
        let per_corner = 1e4 * 0.01f64.powf(1.5);
        assert!((w.force[2] - 4.0 * per_corner).abs() < 1e-9);
        assert!(w.force[0].abs() < 1e-15 && w.force[1].abs() < 1e-15);
        assert!(w.torque.iter().all(|t| t.abs() < 1e-12));
    }
}
