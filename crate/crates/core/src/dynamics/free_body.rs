//! Free-floating rigid body: Newton-Euler with the gyroscopic term.
//!
//! Generalized position: `[x, y, z, qw, qx, qy, qz]` (world position of the
//! centre of mass and body-to-world rotation). Generalized velocity:
//! `[vx, vy, vz, wx, wy, wz]` with linear velocity in the world frame and
//! angular velocity in the body frame. Gravity acts along -z.

use super::spatial::{cross, hadamard, rotate, rotate_inv, Quat, Vec3};
use crate::error::{Error, Result};
use crate::model::FreeBodyScalars;
use crate::scalar::Scalar;

/// External force and torque about the centre of mass, world frame.
#[derive(Debug, Clone)]
pub struct Wrench<S> {
    pub force: Vec3<S>,
    pub torque: Vec3<S>,
}

impl<S: Scalar> Wrench<S> {
    pub fn zero() -> Self {
        Wrench {
            force: [S::zero(), S::zero(), S::zero()],
            torque: [S::zero(), S::zero(), S::zero()],
        }
    }
}

pub(crate) fn split<S: Scalar>(q: &[S], qd: &[S]) -> Result<(Vec3<S>, Quat<S>, Vec3<S>, Vec3<S>)> {
    if q.len() != 7 || qd.len() != 6 {
        return Err(Error::Dimension(format!(
            "free body state needs 7 positions and 6 velocities, got {} and {}",
            q.len(),
            qd.len()
        )));
    }
    Ok((
        [q[0].clone(), q[1].clone(), q[2].clone()],
        [q[3].clone(), q[4].clone(), q[5].clone(), q[6].clone()],
        [qd[0].clone(), qd[1].clone(), qd[2].clone()],
        [qd[3].clone(), qd[4].clone(), qd[5].clone()],
    ))
}

/// `diag(m, m, m, I1, I2, I3)` in the generalized coordinates above.
pub fn mass_matrix<S: Scalar>(body: &FreeBodyScalars<S>) -> Vec<Vec<S>> {
    let mut m = vec![vec![S::zero(); 6]; 6];
    for i in 0..3 {
        m[i][i] = body.mass.clone();
        m[3 + i][3 + i] = body.inertia[i].clone();
    }
    m
}

/// Gravity and gyroscopic terms: `[0, 0, m g, w x I w]`.
pub fn bias_forces<S: Scalar>(body: &FreeBodyScalars<S>, qd: &[S]) -> Vec<S> {
    let omega: Vec3<S> = [qd[3].clone(), qd[4].clone(), qd[5].clone()];
    let gyro = cross(&omega, &hadamard(&body.inertia, &omega));
    let [g0, g1, g2] = gyro;
    vec![
        S::zero(),
        S::zero(),
        body.mass.clone() * body.gravity.clone(),
        g0,
        g1,
        g2,
    ]
}

/// Linear acceleration (world) and angular acceleration (body).
pub fn forward_dynamics<S: Scalar>(
    body: &FreeBodyScalars<S>,
    q: &[S],
    qd: &[S],
    wrench: &Wrench<S>,
) -> Result<Vec<S>> {
    let (_, rot, _, omega) = split(q, qd)?;
    if !(body.mass.re() > 0.0) || body.inertia.iter().any(|i| !(i.re() > 0.0)) {
        return Err(Error::SingularMassMatrix);
    }
    let inv_m = S::one() / body.mass.clone();
    let acc = [
        wrench.force[0].clone() * inv_m.clone(),
        wrench.force[1].clone() * inv_m.clone(),
        wrench.force[2].clone() * inv_m - body.gravity.clone(),
    ];
    let torque_body = rotate_inv(&rot, &wrench.torque);
    let gyro = cross(&omega, &hadamard(&body.inertia, &omega));
    let mut out = Vec::with_capacity(6);
    out.extend(acc);
    for i in 0..3 {
        out.push((torque_body[i].clone() - gyro[i].clone()) / body.inertia[i].clone());
    }
    Ok(out)
}

pub fn kinetic_energy<S: Scalar>(body: &FreeBodyScalars<S>, qd: &[S]) -> S {
    let mut e = S::zero();
    for i in 0..3 {
        e = e + body.mass.clone() * qd[i].square() + body.inertia[i].clone() * qd[3 + i].square();
    }
    e * 0.5
}

pub fn potential_energy<S: Scalar>(body: &FreeBodyScalars<S>, q: &[S]) -> S {
    body.mass.clone() * body.gravity.clone() * q[2].clone()
}

/// World-frame angular momentum.
pub fn angular_momentum<S: Scalar>(body: &FreeBodyScalars<S>, q: &[S], qd: &[S]) -> Result<Vec3<S>> {
    let (_, rot, _, omega) = split(q, qd)?;
    Ok(rotate(&rot, &hadamard(&body.inertia, &omega)))
}
