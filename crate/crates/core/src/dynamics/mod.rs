//! Forward dynamics and semi-implicit Euler integration for planar revolute
//! chains and a free-floating rigid body, generic over [`Scalar`].

pub mod chain;
pub mod free_body;
pub mod spatial;

use crate::error::{Error, Result};
use crate::model::{BodyScalars, ModelScalars};
use crate::scalar::Scalar;

pub use free_body::Wrench;

/// Generalized positions and velocities.
#[derive(Debug, Clone, PartialEq)]
pub struct State<S> {
    pub q: Vec<S>,
    pub qd: Vec<S>,
}

impl<S: Scalar> State<S> {
    pub fn lift(q: &[f64], qd: &[f64]) -> Self {
        State {
            q: crate::scalar::lift(q),
            qd: crate::scalar::lift(qd),
        }
    }

    pub fn real(&self) -> State<f64> {
        State {
            q: crate::scalar::real_parts(&self.q),
            qd: crate::scalar::real_parts(&self.qd),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.q.iter().chain(&self.qd).all(Scalar::is_finite)
    }
}

fn check_state<S: Scalar>(model: &ModelScalars<S>, q: &[S], qd: &[S]) -> Result<()> {
    let (nq, nv) = match &model.body {
        BodyScalars::Chain(c) => (c.links.len(), c.links.len()),
        BodyScalars::FreeBody(_) => (7, 6),
    };
    if q.len() != nq || qd.len() != nv {
        return Err(Error::Dimension(format!(
            "model expects {nq} positions and {nv} velocities, got {} and {}",
            q.len(),
            qd.len()
        )));
    }
    Ok(())
}

/// Symmetric positive-definite generalized inertia.
pub fn mass_matrix<S: Scalar>(model: &ModelScalars<S>, q: &[S]) -> Result<Vec<Vec<S>>> {
    match &model.body {
        BodyScalars::Chain(c) => chain::mass_matrix(c, q),
        BodyScalars::FreeBody(b) => {
            if q.len() != 7 {
                return Err(Error::Dimension(format!("free body has 7 positions, got {}", q.len())));
            }
            let m = free_body::mass_matrix(b);
            if m.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("mass matrix".into()));
            }
            Ok(m)
        }
    }
}

/// Generalized bias such that `M qdd + bias = tau_external`.
pub fn bias_forces<S: Scalar>(model: &ModelScalars<S>, q: &[S], qd: &[S]) -> Result<Vec<S>> {
    check_state(model, q, qd)?;
    match &model.body {
        BodyScalars::Chain(c) => chain::bias_forces(c, q, qd),
        BodyScalars::FreeBody(b) => {
            let bias = free_body::bias_forces(b, qd);
            if bias.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("bias forces".into()));
            }
            Ok(bias)
        }
    }
}

/// Generalized accelerations. Chains take joint torques `tau`; the free
/// body takes an external world-frame wrench (and ignores `tau`).
pub fn forward_dynamics<S: Scalar>(
    model: &ModelScalars<S>,
    q: &[S],
    qd: &[S],
    tau: &[S],
    wrench: Option<&Wrench<S>>,
) -> Result<Vec<S>> {
    check_state(model, q, qd)?;
    match &model.body {
        BodyScalars::Chain(c) => {
            let damping: Vec<S> = c.links.iter().map(|l| l.damping.clone()).collect();
            chain::forward_dynamics_with_damping(c, q, qd, tau, &damping)
        }
        BodyScalars::FreeBody(b) => match wrench {
            Some(w) => free_body::forward_dynamics(b, q, qd, w),
            None => free_body::forward_dynamics(b, q, qd, &Wrench::zero()),
        },
    }
}

/// Semi-implicit Euler: velocities first, then positions from the new
/// velocities. Free-body orientation is advanced by the exponential map of
/// the body angular velocity and renormalized.
pub fn integrate_step<S: Scalar>(
    model: &ModelScalars<S>,
    state: &State<S>,
    qdd: &[S],
    dt: f64,
) -> Result<State<S>> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Config(format!("time step must be positive, got {dt}")));
    }
    check_state(model, &state.q, &state.qd)?;
    if qdd.len() != state.qd.len() {
        return Err(Error::Dimension(format!(
            "{} accelerations for {} velocities",
            qdd.len(),
            state.qd.len()
        )));
    }
    let qd: Vec<S> = state
        .qd
        .iter()
        .zip(qdd)
        .map(|(v, a)| v.clone() + a.clone() * dt)
        .collect();
    let q = advance_positions(model.is_chain(), &state.q, &qd, dt);
    let out = State { q, qd };
    if !out.is_finite() {
        return Err(Error::NonFinite("state after integration".into()));
    }
    Ok(out)
}

/// Position half of the semi-implicit step, using the already updated
/// velocities `qd`.
pub(crate) fn advance_positions<S: Scalar>(is_chain: bool, q: &[S], qd: &[S], dt: f64) -> Vec<S> {
    if is_chain {
        return q.iter().zip(qd).map(|(p, v)| p.clone() + v.clone() * dt).collect();
    }
    let mut out = Vec::with_capacity(7);
    for i in 0..3 {
        out.push(q[i].clone() + qd[i].clone() * dt);
    }
    let rot = [q[3].clone(), q[4].clone(), q[5].clone(), q[6].clone()];
    let phi = [qd[3].clone() * dt, qd[4].clone() * dt, qd[5].clone() * dt];
    out.extend(spatial::normalize_quat(&spatial::quat_mul(&rot, &spatial::quat_exp(&phi))));
    out
}

/// Kinetic plus gravitational potential energy. The potential is zero with
/// the chain's first joint, or the body's centre of mass, at height zero.
pub fn total_energy<S: Scalar>(model: &ModelScalars<S>, state: &State<S>) -> Result<S> {
    check_state(model, &state.q, &state.qd)?;
    match &model.body {
        BodyScalars::Chain(c) => Ok(chain::kinetic_energy(c, &state.q, &state.qd)?
            + chain::potential_energy(c, &state.q)),
        BodyScalars::FreeBody(b) => Ok(free_body::kinetic_energy(b, &state.qd)
            + free_body::potential_energy(b, &state.q)),
    }
}
