//! Velocity-level contact impulses by projected Gauss-Seidel. Plain `f64`
//! only; this stepper mints target data and is never differentiated.
//!
//! Every cube corner is a constraint row. A corner above the ground is
//! speculative: its normal velocity may not exceed closing the gap within one
//! step. A penetrating corner is pushed out with Baumgarte bias `beta δ / dt`.
//! Friction is a box, clamped independently along x and y to `mu λ_n`.

use super::corner_kinematics;
use crate::dynamics::spatial::{add, cross, dot, hadamard, rotate, rotate_inv, scale_f, Vec3};
use crate::dynamics::{advance_positions, State};
use crate::error::{Error, Result};
use crate::model::{FreeBodyScalars, PgsParams};

/// One constraint point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PgsContact {
    /// Point relative to the centre of mass, world frame.
    pub lever: Vec3<f64>,
    /// Height above the ground; negative when penetrating.
    pub gap: f64,
}

/// Rigid body as seen by the solver: world-frame velocities and the inverse
/// inertia in body frame together with the orientation.
#[derive(Debug, Clone, Copy)]
pub struct PgsBody {
    pub inv_mass: f64,
    pub inv_inertia: Vec3<f64>,
    pub orientation: [f64; 4],
    pub velocity: Vec3<f64>,
    pub omega: Vec3<f64>,
}

impl PgsBody {
    fn inv_inertia_world(&self, x: &Vec3<f64>) -> Vec3<f64> {
        rotate(
            &self.orientation,
            &hadamard(&self.inv_inertia, &rotate_inv(&self.orientation, x)),
        )
    }

    fn point_velocity(&self, lever: &Vec3<f64>) -> Vec3<f64> {
        add(&self.velocity, &cross(&self.omega, lever))
    }

    fn apply(&mut self, lever: &Vec3<f64>, dir: &Vec3<f64>, impulse: f64) {
        self.velocity = add(&self.velocity, &scale_f(dir, impulse * self.inv_mass));
        let ang = self.inv_inertia_world(&cross(lever, dir));
        self.omega = add(&self.omega, &scale_f(&ang, impulse));
    }

    fn effective_inv_mass(&self, lever: &Vec3<f64>, dir: &Vec3<f64>) -> f64 {
        let rn = cross(lever, dir);
        self.inv_mass + dot(&rn, &self.inv_inertia_world(&rn))
    }
}

const AXES: [Vec3<f64>; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

/// Runs PGS in place on `body` and returns the accumulated impulses per
/// contact as `[t_x, t_y, n]`.
pub fn pgs_solve(
    body: &mut PgsBody,
    contacts: &[PgsContact],
    params: &PgsParams,
    dt: f64,
) -> Result<Vec<[f64; 3]>> {
    if params.iterations == 0 {
        return Err(Error::Config("PGS needs at least one iteration".into()));
    }
    if !(dt > 0.0) {
        return Err(Error::Config(format!("time step must be positive, got {dt}")));
    }
    let rows: Vec<([f64; 3], f64)> = contacts
        .iter()
        .map(|c| {
            let k = AXES.map(|d| {
                let m = body.effective_inv_mass(&c.lever, &d);
                if m > 0.0 { 1.0 / m } else { 0.0 }
            });
            let target = if c.gap >= 0.0 { -c.gap / dt } else { -params.beta * c.gap / dt };
            (k, target)
        })
        .collect();
    let mut lambda = vec![[0.0; 3]; contacts.len()];
    for _ in 0..params.iterations {
        for ((c, (k, target)), acc) in contacts.iter().zip(&rows).zip(lambda.iter_mut()) {
            let vn = body.point_velocity(&c.lever)[2];
            let next = (acc[2] + (target - vn) * k[2]).max(0.0);
            body.apply(&c.lever, &AXES[2], next - acc[2]);
            acc[2] = next;

            let bound = params.mu * acc[2];
            for t in 0..2 {
                let vt = body.point_velocity(&c.lever)[t];
                let next = (acc[t] - vt * k[t]).clamp(-bound, bound);
                body.apply(&c.lever, &AXES[t], next - acc[t]);
                acc[t] = next;
            }
        }
    }
    if !body.velocity.iter().chain(&body.omega).all(|v| v.is_finite()) {
        return Err(Error::NonFinite("velocity after contact impulses".into()));
    }
    Ok(lambda)
}

/// One step of the target stepper: gravity and gyroscopic terms explicitly,
/// contact impulses by PGS over all eight corners, then the semi-implicit
/// position update.
pub fn pgs_target_step(
    body: &FreeBodyScalars<f64>,
    params: &PgsParams,
    ground_height: f64,
    state: &State<f64>,
    dt: f64,
) -> Result<State<f64>> {
    if state.q.len() != 7 || state.qd.len() != 6 {
        return Err(Error::Dimension("PGS stepper needs a free-body state".into()));
    }
    if !(body.mass > 0.0) || body.inertia.iter().any(|i| !(*i > 0.0)) {
        return Err(Error::SingularMassMatrix);
    }
    let orientation = [state.q[3], state.q[4], state.q[5], state.q[6]];
    let omega_b = [state.qd[3], state.qd[4], state.qd[5]];
    let gyro = cross(&omega_b, &hadamard(&body.inertia, &omega_b));
    let omega_b: Vec3<f64> = std::array::from_fn(|i| omega_b[i] - dt * gyro[i] / body.inertia[i]);
    let mut solver = PgsBody {
        inv_mass: 1.0 / body.mass,
        inv_inertia: body.inertia.map(|i| 1.0 / i),
        orientation,
        velocity: [state.qd[0], state.qd[1], state.qd[2] - body.gravity * dt],
        omega: rotate(&orientation, &omega_b),
    };
    let contacts: Vec<PgsContact> = corner_kinematics(&state.q, &state.qd, &body.half_extents)
        .into_iter()
        .map(|(p, lever, _)| PgsContact {
            lever,
            gap: p[2] - ground_height,
        })
        .collect();
    pgs_solve(&mut solver, &contacts, params, dt)?;
    let omega_b = rotate_inv(&orientation, &solver.omega);
    let qd = vec![
        solver.velocity[0],
        solver.velocity[1],
        solver.velocity[2],
        omega_b[0],
        omega_b[1],
        omega_b[2],
    ];
    let q = advance_positions(false, &state.q, &qd, dt);
    let next = State { q, qd };
    if !next.is_finite() {
        return Err(Error::NonFinite("state after contact step".into()));
    }
    Ok(next)
}
