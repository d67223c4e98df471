//! Cube-versus-ground contact.
//!
//! [`compliant`] is the differentiable Hunt-Crossley model with a neural
//! friction attachment used inside the hybrid simulator. [`pgs`] is a
//! plain-`f64` velocity-level impulse stepper used only to produce target
//! trajectories.

pub mod compliant;
pub mod pgs;

use crate::dynamics::spatial::{add, cross, rotate, Vec3};
use crate::scalar::Scalar;

pub use compliant::{contact_wrench, detect_contacts, hunt_crossley_normal, neural_friction};
pub use pgs::{pgs_solve, pgs_target_step, PgsContact};

/// The contact plane normal (ground is `z = ground_height`).
pub const NORMAL: [f64; 3] = [0.0, 0.0, 1.0];

/// A cube corner at or below the ground plane.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactPoint<S> {
    /// Index into the corner ordering used by [`corners`].
    pub corner: usize,
    pub world_position: Vec3<S>,
    /// Corner position relative to the centre of mass, world frame.
    pub lever: Vec3<S>,
    /// Penetration depth, `ground - z` (never negative).
    pub depth: S,
    /// Rate of change of the depth (positive while sinking in).
    pub depth_rate: S,
    pub normal: [f64; 3],
    /// World-frame (x, y) velocity of the corner.
    pub tangential_velocity: [S; 2],
}

/// Body-frame corner offsets `(±hx, ±hy, ±hz)`, with bit 0 selecting the
/// sign of x, bit 1 of y and bit 2 of z.
pub fn corners<S: Scalar>(half_extents: &Vec3<S>) -> [Vec3<S>; 8] {
    std::array::from_fn(|i| {
        let sign = |bit: usize| if i >> bit & 1 == 0 { -1.0 } else { 1.0 };
        [
            half_extents[0].clone() * sign(0),
            half_extents[1].clone() * sign(1),
            half_extents[2].clone() * sign(2),
        ]
    })
}

/// World position, world lever arm and world velocity of every corner.
pub(crate) fn corner_kinematics<S: Scalar>(
    q: &[S],
    qd: &[S],
    half_extents: &Vec3<S>,
) -> Vec<(Vec3<S>, Vec3<S>, Vec3<S>)> {
    let pos: Vec3<S> = [q[0].clone(), q[1].clone(), q[2].clone()];
    let rot = [q[3].clone(), q[4].clone(), q[5].clone(), q[6].clone()];
    let vel: Vec3<S> = [qd[0].clone(), qd[1].clone(), qd[2].clone()];
    let omega: Vec3<S> = [qd[3].clone(), qd[4].clone(), qd[5].clone()];
    corners(half_extents)
        .iter()
        .map(|c| {
            let lever = rotate(&rot, c);
            let v = add(&vel, &rotate(&rot, &cross(&omega, c)));
            (add(&pos, &lever), lever, v)
        })
        .collect()
}
