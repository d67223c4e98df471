//! Planar serial chains of revolute joints in minimal coordinates.
//!
//! Joint angles are relative to the parent link; zero hangs straight down.
//! Gravity acts along -y. Link `i` has its joint at `o_i`, its centre of mass
//! at `o_i + com_i * u_i` and the next joint at `o_i + length_i * u_i`, where
//! `u_i = (sin phi_i, -cos phi_i)` and `phi_i` is the absolute link angle.

use crate::error::{Error, Result};
use crate::model::ChainScalars;
use crate::scalar::Scalar;

type P2<S> = [S; 2];

fn cross2<S: Scalar>(a: &P2<S>, b: &P2<S>) -> S {
    a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone()
}

fn dot2<S: Scalar>(a: &P2<S>, b: &P2<S>) -> S {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone()
}

pub(crate) struct Geometry<S> {
    /// Absolute angle of each link.
    pub phi: Vec<S>,
    /// Unit vector along each link, joint to tip.
    pub axis: Vec<P2<S>>,
    /// Joint positions.
    pub joint: Vec<P2<S>>,
    /// Centre-of-mass positions.
    pub com: Vec<P2<S>>,
}

pub(crate) fn geometry<S: Scalar>(chain: &ChainScalars<S>, q: &[S]) -> Geometry<S> {
    let n = chain.links.len();
    let mut g = Geometry {
        phi: Vec::with_capacity(n),
        axis: Vec::with_capacity(n),
        joint: Vec::with_capacity(n),
        com: Vec::with_capacity(n),
    };
    let mut phi = S::zero();
    let mut origin: P2<S> = [S::zero(), S::zero()];
    for (link, qi) in chain.links.iter().zip(q) {
        phi = phi + qi.clone();
        let u = [phi.sin(), -phi.cos()];
        let com = [
            origin[0].clone() + link.com.clone() * u[0].clone(),
            origin[1].clone() + link.com.clone() * u[1].clone(),
        ];
        let next = [
            origin[0].clone() + link.length.clone() * u[0].clone(),
            origin[1].clone() + link.length.clone() * u[1].clone(),
        ];
        g.phi.push(phi.clone());
        g.axis.push(u);
        g.joint.push(origin);
        g.com.push(com);
        origin = next;
    }
    g
}

fn check_dims<S: Scalar>(chain: &ChainScalars<S>, q: &[S], qd: Option<&[S]>) -> Result<()> {
    let n = chain.links.len();
    if q.len() != n || qd.is_some_and(|v| v.len() != n) {
        return Err(Error::Dimension(format!(
            "chain has {n} joints, state has {} positions",
            q.len()
        )));
    }
    Ok(())
}

/// Joint-space inertia by composite rigid bodies.
///
/// For `i <= j`, `M_ij = sum_{k >= j} I_k + m_k (p_k - o_i).(p_k - o_j)`,
/// accumulated from the tip as composite mass, first and second moments.
pub fn mass_matrix<S: Scalar>(chain: &ChainScalars<S>, q: &[S]) -> Result<Vec<Vec<S>>> {
    check_dims(chain, q, None)?;
    let n = chain.links.len();
    let g = geometry(chain, q);

    let mut c_mass = vec![S::zero(); n];
    let mut c_first: Vec<P2<S>> = vec![[S::zero(), S::zero()]; n];
    let mut c_second = vec![S::zero(); n];
    let (mut m_acc, mut h_acc, mut s_acc) = (S::zero(), [S::zero(), S::zero()], S::zero());
    for k in (0..n).rev() {
        let link = &chain.links[k];
        let p = &g.com[k];
        m_acc = m_acc + link.mass.clone();
        h_acc = [
            h_acc[0].clone() + link.mass.clone() * p[0].clone(),
            h_acc[1].clone() + link.mass.clone() * p[1].clone(),
        ];
        s_acc = s_acc + link.inertia.clone() + link.mass.clone() * dot2(p, p);
        c_mass[k] = m_acc.clone();
        c_first[k] = h_acc.clone();
        c_second[k] = s_acc.clone();
    }

    let mut m = vec![vec![S::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let oi = &g.joint[i];
            let oj = &g.joint[j];
            let sum_o = [oi[0].clone() + oj[0].clone(), oi[1].clone() + oj[1].clone()];
            let v = c_second[j].clone() - dot2(&sum_o, &c_first[j])
                + c_mass[j].clone() * dot2(oi, oj);
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("mass matrix entry ({i}, {j})")));
            }
            m[i][j] = v.clone();
            m[j][i] = v;
        }
    }
    Ok(m)
}

/// Recursive Newton-Euler inverse dynamics without damping: the generalized
/// force that produces `qdd` at `(q, qd)` under gravity.
pub fn inverse_dynamics<S: Scalar>(
    chain: &ChainScalars<S>,
    q: &[S],
    qd: &[S],
    qdd: &[S],
) -> Result<Vec<S>> {
    check_dims(chain, q, Some(qd))?;
    let n = chain.links.len();
    let g = geometry(chain, q);

    // Gravity enters as an upward acceleration of the base.
    let mut acc_origin: P2<S> = [S::zero(), chain.gravity.clone()];
    let mut omega = S::zero();
    let mut alpha = S::zero();
    let mut com_force: Vec<P2<S>> = Vec::with_capacity(n);
    let mut alphas = Vec::with_capacity(n);
    for i in 0..n {
        let link = &chain.links[i];
        omega = omega + qd[i].clone();
        alpha = alpha + qdd[i].clone();
        let u = &g.axis[i];
        let normal = [-u[1].clone(), u[0].clone()];
        let w2 = omega.square();
        // acceleration of a point at unit distance along the link, relative to the joint
        let rel = [
            alpha.clone() * normal[0].clone() - w2.clone() * u[0].clone(),
            alpha.clone() * normal[1].clone() - w2.clone() * u[1].clone(),
        ];
        let acc_com = [
            acc_origin[0].clone() + link.com.clone() * rel[0].clone(),
            acc_origin[1].clone() + link.com.clone() * rel[1].clone(),
        ];
        com_force.push([
            link.mass.clone() * acc_com[0].clone(),
            link.mass.clone() * acc_com[1].clone(),
        ]);
        alphas.push(alpha.clone());
        acc_origin = [
            acc_origin[0].clone() + link.length.clone() * rel[0].clone(),
            acc_origin[1].clone() + link.length.clone() * rel[1].clone(),
        ];
    }

    let mut tau = vec![S::zero(); n];
    let mut child_force: P2<S> = [S::zero(), S::zero()];
    let mut child_torque = S::zero();
    for i in (0..n).rev() {
        let link = &chain.links[i];
        let u = &g.axis[i];
        let r_com = [link.com.clone() * u[0].clone(), link.com.clone() * u[1].clone()];
        let r_next = [link.length.clone() * u[0].clone(), link.length.clone() * u[1].clone()];
        let torque = link.inertia.clone() * alphas[i].clone()
            + cross2(&r_com, &com_force[i])
            + cross2(&r_next, &child_force)
            + child_torque;
        child_force = [
            com_force[i][0].clone() + child_force[0].clone(),
            com_force[i][1].clone() + child_force[1].clone(),
        ];
        tau[i] = torque.clone();
        child_torque = torque;
    }
    Ok(tau)
}

/// Coriolis, centrifugal, gravity and viscous damping terms, with the
/// per-joint damping coefficients supplied explicitly.
pub fn bias_forces_with_damping<S: Scalar>(
    chain: &ChainScalars<S>,
    q: &[S],
    qd: &[S],
    damping: &[S],
) -> Result<Vec<S>> {
    let zero = vec![S::zero(); q.len()];
    let mut bias = inverse_dynamics(chain, q, qd, &zero)?;
    for ((b, d), v) in bias.iter_mut().zip(damping).zip(qd) {
        *b = b.clone() + d.clone() * v.clone();
    }
    if let Some(i) = bias.iter().position(|b| !b.is_finite()) {
        return Err(Error::NonFinite(format!("bias force at joint {i}")));
    }
    Ok(bias)
}

pub fn bias_forces<S: Scalar>(chain: &ChainScalars<S>, q: &[S], qd: &[S]) -> Result<Vec<S>> {
    let damping: Vec<S> = chain.links.iter().map(|l| l.damping.clone()).collect();
    bias_forces_with_damping(chain, q, qd, &damping)
}

/// Solves `M x = b` for symmetric positive-definite `M` by Cholesky.
pub fn cholesky_solve<S: Scalar>(m: &[Vec<S>], b: &[S]) -> Result<Vec<S>> {
    let n = b.len();
    let mut l = vec![vec![S::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = m[i][j].clone();
            for k in 0..j {
                sum = sum - l[i][k].clone() * l[j][k].clone();
            }
            if i == j {
                if !(sum.re() > 0.0) {
                    return Err(Error::SingularMassMatrix);
                }
                l[i][i] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j].clone();
            }
        }
    }
    let mut y = vec![S::zero(); n];
    for i in 0..n {
        let mut sum = b[i].clone();
        for k in 0..i {
            sum = sum - l[i][k].clone() * y[k].clone();
        }
        y[i] = sum / l[i][i].clone();
    }
    let mut x = vec![S::zero(); n];
    for i in (0..n).rev() {
        let mut sum = y[i].clone();
        for k in i + 1..n {
            sum = sum - l[k][i].clone() * x[k].clone();
        }
        x[i] = sum / l[i][i].clone();
    }
    Ok(x)
}

/// `qdd = M^-1 (tau - bias)` with explicit damping.
pub fn forward_dynamics_with_damping<S: Scalar>(
    chain: &ChainScalars<S>,
    q: &[S],
    qd: &[S],
    tau: &[S],
    damping: &[S],
) -> Result<Vec<S>> {
    if tau.len() != q.len() {
        return Err(Error::Dimension(format!(
            "{} joint torques for {} joints",
            tau.len(),
            q.len()
        )));
    }
    let m = mass_matrix(chain, q)?;
    let bias = bias_forces_with_damping(chain, q, qd, damping)?;
    let rhs: Vec<S> = tau.iter().zip(bias).map(|(t, b)| t.clone() - b).collect();
    cholesky_solve(&m, &rhs)
}

pub fn kinetic_energy<S: Scalar>(chain: &ChainScalars<S>, q: &[S], qd: &[S]) -> Result<S> {
    let m = mass_matrix(chain, q)?;
    let mut e = S::zero();
    for (i, row) in m.iter().enumerate() {
        for (j, mij) in row.iter().enumerate() {
            e = e + mij.clone() * qd[i].clone() * qd[j].clone();
        }
    }
    Ok(e * 0.5)
}

/// Gravitational potential with the first joint at height zero.
pub fn potential_energy<S: Scalar>(chain: &ChainScalars<S>, q: &[S]) -> S {
    let g = geometry(chain, q);
    let mut e = S::zero();
    for (link, p) in chain.links.iter().zip(&g.com) {
        e = e + link.mass.clone() * chain.gravity.clone() * p[1].clone();
    }
    e
}

/// Positions of every joint followed by the chain tip, for plotting.
pub fn joint_positions<S: Scalar>(chain: &ChainScalars<S>, q: &[S]) -> Vec<[f64; 2]> {
    let g = geometry(chain, q);
    let mut out: Vec<[f64; 2]> = g.joint.iter().map(|p| [p[0].re(), p[1].re()]).collect();
    if let (Some(last), Some(u), Some(link)) = (g.joint.last(), g.axis.last(), chain.links.last()) {
        out.push([
            last[0].re() + link.length.re() * u[0].re(),
            last[1].re() + link.length.re() * u[1].re(),
        ]);
    }
    out
}
