//! Scalar-generic 3-vectors and unit quaternions (`[w, x, y, z]`).

use crate::scalar::Scalar;

pub type Vec3<S> = [S; 3];
pub type Quat<S> = [S; 4];

pub fn v3<S: Scalar>(x: f64, y: f64, z: f64) -> Vec3<S> {
    [S::from_f64(x), S::from_f64(y), S::from_f64(z)]
}

pub fn add<S: Scalar>(a: &Vec3<S>, b: &Vec3<S>) -> Vec3<S> {
    [
        a[0].clone() + b[0].clone(),
        a[1].clone() + b[1].clone(),
        a[2].clone() + b[2].clone(),
    ]
}

pub fn sub<S: Scalar>(a: &Vec3<S>, b: &Vec3<S>) -> Vec3<S> {
    [
        a[0].clone() - b[0].clone(),
        a[1].clone() - b[1].clone(),
        a[2].clone() - b[2].clone(),
    ]
}

pub fn scale<S: Scalar>(a: &Vec3<S>, s: &S) -> Vec3<S> {
    [
        a[0].clone() * s.clone(),
        a[1].clone() * s.clone(),
        a[2].clone() * s.clone(),
    ]
}

pub fn scale_f<S: Scalar>(a: &Vec3<S>, s: f64) -> Vec3<S> {
    [a[0].clone() * s, a[1].clone() * s, a[2].clone() * s]
}

pub fn dot<S: Scalar>(a: &Vec3<S>, b: &Vec3<S>) -> S {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone() + a[2].clone() * b[2].clone()
}

pub fn cross<S: Scalar>(a: &Vec3<S>, b: &Vec3<S>) -> Vec3<S> {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

/// Element-wise product, e.g. a diagonal inertia times a vector.
pub fn hadamard<S: Scalar>(a: &Vec3<S>, b: &Vec3<S>) -> Vec3<S> {
    [
        a[0].clone() * b[0].clone(),
        a[1].clone() * b[1].clone(),
        a[2].clone() * b[2].clone(),
    ]
}

pub fn quat_mul<S: Scalar>(a: &Quat<S>, b: &Quat<S>) -> Quat<S> {
    let [aw, ax, ay, az] = a.clone();
    let [bw, bx, by, bz] = b.clone();
    [
        aw.clone() * bw.clone() - ax.clone() * bx.clone() - ay.clone() * by.clone()
            - az.clone() * bz.clone(),
        aw.clone() * bx.clone() + ax.clone() * bw.clone() + ay.clone() * bz.clone()
            - az.clone() * by.clone(),
        aw.clone() * by.clone() - ax.clone() * bz.clone() + ay.clone() * bw.clone()
            + az.clone() * bx.clone(),
        aw * bz + ax * by - ay * bx + az * bw,
    ]
}

/// Rotates body-frame `v` into the world frame.
pub fn rotate<S: Scalar>(q: &Quat<S>, v: &Vec3<S>) -> Vec3<S> {
    // v + 2 w (u x v) + 2 u x (u x v), u = vector part
    let u: Vec3<S> = [q[1].clone(), q[2].clone(), q[3].clone()];
    let t = scale_f(&cross(&u, v), 2.0);
    add(&add(v, &scale(&t, &q[0])), &cross(&u, &t))
}

/// Rotates world-frame `v` into the body frame.
pub fn rotate_inv<S: Scalar>(q: &Quat<S>, v: &Vec3<S>) -> Vec3<S> {
    let conj = [q[0].clone(), -q[1].clone(), -q[2].clone(), -q[3].clone()];
    rotate(&conj, v)
}

pub fn quat_norm<S: Scalar>(q: &Quat<S>) -> S {
    (q[0].square() + q[1].square() + q[2].square() + q[3].square()).sqrt()
}

pub fn normalize_quat<S: Scalar>(q: &Quat<S>) -> Quat<S> {
    let n = quat_norm(q);
    [
        q[0].clone() / n.clone(),
        q[1].clone() / n.clone(),
        q[2].clone() / n.clone(),
        q[3].clone() / n,
    ]
}

/// `exp(phi / 2)` as a unit quaternion for a rotation vector `phi`.
/// Small angles use the Taylor series so the derivative stays finite at zero.
pub fn quat_exp<S: Scalar>(phi: &Vec3<S>) -> Quat<S> {
    let theta2 = dot(phi, phi);
    let (w, s) = if theta2.re() < 1e-8 {
        let t4 = theta2.square();
        (
            S::one() - theta2.clone() / 8.0 + t4.clone() / 384.0,
            S::from_f64(0.5) - theta2 / 48.0 + t4 / 3840.0,
        )
    } else {
        let theta = theta2.sqrt();
        let half = theta.clone() * 0.5;
        (half.cos(), half.sin() / theta)
    };
    [w, phi[0].clone() * s.clone(), phi[1].clone() * s.clone(), phi[2].clone() * s]
}
