//! Multi-dimensional dual numbers for forward-mode differentiation.
//!
//! A [`Dual`] pairs a real value with the vector of its partial derivatives
//! with respect to the `K` active parameters of a problem. All arithmetic
//! propagates the whole vector at once, so a single evaluation of a function
//! with `K` seeded parameters yields its full gradient.
//!
//! The width `K` is a runtime quantity fixed per problem. Lifted constants
//! store an empty partial vector, which stands for "all zeros" and combines
//! with a dual of any width; this keeps the many constants in simulation code
//! allocation-free. Two non-empty partial vectors must have the same length.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Default)]
pub struct Dual {
    re: f64,
    eps: Vec<f64>,
}

impl Dual {
    pub fn new(re: f64, partials: Vec<f64>) -> Self {
        Dual { re, eps: partials }
    }

    pub fn constant(re: f64) -> Self {
        Dual {
            re,
            eps: Vec::new(),
        }
    }

    /// Seeds parameter `index` of `total`: real part `value`, unit partial at
    /// `index`, zeros elsewhere.
    pub fn parameter(value: f64, index: usize, total: usize) -> Result<Self> {
        if index >= total {
            return Err(Error::ParameterIndex { index, total });
        }
        let mut eps = vec![0.0; total];
        eps[index] = 1.0;
        Ok(Dual { re: value, eps })
    }

    pub fn real(&self) -> f64 {
        self.re
    }

    /// Stored partials. Empty for lifted constants.
    pub fn partials(&self) -> &[f64] {
        &self.eps
    }

    /// Partial `i`, reading zero when the value carries no derivatives.
    pub fn partial(&self, i: usize) -> f64 {
        self.eps.get(i).copied().unwrap_or(0.0)
    }

    /// Partials expanded to width `k`.
    pub fn dense_partials(&self, k: usize) -> Vec<f64> {
        if self.eps.is_empty() {
            vec![0.0; k]
        } else {
            assert_eq!(self.eps.len(), k, "partial width mismatch");
            self.eps.clone()
        }
    }

    fn scaled(mut self, re: f64, factor: f64) -> Self {
        self.re = re;
        for d in &mut self.eps {
            *d *= factor;
        }
        self
    }
}

/// `ca * a + cb * b` over partial vectors, reusing `a`'s buffer.
fn combine(mut a: Vec<f64>, ca: f64, b: &[f64], cb: f64) -> Vec<f64> {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => a,
        (false, true) => {
            if ca != 1.0 {
                a.iter_mut().for_each(|d| *d *= ca);
            }
            a
        }
        (true, false) => b.iter().map(|d| d * cb).collect(),
        (false, false) => {
            assert_eq!(
                a.len(),
                b.len(),
                "dual partial widths differ ({} vs {})",
                a.len(),
                b.len()
            );
            for (x, y) in a.iter_mut().zip(b) {
                *x = ca * *x + cb * y;
            }
            a
        }
    }
}

impl fmt::Debug for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {:?}ε", self.re, self.eps)
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, rhs: Dual) -> Dual {
        Dual {
            re: self.re + rhs.re,
            eps: combine(self.eps, 1.0, &rhs.eps, 1.0),
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, rhs: Dual) -> Dual {
        Dual {
            re: self.re - rhs.re,
            eps: combine(self.eps, 1.0, &rhs.eps, -1.0),
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, rhs: Dual) -> Dual {
        Dual {
            re: self.re * rhs.re,
            eps: combine(self.eps, rhs.re, &rhs.eps, self.re),
        }
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, rhs: Dual) -> Dual {
        let q = self.re / rhs.re;
        let inv = 1.0 / rhs.re;
        Dual {
            re: q,
            eps: combine(self.eps, inv, &rhs.eps, -q * inv),
        }
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        let re = -self.re;
        self.scaled(re, -1.0)
    }
}

impl Add<f64> for Dual {
    type Output = Dual;
    fn add(mut self, rhs: f64) -> Dual {
        self.re += rhs;
        self
    }
}

impl Sub<f64> for Dual {
    type Output = Dual;
    fn sub(mut self, rhs: f64) -> Dual {
        self.re -= rhs;
        self
    }
}

impl Mul<f64> for Dual {
    type Output = Dual;
    fn mul(self, rhs: f64) -> Dual {
        let re = self.re * rhs;
        self.scaled(re, rhs)
    }
}

impl Div<f64> for Dual {
    type Output = Dual;
    fn div(self, rhs: f64) -> Dual {
        let re = self.re / rhs;
        self.scaled(re, 1.0 / rhs)
    }
}

impl Scalar for Dual {
    fn from_f64(value: f64) -> Self {
        Dual::constant(value)
    }

    fn re(&self) -> f64 {
        self.re
    }

    fn sin(&self) -> Self {
        self.clone().scaled(self.re.sin(), self.re.cos())
    }

    fn cos(&self) -> Self {
        self.clone().scaled(self.re.cos(), -self.re.sin())
    }

    fn tan(&self) -> Self {
        let t = self.re.tan();
        self.clone().scaled(t, 1.0 + t * t)
    }

    fn atan2(&self, x: &Self) -> Self {
        let (y0, x0) = (self.re, x.re);
        let r2 = x0 * x0 + y0 * y0;
        Dual {
            re: y0.atan2(x0),
            eps: combine(self.eps.clone(), x0 / r2, &x.eps, -y0 / r2),
        }
    }

    fn exp(&self) -> Self {
        let e = self.re.exp();
        self.clone().scaled(e, e)
    }

    fn tanh(&self) -> Self {
        let t = self.re.tanh();
        self.clone().scaled(t, 1.0 - t * t)
    }

    fn abs(&self) -> Self {
        let sign = if self.re > 0.0 {
            1.0
        } else if self.re < 0.0 {
            -1.0
        } else {
            0.0
        };
        self.clone().scaled(self.re.abs(), sign)
    }

    fn sqrt(&self) -> Self {
        let s = self.re.sqrt();
        if self.eps.is_empty() {
            return Dual::constant(s);
        }
        self.clone().scaled(s, 0.5 / s)
    }

    fn ln(&self) -> Self {
        self.clone().scaled(self.re.ln(), 1.0 / self.re)
    }

    fn powf(&self, p: f64) -> Self {
        let v = self.re.powf(p);
        if p == 0.0 {
            return Dual::constant(v);
        }
        self.clone().scaled(v, p * self.re.powf(p - 1.0))
    }

    fn pow(&self, e: &Self) -> Self {
        let v = self.re.powf(e.re);
        let d_base = if self.eps.is_empty() || e.re == 0.0 {
            0.0
        } else {
            e.re * self.re.powf(e.re - 1.0)
        };
        let d_exp = if e.eps.is_empty() { 0.0 } else { v * self.re.ln() };
        Dual {
            re: v,
            eps: combine(self.eps.clone(), d_base, &e.eps, d_exp),
        }
    }

    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.eps.iter().all(|d| d.is_finite())
    }

    fn is_constant(&self) -> bool {
        self.eps.iter().all(|&d| d == 0.0)
    }
}
