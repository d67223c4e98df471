//! Gradient and Jacobian drivers on top of [`Dual`].

use nalgebra::DMatrix;

use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A scalar-valued function evaluable under any [`Scalar`].
pub trait ScalarFunction {
    fn dim(&self) -> usize;
    fn eval<S: Scalar>(&self, x: &[S]) -> Result<S>;
}

/// A vector-valued function evaluable under any [`Scalar`].
pub trait VectorFunction {
    fn dim(&self) -> usize;
    fn eval<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>>;
}

pub fn make_parameter(value: f64, index: usize, total: usize) -> Result<Dual> {
    Dual::parameter(value, index, total)
}

/// Seeds every coordinate of `point` as its own parameter.
pub fn seed(point: &[f64]) -> Vec<Dual> {
    let n = point.len();
    point
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut eps = vec![0.0; n];
            eps[i] = 1.0;
            Dual::new(v, eps)
        })
        .collect()
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::Dimension(format!(
            "function takes {expected} parameters, point has {got}"
        )));
    }
    Ok(())
}

/// Value and gradient of `f` at `point` from one dual evaluation.
pub fn value_and_gradient<F: ScalarFunction + ?Sized>(
    f: &F,
    point: &[f64],
) -> Result<(f64, Vec<f64>)> {
    check_dim(f.dim(), point.len())?;
    let y = f.eval(&seed(point))?;
    Ok((y.real(), y.dense_partials(point.len())))
}

pub fn gradient<F: ScalarFunction + ?Sized>(f: &F, point: &[f64]) -> Result<Vec<f64>> {
    value_and_gradient(f, point).map(|(_, g)| g)
}

/// Residual values and the `m x n` Jacobian; row `i` holds the partials of
/// residual `i`.
pub fn values_and_jacobian<F: VectorFunction + ?Sized>(
    f: &F,
    point: &[f64],
) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = point.len();
    check_dim(f.dim(), n)?;
    let out = f.eval(&seed(point))?;
    let mut jac = DMatrix::zeros(out.len(), n);
    let mut values = Vec::with_capacity(out.len());
    for (i, r) in out.iter().enumerate() {
        values.push(r.real());
        for (j, &d) in r.partials().iter().enumerate() {
            jac[(i, j)] = d;
        }
    }
    Ok((values, jac))
}

pub fn jacobian<F: VectorFunction + ?Sized>(f: &F, point: &[f64]) -> Result<DMatrix<f64>> {
    values_and_jacobian(f, point).map(|(_, j)| j)
}
