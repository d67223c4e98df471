//! Differentiable articulated rigid-body simulation where any scalar can be
//! augmented by a neural network, with trajectory-based system identification
//! (windowed least squares, Levenberg-Marquardt, parallel basin hopping).

pub mod autodiff;
pub mod contact;
pub mod data;
pub mod dynamics;
mod dual;
mod error;
pub mod model;
pub mod neural;
pub mod scalar;
pub mod sim;
pub mod sysid;
mod text;

pub use dual::Dual;
pub use error::{Error, Result};
pub use scalar::Scalar;
