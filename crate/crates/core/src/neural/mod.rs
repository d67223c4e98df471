//! Neural scalars: named points in the simulation where an analytical value
//! is augmented (or replaced) by a small network over other recorded
//! simulation variables.

mod blueprint;
mod network;
mod registry;

pub use blueprint::{
    attachment_output_dim, init_weights, parse_blueprint, Attachment, CombineMode,
    NeuralBlueprint, DEFAULT_SEED, INIT_RANGE,
};
pub use network::{mlp_forward, weight_count, Activation, NetworkSpec};
pub use registry::NeuralRegistry;
