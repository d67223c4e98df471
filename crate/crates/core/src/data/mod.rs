//! Trajectory files, resampling, and marker-track import.

pub mod markers;
pub mod trajectory;

pub use markers::{import_double_pendulum, parse_markers, read_markers, ImportOptions, ImportedPendulum, RawMarkerFrame};
pub use trajectory::{
    read_trajectory, wrap_angle, write_trajectory, Metadata, StateKind, Trajectory, TrajectoryState,
};
