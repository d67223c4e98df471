//! System identification: the windowed least-squares objective,
//! Levenberg-Marquardt on dual-number Jacobians, and parallel basin hopping.

pub mod lma;
pub mod objective;
pub mod params;
pub mod pbh;
pub mod report;

pub use lma::{lma_minimize, lma_solve, LmaOptions, LmaOutcome};
pub use objective::{ObjectiveConfig, Problem};
pub use params::{project, ParamEntry, ParameterVector};
pub use pbh::{pbh_search, restart_seed, PbhOptions};
pub use report::{RestartRecord, SolveReport, Termination};
