use serde::{Deserialize, Serialize};

/// Why a local solve stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Gradient,
    Step,
    MaxIterations,
    /// No improving step found before the damping reached its cap.
    LambdaLimit,
    TimeLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartRecord {
    pub index: usize,
    pub worker: usize,
    /// Seed of the random stream that drew the start point.
    pub seed: Option<u64>,
    pub start: Vec<f64>,
    pub converged_loss: Option<f64>,
    pub iterations: usize,
    pub termination: Option<Termination>,
    /// Set when the restart failed.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    /// Parameter names, when known.
    pub names: Vec<String>,
    pub best: Vec<f64>,
    /// Loss at `best`, evaluated afresh.
    pub final_loss: f64,
    /// Loss at the first start point.
    pub initial_loss: f64,
    /// Total solver iterations over all restarts.
    pub iterations: usize,
    /// Accepted losses of the restart that produced `best`.
    pub loss_history: Vec<f64>,
    pub best_restart: Option<usize>,
    pub restarts: Vec<RestartRecord>,
}

