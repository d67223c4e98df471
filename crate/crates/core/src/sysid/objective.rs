use serde::{Deserialize, Serialize};

use super::params::ParameterVector;
use crate::autodiff::{seed, VectorFunction};
use crate::data::Trajectory;
use crate::dual::Dual;
use crate::dynamics::State;
use crate::error::{Error, Result};
use crate::model::MultiBodyModel;
use crate::neural::NeuralBlueprint;
use crate::scalar::Scalar;
use crate::sim::simulate;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ObjectiveConfig {
    /// `R` in `R ‖θ_NN‖²`.
    pub regularization: f64,
    /// Steps per window. Windows longer than the data shrink to a single
    /// full-horizon window.
    pub window: usize,
    /// Residual weight of every position dimension.
    pub position_weight: f64,
    /// Residual weight of every velocity dimension.
    pub velocity_weight: f64,
    /// Explicit per-dimension weights (`q` then `qd`); overrides the two
    /// above when set.
    pub state_weights: Option<Vec<f64>>,
    /// Integration steps per target sample.
    pub substeps: usize,
}

impl Default for ObjectiveConfig {
    fn default() -> Self {
        ObjectiveConfig {
            regularization: 0.0,
            window: 10,
            position_weight: 1.0,
            velocity_weight: 0.1,
            state_weights: None,
            substeps: 1,
        }
    }
}

impl ObjectiveConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window == 0 {
            return Err(Error::Config("window length must be at least 1".into()));
        }
        if self.substeps == 0 {
            return Err(Error::Config("substeps must be at least 1".into()));
        }
        if !(self.regularization >= 0.0) || !self.regularization.is_finite() {
            return Err(Error::Config("regularization must be a non-negative number".into()));
        }
        let weights: Vec<f64> = match &self.state_weights {
            Some(w) => w.clone(),
            None => vec![self.position_weight, self.velocity_weight],
        };
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::Config("state weights must be non-negative".into()));
        }
        if weights.iter().all(|w| *w == 0.0) {
            return Err(Error::Config("state weights are all zero".into()));
        }
        Ok(())
    }
}

/// Windowed multiple-shooting least squares over a target trajectory.
///
/// Window `j` starts at the observed state `s*_{jW}` and predicts the next
/// `W` states; each prediction contributes the weighted state error. Network
/// weights add `√R θ_NN` at the end so `‖r‖² = loss`.
#[derive(Debug, Clone)]
pub struct Problem {
    model: MultiBodyModel,
    blueprint: NeuralBlueprint,
    target: Trajectory,
    config: ObjectiveConfig,
    layout: ParameterVector,
    weights: Vec<f64>,
    window: usize,
    windows: usize,
}

impl Problem {
    pub fn new(
        model: MultiBodyModel,
        blueprint: NeuralBlueprint,
        target: Trajectory,
        config: ObjectiveConfig,
    ) -> Result<Self> {
        config.validate()?;
        model.validate()?;
        if target.len() < 2 {
            return Err(Error::Trajectory("target needs at least 2 states".into()));
        }
        if target.q_dim() != model.q_dim() || target.qd_dim() != model.dof() {
            return Err(Error::Dimension(format!(
                "target has {}+{} dimensions, model needs {}+{}",
                target.q_dim(),
                target.qd_dim(),
                model.q_dim(),
                model.dof()
            )));
        }
        let dims = model.q_dim() + model.dof();
        let weights = match &config.state_weights {
            Some(w) if w.len() != dims => {
                return Err(Error::Config(format!(
                    "state_weights has {} entries, state has {dims} dimensions",
                    w.len()
                )))
            }
            Some(w) => w.clone(),
            None => (0..dims)
                .map(|i| {
                    if i < model.q_dim() {
                        config.position_weight
                    } else {
                        config.velocity_weight
                    }
                })
                .collect(),
        };
        let window = config.window.min(target.len() - 1);
        let windows = (target.len() - 1) / window;
        let layout = ParameterVector::from_problem(&model, &blueprint);
        Ok(Problem {
            model,
            blueprint,
            target,
            config,
            layout,
            weights,
            window,
            windows,
        })
    }

    pub fn layout(&self) -> &ParameterVector {
        &self.layout
    }

    pub fn config(&self) -> &ObjectiveConfig {
        &self.config
    }

    pub fn target(&self) -> &Trajectory {
        &self.target
    }

    pub fn model(&self) -> &MultiBodyModel {
        &self.model
    }

    pub fn blueprint(&self) -> &NeuralBlueprint {
        &self.blueprint
    }

    /// Effective window length.
    pub fn window(&self) -> usize {
        self.window
    }

    pub fn num_windows(&self) -> usize {
        self.windows
    }

    pub fn state_dim(&self) -> usize {
        self.weights.len()
    }

    pub fn num_residuals(&self) -> usize {
        self.windows * self.window * self.state_dim() + self.layout.num_network()
    }

    /// θ from the model's current free values and the blueprint weights.
    pub fn initial(&self) -> Vec<f64> {
        self.layout.values.clone()
    }

    pub fn bounds(&self) -> Vec<Option<(f64, f64)>> {
        self.layout.bounds()
    }

    /// Model and blueprint with `theta` written back.
    pub fn apply(&self, theta: &[f64]) -> Result<(MultiBodyModel, NeuralBlueprint)> {
        self.layout.check(theta)?;
        let mut model = self.model.clone();
        model.set_free_values(self.layout.model_part(theta))?;
        let mut blueprint = self.blueprint.clone();
        blueprint.set_weights(self.layout.network_part(theta).to_vec())?;
        Ok((model, blueprint))
    }

    /// Predicted states per window (each `W + 1` long, starting with the
    /// anchor).
    pub fn predictions<S: Scalar>(&self, theta: &[S]) -> Result<Vec<Vec<State<S>>>> {
        if theta.len() != self.layout.len() {
            return Err(Error::Dimension(format!(
                "parameter vector has {} entries, layout expects {}",
                theta.len(),
                self.layout.len()
            )));
        }
        let n_am = self.layout.num_model();
        let model = self.model.instantiate(&theta[..n_am])?;
        let nn = &theta[n_am..];
        let states = self.target.states();
        let mut out = Vec::with_capacity(self.windows);
        for j in 0..self.windows {
            let anchor = &states[j * self.window];
            let s0 = State::lift(&anchor.q, &anchor.qd);
            let pred = simulate(
                &model,
                &self.blueprint,
                nn,
                &s0,
                self.window,
                self.target.dt(),
                self.config.substeps,
            )
            .map_err(|e| e.in_window(j))?;
            out.push(pred);
        }
        Ok(out)
    }

    /// Unweighted prediction errors `s_pred - s*`, one row per predicted
    /// step in window order, with the target time of each row. Quaternions
    /// are sign-aligned with the target first.
    pub fn state_errors<S: Scalar>(&self, theta: &[S]) -> Result<Vec<(f64, Vec<S>)>> {
        let predictions = self.predictions(theta)?;
        let states = self.target.states();
        let quaternion = !self.model.is_chain();
        let mut rows = Vec::with_capacity(self.windows * self.window);
        for (j, pred) in predictions.iter().enumerate() {
            for (k, p) in pred.iter().enumerate().skip(1) {
                let target = &states[j * self.window + k];
                let flip = quaternion && {
                    let dot: f64 = (3..7).map(|i| p.q[i].re() * target.q[i]).sum();
                    dot < 0.0
                };
                let mut e = Vec::with_capacity(self.state_dim());
                for (i, (v, t)) in p.q.iter().zip(&target.q).enumerate() {
                    let v = if flip && i >= 3 { -v.clone() } else { v.clone() };
                    e.push(v - *t);
                }
                for (v, t) in p.qd.iter().zip(&target.qd) {
                    e.push(v.clone() - *t);
                }
                rows.push((target.t, e));
            }
        }
        Ok(rows)
    }

    /// Weighted state errors, then `√R θ_NN`.
    pub fn residuals<S: Scalar>(&self, theta: &[S]) -> Result<Vec<S>> {
        let rows = self.state_errors(theta)?;
        let mut r = Vec::with_capacity(self.num_residuals());
        for (_, e) in rows {
            r.extend(e.into_iter().zip(&self.weights).map(|(v, w)| v * *w));
        }
        let sqrt_r = self.config.regularization.sqrt();
        for w in &theta[self.layout.num_model()..] {
            r.push(w.clone() * sqrt_r);
        }
        Ok(r)
    }

    pub fn loss(&self, theta: &[f64]) -> Result<f64> {
        Ok(self.residuals(theta)?.iter().map(|v| v * v).sum())
    }

    /// Loss and its gradient from one dual-number evaluation.
    pub fn loss_and_gradient(&self, theta: &[f64]) -> Result<(f64, Vec<f64>)> {
        let r = self.residuals(&seed(theta))?;
        let loss = r.iter().fold(Dual::constant(0.0), |acc, v| acc + v.square());
        Ok((loss.real(), loss.dense_partials(theta.len())))
    }
}

impl VectorFunction for Problem {
    fn dim(&self) -> usize {
        self.layout.len()
    }

    fn eval<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        self.residuals(x)
    }
}
