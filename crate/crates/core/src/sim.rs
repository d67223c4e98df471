//! Stepping and rollouts: the discrete dynamics `s_t = f(s_{t-1})` with
//! contact and neural attachment points resolved every step.

use serde::{Deserialize, Serialize};

use crate::contact::{contact_wrench, pgs_target_step};
use crate::data::{Metadata, StateKind, Trajectory, TrajectoryState};
use crate::dynamics::{chain, forward_dynamics, integrate_step, State, Wrench};
use crate::error::{Error, Result};
use crate::model::{BodyScalars, ModelScalars, MultiBodyModel};
use crate::neural::{NeuralBlueprint, NeuralRegistry};
use crate::scalar::Scalar;

/// Registry names of the chain state: `q0, q1, ..` and `qd0, qd1, ..`.
pub fn state_input_names(dof: usize) -> Vec<String> {
    (0..dof)
        .map(|i| format!("q{i}"))
        .chain((0..dof).map(|i| format!("qd{i}")))
        .collect()
}

/// One integration step of the hybrid model.
///
/// Chains record `q<i>`/`qd<i>` and resolve `joint_torque_<i>` (analytical
/// part zero) and `joint_damping_<i>` (analytical part the link damping).
/// Free bodies with a contact block get the compliant contact wrench.
pub fn step<S: Scalar>(
    model: &ModelScalars<S>,
    registry: &mut NeuralRegistry<'_, S>,
    state: &State<S>,
    dt: f64,
) -> Result<State<S>> {
    registry.begin_step();
    let qdd = match &model.body {
        BodyScalars::Chain(c) => {
            if registry.is_active() {
                for (i, (q, qd)) in state.q.iter().zip(&state.qd).enumerate() {
                    registry.record(&format!("q{i}"), q);
                    registry.record(&format!("qd{i}"), qd);
                }
            }
            let mut tau = Vec::with_capacity(c.links.len());
            let mut damping = Vec::with_capacity(c.links.len());
            for (i, link) in c.links.iter().enumerate() {
                if registry.is_active() {
                    tau.push(registry.resolve(&format!("joint_torque_{i}"), S::zero())?);
                    damping.push(registry.resolve(&format!("joint_damping_{i}"), link.damping.clone())?);
                } else {
                    tau.push(S::zero());
                    damping.push(link.damping.clone());
                }
            }
            chain::forward_dynamics_with_damping(c, &state.q, &state.qd, &tau, &damping)?
        }
        BodyScalars::FreeBody(b) => {
            let wrench = match &model.contact {
                Some(contact) => contact_wrench(registry, contact, &b.half_extents, &state.q, &state.qd)?.0,
                None => Wrench::zero(),
            };
            forward_dynamics(model, &state.q, &state.qd, &[], Some(&wrench))?
        }
    };
    integrate_step(model, state, &qdd, dt)
}

/// Rolls the hybrid model forward `steps` output steps of length `dt`, each
/// split into `substeps` integration steps. Returns `steps + 1` states
/// starting with `s0`. Errors carry the (output) step index.
pub fn simulate<S: Scalar>(
    model: &ModelScalars<S>,
    blueprint: &NeuralBlueprint,
    weights: &[S],
    s0: &State<S>,
    steps: usize,
    dt: f64,
    substeps: usize,
) -> Result<Vec<State<S>>> {
    if substeps == 0 {
        return Err(Error::Config("substeps must be at least 1".into()));
    }
    let mut registry = NeuralRegistry::new(blueprint, weights)?;
    let h = dt / substeps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(s0.clone());
    let mut s = s0.clone();
    for k in 0..steps {
        for _ in 0..substeps {
            s = step(model, &mut registry, &s, h).map_err(|e| e.at_step(k + 1))?;
        }
        out.push(s.clone());
    }
    Ok(out)
}

/// Which contact handling a rollout uses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactStepper {
    /// Differentiable Hunt-Crossley model (the hybrid simulator).
    #[default]
    Compliant,
    /// Velocity-level impulses (target generation only).
    Pgs,
}

fn kind_of(model: &MultiBodyModel) -> StateKind {
    if model.is_chain() {
        StateKind::Chain
    } else {
        StateKind::FreeBody
    }
}

fn to_trajectory(
    model: &MultiBodyModel,
    states: Vec<State<f64>>,
    t0: f64,
    dt: f64,
    source: &str,
) -> Result<Trajectory> {
    let states = states
        .into_iter()
        .enumerate()
        .map(|(i, s)| TrajectoryState {
            t: t0 + i as f64 * dt,
            q: s.q,
            qd: s.qd,
        })
        .collect();
    let metadata = Metadata {
        source: Some(source.into()),
        kind: kind_of(model),
        ..Default::default()
    };
    Trajectory::new(dt, states, metadata)
}

fn check_start(model: &MultiBodyModel, s0: &TrajectoryState, steps: usize) -> Result<()> {
    if steps == 0 {
        return Err(Error::Config("rollout needs at least one step".into()));
    }
    if s0.q.len() != model.q_dim() || s0.qd.len() != model.dof() {
        return Err(Error::Dimension(format!(
            "model expects {} positions and {} velocities, initial state has {} and {}",
            model.q_dim(),
            model.dof(),
            s0.q.len(),
            s0.qd.len()
        )));
    }
    if s0.q.iter().chain(&s0.qd).any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteStart);
    }
    Ok(())
}

/// Plain-number rollout of the hybrid model with the blueprint's weights.
pub fn rollout(
    model: &MultiBodyModel,
    blueprint: &NeuralBlueprint,
    s0: &TrajectoryState,
    steps: usize,
    dt: f64,
) -> Result<Trajectory> {
    rollout_with_substeps(model, blueprint, s0, steps, dt, 1)
}

pub fn rollout_with_substeps(
    model: &MultiBodyModel,
    blueprint: &NeuralBlueprint,
    s0: &TrajectoryState,
    steps: usize,
    dt: f64,
    substeps: usize,
) -> Result<Trajectory> {
    check_start(model, s0, steps)?;
    model.validate()?;
    let m = model.nominal();
    let start = State { q: s0.q.clone(), qd: s0.qd.clone() };
    let states = simulate(&m, blueprint, blueprint.weights(), &start, steps, dt, substeps)?;
    to_trajectory(model, states, s0.t, dt, "simulate")
}

/// Target trajectory: the analytical model (no networks) with the chosen
/// contact stepper. Chains and contact-free bodies ignore `stepper`.
pub fn target_rollout(
    model: &MultiBodyModel,
    stepper: ContactStepper,
    s0: &TrajectoryState,
    steps: usize,
    dt: f64,
) -> Result<Trajectory> {
    check_start(model, s0, steps)?;
    model.validate()?;
    let m = model.nominal();
    let states = match (&m.body, &m.contact, stepper) {
        (BodyScalars::FreeBody(b), Some(c), ContactStepper::Pgs) => {
            if !(dt > 0.0) {
                return Err(Error::Config(format!("time step must be positive, got {dt}")));
            }
            let mut out = Vec::with_capacity(steps + 1);
            let mut s = State { q: s0.q.clone(), qd: s0.qd.clone() };
            out.push(s.clone());
            for k in 0..steps {
                s = pgs_target_step(b, &model.pgs, c.ground_height, &s, dt).map_err(|e| e.at_step(k + 1))?;
                out.push(s.clone());
            }
            out
        }
        _ => {
            let empty = NeuralBlueprint::empty();
            let start = State { q: s0.q.clone(), qd: s0.qd.clone() };
            simulate(&m, &empty, &[], &start, steps, dt, 1)?
        }
    };
    let mut traj = to_trajectory(model, states, s0.t, dt, "target")?;
    if model.contact.is_some() && !model.is_chain() {
        let name = match stepper {
            ContactStepper::Compliant => "compliant",
            ContactStepper::Pgs => "pgs",
        };
        traj.metadata.extra.insert("contact".into(), name.into());
    }
    Ok(traj)
}
