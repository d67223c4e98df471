//! Shared scenarios for the benchmarks.

use neurosim::data::{Trajectory, TrajectoryState};
use neurosim::model::{ContactParams, FreeBodyModel, Link, MultiBodyModel, Param};
use neurosim::neural::{CombineMode, NetworkSpec, NeuralBlueprint};
use neurosim::sim::{target_rollout, ContactStepper};
use neurosim::sysid::{ObjectiveConfig, Problem};

pub fn double_pendulum(free: bool) -> MultiBodyModel {
    let mut a = Link::point_mass(1.0, 1.0);
    let mut b = Link::point_mass(0.7, 0.8);
    a.damping = 0.05.into();
    b.damping = 0.05.into();
    if free {
        a.mass = Param::free(2.0, 0.01, 10.0);
        b.mass = Param::free(1.4, 0.01, 10.0);
        a.length = Param::free(2.0, 0.05, 5.0);
        b.length = Param::free(1.6, 0.05, 5.0);
    }
    MultiBodyModel::chain(vec![a, b])
}

pub fn pendulum_start() -> TrajectoryState {
    TrajectoryState { t: 0.0, q: vec![1.2, -0.5], qd: vec![0.0, 0.5] }
}

pub fn cube() -> MultiBodyModel {
    MultiBodyModel::free_body(FreeBodyModel::cube(1.0, 0.05), Some(ContactParams::default()))
}

pub fn cube_start() -> TrajectoryState {
    TrajectoryState {
        t: 0.0,
        q: vec![0.0, 0.0, 0.1, 1.0, 0.0, 0.0, 0.0],
        qd: vec![2.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    }
}

/// Torque network on the first joint, `hidden` units wide.
pub fn torque_blueprint(hidden: usize) -> NeuralBlueprint {
    let mut bp = NeuralBlueprint::empty();
    let spec = NetworkSpec::new(vec!["q1".into(), "qd0".into(), "qd1".into()], vec![hidden], 1)
        .expect("valid spec");
    bp.attach("joint_torque_0", spec, CombineMode::Residual, None, Some(3))
        .expect("valid attachment");
    bp
}

pub fn pendulum_target(steps: usize) -> Trajectory {
    target_rollout(&double_pendulum(false), ContactStepper::Compliant, &pendulum_start(), steps, 1e-3)
        .expect("finite rollout")
}

/// Mis-scaled double pendulum against its own noiseless target.
pub fn pendulum_problem(steps: usize, blueprint: NeuralBlueprint) -> Problem {
    Problem::new(double_pendulum(true), blueprint, pendulum_target(steps), ObjectiveConfig::default())
        .expect("consistent problem")
}
