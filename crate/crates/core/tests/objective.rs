use neurosim::data::{Metadata, StateKind, Trajectory, TrajectoryState};
use neurosim::model::{Link, MultiBodyModel, Param};
use neurosim::neural::{NetworkSpec, NeuralBlueprint};
use neurosim::sim::{target_rollout, ContactStepper};
use neurosim::sysid::{lma_solve, LmaOptions, ObjectiveConfig, Problem};

const G: f64 = 9.81;

fn single(length: Param) -> MultiBodyModel {
    let mut l = Link::point_mass(1.0, 1.0);
    l.length = length;
    MultiBodyModel::chain(vec![l])
}

/// Point-mass pendulum stepped by hand with semi-implicit Euler.
fn oracle_step(l: f64, q: f64, qd: f64, dt: f64) -> (f64, f64) {
    let qd = qd + dt * (-G / l * q.sin());
    (q + dt * qd, qd)
}

fn oracle_target(l: f64, n: usize, dt: f64) -> Trajectory {
    let (mut q, mut qd) = (0.8, 0.0);
    let mut states = vec![TrajectoryState { t: 0.0, q: vec![q], qd: vec![qd] }];
    for k in 1..=n {
        (q, qd) = oracle_step(l, q, qd, dt);
        states.push(TrajectoryState { t: k as f64 * dt, q: vec![q], qd: vec![qd] });
    }
    let meta = Metadata { source: Some("oracle".into()), kind: StateKind::Chain, ..Default::default() };
    Trajectory::new(dt, states, meta).unwrap()
}

#[test]
fn residual_count_and_layout() {
    let target = oracle_target(1.0, 95, 0.01);
    let mut bp = NeuralBlueprint::empty();
    let spec = NetworkSpec::new(vec!["q0".into(), "qd0".into()], vec![4], 1).unwrap();
    bp.attach("joint_torque_0", spec, Default::default(), None, Some(1)).unwrap();
    let cfg = ObjectiveConfig { window: 10, regularization: 0.5, ..Default::default() };
    let p = Problem::new(single(Param::free(1.0, 0.1, 3.0)), bp, target, cfg).unwrap();
    // 95 steps: 9 full windows, the tail of 5 steps is dropped
    assert_eq!(p.num_windows(), 9);
    assert_eq!(p.layout().num_network(), 17);
    assert_eq!(p.num_residuals(), 9 * 10 * 2 + 17);
    let theta = p.initial();
    let r = p.residuals(&theta).unwrap();
    assert_eq!(r.len(), p.num_residuals());
    // regularizer tail is sqrt(R) * weights
    for (ri, w) in r[180..].iter().zip(&theta[1..]) {
        assert!((ri - 0.5f64.sqrt() * w).abs() < 1e-15);
    }
}

#[test]
fn window_longer_than_data_becomes_one_window() {
    let target = oracle_target(1.0, 30, 0.01);
    let cfg = ObjectiveConfig { window: 100, ..Default::default() };
    let p = Problem::new(single(Param::free(1.0, 0.1, 3.0)), NeuralBlueprint::empty(), target, cfg).unwrap();
    assert_eq!((p.window(), p.num_windows()), (30, 1));
}

#[test]
fn generating_parameters_have_zero_loss() {
    let target = oracle_target(1.3, 200, 0.005);
    let p = Problem::new(
        single(Param::free(1.3, 0.1, 3.0)),
        NeuralBlueprint::empty(),
        target,
        ObjectiveConfig::default(),
    )
    .unwrap();
    assert!(p.loss(&[1.3]).unwrap() < 1e-16);
}

#[test]
fn residuals_match_an_independent_resimulation() {
    let dt = 0.01;
    let target = oracle_target(1.0, 60, dt);
    let w = 7;
    let cfg = ObjectiveConfig { window: w, ..Default::default() };
    let p = Problem::new(single(Param::free(1.0, 0.1, 3.0)), NeuralBlueprint::empty(), target.clone(), cfg)
        .unwrap();
    let l = 1.17;
    let r = p.residuals(&[l]).unwrap();
    let mut expected = Vec::new();
    for j in 0..60 / w {
        let anchor = &target.states()[j * w];
        let (mut q, mut qd) = (anchor.q[0], anchor.qd[0]);
        for k in 1..=w {
            (q, qd) = oracle_step(l, q, qd, dt);
            let s = &target.states()[j * w + k];
            expected.push(q - s.q[0]);
            expected.push(0.1 * (qd - s.qd[0]));
        }
    }
    assert_eq!(r.len(), expected.len());
    for (a, b) in r.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }
}

#[test]
fn squared_residual_norm_is_the_loss() {
    let target = oracle_target(1.0, 100, 0.01);
    let mut bp = NeuralBlueprint::empty();
    let spec = NetworkSpec::new(vec!["q0".into(), "qd0".into()], vec![3], 1).unwrap();
    bp.attach("joint_torque_0", spec, Default::default(), None, Some(4)).unwrap();
    let cfg = ObjectiveConfig { regularization: 1e-2, ..Default::default() };
    let p = Problem::new(single(Param::free(0.7, 0.1, 3.0)), bp, target, cfg).unwrap();
    let mut theta = p.initial();
    for (i, v) in theta.iter_mut().enumerate().skip(1) {
        *v = 0.3 * ((i * 37 % 11) as f64 / 11.0 - 0.5);
    }
    let r = p.residuals(&theta).unwrap();
    let norm2: f64 = r.iter().map(|v| v * v).sum();
    let loss = p.loss(&theta).unwrap();
    assert!((norm2 - loss).abs() <= 1e-12 * loss);
    let (l2, grad) = p.loss_and_gradient(&theta).unwrap();
    assert!((l2 - loss).abs() <= 1e-12 * loss);
    assert_eq!(grad.len(), theta.len());
}

#[test]
fn zero_weights_add_no_regularization() {
    let target = oracle_target(1.0, 50, 0.01);
    let mut bp = NeuralBlueprint::empty();
    let spec = NetworkSpec::new(vec!["q0".into()], vec![2], 1).unwrap();
    bp.attach("joint_torque_0", spec, Default::default(), Some(vec![0.0; 7]), None).unwrap();
    let with = ObjectiveConfig { regularization: 3.0, ..Default::default() };
    let p = Problem::new(single(Param::free(0.9, 0.1, 3.0)), bp.clone(), target.clone(), with).unwrap();
    let q = Problem::new(single(Param::free(0.9, 0.1, 3.0)), bp, target, ObjectiveConfig::default()).unwrap();
    assert_eq!(p.loss(&p.initial()).unwrap(), q.loss(&q.initial()).unwrap());
}

#[test]
fn pendulum_length_recovered_from_half_scale() {
    let truth = single(Param::fixed(1.0));
    let s0 = TrajectoryState { t: 0.0, q: vec![1.0], qd: vec![0.0] };
    let target = target_rollout(&truth, ContactStepper::Compliant, &s0, 2000, 1e-3).unwrap();
    let p = Problem::new(
        single(Param::free(0.5, 0.1, 3.0)),
        NeuralBlueprint::empty(),
        target,
        ObjectiveConfig::default(),
    )
    .unwrap();
    let rep = lma_solve(&p, &p.initial(), &p.bounds(), &LmaOptions::default()).unwrap();
    assert!((rep.best[0] - 1.0).abs() < 1e-6, "{:?}", rep.best);
    assert!(rep.final_loss < 1e-12);
}

#[test]
fn mismatched_target_is_rejected() {
    let target = oracle_target(1.0, 10, 0.01);
    let two = MultiBodyModel::chain(vec![Link::point_mass(1.0, 1.0), Link::point_mass(1.0, 1.0)]);
    let err = Problem::new(two, NeuralBlueprint::empty(), target, ObjectiveConfig::default()).unwrap_err();
    assert!(err.to_string().contains("dimension"), "{err}");
}
