use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::lma::{lma_minimize, LmaOptions, LmaOutcome};
use super::params::project;
use super::report::{RestartRecord, SolveReport};
use crate::autodiff::VectorFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PbhOptions {
    pub workers: usize,
    /// Total number of local solves.
    pub restarts: usize,
    pub master_seed: u64,
    /// Gaussian perturbation of the incumbent, as a fraction of each bounded
    /// parameter's range.
    pub perturb_scale: f64,
    /// Standard deviation for parameters without bounds (network weights).
    pub unbounded_scale: f64,
    /// Probability of drawing a fresh uniform start instead of perturbing the
    /// incumbent.
    pub uniform_probability: f64,
    /// The first restart starts exactly at the initial point.
    pub start_at_initial: bool,
    /// No new rounds start after this many seconds. Makes results depend on
    /// machine speed.
    pub time_limit: Option<f64>,
    pub lma: LmaOptions,
}

impl Default for PbhOptions {
    fn default() -> Self {
        PbhOptions {
            workers: 4,
            restarts: 20,
            master_seed: 0,
            perturb_scale: 0.25,
            unbounded_scale: 0.1,
            uniform_probability: 0.5,
            start_at_initial: true,
            time_limit: None,
            lma: LmaOptions::default(),
        }
    }
}

/// Seed of restart `index`'s random stream (splitmix64 of the pair).
pub fn restart_seed(master_seed: u64, index: usize) -> u64 {
    let mut z = master_seed ^ (index as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Start point for one restart: with probability `uniform_probability`
/// uniform in the bounds, otherwise the incumbent (or `center` before one
/// exists) plus Gaussian noise. Unbounded entries are always drawn around a
/// centre with `unbounded_scale`.
pub fn draw_start(
    rng: &mut ChaCha8Rng,
    center: &[f64],
    incumbent: Option<&[f64]>,
    bounds: &[Option<(f64, f64)>],
    options: &PbhOptions,
) -> Vec<f64> {
    let uniform = rng.random::<f64>() < options.uniform_probability;
    let base = incumbent.unwrap_or(center);
    let mut start: Vec<f64> = bounds
        .iter()
        .enumerate()
        .map(|(i, b)| match b {
            Some((lo, hi)) if (hi - lo).is_finite() && hi > lo => {
                if uniform {
                    rng.random_range(*lo..=*hi)
                } else {
                    let sd = options.perturb_scale * (hi - lo);
                    base[i] + Normal::new(0.0, sd).expect("finite scale").sample(rng)
                }
            }
            Some((lo, hi)) if lo == hi => *lo,
            _ => {
                let c = if uniform { center[i] } else { base[i] };
                c + Normal::new(0.0, options.unbounded_scale).expect("finite scale").sample(rng)
            }
        })
        .collect();
    project(&mut start, bounds);
    start
}

struct Incumbent {
    loss: f64,
    index: usize,
    outcome: LmaOutcome,
}

/// Parallel basin hopping around [`lma_minimize`].
///
/// Restarts run in synchronous rounds of `workers` threads. Each round draws
/// its start points from the incumbent as it stood when the round began, and
/// ties between equal losses go to the lower restart index, so the report
/// depends only on `(master_seed, workers, restarts)`.
pub fn pbh_search<F: VectorFunction + Sync + ?Sized>(
    f: &F,
    initial: &[f64],
    bounds: &[Option<(f64, f64)>],
    options: &PbhOptions,
) -> Result<SolveReport> {
    if options.workers == 0 || options.restarts == 0 {
        return Err(Error::Config("PBH needs at least one worker and one restart".into()));
    }
    if initial.len() != f.dim() || bounds.len() != f.dim() {
        return Err(Error::Dimension(format!(
            "PBH got {} values and {} bounds for {} parameters",
            initial.len(),
            bounds.len(),
            f.dim()
        )));
    }
    if !(options.perturb_scale >= 0.0) || !(options.unbounded_scale >= 0.0) {
        return Err(Error::Config("perturbation scales must be non-negative".into()));
    }
    let started = Instant::now();
    let limit = options.time_limit.map(Duration::from_secs_f64);
    let incumbent: Mutex<Option<Incumbent>> = Mutex::new(None);
    let mut records: Vec<RestartRecord> = Vec::with_capacity(options.restarts);

    let run = |index: usize, worker: usize, snapshot: Option<&[f64]>| -> RestartRecord {
        let seed = restart_seed(options.master_seed, index);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = if index == 0 && options.start_at_initial {
            let mut s = initial.to_vec();
            project(&mut s, bounds);
            s
        } else {
            draw_start(&mut rng, initial, snapshot, bounds, options)
        };
        match lma_minimize(f, &start, bounds, &options.lma) {
            Ok(outcome) => {
                let record = RestartRecord {
                    index,
                    worker,
                    seed: Some(seed),
                    start,
                    converged_loss: Some(outcome.loss),
                    iterations: outcome.iterations,
                    termination: Some(outcome.termination),
                    error: None,
                };
                let mut best = incumbent.lock().expect("incumbent lock");
                let better = match &*best {
                    None => true,
                    Some(b) => outcome.loss < b.loss || (outcome.loss == b.loss && index < b.index),
                };
                if better {
                    *best = Some(Incumbent { loss: outcome.loss, index, outcome });
                }
                record
            }
            Err(e) => RestartRecord {
                index,
                worker,
                seed: Some(seed),
                start,
                converged_loss: None,
                iterations: 0,
                termination: None,
                error: Some(e.to_string()),
            },
        }
    };

    let mut next = 0;
    while next < options.restarts {
        if limit.is_some_and(|l| started.elapsed() >= l) && next > 0 {
            break;
        }
        let end = (next + options.workers).min(options.restarts);
        let snapshot: Option<Vec<f64>> =
            incumbent.lock().expect("incumbent lock").as_ref().map(|b| b.outcome.theta.clone());
        let snap = snapshot.as_deref();
        if end - next == 1 {
            records.push(run(next, 0, snap));
        } else {
            let run = &run;
            let mut round: Vec<RestartRecord> = std::thread::scope(|s| {
                let handles: Vec<_> = (next..end)
                    .enumerate()
                    .map(|(worker, index)| (index, worker, s.spawn(move || run(index, worker, snap))))
                    .collect();
                handles
                    .into_iter()
                    .map(|(index, worker, h)| {
                        h.join().unwrap_or_else(|_| RestartRecord {
                            index,
                            worker,
                            seed: Some(restart_seed(options.master_seed, index)),
                            start: Vec::new(),
                            converged_loss: None,
                            iterations: 0,
                            termination: None,
                            error: Some("worker panicked".into()),
                        })
                    })
                    .collect()
            });
            round.sort_by_key(|r| r.index);
            records.append(&mut round);
        }
        next = end;
    }

    let best = incumbent.into_inner().expect("incumbent lock");
    let Some(best) = best else {
        return Err(Error::AllRestartsFailed(records.len()));
    };
    let final_loss: f64 = f.eval(&best.outcome.theta)?.iter().map(|v| v * v).sum();
    let initial_loss = f
        .eval(initial)
        .map(|r| r.iter().map(|v| v * v).sum())
        .unwrap_or(f64::NAN);
    Ok(SolveReport {
        names: Vec::new(),
        best: best.outcome.theta,
        final_loss,
        initial_loss,
        iterations: records.iter().map(|r| r.iterations).sum(),
        loss_history: best.outcome.history,
        best_restart: Some(best.index),
        restarts: records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    struct DoubleWell;
    impl VectorFunction for DoubleWell {
        fn dim(&self) -> usize {
            1
        }
        fn eval<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
            Ok(vec![x[0].square() - 1.0])
        }
    }

    struct Bowl;
    impl VectorFunction for Bowl {
        fn dim(&self) -> usize {
            2
        }
        fn eval<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
            Ok(vec![x[0].clone() - 0.3, (x[1].clone() + 0.7) * 2.0])
        }
    }

    fn opts(workers: usize, restarts: usize, seed: u64) -> PbhOptions {
        PbhOptions { workers, restarts, master_seed: seed, ..Default::default() }
    }

    #[test]
    fn both_wells_are_found() {
        let bounds = [Some((-2.0, 2.0))];
        let rep = pbh_search(&DoubleWell, &[0.5], &bounds, &opts(4, 16, 3)).unwrap();
        assert!(rep.final_loss < 1e-20);
        let mut signs = std::collections::BTreeSet::new();
        for r in &rep.restarts {
            assert!(r.converged_loss.unwrap() < 1e-16);
        }
        for r in &rep.restarts {
            // rerun to find where each restart landed
            let out = lma_minimize(&DoubleWell, &r.start, &bounds, &LmaOptions::default()).unwrap();
            signs.insert(out.theta[0] > 0.0);
            assert!((out.theta[0].abs() - 1.0).abs() < 1e-8);
        }
        assert_eq!(signs.len(), 2);
    }

    #[test]
    fn convex_problem_matches_single_lma() {
        let bounds = [Some((-5.0, 5.0)), Some((-5.0, 5.0))];
        let single = lma_minimize(&Bowl, &[1.0, 1.0], &bounds, &LmaOptions::default()).unwrap();
        for seed in 0..3 {
            let rep = pbh_search(&Bowl, &[1.0, 1.0], &bounds, &opts(3, 6, seed)).unwrap();
            assert!((rep.best[0] - single.theta[0]).abs() < 1e-9);
            assert!((rep.best[1] - single.theta[1]).abs() < 1e-9);
        }
    }

    #[test]
    fn deterministic_for_fixed_configuration() {
        let bounds = [Some((-2.0, 2.0))];
        let a = pbh_search(&DoubleWell, &[0.5], &bounds, &opts(3, 9, 11)).unwrap();
        let b = pbh_search(&DoubleWell, &[0.5], &bounds, &opts(3, 9, 11)).unwrap();
        assert_eq!(a, b);
        let c = pbh_search(&DoubleWell, &[0.5], &bounds, &opts(3, 9, 12)).unwrap();
        assert_ne!(a.restarts[1].start, c.restarts[1].start);
    }

    #[test]
    fn single_worker_single_restart_is_plain_lma() {
        let bounds = [Some((-5.0, 5.0)), Some((-5.0, 5.0))];
        let rep = pbh_search(&Bowl, &[1.0, 1.0], &bounds, &opts(1, 1, 0)).unwrap();
        let single = lma_minimize(&Bowl, &[1.0, 1.0], &bounds, &LmaOptions::default()).unwrap();
        assert_eq!(rep.restarts.len(), 1);
        assert_eq!(rep.best, single.theta);
    }

    #[test]
    fn all_failures_is_an_error() {
        struct Fails;
        impl VectorFunction for Fails {
            fn dim(&self) -> usize {
                1
            }
            fn eval<S: Scalar>(&self, _: &[S]) -> Result<Vec<S>> {
                Err(Error::NonFinite("always".into()))
            }
        }
        let err = pbh_search(&Fails, &[0.0], &[None], &opts(2, 4, 0)).unwrap_err();
        assert!(matches!(err, Error::AllRestartsFailed(4)));
    }

    #[test]
    fn starts_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let bounds = [Some((0.1, 0.2)), None];
        for _ in 0..200 {
            let s = draw_start(&mut rng, &[0.15, 0.0], Some(&[0.2, 3.0]), &bounds, &PbhOptions::default());
            assert!((0.1..=0.2).contains(&s[0]));
            assert!(s[1].is_finite());
        }
    }
}
