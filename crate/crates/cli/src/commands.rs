use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use neurosim::data::{import_double_pendulum, parse_markers, Trajectory, TrajectoryState};
use neurosim::model::MultiBodyModel;
use neurosim::neural::NeuralBlueprint;
use neurosim::sim::{rollout_with_substeps, target_rollout, ContactStepper};
use neurosim::sysid::{pbh_search, ObjectiveConfig, PbhOptions, Problem, SolveReport};
use serde::Serialize;
use serde_json::json;

use crate::manifest::{sibling, Outputs, RunManifest};
use crate::options::{step_count, OptionsFile};
use crate::{ContactArg, EvaluateArgs, IdentifyArgs, ImportArgs, ObjectiveArgs, SimulateArgs, TargetArgs};

fn read_input(manifest: &mut RunManifest, role: &str, path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {role} file {}", path.display()))?;
    manifest.input(role, path, &bytes);
    String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8 text", path.display()))
}

fn load_model(manifest: &mut RunManifest, path: &Path) -> Result<MultiBodyModel> {
    let text = read_input(manifest, "model", path)?;
    MultiBodyModel::parse(&text).with_context(|| format!("in model file {}", path.display()))
}

fn load_blueprint(manifest: &mut RunManifest, path: Option<&Path>) -> Result<NeuralBlueprint> {
    let Some(path) = path else {
        return Ok(NeuralBlueprint::empty());
    };
    let text = read_input(manifest, "blueprint", path)?;
    NeuralBlueprint::parse(&text).with_context(|| format!("in blueprint file {}", path.display()))
}

fn load_target(manifest: &mut RunManifest, path: &Path) -> Result<Trajectory> {
    let text = read_input(manifest, "target", path)?;
    Trajectory::from_csv_str(&text).with_context(|| format!("in target file {}", path.display()))
}

/// Either a list of numbers (`q` then `qd`) or a trajectory file.
fn init_state(manifest: &mut RunManifest, spec: &str, model: &MultiBodyModel) -> Result<TrajectoryState> {
    let numbers: Option<Vec<f64>> = spec
        .split(',')
        .map(|s| s.trim().parse::<f64>().ok())
        .collect();
    let (nq, nv) = (model.q_dim(), model.dof());
    let state = match numbers {
        Some(v) => {
            if v.len() != nq + nv {
                bail!(
                    "--init-state has {} values, the model needs {nq} positions and {nv} velocities",
                    v.len()
                );
            }
            TrajectoryState { t: 0.0, q: v[..nq].to_vec(), qd: v[nq..].to_vec() }
        }
        None => {
            let path = Path::new(spec);
            if !path.exists() {
                bail!("--init-state `{spec}` is neither a number list nor an existing file");
            }
            let text = read_input(manifest, "init_state", path)?;
            let traj = Trajectory::from_csv_str(&text)
                .with_context(|| format!("in initial-state file {}", path.display()))?;
            traj.states()[0].clone()
        }
    };
    if state.q.len() != nq || state.qd.len() != nv {
        bail!(
            "initial state has {}+{} values, the model needs {nq}+{nv}",
            state.q.len(),
            state.qd.len()
        );
    }
    Ok(state)
}

pub fn simulate(a: SimulateArgs) -> Result<()> {
    let r = &a.rollout;
    let steps = step_count(r.duration, r.dt)?;
    let mut manifest = RunManifest::new("simulate", json!(null));
    let model = load_model(&mut manifest, &r.model)?;
    let blueprint = load_blueprint(&mut manifest, a.blueprint.as_deref())?;
    let s0 = init_state(&mut manifest, &r.init_state, &model)?;
    manifest.config = json!({
        "init_state": { "q": s0.q, "qd": s0.qd },
        "duration": r.duration,
        "dt": r.dt,
        "steps": steps,
        "substeps": a.substeps,
    });
    let manifest_path = sibling(&r.out, "manifest.json");
    manifest.outputs = vec![r.out.clone(), manifest_path.clone()];
    let mut outputs = Outputs::new();
    outputs.write_manifest(&manifest_path, &manifest)?;

    let traj = rollout_with_substeps(&model, &blueprint, &s0, steps, r.dt, a.substeps)?;
    outputs.write(&r.out, traj.to_csv_string().as_bytes())?;
    outputs.commit();
    println!("wrote {} states to {}", traj.len(), r.out.display());
    Ok(())
}

pub fn generate_target(a: TargetArgs) -> Result<()> {
    let r = &a.rollout;
    let steps = step_count(r.duration, r.dt)?;
    let stepper = match a.contact {
        ContactArg::Pgs => ContactStepper::Pgs,
        ContactArg::Compliant => ContactStepper::Compliant,
    };
    let mut manifest = RunManifest::new("generate-target", json!(null));
    let model = load_model(&mut manifest, &r.model)?;
    let s0 = init_state(&mut manifest, &r.init_state, &model)?;
    manifest.config = json!({
        "init_state": { "q": s0.q, "qd": s0.qd },
        "duration": r.duration,
        "dt": r.dt,
        "steps": steps,
        "contact": stepper,
    });
    let manifest_path = sibling(&r.out, "manifest.json");
    manifest.outputs = vec![r.out.clone(), manifest_path.clone()];
    let mut outputs = Outputs::new();
    outputs.write_manifest(&manifest_path, &manifest)?;

    let traj = target_rollout(&model, stepper, &s0, steps, r.dt)?;
    outputs.write(&r.out, traj.to_csv_string().as_bytes())?;
    outputs.commit();
    println!("wrote {} target states to {}", traj.len(), r.out.display());
    Ok(())
}

fn objective_config(file: &OptionsFile, a: &ObjectiveArgs) -> ObjectiveConfig {
    let mut cfg = file.objective.clone();
    if let Some(w) = a.window {
        cfg.window = w;
    }
    if let Some(r) = a.reg {
        cfg.regularization = r;
    }
    cfg
}

#[derive(Serialize)]
struct IdentifyReport<'a> {
    /// Fitted values of the free model parameters.
    parameters: BTreeMap<String, f64>,
    network_weights: usize,
    network_norm: f64,
    initial_loss: f64,
    final_loss: f64,
    objective: &'a ObjectiveConfig,
    pbh: &'a PbhOptions,
    solve: &'a SolveReport,
}

pub fn identify(a: IdentifyArgs) -> Result<()> {
    let mut manifest = RunManifest::new("identify", json!(null));
    let (file, file_text) = OptionsFile::load(a.objective.options.as_deref())?;
    if let (Some(path), Some(text)) = (&a.objective.options, &file_text) {
        manifest.input("options", path, text.as_bytes());
    }
    let cfg = objective_config(&file, &a.objective);
    let mut pbh = file.pbh.clone();
    if let Some(w) = a.pbh_workers {
        pbh.workers = w;
    }
    if let Some(r) = a.restarts {
        pbh.restarts = r;
    }
    let (seed, seed_source) = match (a.seed, file.seed) {
        (Some(s), _) => (s, "flag"),
        (None, Some(s)) => (s, "options"),
        (None, None) => (rand::random::<u64>(), "entropy"),
    };
    pbh.master_seed = seed;
    manifest.seed = Some(seed);

    let model = load_model(&mut manifest, &a.model)?;
    let blueprint = load_blueprint(&mut manifest, a.objective.blueprint.as_deref())?;
    let target = load_target(&mut manifest, &a.objective.target)?;
    let problem = Problem::new(model, blueprint, target, cfg.clone())?;
    if problem.layout().is_empty() {
        bail!("nothing to identify: the model has no free(...) parameters and the blueprint no weights");
    }

    let out_blueprint = match (&a.out_blueprint, &a.objective.blueprint) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(_)) => Some(a.out_model.with_extension("blueprint")),
        (None, None) => None,
    };
    let manifest_path = sibling(&a.out_report, "manifest.json");
    manifest.outputs = [Some(a.out_report.clone()), Some(a.out_model.clone()), out_blueprint.clone()]
        .into_iter()
        .flatten()
        .chain([manifest_path.clone()])
        .collect();
    manifest.config = json!({
        "objective": cfg,
        "pbh": pbh,
        "seed_source": seed_source,
        "parameters": problem.layout().names(),
    });
    let mut outputs = Outputs::new();
    outputs.write_manifest(&manifest_path, &manifest)?;

    let mut report = pbh_search(&problem, &problem.initial(), &problem.bounds(), &pbh)?;
    report.names = problem.layout().names();
    let (fitted_model, fitted_bp) = problem.apply(&report.best)?;
    let layout = problem.layout();
    let parameters = layout
        .names()
        .into_iter()
        .zip(layout.model_part(&report.best))
        .map(|(n, v)| (n, *v))
        .collect();
    let nn = layout.network_part(&report.best);
    let summary = IdentifyReport {
        parameters,
        network_weights: nn.len(),
        network_norm: nn.iter().fold(0.0, |acc, w| acc + w * w).sqrt(),
        initial_loss: report.initial_loss,
        final_loss: report.final_loss,
        objective: &cfg,
        pbh: &pbh,
        solve: &report,
    };
    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    outputs.write(&a.out_report, text.as_bytes())?;
    outputs.write(&a.out_model, fitted_model.to_text().as_bytes())?;
    if let Some(p) = &out_blueprint {
        outputs.write(p, fitted_bp.to_text().as_bytes())?;
    }
    outputs.commit();
    println!(
        "loss {:.6e} -> {:.6e} over {} restarts (seed {seed})",
        report.initial_loss,
        report.final_loss,
        report.restarts.len()
    );
    for (name, value) in &summary.parameters {
        println!("  {name} = {value}");
    }
    Ok(())
}

pub fn evaluate(a: EvaluateArgs) -> Result<()> {
    let mut manifest = RunManifest::new("evaluate", json!(null));
    let (file, file_text) = OptionsFile::load(a.objective.options.as_deref())?;
    if let (Some(path), Some(text)) = (&a.objective.options, &file_text) {
        manifest.input("options", path, text.as_bytes());
    }
    let cfg = objective_config(&file, &a.objective);
    let model = load_model(&mut manifest, &a.model)?;
    let blueprint = load_blueprint(&mut manifest, a.objective.blueprint.as_deref())?;
    let target = load_target(&mut manifest, &a.objective.target)?;
    let names: Vec<String> = target.header().into_iter().skip(1).collect();
    let problem = Problem::new(model, blueprint, target, cfg.clone())?;

    let summary_path = a.summary.clone().unwrap_or_else(|| sibling(&a.out, "summary.json"));
    let manifest_path = sibling(&a.out, "manifest.json");
    manifest.outputs = vec![a.out.clone(), summary_path.clone(), manifest_path.clone()];
    manifest.config = json!({ "objective": cfg });
    let mut outputs = Outputs::new();
    outputs.write_manifest(&manifest_path, &manifest)?;

    let theta = problem.initial();
    let rows = problem.state_errors::<f64>(&theta)?;
    let loss = problem.loss(&theta)?;

    let mut csv = String::from("t");
    for n in &names {
        let _ = write!(csv, ",e_{n}");
    }
    csv.push('\n');
    let mut sq = vec![0.0; names.len()];
    for (t, e) in &rows {
        let _ = write!(csv, "{t}");
        for (i, v) in e.iter().enumerate() {
            let _ = write!(csv, ",{v}");
            sq[i] += v * v;
        }
        csv.push('\n');
    }
    let n = rows.len().max(1) as f64;
    let rmse: BTreeMap<String, f64> = names.iter().cloned().zip(sq.iter().map(|s| (s / n).sqrt())).collect();
    let summary = json!({
        "loss": loss,
        "window": problem.window(),
        "windows": problem.num_windows(),
        "rows": rows.len(),
        "rmse": rmse,
    });
    outputs.write(&a.out, csv.as_bytes())?;
    outputs.write(&summary_path, (serde_json::to_string_pretty(&summary)? + "\n").as_bytes())?;
    outputs.commit();
    println!("loss {loss:.6e} over {} windows of {} steps", problem.num_windows(), problem.window());
    Ok(())
}

pub fn import(a: ImportArgs) -> Result<()> {
    let mut manifest = RunManifest::new("import", json!(null));
    let (file, file_text) = OptionsFile::load(a.options.as_deref())?;
    if let (Some(path), Some(text)) = (&a.options, &file_text) {
        manifest.input("options", path, text.as_bytes());
    }
    let mut opts = file.import.clone();
    if let Some(p) = a.pixel_to_meter {
        opts.pixel_to_meter = p;
    }
    if a.smooth_velocities {
        opts.smooth_velocities = true;
    }
    let text = read_input(&mut manifest, "markers", &a.markers)?;
    let frames = parse_markers(&text).with_context(|| format!("in marker file {}", a.markers.display()))?;
    manifest.config = json!({ "import": opts, "resample_dt": a.resample_dt });
    let manifest_path: PathBuf = sibling(&a.out, "manifest.json");
    manifest.outputs = vec![a.out.clone(), manifest_path.clone()];
    let mut outputs = Outputs::new();
    outputs.write_manifest(&manifest_path, &manifest)?;

    let imported = import_double_pendulum(&frames, &opts)?;
    let traj = match a.resample_dt {
        Some(dt) => imported.trajectory.resample(dt)?,
        None => imported.trajectory,
    };
    outputs.write(&a.out, traj.to_csv_string().as_bytes())?;
    outputs.commit();
    println!(
        "imported {} states; measured link lengths {:.4} m, {:.4} m",
        traj.len(),
        imported.link_lengths[0],
        imported.link_lengths[1]
    );
    Ok(())
}
