use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How state dimensions should be interpreted when interpolating.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    /// Joint angles; interpolated on the circle.
    Chain,
    /// Position plus unit quaternion `[w, x, y, z]`.
    FreeBody,
    #[default]
    Generic,
}

impl StateKind {
    fn as_str(self) -> &'static str {
        match self {
            StateKind::Chain => "chain",
            StateKind::FreeBody => "free_body",
            StateKind::Generic => "generic",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "chain" => Some(StateKind::Chain),
            "free_body" => Some(StateKind::FreeBody),
            "generic" => Some(StateKind::Generic),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryState {
    pub t: f64,
    pub q: Vec<f64>,
    pub qd: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    /// Where the data came from, e.g. `target`, `simulate`, `markers`.
    pub source: Option<String>,
    pub kind: StateKind,
    /// Any other `# key=value` lines.
    pub extra: BTreeMap<String, String>,
}

/// Uniformly sampled state sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    dt: f64,
    states: Vec<TrajectoryState>,
    pub metadata: Metadata,
}

impl Trajectory {
    /// Validates: at least one state, equal dimensions, and timestamps on
    /// the uniform grid `t0 + i dt` (strictly increasing).
    pub fn new(dt: f64, states: Vec<TrajectoryState>, metadata: Metadata) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::Trajectory(format!("dt must be positive, got {dt}")));
        }
        let Some(first) = states.first() else {
            return Err(Error::Trajectory("at least one state is required".into()));
        };
        let (nq, nv, t0) = (first.q.len(), first.qd.len(), first.t);
        for (i, s) in states.iter().enumerate() {
            if s.q.len() != nq || s.qd.len() != nv {
                return Err(Error::Trajectory(format!(
                    "state {i} has {}+{} dimensions, expected {nq}+{nv}",
                    s.q.len(),
                    s.qd.len()
                )));
            }
            if !s.t.is_finite() || s.q.iter().chain(&s.qd).any(|v| !v.is_finite()) {
                return Err(Error::Trajectory(format!("state {i} is not finite")));
            }
            let expected = t0 + i as f64 * dt;
            if (s.t - expected).abs() > 1e-6 * dt + 1e-12 * expected.abs() {
                return Err(Error::Trajectory(format!(
                    "non-uniform time stamps: state {i} at t={} but grid expects {expected}",
                    s.t
                )));
            }
        }
        if metadata.kind == StateKind::FreeBody && (nq != 7 || nv != 6) {
            return Err(Error::Trajectory(format!(
                "free-body trajectory needs 7+6 dimensions, got {nq}+{nv}"
            )));
        }
        Ok(Trajectory { dt, states, metadata })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn states(&self) -> &[TrajectoryState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn q_dim(&self) -> usize {
        self.states[0].q.len()
    }

    pub fn qd_dim(&self) -> usize {
        self.states[0].qd.len()
    }

    pub fn start_time(&self) -> f64 {
        self.states[0].t
    }

    pub fn end_time(&self) -> f64 {
        self.states[self.states.len() - 1].t
    }

    /// Column names: `t,q0,..,qd0,..`.
    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["t".to_string()];
        h.extend((0..self.q_dim()).map(|i| format!("q{i}")));
        h.extend((0..self.qd_dim()).map(|i| format!("qd{i}")));
        h
    }

    /// First `n` states (at least one).
    pub fn truncated(&self, n: usize) -> Self {
        let mut out = self.clone();
        out.states.truncate(n.max(1));
        out
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        if let Some(src) = &self.metadata.source {
            writeln!(w, "# source={src}")?;
        }
        writeln!(w, "# kind={}", self.metadata.kind.as_str())?;
        writeln!(w, "# dt={}", self.dt)?;
        for (k, v) in &self.metadata.extra {
            writeln!(w, "# {k}={v}")?;
        }
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(self.header())?;
        for s in &self.states {
            let row = std::iter::once(s.t).chain(s.q.iter().copied()).chain(s.qd.iter().copied());
            csv.write_record(row.map(|v| v.to_string()))?;
        }
        csv.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut text = String::new();
        r.read_to_string(&mut text)?;
        Self::from_csv_str(&text)
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut metadata = Metadata::default();
        let mut dt_hint = None;
        for line in text.lines() {
            let Some(comment) = line.trim_start().strip_prefix('#') else {
                if line.trim().is_empty() {
                    continue;
                }
                break;
            };
            let Some((k, v)) = comment.split_once('=') else { continue };
            let (k, v) = (k.trim(), v.trim());
            match k {
                "source" => metadata.source = Some(v.to_string()),
                "kind" => {
                    metadata.kind = StateKind::parse(v)
                        .ok_or_else(|| Error::Trajectory(format!("unknown trajectory kind `{v}`")))?
                }
                "dt" => dt_hint = v.parse::<f64>().ok(),
                _ => {
                    metadata.extra.insert(k.to_string(), v.to_string());
                }
            }
        }

        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let header = reader.headers()?.clone();
        let header_line = reader.position().line();
        let (nq, nv) = parse_header(&header).map_err(|m| Error::parse(header_line as usize, 1, m))?;
        let mut states = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line() as usize);
                Error::parse(line, 1, e.to_string())
            })?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            if record.len() != 1 + nq + nv {
                return Err(Error::parse(
                    line,
                    1,
                    format!("expected {} columns, found {}", 1 + nq + nv, record.len()),
                ));
            }
            let mut values = Vec::with_capacity(record.len());
            for (col, field) in record.iter().enumerate() {
                let v: f64 = field
                    .parse()
                    .map_err(|_| Error::parse(line, col + 1, format!("`{field}` is not a number")))?;
                values.push(v);
            }
            states.push(TrajectoryState {
                t: values[0],
                q: values[1..1 + nq].to_vec(),
                qd: values[1 + nq..].to_vec(),
            });
        }
        let dt = match (states.len(), dt_hint) {
            (0, _) => return Err(Error::Trajectory("at least one state is required".into())),
            (1, Some(dt)) => dt,
            (1, None) => return Err(Error::Trajectory("single-state file needs a `# dt=` line".into())),
            (n, hint) => {
                let span = (states[n - 1].t - states[0].t) / (n - 1) as f64;
                // the recorded dt is exact; the span estimate may be off by an ulp
                match hint {
                    Some(h) if (h - span).abs() <= 1e-9 * h => h,
                    _ => span,
                }
            }
        };
        Trajectory::new(dt, states, metadata)
    }

    /// Linear interpolation at `t`; angles on the circle for chains and
    /// normalized linear interpolation of sign-aligned quaternions for free
    /// bodies.
    pub fn sample(&self, t: f64) -> Result<TrajectoryState> {
        let (t0, t1) = (self.start_time(), self.end_time());
        let slack = 1e-9 * self.dt;
        if !(t >= t0 - slack && t <= t1 + slack) {
            return Err(Error::Trajectory(format!(
                "time {t} outside data range [{t0}, {t1}]"
            )));
        }
        let x = ((t - t0) / self.dt).clamp(0.0, (self.len() - 1) as f64);
        let i = (x.floor() as usize).min(self.len() - 1);
        let frac = x - i as f64;
        if frac == 0.0 || i + 1 == self.len() {
            let mut s = self.states[i].clone();
            s.t = t;
            return Ok(s);
        }
        let (a, b) = (&self.states[i], &self.states[i + 1]);
        let lerp = |x: f64, y: f64| x + (y - x) * frac;
        let q = match self.metadata.kind {
            StateKind::Chain => a.q.iter().zip(&b.q).map(|(&x, &y)| x + wrap_angle(y - x) * frac).collect(),
            StateKind::FreeBody => {
                let mut q: Vec<f64> = (0..3).map(|k| lerp(a.q[k], b.q[k])).collect();
                let dot: f64 = (3..7).map(|k| a.q[k] * b.q[k]).sum();
                let sign = if dot < 0.0 { -1.0 } else { 1.0 };
                let rot: Vec<f64> = (3..7).map(|k| lerp(a.q[k], sign * b.q[k])).collect();
                let n = rot.iter().map(|v| v * v).sum::<f64>().sqrt();
                q.extend(rot.iter().map(|v| v / n));
                q
            }
            StateKind::Generic => a.q.iter().zip(&b.q).map(|(&x, &y)| lerp(x, y)).collect(),
        };
        let qd = a.qd.iter().zip(&b.qd).map(|(&x, &y)| lerp(x, y)).collect();
        Ok(TrajectoryState { t, q, qd })
    }

    /// Interpolates at arbitrary times; any time outside the data is an error.
    pub fn resample_at(&self, times: &[f64], dt: f64) -> Result<Self> {
        let states = times.iter().map(|&t| self.sample(t)).collect::<Result<Vec<_>>>()?;
        Trajectory::new(dt, states, self.metadata.clone())
    }

    /// Resamples onto `t0 + k new_dt` for every grid point inside the data.
    pub fn resample(&self, new_dt: f64) -> Result<Self> {
        if !(new_dt > 0.0) || !new_dt.is_finite() {
            return Err(Error::Trajectory(format!("new dt must be positive, got {new_dt}")));
        }
        if new_dt == self.dt {
            return Ok(self.clone());
        }
        let span = self.end_time() - self.start_time();
        let count = (span / new_dt + 1e-9).floor() as usize + 1;
        let t0 = self.start_time();
        let times: Vec<f64> = (0..count).map(|k| t0 + k as f64 * new_dt).collect();
        self.resample_at(&times, new_dt)
    }
}

fn parse_header(h: &csv::StringRecord) -> std::result::Result<(usize, usize), String> {
    if h.get(0) != Some("t") {
        return Err("header must start with `t`".into());
    }
    let names: Vec<&str> = h.iter().skip(1).collect();
    let nq = names.iter().take_while(|n| n.starts_with('q') && !n.starts_with("qd")).count();
    let nv = names.len() - nq;
    for (i, name) in names[..nq].iter().enumerate() {
        if *name != format!("q{i}") {
            return Err(format!("expected column `q{i}`, found `{name}`"));
        }
    }
    for (i, name) in names[nq..].iter().enumerate() {
        if *name != format!("qd{i}") {
            return Err(format!("expected column `qd{i}`, found `{name}`"));
        }
    }
    if nq == 0 {
        return Err("header has no `q` columns".into());
    }
    Ok((nq, nv))
}

/// Maps an angle difference into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = (a + PI).rem_euclid(2.0 * PI) - PI;
    if r == -PI {
        PI
    } else {
        r
    }
}

pub fn write_trajectory(traj: &Trajectory, path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    traj.write_to(std::io::BufWriter::new(file))
}

pub fn read_trajectory(path: impl AsRef<Path>) -> Result<Trajectory> {
    Trajectory::from_csv_str(&std::fs::read_to_string(path)?)
}
