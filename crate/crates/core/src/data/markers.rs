//! Double-pendulum joint trajectories from tracked marker pixels.
//!
//! Input is a CSV with columns `t,x0,y0,x1,y1,x2,y2`: pivot, elbow and tip in
//! image coordinates (y grows downwards). Lines starting with `#` are ignored.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::trajectory::{wrap_angle, Metadata, StateKind, Trajectory, TrajectoryState};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawMarkerFrame {
    pub t: f64,
    /// Pivot, elbow, tip as `(x, y)` pixels.
    pub points: [[f64; 2]; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ImportOptions {
    /// Metres per pixel.
    pub pixel_to_meter: f64,
    /// Centered moving average of width 5 over the velocity estimates.
    pub smooth_velocities: bool,
}

impl Default for ImportOptions {
    fn default() -> Self {
        ImportOptions {
            pixel_to_meter: 1.0,
            smooth_velocities: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImportedPendulum {
    pub trajectory: Trajectory,
    /// Mean measured pivot-elbow and elbow-tip distances in metres.
    pub link_lengths: [f64; 2],
}

pub fn parse_markers(text: &str) -> Result<Vec<RawMarkerFrame>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    let expected = ["t", "x0", "y0", "x1", "y1", "x2", "y2"];
    if header.iter().ne(expected) {
        let line = reader.position().line() as usize;
        return Err(Error::parse(line, 1, format!("marker header must be `{}`", expected.join(","))));
    }
    let mut frames = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            Error::parse(e.position().map_or(0, |p| p.line() as usize), 1, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != 7 {
            return Err(Error::parse(line, 1, format!("expected 7 columns, found {}", record.len())));
        }
        let mut v = [0.0; 7];
        for (col, field) in record.iter().enumerate() {
            v[col] = field
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::parse(line, col + 1, format!("`{field}` is not a finite number")))?;
        }
        frames.push(RawMarkerFrame {
            t: v[0],
            points: [[v[1], v[2]], [v[3], v[4]], [v[5], v[6]]],
        });
    }
    Ok(frames)
}

pub fn read_markers(path: impl AsRef<Path>) -> Result<Vec<RawMarkerFrame>> {
    parse_markers(&std::fs::read_to_string(path)?)
}

/// Angle from hanging straight down, image coordinates.
fn hanging_angle(from: [f64; 2], to: [f64; 2], frame: usize) -> Result<(f64, f64)> {
    let dx = to[0] - from[0];
    let dy = to[1] - from[1];
    let len = dx.hypot(dy);
    if !(len > 1e-9) {
        return Err(Error::Trajectory(format!("coincident markers in frame {frame}")));
    }
    Ok((dx.atan2(dy), len))
}

fn unwrap(angles: &mut [f64]) {
    for i in 1..angles.len() {
        angles[i] = angles[i - 1] + wrap_angle(angles[i] - angles[i - 1]);
    }
}

/// Central differences, one-sided at both ends.
fn differentiate(x: &[f64], dt: f64) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| match i {
            0 => (x[1] - x[0]) / dt,
            _ if i == n - 1 => (x[n - 1] - x[n - 2]) / dt,
            _ => (x[i + 1] - x[i - 1]) / (2.0 * dt),
        })
        .collect()
}

fn moving_average(x: &[f64], width: usize) -> Vec<f64> {
    let half = width / 2;
    (0..x.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(x.len());
            x[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect()
}

/// Joint angles `q1` (pivot to elbow, from hanging down) and `q2` (elbow to
/// tip, relative to the first link), unwrapped over time, with
/// finite-difference velocities. Time stamps are regularized to the mean
/// frame interval after checking jitter stays within 1%.
pub fn import_double_pendulum(frames: &[RawMarkerFrame], options: &ImportOptions) -> Result<ImportedPendulum> {
    let n = frames.len();
    if n < 3 {
        return Err(Error::Trajectory(format!("need at least 3 frames, got {n}")));
    }
    if !(options.pixel_to_meter > 0.0) {
        return Err(Error::Config("pixel_to_meter must be positive".into()));
    }
    let dt = (frames[n - 1].t - frames[0].t) / (n - 1) as f64;
    if !(dt > 0.0) {
        return Err(Error::Trajectory("frame times must increase".into()));
    }
    for (i, w) in frames.windows(2).enumerate() {
        let step = w[1].t - w[0].t;
        if (step - dt).abs() > 0.01 * dt {
            return Err(Error::Trajectory(format!(
                "frame interval {step} between frames {i} and {} deviates more than 1% from {dt}",
                i + 1
            )));
        }
    }
    let mut q1 = Vec::with_capacity(n);
    let mut q2 = Vec::with_capacity(n);
    let (mut l1, mut l2) = (0.0, 0.0);
    for (i, f) in frames.iter().enumerate() {
        if f.points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Trajectory(format!("non-finite marker in frame {i}")));
        }
        let (a1, d1) = hanging_angle(f.points[0], f.points[1], i)?;
        let (a2, d2) = hanging_angle(f.points[1], f.points[2], i)?;
        q1.push(a1);
        q2.push(wrap_angle(a2 - a1));
        l1 += d1;
        l2 += d2;
    }
    unwrap(&mut q1);
    unwrap(&mut q2);
    let mut v1 = differentiate(&q1, dt);
    let mut v2 = differentiate(&q2, dt);
    if options.smooth_velocities {
        v1 = moving_average(&v1, 5);
        v2 = moving_average(&v2, 5);
    }
    let t0 = frames[0].t;
    let states = (0..n)
        .map(|i| TrajectoryState {
            t: t0 + i as f64 * dt,
            q: vec![q1[i], q2[i]],
            qd: vec![v1[i], v2[i]],
        })
        .collect();
    let mut metadata = Metadata {
        source: Some("markers".into()),
        kind: StateKind::Chain,
        ..Default::default()
    };
    metadata
        .extra
        .insert("pixel_to_meter".into(), options.pixel_to_meter.to_string());
    metadata
        .extra
        .insert("smooth_velocities".into(), options.smooth_velocities.to_string());
    let scale = options.pixel_to_meter / n as f64;
    Ok(ImportedPendulum {
        trajectory: Trajectory::new(dt, states, metadata)?,
        link_lengths: [l1 * scale, l2 * scale],
    })
}
