//! Neural blueprints: which attachment points receive a network, with what
//! architecture and weights.
//!
//! File grammar (`#` comments, entries separated by `;`, `,` or newlines):
//!
//! ```text
//! attach "contact_friction" {
//!     inputs = [vt_x, vt_y, f_n, depth];
//!     hidden = [8];
//!     output = 2;
//!     weights = [0.01, -0.02, ...];   # optional, layer-major, weights then biases
//!     seed = 7;                       # optional, used when weights are omitted
//!     activation = tanh;              # optional, tanh is the only choice
//!     mode = residual;                # optional: residual (phi + NN) | replace (NN)
//!     input_offset = [0, 0, 0, 0];    # optional normalization (x - offset) / scale
//!     input_scale = [1, 1, 10, 0.01];
//! }
//! ```
//!
//! Unknown keys, unknown attachment names, and weight lists whose length does
//! not match the architecture are rejected with the offending location.

use std::fmt::Write as _;

use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::network::{Activation, NetworkSpec};
use crate::error::{Error, Result};
use crate::text::Cursor;

/// Half-width of the uniform range used when a blueprint omits weights.
pub const INIT_RANGE: f64 = 0.01;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CombineMode {
    /// `analytical + network`
    #[default]
    Residual,
    /// `network` only; the analytical value is ignored.
    Replace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attachment {
    pub name: String,
    pub spec: NetworkSpec,
    pub mode: CombineMode,
    pub seed: Option<u64>,
    offset: usize,
}

impl Attachment {
    /// Offset of this network's weights in the packed vector.
    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn weight_range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.spec.weight_count()
    }
}

/// Output dimension of a recognised attachment point, or `None` if the
/// simulator exposes no neural scalar with that name.
///
/// Attachment points:
/// - `contact_friction`: tangential contact force (2 outputs)
/// - `contact_normal`: contact normal force (1 output)
/// - `joint_torque_<i>`: additive generalized torque at joint `i`
/// - `joint_damping_<i>`: viscous damping coefficient of joint `i`
pub fn attachment_output_dim(name: &str) -> Option<usize> {
    let indexed = |prefix: &str| {
        name.strip_prefix(prefix)
            .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
    };
    match name {
        "contact_friction" => Some(2),
        "contact_normal" => Some(1),
        _ if indexed("joint_torque_") || indexed("joint_damping_") => Some(1),
        _ => None,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct NeuralBlueprint {
    attachments: Vec<Attachment>,
    weights: Vec<f64>,
}

impl NeuralBlueprint {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.attachments.is_empty()
    }

    pub fn attachments(&self) -> &[Attachment] {
        &self.attachments
    }

    pub fn get(&self, name: &str) -> Option<&Attachment> {
        self.attachments.iter().find(|a| a.name == name)
    }

    /// Packed network weights, all attachments concatenated in declaration order.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn num_weights(&self) -> usize {
        self.weights.len()
    }

    pub fn set_weights(&mut self, weights: Vec<f64>) -> Result<()> {
        if weights.len() != self.weights.len() {
            return Err(Error::Dimension(format!(
                "blueprint has {} weights, got {}",
                self.weights.len(),
                weights.len()
            )));
        }
        self.weights = weights;
        Ok(())
    }

    /// Appends an attachment. Weights default to the seeded near-zero
    /// initialization when not given.
    pub fn attach(
        &mut self,
        name: &str,
        spec: NetworkSpec,
        mode: CombineMode,
        weights: Option<Vec<f64>>,
        seed: Option<u64>,
    ) -> Result<()> {
        spec.validate().map_err(|e| Error::Attachment {
            name: name.into(),
            message: e.to_string(),
        })?;
        let Some(dim) = attachment_output_dim(name) else {
            return Err(Error::Attachment {
                name: name.into(),
                message: "unknown attachment point".into(),
            });
        };
        if spec.output_dim != dim {
            return Err(Error::Attachment {
                name: name.into(),
                message: format!("output must be {dim}, got {}", spec.output_dim),
            });
        }
        if self.get(name).is_some() {
            return Err(Error::Attachment {
                name: name.into(),
                message: "attached twice".into(),
            });
        }
        let count = spec.weight_count();
        let w = match weights {
            Some(w) if w.len() != count => {
                return Err(Error::Attachment {
                    name: name.into(),
                    message: format!("expected {count} weights, got {}", w.len()),
                })
            }
            Some(w) => w,
            None => init_weights(count, seed.unwrap_or(DEFAULT_SEED)),
        };
        self.attachments.push(Attachment {
            name: name.into(),
            spec,
            mode,
            seed,
            offset: self.weights.len(),
        });
        self.weights.extend(w);
        Ok(())
    }

    /// Per-attachment weight vectors.
    pub fn unpack(&self) -> Vec<Vec<f64>> {
        self.attachments
            .iter()
            .map(|a| self.weights[a.weight_range()].to_vec())
            .collect()
    }

    pub fn pack(&self, parts: &[Vec<f64>]) -> Result<Vec<f64>> {
        if parts.len() != self.attachments.len() {
            return Err(Error::Dimension(format!(
                "{} attachments, {} weight groups",
                self.attachments.len(),
                parts.len()
            )));
        }
        let mut out = Vec::with_capacity(self.weights.len());
        for (a, p) in self.attachments.iter().zip(parts) {
            if p.len() != a.spec.weight_count() {
                return Err(Error::Attachment {
                    name: a.name.clone(),
                    message: format!("expected {} weights, got {}", a.spec.weight_count(), p.len()),
                });
            }
            out.extend_from_slice(p);
        }
        Ok(out)
    }

    /// Blueprint with the same architectures and all weights zero.
    pub fn zeroed(&self) -> Self {
        let mut b = self.clone();
        b.weights.iter_mut().for_each(|w| *w = 0.0);
        b
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_blueprint(text)
    }

    /// Serializes to the file grammar. Weights are always written explicitly.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for a in &self.attachments {
            let _ = writeln!(s, "attach \"{}\" {{", a.name);
            let _ = writeln!(s, "    inputs = [{}];", a.spec.input_names.join(", "));
            let hidden: Vec<String> = a.spec.hidden.iter().map(|h| h.to_string()).collect();
            let _ = writeln!(s, "    hidden = [{}];", hidden.join(", "));
            let _ = writeln!(s, "    output = {};", a.spec.output_dim);
            if a.mode == CombineMode::Replace {
                let _ = writeln!(s, "    mode = replace;");
            }
            if let Some(seed) = a.seed {
                let _ = writeln!(s, "    seed = {seed};");
            }
            if !a.spec.input_offset.is_empty() {
                let _ = writeln!(s, "    input_offset = [{}];", join_numbers(&a.spec.input_offset));
            }
            if !a.spec.input_scale.is_empty() {
                let _ = writeln!(s, "    input_scale = [{}];", join_numbers(&a.spec.input_scale));
            }
            let _ = writeln!(s, "    weights = [{}];", join_numbers(&self.weights[a.weight_range()]));
            let _ = writeln!(s, "}}");
        }
        s
    }
}

fn join_numbers(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ")
}

/// Uniform in `[-INIT_RANGE, INIT_RANGE]` from a ChaCha stream, so the same
/// seed gives the same weights on every platform.
pub fn init_weights(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Uniform::new_inclusive(-INIT_RANGE, INIT_RANGE).expect("valid range");
    (0..count).map(|_| dist.sample(&mut rng)).collect()
}

fn nonneg_int(c: &mut Cursor) -> Result<usize> {
    let (l, col) = c.here();
    let v = c.number()?;
    if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
        return Err(Error::parse(l, col, format!("expected a non-negative integer, found {v}")));
    }
    Ok(v as usize)
}

pub fn parse_blueprint(text: &str) -> Result<NeuralBlueprint> {
    let mut c = Cursor::new(text)?;
    let mut bp = NeuralBlueprint::empty();
    while !c.at_end() {
        let (kw, l, col) = c.ident()?;
        if kw != "attach" {
            return Err(Error::parse(l, col, format!("expected `attach`, found `{kw}`")));
        }
        let (name_line, name_col) = c.here();
        let name = c.string()?;
        if attachment_output_dim(&name).is_none() {
            return Err(Error::parse(
                name_line,
                name_col,
                format!("unknown attachment name `{name}`"),
            ));
        }
        c.expect_punct('{')?;

        let mut inputs: Option<Vec<String>> = None;
        let mut hidden: Option<Vec<usize>> = None;
        let mut output: Option<usize> = None;
        let mut weights: Option<(Vec<f64>, usize, usize)> = None;
        let mut seed: Option<u64> = None;
        let mut mode = CombineMode::Residual;
        let mut offset = Vec::new();
        let mut scale = Vec::new();
        let mut seen: Vec<String> = Vec::new();

        loop {
            c.skip_separators();
            if c.eat_punct('}') {
                break;
            }
            let (key, kl, kc) = c.ident()?;
            if seen.contains(&key) {
                return Err(Error::parse(kl, kc, format!("duplicate key `{key}`")));
            }
            seen.push(key.clone());
            c.expect_punct('=')?;
            match key.as_str() {
                "inputs" => inputs = Some(c.list(|c| c.ident().map(|t| t.0))?),
                "hidden" => {
                    let (hl, hc) = c.here();
                    let widths = c.list(nonneg_int)?;
                    if widths.contains(&0) {
                        return Err(Error::parse(hl, hc, "hidden widths must be >= 1"));
                    }
                    hidden = Some(widths);
                }
                "output" => output = Some(nonneg_int(&mut c)?),
                "weights" => {
                    let (wl, wc) = c.here();
                    weights = Some((c.list(|c| c.number())?, wl, wc));
                }
                "seed" => seed = Some(nonneg_int(&mut c)? as u64),
                "activation" => {
                    let (a, al, ac) = c.ident()?;
                    if a != "tanh" {
                        return Err(Error::parse(al, ac, format!("unsupported activation `{a}`")));
                    }
                }
                "mode" => {
                    let (m, ml, mc) = c.ident()?;
                    mode = match m.as_str() {
                        "residual" => CombineMode::Residual,
                        "replace" => CombineMode::Replace,
                        _ => return Err(Error::parse(ml, mc, format!("unknown mode `{m}`"))),
                    };
                }
                "input_offset" => offset = c.list(|c| c.number())?,
                "input_scale" => scale = c.list(|c| c.number())?,
                _ => return Err(Error::parse(kl, kc, format!("unknown key `{key}`"))),
            }
        }

        let missing = |k: &str| Error::parse(l, col, format!("attachment `{name}` is missing `{k}`"));
        let spec = NetworkSpec {
            input_names: inputs.ok_or_else(|| missing("inputs"))?,
            hidden: hidden.unwrap_or_default(),
            output_dim: output.ok_or_else(|| missing("output"))?,
            activation: Activation::Tanh,
            input_offset: offset,
            input_scale: scale,
        };
        spec.validate()
            .map_err(|e| Error::parse(l, col, format!("attachment `{name}`: {e}")))?;
        let explicit = match weights {
            Some((w, wl, wc)) => {
                if w.len() != spec.weight_count() {
                    return Err(Error::parse(
                        wl,
                        wc,
                        format!(
                            "attachment `{name}` expects {} weights, found {}",
                            spec.weight_count(),
                            w.len()
                        ),
                    ));
                }
                Some(w)
            }
            None => None,
        };
        bp.attach(&name, spec, mode, explicit, seed)
            .map_err(|e| Error::parse(l, col, e.to_string()))?;
    }
    Ok(bp)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE: &str = r#"
        # friction residual
        attach "contact_friction" {
            inputs = [vt_x, vt_y, f_n, depth]
            hidden = [2]
            output = 2
            weights = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, -1, -2,
                       1, 2, 3, 4, 5, 6]
        }
    "#;

    #[test]
    fn empty_text_gives_empty_blueprint() {
        let bp = parse_blueprint("# nothing here\n").unwrap();
        assert!(bp.is_empty());
        assert_eq!(bp.num_weights(), 0);
    }

    #[test]
    fn explicit_weights_round_trip() {
        let bp = parse_blueprint(ONE).unwrap();
        assert_eq!(bp.num_weights(), 16);
        assert_eq!(bp.weights()[9], -2.0);
        let again = parse_blueprint(&bp.to_text()).unwrap();
        assert_eq!(again, bp);
    }

    #[test]
    fn omitted_weights_use_seeded_init() {
        let text = r#"attach "joint_torque_1" { inputs = [q1, qd0, qd1]; hidden = [8]; output = 1; seed = 42 }"#;
        let a = parse_blueprint(text).unwrap();
        let b = parse_blueprint(text).unwrap();
        assert_eq!(a.num_weights(), 41);
        assert_eq!(a.weights(), b.weights());
        assert!(a.weights().iter().all(|w| w.abs() <= INIT_RANGE));
        assert!(a.weights().iter().any(|&w| w != 0.0));
        let other = parse_blueprint(&text.replace("42", "43")).unwrap();
        assert_ne!(a.weights(), other.weights());
    }

    #[test]
    fn rejects_unknown_key_with_location() {
        let err = parse_blueprint("attach \"contact_normal\" {\n inputs=[depth]\n output=1\n colour=3 }")
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("unknown key `colour`"), "{msg}");
        assert!(msg.contains("line 4"), "{msg}");
    }

    #[test]
    fn rejects_unknown_attachment() {
        let err = parse_blueprint("attach \"wheel_slip\" { inputs=[a]; output=1 }").unwrap_err();
        assert!(err.to_string().contains("unknown attachment name"));
    }

    #[test]
    fn rejects_bad_widths_and_counts() {
        assert!(parse_blueprint("attach \"contact_normal\" { inputs=[a]; hidden=[0]; output=1 }").is_err());
        assert!(parse_blueprint("attach \"contact_normal\" { inputs=[a]; hidden=[1.5]; output=1 }").is_err());
        let err = parse_blueprint("attach \"contact_normal\" { inputs=[a]; output=1; weights=[1,2,3] }")
            .unwrap_err();
        assert!(err.to_string().contains("expects 2 weights, found 3"));
        // friction must produce a 2-vector
        assert!(parse_blueprint("attach \"contact_friction\" { inputs=[a]; output=1 }").is_err());
    }

    #[test]
    fn pack_unpack() {
        let mut bp = parse_blueprint(ONE).unwrap();
        bp.attach(
            "joint_damping_0",
            NetworkSpec::new(vec!["qd0".into()], vec![], 1).unwrap(),
            CombineMode::Replace,
            None,
            Some(3),
        )
        .unwrap();
        let parts = bp.unpack();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[1].len(), 2);
        assert_eq!(bp.pack(&parts).unwrap(), bp.weights());
    }

    #[test]
    fn attachment_names() {
        assert_eq!(attachment_output_dim("joint_torque_12"), Some(1));
        assert_eq!(attachment_output_dim("joint_torque_"), None);
        assert_eq!(attachment_output_dim("joint_torque_x"), None);
        assert_eq!(attachment_output_dim("contact_friction"), Some(2));
    }
}
