use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    #[default]
    Tanh,
}

/// Architecture of a fully connected network attached to a neural scalar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub input_names: Vec<String>,
    pub hidden: Vec<usize>,
    pub output_dim: usize,
    pub activation: Activation,
    /// Optional per-input affine normalization, `(x - offset) / scale`.
    /// Both empty, or both one entry per input.
    pub input_offset: Vec<f64>,
    pub input_scale: Vec<f64>,
}

impl NetworkSpec {
    pub fn new(input_names: Vec<String>, hidden: Vec<usize>, output_dim: usize) -> Result<Self> {
        let spec = NetworkSpec {
            input_names,
            hidden,
            output_dim,
            activation: Activation::Tanh,
            input_offset: Vec::new(),
            input_scale: Vec::new(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.input_names.is_empty() {
            return Err(Error::Config("a network needs at least one input".into()));
        }
        if self.output_dim == 0 {
            return Err(Error::Config("network output dimension must be >= 1".into()));
        }
        if self.hidden.contains(&0) {
            return Err(Error::Config("hidden layer widths must be >= 1".into()));
        }
        let n = self.input_names.len();
        for (what, v) in [("input_offset", &self.input_offset), ("input_scale", &self.input_scale)] {
            if !v.is_empty() && v.len() != n {
                return Err(Error::Config(format!(
                    "{what} has {} entries for {n} inputs",
                    v.len()
                )));
            }
        }
        if self.input_scale.iter().any(|&s| s == 0.0 || !s.is_finite()) {
            return Err(Error::Config("input_scale entries must be finite and nonzero".into()));
        }
        Ok(())
    }

    /// `(fan_in, fan_out)` of every affine layer, input to output.
    pub fn layers(&self) -> Vec<(usize, usize)> {
        let mut widths = Vec::with_capacity(self.hidden.len() + 2);
        widths.push(self.input_names.len());
        widths.extend_from_slice(&self.hidden);
        widths.push(self.output_dim);
        widths.windows(2).map(|w| (w[0], w[1])).collect()
    }

    pub fn weight_count(&self) -> usize {
        weight_count(self)
    }
}

/// Number of packed parameters: for every layer, `fan_in * fan_out` weights
/// then `fan_out` biases.
pub fn weight_count(spec: &NetworkSpec) -> usize {
    spec.layers().iter().map(|(i, o)| i * o + o).sum()
}

/// Evaluates the network. Hidden layers are affine followed by tanh; the
/// output layer is affine only. Weight matrices are stored row-major with one
/// row per output unit.
pub fn mlp_forward<S: Scalar>(spec: &NetworkSpec, weights: &[S], inputs: &[S]) -> Result<Vec<S>> {
    if inputs.len() != spec.input_names.len() {
        return Err(Error::Dimension(format!(
            "network takes {} inputs, got {}",
            spec.input_names.len(),
            inputs.len()
        )));
    }
    let expected = weight_count(spec);
    if weights.len() != expected {
        return Err(Error::Dimension(format!(
            "network has {expected} weights, got {}",
            weights.len()
        )));
    }

    let mut x: Vec<S> = if spec.input_offset.is_empty() && spec.input_scale.is_empty() {
        inputs.to_vec()
    } else {
        inputs
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let offset = spec.input_offset.get(i).copied().unwrap_or(0.0);
                let scale = spec.input_scale.get(i).copied().unwrap_or(1.0);
                (v.clone() - offset) / scale
            })
            .collect()
    };

    let layers = spec.layers();
    let last = layers.len() - 1;
    let mut at = 0;
    for (l, &(fan_in, fan_out)) in layers.iter().enumerate() {
        let w = &weights[at..at + fan_in * fan_out];
        let b = &weights[at + fan_in * fan_out..at + fan_in * fan_out + fan_out];
        at += fan_in * fan_out + fan_out;
        let mut y = Vec::with_capacity(fan_out);
        for j in 0..fan_out {
            let row = &w[j * fan_in..(j + 1) * fan_in];
            let mut acc = b[j].clone();
            for (wij, xi) in row.iter().zip(&x) {
                acc = acc + wij.clone() * xi.clone();
            }
            y.push(if l == last { acc } else { acc.tanh() });
        }
        x = y;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(inputs: usize, hidden: &[usize], out: usize) -> NetworkSpec {
        NetworkSpec::new(
            (0..inputs).map(|i| format!("x{i}")).collect(),
            hidden.to_vec(),
            out,
        )
        .unwrap()
    }

    #[test]
    fn weight_counts() {
        assert_eq!(weight_count(&spec(4, &[16, 16], 2)), 386);
        assert_eq!(weight_count(&spec(1, &[], 1)), 2);
        assert_eq!(weight_count(&spec(3, &[8], 1)), 41);
    }

    #[test]
    fn invalid_specs() {
        assert!(NetworkSpec::new(vec![], vec![], 1).is_err());
        assert!(NetworkSpec::new(vec!["a".into()], vec![0], 1).is_err());
        assert!(NetworkSpec::new(vec!["a".into()], vec![], 0).is_err());
    }

    #[test]
    fn zero_network_outputs_zero() {
        let s = spec(3, &[5, 4], 2);
        let w = vec![0.0; s.weight_count()];
        let y = mlp_forward(&s, &w, &[0.3, -2.0, 9.0]).unwrap();
        assert_eq!(y, vec![0.0, 0.0]);
    }

    #[test]
    fn linear_identity() {
        let s = spec(1, &[], 1);
        let y = mlp_forward(&s, &[1.0, 0.0], &[0.7]).unwrap();
        assert_eq!(y, vec![0.7]);
    }

    #[test]
    fn normalization_applies_before_first_layer() {
        let mut s = spec(1, &[], 1);
        s.input_offset = vec![1.0];
        s.input_scale = vec![2.0];
        s.validate().unwrap();
        let y = mlp_forward(&s, &[1.0, 0.0], &[5.0]).unwrap();
        assert_eq!(y, vec![2.0]);
    }

    #[test]
    fn length_mismatch() {
        let s = spec(2, &[], 1);
        assert!(mlp_forward(&s, &[0.0; 3], &[1.0]).is_err());
        assert!(mlp_forward(&s, &[0.0; 2], &[1.0, 2.0]).is_err());
    }
}
