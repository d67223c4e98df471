use std::collections::HashMap;

use super::blueprint::{CombineMode, NeuralBlueprint};
use super::network::mlp_forward;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Per-rollout store of named simulation variables, plus the blueprint and
/// the (possibly dual-valued) network weights used to resolve attachment
/// points.
///
/// Values are stamped with the step that recorded them; an input recorded in
/// an earlier step does not satisfy an attachment in the current one.
pub struct NeuralRegistry<'a, S: Scalar> {
    blueprint: &'a NeuralBlueprint,
    weights: &'a [S],
    values: HashMap<String, (S, u64)>,
    step: u64,
}

impl<'a, S: Scalar> NeuralRegistry<'a, S> {
    pub fn new(blueprint: &'a NeuralBlueprint, weights: &'a [S]) -> Result<Self> {
        if weights.len() != blueprint.num_weights() {
            return Err(Error::Dimension(format!(
                "blueprint has {} weights, registry was given {}",
                blueprint.num_weights(),
                weights.len()
            )));
        }
        Ok(NeuralRegistry {
            blueprint,
            weights,
            values: HashMap::new(),
            step: 0,
        })
    }

    pub fn blueprint(&self) -> &NeuralBlueprint {
        self.blueprint
    }

    /// True when at least one network is attached.
    pub fn is_active(&self) -> bool {
        !self.blueprint.is_empty()
    }

    pub fn has_attachment(&self, name: &str) -> bool {
        self.blueprint.get(name).is_some()
    }

    /// Starts a new simulation step; earlier recordings become stale.
    pub fn begin_step(&mut self) {
        self.step += 1;
    }

    pub fn record(&mut self, name: &str, value: &S) {
        if !self.is_active() {
            return;
        }
        match self.values.get_mut(name) {
            Some(slot) => *slot = (value.clone(), self.step),
            None => {
                self.values.insert(name.to_owned(), (value.clone(), self.step));
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<&S> {
        self.values
            .get(name)
            .filter(|(_, s)| *s == self.step)
            .map(|(v, _)| v)
    }

    /// Scalar attachment point: `analytical` passes through unchanged when no
    /// network is attached under `name`.
    pub fn resolve(&self, name: &str, analytical: S) -> Result<S> {
        if self.blueprint.get(name).is_none() {
            return Ok(analytical);
        }
        let mut out = self.resolve_vec(name, vec![analytical])?;
        Ok(out.pop().expect("one output"))
    }

    /// Vector-valued attachment point.
    pub fn resolve_vec(&self, name: &str, analytical: Vec<S>) -> Result<Vec<S>> {
        let Some(att) = self.blueprint.get(name) else {
            return Ok(analytical);
        };
        if analytical.len() != att.spec.output_dim {
            return Err(Error::Attachment {
                name: name.into(),
                message: format!(
                    "analytical value has {} components, network produces {}",
                    analytical.len(),
                    att.spec.output_dim
                ),
            });
        }
        let mut inputs = Vec::with_capacity(att.spec.input_names.len());
        let mut missing = Vec::new();
        for input in &att.spec.input_names {
            match self.get(input) {
                Some(v) => inputs.push(v.clone()),
                None => missing.push(input.clone()),
            }
        }
        if !missing.is_empty() {
            return Err(Error::MissingInputs {
                name: name.into(),
                missing,
            });
        }
        let nn = mlp_forward(&att.spec, &self.weights[att.weight_range()], &inputs).map_err(|e| {
            Error::Attachment {
                name: name.into(),
                message: e.to_string(),
            }
        })?;
        Ok(match att.mode {
            CombineMode::Residual => analytical.into_iter().zip(nn).map(|(a, n)| a + n).collect(),
            CombineMode::Replace => nn,
        })
    }
}
