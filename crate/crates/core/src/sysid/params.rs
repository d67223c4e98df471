use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{MultiBodyModel, ParamKind};
use crate::neural::NeuralBlueprint;

/// One optimization variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamEntry {
    pub name: String,
    /// `None` for network weights.
    pub bounds: Option<(f64, f64)>,
}

/// `θ = [θ_AM, θ_NN]`: free model parameters in canonical order, followed by
/// the packed network weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterVector {
    pub values: Vec<f64>,
    pub entries: Vec<ParamEntry>,
    num_model: usize,
}

/// Masses and lengths never go below this fraction of their starting value,
/// which keeps the mass matrix invertible during optimization.
pub const DEGENERACY_GUARD: f64 = 1e-3;

impl ParameterVector {
    pub fn from_problem(model: &MultiBodyModel, blueprint: &NeuralBlueprint) -> Self {
        let mut entries = Vec::new();
        let mut values = Vec::new();
        for (name, kind, value, (lo, hi)) in model.free_params() {
            let lo = match kind {
                ParamKind::Mass | ParamKind::Length => lo.max(DEGENERACY_GUARD * value),
                _ => lo,
            };
            entries.push(ParamEntry { name, bounds: Some((lo, hi)) });
            values.push(value);
        }
        let num_model = entries.len();
        for att in blueprint.attachments() {
            for k in 0..att.spec.weight_count() {
                entries.push(ParamEntry {
                    name: format!("{}[{k}]", att.name),
                    bounds: None,
                });
            }
        }
        values.extend_from_slice(blueprint.weights());
        ParameterVector { values, entries, num_model }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn num_model(&self) -> usize {
        self.num_model
    }

    pub fn num_network(&self) -> usize {
        self.values.len() - self.num_model
    }

    pub fn model_part<'a>(&self, theta: &'a [f64]) -> &'a [f64] {
        &theta[..self.num_model]
    }

    pub fn network_part<'a>(&self, theta: &'a [f64]) -> &'a [f64] {
        &theta[self.num_model..]
    }

    pub fn bounds(&self) -> Vec<Option<(f64, f64)>> {
        self.entries.iter().map(|e| e.bounds).collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.name.clone()).collect()
    }

    pub fn check(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.len() {
            return Err(Error::Dimension(format!(
                "parameter vector has {} entries, layout expects {}",
                theta.len(),
                self.len()
            )));
        }
        Ok(())
    }
}

/// Clamps bounded entries into their interval.
pub fn project(theta: &mut [f64], bounds: &[Option<(f64, f64)>]) {
    for (v, b) in theta.iter_mut().zip(bounds) {
        if let Some((lo, hi)) = b {
            *v = v.clamp(*lo, *hi);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Link, Param};
    use crate::neural::NetworkSpec;

    #[test]
    fn layout_puts_model_first() {
        let mut l0 = Link::point_mass(1.0, 1.0);
        l0.mass = Param::free(1.0, 0.0, 5.0);
        l0.length = Param::free(1.0, 0.5, 2.0);
        let model = MultiBodyModel::chain(vec![l0]);
        let mut bp = NeuralBlueprint::empty();
        let spec = NetworkSpec::new(vec!["q0".into()], vec![2], 1).unwrap();
        bp.attach("joint_torque_0", spec, Default::default(), None, None).unwrap();
        let p = ParameterVector::from_problem(&model, &bp);
        assert_eq!(p.num_model(), 2);
        assert_eq!(p.num_network(), 7);
        assert_eq!(p.entries[0].name, "link0.mass");
        // lower mass bound raised by the degeneracy guard
        assert_eq!(p.entries[0].bounds, Some((1e-3, 5.0)));
        assert_eq!(p.entries[1].bounds, Some((0.5, 2.0)));
        assert_eq!(p.entries[2].name, "joint_torque_0[0]");
        assert!(p.entries[2].bounds.is_none());
    }

    #[test]
    fn projection_clamps_only_bounded() {
        let mut t = vec![-1.0, 7.0, 100.0];
        project(&mut t, &[Some((0.0, 1.0)), Some((0.0, 5.0)), None]);
        assert_eq!(t, vec![0.0, 5.0, 100.0]);
    }
}
