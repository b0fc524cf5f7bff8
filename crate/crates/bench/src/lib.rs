//! Shared fixtures for the criterion benches.

use qtlab_core::grassmann::AdmissibleBasis;
use qtlab_core::{ModelId, ModelInstance};

/// The models the benches sweep: one per family.
pub fn representatives() -> Vec<ModelId> {
    vec![ModelId::Hurwitz, ModelId::Mv { r: 1 }, ModelId::ConifoldI { a: 1 }, ModelId::ConifoldII { a: 1 }]
}

pub fn instance(model: ModelId, order: i64) -> ModelInstance {
    ModelInstance::new(model, 9, order)
}

pub fn basis(model: ModelId, d_max: usize) -> AdmissibleBasis {
    AdmissibleBasis::from_model(model, d_max, d_max as i64)
}
