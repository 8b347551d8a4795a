//! Shared fixtures for the criterion benches.

use bosonalg::{glauber_state, AtomFieldState, JCModel, JCVariant, C64};

/// Resonant model with unit coupling, the shape used by the closed-form
/// comparisons.
pub fn resonant_model(variant: JCVariant, cutoff: usize) -> JCModel {
    JCModel::new(variant, 1.0, 1.0, 1.0, cutoff).expect("valid fixture model")
}

/// Atom in its ground state, field in a coherent state of amplitude `alpha`.
pub fn coherent_initial(alpha: f64, cutoff: usize) -> AtomFieldState {
    let field = glauber_state(C64::new(alpha, 0.0), cutoff).expect("fixture within guards");
    AtomFieldState::ground_with_field(&field).expect("fixture state")
}
