//! Operator algebra on truncated Fock spaces.
//!
//! The crate builds dense complex representations of the boson ladder
//! algebra and of su(1,1) on the basis |0>..|N-1>, and uses them to check a
//! family of algebraic and dynamical identities numerically:
//!
//! - ladder / Holstein-Primakoff generators, commutators, Casimir, unitary
//!   evolution, and operator-span residuals ([`fock`]);
//! - counting statistics of n quanta over m modes under the coproduct of
//!   each algebra, with a brute-force tensor-product oracle ([`stats`]);
//! - harmonic-oscillator constructions inside su(1,1): the Schwinger
//!   realization, linear observables with Heisenberg-pair checks, and the
//!   inverse Holstein-Primakoff ladder ([`oscillator`]);
//! - 2x2 boost identities, the internal-symmetry contrast between the two
//!   algebras under boost conjugation, wavevector transforms, and a
//!   Poisson-bracket check for polarization coordinates ([`lorentz`]);
//! - Jaynes-Cummings dynamics for linear and intensity-dependent couplings,
//!   with closed-form cross-checks and collapse/revival estimators ([`jc`]).
//!
//! All identities are asserted on interior blocks (see
//! [`operator::InteriorBlock`]): a hard cutoff corrupts the highest
//! occupation rows of every product, and the margin keeps that corruption
//! out of the assertion.

pub mod error;
pub mod fock;
pub mod jc;
pub mod lorentz;
pub mod operator;
pub mod oscillator;
pub mod stats;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
pub use fock::{
    casimir, commutator, evolve_unitary, is_admissible_kappa, make_ladder, make_su11_hp,
    span_residual, SU11Generators,
};
pub use jc::{
    barut_girardello_state, bessel_i0, block_eigenvalues, build_hamiltonian, collapse_time,
    evolve_state, glauber_state, moving_max_envelope, revival_period, series_s, sz_closed_linear_glauber,
    sz_closed_su11_bg, sz_closed_su11_glauber, sz_exact, AtomFieldState, JCModel, JCVariant,
    SeriesLabel, TimeSeries, COLLAPSE_THRESHOLD,
};
pub use lorentz::{
    boost_conjugated, boost_matrix, boosted_wavevector, exp_boost, internal_symmetry_residual,
    internal_symmetry_residual_with_probe, polarization_pb_residuals,
    polarization_pb_residuals_exact, su11_fundamental, BoostMatrix, Su11Fundamental, WaveVector,
};
pub use operator::{CMatrix, CVector, FockState, InteriorBlock, TruncatedOperator};
pub use oscillator::{
    generalized_bracket_check, identity_table, inverse_hp_ladder, schwinger_generators,
    su11_observables_linear, ObservableSource, OscillatorCheck, OscillatorPair,
    SU11Observables, SchwingerGenerators,
};
pub use stats::{
    compositions, coproduct_state, dist_su11, dist_weyl, distribution_from_state, Algebra,
    Composition, MultiModeState, OccupationDistribution,
};
pub use verify::{all_pass, collapse_ratio, run_all, Bound, VerifyRow};

pub use num_complex::Complex64 as C64;
