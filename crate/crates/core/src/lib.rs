//! Closed-form dynamics of the two integrable degenerate parametric amplifier
//! models (pump phase 0 and π/2), together with the numerical oracles that
//! check every closed form independently.
//!
//! The variant-specific formulas live behind the [`model::IntegrableModel`]
//! trait. [`model::ModelRegistry`] maps the names `"phi0"` and `"phi90"` to
//! boxed strategies, so every other module works with `&ModelParams` only.
//!
//! Conventions: ħ = 1, the Hamiltonian is
//! `H = a(t) p² + b(t) q² + d(t)(pq + qp)`, and the Ermakov state is the
//! six-tuple `(α, β, γ, δ, ε, κ)` of the Gaussian-Hermite wave functions
//! `ψₙ = exp(i(αx² + δx + κ) + i(2n+1)γ) √|β| hₙ(βx + ε)`.

pub mod canonical;
pub mod characteristic;
pub mod ermakov;
pub mod error;
pub mod fock;
pub mod model;
pub mod oracle;
pub mod phase_space;
pub mod propagators;
pub mod statistics;
pub mod verify;

pub use error::{Error, Result};
pub use model::{InitialData, ModelParams, ModelRegistry, Variant};

/// Complex numbers used throughout.
pub type C64 = num_complex::Complex64;
