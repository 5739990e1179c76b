//! Quantum dynamics of the exponentially damped harmonic oscillator via
//! symplectic (ABCD) transforms.
//!
//! The damped oscillator's time-dependent Hamiltonian
//! `H = e^{-2 gamma t} P^2/(2m) + e^{2 gamma t} m omega0^2 X^2 / 2`
//! maps onto a static oscillator of reduced frequency
//! `omega = sqrt(omega0^2 - gamma^2)` under a unitary whose parameters
//! `(A, B, C, D)`, `AD - BC = 1`, solve three coupled conditions — the same
//! parameters that label optical Fresnel transforms. This crate carries the
//! whole pipeline:
//!
//! - [`model`]: domain types and stable special-function recurrences;
//! - [`abcd`]: the closed-form damped-oscillator parameters, a general
//!   `B = 0` reduction, and finite-difference residual checks;
//! - [`states`]: exact squeezed-number-state wavefunctions on grids,
//!   Fresnel transforms of wavefunctions, Schrödinger residuals;
//! - [`fockspace`]: truncated Fock-basis Fresnel operators by two
//!   independent factorizations, similarity checks, squeezed states;
//! - [`splitstep`]: an independent split-operator propagator used as the
//!   numerical oracle for every closed form;
//! - [`wigner`]: closed-form and numeric Wigner functions, marginals, and
//!   figure-data generation.
//!
//! The `ckfresnel` binary exposes the pipelines as subcommands emitting
//! deterministic CSV/JSON artifacts.

pub mod abcd;
pub mod error;
mod fft;
pub mod fockspace;
pub mod model;
pub mod splitstep;
pub mod states;
pub mod wigner;

pub use abcd::{ck_abcd, reduce_b_zero, residual_check, ABCDState, ABCDTrajectory, CoefficientFunctions};
pub use error::{Error, Result};
pub use model::{GridSpec, OscillatorSpec};
pub use splitstep::{phase_aligned_error, split_step_evolve, PropagationPlan};
pub use states::{apply_fresnel_kernel, apply_inverse_fresnel_b0, ck_wavefunction, WavefunctionGrid};
pub use wigner::{wigner_closed_form, wigner_numeric, WignerGrid};
