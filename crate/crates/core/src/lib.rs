//! Quantum Hamiltonian reduction of Laplace–Beltrami operators under polar
//! actions of compact Lie groups.
//!
//! The pipeline runs from Killing fields through the inertia operator and
//! orbit density to the reduced radial operator
//! `Δ_red = Δ_Σ - δ^{-1/2} Δ_Σ(δ^{1/2}) + b^{αβ} ρ'(T_α) ρ'(T_β)`
//! on a section of the action, then discretizes it and computes spectra.

pub mod check;
pub mod equivariant;
pub mod error;
pub mod geometry;
pub mod lie;
pub mod oracle;
pub mod poly;
pub mod quad;
pub mod reduce;
pub mod spectral;
pub mod testfn;

pub use check::{CheckReport, CheckResult};
pub use error::{Error, Result};
