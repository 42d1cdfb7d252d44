//! Stability analysis of planar Lax shocks in compressible hyperelastic
//! materials of Hadamard type.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: small dense real/complex kernel, cofactors, branch-aware
//!   square roots.
//! - [`materials`]: volumetric catalog, stresses, elasticity and acoustic
//!   tensors.
//! - [`shock`]: Lax 1-shock construction, Lax margins, frequency
//!   coefficients `η, N², ω, P, ζ, ρ, τ`.
//! - [`lopatinskii`]: the stable root `β`, the determinant in expanded,
//!   compact and factored form, imaginary-axis scans and winding numbers.
//! - [`classifier`]: uniform / weak verdicts, amplitude sweeps, closed-form
//!   references.
//! - [`oracle`]: brute-force cross-checks (full system assembly, dense
//!   eigensolver, finite differences) and the seeded verification suite.

pub mod classifier;
pub mod linalg;
pub mod lopatinskii;
pub mod materials;
pub mod oracle;
pub mod shock;

pub use linalg::C64;
