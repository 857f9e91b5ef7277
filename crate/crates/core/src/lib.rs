//! Discrete anisotropic total variation built from submodular stencil
//! potentials.
//!
//! A potential `F` on binary vectors `{0,1}^Σ` over a finite stencil
//! `Σ ⊂ Z^N` is extended to real vectors by the coarea formula, summed over
//! a lattice of mesh `h` into the discrete functional `J_h`, and compared
//! with its continuum limit `∫ φ(Du/|Du|) d|Du|`, `φ(ν) = F(ν·Σ)`.
//!
//! - [`stencil`], [`potential`], [`extension`]: stencils, potentials, the
//!   coarea extension and its property checks.
//! - [`lattice`]: grids, grid functions and sets, `J_h` and its checks.
//! - [`anisotropy`]: `φ`, its unit ball, polygon perimeters.
//! - [`convergence`]: rasterized experiments along `h → 0`.
//! - [`denoise`]: `min_u J_h(u) + λ‖u - g‖²` by exhaustive level-set
//!   oracles and a first-order dual solver.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod anisotropy;
pub mod convergence;
pub mod denoise;
pub mod error;
pub mod extension;
pub mod lattice;
pub mod potential;
pub mod potential_file;
pub mod presets;
pub mod stencil;

pub use error::{Error, Result};
pub use potential::StencilPotential;
pub use stencil::{BinaryVector, Stencil};
