//! Spectral laboratory for the transport equation
//! `∂u/∂t = σ²Δu + ⟨∇u, ∇Z⟩` on a box with Dirichlet conditions and a rough
//! drift potential `Z`.
//!
//! The ambient space is a periodic torus ([`Grid`]); the box `D` sits well
//! inside it. Fields live on the torus grid ([`RealField`]), solutions in the
//! sine eigenbasis of `D` ([`SineCoeffs`]). Products of a function with a
//! distribution go through smoothed frequency truncations ([`paraproduct`]),
//! and the mild solution is found by Picard iteration in a weighted Hölder
//! norm ([`solver`]).

// `!(x > a)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dirichlet;
pub mod error;
mod fft;
pub mod field;
pub mod ftf;
pub mod grid;
pub mod noise;
pub mod paraproduct;
pub mod quadrature;
pub mod report;
pub mod rng;
pub mod sobolev;
pub mod solver;
pub mod spectral;
pub mod studies;

pub use dirichlet::{DirichletLaplacian, EigenIndex, SineCoeffs};
pub use error::{Error, Result};
pub use field::{RealField, SpectralCoeffs, VectorField};
pub use grid::Grid;
pub use noise::{NoiseKind, NoiseSpec};
pub use paraproduct::{ProductOptions, ProductReport};
pub use report::BoundReport;
pub use sobolev::SobolevIndex;
pub use solver::{SolverConfig, TimePath};
