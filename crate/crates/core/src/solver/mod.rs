//! Fixed-point machinery for the mild formulation
//! `u(t) = P_t u₀ + ∫₀^t P_{t−r} ⟨∇u(r), ∇Z⟩ dr`.

pub mod bounds;
pub mod config;
pub mod contraction;
pub mod integral;
pub mod path;
pub mod picard;

pub use bounds::verify_gamma_bounds;
pub use config::{Rho, SolverConfig, U0Kind};
pub use contraction::{contraction_estimate, ContractionStudy};
pub use integral::{integral_operator, product_weights, IntegralOutput};
pub use path::{initial_datum, initial_term, interior_bump, weighted_holder_norm, TimePath};
pub use picard::{
    choose_rho, picard_solve, picard_solve_problem, random_path, IterationDiag, PicardResult,
    Problem, StartGuess, KNOT_LADDER,
};
