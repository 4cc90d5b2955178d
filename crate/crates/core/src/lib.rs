//! Exact computational convex geometry: mixed volumes, mixed area measures,
//! the product/convolution algebra of translation-invariant valuations, and
//! inequality checks of Hodge-Riemann type, all in arbitrary-precision
//! rational arithmetic.
//!
//! The crate is organized around six pieces:
//!
//! * [`scalar`], [`vector`], [`body`], [`embed`] - exact rational scalars,
//!   zonotopes and V-polytopes, and linear embeddings into product spaces;
//! * [`ball`] - deterministic zonotopal approximants of the Euclidean ball;
//! * [`mixedvol`] - two independent exact mixed-volume algorithms (pruned
//!   generator enumeration and inclusion-exclusion polarization);
//! * [`measures`] - atomic mixed area measures of zonotopes and exact
//!   measure-equality tests;
//! * [`valg`] - graded mixed-volume valuations with product and convolution;
//! * [`hrcheck`] - the inequality checkers and their tolerance model.
//!
//! Everything except the documented eigenvalue step of the Gram positivity
//! check is computed in exact rational arithmetic; results are deterministic
//! for a fixed seed and independent of the worker count.

pub mod ball;
pub mod body;
pub mod embed;
pub mod error;
pub mod hrcheck;
pub mod hull;
pub mod jacobi;
pub mod linalg;
pub mod measures;
pub mod mixedvol;
pub mod report;
pub mod rng;
pub mod samples;
pub mod scalar;
pub mod valg;
pub mod vector;

pub use body::{Body, VPolytope, Zonotope};
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use vector::Vector;
