//! Shape-constrained polynomial approximation toolkit.
//!
//! The crate is organised bottom-up:
//!
//! - [`polynomial`]: dense univariate polynomials, real roots, extrema,
//!   inflection points and interval preimages.
//! - [`funcexpr`]: a small expression language and piecewise functions
//!   built from it, with deviation norms against polynomials.
//! - [`smoothness`]: symmetric finite differences and weighted
//!   Ditzian–Totik moduli of smoothness.
//! - [`shape`]: secant (λ-combination) convexity tests and coconvexity
//!   classes `Δ²(Y)`.
//! - [`approx`]: best uniform (co)convex polynomial approximation through a
//!   discretised minimax linear program, and Jackson-constant extraction.
//! - [`domainsep`]: domain-of-(co)convex-polynomial checks and hyperplane
//!   separation predicates.
//! - [`replication`]: built-in worked examples with their reference values.
//!
//! Grid scans run on rayon when the `parallel` feature is enabled (the
//! default); [`exec::Exec`] selects the strategy per call.

pub mod approx;
pub mod domainsep;
pub mod exec;
pub mod funcexpr;
pub mod polynomial;
pub mod replication;
pub mod shape;
pub mod smoothness;

pub use approx::{ApproxResult, JacksonReport};
pub use exec::Exec;
pub use funcexpr::{Expr, PiecewiseFn};
pub use polynomial::{Interval, Polynomial};
pub use shape::{ShapeVerdict, YPartition};
