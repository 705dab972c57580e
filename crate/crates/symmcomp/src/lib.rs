//! Weighted symmetrization toolkit for the p-Poisson equation with a
//! variable Robin boundary parameter, built on power-weighted measures
//! with distinct volume and perimeter weights.
//!
//! The crate provides, at desk scale (planar triangulated domains):
//!
//! - weighted measures `|Ω|_ℓ = ∫_Ω |x|^ℓ dx`, weighted perimeters
//!   `P_k(Ω) = ∫_∂Ω |x|^k dH¹` and the associated isoperimetric inequality
//!   with explicit constant ([`geometry`]);
//! - weighted distribution functions, decreasing and weighted (radial)
//!   rearrangements, weighted Lebesgue and Lorentz norms ([`rearrangement`]);
//! - a P1 finite-element energy-minimization solver for
//!   `-div(|∇u|^{p-2}∇u) = f|x|^ℓ` with Robin condition
//!   `|∇u|^{p-2} ∂u/∂ν + β(x)|u|^{p-2}u = 0` ([`solver`]);
//! - the symmetrized radial problem on the measure-matched centered ball,
//!   its quadrature solution and the closed form for `f ≡ 1` ([`radial`]);
//! - first Robin eigenvalues through the weighted Rayleigh quotient, on
//!   meshes and on the symmetrized ball ([`spectral`]);
//! - an experiment harness that verifies the norm comparison, the pointwise
//!   comparison, the Faber-Krahn inequality, the minima inequality and the
//!   boundary flux identities, emitting machine-readable reports
//!   ([`harness`]).
//!
//! Runnable demonstrations live in `examples/`; the `symmcomp` binary is a
//! thin front end over [`config`] and [`runner`].

pub mod config;
pub mod error;
pub mod expr;
pub mod field;
pub mod geometry;
pub mod gronwall;
pub mod harness;
pub mod mesh;
pub mod params;
pub mod quad;
pub mod radial;
pub mod rearrangement;
pub mod rng;
pub mod runner;
pub mod solver;
pub mod sparse;
pub mod spectral;
pub mod tol;

pub use error::Error;
pub use field::ScalarField;
pub use geometry::SymmetrizedBall;
pub use mesh::TriMesh;
pub use params::WeightParams;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
