//! Exact symbolic computation in complete differential graded Lie algebras
//! over the rationals, truncated by bracket length.
//!
//! The crate builds free cDGLs presented by generators and a differential,
//! all arithmetic happening in the quotient of the free graded Lie algebra
//! by brackets of length greater than a chosen truncation `N`. On top of
//! that it provides:
//!
//! * [`linalg`] — sparse exact rational linear algebra (kernel, rank, solve),
//! * [`lie`] — the free graded Lie algebra inside the truncated tensor
//!   algebra: brackets, Baker-Campbell-Hausdorff products, morphisms,
//!   derivations and their exponentials, Lyndon-style component bases,
//! * [`dgl`] — differentials, Maurer-Cartan elements, perturbations,
//!   homology with truncation-stability flags, coproducts, quotients,
//!   cycle lifting,
//! * [`simplicial`] — finite abstract simplicial complexes, boundaries,
//!   cones and prisms,
//! * [`models`] — the interval model, models of simplices and finite
//!   complexes, surface models from attaching words,
//! * [`homotopy`] — the `Λ(t,dt)` extension, left/right Maurer-Cartan
//!   equivalence, gauge reduction, path lifting, cylinders, cones and
//!   factorizations.
//!
//! All values are immutable and operations are pure; identical inputs
//! produce bit-identical outputs.

pub mod dgl;
pub mod homotopy;
pub mod lie;
pub mod linalg;
pub mod models;
pub mod simplicial;

mod error;

pub use error::{Error, Result};
pub use lie::{
    Alphabet, Generator, LieDerivation, LieElement, LieMorphism, Rational, Truncation,
};
pub use dgl::{DgLie, HomologyReport};
pub use simplicial::SimplicialComplex;
