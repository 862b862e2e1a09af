//! Character groups of modular and Shimura-curve Jacobians at primes of bad
//! reduction, computed from supersingular isogeny graphs with exact arithmetic.
//!
//! The crate is layered bottom-up:
//! - [`exactlin`]: integer normal forms, kernels, saturation, quotients;
//! - [`galois`]: prime-field extension towers and polynomial factorization;
//! - [`isogeny`]: short Weierstrass curves, cyclic subgroups, Vélu isogenies;
//! - [`ssmod`]: supersingular vertex and edge modules with Hecke operators;
//! - [`hecke`]: Hecke algebras, new quotients and maximal ideals;
//! - [`tmod`]: duals, tensor products, Hom modules and S-isomorphism search;
//! - [`shimura`]: the Ribet kernel pipeline and the verification suite.

pub mod error;
pub mod exactlin;
pub mod galois;
pub mod hecke;
pub mod isogeny;
pub mod label;
pub mod shimura;
pub mod ssmod;
pub mod tmod;

pub use error::{Error, Result};
pub use exactlin::{FiniteAbelianGroup, IntegerMatrix, Lattice};
pub use hecke::{HeckeAlgebra, IdealInT, MaximalIdeal};
pub use label::Label;
pub use shimura::{CaseData, Verdict};
pub use ssmod::{EdgePoint, GraphModule, VertexPoint};
pub use tmod::{FiniteTModule, TModule};
