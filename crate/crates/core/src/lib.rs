//! Exact computations with operads in groupoids: colored and parenthesized braids,
//! chord diagrams, associators, mixed models and a coherence checker for their algebras.

pub mod algebra_checker;
pub mod associator;
pub mod braid_engine;
pub mod chord_diagrams;
pub mod colored_operads;
pub mod error;
pub mod mixed_model;
pub mod exact_algebra;
pub mod operad_axioms;
pub mod parenthesized_operads;
pub mod report;
pub mod trees_magma;
pub mod voronov_product;

pub use braid_engine::{BraidWord, Permutation};
pub use error::{Error, Result};
pub use exact_algebra::{NCSeries, Rational};
