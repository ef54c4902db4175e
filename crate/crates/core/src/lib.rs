//! Computational toolkit for free groups acting on trees: reduced words,
//! Stallings graphs, Bass-Serre tree models, staggered relator sets, the
//! Howie subgroup chain, Cohen-Lyndon basis windows and the homology of
//! one-relator-style quotients.

pub mod asphericity;
pub mod chain;
pub mod error;
pub mod gog;
pub mod homology;
pub mod perm;
pub mod sample;
pub mod stagger;
pub mod stallings;
pub mod trees;
pub mod words;

pub use error::{Error, Result};
pub use words::{Generator, Letter, Word};
