//! Folding of Coxeter graphs along groups of graph symmetries.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod folding;
pub mod graph;
pub mod linalg;
pub mod oracle;
pub mod repr;
pub mod rootbasis;
pub mod scalar;
pub mod simplex;
pub mod symmetry;

pub use error::{Error, Result};

pub type Matrix64 = linalg::Matrix<f64>;
pub type Matrix32 = linalg::Matrix<f32>;
pub type RootBasis64 = rootbasis::RootBasis<f64>;
pub type RootBasis32 = rootbasis::RootBasis<f32>;
pub type FoldedSystem64 = folding::FoldedSystem<f64>;
pub type FoldedSystem32 = folding::FoldedSystem<f32>;
pub type ReflectionRep64 = repr::ReflectionRep<f64>;
pub type ReflectionRep32 = repr::ReflectionRep<f32>;
