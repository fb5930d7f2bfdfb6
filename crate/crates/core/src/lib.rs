pub mod analytic;
pub mod cli;
pub mod drinfeld;
pub mod error;
pub mod ff;
pub mod hom;
pub mod linalg;
pub mod motive;
pub mod ore;
pub mod poly;

mod display;

pub use error::{Error, Result};
pub use ff::{FieldElement, FieldTower, Level};
pub use linalg::FqMatrix;
pub use ore::OrePolynomial;
pub use poly::{DensePolynomial, PolyMatrix, RationalFunction};
pub use drinfeld::{basic_j_invariant_parameters, DrinfeldModule, JInvariantParameter};
pub use hom::{DrinfeldMorphism, HomSpace};
pub use motive::{CharPoly, FrobeniusAlgorithm, MotiveVector};
pub use analytic::{AnalyticDrinfeldModule, LazyAdditiveSeries};
