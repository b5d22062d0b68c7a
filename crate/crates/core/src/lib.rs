//! Exact symbolic computation with Lie algebroids, Poisson-Nijenhuis style
//! pairs and Dirac structures, expressed through the big bracket on the
//! bigraded algebra of functions on `T*[2]A[1]`.

pub mod corpus;
pub mod error;
pub mod geometry;
pub mod kernel;
pub mod linalg;
pub mod pairs;
pub mod poly;
pub mod proto;
pub mod relations;
pub mod report;

pub use error::{Error, Result};
pub use geometry::{AlgebroidStructure, Bivector, Endomorphism, GeometricTensor, TwoForm};
pub use kernel::{Bidegree, Degree, Monomial, Names, Superfunction};
pub use linalg::Matrix;
pub use poly::{int, rat, Poly, Rational};
pub use report::{CheckReport, Regime, Verdict};
