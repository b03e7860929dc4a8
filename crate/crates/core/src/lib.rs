//! Supports of solutions of linear differential equations over countable
//! fields, as a matroid on exponent windows, plus the tropical side.

pub mod axioms;
pub mod counterexample;
pub mod diffpoly;
pub mod enumeration;
pub mod error;
pub mod field;
pub mod linalg;
pub mod matroid;
pub mod par;
pub mod series;
pub mod tropical;
pub mod window;

pub use axioms::{Check, CheckReport, Verdict};
pub use counterexample::{CounterexampleInstance, Gap};
pub use diffpoly::{DiffMonomial, DiffPolynomial, Factor};
pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use matroid::{GeneratorFamily, SupportStrategy};
pub use par::Exec;
pub use series::MultiSeries;
pub use tropical::{BooleanSeries, TropDiffPolynomial, VertexPoly};
pub use window::{GroundWindow, Position, SupportSet};
