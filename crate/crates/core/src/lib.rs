//! Partial combinatory algebras with sampled law checking: the term and
//! numeric models, bracket abstraction, a standard library of combinators,
//! adjoining partial functions as oracles, applicative morphisms, and
//! assemblies over a PCA.

pub mod assemblies;
pub mod bracket;
pub mod density;
pub mod kernel;
pub mod morphisms;
pub mod oracle;
pub mod report;
pub mod stdlib;
pub mod suite;
pub mod syntax;

pub use kernel::{Element, Fuel, Halt, Pca, Stuck};
