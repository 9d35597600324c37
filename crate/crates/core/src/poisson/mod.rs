//! Quadratic Poisson algebras on matrix generators and the checks run on them.

pub mod algebra;
pub mod catalog;
pub mod checks;
pub mod components;
pub mod groupoid;

pub use algebra::{AlgebraSpec, Block, Family, PoissonAlgebra, QSpec};
pub use checks::{Backend, MapMode, MapReport, MapSign, Options, Pattern, Report};
