pub mod casimir;
pub mod cli;
pub mod dirac;
pub mod error;
pub mod poisson;
pub mod quantum;
pub mod ring;
pub mod sample;
pub mod tensor;

pub use error::{Error, Result};
