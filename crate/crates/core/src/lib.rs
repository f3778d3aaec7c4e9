pub mod error;
pub mod number;
pub mod series;
pub mod symmetry;
pub mod enumerate;
pub mod feq;
pub mod limits;
pub mod modular;
pub mod moments;
pub mod orbits;
pub mod cli;

pub use error::{Error, Result};
