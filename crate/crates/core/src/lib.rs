pub mod error;
pub mod lattice;
pub mod matrix;
pub mod snf;

pub use error::{Error, Result};
pub use matrix::IntMatrix;
