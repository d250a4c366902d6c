pub mod error;
pub mod geometry;
pub mod jordan;
pub mod octonion;
pub mod poisson;
pub mod quadrature;
pub mod rng;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
