pub mod error;
pub mod hmops;
pub mod json;
pub mod opcore;
pub mod random;
pub mod scalar;
pub mod space;
pub mod suite;
pub mod toeplitz;

pub use error::{Error, Result};
pub use scalar::{Exact, Float, Mode, Scalar};
