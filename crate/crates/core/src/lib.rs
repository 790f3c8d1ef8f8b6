pub mod binomial;
pub mod clopper_pearson;
pub mod coverage;
pub mod error;
pub mod montecarlo;
pub mod special;

pub use error::{Error, Result};
