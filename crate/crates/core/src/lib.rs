pub mod cm_check;
pub mod compensated;
pub mod cq_weights;
pub mod error;
pub mod harness;
pub mod hn_stepper;
pub mod maxwell_fem;
pub mod series;
pub mod sparse;
pub mod special_fn;

pub use error::{Error, Result};
