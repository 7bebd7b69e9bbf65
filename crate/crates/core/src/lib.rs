pub mod core_types;
pub mod corpus;
pub mod error;
pub mod numerics;
pub mod series_eval;
pub mod theorems;
pub mod transforms;

pub use error::{Error, Result};
