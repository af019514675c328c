pub mod algebraic;
pub mod bounds;
pub mod error;
pub mod pipeline;
pub mod real;
pub mod reduction;
pub mod registry;
pub mod search;
pub mod sequences;
pub mod serde_util;

pub use error::{Error, Result};
