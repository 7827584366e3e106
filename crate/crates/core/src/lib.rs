pub mod bounds;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod newton;
pub mod padic;
pub mod poly;
pub mod rational;
pub mod search;

pub use error::{Error, Result};
