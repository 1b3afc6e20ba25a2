pub mod algact;
pub mod checker;
pub mod error;
pub mod finrel;
pub mod finset;
pub mod finstoch;
pub mod multiset;
pub mod search;

pub use error::{Error, Result};
