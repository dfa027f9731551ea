pub mod catalog;
pub mod cli;
pub mod complex;
pub mod error;
pub mod fkdet;
pub mod freegroup;
pub mod groupring;
pub mod json;
pub mod leading;
pub mod oracle;
pub mod polytope;
pub mod restriction;
pub mod selftest;
pub mod stallings;

pub use error::{Error, Result};
