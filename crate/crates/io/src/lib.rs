//! JSON instance and solution documents, and the `xcore` command line.

pub mod cli;
pub mod doc;
pub mod expr;
pub mod json;
pub mod solution;

pub use doc::{parse_document, parse_instance, write_instance, DocError, Extra, InstanceDoc, Mode, FORMAT};
pub use solution::SolutionDoc;
