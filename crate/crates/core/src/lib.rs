pub mod ac;
pub mod catalog;
pub mod classify;
pub mod enumerate;
pub mod error;
pub mod generate;
pub mod instance;
pub mod oracle;
pub mod pattern;
pub mod solvers;
pub mod occurrence;
pub mod order;
pub mod recognition;

pub use error::{Error, Result};
pub use instance::{Assignment, Instance, ValueUniverse};
pub use order::TotalOrder;
pub use pattern::{Pattern, PatternName};
