mod enumerate;
pub mod error;
mod hull;
pub mod inequality;
pub mod noise;
pub mod optimizer;
pub mod polytopes;
pub mod quantum;
pub mod reproduce;
pub mod tsirelson;
pub mod webs;

pub use error::{Error, Result};
