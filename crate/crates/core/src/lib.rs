pub mod cli;
pub mod counting;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod graphon;
pub mod motif;
pub mod sampler;
pub mod stats;

pub use error::{Error, Result};
