//! Fire dynamics on uniform Cayley trees: exact simulation through cut-trees,
//! small-`n` exact laws, and samplers for the large-`n` limits.

pub mod cuttree;
pub mod dsu;
pub mod dynamics;
pub mod error;
pub mod figure;
pub mod limitlaws;
pub mod replicas;
pub mod stats;
pub mod stream;
pub mod treegen;

pub use error::{Error, Result};
