//! Elementary symmetric partitions.

pub mod cli;
pub mod colors;
pub mod conjectures;
pub mod error;
pub mod esp;
pub mod oeis;
pub mod partition;
pub mod report;
pub mod rooted;
pub mod sequences;
pub mod series;

pub use error::{Error, Result};
pub use partition::{Partition, PartitionFamily};
