//! Random spanning trees in random environments on the complete graph.

pub mod dsu;
pub mod env;
pub mod er;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod oracle;
pub mod samplers;
pub mod tree;
pub mod walk;
pub mod weights;
pub mod xfloat;

pub use error::{Error, Result};
