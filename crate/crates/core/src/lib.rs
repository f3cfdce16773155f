//! Biased Maker-Breaker games on explicit hypergraphs: boards built from
//! linear systems and pattern hypergraphs, exact parameters, strategies, win
//! criteria, an exact solver for tiny boards and Monte Carlo threshold
//! estimation.

pub mod building;
pub mod criteria;
pub mod engine;
pub mod experiments;
pub mod error;
pub mod hypergraph;
pub mod linear;
pub mod serde_util;
pub mod solver;
pub mod strategies;

pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, Vertex};
