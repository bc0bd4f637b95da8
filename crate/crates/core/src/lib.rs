//! Classification of bipartite and tripartite quantum states against the
//! absolute resource classes (fully entangled fraction, conditional von
//! Neumann and Rényi entropy), with the noise channels, entanglement
//! swapping network and parameter sweeps needed to map their boundaries.

pub mod bloch;
pub mod channels;
pub mod classify;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod states;
pub mod swap;
pub mod sweep;
pub mod tables;
pub mod tolerances;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use states::DensityMatrix;
