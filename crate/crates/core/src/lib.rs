//! Cut-set bounds for Gaussian relay networks and for the two deterministic
//! models derived from them: the linear deterministic (LD) model over GF(2)
//! and the discrete superposition (DS) model over the Gaussian integers.
//!
//! The crate also replays, sample by sample, the chain of channel
//! transformations that bounds the gap between a Gaussian cut and its DS
//! counterpart, and runs the experiments showing that the LD gap is
//! unbounded while the DS gap is not.

pub mod cutbounds;
pub mod error;
pub mod experiments;
pub mod gf2linalg;
pub mod infotheory;
pub mod netmodel;
pub mod reduction;
pub mod theoremtrace;
pub mod topologies;

pub use error::{Error, Result};
pub use netmodel::{ComplexGain, Cut, GaussianNetwork, NodeId, INF_GAIN};
