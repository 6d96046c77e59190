//! Simulation and verification laboratory for interactive locally
//! differentially private protocols: exact randomizer tables, transcript
//! experiments, the rejection-sampling reduction from full to sequential
//! interactivity, pointer-jumping separation experiments, locally private
//! hypothesis testing, and the oracles that audit all of it.

pub mod corpus;
pub mod dist;
pub mod error;
pub mod hypotest;
pub mod mpj;
pub mod protocol;
pub mod randomizer;
pub mod reduction;
pub mod rng;
pub mod verify;

pub use dist::FiniteDist;
pub use error::{LdpError, Result};
pub use protocol::{Protocol, Registry, Transcript};
pub use randomizer::Randomizer;
pub use rng::SeededRng;
