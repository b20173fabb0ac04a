//! Finite-horizon checks for inclusions between Gelfand-Shilov type spaces
//! defined by weight sequence systems and weight function systems.

pub mod config;
pub mod decide;
pub mod error;
pub mod functions;
pub mod grammar;
pub mod multi_index;
pub mod numeric;
pub mod operators;
pub mod report;
pub mod sequences;
pub mod spaces;
pub mod systems;
pub mod verdict;
pub mod verify;

pub use config::Horizons;
pub use error::{Error, Result};
pub use verdict::{Status, Verdict};
