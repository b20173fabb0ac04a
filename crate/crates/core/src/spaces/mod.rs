//! Discrete models of the spaces `E^{[M]}_{[W]}`: grids, sampled test
//! functions, Banach function space norms, seminorms and membership.

pub mod grid;
pub mod gridfn;
pub mod model;
pub mod probes;
pub mod seminorm;
pub mod testfn;

pub use grid::{GridSpec, SequenceData};
pub use gridfn::{GridFunction, Provenance};
pub use model::{BanachSpaceModel, ModelKind, TailCertificate};
pub use probes::{
    polynomial_multiplier_check, probe_characters, probe_delta_sequences, weighted_l1_embedding_check, EmbeddingReport,
    MultiplierReport,
};
pub use seminorm::{membership_lambdas, membership_verdict, periodic_seminorm, seminorm, Seminorm};
pub use testfn::{PolyPiece, Profile, TestFunction};
