//! Sampling, synthesis, periodization and reproduction operators for `n = 1`.

pub mod decay;
pub mod lattice;
pub mod parametrix;
pub mod windows;

pub use decay::{bspline, bspline_transform, decay_upgrade, DecayUpgrade};
pub use lattice::{
    default_radius, evaluation, evaluation_weighted_norm, multiply, multiply_checked, periodize, periodize_profile,
    sample_convolution, sample_convolution_bound, synthesis, synthesis_bound, tail_sum, MultiplyReport, Periodized,
    SynthesisReport,
};
pub use parametrix::{default_points, parametrix_reproduce, Parametrix1D, ParametrixReport};
pub use windows::{interpolating_window, partition_gap, partition_window, Window, WindowKind};
