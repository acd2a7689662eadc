//! Wavelet matching for slow-wave biomedical signals.
//!
//! The crate finds the orthonormal compactly supported wavelet, drawn
//! from the two-angle 6-tap Pollen family, that best represents a
//! class of slow-wave signals under lossy compression. The distortion
//! of top-M coefficient retention (measured as percent RMS difference)
//! is evaluated over the parameterization plane, minima are located
//! per recording and averaged, and the resulting wavelet shape is
//! compared against the standard Haar, Daubechies, and Coiflet
//! wavelets.
//!
//! Modules:
//! - [`filterbank`]: orthonormal filter pairs (named and Pollen-parameterized)
//! - [`transform`]: same-length multi-level DWT and its inverse
//! - [`compress`]: top-M hard thresholding and PRD
//! - [`scales`]: decomposition-depth selection from center frequencies
//! - [`matcher`]: PRD surfaces, minima, wavelet shapes, correlations
//! - [`synth`], [`io`]: synthetic signals and CSV ingestion
//! - [`pipeline`]: the end-to-end match run and its artifacts

pub mod compress;
pub mod error;
pub mod filterbank;
pub mod io;
pub mod matcher;
pub mod pipeline;
pub mod scales;
pub mod synth;
pub mod transform;

pub use compress::{compress_and_measure, prd, threshold_top_m, CompressionConfig, CompressionResult};
pub use error::{Result, WaveError};
pub use filterbank::{pollen_filter, qmf, standard_filter, FilterPair, PollenPoint, WaveletSpec};
pub use matcher::{
    aggregate, correlate_shapes, locate_minimum, prd_surface, wavelet_shape, GridSpec,
    LevelsPolicy, PrdSurface, SurfaceEvaluator, WaveletShape, SHAPE_DEPTH,
};
pub use pipeline::{run_match, MatchConfig, MatchReport};
pub use scales::{center_frequency, select_levels, select_scales, ScaleSelection};
pub use synth::{periodogram_peak_cpm, synthesize, SyntheticSpec};
pub use transform::{dwt, idwt, DecompositionPlan, DwtCoeffs, Signal};
