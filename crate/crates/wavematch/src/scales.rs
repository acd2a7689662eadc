//! Decomposition-depth selection: match the coarsest scale's
//! pseudo-frequency to the signal's dominant frequency.
//!
//! The pseudo-frequency of level `j` is `f_psi / (2^j * T_s)` where
//! `f_psi` is the wavelet's center frequency in cycles per unit
//! support time. The center frequency is measured on the cascade
//! approximation of the wavelet function: the shape is trimmed to its
//! support, transformed at its natural length, and the peak magnitude
//! bin (excluding DC) is read off. On this support-aligned grid the
//! standard wavelets land on the conventional values (Haar ~0.999,
//! Daubechies-2 ~0.666, Daubechies-3 and Coiflet-1 ~0.800).

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Result, WaveError};
use crate::filterbank::WaveletSpec;
use crate::matcher::wavelet_shape;

/// Report of the level-selection computation for one wavelet.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ScaleSelection {
    /// Center frequency in cycles per unit sample period.
    pub center_frequency: f64,
    /// Dominant signal frequency in Hz.
    pub dominant_frequency: f64,
    /// Sampling period in seconds.
    pub sample_period: f64,
    /// Chosen number of decomposition levels.
    pub chosen_levels: usize,
    /// Pseudo-frequency in Hz for each candidate level `1..=J`.
    pub pseudo_frequencies: Vec<f64>,
}

/// Center frequency of a wavelet, in cycles per unit sample period of
/// the generating filter.
pub fn center_frequency(w: &WaveletSpec, depth: usize) -> Result<f64> {
    let shape = wavelet_shape(w, depth)?;
    let filter_len = w.filter_pair().len();
    // trim to the support [0, L-1]; samples beyond it are zero
    let n_support = ((filter_len - 1) << depth) + 1;
    let n = n_support.min(shape.samples().len());
    let mut buf: Vec<Complex<f64>> = shape.samples()[..n]
        .iter()
        .map(|&x| Complex::new(x, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let mut peak_bin = 0;
    let mut peak_mag = 0.0;
    for (k, c) in buf.iter().enumerate().take(n / 2 + 1).skip(1) {
        let mag = c.norm_sqr();
        if mag > peak_mag {
            peak_mag = mag;
            peak_bin = k;
        }
    }
    if peak_bin == 0 || peak_mag == 0.0 {
        return Err(WaveError::Numerical(
            "wavelet shape has a degenerate spectrum".to_string(),
        ));
    }
    // bin frequency in cycles per unit time: k / (n * grid_step)
    Ok(peak_bin as f64 / (n as f64 * shape.grid_step()))
}

/// Level whose pseudo-frequency is closest to `f_c`; ties go to the
/// smaller level.
pub fn select_levels(f_psi: f64, sample_period: f64, f_c: f64, j_max: usize) -> Result<usize> {
    if !(f_psi > 0.0 && sample_period > 0.0 && f_c > 0.0) || j_max < 1 {
        return Err(WaveError::InvalidParameter(format!(
            "select_levels needs positive inputs, got f_psi={f_psi}, T_s={sample_period}, \
             f_c={f_c}, J={j_max}"
        )));
    }
    let mut best = (f64::INFINITY, 1);
    for j in 1..=j_max {
        let f_pseudo = f_psi / (2.0_f64.powi(j as i32) * sample_period);
        let d = (f_pseudo - f_c).abs();
        if d < best.0 {
            best = (d, j);
        }
    }
    Ok(best.1)
}

/// Run the full selection for one wavelet and produce the report.
pub fn select_scales(
    w: &WaveletSpec,
    depth: usize,
    sample_period: f64,
    f_c: f64,
    j_max: usize,
) -> Result<ScaleSelection> {
    let f_psi = center_frequency(w, depth)?;
    let chosen = select_levels(f_psi, sample_period, f_c, j_max)?;
    let pseudo = (1..=j_max)
        .map(|j| f_psi / (2.0_f64.powi(j as i32) * sample_period))
        .collect();
    Ok(ScaleSelection {
        center_frequency: f_psi,
        dominant_frequency: f_c,
        sample_period,
        chosen_levels: chosen,
        pseudo_frequencies: pseudo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filterbank::{PollenPoint, WaveletSpec};
    use crate::matcher::SHAPE_DEPTH;

    const CANINE_FC: f64 = 5.0 / 60.0;
    const HUMAN_FC: f64 = 3.0 / 60.0;

    #[test]
    fn center_frequencies_of_standard_wavelets() {
        let cases = [
            (WaveletSpec::Haar, 0.999),
            (WaveletSpec::Daubechies2, 0.6664),
            (WaveletSpec::Daubechies3, 0.7998),
            (WaveletSpec::Coiflet1, 0.7998),
        ];
        for (spec, want) in cases {
            let f = center_frequency(&spec, SHAPE_DEPTH).unwrap();
            assert!((f - want).abs() < 1e-3, "{spec:?}: {f}");
        }
    }

    #[test]
    fn center_frequency_is_positive_and_below_support_bound() {
        for (a, b) in [(0.3, -1.2), (2.9, 2.9), (-1.0, 0.5)] {
            let spec = WaveletSpec::Pollen(PollenPoint::new(a, b).unwrap());
            let f = center_frequency(&spec, SHAPE_DEPTH).unwrap();
            assert!(f > 0.0 && f < 6.0, "({a},{b}): {f}");
        }
    }

    #[test]
    fn table_of_decomposition_scales() {
        let cases = [
            (WaveletSpec::Haar, 7, 8),
            (WaveletSpec::Daubechies2, 6, 7),
            (WaveletSpec::Daubechies3, 7, 7),
            (WaveletSpec::Coiflet1, 7, 7),
        ];
        for (spec, canine, human) in cases {
            let f = center_frequency(&spec, SHAPE_DEPTH).unwrap();
            assert_eq!(select_levels(f, 0.1, CANINE_FC, 12).unwrap(), canine, "{spec:?}");
            assert_eq!(select_levels(f, 0.1, HUMAN_FC, 12).unwrap(), human, "{spec:?}");
        }
    }

    #[test]
    fn pseudo_frequency_strictly_decreases() {
        let s = select_scales(&WaveletSpec::Haar, SHAPE_DEPTH, 0.1, CANINE_FC, 10).unwrap();
        for pair in s.pseudo_frequencies.windows(2) {
            assert!(pair[1] < pair[0]);
        }
        assert_eq!(s.chosen_levels, 7);
    }

    #[test]
    fn doubling_the_sample_period_drops_one_level() {
        let f = center_frequency(&WaveletSpec::Haar, SHAPE_DEPTH).unwrap();
        let j1 = select_levels(f, 0.1, CANINE_FC, 12).unwrap();
        let j2 = select_levels(f, 0.2, CANINE_FC, 12).unwrap();
        assert_eq!(j2, j1 - 1);
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(select_levels(0.0, 0.1, 1.0, 8).is_err());
        assert!(select_levels(1.0, 0.1, 1.0, 0).is_err());
        assert!(select_levels(1.0, -0.1, 1.0, 8).is_err());
    }
}
