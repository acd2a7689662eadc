//! Deterministic synthetic slow-wave signals for desk-scale testing.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Result, WaveError};
use crate::transform::Signal;

/// Fixed synthesis sampling rate in Hz.
pub const SAMPLE_RATE_HZ: f64 = 10.0;

/// Recipe for one synthetic recording channel.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    /// Dominant frequency in cycles per minute.
    pub dominant_cpm: f64,
    /// Relative amplitudes of harmonics 2, 3, ... of the dominant.
    pub harmonics: Vec<f64>,
    /// Noise RMS relative to the clean signal RMS.
    pub noise_level: f64,
    /// Duration in seconds.
    pub duration_s: f64,
    /// RNG seed; equal seeds give identical sample sequences.
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.dominant_cpm.is_finite() && self.dominant_cpm > 0.0) {
            return Err(WaveError::InvalidParameter(format!(
                "dominant_cpm must be positive, got {}",
                self.dominant_cpm
            )));
        }
        if !(self.duration_s.is_finite() && self.duration_s > 0.0) {
            return Err(WaveError::InvalidParameter(format!(
                "duration_s must be positive, got {}",
                self.duration_s
            )));
        }
        if !(self.noise_level.is_finite() && self.noise_level >= 0.0) {
            return Err(WaveError::InvalidParameter(format!(
                "noise_level must be non-negative, got {}",
                self.noise_level
            )));
        }
        Ok(())
    }

    /// Canine-like preset: 5 cpm dominant over 410 s, which trims to
    /// 4096 samples at 10 Hz.
    pub fn canine_preset(seed: u64) -> Self {
        Self {
            dominant_cpm: 5.0,
            harmonics: vec![0.3, 0.1],
            noise_level: 0.2,
            duration_s: 410.0,
            seed,
        }
    }

    /// Human-like preset: 3 cpm dominant.
    pub fn human_preset(seed: u64) -> Self {
        Self {
            dominant_cpm: 3.0,
            ..Self::canine_preset(seed)
        }
    }
}

/// Build the synthetic signal: dominant sinusoid plus harmonics plus
/// seeded broadband Gaussian noise, sampled at 10 Hz.
pub fn synthesize(spec: &SyntheticSpec) -> Result<Signal> {
    spec.validate()?;
    let n = (spec.duration_s * SAMPLE_RATE_HZ).round() as usize;
    if n == 0 {
        return Err(WaveError::InvalidParameter(
            "duration too short for a single sample".to_string(),
        ));
    }
    let f_hz = spec.dominant_cpm / 60.0;
    let mut clean = Vec::with_capacity(n);
    for i in 0..n {
        let t = i as f64 / SAMPLE_RATE_HZ;
        let mut v = (2.0 * std::f64::consts::PI * f_hz * t).sin();
        for (m, amp) in spec.harmonics.iter().enumerate() {
            let k = (m + 2) as f64;
            v += amp * (2.0 * std::f64::consts::PI * k * f_hz * t).sin();
        }
        clean.push(v);
    }
    let clean_rms = (clean.iter().map(|x| x * x).sum::<f64>() / n as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let scale = spec.noise_level * clean_rms;
    let samples = clean
        .into_iter()
        .map(|v| {
            let z: f64 = rng.sample(StandardNormal);
            v + scale * z
        })
        .collect();
    Signal::new(samples, 1.0 / SAMPLE_RATE_HZ)
}

/// Diagnostic dominant-frequency estimate: zero-padded periodogram
/// peak with parabolic interpolation, in cycles per minute.
pub fn periodogram_peak_cpm(x: &Signal) -> Result<f64> {
    let n = x.len();
    if n < 4 {
        return Err(WaveError::Shape("signal too short for a periodogram".to_string()));
    }
    let nfft = (4 * n).next_power_of_two().max(1 << 16);
    let mean = x.samples().iter().sum::<f64>() / n as f64;
    let mut buf = vec![Complex::new(0.0, 0.0); nfft];
    for (i, &v) in x.samples().iter().enumerate() {
        buf[i] = Complex::new(v - mean, 0.0);
    }
    FftPlanner::new().plan_fft_forward(nfft).process(&mut buf);
    let mut peak = (0usize, 0.0f64);
    for (k, c) in buf.iter().enumerate().take(nfft / 2 + 1).skip(1) {
        let m = c.norm_sqr();
        if m > peak.1 {
            peak = (k, m);
        }
    }
    if peak.1 == 0.0 {
        return Err(WaveError::Numerical("flat spectrum".to_string()));
    }
    let k = peak.0;
    let mut kf = k as f64;
    if k > 0 && k + 1 < nfft / 2 {
        let (y0, y1, y2) = (
            buf[k - 1].norm_sqr().sqrt(),
            buf[k].norm_sqr().sqrt(),
            buf[k + 1].norm_sqr().sqrt(),
        );
        let den = y0 - 2.0 * y1 + y2;
        if den != 0.0 {
            kf += 0.5 * (y0 - y2) / den;
        }
    }
    let fs = 1.0 / x.sample_period();
    Ok(kf * fs / nfft as f64 * 60.0)
}
