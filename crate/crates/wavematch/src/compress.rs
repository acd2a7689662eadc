//! Largest-magnitude coefficient retention and PRD distortion.

use crate::error::{Result, WaveError};
use crate::filterbank::WaveletSpec;
use crate::transform::{dwt, idwt, DecompositionPlan, DwtCoeffs, Signal};

/// Target compression ratio `CR = N / M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressionConfig {
    cr: f64,
}

impl CompressionConfig {
    pub fn new(cr: f64) -> Result<Self> {
        if !(cr.is_finite() && cr >= 1.0) {
            return Err(WaveError::InvalidParameter(format!(
                "compression ratio must be finite and >= 1, got {cr}"
            )));
        }
        Ok(Self { cr })
    }

    pub fn cr(&self) -> f64 {
        self.cr
    }

    /// Retained coefficient count `M = max(1, floor(N / cr))`.
    pub fn kept_count(&self, n: usize) -> usize {
        ((n as f64 / self.cr).floor() as usize).max(1)
    }
}

/// Outcome of compressing one signal at one ratio.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CompressionResult {
    pub cr_requested: f64,
    pub cr_actual: f64,
    pub kept: usize,
    pub prd_percent: f64,
}

impl CompressionResult {
    /// One CSV row `cr_requested,cr_actual,M,prd_percent`.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            self.cr_requested, self.cr_actual, self.kept, self.prd_percent
        )
    }
}

/// Keep the `M` largest-magnitude coefficients, zeroing the rest.
///
/// Ties on equal magnitude are broken by flat index (approximation
/// vector first, then `d_J0 .. d_1`, each left to right); earlier
/// indices win. Returns the thresholded coefficients with the kept
/// count and achieved ratio.
pub fn threshold_top_m(
    c: &DwtCoeffs,
    cfg: CompressionConfig,
) -> Result<(DwtCoeffs, usize, f64)> {
    let flat = c.flat();
    let n = flat.len();
    let m = cfg.kept_count(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        flat[j]
            .abs()
            .partial_cmp(&flat[i].abs())
            .expect("coefficients are finite")
            .then(i.cmp(&j))
    });
    let mut kept = vec![0.0; n];
    for &i in &order[..m] {
        kept[i] = flat[i];
    }
    let out = DwtCoeffs::from_flat(&kept, c.plan())?;
    Ok((out, m, n as f64 / m as f64))
}

/// Percent root-mean-square difference between a signal and its
/// reconstruction: `sqrt(sum (x - y)^2 / sum x^2) * 100`.
pub fn prd(x: &Signal, y: &Signal) -> Result<f64> {
    if x.len() != y.len() {
        return Err(WaveError::Shape(format!(
            "prd length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let energy: f64 = x.samples().iter().map(|v| v * v).sum();
    if energy == 0.0 {
        return Err(WaveError::Numerical(
            "prd is undefined for a zero-energy reference signal".to_string(),
        ));
    }
    let diff: f64 = x
        .samples()
        .iter()
        .zip(y.samples())
        .map(|(u, v)| (u - v) * (u - v))
        .sum();
    Ok((diff / energy).sqrt() * 100.0)
}

/// Full chain: transform, keep top-M, reconstruct, measure distortion.
pub fn compress_and_measure(
    x: &Signal,
    w: &WaveletSpec,
    plan: DecompositionPlan,
    cfg: CompressionConfig,
) -> Result<CompressionResult> {
    let f = w.filter_pair();
    let coeffs = dwt(x, &f, plan)?;
    let (thresholded, kept, cr_actual) = threshold_top_m(&coeffs, cfg)?;
    let recon = idwt(&thresholded, &f, x.sample_period())?;
    Ok(CompressionResult {
        cr_requested: cfg.cr(),
        cr_actual,
        kept,
        prd_percent: prd(x, &recon)?,
    })
}
