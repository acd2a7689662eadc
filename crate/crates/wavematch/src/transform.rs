//! Non-expansive multi-level DWT via the pyramid filter-bank cascade.
//!
//! Boundary handling is periodic (circular), which is the convention
//! that keeps the transform the same length as the input. The analysis
//! step at size `n` computes
//! `a[i] = sum_k h[k] x[(2i+k) mod n]` and likewise for `d` with `g`;
//! synthesis is the adjoint. With orthonormal filters the per-level
//! matrix is orthogonal, so reconstruction is exact and energy is
//! preserved.

use crate::error::{Result, WaveError};
use crate::filterbank::FilterPair;

/// A sampled signal with its sampling period in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    sample_period: f64,
}

impl Signal {
    pub fn new(samples: Vec<f64>, sample_period: f64) -> Result<Self> {
        if !(sample_period.is_finite() && sample_period > 0.0) {
            return Err(WaveError::InvalidParameter(format!(
                "sample period must be positive, got {sample_period}"
            )));
        }
        if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
            return Err(WaveError::InvalidParameter(format!(
                "non-finite sample at index {i}"
            )));
        }
        Ok(Self {
            samples,
            sample_period,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample_period(&self) -> f64 {
        self.sample_period
    }

    /// `J` such that `len = 2^J`, or a shape error.
    pub fn max_levels(&self) -> Result<usize> {
        let n = self.samples.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(WaveError::Shape(format!(
                "signal length must be a power of two >= 2, got {n}"
            )));
        }
        Ok(n.trailing_zeros() as usize)
    }
}

/// Number of decomposition scales `J0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompositionPlan {
    levels: usize,
}

impl DecompositionPlan {
    pub fn new(levels: usize) -> Result<Self> {
        if levels == 0 {
            return Err(WaveError::Plan("levels must be >= 1".to_string()));
        }
        Ok(Self { levels })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }
}

/// Multi-level DWT output `{d_1 .. d_J0, a_J0}`.
///
/// `details[j-1]` holds `d_j` of length `N / 2^j`; `approx` holds
/// `a_J0` of length `N / 2^J0`. Total coefficient count equals `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DwtCoeffs {
    details: Vec<Vec<f64>>,
    approx: Vec<f64>,
    plan: DecompositionPlan,
}

impl DwtCoeffs {
    pub fn new(details: Vec<Vec<f64>>, approx: Vec<f64>, plan: DecompositionPlan) -> Result<Self> {
        if details.len() != plan.levels() {
            return Err(WaveError::Shape(format!(
                "expected {} detail vectors, got {}",
                plan.levels(),
                details.len()
            )));
        }
        let n = approx.len() << plan.levels();
        for (j, d) in details.iter().enumerate() {
            let want = n >> (j + 1);
            if d.len() != want {
                return Err(WaveError::Shape(format!(
                    "detail level {} has length {}, expected {}",
                    j + 1,
                    d.len(),
                    want
                )));
            }
        }
        Ok(Self {
            details,
            approx,
            plan,
        })
    }

    pub fn details(&self) -> &[Vec<f64>] {
        &self.details
    }

    pub fn approx(&self) -> &[f64] {
        &self.approx
    }

    pub fn plan(&self) -> DecompositionPlan {
        self.plan
    }

    /// Original signal length `N`.
    pub fn signal_len(&self) -> usize {
        self.approx.len() << self.plan.levels()
    }

    /// Coefficients in canonical flat order: `a_J0` first, then
    /// `d_J0 .. d_1`, each left to right. This order defines the
    /// tie-break used by hard thresholding.
    pub fn flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.signal_len());
        out.extend_from_slice(&self.approx);
        for d in self.details.iter().rev() {
            out.extend_from_slice(d);
        }
        out
    }

    /// Rebuild from canonical flat order (inverse of [`flat`](Self::flat)).
    pub fn from_flat(flat: &[f64], plan: DecompositionPlan) -> Result<Self> {
        let n = flat.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(WaveError::Shape(format!(
                "flat length must be a power of two, got {n}"
            )));
        }
        if plan.levels() > n.trailing_zeros() as usize {
            return Err(WaveError::Plan(format!(
                "plan has {} levels but flat length is {n}",
                plan.levels()
            )));
        }
        let mut pos = 0;
        let approx_len = n >> plan.levels();
        let approx = flat[..approx_len].to_vec();
        pos += approx_len;
        let mut details_rev = Vec::with_capacity(plan.levels());
        for j in (1..=plan.levels()).rev() {
            let len = n >> j;
            details_rev.push(flat[pos..pos + len].to_vec());
            pos += len;
        }
        details_rev.reverse();
        Self::new(details_rev, approx, plan)
    }

    /// Total energy of all coefficients.
    pub fn energy(&self) -> f64 {
        let mut e: f64 = self.approx.iter().map(|x| x * x).sum();
        for d in &self.details {
            e += d.iter().map(|x| x * x).sum::<f64>();
        }
        e
    }

    /// Write rows `level,index,value`; level 0 is the approximation.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "level,index,value")?;
        for (i, v) in self.approx.iter().enumerate() {
            writeln!(out, "0,{i},{v}")?;
        }
        for (j, d) in self.details.iter().enumerate() {
            for (i, v) in d.iter().enumerate() {
                writeln!(out, "{},{i},{v}", j + 1)?;
            }
        }
        Ok(())
    }
}

/// One analysis step: filter and decimate by 2 with circular wrap.
fn analyze_step(x: &[f64], f: &FilterPair) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let half = n / 2;
    let (h, g) = (f.h(), f.g());
    let mut a = vec![0.0; half];
    let mut d = vec![0.0; half];
    for i in 0..half {
        let mut sa = 0.0;
        let mut sd = 0.0;
        for (k, (&hk, &gk)) in h.iter().zip(g).enumerate() {
            let xv = x[(2 * i + k) % n];
            sa += hk * xv;
            sd += gk * xv;
        }
        a[i] = sa;
        d[i] = sd;
    }
    (a, d)
}

/// One synthesis step: upsample, filter, and sum (adjoint of analysis).
fn synthesize_step(a: &[f64], d: &[f64], f: &FilterPair) -> Vec<f64> {
    let n = 2 * a.len();
    let (h, g) = (f.h(), f.g());
    let mut x = vec![0.0; n];
    for i in 0..a.len() {
        for (k, (&hk, &gk)) in h.iter().zip(g).enumerate() {
            x[(2 * i + k) % n] += hk * a[i] + gk * d[i];
        }
    }
    x
}

/// Forward multi-level DWT by the pyramid cascade.
pub fn dwt(x: &Signal, f: &FilterPair, plan: DecompositionPlan) -> Result<DwtCoeffs> {
    let j_max = x.max_levels()?;
    if plan.levels() > j_max {
        return Err(WaveError::Plan(format!(
            "{} levels requested but signal of length {} allows at most {j_max}",
            plan.levels(),
            x.len()
        )));
    }
    let mut approx = x.samples().to_vec();
    let mut details = Vec::with_capacity(plan.levels());
    for _ in 0..plan.levels() {
        let (a, d) = analyze_step(&approx, f);
        details.push(d);
        approx = a;
    }
    DwtCoeffs::new(details, approx, plan)
}

/// Inverse multi-level DWT; `sample_period` carries through unchanged.
pub fn idwt(c: &DwtCoeffs, f: &FilterPair, sample_period: f64) -> Result<Signal> {
    let mut x = c.approx().to_vec();
    for d in c.details().iter().rev() {
        if d.len() != x.len() {
            return Err(WaveError::Shape(format!(
                "detail length {} does not match approximation length {}",
                d.len(),
                x.len()
            )));
        }
        x = synthesize_step(&x, d, f);
    }
    Signal::new(x, sample_period)
}
