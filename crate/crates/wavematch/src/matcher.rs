//! PRD surfaces over the Pollen plane, minima location and averaging,
//! and wavelet-shape comparison against the standard wavelets.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::compress::{compress_and_measure, CompressionConfig};
use crate::error::{Result, WaveError};
use crate::filterbank::{PollenPoint, WaveletSpec};
use crate::scales::{center_frequency, select_levels};
use crate::transform::{DecompositionPlan, Signal};

/// Default cascade depth for wavelet shapes.
pub const SHAPE_DEPTH: usize = 10;

/// Rectangular evaluation grid on the parameterization plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub a_range: (f64, f64),
    pub b_range: (f64, f64),
    pub resolution: usize,
}

impl GridSpec {
    pub fn new(a_range: (f64, f64), b_range: (f64, f64), resolution: usize) -> Result<Self> {
        for (lo, hi) in [a_range, b_range] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi && lo >= -PI - 1e-12 && hi <= PI + 1e-12)
            {
                return Err(WaveError::InvalidParameter(format!(
                    "grid range must be non-degenerate within [-pi, pi], got ({lo}, {hi})"
                )));
            }
        }
        if resolution < 2 {
            return Err(WaveError::InvalidParameter(format!(
                "grid resolution must be >= 2, got {resolution}"
            )));
        }
        Ok(Self {
            a_range,
            b_range,
            resolution,
        })
    }

    /// Full plane `[-pi, pi]^2` at the given resolution.
    pub fn full_plane(resolution: usize) -> Result<Self> {
        Self::new((-PI, PI), (-PI, PI), resolution)
    }

    pub fn a_value(&self, i: usize) -> f64 {
        let (lo, hi) = self.a_range;
        lo + (hi - lo) * i as f64 / (self.resolution - 1) as f64
    }

    pub fn b_value(&self, j: usize) -> f64 {
        let (lo, hi) = self.b_range;
        lo + (hi - lo) * j as f64 / (self.resolution - 1) as f64
    }

    pub fn a_step(&self) -> f64 {
        (self.a_range.1 - self.a_range.0) / (self.resolution - 1) as f64
    }

    pub fn b_step(&self) -> f64 {
        (self.b_range.1 - self.b_range.0) / (self.resolution - 1) as f64
    }
}

/// How the number of decomposition levels is chosen per surface point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelsPolicy {
    /// Recompute `J0` from each candidate wavelet's own center frequency.
    PerPoint,
    /// Use a fixed level count (clamped to the signal's maximum).
    Fixed(usize),
}

/// PRD values over a grid, with the located global grid minimum.
#[derive(Debug, Clone)]
pub struct PrdSurface {
    grid: GridSpec,
    /// Row-major over `(i_a, i_b)`; NaN marks a failed point.
    values: Vec<f64>,
    minimum: (f64, f64, f64),
    cr: f64,
    levels_policy: LevelsPolicy,
}

impl PrdSurface {
    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, ia: usize, ib: usize) -> f64 {
        self.values[ia * self.grid.resolution + ib]
    }

    /// Global grid minimum `(a, b, prd)`.
    pub fn minimum(&self) -> (f64, f64, f64) {
        self.minimum
    }

    pub fn cr(&self) -> f64 {
        self.cr
    }

    pub fn levels_policy(&self) -> LevelsPolicy {
        self.levels_policy
    }

    /// Plot-ready rows `a,b,prd_percent`.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "a,b,prd_percent")?;
        for ia in 0..self.grid.resolution {
            for ib in 0..self.grid.resolution {
                writeln!(
                    out,
                    "{},{},{}",
                    self.grid.a_value(ia),
                    self.grid.b_value(ib),
                    self.value(ia, ib)
                )?;
            }
        }
        Ok(())
    }

    /// JSON summary `{cr, minimum, grid}`.
    pub fn summary_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Minimum {
            a: f64,
            b: f64,
            prd_percent: f64,
        }
        #[derive(Serialize)]
        struct Summary {
            cr: f64,
            minimum: Minimum,
            grid: GridSpec,
            levels_policy: LevelsPolicy,
        }
        let (a, b, prd_percent) = self.minimum;
        Ok(serde_json::to_string_pretty(&Summary {
            cr: self.cr,
            minimum: Minimum { a, b, prd_percent },
            grid: self.grid,
            levels_policy: self.levels_policy,
        })?)
    }
}

/// Evaluates compression PRD for one signal at plane points.
///
/// Pure and deterministic, so grid points may be computed in any order
/// or in parallel without changing results.
pub struct SurfaceEvaluator<'a> {
    signal: &'a Signal,
    cr: CompressionConfig,
    dominant_hz: f64,
    policy: LevelsPolicy,
}

impl<'a> SurfaceEvaluator<'a> {
    pub fn new(
        signal: &'a Signal,
        cr: CompressionConfig,
        dominant_hz: f64,
        policy: LevelsPolicy,
    ) -> Result<Self> {
        if !(dominant_hz.is_finite() && dominant_hz > 0.0) {
            return Err(WaveError::InvalidParameter(format!(
                "dominant frequency must be positive, got {dominant_hz}"
            )));
        }
        signal.max_levels()?;
        Ok(Self {
            signal,
            cr,
            dominant_hz,
            policy,
        })
    }

    pub fn cr(&self) -> f64 {
        self.cr.cr()
    }

    /// PRD percent for the Pollen wavelet at `p`.
    pub fn eval(&self, p: PollenPoint) -> Result<f64> {
        let spec = WaveletSpec::Pollen(p);
        let j_max = self.signal.max_levels()?;
        let levels = match self.policy {
            LevelsPolicy::Fixed(j) => j.clamp(1, j_max),
            LevelsPolicy::PerPoint => {
                let f_psi = center_frequency(&spec, SHAPE_DEPTH)?;
                select_levels(f_psi, self.signal.sample_period(), self.dominant_hz, j_max)?
            }
        };
        let plan = DecompositionPlan::new(levels)?;
        Ok(compress_and_measure(self.signal, &spec, plan, self.cr)?.prd_percent)
    }
}

/// Lexicographic tie-break helper: is `(a2, b2, v2)` a strictly better
/// minimum than `(a1, b1, v1)`?
fn better(candidate: (f64, f64, f64), incumbent: (f64, f64, f64)) -> bool {
    if !candidate.2.is_finite() {
        return false;
    }
    if !incumbent.2.is_finite() {
        return true;
    }
    candidate.2 < incumbent.2
        || (candidate.2 == incumbent.2
            && (candidate.0, candidate.1) < (incumbent.0, incumbent.1))
}

/// Evaluate the PRD surface over `grid`.
///
/// Per-point failures are recorded as NaN rather than aborting. The
/// result is identical regardless of how many workers evaluate it.
pub fn prd_surface(ev: &SurfaceEvaluator<'_>, grid: GridSpec) -> Result<PrdSurface> {
    let res = grid.resolution;
    let values: Vec<f64> = (0..res * res)
        .into_par_iter()
        .map(|idx| {
            let (ia, ib) = (idx / res, idx % res);
            let p = match PollenPoint::new(grid.a_value(ia), grid.b_value(ib)) {
                Ok(p) => p,
                Err(_) => return f64::NAN,
            };
            ev.eval(p).unwrap_or(f64::NAN)
        })
        .collect();

    let mut minimum = (f64::NAN, f64::NAN, f64::NAN);
    for ia in 0..res {
        for ib in 0..res {
            let cand = (grid.a_value(ia), grid.b_value(ib), values[ia * res + ib]);
            if better(cand, minimum) {
                minimum = cand;
            }
        }
    }
    if !minimum.2.is_finite() {
        return Err(WaveError::NoMinimum(
            "every surface point failed to evaluate".to_string(),
        ));
    }
    Ok(PrdSurface {
        grid,
        values,
        minimum,
        cr: ev.cr(),
        levels_policy: ev.policy,
    })
}

/// Number of nested refinement rounds and points per axis per round.
const REFINE_ROUNDS: usize = 3;
const REFINE_POINTS: usize = 9;
const REFINE_SHRINK: f64 = 4.0;

/// Locate the surface minimum, optionally sharpening it with a nested
/// grid search (3 rounds of 9x9, window shrinking 4x per round) around
/// the incumbent. The refined PRD never exceeds the grid minimum.
pub fn locate_minimum(
    s: &PrdSurface,
    refine: bool,
    ev: &SurfaceEvaluator<'_>,
) -> Result<(f64, f64, f64)> {
    let mut incumbent = s.minimum();
    if !incumbent.2.is_finite() {
        return Err(WaveError::NoMinimum("surface has no finite value".to_string()));
    }
    if !refine {
        return Ok(incumbent);
    }
    let (mut half_a, mut half_b) = (s.grid().a_step(), s.grid().b_step());
    let (a_lo, a_hi) = s.grid().a_range;
    let (b_lo, b_hi) = s.grid().b_range;
    for _ in 0..REFINE_ROUNDS {
        let (ca, cb) = (incumbent.0, incumbent.1);
        for ia in 0..REFINE_POINTS {
            for ib in 0..REFINE_POINTS {
                let fa = 2.0 * ia as f64 / (REFINE_POINTS - 1) as f64 - 1.0;
                let fb = 2.0 * ib as f64 / (REFINE_POINTS - 1) as f64 - 1.0;
                let a = (ca + fa * half_a).clamp(a_lo, a_hi);
                let b = (cb + fb * half_b).clamp(b_lo, b_hi);
                let p = PollenPoint::new(a, b)?;
                if let Ok(v) = ev.eval(p) {
                    if better((a, b, v), incumbent) {
                        incumbent = (a, b, v);
                    }
                }
            }
        }
        half_a /= REFINE_SHRINK;
        half_b /= REFINE_SHRINK;
    }
    Ok(incumbent)
}

/// Component-wise arithmetic mean of per-recording minima.
///
/// No angular wrap-around is applied; a warning is logged when any two
/// minima are more than pi apart in either coordinate.
pub fn aggregate(minima: &[(f64, f64)]) -> Result<(f64, f64)> {
    if minima.is_empty() {
        return Err(WaveError::InvalidParameter(
            "aggregate needs at least one minimum".to_string(),
        ));
    }
    for (i, &(a1, b1)) in minima.iter().enumerate() {
        for &(a2, b2) in &minima[i + 1..] {
            if (a1 - a2).abs() > PI || (b1 - b2).abs() > PI {
                log::warn!(
                    "minima ({a1}, {b1}) and ({a2}, {b2}) are more than pi apart; \
                     the plain mean may straddle a wrap-around"
                );
            }
        }
    }
    let n = minima.len() as f64;
    let a = minima.iter().map(|m| m.0).sum::<f64>() / n;
    let b = minima.iter().map(|m| m.1).sum::<f64>() / n;
    Ok((a, b))
}

/// Discretized wavelet function on a dyadic grid.
#[derive(Debug, Clone)]
pub struct WaveletShape {
    samples: Vec<f64>,
    grid_step: f64,
}

impl WaveletShape {
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn grid_step(&self) -> f64 {
        self.grid_step
    }

    /// Support length in time units.
    pub fn support(&self) -> f64 {
        (self.samples.len() - 1) as f64 * self.grid_step
    }

    /// Linear resample onto a finer step; `new_step` must divide the
    /// current step.
    pub fn resample(&self, new_step: f64) -> Result<WaveletShape> {
        if !(new_step > 0.0 && new_step <= self.grid_step) {
            return Err(WaveError::InvalidParameter(format!(
                "resample step must be in (0, {}], got {new_step}",
                self.grid_step
            )));
        }
        let n_new = (self.support() / new_step).round() as usize + 1;
        let samples = (0..n_new)
            .map(|i| {
                let t = i as f64 * new_step / self.grid_step;
                let k = t.floor() as usize;
                if k + 1 >= self.samples.len() {
                    *self.samples.last().unwrap()
                } else {
                    let frac = t - k as f64;
                    self.samples[k] * (1.0 - frac) + self.samples[k + 1] * frac
                }
            })
            .collect();
        Ok(WaveletShape {
            samples,
            grid_step: new_step,
        })
    }
}

/// Cascade-algorithm approximation of the wavelet function.
///
/// Starts from the high-pass filter and repeatedly upsamples and
/// convolves with the low-pass, halving the grid step each pass. The
/// result is normalized to unit L2 norm under the grid-step weight.
pub fn wavelet_shape(w: &WaveletSpec, depth: usize) -> Result<WaveletShape> {
    if depth < 1 {
        return Err(WaveError::InvalidParameter(
            "cascade depth must be >= 1".to_string(),
        ));
    }
    let f = w.filter_pair();
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut v: Vec<f64> = f.g().iter().map(|x| x * sqrt2).collect();
    for _ in 1..depth {
        let mut up = vec![0.0; 2 * v.len()];
        for (i, &x) in v.iter().enumerate() {
            up[2 * i] = x;
        }
        let mut next = vec![0.0; up.len() + f.len() - 1];
        for (i, &u) in up.iter().enumerate() {
            if u != 0.0 {
                for (k, &hk) in f.h().iter().enumerate() {
                    next[i + k] += hk * u;
                }
            }
        }
        for x in &mut next {
            *x *= sqrt2;
        }
        v = next;
    }
    let grid_step = 0.5_f64.powi(depth as i32);
    let norm = (v.iter().map(|x| x * x).sum::<f64>() * grid_step).sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(WaveError::Numerical(
            "degenerate wavelet shape with zero energy".to_string(),
        ));
    }
    for x in &mut v {
        *x /= norm;
    }
    Ok(WaveletShape {
        samples: v,
        grid_step,
    })
}

/// Pearson correlation between two shapes, maximized over integer
/// shifts and the sign of one shape. Shapes on different grid steps
/// are resampled to the finer one first.
pub fn correlate_shapes(u: &WaveletShape, v: &WaveletShape) -> Result<f64> {
    let step = u.grid_step.min(v.grid_step);
    let ur = u.resample(step)?;
    let vr = v.resample(step)?;
    let n = ur.samples.len().max(vr.samples.len());
    let mut a = ur.samples;
    let mut b = vr.samples;
    a.resize(n, 0.0);
    b.resize(n, 0.0);

    let mean_a = a.iter().sum::<f64>() / n as f64;
    let mean_b = b.iter().sum::<f64>() / n as f64;
    for x in &mut a {
        *x -= mean_a;
    }
    for x in &mut b {
        *x -= mean_b;
    }
    let norm_a = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let norm_b = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm_a == 0.0 || norm_b == 0.0 {
        return Err(WaveError::Numerical(
            "correlation is undefined for a zero-variance shape".to_string(),
        ));
    }

    let mut best = 0.0_f64;
    for shift in -(n as isize - 1)..n as isize {
        let mut dot = 0.0;
        for (i, &ai) in a.iter().enumerate() {
            let j = i as isize - shift;
            if (0..n as isize).contains(&j) {
                dot += ai * b[j as usize];
            }
        }
        best = best.max(dot.abs() / (norm_a * norm_b));
    }
    Ok(best.min(1.0))
}
