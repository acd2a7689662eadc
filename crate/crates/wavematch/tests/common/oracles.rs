//! Independent reference implementations used to cross-check the
//! pyramid transform and the distortion measure. These are written
//! against the definitions, not against the main code paths: the
//! transform oracle builds explicit circulant matrices level by
//! level, and the distortion oracle works purely in the coefficient
//! domain through the energy of the discarded coefficients.

use wavematch::{DecompositionPlan, DwtCoeffs, FilterPair, Signal};

/// One oracle comparison, kept for diagnostics.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub case: String,
    pub main_value: f64,
    pub oracle_value: f64,
    pub abs_dev: f64,
    pub rel_dev: f64,
}

impl OracleReport {
    pub fn new(case: impl Into<String>, main_value: f64, oracle_value: f64) -> Self {
        let abs_dev = (main_value - oracle_value).abs();
        let scale = main_value.abs().max(oracle_value.abs());
        Self {
            case: case.into(),
            main_value,
            oracle_value,
            abs_dev,
            rel_dev: if scale > 0.0 { abs_dev / scale } else { 0.0 },
        }
    }
}

/// Dense n-by-n analysis matrix for one decomposition level acting on
/// an approximation of length `m` (rows beyond `m` are identity).
/// The first m/2 rows produce approximation coefficients, the next
/// m/2 rows detail coefficients, each row a circularly shifted copy
/// of the filter.
fn level_matrix(f: &FilterPair, n: usize, m: usize) -> Vec<Vec<f64>> {
    let mut rows = vec![vec![0.0; n]; n];
    let half = m / 2;
    for i in 0..half {
        for (k, (&h, &g)) in f.h().iter().zip(f.g()).enumerate() {
            let col = (2 * i + k) % m;
            rows[i][col] += h;
            rows[half + i][col] += g;
        }
    }
    for (i, row) in rows.iter_mut().enumerate().skip(m) {
        row[i] = 1.0;
    }
    rows
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// Full n-by-n transform matrix whose rows, applied to a signal,
/// yield the flat coefficient vector [a_J, d_J, ..., d_1].
///
/// Levels compose so that each level's output lands above the details
/// already produced: after level j the first m/2 rows hold the new
/// approximation, rows m/2..m the new detail, and everything below is
/// untouched — exactly the canonical flat layout.
pub fn transform_matrix(f: &FilterPair, n: usize, levels: usize) -> Vec<Vec<f64>> {
    assert!(n.is_power_of_two() && n >= 2);
    assert!(levels >= 1 && n >> levels >= 1);
    let mut q: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = vec![0.0; n];
            row[i] = 1.0;
            row
        })
        .collect();
    let mut m = n;
    for _ in 0..levels {
        q = mat_mul(&level_matrix(f, n, m), &q);
        m /= 2;
    }
    q
}

/// Flat DWT coefficients computed by explicit matrix multiplication.
pub fn dwt_matrix_oracle(x: &Signal, f: &FilterPair, levels: usize) -> Vec<f64> {
    let q = transform_matrix(f, x.len(), levels);
    q.iter()
        .map(|row| row.iter().zip(x.samples()).map(|(a, b)| a * b).sum())
        .collect()
}

/// Largest entry of |Q Q^T - I|: zero for an orthonormal transform.
pub fn orthonormality_defect(q: &[Vec<f64>]) -> f64 {
    let n = q.len();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let dot: f64 = q[i].iter().zip(&q[j]).map(|(a, b)| a * b).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).abs());
        }
    }
    worst
}

/// PRD computed entirely in the coefficient domain: for an
/// orthonormal transform, the reconstruction error energy equals the
/// energy of the discarded coefficients (Parseval), so
/// PRD = sqrt(discarded / total) * 100.
pub fn prd_energy_oracle(flat: &[f64], kept: &[bool]) -> f64 {
    assert_eq!(flat.len(), kept.len());
    let total: f64 = flat.iter().map(|v| v * v).sum();
    let discarded: f64 = flat
        .iter()
        .zip(kept)
        .filter(|(_, &k)| !k)
        .map(|(v, _)| v * v)
        .sum();
    (discarded / total).sqrt() * 100.0
}

/// Convenience: the keep-mask implied by comparing thresholded
/// coefficients against the originals.
pub fn keep_mask(original: &DwtCoeffs, thresholded: &DwtCoeffs) -> Vec<bool> {
    original
        .flat()
        .iter()
        .zip(thresholded.flat())
        .map(|(_, t)| t != 0.0)
        .collect()
}

/// The plan both oracle paths assume.
pub fn plan(levels: usize) -> DecompositionPlan {
    DecompositionPlan::new(levels).unwrap()
}
