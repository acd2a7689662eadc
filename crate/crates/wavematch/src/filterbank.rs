//! Orthonormal FIR filter pairs: named standard wavelets and the
//! two-angle Pollen family of 6-tap filters.
//!
//! Every filter pair here satisfies, to machine precision,
//! `sum(h) = sqrt(2)`, `sum(h^2) = 1`, and double-shift orthogonality
//! at every even lag. The high-pass `g` is always the quadrature
//! mirror of `h`.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Result, WaveError};

/// A point on the two-angle parameterization plane, both coordinates
/// in radians within `[-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PollenPoint {
    a: f64,
    b: f64,
}

/// Wrap an angle into `(-pi, pi]`, keeping `-pi` as `-pi`.
fn wrap_angle(x: f64) -> f64 {
    if (-PI..=PI).contains(&x) {
        return x;
    }
    let two_pi = 2.0 * PI;
    let mut w = x - two_pi * (x / two_pi).round();
    if w > PI {
        w -= two_pi;
    } else if w < -PI {
        w += two_pi;
    }
    w
}

impl PollenPoint {
    /// Build a plane point; non-finite input is rejected, values
    /// outside `[-pi, pi]` are wrapped modulo `2*pi`.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(WaveError::InvalidParameter(format!(
                "pollen point must be finite, got ({a}, {b})"
            )));
        }
        Ok(Self {
            a: wrap_angle(a),
            b: wrap_angle(b),
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

/// A wavelet choice: one of the four named standards or a point on the
/// Pollen plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaveletSpec {
    Haar,
    Daubechies2,
    Daubechies3,
    Coiflet1,
    Pollen(PollenPoint),
}

impl WaveletSpec {
    /// Resolve this spec to its filter pair (length 2, 4, or 6).
    pub fn filter_pair(&self) -> FilterPair {
        match self {
            WaveletSpec::Haar => standard_filter_coeffs(StandardWavelet::Haar),
            WaveletSpec::Daubechies2 => standard_filter_coeffs(StandardWavelet::Daubechies2),
            WaveletSpec::Daubechies3 => standard_filter_coeffs(StandardWavelet::Daubechies3),
            WaveletSpec::Coiflet1 => standard_filter_coeffs(StandardWavelet::Coiflet1),
            WaveletSpec::Pollen(p) => pollen_filter(*p),
        }
    }

    pub fn name(&self) -> String {
        match self {
            WaveletSpec::Haar => "haar".to_string(),
            WaveletSpec::Daubechies2 => "db2".to_string(),
            WaveletSpec::Daubechies3 => "db3".to_string(),
            WaveletSpec::Coiflet1 => "coif1".to_string(),
            WaveletSpec::Pollen(p) => format!("pollen:{},{}", p.a(), p.b()),
        }
    }

    /// Parse `haar`, `db2`, `db3`, `coif1`, or `pollen:a,b` (radians).
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "haar" => return Ok(WaveletSpec::Haar),
            "db2" => return Ok(WaveletSpec::Daubechies2),
            "db3" => return Ok(WaveletSpec::Daubechies3),
            "coif1" => return Ok(WaveletSpec::Coiflet1),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("pollen:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() == 2 {
                let a = parts[0].trim().parse::<f64>();
                let b = parts[1].trim().parse::<f64>();
                if let (Ok(a), Ok(b)) = (a, b) {
                    return Ok(WaveletSpec::Pollen(PollenPoint::new(a, b)?));
                }
            }
        }
        Err(WaveError::InvalidParameter(format!(
            "unknown wavelet '{s}' (expected haar|db2|db3|coif1|pollen:a,b)"
        )))
    }
}

/// The four named wavelets with published coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardWavelet {
    Haar,
    Daubechies2,
    Daubechies3,
    Coiflet1,
}

/// Low-pass/high-pass orthonormal FIR coefficient pair.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterPair {
    h: Vec<f64>,
    g: Vec<f64>,
}

impl FilterPair {
    /// Build a pair from low-pass coefficients; the high-pass is
    /// derived by [`qmf`]. Length must be even and in `{2, 4, 6}`.
    pub fn from_lowpass(h: Vec<f64>) -> Result<Self> {
        if !matches!(h.len(), 2 | 4 | 6) {
            return Err(WaveError::InvalidParameter(format!(
                "filter length must be 2, 4, or 6, got {}",
                h.len()
            )));
        }
        let g = qmf(&h)?;
        Ok(Self { h, g })
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    /// Largest deviation from the orthonormality invariants:
    /// `sum(h) = sqrt(2)`, `sum(h^2) = 1`, double-shift orthogonality
    /// at all even lags, and `sum(g) = 0`.
    pub fn invariant_deviation(&self) -> f64 {
        let h = &self.h;
        let mut worst = (h.iter().sum::<f64>() - SQRT_2).abs();
        worst = worst.max((h.iter().map(|x| x * x).sum::<f64>() - 1.0).abs());
        let mut lag = 2;
        while lag < h.len() {
            let dot: f64 = (0..h.len() - lag).map(|k| h[k] * h[k + lag]).sum();
            worst = worst.max(dot.abs());
            lag += 2;
        }
        worst.max(self.g.iter().sum::<f64>().abs())
    }

    /// Write rows `k,h_k,g_k` with a header, for test-vector exchange.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "k,h_k,g_k")?;
        for (k, (h, g)) in self.h.iter().zip(&self.g).enumerate() {
            writeln!(out, "{k},{h},{g}")?;
        }
        Ok(())
    }
}

/// Quadrature mirror: `g_k = (-1)^k * h_{L-1-k}`. Requires even length.
pub fn qmf(h: &[f64]) -> Result<Vec<f64>> {
    if h.is_empty() || !h.len().is_multiple_of(2) {
        return Err(WaveError::InvalidParameter(format!(
            "qmf needs a nonempty even-length filter, got length {}",
            h.len()
        )));
    }
    let n = h.len();
    Ok((0..n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * h[n - 1 - k]
        })
        .collect())
}

/// 6-tap orthonormal low-pass filter at plane point `(a, b)`.
///
/// Closed-form two-angle lattice family. The map is continuous in
/// `(a, b)`; the point `(0, 0)` yields the Haar filter embedded at
/// taps 2 and 3, and the whole diagonal `a = b` stays Haar-type.
pub fn pollen_filter(p: PollenPoint) -> FilterPair {
    let (a, b) = (p.a(), p.b());
    let (ca, sa) = (a.cos(), a.sin());
    let (cb, sb) = (b.cos(), b.sin());
    let (cab, sab) = ((a - b).cos(), (a - b).sin());

    let norm = 1.0 / SQRT_2;
    let h0 = ((1.0 + ca + sa) * (1.0 - cb - sb) + 2.0 * sb * ca) / (4.0 * SQRT_2);
    let h1 = ((1.0 - ca + sa) * (1.0 + cb - sb) - 2.0 * sb * ca) / (4.0 * SQRT_2);
    let h2 = (1.0 + cab + sab) / (2.0 * SQRT_2);
    let h3 = (1.0 + cab - sab) / (2.0 * SQRT_2);
    let h4 = norm - h0 - h2;
    let h5 = norm - h1 - h3;

    let h = vec![h0, h1, h2, h3, h4, h5];
    let g = qmf(&h).expect("length 6 is even");
    FilterPair { h, g }
}

/// Published coefficients for a named wavelet.
pub fn standard_filter_coeffs(w: StandardWavelet) -> FilterPair {
    let h = match w {
        StandardWavelet::Haar => {
            let c = 1.0 / SQRT_2;
            vec![c, c]
        }
        StandardWavelet::Daubechies2 => {
            // (1 + sqrt(3), 3 + sqrt(3), 3 - sqrt(3), 1 - sqrt(3)) / (4 sqrt(2))
            let s3 = 3.0_f64.sqrt();
            let d = 4.0 * SQRT_2;
            vec![(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d]
        }
        StandardWavelet::Daubechies3 => {
            let s10 = 10.0_f64.sqrt();
            let s = (5.0 + 2.0 * s10).sqrt();
            let d = 16.0 * SQRT_2;
            vec![
                (1.0 + s10 + s) / d,
                (5.0 + s10 + 3.0 * s) / d,
                (10.0 - 2.0 * s10 + 2.0 * s) / d,
                (10.0 - 2.0 * s10 - 2.0 * s) / d,
                (5.0 + s10 - 3.0 * s) / d,
                (1.0 + s10 - s) / d,
            ]
        }
        StandardWavelet::Coiflet1 => {
            let s7 = 7.0_f64.sqrt();
            let d = 32.0 / SQRT_2;
            vec![
                (s7 - 3.0) / d,
                (1.0 - s7) / d,
                (14.0 - 2.0 * s7) / d,
                (14.0 + 2.0 * s7) / d,
                (5.0 + s7) / d,
                (1.0 - s7) / d,
            ]
        }
    };
    let g = qmf(&h).expect("even length");
    FilterPair { h, g }
}

/// Convenience for the four named variants of [`WaveletSpec`].
pub fn standard_filter(spec: &WaveletSpec) -> Result<FilterPair> {
    match spec {
        WaveletSpec::Pollen(_) => Err(WaveError::InvalidParameter(
            "standard_filter expects a named wavelet".to_string(),
        )),
        other => Ok(other.filter_pair()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn wrap_angle_stays_in_interval() {
        for x in [-10.0, -PI, -1.0, 0.0, 1.0, PI, 10.0, 123.456] {
            let w = wrap_angle(x);
            assert!((-PI..=PI).contains(&w), "wrap({x}) = {w}");
        }
        assert!((wrap_angle(2.0 * PI + 0.3) - 0.3).abs() < 1e-12);
        assert_eq!(wrap_angle(-PI), -PI);
    }

    #[test]
    fn pollen_point_rejects_non_finite() {
        assert!(PollenPoint::new(f64::NAN, 0.0).is_err());
        assert!(PollenPoint::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn pollen_origin_is_embedded_haar() {
        let f = pollen_filter(PollenPoint::new(0.0, 0.0).unwrap());
        let c = 1.0 / SQRT_2;
        let expect = [0.0, 0.0, c, c, 0.0, 0.0];
        for (got, want) in f.h().iter().zip(expect) {
            assert!((got - want).abs() < TOL, "{:?}", f.h());
        }
        assert!(f.invariant_deviation() < TOL);
    }

    #[test]
    fn pollen_diagonal_is_haar_type() {
        for i in 0..100 {
            let a = -PI + 2.0 * PI * (i as f64) / 99.0;
            let f = pollen_filter(PollenPoint::new(a, a).unwrap());
            let h = f.h();
            for idx in [0, 1, 4, 5] {
                assert!(h[idx].abs() < TOL, "a={a}, h={h:?}");
            }
            assert!(f.invariant_deviation() < TOL);
        }
    }

    #[test]
    fn qmf_examples() {
        let c = 1.0 / SQRT_2;
        let g = qmf(&[0.0, 0.0, c, c, 0.0, 0.0]).unwrap();
        assert_eq!(g, vec![0.0, 0.0, c, -c, 0.0, -0.0]);
        let g = qmf(&[c, c]).unwrap();
        assert!((g[0] - c).abs() < TOL && (g[1] + c).abs() < TOL);
        assert!(qmf(&[1.0, 2.0, 3.0]).is_err());
        assert!(qmf(&[]).is_err());
    }

    #[test]
    fn standard_filters_pass_invariants() {
        for w in [
            StandardWavelet::Haar,
            StandardWavelet::Daubechies2,
            StandardWavelet::Daubechies3,
            StandardWavelet::Coiflet1,
        ] {
            let f = standard_filter_coeffs(w);
            assert!(f.invariant_deviation() < TOL, "{w:?}: {}", f.invariant_deviation());
        }
        let haar = standard_filter_coeffs(StandardWavelet::Haar);
        assert_eq!(haar.len(), 2);
        assert!((haar.h()[0] - 1.0 / SQRT_2).abs() < TOL);
        assert_eq!(standard_filter_coeffs(StandardWavelet::Daubechies3).len(), 6);
        assert_eq!(standard_filter_coeffs(StandardWavelet::Coiflet1).len(), 6);
    }

    #[test]
    fn db3_matches_published_values() {
        let f = standard_filter_coeffs(StandardWavelet::Daubechies3);
        let published = [
            0.3326705529509569,
            0.8068915093133388,
            0.4598775021193313,
            -0.13501102001039084,
            -0.08544127388224149,
            0.035226291882100656,
        ];
        for (got, want) in f.h().iter().zip(published) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn standard_filter_rejects_pollen_variant() {
        let p = WaveletSpec::Pollen(PollenPoint::new(0.1, 0.2).unwrap());
        assert!(standard_filter(&p).is_err());
        assert!(standard_filter(&WaveletSpec::Haar).is_ok());
    }

    #[test]
    fn spec_parse_roundtrip() {
        assert_eq!(WaveletSpec::parse("haar").unwrap(), WaveletSpec::Haar);
        assert_eq!(WaveletSpec::parse("db3").unwrap(), WaveletSpec::Daubechies3);
        let p = WaveletSpec::parse("pollen:0.4,-0.25").unwrap();
        match p {
            WaveletSpec::Pollen(pt) => {
                assert!((pt.a() - 0.4).abs() < TOL && (pt.b() + 0.25).abs() < TOL)
            }
            _ => panic!(),
        }
        assert!(WaveletSpec::parse("sym4").is_err());
        assert!(WaveletSpec::parse("pollen:1").is_err());
    }

    proptest! {
        #[test]
        fn pollen_invariants_hold_everywhere(a in -PI..PI, b in -PI..PI) {
            let f = pollen_filter(PollenPoint::new(a, b).unwrap());
            prop_assert!(f.invariant_deviation() < TOL);
        }

        #[test]
        fn pollen_map_is_continuous(a in -3.0..3.0, b in -3.0..3.0) {
            let eps = 1e-7;
            let f0 = pollen_filter(PollenPoint::new(a, b).unwrap());
            let f1 = pollen_filter(PollenPoint::new(a + eps, b - eps).unwrap());
            for (x, y) in f0.h().iter().zip(f1.h()) {
                prop_assert!((x - y).abs() < 1e-5);
            }
        }
    }
}
