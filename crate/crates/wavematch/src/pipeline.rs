//! End-to-end matching pipeline: surfaces per compression ratio,
//! per-recording minima, averaged optimum, and shape correlations
//! against the standard wavelets.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::compress::CompressionConfig;
use crate::error::{Result, WaveError};
use crate::filterbank::{PollenPoint, WaveletSpec};
use crate::matcher::{
    aggregate, correlate_shapes, locate_minimum, prd_surface, wavelet_shape, GridSpec,
    LevelsPolicy, SurfaceEvaluator, SHAPE_DEPTH,
};
use crate::transform::Signal;

/// Table 2 in the source material is read as multiples of pi; this
/// tag is stamped into every match report.
pub const TABLE2_UNITS: &str = "pi_normalized";

/// Configuration for [`run_match`].
#[derive(Debug, Clone)]
pub struct MatchConfig {
    /// One entry per recording channel to match (already power-of-two
    /// length).
    pub recordings: Vec<Signal>,
    pub recording_names: Vec<String>,
    /// Compression ratios to sweep.
    pub cr_set: Vec<f64>,
    pub grid_resolution: usize,
    pub refine: bool,
    /// Dominant signal frequency in Hz.
    pub dominant_hz: f64,
    pub levels_policy: LevelsPolicy,
    /// Directory for surface CSVs and the match JSON; `None` skips
    /// file output.
    pub out_dir: Option<PathBuf>,
    /// Which recording's surfaces are exported (one CSV per ratio).
    pub surface_recording: usize,
}

impl MatchConfig {
    pub fn new(recordings: Vec<Signal>, recording_names: Vec<String>) -> Result<Self> {
        if recordings.is_empty() {
            return Err(WaveError::InvalidParameter(
                "match needs at least one recording".to_string(),
            ));
        }
        if recordings.len() != recording_names.len() {
            return Err(WaveError::Shape(format!(
                "{} names for {} recordings",
                recording_names.len(),
                recordings.len()
            )));
        }
        Ok(Self {
            recordings,
            recording_names,
            cr_set: vec![3.0, 5.0, 7.0, 10.0],
            grid_resolution: 129,
            refine: true,
            dominant_hz: 5.0 / 60.0,
            levels_policy: LevelsPolicy::PerPoint,
            out_dir: None,
            surface_recording: 0,
        })
    }
}

/// Shape correlation of a candidate optimum against the four standard
/// wavelets.
#[derive(Debug, Clone, Serialize)]
pub struct CorrelationVs {
    pub haar: f64,
    pub db2: f64,
    pub db3: f64,
    pub coif1: f64,
}

/// Match outcome for one compression ratio.
#[derive(Debug, Clone, Serialize)]
pub struct CrMatch {
    pub cr: f64,
    /// Refined minimum `(a, b)` per recording, radians.
    pub per_recording_minima: Vec<(f64, f64)>,
    /// PRD percent at each refined minimum.
    pub per_recording_prd: Vec<f64>,
    /// Component-wise mean of the minima, radians.
    pub optimum: (f64, f64),
    /// The optimum expressed as multiples of pi.
    pub optimum_over_pi: (f64, f64),
    pub correlation_vs: CorrelationVs,
}

/// Full match report across the compression-ratio set.
#[derive(Debug, Clone, Serialize)]
pub struct MatchReport {
    pub table2_units: &'static str,
    pub grid_resolution: usize,
    pub refined: bool,
    pub dominant_hz: f64,
    pub recordings: Vec<String>,
    pub results: Vec<CrMatch>,
}

/// Files written by a match run.
#[derive(Debug, Clone, Default)]
pub struct MatchArtifacts {
    pub surface_csvs: Vec<PathBuf>,
    pub match_json: Option<PathBuf>,
}

fn format_cr(cr: f64) -> String {
    if cr.fract() == 0.0 {
        format!("{}", cr as i64)
    } else {
        format!("{cr}")
    }
}

fn correlations_for(optimum: (f64, f64)) -> Result<CorrelationVs> {
    let opt_spec = WaveletSpec::Pollen(PollenPoint::new(optimum.0, optimum.1)?);
    let opt_shape = wavelet_shape(&opt_spec, SHAPE_DEPTH)?;
    let mut out = [0.0; 4];
    for (slot, spec) in out.iter_mut().zip([
        WaveletSpec::Haar,
        WaveletSpec::Daubechies2,
        WaveletSpec::Daubechies3,
        WaveletSpec::Coiflet1,
    ]) {
        *slot = correlate_shapes(&opt_shape, &wavelet_shape(&spec, SHAPE_DEPTH)?)?;
    }
    Ok(CorrelationVs {
        haar: out[0],
        db2: out[1],
        db3: out[2],
        coif1: out[3],
    })
}

/// Run the full pipeline and write artifacts.
///
/// For each ratio in the set: evaluate a PRD surface per recording,
/// locate (and optionally refine) each minimum, average the minima
/// into the optimum, and correlate the optimum's wavelet shape with
/// the standard wavelets. One surface CSV per ratio (for the
/// designated recording) and a single match JSON are written when an
/// output directory is configured.
pub fn run_match(cfg: &MatchConfig) -> Result<(MatchReport, MatchArtifacts)> {
    if cfg.surface_recording >= cfg.recordings.len() {
        return Err(WaveError::InvalidParameter(format!(
            "surface recording index {} out of range",
            cfg.surface_recording
        )));
    }
    if cfg.cr_set.is_empty() {
        return Err(WaveError::InvalidParameter("empty compression-ratio set".to_string()));
    }
    let grid = GridSpec::full_plane(cfg.grid_resolution)?;
    let mut artifacts = MatchArtifacts::default();
    let mut results = Vec::with_capacity(cfg.cr_set.len());

    for &cr in &cfg.cr_set {
        let cr_cfg = CompressionConfig::new(cr)?;
        let mut minima = Vec::with_capacity(cfg.recordings.len());
        let mut prds = Vec::with_capacity(cfg.recordings.len());
        for (idx, signal) in cfg.recordings.iter().enumerate() {
            let ev = SurfaceEvaluator::new(signal, cr_cfg, cfg.dominant_hz, cfg.levels_policy)?;
            let surface = prd_surface(&ev, grid)?;
            if idx == cfg.surface_recording {
                if let Some(dir) = &cfg.out_dir {
                    let path = dir.join(format!("surface_cr{}.csv", format_cr(cr)));
                    surface.write_csv(BufWriter::new(File::create(&path)?))?;
                    artifacts.surface_csvs.push(path);
                }
            }
            let (a, b, prd) = locate_minimum(&surface, cfg.refine, &ev)?;
            minima.push((a, b));
            prds.push(prd);
        }
        let optimum = aggregate(&minima)?;
        let pi = std::f64::consts::PI;
        results.push(CrMatch {
            cr,
            per_recording_minima: minima,
            per_recording_prd: prds,
            optimum,
            optimum_over_pi: (optimum.0 / pi, optimum.1 / pi),
            correlation_vs: correlations_for(optimum)?,
        });
    }

    let report = MatchReport {
        table2_units: TABLE2_UNITS,
        grid_resolution: cfg.grid_resolution,
        refined: cfg.refine,
        dominant_hz: cfg.dominant_hz,
        recordings: cfg.recording_names.clone(),
        results,
    };
    if let Some(dir) = &cfg.out_dir {
        let path = dir.join("match.json");
        write_report(&report, &path)?;
        artifacts.match_json = Some(path);
    }
    Ok((report, artifacts))
}

pub fn write_report(report: &MatchReport, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, report)?;
    use std::io::Write as _;
    writeln!(out)?;
    Ok(())
}
