//! Command-line front end for the wavelet-matching pipeline.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use wavematch::io::{
    center_trim, cut_segment, load_recording, write_recording_csv, Species,
};
use wavematch::matcher::LevelsPolicy;
use wavematch::pipeline::{run_match, MatchConfig};
use wavematch::{
    compress_and_measure, periodogram_peak_cpm, prd_surface, select_scales, synthesize,
    wavelet_shape, CompressionConfig, DecompositionPlan, GridSpec, Signal, SurfaceEvaluator,
    SyntheticSpec, WaveletSpec, SHAPE_DEPTH,
};

/// Worker-count override for parallel surface evaluation.
const WORKERS_ENV: &str = "WAVEMATCH_WORKERS";

#[derive(Parser)]
#[command(
    name = "wavematch",
    version,
    about = "Find the 6-tap orthonormal wavelet that best matches slow-wave recordings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic multi-channel recording CSV.
    Gen(GenArgs),
    /// Report center frequencies and chosen decomposition depths.
    Scales(ScalesArgs),
    /// Compress recording channels at one ratio and report distortion.
    Compress(CompressArgs),
    /// Evaluate one PRD surface and export it.
    Surface(SurfaceArgs),
    /// Full pipeline: surfaces, minima, averaged optimum, correlations.
    Match(MatchArgs),
    /// Print the cascade approximation of a wavelet function.
    Wavefun(WavefunArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Number of channels.
    #[arg(long, default_value_t = 1)]
    channels: usize,
    #[arg(long, default_value_t = 5.0)]
    dominant_cpm: f64,
    /// Relative harmonic amplitudes, comma separated.
    #[arg(long, default_value = "0.3,0.1")]
    harmonics: String,
    /// Noise RMS relative to the clean signal.
    #[arg(long, default_value_t = 0.2)]
    noise: f64,
    /// Duration in seconds.
    #[arg(long, default_value_t = 410.0)]
    duration: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct ScalesArgs {
    /// haar | db2 | db3 | coif1 | pollen:a,b (default: all four named).
    #[arg(long)]
    wavelet: Option<String>,
    #[arg(long, default_value = "canine")]
    species: String,
    /// Dominant frequency override in cycles per minute.
    #[arg(long)]
    fc_cpm: Option<f64>,
    /// Sampling period in seconds.
    #[arg(long, default_value_t = 0.1)]
    ts: f64,
    #[arg(long, default_value_t = 12)]
    max_levels: usize,
    /// Diagnostic: estimate the dominant frequency from a recording
    /// instead of the species default.
    #[arg(long)]
    estimate_from: Option<PathBuf>,
}

#[derive(Args)]
struct CompressArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "db3")]
    wavelet: String,
    #[arg(long, default_value_t = 3.0)]
    cr: f64,
    /// Channel indices, comma separated (default: all).
    #[arg(long)]
    channels: Option<String>,
    /// Segment bounds in samples, `start:end`.
    #[arg(long)]
    segment: Option<String>,
    #[arg(long, default_value_t = 0.1)]
    ts: f64,
    #[arg(long, default_value = "canine")]
    species: String,
    #[arg(long)]
    fc_cpm: Option<f64>,
    /// Fixed decomposition depth (default: selected per wavelet).
    #[arg(long)]
    levels: Option<usize>,
}

#[derive(Args)]
struct SurfaceArgs {
    /// Input recording; omitted means one synthetic canine channel.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    channel: usize,
    #[arg(long, default_value_t = 3.0)]
    cr: f64,
    #[arg(long, default_value_t = 65)]
    grid: usize,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, default_value = "canine")]
    species: String,
    #[arg(long)]
    fc_cpm: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    ts: f64,
    #[arg(long)]
    segment: Option<String>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Fixed decomposition depth (default: per-point selection).
    #[arg(long)]
    levels: Option<usize>,
}

#[derive(Args)]
struct MatchArgs {
    /// Recording CSVs; omit and use --synthetic for a desk run.
    inputs: Vec<PathBuf>,
    /// Generate this many synthetic recordings instead of reading files.
    #[arg(long)]
    synthetic: Option<usize>,
    /// Compression ratios, comma separated.
    #[arg(long)]
    cr: Option<String>,
    /// Grid resolution per axis.
    #[arg(long)]
    grid: Option<usize>,
    /// Enable nested minimum refinement (default).
    #[arg(long, overrides_with = "no_refine")]
    refine: bool,
    #[arg(long)]
    no_refine: bool,
    #[arg(long)]
    species: Option<String>,
    #[arg(long)]
    fc_cpm: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Channel indices to take from each input, comma separated.
    #[arg(long)]
    channels: Option<String>,
    /// Segment bounds in samples, `start:end`, applied before trimming.
    #[arg(long)]
    segment: Option<String>,
    #[arg(long)]
    ts: Option<f64>,
    /// Fixed decomposition depth (default: per-point selection).
    #[arg(long)]
    levels: Option<usize>,
    /// Line-oriented key=value config file; flags win on conflict.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct WavefunArgs {
    #[arg(long, default_value = "db3")]
    wavelet: String,
    #[arg(long, default_value_t = SHAPE_DEPTH)]
    depth: usize,
    /// Output CSV path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> anyhow::Result<()> {
    env_logger::init();
    if let Ok(value) = std::env::var(WORKERS_ENV) {
        let workers: usize = value
            .parse()
            .with_context(|| format!("{WORKERS_ENV} must be a positive integer"))?;
        if workers == 0 {
            bail!("{WORKERS_ENV} must be a positive integer");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .context("failed to configure the worker pool")?;
    }
    match Cli::parse().command {
        Command::Gen(args) => cmd_gen(args),
        Command::Scales(args) => cmd_scales(args),
        Command::Compress(args) => cmd_compress(args),
        Command::Surface(args) => cmd_surface(args),
        Command::Match(args) => cmd_match(args),
        Command::Wavefun(args) => cmd_wavefun(args),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> anyhow::Result<Vec<T>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<T>()
                .map_err(|_| anyhow::anyhow!("invalid {what} entry '{p}'"))
        })
        .collect()
}

fn parse_segment(s: &str) -> anyhow::Result<(usize, usize)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        bail!("segment must be start:end, got '{s}'");
    }
    Ok((parts[0].trim().parse()?, parts[1].trim().parse()?))
}

/// Line-oriented `key=value` config; `#` starts a comment.
fn load_config(path: &Path) -> anyhow::Result<HashMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    let mut map = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {} is not key=value: '{raw}'", i + 1);
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn dominant_hz(species: &str, fc_cpm: Option<f64>) -> anyhow::Result<f64> {
    let cpm = match fc_cpm {
        Some(v) => v,
        None => Species::parse(species)?.dominant_cpm(),
    };
    if !(cpm.is_finite() && cpm > 0.0) {
        bail!("dominant frequency must be positive, got {cpm} cpm");
    }
    Ok(cpm / 60.0)
}

fn cmd_gen(args: GenArgs) -> anyhow::Result<()> {
    let harmonics: Vec<f64> = if args.harmonics.trim().is_empty() {
        Vec::new()
    } else {
        parse_list(&args.harmonics, "harmonic")?
    };
    let mut channels = Vec::with_capacity(args.channels);
    let mut names = Vec::with_capacity(args.channels);
    for c in 0..args.channels {
        let spec = SyntheticSpec {
            dominant_cpm: args.dominant_cpm,
            harmonics: harmonics.clone(),
            noise_level: args.noise,
            duration_s: args.duration,
            seed: args.seed + c as u64,
        };
        channels.push(synthesize(&spec)?);
        names.push(format!("ch{}", c + 1));
    }
    write_recording_csv(&args.out, &names, &channels)?;
    for (name, ch) in names.iter().zip(&channels) {
        let peak = periodogram_peak_cpm(ch)?;
        println!(
            "{name}: {} samples at 10 Hz, periodogram peak {peak:.3} cpm",
            ch.len()
        );
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

fn scales_wavelets(arg: &Option<String>) -> anyhow::Result<Vec<WaveletSpec>> {
    match arg {
        Some(name) => Ok(vec![WaveletSpec::parse(name)?]),
        None => Ok(vec![
            WaveletSpec::Haar,
            WaveletSpec::Daubechies2,
            WaveletSpec::Daubechies3,
            WaveletSpec::Coiflet1,
        ]),
    }
}

fn cmd_scales(args: ScalesArgs) -> anyhow::Result<()> {
    let f_c = match &args.estimate_from {
        Some(path) => {
            let rec = load_recording(path, args.ts)?;
            let peak = periodogram_peak_cpm(&rec.channels[0])?;
            println!("estimated dominant frequency: {peak:.3} cpm (from {})", path.display());
            peak / 60.0
        }
        None => dominant_hz(&args.species, args.fc_cpm)?,
    };
    for spec in scales_wavelets(&args.wavelet)? {
        let sel = select_scales(&spec, SHAPE_DEPTH, args.ts, f_c, args.max_levels)?;
        println!(
            "{:<8} f_psi = {:.4}  f_c = {:.3} cpm  J0 = {}",
            spec.name(),
            sel.center_frequency,
            sel.dominant_frequency * 60.0,
            sel.chosen_levels
        );
        let pseudo: Vec<String> = sel
            .pseudo_frequencies
            .iter()
            .enumerate()
            .map(|(i, f)| format!("j={}: {:.3}", i + 1, f * 60.0))
            .collect();
        println!("         f_pseudo [cpm]: {}", pseudo.join("  "));
    }
    Ok(())
}

fn select_channels(total: usize, arg: &Option<String>) -> anyhow::Result<Vec<usize>> {
    match arg {
        None => Ok((0..total).collect()),
        Some(s) => {
            let idx: Vec<usize> = parse_list(s, "channel")?;
            for &i in &idx {
                if i >= total {
                    bail!("channel index {i} out of range (recording has {total} channels)");
                }
            }
            Ok(idx)
        }
    }
}

/// Cut the optional segment, then center-trim to a power of two.
fn prepare_channel(x: &Signal, segment: Option<(usize, usize)>, label: &str) -> anyhow::Result<Signal> {
    let cut = match segment {
        Some((start, end)) => cut_segment(x, start, end)?,
        None => x.clone(),
    };
    let (trimmed, start) = center_trim(&cut)?;
    if trimmed.len() != cut.len() {
        log::info!(
            "{label}: trimmed {} samples to {} (window starts at sample {start})",
            cut.len(),
            trimmed.len()
        );
    }
    Ok(trimmed)
}

fn cmd_compress(args: CompressArgs) -> anyhow::Result<()> {
    let spec = WaveletSpec::parse(&args.wavelet)?;
    let rec = load_recording(&args.input, args.ts)?;
    let segment = args.segment.as_deref().map(parse_segment).transpose()?;
    let f_c = dominant_hz(&args.species, args.fc_cpm)?;
    println!("channel,cr_requested,cr_actual,M,prd_percent");
    for idx in select_channels(rec.channels.len(), &args.channels)? {
        let x = prepare_channel(&rec.channels[idx], segment, &rec.channel_names[idx])?;
        let j_max = x.max_levels()?;
        let levels = match args.levels {
            Some(j) => j.clamp(1, j_max),
            None => {
                select_scales(&spec, SHAPE_DEPTH, args.ts, f_c, j_max)?.chosen_levels
            }
        };
        let result = compress_and_measure(
            &x,
            &spec,
            DecompositionPlan::new(levels)?,
            CompressionConfig::new(args.cr)?,
        )?;
        println!("{},{}", rec.channel_names[idx], result.csv_row());
    }
    Ok(())
}

fn cmd_surface(args: SurfaceArgs) -> anyhow::Result<()> {
    let signal = match &args.input {
        Some(path) => {
            let rec = load_recording(path, args.ts)?;
            if args.channel >= rec.channels.len() {
                bail!("channel {} out of range", args.channel);
            }
            let segment = args.segment.as_deref().map(parse_segment).transpose()?;
            prepare_channel(&rec.channels[args.channel], segment, &rec.channel_names[args.channel])?
        }
        None => {
            let raw = synthesize(&SyntheticSpec::canine_preset(args.seed))?;
            center_trim(&raw)?.0
        }
    };
    let f_c = dominant_hz(&args.species, args.fc_cpm)?;
    let policy = match args.levels {
        Some(j) => LevelsPolicy::Fixed(j),
        None => LevelsPolicy::PerPoint,
    };
    let ev = SurfaceEvaluator::new(&signal, CompressionConfig::new(args.cr)?, f_c, policy)?;
    let surface = prd_surface(&ev, GridSpec::full_plane(args.grid)?)?;
    std::fs::create_dir_all(&args.out_dir)?;
    let stem = if args.cr.fract() == 0.0 {
        format!("surface_cr{}", args.cr as i64)
    } else {
        format!("surface_cr{}", args.cr)
    };
    let csv_path = args.out_dir.join(format!("{stem}.csv"));
    surface.write_csv(BufWriter::new(File::create(&csv_path)?))?;
    let json_path = args.out_dir.join(format!("{stem}.json"));
    std::fs::write(&json_path, surface.summary_json()? + "\n")?;
    let (a, b, prd) = surface.minimum();
    println!("minimum: a = {a:.6}, b = {b:.6}, prd = {prd:.4} %");
    println!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(())
}

fn cmd_match(args: MatchArgs) -> anyhow::Result<()> {
    let file_config = match &args.config {
        Some(path) => load_config(path)?,
        None => HashMap::new(),
    };
    let from_cfg = |key: &str| file_config.get(key).cloned();

    let cr_text = args
        .cr
        .or_else(|| from_cfg("cr"))
        .unwrap_or_else(|| "3,5,7,10".to_string());
    let cr_set: Vec<f64> = parse_list(&cr_text, "compression ratio")?;
    let grid = args
        .grid
        .or_else(|| from_cfg("grid").and_then(|v| v.parse().ok()))
        .unwrap_or(129);
    let refine = if args.no_refine {
        false
    } else if args.refine {
        true
    } else {
        from_cfg("refine").map(|v| v != "false" && v != "0").unwrap_or(true)
    };
    let species = args
        .species
        .or_else(|| from_cfg("species"))
        .unwrap_or_else(|| "canine".to_string());
    let fc_cpm = args.fc_cpm.or_else(|| from_cfg("fc-cpm").and_then(|v| v.parse().ok()));
    let seed = args
        .seed
        .or_else(|| from_cfg("seed").and_then(|v| v.parse().ok()))
        .unwrap_or(42);
    let out_dir = args
        .out_dir
        .or_else(|| from_cfg("out-dir").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let channels = args.channels.or_else(|| from_cfg("channels"));
    let segment = args
        .segment
        .or_else(|| from_cfg("segment"))
        .as_deref()
        .map(parse_segment)
        .transpose()?;
    let ts = args
        .ts
        .or_else(|| from_cfg("ts").and_then(|v| v.parse().ok()))
        .unwrap_or(0.1);
    let f_c = dominant_hz(&species, fc_cpm)?;

    let mut recordings = Vec::new();
    let mut names = Vec::new();
    if let Some(count) = args.synthetic {
        if count == 0 {
            bail!("--synthetic needs at least one recording");
        }
        let preset = match Species::parse(&species)? {
            Species::Canine => SyntheticSpec::canine_preset,
            Species::Human => SyntheticSpec::human_preset,
        };
        for i in 0..count as u64 {
            let raw = synthesize(&preset(seed + i))?;
            recordings.push(center_trim(&raw)?.0);
            names.push(format!("synthetic-{}", seed + i));
        }
    } else {
        if args.inputs.is_empty() {
            bail!("provide recording CSVs or --synthetic N");
        }
        for path in &args.inputs {
            let rec = load_recording(path, ts)?;
            for idx in select_channels(rec.channels.len(), &channels)? {
                let label = format!("{}:{}", rec.subject, rec.channel_names[idx]);
                recordings.push(prepare_channel(&rec.channels[idx], segment, &label)?);
                names.push(label);
            }
        }
    }

    std::fs::create_dir_all(&out_dir)?;
    let mut cfg = MatchConfig::new(recordings, names)?;
    cfg.cr_set = cr_set;
    cfg.grid_resolution = grid;
    cfg.refine = refine;
    cfg.dominant_hz = f_c;
    cfg.levels_policy = match args.levels.or_else(|| from_cfg("levels").and_then(|v| v.parse().ok()))
    {
        Some(j) => LevelsPolicy::Fixed(j),
        None => LevelsPolicy::PerPoint,
    };
    cfg.out_dir = Some(out_dir.clone());

    let (report, artifacts) = run_match(&cfg)?;
    println!(
        "matched {} recordings over {} ratios (grid {}x{}, refine {})",
        report.recordings.len(),
        report.results.len(),
        grid,
        grid,
        refine
    );
    for r in &report.results {
        println!(
            "cr {:>4}: optimum a = {:.4}, b = {:.4} (a/pi = {:.4}, b/pi = {:.4}); \
             corr db3 = {:.4}",
            r.cr,
            r.optimum.0,
            r.optimum.1,
            r.optimum_over_pi.0,
            r.optimum_over_pi.1,
            r.correlation_vs.db3
        );
    }
    for path in &artifacts.surface_csvs {
        println!("wrote {}", path.display());
    }
    if let Some(path) = &artifacts.match_json {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_wavefun(args: WavefunArgs) -> anyhow::Result<()> {
    let spec = WaveletSpec::parse(&args.wavelet)?;
    let shape = wavelet_shape(&spec, args.depth)?;
    let mut out: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(std::io::stdout().lock()),
    };
    writeln!(out, "t,psi")?;
    for (i, v) in shape.samples().iter().enumerate() {
        writeln!(out, "{},{v}", i as f64 * shape.grid_step())?;
    }
    Ok(())
}
