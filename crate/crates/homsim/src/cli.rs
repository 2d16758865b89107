//! Command-line front end.
//!
//! Subcommands: `validate`, `hom`, `mz`, `classical-hom`, `simulate`,
//! `coincidences`, `presets`. Series payloads go to `--output` (or stdout)
//! as CSV or JSON; every file-writing invocation also drops a
//! `<output>.manifest.json` recording the command, resolved parameters,
//! seed, and SHA-256 of each artifact, so outputs are reproducible from
//! their manifest.
//!
//! Exit codes: 0 success, 1 validation/parse/runtime failure, 2 usage error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::beamsplitter::BeamsplitterSpec;
use crate::counting::{count_coincidences, simulate_run, ExperimentConfig};
use crate::error::{Error, Result};
use crate::interference::{
    assess_contrast, classical_field_hom, hom_scan, mz_fringes, ScanResult,
};
use crate::presets::{self, PhaseVariant};
use crate::stream;
use crate::wavepacket::{overlap, WavepacketSpec, SPEED_OF_LIGHT};

#[derive(Debug, Parser)]
#[command(
    name = "homsim",
    version,
    about = "Two-boson interference on lossy beamsplitters",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for stochastic commands.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Write the payload to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Payload format for series data.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check physicality of a splitter and report loss and phases.
    Validate {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Coincidence scan over delay (analytic or Monte Carlo counts).
    Hom {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        wavepacket: WavepacketArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Scan engine.
        #[arg(long, value_enum, default_value_t = HomMode::Analytic)]
        mode: HomMode,
        /// Residual-distinguishability scale on I(τ) (analytic mode).
        #[arg(long, default_value_t = 1.0)]
        max_overlap: f64,
        /// Acquisition length per delay point, seconds (montecarlo mode).
        #[arg(long, default_value_t = 0.5)]
        duration_per_point_s: f64,
        #[command(flatten)]
        chain: ChainArgs,
    },
    /// Mach-Zehnder fringe traces and their phase difference.
    Mz {
        #[command(flatten)]
        spec: SpecArgs,
        /// Number of phase samples over one 2π period.
        #[arg(long, default_value_t = 128)]
        points: usize,
    },
    /// Classical-field benchmark scan (phase-averaged intensity product).
    ClassicalHom {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        wavepacket: WavepacketArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Mutual-coherence ceiling, the classical analog of max overlap.
        #[arg(long, default_value_t = 1.0)]
        max_coherence: f64,
        /// Random phase draws per delay point.
        #[arg(long, default_value_t = 100_000)]
        phase_samples: usize,
    },
    /// Run the detection chain once and write the timestamp streams.
    Simulate {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        chain: ChainArgs,
        /// Acquisition length, seconds.
        #[arg(long, default_value_t = 1.0)]
        duration_s: f64,
        /// Fixed wavepacket overlap I in [0, 1].
        #[arg(long, conflicts_with = "delay_fs")]
        overlap: Option<f64>,
        /// Relative delay in fs; I is computed from the wavepacket flags.
        #[arg(long, allow_hyphen_values = true)]
        delay_fs: Option<f64>,
        #[command(flatten)]
        wavepacket: WavepacketArgs,
        /// Stream encoding.
        #[arg(long, value_enum, default_value_t = StreamFormat::Binary)]
        stream_format: StreamFormat,
    },
    /// Count coincidences between recorded streams.
    Coincidences {
        /// One or two stream files (binary or CSV; channels are merged).
        #[arg(required = true, num_args = 1..=2)]
        files: Vec<PathBuf>,
        /// Coincidence window in clock ticks.
        #[arg(long, default_value_t = 1)]
        window_ticks: u64,
        /// Clock frequency assumed for CSV inputs, Hz.
        #[arg(long, default_value_t = 1e8)]
        clock_hz: f64,
    },
    /// List the built-in splitter presets.
    Presets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HomMode {
    Analytic,
    Montecarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StreamFormat {
    Binary,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PhaseArg {
    Design,
    Measured,
}

impl From<PhaseArg> for PhaseVariant {
    fn from(value: PhaseArg) -> Self {
        match value {
            PhaseArg::Design => PhaseVariant::Design,
            PhaseArg::Measured => PhaseVariant::Measured,
        }
    }
}

/// Splitter source: exactly one of preset, cartesian flags, polar flags, or
/// a JSON file.
#[derive(Debug, Args)]
struct SpecArgs {
    /// Preset name (sample-I, sample-II); requires --phase.
    #[arg(long, group = "spec_source", requires = "phase")]
    preset: Option<String>,
    /// Phase variant for --preset.
    #[arg(long, value_enum, requires = "preset")]
    phase: Option<PhaseArg>,
    /// Complex reflection amplitude, e.g. "0.42" or "0.3+0.2i".
    #[arg(long, group = "spec_source", requires = "t", allow_hyphen_values = true)]
    r: Option<String>,
    /// Complex transmission amplitude.
    #[arg(long, requires = "r", allow_hyphen_values = true)]
    t: Option<String>,
    /// |r| for the polar form; requires the other three polar flags.
    #[arg(
        long,
        group = "spec_source",
        requires = "phi_r_deg",
        requires = "t_abs",
        requires = "phi_t_deg"
    )]
    r_abs: Option<f64>,
    #[arg(long, requires = "r_abs", allow_hyphen_values = true)]
    phi_r_deg: Option<f64>,
    #[arg(long, requires = "r_abs")]
    t_abs: Option<f64>,
    #[arg(long, requires = "r_abs", allow_hyphen_values = true)]
    phi_t_deg: Option<f64>,
    /// JSON file holding a cartesian or polar spec.
    #[arg(long, group = "spec_source")]
    spec_json: Option<PathBuf>,
}

impl SpecArgs {
    fn resolve(&self) -> std::result::Result<BeamsplitterSpec, Failure> {
        if let Some(name) = &self.preset {
            let preset = presets::lookup(name).ok_or_else(|| {
                Failure::usage(format!(
                    "unknown preset {name:?}; available: {}",
                    presets::all().map(|p| p.name).join(", ")
                ))
            })?;
            let phase = self.phase.expect("clap enforces --phase with --preset");
            return Ok(preset.spec(phase.into()));
        }
        if let (Some(r), Some(t)) = (&self.r, &self.t) {
            let r = parse_complex(r).map_err(Failure::usage)?;
            let t = parse_complex(t).map_err(Failure::usage)?;
            return Ok(BeamsplitterSpec::new(r, t));
        }
        if let Some(r_abs) = self.r_abs {
            return Ok(BeamsplitterSpec::from_polar(
                r_abs,
                self.phi_r_deg.expect("clap enforces polar flags").to_radians(),
                self.t_abs.expect("clap enforces polar flags"),
                self.phi_t_deg.expect("clap enforces polar flags").to_radians(),
            ));
        }
        if let Some(path) = &self.spec_json {
            let text = std::fs::read_to_string(path).map_err(Error::from)?;
            return Ok(BeamsplitterSpec::from_json(&text)?);
        }
        Err(Failure::usage(
            "no splitter given: use --preset, --r/--t, --r-abs/..., or --spec-json".to_string(),
        ))
    }

    fn describe(&self) -> serde_json::Value {
        match self.resolve() {
            Ok(spec) => serde_json::to_value(&spec).unwrap_or(serde_json::Value::Null),
            Err(_) => serde_json::Value::Null,
        }
    }
}

#[derive(Debug, Args)]
struct WavepacketArgs {
    /// Center wavelength, nm.
    #[arg(long, default_value_t = 806.0)]
    lambda0_nm: f64,
    /// Intensity-spectrum FWHM, nm.
    #[arg(long, default_value_t = 1.0)]
    fwhm_nm: f64,
}

impl WavepacketArgs {
    fn template(&self) -> WavepacketSpec {
        WavepacketSpec::new(self.lambda0_nm, self.fwhm_nm, 0.0)
    }
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Half-width of the symmetric delay grid, fs.
    #[arg(long, default_value_t = 4000.0, conflicts_with = "span_um")]
    span_fs: f64,
    /// Half-width as an optical path difference, µm (converted via c).
    #[arg(long)]
    span_um: Option<f64>,
    /// Number of grid points.
    #[arg(long, default_value_t = 81)]
    points: usize,
}

impl GridArgs {
    fn delays_fs(&self) -> std::result::Result<Vec<f64>, Failure> {
        if self.points < 2 {
            return Err(Failure::usage("need at least 2 grid points".to_string()));
        }
        let span_fs = match self.span_um {
            Some(um) => um * 1e-6 / SPEED_OF_LIGHT * 1e15,
            None => self.span_fs,
        };
        if !(span_fs.is_finite() && span_fs > 0.0) {
            return Err(Failure::usage(format!("invalid span {span_fs} fs")));
        }
        let n = self.points;
        Ok((0..n)
            .map(|k| -span_fs + 2.0 * span_fs * k as f64 / (n - 1) as f64)
            .collect())
    }
}

/// Detection-chain overrides; defaults follow [`ExperimentConfig::default`].
#[derive(Debug, Args)]
struct ChainArgs {
    /// Pair emission rate, pairs/s.
    #[arg(long)]
    pair_rate: Option<f64>,
    /// Photon→SPP launch efficiency per arm.
    #[arg(long)]
    launch_eff: Option<f64>,
    /// SPP propagation transmission per arm.
    #[arg(long)]
    prop_trans: Option<f64>,
    /// SPP→photon outcoupling efficiency.
    #[arg(long)]
    outcoupling_eff: Option<f64>,
    /// Detector quantum efficiency.
    #[arg(long)]
    detector_eff: Option<f64>,
    /// Dark counts per second per detector.
    #[arg(long)]
    dark_rate: Option<f64>,
    /// Detector dead time, seconds.
    #[arg(long)]
    dead_time_s: Option<f64>,
    /// Acquisition clock, Hz.
    #[arg(long)]
    clock_hz: Option<f64>,
    /// Coincidence window, clock ticks.
    #[arg(long)]
    window_ticks: Option<u64>,
}

impl ChainArgs {
    fn config(&self) -> ExperimentConfig {
        let mut config = ExperimentConfig::default();
        if let Some(v) = self.pair_rate {
            config.pair_rate = v;
        }
        if let Some(v) = self.launch_eff {
            config.launch_efficiency = v;
        }
        if let Some(v) = self.prop_trans {
            config.propagation_transmission = v;
        }
        if let Some(v) = self.outcoupling_eff {
            config.outcoupling_efficiency = v;
        }
        if let Some(v) = self.detector_eff {
            config.detector_efficiency = v;
        }
        if let Some(v) = self.dark_rate {
            config.dark_count_rate = v;
        }
        if let Some(v) = self.dead_time_s {
            config.dead_time_s = v;
        }
        if let Some(v) = self.clock_hz {
            config.clock_hz = v;
        }
        if let Some(v) = self.window_ticks {
            config.coincidence_window_ticks = v;
        }
        config
    }
}

/// A failed invocation with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub message: String,
    pub exit_code: i32,
}

impl Failure {
    fn usage(message: String) -> Self {
        Self {
            message,
            exit_code: 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Self {
            message: err.to_string(),
            exit_code: 1,
        }
    }
}

/// Parses "a", "bi", or "a±bi" into a complex number.
pub fn parse_complex(input: &str) -> std::result::Result<num_complex::Complex64, String> {
    let s: String = input.trim().replace(' ', "");
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    let bad = |_| format!("cannot parse complex number from {input:?}");
    if let Some(imag) = s.strip_suffix(['i', 'j']) {
        // Find the split between real and imaginary parts: a sign that is
        // neither leading nor part of an exponent.
        let split = imag
            .char_indices()
            .skip(1)
            .filter(|&(k, c)| {
                (c == '+' || c == '-')
                    && !matches!(imag.as_bytes()[k - 1], b'e' | b'E')
            })
            .map(|(k, _)| k)
            .last();
        return match split {
            Some(k) => {
                let re: f64 = imag[..k].parse().map_err(bad)?;
                let im: f64 = match &imag[k..] {
                    "+" => 1.0,
                    "-" => -1.0,
                    text => text.parse().map_err(bad)?,
                };
                Ok(num_complex::Complex64::new(re, im))
            }
            None => {
                let im: f64 = match imag {
                    "" => 1.0,
                    "-" => -1.0,
                    text => text.parse().map_err(bad)?,
                };
                Ok(num_complex::Complex64::new(0.0, im))
            }
        };
    }
    let re: f64 = s.parse().map_err(bad)?;
    Ok(num_complex::Complex64::new(re, 0.0))
}

#[derive(Serialize)]
struct RunManifest {
    command: Vec<String>,
    params: serde_json::Value,
    seed: u64,
    outputs: Vec<ArtifactHash>,
}

#[derive(Serialize)]
struct ArtifactHash {
    path: String,
    sha256: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut hex = String::with_capacity(64);
    for byte in digest {
        let _ = write!(hex, "{byte:02x}");
    }
    hex
}

/// Writes the payload and its manifest; returns the human summary target.
fn emit_payload(
    output: Option<&Path>,
    payload: &[u8],
    manifest: RunManifest,
) -> Result<()> {
    match output {
        Some(path) => {
            std::fs::write(path, payload)?;
            let manifest_path = manifest_path_for(path);
            let mut manifest = manifest;
            manifest.outputs.push(ArtifactHash {
                path: path.display().to_string(),
                sha256: sha256_hex(payload),
            });
            std::fs::write(&manifest_path, serde_json::to_vec_pretty(&manifest)?)?;
        }
        None => {
            use std::io::Write;
            std::io::stdout().write_all(payload)?;
        }
    }
    Ok(())
}

fn manifest_path_for(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_os_string();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn scan_payload(scan: &ScanResult, format: Format) -> Result<Vec<u8>> {
    Ok(match format {
        Format::Csv => scan.to_csv().into_bytes(),
        Format::Json => serde_json::to_vec_pretty(scan)?,
    })
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.exit_code
        }
    }
}

fn argv() -> Vec<String> {
    std::env::args().collect()
}

fn dispatch(cli: &Cli) -> std::result::Result<(), Failure> {
    match &cli.command {
        Command::Validate { spec } => {
            let spec = spec.resolve()?;
            let report = spec.validate().map_err(Failure::from)?;
            let phases = spec.phases();
            println!("spec: {spec}");
            println!("validation: {report}");
            println!("loss fraction: {:.6}", report.loss_fraction);
            println!("2 phi_rt: {:.4} deg", phases.two_phi_rt.to_degrees());
            if report.ok() {
                Ok(())
            } else {
                Err(Failure {
                    message: format!("unphysical splitter: {report}"),
                    exit_code: 1,
                })
            }
        }
        Command::Hom {
            spec,
            wavepacket,
            grid,
            mode,
            max_overlap,
            duration_per_point_s,
            chain,
        } => {
            let bs = spec.resolve()?;
            let template = wavepacket.template();
            let delays = grid.delays_fs()?;
            let scan = match mode {
                HomMode::Analytic => {
                    hom_scan(&bs, &template, &delays, *max_overlap).map_err(Failure::from)?
                }
                HomMode::Montecarlo => crate::counting::hom_scan_counts(
                    &chain.config(),
                    &bs,
                    &template,
                    &delays,
                    *duration_per_point_s,
                    cli.seed,
                )
                .map_err(Failure::from)?,
            };
            let verdict = assess_contrast(&scan);
            let manifest = RunManifest {
                command: argv(),
                params: json!({
                    "spec": spec.describe(),
                    "wavepacket": template,
                    "delays_fs": {"span": grid.span_fs, "points": grid.points},
                    "mode": format!("{mode:?}"),
                    "max_overlap": max_overlap,
                }),
                seed: cli.seed,
                outputs: vec![],
            };
            emit_payload(
                cli.output.as_deref(),
                &scan_payload(&scan, cli.format).map_err(Failure::from)?,
                manifest,
            )
            .map_err(Failure::from)?;
            eprintln!(
                "kind: {:?}, contrast: {:.4}, quantum: {} (classical bound {:.3})",
                verdict.kind,
                verdict.contrast,
                if verdict.quantum_flag { "yes" } else { "no" },
                scan.classical_bound
            );
            Ok(())
        }
        Command::Mz { spec, points } => {
            let bs = spec.resolve()?;
            if *points < 3 {
                return Err(Failure::usage("need at least 3 phase points".into()));
            }
            let phases: Vec<f64> = (0..*points)
                .map(|k| std::f64::consts::TAU * k as f64 / *points as f64)
                .collect();
            let traces = mz_fringes(&bs, &phases).map_err(Failure::from)?;
            let payload = match cli.format {
                Format::Csv => traces.to_csv().into_bytes(),
                Format::Json => serde_json::to_vec_pretty(&traces).map_err(Error::from)?,
            };
            let manifest = RunManifest {
                command: argv(),
                params: json!({"spec": spec.describe(), "points": points}),
                seed: cli.seed,
                outputs: vec![],
            };
            emit_payload(cli.output.as_deref(), &payload, manifest).map_err(Failure::from)?;
            eprintln!(
                "phase difference: {:.4} deg, visibility: {:.4}",
                traces.phase_difference.to_degrees(),
                traces.visibility
            );
            Ok(())
        }
        Command::ClassicalHom {
            spec,
            wavepacket,
            grid,
            max_coherence,
            phase_samples,
        } => {
            let bs = spec.resolve()?;
            let template = wavepacket.template();
            let delays = grid.delays_fs()?;
            let scan = classical_field_hom(
                &bs,
                &template,
                &delays,
                *max_coherence,
                *phase_samples,
                cli.seed,
            )
            .map_err(Failure::from)?;
            let verdict = assess_contrast(&scan);
            let manifest = RunManifest {
                command: argv(),
                params: json!({
                    "spec": spec.describe(),
                    "wavepacket": template,
                    "max_coherence": max_coherence,
                    "phase_samples": phase_samples,
                }),
                seed: cli.seed,
                outputs: vec![],
            };
            emit_payload(
                cli.output.as_deref(),
                &scan_payload(&scan, cli.format).map_err(Failure::from)?,
                manifest,
            )
            .map_err(Failure::from)?;
            eprintln!(
                "kind: {:?}, visibility: {:.4} (analytic classical bound {:.4})",
                verdict.kind, verdict.contrast, scan.classical_bound
            );
            Ok(())
        }
        Command::Simulate {
            spec,
            chain,
            duration_s,
            overlap: fixed_overlap,
            delay_fs,
            wavepacket,
            stream_format,
        } => {
            let bs = spec.resolve()?;
            let config = chain.config();
            let overlap_value = match (fixed_overlap, delay_fs) {
                (Some(value), _) => *value,
                (None, Some(delay)) => {
                    let template = wavepacket.template();
                    overlap(&template, &template.delayed(*delay))
                        .map_err(Failure::from)?
                        .value
                }
                (None, None) => 1.0,
            };
            let run = simulate_run(&config, &bs, overlap_value, *duration_s, cli.seed)
                .map_err(Failure::from)?;
            let payload = match stream_format {
                StreamFormat::Binary => stream::write_binary(&run),
                StreamFormat::Csv => stream::write_csv(&run).into_bytes(),
            };
            let manifest = RunManifest {
                command: argv(),
                params: json!({
                    "spec": spec.describe(),
                    "config": config,
                    "overlap": overlap_value,
                    "duration_s": duration_s,
                }),
                seed: cli.seed,
                outputs: vec![],
            };
            emit_payload(cli.output.as_deref(), &payload, manifest).map_err(Failure::from)?;
            eprintln!(
                "singles A: {}, singles B: {}, overlap I = {overlap_value:.4}",
                run.a.len(),
                run.b.len()
            );
            Ok(())
        }
        Command::Coincidences {
            files,
            window_ticks,
            clock_hz,
        } => {
            let mut pairs = Vec::new();
            for path in files {
                let bytes = std::fs::read(path).map_err(Error::from)?;
                pairs.push(stream::parse_auto(&bytes, *clock_hz).map_err(Failure::from)?);
            }
            let merged = merge_pairs(pairs).map_err(Failure::from)?;
            let report = count_coincidences(&merged.a, &merged.b, *window_ticks)
                .map_err(Failure::from)?;
            let payload = serde_json::to_vec_pretty(&report).map_err(Error::from)?;
            let manifest = RunManifest {
                command: argv(),
                params: json!({
                    "files": files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
                    "window_ticks": window_ticks,
                }),
                seed: cli.seed,
                outputs: vec![],
            };
            emit_payload(cli.output.as_deref(), &payload, manifest).map_err(Failure::from)?;
            if cli.output.is_some() {
                eprintln!(
                    "coincidences: {} (accidental estimate {:.2})",
                    report.coincidences, report.accidental_estimate
                );
            } else {
                println!();
            }
            Ok(())
        }
        Command::Presets => {
            println!(
                "{:<10} {:>5} {:>5} {:>12} {:>14}  note",
                "name", "|r|", "|t|", "2phi_rt design", "2phi_rt measured"
            );
            for preset in presets::all() {
                println!(
                    "{:<10} {:>5} {:>5} {:>11}deg {:>13}deg  {}",
                    preset.name,
                    preset.r_abs,
                    preset.t_abs,
                    preset.two_phi_rt_design_deg,
                    preset.two_phi_rt_measured_deg,
                    preset.note
                );
            }
            Ok(())
        }
    }
}

/// Merges the channel contents of several parsed files into one pair.
fn merge_pairs(pairs: Vec<crate::counting::StreamPair>) -> Result<crate::counting::StreamPair> {
    let mut iter = pairs.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::Config("no stream files given".into()))?;
    let clock = first.clock_hz();
    let (mut ticks_a, mut ticks_b) = (first.a.ticks, first.b.ticks);
    for pair in iter {
        if pair.clock_hz() != clock {
            return Err(Error::ClockMismatch {
                a: clock,
                b: pair.clock_hz(),
            });
        }
        ticks_a.extend(pair.a.ticks);
        ticks_b.extend(pair.b.ticks);
    }
    for ticks in [&mut ticks_a, &mut ticks_b] {
        ticks.sort_unstable();
        if ticks.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config(
                "merged streams contain duplicate ticks on one channel".into(),
            ));
        }
    }
    crate::counting::StreamPair::new(
        crate::counting::TimestampStream::new(crate::counting::Channel::A, ticks_a, clock),
        crate::counting::TimestampStream::new(crate::counting::Channel::B, ticks_b, clock),
    )
}
