//! Monte Carlo detection chain and coincidence counting.
//!
//! [`simulate_run`] models the full experiment: a Poisson pair source, per-arm
//! launch and propagation losses, the two-particle splitter outcome, 50%
//! outcoupling back to photons, detector efficiency, dark counts, clock
//! quantization (100 MHz → 10 ns ticks by default), and detector dead time.
//! It emits one timestamp stream per detector channel, reproducible
//! bit-for-bit from the seed.
//!
//! [`count_coincidences`] emulates the FPGA counter: clicks on channels A and
//! B pair up greedily (earliest match first, each click consumed once) when
//! their ticks differ by at most the window.
//!
//! Launch/propagation/detector efficiencies and the dead time are desk-scale
//! defaults, not characterized device values; override them per run.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::beamsplitter::BeamsplitterSpec;
use crate::error::{Error, Result};
use crate::interference::{ScanResult, ScanUnit};
use crate::wavepacket::{scan_overlaps, WavepacketSpec};

/// Detector channel tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Channel {
    A,
    B,
}

impl Channel {
    pub fn name(&self) -> &'static str {
        match self {
            Channel::A => "A",
            Channel::B => "B",
        }
    }
}

/// Click times of one detector in integer clock ticks, strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct TimestampStream {
    pub channel: Channel,
    pub ticks: Vec<u64>,
    pub clock_hz: f64,
}

impl TimestampStream {
    pub fn new(channel: Channel, ticks: Vec<u64>, clock_hz: f64) -> Self {
        Self {
            channel,
            ticks,
            clock_hz,
        }
    }

    pub fn len(&self) -> usize {
        self.ticks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ticks.is_empty()
    }

    /// Span of the stream estimated from its last tick, seconds.
    pub fn duration_estimate_s(&self) -> f64 {
        match self.ticks.last() {
            Some(&last) => (last + 1) as f64 / self.clock_hz,
            None => 0.0,
        }
    }
}

/// The two detector streams of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamPair {
    pub a: TimestampStream,
    pub b: TimestampStream,
}

impl StreamPair {
    pub fn new(a: TimestampStream, b: TimestampStream) -> Result<Self> {
        if a.clock_hz != b.clock_hz {
            return Err(Error::ClockMismatch {
                a: a.clock_hz,
                b: b.clock_hz,
            });
        }
        Ok(Self { a, b })
    }

    pub fn clock_hz(&self) -> f64 {
        self.a.clock_hz
    }
}

/// Full detection-chain parameters.
///
/// Probabilities apply per photon/SPP; rates are per second. The outcoupling
/// default of 0.5 reflects the slit conversion efficiency; the remaining
/// defaults are desk-scale placeholders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Pair emission rate, pairs/s.
    pub pair_rate: f64,
    /// Photon → SPP conversion probability per arm.
    pub launch_efficiency: f64,
    /// Surface propagation transmission per SPP.
    pub propagation_transmission: f64,
    /// SPP → photon outcoupling probability.
    pub outcoupling_efficiency: f64,
    /// Detector quantum efficiency.
    pub detector_efficiency: f64,
    /// Dark counts per second per detector.
    pub dark_count_rate: f64,
    /// Detector dead time, seconds.
    pub dead_time_s: f64,
    /// Acquisition clock, Hz.
    pub clock_hz: f64,
    /// Coincidence window in clock ticks.
    pub coincidence_window_ticks: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            pair_rate: 1e5,
            launch_efficiency: 0.3,
            propagation_transmission: 0.5,
            outcoupling_efficiency: 0.5,
            detector_efficiency: 0.5,
            dark_count_rate: 100.0,
            dead_time_s: 50e-9,
            clock_hz: 1e8,
            coincidence_window_ticks: 1,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let probabilities = [
            ("launch_efficiency", self.launch_efficiency),
            ("propagation_transmission", self.propagation_transmission),
            ("outcoupling_efficiency", self.outcoupling_efficiency),
            ("detector_efficiency", self.detector_efficiency),
        ];
        for (name, p) in probabilities {
            if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} = {p} outside [0, 1]")));
            }
        }
        if !self.pair_rate.is_finite() || self.pair_rate < 0.0 {
            return Err(Error::Config("pair_rate must be >= 0".into()));
        }
        if !self.dark_count_rate.is_finite() || self.dark_count_rate < 0.0 {
            return Err(Error::Config("dark_count_rate must be >= 0".into()));
        }
        if !self.dead_time_s.is_finite() || self.dead_time_s < 0.0 {
            return Err(Error::Config("dead_time_s must be >= 0".into()));
        }
        if !self.clock_hz.is_finite() || self.clock_hz <= 0.0 {
            return Err(Error::Config("clock_hz must be > 0".into()));
        }
        Ok(())
    }

    fn dead_ticks(&self) -> u64 {
        (self.dead_time_s * self.clock_hz).ceil() as u64
    }
}

/// Counter output over one acquisition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoincidenceReport {
    pub singles_a: u64,
    pub singles_b: u64,
    pub coincidences: u64,
    /// Acquisition span estimated from the streams, seconds.
    pub duration_s: f64,
    /// Expected accidental coincidences `R_A·R_B·(2·window/clock)·duration`.
    pub accidental_estimate: f64,
}

/// Deterministic per-point seed derivation (SplitMix64 finalizer over the
/// master seed xor the golden-ratio-scaled point index). Scan points can
/// therefore run independently and in any order.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Simulates one acquisition of `duration_s` seconds at fixed wavepacket
/// overlap. Identical inputs and seed produce bit-identical streams.
pub fn simulate_run(
    config: &ExperimentConfig,
    spec: &BeamsplitterSpec,
    overlap: f64,
    duration_s: f64,
    seed: u64,
) -> Result<StreamPair> {
    config.validate()?;
    if !duration_s.is_finite() || duration_s < 0.0 {
        return Err(Error::Config("duration must be >= 0".into()));
    }
    let expected_pairs = config.pair_rate * duration_s;
    if expected_pairs > 1e9 {
        return Err(Error::Config(format!(
            "pair_rate x duration = {expected_pairs:.3e} expected pairs exceeds the 1e9 guard"
        )));
    }
    if duration_s * config.clock_hz > 9.2e18 {
        return Err(Error::Config(
            "duration x clock overflows the 64-bit tick range".into(),
        ));
    }
    let outcomes = spec.two_particle_distribution(overlap)?;
    let p_arm = config.launch_efficiency * config.propagation_transmission;
    let p_detect = config.outcoupling_efficiency * config.detector_efficiency;
    let p_single_a = [spec.t.norm_sqr(), spec.r.norm_sqr()]; // per input port
    let p_single_b = [spec.r.norm_sqr(), spec.t.norm_sqr()];

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut clicks_a: Vec<u64> = Vec::new();
    let mut clicks_b: Vec<u64> = Vec::new();

    if config.pair_rate > 0.0 {
        let gap = Exp::new(config.pair_rate).expect("positive rate");
        let mut time = gap.sample(&mut rng);
        while time < duration_s {
            let tick = (time * config.clock_hz).round() as u64;
            let survived = [rng.gen_bool(p_arm), rng.gen_bool(p_arm)];
            let (n_a, n_b) = match survived {
                [true, true] => {
                    let draw: f64 = rng.gen();
                    if draw < outcomes.p_coincidence {
                        (1u32, 1u32)
                    } else if draw < outcomes.p_coincidence + outcomes.p_both_a {
                        (2, 0)
                    } else if draw
                        < outcomes.p_coincidence + outcomes.p_both_a + outcomes.p_both_b
                    {
                        (0, 2)
                    } else {
                        (0, 0)
                    }
                }
                [first, second] if first != second => {
                    // Lone survivor; `second` tells which input port it used.
                    let port = usize::from(second);
                    let draw: f64 = rng.gen();
                    if draw < p_single_a[port] {
                        (1, 0)
                    } else if draw < p_single_a[port] + p_single_b[port] {
                        (0, 1)
                    } else {
                        (0, 0)
                    }
                }
                _ => (0, 0),
            };
            for _ in 0..n_a {
                if rng.gen_bool(p_detect) {
                    clicks_a.push(tick);
                }
            }
            for _ in 0..n_b {
                if rng.gen_bool(p_detect) {
                    clicks_b.push(tick);
                }
            }
            time += gap.sample(&mut rng);
        }
    }

    for clicks in [&mut clicks_a, &mut clicks_b] {
        if config.dark_count_rate > 0.0 {
            let gap = Exp::new(config.dark_count_rate).expect("positive rate");
            let mut time = gap.sample(&mut rng);
            while time < duration_s {
                clicks.push((time * config.clock_hz).round() as u64);
                time += gap.sample(&mut rng);
            }
        }
        finalize_channel(clicks, config.dead_ticks());
    }

    StreamPair::new(
        TimestampStream::new(Channel::A, clicks_a, config.clock_hz),
        TimestampStream::new(Channel::B, clicks_b, config.clock_hz),
    )
}

/// Sorts, merges simultaneous clicks, and applies dead time: after an
/// accepted click, anything closer than `dead_ticks` is discarded.
fn finalize_channel(clicks: &mut Vec<u64>, dead_ticks: u64) {
    clicks.sort_unstable();
    clicks.dedup();
    if dead_ticks > 1 {
        let mut kept = Vec::with_capacity(clicks.len());
        let mut last: Option<u64> = None;
        for &tick in clicks.iter() {
            if last.is_none_or(|prev| tick - prev >= dead_ticks) {
                kept.push(tick);
                last = Some(tick);
            }
        }
        *clicks = kept;
    }
}

/// Greedy earliest-match pairing of clicks within `|Δtick| ≤ window_ticks`,
/// each click consumed at most once. Symmetric in A and B, and the count is
/// non-decreasing in the window.
pub fn count_coincidences(
    a: &TimestampStream,
    b: &TimestampStream,
    window_ticks: u64,
) -> Result<CoincidenceReport> {
    if a.clock_hz != b.clock_hz {
        return Err(Error::ClockMismatch {
            a: a.clock_hz,
            b: b.clock_hz,
        });
    }
    let mut coincidences = 0u64;
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.ticks.len() && j < b.ticks.len() {
        let (ta, tb) = (a.ticks[i], b.ticks[j]);
        if ta.abs_diff(tb) <= window_ticks {
            coincidences += 1;
            i += 1;
            j += 1;
        } else if ta < tb {
            i += 1;
        } else {
            j += 1;
        }
    }
    let duration_s = a.duration_estimate_s().max(b.duration_estimate_s());
    let accidental_estimate = if duration_s > 0.0 {
        let rate_a = a.len() as f64 / duration_s;
        let rate_b = b.len() as f64 / duration_s;
        rate_a * rate_b * (2.0 * window_ticks as f64 / a.clock_hz) * duration_s
    } else {
        0.0
    };
    Ok(CoincidenceReport {
        singles_a: a.len() as u64,
        singles_b: b.len() as u64,
        coincidences,
        duration_s,
        accidental_estimate,
    })
}

/// Counts-based HOM scan: one seeded acquisition per delay with
/// `overlap = I(τ)`, coincidences counted at the configured window, Poisson
/// `√N` error bars attached.
///
/// The baseline is the mean count over far-delay points (`I(τ) < 0.02`); the
/// grid must contain at least one. Feature classification uses a 3σ noise
/// threshold instead of the exact-series tolerance.
pub fn hom_scan_counts(
    config: &ExperimentConfig,
    spec: &BeamsplitterSpec,
    template: &WavepacketSpec,
    delays_fs: &[f64],
    duration_per_point_s: f64,
    seed: u64,
) -> Result<ScanResult> {
    if delays_fs.is_empty() {
        return Err(Error::Config("empty delay grid".into()));
    }
    let overlaps = scan_overlaps(template, delays_fs)?;
    let mut counts = Vec::with_capacity(delays_fs.len());
    for (k, overlap) in overlaps.iter().enumerate() {
        let run = simulate_run(
            config,
            spec,
            overlap.value,
            duration_per_point_s,
            derive_seed(seed, k as u64),
        )?;
        let report = count_coincidences(&run.a, &run.b, config.coincidence_window_ticks)?;
        counts.push(report.coincidences as f64);
    }
    let wing: Vec<usize> = (0..counts.len())
        .filter(|&k| overlaps[k].value < 0.02)
        .collect();
    if wing.is_empty() {
        return Err(Error::Config(
            "delay grid has no far-delay baseline points (need I(τ) < 0.02)".into(),
        ));
    }
    let baseline = wing.iter().map(|&k| counts[k]).sum::<f64>() / wing.len() as f64;
    let center = delays_fs
        .iter()
        .enumerate()
        .min_by(|(_, x), (_, y)| x.abs().total_cmp(&y.abs()))
        .map(|(k, _)| k)
        .expect("non-empty grid");
    let extremum = counts[center];
    let flat_tol = 3.0 * (extremum.max(1.0) + baseline / wing.len() as f64).sqrt();
    let sigmas: Vec<f64> = counts.iter().map(|&n| n.max(1.0).sqrt()).collect();
    ScanResult::classified(
        delays_fs.to_vec(),
        counts,
        ScanUnit::Counts,
        baseline,
        extremum,
        flat_tol,
        crate::interference::classical_visibility_bound(spec)?,
        Some(sigmas),
    )
}
