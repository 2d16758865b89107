//! Delay scans, fringe analysis, and the classical-field benchmark.
//!
//! A HOM scan sweeps the relative delay τ between the two input packets and
//! evaluates the pair-coincidence probability at effective overlap
//! `I_eff(τ) = max_overlap · I(τ)`, where the single scalar `max_overlap`
//! absorbs all residual experimental distinguishability. Contrast is defined
//! against the far-delay baseline: `|baseline − extremum| / baseline`.
//!
//! The same splitter driven by two mutually coherent classical fields with a
//! uniformly random relative phase gives the classical benchmark: its
//! coincidence proxy `⟨I_a·I_b⟩` has visibility at most
//! `|2·Re(t²·conj(r)²)| / (|r|² + |t|²)²`, which caps at 50% for a balanced
//! lossless splitter. A scan whose contrast exceeds the applicable bound is
//! flagged as quantum.

use std::f64::consts::TAU;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::beamsplitter::{wrap_angle, BeamsplitterSpec};
use crate::error::{Error, Result};
use crate::tol::TOL_ALGEBRAIC;
use crate::wavepacket::{scan_overlaps, WavepacketSpec};

/// Shape of a coincidence feature at zero delay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanKind {
    Dip,
    Peak,
    Flat,
}

/// What the scan's value series measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanUnit {
    /// Pair-coincidence probability (analytic scans).
    Probability,
    /// Raw coincidence counts (Monte Carlo scans).
    Counts,
    /// Phase-averaged `⟨I_a·I_b⟩` of classical fields.
    IntensityProduct,
}

/// A delay scan with its extracted feature.
#[derive(Debug, Clone, Serialize)]
pub struct ScanResult {
    pub delays_fs: Vec<f64>,
    /// One value per delay; meaning given by `unit`.
    pub values: Vec<f64>,
    pub unit: ScanUnit,
    /// Far-delay (I → 0) level.
    pub baseline: f64,
    /// Value at τ = 0.
    pub extremum: f64,
    pub kind: ScanKind,
    /// `|baseline − extremum| / baseline`; 0 for flat scans.
    pub contrast: f64,
    /// Classical-field visibility limit the contrast is compared against:
    /// 0.5 for dips, `|2·Re(t²·conj(r)²)|/(|r|²+|t|²)²` for peaks.
    pub classical_bound: f64,
    /// Poisson error bars (√N), present for counts-based scans.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_sigma: Option<Vec<f64>>,
}

impl ScanResult {
    /// Classifies a finished series. `flat_tol` is the minimum
    /// baseline-to-extremum separation that counts as a feature: 1e-12 for
    /// exact series, a noise-derived threshold for Monte Carlo ones.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn classified(
        delays_fs: Vec<f64>,
        values: Vec<f64>,
        unit: ScanUnit,
        baseline: f64,
        extremum: f64,
        flat_tol: f64,
        peak_bound: f64,
        value_sigma: Option<Vec<f64>>,
    ) -> Result<Self> {
        if baseline <= 0.0 {
            return Err(Error::ZeroBaseline);
        }
        let (kind, contrast) = if (extremum - baseline).abs() <= flat_tol {
            (ScanKind::Flat, 0.0)
        } else if extremum < baseline {
            (ScanKind::Dip, (baseline - extremum) / baseline)
        } else {
            (ScanKind::Peak, (extremum - baseline) / baseline)
        };
        let classical_bound = match kind {
            ScanKind::Dip => 0.5,
            ScanKind::Peak => peak_bound,
            ScanKind::Flat => 0.0,
        };
        Ok(Self {
            delays_fs,
            values,
            unit,
            baseline,
            extremum,
            kind,
            contrast,
            classical_bound,
            value_sigma,
        })
    }

    /// CSV payload: `delay_fs` column plus the value series (and Poisson
    /// sigmas when present).
    pub fn to_csv(&self) -> String {
        let value_header = match self.unit {
            ScanUnit::Probability => "coincidence_prob",
            ScanUnit::Counts => "coincidences",
            ScanUnit::IntensityProduct => "intensity_product",
        };
        let mut out = String::new();
        match &self.value_sigma {
            Some(sigma) => {
                out.push_str(&format!("delay_fs,{value_header},poisson_sigma\n"));
                for ((d, v), s) in self.delays_fs.iter().zip(&self.values).zip(sigma) {
                    out.push_str(&format!("{d},{v},{s}\n"));
                }
            }
            None => {
                out.push_str(&format!("delay_fs,{value_header}\n"));
                for (d, v) in self.delays_fs.iter().zip(&self.values) {
                    out.push_str(&format!("{d},{v}\n"));
                }
            }
        }
        out
    }
}

/// Contrast summary with the quantum-regime verdict.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ContrastAssessment {
    pub kind: ScanKind,
    pub contrast: f64,
    /// True when the contrast exceeds what classical fields could produce on
    /// the same splitter.
    pub quantum_flag: bool,
}

/// Extracts kind, contrast, and the quantum flag from a finished scan.
pub fn assess_contrast(scan: &ScanResult) -> ContrastAssessment {
    let quantum_flag = match scan.kind {
        ScanKind::Dip | ScanKind::Peak => scan.contrast > scan.classical_bound,
        ScanKind::Flat => false,
    };
    ContrastAssessment {
        kind: scan.kind,
        contrast: scan.contrast,
        quantum_flag,
    }
}

/// Classical-field visibility limit `|2·Re(t²·conj(r)²)| / (|r|² + |t|²)²`
/// for the given splitter (the exact phase average of the Monte Carlo
/// benchmark).
pub fn classical_visibility_bound(spec: &BeamsplitterSpec) -> Result<f64> {
    spec.ensure_valid()?;
    let denom = (spec.r.norm_sqr() + spec.t.norm_sqr()).powi(2);
    if denom == 0.0 {
        return Err(Error::ZeroBaseline);
    }
    Ok(spec.interference_term().abs() / denom)
}

/// Analytic coincidence scan over a delay grid.
///
/// `max_overlap ∈ [0, 1]` scales the wavepacket overlap uniformly:
/// `I_eff(τ) = max_overlap · I(τ)`.
pub fn hom_scan(
    spec: &BeamsplitterSpec,
    template: &WavepacketSpec,
    delays_fs: &[f64],
    max_overlap: f64,
) -> Result<ScanResult> {
    spec.ensure_valid()?;
    if !max_overlap.is_finite() || !(0.0..=1.0).contains(&max_overlap) {
        return Err(Error::OverlapOutOfRange(max_overlap));
    }
    let baseline = spec.classical_coincidence()?;
    if baseline <= 0.0 {
        return Err(Error::ZeroBaseline);
    }
    let overlaps = scan_overlaps(template, delays_fs)?;
    let values: Result<Vec<f64>> = overlaps
        .iter()
        .map(|o| spec.coincidence_with_overlap(max_overlap * o.value))
        .collect();
    let extremum = spec.coincidence_with_overlap(max_overlap)?;
    ScanResult::classified(
        delays_fs.to_vec(),
        values?,
        ScanUnit::Probability,
        baseline,
        extremum,
        TOL_ALGEBRAIC,
        classical_visibility_bound(spec)?,
        None,
    )
}

/// Solves for the single `max_overlap` scalar that reproduces a target
/// contrast on the given splitter.
pub fn fit_max_overlap(spec: &BeamsplitterSpec, target_contrast: f64) -> Result<f64> {
    spec.ensure_valid()?;
    if !target_contrast.is_finite() || target_contrast < 0.0 {
        return Err(Error::Config(format!(
            "target contrast {target_contrast} must be non-negative"
        )));
    }
    let baseline = spec.classical_coincidence()?;
    if baseline <= 0.0 {
        return Err(Error::ZeroBaseline);
    }
    let strength = spec.interference_term().abs();
    if strength <= TOL_ALGEBRAIC {
        return Err(Error::Config(
            "splitter has no interference term (2φ_rt = ±90°); contrast cannot be fitted".into(),
        ));
    }
    let fitted = target_contrast * baseline / strength;
    if fitted > 1.0 + 1e-9 {
        return Err(Error::Config(format!(
            "target contrast {target_contrast} unreachable; maximum is {:.4}",
            strength / baseline
        )));
    }
    Ok(fitted.min(1.0))
}

/// Mach-Zehnder fringe traces from equal-amplitude coherent fields on both
/// inputs with swept relative phase θ.
#[derive(Debug, Clone, Serialize)]
pub struct FringeTraces {
    pub phases: Vec<f64>,
    pub intensity_a: Vec<f64>,
    pub intensity_b: Vec<f64>,
    /// Phase offset between the two sinusoids, wrapped to `(−π, π]`;
    /// equals `2(φ_t − φ_r)`.
    pub phase_difference: f64,
    /// Fringe visibility `2|r||t| / (|r|² + |t|²)`, identical on both
    /// outputs.
    pub visibility: f64,
}

impl FringeTraces {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("phase_rad,intensity_a,intensity_b\n");
        for ((p, a), b) in self.phases.iter().zip(&self.intensity_a).zip(&self.intensity_b) {
            out.push_str(&format!("{p},{a},{b}\n"));
        }
        out
    }
}

/// Computes both output intensities over the phase grid and extracts their
/// relative phase by least-squares sinusoid fits at the known period.
pub fn mz_fringes(spec: &BeamsplitterSpec, phases: &[f64]) -> Result<FringeTraces> {
    spec.ensure_valid()?;
    if spec.r.norm() == 0.0 || spec.t.norm() == 0.0 {
        return Err(Error::NoFringes);
    }
    if phases.len() < 3 {
        return Err(Error::Config("need at least 3 phase samples".into()));
    }
    let mut intensity_a = Vec::with_capacity(phases.len());
    let mut intensity_b = Vec::with_capacity(phases.len());
    for &theta in phases {
        let field = num_complex::Complex64::from_polar(1.0, theta);
        intensity_a.push((spec.t * field + spec.r).norm_sqr());
        intensity_b.push((spec.r * field + spec.t).norm_sqr());
    }
    let (offset_a, amp_a, psi_a) = fit_sinusoid(phases, &intensity_a)?;
    let (_, _, psi_b) = fit_sinusoid(phases, &intensity_b)?;
    Ok(FringeTraces {
        phases: phases.to_vec(),
        intensity_a,
        intensity_b,
        phase_difference: wrap_angle(psi_a - psi_b),
        visibility: amp_a / offset_a,
    })
}

/// Least-squares fit of `y = offset + amplitude·cos(θ + phase)` at known
/// period. Returns `(offset, amplitude, phase)`.
pub fn fit_sinusoid(phases: &[f64], values: &[f64]) -> Result<(f64, f64, f64)> {
    if phases.len() != values.len() || phases.len() < 3 {
        return Err(Error::Config(
            "sinusoid fit needs >= 3 samples with matching lengths".into(),
        ));
    }
    // Normal equations for the basis (1, cosθ, sinθ).
    let mut a = [[0.0f64; 3]; 3];
    let mut b = [0.0f64; 3];
    for (&theta, &y) in phases.iter().zip(values) {
        let row = [1.0, theta.cos(), theta.sin()];
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] += row[i] * row[j];
            }
            b[i] += row[i] * y;
        }
    }
    let c = solve3(a, b).ok_or_else(|| {
        Error::Config("degenerate phase grid: sinusoid fit is singular".into())
    })?;
    Ok((c[0], c[1].hypot(c[2]), (-c[2]).atan2(c[1])))
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..3 {
            let factor = a[row][col] / a[col][col];
            let (upper, lower) = a.split_at_mut(row);
            for (k, entry) in lower[0].iter_mut().enumerate().skip(col) {
                *entry -= factor * upper[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = [0.0f64; 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for k in (row + 1)..3 {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Monte Carlo benchmark: two classical fields with uniformly random
/// relative phase and delay-dependent mutual coherence
/// `g(τ) = √(max_coherence · I(τ))`.
///
/// Per delay the coincidence proxy `⟨I_a·I_b⟩` is averaged over
/// `n_phase_samples` phase draws; the baseline is the exact incoherent limit
/// `(|r|² + |t|²)²`. For a lossless balanced splitter the dip visibility
/// converges to 0.5. Deterministic for a fixed seed.
pub fn classical_field_hom(
    spec: &BeamsplitterSpec,
    template: &WavepacketSpec,
    delays_fs: &[f64],
    max_coherence: f64,
    n_phase_samples: usize,
    seed: u64,
) -> Result<ScanResult> {
    spec.ensure_valid()?;
    if !max_coherence.is_finite() || !(0.0..=1.0).contains(&max_coherence) {
        return Err(Error::OverlapOutOfRange(max_coherence));
    }
    if n_phase_samples < 1000 {
        return Err(Error::Config(
            "classical benchmark needs at least 1000 phase samples".into(),
        ));
    }
    let baseline = (spec.r.norm_sqr() + spec.t.norm_sqr()).powi(2);
    if baseline <= 0.0 {
        return Err(Error::ZeroBaseline);
    }
    let overlaps = scan_overlaps(template, delays_fs)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample_point = |coherence_sq: f64, rng: &mut ChaCha8Rng| -> (f64, f64) {
        let g = coherence_sq.max(0.0).sqrt();
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for _ in 0..n_phase_samples {
            let phi = rng.gen_range(0.0..TAU);
            let field = num_complex::Complex64::from_polar(g, phi);
            let ia = (spec.t + spec.r * field).norm_sqr()
                + (1.0 - g * g) * spec.r.norm_sqr();
            let ib = (spec.r + spec.t * field).norm_sqr()
                + (1.0 - g * g) * spec.t.norm_sqr();
            let product = ia * ib;
            sum += product;
            sum_sq += product * product;
        }
        let mean = sum / n_phase_samples as f64;
        let var = (sum_sq / n_phase_samples as f64 - mean * mean).max(0.0);
        (mean, (var / n_phase_samples as f64).sqrt())
    };
    let values: Vec<f64> = overlaps
        .iter()
        .map(|o| sample_point(max_coherence * o.value, &mut rng).0)
        .collect();
    let (extremum, extremum_sigma) = sample_point(max_coherence, &mut rng);
    // Floor the flat threshold so summation rounding in a noiseless
    // (fully incoherent) run cannot masquerade as a feature.
    let flat_tol = (3.0 * extremum_sigma).max(1e-9 * baseline);
    ScanResult::classified(
        delays_fs.to_vec(),
        values,
        ScanUnit::IntensityProduct,
        baseline,
        extremum,
        flat_tol,
        classical_visibility_bound(spec)?,
        None,
    )
}
