//! Analytic physics of a single lossy beamsplitter.
//!
//! The splitter is described by one complex reflection/transmission pair
//! `(r, t)` acting symmetrically on two input modes, with the transfer matrix
//!
//! ```text
//!     S = | t  r |      out_a = t·in1 + r·in2
//!         | r  t |      out_b = r·in1 + t·in2
//! ```
//!
//! Losses make `S` sub-unitary: its singular values are `|t + r|` and
//! `|t - r|`, and physicality requires both to be at most 1. The singular
//! vectors are the fixed symmetric/antisymmetric combinations, which is what
//! makes every formula here closed-form.
//!
//! Two-particle outcome probabilities for a pair entering one photon per
//! input port:
//!
//! * classical (distinguishable) coincidence `|t|⁴ + |r|⁴`,
//! * quantum (indistinguishable) coincidence `|t² + r²|²`,
//! * partial overlap `I ∈ [0, 1]` interpolates affinely between the two.
//!
//! The sign of the interference term `2·Re(t²·conj(r)²) = 2|t|²|r|²·cos 2φ_rt`
//! decides whether the coincidence feature at zero delay is a dip
//! (coalescence) or a peak (anti-coalescence).

use std::f64::consts::{PI, TAU};
use std::fmt;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::ModeTransform;
use crate::tol::TOL_ALGEBRAIC;

/// A singular value this close to 1 is treated as exactly lossless when
/// dilating, so the corresponding environment mode decouples cleanly.
const LOSSLESS_SV_TOL: f64 = 1e-13;

mod complex_pair {
    //! Serializes `Complex64` as a two-element `[re, im]` array.

    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [c.re, c.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// Complex reflection/transmission pair of a (possibly lossy) beamsplitter.
///
/// Serializes as `{"r": [re, im], "t": [re, im], "label": "..."}`. A polar
/// form with angles in degrees is accepted by [`BeamsplitterSpec::from_json`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamsplitterSpec {
    #[serde(with = "complex_pair")]
    pub r: Complex64,
    #[serde(with = "complex_pair")]
    pub t: Complex64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Polar-form JSON input: magnitudes plus phases in degrees.
#[derive(Debug, Clone, Deserialize)]
struct PolarSpec {
    r_abs: f64,
    phi_r_deg: f64,
    t_abs: f64,
    phi_t_deg: f64,
    #[serde(default)]
    label: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SpecInput {
    Cartesian(BeamsplitterSpec),
    Polar(PolarSpec),
}

impl BeamsplitterSpec {
    pub fn new(r: Complex64, t: Complex64) -> Self {
        Self { r, t, label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Builds a spec from magnitudes and phases in radians.
    pub fn from_polar(r_abs: f64, phi_r: f64, t_abs: f64, phi_t: f64) -> Self {
        Self::new(
            Complex64::from_polar(r_abs, phi_r),
            Complex64::from_polar(t_abs, phi_t),
        )
    }

    /// Parses either the cartesian `{"r": [re, im], ...}` or the polar
    /// `{"r_abs": ..., "phi_r_deg": ...}` JSON form.
    pub fn from_json(text: &str) -> Result<Self> {
        match serde_json::from_str::<SpecInput>(text)? {
            SpecInput::Cartesian(spec) => Ok(spec),
            SpecInput::Polar(p) => {
                let spec = Self::from_polar(
                    p.r_abs,
                    p.phi_r_deg.to_radians(),
                    p.t_abs,
                    p.phi_t_deg.to_radians(),
                );
                Ok(match p.label {
                    Some(l) => spec.with_label(l),
                    None => spec,
                })
            }
        }
    }

    /// Checks physicality: both singular values `|t ± r|` of the transfer
    /// matrix must be at most 1. The report also flags the lossless case
    /// `|r|² + |t|² = 1`.
    pub fn validate(&self) -> Result<ValidationReport> {
        if !(self.r.re.is_finite()
            && self.r.im.is_finite()
            && self.t.re.is_finite()
            && self.t.im.is_finite())
        {
            return Err(Error::NonFinite("beamsplitter amplitudes"));
        }
        let sv_plus = (self.t + self.r).norm();
        let sv_minus = (self.t - self.r).norm();
        let mut violations = Vec::new();
        if sv_plus > 1.0 + TOL_ALGEBRAIC {
            violations.push(Violation::SumExceedsUnity(sv_plus));
        }
        if sv_minus > 1.0 + TOL_ALGEBRAIC {
            violations.push(Violation::DiffExceedsUnity(sv_minus));
        }
        let transmitted = self.r.norm_sqr() + self.t.norm_sqr();
        Ok(ValidationReport {
            violations,
            lossless: (transmitted - 1.0).abs() <= TOL_ALGEBRAIC,
            loss_fraction: 1.0 - transmitted,
            singular_values: (sv_plus, sv_minus),
        })
    }

    /// Errors unless the spec is physical.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate()?;
        if report.ok() {
            Ok(())
        } else {
            Err(Error::Unphysical(report))
        }
    }

    /// Probability for a single particle to be absorbed or scattered,
    /// `1 − |r|² − |t|²`.
    pub fn loss_fraction(&self) -> Result<f64> {
        self.ensure_valid()?;
        Ok((1.0 - self.r.norm_sqr() - self.t.norm_sqr()).max(0.0))
    }

    /// Phases of `r` and `t` and the doubled phase difference `2(φ_t − φ_r)`.
    pub fn phases(&self) -> PhaseInfo {
        let phi_r = self.r.arg();
        let phi_t = self.t.arg();
        PhaseInfo {
            phi_r,
            phi_t,
            two_phi_rt: wrap_angle(2.0 * (phi_t - phi_r)),
        }
    }

    /// The quantum interference term `2·Re(t²·conj(r)²)`.
    ///
    /// Negative values produce a coincidence dip at zero delay, positive
    /// values a peak, zero a flat scan.
    pub fn interference_term(&self) -> f64 {
        let cross = self.t * self.t * (self.r * self.r).conj();
        2.0 * cross.re
    }

    /// Coincidence probability for two fully distinguishable particles,
    /// `|t|⁴ + |r|⁴`.
    pub fn classical_coincidence(&self) -> Result<f64> {
        self.ensure_valid()?;
        Ok(self.r.norm_sqr().powi(2) + self.t.norm_sqr().powi(2))
    }

    /// Coincidence probability for two fully indistinguishable particles,
    /// `|t² + r²|²`.
    pub fn quantum_coincidence(&self) -> Result<f64> {
        self.ensure_valid()?;
        Ok((self.t * self.t + self.r * self.r).norm_sqr())
    }

    /// Coincidence probability at wavepacket overlap `I`:
    /// `|t|⁴ + |r|⁴ + 2·Re(t²·conj(r)²)·I`.
    ///
    /// Affine in `I`, with the distinguishable value at `I = 0` and the
    /// indistinguishable value at `I = 1`.
    pub fn coincidence_with_overlap(&self, overlap: f64) -> Result<f64> {
        self.ensure_valid()?;
        check_overlap(overlap)?;
        Ok(self.classical_coincidence()? + self.interference_term() * overlap)
    }

    /// Full four-way outcome distribution for one pair at overlap `I`.
    ///
    /// Bunching probabilities interpolate with the same overlap:
    /// `p_both = |rt|²·(1 + I)`, matching independent propagation at `I = 0`
    /// and the two-boson amplitude rule at `I = 1`.
    pub fn two_particle_distribution(&self, overlap: f64) -> Result<OutcomeDistribution> {
        let p_coincidence = self.coincidence_with_overlap(overlap)?;
        let p_both = (self.r * self.t).norm_sqr() * (1.0 + overlap);
        let p_lost = 1.0 - p_coincidence - 2.0 * p_both;
        Ok(OutcomeDistribution {
            p_coincidence: clamp_probability(p_coincidence),
            p_both_a: clamp_probability(p_both),
            p_both_b: clamp_probability(p_both),
            p_at_least_one_lost: clamp_probability(p_lost),
        })
    }

    /// Embeds the lossy 2×2 transfer matrix into a 4×4 unitary by adjoining
    /// two environment modes (mode order: `a`, `b`, `env1`, `env2`).
    ///
    /// The transfer matrix is diagonal in the symmetric/antisymmetric mode
    /// basis with eigenvalues `d± = t ± r`, so each eigenmode is dilated
    /// independently against one environment mode:
    ///
    /// ```text
    ///     | d   s |            s = √(1 − |d|²)
    ///     | s  -d̄ |
    /// ```
    ///
    /// Eigenmodes with `|d| = 1` carry no loss; their environment mode
    /// decouples and is passed through unchanged, so fully lossless specs
    /// dilate to `S ⊕ I₂`.
    pub fn dilate(&self) -> Result<ModeTransform> {
        self.ensure_valid()?;
        let eig = [self.t + self.r, self.t - self.r];
        let mut coupling = [0.0; 2];
        let mut env = [Complex64::new(1.0, 0.0); 2];
        for k in 0..2 {
            let gap = 1.0 - eig[k].norm_sqr();
            if gap > LOSSLESS_SV_TOL {
                coupling[k] = gap.sqrt();
                env[k] = -eig[k].conj();
            }
        }
        // Conjugating diag(x1, x2) by the symmetric/antisymmetric basis
        // change gives [[m, p], [p, m]] with m = (x1+x2)/2, p = (x1-x2)/2.
        let half = |x1: Complex64, x2: Complex64| ((x1 + x2) / 2.0, (x1 - x2) / 2.0);
        let (cm, cp) = half(coupling[0].into(), coupling[1].into());
        let (em, ep) = half(env[0], env[1]);
        let z = Complex64::new(0.0, 0.0);
        let mut u = Array2::from_elem((4, 4), z);
        u[[0, 0]] = self.t;
        u[[0, 1]] = self.r;
        u[[1, 0]] = self.r;
        u[[1, 1]] = self.t;
        u[[0, 2]] = cm;
        u[[0, 3]] = cp;
        u[[1, 2]] = cp;
        u[[1, 3]] = cm;
        u[[2, 0]] = cm;
        u[[2, 1]] = cp;
        u[[3, 0]] = cp;
        u[[3, 1]] = cm;
        u[[2, 2]] = em;
        u[[2, 3]] = ep;
        u[[3, 2]] = ep;
        u[[3, 3]] = em;
        ModeTransform::new(u).map(|m| m.with_labels(["a", "b", "env1", "env2"]))
    }
}

impl fmt::Display for BeamsplitterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(label) = &self.label {
            write!(f, "{label}: ")?;
        }
        write!(
            f,
            "r = {:.4}∠{:.1}°, t = {:.4}∠{:.1}°",
            self.r.norm(),
            self.r.arg().to_degrees(),
            self.t.norm(),
            self.t.arg().to_degrees()
        )
    }
}

/// Outcome of [`BeamsplitterSpec::validate`].
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// True when `|r|² + |t|² = 1` (no loss channel).
    pub lossless: bool,
    /// `1 − |r|² − |t|²`; may be negative for unphysical specs.
    pub loss_fraction: f64,
    /// Singular values `(|t + r|, |t − r|)` of the transfer matrix.
    pub singular_values: (f64, f64),
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            write!(f, "ok")?;
            if self.lossless {
                write!(f, " (lossless)")?;
            }
            Ok(())
        } else {
            let list: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", list.join("; "))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub enum Violation {
    /// `|r + t| > 1`.
    SumExceedsUnity(f64),
    /// `|r − t| > 1`.
    DiffExceedsUnity(f64),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SumExceedsUnity(v) => write!(f, "|r + t| = {v:.6} exceeds 1"),
            Violation::DiffExceedsUnity(v) => write!(f, "|r - t| = {v:.6} exceeds 1"),
        }
    }
}

/// Probabilities of the four detectable outcomes for one incident pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    pub p_coincidence: f64,
    pub p_both_a: f64,
    pub p_both_b: f64,
    pub p_at_least_one_lost: f64,
}

impl OutcomeDistribution {
    pub fn entries(&self) -> [f64; 4] {
        [
            self.p_coincidence,
            self.p_both_a,
            self.p_both_b,
            self.p_at_least_one_lost,
        ]
    }

    pub fn sum(&self) -> f64 {
        self.entries().iter().sum()
    }
}

/// Phases of the reflection and transmission amplitudes.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhaseInfo {
    /// `arg r`, radians.
    pub phi_r: f64,
    /// `arg t`, radians.
    pub phi_t: f64,
    /// `2(φ_t − φ_r)` wrapped to `(−π, π]`.
    pub two_phi_rt: f64,
}

/// Wraps an angle to `(−π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let wrapped = theta.rem_euclid(TAU);
    if wrapped > PI {
        wrapped - TAU
    } else {
        wrapped
    }
}

fn check_overlap(overlap: f64) -> Result<()> {
    if !overlap.is_finite() || !(0.0..=1.0).contains(&overlap) {
        return Err(Error::OverlapOutOfRange(overlap));
    }
    Ok(())
}

fn clamp_probability(p: f64) -> f64 {
    debug_assert!(p > -TOL_ALGEBRAIC, "probability {p} below -1e-12");
    p.max(0.0)
}
