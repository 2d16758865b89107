//! Gaussian spectral wavepackets and the delay-dependent overlap integral.
//!
//! Packets are modeled with a Gaussian spectral amplitude whose *intensity*
//! spectrum has the stated FWHM. The convention matters for where the
//! `e⁻¹` point of the overlap lands and is fixed here once:
//!
//! ```text
//!     |f(ω)|² ∝ exp(−4 ln2 · (ω − ω₀)² / Δω²)          Δω = intensity FWHM
//!     I(τ)    = exp(−Δω² τ² / (8 ln2))                  identical packets
//!     τ_c     = √(8 ln2) / Δω                           so I(τ_c) = e⁻¹
//! ```
//!
//! A relative time delay enters the spectral amplitude as the phase factor
//! `e^{iωτ}`, so the general overlap `I = |∫ f₁*(ω) f₂(ω) dω|²` (with unit
//! normalization of each packet) has the closed form implemented in
//! [`overlap`] and is checked against direct numerical quadrature in the
//! tests and the acceptance suite.
//!
//! Delays are expressed in femtoseconds throughout the public API, matching
//! the serialized form `{"lambda0_nm", "fwhm_nm", "delay_fs"}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

const LN2_8: f64 = 8.0 * std::f64::consts::LN_2;

/// Gaussian spectral packet: center wavelength, intensity-FWHM bandwidth,
/// and a signed arrival delay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavepacketSpec {
    /// Center wavelength, nm.
    #[serde(rename = "lambda0_nm")]
    pub center_wavelength_nm: f64,
    /// Intensity-spectrum FWHM, nm.
    pub fwhm_nm: f64,
    /// Arrival delay, fs (signed).
    pub delay_fs: f64,
}

impl Default for WavepacketSpec {
    /// 806 nm center, 1 nm filter bandwidth, zero delay.
    fn default() -> Self {
        Self {
            center_wavelength_nm: 806.0,
            fwhm_nm: 1.0,
            delay_fs: 0.0,
        }
    }
}

impl WavepacketSpec {
    pub fn new(center_wavelength_nm: f64, fwhm_nm: f64, delay_fs: f64) -> Self {
        Self {
            center_wavelength_nm,
            fwhm_nm,
            delay_fs,
        }
    }

    pub fn delayed(mut self, delay_fs: f64) -> Self {
        self.delay_fs = delay_fs;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.center_wavelength_nm.is_finite()
            || !self.fwhm_nm.is_finite()
            || !self.delay_fs.is_finite()
        {
            return Err(Error::NonFinite("wavepacket parameters"));
        }
        if self.center_wavelength_nm <= 0.0 || self.fwhm_nm <= 0.0 {
            return Err(Error::Config(
                "wavelength and bandwidth must be positive".into(),
            ));
        }
        // The Gaussian-in-ω model assumes a narrowband packet.
        if self.fwhm_nm > self.center_wavelength_nm / 10.0 {
            return Err(Error::Config(format!(
                "bandwidth {} nm too wide for the narrowband model at {} nm",
                self.fwhm_nm, self.center_wavelength_nm
            )));
        }
        Ok(())
    }

    /// Center angular frequency ω₀ = 2πc/λ₀, rad/s.
    pub fn center_omega(&self) -> f64 {
        std::f64::consts::TAU * SPEED_OF_LIGHT / (self.center_wavelength_nm * 1e-9)
    }

    /// Angular-frequency intensity FWHM, Δω = 2πcΔλ/λ₀², rad/s.
    pub fn fwhm_omega(&self) -> f64 {
        std::f64::consts::TAU * SPEED_OF_LIGHT * (self.fwhm_nm * 1e-9)
            / (self.center_wavelength_nm * 1e-9).powi(2)
    }

    /// Standard deviation of the intensity spectrum, rad/s.
    pub fn sigma_omega(&self) -> f64 {
        self.fwhm_omega() / LN2_8.sqrt()
    }

    pub fn delay_s(&self) -> f64 {
        self.delay_fs * 1e-15
    }

    /// Coherence time τ_c = √(8 ln2)/Δω, seconds: the delay at which the
    /// overlap of two identical packets drops to e⁻¹.
    pub fn coherence_time_s(&self) -> f64 {
        LN2_8.sqrt() / self.fwhm_omega()
    }

    pub fn coherence_time_fs(&self) -> f64 {
        self.coherence_time_s() * 1e15
    }
}

/// Overlap integral value plus the coherence time governing its τ-decay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlapResult {
    /// `I = |∫ f₁* f₂ dω|²` in `[0, 1]`.
    pub value: f64,
    /// Delay at which the τ-dependent factor reaches e⁻¹, seconds.
    pub coherence_time_s: f64,
}

/// Closed-form overlap of two Gaussian packets.
///
/// With intensity-spectrum standard deviations `s₁, s₂`, center offset
/// `Δ = ω₂ − ω₁` and relative delay `τ`:
///
/// ```text
///     I = 2 s₁ s₂ / (s₁² + s₂²)
///         · exp(−Δ² / (2(s₁² + s₂²)))
///         · exp(−2 s₁² s₂² τ² / (s₁² + s₂²))
/// ```
pub fn overlap(wp1: &WavepacketSpec, wp2: &WavepacketSpec) -> Result<OverlapResult> {
    wp1.validate()?;
    wp2.validate()?;
    let s1 = wp1.sigma_omega();
    let s2 = wp2.sigma_omega();
    let ss = s1 * s1 + s2 * s2;
    let delta = wp2.center_omega() - wp1.center_omega();
    let tau = wp2.delay_s() - wp1.delay_s();
    let prefactor = 2.0 * s1 * s2 / ss;
    let center_term = (-delta * delta / (2.0 * ss)).exp();
    let delay_term = (-2.0 * s1 * s1 * s2 * s2 * tau * tau / ss).exp();
    let value = (prefactor * center_term * delay_term).clamp(0.0, 1.0);
    Ok(OverlapResult {
        value,
        coherence_time_s: (ss / (2.0 * s1 * s1 * s2 * s2)).sqrt(),
    })
}

/// Overlap of `template` against a copy of itself delayed by each entry of
/// `delays_fs` (relative to the template's own delay).
pub fn scan_overlaps(template: &WavepacketSpec, delays_fs: &[f64]) -> Result<Vec<OverlapResult>> {
    if delays_fs.iter().any(|d| !d.is_finite()) {
        return Err(Error::NonFinite("delay grid"));
    }
    delays_fs
        .iter()
        .map(|&d| overlap(template, &template.delayed(template.delay_fs + d)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    /// Numerical quadrature of `|∫ f₁* f₂ dω|² / (∫|f₁|² ∫|f₂|²)` with
    /// explicit Gaussian spectral amplitudes, independent of the closed
    /// form under test.
    fn overlap_quadrature(wp1: &WavepacketSpec, wp2: &WavepacketSpec) -> f64 {
        let (w1, w2) = (wp1.center_omega(), wp2.center_omega());
        // Amplitude std is √2 × intensity std.
        let (a1, a2) = (
            wp1.sigma_omega() * std::f64::consts::SQRT_2,
            wp2.sigma_omega() * std::f64::consts::SQRT_2,
        );
        let lo = (w1 - 12.0 * a1).min(w2 - 12.0 * a2);
        let hi = (w1 + 12.0 * a1).max(w2 + 12.0 * a2);
        let n = 40_001;
        let h = (hi - lo) / (n - 1) as f64;
        let tau = wp2.delay_s() - wp1.delay_s();
        let mut cross = num_complex::Complex64::new(0.0, 0.0);
        let (mut norm1, mut norm2) = (0.0, 0.0);
        for k in 0..n {
            let w = lo + k as f64 * h;
            // Simpson weights 1,4,2,...,2,4,1.
            let weight = if k == 0 || k == n - 1 {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            // f(ω) ∝ exp(−(ω−ω₀)²/(4s²)) so that |f|² has std s.
            let f1 = (-((w - w1) / (2.0 * wp1.sigma_omega())).powi(2)).exp();
            let f2 = (-((w - w2) / (2.0 * wp2.sigma_omega())).powi(2)).exp();
            let phase = num_complex::Complex64::from_polar(1.0, w * tau);
            cross += f1 * f2 * phase * weight;
            norm1 += f1 * f1 * weight;
            norm2 += f2 * f2 * weight;
        }
        cross.norm_sqr() / (norm1 * norm2)
    }

    #[test]
    fn coherence_time_for_default_filter() {
        // 806 nm center, 1 nm FWHM: Δω = 2πcΔλ/λ₀², τ_c = √(8 ln2)/Δω.
        let tau_c = WavepacketSpec::default().coherence_time_s();
        let domega = std::f64::consts::TAU * 299_792_458.0 * 1e-9 / (806e-9 * 806e-9);
        assert_relative_eq!(tau_c, (8.0 * std::f64::consts::LN_2).sqrt() / domega, epsilon = 1e-15);
        // ≈ 0.81 ps.
        assert_abs_diff_eq!(tau_c * 1e12, 0.812, epsilon = 0.001);
    }

    #[test]
    fn coherence_time_scaling() {
        let base = WavepacketSpec::default();
        let doubled = WavepacketSpec::new(806.0, 2.0, 0.0);
        assert_relative_eq!(
            doubled.coherence_time_s(),
            base.coherence_time_s() / 2.0,
            epsilon = 1e-12
        );
        // Monochromatic limit: τ_c → ∞ as Δλ → 0.
        let narrow = WavepacketSpec::new(806.0, 1e-9, 0.0);
        assert!(narrow.coherence_time_s() > 1e6 * base.coherence_time_s());
    }

    #[test]
    fn identical_packets_at_zero_delay() {
        let wp = WavepacketSpec::default();
        let result = overlap(&wp, &wp).unwrap();
        assert_abs_diff_eq!(result.value, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn overlap_vanishes_at_large_delay() {
        let wp = WavepacketSpec::default();
        let far = wp.delayed(50.0 * wp.coherence_time_fs());
        assert!(overlap(&wp, &far).unwrap().value < 1e-300);
    }

    #[test]
    fn overlap_at_coherence_time_is_inverse_e() {
        let wp = WavepacketSpec::default();
        let shifted = wp.delayed(wp.coherence_time_fs());
        let result = overlap(&wp, &shifted).unwrap();
        assert_abs_diff_eq!(result.value, (-1.0f64).exp(), epsilon = 1e-6);
        assert_abs_diff_eq!(result.value, overlap_quadrature(&wp, &shifted), epsilon = 1e-6);
    }

    #[test]
    fn closed_form_matches_quadrature_identical_packets() {
        let wp = WavepacketSpec::default();
        let tau_c = wp.coherence_time_fs();
        for k in -10..=10 {
            let delayed = wp.delayed(0.5 * k as f64 * tau_c);
            let closed = overlap(&wp, &delayed).unwrap().value;
            let quad = overlap_quadrature(&wp, &delayed);
            assert_abs_diff_eq!(closed, quad, epsilon = 1e-6);
        }
    }

    #[test]
    fn closed_form_matches_quadrature_mismatched_packets() {
        // Different centers and widths.
        let wp1 = WavepacketSpec::new(806.0, 1.0, 0.0);
        let wp2 = WavepacketSpec::new(806.3, 1.7, 320.0);
        let closed = overlap(&wp1, &wp2).unwrap().value;
        let quad = overlap_quadrature(&wp1, &wp2);
        assert_abs_diff_eq!(closed, quad, epsilon = 1e-6);
        assert!(closed < 1.0);
    }

    #[test]
    fn scan_is_palindromic_on_symmetric_grid() {
        let wp = WavepacketSpec::default();
        let grid: Vec<f64> = (-8..=8).map(|k| 150.0 * k as f64).collect();
        let values = scan_overlaps(&wp, &grid).unwrap();
        assert_abs_diff_eq!(values[8].value, 1.0, epsilon = 1e-15);
        for k in 0..values.len() {
            assert_eq!(values[k].value, values[values.len() - 1 - k].value);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(WavepacketSpec::new(-806.0, 1.0, 0.0).validate().is_err());
        assert!(WavepacketSpec::new(806.0, 0.0, 0.0).validate().is_err());
        assert!(WavepacketSpec::new(806.0, 200.0, 0.0).validate().is_err());
        assert!(WavepacketSpec::new(806.0, f64::NAN, 0.0).validate().is_err());
        assert!(scan_overlaps(&WavepacketSpec::default(), &[f64::INFINITY]).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn overlap_in_unit_interval_and_even(
                fwhm in 0.1..5.0f64,
                tau in -5000.0..5000.0f64,
            ) {
                let wp = WavepacketSpec::new(806.0, fwhm, 0.0);
                let plus = overlap(&wp, &wp.delayed(tau)).unwrap().value;
                let minus = overlap(&wp, &wp.delayed(-tau)).unwrap().value;
                prop_assert!((0.0..=1.0).contains(&plus));
                prop_assert_eq!(plus, minus);
            }

            #[test]
            fn overlap_non_increasing_in_abs_delay(
                fwhm in 0.1..5.0f64,
                tau in 0.0..4000.0f64,
                extra in 0.0..4000.0f64,
            ) {
                let wp = WavepacketSpec::new(806.0, fwhm, 0.0);
                let near = overlap(&wp, &wp.delayed(tau)).unwrap().value;
                let far = overlap(&wp, &wp.delayed(tau + extra)).unwrap().value;
                prop_assert!(far <= near + 1e-15);
            }

            #[test]
            fn closed_form_tracks_quadrature(
                fwhm in 0.3..3.0f64,
                tau_frac in -5.0..5.0f64,
            ) {
                let wp = WavepacketSpec::new(806.0, fwhm, 0.0);
                let tau = tau_frac * wp.coherence_time_fs();
                let delayed = wp.delayed(tau);
                let closed = overlap(&wp, &delayed).unwrap().value;
                let quad = overlap_quadrature(&wp, &delayed);
                prop_assert!((closed - quad).abs() < crate::tol::TOL_OVERLAP);
            }
        }
    }
}
