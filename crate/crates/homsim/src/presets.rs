//! Characterized splitter presets.
//!
//! Two groove-pair splitter samples, each with a design-target phase and the
//! phase measured on the fabricated device. Magnitudes come from the design
//! simulations; overall phase is gauged so that `φ_r = 0`.

use serde::Serialize;

use crate::beamsplitter::BeamsplitterSpec;

/// Which `2φ_rt` value a preset resolves to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseVariant {
    /// Design-target phase.
    Design,
    /// Phase measured on the fabricated device.
    Measured,
}

/// A named splitter with both phase variants.
#[derive(Debug, Clone, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub r_abs: f64,
    pub t_abs: f64,
    pub two_phi_rt_design_deg: f64,
    pub two_phi_rt_measured_deg: f64,
    pub note: &'static str,
}

impl Preset {
    pub fn two_phi_rt_deg(&self, variant: PhaseVariant) -> f64 {
        match variant {
            PhaseVariant::Design => self.two_phi_rt_design_deg,
            PhaseVariant::Measured => self.two_phi_rt_measured_deg,
        }
    }

    /// Concrete amplitudes: `r = |r|`, `t = |t|·exp(i·2φ_rt/2)`.
    pub fn spec(&self, variant: PhaseVariant) -> BeamsplitterSpec {
        let phi_t = self.two_phi_rt_deg(variant).to_radians() / 2.0;
        BeamsplitterSpec::from_polar(self.r_abs, 0.0, self.t_abs, phi_t)
            .with_label(format!("{} ({:?})", self.name, variant))
    }
}

/// Balanced splitter in the coalescence (dip) regime: quadrature phase by
/// design.
pub const SAMPLE_I: Preset = Preset {
    name: "sample-I",
    r_abs: 0.42,
    t_abs: 0.42,
    two_phi_rt_design_deg: 180.0,
    two_phi_rt_measured_deg: 170.0,
    note: "balanced groove-pair splitter, dip regime; fringes near phase opposition",
};

/// Near-balanced splitter in the anti-coalescence (peak) regime: in-phase
/// r and t by design.
pub const SAMPLE_II: Preset = Preset {
    name: "sample-II",
    r_abs: 0.5,
    t_abs: 0.48,
    two_phi_rt_design_deg: 0.0,
    two_phi_rt_measured_deg: 10.0,
    note: "groove-pair splitter, peak regime; fringes near in-phase",
};

pub fn all() -> [&'static Preset; 2] {
    [&SAMPLE_I, &SAMPLE_II]
}

pub fn lookup(name: &str) -> Option<&'static Preset> {
    all().into_iter().find(|p| p.name.eq_ignore_ascii_case(name))
}
