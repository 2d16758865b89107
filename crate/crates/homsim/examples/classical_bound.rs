//! The 50% classical-field benchmark that quantum contrasts must beat.
//!
//! Two mutually coherent classical fields with a uniformly random relative
//! phase produce a coincidence-proxy dip (or peak) of bounded visibility;
//! Monte Carlo phase averaging converges to the analytic bound.
//!
//! Run with: cargo run --example classical_bound

use homsim::interference::{classical_field_hom, classical_visibility_bound};
use homsim::presets::{PhaseVariant, SAMPLE_I, SAMPLE_II};
use homsim::{BeamsplitterSpec, WavepacketSpec};
use num_complex::Complex64;

fn main() {
    let lossless = BeamsplitterSpec::new(
        Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2),
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
    )
    .with_label("lossless 50:50");

    let template = WavepacketSpec::default();
    let delays = [0.0, 20_000.0];
    for (spec, samples, seed) in [
        (&lossless, 100_000, 42),
        (&SAMPLE_I.spec(PhaseVariant::Measured), 200_000, 43),
        (&SAMPLE_II.spec(PhaseVariant::Measured), 200_000, 44),
    ] {
        let scan = classical_field_hom(spec, &template, &delays, 1.0, samples, seed).unwrap();
        let bound = classical_visibility_bound(spec).unwrap();
        println!("{spec}");
        println!(
            "  {:?} visibility {:.4} from {samples} phase samples (analytic bound {bound:.4})",
            scan.kind, scan.contrast
        );
    }
    println!("\nQuantum scans exceed these: 61% dip > 50%, 72% peak > 49.2%.");
}
