//! Physicality checks and loss accounting for splitter amplitudes.
//!
//! Run with: cargo run --example validate_splitter

use homsim::presets::{self, PhaseVariant};
use homsim::BeamsplitterSpec;
use num_complex::Complex64;

fn main() {
    println!("Preset splitters:");
    for preset in presets::all() {
        for variant in [PhaseVariant::Design, PhaseVariant::Measured] {
            let spec = preset.spec(variant);
            let report = spec.validate().unwrap();
            let phases = spec.phases();
            println!(
                "  {:>9} {:>8}: {} | loss {:.4} | 2phi_rt {:>6.1} deg",
                preset.name,
                format!("{variant:?}").to_lowercase(),
                report,
                report.loss_fraction,
                phases.two_phi_rt.to_degrees(),
            );
        }
    }

    println!("\nHand-built splitters:");
    let lossless = BeamsplitterSpec::new(
        Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2),
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
    );
    let lossy = BeamsplitterSpec::new(Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0));
    let broken = BeamsplitterSpec::new(Complex64::new(0.8, 0.0), Complex64::new(0.8, 0.0));
    for (label, spec) in [
        ("lossless 50:50 (r = it)", &lossless),
        ("half/half (r = t = 1/2)", &lossy),
        ("overunity (r = t = 0.8)", &broken),
    ] {
        let report = spec.validate().unwrap();
        println!(
            "  {label}: {report} | singular values |t+r| = {:.4}, |t-r| = {:.4}",
            report.singular_values.0, report.singular_values.1
        );
    }
}
