//! The wavepacket overlap integral I(τ) that shapes every delay scan.
//!
//! Run with: cargo run --example overlap_scan

use homsim::wavepacket::{overlap, scan_overlaps, WavepacketSpec};

fn main() {
    let template = WavepacketSpec::default();
    let tau_c_fs = template.coherence_time_fs();
    println!(
        "packet: {} nm center, {} nm FWHM -> coherence time {:.3} ps",
        template.center_wavelength_nm,
        template.fwhm_nm,
        tau_c_fs / 1000.0
    );

    let at_tau_c = overlap(&template, &template.delayed(tau_c_fs)).unwrap().value;
    println!(
        "I(tau_c) = {at_tau_c:.9}  (1/e = {:.9})",
        (-1.0f64).exp()
    );

    println!("\n tau/tau_c     I(tau)");
    let delays: Vec<f64> = (0..=10).map(|k| 0.4 * k as f64 * tau_c_fs).collect();
    for (delay, result) in delays.iter().zip(scan_overlaps(&template, &delays).unwrap()) {
        println!("  {:>7.2}   {:.6}", delay / tau_c_fs, result.value);
    }

    // Packets with different centers overlap less even at zero delay.
    let detuned = WavepacketSpec::new(806.5, 1.0, 0.0);
    let mismatched = overlap(&template, &detuned).unwrap().value;
    println!("\ndetuned centers (806 vs 806.5 nm): I(0) = {mismatched:.4}");
}
