//! Action-linked phases: each path carries `theta_j = S_j / hbar`, and a
//! two-path propagator interferes as `|K|^2 = 2 a^2 (1 + cos(dtheta))`.
//!
//! ```bash
//! cargo run --example paper_phase_interference
//! ```

use mixedpath::action::HamiltonianModel;
use mixedpath::amplitude::{assign_paper_phases, probability, sum_propagator};

fn main() -> mixedpath::Result<()> {
    let model = HamiltonianModel::free(1.0, 1.0)?;
    let h = model.planck();
    println!("h = 2 pi hbar = {h:.6}");

    println!("\nlandmark actions (scale 1):");
    for (label, action) in [("0", 0.0), ("h/4", h / 4.0), ("h/2", h / 2.0), ("h", h)] {
        let amps = assign_paper_phases(&[action], &model, 1.0)?;
        let phi = amps.phis[0];
        println!(
            "  S = {label:>4}: theta = {:.4}, phi = {:+.4} {:+.4}i",
            amps.phases[0], phi.re, phi.im
        );
    }

    println!("\ntwo-path interference as the action difference sweeps one quantum:");
    let steps = 8;
    for k in 0..=steps {
        let delta_s = h * k as f64 / steps as f64;
        let amps = assign_paper_phases(&[0.0, delta_s], &model, 1.0)?;
        let k_sum = sum_propagator(&amps, None)?;
        let expected = 2.0 * (1.0 + (delta_s / model.hbar).cos());
        println!(
            "  dS = {:>5.3} h: |K|^2 = {:.6} (predicted {:.6})",
            k as f64 / steps as f64,
            probability(&k_sum),
            expected
        );
    }
    Ok(())
}
