//! Reproduce the free-particle propagator: the per-slice path amplitudes
//! composed over 16 slices against the closed form.
//!
//! ```bash
//! cargo run --release --example free_particle_compare
//! ```

use mixedpath::action::HamiltonianModel;
use mixedpath::pipeline::{compare, free_reproduction_spec};

fn main() -> mixedpath::Result<()> {
    let model = HamiltonianModel::free(1.0, 1.0)?;
    let spec = free_reproduction_spec();
    println!(
        "T = {}, {} slices, window [-{}, {}], spacing {}, damping {}",
        spec.total_time, spec.slices, spec.half_width, spec.half_width, spec.spacing, spec.damping
    );

    for x in [0.0, 0.5, 1.0] {
        let report = compare(&model, &spec, x, x)?;
        println!("\nK({x}, 0; {x}, {}):", spec.total_time);
        println!(
            "  {:<22} {:>12} {:>12} {:>10} {:>10}",
            "method", "re", "im", "modulus", "rel err"
        );
        for row in &report.rows {
            println!(
                "  {:<22} {:>12.6} {:>12.6} {:>10.6} {:>10.2e}",
                row.method, row.re, row.im, row.modulus, row.relative_error
            );
        }
    }
    Ok(())
}
