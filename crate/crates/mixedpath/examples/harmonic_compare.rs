//! The same pipeline against the harmonic-oscillator closed form at
//! omega T = 1 over 64 slices.
//!
//! ```bash
//! cargo run --release --example harmonic_compare
//! ```

use mixedpath::action::HamiltonianModel;
use mixedpath::pipeline::{compare, harmonic_reproduction_spec};

fn main() -> mixedpath::Result<()> {
    let model = HamiltonianModel::harmonic(1.0, 1.0, 1.0)?;
    let spec = harmonic_reproduction_spec();
    println!(
        "omega T = {}, {} slices, window [-{}, {}], spacing {}",
        model.omega * spec.total_time,
        spec.slices,
        spec.half_width,
        spec.half_width,
        spec.spacing
    );

    for x in [0.0, 0.5] {
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
