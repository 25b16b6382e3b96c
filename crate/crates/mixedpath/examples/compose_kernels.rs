//! Kernel composition: multiplying propagators over consecutive intervals.
//! Two half-time free kernels composed on a grid reproduce the full-time
//! closed form; three-kernel composition is associative.
//!
//! ```bash
//! cargo run --release --example compose_kernels
//! ```

use mixedpath::amplitude::{compose_propagators, PropagatorGrid};
use mixedpath::reference::{free_particle_propagator, GridSpec};
use ndarray::Array2;

fn analytic_grid(grid: &GridSpec, t: f64) -> PropagatorGrid {
    let n = grid.num_points;
    let values = Array2::from_shape_fn((n, n), |(i, j)| {
        free_particle_propagator(1.0, t, grid.point(i), grid.point(j), 1.0).unwrap()
    });
    PropagatorGrid {
        grid: grid.clone(),
        time_span: t,
        values,
    }
}

fn main() -> mixedpath::Result<()> {
    let grid = GridSpec::symmetric(20.0, 0.04)?;
    println!(
        "grid: [-20, 20] at spacing {}, {} points",
        grid.spacing(),
        grid.num_points
    );

    let half = analytic_grid(&grid, 0.5);
    let full = compose_propagators(&half, &half, grid.spacing())?;
    println!("\ncompose K(T=0.5) with itself and compare against K(T=1):");
    for &(xa, xb) in &[(0.0, 0.0), (1.0, 0.0), (2.0, -1.0)] {
        let got = full.at(xa, xb)?.value;
        let want = free_particle_propagator(1.0, 1.0, xa, xb, 1.0)?;
        println!(
            "  ({xa:+.1}, {xb:+.1}): composed |K| = {:.6}, analytic |K| = {:.6}, rel err {:.2e}",
            got.norm(),
            want.norm(),
            (got.norm() - want.norm()).abs() / want.norm()
        );
    }

    let small = GridSpec::symmetric(5.0, 0.1)?;
    let k1 = analytic_grid(&small, 0.2);
    let k2 = analytic_grid(&small, 0.3);
    let k3 = analytic_grid(&small, 0.5);
    let m = small.spacing();
    let left = compose_propagators(&compose_propagators(&k1, &k2, m)?, &k3, m)?;
    let right = compose_propagators(&k1, &compose_propagators(&k2, &k3, m)?, m)?;
    let defect = left
        .values
        .iter()
        .zip(right.values.iter())
        .map(|(a, b)| (a - b).norm() / a.norm().max(1e-12))
        .fold(0.0f64, f64::max);
    println!("\nthree-kernel associativity defect: {defect:.2e}");
    Ok(())
}
