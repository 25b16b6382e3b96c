//! Rotate an optimal pair into the basis where every component satisfies
//! `alpha_j^2 + beta_j^2 = |a|^2`, read off the complex amplitudes
//! `phi_j = alpha_j + i beta_j`, and sum them into K.
//!
//! ```bash
//! cargo run --example balanced_amplitudes
//! ```

use mixedpath::action::{build_action_matrix, HamiltonianModel};
use mixedpath::amplitude::{balance_rotation, build_amplitudes, probability, sum_propagator};
use mixedpath::game::{solve_equal_component, solve_stationary, NormMode};
use mixedpath::lattice::{enumerate_paths, LatticeSpec};

fn main() -> mixedpath::Result<()> {
    // four steps between pinned endpoints: 19 paths
    let spec = LatticeSpec::new(4, 0.5, 0.5, 3, 1.0, 0, Some(0))?;
    let model = HamiltonianModel::harmonic(1.0, 0.7, 1.0)?;
    let set = enumerate_paths(&spec)?;
    let matrix = build_action_matrix(&set, &model)?;
    println!("{} paths -> {0}x{0} action matrix", set.len());

    let init = solve_equal_component(&matrix, NormMode::NormForm);
    let solution = solve_stationary(&matrix, &init, 1e-10, 20_000)?;
    println!(
        "stationary pair: residual {:.3e} after {} iterations",
        solution.residual, solution.iterations
    );

    let balanced = balance_rotation(&solution.pair)?;
    println!(
        "balancing rotation: |a| = {:.6}, diagonal spread {:.3e}, orthogonality defect {:.3e}",
        balanced.magnitude,
        balanced.diagonal_spread(),
        balanced.orthogonality_defect()
    );

    let amps = build_amplitudes(&balanced);
    println!("\nfirst five amplitudes (|phi| is constant across paths):");
    for (j, (phi, theta)) in amps.phis.iter().zip(&amps.phases).take(5).enumerate() {
        println!(
            "  phi_{j} = {:+.6} {:+.6}i  |phi| = {:.6}  theta = {:.6}",
            phi.re,
            phi.im,
            phi.norm(),
            theta
        );
    }

    let k = sum_propagator(&amps, None)?;
    println!(
        "\nK = sum phi_j = {:+.6} {:+.6}i, K K* = {:.6}",
        k.value.re,
        k.value.im,
        probability(&k)
    );
    Ok(())
}
