//! Extremize the generalized action `alpha^T S beta` three ways: the
//! closed-form equal-component pair, constrained first-order stationarity,
//! and the classical zero-sum minimax strategies.
//!
//! ```bash
//! cargo run --example mixed_path_game
//! ```

use mixedpath::action::{build_action_matrix, HamiltonianModel};
use mixedpath::game::{
    bordered_hessian_inertia, generalized_action, solve_equal_component, solve_minimax,
    solve_stationary, stationarity_residual, total_probability, NormMode,
};
use mixedpath::lattice::{enumerate_paths, LatticeSpec};

fn main() -> mixedpath::Result<()> {
    let spec = LatticeSpec::new(2, 1.0, 1.0, 3, 1.0, 0, Some(0))?;
    let model = HamiltonianModel::free(1.0, 1.0)?;
    let set = enumerate_paths(&spec)?;
    let matrix = build_action_matrix(&set, &model)?;

    let equal = solve_equal_component(&matrix, NormMode::SumForm);
    println!("equal-component pair (SumForm):");
    println!("  alpha = {:?}", equal.alpha);
    println!("  beta  = {:?}", equal.beta);
    println!(
        "  generalized action = {:+.6}",
        generalized_action(&equal, &matrix)?
    );
    println!("  total probability  = {:.12}", total_probability(&equal));
    println!(
        "  stationarity residual = {:.3e} (this matrix has unequal row sums)",
        stationarity_residual(&matrix, &equal)?
    );

    let init = solve_equal_component(&matrix, NormMode::NormForm);
    let stationary = solve_stationary(&matrix, &init, 1e-10, 10_000)?;
    println!(
        "\nstationary pair (NormForm) after {} iterations:",
        stationary.iterations
    );
    println!("  alpha = {:?}", stationary.pair.alpha);
    println!("  beta  = {:?}", stationary.pair.beta);
    println!(
        "  residual = {:.3e}, degenerate: {}",
        stationary.residual, stationary.degenerate
    );
    println!(
        "  generalized action = {:+.6}",
        generalized_action(&stationary.pair, &matrix)?
    );
    let inertia = bordered_hessian_inertia(&matrix, &stationary.pair)?;
    println!(
        "  bordered Hessian inertia: {} positive / {} negative / {} zero",
        inertia.positive, inertia.negative, inertia.zero
    );

    let minimax = solve_minimax(&matrix);
    println!("\nzero-sum minimax comparison:");
    println!("  row strategy = {:?}", minimax.row_strategy);
    println!("  col strategy = {:?}", minimax.col_strategy);
    println!("  game value   = {:+.6}", minimax.value);
    Ok(())
}
