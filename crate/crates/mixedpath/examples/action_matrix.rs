//! Build the action matrix over the three-path lattice and check the
//! discrete integration-by-parts identity on each matched pair.
//!
//! ```bash
//! cargo run --example action_matrix
//! ```

use mixedpath::action::{
    boundary_term, build_action_matrix, evaluate_action_r, evaluate_action_s, HamiltonianModel,
};
use mixedpath::lattice::{enumerate_paths, LatticeSpec};

fn main() -> mixedpath::Result<()> {
    let spec = LatticeSpec::new(2, 1.0, 1.0, 3, 1.0, 0, Some(0))?;
    let model = HamiltonianModel::free(1.0, 1.0)?;
    let set = enumerate_paths(&spec)?;
    let matrix = build_action_matrix(&set, &model)?;

    println!("action matrix S[p_j, q_k] (rows: momentum paths):");
    print!("{}", matrix.to_csv());

    println!("\nmatched-pair diagonal: {:?}", matrix.diagonal());

    println!("\nS - R telescopes to the boundary term p*q|end - p*q|start:");
    for (q, p) in set.qpaths.iter().zip(&set.ppaths) {
        let s = evaluate_action_s(p, q, &model, &spec)?;
        let r = evaluate_action_r(p, q, &model, &spec)?;
        let boundary = boundary_term(p, q, &spec);
        let telescoped = s - r;
        println!(
            "  sites {:?}: S = {s:+.3}, R = {r:+.3}, S - R = {telescoped:+.3}, boundary = {boundary:+.3}",
            q.sites
        );
    }
    Ok(())
}
