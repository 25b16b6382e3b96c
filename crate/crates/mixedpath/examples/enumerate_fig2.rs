//! Enumerate the smallest nontrivial path set: two time steps, three
//! momentum levels per site, both endpoints pinned to the center. Five
//! space-time points admit exactly three paths.
//!
//! ```bash
//! cargo run --example enumerate_fig2
//! ```

use mixedpath::lattice::{count_paths, enumerate_paths, time_reverse, LatticeSpec};

fn main() -> mixedpath::Result<()> {
    let spec = LatticeSpec::new(2, 1.0, 1.0, 3, 1.0, 0, Some(0))?;
    println!(
        "lattice: {} steps, branching {}, endpoints {} -> {:?}",
        spec.num_steps, spec.branching, spec.endpoint_start, spec.endpoint_end
    );
    println!("predicted count: {}", count_paths(&spec)?);

    let set = enumerate_paths(&spec)?;
    println!("\nforward class ({} paths):", set.len());
    for (q, p) in set.qpaths.iter().zip(&set.ppaths) {
        println!(
            "  sites {:?}  hop levels {:?}  momenta {:?}",
            q.sites,
            p.levels,
            p.levels
                .iter()
                .map(|&l| spec.momentum(l))
                .collect::<Vec<_>>()
        );
    }

    let backward = time_reverse(&set);
    println!("\nbackward class ({} paths):", backward.len());
    for q in &backward.qpaths {
        println!("  sites {:?}  direction {:?}", q.sites, q.direction);
    }

    // letting the endpoint float instead gives the full fan-out
    let free_end = LatticeSpec::new(2, 1.0, 1.0, 3, 1.0, 0, None)?;
    println!(
        "\nwith a free endpoint the same lattice fans out to {} paths",
        count_paths(&free_end)?
    );
    Ok(())
}
