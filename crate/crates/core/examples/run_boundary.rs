//! Runs message passing on one boundary and prints the estimates as they
//! settle.
//!
//! cargo run --example run_boundary -- B3:++++++----------

use minsum_lbp::oracle::{exact_local_solutions, DP_CAP};
use minsum_lbp::{BoundaryConfig, GridTrace};

fn main() -> minsum_lbp::Result<()> {
    let wire = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "B3:++++++----------".into());
    let x = BoundaryConfig::parse(&wire)?;
    let n = x.n();
    let trace = GridTrace::run(&x, 2 * n + 2)?;
    for k in 0..=2 * n {
        println!("iteration {k}\n{}", trace.estimates(k).render_ascii());
    }
    let oracle = exact_local_solutions(&x.grid(), &x, DP_CAP)?;
    println!(
        "stable from {:?}, exact at 2N: {}",
        trace.first_stable_iteration(),
        trace.estimates(2 * n) == oracle
    );
    Ok(())
}
