//! Exact min-marginals by enumeration and by the row DP, side by side.

use minsum_lbp::oracle::{
    brute_force_min_marginals, dp_min_marginals, global_solutions, local_solutions,
};
use minsum_lbp::BoundaryConfig;

fn main() -> minsum_lbp::Result<()> {
    let x = BoundaryConfig::parse("B3:-++++++---------")?;
    let grid = x.grid();
    let brute = brute_force_min_marginals(&grid, &x)?;
    let dp = dp_min_marginals(&grid, &x)?;
    assert_eq!(brute, dp);
    for m in dp.export() {
        println!(
            "{} O(-1)={} O(+1)={} local={}",
            m.coord, m.o_minus, m.o_plus, m.local
        );
    }
    println!("global minimum {}", dp.global_minimum());
    println!(
        "{} global solutions",
        global_solutions(&grid, &x)?.members.len()
    );
    print!("{}", local_solutions(&dp).render_ascii());
    Ok(())
}
