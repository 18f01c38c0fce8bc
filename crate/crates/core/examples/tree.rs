//! Message passing on a small tree, where it is exact after diameter + 1
//! iterations.

use minsum_lbp::tree::{run_tree, TreeInstance};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SPEC: &str = "\
boundary p +1
boundary q -1
boundary r -1
interior hub
interior a
interior b
edge p a
edge a hub
edge hub b
edge b q
edge hub r
";

fn main() -> minsum_lbp::Result<()> {
    let tree = TreeInstance::parse(SPEC)?;
    let run = run_tree(&tree, None)?;
    println!(
        "diameter {} stable from {:?}",
        run.diameter, run.first_stable_iteration
    );
    for (name, v) in &run.estimates {
        println!("{name:>4} estimate {v:+} oracle {:+}", run.oracle[name]);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let ok = (0..50)
        .filter(|_| {
            run_tree(&TreeInstance::random(&mut rng, 20, 14), None).is_ok_and(|r| r.holds())
        })
        .count();
    println!("{ok}/50 random trees exact");
    Ok(())
}
