//! Checks every forward/backward convergence instance on one boundary and
//! replays the case analysis.

use minsum_lbp::convergence::{replay_proof, sweep_lemmas, LemmaSweepOptions};
use minsum_lbp::BoundaryConfig;

fn main() -> minsum_lbp::Result<()> {
    let x = BoundaryConfig::parse("B4:++++++++------------")?;
    let s = sweep_lemmas(&x, &LemmaSweepOptions::default())?;
    println!("{:#?}", s.counts);
    for f in &s.failures {
        println!("failed: {}", serde_json::to_string(f).unwrap_or_default());
    }
    let replay = replay_proof(&x)?;
    for o in &replay.observations {
        println!(
            "{:<12} sigma {:+} hypothesis {} conclusion {}",
            o.label, o.sigma, o.hypothesis_holds, o.conclusion_holds
        );
    }
    println!("replay holds: {}", replay.holds());
    Ok(())
}
