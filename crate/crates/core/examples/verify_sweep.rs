//! Sweeps every one-run boundary for a few sizes and writes the summaries
//! as JSON.

use minsum_lbp::cli::{cmd_verify, write_json, VerifyOptions};

fn main() -> minsum_lbp::Result<()> {
    let out = std::env::temp_dir().join("minsum-verify");
    std::fs::create_dir_all(&out)?;
    for n in 1..=5 {
        let s = cmd_verify(n, &VerifyOptions::default())?;
        println!(
            "N={n}: {} boundaries, {} violations, {:.0} ms",
            s.boundaries_tested, s.violations, s.wall_time_ms
        );
        write_json(&out.join(format!("verify-{n}.json")), &s)?;
    }
    println!("summaries in {}", out.display());
    Ok(())
}
