//! Shortest-path regions of a one-run boundary and the field they imply.

use minsum_lbp::regions::{case_analysis, region_decomposition, RegionClass};
use minsum_lbp::BoundaryConfig;

fn main() -> minsum_lbp::Result<()> {
    let wire = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "B5:---+++++++++------------".into());
    let x = BoundaryConfig::parse(&wire)?;
    let grid = x.grid();
    let r = region_decomposition(&grid, &x)?;
    if let Some(p) = &r.plus_paths {
        println!("+ paths: length {}, {} of them", p.length, p.path_count);
        let show = |nodes: &[minsum_lbp::Coord]| {
            nodes
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        println!("  inner {}", show(&p.inner.nodes));
        println!("  outer {}", show(&p.outer.nodes));
    }
    for class in RegionClass::ALL {
        println!("{:>12}: {} sites", class.name(), r.classes.get(class).len());
    }
    let case = case_analysis(&grid, &x)?;
    println!("|C| = {}, canonical {}", case.corner_count, case.canonical);
    print!("{}", r.classes.to_field(&grid)?.render_ascii());
    for d in &r.diagnostics {
        println!("note: {d}");
    }
    Ok(())
}
