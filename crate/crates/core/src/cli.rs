//! Report-producing commands. The binary is a thin argument parser over
//! these; the examples call them directly.
//!
//! Every report is plain serde data so that it can be written with
//! [`write_json`] and read back unchanged.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convergence::{replay_proof, sweep_lemmas, LemmaCounts, LemmaSweepOptions};
use crate::field::LocalSolutionField;
use crate::grid::{enumerate_one_run_boundaries, BoundaryConfig, Coord, Grid};
use crate::messages::{GridTrace, TraceStateExport};
use crate::oracle::{
    brute_force_min_marginals_capped, dp_min_marginals_capped, global_solutions, local_solutions,
    MinMarginals, SiteMarginal, DP_CAP, ENUM_CAP, ENUM_HARD_CAP,
};
use crate::regions::{case_analysis, region_decomposition, RegionSource};
use crate::tree::{run_tree, TreeInstance, TreeRun};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Render {
    #[default]
    None,
    Ascii,
    Pgm,
}

impl Render {
    pub fn render(self, field: &LocalSolutionField) -> Option<String> {
        match self {
            Render::None => None,
            Render::Ascii => Some(field.render_ascii()),
            Render::Pgm => Some(field.render_pgm()),
        }
    }
}

impl std::str::FromStr for Render {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Render::None),
            "ascii" => Ok(Render::Ascii),
            "pgm" => Ok(Render::Pgm),
            other => Err(Error::Io(format!("unknown render mode {other:?}"))),
        }
    }
}

/// Solver size caps shared by the commands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub enumeration: usize,
    pub dp: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: ENUM_CAP,
            dp: DP_CAP,
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Defaults to `2N + 10`.
    pub n_max: Option<usize>,
    pub render: Render,
    pub caps: Caps,
    pub with_trace: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub boundary: String,
    pub n: usize,
    pub n_max: usize,
    pub first_stable_iteration: Option<usize>,
    /// Estimates at `n_max`, keyed `"a,b"`.
    pub estimates: BTreeMap<String, i32>,
    pub oracle: Option<BTreeMap<String, i32>>,
    /// `Some(true)` iff the oracle ran and agrees site for site.
    pub matches: Option<bool>,
    pub rendered: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace: Option<Vec<TraceStateExport>>,
    pub elapsed_ms: f64,
}

/// Runs LBP on one boundary string and compares with the row DP when `N`
/// is within the DP cap.
pub fn cmd_run(boundary: &str, opts: &RunOptions) -> Result<RunReport> {
    let start = Instant::now();
    let x = BoundaryConfig::parse(boundary)?;
    let grid = x.grid();
    let n_max = opts.n_max.unwrap_or(2 * grid.n() + 10);
    let trace = GridTrace::run(&x, n_max)?;
    let estimates = trace.estimates(n_max);
    let oracle = if grid.n() <= opts.caps.dp {
        Some(local_solutions(
            &dp_min_marginals_capped(&grid, &x, opts.caps.dp)?.marginals,
        ))
    } else {
        None
    };
    Ok(RunReport {
        boundary: x.to_wire(),
        n: grid.n(),
        n_max,
        first_stable_iteration: trace.first_stable_iteration(),
        matches: oracle.as_ref().map(|o| *o == estimates),
        oracle: oracle.map(|o| o.to_json_map()),
        rendered: opts.render.render(&estimates),
        estimates: estimates.to_json_map(),
        trace: opts.with_trace.then(|| trace.export()),
        elapsed_ms: elapsed_ms(start),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepViolation {
    pub boundary: String,
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub command: String,
    pub n: usize,
    pub boundaries_tested: usize,
    pub violations: usize,
    pub violation_list: Vec<SweepViolation>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lemma_counts: Option<LemmaCounts>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub proof_replays: Option<usize>,
    pub wall_time_ms: f64,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub caps: Caps,
    pub dedup_symmetry: bool,
    /// Check a random sample of this many boundaries instead of all.
    pub sample: Option<usize>,
    pub seed: u64,
}

fn boundaries_for(
    grid: &Grid,
    dedup: bool,
    sample: Option<usize>,
    seed: u64,
) -> Vec<BoundaryConfig> {
    let all = enumerate_one_run_boundaries(grid, dedup);
    match sample {
        Some(k) if k < all.len() => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked = rand::seq::index::sample(&mut rng, all.len(), k).into_vec();
            picked.sort_unstable();
            picked.into_iter().map(|i| all[i].clone()).collect()
        }
        _ => all,
    }
}

fn field_detail(expected: &LocalSolutionField, got: &LocalSolutionField) -> String {
    let diffs: Vec<String> = got
        .differences(expected)
        .into_iter()
        .take(4)
        .map(|(c, g, e)| format!("{c}: {g} vs {e}"))
        .collect();
    diffs.join(", ")
}

/// All checks of the convergence theorem on one boundary.
pub fn verify_boundary(x: &BoundaryConfig, caps: &Caps) -> Result<Vec<SweepViolation>> {
    let grid = x.grid();
    let n = grid.n();
    let wire = x.to_wire();
    let mut out = Vec::new();
    let mut flag = |check: &str, detail: String| {
        out.push(SweepViolation {
            boundary: wire.clone(),
            check: check.into(),
            detail,
        })
    };

    let trace = GridTrace::run(x, 2 * n + 10)?;
    match trace.first_stable_iteration() {
        Some(k) if k <= 2 * n => {}
        other => flag("stable_by_2n", format!("first stable iteration {other:?}")),
    }
    let estimate = trace.estimates(2 * n);
    let oracle = local_solutions(&dp_min_marginals_capped(&grid, x, caps.dp)?.marginals);
    if estimate != oracle {
        flag("estimate_equals_oracle", field_detail(&oracle, &estimate));
    }
    if n <= caps.enumeration.min(ENUM_HARD_CAP) {
        let brute = local_solutions(&brute_force_min_marginals_capped(
            &grid,
            x,
            caps.enumeration,
        )?);
        if brute != oracle {
            flag("enumeration_equals_dp", field_detail(&oracle, &brute));
        }
    }
    let regions = region_decomposition(&grid, x)?;
    match regions.classes.to_field(&grid) {
        Ok(f) if f == oracle => {}
        Ok(f) => flag("regions_equal_oracle", field_detail(&oracle, &f)),
        Err(e) => flag("regions_partition", e.to_string()),
    }
    let case = case_analysis(&grid, x)?;
    match case.classes.to_field(&grid) {
        Ok(f) if f == oracle => {}
        Ok(f) => flag("case_formula_equals_oracle", field_detail(&oracle, &f)),
        Err(e) => flag("case_formula_partition", e.to_string()),
    }
    Ok(out)
}

/// Sweeps every one-run boundary at size `n` (or a seeded sample).
pub fn cmd_verify(n: usize, opts: &VerifyOptions) -> Result<SweepSummary> {
    let start = Instant::now();
    let grid = Grid::new(n)?;
    if n > opts.caps.dp {
        return Err(Error::SizeGuard {
            solver: "dp",
            n,
            cap: opts.caps.dp,
        });
    }
    let boundaries = boundaries_for(&grid, opts.dedup_symmetry, opts.sample, opts.seed);
    let per: Vec<Vec<SweepViolation>> = boundaries
        .par_iter()
        .map(|x| verify_boundary(x, &opts.caps))
        .collect::<Result<_>>()?;
    let mut violation_list: Vec<SweepViolation> = per.into_iter().flatten().collect();
    violation_list.sort_by(|a, b| (&a.boundary, &a.check).cmp(&(&b.boundary, &b.check)));
    Ok(SweepSummary {
        command: "verify".into(),
        n,
        boundaries_tested: boundaries.len(),
        violations: violation_list.len(),
        violation_list,
        lemma_counts: None,
        proof_replays: None,
        wall_time_ms: elapsed_ms(start),
    })
}

#[derive(Clone, Debug)]
pub struct LemmaOptions {
    pub dedup_symmetry: bool,
    pub sweep: LemmaSweepOptions,
    pub replay: bool,
    /// Largest `N` accepted.
    pub cap: usize,
}

impl Default for LemmaOptions {
    fn default() -> Self {
        LemmaOptions {
            dedup_symmetry: false,
            sweep: LemmaSweepOptions::default(),
            replay: true,
            cap: 6,
        }
    }
}

/// Verifies every forward/backward convergence instance whose hypothesis
/// holds on every one-run boundary at size `n`, and replays the case
/// analysis on each.
pub fn cmd_lemmas(n: usize, opts: &LemmaOptions) -> Result<SweepSummary> {
    let start = Instant::now();
    let grid = Grid::new(n)?;
    if n > opts.cap {
        return Err(Error::SizeGuard {
            solver: "lemma sweep",
            n,
            cap: opts.cap,
        });
    }
    let boundaries = enumerate_one_run_boundaries(&grid, opts.dedup_symmetry);
    let results: Vec<(LemmaCounts, Vec<SweepViolation>)> = boundaries
        .par_iter()
        .map(|x| -> Result<_> {
            let sweep = sweep_lemmas(x, &opts.sweep)?;
            let mut violations: Vec<SweepViolation> = sweep
                .failures
                .iter()
                .map(|f| SweepViolation {
                    boundary: x.to_wire(),
                    check: format!("{}_lemma", f.lemma),
                    detail: serde_json::to_string(f).unwrap_or_default(),
                })
                .collect();
            if opts.replay {
                let replay = replay_proof(x)?;
                if !replay.holds() {
                    violations.push(SweepViolation {
                        boundary: x.to_wire(),
                        check: "proof_replay".into(),
                        detail: format!(
                            "observations {:?}, conflicts {}, undetermined {}, trace {}, closed form {}",
                            replay
                                .observations
                                .iter()
                                .map(|o| (o.label.as_str(), o.hypothesis_holds, o.conclusion_holds))
                                .collect::<Vec<_>>(),
                            replay.conflicts.len(),
                            replay.undetermined.len(),
                            replay.matches_trace,
                            replay.matches_closed_form
                        ),
                    });
                }
            }
            Ok((sweep.counts, violations))
        })
        .collect::<Result<_>>()?;
    let mut counts = LemmaCounts::default();
    let mut violation_list = Vec::new();
    for (c, v) in results {
        counts.add(&c);
        violation_list.extend(v);
    }
    violation_list.sort_by(|a, b| (&a.boundary, &a.check).cmp(&(&b.boundary, &b.check)));
    Ok(SweepSummary {
        command: "lemmas".into(),
        n,
        boundaries_tested: boundaries.len(),
        violations: violation_list.len(),
        violation_list,
        lemma_counts: Some(counts),
        proof_replays: opts.replay.then_some(boundaries.len()),
        wall_time_ms: elapsed_ms(start),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionsReport {
    pub boundary: String,
    pub n: usize,
    pub source: RegionSource,
    pub corner_count: usize,
    pub classes: BTreeMap<String, Vec<Coord>>,
    pub field: BTreeMap<String, i32>,
    pub rendered: String,
    /// `None` when `N` exceeds the DP cap.
    pub oracle_agrees: Option<bool>,
    pub diagnostics: Vec<String>,
}

/// Region decomposition of a one-run boundary with its closed-form field.
pub fn cmd_regions(boundary: &str, caps: &Caps) -> Result<RegionsReport> {
    let x = BoundaryConfig::parse(boundary)?;
    let grid = x.grid();
    let r = region_decomposition(&grid, &x)?;
    let field = r.classes.to_field(&grid)?;
    let case = case_analysis(&grid, &x)?;
    let mut diagnostics = r.diagnostics.clone();
    if !case.classes.same_as(&r.classes) {
        diagnostics.push("case formulas disagree with the path construction".into());
    }
    let oracle_agrees = if grid.n() <= caps.dp {
        let oracle = local_solutions(&dp_min_marginals_capped(&grid, &x, caps.dp)?.marginals);
        if oracle != field {
            diagnostics.push(format!(
                "oracle disagrees: {}",
                field_detail(&oracle, &field)
            ));
        }
        Some(oracle == field)
    } else {
        None
    };
    Ok(RegionsReport {
        boundary: x.to_wire(),
        n: grid.n(),
        source: r.source,
        corner_count: case.corner_count,
        classes: r.classes.export(),
        field: field.to_json_map(),
        rendered: field.render_ascii(),
        oracle_agrees,
        diagnostics,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeReport {
    pub trees: usize,
    pub failures: usize,
    pub runs: Vec<TreeRun>,
}

impl TreeReport {
    fn from_runs(runs: Vec<TreeRun>) -> Self {
        TreeReport {
            trees: runs.len(),
            failures: runs.iter().filter(|r| !r.holds()).count(),
            runs,
        }
    }
}

/// Runs one tree from its line-format text.
pub fn cmd_tree(spec: &str, n_max: Option<usize>) -> Result<TreeReport> {
    let tree = TreeInstance::parse(spec)?;
    Ok(TreeReport::from_runs(vec![run_tree(&tree, n_max)?]))
}

/// Runs `count` seeded random trees.
pub fn cmd_tree_random(
    count: usize,
    seed: u64,
    max_nodes: usize,
    max_interior: usize,
) -> Result<TreeReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let runs = (0..count)
        .map(|_| {
            run_tree(
                &TreeInstance::random(&mut rng, max_nodes, max_interior),
                None,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TreeReport::from_runs(runs))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMethod {
    /// Enumeration within its cap, otherwise the row DP.
    #[default]
    Auto,
    Enum,
    Dp,
}

#[derive(Clone, Debug, Default)]
pub struct OracleOptions {
    pub method: OracleMethod,
    pub caps: Caps,
    pub global: bool,
    pub render: Render,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub boundary: String,
    pub n: usize,
    pub method: OracleMethod,
    pub global_minimum: u32,
    pub marginals: Vec<SiteMarginal>,
    pub local: BTreeMap<String, i32>,
    /// Enumeration and DP agree; `None` when only one of them ran.
    pub cross_check: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub global_solutions: Option<usize>,
    pub rendered: Option<String>,
}

pub fn cmd_oracle(boundary: &str, opts: &OracleOptions) -> Result<OracleReport> {
    let x = BoundaryConfig::parse(boundary)?;
    let grid = x.grid();
    let n = grid.n();
    let enum_cap = opts.caps.enumeration.min(ENUM_HARD_CAP);
    let brute = || brute_force_min_marginals_capped(&grid, &x, opts.caps.enumeration);
    let dp = || dp_min_marginals_capped(&grid, &x, opts.caps.dp).map(|r| r.marginals);
    let (method, mm, other): (OracleMethod, MinMarginals, Option<MinMarginals>) = match opts.method
    {
        OracleMethod::Enum => (
            OracleMethod::Enum,
            brute()?,
            (n <= opts.caps.dp).then(dp).transpose()?,
        ),
        OracleMethod::Dp => (
            OracleMethod::Dp,
            dp()?,
            (n <= enum_cap).then(brute).transpose()?,
        ),
        OracleMethod::Auto if n <= enum_cap => (OracleMethod::Enum, brute()?, Some(dp()?)),
        OracleMethod::Auto => (OracleMethod::Dp, dp()?, None),
    };
    let local = local_solutions(&mm);
    let global_solutions = if opts.global {
        Some(global_solutions(&grid, &x)?.members.len())
    } else {
        None
    };
    Ok(OracleReport {
        boundary: x.to_wire(),
        n,
        method,
        global_minimum: mm.global_minimum(),
        marginals: mm.export(),
        cross_check: other.map(|o| o == mm),
        local: local.to_json_map(),
        global_solutions,
        rendered: opts.render.render(&local),
    })
}
