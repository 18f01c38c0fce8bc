use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use minsum_lbp::cli::{
    cmd_lemmas, cmd_oracle, cmd_regions, cmd_run, cmd_tree, cmd_tree_random, cmd_verify,
    write_json, Caps, LemmaOptions, OracleMethod, OracleOptions, Render, RunOptions, VerifyOptions,
};

#[derive(Parser)]
#[command(
    name = "minsum-lbp",
    version,
    about = "Min-sum LBP on grid blocks and trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Seed for randomized sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value_t = minsum_lbp::oracle::ENUM_CAP)]
    cap_enum: usize,
    #[arg(long, default_value_t = minsum_lbp::oracle::DP_CAP)]
    cap_dp: usize,
}

impl Common {
    fn caps(&self) -> Caps {
        Caps {
            enumeration: self.cap_enum,
            dp: self.cap_dp,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run LBP on one boundary string such as B2:+++---------.
    Run {
        boundary: String,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, default_value = "ascii")]
        render: Render,
        /// Include the full message trace in the JSON report.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Check convergence and exactness on every one-run boundary of size N.
    Verify {
        n: usize,
        #[arg(long)]
        dedup_symmetry: bool,
        /// Check this many seeded random boundaries instead of all.
        #[arg(long)]
        sample: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Verify every forward/backward convergence instance at size N.
    Lemmas {
        n: usize,
        #[arg(long)]
        dedup_symmetry: bool,
        /// Also try hypotheses at every start time up to this one.
        #[arg(long, default_value_t = 0)]
        max_n0: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Show the region decomposition and closed-form field of a boundary.
    Regions {
        boundary: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run a tree spec file, or seeded random trees with --random.
    Tree {
        file: Option<PathBuf>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        random: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Exact min-marginals and local solutions of a boundary.
    Oracle {
        boundary: String,
        #[arg(long, default_value = "auto")]
        method: String,
        /// Also count global solutions (enumeration sizes only).
        #[arg(long)]
        global: bool,
        #[arg(long, default_value = "ascii")]
        render: Render,
        #[command(flatten)]
        common: Common,
    },
}

fn emit<T: Serialize>(
    common: &Common,
    report: &T,
    summary: String,
    ok: bool,
) -> Result<ExitCode, String> {
    if let Some(path) = &common.json {
        write_json(path, report).map_err(|e| e.to_string())?;
    }
    print!("{summary}");
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn field_lines(rendered: &Option<String>) -> String {
    rendered.clone().unwrap_or_default()
}

fn main_inner(cli: Cli) -> Result<ExitCode, String> {
    let err = |e: minsum_lbp::Error| e.to_string();
    match cli.command {
        Command::Run {
            boundary,
            n_max,
            render,
            trace,
            common,
        } => {
            let opts = RunOptions {
                n_max,
                render,
                caps: common.caps(),
                with_trace: trace,
            };
            let r = cmd_run(&boundary, &opts).map_err(err)?;
            let summary = format!(
                "{} N={} stable from {:?} oracle match {:?}\n{}",
                r.boundary,
                r.n,
                r.first_stable_iteration,
                r.matches,
                field_lines(&r.rendered)
            );
            let ok = r.matches != Some(false);
            emit(&common, &r, summary, ok)
        }
        Command::Verify {
            n,
            dedup_symmetry,
            sample,
            common,
        } => {
            set_jobs(common.jobs)?;
            let opts = VerifyOptions {
                caps: common.caps(),
                dedup_symmetry,
                sample,
                seed: common.seed,
            };
            let s = cmd_verify(n, &opts).map_err(err)?;
            let mut summary = format!(
                "verify N={}: {} boundaries, {} violations\n",
                s.n, s.boundaries_tested, s.violations
            );
            for v in &s.violation_list {
                summary.push_str(&format!("  {} {}: {}\n", v.boundary, v.check, v.detail));
            }
            emit(&common, &s, summary, s.passed())
        }
        Command::Lemmas {
            n,
            dedup_symmetry,
            max_n0,
            common,
        } => {
            set_jobs(common.jobs)?;
            let mut opts = LemmaOptions {
                dedup_symmetry,
                ..LemmaOptions::default()
            };
            opts.sweep.max_n0 = max_n0;
            let s = cmd_lemmas(n, &opts).map_err(err)?;
            let c = s.lemma_counts.clone().unwrap_or_default();
            let mut summary = format!(
                "lemmas N={}: {} boundaries\n  forward {}/{}\n  cut-rectangle {}/{}\n  backward {}/{} ({} vacuous)\n  violations {}\n",
                s.n,
                s.boundaries_tested,
                c.fc_verified,
                c.fc_hypotheses,
                c.cut_verified,
                c.cut_instances,
                c.bc_verified,
                c.bc_hypotheses,
                c.bc_vacuous,
                s.violations
            );
            for v in &s.violation_list {
                summary.push_str(&format!("  {} {}: {}\n", v.boundary, v.check, v.detail));
            }
            emit(&common, &s, summary, s.passed())
        }
        Command::Regions { boundary, common } => match cmd_regions(&boundary, &common.caps()) {
            Ok(r) => {
                let mut summary = format!(
                    "{} |C|={} ({:?})\n{}",
                    r.boundary, r.corner_count, r.source, r.rendered
                );
                for d in &r.diagnostics {
                    summary.push_str(&format!("note: {d}\n"));
                }
                let ok = r.oracle_agrees != Some(false);
                emit(&common, &r, summary, ok)
            }
            Err(e) => {
                eprintln!("{e}");
                Ok(ExitCode::from(2))
            }
        },
        Command::Tree {
            file,
            n_max,
            random,
            common,
        } => {
            let report = match (file, random) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
                    cmd_tree(&text, n_max).map_err(err)?
                }
                (None, Some(k)) => cmd_tree_random(k, common.seed, 20, 14).map_err(err)?,
                (None, None) => return Err("tree needs a spec file or --random K".into()),
            };
            let mut summary = format!("{} trees, {} failures\n", report.trees, report.failures);
            if let [run] = report.runs.as_slice() {
                summary.push_str(&format!(
                    "diameter {} stable from {:?}\nestimates {:?}\noracle    {:?}\n",
                    run.diameter, run.first_stable_iteration, run.estimates, run.oracle
                ));
            }
            let ok = report.failures == 0;
            emit(&common, &report, summary, ok)
        }
        Command::Oracle {
            boundary,
            method,
            global,
            render,
            common,
        } => {
            let method = match method.as_str() {
                "auto" => OracleMethod::Auto,
                "enum" => OracleMethod::Enum,
                "dp" => OracleMethod::Dp,
                other => return Err(format!("unknown oracle method {other:?}")),
            };
            let opts = OracleOptions {
                method,
                caps: common.caps(),
                global,
                render,
            };
            let r = cmd_oracle(&boundary, &opts).map_err(err)?;
            let summary = format!(
                "{} via {:?}: minimum {} odd bonds, cross-check {:?}\n{}",
                r.boundary,
                r.method,
                r.global_minimum,
                r.cross_check,
                field_lines(&r.rendered)
            );
            let ok = r.cross_check != Some(false);
            emit(&common, &r, summary, ok)
        }
    }
}

fn set_jobs(jobs: Option<usize>) -> Result<(), String> {
    if let Some(j) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
