//! Command-line front end.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use evac_core::grid::{classify_areas, gen_grid, CandidateFilter, GridSpec};
use evac_core::oracle::default_step;
use evac_core::rational::{parse_rational, Rational};
use evac_core::{
    max_outflow, min_required_time, oracle_feasible, oracle_max_outflow, oracle_t_star, solve_with_family_on,
    successive_shortest_paths, verify_dynamic_flow, Network, NodeId, SupplyFunction,
};

use crate::instance::{resolve_node, to_json, Instance};
use crate::{flowfile, parallel, report};

#[derive(Parser, Debug)]
#[command(name = "evac", version, about = "Quickest evacuation flows on uniform-capacity dynamic networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Minimum feasible horizon T* and a maximising subset.
    Horizon {
        input: PathBuf,
        /// List every subset of the admitting family with its required time.
        #[arg(long)]
        family: bool,
        #[command(flatten)]
        run: RunFlags,
    },
    /// T*, the convex decomposition of the supplies, and a quickest flow.
    Solve {
        input: PathBuf,
        /// Compare against the exhaustive oracle and, with --grid, the
        /// unfiltered solver; exit 1 on any disagreement.
        #[arg(long)]
        cross_check: bool,
        /// Write the quickest flow as JSON records.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Print every step of the facet walk.
        #[arg(long)]
        emit_trace: bool,
        /// Time step of the flow (must divide T* and every transit time).
        #[arg(long)]
        step: Option<String>,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Successive shortest paths and required time of a source subset.
    Theta {
        input: PathBuf,
        /// Comma-separated node ids or names.
        #[arg(long)]
        set: String,
        /// Also print the maximum outflow at this time.
        #[arg(long)]
        time: Option<String>,
    },
    /// Time-expanded brute-force checks.
    Oracle {
        #[command(subcommand)]
        op: OracleOp,
    },
    /// Check a flow file against the instance constraints.
    Verify {
        input: PathBuf,
        flow: PathBuf,
        /// Horizon to check against; defaults to the one stored in the flow.
        #[arg(long)]
        time: Option<String>,
    },
    /// Write a bidirected grid instance.
    GenGrid {
        #[arg(long)]
        side: usize,
        /// Sink position as `row,col`.
        #[arg(long)]
        sink: String,
        #[arg(long, default_value = "1")]
        tau: String,
        #[arg(long, default_value = "1")]
        cap: String,
        #[arg(long, default_value = "1")]
        supply: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Grid scaling table: candidate count, family size, T*, wall time.
    Bench {
        /// Grid sides to run, e.g. `4,6,8` or `4-12`.
        #[arg(long, default_value = "4-12")]
        sides: String,
        /// `center`, `corner`, or `row,col` (clamped to the grid).
        #[arg(long, default_value = "center")]
        sink: String,
        /// Omit the wall-time column (for reproducible output).
        #[arg(long)]
        no_time: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct RunFlags {
    /// Build the family from grid candidate tuples only.
    #[arg(long)]
    pub grid: bool,
    /// Worker threads (default: $EVAC_JOBS or 1).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum OracleOp {
    /// Time-expanded maximum outflow of a subset.
    #[command(name = "otA")]
    OtA {
        input: PathBuf,
        #[arg(long)]
        set: String,
        #[arg(long)]
        time: String,
        #[arg(long)]
        step: Option<String>,
    },
    /// Whether all supplies reach the sink by the given time.
    Feasible {
        input: PathBuf,
        #[arg(long)]
        time: String,
        #[arg(long)]
        step: Option<String>,
    },
    /// Exhaustive-subset T*, certified on the time grid.
    Tstar { input: PathBuf },
    /// Same as the top-level verify command.
    Verify {
        input: PathBuf,
        flow: PathBuf,
        #[arg(long)]
        time: Option<String>,
    },
}

/// Result of a command: text for stdout and whether all checks passed.
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

impl Outcome {
    fn pass(text: String) -> Self {
        Outcome { text, ok: true }
    }
}

fn rational(text: &str) -> Result<Rational> {
    parse_rational(text).ok_or_else(|| anyhow!("not a rational: {text}"))
}

fn load(path: &Path) -> Result<(Network, SupplyFunction)> {
    Instance::load(path)?.into_network()
}

fn parse_set(net: &Network, text: &str) -> Result<Vec<NodeId>> {
    text.split(',').filter(|s| !s.trim().is_empty()).map(|s| resolve_node(net, s.trim())).collect()
}

fn parse_pair(text: &str) -> Result<(usize, usize)> {
    let (a, b) = text.split_once(',').ok_or_else(|| anyhow!("expected row,col"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn parse_sides(text: &str) -> Result<Vec<usize>> {
    if let Some((a, b)) = text.split_once('-') {
        let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
        return Ok((a..=b).collect());
    }
    text.split(',').map(|s| s.trim().parse().map_err(Into::into)).collect()
}

fn step_or_default(net: &Network, step: &Option<String>, time: &Rational) -> Result<Rational> {
    match step {
        Some(s) => rational(s),
        None => Ok(default_step(net, time)),
    }
}

fn verify_text(input: &Path, flow: &Path, time: &Option<String>) -> Result<Outcome> {
    let (net, w) = load(input)?;
    let f = flowfile::load(&net, flow)?;
    let horizon = match time {
        Some(t) => rational(t)?,
        None => f.horizon.clone(),
    };
    let r = verify_dynamic_flow(&net, &f, &w, &horizon);
    Ok(Outcome { text: format!("{}\n", r.summary()), ok: r.passed() })
}

pub fn execute(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Horizon { input, family, run } => {
            let (net, w) = load(&input)?;
            let h = parallel::horizon(&net, &w, parallel::job_count(run.jobs), run.grid)?;
            Ok(Outcome::pass(report::horizon_text(&net, &h, family)))
        }
        Command::Solve { input, cross_check, output, emit_trace, step, run } => {
            let (net, w) = load(&input)?;
            let jobs = parallel::job_count(run.jobs);
            let family = parallel::family(&net, &w, jobs, run.grid)?;
            let step = step.as_deref().map(rational).transpose()?;
            let sol = solve_with_family_on(&net, &w, family, step.as_ref())?;
            let mut text = report::solve_text(&net, &sol, emit_trace);
            let mut ok = sol.report.passed();
            if cross_check {
                let t_star = &sol.horizon.t_star;
                if net.source_count() <= 20 {
                    let oracle = oracle_t_star(&net, &w)?;
                    let agree = oracle == *t_star;
                    ok &= agree;
                    writeln!(text, "cross-check: oracle T* = {oracle} ({})", if agree { "agree" } else { "DISAGREE" })?;
                } else {
                    writeln!(text, "cross-check: oracle skipped ({} sources)", net.source_count())?;
                }
                if run.grid {
                    let general = parallel::horizon(&net, &w, jobs, false)?;
                    let agree = general.t_star == *t_star;
                    ok &= agree;
                    writeln!(
                        text,
                        "cross-check: unfiltered T* = {} ({})",
                        general.t_star,
                        if agree { "agree" } else { "DISAGREE" }
                    )?;
                }
            }
            if let Some(path) = output {
                std::fs::write(&path, flowfile::to_json(&net, &sol.quickest))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(Outcome { text, ok })
        }
        Command::Theta { input, set, time } => {
            let (net, w) = load(&input)?;
            let set = parse_set(&net, &set)?;
            let r = successive_shortest_paths(&net, &set)?;
            let mut text = report::sssp_text(&net, &r);
            writeln!(text, "theta = {}", min_required_time(&r, &w.of_set(&r.subset))?)?;
            if let Some(t) = time {
                let t = rational(&t)?;
                writeln!(text, "o^{t} = {}", max_outflow(&r, &t))?;
            }
            Ok(Outcome::pass(text))
        }
        Command::Oracle { op } => match op {
            OracleOp::OtA { input, set, time, step } => {
                let (net, _) = load(&input)?;
                let set = parse_set(&net, &set)?;
                let t = rational(&time)?;
                let step = step_or_default(&net, &step, &t)?;
                Ok(Outcome::pass(format!("{}\n", oracle_max_outflow(&net, &set, &t, &step)?)))
            }
            OracleOp::Feasible { input, time, step } => {
                let (net, w) = load(&input)?;
                let t = rational(&time)?;
                let step = step_or_default(&net, &step, &t)?;
                Ok(Outcome::pass(format!("{}\n", oracle_feasible(&net, &w, &t, &step)?)))
            }
            OracleOp::Tstar { input } => {
                let (net, w) = load(&input)?;
                Ok(Outcome::pass(format!("{}\n", oracle_t_star(&net, &w)?)))
            }
            OracleOp::Verify { input, flow, time } => verify_text(&input, &flow, &time),
        },
        Command::Verify { input, flow, time } => verify_text(&input, &flow, &time),
        Command::GenGrid { side, sink, tau, cap, supply, output } => {
            let spec = GridSpec {
                side,
                transit: rational(&tau)?,
                capacity: rational(&cap)?,
                sink: parse_pair(&sink)?,
                supply: rational(&supply)?,
            };
            let (net, w) = gen_grid(&spec)?;
            let text = to_json(&net, &w);
            match output {
                Some(path) => {
                    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
                    Ok(Outcome::pass(String::new()))
                }
                None => Ok(Outcome::pass(text)),
            }
        }
        Command::Bench { sides, sink, no_time, jobs } => {
            let jobs = parallel::job_count(jobs);
            let mut text = String::new();
            writeln!(text, "N\tn\tk\td\t|I|\t|A-hat|\tT*{}", if no_time { "" } else { "\tms" })?;
            for side in parse_sides(&sides)? {
                let pos = match sink.as_str() {
                    "center" => (side / 2, side / 2),
                    "corner" => (0, 0),
                    other => {
                        let (r, c) = parse_pair(other)?;
                        (r.min(side - 1), c.min(side - 1))
                    }
                };
                let spec = GridSpec {
                    side,
                    transit: Rational::from_integer(1.into()),
                    capacity: Rational::from_integer(1.into()),
                    sink: pos,
                    supply: Rational::from_integer(1.into()),
                };
                let (net, w) = gen_grid(&spec)?;
                let start = Instant::now();
                let areas = classify_areas(&net)?;
                let candidates = CandidateFilter::new(&net, &areas).count();
                let h = parallel::horizon(&net, &w, jobs, true)?;
                let ms = start.elapsed().as_millis();
                write!(
                    text,
                    "{side}\t{}\t{}\t{}\t{candidates}\t{}\t{}",
                    net.node_count(),
                    net.source_count(),
                    net.sink_in_degree(),
                    h.family.len(),
                    h.t_star
                )?;
                if !no_time {
                    write!(text, "\t{ms}")?;
                }
                writeln!(text)?;
            }
            Ok(Outcome::pass(text))
        }
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
