use std::collections::BTreeSet;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use clawsched::experiments::{
    emit_csv, emit_plot_script, emit_summary, emit_timings, run_performance_sweep, run_range_study, summarize, to_csv, Grouping,
    RangeStudyConfig, SweepConfig, SUMMARY_FIELDS,
};
use clawsched::formats::{
    attribution_csv, attribution_rows, edge_list, read_input, to_json, write_text, ClawFreeFile, ConflictGraphFile, Input,
    NetworkFile, ScheduleFile,
};
use clawsched::{CliError, CliResult};
use clawsched_core::clawfree::{make_claw_free_with, TieBreak};
use clawsched_core::conflict::build_conflict_graph;
use clawsched_core::net::random_network;
use clawsched_core::rng::rng_from_seed;
use clawsched_core::schedule::{
    claw_broken_schedule, derive_claw_partition, exact_mwis, greedy_maximal_is, mixed_schedule, MixedOptions, DEFAULT_BUDGET,
};
use clawsched_core::topology::{
    diamond_network, line_network, random_diamond_spec, random_line_spec, random_tree_spec, tree_network, DiamondSpec, LineSpec,
    TreeSpec, TreeVariant,
};
use clawsched_core::{
    count_claws, list_claws, ClawReport, ConflictGraph, Network, Partition, RuleSet, ScenarioRules, TransceiverId,
};

#[derive(Parser)]
#[command(
    name = "clawsched",
    version,
    about = "Broadcast conflict graphs, claw elimination and one-slot scheduling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output directory; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    /// `p n m` / `e u v` edge list (build-graph only).
    Edges,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Line,
    Tree,
    Diamond,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    ScenarioIi,
    FullDuplex,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Exact,
    Greedy,
    ClawBroken,
    Mixed,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Experiment {
    RangeStudy,
    Sweep,
}

#[derive(Subcommand)]
enum Command {
    /// Write a network JSON file.
    Generate {
        #[arg(long, value_enum)]
        family: Family,
        /// Line gaps, comma separated (line family).
        #[arg(long, value_delimiter = ',')]
        spacings: Option<Vec<f64>>,
        /// Children of the first node per level (tree family).
        #[arg(long, value_delimiter = ',')]
        spine: Option<Vec<usize>>,
        /// Checkpoint widths (diamond family).
        #[arg(long, value_delimiter = ',')]
        widths: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value_t = Variant::ScenarioIi)]
        variant: Variant,
        /// Node count (random) or maximum node count (random line).
        #[arg(long, default_value_t = 10)]
        nodes: usize,
        #[arg(long, default_value_t = 10.0)]
        side: f64,
        #[arg(long, default_value_t = 7.0)]
        range: f64,
        /// Maximum levels (tree) or checkpoints (diamond) when sampling.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Build the conflict graph of a network file.
    BuildGraph {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Count and list claws; attribution per transceiver.
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Make the conflict graph claw-free by edge insertion.
    BreakClaws {
        input: PathBuf,
        /// Keep the per-iteration trace.
        #[arg(long)]
        trace: bool,
        /// Break ties by lowest edge instead of seeded uniform choice.
        #[arg(long)]
        lowest: bool,
        #[command(flatten)]
        common: Common,
    },
    Schedule {
        #[arg(value_enum)]
        algorithm: Algorithm,
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Mixed: transceivers of the greedy part; default is every claw participant.
        #[arg(long, value_delimiter = ',')]
        t1: Option<Vec<TransceiverId>>,
        /// Mixed: refill the cleaned union to a maximal set.
        #[arg(long)]
        augment: bool,
        #[command(flatten)]
        common: Common,
    },
    Experiment {
        #[arg(value_enum)]
        kind: Experiment,
        /// Campaign JSON; command-line flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        side: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        ranges: Option<Vec<f64>>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        no_exact: bool,
        #[arg(long)]
        mixed: bool,
        /// Sweep grouping: `range`, `claws:<width>` or `neighbors:<width>`.
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Accepted for symmetry with the other subcommands.
        #[arg(long)]
        trace: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

/// Writes to `<out>/<name>` or stdout.
fn emit(out: &Option<PathBuf>, name: &str, text: &str) -> CliResult<()> {
    match out {
        Some(dir) => write_text(&dir.join(name), text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

fn load_graph(path: &Path) -> CliResult<(Option<Network>, ConflictGraph)> {
    Ok(match read_input(path)? {
        Input::Network(net) => {
            let cg = build_conflict_graph(&net)?;
            (Some(net), cg)
        }
        Input::Graph(cg) => (None, cg),
    })
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Generate {
            family,
            spacings,
            spine,
            widths,
            variant,
            nodes,
            side,
            range,
            depth,
            common,
        } => {
            let mut rng = rng_from_seed(common.seed);
            let variant = match variant {
                Variant::ScenarioIi => TreeVariant::ScenarioII,
                Variant::FullDuplex => TreeVariant::FullDuplex,
            };
            let net = match family {
                Family::Line => {
                    let spec = match spacings {
                        Some(s) => LineSpec::from_spacings(s, range)?,
                        None => random_line_spec(&mut rng, nodes, range),
                    };
                    line_network(&spec)?
                }
                Family::Tree => {
                    let spec = match spine {
                        Some(s) => TreeSpec::spine(&s, variant),
                        None => random_tree_spec(&mut rng, depth, variant),
                    };
                    tree_network(&spec)?
                }
                Family::Diamond => {
                    let spec = match widths {
                        Some(w) => DiamondSpec::regular(&w)?,
                        None => random_diamond_spec(&mut rng, depth),
                    };
                    diamond_network(&spec)?
                }
                Family::Random => random_network(
                    nodes,
                    side,
                    range,
                    ScenarioRules::new(RuleSet::DirectionalProtocol),
                    common.seed,
                )?,
            };
            emit(&common.out, "network.json", &to_json(&NetworkFile::from_network(&net))?)
        }
        Command::BuildGraph { input, common } => {
            let (_, cg) = load_graph(&input)?;
            match common.format {
                Format::Edges => emit(&common.out, "conflict_graph.txt", &edge_list(&cg)),
                Format::Json => emit(
                    &common.out,
                    "conflict_graph.json",
                    &to_json(&ConflictGraphFile::from_graph(&cg))?,
                ),
                Format::Csv => Err(CliError::Invalid("build-graph writes json or edges".into())),
            }
        }
        Command::Analyze { input, common } => {
            let (net, cg) = load_graph(&input)?;
            let report = match &net {
                Some(net) => ClawReport::new(&cg, net),
                None => {
                    let claws = list_claws(&cg);
                    ClawReport {
                        count: claws.len() as u64,
                        claws,
                        attribution: Default::default(),
                    }
                }
            };
            match (common.format, &net) {
                (Format::Csv, Some(net)) => emit(
                    &common.out,
                    "attribution.csv",
                    &attribution_csv(&attribution_rows(&report, net))?,
                ),
                (Format::Csv, None) => Err(CliError::Invalid("attribution CSV needs a network file".into())),
                _ => emit(&common.out, "claws.json", &to_json(&report)?),
            }
        }
        Command::BreakClaws {
            input,
            trace,
            lowest,
            common,
        } => {
            let (_, cg) = load_graph(&input)?;
            let tie = if lowest {
                TieBreak::Lowest
            } else {
                TieBreak::Random(common.seed)
            };
            let before = count_claws(&cg);
            let result = make_claw_free_with(&cg, tie, trace)?;
            emit(&common.out, "claw_free.json", &to_json(&ClawFreeFile::new(before, &result))?)?;
            if common.out.is_some() {
                let freed = cg.with_graph(result.final_graph)?;
                emit(
                    &common.out,
                    "claw_free_graph.json",
                    &to_json(&ConflictGraphFile::from_graph(&freed))?,
                )?;
            }
            Ok(())
        }
        Command::Schedule {
            algorithm,
            input,
            budget,
            t1,
            augment,
            common,
        } => {
            let (net, cg) = load_graph(&input)?;
            let file = match algorithm {
                Algorithm::Exact => ScheduleFile::new("exact", &cg, &exact_mwis(&cg, budget)?),
                Algorithm::Greedy => ScheduleFile::new("greedy", &cg, &greedy_maximal_is(&cg)),
                Algorithm::ClawBroken => {
                    let (set, freed) = claw_broken_schedule(&cg, common.seed, budget)?;
                    ScheduleFile {
                        added_edges: Some(freed.added_edges.len()),
                        ..ScheduleFile::new("claw-broken", &cg, &set)
                    }
                }
                Algorithm::Mixed => {
                    let net = net.ok_or_else(|| CliError::Invalid("mixed scheduling needs a network file".into()))?;
                    let p = match t1 {
                        Some(ids) => Partition::new(&net, ids.into_iter().collect::<BTreeSet<_>>())?,
                        None => derive_claw_partition(&cg, &net),
                    };
                    ScheduleFile::mixed(&cg, &mixed_schedule(&cg, &p, MixedOptions { budget, augment })?)
                }
            };
            emit(&common.out, "schedule.json", &to_json(&file)?)
        }
        Command::Experiment {
            kind,
            config,
            n,
            side,
            ranges,
            trials,
            seed,
            jobs,
            budget,
            no_exact,
            mixed,
            group,
            out,
            format,
            trace: _,
        } => {
            let file: serde_json::Value = match &config {
                Some(p) => serde_json::from_str(&clawsched::formats::read_text(p)?)?,
                None => serde_json::Value::Object(Default::default()),
            };
            let opt = |key: &str| file.get(key).cloned();
            let jobs = jobs.or(opt("jobs").and_then(|v| v.as_u64()).map(|j| j as usize));
            let out = out.or(opt("out").and_then(|v| v.as_str().map(PathBuf::from)));
            let format = match format {
                Some(f) => f,
                None => match opt("format").as_ref().and_then(|v| v.as_str()) {
                    Some("json") => Format::Json,
                    Some("csv") | None => Format::Csv,
                    Some(other) => return Err(CliError::Invalid(format!("unknown format {other:?}"))),
                },
            };
            let group = group.or(opt("group").and_then(|v| v.as_str().map(String::from)));
            let (records, timings, rows, grouping) = match kind {
                Experiment::RangeStudy => {
                    let mut cfg: RangeStudyConfig = serde_json::from_value(file.clone())?;
                    cfg.n = n.unwrap_or(cfg.n);
                    cfg.side = side.unwrap_or(cfg.side);
                    cfg.ranges = ranges.unwrap_or(cfg.ranges);
                    cfg.trials = trials.unwrap_or(cfg.trials);
                    cfg.seed = seed.unwrap_or(cfg.seed);
                    let (campaign, rows) = run_range_study(&cfg, jobs)?;
                    (campaign.records, campaign.timings, rows, Grouping::Range)
                }
                Experiment::Sweep => {
                    let mut cfg: SweepConfig = serde_json::from_value(file.clone())?;
                    cfg.n = n.unwrap_or(cfg.n);
                    cfg.side = side.unwrap_or(cfg.side);
                    cfg.ranges = ranges.unwrap_or(cfg.ranges);
                    cfg.trials = trials.unwrap_or(cfg.trials);
                    cfg.seed = seed.unwrap_or(cfg.seed);
                    cfg.budget = budget.unwrap_or(cfg.budget);
                    cfg.with_exact &= !no_exact;
                    cfg.with_mixed |= mixed;
                    let grouping = parse_grouping(group.as_deref().unwrap_or("claws:10"))?;
                    let campaign = run_performance_sweep(&cfg, jobs)?;
                    let rows = summarize(&campaign.records, grouping);
                    (campaign.records, campaign.timings, rows, grouping)
                }
            };
            match &out {
                Some(dir) => {
                    emit_csv(&dir.join("trials.csv"), &records)?;
                    emit_timings(&dir.join("timings.csv"), &timings)?;
                    emit_summary(&dir.join("summary.csv"), &rows)?;
                    if format == Format::Json {
                        write_text(&dir.join("summary.json"), &to_json(&rows)?)?;
                    }
                    emit_plot_script(&dir.join("plot.txt"), "summary.csv", grouping, &rows)
                }
                None => match format {
                    Format::Json => emit(&None, "", &to_json(&rows)?),
                    _ => emit(&None, "", &to_csv(&rows, SUMMARY_FIELDS)?),
                },
            }
        }
    }
}

fn parse_grouping(s: &str) -> CliResult<Grouping> {
    let bad = || CliError::Invalid(format!("bad grouping {s:?}; use range, claws:<width> or neighbors:<width>"));
    match s.split_once(':') {
        None if s == "range" => Ok(Grouping::Range),
        Some(("claws", w)) => Ok(Grouping::ClawCount {
            width: w.parse().ok().filter(|&w| w > 0).ok_or_else(bad)?,
        }),
        Some(("neighbors", w)) => Ok(Grouping::MeanNeighbors {
            width: w.parse().ok().filter(|&w: &f64| w > 0.0).ok_or_else(bad)?,
        }),
        _ => Err(bad()),
    }
}
