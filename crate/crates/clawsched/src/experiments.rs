//! Monte-Carlo campaigns over random directional networks.
//!
//! Trial `t` of a campaign draws everything from `stream_rng(seed, t)`, so the
//! trial CSV is byte-identical for any worker count. Wall-clock timings live
//! in a separate CSV.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use clawsched_core::clawfree::make_claw_free;
use clawsched_core::conflict::build_conflict_graph;
use clawsched_core::net::random_network_with;
use clawsched_core::rng::{derive_seed, stream_rng, SimRng};
use clawsched_core::schedule::{
    derive_claw_partition, exact_mwis, exact_mwis_groups, expected_maximal_is, greedy_maximal_is, mixed_schedule, MixedOptions,
    DEFAULT_BUDGET,
};
use clawsched_core::{count_claws, ConflictGraph, Connectivity, Error, Network, RuleSet, ScenarioRules};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::formats::write_text;

/// Cap resamples per trial before the campaign is rejected.
pub const MAX_RESAMPLES: u32 = 100_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub trial: u64,
    pub n: usize,
    pub side: f64,
    pub r_t: f64,
    pub resamples: u32,
    pub transmission_count: usize,
    pub claw_count: u64,
    pub connected: bool,
    pub connected_transmission: bool,
    pub mean_neighbors: f64,
    pub exact_mwis: Option<f64>,
    pub claw_broken: Option<f64>,
    pub greedy_maximal: Option<f64>,
    /// Mean maximal-set weight over uniformly random vertex orders.
    pub expected_maximal: Option<f64>,
    pub mixed: Option<f64>,
    pub added_edge_count: Option<usize>,
}

/// Stage wall times in microseconds; absent stages are zero.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialTiming {
    pub trial: u64,
    pub build_us: u64,
    pub claws_us: u64,
    pub claw_free_us: u64,
    pub claw_broken_us: u64,
    pub exact_us: u64,
    pub greedy_us: u64,
    pub mixed_us: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "by")]
pub enum Grouping {
    Range,
    ClawCount { width: u64 },
    MeanNeighbors { width: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    /// `r_T` for range grouping, else the bucket's lower edge.
    pub key_lo: f64,
    /// Equal to `key_lo` for range grouping; claw buckets are inclusive, neighbor buckets half-open.
    pub key_hi: f64,
    pub trials: usize,
    pub resamples: u64,
    pub mean_claws: f64,
    pub connected_pct: f64,
    pub connected_transmission_pct: f64,
    pub claw_free_pct: f64,
    /// Fraction of all trials both range-connected and claw-free.
    pub connected_and_claw_free: f64,
    pub mean_transmissions: f64,
    pub mean_neighbors: f64,
    pub exact_samples: usize,
    pub mean_ratio_exact: Option<f64>,
    pub mean_ratio_greedy: Option<f64>,
    /// Claw-broken over the random-order maximal-set mean.
    pub mean_ratio_expected: Option<f64>,
    pub mean_ratio_mixed: Option<f64>,
    pub mean_added_edges: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RangeStudyConfig {
    pub n: usize,
    pub side: f64,
    pub ranges: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub neighbor_cap: usize,
}

impl Default for RangeStudyConfig {
    fn default() -> Self {
        RangeStudyConfig {
            n: 10,
            side: 10.0,
            ranges: (7..=14).map(f64::from).collect(),
            trials: 100,
            seed: 1,
            neighbor_cap: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub n: usize,
    pub side: f64,
    /// Each trial picks one uniformly.
    pub ranges: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub neighbor_cap: usize,
    pub with_exact: bool,
    pub with_mixed: bool,
    /// Random orders averaged for `expected_maximal`; zero skips it.
    pub permutations: usize,
    pub budget: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n: 10,
            side: 20.0,
            ranges: vec![10.0, 11.0, 12.0, 13.0],
            trials: 100,
            seed: 1,
            neighbor_cap: 5,
            with_exact: true,
            with_mixed: false,
            permutations: 100,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Campaign {
    pub records: Vec<TrialRecord>,
    pub timings: Vec<TrialTiming>,
}

fn micros(start: Instant) -> u64 {
    start.elapsed().as_micros() as u64
}

/// Draws networks until the neighbor cap holds; returns the resample count.
pub fn sample_network(rng: &mut SimRng, n: usize, side: f64, r: f64, cap: usize) -> CliResult<(Network, ConflictGraph, u32)> {
    let rules = ScenarioRules::new(RuleSet::DirectionalProtocol).with_neighbor_cap(cap);
    for resamples in 0..=MAX_RESAMPLES {
        let net = random_network_with(rng, n, side, r, rules)?;
        match build_conflict_graph(&net) {
            Ok(cg) => return Ok((net, cg, resamples)),
            Err(Error::NeighborCapExceeded { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(CliError::Invalid(format!(
        "no network with n={n}, side={side}, r_T={r} satisfied the neighbor cap in {MAX_RESAMPLES} draws"
    )))
}

fn base_record(seed: u64, trial: u64, side: f64, r: f64, net: &Network, cg: &ConflictGraph, resamples: u32) -> TrialRecord {
    TrialRecord {
        seed,
        trial,
        n: net.len(),
        side,
        r_t: r,
        resamples,
        transmission_count: cg.len(),
        claw_count: count_claws(cg),
        connected: net.is_connected(Connectivity::Range),
        connected_transmission: net.is_connected(Connectivity::Transmission),
        mean_neighbors: net.mean_neighbor_count(),
        exact_mwis: None,
        claw_broken: None,
        greedy_maximal: None,
        expected_maximal: None,
        mixed: None,
        added_edge_count: None,
    }
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match jobs {
        None => Ok(f()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn check_common(n: usize, side: f64, ranges: &[f64], trials: usize) -> CliResult<()> {
    if trials == 0 {
        return Err(CliError::Invalid("trials must be >= 1".into()));
    }
    if n == 0 || !(side.is_finite() && side > 0.0) {
        return Err(CliError::Invalid(format!("need n >= 1 and side > 0 (n={n}, side={side})")));
    }
    if ranges.is_empty() || ranges.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
        return Err(CliError::Invalid("ranges must be a nonempty list of values >= 0".into()));
    }
    Ok(())
}

/// Trials are numbered `range_index * trials + t`.
pub fn run_range_study_trials(cfg: &RangeStudyConfig, jobs: Option<usize>) -> CliResult<Campaign> {
    check_common(cfg.n, cfg.side, &cfg.ranges, cfg.trials)?;
    let total = (cfg.ranges.len() * cfg.trials) as u64;
    let results: Vec<CliResult<(TrialRecord, TrialTiming)>> = with_jobs(jobs, || {
        (0..total)
            .into_par_iter()
            .map(|trial| {
                let r = cfg.ranges[(trial / cfg.trials as u64) as usize];
                let mut rng = stream_rng(cfg.seed, trial);
                let t0 = Instant::now();
                let (net, cg, resamples) = sample_network(&mut rng, cfg.n, cfg.side, r, cfg.neighbor_cap)?;
                let build_us = micros(t0);
                let t1 = Instant::now();
                let rec = base_record(cfg.seed, trial, cfg.side, r, &net, &cg, resamples);
                let timing = TrialTiming {
                    trial,
                    build_us,
                    claws_us: micros(t1),
                    ..Default::default()
                };
                Ok((rec, timing))
            })
            .collect()
    })?;
    collect(results)
}

pub fn run_range_study(cfg: &RangeStudyConfig, jobs: Option<usize>) -> CliResult<(Campaign, Vec<SummaryRow>)> {
    let campaign = run_range_study_trials(cfg, jobs)?;
    let rows = summarize(&campaign.records, Grouping::Range);
    Ok((campaign, rows))
}

fn collect(results: Vec<CliResult<(TrialRecord, TrialTiming)>>) -> CliResult<Campaign> {
    let mut records = Vec::with_capacity(results.len());
    let mut timings = Vec::with_capacity(results.len());
    for r in results {
        let (rec, t) = r?;
        records.push(rec);
        timings.push(t);
    }
    Ok(Campaign { records, timings })
}

fn budget_tolerant<T>(r: clawsched_core::Result<T>) -> CliResult<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::BudgetExceeded(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// One trial: random range, greedy, claw-broken, and optionally exact and mixed.
/// Stages that exceed the budget are recorded as absent.
pub fn run_sweep_trial(cfg: &SweepConfig, trial: u64) -> CliResult<(TrialRecord, TrialTiming)> {
    let mut rng = stream_rng(cfg.seed, trial);
    let r = cfg.ranges[rng.gen_range(0..cfg.ranges.len())];
    let t0 = Instant::now();
    let (net, cg, resamples) = sample_network(&mut rng, cfg.n, cfg.side, r, cfg.neighbor_cap)?;
    let mut timing = TrialTiming {
        trial,
        build_us: micros(t0),
        ..Default::default()
    };
    let t = Instant::now();
    let mut rec = base_record(cfg.seed, trial, cfg.side, r, &net, &cg, resamples);
    timing.claws_us = micros(t);

    let t = Instant::now();
    rec.greedy_maximal = Some(greedy_maximal_is(&cg).weight);
    if cfg.permutations > 0 {
        let mut order_rng = stream_rng(derive_seed(cfg.seed, trial), 1);
        rec.expected_maximal = Some(expected_maximal_is(&cg, cfg.permutations, &mut order_rng).0);
    }
    timing.greedy_us = micros(t);

    let t = Instant::now();
    let freed = make_claw_free(&cg, derive_seed(cfg.seed, trial))?;
    timing.claw_free_us = micros(t);
    rec.added_edge_count = Some(freed.added_edges.len());
    let t = Instant::now();
    let broken = budget_tolerant(exact_mwis_groups(&freed.final_graph, &cg.sender_groups(), cfg.budget))?;
    timing.claw_broken_us = micros(t);
    if let Some(set) = &broken {
        debug_assert!(cg.is_independent(&set.members));
    }
    rec.claw_broken = broken.map(|s| s.weight);

    if cfg.with_exact {
        let t = Instant::now();
        rec.exact_mwis = budget_tolerant(exact_mwis(&cg, cfg.budget))?.map(|s| s.weight);
        timing.exact_us = micros(t);
    }
    if cfg.with_mixed {
        let t = Instant::now();
        let p = derive_claw_partition(&cg, &net);
        let opts = MixedOptions {
            budget: cfg.budget,
            ..MixedOptions::default()
        };
        rec.mixed = budget_tolerant(mixed_schedule(&cg, &p, opts))?.map(|m| m.schedule.weight);
        timing.mixed_us = micros(t);
    }
    Ok((rec, timing))
}

pub fn run_performance_sweep(cfg: &SweepConfig, jobs: Option<usize>) -> CliResult<Campaign> {
    check_common(cfg.n, cfg.side, &cfg.ranges, cfg.trials)?;
    let results = with_jobs(jobs, || {
        (0..cfg.trials as u64)
            .into_par_iter()
            .map(|trial| run_sweep_trial(cfg, trial))
            .collect()
    })?;
    collect(results)
}

/// `a / b`, with `0 / 0 = 1`.
pub fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 && a == 0.0 {
        1.0
    } else {
        a / b
    }
}

/// Ordered grouping key; `(lo, hi)` as reported.
fn group_key(rec: &TrialRecord, grouping: Grouping) -> (i64, f64, f64) {
    match grouping {
        Grouping::Range => ((rec.r_t * 1e6).round() as i64, rec.r_t, rec.r_t),
        Grouping::ClawCount { width } => {
            let w = width.max(1);
            let b = rec.claw_count / w;
            (b as i64, (b * w) as f64, (b * w + w - 1) as f64)
        }
        Grouping::MeanNeighbors { width } => {
            let b = (rec.mean_neighbors / width).floor();
            (b as i64, b * width, (b + 1.0) * width)
        }
    }
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

fn pct(hits: usize, total: usize) -> f64 {
    100.0 * hits as f64 / total as f64
}

/// Aggregates in record order; groups ascending by key.
pub fn summarize(records: &[TrialRecord], grouping: Grouping) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<i64, (f64, f64, Vec<&TrialRecord>)> = BTreeMap::new();
    for rec in records {
        let (k, lo, hi) = group_key(rec, grouping);
        groups.entry(k).or_insert_with(|| (lo, hi, Vec::new())).2.push(rec);
    }
    groups
        .into_values()
        .map(|(key_lo, key_hi, recs)| {
            let total = recs.len();
            let count = |f: &dyn Fn(&TrialRecord) -> bool| recs.iter().filter(|r| f(r)).count();
            let values = |f: &dyn Fn(&TrialRecord) -> Option<f64>| recs.iter().filter_map(|r| f(r)).collect::<Vec<f64>>();
            let vs_exact = values(&|r| Some(ratio(r.claw_broken?, r.exact_mwis?)));
            SummaryRow {
                key_lo,
                key_hi,
                trials: total,
                resamples: recs.iter().map(|r| u64::from(r.resamples)).sum(),
                mean_claws: mean(&values(&|r| Some(r.claw_count as f64))).unwrap(),
                connected_pct: pct(count(&|r| r.connected), total),
                connected_transmission_pct: pct(count(&|r| r.connected_transmission), total),
                claw_free_pct: pct(count(&|r| r.claw_count == 0), total),
                connected_and_claw_free: count(&|r| r.connected && r.claw_count == 0) as f64 / total as f64,
                mean_transmissions: mean(&values(&|r| Some(r.transmission_count as f64))).unwrap(),
                mean_neighbors: mean(&values(&|r| Some(r.mean_neighbors))).unwrap(),
                exact_samples: vs_exact.len(),
                mean_ratio_exact: mean(&vs_exact),
                mean_ratio_greedy: mean(&values(&|r| Some(ratio(r.claw_broken?, r.greedy_maximal?)))),
                mean_ratio_expected: mean(&values(&|r| Some(ratio(r.claw_broken?, r.expected_maximal?)))),
                mean_ratio_mixed: mean(&values(&|r| Some(ratio(r.mixed?, r.exact_mwis?)))),
                mean_added_edges: mean(&values(&|r| r.added_edge_count.map(|a| a as f64))),
            }
        })
        .collect()
}

/// Header row always present, even with no rows.
pub fn to_csv<T: Serialize>(rows: &[T], header: &[&str]) -> CliResult<String> {
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(header)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error().to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn from_csv<T: for<'de> Deserialize<'de>>(text: &str) -> CliResult<Vec<T>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    Ok(r.deserialize().collect::<Result<Vec<T>, _>>()?)
}

pub const TRIAL_FIELDS: &[&str] = &[
    "seed",
    "trial",
    "n",
    "side",
    "r_t",
    "resamples",
    "transmission_count",
    "claw_count",
    "connected",
    "connected_transmission",
    "mean_neighbors",
    "exact_mwis",
    "claw_broken",
    "greedy_maximal",
    "expected_maximal",
    "mixed",
    "added_edge_count",
];

pub const TIMING_FIELDS: &[&str] = &[
    "trial",
    "build_us",
    "claws_us",
    "claw_free_us",
    "claw_broken_us",
    "exact_us",
    "greedy_us",
    "mixed_us",
];

pub const SUMMARY_FIELDS: &[&str] = &[
    "key_lo",
    "key_hi",
    "trials",
    "resamples",
    "mean_claws",
    "connected_pct",
    "connected_transmission_pct",
    "claw_free_pct",
    "connected_and_claw_free",
    "mean_transmissions",
    "mean_neighbors",
    "exact_samples",
    "mean_ratio_exact",
    "mean_ratio_greedy",
    "mean_ratio_expected",
    "mean_ratio_mixed",
    "mean_added_edges",
];

pub fn emit_csv(path: &Path, records: &[TrialRecord]) -> CliResult<()> {
    write_text(path, &to_csv(records, TRIAL_FIELDS)?)
}

pub fn emit_timings(path: &Path, timings: &[TrialTiming]) -> CliResult<()> {
    write_text(path, &to_csv(timings, TIMING_FIELDS)?)
}

pub fn emit_summary(path: &Path, rows: &[SummaryRow]) -> CliResult<()> {
    write_text(path, &to_csv(rows, SUMMARY_FIELDS)?)
}

pub fn read_trials(path: &Path) -> CliResult<Vec<TrialRecord>> {
    from_csv(&crate::formats::read_text(path)?)
}

/// Plotter-agnostic recipe: data file, x column, one series per line.
pub fn plot_script(summary_file: &str, grouping: Grouping, rows: &[SummaryRow]) -> String {
    let x_label = match grouping {
        Grouping::Range => "transmission range r_T",
        Grouping::ClawCount { .. } => "claws in the conflict graph (bucket lower edge)",
        Grouping::MeanNeighbors { .. } => "average neighbors per transceiver (bucket lower edge)",
    };
    let series: &[(&str, &str)] = match grouping {
        Grouping::Range => &[
            ("mean_claws", "average number of claws"),
            ("connected_pct", "connected trials (%)"),
            ("claw_free_pct", "claw-free trials (%)"),
            ("mean_transmissions", "average number of transmissions"),
            ("connected_and_claw_free", "connected and claw-free (fraction)"),
        ],
        _ => &[
            ("mean_ratio_exact", "claw-broken / optimal"),
            ("mean_ratio_greedy", "claw-broken / maximal-set"),
            ("mean_ratio_mixed", "mixed / optimal"),
            ("mean_added_edges", "edges added"),
            ("connected_pct", "connected trials (%)"),
        ],
    };
    let mut s = String::new();
    writeln!(s, "# plot recipe").unwrap();
    writeln!(s, "data: {summary_file}").unwrap();
    writeln!(s, "format: csv, header row, comma separated, empty cell = missing").unwrap();
    writeln!(s, "rows: {}", rows.len()).unwrap();
    writeln!(s, "x: key_lo").unwrap();
    writeln!(s, "x_label: {x_label}").unwrap();
    writeln!(s, "weight_column: trials").unwrap();
    for (col, label) in series {
        writeln!(s, "series: {col} | {label}").unwrap();
    }
    s
}

pub fn emit_plot_script(path: &Path, summary_file: &str, grouping: Grouping, rows: &[SummaryRow]) -> CliResult<()> {
    write_text(path, &plot_script(summary_file, grouping, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_sweep() -> SweepConfig {
        SweepConfig {
            n: 8,
            ranges: vec![8.0, 10.0],
            trials: 12,
            seed: 5,
            with_mixed: true,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn empty_records_give_header_only() {
        let text = to_csv::<TrialRecord>(&[], TRIAL_FIELDS).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert_eq!(text.trim_end(), TRIAL_FIELDS.join(","));
    }

    #[test]
    fn header_matches_fields() {
        let c = run_performance_sweep(&small_sweep(), Some(1)).unwrap();
        let text = to_csv(&c.records, TRIAL_FIELDS).unwrap();
        assert_eq!(text.lines().next().unwrap(), TRIAL_FIELDS.join(","));
        let rows = summarize(&c.records, Grouping::Range);
        let text = to_csv(&rows, SUMMARY_FIELDS).unwrap();
        assert_eq!(text.lines().next().unwrap(), SUMMARY_FIELDS.join(","));
        let text = to_csv(&c.timings, TIMING_FIELDS).unwrap();
        assert_eq!(text.lines().next().unwrap(), TIMING_FIELDS.join(","));
    }

    #[test]
    fn csv_round_trip() {
        let c = run_performance_sweep(&small_sweep(), None).unwrap();
        let text = to_csv(&c.records, TRIAL_FIELDS).unwrap();
        let back: Vec<TrialRecord> = from_csv(&text).unwrap();
        assert_eq!(back, c.records);
    }

    #[test]
    fn sweep_is_independent_of_worker_count() {
        let a = run_performance_sweep(&small_sweep(), Some(1)).unwrap();
        let b = run_performance_sweep(&small_sweep(), Some(4)).unwrap();
        assert_eq!(
            to_csv(&a.records, TRIAL_FIELDS).unwrap(),
            to_csv(&b.records, TRIAL_FIELDS).unwrap()
        );
    }

    #[test]
    fn sweep_weights_are_ordered() {
        let c = run_performance_sweep(&small_sweep(), None).unwrap();
        for r in &c.records {
            let exact = r.exact_mwis.unwrap();
            assert!(r.claw_broken.unwrap() <= exact + 1e-9);
            assert!(r.greedy_maximal.unwrap() <= exact + 1e-9);
            assert!(r.mixed.unwrap() <= exact + 1e-9);
        }
    }

    #[test]
    fn zero_range_rows() {
        let cfg = RangeStudyConfig {
            ranges: vec![0.0],
            trials: 20,
            ..RangeStudyConfig::default()
        };
        let (_, rows) = run_range_study(&cfg, None).unwrap();
        let row = &rows[0];
        assert_eq!(row.mean_transmissions, 0.0);
        assert_eq!(row.mean_claws, 0.0);
        assert_eq!(row.claw_free_pct, 100.0);
        assert_eq!(row.connected_pct, 0.0);
    }

    #[test]
    fn range_study_has_one_row_per_range() {
        let cfg = RangeStudyConfig {
            trials: 5,
            ..RangeStudyConfig::default()
        };
        let (c, rows) = run_range_study(&cfg, None).unwrap();
        assert_eq!(rows.len(), 8);
        assert_eq!(c.records.len(), 40);
        assert!(rows
            .iter()
            .all(|r| (0.0..=100.0).contains(&r.claw_free_pct) && (0.0..=100.0).contains(&r.connected_pct)));
        let (_, again) = run_range_study(&cfg, Some(3)).unwrap();
        assert_eq!(rows, again);
    }

    #[test]
    fn claw_buckets() {
        let mut r = run_performance_sweep(&small_sweep(), None).unwrap().records;
        for (i, rec) in r.iter_mut().enumerate() {
            rec.claw_count = (i * 7) as u64;
        }
        let rows = summarize(&r, Grouping::ClawCount { width: 10 });
        assert_eq!(rows[0].key_lo, 0.0);
        assert_eq!(rows[0].key_hi, 9.0);
        assert_eq!(rows[0].trials, 2);
        assert_eq!(rows.iter().map(|x| x.trials).sum::<usize>(), r.len());
    }

    #[test]
    fn rejects_bad_configs() {
        let cfg = RangeStudyConfig {
            trials: 0,
            ..RangeStudyConfig::default()
        };
        assert!(matches!(run_range_study(&cfg, None), Err(CliError::Invalid(_))));
    }
}
