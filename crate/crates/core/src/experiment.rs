//! Weight-range sweeps.
//!
//! A sweep runs every `(method, range, seed)` cell for a number of epochs.
//! Each epoch redraws the plastic weights, simulates, and scores the merged
//! output population against the merged input population with both
//! Victor-Purpura and van Rossum distances.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::path::Path;

use crate::engine::{simulate, Plasticity};
use crate::error::{Error, Result};
use crate::metrics::{van_rossum_times, victor_purpura_times, VpCost, VrKernel};
use crate::neuron::LifParams;
use crate::par;
use crate::plasticity::StdpParams;
use crate::seed::{hash64, tag};
use crate::spike_train::merge_population;
use crate::stimulus::StimulusSpec;
use crate::topology::{build_layered, build_lsm, reassign_interlayer_weights, LsmSpec, NetworkTopology};
use crate::weight_init::{InitMethod, WeightRange};

pub const RECORDS_HEADER: &str = "run_id,seed,method,w_low,w_high,epoch,vp,vr";
pub const SUMMARY_HEADER: &str = "method,w_low,w_high,vp_min,vp_mean,vp_std,vr_min,vr_mean,vr_std";

#[derive(Debug, Clone, PartialEq)]
pub enum TopologySelector {
    Layered(Vec<usize>),
    Lsm(LsmSpec),
}

impl TopologySelector {
    pub fn build(
        &self,
        lif: &LifParams,
        init: &InitMethod,
        range: WeightRange,
        liquid_seed: u64,
        epoch_seed: u64,
    ) -> Result<NetworkTopology> {
        match self {
            TopologySelector::Layered(sizes) => build_layered(sizes, lif, init, range, epoch_seed),
            TopologySelector::Lsm(spec) => build_lsm(spec, lif, init, range, liquid_seed, epoch_seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub topology: TopologySelector,
    pub lif: LifParams,
    pub ranges: Vec<WeightRange>,
    pub methods: Vec<InitMethod>,
    pub epochs: usize,
    pub seeds: Vec<u64>,
    /// Simulated time per epoch (ms).
    pub duration: f64,
    /// Integration step (ms).
    pub dt: f64,
    pub stimulus: StimulusSpec,
    /// STDP rule; `w_ceiling` is replaced per cell when `stdp_ceiling` is `None`.
    pub stdp: StdpParams,
    /// Fixed weight ceiling; `None` means twice the cell's upper weight bound.
    pub stdp_ceiling: Option<f64>,
    pub vp: VpCost,
    pub vr: VrKernel,
    pub plasticity_on: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            topology: TopologySelector::Lsm(LsmSpec::default()),
            lif: LifParams::default(),
            ranges: [(1.0, 10.0), (1.0, 20.0), (1.0, 50.0), (1.0, 100.0)]
                .iter()
                .map(|&(lo, hi)| WeightRange { low: lo, high: hi })
                .collect(),
            methods: vec![
                InitMethod::UniformRandom,
                InitMethod::BarabasiAlbert { n: None, m: crate::weight_init::DEFAULT_BA_M },
                InitMethod::ErdosRenyi { n: None, p: None },
            ],
            epochs: 30,
            seeds: (0..20).collect(),
            duration: 1000.0,
            dt: 0.1,
            stimulus: StimulusSpec::default(),
            stdp: StdpParams::default(),
            stdp_ceiling: None,
            vp: VpCost::default(),
            vr: VrKernel::default(),
            plasticity_on: true,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::InvalidParams("epochs must be at least 1".into()));
        }
        if self.ranges.is_empty() || self.methods.is_empty() || self.seeds.is_empty() {
            return Err(Error::InvalidParams(
                "a sweep needs at least one range, method and seed".into(),
            ));
        }
        for r in &self.ranges {
            r.validate()?;
        }
        for m in &self.methods {
            m.validate()?;
        }
        self.lif.validate()?;
        self.stimulus.validate()?;
        VpCost::new(self.vp.q)?;
        VrKernel::new(self.vr.tau)?;
        if !(self.duration.is_finite() && self.duration > 0.0 && self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidParams("duration and dt must be positive".into()));
        }
        self.stdp_for(self.ranges[0]).validate()
    }

    /// STDP parameters used inside a cell with weight range `range`.
    pub fn stdp_for(&self, range: WeightRange) -> StdpParams {
        StdpParams {
            w_ceiling: self.stdp_ceiling.unwrap_or(2.0 * range.high),
            ..self.stdp
        }
    }

    pub fn record_count(&self) -> usize {
        self.methods.len() * self.ranges.len() * self.seeds.len() * self.epochs
    }

    fn plasticity(&self, range: WeightRange) -> Plasticity {
        if self.plasticity_on {
            Plasticity::On(self.stdp_for(range))
        } else {
            Plasticity::Off
        }
    }
}

/// Seed for one epoch of one cell.
pub fn epoch_seed(seed: u64, epoch: usize, method: &InitMethod, range: WeightRange) -> u64 {
    hash64(&[
        seed,
        epoch as u64,
        tag(method.name()),
        range.low.to_bits(),
        range.high.to_bits(),
    ])
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub run_id: u64,
    pub seed: u64,
    pub method: String,
    pub w_low: f64,
    pub w_high: f64,
    pub epoch: usize,
    pub vp: f64,
    pub vr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellFailure {
    pub method: String,
    pub range: WeightRange,
    pub seed: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepOutcome {
    pub records: Vec<SweepRecord>,
    pub failures: Vec<CellFailure>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    /// Cells fan out over [`par::map`] (rayon when the `parallel` feature is on).
    Parallel,
    Sequential,
}

struct Cell {
    index: usize,
    method: InitMethod,
    range: WeightRange,
    seed: u64,
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutcome> {
    run_sweep_with(config, Execution::Parallel)
}

pub fn run_sweep_with(config: &SweepConfig, execution: Execution) -> Result<SweepOutcome> {
    config.validate()?;
    let mut cells = Vec::new();
    for method in &config.methods {
        for &range in &config.ranges {
            for &seed in &config.seeds {
                cells.push(Cell {
                    index: cells.len(),
                    method: *method,
                    range,
                    seed,
                });
            }
        }
    }
    let run = |cell: &Cell| run_cell(config, cell);
    let results = match execution {
        Execution::Parallel => par::map(&cells, run),
        Execution::Sequential => par::map_sequential(&cells, run),
    };
    let mut outcome = SweepOutcome::default();
    for (cell, result) in cells.iter().zip(results) {
        match result {
            Ok(mut recs) => outcome.records.append(&mut recs),
            Err(e) => {
                log::error!(
                    "cell {} range {} seed {} failed: {e}",
                    cell.method.name(),
                    cell.range,
                    cell.seed
                );
                outcome.failures.push(CellFailure {
                    method: cell.method.name().to_string(),
                    range: cell.range,
                    seed: cell.seed,
                    message: e.to_string(),
                });
            }
        }
    }
    sort_records(&mut outcome.records);
    Ok(outcome)
}

fn run_cell(config: &SweepConfig, cell: &Cell) -> Result<Vec<SweepRecord>> {
    let base = config.topology.build(
        &config.lif,
        &cell.method,
        cell.range,
        cell.seed,
        epoch_seed(cell.seed, 0, &cell.method, cell.range),
    )?;
    let plasticity = config.plasticity(cell.range);
    let mut out = Vec::with_capacity(config.epochs);
    for epoch in 0..config.epochs {
        let topo = if epoch == 0 {
            base.clone()
        } else {
            reassign_interlayer_weights(
                &base,
                &cell.method,
                cell.range,
                epoch_seed(cell.seed, epoch, &cell.method, cell.range),
            )?
        };
        let (vp, vr) = score_run(&topo, config, cell.seed, plasticity)?;
        out.push(SweepRecord {
            run_id: (cell.index * config.epochs + epoch) as u64,
            seed: cell.seed,
            method: cell.method.name().to_string(),
            w_low: cell.range.low,
            w_high: cell.range.high,
            epoch,
            vp,
            vr,
        });
    }
    Ok(out)
}

/// Simulates one network and returns `(vp, vr)` between the merged input
/// and merged output populations.
pub fn score_run(
    topology: &NetworkTopology,
    config: &SweepConfig,
    seed: u64,
    plasticity: Plasticity,
) -> Result<(f64, f64)> {
    let result = simulate(topology, &config.stimulus, config.duration, config.dt, seed, plasticity)?;
    let input = merge_population(result.trains(&topology.input_ids));
    let output = merge_population(result.trains(&topology.output_ids));
    Ok((
        victor_purpura_times(&input, &output, config.vp.q),
        van_rossum_times(&input, &output, config.vr.tau),
    ))
}

fn record_order(a: &SweepRecord, b: &SweepRecord) -> Ordering {
    a.method
        .cmp(&b.method)
        .then(a.w_low.total_cmp(&b.w_low))
        .then(a.seed.cmp(&b.seed))
        .then(a.epoch.cmp(&b.epoch))
        .then(a.w_high.total_cmp(&b.w_high))
}

/// Sorts by `(method, w_low, seed, epoch)`, then `w_high` for ranges that
/// share a lower bound.
pub fn sort_records(records: &mut [SweepRecord]) {
    records.sort_by(record_order);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Vp,
    Vr,
}

impl Which {
    pub fn of(self, r: &SweepRecord) -> f64 {
        match self {
            Which::Vp => r.vp,
            Which::Vr => r.vr,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Which::Vp => "vp",
            Which::Vr => "vr",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub min: f64,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Stats {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Stats {
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            mean,
            std: var.sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub method: String,
    pub range: WeightRange,
    pub count: usize,
    pub vp: Stats,
    pub vr: Stats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodBest {
    pub method: String,
    /// Range with the lowest minimum VP.
    pub vp_range: WeightRange,
    /// Range with the lowest minimum VR.
    pub vr_range: WeightRange,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    /// One row per `(method, range)`, ordered by method then range.
    pub rows: Vec<SummaryRow>,
    pub best: Vec<MethodBest>,
}

impl Summary {
    pub fn row(&self, method: &str, range: WeightRange) -> Option<&SummaryRow> {
        self.rows.iter().find(|r| r.method == method && r.range == range)
    }
}

fn range_order(a: &WeightRange, b: &WeightRange) -> Ordering {
    a.low.total_cmp(&b.low).then(a.high.total_cmp(&b.high))
}

/// Range with the smallest value; ties go to the lower range.
pub fn argmin_range(candidates: impl IntoIterator<Item = (WeightRange, f64)>) -> Option<WeightRange> {
    let mut all: Vec<(WeightRange, f64)> = candidates.into_iter().collect();
    all.sort_by(|a, b| range_order(&a.0, &b.0));
    all.into_iter()
        .fold(None, |best: Option<(WeightRange, f64)>, (r, v)| match best {
            Some((_, bv)) if bv <= v => best,
            _ => Some((r, v)),
        })
        .map(|(r, _)| r)
}

/// For each seed, the range whose least distance (over epochs) is smallest
/// among `method`'s records.
pub fn per_seed_argmin(records: &[SweepRecord], method: &str, metric: Which) -> Vec<(u64, WeightRange)> {
    let mut seeds: Vec<u64> = records.iter().filter(|r| r.method == method).map(|r| r.seed).collect();
    seeds.sort_unstable();
    seeds.dedup();
    seeds
        .into_iter()
        .map(|seed| {
            let mut best: Vec<(WeightRange, f64)> = Vec::new();
            for r in records.iter().filter(|r| r.method == method && r.seed == seed) {
                let range = WeightRange { low: r.w_low, high: r.w_high };
                let v = metric.of(r);
                match best.iter_mut().find(|(br, _)| *br == range) {
                    Some((_, bv)) => *bv = bv.min(v),
                    None => best.push((range, v)),
                }
            }
            (seed, argmin_range(best).expect("seed has records"))
        })
        .collect()
}

/// Per-`(method, range)` statistics across seeds and epochs, plus the best
/// range per method by least observed distance.
pub fn summarize(records: &[SweepRecord]) -> Result<Summary> {
    if records.is_empty() {
        return Err(Error::InvalidParams("cannot summarise zero records".into()));
    }
    let mut keys: Vec<(String, WeightRange)> = Vec::new();
    for r in records {
        let key = (r.method.clone(), WeightRange { low: r.w_low, high: r.w_high });
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.sort_by(|a, b| a.0.cmp(&b.0).then(range_order(&a.1, &b.1)));
    let rows: Vec<SummaryRow> = keys
        .into_iter()
        .map(|(method, range)| {
            let group: Vec<&SweepRecord> = records
                .iter()
                .filter(|r| r.method == method && r.w_low == range.low && r.w_high == range.high)
                .collect();
            let vp: Vec<f64> = group.iter().map(|r| r.vp).collect();
            let vr: Vec<f64> = group.iter().map(|r| r.vr).collect();
            SummaryRow {
                method,
                range,
                count: group.len(),
                vp: Stats::of(&vp),
                vr: Stats::of(&vr),
            }
        })
        .collect();
    let mut methods: Vec<&str> = rows.iter().map(|r| r.method.as_str()).collect();
    methods.dedup();
    let best = methods
        .into_iter()
        .map(|m| {
            let mine = || rows.iter().filter(move |r| r.method == m);
            MethodBest {
                method: m.to_string(),
                vp_range: argmin_range(mine().map(|r| (r.range, r.vp.min))).unwrap(),
                vr_range: argmin_range(mine().map(|r| (r.range, r.vr.min))).unwrap(),
            }
        })
        .collect();
    Ok(Summary { rows, best })
}

/// `%g`-style rendering with six significant digits.
pub fn format_sig6(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    // Exponent after rounding to six digits, so 999999.5 lands in the next decade.
    let sci = format!("{:.5e}", v);
    let (mant, e) = sci.split_once('e').unwrap();
    let exp: i32 = e.parse().unwrap();
    if !(-4..6).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{}e{}{:02}", trim_zeros(mant), sign, exp.abs());
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, v)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn records_csv(records: &[SweepRecord]) -> String {
    let mut sorted: Vec<&SweepRecord> = records.iter().collect();
    sorted.sort_by(|a, b| record_order(a, b));
    let mut out = format!("{RECORDS_HEADER}\n");
    for r in sorted {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.run_id,
            r.seed,
            r.method,
            format_sig6(r.w_low),
            format_sig6(r.w_high),
            r.epoch,
            format_sig6(r.vp),
            format_sig6(r.vr)
        );
    }
    out
}

pub fn summary_csv(summary: &Summary) -> String {
    let mut out = format!("{SUMMARY_HEADER}\n");
    for r in &summary.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.method,
            format_sig6(r.range.low),
            format_sig6(r.range.high),
            format_sig6(r.vp.min),
            format_sig6(r.vp.mean),
            format_sig6(r.vp.std),
            format_sig6(r.vr.min),
            format_sig6(r.vr.mean),
            format_sig6(r.vr.std)
        );
    }
    out
}

pub fn write_csv(records: &[SweepRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, records_csv(records)).map_err(|e| Error::io(path, e))
}

pub fn write_summary_csv(summary: &Summary, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, summary_csv(summary)).map_err(|e| Error::io(path, e))
}

pub fn parse_records_csv(text: &str) -> Result<Vec<SweepRecord>> {
    let err = |line: usize, message: String| Error::Parse {
        path: "<records>".into(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == RECORDS_HEADER => {}
        _ => return Err(err(1, format!("expected header `{RECORDS_HEADER}`"))),
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 8 {
                return Err(err(i + 1, format!("expected 8 fields, got {}", f.len())));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| err(i + 1, format!("bad number `{s}`")));
            let int = |s: &str| s.parse::<u64>().map_err(|_| err(i + 1, format!("bad integer `{s}`")));
            Ok(SweepRecord {
                run_id: int(f[0])?,
                seed: int(f[1])?,
                method: f[2].to_string(),
                w_low: num(f[3])?,
                w_high: num(f[4])?,
                epoch: int(f[5])? as usize,
                vp: num(f[6])?,
                vr: num(f[7])?,
            })
        })
        .collect()
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<SweepRecord>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_records_csv(&text)
}
