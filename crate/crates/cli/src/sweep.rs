//! Seeded experiment sweeps over (n, density) grids.
//!
//! Every (cell, trial) derives its own instance seed from the master seed
//! through a splitmix chain, so trials can execute in any order or in
//! parallel; rows are written in job order regardless of scheduling and the
//! output is byte-identical for a fixed config.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::mpsc;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use xorgeo::hypergraph::{gen_hnm, gen_hnp};
use xorgeo::seed::trial_seed;
use xorgeo::theory::{critical_density, ThresholdProfile};

use crate::measure::{measure_instance, MeasureOpts, ResultRow};

pub const SCHEMA_VERSION: &str = "xorgeo-sweep-1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// Exactly m = round(density * n) distinct edges.
    Hnm,
    /// Independent edges at p = c/n^(k-1) with c = density * k!.
    Hnp,
}

impl std::str::FromStr for Model {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hnm" => Ok(Model::Hnm),
            "hnp" => Ok(Model::Hnp),
            other => bail!("unknown model: {other} (expected hnm or hnp)"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

impl std::str::FromStr for OutputFormat {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" => Ok(OutputFormat::Jsonl),
            other => bail!("unknown format: {other} (expected csv or jsonl)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub k: usize,
    pub r: u32,
    pub n_values: Vec<usize>,
    /// Edge densities m/n; the Poisson density is c = m/n * k!.
    pub densities: Vec<f64>,
    pub model: Model,
    pub trials: u32,
    pub seed: u64,
    pub rank_cap: usize,
    pub oracle_max_n: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            bail!("k must be at least 2");
        }
        if self.r < 2 {
            bail!("r must be at least 2");
        }
        if self.n_values.is_empty() {
            bail!("empty n grid");
        }
        if self.densities.is_empty() {
            bail!("empty density grid");
        }
        if self.densities.iter().any(|&d| d <= 0.0 || !d.is_finite()) {
            bail!("densities must be positive");
        }
        if self.trials == 0 {
            bail!("trials must be at least 1");
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct SchemaHeader<'a> {
    schema: &'a str,
    k: usize,
    r: u32,
    model: &'a str,
    trials: u32,
    seed: u64,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Executes the sweep, streaming rows to `out` in deterministic job order.
/// Returns the row count.
pub fn run_sweep<W: Write>(cfg: &ExperimentConfig, out: W, format: OutputFormat) -> Result<u64> {
    cfg.validate()?;
    let kf = factorial(cfg.k);

    struct Job {
        idx: usize,
        n: usize,
        mn: f64,
        trial: u32,
    }
    let mut jobs = Vec::new();
    for &n in &cfg.n_values {
        for &mn in &cfg.densities {
            for trial in 0..cfg.trials {
                jobs.push(Job { idx: jobs.len(), n, mn, trial });
            }
        }
    }

    // Theory profiles once per density (they do not depend on n).
    let mut profiles: BTreeMap<u64, Option<ThresholdProfile>> = BTreeMap::new();
    let (c_star, _) = critical_density(cfg.k as u32, cfg.r);
    for &mn in &cfg.densities {
        let c = mn * kf;
        profiles.entry(mn.to_bits()).or_insert_with(|| {
            if c > c_star {
                ThresholdProfile::new(cfg.k as u32, cfg.r, c).ok()
            } else {
                None
            }
        });
    }

    let opts = MeasureOpts { r: cfg.r, rank_cap: cfg.rank_cap, oracle_max_n: cfg.oracle_max_n };
    let run_job = |job: &Job| -> ResultRow {
        let c = job.mn * kf;
        let tseed = trial_seed(cfg.seed, job.n as u64, job.mn.to_bits(), job.trial as u64);
        let h = match cfg.model {
            Model::Hnm => {
                let m = (job.mn * job.n as f64).round() as usize;
                gen_hnm(job.n, m, cfg.k, tseed).expect("grid within edge bounds")
            }
            Model::Hnp => gen_hnp(job.n, c, cfg.k, tseed),
        };
        let profile = profiles[&job.mn.to_bits()].as_ref();
        measure_instance(&h, c, job.trial, tseed, profile, &opts)
    };

    let mut writer = RowWriter::new(out, format, cfg)?;
    let (tx, rx) = mpsc::channel::<(usize, ResultRow)>();
    let total = jobs.len();
    std::thread::scope(|scope| -> Result<()> {
        let producer = scope.spawn(move || {
            use rayon::prelude::*;
            jobs.par_iter().for_each_with(tx, |tx, job| {
                let row = run_job(job);
                // Receiver hangup only on writer error; workers just stop.
                let _ = tx.send((job.idx, row));
            });
        });
        // Reorder buffer: emit rows in job order as they complete.
        let mut pending: BTreeMap<usize, ResultRow> = BTreeMap::new();
        let mut next = 0usize;
        while next < total {
            let (idx, row) = rx.recv().context("worker pool terminated early")?;
            pending.insert(idx, row);
            while let Some(row) = pending.remove(&next) {
                writer.write_row(&row)?;
                next += 1;
            }
        }
        producer.join().ok();
        Ok(())
    })?;
    writer.finish()?;
    Ok(total as u64)
}

enum RowWriter<W: Write> {
    Csv(csv::Writer<W>),
    Jsonl(W),
}

impl<W: Write> RowWriter<W> {
    fn new(mut out: W, format: OutputFormat, cfg: &ExperimentConfig) -> Result<Self> {
        let model = match cfg.model {
            Model::Hnm => "hnm",
            Model::Hnp => "hnp",
        };
        match format {
            OutputFormat::Csv => {
                writeln!(
                    out,
                    "# schema {SCHEMA_VERSION} k={} r={} model={model} trials={} seed={}",
                    cfg.k, cfg.r, cfg.trials, cfg.seed
                )?;
                let mut w = csv::Writer::from_writer(out);
                w.write_record(ResultRow::csv_header())?;
                Ok(RowWriter::Csv(w))
            }
            OutputFormat::Jsonl => {
                let header = SchemaHeader {
                    schema: SCHEMA_VERSION,
                    k: cfg.k,
                    r: cfg.r,
                    model,
                    trials: cfg.trials,
                    seed: cfg.seed,
                };
                serde_json::to_writer(&mut out, &header)?;
                writeln!(out)?;
                Ok(RowWriter::Jsonl(out))
            }
        }
    }

    fn write_row(&mut self, row: &ResultRow) -> Result<()> {
        match self {
            RowWriter::Csv(w) => {
                w.write_record(row.to_csv_record())?;
                w.flush()?;
            }
            RowWriter::Jsonl(out) => {
                serde_json::to_writer(&mut *out, row)?;
                writeln!(out)?;
                out.flush()?;
            }
        }
        Ok(())
    }

    fn finish(self) -> Result<()> {
        match self {
            RowWriter::Csv(mut w) => Ok(w.flush()?),
            RowWriter::Jsonl(mut out) => Ok(out.flush()?),
        }
    }
}

/// Parses a grid argument: comma-separated items, each a plain number or an
/// inclusive `lo:hi:step` range.
pub fn parse_grid_f64(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in s.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        if let Some((lo, rest)) = item.split_once(':') {
            let (hi, step) = rest
                .split_once(':')
                .with_context(|| format!("range must be lo:hi:step, got {item}"))?;
            let lo: f64 = lo.parse()?;
            let hi: f64 = hi.parse()?;
            let step: f64 = step.parse()?;
            if step <= 0.0 {
                bail!("range step must be positive: {item}");
            }
            let mut x = lo;
            while x <= hi + 1e-12 {
                out.push((x * 1e12).round() / 1e12);
                x += step;
            }
        } else {
            out.push(item.parse()?);
        }
    }
    Ok(out)
}

pub fn parse_grid_usize(s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in s.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        if let Some((lo, rest)) = item.split_once(':') {
            let (hi, step) = rest
                .split_once(':')
                .with_context(|| format!("range must be lo:hi:step, got {item}"))?;
            let lo: usize = lo.parse()?;
            let hi: usize = hi.parse()?;
            let step: usize = step.parse()?;
            if step == 0 {
                bail!("range step must be positive: {item}");
            }
            let mut x = lo;
            while x <= hi {
                out.push(x);
                x += step;
            }
        } else {
            out.push(item.parse()?);
        }
    }
    Ok(out)
}
