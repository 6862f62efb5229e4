use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use xorgeo::cluster::{build_cluster_structure, cluster_count, cluster_walk, frozen_variables};
use xorgeo::flip::find_core_flippable_cycles;
use xorgeo::gf2::BitAssignment;
use xorgeo::hypergraph::{
    gen_configuration, gen_hnm, gen_hnp, read_instance, write_instance, DegreeSequence,
};
use xorgeo::peel::{build_digraph, r_core, reach_stats};
use xorgeo::theory::{critical_density, sat_threshold_estimate, ThresholdProfile};

use xorgeo_cli::sweep::{parse_grid_f64, parse_grid_usize};
use xorgeo_cli::{run_oracle_suite, run_sweep, ExperimentConfig, OutputFormat};

/// Random k-XOR-SAT instances and the geometry of their solution spaces.
#[derive(Parser)]
#[command(name = "xorgeo", version, about)]
struct Cli {
    /// Master seed for all randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format for tabular results.
    #[arg(long, global = true, default_value = "jsonl")]
    format: String,
    /// Output path (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance in the `p xnf` text format.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Exact edge count (H(n,m) model).
        #[arg(long, conflicts_with_all = ["mn", "c", "deg"])]
        m: Option<usize>,
        /// Edge density m/n; H(n,m) with m = round(mn * n).
        #[arg(long, conflicts_with_all = ["c", "deg"])]
        mn: Option<f64>,
        /// Poisson density; H(n,p) with p = c / n^(k-1).
        #[arg(long, conflicts_with = "deg")]
        c: Option<f64>,
        /// Regular configuration model with this degree.
        #[arg(long)]
        deg: Option<u32>,
        /// Resample the configuration model until simple.
        #[arg(long, default_value_t = false)]
        simple: bool,
    },
    /// Peel to the r-core and report stripping statistics.
    Peel {
        /// Instance file (`-` for stdin).
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 2)]
        r: u32,
    },
    /// Core flippable cycles of the 2-core.
    Cycles {
        #[arg(long)]
        input: String,
    },
    /// Cluster decomposition summary.
    Clusters {
        #[arg(long)]
        input: String,
        /// Skip exact cluster counting above this core size.
        #[arg(long, default_value_t = 4096)]
        rank_cap: usize,
    },
    /// Walk between two solutions of one cluster.
    Walk {
        #[arg(long)]
        input: String,
        /// File holding the start solution as a 0/1 string.
        #[arg(long)]
        from: PathBuf,
        /// File holding the end solution as a 0/1 string.
        #[arg(long)]
        to: PathBuf,
    },
    /// Threshold profile for (k, r) and optionally a density c.
    Thresholds {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 2)]
        r: u32,
        /// Poisson density c (use --mn for m/n units).
        #[arg(long)]
        c: Option<f64>,
        /// Edge density m/n (converted via c = mn * k!).
        #[arg(long, conflicts_with = "c")]
        mn: Option<f64>,
    },
    /// Seeded measurement sweep over an (n, density) grid.
    Sweep {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        r: u32,
        /// n grid: comma list and/or lo:hi:step ranges.
        #[arg(long)]
        n: String,
        /// Density grid in m/n units.
        #[arg(long, conflicts_with = "c")]
        mn: Option<String>,
        /// Density grid in Poisson-c units.
        #[arg(long)]
        c: Option<String>,
        #[arg(long, default_value_t = 1)]
        trials: u32,
        /// hnm (exact edge count) or hnp (independent edges).
        #[arg(long, default_value = "hnm")]
        model: String,
        #[arg(long, default_value_t = 4096)]
        rank_cap: usize,
        /// Attach brute-force oracle columns for n at or below this.
        #[arg(long, default_value_t = 16)]
        oracle_max_n: usize,
    },
    /// Exhaustive small-instance oracle suite.
    Oracle {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 18)]
        n_max: usize,
        #[arg(long, default_value_t = 500)]
        trials: u64,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    };

    match cli.command {
        Command::Gen { n, k, m, mn, c, deg, simple } => {
            let h = if let Some(d) = deg {
                let seq = DegreeSequence(vec![d; n]);
                gen_configuration(&seq, k, cli.seed, simple)?
            } else if let Some(c) = c {
                gen_hnp(n, c, k, cli.seed)
            } else {
                let m = match (m, mn) {
                    (Some(m), _) => m,
                    (None, Some(mn)) => (mn * n as f64).round() as usize,
                    (None, None) => bail!("gen needs one of --m, --mn, --c, --deg"),
                };
                gen_hnm(n, m, k, cli.seed)?
            };
            write_instance(&mut out, &h)?;
        }
        Command::Peel { input, r } => {
            let h = load_instance(&input)?;
            let (core, trace) = r_core(&h, r);
            let digraph = build_digraph(&trace, &h)?;
            let reach = reach_stats(&digraph);
            let report = json!({
                "core_size": trace.core_vertex_count(),
                "core_edges": core.m(),
                "rounds": trace.rounds,
                "max_reach": reach.max,
                "reach_histogram": reach.histogram,
            });
            writeln!(out, "{report}")?;
        }
        Command::Cycles { input } => {
            let h = load_instance(&input)?;
            let (core, _) = r_core(&h, 2);
            let cycles = find_core_flippable_cycles(&core)?;
            let mut seen = std::collections::HashSet::new();
            let mut disjoint = true;
            let mut mass = 0usize;
            for c in &cycles {
                for &v in &c.vertices {
                    mass += 1;
                    if !seen.insert(v) {
                        disjoint = false;
                    }
                }
            }
            let report = json!({
                "cycles": cycles.iter().map(|c| c.vertices.clone()).collect::<Vec<_>>(),
                "total_mass": mass,
                "disjoint": disjoint,
            });
            writeln!(out, "{report}")?;
        }
        Command::Clusters { input, rank_cap } => {
            let h = load_instance(&input)?;
            let (core, trace) = r_core(&h, 2);
            let digraph = build_digraph(&trace, &h)?;
            let cs = build_cluster_structure(&h, &trace, &digraph)?;
            let active_core = core.degrees().iter().filter(|&&d| d > 0).count();
            let log2_clusters = if active_core <= rank_cap {
                Some(cluster_count(&cs, cs.system())?.0)
            } else {
                None
            };
            let report = json!({
                "B_size": cs.b_set.len(),
                "log2_clusters": log2_clusters,
                "frozen_count": frozen_variables(&cs).len(),
                "max_toggle_support": cs.max_toggle_support(),
            });
            writeln!(out, "{report}")?;
        }
        Command::Walk { input, from, to } => {
            let h = load_instance(&input)?;
            let x = load_assignment(&from, h.n())?;
            let y = load_assignment(&to, h.n())?;
            let (_, trace) = r_core(&h, 2);
            let digraph = build_digraph(&trace, &h)?;
            let cs = build_cluster_structure(&h, &trace, &digraph)?;
            let walk = cluster_walk(&cs, &x, &y)?;
            let hamming: Vec<usize> =
                walk.windows(2).map(|w| w[0].hamming(&w[1])).collect();
            let report = json!({
                "steps": walk.len() - 1,
                "sequence": walk.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "hamming": hamming,
            });
            writeln!(out, "{report}")?;
        }
        Command::Thresholds { k, r, c, mn } => {
            let (c_star, lambda_star) = critical_density(k, r);
            let kf: f64 = (1..=k).map(|i| i as f64).product();
            let mut report = json!({
                "k": k,
                "r": r,
                "c_star": c_star,
                "m_over_n_star": c_star / kf,
                "lambda_star": lambda_star,
            });
            if r == 2 && k >= 3 {
                report["sat_threshold_m_over_n"] = json!(sat_threshold_estimate(k));
            }
            let c = c.or(mn.map(|d| d * kf));
            if let Some(c) = c {
                match ThresholdProfile::new(k, r, c) {
                    Ok(p) => {
                        report["c"] = json!(c);
                        report["m_over_n"] = json!(c / kf);
                        report["mu"] = json!(p.mu);
                        report["zeta"] = json!(p.zeta);
                        report["gamma"] = json!(p.gamma);
                        report["lambda2"] = json!(p.lambda2);
                        report["core_vertex_frac"] = json!(p.core_vertex_frac);
                        report["core_edge_per_n"] = json!(p.core_edge_per_n);
                        report["core_degree_frac"] =
                            json!((r..r + 9).map(|j| p.core_degree_frac(j)).collect::<Vec<_>>());
                    }
                    Err(e) => {
                        report["c"] = json!(c);
                        report["note"] = json!(e.to_string());
                    }
                }
            }
            writeln!(out, "{report}")?;
        }
        Command::Sweep { k, r, n, mn, c, trials, model, rank_cap, oracle_max_n } => {
            let kf: f64 = (1..=k).map(|i| i as f64).product();
            let densities = match (mn, c) {
                (Some(mn), None) => parse_grid_f64(&mn)?,
                (None, Some(c)) => parse_grid_f64(&c)?.into_iter().map(|x| x / kf).collect(),
                (None, None) => bail!("sweep needs --mn or --c"),
                _ => unreachable!("clap conflicts_with"),
            };
            let cfg = ExperimentConfig {
                k,
                r,
                n_values: parse_grid_usize(&n)?,
                densities,
                model: model.parse()?,
                trials,
                seed: cli.seed,
                rank_cap,
                oracle_max_n,
            };
            let format: OutputFormat = cli.format.parse()?;
            let rows = run_sweep(&cfg, &mut out, format)?;
            eprintln!("wrote {rows} rows");
        }
        Command::Oracle { k, n_max, trials } => {
            let report = run_oracle_suite(k, n_max, trials, cli.seed);
            let doc = json!({
                "instances": report.instances,
                "checks": report.checks,
                "failures": report.failures.len(),
                "failure_details": report.failures,
                "skipped": report.skipped,
                "overlap_events": report.overlap_events,
                "xor_closure_samples": report.xor_closure_samples,
                "passed": report.passed(),
            });
            writeln!(out, "{doc}")?;
            if !report.passed() {
                out.flush()?;
                bail!("oracle suite reported {} failures", report.failures.len());
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn load_instance(input: &str) -> Result<xorgeo::hypergraph::Hypergraph> {
    if input == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf)?;
        Ok(read_instance(buf.as_bytes())?)
    } else {
        let f = File::open(input).with_context(|| format!("opening {input}"))?;
        Ok(read_instance(BufReader::new(f))?)
    }
}

fn load_assignment(path: &PathBuf, n: usize) -> Result<BitAssignment> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    for line in BufReader::new(f).lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let a = BitAssignment::parse(line)
            .with_context(|| format!("{} is not a 0/1 string", path.display()))?;
        if a.len() != n {
            bail!("assignment has {} bits, instance has {n} variables", a.len());
        }
        return Ok(a);
    }
    bail!("no assignment line in {}", path.display())
}
