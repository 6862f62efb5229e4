//! Per-instance measurements paired with their asymptotic predictions.

use serde::Serialize;

use xorgeo::cluster::{build_cluster_structure, cluster_count, frozen_variables};
use xorgeo::flip::cycle_mass_statistic;
use xorgeo::hypergraph::{components, tree_component_max_degree, Hypergraph};
use xorgeo::peel::{build_digraph, parallel_round_stats, r_core, reach_stats};
use xorgeo::theory::{strip_recursion, ThresholdProfile};

/// Degrees tracked in per-round histograms.
pub const DEG_TRACK: usize = 9;
/// Parallel rounds recorded in the row (t = 0..=ROUND_TRACK).
pub const ROUND_TRACK: usize = 5;
/// Core degree classes recorded, starting at j = r.
pub const DEG_CLASSES: usize = 5;

#[derive(Clone, Copy, Debug)]
pub struct MeasureOpts {
    pub r: u32,
    /// Compute log2_clusters only when the core has at most this many
    /// active vertices (exact elimination cost cap).
    pub rank_cap: usize,
    /// Run the per-instance enumeration oracle when n is at most this.
    pub oracle_max_n: usize,
}

impl Default for MeasureOpts {
    fn default() -> Self {
        MeasureOpts { r: 2, rank_cap: 4096, oracle_max_n: 16 }
    }
}

/// One sweep row: cell parameters, per-trial measurements, and matching
/// predictions. Prediction fields are `None` ("NA" in CSV, null in JSONL)
/// when the theory provides no finite-n formula — an explicit
/// no-prediction marker, never a silently reused measurement.
#[derive(Clone, Debug, Serialize)]
pub struct ResultRow {
    pub n: u64,
    pub k: u32,
    pub r: u32,
    pub c: f64,
    pub m_over_n: f64,
    pub trial: u32,
    pub trial_seed: u64,
    pub m: u64,

    pub core_vertices: u64,
    pub core_edges: u64,
    pub core_vertex_frac: f64,
    pub core_edge_per_n: f64,
    pub pred_core_vertex_frac: Option<f64>,
    pub pred_core_edge_per_n: Option<f64>,

    /// Fractions of vertices with core degree j, j = r .. r+DEG_CLASSES-1.
    pub core_deg_frac: Vec<f64>,
    pub pred_core_deg_frac: Option<Vec<f64>>,

    pub rounds: u32,
    /// Vertex counts by degree (0..DEG_TRACK) after t parallel rounds,
    /// t = 0..=ROUND_TRACK.
    pub round_deg_counts: Vec<Vec<u64>>,
    /// rho_t(d) from the stripping recursion, same shape.
    pub pred_round_deg_frac: Option<Vec<Vec<f64>>>,

    pub max_reach: u32,
    pub reach_over_ln_n: f64,
    /// No closed form: the theory gives O(log n) with an unknown constant.
    pub pred_max_reach: Option<f64>,

    pub cycle_count: u64,
    pub cycle_mass: u64,
    pub cycles_disjoint: bool,
    /// No closed form: expected mass is O(1).
    pub pred_cycle_mass: Option<f64>,

    /// None when the cycle structure aborted (overlapping cycles).
    pub b_size: Option<u64>,
    pub frozen_count: Option<u64>,
    pub max_toggle_support: Option<u64>,
    pub log2_cluster_size: Option<u64>,
    /// None above the rank cap or when the structure aborted.
    pub log2_clusters: Option<u64>,
    pub pred_b_size: Option<f64>,

    pub max_component: u64,
    pub tree_max_degree: u32,
    pub pred_max_component: Option<f64>,

    /// Brute-force cross-checks at oracle scale; None when n is too large.
    pub oracle_ok: Option<bool>,
}

impl ResultRow {
    pub fn csv_header() -> Vec<&'static str> {
        vec![
            "n",
            "k",
            "r",
            "c",
            "m_over_n",
            "trial",
            "trial_seed",
            "m",
            "core_vertices",
            "core_edges",
            "core_vertex_frac",
            "core_edge_per_n",
            "pred_core_vertex_frac",
            "pred_core_edge_per_n",
            "core_deg_frac",
            "pred_core_deg_frac",
            "rounds",
            "round_deg_counts",
            "pred_round_deg_frac",
            "max_reach",
            "reach_over_ln_n",
            "pred_max_reach",
            "cycle_count",
            "cycle_mass",
            "cycles_disjoint",
            "pred_cycle_mass",
            "b_size",
            "frozen_count",
            "max_toggle_support",
            "log2_cluster_size",
            "log2_clusters",
            "pred_b_size",
            "max_component",
            "tree_max_degree",
            "pred_max_component",
            "oracle_ok",
        ]
    }

    pub fn to_csv_record(&self) -> Vec<String> {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map_or_else(|| "NA".to_string(), |x| x.to_string())
        }
        fn join_u64(v: &[Vec<u64>]) -> String {
            v.iter()
                .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(":"))
                .collect::<Vec<_>>()
                .join(";")
        }
        fn join_f64(v: &[Vec<f64>]) -> String {
            v.iter()
                .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(":"))
                .collect::<Vec<_>>()
                .join(";")
        }
        vec![
            self.n.to_string(),
            self.k.to_string(),
            self.r.to_string(),
            self.c.to_string(),
            self.m_over_n.to_string(),
            self.trial.to_string(),
            self.trial_seed.to_string(),
            self.m.to_string(),
            self.core_vertices.to_string(),
            self.core_edges.to_string(),
            self.core_vertex_frac.to_string(),
            self.core_edge_per_n.to_string(),
            opt(&self.pred_core_vertex_frac),
            opt(&self.pred_core_edge_per_n),
            self.core_deg_frac.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(":"),
            self.pred_core_deg_frac.as_ref().map_or_else(
                || "NA".to_string(),
                |v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(":"),
            ),
            self.rounds.to_string(),
            join_u64(&self.round_deg_counts),
            self.pred_round_deg_frac
                .as_ref()
                .map_or_else(|| "NA".to_string(), |v| join_f64(v)),
            self.max_reach.to_string(),
            self.reach_over_ln_n.to_string(),
            opt(&self.pred_max_reach),
            self.cycle_count.to_string(),
            self.cycle_mass.to_string(),
            self.cycles_disjoint.to_string(),
            opt(&self.pred_cycle_mass),
            opt(&self.b_size),
            opt(&self.frozen_count),
            opt(&self.max_toggle_support),
            opt(&self.log2_cluster_size),
            opt(&self.log2_clusters),
            opt(&self.pred_b_size),
            self.max_component.to_string(),
            self.tree_max_degree.to_string(),
            opt(&self.pred_max_component),
            opt(&self.oracle_ok),
        ]
    }
}

/// Runs the full measurement pipeline on one instance.
pub fn measure_instance(
    h: &Hypergraph,
    c: f64,
    trial: u32,
    trial_seed: u64,
    profile: Option<&ThresholdProfile>,
    opts: &MeasureOpts,
) -> ResultRow {
    let n = h.n();
    let k = h.k() as u32;
    let r = opts.r;
    let nf = n as f64;

    let (core, trace) = r_core(h, r);
    let digraph = build_digraph(&trace, h).expect("trace from this hypergraph");
    let reach = reach_stats(&digraph);

    let core_vertices = trace.core_vertex_count() as u64;
    let core_edges = core.m() as u64;
    let core_hist = core.degree_histogram();
    let core_deg_frac: Vec<f64> = (r..r + DEG_CLASSES as u32)
        .map(|j| core_hist.get(j as usize).copied().unwrap_or(0) as f64 / nf)
        .collect();

    let round_counts_raw = parallel_round_stats(h, r, ROUND_TRACK);
    let round_deg_counts: Vec<Vec<u64>> = round_counts_raw
        .iter()
        .map(|hist| (0..DEG_TRACK).map(|d| hist.get(d).copied().unwrap_or(0)).collect())
        .collect();
    let rec = strip_recursion(k, r, c, ROUND_TRACK);
    let pred_round_deg_frac: Vec<Vec<f64>> = rec
        .rho
        .iter()
        .take(ROUND_TRACK + 1)
        .map(|row| row[..DEG_TRACK.min(row.len())].to_vec())
        .collect();

    let mass = cycle_mass_statistic(&core).expect("core cycle scan");

    let cluster = build_cluster_structure(h, &trace, &digraph).ok();
    let (b_size, frozen_count, max_toggle_support, log2_cluster_size, log2_clusters) =
        match &cluster {
            Some(cs) => {
                let active_core = core.degrees().iter().filter(|&&d| d > 0).count();
                let counts = if active_core <= opts.rank_cap {
                    cluster_count(cs, cs.system()).ok()
                } else {
                    None
                };
                (
                    Some(cs.b_set.len() as u64),
                    Some(frozen_variables(cs).len() as u64),
                    Some(cs.max_toggle_support() as u64),
                    Some(cs.b_set.len() as u64),
                    counts.map(|(clusters, _)| clusters as u64),
                )
            }
            None => (None, None, None, None, None),
        };

    let comps = components(h);
    let oracle_ok = if n <= opts.oracle_max_n {
        Some(crate::oracle::check_instance_quick(h, opts.r))
    } else {
        None
    };

    ResultRow {
        n: n as u64,
        k,
        r,
        c,
        m_over_n: h.m() as f64 / nf,
        trial,
        trial_seed,
        m: h.m() as u64,
        core_vertices,
        core_edges,
        core_vertex_frac: core_vertices as f64 / nf,
        core_edge_per_n: core_edges as f64 / nf,
        pred_core_vertex_frac: profile.map(|p| p.core_vertex_frac),
        pred_core_edge_per_n: profile.map(|p| p.core_edge_per_n),
        core_deg_frac,
        pred_core_deg_frac: profile
            .map(|p| (r..r + DEG_CLASSES as u32).map(|j| p.core_degree_frac(j)).collect()),
        rounds: trace.rounds,
        round_deg_counts,
        pred_round_deg_frac: Some(pred_round_deg_frac),
        max_reach: reach.max,
        reach_over_ln_n: reach.max as f64 / nf.ln(),
        pred_max_reach: None,
        cycle_count: mass.cycle_count as u64,
        cycle_mass: mass.total_vertices as u64,
        cycles_disjoint: mass.disjoint,
        pred_cycle_mass: None,
        b_size,
        frozen_count,
        max_toggle_support,
        log2_cluster_size,
        log2_clusters,
        pred_b_size: None,
        max_component: comps.max_size() as u64,
        tree_max_degree: tree_component_max_degree(h),
        pred_max_component: None,
        oracle_ok,
    }
}
