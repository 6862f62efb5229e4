//! Exhaustive small-instance validation of the cluster geometry.
//!
//! Every random instance is solved by brute-force enumeration and the
//! structural machinery is checked against the enumerated ground truth:
//! cluster partition, per-cluster size 2^|B|, cluster count, frozen
//! variables, walk validity, chi identities, extension correctness, and
//! the minimal-flippable classification. Failures are counted as data.

use rand::Rng;

use xorgeo::cluster::{
    build_cluster_structure, cluster_count, cluster_walk, extend_core_solution, frozen_variables,
    is_d_connected, same_cluster, ClusterError, ClusterStructure,
};
use xorgeo::flip::{find_core_flippable_cycles, is_flippable_set, minimal_flippable_sets};
use xorgeo::gf2::{self, BitAssignment, Gf2System};
use xorgeo::hypergraph::{gen_hnm, Hypergraph};
use xorgeo::peel::{build_digraph, r_core, StrippingTrace};
use xorgeo::seed::{rng_from_seed, splitmix64};

const ENUM_CAP: usize = 16_384;

#[derive(Debug, Default)]
pub struct OracleReport {
    pub instances: u64,
    pub checks: u64,
    pub failures: Vec<String>,
    /// Instances skipped because their solution count exceeded the cap.
    pub skipped: u64,
    /// Instances routed around the cluster structure because core cycles
    /// overlapped (possible at tiny n; the construction presumes disjoint).
    pub overlap_events: u64,
    pub xor_closure_samples: u64,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, label: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(label());
        }
    }
}

fn system_of(h: &Hypergraph) -> Gf2System {
    Gf2System::new(h.n(), h.edges().map(|e| e.to_vec()).collect())
}

/// Runs the oracle suite: a few fixed instances, then `trials` random ones
/// at n = n_max, m = n_max. Zero trials yield an empty report.
pub fn run_oracle_suite(k: usize, n_max: usize, trials: u64, seed: u64) -> OracleReport {
    assert!(n_max <= 24, "oracle suite is exhaustive; n_max capped at 24");
    let mut report = OracleReport::default();
    if trials == 0 {
        return report;
    }
    let mut rng = rng_from_seed(splitmix64(seed) ^ 0x06ac1e);

    if k == 3 && n_max >= 4 {
        // The triangle-with-apex instance: one core flippable cycle.
        let h = Hypergraph::new(4, 3, [[2u32, 0, 3], [0, 1, 3], [1, 2, 3]]);
        check_instance(&h, 2, "triangle-with-apex", &mut report, &mut rng);
        let single = Hypergraph::new(3, 3, [[0u32, 1, 2]]);
        check_instance(&single, 2, "single-edge", &mut report, &mut rng);
        let empty = Hypergraph::new(3, 3, Vec::<[u32; 3]>::new());
        check_instance(&empty, 2, "empty", &mut report, &mut rng);
    }
    for trial in 0..trials {
        let s = splitmix64(seed ^ trial.wrapping_mul(0x9e37_79b9));
        let Ok(h) = gen_hnm(n_max, n_max, k, s) else { continue };
        check_instance(&h, 2, &format!("trial {trial}"), &mut report, &mut rng);
    }
    report
}

/// Boolean wrapper used for per-row oracle columns in sweeps.
pub fn check_instance_quick(h: &Hypergraph, r: u32) -> bool {
    if r != 2 {
        return true; // cluster oracle is a 2-core construction
    }
    let mut report = OracleReport::default();
    let mut rng = rng_from_seed(0xabcdef);
    check_instance(h, 2, "row", &mut report, &mut rng);
    report.passed()
}

/// All structural checks for one instance.
pub fn check_instance<R: Rng>(
    h: &Hypergraph,
    r: u32,
    label: &str,
    report: &mut OracleReport,
    rng: &mut R,
) {
    report.instances += 1;
    let sys = system_of(h);
    let Ok(sols) = gf2::enumerate_solutions(&sys, ENUM_CAP) else {
        report.skipped += 1;
        return;
    };
    let (core, trace) = r_core(h, r);
    let digraph = build_digraph(&trace, h).expect("trace from this hypergraph");
    let cs = match build_cluster_structure(h, &trace, &digraph) {
        Ok(cs) => cs,
        Err(ClusterError::OverlappingCycles(_)) => {
            report.overlap_events += 1;
            check_partition_only(h, &trace, &sols, label, report);
            return;
        }
        Err(e) => {
            report.check(false, || format!("{label}: structure failed: {e}"));
            return;
        }
    };

    // Sanity: enumeration produced genuine solutions.
    report.check(
        sols.iter().all(|s| gf2::is_solution(&sys, s) == Ok(true)),
        || format!("{label}: enumeration produced a non-solution"),
    );

    // Ground-truth clusters: group by restriction to fixed core vertices
    // (core minus cycle vertices), straight from the definition.
    let groups = group_by_fixed(h, &trace, &cs, &sols);
    let (log_clusters, log_size) = match cluster_count(&cs, &sys) {
        Ok(v) => v,
        Err(e) => {
            report.check(false, || format!("{label}: cluster_count failed: {e}"));
            return;
        }
    };
    report.check(groups.len() == 1usize << log_clusters, || {
        format!("{label}: {} groups vs 2^{log_clusters}", groups.len())
    });
    report.check(
        groups.values().all(|g| g.len() == 1usize << log_size),
        || format!("{label}: cluster size mismatch vs 2^{log_size}"),
    );

    // Independent rank route: log2_clusters == (n - rank) - |B|.
    let full_rank = gf2::rank_and_kernel(&sys).rank;
    report.check(
        (h.n() - full_rank) as i64 - cs.b_set.len() as i64 == log_clusters as i64,
        || format!("{label}: structural rank shortcut disagrees with direct rank"),
    );

    // same_cluster agrees with the ground-truth grouping (all pairs up to
    // 64 solutions, sampled beyond).
    let keys: Vec<&Vec<bool>> = {
        let mut m = std::collections::BTreeMap::new();
        for (key, members) in &groups {
            for &i in members {
                m.insert(i, key);
            }
        }
        (0..sols.len()).map(|i| m[&i]).collect()
    };
    let mut pair_ok = true;
    if sols.len() <= 64 {
        for i in 0..sols.len() {
            for j in i..sols.len() {
                let same = same_cluster(&cs, &sols[i], &sols[j]).unwrap();
                if same != (keys[i] == keys[j]) {
                    pair_ok = false;
                }
            }
        }
    } else {
        for _ in 0..1000 {
            let i = rng.random_range(0..sols.len());
            let j = rng.random_range(0..sols.len());
            let same = same_cluster(&cs, &sols[i], &sols[j]).unwrap();
            if same != (keys[i] == keys[j]) {
                pair_ok = false;
            }
        }
    }
    report.check(pair_ok, || format!("{label}: same_cluster disagrees with ground truth"));

    // Frozen variables: constants of every enumerated cluster.
    let frozen = frozen_variables(&cs);
    let mut frozen_ok = true;
    for members in groups.values() {
        let constant: Vec<u32> = (0..h.n() as u32)
            .filter(|&v| {
                let first = sols[members[0]].get(v as usize);
                members.iter().all(|&i| sols[i].get(v as usize) == first)
            })
            .collect();
        if constant != frozen {
            frozen_ok = false;
        }
    }
    report.check(frozen_ok, || format!("{label}: frozen variables mismatch"));

    // chi identity: v xor chi(v) is constant across each fixed-core system,
    // i.e. within every cluster (the constant absorbs cycle-chain terms that
    // depend on the fixed values).
    let mut chi_ok = true;
    for members in groups.values() {
        for v in 0..h.n() {
            let mut seen = [false, false];
            for &i in members {
                let s = &sols[i];
                let mut acc = s.get(v);
                for &w in cs.chi(v as u32) {
                    acc ^= s.get(w as usize);
                }
                seen[acc as usize] = true;
            }
            if seen[0] && seen[1] {
                chi_ok = false;
            }
        }
    }
    report.check(chi_ok, || format!("{label}: chi identity broken"));

    // Walks between sampled same-cluster pairs.
    let mut walk_ok = true;
    let mut walks = 0;
    for members in groups.values() {
        if members.len() < 2 {
            continue;
        }
        for _ in 0..4 {
            let i = members[rng.random_range(0..members.len())];
            let j = members[rng.random_range(0..members.len())];
            let walk = match cluster_walk(&cs, &sols[i], &sols[j]) {
                Ok(w) => w,
                Err(_) => {
                    walk_ok = false;
                    continue;
                }
            };
            walks += 1;
            walk_ok &= walk.first() == Some(&sols[i]) && walk.last() == Some(&sols[j]);
            walk_ok &= walk.len() <= cs.b_set.len() + 1;
            let max_step = cs.max_toggle_support();
            for w in walk.windows(2) {
                walk_ok &= gf2::is_solution(&sys, &w[1]) == Ok(true);
                let d = w[0].hamming(&w[1]);
                walk_ok &= d >= 1 && d <= max_step;
            }
        }
        if walks >= 16 {
            break;
        }
    }
    report.check(walk_ok, || format!("{label}: walk validity failed"));

    // Intra-cluster d-connectivity at the max toggle size (solutions of
    // one cluster only, to keep the BFS meaningful and small).
    if let Some(members) = groups.values().next() {
        if members.len() >= 2 && members.len() <= 512 {
            let cluster_sols: Vec<BitAssignment> =
                members.iter().map(|&i| sols[i].clone()).collect();
            let d = cs.max_toggle_support().max(1);
            let connected = is_d_connected(
                &cluster_sols,
                &cluster_sols[0],
                &cluster_sols[cluster_sols.len() - 1],
                d,
            );
            report.check(connected == Ok(true), || {
                format!("{label}: cluster not {d}-connected")
            });
        }
    }

    // Extension: replaying a core solution with random free bits lands in
    // the enumerated set.
    if !sols.is_empty() {
        let base = &sols[rng.random_range(0..sols.len())];
        let free_count = cs.b_set.iter().filter(|&&b| trace.removal_pos[b as usize] != xorgeo::peel::IN_CORE).count();
        let bits: Vec<bool> = (0..free_count).map(|_| rng.random()).collect();
        match extend_core_solution(&cs, base, &bits) {
            Ok(ext) => {
                report.check(
                    sols.contains(&ext),
                    || format!("{label}: extension not among enumerated solutions"),
                );
            }
            Err(e) => report.check(false, || format!("{label}: extension failed: {e}")),
        }
    }

    // XOR closure on sampled pairs.
    let mut closure_ok = true;
    for _ in 0..4.min(sols.len()) {
        let i = rng.random_range(0..sols.len());
        let j = rng.random_range(0..sols.len());
        closure_ok &= gf2::is_solution(&sys, &sols[i].xor(&sols[j])) == Ok(true);
        report.xor_closure_samples += 1;
    }
    report.check(closure_ok, || format!("{label}: xor closure failed"));

    // Cycle flips fix the core system; minimal-set classification.
    let core_sys = system_of(&core);
    let cycles = find_core_flippable_cycles(&core).unwrap_or_default();
    let mut flip_ok = true;
    for c in &cycles {
        let mut x = BitAssignment::zeros(h.n());
        for &v in &c.vertices {
            x.flip(v as usize);
        }
        flip_ok &= gf2::is_solution(&core_sys, &x) == Ok(true);
    }
    report.check(flip_ok, || format!("{label}: cycle flip broke the core system"));

    if let Ok(minimal) = minimal_flippable_sets(&core, 4096) {
        let cycle_sets: Vec<Vec<u32>> = cycles
            .iter()
            .map(|c| {
                let mut v = c.vertices.clone();
                v.sort_unstable();
                v
            })
            .collect();
        report.check(
            cycle_sets.iter().all(|cset| minimal.contains(cset)),
            || format!("{label}: a cycle is missing from the minimal flippable sets"),
        );
        report.check(
            minimal.iter().all(|s| is_flippable_set(&core, s) == Ok(true)),
            || format!("{label}: minimal set not flippable"),
        );
        let nested = minimal.iter().enumerate().any(|(i, a)| {
            minimal.iter().enumerate().any(|(j, b)| {
                i != j && a.iter().all(|v| b.contains(v))
            })
        });
        report.check(!nested, || format!("{label}: nested minimal flippable sets"));
    }
}

/// Without the structure (overlapping cycles), the definitional partition
/// must still be an equivalence with well-defined classes.
fn check_partition_only(
    h: &Hypergraph,
    trace: &StrippingTrace,
    sols: &[BitAssignment],
    label: &str,
    report: &mut OracleReport,
) {
    let (core, _) = r_core(h, 2);
    let Ok(cycles) = find_core_flippable_cycles(&core) else { return };
    let mut on_cycle = vec![false; h.n()];
    for c in &cycles {
        for &v in &c.vertices {
            on_cycle[v as usize] = true;
        }
    }
    // Two solutions are cycle-equivalent if their core difference stays on
    // cycle vertices; with overlapping cycles this is still well-defined.
    let key = |s: &BitAssignment| -> Vec<bool> {
        (0..h.n())
            .filter(|&v| trace.is_core_vertex(v as u32) && !on_cycle[v])
            .map(|v| s.get(v))
            .collect()
    };
    let mut sizes = std::collections::BTreeMap::new();
    for s in sols {
        *sizes.entry(key(s)).or_insert(0u64) += 1;
    }
    let first = sizes.values().next().copied().unwrap_or(0);
    report.check(
        sizes.values().all(|&c| c == first),
        || format!("{label}: overlap fallback produced uneven classes"),
    );
}

fn group_by_fixed(
    h: &Hypergraph,
    trace: &StrippingTrace,
    cs: &ClusterStructure,
    sols: &[BitAssignment],
) -> std::collections::BTreeMap<Vec<bool>, Vec<usize>> {
    let mut on_cycle = vec![false; h.n()];
    for c in &cs.cycles {
        for &v in &c.vertices {
            on_cycle[v as usize] = true;
        }
    }
    let mut groups: std::collections::BTreeMap<Vec<bool>, Vec<usize>> = Default::default();
    for (i, s) in sols.iter().enumerate() {
        let key: Vec<bool> = (0..h.n())
            .filter(|&v| trace.is_core_vertex(v as u32) && !on_cycle[v])
            .map(|v| s.get(v))
            .collect();
        groups.entry(key).or_default().push(i);
    }
    groups
}
