//! Cross-module properties checked against brute-force enumeration.

use proptest::prelude::*;

use xorgeo::cluster::{
    build_cluster_structure, cluster_count, frozen_variables, same_cluster,
};
use xorgeo::flip::{
    cycle_mass_statistic, find_core_flippable_cycles, is_flippable_set, minimal_flippable_sets,
};
use xorgeo::gf2::{self, BitAssignment, Gf2System};
use xorgeo::hypergraph::{gen_hnm, Hypergraph};
use xorgeo::peel::{build_digraph, r_core, replay_stripping};

fn system_of(h: &Hypergraph) -> Gf2System {
    Gf2System::new(h.n(), h.edges().map(|e| e.to_vec()).collect())
}

/// Flipping a detected core flippable cycle maps core solutions to core
/// solutions: every core equation meets the cycle in zero or two variables.
/// (Cycle vertices may have higher degree in the full graph, so this is a
/// statement about the core system.)
#[test]
fn cycle_flips_preserve_core_solutions() {
    let mut flips = 0;
    for seed in 0..400u64 {
        let h = gen_hnm(18, 18, 3, seed).unwrap();
        let (core, _) = r_core(&h, 2);
        let cycles = find_core_flippable_cycles(&core).unwrap();
        if cycles.is_empty() {
            continue;
        }
        let core_sys = system_of(&core);
        let zero = BitAssignment::zeros(h.n());
        for c in &cycles {
            let mut flipped = zero.clone();
            for &v in &c.vertices {
                flipped.flip(v as usize);
            }
            assert_eq!(gf2::is_solution(&core_sys, &flipped), Ok(true), "seed {seed}");
            assert_eq!(is_flippable_set(&core, &c.vertices), Ok(true));
            flips += 1;
        }
    }
    assert!(flips > 10, "too few cycles exercised: {flips}");
}

/// The cluster partition of the enumerated solution set matches the
/// structure: grouping by the fixed-core restriction gives 2^|B|-sized
/// classes, same_cluster agrees with the grouping, the class count matches
/// cluster_count, and the per-class constant variables are exactly the
/// frozen set.
#[test]
fn cluster_partition_matches_enumeration() {
    let mut checked = 0;
    for seed in 0..150u64 {
        let h = gen_hnm(12, 12, 3, seed).unwrap();
        let sys = system_of(&h);
        let Ok(sols) = gf2::enumerate_solutions(&sys, 2048) else { continue };
        let (_, trace) = r_core(&h, 2);
        let digraph = build_digraph(&trace, &h).unwrap();
        let Ok(cs) = build_cluster_structure(&h, &trace, &digraph) else {
            continue; // overlapping cycles: outside the disjoint regime
        };

        // Ground-truth key: restriction to core vertices not on cycles.
        let mut on_cycle = vec![false; h.n()];
        for c in &cs.cycles {
            for &v in &c.vertices {
                on_cycle[v as usize] = true;
            }
        }
        let key = |s: &BitAssignment| -> Vec<bool> {
            (0..h.n())
                .filter(|&v| trace.is_core_vertex(v as u32) && !on_cycle[v])
                .map(|v| s.get(v))
                .collect()
        };
        let mut groups: std::collections::HashMap<Vec<bool>, Vec<usize>> = Default::default();
        for (i, s) in sols.iter().enumerate() {
            groups.entry(key(s)).or_default().push(i);
        }

        let (log_clusters, log_size) = cluster_count(&cs, &sys).unwrap();
        assert_eq!(groups.len(), 1usize << log_clusters, "seed {seed}");
        for members in groups.values() {
            assert_eq!(members.len(), 1usize << log_size, "seed {seed}");
        }

        // same_cluster agrees with the grouping on every pair (solution
        // sets here are small).
        for i in 0..sols.len() {
            for j in i..sols.len() {
                let same = same_cluster(&cs, &sols[i], &sols[j]).unwrap();
                assert_eq!(same, key(&sols[i]) == key(&sols[j]), "seed {seed} pair {i},{j}");
            }
        }

        // Frozen variables are the per-cluster constants.
        let frozen = frozen_variables(&cs);
        for members in groups.values() {
            let constant: Vec<u32> = (0..h.n() as u32)
                .filter(|&v| {
                    let first = sols[members[0]].get(v as usize);
                    members.iter().all(|&i| sols[i].get(v as usize) == first)
                })
                .collect();
            assert_eq!(constant, frozen, "seed {seed}");
        }
        checked += 1;
    }
    assert!(checked > 50, "too few instances enumerated: {checked}");
}

/// Separation dichotomy, restated per instance: two solutions are either
/// cycle-equivalent or their disagreement is at least the smallest
/// non-cycle minimal flippable set of the core.
#[test]
fn dichotomy_at_oracle_scale() {
    let mut pairs = 0;
    for seed in 0..120u64 {
        let h = gen_hnm(12, 12, 3, seed).unwrap();
        let sys = system_of(&h);
        let Ok(sols) = gf2::enumerate_solutions(&sys, 1024) else { continue };
        let (core, trace) = r_core(&h, 2);
        let digraph = build_digraph(&trace, &h).unwrap();
        let Ok(cs) = build_cluster_structure(&h, &trace, &digraph) else { continue };
        let Ok(minimal) = minimal_flippable_sets(&core, 4096) else { continue };
        let cycles = find_core_flippable_cycles(&core).unwrap();
        let cycle_sets: Vec<Vec<u32>> = cycles
            .iter()
            .map(|c| {
                let mut v = c.vertices.clone();
                v.sort_unstable();
                v
            })
            .collect();
        let Some(s_min) = minimal
            .iter()
            .filter(|s| !cycle_sets.contains(s))
            .map(|s| s.len())
            .min()
        else {
            continue;
        };
        for i in 0..sols.len() {
            for j in i + 1..sols.len() {
                if !same_cluster(&cs, &sols[i], &sols[j]).unwrap() {
                    let core_diff = (0..h.n())
                        .filter(|&v| {
                            trace.is_core_vertex(v as u32)
                                && sols[i].get(v) != sols[j].get(v)
                        })
                        .count();
                    assert!(core_diff >= s_min, "seed {seed}: diff {core_diff} < {s_min}");
                    pairs += 1;
                }
            }
        }
    }
    assert!(pairs > 20, "too few cross-cluster pairs: {pairs}");
}

/// Minimal flippable sets really are minimal: flippable with no flippable
/// proper nonempty subset.
#[test]
fn minimal_sets_are_minimal() {
    for seed in 0..60u64 {
        let h = gen_hnm(14, 15, 3, seed).unwrap();
        let (core, _) = r_core(&h, 2);
        if core.m() == 0 {
            continue;
        }
        let Ok(sets) = minimal_flippable_sets(&core, 4096) else { continue };
        for s in &sets {
            assert_eq!(is_flippable_set(&core, s), Ok(true));
            if s.len() <= 12 {
                for mask in 1u32..(1 << s.len()) - 1 {
                    let subset: Vec<u32> = s
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &v)| v)
                        .collect();
                    assert_eq!(is_flippable_set(&core, &subset), Ok(false));
                }
            }
        }
        // Disjointness statistics agree with the cycle scan.
        let mass = cycle_mass_statistic(&core).unwrap();
        let cycles = find_core_flippable_cycles(&core).unwrap();
        assert_eq!(mass.cycle_count, cycles.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 48,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    /// Subspace closure: the XOR of two enumerated solutions is a solution,
    /// the zero vector always solves, and the count is 2^(n - rank).
    #[test]
    fn solution_space_is_subspace(seed in 0u64..5000, n in 4usize..14, extra in 0usize..6) {
        let all = n * (n - 1) * (n - 2) / 6;
        let m = (n.saturating_sub(2) + extra).min(all);
        let h = gen_hnm(n, m, 3, seed).unwrap();
        let sys = system_of(&h);
        let rk = gf2::rank_and_kernel(&sys);
        prop_assert!(gf2::is_solution(&sys, &BitAssignment::zeros(n)).unwrap());
        for v in &rk.kernel_basis {
            prop_assert!(gf2::is_solution(&sys, v).unwrap());
        }
        if let Ok(sols) = gf2::enumerate_solutions(&sys, 1024) {
            prop_assert_eq!(sols.len(), 1usize << (n - rk.rank));
            let a = &sols[seed as usize % sols.len()];
            let b = &sols[(seed as usize / 7) % sols.len()];
            prop_assert!(gf2::is_solution(&sys, &a.xor(b)).unwrap());
        }
    }

    /// Every trace replays: stripped vertices have degree < r at removal,
    /// and the final state is exactly the core.
    #[test]
    fn traces_replay(seed in 0u64..5000, n in 6usize..40, r in 2u32..4) {
        let h = gen_hnm(n, n, 3, seed).unwrap();
        let (core, trace) = r_core(&h, r);
        prop_assert!(replay_stripping(&h, &trace.order, r));
        // Core min degree >= r on incident vertices.
        for v in 0..n as u32 {
            let d = core.degree(v);
            prop_assert!(d == 0 || d >= r);
        }
        // Degree sum invariant.
        let total: u64 = core.degrees().iter().map(|&d| d as u64).sum();
        prop_assert_eq!(total, core.m() as u64 * 3);
    }

    /// Depth witnesses replay and end at the queried vertex.
    #[test]
    fn depth_witnesses_replay(seed in 0u64..5000, n in 6usize..30) {
        let h = gen_hnm(n, n - 2, 3, seed).unwrap();
        let (_, trace) = r_core(&h, 2);
        let d = build_digraph(&trace, &h).unwrap();
        for &v in trace.order.iter().take(6) {
            let (size, witness) = xorgeo::peel::depth_upper(&d, v).unwrap();
            prop_assert_eq!(size as usize, witness.len());
            prop_assert_eq!(*witness.last().unwrap(), v);
            prop_assert!(replay_stripping(&h, &witness, 2));
        }
    }
}
