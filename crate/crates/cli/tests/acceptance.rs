//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured values (run with `--nocapture` to see them).
//!
//! Every tolerance is pinned here; none is derived at run time.

use rayon::prelude::*;

use xorgeo::flip::{builder, build_gamma, cycle_mass_statistic, find_core_flippable_cycles};
use xorgeo::gf2::{self, BitAssignment, Gf2System};
use xorgeo::hypergraph::{components, gen_hnm, gen_hnp, Hypergraph};
use xorgeo::peel::{build_digraph, parallel_round_stats, parallel_strip_residual, r_core, reach_stats};
use xorgeo::seed::trial_seed;
use xorgeo::theory::{
    critical_density, critical_density_routes, molloy_reed_sum, sat_threshold_estimate,
    strip_recursion, ThresholdProfile,
};
use xorgeo_cli::run_oracle_suite;

const MASTER_SEED: u64 = 20_240_831;

fn system_of(h: &Hypergraph) -> Gf2System {
    Gf2System::new(h.n(), h.edges().map(|e| e.to_vec()).collect())
}

/// Criterion 10 support: every detected core flippable cycle, flipped into
/// the all-zero assignment, solves the 2-core system.
fn assert_cycle_flips(h: &Hypergraph, label: &str) -> usize {
    let (core, _) = r_core(h, 2);
    let cycles = find_core_flippable_cycles(&core).expect("cycle scan");
    if cycles.is_empty() {
        return 0;
    }
    let core_sys = system_of(&core);
    for c in &cycles {
        let mut flipped = BitAssignment::zeros(h.n());
        for &v in &c.vertices {
            flipped.flip(v as usize);
        }
        assert_eq!(
            gf2::is_solution(&core_sys, &flipped),
            Ok(true),
            "{label}: flipping a core cycle broke the core system"
        );
    }
    cycles.len()
}

/// 1. Threshold numerics against the reported densities.
#[test]
fn criterion_01_threshold_numerics() {
    let start = std::time::Instant::now();
    let (c_star, _) = critical_density(3, 2);
    let core_density = c_star / 6.0;
    assert!(
        (0.817..=0.820).contains(&core_density),
        "core threshold m/n = {core_density}"
    );
    let sat = sat_threshold_estimate(3);
    assert!((0.916..=0.919).contains(&sat), "sat threshold m/n = {sat}");
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 1.0, "took {dt:?}");
    println!(
        "criterion 1 (threshold numerics): PASS — core m/n = {core_density:.6}, sat m/n = {sat:.6}, {dt:?}"
    );
}

/// 2. Minimizer and stationarity-root routes agree to 1e-9 relative.
#[test]
fn criterion_02_threshold_route_agreement() {
    let start = std::time::Instant::now();
    let mut worst: f64 = 0.0;
    for k in 2..=5u32 {
        for r in 2..=5u32 {
            if k + r <= 4 {
                continue;
            }
            let (c_min, c_root, _) = critical_density_routes(k, r);
            let rel = (c_min - c_root).abs() / c_root;
            assert!(rel <= 1e-9, "(k={k}, r={r}): rel {rel:.3e}");
            worst = worst.max(rel);
        }
    }
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 5.0, "took {dt:?}");
    println!(
        "criterion 2 (threshold minimizer vs stationarity root): PASS — worst rel diff {worst:.2e}, {dt:?}"
    );
}

/// 3. Core degree profile and edge density vs the (k=3, r=2) predictions.
#[test]
fn criterion_03_core_statistics() {
    let start = std::time::Instant::now();
    let n = 200_000usize;
    let m = (0.9 * n as f64).round() as usize;
    let profile = ThresholdProfile::new(3, 2, 5.4).unwrap();
    let mut worst: f64 = 0.0;
    let rows: Vec<(Vec<f64>, f64)> = (0..10u64)
        .into_par_iter()
        .map(|trial| {
            let seed = trial_seed(MASTER_SEED, n as u64, 0.9f64.to_bits(), trial);
            let h = gen_hnm(n, m, 3, seed).unwrap();
            let (core, trace) = r_core(&h, 2);
            assert_cycle_flips(&h, "criterion 3");
            let hist = core.degree_histogram();
            let fracs: Vec<f64> = (2..=6)
                .map(|j| hist.get(j).copied().unwrap_or(0) as f64 / n as f64)
                .collect();
            let _ = trace;
            (fracs, core.m() as f64 / n as f64)
        })
        .collect();
    for (trial, (fracs, edge_density)) in rows.iter().enumerate() {
        for (j, &frac) in (2..=6u32).zip(fracs) {
            let pred = profile.core_degree_frac(j);
            let err = (frac - pred).abs();
            worst = worst.max(err);
            assert!(err <= 0.01, "trial {trial} degree {j}: |{frac} - {pred}| = {err}");
        }
        let err = (edge_density - profile.core_edge_per_n).abs();
        worst = worst.max(err);
        assert!(err <= 0.01, "trial {trial} edges/n: {edge_density} vs {}", profile.core_edge_per_n);
    }
    let dt = start.elapsed();
    assert!(dt.as_secs() < 120, "took {dt:?}");
    println!(
        "criterion 3 (core statistics, 10 trials at n=2e5): PASS — worst abs dev {worst:.4}, {dt:?}"
    );
}

/// 4. Parallel-round degree profiles match the stripping recursion.
#[test]
fn criterion_04_round_recursion() {
    let start = std::time::Instant::now();
    let n = 100_000usize;
    let h = gen_hnp(n, 2.0, 3, trial_seed(MASTER_SEED, n as u64, 2.0f64.to_bits(), 0));
    let stats = parallel_round_stats(&h, 2, 5);
    let rec = strip_recursion(3, 2, 2.0, 5);
    let mut worst: f64 = 0.0;
    for t in 1..=5usize {
        for d in 0..=6usize {
            let got = stats[t].get(d).copied().unwrap_or(0) as f64;
            let pred = rec.rho[t][d] * n as f64;
            let err = (got - pred).abs() / n as f64;
            worst = worst.max(err);
            assert!(err <= 0.01, "round {t} degree {d}: count {got} vs {pred:.1}");
        }
    }
    let dt = start.elapsed();
    assert!(dt.as_secs() < 60, "took {dt:?}");
    println!(
        "criterion 4 (stripping recursion, t=1..5 at n=1e5): PASS — worst dev {worst:.4}n, {dt:?}"
    );
}

/// 5. The exact oracle suite: 500 instances at n = m = 18, zero failures.
#[test]
fn criterion_05_oracle_suite() {
    let start = std::time::Instant::now();
    let report = run_oracle_suite(3, 18, 500, MASTER_SEED);
    assert!(
        report.failures.is_empty(),
        "oracle failures: {:?}",
        report.failures
    );
    assert!(report.instances >= 500, "only {} instances ran", report.instances);
    let dt = start.elapsed();
    assert!(dt.as_secs() < 120, "took {dt:?}");
    println!(
        "criterion 5 (oracle suite, 500 instances at n=m=18): PASS — {} checks, {} skipped, {} overlap events, {dt:?}",
        report.checks, report.skipped, report.overlap_events
    );
}

/// 6. Reach-set scaling: median max |R+| / ln n grows at most 50% from
///    n = 1e4 to n = 4e5.
#[test]
fn criterion_06_depth_scaling() {
    let start = std::time::Instant::now();
    let sizes = [10_000usize, 100_000, 400_000];
    let mut medians = Vec::new();
    for &n in &sizes {
        let m = (0.9 * n as f64).round() as usize;
        let mut ratios: Vec<f64> = (0..10u64)
            .into_par_iter()
            .map(|trial| {
                let seed = trial_seed(MASTER_SEED + 6, n as u64, 0.9f64.to_bits(), trial);
                let h = gen_hnm(n, m, 3, seed).unwrap();
                assert_cycle_flips(&h, "criterion 6");
                let (_, trace) = r_core(&h, 2);
                let d = build_digraph(&trace, &h).unwrap();
                let stats = reach_stats(&d);
                stats.max as f64 / (n as f64).ln()
            })
            .collect();
        ratios.sort_by(f64::total_cmp);
        medians.push(0.5 * (ratios[4] + ratios[5]));
    }
    let growth = medians[2] / medians[0];
    assert!(
        growth <= 1.5,
        "median max|R+|/ln n grew {growth:.3}x: {medians:?}"
    );
    let dt = start.elapsed();
    assert!(dt.as_secs() < 600, "took {dt:?}");
    println!(
        "criterion 6 (depth scaling): PASS — medians {:?}, growth {growth:.3}x, {dt:?}",
        medians.iter().map(|x| (x * 1000.0).round() / 1000.0).collect::<Vec<_>>()
    );
}

/// 7. Cycle mass stays bounded and cycles never overlap.
#[test]
fn criterion_07_cycle_mass() {
    let start = std::time::Instant::now();
    let mut means = Vec::new();
    for &n in &[10_000usize, 100_000] {
        let m = (0.9 * n as f64).round() as usize;
        let masses: Vec<(u64, bool)> = (0..200u64)
            .into_par_iter()
            .map(|trial| {
                let seed = trial_seed(MASTER_SEED + 7, n as u64, 0.9f64.to_bits(), trial);
                let h = gen_hnm(n, m, 3, seed).unwrap();
                let (core, _) = r_core(&h, 2);
                assert_cycle_flips(&h, "criterion 7");
                let mass = cycle_mass_statistic(&core).unwrap();
                (mass.total_vertices as u64, mass.disjoint)
            })
            .collect();
        assert!(
            masses.iter().all(|&(_, disjoint)| disjoint),
            "overlapping core flippable cycles observed at n={n}"
        );
        means.push(masses.iter().map(|&(m, _)| m as f64).sum::<f64>() / 200.0);
    }
    assert!(
        means[1] <= 2.0 * means[0].max(0.05),
        "mass mean doubled: {means:?}"
    );
    let dt = start.elapsed();
    assert!(dt.as_secs() < 600, "took {dt:?}");
    println!(
        "criterion 7 (cycle mass, 200 trials each): PASS — means {means:?}, zero overlaps, {dt:?}"
    );
}

/// 8. The contracted-structure density inequality on 100 built linked sets.
#[test]
fn criterion_08_gamma_density() {
    let start = std::time::Instant::now();
    let mut sets = Vec::new();
    sets.push(builder::theta_instance());
    sets.extend(builder::sample_linked_sets(3, 24, 26, 79, MASTER_SEED + 8));
    sets.extend(builder::sample_linked_sets(4, 20, 21, 20, MASTER_SEED + 88));
    assert!(sets.len() >= 100, "builder produced only {} linked sets", sets.len());
    sets.truncate(100);
    for (i, (core, s)) in sets.iter().enumerate() {
        // Ambient minimum degree 2 is the inequality's precondition.
        assert!(core.degrees().iter().all(|&d| d == 0 || d >= 2));
        let gamma = build_gamma(core, s).expect("builder output is linked");
        let lhs = gamma.weighted_edge_sum() as f64;
        let rhs = (1.0 + 1.0 / (2.0 * core.k() as f64)) * gamma.vertices.len() as f64;
        assert!(lhs >= rhs, "set {i}: {lhs} < {rhs}");
        assert!(!gamma.vertices.is_empty() && gamma.vertices.len() <= s.len());
    }
    let dt = start.elapsed();
    assert!(dt.as_secs() < 10, "took {dt:?}");
    println!("criterion 8 (density inequality on 100 linked sets): PASS — {dt:?}");
}

/// 9. Below threshold, ten rounds shatter the graph into logarithmic
///    components and the Molloy-Reed criterion is positive.
#[test]
fn criterion_09_subcritical_components() {
    let start = std::time::Instant::now();
    let n = 100_000usize;
    let m = (0.7 * n as f64).round() as usize;
    let bound = 60.0 * (n as f64).ln();
    let maxima: Vec<u32> = (0..10u64)
        .into_par_iter()
        .map(|trial| {
            let seed = trial_seed(MASTER_SEED + 9, n as u64, 0.7f64.to_bits(), trial);
            let h = gen_hnm(n, m, 3, seed).unwrap();
            let residual = parallel_strip_residual(&h, 2, 10);
            components(&residual).max_size()
        })
        .collect();
    for (trial, &mx) in maxima.iter().enumerate() {
        assert!((mx as f64) <= bound, "trial {trial}: component {mx} > {bound:.0}");
    }
    let rec = strip_recursion(3, 2, 0.7 * 6.0, 10);
    let mr = molloy_reed_sum(3, &rec.rho[10]);
    assert!(mr > 0.0, "Molloy-Reed sum not positive: {mr}");
    let dt = start.elapsed();
    assert!(dt.as_secs() < 120, "took {dt:?}");
    println!(
        "criterion 9 (subcritical components): PASS — max component {} <= {bound:.0}, MR sum {mr:.4}, {dt:?}",
        maxima.iter().max().unwrap()
    );
}

/// 10. Flip and subspace properties: cycle flips validated inline in
///     criteria 3, 6, and 7 above; here the oracle-scale closure samples.
#[test]
fn criterion_10_subspace_flip_properties() {
    let start = std::time::Instant::now();
    // Cycle flips at production scale, explicitly.
    let mut flips = 0usize;
    for trial in 0..20u64 {
        let n = 10_000usize;
        let seed = trial_seed(MASTER_SEED + 10, n as u64, 0.9f64.to_bits(), trial);
        let h = gen_hnm(n, 9_000, 3, seed).unwrap();
        flips += assert_cycle_flips(&h, "criterion 10");
    }
    // XOR closure on 1000 sampled solution pairs at oracle scale.
    let mut pairs = 0usize;
    let mut seedx = MASTER_SEED + 1010;
    while pairs < 1000 {
        seedx = xorgeo::seed::splitmix64(seedx);
        let h = gen_hnm(18, 18, 3, seedx).unwrap();
        let sys = system_of(&h);
        let Ok(sols) = gf2::enumerate_solutions(&sys, 4096) else { continue };
        if sols.len() < 2 {
            continue;
        }
        for i in 0..4usize.min(sols.len()) {
            let a = &sols[(seedx as usize + i) % sols.len()];
            let b = &sols[(seedx as usize / 3 + 2 * i) % sols.len()];
            assert_eq!(gf2::is_solution(&sys, &a.xor(b)), Ok(true));
            pairs += 1;
        }
    }
    let dt = start.elapsed();
    println!(
        "criterion 10 (subspace/flip properties): PASS — {flips} cycle flips at n=1e4, {pairs} closure pairs, {dt:?}"
    );
}
