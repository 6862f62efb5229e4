//! Flippable cycles, flippable/linked sets, and the contracted structure
//! Γ(S).
//!
//! A flippable set meets every edge an even number of times, so flipping it
//! maps solutions to solutions. A flippable cycle is the minimal kind: a
//! chain of degree-2 vertices whose incident edges close into a cycle.
//! Cycle detection works on the chain multigraph whose nodes are hyperedges
//! and whose links are the degree-2 vertices joining two distinct edges;
//! flippable cycles are exactly the simple cycles of length >= 2 there.

use std::collections::HashSet;

use thiserror::Error;

use crate::gf2::{self, Gf2System};
use crate::hypergraph::Hypergraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FlipError {
    #[error("hypergraph is not a 2-core: vertex {0} has degree 1")]
    NotACore(u32),
    #[error("empty vertex set")]
    EmptySet,
    #[error("set is not linked")]
    NotLinked,
    #[error("enumeration exceeds cap {0}")]
    CapExceeded(usize),
    #[error("cycle family exceeds {0} members; outside the sparse regime")]
    TooManyCycles(usize),
}

/// Guard against degenerate inputs whose cycle family is exponential.
const CYCLE_ENUM_CAP: usize = 1_000_000;

/// A flippable cycle: vertices in cyclic order; `edges[i]` joins
/// `vertices[i]` and `vertices[(i+1) % t]`. Every cycle vertex has ambient
/// degree exactly two; every listed edge contains exactly two of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlippableCycle {
    pub vertices: Vec<u32>,
    pub edges: Vec<u32>,
}

impl FlippableCycle {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// All flippable cycles of `h`, in a canonical order (each cycle starts at
/// its smallest vertex, oriented toward the smaller neighbor; cycles sorted
/// by starting vertex).
pub fn find_flippable_cycles(h: &Hypergraph) -> Result<Vec<FlippableCycle>, FlipError> {
    let inc = h.incidence();
    // Links of the chain multigraph: degree-2 vertices whose two incidences
    // lie in distinct edges.
    let mut link_edges: Vec<Option<(u32, u32)>> = vec![None; h.n()];
    let mut adj: std::collections::HashMap<u32, Vec<(u32, u32)>> = Default::default();
    for v in 0..h.n() as u32 {
        if h.degree(v) != 2 {
            continue;
        }
        let es = inc.edges_of(v);
        debug_assert_eq!(es.len(), 2);
        if es[0] == es[1] {
            continue; // loop vertex: single incident edge identity
        }
        link_edges[v as usize] = Some((es[0], es[1]));
        adj.entry(es[0]).or_default().push((v, es[1]));
        adj.entry(es[1]).or_default().push((v, es[0]));
    }

    // Only chain-components containing a cycle matter; acyclic path
    // components (the bulk near the core threshold) are pruned up front.
    // A multigraph component has a cycle iff links >= nodes.
    let mut parent: std::collections::HashMap<u32, u32> = Default::default();
    fn find_root(parent: &mut std::collections::HashMap<u32, u32>, x: u32) -> u32 {
        let mut x = x;
        while parent[&x] != x {
            let p = parent[&x];
            let gp = parent[&p];
            parent.insert(x, gp);
            x = p;
        }
        x
    }
    for &e in adj.keys() {
        parent.insert(e, e);
    }
    for l in link_edges.iter().flatten() {
        let (a, b) = (find_root(&mut parent, l.0), find_root(&mut parent, l.1));
        if a != b {
            parent.insert(a, b);
        }
    }
    let mut node_count: std::collections::HashMap<u32, i64> = Default::default();
    let roots: Vec<u32> = parent.keys().copied().collect();
    for e in roots {
        let r = find_root(&mut parent, e);
        *node_count.entry(r).or_default() += 1;
    }
    for l in link_edges.iter().flatten() {
        let r = find_root(&mut parent, l.0);
        *node_count.entry(r).or_default() -= 1;
    }
    // node_count[root] = nodes - links; cyclic iff <= 0.
    let mut cyclic = |e: u32| node_count[&find_root(&mut parent, e)] <= 0;

    // Enumerate simple cycles: each is found once, anchored at its smallest
    // link vertex, walking away through its smaller edge and closing through
    // the larger. Iterative DFS; `budget` caps degenerate inputs whose cycle
    // family is exponential.
    let mut cycles = Vec::new();
    let mut links: Vec<u32> = link_edges
        .iter()
        .enumerate()
        .filter_map(|(v, l)| l.map(|_| v as u32))
        .collect();
    links.sort_unstable();

    let mut budget = CYCLE_ENUM_CAP;
    let empty: Vec<(u32, u32)> = Vec::new();
    for &anchor in &links {
        let (e0, e1) = link_edges[anchor as usize].unwrap();
        if !cyclic(e0) {
            continue;
        }
        let (start, target) = (e0.min(e1), e0.max(e1));
        let mut used_edges = HashSet::from([start]);
        let mut used_links = HashSet::from([anchor]);
        let mut path_links: Vec<u32> = Vec::new();
        let mut path_edges: Vec<u32> = Vec::new();
        // Stack frame: (edge we sit on, next adjacency index to try).
        let mut stack: Vec<(u32, usize)> = vec![(start, 0)];
        while let Some(&mut (at_edge, ref mut next)) = stack.last_mut() {
            let neighbors = adj.get(&at_edge).unwrap_or(&empty);
            let Some(&(link, other)) = neighbors.get(*next) else {
                stack.pop();
                if let Some(prev_edge) = path_edges.pop() {
                    debug_assert_eq!(prev_edge, stack.last().unwrap().0);
                    let link = path_links.pop().unwrap();
                    used_links.remove(&link);
                    used_edges.remove(&at_edge);
                }
                continue;
            };
            *next += 1;
            if budget == 0 {
                return Err(FlipError::TooManyCycles(CYCLE_ENUM_CAP));
            }
            budget -= 1;
            if link <= anchor || used_links.contains(&link) {
                continue;
            }
            if other == target {
                // Close the cycle: anchor, then path links, then `link`.
                // edges[i] joins vertices[i] and vertices[i+1]; the target
                // edge wraps back to the anchor.
                let mut vertices = vec![anchor];
                vertices.extend(&path_links);
                vertices.push(link);
                let mut edges = path_edges.clone();
                edges.push(at_edge);
                edges.push(target);
                cycles.push(canonical_cycle(vertices, edges));
                if cycles.len() > CYCLE_ENUM_CAP {
                    return Err(FlipError::TooManyCycles(CYCLE_ENUM_CAP));
                }
                continue;
            }
            if used_edges.contains(&other) {
                continue;
            }
            used_links.insert(link);
            used_edges.insert(other);
            path_links.push(link);
            path_edges.push(at_edge);
            stack.push((other, 0));
        }
    }
    Ok(cycles)
}

/// Rotates so the smallest vertex is first while preserving the pairing
/// `edges[i]` joins `vertices[i]`, `vertices[i+1]`.
fn canonical_cycle(vertices: Vec<u32>, edges: Vec<u32>) -> FlippableCycle {
    let t = vertices.len();
    let pivot = (0..t).min_by_key(|&i| vertices[i]).unwrap();
    let vertices: Vec<u32> = (0..t).map(|i| vertices[(pivot + i) % t]).collect();
    let edges: Vec<u32> = (0..t).map(|i| edges[(pivot + i) % t]).collect();
    FlippableCycle { vertices, edges }
}

/// Flippable cycles of a 2-core (errors unless every incident vertex has
/// degree at least two).
pub fn find_core_flippable_cycles(core: &Hypergraph) -> Result<Vec<FlippableCycle>, FlipError> {
    if let Some(v) = (0..core.n() as u32).find(|&v| core.degree(v) == 1) {
        return Err(FlipError::NotACore(v));
    }
    find_flippable_cycles(core)
}

/// Whether every edge of `h` contains an even number of members of `s`
/// (loops counted with multiplicity).
pub fn is_flippable_set(h: &Hypergraph, s: &[u32]) -> Result<bool, FlipError> {
    if s.is_empty() {
        return Err(FlipError::EmptySet);
    }
    let mut in_s = vec![false; h.n()];
    for &v in s {
        in_s[v as usize] = true;
    }
    Ok(h
        .edges()
        .all(|e| e.iter().filter(|&&v| in_s[v as usize]).count() % 2 == 0))
}

/// One maximal 2-linked path of a set S: endpoint vertices, the chain of
/// edges, and the interior connecting vertices (ambient degree 2).
#[derive(Clone, Debug)]
pub struct TwoLinkedPath {
    pub endpoints: (u32, u32),
    pub edges: Vec<u32>,
    pub connectors: Vec<u32>,
}

/// Decomposition of the |e ∩ S| = 2 edges of a linked set into maximal
/// 2-linked paths; `None` when no valid decomposition exists.
fn two_linked_paths(h: &Hypergraph, s: &[u32]) -> Option<Vec<TwoLinkedPath>> {
    let inc = h.incidence();
    let mut in_s = vec![false; h.n()];
    for &v in s {
        in_s[v as usize] = true;
    }
    let m = h.m();
    // Count |e ∩ S| with multiplicity; remember the (distinct) members.
    let mut count = vec![0u32; m];
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); m];
    let mut simple = vec![true; m];
    for (e, edge) in h.edges().enumerate() {
        if edge.windows(2).any(|w| w[0] == w[1]) {
            simple[e] = false;
        }
        for &v in edge {
            if in_s[v as usize] {
                count[e] += 1;
                if !members[e].contains(&v) {
                    members[e].push(v);
                }
            }
        }
    }

    // Path edges must be simple with exactly two members of S.
    let path_edge = |e: u32| simple[e as usize] && count[e as usize] == 2;
    // Every |e ∩ S| = 2 edge must end up on a path; one that cannot be a
    // path edge already disqualifies the set.
    if (0..m as u32).any(|e| count[e as usize] == 2 && !path_edge(e)) {
        return None;
    }

    // A connector extends a path: in S, ambient degree 2, both incident
    // edges distinct path edges.
    let connector = |v: u32| {
        in_s[v as usize] && h.degree(v) == 2 && {
            let es = inc.edges_of(v);
            es[0] != es[1] && path_edge(es[0]) && path_edge(es[1])
        }
    };

    let mut used = vec![false; m];
    let mut paths = Vec::new();
    for e0 in 0..m as u32 {
        if !path_edge(e0) || used[e0 as usize] {
            continue;
        }
        // Grow the chain in both directions from e0.
        used[e0 as usize] = true;
        let ends = (members[e0 as usize][0], members[e0 as usize][1]);
        let mut edges = vec![e0];
        let mut connectors = Vec::new();
        let mut grow = |mut v: u32, mut cur: u32, edges: &mut Vec<u32>, conns: &mut Vec<u32>, front: bool| -> Option<u32> {
            while connector(v) {
                let es = inc.edges_of(v);
                let nxt = if es[0] == cur { es[1] } else { es[0] };
                if used[nxt as usize] {
                    // Closed back onto the chain: a connector cycle, i.e. a
                    // flippable cycle inside S.
                    return None;
                }
                used[nxt as usize] = true;
                if front {
                    edges.insert(0, nxt);
                } else {
                    edges.push(nxt);
                }
                conns.push(v);
                let mem = &members[nxt as usize];
                v = if mem[0] == v { mem[1] } else { mem[0] };
                cur = nxt;
            }
            Some(v)
        };
        let tail = grow(ends.1, e0, &mut edges, &mut connectors, false)?;
        let head = grow(ends.0, e0, &mut edges, &mut connectors, true);
        let head = head?;

        if head == tail {
            // A closed chain (equal endpoints) needs at least two edges and a
            // branching endpoint, else it would be a flippable cycle.
            if edges.len() < 2 || h.degree(head) == 2 {
                return None;
            }
        } else {
            // Maximality: each endpoint has degree != 2, or lies in an
            // off-path edge meeting S differently than twice.
            for &endpoint in &[head, tail] {
                if h.degree(endpoint) == 2 {
                    let off: Vec<u32> = inc
                        .edges_of(endpoint)
                        .iter()
                        .copied()
                        .filter(|&e| !edges.contains(&e))
                        .collect();
                    if off.iter().all(|&e| count[e as usize] == 2) {
                        return None;
                    }
                }
            }
        }
        paths.push(TwoLinkedPath { endpoints: (head, tail), edges, connectors });
    }
    Some(paths)
}

/// Definition of a linked set: no flippable cycle inside `s` (a set equal
/// to a flippable cycle counts as containing one), no edge meeting `s`
/// exactly once, and every edge meeting it exactly twice lies on a
/// 2-linked path of `s`.
///
/// Panics if the ambient cycle family is too large to enumerate (degenerate
/// inputs far outside the sparse random regime).
pub fn is_linked_set(h: &Hypergraph, s: &[u32]) -> bool {
    if s.is_empty() {
        return false;
    }
    let mut in_s = vec![false; h.n()];
    for &v in s {
        in_s[v as usize] = true;
    }
    for e in h.edges() {
        if e.iter().filter(|&&v| in_s[v as usize]).count() == 1 {
            return false;
        }
    }
    let cycles = find_flippable_cycles(h).expect("cycle enumeration within cap");
    if cycles
        .iter()
        .any(|c| c.vertices.iter().all(|&v| in_s[v as usize]))
    {
        return false;
    }
    two_linked_paths(h, s).is_some()
}

/// The contracted structure Γ(S): endpoints of 2-linked paths plus the
/// S-vertices on no path; one 2-edge per path (loops allowed); one i-edge
/// per hyperedge with |e ∩ S| = i > 2 (multiplicity preserved).
#[derive(Clone, Debug)]
pub struct GammaStructure {
    pub vertices: Vec<u32>,
    /// One entry per 2-linked path: its endpoint pair.
    pub two_edges: Vec<(u32, u32)>,
    /// Contractions e ∩ S of hyperedges meeting S in more than two vertices.
    pub hyperedges: Vec<Vec<u32>>,
    /// `ell[i]` = number of i-edges in Γ, for 2 <= i <= k.
    pub ell: Vec<usize>,
}

impl GammaStructure {
    /// Sum over i of (i-1) * ell_i.
    pub fn weighted_edge_sum(&self) -> usize {
        self.ell.iter().enumerate().map(|(i, &l)| i.saturating_sub(1) * l).sum()
    }

    /// The minimum-degree-2 density inequality:
    /// sum (i-1) ell_i >= (1 + 1/(2k)) |V(Γ)|.
    pub fn density_inequality_holds(&self, k: usize) -> bool {
        let lhs = self.weighted_edge_sum() as f64;
        lhs >= (1.0 + 1.0 / (2.0 * k as f64)) * self.vertices.len() as f64
    }
}

pub fn build_gamma(h: &Hypergraph, s: &[u32]) -> Result<GammaStructure, FlipError> {
    if !is_linked_set(h, s) {
        return Err(FlipError::NotLinked);
    }
    let paths = two_linked_paths(h, s).expect("linked set has a path decomposition");
    let mut in_s = vec![false; h.n()];
    for &v in s {
        in_s[v as usize] = true;
    }
    let mut on_path = vec![false; h.n()];
    for p in &paths {
        for &c in &p.connectors {
            on_path[c as usize] = true;
        }
        on_path[p.endpoints.0 as usize] = true;
        on_path[p.endpoints.1 as usize] = true;
    }
    let mut vertices: HashSet<u32> = s.iter().copied().filter(|&v| !on_path[v as usize]).collect();
    for p in &paths {
        vertices.insert(p.endpoints.0);
        vertices.insert(p.endpoints.1);
    }
    let mut vertices: Vec<u32> = vertices.into_iter().collect();
    vertices.sort_unstable();

    let k = h.k();
    let mut ell = vec![0usize; k + 1];
    let two_edges: Vec<(u32, u32)> = paths.iter().map(|p| p.endpoints).collect();
    ell[2] = two_edges.len();
    let mut hyperedges = Vec::new();
    for e in h.edges() {
        let contracted: Vec<u32> =
            e.iter().copied().filter(|&v| in_s[v as usize]).collect();
        if contracted.len() > 2 {
            ell[contracted.len()] += 1;
            hyperedges.push(contracted);
        }
    }
    Ok(GammaStructure { vertices, two_edges, hyperedges, ell })
}

/// All minimal flippable sets of a core: kernel supports of the core system
/// filtered by subset-minimality. Only feasible when the active vertex set
/// is small; `cap` bounds the kernel enumeration.
pub fn minimal_flippable_sets(core: &Hypergraph, cap: usize) -> Result<Vec<Vec<u32>>, FlipError> {
    let active: Vec<u32> = (0..core.n() as u32).filter(|&v| core.degree(v) > 0).collect();
    if active.len() > 24 {
        return Err(FlipError::CapExceeded(cap));
    }
    let index_of: std::collections::HashMap<u32, u32> =
        active.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
    let rows: Vec<Vec<u32>> = core
        .edges()
        .map(|e| e.iter().map(|&v| index_of[&v]).collect())
        .collect();
    let sys = Gf2System::new(active.len(), rows);
    let rk = gf2::rank_and_kernel(&sys);
    let dim = active.len() - rk.rank;
    if dim >= usize::BITS as usize || (1usize << dim) > cap {
        return Err(FlipError::CapExceeded(cap));
    }
    let basis_masks: Vec<u32> = rk
        .kernel_basis
        .iter()
        .map(|v| v.ones().iter().fold(0u32, |acc, &i| acc | 1 << i))
        .collect();
    let mut supports: Vec<u32> = Vec::with_capacity((1 << dim) - 1);
    for mask in 1usize..1 << dim {
        let mut s = 0u32;
        for (b, &bm) in basis_masks.iter().enumerate() {
            if mask >> b & 1 == 1 {
                s ^= bm;
            }
        }
        if s != 0 {
            supports.push(s);
        }
    }
    supports.sort_unstable_by_key(|s| (s.count_ones(), *s));
    supports.dedup();
    let mut minimal: Vec<u32> = Vec::new();
    'outer: for &s in &supports {
        for &m in &minimal {
            if m & s == m {
                continue 'outer; // a kept set is contained in s
            }
        }
        minimal.push(s);
    }
    let mut out: Vec<Vec<u32>> = minimal
        .into_iter()
        .map(|mask| {
            (0..active.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| active[i])
                .collect()
        })
        .collect();
    out.sort();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleMass {
    pub cycle_count: usize,
    /// Distinct vertices lying on at least one cycle.
    pub total_vertices: usize,
    /// False when some vertex lies on two cycles.
    pub disjoint: bool,
}

/// Aggregate cycle statistics; disjointness is the Lemma-style check that
/// no vertex lies on two flippable cycles.
pub fn cycle_mass_statistic(h: &Hypergraph) -> Result<CycleMass, FlipError> {
    let cycles = find_flippable_cycles(h)?;
    let mut seen = HashSet::new();
    let mut disjoint = true;
    for c in &cycles {
        for &v in &c.vertices {
            if !seen.insert(v) {
                disjoint = false;
            }
        }
    }
    Ok(CycleMass { cycle_count: cycles.len(), total_vertices: seen.len(), disjoint })
}

/// Test-support builders: hypergraphs of minimum degree 2 carrying known
/// linked sets.
pub mod builder {
    use super::*;
    use crate::hypergraph::gen_hnm;
    use crate::peel::r_core;
    use crate::seed::splitmix64;

    /// A fixed theta-shaped instance: two hubs joined by three chains, with
    /// fillers shared between chains so every vertex has degree 2 or 3. The
    /// linked set is both hubs plus the three chain middles.
    pub fn theta_instance() -> (Hypergraph, Vec<u32>) {
        // a=0, b=1, x1..x3 = 2..4, f1..f3 = 5..7
        let h = Hypergraph::new(
            8,
            3,
            [
                [0u32, 2, 5],
                [2, 1, 6],
                [0, 3, 6],
                [3, 1, 7],
                [0, 4, 7],
                [4, 1, 5],
            ],
        );
        (h, vec![0, 1, 2, 3, 4])
    }

    /// Samples up to `count` linked sets inside 2-cores of small random
    /// hypergraphs. Each sample is a (core, set) pair where the core has
    /// minimum degree 2 and the set is flippable with no cycle inside it.
    pub fn sample_linked_sets(
        k: usize,
        n: usize,
        m: usize,
        count: usize,
        seed: u64,
    ) -> Vec<(Hypergraph, Vec<u32>)> {
        let mut out = Vec::new();
        let mut attempt = 0u64;
        while out.len() < count && attempt < 400_000 {
            let s = splitmix64(seed.wrapping_add(attempt));
            attempt += 1;
            let Ok(h) = gen_hnm(n, m, k, s) else { continue };
            let (core, _) = r_core(&h, 2);
            if core.m() == 0 {
                continue;
            }
            let Ok(cycles) = find_flippable_cycles(&core) else { continue };
            let Ok(minimal) = minimal_flippable_sets(&core, 4096) else { continue };
            for set in minimal {
                // Reduce away any cycles fully inside the candidate.
                let mut current: std::collections::BTreeSet<u32> = set.iter().copied().collect();
                loop {
                    let inside = cycles
                        .iter()
                        .find(|c| c.vertices.iter().all(|v| current.contains(v)));
                    match inside {
                        Some(c) => {
                            for v in &c.vertices {
                                current.remove(v);
                            }
                        }
                        None => break,
                    }
                }
                if current.is_empty() {
                    continue;
                }
                let cand: Vec<u32> = current.into_iter().collect();
                if is_flippable_set(&core, &cand) == Ok(true) && is_linked_set(&core, &cand) {
                    out.push((core.clone(), cand));
                    if out.len() >= count {
                        break;
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_c() -> Hypergraph {
        Hypergraph::new(4, 3, [[2u32, 0, 3], [0, 1, 3], [1, 2, 3]])
    }

    #[test]
    fn example_c_single_cycle() {
        let mass = cycle_mass_statistic(&example_c()).unwrap();
        assert_eq!(mass, CycleMass { cycle_count: 1, total_vertices: 3, disjoint: true });
        let cycles = find_core_flippable_cycles(&example_c()).unwrap();
        assert_eq!(cycles.len(), 1);
        let c = &cycles[0];
        let mut vs = c.vertices.clone();
        vs.sort_unstable();
        assert_eq!(vs, vec![0, 1, 2]);
        assert_eq!(c.len(), 3);
        // Pairing: edges[i] contains vertices[i] and vertices[i+1].
        let h = example_c();
        for i in 0..c.len() {
            let e = h.edge(c.edges[i] as usize);
            assert!(e.contains(&c.vertices[i]));
            assert!(e.contains(&c.vertices[(i + 1) % c.len()]));
        }
    }

    #[test]
    fn min_degree_three_core_has_no_cycles() {
        // Complete 3-uniform hypergraph on 5 vertices: min degree 6.
        let edges: Vec<[u32; 3]> = (0..5u32)
            .flat_map(|a| {
                (a + 1..5).flat_map(move |b| (b + 1..5).map(move |c| [a, b, c]))
            })
            .collect();
        let h = Hypergraph::new(5, 3, edges);
        assert!(find_core_flippable_cycles(&h).unwrap().is_empty());
    }

    #[test]
    fn disjoint_copies_give_two_cycles() {
        let mut edges: Vec<Vec<u32>> = example_c().edges().map(|e| e.to_vec()).collect();
        edges.extend(
            example_c()
                .edges()
                .map(|e| e.iter().map(|&v| v + 4).collect::<Vec<u32>>()),
        );
        let h = Hypergraph::new(8, 3, edges);
        let cycles = find_core_flippable_cycles(&h).unwrap();
        assert_eq!(cycles.len(), 2);
        let mass = cycle_mass_statistic(&h).unwrap();
        assert_eq!(mass, CycleMass { cycle_count: 2, total_vertices: 6, disjoint: true });
    }

    #[test]
    fn not_a_core_rejected() {
        let path = Hypergraph::new(3, 2, [[0u32, 1], [1, 2]]);
        assert_eq!(find_core_flippable_cycles(&path), Err(FlipError::NotACore(0)));
    }

    #[test]
    fn two_cycle_between_parallel_edges() {
        // Two k=3 edges sharing two degree-2 vertices: a length-2 cycle.
        let h = Hypergraph::new(6, 3, [[0u32, 1, 2], [0, 1, 3], [2, 4, 5], [3, 4, 5], [2, 3, 4], [2, 3, 5]]);
        // Degrees: 0:2, 1:2 (cycle candidates), rest higher.
        let cycles = find_flippable_cycles(&h).unwrap();
        assert!(cycles.iter().any(|c| {
            let mut v = c.vertices.clone();
            v.sort_unstable();
            v == vec![0, 1]
        }));
    }

    #[test]
    fn flippable_set_checks() {
        let h = example_c();
        assert_eq!(is_flippable_set(&h, &[0, 1, 2]), Ok(true));
        assert_eq!(is_flippable_set(&h, &[0]), Ok(false));
        assert_eq!(is_flippable_set(&h, &[]), Err(FlipError::EmptySet));
    }

    #[test]
    fn flippable_set_counts_loops_with_multiplicity() {
        // Edge {0,0,1}: s={1} leaves odd parity; s={0,1} has count 3 -> odd.
        let h = Hypergraph::new(2, 3, [[0u32, 0, 1]]);
        assert_eq!(is_flippable_set(&h, &[1]), Ok(false));
        assert_eq!(is_flippable_set(&h, &[0, 1]), Ok(false));
        assert_eq!(is_flippable_set(&h, &[0]), Ok(true)); // count 2
    }

    #[test]
    fn cycle_is_not_linked() {
        let h = example_c();
        assert!(!is_linked_set(&h, &[0, 1, 2]));
        assert!(matches!(build_gamma(&h, &[0, 1, 2]), Err(FlipError::NotLinked)));
    }

    #[test]
    fn minimal_sets_cap() {
        // 30 active vertices exceed the exhaustive bound.
        let edges: Vec<[u32; 3]> = (0..10u32).map(|i| [3 * i, 3 * i + 1, 3 * i + 2]).collect();
        let big = Hypergraph::new(30, 3, edges);
        assert!(matches!(minimal_flippable_sets(&big, 1 << 20), Err(FlipError::CapExceeded(_))));
        // Kernel dimension (here 2, so 4 combinations) blows a small cap.
        let loose = Hypergraph::new(20, 3, [[0u32, 1, 2]]);
        assert!(matches!(minimal_flippable_sets(&loose, 3), Err(FlipError::CapExceeded(3))));
    }

    #[test]
    fn edge_meeting_once_not_linked() {
        let h = example_c();
        assert!(!is_linked_set(&h, &[0]));
    }

    #[test]
    fn theta_set_is_linked_with_three_paths() {
        let (h, s) = builder::theta_instance();
        assert_eq!(is_flippable_set(&h, &s), Ok(true));
        assert!(is_linked_set(&h, &s));
        let gamma = build_gamma(&h, &s).unwrap();
        let mut vs = gamma.vertices.clone();
        vs.sort_unstable();
        assert_eq!(vs, vec![0, 1]);
        assert_eq!(gamma.ell[2], 3);
        assert_eq!(gamma.weighted_edge_sum(), 3);
        assert!(gamma.density_inequality_holds(3));
        // Proposition-style bound: 1 <= |Γ| <= |S|.
        assert!(!gamma.vertices.is_empty() && gamma.vertices.len() <= s.len());
    }

    #[test]
    fn gamma_single_chain() {
        // Endpoints 0 and 2 joined by a chain of two edges through the
        // degree-2 connector 1 (all three in S): Γ has the endpoints only
        // and a single 2-edge.
        let h = Hypergraph::new(5, 3, [[0u32, 1, 3], [1, 2, 4]]);
        let s = vec![0, 1, 2];
        assert!(is_linked_set(&h, &s));
        let gamma = build_gamma(&h, &s).unwrap();
        assert_eq!(gamma.vertices, vec![0, 2]);
        assert_eq!(gamma.two_edges.len(), 1);
        assert_eq!(gamma.ell[2], 1);
        assert_eq!(gamma.two_edges[0], (0, 2));
    }

    #[test]
    fn gamma_all_triple_edges() {
        // Every edge meets S in 3 vertices: ell_2 = 0, ell_3 = edge count.
        let h = Hypergraph::new(
            4,
            3,
            [[0u32, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]],
        );
        let s = vec![0, 1, 2, 3];
        assert!(is_linked_set(&h, &s));
        let gamma = build_gamma(&h, &s).unwrap();
        assert_eq!(gamma.ell[2], 0);
        assert_eq!(gamma.ell[3], 4);
        assert_eq!(gamma.vertices.len(), 4);
        assert!(gamma.density_inequality_holds(3));
    }

    #[test]
    fn minimal_sets_example_c() {
        let h = example_c();
        let sets = minimal_flippable_sets(&h, 1024).unwrap();
        assert_eq!(sets, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn minimal_sets_doubled_edge() {
        // Two identical edges on 3 vertices: rank 1, kernel dim 2.
        // Supports {0,1}, {0,2}, {1,2} are all minimal.
        let h = Hypergraph::new(3, 3, [[0u32, 1, 2], [0, 1, 2]]);
        let sets = minimal_flippable_sets(&h, 1024).unwrap();
        assert_eq!(sets.len(), 3);
    }

    #[test]
    fn minimal_sets_empty_kernel() {
        // K4 3-uniform has a full-rank system on its 4 vertices.
        let h = Hypergraph::new(4, 3, [[0u32, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]);
        let sets = minimal_flippable_sets(&h, 1024).unwrap();
        assert!(sets.is_empty());
    }

    #[test]
    fn minimal_sets_disjoint_union() {
        let mut edges: Vec<Vec<u32>> = example_c().edges().map(|e| e.to_vec()).collect();
        edges.extend(
            example_c()
                .edges()
                .map(|e| e.iter().map(|&v| v + 4).collect::<Vec<u32>>()),
        );
        let h = Hypergraph::new(8, 3, edges);
        let sets = minimal_flippable_sets(&h, 1024).unwrap();
        assert_eq!(sets, vec![vec![0, 1, 2], vec![4, 5, 6]]);
    }

    #[test]
    fn cycle_proper_subsets_not_flippable() {
        let h = example_c();
        let cycles = find_core_flippable_cycles(&h).unwrap();
        let c = &cycles[0].vertices;
        for mask in 1u32..(1 << c.len()) - 1 {
            let subset: Vec<u32> = c
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            assert_eq!(is_flippable_set(&h, &subset), Ok(false), "subset {subset:?}");
        }
    }

    #[test]
    fn builder_samples_are_linked() {
        let samples = builder::sample_linked_sets(3, 24, 26, 5, 12345);
        assert!(!samples.is_empty(), "builder found no linked sets");
        for (core, s) in &samples {
            assert!(is_linked_set(core, s));
            let gamma = build_gamma(core, s).unwrap();
            assert!(!gamma.vertices.is_empty() && gamma.vertices.len() <= s.len());
            assert!(gamma.density_inequality_holds(core.k()));
        }
    }
}
