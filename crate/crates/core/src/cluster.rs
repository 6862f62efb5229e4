//! Solution-space geometry: free variables, chi-maps, clusters, frozen
//! variables, and intra-cluster walks.
//!
//! Built from a terminal 2-stripping trace. The free set B holds one
//! representative per core flippable cycle plus every stripped vertex of
//! indegree zero in the stripping digraph. Processing cycle equations and
//! then the stripped equations in reverse removal order expresses every
//! variable as a parity of B plus fixed core vertices (the chi-map); the
//! 2^|B| assignments to B enumerate one cluster, and toggling one b at a
//! time walks between any two solutions of a cluster.
//!
//! The free-variable construction itself only inspects the hypergraph, so
//! it applies to any uniquely extendable constraint type; the solution
//! semantics implemented here are XOR (GF(2), zero right-hand sides) only.

use thiserror::Error;

use crate::flip::{find_core_flippable_cycles, FlippableCycle};
use crate::gf2::{self, BitAssignment, Gf2System};
use crate::hypergraph::Hypergraph;
use crate::peel::{StripDigraph, StrippingTrace};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClusterError {
    #[error("core flippable cycles overlap at vertex {0}; outside the disjoint regime")]
    OverlappingCycles(u32),
    #[error("trace was taken at r = {0}, cluster geometry needs r = 2")]
    NotTwoCore(u32),
    #[error("assignment is not a solution")]
    NotASolution,
    #[error("assignment does not solve the core system")]
    NotACoreSolution,
    #[error("solutions lie in different clusters")]
    DifferentClusters,
    #[error("free bits: expected {want}, got {got}")]
    FreeBitsMismatch { want: usize, got: usize },
    #[error("structure inconsistent: kernel dimension {kernel} below |B| = {b}")]
    InconsistentStructure { kernel: usize, b: usize },
    #[error("solution set of size {0} exceeds the oracle cap {1}")]
    TooManySolutions(usize, usize),
    #[error(transparent)]
    Flip(#[from] crate::flip::FlipError),
}

/// The cluster decomposition of a 2-stripped system.
pub struct ClusterStructure {
    n: usize,
    system: Gf2System,
    /// Core vertices not on any core flippable cycle, ascending.
    pub fixed: Vec<u32>,
    /// Core flippable cycles (vertex ids of the input hypergraph).
    pub cycles: Vec<FlippableCycle>,
    /// Lowest-index vertex of each cycle, aligned with `cycles`.
    pub reps: Vec<u32>,
    /// Free variables: cycle representatives plus indegree-0 stripped
    /// vertices, ascending.
    pub b_set: Vec<u32>,
    is_b: Vec<bool>,
    is_core: Vec<bool>,
    /// rep vertex -> cycle index.
    rep_cycle: Vec<(u32, u32)>,
    chi_off: Vec<u32>,
    chi_items: Vec<u32>,
    dep_off: Vec<u32>,
    dep_items: Vec<u32>,
    /// Stripped vertices in removal order with their live edge (if any),
    /// stored as the edge's full vertex list.
    strip_order: Vec<u32>,
    strip_edge_off: Vec<u32>,
    strip_edge_items: Vec<u32>,
    /// Row ids of the full system that form the core subsystem.
    core_row_ids: Vec<u32>,
}

impl ClusterStructure {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn system(&self) -> &Gf2System {
        &self.system
    }

    /// chi(v): the parity support of v over B and the fixed vertices.
    pub fn chi(&self, v: u32) -> &[u32] {
        &self.chi_items[self.chi_off[v as usize] as usize..self.chi_off[v as usize + 1] as usize]
    }

    /// Vertices u with b in chi(u) (b itself included).
    pub fn dependents(&self, b_index: usize) -> &[u32] {
        &self.dep_items[self.dep_off[b_index] as usize..self.dep_off[b_index + 1] as usize]
    }

    /// The full toggle support of the free variable `b_set[b_index]`: every
    /// vertex that changes when this free bit flips. For a cycle
    /// representative this includes the whole cycle.
    pub fn toggle_support(&self, b_index: usize) -> Vec<u32> {
        let mut support: Vec<u32> = self.dependents(b_index).to_vec();
        let b = self.b_set[b_index];
        if let Some(&(_, ci)) = self.rep_cycle.iter().find(|&&(rep, _)| rep == b) {
            support.extend(&self.cycles[ci as usize].vertices);
            support.sort_unstable();
            support.dedup();
        }
        support
    }

    pub fn max_toggle_support(&self) -> usize {
        (0..self.b_set.len()).map(|i| self.toggle_support(i).len()).max().unwrap_or(0)
    }

    fn is_core_solution(&self, x: &BitAssignment) -> bool {
        self.core_row_ids.iter().all(|&row| {
            self.system.rows()[row as usize]
                .iter()
                .filter(|&&v| x.get(v as usize))
                .count()
                % 2
                == 0
        })
    }
}

/// Builds the cluster structure from a 2-stripping trace and its digraph.
pub fn build_cluster_structure(
    h: &Hypergraph,
    trace: &StrippingTrace,
    digraph: &StripDigraph,
) -> Result<ClusterStructure, ClusterError> {
    if trace.r != 2 {
        return Err(ClusterError::NotTwoCore(trace.r));
    }
    let n = h.n();
    let core = Hypergraph::new(n, h.k(), trace.core_edges.iter().map(|&e| h.edge(e as usize)));
    let cycles = find_core_flippable_cycles(&core)?;

    let mut on_cycle = vec![false; n];
    for c in &cycles {
        for &v in &c.vertices {
            if on_cycle[v as usize] {
                return Err(ClusterError::OverlappingCycles(v));
            }
            on_cycle[v as usize] = true;
        }
    }

    let is_core: Vec<bool> = (0..n as u32).map(|v| trace.is_core_vertex(v)).collect();
    let mut is_fixed = vec![false; n];
    let mut fixed = Vec::new();
    for v in 0..n as u32 {
        if is_core[v as usize] && !on_cycle[v as usize] {
            is_fixed[v as usize] = true;
            fixed.push(v);
        }
    }

    let reps: Vec<u32> = cycles
        .iter()
        .map(|c| *c.vertices.iter().min().expect("cycles are nonempty"))
        .collect();
    let rep_cycle: Vec<(u32, u32)> =
        reps.iter().enumerate().map(|(i, &rep)| (rep, i as u32)).collect();

    let mut b_set: Vec<u32> = reps.clone();
    for (pos, &v) in trace.order.iter().enumerate() {
        if trace.live_edges(pos).is_empty() {
            debug_assert_eq!(digraph.indegree[v as usize], 0);
            b_set.push(v);
        }
    }
    b_set.sort_unstable();
    let mut is_b = vec![false; n];
    for &b in &b_set {
        is_b[b as usize] = true;
    }

    // chi: fixed and B vertices map to themselves; cycle vertices map to
    // their representative; stripped vertices (reverse removal order) take
    // the symmetric difference over the other members of their live edge.
    let mut chi: Vec<Vec<u32>> = vec![Vec::new(); n];
    for v in 0..n as u32 {
        if is_fixed[v as usize] || is_b[v as usize] {
            chi[v as usize] = vec![v];
        }
    }
    for (ci, c) in cycles.iter().enumerate() {
        for &v in &c.vertices {
            chi[v as usize] = vec![reps[ci]];
        }
    }
    for pos in (0..trace.order.len()).rev() {
        let v = trace.order[pos];
        let live = trace.live_edges(pos);
        if live.is_empty() {
            continue; // v in B, chi already {v}
        }
        debug_assert_eq!(live.len(), 1);
        let edge = h.edge(live[0] as usize);
        let mut acc: Vec<u32> = Vec::new();
        for &u in edge {
            if u != v {
                acc = symdiff(&acc, &chi[u as usize]);
            }
        }
        chi[v as usize] = acc;
    }

    let mut chi_off = vec![0u32; n + 1];
    let mut chi_items = Vec::new();
    for v in 0..n {
        chi_items.extend_from_slice(&chi[v]);
        chi_off[v + 1] = chi_items.len() as u32;
    }

    // dependents(b) = { u : b in chi(u) }, via one inversion pass.
    let b_index_of: std::collections::HashMap<u32, u32> =
        b_set.iter().enumerate().map(|(i, &b)| (b, i as u32)).collect();
    let mut deps: Vec<Vec<u32>> = vec![Vec::new(); b_set.len()];
    for u in 0..n as u32 {
        for &b in &chi[u as usize] {
            if let Some(&bi) = b_index_of.get(&b) {
                deps[bi as usize].push(u);
            }
        }
    }
    let mut dep_off = vec![0u32; b_set.len() + 1];
    let mut dep_items = Vec::new();
    for (i, d) in deps.iter().enumerate() {
        dep_items.extend_from_slice(d);
        dep_off[i + 1] = dep_items.len() as u32;
    }

    // Replay data for extensions.
    let mut strip_edge_off = vec![0u32];
    let mut strip_edge_items = Vec::new();
    for pos in 0..trace.order.len() {
        let live = trace.live_edges(pos);
        if let Some(&e) = live.first() {
            strip_edge_items.extend_from_slice(h.edge(e as usize));
        }
        strip_edge_off.push(strip_edge_items.len() as u32);
    }

    let system = Gf2System::new(n, h.edges().map(|e| e.to_vec()).collect());
    Ok(ClusterStructure {
        n,
        system,
        fixed,
        cycles,
        reps,
        b_set,
        is_b,
        is_core,
        rep_cycle,
        chi_off,
        chi_items,
        dep_off,
        dep_items,
        strip_order: trace.order.clone(),
        strip_edge_off,
        strip_edge_items,
        core_row_ids: trace.core_edges.clone(),
    })
}

fn symdiff(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Frozen variables: fixed core vertices plus stripped vertices whose chi
/// has no free member. Identical for every cluster.
pub fn frozen_variables(cs: &ClusterStructure) -> Vec<u32> {
    let mut out = cs.fixed.clone();
    for &v in &cs.strip_order {
        if cs.is_b[v as usize] {
            continue;
        }
        if cs.chi(v).iter().all(|&w| !cs.is_b[w as usize]) {
            out.push(v);
        }
    }
    out.sort_unstable();
    out
}

/// Whether two solutions are cycle-equivalent: their core disagreement is
/// confined to core flippable cycles.
pub fn same_cluster(
    cs: &ClusterStructure,
    x: &BitAssignment,
    y: &BitAssignment,
) -> Result<bool, ClusterError> {
    for z in [x, y] {
        if !gf2::is_solution(&cs.system, z).map_err(|_| ClusterError::NotASolution)? {
            return Err(ClusterError::NotASolution);
        }
    }
    let mut on_cycle = vec![false; cs.n];
    for c in &cs.cycles {
        for &v in &c.vertices {
            on_cycle[v as usize] = true;
        }
    }
    for v in 0..cs.n {
        if cs.is_core[v] && x.get(v) != y.get(v) && !on_cycle[v] {
            return Ok(false);
        }
    }
    // Disagreement meets each cycle all-or-nothing (cycles are minimal
    // flippable sets).
    for c in &cs.cycles {
        let diff_count =
            c.vertices.iter().filter(|&&v| x.get(v as usize) != y.get(v as usize)).count();
        assert!(
            diff_count == 0 || diff_count == c.vertices.len(),
            "partial cycle disagreement: {diff_count} of {}",
            c.vertices.len()
        );
    }
    Ok(true)
}

/// Exact cluster counting: `log2` of the cluster size and of the number of
/// clusters. The full-system rank decomposes along the trace as
/// rank(core rows) + #(nonempty live-edge sets): stripped pivot variables
/// are eliminated one per live edge, so only the core needs elimination.
pub fn cluster_count(
    cs: &ClusterStructure,
    sys: &Gf2System,
) -> Result<(usize, usize), ClusterError> {
    let core_rows: Vec<Vec<u32>> =
        cs.core_row_ids.iter().map(|&r| sys.rows()[r as usize].clone()).collect();
    let core_rank = gf2::rank(&Gf2System::new(sys.n(), core_rows));
    let nonempty = (0..cs.strip_order.len())
        .filter(|&pos| cs.strip_edge_off[pos + 1] > cs.strip_edge_off[pos])
        .count();
    let rank = core_rank + nonempty;
    let kernel = sys.n() - rank;
    let b = cs.b_set.len();
    if kernel < b {
        return Err(ClusterError::InconsistentStructure { kernel, b });
    }
    Ok((kernel - b, b))
}

/// log2 of the number of clusters.
pub fn log2_clusters(cs: &ClusterStructure, sys: &Gf2System) -> Result<usize, ClusterError> {
    cluster_count(cs, sys).map(|(clusters, _)| clusters)
}

/// Extends a core solution to a full solution. `core_sol` is read on core
/// positions only; `free_bits` assigns the non-representative members of B
/// in ascending vertex order. Stripped variables are replayed in reverse
/// removal order through their live equations.
pub fn extend_core_solution(
    cs: &ClusterStructure,
    core_sol: &BitAssignment,
    free_bits: &[bool],
) -> Result<BitAssignment, ClusterError> {
    if core_sol.len() != cs.n {
        return Err(ClusterError::NotACoreSolution);
    }
    if !cs.is_core_solution(core_sol) {
        return Err(ClusterError::NotACoreSolution);
    }
    let free_vars: Vec<u32> =
        cs.b_set.iter().copied().filter(|&b| !cs.is_core[b as usize]).collect();
    if free_bits.len() != free_vars.len() {
        return Err(ClusterError::FreeBitsMismatch { want: free_vars.len(), got: free_bits.len() });
    }

    let mut x = BitAssignment::zeros(cs.n);
    for v in 0..cs.n {
        if cs.is_core[v] {
            x.set(v, core_sol.get(v));
        }
    }
    for (&b, &bit) in free_vars.iter().zip(free_bits) {
        x.set(b as usize, bit);
    }
    for pos in (0..cs.strip_order.len()).rev() {
        let (lo, hi) = (cs.strip_edge_off[pos] as usize, cs.strip_edge_off[pos + 1] as usize);
        if lo == hi {
            continue;
        }
        let v = cs.strip_order[pos];
        let parity = cs.strip_edge_items[lo..hi]
            .iter()
            .filter(|&&u| u != v && x.get(u as usize))
            .count();
        x.set(v as usize, parity % 2 == 1);
    }
    debug_assert_eq!(gf2::is_solution(&cs.system, &x), Ok(true));
    Ok(x)
}

/// Walks from `x` to `y` inside one cluster by toggling the differing free
/// variables in ascending order. Every element of the returned sequence is
/// a solution; consecutive elements differ exactly on one toggle support.
pub fn cluster_walk(
    cs: &ClusterStructure,
    x: &BitAssignment,
    y: &BitAssignment,
) -> Result<Vec<BitAssignment>, ClusterError> {
    if !same_cluster(cs, x, y)? {
        return Err(ClusterError::DifferentClusters);
    }
    let mut walk = vec![x.clone()];
    let mut cur = x.clone();
    for (bi, &b) in cs.b_set.iter().enumerate() {
        if cur.get(b as usize) == y.get(b as usize) {
            continue;
        }
        for &u in &cs.toggle_support(bi) {
            cur.flip(u as usize);
        }
        walk.push(cur.clone());
    }
    debug_assert_eq!(&cur, y);
    Ok(walk)
}

/// Oracle-scale cap for [`is_d_connected`].
pub const D_CONNECT_CAP: usize = 4096;

/// BFS connectivity over the solution list with edges at Hamming distance
/// at most `d`. `x` and `y` must be members of `sols`.
pub fn is_d_connected(
    sols: &[BitAssignment],
    x: &BitAssignment,
    y: &BitAssignment,
    d: usize,
) -> Result<bool, ClusterError> {
    if sols.len() > D_CONNECT_CAP {
        return Err(ClusterError::TooManySolutions(sols.len(), D_CONNECT_CAP));
    }
    let xi = sols.iter().position(|s| s == x).expect("x must be in sols");
    let yi = sols.iter().position(|s| s == y).expect("y must be in sols");
    let mut seen = vec![false; sols.len()];
    let mut queue = std::collections::VecDeque::from([xi]);
    seen[xi] = true;
    while let Some(i) = queue.pop_front() {
        if i == yi {
            return Ok(true);
        }
        for j in 0..sols.len() {
            if !seen[j] && sols[i].hamming(&sols[j]) <= d {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    Ok(false)
}
