//! r-core peeling, stripping traces, and the stripping digraph.
//!
//! The r-core of a hypergraph is its unique maximal subgraph of minimum
//! degree r. [`r_core`] removes vertices of degree below r one at a time,
//! in rounds that mirror the parallel stripping process (all sub-r vertices
//! of the current graph removed together), with ascending vertex index as
//! the tie-break inside a round. For every removed vertex the trace records
//! the incident edges still alive at its removal; those edge sets induce
//! the stripping digraph whose reachability sets bound stripping depth.

use thiserror::Error;

use crate::hypergraph::Hypergraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PeelError {
    #[error("trace inconsistent with hypergraph: {0}")]
    TraceMismatch(String),
    #[error("vertex {0} is in the core")]
    CoreVertex(u32),
}

/// Sentinel in `round_of`/`removal_pos` for vertices that stay in the core.
pub const IN_CORE: u32 = u32::MAX;

/// Tie-break order for vertices stripped within the same parallel round.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    AscendingIndex,
    DescendingIndex,
}

/// A terminal r-stripping sequence together with its parallel-round
/// structure and, per removed vertex, the edges alive at its removal.
pub struct StrippingTrace {
    pub r: u32,
    /// Stripped vertices in removal order.
    pub order: Vec<u32>,
    /// Parallel round (1-based) in which each vertex was removed; `IN_CORE`
    /// for core vertices.
    pub round_of: Vec<u32>,
    /// Position in `order`; `IN_CORE` for core vertices.
    pub removal_pos: Vec<u32>,
    /// Number of parallel rounds until the process stabilized.
    pub rounds: u32,
    live_off: Vec<u32>,
    live_edge_ids: Vec<u32>,
    /// Edge ids (into the original hypergraph) surviving in the core.
    pub core_edges: Vec<u32>,
}

impl StrippingTrace {
    /// Edge ids alive at the removal of the vertex at position `pos`.
    pub fn live_edges(&self, pos: usize) -> &[u32] {
        &self.live_edge_ids[self.live_off[pos] as usize..self.live_off[pos + 1] as usize]
    }

    pub fn is_core_vertex(&self, v: u32) -> bool {
        self.removal_pos[v as usize] == IN_CORE
    }

    pub fn core_vertices(&self) -> Vec<u32> {
        (0..self.removal_pos.len() as u32).filter(|&v| self.is_core_vertex(v)).collect()
    }

    pub fn core_vertex_count(&self) -> usize {
        self.removal_pos.iter().filter(|&&p| p == IN_CORE).count()
    }

    /// Positions whose live edge set is nonempty (each non-core edge dies at
    /// exactly one such position).
    pub fn nonempty_live_count(&self) -> usize {
        (0..self.order.len()).filter(|&i| !self.live_edges(i).is_empty()).count()
    }
}

/// Computes the r-core and a terminal stripping trace, ascending tie-break.
pub fn r_core(h: &Hypergraph, r: u32) -> (Hypergraph, StrippingTrace) {
    r_core_with_tie_break(h, r, TieBreak::AscendingIndex)
}

/// As [`r_core`] with an explicit within-round tie-break (the core itself
/// is order-independent; the trace is not).
pub fn r_core_with_tie_break(h: &Hypergraph, r: u32, tie: TieBreak) -> (Hypergraph, StrippingTrace) {
    assert!(r >= 2, "stripping threshold must be at least 2");
    let n = h.n();
    let inc = h.incidence();
    let mut deg: Vec<u32> = h.degrees().to_vec();
    let mut edge_alive = vec![true; h.m()];
    let mut queued = vec![false; n];
    let mut round_of = vec![IN_CORE; n];
    let mut removal_pos = vec![IN_CORE; n];
    let mut order = Vec::new();
    let mut live_off = vec![0u32];
    let mut live_edge_ids = Vec::new();

    let mut current: Vec<u32> = (0..n as u32).filter(|&v| deg[v as usize] < r).collect();
    for &v in &current {
        queued[v as usize] = true;
    }
    let mut round = 0u32;
    while !current.is_empty() {
        round += 1;
        if tie == TieBreak::DescendingIndex {
            current.reverse(); // collected ascending
        }
        let mut next: Vec<u32> = Vec::new();
        for &v in &current {
            round_of[v as usize] = round;
            removal_pos[v as usize] = order.len() as u32;
            order.push(v);
            let mut live: Vec<u32> = inc
                .edges_of(v)
                .iter()
                .copied()
                .filter(|&e| edge_alive[e as usize])
                .collect();
            live.sort_unstable();
            live.dedup(); // a loop lists the edge twice
            for &e in &live {
                edge_alive[e as usize] = false;
                for &u in h.edge(e as usize) {
                    deg[u as usize] -= 1;
                    if u != v && !queued[u as usize] && deg[u as usize] < r {
                        queued[u as usize] = true;
                        next.push(u);
                    }
                }
            }
            live_edge_ids.extend_from_slice(&live);
            live_off.push(live_edge_ids.len() as u32);
        }
        next.sort_unstable();
        current = next;
    }

    let core_edges: Vec<u32> =
        (0..h.m() as u32).filter(|&e| edge_alive[e as usize]).collect();
    let core = Hypergraph::new(n, h.k(), core_edges.iter().map(|&e| h.edge(e as usize)));
    let trace = StrippingTrace {
        r,
        order,
        round_of,
        removal_pos,
        rounds: round,
        live_off,
        live_edge_ids,
        core_edges,
    };
    (core, trace)
}

/// The digraph D of a stripping trace: one node per stripped vertex plus
/// every core vertex sharing an edge with a stripped one; an arc (u, v) for
/// each vertex u ≠ v in an edge alive at v's removal.
pub struct StripDigraph {
    pub n: usize,
    in_digraph: Vec<bool>,
    out_off: Vec<u32>,
    out_to: Vec<u32>,
    /// Indegree per vertex (0 for vertices stripped at degree 0).
    pub indegree: Vec<u32>,
    /// Removal position per vertex, `IN_CORE` for core vertices.
    pub pos: Vec<u32>,
}

impl StripDigraph {
    pub fn contains(&self, v: u32) -> bool {
        self.in_digraph[v as usize]
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.n as u32).filter(|&v| self.in_digraph[v as usize])
    }

    pub fn vertex_count(&self) -> usize {
        self.in_digraph.iter().filter(|&&b| b).count()
    }

    #[inline]
    pub fn out(&self, v: u32) -> &[u32] {
        &self.out_to[self.out_off[v as usize] as usize..self.out_off[v as usize + 1] as usize]
    }

    /// R+(v): all vertices reachable from v, including v itself.
    pub fn reach_set(&self, v: u32) -> Vec<u32> {
        let mut seen = vec![v];
        let mut mark = std::collections::HashSet::new();
        mark.insert(v);
        let mut head = 0;
        while head < seen.len() {
            let u = seen[head];
            head += 1;
            for &w in self.out(u) {
                if mark.insert(w) {
                    seen.push(w);
                }
            }
        }
        seen
    }
}

/// Builds the stripping digraph, validating the trace against `h`.
pub fn build_digraph(trace: &StrippingTrace, h: &Hypergraph) -> Result<StripDigraph, PeelError> {
    let n = h.n();
    if trace.round_of.len() != n || trace.removal_pos.len() != n {
        return Err(PeelError::TraceMismatch("vertex count differs".into()));
    }
    // Every non-core edge must show up as a live edge exactly once, and a
    // live edge at position i must contain v_i with all members unremoved
    // before step i.
    let mut seen_edge = vec![0u32; h.m()];
    for (i, &v) in trace.order.iter().enumerate() {
        for &e in trace.live_edges(i) {
            if e as usize >= h.m() {
                return Err(PeelError::TraceMismatch(format!("edge id {e} out of range")));
            }
            seen_edge[e as usize] += 1;
            let members = h.edge(e as usize);
            if !members.contains(&v) {
                return Err(PeelError::TraceMismatch(format!(
                    "edge {e} does not contain vertex {v}"
                )));
            }
            if members.iter().any(|&u| (trace.removal_pos[u as usize] as usize) < i) {
                return Err(PeelError::TraceMismatch(format!("edge {e} already dead at step {i}")));
            }
        }
    }
    let mut is_core_edge = vec![false; h.m()];
    for &e in &trace.core_edges {
        is_core_edge[e as usize] = true;
    }
    for e in 0..h.m() {
        let want = if is_core_edge[e] { 0 } else { 1 };
        if seen_edge[e] != want {
            return Err(PeelError::TraceMismatch(format!(
                "edge {e} appears {} times in live sets, expected {want}",
                seen_edge[e]
            )));
        }
    }

    let mut in_digraph: Vec<bool> = trace.removal_pos.iter().map(|&p| p != IN_CORE).collect();
    let mut sources: Vec<Vec<u32>> = vec![Vec::new(); trace.order.len()];
    for (i, &v) in trace.order.iter().enumerate() {
        let mut s: Vec<u32> = trace
            .live_edges(i)
            .iter()
            .flat_map(|&e| h.edge(e as usize).iter().copied())
            .filter(|&u| u != v)
            .collect();
        s.sort_unstable();
        s.dedup();
        for &u in &s {
            in_digraph[u as usize] = true; // core vertex adjacent to a stripped one
        }
        sources[i] = s;
    }

    let mut out_off = vec![0u32; n + 1];
    for s in &sources {
        for &u in s {
            out_off[u as usize + 1] += 1;
        }
    }
    for i in 0..n {
        out_off[i + 1] += out_off[i];
    }
    let mut cursor = out_off.clone();
    let mut out_to = vec![0u32; out_off[n] as usize];
    let mut indegree = vec![0u32; n];
    for (i, s) in sources.iter().enumerate() {
        let target = trace.order[i];
        indegree[target as usize] = s.len() as u32;
        for &u in s {
            out_to[cursor[u as usize] as usize] = target;
            cursor[u as usize] += 1;
        }
    }
    Ok(StripDigraph { n, in_digraph, out_off, out_to, indegree, pos: trace.removal_pos.clone() })
}

pub struct ReachStats {
    /// |R+(v)| per vertex; 0 for vertices not in the digraph.
    pub size: Vec<u32>,
    pub max: u32,
    /// (reach size, vertex count) over digraph vertices, ascending.
    pub histogram: Vec<(u32, u64)>,
}

/// Exact |R+(v)| for every digraph vertex via BFS with an epoch marker.
pub fn reach_stats(d: &StripDigraph) -> ReachStats {
    let mut size = vec![0u32; d.n];
    let mut stamp = vec![0u32; d.n];
    let mut epoch = 0u32;
    let mut queue: Vec<u32> = Vec::new();
    for v in 0..d.n as u32 {
        if !d.contains(v) {
            continue;
        }
        epoch += 1;
        queue.clear();
        queue.push(v);
        stamp[v as usize] = epoch;
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            for &w in d.out(u) {
                if stamp[w as usize] != epoch {
                    stamp[w as usize] = epoch;
                    queue.push(w);
                }
            }
        }
        size[v as usize] = queue.len() as u32;
    }
    let max = size.iter().copied().max().unwrap_or(0);
    let mut hist_map = std::collections::BTreeMap::new();
    for v in 0..d.n as u32 {
        if d.contains(v) {
            *hist_map.entry(size[v as usize]).or_insert(0u64) += 1;
        }
    }
    ReachStats { size, max, histogram: hist_map.into_iter().collect() }
}

/// |R+(v)| as a certified upper bound on the stripping depth of `v`,
/// together with a witness sequence: R+(v) in original removal order, which
/// is a valid r-stripping sequence ending with v.
pub fn depth_upper(d: &StripDigraph, v: u32) -> Result<(u32, Vec<u32>), PeelError> {
    if d.pos[v as usize] == IN_CORE {
        return Err(PeelError::CoreVertex(v));
    }
    let mut witness = d.reach_set(v);
    witness.sort_by_key(|&u| d.pos[u as usize]);
    debug_assert_eq!(*witness.last().unwrap(), v);
    Ok((witness.len() as u32, witness))
}

/// Replays `seq` against `h`, checking each vertex has degree < r when
/// removed. Used to validate traces and depth witnesses.
pub fn replay_stripping(h: &Hypergraph, seq: &[u32], r: u32) -> bool {
    let inc = h.incidence();
    let mut edge_alive = vec![true; h.m()];
    let mut deg: Vec<u32> = h.degrees().to_vec();
    let mut removed = vec![false; h.n()];
    for &v in seq {
        if removed[v as usize] || deg[v as usize] >= r {
            return false;
        }
        removed[v as usize] = true;
        let mut live: Vec<u32> = inc
            .edges_of(v)
            .iter()
            .copied()
            .filter(|&e| edge_alive[e as usize])
            .collect();
        live.sort_unstable();
        live.dedup();
        for &e in &live {
            edge_alive[e as usize] = false;
            for &u in h.edge(e as usize) {
                deg[u as usize] -= 1;
            }
        }
    }
    true
}

/// Exact stripping depth by BFS over removal subsets; only feasible when at
/// most [`EXACT_DEPTH_LIMIT`] vertices lie outside the core.
pub const EXACT_DEPTH_LIMIT: usize = 12;

pub fn exact_depth(h: &Hypergraph, r: u32, v: u32) -> Option<u32> {
    let (_, trace) = r_core(h, r);
    if trace.is_core_vertex(v) {
        return None;
    }
    let stripped = &trace.order;
    if stripped.len() > EXACT_DEPTH_LIMIT {
        return None;
    }
    let id_of = |u: u32| stripped.iter().position(|&w| w == u).unwrap();
    let vid = id_of(v);
    // Per edge: bitmask of its stripped members (multiplicity collapses; an
    // edge is alive iff none of its stripped members is removed) plus the
    // multiplicity of each stripped member for degree counting.
    let masks: Vec<(u32, Vec<(usize, u32)>)> = h
        .edges()
        .map(|e| {
            let mut mask = 0u32;
            let mut mult: Vec<(usize, u32)> = Vec::new();
            for &u in e {
                if !trace.is_core_vertex(u) {
                    let id = id_of(u);
                    mask |= 1 << id;
                    match mult.iter_mut().find(|(i, _)| *i == id) {
                        Some((_, c)) => *c += 1,
                        None => mult.push((id, 1)),
                    }
                }
            }
            (mask, mult)
        })
        .collect();
    let degree_in = |state: u32, id: usize| -> u32 {
        masks
            .iter()
            .filter(|(mask, _)| mask & state == 0)
            .map(|(_, mult)| mult.iter().find(|(i, _)| *i == id).map_or(0, |&(_, c)| c))
            .sum()
    };

    // BFS over subsets of removed stripped vertices.
    let full = stripped.len();
    let mut dist = vec![u32::MAX; 1usize << full];
    let mut queue = std::collections::VecDeque::new();
    dist[0] = 0;
    queue.push_back(0u32);
    let mut best = u32::MAX;
    while let Some(state) = queue.pop_front() {
        let moves = dist[state as usize];
        if moves + 1 >= best {
            continue;
        }
        for id in 0..full {
            if state >> id & 1 == 1 {
                continue;
            }
            if degree_in(state, id) >= r {
                continue;
            }
            if id == vid {
                best = best.min(moves + 1);
                continue;
            }
            let nxt = state | 1 << id;
            if dist[nxt as usize] == u32::MAX {
                dist[nxt as usize] = moves + 1;
                queue.push_back(nxt);
            }
        }
    }
    Some(best)
}

/// Degree histograms of H_0..H_{t_max} under the parallel r-stripping
/// process. Once the process stabilizes the final histogram repeats.
pub fn parallel_round_stats(h: &Hypergraph, r: u32, t_max: usize) -> Vec<Vec<u64>> {
    assert!(r >= 2);
    let n = h.n();
    let inc = h.incidence();
    let mut deg: Vec<u32> = h.degrees().to_vec();
    let mut edge_alive = vec![true; h.m()];
    let mut removed = vec![false; n];

    let histogram = |deg: &[u32], removed: &[bool]| -> Vec<u64> {
        let Some(max) = deg
            .iter()
            .zip(removed)
            .filter(|&(_, &rm)| !rm)
            .map(|(&d, _)| d)
            .max()
        else {
            return Vec::new();
        };
        let mut hist = vec![0u64; max as usize + 1];
        for (v, &d) in deg.iter().enumerate() {
            if !removed[v] {
                hist[d as usize] += 1;
            }
        }
        hist
    };

    let mut out = Vec::with_capacity(t_max + 1);
    out.push(histogram(&deg, &removed));
    for _ in 1..=t_max {
        let round: Vec<u32> = (0..n as u32)
            .filter(|&v| !removed[v as usize] && deg[v as usize] < r)
            .collect();
        if round.is_empty() {
            out.push(out.last().unwrap().clone());
            continue;
        }
        for &v in &round {
            removed[v as usize] = true;
        }
        for &v in &round {
            for &e in inc.edges_of(v) {
                if edge_alive[e as usize] {
                    edge_alive[e as usize] = false;
                    for &u in h.edge(e as usize) {
                        deg[u as usize] -= 1;
                    }
                }
            }
        }
        out.push(histogram(&deg, &removed));
    }
    out
}

/// The hypergraph remaining after `t` parallel stripping rounds.
pub fn parallel_strip_residual(h: &Hypergraph, r: u32, t: usize) -> Hypergraph {
    let n = h.n();
    let inc = h.incidence();
    let mut deg: Vec<u32> = h.degrees().to_vec();
    let mut edge_alive = vec![true; h.m()];
    let mut removed = vec![false; n];
    for _ in 0..t {
        let round: Vec<u32> = (0..n as u32)
            .filter(|&v| !removed[v as usize] && deg[v as usize] < r)
            .collect();
        if round.is_empty() {
            break;
        }
        for &v in &round {
            removed[v as usize] = true;
        }
        for &v in &round {
            for &e in inc.edges_of(v) {
                if edge_alive[e as usize] {
                    edge_alive[e as usize] = false;
                    for &u in h.edge(e as usize) {
                        deg[u as usize] -= 1;
                    }
                }
            }
        }
    }
    let edges: Vec<&[u32]> = (0..h.m())
        .filter(|&e| edge_alive[e])
        .map(|e| h.edge(e))
        .collect();
    Hypergraph::new(n, h.k(), edges)
}
