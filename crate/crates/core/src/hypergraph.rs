//! k-uniform hypergraphs: representation, random generators, components.
//!
//! Three generators are provided: `H_k(n, m)` (exactly m distinct edges),
//! `H_k(n, p)` with `p = c/n^(k-1)` (sampled through its edge-count
//! marginal), and the configuration model for a given degree sequence
//! (which may produce loops and multi-edges). Instances serialize to a
//! DIMACS-like text format, see [`write_instance`].

use std::collections::HashSet;
use std::io::{self, BufRead, Write};

use rand::Rng;
use rand_distr::{Binomial, Distribution, Poisson};
use thiserror::Error;

use crate::seed::rng_from_seed;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("requested {m} edges but only {max} distinct edges exist")]
    TooManyEdges { m: u64, max: u64 },
    #[error("total degree {total} is not divisible by k={k}")]
    NonDivisibleTotalDegree { total: u64, k: u32 },
    #[error("no simple configuration found after {0} resampling attempts")]
    SimplificationFailed(u32),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A k-uniform hypergraph on vertices `0..n`. Edges are k-multisets stored
/// sorted; loops (repeated vertex within an edge) and multi-edges are
/// allowed and degrees count incidences with multiplicity.
#[derive(Clone, Debug)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edge_data: Vec<u32>,
    degree: Vec<u32>,
}

impl Hypergraph {
    pub fn new<I, E>(n: usize, k: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[u32]>,
    {
        assert!(k >= 2, "uniformity must be at least 2");
        let mut edge_data = Vec::new();
        for e in edges {
            let e = e.as_ref();
            assert_eq!(e.len(), k, "edge arity mismatch");
            let start = edge_data.len();
            edge_data.extend_from_slice(e);
            edge_data[start..].sort_unstable();
            assert!((edge_data[edge_data.len() - 1] as usize) < n, "vertex out of range");
        }
        let mut degree = vec![0u32; n];
        for &v in &edge_data {
            degree[v as usize] += 1;
        }
        Hypergraph { n, k, edge_data, degree }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.edge_data.len() / self.k
    }

    #[inline]
    pub fn edge(&self, i: usize) -> &[u32] {
        &self.edge_data[i * self.k..(i + 1) * self.k]
    }

    pub fn edges(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.edge_data.chunks_exact(self.k)
    }

    #[inline]
    pub fn degree(&self, v: u32) -> u32 {
        self.degree[v as usize]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degree
    }

    /// Histogram of vertex degrees (index = degree).
    pub fn degree_histogram(&self) -> Vec<u64> {
        let max = self.degree.iter().copied().max().unwrap_or(0) as usize;
        let mut hist = vec![0u64; max + 1];
        for &d in &self.degree {
            hist[d as usize] += 1;
        }
        hist
    }

    /// No loops and no repeated edges.
    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.m());
        for e in self.edges() {
            if e.windows(2).any(|w| w[0] == w[1]) {
                return false;
            }
            if !seen.insert(e.to_vec()) {
                return false;
            }
        }
        true
    }

    /// Vertex -> incident edge ids, with multiplicity for loops (CSR).
    pub fn incidence(&self) -> Incidence {
        let mut off = vec![0u32; self.n + 1];
        for &v in &self.edge_data {
            off[v as usize + 1] += 1;
        }
        for i in 0..self.n {
            off[i + 1] += off[i];
        }
        let mut cursor = off.clone();
        let mut edge_ids = vec![0u32; self.edge_data.len()];
        for (i, e) in self.edges().enumerate() {
            for &v in e {
                edge_ids[cursor[v as usize] as usize] = i as u32;
                cursor[v as usize] += 1;
            }
        }
        Incidence { off, edge_ids }
    }
}

/// CSR incidence structure; `edges_of(v)` lists edge ids with multiplicity.
pub struct Incidence {
    off: Vec<u32>,
    edge_ids: Vec<u32>,
}

impl Incidence {
    #[inline]
    pub fn edges_of(&self, v: u32) -> &[u32] {
        &self.edge_ids[self.off[v as usize] as usize..self.off[v as usize + 1] as usize]
    }
}

/// Per-vertex target degrees for the configuration model.
#[derive(Clone, Debug)]
pub struct DegreeSequence(pub Vec<u32>);

impl DegreeSequence {
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&d| d as u64).sum()
    }
}

/// `C(n, k)` saturating at `u64::MAX`.
fn binomial_count(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Draws a uniform k-subset of `0..n` as a sorted vector.
fn draw_edge<R: Rng>(rng: &mut R, n: usize, k: usize, scratch: &mut Vec<u32>) -> Vec<u32> {
    if n <= 2 * k + 8 {
        // Small vertex set: partial Fisher-Yates over all vertices.
        scratch.clear();
        scratch.extend(0..n as u32);
        for i in 0..k {
            let j = rng.random_range(i..n);
            scratch.swap(i, j);
        }
        let mut e = scratch[..k].to_vec();
        e.sort_unstable();
        e
    } else {
        let mut e: Vec<u32> = Vec::with_capacity(k);
        while e.len() < k {
            let v = rng.random_range(0..n as u32);
            if !e.contains(&v) {
                e.push(v);
            }
        }
        e.sort_unstable();
        e
    }
}

/// Packs a sorted edge into a u128 key when indices fit in 21 bits each.
fn edge_key(e: &[u32]) -> Option<u128> {
    if e.len() > 6 || e.iter().any(|&v| v >= 1 << 21) {
        return None;
    }
    let mut key = 1u128;
    for &v in e {
        key = key << 21 | v as u128;
    }
    Some(key)
}

/// `m` distinct edges uniformly without replacement.
fn sample_distinct_edges<R: Rng>(
    rng: &mut R,
    n: usize,
    m: usize,
    k: usize,
) -> Result<Vec<Vec<u32>>, HypergraphError> {
    let total = binomial_count(n, k);
    if (m as u64) > total {
        return Err(HypergraphError::TooManyEdges { m: m as u64, max: total });
    }
    if m as u64 * 2 > total && total <= 16_000_000 {
        // Dense request: enumerate every k-subset and take a random prefix.
        let mut all = Vec::with_capacity(total as usize);
        let mut subset: Vec<u32> = (0..k as u32).collect();
        'combos: loop {
            all.push(subset.clone());
            // next combination in lexicographic order
            let mut i = k;
            while i > 0 {
                i -= 1;
                if subset[i] < (n - k + i) as u32 {
                    subset[i] += 1;
                    for j in i + 1..k {
                        subset[j] = subset[j - 1] + 1;
                    }
                    continue 'combos;
                }
            }
            break;
        }
        debug_assert_eq!(all.len() as u64, total);
        for i in 0..m {
            let j = rng.random_range(i..all.len());
            all.swap(i, j);
        }
        all.truncate(m);
        return Ok(all);
    }

    let mut edges = Vec::with_capacity(m);
    let mut scratch = Vec::new();
    if n < 1 << 21 && k <= 6 {
        let mut seen: HashSet<u128> = HashSet::with_capacity(m * 2);
        while edges.len() < m {
            let e = draw_edge(rng, n, k, &mut scratch);
            if seen.insert(edge_key(&e).unwrap()) {
                edges.push(e);
            }
        }
    } else {
        let mut seen: HashSet<Vec<u32>> = HashSet::with_capacity(m * 2);
        while edges.len() < m {
            let e = draw_edge(rng, n, k, &mut scratch);
            if seen.insert(e.clone()) {
                edges.push(e);
            }
        }
    }
    Ok(edges)
}

/// `H_k(n, m)`: exactly `m` distinct edges, uniform without replacement.
pub fn gen_hnm(n: usize, m: usize, k: usize, seed: u64) -> Result<Hypergraph, HypergraphError> {
    assert!(k >= 2);
    let mut rng = rng_from_seed(seed);
    let edges = sample_distinct_edges(&mut rng, n, m, k)?;
    Ok(Hypergraph::new(n, k, edges))
}

/// `H_k(n, p)` with `p = c / n^(k-1)`: every possible edge independently
/// with probability p. Sampled as the edge-count marginal followed by that
/// many distinct uniform edges, which has the same distribution.
pub fn gen_hnp(n: usize, c: f64, k: usize, seed: u64) -> Hypergraph {
    assert!(k >= 2);
    assert!(c > 0.0);
    let mut rng = rng_from_seed(seed);
    let p = (c / (n as f64).powi(k as i32 - 1)).min(1.0);
    let total = binomial_count(n, k);
    let m = if total < u64::MAX {
        Binomial::new(total, p).expect("valid binomial").sample(&mut rng)
    } else {
        // C(n,k) overflows u64; Binomial(N, p) with Np = Theta(n) and p below
        // 1e-14 is within total-variation o(1e-14) of Poisson(Np).
        let mut lambda = p;
        for i in 0..k {
            lambda *= (n - i) as f64 / (i + 1) as f64;
        }
        Poisson::new(lambda).expect("valid poisson").sample(&mut rng) as u64
    };
    let edges =
        sample_distinct_edges(&mut rng, n, m as usize, k).expect("edge count within range");
    Hypergraph::new(n, k, edges)
}

/// Configuration model: a uniform partition of the vertex copies into
/// k-sets. With `simple`, resamples until the result has no loops or
/// multi-edges (bounded retries).
pub fn gen_configuration(
    deg: &DegreeSequence,
    k: usize,
    seed: u64,
    simple: bool,
) -> Result<Hypergraph, HypergraphError> {
    assert!(k >= 2);
    let total = deg.total();
    if !total.is_multiple_of(k as u64) {
        return Err(HypergraphError::NonDivisibleTotalDegree { total, k: k as u32 });
    }
    let mut rng = rng_from_seed(seed);
    let mut copies: Vec<u32> = Vec::with_capacity(total as usize);
    for (v, &d) in deg.0.iter().enumerate() {
        copies.extend(std::iter::repeat_n(v as u32, d as usize));
    }
    const MAX_TRIES: u32 = 100_000;
    for _ in 0..MAX_TRIES {
        // Fisher-Yates; chunks of the shuffled copies are a uniform partition.
        for i in (1..copies.len()).rev() {
            let j = rng.random_range(0..=i);
            copies.swap(i, j);
        }
        let h = Hypergraph::new(deg.0.len(), k, copies.chunks_exact(k));
        if !simple || h.is_simple() {
            return Ok(h);
        }
    }
    Err(HypergraphError::SimplificationFailed(MAX_TRIES))
}

/// Connected components under shared-edge adjacency.
pub struct Components {
    /// Component label per vertex (label = smallest root id, compacted).
    pub label: Vec<u32>,
    /// Component sizes, indexed by label.
    pub sizes: Vec<u32>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn max_size(&self) -> u32 {
        self.sizes.iter().copied().max().unwrap_or(0)
    }
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut x = x;
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
    }
}

pub fn components(h: &Hypergraph) -> Components {
    let mut uf = UnionFind::new(h.n());
    for e in h.edges() {
        for w in e.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut label = vec![u32::MAX; h.n()];
    let mut sizes = Vec::new();
    let mut root_label = vec![u32::MAX; h.n()];
    for v in 0..h.n() as u32 {
        let r = uf.find(v);
        if root_label[r as usize] == u32::MAX {
            root_label[r as usize] = sizes.len() as u32;
            sizes.push(0);
        }
        label[v as usize] = root_label[r as usize];
        sizes[root_label[r as usize] as usize] += 1;
    }
    Components { label, sizes }
}

/// Maximum vertex degree over acyclic components; 0 when there are none.
///
/// A connected component with edge count `e` and vertex count `v` is a
/// hypertree iff `e*(k-1) == v-1`; loops and overlapping edge pairs fail
/// the count automatically.
pub fn tree_component_max_degree(h: &Hypergraph) -> u32 {
    let comps = components(h);
    let nc = comps.count();
    let mut edge_count = vec![0u64; nc];
    let mut max_deg = vec![0u32; nc];
    for e in h.edges() {
        edge_count[comps.label[e[0] as usize] as usize] += 1;
    }
    for v in 0..h.n() {
        let c = comps.label[v] as usize;
        max_deg[c] = max_deg[c].max(h.degree(v as u32));
    }
    let mut best = 0;
    for c in 0..nc {
        if edge_count[c] * (h.k() as u64 - 1) == comps.sizes[c] as u64 - 1 {
            best = best.max(max_deg[c]);
        }
    }
    best
}

/// Writes the instance text format: a `p xnf <n> <m> <k>` header, then one
/// line per edge with k 1-based vertex indices terminated by `0`.
pub fn write_instance<W: Write>(w: &mut W, h: &Hypergraph) -> io::Result<()> {
    writeln!(w, "p xnf {} {} {}", h.n(), h.m(), h.k())?;
    for e in h.edges() {
        for &v in e {
            write!(w, "{} ", v + 1)?;
        }
        writeln!(w, "0")?;
    }
    Ok(())
}

/// Parses the instance text format; `c`-prefixed lines are comments.
pub fn read_instance<R: BufRead>(r: R) -> Result<Hypergraph, HypergraphError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges: Vec<Vec<u32>> = Vec::new();
    let mut pending: Vec<u32> = Vec::new();
    for line in r.lines() {
        let line = line.map_err(|e| HypergraphError::Parse(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(HypergraphError::Parse("duplicate header".into()));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 5 || fields[1] != "xnf" {
                return Err(HypergraphError::Parse(format!("bad header: {line}")));
            }
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| HypergraphError::Parse(format!("bad number: {s}")))
            };
            header = Some((parse(fields[2])?, parse(fields[3])?, parse(fields[4])?));
            continue;
        }
        let Some((n, _, k)) = header else {
            return Err(HypergraphError::Parse("edge line before header".into()));
        };
        for tok in line.split_whitespace() {
            let v: i64 =
                tok.parse().map_err(|_| HypergraphError::Parse(format!("bad token: {tok}")))?;
            if v == 0 {
                if pending.len() != k {
                    return Err(HypergraphError::Parse(format!(
                        "edge has {} vertices, expected {k}",
                        pending.len()
                    )));
                }
                edges.push(std::mem::take(&mut pending));
            } else {
                if v < 1 || v as usize > n {
                    return Err(HypergraphError::Parse(format!("vertex {v} out of range 1..{n}")));
                }
                pending.push(v as u32 - 1);
            }
        }
    }
    let Some((n, m, k)) = header else {
        return Err(HypergraphError::Parse("missing header".into()));
    };
    if !pending.is_empty() {
        return Err(HypergraphError::Parse("unterminated edge".into()));
    }
    if edges.len() != m {
        return Err(HypergraphError::Parse(format!("expected {m} edges, found {}", edges.len())));
    }
    Ok(Hypergraph::new(n, k, edges))
}
