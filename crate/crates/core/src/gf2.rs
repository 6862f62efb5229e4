//! Bit-packed linear algebra over GF(2).
//!
//! Systems are stored sparsely as rows of variable indices (right-hand side
//! is always zero). Elimination is dense bit-packed for up to
//! [`DENSE_LIMIT`] variables and falls back to a sparse row-echelon form
//! above that. Pivots are always the lowest available column, so ranks and
//! kernel bases are reproducible.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Largest variable count handled by the dense elimination path; also the
/// scale up to which exhaustive oracle operations are supported.
pub const DENSE_LIMIT: usize = 4096;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("solution count 2^{free} exceeds cap {cap}")]
    CapExceeded { free: usize, cap: usize },
    #[error("assignment has {got} bits, system has {want} variables")]
    LengthMismatch { got: usize, want: usize },
}

/// An assignment of one bit per variable, packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitAssignment {
    len: usize,
    words: Vec<u64>,
}

impl BitAssignment {
    pub fn zeros(len: usize) -> Self {
        BitAssignment {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut a = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                a.set(i, true);
            }
        }
        a
    }

    /// Parses a string of `0`/`1` characters, index 0 first.
    pub fn parse(s: &str) -> Option<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bits.push(0),
                '1' => bits.push(1),
                _ => return None,
            }
        }
        Some(Self::from_bits(&bits))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitAssignment) {
        assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    pub fn xor(&self, other: &BitAssignment) -> BitAssignment {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn hamming(&self, other: &BitAssignment) -> usize {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Indices of the set bits, ascending.
    pub fn ones(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.count_ones());
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                w &= w - 1;
            }
        }
        out
    }
}

impl fmt::Display for BitAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitAssignment({self})")
    }
}

/// A GF(2) system `Ax = 0` over `n` variables, one row per equation.
///
/// Rows are canonicalized on construction: indices sorted, and indices that
/// appear an even number of times cancel (a loop contributes nothing to a
/// parity). Rows may repeat.
#[derive(Clone, Debug)]
pub struct Gf2System {
    n: usize,
    rows: Vec<Vec<u32>>,
}

impl Gf2System {
    pub fn new(n: usize, rows: Vec<Vec<u32>>) -> Self {
        let rows = rows
            .into_iter()
            .map(|r| {
                let mut r = r;
                r.sort_unstable();
                assert!(r.last().is_none_or(|&v| (v as usize) < n), "row index out of range");
                cancel_pairs(r)
            })
            .collect();
        Gf2System { n, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }
}

/// Removes index pairs from a sorted row: x+x = 0 over GF(2).
fn cancel_pairs(row: Vec<u32>) -> Vec<u32> {
    let mut out = Vec::with_capacity(row.len());
    let mut i = 0;
    while i < row.len() {
        let mut j = i + 1;
        while j < row.len() && row[j] == row[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(row[i]);
        }
        i = j;
    }
    out
}

pub struct RankKernel {
    pub rank: usize,
    pub kernel_basis: Vec<BitAssignment>,
}

/// Rank of the system and a basis of its solution space.
///
/// The basis has `n - rank` vectors; each corresponds to one free column
/// (lowest-index pivoting), so the output is deterministic.
pub fn rank_and_kernel(sys: &Gf2System) -> RankKernel {
    if sys.n <= DENSE_LIMIT {
        rank_and_kernel_dense(sys)
    } else {
        rank_and_kernel_sparse(sys)
    }
}

/// Rank only; same pivot rule as [`rank_and_kernel`] without materializing
/// the basis.
pub fn rank(sys: &Gf2System) -> usize {
    if sys.n <= DENSE_LIMIT {
        rank_and_kernel_dense(sys).rank
    } else {
        sparse_echelon(sys).len()
    }
}

fn rank_and_kernel_dense(sys: &Gf2System) -> RankKernel {
    let n = sys.n;
    let mut mat: Vec<BitAssignment> = sys
        .rows
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r| {
            let mut row = BitAssignment::zeros(n);
            for &v in r {
                row.set(v as usize, true);
            }
            row
        })
        .collect();

    let mut pivot_col_of_row = Vec::new();
    let mut is_pivot = vec![false; n];
    let mut next = 0usize;
    for col in 0..n {
        let Some(hit) = (next..mat.len()).find(|&r| mat[r].get(col)) else {
            continue;
        };
        mat.swap(next, hit);
        let pivot_row = mat[next].clone();
        for (r, row) in mat.iter_mut().enumerate() {
            if r != next && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivot_col_of_row.push(col);
        is_pivot[col] = true;
        next += 1;
        if next == mat.len() {
            break;
        }
    }

    let rank = next;
    let mut basis = Vec::with_capacity(n - rank);
    for f in 0..n {
        if is_pivot[f] {
            continue;
        }
        let mut v = BitAssignment::zeros(n);
        v.set(f, true);
        for (r, &pc) in pivot_col_of_row.iter().enumerate() {
            if mat[r].get(f) {
                v.set(pc, true);
            }
        }
        basis.push(v);
    }
    RankKernel { rank, kernel_basis: basis }
}

/// Sparse echelon form: map pivot column -> reduced row (sorted indices,
/// first element is the pivot).
fn sparse_echelon(sys: &Gf2System) -> BTreeMap<u32, Vec<u32>> {
    let mut echelon: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for row in &sys.rows {
        let mut row = row.clone();
        while let Some(&p) = row.first() {
            match echelon.get(&p) {
                Some(other) => row = xor_sorted(&row, other),
                None => {
                    echelon.insert(p, row);
                    break;
                }
            }
        }
    }
    echelon
}

fn xor_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
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

fn rank_and_kernel_sparse(sys: &Gf2System) -> RankKernel {
    let n = sys.n;
    let echelon = sparse_echelon(sys);
    let rank = echelon.len();

    // Back-substitute per free column, descending over pivots. Row entries
    // after the pivot are either later pivots (already solved) or free.
    let mut basis = Vec::with_capacity(n - rank);
    for f in 0..n as u32 {
        if echelon.contains_key(&f) {
            continue;
        }
        let mut v = BitAssignment::zeros(n);
        v.set(f as usize, true);
        for (&p, row) in echelon.iter().rev() {
            let parity = row[1..].iter().filter(|&&u| v.get(u as usize)).count();
            if parity % 2 == 1 {
                v.set(p as usize, true);
            }
        }
        basis.push(v);
    }
    RankKernel { rank, kernel_basis: basis }
}

/// All solutions of the system, each exactly once, in lexicographic order of
/// the free coordinates (ascending index order, 0 before 1).
pub fn enumerate_solutions(sys: &Gf2System, cap: usize) -> Result<Vec<BitAssignment>, Gf2Error> {
    let rk = rank_and_kernel(sys);
    let free = sys.n - rk.rank;
    if free >= usize::BITS as usize || (1usize << free) > cap {
        return Err(Gf2Error::CapExceeded { free, cap });
    }
    // Basis vectors are ordered by ascending free coordinate; Gray-code
    // enumeration would reorder, so build each solution directly.
    let count = 1usize << free;
    let mut out = Vec::with_capacity(count);
    for mask in 0..count {
        let mut x = BitAssignment::zeros(sys.n);
        for (b, vec) in rk.kernel_basis.iter().enumerate() {
            // Free coordinate b is the (b+1)-th most significant position of
            // the lexicographic counter.
            if mask >> (free - 1 - b) & 1 == 1 {
                x.xor_assign(vec);
            }
        }
        out.push(x);
    }
    Ok(out)
}

/// Whether `x` satisfies every equation (even parity per row).
pub fn is_solution(sys: &Gf2System, x: &BitAssignment) -> Result<bool, Gf2Error> {
    if x.len() != sys.n {
        return Err(Gf2Error::LengthMismatch { got: x.len(), want: sys.n });
    }
    Ok(sys
        .rows
        .iter()
        .all(|row| row.iter().filter(|&&v| x.get(v as usize)).count() % 2 == 0))
}
