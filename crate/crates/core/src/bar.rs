//! The bar complex `Z = B A+`: non-degenerate cells `[x_1|...|x_n]` with
//! every `x_i != 1`, alternating-sign face maps and the length grading.
//!
//! The two outer faces drop a factor and lower the length; the inner faces
//! multiply neighbours and preserve it. Cells of length at most `N` form a
//! subcomplex, and cells of length exactly `N` form the relative complex
//! `Z_{<=N} / Z_{<N}`, whose differential keeps only the inner faces.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::homology::{HomologyError, IntChainComplex, SparseMatrix};
use crate::matching;
use crate::monoid::{ArtinMonoid, MonElem};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarCell {
    factors: Vec<MonElem>,
}

impl BarCell {
    /// The unique 0-cell `[]`.
    pub fn vertex() -> Self {
        BarCell { factors: Vec::new() }
    }

    /// Panics if some factor is the identity.
    pub fn new(factors: Vec<MonElem>) -> Self {
        assert!(factors.iter().all(|x| !x.is_identity()), "bar cells have non-trivial factors");
        BarCell { factors }
    }

    pub fn factors(&self) -> &[MonElem] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    /// `l(x_1 ... x_n)`, additive over factors.
    pub fn length(&self) -> usize {
        self.factors.iter().map(MonElem::length).sum()
    }

    /// Face obtained by multiplying factors `i` and `i + 1` (0-based).
    pub fn merge(&self, monoid: &ArtinMonoid, i: usize) -> BarCell {
        let mut factors = Vec::with_capacity(self.dim() - 1);
        factors.extend_from_slice(&self.factors[..i]);
        factors.push(monoid.mul(&self.factors[i], &self.factors[i + 1]));
        factors.extend_from_slice(&self.factors[i + 2..]);
        BarCell { factors }
    }

    /// Replaces factor `i` by the two factors `left, right`.
    pub fn split(&self, i: usize, left: MonElem, right: MonElem) -> BarCell {
        let mut factors = Vec::with_capacity(self.dim() + 1);
        factors.extend_from_slice(&self.factors[..i]);
        factors.push(left);
        factors.push(right);
        factors.extend_from_slice(&self.factors[i + 1..]);
        BarCell::new(factors)
    }

    pub fn display(&self, monoid: &ArtinMonoid) -> String {
        let parts: Vec<String> = self.factors.iter().map(|x| monoid.format(x)).collect();
        format!("[{}]", parts.join("|"))
    }
}

impl fmt::Debug for BarCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.factors).finish()
    }
}

/// `(length, flag)` with flag 0 for mu1-essential cells; ordered
/// lexicographically.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grade {
    pub length: usize,
    pub flag: u8,
}

/// The `n + 1` signed faces: drop-first with sign `+1`, the merge of
/// positions `i, i+1` (1-based `i`) with sign `(-1)^i`, drop-last with sign
/// `(-1)^n`.
pub fn faces(monoid: &ArtinMonoid, c: &BarCell) -> Vec<(i64, BarCell)> {
    let n = c.dim();
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(n + 1);
    out.push((1, BarCell { factors: c.factors[1..].to_vec() }));
    for i in 1..n {
        out.push((sign(i), c.merge(monoid, i - 1)));
    }
    out.push((sign(n), BarCell { factors: c.factors[..n - 1].to_vec() }));
    out
}

/// Faces that keep the length, i.e. the merges.
pub fn inner_faces(monoid: &ArtinMonoid, c: &BarCell) -> Vec<(i64, BarCell)> {
    (1..c.dim()).map(|i| (sign(i), c.merge(monoid, i - 1))).collect()
}

fn sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All ordered factorisations of `x` into non-trivial factors.
fn factorisations(monoid: &ArtinMonoid, x: &MonElem, memo: &mut HashMap<MonElem, Vec<Vec<MonElem>>>) -> Vec<Vec<MonElem>> {
    if let Some(hit) = memo.get(x) {
        return hit.clone();
    }
    let mut out = vec![vec![x.clone()]];
    for a in monoid.left_divisors(x) {
        if a.is_identity() || a.length() == x.length() {
            continue;
        }
        let rest = monoid.left_quotient(&a, x).expect("a is a left divisor");
        for tail in factorisations(monoid, &rest, memo) {
            let mut f = Vec::with_capacity(tail.len() + 1);
            f.push(a.clone());
            f.extend(tail);
            out.push(f);
        }
    }
    memo.insert(x.clone(), out.clone());
    out
}

/// All bar cells of total length `n`, of every dimension, sorted.
pub fn cells_of_grade(monoid: &ArtinMonoid, n: usize) -> Vec<BarCell> {
    if n == 0 {
        return vec![BarCell::vertex()];
    }
    let mut memo = HashMap::new();
    let mut out: Vec<BarCell> = monoid
        .elements_of_length(n)
        .iter()
        .flat_map(|x| factorisations(monoid, x, &mut memo))
        .map(|factors| BarCell { factors })
        .collect();
    out.sort();
    out
}

/// `(length, 0)` for mu1-essential cells and `(length, 1)` otherwise.
pub fn eta(monoid: &ArtinMonoid, c: &BarCell) -> Grade {
    Grade { length: c.length(), flag: if matching::mu1_essential(monoid, c) { 0 } else { 1 } }
}

/// A finite cellular chain complex with an explicit basis of bar cells.
#[derive(Clone, Debug)]
pub struct BarChainComplex {
    /// `cells[k]` is the ordered basis of `C_k`.
    pub cells: Vec<Vec<BarCell>>,
    pub complex: IntChainComplex,
}

fn assemble(
    cells: impl IntoIterator<Item = BarCell>,
    boundary: impl Fn(&BarCell) -> Vec<(i64, BarCell)>,
) -> Result<BarChainComplex, HomologyError> {
    let mut by_dim: Vec<BTreeSet<BarCell>> = Vec::new();
    for c in cells {
        if by_dim.len() <= c.dim() {
            by_dim.resize_with(c.dim() + 1, BTreeSet::new);
        }
        by_dim[c.dim()].insert(c);
    }
    let cells: Vec<Vec<BarCell>> = by_dim.into_iter().map(|s| s.into_iter().collect()).collect();
    let index: Vec<HashMap<&BarCell, usize>> =
        cells.iter().map(|v| v.iter().enumerate().map(|(i, c)| (c, i)).collect()).collect();
    let mut boundaries = Vec::new();
    for k in 1..cells.len() {
        let mut entries = Vec::new();
        for (j, c) in cells[k].iter().enumerate() {
            for (s, face) in boundary(c) {
                // Faces outside the basis belong to the quotiented part.
                if let Some(&i) = index[k - 1].get(&face) {
                    entries.push((i, j, s));
                }
            }
        }
        boundaries.push(SparseMatrix::from_triplets(cells[k - 1].len(), cells[k].len(), entries));
    }
    let ranks = cells.iter().map(Vec::len).collect();
    Ok(BarChainComplex { complex: IntChainComplex::new(ranks, boundaries)?, cells })
}

/// The relative complex on cells of length exactly `n` (inner faces only).
pub fn graded_complex(monoid: &ArtinMonoid, n: usize) -> Result<BarChainComplex, HomologyError> {
    assemble(cells_of_grade(monoid, n), |c| inner_faces(monoid, c))
}

/// The subcomplex of all cells of length at most `max_len`, full boundary.
pub fn truncated_complex(monoid: &ArtinMonoid, max_len: usize) -> Result<BarChainComplex, HomologyError> {
    let cells = (0..=max_len).flat_map(|n| cells_of_grade(monoid, n));
    assemble(cells, |c| faces(monoid, c))
}
