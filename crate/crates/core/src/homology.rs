//! Integer chain complexes, Smith normal form and homology groups.
//!
//! Boundary matrices are kept sparse. Homology first eliminates unit pivots
//! in `i64` (the bar complexes are dominated by `+-1` entries), then finishes
//! the residual block with a dense Smith normal form over `BigInt`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::coxeter::{CoxeterSystem, Order};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("boundary of dimension {0} has shape {1}x{2}, expected {3}x{4}")]
    ShapeMismatch(usize, usize, usize, usize, usize),
    #[error("boundary squared is non-zero from dimension {0}")]
    NotAComplex(usize),
}

/// A column-major sparse integer matrix without stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    /// Builds a matrix from `(row, col, value)` triples, summing repeats.
    pub fn from_triplets(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); cols];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r}, {c}) outside {rows}x{cols}");
            *acc[c].entry(r).or_insert(0) += v;
        }
        let columns = acc
            .into_iter()
            .map(|col| col.into_iter().filter(|&(_, v)| v != 0).collect())
            .collect();
        SparseMatrix { rows, cols, columns }
    }

    pub fn from_dense(dense: &[Vec<i64>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, |r| r.len());
        let entries = dense
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, v)));
        Self::from_triplets(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> &[(usize, i64)] {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.columns[c].iter().find(|e| e.0 == r).map_or(0, |e| e.1)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r, c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v;
        }
        out
    }

    /// `self * other`, panicking on shape mismatch.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut entries = Vec::new();
        for (c, col) in other.columns.iter().enumerate() {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(k, b) in col {
                for &(r, a) in &self.columns[k] {
                    *acc.entry(r).or_insert(0) += a * b;
                }
            }
            entries.extend(acc.into_iter().map(|(r, v)| (r, c, v)));
        }
        SparseMatrix::from_triplets(self.rows, other.cols, entries)
    }
}

/// `H_k = Z^rank + sum Z/torsion_i`, torsion in invariant-factor form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        HomologyGroup { rank, torsion: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Direct sum, renormalised to invariant factors.
    pub fn direct_sum(&self, other: &HomologyGroup) -> HomologyGroup {
        let mut diag: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        let n = diag.len();
        let matrix: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { diag[i].clone() } else { BigInt::zero() }).collect())
            .collect();
        diag = smith_normal_form(&matrix, false).diagonal;
        HomologyGroup {
            rank: self.rank + other.rank,
            torsion: diag.into_iter().filter(|d| !d.is_one() && !d.is_zero()).collect(),
        }
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Free graded module with boundary maps; `boundaries[k]` maps `C_k` to
/// `C_{k-1}` (so `boundaries[0]` is the zero map to `C_{-1} = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntChainComplex {
    ranks: Vec<usize>,
    boundaries: Vec<SparseMatrix>,
}

impl IntChainComplex {
    /// `boundaries[k-1]` is `d_k: C_k -> C_{k-1}` for `k >= 1`.
    pub fn new(ranks: Vec<usize>, boundaries: Vec<SparseMatrix>) -> Result<Self, HomologyError> {
        let mut all = vec![SparseMatrix::zeros(0, ranks.first().copied().unwrap_or(0))];
        for k in 1..ranks.len() {
            let d = boundaries.get(k - 1).cloned().unwrap_or_else(|| SparseMatrix::zeros(ranks[k - 1], ranks[k]));
            if d.rows() != ranks[k - 1] || d.cols() != ranks[k] {
                return Err(HomologyError::ShapeMismatch(k, d.rows(), d.cols(), ranks[k - 1], ranks[k]));
            }
            all.push(d);
        }
        Ok(IntChainComplex { ranks, boundaries: all })
    }

    pub fn empty() -> Self {
        IntChainComplex { ranks: Vec::new(), boundaries: Vec::new() }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn top_dim(&self) -> Option<usize> {
        self.ranks.len().checked_sub(1)
    }

    /// `d_k`, or `None` above the top dimension.
    pub fn boundary(&self, k: usize) -> Option<&SparseMatrix> {
        self.boundaries.get(k)
    }

    /// Checks `d_{k-1} d_k = 0` in every degree.
    pub fn verify(&self) -> Result<(), HomologyError> {
        for k in 2..self.ranks.len() {
            if !self.boundaries[k - 1].mul(&self.boundaries[k]).is_zero() {
                return Err(HomologyError::NotAComplex(k));
            }
        }
        Ok(())
    }
}

/// Output of [`smith_normal_form`]: `left * A * right = diag(diagonal)`.
#[derive(Clone, Debug)]
pub struct Snf {
    /// `min(rows, cols)` entries; non-negative, each dividing the next
    /// non-zero one, zeros last.
    pub diagonal: Vec<BigInt>,
    pub left: Option<Vec<Vec<BigInt>>>,
    pub right: Option<Vec<Vec<BigInt>>>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn row_axpy(m: &mut [Vec<BigInt>], target: usize, source: usize, factor: &BigInt) {
    if factor.is_zero() {
        return;
    }
    let (t, s) = if target < source {
        let (lo, hi) = m.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(target);
        (&mut hi[0], &lo[source])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        *x -= factor * y;
    }
}

fn col_axpy(m: &mut [Vec<BigInt>], target: usize, source: usize, factor: &BigInt) {
    if factor.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let delta = factor * &row[source];
        row[target] -= delta;
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Smith normal form of a dense integer matrix. With `witnesses`, also
/// returns unimodular `left`, `right` with `left * A * right = D`.
pub fn smith_normal_form(matrix: &[Vec<BigInt>], witnesses: bool) -> Snf {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut left = witnesses.then(|| identity(rows));
    let mut right = witnesses.then(|| identity(cols));
    let steps = rows.min(cols);

    for t in 0..steps {
        // Smallest non-zero magnitude in the trailing block becomes the pivot.
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()));
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        if let Some(l) = left.as_mut() {
            l.swap(t, pi);
        }
        swap_cols(&mut a, t, pj);
        if let Some(r) = right.as_mut() {
            swap_cols(r, t, pj);
        }

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                if let Some(l) = left.as_mut() {
                    row_axpy(l, i, t, &q);
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                if let Some(r) = right.as_mut() {
                    col_axpy(r, j, t, &q);
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // Move the smallest remainder in row/column t to the pivot.
                let mut best: Option<(usize, usize)> = None;
                for i in t + 1..rows {
                    if !a[i][t].is_zero() && best.is_none_or(|(bi, bj)| a[i][t].abs() < a[bi][bj].abs()) {
                        best = Some((i, t));
                    }
                }
                for j in t + 1..cols {
                    if !a[t][j].is_zero() && best.is_none_or(|(bi, bj)| a[t][j].abs() < a[bi][bj].abs()) {
                        best = Some((t, j));
                    }
                }
                if let Some((bi, bj)) = best {
                    if bi != t {
                        a.swap(t, bi);
                        if let Some(l) = left.as_mut() {
                            l.swap(t, bi);
                        }
                    } else {
                        swap_cols(&mut a, t, bj);
                        if let Some(r) = right.as_mut() {
                            swap_cols(r, t, bj);
                        }
                    }
                }
                continue;
            }
            // Row and column are clear; enforce divisibility of the block.
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_multiple_of(&a[t][t]));
            match offender {
                Some((i, _)) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut a, t, i, &minus_one);
                    if let Some(l) = left.as_mut() {
                        row_axpy(l, t, i, &minus_one);
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            if let Some(l) = left.as_mut() {
                for x in l[t].iter_mut() {
                    *x = -&*x;
                }
            }
        }
    }
    let diagonal = (0..steps).map(|i| a[i][i].clone()).collect();
    Snf { diagonal, left, right }
}

/// Non-zero invariant factors of a sparse matrix.
pub fn elementary_divisors(matrix: &SparseMatrix) -> Vec<BigInt> {
    let mut rows: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); matrix.rows()];
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); matrix.cols()];
    for (r, c, v) in matrix.triplets() {
        rows[r].insert(c, v);
        cols[c].insert(r);
    }
    let mut units = 0usize;

    // Unit-pivot elimination. Each pivot removes one row and one column and
    // replaces the rest by the Schur complement, which stays integral.
    'passes: loop {
        let mut progress = false;
        for c in 0..cols.len() {
            let pivot_row = cols[c]
                .iter()
                .copied()
                .filter(|&r| rows[r][&c].abs() == 1)
                .min_by_key(|&r| rows[r].len());
            let Some(pr) = pivot_row else { continue };
            let p = rows[pr][&c];
            let pivot_entries: Vec<(usize, i64)> = rows[pr].iter().map(|(&k, &v)| (k, v)).collect();
            let others: Vec<usize> = cols[c].iter().copied().filter(|&r| r != pr).collect();
            let mut updates = Vec::with_capacity(others.len());
            for &r in &others {
                // row_r -= (a_rc / p) * row_pr, with p = +-1
                let factor = rows[r][&c] * p;
                let mut new_row = rows[r].clone();
                for &(k, v) in &pivot_entries {
                    let Some(delta) = factor.checked_mul(v) else { break 'passes };
                    let cur = new_row.get(&k).copied().unwrap_or(0);
                    let Some(nv) = cur.checked_sub(delta) else { break 'passes };
                    if nv == 0 {
                        new_row.remove(&k);
                    } else {
                        new_row.insert(k, nv);
                    }
                }
                updates.push((r, new_row));
            }
            for (r, new_row) in updates {
                for &k in rows[r].keys() {
                    if !new_row.contains_key(&k) {
                        cols[k].remove(&r);
                    }
                }
                for &k in new_row.keys() {
                    cols[k].insert(r);
                }
                rows[r] = new_row;
            }
            for &k in rows[pr].keys() {
                cols[k].remove(&pr);
            }
            rows[pr].clear();
            units += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }

    let live_rows: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r].is_empty()).collect();
    let live_cols: Vec<usize> = (0..cols.len()).filter(|&c| !cols[c].is_empty()).collect();
    let col_index: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let dense: Vec<Vec<BigInt>> = live_rows
        .iter()
        .map(|&r| {
            let mut row = vec![BigInt::zero(); live_cols.len()];
            for (&c, &v) in &rows[r] {
                row[col_index[&c]] = BigInt::from(v);
            }
            row
        })
        .collect();
    let mut out = vec![BigInt::one(); units];
    out.extend(smith_normal_form(&dense, false).diagonal.into_iter().filter(|d| !d.is_zero()));
    out
}

/// Homology of an integer chain complex, one group per dimension.
pub fn homology_groups(complex: &IntChainComplex) -> Result<Vec<HomologyGroup>, HomologyError> {
    complex.verify()?;
    let n = complex.ranks().len();
    let divisors: Vec<Vec<BigInt>> = (0..=n)
        .map(|k| complex.boundary(k).map(elementary_divisors).unwrap_or_default())
        .collect();
    Ok((0..n)
        .map(|k| {
            let rank_out = divisors[k].len();
            let rank_in = divisors[k + 1].len();
            HomologyGroup {
                rank: complex.ranks()[k] - rank_out - rank_in,
                torsion: divisors[k + 1].iter().filter(|d| !d.is_one()).cloned().collect(),
            }
        })
        .collect())
}

/// `H_1` predicted by abelianising the Artin presentation: each relation
/// with odd finite `m(s, t)` identifies `s` with `t`, even ones vanish.
pub fn abelianized_presentation_h1(sys: &CoxeterSystem) -> HomologyGroup {
    let n = sys.rank();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = x;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for (s, t) in sys.pairs() {
        if let Order::Finite(m) = sys.m(s, t) {
            if m % 2 == 1 {
                let (a, b) = (find(&mut parent, s.index()), find(&mut parent, t.index()));
                parent[a] = b;
            }
        }
    }
    let components = (0..n).filter(|&i| find(&mut parent, i) == i).count();
    HomologyGroup::free(components)
}
