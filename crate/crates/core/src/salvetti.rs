//! The Salvetti poset `(W x S^f, <=)` of a finite-type system, its order
//! complex, and the checks that it has the expected cell structure.
//!
//! `(u, T) <= (v, R)` iff `T` is contained in `R`, `v^-1 u` lies in `W_R`
//! and `v^-1 u` is `T`-minimal. The down-set of `(u, T)` realises a disc of
//! dimension `|T|` whose boundary is the strict down-set.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::coxeter::{CoxElem, CoxeterError, CoxeterSystem, Gen, GenSet, Order};
use crate::homology::{homology_groups, HomologyError, HomologyGroup, IntChainComplex, SparseMatrix};
use crate::morse::Letter;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SalvettiError {
    #[error("the Coxeter group is infinite")]
    InfiniteType,
    #[error("m({0}, {1}) is infinite")]
    InfiniteM(String, String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// The cell `C(u, T)`, of dimension `|T|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SalCell {
    pub u: CoxElem,
    pub t: GenSet,
}

impl SalCell {
    pub fn dim(&self) -> usize {
        self.t.len()
    }

    pub fn display(&self, sys: &CoxeterSystem) -> String {
        format!("({}, {})", sys.format_word(self.u.word()), sys.format_set(self.t))
    }
}

pub fn sal_leq(sys: &CoxeterSystem, a: &SalCell, b: &SalCell) -> bool {
    if !a.t.is_subset(b.t) {
        return false;
    }
    let x = sys.cox_mul(&sys.cox_inverse(&b.u), &a.u);
    sys.in_parabolic(&x, b.t) && sys.is_t_minimal(&x, a.t)
}

/// The whole poset with its order relation tabulated.
#[derive(Clone, Debug)]
pub struct SalvettiPoset {
    pub cells: Vec<SalCell>,
    /// `below[j]` lists the `i != j` with `cells[i] < cells[j]`.
    pub below: Vec<Vec<usize>>,
    index: HashMap<SalCell, usize>,
}

impl SalvettiPoset {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn index_of(&self, c: &SalCell) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn less(&self, i: usize, j: usize) -> bool {
        self.below[j].binary_search(&i).is_ok()
    }

    /// Number of cells per dimension.
    pub fn census(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for c in &self.cells {
            if out.len() <= c.dim() {
                out.resize(c.dim() + 1, 0);
            }
            out[c.dim()] += 1;
        }
        out
    }
}

/// Builds the poset; needs `W` finite.
pub fn sal_poset(sys: &CoxeterSystem) -> Result<SalvettiPoset, SalvettiError> {
    if !sys.is_finite_type(sys.all_gens())? {
        return Err(SalvettiError::InfiniteType);
    }
    let group = sys.enumerate_group(sys.all_gens())?;
    let mut cells: Vec<SalCell> = Vec::new();
    for t in sys.sf_enumerate() {
        for u in &group {
            cells.push(SalCell { u: u.clone(), t });
        }
    }
    cells.sort_by(|a, b| (a.dim(), &a.u, a.t).cmp(&(b.dim(), &b.u, b.t)));
    let below = (0..cells.len())
        .map(|j| (0..cells.len()).filter(|&i| i != j && sal_leq(sys, &cells[i], &cells[j])).collect())
        .collect();
    let index = cells.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    Ok(SalvettiPoset { cells, below, index })
}

/// Reflexivity, antisymmetry and transitivity of `<=` on the cells.
pub fn check_partial_order(sys: &CoxeterSystem, poset: &SalvettiPoset) -> Result<(), SalvettiError> {
    let n = poset.len();
    for (i, c) in poset.cells.iter().enumerate() {
        if !sal_leq(sys, c, c) {
            return Err(SalvettiError::CheckFailed(format!("{} is not <= itself", c.display(sys))));
        }
        for &j in &poset.below[i] {
            if poset.less(i, j) {
                return Err(SalvettiError::CheckFailed(format!(
                    "{} and {} are mutually below each other",
                    c.display(sys),
                    poset.cells[j].display(sys)
                )));
            }
        }
    }
    for k in 0..n {
        for &j in &poset.below[k] {
            for &i in &poset.below[j] {
                if i != k && !poset.less(i, k) {
                    return Err(SalvettiError::CheckFailed(format!(
                        "transitivity fails through {}",
                        poset.cells[j].display(sys)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// `W` acts by left multiplication: it preserves `<=`, acts freely, and the
/// orbit count per dimension equals the quotient census.
pub fn check_action(sys: &CoxeterSystem, poset: &SalvettiPoset) -> Result<Vec<usize>, SalvettiError> {
    let group = sys.enumerate_group(sys.all_gens())?;
    let act = |g: &CoxElem, c: &SalCell| SalCell { u: sys.cox_mul(g, &c.u), t: c.t };
    for g in &group {
        for j in 0..poset.len() {
            let gj = act(g, &poset.cells[j]);
            for &i in &poset.below[j] {
                if !sal_leq(sys, &act(g, &poset.cells[i]), &gj) {
                    return Err(SalvettiError::CheckFailed(format!(
                        "left multiplication by {} breaks a relation",
                        sys.format_word(g.word())
                    )));
                }
            }
        }
    }
    let mut seen: HashSet<usize> = HashSet::new();
    let mut orbits: Vec<usize> = Vec::new();
    for (i, c) in poset.cells.iter().enumerate() {
        if seen.contains(&i) {
            continue;
        }
        let orbit: HashSet<usize> = group
            .iter()
            .map(|g| poset.index_of(&act(g, c)).expect("poset is closed under W"))
            .collect();
        if orbit.len() != group.len() {
            return Err(SalvettiError::CheckFailed(format!("orbit of {} has a stabiliser", c.display(sys))));
        }
        if orbits.len() <= c.dim() {
            orbits.resize(c.dim() + 1, 0);
        }
        orbits[c.dim()] += 1;
        seen.extend(orbit);
    }
    if orbits != quotient_census(sys) {
        return Err(SalvettiError::CheckFailed(format!("orbit census {orbits:?} differs from S^f strata")));
    }
    Ok(orbits)
}

/// Cells of the quotient per dimension: one for each `T` in `S^f`.
pub fn quotient_census(sys: &CoxeterSystem) -> Vec<usize> {
    let mut out = Vec::new();
    for t in sys.sf_enumerate() {
        if out.len() <= t.len() {
            out.resize(t.len() + 1, 0);
        }
        out[t.len()] += 1;
    }
    out
}

/// Simplicial chain complex of the chains of a finite poset. `below[j]`
/// lists the elements strictly below `j`, within `0..below.len()`.
pub fn order_complex(below: &[Vec<usize>]) -> Result<IntChainComplex, HomologyError> {
    // Chains written bottom-up; extend at the top only.
    let n = below.len();
    let mut above: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, bs) in below.iter().enumerate() {
        for &i in bs {
            above[i].push(j);
        }
    }
    let mut layers: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut current: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for chain in &current {
            let top = *chain.last().expect("non-empty chain");
            for &j in &above[top] {
                let mut c = chain.clone();
                c.push(j);
                next.push(c);
            }
        }
        layers.push(current);
        current = next;
    }
    let index: Vec<HashMap<&Vec<usize>, usize>> =
        layers.iter().map(|l| l.iter().enumerate().map(|(i, c)| (c, i)).collect()).collect();
    let mut boundaries = Vec::new();
    for k in 1..layers.len() {
        let mut entries = Vec::new();
        for (col, simplex) in layers[k].iter().enumerate() {
            for drop in 0..simplex.len() {
                let mut face = simplex.clone();
                face.remove(drop);
                let sign = if drop % 2 == 0 { 1 } else { -1 };
                entries.push((index[k - 1][&face], col, sign));
            }
        }
        boundaries.push(SparseMatrix::from_triplets(layers[k - 1].len(), layers[k].len(), entries));
    }
    IntChainComplex::new(layers.iter().map(Vec::len).collect(), boundaries)
}

/// Homology of the order complex of the sub-poset on `members`.
fn sub_order_homology(poset: &SalvettiPoset, members: &[usize]) -> Result<Vec<HomologyGroup>, HomologyError> {
    let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let below: Vec<Vec<usize>> = members
        .iter()
        .map(|&j| poset.below[j].iter().filter_map(|i| pos.get(i).copied()).collect())
        .collect();
    homology_groups(&order_complex(&below)?)
}

/// Homology of a point: `Z` in degree 0.
pub fn point_homology() -> Vec<HomologyGroup> {
    vec![HomologyGroup::free(1)]
}

/// Homology of `S^k`, with `S^-1` the empty space.
pub fn sphere_homology(k: isize) -> Vec<HomologyGroup> {
    match k {
        k if k < 0 => Vec::new(),
        0 => vec![HomologyGroup::free(2)],
        k => {
            let mut h = vec![HomologyGroup::free(0); k as usize + 1];
            h[0] = HomologyGroup::free(1);
            h[k as usize] = HomologyGroup::free(1);
            h
        }
    }
}

/// Equality after dropping trailing zero groups.
pub fn same_homology(a: &[HomologyGroup], b: &[HomologyGroup]) -> bool {
    let trim = |h: &[HomologyGroup]| -> Vec<HomologyGroup> {
        let mut v = h.to_vec();
        while v.last().is_some_and(HomologyGroup::is_zero) {
            v.pop();
        }
        v
    };
    trim(a) == trim(b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    pub dim: usize,
    pub down_set: Vec<HomologyGroup>,
    pub boundary: Vec<HomologyGroup>,
}

/// The down-set of `cells[i]` has the homology of a point and the strict
/// down-set that of `S^{|T|-1}`.
pub fn cell_pair_check(sys: &CoxeterSystem, poset: &SalvettiPoset, i: usize) -> Result<PairReport, SalvettiError> {
    let strict = poset.below[i].clone();
    let mut closed = strict.clone();
    closed.push(i);
    closed.sort_unstable();
    let report = PairReport {
        dim: poset.cells[i].dim(),
        down_set: sub_order_homology(poset, &closed)?,
        boundary: sub_order_homology(poset, &strict)?,
    };
    let sphere = sphere_homology(report.dim as isize - 1);
    if !same_homology(&report.down_set, &point_homology()) || !same_homology(&report.boundary, &sphere) {
        return Err(SalvettiError::CheckFailed(format!(
            "cell {}: down-set {:?}, boundary {:?}",
            poset.cells[i].display(sys),
            report.down_set,
            report.boundary
        )));
    }
    Ok(report)
}

fn alternating(start: Gen, other: Gen, len: u32) -> Vec<Gen> {
    (0..len).map(|i| if i % 2 == 0 { start } else { other }).collect()
}

/// The `2m` vertices of the polygon `C(w, {s,t})` in cyclic order:
/// `w, ws, wst, ..., w<st>^m = w<ts>^m, w<ts>^{m-1}, ..., wt`.
pub fn polygon_vertices(sys: &CoxeterSystem, w: &CoxElem, s: Gen, t: Gen) -> Result<Vec<CoxElem>, SalvettiError> {
    let Order::Finite(m) = sys.m(s, t) else {
        return Err(SalvettiError::InfiniteM(sys.name(s).into(), sys.name(t).into()));
    };
    let at = |word: Vec<Gen>| -> Result<CoxElem, SalvettiError> {
        let mut full = w.word().to_vec();
        full.extend(word);
        Ok(sys.cox_canonical(&full)?)
    };
    let mut out = Vec::with_capacity(2 * m as usize);
    for k in 0..=m {
        out.push(at(alternating(s, t, k))?);
    }
    for k in (1..m).rev() {
        out.push(at(alternating(t, s, k))?);
    }
    Ok(out)
}

/// The word read around the polygon starting at `w`: each edge between `p`
/// and `pg` is the generator `e_g`, oriented away from its shorter end.
pub fn polygon_relation_word(sys: &CoxeterSystem, w: &CoxElem, s: Gen, t: Gen) -> Result<Vec<Letter>, SalvettiError> {
    let vertices = polygon_vertices(sys, w, s, t)?;
    let mut word = Vec::with_capacity(vertices.len());
    for k in 0..vertices.len() {
        let (p, q) = (&vertices[k], &vertices[(k + 1) % vertices.len()]);
        let step = sys.cox_mul(&sys.cox_inverse(p), q);
        let [g] = step.word() else {
            return Err(SalvettiError::CheckFailed("consecutive polygon vertices differ by more than a generator".into()));
        };
        word.push(Letter { gen: *g, inverse: q.length() < p.length() });
    }
    Ok(word)
}
