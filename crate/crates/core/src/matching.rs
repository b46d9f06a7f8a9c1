//! The two matchings on the bar complex.
//!
//! `M1` pairs cells that are not mu1-essential: a mu1-collapsible cell is
//! matched with the face merging positions `d-1, d` (`d` its mu1-depth), and
//! every other non-essential cell is the lower end of exactly one such pair.
//! `M2` does the same on mu1-essential cells with the mu2 notions. What is
//! left unmatched are the mu2-essential cells, one for each `T` in `S^f`.
//!
//! For a mu1-essential cell `[x_1|...|x_n]` the tail products are
//! `x_k ... x_n = Delta_{I_k}` with `I_1 > I_2 > ... > I_n > I_{n+1} = {}`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::bar::{self, BarCell, Grade};
use crate::coxeter::GenSet;
use crate::monoid::{ArtinMonoid, MonElem, MonoidError};
use crate::morse::{self, AuditFailure, AuditSummary};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("cell {0} is not mu1-essential")]
    NotMu1Essential(String),
    #[error("{0} is not a finite-type subset")]
    NotFiniteType(String),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error("matching audit failed: {0}")]
    Audit(String),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatchKind {
    M1,
    M2,
}

impl fmt::Display for MatchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatchKind::M1 => "M1",
            MatchKind::M2 => "M2",
        })
    }
}

/// `upper` is matched with its face `lower`, the merge at `(depth-1, depth)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatchEdge {
    pub upper: BarCell,
    pub lower: BarCell,
    pub kind: MatchKind,
    pub depth: usize,
}

/// The role of a cell in `M = M1 u M2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Partner {
    Essential,
    /// The cell is the upper end of this edge.
    Upper(MatchEdge),
    /// The cell is the lower end of this edge.
    Lower(MatchEdge),
}

/// `tails[k]` is `Some(T)` when `x_{k+1} ... x_n = Delta_T` (0-based `k`),
/// with `tails[n] = Some({})`. Entries left of the first failure are `None`.
fn tail_deltas(monoid: &ArtinMonoid, c: &BarCell) -> Vec<Option<GenSet>> {
    let n = c.dim();
    let mut out = vec![None; n + 1];
    out[n] = Some(GenSet::EMPTY);
    let mut product = MonElem::identity();
    for k in (0..n).rev() {
        product = monoid.mul(&c.factors()[k], &product);
        match monoid.delta_set(&product) {
            Some(t) => out[k] = Some(t),
            None => break,
        }
    }
    out
}

/// mu1-depth, 1-based: the least `j` with `[x_j|...|x_n]` mu1-essential.
pub fn d1(monoid: &ArtinMonoid, c: &BarCell) -> usize {
    tail_deltas(monoid, c).iter().position(Option::is_some).expect("the empty tail is essential") + 1
}

pub fn mu1_essential(monoid: &ArtinMonoid, c: &BarCell) -> bool {
    d1(monoid, c) == 1
}

/// `(j, I_j)` for `d1(c) <= j <= n + 1`, 1-based.
pub fn tail_sets(monoid: &ArtinMonoid, c: &BarCell) -> Vec<(usize, GenSet)> {
    tail_deltas(monoid, c)
        .into_iter()
        .enumerate()
        .filter_map(|(k, t)| t.map(|t| (k + 1, t)))
        .collect()
}

/// `I(x_{d-1} x_d ... x_n) = I_d` for `d = d1(c) >= 2`.
pub fn mu1_collapsible(monoid: &ArtinMonoid, c: &BarCell) -> bool {
    let tails = tail_deltas(monoid, c);
    let d = tails.iter().position(Option::is_some).expect("the empty tail is essential") + 1;
    if d == 1 {
        return false;
    }
    let i_d = tails[d - 1].expect("tail at the depth");
    let rest = monoid.product(&c.factors()[d - 2..]);
    monoid.finishing_set(&rest) == i_d
}

/// The `M1` edge containing a non-mu1-essential cell; `None` for
/// essential cells.
pub fn m1_partner(monoid: &ArtinMonoid, c: &BarCell) -> Result<Option<MatchEdge>, MatchingError> {
    let tails = tail_deltas(monoid, c);
    let d = tails.iter().position(Option::is_some).expect("the empty tail is essential") + 1;
    if d == 1 {
        return Ok(None);
    }
    let i_d = tails[d - 1].expect("tail at the depth");
    let x = &c.factors()[d - 2];
    let r = monoid.finishing_set(&monoid.product(&c.factors()[d - 2..]));
    if r == i_d {
        return Ok(Some(MatchEdge { upper: c.clone(), lower: c.merge(monoid, d - 2), kind: MatchKind::M1, depth: d }));
    }
    // x Delta_{I_d} = beta Delta_R with R = I(x Delta_{I_d}) strictly larger
    // than I_d; split x = beta * y where y Delta_{I_d} = Delta_R.
    let delta_r = monoid.delta(r)?;
    let y = monoid
        .right_quotient(&delta_r, &monoid.delta(i_d)?)
        .ok_or_else(|| MonoidError::Internal("Delta_I does not right divide Delta_R".into()))?;
    let beta = monoid
        .right_quotient(x, &y)
        .ok_or_else(|| MonoidError::Internal(format!("{} not right divisible by {}", monoid.format(x), monoid.format(&y))))?;
    let upper = c.split(d - 2, beta, y);
    Ok(Some(MatchEdge { upper, lower: c.clone(), kind: MatchKind::M1, depth: d }))
}

fn mu1_chain(monoid: &ArtinMonoid, c: &BarCell) -> Result<Vec<GenSet>, MatchingError> {
    let tails = tail_deltas(monoid, c);
    if tails[0].is_none() {
        return Err(MatchingError::NotMu1Essential(c.display(monoid)));
    }
    Ok(tails.into_iter().map(|t| t.expect("essential cell has all tails")).collect())
}

/// Removing the single element `max I_k` at step `k`.
fn max_step(chain: &[GenSet], k: usize) -> bool {
    let diff = chain[k].difference(chain[k + 1]);
    diff.len() == 1 && diff.max() == chain[k].max()
}

/// mu2-depth, 1-based, of a mu1-essential cell.
fn d2_of_chain(chain: &[GenSet]) -> usize {
    let n = chain.len() - 1;
    let mut d = n + 1;
    while d > 1 && max_step(chain, d - 2) {
        d -= 1;
    }
    d
}

pub fn d2(monoid: &ArtinMonoid, c: &BarCell) -> Result<usize, MatchingError> {
    Ok(d2_of_chain(&mu1_chain(monoid, c)?))
}

pub fn mu2_essential(monoid: &ArtinMonoid, c: &BarCell) -> Result<bool, MatchingError> {
    Ok(d2(monoid, c)? == 1)
}

/// `max I_{d-1} = max I_d` for `d = d2(c) >= 2`; the empty set has no max.
pub fn mu2_collapsible(monoid: &ArtinMonoid, c: &BarCell) -> Result<bool, MatchingError> {
    let chain = mu1_chain(monoid, c)?;
    let d = d2_of_chain(&chain);
    Ok(d >= 2 && !chain[d - 1].is_empty() && chain[d - 2].max() == chain[d - 1].max())
}

/// The `M2` edge containing a mu1-essential cell; `None` for mu2-essential
/// cells.
pub fn m2_partner(monoid: &ArtinMonoid, c: &BarCell) -> Result<Option<MatchEdge>, MatchingError> {
    let chain = mu1_chain(monoid, c)?;
    let d = d2_of_chain(&chain);
    if d == 1 {
        return Ok(None);
    }
    let (p, q) = (chain[d - 2], chain[d - 1]);
    if !q.is_empty() && p.max() == q.max() {
        return Ok(Some(MatchEdge { upper: c.clone(), lower: c.merge(monoid, d - 2), kind: MatchKind::M2, depth: d }));
    }
    // Insert the missing max step: P > J = Q + {max P} > Q.
    let j = q.with(p.max().expect("P is larger than Q"));
    let delta_j = monoid.delta(j)?;
    let y = monoid
        .right_quotient(&delta_j, &monoid.delta(q)?)
        .ok_or_else(|| MonoidError::Internal("Delta_Q does not right divide Delta_J".into()))?;
    let beta = monoid
        .right_quotient(&monoid.delta(p)?, &delta_j)
        .ok_or_else(|| MonoidError::Internal("Delta_J does not right divide Delta_P".into()))?;
    let upper = c.split(d - 2, beta, y);
    Ok(Some(MatchEdge { upper, lower: c.clone(), kind: MatchKind::M2, depth: d }))
}

/// Position of `c` in `M = M1 u M2`.
pub fn partner(monoid: &ArtinMonoid, c: &BarCell) -> Result<Partner, MatchingError> {
    let edge = if mu1_essential(monoid, c) { m2_partner(monoid, c)? } else { m1_partner(monoid, c)? };
    Ok(match edge {
        None => Partner::Essential,
        Some(e) if e.upper == *c => Partner::Upper(e),
        Some(e) => Partner::Lower(e),
    })
}

/// The mu2-essential cell for `T`: its tail sets remove `max` one at a time,
/// `[Delta_T / Delta_{T - max T} | ... | Delta_{min T}]`.
pub fn essential_cell(monoid: &ArtinMonoid, t: GenSet) -> Result<BarCell, MatchingError> {
    let sys = monoid.system();
    if !sys.is_finite_type(t).map_err(MonoidError::from)? {
        return Err(MatchingError::NotFiniteType(sys.format_set(t)));
    }
    let mut factors = Vec::with_capacity(t.len());
    let mut cur = t;
    while let Some(s) = cur.max() {
        let next = cur.without(s);
        let x = monoid
            .right_quotient(&monoid.delta(cur)?, &monoid.delta(next)?)
            .ok_or_else(|| MonoidError::Internal("parabolic Delta does not divide".into()))?;
        factors.push(x);
        cur = next;
    }
    Ok(BarCell::new(factors))
}

/// All cells of a grade.
pub fn cells_of(monoid: &ArtinMonoid, g: Grade) -> Vec<BarCell> {
    bar::cells_of_grade(monoid, g.length).into_iter().filter(|c| bar::eta(monoid, c) == g).collect()
}

/// All `M1 u M2` edges among cells of grade `g`, sorted.
pub fn matching_for_grade(monoid: &ArtinMonoid, g: Grade) -> Result<Vec<MatchEdge>, MatchingError> {
    let mut edges = BTreeSet::new();
    for c in cells_of(monoid, g) {
        if let Partner::Upper(e) | Partner::Lower(e) = partner(monoid, &c)? {
            edges.insert(e);
        }
    }
    Ok(edges.into_iter().collect())
}

/// Counts from a passed grade audit.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct GradeReport {
    pub grade: Grade,
    pub summary: AuditSummary,
}

/// Audits `edges` as the matching on the cells of grade `g`: partial
/// matching, exactly the mu2-essential cells left over, eta-compatibility,
/// kind agreeing with the flag, and acyclicity of the modified Hasse
/// diagram restricted to the grade.
pub fn audit_edges(
    monoid: &ArtinMonoid,
    g: Grade,
    edges: &[MatchEdge],
) -> Result<GradeReport, AuditFailure<BarCell>> {
    let cells = cells_of(monoid, g);
    for e in edges {
        let expected = if g.flag == 0 { MatchKind::M2 } else { MatchKind::M1 };
        if e.kind != expected {
            return Err(AuditFailure::Other(format!("{} edge in flag-{} fiber", e.kind, g.flag)));
        }
        if bar::eta(monoid, &e.upper) != bar::eta(monoid, &e.lower) {
            return Err(AuditFailure::Other(format!(
                "eta differs across {} -> {}",
                e.upper.display(monoid),
                e.lower.display(monoid)
            )));
        }
        if e.depth < 2 || e.depth > e.upper.dim() || e.upper.merge(monoid, e.depth - 2) != e.lower {
            return Err(AuditFailure::NotAFace { upper: e.upper.clone(), lower: e.lower.clone() });
        }
    }
    let pairs: Vec<(BarCell, BarCell)> = edges.iter().map(|e| (e.upper.clone(), e.lower.clone())).collect();
    let essential: HashSet<BarCell> = cells
        .iter()
        .filter(|c| g.flag == 0 && mu2_essential(monoid, c).unwrap_or(false))
        .cloned()
        .collect();
    let summary = morse::audit_matching(
        &cells,
        |c| bar::faces(monoid, c).into_iter().map(|(s, f)| (f, s)).collect(),
        &pairs,
        |c| essential.contains(c),
    )?;
    Ok(GradeReport { grade: g, summary })
}

/// Computes and audits the matching on grade `g`, including that the
/// partner computation is an involution.
pub fn audit_grade(monoid: &ArtinMonoid, g: Grade) -> Result<GradeReport, MatchingError> {
    let edges = matching_for_grade(monoid, g)?;
    for e in &edges {
        for c in [&e.upper, &e.lower] {
            let back = match partner(monoid, c)? {
                Partner::Upper(b) | Partner::Lower(b) => b,
                Partner::Essential => {
                    return Err(MatchingError::Audit(format!("{} lost its partner", c.display(monoid))))
                }
            };
            if back != *e {
                return Err(MatchingError::Audit(format!("partner of {} is not an involution", c.display(monoid))));
            }
        }
    }
    audit_edges(monoid, g, &edges).map_err(|f| MatchingError::Audit(describe(monoid, &f)))
}

/// Renders a failure with cells in generator notation.
pub fn describe(monoid: &ArtinMonoid, failure: &AuditFailure<BarCell>) -> String {
    let d = |c: &BarCell| c.display(monoid);
    match failure {
        AuditFailure::ForeignCell(c) => format!("edge endpoint {} outside the grade", d(c)),
        AuditFailure::DoubleMatched(c) => format!("cell {} occurs in more than one edge", d(c)),
        AuditFailure::Unmatched(c) => format!("unmatched cell {}", d(c)),
        AuditFailure::EssentialMatched(c) => format!("essential cell {} is matched", d(c)),
        AuditFailure::NotAFace { upper, lower } => format!("{} is not the expected face of {}", d(lower), d(upper)),
        AuditFailure::IrregularFace { upper, lower, coefficient } => {
            format!("{} has incidence {coefficient} in {}", d(lower), d(upper))
        }
        AuditFailure::Cycle(cs) => {
            format!("cycle {}", cs.iter().map(d).collect::<Vec<_>>().join(" -> "))
        }
        AuditFailure::Other(msg) => msg.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{CoxeterSystem, Order};

    fn a2() -> CoxeterSystem {
        CoxeterSystem::dihedral(Order::Finite(3))
    }

    fn cell(m: &ArtinMonoid, parts: &[&str]) -> BarCell {
        BarCell::new(parts.iter().map(|p| m.parse(p).unwrap()).collect())
    }

    #[test]
    fn mu1_examples() {
        let sys = a2();
        let m = ArtinMonoid::new(&sys);
        assert!(mu1_essential(&m, &cell(&m, &["ab", "a"])));
        assert!(!mu1_essential(&m, &cell(&m, &["a", "a"])));
        assert!(mu1_essential(&m, &BarCell::vertex()));
        assert_eq!(d1(&m, &cell(&m, &["ab", "a"])), 1);
        assert_eq!(d1(&m, &cell(&m, &["a", "a"])), 2);
        assert_eq!(d1(&m, &cell(&m, &["aa"])), 2);
        let (a, ab) = (GenSet(0b01), GenSet(0b11));
        assert_eq!(tail_sets(&m, &cell(&m, &["ab", "a"])), vec![(1, ab), (2, a), (3, GenSet::EMPTY)]);
        assert_eq!(tail_sets(&m, &cell(&m, &["a", "a"])), vec![(2, a), (3, GenSet::EMPTY)]);
        assert!(mu1_collapsible(&m, &cell(&m, &["a", "a"])));
        assert!(mu1_collapsible(&m, &cell(&m, &["b", "a", "a"])));
        assert!(!mu1_collapsible(&m, &cell(&m, &["ab", "a"])));
        assert!(!mu1_collapsible(&m, &cell(&m, &["aa"])));
    }

    #[test]
    fn m1_partners() {
        let sys = a2();
        let m = ArtinMonoid::new(&sys);
        let e = m1_partner(&m, &cell(&m, &["aa"])).unwrap().unwrap();
        assert_eq!((e.upper.display(&m), e.lower.display(&m)), ("[a|a]".into(), "[aa]".into()));
        assert_eq!(m1_partner(&m, &cell(&m, &["a", "a"])).unwrap(), Some(e));
        assert_eq!(m1_partner(&m, &cell(&m, &["ab", "a"])).unwrap(), None);
    }

    #[test]
    fn mu2_examples() {
        let sys = a2();
        let m = ArtinMonoid::new(&sys);
        assert!(mu2_essential(&m, &cell(&m, &["ab", "a"])).unwrap());
        assert!(mu1_essential(&m, &cell(&m, &["ba", "b"])));
        assert!(!mu2_essential(&m, &cell(&m, &["ba", "b"])).unwrap());
        assert!(mu2_essential(&m, &BarCell::vertex()).unwrap());
        assert!(matches!(mu2_essential(&m, &cell(&m, &["a", "a"])), Err(MatchingError::NotMu1Essential(_))));
        // [aba] is a target: the missing step {a,b} > {b} > {} is inserted.
        let e = m2_partner(&m, &cell(&m, &["aba"])).unwrap().unwrap();
        assert_eq!((e.upper.display(&m), e.lower.display(&m)), ("[ba|b]".into(), "[aba]".into()));
        assert_eq!(m2_partner(&m, &cell(&m, &["ba", "b"])).unwrap(), Some(e.clone()));
        assert_eq!(e.kind, MatchKind::M2);
    }

    #[test]
    fn essential_cells_per_subset() {
        let sys = a2();
        let m = ArtinMonoid::new(&sys);
        let names: Vec<String> = sys.sf_enumerate().into_iter().map(|t| essential_cell(&m, t).unwrap().display(&m)).collect();
        assert_eq!(names, vec!["[]", "[a]", "[b]", "[ab|a]"]);
        for t in sys.sf_enumerate() {
            let c = essential_cell(&m, t).unwrap();
            assert!(mu2_essential(&m, &c).unwrap());
            assert_eq!(partner(&m, &c).unwrap(), Partner::Essential);
            assert_eq!(c.dim(), t.len());
        }
        let free = CoxeterSystem::dihedral(Order::Infinite);
        let m = ArtinMonoid::new(&free);
        assert!(matches!(essential_cell(&m, GenSet(0b11)), Err(MatchingError::NotFiniteType(_))));
    }

    #[test]
    fn grade_examples() {
        let sys = a2();
        let m = ArtinMonoid::new(&sys);
        assert!(matching_for_grade(&m, Grade { length: 0, flag: 0 }).unwrap().is_empty());
        let g21: Vec<(String, String)> = matching_for_grade(&m, Grade { length: 2, flag: 1 })
            .unwrap()
            .iter()
            .map(|e| (e.upper.display(&m), e.lower.display(&m)))
            .collect();
        assert!(g21.contains(&("[a|a]".into(), "[aa]".into())));
        assert!(g21.contains(&("[b|b]".into(), "[bb]".into())));
        let g30 = matching_for_grade(&m, Grade { length: 3, flag: 0 }).unwrap();
        let ess = cell(&m, &["ab", "a"]);
        assert!(g30.iter().all(|e| e.upper != ess && e.lower != ess));
        assert!(g30.iter().all(|e| e.kind == MatchKind::M2));
    }

    #[test]
    fn audits_pass_on_small_grades() {
        let sys = a2();
        let m = ArtinMonoid::new(&sys);
        for length in 0..=5 {
            for flag in 0..=1 {
                let g = Grade { length, flag };
                audit_grade(&m, g).unwrap_or_else(|e| panic!("{g:?}: {e}"));
            }
        }
    }

    #[test]
    fn sabotage_is_detected() {
        let sys = a2();
        let m = ArtinMonoid::new(&sys);
        let g = Grade { length: 3, flag: 1 };
        let mut edges = matching_for_grade(&m, g).unwrap();
        assert!(!edges.is_empty());
        edges.remove(0);
        assert!(matches!(audit_edges(&m, g, &edges), Err(AuditFailure::Unmatched(_))));
    }
}
