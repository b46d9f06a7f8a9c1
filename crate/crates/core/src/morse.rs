//! Algebraic discrete Morse theory.
//!
//! Given a cellular chain complex with an acyclic matching, the Morse
//! complex has the unmatched (essential) cells as basis. Its boundary sums
//! over zig-zag paths: go down a face, and whenever the face is the lower
//! cell of a matched pair `(tau, sigma)` replace it by
//! `-(1/[tau:sigma]) * (d tau - [tau:sigma] sigma)`, recursively. Faces that
//! are upper cells of a pair vanish.
//!
//! The second half of the module applies this to the bar complex with the
//! matching from [`crate::matching`], producing the complex `Y` with one
//! cell per finite-type subset of generators.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::rc::Rc;

use thiserror::Error;

use crate::bar::{self, BarCell};
use crate::coxeter::{Gen, GenSet, Order};
use crate::homology::{HomologyError, IntChainComplex, SparseMatrix};
use crate::matching::{self, MatchingError, Partner};
use crate::monoid::ArtinMonoid;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorseError {
    #[error("matching is not acyclic near {0}")]
    NonAcyclicInput(String),
    #[error("matched pair {0} has incidence {1}, expected +-1")]
    IrregularMatch(String, i64),
    #[error("boundary reaches non-essential cell {0}")]
    NotEssential(String),
    #[error("m({0}, {1}) is infinite")]
    InfiniteM(String, String),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// How a cell takes part in a matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pairing<C> {
    Essential,
    /// Matched with the given lower-dimensional face.
    Upper(C),
    /// Matched with the given higher-dimensional coface.
    Lower(C),
}

/// A cellular complex together with a matching, queried lazily.
pub trait MorseSource {
    type Cell: Clone + Eq + Hash + Ord + fmt::Debug;

    fn dim(&self, c: &Self::Cell) -> usize;

    /// Signed faces; repeated faces are summed by the engine.
    fn boundary(&self, c: &Self::Cell) -> Vec<(Self::Cell, i64)>;

    fn pairing(&self, c: &Self::Cell) -> Result<Pairing<Self::Cell>, MorseError>;
}

type Chain<C> = BTreeMap<C, i64>;

fn add_into<C: Ord + Clone>(acc: &mut Chain<C>, chain: &Chain<C>, factor: i64) {
    for (c, v) in chain {
        let e = acc.entry(c.clone()).or_insert(0);
        *e += factor * v;
        if *e == 0 {
            acc.remove(c);
        }
    }
}

fn aggregate<C: Ord>(faces: Vec<(C, i64)>) -> Chain<C> {
    let mut out = BTreeMap::new();
    for (c, v) in faces {
        *out.entry(c).or_insert(0) += v;
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Memoised zig-zag flow for one source.
pub struct MorseFlow<'s, S: MorseSource> {
    src: &'s S,
    flows: HashMap<S::Cell, Rc<Chain<S::Cell>>>,
}

enum Visit {
    Open,
    Done,
}

impl<'s, S: MorseSource> MorseFlow<'s, S> {
    pub fn new(src: &'s S) -> Self {
        MorseFlow { src, flows: HashMap::new() }
    }

    /// For a lower cell `sigma` matched with `tau`: `d tau` with `sigma`
    /// removed, scaled by `-1/[tau:sigma]`.
    fn lower_step(&self, sigma: &S::Cell, tau: &S::Cell) -> Result<Chain<S::Cell>, MorseError> {
        let mut d = aggregate(self.src.boundary(tau));
        let w = d.remove(sigma).unwrap_or(0);
        if w.abs() != 1 {
            return Err(MorseError::IrregularMatch(format!("{tau:?} -> {sigma:?}"), w));
        }
        for v in d.values_mut() {
            *v *= -w;
        }
        Ok(d)
    }

    /// Image of a single cell under the flow to essential cells.
    pub fn flow(&mut self, root: &S::Cell) -> Result<Rc<Chain<S::Cell>>, MorseError> {
        match self.src.pairing(root)? {
            Pairing::Essential => return Ok(Rc::new(BTreeMap::from([(root.clone(), 1)]))),
            Pairing::Upper(_) => return Ok(Rc::new(BTreeMap::new())),
            Pairing::Lower(_) => {}
        }
        if let Some(hit) = self.flows.get(root) {
            return Ok(Rc::clone(hit));
        }
        // Iterative post-order over the lower cells reachable from `root`.
        let mut state: HashMap<S::Cell, Visit> = HashMap::new();
        let mut steps: HashMap<S::Cell, Chain<S::Cell>> = HashMap::new();
        let mut stack = vec![(root.clone(), false)];
        while let Some((v, post)) = stack.pop() {
            if post {
                let step = steps.remove(&v).expect("step computed on entry");
                let mut out = BTreeMap::new();
                for (c, coef) in &step {
                    match self.src.pairing(c)? {
                        Pairing::Essential => add_into(&mut out, &BTreeMap::from([(c.clone(), 1)]), *coef),
                        Pairing::Upper(_) => {}
                        Pairing::Lower(_) => {
                            let sub = Rc::clone(&self.flows[c]);
                            add_into(&mut out, &sub, *coef);
                        }
                    }
                }
                self.flows.insert(v.clone(), Rc::new(out));
                state.insert(v, Visit::Done);
                continue;
            }
            if self.flows.contains_key(&v) {
                continue;
            }
            match state.get(&v) {
                Some(Visit::Done) => continue,
                Some(Visit::Open) => return Err(MorseError::NonAcyclicInput(format!("{v:?}"))),
                None => {}
            }
            let Pairing::Lower(tau) = self.src.pairing(&v)? else {
                unreachable!("only lower cells are pushed")
            };
            let step = self.lower_step(&v, &tau)?;
            state.insert(v.clone(), Visit::Open);
            stack.push((v.clone(), true));
            for c in step.keys() {
                if self.flows.contains_key(c) {
                    continue;
                }
                if let Pairing::Lower(_) = self.src.pairing(c)? {
                    match state.get(c) {
                        Some(Visit::Done) => {}
                        Some(Visit::Open) => return Err(MorseError::NonAcyclicInput(format!("{c:?}"))),
                        None => stack.push((c.clone(), false)),
                    }
                }
            }
            steps.insert(v, step);
        }
        Ok(Rc::clone(&self.flows[root]))
    }

    /// Morse boundary of an essential cell, as a chain of essential cells.
    pub fn morse_chain(&mut self, e: &S::Cell) -> Result<Chain<S::Cell>, MorseError> {
        let mut out = BTreeMap::new();
        for (sigma, coef) in aggregate(self.src.boundary(e)) {
            let f = self.flow(&sigma)?;
            add_into(&mut out, &f, coef);
        }
        Ok(out)
    }
}

/// Essential cells grouped by dimension with their Morse boundary matrices.
#[derive(Clone, Debug)]
pub struct MorseComplex<C> {
    pub cells: Vec<Vec<C>>,
    pub complex: IntChainComplex,
}

/// Assembles the Morse complex on the given essential cells.
pub fn morse_boundary<S: MorseSource>(src: &S, essential: &[S::Cell]) -> Result<MorseComplex<S::Cell>, MorseError> {
    let top = essential.iter().map(|c| src.dim(c)).max();
    let mut cells: Vec<Vec<S::Cell>> = vec![Vec::new(); top.map_or(0, |t| t + 1)];
    for c in essential {
        cells[src.dim(c)].push(c.clone());
    }
    for layer in cells.iter_mut() {
        layer.sort();
    }
    let index: Vec<HashMap<&S::Cell, usize>> =
        cells.iter().map(|v| v.iter().enumerate().map(|(i, c)| (c, i)).collect()).collect();
    let mut flow = MorseFlow::new(src);
    let mut boundaries = Vec::new();
    for k in 1..cells.len() {
        let mut entries = Vec::new();
        for (j, e) in cells[k].iter().enumerate() {
            for (c, v) in flow.morse_chain(e)? {
                let i = *index[k - 1].get(&c).ok_or_else(|| MorseError::NotEssential(format!("{c:?}")))?;
                entries.push((i, j, v));
            }
        }
        boundaries.push(SparseMatrix::from_triplets(cells[k - 1].len(), cells[k].len(), entries));
    }
    let ranks = cells.iter().map(Vec::len).collect();
    Ok(MorseComplex { complex: IntChainComplex::new(ranks, boundaries)?, cells })
}

/// Why a matching failed an audit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AuditFailure<C> {
    /// An edge endpoint lies outside the audited cell set.
    ForeignCell(C),
    DoubleMatched(C),
    Unmatched(C),
    EssentialMatched(C),
    NotAFace { upper: C, lower: C },
    IrregularFace { upper: C, lower: C, coefficient: i64 },
    Cycle(Vec<C>),
    /// A problem specific to the caller's matching rules.
    Other(String),
}

impl<C: fmt::Debug> fmt::Display for AuditFailure<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuditFailure::ForeignCell(c) => write!(f, "edge endpoint {c:?} outside the audited cells"),
            AuditFailure::DoubleMatched(c) => write!(f, "cell {c:?} occurs in more than one edge"),
            AuditFailure::Unmatched(c) => write!(f, "non-essential cell {c:?} is unmatched"),
            AuditFailure::EssentialMatched(c) => write!(f, "essential cell {c:?} is matched"),
            AuditFailure::NotAFace { upper, lower } => write!(f, "{lower:?} is not a face of {upper:?}"),
            AuditFailure::IrregularFace { upper, lower, coefficient } => {
                write!(f, "{lower:?} has incidence {coefficient} in {upper:?}")
            }
            AuditFailure::Cycle(cs) => write!(f, "directed cycle through {} cells: {cs:?}", cs.len()),
            AuditFailure::Other(msg) => f.write_str(msg),
        }
    }
}

/// Counts from a passed audit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuditSummary {
    pub cells: usize,
    pub edges: usize,
    pub essential: usize,
}

/// Finds a directed cycle in the modified Hasse diagram restricted to
/// `cells`: every face relation points down, except matched pairs which
/// point up.
pub fn find_cycle<C: Clone + Eq + Hash>(
    cells: &[C],
    boundary: impl Fn(&C) -> Vec<(C, i64)>,
    edges: &[(C, C)],
) -> Option<Vec<C>> {
    let index: HashMap<&C, usize> = cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let matched: HashSet<(usize, usize)> = edges
        .iter()
        .filter_map(|(u, l)| Some((*index.get(u)?, *index.get(l)?)))
        .collect();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); cells.len()];
    for (t, c) in cells.iter().enumerate() {
        let mut seen = HashSet::new();
        for (face, coef) in boundary(c) {
            let Some(&s) = index.get(&face) else { continue };
            if coef == 0 || !seen.insert(s) {
                continue;
            }
            if matched.contains(&(t, s)) {
                succ[s].push(t);
            } else {
                succ[t].push(s);
            }
        }
    }
    let mut indeg = vec![0usize; cells.len()];
    for out in &succ {
        for &v in out {
            indeg[v] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..cells.len()).filter(|&v| indeg[v] == 0).collect();
    let mut removed = vec![false; cells.len()];
    while let Some(v) = queue.pop_front() {
        removed[v] = true;
        for &w in &succ[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push_back(w);
            }
        }
    }
    let start = (0..cells.len()).find(|&v| !removed[v])?;
    // Every remaining vertex has a remaining predecessor; walk backwards
    // through remaining vertices until one repeats.
    let mut pred: Vec<Option<usize>> = vec![None; cells.len()];
    for v in 0..cells.len() {
        if removed[v] {
            continue;
        }
        for &w in &succ[v] {
            if !removed[w] {
                pred[w] = Some(v);
            }
        }
    }
    let mut pos: HashMap<usize, usize> = HashMap::new();
    let mut path = Vec::new();
    let mut cur = start;
    while !pos.contains_key(&cur) {
        pos.insert(cur, path.len());
        path.push(cur);
        cur = pred[cur].expect("remaining vertices have remaining predecessors");
    }
    let mut cycle: Vec<C> = path[pos[&cur]..].iter().map(|&i| cells[i].clone()).collect();
    cycle.reverse();
    Some(cycle)
}

/// Checks that `edges` (upper, lower) is an acyclic matching on `cells`
/// whose unmatched cells are exactly those flagged by `essential`.
pub fn audit_matching<C: Clone + Eq + Hash>(
    cells: &[C],
    boundary: impl Fn(&C) -> Vec<(C, i64)>,
    edges: &[(C, C)],
    essential: impl Fn(&C) -> bool,
) -> Result<AuditSummary, AuditFailure<C>> {
    let members: HashSet<&C> = cells.iter().collect();
    let mut used: HashSet<&C> = HashSet::new();
    for (upper, lower) in edges {
        for c in [upper, lower] {
            if !members.contains(c) {
                return Err(AuditFailure::ForeignCell(c.clone()));
            }
            if !used.insert(c) {
                return Err(AuditFailure::DoubleMatched(c.clone()));
            }
        }
        let coefficient: i64 = boundary(upper).into_iter().filter(|(f, _)| f == lower).map(|(_, v)| v).sum();
        if coefficient == 0 {
            return Err(AuditFailure::NotAFace { upper: upper.clone(), lower: lower.clone() });
        }
        if coefficient.abs() != 1 {
            return Err(AuditFailure::IrregularFace { upper: upper.clone(), lower: lower.clone(), coefficient });
        }
    }
    let mut n_essential = 0;
    for c in cells {
        match (essential(c), used.contains(c)) {
            (true, true) => return Err(AuditFailure::EssentialMatched(c.clone())),
            (false, false) => return Err(AuditFailure::Unmatched(c.clone())),
            (true, false) => n_essential += 1,
            (false, true) => {}
        }
    }
    if let Some(cycle) = find_cycle(cells, &boundary, edges) {
        return Err(AuditFailure::Cycle(cycle));
    }
    Ok(AuditSummary { cells: cells.len(), edges: edges.len(), essential: n_essential })
}

/// An explicit finite complex with a matching, addressed by cell index.
#[derive(Clone, Debug, Default)]
pub struct CellGraph {
    names: Vec<String>,
    dims: Vec<usize>,
    boundary: Vec<Vec<(usize, i64)>>,
    matching: Vec<(usize, usize)>,
}

impl CellGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a cell whose faces (already added) carry the given coefficients.
    pub fn add_cell(&mut self, name: impl Into<String>, dim: usize, boundary: Vec<(usize, i64)>) -> usize {
        self.names.push(name.into());
        self.dims.push(dim);
        self.boundary.push(boundary);
        self.names.len() - 1
    }

    pub fn add_match(&mut self, upper: usize, lower: usize) {
        self.matching.push((upper, lower));
    }

    pub fn name(&self, c: usize) -> &str {
        &self.names[c]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn essential_cells(&self) -> Vec<usize> {
        let used: HashSet<usize> = self.matching.iter().flat_map(|&(u, l)| [u, l]).collect();
        (0..self.len()).filter(|c| !used.contains(c)).collect()
    }

    fn all_cells(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    pub fn audit(&self) -> Result<AuditSummary, AuditFailure<usize>> {
        let essential: HashSet<usize> = self.essential_cells().into_iter().collect();
        audit_matching(&self.all_cells(), |&c| self.boundary[c].clone(), &self.matching, |c| essential.contains(c))
    }
}

/// True iff the matching of `graph` leaves its modified Hasse diagram acyclic.
pub fn check_acyclic(graph: &CellGraph) -> bool {
    find_cycle(&graph.all_cells(), |&c| graph.boundary[c].clone(), &graph.matching).is_none()
}

impl MorseSource for CellGraph {
    type Cell = usize;

    fn dim(&self, c: &usize) -> usize {
        self.dims[*c]
    }

    fn boundary(&self, c: &usize) -> Vec<(usize, i64)> {
        self.boundary[*c].clone()
    }

    fn pairing(&self, c: &usize) -> Result<Pairing<usize>, MorseError> {
        for &(u, l) in &self.matching {
            if u == *c {
                return Ok(Pairing::Upper(l));
            }
            if l == *c {
                return Ok(Pairing::Lower(u));
            }
        }
        Ok(Pairing::Essential)
    }
}

/// The bar complex with the combined matching `M1 u M2`.
pub struct BarMorse<'m, 'a> {
    monoid: &'m ArtinMonoid<'a>,
}

impl<'m, 'a> BarMorse<'m, 'a> {
    pub fn new(monoid: &'m ArtinMonoid<'a>) -> Self {
        BarMorse { monoid }
    }
}

impl MorseSource for BarMorse<'_, '_> {
    type Cell = BarCell;

    fn dim(&self, c: &BarCell) -> usize {
        c.dim()
    }

    fn boundary(&self, c: &BarCell) -> Vec<(BarCell, i64)> {
        bar::faces(self.monoid, c).into_iter().map(|(s, f)| (f, s)).collect()
    }

    fn pairing(&self, c: &BarCell) -> Result<Pairing<BarCell>, MorseError> {
        Ok(match matching::partner(self.monoid, c)? {
            Partner::Essential => Pairing::Essential,
            Partner::Upper(edge) => Pairing::Upper(edge.lower),
            Partner::Lower(edge) => Pairing::Lower(edge.upper),
        })
    }
}

/// The collapsed complex `Y`: one cell `e_T` per finite-type `T`.
#[derive(Clone, Debug)]
pub struct YComplex {
    /// `sets[k]` lists the `T` with `|T| = k`, in basis order.
    pub sets: Vec<Vec<GenSet>>,
    /// The essential bar cell representing each `e_T`, parallel to `sets`.
    pub cells: Vec<Vec<BarCell>>,
    pub complex: IntChainComplex,
}

impl YComplex {
    /// Number of cells per dimension.
    pub fn census(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }

    /// Coefficient of `e_lower` in the boundary of `e_upper`.
    pub fn coefficient(&self, upper: GenSet, lower: GenSet) -> i64 {
        let k = upper.len();
        if k == 0 || lower.len() + 1 != k {
            return 0;
        }
        let col = self.sets[k].iter().position(|&t| t == upper);
        let row = self.sets[k - 1].iter().position(|&t| t == lower);
        match (row, col, self.complex.boundary(k)) {
            (Some(r), Some(c), Some(d)) => d.get(r, c),
            _ => 0,
        }
    }
}

/// Builds `Y` for the monoid's Coxeter system.
pub fn y_complex(monoid: &ArtinMonoid) -> Result<YComplex, MorseError> {
    let sf = monoid.system().sf_enumerate();
    let mut by_cell: BTreeMap<BarCell, GenSet> = BTreeMap::new();
    for &t in &sf {
        by_cell.insert(matching::essential_cell(monoid, t)?, t);
    }
    let essential: Vec<BarCell> = by_cell.keys().cloned().collect();
    let src = BarMorse::new(monoid);
    let mc = morse_boundary(&src, &essential)?;
    let sets = mc.cells.iter().map(|layer| layer.iter().map(|c| by_cell[c]).collect()).collect();
    Ok(YComplex { sets, cells: mc.cells, complex: mc.complex })
}

/// `max l(Delta_T)` over `S^f`: every essential cell lies in the bar
/// subcomplex of cells of at most this length, and since matched pairs share
/// their length that subcomplex has the homology of `Y`.
pub fn max_essential_length(monoid: &ArtinMonoid) -> Result<usize, MorseError> {
    let mut best = 0;
    for t in monoid.system().sf_enumerate() {
        best = best.max(monoid.delta(t).map_err(MatchingError::from)?.length());
    }
    Ok(best)
}

/// A letter `e_{s}^{+-1}` of a boundary word.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: Gen,
    pub inverse: bool,
}

impl Letter {
    fn inv(self) -> Letter {
        Letter { gen: self.gen, inverse: !self.inverse }
    }
}

/// Free reduction followed by cyclic reduction.
fn cyclically_reduce(word: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    let mut start = 0;
    let mut end = out.len();
    while end - start >= 2 && out[start] == out[end - 1].inv() {
        start += 1;
        end -= 1;
    }
    out[start..end].to_vec()
}

fn invert(word: &[Letter]) -> Vec<Letter> {
    word.iter().rev().map(|l| l.inv()).collect()
}

/// Equality of closed curves up to starting point and orientation.
pub fn same_cyclic_word(a: &[Letter], b: &[Letter]) -> bool {
    let a = cyclically_reduce(a);
    let b = cyclically_reduce(b);
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let rotations_match = |x: &[Letter], y: &[Letter]| (0..x.len()).any(|r| (0..x.len()).all(|i| x[(i + r) % x.len()] == y[i]));
    rotations_match(&a, &b) || rotations_match(&invert(&a), &b)
}

/// `<e_s e_t>^m <e_s^-1 e_t^-1>^m` for even `m`,
/// `<e_s e_t>^m <e_t^-1 e_s^-1>^m` for odd `m`.
pub fn expected_boundary_word(s: Gen, t: Gen, m: u32) -> Vec<Letter> {
    let alt = |a: Letter, b: Letter| -> Vec<Letter> { (0..m).map(|i| if i % 2 == 0 { a } else { b }).collect() };
    let pos = |g| Letter { gen: g, inverse: false };
    let neg = |g| Letter { gen: g, inverse: true };
    let mut w = alt(pos(s), pos(t));
    if m.is_multiple_of(2) {
        w.extend(alt(neg(s), neg(t)));
    } else {
        w.extend(alt(neg(t), neg(s)));
    }
    w
}

/// The attaching word of `e_{s,t}` in `Y`, obtained by following the
/// collapse on 1-cells: the loop `[x][y][xy]^-1` of a 2-cell `[x|y]`, where
/// each non-essential 1-cell `[z]` is matched with some `[b|c]`, `z = bc`,
/// and is therefore replaced by the path `[b][c]`.
pub fn boundary_word_2cell(monoid: &ArtinMonoid, s: Gen, t: Gen) -> Result<Vec<Letter>, MorseError> {
    let sys = monoid.system();
    if sys.m(s, t) == Order::Infinite {
        return Err(MorseError::InfiniteM(sys.name(s).into(), sys.name(t).into()));
    }
    let cell = matching::essential_cell(monoid, GenSet::singleton(s).with(t))?;
    let [x, y] = cell.factors() else { unreachable!("e_{{s,t}} is a 2-cell") };
    let mut memo: HashMap<BarCell, Vec<Letter>> = HashMap::new();
    let mut word = expand_edge(monoid, &BarCell::new(vec![x.clone()]), &mut memo)?;
    word.extend(expand_edge(monoid, &BarCell::new(vec![y.clone()]), &mut memo)?);
    word.extend(invert(&expand_edge(monoid, &BarCell::new(vec![monoid.mul(x, y)]), &mut memo)?));
    Ok(cyclically_reduce(&word))
}

fn expand_edge(
    monoid: &ArtinMonoid,
    edge: &BarCell,
    memo: &mut HashMap<BarCell, Vec<Letter>>,
) -> Result<Vec<Letter>, MorseError> {
    if let Some(hit) = memo.get(edge) {
        return Ok(hit.clone());
    }
    let word = match matching::partner(monoid, edge)? {
        Partner::Essential => {
            let [z] = edge.factors() else { unreachable!("1-cell") };
            vec![Letter { gen: z.word()[0], inverse: false }]
        }
        Partner::Lower(m) => {
            // d[b|c] = [c] - [bc] + [b], so [bc] = [b][c] after collapsing.
            let [b, c] = m.upper.factors() else { unreachable!("2-cell partner") };
            let mut w = expand_edge(monoid, &BarCell::new(vec![b.clone()]), memo)?;
            w.extend(expand_edge(monoid, &BarCell::new(vec![c.clone()]), memo)?);
            w
        }
        Partner::Upper(_) => return Err(MorseError::NotEssential(edge.display(monoid))),
    };
    memo.insert(edge.clone(), word.clone());
    Ok(word)
}
