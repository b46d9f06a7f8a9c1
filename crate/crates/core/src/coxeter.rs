//! Coxeter systems: matrix validation, the word problem in `W`, lengths,
//! finite-type recognition and minimal coset representatives.
//!
//! Elements of `W` are represented by their ShortLex-least reduced word,
//! where the letter order is the generator order of the system. The same
//! order is the total order on `S` used by the second Morse matching.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

/// Index of a generator inside its [`CoxeterSystem`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen(pub u8);

impl Gen {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A word over the generators, read left to right.
pub type Word = Vec<Gen>;

/// A subset of the generators, stored as a bitmask (at most 64 generators).
#[derive(Copy, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenSet(pub u64);

impl GenSet {
    pub const EMPTY: GenSet = GenSet(0);

    pub fn singleton(g: Gen) -> Self {
        GenSet(1 << g.0)
    }

    pub fn full(rank: usize) -> Self {
        if rank >= 64 {
            GenSet(u64::MAX)
        } else {
            GenSet((1u64 << rank) - 1)
        }
    }

    pub fn contains(self, g: Gen) -> bool {
        self.0 & (1 << g.0) != 0
    }

    pub fn with(self, g: Gen) -> Self {
        GenSet(self.0 | (1 << g.0))
    }

    pub fn without(self, g: Gen) -> Self {
        GenSet(self.0 & !(1 << g.0))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: GenSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: GenSet) -> Self {
        GenSet(self.0 | other.0)
    }

    pub fn intersection(self, other: GenSet) -> Self {
        GenSet(self.0 & other.0)
    }

    pub fn difference(self, other: GenSet) -> Self {
        GenSet(self.0 & !other.0)
    }

    /// Largest generator in the set with respect to the generator order.
    pub fn max(self) -> Option<Gen> {
        if self.0 == 0 {
            None
        } else {
            Some(Gen(63 - self.0.leading_zeros() as u8))
        }
    }

    pub fn min(self) -> Option<Gen> {
        if self.0 == 0 {
            None
        } else {
            Some(Gen(self.0.trailing_zeros() as u8))
        }
    }

    /// Members in ascending generator order.
    pub fn iter(self) -> impl Iterator<Item = Gen> {
        (0..64u8).filter(move |i| self.0 & (1 << i) != 0).map(Gen)
    }

    /// All subsets of `self`, in increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = GenSet> {
        let mask = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask { None } else { Some((cur.wrapping_sub(mask)) & mask) };
            Some(GenSet(cur))
        })
    }
}

impl FromIterator<Gen> for GenSet {
    fn from_iter<I: IntoIterator<Item = Gen>>(iter: I) -> Self {
        iter.into_iter().fold(GenSet::EMPTY, GenSet::with)
    }
}

impl fmt::Debug for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|g| g.0)).finish()
    }
}

/// An entry `m(s, t)` of a Coxeter matrix.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(m) => Some(m),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(m) => write!(f, "{m}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("Coxeter matrix is not symmetric at ({0}, {1})")]
    AsymmetricMatrix(String, String),
    #[error("diagonal entry for {0} must be 1")]
    BadDiagonal(String),
    #[error("invalid entry m({s}, {t}) = {value}; off-diagonal entries must be >= 2 or inf")]
    BadEntry { s: String, t: String, value: i64 },
    #[error("duplicate generator {0}")]
    DuplicateGenerator(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("the parabolic subgroup on {0} is infinite")]
    InfiniteType(String),
    #[error("matrix shape does not match the {0} generators")]
    MatrixShape(usize),
    #[error("at most 64 generators are supported, got {0}")]
    TooManyGenerators(usize),
}

/// Irreducible finite Coxeter types.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum FiniteType {
    A(usize),
    B(usize),
    D(usize),
    E(usize),
    F4,
    H(usize),
    /// Dihedral type for `m >= 5`.
    I2(u32),
}

impl FiniteType {
    /// Order of the corresponding Coxeter group.
    pub fn group_order(self) -> u128 {
        fn fact(n: usize) -> u128 {
            (1..=n as u128).product()
        }
        match self {
            FiniteType::A(n) => fact(n + 1),
            FiniteType::B(n) => (1u128 << n) * fact(n),
            FiniteType::D(n) => (1u128 << (n - 1)) * fact(n),
            FiniteType::E(6) => 51_840,
            FiniteType::E(7) => 2_903_040,
            FiniteType::E(_) => 696_729_600,
            FiniteType::F4 => 1152,
            FiniteType::H(3) => 120,
            FiniteType::H(_) => 14_400,
            FiniteType::I2(m) => 2 * m as u128,
        }
    }
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteType::A(n) => write!(f, "A{n}"),
            FiniteType::B(n) => write!(f, "B{n}"),
            FiniteType::D(n) => write!(f, "D{n}"),
            FiniteType::E(n) => write!(f, "E{n}"),
            FiniteType::F4 => f.write_str("F4"),
            FiniteType::H(n) => write!(f, "H{n}"),
            FiniteType::I2(m) => write!(f, "I2({m})"),
        }
    }
}

/// An element of the Coxeter group, held as its canonical reduced word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoxElem {
    word: Word,
}

impl CoxElem {
    pub fn identity() -> Self {
        CoxElem { word: Vec::new() }
    }

    pub fn word(&self) -> &[Gen] {
        &self.word
    }

    /// The Coxeter length, i.e. the length of the reduced word.
    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }
}

/// Default number of words kept in the braid-class cache before it is reset.
pub const DEFAULT_CACHE_CAPACITY: usize = 1 << 20;

type ClassCache = HashMap<Word, Arc<Vec<Word>>>;

/// Generators with their total order together with a Coxeter matrix.
///
/// Also owns the memo table for braid-move closures, which is shared by the
/// Coxeter group (closures of reduced words) and the Artin monoid (closures
/// of arbitrary positive words): the relations are the same in both cases.
pub struct CoxeterSystem {
    names: Vec<String>,
    m: Vec<Order>,
    classes: Mutex<ClassCache>,
    cache_capacity: usize,
}

impl Clone for CoxeterSystem {
    fn clone(&self) -> Self {
        CoxeterSystem {
            names: self.names.clone(),
            m: self.m.clone(),
            classes: Mutex::new(HashMap::new()),
            cache_capacity: self.cache_capacity,
        }
    }
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("CoxeterSystem");
        d.field("gens", &self.names);
        let pairs: Vec<String> = self
            .pairs()
            .map(|(s, t)| format!("m({},{})={}", self.name(s), self.name(t), self.m(s, t)))
            .collect();
        d.field("m", &pairs).finish()
    }
}

impl PartialEq for CoxeterSystem {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.m == other.m
    }
}

impl Eq for CoxeterSystem {}

/// Checks the Coxeter-matrix axioms on raw data. `None` stands for infinity.
pub fn validate(names: &[String], matrix: &[Vec<Option<i64>>]) -> Result<(), CoxeterError> {
    let n = names.len();
    if n > 64 {
        return Err(CoxeterError::TooManyGenerators(n));
    }
    let mut seen = HashSet::new();
    for name in names {
        if !seen.insert(name.as_str()) {
            return Err(CoxeterError::DuplicateGenerator(name.clone()));
        }
    }
    if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
        return Err(CoxeterError::MatrixShape(n));
    }
    for i in 0..n {
        if matrix[i][i] != Some(1) {
            return Err(CoxeterError::BadDiagonal(names[i].clone()));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            if matrix[i][j] != matrix[j][i] {
                return Err(CoxeterError::AsymmetricMatrix(names[i].clone(), names[j].clone()));
            }
            if let Some(v) = matrix[i][j] {
                if v < 2 || v > u32::MAX as i64 {
                    return Err(CoxeterError::BadEntry {
                        s: names[i].clone(),
                        t: names[j].clone(),
                        value: v,
                    });
                }
            }
        }
    }
    Ok(())
}

impl CoxeterSystem {
    /// Builds a system from a full matrix after validating it.
    pub fn from_matrix(names: Vec<String>, matrix: Vec<Vec<Option<i64>>>) -> Result<Self, CoxeterError> {
        validate(&names, &matrix)?;
        let n = names.len();
        let mut m = vec![Order::Finite(1); n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = match matrix[i][j] {
                    Some(v) => Order::Finite(v as u32),
                    None => Order::Infinite,
                };
            }
        }
        Ok(CoxeterSystem {
            names,
            m,
            classes: Mutex::new(HashMap::new()),
            cache_capacity: DEFAULT_CACHE_CAPACITY,
        })
    }

    /// Builds a system where unlisted off-diagonal pairs commute (`m = 2`).
    pub fn with_entries<S: AsRef<str>>(names: &[S], entries: &[(&str, &str, Order)]) -> Result<Self, CoxeterError> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let n = names.len();
        let mut matrix = vec![vec![Some(2i64); n]; n];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = Some(1);
        }
        let index = |s: &str| {
            names
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| CoxeterError::UnknownGenerator(s.to_string()))
        };
        for &(s, t, v) in entries {
            let (i, j) = (index(s)?, index(t)?);
            let v = match v {
                Order::Finite(v) => Some(v as i64),
                Order::Infinite => None,
            };
            matrix[i][j] = v;
            matrix[j][i] = v;
        }
        Self::from_matrix(names, matrix)
    }

    /// Dihedral system on generators `a < b` with the given `m(a, b)`.
    pub fn dihedral(m: Order) -> Self {
        Self::with_entries(&["a", "b"], &[("a", "b", m)]).expect("valid dihedral matrix")
    }

    /// Type `A_n` on generators `a, b, c, ...` in path order.
    pub fn type_a(n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        let pairs: Vec<(String, String)> = (1..n).map(|i| (names[i - 1].clone(), names[i].clone())).collect();
        let entries: Vec<(&str, &str, Order)> =
            pairs.iter().map(|(s, t)| (s.as_str(), t.as_str(), Order::Finite(3))).collect();
        Self::with_entries(&names, &entries).expect("valid type A matrix")
    }

    /// Caps the number of cached braid-class entries.
    pub fn set_cache_capacity(&mut self, capacity: usize) {
        self.cache_capacity = capacity.max(1);
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: Gen) -> &str {
        &self.names[g.index()]
    }

    pub fn gens(&self) -> impl Iterator<Item = Gen> {
        (0..self.rank() as u8).map(Gen)
    }

    pub fn all_gens(&self) -> GenSet {
        GenSet::full(self.rank())
    }

    pub fn m(&self, s: Gen, t: Gen) -> Order {
        self.m[s.index() * self.rank() + t.index()]
    }

    /// Unordered pairs `s < t`.
    pub fn pairs(&self) -> impl Iterator<Item = (Gen, Gen)> + '_ {
        self.gens().flat_map(move |s| self.gens().filter(move |t| s < *t).map(move |t| (s, t)))
    }

    pub fn gen_by_name(&self, name: &str) -> Result<Gen, CoxeterError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| Gen(i as u8))
            .ok_or_else(|| CoxeterError::UnknownGenerator(name.to_string()))
    }

    fn single_char_names(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Parses a word. Whitespace- or dot-separated tokens are generator names;
    /// a token with no separators is split into characters when every
    /// generator name is a single character.
    pub fn parse_word(&self, text: &str) -> Result<Word, CoxeterError> {
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(Vec::new());
        }
        let tokens: Vec<&str> = text.split(|c: char| c.is_whitespace() || c == '.').filter(|t| !t.is_empty()).collect();
        if tokens.len() == 1 && self.gen_by_name(tokens[0]).is_err() && self.single_char_names() {
            return tokens[0].chars().map(|c| self.gen_by_name(&c.to_string())).collect();
        }
        tokens.into_iter().map(|t| self.gen_by_name(t)).collect()
    }

    /// Parses a set of generator names separated by whitespace or commas.
    pub fn parse_set(&self, text: &str) -> Result<GenSet, CoxeterError> {
        let mut set = GenSet::EMPTY;
        for token in text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            if token == "{}" {
                continue;
            }
            set = set.with(self.gen_by_name(token.trim_matches(|c| c == '{' || c == '}'))?);
        }
        Ok(set)
    }

    pub fn format_word(&self, word: &[Gen]) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        let sep = if self.single_char_names() { "" } else { " " };
        word.iter().map(|g| self.name(*g)).collect::<Vec<_>>().join(sep)
    }

    pub fn format_set(&self, set: GenSet) -> String {
        let items: Vec<&str> = set.iter().map(|g| self.name(g)).collect();
        format!("{{{}}}", items.join(","))
    }

    fn check_word(&self, word: &[Gen]) -> Result<(), CoxeterError> {
        match word.iter().find(|g| g.index() >= self.rank()) {
            Some(g) => Err(CoxeterError::UnknownGenerator(format!("#{}", g.0))),
            None => Ok(()),
        }
    }

    fn check_set(&self, set: GenSet) -> Result<(), CoxeterError> {
        if set.is_subset(self.all_gens()) {
            Ok(())
        } else {
            Err(CoxeterError::UnknownGenerator(format!("{:?}", set.difference(self.all_gens()))))
        }
    }

    /// Words reachable from `word` by braid moves `<st>^m <-> <ts>^m`, sorted
    /// ShortLex (all members have the same length). Memoized.
    pub fn braid_class(&self, word: &[Gen]) -> Arc<Vec<Word>> {
        if let Some(hit) = self.classes.lock().expect("cache poisoned").get(word) {
            return Arc::clone(hit);
        }
        let class = Arc::new(self.braid_closure(word));
        let mut cache = self.classes.lock().expect("cache poisoned");
        if cache.len() + class.len() > self.cache_capacity {
            cache.clear();
        }
        for w in class.iter() {
            cache.entry(w.clone()).or_insert_with(|| Arc::clone(&class));
        }
        Arc::clone(cache.get(word).unwrap_or(&class))
    }

    fn braid_closure(&self, word: &[Gen]) -> Vec<Word> {
        let mut seen: HashSet<Word> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(word.to_vec());
        queue.push_back(word.to_vec());
        while let Some(w) = queue.pop_front() {
            for i in 0..w.len().saturating_sub(1) {
                let (s, t) = (w[i], w[i + 1]);
                if s == t {
                    continue;
                }
                let Order::Finite(m) = self.m(s, t) else { continue };
                let m = m as usize;
                if i + m > w.len() {
                    continue;
                }
                let alternates = (0..m).all(|k| w[i + k] == if k % 2 == 0 { s } else { t });
                if !alternates {
                    continue;
                }
                let mut next = w.clone();
                for k in 0..m {
                    next[i + k] = if k % 2 == 0 { t } else { s };
                }
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        let mut out: Vec<Word> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// Canonical reduced word of the element of `W` represented by `word`.
    pub fn cox_canonical(&self, word: &[Gen]) -> Result<CoxElem, CoxeterError> {
        self.check_word(word)?;
        let mut reduced: Word = Vec::new();
        for &g in word {
            reduced = self.append_reduced(&reduced, g);
        }
        Ok(CoxElem { word: reduced })
    }

    /// Given a canonical reduced word `w`, returns the canonical word of `w s`.
    /// By the exchange condition `l(ws) < l(w)` exactly when some reduced
    /// word of `w` ends in `s`.
    fn append_reduced(&self, reduced: &[Gen], s: Gen) -> Word {
        let class = self.braid_class(reduced);
        if let Some(w) = class.iter().find(|w| w.last() == Some(&s)) {
            let shorter = &w[..w.len() - 1];
            return self.braid_class(shorter)[0].clone();
        }
        let mut longer = reduced.to_vec();
        longer.push(s);
        self.braid_class(&longer)[0].clone()
    }

    pub fn cox_mul(&self, a: &CoxElem, b: &CoxElem) -> CoxElem {
        let mut word = a.word.clone();
        for &g in &b.word {
            word = self.append_reduced(&word, g);
        }
        CoxElem { word }
    }

    pub fn cox_mul_gen(&self, a: &CoxElem, s: Gen) -> CoxElem {
        CoxElem { word: self.append_reduced(&a.word, s) }
    }

    pub fn cox_inverse(&self, a: &CoxElem) -> CoxElem {
        let rev: Word = a.word.iter().rev().copied().collect();
        CoxElem { word: self.braid_class(&rev)[0].clone() }
    }

    pub fn cox_length(&self, a: &CoxElem) -> usize {
        a.length()
    }

    /// Whether `w` lies in the parabolic subgroup `W_T`. Every reduced word
    /// of an element of `W_T` uses only letters from `T`.
    pub fn in_parabolic(&self, w: &CoxElem, t: GenSet) -> bool {
        w.word.iter().all(|g| t.contains(*g))
    }

    /// Irreducible components of `W_T` if it is finite, `None` otherwise.
    pub fn classify(&self, t: GenSet) -> Result<Option<Vec<FiniteType>>, CoxeterError> {
        self.check_set(t)?;
        let mut remaining = t;
        let mut types = Vec::new();
        while let Some(start) = remaining.min() {
            let mut comp = GenSet::singleton(start);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for u in remaining.iter() {
                    if !comp.contains(u) && self.m(u, v) != Order::Finite(2) && u != v {
                        comp = comp.with(u);
                        stack.push(u);
                    }
                }
            }
            remaining = remaining.difference(comp);
            match self.classify_component(comp) {
                Some(ty) => types.push(ty),
                None => return Ok(None),
            }
        }
        Ok(Some(types))
    }

    fn classify_component(&self, comp: GenSet) -> Option<FiniteType> {
        let verts: Vec<Gen> = comp.iter().collect();
        let n = verts.len();
        if n == 1 {
            return Some(FiniteType::A(1));
        }
        let mut edges = Vec::new();
        for (i, &u) in verts.iter().enumerate() {
            for &v in &verts[i + 1..] {
                match self.m(u, v) {
                    Order::Finite(2) => {}
                    Order::Infinite => return None,
                    Order::Finite(m) => edges.push((u, v, m)),
                }
            }
        }
        if edges.len() != n - 1 {
            return None;
        }
        if n == 2 {
            return Some(match edges[0].2 {
                3 => FiniteType::A(2),
                4 => FiniteType::B(2),
                m => FiniteType::I2(m),
            });
        }
        if edges.iter().any(|e| e.2 > 5) {
            return None;
        }
        let neighbours = |v: Gen| -> Vec<Gen> {
            edges
                .iter()
                .filter_map(|&(a, b, _)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
                .collect()
        };
        let degree = |v: Gen| neighbours(v).len();
        let branches: Vec<Gen> = verts.iter().copied().filter(|&v| degree(v) >= 3).collect();
        if branches.iter().any(|&v| degree(v) > 3) || branches.len() > 1 {
            return None;
        }
        if let Some(&centre) = branches.first() {
            if edges.iter().any(|e| e.2 != 3) {
                return None;
            }
            let mut arms: Vec<usize> = neighbours(centre)
                .into_iter()
                .map(|first| {
                    let (mut prev, mut cur, mut len) = (centre, first, 1);
                    loop {
                        let next: Vec<Gen> = neighbours(cur).into_iter().filter(|&x| x != prev).collect();
                        match next.as_slice() {
                            [] => break len,
                            [x] => {
                                prev = cur;
                                cur = *x;
                                len += 1;
                            }
                            _ => unreachable!("single branch vertex"),
                        }
                    }
                })
                .collect();
            arms.sort_unstable();
            return match arms.as_slice() {
                [1, 1, _] => Some(FiniteType::D(n)),
                [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => Some(FiniteType::E(n)),
                _ => None,
            };
        }
        // A path: walk it from one end.
        let end = verts.iter().copied().find(|&v| degree(v) == 1)?;
        let mut labels = Vec::with_capacity(n - 1);
        let (mut prev, mut cur) = (None, end);
        while let Some(next) = neighbours(cur).into_iter().find(|&x| Some(x) != prev) {
            labels.push(self.m(cur, next).finite().unwrap_or(0));
            prev = Some(cur);
            cur = next;
        }
        let special: Vec<(usize, u32)> = labels.iter().copied().enumerate().filter(|&(_, m)| m != 3).collect();
        let at_end = |i: usize| i == 0 || i == labels.len() - 1;
        match special.as_slice() {
            [] => Some(FiniteType::A(n)),
            [(i, 4)] if at_end(*i) => Some(FiniteType::B(n)),
            [(1, 4)] if n == 4 => Some(FiniteType::F4),
            [(i, 5)] if at_end(*i) && n <= 4 => Some(FiniteType::H(n)),
            _ => None,
        }
    }

    pub fn is_finite_type(&self, t: GenSet) -> Result<bool, CoxeterError> {
        Ok(self.classify(t)?.is_some())
    }

    /// All `T` with `W_T` finite, ordered by size and then bitmask.
    pub fn sf_enumerate(&self) -> Vec<GenSet> {
        let mut out: Vec<GenSet> = self
            .all_gens()
            .subsets()
            .filter(|&t| self.is_finite_type(t).unwrap_or(false))
            .collect();
        out.sort_by_key(|t| (t.len(), t.0));
        out
    }

    fn require_finite(&self, t: GenSet) -> Result<(), CoxeterError> {
        if self.is_finite_type(t)? {
            Ok(())
        } else {
            Err(CoxeterError::InfiniteType(self.format_set(t)))
        }
    }

    /// All elements of `W_T` by breadth-first search, in BFS order.
    pub fn enumerate_group(&self, t: GenSet) -> Result<Vec<CoxElem>, CoxeterError> {
        self.require_finite(t)?;
        let mut seen = HashSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(CoxElem::identity());
        queue.push_back(CoxElem::identity());
        while let Some(w) = queue.pop_front() {
            for s in t.iter() {
                let next = self.cox_mul_gen(&w, s);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
            order.push(w);
        }
        Ok(order)
    }

    /// The longest element of `W_T`, found by descending: multiply by any
    /// generator of `T` that is not yet a right descent.
    pub fn longest_element(&self, t: GenSet) -> Result<CoxElem, CoxeterError> {
        self.require_finite(t)?;
        let mut w = CoxElem::identity();
        loop {
            let ascent = t.iter().find(|&s| self.cox_mul_gen(&w, s).length() > w.length());
            match ascent {
                Some(s) => w = self.cox_mul_gen(&w, s),
                None => return Ok(w),
            }
        }
    }

    /// `w` is `T`-minimal iff `l(ws) > l(w)` for every `s` in `T`.
    pub fn is_t_minimal(&self, w: &CoxElem, t: GenSet) -> bool {
        t.iter().all(|s| self.cox_mul_gen(w, s).length() > w.length())
    }
}
