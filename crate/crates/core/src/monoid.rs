//! Exact arithmetic in the Artin monoid `A+`.
//!
//! Every relation `<st>^m = <ts>^m` preserves length, so each element has a
//! finite set of representing words: its braid class. All operations here
//! work directly on braid classes (prefix and suffix search) and do not rely
//! on Garside-theoretic shortcuts, which lets divisibility serve as an
//! independent check on the normal form.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::coxeter::{CoxElem, CoxeterError, CoxeterSystem, Gen, GenSet, Word};

/// An element of `A+`, stored as the ShortLex-least word of its braid class.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonElem {
    word: Word,
}

impl MonElem {
    pub fn identity() -> Self {
        MonElem { word: Vec::new() }
    }

    /// Canonical word.
    pub fn word(&self) -> &[Gen] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }
}

impl Ord for MonElem {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.word.len(), &self.word).cmp(&(other.word.len(), &other.word))
    }
}

impl PartialOrd for MonElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MonElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<u8> = self.word.iter().map(|g| g.0).collect();
        write!(f, "MonElem{w:?}")
    }
}

/// Garside normal form `Delta_{T_k} ... Delta_{T_1}`; `parts[0]` is `T_1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalForm {
    pub parts: Vec<GenSet>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error("no common multiple found up to length {bound}")]
    Undecided { bound: usize },
    #[error("common divisors do not have a unique maximum")]
    NotAChain,
    #[error("operation needs a non-empty set of elements")]
    EmptySet,
    #[error("internal error: {0}")]
    Internal(String),
}

/// Result of a common-multiple search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lcm {
    Found(MonElem),
    /// Proven not to exist.
    None,
}

impl Lcm {
    pub fn found(self) -> Option<MonElem> {
        match self {
            Lcm::Found(x) => Some(x),
            Lcm::None => None,
        }
    }
}

/// Default length bound for common-multiple searches on general sets.
pub const DEFAULT_LCM_BOUND: usize = 16;

/// The Artin monoid of a Coxeter system.
pub struct ArtinMonoid<'a> {
    sys: &'a CoxeterSystem,
    deltas: Mutex<HashMap<GenSet, Option<MonElem>>>,
    by_length: Mutex<Vec<Arc<Vec<MonElem>>>>,
}

impl<'a> ArtinMonoid<'a> {
    pub fn new(sys: &'a CoxeterSystem) -> Self {
        ArtinMonoid {
            sys,
            deltas: Mutex::new(HashMap::new()),
            by_length: Mutex::new(vec![Arc::new(vec![MonElem::identity()])]),
        }
    }

    pub fn system(&self) -> &'a CoxeterSystem {
        self.sys
    }

    pub fn elem(&self, word: &[Gen]) -> MonElem {
        MonElem { word: self.sys.braid_class(word)[0].clone() }
    }

    pub fn gen(&self, s: Gen) -> MonElem {
        MonElem { word: vec![s] }
    }

    /// Parses a word in the system's generator names.
    pub fn parse(&self, text: &str) -> Result<MonElem, MonoidError> {
        Ok(self.elem(&self.sys.parse_word(text)?))
    }

    pub fn format(&self, x: &MonElem) -> String {
        self.sys.format_word(&x.word)
    }

    /// All positive words equal to `x`, sorted.
    pub fn equiv_class(&self, x: &MonElem) -> Arc<Vec<Word>> {
        self.sys.braid_class(&x.word)
    }

    fn class_contains(&self, x: &MonElem, word: &[Gen]) -> bool {
        word.len() == x.length() && self.equiv_class(x).binary_search_by(|w| w.as_slice().cmp(word)).is_ok()
    }

    pub fn mul(&self, x: &MonElem, y: &MonElem) -> MonElem {
        let mut w = x.word.clone();
        w.extend_from_slice(&y.word);
        self.elem(&w)
    }

    pub fn product<'b>(&self, xs: impl IntoIterator<Item = &'b MonElem>) -> MonElem {
        let mut w = Vec::new();
        for x in xs {
            w.extend_from_slice(&x.word);
        }
        self.elem(&w)
    }

    /// Image in the Coxeter group.
    pub fn project(&self, x: &MonElem) -> CoxElem {
        self.sys.cox_canonical(&x.word).expect("monoid words use known generators")
    }

    pub fn rev(&self, x: &MonElem) -> MonElem {
        let w: Word = x.word.iter().rev().copied().collect();
        self.elem(&w)
    }

    /// `gamma` with `x gamma = y`, if `x` left divides `y`.
    pub fn left_quotient(&self, x: &MonElem, y: &MonElem) -> Option<MonElem> {
        let k = x.length();
        if k > y.length() {
            return None;
        }
        self.equiv_class(y)
            .iter()
            .find(|w| self.class_contains(x, &w[..k]))
            .map(|w| self.elem(&w[k..]))
    }

    /// `gamma` with `gamma x = y`, if `x` right divides `y`.
    pub fn right_quotient(&self, y: &MonElem, x: &MonElem) -> Option<MonElem> {
        let k = x.length();
        let n = y.length();
        if k > n {
            return None;
        }
        self.equiv_class(y)
            .iter()
            .find(|w| self.class_contains(x, &w[n - k..]))
            .map(|w| self.elem(&w[..n - k]))
    }

    pub fn left_divides(&self, x: &MonElem, y: &MonElem) -> bool {
        self.left_quotient(x, y).is_some()
    }

    pub fn right_divides(&self, x: &MonElem, y: &MonElem) -> bool {
        self.right_quotient(y, x).is_some()
    }

    /// All left divisors of `x` (prefixes of its class members).
    pub fn left_divisors(&self, x: &MonElem) -> BTreeSet<MonElem> {
        let mut out = BTreeSet::new();
        for w in self.equiv_class(x).iter() {
            for k in 0..=w.len() {
                out.insert(self.elem(&w[..k]));
            }
        }
        out
    }

    pub fn right_divisors(&self, x: &MonElem) -> BTreeSet<MonElem> {
        let mut out = BTreeSet::new();
        for w in self.equiv_class(x).iter() {
            for k in 0..=w.len() {
                out.insert(self.elem(&w[k..]));
            }
        }
        out
    }

    fn gcd_by(
        &self,
        elems: &[MonElem],
        divisors: impl Fn(&MonElem) -> BTreeSet<MonElem>,
        divides: impl Fn(&MonElem, &MonElem) -> bool,
    ) -> Result<MonElem, MonoidError> {
        let (first, rest) = elems.split_first().ok_or(MonoidError::EmptySet)?;
        let mut common = divisors(first);
        for x in rest {
            let d = divisors(x);
            common.retain(|c| d.contains(c));
        }
        let maxima: Vec<&MonElem> = common.iter().filter(|c| common.iter().all(|d| divides(d, c))).collect();
        match maxima.as_slice() {
            [g] => Ok((*g).clone()),
            _ => Err(MonoidError::NotAChain),
        }
    }

    /// Greatest common left divisor.
    pub fn left_gcd(&self, elems: &[MonElem]) -> Result<MonElem, MonoidError> {
        self.gcd_by(elems, |x| self.left_divisors(x), |a, b| self.left_divides(a, b))
    }

    /// Greatest common right divisor.
    pub fn right_gcd(&self, elems: &[MonElem]) -> Result<MonElem, MonoidError> {
        self.gcd_by(elems, |x| self.right_divisors(x), |a, b| self.right_divides(a, b))
    }

    /// Least common right multiple: the smallest `m` with `e <=_L m` for all
    /// `e` in `elems`.
    ///
    /// When every element is a generator, existence is decided by the
    /// finiteness of the parabolic subgroup and the search bound is the
    /// length of the fundamental element. Otherwise the search gives up with
    /// [`MonoidError::Undecided`] beyond `bound`.
    pub fn right_lcm(&self, elems: &[MonElem], bound: usize) -> Result<Lcm, MonoidError> {
        self.lcm_search(elems, bound, false)
    }

    /// Least common left multiple, computed through `rev`.
    pub fn left_lcm(&self, elems: &[MonElem], bound: usize) -> Result<Lcm, MonoidError> {
        self.lcm_search(elems, bound, true)
    }

    fn lcm_search(&self, elems: &[MonElem], bound: usize, left: bool) -> Result<Lcm, MonoidError> {
        if elems.is_empty() {
            return Err(MonoidError::EmptySet);
        }
        let mut bound = bound;
        let mut decided = false;
        if elems.iter().all(|x| x.length() == 1) {
            let t: GenSet = elems.iter().map(|x| x.word[0]).collect();
            if !self.sys.is_finite_type(t)? {
                return Ok(Lcm::None);
            }
            bound = self.sys.longest_element(t)?.length();
            decided = true;
        }
        let oriented: Vec<MonElem> = if left { elems.iter().map(|x| self.rev(x)).collect() } else { elems.to_vec() };
        let seed = oriented.iter().max().expect("non-empty").clone();
        let mut level: BTreeSet<MonElem> = BTreeSet::from([seed.clone()]);
        for _ in seed.length()..=bound {
            let hits: Vec<&MonElem> = level
                .iter()
                .filter(|cand| oriented.iter().all(|e| self.left_divides(e, cand)))
                .collect();
            match hits.as_slice() {
                [] => {}
                [m] => {
                    let m = (*m).clone();
                    return Ok(Lcm::Found(if left { self.rev(&m) } else { m }));
                }
                _ => return Err(MonoidError::Internal("several minimal common multiples".into())),
            }
            level = level
                .iter()
                .flat_map(|c| self.sys.gens().map(move |s| (c, s)))
                .map(|(c, s)| self.mul(c, &self.gen(s)))
                .collect();
        }
        if decided {
            Err(MonoidError::Internal("fundamental element not reached within its length".into()))
        } else {
            Err(MonoidError::Undecided { bound })
        }
    }

    /// Fundamental element `Delta_T`, the positive lift of the longest
    /// element of `W_T`. `Delta_{}` is the identity.
    pub fn delta(&self, t: GenSet) -> Result<MonElem, MonoidError> {
        if let Some(hit) = self.deltas.lock().expect("cache poisoned").get(&t) {
            return hit.clone().ok_or_else(|| CoxeterError::InfiniteType(self.sys.format_set(t)).into());
        }
        let computed = match self.sys.longest_element(t) {
            Ok(w0) => Some(self.elem(w0.word())),
            Err(CoxeterError::InfiniteType(_)) => None,
            Err(e) => return Err(e.into()),
        };
        self.deltas.lock().expect("cache poisoned").insert(t, computed.clone());
        computed.ok_or_else(|| CoxeterError::InfiniteType(self.sys.format_set(t)).into())
    }

    /// `I(x)`: generators whose letter right divides `x`.
    pub fn finishing_set(&self, x: &MonElem) -> GenSet {
        self.equiv_class(x).iter().filter_map(|w| w.last().copied()).collect()
    }

    /// Generators whose letter left divides `x`.
    pub fn starting_set(&self, x: &MonElem) -> GenSet {
        self.equiv_class(x).iter().filter_map(|w| w.first().copied()).collect()
    }

    /// `Some(T)` when `x = Delta_T` for a non-empty `T` in `S^f`.
    pub fn delta_set(&self, x: &MonElem) -> Option<GenSet> {
        if x.is_identity() {
            return None;
        }
        let t = self.finishing_set(x);
        match self.delta(t) {
            Ok(d) if d == *x => Some(t),
            _ => None,
        }
    }

    pub fn is_squarefree(&self, x: &MonElem) -> bool {
        !self.equiv_class(x).iter().any(|w| w.windows(2).any(|p| p[0] == p[1]))
    }

    /// Garside normal form, computed greedily from the right.
    pub fn normal_form(&self, x: &MonElem) -> Result<NormalForm, MonoidError> {
        let mut parts = Vec::new();
        let mut cur = x.clone();
        while !cur.is_identity() {
            let t = self.finishing_set(&cur);
            let d = self
                .delta(t)
                .map_err(|_| MonoidError::Internal(format!("I(x) = {} is not of finite type", self.sys.format_set(t))))?;
            cur = self
                .right_quotient(&cur, &d)
                .ok_or_else(|| MonoidError::Internal("Delta_I(x) does not right divide x".into()))?;
            parts.push(t);
        }
        Ok(NormalForm { parts })
    }

    /// `Delta_{T_k} ... Delta_{T_1}`.
    pub fn recompose(&self, nf: &NormalForm) -> Result<MonElem, MonoidError> {
        let deltas = nf.parts.iter().rev().map(|&t| self.delta(t)).collect::<Result<Vec<_>, _>>()?;
        Ok(self.product(deltas.iter()))
    }

    /// Checks `I(Delta_{T_k} ... Delta_{T_j}) = T_j` for every `j`.
    pub fn is_valid_normal_form(&self, nf: &NormalForm) -> bool {
        if nf.parts.iter().any(|t| t.is_empty()) {
            return false;
        }
        let mut acc = MonElem::identity();
        for &t in nf.parts.iter().rev() {
            let Ok(d) = self.delta(t) else { return false };
            acc = self.mul(&acc, &d);
            if self.finishing_set(&acc) != t {
                return false;
            }
        }
        true
    }

    /// All elements of length `n`, sorted.
    pub fn elements_of_length(&self, n: usize) -> Arc<Vec<MonElem>> {
        let mut levels = self.by_length.lock().expect("cache poisoned");
        while levels.len() <= n {
            let prev = Arc::clone(levels.last().expect("level 0 present"));
            let next: BTreeSet<MonElem> = prev
                .iter()
                .flat_map(|x| self.sys.gens().map(move |s| (x, s)))
                .map(|(x, s)| {
                    let mut w = x.word.clone();
                    w.push(s);
                    self.elem(&w)
                })
                .collect();
            levels.push(Arc::new(next.into_iter().collect()));
        }
        Arc::clone(&levels[n])
    }
}
