use std::collections::{BTreeSet, VecDeque};

use artin_morse::bar::{self, BarCell};
use artin_morse::coxeter::{CoxeterSystem, Gen, Order, Word};
use artin_morse::homology::{elementary_divisors, homology_groups, IntChainComplex, SparseMatrix};
use artin_morse::matching::{self, Partner};
use artin_morse::monoid::{ArtinMonoid, MonElem};
use artin_morse::morse;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn dihedral(m: u32) -> CoxeterSystem {
    CoxeterSystem::dihedral(Order::Finite(m))
}

fn word_strategy(rank: u8, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..rank).prop_map(Gen), 0..=max_len)
}

/// Positive words reachable by braid moves, by breadth-first rewriting.
fn braid_class_oracle(sys: &CoxeterSystem, word: &[Gen]) -> BTreeSet<Word> {
    let mut seen = BTreeSet::from([word.to_vec()]);
    let mut queue = VecDeque::from([word.to_vec()]);
    while let Some(w) = queue.pop_front() {
        for s in sys.gens() {
            for t in sys.gens().filter(|&t| t != s) {
                let Order::Finite(m) = sys.m(s, t) else { continue };
                let m = m as usize;
                let lhs: Word = (0..m).map(|i| if i % 2 == 0 { s } else { t }).collect();
                let rhs: Word = (0..m).map(|i| if i % 2 == 0 { t } else { s }).collect();
                for i in 0..w.len().saturating_sub(m - 1) {
                    if w[i..i + m] == lhs[..] {
                        let mut next = w.clone();
                        next[i..i + m].copy_from_slice(&rhs);
                        if seen.insert(next.clone()) {
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
    }
    seen
}

/// `S_{n+1}` acting on positions: `s_i` swaps `i` and `i + 1`.
fn permutation_of(n: usize, word: &[Gen]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..=n).collect();
    for g in word {
        p.swap(g.index(), g.index() + 1);
    }
    p
}

fn inversions(p: &[usize]) -> usize {
    (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count()
}

/// Dihedral group of order `2m`, elements `r^a s^e` stored as `(a, e)`.
/// Generators map to `s` and `t = s r`.
fn dihedral_of(m: i64, word: &[Gen]) -> (i64, bool) {
    let (mut rot, mut refl) = (0i64, false);
    for g in word {
        // r^a s^e * s r^k = r^(a + (-1)^(e+1) k) s^(e+1)
        let k = if g.0 == 0 { 0 } else { 1 };
        let sign = if refl { 1 } else { -1 };
        rot = (rot + sign * k).rem_euclid(m);
        refl = !refl;
    }
    (rot, refl)
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut total = BigInt::zero();
    for (c, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, v)| v.clone()).collect()).collect();
        let term = entry * det(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from gcds of k x k minors: `d_k = D_k / D_{k-1}`.
fn minors_oracle(m: &[Vec<i64>]) -> Vec<BigInt> {
    let (rows, cols) = (m.len(), m.first().map_or(0, Vec::len));
    let mut prev = BigInt::from(1);
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| BigInt::from(m[r][c])).collect()).collect();
                g = g.gcd(&det(&minor));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn product_divisors(mut ds: Vec<BigInt>) -> Vec<BigInt> {
    ds.iter_mut().for_each(|d| *d = d.abs());
    ds
}

/// Count of bar cells of length `n` in the free commutative monoid on two
/// letters: sum over `a^i b^j` of its ordered factorisations.
fn commutative_cells(n: usize) -> usize {
    // f(i, j) = number of ordered factorisations of a^i b^j into non-trivial parts.
    let mut f = vec![vec![0usize; n + 1]; n + 1];
    f[0][0] = 1;
    for total in 1..=n {
        for i in 0..=total {
            let j = total - i;
            let mut acc = 0;
            for (pi, row) in f.iter().enumerate().take(i + 1) {
                for (pj, &v) in row.iter().enumerate().take(j + 1) {
                    if (pi, pj) != (i, j) {
                        acc += v;
                    }
                }
            }
            f[i][j] = acc;
        }
    }
    (0..=n).map(|i| f[i][n - i]).sum()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn canonical_form_matches_permutations(a in word_strategy(3, 10), b in word_strategy(3, 10)) {
        let sys = CoxeterSystem::type_a(3);
        let (ca, cb) = (sys.cox_canonical(&a).unwrap(), sys.cox_canonical(&b).unwrap());
        let (pa, pb) = (permutation_of(3, &a), permutation_of(3, &b));
        prop_assert_eq!(ca == cb, pa == pb);
        prop_assert_eq!(ca.length(), inversions(&pa));
        prop_assert_eq!(permutation_of(3, ca.word()), pa);
    }

    #[test]
    fn canonical_form_matches_dihedral_model(m in 2u32..7, a in word_strategy(2, 12), b in word_strategy(2, 12)) {
        let sys = dihedral(m);
        let (ca, cb) = (sys.cox_canonical(&a).unwrap(), sys.cox_canonical(&b).unwrap());
        prop_assert_eq!(ca == cb, dihedral_of(m as i64, &a) == dihedral_of(m as i64, &b));
        prop_assert!(ca.length() <= m as usize);
    }

    #[test]
    fn monoid_equality_matches_rewriting(m in 2u32..6, a in word_strategy(2, 7)) {
        let sys = dihedral(m);
        let monoid = ArtinMonoid::new(&sys);
        let class = braid_class_oracle(&sys, &a);
        let lib: BTreeSet<Word> = monoid.equiv_class(&monoid.elem(&a)).iter().cloned().collect();
        prop_assert_eq!(&lib, &class);
        // Representative is the least word of the class.
        let rep = monoid.elem(&a);
        prop_assert_eq!(rep.word(), class.first().unwrap().as_slice());
    }

    #[test]
    fn monoid_is_cancellative(m in 2u32..6, x in word_strategy(2, 4), y in word_strategy(2, 4), z in word_strategy(2, 4)) {
        let sys = dihedral(m);
        let monoid = ArtinMonoid::new(&sys);
        let (x, y, z) = (monoid.elem(&x), monoid.elem(&y), monoid.elem(&z));
        prop_assert_eq!(monoid.mul(&x, &y) == monoid.mul(&x, &z), y == z);
        prop_assert_eq!(monoid.mul(&y, &x) == monoid.mul(&z, &x), y == z);
        let xy = monoid.mul(&x, &y);
        prop_assert_eq!(monoid.left_quotient(&x, &xy), Some(y.clone()));
        prop_assert_eq!(monoid.right_quotient(&xy, &y), Some(x.clone()));
    }

    #[test]
    fn normal_form_round_trip(m in 2u32..6, w in word_strategy(2, 8)) {
        let sys = dihedral(m);
        let monoid = ArtinMonoid::new(&sys);
        let x = monoid.elem(&w);
        let nf = monoid.normal_form(&x).unwrap();
        prop_assert!(monoid.is_valid_normal_form(&nf));
        prop_assert_eq!(monoid.recompose(&nf).unwrap(), x);
    }

    #[test]
    fn normal_form_is_multiplicative_in_delta(w in word_strategy(3, 6)) {
        // x * Delta has normal form (x's) followed by a Delta part on the right.
        let sys = CoxeterSystem::type_a(3);
        let monoid = ArtinMonoid::new(&sys);
        let x = monoid.elem(&w);
        let delta = monoid.delta(sys.all_gens()).unwrap();
        let nf = monoid.normal_form(&monoid.mul(&x, &delta)).unwrap();
        prop_assert_eq!(nf.parts[0], sys.all_gens());
    }

    #[test]
    fn snf_matches_minors(rows in 1usize..4, cols in 1usize..4, seed in prop::collection::vec(-6i64..7, 9)) {
        let dense: Vec<Vec<i64>> = (0..rows).map(|r| (0..cols).map(|c| seed[r * 3 + c]).collect()).collect();
        let got = product_divisors(elementary_divisors(&SparseMatrix::from_dense(&dense)));
        prop_assert_eq!(got, minors_oracle(&dense));
    }

    #[test]
    fn homology_invariant_under_basis_change(ops in prop::collection::vec((0usize..4, 0usize..4, -2i64..3, any::<bool>()), 0..12)) {
        // Torus-like complex with a twist: ranks 1, 3, 3, 1.
        let d1 = SparseMatrix::zeros(1, 3);
        let d2 = SparseMatrix::from_dense(&[vec![1, 1, 0], vec![-1, 0, 1], vec![0, -1, -1]]);
        let d3 = SparseMatrix::from_dense(&[vec![1], vec![-1], vec![1]]);
        let c = IntChainComplex::new(vec![1, 3, 3, 1], vec![d1.clone(), d2.clone(), d3.clone()]).unwrap();
        let reference = homology_groups(&c).unwrap();
        // Change basis in C_2 by a unimodular P: d2' = d2 P, d3' = P^-1 d3.
        let mut p: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| i64::from(i == j)).collect()).collect();
        let mut pinv = p.clone();
        for (i, j, k, flip) in ops {
            let (i, j) = (i % 3, j % 3);
            if flip {
                for row in p.iter_mut() { row[i] = -row[i]; }
                for v in pinv[i].iter_mut() { *v = -*v; }
            } else if i != j {
                // column_j += k column_i in P; row_i -= k row_j in P^-1.
                for row in p.iter_mut() { row[j] += k * row[i]; }
                let rj = pinv[j].clone();
                for (v, w) in pinv[i].iter_mut().zip(rj) { *v -= k * w; }
            }
        }
        let pm = SparseMatrix::from_dense(&p);
        let pinvm = SparseMatrix::from_dense(&pinv);
        let changed = IntChainComplex::new(vec![1, 3, 3, 1], vec![d1, d2.mul(&pm), pinvm.mul(&d3)]).unwrap();
        prop_assert_eq!(homology_groups(&changed).unwrap(), reference);
    }

    #[test]
    fn partner_is_an_involution(m in 2u32..6, w in word_strategy(2, 7), cuts in prop::collection::vec(any::<bool>(), 7)) {
        let sys = dihedral(m);
        let monoid = ArtinMonoid::new(&sys);
        // Cut a word into non-trivial pieces.
        let mut factors: Vec<MonElem> = Vec::new();
        let mut piece: Vec<Gen> = Vec::new();
        for (k, g) in w.iter().enumerate() {
            piece.push(*g);
            if cuts[k] || k + 1 == w.len() {
                factors.push(monoid.elem(&piece));
                piece.clear();
            }
        }
        let c = BarCell::new(factors);
        match matching::partner(&monoid, &c).unwrap() {
            Partner::Essential => {
                prop_assert!(matching::mu1_essential(&monoid, &c));
                prop_assert!(matching::mu2_essential(&monoid, &c).unwrap());
            }
            Partner::Upper(e) | Partner::Lower(e) => {
                prop_assert_eq!(bar::eta(&monoid, &e.upper), bar::eta(&monoid, &e.lower));
                prop_assert_eq!(e.upper.dim(), e.lower.dim() + 1);
                prop_assert_eq!(e.upper.merge(&monoid, e.depth - 2), e.lower.clone());
                let other = if e.upper == c { &e.lower } else { &e.upper };
                let back = match matching::partner(&monoid, other).unwrap() {
                    Partner::Upper(b) | Partner::Lower(b) => b,
                    Partner::Essential => panic!("partner lost"),
                };
                prop_assert_eq!(back, e);
            }
        }
    }
}

#[test]
fn bar_cell_counts_match_compositions() {
    // Free monoid: 2^n elements, each with 2^(n-1) ordered factorisations.
    let free = CoxeterSystem::dihedral(Order::Infinite);
    let monoid = ArtinMonoid::new(&free);
    for n in 1..=7 {
        assert_eq!(bar::cells_of_grade(&monoid, n).len(), (1 << n) * (1 << (n - 1)));
    }
    let comm = dihedral(2);
    let monoid = ArtinMonoid::new(&comm);
    for n in 0..=6 {
        assert_eq!(bar::cells_of_grade(&monoid, n).len(), commutative_cells(n), "n = {n}");
    }
}

#[test]
fn essential_cells_biject_with_finite_subsets() {
    for sys in [dihedral(3), dihedral(4), CoxeterSystem::type_a(3), CoxeterSystem::dihedral(Order::Infinite)] {
        let monoid = ArtinMonoid::new(&sys);
        let top = morse::max_essential_length(&monoid).unwrap();
        let mut found = BTreeSet::new();
        for n in 0..=top + 1 {
            for c in bar::cells_of_grade(&monoid, n) {
                if matching::mu1_essential(&monoid, &c) && matching::mu2_essential(&monoid, &c).unwrap() {
                    let sets = matching::tail_sets(&monoid, &c);
                    let t = sets[0].1;
                    assert_eq!(c.dim(), t.len());
                    assert_eq!(c.length(), monoid.delta(t).unwrap().length());
                    assert!(found.insert(t.0), "two essential cells for one set");
                }
            }
        }
        let sf: BTreeSet<u64> = sys.sf_enumerate().into_iter().map(|t| t.0).collect();
        assert_eq!(found, sf);
    }
}
