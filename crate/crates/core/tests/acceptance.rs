//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every criterion is an exact check; the only tolerances are wall-clock
//! limits, pinned per criterion below. Runs without the libtest harness so
//! the report is always printed.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use artin_morse::bar::{self, Grade};
use artin_morse::coxeter::{CoxElem, CoxeterSystem, Gen, GenSet, Order, Word};
use artin_morse::homology::{abelianized_presentation_h1, homology_groups, HomologyGroup};
use artin_morse::matching;
use artin_morse::monoid::{ArtinMonoid, Lcm, MonElem, NormalForm};
use artin_morse::morse::{self, YComplex};
use artin_morse::salvetti::{self, SalCell};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn systems() -> Vec<(&'static str, CoxeterSystem)> {
    vec![
        ("A2", CoxeterSystem::dihedral(Order::Finite(3))),
        ("B2", CoxeterSystem::dihedral(Order::Finite(4))),
        ("I2(5)", CoxeterSystem::dihedral(Order::Finite(5))),
        ("A3", CoxeterSystem::type_a(3)),
        ("A1xA1", CoxeterSystem::dihedral(Order::Finite(2))),
        ("m=inf", CoxeterSystem::dihedral(Order::Infinite)),
    ]
}

fn system(name: &str) -> CoxeterSystem {
    systems().into_iter().find(|(n, _)| *n == name).expect("known system").1
}

/// Finite-type subsets for rank <= 3 by the classical criterion: pairs need
/// finite `m`, triples need `1/m_ab + 1/m_bc + 1/m_ac > 1`.
fn sf_strata_oracle(sys: &CoxeterSystem) -> Vec<usize> {
    assert!(sys.rank() <= 3);
    let inv = |s: Gen, t: Gen| match sys.m(s, t) {
        Order::Finite(m) => 1.0 / m as f64,
        Order::Infinite => 0.0,
    };
    let mut out = vec![0usize; sys.rank() + 1];
    for bits in 0u64..(1 << sys.rank()) {
        let t: Vec<Gen> = (0..sys.rank() as u8).filter(|i| bits >> i & 1 == 1).map(Gen).collect();
        let finite = match t.len() {
            0 | 1 => true,
            2 => sys.m(t[0], t[1]) != Order::Infinite,
            _ => inv(t[0], t[1]) + inv(t[1], t[2]) + inv(t[0], t[2]) > 1.0 + 1e-12,
        };
        if finite {
            out[t.len()] += 1;
        }
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn trimmed(h: &[HomologyGroup]) -> Vec<HomologyGroup> {
    let mut v = h.to_vec();
    while v.last().is_some_and(HomologyGroup::is_zero) {
        v.pop();
    }
    v
}

fn fmt_h(h: &[HomologyGroup]) -> String {
    let v: Vec<String> = trimmed(h).iter().map(|g| g.to_string()).collect();
    format!("({})", v.join(", "))
}

fn y(monoid: &ArtinMonoid) -> Result<YComplex, String> {
    morse::y_complex(monoid).map_err(|e| e.to_string())
}

fn criterion_1() -> Check {
    let expected: [(&str, &[usize]); 6] = [
        ("A2", &[1, 2, 1]),
        ("B2", &[1, 2, 1]),
        ("I2(5)", &[1, 2, 1]),
        ("A3", &[1, 3, 3, 1]),
        ("A1xA1", &[1, 2, 1]),
        ("m=inf", &[1, 2]),
    ];
    let mut notes = Vec::new();
    for (name, want) in expected {
        let sys = system(name);
        let start = Instant::now();
        let monoid = ArtinMonoid::new(&sys);
        let census = y(&monoid)?.census();
        let took = start.elapsed();
        ensure(census == want, || format!("{name}: census {census:?}, expected {want:?}"))?;
        let oracle = sf_strata_oracle(&sys);
        ensure(census == oracle, || format!("{name}: census {census:?}, S^f oracle {oracle:?}"))?;
        ensure(took < Duration::from_secs(10), || format!("{name}: {took:.2?} exceeds 10 s"))?;
        notes.push(format!("{name} {census:?}"));
    }
    Ok(notes.join(" "))
}

fn criterion_2() -> Check {
    let mut total = 0;
    for name in ["A2", "m=inf"] {
        let sys = system(name);
        let monoid = ArtinMonoid::new(&sys);
        for length in 0..=8 {
            for flag in 0..=1 {
                let g = Grade { length, flag };
                let r = matching::audit_grade(&monoid, g).map_err(|e| format!("{name} {g:?}: {e}"))?;
                total += r.summary.cells;
            }
        }
    }
    Ok(format!("36 grades, {total} cells audited"))
}

fn criterion_3() -> Check {
    for m in 2..=5 {
        let sys = CoxeterSystem::dihedral(Order::Finite(m));
        let monoid = ArtinMonoid::new(&sys);
        let (s, t) = (Gen(0), Gen(1));
        let word = morse::boundary_word_2cell(&monoid, s, t).map_err(|e| e.to_string())?;
        let expected = morse::expected_boundary_word(s, t, m);
        ensure(morse::same_cyclic_word(&word, &expected), || format!("m = {m}: got {word:?}"))?;
        ensure(word.len() == 2 * m as usize, || format!("m = {m}: word length {}", word.len()))?;
    }
    Ok("m = 2, 3, 4, 5 agree".into())
}

fn criterion_4() -> Check {
    let mut cells = 0;
    for (name, sys) in systems() {
        let monoid = ArtinMonoid::new(&sys);
        y(&monoid)?.complex.verify().map_err(|e| format!("{name} Y: {e}"))?;
        for n in 0..=8 {
            let z = bar::graded_complex(&monoid, n).map_err(|e| format!("{name} grade {n}: {e}"))?;
            z.complex.verify().map_err(|e| format!("{name} grade {n}: {e}"))?;
            cells += z.complex.ranks().iter().sum::<usize>();
        }
    }
    Ok(format!("6 Y-complexes and 54 graded bar complexes ({cells} cells)"))
}

/// `H(Y)` against the bar complex truncated at lengths `N, N+1, N+2`, where
/// `N = l(Delta_S)`; graded pieces above `N` must be acyclic, and the graded
/// pieces up to `N` must together have the ranks of `Y`'s chain groups.
fn criterion_5() -> Check {
    let mut notes = Vec::new();
    for name in ["A2", "B2"] {
        let sys = system(name);
        let monoid = ArtinMonoid::new(&sys);
        let yc = y(&monoid)?;
        let hy = homology_groups(&yc.complex).map_err(|e| e.to_string())?;
        let n = monoid.delta(sys.all_gens()).map_err(|e| e.to_string())?.length();
        for extra in 0..=2 {
            let z = bar::truncated_complex(&monoid, n + extra).map_err(|e| e.to_string())?;
            let hz = homology_groups(&z.complex).map_err(|e| e.to_string())?;
            ensure(trimmed(&hz) == trimmed(&hy), || {
                format!("{name}: H(Y) = {}, truncated at {} gives {}", fmt_h(&hy), n + extra, fmt_h(&hz))
            })?;
        }
        let mut page: Vec<usize> = Vec::new();
        for len in 0..=n + 2 {
            let g = bar::graded_complex(&monoid, len).map_err(|e| e.to_string())?;
            let h = homology_groups(&g.complex).map_err(|e| e.to_string())?;
            if len > n {
                ensure(h.iter().all(HomologyGroup::is_zero), || format!("{name}: grade {len} has {}", fmt_h(&h)))?;
            }
            for (k, grp) in h.iter().enumerate() {
                ensure(grp.torsion.is_empty(), || format!("{name}: torsion in grade {len}"))?;
                if page.len() <= k {
                    page.resize(k + 1, 0);
                }
                page[k] += grp.rank;
            }
        }
        while page.last() == Some(&0) {
            page.pop();
        }
        ensure(page == yc.census(), || format!("{name}: graded homology ranks {page:?}, Y census {:?}", yc.census()))?;
        notes.push(format!("{name} H = {}", fmt_h(&hy)));
    }
    Ok(notes.join("; "))
}

fn criterion_6() -> Check {
    let mut notes = Vec::new();
    for (name, sys) in systems() {
        let monoid = ArtinMonoid::new(&sys);
        let h = homology_groups(&y(&monoid)?.complex).map_err(|e| e.to_string())?;
        ensure(h.first() == Some(&HomologyGroup::free(1)), || format!("{name}: H_0 = {:?}", h.first()))?;
        let h1 = h.get(1).cloned().unwrap_or_default();
        let predicted = abelianized_presentation_h1(&sys);
        ensure(h1 == predicted, || format!("{name}: H_1 = {h1}, presentation gives {predicted}"))?;
        if name == "m=inf" {
            let want = vec![HomologyGroup::free(1), HomologyGroup::free(2)];
            ensure(trimmed(&h) == want, || format!("m=inf: {}", fmt_h(&h)))?;
        }
        notes.push(format!("{name} {}", fmt_h(&h)));
    }
    Ok(notes.join(" "))
}

/// Positive words equivalent to `word` under the braid relations, found by
/// breadth-first rewriting.
fn braid_class_oracle(sys: &CoxeterSystem, word: &[Gen]) -> BTreeSet<Word> {
    let mut seen: BTreeSet<Word> = BTreeSet::from([word.to_vec()]);
    let mut queue: VecDeque<Word> = VecDeque::from([word.to_vec()]);
    while let Some(w) = queue.pop_front() {
        for (s, t) in sys.gens().flat_map(|s| sys.gens().map(move |t| (s, t))).filter(|(s, t)| s != t) {
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
    seen
}

fn squarefree_oracle(sys: &CoxeterSystem, x: &MonElem) -> bool {
    braid_class_oracle(sys, x.word()).iter().all(|w| w.windows(2).all(|p| p[0] != p[1]))
}

fn criterion_7() -> Check {
    let mut notes = Vec::new();
    for name in ["A2", "B2", "I2(5)"] {
        let sys = system(name);
        let monoid = ArtinMonoid::new(&sys);
        let delta = monoid.delta(sys.all_gens()).map_err(|e| e.to_string())?;
        let top = delta.length();
        let elems: Vec<MonElem> = (0..=top + 1).flat_map(|n| monoid.elements_of_length(n).to_vec()).collect();
        // Delta is a palindrome up to braid moves.
        ensure(monoid.rev(&delta) == delta, || format!("{name}: rev Delta != Delta"))?;
        let mut squarefree = Vec::new();
        for x in &elems {
            let (l, r) = (monoid.left_divides(x, &delta), monoid.right_divides(x, &delta));
            // Left and right divisors of Delta coincide.
            ensure(l == r, || format!("{name}: {} divides Delta on one side only", monoid.format(x)))?;
            // Squarefree iff a divisor of Delta.
            let sf = squarefree_oracle(&sys, x);
            ensure(sf == l, || format!("{name}: {} squarefree = {sf}, divides Delta = {l}", monoid.format(x)))?;
            ensure(sf == monoid.is_squarefree(x), || format!("{name}: squarefree test disagrees on {}", monoid.format(x)))?;
            if sf {
                squarefree.push(x.clone());
            }
        }
        // Squarefree elements are closed under lcm.
        for u in &squarefree {
            for v in &squarefree {
                for side in ["left", "right"] {
                    let pair = [u.clone(), v.clone()];
                    let lcm = if side == "left" { monoid.left_lcm(&pair, top) } else { monoid.right_lcm(&pair, top) };
                    match lcm.map_err(|e| e.to_string())? {
                        Lcm::Found(w) => ensure(squarefree_oracle(&sys, &w), || {
                            format!("{name}: {side} lcm of {} and {} not squarefree", monoid.format(u), monoid.format(v))
                        })?,
                        Lcm::None => return Err(format!("{name}: squarefree elements without {side} lcm")),
                    }
                }
            }
        }
        // Delta is the unique longest squarefree element.
        let longest: Vec<&MonElem> = squarefree.iter().filter(|x| x.length() == top).collect();
        ensure(longest == vec![&delta], || format!("{name}: {} squarefree elements of length {top}", longest.len()))?;
        ensure(squarefree.iter().all(|x| x.length() <= top), || format!("{name}: squarefree element longer than Delta"))?;
        // The lift of the longest element is lcm of the generators.
        let w0 = sys.longest_element(sys.all_gens()).map_err(|e| e.to_string())?;
        let lifted = monoid.elem(w0.word());
        let gens: Vec<MonElem> = sys.gens().map(|s| monoid.gen(s)).collect();
        let right = monoid.right_lcm(&gens, top).map_err(|e| e.to_string())?.found();
        let left = monoid.left_lcm(&gens, top).map_err(|e| e.to_string())?.found();
        ensure(right.as_ref() == Some(&lifted) && left.as_ref() == Some(&lifted) && lifted == delta, || {
            format!("{name}: lift of the longest element is not the lcm of the generators")
        })?;
        notes.push(format!("{name}: {} elements, {} squarefree", elems.len(), squarefree.len()));
    }
    Ok(notes.join("; "))
}

fn satisfies_nf_condition(monoid: &ArtinMonoid, product_order: &[GenSet]) -> bool {
    // x = Delta_{P_0} ... Delta_{P_{k-1}}: every prefix product must have
    // finishing set equal to its last set.
    if product_order.iter().any(|t| t.is_empty()) {
        return false;
    }
    let mut acc = MonElem::identity();
    for &t in product_order {
        let d = monoid.delta(t).expect("finite type");
        acc = monoid.mul(&acc, &d);
        if monoid.finishing_set(&acc) != t {
            return false;
        }
    }
    true
}

fn competitors(sets: &[(GenSet, usize)], remaining: usize, prefix: &mut Vec<GenSet>, out: &mut Vec<Vec<GenSet>>) {
    if remaining == 0 {
        out.push(prefix.clone());
        return;
    }
    for &(t, len) in sets {
        if len <= remaining {
            prefix.push(t);
            competitors(sets, remaining - len, prefix, out);
            prefix.pop();
        }
    }
}

fn criterion_8() -> Check {
    let mut checked = 0;
    for name in ["A2", "A3"] {
        let sys = system(name);
        let monoid = ArtinMonoid::new(&sys);
        let sets: Vec<(GenSet, usize)> = sys
            .sf_enumerate()
            .into_iter()
            .filter(|t| !t.is_empty())
            .map(|t| (t, monoid.delta(t).expect("finite").length()))
            .collect();
        for n in 0..=6 {
            for x in monoid.elements_of_length(n).iter() {
                let nf = monoid.normal_form(x).map_err(|e| e.to_string())?;
                let back = monoid.recompose(&nf).map_err(|e| e.to_string())?;
                ensure(back == *x, || format!("{name}: round trip fails on {}", monoid.format(x)))?;
                let product_order: Vec<GenSet> = nf.parts.iter().rev().copied().collect();
                ensure(satisfies_nf_condition(&monoid, &product_order) && monoid.is_valid_normal_form(&nf), || {
                    format!("{name}: finishing-set condition fails on {}", monoid.format(x))
                })?;
                if n <= 4 {
                    let mut all = Vec::new();
                    competitors(&sets, n, &mut Vec::new(), &mut all);
                    let valid: Vec<Vec<GenSet>> = all
                        .into_iter()
                        .filter(|seq| {
                            let ds: Vec<MonElem> = seq.iter().map(|&t| monoid.delta(t).expect("finite")).collect();
                            monoid.product(ds.iter()) == *x && satisfies_nf_condition(&monoid, seq)
                        })
                        .collect();
                    ensure(valid == vec![product_order.clone()], || {
                        format!("{name}: {} normal forms of {}", valid.len(), monoid.format(x))
                    })?;
                    let nf_back = NormalForm { parts: valid[0].iter().rev().copied().collect() };
                    ensure(nf_back == nf, || "competitor order mismatch".into())?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} elements"))
}

fn criterion_9() -> Check {
    let sys = system("A2");
    let poset = salvetti::sal_poset(&sys).map_err(|e| e.to_string())?;
    ensure(poset.len() == 24 && poset.census() == vec![6, 12, 6], || format!("census {:?}", poset.census()))?;
    salvetti::check_partial_order(&sys, &poset).map_err(|e| e.to_string())?;
    salvetti::check_action(&sys, &poset).map_err(|e| e.to_string())?;
    for i in 0..poset.len() {
        let r = salvetti::cell_pair_check(&sys, &poset, i).map_err(|e| e.to_string())?;
        let want = salvetti::sphere_homology(r.dim as isize - 1);
        ensure(salvetti::same_homology(&r.boundary, &want), || format!("cell {i}: boundary {:?}", r.boundary))?;
    }
    ensure(salvetti::quotient_census(&sys) == vec![1, 2, 1], || "quotient census".into())?;
    let e = CoxElem::identity();
    let verts = salvetti::polygon_vertices(&sys, &e, Gen(0), Gen(1)).map_err(|e| e.to_string())?;
    let cx = |w: &str| sys.cox_canonical(&sys.parse_word(w).unwrap()).unwrap();
    let want: Vec<CoxElem> = ["1", "a", "ab", "aba", "ba", "b"].iter().map(|w| cx(w)).collect();
    ensure(verts == want, || format!("polygon vertices {verts:?}"))?;
    ensure(cx("aba") == cx("bab"), || "aba != bab".into())?;
    // The polygon is the boundary of the top cell at the identity.
    let top = poset.index_of(&SalCell { u: e.clone(), t: GenSet(0b11) }).expect("top cell");
    let zero: HashSet<CoxElem> =
        poset.below[top].iter().map(|&i| &poset.cells[i]).filter(|c| c.dim() == 0).map(|c| c.u.clone()).collect();
    ensure(zero == verts.iter().cloned().collect(), || "0-cells below the top cell differ from the polygon".into())?;
    for k in 0..verts.len() {
        let (p, q) = (&verts[k], &verts[(k + 1) % verts.len()]);
        let joined = poset.below[top].iter().map(|&i| &poset.cells[i]).any(|c| {
            c.dim() == 1 && [p, q].iter().all(|v| sal_leq_point(&sys, v, c))
        });
        ensure(joined, || format!("no edge between consecutive vertices {k}"))?;
    }
    let word = salvetti::polygon_relation_word(&sys, &e, Gen(0), Gen(1)).map_err(|e| e.to_string())?;
    let monoid = ArtinMonoid::new(&sys);
    let y_word = morse::boundary_word_2cell(&monoid, Gen(0), Gen(1)).map_err(|e| e.to_string())?;
    ensure(morse::same_cyclic_word(&word, &y_word), || "polygon word differs from the collapsed 2-cell".into())?;
    Ok("24 cells (6/12/6), partial order, free action, 24 pair checks, polygon".into())
}

fn sal_leq_point(sys: &CoxeterSystem, v: &CoxElem, c: &SalCell) -> bool {
    salvetti::sal_leq(sys, &SalCell { u: v.clone(), t: GenSet::EMPTY }, c)
}

fn criterion_10() -> Check {
    let a2 = system("A2");
    let a3 = system("A3");
    let (m2, m3) = (ArtinMonoid::new(&a2), ArtinMonoid::new(&a3));
    let (y2, y3) = (y(&m2)?, y(&m3)?);
    let mut compared = 0;
    // Order-preserving inclusions a,b -> a,b and a,b -> b,c.
    for shift in [0u32, 1] {
        let embed = |t: GenSet| GenSet(t.0 << shift);
        for layer in &y2.sets {
            for &upper in layer {
                for lower in upper.subsets().filter(|l| l.len() + 1 == upper.len()) {
                    let (c2, c3) = (y2.coefficient(upper, lower), y3.coefficient(embed(upper), embed(lower)));
                    ensure(c2 == c3, || format!("shift {shift}: [{upper:?}:{lower:?}] = {c2} vs {c3}"))?;
                    compared += 1;
                }
            }
        }
    }
    Ok(format!("{compared} boundary entries identical under both inclusions"))
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, &'static str, u64, fn() -> Check);
    let criteria: [Criterion; 10] = [
        (1, "essential census of Y equals S^f strata", "exact; < 10 s per system", 60, criterion_1),
        (2, "matching audit on all grades of length <= 8 (A2, m=inf)", "exact; < 60 s", 60, criterion_2),
        (3, "2-cell boundary word matches the braid relation word", "exact up to rotation/inversion; < 30 s", 30, criterion_3),
        (4, "boundary squared vanishes (Y and graded bar complexes, length <= 8)", "exact", 600, criterion_4),
        (5, "H(Y) agrees with the length-filtered bar complex (A2, B2)", "exact integer agreement; < 120 s", 120, criterion_5),
        (6, "H_0 = Z and H_1 = abelianised presentation; m=inf gives (Z, Z^2)", "exact", 600, criterion_6),
        (7, "fundamental element properties (A2, B2, I2(5))", "exact, exhaustive; < 120 s", 120, criterion_7),
        (8, "Garside normal form round trip, condition and uniqueness (A2, A3)", "exact, exhaustive", 600, criterion_8),
        (9, "Salvetti poset of A2", "exact; < 60 s", 60, criterion_9),
        (10, "naturality of Y under A2 -> A3", "exact", 600, criterion_10),
    ];
    let mut failed = 0;
    for (id, name, tolerance, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > Duration::from_secs(limit) => Err(format!("{detail}; took {took:.2?}, limit {limit} s")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  criterion {id:>2}: {name} [{tolerance}] ({took:.2?}) {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {id:>2}: {name} [{tolerance}] ({took:.2?}) {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
