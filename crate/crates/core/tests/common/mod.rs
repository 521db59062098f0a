//! Property suites shared by the `properties` and `acceptance` targets. Every
//! suite runs on a fixed seed so failures reproduce.
#![allow(dead_code)]

use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};

use onsager_core::affine_loop::{LoopAlgebra, LoopElement};
use onsager_core::cartan::preset;
use onsager_core::chevalley::{ChevElement, StructureTable};
use onsager_core::exact_math::{rat, ExactMatrix, Rational};
use onsager_core::freelie::{is_lyndon, lyndon_words, witt_dimension, BracketExpr, FreeLieAlgebra, FreeLieElement};
use onsager_core::roots::Root;

fn run<S: Strategy>(seed: u64, cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let config = Config { cases, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() };
    TestRunner::new(config).run(&strategy, test).map_err(|e| e.to_string())
}

fn check(ok: bool, what: &str) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.to_string()))
    }
}

fn expr(n: usize) -> impl Strategy<Value = BracketExpr> {
    let leaf = (0..n).prop_map(BracketExpr::Leaf);
    leaf.prop_recursive(3, 8, 2, |inner| (inner.clone(), inner).prop_map(|(l, r)| BracketExpr::node(l, r)))
}

fn free_element(n: usize) -> impl Strategy<Value = Vec<(BracketExpr, i64)>> {
    prop::collection::vec((expr(n), -3i64..=3), 1..4)
}

fn lyndon_combination(f: &FreeLieAlgebra, terms: &[(BracketExpr, i64)]) -> FreeLieElement {
    let mut out = FreeLieElement::zero();
    for (e, c) in terms {
        out.add_scaled(&f.to_lyndon(e).unwrap(), &rat(*c));
    }
    out
}

/// `[x,y] = -[y,x]`, `[x,x] = 0`, and results stay in the Lyndon basis.
pub fn freelie_antisymmetry() -> Result<(), String> {
    let f = FreeLieAlgebra::new(3);
    run(0x5eed_0001, 64, (free_element(3), free_element(3)), |(a, b)| {
        let (x, y) = (lyndon_combination(&f, &a), lyndon_combination(&f, &b));
        let xy = f.bracket(&x, &y);
        check(xy.plus(&f.bracket(&y, &x)).is_zero(), "antisymmetry")?;
        check(f.bracket(&x, &x).is_zero(), "[x,x] = 0")?;
        let lyndon = xy.terms().all(|(w, _)| is_lyndon(w));
        check(lyndon, "Lyndon normal form")
    })
}

pub fn freelie_jacobi() -> Result<(), String> {
    let f = FreeLieAlgebra::new(3);
    run(0x5eed_0002, 48, (free_element(3), free_element(3), free_element(3)), |(a, b, c)| {
        let (x, y, z) = (lyndon_combination(&f, &a), lyndon_combination(&f, &b), lyndon_combination(&f, &c));
        let s = f
            .bracket(&x, &f.bracket(&y, &z))
            .plus(&f.bracket(&y, &f.bracket(&z, &x)))
            .plus(&f.bracket(&z, &f.bracket(&x, &y)));
        check(s.is_zero(), "Jacobi")
    })
}

/// Lyndon words of length `d` on `n` letters are counted by the necklace
/// formula; computed here by brute force over all words.
pub fn witt_dimensions() -> Result<(), String> {
    run(0x5eed_0003, 24, (1usize..=3, 1usize..=7), |(n, d)| {
        let words = lyndon_words(n, d);
        let brute = (0..n.pow(d as u32))
            .filter(|&k| {
                let w: Vec<usize> = (0..d).map(|p| k / n.pow((d - 1 - p) as u32) % n).collect();
                is_lyndon(&w)
            })
            .count();
        check(words.len() == brute, "Lyndon word count")?;
        check(witt_dimension(n, d) == brute, "Witt dimension")
    })
}

fn loop_algebras() -> Vec<LoopAlgebra> {
    ["A1~", "A2~", "C2~"].iter().map(|n| LoopAlgebra::new(&preset(n).unwrap()).unwrap()).collect()
}

type LoopSpec = (Vec<(usize, i64, i64)>, i64, i64);

fn loop_spec() -> impl Strategy<Value = LoopSpec> {
    (prop::collection::vec((0usize..64, -2i64..=2, -3i64..=3), 1..5), -2i64..=2, -2i64..=2)
}

fn loop_element(lp: &LoopAlgebra, (terms, c, d): &LoopSpec) -> LoopElement {
    let basis = lp.table().basis();
    let mut x = LoopElement::central().scaled(&rat(*c));
    x.add_scaled(&LoopElement::derivation(), &rat(*d));
    for &(b, k, coeff) in terms {
        x.add_scaled(&LoopElement::basis(basis[b % basis.len()], k), &rat(coeff));
    }
    x
}

/// Jacobi identity and invariance of the form on the extended loop algebra.
pub fn loop_jacobi_and_form() -> Result<(), String> {
    let lps = loop_algebras();
    run(0x5eed_0004, 48, (0usize..3, loop_spec(), loop_spec(), loop_spec()), |(p, a, b, c)| {
        let lp = &lps[p];
        let (x, y, z) = (loop_element(lp, &a), loop_element(lp, &b), loop_element(lp, &c));
        let s = lp
            .bracket(&x, &lp.bracket(&y, &z))
            .plus(&lp.bracket(&y, &lp.bracket(&z, &x)))
            .plus(&lp.bracket(&z, &lp.bracket(&x, &y)));
        check(s.is_zero(), "Jacobi")?;
        check(lp.form(&lp.bracket(&x, &y), &z) == lp.form(&x, &lp.bracket(&y, &z)), "form invariance")?;
        check(lp.form(&x, &y) == lp.form(&y, &x), "form symmetry")
    })
}

/// `ω̃` is an involutive automorphism preserving the form.
pub fn loop_omega_automorphism() -> Result<(), String> {
    let lps = loop_algebras();
    run(0x5eed_0005, 64, (0usize..3, loop_spec(), loop_spec()), |(p, a, b)| {
        let lp = &lps[p];
        let (x, y) = (loop_element(lp, &a), loop_element(lp, &b));
        let w = |v: &LoopElement| lp.omega_tilde(v);
        check(w(&lp.bracket(&x, &y)) == lp.bracket(&w(&x), &w(&y)), "ω̃ respects brackets")?;
        check(w(&w(&x)) == x, "ω̃ is an involution")?;
        check(lp.form(&w(&x), &w(&y)) == lp.form(&x, &y), "ω̃ preserves the form")
    })
}

fn finite_tables() -> Vec<StructureTable> {
    ["A3", "B3", "C3", "D4", "G2", "F4"].iter().map(|n| StructureTable::build(&preset(n).unwrap()).unwrap()).collect()
}

fn chev_element(t: &StructureTable, terms: &[(usize, i64)]) -> ChevElement {
    let basis = t.basis();
    let mut x = ChevElement::zero();
    for &(b, c) in terms {
        x.add_scaled(&ChevElement::basis(basis[b % basis.len()]), &rat(c));
    }
    x
}

/// `ω` is an involutive automorphism preserving the form.
pub fn finite_omega_automorphism() -> Result<(), String> {
    let ts = finite_tables();
    let terms = || prop::collection::vec((0usize..64, -3i64..=3), 1..5);
    run(0x5eed_0006, 64, (0usize..ts.len(), terms(), terms()), |(p, a, b)| {
        let t = &ts[p];
        let (x, y) = (chev_element(t, &a), chev_element(t, &b));
        check(t.omega(&t.bracket(&x, &y)) == t.bracket(&t.omega(&x), &t.omega(&y)), "ω respects brackets")?;
        check(t.omega(&t.omega(&x)) == x, "ω is an involution")?;
        check(t.form(&t.omega(&x), &t.omega(&y)) == t.form(&x, &y), "ω preserves the form")
    })
}

/// `N_{β,α} = -N_{α,β}`, `N_{-α,-β} = -N_{α,β}`, `|N_{α,β}| = p+1`, and the
/// cyclic law `N_{α,β}/(γ,γ) = N_{β,γ}/(α,α)` when `α+β+γ = 0`.
pub fn structure_constant_laws() -> Result<(), String> {
    let ts = finite_tables();
    run(0x5eed_0007, 256, (0usize..ts.len(), 0usize..64, 0usize..64), |(p, a, b)| {
        let t = &ts[p];
        let rs = t.root_system();
        let (a, b) = (a % rs.num_roots(), b % rs.num_roots());
        let (al, be) = (rs.root(a), rs.root(b));
        let n = t.n(a, b);
        check(t.n(b, a) == -n, "antisymmetry")?;
        check(t.n(rs.negate(a), rs.negate(b)) == -n, "N(-a,-b) = -N(a,b)")?;
        let sum = &al + &be;
        if sum.is_zero() || !rs.is_root(&sum) {
            return check(n == 0, "N vanishes off roots");
        }
        let mut p_down = 0i64;
        while rs.is_root(&(&be - &al.scaled(p_down + 1))) {
            p_down += 1;
        }
        check(n.abs() == p_down + 1, "|N| = p+1")?;
        let ga: Root = -&sum;
        let c = rs.id(&ga).unwrap();
        let l = |r: &Root| rs.squared_length(r);
        let q1 = rat(n) / l(&ga);
        check(q1 == rat(t.n(b, c)) / l(&al) && q1 == rat(t.n(c, a)) / l(&be), "cyclic law")
    })
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-2i64..=2, c), r))
}

/// Row rank equals column rank, rank plus nullity is the column count, and
/// the null vectors are killed.
pub fn exact_rank_laws() -> Result<(), String> {
    run(0x5eed_0008, 128, matrix(), |rows| {
        let m = ExactMatrix::<Rational>::from_rows(&rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect::<Vec<_>>());
        let null = m.nullspace_basis();
        check(m.rank() == m.transpose().rank(), "rank of the transpose")?;
        check(m.rank() + null.len() == m.cols(), "rank plus nullity")?;
        check(null.iter().all(|v| m.apply(v).iter().all(Zero::is_zero)), "null vectors")
    })
}

pub const SUITES: &[(&str, fn() -> Result<(), String>)] = &[
    ("free Lie antisymmetry", freelie_antisymmetry),
    ("free Lie Jacobi", freelie_jacobi),
    ("Witt dimensions", witt_dimensions),
    ("loop Jacobi and invariant form", loop_jacobi_and_form),
    ("loop involution", loop_omega_automorphism),
    ("Chevalley involution", finite_omega_automorphism),
    ("structure constant laws", structure_constant_laws),
    ("exact rank laws", exact_rank_laws),
];
