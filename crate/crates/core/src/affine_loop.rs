//! Untwisted affine Lie algebras as `Lg ⊕ Cc ⊕ Cd` over a finite Chevalley
//! table, and the integral basis `y_γ^{(i)}` of the fix-point algebra.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::cartan::{CartanKind, CartanMatrix};
use crate::chevalley::{ChevBasis, ChevElement, StructureTable};
use crate::exact_math::{rat, rational_to_i64, Rational};
use crate::roots::{AffineRoot, AffineRootSystem, Root};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LoopError {
    #[error("Cartan matrix is not of untwisted affine type")]
    NotAffine,
    #[error("finite table does not match the finite part of the affine matrix")]
    TableMismatch,
    #[error("not a positive affine root")]
    NotPositive,
    #[error("element is not fixed by the Chevalley involution")]
    NotFixed,
    #[error("bracket does not lie in the integral span of the y-basis: {0}")]
    NotExpandable(String),
}

/// `x[k] = x ⊗ t^k` for a Chevalley basis vector `x`.
pub type LoopBasis = (ChevBasis, i64);

/// Element of `Lg ⊕ Cc ⊕ Cd`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LoopElement {
    terms: BTreeMap<LoopBasis, Rational>,
    c: Rational,
    d: Rational,
}

impl LoopElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(x: ChevBasis, k: i64) -> Self {
        let mut out = Self::zero();
        out.add_term((x, k), Rational::one());
        out
    }

    pub fn central() -> Self {
        Self { c: Rational::one(), ..Self::default() }
    }

    pub fn derivation() -> Self {
        Self { d: Rational::one(), ..Self::default() }
    }

    /// `x[k]` for an element `x` of the finite algebra.
    pub fn from_chev(x: &ChevElement, k: i64) -> Self {
        let mut out = Self::zero();
        for (&b, c) in x.terms() {
            out.add_term((b, k), c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LoopBasis, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: LoopBasis) -> Rational {
        self.terms.get(&b).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn c_coeff(&self) -> &Rational {
        &self.c
    }

    pub fn d_coeff(&self) -> &Rational {
        &self.d
    }

    pub fn add_term(&mut self, b: LoopBasis, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(b).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        for (&b, x) in &other.terms {
            self.add_term(b, x * c);
        }
        self.c += &other.c * c;
        self.d += &other.d * c;
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }
}

impl fmt::Debug for LoopElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|((b, k), c)| match b {
                ChevBasis::H(i) => format!("{c}·h{}[{k}]", i + 1),
                ChevBasis::E(a) => format!("{c}·e#{a}[{k}]"),
            })
            .collect();
        if !self.c.is_zero() {
            parts.push(format!("{}·c", self.c));
        }
        if !self.d.is_zero() {
            parts.push(format!("{}·d", self.d));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}

/// Index of the basis vector `y_γ^{(i)}`: `i` is 0 for real roots and the
/// 0-based finite node for imaginary roots.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AffineFixIndex {
    pub root: AffineRoot,
    pub i: usize,
}

impl AffineFixIndex {
    pub fn real(root: AffineRoot) -> Self {
        Self { root, i: 0 }
    }

    pub fn imaginary(rank: usize, level: i64, i: usize) -> Self {
        Self { root: AffineRoot::imaginary(rank, level), i }
    }
}

impl fmt::Display for AffineFixIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.root.is_imaginary() {
            write!(f, "y({})^({})", self.root, self.i + 1)
        } else {
            write!(f, "y({})", self.root)
        }
    }
}

/// Loop realization of an untwisted affine Kac-Moody algebra.
#[derive(Debug, Clone)]
pub struct LoopAlgebra {
    table: StructureTable,
    ars: AffineRootSystem,
}

impl LoopAlgebra {
    /// Uses the generic Chevalley table of the finite part.
    pub fn new(affine: &CartanMatrix) -> Result<Self, LoopError> {
        if affine.kind() != CartanKind::UntwistedAffine {
            return Err(LoopError::NotAffine);
        }
        let (fin, _) = affine.finite_part().map_err(|_| LoopError::NotAffine)?;
        let table = StructureTable::build(&fin).map_err(|_| LoopError::NotAffine)?;
        Self::with_table(affine, table)
    }

    /// Uses a given table for the finite part, e.g. one adapted to explicit matrices.
    pub fn with_table(affine: &CartanMatrix, table: StructureTable) -> Result<Self, LoopError> {
        let ars = AffineRootSystem::new(affine).map_err(|_| LoopError::NotAffine)?;
        if ars.finite().cartan().rows() != table.cartan().rows() {
            return Err(LoopError::TableMismatch);
        }
        Ok(Self { table, ars })
    }

    pub fn table(&self) -> &StructureTable {
        &self.table
    }

    pub fn affine_roots(&self) -> &AffineRootSystem {
        &self.ars
    }

    pub fn cartan(&self) -> &CartanMatrix {
        self.ars.cartan()
    }

    pub fn rank(&self) -> usize {
        self.table.rank()
    }

    fn bracket_terms(&self, (x, k): LoopBasis, (y, m): LoopBasis, coef: &Rational, out: &mut LoopElement) {
        let b = self.table.bracket_basis(x, y);
        for (&z, c) in b.terms() {
            out.add_term((z, k + m), c * coef);
        }
        if k != 0 && k == -m {
            let f = self.table.form_basis(x, y);
            if !f.is_zero() {
                out.c += f * rat(k) * coef;
            }
        }
    }

    /// `[x[k], y[m]] = [x,y][k+m] + k δ_{k,-m} (x,y) c`, `[d, x[m]] = m x[m]`,
    /// `c` central.
    pub fn bracket(&self, x: &LoopElement, y: &LoopElement) -> LoopElement {
        let mut out = LoopElement::zero();
        for (&a, ca) in &x.terms {
            for (&b, cb) in &y.terms {
                self.bracket_terms(a, b, &(ca * cb), &mut out);
            }
        }
        if !x.d.is_zero() {
            for (&(b, m), cb) in &y.terms {
                out.add_term((b, m), rat(m) * cb * &x.d);
            }
        }
        if !y.d.is_zero() {
            for (&(a, k), ca) in &x.terms {
                out.add_term((a, k), -rat(k) * ca * &y.d);
            }
        }
        out
    }

    /// Invariant form: `(x[k], y[m]) = δ_{k+m,0} (x,y)`, `(c,d) = 1`.
    pub fn form(&self, x: &LoopElement, y: &LoopElement) -> Rational {
        let mut s = &x.c * &y.d + &x.d * &y.c;
        for (&(a, k), ca) in &x.terms {
            for (&(b, m), cb) in &y.terms {
                if k + m == 0 {
                    let f = self.table.form_basis(a, b);
                    if !f.is_zero() {
                        s += f * ca * cb;
                    }
                }
            }
        }
        s
    }

    /// `ω̃(x[k]) = ω(x)[-k]`, `c ↦ -c`, `d ↦ -d`.
    pub fn omega_tilde(&self, x: &LoopElement) -> LoopElement {
        let mut out = LoopElement::zero();
        for (&(b, k), c) in &x.terms {
            let (ob, s) = self.table.omega_basis(b);
            out.add_term((ob, -k), s * c);
        }
        out.c = -x.c.clone();
        out.d = -x.d.clone();
        out
    }

    /// `y_γ^{(i)}` for any affine root `γ`; `γ = 0` gives 0.
    pub fn y_any(&self, idx: &AffineFixIndex) -> LoopElement {
        let k = idx.root.level;
        if idx.root.is_imaginary() {
            let mut out = LoopElement::basis(ChevBasis::H(idx.i), k);
            out.add_term((ChevBasis::H(idx.i), -k), -Rational::one());
            return out;
        }
        if idx.root.finite.is_zero() {
            return LoopElement::zero();
        }
        let rs = self.table.root_system();
        let a = rs.id(&idx.root.finite).expect("finite part is a root");
        let mut out = LoopElement::basis(ChevBasis::E(a), k);
        out.add_term((ChevBasis::E(rs.negate(a)), -k), -Rational::one());
        out
    }

    /// `y_γ^{(i)}` for a positive affine root.
    pub fn y_affine(&self, idx: &AffineFixIndex) -> Result<LoopElement, LoopError> {
        if !idx.root.is_positive() || !self.ars.is_root(&idx.root) || (idx.root.is_imaginary() && idx.i >= self.rank()) {
            return Err(LoopError::NotPositive);
        }
        Ok(self.y_any(idx))
    }

    /// The generator `Y_j` for the affine-matrix index `j`.
    pub fn y_gen(&self, j: usize) -> LoopElement {
        self.y_any(&AffineFixIndex::real(self.ars.simple_root(j)))
    }

    /// Chevalley generators `e_j`, `f_j` of the affine algebra:
    /// `e_0 = e_{-θ}[1]`, `f_0 = e_θ[-1]`.
    pub fn chevalley_generators(&self, j: usize) -> (LoopElement, LoopElement) {
        let g = self.ars.simple_root(j);
        let rs = self.table.root_system();
        let a = rs.id(&g.finite).expect("root");
        (LoopElement::basis(ChevBasis::E(a), g.level), LoopElement::basis(ChevBasis::E(rs.negate(a)), -g.level))
    }

    pub fn height(&self, idx: &AffineFixIndex) -> i64 {
        self.ars.height(&idx.root)
    }

    /// The y-basis of positive roots of height at most `h`, by height.
    pub fn basis_up_to(&self, h: i64) -> Vec<AffineFixIndex> {
        let mut out = Vec::new();
        for (g, m) in self.ars.positive_roots_up_to(h) {
            if g.is_imaginary() {
                out.extend((0..m).map(|i| AffineFixIndex { root: g.clone(), i }));
            } else {
                out.push(AffineFixIndex::real(g));
            }
        }
        out
    }

    /// Coordinates of an `ω̃`-fixed element in the y-basis.
    pub fn y_coords(&self, x: &LoopElement) -> Result<BTreeMap<AffineFixIndex, Rational>, LoopError> {
        if !x.c.is_zero() || !x.d.is_zero() {
            return Err(LoopError::NotFixed);
        }
        let rs = self.table.root_system();
        let r = self.rank();
        let mut out = BTreeMap::new();
        for (&(b, k), c) in &x.terms {
            let partner = match b {
                ChevBasis::H(_) => (b, -k),
                ChevBasis::E(a) => (ChevBasis::E(rs.negate(a)), -k),
            };
            if x.coeff(partner) != -c.clone() {
                return Err(LoopError::NotFixed);
            }
            match b {
                ChevBasis::H(i) if k > 0 => {
                    out.insert(AffineFixIndex::imaginary(r, k, i), c.clone());
                }
                ChevBasis::H(_) => {}
                ChevBasis::E(a) => {
                    let g = AffineRoot::new(rs.root(a), k);
                    if g.is_positive() {
                        out.insert(AffineFixIndex::real(g), c.clone());
                    }
                }
            }
        }
        Ok(out)
    }

    /// Bracket of two y-basis vectors, expanded in the y-basis with integer
    /// coefficients.
    pub fn k_bracket_expand(&self, a: &AffineFixIndex, b: &AffineFixIndex) -> Result<Vec<(AffineFixIndex, i64)>, LoopError> {
        let br = self.bracket(&self.y_any(a), &self.y_any(b));
        let coords = self.y_coords(&br).map_err(|_| LoopError::NotExpandable(format!("[{a}, {b}] is not fixed")))?;
        coords
            .into_iter()
            .map(|(idx, c)| match rational_to_i64(&c) {
                Some(v) => Ok((idx, v)),
                None => Err(LoopError::NotExpandable(format!("[{a}, {b}] has coefficient {c}"))),
            })
            .collect()
    }

    /// The closed-form expansion of `[y_γ, y_γ']` for arbitrary (signed) indices,
    /// normalized to positive roots via `y_{-γ} = -y_γ` and `y_0 = 0`.
    pub fn closed_form_bracket(&self, a: &AffineFixIndex, b: &AffineFixIndex) -> Vec<(AffineFixIndex, i64)> {
        let rs = self.table.root_system();
        let r = self.rank();
        let mut acc: BTreeMap<AffineFixIndex, i64> = BTreeMap::new();
        let mut push = |root: AffineRoot, i: usize, c: i64| {
            if c == 0 || (root.finite.is_zero() && root.level == 0) {
                return;
            }
            let (root, c) = if root.is_positive() { (root, c) } else { (root.neg(), -c) };
            *acc.entry(AffineFixIndex { root, i }).or_insert(0) += c;
        };
        let (ga, gb) = (&a.root, &b.root);
        let (l, m) = (ga.level, gb.level);
        match (ga.is_imaginary(), gb.is_imaginary()) {
            (true, true) => {}
            (true, false) => {
                let p = rs.pairing(&gb.finite, a.i);
                push(AffineRoot::new(gb.finite.clone(), l + m), 0, p);
                push(AffineRoot::new(gb.finite.clone(), m - l), 0, -p);
            }
            (false, true) => {
                let p = rs.pairing(&ga.finite, b.i);
                push(AffineRoot::new(ga.finite.clone(), m + l), 0, -p);
                push(AffineRoot::new(ga.finite.clone(), l - m), 0, p);
            }
            (false, false) => {
                let (al, be) = (&ga.finite, &gb.finite);
                let ka = rs.id(al).expect("root");
                if al == be {
                    for (i, k) in self.table.coroot(ka).into_iter().enumerate() {
                        push(AffineRoot::imaginary(r, m - l), i, k);
                    }
                } else if *al == -be {
                    for (i, k) in self.table.coroot(ka).into_iter().enumerate() {
                        push(AffineRoot::imaginary(r, m + l), i, k);
                    }
                } else {
                    let sum = al + be;
                    let diff = al - be;
                    let kp = self.table.n_roots(al, be);
                    let km = self.table.n_roots(al, &-be);
                    if kp != 0 {
                        push(AffineRoot::new(sum, l + m), 0, kp);
                    }
                    if km != 0 {
                        push(AffineRoot::new(diff, l - m), 0, -km);
                    }
                }
            }
        }
        acc.into_iter().filter(|(_, c)| *c != 0).collect()
    }

    /// All real and imaginary fix-point indices with finite part in `Φ ∪ {0}`
    /// and level in `-bound..=bound`, positive or not.
    pub fn signed_indices(&self, bound: i64) -> Vec<AffineFixIndex> {
        let rs = self.table.root_system();
        let r = self.rank();
        let mut out = Vec::new();
        for k in -bound..=bound {
            for a in 0..rs.num_roots() {
                out.push(AffineFixIndex::real(AffineRoot::new(rs.root(a), k)));
            }
            if k != 0 {
                out.extend((0..r).map(|i| AffineFixIndex::imaginary(r, k, i)));
            }
        }
        out
    }
}

/// Normalizes an expansion with signed indices to positive ones.
pub fn normalize_expansion(terms: &[(AffineFixIndex, i64)]) -> Vec<(AffineFixIndex, i64)> {
    let mut acc: BTreeMap<AffineFixIndex, i64> = BTreeMap::new();
    for (idx, c) in terms {
        if idx.root.finite.is_zero() && idx.root.level == 0 {
            continue;
        }
        if idx.root.is_positive() {
            *acc.entry(idx.clone()).or_insert(0) += c;
        } else {
            *acc.entry(AffineFixIndex { root: idx.root.neg(), i: idx.i }).or_insert(0) -= c;
        }
    }
    acc.into_iter().filter(|(_, c)| *c != 0).collect()
}

/// `A_m = y_{α_1+mδ}` and `G_m = y_{mδ}^{(1)}` in the loop realization of `sl_2`.
pub fn onsager_basis(lp: &LoopAlgebra, m: i64) -> (LoopElement, LoopElement) {
    assert_eq!(lp.rank(), 1, "Onsager basis lives over A1");
    let a = lp.y_any(&AffineFixIndex::real(AffineRoot::new(Root(alloc::vec![1]), m)));
    let g = lp.y_any(&AffineFixIndex::imaginary(1, m, 0));
    (a, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::preset;

    fn lp(name: &str) -> LoopAlgebra {
        LoopAlgebra::new(&preset(name).unwrap()).unwrap()
    }

    fn some_basis(l: &LoopAlgebra, bound: i64) -> Vec<LoopElement> {
        let mut v: Vec<LoopElement> = Vec::new();
        for b in l.table().basis() {
            for k in -bound..=bound {
                v.push(LoopElement::basis(b, k));
            }
        }
        v.push(LoopElement::central());
        v.push(LoopElement::derivation());
        v
    }

    #[test]
    fn bracket_examples() {
        let l = lp("A1~");
        let t = l.table();
        let (e, f) = (t.e(0), t.f(0));
        let got = l.bracket(&LoopElement::from_chev(&e, 1), &LoopElement::from_chev(&f, -1));
        let mut want = LoopElement::from_chev(&t.h(0), 0);
        want.add_scaled(&LoopElement::central(), &rat(1));
        assert_eq!(got, want);
        let em = LoopElement::from_chev(&e, 3);
        assert_eq!(l.bracket(&LoopElement::derivation(), &em), em.scaled(&rat(3)));
        assert!(l.bracket(&LoopElement::central(), &em).is_zero());
    }

    #[test]
    fn jacobi_form_and_omega_on_basis() {
        for name in ["A1~", "C2~"] {
            let l = lp(name);
            let basis = some_basis(&l, 1);
            for x in &basis {
                assert_eq!(l.omega_tilde(&l.omega_tilde(x)), *x);
                for y in &basis {
                    let xy = l.bracket(x, y);
                    assert_eq!(l.omega_tilde(&xy), l.bracket(&l.omega_tilde(x), &l.omega_tilde(y)));
                }
            }
            if name == "A1~" {
                for x in &basis {
                    for y in &basis {
                        let xy = l.bracket(x, y);
                        for z in &basis {
                            let mut s = l.bracket(&xy, z);
                            s.add_scaled(&l.bracket(&l.bracket(y, z), x), &rat(1));
                            s.add_scaled(&l.bracket(&l.bracket(z, x), y), &rat(1));
                            assert!(s.is_zero());
                            let inv = l.form(&xy, z) + l.form(y, &l.bracket(x, z));
                            assert!(inv.is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn generators_match_affine_matrix() {
        for name in ["A1~", "A2~", "C2~", "G2~"] {
            let l = lp(name);
            let a = l.cartan().clone();
            let n = a.n();
            let gens: Vec<_> = (0..n).map(|j| l.chevalley_generators(j)).collect();
            let hs: Vec<LoopElement> = gens.iter().map(|(e, f)| l.bracket(e, f)).collect();
            for i in 0..n {
                for j in 0..n {
                    let got = l.bracket(&hs[i], &gens[j].0);
                    assert_eq!(got, gens[j].0.scaled(&rat(a.entry(i, j))), "{name} i={i} j={j}");
                    let ef = l.bracket(&gens[i].0, &gens[j].1);
                    assert_eq!(ef.is_zero(), i != j);
                }
            }
            for j in 0..n {
                assert_eq!(l.omega_tilde(&l.y_gen(j)), l.y_gen(j));
            }
        }
    }

    #[test]
    fn y_basis_and_expansions() {
        let l = lp("C2~");
        let idx = l.signed_indices(2);
        for a in &idx {
            let y = l.y_any(a);
            assert_eq!(l.omega_tilde(&y), y);
            for b in &idx {
                let got = l.k_bracket_expand(a, b).unwrap();
                assert_eq!(got, l.closed_form_bracket(a, b), "{a} {b}");
            }
        }
    }

    #[test]
    fn onsager_relations() {
        let l = lp("A1~");
        let a = |m| onsager_basis(&l, m).0;
        let g = |m| onsager_basis(&l, m).1;
        for k in -3..=3i64 {
            for m in -3..=3i64 {
                assert_eq!(l.bracket(&a(k), &a(m)), g(m - k));
                assert_eq!(l.bracket(&g(k), &a(m)), a(k + m).scaled(&rat(2)).minus(&a(m - k).scaled(&rat(2))));
                assert!(l.bracket(&g(k), &g(m)).is_zero());
            }
        }
        assert!(g(0).is_zero());
        assert_eq!(g(-2), g(2).scaled(&rat(-1)));
    }

    #[test]
    fn positive_basis_heights() {
        let l = lp("A1~");
        let hs: Vec<i64> = l.basis_up_to(4).iter().map(|i| l.height(i)).collect();
        assert_eq!(hs, alloc::vec![1, 1, 2, 3, 3, 4]);
    }
}
