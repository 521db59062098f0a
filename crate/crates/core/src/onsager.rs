//! The generalized Onsager algebra `L(A)` through its evaluation map `ψ`.
//!
//! `L(A)` is never built as a quotient. Words in the generators `B_i` are
//! evaluated at `Y_i` inside the fix-point algebra (finite or loop
//! realization), and every check is an exact rank or equality computation
//! there.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::affine_loop::{AffineFixIndex, LoopAlgebra, LoopElement};
use crate::cartan::{CartanKind, CartanMatrix};
use crate::chevalley::{ChevElement, StructureTable};
use crate::exact_math::{Rational, RowEchelon, SparseVec};
use crate::freelie::{standard_factorization, BracketExpr, FreeLieAlgebra, FreeLieElement, Word};
use crate::roots::RootId;
use crate::serre_coeffs::serre_relation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OnsagerError {
    #[error("generator B{0} is out of range")]
    IndexError(usize),
    #[error("only finite and untwisted affine Cartan matrices have a realization")]
    Unsupported,
    #[error("element is not fixed by the Chevalley involution")]
    NotFixed,
}

/// Where `ψ` takes its values.
#[derive(Debug, Clone)]
pub enum Realization {
    Finite(StructureTable),
    AffineLoop(LoopAlgebra),
}

/// Value of `ψ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Element {
    Chev(ChevElement),
    Loop(LoopElement),
}

impl Element {
    pub fn is_zero(&self) -> bool {
        match self {
            Element::Chev(x) => x.is_zero(),
            Element::Loop(x) => x.is_zero(),
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: &Rational) {
        match (self, other) {
            (Element::Chev(x), Element::Chev(y)) => x.add_scaled(y, c),
            (Element::Loop(x), Element::Loop(y)) => x.add_scaled(y, c),
            _ => panic!("elements from different realizations"),
        }
    }
}

/// Index of a fix-point basis vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum FixIndex {
    Finite(RootId),
    Affine(AffineFixIndex),
}

impl Realization {
    /// The standard realization: Chevalley table for finite type, loop
    /// algebra for untwisted affine type.
    pub fn for_cartan(c: &CartanMatrix) -> Result<Self, OnsagerError> {
        match c.kind() {
            CartanKind::Finite => Ok(Realization::Finite(StructureTable::build(c).map_err(|_| OnsagerError::Unsupported)?)),
            CartanKind::UntwistedAffine => Ok(Realization::AffineLoop(LoopAlgebra::new(c).map_err(|_| OnsagerError::Unsupported)?)),
            CartanKind::Other => Err(OnsagerError::Unsupported),
        }
    }

    pub fn cartan(&self) -> &CartanMatrix {
        match self {
            Realization::Finite(t) => t.cartan(),
            Realization::AffineLoop(l) => l.cartan(),
        }
    }

    pub fn n_generators(&self) -> usize {
        self.cartan().n()
    }

    pub fn zero(&self) -> Element {
        match self {
            Realization::Finite(_) => Element::Chev(ChevElement::zero()),
            Realization::AffineLoop(_) => Element::Loop(LoopElement::zero()),
        }
    }

    /// `Y_i` for the 0-based matrix index `i`.
    pub fn generator(&self, i: usize) -> Element {
        match self {
            Realization::Finite(t) => Element::Chev(t.y_gen(i)),
            Realization::AffineLoop(l) => Element::Loop(l.y_gen(i)),
        }
    }

    pub fn bracket(&self, x: &Element, y: &Element) -> Element {
        match (self, x, y) {
            (Realization::Finite(t), Element::Chev(a), Element::Chev(b)) => Element::Chev(t.bracket(a, b)),
            (Realization::AffineLoop(l), Element::Loop(a), Element::Loop(b)) => Element::Loop(l.bracket(a, b)),
            _ => panic!("element does not belong to this realization"),
        }
    }

    /// `y_γ` for a positive index.
    pub fn y(&self, idx: &FixIndex) -> Element {
        match (self, idx) {
            (Realization::Finite(t), FixIndex::Finite(a)) => Element::Chev(t.y(*a)),
            (Realization::AffineLoop(l), FixIndex::Affine(a)) => Element::Loop(l.y_any(a)),
            _ => panic!("index does not belong to this realization"),
        }
    }

    /// Height of the positive root behind a basis index.
    pub fn height(&self, idx: &FixIndex) -> i64 {
        match (self, idx) {
            (Realization::Finite(t), FixIndex::Finite(a)) => t.root_system().root(*a).height(),
            (Realization::AffineLoop(l), FixIndex::Affine(a)) => l.height(a),
            _ => panic!("index does not belong to this realization"),
        }
    }

    /// The fix-point basis up to height `h`, sorted by height.
    pub fn basis_up_to(&self, h: i64) -> Vec<FixIndex> {
        match self {
            Realization::Finite(t) => {
                let rs = t.root_system();
                (0..rs.num_positive()).filter(|&a| rs.root(a).height() <= h).map(FixIndex::Finite).collect()
            }
            Realization::AffineLoop(l) => l.basis_up_to(h).into_iter().map(FixIndex::Affine).collect(),
        }
    }

    /// `Σ_{ht(γ)=j} m(γ)` for `j = 1..=jmax` (index 0 unused).
    pub fn graded_counts(&self, jmax: usize) -> Vec<usize> {
        let mut out = vec![0; jmax + 1];
        for idx in self.basis_up_to(jmax as i64) {
            out[self.height(&idx) as usize] += 1;
        }
        out
    }

    /// Largest height that carries basis vectors, if bounded.
    pub fn max_height(&self) -> Option<i64> {
        match self {
            Realization::Finite(t) => Some(t.root_system().max_height()),
            Realization::AffineLoop(_) => None,
        }
    }

    pub fn y_coords(&self, x: &Element) -> Result<BTreeMap<FixIndex, Rational>, OnsagerError> {
        match (self, x) {
            (Realization::Finite(t), Element::Chev(a)) => Ok(t
                .y_coords(a)
                .map_err(|_| OnsagerError::NotFixed)?
                .into_iter()
                .map(|(k, v)| (FixIndex::Finite(k), v))
                .collect()),
            (Realization::AffineLoop(l), Element::Loop(a)) => Ok(l
                .y_coords(a)
                .map_err(|_| OnsagerError::NotFixed)?
                .into_iter()
                .map(|(k, v)| (FixIndex::Affine(k), v))
                .collect()),
            _ => panic!("element does not belong to this realization"),
        }
    }

    pub fn describe_index(&self, idx: &FixIndex) -> String {
        match (self, idx) {
            (Realization::Finite(t), FixIndex::Finite(a)) => format!("y({})", t.root_system().root(*a)),
            (Realization::AffineLoop(_), FixIndex::Affine(a)) => format!("{a}"),
            _ => String::from("?"),
        }
    }

    /// Human-readable y-basis expansion, e.g. `-1·y(α2)`.
    pub fn describe(&self, x: &Element) -> Result<String, OnsagerError> {
        let coords = self.y_coords(x)?;
        if coords.is_empty() {
            return Ok(String::from("0"));
        }
        let parts: Vec<String> = coords.iter().map(|(k, c)| format!("{c}·{}", self.describe_index(k))).collect();
        Ok(parts.join(" + "))
    }
}

/// One inhomogeneous Serre relation per ordered pair `i ≠ j`.
pub fn relations(c: &CartanMatrix) -> Vec<(usize, usize, FreeLieElement)> {
    let f = FreeLieAlgebra::new(c.n());
    let mut out = Vec::new();
    for i in 0..c.n() {
        for j in 0..c.n() {
            if i != j {
                out.push((i, j, serre_relation(&f, c, i, j).expect("indices in range")));
            }
        }
    }
    out
}

/// `ψ` on a bracket expression; leaves carry labels (`B0` is the affine node).
pub fn psi_eval_expr(rz: &Realization, e: &BracketExpr) -> Result<Element, OnsagerError> {
    match e {
        BracketExpr::Leaf(label) => {
            let i = rz.cartan().index_of_label(*label).ok_or(OnsagerError::IndexError(*label))?;
            Ok(rz.generator(i))
        }
        BracketExpr::Node(l, r) => Ok(rz.bracket(&psi_eval_expr(rz, l)?, &psi_eval_expr(rz, r)?)),
    }
}

/// `ψ` on a Lyndon-basis element; letters are 0-based matrix indices.
pub fn psi_eval(rz: &Realization, x: &FreeLieElement) -> Result<Element, OnsagerError> {
    let mut memo: BTreeMap<Word, Element> = BTreeMap::new();
    let mut out = rz.zero();
    for (w, c) in x.terms() {
        let v = eval_word(rz, w, &mut memo)?;
        out.add_scaled(&v, c);
    }
    Ok(out)
}

fn eval_word(rz: &Realization, w: &[usize], memo: &mut BTreeMap<Word, Element>) -> Result<Element, OnsagerError> {
    if let Some(v) = memo.get(w) {
        return Ok(v.clone());
    }
    let v = if w.len() == 1 {
        if w[0] >= rz.n_generators() {
            return Err(OnsagerError::IndexError(w[0]));
        }
        rz.generator(w[0])
    } else {
        let (u, v) = standard_factorization(w).expect("Lyndon word of length ≥ 2");
        let a = eval_word(rz, u, memo)?;
        let b = eval_word(rz, v, memo)?;
        rz.bracket(&a, &b)
    };
    memo.insert(w.to_vec(), v.clone());
    Ok(v)
}

/// Assigns consecutive coordinates to fix-point indices for rank computations.
#[derive(Default)]
struct Interner {
    ids: BTreeMap<FixIndex, usize>,
}

impl Interner {
    fn vector(&mut self, coords: BTreeMap<FixIndex, Rational>) -> SparseVec<Rational> {
        let mut v = SparseVec::new();
        for (k, c) in coords {
            let n = self.ids.len();
            let id = *self.ids.entry(k).or_insert(n);
            if !c.is_zero() {
                v.insert(id, c);
            }
        }
        v
    }
}

/// Dimensions of `L_j / L_{j-1}` next to `Σ_{ht=j} m(γ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationReport {
    pub jmax: usize,
    /// `dims[j-1] = dim L_j - dim L_{j-1}`
    pub dims: Vec<usize>,
    pub expected: Vec<usize>,
}

impl FiltrationReport {
    pub fn matches(&self) -> bool {
        self.dims == self.expected
    }
}

fn report(rz: &Realization, jmax: usize, dims: Vec<usize>) -> FiltrationReport {
    let counts = rz.graded_counts(jmax);
    FiltrationReport { jmax, dims, expected: counts[1..].to_vec() }
}

/// Filtration dimensions from right-nested words `[B_{i_1},[…,B_{i_k}]]`.
///
/// Words of length `j` span `ad(Y)` applied to the span of length `j-1`, so
/// each level is carried by a basis of its own span.
pub fn filtration_dims(rz: &Realization, jmax: usize) -> FiltrationReport {
    assert!(jmax >= 1);
    let n = rz.n_generators();
    let gens: Vec<Element> = (0..n).map(|i| rz.generator(i)).collect();
    let mut interner = Interner::default();
    let mut total: RowEchelon<Rational> = RowEchelon::new();
    let mut dims = Vec::with_capacity(jmax);
    let mut layer: Vec<Element> = Vec::new();
    {
        let mut level: RowEchelon<Rational> = RowEchelon::new();
        for g in &gens {
            let v = interner.vector(rz.y_coords(g).expect("generators are fixed"));
            if level.insert(v.clone()) {
                layer.push(g.clone());
            }
            total.insert(v);
        }
        dims.push(total.rank());
    }
    for _ in 2..=jmax {
        let before = total.rank();
        let mut level: RowEchelon<Rational> = RowEchelon::new();
        let mut next = Vec::new();
        for g in &gens {
            for x in &layer {
                let b = rz.bracket(g, x);
                let v = interner.vector(rz.y_coords(&b).expect("brackets of fixed elements are fixed"));
                if level.insert(v.clone()) {
                    next.push(b);
                }
                total.insert(v);
            }
        }
        dims.push(total.rank() - before);
        layer = next;
    }
    report(rz, jmax, dims)
}

/// Filtration dimensions from all bracketings: level `j` is spanned by
/// `[u, v]` with `u`, `v` of levels `a + b = j`.
pub fn filtration_dims_all_words(rz: &Realization, jmax: usize) -> FiltrationReport {
    assert!(jmax >= 1);
    let n = rz.n_generators();
    let mut interner = Interner::default();
    let mut total: RowEchelon<Rational> = RowEchelon::new();
    let mut levels: Vec<Vec<Element>> = vec![Vec::new()];
    let mut dims = Vec::with_capacity(jmax);
    for j in 1..=jmax {
        let before = total.rank();
        let mut level: RowEchelon<Rational> = RowEchelon::new();
        let mut cur = Vec::new();
        let candidates: Vec<Element> = if j == 1 {
            (0..n).map(|i| rz.generator(i)).collect()
        } else {
            let mut c = Vec::new();
            for a in 1..j {
                for u in &levels[a] {
                    for v in &levels[j - a] {
                        c.push(rz.bracket(u, v));
                    }
                }
            }
            c
        };
        for b in candidates {
            let v = interner.vector(rz.y_coords(&b).expect("fixed"));
            if level.insert(v.clone()) {
                cur.push(b);
            }
            total.insert(v);
        }
        dims.push(total.rank() - before);
        levels.push(cur);
    }
    report(rz, jmax, dims)
}

/// Rank of the span of evaluated words of length `≤ h` against the number of
/// fix-point basis vectors of height `≤ h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationReport {
    pub height: usize,
    pub rank: usize,
    pub expected: usize,
}

impl GenerationReport {
    pub fn pass(&self) -> bool {
        self.rank == self.expected
    }
}

pub fn generation_check(rz: &Realization, h: usize) -> GenerationReport {
    let f = filtration_dims(rz, h);
    GenerationReport { height: h, rank: f.dims.iter().sum(), expected: f.expected.iter().sum() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::preset;
    use crate::freelie::parse_bracket;

    fn rz(name: &str) -> Realization {
        Realization::for_cartan(&preset(name).unwrap()).unwrap()
    }

    #[test]
    fn relations_vanish() {
        for name in ["A1", "A2", "B2", "C2", "G2", "A3", "A1~", "A2~", "C2~"] {
            let c = preset(name).unwrap();
            let r = rz(name);
            let rels = relations(&c);
            assert_eq!(rels.len(), c.n() * (c.n() - 1));
            for (i, j, rel) in rels {
                assert!(psi_eval(&r, &rel).unwrap().is_zero(), "{name} ({i},{j})");
            }
        }
    }

    #[test]
    fn eval_examples() {
        let r = rz("A2");
        let x = psi_eval_expr(&r, &parse_bracket("[B1,[B1,B2]]").unwrap()).unwrap();
        let y2 = psi_eval_expr(&r, &parse_bracket("B2").unwrap()).unwrap();
        let mut s = x.clone();
        s.add_scaled(&y2, &crate::exact_math::rat(1));
        assert!(s.is_zero());
        assert_eq!(psi_eval_expr(&r, &parse_bracket("B3").unwrap()), Err(OnsagerError::IndexError(3)));
        let aff = rz("A1~");
        assert!(psi_eval_expr(&aff, &parse_bracket("[B0,B1]").unwrap()).is_ok());
    }

    #[test]
    fn small_filtrations() {
        assert_eq!(filtration_dims(&rz("A2"), 3).dims, vec![2, 1, 0]);
        assert_eq!(filtration_dims(&rz("C2"), 4).dims, vec![2, 1, 1, 0]);
        let a = filtration_dims(&rz("A1~"), 4);
        assert_eq!(a.dims, vec![2, 1, 2, 1]);
        assert!(a.matches());
        for name in ["A2", "C2"] {
            assert_eq!(filtration_dims_all_words(&rz(name), 4), filtration_dims(&rz(name), 4));
        }
    }

    #[test]
    fn generation() {
        let g = generation_check(&rz("A1~"), 4);
        assert_eq!((g.rank, g.expected), (6, 6));
        assert_eq!(generation_check(&rz("G2"), 5).rank, 6);
        assert_eq!(generation_check(&rz("C2~"), 1).rank, 3);
    }
}
