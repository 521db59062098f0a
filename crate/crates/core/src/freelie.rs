//! Free Lie algebra over the rationals in the Lyndon basis.
//!
//! Letters are generator indices `0..n` ordered by index. A Lyndon word `w`
//! stands for its standard bracketing `P(w) = [P(u), P(v)]`, where `v` is the
//! longest proper Lyndon suffix of `w`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::exact_math::{rat, Rational};

pub type Word = Vec<usize>;

/// `true` when `w` is strictly smaller than each of its proper suffixes.
pub fn is_lyndon(w: &[usize]) -> bool {
    !w.is_empty() && (1..w.len()).all(|k| w < &w[k..])
}

/// Standard factorization `w = uv` with `v` the longest proper Lyndon suffix.
pub fn standard_factorization(w: &[usize]) -> Option<(&[usize], &[usize])> {
    if w.len() < 2 {
        return None;
    }
    (1..w.len()).find(|&k| is_lyndon(&w[k..])).map(|k| w.split_at(k))
}

/// All Lyndon words of length exactly `d` over `n` letters, in lexicographic
/// order (Duval's generation algorithm).
pub fn lyndon_words(n: usize, d: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if n == 0 || d == 0 {
        return out;
    }
    let mut w: Vec<usize> = vec![0];
    loop {
        if w.len() == d {
            out.push(w.clone());
        }
        // extend periodically to length d, then increment the last letter
        let m = w.len();
        while w.len() < d {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last == n - 1 {
                w.pop();
            } else {
                break;
            }
        }
        let Some(last) = w.last_mut() else {
            break;
        };
        *last += 1;
    }
    out
}

fn mobius(mut k: usize) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= k {
        if k % p == 0 {
            k /= p;
            if k % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if k > 1 {
        result = -result;
    }
    result
}

/// Dimension of the degree-`d` part of the free Lie algebra on `n` generators:
/// `(1/d) Σ_{e | d} μ(e) n^{d/e}`.
pub fn witt_dimension(n: usize, d: usize) -> usize {
    assert!(n >= 1 && d >= 1);
    let mut total: i128 = 0;
    for e in (1..=d).filter(|e| d % e == 0) {
        total += mobius(e) as i128 * (n as i128).pow((d / e) as u32);
    }
    (total / d as i128) as usize
}

/// Rational combination of Lyndon basis elements.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct FreeLieElement {
    terms: BTreeMap<Word, Rational>,
}

impl FreeLieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(w: Word) -> Self {
        debug_assert!(is_lyndon(&w));
        let mut terms = BTreeMap::new();
        terms.insert(w, Rational::one());
        Self { terms }
    }

    pub fn generator(i: usize) -> Self {
        Self::basis(vec![i])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[usize]) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x * c);
        }
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

    /// Homogeneous component of word length `d`.
    pub fn component(&self, d: usize) -> Self {
        Self { terms: self.terms.iter().filter(|(w, _)| w.len() == d).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Formats with generator labels, e.g. `[B1,[B1,B2]] + 4[B1,B2]`.
    pub fn display_with(&self, labels: &[usize]) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let mut s = String::new();
        // highest degree first, as the relations are usually written
        let mut items: Vec<(&Word, &Rational)> = self.terms.iter().collect();
        items.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(b.0)));
        for (k, (w, c)) in items.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                s.push_str(&alloc::format!("{mag}"));
                s.push('·');
            }
            s.push_str(&standard_bracketing(w).display_with(labels));
        }
        s
    }
}

impl fmt::Debug for FreeLieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<usize> = (1..=64).collect();
        f.write_str(&self.display_with(&labels))
    }
}

/// Bracket expression tree; leaves hold generator labels as written (`B3` is `Leaf(3)`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BracketExpr {
    Leaf(usize),
    Node(Box<BracketExpr>, Box<BracketExpr>),
}

impl BracketExpr {
    pub fn node(l: BracketExpr, r: BracketExpr) -> Self {
        BracketExpr::Node(Box::new(l), Box::new(r))
    }

    pub fn degree(&self) -> usize {
        match self {
            BracketExpr::Leaf(_) => 1,
            BracketExpr::Node(l, r) => l.degree() + r.degree(),
        }
    }

    /// Right-nested bracket `[x_1,[x_2,…[x_{k-1},x_k]…]]`.
    pub fn right_nested(leaves: &[usize]) -> Self {
        let (&last, rest) = leaves.split_last().expect("nonempty word");
        rest.iter().rev().fold(BracketExpr::Leaf(last), |acc, &x| BracketExpr::node(BracketExpr::Leaf(x), acc))
    }

    /// Replaces every leaf label through `f`.
    pub fn relabel(&self, f: &impl Fn(usize) -> usize) -> Self {
        match self {
            BracketExpr::Leaf(x) => BracketExpr::Leaf(f(*x)),
            BracketExpr::Node(l, r) => BracketExpr::node(l.relabel(f), r.relabel(f)),
        }
    }

    pub fn display_with(&self, labels: &[usize]) -> String {
        match self {
            BracketExpr::Leaf(x) => alloc::format!("B{}", labels.get(*x).copied().unwrap_or(*x)),
            BracketExpr::Node(l, r) => alloc::format!("[{},{}]", l.display_with(labels), r.display_with(labels)),
        }
    }
}

impl fmt::Display for BracketExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketExpr::Leaf(x) => write!(f, "B{x}"),
            BracketExpr::Node(l, r) => write!(f, "[{l},{r}]"),
        }
    }
}

/// Standard bracketing of a Lyndon word, leaves holding letter indices.
pub fn standard_bracketing(w: &[usize]) -> BracketExpr {
    match standard_factorization(w) {
        None => BracketExpr::Leaf(w[0]),
        Some((u, v)) => BracketExpr::node(standard_bracketing(u), standard_bracketing(v)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: &'static str },
    #[error("unbalanced bracket at byte {offset}")]
    UnbalancedBracket { offset: usize },
}

/// Parses `expr := "B" nat | "[" expr "," expr "]"` with optional whitespace.
pub fn parse_bracket(text: &str) -> Result<BracketExpr, ParseError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(e),
        Some(b']') => Err(ParseError::UnbalancedBracket { offset: p.pos }),
        Some(_) => Err(ParseError::Syntax { offset: p.pos, message: "unexpected trailing input" }),
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<BracketExpr, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(b'B') => {
                self.pos += 1;
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(ParseError::Syntax { offset: start, message: "expected generator number after `B`" });
                }
                let digits = core::str::from_utf8(&self.s[start..self.pos]).unwrap();
                digits
                    .parse()
                    .map(BracketExpr::Leaf)
                    .map_err(|_| ParseError::Syntax { offset: start, message: "generator number too large" })
            }
            Some(b'[') => {
                let open = self.pos;
                self.pos += 1;
                let l = self.expr()?;
                self.skip_ws();
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    None => return Err(ParseError::UnbalancedBracket { offset: open }),
                    Some(_) => return Err(ParseError::Syntax { offset: self.pos, message: "expected `,`" }),
                }
                let r = self.expr()?;
                self.skip_ws();
                match self.peek() {
                    Some(b']') => self.pos += 1,
                    None => return Err(ParseError::UnbalancedBracket { offset: open }),
                    Some(_) => return Err(ParseError::Syntax { offset: self.pos, message: "expected `]`" }),
                }
                Ok(BracketExpr::node(l, r))
            }
            None => Err(ParseError::Syntax { offset: self.pos, message: "unexpected end of input" }),
            Some(b']') => Err(ParseError::UnbalancedBracket { offset: self.pos }),
            Some(_) => Err(ParseError::Syntax { offset: self.pos, message: "expected `B` or `[`" }),
        }
    }
}

/// Free Lie algebra on `n` generators with a memo of basis brackets.
///
/// The memo uses a `RefCell`, so an instance belongs to one thread.
pub struct FreeLieAlgebra {
    n: usize,
    memo: RefCell<BTreeMap<(Word, Word), FreeLieElement>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("generator letter {0} out of range")]
pub struct LetterOutOfRange(pub usize);

impl FreeLieAlgebra {
    pub fn new(n: usize) -> Self {
        Self { n, memo: RefCell::new(BTreeMap::new()) }
    }

    pub fn generators(&self) -> usize {
        self.n
    }

    pub fn generator(&self, i: usize) -> FreeLieElement {
        assert!(i < self.n, "generator index out of range");
        FreeLieElement::generator(i)
    }

    /// `[P(u), P(v)]` for Lyndon words `u`, `v`, in the Lyndon basis.
    pub fn bracket_words(&self, u: &[usize], v: &[usize]) -> FreeLieElement {
        if u == v {
            return FreeLieElement::zero();
        }
        if u > v {
            return self.bracket_words(v, u).scaled(&-Rational::one());
        }
        let key = (u.to_vec(), v.to_vec());
        if let Some(hit) = self.memo.borrow().get(&key) {
            return hit.clone();
        }
        let result = match standard_factorization(u) {
            Some((u1, u2)) if u2 < v => {
                // [[P(u1),P(u2)],P(v)] = [P(u1),[P(u2),P(v)]] - [P(u2),[P(u1),P(v)]]
                let a = self.bracket_word_elem(u1, &self.bracket_words(u2, v));
                let b = self.bracket_word_elem(u2, &self.bracket_words(u1, v));
                a.minus(&b)
            }
            _ => {
                let mut w = u.to_vec();
                w.extend_from_slice(v);
                FreeLieElement::basis(w)
            }
        };
        self.memo.borrow_mut().insert(key, result.clone());
        result
    }

    fn bracket_word_elem(&self, u: &[usize], x: &FreeLieElement) -> FreeLieElement {
        let mut out = FreeLieElement::zero();
        for (w, c) in x.terms() {
            out.add_scaled(&self.bracket_words(u, w), c);
        }
        out
    }

    /// Bilinear bracket, result in Lyndon normal form.
    pub fn bracket(&self, x: &FreeLieElement, y: &FreeLieElement) -> FreeLieElement {
        let mut out = FreeLieElement::zero();
        for (u, a) in x.terms() {
            for (v, b) in y.terms() {
                out.add_scaled(&self.bracket_words(u, v), &(a * b));
            }
        }
        out
    }

    /// `(ad x)^s y`.
    pub fn ad_power(&self, x: &FreeLieElement, s: usize, y: &FreeLieElement) -> FreeLieElement {
        (0..s).fold(y.clone(), |acc, _| self.bracket(x, &acc))
    }

    /// Rewrites a bracket expression whose leaves are letters `0..n`.
    pub fn to_lyndon(&self, e: &BracketExpr) -> Result<FreeLieElement, LetterOutOfRange> {
        match e {
            BracketExpr::Leaf(i) if *i < self.n => Ok(FreeLieElement::generator(*i)),
            BracketExpr::Leaf(i) => Err(LetterOutOfRange(*i)),
            BracketExpr::Node(l, r) => Ok(self.bracket(&self.to_lyndon(l)?, &self.to_lyndon(r)?)),
        }
    }

    /// Rewrites an expression written with labels, `letter_of` mapping each
    /// label to a letter.
    pub fn to_lyndon_labelled(
        &self,
        e: &BracketExpr,
        letter_of: &impl Fn(usize) -> Option<usize>,
    ) -> Result<FreeLieElement, LetterOutOfRange> {
        match e {
            BracketExpr::Leaf(l) => match letter_of(*l) {
                Some(i) if i < self.n => Ok(FreeLieElement::generator(i)),
                _ => Err(LetterOutOfRange(*l)),
            },
            BracketExpr::Node(a, b) => {
                Ok(self.bracket(&self.to_lyndon_labelled(a, letter_of)?, &self.to_lyndon_labelled(b, letter_of)?))
            }
        }
    }

    /// Integer multiple of a generator, for assembling relations.
    pub fn int_multiple(&self, c: i64, x: &FreeLieElement) -> FreeLieElement {
        x.scaled(&rat(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// Noncommutative polynomial: word -> coefficient. Independent oracle for
    /// Lie expressions via `[a,b] = ab - ba`.
    type Poly = BTreeMap<Vec<usize>, Rational>;

    fn poly_of_expr(e: &BracketExpr) -> Poly {
        match e {
            BracketExpr::Leaf(i) => {
                let mut p = Poly::new();
                p.insert(vec![*i], Rational::one());
                p
            }
            BracketExpr::Node(l, r) => {
                let a = poly_of_expr(l);
                let b = poly_of_expr(r);
                let mut out = Poly::new();
                for (x, cx) in &a {
                    for (y, cy) in &b {
                        let mut xy = x.clone();
                        xy.extend(y);
                        let mut yx = y.clone();
                        yx.extend(x);
                        *out.entry(xy).or_insert_with(Rational::zero) += cx * cy;
                        *out.entry(yx).or_insert_with(Rational::zero) -= cx * cy;
                    }
                }
                out.retain(|_, c| !c.is_zero());
                out
            }
        }
    }

    fn poly_of_elem(x: &FreeLieElement) -> Poly {
        let mut out = Poly::new();
        for (w, c) in x.terms() {
            for (m, d) in poly_of_expr(&standard_bracketing(w)) {
                *out.entry(m).or_insert_with(Rational::zero) += c * d;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    #[test]
    fn lyndon_word_basics() {
        assert!(is_lyndon(&[0, 1]));
        assert!(!is_lyndon(&[1, 0]));
        assert!(!is_lyndon(&[0, 0]));
        assert!(is_lyndon(&[0, 0, 1, 0, 1]));
        let w = [0, 0, 1, 0, 1];
        assert_eq!(standard_factorization(&w), Some((&w[..3], &w[3..])));
        let w = [0, 1, 1];
        assert_eq!(standard_factorization(&w), Some((&w[..2], &w[2..])));
        let w = [0, 1, 0, 1, 1];
        assert_eq!(standard_factorization(&w), Some((&w[..2], &w[2..])));
    }

    #[test]
    fn lyndon_counts_match_witt() {
        for n in 1..=3 {
            for d in 1..=6 {
                let ws = lyndon_words(n, d);
                assert_eq!(ws.len(), witt_dimension(n, d), "n={n} d={d}");
                assert!(ws.iter().all(|w| is_lyndon(w) && w.len() == d));
            }
        }
    }

    #[test]
    fn witt_examples() {
        assert_eq!(witt_dimension(2, 1), 2);
        assert_eq!(witt_dimension(2, 3), 2);
        assert_eq!(witt_dimension(3, 2), 3);
        let expected = [2, 1, 2, 3, 6];
        for (d, &e) in expected.iter().enumerate() {
            assert_eq!(witt_dimension(2, d + 1), e);
        }
    }

    #[test]
    fn parser_examples() {
        assert_eq!(
            parse_bracket("[B1,[B1,B2]]").unwrap(),
            BracketExpr::node(BracketExpr::Leaf(1), BracketExpr::node(BracketExpr::Leaf(1), BracketExpr::Leaf(2)))
        );
        assert_eq!(parse_bracket(" B3 ").unwrap(), BracketExpr::Leaf(3));
        assert!(matches!(parse_bracket("[B1 B2]"), Err(ParseError::Syntax { offset: 4, .. })));
        assert!(matches!(parse_bracket("[B1,B2"), Err(ParseError::UnbalancedBracket { offset: 0 })));
        assert!(matches!(parse_bracket("[B1,B2]]"), Err(ParseError::UnbalancedBracket { offset: 7 })));
        assert!(matches!(parse_bracket("B"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_bracket(""), Err(ParseError::Syntax { .. })));
        let e = parse_bracket("[ [B1 ,B2] , B3 ]").unwrap();
        assert_eq!(alloc::format!("{e}"), "[[B1,B2],B3]");
    }

    #[test]
    fn rewriting_examples() {
        let f = FreeLieAlgebra::new(3);
        let b12 = f.to_lyndon(&BracketExpr::node(BracketExpr::Leaf(0), BracketExpr::Leaf(1))).unwrap();
        assert_eq!(b12, FreeLieElement::basis(vec![0, 1]));
        let b21 = f.to_lyndon(&BracketExpr::node(BracketExpr::Leaf(1), BracketExpr::Leaf(0))).unwrap();
        assert_eq!(b21, FreeLieElement::basis(vec![0, 1]).scaled(&rat(-1)));
        let x = f.generator(0);
        assert!(f.bracket(&x, &x).is_zero());
        assert!(f.to_lyndon(&BracketExpr::Leaf(3)).is_err());
    }

    #[test]
    fn jacobi_on_generator_triples() {
        let f = FreeLieAlgebra::new(3);
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    let (gx, gy, gz) = (f.generator(x), f.generator(y), f.generator(z));
                    let s = f
                        .bracket(&gx, &f.bracket(&gy, &gz))
                        .plus(&f.bracket(&gy, &f.bracket(&gz, &gx)))
                        .plus(&f.bracket(&gz, &f.bracket(&gx, &gy)));
                    assert!(s.is_zero());
                }
            }
        }
    }

    #[test]
    fn bracketings_of_two_generators_span_witt_dimension() {
        // all right-nested words span the degree-d part
        let f = FreeLieAlgebra::new(2);
        for d in 1..=5usize {
            let mut ech = crate::exact_math::RowEchelon::<Rational>::new();
            let basis = lyndon_words(2, d);
            for code in 0..(1usize << d) {
                let leaves: Vec<usize> = (0..d).map(|k| code >> k & 1).collect();
                let x = f.to_lyndon(&BracketExpr::right_nested(&leaves)).unwrap();
                let v = x
                    .terms()
                    .map(|(w, c)| (basis.iter().position(|b| b == w).unwrap(), c.clone()))
                    .collect();
                ech.insert(v);
            }
            assert_eq!(ech.rank(), witt_dimension(2, d));
        }
    }

    #[test]
    fn normal_form_agrees_with_associative_expansion() {
        let f = FreeLieAlgebra::new(3);
        let exprs = [
            "[B0,[B1,B2]]",
            "[[B0,B1],B2]",
            "[[B2,B1],[B0,B1]]",
            "[[B0,[B0,B1]],[B1,[B0,B1]]]",
            "[[[B2,B0],B1],[B0,[B2,B1]]]",
        ];
        for s in exprs {
            let e = parse_bracket(s).unwrap();
            let x = f.to_lyndon(&e).unwrap();
            assert_eq!(poly_of_elem(&x), poly_of_expr(&e), "{s}");
            assert!(x.terms().all(|(w, _)| w.len() == e.degree()));
        }
    }

    #[test]
    fn display_uses_labels() {
        let f = FreeLieAlgebra::new(2);
        let x = f.to_lyndon(&parse_bracket("[B0,[B0,[B0,B1]]]").unwrap()).unwrap();
        let y = x.plus(&f.to_lyndon(&parse_bracket("[B0,B1]").unwrap()).unwrap().scaled(&rat(4)));
        assert_eq!(y.display_with(&[1, 2]), "[B1,[B1,[B1,B2]]] + 4·[B1,B2]");
    }
}
