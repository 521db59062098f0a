//! Finite root systems by reflection closure, and positive affine roots of
//! untwisted affine type up to a height bound.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_traits::{ToPrimitive, Zero};

use crate::cartan::{CartanError, CartanKind, CartanMatrix};
use crate::exact_math::{rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("Cartan matrix is not of finite type")]
    NotFinite,
    #[error("Cartan matrix is not of untwisted affine type")]
    NotAffine,
    #[error("not a root of this root system")]
    NotARoot,
    #[error("not a positive root")]
    NotAPositiveRoot,
}

impl From<CartanError> for RootError {
    fn from(_: CartanError) -> Self {
        RootError::NotAffine
    }
}

/// Element of the root lattice in simple-root coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Root(pub Vec<i64>);

impl Root {
    pub fn zero(n: usize) -> Self {
        Root(vec![0; n])
    }

    pub fn simple(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Root(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|&c| c <= 0)
    }

    pub fn scaled(&self, k: i64) -> Root {
        Root(self.0.iter().map(|c| c * k).collect())
    }
}

impl Add for &Root {
    type Output = Root;
    fn add(self, o: &Root) -> Root {
        Root(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Root {
    type Output = Root;
    fn sub(self, o: &Root) -> Root {
        Root(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Root {
    type Output = Root;
    fn neg(self) -> Root {
        Root(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Positive roots of a finite-type matrix by closure under simple reflections
/// `s_i(β) = β - β(h_i) α_i`, sorted by height then lexicographically.
///
/// Only terminates for finite type; callers check that first.
pub(crate) fn raw_positive_roots(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut found: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut stack: Vec<Vec<i64>> = (0..n).map(|i| Root::simple(n, i).0).collect();
    found.extend(stack.iter().cloned());
    while let Some(beta) = stack.pop() {
        for i in 0..n {
            let pairing: i64 = (0..n).map(|j| beta[j] * a[i][j]).sum();
            if pairing == 0 {
                continue;
            }
            let mut img = beta.clone();
            img[i] -= pairing;
            if img.iter().all(|&c| c >= 0) && img.iter().any(|&c| c > 0) && found.insert(img.clone()) {
                stack.push(img);
            }
        }
    }
    let mut v: Vec<Vec<i64>> = found.into_iter().collect();
    v.sort_by(|x, y| x.iter().sum::<i64>().cmp(&y.iter().sum::<i64>()).then_with(|| x.cmp(y)));
    v
}

/// Identifier of a root in a [`RootSystem`]: positive roots come first in
/// their sorted order, followed by their negatives in the same order.
pub type RootId = usize;

/// Root system of a finite-type Cartan matrix with its normalized form.
#[derive(Debug, Clone)]
pub struct RootSystem {
    cartan: CartanMatrix,
    positive: Vec<Root>,
    index: BTreeMap<Root, RootId>,
    /// `((α_i, α_j))`, long roots of each component have squared length 2.
    form: Vec<Vec<Rational>>,
}

impl RootSystem {
    pub fn new(cartan: &CartanMatrix) -> Result<Self, RootError> {
        if cartan.kind() != CartanKind::Finite {
            return Err(RootError::NotFinite);
        }
        let n = cartan.n();
        let positive: Vec<Root> = raw_positive_roots(cartan.rows()).into_iter().map(Root).collect();
        let np = positive.len();
        let mut index = BTreeMap::new();
        for (k, r) in positive.iter().enumerate() {
            index.insert(r.clone(), k);
            index.insert(-r, np + k);
        }
        // (α_i,α_i) proportional to d_i, normalized per connected component
        let d = cartan.symmetrizer();
        let mut max_in_component = vec![0u64; n];
        for i in 0..n {
            let comp = component_of(cartan, i);
            max_in_component[i] = comp.iter().map(|&j| d[j]).max().unwrap();
        }
        let sq: Vec<Rational> = (0..n).map(|i| rat(2 * d[i] as i64) / rat(max_in_component[i] as i64)).collect();
        let form = (0..n)
            .map(|i| (0..n).map(|j| rat(cartan.entry(i, j)) * &sq[i] / rat(2)).collect())
            .collect();
        Ok(Self { cartan: cartan.clone(), positive, index, form })
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn rank(&self) -> usize {
        self.cartan.n()
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn num_roots(&self) -> usize {
        2 * self.positive.len()
    }

    pub fn root(&self, id: RootId) -> Root {
        let np = self.positive.len();
        if id < np {
            self.positive[id].clone()
        } else {
            -&self.positive[id - np]
        }
    }

    pub fn id(&self, r: &Root) -> Option<RootId> {
        self.index.get(r).copied()
    }

    pub fn is_root(&self, r: &Root) -> bool {
        self.index.contains_key(r)
    }

    /// The root `-α` of the root with id `id`.
    pub fn negate(&self, id: RootId) -> RootId {
        let np = self.positive.len();
        if id < np {
            id + np
        } else {
            id - np
        }
    }

    pub fn is_positive_id(&self, id: RootId) -> bool {
        id < self.positive.len()
    }

    pub fn simple_id(&self, i: usize) -> RootId {
        self.id(&Root::simple(self.rank(), i)).expect("simple root")
    }

    pub fn max_height(&self) -> i64 {
        self.positive.last().map_or(0, Root::height)
    }

    /// Highest root; the last positive root for indecomposable matrices.
    pub fn highest_root(&self) -> &Root {
        self.positive.last().expect("nonempty root system")
    }

    pub fn form(&self) -> &[Vec<Rational>] {
        &self.form
    }

    pub fn inner(&self, a: &Root, b: &Root) -> Rational {
        let n = self.rank();
        let mut s = Rational::zero();
        for i in 0..n {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..n {
                if b.0[j] != 0 {
                    s += &self.form[i][j] * rat(a.0[i] * b.0[j]);
                }
            }
        }
        s
    }

    pub fn squared_length(&self, a: &Root) -> Rational {
        self.inner(a, a)
    }

    /// `α(h_i) = Σ_j α_j a_ij`.
    pub fn pairing(&self, a: &Root, i: usize) -> i64 {
        (0..self.rank()).map(|j| a.0[j] * self.cartan.entry(i, j)).sum()
    }

    /// `true` when `α` has the maximal squared length in its component.
    pub fn is_long(&self, a: &Root) -> bool {
        let i = a.0.iter().position(|&c| c != 0).expect("nonzero root");
        let comp = component_of(&self.cartan, i);
        let max = comp.iter().map(|&j| self.form[j][j].clone()).max().unwrap();
        self.squared_length(a) == max
    }

    /// Integers `k_i(α)` with `h_α = Σ k_i(α) h_i`.
    pub fn coroot_coords(&self, a: &Root) -> Result<Vec<i64>, RootError> {
        if !self.is_root(a) {
            return Err(RootError::NotARoot);
        }
        let len = self.squared_length(a);
        Ok((0..self.rank())
            .map(|i| {
                let k = rat(a.0[i]) * &self.form[i][i] / &len;
                assert!(k.is_integer(), "coroot coordinate must be integral");
                k.to_integer().to_i64().unwrap()
            })
            .collect())
    }

    /// Largest `p ≥ 0` with `β - pα ∈ Φ`.
    pub fn string_down(&self, alpha: &Root, beta: &Root) -> usize {
        let mut p = 0;
        let mut cur = beta - alpha;
        while self.is_root(&cur) {
            p += 1;
            cur = &cur - alpha;
        }
        p
    }
}

fn component_of(c: &CartanMatrix, start: usize) -> Vec<usize> {
    let n = c.n();
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    let mut out = vec![start];
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] && c.entry(i, j) != 0 {
                seen[j] = true;
                out.push(j);
                stack.push(j);
            }
        }
    }
    out
}

pub fn enumerate_positive_roots(c: &CartanMatrix) -> Result<RootSystem, RootError> {
    RootSystem::new(c)
}

pub fn coroot_coords(rs: &RootSystem, a: &Root) -> Result<Vec<i64>, RootError> {
    rs.coroot_coords(a)
}

/// `α + kδ` with `α` a finite root or zero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AffineRoot {
    pub finite: Root,
    pub level: i64,
}

impl AffineRoot {
    pub fn new(finite: Root, level: i64) -> Self {
        Self { finite, level }
    }

    pub fn imaginary(rank: usize, level: i64) -> Self {
        Self { finite: Root::zero(rank), level }
    }

    pub fn is_real(&self) -> bool {
        !self.finite.is_zero()
    }

    pub fn is_imaginary(&self) -> bool {
        self.finite.is_zero() && self.level != 0
    }

    pub fn is_positive(&self) -> bool {
        self.level > 0 || (self.level == 0 && self.finite.is_positive())
    }

    pub fn neg(&self) -> Self {
        Self { finite: -&self.finite, level: -self.level }
    }

    pub fn multiplicity(&self, rank: usize) -> usize {
        if self.is_real() {
            1
        } else if self.level != 0 {
            rank
        } else {
            0
        }
    }
}

impl fmt::Display for AffineRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.finite.is_zero() {
            write!(f, "{}δ", self.level)
        } else if self.level == 0 {
            write!(f, "{}", self.finite)
        } else {
            write!(f, "{}{:+}δ", self.finite, self.level)
        }
    }
}

/// Finite root system of an untwisted affine matrix plus the bookkeeping to
/// move between finite and affine coordinates.
#[derive(Debug, Clone)]
pub struct AffineRootSystem {
    affine: CartanMatrix,
    finite: RootSystem,
    /// affine-matrix index of finite node `p`
    finite_nodes: Vec<usize>,
}

impl AffineRootSystem {
    pub fn new(c: &CartanMatrix) -> Result<Self, RootError> {
        if c.kind() != CartanKind::UntwistedAffine {
            return Err(RootError::NotAffine);
        }
        let (fin, finite_nodes) = c.finite_part()?;
        Ok(Self { affine: c.clone(), finite: RootSystem::new(&fin)?, finite_nodes })
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.affine
    }

    pub fn finite(&self) -> &RootSystem {
        &self.finite
    }

    pub fn finite_nodes(&self) -> &[usize] {
        &self.finite_nodes
    }

    pub fn affine_node(&self) -> usize {
        self.affine.affine_node().expect("affine")
    }

    pub fn rank(&self) -> usize {
        self.finite.rank()
    }

    /// `ht(δ) = 1 + ht(θ)`.
    pub fn delta_height(&self) -> i64 {
        1 + self.finite.highest_root().height()
    }

    /// Coordinates over the affine simple roots, indexed like the affine matrix.
    pub fn affine_coords(&self, g: &AffineRoot) -> Vec<i64> {
        let theta = self.finite.highest_root();
        let mut v = vec![0; self.affine.n()];
        v[self.affine_node()] = g.level;
        for (p, &idx) in self.finite_nodes.iter().enumerate() {
            v[idx] = g.finite.0[p] + g.level * theta.0[p];
        }
        v
    }

    pub fn height(&self, g: &AffineRoot) -> i64 {
        g.level * self.delta_height() + g.finite.height()
    }

    /// The affine simple root for the affine-matrix index `i`.
    pub fn simple_root(&self, i: usize) -> AffineRoot {
        let r = self.rank();
        if i == self.affine_node() {
            AffineRoot::new(-self.finite.highest_root(), 1)
        } else {
            let p = self.finite_nodes.iter().position(|&x| x == i).expect("node index");
            AffineRoot::new(Root::simple(r, p), 0)
        }
    }

    pub fn is_root(&self, g: &AffineRoot) -> bool {
        if g.finite.is_zero() {
            g.level != 0
        } else {
            self.finite.is_root(&g.finite)
        }
    }

    /// All positive affine roots of height at most `h`, with multiplicities,
    /// sorted by height.
    pub fn positive_roots_up_to(&self, h: i64) -> Vec<(AffineRoot, usize)> {
        let r = self.rank();
        let hd = self.delta_height();
        let ht_theta = self.finite.highest_root().height();
        let mut out = Vec::new();
        let mut level = 0;
        while level * hd - ht_theta <= h {
            if level == 0 {
                for a in self.finite.positive_roots() {
                    out.push(AffineRoot::new(a.clone(), 0));
                }
            } else {
                out.push(AffineRoot::imaginary(r, level));
                for a in self.finite.positive_roots() {
                    out.push(AffineRoot::new(a.clone(), level));
                    out.push(AffineRoot::new(-a, level));
                }
            }
            level += 1;
        }
        let mut out: Vec<(AffineRoot, usize)> = out
            .into_iter()
            .filter(|g| self.height(g) <= h)
            .map(|g| {
                let m = g.multiplicity(r);
                (g, m)
            })
            .collect();
        out.sort_by(|(x, _), (y, _)| self.height(x).cmp(&self.height(y)).then_with(|| x.cmp(y)));
        out
    }
}

pub fn affine_positive_roots(c: &CartanMatrix, h: i64) -> Result<Vec<(AffineRoot, usize)>, RootError> {
    Ok(AffineRootSystem::new(c)?.positive_roots_up_to(h))
}
