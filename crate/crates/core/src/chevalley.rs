//! Finite-type Kac-Moody algebras in a Chevalley basis.
//!
//! Structure constants come from the extraspecial-pair method: positive roots
//! are ordered by (height, lex), each non-simple positive root `ξ` gets its
//! minimal decomposition `ξ = α + β` with `N_{α,β} = p + 1`, and every other
//! constant follows from the standard identities between the `N`'s.
//!
//! The module also carries explicit matrix realizations of `sl_{r+1}` and
//! `sp_r`, and the isomorphism `η` from the fix-point algebra of `sp_r` onto
//! `gl_r`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::cartan::{preset, CartanKind, CartanMatrix};
use crate::exact_math::{rat, rational_to_i64, ExactMatrix, GaussianRational, Rational, RowEchelon};
use crate::roots::{Root, RootError, RootId, RootSystem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChevalleyError {
    #[error("Cartan matrix is not of finite type")]
    NotFinite,
    #[error("not a positive root")]
    NotAPositiveRoot,
    #[error("element is not fixed by the Chevalley involution")]
    NotFixed,
    #[error("inconsistent matrix realization: {0}")]
    Realization(String),
}

impl From<RootError> for ChevalleyError {
    fn from(e: RootError) -> Self {
        match e {
            RootError::NotAPositiveRoot => ChevalleyError::NotAPositiveRoot,
            _ => ChevalleyError::NotFinite,
        }
    }
}

/// Chevalley basis element: `h_i` or `e_α`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ChevBasis {
    H(usize),
    E(RootId),
}

/// Structure constants `N_{α,β}` of a Chevalley basis.
#[derive(Debug, Clone)]
pub struct StructureTable {
    rs: RootSystem,
    /// `n[a][b] = N_{α,β}`, zero when `α + β` is not a root
    n: Vec<Vec<i64>>,
    /// `k_i(α)` for positive roots
    coroots: Vec<Vec<i64>>,
    extraspecial: Vec<Option<(RootId, RootId)>>,
}

impl StructureTable {
    pub fn build(c: &CartanMatrix) -> Result<Self, ChevalleyError> {
        if c.kind() != CartanKind::Finite {
            return Err(ChevalleyError::NotFinite);
        }
        let rs = RootSystem::new(c)?;
        let np = rs.num_positive();
        let pos = rs.positive_roots().to_vec();
        let coroots = pos.iter().map(|a| rs.coroot_coords(a)).collect::<Result<Vec<_>, _>>()?;

        // minimal decomposition of every positive root, in the id order
        let mut extraspecial = vec![None; np];
        for (xi, root) in pos.iter().enumerate() {
            'outer: for a in 0..np {
                let rest = root - &pos[a];
                if let Some(b) = rs.id(&rest) {
                    if b < np && a < b {
                        extraspecial[xi] = Some((a, b));
                        break 'outer;
                    }
                }
            }
        }

        let mut npos: BTreeMap<(RootId, RootId), i64> = BTreeMap::new();
        let sq = |id: RootId| rs.squared_length(&rs.root(id));
        // positive pairs by increasing height of the sum; ids are height sorted
        for xi in 0..np {
            let Some((g, d)) = extraspecial[xi] else { continue };
            let xi_root = &pos[xi];
            let n_gd = (rs.string_down(&pos[g], &pos[d]) + 1) as i64;
            npos.insert((g, d), n_gd);
            npos.insert((d, g), -n_gd);
            for a in 0..np {
                let Some(b) = rs.id(&(xi_root - &pos[a])) else { continue };
                if b >= np || a >= b || a == g {
                    continue;
                }
                // N_{α,β} from the four-root identity with -γ, -δ
                let mg = rs.negate(g);
                let md = rs.negate(d);
                let mut acc = Rational::zero();
                let t1 = any_n(&rs, &npos, b, mg) * any_n(&rs, &npos, a, md);
                if t1 != 0 {
                    acc += rat(t1) / sq_opt(&rs, b, mg);
                }
                let t2 = any_n(&rs, &npos, mg, a) * any_n(&rs, &npos, b, md);
                if t2 != 0 {
                    acc += rat(t2) / sq_opt(&rs, a, mg);
                }
                let val = acc * sq(xi) / rat(n_gd);
                let v = rational_to_i64(&val).expect("structure constants are integers");
                npos.insert((a, b), v);
                npos.insert((b, a), -v);
            }
        }

        let total = 2 * np;
        let mut n = vec![vec![0i64; total]; total];
        for a in 0..total {
            for b in 0..total {
                let s = &rs.root(a) + &rs.root(b);
                if !s.is_zero() && rs.is_root(&s) {
                    n[a][b] = any_n(&rs, &npos, a, b);
                }
            }
        }
        Ok(Self { rs, n, coroots, extraspecial })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn cartan(&self) -> &CartanMatrix {
        self.rs.cartan()
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    /// `dim g = r + |Φ|`.
    pub fn dim(&self) -> usize {
        self.rank() + self.rs.num_roots()
    }

    /// `N_{α,β}` for root ids, zero when `α + β ∉ Φ`.
    pub fn n(&self, a: RootId, b: RootId) -> i64 {
        self.n[a][b]
    }

    /// `N_{α,β}` for roots, zero when either is not a root.
    pub fn n_roots(&self, a: &Root, b: &Root) -> i64 {
        match (self.rs.id(a), self.rs.id(b)) {
            (Some(x), Some(y)) => self.n[x][y],
            _ => 0,
        }
    }

    /// The minimal pair `(α, β)` for a non-simple positive root.
    pub fn extraspecial_pair(&self, xi: RootId) -> Option<(RootId, RootId)> {
        self.extraspecial.get(xi).copied().flatten()
    }

    /// `k_i(α)` with `h_α = Σ k_i(α) h_i`; negative roots give `-k(-α)`.
    pub fn coroot(&self, a: RootId) -> Vec<i64> {
        if self.rs.is_positive_id(a) {
            self.coroots[a].clone()
        } else {
            self.coroots[self.rs.negate(a)].iter().map(|x| -x).collect()
        }
    }

    /// All basis elements: `h_1..h_r`, then `e_α` in root-id order.
    pub fn basis(&self) -> Vec<ChevBasis> {
        (0..self.rank()).map(ChevBasis::H).chain((0..self.rs.num_roots()).map(ChevBasis::E)).collect()
    }

    /// Bracket of two basis elements.
    pub fn bracket_basis(&self, x: ChevBasis, y: ChevBasis) -> ChevElement {
        let mut out = ChevElement::zero();
        match (x, y) {
            (ChevBasis::H(_), ChevBasis::H(_)) => {}
            (ChevBasis::H(i), ChevBasis::E(a)) => {
                out.add_term(ChevBasis::E(a), rat(self.rs.pairing(&self.rs.root(a), i)));
            }
            (ChevBasis::E(a), ChevBasis::H(i)) => {
                out.add_term(ChevBasis::E(a), rat(-self.rs.pairing(&self.rs.root(a), i)));
            }
            (ChevBasis::E(a), ChevBasis::E(b)) => {
                if b == self.rs.negate(a) {
                    for (i, k) in self.coroot(a).into_iter().enumerate() {
                        out.add_term(ChevBasis::H(i), rat(k));
                    }
                } else {
                    let v = self.n[a][b];
                    if v != 0 {
                        let s = &self.rs.root(a) + &self.rs.root(b);
                        out.add_term(ChevBasis::E(self.rs.id(&s).unwrap()), rat(v));
                    }
                }
            }
        }
        out
    }

    /// Normalized invariant form on basis elements: `(e_α, e_{-α}) = 2/(α,α)`,
    /// `(h_i, h_j) = 4(α_i,α_j)/((α_i,α_i)(α_j,α_j))`.
    pub fn form_basis(&self, x: ChevBasis, y: ChevBasis) -> Rational {
        match (x, y) {
            (ChevBasis::H(i), ChevBasis::H(j)) => {
                let f = self.rs.form();
                rat(4) * &f[i][j] / (&f[i][i] * &f[j][j])
            }
            (ChevBasis::E(a), ChevBasis::E(b)) if b == self.rs.negate(a) => {
                rat(2) / self.rs.squared_length(&self.rs.root(a))
            }
            _ => Rational::zero(),
        }
    }

    /// Copy of the table for the basis `e'_α = σ_α e_α` (with `σ_{-α} = σ_α`).
    pub fn resigned(&self, sigma: &[i64]) -> Self {
        let np = self.rs.num_positive();
        assert_eq!(sigma.len(), np);
        let s = |id: RootId| sigma[if id < np { id } else { id - np }];
        let mut t = self.clone();
        for a in 0..2 * np {
            for b in 0..2 * np {
                if t.n[a][b] != 0 {
                    let c = self.rs.id(&(&self.rs.root(a) + &self.rs.root(b))).unwrap();
                    t.n[a][b] *= s(a) * s(b) * s(c);
                }
            }
        }
        t
    }

    /// Checks `N_{β,α} = -N_{α,β}`, `N_{-α,-β} = -N_{α,β}` and
    /// `|N_{α,β}| = p + 1`; returns the first violation.
    pub fn check_sign_laws(&self) -> Result<(), String> {
        let total = self.rs.num_roots();
        for a in 0..total {
            for b in 0..total {
                let v = self.n[a][b];
                if v != -self.n[b][a] {
                    return Err(format!("antisymmetry fails at ({a},{b})"));
                }
                if v != -self.n[self.rs.negate(a)][self.rs.negate(b)] {
                    return Err(format!("N(-a,-b) = -N(a,b) fails at ({a},{b})"));
                }
                let s = &self.rs.root(a) + &self.rs.root(b);
                if !s.is_zero() && self.rs.is_root(&s) {
                    let p = self.rs.string_down(&self.rs.root(a), &self.rs.root(b)) as i64;
                    if v.abs() != p + 1 {
                        return Err(format!("|N| = p+1 fails at ({a},{b})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Jacobi identity on every triple of basis elements.
    pub fn check_jacobi(&self) -> Result<(), String> {
        let basis = self.basis();
        for (ix, &x) in basis.iter().enumerate() {
            for (iy, &y) in basis.iter().enumerate().skip(ix + 1) {
                let xy = self.bracket_basis(x, y);
                for &z in basis.iter().skip(iy + 1) {
                    let mut s = self.bracket(&xy, &ChevElement::basis(z));
                    s.add_scaled(&self.bracket(&self.bracket_basis(y, z), &ChevElement::basis(x)), &Rational::one());
                    s.add_scaled(&self.bracket(&self.bracket_basis(z, x), &ChevElement::basis(y)), &Rational::one());
                    if !s.is_zero() {
                        return Err(format!("Jacobi fails on {x:?}, {y:?}, {z:?}"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn bracket(&self, x: &ChevElement, y: &ChevElement) -> ChevElement {
        let mut out = ChevElement::zero();
        for (&a, ca) in &x.terms {
            for (&b, cb) in &y.terms {
                out.add_scaled(&self.bracket_basis(a, b), &(ca * cb));
            }
        }
        out
    }

    pub fn form(&self, x: &ChevElement, y: &ChevElement) -> Rational {
        let mut s = Rational::zero();
        for (&a, ca) in &x.terms {
            for (&b, cb) in &y.terms {
                let f = self.form_basis(a, b);
                if !f.is_zero() {
                    s += f * ca * cb;
                }
            }
        }
        s
    }

    pub fn omega_basis(&self, x: ChevBasis) -> (ChevBasis, Rational) {
        match x {
            ChevBasis::H(i) => (ChevBasis::H(i), -Rational::one()),
            ChevBasis::E(a) => (ChevBasis::E(self.rs.negate(a)), -Rational::one()),
        }
    }

    /// Chevalley involution: `h ↦ -h`, `e_α ↦ -e_{-α}`.
    pub fn omega(&self, x: &ChevElement) -> ChevElement {
        let mut out = ChevElement::zero();
        for (&b, c) in &x.terms {
            let (ob, s) = self.omega_basis(b);
            out.add_term(ob, s * c);
        }
        out
    }

    pub fn h(&self, i: usize) -> ChevElement {
        ChevElement::basis(ChevBasis::H(i))
    }

    pub fn e_root(&self, a: &Root) -> Option<ChevElement> {
        self.rs.id(a).map(|id| ChevElement::basis(ChevBasis::E(id)))
    }

    /// Chevalley generator `e_i`.
    pub fn e(&self, i: usize) -> ChevElement {
        ChevElement::basis(ChevBasis::E(self.rs.simple_id(i)))
    }

    /// Chevalley generator `f_i = e_{-α_i}`.
    pub fn f(&self, i: usize) -> ChevElement {
        ChevElement::basis(ChevBasis::E(self.rs.negate(self.rs.simple_id(i))))
    }

    /// `y_α = e_α - e_{-α}` for a root id of either sign.
    pub fn y(&self, a: RootId) -> ChevElement {
        let mut out = ChevElement::basis(ChevBasis::E(a));
        out.add_term(ChevBasis::E(self.rs.negate(a)), -Rational::one());
        out
    }

    /// `y_α` for a positive root.
    pub fn y_basis(&self, a: &Root) -> Result<ChevElement, ChevalleyError> {
        match self.rs.id(a) {
            Some(id) if self.rs.is_positive_id(id) => Ok(self.y(id)),
            _ => Err(ChevalleyError::NotAPositiveRoot),
        }
    }

    /// `Y_i = e_i - f_i`.
    pub fn y_gen(&self, i: usize) -> ChevElement {
        self.y(self.rs.simple_id(i))
    }

    /// Coordinates of a fix-point element in the basis `{y_α}_{α>0}`.
    pub fn y_coords(&self, x: &ChevElement) -> Result<BTreeMap<RootId, Rational>, ChevalleyError> {
        let mut out = BTreeMap::new();
        for (&b, c) in &x.terms {
            match b {
                ChevBasis::H(_) => return Err(ChevalleyError::NotFixed),
                ChevBasis::E(a) => {
                    let m = self.rs.negate(a);
                    if x.coeff(ChevBasis::E(m)) != -c.clone() {
                        return Err(ChevalleyError::NotFixed);
                    }
                    if self.rs.is_positive_id(a) {
                        out.insert(a, c.clone());
                    }
                }
            }
        }
        Ok(out)
    }

    /// JSON-ready rows `(α, β, N_{α,β})` over all pairs with `α + β ∈ Φ`.
    pub fn n_entries(&self) -> Vec<(Root, Root, i64)> {
        let total = self.rs.num_roots();
        let mut out = Vec::new();
        for a in 0..total {
            for b in 0..total {
                if self.n[a][b] != 0 {
                    out.push((self.rs.root(a), self.rs.root(b), self.n[a][b]));
                }
            }
        }
        out
    }
}

fn sq_opt(rs: &RootSystem, a: RootId, b: RootId) -> Rational {
    let s = &rs.root(a) + &rs.root(b);
    rs.squared_length(&s)
}

/// `N_{a,b}` for any pair, read from the positive-pair table via the sign
/// identities. Returns 0 when the sum is not a root.
fn any_n(rs: &RootSystem, npos: &BTreeMap<(RootId, RootId), i64>, a: RootId, b: RootId) -> i64 {
    let s = &rs.root(a) + &rs.root(b);
    if s.is_zero() || !rs.is_root(&s) {
        return 0;
    }
    let pa = rs.is_positive_id(a);
    let pb = rs.is_positive_id(b);
    match (pa, pb) {
        (true, true) => *npos.get(&(a, b)).expect("positive pair computed in height order"),
        (false, false) => -any_n(rs, npos, rs.negate(a), rs.negate(b)),
        (false, true) => -any_n(rs, npos, b, a),
        (true, false) => {
            let sid = rs.id(&s).unwrap();
            let sq_s = rs.squared_length(&s);
            let v = if s.is_positive() {
                // α + β + (-s) = 0 gives N_{α,β} = -(s,s)/(α,α) N_{-β,s}
                -sq_s / rs.squared_length(&rs.root(a)) * rat(any_n(rs, npos, rs.negate(b), sid))
            } else {
                // N_{α,β} = (s,s)/(β,β) N_{-s,α}
                sq_s / rs.squared_length(&rs.root(b)) * rat(any_n(rs, npos, rs.negate(sid), a))
            };
            rational_to_i64(&v).expect("structure constants are integers")
        }
    }
}

pub fn build_chevalley(c: &CartanMatrix) -> Result<StructureTable, ChevalleyError> {
    StructureTable::build(c)
}

/// Element of `g` as a combination of Chevalley basis vectors.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ChevElement {
    terms: BTreeMap<ChevBasis, Rational>,
}

impl ChevElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: ChevBasis) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(b, Rational::one());
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ChevBasis, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: ChevBasis) -> Rational {
        self.terms.get(&b).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficients on `h_1..h_r`.
    pub fn h_part(&self, rank: usize) -> Vec<Rational> {
        (0..rank).map(|i| self.coeff(ChevBasis::H(i))).collect()
    }

    pub fn e_part(&self) -> BTreeMap<RootId, Rational> {
        self.terms
            .iter()
            .filter_map(|(b, c)| match b {
                ChevBasis::E(a) => Some((*a, c.clone())),
                ChevBasis::H(_) => None,
            })
            .collect()
    }

    pub fn add_term(&mut self, b: ChevBasis, c: Rational) {
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

impl fmt::Debug for ChevElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| match b {
                ChevBasis::H(i) => format!("{c}·h{}", i + 1),
                ChevBasis::E(a) => format!("{c}·e[{a}]"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Images of the Chevalley basis as rational matrices.
#[derive(Debug, Clone)]
pub struct MatrixRealization {
    table: StructureTable,
    dim: usize,
    h_images: Vec<ExactMatrix<Rational>>,
    e_images: Vec<ExactMatrix<Rational>>,
}

type Mat = ExactMatrix<Rational>;

impl MatrixRealization {
    /// Extends generator images to all root vectors along extraspecial pairs:
    /// `e_ξ = [e_α, e_β] / N_{α,β}` and likewise for negative roots.
    pub fn from_generators(table: StructureTable, dim: usize, e: &[Mat], f: &[Mat], h: &[Mat]) -> Self {
        let rs = table.root_system();
        let np = rs.num_positive();
        let mut e_images = vec![Mat::zeros(dim, dim); 2 * np];
        for i in 0..table.rank() {
            let s = rs.simple_id(i);
            e_images[s] = e[i].clone();
            e_images[rs.negate(s)] = f[i].clone();
        }
        for xi in 0..np {
            if let Some((a, b)) = table.extraspecial_pair(xi) {
                let inv = Rational::one() / rat(table.n(a, b));
                e_images[xi] = e_images[a].commutator(&e_images[b]).scale(&inv);
                let (ma, mb) = (rs.negate(a), rs.negate(b));
                let inv = Rational::one() / rat(table.n(ma, mb));
                e_images[rs.negate(xi)] = e_images[ma].commutator(&e_images[mb]).scale(&inv);
            }
        }
        Self { table, dim, h_images: h.to_vec(), e_images }
    }

    pub fn table(&self) -> &StructureTable {
        &self.table
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_image(&self, b: ChevBasis) -> &Mat {
        match b {
            ChevBasis::H(i) => &self.h_images[i],
            ChevBasis::E(a) => &self.e_images[a],
        }
    }

    pub fn image(&self, x: &ChevElement) -> Mat {
        let mut m = Mat::zeros(self.dim, self.dim);
        for (&b, c) in x.terms() {
            m = &m + &self.basis_image(b).scale(c);
        }
        m
    }

    /// `ρ([x,y]) = [ρ(x), ρ(y)]` on all basis pairs, and diagonal `h_i`.
    pub fn check_homomorphism(&self) -> Result<(), String> {
        for (i, h) in self.h_images.iter().enumerate() {
            if h.entries().any(|(r, c, _)| r != c) {
                return Err(format!("h{} is not diagonal", i + 1));
            }
        }
        let basis = self.table.basis();
        for &x in &basis {
            for &y in &basis {
                let lhs = self.image(&self.table.bracket_basis(x, y));
                let rhs = self.basis_image(x).commutator(self.basis_image(y));
                if lhs != rhs {
                    return Err(format!("bracket of {x:?} and {y:?} is not preserved"));
                }
            }
        }
        Ok(())
    }

    /// `ρ(ω(x)) = -ρ(x)^T` on every basis element.
    pub fn check_omega_transpose(&self) -> Result<(), String> {
        for b in self.table.basis() {
            let x = ChevElement::basis(b);
            if self.image(&self.table.omega(&x)) != -&self.image(&x).transpose() {
                return Err(format!("omega is not minus transpose on {b:?}"));
            }
        }
        Ok(())
    }
}

fn unit(n: usize, i: usize, j: usize) -> Mat {
    Mat::unit(n, n, i, j)
}

/// `sl_{r+1}` with `e_i = E_{i,i+1}`, `f_i = E_{i+1,i}`.
pub fn sl_realization(r: usize) -> MatrixRealization {
    assert!(r >= 1);
    let table = StructureTable::build(&preset(&format!("A{r}")).expect("type A preset")).expect("finite");
    let n = r + 1;
    let e: Vec<Mat> = (0..r).map(|i| unit(n, i, i + 1)).collect();
    let f: Vec<Mat> = (0..r).map(|i| unit(n, i + 1, i)).collect();
    let h: Vec<Mat> = (0..r).map(|i| &unit(n, i, i) - &unit(n, i + 1, i + 1)).collect();
    MatrixRealization::from_generators(table, n, &e, &f, &h)
}

/// The explicit `2r × 2r` matrices for `sp_r`, indexed by the roots of the
/// `C_r` preset.
pub struct SymplecticRealization {
    /// realization whose table is the generic one resigned to these matrices
    pub realization: MatrixRealization,
    /// `σ_α` with explicit `e_α = σ_α ·` (generic `e_α`), for positive ids
    pub signs: Vec<i64>,
    pub generic: StructureTable,
}

/// Coefficients of `α` in `ε_1..ε_r` for the `C_r` simple roots
/// `α_k = ε_k - ε_{k+1}`, `α_r = 2ε_r`.
pub fn c_type_epsilon(root: &Root) -> Vec<i64> {
    let c = root.coords();
    let r = c.len();
    (0..r)
        .map(|k| {
            let prev = if k == 0 { 0 } else { c[k - 1] };
            if k == r - 1 {
                2 * c[k] - prev
            } else {
                c[k] - prev
            }
        })
        .collect()
}

fn sp_block(r: usize, top_left: Mat, top_right: Mat, bottom_left: Mat, bottom_right: Mat) -> Mat {
    let mut m = Mat::zeros(2 * r, 2 * r);
    for (blk, r0, c0) in [(&top_left, 0, 0), (&top_right, 0, r), (&bottom_left, r, 0), (&bottom_right, r, r)] {
        for (i, j, v) in blk.entries() {
            m.set(r0 + i, c0 + j, v.clone());
        }
    }
    m
}

/// The explicit matrix of `e_α` for `sp_r` given `α` in `ε`-coordinates.
pub fn sp_root_matrix(eps: &[i64]) -> Mat {
    let r = eps.len();
    let z = || Mat::zeros(r, r);
    let nz: Vec<(usize, i64)> = eps.iter().copied().enumerate().filter(|&(_, c)| c != 0).collect();
    match nz.as_slice() {
        [(j, 2)] => sp_block(r, z(), unit(r, *j, *j), z(), z()),
        [(j, -2)] => sp_block(r, z(), z(), unit(r, *j, *j), z()),
        [(k, a), (l, b)] => {
            let sym = || &unit(r, *k, *l) + &unit(r, *l, *k);
            match (a, b) {
                (1, 1) => sp_block(r, z(), sym(), z(), z()),
                (-1, -1) => sp_block(r, z(), z(), sym(), z()),
                // ε_p - ε_q ↦ (E_pq, 0; 0, -E_qp)
                (1, -1) => sp_block(r, unit(r, *k, *l), z(), z(), -&unit(r, *l, *k)),
                (-1, 1) => sp_block(r, unit(r, *l, *k), z(), z(), -&unit(r, *k, *l)),
                _ => panic!("not a root of C_r"),
            }
        }
        _ => panic!("not a root of C_r"),
    }
}

/// `sp_r` realized by the explicit matrices, with sign reconciliation to the
/// generic `C_r` table.
pub fn sp_realization(r: usize) -> Result<SymplecticRealization, ChevalleyError> {
    assert!(r >= 1);
    // C_1 is A_1 with α_1 = 2ε_1
    let name = if r == 1 { String::from("A1") } else { format!("C{r}") };
    let generic = StructureTable::build(&preset(&name).expect("type C preset"))?;
    let rs = generic.root_system().clone();
    let n = 2 * r;
    let z = || Mat::zeros(r, r);
    let h: Vec<Mat> = (0..r)
        .map(|j| {
            if j + 1 < r {
                let d = &unit(r, j, j) - &unit(r, j + 1, j + 1);
                sp_block(r, d.clone(), z(), z(), -&d)
            } else {
                sp_block(r, unit(r, j, j), z(), z(), -&unit(r, j, j))
            }
        })
        .collect();
    let explicit = |id: RootId| sp_root_matrix(&c_type_epsilon(&rs.root(id)));
    let e: Vec<Mat> = (0..r).map(|i| explicit(rs.simple_id(i))).collect();
    let f: Vec<Mat> = (0..r).map(|i| explicit(rs.negate(rs.simple_id(i)))).collect();
    let induced = MatrixRealization::from_generators(generic.clone(), n, &e, &f, &h);

    let np = rs.num_positive();
    let mut signs = vec![0i64; np];
    for (a, sign) in signs.iter_mut().enumerate() {
        for id in [a, rs.negate(a)] {
            let p = explicit(id);
            let t = induced.basis_image(ChevBasis::E(id));
            let s = if &p == t {
                1
            } else if p == -t {
                -1
            } else {
                return Err(ChevalleyError::Realization(format!("root {} is not a signed match", rs.root(id))));
            };
            if *sign != 0 && *sign != s {
                return Err(ChevalleyError::Realization(String::from("σ(α) ≠ σ(-α)")));
            }
            *sign = s;
        }
    }
    let table = generic.resigned(&signs);
    let e_images = (0..2 * np).map(explicit).collect();
    let realization = MatrixRealization { table, dim: n, h_images: h, e_images };
    Ok(SymplecticRealization { realization, signs, generic })
}

/// The `C_r` table in the basis of the explicit `sp_r` matrices.
pub fn sp_table(r: usize) -> StructureTable {
    sp_realization(r).expect("sp realization").realization.table
}

/// `η(B C; -C B) = B + iC`, applied blockwise to any `2r × 2r` matrix.
pub fn eta_matrix(r: usize, m: &Mat) -> ExactMatrix {
    let b = m.block(0, 0, r, r).map(|x| GaussianRational::real(x.clone()));
    let c = m.block(0, r, r, r).map(|x| GaussianRational::new(Rational::zero(), x.clone()));
    &b + &c
}

/// `η` on the fix-point algebra of `sp_r`.
pub fn eta(sp: &SymplecticRealization, x: &ChevElement) -> Result<ExactMatrix, ChevalleyError> {
    let t = sp.realization.table();
    if &t.omega(x) != x {
        return Err(ChevalleyError::NotFixed);
    }
    let r = t.rank();
    let m = sp.realization.image(x);
    let (b, c) = (m.block(0, 0, r, r), m.block(0, r, r, r));
    if m.block(r, 0, r, r) != -&c || m.block(r, r, r, r) != b || b.transpose() != -&b || c.transpose() != c {
        return Err(ChevalleyError::Realization(String::from("fixed element has the wrong block shape")));
    }
    Ok(eta_matrix(r, &m))
}

/// Outcome of the `gl_r` presentation checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlReport {
    pub r: usize,
    pub checks: Vec<(String, bool)>,
}

impl GlReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

/// Builds `K_1..K_r` in `gl_r` and checks the four relation families, the
/// formula for `K_r`, agreement with `η(Y_j)`, and that the `K_j` generate.
pub fn verify_gl_presentation(r: usize) -> Result<GlReport, ChevalleyError> {
    assert!(r >= 2);
    let sp = sp_realization(r)?;
    let t = sp.realization.table();
    let unit_c = |i: usize, j: usize| ExactMatrix::<GaussianRational>::unit(r, r, i, j);
    let i_unit = GaussianRational::i();
    let mut k: Vec<ExactMatrix> = (0..r - 1).map(|j| &unit_c(j, j + 1) - &unit_c(j + 1, j)).collect();
    k.push(unit_c(r - 1, r - 1).scale(&i_unit));
    let br = |a: &ExactMatrix, b: &ExactMatrix| a.commutator(b);
    let mut checks = Vec::new();

    for (j, kj) in k.iter().enumerate() {
        let ok = eta(&sp, &t.y_gen(j))? == *kj;
        checks.push((format!("K{} = eta(Y{})", j + 1, j + 1), ok));
    }
    // K_r = (i/r)(Z - Σ_{j<r} j η(h_j))
    let mut s = ExactMatrix::<GaussianRational>::identity(r);
    for j in 0..r - 1 {
        let eh = eta_matrix(r, sp.realization.basis_image(ChevBasis::H(j)));
        s = &s - &eh.scale(&GaussianRational::from_i64(j as i64 + 1));
    }
    let kr = s.scale(&GaussianRational::new(Rational::zero(), Rational::one() / rat(r as i64)));
    checks.push((String::from("K_r = (i/r)(Z - sum j eta(h_j))"), kr == k[r - 1]));

    for a in 0..r {
        for b in 0..r {
            if a.abs_diff(b) > 1 {
                checks.push((format!("[K{},K{}] = 0", a + 1, b + 1), br(&k[a], &k[b]).is_zero()));
            }
        }
    }
    for j in 0..r.saturating_sub(2) {
        let lhs = br(&k[j], &br(&k[j], &k[j + 1]));
        checks.push((format!("[K{0},[K{0},K{1}]] = -K{1}", j + 1, j + 2), lhs == -&k[j + 1]));
    }
    for j in 0..r - 1 {
        let lhs = br(&k[j + 1], &br(&k[j + 1], &k[j]));
        checks.push((format!("[K{0},[K{0},K{1}]] = -K{1}", j + 2, j + 1), lhs == -&k[j]));
    }
    let (p, q) = (&k[r - 2], &k[r - 1]);
    let pq = br(p, q);
    let lhs = br(p, &br(p, &pq));
    let rhs = pq.scale(&GaussianRational::from_i64(-4));
    checks.push((format!("[K{0},[K{0},[K{0},K{1}]]] = -4[K{0},K{1}]", r - 1, r), lhs == rhs));

    // the K_j span gl_r under brackets
    let mut ech: RowEchelon<GaussianRational> = RowEchelon::new();
    let flat = |m: &ExactMatrix| m.entries().map(|(i, j, v)| (i * r + j, v.clone())).collect();
    let mut layer: Vec<ExactMatrix> = Vec::new();
    for m in &k {
        if ech.insert(flat(m)) {
            layer.push(m.clone());
        }
    }
    while !layer.is_empty() {
        let mut next = Vec::new();
        for m in &layer {
            for kk in &k {
                let b = br(kk, m);
                if ech.insert(flat(&b)) {
                    next.push(b);
                }
            }
        }
        layer = next;
    }
    checks.push((String::from("K_1..K_r generate gl_r"), ech.rank() == r * r));
    Ok(GlReport { r, checks })
}

/// `Σ_s c_s[r] (ad Y_i)^s Y_j` and `(ad e_i)^r e_j + (-1)^{r-1} (ad f_i)^r f_j`.
pub fn almost_relation_sides(t: &StructureTable, i: usize, j: usize, r: usize) -> (ChevElement, ChevElement) {
    let a = t.cartan().entry(i, j);
    let row = crate::serre_coeffs::coeff_row(a, r);
    let yi = t.y_gen(i);
    let mut term = t.y_gen(j);
    let mut lhs = ChevElement::zero();
    for (s, c) in row.c.iter().enumerate() {
        if s > 0 {
            term = t.bracket(&yi, &term);
        }
        lhs.add_scaled(&term, &Rational::from_integer(c.clone()));
    }
    let mut pe = t.e(j);
    let mut pf = t.f(j);
    for _ in 0..r {
        pe = t.bracket(&t.e(i), &pe);
        pf = t.bracket(&t.f(i), &pf);
    }
    let sign = if r % 2 == 1 { Rational::one() } else { -Rational::one() };
    let mut rhs = pe;
    rhs.add_scaled(&pf, &sign);
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(name: &str) -> StructureTable {
        StructureTable::build(&preset(name).unwrap()).unwrap()
    }

    #[test]
    fn small_magnitudes() {
        let a2 = table("A2");
        assert_eq!(a2.n_roots(&Root(vec![1, 0]), &Root(vec![0, 1])).abs(), 1);
        let c2 = table("C2");
        // α_1-string through α_1+α_2 is α_2, α_1+α_2, 2α_1+α_2
        assert_eq!(c2.n_roots(&Root(vec![1, 0]), &Root(vec![1, 1])).abs(), 2);
    }

    #[test]
    fn sign_laws_and_jacobi() {
        for name in ["A1", "A2", "A3", "B2", "C2", "B3", "C3", "G2", "D4"] {
            let t = table(name);
            t.check_sign_laws().unwrap_or_else(|e| panic!("{name}: {e}"));
            t.check_jacobi().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        for name in ["A4", "B4", "C4", "F4"] {
            table(name).check_sign_laws().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn h_alpha_and_generators() {
        let t = table("C2");
        let rs = t.root_system();
        for a in 0..rs.num_positive() {
            let m = rs.negate(a);
            let got = t.bracket_basis(ChevBasis::E(a), ChevBasis::E(m));
            let k = rs.coroot_coords(&rs.root(a)).unwrap();
            for (i, ki) in k.iter().enumerate() {
                assert_eq!(got.coeff(ChevBasis::H(i)), rat(*ki));
            }
        }
        let b = t.bracket(&t.h(0), &t.e(1));
        assert_eq!(b, t.e(1).scaled(&rat(t.cartan().entry(0, 1))));
        assert_eq!(t.bracket(&t.e(0), &t.f(0)), t.h(0));
    }

    #[test]
    fn omega_is_involutive_automorphism() {
        for name in ["A2", "C2", "G2"] {
            let t = table(name);
            for x in t.basis() {
                let ex = ChevElement::basis(x);
                assert_eq!(t.omega(&t.omega(&ex)), ex);
                for y in t.basis() {
                    let ey = ChevElement::basis(y);
                    assert_eq!(t.omega(&t.bracket(&ex, &ey)), t.bracket(&t.omega(&ex), &t.omega(&ey)));
                }
            }
        }
    }

    #[test]
    fn y_structure_constants() {
        for name in ["A3", "C3", "G2", "B3"] {
            let t = table(name);
            let rs = t.root_system();
            let np = rs.num_positive();
            for a in 0..np {
                for b in 0..np {
                    if a == b {
                        continue;
                    }
                    let (ra, rb) = (rs.root(a), rs.root(b));
                    let mut want = ChevElement::zero();
                    if let Some(s) = rs.id(&(&ra + &rb)) {
                        want.add_scaled(&t.y(s), &rat(t.n(a, b)));
                    }
                    if let Some(d) = rs.id(&(&ra - &rb)) {
                        want.add_scaled(&t.y(d), &rat(-t.n(a, rs.negate(b))));
                    }
                    assert_eq!(t.bracket(&t.y(a), &t.y(b)), want, "{name}");
                }
            }
        }
    }

    #[test]
    fn sl_realizations() {
        for r in 1..=3 {
            let sl = sl_realization(r);
            sl.check_homomorphism().unwrap();
            sl.check_omega_transpose().unwrap();
            let t = sl.table();
            for i in 0..r {
                let y = sl.image(&t.y_gen(i));
                assert_eq!(y.transpose(), -&y);
                assert_eq!(y, &unit(r + 1, i, i + 1) - &unit(r + 1, i + 1, i));
            }
        }
    }

    #[test]
    fn sp_realizations() {
        for r in 1..=3 {
            let sp = sp_realization(r).unwrap();
            sp.realization.check_homomorphism().unwrap();
            sp.realization.check_omega_transpose().unwrap();
            sp.realization.table().check_sign_laws().unwrap();
            let t = sp.realization.table();
            let rs = t.root_system();
            for a in 0..rs.num_positive() {
                let y = sp.realization.image(&t.y(a));
                let (b, c) = (y.block(0, 0, r, r), y.block(0, r, r, r));
                assert_eq!(b.transpose(), -&b);
                assert_eq!(c.transpose(), c);
            }
            // [e_{2ε_r}, e_{-2ε_r}] = h_r
            let top = rs.simple_id(r - 1);
            let lhs = sp.realization.basis_image(ChevBasis::E(top)).commutator(sp.realization.basis_image(ChevBasis::E(rs.negate(top))));
            assert_eq!(&lhs, sp.realization.basis_image(ChevBasis::H(r - 1)));
        }
    }

    #[test]
    fn eta_examples() {
        let r = 3;
        let sp = sp_realization(r).unwrap();
        let t = sp.realization.table();
        let i = GaussianRational::i();
        let u = |a: usize, b: usize| ExactMatrix::<GaussianRational>::unit(r, r, a, b);
        assert_eq!(eta(&sp, &t.y_gen(r - 1)).unwrap(), u(r - 1, r - 1).scale(&i));
        assert_eq!(eta(&sp, &t.y_gen(0)).unwrap(), &u(0, 1) - &u(1, 0));
        assert_eq!(eta(&sp, &t.h(0)), Err(ChevalleyError::NotFixed));
        let rs = t.root_system();
        for a in 0..rs.num_positive() {
            let eps = c_type_epsilon(&rs.root(a));
            let nz: Vec<usize> = (0..r).filter(|&k| eps[k] != 0).collect();
            let want = match nz.as_slice() {
                [l] => u(*l, *l).scale(&i),
                [j, k] if eps[*j] == 1 && eps[*k] == -1 => &u(*j, *k) - &u(*k, *j),
                [j, k] => (&u(*j, *k) + &u(*k, *j)).scale(&i),
                _ => unreachable!(),
            };
            assert_eq!(eta(&sp, &t.y(a)).unwrap(), want);
        }
    }

    #[test]
    fn gl_presentation() {
        for r in 2..=3 {
            let rep = verify_gl_presentation(r).unwrap();
            assert!(rep.all_pass(), "{rep:?}");
        }
    }

    #[test]
    fn almost_relation_small() {
        for name in ["A2", "C2", "G2"] {
            let t = table(name);
            for i in 0..2 {
                for j in 0..2 {
                    if i == j {
                        continue;
                    }
                    let a = t.cartan().entry(i, j);
                    for r in 0..=(2 - a) as usize {
                        let (l, rr) = almost_relation_sides(&t, i, j, r);
                        assert_eq!(l, rr, "{name} i={i} j={j} r={r}");
                    }
                }
            }
        }
    }
}
