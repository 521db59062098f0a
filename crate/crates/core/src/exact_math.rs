//! Exact scalars and exact linear algebra.
//!
//! Everything in this crate is computed over the rationals or the Gaussian
//! rationals `Q(i)`. Matrices are sparse; rank and kernel computations use
//! plain Gaussian elimination with the first nonzero pivot in row order.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

/// Sparse vector: coordinate index to nonzero value.
pub type SparseVec<F> = BTreeMap<usize, F>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Returns the value as an `i64` if it is an integer that fits.
pub fn rational_to_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

/// Operations needed for exact elimination.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
}

impl Field for Rational {}
impl Field for GaussianRational {}

/// Element `re + im·i` of the Gaussian rationals.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::real(rat(n))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self { re: Rational::zero(), im: Rational::one() }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "inverse of zero");
        Self { re: &self.re / &n, im: -(&self.im / &n) }
    }
}

impl From<Rational> for GaussianRational {
    fn from(re: Rational) -> Self {
        Self::real(re)
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self { re: Rational::zero(), im: Rational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(Rational::one())
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Div for GaussianRational {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.inv()
    }
}

impl AddAssign for GaussianRational {
    fn add_assign(&mut self, o: Self) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl SubAssign for GaussianRational {
    fn sub_assign(&mut self, o: Self) {
        self.re -= o.re;
        self.im -= o.im;
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => fmt_imag(f, &self.im),
            (false, false) => {
                write!(f, "{}", self.re)?;
                if self.im.is_positive() {
                    f.write_str("+")?;
                }
                fmt_imag(f, &self.im)
            }
        }
    }
}

fn fmt_imag(f: &mut fmt::Formatter<'_>, im: &Rational) -> fmt::Result {
    if im.is_one() {
        f.write_str("i")
    } else if (-im).is_one() {
        f.write_str("-i")
    } else {
        write!(f, "{}i", im)
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sparse matrix with exact entries. Zero entries are never stored.
#[derive(Clone, PartialEq)]
pub struct ExactMatrix<F = GaussianRational> {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), F>,
}

impl<F: Field> ExactMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    /// Matrix unit `E_{i,j}` (0-based indices).
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m.set(i, j, F::one());
        m
    }

    pub fn from_rows(rows: &[Vec<F>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(F::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &F)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (&(i, j), v) in &self.entries {
            t.entries.insert((j, i), v.clone());
        }
        t
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut m = Self::zeros(self.rows, self.cols);
        if c.is_zero() {
            return m;
        }
        for (&k, v) in &self.entries {
            m.entries.insert(k, v.clone() * c.clone());
        }
        m
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> ExactMatrix<G> {
        let mut m = ExactMatrix::zeros(self.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            m.set(i, j, f(v));
        }
        m
    }

    /// Submatrix with `nrows × ncols` entries starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nrows: usize, ncols: usize) -> Self {
        let mut m = Self::zeros(nrows, ncols);
        for (&(i, j), v) in self.entries.range((r0, 0)..(r0 + nrows, 0)) {
            if j >= c0 && j < c0 + ncols {
                m.set(i - r0, j - c0, v.clone());
            }
        }
        m
    }

    /// Matrix commutator `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn trace(&self) -> F {
        let mut t = F::zero();
        for i in 0..self.rows.min(self.cols) {
            t = t + self.get(i, i);
        }
        t
    }

    fn dense_rows(&self) -> Vec<Vec<F>> {
        let mut out = alloc::vec![alloc::vec![F::zero(); self.cols]; self.rows];
        for (&(i, j), v) in &self.entries {
            out[i][j] = v.clone();
        }
        out
    }

    /// Rank over the field of the entries.
    pub fn rank(&self) -> usize {
        let mut ech = RowEchelon::new();
        for i in 0..self.rows {
            ech.insert(self.row_sparse(i));
        }
        ech.rank()
    }

    fn row_sparse(&self, i: usize) -> SparseVec<F> {
        self.entries
            .range((i, 0)..(i + 1, 0))
            .map(|(&(_, j), v)| (j, v.clone()))
            .collect()
    }

    /// Basis of the right kernel `{x : Mx = 0}`, one vector per free column.
    pub fn nullspace_basis(&self) -> Vec<Vec<F>> {
        let (rref, pivots) = rref(self.dense_rows(), self.cols);
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = alloc::vec![F::zero(); self.cols];
            v[free] = F::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -rref[row][free].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `Mx = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let mut aug = self.dense_rows();
        for (row, bi) in aug.iter_mut().zip(b) {
            row.push(bi.clone());
        }
        let (rref, pivots) = rref(aug, self.cols + 1);
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = alloc::vec![F::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = rref[row][self.cols].clone();
        }
        Some(x)
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        let mut out = alloc::vec![F::zero(); self.rows];
        for (&(i, j), a) in &self.entries {
            out[i] = out[i].clone() + a.clone() * v[j].clone();
        }
        out
    }
}

/// Reduced row echelon form of a dense matrix; returns the rows and pivot columns.
fn rref<F: Field>(mut m: Vec<Vec<F>>, cols: usize) -> (Vec<Vec<F>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = F::one() / m[row][col].clone();
        for c in col..cols {
            m[row][c] = m[row][c].clone() * inv.clone();
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..cols {
                    let sub = f.clone() * m[row][c].clone();
                    m[r][c] = m[r][c].clone() - sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    (m, pivots)
}

impl<F: Field> Add for &ExactMatrix<F> {
    type Output = ExactMatrix<F>;
    fn add(self, o: &ExactMatrix<F>) -> ExactMatrix<F> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        let mut m = self.clone();
        for (&(i, j), v) in &o.entries {
            let s = m.get(i, j) + v.clone();
            m.set(i, j, s);
        }
        m
    }
}

impl<F: Field> Sub for &ExactMatrix<F> {
    type Output = ExactMatrix<F>;
    fn sub(self, o: &ExactMatrix<F>) -> ExactMatrix<F> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        let mut m = self.clone();
        for (&(i, j), v) in &o.entries {
            let s = m.get(i, j) - v.clone();
            m.set(i, j, s);
        }
        m
    }
}

impl<F: Field> Mul for &ExactMatrix<F> {
    type Output = ExactMatrix<F>;
    fn mul(self, o: &ExactMatrix<F>) -> ExactMatrix<F> {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut acc: BTreeMap<(usize, usize), F> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            for (&(_, j), b) in o.entries.range((k, 0)..(k + 1, 0)) {
                let e = acc.entry((i, j)).or_insert_with(F::zero);
                *e = e.clone() + a.clone() * b.clone();
            }
        }
        acc.retain(|_, v| !v.is_zero());
        ExactMatrix { rows: self.rows, cols: o.cols, entries: acc }
    }
}

impl<F: Field> Neg for &ExactMatrix<F> {
    type Output = ExactMatrix<F>;
    fn neg(self) -> ExactMatrix<F> {
        self.scale(&-F::one())
    }
}

impl<F: Field + fmt::Display> fmt::Display for ExactMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}

impl<F: Field + fmt::Display> fmt::Debug for ExactMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactMatrix {}x{}\n{}", self.rows, self.cols, self)
    }
}

/// Incrementally built row echelon basis of a subspace.
///
/// Each stored row has a leading 1 at its pivot; rows are not reduced against
/// later pivots, which is enough for membership and rank queries.
#[derive(Clone, Debug, Default)]
pub struct RowEchelon<F> {
    rows: BTreeMap<usize, SparseVec<F>>,
}

impl<F: Field> RowEchelon<F> {
    pub fn new() -> Self {
        Self { rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` modulo the stored rows.
    pub fn reduce(&self, mut v: SparseVec<F>) -> SparseVec<F> {
        v.retain(|_, x| !x.is_zero());
        let mut cursor = 0;
        loop {
            let Some((&k, _)) = v.range(cursor..).find(|(k, _)| self.rows.contains_key(k)) else {
                return v;
            };
            let row = &self.rows[&k];
            let f = v[&k].clone();
            for (&j, x) in row {
                let cur = v.remove(&j).unwrap_or_else(F::zero);
                let nv = cur - f.clone() * x.clone();
                if !nv.is_zero() {
                    v.insert(j, nv);
                }
            }
            cursor = k + 1;
        }
    }

    /// Adds `v` to the span; returns `true` when it was independent.
    pub fn insert(&mut self, v: SparseVec<F>) -> bool {
        let r = self.reduce(v);
        let Some((&p, lead)) = r.iter().next() else {
            return false;
        };
        let inv = F::one() / lead.clone();
        let normalized = r.into_iter().map(|(j, x)| (j, x * inv.clone())).collect();
        self.rows.insert(p, normalized);
        true
    }

    pub fn contains(&self, v: SparseVec<F>) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Rank of the matrix whose rows are `vectors`.
pub fn span_rank<F: Field>(vectors: &[Vec<F>]) -> usize {
    let mut ech = RowEchelon::new();
    for v in vectors {
        ech.insert(v.iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()).collect());
    }
    ech.rank()
}

/// Rank of an `ExactMatrix`.
pub fn rank<F: Field>(m: &ExactMatrix<F>) -> usize {
    m.rank()
}

/// Kernel basis of an `ExactMatrix`.
pub fn nullspace_basis<F: Field>(m: &ExactMatrix<F>) -> Vec<Vec<F>> {
    m.nullspace_basis()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn q(rows: &[&[i64]]) -> ExactMatrix<Rational> {
        let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        ExactMatrix::from_rows(&rows)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ExactMatrix::<Rational>::identity(2).rank(), 2);
        assert_eq!(ExactMatrix::<Rational>::zeros(3, 4).rank(), 0);
        assert_eq!(q(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn nullspace_examples() {
        assert!(ExactMatrix::<Rational>::identity(2).nullspace_basis().is_empty());
        let k = q(&[&[1, 1]]).nullspace_basis();
        assert_eq!(k.len(), 1);
        // proportional to (1, -1)
        assert_eq!(&k[0][0] + &k[0][1], rat(0));
        assert!(!k[0][0].is_zero());
        assert_eq!(q(&[&[0, 0]]).nullspace_basis().len(), 2);
    }

    #[test]
    fn span_rank_examples() {
        assert_eq!(span_rank(&[vec![rat(1), rat(0)], vec![rat(0), rat(1)]]), 2);
        assert_eq!(span_rank(&[vec![rat(1), rat(1)], vec![rat(2), rat(2)]]), 1);
        assert_eq!(span_rank::<Rational>(&[]), 0);
    }

    #[test]
    fn gaussian_field_ops() {
        let i = GaussianRational::i();
        assert_eq!(i.clone() * i.clone(), -GaussianRational::one());
        let z = GaussianRational::new(ratio(1, 2), rat(3));
        assert_eq!(z.clone() / z.clone(), GaussianRational::one());
        assert_eq!(z.conj().conj(), z);
        assert_eq!(alloc::format!("{}", z), "1/2+3i");
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = q(&[&[1, 1], &[1, -1]]);
        let x = m.solve(&[rat(3), rat(1)]).unwrap();
        assert_eq!(x, vec![rat(2), rat(1)]);
        let s = q(&[&[1, 1], &[2, 2]]);
        assert!(s.solve(&[rat(1), rat(3)]).is_none());
    }

    #[test]
    fn complex_matrix_rank() {
        // [[1, i], [i, -1]] has rank 1 over Q(i)
        let i = GaussianRational::i();
        let one = GaussianRational::one();
        let m = ExactMatrix::from_rows(&[vec![one.clone(), i.clone()], vec![i.clone(), -one]]);
        assert_eq!(m.rank(), 1);
    }
}
