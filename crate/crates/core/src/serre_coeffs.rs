//! Coefficients `c_s[r]` of the inhomogeneous Serre relations and the
//! relations themselves as free Lie algebra elements.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cartan::CartanMatrix;
use crate::exact_math::Rational;
use crate::freelie::{FreeLieAlgebra, FreeLieElement};

/// The row `(c_0[r], …, c_r[r])` for a Cartan entry `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffRow {
    pub a: i64,
    pub r: usize,
    pub c: Vec<BigInt>,
}

/// All rows `0..=rmax` for the entry `a`.
///
/// `c_r[r] = 1`, `c_{r-1}[r] = 0`, and for `r ≥ 2`
/// `c_s[r] = c_{s-1}[r-1] - (r-1)(r-2+a) c_s[r-2]` with `c_{-1} = 0`.
pub fn coeff_table(a: i64, rmax: usize) -> Vec<CoeffRow> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(rmax + 1);
    for r in 0..=rmax {
        let mut c = vec![BigInt::zero(); r + 1];
        c[r] = BigInt::one();
        if r >= 2 {
            let f = BigInt::from(r as i64 - 1) * BigInt::from(r as i64 - 2 + a);
            for s in 0..=r - 2 {
                let prev = if s == 0 { BigInt::zero() } else { rows[r - 1][s - 1].clone() };
                c[s] = prev - &f * &rows[r - 2][s];
            }
        }
        rows.push(c);
    }
    rows.into_iter().enumerate().map(|(r, c)| CoeffRow { a, r, c }).collect()
}

pub fn coeff_row(a: i64, r: usize) -> CoeffRow {
    coeff_table(a, r).pop().expect("nonempty table")
}

/// Polynomial in `a`, coefficients in ascending degree.
pub type Poly = Vec<BigInt>;

fn poly_trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// The rows `0..=rmax` with `c_s[r]` kept as polynomials in the Cartan entry.
pub fn coeff_table_symbolic(rmax: usize) -> Vec<Vec<Poly>> {
    let mut rows: Vec<Vec<Poly>> = Vec::with_capacity(rmax + 1);
    for r in 0..=rmax {
        let mut c: Vec<Poly> = vec![Vec::new(); r + 1];
        c[r] = vec![BigInt::one()];
        if r >= 2 {
            // (r-1)(r-2+a) = (r-1)(r-2) + (r-1)·a
            let f0 = BigInt::from((r as i64 - 1) * (r as i64 - 2));
            let f1 = BigInt::from(r as i64 - 1);
            for s in 0..=r - 2 {
                let prev = &rows[r - 2][s];
                let mut p = if s == 0 { Vec::new() } else { rows[r - 1][s - 1].clone() };
                p.resize(p.len().max(prev.len() + 1), BigInt::zero());
                for (k, x) in prev.iter().enumerate() {
                    p[k] -= &f0 * x;
                    p[k + 1] -= &f1 * x;
                }
                c[s] = poly_trim(p);
            }
        }
        rows.push(c);
    }
    rows
}

/// Evaluates a polynomial at `a`.
pub fn poly_eval(p: &[BigInt], a: i64) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * BigInt::from(a) + c)
}

/// `c_0[2ℓ] = (-1)^ℓ ∏_{k=1}^{ℓ} (2k-1)(2k-2+a)`.
pub fn c0_closed_form(a: i64, l: usize) -> BigInt {
    let mut p = BigInt::one();
    for k in 1..=l as i64 {
        p *= BigInt::from(2 * k - 1) * BigInt::from(2 * k - 2 + a);
    }
    if l % 2 == 1 {
        -p
    } else {
        p
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelationError {
    #[error("generator index out of range")]
    IndexError,
    #[error("relation needs two distinct generators")]
    SameIndex,
}

/// `Σ_{s=0}^{1-a} c_s[1-a] (ad B_i)^s B_j` for `a = a_ij`, in Lyndon normal form.
pub fn serre_relation(
    f: &FreeLieAlgebra,
    c: &CartanMatrix,
    i: usize,
    j: usize,
) -> Result<FreeLieElement, RelationError> {
    if i >= c.n() || j >= c.n() || f.generators() < c.n() {
        return Err(RelationError::IndexError);
    }
    if i == j {
        return Err(RelationError::SameIndex);
    }
    Ok(relation_for_entry(f, c.entry(i, j), i, j))
}

/// The relation for generators `i`, `j` and an explicit Cartan entry.
pub fn relation_for_entry(f: &FreeLieAlgebra, a: i64, i: usize, j: usize) -> FreeLieElement {
    assert!(a <= 0, "off-diagonal Cartan entries are nonpositive");
    let row = coeff_row(a, (1 - a) as usize);
    let bi = f.generator(i);
    let mut term = f.generator(j);
    let mut out = FreeLieElement::zero();
    for (s, cs) in row.c.iter().enumerate() {
        if s > 0 {
            term = f.bracket(&bi, &term);
        }
        if !cs.is_zero() {
            out.add_scaled(&term, &Rational::from_integer(cs.clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn low_rows() {
        for a in -6..=0i64 {
            assert_eq!(coeff_row(a, 0).c, ints(&[1]));
            assert_eq!(coeff_row(a, 1).c, ints(&[0, 1]));
            assert_eq!(coeff_row(a, 2).c, ints(&[-a, 0, 1]));
            assert_eq!(coeff_row(a, 3).c, ints(&[0, -3 * a - 2, 0, 1]));
            assert_eq!(coeff_row(a, 5).c, ints(&[0, 15 * a * a + 50 * a + 24, 0, -10 * a - 20, 0, 1]));
        }
    }

    #[test]
    fn closed_form_examples() {
        for a in -8..=0 {
            assert_eq!(c0_closed_form(a, 0), BigInt::from(1));
            assert_eq!(c0_closed_form(a, 1), BigInt::from(-a));
            assert_eq!(c0_closed_form(a, 2), BigInt::from(3 * a * a + 6 * a));
        }
    }

    #[test]
    fn parity_and_leading_terms() {
        for a in -8..=0 {
            for row in coeff_table(a, 12) {
                assert_eq!(row.c[row.r], BigInt::one());
                if row.r >= 1 {
                    assert!(row.c[row.r - 1].is_zero());
                }
                for (s, x) in row.c.iter().enumerate() {
                    if (row.r - s) % 2 == 1 {
                        assert!(x.is_zero(), "a={a} r={} s={s}", row.r);
                    }
                }
            }
        }
    }

    #[test]
    fn symbolic_rows_evaluate() {
        let sym = coeff_table_symbolic(9);
        assert_eq!(sym[3][1], ints(&[-2, -3]));
        assert_eq!(sym[5][1], ints(&[24, 50, 15]));
        for a in -6..=2 {
            for (row, p) in coeff_table(a, 9).iter().zip(&sym) {
                let ev: Vec<BigInt> = p.iter().map(|q| poly_eval(q, a)).collect();
                assert_eq!(ev, row.c);
            }
        }
    }

    #[test]
    fn relation_errors() {
        let c = crate::cartan::preset("A2").unwrap();
        let f = FreeLieAlgebra::new(2);
        assert_eq!(serre_relation(&f, &c, 0, 0), Err(RelationError::SameIndex));
        assert_eq!(serre_relation(&f, &c, 0, 2), Err(RelationError::IndexError));
    }
}
