//! One-dimensional representations of the fix-point algebra.
//!
//! A character is a functional on the y-basis that kills every bracket. It is
//! solved for on a height window: unknowns are the values on basis vectors of
//! height `≤ H`, and each bracket of two window vectors whose expansion stays
//! inside the window contributes one linear constraint.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::affine_loop::{AffineFixIndex, LoopAlgebra};
use crate::cartan::CartanMatrix;
use crate::chevalley::c_type_epsilon;
use crate::exact_math::{ExactMatrix, GaussianRational, Rational};
use crate::onsager::{FixIndex, Realization};
use crate::roots::{AffineRoot, Root};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CharacterError {
    #[error("height window {0} is too small: some basis vector below the top height is never constrained")]
    WindowTooSmall(i64),
    #[error("not a root of type C")]
    NotCType,
    #[error("not a root of type C affine")]
    NotCAffine,
    #[error("no character takes the requested values on the generators")]
    Inconsistent,
}

/// `E_A = { j : a_ij even for all i }`.
pub fn even_column_set(c: &CartanMatrix) -> Vec<usize> {
    c.even_columns()
}

/// Solution space of the abelianization constraints on a height window.
#[derive(Debug, Clone)]
pub struct CharacterSpace {
    pub height: i64,
    pub basis: Vec<FixIndex>,
    /// each functional lists its values on `basis`
    pub functionals: Vec<Vec<Rational>>,
    pub constraints: usize,
}

impl CharacterSpace {
    pub fn dim(&self) -> usize {
        self.functionals.len()
    }

    fn position(&self, idx: &FixIndex) -> Option<usize> {
        self.basis.iter().position(|b| b == idx)
    }

    /// The character with prescribed values on the generators `Y_j` (absent
    /// entries are 0), evaluated on every window basis vector.
    pub fn character(&self, rz: &Realization, gen_values: &BTreeMap<usize, GaussianRational>) -> Result<Character, CharacterError> {
        let n = rz.n_generators();
        let gen_pos: Vec<usize> = (0..n).map(|j| self.position(&generator_index(rz, j)).expect("generators lie in the window")).collect();
        let rows: Vec<Vec<GaussianRational>> = gen_pos
            .iter()
            .map(|&p| self.functionals.iter().map(|f| GaussianRational::real(f[p].clone())).collect())
            .collect();
        let rhs: Vec<GaussianRational> = (0..n).map(|j| gen_values.get(&j).cloned().unwrap_or_else(GaussianRational::zero)).collect();
        let coeffs = if self.functionals.is_empty() {
            if rhs.iter().any(|v| !v.is_zero()) {
                return Err(CharacterError::Inconsistent);
            }
            Vec::new()
        } else {
            ExactMatrix::from_rows(&rows).solve(&rhs).ok_or(CharacterError::Inconsistent)?
        };
        let mut values = BTreeMap::new();
        for (p, idx) in self.basis.iter().enumerate() {
            let mut v = GaussianRational::zero();
            for (c, f) in coeffs.iter().zip(&self.functionals) {
                v += c.clone() * GaussianRational::real(f[p].clone());
            }
            values.insert(idx.clone(), v);
        }
        let generators = (0..n).filter(|&j| !rhs[j].is_zero()).map(|j| (j, rhs[j].clone())).collect();
        Ok(Character { generators, values })
    }
}

/// A character: its values on the generators and on the window basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    /// nonzero values `χ(Y_j)`
    pub generators: BTreeMap<usize, GaussianRational>,
    pub values: BTreeMap<FixIndex, GaussianRational>,
}

impl Character {
    pub fn value(&self, idx: &FixIndex) -> Option<&GaussianRational> {
        self.values.get(idx)
    }

    /// `χ(y_γ)` for a signed affine index, with `y_{-γ} = -y_γ`; `None`
    /// outside the window.
    pub fn affine_value(&self, idx: &AffineFixIndex) -> Option<GaussianRational> {
        if idx.root.finite.is_zero() && idx.root.level == 0 {
            return Some(GaussianRational::zero());
        }
        if idx.root.is_positive() {
            self.values.get(&FixIndex::Affine(idx.clone())).cloned()
        } else {
            let pos = AffineFixIndex { root: idx.root.neg(), i: idx.i };
            self.values.get(&FixIndex::Affine(pos)).map(|v| -v.clone())
        }
    }
}

fn generator_index(rz: &Realization, j: usize) -> FixIndex {
    match rz {
        Realization::Finite(t) => FixIndex::Finite(t.root_system().simple_id(j)),
        Realization::AffineLoop(l) => FixIndex::Affine(AffineFixIndex::real(l.affine_roots().simple_root(j))),
    }
}

/// Solves `χ([u, v]) = 0` over all window pairs.
pub fn character_space(rz: &Realization, h: i64) -> Result<CharacterSpace, CharacterError> {
    let basis = rz.basis_up_to(h);
    let pos: BTreeMap<FixIndex, usize> = basis.iter().cloned().enumerate().map(|(k, b)| (b, k)).collect();
    let elems: Vec<_> = basis.iter().map(|b| rz.y(b)).collect();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut touched: BTreeSet<usize> = BTreeSet::new();
    for a in 0..basis.len() {
        for b in a + 1..basis.len() {
            let br = rz.bracket(&elems[a], &elems[b]);
            let coords = rz.y_coords(&br).expect("brackets of fixed elements are fixed");
            if coords.is_empty() || coords.keys().any(|k| !pos.contains_key(k)) {
                continue;
            }
            let mut row = vec![Rational::zero(); basis.len()];
            for (k, c) in coords {
                let p = pos[&k];
                touched.insert(p);
                row[p] = c;
            }
            rows.push(row);
        }
    }
    for (p, b) in basis.iter().enumerate() {
        if rz.height(b) < h && !touched.contains(&p) {
            return Err(CharacterError::WindowTooSmall(h));
        }
    }
    let functionals = if rows.is_empty() {
        (0..basis.len()).map(|k| (0..basis.len()).map(|j| if j == k { Rational::one() } else { Rational::zero() }).collect()).collect()
    } else {
        ExactMatrix::from_rows(&rows).nullspace_basis()
    };
    Ok(CharacterSpace { height: h, basis, functionals, constraints: rows.len() })
}

/// Default window `2·ht(δ) + 2` for affine realizations, the top height for
/// finite ones.
pub fn default_window(rz: &Realization) -> i64 {
    match rz {
        Realization::Finite(t) => t.root_system().max_height(),
        Realization::AffineLoop(l) => 2 * l.affine_roots().delta_height() + 2,
    }
}

/// `α` in simple-root coordinates of `C_r` from its `ε`-coordinates.
pub fn c_type_root(eps: &[i64]) -> Root {
    let r = eps.len();
    let mut out = vec![0i64; r];
    let mut acc = 0;
    for j in 0..r {
        acc += eps[j];
        out[j] = acc;
    }
    out[r - 1] = acc / 2;
    Root(out)
}

/// `Some(true)` for long roots `±2ε_ℓ`, `Some(false)` for short `±ε_j±ε_k`,
/// `None` when `α` is not a root of `C_r`.
fn c_root_is_long(r: usize, alpha: &Root) -> Option<bool> {
    if alpha.coords().len() != r || r == 0 {
        return None;
    }
    let eps = c_type_epsilon(alpha);
    let nz: Vec<i64> = eps.iter().copied().filter(|&c| c != 0).collect();
    match nz.as_slice() {
        [c] if c.abs() == 2 => Some(true),
        [a, b] if a.abs() == 1 && b.abs() == 1 && r >= 2 => Some(false),
        _ => None,
    }
}

/// `χ_t(y_α)` on a positive root of `C_r`: `t` on long roots, 0 on short ones.
pub fn chi_finite(r: usize, t: &GaussianRational, alpha: &Root) -> Result<GaussianRational, CharacterError> {
    let long = c_root_is_long(r, alpha).ok_or(CharacterError::NotCType)?;
    if !alpha.is_positive() {
        return Err(CharacterError::NotCType);
    }
    Ok(if long { t.clone() } else { GaussianRational::zero() })
}

/// `χ_{s,t}(y_γ^{(i)})` on `C_r^{(1)}` for a signed affine root:
/// `±t` on `±α + 2kδ`, `±s` on `∓α + (2k+1)δ` for long `α > 0`, 0 on short
/// roots and on `kδ`.
pub fn chi_affine(r: usize, s: &GaussianRational, t: &GaussianRational, gamma: &AffineRoot, i: usize) -> Result<GaussianRational, CharacterError> {
    if gamma.finite.coords().len() != r {
        return Err(CharacterError::NotCAffine);
    }
    if gamma.finite.is_zero() {
        if i >= r {
            return Err(CharacterError::NotCAffine);
        }
        return Ok(GaussianRational::zero());
    }
    let long = c_root_is_long(r, &gamma.finite).ok_or(CharacterError::NotCAffine)?;
    if !long {
        return Ok(GaussianRational::zero());
    }
    let sign_pos = gamma.finite.is_positive();
    let even = gamma.level.rem_euclid(2) == 0;
    Ok(match (even, sign_pos) {
        (true, true) => t.clone(),
        (true, false) => -t.clone(),
        (false, true) => -s.clone(),
        (false, false) => s.clone(),
    })
}

/// Checks `χ(y_{α+(k+1)δ}) = χ(y_{α+(k-1)δ})` for long `α` and `|k| ≤ kmax`
/// wherever both sides lie in the window; returns the number of checked pairs.
pub fn check_shift_invariance(lp: &LoopAlgebra, chi: &Character, kmax: i64) -> Result<usize, AffineFixIndex> {
    let rs = lp.table().root_system();
    let mut checked = 0;
    for a in 0..rs.num_roots() {
        let alpha = rs.root(a);
        if !rs.is_long(&alpha) {
            continue;
        }
        for k in -kmax..=kmax {
            let up = AffineFixIndex::real(AffineRoot::new(alpha.clone(), k + 1));
            let down = AffineFixIndex::real(AffineRoot::new(alpha.clone(), k - 1));
            if let (Some(x), Some(y)) = (chi.affine_value(&up), chi.affine_value(&down)) {
                if x != y {
                    return Err(up);
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// The identity `[y_{β+δ}, y_γ] = κ_{β,γ} y_{-2ε_j+δ} - κ_{β,-γ} y_{-2ε_{j-1}+δ}`
/// with `β = -ε_{j-1}-ε_j`, `γ = ε_{j-1}-ε_j` (1-based `j`, `2 ≤ j ≤ r`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepIdentity {
    pub j: usize,
    pub kappa_plus: i64,
    pub kappa_minus: i64,
    pub holds: bool,
}

pub fn step_identity(lp: &LoopAlgebra, j: usize) -> StepIdentity {
    let r = lp.rank();
    assert!(j >= 2 && j <= r);
    let e = |pairs: &[(usize, i64)]| {
        let mut v = vec![0i64; r];
        for &(k, c) in pairs {
            v[k - 1] += c;
        }
        c_type_root(&v)
    };
    let beta = e(&[(j - 1, -1), (j, -1)]);
    let gamma = e(&[(j - 1, 1), (j, -1)]);
    let t = lp.table();
    let kp = t.n_roots(&beta, &gamma);
    let km = t.n_roots(&beta, &-&gamma);
    let y = |root: Root, level: i64| lp.y_any(&AffineFixIndex::real(AffineRoot::new(root, level)));
    let lhs = lp.bracket(&y(beta.clone(), 1), &y(gamma.clone(), 0));
    let mut rhs = y(e(&[(j, -2)]), 1).scaled(&Rational::from_integer(kp.into()));
    rhs.add_scaled(&y(e(&[(j - 1, -2)]), 1), &Rational::from_integer((-km).into()));
    StepIdentity { j, kappa_plus: kp, kappa_minus: km, holds: lhs == rhs }
}
