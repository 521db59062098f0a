//! Generalized Cartan matrices: validation, symmetrizers, classification and presets.
//!
//! Convention throughout: `a[i][j] = α_j(h_i)`, indices 0-based internally.
//! Generator labels are 1-based for non-affine matrices and `0..=r` for
//! untwisted affine ones, with the affine node labelled 0.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact_math::{rat, Rational};
use crate::roots;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CartanError {
    #[error("matrix is not square or is empty")]
    NotSquare,
    #[error("not a generalized Cartan matrix: {0}")]
    NotGcm(String),
    #[error("matrix is not symmetrizable")]
    NotSymmetrizable,
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("matrix is not of finite type")]
    NotFinite,
    #[error("matrix is not of untwisted affine type")]
    NotAffine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CartanKind {
    Finite,
    UntwistedAffine,
    Other,
}

impl fmt::Display for CartanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CartanKind::Finite => "finite",
            CartanKind::UntwistedAffine => "untwisted affine",
            CartanKind::Other => "other",
        })
    }
}

/// A validated symmetrizable generalized Cartan matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanMatrix {
    a: Vec<Vec<i64>>,
    d: Vec<u64>,
    kind: CartanKind,
    type_name: Option<String>,
    affine_node: Option<usize>,
}

impl CartanMatrix {
    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.a
    }

    /// Minimal symmetrizer: `d_i a_ij = d_j a_ji`.
    pub fn symmetrizer(&self) -> &[u64] {
        &self.d
    }

    pub fn kind(&self) -> CartanKind {
        self.kind
    }

    /// Type name such as `C3` or `A1~`, when recognised.
    pub fn type_name(&self) -> Option<&str> {
        self.type_name.as_deref()
    }

    /// Index of the node `α_0 = δ - θ` for untwisted affine matrices.
    pub fn affine_node(&self) -> Option<usize> {
        self.affine_node
    }

    /// Display label of generator `i` (the `k` in `B_k`).
    pub fn label(&self, i: usize) -> usize {
        match self.affine_node {
            Some(k) if i == k => 0,
            Some(k) if i < k => i + 1,
            Some(_) => i,
            None => i + 1,
        }
    }

    /// Inverse of [`CartanMatrix::label`].
    pub fn index_of_label(&self, label: usize) -> Option<usize> {
        (0..self.n()).find(|&i| self.label(i) == label)
    }

    /// The finite Cartan matrix obtained by deleting the affine node, together
    /// with the map from its indices to indices of `self`.
    pub fn finite_part(&self) -> Result<(CartanMatrix, Vec<usize>), CartanError> {
        let k = self.affine_node.ok_or(CartanError::NotAffine)?;
        let keep: Vec<usize> = (0..self.n()).filter(|&i| i != k).collect();
        let sub: Vec<Vec<i64>> = keep.iter().map(|&i| keep.iter().map(|&j| self.a[i][j]).collect()).collect();
        Ok((validate(&sub)?, keep))
    }

    /// Indices `i` with `a_ij` odd for no `i`: the set `{ j : a_ij ≡ 0 mod 2 ∀ i }`.
    pub fn even_columns(&self) -> Vec<usize> {
        (0..self.n()).filter(|&j| (0..self.n()).all(|i| self.a[i][j] % 2 == 0)).collect()
    }
}

impl fmt::Display for CartanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.a {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Checks the GCM axioms, computes the minimal symmetrizer and classifies.
pub fn validate(a: &[Vec<i64>]) -> Result<CartanMatrix, CartanError> {
    let n = a.len();
    if n == 0 || a.iter().any(|r| r.len() != n) {
        return Err(CartanError::NotSquare);
    }
    for i in 0..n {
        if a[i][i] != 2 {
            return Err(CartanError::NotGcm(format!("diagonal entry a[{i}][{i}] = {} ≠ 2", a[i][i])));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            if a[i][j] > 0 {
                return Err(CartanError::NotGcm(format!("positive off-diagonal entry a[{i}][{j}] = {}", a[i][j])));
            }
            if (a[i][j] == 0) != (a[j][i] == 0) {
                return Err(CartanError::NotGcm(format!("zero pattern not symmetric at ({i},{j})")));
            }
        }
    }
    let d = symmetrizer(a)?;
    let mut m = CartanMatrix { a: a.to_vec(), d, kind: CartanKind::Other, type_name: None, affine_node: None };
    classify(&mut m);
    Ok(m)
}

/// Minimal positive integer `d` with `diag(d)·a` symmetric, normalized per
/// connected component to coprime entries.
pub fn symmetrizer(a: &[Vec<i64>]) -> Result<Vec<u64>, CartanError> {
    let n = a.len();
    let mut ratio: Vec<Option<Rational>> = vec![None; n];
    for start in 0..n {
        if ratio[start].is_some() {
            continue;
        }
        ratio[start] = Some(Rational::one());
        let mut component = vec![start];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if i == j || a[i][j] == 0 {
                    continue;
                }
                // d_i a_ij = d_j a_ji
                let dj = ratio[i].clone().unwrap() * rat(a[i][j]) / rat(a[j][i]);
                match &ratio[j] {
                    Some(existing) if *existing != dj => return Err(CartanError::NotSymmetrizable),
                    Some(_) => {}
                    None => {
                        ratio[j] = Some(dj);
                        component.push(j);
                        stack.push(j);
                    }
                }
            }
        }
        let lcm = component.iter().fold(num_bigint::BigInt::one(), |l, &i| l.lcm(ratio[i].as_ref().unwrap().denom()));
        let ints: Vec<num_bigint::BigInt> =
            component.iter().map(|&i| (ratio[i].clone().unwrap() * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(num_bigint::BigInt::zero(), |g, x| g.gcd(x));
        for (&i, x) in component.iter().zip(&ints) {
            ratio[i] = Some(Rational::from_integer(x / &g));
        }
    }
    // Check symmetry on every pair, including those in different components.
    for i in 0..n {
        for j in 0..n {
            let lhs = ratio[i].clone().unwrap() * rat(a[i][j]);
            let rhs = ratio[j].clone().unwrap() * rat(a[j][i]);
            if lhs != rhs {
                return Err(CartanError::NotSymmetrizable);
            }
        }
    }
    Ok(ratio
        .into_iter()
        .map(|r| {
            let r = r.unwrap();
            u64::try_from(r.to_integer()).expect("symmetrizer entry fits in u64")
        })
        .collect())
}

/// Determinant of an integer matrix by exact elimination.
pub fn determinant(a: &[Vec<i64>]) -> Rational {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pivot;
            for c in col..n {
                let sub = &f * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

fn principal_minor(a: &[Vec<i64>], idx: &[usize]) -> Rational {
    let sub: Vec<Vec<i64>> = idx.iter().map(|&i| idx.iter().map(|&j| a[i][j]).collect()).collect();
    determinant(&sub)
}

fn is_finite_matrix(a: &[Vec<i64>]) -> bool {
    (1..=a.len()).all(|k| {
        let idx: Vec<usize> = (0..k).collect();
        principal_minor(a, &idx).is_positive()
    })
}

fn classify(m: &mut CartanMatrix) {
    let a = &m.a;
    let n = a.len();
    if is_finite_matrix(a) {
        m.kind = CartanKind::Finite;
        m.type_name = Some(finite_type_name(a));
        return;
    }
    if !determinant(a).is_zero() {
        return;
    }
    // every proper principal submatrix must be of finite type
    for mask in 1u64..(1u64 << n) - 1 {
        let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if !principal_minor(a, &idx).is_positive() {
            return;
        }
    }
    for k in 0..n {
        if let Some(name) = untwisted_extension_name(a, k) {
            m.kind = CartanKind::UntwistedAffine;
            m.type_name = Some(name);
            m.affine_node = Some(k);
            return;
        }
    }
}

/// If deleting node `k` leaves a finite matrix `X_r` and node `k` is attached
/// as `α_0 = δ - θ`, returns `"X_r~"`.
fn untwisted_extension_name(a: &[Vec<i64>], k: usize) -> Option<String> {
    let keep: Vec<usize> = (0..a.len()).filter(|&i| i != k).collect();
    let sub: Vec<Vec<i64>> = keep.iter().map(|&i| keep.iter().map(|&j| a[i][j]).collect()).collect();
    if !is_finite_matrix(&sub) {
        return None;
    }
    let ext = affine_extension_rows(&sub)?;
    for (p, &i) in keep.iter().enumerate() {
        if a[k][i] != ext.0[p] || a[i][k] != ext.1[p] {
            return None;
        }
    }
    Some(format!("{}~", finite_type_name(&sub)))
}

/// Row and column of the affine node: `(α_j(h_0), α_0(h_j))` for `j = 1..r`,
/// i.e. `(-α_j(h_θ), -θ(h_j))`. `None` for decomposable input.
fn affine_extension_rows(fin: &[Vec<i64>]) -> Option<(Vec<i64>, Vec<i64>)> {
    let rs = roots::raw_positive_roots(fin);
    let d = symmetrizer(fin).ok()?;
    let theta = rs.last()?.clone();
    let r = fin.len();
    // indecomposable iff highest root has full support
    if theta.iter().any(|&c| c == 0) {
        return None;
    }
    // k_i(θ) = θ_i (α_i,α_i)/(θ,θ); lengths proportional to d_i
    let sym = |i: usize, j: usize| rat(d[i] as i64 * fin[i][j]);
    let mut tt = Rational::zero();
    for i in 0..r {
        for j in 0..r {
            tt += sym(i, j) * rat(theta[i] * theta[j]);
        }
    }
    let k: Vec<Rational> = (0..r).map(|i| rat(theta[i]) * rat(2 * d[i] as i64) / &tt).collect();
    let row: Vec<i64> = (0..r)
        .map(|j| {
            let v: Rational = (0..r).map(|i| &k[i] * rat(fin[i][j])).sum();
            assert!(v.is_integer());
            -crate::exact_math::rational_to_i64(&v).unwrap()
        })
        .collect();
    let col: Vec<i64> = (0..r).map(|j| -(0..r).map(|i| theta[i] * fin[j][i]).sum::<i64>()).collect();
    Some((row, col))
}

fn components(a: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = a.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && a[i][j] != 0 {
                    seen[j] = true;
                    comp.push(j);
                    stack.push(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn finite_type_name(a: &[Vec<i64>]) -> String {
    let comps = components(a);
    let names: Vec<String> = comps
        .iter()
        .map(|c| {
            let sub: Vec<Vec<i64>> = c.iter().map(|&i| c.iter().map(|&j| a[i][j]).collect()).collect();
            indecomposable_finite_name(&sub)
        })
        .collect();
    names.join("+")
}

fn indecomposable_finite_name(a: &[Vec<i64>]) -> String {
    let r = a.len();
    let count = roots::raw_positive_roots(a).len();
    let d = symmetrizer(a).expect("finite matrices are symmetrizable");
    let max_d = *d.iter().max().unwrap();
    let long_simple = d.iter().filter(|&&x| x == max_d).count();
    let name = match (r, count) {
        (1, 1) => "A1".to_string(),
        (2, 6) => "G2".to_string(),
        (4, 24) => "F4".to_string(),
        // B6 and C6 also have 36 positive roots; E types are simply laced
        (6, 36) if long_simple == r => "E6".to_string(),
        (7, 63) if long_simple == r => "E7".to_string(),
        (8, 120) if long_simple == r => "E8".to_string(),
        _ if count == r * (r + 1) / 2 => format!("A{r}"),
        _ if count == r * r && r == 2 => {
            if a[0][1] == -2 {
                "C2".to_string()
            } else {
                "B2".to_string()
            }
        }
        // B_r has r-1 long simple roots, C_r only one
        _ if count == r * r => {
            if long_simple == 1 {
                format!("C{r}")
            } else {
                format!("B{r}")
            }
        }
        _ if r >= 4 && count == r * (r - 1) => format!("D{r}"),
        _ => "?".to_string(),
    };
    name
}

fn chain(r: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; r]; r];
    for i in 0..r {
        a[i][i] = 2;
        if i + 1 < r {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    }
    a
}

fn parse_rank(s: &str) -> Option<usize> {
    s.parse().ok().filter(|&r| r >= 1)
}

/// Raw matrix of a finite preset in Bourbaki numbering.
fn finite_preset_rows(name: &str) -> Option<Vec<Vec<i64>>> {
    let (kind, rank) = name.split_at(1);
    let r = parse_rank(rank)?;
    let a = match kind {
        "A" => chain(r),
        "B" if r >= 2 => {
            let mut a = chain(r);
            a[r - 1][r - 2] = -2;
            a
        }
        "C" if r >= 2 => {
            let mut a = chain(r);
            a[r - 2][r - 1] = -2;
            a
        }
        "D" if r >= 4 => {
            let mut a = chain(r);
            a[r - 2][r - 1] = 0;
            a[r - 1][r - 2] = 0;
            a[r - 3][r - 1] = -1;
            a[r - 1][r - 3] = -1;
            a
        }
        "E" if (6..=8).contains(&r) => {
            let mut a = vec![vec![0i64; r]; r];
            for (i, row) in a.iter_mut().enumerate() {
                row[i] = 2;
            }
            let mut edges = vec![(0, 2), (1, 3), (2, 3)];
            for i in 3..r - 1 {
                edges.push((i, i + 1));
            }
            for (i, j) in edges {
                a[i][j] = -1;
                a[j][i] = -1;
            }
            a
        }
        "F" if r == 4 => {
            let mut a = chain(4);
            a[2][1] = -2;
            a
        }
        "G" if r == 2 => vec![vec![2, -3], vec![-1, 2]],
        _ => return None,
    };
    Some(a)
}

/// Standard matrices: `A_r, B_r, C_r, D_r, E_6..E_8, F_4, G_2`, and their
/// untwisted affine extensions written with a `~` suffix (`"A1~"`, `"C2~"`).
///
/// Affine presets put the node `α_0` first.
pub fn preset(name: &str) -> Result<CartanMatrix, CartanError> {
    let unknown = || CartanError::UnknownPreset(name.to_string());
    let trimmed = name.trim();
    let (base, affine) = match trimmed.strip_suffix('~') {
        Some(b) => (b, true),
        None => (trimmed, false),
    };
    if base.is_empty() || !base.is_ascii() {
        return Err(unknown());
    }
    let fin = finite_preset_rows(base).ok_or_else(unknown)?;
    if !affine {
        return validate(&fin);
    }
    let (row, col) = affine_extension_rows(&fin).ok_or_else(unknown)?;
    let r = fin.len();
    let mut a = vec![vec![0i64; r + 1]; r + 1];
    a[0][0] = 2;
    for j in 0..r {
        a[0][j + 1] = row[j];
        a[j + 1][0] = col[j];
        for i in 0..r {
            a[i + 1][j + 1] = fin[i][j];
        }
    }
    let m = validate(&a)?;
    debug_assert_eq!(m.affine_node, Some(0));
    Ok(m)
}

/// Names accepted by [`preset`], for listings and tests (ranks up to 8).
pub fn preset_names() -> Vec<String> {
    let mut names = Vec::new();
    for r in 1..=8 {
        names.push(format!("A{r}"));
    }
    for r in 2..=8 {
        names.push(format!("B{r}"));
        names.push(format!("C{r}"));
    }
    for r in 4..=8 {
        names.push(format!("D{r}"));
    }
    for n in ["E6", "E7", "E8", "F4", "G2"] {
        names.push(n.to_string());
    }
    let affine: Vec<String> = names.iter().map(|n| format!("{n}~")).collect();
    names.extend(affine);
    names
}

/// Parses the whitespace-separated text format, one row per line. Blank lines
/// and `#` comments are ignored.
pub fn parse_matrix_text(text: &str) -> Result<Vec<Vec<i64>>, String> {
    let mut rows = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row: Result<Vec<i64>, _> = line.split_whitespace().map(str::parse::<i64>).collect();
        rows.push(row.map_err(|e| format!("line {}: {e}", ln + 1))?);
    }
    if rows.is_empty() {
        return Err("empty matrix".to_string());
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_examples() {
        let a11 = validate(&[vec![2, -2], vec![-2, 2]]).unwrap();
        assert_eq!(a11.kind(), CartanKind::UntwistedAffine);
        assert_eq!(a11.type_name(), Some("A1~"));
        let a2 = validate(&[vec![2, -1], vec![-1, 2]]).unwrap();
        assert_eq!(a2.kind(), CartanKind::Finite);
        assert_eq!(a2.type_name(), Some("A2"));
        // det = 1 > 0: G2 with the other orientation
        let g = validate(&[vec![2, -1], vec![-3, 2]]).unwrap();
        assert_eq!(determinant(g.rows()), rat(1));
        assert_eq!(g.kind(), CartanKind::Finite);
        assert_eq!(g.type_name(), Some("G2"));
    }

    #[test]
    fn other_kinds() {
        // hyperbolic rank 2
        let h = validate(&[vec![2, -3], vec![-3, 2]]).unwrap();
        assert_eq!(h.kind(), CartanKind::Other);
        // twisted affine A_2^(2) is affine but not untwisted
        let t = validate(&[vec![2, -4], vec![-1, 2]]).unwrap();
        assert_eq!(determinant(t.rows()), rat(0));
        assert_eq!(t.kind(), CartanKind::Other);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(validate(&[vec![1, 0], vec![0, 2]]), Err(CartanError::NotGcm(_))));
        assert!(matches!(validate(&[vec![2, 1], vec![-1, 2]]), Err(CartanError::NotGcm(_))));
        assert!(matches!(validate(&[vec![2, -1], vec![0, 2]]), Err(CartanError::NotGcm(_))));
        // cycle with inconsistent ratios
        let bad = [vec![2, -1, -1], vec![-2, 2, -1], vec![-1, -1, 2]];
        assert_eq!(validate(&bad), Err(CartanError::NotSymmetrizable));
        assert_eq!(validate(&[]), Err(CartanError::NotSquare));
        assert!(matches!(preset("Q7"), Err(CartanError::UnknownPreset(_))));
    }

    #[test]
    fn preset_examples() {
        assert_eq!(preset("A1~").unwrap().rows(), &[vec![2, -2], vec![-2, 2]]);
        assert_eq!(preset("A2").unwrap().rows(), &[vec![2, -1], vec![-1, 2]]);
        // a_12 = α_2(h_1) = -2, a_21 = α_1(h_2) = -1 for sp_2
        assert_eq!(preset("C2").unwrap().rows(), &[vec![2, -2], vec![-1, 2]]);
    }

    #[test]
    fn symmetrizer_examples() {
        assert_eq!(symmetrizer(preset("A2").unwrap().rows()).unwrap(), vec![1, 1]);
        let c2 = preset("C2").unwrap();
        assert_eq!(c2.symmetrizer(), &[1, 2]);
        for i in 0..2 {
            for j in 0..2 {
                let d = c2.symmetrizer();
                assert_eq!(d[i] as i64 * c2.entry(i, j), d[j] as i64 * c2.entry(j, i));
            }
        }
        assert_eq!(preset("A1~").unwrap().symmetrizer(), &[1, 1]);
    }

    #[test]
    fn presets_round_trip_and_symmetric() {
        for name in preset_names() {
            let m = preset(&name).unwrap();
            let again = validate(m.rows()).unwrap();
            assert_eq!(again, m, "{name}");
            assert_eq!(m.type_name(), Some(name.as_str()), "{name}");
            let d = m.symmetrizer();
            for i in 0..m.n() {
                for j in 0..m.n() {
                    assert_eq!(d[i] as i64 * m.entry(i, j), d[j] as i64 * m.entry(j, i), "{name}");
                }
            }
            let det = determinant(m.rows());
            if name.ends_with('~') {
                assert_eq!(m.kind(), CartanKind::UntwistedAffine, "{name}");
                assert!(det.is_zero(), "{name}");
            } else {
                assert_eq!(m.kind(), CartanKind::Finite, "{name}");
                assert!(det.is_positive(), "{name}");
            }
        }
    }

    #[test]
    fn affine_null_vector_is_positive() {
        // δ = α_0 + θ gives a strictly positive null vector of A (A·δ = 0)
        for name in ["A1~", "A3~", "B3~", "C2~", "C3~", "D4~", "G2~", "F4~", "E6~"] {
            let m = preset(name).unwrap();
            let (fin, _) = m.finite_part().unwrap();
            let theta = roots::raw_positive_roots(fin.rows()).last().unwrap().clone();
            let mut delta = vec![1i64];
            delta.extend(theta);
            assert!(delta.iter().all(|&x| x > 0));
            for i in 0..m.n() {
                let s: i64 = (0..m.n()).map(|j| m.entry(i, j) * delta[j]).sum();
                assert_eq!(s, 0, "{name}");
            }
        }
    }

    #[test]
    fn labels_and_even_columns() {
        let c3 = preset("C3").unwrap();
        assert_eq!(c3.even_columns(), vec![2]);
        assert_eq!(c3.label(2), 3);
        let c2a = preset("C2~").unwrap();
        let e: Vec<usize> = c2a.even_columns().iter().map(|&i| c2a.label(i)).collect();
        assert_eq!(e, vec![0, 2]);
        assert_eq!(c2a.index_of_label(0), Some(0));
        assert!(preset("A2").unwrap().even_columns().is_empty());
    }

    #[test]
    fn matrix_text_format() {
        let rows = parse_matrix_text("2 -2\n\n-2 2  # affine\n").unwrap();
        assert_eq!(rows, vec![vec![2, -2], vec![-2, 2]]);
        assert!(parse_matrix_text("2 x").is_err());
        assert!(parse_matrix_text("  \n").is_err());
    }
}
