//! The full battery of exact checks for one Cartan matrix.
//!
//! Each check is a named closure so callers can run them in any order or in
//! parallel; names describe the identity being tested.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::affine_loop::{normalize_expansion, onsager_basis, LoopAlgebra, LoopElement};
use crate::cartan::{preset, CartanKind, CartanMatrix};
use crate::characters::{character_space, check_shift_invariance, chi_affine, chi_finite, default_window, step_identity};
use crate::chevalley::{almost_relation_sides, eta, sl_realization, sp_realization, sp_table, verify_gl_presentation, ChevElement, StructureTable};
use crate::exact_math::{rat, GaussianRational};
use crate::freelie::FreeLieAlgebra;
use crate::onsager::{filtration_dims, psi_eval, relations, FixIndex, Realization};
use crate::serre_coeffs::{c0_closed_form, coeff_row};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.to_string(), passed, detail: detail.into() }
    }

    fn from_result(name: &str, r: Result<String, String>) -> Self {
        match r {
            Ok(d) => Self::new(name, true, d),
            Err(d) => Self::new(name, false, d),
        }
    }
}

/// Bounds for the checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    /// filtration depth; `None` means the top height (finite) or 6 (affine)
    pub jmax: Option<usize>,
    /// character window; `None` means the default window
    pub height: Option<i64>,
    /// level bound for affine structure constants
    pub levels: i64,
    /// index bound for the Onsager structure constants
    pub onsager_bound: i64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { jmax: None, height: None, levels: 2, onsager_bound: 5 }
    }
}

type Runner = Box<dyn Fn() -> CheckResult + Send + Sync>;

/// A deferred check.
pub struct Check {
    pub name: String,
    run: Runner,
}

impl Check {
    fn new(name: &str, run: impl Fn() -> CheckResult + Send + Sync + 'static) -> Self {
        Self { name: name.to_string(), run: Box::new(run) }
    }

    pub fn run(&self) -> CheckResult {
        (self.run)()
    }
}

fn same_as_preset(c: &CartanMatrix, name: &str) -> bool {
    preset(name).map(|p| p.rows() == c.rows()).unwrap_or(false)
}

/// Rank `r` when `c` is literally the `C_r` preset (`r ≥ 2`).
fn c_rank(c: &CartanMatrix, affine: bool) -> Option<usize> {
    let r = if affine { c.n().checked_sub(1)? } else { c.n() };
    let name = if affine { format!("C{r}~") } else { format!("C{r}") };
    (r >= 2 && same_as_preset(c, &name)).then_some(r)
}

/// All checks that apply to `c`, in a fixed order.
pub fn checks_for(c: &CartanMatrix, opts: &VerifyOptions) -> Vec<Check> {
    let mut out = Vec::new();
    let c = Arc::new(c.clone());
    {
        let c = c.clone();
        out.push(Check::new("symmetrizable Cartan matrix", move || symmetrizer_check(&c)));
    }
    {
        let c = c.clone();
        out.push(Check::new("inhomogeneous Serre coefficients: recursion against closed form", move || coefficient_check(&c)));
    }
    let rz = match Realization::for_cartan(&c) {
        Ok(rz) => Arc::new(rz),
        Err(_) => return out,
    };
    {
        let (c, rz) = (c.clone(), rz.clone());
        out.push(Check::new("inhomogeneous Serre relations vanish under psi", move || relations_check(&c, &rz)));
    }
    let jmax = opts.jmax.unwrap_or(match &*rz {
        Realization::Finite(t) => t.root_system().max_height() as usize,
        Realization::AffineLoop(_) => 6,
    });
    {
        let rz = rz.clone();
        out.push(Check::new("graded dimensions of the filtration", move || filtration_check(&rz, jmax)));
    }
    let height = opts.height;
    {
        let (c, rz) = (c.clone(), rz.clone());
        out.push(Check::new("character space dimension equals |E_A|", move || character_dim_check(&c, &rz, height)));
    }
    match &*rz {
        Realization::Finite(t) => {
            let t = Arc::new(t.clone());
            {
                let t = t.clone();
                out.push(Check::new("Chevalley structure constant sign laws", move || {
                    CheckResult::from_result("Chevalley structure constant sign laws", t.check_sign_laws().map(|_| format!("{} roots", t.root_system().num_roots())))
                }));
            }
            {
                let t = t.clone();
                out.push(Check::new("Jacobi identity on the Chevalley basis", move || {
                    CheckResult::from_result("Jacobi identity on the Chevalley basis", t.check_jacobi().map(|_| format!("dimension {}", t.dim())))
                }));
            }
            {
                let t = t.clone();
                out.push(Check::new("Chevalley involution is an automorphism", move || omega_check(&t)));
            }
            {
                let t = t.clone();
                out.push(Check::new("fix-point basis structure constants", move || y_structure_check(&t)));
            }
            {
                let t = t.clone();
                out.push(Check::new("almost-relation identity", move || almost_relation_check(&t)));
            }
            let r = c.n();
            if same_as_preset(&c, &format!("A{r}")) {
                out.push(Check::new("sl realization is a homomorphism", move || sl_check(r)));
            }
            if let Some(r) = c_rank(&c, false) {
                out.push(Check::new("sp realization is a homomorphism", move || sp_check(r)));
                out.push(Check::new("eta is a homomorphism on the fix-point algebra", move || eta_check(r)));
                out.push(Check::new("gl presentation of the fix-point algebra", move || gl_check(r)));
                out.push(Check::new("explicit characters of type C", move || chi_finite_check(r)));
            }
        }
        Realization::AffineLoop(lp) => {
            let lp = Arc::new(lp.clone());
            let levels = opts.levels;
            {
                let lp = lp.clone();
                out.push(Check::new("affine fix-point structure constants", move || affine_structure_check(&lp, levels)));
            }
            {
                let lp = lp.clone();
                out.push(Check::new("loop involution is an automorphism", move || omega_tilde_check(&lp)));
            }
            if same_as_preset(&c, "A1~") {
                let bound = opts.onsager_bound;
                out.push(Check::new("Dolan-Grady relations", dolan_grady_check));
                let lp = lp.clone();
                out.push(Check::new("Onsager structure constants", move || onsager_check(&lp, bound)));
            }
            if let Some(r) = c_rank(&c, true) {
                let c = c.clone();
                out.push(Check::new("explicit affine characters of type C", move || chi_affine_check(&c, r)));
            }
        }
    }
    out
}

/// Runs every check sequentially.
pub fn verify(c: &CartanMatrix, opts: &VerifyOptions) -> Vec<CheckResult> {
    checks_for(c, opts).iter().map(Check::run).collect()
}

fn symmetrizer_check(c: &CartanMatrix) -> CheckResult {
    let d = c.symmetrizer();
    let n = c.n();
    let ok = (0..n).all(|i| (0..n).all(|j| d[i] as i64 * c.entry(i, j) == d[j] as i64 * c.entry(j, i)));
    CheckResult::new("symmetrizable Cartan matrix", ok, format!("d = {d:?}"))
}

fn coefficient_check(c: &CartanMatrix) -> CheckResult {
    let name = "inhomogeneous Serre coefficients: recursion against closed form";
    let n = c.n();
    let mut entries: Vec<i64> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| c.entry(i, j)).collect();
    entries.sort_unstable();
    entries.dedup();
    for &a in &entries {
        let top = (1 - a) as usize;
        for r in 0..=top + 1 {
            let row = coeff_row(a, r);
            if !row.c[r].is_one() || (r >= 1 && !row.c[r - 1].is_zero()) {
                return CheckResult::new(name, false, format!("leading coefficients wrong for a = {a}, r = {r}"));
            }
            if row.c.iter().enumerate().any(|(s, v)| (s + r) % 2 == 1 && !v.is_zero()) {
                return CheckResult::new(name, false, format!("parity fails for a = {a}, r = {r}"));
            }
            if r % 2 == 0 && row.c[0] != c0_closed_form(a, r / 2) {
                return CheckResult::new(name, false, format!("c_0 closed form fails for a = {a}, r = {r}"));
            }
        }
    }
    CheckResult::new(name, true, format!("entries {entries:?}"))
}

fn relations_check(c: &CartanMatrix, rz: &Realization) -> CheckResult {
    let name = "inhomogeneous Serre relations vanish under psi";
    let rels = relations(c);
    for (i, j, rel) in &rels {
        match psi_eval(rz, rel) {
            Ok(v) if v.is_zero() => {}
            Ok(_) => return CheckResult::new(name, false, format!("relation (B{}, B{}) is not killed", c.label(*i), c.label(*j))),
            Err(e) => return CheckResult::new(name, false, e.to_string()),
        }
    }
    CheckResult::new(name, true, format!("{} relations", rels.len()))
}

fn filtration_check(rz: &Realization, jmax: usize) -> CheckResult {
    let f = filtration_dims(rz, jmax);
    CheckResult::new("graded dimensions of the filtration", f.matches(), format!("dims {:?}, root multiplicities {:?}", f.dims, f.expected))
}

fn character_dim_check(c: &CartanMatrix, rz: &Realization, height: Option<i64>) -> CheckResult {
    let name = "character space dimension equals |E_A|";
    let e = c.even_columns();
    let h = height.unwrap_or_else(|| default_window(rz));
    match character_space(rz, h) {
        Ok(cs) => {
            let labels: Vec<usize> = e.iter().map(|&j| c.label(j)).collect();
            CheckResult::new(name, cs.dim() == e.len(), format!("window {h}: dimension {}, E_A = {labels:?}", cs.dim()))
        }
        Err(err) => CheckResult::new(name, false, err.to_string()),
    }
}

fn omega_check(t: &StructureTable) -> CheckResult {
    let name = "Chevalley involution is an automorphism";
    let basis = t.basis();
    for &x in &basis {
        let bx = ChevElement::basis(x);
        if t.omega(&t.omega(&bx)) != bx {
            return CheckResult::new(name, false, format!("omega is not an involution on {x:?}"));
        }
        for &y in &basis {
            let by = ChevElement::basis(y);
            if t.omega(&t.bracket(&bx, &by)) != t.bracket(&t.omega(&bx), &t.omega(&by)) {
                return CheckResult::new(name, false, format!("fails on {x:?}, {y:?}"));
            }
        }
    }
    CheckResult::new(name, true, format!("{} basis pairs", basis.len() * basis.len()))
}

fn y_structure_check(t: &StructureTable) -> CheckResult {
    let name = "fix-point basis structure constants";
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
            // y_{-γ} = -y_γ
            if let Some(d) = rs.id(&(&ra - &rb)) {
                let (id, sign) = if rs.is_positive_id(d) { (d, 1) } else { (rs.negate(d), -1) };
                want.add_scaled(&t.y(id), &rat(-sign * t.n(a, rs.negate(b))));
            }
            if t.bracket(&t.y(a), &t.y(b)) != want {
                return CheckResult::new(name, false, format!("[y({ra}), y({rb})] differs"));
            }
        }
    }
    CheckResult::new(name, true, format!("{} pairs", np * (np - 1)))
}

fn almost_relation_check(t: &StructureTable) -> CheckResult {
    let name = "almost-relation identity";
    let c = t.cartan();
    let n = c.n();
    let mut count = 0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for r in 0..=(2 - c.entry(i, j)) as usize {
                let (l, rr) = almost_relation_sides(t, i, j, r);
                if l != rr {
                    return CheckResult::new(name, false, format!("fails for i = {}, j = {}, r = {r}", c.label(i), c.label(j)));
                }
                count += 1;
            }
        }
    }
    CheckResult::new(name, true, format!("{count} cases"))
}

fn sl_check(r: usize) -> CheckResult {
    let name = "sl realization is a homomorphism";
    let sl = sl_realization(r);
    let res = sl.check_homomorphism().and_then(|_| sl.check_omega_transpose());
    CheckResult::from_result(name, res.map(|_| format!("{}x{} matrices, omega = minus transpose", r + 1, r + 1)))
}

fn sp_check(r: usize) -> CheckResult {
    let name = "sp realization is a homomorphism";
    let res = sp_realization(r).map_err(|e| e.to_string()).and_then(|sp| {
        sp.realization.check_homomorphism()?;
        sp.realization.check_omega_transpose()?;
        Ok(format!("signs against the generic table {:?}", sp.signs))
    });
    CheckResult::from_result(name, res)
}

fn eta_check(r: usize) -> CheckResult {
    let name = "eta is a homomorphism on the fix-point algebra";
    let res = sp_realization(r).map_err(|e| e.to_string()).and_then(|sp| {
        let t = sp.realization.table();
        let np = t.root_system().num_positive();
        let imgs = (0..np).map(|a| eta(&sp, &t.y(a))).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
        for a in 0..np {
            for b in 0..np {
                let lhs = eta(&sp, &t.bracket(&t.y(a), &t.y(b))).map_err(|e| e.to_string())?;
                if lhs != imgs[a].commutator(&imgs[b]) {
                    return Err(format!("bracket of y{a} and y{b} is not preserved"));
                }
            }
        }
        Ok(format!("{} pairs", np * np))
    });
    CheckResult::from_result(name, res)
}

fn gl_check(r: usize) -> CheckResult {
    let name = "gl presentation of the fix-point algebra";
    match verify_gl_presentation(r) {
        Ok(rep) => {
            let failed: Vec<&str> = rep.checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect();
            if failed.is_empty() {
                CheckResult::new(name, true, format!("{} relations", rep.checks.len()))
            } else {
                CheckResult::new(name, false, failed.join("; "))
            }
        }
        Err(e) => CheckResult::new(name, false, e.to_string()),
    }
}

fn chi_finite_check(r: usize) -> CheckResult {
    let name = "explicit characters of type C";
    let rz = Realization::Finite(sp_table(r));
    let t = GaussianRational::new(rat(2), rat(3));
    let res = (|| {
        let cs = character_space(&rz, default_window(&rz)).map_err(|e| e.to_string())?;
        let chi = cs.character(&rz, &BTreeMap::from([(r - 1, t.clone())])).map_err(|e| e.to_string())?;
        let Realization::Finite(tab) = &rz else { unreachable!() };
        for (idx, v) in &chi.values {
            let FixIndex::Finite(a) = idx else { unreachable!() };
            let alpha = tab.root_system().root(*a);
            if *v != chi_finite(r, &t, &alpha).map_err(|e| e.to_string())? {
                return Err(format!("value on y({alpha}) differs"));
            }
        }
        Ok(format!("{} roots, t = {t}", chi.values.len()))
    })();
    CheckResult::from_result(name, res)
}

fn affine_structure_check(lp: &LoopAlgebra, levels: i64) -> CheckResult {
    let name = "affine fix-point structure constants";
    let idx = lp.signed_indices(levels);
    let mut count = 0;
    for a in &idx {
        for b in &idx {
            let got = match lp.k_bracket_expand(a, b) {
                Ok(g) => g,
                Err(e) => return CheckResult::new(name, false, e.to_string()),
            };
            if got != normalize_expansion(&lp.closed_form_bracket(a, b)) {
                return CheckResult::new(name, false, format!("[{a}, {b}] differs from the closed form"));
            }
            count += 1;
        }
    }
    CheckResult::new(name, true, format!("{count} pairs, levels up to {levels}"))
}

fn omega_tilde_check(lp: &LoopAlgebra) -> CheckResult {
    let name = "loop involution is an automorphism";
    let mut basis: Vec<LoopElement> = Vec::new();
    for b in lp.table().basis() {
        for k in -1..=1 {
            basis.push(LoopElement::basis(b, k));
        }
    }
    basis.push(LoopElement::central());
    basis.push(LoopElement::derivation());
    for x in &basis {
        if lp.omega_tilde(&lp.omega_tilde(x)) != *x {
            return CheckResult::new(name, false, format!("not an involution on {x:?}"));
        }
        for y in &basis {
            if lp.omega_tilde(&lp.bracket(x, y)) != lp.bracket(&lp.omega_tilde(x), &lp.omega_tilde(y)) {
                return CheckResult::new(name, false, format!("fails on {x:?}, {y:?}"));
            }
        }
    }
    CheckResult::new(name, true, format!("{} basis pairs", basis.len() * basis.len()))
}

fn dolan_grady_check() -> CheckResult {
    let name = "Dolan-Grady relations";
    let c = preset("A1~").expect("preset");
    let f = FreeLieAlgebra::new(2);
    let rels = relations(&c);
    for (i, j, rel) in &rels {
        let (bi, bj) = (f.generator(*i), f.generator(*j));
        let inner = f.bracket(&bi, &bj);
        let want = f.bracket(&bi, &f.bracket(&bi, &inner)).plus(&inner.scaled(&rat(4)));
        if *rel != want {
            return CheckResult::new(name, false, format!("relation for (B{}, B{}) is not Dolan-Grady", c.label(*i), c.label(*j)));
        }
    }
    let labels: Vec<usize> = (0..2).map(|i| c.label(i)).collect();
    let shown: Vec<String> = rels.iter().map(|(_, _, r)| r.display_with(&labels)).collect();
    CheckResult::new(name, rels.len() == 2, shown.join("; "))
}

fn onsager_check(lp: &LoopAlgebra, bound: i64) -> CheckResult {
    let name = "Onsager structure constants";
    let a = |m: i64| onsager_basis(lp, m).0;
    let g = |m: i64| onsager_basis(lp, m).1;
    let two = rat(2);
    for k in -bound..=bound {
        for l in -bound..=bound {
            if lp.bracket(&a(l), &a(k)) != g(k - l) {
                return CheckResult::new(name, false, format!("[A{l}, A{k}] != G{}", k - l));
            }
        }
        for m in 1..=bound {
            let want = a(k + m).minus(&a(k - m)).scaled(&two);
            if lp.bracket(&g(m), &a(k)) != want {
                return CheckResult::new(name, false, format!("[G{m}, A{k}] != 2(A{} - A{})", k + m, k - m));
            }
            for n in 1..=bound {
                if !lp.bracket(&g(m), &g(n)).is_zero() {
                    return CheckResult::new(name, false, format!("[G{m}, G{n}] != 0"));
                }
            }
        }
    }
    CheckResult::new(name, true, format!("indices up to {bound}"))
}

fn chi_affine_check(c: &CartanMatrix, r: usize) -> CheckResult {
    let name = "explicit affine characters of type C";
    let res = (|| {
        let lp = LoopAlgebra::with_table(c, sp_table(r)).map_err(|e| e.to_string())?;
        let rz = Realization::AffineLoop(lp.clone());
        let h = default_window(&rz);
        let cs = character_space(&rz, h).map_err(|e| e.to_string())?;
        let (s, t) = (GaussianRational::from_i64(5), GaussianRational::i());
        let chi = cs.character(&rz, &BTreeMap::from([(0, s.clone()), (r, t.clone())])).map_err(|e| e.to_string())?;
        for (idx, v) in &chi.values {
            let FixIndex::Affine(a) = idx else { unreachable!() };
            if *v != chi_affine(r, &s, &t, &a.root, a.i).map_err(|e| e.to_string())? {
                return Err(format!("value on {a} differs"));
            }
        }
        let shifts = check_shift_invariance(&lp, &chi, 2).map_err(|a| format!("shift invariance fails at {a}"))?;
        let mut kappas = Vec::new();
        for j in 2..=r {
            let st = step_identity(&lp, j);
            if !st.holds {
                return Err(format!("step identity fails for j = {j}"));
            }
            kappas.push((st.kappa_plus, st.kappa_minus));
        }
        Ok(format!("window {h}: {} values, {shifts} shift pairs, step kappas {kappas:?}", chi.values.len()))
    })();
    CheckResult::from_result(name, res)
}

/// Whether `c` has a realization, i.e. is finite or untwisted affine.
pub fn has_realization(c: &CartanMatrix) -> bool {
    c.kind() != CartanKind::Other
}
