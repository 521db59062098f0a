//! One function per subcommand. Each returns the text and JSON renderings of
//! its report together with the exit status.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Number;

use onsager_core::affine_loop::{AffineFixIndex, LoopAlgebra};
use onsager_core::cartan::{parse_matrix_text, preset, validate, CartanKind, CartanMatrix};
use onsager_core::characters::{character_space, default_window};
use onsager_core::chevalley::{sp_table, StructureTable};
use onsager_core::exact_math::{rational_to_i64, GaussianRational, Rational};
use onsager_core::freelie::parse_bracket;
use onsager_core::onsager::{psi_eval_expr, relations, Element, FixIndex, Realization};
use onsager_core::roots::AffineRoot;
use onsager_core::serre_coeffs::{coeff_table, coeff_table_symbolic};
use onsager_core::verify::{checks_for, VerifyOptions};

use crate::cli::{Cli, Command, MatrixSource};
use crate::report::*;

/// Exit status for a failed check.
pub const EXIT_FAIL: i32 = 1;
/// Exit status for bad input.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum KitError {
    #[error("{0}")]
    Usage(String),
}

fn usage(msg: impl Into<String>) -> KitError {
    KitError::Usage(msg.into())
}

/// Rendered output of one command.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub text: String,
    pub json: String,
    pub status: i32,
}

impl Outcome {
    fn new<T: Serialize>(text: String, report: &T, status: i32) -> Self {
        let json = serde_json::to_string_pretty(report).expect("reports serialize");
        Self { text, json, status }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, KitError> {
    match &cli.command {
        Command::Coeffs { a, rmax } => Ok(coeffs(*a, *rmax)),
        Command::Relations { source } => relations_cmd(&load(source)?),
        Command::Roots { source, height } => roots_cmd(&load(source)?, *height),
        Command::Structconst { source, height } => structconst_cmd(&load(source)?, *height),
        Command::Verify { source, jmax, height, levels } => {
            let opts = VerifyOptions { jmax: jmax.map(|j| j as usize), height: *height, levels: *levels, ..VerifyOptions::default() };
            Ok(verify_cmd(&load(source)?, &opts))
        }
        Command::Chars { source, height } => chars_cmd(&load(source)?, *height),
        Command::Eval { source, expr } => eval_cmd(&load(source)?, expr),
    }
}

/// Reads the matrix from a preset name or a file.
pub fn load(source: &MatrixSource) -> Result<CartanMatrix, KitError> {
    match (&source.preset, &source.matrix_file) {
        (Some(name), None) => preset(name).map_err(|e| usage(e.to_string())),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            let rows = parse_matrix_text(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            validate(&rows).map_err(|e| usage(format!("{}: {e}", path.display())))
        }
        _ => Err(usage("give exactly one of --preset or --matrix-file")),
    }
}

fn realization(c: &CartanMatrix) -> Result<Realization, KitError> {
    Realization::for_cartan(c).map_err(|_| usage("only finite and untwisted affine matrices have a realization; this matrix is of other type"))
}

fn matrix_info(c: &CartanMatrix) -> MatrixInfo {
    MatrixInfo {
        name: c.type_name().map(str::to_string),
        kind: c.kind().to_string(),
        rows: c.rows().to_vec(),
        labels: (0..c.n()).map(|i| c.label(i)).collect(),
        symmetrizer: c.symmetrizer().to_vec(),
    }
}

fn header(c: &CartanMatrix) -> String {
    let name = c.type_name().unwrap_or("unnamed");
    format!("{name} ({}), {}x{}\n", c.kind(), c.n(), c.n())
}

fn big_number(x: &BigInt) -> Number {
    Number::from_str(&x.to_string()).expect("integers are JSON numbers")
}

// ---------------------------------------------------------------- naming

/// Labels of the coordinates of a finite root.
fn finite_labels(rz: &Realization) -> Vec<usize> {
    match rz {
        Realization::Finite(t) => (1..=t.rank()).collect(),
        Realization::AffineLoop(l) => {
            let c = l.cartan();
            l.affine_roots().finite_nodes().iter().map(|&i| c.label(i)).collect()
        }
    }
}

/// `α1+2α2`, `-α1`, `0`.
fn root_name(coords: &[i64], labels: &[usize]) -> String {
    let mut s = String::new();
    for (&c, &l) in coords.iter().zip(labels) {
        if c == 0 {
            continue;
        }
        if c < 0 {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        if c.abs() != 1 {
            let _ = write!(s, "{}", c.abs());
        }
        let _ = write!(s, "α{l}");
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn affine_root_name(g: &AffineRoot, labels: &[usize]) -> String {
    let delta = match g.level {
        1 => "δ".to_string(),
        -1 => "-δ".to_string(),
        k => format!("{k}δ"),
    };
    if g.finite.is_zero() {
        delta
    } else if g.level == 0 {
        root_name(g.finite.coords(), labels)
    } else if g.level > 0 {
        format!("{}+{delta}", root_name(g.finite.coords(), labels))
    } else {
        format!("{}{delta}", root_name(g.finite.coords(), labels))
    }
}

fn idx_name(rz: &Realization, idx: &FixIndex) -> String {
    let labels = finite_labels(rz);
    match (rz, idx) {
        (Realization::Finite(t), FixIndex::Finite(a)) => format!("y({})", root_name(t.root_system().root(*a).coords(), &labels)),
        (_, FixIndex::Affine(a)) => affine_idx_name(a, &labels),
        _ => unreachable!("index from another realization"),
    }
}

fn affine_idx_name(a: &AffineFixIndex, labels: &[usize]) -> String {
    let g = affine_root_name(&a.root, labels);
    if a.root.is_imaginary() {
        format!("y({g})^({})", labels[a.i])
    } else {
        format!("y({g})")
    }
}

fn idx_json(rz: &Realization, idx: &FixIndex) -> Idx {
    match (rz, idx) {
        (Realization::Finite(t), FixIndex::Finite(a)) => Idx { root: t.root_system().root(*a).0, level: None, i: None },
        (_, FixIndex::Affine(a)) => affine_idx_json(a),
        _ => unreachable!("index from another realization"),
    }
}

fn affine_idx_json(a: &AffineFixIndex) -> Idx {
    Idx { root: a.root.finite.0.clone(), level: Some(a.root.level), i: a.root.is_imaginary().then_some(a.i + 1) }
}

/// `2·y(α1) - y(α2)`.
fn combination<T>(terms: &[(T, i64)], name: impl Fn(&T) -> String) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (k, (t, c)) in terms.iter().enumerate() {
        let sign = if *c < 0 { "-" } else { "+" };
        if k == 0 {
            if *c < 0 {
                s.push('-');
            }
        } else {
            let _ = write!(s, " {sign} ");
        }
        if c.abs() != 1 {
            let _ = write!(s, "{}·", c.abs());
        }
        s.push_str(&name(t));
    }
    s
}

fn integral(coords: BTreeMap<FixIndex, Rational>) -> Result<Vec<(FixIndex, i64)>, String> {
    coords.into_iter().map(|(k, c)| rational_to_i64(&c).map(|v| (k, v)).ok_or_else(|| format!("coefficient {c} is not an integer"))).collect()
}

fn expand(rz: &Realization, x: &Element) -> Result<Vec<(FixIndex, i64)>, String> {
    let coords = rz.y_coords(x).map_err(|e| e.to_string())?;
    integral(coords)
}

// ---------------------------------------------------------------- coeffs

fn poly_name(p: &[BigInt]) -> String {
    let mut s = String::new();
    for (d, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push(if neg { '-' } else { '+' });
        }
        let mag = c.abs();
        if !mag.is_one() || d == 0 {
            let _ = write!(s, "{mag}");
        }
        match d {
            0 => {}
            1 => s.push('a'),
            _ => {
                let _ = write!(s, "a^{d}");
            }
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

pub fn coeffs(a: Option<i64>, rmax: usize) -> Outcome {
    let mut text = String::new();
    let mut report = CoeffsReport { schema: SCHEMA, command: "coeffs".into(), rows: Vec::new(), symbolic: Vec::new() };
    match a {
        Some(a) => {
            let _ = writeln!(text, "c_s[r] for a = {a}, s = 0..r");
            for row in coeff_table(a, rmax) {
                let cells: Vec<String> = row.c.iter().map(ToString::to_string).collect();
                let _ = writeln!(text, "r = {}: ({})", row.r, cells.join(", "));
                report.rows.push(CoeffRowJson { a, r: row.r, c: row.c.iter().map(big_number).collect() });
            }
        }
        None => {
            let _ = writeln!(text, "c_s[r] as polynomials in a = a_ij, s = 0..r");
            for (r, row) in coeff_table_symbolic(rmax).into_iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|p| poly_name(p)).collect();
                let _ = writeln!(text, "r = {r}: ({})", cells.join(", "));
                report.symbolic.push(SymbolicRowJson { r, c: row.iter().map(|p| p.iter().map(big_number).collect()).collect() });
            }
        }
    }
    Outcome::new(text, &report, 0)
}

// ---------------------------------------------------------------- relations

fn ad_form(a: i64, li: usize, lj: usize) -> String {
    let row = onsager_core::serre_coeffs::coeff_row(a, (1 - a) as usize);
    let mut terms = Vec::new();
    for (s, c) in row.c.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let body = match s {
            0 => format!("B{lj}"),
            1 => format!("(ad B{li}) B{lj}"),
            _ => format!("(ad B{li})^{s} B{lj}"),
        };
        terms.push((body, c.clone()));
    }
    let mut s = String::new();
    for (k, (body, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if !c.abs().is_one() {
            let _ = write!(s, "{} ", c.abs());
        }
        s.push_str(body);
    }
    s
}

pub fn relations_cmd(c: &CartanMatrix) -> Result<Outcome, KitError> {
    let labels: Vec<usize> = (0..c.n()).map(|i| c.label(i)).collect();
    let mut text = header(c);
    let mut out = Vec::new();
    for (i, j, rel) in relations(c) {
        let a = c.entry(i, j);
        let (li, lj) = (labels[i], labels[j]);
        let display = rel.display_with(&labels);
        let _ = writeln!(text, "(B{li}, B{lj}), a = {a}: {} = 0", ad_form(a, li, lj));
        let _ = writeln!(text, "    Lyndon form: {display} = 0");
        let terms = rel.terms().map(|(w, q)| WordTerm { word: w.iter().map(|&x| labels[x]).collect(), coeff: q.to_string() }).collect();
        out.push(RelationJson { i: li, j: lj, a, display, terms });
    }
    if out.is_empty() {
        text.push_str("no relations (single generator)\n");
    }
    let report = RelationsReport { schema: SCHEMA, command: "relations".into(), matrix: matrix_info(c), relations: out };
    Ok(Outcome::new(text, &report, 0))
}

// ---------------------------------------------------------------- roots

pub fn roots_cmd(c: &CartanMatrix, height: Option<i64>) -> Result<Outcome, KitError> {
    let rz = realization(c)?;
    let labels = finite_labels(&rz);
    let mut text = header(c);
    let mut roots = Vec::new();
    let h = match &rz {
        Realization::Finite(t) => {
            let rs = t.root_system();
            let h = height.unwrap_or(rs.max_height());
            for (id, alpha) in rs.positive_roots().iter().enumerate() {
                if alpha.height() > h {
                    continue;
                }
                let coroot = t.coroot(id);
                let long = rs.is_long(alpha);
                let name = root_name(alpha.coords(), &labels);
                let _ = writeln!(text, "ht {:>2}  {name:<16} k = {coroot:?}{}", alpha.height(), if long { "  long" } else { "" });
                roots.push(RootJson { coords: alpha.0.clone(), height: alpha.height(), multiplicity: 1, name, coroot: Some(coroot), long: Some(long), finite: None, level: None });
            }
            h
        }
        Realization::AffineLoop(l) => {
            let ars = l.affine_roots();
            let h = height.unwrap_or(2 * ars.delta_height());
            let _ = writeln!(text, "ht(δ) = {}", ars.delta_height());
            for (g, m) in ars.positive_roots_up_to(h) {
                let idx_coords = ars.affine_coords(&g);
                let mut coords = vec![0; c.n()];
                for (i, v) in idx_coords.iter().enumerate() {
                    coords[c.label(i)] = *v;
                }
                let name = affine_root_name(&g, &labels);
                let ht = ars.height(&g);
                let _ = writeln!(text, "ht {ht:>2}  {name:<20} mult {m}");
                roots.push(RootJson { coords, height: ht, multiplicity: m, name, coroot: None, long: None, finite: Some(g.finite.0.clone()), level: Some(g.level) });
            }
            h
        }
    };
    let report = RootsReport { schema: SCHEMA, command: "roots".into(), matrix: matrix_info(c), height: h, roots };
    Ok(Outcome::new(text, &report, 0))
}

// ---------------------------------------------------------------- structconst

fn n_table(t: &StructureTable) -> Vec<NEntry> {
    t.n_entries().into_iter().map(|(a, b, n)| NEntry { alpha: a.0, beta: b.0, n }).collect()
}

fn sub(x: &str, m: i64) -> String {
    if m < 0 {
        format!("{x}_{{{m}}}")
    } else {
        format!("{x}_{m}")
    }
}

/// `A_m = y(α1+mδ)`, `G_m = y(mδ)`: names an expansion in the Onsager basis.
fn onsager_name(terms: &[(FixIndex, i64)]) -> String {
    let named: Vec<(String, i64)> = terms
        .iter()
        .map(|(idx, c)| {
            let FixIndex::Affine(a) = idx else { unreachable!("affine index") };
            if a.root.is_imaginary() {
                (sub("G", a.root.level), *c)
            } else if a.root.finite.is_positive() {
                (sub("A", a.root.level), *c)
            } else {
                // y(-α1+kδ) = -A_{-k}
                (sub("A", -a.root.level), -*c)
            }
        })
        .collect();
    combination(&named, |s| s.clone())
}

fn onsager_table(l: &LoopAlgebra, rz: &Realization) -> Result<Vec<NamedBracket>, String> {
    let a = |m: i64| Element::Loop(onsager_core::affine_loop::onsager_basis(l, m).0);
    let g = |m: i64| Element::Loop(onsager_core::affine_loop::onsager_basis(l, m).1);
    let mut out = Vec::new();
    let mut push = |lhs: String, x: Element, y: Element| -> Result<(), String> {
        let terms = expand(rz, &rz.bracket(&x, &y))?;
        out.push(NamedBracket { lhs, rhs: onsager_name(&terms) });
        Ok(())
    };
    for p in 0..=2 {
        for q in p + 1..=2 {
            push(format!("[{}, {}]", sub("A", p), sub("A", q)), a(p), a(q))?;
        }
    }
    for p in 1..=2 {
        for q in 0..=2 {
            push(format!("[{}, {}]", sub("G", p), sub("A", q)), g(p), a(q))?;
        }
    }
    push("[G_1, G_2]".into(), g(1), g(2))?;
    Ok(out)
}

pub fn structconst_cmd(c: &CartanMatrix, height: Option<i64>) -> Result<Outcome, KitError> {
    let rz = realization(c)?;
    let mut text = header(c);
    let mut expansions = Vec::new();
    let mut onsager = Vec::new();
    let (table, basis) = match &rz {
        Realization::Finite(t) => (t.clone(), rz.basis_up_to(height.unwrap_or(t.root_system().max_height()))),
        Realization::AffineLoop(l) => (l.table().clone(), rz.basis_up_to(height.unwrap_or(l.affine_roots().delta_height() + 1))),
    };
    let labels = finite_labels(&rz);
    let nt = n_table(&table);
    text.push_str("N(α, β) for positive α, β with α+β a root:\n");
    for e in nt.iter().filter(|e| e.alpha.iter().all(|&x| x >= 0) && e.beta.iter().all(|&x| x >= 0)) {
        let sum: Vec<i64> = e.alpha.iter().zip(&e.beta).map(|(x, y)| x + y).collect();
        let rhs = combination(&[(sum, e.n)], |s| format!("e({})", root_name(s, &labels)));
        let _ = writeln!(text, "  [e({}), e({})] = {rhs}", root_name(&e.alpha, &labels), root_name(&e.beta, &labels));
    }
    text.push_str("y-basis brackets:\n");
    for (p, u) in basis.iter().enumerate() {
        for v in &basis[p + 1..] {
            let terms = expand(&rz, &rz.bracket(&rz.y(u), &rz.y(v))).map_err(usage)?;
            let _ = writeln!(text, "  [{}, {}] = {}", idx_name(&rz, u), idx_name(&rz, v), combination(&terms, |k| idx_name(&rz, k)));
            expansions.push(Expansion {
                lhs: vec![idx_json(&rz, u), idx_json(&rz, v)],
                rhs: terms.iter().map(|(k, c)| IdxTerm { idx: idx_json(&rz, k), coeff: *c }).collect(),
            });
        }
    }
    if let Realization::AffineLoop(l) = &rz {
        if c.type_name() == Some("A1~") {
            onsager = onsager_table(l, &rz).map_err(usage)?;
            text.push_str("Onsager basis A_m = y(α1+mδ), G_m = y(mδ):\n");
            for b in &onsager {
                let _ = writeln!(text, "  {} = {}", b.lhs, b.rhs);
            }
        }
    }
    let report = StructReport { schema: SCHEMA, command: "structconst".into(), matrix: matrix_info(c), n_table: nt, expansions, onsager };
    Ok(Outcome::new(text, &report, 0))
}

// ---------------------------------------------------------------- verify

pub fn verify_cmd(c: &CartanMatrix, opts: &VerifyOptions) -> Outcome {
    let checks = checks_for(c, opts);
    // results are collected in check order whatever the scheduling
    let results: Vec<_> = checks.par_iter().map(|ch| ch.run()).collect();
    let mut text = header(c);
    for r in &results {
        let _ = writeln!(text, "{}  {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed == 0 {
        let _ = writeln!(text, "all {} checks passed", results.len());
    } else {
        let _ = writeln!(text, "{failed} of {} checks failed", results.len());
    }
    let report = VerifyReport {
        schema: SCHEMA,
        command: "verify".into(),
        matrix: matrix_info(c),
        passed: failed == 0,
        checks: results.iter().map(|r| CheckJson { name: r.name.clone(), passed: r.passed, detail: r.detail.clone() }).collect(),
    };
    Outcome::new(text, &report, if failed == 0 { 0 } else { EXIT_FAIL })
}

// ---------------------------------------------------------------- chars

/// Type `C_r` or `C_r~` presets use the basis of the explicit symplectic
/// matrices, in which the closed-form character values hold.
fn chars_realization(c: &CartanMatrix) -> Result<(Realization, bool), KitError> {
    let same = |name: &str| preset(name).map(|p| p.rows() == c.rows()).unwrap_or(false);
    match c.kind() {
        CartanKind::Finite if c.n() >= 2 && same(&format!("C{}", c.n())) => Ok((Realization::Finite(sp_table(c.n())), true)),
        CartanKind::UntwistedAffine if c.n() >= 3 && same(&format!("C{}~", c.n() - 1)) => {
            let lp = LoopAlgebra::with_table(c, sp_table(c.n() - 1)).map_err(|e| usage(e.to_string()))?;
            Ok((Realization::AffineLoop(lp), true))
        }
        _ => Ok((realization(c)?, false)),
    }
}

pub fn chars_cmd(c: &CartanMatrix, height: Option<i64>) -> Result<Outcome, KitError> {
    let (rz, explicit) = chars_realization(c)?;
    let e = c.even_columns();
    let e_labels: Vec<usize> = e.iter().map(|&j| c.label(j)).collect();
    let h = height.unwrap_or_else(|| default_window(&rz));
    let cs = character_space(&rz, h).map_err(|err| usage(format!("{err}; pass a larger --height")))?;

    // one column per generator in E_A when they determine the character,
    // otherwise the raw nullspace basis
    let mut columns = Vec::new();
    let mut table: Vec<Vec<GaussianRational>> = Vec::new();
    let mut by_generator = cs.dim() == e.len();
    if by_generator {
        for &j in &e {
            match cs.character(&rz, &BTreeMap::from([(j, GaussianRational::one())])) {
                Ok(chi) => table.push(cs.basis.iter().map(|b| chi.value(b).cloned().unwrap_or_else(GaussianRational::zero)).collect()),
                Err(_) => {
                    by_generator = false;
                    break;
                }
            }
            columns.push(format!("χ(Y{})=1", c.label(j)));
        }
    }
    if !by_generator {
        columns = (1..=cs.dim()).map(|k| format!("f{k}")).collect();
        table = cs.functionals.iter().map(|f| f.iter().map(|q| GaussianRational::real(q.clone())).collect()).collect();
    }

    let mut text = header(c);
    let _ = writeln!(text, "E_A = {{{}}}", e_labels.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "));
    let _ = writeln!(text, "window H = {h}: {} basis vectors, {} constraints", cs.basis.len(), cs.constraints);
    let _ = writeln!(text, "character space dimension {} (|E_A| = {})", cs.dim(), e.len());
    if explicit {
        text.push_str("values in the basis of the explicit symplectic matrices\n");
    }
    let names: Vec<String> = cs.basis.iter().map(|b| idx_name(&rz, b)).collect();
    let width = names.iter().map(|n| n.chars().count()).max().unwrap_or(0).max(8);
    let _ = write!(text, "{:<width$}", "");
    for col in &columns {
        let _ = write!(text, "  {col:>10}");
    }
    text.push('\n');
    let mut values = Vec::new();
    for (p, b) in cs.basis.iter().enumerate() {
        let vals: Vec<String> = table.iter().map(|col| col[p].to_string()).collect();
        let pad = width - names[p].chars().count();
        let _ = write!(text, "{}{}", names[p], " ".repeat(pad));
        for v in &vals {
            let _ = write!(text, "  {v:>10}");
        }
        text.push('\n');
        values.push(CharValue { idx: idx_json(&rz, b), name: names[p].clone(), values: vals });
    }
    let ok = cs.dim() == e.len();
    let report = CharsReport {
        schema: SCHEMA,
        command: "chars".into(),
        matrix: matrix_info(c),
        even_columns: e_labels,
        window: h,
        dimension: cs.dim(),
        explicit_basis: explicit,
        columns,
        values,
    };
    Ok(Outcome::new(text, &report, if ok { 0 } else { EXIT_FAIL }))
}

// ---------------------------------------------------------------- eval

pub fn eval_cmd(c: &CartanMatrix, expr: &str) -> Result<Outcome, KitError> {
    let rz = realization(c)?;
    let e = parse_bracket(expr).map_err(|err| usage(format!("cannot parse `{expr}`: {err}")))?;
    let v = psi_eval_expr(&rz, &e).map_err(|err| usage(err.to_string()))?;
    let terms = expand(&rz, &v).map_err(usage)?;
    let display = combination(&terms, |k| idx_name(&rz, k));
    let text = format!("ψ({e}) = {display}\n");
    let report = EvalReport {
        schema: SCHEMA,
        command: "eval".into(),
        matrix: matrix_info(c),
        expr: e.to_string(),
        display,
        rhs: terms.iter().map(|(k, q)| IdxTerm { idx: idx_json(&rz, k), coeff: *q }).collect(),
    };
    Ok(Outcome::new(text, &report, 0))
}
