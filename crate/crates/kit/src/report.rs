//! JSON report types. Every report carries `"schema": 1` and a `command` tag.
//!
//! Big integers travel as JSON numbers of arbitrary precision, rationals and
//! Gaussian rationals as strings (`"-3/2"`, `"1/2+3i"`).

use serde::{Deserialize, Serialize};
use serde_json::Number;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixInfo {
    /// detected type, e.g. `C2~`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub kind: String,
    pub rows: Vec<Vec<i64>>,
    /// label of each row (affine node is 0)
    pub labels: Vec<usize>,
    pub symmetrizer: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffRowJson {
    pub a: i64,
    pub r: usize,
    pub c: Vec<Number>,
}

/// `c_s[r]` as polynomials in the Cartan entry, ascending degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicRowJson {
    pub r: usize,
    pub c: Vec<Vec<Number>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffsReport {
    pub schema: u32,
    pub command: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<CoeffRowJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub symbolic: Vec<SymbolicRowJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordTerm {
    /// Lyndon word over generator labels
    pub word: Vec<usize>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    pub i: usize,
    pub j: usize,
    pub a: i64,
    pub display: String,
    pub terms: Vec<WordTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationsReport {
    pub schema: u32,
    pub command: String,
    pub matrix: MatrixInfo,
    pub relations: Vec<RelationJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootJson {
    /// coordinates over the simple roots, in label order
    pub coords: Vec<i64>,
    pub height: i64,
    pub multiplicity: usize,
    pub name: String,
    /// `k_i(α)` with `h_α = Σ k_i h_i` (finite type)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coroot: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub long: Option<bool>,
    /// finite part and δ-level (affine type)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finite: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootsReport {
    pub schema: u32,
    pub command: String,
    pub matrix: MatrixInfo,
    pub height: i64,
    pub roots: Vec<RootJson>,
}

/// A fix-point basis index: finite root, plus level and imaginary slot in the
/// affine case (`i` is 1-based and only present for `kδ`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Idx {
    pub root: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdxTerm {
    pub idx: Idx,
    pub coeff: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expansion {
    pub lhs: Vec<Idx>,
    pub rhs: Vec<IdxTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NEntry {
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
    #[serde(rename = "N")]
    pub n: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedBracket {
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructReport {
    pub schema: u32,
    pub command: String,
    pub matrix: MatrixInfo,
    pub n_table: Vec<NEntry>,
    pub expansions: Vec<Expansion>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub onsager: Vec<NamedBracket>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub command: String,
    pub matrix: MatrixInfo,
    pub passed: bool,
    pub checks: Vec<CheckJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharValue {
    pub idx: Idx,
    pub name: String,
    /// one entry per column of the report
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharsReport {
    pub schema: u32,
    pub command: String,
    pub matrix: MatrixInfo,
    /// labels `j` with `a_ij` even for all `i`
    pub even_columns: Vec<usize>,
    pub window: i64,
    pub dimension: usize,
    /// `true` when type C values are taken in the basis of the explicit
    /// symplectic matrices
    pub explicit_basis: bool,
    /// column headers: `χ(Y_j) = 1` for the listed generator labels, or
    /// nullspace functionals when the generators do not determine them
    pub columns: Vec<String>,
    pub values: Vec<CharValue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalReport {
    pub schema: u32,
    pub command: String,
    pub matrix: MatrixInfo,
    pub expr: String,
    pub display: String,
    pub rhs: Vec<IdxTerm>,
}
