use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "onsager-kit", version, about = "Exact checks for generalized Onsager algebras")]
pub struct Cli {
    /// Emit a JSON report instead of text
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Exactly one of a preset name or a matrix file.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct MatrixSource {
    /// Preset name such as A2, G2, A1~, C2~
    #[arg(long)]
    pub preset: Option<String>,
    /// Whitespace-separated integer matrix, one row per line
    #[arg(long, value_name = "PATH")]
    pub matrix_file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficients c_s[r] of the inhomogeneous Serre relations
    Coeffs {
        /// Cartan entry a_ij; omit for the table as polynomials in a
        #[arg(long, allow_negative_numbers = true)]
        a: Option<i64>,
        #[arg(long, default_value_t = 5)]
        rmax: usize,
    },
    /// The inhomogeneous Serre relations of the matrix
    Relations {
        #[command(flatten)]
        source: MatrixSource,
    },
    /// Positive roots with heights and multiplicities
    Roots {
        #[command(flatten)]
        source: MatrixSource,
        /// Height bound (affine default: 2 ht(δ))
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        height: Option<i64>,
    },
    /// Structure constants and y-basis bracket expansions
    Structconst {
        #[command(flatten)]
        source: MatrixSource,
        /// Height bound for affine expansions (default ht(δ) + 1)
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        height: Option<i64>,
    },
    /// Run every applicable check
    Verify {
        #[command(flatten)]
        source: MatrixSource,
        /// Filtration depth (finite default: top height, affine default: 6)
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        jmax: Option<u32>,
        /// Character window height
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        height: Option<i64>,
        /// Level bound for affine structure constants
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(i64).range(0..))]
        levels: i64,
    },
    /// One-dimensional representations of the fix-point algebra
    Chars {
        #[command(flatten)]
        source: MatrixSource,
        /// Window height (affine default: 2 ht(δ) + 2)
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        height: Option<i64>,
    },
    /// Evaluate a bracket expression such as "[B1,[B1,B2]]" in the fix-point algebra
    Eval {
        #[command(flatten)]
        source: MatrixSource,
        expr: String,
    },
}
