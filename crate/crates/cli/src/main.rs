//! Command-line front end for the max-plus spectral analysis toolkit.
//!
//! Exit codes: 0 on success, 1 when a check requested with `--assert` (or
//! the selftest) fails, 2 on usage, I/O, or domain errors.

mod report;
mod selftest;
mod source;
mod verbs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::Format;
use source::{CliError, Source};

#[derive(Parser)]
#[command(
    name = "maxplus",
    version,
    about = "Max-plus spectral analysis: circuit means, Kleene closures, critical structure, \
             eigenvectors, matrix-power asymptotics, and windowed infinite kernels",
    after_help = "Matrices travel in a plain text format: a `tropical <n>` header followed by \
                  `i j w` entry lines (vectors: `vec <n>` and `i w`), with -inf entries omitted. \
                  Kernel specs name a catalog family with optional parameters, e.g. \
                  \"birth p=-1 q=-3\"; run `maxplus example` to list the catalog."
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

/// Options shared by every verb.
#[derive(Args)]
struct Common {
    /// Comparison tolerance for near-equality checks
    #[arg(long, global = false, default_value_t = 1e-9)]
    eps: f64,
    /// Output style
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the verb's primary artifact (matrix, vector, or table) to FILE
    #[arg(long, value_name = "FILE")]
    emit: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Verb {
    /// Spectral summary: maximal circuit mean, critical graph, cyclicities
    Spectral {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        common: Common,
    },
    /// Kleene closure (star and positive-length plus) of the matrix
    Star {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        common: Common,
        /// Emit and display the positive-length closure instead of star
        #[arg(long)]
        plus: bool,
    },
    /// Principal eigenbasis, or a single vector check with --u
    Eigen {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        common: Common,
        /// Vector file to check instead of computing the basis
        #[arg(long, value_name = "FILE")]
        u: Option<PathBuf>,
        /// Eigenvalue candidate for the --u check
        #[arg(long, allow_hyphen_values = true, requires = "u")]
        lambda: Option<f64>,
        /// Check the one-sided inequality A u <= lambda u instead of equality
        #[arg(long = "super", requires = "u")]
        super_mode: bool,
        /// Rows to ignore in the check (comma-separated), e.g. truncated
        /// window rows
        #[arg(long, value_delimiter = ',', requires = "u")]
        skip: Vec<usize>,
        /// Exit 1 when the check fails
        #[arg(long)]
        assert: bool,
    },
    /// Express an eigenvector over the principal basis
    Decompose {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        common: Common,
        /// Vector file holding the eigenvector
        #[arg(long, value_name = "FILE")]
        u: PathBuf,
        /// Exit 1 when the vector is not an eigenvector or the
        /// reconstruction misses
        #[arg(long)]
        assert: bool,
    },
    /// Entry (i,j) of the first powers of the matrix
    Powers {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        /// Largest power to record
        #[arg(long, default_value_t = 40)]
        nmax: usize,
        /// Shift the matrix by -rho first so the trace is bounded
        #[arg(long)]
        normalized: bool,
    },
    /// Detect the periodic tail of a normalized power trace
    Coupling {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        /// Horizon for the power trace
        #[arg(long, default_value_t = 400)]
        nmax: usize,
        /// Period hint; defaults to the critical-graph cyclicity
        #[arg(long)]
        hint: Option<usize>,
        /// Exit 1 unless the trace is verified to couple
        #[arg(long)]
        assert: bool,
    },
    /// Optimal walks of each length and their off-critical visit counts
    Turnpike {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        /// Smallest walk length
        #[arg(long, default_value_t = 1)]
        from: usize,
        /// Largest walk length
        #[arg(long, default_value_t = 48)]
        nmax: usize,
    },
    /// Martin kernel of the window for an eigenvalue candidate
    Martin {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        common: Common,
        /// Eigenvalue candidate (at or above the window's circuit-mean
        /// radius)
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        /// Basepoint node for the normalization
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
        /// Also probe rows along increasing column index for boundary limits
        #[arg(long)]
        boundary: bool,
        /// Rows to probe with --boundary (comma-separated)
        #[arg(long, value_delimiter = ',', requires = "boundary")]
        rows: Vec<usize>,
        /// Columns to sample with --boundary (comma-separated)
        #[arg(long, value_delimiter = ',', requires = "boundary")]
        cols: Vec<usize>,
        /// Exit 1 when the basepoint bound is violated beyond eps
        #[arg(long)]
        assert: bool,
    },
    /// Level set of the two-sided closure weight through intermediate nodes
    ProbeTight {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        /// Level-set threshold beta
        #[arg(long, allow_hyphen_values = true)]
        level: f64,
        /// Exit 1 when the level set touches the window edge
        #[arg(long)]
        assert: bool,
    },
    /// List the kernel catalog, or show one kernel and export a window
    Example {
        /// Kernel spec to show in detail; omit to list the whole catalog
        #[arg(long, value_name = "SPEC")]
        kernel: Option<String>,
        /// Window size for --emit
        #[arg(long, value_name = "N", requires = "kernel")]
        window: Option<usize>,
        /// Write the truncated window matrix to FILE (needs --window)
        #[arg(long, value_name = "FILE", requires = "window")]
        emit: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the embedded closed-form and consistency checks
    Selftest {
        /// Seed for the randomized consistency batch
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// Whether the verb's verdict held; only meaningful for verbs that check
/// something.
pub enum Outcome {
    Success,
    CheckFailed,
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.verb {
        Verb::Spectral { source, common } => verbs::spectral(&source, &common),
        Verb::Star {
            source,
            common,
            plus,
        } => verbs::star(&source, &common, plus),
        Verb::Eigen {
            source,
            common,
            u,
            lambda,
            super_mode,
            skip,
            assert,
        } => verbs::eigen(&source, &common, u, lambda, super_mode, &skip, assert),
        Verb::Decompose {
            source,
            common,
            u,
            assert,
        } => verbs::decompose(&source, &common, &u, assert),
        Verb::Powers {
            source,
            common,
            i,
            j,
            nmax,
            normalized,
        } => verbs::powers(&source, &common, i, j, nmax, normalized),
        Verb::Coupling {
            source,
            common,
            i,
            j,
            nmax,
            hint,
            assert,
        } => verbs::coupling(&source, &common, i, j, nmax, hint, assert),
        Verb::Turnpike {
            source,
            common,
            i,
            j,
            from,
            nmax,
        } => verbs::turnpike(&source, &common, i, j, from, nmax),
        Verb::Martin {
            source,
            common,
            lambda,
            basepoint,
            boundary,
            rows,
            cols,
            assert,
        } => verbs::martin(
            &source, &common, lambda, basepoint, boundary, &rows, &cols, assert,
        ),
        Verb::ProbeTight {
            source,
            common,
            i,
            j,
            level,
            assert,
        } => verbs::probe_tight(&source, &common, i, j, level, assert),
        Verb::Example {
            kernel,
            window,
            emit,
            eps,
            format,
        } => verbs::example(kernel.as_deref(), window, emit.as_deref(), eps, format),
        Verb::Selftest { seed, eps, format } => selftest::run(seed, eps, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
