//! Source selection: every analysis verb works on a square matrix that
//! comes either from a file in the exchange format or from a catalog
//! kernel truncated to a window.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::Args;
use maxplus::io::parse_matrix;
use maxplus::kernels::{kernel_by_spec, truncate, LazyKernel};
use maxplus::TropMatrix;

/// Where the matrix comes from; exactly one of the two must be given.
#[derive(Args)]
pub struct Source {
    /// Matrix file in the exchange format
    #[arg(long, value_name = "FILE", conflicts_with = "kernel")]
    pub input: Option<PathBuf>,
    /// Catalog kernel spec, e.g. "birth p=-1 q=-3" (see `maxplus example`)
    #[arg(long, value_name = "SPEC")]
    pub kernel: Option<String>,
    /// Window size: the kernel is truncated to nodes 0..=N
    #[arg(long, value_name = "N", requires = "kernel")]
    pub window: Option<usize>,
}

/// A resolved source: the working matrix plus enough context to report
/// where it came from and to reach back into the kernel when a verb needs
/// rows beyond the window.
pub struct Loaded {
    pub matrix: TropMatrix,
    pub label: String,
    /// The window size for kernel sources, None for files.
    pub window: Option<usize>,
    /// The kernel itself for kernel sources.
    pub kernel: Option<LazyKernel>,
    /// Window rows that lost arcs to the cut.
    pub rows_truncated: Vec<usize>,
}

impl Loaded {
    /// Largest node index, used as the window bound by kernel-style probes.
    pub fn n_max(&self) -> usize {
        self.matrix.n() - 1
    }

    /// The kernel view of the source: the kernel itself (rebuilt through
    /// its spec string, since kernels carry boxed closures), or the matrix
    /// wrapped as a finite kernel so window probes apply uniformly.
    pub fn as_kernel(&self) -> LazyKernel {
        match &self.kernel {
            Some(k) => {
                kernel_by_spec(&k.spec_string()).expect("catalog kernel specs round-trip")
            }
            None => LazyKernel::from_matrix(self.matrix.clone(), self.label.clone()),
        }
    }
}

pub fn load(source: &Source) -> Result<Loaded, CliError> {
    match (&source.input, &source.kernel) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let matrix = parse_matrix(&text)?;
            Ok(Loaded {
                matrix,
                label: path.display().to_string(),
                window: None,
                kernel: None,
                rows_truncated: Vec::new(),
            })
        }
        (None, Some(spec)) => {
            let kernel = kernel_by_spec(spec)?;
            let window = source.window.ok_or_else(|| {
                CliError::Usage("--window is required with --kernel".to_string())
            })?;
            let win = truncate(&kernel, window)?;
            Ok(Loaded {
                matrix: win.matrix,
                label: kernel.spec_string(),
                window: Some(window),
                kernel: Some(kernel),
                rows_truncated: win.rows_truncated,
            })
        }
        _ => Err(CliError::Usage(
            "choose exactly one source: --input FILE or --kernel SPEC".to_string(),
        )),
    }
}

/// Anything that maps to exit code 2: bad usage, unreadable files, or a
/// domain error from the library.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Domain(maxplus::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage: {msg}"),
            CliError::Io(msg) => write!(f, "io: {msg}"),
            CliError::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl From<maxplus::Error> for CliError {
    fn from(e: maxplus::Error) -> CliError {
        CliError::Domain(e)
    }
}

/// Writes an artifact for `--emit`, mapping failures to exit code 2.
pub fn emit_file(path: &Path, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
