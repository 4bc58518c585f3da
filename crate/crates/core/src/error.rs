use thiserror::Error;

/// Errors surfaced by the library operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("index {index} out of bounds for size {n}")]
    IndexOutOfBounds { index: usize, n: usize },

    #[error("matrix is acyclic: the maximal circuit mean is -inf")]
    Acyclic,

    #[error("matrix is not irreducible")]
    NotIrreducible,

    #[error("vector is identically -inf")]
    ZeroVector,

    #[error("not an eigenvector for lambda = {lambda}: residual {residual}, {mismatches} support mismatches")]
    NotEigenvector {
        lambda: f64,
        residual: f64,
        mismatches: usize,
    },

    #[error("not a super-eigenvector for lambda = {lambda}: excess {excess}, {mismatches} support mismatches")]
    NotSuperEigenvector {
        lambda: f64,
        excess: f64,
        mismatches: usize,
    },

    #[error("matrix has no critical nodes")]
    NoCriticalNodes,

    #[error("no path of length {length} from {from} to {to}")]
    NoPath {
        from: usize,
        to: usize,
        length: usize,
    },

    #[error("basepoint {basepoint} does not reach node {node} inside the window")]
    UnreachableBasepoint { basepoint: usize, node: usize },

    #[error("lambda = {lambda} is below the windowed maximal circuit mean {rho}")]
    LambdaBelowRho { lambda: f64, rho: f64 },

    #[error("path-length residue search did not saturate within {cap} rounds")]
    ResidueCapReached { cap: usize },

    #[error("invalid residue pair (q = {q}, q' = {q_prime}): need q, q' in [0, {sigma}) with q + q' = {n} mod {sigma}")]
    InvalidResiduePair {
        q: usize,
        q_prime: usize,
        sigma: usize,
        n: usize,
    },

    #[error("bad kernel spec: {0}")]
    KernelSpec(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
