//! Spectral analysis over the max-plus semiring.
//!
//! Numbers carry `max` as addition and `+` as multiplication, with minus
//! infinity as the zero. Square matrices over this semiring are weighted
//! digraphs, and their spectral data is combinatorial: the largest
//! eigenvalue is the maximum circuit mean, eigenvectors come from columns
//! of the Kleene star of the normalized matrix, and the asymptotics of
//! matrix powers are governed by the critical circuits.
//!
//! The crate covers:
//!
//! - [`scalar`]: the extended number type [`Trop`] and comparison
//!   tolerances.
//! - [`matrix`]: sparse square matrices with semiring products and powers.
//! - [`io`]: a plain text format for matrices and vectors.
//! - [`graph`]: strongly connected components and reachability.
//! - [`spectral`]: circuit-mean radius, Kleene star with divergence
//!   tracking, recurrence and critical structure, cyclicities, and path
//!   length residues.
//! - [`eigen`]: eigenbases at the radius, eigenvector checks and
//!   decompositions, extremality, and super-eigenvector analysis.
//! - [`asymptotics`]: power traces, coupling detection, the periodic
//!   power formula, optimal paths, and transience checks.
//! - [`kernels`]: lazily presented infinite kernels, finite windows cut
//!   from them, closed-form oracles, Martin kernels, and probes for
//!   tightness and boundary behaviour.

pub mod asymptotics;
pub mod eigen;
pub mod error;
pub mod graph;
pub mod io;
pub mod kernels;
pub mod matrix;
pub mod scalar;
pub mod spectral;

pub use error::Error;
pub use matrix::TropMatrix;
pub use scalar::{Tolerance, Trop};

pub use asymptotics::{
    detect_coupling, optimal_path, power_trace, transience_check, turnpike_profile,
    verify_power_formula, CouplingReport, CouplingVerdict, FormulaCheck, OptimalPath, PowerTrace,
    TransienceReport, TransienceVerdict, TurnpikeProfile, TurnpikeRow,
};
pub use eigen::{
    check_eigen, check_eigen_rows, check_super_eigen, decompose, is_extremal,
    minimum_principle_check, principal_eigenbasis, restriction_proportionality_check,
    ClassProportionality, Decomposition, EigenBasis, EigenCheckReport, MinimumPrincipleReport,
};
pub use graph::{reachable_from, scc_partition, SccPartition};
pub use io::{parse_matrix, parse_vector, write_matrix, write_vector};
pub use kernels::{
    boundary_column_probe, catalog, kernel_by_spec, martin_kernel, property_t_probe, truncate,
    window_plus_limit, window_star_limit, ArcCount, BoundaryProbe, ClosedForms, LazyKernel,
    MartinWindow, PowerForm, RowArcs, TightnessReport, Window, WindowSample,
};
pub use spectral::{
    critical_graph, cyclicity, kleene_star, max_cycle_mean, normalize, normalized_closure,
    nu_residue, recurrence_classes, recurrent_nodes, scc, spectral_summary, ClosureResult,
    Normalized, PathResidue, SpectralSummary,
};
