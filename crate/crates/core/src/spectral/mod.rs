//! The matrix A(N) = (⌊N²/(mn)⌋), its relatives Z(N) and Z(h, N), and the
//! statistics, spectra and bounds built on them.

mod bounds;
mod eigen;
mod operator;
mod stats;

pub use bounds::{bounds_report, scaling_scan, BoundCheck, BoundsReport, ScanReport, ScanRow, SCAN_THETAS};
pub use eigen::{
    extreme_eigenpairs, full_spectrum, EigenPair, SpectralResult, SpectrumMode, SpectrumRow, DEFAULT_MAX_ITER,
    DEFAULT_TOLERANCE,
};
pub use operator::{build_operator, MatrixOperator, OperatorKind, DEFAULT_DENSE_CAP};
pub use stats::{
    compute_stats, phi_limit_check, trace_closed_form_check, u_quadform_by_divisor_sums, w_form_check, LimitCheck,
    SpectralStats, TraceCheck,
};
