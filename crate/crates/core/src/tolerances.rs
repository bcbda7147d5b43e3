//! Numerical tolerances shared by the solvers, the verification suites and
//! the acceptance tests.

/// Entry-wise deviation allowed when testing Hermiticity and tracelessness.
pub const HERMITIAN: f64 = 1e-10;

/// Negative slack allowed on probability weights and simplex sums.
pub const SIMPLEX: f64 = 1e-12;

/// Stationarity/complementarity residual below which weights count as a KKT point.
pub const KKT_RESIDUAL: f64 = 1e-8;

/// Agreement required between closed-form and oracle distances.
pub const ORACLE_VS_ANALYTIC: f64 = 1e-9;

/// Singular values below this are treated as zero in subset least squares.
pub const SINGULAR_CUTOFF: f64 = 1e-12;

/// Slack on case conditions, the canonical-region test and the decomposability criterion.
pub const CONDITION: f64 = 1e-12;

/// Oracle distance below which a state counts as lying inside a hull.
pub const ZERO_DISTANCE: f64 = 1e-8;

/// Largest basis the support enumeration accepts.
pub const MAX_BASIS: usize = 16;
