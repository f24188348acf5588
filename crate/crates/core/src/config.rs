//! Declared evaluation grids, tolerances and runtime ceilings for the
//! verification suite. Everything the checks compare against lives here,
//! pinned as constants, so a reported pass/fail is reproducible from the
//! source alone.

/// Largest n the full verification run tables (and the default CLI cache).
pub const DEFAULT_TABLE_N: u64 = 100_000;

/// Table ceiling for `--quick` runs.
pub const QUICK_TABLE_N: u64 = 10_000;

/// Exhaustive cross-check range for the two exact routes (recurrence-based
/// evaluator vs series oracle) and for regime/mass scans.
pub const ORACLE_MAX_N: u64 = 200;

/// Brute-force enumeration cross-check ranges. Crank starts at 2: the
/// generating function and the combinatorial statistic genuinely disagree
/// at n = 1, which is checked separately as a known divergence.
pub const CRANK_ENUM_RANGE: std::ops::RangeInclusive<u64> = 2..=40;
pub const RANK_ENUM_RANGE: std::ops::RangeInclusive<u64> = 0..=40;

/// Histogram mass and symmetry scan ceiling.
pub const MASS_MAX_N: u64 = 200;

/// Single-term-regime scan ceiling.
pub const REGIME_MAX_N: u64 = 200;

/// Windows over which the normalized leading-term residual constant
/// c(n) = |p(n) - hat_p(n)| * n * e^{-B sqrt(n)/2} is maximized; the check
/// asserts the late-window maximum does not exceed the early one.
pub const RESIDUAL_LOW_WINDOW: (u64, u64) = (100, 50_000);
pub const RESIDUAL_HIGH_WINDOW: (u64, u64) = (50_000, 100_000);

/// Stride for the residual scan (the constant moves slowly; sampling every
/// point would spend minutes in high-precision exp for no extra signal).
pub const RESIDUAL_STRIDE: u64 = 61;

/// Declared grid for the sech^2 error-bound sweeps: n values and the
/// exponents a of m = floor(n^a).
pub const ZN1_N_GRID: [u64; 3] = [10_000, 40_000, 100_000];
pub const ZN1_EXPONENTS: [f64; 4] = [0.55, 0.60, 0.65, 0.70];

/// Allowed growth of the per-n fitted constant between the smallest and
/// largest n slice (10%).
pub const ZN1_SLICE_GROWTH_MAX: f64 = 1.10;

/// Breakdown scale m ~ n^a at which the sech^2 estimate must have lost
/// accuracy: the exact/estimate ratio must sit below this at every grid n.
pub const BREAKDOWN_EXPONENT: f64 = 0.75;
pub const BREAKDOWN_RATIO_MAX: f64 = 0.95;

/// Grid for the leading-term error-bound sweep: n values, geometric m
/// ladder size, and the upper m = n / MAIN_M_HI_DIV.
pub const MAIN_N_GRID: [u64; 2] = [10_000, 100_000];
pub const MAIN_GEOM_STEPS: usize = 20;
pub const MAIN_M_HI_DIV: u64 = 5;

/// Allowed relative drift of the fitted constant between the two n slices.
pub const MAIN_SLICE_STABILITY: f64 = 0.10;

/// Finite-difference ratio check: orders, statistics, the constant c in
/// m = floor(c * n^{3/4} / sqrt(6)) ... (c chosen above the convergence
/// threshold (r+1) sqrt(6) / (2 pi)), and the acceptance band at the
/// smaller n.
pub const COROLLARY_RS: [u32; 2] = [1, 2];
pub const COROLLARY_KS: [u32; 2] = [1, 2];
pub const COROLLARY_COEFF: f64 = 3.0;
pub const COROLLARY_N_GRID: [u64; 2] = [10_000, 100_000];
pub const COROLLARY_BAND: (f64, f64) = (0.8, 1.2);

/// Shift-approximation check: n grid, the |x| <= c sqrt(n) admission factor,
/// and the ceiling on the normalized defect
/// |hat_p(n+x) - shift(n,x)| / ((1 + |x| + x^2)/n * hat_p(n)).
/// The ceiling is 1.5 * (e^{B/2} - 1 - B/2): x = sqrt(n) makes the shifted
/// exponent exceed the linearization by ~B/2 in the log, so the defect per
/// unit (x^2/n) approaches e^{B/2} - 1 - B/2; the factor 1.5 absorbs the
/// subexponential terms at the declared grid sizes.
pub const SHIFT_N_GRID: [u64; 2] = [1_000, 10_000];
pub const SHIFT_RANGE_FACTOR: f64 = 10.0;
pub const SHIFT_MARGIN: f64 = 1.5;

/// Truncated-sum tail check (lemma constant): n grid and k range over
/// which C = max |exact - truncated| / e^{B sqrt(3n/5)} is fitted.
pub const LEMMA1_N_GRID: [u64; 2] = [1_000, 10_000];
pub const LEMMA1_KS: [u32; 2] = [1, 2];

/// Two log-domain quantities derived from the same real number must agree
/// to this tolerance (the f64-log precision floor, with headroom).
pub const LOG_IDENTITY_TOL: f64 = 1e-12;

/// Per-check runtime ceilings, seconds.
pub const RUNTIME_ORACLE_SECS: u64 = 10;
pub const RUNTIME_ENUM_SECS: u64 = 60;
pub const RUNTIME_RESIDUAL_SECS: u64 = 300;
pub const RUNTIME_QUICK_VERIFY_SECS: u64 = 120;
