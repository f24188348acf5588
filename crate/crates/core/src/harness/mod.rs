//! Declarative experiment runner: expands (k, n, m) grids from a sweep
//! description, evaluates the chosen exact-vs-estimate comparison per cell,
//! fits bound constants, and emits deterministic CSV reports.
//!
//! Rows are pure functions of (cell, table); cells may be computed in
//! parallel and are then sorted by (k, n, m), so serial and parallel runs
//! produce byte-identical output.

mod csv;
mod spec_file;

pub use csv::{csv_to_string, write_csv, CSV_HEADER};
pub use spec_file::parse_sweep_spec;

use std::path::PathBuf;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::asymptotics::{
    b_constant, corollary_prediction, dprz_error_factor, dprz_lhs, dprz_rhs,
    dyson_sech_estimate, error_bound_main, error_bound_zn1, parry_rhoades_estimate,
};
use crate::config::RESIDUAL_STRIDE;
use crate::error::{Error, Result};
use crate::krank::{backward_difference, main_term_exact, n_k_exact, KRankQuery};
use crate::precise::Residuals;
use crate::series::n_k_oracle_series;
use crate::signed_log::{ln_biguint, relative_error, SignedLogReal};
use crate::table::PartitionTable;

/// What a sweep compares. Each kind fixes the meaning of the exact,
/// estimate, bound and ratio columns; see the README's column table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepKind {
    /// Both exact routes per cell; pass = integer equality.
    OracleEquivalence,
    /// Exact count vs sech^2 estimate; ratio = rel_err / bound.
    CrankAccuracy,
    /// Exact count vs sech^2 estimate at the breakdown scale;
    /// ratio = exact/estimate, bound column carries the limit e^{-B/8}.
    ThresholdBreakdown,
    /// Exact count vs exact leading term; ratio = |N/F - 1| / bound.
    MainTheorem,
    /// Alternating difference of counts vs power-law prediction;
    /// ratio = difference / prediction.
    FiniteDifference,
    /// Normalized residual of the two-factor approximation;
    /// ratio = |p - hat_p| * n * e^{-B sqrt(n)/2}.
    Lemma1Constant,
    /// Density comparison (p(n-m+1)-p(n-m))/p(n) vs sech^2 form;
    /// ratio = lhs/rhs, bound = multiplicative error factor.
    DprzRatio,
}

impl SweepKind {
    pub fn name(&self) -> &'static str {
        match self {
            SweepKind::OracleEquivalence => "oracle_equivalence",
            SweepKind::CrankAccuracy => "crank_accuracy",
            SweepKind::ThresholdBreakdown => "threshold_breakdown",
            SweepKind::MainTheorem => "main_theorem",
            SweepKind::FiniteDifference => "finite_difference",
            SweepKind::Lemma1Constant => "lemma1_constant",
            SweepKind::DprzRatio => "dprz_ratio",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "oracle_equivalence" => SweepKind::OracleEquivalence,
            "crank_accuracy" => SweepKind::CrankAccuracy,
            "threshold_breakdown" => SweepKind::ThresholdBreakdown,
            "main_theorem" => SweepKind::MainTheorem,
            "finite_difference" => SweepKind::FiniteDifference,
            "lemma1_constant" => SweepKind::Lemma1Constant,
            "dprz_ratio" => SweepKind::DprzRatio,
            other => {
                return Err(Error::SweepParse(format!("unknown sweep kind `{other}`")));
            }
        })
    }
}

/// Which estimator the sech^2 kinds evaluate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Estimator {
    #[default]
    Dyson,
    Parry,
}

impl Estimator {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "dyson" => Estimator::Dyson,
            "parry" => Estimator::Parry,
            other => return Err(Error::SweepParse(format!("unknown estimator `{other}`"))),
        })
    }
}

/// How m values are produced from each n.
#[derive(Clone, Debug, PartialEq)]
pub enum MRule {
    /// floor(coeff * n^a) for each exponent a.
    Power { coeff: f64, exponents: Vec<f64> },
    /// floor(coeff * sqrt(n) * ln n).
    SqrtLog { coeff: f64 },
    /// `steps` geometric points from ceil(sqrt(n) ln n) to floor(n/5).
    Geometric { steps: usize },
    /// Explicit values, used as-is for every n.
    List(Vec<u64>),
    /// Every m from 0 to n.
    All,
}

impl MRule {
    pub fn expand(&self, n: u64) -> Vec<u64> {
        let mut ms = match self {
            MRule::Power { coeff, exponents } => exponents
                .iter()
                .map(|a| (coeff * (n as f64).powf(*a)).floor() as u64)
                .collect(),
            MRule::SqrtLog { coeff } => {
                let nf = n as f64;
                vec![(coeff * nf.sqrt() * nf.ln()).floor() as u64]
            }
            MRule::Geometric { steps } => {
                let nf = n as f64;
                let lo = (nf.sqrt() * nf.ln()).ceil();
                let hi = (n / crate::config::MAIN_M_HI_DIV) as f64;
                if *steps == 0 || hi < lo {
                    return Vec::new();
                }
                if *steps == 1 {
                    return vec![lo as u64];
                }
                let q = (hi / lo).powf(1.0 / (*steps as f64 - 1.0));
                (0..*steps)
                    .map(|i| (lo * q.powi(i as i32)).round() as u64)
                    .collect()
            }
            MRule::List(values) => values.clone(),
            MRule::All => (0..=n).collect(),
        };
        ms.sort_unstable();
        ms.dedup();
        ms
    }
}

/// Pass thresholds, read from the sweep file (never hard-coded here):
/// `max_ratio` requires ratio <= max_ratio; `band` requires
/// band.0 <= ratio <= band.1. Absent thresholds leave rows informational
/// (pass = true). Oracle-equivalence rows ignore both: their pass flag is
/// integer equality.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PassThresholds {
    pub max_ratio: Option<f64>,
    pub band: Option<(f64, f64)>,
}

impl PassThresholds {
    fn check(&self, ratio: f64) -> bool {
        if let Some(max) = self.max_ratio {
            if !(ratio <= max) {
                return false;
            }
        }
        if let Some((lo, hi)) = self.band {
            if !(ratio >= lo && ratio <= hi) {
                return false;
            }
        }
        true
    }
}

/// A declarative sweep: the comparison kind, the (k, n, m, r) grid, the
/// estimator where applicable, pass thresholds, and an optional output
/// path for the CSV report.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub n_grid: Vec<u64>,
    pub m_rule: MRule,
    pub k_list: Vec<u32>,
    pub r: u32,
    pub estimator: Estimator,
    pub thresholds: PassThresholds,
    pub out: Option<PathBuf>,
}

impl SweepSpec {
    /// Structural validation, independent of any table.
    pub fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() {
            return Err(Error::SweepValidation("n_grid must be nonempty".into()));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::SweepValidation(
                "n_grid must be strictly increasing".into(),
            ));
        }
        if self.n_grid[0] < 1 {
            return Err(Error::SweepValidation("n_grid entries must be >= 1".into()));
        }
        if self.k_list.is_empty() {
            return Err(Error::SweepValidation("k_list must be nonempty".into()));
        }
        if self.k_list.iter().any(|&k| k < 1) {
            return Err(Error::SweepValidation("k_list entries must be >= 1".into()));
        }
        if self.kind == SweepKind::Lemma1Constant && self.n_grid.len() != 2 {
            return Err(Error::SweepValidation(
                "lemma1_constant takes n_grid = [low, high] window endpoints".into(),
            ));
        }
        for &n in &self.n_grid {
            for m in self.m_rule.expand(n) {
                if m > n {
                    return Err(Error::SweepValidation(format!(
                        "m rule produced m = {m} > n = {n}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One evaluated grid cell, in the CSV's column layout. `exact` is a
/// decimal integer string for count comparisons and an `s*exp(L)` form
/// for continuous quantities; optional fields are empty when the cell is
/// excluded (exact value zero) or the column has no meaning for the kind.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub kind: SweepKind,
    pub k: u32,
    pub r: u32,
    pub n: u64,
    pub m: u64,
    pub exact: String,
    pub estimate_log: String,
    pub rel_err: Option<f64>,
    pub bound: Option<f64>,
    pub ratio: Option<f64>,
    pub pass: bool,
}

/// The maximum observed ratio and the cell where it occurred: the
/// empirical stand-in for an unspecified O-constant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FittedConstant {
    pub value: f64,
    pub k: u32,
    pub n: u64,
    pub m: u64,
}

/// Largest finite ratio across rows, with its arg-max cell.
pub fn fit_bound_constant(rows: &[ReportRow]) -> Result<FittedConstant> {
    let mut best: Option<FittedConstant> = None;
    for row in rows {
        if let Some(ratio) = row.ratio {
            if ratio.is_finite() && best.map_or(true, |b| ratio > b.value) {
                best = Some(FittedConstant {
                    value: ratio,
                    k: row.k,
                    n: row.n,
                    m: row.m,
                });
            }
        }
    }
    best.ok_or(Error::EmptyFit)
}

/// Executes a sweep against a table. Cells are evaluated in parallel
/// (each row is a pure function of its cell), then sorted by (k, n, m);
/// the result is deterministic for a given spec and table.
pub fn run_sweep(spec: &SweepSpec, table: &PartitionTable) -> Result<Vec<ReportRow>> {
    spec.validate()?;
    let needed = match spec.kind {
        // The density comparison reads p(n - m + 1), which can exceed n.
        SweepKind::DprzRatio => spec.n_grid.iter().max().copied().unwrap_or(0) + 1,
        _ => spec.n_grid.iter().max().copied().unwrap_or(0),
    };
    if needed > table.max_n() {
        return Err(Error::OutOfRange {
            index: needed as i64,
            max_n: table.max_n(),
        });
    }

    let mut rows = match spec.kind {
        SweepKind::Lemma1Constant => {
            let (lo, hi) = (spec.n_grid[0], spec.n_grid[1]);
            let mut points: Vec<u64> = (lo..=hi).step_by(RESIDUAL_STRIDE as usize).collect();
            if points.last() != Some(&hi) {
                points.push(hi);
            }
            points
                .into_par_iter()
                .map_init(Residuals::new, |res, n| lemma1_row(spec, table, res, n))
                .collect::<Result<Vec<_>>>()?
        }
        _ => {
            let mut cells = Vec::new();
            for &k in &spec.k_list {
                for &n in &spec.n_grid {
                    for m in spec.m_rule.expand(n) {
                        cells.push((k, n, m));
                    }
                }
            }
            cells
                .into_par_iter()
                .map(|(k, n, m)| grid_row(spec, table, k, n, m))
                .collect::<Result<Vec<_>>>()?
        }
    };
    rows.sort_by_key(|r| (r.k, r.n, r.m));
    Ok(rows)
}

fn grid_row(spec: &SweepSpec, table: &PartitionTable, k: u32, n: u64, m: u64) -> Result<ReportRow> {
    match spec.kind {
        SweepKind::OracleEquivalence => oracle_row(spec, table, k, n, m),
        SweepKind::CrankAccuracy => accuracy_row(spec, table, k, n, m),
        SweepKind::ThresholdBreakdown => breakdown_row(spec, table, k, n, m),
        SweepKind::MainTheorem => main_theorem_row(spec, table, k, n, m),
        SweepKind::FiniteDifference => difference_row(spec, table, k, n, m),
        SweepKind::DprzRatio => dprz_row(spec, table, k, n, m),
        SweepKind::Lemma1Constant => unreachable!("handled by the scan path"),
    }
}

fn exact_count(table: &PartitionTable, k: u32, m: u64, n: u64) -> Result<BigInt> {
    let query = KRankQuery::new(k, m as i64, n)?;
    Ok(n_k_exact(table, &query)?.value)
}

/// Chosen sech^2-family estimate with exact p(n) in log form.
fn sech_estimate(
    spec: &SweepSpec,
    table: &PartitionTable,
    k: u32,
    m: u64,
    n: u64,
) -> Result<SignedLogReal> {
    let p_n = SignedLogReal::from_biguint(table.p_at(n as i64)?);
    match spec.estimator {
        Estimator::Dyson => dyson_sech_estimate(m as i64, n, &p_n),
        Estimator::Parry => parry_rhoades_estimate(k, m as i64, n, &p_n),
    }
}

fn oracle_row(
    spec: &SweepSpec,
    table: &PartitionTable,
    k: u32,
    n: u64,
    m: u64,
) -> Result<ReportRow> {
    let via_recurrence = exact_count(table, k, m, n)?;
    let series = n_k_oracle_series(k, m, n)?;
    let via_series = series.coeffs[n as usize].clone();
    let equal = via_recurrence == via_series;
    Ok(ReportRow {
        kind: spec.kind,
        k,
        r: 0,
        n,
        m,
        exact: via_recurrence.to_string(),
        estimate_log: SignedLogReal::from_bigint(&via_series).to_string(),
        rel_err: None,
        bound: None,
        ratio: None,
        pass: equal,
    })
}

fn accuracy_row(
    spec: &SweepSpec,
    table: &PartitionTable,
    k: u32,
    n: u64,
    m: u64,
) -> Result<ReportRow> {
    let exact = exact_count(table, k, m, n)?;
    let estimate = sech_estimate(spec, table, k, m, n)?;
    let exact_log = SignedLogReal::from_bigint(&exact);
    let bound = error_bound_zn1(m as i64, n)?;
    let (rel_err, ratio, pass) = match relative_error(&exact_log, &estimate) {
        Ok(re) => {
            let ratio = re / bound;
            (Some(re), Some(ratio), spec.thresholds.check(ratio))
        }
        Err(_) => (None, None, true), // exact = 0: excluded cell
    };
    Ok(ReportRow {
        kind: spec.kind,
        k,
        r: 0,
        n,
        m,
        exact: exact.to_string(),
        estimate_log: estimate.to_string(),
        rel_err,
        bound: Some(bound),
        ratio,
        pass,
    })
}

fn breakdown_row(
    spec: &SweepSpec,
    table: &PartitionTable,
    k: u32,
    n: u64,
    m: u64,
) -> Result<ReportRow> {
    let exact = exact_count(table, k, m, n)?;
    let estimate = sech_estimate(spec, table, k, m, n)?;
    let exact_log = SignedLogReal::from_bigint(&exact);
    let limit = (-b_constant() / 8.0).exp();
    if exact_log.is_zero() {
        return Ok(ReportRow {
            kind: spec.kind,
            k,
            r: 0,
            n,
            m,
            exact: exact.to_string(),
            estimate_log: estimate.to_string(),
            rel_err: None,
            bound: Some(limit),
            ratio: None,
            pass: true,
        });
    }
    let ratio = exact_log.div(&estimate).exp_f64();
    let rel_err = relative_error(&exact_log, &estimate).expect("nonzero exact");
    Ok(ReportRow {
        kind: spec.kind,
        k,
        r: 0,
        n,
        m,
        exact: exact.to_string(),
        estimate_log: estimate.to_string(),
        rel_err: Some(rel_err),
        bound: Some(limit),
        ratio: Some(ratio),
        pass: spec.thresholds.check(ratio),
    })
}

fn main_theorem_row(
    spec: &SweepSpec,
    table: &PartitionTable,
    k: u32,
    n: u64,
    m: u64,
) -> Result<ReportRow> {
    let exact = exact_count(table, k, m, n)?;
    let leading = main_term_exact(table, k, m as i64, n)?;
    let bound = error_bound_main(k, m as i64, n)?;
    // |N/F - 1| computed from the exact integer difference: at this scale
    // the two counts can agree to hundreds of digits, far beyond what
    // f64-log subtraction resolves.
    let diff = &exact - &leading;
    let leading_log = SignedLogReal::from_bigint(&leading);
    let (rel_err, ratio, pass) = if leading_log.is_zero() {
        (None, None, true)
    } else {
        let re = SignedLogReal::from_bigint(&diff)
            .abs()
            .div(&leading_log)
            .exp_f64();
        let ratio = re / bound;
        (Some(re), Some(ratio), spec.thresholds.check(ratio))
    };
    Ok(ReportRow {
        kind: spec.kind,
        k,
        r: 0,
        n,
        m,
        exact: exact.to_string(),
        estimate_log: leading_log.to_string(),
        rel_err,
        bound: Some(bound),
        ratio,
        pass,
    })
}

fn difference_row(
    spec: &SweepSpec,
    table: &PartitionTable,
    k: u32,
    n: u64,
    m: u64,
) -> Result<ReportRow> {
    let r = spec.r;
    if m + r as u64 > n {
        return Err(Error::SweepValidation(format!(
            "difference window m..m+{r} exceeds n at m={m}, n={n}"
        )));
    }
    let values: Vec<BigInt> = (m..=m + r as u64)
        .map(|mm| exact_count(table, k, mm, n))
        .collect::<Result<_>>()?;
    let diff = backward_difference(r, &values)?[0].clone();
    let p_nm = SignedLogReal::from_biguint(table.p_at((n - m) as i64)?);
    let prediction = corollary_prediction(r, m, n, &p_nm)?;
    let diff_log = SignedLogReal::from_bigint(&diff);
    let (rel_err, ratio, pass) = if diff_log.is_zero() {
        (None, None, true)
    } else {
        let ratio = diff_log.div(&prediction).exp_f64();
        let re = relative_error(&diff_log, &prediction).expect("nonzero difference");
        (Some(re), Some(ratio), spec.thresholds.check(ratio))
    };
    Ok(ReportRow {
        kind: spec.kind,
        k,
        r,
        n,
        m,
        exact: diff.to_string(),
        estimate_log: prediction.to_string(),
        rel_err,
        bound: None,
        ratio,
        pass,
    })
}

fn dprz_row(
    spec: &SweepSpec,
    table: &PartitionTable,
    k: u32,
    n: u64,
    m: u64,
) -> Result<ReportRow> {
    let lhs = dprz_lhs(table, m, n)?;
    let rhs = dprz_rhs(m, n)?;
    let bound = dprz_error_factor(m, n)?;
    let (rel_err, ratio, pass) = if lhs.is_zero() {
        (None, None, true)
    } else {
        let ratio = lhs.div(&rhs).exp_f64();
        let re = relative_error(&lhs, &rhs).expect("nonzero lhs");
        (Some(re), Some(ratio), spec.thresholds.check(ratio))
    };
    Ok(ReportRow {
        kind: spec.kind,
        k,
        r: 0,
        n,
        m,
        exact: lhs.to_string(),
        estimate_log: rhs.to_string(),
        rel_err,
        bound: Some(bound),
        ratio,
        pass,
    })
}

fn lemma1_row(
    spec: &SweepSpec,
    table: &PartitionTable,
    res: &mut Residuals,
    n: u64,
) -> Result<ReportRow> {
    let p_n = table.p_at(n as i64)?;
    let c = res.residual_constant(n, p_n);
    let b = b_constant();
    // ln |p - hat_p| recovered from the normalized constant.
    let diff_log = c.ln() + b * (n as f64).sqrt() / 2.0 - (n as f64).ln();
    let diff = SignedLogReal::from_sign_log(if c == 0.0 { 0 } else { 1 }, diff_log);
    let gap = (diff_log - ln_biguint(p_n)).exp();
    let hat = crate::asymptotics::hat_p(n)?;
    Ok(ReportRow {
        kind: spec.kind,
        k: 0,
        r: 0,
        n,
        m: 0,
        exact: diff.to_string(),
        estimate_log: hat.to_string(),
        rel_err: Some(gap),
        bound: None,
        ratio: Some(c),
        pass: spec.thresholds.check(c),
    })
}
