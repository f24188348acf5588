//! Log-domain estimators for partition statistics: the two-factor
//! exponential approximation to p(n), its first-order shift, the truncated
//! alternating estimate for k-rank counts, sech^2 density estimates, the
//! leading-term asymptotic, and the matching error-bound expressions.
//!
//! Everything returns `SignedLogReal` (or a plain f64 for bounds), since
//! the quantities grow like e^{B sqrt(n)}. All constants are computed at
//! run time from pi; nothing is a hard-coded decimal.

use crate::config::SHIFT_RANGE_FACTOR;
use crate::error::{Error, Result};
use crate::krank::KRankQuery;
use crate::signed_log::{relative_error, signed_log_sum, SignedLogReal};
use crate::table::PartitionTable;

use std::f64::consts::PI;

/// The exponential growth constant B = 2*pi/sqrt(6) of the partition
/// function, p(n) ~ e^{B sqrt(n)} / (4 sqrt(3) n).
pub fn b_constant() -> f64 {
    2.0 * PI / 6f64.sqrt()
}

/// Run-time container for the growth constant and pi, for callers that
/// want both without recomputing.
#[derive(Clone, Copy, Debug)]
pub struct AsymptoticConstants {
    pub b: f64,
    pub pi: f64,
}

impl AsymptoticConstants {
    pub fn new() -> Self {
        AsymptoticConstants {
            b: b_constant(),
            pi: PI,
        }
    }
}

impl Default for AsymptoticConstants {
    fn default() -> Self {
        Self::new()
    }
}

/// One exact-vs-estimate comparison: the exact count in log form, an
/// estimator value, their relative error, the applicable error-bound
/// expression, and the ratio rel_err / bound whose boundedness the
/// verification sweeps check.
#[derive(Clone, Debug)]
pub struct EstimateReport {
    pub query: KRankQuery,
    pub exact: SignedLogReal,
    pub estimate: SignedLogReal,
    pub rel_err: f64,
    pub bound: f64,
    pub ratio: f64,
}

impl EstimateReport {
    /// Errors when the exact value is zero (relative error undefined).
    pub fn build(
        query: KRankQuery,
        exact: SignedLogReal,
        estimate: SignedLogReal,
        bound: f64,
    ) -> Result<Self> {
        let rel_err = relative_error(&exact, &estimate)?;
        Ok(EstimateReport {
            query,
            exact,
            estimate,
            rel_err,
            bound,
            ratio: rel_err / bound,
        })
    }
}

/// Two-factor approximation to p(n):
/// e^{B sqrt(nu)} / (4 sqrt(3) nu) * (1 - 1/(B sqrt(nu))), nu = n - 1/24.
/// Positive and strictly increasing for n >= 1.
pub fn hat_p(n: u64) -> Result<SignedLogReal> {
    if n < 1 {
        return Err(Error::Domain(format!(
            "hat_p is defined for n >= 1, got {n}"
        )));
    }
    let nu = n as f64 - 1.0 / 24.0;
    let b = b_constant();
    let root = nu.sqrt();
    let log = b * root - (4.0 * 3f64.sqrt()).ln() - nu.ln() + (-1.0 / (b * root)).ln_1p();
    Ok(SignedLogReal::from_sign_log(1, log))
}

/// First-order shift (1 + B x / (2 sqrt(n))) * hat_p(n), approximating
/// hat_p(n + x) for |x| = O(sqrt(n)). The defect satisfies
/// |hat_p(n+x) - result| <= C * ((1 + |x| + x^2)/n) * hat_p(n)
/// on |x| <= SHIFT_RANGE_FACTOR * sqrt(n); the factor goes negative
/// (and so does the result) once x < -2 sqrt(n)/B.
pub fn hat_p_shift(n: u64, x: i64) -> Result<SignedLogReal> {
    let base = hat_p(n)?;
    let root = (n as f64).sqrt();
    if n as i64 + x < 1 {
        return Err(Error::Domain(format!(
            "shifted argument n + x = {} is below 1",
            n as i64 + x
        )));
    }
    if x.unsigned_abs() as f64 > SHIFT_RANGE_FACTOR * root {
        return Err(Error::Domain(format!(
            "shift x = {x} exceeds {SHIFT_RANGE_FACTOR} * sqrt({n})"
        )));
    }
    let factor = 1.0 + b_constant() * x as f64 / (2.0 * root);
    Ok(SignedLogReal::from_f64(factor).mul(&base))
}

/// Whether (k, ell, m, n) lies in the truncation range
/// m*ell + (k - 1/2)*ell^2 <= n/2, evaluated exactly in integers as
/// 2*m*ell + (2k-1)*ell^2 <= n.
fn in_truncation_range(k: u32, ell: u64, m: u64, n: u64) -> bool {
    let ell = ell as u128;
    let lhs = 2 * m as u128 * ell + (2 * k as u128 - 1) * ell * ell;
    lhs <= n as u128
}

/// Estimated single term: hat_p(a1) - hat_p(a2) with
/// a1 = n - m*ell - ((2k-1)*ell^2 - ell)/2 and a2 = a1 - ell,
/// mirroring the exact term's two partition-number arguments.
pub fn hat_f_k(k: u32, ell: u64, m: u64, n: u64) -> Result<SignedLogReal> {
    if k < 1 || ell < 1 {
        return Err(Error::Domain(format!(
            "hat_f_k needs k >= 1 and ell >= 1, got k={k}, ell={ell}"
        )));
    }
    if !in_truncation_range(k, ell, m, n) {
        return Err(Error::Domain(format!(
            "outside truncation range: 2*{m}*{ell} + (2*{k}-1)*{ell}^2 > {n}"
        )));
    }
    let ell_i = ell as i128;
    let sq = (2 * k as i128 - 1) * ell_i * ell_i;
    let a1 = n as i128 - m as i128 * ell_i - (sq - ell_i) / 2;
    let a2 = a1 - ell_i;
    // a1 >= n/2 + ell/2 > 0 inside the range; a2 can still hit 0 at tiny n,
    // where the approximation has no domain — propagate that error.
    let upper = hat_p(u64::try_from(a1).expect("a1 positive in range"))?;
    let lower = hat_p(u64::try_from(a2).map_err(|_| {
        Error::Domain(format!("second argument {a2} below the hat_p domain"))
    })?)?;
    Ok(upper.sub(&lower))
}

/// Truncated alternating estimate for the k-rank count:
/// sum over ell >= 1 with 2*m*ell + (2k-1)*ell^2 <= n of
/// (-1)^{ell-1} hat_f_k(ell; m, n). Requires m <= n/3; an empty range
/// yields zero. Accumulation is max-shifted compensated summation.
pub fn i_k_truncated(k: u32, m: u64, n: u64) -> Result<SignedLogReal> {
    if k < 1 {
        return Err(Error::Domain(format!("i_k_truncated needs k >= 1, got {k}")));
    }
    if 3 * m as u128 > n as u128 {
        return Err(Error::Domain(format!(
            "hypothesis m <= n/3 violated: m={m}, n={n}"
        )));
    }
    let mut terms = Vec::new();
    let mut ell = 1u64;
    while in_truncation_range(k, ell, m, n) {
        let term = hat_f_k(k, ell, m, n)?;
        terms.push(if ell % 2 == 0 { term.neg() } else { term });
        ell += 1;
    }
    Ok(signed_log_sum(&terms))
}

/// ln of sech^2(u) for u >= 0, via the overflow-free form
/// 4 e^{-2u} / (1 + e^{-2u})^2.
fn ln_sech2(u: f64) -> f64 {
    debug_assert!(u >= 0.0);
    4f64.ln() - 2.0 * u - 2.0 * (-2.0 * u).exp().ln_1p()
}

/// Crank-density estimate (pi/(4 sqrt(6n))) sech^2(pi m / (2 sqrt(6n))) p_n,
/// with p_n the exact p(n) (or its approximation) in log form.
pub fn dyson_sech_estimate(m: i64, n: u64, p_n: &SignedLogReal) -> Result<SignedLogReal> {
    if n < 1 {
        return Err(Error::Domain(format!("estimate needs n >= 1, got {n}")));
    }
    if p_n.sign <= 0 {
        return Err(Error::Domain("p_n must be positive".to_string()));
    }
    let root6n = (6.0 * n as f64).sqrt();
    let u = PI * m.unsigned_abs() as f64 / (2.0 * root6n);
    let log = (PI / (4.0 * root6n)).ln() + ln_sech2(u) + p_n.log_mag;
    Ok(SignedLogReal::from_sign_log(1, log))
}

/// The shifted variant (pi/sqrt(6n)) (e^u + e^{-u})^{-2} p_n with
/// u = pi (m + k) / (2 sqrt(6n)); equals dyson_sech_estimate at m + k.
/// Implemented to demonstrate where the unshifted claim fails, so no
/// validity range is enforced beyond n >= 1.
pub fn parry_rhoades_estimate(
    k: u32,
    m: i64,
    n: u64,
    p_n: &SignedLogReal,
) -> Result<SignedLogReal> {
    if n < 1 {
        return Err(Error::Domain(format!("estimate needs n >= 1, got {n}")));
    }
    let root6n = (6.0 * n as f64).sqrt();
    let w = m + k as i64;
    let u = PI * w.unsigned_abs() as f64 / (2.0 * root6n);
    // (e^u + e^{-u})^{-2} = e^{-2u} (1 + e^{-2u})^{-2}, even in u.
    let log = (PI / root6n).ln() - 2.0 * u - 2.0 * (-2.0 * u).exp().ln_1p() + p_n.log_mag;
    Ok(SignedLogReal::from_sign_log(p_n.sign, log))
}

/// Leading-term asymptotic (B/(8 sqrt(3))) e^{B sqrt(n-m)} / (n-m)^{3/2},
/// evaluated at |m| (the counts are even in m). Relative error against the
/// exact single term is O_k(1/sqrt(n-m)).
pub fn main_term_asymptotic(k: u32, m: i64, n: u64) -> Result<SignedLogReal> {
    if k < 1 {
        return Err(Error::Domain(format!(
            "main_term_asymptotic needs k >= 1, got {k}"
        )));
    }
    let d = n as i128 - m.unsigned_abs() as i128;
    if d < 1 {
        return Err(Error::Domain(format!(
            "main_term_asymptotic needs n - |m| >= 1, got {d}"
        )));
    }
    let d = d as f64;
    let b = b_constant();
    let log = (b / (8.0 * 3f64.sqrt())).ln() + b * d.sqrt() - 1.5 * d.ln();
    Ok(SignedLogReal::from_sign_log(1, log))
}

/// Error-bound expression for the sech^2 estimate:
/// e^{-pi |m| / (2 sqrt(6n))} + m^2 / n^{3/2}. Even in m; equals 1 at m=0;
/// stays <= 2 whenever |m| <= n^{3/4}.
pub fn error_bound_zn1(m: i64, n: u64) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain(format!("error bound needs n >= 1, got {n}")));
    }
    let nf = n as f64;
    let mf = m.unsigned_abs() as f64;
    Ok((-PI * mf / (2.0 * (6.0 * nf).sqrt())).exp() + mf * mf / nf.powf(1.5))
}

/// Error-bound expression for the leading-term approximation:
/// e^{-pi |m| / sqrt(6n)} + e^{-pi sqrt(n/6) / 5}. The second summand is
/// the m-independent floor the bound settles to for large |m|.
pub fn error_bound_main(k: u32, m: i64, n: u64) -> Result<f64> {
    if k < 1 {
        return Err(Error::Domain(format!(
            "error_bound_main needs k >= 1, got {k}"
        )));
    }
    if n < 1 {
        return Err(Error::Domain(format!("error bound needs n >= 1, got {n}")));
    }
    let nf = n as f64;
    let mf = m.unsigned_abs() as f64;
    Ok((-PI * mf / (6.0 * nf).sqrt()).exp() + (-PI * (nf / 6.0).sqrt() / 5.0).exp())
}

/// Exact side of the density comparison: (p(n-m+1) - p(n-m)) / p(n).
/// Needs the table to cover n - m + 1 (so m = 0 requires max_n > n).
pub fn dprz_lhs(table: &PartitionTable, m: u64, n: u64) -> Result<SignedLogReal> {
    if m > n {
        return Err(Error::Domain(format!("needs m <= n, got m={m}, n={n}")));
    }
    let upper = table.p_at((n - m + 1) as i64)?;
    let lower = table.p_at((n - m) as i64)?;
    let p_n = table.p_at(n as i64)?;
    let num = crate::BigInt::from(upper.clone()) - crate::BigInt::from(lower.clone());
    Ok(SignedLogReal::from_bigint(&num).div(&SignedLogReal::from_biguint(p_n)))
}

/// Estimated side of the density comparison:
/// (B/(8 sqrt(n))) sech^2(B m / (4 sqrt(n))).
pub fn dprz_rhs(m: u64, n: u64) -> Result<SignedLogReal> {
    if n < 1 {
        return Err(Error::Domain(format!("needs n >= 1, got {n}")));
    }
    let b = b_constant();
    let root = (n as f64).sqrt();
    let u = b * m as f64 / (4.0 * root);
    let log = (b / (8.0 * root)).ln() + ln_sech2(u);
    Ok(SignedLogReal::from_sign_log(1, log))
}

/// Multiplicative error factor for the density comparison:
/// e^{-B m / (4 sqrt(n))} + m^2 / n^{3/2}.
pub fn dprz_error_factor(m: u64, n: u64) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain(format!("needs n >= 1, got {n}")));
    }
    let nf = n as f64;
    let mf = m as f64;
    Ok((-b_constant() * mf / (4.0 * nf.sqrt())).exp() + mf * mf / nf.powf(1.5))
}

/// Predicted size of the r-fold alternating difference of counts:
/// (pi / sqrt(6 (n-m)))^{r+1} * p(n-m), with p(n-m) supplied exactly in
/// log form.
pub fn corollary_prediction(
    r: u32,
    m: u64,
    n: u64,
    p_n_minus_m: &SignedLogReal,
) -> Result<SignedLogReal> {
    if m >= n {
        return Err(Error::Domain(format!(
            "prediction needs n - m >= 1, got m={m}, n={n}"
        )));
    }
    let d = (n - m) as f64;
    let log = (r as f64 + 1.0) * (PI / (6.0 * d).sqrt()).ln() + p_n_minus_m.log_mag;
    Ok(SignedLogReal::from_sign_log(p_n_minus_m.sign, log))
}
