//! Software-float evaluation of the leading-term residual. The relative
//! gap between p(n) and its two-factor approximation decays like
//! e^{-B sqrt(n)/2}, which drops below what f64 logs of the exact values
//! can resolve (~1e-13) once n passes roughly 2000. Tracking the
//! normalized residual constant across n up to 10^5 therefore needs
//! arithmetic wide enough to absorb a ~585-bit cancellation, scaled
//! per n: B/(2 ln 2) * sqrt(n) bits for the cancellation plus headroom.

use astro_float::{BigFloat, Consts, Exponent, RoundingMode, Sign};
use num_bigint::BigUint;
use num_traits::Zero;

use crate::asymptotics::b_constant;

const RM: RoundingMode = RoundingMode::ToEven;

/// Working precision in bits for computations at height n: enough to
/// survive the e^{-B sqrt(n)/2} cancellation with 96 guard bits, rounded
/// up to whole words.
fn precision_for(n: u64) -> usize {
    let cancel = b_constant() / (2.0 * std::f64::consts::LN_2) * (n as f64).sqrt();
    (cancel.ceil() as usize + 96).div_ceil(64) * 64
}

/// Exact embedding of an arbitrary-precision integer: the word array is
/// the mantissa and the exponent equals its bit width, so no rounding
/// occurs regardless of target precision.
fn big_from_biguint(x: &BigUint) -> BigFloat {
    if x.is_zero() {
        return BigFloat::from_u64(0, 64);
    }
    let words = x.to_u64_digits();
    BigFloat::from_words(&words, Sign::Pos, (words.len() * 64) as Exponent)
}

/// Collapses to f64 from the top 128 mantissa bits. NaN propagates;
/// magnitudes beyond f64 range saturate to infinity or zero.
fn to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_zero() {
        return 0.0;
    }
    if x.is_inf() {
        return if x.is_inf_neg() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
    }
    let (words, _prec, sign, e, _inexact) = x.as_raw_parts().expect("finite value");
    let len = words.len();
    let top = words[len - 1] as f64;
    let next = if len >= 2 { words[len - 2] as f64 } else { 0.0 };
    // Mantissa is normalized: value = (top/2^64 + next/2^128) * 2^e.
    let frac = top + next / 2f64.powi(64);
    let val = frac * 2f64.powi(e - 64);
    match sign {
        Sign::Neg => -val,
        Sign::Pos => val,
    }
}

/// Evaluator for residuals of the two-factor approximation against exact
/// partition numbers. Holds the shared constants cache; create once and
/// reuse across a scan (per thread — the cache is not shareable).
pub struct Residuals {
    cc: Consts,
}

impl Residuals {
    pub fn new() -> Self {
        Residuals {
            cc: Consts::new().expect("constants cache allocation"),
        }
    }

    /// The two-factor approximation at full working precision:
    /// e^{B sqrt(nu)} / (4 sqrt(3) nu) * (1 - 1/(B sqrt(nu))), nu = n - 1/24.
    fn hat_p_big(&mut self, n: u64, p: usize) -> BigFloat {
        let nu = BigFloat::from_u64(24 * n - 1, p).div(&BigFloat::from_u64(24, p), p, RM);
        let root_nu = nu.sqrt(p, RM);
        let pi = self.cc.pi(p, RM);
        let b = pi
            .mul(&BigFloat::from_u64(2, p), p, RM)
            .div(&BigFloat::from_u64(6, p).sqrt(p, RM), p, RM);
        let b_root = b.mul(&root_nu, p, RM);
        let growth = b_root.exp(p, RM, &mut self.cc);
        let one = BigFloat::from_u64(1, p);
        let denom = BigFloat::from_u64(4, p)
            .mul(&BigFloat::from_u64(3, p).sqrt(p, RM), p, RM)
            .mul(&nu, p, RM);
        let correction = one.sub(&one.div(&b_root, p, RM), p, RM);
        growth.div(&denom, p, RM).mul(&correction, p, RM)
    }

    /// Normalized residual constant
    /// c(n) = |p(n) - hat_p(n)| * n * e^{-B sqrt(n)/2}; p_n must be the
    /// exact p(n).
    pub fn residual_constant(&mut self, n: u64, p_n: &BigUint) -> f64 {
        let p = precision_for(n);
        let hat = self.hat_p_big(n, p);
        let exact = big_from_biguint(p_n);
        let diff = exact.sub(&hat, p, RM).abs();
        let pi = self.cc.pi(p, RM);
        let b = pi
            .mul(&BigFloat::from_u64(2, p), p, RM)
            .div(&BigFloat::from_u64(6, p).sqrt(p, RM), p, RM);
        let half_arg = b
            .mul(&BigFloat::from_u64(n, p).sqrt(p, RM), p, RM)
            .div(&BigFloat::from_u64(2, p), p, RM);
        let damp = half_arg.exp(p, RM, &mut self.cc);
        let scaled = diff.mul(&BigFloat::from_u64(n, p), p, RM).div(&damp, p, RM);
        to_f64(&scaled)
    }

    /// |hat_p(n)/p(n) - 1|; p_n must be the exact p(n).
    pub fn ratio_gap(&mut self, n: u64, p_n: &BigUint) -> f64 {
        let p = precision_for(n);
        let hat = self.hat_p_big(n, p);
        let exact = big_from_biguint(p_n);
        let one = BigFloat::from_u64(1, p);
        let gap = hat.div(&exact, p, RM).sub(&one, p, RM).abs();
        to_f64(&gap)
    }
}

impl Default for Residuals {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::hat_p;
    use crate::signed_log::SignedLogReal;
    use crate::table::PartitionTable;
    use std::sync::LazyLock;

    static TABLE: LazyLock<PartitionTable> =
        LazyLock::new(|| PartitionTable::build(20_000).unwrap());

    #[test]
    fn integer_embedding_roundtrips() {
        for v in [1u64, 2, 190_569_292, u64::MAX] {
            let x = BigUint::from(v);
            assert_eq!(to_f64(&big_from_biguint(&x)), v as f64);
        }
        let big = BigUint::from(3u32).pow(400);
        let log_via_float = to_f64(&big_from_biguint(&big).ln(2048, RM, &mut Consts::new().unwrap()));
        let expect = 400.0 * 3f64.ln();
        assert!((log_via_float - expect).abs() < 1e-9, "{log_via_float}");
        assert_eq!(to_f64(&big_from_biguint(&BigUint::ZERO)), 0.0);
    }

    #[test]
    fn f64_collapse_matches_source() {
        for v in [1.0f64, 0.5, 1.75e300, 3.141592653589793e-200] {
            let x = BigFloat::from_f64(v, 192);
            let back = to_f64(&x);
            assert!(((back - v) / v).abs() < 1e-15, "{v} -> {back}");
        }
        assert!(to_f64(&BigFloat::from_f64(f64::NAN, 64)).is_nan());
    }

    #[test]
    fn residual_matches_f64_route_at_small_n() {
        // At n = 100 everything still fits in f64: cross-check the
        // wide-precision path against a direct computation.
        let p100 = TABLE.p_at(100).unwrap();
        let direct = {
            let hat = hat_p(100).unwrap().exp_f64();
            (190_569_292.0f64 - hat).abs() * 100.0 * (-b_constant() * 5.0).exp()
        };
        let wide = Residuals::new().residual_constant(100, p100);
        assert!(
            (wide - direct).abs() < 1e-9 * (1.0 + direct),
            "wide {wide} vs direct {direct}"
        );
        assert!(wide > 0.05 && wide < 0.15, "residual constant {wide}");
    }

    #[test]
    fn ratio_gap_matches_f64_route_at_small_n() {
        let mut res = Residuals::new();
        let wide = res.ratio_gap(100, TABLE.p_at(100).unwrap());
        let direct = crate::signed_log::relative_error(
            &SignedLogReal::from_biguint(TABLE.p_at(100).unwrap()),
            &hat_p(100).unwrap(),
        )
        .unwrap();
        assert!(
            ((wide - direct) / direct).abs() < 1e-6,
            "wide {wide} vs direct {direct}"
        );
    }

    #[test]
    fn ratio_gap_decays_past_f64_resolution() {
        let mut res = Residuals::new();
        let g100 = res.ratio_gap(100, TABLE.p_at(100).unwrap());
        let g2000 = res.ratio_gap(2_000, TABLE.p_at(2_000).unwrap());
        let g20000 = res.ratio_gap(20_000, TABLE.p_at(20_000).unwrap());
        assert!(g100 > g2000 && g2000 > g20000, "{g100} {g2000} {g20000}");
        // e^{-B sqrt(20000)/2} ~ e^{-181}: far beyond f64-log resolution,
        // only computable through the wide path.
        assert!(g20000 < 1e-70 && g20000 > 0.0, "gap {g20000}");
    }

    #[test]
    fn residual_constant_envelope_grows_slowly() {
        // Same-parity samples: the second-order correction term
        // oscillates with n, so compare like with like.
        let mut res = Residuals::new();
        let c200 = res.residual_constant(200, TABLE.p_at(200).unwrap());
        let c2000 = res.residual_constant(2_000, TABLE.p_at(2_000).unwrap());
        let c20000 = res.residual_constant(20_000, TABLE.p_at(20_000).unwrap());
        for c in [c200, c2000, c20000] {
            assert!(c.is_finite() && c > 0.0 && c < 0.2, "constant {c}");
        }
        assert!(c200 < c2000 && c2000 < c20000, "{c200} {c2000} {c20000}");
    }
}
