//! q-series oracle: coefficients of
//!
//!   ( prod_{r>=1} (1-q^r)^{-1} ) * sum_{l>=1} (-1)^{l-1} q^{l((2k-1)l-1)/2 + m*l} (1 - q^l)
//!
//! by dense convolution. The partition factor comes from an O(n^2)
//! part-by-part dynamic program, not the pentagonal recurrence, so this
//! module shares no arithmetic with `table` and serves as an independent
//! check on the finite-sum evaluation.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// The dynamic program is quadratic; this cap keeps accidental big requests
/// from stalling the process.
pub const SERIES_MAX_N: u64 = 5_000;

pub struct CoefficientSeries {
    pub k: u32,
    pub m: u64,
    /// coeffs[n] is the q^n coefficient of the product above.
    pub coeffs: Vec<BigInt>,
}

/// Expands the series for one (k, m) pair up to and including q^max_n.
///
/// # Edge cases
/// For k = 1, m = 0 the theta-like factor starts at q^0, so coeffs[0] = 1;
/// for every other (k, m) with k >= 1 the constant term is 0.
pub fn n_k_oracle_series(k: u32, m: u64, max_n: u64) -> Result<CoefficientSeries> {
    if k == 0 {
        return Err(Error::Domain("series requires k >= 1".into()));
    }
    if max_n > SERIES_MAX_N {
        return Err(Error::Budget {
            what: "series expansion",
            requested: max_n,
            budget: SERIES_MAX_N,
        });
    }
    let nn = max_n as usize;

    // Partition generating function by the unbounded part-size DP:
    // after processing part r, p[i] counts partitions of i into parts <= r.
    let mut p = vec![BigUint::zero(); nn + 1];
    p[0] = BigUint::one();
    for part in 1..=nn {
        for total in part..=nn {
            let (head, tail) = p.split_at_mut(total);
            tail[0] += &head[total - part];
        }
    }

    // Theta-like factor: +/-1 at the exponents of the alternating sum.
    // Distinct l can land on the same exponent, so entries accumulate.
    let mut theta = vec![0i64; nn + 1];
    let mut l = 1u64;
    loop {
        let e1 = l * ((2 * k as u64 - 1) * l - 1) / 2 + m * l;
        if e1 > max_n {
            break;
        }
        let sign = if l % 2 == 1 { 1 } else { -1 };
        theta[e1 as usize] += sign;
        let e2 = e1 + l;
        if e2 <= max_n {
            theta[e2 as usize] -= sign;
        }
        l += 1;
    }

    // Dense convolution; theta is sparse so this is O(n^1.5) big additions.
    let mut coeffs = vec![BigInt::zero(); nn + 1];
    for (i, &t) in theta.iter().enumerate() {
        if t == 0 {
            continue;
        }
        for j in i..=nn {
            coeffs[j] += BigInt::from(p[j - i].clone()) * t;
        }
    }

    Ok(CoefficientSeries { k, m, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{enumerate_statistic, Statistic};

    fn coeff(k: u32, m: u64, n: u64) -> BigInt {
        n_k_oracle_series(k, m, n).unwrap().coeffs[n as usize].clone()
    }

    #[test]
    fn hand_expansion_to_first_order() {
        let s = n_k_oracle_series(1, 0, 1).unwrap();
        assert_eq!(s.coeffs, vec![BigInt::from(1), BigInt::from(-1)]);
    }

    #[test]
    fn constant_terms() {
        // (1-q)/(1-q) contributes 1 at q^0 only when the first exponent
        // m + k - 1 is zero.
        assert_eq!(coeff(1, 0, 0), BigInt::from(1));
        assert_eq!(coeff(1, 1, 0), BigInt::zero());
        assert_eq!(coeff(2, 0, 0), BigInt::zero());
        assert_eq!(coeff(3, 2, 0), BigInt::zero());
    }

    #[test]
    fn rank_coefficient_examples() {
        assert_eq!(coeff(2, 0, 4), BigInt::from(1));
        assert_eq!(coeff(2, 3, 4), BigInt::from(1));
        assert_eq!(coeff(2, 2, 4), BigInt::zero());
    }

    #[test]
    fn crank_histogram_of_seven() {
        let by_enum = enumerate_statistic(7, Statistic::Crank).unwrap();
        for m in 0..=8u64 {
            let expected = by_enum.get(&(m as i64)).copied().unwrap_or(0);
            assert_eq!(coeff(1, m, 7), BigInt::from(expected), "m={m}");
        }
    }

    #[test]
    fn rank_histogram_of_five() {
        let by_enum = enumerate_statistic(5, Statistic::Rank).unwrap();
        for m in 0..=6u64 {
            let expected = by_enum.get(&(m as i64)).copied().unwrap_or(0);
            assert_eq!(coeff(2, m, 5), BigInt::from(expected), "m={m}");
        }
    }

    #[test]
    fn crank_series_disagrees_with_enumeration_only_at_one() {
        // The famous n = 1 case: the series gives -1 at m = 0 and +1 at
        // m = 1, while the one partition [1] has crank -1.
        assert_eq!(coeff(1, 0, 1), BigInt::from(-1));
        assert_eq!(coeff(1, 1, 1), BigInt::from(1));
        let by_enum = enumerate_statistic(1, Statistic::Crank).unwrap();
        assert_eq!(by_enum.get(&0), None);
        assert_eq!(by_enum.get(&1), None);
        assert_eq!(by_enum.get(&-1), Some(&1));
    }

    #[test]
    fn zero_k_and_budget_are_rejected() {
        assert!(matches!(
            n_k_oracle_series(0, 0, 10),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            n_k_oracle_series(1, 0, SERIES_MAX_N + 1),
            Err(Error::Budget { .. })
        ));
    }
}
