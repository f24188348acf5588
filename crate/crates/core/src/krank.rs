//! The exact finite-sum evaluation
//!
//!   N_k(m,n) = sum_{l>=1} (-1)^{l-1} F_k(l;|m|,n),
//!   F_k(l;m,n) = p(n - m*l - ((2k-1)l^2 - l)/2) - p(n - m*l - ((2k-1)l^2 + l)/2),
//!
//! where the loop stops at the first l whose leading p-argument is negative
//! (every later term is 0 - 0). k = 1 is the crank counting function, k = 2
//! the rank; the dependence on m is through |m| only.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::table::PartitionTable;

/// One N_k(m,n) evaluation request.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KRankQuery {
    pub k: u32,
    pub m: i64,
    pub n: u64,
}

impl KRankQuery {
    pub fn new(k: u32, m: i64, n: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("family index k must be >= 1".into()));
        }
        Ok(KRankQuery { k, m, n })
    }
}

/// An exact N_k(m,n). Negative values occur (k = 1, m = 0, n = 1 gives -1),
/// so the payload is a signed integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KRankValue {
    pub value: BigInt,
}

impl std::fmt::Display for KRankValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// The two p-arguments of F_k(l;m,n). ((2k-1)l^2 - l) and ((2k-1)l^2 + l)
/// are both even because (2k-1)l^2 and l have equal parity, so the halves
/// are exact integers. Arguments can be far below zero; they are reported
/// as i128 and clamped by the caller through p_at's negative-argument rule.
fn term_arguments(k: u32, ell: u64, m: u64, n: u64) -> (i128, i128) {
    let sq = (2 * k as i128 - 1) * (ell as i128) * (ell as i128);
    assert!((sq - ell as i128) % 2 == 0, "parity invariant violated");
    let base = n as i128 - m as i128 * ell as i128;
    let x1 = base - (sq - ell as i128) / 2;
    let x2 = base - (sq + ell as i128) / 2;
    (x1, x2)
}

fn p_signed(table: &PartitionTable, x: i128) -> Result<BigInt> {
    if x < 0 {
        return Ok(BigInt::zero());
    }
    if x > i64::MAX as i128 {
        return Err(Error::OutOfRange {
            index: i64::MAX,
            max_n: table.max_n(),
        });
    }
    Ok(BigInt::from(table.p_at(x as i64)?.clone()))
}

/// F_k(l;m,n) for nonnegative m.
pub fn f_k_term(table: &PartitionTable, k: u32, ell: u64, m: u64, n: u64) -> Result<BigInt> {
    if k == 0 || ell == 0 {
        return Err(Error::Domain("f_k_term requires k >= 1 and ell >= 1".into()));
    }
    let (x1, x2) = term_arguments(k, ell, m, n);
    Ok(p_signed(table, x1)? - p_signed(table, x2)?)
}

/// The full alternating sum. Symmetry in m is applied at entry.
pub fn n_k_exact(table: &PartitionTable, q: &KRankQuery) -> Result<KRankValue> {
    if q.k == 0 {
        return Err(Error::Domain("family index k must be >= 1".into()));
    }
    if q.n > table.max_n() {
        return Err(Error::OutOfRange {
            index: q.n as i64,
            max_n: table.max_n(),
        });
    }
    let m = q.m.unsigned_abs();
    let mut value = BigInt::zero();
    let mut ell = 1u64;
    loop {
        let (x1, x2) = term_arguments(q.k, ell, m, q.n);
        if x1 < 0 {
            break;
        }
        let term = p_signed(table, x1)? - p_signed(table, x2)?;
        if ell % 2 == 1 {
            value += term;
        } else {
            value -= term;
        }
        ell += 1;
    }
    Ok(KRankValue { value })
}

/// Least m0 with m0 >= (n+3)/2 - 2k, clamped to 0 since m ranges over
/// nonnegative integers once symmetry is applied.
pub fn exact_regime_threshold(k: u32, n: u64) -> u64 {
    (n + 3).div_ceil(2).saturating_sub(2 * k as u64)
}

/// The single surviving term p(n-(|m|+k)+1) - p(n-(|m|+k)) of the large-m
/// regime, valid on its own for any (k,m,n) as a plain difference.
pub fn main_term_exact(table: &PartitionTable, k: u32, m: i64, n: u64) -> Result<BigInt> {
    if k == 0 {
        return Err(Error::Domain("family index k must be >= 1".into()));
    }
    let shift = m.unsigned_abs() as i128 + k as i128;
    let hi = n as i128 - shift + 1;
    Ok(p_signed(table, hi)? - p_signed(table, hi - 1)?)
}

/// Alternating r-fold difference: out[t] = sum_{j=0..=r} (-1)^j C(r,j) values[t+j],
/// which is (-1)^r times the r-th forward difference.
pub fn backward_difference(r: u32, values: &[BigInt]) -> Result<Vec<BigInt>> {
    let needed = r as usize + 1;
    if values.len() < needed {
        return Err(Error::Length {
            needed,
            got: values.len(),
        });
    }
    // Binomial row C(r, 0..=r) built exactly.
    let mut binom = Vec::with_capacity(needed);
    binom.push(BigInt::from(1));
    for j in 1..=r as u128 {
        let prev = binom.last().unwrap().clone();
        binom.push(prev * BigInt::from(r as u128 - j + 1) / BigInt::from(j));
    }
    let out_len = values.len() - r as usize;
    let mut out = Vec::with_capacity(out_len);
    for t in 0..out_len {
        let mut acc = BigInt::zero();
        for (j, b) in binom.iter().enumerate() {
            let term = b * &values[t + j];
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        out.push(acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{enumerate_statistic, Statistic};
    use crate::series::n_k_oracle_series;
    use crate::table::PartitionTable;
    use std::sync::LazyLock;

    static TABLE: LazyLock<PartitionTable> =
        LazyLock::new(|| PartitionTable::build(300).unwrap());

    fn nk(k: u32, m: i64, n: u64) -> BigInt {
        n_k_exact(&TABLE, &KRankQuery::new(k, m, n).unwrap())
            .unwrap()
            .value
    }

    // ====== 1. frozen single values ======

    #[test]
    fn f_term_examples() {
        assert_eq!(f_k_term(&TABLE, 1, 1, 0, 1).unwrap(), BigInt::zero());
        assert_eq!(f_k_term(&TABLE, 1, 2, 0, 1).unwrap(), BigInt::from(1));
        assert_eq!(f_k_term(&TABLE, 2, 1, 3, 4).unwrap(), BigInt::from(1));
    }

    #[test]
    fn frozen_values() {
        assert_eq!(nk(1, 0, 1), BigInt::from(-1));
        assert_eq!(nk(2, 3, 4), BigInt::from(1));
        assert_eq!(nk(2, 2, 4), BigInt::zero());
        assert_eq!(nk(1, 10, 10), BigInt::from(1));
        assert_eq!(nk(1, 0, 0), BigInt::from(1));
        assert_eq!(nk(2, 0, 0), BigInt::zero());
    }

    #[test]
    fn invalid_inputs() {
        assert!(KRankQuery::new(0, 0, 1).is_err());
        assert!(f_k_term(&TABLE, 1, 0, 0, 1).is_err());
        assert!(matches!(
            n_k_exact(&TABLE, &KRankQuery::new(1, 0, 301).unwrap()),
            Err(Error::OutOfRange { .. })
        ));
    }

    // ====== 2. agreement with the independent oracles ======

    #[test]
    fn matches_series_oracle_on_a_small_triangle() {
        for k in 1..=3u32 {
            for m in 0..=60u64 {
                let series = n_k_oracle_series(k, m, 60).unwrap();
                for n in m..=60u64 {
                    assert_eq!(
                        nk(k, m as i64, n),
                        series.coeffs[n as usize],
                        "k={k} m={m} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn matches_crank_enumeration_above_one() {
        for n in 2..=25u64 {
            let hist = enumerate_statistic(n, Statistic::Crank).unwrap();
            for m in -(n as i64 + 1)..=(n as i64 + 1) {
                let expected = hist.get(&m).copied().unwrap_or(0);
                assert_eq!(nk(1, m, n), BigInt::from(expected), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn matches_rank_enumeration_above_zero() {
        for n in 1..=25u64 {
            let hist = enumerate_statistic(n, Statistic::Rank).unwrap();
            for m in -(n as i64 + 1)..=(n as i64 + 1) {
                let expected = hist.get(&m).copied().unwrap_or(0);
                assert_eq!(nk(2, m, n), BigInt::from(expected), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn rank_series_has_no_constant_term_but_enumeration_does() {
        // At n = 0 the series route gives 0 for every m (the theta factor
        // of k >= 2 starts at q^{k-1+m}), while the empty partition has
        // rank 0. The two conventions genuinely part ways here.
        assert_eq!(nk(2, 0, 0), BigInt::zero());
        let hist = enumerate_statistic(0, Statistic::Rank).unwrap();
        assert_eq!(hist.get(&0), Some(&1));
    }

    // ====== 3. structural properties ======

    #[test]
    fn symmetric_in_m() {
        for k in 1..=4u32 {
            for n in 0..=40u64 {
                for m in 0..=(n as i64 + 2) {
                    assert_eq!(nk(k, m, n), nk(k, -m, n));
                }
            }
        }
    }

    #[test]
    fn vanishes_past_n() {
        for k in 1..=4u32 {
            for n in 0..=30u64 {
                for m in (n as i64 + 1)..=(n as i64 + 3) {
                    assert_eq!(nk(k, m, n), BigInt::zero(), "k={k} n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn nonnegative_for_rank_and_crank_from_two() {
        for k in 1..=2u32 {
            for n in 2..=60u64 {
                for m in 0..=n as i64 {
                    assert!(nk(k, m, n) >= BigInt::zero(), "k={k} n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn observed_signs_for_higher_k() {
        // Not claimed in general; recorded as an observation over this range.
        for k in 3..=5u32 {
            for n in 0..=50u64 {
                for m in 0..=n as i64 {
                    assert!(nk(k, m, n) >= BigInt::zero(), "k={k} n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn mass_sums_to_partition_count() {
        for n in 0..=60u64 {
            let mut sum1 = BigInt::zero();
            let mut sum2 = BigInt::zero();
            for m in -(n as i64 + 1)..=(n as i64 + 1) {
                sum1 += nk(1, m, n);
                sum2 += nk(2, m, n);
            }
            let p_n = BigInt::from(TABLE.p_at(n as i64).unwrap().clone());
            assert_eq!(sum1, p_n, "crank mass at n={n}");
            if n >= 1 {
                assert_eq!(sum2, p_n, "rank mass at n={n}");
            } else {
                // The k = 2 series has no constant term, so its mass at
                // n = 0 is 0, not p(0) = 1.
                assert_eq!(sum2, BigInt::zero());
            }
        }
    }

    // ====== 4. the single-term regime ======

    #[test]
    fn threshold_examples() {
        assert_eq!(exact_regime_threshold(1, 10), 5);
        assert_eq!(exact_regime_threshold(2, 1), 0);
        assert_eq!(exact_regime_threshold(1, 0), 0);
        assert_eq!(exact_regime_threshold(1, 1), 0);
        assert_eq!(exact_regime_threshold(3, 200), 96);
    }

    #[test]
    fn main_term_examples() {
        assert_eq!(main_term_exact(&TABLE, 1, 10, 10).unwrap(), BigInt::from(1));
        for k in 2..=4u32 {
            let n = 20u64;
            assert_eq!(
                main_term_exact(&TABLE, k, n as i64, n).unwrap(),
                BigInt::zero()
            );
        }
    }

    #[test]
    fn single_term_cutover_scan() {
        // The full sum collapses to the l = 1 term exactly from the least
        // m with 2m > n + 3 - 4k onward: at 2m = n + 3 - 4k the l = 2 term
        // is p(0) - p(-2) = 1, not yet zero. That boundary cell exists for
        // every odd n >= 4k - 3, where the true cutover sits one above the
        // nominal threshold ceil((n+3)/2) - 2k; for even n the two agree.
        for k in 1..=3u32 {
            for n in 0..=120u64 {
                let cutover = (0..=n as i64 + 1)
                    .find(|&m| {
                        (m..=n as i64 + 1).all(|mm| {
                            nk(k, mm, n) == main_term_exact(&TABLE, k, mm, n).unwrap()
                        })
                    })
                    .unwrap();
                let expected = ((n as i64 + 3 - 4 * k as i64).div_euclid(2) + 1).max(0);
                assert_eq!(cutover, expected, "k={k} n={n}");
                let nominal = exact_regime_threshold(k, n) as i64;
                if n % 2 == 0 || expected == 0 {
                    assert_eq!(cutover, nominal, "k={k} n={n}");
                } else {
                    assert_eq!(cutover, nominal + 1, "k={k} n={n}");
                }
            }
        }
    }

    #[test]
    fn nominal_threshold_misses_odd_boundary() {
        // Representative boundary cells where m equals the nominal
        // threshold but the l = 2 term still contributes 1.
        assert_eq!(nk(1, 3, 7), BigInt::from(1));
        assert_eq!(main_term_exact(&TABLE, 1, 3, 7).unwrap(), BigInt::from(2));
        assert_eq!(nk(1, 2, 5), BigInt::zero());
        assert_eq!(main_term_exact(&TABLE, 1, 2, 5).unwrap(), BigInt::from(1));
        assert_eq!(nk(2, 2, 9), BigInt::from(3));
        assert_eq!(main_term_exact(&TABLE, 2, 2, 9).unwrap(), BigInt::from(4));
    }

    // ====== 5. differences ======

    #[test]
    fn difference_basics() {
        let vals: Vec<BigInt> = [5, 7, 11].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(backward_difference(0, &vals).unwrap(), vals);
        let d1 = backward_difference(1, &vals).unwrap();
        assert_eq!(d1, vec![BigInt::from(-2), BigInt::from(-4)]);
        let constant: Vec<BigInt> = vec![BigInt::from(9); 5];
        let d2 = backward_difference(2, &constant).unwrap();
        assert!(d2.iter().all(|v| v.is_zero()));
        assert!(matches!(
            backward_difference(3, &vals),
            Err(Error::Length { needed: 4, got: 3 })
        ));
    }
}
