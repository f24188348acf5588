//! Signed log-domain reals: a sign in {-1, 0, +1} plus the natural log of
//! the magnitude. Quantities here routinely reach e^{B sqrt(n)} (about
//! e^{811} at n = 10^5), far past f64 range, while their logs stay tiny.
//!
//! Addition leaves the log domain through a max-shifted, compensated
//! accumulation; the precision limit of the representation is roughly
//! 1e-12 relative, set by f64 logs of order 10^3.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedLogReal {
    /// -1, 0 or +1; zero means the value is exactly zero and log_mag is
    /// meaningless (kept at -inf by every constructor here).
    pub sign: i8,
    /// ln |x|.
    pub log_mag: f64,
}

impl SignedLogReal {
    pub fn zero() -> Self {
        SignedLogReal {
            sign: 0,
            log_mag: f64::NEG_INFINITY,
        }
    }

    pub fn one() -> Self {
        SignedLogReal {
            sign: 1,
            log_mag: 0.0,
        }
    }

    pub fn from_sign_log(sign: i8, log_mag: f64) -> Self {
        debug_assert!((-1..=1).contains(&sign));
        if sign == 0 {
            Self::zero()
        } else {
            SignedLogReal { sign, log_mag }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::zero()
        } else {
            SignedLogReal {
                sign: if x > 0.0 { 1 } else { -1 },
                log_mag: x.abs().ln(),
            }
        }
    }

    pub fn from_biguint(x: &BigUint) -> Self {
        if x.is_zero() {
            Self::zero()
        } else {
            SignedLogReal {
                sign: 1,
                log_mag: ln_biguint(x),
            }
        }
    }

    pub fn from_bigint(x: &BigInt) -> Self {
        match x.sign() {
            Sign::NoSign => Self::zero(),
            Sign::Plus => SignedLogReal {
                sign: 1,
                log_mag: ln_biguint(x.magnitude()),
            },
            Sign::Minus => SignedLogReal {
                sign: -1,
                log_mag: ln_biguint(x.magnitude()),
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn neg(&self) -> Self {
        SignedLogReal {
            sign: -self.sign,
            log_mag: self.log_mag,
        }
    }

    pub fn abs(&self) -> Self {
        SignedLogReal {
            sign: self.sign.abs(),
            log_mag: self.log_mag,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let sign = self.sign * rhs.sign;
        if sign == 0 {
            Self::zero()
        } else {
            SignedLogReal {
                sign,
                log_mag: self.log_mag + rhs.log_mag,
            }
        }
    }

    /// Division; the divisor must be nonzero.
    pub fn div(&self, rhs: &Self) -> Self {
        debug_assert!(rhs.sign != 0, "division by exact zero");
        let sign = self.sign * rhs.sign;
        if sign == 0 {
            Self::zero()
        } else {
            SignedLogReal {
                sign,
                log_mag: self.log_mag - rhs.log_mag,
            }
        }
    }

    /// Integer power; 0^0 is taken as 1.
    pub fn powi(&self, p: i32) -> Self {
        if p == 0 {
            return Self::one();
        }
        if self.sign == 0 {
            debug_assert!(p > 0, "negative power of exact zero");
            return Self::zero();
        }
        let sign = if p % 2 == 0 { 1 } else { self.sign };
        SignedLogReal {
            sign,
            log_mag: self.log_mag * p as f64,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        signed_log_sum(&[*self, *rhs])
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        signed_log_sum(&[*self, rhs.neg()])
    }

    /// Collapses to f64; overflows to +/-inf for |log_mag| past ~709.
    pub fn exp_f64(&self) -> f64 {
        self.sign as f64 * self.log_mag.exp()
    }
}

/// Renders as `0` or `+1*exp(L)` / `-1*exp(L)` with L in scientific
/// notation at 17 significant digits.
impl std::fmt::Display for SignedLogReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            1 => write!(f, "+1*exp({:.16e})", self.log_mag),
            _ => write!(f, "-1*exp({:.16e})", self.log_mag),
        }
    }
}

/// Signed sum of log-domain terms: shift every term by the largest log
/// magnitude, accumulate the signed exponentials with Kahan compensation,
/// then return to log form. Exact cancellation yields the zero value.
pub fn signed_log_sum(terms: &[SignedLogReal]) -> SignedLogReal {
    let shift = terms
        .iter()
        .filter(|t| t.sign != 0)
        .map(|t| t.log_mag)
        .fold(f64::NEG_INFINITY, f64::max);
    if shift == f64::NEG_INFINITY {
        return SignedLogReal::zero();
    }
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        if t.sign == 0 {
            continue;
        }
        let v = t.sign as f64 * (t.log_mag - shift).exp();
        let y = v - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    if sum == 0.0 {
        return SignedLogReal::zero();
    }
    SignedLogReal {
        sign: if sum > 0.0 { 1 } else { -1 },
        log_mag: shift + sum.abs().ln(),
    }
}

/// |exact - estimate| / |exact|, staying in log space until the final
/// magnitude comparison. Errors when the reference is exactly zero.
pub fn relative_error(exact: &SignedLogReal, estimate: &SignedLogReal) -> Result<f64> {
    if exact.sign == 0 {
        return Err(Error::ZeroReference);
    }
    let diff = estimate.sub(exact);
    if diff.sign == 0 {
        return Ok(0.0);
    }
    Ok((diff.log_mag - exact.log_mag).exp())
}

/// ln of an arbitrary-precision positive integer via its top 64 bits:
/// for x = hi * 2^shift + rest, ln x = ln hi + shift*ln 2 up to a relative
/// truncation error below 2^-63. Good to ~1e-13 absolute in the log, i.e.
/// >= 50 significant bits of the logarithm.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    assert!(bits > 0, "ln of zero");
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 64;
    let hi = (x >> shift).to_u64().unwrap();
    (hi as f64).ln() + shift as f64 * std::f64::consts::LN_2
}
