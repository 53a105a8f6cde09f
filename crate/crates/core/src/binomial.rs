//! Exact binomial coefficients and their p-adic valuations.

use alloc::format;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::{KzError, Result};

/// `binom(n, k)` exactly; zero when `k > n`.
pub fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `binom(n, k)` for a possibly negative integer top: `n(n-1)...(n-k+1)/k!`.
pub fn binom_signed(n: i64, k: u64) -> BigInt {
    if n >= 0 {
        return binom(n as u64, k);
    }
    // binom(-m, k) = (-1)^k binom(m + k - 1, k)
    let b = binom((-n) as u64 + k - 1, k);
    if k % 2 == 1 {
        -b
    } else {
        b
    }
}

/// Exponent of `p` in a nonzero integer; `None` for zero.
pub fn vp(x: &BigInt, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let (q, r) = y.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        y = q;
        v += 1;
    }
}

pub fn vp_u64(mut x: u64, p: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    Some(v)
}

/// Number of carries when adding `k` and `n - k` in base `p`, which is the
/// exponent of `p` in `binom(n, k)` (Kummer).
pub fn kummer_carries(n: u64, k: u64, p: u64) -> u32 {
    if k > n {
        return 0;
    }
    let (mut a, mut b) = (k, n - k);
    let (mut carry, mut count) = (0u64, 0u32);
    while a > 0 || b > 0 || carry > 0 {
        let d = a % p + b % p + carry;
        carry = u64::from(d >= p);
        count += carry as u32;
        a /= p;
        b /= p;
    }
    count
}

/// `binom(n, k) mod p` by Lucas' theorem.
pub fn lucas_mod_p(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        let b = binom(nd, kd);
        let b = (b % BigInt::from(p)).try_into().unwrap_or(0u64);
        acc = acc * b % p;
        n /= p;
        k /= p;
    }
    acc
}

/// A predicted exponent of `p` compared against the exact one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValuationCheck {
    /// Predicted exponent (exact equality) or lower bound.
    pub predicted: u32,
    /// Exponent of `p` in the exact integer; `None` if it is zero.
    pub exact: Option<u32>,
    pub holds: bool,
}

/// For `a = b p^c` with `p` not dividing `b` and `0 < a <= p^s`, the exponent
/// of `p` in `binom(p^s, a)` is exactly `s - c`. Returns the check against the
/// big-integer value.
pub fn binom_valuation_ps(p: u64, s: u32, a: u64) -> Result<ValuationCheck> {
    let ps = p.checked_pow(s).ok_or_else(|| KzError::InvalidParameter(format!("{p}^{s} overflows")))?;
    if a == 0 || a > ps {
        return Err(KzError::InvalidParameter(format!("a = {a} must lie in 1..={ps}")));
    }
    let c = vp_u64(a, p).unwrap_or(0);
    let predicted = s - c;
    let exact = vp(&binom(ps, a), p);
    Ok(ValuationCheck { predicted, exact, holds: exact == Some(predicted) })
}

/// `binom(m p^r + l p^s - 1, l p^s - 1)` is divisible by `p^(s - r)` when
/// `0 <= r < s`, `p` does not divide `m` and `l > 0`.
pub fn binom_shift_divisibility(p: u64, s: u32, r: u32, m: u64, l: u64) -> Result<ValuationCheck> {
    if r >= s || l == 0 || m.is_multiple_of(p) {
        return Err(KzError::InvalidParameter(format!(
            "need 0 <= r < s, l > 0 and p not dividing m (r={r}, s={s}, m={m}, l={l})"
        )));
    }
    let pr = p.pow(r);
    let ps = p.pow(s);
    let top = m * pr + l * ps - 1;
    let value = binom(top, l * ps - 1);
    let exact = vp(&value, p);
    let predicted = s - r;
    Ok(ValuationCheck { predicted, exact, holds: exact.is_none_or(|e| e >= predicted) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binom(25, 5), BigInt::from(53130));
        assert_eq!(binom(9, 4), BigInt::from(126));
        assert_eq!(binom(29, 24), BigInt::from(118755));
        assert_eq!(binom(3, 5), BigInt::zero());
        assert_eq!(binom_signed(-1, 3), BigInt::from(-1));
        assert_eq!(binom_signed(-3, 2), BigInt::from(6));
    }

    #[test]
    fn kummer_agrees_with_exact() {
        for p in [3u64, 5, 7] {
            for n in 0..60u64 {
                for k in 0..=n {
                    assert_eq!(Some(kummer_carries(n, k, p)), vp(&binom(n, k), p), "p={p} n={n} k={k}");
                    let exact = (binom(n, k) % BigInt::from(p)).try_into().unwrap_or(99u64);
                    assert_eq!(lucas_mod_p(n, k, p), exact);
                }
            }
        }
    }

    #[test]
    fn documented_instances() {
        assert_eq!(binom_valuation_ps(5, 2, 25).unwrap().predicted, 0);
        assert_eq!(binom_valuation_ps(5, 2, 5).unwrap().exact, Some(1));
        assert_eq!(binom_valuation_ps(5, 2, 1).unwrap().exact, Some(2));
        assert!(binom_valuation_ps(5, 2, 26).is_err());
        let c = binom_shift_divisibility(5, 1, 0, 1, 1).unwrap();
        assert_eq!((c.exact, c.holds), (Some(1), true));
        let c = binom_shift_divisibility(5, 2, 1, 1, 1).unwrap();
        assert!(c.holds && c.exact >= Some(1));
        let c = binom_shift_divisibility(3, 1, 0, 2, 1).unwrap();
        assert_eq!((c.exact, c.holds), (Some(1), true));
    }
}
