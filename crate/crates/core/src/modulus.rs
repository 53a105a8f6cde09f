use alloc::format;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::{KzError, Result};

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The arithmetic frame `Z / p^s` together with `M = (p^s - 1) / 2`, the
/// least positive integer congruent to `-1/2` modulo `p^s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModulusContext {
    pub p: u64,
    pub s: u32,
    /// `p^s`
    pub modulus: u64,
    /// `(p^s - 1) / 2`
    pub half: u64,
    #[serde(skip)]
    modulus_big: BigInt,
    #[serde(skip)]
    inv2: BigInt,
}

impl ModulusContext {
    pub fn new(p: u64, s: u32) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(KzError::InvalidParameter(format!("p = {p} is not an odd prime")));
        }
        if s == 0 {
            return Err(KzError::InvalidParameter("s must be positive".into()));
        }
        let modulus = p
            .checked_pow(s)
            .filter(|m| *m < (1u64 << 62))
            .ok_or_else(|| KzError::InvalidParameter(format!("p^s = {p}^{s} is too large")))?;
        let half = (modulus - 1) / 2;
        let modulus_big = BigInt::from(modulus);
        // 2 * (M + 1) = p^s + 1, so M + 1 inverts 2.
        let inv2 = BigInt::from(half + 1);
        Ok(Self { p, s, modulus, half, modulus_big, inv2 })
    }

    pub fn modulus_big(&self) -> &BigInt {
        &self.modulus_big
    }

    /// Inverse of 2 modulo `p^s`, in `[0, p^s)`.
    pub fn inv2(&self) -> &BigInt {
        &self.inv2
    }

    /// `p^k` as a big integer.
    pub fn p_pow(&self, k: u32) -> BigInt {
        num_traits::pow(BigInt::from(self.p), k as usize)
    }

    /// The same prime at a different level.
    pub fn at_level(&self, s: u32) -> Result<Self> {
        Self::new(self.p, s)
    }

    /// Canonical representative of `c` in `[0, p^s)`.
    pub fn reduce(&self, c: &BigInt) -> BigInt {
        let r = c % &self.modulus_big;
        if r < BigInt::zero() {
            r + &self.modulus_big
        } else {
            r
        }
    }

    /// Symmetric lift: the representative closest to zero, used for display.
    pub fn symmetric(&self, c: &BigInt) -> BigInt {
        let r = self.reduce(c);
        if r > BigInt::from(self.half) {
            r - &self.modulus_big
        } else {
            r
        }
    }

    /// Checks the defining congruence `2M + 1 = 0 (mod p^s)` for an entry of an
    /// exponent vector.
    pub fn is_admissible_exponent(&self, m: u64) -> bool {
        m > 0 && (BigInt::from(2 * m) + BigInt::one()) % &self.modulus_big == BigInt::zero()
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_is_minus_one_half() {
        for (p, s) in [(5, 1), (5, 2), (7, 3), (3, 4)] {
            let ctx = ModulusContext::new(p, s).unwrap();
            assert!(ctx.is_admissible_exponent(ctx.half));
            assert_eq!(ctx.reduce(&(BigInt::from(2) * ctx.inv2())), BigInt::one());
        }
    }

    #[test]
    fn rejects_bad_primes() {
        assert!(ModulusContext::new(2, 1).is_err());
        assert!(ModulusContext::new(9, 1).is_err());
        assert!(ModulusContext::new(5, 0).is_err());
    }

    #[test]
    fn symmetric_lift() {
        let ctx = ModulusContext::new(5, 2).unwrap();
        assert_eq!(ctx.symmetric(&BigInt::from(24)), BigInt::from(-1));
        assert_eq!(ctx.symmetric(&BigInt::from(12)), BigInt::from(12));
        assert_eq!(ctx.reduce(&BigInt::from(-1)), BigInt::from(24));
    }
}
