use alloc::vec::Vec;

use crate::{KzError, Result};

/// Maximum number of variables a packed monomial can hold.
pub const MAX_VARS: usize = 8;
/// Largest exponent a single variable can carry.
pub const MAX_EXPONENT: u32 = 0xFFFF;

const FIELD_BITS: u32 = 16;
// Lowest bit of every field except the first one; a carry out of field k
// shows up in the lowest bit of field k + 1.
const CARRY_MASK: u128 = {
    let mut m = 0u128;
    let mut k = 1;
    while k < MAX_VARS {
        m |= 1u128 << (k as u32 * FIELD_BITS);
        k += 1;
    }
    m
};

/// Exponent vector packed into 16-bit fields. Variable 0 sits in the most
/// significant field so that integer order on the packed word is the
/// lexicographic order `v_0 > v_1 > ...`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(u128);

#[inline]
fn shift(var: usize) -> u32 {
    (MAX_VARS - 1 - var) as u32 * FIELD_BITS
}

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_exponents(exps: &[u32]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(KzError::TooManyVariables(exps.len()));
        }
        let mut word = 0u128;
        for (i, &e) in exps.iter().enumerate() {
            if e > MAX_EXPONENT {
                return Err(KzError::ExponentOverflow);
            }
            word |= (e as u128) << shift(i);
        }
        Ok(Monomial(word))
    }

    /// Monomial `v_var^e`.
    pub fn var_power(var: usize, e: u32) -> Result<Self> {
        if var >= MAX_VARS {
            return Err(KzError::TooManyVariables(var + 1));
        }
        if e > MAX_EXPONENT {
            return Err(KzError::ExponentOverflow);
        }
        Ok(Monomial((e as u128) << shift(var)))
    }

    #[inline]
    pub fn exponent(self, var: usize) -> u32 {
        ((self.0 >> shift(var)) & MAX_EXPONENT as u128) as u32
    }

    pub fn exponents(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exponent(i)).collect()
    }

    pub fn total_degree(self) -> u64 {
        (0..MAX_VARS).map(|i| self.exponent(i) as u64).sum()
    }

    /// Product of monomials, `None` on exponent overflow.
    #[inline]
    pub fn checked_mul(self, other: Monomial) -> Option<Monomial> {
        let sum = self.0.checked_add(other.0)?;
        if (self.0 ^ other.0 ^ sum) & CARRY_MASK != 0 {
            return None;
        }
        Some(Monomial(sum))
    }

    /// Quotient `self / other` when `other` divides `self`.
    #[inline]
    pub fn checked_div(self, other: Monomial) -> Option<Monomial> {
        let diff = self.0.checked_sub(other.0)?;
        if (self.0 ^ other.0 ^ diff) & CARRY_MASK != 0 {
            return None;
        }
        Some(Monomial(diff))
    }

    pub fn divides(self, other: Monomial) -> bool {
        other.checked_div(self).is_some()
    }

    pub fn with_exponent(self, var: usize, e: u32) -> Result<Monomial> {
        if e > MAX_EXPONENT {
            return Err(KzError::ExponentOverflow);
        }
        let cleared = self.0 & !((MAX_EXPONENT as u128) << shift(var));
        Ok(Monomial(cleared | ((e as u128) << shift(var))))
    }

    pub fn raw(self) -> u128 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_order_matches_word_order() {
        let a = Monomial::from_exponents(&[1, 0, 0]).unwrap();
        let b = Monomial::from_exponents(&[0, 5, 7]).unwrap();
        let c = Monomial::from_exponents(&[0, 5, 8]).unwrap();
        assert!(a > b && c > b && a > c);
    }

    #[test]
    fn mul_and_div_detect_overflow() {
        let a = Monomial::from_exponents(&[MAX_EXPONENT, 1]).unwrap();
        let b = Monomial::from_exponents(&[1, 0]).unwrap();
        assert!(a.checked_mul(b).is_none());
        let c = Monomial::from_exponents(&[0, 1]).unwrap();
        assert_eq!(a.checked_mul(c).unwrap().exponents(2), [MAX_EXPONENT, 2]);
        let d = Monomial::from_exponents(&[0, 2]).unwrap();
        assert!(a.checked_div(d).is_none());
        assert_eq!(a.checked_div(c).unwrap().exponents(2), [MAX_EXPONENT, 0]);
        assert!(c.divides(a) && !d.divides(a));
    }

    #[test]
    fn last_field_overflow() {
        let a = Monomial::var_power(7, MAX_EXPONENT).unwrap();
        let b = Monomial::var_power(7, 1).unwrap();
        assert!(a.checked_mul(b).is_none());
        let top = Monomial::var_power(0, MAX_EXPONENT).unwrap();
        assert!(top.checked_mul(Monomial::var_power(0, 1).unwrap()).is_none());
    }
}
