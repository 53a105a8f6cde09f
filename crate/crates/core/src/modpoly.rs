//! Polynomials with coefficients in `Z / m` for `m < 2^62`, used where only a
//! residue is needed and big-integer arithmetic would dominate the cost.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::poly::{IntPolynomial, Monomial, Vars};
use crate::{KzError, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct ModPoly {
    pub(crate) terms: BTreeMap<Monomial, u64>,
}

#[inline]
pub(crate) fn mulm(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

impl ModPoly {
    pub(crate) fn from_int(p: &IntPolynomial, m: u64) -> Self {
        let mb = BigInt::from(m);
        let terms = p
            .terms()
            .filter_map(|(mono, c)| {
                let r = c.mod_floor(&mb).to_u64().unwrap_or(0);
                (r != 0).then_some((*mono, r))
            })
            .collect();
        ModPoly { terms }
    }

    pub(crate) fn to_int(&self, vars: &Vars) -> IntPolynomial {
        let mut out = IntPolynomial::zero(vars);
        for (mono, c) in &self.terms {
            out.add_term(*mono, BigInt::from(*c));
        }
        out
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add_scaled_term(&mut self, mono: Monomial, c: u64, m: u64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(mono).or_insert(0);
        *e = (*e + c) % m;
        if *e == 0 {
            self.terms.remove(&mono);
        }
    }

    /// `self += scale * a * b`.
    pub(crate) fn add_product(&mut self, a: &ModPoly, b: &ModPoly, scale: u64, m: u64) -> Result<()> {
        if scale.is_multiple_of(m) {
            return Ok(());
        }
        for (ma, ca) in &a.terms {
            let ca = mulm(*ca, scale, m);
            for (mb, cb) in &b.terms {
                let mono = ma.checked_mul(*mb).ok_or(KzError::ExponentOverflow)?;
                self.add_scaled_term(mono, mulm(ca, *cb, m), m);
            }
        }
        Ok(())
    }

    pub(crate) fn mul(&self, other: &ModPoly, m: u64) -> Result<ModPoly> {
        let mut out = ModPoly::default();
        out.add_product(self, other, 1, m)?;
        Ok(out)
    }

    pub(crate) fn diff(&self, var: usize, m: u64) -> ModPoly {
        let mut out = ModPoly::default();
        for (mono, c) in &self.terms {
            let e = mono.exponent(var);
            if e == 0 {
                continue;
            }
            let lowered = mono.with_exponent(var, e - 1).expect("lowering an exponent cannot overflow");
            out.add_scaled_term(lowered, mulm(*c, e as u64 % m, m), m);
        }
        out
    }

    /// `x_a - x_b`.
    pub(crate) fn difference(a: usize, b: usize, m: u64) -> Result<ModPoly> {
        let mut out = ModPoly::default();
        out.add_scaled_term(Monomial::var_power(a, 1)?, 1, m);
        out.add_scaled_term(Monomial::var_power(b, 1)?, m - 1, m);
        Ok(out)
    }

    pub(crate) fn constant(c: u64, m: u64) -> ModPoly {
        let mut out = ModPoly::default();
        out.add_scaled_term(Monomial::ONE, c % m, m);
        out
    }

    pub(crate) fn product(factors: &[ModPoly], m: u64) -> Result<ModPoly> {
        let mut acc = ModPoly::constant(1, m);
        for f in factors {
            acc = acc.mul(f, m)?;
        }
        Ok(acc)
    }

    pub(crate) fn first_term(&self) -> Option<(Monomial, u64)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, *c))
    }
}

pub(crate) fn vector_from_int(entries: &[IntPolynomial], m: u64) -> Vec<ModPoly> {
    entries.iter().map(|e| ModPoly::from_int(e, m)).collect()
}

/// Value at an integer point modulo `m`.
pub(crate) fn eval(poly: &ModPoly, point: &[u64], m: u64) -> u64 {
    let mut acc = 0u64;
    for (mono, c) in &poly.terms {
        let mut t = *c;
        for (i, &x) in point.iter().enumerate() {
            t = mulm(t, crate::poly::pow_mod(x, mono.exponent(i) as u64, m), m);
        }
        acc = (acc + t) % m;
    }
    acc
}
