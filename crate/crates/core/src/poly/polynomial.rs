use alloc::collections::btree_map::{self, BTreeMap};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::monomial::{Monomial, MAX_EXPONENT};
use super::vars::Vars;
use crate::{KzError, Result};

/// Sparse multivariate polynomial with arbitrary-precision integer
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    vars: Vars,
    terms: BTreeMap<Monomial, BigInt>,
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            let is_one = *m == Monomial::ONE;
            if !a.is_one() || is_one {
                write!(f, "{a}")?;
            }
            let mut first = a.is_one();
            for (i, name) in self.vars.names().iter().enumerate() {
                let e = m.exponent(i);
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                f.write_str(name)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

fn accumulate(terms: &mut BTreeMap<Monomial, BigInt>, m: Monomial, c: BigInt) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl IntPolynomial {
    pub fn zero(vars: &Vars) -> Self {
        IntPolynomial { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, BigInt::one())
    }

    pub fn constant(vars: &Vars, c: impl Into<BigInt>) -> Self {
        Self::monomial(vars, Monomial::ONE, c)
    }

    pub fn monomial(vars: &Vars, m: Monomial, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(m, c.into());
        p
    }

    /// The variable `vars[index]` as a polynomial.
    pub fn var(vars: &Vars, index: usize) -> Result<Self> {
        vars.check_index(index)?;
        Ok(Self::monomial(vars, Monomial::var_power(index, 1)?, 1))
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// exponent vectors are summed.
    pub fn from_terms<I>(vars: &Vars, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(KzError::SizeMismatch { expected: vars.len(), got: e.len() });
            }
            p.add_term(Monomial::from_exponents(&e)?, c);
        }
        Ok(p)
    }

    pub(crate) fn from_map(vars: &Vars, mut terms: BTreeMap<Monomial, BigInt>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        IntPolynomial { vars: vars.clone(), terms }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        accumulate(&mut self.terms, m, c);
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.vars.ensure_same(&other.vars)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            accumulate(&mut out.terms, *m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.vars.ensure_same(&other.vars)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            accumulate(&mut out.terms, *m, -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.vars.ensure_same(&other.vars)?;
        let (small, large) =
            if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut terms = BTreeMap::new();
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                let m = ma.checked_mul(*mb).ok_or(KzError::ExponentOverflow)?;
                accumulate(&mut terms, m, ca * cb);
            }
        }
        Ok(IntPolynomial { vars: self.vars.clone(), terms })
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, mut k: u64) -> Result<Self> {
        let mut acc = Self::one(&self.vars);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        let terms = self.terms.iter().map(|(m, a)| (*m, a * c)).collect();
        IntPolynomial { vars: self.vars.clone(), terms }
    }

    /// `c * m * self`
    pub fn mul_monomial(&self, m: Monomial, c: &BigInt) -> Result<Self> {
        if c.is_zero() {
            return Ok(Self::zero(&self.vars));
        }
        let mut terms = BTreeMap::new();
        for (k, a) in &self.terms {
            terms.insert(k.checked_mul(m).ok_or(KzError::ExponentOverflow)?, a * c);
        }
        Ok(IntPolynomial { vars: self.vars.clone(), terms })
    }

    /// Partial derivative with respect to `vars[var]`.
    pub fn diff(&self, var: usize) -> Result<Self> {
        self.vars.check_index(var)?;
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            terms.insert(m.with_exponent(var, e - 1)?, c * BigInt::from(e));
        }
        Ok(IntPolynomial { vars: self.vars.clone(), terms })
    }

    /// Coefficients reduced into `[0, m)`; vanishing terms dropped.
    pub fn reduce_mod(&self, m: &BigInt) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            let r = c.mod_floor(m);
            if !r.is_zero() {
                terms.insert(*k, r);
            }
        }
        IntPolynomial { vars: self.vars.clone(), terms }
    }

    /// True when every coefficient is divisible by `m`.
    pub fn is_divisible_by(&self, m: &BigInt) -> bool {
        self.terms.values().all(|c| c.is_multiple_of(m))
    }

    /// Exact division of all coefficients by `m`.
    pub fn div_exact(&self, m: &BigInt) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            let (q, r) = c.div_rem(m);
            if !r.is_zero() {
                return Err(KzError::InexactDivision);
            }
            terms.insert(*k, q);
        }
        Ok(IntPolynomial { vars: self.vars.clone(), terms })
    }

    /// Largest monomial in lex order with its coefficient.
    pub fn leading_term(&self) -> Result<(Monomial, &BigInt)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c)).ok_or(KzError::ZeroPolynomial)
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exponent(var)).max()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// The common total degree of all terms, if the polynomial is
    /// homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        let mut it = self.terms.keys().map(|m| m.total_degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous_of_degree(&self, d: u64) -> bool {
        self.terms.keys().all(|m| m.total_degree() == d)
    }

    /// Coefficient of `vars[var]^k`, as a polynomial in the remaining
    /// variables. Negative or absent powers give zero.
    pub fn coefficient_in(&self, var: usize, k: i64) -> Result<Self> {
        let vars = self.vars.without(var)?;
        let mut out = Self::zero(&vars);
        if k < 0 || k > MAX_EXPONENT as i64 {
            return Ok(out);
        }
        for (m, c) in &self.terms {
            if m.exponent(var) as i64 != k {
                continue;
            }
            let e: Vec<u32> =
                m.exponents(self.nvars()).into_iter().enumerate().filter(|(i, _)| *i != var).map(|(_, e)| e).collect();
            out.terms.insert(Monomial::from_exponents(&e)?, c.clone());
        }
        Ok(out)
    }

    /// Groups terms by the exponent of `vars[var]`; the inverse of
    /// [`coefficient_in`](Self::coefficient_in) summed over all powers.
    pub fn split_by_var(&self, var: usize) -> Result<BTreeMap<u32, Self>> {
        let vars = self.vars.without(var)?;
        let mut out: BTreeMap<u32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.exponent(var);
            let e: Vec<u32> =
                m.exponents(self.nvars()).into_iter().enumerate().filter(|(i, _)| *i != var).map(|(_, e)| e).collect();
            out.entry(k)
                .or_insert_with(|| Self::zero(&vars))
                .terms
                .insert(Monomial::from_exponents(&e)?, c.clone());
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over `target`, sending variable `i` to
    /// variable `map[i]` of the target list.
    pub fn embed(&self, target: &Vars, map: &[usize]) -> Result<Self> {
        if map.len() != self.nvars() {
            return Err(KzError::SizeMismatch { expected: self.nvars(), got: map.len() });
        }
        for &t in map {
            target.check_index(t)?;
        }
        self.map_monomials(target, |m| {
            let mut out = Monomial::ONE;
            for (i, &t) in map.iter().enumerate() {
                let e = m.exponent(i);
                if e > 0 {
                    out = out.checked_mul(Monomial::var_power(t, e)?).ok_or(KzError::ExponentOverflow)?;
                }
            }
            Ok(out)
        })
    }

    /// Applies a monomial-to-monomial map, collecting colliding terms.
    pub fn map_monomials<F>(&self, target: &Vars, mut f: F) -> Result<Self>
    where
        F: FnMut(Monomial) -> Result<Monomial>,
    {
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            accumulate(&mut out.terms, f(*m)?, c.clone());
        }
        Ok(out)
    }

    /// `f(z_1^q, ..., z_n^q)`: every exponent multiplied by `q`.
    pub fn scale_exponents(&self, q: u32) -> Result<Self> {
        let n = self.nvars();
        self.map_monomials(&self.vars, |m| {
            let e: Vec<u32> = m
                .exponents(n)
                .into_iter()
                .map(|e| e.checked_mul(q).ok_or(KzError::ExponentOverflow))
                .collect::<Result<_>>()?;
            Monomial::from_exponents(&e)
        })
    }

    /// Replaces `vars[var]` by `value`, a polynomial over the same ring.
    pub fn substitute(&self, var: usize, value: &Self) -> Result<Self> {
        self.vars.ensure_same(&value.vars)?;
        self.vars.check_index(var)?;
        let mut by_power: BTreeMap<u32, BTreeMap<Monomial, BigInt>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            by_power.entry(e).or_default().insert(m.with_exponent(var, 0)?, c.clone());
        }
        let mut out = Self::zero(&self.vars);
        let mut power = Self::one(&self.vars);
        let mut at = 0u32;
        for (e, rest) in by_power {
            while at < e {
                power = power.try_mul(value)?;
                at += 1;
            }
            let rest = IntPolynomial { vars: self.vars.clone(), terms: rest };
            out += &rest.try_mul(&power)?;
        }
        Ok(out)
    }

    /// Value at an integer point modulo `m`.
    pub fn eval_mod(&self, point: &[u64], m: u64) -> Result<u64> {
        if point.len() != self.nvars() {
            return Err(KzError::SizeMismatch { expected: self.nvars(), got: point.len() });
        }
        let mb = BigInt::from(m);
        let mut acc: u128 = 0;
        for (mono, c) in &self.terms {
            let mut t = c.mod_floor(&mb).to_u64().unwrap_or(0) as u128;
            for (i, &x) in point.iter().enumerate() {
                t = t * pow_mod(x % m, mono.exponent(i) as u64, m) as u128 % m as u128;
            }
            acc = (acc + t) % m as u128;
        }
        Ok(acc as u64)
    }

    /// Keeps only the terms accepted by the predicate.
    pub fn filter_terms<F>(&self, mut keep: F) -> Self
    where
        F: FnMut(&Monomial, &BigInt) -> bool,
    {
        let terms = self.terms.iter().filter(|(m, c)| keep(m, c)).map(|(m, c)| (*m, c.clone())).collect();
        IntPolynomial { vars: self.vars.clone(), terms }
    }
}

pub(crate) fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc: u128 = 1 % m128;
    let mut base = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    acc as u64
}

macro_rules! binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&IntPolynomial> for &IntPolynomial {
            type Output = IntPolynomial;
            /// Panics when the variable lists differ; use the `try_` form to
            /// get an error instead.
            fn $method(self, rhs: &IntPolynomial) -> IntPolynomial {
                self.$inner(rhs).expect("polynomials over different variable lists")
            }
        }
        impl $tr<IntPolynomial> for IntPolynomial {
            type Output = IntPolynomial;
            fn $method(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&IntPolynomial> for IntPolynomial {
            type Output = IntPolynomial;
            fn $method(self, rhs: &IntPolynomial) -> IntPolynomial {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl AddAssign<&IntPolynomial> for IntPolynomial {
    fn add_assign(&mut self, rhs: &IntPolynomial) {
        self.vars.ensure_same(&rhs.vars).expect("polynomials over different variable lists");
        for (m, c) in &rhs.terms {
            accumulate(&mut self.terms, *m, c.clone());
        }
    }
}

impl SubAssign<&IntPolynomial> for IntPolynomial {
    fn sub_assign(&mut self, rhs: &IntPolynomial) {
        self.vars.ensure_same(&rhs.vars).expect("polynomials over different variable lists");
        for (m, c) in &rhs.terms {
            accumulate(&mut self.terms, *m, -c);
        }
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        let terms = self.terms.iter().map(|(m, c)| (*m, -c)).collect();
        IntPolynomial { vars: self.vars.clone(), terms }
    }
}

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(mut self) -> IntPolynomial {
        for c in self.terms.values_mut() {
            *c = -core::mem::take(c);
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn xz3() -> (Vars, IntPolynomial, [IntPolynomial; 3]) {
        let v = Vars::xz(3).unwrap();
        let x = IntPolynomial::var(&v, 0).unwrap();
        let z = [1, 2, 3].map(|i| IntPolynomial::var(&v, i).unwrap());
        (v, x, z)
    }

    #[test]
    fn square_of_binomial() {
        let (v, x, z) = xz3();
        let f = &x - &z[0];
        let sq = &f * &f;
        let expected = IntPolynomial::from_terms(
            &v,
            [
                (alloc::vec![2, 0, 0, 0], BigInt::from(1)),
                (alloc::vec![1, 1, 0, 0], BigInt::from(-2)),
                (alloc::vec![0, 2, 0, 0], BigInt::from(1)),
            ],
        )
        .unwrap();
        assert_eq!(sq, expected);
        assert_eq!(f.pow(2).unwrap(), expected);
        assert_eq!(&f * &IntPolynomial::one(&v), f);
        assert_eq!(f.pow(0).unwrap(), IntPolynomial::one(&v));
    }

    #[test]
    fn fourth_power_middle_coefficient() {
        let (_, x, z) = xz3();
        let f = (&x - &z[0]).pow(4).unwrap();
        assert_eq!(f.coeff(&Monomial::from_exponents(&[2, 2]).unwrap()), BigInt::from(6));
    }

    #[test]
    fn derivative_examples() {
        let v = Vars::z(2).unwrap();
        let z1 = IntPolynomial::var(&v, 0).unwrap();
        let z2 = IntPolynomial::var(&v, 1).unwrap();
        let f = &(&z1 * &z1) * &z2;
        assert_eq!(f.diff(0).unwrap(), (&z1 * &z2).scale(&BigInt::from(2)));
        assert!(z1.pow(25).unwrap().diff(1).unwrap().is_zero());
        let g = (&z1 + &z2).pow(25).unwrap().diff(0).unwrap();
        assert!(g.is_divisible_by(&BigInt::from(25)));
        assert!(f.diff(2).is_err());
    }

    #[test]
    fn mismatched_vars_are_rejected() {
        let a = IntPolynomial::one(&Vars::z(2).unwrap());
        let b = IntPolynomial::one(&Vars::z(3).unwrap());
        assert!(matches!(a.try_mul(&b), Err(KzError::VariableMismatch { .. })));
    }

    #[test]
    fn reduce_and_leading_term() {
        let v = Vars::z(2).unwrap();
        let z1 = IntPolynomial::var(&v, 0).unwrap();
        let z2 = IntPolynomial::var(&v, 1).unwrap();
        assert!(z1.scale(&BigInt::from(5)).reduce_mod(&BigInt::from(5)).is_zero());
        assert_eq!((-&z1).reduce_mod(&BigInt::from(25)), z1.scale(&BigInt::from(24)));
        let sum = &z1 + &z2;
        let (m, c) = sum.leading_term().unwrap();
        assert_eq!((m, c.clone()), (Monomial::var_power(0, 1).unwrap(), BigInt::one()));
        let f = (&z1 * &z2.pow(2).unwrap()).scale(&BigInt::from(3)) + (&z1 * &z2).scale(&BigInt::from(5));
        let (m, c) = f.leading_term().unwrap();
        assert_eq!(m.exponents(2), [1, 2]);
        assert_eq!(*c, BigInt::from(3));
        assert_eq!(IntPolynomial::zero(&v).leading_term().unwrap_err(), KzError::ZeroPolynomial);
    }

    #[test]
    fn substitution_and_coefficients() {
        let (v, x, z) = xz3();
        let f = (&x - &z[0]) * (&x - &z[1]).pow(2).unwrap() * (&x - &z[2]).pow(2).unwrap();
        let c4 = f.coefficient_in(0, 4).unwrap();
        let zv = Vars::z(3).unwrap();
        let expected = IntPolynomial::from_terms(
            &zv,
            [
                (alloc::vec![1, 0, 0], BigInt::from(-1)),
                (alloc::vec![0, 1, 0], BigInt::from(-2)),
                (alloc::vec![0, 0, 1], BigInt::from(-2)),
            ],
        )
        .unwrap();
        assert_eq!(c4, expected);
        assert!(f.coefficient_in(0, -1).unwrap().is_zero());
        // x -> z1 kills the whole product
        assert!(f.substitute(0, &z[0]).unwrap().is_zero());
        let g = (&x + &z[1]).substitute(0, &(&x - &z[1])).unwrap();
        assert_eq!(g, x);
        let _ = v;
    }

    #[test]
    fn display_is_readable() {
        let v = Vars::z(2).unwrap();
        let z1 = IntPolynomial::var(&v, 0).unwrap();
        let z2 = IntPolynomial::var(&v, 1).unwrap();
        let f = &z1.pow(2).unwrap() - &(&z1 * &z2).scale(&BigInt::from(3)) + IntPolynomial::constant(&v, 7);
        assert_eq!(f.to_string(), "z1^2 - 3*z1*z2 + 7");
    }

    #[test]
    fn eval_and_twist() {
        let v = Vars::z(3).unwrap();
        let z: Vec<_> = (0..3).map(|i| IntPolynomial::var(&v, i).unwrap()).collect();
        let e1 = &(&z[0] + &z[1]) + &z[2];
        let e2 = &(&(&z[0] * &z[1]) + &(&z[0] * &z[2])) + &(&z[1] * &z[2]);
        let c = &(&e1 * &e1) + &e2.scale(&BigInt::from(2));
        assert_eq!(c.eval_mod(&[1, 2, 3], 5).unwrap(), 3);
        let tw = e1.scale_exponents(5).unwrap();
        assert_eq!(tw, &(&z[0].pow(5).unwrap() + &z[1].pow(5).unwrap()) + &z[2].pow(5).unwrap());
    }
}
