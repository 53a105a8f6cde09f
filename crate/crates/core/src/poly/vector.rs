use alloc::vec::Vec;

use num_bigint::BigInt;

use super::{IntPolynomial, Monomial, Vars};
use crate::{KzError, Result};

/// Fixed-length vector of polynomials over one variable list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVector {
    vars: Vars,
    entries: Vec<IntPolynomial>,
}

impl PolyVector {
    pub fn new(vars: &Vars, entries: Vec<IntPolynomial>) -> Result<Self> {
        for e in &entries {
            vars.ensure_same(e.vars())?;
        }
        Ok(PolyVector { vars: vars.clone(), entries })
    }

    pub fn zeros(vars: &Vars, n: usize) -> Self {
        PolyVector { vars: vars.clone(), entries: (0..n).map(|_| IntPolynomial::zero(vars)).collect() }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[IntPolynomial] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<IntPolynomial> {
        self.entries
    }

    pub fn get(&self, j: usize) -> &IntPolynomial {
        &self.entries[j]
    }

    pub fn get_mut(&mut self, j: usize) -> &mut IntPolynomial {
        &mut self.entries[j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(IntPolynomial::is_zero)
    }

    pub fn term_count(&self) -> usize {
        self.entries.iter().map(IntPolynomial::len).sum()
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        self.vars.ensure_same(&other.vars)?;
        if self.len() != other.len() {
            return Err(KzError::SizeMismatch { expected: self.len(), got: other.len() });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(PolyVector { vars: self.vars.clone(), entries })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(PolyVector { vars: self.vars.clone(), entries })
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        self.check_shape(other)?;
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b;
        }
        Ok(())
    }

    /// Every entry multiplied by the polynomial `f`.
    pub fn mul_poly(&self, f: &IntPolynomial) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.try_mul(f)).collect::<Result<_>>()?;
        PolyVector::new(&self.vars, entries)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        self.map(|e| e.scale(c))
    }

    pub fn reduce_mod(&self, m: &BigInt) -> Self {
        self.map(|e| e.reduce_mod(m))
    }

    pub fn is_divisible_by(&self, m: &BigInt) -> bool {
        self.entries.iter().all(|e| e.is_divisible_by(m))
    }

    pub fn map<F: FnMut(&IntPolynomial) -> IntPolynomial>(&self, f: F) -> Self {
        let entries: Vec<_> = self.entries.iter().map(f).collect();
        let vars = entries.first().map(|e| e.vars().clone()).unwrap_or_else(|| self.vars.clone());
        PolyVector { vars, entries }
    }

    pub fn try_map<F: FnMut(&IntPolynomial) -> Result<IntPolynomial>>(&self, f: F) -> Result<Self> {
        let entries: Vec<_> = self.entries.iter().map(f).collect::<Result<_>>()?;
        let vars = entries.first().map(|e| e.vars().clone()).unwrap_or_else(|| self.vars.clone());
        PolyVector::new(&vars, entries)
    }

    pub fn diff(&self, var: usize) -> Result<Self> {
        self.try_map(|e| e.diff(var))
    }

    /// The vector of coefficients of `vars[var]^k`, over the remaining
    /// variables.
    pub fn coefficient_in(&self, var: usize, k: i64) -> Result<Self> {
        let vars = self.vars.without(var)?;
        let entries = self.entries.iter().map(|e| e.coefficient_in(var, k)).collect::<Result<_>>()?;
        PolyVector::new(&vars, entries)
    }

    pub fn sum_entries(&self) -> IntPolynomial {
        let mut acc = IntPolynomial::zero(&self.vars);
        for e in &self.entries {
            acc += e;
        }
        acc
    }

    /// Largest monomial occurring in any entry, with the vector of its
    /// coefficients.
    pub fn leading_term(&self) -> Result<(Monomial, Vec<BigInt>)> {
        let m = self
            .entries
            .iter()
            .filter_map(|e| e.leading_term().ok().map(|(m, _)| m))
            .max()
            .ok_or(KzError::ZeroPolynomial)?;
        Ok((m, self.coefficients_at(&m)))
    }

    pub fn coefficients_at(&self, m: &Monomial) -> Vec<BigInt> {
        self.entries.iter().map(|e| e.coeff(m)).collect()
    }

    /// All monomials occurring in some entry, increasing.
    pub fn support(&self) -> Vec<Monomial> {
        let mut all: Vec<Monomial> = self.entries.iter().flat_map(|e| e.terms().map(|(m, _)| *m)).collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    pub fn homogeneous_degree(&self) -> Option<u64> {
        let mut d = None;
        for e in &self.entries {
            if e.is_zero() {
                continue;
            }
            let k = e.homogeneous_degree()?;
            if *d.get_or_insert(k) != k {
                return None;
            }
        }
        d
    }

    pub fn eval_mod(&self, point: &[u64], m: u64) -> Result<Vec<u64>> {
        self.entries.iter().map(|e| e.eval_mod(point, m)).collect()
    }
}
