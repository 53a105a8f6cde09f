//! Sparse multivariate integer polynomials.
//!
//! Monomials are packed into a single `u128` (at most eight variables, 16 bits
//! per exponent) with the first variable most significant, so the natural map
//! order is the lexicographic order used for leading terms.

mod monomial;
mod polynomial;
mod serde_impl;
mod vars;
mod vector;

pub use monomial::{Monomial, MAX_EXPONENT, MAX_VARS};
pub use polynomial::IntPolynomial;
pub(crate) use polynomial::pow_mod;
pub use vars::Vars;
pub use vector::PolyVector;

use alloc::vec::Vec;
use num_bigint::BigInt;

use crate::Result;

/// The linear form `vars[a] + cb * vars[b]`.
pub fn linear(vars: &Vars, a: usize, b: usize, cb: i64) -> Result<IntPolynomial> {
    let mut p = IntPolynomial::var(vars, a)?;
    p.add_term(Monomial::var_power(b, 1)?, BigInt::from(cb));
    Ok(p)
}

/// Product of `factors[i]^exps[i]`.
pub fn product_of_powers(vars: &Vars, factors: &[IntPolynomial], exps: &[u64]) -> Result<IntPolynomial> {
    let mut acc = IntPolynomial::one(vars);
    for (f, &e) in factors.iter().zip(exps) {
        if e > 0 {
            acc = acc.try_mul(&f.pow(e)?)?;
        }
    }
    Ok(acc)
}

/// Elementary symmetric polynomials `e_0, ..., e_n` in the first `n`
/// variables of `vars`.
pub fn elementary_symmetric(vars: &Vars, n: usize) -> Result<Vec<IntPolynomial>> {
    let mut e = alloc::vec![IntPolynomial::one(vars)];
    for i in 0..n {
        let zi = IntPolynomial::var(vars, i)?;
        let mut next = e.clone();
        next.push(IntPolynomial::zero(vars));
        for k in 1..=i + 1 {
            next[k] += &(&e[k - 1] * &zi);
        }
        e = next;
    }
    Ok(e)
}
