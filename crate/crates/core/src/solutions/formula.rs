//! Closed formulas for the coefficients and the leading term of
//! `I^{[l p^s - 1]}` with the minimal exponent vector.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::binomial::{binom, lucas_mod_p};
use crate::kz::KZInstance;
use crate::poly::{IntPolynomial, Monomial, PolyVector};
use crate::{KzError, Result};

fn sign(delta: i64) -> BigInt {
    BigInt::from(if delta % 2 == 0 { 1 } else { -1 })
}

/// Coefficient vector of `z^d` in `I^{[l p^s - 1]}`: component `j` is
/// `(-1)^delta binom(M - 1, d_j) prod_{i != j} binom(M, d_i)`, which is
/// `binom(M, d_j)(1 - d_j / M)` kept in the integers.
pub fn coeff_formula(inst: &KZInstance, l: u64, d: &[u32]) -> Result<Vec<BigInt>> {
    let n = inst.n;
    if d.len() != n {
        return Err(KzError::SizeMismatch { expected: n, got: d.len() });
    }
    let delta = inst.delta(l);
    let total: i64 = d.iter().map(|&x| x as i64).sum();
    if total != delta {
        return Err(KzError::InvalidParameter(format!("multi-index degree {total} differs from delta = {delta}")));
    }
    let m = inst.ctx.half;
    let full: Vec<BigInt> = d.iter().map(|&di| binom(m, di as u64)).collect();
    let sgn = sign(delta);
    Ok((0..n)
        .map(|j| {
            let mut c = &sgn * binom(m - 1, d[j] as u64);
            for (i, b) in full.iter().enumerate() {
                if i != j {
                    c *= b;
                }
            }
            c
        })
        .collect())
}

/// The whole solution vector assembled from [`coeff_formula`] over every
/// multi-index of degree `delta` with entries at most `M`.
pub fn formula_vector(inst: &KZInstance, l: u64) -> Result<PolyVector> {
    let n = inst.n;
    let vars = inst.z_vars();
    let mut entries = vec![IntPolynomial::zero(&vars); n];
    let delta = inst.delta(l);
    if delta < 0 || l == 0 {
        return PolyVector::new(&vars, entries);
    }
    let m = inst.ctx.half as u32;
    let mut d = vec![0u32; n];
    fn rec(
        inst: &KZInstance,
        l: u64,
        m: u32,
        at: usize,
        left: u32,
        d: &mut Vec<u32>,
        entries: &mut [IntPolynomial],
    ) -> Result<()> {
        let n = d.len();
        if at == n - 1 {
            if left > m {
                return Ok(());
            }
            d[at] = left;
            let c = coeff_formula(inst, l, d)?;
            let mono = Monomial::from_exponents(d)?;
            for (e, cj) in entries.iter_mut().zip(c) {
                e.add_term(mono, cj);
            }
            return Ok(());
        }
        let rest = (n - at - 1) as u32 * m;
        for x in left.saturating_sub(rest)..=left.min(m) {
            d[at] = x;
            rec(inst, l, m, at + 1, left - x, d, entries)?;
        }
        Ok(())
    }
    rec(inst, l, m, 0, delta as u32, &mut d, &mut entries)?;
    PolyVector::new(&vars, entries)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeadingTerm {
    pub monomial: Vec<u32>,
    #[serde(serialize_with = "crate::decimal::vec")]
    pub vector: Vec<BigInt>,
    /// `binom(M, l)` and `binom(M - 1, l - 1)` are units modulo `p`.
    pub units_ok: bool,
}

/// Lexicographic leading term of `I^{[l p^s - 1]}`: the monomial
/// `z_1^M ... z_{2g-2l}^M z_{2g-2l+1}^{M-l}` with vector
/// `(-1)^delta (0, ..., 0, binom(M-1, l-1), binom(M, l), ..., binom(M, l))`.
pub fn leading_term_formula(inst: &KZInstance, l: u64) -> Result<LeadingTerm> {
    let g = inst.g as u64;
    if l == 0 || l > g {
        return Err(KzError::InvalidParameter(format!("l = {l} must lie in 1..={g}")));
    }
    let m = inst.ctx.half;
    let zeros = (2 * g - 2 * l) as usize;
    let mut monomial = vec![m as u32; zeros];
    monomial.push((m - l) as u32);
    monomial.resize(inst.n, 0);
    let sgn = sign(inst.delta(l));
    let mut vector = vec![BigInt::zero(); zeros];
    vector.push(&sgn * binom(m - 1, l - 1));
    vector.extend(std::iter::repeat_n(&sgn * binom(m, l), 2 * l as usize));
    let p = inst.p();
    let units_ok = lucas_mod_p(m, l, p) != 0 && lucas_mod_p(m - 1, l - 1, p) != 0;
    Ok(LeadingTerm { monomial, vector, units_ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solutions::solution;

    #[test]
    fn documented_coefficients() {
        let inst = KZInstance::new(5, 1, 3).unwrap();
        let c = coeff_formula(&inst, 1, &[1, 0, 0]).unwrap();
        assert_eq!(c, vec![BigInt::from(-1), BigInt::from(-2), BigInt::from(-2)]);
        let lt = leading_term_formula(&inst, 1).unwrap();
        assert_eq!(lt.monomial, vec![1, 0, 0]);
        assert_eq!(lt.vector, c);
        assert!(lt.units_ok);
        assert!(coeff_formula(&inst, 1, &[1, 1, 0]).is_err());
    }

    #[test]
    fn formula_matches_extraction_small() {
        for (p, s, n) in [(5, 1, 3), (5, 2, 3), (5, 1, 5), (7, 1, 5)] {
            let inst = KZInstance::new(p, s, n).unwrap();
            for l in 1..=inst.g as u64 {
                let rec = solution(&inst, l).unwrap();
                assert_eq!(formula_vector(&inst, l).unwrap(), rec.vector);
                let (mono, vec) = rec.vector.leading_term().unwrap();
                let lt = leading_term_formula(&inst, l).unwrap();
                assert_eq!(mono.exponents(n), lt.monomial);
                assert_eq!(vec, lt.vector);
            }
        }
    }

    #[test]
    fn n5_l2_leading_monomial() {
        let inst = KZInstance::new(5, 1, 5).unwrap();
        let lt = leading_term_formula(&inst, 2).unwrap();
        // No full-power factors; z_1^{M - 2} = 1.
        assert_eq!(lt.monomial, vec![0, 0, 0, 0, 0]);
        assert_eq!(lt.vector, vec![BigInt::from(1); 5]);
    }
}
