//! Raising one exponent by `p^s`: `Phi(M + p^s e_j) = (x - z_j)^{p^s} Phi(M)`,
//! read coefficientwise in `x`.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::binomial::{binom, binom_valuation_ps, vp_u64, ValuationCheck};
use crate::kz::KZInstance;
use crate::poly::{IntPolynomial, Monomial, PolyVector};
use crate::solutions::{coefficient_vector, is_quasi_constant, MVector};
use crate::{KzError, Result};

/// One summand `(-1)^{p^s-a} binom(p^s, a) z_j^{p^s-a} P^{K-a}(M)` with
/// `K = l p^r - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftTerm {
    pub a: u64,
    /// `K - a`, the power of `x` the summand reads off.
    pub index: u64,
    /// Exponent of `p` in `binom(p^s, a)` against `s - v_p(a)`; absent for `a = 0`.
    pub binom_valuation: Option<ValuationCheck>,
    /// `u = min(r, v_p(K - a + 1))`: the summand is `d p^{s-u}` times the
    /// level-`u` vector with index `(K - a + 1)/p^u`.
    pub level: u32,
    pub generator_index: u64,
    /// `d` is an integer polynomial and a quasi-constant modulo `p^u`.
    pub coefficient_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftReport {
    pub mvec: Vec<u64>,
    pub shifted: Vec<u64>,
    pub j: usize,
    pub l: u64,
    pub r: u32,
    pub identity_holds: bool,
    pub terms: Vec<ShiftTerm>,
    pub pass: bool,
}

/// Checks `P^{K}(M') = sum_a (-1)^{p^s-a} binom(p^s, a) z_j^{p^s-a} P^{K-a}(M)`
/// exactly, for `M' = M + p^s e_j` (`j` is 1-based), and classifies each
/// summand by the level of the generator it contributes to.
pub fn verify_shift_relation(inst: &KZInstance, mvec: &MVector, j: usize, l: u64, r: u32) -> Result<ShiftReport> {
    let (n, p, s) = (inst.n, inst.p(), inst.s());
    if j == 0 || j > n {
        return Err(KzError::InvalidParameter(format!("slot j = {j} must lie in 1..={n}")));
    }
    if r == 0 || r > s || l == 0 {
        return Err(KzError::InvalidParameter(format!("need l >= 1 and 1 <= r <= {s}")));
    }
    let ps = inst.ctx.modulus;
    let mut shifted = mvec.entries().to_vec();
    shifted[j - 1] += ps;
    let k = l * p.pow(r) - 1;
    let lhs = coefficient_vector(inst, &shifted, k as i64)?;
    let vars = inst.z_vars();
    let mut rhs = PolyVector::zeros(&vars, n);
    let mut terms = Vec::new();
    for a in 0..=ps.min(k) {
        let kappa = binom(ps, a);
        let kappa = if (ps - a) % 2 == 1 { -kappa } else { kappa };
        let mono = Monomial::var_power(j - 1, (ps - a) as u32)?;
        let part = coefficient_vector(inst, mvec.entries(), (k - a) as i64)?;
        if part.is_zero() {
            continue;
        }
        rhs.add_assign(&part.map(|e| e.mul_monomial(mono, &kappa).expect("exponents fit")))?;

        let index = k - a;
        let level = r.min(vp_u64(index + 1, p).unwrap_or(r));
        let generator_index = (index + 1) / p.pow(level);
        let drop = num_traits::pow(BigInt::from(p), (r - level) as usize);
        let (q, rem) = kappa.div_rem(&drop);
        let coefficient_ok = rem == BigInt::from(0)
            && is_quasi_constant(&IntPolynomial::monomial(&vars, mono, q), p, level);
        let binom_valuation = if a == 0 { None } else { Some(binom_valuation_ps(p, s, a)?) };
        terms.push(ShiftTerm { a, index, binom_valuation, level, generator_index, coefficient_ok });
    }
    let identity_holds = lhs == rhs;
    let pass = identity_holds && terms.iter().all(|t| t.coefficient_ok && t.binom_valuation.as_ref().is_none_or(|v| v.holds));
    Ok(ShiftReport { mvec: mvec.entries().to_vec(), shifted, j, l, r, identity_holds, terms, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_small() {
        let inst = KZInstance::new(5, 1, 3).unwrap();
        let m = MVector::minimal(&inst.ctx, 3);
        let rep = verify_shift_relation(&inst, &m, 1, 1, 1).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.shifted, alloc::vec![7, 2, 2]);
    }

    #[test]
    fn shift_level_two_lower_generator() {
        let inst = KZInstance::new(5, 2, 3).unwrap();
        let m = MVector::minimal(&inst.ctx, 3);
        let rep = verify_shift_relation(&inst, &m, 2, 1, 1).unwrap();
        assert!(rep.pass, "{rep:?}");
        let rep = verify_shift_relation(&inst, &m, 3, 1, 2).unwrap();
        assert!(rep.pass);
        assert!(rep.terms.iter().any(|t| t.level == 1) && rep.terms.iter().any(|t| t.level == 2));
    }
}
