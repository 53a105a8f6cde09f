//! Quasi-constants modulo `p^r` and elements of the solution module.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_bigint::BigInt;
use serde::Serialize;

use crate::binomial::{vp, vp_u64};
use crate::kz::KZInstance;
use crate::poly::{IntPolynomial, PolyVector};
use crate::solutions::generator;
use crate::{KzError, Result};

fn p_pow(p: u64, r: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), r as usize)
}

/// Every partial derivative of `f` has all coefficients divisible by `p^r`.
pub fn is_quasi_constant(f: &IntPolynomial, p: u64, r: u32) -> bool {
    let m = p_pow(p, r);
    (0..f.nvars()).all(|i| f.diff(i).map(|d| d.is_divisible_by(&m)).unwrap_or(false))
}

/// Membership in the span of `p^{r-t} z^d` with every `d_i` divisible by
/// `p^t`, checked term by term.
pub fn is_quasi_constant_by_monomials(f: &IntPolynomial, p: u64, r: u32) -> bool {
    let n = f.nvars();
    f.terms().all(|(mono, c)| {
        let t = mono
            .exponents(n)
            .into_iter()
            .filter(|&e| e > 0)
            .map(|e| vp_u64(e as u64, p).unwrap_or(0))
            .min()
            .map_or(r, |v| v.min(r));
        vp(c, p).is_none_or(|v| v >= r - t)
    })
}

/// One coefficient `c_{r,l}` of a module element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleCoefficient {
    pub r: u32,
    pub l: u64,
    pub c: IntPolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleElement {
    pub terms: Vec<ModuleCoefficient>,
    /// `sum c_{r,l} p^{s-r} I^{[l p^r - 1]}_{p^r}` reduced into `[0, p^s)`.
    pub vector: PolyVector,
    /// Largest level with a coefficient that does not vanish modulo `p^r`.
    pub filtration: u32,
}

pub fn module_element(inst: &KZInstance, terms: Vec<ModuleCoefficient>) -> Result<ModuleElement> {
    let (p, s) = (inst.p(), inst.s());
    let vars = inst.z_vars();
    let modulus = inst.ctx.modulus_big();
    let mut vector = PolyVector::zeros(&vars, inst.n);
    let mut filtration = 0;
    for t in &terms {
        if t.r == 0 || t.r > s {
            return Err(KzError::InvalidParameter(format!("level {} must lie in 1..={s}", t.r)));
        }
        if t.c.vars() != &vars {
            return Err(KzError::VariableMismatch { left: t.c.vars().to_string(), right: vars.to_string() });
        }
        if !is_quasi_constant(&t.c, p, t.r) {
            return Err(KzError::NotQuasiConstant { r: t.r, l: t.l });
        }
        if !t.c.is_divisible_by(&p_pow(p, t.r)) {
            filtration = filtration.max(t.r);
        }
        let g = generator(inst, t.r, t.l)?;
        let scaled = g.vector.mul_poly(&t.c.scale(&p_pow(p, s - t.r)))?;
        vector.add_assign(&scaled)?;
    }
    Ok(ModuleElement { terms, vector: vector.reduce_mod(modulus), filtration })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kz::verify_solution;
    use crate::poly::{Monomial, Vars};

    #[test]
    fn documented_quasi_constants() {
        let vars = Vars::z(2).unwrap();
        let z1 = IntPolynomial::var(&vars, 0).unwrap();
        let z2 = IntPolynomial::var(&vars, 1).unwrap();
        let f = (&z1 + &z2).pow(25).unwrap();
        assert!(is_quasi_constant(&f, 5, 2) && is_quasi_constant_by_monomials(&f, 5, 2));
        let g = IntPolynomial::monomial(&vars, Monomial::from_exponents(&[5, 25]).unwrap(), 5);
        assert!(is_quasi_constant(&g, 5, 2) && is_quasi_constant_by_monomials(&g, 5, 2));
        assert!(!is_quasi_constant(&z1, 5, 1) && !is_quasi_constant_by_monomials(&z1, 5, 1));
        assert!(is_quasi_constant(&IntPolynomial::constant(&vars, 7), 5, 3));
    }

    #[test]
    fn module_elements_solve() {
        let inst = KZInstance::new(5, 2, 3).unwrap();
        let vars = inst.z_vars();
        let one = IntPolynomial::one(&vars);
        let z1_25 = IntPolynomial::monomial(&vars, Monomial::var_power(0, 25).unwrap(), 1);
        for terms in [
            alloc::vec![ModuleCoefficient { r: 2, l: 1, c: one.clone() }],
            alloc::vec![ModuleCoefficient { r: 1, l: 1, c: one.clone() }],
            alloc::vec![ModuleCoefficient { r: 2, l: 1, c: z1_25 }],
        ] {
            let e = module_element(&inst, terms).unwrap();
            assert!(verify_solution(&e.vector, &inst).unwrap().pass);
        }
        let bad = module_element(&inst, alloc::vec![ModuleCoefficient { r: 2, l: 1, c: IntPolynomial::var(&vars, 0).unwrap() }]);
        assert_eq!(bad.unwrap_err(), KzError::NotQuasiConstant { r: 2, l: 1 });
    }
}
