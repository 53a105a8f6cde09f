//! The polynomial solutions: the master polynomial
//! `Phi(x, z) = prod (x - z_i)^{M_i}`, its partial quotients
//! `P_j = Phi / (x - z_j)` and their coefficients at fixed powers of `x`.

mod formula;
mod independence;
mod membership;
mod quasi;
mod shift;

pub use formula::{coeff_formula, formula_vector, leading_term_formula, LeadingTerm};
pub use independence::{linear_independence_probe, IndependenceReport};
pub use membership::{
    cross_family_relation, shift_relation, Combination, Family, GenKey, MembershipCheck, MembershipReport,
    ModuleCalculus,
};
pub use quasi::{
    is_quasi_constant, is_quasi_constant_by_monomials, module_element, ModuleCoefficient, ModuleElement,
};
pub use shift::{verify_shift_relation, ShiftReport, ShiftTerm};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::binomial::binom;
use crate::kz::KZInstance;
use crate::poly::{self, IntPolynomial, Monomial, PolyVector, Vars};
use crate::{par, KzError, ModulusContext, Result};

/// Exponents `M_1, ..., M_n` of the master polynomial, each congruent to
/// `-1/2` modulo `p^s`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MVector(Vec<u64>);

impl MVector {
    pub fn new(ctx: &ModulusContext, entries: Vec<u64>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|&&e| !ctx.is_admissible_exponent(e)) {
            return Err(KzError::InvalidMVector(format!("{bad} is not congruent to -1/2 mod {}", ctx.modulus)));
        }
        if entries.is_empty() {
            return Err(KzError::InvalidMVector("empty exponent vector".into()));
        }
        Ok(MVector(entries))
    }

    /// The least admissible vector `((p^s - 1)/2, ..., (p^s - 1)/2)`.
    pub fn minimal(ctx: &ModulusContext, n: usize) -> Self {
        MVector(vec![ctx.half; n])
    }

    /// `minimal + p^s k` with each `k_i` drawn from `0..=max_shift`.
    pub fn random<R: Rng>(ctx: &ModulusContext, n: usize, max_shift: u64, rng: &mut R) -> Self {
        MVector((0..n).map(|_| ctx.half + ctx.modulus * rng.gen_range(0..=max_shift)).collect())
    }

    /// Wraps entries already known to be admissible.
    pub(crate) fn from_raw(entries: Vec<u64>) -> Self {
        MVector(entries)
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `prod_i (x - z_i)^{M_i}` over `(x, z_1, ..., z_n)`.
pub fn master_polynomial(inst: &KZInstance, mvec: &MVector) -> Result<IntPolynomial> {
    check_mvec(inst, mvec)?;
    let vars = inst.xz_vars();
    let factors = linear_factors(&vars, inst.n)?;
    poly::product_of_powers(&vars, &factors, mvec.entries())
}

fn linear_factors(vars: &Vars, n: usize) -> Result<Vec<IntPolynomial>> {
    (0..n).map(|i| poly::linear(vars, 0, i + 1, -1)).collect()
}

fn check_mvec(inst: &KZInstance, mvec: &MVector) -> Result<()> {
    if mvec.len() != inst.n {
        return Err(KzError::InvalidMVector(format!("expected {} entries, got {}", inst.n, mvec.len())));
    }
    Ok(())
}

/// Coefficient of `x^k` in `prod_i (x - y_i)^{e_i}` as a polynomial over
/// `vars`, where `y_i` is the variable `roots[i]` or `0` when `None`.
///
/// Each monomial `y^d` of the product comes with the single power
/// `x^{sum e - sum d}`, so only tuples `d` with `sum d = sum e - k` are
/// enumerated.
pub fn product_coefficient(vars: &Vars, roots: &[Option<usize>], exps: &[u64], k: i64) -> Result<IntPolynomial> {
    if roots.len() != exps.len() {
        return Err(KzError::SizeMismatch { expected: roots.len(), got: exps.len() });
    }
    let total: u64 = exps.iter().sum();
    if k < 0 || k as u64 > total {
        return Ok(IntPolynomial::zero(vars));
    }
    let free: Vec<(usize, u64)> = roots.iter().zip(exps).filter_map(|(r, &e)| r.map(|v| (v, e))).collect();
    for (v, _) in &free {
        vars.check_index(*v)?;
    }
    let target = total - k as u64;
    let rows: Vec<Vec<BigInt>> = free.iter().map(|&(_, e)| (0..=e).map(|d| binom(e, d)).collect()).collect();
    // Capacity left in the suffix, for pruning.
    let mut suffix = vec![0u64; free.len() + 1];
    for i in (0..free.len()).rev() {
        suffix[i] = suffix[i + 1] + free[i].1;
    }
    if target > suffix[0] {
        return Ok(IntPolynomial::zero(vars));
    }
    let mut terms = BTreeMap::new();
    let mut d = vec![0u64; free.len()];
    enumerate(&free, &rows, &suffix, 0, target, &mut d, &mut terms)?;
    let out = IntPolynomial::from_map(vars, terms);
    Ok(if target % 2 == 1 { -out } else { out })
}

fn enumerate(
    free: &[(usize, u64)],
    rows: &[Vec<BigInt>],
    suffix: &[u64],
    at: usize,
    left: u64,
    d: &mut Vec<u64>,
    out: &mut BTreeMap<Monomial, BigInt>,
) -> Result<()> {
    if at == free.len() {
        debug_assert_eq!(left, 0);
        let mut mono = Monomial::ONE;
        let mut coeff = BigInt::from(1);
        for (i, &(v, _)) in free.iter().enumerate() {
            if d[i] > 0 {
                let e = u32::try_from(d[i]).map_err(|_| KzError::ExponentOverflow)?;
                mono = mono.checked_mul(Monomial::var_power(v, e)?).ok_or(KzError::ExponentOverflow)?;
            }
            coeff *= &rows[i][d[i] as usize];
        }
        *out.entry(mono).or_insert_with(BigInt::zero) += coeff;
        return Ok(());
    }
    let lo = left.saturating_sub(suffix[at + 1]);
    let hi = left.min(free[at].1);
    for x in lo..=hi {
        d[at] = x;
        enumerate(free, rows, suffix, at + 1, left - x, d, out)?;
    }
    d[at] = 0;
    Ok(())
}

/// `P^k(z, M)`: the vector of coefficients of `x^k` in `Phi / (x - z_j)`,
/// `j = 1..n`, over `z_1, ..., z_n`.
pub fn coefficient_vector(inst: &KZInstance, mvec: &[u64], k: i64) -> Result<PolyVector> {
    let n = inst.n;
    if mvec.len() != n || mvec.contains(&0) {
        return Err(KzError::InvalidMVector(format!("need {n} positive entries")));
    }
    let vars = inst.z_vars();
    let roots: Vec<Option<usize>> = (0..n).map(Some).collect();
    let entries = par::map_indexed(n, |j| {
        let mut e = mvec.to_vec();
        e[j] -= 1;
        product_coefficient(&vars, &roots, &e, k)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    PolyVector::new(&vars, entries)
}

/// The same vector read off the fully expanded `Phi / (x - z_j)`; slow, kept
/// as an independent oracle.
pub fn coefficient_vector_by_expansion(inst: &KZInstance, mvec: &[u64], k: i64) -> Result<PolyVector> {
    let n = inst.n;
    let xz = inst.xz_vars();
    let factors = linear_factors(&xz, n)?;
    let entries = par::map_indexed(n, |j| {
        let mut e = mvec.to_vec();
        e[j] -= 1;
        poly::product_of_powers(&xz, &factors, &e)?.coefficient_in(0, k)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    // coefficient_in drops x, which leaves exactly z_1..z_n.
    let vars = inst.z_vars();
    let entries = entries.iter().map(|e| e.embed(&vars, &(0..n).collect::<Vec<_>>())).collect::<Result<Vec<_>>>()?;
    PolyVector::new(&vars, entries)
}

/// A solution vector with its parameters. `r` is the level: the vector is
/// the coefficient of `x^{l p^r - 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub p: u64,
    pub s: u32,
    pub n: usize,
    pub l: u64,
    pub r: u32,
    /// Homogeneity degree `sum M_i - l p^r`.
    pub delta: i64,
    pub mvec: Vec<u64>,
    pub vector: PolyVector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// `P^{l p^r - 1}(z, M)`. Indices outside the nonzero range give the zero
/// vector together with a warning rather than an error.
pub fn extract_solution(inst: &KZInstance, mvec: &MVector, l: u64, r: u32) -> Result<SolutionRecord> {
    check_mvec(inst, mvec)?;
    if r == 0 || r > inst.s() {
        return Err(KzError::InvalidParameter(format!("level r = {r} must lie in 1..={}", inst.s())));
    }
    let level = inst.ctx.at_level(r)?;
    if let Some(bad) = mvec.entries().iter().find(|&&e| !level.is_admissible_exponent(e)) {
        return Err(KzError::InvalidMVector(format!("{bad} is not congruent to -1/2 mod {}", level.modulus)));
    }
    let pr = level.modulus;
    let k = (l * pr) as i64 - 1;
    let delta = mvec.total() as i64 - (l * pr) as i64;
    let vector = if l == 0 || delta < 0 {
        PolyVector::zeros(&inst.z_vars(), inst.n)
    } else {
        coefficient_vector(inst, mvec.entries(), k)?
    };
    let warning = vector.is_zero().then(|| format!("l = {l} is outside the nonzero range at level {r}; zero vector"));
    Ok(SolutionRecord { p: inst.p(), s: inst.s(), n: inst.n, l, r, delta, mvec: mvec.entries().to_vec(), vector, warning })
}

/// `I^{[l p^s - 1]}` for the minimal exponent vector.
pub fn solution(inst: &KZInstance, l: u64) -> Result<SolutionRecord> {
    extract_solution(inst, &MVector::minimal(&inst.ctx, inst.n), l, inst.s())
}

/// The level-`r` generator `I^{[l p^r - 1]}_{p^r}`, built from the minimal
/// vector of level `r`.
pub fn generator(inst: &KZInstance, r: u32, l: u64) -> Result<SolutionRecord> {
    let level = inst.ctx.at_level(r)?;
    extract_solution(inst, &MVector::minimal(&level, inst.n), l, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(inst: &KZInstance, i: usize) -> IntPolynomial {
        IntPolynomial::var(&inst.z_vars(), i).unwrap()
    }

    #[test]
    fn first_solution_p5_n3() {
        let inst = KZInstance::new(5, 1, 3).unwrap();
        let rec = solution(&inst, 1).unwrap();
        assert_eq!(rec.delta, 1);
        let (z1, z2, z3) = (z(&inst, 0), z(&inst, 1), z(&inst, 2));
        let two = BigInt::from(2);
        assert_eq!(rec.vector.get(0), &-(&z1 + &(&z2.scale(&two) + &z3.scale(&two))));
        assert_eq!(rec.vector.get(1), &-(&z2 + &(&z1.scale(&two) + &z3.scale(&two))));
        assert_eq!(rec.vector.get(2), &-(&z3 + &(&z1.scale(&two) + &z2.scale(&two))));
        assert!(rec.warning.is_none());
    }

    #[test]
    fn fast_path_matches_expansion() {
        for (p, s, n) in [(5, 1, 3), (7, 1, 3), (5, 1, 5), (5, 2, 3)] {
            let inst = KZInstance::new(p, s, n).unwrap();
            let m = MVector::minimal(&inst.ctx, n);
            for k in [-1, 0, 3, 4, (inst.ctx.modulus - 1) as i64, m.total() as i64 - 1, m.total() as i64] {
                let fast = coefficient_vector(&inst, m.entries(), k).unwrap();
                let slow = coefficient_vector_by_expansion(&inst, m.entries(), k).unwrap();
                assert_eq!(fast, slow, "p={p} s={s} n={n} k={k}");
            }
        }
    }

    #[test]
    fn master_polynomial_shape() {
        let inst = KZInstance::new(5, 1, 3).unwrap();
        let phi = master_polynomial(&inst, &MVector::minimal(&inst.ctx, 3)).unwrap();
        assert_eq!(phi.degree_in(0), Some(6));
        assert_eq!(phi.coefficient_in(0, 6).unwrap(), IntPolynomial::one(&inst.z_vars()));
        assert!(MVector::new(&inst.ctx, vec![2, 3, 2]).is_err());
    }

    #[test]
    fn out_of_range_is_zero_with_warning() {
        let inst = KZInstance::new(5, 1, 3).unwrap();
        let rec = solution(&inst, 2).unwrap();
        assert!(rec.vector.is_zero() && rec.warning.is_some());
        let rec = solution(&inst, 0).unwrap();
        assert!(rec.vector.is_zero());
    }

    #[test]
    fn product_coefficient_with_zero_root() {
        // x^2 (x - y)^3: coefficient of x^3 is 3 y^2.
        let vars = Vars::indexed("y", 1).unwrap();
        let c = product_coefficient(&vars, &[None, Some(0)], &[2, 3], 3).unwrap();
        assert_eq!(c, IntPolynomial::monomial(&vars, Monomial::var_power(0, 2).unwrap(), 3));
        let c = product_coefficient(&vars, &[None, Some(0)], &[2, 3], 1).unwrap();
        assert!(c.is_zero());
    }
}
