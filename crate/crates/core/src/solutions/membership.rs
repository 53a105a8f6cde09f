//! Explicit module membership. Generators are `p^{s-k} G` where `G` is the
//! coefficient of `x^{m p^k - 1}` in the partial quotients of a master
//! polynomial (plain, or after `x = v + z_n`). Linear relations between the
//! generators of different exponent vectors come from multiplying the master
//! polynomial by `(x - z_j)^{p^q}`; they are unitriangular, so they can be
//! inverted by substitution.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::asymptotic::tilde_coefficient_vector;
use crate::binomial::{binom, vp_u64};
use crate::kz::KZInstance;
use crate::modpoly::ModPoly;
use crate::poly::{IntPolynomial, Monomial, Vars};
use crate::solutions::{coefficient_vector, is_quasi_constant, MVector};
use crate::{KzError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Family {
    /// Coefficients of `x^k` in `Phi / (x - z_j)`.
    Plain,
    /// Coefficients of `v^k` after `x = v + z_n`.
    Tilde,
}

/// The generator `p^{s - level} G` with `G` the coefficient of
/// `x^{index p^level - 1}` for the exponent vector `mvec`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GenKey {
    pub family: Family,
    pub mvec: Vec<u64>,
    pub level: u32,
    pub index: u64,
}

impl GenKey {
    pub fn new(family: Family, mvec: Vec<u64>, level: u32, index: u64) -> Self {
        GenKey { family, mvec, level, index }
    }

    /// Generator of the defining family: minimal exponents of its own level.
    pub fn canonical(family: Family, p: u64, n: usize, level: u32, index: u64) -> Self {
        GenKey { family, mvec: alloc::vec![(p.pow(level) - 1) / 2; n], level, index }
    }

    pub fn is_canonical(&self, p: u64) -> bool {
        let half = (p.pow(self.level) - 1) / 2;
        self.mvec.iter().all(|&m| m == half)
    }

    /// Power of `x` the generator reads off.
    pub fn power(&self, p: u64) -> u64 {
        self.index * p.pow(self.level) - 1
    }

    /// Whether the underlying coefficient can be nonzero.
    pub fn in_range(&self, p: u64) -> bool {
        self.level > 0 && self.index > 0 && self.index * p.pow(self.level) <= self.mvec.iter().sum()
    }
}

/// A finite sum `sum c_k p^{s - level_k} G_k`, each `c_k` kept modulo
/// `p^{level_k}` (which does not change the sum modulo `p^s`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Combination {
    terms: BTreeMap<GenKey, IntPolynomial>,
}

impl Serialize for Combination {
    fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            key: &'a GenKey,
            coefficient: &'a IntPolynomial,
        }
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (key, coefficient) in &self.terms {
            seq.serialize_element(&Entry { key, coefficient })?;
        }
        seq.end()
    }
}

impl Combination {
    pub fn single(key: GenKey, vars: &Vars) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(key, IntPolynomial::one(vars));
        Combination { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GenKey, &IntPolynomial)> + '_ {
        self.terms.iter()
    }

    pub fn get(&self, key: &GenKey) -> Option<&IntPolynomial> {
        self.terms.get(key)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: GenKey, c: &IntPolynomial, p: u64) -> Result<()> {
        let m = num_traits::pow(BigInt::from(p), key.level as usize);
        let sum = match self.terms.remove(&key) {
            Some(old) => old.try_add(c)?,
            None => c.clone(),
        };
        let sum = sum.reduce_mod(&m);
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
        Ok(())
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &Combination, factor: &IntPolynomial, p: u64) -> Result<()> {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), &c.try_mul(factor)?, p)?;
        }
        Ok(())
    }
}

/// `y_j`, the root shifted by the relation: `z_j`, or `z_j - z_n` after the
/// change of variable (which vanishes for `j = n`).
fn root(family: Family, vars: &Vars, j: usize) -> Result<IntPolynomial> {
    let n = vars.len();
    let zj = IntPolynomial::var(vars, j)?;
    Ok(match family {
        Family::Plain => zj,
        Family::Tilde => zj.try_sub(&IntPolynomial::var(vars, n - 1)?)?,
    })
}

fn divide_valuation(kappa: BigInt, p: u64, by: u32) -> Result<BigInt> {
    let d = num_traits::pow(BigInt::from(p), by as usize);
    let (q, r) = kappa.div_rem(&d);
    if !r.is_zero() {
        return Err(KzError::NotTriangular(format!("coefficient {kappa} is not divisible by {p}^{by}")));
    }
    Ok(q)
}

/// Splits `N = index p^level` at the level of the generator `x^{N-1}` feeds,
/// capped at `r`.
fn classify(nn: u64, p: u64, r: u32) -> (u32, u64) {
    let u = r.min(vp_u64(nn, p).unwrap_or(r));
    (u, nn / p.pow(u))
}

/// The generator `(family, from + p^q e_j, r, l)` as a combination of the
/// generators of `from` (slot `j` is 0-based). Needs `q >= r`.
pub fn shift_relation(
    inst: &KZInstance,
    family: Family,
    from: &[u64],
    j: usize,
    q: u32,
    r: u32,
    l: u64,
) -> Result<Combination> {
    let p = inst.p();
    if q < r {
        return Err(KzError::InvalidParameter(format!("a step of {p}^{q} does not relate level {r} generators")));
    }
    let vars = inst.z_vars();
    let y = root(family, &vars, j)?;
    let pq = p.pow(q);
    let top = l * p.pow(r);
    let mut out = Combination::default();
    for a in 0..=pq.min(top - 1) {
        let (u, v) = classify(top - a, p, r);
        let key = GenKey::new(family, from.to_vec(), u, v);
        if u == 0 || !key.in_range(p) {
            continue;
        }
        let kappa = binom(pq, a);
        let kappa = if (pq - a) % 2 == 1 { -kappa } else { kappa };
        let kappa = divide_valuation(kappa, p, r - u)?;
        let c = y.pow(pq - a)?.scale(&kappa);
        out.add_term(key, &c, p)?;
    }
    Ok(out)
}

/// Rewrites a generator in the other family with the same exponents, using
/// `x = v + z_n`.
pub fn cross_family_relation(inst: &KZInstance, key: &GenKey) -> Result<Combination> {
    let p = inst.p();
    let vars = inst.z_vars();
    let zn = IntPolynomial::var(&vars, inst.n - 1)?;
    let (other, shift) = match key.family {
        Family::Tilde => (Family::Plain, zn),
        Family::Plain => (Family::Tilde, -zn),
    };
    let k = key.power(p);
    let total: u64 = key.mvec.iter().sum();
    let mut out = Combination::default();
    let mut power = IntPolynomial::one(&vars);
    for a in 0..total.saturating_sub(k) {
        let (u, v) = classify(k + a + 1, p, key.level);
        let target = GenKey::new(other, key.mvec.clone(), u, v);
        if u > 0 && target.in_range(p) {
            let kappa = divide_valuation(binom(k + a, a), p, key.level - u)?;
            out.add_term(target, &power.scale(&kappa), p)?;
        }
        power = power.try_mul(&shift)?;
    }
    Ok(out)
}

/// Outcome of checking `p^{s-r} G_target = sum c_k p^{s-k} G_k (mod p^s)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipCheck {
    pub target: GenKey,
    pub terms: usize,
    /// Each `c_k` is a quasi-constant modulo `p^k`.
    pub coefficients_quasi_constant: bool,
    pub equal: bool,
}

impl MembershipCheck {
    pub fn holds(&self) -> bool {
        self.coefficients_quasi_constant && self.equal
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub p: u64,
    pub s: u32,
    pub n: usize,
    pub description: &'static str,
    /// Each generator of the first family inside the second module.
    pub forward: Vec<MembershipCheck>,
    /// Each generator of the second family inside the first module.
    pub backward: Vec<MembershipCheck>,
    pub pass: bool,
}

/// Memoised resolution of generators into canonical or target families,
/// with the generator vectors cached modulo `p^s`.
pub struct ModuleCalculus<'a> {
    inst: &'a KZInstance,
    vars: Vars,
    canon: BTreeMap<GenKey, Combination>,
    toward: BTreeMap<(GenKey, Vec<u64>), Combination>,
    vectors: BTreeMap<GenKey, Vec<ModPoly>>,
}

impl<'a> ModuleCalculus<'a> {
    pub fn new(inst: &'a KZInstance) -> Self {
        ModuleCalculus {
            inst,
            vars: inst.z_vars(),
            canon: BTreeMap::new(),
            toward: BTreeMap::new(),
            vectors: BTreeMap::new(),
        }
    }

    fn p(&self) -> u64 {
        self.inst.p()
    }

    /// The key as a combination of canonical generators of its own family,
    /// lowering one exponent by `p^level` at a time.
    pub fn to_canonical(&mut self, key: &GenKey) -> Result<Combination> {
        let p = self.p();
        if !key.in_range(p) {
            return Ok(Combination::default());
        }
        if key.is_canonical(p) {
            return Ok(Combination::single(key.clone(), &self.vars));
        }
        if let Some(c) = self.canon.get(key) {
            return Ok(c.clone());
        }
        let step = p.pow(key.level);
        let half = (step - 1) / 2;
        let j = key.mvec.iter().position(|&m| m > half).expect("non-canonical key has a large slot");
        if !(key.mvec[j] - half).is_multiple_of(step) {
            return Err(KzError::InvalidMVector(format!("{} is not -1/2 mod {step}", key.mvec[j])));
        }
        let mut from = key.mvec.clone();
        from[j] -= step;
        let rel = shift_relation(self.inst, key.family, &from, j, key.level, key.level, key.index)?;
        let mut out = Combination::default();
        for (k, c) in rel.terms() {
            let sub = self.to_canonical(k)?;
            out.add_scaled(&sub, c, p)?;
        }
        self.canon.insert(key.clone(), out.clone());
        Ok(out)
    }

    /// The key as a combination of generators of `target` (same family), by
    /// inverting the unitriangular relations for steps `from -> from + p^level e_j`.
    pub fn toward(&mut self, key: &GenKey, target: &[u64]) -> Result<Combination> {
        let p = self.p();
        if !key.in_range(p) {
            return Ok(Combination::default());
        }
        if key.mvec == target {
            return Ok(Combination::single(key.clone(), &self.vars));
        }
        let memo = (key.clone(), target.to_vec());
        if let Some(c) = self.toward.get(&memo) {
            return Ok(c.clone());
        }
        let step = p.pow(key.level);
        let j = key
            .mvec
            .iter()
            .zip(target)
            .position(|(a, b)| a != b)
            .expect("keys differ from the target somewhere");
        if key.mvec[j] > target[j] || !(target[j] - key.mvec[j]).is_multiple_of(step) {
            return Err(KzError::InvalidMVector(format!(
                "cannot reach {} from {} in steps of {step}",
                target[j], key.mvec[j]
            )));
        }
        let rel = shift_relation(self.inst, key.family, &key.mvec, j, key.level, key.level, key.index + 1)?;
        match rel.get(key) {
            Some(c) if c.is_one_constant() => {}
            _ => return Err(KzError::NotTriangular(format!("no unit diagonal for {key:?}"))),
        }
        let mut to = key.mvec.clone();
        to[j] += step;
        let upper = GenKey::new(key.family, to, key.level, key.index + 1);
        let mut out = self.toward(&upper, target)?;
        for (k, c) in rel.terms() {
            if k == key {
                continue;
            }
            if k.level == key.level && k.index <= key.index {
                return Err(KzError::NotTriangular(format!("{k:?} does not sit above {key:?}")));
            }
            let sub = self.toward(k, target)?;
            out.add_scaled(&sub, &-c, p)?;
        }
        self.toward.insert(memo, out.clone());
        Ok(out)
    }

    /// Replaces every key by its canonical expansion.
    pub fn canonicalize(&mut self, comb: &Combination) -> Result<Combination> {
        let p = self.p();
        let mut out = Combination::default();
        for (k, c) in comb.terms() {
            let sub = self.to_canonical(k)?;
            out.add_scaled(&sub, c, p)?;
        }
        Ok(out)
    }

    fn vector(&mut self, key: &GenKey) -> Result<Vec<ModPoly>> {
        if let Some(v) = self.vectors.get(key) {
            return Ok(v.clone());
        }
        let k = key.power(self.p()) as i64;
        let v = match key.family {
            Family::Plain => coefficient_vector(self.inst, &key.mvec, k)?,
            Family::Tilde => tilde_coefficient_vector(self.inst, &MVector::from_raw(key.mvec.clone()), k)?,
        };
        let v = crate::modpoly::vector_from_int(v.entries(), self.inst.ctx.modulus);
        self.vectors.insert(key.clone(), v.clone());
        Ok(v)
    }

    /// Assembles both sides modulo `p^s` and checks the coefficients.
    pub fn check(&mut self, target: &GenKey, comb: &Combination) -> Result<MembershipCheck> {
        let (p, s, m) = (self.p(), self.inst.s(), self.inst.ctx.modulus);
        let n = self.inst.n;
        let mut lhs = alloc::vec![ModPoly::default(); n];
        let mut quasi = true;
        for (k, c) in comb.terms() {
            quasi &= is_quasi_constant(c, p, k.level);
            let scale = p.pow(s - k.level);
            let cm = ModPoly::from_int(c, m);
            let g = self.vector(k)?;
            for (acc, e) in lhs.iter_mut().zip(&g) {
                acc.add_product(&cm, e, scale, m)?;
            }
        }
        let mut rhs = alloc::vec![ModPoly::default(); n];
        if target.in_range(p) {
            let scale = p.pow(s - target.level);
            let one = ModPoly::constant(1, m);
            for (acc, e) in rhs.iter_mut().zip(&self.vector(target)?) {
                acc.add_product(&one, e, scale, m)?;
            }
        }
        Ok(MembershipCheck {
            target: target.clone(),
            terms: comb.len(),
            coefficients_quasi_constant: quasi,
            equal: lhs == rhs,
        })
    }

    /// Both inclusions between the module generated by the family of `mvec`
    /// and the canonical one.
    pub fn module_independence(&mut self, mvec: &MVector) -> Result<MembershipReport> {
        let inst = self.inst;
        let (p, s, n) = (inst.p(), inst.s(), inst.n);
        if mvec.len() != n || mvec.entries().iter().any(|&e| !inst.ctx.is_admissible_exponent(e)) {
            return Err(KzError::InvalidMVector(format!("{:?} is not admissible mod {}", mvec.entries(), inst.ctx.modulus)));
        }
        let mut forward = Vec::new();
        for r in 1..=s {
            let lmax = mvec.total() / p.pow(r);
            for l in 1..=lmax {
                let key = GenKey::new(Family::Plain, mvec.entries().to_vec(), r, l);
                let comb = self.to_canonical(&key)?;
                forward.push(self.check(&key, &comb)?);
            }
        }
        let mut backward = Vec::new();
        for r in 1..=s {
            for l in 1..=inst.g as u64 {
                let key = GenKey::canonical(Family::Plain, p, n, r, l);
                let comb = self.toward(&key, mvec.entries())?;
                backward.push(self.check(&key, &comb)?);
            }
        }
        let pass = forward.iter().chain(&backward).all(MembershipCheck::holds);
        Ok(MembershipReport { p, s, n, description: "exponent vector vs minimal family", forward, backward, pass })
    }

    /// Both inclusions between the modules of the plain and the shifted
    /// (`x = v + z_n`) canonical families.
    pub fn tilde_equivalence(&mut self) -> Result<MembershipReport> {
        let inst = self.inst;
        let (p, s, n) = (inst.p(), inst.s(), inst.n);
        let mut forward = Vec::new();
        let mut backward = Vec::new();
        for r in 1..=s {
            for l in 1..=inst.g as u64 {
                let tilde = GenKey::canonical(Family::Tilde, p, n, r, l);
                let comb = self.canonicalize(&cross_family_relation(inst, &tilde)?)?;
                forward.push(self.check(&tilde, &comb)?);
                let plain = GenKey::canonical(Family::Plain, p, n, r, l);
                let comb = self.canonicalize(&cross_family_relation(inst, &plain)?)?;
                backward.push(self.check(&plain, &comb)?);
            }
        }
        let pass = forward.iter().chain(&backward).all(MembershipCheck::holds);
        Ok(MembershipReport { p, s, n, description: "shifted family vs plain family", forward, backward, pass })
    }
}

trait OneConstant {
    fn is_one_constant(&self) -> bool;
}

impl OneConstant for IntPolynomial {
    fn is_one_constant(&self) -> bool {
        self.len() == 1 && self.coeff(&Monomial::ONE).is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_has_unit_diagonal() {
        let inst = KZInstance::new(5, 1, 3).unwrap();
        let rel = shift_relation(&inst, Family::Plain, &[2, 2, 2], 0, 1, 1, 2).unwrap();
        let diag = GenKey::new(Family::Plain, alloc::vec![2, 2, 2], 1, 1);
        assert!(rel.get(&diag).unwrap().is_one_constant());
        assert!(shift_relation(&inst, Family::Plain, &[2, 2, 2], 0, 0, 1, 1).is_err());
    }

    #[test]
    fn small_membership() {
        let inst = KZInstance::new(5, 1, 3).unwrap();
        let mut calc = ModuleCalculus::new(&inst);
        let m = MVector::new(&inst.ctx, alloc::vec![7, 2, 12]).unwrap();
        let rep = calc.module_independence(&m).unwrap();
        assert!(rep.pass, "{rep:?}");
        let rep = calc.tilde_equivalence().unwrap();
        assert!(rep.pass, "{rep:?}");
    }
}
