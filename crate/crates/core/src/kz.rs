//! The reduced KZ system: `dI/dz_i = 1/2 sum_{j != i} Omega_ij / (z_i - z_j) I`
//! together with the constraint `I_1 + ... + I_n = 0`, checked modulo `p^s`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::modpoly::{eval, mulm, vector_from_int, ModPoly};
use crate::modulus::inv_mod;
use crate::poly::{self, IntPolynomial, PolyVector, Vars};
use crate::{par, KzError, ModulusContext, Result};

/// The system for `n = 2g + 1` points over `Z / p^s`. The prime must be at
/// least `n` (so `n` pairwise distinct residues exist); `p = n = 5` is used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KZInstance {
    pub n: usize,
    pub g: usize,
    pub ctx: ModulusContext,
}

impl KZInstance {
    pub fn new(p: u64, s: u32, n: usize) -> Result<Self> {
        Self::from_context(ModulusContext::new(p, s)?, n)
    }

    pub fn from_context(ctx: ModulusContext, n: usize) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(KzError::InvalidParameter(format!("n = {n} must be odd and at least 3")));
        }
        if ctx.p < n as u64 {
            return Err(KzError::InvalidParameter(format!("need p >= n (p = {}, n = {n})", ctx.p)));
        }
        if n + 1 > poly::MAX_VARS {
            return Err(KzError::TooManyVariables(n + 1));
        }
        Ok(Self { n, g: (n - 1) / 2, ctx })
    }

    pub fn p(&self) -> u64 {
        self.ctx.p
    }

    pub fn s(&self) -> u32 {
        self.ctx.s
    }

    /// The same `(p, n)` at level `r`.
    pub fn at_level(&self, r: u32) -> Result<Self> {
        Self::from_context(self.ctx.at_level(r)?, self.n)
    }

    /// Homogeneity degree `n (p^s - 1)/2 - l p^s` of the `l`-th solution,
    /// negative when `l` is out of range.
    pub fn delta(&self, l: u64) -> i64 {
        self.n as i64 * self.ctx.half as i64 - (l * self.ctx.modulus) as i64
    }

    pub fn z_vars(&self) -> Vars {
        Vars::z(self.n).expect("n fits in the monomial packing")
    }

    pub fn xz_vars(&self) -> Vars {
        Vars::xz(self.n).expect("n + 1 fits in the monomial packing")
    }
}

/// `Omega_ij` for the reduced system (indices are 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaMatrix {
    pub i: usize,
    pub j: usize,
    pub n: usize,
}

pub fn omega(i: usize, j: usize, n: usize) -> Result<OmegaMatrix> {
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(KzError::InvalidParameter(format!("omega({i}, {j}) needs distinct indices in 1..={n}")));
    }
    Ok(OmegaMatrix { i: i.min(j), j: i.max(j), n })
}

impl OmegaMatrix {
    /// Entry at (1-based) row `a`, column `b`.
    pub fn entry(&self, a: usize, b: usize) -> i64 {
        let on = |x: usize| x == self.i || x == self.j;
        match (on(a), on(b)) {
            (true, true) if a == b => -1,
            (true, true) => 1,
            _ => 0,
        }
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (1..=self.n).map(|a| (1..=self.n).map(|b| self.entry(a, b)).collect()).collect()
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        let (a, b) = (&v[self.i - 1], &v[self.j - 1]);
        let mut out = vec![BigInt::from(0); self.n];
        out[self.i - 1] = b - a;
        out[self.j - 1] = a - b;
        out
    }
}

/// `prod_{k != i, k not in skip} (z_i - z_k)` with z-variables starting at `off`.
fn clearing_factor(n: usize, off: usize, i: usize, skip: Option<usize>, m: u64) -> Result<ModPoly> {
    let factors = (0..n)
        .filter(|&k| k != i && Some(k) != skip)
        .map(|k| ModPoly::difference(off + i, off + k, m))
        .collect::<Result<Vec<_>>>()?;
    ModPoly::product(&factors, m)
}

/// Cleared residual of equation `i` (0-based) for a vector whose z-variables
/// start at index `off`.
fn residual_mod(entries: &[ModPoly], n: usize, off: usize, i: usize, m: u64, inv2: u64) -> Result<Vec<ModPoly>> {
    let d = clearing_factor(n, off, i, None, m)?;
    let e: Vec<Option<ModPoly>> =
        (0..n).map(|j| (j != i).then(|| clearing_factor(n, off, i, Some(j), m)).transpose()).collect::<Result<_>>()?;
    let minus_half = m - inv2;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = ModPoly::default();
        acc.add_product(&d, &entries[k].diff(off + i, m), 1, m)?;
        if k == i {
            for (j, ej) in e.iter().enumerate() {
                if let Some(ej) = ej {
                    acc.add_product(ej, &entries[j], minus_half, m)?;
                    acc.add_product(ej, &entries[i], inv2, m)?;
                }
            }
        } else {
            let ek = e[k].as_ref().expect("k differs from i");
            acc.add_product(ek, &entries[i], minus_half, m)?;
            acc.add_product(ek, &entries[k], inv2, m)?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// The residual `R_i` (with `i` 1-based) after multiplying equation `i` by
/// `prod_{j != i}(z_i - z_j)`, reduced into `[0, p^s)`. It vanishes exactly
/// when `I` satisfies equation `i` modulo `p^s`.
pub fn kz_residue(vector: &PolyVector, i: usize, inst: &KZInstance) -> Result<PolyVector> {
    check_shape(vector, inst)?;
    if i == 0 || i > inst.n {
        return Err(KzError::BadVariable { index: i, nvars: inst.n });
    }
    let m = inst.ctx.modulus;
    let entries = vector_from_int(vector.entries(), m);
    let inv2 = inst.ctx.half + 1;
    let res = residual_mod(&entries, inst.n, 0, i - 1, m, inv2)?;
    PolyVector::new(vector.vars(), res.iter().map(|r| r.to_int(vector.vars())).collect())
}

fn check_shape(vector: &PolyVector, inst: &KZInstance) -> Result<()> {
    if vector.len() != inst.n {
        return Err(KzError::SizeMismatch { expected: inst.n, got: vector.len() });
    }
    if vector.vars().len() != inst.n {
        return Err(KzError::SizeMismatch { expected: inst.n, got: vector.vars().len() });
    }
    Ok(())
}

/// The first nonzero residual coefficient found (indices 1-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualFailure {
    pub equation: usize,
    pub component: usize,
    pub monomial: Vec<u32>,
    /// Symmetric lift of the offending coefficient.
    pub residue: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointCheck {
    pub point: Vec<u64>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolutionReport {
    pub p: u64,
    pub s: u32,
    pub n: usize,
    pub sum_ok: bool,
    pub equations: Vec<bool>,
    pub first_failure: Option<ResidualFailure>,
    /// Uncleared checks at random points with pairwise distinct coordinates
    /// modulo `p`, where every `z_i - z_j` is a unit.
    pub point_checks: Vec<PointCheck>,
    pub pass: bool,
}

/// Number of random evaluation points used by [`verify_solution`].
pub const DEFAULT_POINTS: usize = 3;

pub fn verify_solution(vector: &PolyVector, inst: &KZInstance) -> Result<SolutionReport> {
    verify_solution_with(vector, inst, DEFAULT_POINTS, 0x6b7a)
}

pub fn verify_solution_with(vector: &PolyVector, inst: &KZInstance, points: usize, seed: u64) -> Result<SolutionReport> {
    check_shape(vector, inst)?;
    let m = inst.ctx.modulus;
    let n = inst.n;
    let inv2 = inst.ctx.half + 1;
    let entries = vector_from_int(vector.entries(), m);

    let mut sum = ModPoly::default();
    for e in &entries {
        for (mono, c) in &e.terms {
            sum.add_scaled_term(*mono, *c, m);
        }
    }
    let sum_ok = sum.is_zero();

    let residuals = par::map_indexed(n, |i| residual_mod(&entries, n, 0, i, m, inv2));
    let mut equations = Vec::with_capacity(n);
    let mut first_failure = None;
    for (i, r) in residuals.into_iter().enumerate() {
        let r = r?;
        let bad = r.iter().enumerate().find_map(|(k, c)| c.first_term().map(|t| (k, t)));
        equations.push(bad.is_none());
        if let (Some((k, (mono, c))), None) = (bad, &first_failure) {
            first_failure = Some(ResidualFailure {
                equation: i + 1,
                component: k + 1,
                monomial: mono.exponents(n),
                residue: inst.ctx.symmetric(&BigInt::from(c)).to_string(),
            });
        }
    }

    let point_checks = point_checks(&entries, inst, points, seed);
    let pass = sum_ok && equations.iter().all(|&e| e) && point_checks.iter().all(|c| c.holds);
    Ok(SolutionReport { p: inst.p(), s: inst.s(), n, sum_ok, equations, first_failure, point_checks, pass })
}

fn point_checks(entries: &[ModPoly], inst: &KZInstance, count: usize, seed: u64) -> Vec<PointCheck> {
    let (n, m, p) = (inst.n, inst.ctx.modulus, inst.p());
    let inv2 = inst.ctx.half + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let point: Vec<u64> = loop {
            let cand: Vec<u64> = (0..n).map(|_| rng.gen_range(0..m)).collect();
            let distinct = (0..n).all(|a| (a + 1..n).all(|b| cand[a] % p != cand[b] % p));
            if distinct {
                break cand;
            }
        };
        let values: Vec<u64> = entries.iter().map(|e| eval(e, &point, m)).collect();
        let mut holds = values.iter().fold(0, |a, v| (a + v) % m) == 0;
        for i in 0..n {
            for k in 0..n {
                let lhs = eval(&entries[k].diff(i, m), &point, m);
                let mut rhs = 0u64;
                for j in (0..n).filter(|&j| j != i) {
                    let inv = inv_mod((point[i] + m - point[j]) % m, m).expect("distinct residues give units");
                    // (Omega_ij I)_k
                    let w = if k == i {
                        (values[j] + m - values[i]) % m
                    } else if k == j {
                        (values[i] + m - values[j]) % m
                    } else {
                        0
                    };
                    rhs = (rhs + mulm(w, inv, m)) % m;
                }
                holds &= lhs == mulm(rhs, inv2, m);
            }
        }
        out.push(PointCheck { point, holds });
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MasterIdentityReport {
    pub mvec: Vec<u64>,
    /// `sum_j M_j Phi / (x - z_j) = dPhi/dx` over the integers.
    pub i3_exact: bool,
    /// `M sum_j Phi / (x - z_j) = dPhi/dx` modulo `p^s`.
    pub i3_mod: bool,
    /// Cleared vector identity, one flag per `i`.
    pub i4: Vec<bool>,
    pub pass: bool,
}

/// Symbolic check of the two polynomial identities behind the solutions, in
/// the variables `(x, z_1, ..., z_n)`.
pub fn verify_master_identities(inst: &KZInstance, mvec: &[u64]) -> Result<MasterIdentityReport> {
    let n = inst.n;
    if mvec.len() != n {
        return Err(KzError::InvalidMVector(format!("expected {n} entries, got {}", mvec.len())));
    }
    if let Some(bad) = mvec.iter().find(|&&e| !inst.ctx.is_admissible_exponent(e)) {
        return Err(KzError::InvalidMVector(format!("{bad} is not congruent to -1/2 mod {}", inst.ctx.modulus)));
    }
    let vars = inst.xz_vars();
    let factors = (0..n).map(|i| poly::linear(&vars, 0, i + 1, -1)).collect::<Result<Vec<_>>>()?;
    let phi = poly::product_of_powers(&vars, &factors, mvec)?;
    let partials: Vec<IntPolynomial> = par::map_indexed(n, |j| {
        let mut e = mvec.to_vec();
        e[j] -= 1;
        poly::product_of_powers(&vars, &factors, &e)
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let dphi = phi.diff(0)?;
    let mut weighted = IntPolynomial::zero(&vars);
    let mut plain = IntPolynomial::zero(&vars);
    for (pj, &mj) in partials.iter().zip(mvec) {
        weighted += &pj.scale(&BigInt::from(mj));
        plain += pj;
    }
    let i3_exact = weighted == dphi;
    let i3_mod = plain.scale(&BigInt::from(inst.ctx.half)).try_sub(&dphi)?.is_divisible_by(inst.ctx.modulus_big());

    let m = inst.ctx.modulus;
    let inv2 = inst.ctx.half + 1;
    let entries = vector_from_int(&partials, m);
    let i4 = par::map_indexed(n, |i| -> Result<bool> {
        let mut res = residual_mod(&entries, n, 1, i, m, inv2)?;
        // The right-hand side d/dx Psi^i with Psi^i = -P_i e_i, after clearing.
        let d = clearing_factor(n, 1, i, None, m)?;
        res[i].add_product(&d, &entries[i].diff(0, m), 1, m)?;
        Ok(res.iter().all(ModPoly::is_zero))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let pass = i3_exact && i3_mod && i4.iter().all(|&b| b);
    Ok(MasterIdentityReport { mvec: mvec.to_vec(), i3_exact, i3_mod, i4, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_shape() {
        let o = omega(1, 2, 3).unwrap();
        assert_eq!(o.rows(), vec![vec![-1, 1, 0], vec![1, -1, 0], vec![0, 0, 0]]);
        assert_eq!(omega(3, 1, 3).unwrap().rows(), vec![vec![-1, 0, 1], vec![0, 0, 0], vec![1, 0, -1]]);
        assert_eq!(omega(2, 1, 3).unwrap(), o);
        assert!(omega(2, 2, 3).is_err());
        for row in omega(2, 5, 5).unwrap().rows() {
            assert_eq!(row.iter().sum::<i64>(), 0);
        }
    }

    #[test]
    fn zero_and_constant_vectors() {
        let inst = KZInstance::new(5, 1, 3).unwrap();
        let vars = inst.z_vars();
        let zero = PolyVector::zeros(&vars, 3);
        assert!(kz_residue(&zero, 1, &inst).unwrap().is_zero());
        assert!(verify_solution(&zero, &inst).unwrap().pass);

        // Constants are killed by every Omega_ij; only the sum condition fails.
        let ones = PolyVector::new(&vars, vec![IntPolynomial::one(&vars); 3]).unwrap();
        let r = verify_solution(&ones, &inst).unwrap();
        assert!(!r.sum_ok && r.equations.iter().all(|&e| e) && !r.pass);

        let e1 = PolyVector::new(
            &vars,
            vec![IntPolynomial::one(&vars), IntPolynomial::zero(&vars), IntPolynomial::zero(&vars)],
        )
        .unwrap();
        let r = verify_solution(&e1, &inst).unwrap();
        assert!(!r.equations[0] && r.first_failure.is_some());
    }

    #[test]
    fn master_identities_small() {
        let inst = KZInstance::new(5, 1, 3).unwrap();
        assert!(verify_master_identities(&inst, &[2, 2, 2]).unwrap().pass);
        assert!(verify_master_identities(&inst, &[2, 7, 2]).unwrap().pass);
        assert!(verify_master_identities(&inst, &[2, 3, 2]).is_err());
    }

    #[test]
    fn instance_validation() {
        assert!(KZInstance::new(5, 1, 4).is_err());
        assert!(KZInstance::new(5, 1, 7).is_err());
        assert!(KZInstance::new(5, 1, 5).is_ok());
        assert_eq!(KZInstance::new(5, 2, 3).unwrap().delta(1), 11);
    }
}
