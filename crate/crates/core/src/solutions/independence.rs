//! Linear independence of `I^{[l p^s - 1]}`, `l = 1..g`, modulo `p`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::kz::KZInstance;
use crate::modpoly::{vector_from_int, ModPoly};
use crate::poly::Monomial;
use crate::solutions::{leading_term_formula, solution};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependenceReport {
    pub p: u64,
    pub s: u32,
    pub n: usize,
    pub seed: u64,
    /// The leading monomials for `l = 1..g` are pairwise distinct.
    pub leading_monomials_distinct: bool,
    /// Rank modulo `p` of the leading coefficient vectors.
    pub leading_rank: usize,
    pub trials: usize,
    /// Trials whose combination is nonzero modulo `p` coefficientwise.
    pub nonzero_trials: usize,
    /// Of those, trials that also evaluate to a nonzero vector at a random point.
    pub nonzero_evaluations: usize,
    pub pass: bool,
}

fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(p)) else { continue };
        rows.swap(rank, pivot);
        let inv = crate::modulus::inv_mod(rows[rank][c], p).expect("nonzero mod p");
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c] * inv % p;
                for k in 0..cols {
                    rows[r][k] = (rows[r][k] + p * p - f * rows[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn random_coefficient<R: Rng>(n: usize, p: u64, frobenius: u32, rng: &mut R) -> Result<ModPoly> {
    let mut c = ModPoly::default();
    c.add_scaled_term(Monomial::ONE, rng.gen_range(0..p), p);
    for i in 0..n {
        c.add_scaled_term(Monomial::var_power(i, frobenius)?, rng.gen_range(0..p), p);
    }
    Ok(c)
}

/// For `trials` seeded random choices of `c_l` (degree at most one, in `z`
/// or in `z^{p^s}` on alternate trials, not all zero), checks that
/// `sum c_l I^{[l p^s - 1]}` is nonzero modulo `p`. The leading-term argument
/// (distinct leading monomials and full-rank leading vectors) is reported
/// alongside.
pub fn linear_independence_probe(inst: &KZInstance, trials: usize, seed: u64) -> Result<IndependenceReport> {
    let (n, p, g) = (inst.n, inst.p(), inst.g as u64);
    let mut monos = Vec::new();
    let mut rows = Vec::new();
    let pb = BigInt::from(p);
    for l in 1..=g {
        let lt = leading_term_formula(inst, l)?;
        monos.push(lt.monomial);
        rows.push(lt.vector.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap_or(0)).collect());
    }
    let mut sorted = monos.clone();
    sorted.sort();
    sorted.dedup();
    let leading_monomials_distinct = sorted.len() == monos.len();
    let leading_rank = rank_mod_p(rows, p);

    let sols: Vec<Vec<ModPoly>> =
        (1..=g).map(|l| solution(inst, l).map(|r| vector_from_int(r.vector.entries(), p))).collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut nonzero_trials, mut nonzero_evaluations) = (0, 0);
    let frob = inst.ctx.modulus as u32;
    for t in 0..trials {
        let exp = if t % 2 == 0 { 1 } else { frob };
        let coeffs: Vec<ModPoly> = loop {
            let cs = (0..g).map(|_| random_coefficient(n, p, exp, &mut rng)).collect::<Result<Vec<_>>>()?;
            if cs.iter().any(|c| !c.is_zero()) {
                break cs;
            }
        };
        let mut comb = alloc::vec![ModPoly::default(); n];
        for (c, sol) in coeffs.iter().zip(&sols) {
            for (acc, e) in comb.iter_mut().zip(sol) {
                acc.add_product(c, e, 1, p)?;
            }
        }
        if comb.iter().any(|e| !e.is_zero()) {
            nonzero_trials += 1;
            let point: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
            if comb.iter().any(|e| crate::modpoly::eval(e, &point, p) != 0) {
                nonzero_evaluations += 1;
            }
        }
    }
    let pass = leading_monomials_distinct && leading_rank == g as usize && nonzero_trials == trials;
    Ok(IndependenceReport {
        p,
        s: inst.s(),
        n,
        seed,
        leading_monomials_distinct,
        leading_rank,
        trials,
        nonzero_trials,
        nonzero_evaluations,
        pass,
    })
}
