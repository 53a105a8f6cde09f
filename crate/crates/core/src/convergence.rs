//! Seeded p-adic convergence experiments. Every PASS compares a measured
//! valuation against a proven lower bound, so sampling can only miss
//! violations, never invent agreement.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asymptotic::{coefficient_bound, t_l_series, t_ls_closed_form, SeriesTruncation};
use crate::binomial::{binom, vp};
use crate::kz::KZInstance;
use crate::padic::{
    binom_half, binom_half_exact, checked_modulus, hensel_sqrt, is_nonzero_square_mod_p, teichmuller, DiscSpec,
    PAdicNumber, QpElement, Valuation,
};
use crate::{par, Decimal, KzError, Result};

/// Default precision `N = s_max + 8`.
pub fn default_precision(s_max: u32) -> u32 {
    s_max + 8
}

/// Points `omega(alpha) + p^{r+1} k` with `k` uniform modulo `p^{N-r-1}`.
pub fn sample_disc(p: u64, spec: DiscSpec, count: usize, seed: u64, prec: u32) -> Result<Vec<PAdicNumber>> {
    if spec.alpha >= p {
        return Err(KzError::InvalidParameter(format!("alpha = {} is not a residue mod {p}", spec.alpha)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(p, spec, count, prec, &mut rng)
}

fn sample_with<R: Rng>(p: u64, spec: DiscSpec, count: usize, prec: u32, rng: &mut R) -> Result<Vec<PAdicNumber>> {
    let modulus = checked_modulus(p, prec)?;
    let w = teichmuller(&PAdicNumber::new(p, prec, spec.alpha)?);
    let step = w.p_power(spec.radius_exponent + 1);
    let span = (modulus / step.residue().max(1)).max(1);
    Ok((0..count).map(|_| w.add(&step.mul(&w.like_i64(rng.gen_range(0..span) as i64)))).collect())
}

/// One sample of the step bound `|t^{p^{s+1}} - t^{p^s}|_p <= p^{-(s+1)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XpsSample {
    pub t: PAdicNumber,
    /// `v(t^{p^{s+1}} - t^{p^s})` for `s = 0..s_max`.
    pub steps: Vec<Valuation>,
    /// `v(t^{p^{s_max}} - omega(alpha))`.
    pub limit: Valuation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XpsReport {
    pub p: u64,
    pub alpha: u64,
    pub s_max: u32,
    pub precision: u32,
    pub samples: Vec<XpsSample>,
    pub steps_ok: bool,
    /// `|t^{p^{s_max}} - omega(alpha)|_p <= p^{-s_max}` on every sample.
    pub limit_ok: bool,
    pub pass: bool,
}

/// `t^{p^s}` converges to `omega(alpha)` on `D_{alpha,1}`.
pub fn check_xps_convergence(p: u64, alpha: u64, samples: &[PAdicNumber], s_max: u32) -> Result<XpsReport> {
    let prec = samples.first().map_or(1, PAdicNumber::precision);
    let mut out = Vec::with_capacity(samples.len());
    let (mut steps_ok, mut limit_ok) = (true, true);
    for t in samples {
        if t.digit0() != alpha % p {
            return Err(KzError::InvalidParameter(format!("sample {t} is not in D_({alpha},1)")));
        }
        let mut powers = Vec::with_capacity(s_max as usize + 1);
        let mut x = *t;
        for _ in 0..=s_max {
            powers.push(x);
            x = x.pow(p);
        }
        let steps: Vec<Valuation> = (0..s_max as usize).map(|s| powers[s + 1].sub(&powers[s]).valuation()).collect();
        steps_ok &= steps.iter().enumerate().all(|(s, v)| v.certifies((s as u32 + 1).min(prec)));
        let limit = powers[s_max as usize].sub(&teichmuller(t)).valuation();
        limit_ok &= limit.certifies(s_max.min(prec));
        out.push(XpsSample { t: *t, steps, limit });
    }
    Ok(XpsReport { p, alpha, s_max, precision: prec, samples: out, steps_ok, limit_ok, pass: steps_ok && limit_ok })
}

/// The powers `t^{(p^s-1)/2}`: on a square class they converge (to
/// `omega(beta) t^{-1/2}`), on a non-square class consecutive values differ
/// by a unit and there is no limit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalfPowerReport {
    pub p: u64,
    pub alpha: u64,
    pub square: bool,
    /// Smallest `v(t^{(p^{s+1}-1)/2} - t^{(p^s-1)/2})` over the samples, per `s`.
    pub consecutive: Vec<Valuation>,
    /// Matches the expected behaviour for the class.
    pub pass: bool,
}

pub fn check_half_powers(p: u64, alpha: u64, samples: &[PAdicNumber], s_max: u32) -> Result<HalfPowerReport> {
    let square = is_nonzero_square_mod_p(alpha, p);
    let prec = samples.first().map_or(1, PAdicNumber::precision);
    let mut consecutive = Vec::new();
    for s in 1..s_max {
        let h0 = (p.pow(s) - 1) / 2;
        let h1 = (p.pow(s + 1) - 1) / 2;
        let v = samples
            .iter()
            .map(|t| t.pow(h1).sub(&t.pow(h0)).valuation())
            .fold(Valuation::AtLeast(prec), Valuation::min);
        consecutive.push(v);
    }
    let pass = if square {
        consecutive.iter().enumerate().all(|(i, v)| v.certifies((i as u32 + 1).min(prec)))
    } else {
        consecutive.iter().all(|v| *v == Valuation::Finite(0))
    };
    Ok(HalfPowerReport { p, alpha, square, consecutive, pass })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinRow {
    pub s: u32,
    pub a: u64,
    pub valuation: Valuation,
    /// `max(0, s - (l1 + l2) - a)`.
    pub bound: u32,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinReport {
    pub p: u64,
    pub l1: u64,
    pub l2: u64,
    pub precision: u32,
    pub rows: Vec<BinRow>,
    /// Smallest `s` from which every tested row holds; `None` if the last
    /// tested level still fails.
    pub empirical_s0: Option<u32>,
    pub pass: bool,
}

/// `|binom(-1/2 - l1, l2 + a) - binom((p^s-1)/2 - l1, l2 + a)|_p <= p^{-(s - l1 - l2 - a)}`
/// over the admissible `(s, a)` grid.
pub fn check_bin_bound(p: u64, l1: u64, l2: u64, a_max: u64, s_range: (u32, u32), prec: u32) -> Result<BinReport> {
    let mut rows = Vec::new();
    for s in s_range.0..=s_range.1 {
        let half = (checked_modulus(p, s)? - 1) / 2;
        if half < l1 {
            continue;
        }
        for a in 0..=a_max {
            let k = l2 + a;
            if k > half - l1 {
                break;
            }
            let series = binom_half(p, l1, k, prec)?;
            let trunc = series.like_bigint(&binom(half - l1, k));
            let valuation = series.sub(&trunc).valuation();
            let bound = (s as u64).saturating_sub(l1 + l2 + a).min(prec as u64) as u32;
            rows.push(BinRow { s, a, valuation, bound, holds: valuation.certifies(bound) });
        }
    }
    let mut empirical_s0 = None;
    for s in (s_range.0..=s_range.1).rev() {
        if rows.iter().filter(|r| r.s >= s).all(|r| r.holds) {
            empirical_s0 = Some(s);
        } else {
            break;
        }
    }
    let pass = rows.iter().all(|r| r.holds);
    Ok(BinReport { p, l1, l2, precision: prec, rows, empirical_s0, pass })
}

/// One level `s` of a convergence run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelRow {
    pub s: u32,
    /// Per sample, `v` of the difference vector (minimum over components).
    pub valuations: Vec<Valuation>,
    /// Per sample, the proven lower bound.
    pub bounds: Vec<u32>,
    /// Smallest valuation over the samples, i.e. the largest measured norm.
    pub worst: Valuation,
    /// `v(C^{l,s} - constant of T^l)`.
    pub constant_distance: Valuation,
    pub within_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvergenceReport {
    pub p: u64,
    pub n: usize,
    pub l: u64,
    pub alpha: u64,
    pub beta: u64,
    pub sample_count: usize,
    pub seed: u64,
    pub precision: u32,
    pub cutoff: u64,
    pub rows: Vec<LevelRow>,
    /// Per sample, the valuation grows strictly from each level to the next.
    pub strictly_decreasing: bool,
    /// Raising the series cutoff by one moves every value by at most `p^{-(D+1)}`.
    pub tail_ok: bool,
    /// Every non-trivial bound stays below the precision.
    pub precision_ok: bool,
    pub pass: bool,
}

/// Parameters of a convergence run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConvergenceSpec {
    pub p: u64,
    pub n: usize,
    pub l: u64,
    pub s_max: u32,
    pub samples: usize,
    pub seed: u64,
    pub precision: u32,
    /// Square root branch: `x_1` is sampled in `D_{beta^2, 1}`.
    pub beta: u64,
}

impl ConvergenceSpec {
    pub fn new(p: u64, n: usize, l: u64, s_max: u32, samples: usize, seed: u64) -> Self {
        ConvergenceSpec { p, n, l, s_max, samples, seed, precision: default_precision(s_max), beta: 1 }
    }
}

fn min_valuation(v: &[PAdicNumber], prec: u32) -> Valuation {
    v.iter().map(PAdicNumber::valuation).fold(Valuation::AtLeast(prec), Valuation::min)
}

fn x_valuation_bound(series: &SeriesTruncation<PAdicNumber>, j: usize, a: &[u64], xv: &[u32]) -> u64 {
    crate::asymptotic::series_x_exponents(series.n, series.l, j, a)
        .iter()
        .zip(xv)
        .map(|(&e, &v)| e * v as u64)
        .sum()
}

/// `J^{l,s}(x) = x_1^{(p^s-1)/2} Q^{l,s}` against `omega(beta) x_1^{-1/2} Q^l`
/// on `D_{beta^2,1} x D_{0,1}^{n-2}`, for `s = 1..s_max`. With `u_form` (only
/// `n = 3`) both sides are divided by `x_1 = u_1`, matching
/// `u_1^{(p^s-3)/2} T^{1,s}(u_2)` against `omega(beta) u_1^{-3/2} T^1(u_2)`;
/// the valuations are the same because `u_1` is a unit.
pub fn converge_q_general(spec: &ConvergenceSpec, u_form: bool) -> Result<ConvergenceReport> {
    let ConvergenceSpec { p, n, l, s_max, samples, seed, precision: prec, beta } = *spec;
    if u_form && (n != 3 || l != 1) {
        return Err(KzError::InvalidParameter(String::from("the u-form comparison needs n = 3, l = 1")));
    }
    let beta = beta % p;
    if beta == 0 {
        return Err(KzError::InvalidParameter(String::from("beta must be a unit")));
    }
    let alpha = beta * beta % p;
    let needed = s_max + 2;
    if prec < needed {
        return Err(KzError::PrecisionExhausted { needed, available: prec });
    }
    let cutoff = prec as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x1s = sample_with(p, DiscSpec::residue(alpha), samples, prec, &mut rng)?;
    let rest: Vec<Vec<PAdicNumber>> = (0..samples)
        .map(|_| sample_with(p, DiscSpec::residue(0), n - 2, prec, &mut rng))
        .collect::<Result<_>>()?;
    let series = t_l_series(p, n, l, cutoff, prec)?;
    let longer = t_l_series(p, n, l, cutoff + 1, prec)?;
    let omega = teichmuller(&PAdicNumber::new(p, prec, beta)?);

    // series side, shared by every level
    let series_vals: Vec<(Vec<PAdicNumber>, bool)> = par::map_indexed(samples, |i| {
        let x1 = x1s[i];
        let root = hensel_sqrt(&x1, beta)?;
        let mut pre = omega.mul(&root.inverse()?);
        if u_form {
            pre = pre.mul(&x1.inverse()?);
        }
        let q = series.eval_x(&rest[i])?;
        let q_long = longer.eval_x(&rest[i])?;
        let tail_ok = q.iter().zip(&q_long).all(|(a, b)| a.sub(b).valuation().certifies((cutoff as u32 + 1).min(prec)));
        Ok((q.iter().map(|c| c.mul(&pre)).collect(), tail_ok))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let tail_ok = series_vals.iter().all(|(_, ok)| *ok);

    let mut rows = Vec::with_capacity(s_max as usize);
    let mut precision_ok = true;
    for s in 1..=s_max {
        let inst = KZInstance::new(p, s, n)?;
        let trunc = t_ls_closed_form(&inst, l)?;
        let half = inst.ctx.half;
        let max_xdeg = trunc
            .components
            .iter()
            .flat_map(|c| c.terms.iter().map(move |t| (c.j, t)))
            .map(|(j, t)| crate::asymptotic::series_x_exponents(n, l, j, &t.a).iter().sum::<u64>())
            .max()
            .unwrap_or(0);
        let per_sample: Vec<(Valuation, u32)> = par::map_indexed(samples, |i| {
            let x1 = x1s[i];
            let mut pre = x1.pow(half);
            if u_form {
                pre = pre.mul(&x1.inverse()?);
            }
            let q = trunc.eval_x(&rest[i])?;
            let diff: Vec<PAdicNumber> = q.iter().zip(&series_vals[i].0).map(|(a, b)| a.mul(&pre).sub(b)).collect();
            let xv: Vec<u32> = rest[i].iter().map(|x| x.valuation().lower_bound()).collect();
            // prefactor part: |x_1^{(p^s-1)/2} - omega(beta) x_1^{-1/2}| <= p^{-(s+1)}
            let mut bound = (s + 1) as u64;
            for c in &series.components {
                for t in &c.terms {
                    if let Some(cb) = coefficient_bound(s, n, c.j, &t.a) {
                        bound = bound.min(x_valuation_bound(&series, c.j, &t.a, &xv) + cb as u64);
                    }
                }
            }
            if max_xdeg > cutoff {
                bound = bound.min(cutoff + 1);
            }
            Ok((min_valuation(&diff, prec), bound.min(prec as u64) as u32))
        })
        .into_iter()
        .collect::<Result<_>>()?;
        let valuations: Vec<Valuation> = per_sample.iter().map(|v| v.0).collect();
        let bounds: Vec<u32> = per_sample.iter().map(|v| v.1).collect();
        precision_ok &= bounds.iter().all(|&b| b < prec);
        let worst = valuations.iter().copied().fold(Valuation::AtLeast(prec), Valuation::min);
        let within_bound = valuations.iter().zip(&bounds).all(|(v, &b)| v.certifies(b));
        let constant_distance = constant_distance(&inst, l, &series)?;
        rows.push(LevelRow { s, valuations, bounds, worst, constant_distance, within_bound });
    }
    let strictly_decreasing = rows.windows(2).all(|w| {
        w[0].valuations.iter().zip(&w[1].valuations).all(|(a, b)| match (a, b) {
            (Valuation::Finite(x), Valuation::Finite(y)) => y > x,
            (Valuation::Finite(x), Valuation::AtLeast(y)) => y > x,
            _ => false,
        })
    });
    let pass = rows.iter().all(|r| r.within_bound) && tail_ok && precision_ok;
    Ok(ConvergenceReport {
        p,
        n,
        l,
        alpha,
        beta,
        sample_count: samples,
        seed,
        precision: prec,
        cutoff,
        rows,
        strictly_decreasing,
        tail_ok,
        precision_ok,
        pass,
    })
}

fn constant_distance(inst: &KZInstance, l: u64, series: &SeriesTruncation<PAdicNumber>) -> Result<Valuation> {
    let prec = series.precision.unwrap_or(1);
    let zero = PAdicNumber::zero(inst.p(), prec)?;
    let h = inst.n - 2 * l as usize;
    let expected = crate::asymptotic::constant_term(inst, l)?;
    let diffs: Vec<PAdicNumber> = series
        .components
        .iter()
        .zip(&expected)
        .map(|(c, e)| {
            let t = c.terms.iter().find(|t| t.a.iter().enumerate().all(|(i, &x)| x == 0 || i + 1 == h));
            zero.like_bigint(e).sub(&t.map_or(zero, |t| t.c))
        })
        .collect();
    Ok(min_valuation(&diffs, prec))
}

/// The `n = 3` experiment in the `u`-form: `u_1 in D_{1,1}`, `u_2 in D_{0,1}`.
pub fn converge_t_n3(p: u64, s_max: u32, samples: usize, seed: u64, prec: u32) -> Result<ConvergenceReport> {
    let spec = ConvergenceSpec { precision: prec, ..ConvergenceSpec::new(p, 3, 1, s_max, samples, seed) };
    converge_q_general(&spec, true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisjointReport {
    pub p: u64,
    pub points: usize,
    pub seed: u64,
    pub in_first: usize,
    pub in_second: usize,
    pub in_both: usize,
    pub reason: String,
    pub pass: bool,
}

fn in_square_disc(t: &QpElement, p: u64) -> bool {
    t.valuation == 0 && is_nonzero_square_mod_p(t.unit.digit0(), p)
}

/// For `n = 5`: the domain `{u_1^3 u_2^2 u_3 in D_{alpha,1}; u_2 u_3, u_3, u_4 in D_{0,1}}`
/// of the `l = 1` limit and `{u_1 in D_{gamma,1}; u_2, u_2 u_3, u_2 u_3 u_4 in D_{0,1}}`
/// of the `l = 2` limit (`alpha`, `gamma` nonzero squares) never meet.
/// Valuations are drawn from `-2..=2` so each predicate alone is common.
pub fn disjoint_domains(p: u64, points: usize, seed: u64) -> Result<DisjointReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut in_first, mut in_second, mut in_both) = (0, 0, 0);
    for _ in 0..points {
        let u: Vec<QpElement> = (0..4)
            .map(|_| {
                let unit = PAdicNumber::new(p, 4, rng.gen_range(1..p) + p * rng.gen_range(0..p * p * p))?;
                Ok(QpElement { valuation: rng.gen_range(-2..=2), unit })
            })
            .collect::<Result<_>>()?;
        let first = in_square_disc(&u[0].pow(3).mul(&u[1].pow(2)).mul(&u[2]), p)
            && u[1].mul(&u[2]).in_residue_disc(0)
            && u[2].in_residue_disc(0)
            && u[3].in_residue_disc(0);
        let second = in_square_disc(&u[0], p)
            && u[1].in_residue_disc(0)
            && u[1].mul(&u[2]).in_residue_disc(0)
            && u[1].mul(&u[2]).mul(&u[3]).in_residue_disc(0);
        in_first += usize::from(first);
        in_second += usize::from(second);
        in_both += usize::from(first && second);
    }
    let reason = String::from(
        "the second domain forces v(u_1) = 0 and v(u_2) >= 1, the first forces v(u_3) >= 1, \
         so v(u_1^3 u_2^2 u_3) >= 3 contradicts the unit condition of the first",
    );
    Ok(DisjointReport { p, points, seed, in_first, in_second, in_both, reason, pass: in_both == 0 && in_first > 0 && in_second > 0 })
}

/// One coefficient of the elliptic example.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicRow {
    pub k: u64,
    /// `binom((p^s-1)/2, k)^2`.
    pub truncated: Decimal,
    /// `v(binom(-1/2,k)^2 - binom((p^s-1)/2,k)^2)`; `None` when they are equal.
    pub valuation: Option<u32>,
    pub congruent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicLevel {
    pub s: u32,
    pub rows: Vec<ClassicRow>,
    /// Indices `k` where the coefficients differ modulo `p^s`.
    pub failing: Vec<u64>,
    /// `v(difference) + k >= s` for all `k`: the partial sums agree modulo
    /// `p^s` as functions on `|z|_p < 1`.
    pub congruent_on_disc: bool,
    pub congruent_coefficientwise: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicReport {
    pub p: u64,
    pub levels: Vec<ClassicLevel>,
    pub pass: bool,
}

/// `sum_{k <= (p^s-1)/2} binom(-1/2, k)^2 z^k` against
/// `sum binom((p^s-1)/2, k)^2 z^k` modulo `p^s`, coefficient by coefficient.
pub fn classic(p: u64, s_max: u32) -> Result<ClassicReport> {
    let mut levels = Vec::new();
    for s in 1..=s_max {
        let ps = BigInt::from(checked_modulus(p, s)?);
        let half = (checked_modulus(p, s)? - 1) / 2;
        let mut rows = Vec::new();
        for k in 0..=half {
            let (num, den) = binom_half_exact(0, k);
            let t = binom(half, k);
            // den is prime to p, so num^2/den^2 - t^2 has the valuation of num^2 - t^2 den^2
            let diff = &num * &num - &t * &t * &den * &den;
            let valuation = if diff.is_zero() { None } else { vp(&diff, p) };
            let congruent = (&diff % &ps).is_zero();
            rows.push(ClassicRow { k, truncated: Decimal(&t * &t), valuation, congruent });
        }
        let failing: Vec<u64> = rows.iter().filter(|r| !r.congruent).map(|r| r.k).collect();
        let congruent_on_disc = rows.iter().all(|r| r.valuation.is_none_or(|v| v as u64 + r.k >= s as u64));
        levels.push(ClassicLevel { s, congruent_coefficientwise: failing.is_empty(), rows, failing, congruent_on_disc });
    }
    let pass = levels.iter().all(|l| l.congruent_coefficientwise);
    Ok(ClassicReport { p, levels, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_lie_in_their_discs() {
        let a = sample_disc(5, DiscSpec::residue(0), 20, 3, 12).unwrap();
        assert!(a.iter().all(|t| t.valuation().lower_bound() >= 1));
        let b = sample_disc(5, DiscSpec::residue(1), 20, 3, 12).unwrap();
        assert!(b.iter().all(|t| t.digit0() == 1));
        assert_eq!(b, sample_disc(5, DiscSpec::residue(1), 20, 3, 12).unwrap());
    }

    #[test]
    fn documented_power_difference() {
        let t = PAdicNumber::new(5, 12, 2).unwrap();
        let d = t.pow(25).sub(&t.pow(5));
        assert_eq!(d.valuation(), Valuation::Finite(2));
        assert_eq!(crate::binomial::vp(&BigInt::from(33554400u64), 5), Some(2));
        let rep = check_xps_convergence(5, 2, &[t], 4).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn half_powers_split_by_class() {
        let sq = sample_disc(5, DiscSpec::residue(4), 10, 1, 10).unwrap();
        assert!(check_half_powers(5, 4, &sq, 4).unwrap().pass);
        let ns = sample_disc(5, DiscSpec::residue(2), 10, 1, 10).unwrap();
        let rep = check_half_powers(5, 2, &ns, 4).unwrap();
        assert!(!rep.square && rep.pass);
    }

    #[test]
    fn bin_bound_examples() {
        let r = check_bin_bound(5, 0, 0, 3, (1, 3), 10).unwrap();
        let row = r.rows.iter().find(|r| r.s == 2 && r.a == 1).unwrap();
        assert_eq!(row.valuation, Valuation::Finite(2));
        let row = r.rows.iter().find(|r| r.s == 2 && r.a == 2).unwrap();
        assert_eq!(row.bound, 0);
        assert!(r.pass && r.empirical_s0 == Some(1));
        let r = check_bin_bound(5, 1, 0, 0, (1, 3), 10).unwrap();
        assert!(r.rows.iter().all(|r| r.valuation == Valuation::AtLeast(10)));
    }

    #[test]
    fn n3_small_run() {
        let rep = converge_t_n3(5, 2, 10, 11, 10).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.rows[0].constant_distance, Valuation::Finite(1));
        assert_eq!(rep.rows[1].constant_distance, Valuation::Finite(2));
    }

    #[test]
    fn classic_levels() {
        let rep = classic(5, 2).unwrap();
        assert!(rep.levels[0].congruent_coefficientwise);
        assert_eq!(rep.levels[1].failing, [5, 6, 7, 10, 11, 12]);
        assert!(rep.levels[1].congruent_on_disc);
    }
}
