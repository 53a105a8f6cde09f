//! Truncated and series forms of `T^l` and their `x`-coordinate versions.
//!
//! Component `j` of `T^{l,s}` (or `T^l`) is a sum over `a = (a_1..a_{n-1})`
//! with `a_1 + ... + a_h = a_{h+1} + ... + a_{n-1} + c_j`, `h = n - 2l`, where
//! `c_j = l - 1` for `j <= h` and `c_j = l` otherwise. Slot `j` (for `j < n`)
//! carries `binom(-3/2, a_j)` and every other slot `binom(-1/2, a_i)`; the
//! truncation uses `(p^s - 3)/2` and `(p^s - 1)/2` instead.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{check_l, constant_term, hat_solution, prefactor, UCoordinates};
use crate::binomial::binom;
use crate::decimal::Decimal;
use crate::kz::KZInstance;
use crate::padic::{binom_half, PAdicNumber, Valuation};
use crate::poly::{IntPolynomial, Monomial, PolyVector, Vars};
use crate::{KzError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesTerm<V> {
    pub a: Vec<u64>,
    pub c: V,
}

/// One component `j` (1-based) with its index constraint offset `c_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentSeries<V> {
    pub j: usize,
    pub offset: u64,
    pub terms: Vec<SeriesTerm<V>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesTruncation<V> {
    pub p: u64,
    /// Level of a truncation; absent for the series.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    pub n: usize,
    pub l: u64,
    /// Bound on `sum_{i != h} a_i`, the total degree in `x_2..x_{n-1}`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    pub components: Vec<ComponentSeries<V>>,
}

fn split(n: usize, l: u64) -> usize {
    n - 2 * l as usize
}

fn offset(n: usize, l: u64, j: usize) -> u64 {
    if j <= split(n, l) { l - 1 } else { l }
}

/// All `a` satisfying the constraint of component `j`, lexicographic in the
/// free slots (every slot but `h`). `each` bounds every `a_i`, `cutoff` the
/// sum of the free slots.
fn indices(n: usize, l: u64, j: usize, each: Option<u64>, cutoff: Option<u64>) -> Vec<Vec<u64>> {
    let h = split(n, l);
    let free: Vec<usize> = (1..n).filter(|&i| i != h).collect();
    let c = offset(n, l, j) as i64;
    let mut out = Vec::new();
    let mut a = vec![0u64; n - 1];
    fn rec(
        free: &[usize],
        at: usize,
        used: u64,
        a: &mut Vec<u64>,
        h: usize,
        c: i64,
        each: Option<u64>,
        cutoff: Option<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if at == free.len() {
            let lo: i64 = (1..h).map(|i| a[i - 1] as i64).sum();
            let hi: i64 = (h + 1..=a.len()).map(|i| a[i - 1] as i64).sum();
            let ah = hi + c - lo;
            if ah >= 0 && each.is_none_or(|e| ah as u64 <= e) {
                a[h - 1] = ah as u64;
                out.push(a.clone());
                a[h - 1] = 0;
            }
            return;
        }
        let mut top = each.unwrap_or(u64::MAX);
        if let Some(d) = cutoff {
            top = top.min(d - used);
        }
        for x in 0..=top {
            a[free[at] - 1] = x;
            rec(free, at + 1, used + x, a, h, c, each, cutoff, out);
        }
        a[free[at] - 1] = 0;
    }
    rec(&free, 0, 0, &mut a, h, c, each, cutoff, &mut out);
    out
}

/// Exponents of `u_1..u_{n-1}` carried by the index `a` of component `j`,
/// including the factor `u_{j+1} ... u_h` (empty for `j >= h`).
pub(crate) fn u_exponents(n: usize, l: u64, j: usize, a: &[u64]) -> Vec<u64> {
    let h = split(n, l);
    let mut e = vec![0u64; n - 1];
    for i in 1..h {
        for k in i + 1..=h {
            e[k - 1] += a[i - 1];
        }
    }
    for k in 1..2 * l as usize {
        for m in h + 1..=h + k {
            e[m - 1] += a[h + k - 1];
        }
    }
    if j < h {
        for k in j + 1..=h {
            e[k - 1] += 1;
        }
    }
    e
}

/// Exponents of `x_2..x_{n-1}` for the index `a` of component `j`.
pub(crate) fn x_exponents(n: usize, l: u64, j: usize, a: &[u64]) -> Vec<u64> {
    let h = split(n, l);
    let mut e = vec![0u64; n - 2];
    // x_k sits at position k - 2
    for i in 1..h {
        e[i - 1] += a[i - 1];
    }
    for i in h + 1..n {
        e[i - 2] += a[i - 1];
    }
    if j < h {
        e[j - 1] += 1;
    }
    e
}

/// `u`-exponents of `x_1, ..., x_{n-1}`: `x_1 = prod_{i<=h} u_1...u_i`,
/// `x_k = u_k...u_h` for `2 <= k <= h` and `x_{h+k} = u_{h+1}...u_{h+k}`.
pub fn x_dictionary(n: usize, l: u64) -> Vec<Vec<u32>> {
    let h = split(n, l);
    let mut rows = Vec::with_capacity(n - 1);
    rows.push((1..n).map(|k| if k <= h { (h - k + 1) as u32 } else { 0 }).collect());
    for k in 2..=h {
        rows.push((1..n).map(|m| u32::from(m >= k && m <= h)).collect());
    }
    for k in 1..2 * l as usize {
        rows.push((1..n).map(|m| u32::from(m > h && m <= h + k)).collect());
    }
    rows
}

fn monomial(e: &[u64]) -> Result<Monomial> {
    let e: Vec<u32> = e.iter().map(|&x| u32::try_from(x).map_err(|_| KzError::ExponentOverflow)).collect::<Result<_>>()?;
    Monomial::from_exponents(&e)
}

pub fn x_vars(n: usize) -> Vars {
    Vars::new((2..n).map(|i| format!("x{i}"))).expect("n - 2 fits in the monomial packing")
}

impl<V> SeriesTruncation<V> {
    /// Total number of stored terms.
    pub fn len(&self) -> usize {
        self.components.iter().map(|c| c.terms.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every stored index satisfies the constraint of its component.
    pub fn support_ok(&self) -> bool {
        let h = split(self.n, self.l);
        self.components.iter().all(|c| {
            c.offset == offset(self.n, self.l, c.j)
                && c.terms.iter().all(|t| {
                    let lo: u64 = t.a[..h].iter().sum();
                    let hi: u64 = t.a[h..].iter().sum();
                    lo == hi + c.offset
                })
        })
    }
}

impl SeriesTruncation<Decimal> {
    fn to_vector(&self, vars: &Vars, exps: impl Fn(usize, &[u64]) -> Vec<u64>) -> Result<PolyVector> {
        let entries = self
            .components
            .iter()
            .map(|c| {
                let mut f = IntPolynomial::zero(vars);
                for t in &c.terms {
                    f.add_term(monomial(&exps(c.j, &t.a))?, t.c.0.clone());
                }
                Ok(f)
            })
            .collect::<Result<Vec<_>>>()?;
        PolyVector::new(vars, entries)
    }

    /// `T^{l,s}(u)` over `u_1..u_{n-1}`.
    pub fn to_u_vector(&self) -> Result<PolyVector> {
        self.to_vector(&UCoordinates { n: self.n }.vars(), |j, a| u_exponents(self.n, self.l, j, a))
    }

    /// `Q^{l,s}(x_2, ..., x_{n-1})`.
    pub fn to_x_vector(&self) -> Result<PolyVector> {
        self.to_vector(&x_vars(self.n), |j, a| x_exponents(self.n, self.l, j, a))
    }
}

/// Conversion of stored coefficients into `Z / p^N`.
pub trait PAdicCoefficient {
    fn to_padic(&self, like: &PAdicNumber) -> PAdicNumber;
}

impl PAdicCoefficient for Decimal {
    fn to_padic(&self, like: &PAdicNumber) -> PAdicNumber {
        like.like_bigint(&self.0)
    }
}

impl PAdicCoefficient for PAdicNumber {
    fn to_padic(&self, _like: &PAdicNumber) -> PAdicNumber {
        *self
    }
}

impl<V: PAdicCoefficient> SeriesTruncation<V> {
    /// Value of `Q(x_2, ..., x_{n-1})` at a p-adic point, component by
    /// component, accumulated in stored order.
    pub fn eval_x(&self, x: &[PAdicNumber]) -> Result<Vec<PAdicNumber>> {
        if x.len() != self.n - 2 {
            return Err(KzError::SizeMismatch { expected: self.n - 2, got: x.len() });
        }
        let zero = x.first().map(|t| t.like_i64(0)).ok_or(KzError::SizeMismatch { expected: 1, got: 0 })?;
        Ok(self
            .components
            .iter()
            .map(|c| {
                c.terms.iter().fold(zero, |acc, t| {
                    let e = x_exponents(self.n, self.l, c.j, &t.a);
                    let m = e.iter().zip(x).fold(t.c.to_padic(&zero), |m, (&k, xi)| m.mul(&xi.pow(k)));
                    acc.add(&m)
                })
            })
            .collect())
    }
}

/// `T^{l,s}` from the closed binomial formula, every `a_i <= (p^s - 1)/2`.
pub fn t_ls_closed_form(inst: &KZInstance, l: u64) -> Result<SeriesTruncation<Decimal>> {
    check_l(inst, l)?;
    let (n, half) = (inst.n, inst.ctx.half);
    let components = (1..=n)
        .map(|j| {
            let terms = indices(n, l, j, Some(half), None)
                .into_iter()
                .filter_map(|a| {
                    let c = a.iter().enumerate().fold(BigInt::one(), |acc, (i, &ai)| {
                        let top = if i + 1 == j { half - 1 } else { half };
                        acc * binom(top, ai)
                    });
                    (!c.is_zero()).then_some(SeriesTerm { a, c: Decimal(c) })
                })
                .collect();
            ComponentSeries { j, offset: offset(n, l, j), terms }
        })
        .collect();
    Ok(SeriesTruncation { p: inst.p(), s: Some(inst.s()), n, l, cutoff: None, precision: None, components })
}

/// `T^l` with coefficients `binom(-3/2, a_j) prod binom(-1/2, a_i)` in `Z_p`
/// modulo `p^prec`, for all indices of `x`-degree at most `cutoff`.
pub fn t_l_series(p: u64, n: usize, l: u64, cutoff: u64, prec: u32) -> Result<SeriesTruncation<PAdicNumber>> {
    let inst = KZInstance::new(p, 1, n)?;
    check_l(&inst, l)?;
    let one = PAdicNumber::one(p, prec)?;
    let mut components = Vec::with_capacity(n);
    for j in 1..=n {
        let mut terms = Vec::new();
        for a in indices(n, l, j, None, Some(cutoff)) {
            let mut c = one;
            for (i, &ai) in a.iter().enumerate() {
                c = c.mul(&binom_half(p, u64::from(i + 1 == j), ai, prec)?);
            }
            terms.push(SeriesTerm { a, c });
        }
        components.push(ComponentSeries { j, offset: offset(n, l, j), terms });
    }
    Ok(SeriesTruncation { p, s: None, n, l, cutoff: Some(cutoff), precision: Some(prec), components })
}

/// Predicted exponent `e` with `|T^{l,s}_a - T^l_a|_p <= p^{-e}`: the
/// minimum over nonzero slots of `s - ceil(d_i) - a_i`, where `ceil(d_i)` is
/// `1` on the `-3/2` slot and `0` elsewhere. `None` when every slot is zero
/// and the two coefficients coincide.
pub fn coefficient_bound(s: u32, n: usize, j: usize, a: &[u64]) -> Option<u32> {
    a.iter()
        .enumerate()
        .filter(|(_, &ai)| ai > 0)
        .map(|(i, &ai)| {
            let d = u64::from(i + 1 == j && j < n);
            (s as u64).saturating_sub(d + ai) as u32
        })
        .min()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrespondenceTerm {
    pub j: usize,
    pub a: Vec<u64>,
    pub bound: u32,
    pub valuation: Valuation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrespondenceReport {
    pub p: u64,
    pub s: u32,
    pub n: usize,
    pub l: u64,
    pub cutoff: u64,
    pub precision: u32,
    pub terms_checked: usize,
    /// The truncation has no index outside `0..=(p^s-1)/2` per slot.
    pub range_ok: bool,
    /// Valuation of `C^{l,s}` minus the constant of `T^l`, per component.
    pub constant_distance: Vec<Valuation>,
    pub violations: Vec<CorrespondenceTerm>,
    pub pass: bool,
}

/// Compares `T^{l,s}` with `T^l` index by index up to `x`-degree `cutoff`:
/// both come from the same index sets with `-1/2 -> (p^s-1)/2`, and each
/// coefficient pair agrees to the predicted power of `p`.
pub fn truncation_correspondence(inst: &KZInstance, l: u64, cutoff: u64, prec: u32) -> Result<CorrespondenceReport> {
    check_l(inst, l)?;
    let (n, s, half) = (inst.n, inst.s(), inst.ctx.half);
    if cutoff > half {
        return Err(KzError::InvalidParameter(format!("cutoff {cutoff} exceeds (p^s - 1)/2 = {half}")));
    }
    let trunc = t_ls_closed_form(inst, l)?;
    let series = t_l_series(inst.p(), n, l, cutoff, prec)?;
    let zero = PAdicNumber::zero(inst.p(), prec)?;
    let range_ok = trunc.components.iter().all(|c| c.terms.iter().all(|t| t.a.iter().all(|&x| x <= half)));
    let mut violations = Vec::new();
    let mut terms_checked = 0;
    for (tc, sc) in trunc.components.iter().zip(&series.components) {
        for st in &sc.terms {
            let tv = tc.terms.iter().find(|t| t.a == st.a).map_or(zero, |t| t.c.to_padic(&zero));
            let v = tv.sub(&st.c).valuation();
            let bound = coefficient_bound(s, n, sc.j, &st.a).unwrap_or(prec).min(prec);
            terms_checked += 1;
            if !v.certifies(bound) {
                violations.push(CorrespondenceTerm { j: sc.j, a: st.a.clone(), bound, valuation: v });
            }
        }
    }
    let expected = constant_term(inst, l)?;
    let constant_distance: Vec<Valuation> = series
        .components
        .iter()
        .zip(&expected)
        .map(|(c, e)| {
            let sv = c.terms.iter().find(|t| t.a[..].iter().enumerate().all(|(i, &x)| x == 0 || i + 1 == split(n, l)));
            let sv = sv.map_or(zero, |t| t.c);
            zero.like_bigint(e).sub(&sv).valuation()
        })
        .collect();
    let pass = range_ok && violations.is_empty();
    Ok(CorrespondenceReport {
        p: inst.p(),
        s,
        n,
        l,
        cutoff,
        precision: prec,
        terms_checked,
        range_ok,
        constant_distance,
        violations,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QFormReport {
    pub p: u64,
    pub s: u32,
    pub n: usize,
    pub l: u64,
    /// Row `k` holds the `u`-exponents of `x_{k+1}`.
    pub dictionary: Vec<Vec<u32>>,
    /// `Q^{l,s}` under the dictionary equals `T^{l,s}`.
    pub matches_t: bool,
    /// `x_1^{(p^s-1)/2} Q^{l,s}` equals `(u_1...u_h)^l (-1)^{delta_l} hat I`.
    pub matches_hat: bool,
    pub constant_ok: bool,
    pub support_ok: bool,
    pub pass: bool,
}

fn apply_dictionary(q: &PolyVector, dict: &[Vec<u32>], u: &Vars, x1_power: u32) -> Result<PolyVector> {
    let nx = q.vars().len();
    q.try_map(|e| {
        e.map_monomials(u, |m| {
            let mut out = vec![0u32; u.len()];
            for (k, row) in dict.iter().enumerate() {
                let ex = if k == 0 { x1_power } else if k - 1 < nx { m.exponent(k - 1) } else { 0 };
                for (o, &r) in out.iter_mut().zip(row) {
                    *o += ex * r;
                }
            }
            Monomial::from_exponents(&out)
        })
    })
}

/// Checks the `x`-coordinate form of the truncation against the `u`-form
/// and against the hat-solution itself.
pub fn q_form_check(inst: &KZInstance, l: u64) -> Result<QFormReport> {
    let n = inst.n;
    let h = split(n, l);
    let trunc = t_ls_closed_form(inst, l)?;
    let q = trunc.to_x_vector()?;
    let t = trunc.to_u_vector()?;
    let u = t.vars().clone();
    let dict = x_dictionary(n, l);
    let matches_t = apply_dictionary(&q, &dict, &u, 0)? == t;
    let half = u32::try_from(inst.ctx.half).map_err(|_| KzError::ExponentOverflow)?;
    let j = apply_dictionary(&q, &dict, &u, half)?;
    let pre = prefactor(inst, l)?;
    let lift: Vec<u32> = (1..n).map(|k| if k <= h { l as u32 } else { 0 }).collect();
    let lift = Monomial::from_exponents(&lift)?;
    let hat = hat_solution(inst, l)?;
    let matches_hat = hat.try_map(|e| e.mul_monomial(lift, &pre.sign()))? == j;
    let constant_ok = q.coefficients_at(&Monomial::ONE) == constant_term(inst, l)?;
    let support_ok = trunc.support_ok();
    Ok(QFormReport {
        p: inst.p(),
        s: inst.s(),
        n,
        l,
        dictionary: dict,
        matches_t,
        matches_hat,
        constant_ok,
        support_ok,
        pass: matches_t && matches_hat && constant_ok && support_ok,
    })
}

/// The `n = 3` triple written out directly:
/// `(-1)^{(p^s-3)/2} u_1^{(p^s-3)/2} sum_a (b(m-1,a) b(m,a), b(m,a+1) b(m-1,a), b(m,a+1) b(m,a)) u_2^a`
/// with `m = (p^s-1)/2`. Returns the sign, the `u_1` exponent and the triples.
pub fn n3_triples(inst: &KZInstance) -> Result<(bool, u64, Vec<[BigInt; 3]>)> {
    if inst.n != 3 {
        return Err(KzError::InvalidParameter(String::from("the explicit triple form needs n = 3")));
    }
    let m = inst.ctx.half;
    let ps = inst.ctx.modulus;
    let triples = (0..m)
        .map(|a| {
            [binom(m - 1, a) * binom(m, a), binom(m, a + 1) * binom(m - 1, a), binom(m, a + 1) * binom(m, a)]
        })
        .collect();
    Ok((((ps - 3) / 2) % 2 == 1, (ps - 3) / 2, triples))
}
