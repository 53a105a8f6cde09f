//! Cartier-Manin matrices of `y^2 = (x - z_1)...(x - z_n)` and the action of
//! multiplication by `p` on the graded solution generators, all modulo `p`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::Serialize;

use crate::kz::KZInstance;
use crate::modpoly::{vector_from_int, ModPoly};
use crate::poly::{IntPolynomial, Vars};
use crate::solutions::{generator, product_coefficient};
use crate::{par, KzError, Result};

/// `C_i^j(z)`, the coefficient of `x^{jp-1}` in `x^{i-1} f(x)^{(p-1)/2}`,
/// reduced into `[0, p)`. Rows are `i`, columns `j`, both `1..=g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartierMatrix {
    pub p: u64,
    pub n: usize,
    pub g: usize,
    pub entries: Vec<Vec<IntPolynomial>>,
}

impl CartierMatrix {
    /// Expected degree `i + (g - j) p + (p - n)/2` of entry `(i, j)`.
    pub fn expected_degree(&self, i: usize, j: usize) -> i64 {
        i as i64 + (self.g as i64 - j as i64) * self.p as i64 + (self.p as i64 - self.n as i64) / 2
    }

    /// Every nonzero entry is homogeneous of the expected degree.
    pub fn degrees_ok(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, e)| {
                let d = self.expected_degree(i + 1, j + 1);
                e.is_zero() || (d >= 0 && e.is_homogeneous_of_degree(d as u64))
            })
        })
    }

    /// `C(z^q)`: every exponent multiplied by `q`.
    pub fn twist(&self, q: u32) -> Result<CartierMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().map(|e| e.scale_exponents(q)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(CartierMatrix { entries, ..self.clone() })
    }

    /// Entrywise `C(z)^p = C(z^p)` modulo `p` (Frobenius on `F_p[z]`).
    pub fn frobenius_consistent(&self) -> Result<bool> {
        let p = self.p;
        let twisted = self.twist(p as u32)?;
        for (row, trow) in self.entries.iter().zip(&twisted.entries) {
            for (e, t) in row.iter().zip(trow) {
                let mut acc = ModPoly::constant(1, p);
                let base = ModPoly::from_int(e, p);
                for _ in 0..p {
                    acc = acc.mul(&base, p)?;
                }
                if acc != ModPoly::from_int(t, p) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn to_mod(&self) -> Vec<Vec<ModPoly>> {
        self.entries.iter().map(|row| vector_from_int(row, self.p)).collect()
    }
}

pub fn cartier_matrix(p: u64, n: usize) -> Result<CartierMatrix> {
    // the instance validates p and n; the level is irrelevant here
    let inst = KZInstance::new(p, 1, n)?;
    let g = inst.g;
    let vars = inst.z_vars();
    let roots: Vec<_> = (0..n).map(Some).collect();
    let exps = alloc::vec![(p - 1) / 2; n];
    let pb = num_bigint::BigInt::from(p);
    let entries = par::map_indexed(g, |i| {
        (1..=g)
            .map(|j| {
                let k = (j as u64 * p - 1) as i64 - i as i64;
                product_coefficient(&vars, &roots, &exps, k).map(|c| c.reduce_mod(&pb))
            })
            .collect::<Result<Vec<_>>>()
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(CartierMatrix { p, n, g, entries })
}

fn mat_mul(a: &[Vec<ModPoly>], b: &[Vec<ModPoly>], p: u64) -> Result<Vec<Vec<ModPoly>>> {
    let g = a.len();
    let mut out = alloc::vec![alloc::vec![ModPoly::default(); g]; g];
    for i in 0..g {
        for j in 0..g {
            for k in 0..g {
                out[i][j].add_product(&a[i][k], &b[k][j], 1, p)?;
            }
        }
    }
    Ok(out)
}

/// `C(z^{p^{t-m}}) C(z^{p^{t-m+1}}) ... C(z^{p^{t-1}})` modulo `p`: the order
/// in which the factors compose when row vectors of generators are carried
/// from level `t` down to level `t - m`.
pub fn iterated_product(c: &CartierMatrix, t: u32, m: u32) -> Result<CartierMatrix> {
    if m == 0 || m >= t {
        return Err(KzError::InvalidParameter(format!("need 0 < m < t (m = {m}, t = {t})")));
    }
    let p = c.p;
    let mut acc: Option<Vec<Vec<ModPoly>>> = None;
    for e in t - m..t {
        let q = u32::try_from(p.pow(e)).map_err(|_| KzError::ExponentOverflow)?;
        let f = c.twist(q)?.to_mod();
        acc = Some(match acc {
            None => f,
            Some(a) => mat_mul(&a, &f, p)?,
        });
    }
    let vars = c.entries[0][0].vars().clone();
    let entries = acc
        .expect("at least one factor")
        .iter()
        .map(|row| row.iter().map(|e| e.to_int(&vars)).collect())
        .collect();
    Ok(CartierMatrix { entries, ..c.clone() })
}

/// The first disagreement of two vectors of residues.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub component: usize,
    pub monomial: String,
    pub left: u64,
    pub right: u64,
}

fn first_mismatch(left: &[ModPoly], right: &[ModPoly], vars: &Vars) -> Option<Mismatch> {
    for (c, (a, b)) in left.iter().zip(right).enumerate() {
        if a == b {
            continue;
        }
        let m = a.terms.keys().chain(b.terms.keys()).copied().filter(|m| a.terms.get(m) != b.terms.get(m)).min()?;
        return Some(Mismatch {
            component: c + 1,
            monomial: IntPolynomial::monomial(vars, m, 1).to_string(),
            left: a.terms.get(&m).copied().unwrap_or(0),
            right: b.terms.get(&m).copied().unwrap_or(0),
        });
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub l: u64,
    pub holds: bool,
    pub first_mismatch: Option<Mismatch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradingReport {
    pub p: u64,
    pub n: usize,
    pub t: u32,
    pub matrix: CartierMatrix,
    pub degrees_ok: bool,
    pub relations: Vec<RelationCheck>,
    pub pass: bool,
}

/// `sum_m I^{[m p^{r} - 1]} M_{m,l}` modulo `p`, for each `l`.
fn combine(inst: &KZInstance, r: u32, mat: &[Vec<ModPoly>]) -> Result<Vec<Vec<ModPoly>>> {
    let (p, n, g) = (inst.p(), inst.n, inst.g);
    let gens: Vec<Vec<ModPoly>> = (1..=g as u64)
        .map(|m| generator(inst, r, m).map(|rec| vector_from_int(rec.vector.entries(), p)))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(g);
    for l in 0..g {
        let mut acc = alloc::vec![ModPoly::default(); n];
        for (m, gen) in gens.iter().enumerate() {
            for (a, e) in acc.iter_mut().zip(gen) {
                a.add_product(e, &mat[m][l], 1, p)?;
            }
        }
        out.push(acc);
    }
    Ok(out)
}

fn compare(inst: &KZInstance, top: u32, rhs: Vec<Vec<ModPoly>>) -> Result<Vec<RelationCheck>> {
    let p = inst.p();
    let vars = inst.z_vars();
    (1..=inst.g as u64)
        .zip(rhs)
        .map(|(l, r)| {
            let lhs = vector_from_int(generator(inst, top, l)?.vector.entries(), p);
            let first_mismatch = first_mismatch(&lhs, &r, &vars);
            Ok(RelationCheck { l, holds: first_mismatch.is_none(), first_mismatch })
        })
        .collect()
}

/// `I^{[l p^t - 1]} = sum_m I^{[m p^{t-1} - 1]} C_m^l(z^{p^{t-1}})` modulo `p`,
/// the generators taken with the minimal exponent vector of their level.
pub fn verify_grading_relation(p: u64, n: usize, t: u32) -> Result<GradingReport> {
    if t < 2 {
        return Err(KzError::InvalidParameter(format!("t = {t} must be at least 2")));
    }
    let inst = KZInstance::new(p, t, n)?;
    let matrix = cartier_matrix(p, n)?;
    let q = u32::try_from(p.pow(t - 1)).map_err(|_| KzError::ExponentOverflow)?;
    let rhs = combine(&inst, t - 1, &matrix.twist(q)?.to_mod())?;
    let relations = compare(&inst, t, rhs)?;
    let degrees_ok = matrix.degrees_ok();
    let pass = degrees_ok && relations.iter().all(|r| r.holds);
    Ok(GradingReport { p, n, t, matrix, degrees_ok, relations, pass })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IteratedReport {
    pub p: u64,
    pub n: usize,
    pub s: u32,
    /// `I^{[l p^s - 1]} = sum I^{[m p - 1]} (C(z^p) ... C(z^{p^{s-1}}))_{m,l}` mod `p`.
    pub relations: Vec<RelationCheck>,
    /// Splitting the product at every intermediate level gives the same matrix.
    pub associative: bool,
    pub frobenius_consistent: bool,
    pub pass: bool,
}

pub fn verify_iterated(p: u64, n: usize, s: u32) -> Result<IteratedReport> {
    if s < 2 {
        return Err(KzError::InvalidParameter(format!("s = {s} must be at least 2")));
    }
    let inst = KZInstance::new(p, s, n)?;
    let c = cartier_matrix(p, n)?;
    let full = iterated_product(&c, s, s - 1)?;
    let relations = compare(&inst, s, combine(&inst, 1, &full.to_mod())?)?;
    let mut associative = true;
    for m1 in 1..s - 1 {
        let upper = iterated_product(&c, s, m1)?.to_mod();
        let lower = iterated_product(&c, s - m1, s - 1 - m1)?.to_mod();
        if mat_mul(&lower, &upper, p)? != full.to_mod() {
            associative = false;
        }
    }
    let frobenius_consistent = c.frobenius_consistent()?;
    let pass = associative && frobenius_consistent && relations.iter().all(|r| r.holds);
    Ok(IteratedReport { p, n, s, relations, associative, frobenius_consistent, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::elementary_symmetric;
    use num_bigint::BigInt;

    #[test]
    fn p5_n3_matrix() {
        let c = cartier_matrix(5, 3).unwrap();
        let e = elementary_symmetric(&Vars::z(3).unwrap(), 3).unwrap();
        let want = (&e[1].pow(2).unwrap() + &e[2].scale(&BigInt::from(2))).reduce_mod(&BigInt::from(5));
        assert_eq!(c.entries[0][0], want);
        assert!(c.degrees_ok());
        assert_eq!(c.expected_degree(1, 1), 2);
        let c7 = cartier_matrix(7, 3).unwrap();
        assert!(c7.entries[0][0].is_homogeneous_of_degree(3));
        assert!(c.frobenius_consistent().unwrap());
    }

    #[test]
    fn grading_relation_small() {
        let r = verify_grading_relation(5, 3, 2).unwrap();
        assert!(r.pass, "{:?}", r.relations);
        let r = verify_grading_relation(5, 5, 2).unwrap();
        assert!(r.pass, "{:?}", r.relations);
    }

    #[test]
    fn single_factor_is_twist() {
        let c = cartier_matrix(5, 5).unwrap();
        assert_eq!(iterated_product(&c, 2, 1).unwrap(), c.twist(5).unwrap());
    }
}
