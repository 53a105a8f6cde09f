//! JSON shape: `{"vars": [...], "terms": [{"e": [...], "c": "decimal"}]}`.
//! Coefficients travel as strings so no integer width limit applies.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::str::FromStr;

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{IntPolynomial, Monomial, PolyVector, Vars};

#[derive(Serialize, Deserialize)]
struct TermRepr {
    e: Vec<u32>,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    vars: Vec<String>,
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct VectorRepr {
    vars: Vec<String>,
    entries: Vec<Vec<TermRepr>>,
}

fn terms_out(p: &IntPolynomial) -> Vec<TermRepr> {
    let n = p.nvars();
    p.terms().rev().map(|(m, c)| TermRepr { e: m.exponents(n), c: c.to_string() }).collect()
}

fn terms_in<E: serde::de::Error>(vars: &Vars, terms: Vec<TermRepr>) -> Result<IntPolynomial, E> {
    let mut p = IntPolynomial::zero(vars);
    for t in terms {
        if t.e.len() != vars.len() {
            return Err(E::custom("exponent vector length differs from the variable count"));
        }
        let m = Monomial::from_exponents(&t.e).map_err(E::custom)?;
        let c = BigInt::from_str(&t.c).map_err(|_| E::custom("coefficient is not a decimal integer"))?;
        p.add_term(m, c);
    }
    Ok(p)
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyRepr { vars: self.vars().names().to_vec(), terms: terms_out(self) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        let vars = Vars::new(r.vars).map_err(D::Error::custom)?;
        terms_in(&vars, r.terms)
    }
}

impl Serialize for PolyVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        VectorRepr {
            vars: self.vars().names().to_vec(),
            entries: self.entries().iter().map(terms_out).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = VectorRepr::deserialize(d)?;
        let vars = Vars::new(r.vars).map_err(D::Error::custom)?;
        let entries = r.entries.into_iter().map(|t| terms_in(&vars, t)).collect::<Result<Vec<_>, _>>()?;
        PolyVector::new(&vars, entries).map_err(D::Error::custom)
    }
}
