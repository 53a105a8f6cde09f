//! p-adic integers at an explicit finite precision.
//!
//! A [`PAdicNumber`] is a residue modulo `p^N` with `p^N < 2^63`, so products
//! fit in `u128`. The zero residue never claims to be exactly zero: its
//! valuation is reported as `AtLeast(N)`.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::binomial::vp_u64;
use crate::{KzError, Result};

/// Exponent of `p` in a residue modulo `p^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Valuation {
    Finite(u32),
    /// The residue vanishes modulo `p^N`.
    AtLeast(u32),
}

impl Valuation {
    /// A lower bound for the true valuation.
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Finite(e) | Valuation::AtLeast(e) => e,
        }
    }

    /// Whether `|t|_p <= p^(-e)` is certified.
    pub fn certifies(self, e: u32) -> bool {
        self.lower_bound() >= e
    }

    /// Smaller valuation, i.e. larger norm; `AtLeast` marks precision limits.
    pub fn min(self, other: Valuation) -> Valuation {
        if self.lower_bound() <= other.lower_bound() {
            self
        } else {
            other
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(e) => write!(f, "{e}"),
            Valuation::AtLeast(e) => write!(f, ">={e}"),
        }
    }
}

/// Norm `p^(-v)` rendered for reports, e.g. `5^-3` or `<= 5^-12`.
pub fn norm_string(p: u64, v: Valuation) -> String {
    match v {
        Valuation::Finite(0) => "1".to_string(),
        Valuation::Finite(e) => format!("{p}^-{e}"),
        Valuation::AtLeast(e) => format!("<= {p}^-{e}"),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PAdicNumber {
    p: u64,
    n: u32,
    modulus: u64,
    residue: u64,
}

impl fmt::Debug for PAdicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.residue, self.p, self.n)
    }
}

impl fmt::Display for PAdicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `p^n` if it fits the residue range.
pub fn checked_modulus(p: u64, n: u32) -> Result<u64> {
    if n == 0 {
        return Err(KzError::InvalidParameter("precision must be positive".into()));
    }
    p.checked_pow(n)
        .filter(|m| *m < (1u64 << 63))
        .ok_or_else(|| KzError::InvalidParameter(format!("{p}^{n} exceeds the residue range")))
}

impl PAdicNumber {
    pub fn new(p: u64, n: u32, residue: u64) -> Result<Self> {
        let modulus = checked_modulus(p, n)?;
        Ok(PAdicNumber { p, n, modulus, residue: residue % modulus })
    }

    pub fn from_i64(p: u64, n: u32, v: i64) -> Result<Self> {
        let modulus = checked_modulus(p, n)?;
        let r = v.rem_euclid(modulus as i64) as u64;
        Ok(PAdicNumber { p, n, modulus, residue: r })
    }

    pub fn from_bigint(p: u64, n: u32, v: &BigInt) -> Result<Self> {
        let modulus = checked_modulus(p, n)?;
        let r = v.mod_floor(&BigInt::from(modulus)).to_u64().unwrap_or(0);
        Ok(PAdicNumber { p, n, modulus, residue: r })
    }

    /// Same prime and precision as `self`, value `v`.
    pub fn like_i64(&self, v: i64) -> Self {
        PAdicNumber { residue: v.rem_euclid(self.modulus as i64) as u64, ..*self }
    }

    pub fn like_bigint(&self, v: &BigInt) -> Self {
        let r = v.mod_floor(&BigInt::from(self.modulus)).to_u64().unwrap_or(0);
        PAdicNumber { residue: r, ..*self }
    }

    pub fn zero(p: u64, n: u32) -> Result<Self> {
        Self::new(p, n, 0)
    }

    pub fn one(p: u64, n: u32) -> Result<Self> {
        Self::new(p, n, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    /// Residue modulo `p`.
    pub fn digit0(&self) -> u64 {
        self.residue % self.p
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    pub fn valuation(&self) -> Valuation {
        match vp_u64(self.residue, self.p) {
            Some(e) => Valuation::Finite(e),
            None => Valuation::AtLeast(self.n),
        }
    }

    pub fn norm_string(&self) -> String {
        norm_string(self.p, self.valuation())
    }

    fn same_ring(&self, o: &Self) {
        assert!(self.p == o.p && self.n == o.n, "p-adic operands at different primes or precisions");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_ring(o);
        let r = (self.residue as u128 + o.residue as u128) % self.modulus as u128;
        PAdicNumber { residue: r as u64, ..*self }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        PAdicNumber { residue: (self.modulus - self.residue) % self.modulus, ..*self }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_ring(o);
        let r = self.residue as u128 * o.residue as u128 % self.modulus as u128;
        PAdicNumber { residue: r as u64, ..*self }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = self.like_i64(1);
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `self^e` for an exponent given as a big integer (used for `p^s`-sized
    /// powers that overflow `u64` in intermediate bookkeeping).
    pub fn pow_big(&self, e: &BigInt) -> Self {
        let mut acc = self.like_i64(1);
        let bits = e.bits();
        for i in (0..bits).rev() {
            acc = acc.mul(&acc);
            if e.bit(i) {
                acc = acc.mul(self);
            }
        }
        acc
    }

    pub fn is_unit(&self) -> bool {
        self.digit0() != 0
    }

    /// Multiplicative inverse of a unit.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(KzError::NotAUnit { value: self.residue, p: self.p });
        }
        let m = self.modulus as i128;
        let (mut a, mut b) = (self.residue as i128, m);
        let (mut x0, mut x1) = (1i128, 0i128);
        while b != 0 {
            let q = a / b;
            (a, b) = (b, a - q * b);
            (x0, x1) = (x1, x0 - q * x1);
        }
        Ok(PAdicNumber { residue: x0.rem_euclid(m) as u64, ..*self })
    }

    /// Reduction to a coarser precision.
    pub fn truncate(&self, n: u32) -> Result<Self> {
        if n > self.n {
            return Err(KzError::PrecisionExhausted { needed: n, available: self.n });
        }
        Self::new(self.p, n, self.residue)
    }

    /// `p^k` at the same precision (zero once `k >= N`).
    pub fn p_power(&self, k: u32) -> Self {
        if k >= self.n {
            return self.like_i64(0);
        }
        PAdicNumber { residue: self.p.pow(k), ..*self }
    }
}

/// Teichmüller representative: iterate `t -> t^p` until it stabilises. Each
/// step gains at least one digit, so `N + 1` iterations always suffice.
pub fn teichmuller(t: &PAdicNumber) -> PAdicNumber {
    let mut w = *t;
    for _ in 0..=t.precision() {
        let next = w.pow(t.p());
        if next == w {
            return w;
        }
        w = next;
    }
    w
}

/// Legendre symbol check: `a` is a nonzero square mod `p`.
pub fn is_nonzero_square_mod_p(a: u64, p: u64) -> bool {
    !a.is_multiple_of(p) && crate::poly::pow_mod(a % p, (p - 1) / 2, p) == 1
}

/// Square root of `t` congruent to `beta` mod `p`, by Newton iteration
/// `y <- (y + t/y)/2`.
pub fn hensel_sqrt(t: &PAdicNumber, beta: u64) -> Result<PAdicNumber> {
    let p = t.p();
    let alpha = t.digit0();
    if !is_nonzero_square_mod_p(alpha, p) {
        return Err(KzError::NotASquare { alpha, p });
    }
    let beta = beta % p;
    if beta * beta % p != alpha {
        return Err(KzError::WrongBranch { beta, alpha, p });
    }
    let half = t.like_i64(2).inverse()?;
    let mut y = t.like_i64(beta as i64);
    // quadratic convergence: correct digits double each step
    let mut good = 1u32;
    while good < t.precision() {
        y = y.add(&t.mul(&y.inverse()?)).mul(&half);
        good *= 2;
    }
    debug_assert_eq!(y.mul(&y), *t);
    Ok(y)
}

/// Unit part and exponent of `p` of a positive integer.
fn split_p(mut x: u64, p: u64) -> (u64, u32) {
    let mut e = 0;
    while x.is_multiple_of(p) {
        x /= p;
        e += 1;
    }
    (x, e)
}

/// `binom(-1/2 - l1, k) = prod_{j=1..k} (2(l1+j) - 1) / ((-2)^k k!)` in `Z_p`
/// at precision `N`. The factored form keeps valuations exact: every factor's
/// `p`-part is stripped before the unit parts are inverted.
pub fn binom_half(p: u64, l1: u64, k: u64, n: u32) -> Result<PAdicNumber> {
    let one = PAdicNumber::one(p, n)?;
    let mut unit = one;
    let mut exp: i64 = 0;
    for j in 1..=k {
        let (u, e) = split_p(2 * (l1 + j) - 1, p);
        unit = unit.mul(&one.like_i64(u as i64));
        exp += e as i64;
        let (u, e) = split_p(j, p);
        unit = unit.mul(&one.like_i64(u as i64).inverse()?);
        exp -= e as i64;
    }
    let two_k = one.like_i64(-2).pow(k).inverse()?;
    unit = unit.mul(&two_k);
    debug_assert!(exp >= 0, "binom(-1/2 - l1, k) is a p-adic integer");
    Ok(unit.mul(&one.p_power(exp.max(0) as u32)))
}

/// `binom(-1/2 - l1, k)` as an exact rational `num / den` with `den` coprime
/// to every odd prime except those dividing `k!`.
pub fn binom_half_exact(l1: u64, k: u64) -> (BigInt, BigInt) {
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for j in 1..=k {
        num *= 2 * (l1 + j) - 1;
        den *= j;
        den *= -2;
    }
    let g = num.gcd(&den);
    if !g.is_zero() {
        num /= &g;
        den /= &g;
    }
    (num, den)
}

/// A disc `D_{alpha, p^(-r)}` around the Teichmüller lift of `alpha`; `r = 0`
/// is the residue disc `{ t : |t - omega(alpha)|_p < 1 }`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscSpec {
    pub alpha: u64,
    /// Extra digits fixed beyond the residue class.
    pub radius_exponent: u32,
}

impl DiscSpec {
    pub fn residue(alpha: u64) -> Self {
        DiscSpec { alpha, radius_exponent: 0 }
    }

    pub fn contains(&self, t: &PAdicNumber) -> Result<bool> {
        if self.alpha >= t.p() {
            return Err(KzError::InvalidParameter(format!("alpha = {} is not a residue mod {}", self.alpha, t.p())));
        }
        let w = teichmuller(&t.like_i64(self.alpha as i64));
        Ok(t.sub(&w).valuation().certifies(self.radius_exponent + 1))
    }
}

/// An element of `Q_p` written as `p^v * unit`, with the unit known modulo
/// `p^N`. Only valuations matter for membership in residue discs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QpElement {
    pub valuation: i32,
    pub unit: PAdicNumber,
}

impl QpElement {
    pub fn mul(&self, o: &QpElement) -> QpElement {
        QpElement { valuation: self.valuation + o.valuation, unit: self.unit.mul(&o.unit) }
    }

    pub fn pow(&self, e: u32) -> QpElement {
        QpElement { valuation: self.valuation * e as i32, unit: self.unit.pow(e as u64) }
    }

    /// Membership in the residue disc `D_{alpha,1}` of `Z_p`.
    pub fn in_residue_disc(&self, alpha: u64) -> bool {
        if self.valuation < 0 {
            return false;
        }
        if alpha == 0 {
            return self.valuation >= 1;
        }
        self.valuation == 0 && self.unit.digit0() == alpha % self.unit.p()
    }
}

impl Serialize for PAdicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            p: u64,
            #[serde(rename = "N")]
            n: u32,
            residue: String,
        }
        Repr { p: self.p, n: self.n, residue: self.residue.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PAdicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        use serde::de::Error;
        #[derive(Deserialize)]
        struct Repr {
            p: u64,
            #[serde(rename = "N")]
            n: u32,
            residue: String,
        }
        let r = Repr::deserialize(d)?;
        let v: u64 = r.residue.parse().map_err(|_| D::Error::custom("residue is not a decimal integer"))?;
        let t = PAdicNumber::new(r.p, r.n, v).map_err(D::Error::custom)?;
        if t.residue != v {
            return Err(D::Error::custom("residue outside [0, p^N)"));
        }
        Ok(t)
    }
}
