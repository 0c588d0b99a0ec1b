//! Exact scalars: big rationals and Laurent polynomials in the single
//! central parameter `h`.
//!
//! The same parameter symbol plays `t` in the formal quantization and `q̂` in
//! the parametric deformation family; the element context decides which.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a"` or `"a/b"` (optional leading `-`) into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Malformed(format!("not a rational: {s:?}"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Laurent polynomial in `h` with rational coefficients.
///
/// Zero coefficients are never stored, so the empty map is zero and
/// structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ParamPoly {
    terms: BTreeMap<i64, Rational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    /// The parameter itself.
    pub fn h() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn h_pow(exp: i64) -> Self {
        Self::monomial(Rational::one(), exp)
    }

    pub fn monomial(c: Rational, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in iter {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(0).is_one()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// True iff no negative exponents occur.
    pub fn is_polynomial(&self) -> bool {
        self.min_exponent().is_none_or(|e| e >= 0)
    }

    /// True iff the element is `c·h^0` (zero counts as constant).
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == 0)
    }

    /// The single coefficient if constant, otherwise `None`.
    pub fn as_constant(&self) -> Option<Rational> {
        self.is_constant().then(|| self.coeff(0))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    /// Multiplies by `h^k`.
    pub fn mul_h_power(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, a)| (e + k, a.clone())).collect(),
        }
    }

    /// Exact division by `h`; `None` if a constant or negative-power term
    /// would be left behind.
    pub fn div_by_h(&self) -> Option<Self> {
        match self.min_exponent() {
            Some(e) if e < 1 => None,
            _ => Some(self.mul_h_power(-1)),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation at `h = c`.
    pub fn eval(&self, c: &Rational) -> Result<Rational> {
        if c.is_zero() {
            if !self.is_polynomial() {
                return Err(Error::EvalAtZeroOfLaurent);
            }
            return Ok(self.coeff(0));
        }
        let mut acc = Rational::zero();
        for (e, a) in &self.terms {
            acc += a * pow_signed(c, *e);
        }
        Ok(acc)
    }

    /// Substitution `h ↦ h + 1`, expanded binomially.
    pub fn shift(&self) -> Result<Self> {
        if !self.is_polynomial() {
            return Err(Error::NegativeExponent);
        }
        let mut out = Self::zero();
        for (e, a) in &self.terms {
            let e = *e as u64;
            for k in 0..=e {
                let b = Rational::from_integer(binomial(e, k));
                out.add_term(k as i64, a * b);
            }
        }
        Ok(out)
    }

    /// Monomial criterion for invertibility across the whole family of
    /// nonzero parameter values: `p = a·h^k`.
    pub fn is_invertible_in_family(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(self.terms.len() == 1)
    }

    /// Inverse of a Laurent monomial `a·h^k`, i.e. `a⁻¹·h^(-k)`.
    pub fn monomial_inverse(&self) -> Result<Self> {
        if !self.is_invertible_in_family()? {
            return Err(Error::IllegalCoefficient(self.to_string()));
        }
        let (e, a) = self.terms().next().expect("nonzero");
        Ok(Self::monomial(a.recip(), -e))
    }

    /// Returns `(h^k·p, k)` with `k = max(0, -min exponent)`, the smallest
    /// `k` making the product polynomial.
    pub fn clear_negative_powers(&self) -> Result<(Self, u32)> {
        let min = self.min_exponent().ok_or(Error::ZeroInput)?;
        let k = (-min).max(0);
        Ok((self.mul_h_power(k), k as u32))
    }
}

fn pow_signed(c: &Rational, e: i64) -> Rational {
    let base = if e < 0 { c.recip() } else { c.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (ea, a) in &self.terms {
            for (eb, b) in &rhs.terms {
                out.add_term(ea + eb, a * b);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ParamPoly {
            type Output = ParamPoly;
            fn $m(self, rhs: ParamPoly) -> ParamPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        -&self
    }
}

impl From<Rational> for ParamPoly {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

/// Writes `h^e` with the conventional abbreviations (`h`, `h^-2`).
pub(crate) fn fmt_h_power(f: &mut fmt::Formatter<'_>, e: i64) -> fmt::Result {
    if e == 1 {
        write!(f, "h")
    } else {
        write!(f, "h^{e}")
    }
}

impl fmt::Display for ParamPoly {
    /// Canonical text: descending exponents, reduced fractions, `-` instead
    /// of `+ -`, e.g. `3*h^2 - 1/2*h^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            if *e == 0 {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                fmt_h_power(f, *e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamPoly({self})")
    }
}

/// Serialized coefficient: `[[exp, "num/den"], ...]` in ascending exponent order.
pub(crate) fn param_to_pairs(p: &ParamPoly) -> Vec<(i64, String)> {
    p.terms().map(|(e, c)| (e, c.to_string())).collect()
}

pub(crate) fn param_from_pairs(pairs: &[(i64, String)]) -> Result<ParamPoly> {
    let mut out = ParamPoly::zero();
    for (e, c) in pairs {
        out.add_term(*e, parse_rational(c)?);
    }
    Ok(out)
}
