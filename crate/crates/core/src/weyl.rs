//! Normal-form elements of the Weyl-type algebras and their product.
//!
//! Every algebra here is presented on `x_1..x_{2n}` by
//! `x_{2l} x_{2l-1} = x_{2l-1} x_{2l} + c` with all other generator pairs
//! commuting, where the central value `c` depends on the context: the
//! parameter `h` for the formal quantization and the parametric family, the
//! number `q` for a fixed deformation (`q = 1` is the Weyl algebra), and `1`
//! for the Weyl algebra with parameter-valued coefficients that receives `ψ`.
//! The standard monomials (ascending indices) form a basis, so a sparse
//! coefficient map over them is a unique normal form.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::monomial::StandardMonomial;
use crate::scalars::{binomial, ParamPoly, Rational};

pub const DEFAULT_DEGREE_CAP: u32 = 64;
pub const DEGREE_CAP_ENV: &str = "SEMIWEYL_DEGREE_CAP";

/// Product degree limit. Read once from `SEMIWEYL_DEGREE_CAP`, falling back
/// to 64.
pub fn degree_cap() -> u32 {
    static CAP: OnceLock<u32> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(DEGREE_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_DEGREE_CAP)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `A_n`: coefficients polynomial in `h = t`, `[x_{2l}, x_{2l-1}] = h`.
    FormalT,
    /// `A_q̂`: Laurent coefficients in `h = q̂`, `[x_{2l}, x_{2l-1}] = h`.
    FamilyQ,
    /// `W_n` with Laurent coefficients in `h = q̂`, `[x_{2l}, x_{2l-1}] = 1`.
    /// Codomain of `ψ`.
    FamilyW,
    /// `A_q` for a fixed nonzero `q`, constant coefficients; `W_n` is `q = 1`.
    Numeric(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylContext {
    n: usize,
    mode: Mode,
}

impl WeylContext {
    pub fn new(n: usize, mode: Mode) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidContext("n must be at least 1".into()));
        }
        if let Mode::Numeric(q) = &mode {
            if q.is_zero() {
                return Err(Error::InvalidContext(
                    "deformation parameter q must be nonzero".into(),
                ));
            }
        }
        Ok(Self { n, mode })
    }

    pub fn formal(n: usize) -> Self {
        Self::new(n, Mode::FormalT).expect("n >= 1")
    }

    pub fn family(n: usize) -> Self {
        Self::new(n, Mode::FamilyQ).expect("n >= 1")
    }

    pub fn family_weyl(n: usize) -> Self {
        Self::new(n, Mode::FamilyW).expect("n >= 1")
    }

    /// The Weyl algebra `W_n`.
    pub fn weyl(n: usize) -> Self {
        Self::new(n, Mode::Numeric(Rational::one())).expect("n >= 1")
    }

    pub fn numeric(n: usize, q: Rational) -> Result<Self> {
        Self::new(n, Mode::Numeric(q))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of generators, `2n`.
    pub fn vars(&self) -> usize {
        2 * self.n
    }

    pub fn mode(&self) -> &Mode {
        &self.mode
    }

    pub fn is_weyl(&self) -> bool {
        matches!(&self.mode, Mode::Numeric(q) if q.is_one())
    }

    /// The central value `c` in `[x_{2l}, x_{2l-1}] = c`.
    pub fn commutator_value(&self) -> ParamPoly {
        match &self.mode {
            Mode::FormalT | Mode::FamilyQ => ParamPoly::h(),
            Mode::FamilyW => ParamPoly::one(),
            Mode::Numeric(q) => ParamPoly::constant(q.clone()),
        }
    }

    /// Whether `c` is a legal coefficient in this context.
    pub fn admits(&self, c: &ParamPoly) -> bool {
        match &self.mode {
            Mode::FormalT => c.is_polynomial(),
            Mode::FamilyQ | Mode::FamilyW => true,
            Mode::Numeric(_) => c.is_constant(),
        }
    }

    /// Short algebra name used on the command line and in JSON:
    /// `An`, `Aqhat`, `Wqhat`, `Wn`, `Aq=<r>`.
    pub fn algebra_name(&self) -> String {
        match &self.mode {
            Mode::FormalT => "An".into(),
            Mode::FamilyQ => "Aqhat".into(),
            Mode::FamilyW => "Wqhat".into(),
            Mode::Numeric(q) if q.is_one() => "Wn".into(),
            Mode::Numeric(q) => format!("Aq={q}"),
        }
    }

    pub fn from_algebra_name(name: &str, n: usize) -> Result<Self> {
        let mode = match name {
            "An" => Mode::FormalT,
            "Aqhat" => Mode::FamilyQ,
            "Wqhat" => Mode::FamilyW,
            "Wn" => Mode::Numeric(Rational::one()),
            other => match other.strip_prefix("Aq=") {
                Some(q) => Mode::Numeric(crate::scalars::parse_rational(q)?),
                None => return Err(Error::InvalidContext(format!("unknown algebra {other:?}"))),
            },
        };
        Self::new(n, mode)
    }
}

impl fmt::Display for WeylContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={})", self.algebra_name(), self.n)
    }
}

pub(crate) fn check_same(a: &WeylContext, b: &WeylContext) -> Result<()> {
    if a != b {
        return Err(Error::ContextMismatch {
            left: a.to_string(),
            right: b.to_string(),
        });
    }
    Ok(())
}

/// An element in normal form: standard monomial ↦ nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    ctx: WeylContext,
    terms: BTreeMap<StandardMonomial, ParamPoly>,
}

impl WeylElement {
    pub fn zero(ctx: &WeylContext) -> Self {
        Self {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &WeylContext) -> Self {
        Self::scalar(ctx, ParamPoly::one()).expect("1 is admissible everywhere")
    }

    pub fn scalar(ctx: &WeylContext, c: ParamPoly) -> Result<Self> {
        Self::from_terms(ctx, [(StandardMonomial::one(ctx.vars()), c)])
    }

    /// The central parameter `h` as an element (`q` in a numeric context).
    pub fn param(ctx: &WeylContext) -> Self {
        let c = match ctx.mode() {
            Mode::Numeric(q) => ParamPoly::constant(q.clone()),
            _ => ParamPoly::h(),
        };
        Self::scalar(ctx, c).expect("parameter is admissible")
    }

    /// Generator `x_i`, 1-based.
    pub fn generator(ctx: &WeylContext, i: usize) -> Result<Self> {
        if i == 0 || i > ctx.vars() {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: ctx.vars(),
            });
        }
        Self::from_terms(
            ctx,
            [(StandardMonomial::var(ctx.vars(), i - 1), ParamPoly::one())],
        )
    }

    pub fn generators(ctx: &WeylContext) -> Vec<Self> {
        (1..=ctx.vars())
            .map(|i| Self::generator(ctx, i).expect("in range"))
            .collect()
    }

    /// Builds an element, merging repeated monomials and dropping zeros.
    pub fn from_terms<I>(ctx: &WeylContext, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (StandardMonomial, ParamPoly)>,
    {
        let mut out = Self::zero(ctx);
        for (m, c) in terms {
            if m.vars() != ctx.vars() {
                return Err(Error::ArityMismatch {
                    left: m.vars() / 2,
                    right: ctx.n(),
                });
            }
            if !ctx.admits(&c) {
                return Err(Error::IllegalCoefficient(format!("{c} in {ctx}")));
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub(crate) fn add_term(&mut self, m: StandardMonomial, c: ParamPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot = &*slot + &c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn context(&self) -> &WeylContext {
        &self.ctx
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&StandardMonomial, &ParamPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &StandardMonomial) -> ParamPoly {
        self.terms.get(m).cloned().unwrap_or_default()
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

    /// Total degree in the generators (0 for zero and scalars).
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(StandardMonomial::degree)
            .max()
            .unwrap_or(0)
    }

    /// The scalar value if the element lies in the coefficient ring.
    pub fn as_scalar(&self) -> Option<ParamPoly> {
        match self.terms.len() {
            0 => Some(ParamPoly::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same(&self.ctx, &other.ctx)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coefficients(|c| -c)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        weyl_mul(self, other)
    }

    /// Multiplies every coefficient by the central scalar `c`.
    pub fn scale(&self, c: &ParamPoly) -> Result<Self> {
        if !self.ctx.admits(c) {
            return Err(Error::IllegalCoefficient(format!("{c} in {}", self.ctx)));
        }
        Ok(self.map_coefficients(|a| a * c))
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..k {
            acc = weyl_mul(&acc, self)?;
        }
        Ok(acc)
    }

    pub(crate) fn map_coefficients(&self, f: impl Fn(&ParamPoly) -> ParamPoly) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Same coefficients and monomials read in another context. Callers
    /// decide whether this is an algebra map.
    pub(crate) fn recontext(&self, ctx: &WeylContext) -> Result<Self> {
        Self::from_terms(ctx, self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms.iter().rev())
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.ctx, self)
    }
}

/// Canonical term rendering shared with the Poisson side. Terms arrive in
/// the order they are printed.
pub(crate) fn fmt_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (&'a StandardMonomial, &'a ParamPoly)>,
{
    let mut first = true;
    for (m, c) in terms {
        if c.len() == 1 {
            let (e, a) = c.terms().next().expect("nonzero");
            let neg = a.is_negative();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            let abs = a.abs();
            if m.is_one() {
                write!(f, "{}", ParamPoly::monomial(abs, e))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                if e != 0 {
                    crate::scalars::fmt_h_power(f, e)?;
                    write!(f, "*")?;
                }
                write!(f, "{m}")?;
            }
        } else {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if !m.is_one() {
                write!(f, "*{m}")?;
            }
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// One summand of a monomial product: the resulting monomial, its integer
/// multiplicity, and the number of pair contractions (power of `c`).
type Contraction = (StandardMonomial, BigInt, u32);

fn factorial(k: u32) -> BigInt {
    (1..=k as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Product of two standard monomials, pair by pair, with
/// `d^b p^c = Σ_k k!·C(b,k)·C(c,k)·c^k·p^(c-k)·d^(b-k)` where `p = x_{2l-1}`
/// and `d = x_{2l}`. Distinct pairs commute, so the blocks multiply
/// independently.
fn mul_monomials(a: &StandardMonomial, b: &StandardMonomial) -> Vec<Contraction> {
    let vars = a.vars();
    let mut acc: Vec<Contraction> = vec![(a.mul(b), BigInt::one(), 0)];
    for pair in 0..vars / 2 {
        let (p, d) = (2 * pair, 2 * pair + 1);
        let inner_d = a.exponent(d);
        let inner_p = b.exponent(p);
        let kmax = inner_d.min(inner_p);
        if kmax == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(acc.len() * (kmax as usize + 1));
        for (m, mult, contractions) in &acc {
            for k in 0..=kmax {
                let w = factorial(k)
                    * binomial(inner_d as u64, k as u64)
                    * binomial(inner_p as u64, k as u64);
                let m2 = m
                    .with_exponent(p, m.exponent(p) - k)
                    .with_exponent(d, m.exponent(d) - k);
                next.push((m2, mult * w, contractions + k));
            }
        }
        acc = next;
    }
    acc
}

fn check_degree(f: &WeylElement, g: &WeylElement, cap: u32) -> Result<()> {
    let degree = f.degree() + g.degree();
    if degree > cap {
        return Err(Error::DegreeCapExceeded { degree, cap });
    }
    Ok(())
}

/// Powers `c^0..=c^max` of the context's central value.
fn central_powers(ctx: &WeylContext, max: u32) -> Vec<ParamPoly> {
    let c = ctx.commutator_value();
    let mut out = vec![ParamPoly::one()];
    for k in 1..=max as usize {
        let next = &out[k - 1] * &c;
        out.push(next);
    }
    out
}

/// Normal-ordered product, closed form per symplectic pair.
pub fn weyl_mul(f: &WeylElement, g: &WeylElement) -> Result<WeylElement> {
    weyl_mul_capped(f, g, degree_cap())
}

pub fn weyl_mul_capped(f: &WeylElement, g: &WeylElement, cap: u32) -> Result<WeylElement> {
    check_same(&f.ctx, &g.ctx)?;
    check_degree(f, g, cap)?;
    let powers = central_powers(&f.ctx, f.degree().min(g.degree()));
    let mut out = WeylElement::zero(&f.ctx);
    for (ma, ca) in &f.terms {
        for (mb, cb) in &g.terms {
            let cab = ca * cb;
            for (m, mult, k) in mul_monomials(ma, mb) {
                let c = (&cab * &powers[k as usize]).scale(&Rational::from_integer(mult));
                out.add_term(m, c);
            }
        }
    }
    Ok(out)
}

/// Normal ordering by repeated application of the single relation
/// `x_j x_i ↦ x_i x_j (+ c when (i, j) is a symplectic pair)` on the
/// concatenated words. Independent of the closed form in [`weyl_mul`];
/// exponential in the degree, so intended for small inputs.
pub fn rewrite_oracle(f: &WeylElement, g: &WeylElement) -> Result<WeylElement> {
    check_same(&f.ctx, &g.ctx)?;
    check_degree(f, g, degree_cap())?;
    let powers = central_powers(&f.ctx, f.degree() + g.degree());
    let mut out = WeylElement::zero(&f.ctx);
    for (ma, ca) in &f.terms {
        for (mb, cb) in &g.terms {
            let mut word = ma.word();
            word.extend(mb.word());
            let cab = ca * cb;
            for ((m, k), mult) in normal_order_word(word, f.ctx.vars()) {
                let c = (&cab * &powers[k as usize]).scale(&Rational::from_integer(mult));
                out.add_term(m, c);
            }
        }
    }
    Ok(out)
}

fn normal_order_word(word: Vec<usize>, vars: usize) -> BTreeMap<(StandardMonomial, u32), BigInt> {
    let mut work: BTreeMap<(Vec<usize>, u32), BigInt> = BTreeMap::new();
    work.insert((word, 0), BigInt::one());
    let mut done: BTreeMap<(StandardMonomial, u32), BigInt> = BTreeMap::new();
    while let Some(((w, k), c)) = work.pop_first() {
        if c.is_zero() {
            continue;
        }
        match w.windows(2).position(|p| p[0] > p[1]) {
            None => {
                let mut exps = vec![0u32; vars];
                for &i in &w {
                    exps[i] += 1;
                }
                *done
                    .entry((StandardMonomial::from_exponents(exps), k))
                    .or_insert_with(BigInt::zero) += c;
            }
            Some(pos) => {
                let (j, i) = (w[pos], w[pos + 1]);
                let mut swapped = w.clone();
                swapped.swap(pos, pos + 1);
                *work.entry((swapped, k)).or_insert_with(BigInt::zero) += &c;
                if i % 2 == 0 && j == i + 1 {
                    let mut contracted = w;
                    contracted.drain(pos..pos + 2);
                    *work.entry((contracted, k + 1)).or_insert_with(BigInt::zero) += c;
                }
            }
        }
    }
    done.retain(|_, c| !c.is_zero());
    done
}

/// `fg - gf`.
pub fn commutator(f: &WeylElement, g: &WeylElement) -> Result<WeylElement> {
    weyl_mul(f, g)?.sub(&weyl_mul(g, f)?)
}

/// Evaluates every coefficient at `h = q`, landing in `A_q`.
pub fn specialize(f: &WeylElement, q: &Rational) -> Result<WeylElement> {
    match f.ctx.mode() {
        Mode::FormalT | Mode::FamilyQ => {}
        _ => {
            return Err(Error::ContextMismatch {
                left: f.ctx.to_string(),
                right: "An or Aqhat".into(),
            })
        }
    }
    let target = WeylContext::numeric(f.ctx.n(), q.clone())?;
    let mut out = WeylElement::zero(&target);
    for (m, c) in &f.terms {
        out.add_term(m.clone(), ParamPoly::constant(c.eval(q)?));
    }
    Ok(out)
}

/// `ν_{2j} = h·∂/∂x_{2j-1}` on the formal quantization; `j` is the 1-based
/// pair index. Equals `[x_{2j}, f]`.
pub fn apply_derivation_nu(f: &WeylElement, j: usize) -> Result<WeylElement> {
    if f.ctx.mode() != &Mode::FormalT {
        return Err(Error::ContextMismatch {
            left: f.ctx.to_string(),
            right: format!("An(n={})", f.ctx.n()),
        });
    }
    if j == 0 || j > f.ctx.n() {
        return Err(Error::IndexOutOfRange {
            index: j,
            max: f.ctx.n(),
        });
    }
    let slot = 2 * (j - 1);
    let mut out = WeylElement::zero(&f.ctx);
    for (m, c) in &f.terms {
        let e = m.exponent(slot);
        if e == 0 {
            continue;
        }
        let c = c
            .mul_h_power(1)
            .scale(&Rational::from_integer(BigInt::from(e)));
        out.add_term(m.with_exponent(slot, e - 1), c);
    }
    Ok(out)
}

/// Number of standard monomials of total degree `<= d` in `2n` variables,
/// `C(2n + d, 2n)`.
pub fn monomial_count(n: usize, d: u32) -> BigInt {
    binomial((2 * n) as u64 + d as u64, (2 * n) as u64)
}
