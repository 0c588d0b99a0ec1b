//! The Poisson Weyl algebra `B_n = k[x_1..x_{2n}]` with the symplectic
//! bracket, and checks for Poisson polynomial extensions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::monomial::StandardMonomial;
use crate::scalars::{ParamPoly, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PoissonElement {
    n: usize,
    terms: BTreeMap<StandardMonomial, Rational>,
}

impl PoissonElement {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut out = Self::zero(n);
        out.add_term(StandardMonomial::one(2 * n), c);
        out
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    /// Generator `x_i`, 1-based.
    pub fn generator(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > 2 * n {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: 2 * n,
            });
        }
        let mut out = Self::zero(n);
        out.add_term(StandardMonomial::var(2 * n, i - 1), Rational::one());
        Ok(out)
    }

    pub fn generators(n: usize) -> Vec<Self> {
        (1..=2 * n)
            .map(|i| Self::generator(n, i).expect("in range"))
            .collect()
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (StandardMonomial, Rational)>,
    {
        let mut out = Self::zero(n);
        for (m, c) in terms {
            if m.vars() != 2 * n {
                return Err(Error::ArityMismatch {
                    left: m.vars() / 2,
                    right: n,
                });
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub(crate) fn add_term(&mut self, m: StandardMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&StandardMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &StandardMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
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

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(StandardMonomial::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ArityMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
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
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.n);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    /// Commutative product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.n);
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                out.add_term(ma.mul(mb), a * b);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..k {
            acc = acc.mul(self).expect("same arity");
        }
        acc
    }
}

impl fmt::Display for PoissonElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lifted: Vec<(&StandardMonomial, ParamPoly)> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| (m, ParamPoly::constant(c.clone())))
            .collect();
        crate::weyl::fmt_terms(f, lifted.iter().map(|(m, c)| (*m, c)))
    }
}

impl fmt::Debug for PoissonElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bn(n={})[{}]", self.n, self)
    }
}

/// Formal partial derivative with respect to `x_i` (1-based).
pub fn partial(f: &PoissonElement, i: usize) -> Result<PoissonElement> {
    if i == 0 || i > 2 * f.n {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: 2 * f.n,
        });
    }
    let slot = i - 1;
    let mut out = PoissonElement::zero(f.n);
    for (m, c) in &f.terms {
        let e = m.exponent(slot);
        if e > 0 {
            out.add_term(
                m.with_exponent(slot, e - 1),
                c * Rational::from_integer(BigInt::from(e)),
            );
        }
    }
    Ok(out)
}

/// `{f,g} = Σ_i (-∂f/∂x_{2i-1}·∂g/∂x_{2i} + ∂g/∂x_{2i-1}·∂f/∂x_{2i})`.
pub fn poisson_bracket(f: &PoissonElement, g: &PoissonElement) -> Result<PoissonElement> {
    f.check(g)?;
    let mut out = PoissonElement::zero(f.n);
    for i in 1..=f.n {
        let (p, d) = (2 * i - 1, 2 * i);
        let a = partial(f, p)?.mul(&partial(g, d)?)?;
        let b = partial(g, p)?.mul(&partial(f, d)?)?;
        out = out.add(&b.sub(&a)?)?;
    }
    Ok(out)
}

/// A derivation of `B_n` given by its values on the generators and extended
/// by the Leibniz rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationSpec {
    images: Vec<PoissonElement>,
}

impl DerivationSpec {
    pub fn new(images: Vec<PoissonElement>) -> Result<Self> {
        let n = images.len() / 2;
        if images.is_empty() || !images.len().is_multiple_of(2) {
            return Err(Error::Malformed(
                "a derivation needs 2n generator images".into(),
            ));
        }
        if let Some(bad) = images.iter().find(|e| e.n() != n) {
            return Err(Error::ArityMismatch {
                left: bad.n(),
                right: n,
            });
        }
        Ok(Self { images })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            images: vec![PoissonElement::zero(n); 2 * n],
        }
    }

    /// `δ_{2j}`: sends `x_{2j-1}` to 1 and every other generator to 0.
    pub fn delta(n: usize, j: usize) -> Result<Self> {
        if j == 0 || j > n {
            return Err(Error::IndexOutOfRange { index: j, max: n });
        }
        let mut d = Self::zero(n);
        d.images[2 * j - 2] = PoissonElement::one(n);
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.images.len() / 2
    }

    pub fn images(&self) -> &[PoissonElement] {
        &self.images
    }

    pub fn apply(&self, f: &PoissonElement) -> Result<PoissonElement> {
        if f.n() != self.n() {
            return Err(Error::ArityMismatch {
                left: f.n(),
                right: self.n(),
            });
        }
        let mut out = PoissonElement::zero(f.n());
        for (i, img) in self.images.iter().enumerate() {
            if img.is_zero() {
                continue;
            }
            out = out.add(&partial(f, i + 1)?.mul(img)?)?;
        }
        Ok(out)
    }
}

/// Which identity a violation belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionIdentity {
    /// `α({a,b}) = {α(a),b} + {a,α(b)}`.
    AlphaPoissonDerivation,
    /// `δ({a,b}) - {δ(a),b} - {a,δ(b)} = α(a)δ(b) - δ(a)α(b)`.
    DeltaCompatibility,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionViolation {
    pub identity: ExtensionIdentity,
    pub a: PoissonElement,
    pub b: PoissonElement,
    pub lhs: PoissonElement,
    pub rhs: PoissonElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionReport {
    pub passed: bool,
    pub generator_pairs_checked: usize,
    pub spot_checks: usize,
    pub first_violation: Option<ExtensionViolation>,
}

pub const EXTENSION_SPOT_CHECKS: usize = 20;

/// Checks that `α` is a Poisson derivation and that `δ` satisfies the
/// compatibility identity, so that `{z,a} = α(a)z + δ(a)` makes `R[z]`
/// Poisson.
///
/// Both identities are biderivations in `(a, b)`, so generator pairs decide
/// them; a fixed number of random product pairs of degree at most
/// `degree_cap` is checked as well.
pub fn verify_poisson_extension(
    alpha: &DerivationSpec,
    delta: &DerivationSpec,
    degree_cap: u32,
) -> Result<ExtensionReport> {
    let vars = 2 * alpha.n();
    verify_poisson_extension_on(alpha, delta, vars, degree_cap)
}

/// As [`verify_poisson_extension`], restricted to the subalgebra generated by
/// `x_1..x_vars`.
pub fn verify_poisson_extension_on(
    alpha: &DerivationSpec,
    delta: &DerivationSpec,
    vars: usize,
    degree_cap: u32,
) -> Result<ExtensionReport> {
    let n = alpha.n();
    if delta.n() != n {
        return Err(Error::ArityMismatch {
            left: n,
            right: delta.n(),
        });
    }
    let gens: Vec<PoissonElement> = PoissonElement::generators(n)
        .into_iter()
        .take(vars)
        .collect();
    let mut pairs_checked = 0;
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            pairs_checked += 1;
            if let Some(v) = check_pair(alpha, delta, &gens[j], &gens[i])? {
                return Ok(ExtensionReport {
                    passed: false,
                    generator_pairs_checked: pairs_checked,
                    spot_checks: 0,
                    first_violation: Some(v),
                });
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0001);
    let max_factor = (degree_cap / 2).clamp(1, 2);
    for spot in 0..EXTENSION_SPOT_CHECKS {
        let a = random_product(&mut rng, &gens, max_factor, n);
        let b = random_product(&mut rng, &gens, max_factor, n);
        if let Some(v) = check_pair(alpha, delta, &a, &b)? {
            return Ok(ExtensionReport {
                passed: false,
                generator_pairs_checked: pairs_checked,
                spot_checks: spot + 1,
                first_violation: Some(v),
            });
        }
    }
    Ok(ExtensionReport {
        passed: true,
        generator_pairs_checked: pairs_checked,
        spot_checks: EXTENSION_SPOT_CHECKS,
        first_violation: None,
    })
}

fn random_product(
    rng: &mut ChaCha8Rng,
    gens: &[PoissonElement],
    max_factor: u32,
    n: usize,
) -> PoissonElement {
    let mut out = PoissonElement::one(n);
    for _ in 0..2 {
        let mut factor = PoissonElement::zero(n);
        for _ in 0..rng.gen_range(1..=3) {
            let g = &gens[rng.gen_range(0..gens.len())];
            let c = Rational::from_integer(BigInt::from(rng.gen_range(-3i64..=3)));
            factor = factor
                .add(&g.pow(rng.gen_range(1..=max_factor)).scale(&c))
                .expect("same arity");
        }
        out = out.mul(&factor).expect("same arity");
    }
    out
}

fn check_pair(
    alpha: &DerivationSpec,
    delta: &DerivationSpec,
    a: &PoissonElement,
    b: &PoissonElement,
) -> Result<Option<ExtensionViolation>> {
    let ab = poisson_bracket(a, b)?;
    let (alpha_a, alpha_b) = (alpha.apply(a)?, alpha.apply(b)?);
    let (delta_a, delta_b) = (delta.apply(a)?, delta.apply(b)?);

    let lhs = alpha.apply(&ab)?;
    let rhs = poisson_bracket(&alpha_a, b)?.add(&poisson_bracket(a, &alpha_b)?)?;
    if lhs != rhs {
        return Ok(Some(ExtensionViolation {
            identity: ExtensionIdentity::AlphaPoissonDerivation,
            a: a.clone(),
            b: b.clone(),
            lhs,
            rhs,
        }));
    }

    let lhs = delta
        .apply(&ab)?
        .sub(&poisson_bracket(&delta_a, b)?)?
        .sub(&poisson_bracket(a, &delta_b)?)?;
    let rhs = alpha_a.mul(&delta_b)?.sub(&delta_a.mul(&alpha_b)?)?;
    if lhs != rhs {
        return Ok(Some(ExtensionViolation {
            identity: ExtensionIdentity::DeltaCompatibility,
            a: a.clone(),
            b: b.clone(),
            lhs,
            rhs,
        }));
    }
    Ok(None)
}

/// Bracket values `{x_j, x_i}` for `j > i`, keyed by 1-based `(j, i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketTable {
    pub n: usize,
    pub entries: BTreeMap<(usize, usize), PoissonElement>,
    /// Every extension step passed its compatibility check.
    pub steps_verified: bool,
    /// The table coincides with [`poisson_bracket`] on all generator pairs.
    pub matches_symplectic: bool,
}

impl BracketTable {
    pub fn nonzero_count(&self) -> usize {
        self.entries.values().filter(|v| !v.is_zero()).count()
    }
}

/// Builds the bracket by adjoining `x_1, x_2, ...` one at a time: odd
/// generators as plain Poisson polynomial extensions, `x_{2j}` with
/// `{x_{2j}, a} = δ_{2j}(a)`. Each step's `(α, δ) = (0, δ_{2j})` is checked on
/// the ring built so far, and the final table is compared with the
/// symplectic bracket.
pub fn build_iterated_bracket(n: usize) -> Result<BracketTable> {
    if n == 0 {
        return Err(Error::InvalidContext("n must be at least 1".into()));
    }
    let gens = PoissonElement::generators(n);
    let zero = DerivationSpec::zero(n);
    let mut entries = BTreeMap::new();
    let mut steps_verified = true;
    for k in 1..=2 * n {
        let delta = if k % 2 == 0 {
            DerivationSpec::delta(n, k / 2)?
        } else {
            zero.clone()
        };
        if k > 1 {
            let report = verify_poisson_extension_on(&zero, &delta, k - 1, 2)?;
            steps_verified &= report.passed;
        }
        for i in 1..k {
            entries.insert((k, i), delta.apply(&gens[i - 1])?);
        }
    }
    let mut matches_symplectic = true;
    for (&(j, i), v) in &entries {
        matches_symplectic &= poisson_bracket(&gens[j - 1], &gens[i - 1])? == *v;
    }
    Ok(BracketTable {
        n,
        entries,
        steps_verified,
        matches_symplectic,
    })
}
