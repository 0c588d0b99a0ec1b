//! Endomorphisms given by generator images: validation against the
//! defining relations, application, composition, and the transports to the
//! Poisson side.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poisson::{poisson_bracket, PoissonElement};
use crate::weyl::{commutator, Mode, WeylContext, WeylElement};

pub mod audit;
pub mod corpus;
pub mod transport;

pub use corpus::TameGenerator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MorphismKind {
    /// Endomorphism of a Weyl-type algebra (`W_n`, `A_q`, ...).
    WeylEndo,
    /// `q̂`-fixing endomorphism of `Â`.
    AHatEndo,
    /// Poisson endomorphism of `B_n`.
    PoissonEndo,
}

impl MorphismKind {
    pub fn name(self) -> &'static str {
        match self {
            MorphismKind::WeylEndo => "WeylEndo",
            MorphismKind::AHatEndo => "AHatEndo",
            MorphismKind::PoissonEndo => "PoissonEndo",
        }
    }
}

impl fmt::Display for MorphismKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The first generator pair `(j, i)`, `j > i`, whose images break the
/// defining relation, with both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationWitness {
    pub j: usize,
    pub i: usize,
    /// Relation value the generators satisfy.
    pub expected: String,
    /// Value computed from the images.
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validation {
    Unchecked,
    Valid,
    Invalid(RelationWitness),
}

/// Algebras whose endomorphisms are presented by generator images.
pub trait PresentedAlgebra: Sized + Clone + PartialEq + fmt::Display + Send + Sync {
    type Ctx: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync;

    fn ctx_of(&self) -> Self::Ctx;
    fn arity(ctx: &Self::Ctx) -> usize;
    fn kind(ctx: &Self::Ctx) -> MorphismKind;
    fn generators(ctx: &Self::Ctx) -> Vec<Self>;
    /// The pairing the relations are stated in: commutator or bracket.
    fn pairing(a: &Self, b: &Self) -> Result<Self>;
    /// Image of `f` under the algebra map sending `x_i` to `images[i-1]`.
    fn substitute(f: &Self, images: &[Self]) -> Result<Self>;
}

impl PresentedAlgebra for WeylElement {
    type Ctx = WeylContext;

    fn ctx_of(&self) -> WeylContext {
        self.context().clone()
    }

    fn arity(ctx: &WeylContext) -> usize {
        ctx.n()
    }

    fn kind(ctx: &WeylContext) -> MorphismKind {
        match ctx.mode() {
            Mode::FamilyQ => MorphismKind::AHatEndo,
            _ => MorphismKind::WeylEndo,
        }
    }

    fn generators(ctx: &WeylContext) -> Vec<Self> {
        WeylElement::generators(ctx)
    }

    fn pairing(a: &Self, b: &Self) -> Result<Self> {
        commutator(a, b)
    }

    /// Ordered product `images[0]^a_1 ··· images[2n-1]^a_2n` per standard
    /// monomial, coefficients carried through unchanged.
    fn substitute(f: &Self, images: &[Self]) -> Result<Self> {
        let ctx = f.context();
        let mut powers: HashMap<(usize, u32), WeylElement> = HashMap::new();
        let mut out = WeylElement::zero(ctx);
        for (m, c) in f.terms() {
            let mut prod = WeylElement::one(ctx);
            for (slot, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = match powers.get(&(slot, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = images[slot].pow(e)?;
                        powers.insert((slot, e), p.clone());
                        p
                    }
                };
                prod = prod.mul(&p)?;
            }
            out = out.add(&prod.scale(c)?)?;
        }
        Ok(out)
    }
}

impl PresentedAlgebra for PoissonElement {
    type Ctx = PoissonArity;

    fn ctx_of(&self) -> PoissonArity {
        PoissonArity(self.n())
    }

    fn arity(ctx: &PoissonArity) -> usize {
        ctx.0
    }

    fn kind(_: &PoissonArity) -> MorphismKind {
        MorphismKind::PoissonEndo
    }

    fn generators(ctx: &PoissonArity) -> Vec<Self> {
        PoissonElement::generators(ctx.0)
    }

    fn pairing(a: &Self, b: &Self) -> Result<Self> {
        poisson_bracket(a, b)
    }

    fn substitute(f: &Self, images: &[Self]) -> Result<Self> {
        let mut powers: HashMap<(usize, u32), PoissonElement> = HashMap::new();
        let mut out = PoissonElement::zero(f.n());
        for (m, c) in f.terms() {
            let mut prod = PoissonElement::one(f.n());
            for (slot, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = powers
                    .entry((slot, e))
                    .or_insert_with(|| images[slot].pow(e))
                    .clone();
                prod = prod.mul(&p)?;
            }
            out = out.add(&prod.scale(c))?;
        }
        Ok(out)
    }
}

/// Arity `n` of `B_n`, the context of Poisson elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PoissonArity(pub usize);

impl fmt::Display for PoissonArity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bn(n={})", self.0)
    }
}

/// An endomorphism presented by the images of `x_1..x_{2n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GenMorphism<E: PresentedAlgebra> {
    ctx: E::Ctx,
    images: Vec<E>,
    validation: Validation,
    word: Option<Vec<TameGenerator>>,
}

pub type WeylMorphism = GenMorphism<WeylElement>;
pub type PoissonMorphism = GenMorphism<PoissonElement>;

impl<E: PresentedAlgebra> GenMorphism<E> {
    pub fn new(ctx: &E::Ctx, images: Vec<E>) -> Result<Self> {
        let vars = 2 * E::arity(ctx);
        if images.len() != vars {
            return Err(Error::Malformed(format!(
                "expected {vars} generator images, got {}",
                images.len()
            )));
        }
        if let Some(bad) = images.iter().find(|e| &e.ctx_of() != ctx) {
            return Err(Error::ContextMismatch {
                left: bad.ctx_of().to_string(),
                right: ctx.to_string(),
            });
        }
        Ok(Self {
            ctx: ctx.clone(),
            images,
            validation: Validation::Unchecked,
            word: None,
        })
    }

    pub fn identity(ctx: &E::Ctx) -> Self {
        Self {
            ctx: ctx.clone(),
            images: E::generators(ctx),
            validation: Validation::Valid,
            word: Some(Vec::new()),
        }
    }

    pub fn context(&self) -> &E::Ctx {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        E::arity(&self.ctx)
    }

    pub fn kind(&self) -> MorphismKind {
        E::kind(&self.ctx)
    }

    pub fn images(&self) -> &[E] {
        &self.images
    }

    /// Image of `x_i`, 1-based.
    pub fn image(&self, i: usize) -> &E {
        &self.images[i - 1]
    }

    pub fn validation(&self) -> &Validation {
        &self.validation
    }

    pub fn is_valid(&self) -> bool {
        self.validation == Validation::Valid
    }

    /// Generator word this morphism was built from, if known.
    pub fn word(&self) -> Option<&[TameGenerator]> {
        self.word.as_deref()
    }

    pub fn with_word(mut self, word: Option<Vec<TameGenerator>>) -> Self {
        self.word = word;
        self
    }

    pub(crate) fn with_validation(mut self, v: Validation) -> Self {
        self.validation = v;
        self
    }

    pub fn is_identity(&self) -> bool {
        self.images == E::generators(&self.ctx)
    }

    /// Same generator images (validation status and word ignored).
    pub fn same_map(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.images == other.images
    }

    /// First generator pair whose images break the relation, if any.
    pub fn relation_witness(&self) -> Result<Option<RelationWitness>> {
        let gens = E::generators(&self.ctx);
        for j in 1..=gens.len() {
            for i in 1..j {
                let expected = E::pairing(&gens[j - 1], &gens[i - 1])?;
                let found = E::pairing(&self.images[j - 1], &self.images[i - 1])?;
                if found != expected {
                    return Ok(Some(RelationWitness {
                        j,
                        i,
                        expected: expected.to_string(),
                        found: found.to_string(),
                    }));
                }
            }
        }
        Ok(None)
    }

    fn require_valid(&self) -> Result<()> {
        if !self.is_valid() {
            return Err(Error::NotValidated);
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::KindMismatch {
                left: format!("{} on {}", self.kind(), self.ctx),
                right: format!("{} on {}", other.kind(), other.ctx),
            });
        }
        Ok(())
    }

    /// `(self ∘ inner)(x_i) = self(inner(x_i))` without validity checks.
    pub(crate) fn compose_unchecked(&self, inner: &Self) -> Result<Self> {
        self.check_compatible(inner)?;
        let images = inner
            .images
            .iter()
            .map(|g| E::substitute(g, &self.images))
            .collect::<Result<Vec<_>>>()?;
        let word = match (&self.word, &inner.word) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        Ok(Self {
            ctx: self.ctx.clone(),
            images,
            validation: Validation::Unchecked,
            word,
        })
    }
}

/// Checks every generator pair against the defining relation and records
/// the outcome. Invalidity is data, not an error.
pub fn validate<E: PresentedAlgebra>(m: GenMorphism<E>) -> GenMorphism<E> {
    let v = match m.relation_witness() {
        Ok(None) => Validation::Valid,
        Ok(Some(w)) => Validation::Invalid(w),
        Err(e) => Validation::Invalid(RelationWitness {
            j: 0,
            i: 0,
            expected: "computable relation".into(),
            found: e.to_string(),
        }),
    };
    m.with_validation(v)
}

/// Algebra-map image of `f`.
pub fn apply<E: PresentedAlgebra>(m: &GenMorphism<E>, f: &E) -> Result<E> {
    m.require_valid()?;
    if f.ctx_of() != m.ctx {
        return Err(Error::ContextMismatch {
            left: f.ctx_of().to_string(),
            right: m.ctx.to_string(),
        });
    }
    E::substitute(f, &m.images)
}

/// `m2 ∘ m1`, revalidated.
pub fn compose<E: PresentedAlgebra>(
    m2: &GenMorphism<E>,
    m1: &GenMorphism<E>,
) -> Result<GenMorphism<E>> {
    m2.check_compatible(m1)?;
    m2.require_valid()?;
    m1.require_valid()?;
    Ok(validate(m2.compose_unchecked(m1)?))
}

/// Certifies `w` as a two-sided inverse of `m` on generators.
pub fn verify_inverse<E: PresentedAlgebra>(m: &GenMorphism<E>, w: &GenMorphism<E>) -> Result<bool> {
    let left = compose(m, w)?;
    let right = compose(w, m)?;
    Ok(left.is_identity() && right.is_identity())
}

impl<E: PresentedAlgebra> fmt::Display for GenMorphism<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}: ", self.kind(), self.ctx)?;
        for (i, img) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "x{} -> {}", i + 1, img)?;
        }
        Ok(())
    }
}

/// Builds a Weyl-side morphism, rejecting `AHatEndo` images outside `Â`.
pub fn weyl_morphism(ctx: &WeylContext, images: Vec<WeylElement>) -> Result<WeylMorphism> {
    if ctx.mode() == &Mode::FamilyQ {
        for img in &images {
            if !crate::bridge::in_a_hat(img)? {
                return Err(Error::NotInAHat);
            }
        }
    }
    GenMorphism::new(ctx, images)
}

pub fn poisson_morphism(n: usize, images: Vec<PoissonElement>) -> Result<PoissonMorphism> {
    GenMorphism::new(&PoissonArity(n), images)
}
