//! Tame automorphisms: linear symplectic maps and triangular shears, and a
//! seeded generator of random compositions.

use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bridge::lift;
use crate::error::{Error, Result};
use crate::monomial::StandardMonomial;
use crate::poisson::{partial, PoissonElement};
use crate::scalars::{rat, ratio, Rational};
use crate::weyl::{WeylContext, WeylElement};

use super::{compose, validate, weyl_morphism, WeylMorphism};

/// One letter of a tame word.
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum TameGenerator {
    /// `x_{2l-1} ↦ a·x_{2l-1} + b·x_{2l}`, `x_{2l} ↦ c·x_{2l-1} + d·x_{2l}`
    /// with `ad - bc = 1`, on the 1-based pair `l`; other generators fixed.
    Linear {
        pair: usize,
        a: Rational,
        b: Rational,
        c: Rational,
        d: Rational,
    },
    /// `x_{2l} ↦ x_{2l} + h^scale·∂F/∂x_{2l-1}` for every pair, `F` in the
    /// odd generators only.
    Shear {
        potential: PoissonElement,
        scale: u32,
    },
    /// `x_{2l-1} ↦ x_{2l-1} + h^scale·∂G/∂x_{2l}`, `G` in the even
    /// generators only.
    DualShear {
        potential: PoissonElement,
        scale: u32,
    },
}

impl TameGenerator {
    pub fn n(&self) -> Option<usize> {
        match self {
            TameGenerator::Linear { .. } => None,
            TameGenerator::Shear { potential, .. } | TameGenerator::DualShear { potential, .. } => {
                Some(potential.n())
            }
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            TameGenerator::Linear { pair, a, b, c, d } => TameGenerator::Linear {
                pair: *pair,
                a: d.clone(),
                b: -b,
                c: -c,
                d: a.clone(),
            },
            TameGenerator::Shear { potential, scale } => TameGenerator::Shear {
                potential: potential.neg(),
                scale: *scale,
            },
            TameGenerator::DualShear { potential, scale } => TameGenerator::DualShear {
                potential: potential.neg(),
                scale: *scale,
            },
        }
    }

    fn check(&self, ctx: &WeylContext) -> Result<()> {
        match self {
            TameGenerator::Linear { pair, a, b, c, d } => {
                if *pair == 0 || *pair > ctx.n() {
                    return Err(Error::IndexOutOfRange {
                        index: *pair,
                        max: ctx.n(),
                    });
                }
                if a * d - b * c != Rational::one() {
                    return Err(Error::Malformed(
                        "linear generator must have determinant 1".into(),
                    ));
                }
            }
            TameGenerator::Shear { potential, .. } | TameGenerator::DualShear { potential, .. } => {
                if potential.n() != ctx.n() {
                    return Err(Error::ArityMismatch {
                        left: potential.n(),
                        right: ctx.n(),
                    });
                }
                let parity = usize::from(matches!(self, TameGenerator::Shear { .. }));
                let stray = potential.terms().any(|(m, _)| {
                    m.exponents()
                        .iter()
                        .enumerate()
                        .any(|(s, &e)| e > 0 && s % 2 == parity)
                });
                if stray {
                    return Err(Error::Malformed(
                        "shear potentials use only odd generators, dual shear potentials only even ones".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// The generator as a validated morphism of the algebra `ctx`.
    pub fn to_morphism(&self, ctx: &WeylContext) -> Result<WeylMorphism> {
        self.check(ctx)?;
        let mut images = WeylElement::generators(ctx);
        match self {
            TameGenerator::Linear { pair, a, b, c, d } => {
                let p = &WeylElement::generators(ctx)[2 * pair - 2];
                let q = &WeylElement::generators(ctx)[2 * pair - 1];
                let combo = |s: &Rational, t: &Rational| -> Result<WeylElement> {
                    p.scale(&s.clone().into())?
                        .add(&q.scale(&t.clone().into())?)
                };
                images[2 * pair - 2] = combo(a, b)?;
                images[2 * pair - 1] = combo(c, d)?;
            }
            TameGenerator::Shear { potential, scale }
            | TameGenerator::DualShear { potential, scale } => {
                let factor = WeylElement::param(ctx).pow(*scale)?;
                let offset = usize::from(matches!(self, TameGenerator::Shear { .. }));
                for l in 0..ctx.n() {
                    // shear: target x_{2l}, derivative in x_{2l-1}; dual the other way round
                    let (target, wrt) = if offset == 1 {
                        (2 * l + 1, 2 * l)
                    } else {
                        (2 * l, 2 * l + 1)
                    };
                    let d = partial(potential, wrt + 1)?;
                    if d.is_zero() {
                        continue;
                    }
                    let shift = factor.mul(&lift(&d, ctx)?)?;
                    images[target] = images[target].add(&shift)?;
                }
            }
        }
        let m = validate(weyl_morphism(ctx, images)?);
        debug_assert!(m.is_valid(), "tame generators are automorphisms");
        Ok(m.with_word(Some(vec![self.clone()])))
    }
}

/// `g_1 ∘ g_2 ∘ ... ∘ g_m` in the algebra `ctx`, carrying the word.
pub fn evaluate_word(word: &[TameGenerator], ctx: &WeylContext) -> Result<WeylMorphism> {
    let mut acc = WeylMorphism::identity(ctx);
    for g in word {
        acc = compose(&acc, &g.to_morphism(ctx)?)?;
    }
    Ok(acc.with_word(Some(word.to_vec())))
}

/// Word of the inverse: reversed, each letter inverted.
pub fn inverse_word(word: &[TameGenerator]) -> Vec<TameGenerator> {
    word.iter().rev().map(TameGenerator::inverse).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusConfig {
    pub n: usize,
    pub seed: u64,
    pub size: usize,
    /// Longest generator word in a corpus element.
    pub max_word: usize,
    /// Largest total degree of a shear potential (its derivative has one less).
    pub max_potential_degree: u32,
    /// Largest `h`-power on shears. Zero for `W_n`; positive values give
    /// `Â`-specific maps such as `x2 ↦ x2 + q̂·x1²`.
    pub max_scale: u32,
}

impl CorpusConfig {
    pub fn new(n: usize, seed: u64, size: usize) -> Self {
        Self {
            n,
            seed,
            size,
            max_word: 2,
            max_potential_degree: 3,
            max_scale: 0,
        }
    }
}

/// Seeded random tame word over `n` pairs.
pub fn random_word(rng: &mut impl Rng, cfg: &CorpusConfig) -> Vec<TameGenerator> {
    let len = rng.gen_range(1..=cfg.max_word.max(1));
    (0..len).map(|_| random_generator(rng, cfg)).collect()
}

fn random_generator(rng: &mut impl Rng, cfg: &CorpusConfig) -> TameGenerator {
    let n = cfg.n;
    match rng.gen_range(0..3) {
        0 => {
            let pair = rng.gen_range(1..=n);
            let k = rat(*[-3i64, -2, -1, 1, 2, 3].choose(rng).expect("nonempty"));
            let (a, b, c, d) = match rng.gen_range(0..4) {
                0 => (rat(1), k, rat(0), rat(1)),
                1 => (rat(1), rat(0), k, rat(1)),
                2 => (rat(0), rat(-1), rat(1), rat(0)),
                _ => (rat(2), rat(0), rat(0), ratio(1, 2)),
            };
            TameGenerator::Linear { pair, a, b, c, d }
        }
        kind => {
            let parity = if kind == 1 { 0 } else { 1 };
            let potential = random_potential(rng, n, parity, cfg.max_potential_degree.max(2));
            let scale = if cfg.max_scale == 0 {
                0
            } else {
                rng.gen_range(0..=cfg.max_scale)
            };
            if kind == 1 {
                TameGenerator::Shear { potential, scale }
            } else {
                TameGenerator::DualShear { potential, scale }
            }
        }
    }
}

/// Polynomial in the generators of one parity (0: odd `x_1, x_3, ..`;
/// 1: even), with 1–2 terms of degree 2..=max_degree.
fn random_potential(
    rng: &mut impl Rng,
    n: usize,
    parity: usize,
    max_degree: u32,
) -> PoissonElement {
    loop {
        let mut out = PoissonElement::zero(n);
        for _ in 0..rng.gen_range(1..=2) {
            let degree = rng.gen_range(2..=max_degree);
            let mut exps = vec![0u32; 2 * n];
            for _ in 0..degree {
                exps[2 * rng.gen_range(0..n) + parity] += 1;
            }
            let c = rat(*[-2i64, -1, 1, 2].choose(rng).expect("nonempty"));
            out.add_term(StandardMonomial::from_exponents(exps), c);
        }
        if !out.is_zero() {
            return out;
        }
    }
}

/// `size` pairwise-distinct tame automorphisms of `ctx`, deterministic in
/// the seed. Every element is validated and carries its word.
pub fn tame_corpus_in(ctx: &WeylContext, cfg: &CorpusConfig) -> Result<Vec<WeylMorphism>> {
    if ctx.n() != cfg.n {
        return Err(Error::ArityMismatch {
            left: ctx.n(),
            right: cfg.n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out: Vec<WeylMorphism> = Vec::with_capacity(cfg.size);
    let mut attempts = 0usize;
    while out.len() < cfg.size {
        attempts += 1;
        if attempts > 50 * cfg.size.max(1) {
            return Err(Error::Malformed(
                "could not generate enough distinct corpus elements".into(),
            ));
        }
        let word = random_word(&mut rng, cfg);
        let m = evaluate_word(&word, ctx)?;
        if m.is_identity() || out.iter().any(|o| o.same_map(&m)) {
            continue;
        }
        out.push(m);
    }
    Ok(out)
}

/// Tame corpus of `W_n`.
pub fn tame_corpus(n: usize, seed: u64, size: usize) -> Result<Vec<WeylMorphism>> {
    tame_corpus_in(&WeylContext::weyl(n), &CorpusConfig::new(n, seed, size))
}

/// Tame corpus of `q̂`-fixing endomorphisms of `Â`, with `q̂`-scaled shears.
pub fn tame_corpus_ahat(n: usize, seed: u64, size: usize) -> Result<Vec<WeylMorphism>> {
    let cfg = CorpusConfig {
        max_scale: 1,
        ..CorpusConfig::new(n, seed, size)
    };
    tame_corpus_in(&WeylContext::family(n), &cfg)
}

/// The two shears `σ₁: x2 ↦ x2 + x1²` and `σ₂: x1 ↦ x1 + x2²` of `W_1`.
pub fn pinned_shears() -> (WeylMorphism, WeylMorphism) {
    let ctx = WeylContext::weyl(1);
    let x1 = PoissonElement::generator(1, 1).expect("n = 1");
    let x2 = PoissonElement::generator(1, 2).expect("n = 1");
    let third = Rational::new(1.into(), 3.into());
    let s1 = TameGenerator::Shear {
        potential: x1.pow(3).scale(&third),
        scale: 0,
    };
    let s2 = TameGenerator::DualShear {
        potential: x2.pow(3).scale(&third),
        scale: 0,
    };
    (
        s1.to_morphism(&ctx).expect("valid shear"),
        s2.to_morphism(&ctx).expect("valid shear"),
    )
}
