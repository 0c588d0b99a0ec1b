//! The invariant suite behind `semiweyl selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bridge::{
    gamma_hat, iso_aq_to_wn, lift, psi, psi_inverse, semiclassical_bracket_of_lifts,
};
use crate::error::Result;
use crate::expr::parse_weyl;
use crate::monomial::enumerate_monomials;
use crate::morphisms::corpus::{pinned_shears, tame_corpus, tame_corpus_ahat};
use crate::morphisms::transport::{psi_transport, varphi};
use crate::morphisms::{compose, validate, Validation, WeylMorphism};
use crate::poisson::{poisson_bracket, verify_poisson_extension, DerivationSpec, PoissonElement};
use crate::random::{random_nonzero_weyl, random_poisson, random_weyl, Shape};
use crate::scalars::{rat, ratio, ParamPoly};
use crate::weyl::{
    commutator, monomial_count, rewrite_oracle, specialize, weyl_mul, WeylContext, WeylElement,
};

/// How many random cases each randomized check draws.
pub const SELFTEST_CASES: usize = 100;
pub const SELFTEST_SEED: u64 = 0x5E1F_7E57;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    /// First failing case, if any.
    pub failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

type Case = Result<Option<String>>;

fn randomized(
    rng: &mut ChaCha8Rng,
    cases: usize,
    mut case: impl FnMut(&mut ChaCha8Rng) -> Case,
) -> Result<(usize, Option<String>)> {
    for _ in 0..cases {
        if let Some(f) = case(rng)? {
            return Ok((cases, Some(f)));
        }
    }
    Ok((cases, None))
}

fn mismatch(
    what: &str,
    lhs: &impl std::fmt::Display,
    rhs: &impl std::fmt::Display,
) -> Option<String> {
    Some(format!("{what}: {lhs} != {rhs}"))
}

fn check_relations(_: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    let mut count = 0;
    for n in 1..=3 {
        for ctx in [WeylContext::formal(n), WeylContext::weyl(n)] {
            let gens = WeylElement::generators(&ctx);
            for j in 0..gens.len() {
                for i in 0..j {
                    count += 1;
                    let c = commutator(&gens[j], &gens[i])?;
                    let expected = if j % 2 == 1 && i == j - 1 {
                        WeylElement::scalar(&ctx, ctx.commutator_value())?
                    } else {
                        WeylElement::zero(&ctx)
                    };
                    if c != expected {
                        return Ok((
                            count,
                            mismatch(&format!("[x{}, x{}] in {ctx}", j + 1, i + 1), &c, &expected),
                        ));
                    }
                }
            }
        }
    }
    Ok((count, None))
}

fn check_oracle(rng: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    randomized(rng, SELFTEST_CASES, |rng| {
        let ctx = WeylContext::formal(rng.gen_range(1..=2));
        let shape = Shape::new(4);
        let (f, g) = (
            random_weyl(rng, &ctx, &shape),
            random_weyl(rng, &ctx, &shape),
        );
        let (a, b) = (weyl_mul(&f, &g)?, rewrite_oracle(&f, &g)?);
        Ok((a != b).then(|| format!("({f})*({g}): {a} != {b}")))
    })
}

fn check_associativity(rng: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    randomized(rng, SELFTEST_CASES, |rng| {
        let ctx = WeylContext::family(rng.gen_range(1..=2));
        let shape = Shape::new(3).with_exponents(-2, 2).with_terms(3);
        let f = random_weyl(rng, &ctx, &shape);
        let g = random_weyl(rng, &ctx, &shape);
        let k = random_weyl(rng, &ctx, &shape);
        let lhs = f.mul(&g)?.mul(&k)?;
        let rhs = f.mul(&g.mul(&k)?)?;
        Ok((lhs != rhs).then(|| format!("(fg)h != f(gh) for {f}; {g}; {k}")))
    })
}

fn check_regularity(rng: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    randomized(rng, SELFTEST_CASES, |rng| {
        let ctx = WeylContext::formal(rng.gen_range(1..=2));
        let f = random_nonzero_weyl(rng, &ctx, &Shape::new(4));
        let h = WeylElement::param(&ctx);
        let hf = h.mul(&f)?;
        if hf.is_zero() || hf != f.mul(&h)? {
            return Ok(Some(format!("h is not central and regular at {f}")));
        }
        let back = WeylElement::from_terms(
            &ctx,
            hf.terms()
                .map(|(m, c)| (m.clone(), c.div_by_h().expect("h divides"))),
        )?;
        Ok((back != f).then(|| format!("division by h fails at {f}")))
    })
}

fn check_specialize(rng: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    randomized(rng, SELFTEST_CASES, |rng| {
        let ctx = WeylContext::formal(rng.gen_range(1..=2));
        let shape = Shape::new(3);
        let (f, g) = (
            random_weyl(rng, &ctx, &shape),
            random_weyl(rng, &ctx, &shape),
        );
        let q = [rat(2), ratio(-1, 3), rat(1)][rng.gen_range(0..3)].clone();
        let lhs = specialize(&f.mul(&g)?, &q)?;
        let rhs = specialize(&f, &q)?.mul(&specialize(&g, &q)?)?;
        Ok((lhs != rhs).then(|| format!("specialize at {q}: {lhs} != {rhs}")))
    })
}

fn check_poisson_axioms(rng: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    randomized(rng, SELFTEST_CASES, |rng| {
        let n = rng.gen_range(1..=2);
        let shape = Shape::new(3).with_terms(3);
        let f = random_poisson(rng, n, &shape);
        let g = random_poisson(rng, n, &shape);
        let k = random_poisson(rng, n, &shape);
        let fg = poisson_bracket(&f, &g)?;
        if fg != poisson_bracket(&g, &f)?.neg() {
            return Ok(Some(format!("antisymmetry at {f}; {g}")));
        }
        let leibniz = f
            .mul(&poisson_bracket(&g, &k)?)?
            .add(&poisson_bracket(&f, &k)?.mul(&g)?)?;
        if poisson_bracket(&f.mul(&g)?, &k)? != leibniz {
            return Ok(Some(format!("Leibniz at {f}; {g}; {k}")));
        }
        let jacobi = poisson_bracket(&f, &poisson_bracket(&g, &k)?)?
            .add(&poisson_bracket(&g, &poisson_bracket(&k, &f)?)?)?
            .add(&poisson_bracket(&k, &fg)?)?;
        Ok((!jacobi.is_zero()).then(|| format!("Jacobi at {f}; {g}; {k}: {jacobi}")))
    })
}

fn check_semiclassical(rng: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    randomized(rng, SELFTEST_CASES, |rng| {
        let n = rng.gen_range(1..=2);
        let shape = Shape::new(4);
        let (a, b) = (
            random_poisson(rng, n, &shape),
            random_poisson(rng, n, &shape),
        );
        let ctx = WeylContext::formal(n);
        let h = WeylElement::param(&ctx);
        let f = lift(&a, &ctx)?.add(&h.mul(&random_weyl(rng, &ctx, &Shape::new(3)))?)?;
        let g = lift(&b, &ctx)?.add(&h.mul(&random_weyl(rng, &ctx, &Shape::new(3)))?)?;
        let lhs = semiclassical_bracket_of_lifts(&f, &g)?;
        let rhs = poisson_bracket(&a, &b)?;
        Ok((lhs != rhs).then(|| format!("bracket of lifts of {a}; {b}: {lhs} != {rhs}")))
    })
}

fn check_basis_count(_: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    let mut count = 0;
    for n in 1..=3 {
        for d in 0..=6 {
            count += 1;
            let listed = enumerate_monomials(2 * n, d).len();
            let expected = monomial_count(n, d);
            if num_bigint::BigInt::from(listed) != expected {
                return Ok((
                    count,
                    mismatch(&format!("monomials n={n} d={d}"), &listed, &expected),
                ));
            }
        }
    }
    Ok((count, None))
}

fn check_extension(_: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    let mut count = 0;
    for n in 1..=3 {
        for j in 1..=n {
            count += 1;
            let r = verify_poisson_extension(
                &DerivationSpec::zero(n),
                &DerivationSpec::delta(n, j)?,
                4,
            )?;
            if !r.passed {
                return Ok((count, Some(format!("delta_{} fails for n={n}", 2 * j))));
            }
        }
    }
    count += 1;
    let bad = DerivationSpec::new(vec![
        PoissonElement::generator(1, 1)?,
        PoissonElement::zero(1),
    ])?;
    let r = verify_poisson_extension(&DerivationSpec::zero(1), &bad, 4)?;
    Ok((
        count,
        r.passed.then(|| "counter-derivation accepted".to_string()),
    ))
}

fn check_gamma_hat(rng: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    randomized(rng, SELFTEST_CASES, |rng| {
        let ctx = WeylContext::family(rng.gen_range(1..=2));
        let shape = Shape::new(3);
        let (f, g) = (
            random_weyl(rng, &ctx, &shape),
            random_weyl(rng, &ctx, &shape),
        );
        let lhs = gamma_hat(&f.mul(&g)?)?;
        let rhs = gamma_hat(&f)?.mul(&gamma_hat(&g)?)?;
        Ok((lhs != rhs).then(|| format!("gamma_hat at {f}; {g}")))
    })
}

fn check_psi(rng: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    randomized(rng, SELFTEST_CASES, |rng| {
        let ctx = WeylContext::family(rng.gen_range(1..=2));
        let shape = Shape::new(3).with_exponents(-2, 2);
        let (f, g) = (
            random_weyl(rng, &ctx, &shape),
            random_weyl(rng, &ctx, &shape),
        );
        if psi_inverse(&psi(&f)?)? != f {
            return Ok(Some(format!("psi round trip at {f}")));
        }
        let lhs = psi(&f.mul(&g)?)?;
        let rhs = psi(&f)?.mul(&psi(&g)?)?;
        Ok((lhs != rhs).then(|| format!("psi multiplicative at {f}; {g}")))
    })
}

fn check_iso(rng: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    randomized(rng, SELFTEST_CASES, |rng| {
        let q = [rat(1), rat(2), rat(-1), ratio(1, 2)][rng.gen_range(0..4)].clone();
        let ctx = WeylContext::numeric(rng.gen_range(1..=2), q.clone())?;
        let shape = Shape::new(3);
        let (f, g) = (
            random_weyl(rng, &ctx, &shape),
            random_weyl(rng, &ctx, &shape),
        );
        let lhs = iso_aq_to_wn(&f.mul(&g)?, &q)?;
        let rhs = iso_aq_to_wn(&f, &q)?.mul(&iso_aq_to_wn(&g, &q)?)?;
        Ok((lhs != rhs).then(|| format!("iso at q={q}: {f}; {g}")))
    })
}

fn check_varphi(rng: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    let mut count = 0;
    for n in 1..=2 {
        let corpus = tame_corpus_ahat(n, rng.gen(), 12)?;
        for (k, s) in corpus.iter().enumerate() {
            count += 1;
            if !varphi(s)?.is_valid() {
                return Ok((count, Some(format!("phi({s}) is not Poisson"))));
            }
            let t = &corpus[(k + 1) % corpus.len()];
            let lhs = varphi(&compose(s, t)?)?;
            let rhs = compose(&varphi(s)?, &varphi(t)?)?;
            if !lhs.same_map(&rhs) {
                return Ok((count, mismatch("phi(st) vs phi(s)phi(t)", &lhs, &rhs)));
            }
        }
    }
    Ok((count, None))
}

fn check_psi_transport(rng: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    let mut count = 0;
    for n in 1..=2 {
        count += 1;
        if !psi_transport(&WeylMorphism::identity(&WeylContext::weyl(n)))?
            .morphism
            .is_identity()
        {
            return Ok((count, Some(format!("Psi(id) != id for n={n}"))));
        }
        let corpus = tame_corpus(n, rng.gen(), 12)?;
        // psi_transport errors if its two paths disagree
        let images = corpus
            .iter()
            .map(|s| psi_transport(s).map(|t| t.morphism))
            .collect::<Result<Vec<_>>>()?;
        for a in 0..images.len() {
            for b in a + 1..images.len() {
                count += 1;
                if images[a].same_map(&images[b]) {
                    return Ok((
                        count,
                        Some(format!(
                            "Psi not injective on {} and {}",
                            corpus[a], corpus[b]
                        )),
                    ));
                }
            }
        }
    }
    Ok((count, None))
}

fn check_round_trip(rng: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    randomized(rng, SELFTEST_CASES, |rng| {
        let n = rng.gen_range(1..=2);
        let ctx = match rng.gen_range(0..3) {
            0 => WeylContext::formal(n),
            1 => WeylContext::family(n),
            _ => WeylContext::weyl(n),
        };
        let f = random_weyl(rng, &ctx, &Shape::new(4).with_exponents(-2, 3));
        let text = f.to_string();
        let again = parse_weyl(&text, &ctx)?.to_string();
        Ok((again != text).then(|| format!("{text} re-rendered as {again}")))
    })
}

fn check_pinned_composite(_: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    let (s1, s2) = pinned_shears();
    let psi_c = validate(psi_transport(&compose(&s2, &s1)?)?.morphism);
    let found = match psi_c.validation() {
        Validation::Invalid(w) => w.found.clone(),
        other => format!("{other:?}"),
    };
    let expected = ParamPoly::constant(rat(3)).to_string();
    Ok((
        1,
        (found != expected)
            .then(|| format!("bracket of Psi(s2 s1) is {found}, expected {expected}")),
    ))
}

type Check = fn(&mut ChaCha8Rng) -> Result<(usize, Option<String>)>;

const CHECKS: [(&str, Check); 16] = [
    ("relations", check_relations),
    ("oracle-product", check_oracle),
    ("associativity", check_associativity),
    ("parameter-regular", check_regularity),
    ("specialize-multiplicative", check_specialize),
    ("poisson-axioms", check_poisson_axioms),
    ("semiclassical-bracket", check_semiclassical),
    ("basis-count", check_basis_count),
    ("poisson-extension", check_extension),
    ("gamma-hat-multiplicative", check_gamma_hat),
    ("psi-isomorphism", check_psi),
    ("fixed-parameter-iso", check_iso),
    ("phi-homomorphism", check_varphi),
    ("psi-transport", check_psi_transport),
    ("render-round-trip", check_round_trip),
    ("pinned-composite-bracket", check_pinned_composite),
];

/// Runs every check on its own seeded stream, in parallel.
pub fn run_selftest(seed: u64) -> Vec<CheckOutcome> {
    CHECKS
        .par_iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            match check(&mut rng) {
                Ok((cases, failure)) => CheckOutcome {
                    name,
                    cases,
                    failure,
                },
                Err(e) => CheckOutcome {
                    name,
                    cases: 0,
                    failure: Some(format!("error: {e}")),
                },
            }
        })
        .collect()
}
