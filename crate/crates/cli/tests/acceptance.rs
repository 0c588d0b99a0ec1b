//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Every comparison is exact rational equality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semiweyl::bridge::{
    gamma_hat, in_a_hat, iso_aq_to_wn, lift, psi, psi_inverse, semiclassical_bracket,
    semiclassical_bracket_of_lifts,
};
use semiweyl::io::weyl_morphism_json;
use semiweyl::monomial::enumerate_monomials;
use semiweyl::morphisms::audit::{AuditReport, Claim};
use semiweyl::morphisms::corpus::{pinned_shears, tame_corpus, tame_corpus_ahat};
use semiweyl::morphisms::transport::{psi_transport, varphi};
use semiweyl::morphisms::{compose, validate, weyl_morphism};
use semiweyl::poisson::{verify_poisson_extension, DerivationSpec};
use semiweyl::random::{random_poisson, random_weyl, Shape};
use semiweyl::scalars::{rat, ratio, ParamPoly, Rational};
use semiweyl::weyl::{apply_derivation_nu, commutator, rewrite_oracle, weyl_mul};
use semiweyl::{
    parse_weyl, poisson_bracket, PoissonElement, StandardMonomial, WeylContext, WeylElement,
    WeylMorphism,
};

/// Comparisons are exact: no numeric tolerance is admitted anywhere.
const TOLERANCE: &str = "exact";
const SEED: u64 = 20_240_601;

const ORACLE_PRODUCTS: usize = 500;
const BRACKET_PAIRS: usize = 300;
const POISSON_TRIPLES: usize = 300;
const GAMMA_PAIRS: usize = 200;
const PSI_ELEMENTS: usize = 200;
const ISO_PAIRS_PER_Q: usize = 50;
const AHAT_CORPUS: usize = 20;
const TAME_CORPUS: usize = 20;
const ROUND_TRIPS: usize = 200;
/// Value of `{Ψ(σ₂σ₁)(x2), Ψ(σ₂σ₁)(x1)}`, confirmed independently below.
const PINNED_BRACKET: i64 = 3;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
/// Sparse element: exponent vector with `(param exponent, value)` coefficient pairs.
type SparseTerm<'a> = (&'a [u32], &'a [(i64, i64)]);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eq<T: PartialEq + Display>(what: &str, lhs: &T, rhs: &T) -> Result<(), String> {
    check(lhs == rhs, || format!("{what}: {lhs} != {rhs}"))
}

fn lib<T>(r: semiweyl::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("library error: {e}"))
}

fn rng(k: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED.wrapping_mul(31).wrapping_add(k))
}

fn mono(exps: &[u32]) -> StandardMonomial {
    StandardMonomial::from_exponents(exps.to_vec())
}

fn element(ctx: &WeylContext, terms: &[SparseTerm]) -> WeylElement {
    WeylElement::from_terms(
        ctx,
        terms.iter().map(|(m, c)| {
            (
                mono(m),
                ParamPoly::from_terms(c.iter().map(|&(e, v)| (e, rat(v)))),
            )
        }),
    )
    .expect("well-formed")
}

/// Symplectic bracket from its definition on raw exponent maps.
fn bracket_by_definition(f: &PoissonElement, g: &PoissonElement) -> BTreeMap<Vec<u32>, Rational> {
    let d = |e: &PoissonElement, slot: usize| -> Vec<(Vec<u32>, Rational)> {
        e.terms()
            .filter(|(m, _)| m.exponent(slot) > 0)
            .map(|(m, c)| {
                let mut x = m.exponents().to_vec();
                let k = x[slot];
                x[slot] -= 1;
                (x, c * rat(k as i64))
            })
            .collect()
    };
    let mut out: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    let mut acc = |a: Vec<(Vec<u32>, Rational)>, b: Vec<(Vec<u32>, Rational)>, sign: i64| {
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let key = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *out.entry(key).or_insert_with(|| rat(0)) += ca * cb * rat(sign);
            }
        }
    };
    for l in 0..f.n() {
        acc(d(f, 2 * l), d(g, 2 * l + 1), -1);
        acc(d(g, 2 * l), d(f, 2 * l + 1), 1);
    }
    out.retain(|_, c| c != &rat(0));
    out
}

fn c1_relations() -> Outcome {
    let mut checked = 0;
    for n in 1..=3 {
        for (ctx, central) in [
            (WeylContext::formal(n), ParamPoly::h()),
            (WeylContext::weyl(n), ParamPoly::one()),
        ] {
            let gens = WeylElement::generators(&ctx);
            for j in 0..2 * n {
                for i in 0..j {
                    let expected = if j % 2 == 1 && i + 1 == j {
                        lib(WeylElement::scalar(&ctx, central.clone()))?
                    } else {
                        WeylElement::zero(&ctx)
                    };
                    let c = lib(commutator(&gens[j], &gens[i]))?;
                    let by_rewriting = lib(rewrite_oracle(&gens[j], &gens[i]))?
                        .sub(&lib(rewrite_oracle(&gens[i], &gens[j]))?);
                    eq(&format!("[x{}, x{}] in {ctx}", j + 1, i + 1), &c, &expected)?;
                    eq("rewriting commutator", &lib(by_rewriting)?, &expected)?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} generator pairs"))
}

fn c2_oracle() -> Outcome {
    let mut r = rng(2);
    let shape = Shape::new(4);
    for k in 0..ORACLE_PRODUCTS {
        let ctx = WeylContext::formal(r.gen_range(1..=2));
        let (f, g) = (
            random_weyl(&mut r, &ctx, &shape),
            random_weyl(&mut r, &ctx, &shape),
        );
        eq(
            &format!("product {k}: ({f})*({g})"),
            &lib(weyl_mul(&f, &g))?,
            &lib(rewrite_oracle(&f, &g))?,
        )?;
    }
    let a1 = WeylContext::formal(1);
    let x1 = lib(WeylElement::generator(&a1, 1))?;
    let x2 = lib(WeylElement::generator(&a1, 2))?;
    let x2sq = lib(x2.pow(2))?;
    // x2^2 x1 = x1 x2^2 + 2h x2
    let want = element(&a1, &[(&[1, 2], &[(0, 1)]), (&[0, 1], &[(1, 2)])]);
    eq("x2^2*x1", &lib(weyl_mul(&x2sq, &x1))?, &want)?;
    eq(
        "x2^2*x1 by rewriting",
        &lib(rewrite_oracle(&x2sq, &x1))?,
        &want,
    )?;
    // x2^2 x1^2 = x1^2 x2^2 + 4h x1 x2 + 2h^2
    let want = element(
        &a1,
        &[
            (&[2, 2], &[(0, 1)]),
            (&[1, 1], &[(1, 4)]),
            (&[0, 0], &[(2, 2)]),
        ],
    );
    let x1sq = lib(x1.pow(2))?;
    eq("x2^2*x1^2", &lib(weyl_mul(&x2sq, &x1sq))?, &want)?;
    eq(
        "x2^2*x1^2 by rewriting",
        &lib(rewrite_oracle(&x2sq, &x1sq))?,
        &want,
    )?;
    // nu_2(x1^3) = 3h x1^2, and equals [x2, x1^3]
    let x1cube = lib(x1.pow(3))?;
    let want = element(&a1, &[(&[2, 0], &[(1, 3)])]);
    eq("nu_2(x1^3)", &lib(apply_derivation_nu(&x1cube, 1))?, &want)?;
    eq("[x2, x1^3]", &lib(commutator(&x2, &x1cube))?, &want)?;
    Ok(format!(
        "{ORACLE_PRODUCTS} random products + 3 pinned identities"
    ))
}

fn c3_semiclassical() -> Outcome {
    let mut r = rng(3);
    for k in 0..BRACKET_PAIRS {
        let n = r.gen_range(1..=2);
        let (a, b) = (
            random_poisson(&mut r, n, &Shape::new(4)),
            random_poisson(&mut r, n, &Shape::new(4)),
        );
        let symplectic = lib(poisson_bracket(&a, &b))?;
        eq(
            &format!("pair {k}: {{{a}, {b}}}"),
            &lib(semiclassical_bracket(&a, &b))?,
            &symplectic,
        )?;
        let ctx = WeylContext::formal(n);
        let h = WeylElement::param(&ctx);
        let perturbed = |r: &mut ChaCha8Rng, e: &PoissonElement| -> Result<WeylElement, String> {
            lib(lib(lift(e, &ctx))?.add(&lib(h.mul(&random_weyl(r, &ctx, &Shape::new(3))))?))
        };
        let (f, g) = (perturbed(&mut r, &a)?, perturbed(&mut r, &b)?);
        eq(
            &format!("pair {k} perturbed lifts"),
            &lib(semiclassical_bracket_of_lifts(&f, &g))?,
            &symplectic,
        )?;
    }
    Ok(format!(
        "{BRACKET_PAIRS} pairs, canonical and perturbed lifts"
    ))
}

fn c4_poisson() -> Outcome {
    let mut r = rng(4);
    let shape = Shape::new(3).with_terms(3);
    let b = |x: &PoissonElement, y: &PoissonElement| lib(poisson_bracket(x, y));
    for k in 0..POISSON_TRIPLES {
        let n = r.gen_range(1..=2);
        let f = random_poisson(&mut r, n, &shape);
        let g = random_poisson(&mut r, n, &shape);
        let h = random_poisson(&mut r, n, &shape);
        let fg = b(&f, &g)?;
        let as_map: BTreeMap<Vec<u32>, Rational> = fg
            .terms()
            .map(|(m, c)| (m.exponents().to_vec(), c.clone()))
            .collect();
        check(as_map == bracket_by_definition(&f, &g), || {
            format!("triple {k}: bracket differs from definition")
        })?;
        eq(&format!("triple {k} antisymmetry"), &fg, &b(&g, &f)?.neg())?;
        let leibniz = lib(lib(f.mul(&b(&g, &h)?))?.add(&lib(b(&f, &h)?.mul(&g))?))?;
        eq(
            &format!("triple {k} Leibniz"),
            &b(&lib(f.mul(&g))?, &h)?,
            &leibniz,
        )?;
        let jacobi = lib(lib(b(&f, &b(&g, &h)?)?.add(&b(&g, &b(&h, &f)?)?))?.add(&b(&h, &fg)?))?;
        check(jacobi.is_zero(), || format!("triple {k} Jacobi: {jacobi}"))?;
    }
    let mut extensions = 0;
    for n in 1..=3 {
        for j in 1..=n {
            let rep = lib(verify_poisson_extension(
                &DerivationSpec::zero(n),
                &lib(DerivationSpec::delta(n, j))?,
                4,
            ))?;
            check(rep.passed, || format!("delta_{} rejected for n={n}", 2 * j))?;
            extensions += 1;
        }
    }
    let bad = lib(DerivationSpec::new(vec![
        lib(PoissonElement::generator(1, 1))?,
        PoissonElement::zero(1),
    ]))?;
    let rep = lib(verify_poisson_extension(&DerivationSpec::zero(1), &bad, 4))?;
    check(!rep.passed, || "counter-derivation accepted".into())?;
    Ok(format!("{POISSON_TRIPLES} triples, {extensions} symplectic extensions, counter-derivation rejected"))
}

fn binomial_by_product(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn c5_counting() -> Outcome {
    for n in 1..=3usize {
        for d in 0..=6u32 {
            let listed = enumerate_monomials(2 * n, d);
            let distinct: BTreeSet<_> = listed.iter().cloned().collect();
            check(
                distinct.len() == listed.len() && listed.iter().all(|m| m.degree() <= d),
                || format!("n={n} d={d}: enumeration not a set of monomials of degree <= d"),
            )?;
            let expected = binomial_by_product((2 * n) as u128 + d as u128, (2 * n) as u128);
            check(listed.len() as u128 == expected, || {
                format!("n={n} d={d}: {} != {expected}", listed.len())
            })?;
            eq(
                &format!("count formula n={n} d={d}"),
                &semiweyl::weyl::monomial_count(n, d),
                &expected.into(),
            )?;
        }
    }
    Ok("n <= 3, d <= 6".into())
}

fn c6_bridge() -> Outcome {
    let mut r = rng(6);
    for k in 0..GAMMA_PAIRS {
        let ctx = WeylContext::family(r.gen_range(1..=2));
        let (f, g) = (
            random_weyl(&mut r, &ctx, &Shape::new(3)),
            random_weyl(&mut r, &ctx, &Shape::new(3)),
        );
        let lhs = lib(gamma_hat(&lib(f.mul(&g))?))?;
        eq(
            &format!("Gamma pair {k}"),
            &lhs,
            &lib(lib(gamma_hat(&f))?.mul(&lib(gamma_hat(&g))?))?,
        )?;
    }
    for n in 1..=2 {
        let ctx = WeylContext::family(n);
        for i in 1..=2 * n {
            eq(
                "Gamma(x_i)",
                &lib(gamma_hat(&lib(WeylElement::generator(&ctx, i))?))?,
                &lib(PoissonElement::generator(n, i))?,
            )?;
        }
        check(lib(gamma_hat(&WeylElement::param(&ctx)))?.is_zero(), || {
            "Gamma(h) != 0".into()
        })?;
        let c = lib(WeylElement::scalar(&ctx, ParamPoly::constant(ratio(-5, 7))))?;
        eq(
            "Gamma(c)",
            &lib(gamma_hat(&c))?,
            &PoissonElement::constant(n, ratio(-5, 7)),
        )?;
    }
    for k in 0..PSI_ELEMENTS {
        let ctx = WeylContext::family(r.gen_range(1..=2));
        let f = random_weyl(&mut r, &ctx, &Shape::new(3).with_exponents(-3, 3));
        eq(
            &format!("psi round trip {k}"),
            &lib(psi_inverse(&lib(psi(&f))?))?,
            &f,
        )?;
    }
    for q in [rat(1), rat(2), rat(-1), ratio(1, 2)] {
        for k in 0..ISO_PAIRS_PER_Q {
            let ctx = lib(WeylContext::numeric(r.gen_range(1..=2), q.clone()))?;
            let (f, g) = (
                random_weyl(&mut r, &ctx, &Shape::new(3)),
                random_weyl(&mut r, &ctx, &Shape::new(3)),
            );
            let lhs = lib(iso_aq_to_wn(&lib(f.mul(&g))?, &q))?;
            let rhs = lib(lib(iso_aq_to_wn(&f, &q))?.mul(&lib(iso_aq_to_wn(&g, &q))?))?;
            eq(&format!("iso q={q} pair {k}"), &lhs, &rhs)?;
        }
    }
    let bad = element(&WeylContext::family(1), &[(&[0, 1], &[(-1, 1)])]);
    check(!lib(in_a_hat(&bad))?, || {
        "h^-1*x2 accepted into the polynomial subalgebra".into()
    })?;
    Ok(format!(
        "{GAMMA_PAIRS} h = 0 evaluation pairs, {PSI_ELEMENTS} psi round trips, 4x{ISO_PAIRS_PER_Q} iso pairs"
    ))
}

/// `Â` corpus: seeded tame `Â` automorphisms plus the conjugated shear
/// `x2 -> x2 + h*x1^2` and its composites.
fn ahat_corpus(n: usize) -> Result<Vec<WeylMorphism>, String> {
    let ctx = WeylContext::family(n);
    let mut out = lib(tame_corpus_ahat(n, SEED, AHAT_CORPUS))?;
    if n == 1 {
        let images = vec![
            lib(parse_weyl("x1", &ctx))?,
            lib(parse_weyl("x2 + h*x1^2", &ctx))?,
        ];
        let conj = validate(lib(weyl_morphism(&ctx, images))?);
        check(conj.is_valid(), || {
            "conjugated shear fails its relations".into()
        })?;
        let extra: Vec<_> = out
            .iter()
            .take(3)
            .map(|s| compose(&conj, s))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        out.push(lib(compose(&conj, &conj))?);
        out.push(conj);
        out.extend(extra);
    }
    Ok(out)
}

fn c7_phi() -> Outcome {
    let mut pairs = 0;
    let mut total = 0;
    for n in 1..=2 {
        let corpus = ahat_corpus(n)?;
        check(corpus.len() >= AHAT_CORPUS, || {
            format!("n={n}: corpus has {}", corpus.len())
        })?;
        let phis = corpus
            .iter()
            .map(|s| lib(varphi(s)))
            .collect::<Result<Vec<_>, _>>()?;
        for (s, p) in corpus.iter().zip(&phis) {
            check(s.is_valid(), || format!("{s} not validated"))?;
            check(validate(p.clone()).is_valid(), || {
                format!("phi({s}) is not a Poisson endomorphism")
            })?;
        }
        for (a, s) in corpus.iter().enumerate() {
            for (b, t) in corpus.iter().enumerate() {
                let lhs = lib(varphi(&lib(compose(s, t))?))?;
                let rhs = lib(compose(&phis[a], &phis[b]))?;
                check(lhs.same_map(&rhs), || {
                    format!("phi(st) != phi(s)phi(t) for {s} and {t}")
                })?;
                pairs += 1;
            }
        }
        total += corpus.len();
    }
    Ok(format!(
        "{total} endomorphisms validate under phi, {pairs} ordered pairs compose"
    ))
}

/// Direct transfer computed here: each constant coefficient read as a
/// rational on the same exponent vector.
fn transfer(f: &WeylElement) -> Result<PoissonElement, String> {
    let terms = f
        .terms()
        .map(|(m, c)| {
            c.as_constant()
                .map(|c| (m.clone(), c))
                .ok_or_else(|| format!("{c} is not constant"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    lib(PoissonElement::from_terms(f.context().n(), terms))
}

fn c8_psi() -> Outcome {
    for n in 1..=2 {
        let corpus = lib(tame_corpus(n, SEED, TAME_CORPUS))?;
        check(corpus.len() == TAME_CORPUS, || {
            format!("corpus size {}", corpus.len())
        })?;
        let mut images = Vec::new();
        for s in &corpus {
            // psi_transport refuses to return when its two paths disagree
            let t = lib(psi_transport(s))?;
            for (i, img) in s.images().iter().enumerate() {
                eq(
                    &format!("Psi({s})(x{})", i + 1),
                    t.morphism.image(i + 1),
                    &transfer(img)?,
                )?;
            }
            images.push(t.morphism);
        }
        for a in 0..corpus.len() {
            for b in a + 1..corpus.len() {
                check(!corpus[a].same_map(&corpus[b]), || {
                    "corpus has duplicates".into()
                })?;
                check(!images[a].same_map(&images[b]), || {
                    format!("Psi collides on {} and {}", corpus[a], corpus[b])
                })?;
            }
        }
        let id = WeylMorphism::identity(&WeylContext::weyl(n));
        check(lib(psi_transport(&id))?.morphism.is_identity(), || {
            format!("Psi(id) != id, n={n}")
        })?;
    }
    Ok(format!(
        "2x{TAME_CORPUS} tame morphisms: paths agree, injective, identity preserved"
    ))
}

/// `{Ψ(σ₂σ₁)(x2), Ψ(σ₂σ₁)(x1)}` recomputed with rewriting products and the
/// bracket definition only.
fn pinned_bracket_by_rewriting() -> Result<BTreeMap<Vec<u32>, Rational>, String> {
    let w = WeylContext::weyl(1);
    let x1 = lib(WeylElement::generator(&w, 1))?;
    let x2 = lib(WeylElement::generator(&w, 2))?;
    let mul = |a: &WeylElement, b: &WeylElement| lib(rewrite_oracle(a, b));
    // σ₂∘σ₁: x1 -> σ₂(x1) = x1 + x2^2; x2 -> σ₂(x2 + x1^2) = x2 + (x1 + x2^2)^2
    let s2x1 = lib(x1.add(&mul(&x2, &x2)?))?;
    let img1 = s2x1.clone();
    let img2 = lib(x2.add(&mul(&s2x1, &s2x1)?))?;
    Ok(bracket_by_definition(&transfer(&img2)?, &transfer(&img1)?))
}

fn c9_audit() -> Outcome {
    let want = BTreeMap::from([(vec![0u32, 0], rat(PINNED_BRACKET))]);
    let by_rewriting = pinned_bracket_by_rewriting()?;
    check(by_rewriting == want, || {
        format!("rewriting pipeline gives {by_rewriting:?}")
    })?;

    let (s1, s2) = pinned_shears();
    let composite = lib(compose(&s2, &s1))?;
    let mut corpus = lib(tame_corpus(1, SEED, TAME_CORPUS))?;
    corpus.extend([s1, s2, composite]);
    let pinned_idx = corpus.len() - 1;
    let dir = std::env::temp_dir().join(format!("semiweyl-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let corpus_path = dir.join("corpus.json");
    let report_path = dir.join("report.json");
    let json: Vec<_> = corpus.iter().map(weyl_morphism_json).collect();
    std::fs::write(
        &corpus_path,
        serde_json::to_string(&json).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let out = Command::new(env!("CARGO_BIN_EXE_semiweyl"))
        .args(["audit", "--claims", "C1,C2,C3,C4,C5", "--corpus"])
        .arg(&corpus_path)
        .arg("--out")
        .arg(&report_path)
        .output()
        .map_err(|e| e.to_string())?;
    check(out.status.success(), || {
        format!("audit exited with {}", out.status)
    })?;
    let text = std::fs::read_to_string(&report_path).map_err(|e| e.to_string())?;

    let raw: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    for key in ["corpus", "claims", "results", "summary"] {
        check(raw.get(key).is_some(), || format!("report lacks {key:?}"))?;
    }
    let report: AuditReport = serde_json::from_str(&text).map_err(|e| format!("schema: {e}"))?;
    for r in &report.results {
        check(r.pass == r.witness.is_none(), || {
            format!("{} {}: witness mismatch", r.claim, r.instance)
        })?;
    }
    for c in [Claim::C3, Claim::C4, Claim::C5] {
        check(report.results_for(c).count() > 0, || {
            format!("{c} has no instances")
        })?;
        check(report.all_pass(c), || format!("{c} has failures"))?;
    }
    let singles: Vec<usize> = (0..corpus.len())
        .filter(|&i| corpus[i].word().is_some_and(|w| w.len() == 1))
        .collect();
    check(!singles.is_empty(), || {
        "no single generators in corpus".into()
    })?;
    for i in &singles {
        let r = report
            .instance(Claim::C1, &format!("corpus[{i}]"))
            .ok_or_else(|| format!("C1 missing for corpus[{i}]"))?;
        check(r.pass, || {
            format!("C1 fails on single generator corpus[{i}]")
        })?;
    }
    let pinned = report
        .instance(Claim::C1, &format!("corpus[{pinned_idx}]"))
        .ok_or("C1 missing for the pinned composite")?;
    let w = pinned
        .witness
        .as_ref()
        .ok_or("pinned composite passed C1")?;
    eq(
        "pinned composite bracket",
        &w.lhs,
        &PINNED_BRACKET.to_string(),
    )?;
    eq("pinned composite expected value", &w.rhs, &"1".to_string())?;
    let _ = std::fs::remove_dir_all(&dir);
    let s = |c| report.summary.get(&c).map_or((0, 0), |s| (s.pass, s.fail));
    Ok(format!(
        "C1 {:?}, C2 {:?}, C3 {:?}, C4 {:?}, C5 {:?} (pass, fail); pinned bracket {PINNED_BRACKET}",
        s(Claim::C1),
        s(Claim::C2),
        s(Claim::C3),
        s(Claim::C4),
        s(Claim::C5)
    ))
}

fn c10_cli() -> Outcome {
    let mut r = rng(10);
    for k in 0..ROUND_TRIPS {
        let n = r.gen_range(1..=2);
        let ctx = match k % 4 {
            0 => WeylContext::formal(n),
            1 => WeylContext::family(n),
            2 => WeylContext::weyl(n),
            _ => lib(WeylContext::numeric(n, ratio(3, 4)))?,
        };
        let f = random_weyl(&mut r, &ctx, &Shape::new(4).with_exponents(-2, 3));
        let text = f.to_string();
        eq(
            &format!("round trip {k}"),
            &lib(parse_weyl(&text, &ctx))?.to_string(),
            &text,
        )?;
    }
    let bin = env!("CARGO_BIN_EXE_semiweyl");
    let out = Command::new(bin)
        .args(["normalform", "--algebra", "Wn", "--n", "1", "x2*x1"])
        .output()
        .map_err(|e| e.to_string())?;
    check(out.status.success(), || {
        format!("normalform exited with {}", out.status)
    })?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    eq(
        "normalform first line",
        &stdout.lines().next().unwrap_or("").to_string(),
        &"x1*x2 + 1".to_string(),
    )?;

    let out = Command::new(bin)
        .args(["bench", "--max-degree", "4"])
        .output()
        .map_err(|e| e.to_string())?;
    check(out.status.success(), || {
        format!("bench exited with {}", out.status)
    })?;
    let csv = String::from_utf8_lossy(&out.stdout);
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
    let col = header
        .iter()
        .position(|h| *h == "equal")
        .ok_or("bench CSV lacks an equal column")?;
    let rows: Vec<&str> = lines.collect();
    check(!rows.is_empty(), || "bench produced no rows".into())?;
    for row in &rows {
        check(row.split(',').nth(col) == Some("true"), || {
            format!("bench row disagrees: {row}")
        })?;
    }
    Ok(format!(
        "{ROUND_TRIPS} round trips, normalform, {} bench rows equal",
        rows.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("relation suite", c1_relations),
        ("oracle equivalence", c2_oracle),
        ("semiclassical limit = symplectic bracket", c3_semiclassical),
        ("Poisson axioms and extensions", c4_poisson),
        ("basis counting", c5_counting),
        ("bridge suite", c6_bridge),
        ("induced Poisson map suite", c7_phi),
        ("transport construction suite", c8_psi),
        ("transport audit report", c9_audit),
        ("CLI round trip", c10_cli),
    ];
    println!("acceptance: tolerance={TOLERANCE}, seed={SEED}");
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
