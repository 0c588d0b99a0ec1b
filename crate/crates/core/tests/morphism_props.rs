use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semiweyl::bridge::gamma_hat;
use semiweyl::morphisms::audit::{audit_psi, Claim};
use semiweyl::morphisms::corpus::{
    evaluate_word, inverse_word, pinned_shears, tame_corpus, tame_corpus_ahat,
};
use semiweyl::morphisms::transport::{
    coefficient_transfer, conjugate_by_psi, psi_transport, varphi,
};
use semiweyl::morphisms::{apply, compose, validate, verify_inverse};
use semiweyl::random::{random_weyl, Shape};
use semiweyl::scalars::ParamPoly;
use semiweyl::{Validation, WeylContext, WeylElement, WeylMorphism};

fn one_of(n: usize, seed: u64) -> WeylMorphism {
    tame_corpus(n, seed, 1).unwrap().pop().unwrap()
}

fn ahat_pair(n: usize, seed: u64) -> (WeylMorphism, WeylMorphism) {
    let mut c = tame_corpus_ahat(n, seed, 2).unwrap();
    let b = c.pop().unwrap();
    (c.pop().unwrap(), b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn corpus_elements_satisfy_the_relations(seed in any::<u64>(), n in 1usize..=2) {
        let m = one_of(n, seed);
        prop_assert!(m.is_valid());
        prop_assert!(m.relation_witness().unwrap().is_none());
        let inv = evaluate_word(&inverse_word(m.word().unwrap()), m.context()).unwrap();
        prop_assert!(verify_inverse(&m, &inv).unwrap());
    }

    #[test]
    fn apply_is_multiplicative(seed in any::<u64>(), n in 1usize..=2) {
        let m = one_of(n, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA5);
        let shape = Shape::new(2).with_terms(3);
        let f = random_weyl(&mut rng, m.context(), &shape);
        let g = random_weyl(&mut rng, m.context(), &shape);
        let lhs = apply(&m, &f.mul(&g).unwrap()).unwrap();
        prop_assert_eq!(lhs, apply(&m, &f).unwrap().mul(&apply(&m, &g).unwrap()).unwrap());
    }

    #[test]
    fn phi_lands_in_poisson_endomorphisms(seed in any::<u64>(), n in 1usize..=2) {
        let (s, t) = ahat_pair(n, seed);
        prop_assert!(varphi(&s).unwrap().is_valid());
        let st = compose(&s, &t).unwrap();
        let lhs = varphi(&st).unwrap();
        prop_assert!(lhs.is_valid());
        let rhs = compose(&varphi(&s).unwrap(), &varphi(&t).unwrap()).unwrap();
        prop_assert!(lhs.same_map(&rhs));
    }

    #[test]
    fn psi_paths_agree_and_equal_coefficient_transfer(seed in any::<u64>(), n in 1usize..=2) {
        let s = one_of(n, seed);
        let t = psi_transport(&s).unwrap();
        for (i, img) in s.images().iter().enumerate() {
            prop_assert_eq!(t.morphism.image(i + 1), &coefficient_transfer(img).unwrap());
        }
    }

    #[test]
    fn extra_clearing_powers_are_invisible_after_gamma_hat(seed in any::<u64>(), extra in 1i64..=3) {
        let s = one_of(1, seed);
        let t = psi_transport(&s).unwrap();
        for ((conj, k), direct) in conj_and_clearing(&s).into_iter().zip(t.morphism.images()) {
            let ctx = conj.context().clone();
            let lifted = WeylElement::from_terms(
                &ctx,
                conj.terms().map(|(m, c)| (m.clone(), c.mul_h_power(k as i64 + extra).shift().unwrap())),
            ).unwrap();
            prop_assert_eq!(&gamma_hat(&lifted).unwrap(), direct);
        }
    }
}

fn conj_and_clearing(s: &WeylMorphism) -> Vec<(WeylElement, u32)> {
    let t = psi_transport(s).unwrap();
    conjugate_by_psi(s)
        .unwrap()
        .into_iter()
        .zip(t.clearing)
        .collect()
}

#[test]
fn psi_is_injective_and_fixes_identity_on_seed_corpora() {
    for n in 1..=2 {
        let corpus = tame_corpus(n, 42, 20).unwrap();
        assert_eq!(corpus.len(), 20);
        let images: Vec<_> = corpus
            .iter()
            .map(|s| psi_transport(s).unwrap().morphism)
            .collect();
        for a in 0..images.len() {
            for b in a + 1..images.len() {
                assert!(!corpus[a].same_map(&corpus[b]));
                assert!(
                    !images[a].same_map(&images[b]),
                    "{} vs {}",
                    corpus[a],
                    corpus[b]
                );
            }
        }
        let id = WeylMorphism::identity(&WeylContext::weyl(n));
        assert!(psi_transport(&id).unwrap().morphism.is_identity());
    }
}

#[test]
fn single_generators_transport_to_poisson_maps() {
    for n in 1..=2 {
        let singles: Vec<_> = tame_corpus(n, 7, 30)
            .unwrap()
            .into_iter()
            .filter(|m| m.word().is_some_and(|w| w.len() == 1))
            .collect();
        assert!(!singles.is_empty());
        let report = audit_psi(&singles, &[Claim::C1].into_iter().collect(), "singles");
        assert!(report.all_pass(Claim::C1));
    }
}

#[test]
fn pinned_composite_has_bracket_three() {
    let (s1, s2) = pinned_shears();
    let c = compose(&s2, &s1).unwrap();
    let psi_c = validate(psi_transport(&c).unwrap().morphism);
    match psi_c.validation() {
        Validation::Invalid(w) => {
            assert_eq!((w.j, w.i), (2, 1));
            assert_eq!(
                w.found,
                ParamPoly::constant(semiweyl::scalars::rat(3)).to_string()
            );
        }
        other => panic!("{other:?}"),
    }
}
