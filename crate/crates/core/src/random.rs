//! Seeded random elements for property checks, the self-test and the bench.

use rand::Rng;

use crate::monomial::StandardMonomial;
use crate::poisson::PoissonElement;
use crate::scalars::{rat, ParamPoly, Rational};
use crate::weyl::{Mode, WeylContext, WeylElement};

/// Size limits for random elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    pub max_degree: u32,
    pub max_terms: usize,
    /// Integer coefficients are drawn from `[-height, height]`.
    pub height: i64,
    /// Parameter exponents are drawn from `min_exp..=max_exp`, clamped to
    /// what the context admits.
    pub min_exp: i64,
    pub max_exp: i64,
}

impl Shape {
    pub fn new(max_degree: u32) -> Self {
        Self {
            max_degree,
            max_terms: 4,
            height: 10,
            min_exp: 0,
            max_exp: 2,
        }
    }

    pub fn with_exponents(mut self, min_exp: i64, max_exp: i64) -> Self {
        self.min_exp = min_exp;
        self.max_exp = max_exp;
        self
    }

    pub fn with_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }
}

fn nonzero_int(rng: &mut impl Rng, height: i64) -> Rational {
    loop {
        let v = rng.gen_range(-height..=height);
        if v != 0 {
            return rat(v);
        }
    }
}

/// Uniform degree, then each unit of degree dropped on a random slot.
pub fn random_monomial(rng: &mut impl Rng, vars: usize, max_degree: u32) -> StandardMonomial {
    let mut exps = vec![0u32; vars];
    for _ in 0..rng.gen_range(0..=max_degree) {
        exps[rng.gen_range(0..vars)] += 1;
    }
    StandardMonomial::from_exponents(exps)
}

pub fn random_param(rng: &mut impl Rng, shape: &Shape) -> ParamPoly {
    let mut out = ParamPoly::zero();
    while out.is_zero() {
        for _ in 0..rng.gen_range(1..=2) {
            let e = rng.gen_range(shape.min_exp..=shape.max_exp);
            out = &out + &ParamPoly::monomial(nonzero_int(rng, shape.height), e);
        }
    }
    out
}

fn coefficient_for(rng: &mut impl Rng, ctx: &WeylContext, shape: &Shape) -> ParamPoly {
    match ctx.mode() {
        Mode::Numeric(_) => ParamPoly::constant(nonzero_int(rng, shape.height)),
        Mode::FormalT => {
            let s = Shape {
                min_exp: shape.min_exp.max(0),
                max_exp: shape.max_exp.max(0),
                ..shape.clone()
            };
            random_param(rng, &s)
        }
        Mode::FamilyQ | Mode::FamilyW => random_param(rng, shape),
    }
}

/// Random element of `ctx`, possibly zero after cancellation.
pub fn random_weyl(rng: &mut impl Rng, ctx: &WeylContext, shape: &Shape) -> WeylElement {
    let terms: Vec<_> = (0..rng.gen_range(1..=shape.max_terms))
        .map(|_| {
            (
                random_monomial(rng, ctx.vars(), shape.max_degree),
                coefficient_for(rng, ctx, shape),
            )
        })
        .collect();
    WeylElement::from_terms(ctx, terms).expect("coefficients drawn admissible")
}

pub fn random_nonzero_weyl(rng: &mut impl Rng, ctx: &WeylContext, shape: &Shape) -> WeylElement {
    loop {
        let f = random_weyl(rng, ctx, shape);
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn random_poisson(rng: &mut impl Rng, n: usize, shape: &Shape) -> PoissonElement {
    let terms: Vec<_> = (0..rng.gen_range(1..=shape.max_terms))
        .map(|_| {
            (
                random_monomial(rng, 2 * n, shape.max_degree),
                nonzero_int(rng, shape.height),
            )
        })
        .collect();
    PoissonElement::from_terms(n, terms).expect("arity matches")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn respects_shape_and_seed() {
        let ctx = WeylContext::formal(2);
        let shape = Shape::new(3).with_exponents(-2, 2);
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let f = random_weyl(&mut a, &ctx, &shape);
            assert_eq!(f, random_weyl(&mut b, &ctx, &shape));
            assert!(f.degree() <= 3 && f.len() <= 4);
            assert!(f.terms().all(|(_, c)| c.is_polynomial()));
        }
        let w = WeylContext::weyl(1);
        let f = random_nonzero_weyl(&mut a, &w, &shape);
        assert!(!f.is_zero() && f.terms().all(|(_, c)| c.is_constant()));
        let p = random_poisson(&mut a, 2, &shape);
        assert!(p.degree() <= 3);
    }
}
