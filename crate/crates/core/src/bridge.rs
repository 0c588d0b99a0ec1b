//! Maps between the quantized side and the semiclassical side.

use crate::error::{Error, Result};
use crate::poisson::PoissonElement;
use crate::scalars::{ParamPoly, Rational};
use crate::weyl::{commutator, Mode, WeylContext, WeylElement};

fn require_mode(f: &WeylElement, ok: bool, want: &str) -> Result<()> {
    if !ok {
        return Err(Error::ContextMismatch {
            left: f.context().to_string(),
            right: want.to_string(),
        });
    }
    Ok(())
}

/// Membership in `Â`: every coefficient is polynomial in `q̂`.
pub fn in_a_hat(f: &WeylElement) -> Result<bool> {
    require_mode(f, f.context().mode() == &Mode::FamilyQ, "Aqhat")?;
    Ok(f.terms().all(|(_, c)| c.is_polynomial()))
}

/// `Γ̂: f(q̂) ↦ f(0)`, read as a commutative polynomial.
///
/// Accepts `Â` elements and formal-quantization elements.
pub fn gamma_hat(f: &WeylElement) -> Result<PoissonElement> {
    require_mode(
        f,
        matches!(f.context().mode(), Mode::FamilyQ | Mode::FormalT),
        "Aqhat or An",
    )?;
    let zero = Rational::from_integer(0.into());
    let mut out = PoissonElement::zero(f.context().n());
    for (m, c) in f.terms() {
        if !c.is_polynomial() {
            return Err(Error::NotInAHat);
        }
        out.add_term(m.clone(), c.eval(&zero)?);
    }
    Ok(out)
}

/// Canonical lift of a commutative polynomial: same monomials, same
/// coefficients, read in `ctx`.
pub fn lift(a: &PoissonElement, ctx: &WeylContext) -> Result<WeylElement> {
    if a.n() != ctx.n() {
        return Err(Error::ArityMismatch {
            left: a.n(),
            right: ctx.n(),
        });
    }
    WeylElement::from_terms(
        ctx,
        a.terms()
            .map(|(m, c)| (m.clone(), ParamPoly::constant(c.clone()))),
    )
}

/// `{a, b} = (fg - gf)/h |_{h=0}` for lifts `f`, `g` in the formal
/// quantization.
pub fn semiclassical_bracket(a: &PoissonElement, b: &PoissonElement) -> Result<PoissonElement> {
    if a.n() != b.n() {
        return Err(Error::ArityMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let ctx = WeylContext::formal(a.n());
    semiclassical_bracket_of_lifts(&lift(a, &ctx)?, &lift(b, &ctx)?)
}

/// The bracket computed from explicit lifts in the formal quantization.
pub fn semiclassical_bracket_of_lifts(f: &WeylElement, g: &WeylElement) -> Result<PoissonElement> {
    require_mode(f, f.context().mode() == &Mode::FormalT, "An")?;
    let comm = commutator(f, g)?;
    let zero = Rational::from_integer(0.into());
    let mut out = PoissonElement::zero(f.context().n());
    for (m, c) in comm.terms() {
        let reduced = c
            .div_by_h()
            .ok_or_else(|| Error::InternalNonDivisible(c.to_string()))?;
        out.add_term(m.clone(), reduced.eval(&zero)?);
    }
    Ok(out)
}

/// `ψ`: `x_{2l-1} ↦ x_{2l-1}`, `x_{2l} ↦ q̂·x_{2l}`, from `A_q̂` into `W_n`
/// with `q̂`-Laurent coefficients. A monomial with even-slot degree `e` has
/// its coefficient multiplied by `q̂^e`.
pub fn psi(f: &WeylElement) -> Result<WeylElement> {
    require_mode(f, f.context().mode() == &Mode::FamilyQ, "Aqhat")?;
    rescale_even(f, &WeylContext::family_weyl(f.context().n()), 1)
}

/// `ψ⁻¹`, from `W_n` with Laurent coefficients back to `A_q̂`.
pub fn psi_inverse(f: &WeylElement) -> Result<WeylElement> {
    require_mode(f, f.context().mode() == &Mode::FamilyW, "Wqhat")?;
    rescale_even(f, &WeylContext::family(f.context().n()), -1)
}

fn rescale_even(f: &WeylElement, target: &WeylContext, sign: i64) -> Result<WeylElement> {
    WeylElement::from_terms(
        target,
        f.terms()
            .map(|(m, c)| (m.clone(), c.mul_h_power(sign * m.even_degree() as i64))),
    )
}

/// Fixed-parameter isomorphism `A_q → W_n`, `x_{2l} ↦ q·x_{2l}`.
pub fn iso_aq_to_wn(f: &WeylElement, q: &Rational) -> Result<WeylElement> {
    let expected = WeylContext::numeric(f.context().n(), q.clone())?;
    if f.context() != &expected {
        return Err(Error::ContextMismatch {
            left: f.context().to_string(),
            right: expected.to_string(),
        });
    }
    let target = WeylContext::weyl(f.context().n());
    WeylElement::from_terms(
        &target,
        f.terms().map(|(m, c)| {
            let factor = num_traits::pow(q.clone(), m.even_degree() as usize);
            (m.clone(), c.scale(&factor))
        }),
    )
}
