//! `φ: End(Â) → P.End(B_n)` and the transport `Ψ: End(W_n) → End(B_n)`
//! obtained by conjugating through `ψ`.

use crate::bridge::{gamma_hat, psi_inverse};
use crate::error::{Error, Result};
use crate::poisson::PoissonElement;
use crate::scalars::ParamPoly;
use crate::weyl::{Mode, WeylContext, WeylElement};

use super::{
    apply, poisson_morphism, validate, weyl_morphism, MorphismKind, PoissonMorphism, WeylMorphism,
};

/// `φ(σ)(x_i) = σ(x_i)|_{q̂=0}`, validated as a Poisson endomorphism.
pub fn varphi(m: &WeylMorphism) -> Result<PoissonMorphism> {
    if m.kind() != MorphismKind::AHatEndo {
        return Err(Error::KindMismatch {
            left: m.kind().to_string(),
            right: MorphismKind::AHatEndo.to_string(),
        });
    }
    if !m.is_valid() {
        return Err(Error::NotValidated);
    }
    let images = m
        .images()
        .iter()
        .map(gamma_hat)
        .collect::<Result<Vec<_>>>()?;
    Ok(validate(poisson_morphism(m.n(), images)?))
}

/// Multiplies by `q̂^k` with the least `k >= 0` clearing every negative
/// power, then substitutes `q̂ ↦ q̂ + 1` in each coefficient.
pub fn clear_and_shift(f: &WeylElement) -> Result<(WeylElement, u32)> {
    if f.context().mode() != &Mode::FamilyQ {
        return Err(Error::ContextMismatch {
            left: f.context().to_string(),
            right: "Aqhat".into(),
        });
    }
    let k = f
        .terms()
        .map(|(_, c)| c.clear_negative_powers().map(|(_, k)| k))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    let mut terms = Vec::with_capacity(f.len());
    for (m, c) in f.terms() {
        terms.push((m.clone(), c.mul_h_power(k as i64).shift()?));
    }
    Ok((WeylElement::from_terms(f.context(), terms)?, k))
}

/// Reads a constant-coefficient element as a commutative polynomial on the
/// same standard monomials.
pub fn coefficient_transfer(f: &WeylElement) -> Result<PoissonElement> {
    let mut terms = Vec::with_capacity(f.len());
    for (m, c) in f.terms() {
        let c = c
            .as_constant()
            .ok_or_else(|| Error::IllegalCoefficient(format!("{c} is not constant")))?;
        terms.push((m.clone(), c));
    }
    PoissonElement::from_terms(f.context().n(), terms)
}

/// Everything computed on the way from `σ` to `Ψ(σ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiTransport {
    /// `(ψ⁻¹σψ)(x_i)` in `A_q̂`.
    pub conjugated: Vec<WeylElement>,
    /// Clearing exponents `k(x_i)`.
    pub clearing: Vec<u32>,
    /// `(q̂+1)`-shifted, cleared conjugates; all lie in `Â`.
    pub shifted: Vec<WeylElement>,
    /// `Ψ(σ)`, not validated: whether it preserves brackets is an audit
    /// question, not an invariant.
    pub morphism: PoissonMorphism,
}

/// `(ψ⁻¹σψ)(x_i)` for every generator, with `σ` extended `q̂`-linearly.
pub fn conjugate_by_psi(s: &WeylMorphism) -> Result<Vec<WeylElement>> {
    let n = s.n();
    let fw = WeylContext::family_weyl(n);
    let lifted = s
        .images()
        .iter()
        .map(|img| img.recontext(&fw))
        .collect::<Result<Vec<_>>>()?;
    let sigma_q = validate(weyl_morphism(&fw, lifted)?);
    let mut out = Vec::with_capacity(2 * n);
    for i in 1..=2 * n {
        let mut psi_x = WeylElement::generator(&fw, i)?;
        if i % 2 == 0 {
            psi_x = psi_x.scale(&ParamPoly::h())?;
        }
        out.push(psi_inverse(&apply(&sigma_q, &psi_x)?)?);
    }
    Ok(out)
}

/// `Ψ(σ)` with images `Γ̂` of the cleared, shifted conjugates, checked
/// against the direct coefficient transfer of `σ(x_i)`.
pub fn psi_transport(s: &WeylMorphism) -> Result<PsiTransport> {
    if !s.context().is_weyl() {
        return Err(Error::KindMismatch {
            left: format!("{} on {}", s.kind(), s.context()),
            right: format!("WeylEndo on Wn(n={})", s.n()),
        });
    }
    if !s.is_valid() {
        return Err(Error::NotValidated);
    }
    let conjugated = conjugate_by_psi(s)?;
    let mut clearing = Vec::with_capacity(conjugated.len());
    let mut shifted = Vec::with_capacity(conjugated.len());
    let mut images = Vec::with_capacity(conjugated.len());
    for (idx, conj) in conjugated.iter().enumerate() {
        let (g, k) = clear_and_shift(conj)?;
        let constructive = gamma_hat(&g)?;
        let direct = coefficient_transfer(&s.images()[idx])?;
        if constructive != direct {
            return Err(Error::PathDisagreement {
                generator: idx + 1,
                constructive: constructive.to_string(),
                direct: direct.to_string(),
            });
        }
        clearing.push(k);
        shifted.push(g);
        images.push(constructive);
    }
    Ok(PsiTransport {
        conjugated,
        clearing,
        shifted,
        morphism: poisson_morphism(s.n(), images)?,
    })
}
