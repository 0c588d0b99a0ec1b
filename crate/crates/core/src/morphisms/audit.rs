//! Empirical audit of the transport claims on a concrete corpus.
//!
//! The harness measures; it asserts nothing. Each instance of each claim is
//! recorded as pass or fail, and every failure carries its inputs and both
//! sides of the violated identity.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{poisson_morphism_to_json, weyl_morphism_to_json};
use crate::weyl::WeylContext;

use super::corpus::evaluate_word;
use super::transport::{psi_transport, varphi};
use super::{compose, validate, MorphismKind, PoissonMorphism, Validation, WeylMorphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Claim {
    /// `Ψ(σ)` is a Poisson endomorphism.
    C1,
    /// `Ψ(σ∘τ) = Ψ(σ)∘Ψ(τ)` on generators.
    C2,
    /// `σ ≠ τ ⇒ Ψ(σ) ≠ Ψ(τ)`.
    C3,
    /// `Ψ(id) = id`.
    C4,
    /// `φ(σ∘τ) = φ(σ)∘φ(τ)` for `Â` endomorphisms.
    C5,
}

impl Claim {
    pub const ALL: [Claim; 5] = [Claim::C1, Claim::C2, Claim::C3, Claim::C4, Claim::C5];
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Claim {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "C1" => Ok(Claim::C1),
            "C2" => Ok(Claim::C2),
            "C3" => Ok(Claim::C3),
            "C4" => Ok(Claim::C4),
            "C5" => Ok(Claim::C5),
            other => Err(Error::Malformed(format!("unknown claim {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Serialized morphisms the instance was computed from.
    pub inputs: Vec<serde_json::Value>,
    /// Which identity failed, e.g. `{Psi(x2), Psi(x1)} = {x2, x1}`.
    pub identity: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub claim: Claim,
    pub instance: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimSummary {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub corpus: String,
    pub claims: Vec<Claim>,
    pub results: Vec<ClaimResult>,
    pub summary: BTreeMap<Claim, ClaimSummary>,
}

impl AuditReport {
    pub fn results_for(&self, claim: Claim) -> impl Iterator<Item = &ClaimResult> {
        self.results.iter().filter(move |r| r.claim == claim)
    }

    pub fn all_pass(&self, claim: Claim) -> bool {
        self.results_for(claim).all(|r| r.pass)
    }

    pub fn instance(&self, claim: Claim, instance: &str) -> Option<&ClaimResult> {
        self.results_for(claim).find(|r| r.instance == instance)
    }
}

fn pass(claim: Claim, instance: String) -> ClaimResult {
    ClaimResult {
        claim,
        instance,
        pass: true,
        witness: None,
    }
}

fn fail(claim: Claim, instance: String, witness: Witness) -> ClaimResult {
    ClaimResult {
        claim,
        instance,
        pass: false,
        witness: Some(witness),
    }
}

fn error_result(
    claim: Claim,
    instance: String,
    inputs: Vec<serde_json::Value>,
    e: &Error,
) -> ClaimResult {
    fail(
        claim,
        instance,
        Witness {
            inputs,
            identity: "computation".into(),
            lhs: e.code().into(),
            rhs: e.to_string(),
        },
    )
}

/// First generator where two Poisson maps differ, as a witness.
fn first_difference(
    lhs: &PoissonMorphism,
    rhs: &PoissonMorphism,
    lhs_name: &str,
    rhs_name: &str,
    inputs: Vec<serde_json::Value>,
) -> Option<Witness> {
    lhs.images()
        .iter()
        .zip(rhs.images())
        .enumerate()
        .find(|(_, (a, b))| a != b)
        .map(|(i, (a, b))| Witness {
            inputs,
            identity: format!("{lhs_name}(x{k}) = {rhs_name}(x{k})", k = i + 1),
            lhs: a.to_string(),
            rhs: b.to_string(),
        })
}

/// `Â` counterpart of a corpus element for the `φ` claim: the element itself
/// when it already is an `Â` endomorphism, else its generator word
/// evaluated in `Â`.
fn ahat_counterpart(m: &WeylMorphism) -> Option<WeylMorphism> {
    match m.kind() {
        MorphismKind::AHatEndo => m.is_valid().then(|| m.clone()),
        _ => m
            .word()
            .and_then(|w| evaluate_word(w, &WeylContext::family(m.n())).ok()),
    }
}

/// Evaluates the requested claims on every applicable corpus instance.
///
/// Weyl-algebra elements (`W_n`) feed C1–C4; `Â` elements, and the `Â`
/// counterparts of word-carrying Weyl elements, feed C5. Pairwise claims
/// use consecutive corpus elements (C2, C5) or all pairs (C3).
pub fn audit_psi(
    corpus: &[WeylMorphism],
    claims: &BTreeSet<Claim>,
    description: &str,
) -> AuditReport {
    let weyl: Vec<(usize, &WeylMorphism)> = corpus
        .iter()
        .enumerate()
        .filter(|(_, m)| m.context().is_weyl() && m.is_valid())
        .collect();
    let transports: Vec<Result<PoissonMorphism>> = weyl
        .par_iter()
        .map(|(_, m)| psi_transport(m).map(|t| t.morphism))
        .collect();
    let json = |m: &WeylMorphism| weyl_morphism_to_json(m);
    let mut results = Vec::new();

    if claims.contains(&Claim::C1) {
        let c1: Vec<ClaimResult> = weyl
            .par_iter()
            .zip(&transports)
            .map(|((idx, m), t)| {
                let instance = format!("corpus[{idx}]");
                match t {
                    Err(e) => error_result(Claim::C1, instance, vec![json(m)], e),
                    Ok(psi) => match validate(psi.clone()).validation() {
                        Validation::Valid => pass(Claim::C1, instance),
                        Validation::Invalid(w) => fail(
                            Claim::C1,
                            instance,
                            Witness {
                                inputs: vec![json(m), poisson_morphism_to_json(psi)],
                                identity: format!(
                                    "{{Psi(x{j}), Psi(x{i})}} = {{x{j}, x{i}}}",
                                    j = w.j,
                                    i = w.i
                                ),
                                lhs: w.found.clone(),
                                rhs: w.expected.clone(),
                            },
                        ),
                        Validation::Unchecked => unreachable!("validate never leaves Unchecked"),
                    },
                }
            })
            .collect();
        results.extend(c1);
    }

    if claims.contains(&Claim::C2) {
        let c2: Vec<ClaimResult> = (0..weyl.len().saturating_sub(1))
            .into_par_iter()
            .map(|k| {
                let ((ia, a), (ib, b)) = (weyl[k], weyl[k + 1]);
                let instance = format!("corpus[{ia}]∘corpus[{ib}]");
                let inputs = vec![json(a), json(b)];
                let outcome = (|| -> Result<Option<Witness>> {
                    let composite = psi_transport(&compose(a, b)?)?.morphism;
                    let (pa, pb) = match (&transports[k], &transports[k + 1]) {
                        (Ok(pa), Ok(pb)) => (pa, pb),
                        (Err(e), _) | (_, Err(e)) => return Err(e.clone()),
                    };
                    let product = pa.compose_unchecked(pb)?;
                    Ok(first_difference(
                        &composite,
                        &product,
                        "Psi(s∘t)",
                        "Psi(s)∘Psi(t)",
                        inputs.clone(),
                    ))
                })();
                match outcome {
                    Ok(None) => pass(Claim::C2, instance),
                    Ok(Some(w)) => fail(Claim::C2, instance, w),
                    Err(e) => error_result(Claim::C2, instance, inputs, &e),
                }
            })
            .collect();
        results.extend(c2);
    }

    if claims.contains(&Claim::C3) {
        for a in 0..weyl.len() {
            for b in a + 1..weyl.len() {
                let ((ia, ma), (ib, mb)) = (weyl[a], weyl[b]);
                if ma.same_map(mb) {
                    continue;
                }
                let instance = format!("corpus[{ia}] vs corpus[{ib}]");
                let inputs = vec![json(ma), json(mb)];
                match (&transports[a], &transports[b]) {
                    (Ok(pa), Ok(pb)) if pa.same_map(pb) => results.push(fail(
                        Claim::C3,
                        instance,
                        Witness {
                            inputs,
                            identity: "Psi(s) != Psi(t)".into(),
                            lhs: pa.to_string(),
                            rhs: pb.to_string(),
                        },
                    )),
                    (Ok(_), Ok(_)) => results.push(pass(Claim::C3, instance)),
                    (Err(e), _) | (_, Err(e)) => {
                        results.push(error_result(Claim::C3, instance, inputs, e))
                    }
                }
            }
        }
    }

    if claims.contains(&Claim::C4) {
        let arities: BTreeSet<usize> = corpus.iter().map(|m| m.n()).collect();
        for n in arities {
            let id = WeylMorphism::identity(&WeylContext::weyl(n));
            let instance = format!("identity(n={n})");
            match psi_transport(&id) {
                Ok(t) if t.morphism.is_identity() => results.push(pass(Claim::C4, instance)),
                Ok(t) => {
                    let expected = PoissonMorphism::identity(&super::PoissonArity(n));
                    let w =
                        first_difference(&t.morphism, &expected, "Psi(id)", "id", vec![json(&id)])
                            .expect("differs");
                    results.push(fail(Claim::C4, instance, w));
                }
                Err(e) => results.push(error_result(Claim::C4, instance, vec![json(&id)], &e)),
            }
        }
    }

    if claims.contains(&Claim::C5) {
        let lifts: Vec<(usize, WeylMorphism)> = corpus
            .iter()
            .enumerate()
            .filter_map(|(i, m)| ahat_counterpart(m).map(|a| (i, a)))
            .collect();
        let pairs: Vec<(usize, usize)> = match lifts.len() {
            0 => vec![],
            1 => vec![(0, 0)],
            k => (0..k - 1).map(|i| (i, i + 1)).collect(),
        };
        let c5: Vec<ClaimResult> = pairs
            .par_iter()
            .map(|&(a, b)| {
                let ((ia, sa), (ib, sb)) = (&lifts[a], &lifts[b]);
                let instance = format!("ahat[{ia}]∘ahat[{ib}]");
                let inputs = vec![json(sa), json(sb)];
                let outcome = (|| -> Result<Option<Witness>> {
                    let lhs = varphi(&compose(sa, sb)?)?;
                    let rhs = super::compose(&varphi(sa)?, &varphi(sb)?)?;
                    if !lhs.is_valid() {
                        return Ok(Some(Witness {
                            inputs: inputs.clone(),
                            identity: "phi(s∘t) is a Poisson endomorphism".into(),
                            lhs: format!("{:?}", lhs.validation()),
                            rhs: "Valid".into(),
                        }));
                    }
                    Ok(first_difference(
                        &lhs,
                        &rhs,
                        "phi(s∘t)",
                        "phi(s)∘phi(t)",
                        inputs.clone(),
                    ))
                })();
                match outcome {
                    Ok(None) => pass(Claim::C5, instance),
                    Ok(Some(w)) => fail(Claim::C5, instance, w),
                    Err(e) => error_result(Claim::C5, instance, inputs, &e),
                }
            })
            .collect();
        results.extend(c5);
    }

    let mut summary: BTreeMap<Claim, ClaimSummary> = claims
        .iter()
        .map(|c| (*c, ClaimSummary::default()))
        .collect();
    for r in &results {
        let s = summary.entry(r.claim).or_default();
        if r.pass {
            s.pass += 1;
        } else {
            s.fail += 1;
        }
    }
    AuditReport {
        corpus: description.to_string(),
        claims: claims.iter().copied().collect(),
        results,
        summary,
    }
}
