//! JSON forms of elements, morphisms and generator words.
//!
//! Rationals are always strings (`"3"`, `"-1/2"`); term lists follow the
//! graded-lex order of the normal form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{parse_poisson, parse_weyl, Element};
use crate::monomial::StandardMonomial;
use crate::morphisms::{
    poisson_morphism, validate, weyl_morphism, GenMorphism, PoissonMorphism, PresentedAlgebra,
    RelationWitness, TameGenerator, Validation, WeylMorphism,
};
use crate::poisson::PoissonElement;
use crate::scalars::{param_from_pairs, param_to_pairs, parse_rational, ParamPoly};
use crate::weyl::{WeylContext, WeylElement};

/// Algebra name used for `B_n`.
pub const POISSON_ALGEBRA: &str = "Bn";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u32>,
    pub coeff: Vec<(i64, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub algebra: String,
    pub n: usize,
    pub terms: Vec<TermJson>,
}

pub fn weyl_to_json(f: &WeylElement) -> ElementJson {
    ElementJson {
        algebra: f.context().algebra_name(),
        n: f.context().n(),
        terms: f
            .terms()
            .map(|(m, c)| TermJson {
                exps: m.exponents().to_vec(),
                coeff: param_to_pairs(c),
            })
            .collect(),
    }
}

pub fn poisson_to_json(f: &PoissonElement) -> ElementJson {
    ElementJson {
        algebra: POISSON_ALGEBRA.into(),
        n: f.n(),
        terms: f
            .terms()
            .map(|(m, c)| TermJson {
                exps: m.exponents().to_vec(),
                coeff: vec![(0, c.to_string())],
            })
            .collect(),
    }
}

pub fn element_to_json(e: &Element) -> ElementJson {
    match e {
        Element::Weyl(f) => weyl_to_json(f),
        Element::Poisson(f) => poisson_to_json(f),
    }
}

fn monomial_of(t: &TermJson, n: usize) -> Result<StandardMonomial> {
    if t.exps.len() != 2 * n {
        return Err(Error::Malformed(format!(
            "term has {} exponents, expected {}",
            t.exps.len(),
            2 * n
        )));
    }
    Ok(StandardMonomial::from_exponents(t.exps.clone()))
}

pub fn element_from_json(j: &ElementJson) -> Result<Element> {
    if j.algebra == POISSON_ALGEBRA {
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            let c = param_from_pairs(&t.coeff)?;
            let c = c
                .as_constant()
                .ok_or_else(|| Error::IllegalCoefficient(format!("{c} in a Poisson element")))?;
            terms.push((monomial_of(t, j.n)?, c));
        }
        return PoissonElement::from_terms(j.n, terms).map(Element::Poisson);
    }
    let ctx = WeylContext::from_algebra_name(&j.algebra, j.n)?;
    let terms = j
        .terms
        .iter()
        .map(|t| Ok((monomial_of(t, j.n)?, param_from_pairs(&t.coeff)?)))
        .collect::<Result<Vec<(StandardMonomial, ParamPoly)>>>()?;
    WeylElement::from_terms(&ctx, terms).map(Element::Weyl)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GeneratorJson {
    Linear {
        pair: usize,
        a: String,
        b: String,
        c: String,
        d: String,
    },
    Shear {
        n: usize,
        potential: String,
        scale: u32,
    },
    DualShear {
        n: usize,
        potential: String,
        scale: u32,
    },
}

impl From<&TameGenerator> for GeneratorJson {
    fn from(g: &TameGenerator) -> Self {
        match g {
            TameGenerator::Linear { pair, a, b, c, d } => GeneratorJson::Linear {
                pair: *pair,
                a: a.to_string(),
                b: b.to_string(),
                c: c.to_string(),
                d: d.to_string(),
            },
            TameGenerator::Shear { potential, scale } => GeneratorJson::Shear {
                n: potential.n(),
                potential: potential.to_string(),
                scale: *scale,
            },
            TameGenerator::DualShear { potential, scale } => GeneratorJson::DualShear {
                n: potential.n(),
                potential: potential.to_string(),
                scale: *scale,
            },
        }
    }
}

impl TryFrom<&GeneratorJson> for TameGenerator {
    type Error = Error;
    fn try_from(g: &GeneratorJson) -> Result<Self> {
        Ok(match g {
            GeneratorJson::Linear { pair, a, b, c, d } => TameGenerator::Linear {
                pair: *pair,
                a: parse_rational(a)?,
                b: parse_rational(b)?,
                c: parse_rational(c)?,
                d: parse_rational(d)?,
            },
            GeneratorJson::Shear {
                n,
                potential,
                scale,
            } => TameGenerator::Shear {
                potential: parse_poisson(potential, *n)?,
                scale: *scale,
            },
            GeneratorJson::DualShear {
                n,
                potential,
                scale,
            } => TameGenerator::DualShear {
                potential: parse_poisson(potential, *n)?,
                scale: *scale,
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub j: usize,
    pub i: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub kind: String,
    pub n: usize,
    pub algebra: String,
    pub images: Vec<String>,
    pub validated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<Vec<GeneratorJson>>,
}

fn morphism_json<E: PresentedAlgebra>(m: &GenMorphism<E>, algebra: String) -> MorphismJson {
    let witness = match m.validation() {
        Validation::Invalid(w) => Some(WitnessJson {
            j: w.j,
            i: w.i,
            expected: w.expected.clone(),
            found: w.found.clone(),
        }),
        _ => None,
    };
    MorphismJson {
        kind: m.kind().to_string(),
        n: m.n(),
        algebra,
        images: m.images().iter().map(ToString::to_string).collect(),
        validated: m.is_valid(),
        witness,
        word: m
            .word()
            .map(|w| w.iter().map(GeneratorJson::from).collect()),
    }
}

pub fn weyl_morphism_json(m: &WeylMorphism) -> MorphismJson {
    morphism_json(m, m.context().algebra_name())
}

pub fn poisson_morphism_json(m: &PoissonMorphism) -> MorphismJson {
    morphism_json(m, POISSON_ALGEBRA.into())
}

pub fn weyl_morphism_to_json(m: &WeylMorphism) -> serde_json::Value {
    serde_json::to_value(weyl_morphism_json(m)).expect("plain data serializes")
}

pub fn poisson_morphism_to_json(m: &PoissonMorphism) -> serde_json::Value {
    serde_json::to_value(poisson_morphism_json(m)).expect("plain data serializes")
}

/// Either side's morphism, as read from JSON.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMorphism {
    Weyl(WeylMorphism),
    Poisson(PoissonMorphism),
}

/// Restores the recorded validation state. A `validated: true` claim is
/// re-checked rather than trusted.
fn restore<E: PresentedAlgebra>(m: GenMorphism<E>, j: &MorphismJson) -> Result<GenMorphism<E>> {
    if j.validated {
        let m = validate(m);
        if !m.is_valid() {
            return Err(Error::Malformed(
                "morphism marked validated fails its relations".into(),
            ));
        }
        return Ok(m);
    }
    Ok(match &j.witness {
        Some(w) => m.with_validation(Validation::Invalid(RelationWitness {
            j: w.j,
            i: w.i,
            expected: w.expected.clone(),
            found: w.found.clone(),
        })),
        None => m,
    })
}

pub fn morphism_from_json(j: &MorphismJson) -> Result<AnyMorphism> {
    let word = j
        .word
        .as_ref()
        .map(|w| {
            w.iter()
                .map(TameGenerator::try_from)
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    if j.algebra == POISSON_ALGEBRA {
        let images = j
            .images
            .iter()
            .map(|s| parse_poisson(s, j.n))
            .collect::<Result<Vec<_>>>()?;
        let m = poisson_morphism(j.n, images)?.with_word(word);
        return restore(m, j).map(AnyMorphism::Poisson);
    }
    let ctx = WeylContext::from_algebra_name(&j.algebra, j.n)?;
    let images = j
        .images
        .iter()
        .map(|s| parse_weyl(s, &ctx))
        .collect::<Result<Vec<_>>>()?;
    let m = weyl_morphism(&ctx, images)?.with_word(word);
    let m = restore(m, j)?;
    if m.kind().name() != j.kind {
        return Err(Error::Malformed(format!(
            "kind {} does not match algebra {}",
            j.kind, j.algebra
        )));
    }
    Ok(AnyMorphism::Weyl(m))
}

pub fn weyl_morphism_from_json(j: &MorphismJson) -> Result<WeylMorphism> {
    match morphism_from_json(j)? {
        AnyMorphism::Weyl(m) => Ok(m),
        AnyMorphism::Poisson(_) => Err(Error::KindMismatch {
            left: "PoissonEndo".into(),
            right: "a Weyl-side morphism".into(),
        }),
    }
}

/// Parses one morphism object or a list of them.
pub fn parse_morphisms(src: &str) -> Result<Vec<AnyMorphism>> {
    let v: serde_json::Value =
        serde_json::from_str(src).map_err(|e| Error::Malformed(e.to_string()))?;
    let items = match v {
        serde_json::Value::Array(items) => items,
        other => vec![other],
    };
    items
        .into_iter()
        .map(|item| {
            let j: MorphismJson =
                serde_json::from_value(item).map_err(|e| Error::Malformed(e.to_string()))?;
            morphism_from_json(&j)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphisms::corpus::{pinned_shears, tame_corpus};
    use crate::morphisms::{compose, transport::psi_transport};

    #[test]
    fn element_schema() {
        let ctx = WeylContext::formal(1);
        let f = parse_weyl("x2^2*x1 - 1/2*h", &ctx).unwrap();
        let j = serde_json::to_value(weyl_to_json(&f)).unwrap();
        assert_eq!(
            j,
            serde_json::json!({
                "algebra": "An",
                "n": 1,
                "terms": [
                    {"exps": [0, 0], "coeff": [[1, "-1/2"]]},
                    {"exps": [0, 1], "coeff": [[1, "2"]]},
                    {"exps": [1, 2], "coeff": [[0, "1"]]}
                ]
            })
        );
    }

    #[test]
    fn element_round_trip() {
        let cases = [
            Element::Weyl(parse_weyl("(h^-1 + 2)*x1*x4 - 3", &WeylContext::family(2)).unwrap()),
            Element::Weyl(
                parse_weyl(
                    "x2*x1",
                    &WeylContext::numeric(1, crate::scalars::ratio(-1, 2)).unwrap(),
                )
                .unwrap(),
            ),
            Element::Poisson(parse_poisson("x1^2*x2 - 5/3", 1).unwrap()),
        ];
        for e in cases {
            let text = serde_json::to_string(&element_to_json(&e)).unwrap();
            let back: ElementJson = serde_json::from_str(&text).unwrap();
            assert_eq!(element_from_json(&back).unwrap(), e);
        }
    }

    #[test]
    fn rejects_bad_elements() {
        let j = ElementJson {
            algebra: "Bn".into(),
            n: 1,
            terms: vec![TermJson {
                exps: vec![1, 0],
                coeff: vec![(1, "1".into())],
            }],
        };
        assert!(matches!(
            element_from_json(&j),
            Err(Error::IllegalCoefficient(_))
        ));
        let j = ElementJson {
            algebra: "Wn".into(),
            n: 1,
            terms: vec![TermJson {
                exps: vec![1],
                coeff: vec![(0, "1".into())],
            }],
        };
        assert!(matches!(element_from_json(&j), Err(Error::Malformed(_))));
    }

    #[test]
    fn morphism_round_trip() {
        let mut ms: Vec<AnyMorphism> = tame_corpus(2, 3, 5)
            .unwrap()
            .into_iter()
            .map(AnyMorphism::Weyl)
            .collect();
        let (s1, s2) = pinned_shears();
        let c = compose(&s2, &s1).unwrap();
        let psi = crate::morphisms::validate(psi_transport(&c).unwrap().morphism);
        assert!(!psi.is_valid());
        ms.push(AnyMorphism::Poisson(psi));
        ms.push(AnyMorphism::Weyl(c));
        for m in ms {
            let j = match &m {
                AnyMorphism::Weyl(m) => weyl_morphism_json(m),
                AnyMorphism::Poisson(m) => poisson_morphism_json(m),
            };
            let text = serde_json::to_string(&j).unwrap();
            let parsed = parse_morphisms(&text).unwrap();
            assert_eq!(parsed, vec![m]);
        }
    }

    #[test]
    fn validated_claims_are_checked() {
        let bad =
            r#"{"kind":"WeylEndo","n":1,"algebra":"Wn","images":["x1","x1"],"validated":true}"#;
        assert!(matches!(parse_morphisms(bad), Err(Error::Malformed(_))));
        let ok = r#"[{"kind":"WeylEndo","n":1,"algebra":"Wn","images":["x1","x2 + x1^2"],"validated":false}]"#;
        match &parse_morphisms(ok).unwrap()[0] {
            AnyMorphism::Weyl(m) => assert_eq!(m.validation(), &Validation::Unchecked),
            other => panic!("{other:?}"),
        }
    }
}
