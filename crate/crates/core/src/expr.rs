//! Expression parser and evaluator.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ('^' ['-'] uint)?
//! atom   := rational | 'h' | 't' | 'q' | 'x' uint | '(' expr ')'
//! ```
//!
//! Unary minus binds looser than `^`, so `-x1^2` is `-(x1^2)`. A negative
//! exponent is accepted only on the parameter. Juxtaposition is not
//! multiplication and `*` keeps its left-to-right order.

use std::fmt;

use crate::error::{Error, Result};
use crate::poisson::PoissonElement;
use crate::scalars::{parse_rational, ParamPoly, Rational};
use crate::weyl::{WeylContext, WeylElement};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Rational),
    /// The central parameter raised to `exp` (`h`, `t` and `q` alias it).
    Param {
        exp: i64,
    },
    /// Generator `x_i`, 1-based.
    Var(usize),
    Add(Vec<Expr>),
    /// Ordered product.
    Mul(Vec<Expr>),
    Pow(Box<Expr>, u32),
    Neg(Box<Expr>),
}

/// Where an expression is read: a Weyl-type context or `B_n`.
#[derive(Clone, Debug, PartialEq)]
pub enum ParseContext {
    Weyl(WeylContext),
    Poisson(usize),
}

impl ParseContext {
    pub fn n(&self) -> usize {
        match self {
            ParseContext::Weyl(c) => c.n(),
            ParseContext::Poisson(n) => *n,
        }
    }
}

/// An evaluated element of either side.
#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    Weyl(WeylElement),
    Poisson(PoissonElement),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Weyl(e) => e.fmt(f),
            Element::Poisson(e) => e.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'/' {
                    i += 1;
                    let den = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if den == i {
                        return Err(Error::Syntax {
                            pos: den,
                            msg: "expected denominator".into(),
                        });
                    }
                }
                let r = parse_rational(&src[start..i]).map_err(|_| Error::Syntax {
                    pos: start,
                    msg: "invalid rational".into(),
                })?;
                out.push((start, Tok::Num(r)));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().expect("in bounds");
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character {ch:?}"),
                });
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    ctx: &'a ParseContext,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    terms.push(self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    terms.push(Expr::Neg(Box::new(self.term()?)));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one")
        } else {
            Expr::Add(terms)
        })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().expect("one")
        } else {
            Expr::Mul(factors)
        })
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let atom = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(atom);
        }
        self.bump();
        let negative = self.peek() == Some(&Tok::Minus);
        if negative {
            self.bump();
        }
        let exp = match self.bump() {
            Some(Tok::Num(r)) if r.is_integer() => r.to_integer(),
            _ => {
                self.at -= 1;
                return self.syntax("expected integer exponent");
            }
        };
        let Ok(exp) = u32::try_from(exp) else {
            self.at -= 1;
            return self.syntax("exponent too large");
        };
        match (atom, negative) {
            (Expr::Param { exp: e }, neg) => {
                let k = if neg { -(exp as i64) } else { exp as i64 };
                Ok(Expr::Param { exp: e * k })
            }
            (_, true) => {
                self.at -= 1;
                self.syntax("negative exponent is only allowed on the parameter")
            }
            (a, false) => Ok(Expr::Pow(Box::new(a), exp)),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(r)) => Ok(Expr::Const(r)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.syntax("expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            Some(Tok::Ident(name)) => self.ident(&name, pos),
            Some(_) => {
                self.at -= 1;
                self.syntax("expected an operand")
            }
            None => self.syntax("unexpected end of input"),
        }
    }

    fn ident(&self, name: &str, pos: usize) -> Result<Expr> {
        match name {
            "h" | "t" | "q" => {
                if matches!(self.ctx, ParseContext::Poisson(_)) {
                    return Err(Error::ParamInPoissonContext { pos });
                }
                Ok(Expr::Param { exp: 1 })
            }
            _ => {
                let unknown = || Error::UnknownVariable {
                    name: name.to_string(),
                    pos,
                };
                let digits = name.strip_prefix('x').ok_or_else(unknown)?;
                if digits.is_empty()
                    || !digits.bytes().all(|b| b.is_ascii_digit())
                    || digits.starts_with('0')
                {
                    return Err(unknown());
                }
                let idx: usize = digits.parse().map_err(|_| unknown())?;
                if idx > 2 * self.ctx.n() {
                    return Err(unknown());
                }
                Ok(Expr::Var(idx))
            }
        }
    }
}

/// Parses `src` against the variables and parameter `ctx` provides.
pub fn parse_expr(src: &str, ctx: &ParseContext) -> Result<Expr> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::Syntax {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks,
        at: 0,
        end: src.len(),
        ctx,
    };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        return p.syntax("unexpected trailing input");
    }
    Ok(e)
}

fn eval_weyl(e: &Expr, ctx: &WeylContext) -> Result<WeylElement> {
    Ok(match e {
        Expr::Const(c) => WeylElement::scalar(ctx, ParamPoly::constant(c.clone()))?,
        Expr::Param { exp } => match ctx.mode() {
            crate::weyl::Mode::Numeric(q) => {
                let q = ParamPoly::constant(q.clone());
                match u32::try_from(*exp) {
                    Ok(k) => WeylElement::scalar(ctx, q.pow(k))?,
                    Err(_) => {
                        let q = q.as_constant().expect("constant");
                        let inv = num_traits::pow(q.recip(), exp.unsigned_abs() as usize);
                        WeylElement::scalar(ctx, ParamPoly::constant(inv))?
                    }
                }
            }
            _ => WeylElement::scalar(ctx, ParamPoly::h_pow(*exp))?,
        },
        Expr::Var(i) => WeylElement::generator(ctx, *i)?,
        Expr::Add(ts) => {
            let mut acc = WeylElement::zero(ctx);
            for t in ts {
                acc = acc.add(&eval_weyl(t, ctx)?)?;
            }
            acc
        }
        Expr::Mul(fs) => {
            let mut acc = WeylElement::one(ctx);
            for f in fs {
                acc = acc.mul(&eval_weyl(f, ctx)?)?;
            }
            acc
        }
        Expr::Pow(b, k) => eval_weyl(b, ctx)?.pow(*k)?,
        Expr::Neg(x) => eval_weyl(x, ctx)?.neg(),
    })
}

fn eval_poisson(e: &Expr, n: usize) -> Result<PoissonElement> {
    Ok(match e {
        Expr::Const(c) => PoissonElement::constant(n, c.clone()),
        Expr::Param { .. } => return Err(Error::ParamInPoissonContext { pos: 0 }),
        Expr::Var(i) => PoissonElement::generator(n, *i)?,
        Expr::Add(ts) => {
            let mut acc = PoissonElement::zero(n);
            for t in ts {
                acc = acc.add(&eval_poisson(t, n)?)?;
            }
            acc
        }
        Expr::Mul(fs) => {
            let mut acc = PoissonElement::one(n);
            for f in fs {
                acc = acc.mul(&eval_poisson(f, n)?)?;
            }
            acc
        }
        Expr::Pow(b, k) => {
            let base = eval_poisson(b, n)?;
            let degree = base.degree().saturating_mul(*k);
            let cap = crate::weyl::degree_cap();
            if degree > cap {
                return Err(Error::DegreeCapExceeded { degree, cap });
            }
            base.pow(*k)
        }
        Expr::Neg(x) => eval_poisson(x, n)?.neg(),
    })
}

/// Normal form of the expression, multiplying in AST order.
pub fn eval_ast(e: &Expr, ctx: &ParseContext) -> Result<Element> {
    match ctx {
        ParseContext::Weyl(c) => eval_weyl(e, c).map(Element::Weyl),
        ParseContext::Poisson(n) => eval_poisson(e, *n).map(Element::Poisson),
    }
}

pub fn parse_weyl(src: &str, ctx: &WeylContext) -> Result<WeylElement> {
    eval_weyl(&parse_expr(src, &ParseContext::Weyl(ctx.clone()))?, ctx)
}

pub fn parse_poisson(src: &str, n: usize) -> Result<PoissonElement> {
    eval_poisson(&parse_expr(src, &ParseContext::Poisson(n))?, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, ratio};

    fn wctx(n: usize) -> ParseContext {
        ParseContext::Weyl(WeylContext::weyl(n))
    }

    #[test]
    fn ast_shapes() {
        let e = parse_expr("x2*x1 + h", &wctx(1)).unwrap();
        assert_eq!(
            e,
            Expr::Add(vec![
                Expr::Mul(vec![Expr::Var(2), Expr::Var(1)]),
                Expr::Param { exp: 1 }
            ])
        );
        let e = parse_expr("(x1 + x2^2)^2", &wctx(1)).unwrap();
        assert_eq!(
            e,
            Expr::Pow(
                Box::new(Expr::Add(vec![
                    Expr::Var(1),
                    Expr::Pow(Box::new(Expr::Var(2)), 2)
                ])),
                2
            )
        );
        let e = parse_expr("-x1^2", &wctx(1)).unwrap();
        assert_eq!(e, Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Var(1)), 2))));
        assert_eq!(
            parse_expr("t^-3", &wctx(1)).unwrap(),
            Expr::Param { exp: -3 }
        );
        assert_eq!(
            parse_expr("3/6", &wctx(1)).unwrap(),
            Expr::Const(ratio(1, 2))
        );
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_expr("x3*x1", &wctx(1)),
            Err(Error::UnknownVariable { pos: 0, .. })
        ));
        assert!(matches!(
            parse_expr("x1 x2", &wctx(1)),
            Err(Error::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            parse_expr("x1 +", &wctx(1)),
            Err(Error::Syntax { pos: 4, .. })
        ));
        assert!(matches!(
            parse_expr("", &wctx(1)),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_expr("x1^-1", &wctx(1)),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_expr("(x1", &wctx(1)),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_expr("x1 $ 2", &wctx(1)),
            Err(Error::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            parse_expr("y1", &wctx(1)),
            Err(Error::UnknownVariable { .. })
        ));
        assert!(matches!(
            parse_expr("x0", &wctx(1)),
            Err(Error::UnknownVariable { .. })
        ));
        assert_eq!(
            parse_expr("x1 + q", &ParseContext::Poisson(1)),
            Err(Error::ParamInPoissonContext { pos: 5 })
        );
    }

    #[test]
    fn evaluation_examples() {
        let w = WeylContext::weyl(1);
        assert_eq!(parse_weyl("x2*x1", &w).unwrap().to_string(), "x1*x2 + 1");
        assert_eq!(parse_poisson("x2*x1", 1).unwrap().to_string(), "x1*x2");
        let a = WeylContext::formal(1);
        assert_eq!(
            parse_weyl("x2^2*x1^2", &a).unwrap().to_string(),
            "x1^2*x2^2 + 4*h*x1*x2 + 2*h^2"
        );
        assert_eq!(
            parse_weyl("x1 - t*x1 + q", &a).unwrap().to_string(),
            "(-h + 1)*x1 + h"
        );
        let aq = WeylContext::numeric(1, rat(2)).unwrap();
        assert_eq!(
            parse_weyl("q^-1*x1 + q^2", &aq).unwrap().to_string(),
            "1/2*x1 + 4"
        );
        assert!(matches!(
            parse_weyl("h^-1*x1", &a),
            Err(Error::IllegalCoefficient(_))
        ));
    }

    #[test]
    fn renders_reparse() {
        let ctx = WeylContext::family(2);
        for src in [
            "h^-2*x1*x2^2 - 1/2*x3 + (h^2 - 3*h^-1)*x4^3 + 7",
            "-x1^2*x4 + (h + 1)",
            "0",
            "-(h + 1)*x2",
        ] {
            let f = parse_weyl(src, &ctx).unwrap();
            let text = f.to_string();
            assert_eq!(parse_weyl(&text, &ctx).unwrap(), f, "{text}");
        }
    }

    #[test]
    fn degree_cap_applies_to_poisson_powers() {
        assert!(matches!(
            parse_poisson("x1^1000", 1),
            Err(Error::DegreeCapExceeded { .. })
        ));
    }
}
