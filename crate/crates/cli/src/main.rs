use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use semiweyl::bench::{run_bench, to_csv, BENCH_SEED, BENCH_TRIALS};
use semiweyl::bridge::{gamma_hat, psi, psi_inverse, semiclassical_bracket};
use semiweyl::expr::{eval_ast, parse_expr};
use semiweyl::io::{
    element_to_json, parse_morphisms, poisson_morphism_json, weyl_morphism_json, AnyMorphism,
    MorphismJson,
};
use semiweyl::monomial::enumerate_monomials;
use semiweyl::morphisms::audit::{audit_psi, Claim};
use semiweyl::morphisms::corpus::{tame_corpus_in, CorpusConfig};
use semiweyl::morphisms::transport::{psi_transport, varphi};
use semiweyl::morphisms::{apply, compose, validate};
use semiweyl::poisson::poisson_bracket;
use semiweyl::scalars::parse_rational;
use semiweyl::selftest::{run_selftest, SELFTEST_SEED};
use semiweyl::weyl::{apply_derivation_nu, commutator, monomial_count, specialize};
use semiweyl::{parse_poisson, parse_weyl, Element, Error, ParseContext, WeylContext};

#[derive(Parser)]
#[command(
    name = "semiweyl",
    version,
    about = "Exact Weyl algebra, Poisson Weyl algebra and morphism-transport computations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct AlgebraArgs {
    /// An, Wn, Aq=<r>, Aqhat, Wqhat or Bn.
    #[arg(long, default_value = "Wn")]
    algebra: String,
    #[arg(long, default_value_t = 1)]
    n: usize,
}

#[derive(Args)]
struct Arity {
    #[arg(long, default_value_t = 1)]
    n: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of an expression: canonical text, then JSON.
    Normalform {
        #[command(flatten)]
        alg: AlgebraArgs,
        expr: String,
    },
    /// `fg - gf` in a Weyl-type algebra.
    Commutator {
        #[command(flatten)]
        alg: AlgebraArgs,
        f: String,
        g: String,
    },
    /// Symplectic Poisson bracket in `Bn`.
    Bracket {
        #[command(flatten)]
        arity: Arity,
        f: String,
        g: String,
    },
    /// Bracket computed as the semiclassical limit of the `An` commutator.
    SclBracket {
        #[command(flatten)]
        arity: Arity,
        f: String,
        g: String,
    },
    /// Evaluation at `h = 0` of an `Aqhat` element with polynomial coefficients.
    GammaHat {
        #[command(flatten)]
        arity: Arity,
        f: String,
    },
    /// `x_{2l} -> h*x_{2l}`, from `Aqhat` to `Wqhat`.
    Psi {
        #[command(flatten)]
        arity: Arity,
        f: String,
    },
    /// Inverse of `psi`, from `Wqhat` to `Aqhat`.
    PsiInv {
        #[command(flatten)]
        arity: Arity,
        f: String,
    },
    /// Evaluates the parameter of an `An` or `Aqhat` element at `q`.
    Specialize {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        q: String,
        f: String,
    },
    /// `h * d/dx_{2j-1}` on `An`.
    Nu {
        #[command(flatten)]
        arity: Arity,
        #[arg(long)]
        j: usize,
        f: String,
    },
    /// Number of standard monomials of degree at most `d`.
    Count {
        #[command(flatten)]
        arity: Arity,
        #[arg(long)]
        d: u32,
    },
    /// Operations on morphism JSON read from a file or stdin.
    Morphism {
        #[command(subcommand)]
        op: MorphismOp,
    },
    /// Seeded corpus of tame automorphisms as a JSON list.
    Corpus {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        size: usize,
        /// Longest generator word.
        #[arg(long, default_value_t = 2)]
        max_word: usize,
        /// Emit `Aqhat` endomorphisms (shears may carry powers of h).
        #[arg(long)]
        ahat: bool,
    },
    /// Evaluates the transport claims on a corpus and writes the report.
    Audit {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value = "C1,C2,C3,C4,C5")]
        claims: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the invariant suite.
    Selftest {
        #[arg(long, default_value_t = SELFTEST_SEED)]
        seed: u64,
    },
    /// CSV of closed-form product against the rewriting oracle.
    Bench {
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
        #[arg(long, default_value_t = BENCH_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = BENCH_SEED)]
        seed: u64,
    },
}

#[derive(Args)]
struct Input {
    /// Morphism JSON file; stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum MorphismOp {
    /// Checks the defining relations on generator images.
    Validate(Input),
    /// Image of an expression under a validated morphism.
    Apply {
        #[command(flatten)]
        input: Input,
        expr: String,
    },
    /// `m2 ∘ m1` for the list `[m2, m1]`.
    Compose(Input),
    /// Transport of an `Aqhat` endomorphism to `Bn`.
    Varphi(Input),
    /// Transport of a `Wn` endomorphism to `Bn`, with intermediate data.
    PsiTransport(Input),
}

fn parse_context(alg: &AlgebraArgs) -> Result<ParseContext> {
    if alg.algebra == "Bn" {
        if alg.n == 0 {
            return Err(Error::InvalidContext("n must be positive".into()).into());
        }
        return Ok(ParseContext::Poisson(alg.n));
    }
    Ok(ParseContext::Weyl(WeylContext::from_algebra_name(
        &alg.algebra,
        alg.n,
    )?))
}

fn weyl_context(alg: &AlgebraArgs) -> Result<WeylContext> {
    Ok(WeylContext::from_algebra_name(&alg.algebra, alg.n)?)
}

fn print_element(out: &mut impl Write, e: &Element) -> Result<()> {
    writeln!(out, "{e}")?;
    writeln!(out, "{}", serde_json::to_string(&element_to_json(e))?)?;
    Ok(())
}

fn read_input(input: &Input) -> Result<String> {
    match &input.input {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn single(ms: Vec<AnyMorphism>) -> Result<AnyMorphism> {
    match <[AnyMorphism; 1]>::try_from(ms) {
        Ok([m]) => Ok(m),
        Err(ms) => Err(Error::Malformed(format!("expected one morphism, got {}", ms.len())).into()),
    }
}

fn morphism_json(m: &AnyMorphism) -> MorphismJson {
    match m {
        AnyMorphism::Weyl(m) => weyl_morphism_json(m),
        AnyMorphism::Poisson(m) => poisson_morphism_json(m),
    }
}

fn print_json(out: &mut impl Write, v: &impl serde::Serialize) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

fn run_morphism(op: &MorphismOp, out: &mut impl Write) -> Result<()> {
    match op {
        MorphismOp::Validate(input) => {
            let m = match single(parse_morphisms(&read_input(input)?)?)? {
                AnyMorphism::Weyl(m) => AnyMorphism::Weyl(validate(m)),
                AnyMorphism::Poisson(m) => AnyMorphism::Poisson(validate(m)),
            };
            print_json(out, &morphism_json(&m))
        }
        MorphismOp::Apply { input, expr } => match single(parse_morphisms(&read_input(input)?)?)? {
            AnyMorphism::Weyl(m) => {
                let f = parse_weyl(expr, m.context())?;
                print_element(out, &Element::Weyl(apply(&m, &f)?))
            }
            AnyMorphism::Poisson(m) => {
                let f = parse_poisson(expr, m.n())?;
                print_element(out, &Element::Poisson(apply(&m, &f)?))
            }
        },
        MorphismOp::Compose(input) => {
            let ms = parse_morphisms(&read_input(input)?)?;
            let composed = match <[AnyMorphism; 2]>::try_from(ms) {
                Ok([AnyMorphism::Weyl(a), AnyMorphism::Weyl(b)]) => {
                    AnyMorphism::Weyl(compose(&a, &b)?)
                }
                Ok([AnyMorphism::Poisson(a), AnyMorphism::Poisson(b)]) => {
                    AnyMorphism::Poisson(compose(&a, &b)?)
                }
                Ok([a, b]) => {
                    return Err(Error::KindMismatch {
                        left: morphism_json(&a).kind,
                        right: morphism_json(&b).kind,
                    }
                    .into())
                }
                Err(ms) => bail!(Error::Malformed(format!(
                    "compose expects [m2, m1], got {} morphisms",
                    ms.len()
                ))),
            };
            print_json(out, &morphism_json(&composed))
        }
        MorphismOp::Varphi(input) => match single(parse_morphisms(&read_input(input)?)?)? {
            AnyMorphism::Weyl(m) => print_json(out, &poisson_morphism_json(&varphi(&m)?)),
            AnyMorphism::Poisson(_) => Err(Error::KindMismatch {
                left: "PoissonEndo".into(),
                right: "AHatEndo".into(),
            }
            .into()),
        },
        MorphismOp::PsiTransport(input) => match single(parse_morphisms(&read_input(input)?)?)? {
            AnyMorphism::Weyl(m) => {
                let t = psi_transport(&m)?;
                let report = serde_json::json!({
                    "conjugated": t.conjugated.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "clearing": t.clearing,
                    "shifted": t.shifted.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "morphism": poisson_morphism_json(&validate(t.morphism)),
                });
                print_json(out, &report)
            }
            AnyMorphism::Poisson(_) => Err(Error::KindMismatch {
                left: "PoissonEndo".into(),
                right: "WeylEndo".into(),
            }
            .into()),
        },
    }
}

fn run(cli: Cli, out: &mut impl Write) -> Result<bool> {
    match cli.command {
        Command::Normalform { alg, expr } => {
            let ctx = parse_context(&alg)?;
            print_element(out, &eval_ast(&parse_expr(&expr, &ctx)?, &ctx)?)?;
        }
        Command::Commutator { alg, f, g } => {
            let ctx = weyl_context(&alg)?;
            let c = commutator(&parse_weyl(&f, &ctx)?, &parse_weyl(&g, &ctx)?)?;
            print_element(out, &Element::Weyl(c))?;
        }
        Command::Bracket { arity, f, g } => {
            let b = poisson_bracket(&parse_poisson(&f, arity.n)?, &parse_poisson(&g, arity.n)?)?;
            print_element(out, &Element::Poisson(b))?;
        }
        Command::SclBracket { arity, f, g } => {
            let b =
                semiclassical_bracket(&parse_poisson(&f, arity.n)?, &parse_poisson(&g, arity.n)?)?;
            print_element(out, &Element::Poisson(b))?;
        }
        Command::GammaHat { arity, f } => {
            let f = parse_weyl(&f, &WeylContext::family(arity.n))?;
            print_element(out, &Element::Poisson(gamma_hat(&f)?))?;
        }
        Command::Psi { arity, f } => {
            let f = parse_weyl(&f, &WeylContext::family(arity.n))?;
            print_element(out, &Element::Weyl(psi(&f)?))?;
        }
        Command::PsiInv { arity, f } => {
            let f = parse_weyl(&f, &WeylContext::family_weyl(arity.n))?;
            print_element(out, &Element::Weyl(psi_inverse(&f)?))?;
        }
        Command::Specialize { alg, q, f } => {
            let ctx = weyl_context(&alg)?;
            let q = parse_rational(&q)?;
            print_element(out, &Element::Weyl(specialize(&parse_weyl(&f, &ctx)?, &q)?))?;
        }
        Command::Nu { arity, j, f } => {
            let f = parse_weyl(&f, &WeylContext::formal(arity.n))?;
            print_element(out, &Element::Weyl(apply_derivation_nu(&f, j)?))?;
        }
        Command::Count { arity, d } => {
            let listed = enumerate_monomials(2 * arity.n, d).len();
            let formula = monomial_count(arity.n, d);
            writeln!(out, "{formula}")?;
            return Ok(formula == listed.into());
        }
        Command::Morphism { op } => run_morphism(&op, out)?,
        Command::Corpus {
            n,
            seed,
            size,
            max_word,
            ahat,
        } => {
            let mut cfg = CorpusConfig::new(n, seed, size);
            cfg.max_word = max_word;
            let ctx = if ahat {
                cfg.max_scale = 1;
                WeylContext::family(n)
            } else {
                WeylContext::weyl(n)
            };
            let corpus = tame_corpus_in(&ctx, &cfg)?;
            print_json(
                out,
                &corpus.iter().map(weyl_morphism_json).collect::<Vec<_>>(),
            )?;
        }
        Command::Audit {
            corpus,
            claims,
            out: path,
        } => {
            let text = fs::read_to_string(&corpus)
                .with_context(|| format!("reading {}", corpus.display()))?;
            let mut ms = Vec::new();
            for m in parse_morphisms(&text)? {
                match m {
                    AnyMorphism::Weyl(m) => ms.push(m),
                    AnyMorphism::Poisson(_) => bail!(Error::KindMismatch {
                        left: "PoissonEndo".into(),
                        right: "WeylEndo or AHatEndo".into(),
                    }),
                }
            }
            let claims = claims
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(str::parse::<Claim>)
                .collect::<Result<BTreeSet<_>, _>>()?;
            let report = audit_psi(&ms, &claims, &corpus.display().to_string());
            let json = serde_json::to_string_pretty(&report)?;
            match path {
                Some(p) => {
                    fs::write(&p, format!("{json}\n"))
                        .with_context(|| format!("writing {}", p.display()))?;
                    for (c, s) in &report.summary {
                        writeln!(out, "{c}: {} pass, {} fail", s.pass, s.fail)?;
                    }
                }
                None => writeln!(out, "{json}")?,
            }
        }
        Command::Selftest { seed } => {
            let outcomes = run_selftest(seed);
            let mut ok = true;
            for o in &outcomes {
                match &o.failure {
                    None => writeln!(out, "PASS {} ({} cases)", o.name, o.cases)?,
                    Some(f) => {
                        ok = false;
                        writeln!(out, "FAIL {} ({} cases): {f}", o.name, o.cases)?;
                    }
                }
            }
            return Ok(ok);
        }
        Command::Bench {
            max_degree,
            trials,
            seed,
        } => {
            let rows = run_bench(max_degree, trials, seed)?;
            write!(out, "{}", to_csv(&rows))?;
            return Ok(rows.iter().all(|r| r.equal));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e)
            if e.downcast_ref::<io::Error>()
                .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            let (code, message) = match e.downcast_ref::<Error>() {
                Some(d) => (d.code(), d.to_string()),
                None => ("Io", format!("{e:#}")),
            };
            let body = serde_json::json!({ "error": code, "message": message });
            eprintln!("{body}");
            ExitCode::from(1)
        }
    }
}
