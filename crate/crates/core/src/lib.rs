//! Exact arithmetic in Weyl-type algebras and the Poisson Weyl algebra, the
//! maps between them, and an audit of morphism transport.
//!
//! ```
//! use semiweyl::{parse_weyl, WeylContext};
//!
//! let w1 = WeylContext::weyl(1);
//! assert_eq!(parse_weyl("x2*x1", &w1).unwrap().to_string(), "x1*x2 + 1");
//! ```

pub mod bench;
pub mod bridge;
pub mod error;
pub mod expr;
pub mod io;
pub mod monomial;
pub mod morphisms;
pub mod poisson;
pub mod random;
pub mod scalars;
pub mod selftest;
pub mod weyl;

pub use error::{Error, Result};
pub use expr::{parse_poisson, parse_weyl, Element, Expr, ParseContext};
pub use monomial::StandardMonomial;
pub use morphisms::{MorphismKind, PoissonMorphism, Validation, WeylMorphism};
pub use poisson::{poisson_bracket, PoissonElement};
pub use scalars::{ParamPoly, Rational};
pub use weyl::{weyl_mul, Mode, WeylContext, WeylElement};
