use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Exponent vector over `x_1..x_{2n}`; slot `i` (0-based) holds the exponent
/// of `x_{i+1}`. Read as the ordered product with ascending indices.
///
/// Ordering is graded lexicographic: total degree first, then the exponent
/// vectors compared slot by slot (so `x1 > x2` at equal degree).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StandardMonomial {
    exps: Vec<u32>,
}

impl StandardMonomial {
    pub fn one(vars: usize) -> Self {
        Self {
            exps: vec![0; vars],
        }
    }

    /// The generator `x_{index+1}`.
    pub fn var(vars: usize, index: usize) -> Self {
        let mut m = Self::one(vars);
        m.exps[index] = 1;
        m
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Self { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, slot: usize) -> u32 {
        self.exps[slot]
    }

    pub fn vars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Sum of exponents at the even generators `x_2, x_4, ...`.
    pub fn even_degree(&self) -> u32 {
        self.exps.iter().skip(1).step_by(2).sum()
    }

    /// Commutative product (exponent addition).
    pub fn mul(&self, other: &Self) -> Self {
        Self {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub(crate) fn with_exponent(&self, slot: usize, e: u32) -> Self {
        let mut m = self.clone();
        m.exps[slot] = e;
        m
    }

    /// Generator indices (0-based) of the ordered word, e.g. `x1^2*x2` gives
    /// `[0, 0, 1]`.
    pub fn word(&self) -> Vec<usize> {
        self.exps
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect()
    }
}

impl Ord for StandardMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for StandardMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for StandardMonomial {
    /// `x1^2*x2`, or `1` for the unit.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for StandardMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All standard monomials in `vars` variables of total degree at most `max_degree`.
pub fn enumerate_monomials(vars: usize, max_degree: u32) -> Vec<StandardMonomial> {
    fn rec(slot: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<StandardMonomial>) {
        if slot == cur.len() {
            out.push(StandardMonomial::from_exponents(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[slot] = e;
            rec(slot + 1, left - e, cur, out);
        }
        cur[slot] = 0;
    }
    let mut out = Vec::new();
    rec(0, max_degree, &mut vec![0; vars], &mut out);
    out.sort();
    out
}
