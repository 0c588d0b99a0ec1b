//! Closed-form product against the rewriting oracle: timings and equality.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::random::{random_nonzero_weyl, Shape};
use crate::weyl::{rewrite_oracle, weyl_mul, WeylContext};

pub const BENCH_TRIALS: usize = 5;
pub const BENCH_SEED: u64 = 0xBE_0C4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub degree: u32,
    pub n: usize,
    pub trial: usize,
    pub terms: usize,
    pub mul_ns: u128,
    pub oracle_ns: u128,
    pub equal: bool,
}

pub const CSV_HEADER: &str = "degree,n,trial,terms,mul_ns,oracle_ns,equal";

impl BenchRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.degree, self.n, self.trial, self.terms, self.mul_ns, self.oracle_ns, self.equal
        )
    }
}

/// Random pairs in `A_n` for `n ∈ {1, 2}` and every degree up to
/// `max_degree`; both products are timed and compared.
pub fn run_bench(max_degree: u32, trials: usize, seed: u64) -> Result<Vec<BenchRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for degree in 1..=max_degree {
        for n in 1..=2 {
            let ctx = WeylContext::formal(n);
            let shape = Shape::new(degree).with_terms(3);
            for trial in 0..trials {
                let f = random_nonzero_weyl(&mut rng, &ctx, &shape);
                let g = random_nonzero_weyl(&mut rng, &ctx, &shape);
                let t0 = Instant::now();
                let fast = weyl_mul(&f, &g)?;
                let mul_ns = t0.elapsed().as_nanos();
                let t1 = Instant::now();
                let slow = rewrite_oracle(&f, &g)?;
                let oracle_ns = t1.elapsed().as_nanos();
                rows.push(BenchRow {
                    degree,
                    n,
                    trial,
                    terms: fast.len(),
                    mul_ns,
                    oracle_ns,
                    equal: fast == slow,
                });
            }
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}
