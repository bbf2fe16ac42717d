//! Helpers shared by the integration tests.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use troptrack::Q;

/// Deterministic generator for a named test.
pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Rational with numerator in `-60..=60` and denominator in `1..=7`.
pub fn rational(rng: &mut StdRng) -> Q {
    Q::new(rng.gen_range(-60i64..=60).into(), rng.gen_range(1i64..=7).into())
}

pub fn point(rng: &mut StdRng, n: usize) -> Vec<Q> {
    (0..n).map(|_| rational(rng)).collect()
}

pub fn qv(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| Q::from_integer(x.into())).collect()
}

/// Matrix mutation written out entrywise.
pub fn mutate_rows(b: &[Vec<i64>], k: usize) -> Vec<Vec<i64>> {
    let n = b.len();
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            out[i][j] = if i == k || j == k {
                -b[i][j]
            } else {
                b[i][j] + (b[i][k].abs() * b[k][j] + b[i][k] * b[k][j].abs()) / 2
            };
        }
    }
    out
}
