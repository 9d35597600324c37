//! Deterministic random points over a prime field.

use crate::ring::{Field, PrimeField, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent stream for `(seed, trial)`, so trials can run in any order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(trial);
    r
}

/// Values for the generators `0..m` plus lazily derived values for any
/// other variable (parameters such as a pencil variable).
#[derive(Clone, Debug)]
pub struct Point {
    pub gens: Vec<u64>,
    salt: u64,
    p: u64,
}

impl Point {
    pub fn random<R: Rng + ?Sized>(field: &PrimeField, m: usize, rng: &mut R) -> Self {
        let gens = (0..m).map(|_| field.random_nonzero(rng)).collect();
        Point { gens, salt: rng.gen(), p: field.modulus() }
    }

    pub fn from_values(field: &PrimeField, gens: Vec<u64>, salt: u64) -> Self {
        Point { gens, salt, p: field.modulus() }
    }

    pub fn get(&self, v: Var) -> u64 {
        match self.gens.get(v.0 as usize) {
            Some(x) => *x,
            None => {
                let mut z = self.salt ^ (v.0 as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
                z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
                z ^= z >> 31;
                1 + z % (self.p - 1)
            }
        }
    }

    pub fn lookup(&self) -> impl Fn(Var) -> Option<u64> + '_ {
        move |v| Some(self.get(v))
    }
}

/// Small nonzero integers, handy for exact rational spot checks.
pub fn small_nonzero<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> i64 {
    loop {
        let x = rng.gen_range(-bound..=bound);
        if x != 0 {
            return x;
        }
    }
}

pub fn field_elem(field: &PrimeField, n: i64) -> u64 {
    field.from_i64(n)
}
