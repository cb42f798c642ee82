//! Triple corpora: exhaustive enumeration, seeded random sampling, and the
//! congruence filter `N | abc`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::abc::AbcSolution;
use crate::error::{Error, Result};

/// Every ABC-solution with `c <= max_c`, ordered by `c` and then by the
/// smaller magnitude `|b|`.
#[derive(Debug, Clone)]
pub struct Solutions {
    max_c: u64,
    c: u64,
    small: u64,
}

impl Iterator for Solutions {
    type Item = AbcSolution;

    fn next(&mut self) -> Option<AbcSolution> {
        while self.c <= self.max_c {
            self.small += 1;
            let large = self.c - self.small;
            if self.small >= large {
                self.c += 1;
                self.small = 0;
                continue;
            }
            if num_integer::gcd(self.small, self.c) == 1 {
                return Some(AbcSolution::from_coprime_magnitudes(self.small, large));
            }
        }
        None
    }
}

/// Exhaustive corpus; empty when `max_c < 3`.
pub fn enumerate_solutions(max_c: u64) -> Solutions {
    Solutions { max_c, c: 3, small: 0 }
}

/// Number of ABC-solutions with `c <= max_c`: half the totient sum over
/// `3..=max_c`, computed with a sieve.
pub fn solution_count(max_c: u64) -> u64 {
    if max_c < 3 {
        return 0;
    }
    let limit = max_c as usize;
    let mut phi: Vec<u64> = (0..=limit as u64).collect();
    for p in 2..=limit {
        if phi[p] == p as u64 {
            for k in (p..=limit).step_by(p) {
                phi[k] -= phi[k] / p as u64;
            }
        }
    }
    phi[3..].iter().map(|v| v / 2).sum()
}

/// `count` distinct solutions with `c <= max_c`, drawn by rejection
/// sampling of coprime magnitude pairs and returned in canonical order.
///
/// When `count` reaches the corpus size the whole corpus is returned.
pub fn random_solutions(max_c: u64, count: usize, seed: u64) -> Result<Vec<AbcSolution>> {
    if max_c < 3 {
        return Err(Error::CorpusTooSmall { max_c });
    }
    if max_c <= 1 << 16 && count as u64 >= solution_count(max_c) {
        return Ok(enumerate_solutions(max_c).collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = BTreeSet::new();
    let max_attempts = 64 * count as u64 + 1_000_000;
    for _ in 0..max_attempts {
        if picked.len() >= count {
            break;
        }
        let x = rng.random_range(1..max_c);
        let y = rng.random_range(1..max_c);
        if x >= y || x + y > max_c || num_integer::gcd(x, y) != 1 {
            continue;
        }
        picked.insert((x + y, x));
    }
    Ok(picked
        .into_iter()
        .map(|(c, x)| AbcSolution::from_coprime_magnitudes(x, c - x))
        .collect())
}

/// Keep the triples with `N | abc`.
pub fn filter_congruence<I>(corpus: I, modulus: u64) -> Result<impl Iterator<Item = AbcSolution>>
where
    I: IntoIterator<Item = AbcSolution>,
{
    if modulus == 0 {
        return Err(Error::InvalidModulus { modulus, min: 1 });
    }
    let n = BigInt::from(modulus);
    Ok(corpus
        .into_iter()
        .filter(move |t| (t.a() * t.b() * t.c() % &n).is_zero()))
}

/// SHA-256 over `a,b,c\n` lines, in corpus order.
#[derive(Debug, Clone, Default)]
pub struct CorpusHasher {
    hasher: Sha256,
    count: u64,
}

impl CorpusHasher {
    pub fn update(&mut self, triple: &AbcSolution) {
        let line = format!("{},{},{}\n", triple.a(), triple.b(), triple.c());
        self.hasher.update(line.as_bytes());
        self.count += 1;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn finish(self) -> String {
        self.hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Magnitudes `(|a|, |b|, c)` when they fit in a machine word.
pub(crate) fn small_parts(t: &AbcSolution) -> Option<(u64, u64, u64)> {
    Some((
        t.a().magnitude().to_u64()?,
        t.b().magnitude().to_u64()?,
        t.c().to_u64()?,
    ))
}
