//! Seeded random minimal bifix-free DFAs.
//!
//! Letters are drawn uniformly and without repetition from `B_bf(n)`; the
//! draw is rejected until the DFA with initial state 0 and final state
//! `n-2` is minimal and bifix-free.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automata::{is_bifix_free, is_minimal, Dfa};
use crate::semigroups::enumerate_bbf;
use crate::transmap::Transformation;
use crate::{par, Error, Result};

/// Rejections allowed per requested DFA.
pub const MAX_REJECTIONS: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct Sampler {
    n: usize,
    pool: Vec<Transformation>,
}

/// One accepted DFA and the number of rejected draws before it.
#[derive(Clone, Debug)]
pub struct Sample {
    pub dfa: Dfa,
    pub rejections: u64,
}

impl Sampler {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!("sampling needs n >= 3, got {n}")));
        }
        let pool = enumerate_bbf(n)?.sorted();
        Ok(Self { n, pool })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Draws one DFA with `letters` letters from `rng`.
    pub fn draw(&self, letters: usize, rng: &mut ChaCha8Rng) -> Result<Sample> {
        if letters == 0 || letters > self.pool.len() {
            return Err(Error::Domain(format!(
                "letters must be in 1..={}, got {letters}",
                self.pool.len()
            )));
        }
        let n = self.n;
        for rejections in 0..=MAX_REJECTIONS {
            let delta: Vec<Transformation> = index::sample(rng, self.pool.len(), letters)
                .into_iter()
                .map(|i| self.pool[i])
                .collect();
            let dfa = Dfa::new(n, delta, 0, vec![n - 2])?;
            if is_minimal(&dfa) && is_bifix_free(&dfa)?.is_bifix() {
                return Ok(Sample { dfa, rejections });
            }
        }
        Err(Error::ResourceGuard(format!(
            "no minimal bifix-free DFA after {MAX_REJECTIONS} rejections"
        )))
    }

    /// `count` DFAs; the i-th uses stream i of `seed` and `letters(i)`
    /// letters, so results do not depend on scheduling.
    pub fn draw_many<F>(&self, seed: u64, count: usize, letters: F) -> Result<Vec<Sample>>
    where
        F: Fn(usize) -> usize + Sync,
    {
        par::map_range(count, |i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            self.draw(letters(i), &mut rng)
        })
        .into_iter()
        .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroups::in_bbf;

    #[test]
    fn samples_are_minimal_bifix_free_and_reproducible() {
        let s = Sampler::new(6).unwrap();
        let a = s.draw_many(7, 6, |i| 2 + i % 3).unwrap();
        let b = s.draw_many(7, 6, |i| 2 + i % 3).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.dfa, y.dfa);
            assert!(is_minimal(&x.dfa));
            assert!(x.dfa.delta().iter().all(in_bbf));
        }
        assert_eq!(a[4].dfa.alphabet_size(), 3);
    }

    #[test]
    fn bad_letter_counts() {
        let s = Sampler::new(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(s.draw(0, &mut rng).is_err());
        assert!(s.draw(100, &mut rng).is_err());
    }
}
