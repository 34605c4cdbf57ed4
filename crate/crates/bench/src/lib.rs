//! Shared fixtures for the criterion benchmarks.

use chainmix::random::random_irreducible_chain;
use chainmix::{stationary, Distribution, Family, StochasticMatrix, STATIONARY_TOL};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Fixture {
    pub name: String,
    pub p: StochasticMatrix,
    pub pi: Distribution,
}

pub fn family(fam: Family, n: usize) -> Fixture {
    Fixture {
        name: format!("{}:{n}", fam.name()),
        p: fam.build(n).expect("family size"),
        pi: fam.stationary(n).expect("family size"),
    }
}

/// A dense-ish random irreducible chain, reproducible from `seed`.
pub fn random_chain(n: usize, seed: u64) -> Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_irreducible_chain(n, 0.3, &mut rng).expect("n > 0");
    let pi = stationary(&p, STATIONARY_TOL).expect("irreducible");
    Fixture {
        name: format!("random:{n}"),
        p,
        pi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert_eq!(family(Family::Cgb, 8).p.n(), 8);
        let a = random_chain(20, 3);
        assert_eq!(a.p.entries(), random_chain(20, 3).p.entries());
    }
}
