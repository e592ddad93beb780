#![allow(dead_code)]

use num_traits::Zero;
use polyvor::metrics::{random_metric, FiniteMetric};
use polyvor::rational::{int, q, Q};
use polyvor::AffinePoint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random rational point of the simplex on `n_states` states, with
/// denominators dividing the sum of `n_states` draws from `0..=20`.
pub fn random_simplex_point(rng: &mut ChaCha8Rng, n_states: usize) -> AffinePoint {
    loop {
        let w: Vec<i64> = (0..n_states).map(|_| rng.gen_range(0..=20)).collect();
        let total: i64 = w.iter().sum();
        if total > 0 {
            return AffinePoint::simplex(w.iter().map(|&x| q(x, total)).collect()).unwrap();
        }
    }
}

/// Random direction in the plane `sum t = 0` with small rational entries.
pub fn random_direction(rng: &mut ChaCha8Rng) -> polyvor::DirectionVector {
    let a = q(rng.gen_range(-50..=50), rng.gen_range(1..=25));
    let b = q(rng.gen_range(-50..=50), rng.gen_range(1..=25));
    let c = -(&a + &b);
    polyvor::DirectionVector::new(vec![a, b, c]).unwrap()
}

/// True when every triangle inequality of a metric on three states is strict,
/// so the ball is a hexagon.
pub fn is_strict(d: &FiniteMetric) -> bool {
    let (a, b, c) = (d.get(0, 1), d.get(0, 2), d.get(1, 2));
    a < &(b + c) && b < &(a + c) && c < &(a + b)
}

/// Metrics on three states from a seed stream, skipping the ones with a
/// triangle equality.
pub fn strict_planar_metrics(first_seed: u64) -> impl Iterator<Item = FiniteMetric> {
    (first_seed..)
        .map(|s| random_metric(3, s, &int(1)))
        .filter(is_strict)
}

pub fn zero() -> Q {
    Q::zero()
}
