//! Seeded generators for test inputs. Every generator is a pure function
//! of its arguments; the RNG is ChaCha8 seeded from `seed`.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::flags::Flag;
use crate::linalg::{rat, Matrix, Rational};
use crate::positivity::{elementary_product, longest_word, random_positive_rational};
use crate::reps::{barbot_flag, veronese_flag, BarbotSpec, MoebiusElement, ProjectivePoint};
use crate::tuples::FlagMapSample;

pub use crate::positivity::random_tp;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A totally positive unipotent with one strictly-upper entry shifted by
/// a small integer, so the result lands on either side of the boundary.
pub fn perturbed_tp(d: usize, seed: u64) -> Matrix {
    let mut u = random_tp(d, seed);
    let mut rng = rng(seed ^ 0x9e37_79b9_7f4a_7c15);
    let r = rng.random_range(0..d - 1);
    let c = rng.random_range(r + 1..d);
    let shift = rng.random_range(-3..=3);
    u[(r, c)] += rat(shift);
    u
}

/// Upper unipotent with strictly-upper entries uniform in `lo..=hi`.
pub fn random_small_unipotent(d: usize, lo: i64, hi: i64, seed: u64) -> Matrix {
    let mut rng = rng(seed);
    Matrix::from_fn(d, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Less => rat(rng.random_range(lo..=hi)),
        std::cmp::Ordering::Equal => rat(1),
        std::cmp::Ordering::Greater => rat(0),
    })
}

/// Totally nonnegative but not totally positive unipotent: the
/// longest-word product with at least one parameter set to zero.
pub fn random_boundary_tnn(d: usize, seed: u64) -> Matrix {
    assert!(d >= 2, "random_boundary_tnn needs d >= 2");
    let mut rng = rng(seed);
    let word = longest_word(d);
    let mut params: Vec<Rational> =
        word.iter().map(|_| if rng.random_bool(0.3) { rat(0) } else { random_positive_rational(&mut rng) }).collect();
    let forced = rng.random_range(0..word.len());
    params[forced] = rat(0);
    elementary_product(d, &word, &params)
}

/// Invertible integer matrix with entries in `-3..=3`.
pub fn random_invertible(d: usize, seed: u64) -> Matrix {
    let mut rng = rng(seed);
    loop {
        let m = Matrix::from_fn(d, |_, _| rat(rng.random_range(-3..=3)));
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// `n` distinct projective points with coordinates in `-bound..=bound`,
/// sorted in cyclic order.
pub fn random_points(n: usize, bound: i64, seed: u64) -> Vec<ProjectivePoint> {
    let mut rng = rng(seed);
    let mut points: Vec<ProjectivePoint> = Vec::with_capacity(n);
    while points.len() < n {
        let (p, q) = (rng.random_range(-bound..=bound), rng.random_range(-bound..=bound));
        if let Ok(x) = ProjectivePoint::new(p, q) {
            if !points.contains(&x) {
                points.push(x);
            }
        }
    }
    points.sort();
    points
}

/// Hyperbolic element `[[1,a],[0,1]]·[[1,0],[b,1]]` of `SL_2(Z)` with
/// `a, b` nonzero of the same sign, so the trace `2 + ab` exceeds 2.
pub fn random_hyperbolic(seed: u64) -> MoebiusElement {
    let mut rng = rng(seed);
    let a = rng.random_range(1..=3);
    let b = rng.random_range(1..=3);
    let s = if rng.random_bool(0.5) { 1 } else { -1 };
    MoebiusElement::from_i64(1 + a * b, s * a, s * b, 1).expect("determinant one")
}

/// Flags `(F_1, …, F_n)` built from `n-2` random totally positive factors
/// and moved by a random invertible matrix.
pub fn random_positive_tuple(d: usize, n: usize, seed: u64) -> Vec<Flag> {
    assert!(n >= 3, "tuples have at least three flags");
    let g = random_invertible(d, seed);
    let factors: Vec<Matrix> =
        (0..n - 2).map(|i| random_tp(d, seed.wrapping_mul(31).wrapping_add(i as u64 + 1))).collect();
    let mut flags = Vec::with_capacity(n);
    flags.push(Flag::ascending(d));
    // F_j = (u_{n-1} ··· u_j)·F_n for j = 2..n-1
    let mut middle = Vec::with_capacity(n - 2);
    let mut acc = Matrix::identity(d);
    for u in factors.iter().rev() {
        acc = &acc * u;
        middle.push(Flag::descending(d).act(&acc).expect("same dimension"));
    }
    middle.reverse();
    flags.extend(middle);
    flags.push(Flag::descending(d));
    flags.into_iter().map(|f| f.act(&g).expect("same dimension")).collect()
}

/// Flags of random invertible frames.
pub fn random_flags(d: usize, n: usize, seed: u64) -> Vec<Flag> {
    (0..n)
        .map(|i| {
            Flag::new(random_invertible(d, seed.wrapping_mul(1_000_003).wrapping_add(i as u64))).expect("invertible")
        })
        .collect()
}

/// Veronese flags at `points`.
pub fn veronese_sample(d: usize, points: &[ProjectivePoint]) -> FlagMapSample {
    let flags = points.iter().map(|x| veronese_flag(x, d)).collect();
    FlagMapSample::new(points.to_vec(), flags).expect("distinct points")
}

/// Barbot flags at `points`.
pub fn barbot_sample(spec: &BarbotSpec, points: &[ProjectivePoint]) -> FlagMapSample {
    let flags = points.iter().map(|x| barbot_flag(spec, x)).collect();
    FlagMapSample::new(points.to_vec(), flags).expect("distinct points")
}
