//! Total positivity of upper-triangular unipotent matrices.
//!
//! A unipotent upper-triangular `u` is totally positive when every
//! nontrivial minor (rows `I`, columns `J` with `i_p <= j_p`) is positive,
//! and totally nonnegative when they are all `>= 0`. Two deciders are
//! provided: [`tp_oracle`] enumerates every nontrivial minor, [`tp_staged`]
//! only looks at minors with consecutive rows and consecutive columns,
//! level by level. Once all nontrivial minors of size `< k` are positive,
//! positivity of the consecutive `k × k` minors implies positivity of all
//! nontrivial `k × k` minors, so the staged scan is complete on the
//! all-positive path.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{det_bareiss, frac, Matrix, MinorIndex, Rational};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Status {
    Positive,
    NonnegativeBoundary,
    Outside,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Positive => "Positive",
            Status::NonnegativeBoundary => "NonnegativeBoundary",
            Status::Outside => "Outside",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Method {
    Oracle,
    Staged,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Oracle => "oracle",
            Method::Staged => "staged",
        })
    }
}

/// A nontrivial minor that is zero or negative.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness {
    pub index: MinorIndex,
    pub value: Rational,
}

impl fmt::Display for Witness {
    /// `k;I;J;value`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.index, self.value)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PositivityVerdict {
    pub status: Status,
    /// Absent iff `status` is `Positive`. For `Outside` this is the
    /// lexicographically first negative minor; for `NonnegativeBoundary`
    /// the first vanishing minor the method met.
    pub witness: Option<Witness>,
    pub method: Method,
    /// Number of determinant evaluations performed.
    pub evaluations: u64,
}

impl PositivityVerdict {
    pub fn is_positive(&self) -> bool {
        self.status == Status::Positive
    }
}

/// True iff `m` is upper triangular with unit diagonal.
pub fn is_upper_unipotent(m: &Matrix) -> bool {
    m.is_upper_unipotent()
}

fn require_unipotent(u: &Matrix) -> Result<()> {
    if u.is_upper_unipotent() {
        Ok(())
    } else {
        Err(Error::NotUnipotentUpperTriangular)
    }
}

/// Nontrivial `k × k` minor indices of a `d × d` matrix in lexicographic
/// `(I, J)` order.
pub fn nontrivial_indices(d: usize, k: usize) -> impl Iterator<Item = MinorIndex> {
    (1..=d).combinations(k).flat_map(move |rows| {
        let keep = rows.clone();
        (1..=d)
            .combinations(k)
            .filter(move |cols| keep.iter().zip(cols).all(|(i, j)| i <= j))
            .map(move |cols| MinorIndex::new(rows.clone(), cols).expect("combinations are increasing"))
    })
}

/// Consecutive nontrivial `k × k` indices in lexicographic order.
pub fn consecutive_indices(d: usize, k: usize) -> impl Iterator<Item = MinorIndex> {
    let last = d + 1 - k;
    (1..=last).flat_map(move |a| (a..=last).map(move |b| MinorIndex::consecutive(a, b, k)))
}

/// Minors of `u` evaluated fraction-free on `L·u`, with `L` the common
/// denominator; the `k × k` minor of `u` is the integer minor over `L^k`.
struct Minors {
    scaled: Vec<Vec<BigInt>>,
    denominator: BigInt,
    evaluations: u64,
}

impl Minors {
    fn new(u: &Matrix) -> Self {
        let d = u.dim();
        let denominator = (0..d)
            .flat_map(|r| (0..d).map(move |c| (r, c)))
            .fold(BigInt::one(), |acc, (r, c)| acc.lcm(u[(r, c)].denom()));
        let scale = Rational::from_integer(denominator.clone());
        let scaled = (0..d).map(|r| (0..d).map(|c| (&u[(r, c)] * &scale).to_integer()).collect()).collect();
        Minors { scaled, denominator, evaluations: 0 }
    }

    fn dim(&self) -> usize {
        self.scaled.len()
    }

    fn eval(&mut self, idx: &MinorIndex) -> Rational {
        self.evaluations += 1;
        let sub = idx
            .rows()
            .iter()
            .map(|&r| idx.cols().iter().map(|&c| self.scaled[r - 1][c - 1].clone()).collect())
            .collect();
        Rational::new(det_bareiss(sub), Pow::pow(&self.denominator, idx.size()))
    }
}

/// Scans nontrivial minors of sizes `from_level..=d` in lexicographic
/// order, stopping at the first negative one.
fn nonnegativity_scan(minors: &mut Minors, from_level: usize) -> (Option<Witness>, Option<Witness>) {
    let d = minors.dim();
    let mut first_zero = None;
    for k in from_level..=d {
        for idx in nontrivial_indices(d, k) {
            let value = minors.eval(&idx);
            if value.is_negative() {
                return (Some(Witness { index: idx, value }), first_zero);
            }
            if value.is_zero() && first_zero.is_none() {
                first_zero = Some(Witness { index: idx, value });
            }
        }
    }
    (None, first_zero)
}

/// Brute-force decision: evaluates every nontrivial minor.
pub fn tp_oracle(u: &Matrix) -> Result<PositivityVerdict> {
    require_unipotent(u)?;
    let mut minors = Minors::new(u);
    let (negative, zero) = nonnegativity_scan(&mut minors, 1);
    let (status, witness) = match (negative, zero) {
        (Some(w), _) => (Status::Outside, Some(w)),
        (None, Some(w)) => (Status::NonnegativeBoundary, Some(w)),
        (None, None) => (Status::Positive, None),
    };
    Ok(PositivityVerdict { status, witness, method: Method::Oracle, evaluations: minors.evaluations })
}

/// Level of the first failing consecutive minor together with that minor.
fn staged_failure(minors: &mut Minors) -> Option<(usize, Witness)> {
    let d = minors.dim();
    for k in 1..=d {
        for idx in consecutive_indices(d, k) {
            let value = minors.eval(&idx);
            if !value.is_positive() {
                return Some((k, Witness { index: idx, value }));
            }
        }
    }
    None
}

/// Staged decision over consecutive minors.
///
/// On failure at level `k` all smaller levels are known to be positive,
/// so the nonnegativity scan that separates `Outside` from
/// `NonnegativeBoundary` starts at level `k`.
pub fn tp_staged(u: &Matrix) -> Result<PositivityVerdict> {
    require_unipotent(u)?;
    let mut minors = Minors::new(u);
    let Some((level, failing)) = staged_failure(&mut minors) else {
        return Ok(PositivityVerdict {
            status: Status::Positive,
            witness: None,
            method: Method::Staged,
            evaluations: minors.evaluations,
        });
    };
    let (negative, _) = nonnegativity_scan(&mut minors, level);
    let (status, witness) = match negative {
        Some(w) => (Status::Outside, w),
        None => (Status::NonnegativeBoundary, failing),
    };
    Ok(PositivityVerdict { status, witness: Some(witness), method: Method::Staged, evaluations: minors.evaluations })
}

/// Number of consecutive nontrivial minors, i.e. the determinant
/// evaluations of [`tp_staged`] on a totally positive input:
/// `sum_{k=1}^{d} (d-k+1)(d-k+2)/2`.
pub fn staged_minor_count(d: usize) -> u64 {
    (1..=d as u64).map(|m| m * (m + 1) / 2).sum()
}

/// Where a totally nonnegative, not totally positive matrix first
/// degenerates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundaryReport {
    pub level: usize,
    /// Consecutive, nontrivial and vanishing.
    pub failing_index: MinorIndex,
    /// The minor on rows `(1..k)` and columns `(d-k+1..d)`; always zero.
    pub corner_value: Rational,
}

impl BoundaryReport {
    pub fn corner_index(&self, d: usize) -> MinorIndex {
        MinorIndex::consecutive(1, d + 1 - self.level, self.level)
    }
}

/// Locates the smallest level carrying a vanishing nontrivial minor and
/// evaluates the top-right corner minor of that size.
pub fn boundary_corner_check(u: &Matrix) -> Result<BoundaryReport> {
    let verdict = tp_staged(u)?;
    if verdict.status != Status::NonnegativeBoundary {
        return Err(Error::PreconditionViolated(format!(
            "expected a NonnegativeBoundary matrix, got {}",
            verdict.status
        )));
    }
    let failing = verdict.witness.expect("boundary verdict carries a witness");
    let level = failing.index.size();
    let d = u.dim();
    let corner = MinorIndex::consecutive(1, d + 1 - level, level);
    let corner_value = u.minor(&corner)?;
    Ok(BoundaryReport { level, failing_index: failing.index, corner_value })
}

/// Reduced word `(1)(2,1)(3,2,1)…(d-1,…,1)` of the longest permutation,
/// as 1-based positions `i` of the factors `I + t·E_{i,i+1}`.
pub fn longest_word(d: usize) -> Vec<usize> {
    (1..d).flat_map(|m| (1..=m).rev()).collect()
}

/// Product of `I + t_r·E_{i_r,i_r+1}` along `word`.
pub fn elementary_product(d: usize, word: &[usize], params: &[Rational]) -> Matrix {
    assert_eq!(word.len(), params.len());
    word.iter().zip(params).fold(Matrix::identity(d), |acc, (&i, t)| &acc * &Matrix::elementary(d, i, i + 1, t.clone()))
}

pub(crate) fn random_positive_rational(rng: &mut impl Rng) -> Rational {
    frac(rng.random_range(1..=9), rng.random_range(1..=3))
}

/// Seeded totally positive unipotent: the longest-word product with
/// positive rational parameters.
pub fn random_tp(d: usize, seed: u64) -> Matrix {
    assert!(d >= 2, "random_tp needs d >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let word = longest_word(d);
    let params: Vec<Rational> = word.iter().map(|_| random_positive_rational(&mut rng)).collect();
    elementary_product(d, &word, &params)
}
