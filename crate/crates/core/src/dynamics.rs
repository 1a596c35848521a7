//! Power-positivity thresholds of regular unipotents and the singular value
//! dynamics of Barbot representations.
//!
//! Singular values and SVD flags of `τ_{d,j}(g)` are taken with respect to
//! the inner product in which `τ_{d,j}(O(2))` is orthogonal: each monomial
//! `e_1^{m-1-r} e_2^r` of a block is scaled by `sqrt(binom(m-1, r))`. All
//! floating-point flags below live in these rescaled basis-`B` coordinates.
//!
//! For exact input the SVD is not run on the matrix itself. The `k`-th
//! exterior power of `M` has top singular value `σ_1 ··· σ_k` and top left
//! singular vector the Plücker vector of `U_k`; its entries are minors of
//! `M`, computed exactly and rounded once. This keeps the small singular
//! values and the deep flag components accurate when `σ_1/σ_d` is far
//! beyond `1/f64::EPSILON`.

use itertools::Itertools;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::flags::{transverse, Flag};
use crate::linalg::{binomial, det_bareiss, Matrix, Rational};
use crate::reps::{barbot_flag, barbot_matrix, BarbotSpec, MoebiusElement, ProjectivePoint};
use crate::tuples::is_positive_triple;

pub const DEFAULT_CAP: u64 = 100_000;
pub const DEFAULT_GAP_TOLERANCE: f64 = 1e-8;
/// Distance below which a limit series counts as converged.
pub const CONVERGENCE_THRESHOLD: f64 = 1e-6;

/// Flag of iterated kernels `ker (u - I)^m` of a unipotent with a single
/// Jordan block.
pub fn fixed_flag(u: &Matrix) -> Result<Flag> {
    let d = u.dim();
    let sizes = u.jordan_block_sizes()?;
    if sizes != [d] {
        return Err(Error::NotSingleJordanBlock(sizes));
    }
    let nil = u - &Matrix::identity(d);
    let top = nil.pow(d as u64 - 1);
    let i = (0..d).find(|&c| top.column(c).iter().any(|x| !x.is_zero())).expect("N^{d-1} is nonzero");
    let mut columns = vec![crate::flags::unit_vector(d, i)];
    for _ in 1..d {
        let next = nil.apply(columns.last().expect("nonempty"));
        columns.push(next);
    }
    columns.reverse();
    Flag::new(Matrix::from_columns(&columns)?)
}

/// Smallest `t` in `1..=cap` with `(F, u^t·G, G)` positive, where `F` is
/// the fixed flag of `u`.
pub fn power_positivity_threshold(u: &Matrix, g: &Flag, cap: u64) -> Result<u64> {
    if cap == 0 {
        return Err(Error::BadParameters("cap must be positive".into()));
    }
    if g.dim() != u.dim() {
        return Err(Error::DimensionMismatch(u.dim(), g.dim()));
    }
    let f = fixed_flag(u)?;
    if !transverse(&f, g)? {
        return Err(Error::NotTransverse(1, 3));
    }
    let mut power = Matrix::identity(u.dim());
    for t in 1..=cap {
        power = &power * u;
        let (verdict, _) = is_positive_triple(&f, &g.act(&power)?, g)?;
        if verdict.is_positive() {
            return Ok(t);
        }
    }
    Err(Error::CapExceeded(cap))
}

/// Complete flag given by an orthonormal frame.
#[derive(Clone, Debug)]
pub struct FloatFlag {
    frame: DMatrix<f64>,
    tolerance: f64,
}

impl FloatFlag {
    /// Orthonormalizes the columns of `frame` in order (QR), keeping the
    /// flag they span.
    pub fn from_frame(frame: &DMatrix<f64>) -> Self {
        let q = frame.clone().qr().q();
        let tolerance = orthonormality_defect(&q);
        FloatFlag { frame: q, tolerance }
    }

    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.nrows()
    }

    /// `max |QᵀQ - I|` measured when the flag was built.
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }
}

fn orthonormality_defect(q: &DMatrix<f64>) -> f64 {
    let gram = q.transpose() * q;
    (gram - DMatrix::identity(q.ncols(), q.ncols())).amax()
}

/// Singular values in decreasing order and the consecutive ratios.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularProfile {
    pub values: Vec<f64>,
    /// `σ_i / σ_{i+1}`.
    pub gaps: Vec<f64>,
    /// `ln(σ_i / σ_{i+1})`, exact even when the ratio overflows.
    pub log_gaps: Vec<f64>,
}

impl SingularProfile {
    fn from_logs(logs: &[f64]) -> Self {
        let log_gaps: Vec<f64> = logs.windows(2).map(|w| w[0] - w[1]).collect();
        SingularProfile {
            values: logs.iter().map(|l| l.exp()).collect(),
            gaps: log_gaps.iter().map(|l| l.exp()).collect(),
            log_gaps,
        }
    }

    pub fn min_gap(&self) -> f64 {
        self.log_gaps.iter().copied().fold(f64::INFINITY, f64::min).exp()
    }

    fn check(&self, gap_tolerance: f64) -> Result<()> {
        let floor = gap_tolerance.ln_1p();
        match self.log_gaps.iter().position(|&l| l.is_nan() || l < floor) {
            Some(i) => Err(Error::SingularGapTooSmall { index: i + 1, ratio: self.gaps[i] }),
            None => Ok(()),
        }
    }
}

/// Left singular vectors as columns, by decreasing singular value, from
/// the eigendecomposition of `m·mᵀ`. The returned singular values are
/// only accurate relative to the largest one.
///
/// nalgebra's SVD can return left singular vectors well outside the
/// column space when `m` is numerically rank deficient, which is the
/// normal case for the residuals and exterior powers used here.
fn left_singular(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let scale = m.amax();
    if scale == 0.0 {
        return (vec![0.0; m.nrows()], DMatrix::identity(m.nrows(), m.nrows()));
    }
    let unit = m / scale;
    let eigen = (&unit * unit.transpose()).symmetric_eigen();
    let mut order: Vec<usize> = (0..eigen.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[b].total_cmp(&eigen.eigenvalues[a]));
    let values = order.iter().map(|&i| eigen.eigenvalues[i].max(0.0).sqrt() * scale).collect();
    let columns: Vec<_> = order.iter().map(|&i| eigen.eigenvectors.column(i).into_owned()).collect();
    (values, DMatrix::from_columns(&columns))
}

/// Singular values of a float matrix.
pub fn singular_profile(g: &DMatrix<f64>) -> SingularProfile {
    let logs: Vec<f64> = g.singular_values().iter().map(|s| s.ln()).collect();
    SingularProfile::from_logs(&logs)
}

/// Flag of left singular vectors, ordered by decreasing singular value.
pub fn svd_flag(g: &DMatrix<f64>, gap_tolerance: f64) -> Result<FloatFlag> {
    assert!(g.is_square(), "svd_flag needs a square matrix");
    singular_profile(g).check(gap_tolerance)?;
    Ok(FloatFlag::from_frame(&left_singular(g.clone()).1))
}

/// Largest principal angle between `A^k` and `B^k`, maximized over `k`.
pub fn flag_distance(a: &FloatFlag, b: &FloatFlag) -> f64 {
    let d = a.dim();
    assert_eq!(d, b.dim(), "flags of different dimension");
    let mut worst: f64 = 0.0;
    for k in 1..d {
        let ak = a.frame.columns(0, k);
        let bk = b.frame.columns(0, k);
        let residual = ak - bk * (bk.transpose() * ak);
        let sine = residual.svd(false, false).singular_values.max().min(1.0);
        worst = worst.max(sine.asin());
    }
    worst
}

/// Per-coordinate scale `sqrt(binom(m-1, r))` of the interleaved basis.
pub fn orthonormal_weights(spec: &BarbotSpec) -> Vec<f64> {
    let block = |m: usize| (0..m).map(move |r| binomial(m as u64 - 1, r as u64).to_f64().expect("small").sqrt());
    let standard: Vec<f64> = block(spec.d - spec.j).chain(block(spec.j)).collect();
    spec.perm.iter().map(|&p| standard[p - 1]).collect()
}

/// SVD flag and singular profile of the exact matrix `W^{-1} M W`, with
/// `W = diag(weights)`, through exterior powers.
pub fn svd_flag_exact(m: &Matrix, weights: &[f64], gap_tolerance: f64) -> Result<(FloatFlag, SingularProfile)> {
    let d = m.dim();
    assert_eq!(weights.len(), d);
    let (scaled, log_denominator) = clear_denominators(m);
    // logs[k] = ln(σ_1 ··· σ_k) of W^{-1} M W
    let mut logs = vec![0.0];
    let mut subspaces: Vec<DMatrix<f64>> = Vec::with_capacity(d);
    for k in 1..=d {
        let (log_top, plucker) = exterior_top(&scaled, weights, k);
        logs.push(log_top - k as f64 * log_denominator);
        if k < d {
            subspaces.push(subspace_from_plucker(&plucker, d, k));
        }
    }
    let singular_logs: Vec<f64> = logs.windows(2).map(|w| w[1] - w[0]).collect();
    let profile = SingularProfile::from_logs(&singular_logs);
    profile.check(gap_tolerance)?;
    Ok((nested_frame(&subspaces, d), profile))
}

/// Integer matrix `L·M` and `ln L`.
fn clear_denominators(m: &Matrix) -> (Vec<Vec<BigInt>>, f64) {
    let d = m.dim();
    let lcm =
        (0..d).flat_map(|r| (0..d).map(move |c| (r, c))).fold(BigInt::one(), |acc, (r, c)| acc.lcm(m[(r, c)].denom()));
    let scale = Rational::from_integer(lcm.clone());
    let rows = (0..d).map(|r| (0..d).map(|c| (&m[(r, c)] * &scale).to_integer()).collect()).collect();
    (rows, ln_bigint(&lcm))
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 900 {
        return n.to_f64().expect("in range").abs().ln();
    }
    let shift = bits - 64;
    (n.abs() >> shift).to_f64().expect("64 bits").ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln` of the top singular value of the `k`-th exterior power of
/// `W^{-1} A W`, and the matching unit left singular vector indexed by
/// `k`-subsets in lexicographic order.
fn exterior_top(a: &[Vec<BigInt>], weights: &[f64], k: usize) -> (f64, Vec<f64>) {
    let d = a.len();
    let subsets: Vec<Vec<usize>> = (0..d).combinations(k).collect();
    let minors: Vec<Vec<BigInt>> = subsets
        .iter()
        .map(|rows| {
            subsets
                .iter()
                .map(|cols| {
                    det_bareiss(rows.iter().map(|&r| cols.iter().map(|&c| a[r][c].clone()).collect()).collect())
                })
                .collect()
        })
        .collect();
    let largest = minors.iter().flatten().map(|x| x.abs()).max().expect("nonempty");
    if largest.is_zero() {
        return (f64::NEG_INFINITY, vec![0.0; subsets.len()]);
    }
    let weight = |s: &[usize]| s.iter().map(|&i| weights[i]).product::<f64>();
    let n = subsets.len();
    let c = DMatrix::from_fn(n, n, |r, col| {
        let ratio = Ratio::new(minors[r][col].clone(), largest.clone()).to_f64().unwrap_or(0.0);
        ratio * weight(&subsets[col]) / weight(&subsets[r])
    });
    let (values, u) = left_singular(c);
    (ln_bigint(&largest) + values[0].ln(), u.column(0).iter().copied().collect())
}

/// Orthonormal basis (as columns) of the `k`-dimensional subspace with
/// Plücker vector `omega`, read off its contractions with `(k-1)`-subsets.
fn subspace_from_plucker(omega: &[f64], d: usize, k: usize) -> DMatrix<f64> {
    let subsets: Vec<Vec<usize>> = (0..d).combinations(k).collect();
    let position = |s: &[usize]| subsets.binary_search_by(|x| x.as_slice().cmp(s)).expect("k-subset");
    let faces: Vec<Vec<usize>> = (0..d).combinations(k - 1).collect();
    let mut spanning = DMatrix::zeros(d, faces.len());
    for (col, face) in faces.iter().enumerate() {
        for i in 0..d {
            if face.contains(&i) {
                continue;
            }
            let mut s = face.clone();
            let at = s.partition_point(|&x| x < i);
            s.insert(at, i);
            let value = omega[position(&s)];
            spanning[(i, col)] = if at % 2 == 0 { value } else { -value };
        }
    }
    left_singular(spanning).1.columns(0, k).into_owned()
}

/// Orthonormal frame whose first `k` columns span `subspaces[k-1]`.
fn nested_frame(subspaces: &[DMatrix<f64>], d: usize) -> FloatFlag {
    let mut frame = DMatrix::<f64>::zeros(d, d);
    for k in 1..=d {
        let basis = if k < d { subspaces[k - 1].clone() } else { DMatrix::identity(d, d) };
        let previous = frame.columns(0, k - 1).into_owned();
        let residual = &basis - &previous * (previous.transpose() * &basis);
        let direction = left_singular(residual).1.column(0).into_owned();
        frame.set_column(k - 1, &direction);
    }
    FloatFlag::from_frame(&frame)
}

/// `|trace| > 2` after rescaling to determinant 1.
pub fn hyperbolic_normalized(g: &MoebiusElement) -> Result<MoebiusElement> {
    let g = g.normalized()?;
    let two = Rational::from_integer(2.into());
    if g.det() != Rational::one() || g.trace().abs() <= two {
        return Err(Error::NotHyperbolic);
    }
    Ok(g)
}

/// One row of [`singular_ratio_profile`].
#[derive(Clone, Debug, PartialEq)]
pub struct RatioRow {
    pub index: usize,
    pub measured: f64,
    pub predicted: f64,
}

impl RatioRow {
    pub fn relative_error(&self) -> f64 {
        ((self.measured - self.predicted) / self.predicted).abs()
    }
}

/// `σ_1(h)/σ_2(h)` of a 2×2 matrix with determinant ±1, from
/// `r + 1/r = ||h||_F^2`.
fn two_by_two_ratio(h: &Matrix) -> f64 {
    let frob: Rational = (0..2).flat_map(|r| (0..2).map(move |c| (r, c))).map(|(r, c)| &h[(r, c)] * &h[(r, c)]).sum();
    let two = Rational::from_integer(2.into());
    let x = frob.to_f64().expect("finite");
    let disc = ((&frob - &two) * (&frob + &two)).to_f64().expect("finite");
    (x + disc.max(0.0).sqrt()) / 2.0
}

/// Measured `σ_i/σ_{i+1}` of `τ(g^n)` next to the closed-form prediction:
/// `σ_1(g^n)/σ_2(g^n)` for `i < k` or `i > d-k`, its square root otherwise.
pub fn singular_ratio_profile(spec: &BarbotSpec, g: &MoebiusElement, n: u64) -> Result<Vec<RatioRow>> {
    let g = hyperbolic_normalized(g)?;
    let power = g.pow(n);
    let m = barbot_matrix(spec, &power)?;
    let (_, profile) = svd_flag_exact(&m, &orthonormal_weights(spec), 0.0)?;
    let r = two_by_two_ratio(power.matrix());
    let (d, k) = (spec.d, spec.k);
    Ok((1..d)
        .map(|i| RatioRow {
            index: i,
            measured: profile.gaps[i - 1],
            predicted: if i >= k && i <= d - k { r.sqrt() } else { r },
        })
        .collect())
}

/// Attracting eigenline of a hyperbolic element, as a unit vector.
pub fn attracting_line(g: &MoebiusElement) -> Result<(f64, f64)> {
    let g = hyperbolic_normalized(g)?;
    let m = g.matrix();
    let f = |r, c| m[(r, c)].to_f64().expect("finite");
    let (a, b, c, e) = (f(0, 0), f(0, 1), f(1, 0), f(1, 1));
    let tr = a + e;
    let lambda = (tr + tr.signum() * (tr * tr - 4.0).sqrt()) / 2.0;
    let v1 = (b, lambda - a);
    let v2 = (lambda - e, c);
    let (x, y) = if v1.0.hypot(v1.1) >= v2.0.hypot(v2.1) { v1 } else { v2 };
    let norm = x.hypot(y);
    Ok((x / norm, y / norm))
}

fn sym_power_f64(m: [[f64; 2]; 2], d: usize) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(d, d);
    for col in 0..d {
        let mut poly = vec![1.0];
        let times = |constant: f64, linear: f64, poly: &mut Vec<f64>| {
            let mut next = vec![0.0; poly.len() + 1];
            for (i, p) in poly.iter().enumerate() {
                next[i] += p * constant;
                next[i + 1] += p * linear;
            }
            *poly = next;
        };
        for _ in 0..d - 1 - col {
            times(m[0][0], m[1][0], &mut poly);
        }
        for _ in 0..col {
            times(m[0][1], m[1][1], &mut poly);
        }
        for (r, p) in poly.into_iter().enumerate() {
            out[(r, col)] = p;
        }
    }
    out
}

/// Barbot flag at the line through the unit vector `(x, y)`, in the
/// orthonormal interleaved coordinates.
pub fn barbot_float_flag(spec: &BarbotSpec, (x, y): (f64, f64)) -> FloatFlag {
    let rotation = [[x, -y], [y, x]];
    let (d, j) = (spec.d, spec.j);
    let mut standard = DMatrix::zeros(d, d);
    standard.view_mut((0, 0), (d - j, d - j)).copy_from(&sym_power_f64(rotation, d - j));
    standard.view_mut((d - j, d - j), (j, j)).copy_from(&sym_power_f64(rotation, j));
    let block_weights: Vec<f64> = {
        let block = |m: usize| (0..m).map(move |r| binomial(m as u64 - 1, r as u64).to_f64().expect("small").sqrt());
        block(d - j).chain(block(j)).collect()
    };
    let frame = DMatrix::from_fn(d, d, |r, c| {
        let (pr, pc) = (spec.perm[r] - 1, spec.perm[c] - 1);
        standard[(pr, pc)] * block_weights[pc] / block_weights[pr]
    });
    FloatFlag::from_frame(&frame)
}

/// Exact Barbot flag at a rational point, in the orthonormal interleaved
/// coordinates.
pub fn barbot_flag_rescaled(spec: &BarbotSpec, x: &ProjectivePoint) -> FloatFlag {
    let weights = orthonormal_weights(spec);
    let flag = barbot_flag(spec, x);
    let d = spec.d;
    let frame = DMatrix::from_fn(d, d, |r, c| flag.frame()[(r, c)].to_f64().expect("finite") / weights[r]);
    FloatFlag::from_frame(&frame)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergencePoint {
    pub n: u64,
    /// `None` when the singular value gap at this `n` was too small.
    pub distance: Option<f64>,
    pub min_gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceSeries {
    pub points: Vec<ConvergencePoint>,
    /// First `n` whose distance is below [`CONVERGENCE_THRESHOLD`].
    pub first_below: Option<u64>,
}

/// Distance from `svd_flag(τ(g^n))` to the Barbot flag at the attracting
/// line of `g`, for `n = 1..=iters`.
pub fn limit_convergence(spec: &BarbotSpec, g: &MoebiusElement, iters: u64) -> Result<ConvergenceSeries> {
    let g = hyperbolic_normalized(g)?;
    let target = barbot_float_flag(spec, attracting_line(&g)?);
    let weights = orthonormal_weights(spec);
    let mut points = Vec::with_capacity(iters as usize);
    let mut power = MoebiusElement::from_i64(1, 0, 0, 1)?;
    for n in 1..=iters {
        power = power.mul(&g);
        let m = barbot_matrix(spec, &power)?;
        let point = match svd_flag_exact(&m, &weights, DEFAULT_GAP_TOLERANCE) {
            Ok((flag, profile)) => {
                ConvergencePoint { n, distance: Some(flag_distance(&flag, &target)), min_gap: profile.min_gap() }
            }
            Err(Error::SingularGapTooSmall { .. }) => {
                let (_, profile) = svd_flag_exact(&m, &weights, 0.0)?;
                ConvergencePoint { n, distance: None, min_gap: profile.min_gap() }
            }
            Err(e) => return Err(e),
        };
        points.push(point);
    }
    let first_below = points.iter().find(|p| p.distance.is_some_and(|x| x < CONVERGENCE_THRESHOLD)).map(|p| p.n);
    Ok(ConvergenceSeries { points, first_below })
}
