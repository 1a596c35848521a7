//! Positivity of triples and `n`-tuples of complete flags.
//!
//! A tuple `(F_1, …, F_n)` is positive when, in some basis `B` with
//! `F_1 = ascending` and `F_n = descending`, every middle flag has the form
//! `F_j = (u_{n-1} ··· u_j)·F_n` with totally positive unipotent `u_i`.
//! The basis is fixed up to a diagonal sign change by the adapted basis of
//! `(F_1, F_n)`; [`sign_normalize`] resolves the sign.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::flags::{adapted_basis, transporter_in_coordinates, transverse, Flag};
use crate::linalg::{sign, Matrix};
use crate::positivity::{is_upper_unipotent, tp_staged, Method, PositivityVerdict, Status};
use crate::reps::ProjectivePoint;

/// Conjugates `u` by the diagonal sign matrix `D` (with `D_11 = 1`) that
/// makes every superdiagonal entry positive. Returns `(D, D·u·D^{-1})`.
pub fn sign_normalize(u: &Matrix) -> Result<(Matrix, Matrix)> {
    if !is_upper_unipotent(u) {
        return Err(Error::NotUnipotentUpperTriangular);
    }
    let (signs, zero) = superdiagonal_signs(u);
    if let Some(i) = zero {
        return Err(Error::ZeroSuperdiagonal(i));
    }
    let d = sign_matrix(&signs);
    let normalized = conjugate_by_signs(u, &signs);
    Ok((d, normalized))
}

/// Signs making the superdiagonal of `u` positive, treating zero entries
/// as positive; also returns the first zero position (1-based row).
fn superdiagonal_signs(u: &Matrix) -> (Vec<i8>, Option<usize>) {
    let mut signs = vec![1i8];
    let mut zero = None;
    for i in 0..u.dim() - 1 {
        let s = match sign(&u[(i, i + 1)]) {
            0 => {
                zero.get_or_insert(i + 1);
                1
            }
            s => s,
        };
        signs.push(signs[i] * s);
    }
    (signs, zero)
}

fn sign_matrix(signs: &[i8]) -> Matrix {
    Matrix::diagonal(&signs.iter().map(|&s| crate::linalg::rat(s as i64)).collect::<Vec<_>>())
}

fn conjugate_by_signs(u: &Matrix, signs: &[i8]) -> Matrix {
    Matrix::from_fn(u.dim(), |r, c| if signs[r] == signs[c] { u[(r, c)].clone() } else { -u[(r, c)].clone() })
}

/// Evidence behind a tuple verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct TupleCertificate {
    /// The basis `P·D`: adapted basis of `(F_1, F_n)` with signs applied.
    pub basis: Matrix,
    /// Diagonal of `D`.
    pub signs: Vec<i8>,
    /// Sign-normalized factors `u_2, …, u_{n-1}`.
    pub factors: Vec<Matrix>,
    pub verdicts: Vec<PositivityVerdict>,
    /// Non-transverse pairs `(i, j)`, 1-based, among flags other than `F_1`.
    pub nontransverse_pairs: Vec<(usize, usize)>,
}

impl TupleCertificate {
    /// Whether the recorded basis and factors reproduce `flags` exactly:
    /// `F_1 = B·ascending`, `F_n = B·descending` and
    /// `F_j = B·(u_{n-1} ··· u_j)·descending`.
    pub fn replay(&self, flags: &[Flag]) -> bool {
        let n = flags.len();
        if n != self.factors.len() + 2 {
            return false;
        }
        let d = self.basis.dim();
        let place = |m: &Matrix| Flag::descending(d).act(&(&self.basis * m)).ok();
        if Flag::ascending(d).act(&self.basis).ok().as_ref() != Some(&flags[0]) {
            return false;
        }
        let mut acc = Matrix::identity(d);
        if place(&acc).as_ref() != Some(&flags[n - 1]) {
            return false;
        }
        for j in (1..n - 1).rev() {
            acc = &acc * &self.factors[j - 1];
            if place(&acc).as_ref() != Some(&flags[j]) {
                return false;
            }
        }
        true
    }
}

/// Positivity of `(F_1, F_2, F_3)`.
///
/// `F_1` must be transverse to both other flags. A failure of
/// `transverse(F_2, F_3)` is recorded in the certificate; such a triple is
/// never positive.
pub fn is_positive_triple(f1: &Flag, f2: &Flag, f3: &Flag) -> Result<(PositivityVerdict, TupleCertificate)> {
    is_positive_tuple_chain(&[f1.clone(), f2.clone(), f3.clone()])
}

/// Positivity of an `n`-tuple via the chain factorization
/// `F_j = (u_{n-1} ··· u_j)·F_n`.
///
/// With `c_j` the transporter fixing `F_1` and carrying `F_n` to `F_j`,
/// the factors are `u_j = c_{j+1}^{-1}·c_j` (`c_n = I`). The sign matrix is
/// read off `u_{n-1}` and applied to every factor.
pub fn is_positive_tuple_chain(flags: &[Flag]) -> Result<(PositivityVerdict, TupleCertificate)> {
    let n = flags.len();
    if n < 3 {
        return Err(Error::BadParameters(format!("a tuple needs at least 3 flags, got {n}")));
    }
    let d = flags[0].dim();
    if let Some(f) = flags.iter().find(|f| f.dim() != d) {
        return Err(Error::DimensionMismatch(d, f.dim()));
    }
    let mut nontransverse_pairs = Vec::new();
    for (i, j) in (0..n).tuple_combinations() {
        if !transverse(&flags[i], &flags[j])? {
            if i == 0 {
                return Err(Error::NotTransverse(1, j + 1));
            }
            nontransverse_pairs.push((i + 1, j + 1));
        }
    }

    let p = adapted_basis(&flags[0], &flags[n - 1])?.into_matrix();
    let p_inv = p.inverse()?;
    let mut cumulative = Vec::with_capacity(n - 2);
    for f in &flags[1..n - 1] {
        cumulative.push(transporter_in_coordinates(&f.act(&p_inv)?));
    }
    cumulative.push(Matrix::identity(d));
    let raw: Vec<Matrix> =
        (0..n - 2).map(|i| &cumulative[i + 1].inverse().expect("unipotent") * &cumulative[i]).collect();

    let (signs, _) = superdiagonal_signs(&raw[n - 3]);
    let factors: Vec<Matrix> = raw.iter().map(|u| conjugate_by_signs(u, &signs)).collect();
    let verdicts = factors.iter().map(tp_staged).collect::<Result<Vec<_>>>()?;
    let verdict = combine(&verdicts);
    let basis = &p * &sign_matrix(&signs);
    Ok((verdict, TupleCertificate { basis, signs, factors, verdicts, nontransverse_pairs }))
}

/// First non-positive verdict, or a positive one; evaluations are summed.
fn combine(verdicts: &[PositivityVerdict]) -> PositivityVerdict {
    let evaluations = verdicts.iter().map(|v| v.evaluations).sum();
    match verdicts.iter().find(|v| !v.is_positive()) {
        Some(v) => PositivityVerdict { evaluations, ..v.clone() },
        None => PositivityVerdict { status: Status::Positive, witness: None, method: Method::Staged, evaluations },
    }
}

/// Positivity of an `n`-tuple by checking every ordered 4-element
/// subtuple with the chain method (a triple is checked directly).
///
/// Every pair must be transverse; the first failing pair is reported.
pub fn is_positive_tuple_quad(flags: &[Flag]) -> Result<PositivityVerdict> {
    let n = flags.len();
    if n < 4 {
        return is_positive_tuple_chain(flags).and_then(|(v, cert)| match cert.nontransverse_pairs.first() {
            Some(&(i, j)) => Err(Error::NotTransverse(i, j)),
            None => Ok(v),
        });
    }
    for (i, j) in (0..n).tuple_combinations() {
        if !transverse(&flags[i], &flags[j])? {
            return Err(Error::NotTransverse(i + 1, j + 1));
        }
    }
    let mut evaluations = 0;
    for idx in (0..n).combinations(4) {
        let sub: Vec<Flag> = idx.iter().map(|&i| flags[i].clone()).collect();
        let (v, _) = is_positive_tuple_chain(&sub)?;
        evaluations += v.evaluations;
        if !v.is_positive() {
            return Ok(PositivityVerdict { evaluations, ..v });
        }
    }
    Ok(PositivityVerdict { status: Status::Positive, witness: None, method: Method::Staged, evaluations })
}

/// Flags sampled at distinct points of the projective line, kept in
/// cyclic (angle) order.
#[derive(Clone, Debug)]
pub struct FlagMapSample {
    points: Vec<ProjectivePoint>,
    flags: Vec<Flag>,
}

impl FlagMapSample {
    /// Sorts the pairs by cyclic order of the points.
    pub fn new(points: Vec<ProjectivePoint>, flags: Vec<Flag>) -> Result<Self> {
        if points.len() != flags.len() {
            return Err(Error::PreconditionViolated(format!("{} points but {} flags", points.len(), flags.len())));
        }
        if let Some(f) = flags.iter().find(|f| f.dim() != flags[0].dim()) {
            return Err(Error::DimensionMismatch(flags[0].dim(), f.dim()));
        }
        let mut pairs: Vec<(ProjectivePoint, Flag)> = points.into_iter().zip(flags).collect();
        pairs.sort_by_key(|a| a.0);
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::PreconditionViolated(format!("repeated point {}", w[0].0)));
        }
        let (points, flags) = pairs.into_iter().unzip();
        Ok(FlagMapSample { points, flags })
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SampleOutcome {
    Consistent,
    VacuouslyConsistent,
    Inconsistent,
}

impl fmt::Display for SampleOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SampleOutcome::Consistent => "consistent",
            SampleOutcome::VacuouslyConsistent => "vacuously consistent, no positive triple",
            SampleOutcome::Inconsistent => "inconsistent",
        })
    }
}

/// Result of [`check_sampled_positivity`]. Indices are 1-based positions
/// in the cyclically ordered sample.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleReport {
    pub outcome: SampleOutcome,
    pub triples_checked: usize,
    pub positive_triples: usize,
    pub first_positive_triple: Option<[usize; 3]>,
    pub quadruples_checked: usize,
    pub counterexample: Option<[usize; 4]>,
}

/// Finite-sample check that one positive triple forces every cyclically
/// ordered quadruple to be positive.
pub fn check_sampled_positivity(sample: &FlagMapSample) -> Result<SampleReport> {
    let flags = sample.flags();
    let n = flags.len();
    for (i, j) in (0..n).tuple_combinations() {
        if !transverse(&flags[i], &flags[j])? {
            return Err(Error::NotTransverse(i + 1, j + 1));
        }
    }
    let mut triples_checked = 0;
    let mut positive_triples = 0;
    let mut first_positive_triple = None;
    for (i, j, k) in (0..n).tuple_combinations() {
        triples_checked += 1;
        let (v, _) = is_positive_triple(&flags[i], &flags[j], &flags[k])?;
        if v.is_positive() {
            positive_triples += 1;
            first_positive_triple.get_or_insert([i + 1, j + 1, k + 1]);
        }
    }
    let mut report = SampleReport {
        outcome: SampleOutcome::VacuouslyConsistent,
        triples_checked,
        positive_triples,
        first_positive_triple,
        quadruples_checked: 0,
        counterexample: None,
    };
    if first_positive_triple.is_none() {
        return Ok(report);
    }
    report.outcome = SampleOutcome::Consistent;
    for (a, b, c, e) in (0..n).tuple_combinations() {
        report.quadruples_checked += 1;
        let quad = [flags[a].clone(), flags[b].clone(), flags[c].clone(), flags[e].clone()];
        if !is_positive_tuple_chain(&quad)?.0.is_positive() {
            report.outcome = SampleOutcome::Inconsistent;
            report.counterexample = Some([a + 1, b + 1, c + 1, e + 1]);
            break;
        }
    }
    Ok(report)
}
