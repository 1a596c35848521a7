//! Complete flags stored as frames, transversality, adapted bases and the
//! unipotent transporter.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{null_space, rank_of_vectors, Matrix, Rational, Vector};

/// A complete flag `F^1 ⊂ … ⊂ F^{d-1}` in `Q^d`, where `F^k` is spanned by
/// the first `k` columns of an invertible frame.
///
/// Equality compares subspaces, not frames.
#[derive(Clone, Debug)]
pub struct Flag {
    frame: Matrix,
}

impl Flag {
    pub fn new(frame: Matrix) -> Result<Self> {
        if frame.det().is_zero() {
            return Err(Error::Singular);
        }
        Ok(Flag { frame })
    }

    /// Flag of the identity frame, `F^k = span(e_1, …, e_k)`.
    pub fn ascending(d: usize) -> Self {
        Flag { frame: Matrix::identity(d) }
    }

    /// Flag of the reversed identity frame, `F^k = span(e_d, …, e_{d-k+1})`.
    pub fn descending(d: usize) -> Self {
        Flag { frame: Matrix::reversal(d) }
    }

    pub fn frame(&self) -> &Matrix {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    /// Spanning vectors of `F^k`.
    pub fn subspace(&self, k: usize) -> Vec<Vector> {
        self.frame.leading_columns(k)
    }

    /// `g·F`.
    pub fn act(&self, g: &Matrix) -> Result<Flag> {
        if g.dim() != self.dim() {
            return Err(Error::DimensionMismatch(g.dim(), self.dim()));
        }
        Flag::new(g * &self.frame)
    }

    /// Whether `v ∈ F^k`.
    pub fn contains(&self, k: usize, v: &[Rational]) -> bool {
        let mut vectors = self.subspace(k);
        vectors.push(v.to_vec());
        rank_of_vectors(&vectors) == k
    }
}

impl PartialEq for Flag {
    fn eq(&self, other: &Flag) -> bool {
        self.dim() == other.dim()
            && (1..self.dim()).all(|k| {
                let mut vectors = self.subspace(k);
                vectors.extend(other.subspace(k));
                rank_of_vectors(&vectors) == k
            })
    }
}

/// `(ascending, descending)` coordinate flags.
pub fn standard_flags(d: usize) -> (Flag, Flag) {
    (Flag::ascending(d), Flag::descending(d))
}

/// `F^k + G^{d-k} = Q^d` for every `k` in `1..d`.
pub fn transverse(f: &Flag, g: &Flag) -> Result<bool> {
    let d = f.dim();
    if g.dim() != d {
        return Err(Error::DimensionMismatch(d, g.dim()));
    }
    Ok((1..d).all(|k| {
        let mut columns = f.subspace(k);
        columns.extend(g.subspace(d - k));
        !Matrix::from_columns(&columns).expect("d columns of length d").det().is_zero()
    }))
}

/// Basis whose `k`-th column spans `F^k ∩ H^{d-k+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptedBasis {
    matrix: Matrix,
}

impl AdaptedBasis {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }
}

/// Adapted basis of a transverse pair `(F, H)`.
///
/// Column `k` is the unique vector of `F^k ∩ H^{d-k+1}` whose coordinate
/// along the `k`-th frame vector of `F` equals 1.
pub fn adapted_basis(f: &Flag, h: &Flag) -> Result<AdaptedBasis> {
    if !transverse(f, h)? {
        return Err(Error::NotTransverse(1, 2));
    }
    let d = f.dim();
    let mut columns = Vec::with_capacity(d);
    for k in 1..=d {
        // Unknowns (a_1..a_k, b_1..b_{d-k+1}) with sum a_i f_i - sum b_i h_i = 0.
        let f_cols = f.subspace(k);
        let h_cols = h.subspace(d - k + 1);
        let ncols = k + h_cols.len();
        let rows: Vec<Vector> = (0..d)
            .map(|r| f_cols.iter().map(|c| c[r].clone()).chain(h_cols.iter().map(|c| -c[r].clone())).collect())
            .collect();
        let kernel = null_space(&rows, ncols);
        debug_assert_eq!(kernel.len(), 1, "transverse flags meet in a line");
        let z = &kernel[0];
        let lead = z[k - 1].clone();
        debug_assert!(!lead.is_zero());
        let mut v = vec![Rational::zero(); d];
        for (a, col) in z[..k].iter().zip(&f_cols) {
            let coeff = a / &lead;
            for (vi, ci) in v.iter_mut().zip(col) {
                *vi += &coeff * ci;
            }
        }
        columns.push(v);
    }
    Ok(AdaptedBasis { matrix: Matrix::from_columns(&columns)? })
}

/// The unipotent element fixing `F` and carrying `H` to `G`, written in
/// the adapted basis `P` of `(F, H)`.
///
/// In these coordinates `F` is the ascending and `H` the descending flag,
/// so the result is upper unipotent; its ambient form is `P·ũ·P^{-1}`.
pub fn transporter(f: &Flag, h: &Flag, g: &Flag) -> Result<Matrix> {
    if h.dim() != f.dim() || g.dim() != f.dim() {
        return Err(Error::DimensionMismatch(f.dim(), if h.dim() != f.dim() { h.dim() } else { g.dim() }));
    }
    if !transverse(f, h)? {
        return Err(Error::NotTransverse(1, 2));
    }
    if !transverse(f, g)? {
        return Err(Error::NotTransverse(1, 3));
    }
    let p = adapted_basis(f, h)?.into_matrix();
    let p_inv = p.inverse()?;
    Ok(transporter_in_coordinates(&g.act(&p_inv)?))
}

/// Upper unipotent `ũ` with `ũ·descending = g`, for `g` transverse to the
/// ascending flag.
///
/// The column `d-m+1` of `ũ` is the vector of `g^m ∩ span(e_1..e_{d-m+1})`
/// normalized to have coordinate 1 at `e_{d-m+1}`.
pub(crate) fn transporter_in_coordinates(g: &Flag) -> Matrix {
    let d = g.dim();
    adapted_basis(&Flag::ascending(d), g).expect("caller checked transversality").into_matrix()
}

/// Ambient form `P·ũ·P^{-1}` of the transporter.
pub fn transporter_ambient(f: &Flag, h: &Flag, g: &Flag) -> Result<Matrix> {
    let u = transporter(f, h, g)?;
    let p = adapted_basis(f, h)?.into_matrix();
    Ok(&(&p * &u) * &p.inverse()?)
}

pub(crate) fn unit_vector(d: usize, i: usize) -> Vector {
    (0..d).map(|r| if r == i { Rational::one() } else { Rational::zero() }).collect()
}
