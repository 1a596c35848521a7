//! Symmetric powers of 2×2 matrices, Pascal matrices, the Veronese flag
//! curve and the Barbot representations `ι_{d-j} ⊕ ι_j`.
//!
//! `sym_power(g, d)` is written in the monomial basis
//! `(e_1^{d-1}, e_1^{d-2}e_2, …, e_2^{d-1})`, so upper-triangular `g` map to
//! upper-triangular matrices and `[[1,1],[0,1]]` maps to the Pascal matrix.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::flags::Flag;
use crate::linalg::{binomial, rat, Matrix, Rational};

/// A point of the projective line with coprime integer coordinates,
/// stored with `q > 0`, or `q = 0` and `p = 1`.
///
/// Points are ordered by the angle of `(p, q)` in `[0, π)`, i.e.
/// counterclockwise starting from `[1:0]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ProjectivePoint {
    p: i64,
    q: i64,
}

impl ProjectivePoint {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(Error::BadParameters("[0:0] is not a projective point".into()));
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Ok(ProjectivePoint { p, q })
    }

    /// Point spanned by a nonzero rational vector.
    pub fn from_rationals(x: &Rational, y: &Rational) -> Result<Self> {
        let l = x.denom().lcm(y.denom());
        let px = (x * Rational::from_integer(l.clone())).to_integer();
        let py = (y * Rational::from_integer(l)).to_integer();
        let g = px.gcd(&py);
        if g.is_zero() {
            return Err(Error::BadParameters("zero vector has no projective point".into()));
        }
        let to_i64 = |v: BigInt| i64::try_from(v).map_err(|_| Error::BadParameters("coordinate overflows i64".into()));
        ProjectivePoint::new(to_i64(px / &g)?, to_i64(py / &g)?)
    }

    pub fn coords(&self) -> (i64, i64) {
        (self.p, self.q)
    }

    /// An integer matrix of determinant 1 whose first column is `(p, q)`,
    /// so it carries `[e_1]` to this point.
    pub fn lift(&self) -> MoebiusElement {
        // p*s - q*r = 1
        let egcd = self.p.extended_gcd(&self.q);
        debug_assert_eq!(egcd.gcd, 1);
        let (s, r) = (egcd.x, -egcd.y);
        let m = Matrix::from_i64(&[&[self.p, r], &[self.q, s]]);
        MoebiusElement::new(m).expect("determinant one")
    }

    /// `g·x` for a 2×2 matrix `g`.
    pub fn transformed(&self, g: &MoebiusElement) -> Result<Self> {
        let v = g.matrix().apply(&[rat(self.p), rat(self.q)]);
        ProjectivePoint::from_rationals(&v[0], &v[1])
    }
}

impl Ord for ProjectivePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        // Both representatives lie in the closed upper half plane with angle in [0, π).
        let cross = self.p as i128 * other.q as i128 - self.q as i128 * other.p as i128;
        0.cmp(&cross)
    }
}

impl PartialOrd for ProjectivePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}]", self.p, self.q)
    }
}

/// An invertible 2×2 rational matrix, standing for its class in `PGL_2`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MoebiusElement {
    m: Matrix,
}

impl MoebiusElement {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.dim() != 2 {
            return Err(Error::DimensionMismatch(m.dim(), 2));
        }
        if m.det().is_zero() {
            return Err(Error::Singular);
        }
        Ok(MoebiusElement { m })
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        MoebiusElement::new(Matrix::from_i64(&[&[a, b], &[c, d]]))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn det(&self) -> Rational {
        self.m.det()
    }

    pub fn trace(&self) -> Rational {
        &self.m[(0, 0)] + &self.m[(1, 1)]
    }

    pub fn inverse(&self) -> Self {
        MoebiusElement { m: self.m.inverse().expect("invertible by construction") }
    }

    pub fn pow(&self, n: u64) -> Self {
        MoebiusElement { m: self.m.pow(n) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        MoebiusElement { m: &self.m * &other.m }
    }

    /// The representative `g / c` with `c > 0` and `det = ±1`. Requires
    /// `|det g|` to be the square of a rational.
    pub fn normalized(&self) -> Result<Self> {
        let det = self.det();
        let abs = det.abs();
        let root = |n: &BigInt| {
            let r = n.sqrt();
            (&r * &r == *n).then_some(r)
        };
        match (root(abs.numer()), root(abs.denom())) {
            (Some(a), Some(b)) => {
                let c = Rational::new(a, b);
                Ok(MoebiusElement { m: self.m.scale(&c.recip()) })
            }
            _ => Err(Error::NotNormalizable(abs.to_string())),
        }
    }
}

/// Matrix of `g` acting on `Sym^{d-1}(Q^2)` in the monomial basis.
pub fn sym_power(g: &MoebiusElement, d: usize) -> Matrix {
    assert!(d >= 1, "sym_power needs d >= 1");
    let m = g.matrix();
    // g e_1 = a e_1 + c e_2, g e_2 = b e_1 + e e_2
    let (a, b, c, e) = (&m[(0, 0)], &m[(0, 1)], &m[(1, 0)], &m[(1, 1)]);
    let mut columns = Vec::with_capacity(d);
    for col in 0..d {
        // (a + c X)^{d-1-col} (b + e X)^col; the coefficient of X^r is the e_2^r entry
        let mut poly = vec![Rational::one()];
        for _ in 0..d - 1 - col {
            poly = poly_mul_linear(&poly, a, c);
        }
        for _ in 0..col {
            poly = poly_mul_linear(&poly, b, e);
        }
        columns.push(poly);
    }
    Matrix::from_columns(&columns).expect("d columns of length d")
}

fn poly_mul_linear(poly: &[Rational], constant: &Rational, linear: &Rational) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); poly.len() + 1];
    for (i, coeff) in poly.iter().enumerate() {
        out[i] += coeff * constant;
        out[i + 1] += coeff * linear;
    }
    out
}

/// Upper-triangular Pascal matrix, entry `(i, j) = binom(j-1, i-1)`.
pub fn pascal(d: usize) -> Matrix {
    assert!(d >= 1, "pascal needs d >= 1");
    Matrix::from_fn(d, |r, c| Rational::from_integer(binomial(c as u64, r as u64)))
}

/// The parabolic `[[1,1],[0,1]]`.
pub fn parabolic() -> MoebiusElement {
    MoebiusElement::from_i64(1, 1, 0, 1).expect("invertible")
}

/// Image of `x` under the Veronese curve: the flag of `ι_d(g)` for any
/// `g` with `g·[e_1] = x`.
pub fn veronese_flag(x: &ProjectivePoint, d: usize) -> Flag {
    assert!(d >= 2, "veronese_flag needs d >= 2");
    Flag::new(sym_power(&x.lift(), d)).expect("lift has determinant one")
}

/// Parameters of `τ_{d,j} = ι_{d-j} ⊕ ι_j` and its interleaved basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BarbotSpec {
    pub d: usize,
    pub j: usize,
    pub k: usize,
    /// Standard-basis labels of the interleaved basis, in order.
    pub perm: Vec<usize>,
}

/// Builds the spec for odd `d >= 3` and `1 <= j <= (d-1)/2`.
///
/// With `f_i = e_i` (`i <= d-j`), `f'_i = e_{d-j+i}` and `k = (d-2j+1)/2`
/// the basis is
/// `(f_1, …, f_k, f'_1, f_{k+1}, f'_2, f_{k+2}, …, f'_j, f_{k+j}, f_{k+j+1}, …, f_{d-j})`.
pub fn barbot_spec(d: usize, j: usize) -> Result<BarbotSpec> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::BadParameters(format!("d = {d} must be odd and at least 3")));
    }
    if j < 1 || j > (d - 1) / 2 {
        return Err(Error::BadParameters(format!("j = {j} must lie in [1, {}]", (d - 1) / 2)));
    }
    let k = (d - 2 * j).div_ceil(2);
    let f = |i: usize| i;
    let f_prime = |i: usize| d - j + i;
    let mut perm: Vec<usize> = (1..=k).map(f).collect();
    for i in 1..=j {
        perm.push(f_prime(i));
        perm.push(f(k + i));
    }
    perm.extend((k + j + 1..=d - j).map(f));
    debug_assert_eq!(perm.len(), d);
    Ok(BarbotSpec { d, j, k, perm })
}

impl BarbotSpec {
    /// Permutation matrix whose columns are the interleaved basis vectors.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::permutation(&self.perm).expect("valid permutation")
    }

    /// `ι_{d-j}(g) ⊕ ι_j(g)` in the standard basis, without normalization.
    pub fn block_matrix(&self, g: &MoebiusElement) -> Matrix {
        Matrix::block_diagonal(&sym_power(g, self.d - self.j), &sym_power(g, self.j))
    }
}

/// `τ_{d,j}(g)` written in the interleaved basis.
///
/// `g` is first rescaled to determinant ±1 (see
/// [`MoebiusElement::normalized`]); the two blocks only define a
/// projective representation for such representatives.
pub fn barbot_matrix(spec: &BarbotSpec, g: &MoebiusElement) -> Result<Matrix> {
    let g = g.normalized()?;
    let basis = spec.basis_matrix();
    Ok(&(&basis.transpose() * &spec.block_matrix(&g)) * &basis)
}

/// `ξ_{d,j}(x)` in interleaved-basis coordinates. `[1:0]` maps to the
/// ascending flag `F_+` and `[0:1]` to the descending flag `F_-`.
pub fn barbot_flag(spec: &BarbotSpec, x: &ProjectivePoint) -> Flag {
    let m = barbot_matrix(spec, &x.lift()).expect("lift has determinant one");
    Flag::new(m).expect("invertible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flags::{standard_flags, transverse};
    use crate::linalg::frac;
    use crate::positivity::{tp_staged, Status};

    fn point(p: i64, q: i64) -> ProjectivePoint {
        ProjectivePoint::new(p, q).unwrap()
    }

    #[test]
    fn point_canonical_form_and_order() {
        assert_eq!(point(-2, -4).coords(), (1, 2));
        assert_eq!(point(-3, 0).coords(), (1, 0));
        assert_eq!(point(3, -6), point(-1, 2));
        assert!(ProjectivePoint::new(0, 0).is_err());
        let mut pts = vec![point(-1, 1), point(0, 1), point(1, 0), point(1, 1), point(-5, 1), point(5, 1)];
        pts.sort();
        assert_eq!(pts, vec![point(1, 0), point(5, 1), point(1, 1), point(0, 1), point(-1, 1), point(-5, 1)]);
        assert_eq!(ProjectivePoint::from_rationals(&frac(1, 2), &frac(-3, 4)).unwrap(), point(-2, 3));
    }

    #[test]
    fn lift_sends_e1_to_point() {
        for (p, q) in [(1, 0), (0, 1), (3, 5), (-7, 2), (4, 9)] {
            let x = point(p, q);
            let g = x.lift();
            assert_eq!(g.det(), rat(1));
            assert_eq!(point(1, 0).transformed(&g).unwrap(), x);
        }
    }

    #[test]
    fn sym_power_examples() {
        let g = MoebiusElement::from_i64(2, -3, 5, 7).unwrap();
        assert_eq!(sym_power(&g, 2), *g.matrix());
        let swap = MoebiusElement::from_i64(0, 1, 1, 0).unwrap();
        assert_eq!(sym_power(&swap, 3), Matrix::from_i64(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]));
        let s = frac(3, 2);
        let diag = MoebiusElement::new(Matrix::diagonal(&[s.clone(), s.recip()])).unwrap();
        assert_eq!(sym_power(&diag, 3), Matrix::diagonal(&[&s * &s, rat(1), (&s * &s).recip()]));
        assert_eq!(sym_power(&g, 1), Matrix::identity(1));
    }

    #[test]
    fn pascal_examples() {
        assert_eq!(pascal(3), Matrix::from_i64(&[&[1, 1, 1], &[0, 1, 2], &[0, 0, 1]]));
        assert_eq!(pascal(1), Matrix::identity(1));
        for d in 1..=10 {
            assert_eq!(pascal(d), sym_power(&parabolic(), d));
        }
        for d in 2..=8 {
            assert_eq!(tp_staged(&pascal(d)).unwrap().status, Status::Positive);
        }
    }

    #[test]
    fn veronese_examples() {
        let (asc, desc) = standard_flags(4);
        assert_eq!(veronese_flag(&point(1, 0), 4), asc);
        assert_eq!(veronese_flag(&point(0, 1), 4), desc);
        assert!(transverse(&veronese_flag(&point(1, 2), 4), &veronese_flag(&point(-3, 1), 4)).unwrap());
    }

    #[test]
    fn barbot_spec_examples() {
        let s = barbot_spec(3, 1).unwrap();
        assert_eq!((s.k, s.perm.clone()), (1, vec![1, 3, 2]));
        let s = barbot_spec(5, 1).unwrap();
        assert_eq!((s.k, s.perm.clone()), (2, vec![1, 2, 5, 3, 4]));
        let s = barbot_spec(5, 2).unwrap();
        assert_eq!((s.k, s.perm.clone()), (1, vec![1, 4, 2, 5, 3]));
        let s = barbot_spec(7, 3).unwrap();
        assert_eq!((s.k, s.perm.clone()), (1, vec![1, 5, 2, 6, 3, 7, 4]));
        assert!(barbot_spec(4, 1).is_err());
        assert!(barbot_spec(1, 1).is_err());
        assert!(barbot_spec(5, 3).is_err());
        assert!(barbot_spec(5, 0).is_err());
    }

    #[test]
    fn barbot_matrix_examples() {
        let spec = barbot_spec(5, 1).unwrap();
        let id = MoebiusElement::from_i64(1, 0, 0, 1).unwrap();
        assert_eq!(barbot_matrix(&spec, &id).unwrap(), Matrix::identity(5));
        let u = barbot_matrix(&spec, &parabolic()).unwrap();
        assert!(u.is_upper_unipotent());
        assert_eq!(u.jordan_block_sizes().unwrap(), vec![4, 1]);
        let g = MoebiusElement::from_i64(2, 1, 1, 1).unwrap();
        let h = MoebiusElement::from_i64(1, -2, 3, -5).unwrap();
        assert_eq!(
            barbot_matrix(&spec, &g.mul(&h)).unwrap(),
            &barbot_matrix(&spec, &g).unwrap() * &barbot_matrix(&spec, &h).unwrap()
        );
    }

    #[test]
    fn normalization() {
        let g = MoebiusElement::from_i64(2, 0, 0, 8).unwrap();
        assert_eq!(g.normalized().unwrap().det(), rat(1));
        let g = MoebiusElement::from_i64(0, 3, 3, 0).unwrap();
        assert_eq!(g.normalized().unwrap().det(), rat(-1));
        let g = MoebiusElement::from_i64(1, 1, -1, 1).unwrap();
        assert!(matches!(g.normalized(), Err(Error::NotNormalizable(_))));
        assert!(MoebiusElement::from_i64(1, 2, 2, 4).is_err());
    }

    #[test]
    fn barbot_flag_endpoints() {
        for (d, j) in [(3, 1), (5, 1), (5, 2), (7, 3)] {
            let spec = barbot_spec(d, j).unwrap();
            let (plus, minus) = standard_flags(d);
            assert_eq!(barbot_flag(&spec, &point(1, 0)), plus);
            assert_eq!(barbot_flag(&spec, &point(0, 1)), minus);
        }
    }

    #[test]
    fn parabolic_is_a_single_block() {
        for d in 1..=8 {
            assert_eq!(sym_power(&parabolic(), d).jordan_block_sizes().unwrap(), vec![d]);
        }
    }

    #[test]
    fn barbot_flags_are_transverse() {
        use crate::samples::random_points;
        for (d, j) in [(3, 1), (5, 1), (5, 2), (7, 3)] {
            let spec = barbot_spec(d, j).unwrap();
            for seed in 0..50 {
                let pts = random_points(2, 7, seed);
                assert!(transverse(&barbot_flag(&spec, &pts[0]), &barbot_flag(&spec, &pts[1])).unwrap());
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn element() -> impl Strategy<Value = MoebiusElement> {
            (-4i64..=4, -4i64..=4, -4i64..=4, -4i64..=4)
                .prop_filter("invertible", |(a, b, c, d)| a * d - b * c != 0)
                .prop_map(|(a, b, c, d)| MoebiusElement::from_i64(a, b, c, d).unwrap())
        }

        fn sl2() -> impl Strategy<Value = MoebiusElement> {
            (-6i64..=6, -6i64..=6).prop_filter("not both zero", |(p, q)| (*p, *q) != (0, 0)).prop_flat_map(|(p, q)| {
                let x = ProjectivePoint::new(p, q).unwrap();
                (-3i64..=3).prop_map(move |t| x.lift().mul(&MoebiusElement::from_i64(1, t, 0, 1).unwrap()))
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn sym_power_is_multiplicative(g in element(), h in element(), d in 1usize..=5) {
                prop_assert_eq!(sym_power(&g.mul(&h), d), &sym_power(&g, d) * &sym_power(&h, d));
                prop_assert_eq!(sym_power(&g.inverse(), d), sym_power(&g, d).inverse().unwrap());
            }

            #[test]
            fn sym_power_preserves_total_positivity(n in 1i64..=20, m in 1i64..=5, d in 2usize..=6) {
                let t = frac(n, m);
                let g = MoebiusElement::new(Matrix::from_rows(vec![vec![rat(1), t], vec![rat(0), rat(1)]]).unwrap()).unwrap();
                prop_assert_eq!(tp_staged(&sym_power(&g, d)).unwrap().status, Status::Positive);
            }

            #[test]
            fn barbot_flag_is_equivariant(g in sl2(), p in -5i64..=5, q in 0i64..=5, which in 0usize..4) {
                prop_assume!((p, q) != (0, 0));
                let (d, j) = [(3, 1), (5, 1), (5, 2), (7, 3)][which];
                let spec = barbot_spec(d, j).unwrap();
                let x = ProjectivePoint::new(p, q).unwrap();
                let moved = barbot_flag(&spec, &x.transformed(&g).unwrap());
                let expected = barbot_flag(&spec, &x).act(&barbot_matrix(&spec, &g).unwrap()).unwrap();
                prop_assert_eq!(moved, expected);
            }

            #[test]
            fn barbot_matrix_is_multiplicative(g in sl2(), h in sl2()) {
                let spec = barbot_spec(5, 2).unwrap();
                prop_assert_eq!(
                    barbot_matrix(&spec, &g.mul(&h)).unwrap(),
                    &barbot_matrix(&spec, &g).unwrap() * &barbot_matrix(&spec, &h).unwrap()
                );
            }
        }
    }
}
