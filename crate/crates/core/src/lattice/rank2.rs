use super::{BasisId, GramMatrix, Matrix};
use crate::error::{Error, Result};
use crate::scalar::{to_int, Scalar};

/// Even hyperbolic lattice with Gram `[[2d, a], [a, 2b]]` on the basis `F1, F2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rank2Lattice<T> {
    pub d: T,
    pub a: T,
    pub b: T,
}

impl<T: Scalar> Rank2Lattice<T> {
    pub fn gram(&self) -> GramMatrix<T> {
        let two = T::one() + T::one();
        let m = Matrix::from_rows(vec![
            vec![two.clone() * self.d.clone(), self.a.clone()],
            vec![self.a.clone(), two * self.b.clone()],
        ])
        .expect("2x2");
        GramMatrix::new(BasisId::Free(2), m).expect("symmetric by construction")
    }

    /// `4bd - a^2`, negative for every valid lattice.
    pub fn determinant(&self) -> T {
        let four = <T as Scalar>::from_i64(4);
        four * self.b.clone() * self.d.clone() - self.a.clone() * self.a.clone()
    }

    /// The determinant is even exactly when `a` is.
    pub fn has_even_determinant(&self) -> bool {
        self.a.is_even()
    }

    pub fn pair(&self, x: &[T], y: &[T]) -> Result<T> {
        self.gram().pair(x, y)
    }
}

/// Validates `(d, a, b)` as a rank-2 lattice of signature `(1, 1)`.
pub fn validate_rank2<T: Scalar>(d: T, a: T, b: T) -> Result<Rank2Lattice<T>> {
    let lat = Rank2Lattice { d, a, b };
    let det = lat.determinant();
    if !det.is_negative() {
        return Err(Error::NotHyperbolic(to_int(&det)));
    }
    if !lat.d.is_positive() {
        return Err(Error::NoPositiveClass(to_int(&lat.d)));
    }
    Ok(lat)
}

/// Result of [`reduce_rank2_basis`]: `change^T * input * change == gram`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rank2Reduction<T> {
    pub gram: Matrix<T>,
    /// Columns are the new basis vectors in the old coordinates.
    pub change: Matrix<T>,
}

impl<T: Scalar> Rank2Reduction<T> {
    /// `(F1^2, F1.F2, F2^2)` of the reduced basis.
    pub fn entries(&self) -> (T, T, T) {
        (self.gram[(0, 0)].clone(), self.gram[(0, 1)].clone(), self.gram[(1, 1)].clone())
    }
}

/// Moves an indefinite even binary form to a basis with
/// `F1^2 >= 0`, `F1.F2 >= 0` and `F2^2 < 0`.
///
/// Uses sign flips, swaps and `F <- F -+ F'`. While both diagonal entries are
/// non-negative the trace strictly drops; while both are negative it strictly
/// rises, so the loop ends.
pub fn reduce_rank2_basis<T: Scalar>(g: &Matrix<T>) -> Result<Rank2Reduction<T>> {
    if g.rows() != 2 || g.cols() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: g.rows() });
    }
    if g[(0, 1)] != g[(1, 0)] {
        return Err(Error::NotSymmetric);
    }
    if !g[(0, 0)].is_even() || !g[(1, 1)].is_even() {
        return Err(Error::ParityMismatch("diagonal entries must be even".into()));
    }
    let det = g[(0, 0)].clone() * g[(1, 1)].clone() - g[(0, 1)].clone() * g[(0, 1)].clone();
    if !det.is_negative() {
        return Err(Error::DefiniteOrDegenerate);
    }

    let mut cur = g.clone();
    let mut change = Matrix::identity(2);
    let one = T::one();
    let minus_one = -T::one();
    loop {
        let (p, q, s) = (cur[(0, 0)].clone(), cur[(0, 1)].clone(), cur[(1, 1)].clone());
        if q.is_negative() {
            change.negate_col(1);
            cur = congruent(g, &change);
            continue;
        }
        let p_nonneg = !p.is_negative();
        let s_nonneg = !s.is_negative();
        match (p_nonneg, s_nonneg) {
            (true, false) => break,
            (false, true) => change.swap_cols(0, 1),
            (true, true) => {
                if s >= p {
                    change.add_col_multiple(1, 0, &minus_one);
                } else {
                    change.add_col_multiple(0, 1, &minus_one);
                }
            }
            (false, false) => {
                if s <= p {
                    change.add_col_multiple(1, 0, &one);
                } else {
                    change.add_col_multiple(0, 1, &one);
                }
            }
        }
        cur = congruent(g, &change);
    }
    Ok(Rank2Reduction { gram: cur, change })
}

fn congruent<T: Scalar>(g: &Matrix<T>, u: &Matrix<T>) -> Matrix<T> {
    u.transpose().mul(g).and_then(|m| m.mul(u)).expect("2x2 product")
}
