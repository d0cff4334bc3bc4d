use num_traits::One;

use super::{smith_normal_form, GramMatrix, Matrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Integer matrix whose columns are the images of a source basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding<T> {
    pub source_gram: GramMatrix<T>,
    pub target_gram: GramMatrix<T>,
    pub matrix: Matrix<T>,
}

/// Outcome of the primitivity test together with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Primitivity<T> {
    pub primitive: bool,
    pub invariant_factors: Vec<T>,
}

impl<T: Scalar> Embedding<T> {
    pub fn new(source_gram: GramMatrix<T>, target_gram: GramMatrix<T>, matrix: Matrix<T>) -> Result<Self> {
        if matrix.rows() != target_gram.dim() {
            return Err(Error::DimensionMismatch { expected: target_gram.dim(), found: matrix.rows() });
        }
        if matrix.cols() != source_gram.dim() {
            return Err(Error::DimensionMismatch { expected: source_gram.dim(), found: matrix.cols() });
        }
        Ok(Embedding { source_gram, target_gram, matrix })
    }

    /// Embedding whose source Gram is whatever the columns pull back to.
    pub fn from_columns(target_gram: GramMatrix<T>, columns: &[Vec<T>]) -> Result<Self> {
        let matrix = Matrix::from_columns(columns)?;
        if matrix.rows() != target_gram.dim() {
            return Err(Error::DimensionMismatch { expected: target_gram.dim(), found: matrix.rows() });
        }
        let source_gram = GramMatrix::free(target_gram.pullback(&matrix)?)?;
        Ok(Embedding { source_gram, target_gram, matrix })
    }

    pub fn image_gram(&self) -> Result<Matrix<T>> {
        self.target_gram.pullback(&self.matrix)
    }

    pub fn preserves_gram(&self) -> Result<bool> {
        Ok(&self.image_gram()? == self.source_gram.matrix())
    }

    /// Image of a source class given by its coordinates.
    pub fn apply(&self, source_coords: &[T]) -> Result<Vec<T>> {
        self.matrix.mul_vec(source_coords)
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        self.matrix.columns()
    }

    pub fn negated(&self) -> Self {
        Embedding { matrix: self.matrix.neg(), ..self.clone() }
    }
}

/// Tests whether the embedding has torsion-free cokernel.
///
/// The witness is the list of invariant factors of the image matrix; the
/// embedding is primitive exactly when all of them are 1.
pub fn is_primitive_embedding<T: Scalar>(e: &Embedding<T>) -> Result<Primitivity<T>> {
    primitivity(&e.matrix)
}

/// Primitivity of the lattice spanned by the columns of `m`.
pub fn primitivity<T: Scalar>(m: &Matrix<T>) -> Result<Primitivity<T>> {
    let factors = smith_normal_form(m).invariant_factors();
    if factors.len() < m.cols() {
        return Err(Error::RankDeficient);
    }
    let primitive = factors.iter().all(One::is_one);
    Ok(Primitivity { primitive, invariant_factors: factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::BasisId;

    fn even6() -> GramMatrix<i64> {
        let mut m = Matrix::zeros(7, 7);
        m[(0, 0)] = 2;
        for i in 1..7 {
            m[(i, i)] = -2;
        }
        GramMatrix::new(BasisId::Even(6), m).unwrap()
    }

    #[test]
    fn even_sigma6_example_is_primitive() {
        let e = Embedding::from_columns(even6(), &[vec![1, 0, 0, 0, 0, 0, 0], vec![1, -1, 0, 0, 0, 0, -1]]).unwrap();
        let p = is_primitive_embedding(&e).unwrap();
        assert!(p.primitive);
        assert_eq!(p.invariant_factors, vec![1, 1]);
        assert_eq!(e.image_gram().unwrap(), Matrix::from_i64_rows(&[&[2, 2], &[2, -2]]));
    }

    #[test]
    fn doubled_basis_is_not_primitive() {
        let g = GramMatrix::from_i64_rows(BasisId::Free(2), &[&[2, 0], &[0, -2]]).unwrap();
        let e = Embedding::from_columns(g, &[vec![2, 0], vec![0, 2]]).unwrap();
        let p = is_primitive_embedding(&e).unwrap();
        assert!(!p.primitive);
        assert_eq!(p.invariant_factors, vec![2, 2]);
    }

    #[test]
    fn single_unit_column() {
        let e = Embedding::from_columns(even6(), &[vec![1, 0, 0, 0, 0, 0, 0]]).unwrap();
        assert!(is_primitive_embedding(&e).unwrap().primitive);
    }

    #[test]
    fn rank_deficient_is_an_error() {
        let e = Embedding::from_columns(even6(), &[vec![1, 0, 0, 0, 0, 0, 0], vec![2, 0, 0, 0, 0, 0, 0]]).unwrap();
        assert_eq!(is_primitive_embedding(&e).unwrap_err(), Error::RankDeficient);
    }
}
