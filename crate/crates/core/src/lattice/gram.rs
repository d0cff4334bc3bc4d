use std::fmt;

use num_rational::Ratio;

use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Names the ordered basis a coordinate vector is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisId {
    /// `A, E1, ..., Er` with Gram `diag(2, -2, ..., -2)`.
    Even(usize),
    /// `A, E1, ..., Er` with Gram `[[0, 1], [1, -2]] + (-2)^(r-1)`.
    Odd(usize),
    /// `A1, B1, G1, ..., G(2r-2)` on the rational component of the degeneration.
    Y1(usize),
    /// An abstract source lattice of the given rank.
    Free(usize),
}

impl fmt::Display for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisId::Even(r) => write!(f, "even-{r}"),
            BasisId::Odd(r) => write!(f, "odd-{r}"),
            BasisId::Y1(r) => write!(f, "y1-{r}"),
            BasisId::Free(n) => write!(f, "free-{n}"),
        }
    }
}

/// Symmetric integer matrix of pairings in a fixed basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix<T> {
    basis: BasisId,
    entries: Matrix<T>,
}

impl<T: Scalar> GramMatrix<T> {
    pub fn new(basis: BasisId, entries: Matrix<T>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch { expected: entries.rows(), found: entries.cols() });
        }
        let n = entries.rows();
        for i in 0..n {
            for j in i + 1..n {
                if entries[(i, j)] != entries[(j, i)] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(GramMatrix { basis, entries })
    }

    /// Gram matrix on an anonymous basis of the matrix's size.
    pub fn free(entries: Matrix<T>) -> Result<Self> {
        let n = entries.rows();
        Self::new(BasisId::Free(n), entries)
    }

    pub fn from_i64_rows(basis: BasisId, rows: &[&[i64]]) -> Result<Self> {
        Self::new(basis, Matrix::from_i64_rows(rows))
    }

    pub fn basis(&self) -> BasisId {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &T {
        &self.entries[(i, j)]
    }

    pub fn is_even(&self) -> bool {
        (0..self.dim()).all(|i| self.entries[(i, i)].is_even())
    }

    /// Raw pairing `x^T G y` on coordinate slices.
    pub fn pair(&self, x: &[T], y: &[T]) -> Result<T> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len() });
        }
        if y.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: y.len() });
        }
        let mut acc = T::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let mut row = T::zero();
            for (j, yj) in y.iter().enumerate() {
                let g = &self.entries[(i, j)];
                if !g.is_zero() && !yj.is_zero() {
                    row = row + g.clone() * yj.clone();
                }
            }
            acc = acc + xi.clone() * row;
        }
        Ok(acc)
    }

    pub fn square(&self, x: &[T]) -> Result<T> {
        self.pair(x, x)
    }

    /// Pairing of rational coordinate vectors.
    pub fn pair_rational(&self, x: &[Ratio<T>], y: &[Ratio<T>]) -> Result<Ratio<T>> {
        let n = self.dim();
        if x.len() != n || y.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len().min(y.len()) });
        }
        let mut acc = Ratio::from_integer(T::zero());
        for i in 0..n {
            for j in 0..n {
                let g = &self.entries[(i, j)];
                if g.is_zero() {
                    continue;
                }
                acc = acc + x[i].clone() * y[j].clone() * Ratio::from_integer(g.clone());
            }
        }
        Ok(acc)
    }

    /// Gram matrix of the columns of `m`: `m^T G m`.
    pub fn pullback(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        m.transpose().mul(&self.entries)?.mul(m)
    }

    /// `true` when `m^T G m == G`, i.e. `m` is an isometry of this lattice.
    pub fn is_isometry(&self, m: &Matrix<T>) -> Result<bool> {
        Ok(&self.pullback(m)? == &self.entries)
    }
}

/// Integer divisor class: plain signed coordinates in a declared basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass<T> {
    pub basis: BasisId,
    pub coords: Vec<T>,
}

impl<T: Scalar> DivisorClass<T> {
    pub fn new(basis: BasisId, coords: Vec<T>) -> Self {
        DivisorClass { basis, coords }
    }

    pub fn zero(basis: BasisId, dim: usize) -> Self {
        DivisorClass { basis, coords: vec![T::zero(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

impl<T: fmt::Display> fmt::Display for DivisorClass<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Divisor class with exact rational coordinates.
///
/// `Ratio` normalizes on construction, so coordinates are always in lowest
/// terms with positive denominators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalClass<T: Clone + num_integer::Integer> {
    pub basis: BasisId,
    pub coords: Vec<Ratio<T>>,
}

impl<T: Scalar> RationalClass<T> {
    pub fn from_integral(c: &DivisorClass<T>) -> Self {
        RationalClass {
            basis: c.basis,
            coords: c.coords.iter().map(|v| Ratio::from_integer(v.clone())).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| num_traits::Zero::is_zero(c))
    }

    /// Returns the integral class when every denominator is 1.
    pub fn to_integral(&self) -> Option<DivisorClass<T>> {
        self.coords
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(|coords| DivisorClass { basis: self.basis, coords })
    }
}

/// Pairing `x^T g y` of two classes, checking dimension and basis.
pub fn inner_product<T: Scalar>(g: &GramMatrix<T>, x: &DivisorClass<T>, y: &DivisorClass<T>) -> Result<T> {
    for c in [x, y] {
        if c.basis != g.basis() {
            return Err(Error::BasisMismatch(format!("class in {} paired with Gram on {}", c.basis, g.basis())));
        }
    }
    g.pair(&x.coords, &y.coords)
}
