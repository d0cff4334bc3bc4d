use num_rational::Ratio;
use num_traits::{Signed, Zero};

use super::GramMatrix;
use crate::scalar::Scalar;

/// Inertia of a real symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

impl Signature {
    pub fn is_negative_definite(&self) -> bool {
        self.pos == 0 && self.zero == 0
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.pos == 1 && self.zero == 0 && self.neg > 0
    }
}

/// Inertia by exact congruence diagonalization over the rationals.
///
/// A nonzero diagonal pivot is eliminated symmetrically. When the remaining
/// diagonal is zero but an off-diagonal entry `(i, j)` is not, adding basis
/// vector `j` to `i` produces the pivot `2 g_ij`.
pub fn signature<T: Scalar>(g: &GramMatrix<T>) -> Signature {
    let n = g.dim();
    let mut m: Vec<Vec<Ratio<T>>> = (0..n)
        .map(|i| (0..n).map(|j| Ratio::from_integer(g.entry(i, j).clone())).collect())
        .collect();
    let mut sig = Signature { pos: 0, neg: 0, zero: 0 };

    for k in 0..n {
        let pivot = (k..n).find(|&i| !m[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                let off = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !m[i][j].is_zero());
                match off {
                    Some((i, j)) => {
                        add_congruent(&mut m, i, j);
                        i
                    }
                    None => {
                        sig.zero += n - k;
                        return sig;
                    }
                }
            }
        };
        m.swap(p, k);
        for row in m.iter_mut() {
            row.swap(p, k);
        }
        let pv = m[k][k].clone();
        if pv.is_positive() {
            sig.pos += 1;
        } else {
            sig.neg += 1;
        }
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].clone() / pv.clone();
            for j in k..n {
                let v = f.clone() * m[k][j].clone();
                m[i][j] = m[i][j].clone() - v;
            }
            for j in k..n {
                let v = f.clone() * m[j][k].clone();
                m[j][i] = m[j][i].clone() - v;
            }
        }
    }
    sig
}

/// Applies `e_i <- e_i + e_j` as a congruence.
fn add_congruent<T: Scalar>(m: &mut [Vec<Ratio<T>>], i: usize, j: usize) {
    let n = m.len();
    for c in 0..n {
        let v = m[j][c].clone();
        m[i][c] = m[i][c].clone() + v;
    }
    for r in 0..n {
        let v = m[r][j].clone();
        m[r][i] = m[r][i].clone() + v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::BasisId;

    fn sig(rows: &[&[i64]]) -> Signature {
        signature(&GramMatrix::<i64>::from_i64_rows(BasisId::Free(rows.len()), rows).unwrap())
    }

    #[test]
    fn diagonal_forms() {
        assert_eq!(sig(&[&[2, 0, 0], &[0, -2, 0], &[0, 0, -2]]), Signature { pos: 1, neg: 2, zero: 0 });
        assert_eq!(sig(&[&[2, 0], &[0, -2]]), Signature { pos: 1, neg: 1, zero: 0 });
    }

    #[test]
    fn odd_model_rank_five() {
        // [[0,1],[1,-2]] + (-2)^3: the hyperbolic block contributes (1,1)
        let s = sig(&[
            &[0, 1, 0, 0, 0],
            &[1, -2, 0, 0, 0],
            &[0, 0, -2, 0, 0],
            &[0, 0, 0, -2, 0],
            &[0, 0, 0, 0, -2],
        ]);
        assert_eq!(s, Signature { pos: 1, neg: 4, zero: 0 });
    }

    #[test]
    fn zero_pivot_uses_hyperbolic_step() {
        assert_eq!(sig(&[&[0, 1], &[1, 0]]), Signature { pos: 1, neg: 1, zero: 0 });
        assert_eq!(sig(&[&[0, 0, 0], &[0, 0, 3], &[0, 3, 0]]), Signature { pos: 1, neg: 1, zero: 1 });
        assert_eq!(sig(&[&[0]]), Signature { pos: 0, neg: 0, zero: 1 });
    }

    #[test]
    fn a2_is_negative_definite() {
        assert!(sig(&[&[-2, 1], &[1, -2]]).is_negative_definite());
        assert!(!sig(&[&[-2, 2], &[2, -2]]).is_negative_definite());
    }
}
