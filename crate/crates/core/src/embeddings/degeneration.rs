use num_traits::{Signed, Zero};

use super::rank4::{recombine, sort_tail};
use crate::error::{Error, Result};
use crate::lattice::BasisId;
use crate::{int, DivisorClass, GramMatrix, Int, Matrix};

/// Gram matrix of `Y1` on `A1, B1, G1, ..., G_{2r-2}`.
pub fn y1_gram(r: usize) -> Result<GramMatrix> {
    let n = 2 * r;
    let mut m = Matrix::zeros(n, n);
    m[(0, 1)] = int(1);
    m[(1, 0)] = int(1);
    m[(1, 1)] = int(-2);
    for i in 2..n {
        m[(i, i)] = int(-1);
    }
    GramMatrix::new(BasisId::Y1(r), m)
}

/// Divisor bookkeeping for one class under the degeneration to `Y1 ∪ Y2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerationLedger {
    pub r: usize,
    /// `permutation[k]` is the original index of the `k`-th sorted `E_{k+2}`.
    pub permutation: Vec<usize>,
    /// Odd-model coordinates with `m2 >= ... >= m_r`.
    pub sorted: Vec<Int>,
    pub restriction_y1: DivisorClass,
    /// Multiplicity of `A2` in the restriction to `Y2`.
    pub restriction_y2: Int,
    pub m_class: DivisorClass,
    pub summands: Vec<(Int, DivisorClass)>,
    /// `-K_{Y1} = 4A1 + 2B1 - Σ Gi`.
    pub anticanonical: DivisorClass,
    pub anticanonical_square: Int,
    pub m_dot_d: Int,
    pub lambda: Int,
    pub m: Int,
    /// Largest `j` with `m_j > 0`, or 1 if there is none.
    pub support: usize,
    /// Whether `m1 >= 3`; the decomposition itself only needs `m1 >= 2`.
    pub m1_at_least_3: bool,
}

impl DegenerationLedger {
    pub fn recheck(&self) -> Result<Vec<(&'static str, bool)>> {
        let g = y1_gram(self.r)?;
        let fresh = ledger_parts(self.r, &self.sorted)?;
        let dd = g.square(&self.anticanonical.coords)?;
        let md = g.pair(&self.m_class.coords, &self.anticanonical.coords)?;
        let lambda = (md.clone() - int(1)).min(int(4));
        Ok(vec![
            ("restrictions", fresh.0 == self.restriction_y1 && fresh.1 == self.restriction_y2),
            ("m_class", fresh.2 == self.m_class),
            ("summands_recombine", recombine(2 * self.r, &self.summands) == self.m_class.coords),
            ("multiplicities_non_negative", self.summands.iter().all(|(k, _)| !k.is_negative())),
            ("anticanonical_square", dd == int(10 - 2 * self.r as i64) && dd == self.anticanonical_square),
            ("lambda_and_m", md == self.m_dot_d && lambda == self.lambda && &md - &lambda == self.m),
        ])
    }
}

fn g_index(g: usize) -> usize {
    g + 1
}

/// Restrictions and `M` for sorted coordinates.
fn ledger_parts(r: usize, sorted: &[Int]) -> Result<(DivisorClass, Int, DivisorClass)> {
    let basis = BasisId::Y1(r);
    let n = 2 * r;
    let d = &sorted[0];
    let m1 = &sorted[1];
    let ms: Vec<Int> = sorted[2..].iter().map(|c| -c).collect();
    let mut y1 = vec![Int::zero(); n];
    y1[0] = d.clone();
    y1[1] = m1.clone();
    let mut mc = vec![Int::zero(); n];
    mc[0] = d - int(4);
    mc[1] = m1 - int(2);
    for (k, mj) in ms.iter().enumerate() {
        let j = k + 2;
        for g in [2 * j - 3, 2 * j - 2] {
            y1[g_index(g)] = -mj;
            if mj.is_positive() {
                mc[g_index(g)] = -(mj - int(1));
            }
        }
    }
    let y2 = d - ms.iter().sum::<Int>();
    Ok((DivisorClass::new(basis, y1), y2, DivisorClass::new(basis, mc)))
}

/// `2A1 + B1 - Σ_{j=2}^{i} G_{2j-3}` (`offset` 3) or `... G_{2j-2}` (`offset` 2).
fn chain(r: usize, i: usize, offset: usize) -> DivisorClass {
    let mut c = vec![Int::zero(); 2 * r];
    c[0] = int(2);
    c[1] = int(1);
    for j in 2..=i {
        c[g_index(2 * j - offset)] = int(-1);
    }
    DivisorClass::new(BasisId::Y1(r), c)
}

/// Restricts an odd-model class satisfying `d >= 2m1 >= 4 max mj`,
/// `mj >= 0` (and `m5 <= 1` when `r = 5`) to the two components and writes
/// `M` as a non-negative combination of the chain classes.
pub fn restrict_and_decompose(r: usize, coords: &[Int]) -> Result<DegenerationLedger> {
    if !(2..=5).contains(&r) {
        return Err(Error::OutOfRange(format!("degeneration needs 2 <= r <= 5, got {r}")));
    }
    if coords.len() != r + 1 {
        return Err(Error::DimensionMismatch { expected: r + 1, found: coords.len() });
    }
    let d = &coords[0];
    let m1 = &coords[1];
    let ms: Vec<Int> = coords[2..].iter().map(|c| -c).collect();
    let max = ms.iter().max().cloned().unwrap_or_default();
    let min = ms.iter().min().cloned().unwrap_or_default();
    let two_m1 = int(2) * m1;
    if !(*d >= two_m1 && two_m1 >= int(4) * &max && !min.is_negative() && *m1 >= int(2)) {
        return Err(Error::Normalization(format!(
            "need d >= 2m1 >= 4 max mj, mj >= 0, m1 >= 2; got {}",
            super::even::fmt_list(coords)
        )));
    }
    if r == 5 && ms[3] > int(1) {
        return Err(Error::Normalization(format!("need m5 <= 1 when r = 5, got m5 = {}", ms[3])));
    }

    let (permutation, sorted) = sort_tail(coords);
    let (restriction_y1, restriction_y2, m_class) = ledger_parts(r, &sorted)?;
    let sm: Vec<Int> = sorted[2..].iter().map(|c| -c).collect();
    let mj = |j: usize| sm[j - 2].clone();
    let support = (2..=r).rev().find(|&j| mj(j).is_positive()).unwrap_or(1);

    let basis = BasisId::Y1(r);
    let mut a1 = vec![Int::zero(); 2 * r];
    a1[0] = int(1);
    let a1 = DivisorClass::new(basis, a1);
    let base = chain(r, 1, 3);
    let mut summands: Vec<(Int, DivisorClass)> = Vec::new();
    if support >= 2 {
        let a = support;
        summands.push((mj(a) - int(1), chain(r, a, 3)));
        summands.push((mj(a) - int(1), chain(r, a, 2)));
        for i in 2..a {
            summands.push((mj(i) - mj(i + 1), chain(r, i, 3)));
            summands.push((mj(i) - mj(i + 1), chain(r, i, 2)));
        }
        summands.push((m1 - int(2) * mj(2), base));
    } else {
        summands.push((m1 - int(2), base));
    }
    summands.push((d - &two_m1, a1));
    summands.retain(|(k, _)| !k.is_zero());

    let g = y1_gram(r)?;
    let mut dcoords = vec![int(-1); 2 * r];
    dcoords[0] = int(4);
    dcoords[1] = int(2);
    let anticanonical = DivisorClass::new(basis, dcoords);
    let anticanonical_square = g.square(&anticanonical.coords)?;
    let m_dot_d = g.pair(&m_class.coords, &anticanonical.coords)?;
    let lambda = (m_dot_d.clone() - int(1)).min(int(4));
    let m = &m_dot_d - &lambda;

    let ledger = DegenerationLedger {
        r,
        permutation,
        sorted,
        restriction_y1,
        restriction_y2,
        m_class,
        summands,
        anticanonical,
        anticanonical_square,
        m_dot_d,
        lambda,
        m,
        support,
        m1_at_least_3: *m1 >= int(3),
    };
    if ledger.recheck()?.iter().any(|(_, ok)| !ok) {
        return Err(Error::Internal("degeneration ledger failed its own recheck".into()));
    }
    Ok(ledger)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ints;

    #[test]
    fn r4_example() {
        let l = restrict_and_decompose(4, &ints(&[7, 3, -1, 0, 0])).unwrap();
        assert_eq!(l.restriction_y1.coords, ints(&[7, 3, -1, -1, 0, 0, 0, 0]));
        assert_eq!(l.restriction_y2, int(6));
        assert_eq!(l.m_class.coords, ints(&[3, 1, 0, 0, 0, 0, 0, 0]));
        assert_eq!(
            l.summands,
            vec![
                (int(1), DivisorClass::new(BasisId::Y1(4), ints(&[2, 1, 0, 0, 0, 0, 0, 0]))),
                (int(1), DivisorClass::new(BasisId::Y1(4), ints(&[1, 0, 0, 0, 0, 0, 0, 0]))),
            ]
        );
        assert_eq!(l.m_dot_d, int(6));
        assert_eq!(l.lambda, int(4));
        assert_eq!(l.m, int(2));
        assert_eq!(l.anticanonical_square, int(2));
    }

    #[test]
    fn boundary_class() {
        let l = restrict_and_decompose(2, &ints(&[4, 2, 0])).unwrap();
        assert!(l.m_class.is_zero());
        assert!(l.summands.is_empty());
        assert!(!l.m1_at_least_3);
    }

    #[test]
    fn guards() {
        assert!(matches!(restrict_and_decompose(5, &ints(&[8, 4, -2, -1, -1, -2])), Err(Error::Normalization(_))));
        assert!(matches!(restrict_and_decompose(3, &ints(&[5, 3, -1, 0])), Err(Error::Normalization(_))));
        assert!(matches!(restrict_and_decompose(6, &ints(&[0; 7])), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn deep_chain() {
        let l = restrict_and_decompose(5, &ints(&[20, 8, -2, -1, -2, -1])).unwrap();
        assert_eq!(l.sorted, ints(&[20, 8, -2, -2, -1, -1]));
        assert_eq!(l.support, 5);
        assert!(l.recheck().unwrap().iter().all(|(_, ok)| *ok));
    }
}
