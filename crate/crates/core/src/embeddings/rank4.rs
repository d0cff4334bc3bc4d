use num_traits::{Signed, Zero};

use super::{Certificate, ReflectionTrace, Source};
use crate::cones::{build_model, ConeModel, Flavor};
use crate::error::{Error, Result};
use crate::lattice::BasisId;
use crate::{int, ints, DivisorClass, Embedding, GramMatrix, Int, Matrix};

/// Gram matrix of the fixed rank-4 lattice number `which` on `B, C1, C2, C3`.
pub fn rank4_gram(which: u8) -> Result<GramMatrix> {
    let rows: [[i64; 4]; 4] = match which {
        1 => [[2, -1, -1, -1], [-1, -2, 0, 0], [-1, 0, -2, 0], [-1, 0, 0, -2]],
        2 => [[12, -2, 0, 0], [-2, -2, -1, 0], [0, -1, -2, -1], [0, 0, -1, -2]],
        _ => return Err(Error::OutOfRange(format!("rank-4 lattice must be 1 or 2, got {which}"))),
    };
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    GramMatrix::from_i64_rows(BasisId::Free(4), &refs)
}

/// The explicit embedding of lattice 1 into `Σ_4` or lattice 2 into `Σ_5`.
pub fn embed_rank4(which: u8) -> Result<Certificate> {
    let source = rank4_gram(which)?;
    let (r, cols) = match which {
        1 => (4, vec![ints(&[2, 1, 0, 0, 0]), ints(&[-1, 0, 1, 0, 0]), ints(&[-1, 0, 0, 1, 0]), ints(&[-1, 0, 0, 0, 1])]),
        _ => (
            5,
            vec![
                ints(&[12, 6, -4, -3, -2, -1]),
                ints(&[1, 0, -1, 0, 0, 0]),
                ints(&[0, -1, 0, 0, 0, 0]),
                ints(&[1, 0, 0, -1, 0, 0]),
            ],
        ),
    };
    let model = build_model(Flavor::Odd, r)?;
    let e = Embedding::new(source, model.gram().clone(), Matrix::from_columns(&cols)?)?;
    Certificate::assemble(Source::Rank4(which), &model, e.clone(), ReflectionTrace::default(), e, None, vec![], vec![])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitBranch {
    /// `m5 <= 1`: nothing to split.
    Unsplit,
    /// `m1 - 2 m5 >= 1`: `L = P + (m5 - 1) F`.
    Residual,
    /// `m1 = 2 m5`: `L = (d - 4 m5) A + m5 F`.
    Fibre,
}

impl SplitBranch {
    pub fn name(self) -> &'static str {
        match self {
            SplitBranch::Unsplit => "unsplit",
            SplitBranch::Residual => "residual",
            SplitBranch::Fibre => "fibre",
        }
    }
}

/// A nef class of the odd `Σ_5` written as a non-negative combination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rank4Split {
    /// `permutation[k]` is the original index of the `k`-th sorted `E_{k+2}`.
    pub permutation: Vec<usize>,
    /// Input with `m2 >= ... >= m5`.
    pub sorted: DivisorClass,
    pub branch: SplitBranch,
    pub summands: Vec<(Int, DivisorClass)>,
}

impl Rank4Split {
    pub fn recombined(&self) -> Vec<Int> {
        recombine(self.sorted.dim(), &self.summands)
    }

    pub fn recheck(&self) -> Vec<(&'static str, bool)> {
        vec![
            ("recombines", self.recombined() == self.sorted.coords),
            ("multiplicities_non_negative", self.summands.iter().all(|(k, _)| !k.is_negative())),
        ]
    }
}

pub(crate) fn recombine(dim: usize, summands: &[(Int, DivisorClass)]) -> Vec<Int> {
    let mut out = vec![Int::zero(); dim];
    for (k, c) in summands {
        for (o, x) in out.iter_mut().zip(&c.coords) {
            *o += k * x;
        }
    }
    out
}

/// Sorts `E2..E_r` so that `m2 >= ... >= m_r`, where `L = dA + m1 E1 - Σ mj Ej`.
pub(crate) fn sort_tail(coords: &[Int]) -> (Vec<usize>, Vec<Int>) {
    let mut idx: Vec<usize> = (2..coords.len()).collect();
    // coordinates are -mj, so ascending coordinate is descending mj; stable
    idx.sort_by(|&i, &j| coords[i].cmp(&coords[j]));
    let mut sorted = coords[..2].to_vec();
    sorted.extend(idx.iter().map(|&i| coords[i].clone()));
    (idx, sorted)
}

/// Splits `L` along the fibre class `F = 4A + 2E1 - Σ Ei`.
pub fn rank4_split(model: &ConeModel, l: &DivisorClass) -> Result<Rank4Split> {
    if model.flavor() != Flavor::Odd || model.r() != 5 {
        return Err(Error::FlavorMismatch("rank-4 splitting lives on the odd Σ_5".into()));
    }
    model.check(l)?;
    let (permutation, sorted) = sort_tail(&l.coords);
    let d = &sorted[0];
    let m1 = &sorted[1];
    let ms: Vec<Int> = sorted[2..].iter().map(|c| -c).collect();
    let m2 = &ms[0];
    let m5 = &ms[3];
    let normalized = *d >= int(2) * m1 && int(2) * m1 >= int(4) * m2 && !m5.is_negative() && *m1 >= int(3);
    if !normalized {
        return Err(Error::Normalization(format!("need d >= 2m1 >= 4m2 >= ... >= 4m5 >= 0 and m1 >= 3, got {l}")));
    }
    let basis = model.basis();
    let sorted_class = DivisorClass::new(basis, sorted.clone());
    let f = DivisorClass::new(basis, ints(&[4, 2, -1, -1, -1, -1]));
    let (branch, summands) = if *m5 <= int(1) {
        (SplitBranch::Unsplit, vec![(int(1), sorted_class.clone())])
    } else if m1 - int(2) * m5 >= int(1) {
        let mut p = vec![d - int(4) * m5 + int(4), m1 - int(2) * m5 + int(2)];
        p.extend(ms.iter().map(|mi| -(mi - m5 + int(1))));
        (SplitBranch::Residual, vec![(int(1), DivisorClass::new(basis, p)), (m5 - int(1), f)])
    } else {
        (SplitBranch::Fibre, vec![(d - int(4) * m5, model.unit(0)), (m5.clone(), f)])
    };
    let out = Rank4Split { permutation, sorted: sorted_class, branch, summands };
    if out.recheck().iter().any(|(_, ok)| !ok) {
        return Err(Error::Internal(format!("split of {l} does not recombine")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures() {
        let c = embed_rank4(1).unwrap();
        assert!(c.all_pass());
        assert_eq!(c.checks.primitive.invariant_factors, ints(&[1, 1, 1, 1]));
        let g = c.embedding.image_gram().unwrap();
        assert_eq!(g[(0, 1)], int(-1));
        assert_eq!(g[(1, 2)], int(0));
        let c = embed_rank4(2).unwrap();
        assert!(c.all_pass());
        assert_eq!(c.embedding.image_gram().unwrap(), *rank4_gram(2).unwrap().matrix());
        assert!(matches!(embed_rank4(3), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn split_examples() {
        let m = build_model(Flavor::Odd, 5).unwrap();
        // [9,5,-2,-2,-2,-2] meets E1 negatively, so d is raised by one
        let s = rank4_split(&m, &m.class_i64(&[10, 5, -2, -2, -2, -2]).unwrap()).unwrap();
        assert_eq!(s.branch, SplitBranch::Residual);
        assert_eq!(s.summands[0].1.coords, ints(&[6, 3, -1, -1, -1, -1]));
        assert_eq!(s.summands[1].0, int(1));

        let s = rank4_split(&m, &m.class_i64(&[8, 4, -2, -2, -2, -2]).unwrap()).unwrap();
        assert_eq!(s.branch, SplitBranch::Fibre);
        assert_eq!(s.summands[0].0, int(0));
        assert_eq!(s.summands[1].0, int(2));

        let s = rank4_split(&m, &m.class_i64(&[7, 3, -1, -1, -1, -1]).unwrap()).unwrap();
        assert_eq!(s.branch, SplitBranch::Unsplit);
    }

    #[test]
    fn split_sorts_and_guards() {
        let m = build_model(Flavor::Odd, 5).unwrap();
        let s = rank4_split(&m, &m.class_i64(&[12, 6, -2, -3, -2, -2]).unwrap()).unwrap();
        assert_eq!(s.sorted.coords, ints(&[12, 6, -3, -2, -2, -2]));
        assert_eq!(s.permutation, vec![3, 2, 4, 5]);
        assert!(matches!(
            rank4_split(&m, &m.class_i64(&[9, 5, -2, -2, -2, -2]).unwrap()),
            Err(Error::Normalization(_))
        ));
        assert!(matches!(
            rank4_split(&m, &m.class_i64(&[5, 3, -1, -1, -1, -1]).unwrap()),
            Err(Error::Normalization(_))
        ));
        assert!(matches!(
            rank4_split(&m, &m.class_i64(&[8, 2, 0, 0, 0, 0]).unwrap()),
            Err(Error::Normalization(_))
        ));
    }
}
