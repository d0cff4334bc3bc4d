use num_traits::{Signed, Zero};

use super::{is_zero_vec, reflect_matrix_columns, ReflectionTrace, TraceStep, DEFAULT_STEP_BUDGET};
use crate::cones::{is_big, is_nef, reflect_coords, ConeModel};
use crate::error::{Error, Result};
use crate::{DivisorClass, Embedding, Int};

/// First `(-2)`-class in canonical order meeting `image` negatively.
pub(crate) fn first_negative<'m>(model: &'m ConeModel, image: &[Int]) -> Result<Option<&'m DivisorClass>> {
    for r in model.minus_two_classes() {
        if model.pair_coords(image, &r.coords)?.is_negative() {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

fn check_target(model: &ConeModel, e: &Embedding) -> Result<()> {
    if e.target_gram != *model.gram() {
        return Err(Error::BasisMismatch(format!("embedding target is not the {} model", model.basis())));
    }
    Ok(())
}

pub fn nefify(model: &ConeModel, e: &Embedding, l: &[Int]) -> Result<(Embedding, ReflectionTrace)> {
    nefify_with(model, e, l, DEFAULT_STEP_BUDGET)
}

/// Moves `σ(L)` into the nef cone by reflections, applied to the whole
/// embedding so that the Gram matrix is untouched.
///
/// Sign is fixed first so that `σ(L).D > 0`; each reflection is in the first
/// class (canonical order) meeting `σ(L)` negatively, which strictly lowers
/// `σ(L).D`.
pub fn nefify_with(model: &ConeModel, e: &Embedding, l: &[Int], budget: usize) -> Result<(Embedding, ReflectionTrace)> {
    check_target(model, e)?;
    let mut image = e.apply(l)?;
    if is_zero_vec(&image) {
        return Err(Error::Precondition("σ(L) is zero".into()));
    }
    let square = model.gram().square(&image)?;
    if square.is_negative() {
        return Err(Error::Precondition(format!("σ(L)^2 = {square} is negative")));
    }
    let d = model.ample_reference().coords.clone();
    let mut cur = e.clone();
    let mut degree = model.pair_coords(&image, &d)?;
    let negated = degree.is_negative();
    if negated {
        cur = cur.negated();
        image = image.iter().map(|x| -x).collect();
        degree = -degree;
    }
    let mut trace = ReflectionTrace { negated, initial_degree: Some(degree.clone()), steps: Vec::new() };
    while let Some(root) = first_negative(model, &image)? {
        if trace.steps.len() >= budget {
            return Err(Error::StepBudgetExceeded { steps: budget });
        }
        let pairing = model.pair_coords(&image, &root.coords)?;
        cur.matrix = reflect_matrix_columns(model, &cur.matrix, &root.coords)?;
        image = reflect_coords(model, &root.coords, &image)?;
        let next = model.pair_coords(&image, &d)?;
        if next >= degree {
            return Err(Error::Internal(format!("σ(L).D did not drop: {degree} -> {next}")));
        }
        degree = next.clone();
        trace.steps.push(TraceStep { root: root.clone(), pairing, degree: next });
    }
    Ok((cur, trace))
}

/// Result of [`nefify_pair`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairNefification {
    pub embedding: Embedding,
    /// Reflections in classes orthogonal to `σ(L)`; `pairing` is `σ(C).R`
    /// and `degree` is `σ(C).D` after the step.
    pub trace: Vec<TraceStep>,
    /// Smallest `N` with `Nσ(L) - σ(C)` nef and big.
    pub n_min: Int,
}

pub fn nefify_pair(model: &ConeModel, e: &Embedding, l: &[Int], c: &[Int]) -> Result<PairNefification> {
    nefify_pair_with(model, e, l, c, DEFAULT_STEP_BUDGET)
}

/// Normalises `σ(C)` against the classes orthogonal to a big and nef
/// `σ(L)` so that it pairs `<= 0` with all of them, then finds the least
/// `N` making `Nσ(L) - σ(C)` big and nef.
///
/// The reflections fix `σ(L)`, and each one strictly raises `σ(C).D`
/// inside a finite orbit.
pub fn nefify_pair_with(model: &ConeModel, e: &Embedding, l: &[Int], c: &[Int], budget: usize) -> Result<PairNefification> {
    check_target(model, e)?;
    let basis = model.basis();
    let sl = DivisorClass::new(basis, e.apply(l)?);
    if !is_nef(model, &sl)?.nef || !is_big(model, &sl)? {
        return Err(Error::Precondition("σ(L) must be big and nef".into()));
    }
    let orthogonal: Vec<&DivisorClass> = model
        .minus_two_classes()
        .iter()
        .filter(|r| model.pair(&sl, r).is_ok_and(|p| p.is_zero()))
        .collect();

    let d = &model.ample_reference().coords;
    let mut cur = e.clone();
    let mut sc = cur.apply(c)?;
    let mut trace = Vec::new();
    loop {
        let mut hit = None;
        for r in &orthogonal {
            if model.pair_coords(&sc, &r.coords)?.is_positive() {
                hit = Some(*r);
                break;
            }
        }
        let Some(root) = hit else { break };
        if trace.len() >= budget {
            return Err(Error::StepBudgetExceeded { steps: budget });
        }
        let pairing = model.pair_coords(&sc, &root.coords)?;
        cur.matrix = reflect_matrix_columns(model, &cur.matrix, &root.coords)?;
        sc = reflect_coords(model, &root.coords, &sc)?;
        trace.push(TraceStep { root: root.clone(), pairing, degree: model.pair_coords(&sc, d)? });
    }

    let sc = DivisorClass::new(basis, sc);
    let mut n = Int::zero();
    for r in model.cone_generators() {
        let lr = model.pair(&sl, r)?;
        if lr.is_positive() {
            let cr = model.pair(&sc, r)?;
            let need = num_integer::Integer::div_ceil(&cr, &lr);
            if need > n {
                n = need;
            }
        }
    }
    for _ in 0..=budget {
        let coords: Vec<Int> = sl.coords.iter().zip(&sc.coords).map(|(x, y)| &n * x - y).collect();
        let cand = DivisorClass::new(basis, coords);
        if is_nef(model, &cand)?.nef && is_big(model, &cand)? {
            return Ok(PairNefification { embedding: cur, trace, n_min: n });
        }
        n += 1;
    }
    Err(Error::StepBudgetExceeded { steps: budget })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::{build_model, Flavor};
    use crate::lattice::GramMatrix;
    use crate::{int, ints, Matrix};

    fn single(model: &ConeModel, v: &[i64]) -> Embedding {
        Embedding::from_columns(model.gram().clone(), &[ints(v)]).unwrap()
    }

    #[test]
    fn already_nef_is_untouched() {
        let m = build_model(Flavor::Odd, 5).unwrap();
        let e = single(&m, &[7, 3, -1, -1, -1, -1]);
        let (f, t) = nefify(&m, &e, &ints(&[1])).unwrap();
        assert!(t.is_empty());
        assert!(!t.negated);
        assert_eq!(f, e);
    }

    #[test]
    fn odd_four_step_replay() {
        let m = build_model(Flavor::Odd, 5).unwrap();
        let e = single(&m, &[5, 1, -2, 0, 0, 0]);
        let (f, t) = nefify(&m, &e, &ints(&[1])).unwrap();
        let roots: Vec<Vec<Int>> = t.steps.iter().map(|s| s.root.coords.clone()).collect();
        let p2 = ints(&[1, 0, -1, 0, 0, 0]);
        let e2 = ints(&[0, 0, 1, 0, 0, 0]);
        let e1 = ints(&[0, 1, 0, 0, 0, 0]);
        assert_eq!(roots, vec![p2.clone(), e2, p2, e1]);
        assert_eq!(f.matrix.column(0), ints(&[1, 0, 0, 0, 0, 0]));
        assert_eq!(m.gram().square(&f.matrix.column(0)).unwrap(), int(0));
    }

    #[test]
    fn even_single_step() {
        let m = build_model(Flavor::Even, 2).unwrap();
        let e = single(&m, &[3, -2, -2]);
        let (f, t) = nefify(&m, &e, &ints(&[1])).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.steps[0].root.coords, ints(&[1, -1, -1]));
        assert_eq!(f.matrix.column(0), ints(&[1, 0, 0]));
    }

    #[test]
    fn negative_degree_is_negated() {
        let m = build_model(Flavor::Odd, 3).unwrap();
        let e = single(&m, &[-2, -1, 0, 0]);
        let (f, t) = nefify(&m, &e, &ints(&[1])).unwrap();
        assert!(t.negated);
        assert_eq!(f.matrix.column(0), ints(&[2, 1, 0, 0]));
    }

    #[test]
    fn preconditions() {
        let m = build_model(Flavor::Odd, 3).unwrap();
        assert!(matches!(nefify(&m, &single(&m, &[0, 0, 0, 0]), &ints(&[1])), Err(Error::Precondition(_))));
        assert!(matches!(nefify(&m, &single(&m, &[0, 1, 0, 0]), &ints(&[1])), Err(Error::Precondition(_))));
        let other = build_model(Flavor::Odd, 4).unwrap();
        assert!(matches!(nefify(&other, &single(&m, &[1, 0, 0, 0]), &ints(&[1])), Err(Error::BasisMismatch(_))));
    }

    #[test]
    fn budget_is_enforced() {
        let m = build_model(Flavor::Odd, 5).unwrap();
        let e = single(&m, &[5, 1, -2, 0, 0, 0]);
        assert_eq!(nefify_with(&m, &e, &ints(&[1]), 2), Err(Error::StepBudgetExceeded { steps: 2 }));
    }

    #[test]
    fn pair_reflection_flips_sign() {
        let m = build_model(Flavor::Odd, 4).unwrap();
        let e = Embedding::from_columns(m.gram().clone(), &[ints(&[4, 2, -1, 0, 0]), ints(&[1, 0, 0, 0, 0])]).unwrap();
        let res = nefify_pair(&m, &e, &ints(&[1, 0]), &ints(&[0, 1])).unwrap();
        assert_eq!(res.trace[0].root, m.unit(1));
        assert_eq!(res.trace[0].pairing, int(1));
        let after_first = reflect_coords(&m, &m.unit(1).coords, &ints(&[1, 0, 0, 0, 0])).unwrap();
        assert_eq!(m.pair_coords(&after_first, &m.unit(1).coords).unwrap(), int(-1));
        assert_eq!(res.embedding.matrix.column(0), ints(&[4, 2, -1, 0, 0]));
        assert_eq!(res.embedding.preserves_gram().unwrap(), true);
        let sl = res.embedding.matrix.column(0);
        let sc = res.embedding.matrix.column(1);
        let n = &res.n_min;
        let w = DivisorClass::new(m.basis(), sl.iter().zip(&sc).map(|(x, y)| n * x - y).collect());
        assert!(is_nef(&m, &w).unwrap().nef && is_big(&m, &w).unwrap());
        let below = n - int(1);
        let w = DivisorClass::new(m.basis(), sl.iter().zip(&sc).map(|(x, y)| &below * x - y).collect());
        assert!(!(is_nef(&m, &w).unwrap().nef && is_big(&m, &w).unwrap()));
    }

    #[test]
    fn pair_with_empty_orthogonal_set() {
        let m = build_model(Flavor::Odd, 5).unwrap();
        let e = Embedding::from_columns(m.gram().clone(), &[ints(&[9, 4, -1, -1, -1, -1]), ints(&[0, 1, 0, 0, 0, 0])]).unwrap();
        let res = nefify_pair(&m, &e, &ints(&[1, 0]), &ints(&[0, 1])).unwrap();
        assert!(res.trace.is_empty());
        assert_eq!(res.embedding, e);
        assert_eq!(res.n_min, int(1));
    }

    #[test]
    fn pair_requires_big_nef() {
        let m = build_model(Flavor::Odd, 5).unwrap();
        let e = Embedding::new(
            GramMatrix::from_i64_rows(crate::lattice::BasisId::Free(1), &[&[0]]).unwrap(),
            m.gram().clone(),
            Matrix::from_columns(&[ints(&[4, 2, -1, -1, -1, -1])]).unwrap(),
        )
        .unwrap();
        assert!(matches!(nefify_pair(&m, &e, &ints(&[1]), &ints(&[1])), Err(Error::Precondition(_))));
    }
}
