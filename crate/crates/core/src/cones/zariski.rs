use num_traits::{Signed, Zero};

use super::ConeModel;
use crate::error::{Error, Result};
use crate::lattice::{signature, Matrix as GenericMatrix};
use crate::{DivisorClass, GramMatrix, Rat, RationalClass};

/// `L = P + N` with `P` nef, `N` a positive rational combination of
/// `(-2)`-classes with negative definite Gram matrix, and `P.N = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZariskiDecomposition {
    pub positive: RationalClass,
    pub negative: RationalClass,
    /// Support classes in canonical order with their coefficients in `N`.
    pub support: Vec<(DivisorClass, Rat)>,
}

impl ZariskiDecomposition {
    /// Named checks, each recomputed from the stored fields.
    pub fn recheck(&self, model: &ConeModel, l: &DivisorClass) -> Result<Vec<(&'static str, bool)>> {
        let g = model.gram();
        let n_from_support = combine(model, &self.support);
        let sum_ok = self
            .positive
            .coords
            .iter()
            .zip(&self.negative.coords)
            .zip(&l.coords)
            .all(|((p, n), x)| p + n == Rat::from_integer(x.clone()));
        let p_nef = model.cone_generators().iter().all(|c| {
            let cr = RationalClass::from_integral(c);
            g.pair_rational(&self.positive.coords, &cr.coords).map(|v| !v.is_negative()).unwrap_or(false)
        });
        let pn = g.pair_rational(&self.positive.coords, &self.negative.coords)?;
        let support_classes: Vec<&DivisorClass> = self.support.iter().map(|(c, _)| c).collect();
        let neg_def = support_gram(model, &support_classes)
            .map(|s| s.dim() == 0 || signature(&s).is_negative_definite())
            .unwrap_or(false);
        let coeffs = self.support.iter().all(|(_, c)| c.is_positive());
        let orthogonal = self.support.iter().all(|(c, _)| {
            let cr = RationalClass::from_integral(c);
            g.pair_rational(&self.positive.coords, &cr.coords).map(|v| v.is_zero()).unwrap_or(false)
        });
        Ok(vec![
            ("sum_exact", sum_ok),
            ("negative_part_matches_support", n_from_support == self.negative.coords),
            ("positive_part_nef", p_nef),
            ("pn_zero", pn.is_zero()),
            ("support_positive_on_orthogonal", orthogonal),
            ("support_negative_definite", neg_def),
            ("coefficients_positive", coeffs),
        ])
    }
}

fn combine(model: &ConeModel, support: &[(DivisorClass, Rat)]) -> Vec<Rat> {
    let mut n = vec![Rat::zero(); model.dim()];
    for (c, coeff) in support {
        for (acc, x) in n.iter_mut().zip(&c.coords) {
            *acc += coeff * Rat::from_integer(x.clone());
        }
    }
    n
}

fn support_gram(model: &ConeModel, classes: &[&DivisorClass]) -> Result<GramMatrix> {
    let k = classes.len();
    let mut m = GenericMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            m[(i, j)] = model.pair(classes[i], classes[j])?;
        }
    }
    GramMatrix::free(m)
}

/// Zariski decomposition by monotone growth of the negative support.
///
/// Each round adds every `(-2)`-class meeting the current `P` negatively and
/// re-solves `(L - N).R = 0` over the enlarged support.
pub fn zariski_decompose(model: &ConeModel, l: &DivisorClass) -> Result<ZariskiDecomposition> {
    model.check(l)?;
    let ld = model.pair(l, model.ample_reference())?;
    if !ld.is_positive() {
        return Err(Error::Precondition(format!("L.D = {ld} must be positive")));
    }
    let g = model.gram();
    let classes = model.minus_two_classes();
    let lr = RationalClass::from_integral(l);
    let mut support: Vec<usize> = Vec::new();
    let mut coeffs: Vec<Rat> = Vec::new();
    let mut p = lr.coords.clone();

    loop {
        let new: Vec<usize> = (0..classes.len())
            .filter(|i| !support.contains(i))
            .filter(|&i| {
                let c = RationalClass::from_integral(&classes[i]);
                g.pair_rational(&p, &c.coords).map(|v| v.is_negative()).unwrap_or(false)
            })
            .collect();
        if new.is_empty() {
            break;
        }
        support.extend(new);
        support.sort_unstable();
        let members: Vec<&DivisorClass> = support.iter().map(|&i| &classes[i]).collect();
        let sg = support_gram(model, &members)?;
        if !signature(&sg).is_negative_definite() {
            return Err(Error::SupportNotNegativeDefinite);
        }
        let rhs: Vec<Rat> = members.iter().map(|c| Ok(Rat::from_integer(model.pair(l, c)?))).collect::<Result<_>>()?;
        coeffs = solve(sg.matrix(), rhs)?;
        if let Some(bad) = coeffs.iter().position(|c| !c.is_positive()) {
            return Err(Error::NotPseudoEffective(format!(
                "coefficient {} of {} in the negative part is not positive",
                coeffs[bad], members[bad]
            )));
        }
        let pairs: Vec<(DivisorClass, Rat)> = members.iter().map(|c| (*c).clone()).zip(coeffs.iter().cloned()).collect();
        let n = combine(model, &pairs);
        p = lr.coords.iter().zip(&n).map(|(x, y)| x - y).collect();
    }

    // generators that are not (-2)-classes can only be tested, not absorbed
    for c in model.cone_generators() {
        let cr = RationalClass::from_integral(c);
        if g.pair_rational(&p, &cr.coords)?.is_negative() {
            return Err(Error::NotPseudoEffective(format!("positive part meets {c} negatively")));
        }
    }

    let pairs: Vec<(DivisorClass, Rat)> = support.iter().map(|&i| classes[i].clone()).zip(coeffs).collect();
    let negative = combine(model, &pairs);
    Ok(ZariskiDecomposition {
        positive: RationalClass { basis: model.basis(), coords: p },
        negative: RationalClass { basis: model.basis(), coords: negative },
        support: pairs,
    })
}

/// Solves `G c = rhs` for a nonsingular integer `G` by rational elimination.
fn solve(g: &crate::Matrix, rhs: Vec<Rat>) -> Result<Vec<Rat>> {
    let n = g.rows();
    let mut a: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rat> = (0..n).map(|j| Rat::from_integer(g[(i, j)].clone())).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero()).ok_or(Error::SupportNotNegativeDefinite)?;
        a.swap(k, p);
        let pivot = a[k][k].clone();
        for v in a[k].iter_mut() {
            *v /= &pivot;
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in k..=n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n].clone()).collect())
}
