//! The two reference lattices `Σ_r`, their `(-2)`-classes and nef cones.
//!
//! Even flavor: basis `A, E1, ..., Er` with Gram `diag(2, -2, ..., -2)`,
//! modelled on the double cover of a degree `9 - r` del Pezzo surface.
//! Odd flavor: the same basis with `A^2 = 0`, `A.E1 = 1` and `Ei^2 = -2`.
//!
//! All class lists are kept in lexicographic order of their coordinate
//! vectors; every emitted list uses that order.

mod zariski;

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{BasisId, Matrix as GenericMatrix};
use crate::{int, DivisorClass, GramMatrix, Int, Matrix};

pub use zariski::{zariski_decompose, ZariskiDecomposition};

/// Which of the two reference lattices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    Even,
    Odd,
}

impl Flavor {
    pub fn max_r(self) -> usize {
        match self {
            Flavor::Even => 8,
            Flavor::Odd => 5,
        }
    }

    pub fn min_r(self) -> usize {
        match self {
            Flavor::Even => 0,
            Flavor::Odd => 1,
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Even => "even",
            Flavor::Odd => "odd",
        })
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Flavor::Even),
            "odd" => Ok(Flavor::Odd),
            other => Err(Error::FlavorMismatch(format!("unknown flavor {other:?}"))),
        }
    }
}

/// A built reference lattice with its cached cone data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeModel {
    flavor: Flavor,
    r: usize,
    gram: GramMatrix,
    minus_two: Vec<DivisorClass>,
    generators: Vec<DivisorClass>,
    ample: DivisorClass,
}

/// Outcome of a nef test against the cone generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NefReport {
    pub nef: bool,
    /// First generator (canonical order) pairing negatively, with the pairing.
    pub failing: Option<(DivisorClass, Int)>,
    /// Smallest pairing over all generators; `None` if there are none.
    pub min_pairing: Option<Int>,
}

impl ConeModel {
    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.r + 1
    }

    pub fn basis(&self) -> BasisId {
        match self.flavor {
            Flavor::Even => BasisId::Even(self.r),
            Flavor::Odd => BasisId::Odd(self.r),
        }
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    /// The ample reference class `D`.
    pub fn ample_reference(&self) -> &DivisorClass {
        &self.ample
    }

    /// Classes whose non-negativity defines the nef cone. Equal to the
    /// `(-2)`-class list once `r >= 2`.
    pub fn cone_generators(&self) -> &[DivisorClass] {
        &self.generators
    }

    pub fn class(&self, coords: Vec<Int>) -> Result<DivisorClass> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: coords.len() });
        }
        Ok(DivisorClass::new(self.basis(), coords))
    }

    pub fn class_i64(&self, coords: &[i64]) -> Result<DivisorClass> {
        self.class(crate::ints(coords))
    }

    /// Basis vector: index 0 is `A`, index `i` is `Ei`.
    pub fn unit(&self, i: usize) -> DivisorClass {
        let mut c = vec![Int::zero(); self.dim()];
        c[i] = Int::one();
        DivisorClass::new(self.basis(), c)
    }

    pub fn pair(&self, x: &DivisorClass, y: &DivisorClass) -> Result<Int> {
        self.check(x)?;
        self.check(y)?;
        self.gram.pair(&x.coords, &y.coords)
    }

    pub fn pair_coords(&self, x: &[Int], y: &[Int]) -> Result<Int> {
        self.gram.pair(x, y)
    }

    pub fn square(&self, x: &DivisorClass) -> Result<Int> {
        self.pair(x, x)
    }

    pub fn check(&self, x: &DivisorClass) -> Result<()> {
        if x.basis != self.basis() {
            return Err(Error::BasisMismatch(format!("class in {} used with model {}", x.basis, self.basis())));
        }
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        Ok(())
    }
}

/// Builds `Σ_r` of the given flavor with its class list and ample class.
pub fn build_model(flavor: Flavor, r: usize) -> Result<ConeModel> {
    if r < flavor.min_r() || r > flavor.max_r() {
        return Err(Error::OutOfRange(format!(
            "{flavor} model needs {} <= r <= {}, got {r}",
            flavor.min_r(),
            flavor.max_r()
        )));
    }
    let basis = match flavor {
        Flavor::Even => BasisId::Even(r),
        Flavor::Odd => BasisId::Odd(r),
    };
    let gram = GramMatrix::new(basis, model_gram(flavor, r))?;
    let minus_two = enumerate_minus_two(flavor, r);
    let generators = match (flavor, r) {
        (Flavor::Even, 0) => vec![unit_class(basis, r, 0)],
        (Flavor::Even, 1) => {
            let mut g = minus_two.clone();
            g.push(DivisorClass::new(basis, vec![int(1), int(-1)]));
            g.sort();
            g
        }
        _ => minus_two.clone(),
    };
    let ample = match flavor {
        Flavor::Even if r == 0 => unit_class(basis, r, 0),
        Flavor::Even => {
            let mut c = vec![int(-1); r + 1];
            c[0] = int(3);
            DivisorClass::new(basis, c)
        }
        Flavor::Odd => {
            let mut c = vec![int(-1); r + 1];
            c[0] = int(9);
            c[1] = int(4);
            DivisorClass::new(basis, c)
        }
    };
    let model = ConeModel { flavor, r, gram, minus_two, generators, ample };
    verify_model(&model)?;
    Ok(model)
}

fn unit_class(basis: BasisId, r: usize, i: usize) -> DivisorClass {
    let mut c = vec![Int::zero(); r + 1];
    c[i] = Int::one();
    DivisorClass::new(basis, c)
}

/// Gram matrix of `Σ_r`.
pub fn model_gram(flavor: Flavor, r: usize) -> Matrix {
    let mut m = Matrix::zeros(r + 1, r + 1);
    for i in 1..=r {
        m[(i, i)] = int(-2);
    }
    match flavor {
        Flavor::Even => m[(0, 0)] = int(2),
        Flavor::Odd => {
            if r >= 1 {
                m[(0, 1)] = int(1);
                m[(1, 0)] = int(1);
            }
        }
    }
    m
}

fn verify_model(m: &ConeModel) -> Result<()> {
    for c in &m.minus_two {
        if m.square(c)? != int(-2) {
            return Err(Error::Internal(format!("listed class {c} is not a (-2)-class")));
        }
    }
    if !m.square(&m.ample)?.is_positive() {
        return Err(Error::Internal("ample reference has non-positive square".into()));
    }
    for c in &m.generators {
        if !m.pair(&m.ample, c)?.is_positive() {
            return Err(Error::Internal(format!("ample reference does not pair positively with {c}")));
        }
    }
    Ok(())
}

/// The canonical `(-2)`-class list of the model.
pub fn minus_two_classes(model: &ConeModel) -> &[DivisorClass] {
    &model.minus_two
}

impl ConeModel {
    pub fn minus_two_classes(&self) -> &[DivisorClass] {
        &self.minus_two
    }
}

fn enumerate_minus_two(flavor: Flavor, r: usize) -> Vec<DivisorClass> {
    let basis = match flavor {
        Flavor::Even => BasisId::Even(r),
        Flavor::Odd => BasisId::Odd(r),
    };
    let mut out: Vec<DivisorClass> = match flavor {
        Flavor::Even => del_pezzo_lines(r)
            .into_iter()
            .map(|(d, ms)| {
                let mut c = Vec::with_capacity(r + 1);
                c.push(int(d));
                c.extend(ms.into_iter().map(|m| int(-m)));
                DivisorClass::new(basis, c)
            })
            .collect(),
        Flavor::Odd => {
            let mut v: Vec<DivisorClass> = (1..=r).map(|i| unit_class(basis, r, i)).collect();
            for j in 2..=r {
                let mut c = vec![Int::zero(); r + 1];
                c[0] = int(1);
                c[j] = int(-1);
                v.push(DivisorClass::new(basis, c));
            }
            v
        }
    };
    out.sort();
    out.dedup();
    out
}

/// Integer solutions `(d; m1..mr)` of `d^2 - Σ m^2 = -1`, `3d - Σ m = 1`
/// with `|d| <= 3 + r` and `|mi| <= 3`: the `(-1)`-classes `dH - Σ mi ei`
/// of the blow-up of the plane in `r` points.
fn del_pezzo_lines(r: usize) -> Vec<(i64, Vec<i64>)> {
    fn fill(k: usize, sum: i64, sq: i64, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if k == 0 {
            if sum == 0 && sq == 0 {
                out.push(acc.clone());
            }
            return;
        }
        // Cauchy-Schwarz: the remaining k entries need sum^2 <= k * sq
        if sq < 0 || sum * sum > k as i64 * sq {
            return;
        }
        for m in -3i64..=3 {
            if m * m > sq {
                continue;
            }
            acc.push(m);
            fill(k - 1, sum - m, sq - m * m, acc, out);
            acc.pop();
        }
    }
    let bound = 3 + r as i64;
    let mut out = Vec::new();
    for d in -bound..=bound {
        let mut sols = Vec::new();
        fill(r, 3 * d - 1, d * d + 1, &mut Vec::with_capacity(r), &mut sols);
        out.extend(sols.into_iter().map(|ms| (d, ms)));
    }
    out
}

/// Tests `L.G >= 0` against every cone generator.
pub fn is_nef(model: &ConeModel, l: &DivisorClass) -> Result<NefReport> {
    model.check(l)?;
    let mut failing = None;
    let mut min_pairing: Option<Int> = None;
    for g in &model.generators {
        let p = model.pair(l, g)?;
        if p.is_negative() && failing.is_none() {
            failing = Some((g.clone(), p.clone()));
        }
        if min_pairing.as_ref().is_none_or(|m| &p < m) {
            min_pairing = Some(p);
        }
    }
    Ok(NefReport { nef: failing.is_none(), failing, min_pairing })
}

/// The chain `d >= 2 m1 >= 4 mj >= 0` for `L = dA + m1 E1 - Σ mj Ej`.
pub fn nef_inequality_odd(model: &ConeModel, l: &DivisorClass) -> Result<bool> {
    if model.flavor != Flavor::Odd {
        return Err(Error::FlavorMismatch("nef inequality chain needs the odd model".into()));
    }
    if !(2..=5).contains(&model.r) {
        return Err(Error::OutOfRange(format!("nef inequality chain needs 2 <= r <= 5, got {}", model.r)));
    }
    model.check(l)?;
    let d = &l.coords[0];
    let m1 = &l.coords[1];
    let two_m1 = int(2) * m1;
    if d < &two_m1 {
        return Ok(false);
    }
    Ok(l.coords[2..].iter().all(|c| {
        let mj = -c;
        !mj.is_negative() && two_m1 >= int(4) * &mj
    }))
}

/// `L^2 > 0` and `L.D > 0`.
pub fn is_big(model: &ConeModel, l: &DivisorClass) -> Result<bool> {
    Ok(model.square(l)?.is_positive() && model.pair(l, &model.ample)?.is_positive())
}

/// Matrix of the Cremona isometry `σ_{ijk}` of the even model; columns are
/// the images of `A, E1, ..., Er`.
pub fn cremona_matrix(model: &ConeModel, ijk: (usize, usize, usize)) -> Result<Matrix> {
    if model.flavor != Flavor::Even {
        return Err(Error::FlavorMismatch("Cremona maps act on the even model".into()));
    }
    let (i, j, k) = ijk;
    if model.r < 3 {
        return Err(Error::OutOfRange(format!("Cremona maps need r >= 3, got {}", model.r)));
    }
    if !(1 <= i && i < j && j < k && k <= model.r) {
        return Err(Error::InvalidIndices(format!("need 1 <= i < j < k <= {}, got ({i},{j},{k})", model.r)));
    }
    let mut m = GenericMatrix::identity(model.dim());
    let triple = [i, j, k];
    m[(0, 0)] = int(2);
    for &t in &triple {
        m[(t, 0)] = int(-1);
    }
    for &t in &triple {
        m[(t, t)] = Int::zero();
        m[(0, t)] = int(1);
        for &u in &triple {
            if u != t {
                m[(u, t)] = int(-1);
            }
        }
    }
    Ok(m)
}

pub fn cremona(model: &ConeModel, ijk: (usize, usize, usize), l: &DivisorClass) -> Result<DivisorClass> {
    model.check(l)?;
    let m = cremona_matrix(model, ijk)?;
    Ok(DivisorClass::new(model.basis(), m.mul_vec(&l.coords)?))
}

/// Matrix of `F -> F + (F.R) R`.
pub fn reflection_matrix(model: &ConeModel, root: &DivisorClass) -> Result<Matrix> {
    check_root(model, root)?;
    let n = model.dim();
    let gr = model.gram.matrix().mul_vec(&root.coords)?;
    let mut m = GenericMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = &m[(i, j)] + &root.coords[i] * &gr[j];
        }
    }
    Ok(m)
}

/// Reflection `F + (F.R) R` in a `(-2)`-class `R`.
pub fn reflect(model: &ConeModel, root: &DivisorClass, f: &DivisorClass) -> Result<DivisorClass> {
    check_root(model, root)?;
    model.check(f)?;
    Ok(DivisorClass::new(model.basis(), reflect_coords(model, &root.coords, &f.coords)?))
}

/// Coordinates of `f + (f.R) R`.
pub fn reflect_coords(model: &ConeModel, root: &[Int], f: &[Int]) -> Result<Vec<Int>> {
    let t = model.pair_coords(f, root)?;
    Ok(f.iter().zip(root).map(|(x, r)| x + &t * r).collect())
}

fn check_root(model: &ConeModel, root: &DivisorClass) -> Result<()> {
    model.check(root)?;
    let sq = model.square(root)?;
    if sq != int(-2) {
        return Err(Error::NotMinusTwo(sq));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(m: &ConeModel, c: &[i64]) -> DivisorClass {
        m.class_i64(c).unwrap()
    }

    #[test]
    fn odd_five_has_nine_classes() {
        let m = build_model(Flavor::Odd, 5).unwrap();
        assert_eq!(m.minus_two_classes().len(), 9);
    }

    #[test]
    fn odd_two_classes() {
        let m = build_model(Flavor::Odd, 2).unwrap();
        let expected = vec![class(&m, &[0, 0, 1]), class(&m, &[0, 1, 0]), class(&m, &[1, 0, -1])];
        assert_eq!(m.minus_two_classes(), expected.as_slice());
    }

    #[test]
    fn even_two_classes() {
        let m = build_model(Flavor::Even, 2).unwrap();
        let expected = vec![class(&m, &[0, 0, 1]), class(&m, &[0, 1, 0]), class(&m, &[1, -1, -1])];
        assert_eq!(m.minus_two_classes(), expected.as_slice());
    }

    #[test]
    fn even_counts() {
        for (r, n) in [(2, 3), (3, 6), (4, 10), (5, 16), (6, 27), (7, 56), (8, 240)] {
            assert_eq!(build_model(Flavor::Even, r).unwrap().minus_two_classes().len(), n, "r={r}");
        }
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(build_model(Flavor::Even, 9), Err(Error::OutOfRange(_))));
        assert!(matches!(build_model(Flavor::Odd, 6), Err(Error::OutOfRange(_))));
        assert!(matches!(build_model(Flavor::Odd, 0), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn small_r_generators() {
        let m = build_model(Flavor::Even, 0).unwrap();
        assert!(m.minus_two_classes().is_empty());
        assert_eq!(m.ample_reference(), &class(&m, &[1]));
        let m = build_model(Flavor::Even, 1).unwrap();
        assert_eq!(m.minus_two_classes(), &[class(&m, &[0, 1])]);
        assert_eq!(m.cone_generators(), &[class(&m, &[0, 1]), class(&m, &[1, -1])]);
        let m = build_model(Flavor::Odd, 1).unwrap();
        assert_eq!(m.cone_generators(), &[class(&m, &[0, 1])]);
    }

    #[test]
    fn ample_references() {
        let m = build_model(Flavor::Even, 6).unwrap();
        assert_eq!(m.ample_reference(), &class(&m, &[3, -1, -1, -1, -1, -1, -1]));
        let pairings: Vec<Int> = m.minus_two_classes().iter().map(|c| m.pair(m.ample_reference(), c).unwrap()).collect();
        // D pulls back the anticanonical class, so D.R = 2 (-K.e) = 2 for every line
        assert!(pairings.iter().all(|p| *p == int(2)));
        let m = build_model(Flavor::Odd, 5).unwrap();
        assert_eq!(m.ample_reference(), &class(&m, &[9, 4, -1, -1, -1, -1]));
        assert_eq!(m.square(m.ample_reference()).unwrap(), int(32));
    }

    #[test]
    fn nef_examples() {
        let m5 = build_model(Flavor::Odd, 5).unwrap();
        let f = class(&m5, &[4, 2, -1, -1, -1, -1]);
        assert!(is_nef(&m5, &f).unwrap().nef);
        assert_eq!(m5.square(&f).unwrap(), int(0));

        let m4 = build_model(Flavor::Odd, 4).unwrap();
        let rep = is_nef(&m4, &class(&m4, &[1, 1, 0, 0, 0])).unwrap();
        assert!(!rep.nef);
        assert_eq!(rep.failing, Some((class(&m4, &[0, 1, 0, 0, 0]), int(-1))));

        for (fl, r) in [(Flavor::Even, 0), (Flavor::Even, 5), (Flavor::Odd, 3)] {
            let m = build_model(fl, r).unwrap();
            assert!(is_nef(&m, &DivisorClass::zero(m.basis(), m.dim())).unwrap().nef);
        }
    }

    #[test]
    fn nef_chain_examples() {
        let m5 = build_model(Flavor::Odd, 5).unwrap();
        assert!(nef_inequality_odd(&m5, &class(&m5, &[7, 3, -1, -1, -1, -1])).unwrap());
        assert!(nef_inequality_odd(&m5, &class(&m5, &[0, 0, 0, 0, 0, 0])).unwrap());
        let m4 = build_model(Flavor::Odd, 4).unwrap();
        assert!(!nef_inequality_odd(&m4, &class(&m4, &[2, 1, -1, 0, 0])).unwrap());
        let e = build_model(Flavor::Even, 4).unwrap();
        assert!(matches!(nef_inequality_odd(&e, &class(&e, &[0; 5])), Err(Error::FlavorMismatch(_))));
    }

    #[test]
    fn big_examples() {
        let m5 = build_model(Flavor::Odd, 5).unwrap();
        let l = class(&m5, &[7, 3, -1, -1, -1, -1]);
        assert_eq!(m5.square(&l).unwrap(), int(16));
        assert!(is_big(&m5, &l).unwrap());
        assert!(!is_big(&m5, &class(&m5, &[4, 2, -1, -1, -1, -1])).unwrap());
        assert!(!is_big(&m5, &class(&m5, &[0; 6])).unwrap());
    }

    #[test]
    fn cremona_examples() {
        let m = build_model(Flavor::Even, 5).unwrap();
        let a = m.unit(0);
        assert_eq!(cremona(&m, (1, 2, 3), &a).unwrap(), class(&m, &[2, -1, -1, -1, 0, 0]));
        assert_eq!(cremona(&m, (1, 2, 3), &m.unit(4)).unwrap(), m.unit(4));
        assert_eq!(cremona(&m, (1, 2, 3), &m.unit(1)).unwrap(), class(&m, &[1, 0, -1, -1, 0, 0]));
        let l = class(&m, &[7, -3, 2, 0, -1, 5]);
        let once = cremona(&m, (2, 4, 5), &l).unwrap();
        assert_eq!(cremona(&m, (2, 4, 5), &once).unwrap(), l);
        assert!(matches!(cremona(&m, (1, 1, 3), &a), Err(Error::InvalidIndices(_))));
        assert!(matches!(cremona(&m, (1, 2, 6), &a), Err(Error::InvalidIndices(_))));
        let odd = build_model(Flavor::Odd, 4).unwrap();
        assert!(matches!(cremona(&odd, (1, 2, 3), &odd.unit(0)), Err(Error::FlavorMismatch(_))));
    }

    #[test]
    fn reflect_examples() {
        let m = build_model(Flavor::Odd, 5).unwrap();
        let f = class(&m, &[5, 1, -2, 0, 0, 0]);
        let p2 = class(&m, &[1, 0, -1, 0, 0, 0]);
        assert_eq!(m.pair(&f, &p2).unwrap(), int(-3));
        let g = reflect(&m, &p2, &f).unwrap();
        assert_eq!(g, class(&m, &[2, 1, 1, 0, 0, 0]));
        assert_eq!(reflect(&m, &p2, &g).unwrap(), f);

        // fixed hyperplane
        let nef = class(&m, &[4, 2, -1, -1, -1, -1]);
        let e1 = m.unit(1);
        assert_eq!(m.pair(&nef, &e1).unwrap(), int(0));
        assert_eq!(reflect(&m, &e1, &nef).unwrap(), nef);

        assert!(matches!(reflect(&m, &m.unit(0), &f), Err(Error::NotMinusTwo(_))));
    }

    #[test]
    fn isometries() {
        let m = build_model(Flavor::Even, 6).unwrap();
        let c = cremona_matrix(&m, (1, 3, 6)).unwrap();
        assert!(m.gram().is_isometry(&c).unwrap());
        for root in m.minus_two_classes() {
            assert!(m.gram().is_isometry(&reflection_matrix(&m, root).unwrap()).unwrap());
        }
    }
}
