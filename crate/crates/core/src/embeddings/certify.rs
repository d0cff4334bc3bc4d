use num_integer::Integer;
use num_traits::Signed;

use super::a3::a3_images;
use super::even::even_embedding;
use super::odd::odd_embedding;
use super::{nefify_with, transport, Certificate, EmbedConfig, ExtraCondition, Source};
use crate::cones::{build_model, Flavor};
use crate::error::{Error, Result};
use crate::lattice::{validate_rank2, Rank2Lattice};
use crate::{Int, Matrix};

use super::hypotheses::{verify_hypotheses_with, A3Witness};

/// Full pipeline for a rank-2 lattice and a class `L` with `L^2 > 0`:
/// embed, then move `σ(L)` into the nef cone.
///
/// Even determinant goes to `Σ_6`. Odd determinant uses the explicit
/// `Σ_5` construction when an A3 pair forms a basis, and `Σ_4` otherwise.
/// `σ(L).A >= 3` is recorded as an extra condition, which may fail, on the
/// `Σ_5` path and on the `Σ_4` path when an A2 witness exists.
pub fn certify(lat: &Rank2Lattice<Int>, l: &[Int]) -> Result<Certificate> {
    certify_with(lat, l, &EmbedConfig::default())
}

pub fn certify_with(lat: &Rank2Lattice<Int>, l: &[Int], cfg: &EmbedConfig) -> Result<Certificate> {
    validate_rank2(lat.d.clone(), lat.a.clone(), lat.b.clone())?;
    if l.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: l.len() });
    }
    let sq = lat.pair(l, l)?;
    if !sq.is_positive() {
        return Err(Error::Precondition(format!("L^2 = {sq} must be positive")));
    }
    let source = Source::Rank2(lat.clone());

    if lat.a.is_even() {
        let model = build_model(Flavor::Even, 6)?;
        let (e, mut notes) = even_embedding(lat, cfg)?;
        let (fin, trace) = nefify_with(&model, &e, l, cfg.step_budget)?;
        notes.insert(0, ("path".into(), "even".into()));
        return Certificate::assemble(source, &model, e, trace, fin, Some(l.to_vec()), vec![], notes);
    }

    let report = verify_hypotheses_with(lat, l, cfg)?;
    let mut notes = vec![
        ("a2".to_string(), report.a2.is_some().to_string()),
        ("a3".to_string(), report.a3.is_some().to_string()),
    ];
    if let Some((w, change)) = report.a3.as_ref().and_then(|w| a3_basis(lat, w)) {
        let a = lat.pair(&w.l1, &w.l1)? / 2;
        let b = lat.pair(&w.l1, &w.l2)?;
        if let Ok((l1, l2, branch)) = a3_images(&a, &b) {
            let model = build_model(Flavor::Odd, 5)?;
            let e = transport(lat.gram(), &model, &[l1, l2], &change)?;
            let (fin, trace) = nefify_with(&model, &e, l, cfg.step_budget)?;
            notes.insert(0, ("path".into(), "odd_a3".into()));
            notes.push(("b_mod_3".into(), branch.to_string()));
            let extras = vec![ExtraCondition::LDotAAtLeast3, ExtraCondition::LDotE5AtMost2];
            return Certificate::assemble(source, &model, e, trace, fin, Some(l.to_vec()), extras, notes);
        }
    }

    let model = build_model(Flavor::Odd, 4)?;
    let (e, more) = odd_embedding(lat, cfg)?;
    let (fin, trace) = nefify_with(&model, &e, l, cfg.step_budget)?;
    notes.insert(0, ("path".into(), "odd".into()));
    notes.extend(more);
    let extras = if report.a2.is_some() { vec![ExtraCondition::LDotAAtLeast3] } else { vec![] };
    Certificate::assemble(source, &model, e, trace, fin, Some(l.to_vec()), extras, notes)
}

/// The A3 pair as a change of basis, if it is one.
fn a3_basis<'w>(_lat: &Rank2Lattice<Int>, w: &'w A3Witness) -> Option<(&'w A3Witness, Matrix)> {
    let m = Matrix::from_columns(&[w.l1.clone(), w.l2.clone()]).ok()?;
    let det = m.determinant().ok()?;
    (det.abs() == Int::from(1)).then_some((w, m))
}
