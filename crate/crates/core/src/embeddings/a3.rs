use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{nefify, Certificate, ExtraCondition, Source};
use crate::cones::{build_model, Flavor};
use crate::error::{Error, Result};
use crate::lattice::Rank2Lattice;
use crate::{int, ints, Embedding, Int};

/// Images of `L1, L2` in the odd `Σ_5` for `L1^2 = 2a`, `L1.L2 = b`,
/// `L2^2 = -2`, together with the residue branch `b mod 3`.
pub fn a3_images(a: &Int, b: &Int) -> Result<(Vec<Int>, Vec<Int>, u8)> {
    if *a < int(1) || *b < int(1) {
        return Err(Error::Hypothesis(format!("need a, b >= 1, got a = {a}, b = {b}")));
    }
    if a + b < int(9) {
        return Err(Error::Hypothesis(format!("need a + b >= 9, got {}", a + b)));
    }
    let three = int(3);
    let branch = b.mod_floor(&three).to_u8().expect("residue");
    let (delta, offset, e2, l2_shift, l2_e2) = match branch {
        0 => (int(3) - a.mod_floor(&three), 9, 0, 0, -1),
        1 => (int(3) - (a + int(1)).mod_floor(&three), 13, -2, 4, 1),
        _ => (int(3) - (a + int(1)).mod_floor(&three), 10, -1, 2, 1),
    };
    let top = a + int(offset) + &delta;
    let shifted = b - int(l2_shift);
    if !top.is_multiple_of(&three) || !shifted.is_multiple_of(&three) {
        return Err(Error::Internal(format!("branch {branch} coefficient is not integral")));
    }
    let delta = delta.to_usize().expect("delta in 1..=3");
    let mut l1 = vec![top / &three, int(3), int(e2), int(0), int(0), int(0)];
    for c in l1.iter_mut().skip(3).take(delta) {
        *c = int(-1);
    }
    let mut l2 = ints(&[0, 0, l2_e2, 0, 0, 0]);
    l2[0] = shifted / three;
    Ok((l1, l2, branch))
}

/// Certificate for the explicit construction, with `L = L1 + L2`.
pub fn embed_a3_explicit(a: &Int, b: &Int) -> Result<Certificate> {
    let (l1, l2, branch) = a3_images(a, b)?;
    let model = build_model(Flavor::Odd, 5)?;
    let lat = Rank2Lattice { d: a.clone(), a: b.clone(), b: int(-1) };
    let e = Embedding::new(lat.gram(), model.gram().clone(), crate::Matrix::from_columns(&[l1, l2])?)?;
    let l = ints(&[1, 1]);
    let (fin, trace) = nefify(&model, &e, &l)?;
    Certificate::assemble(
        Source::Rank2(lat),
        &model,
        e,
        trace,
        fin,
        Some(l),
        vec![ExtraCondition::LDotAAtLeast3, ExtraCondition::LDotE5AtMost2],
        vec![("b_mod_3".to_string(), branch.to_string())],
    )
}
