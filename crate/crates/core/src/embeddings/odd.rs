use num_integer::Integer;
use num_traits::{One, Signed};

use super::even::fmt_list;
use super::{transport, Certificate, EmbedConfig, ReflectionTrace, Source};
use crate::cones::{build_model, Flavor};
use crate::error::{Error, Result};
use crate::lattice::{primitivity, reduce_rank2_basis, Rank2Lattice};
use crate::squares::{is_three_square_excluded, three_squares_with};
use crate::{int, Embedding, Int, Matrix};

pub fn embed_odd(lat: &Rank2Lattice<Int>) -> Result<Certificate> {
    embed_odd_with(lat, &EmbedConfig::default())
}

/// Primitive embedding of an odd-determinant lattice into the odd `Σ_4`.
pub fn embed_odd_with(lat: &Rank2Lattice<Int>, cfg: &EmbedConfig) -> Result<Certificate> {
    let model = build_model(Flavor::Odd, 4)?;
    let (e, notes) = odd_embedding(lat, cfg)?;
    Certificate::assemble(Source::Rank2(lat.clone()), &model, e.clone(), ReflectionTrace::default(), e, None, vec![], notes)
}

/// In the reduced basis write `F1^2 = 2a`, `F1.F2 = m` (odd), `F2^2 = 2b`.
/// For the first `m1 >= 1` with `n = (m - b m1) m1 - a > 0` a sum of three
/// squares `m2^2 + m3^2 + m4^2`, send
/// `F1 -> (m - b m1 + m1) A + m1 E1 - Σ mi Ei` and `F2 -> (b + 1) A + E1`.
pub(crate) fn odd_embedding(lat: &Rank2Lattice<Int>, cfg: &EmbedConfig) -> Result<(Embedding, Vec<(String, String)>)> {
    if lat.a.is_even() {
        return Err(Error::ParityMismatch(format!("odd construction needs a odd, got {}", lat.a)));
    }
    let model = build_model(Flavor::Odd, 4)?;
    let red = reduce_rank2_basis(lat.gram().matrix())?;
    let (p, m, s) = red.entries();
    let (a, b): (Int, Int) = (&p / int(2), &s / int(2));

    let mut m1 = Int::one();
    for _ in 0..cfg.m1_bound {
        let k = &m - &b * &m1;
        let n = &k * &m1 - &a;
        if n.is_positive() && is_three_square_excluded(&n).is_none() {
            let w = three_squares_with(&n, cfg.squares)?;
            let mut f1 = vec![&k + &m1, m1.clone()];
            f1.extend(w.parts.iter().map(|x| -x));
            let mut f2 = vec![&b + Int::one(), Int::one()];
            f2.extend(std::iter::repeat_n(Int::from(0), 3));
            let cols = vec![f1, f2];
            if primitivity(&Matrix::from_columns(&cols)?)?.primitive {
                let e = transport(lat.gram(), &model, &cols, &red.change)?;
                let notes = vec![
                    ("reduced_gram".to_string(), format!("[{p},{m};{m},{s}]")),
                    ("m1".to_string(), m1.to_string()),
                    ("three_squares".to_string(), fmt_list(&w.parts)),
                ];
                return Ok((e, notes));
            }
        }
        m1 += 1;
    }
    Err(Error::SearchExhausted(format!("no m1 <= {} works", cfg.m1_bound)))
}
