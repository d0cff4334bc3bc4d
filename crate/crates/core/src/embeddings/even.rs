use num_integer::Integer;
use num_traits::{One, Zero};

use super::{transport, Certificate, EmbedConfig, ReflectionTrace, Source};
use crate::cones::{build_model, Flavor};
use crate::error::{Error, Result};
use crate::lattice::{primitivity, reduce_rank2_basis, Rank2Lattice};
use crate::squares::{all_five_coprime_squares, five_coprime_squares_with};
use crate::{int, Embedding, Int};

pub fn embed_even(lat: &Rank2Lattice<Int>) -> Result<Certificate> {
    embed_even_with(lat, &EmbedConfig::default())
}

/// Primitive embedding of an even-determinant lattice into the even `Σ_6`.
pub fn embed_even_with(lat: &Rank2Lattice<Int>, cfg: &EmbedConfig) -> Result<Certificate> {
    let model = build_model(Flavor::Even, 6)?;
    let (e, notes) = even_embedding(lat, cfg)?;
    Certificate::assemble(Source::Rank2(lat.clone()), &model, e.clone(), ReflectionTrace::default(), e, None, vec![], notes)
}

/// In the reduced basis write `F1^2 = 2a`, `F1.F2 = 2m`, `F2^2 = 2b` and
/// `-b = Σ mi^2` with coprime `mi`. The image of `F1` is built from the
/// isotropic class `A - E6`; the parity of `a` decides whether `E1` is used
/// to absorb the odd part.
pub(crate) fn even_embedding(lat: &Rank2Lattice<Int>, cfg: &EmbedConfig) -> Result<(Embedding, Vec<(String, String)>)> {
    if !lat.a.is_even() {
        return Err(Error::ParityMismatch(format!("even construction needs a even, got {}", lat.a)));
    }
    let model = build_model(Flavor::Even, 6)?;
    let red = reduce_rank2_basis(lat.gram().matrix())?;
    let (p, q, s) = red.entries();
    let (a, m, b): (Int, Int, Int) = (&p / int(2), &q / int(2), &s / int(2));
    let n = -&b;

    let first = five_coprime_squares_with(&n, cfg.squares)?.parts;
    let mut tried_all = false;
    let mut candidates = vec![first];
    loop {
        for parts in &candidates {
            for idx in 0..parts.len() {
                if idx > 0 && parts[idx] == parts[idx - 1] {
                    continue;
                }
                for sign in [int(1), int(-1)] {
                    if sign < Int::zero() && parts[idx].is_zero() {
                        continue;
                    }
                    let mut ms = vec![&parts[idx] * &sign];
                    ms.extend(parts.iter().enumerate().filter(|(i, _)| *i != idx).map(|(_, v)| v.clone()));
                    let cols = columns(&a, &m, &ms);
                    if primitivity(&crate::Matrix::from_columns(&cols)?)?.primitive {
                        let e = transport(lat.gram(), &model, &cols, &red.change)?;
                        let notes = vec![
                            ("reduced_gram".to_string(), format!("[{p},{q};{q},{s}]")),
                            ("five_squares".to_string(), fmt_list(&ms)),
                            ("branch".to_string(), if a.is_odd() { "a_odd" } else { "a_even" }.to_string()),
                        ];
                        return Ok((e, notes));
                    }
                }
            }
        }
        if tried_all {
            break;
        }
        candidates = all_five_coprime_squares(&n, cfg.squares)?;
        tried_all = true;
    }
    Err(Error::SearchExhausted(format!("no five-square witness of {n} gives a primitive embedding")))
}

fn columns(a: &Int, m: &Int, ms: &[Int]) -> Vec<Vec<Int>> {
    let mut f1 = vec![Int::zero(); 7];
    let mut f2 = vec![Int::zero(); 7];
    if a.is_odd() {
        let k = (a + Int::one()) / int(2);
        f1[0] = k.clone();
        f1[6] = Int::one() - k;
        f2[0] = m.clone();
        f2[6] = -m;
    } else {
        let k = (a + int(2)) / int(2);
        f1[0] = k.clone();
        f1[1] = int(-1);
        f1[6] = Int::one() - k;
        let t = m + &ms[0];
        f2[0] = t.clone();
        f2[6] = -t;
    }
    for (i, mi) in ms.iter().enumerate() {
        f2[i + 1] = -mi;
    }
    vec![f1, f2]
}

pub(crate) fn fmt_list(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ints, lattice::validate_rank2};

    fn lat(d: i64, a: i64, b: i64) -> Rank2Lattice<Int> {
        validate_rank2(int(d), int(a), int(b)).unwrap()
    }

    #[test]
    fn odd_half_branch() {
        let c = embed_even(&lat(1, 2, -1)).unwrap();
        assert_eq!(c.embedding.matrix.column(0), ints(&[1, 0, 0, 0, 0, 0, 0]));
        assert_eq!(c.embedding.matrix.column(1), ints(&[1, -1, 0, 0, 0, 0, -1]));
        assert!(c.all_pass());
        assert_eq!(c.checks.primitive.invariant_factors, ints(&[1, 1]));
    }

    #[test]
    fn even_half_branch() {
        // d = 0 fails validation but is a fine reduced input
        let l = Rank2Lattice { d: int(0), a: int(2), b: int(-1) };
        let c = embed_even(&l).unwrap();
        assert_eq!(c.embedding.matrix.column(0), ints(&[1, -1, 0, 0, 0, 0, 0]));
        assert_eq!(c.embedding.matrix.column(1), ints(&[2, -1, 0, 0, 0, 0, -2]));
        assert!(c.all_pass());
    }

    #[test]
    fn parity() {
        assert!(matches!(embed_even(&lat(1, 1, -1)), Err(Error::ParityMismatch(_))));
    }

    #[test]
    fn unreduced_input_is_transported() {
        let l = lat(3, 4, -2);
        let c = embed_even(&l).unwrap();
        assert!(c.checks.gram_preserved);
        assert!(c.checks.primitive.primitive);
        assert_eq!(c.embedding.image_gram().unwrap(), *l.gram().matrix());
    }
}
