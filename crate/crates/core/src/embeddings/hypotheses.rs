use std::collections::HashSet;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::{EmbedConfig, DEFAULT_SEARCH_SLACK};
use crate::error::{Error, Result};
use crate::lattice::Rank2Lattice;
use crate::{int, Int};

/// Largest half-width of the witness search box.
const MAX_BOX: i64 = 1_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A2Witness {
    /// `L1, L2, L3`, sorted lexicographically.
    pub parts: [Vec<Int>; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A3Witness {
    pub l1: Vec<Int>,
    pub l2: Vec<Int>,
    pub flags: A3Flags,
}

/// Each defining condition of an A3 pair, evaluated separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct A3Flags {
    pub sum_matches: bool,
    pub l_dot_l1_positive: bool,
    pub l_dot_l2_positive: bool,
    pub l1_square_positive: bool,
    pub l2_square_minus_two: bool,
    pub l1_not_in_2lambda: bool,
    pub difference_primitive: bool,
    pub numerical_bound: bool,
}

impl A3Flags {
    pub fn all(&self) -> bool {
        self.named().iter().all(|(_, v)| *v)
    }

    pub fn named(&self) -> [(&'static str, bool); 8] {
        [
            ("sum_matches", self.sum_matches),
            ("l_dot_l1_positive", self.l_dot_l1_positive),
            ("l_dot_l2_positive", self.l_dot_l2_positive),
            ("l1_square_positive", self.l1_square_positive),
            ("l2_square_minus_two", self.l2_square_minus_two),
            ("l1_not_in_2lambda", self.l1_not_in_2lambda),
            ("difference_primitive", self.difference_primitive),
            ("numerical_bound", self.numerical_bound),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisReport {
    /// The determinant is even.
    pub a1: bool,
    pub a2: Option<A2Witness>,
    pub a3: Option<A3Witness>,
    /// Half-widths of the search box, per coordinate.
    pub search_box: Vec<Int>,
}

impl HypothesisReport {
    /// Re-evaluates every stored witness against its defining conditions.
    pub fn recheck(&self, lat: &Rank2Lattice<Int>, l: &[Int]) -> Result<Vec<(&'static str, bool)>> {
        let mut out = vec![("a1_matches_parity", self.a1 == lat.a.is_even())];
        if let Some(w) = &self.a2 {
            out.push(("a2_witness_valid", a2_holds(lat, l, w)?));
        }
        if let Some(w) = &self.a3 {
            let flags = a3_flags(lat, l, &w.l1, &w.l2)?;
            out.push(("a3_flags_match", flags == w.flags));
            out.push(("a3_witness_valid", flags.all()));
        }
        Ok(out)
    }
}

fn a2_holds(lat: &Rank2Lattice<Int>, l: &[Int], w: &A2Witness) -> Result<bool> {
    let mut sum = vec![int(0), int(0)];
    for p in &w.parts {
        if !lat.pair(p, p)?.is_positive() || !lat.pair(l, p)?.is_positive() {
            return Ok(false);
        }
        sum[0] += &p[0];
        sum[1] += &p[1];
    }
    Ok(sum == l)
}

/// The A3 conditions for a proposed pair `(L1, L2)`.
pub fn a3_flags(lat: &Rank2Lattice<Int>, l: &[Int], l1: &[Int], l2: &[Int]) -> Result<A3Flags> {
    check_len(l)?;
    check_len(l1)?;
    check_len(l2)?;
    let diff = [&l1[0] - &l2[0], &l1[1] - &l2[1]];
    let l1sq = lat.pair(l1, l1)?;
    Ok(A3Flags {
        sum_matches: &l1[0] + &l2[0] == l[0] && &l1[1] + &l2[1] == l[1],
        l_dot_l1_positive: lat.pair(l, l1)?.is_positive(),
        l_dot_l2_positive: lat.pair(l, l2)?.is_positive(),
        l1_square_positive: l1sq.is_positive(),
        l2_square_minus_two: lat.pair(l2, l2)? == int(-2),
        l1_not_in_2lambda: !(l1[0].is_even() && l1[1].is_even()),
        difference_primitive: diff[0].gcd(&diff[1]) == int(1),
        numerical_bound: l1sq + int(2) * lat.pair(l1, l2)? >= int(18),
    })
}

fn check_len(v: &[Int]) -> Result<()> {
    if v.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: v.len() });
    }
    Ok(())
}

pub fn verify_hypotheses(lat: &Rank2Lattice<Int>, l: &[Int]) -> Result<HypothesisReport> {
    verify_hypotheses_with(lat, l, &EmbedConfig { search_slack: DEFAULT_SEARCH_SLACK, ..EmbedConfig::default() })
}

/// Evaluates A1 and searches for A2 and A3 witnesses in the box
/// `|x_i| <= |L_i| + slack`.
///
/// Among all witnesses the one with the smallest total absolute coordinate
/// sum is returned, ties broken lexicographically.
pub fn verify_hypotheses_with(lat: &Rank2Lattice<Int>, l: &[Int], cfg: &EmbedConfig) -> Result<HypothesisReport> {
    check_len(l)?;
    let sq = lat.pair(l, l)?;
    if !sq.is_positive() {
        return Err(Error::Precondition(format!("L^2 = {sq} must be positive")));
    }
    let small = |x: &Int| x.to_i64().filter(|v| v.abs() <= MAX_BOX);
    let (Some(x), Some(y)) = (small(&l[0]), small(&l[1])) else {
        return Err(Error::SearchCeiling { n: l[0].abs().max(l[1].abs()), ceiling: int(MAX_BOX) });
    };
    let bx = x.abs() + cfg.search_slack;
    let by = y.abs() + cfg.search_slack;
    let g = Form::new(lat)?;
    let lv = (x as i128, y as i128);

    let a2 = search_a2(&g, lv, bx as i128, by as i128).map(|t| A2Witness {
        parts: t.map(|(u, v)| vec![Int::from(u), Int::from(v)]),
    });
    let a3 = match search_a3(&g, lv, bx as i128, by as i128) {
        Some((p, q)) => {
            let l1 = vec![Int::from(p.0), Int::from(p.1)];
            let l2 = vec![Int::from(q.0), Int::from(q.1)];
            let flags = a3_flags(lat, l, &l1, &l2)?;
            Some(A3Witness { l1, l2, flags })
        }
        None => None,
    };
    Ok(HypothesisReport { a1: lat.a.is_even(), a2, a3, search_box: vec![int(bx), int(by)] })
}

type V = (i128, i128);

struct Form {
    d: i128,
    a: i128,
    b: i128,
}

impl Form {
    fn new(lat: &Rank2Lattice<Int>) -> Result<Form> {
        let c = |v: &Int| v.to_i128().ok_or_else(|| Error::OutOfRange(format!("form entry {v} too large")));
        Ok(Form { d: c(&lat.d)?, a: c(&lat.a)?, b: c(&lat.b)? })
    }

    fn pair(&self, x: V, y: V) -> i128 {
        2 * self.d * x.0 * y.0 + self.a * (x.0 * y.1 + x.1 * y.0) + 2 * self.b * x.1 * y.1
    }
}

fn weight(v: V) -> i128 {
    v.0.abs() + v.1.abs()
}

fn in_box(v: V, bx: i128, by: i128) -> bool {
    v.0.abs() <= bx && v.1.abs() <= by
}

fn search_a2(g: &Form, l: V, bx: i128, by: i128) -> Option<[V; 3]> {
    let mut cands = Vec::new();
    for u in -bx..=bx {
        for v in -by..=by {
            let p = (u, v);
            if g.pair(p, p) > 0 && g.pair(l, p) > 0 {
                cands.push(p);
            }
        }
    }
    let set: HashSet<V> = cands.iter().copied().collect();
    let mut best: Option<(i128, [V; 3])> = None;
    for (i, &p) in cands.iter().enumerate() {
        for &q in &cands[i..] {
            let r = (l.0 - p.0 - q.0, l.1 - p.1 - q.1);
            if !in_box(r, bx, by) || !set.contains(&r) {
                continue;
            }
            let mut t = [p, q, r];
            t.sort();
            let key = (weight(p) + weight(q) + weight(r), t);
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
    }
    best.map(|(_, t)| t)
}

fn search_a3(g: &Form, l: V, bx: i128, by: i128) -> Option<(V, V)> {
    let mut best: Option<(i128, V, V)> = None;
    for u in -bx..=bx {
        for v in -by..=by {
            let p = (u, v);
            let q = (l.0 - u, l.1 - v);
            let p2 = g.pair(p, p);
            let ok = g.pair(l, p) > 0
                && g.pair(l, q) > 0
                && p2 > 0
                && g.pair(q, q) == -2
                && !(u % 2 == 0 && v % 2 == 0)
                && Integer::gcd(&(p.0 - q.0), &(p.1 - q.1)) == 1
                && p2 + 2 * g.pair(p, q) >= 18;
            if ok {
                let key = (weight(p) + weight(q), p, q);
                if best.as_ref().is_none_or(|b| key < *b) {
                    best = Some(key);
                }
            }
        }
    }
    best.map(|(_, p, q)| (p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ints;

    fn lat(d: i64, a: i64, b: i64) -> Rank2Lattice<Int> {
        Rank2Lattice { d: int(d), a: int(a), b: int(b) }
    }

    #[test]
    fn a1_parity() {
        let r = verify_hypotheses(&lat(2, 2, -1), &ints(&[1, 0])).unwrap();
        assert!(r.a1);
        let r = verify_hypotheses(&lat(1, 1, -1), &ints(&[1, 0])).unwrap();
        assert!(!r.a1);
    }

    #[test]
    fn a2_canonical_witness() {
        let l = lat(1, 1, -1);
        let r = verify_hypotheses(&l, &ints(&[3, 0])).unwrap();
        let w = r.a2.clone().unwrap();
        assert_eq!(w.parts, [ints(&[1, 0]), ints(&[1, 0]), ints(&[1, 0])]);
        assert_eq!(l.pair(&ints(&[3, 0]), &ints(&[1, 0])).unwrap(), int(6));
        assert!(r.recheck(&l, &ints(&[3, 0])).unwrap().iter().all(|(_, ok)| *ok));
    }

    #[test]
    fn a3_flags_individually() {
        let l = lat(10, 1, -1);
        let f = a3_flags(&l, &ints(&[1, 1]), &ints(&[1, 0]), &ints(&[0, 1])).unwrap();
        assert!(f.l1_not_in_2lambda);
        assert!(f.difference_primitive);
        assert!(f.numerical_bound);
        assert!(f.l2_square_minus_two);
        assert!(f.sum_matches);
        // L.L2 = 1 - 2 = -1
        assert!(!f.l_dot_l2_positive);
        assert!(!f.all());
    }

    #[test]
    fn a3_search_finds_basis_witness() {
        // basis L1, L2 with L1^2 = 6, L1.L2 = 6, L2^2 = -2, L = L1 + L2
        let l = lat(3, 6, -1);
        let r = verify_hypotheses(&l, &ints(&[1, 1])).unwrap();
        let w = r.a3.unwrap();
        assert!(w.flags.all());
        assert_eq!((w.l1, w.l2), (ints(&[1, 0]), ints(&[0, 1])));
    }

    #[test]
    fn non_positive_l() {
        assert!(matches!(verify_hypotheses(&lat(1, 1, -1), &ints(&[0, 0])), Err(Error::Precondition(_))));
    }
}
