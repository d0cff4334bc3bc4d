use k3lat::cones::{build_model, cremona, is_nef, nef_inequality_odd, reflect, Flavor};
use k3lat::embeddings::{certify, restrict_and_decompose};
use k3lat::lattice::{reduce_rank2_basis, validate_rank2, Rank2Lattice};
use k3lat::squares::{five_coprime_squares, four_squares, three_squares};
use k3lat::{int, Int, Matrix};
use proptest::prelude::*;

proptest! {
    #[test]
    fn reflection_is_an_involution(r in 2usize..=5, idx in 0usize..9, c in prop::collection::vec(-20i64..=20, 6)) {
        let model = build_model(Flavor::Odd, r).unwrap();
        let roots = model.minus_two_classes();
        let root = &roots[idx % roots.len()];
        let f = model.class_i64(&c[..=r]).unwrap();
        let g = reflect(&model, root, &f).unwrap();
        prop_assert_eq!(model.square(&g).unwrap(), model.square(&f).unwrap());
        prop_assert_eq!(reflect(&model, root, &g).unwrap(), f);
    }

    #[test]
    fn cremona_is_an_isometric_involution(c in prop::collection::vec(-20i64..=20, 7)) {
        let model = build_model(Flavor::Even, 6).unwrap();
        let f = model.class_i64(&c).unwrap();
        let g = cremona(&model, (1, 4, 5), &f).unwrap();
        prop_assert_eq!(model.square(&g).unwrap(), model.square(&f).unwrap());
        prop_assert_eq!(cremona(&model, (1, 4, 5), &g).unwrap(), f);
    }

    #[test]
    fn odd_nef_matches_chain(r in 2usize..=5, c in prop::collection::vec(-10i64..=10, 6)) {
        let model = build_model(Flavor::Odd, r).unwrap();
        let f = model.class_i64(&c[..=r]).unwrap();
        prop_assert_eq!(is_nef(&model, &f).unwrap().nef, nef_inequality_odd(&model, &f).unwrap());
    }

    #[test]
    fn squares_witnesses_hold(n in 1u64..200_000) {
        let n = Int::from(n);
        if let Ok(w) = three_squares(&n) {
            prop_assert!(w.sum_holds() && w.gcd_holds() && w.exponent_holds());
        }
        let w = four_squares(&n).unwrap();
        prop_assert!(w.sum_holds() && w.gcd_holds());
        let w = five_coprime_squares(&n).unwrap();
        prop_assert!(w.sum_holds() && w.gcd == int(1));
    }

    #[test]
    fn reduction_is_congruent(d in 1i64..30, a in -30i64..30, b in -30i64..30) {
        prop_assume!(4 * b * d - a * a < 0);
        let lat = validate_rank2(int(d), int(a), int(b)).unwrap();
        let red = reduce_rank2_basis(lat.gram().matrix()).unwrap();
        let u: &Matrix = &red.change;
        prop_assert_eq!(u.transpose().mul(lat.gram().matrix()).unwrap().mul(u).unwrap(), red.gram.clone());
        let (p, q, s) = red.entries();
        prop_assert!(p >= int(0) && q >= int(0) && s < int(0));
    }

    #[test]
    fn certificates_are_self_consistent(d in 1i64..10, a in -10i64..10, b in -10i64..0, x in 0i64..3, y in -2i64..3) {
        let lat = Rank2Lattice { d: int(d), a: int(a), b: int(b) };
        prop_assume!(4 * b * d - a * a < 0);
        let l = vec![int(x), int(y)];
        prop_assume!(lat.pair(&l, &l).unwrap() > int(0));
        let c = certify(&lat, &l).unwrap();
        prop_assert!(c.is_consistent());
        prop_assert!(c.checks.gram_preserved && c.checks.primitive.primitive && c.checks.trace_replays);
        prop_assert!(c.checks.nef.as_ref().unwrap().nef);
    }

    #[test]
    fn degeneration_recombines(r in 2usize..=5, slack in 0i64..=6, m1 in 2i64..=10, ms in prop::collection::vec(0i64..=5, 4)) {
        let mut c = vec![int(2 * m1 + slack), int(m1)];
        for (j, m) in ms[..r - 1].iter().enumerate() {
            let cap = if r == 5 && j == 3 { 1.min(m1 / 2) } else { m1 / 2 };
            c.push(int(-(m % (cap + 1))));
        }
        let led = restrict_and_decompose(r, &c).unwrap();
        prop_assert!(led.recheck().unwrap().iter().all(|(_, ok)| *ok));
    }
}
