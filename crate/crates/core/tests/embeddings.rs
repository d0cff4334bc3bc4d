use k3lat::cones::{build_model, is_nef, nef_inequality_odd, Flavor};
use k3lat::embeddings::{
    certify, embed_a3_explicit, embed_even, embed_odd, embed_rank4, nefify, rank4_gram, rank4_split, restrict_and_decompose,
    verify_hypotheses, SplitBranch,
};
use k3lat::lattice::{reduce_rank2_basis, Rank2Lattice};
use k3lat::{int, ints, Int};

fn lattices(parity: i64) -> impl Iterator<Item = Rank2Lattice<Int>> {
    (1..=8i64).flat_map(move |d| {
        (-8..=8i64).filter(move |a| a.rem_euclid(2) == parity).flat_map(move |a| {
            (-8..=-1i64).filter(move |b| 4 * b * d - a * a < 0).map(move |b| Rank2Lattice { d: int(d), a: int(a), b: int(b) })
        })
    })
}

fn reduced(l: &Rank2Lattice<Int>) -> bool {
    let r = reduce_rank2_basis(l.gram().matrix()).unwrap();
    r.change == k3lat::Matrix::identity(2)
}

#[test]
fn even_sweep_small() {
    let mut n = 0;
    for l in lattices(0).filter(reduced) {
        let c = embed_even(&l).unwrap();
        assert!(c.all_pass(), "{l:?}");
        assert_eq!(c.checks.primitive.invariant_factors, ints(&[1, 1]));
        assert!(c.is_consistent());
        n += 1;
    }
    assert!(n > 50);
}

#[test]
fn odd_sweep_small() {
    for l in lattices(1).filter(reduced) {
        let c = embed_odd(&l).unwrap();
        assert!(c.all_pass(), "{l:?}");
        assert_eq!(c.checks.primitive.invariant_factors, ints(&[1, 1]));
    }
}

#[test]
fn nefify_on_sweep_outputs() {
    for l in lattices(0).chain(lattices(1)).filter(reduced) {
        let c = if l.a.clone() % int(2) == int(0) { embed_even(&l) } else { embed_odd(&l) }.unwrap();
        let model = c.model().unwrap();
        for lc in [ints(&[1, 0]), ints(&[1, 1]), ints(&[2, 1])] {
            if l.pair(&lc, &lc).unwrap() < int(0) {
                continue;
            }
            let (f, t) = nefify(&model, &c.embedding, &lc).unwrap();
            let img = f.apply(&lc).unwrap();
            let cls = model.class(img.clone()).unwrap();
            assert!(is_nef(&model, &cls).unwrap().nef);
            assert_eq!(model.square(&cls).unwrap(), l.pair(&lc, &lc).unwrap());
            let start = t.initial_degree.clone().unwrap();
            let mut prev = start;
            for s in &t.steps {
                assert!(s.degree < prev);
                prev = s.degree.clone();
            }
            assert!(f.preserves_gram().unwrap());
        }
    }
}

#[test]
fn a3_sweep() {
    for a in 1..=20i64 {
        for b in 1..=20i64 {
            if a + b < 9 {
                continue;
            }
            let c = embed_a3_explicit(&int(a), &int(b)).unwrap();
            assert!(c.all_pass(), "a={a} b={b}");
            assert!(c.trace.is_empty());
            let g = c.embedding.image_gram().unwrap();
            assert_eq!((g[(0, 0)].clone(), g[(0, 1)].clone(), g[(1, 1)].clone()), (int(2 * a), int(b), int(-2)));
        }
    }
}

#[test]
fn rank4_fixtures() {
    for w in [1, 2] {
        let c = embed_rank4(w).unwrap();
        assert_eq!(c.embedding.image_gram().unwrap(), *rank4_gram(w).unwrap().matrix());
        assert_eq!(c.checks.primitive.invariant_factors, ints(&[1, 1, 1, 1]));
    }
}

#[test]
fn rank4_split_sweep() {
    let model = build_model(Flavor::Odd, 5).unwrap();
    let mut branches = [0usize; 3];
    for m1 in 3..=8i64 {
        for m2 in 0..=m1 / 2 {
            for m5 in 0..=m2 {
                for d in 2 * m1..=2 * m1 + 2 {
                    let l = model.class_i64(&[d, m1, -m5, -m2, -m5, -m2]).unwrap();
                    let s = rank4_split(&model, &l).unwrap();
                    assert!(s.recheck().iter().all(|(_, ok)| *ok));
                    branches[match s.branch {
                        SplitBranch::Unsplit => 0,
                        SplitBranch::Residual => 1,
                        SplitBranch::Fibre => 2,
                    }] += 1;
                }
            }
        }
    }
    assert!(branches.iter().all(|&b| b > 0), "{branches:?}");
}

#[test]
fn degeneration_sweep() {
    for r in 2..=5usize {
        let model = build_model(Flavor::Odd, r).unwrap();
        let mut count = 0;
        for d in 4..=12i64 {
            for m1 in 2..=d / 2 {
                let top = m1 / 2;
                let mut ms = vec![0i64; r - 1];
                loop {
                    let mut c = vec![d, m1];
                    c.extend(ms.iter().map(|m| -m));
                    if r != 5 || ms[3] <= 1 {
                        let cls = model.class_i64(&c).unwrap();
                        if m1 >= 3 {
                            assert!(nef_inequality_odd(&model, &cls).unwrap());
                        }
                        let led = restrict_and_decompose(r, &ints(&c)).unwrap();
                        assert!(led.recheck().unwrap().iter().all(|(_, ok)| *ok));
                        count += 1;
                    }
                    let mut i = 0;
                    while i < ms.len() && ms[i] == top {
                        ms[i] = 0;
                        i += 1;
                    }
                    if i == ms.len() {
                        break;
                    }
                    ms[i] += 1;
                }
            }
        }
        assert!(count > 0);
    }
}

#[test]
fn certify_examples() {
    let c = certify(&Rank2Lattice { d: int(1), a: int(0), b: int(-1) }, &ints(&[1, 0])).unwrap();
    assert!(c.all_pass());
    assert_eq!(c.checks.big.unwrap().square, int(2));
    let c = certify(&Rank2Lattice { d: int(1), a: int(1), b: int(-1) }, &ints(&[1, 0])).unwrap();
    assert_eq!(c.checks.big.as_ref().unwrap().square, int(2));
    assert!(c.is_consistent());
}

#[test]
fn hypothesis_witnesses_recheck() {
    for l in lattices(1).take(60) {
        for lc in [ints(&[1, 0]), ints(&[2, 1]), ints(&[3, 0])] {
            if l.pair(&lc, &lc).unwrap() <= int(0) {
                continue;
            }
            let rep = verify_hypotheses(&l, &lc).unwrap();
            assert!(rep.recheck(&l, &lc).unwrap().iter().all(|(_, ok)| *ok));
        }
    }
}
