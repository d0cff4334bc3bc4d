use k3lat::cones::{build_model, is_nef, zariski_decompose, ConeModel, Flavor};
use k3lat::{DivisorClass, Int, Matrix, Rat};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Solves `G c = b` by Cramer's rule.
fn cramer(g: &Matrix, b: &[Int]) -> Option<Vec<Rat>> {
    let det = g.determinant().unwrap();
    if det.is_zero() {
        return None;
    }
    let n = g.rows();
    Some(
        (0..n)
            .map(|i| {
                let mut gi = g.clone();
                for (r, v) in b.iter().enumerate() {
                    gi[(r, i)] = v.clone();
                }
                Rat::new(gi.determinant().unwrap(), det.clone())
            })
            .collect(),
    )
}

/// Sylvester: `-G` positive definite.
fn negative_definite(g: &Matrix) -> bool {
    let n = g.rows();
    (1..=n).all(|k| {
        let rows: Vec<Vec<Int>> = (0..k).map(|i| (0..k).map(|j| -&g[(i, j)]).collect()).collect();
        Matrix::from_rows(rows).unwrap().determinant().unwrap().is_positive()
    })
}

/// All supports `S ⊇ {R : L.R < 0}` grown through positive pairings, each
/// solved independently; returns every candidate that yields a valid split.
fn oracle(model: &ConeModel, l: &DivisorClass) -> Vec<(Vec<usize>, Vec<Rat>)> {
    let roots = model.minus_two_classes();
    let seed: Vec<usize> = (0..roots.len()).filter(|&i| model.pair(l, &roots[i]).unwrap().is_negative()).collect();
    let mut frontier = vec![seed];
    let mut seen = std::collections::BTreeSet::new();
    let mut good = Vec::new();
    while let Some(s) = frontier.pop() {
        if !seen.insert(s.clone()) {
            continue;
        }
        let k = s.len();
        let g = Matrix::from_rows(
            (0..k).map(|i| (0..k).map(|j| model.pair(&roots[s[i]], &roots[s[j]]).unwrap()).collect()).collect(),
        )
        .unwrap();
        if k > 0 && !negative_definite(&g) {
            continue;
        }
        let b: Vec<Int> = s.iter().map(|&i| model.pair(l, &roots[i]).unwrap()).collect();
        let c = if k == 0 { Some(vec![]) } else { cramer(&g, &b) };
        if let Some(c) = c {
            if c.iter().all(|x| x.is_positive()) {
                let p: Vec<Rat> = (0..model.dim())
                    .map(|t| {
                        let mut v = Rat::from_integer(l.coords[t].clone());
                        for (ci, &ri) in c.iter().zip(&s) {
                            v -= ci * Rat::from_integer(roots[ri].coords[t].clone());
                        }
                        v
                    })
                    .collect();
                let nef = model.cone_generators().iter().all(|gcls| {
                    let gr: Vec<Rat> = gcls.coords.iter().map(|x| Rat::from_integer(x.clone())).collect();
                    !model.gram().pair_rational(&p, &gr).unwrap().is_negative()
                });
                if nef {
                    good.push((s.clone(), c));
                }
            }
        }
        if k < model.r() {
            for j in 0..roots.len() {
                if s.contains(&j) {
                    continue;
                }
                if s.iter().any(|&i| model.pair(&roots[i], &roots[j]).unwrap().is_positive()) {
                    let mut t = s.clone();
                    t.push(j);
                    t.sort_unstable();
                    frontier.push(t);
                }
            }
        }
    }
    good
}

fn random_effective(model: &ConeModel, rng: &mut ChaCha8Rng) -> DivisorClass {
    let roots = model.minus_two_classes();
    let x: i64 = rng.gen_range(0..3);
    let mut c: Vec<Int> = model.ample_reference().coords.iter().map(|v| v * x).collect();
    for _ in 0..rng.gen_range(1..4) {
        let r = &roots[rng.gen_range(0..roots.len())];
        let a: i64 = rng.gen_range(1..5);
        for (ci, ri) in c.iter_mut().zip(&r.coords) {
            *ci += ri * a;
        }
    }
    model.class(c).unwrap()
}

#[test]
fn agrees_with_subset_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (f, r) in [(Flavor::Odd, 2), (Flavor::Odd, 3), (Flavor::Odd, 4), (Flavor::Odd, 5), (Flavor::Even, 3), (Flavor::Even, 5)] {
        let model = build_model(f, r).unwrap();
        let mut done = 0;
        while done < 30 {
            let l = random_effective(&model, &mut rng);
            if !model.pair(&l, model.ample_reference()).unwrap().is_positive() {
                continue;
            }
            done += 1;
            let z = zariski_decompose(&model, &l).unwrap();
            assert!(z.recheck(&model, &l).unwrap().iter().all(|(_, ok)| *ok), "{l}");
            let cands = oracle(&model, &l);
            assert_eq!(cands.len(), 1, "{l}: {cands:?}");
            let expected: Vec<(Vec<Int>, Rat)> = cands[0]
                .0
                .iter()
                .map(|&i| model.minus_two_classes()[i].coords.clone())
                .zip(cands[0].1.iter().cloned())
                .collect();
            let got: Vec<(Vec<Int>, Rat)> = z.support.iter().map(|(c, x)| (c.coords.clone(), x.clone())).collect();
            assert_eq!(got, expected, "{l}");
        }
    }
}

#[test]
fn nef_inputs_have_zero_negative_part() {
    let model = build_model(Flavor::Odd, 5).unwrap();
    for d in 1..12i64 {
        for m1 in 0..=d / 2 {
            let l = model.class_i64(&[d, m1, -(m1 / 2), 0, -(m1 / 2), 0]).unwrap();
            if is_nef(&model, &l).unwrap().nef {
                let z = zariski_decompose(&model, &l).unwrap();
                assert!(z.negative.is_zero());
                assert!(z.support.is_empty());
            }
        }
    }
}
