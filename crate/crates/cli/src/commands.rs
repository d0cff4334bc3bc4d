//! Every subcommand as data: parsed inputs, execution, and rechecks that
//! read only the emitted `result` record.

use k3lat::cones::{
    build_model, cremona_matrix, is_big, is_nef, model_gram, nef_inequality_odd, reflect_coords, zariski_decompose, ConeModel,
    Flavor, ZariskiDecomposition,
};
use k3lat::embeddings::{
    certify, embed_a3_explicit, embed_even, embed_odd, embed_rank4, nefify, nefify_pair, rank4_gram, rank4_split,
    restrict_and_decompose, verify_hypotheses, A2Witness, A3Flags, A3Witness, Certificate, DegenerationLedger,
    HypothesisReport, PairNefification, Rank4Split, SplitBranch, Source, TraceStep,
};
use k3lat::lattice::{reduce_rank2_basis, signature, validate_rank2, BasisId, Rank2Lattice};
use k3lat::squares::{five_coprime_squares, four_squares, is_three_square_excluded, three_squares, SquaresWitness};
use k3lat::{DivisorClass, Embedding, GramMatrix, Int, Matrix, Rat, RationalClass};
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::cert::{certificate_json, recheck_certificate, step_from, step_json};
use crate::document::{flags, CheckEntry, Document};
use crate::error::CliError;
use crate::json::*;

/// How `C` is normalised against the classes orthogonal to `σ(L)`.
pub const PAIR_NORMALIZATION: &str = "c_dot_r_non_positive";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Invocation {
    LatticeValidate { d: Int, a: Int, b: Int },
    Squares { n: Int, k: usize },
    ConesEnumerate { flavor: Flavor, r: usize },
    Nef { flavor: Flavor, r: usize, class: Vec<Int> },
    Zariski { flavor: Flavor, r: usize, class: Vec<Int> },
    Cremona { r: usize, ijk: [usize; 3], class: Vec<Int> },
    Embed { d: Int, a: Int, b: Int, l: Option<Vec<Int>> },
    Nefify { flavor: Flavor, r: usize, columns: Vec<Vec<Int>>, l: Vec<Int>, c: Option<Vec<Int>> },
    A3 { a: Int, b: Int },
    Rank4 { which: u8, split: Option<Vec<Int>> },
    Degeneration { r: usize, class: Vec<Int> },
    Verify { d: Int, a: Int, b: Int, l: Vec<Int> },
}

fn opt_ints(v: &Option<Vec<Int>>) -> Value {
    v.as_deref().map_or(Value::Null, ints)
}

fn flavor_json(f: Flavor) -> Value {
    Value::String(f.to_string())
}

fn flavor_from(v: &Value) -> Result<Flavor, CliError> {
    Ok(as_str(v)?.parse()?)
}

fn lattice(d: &Int, a: &Int, b: &Int) -> Rank2Lattice<Int> {
    Rank2Lattice { d: d.clone(), a: a.clone(), b: b.clone() }
}

fn summands_json(s: &[(Int, DivisorClass)]) -> Value {
    Value::Array(s.iter().map(|(k, c)| object(vec![("multiplicity", int(k)), ("class", class(c))])).collect())
}

fn summands_from(v: &Value, basis: BasisId) -> Result<Vec<(Int, DivisorClass)>, CliError> {
    as_array(v)?
        .iter()
        .map(|s| Ok((as_int(field(s, "multiplicity")?)?, DivisorClass::new(basis, as_ints(field(s, "class")?)?))))
        .collect()
}

fn usizes(v: &[usize]) -> Value {
    Value::Array(v.iter().map(|&x| Value::from(x)).collect())
}

fn as_usizes(v: &Value) -> Result<Vec<usize>, CliError> {
    as_array(v)?.iter().map(as_usize).collect()
}

/// `sorted` is `original` with the tail `2..` permuted by `perm`, ascending.
fn tail_permutation_checks(original: &[Int], sorted: &[Int], perm: &[usize]) -> Vec<CheckEntry> {
    let n = original.len();
    let mut seen: Vec<usize> = perm.to_vec();
    seen.sort_unstable();
    let is_perm = n >= 2 && sorted.len() == n && seen == (2..n).collect::<Vec<_>>();
    let matches = is_perm
        && sorted[..2] == original[..2]
        && perm.iter().enumerate().all(|(k, &i)| sorted[k + 2] == original[i]);
    let ascending = sorted.len() >= 2 && sorted[2..].windows(2).all(|w| w[0] <= w[1]);
    vec![CheckEntry::flag("sorted_is_permutation", matches), CheckEntry::flag("tail_sorted", ascending)]
}

fn product_is_identity(m: &Matrix) -> Result<bool, CliError> {
    Ok(m.mul(m)? == Matrix::identity(m.rows()))
}

impl Invocation {
    pub fn command(&self) -> &'static str {
        match self {
            Invocation::LatticeValidate { .. } => "lattice validate",
            Invocation::Squares { .. } => "squares",
            Invocation::ConesEnumerate { .. } => "cones enumerate",
            Invocation::Nef { .. } => "nef",
            Invocation::Zariski { .. } => "zariski",
            Invocation::Cremona { .. } => "cremona",
            Invocation::Embed { .. } => "embed",
            Invocation::Nefify { .. } => "nefify",
            Invocation::A3 { .. } => "a3",
            Invocation::Rank4 { .. } => "rank4",
            Invocation::Degeneration { .. } => "degeneration",
            Invocation::Verify { .. } => "verify",
        }
    }

    pub fn inputs(&self) -> Value {
        match self {
            Invocation::LatticeValidate { d, a, b } => object(vec![("d", int(d)), ("a", int(a)), ("b", int(b))]),
            Invocation::Squares { n, k } => object(vec![("n", int(n)), ("k", Value::from(*k))]),
            Invocation::ConesEnumerate { flavor, r } => object(vec![("flavor", flavor_json(*flavor)), ("r", Value::from(*r))]),
            Invocation::Nef { flavor, r, class } | Invocation::Zariski { flavor, r, class } => {
                object(vec![("flavor", flavor_json(*flavor)), ("r", Value::from(*r)), ("class", ints(class))])
            }
            Invocation::Cremona { r, ijk, class } => {
                object(vec![("r", Value::from(*r)), ("ijk", usizes(ijk)), ("class", ints(class))])
            }
            Invocation::Embed { d, a, b, l } => object(vec![("d", int(d)), ("a", int(a)), ("b", int(b)), ("L", opt_ints(l))]),
            Invocation::Nefify { flavor, r, columns, l, c } => object(vec![
                ("flavor", flavor_json(*flavor)),
                ("r", Value::from(*r)),
                ("matrix", Value::Array(columns.iter().map(|c| ints(c)).collect())),
                ("L", ints(l)),
                ("C", opt_ints(c)),
            ]),
            Invocation::A3 { a, b } => object(vec![("a", int(a)), ("b", int(b))]),
            Invocation::Rank4 { which, split } => object(vec![("which", Value::from(*which)), ("split", opt_ints(split))]),
            Invocation::Degeneration { r, class } => object(vec![("r", Value::from(*r)), ("class", ints(class))]),
            Invocation::Verify { d, a, b, l } => object(vec![("d", int(d)), ("a", int(a)), ("b", int(b)), ("L", ints(l))]),
        }
    }

    /// Inverse of [`Invocation::command`] and [`Invocation::inputs`].
    pub fn from_parts(command: &str, v: &Value) -> Result<Invocation, CliError> {
        let i = |k: &str| as_int(field(v, k)?);
        let u = |k: &str| as_usize(field(v, k)?);
        let cls = |k: &str| as_ints(field(v, k)?);
        let inv = match command {
            "lattice validate" => Invocation::LatticeValidate { d: i("d")?, a: i("a")?, b: i("b")? },
            "squares" => Invocation::Squares { n: i("n")?, k: u("k")? },
            "cones enumerate" => Invocation::ConesEnumerate { flavor: flavor_from(field(v, "flavor")?)?, r: u("r")? },
            "nef" => Invocation::Nef { flavor: flavor_from(field(v, "flavor")?)?, r: u("r")?, class: cls("class")? },
            "zariski" => Invocation::Zariski { flavor: flavor_from(field(v, "flavor")?)?, r: u("r")?, class: cls("class")? },
            "cremona" => {
                let ijk = as_usizes(field(v, "ijk")?)?;
                let ijk: [usize; 3] = ijk.try_into().map_err(|_| CliError::Schema("ijk must have three entries".into()))?;
                Invocation::Cremona { r: u("r")?, ijk, class: cls("class")? }
            }
            "embed" => Invocation::Embed { d: i("d")?, a: i("a")?, b: i("b")?, l: as_opt_ints(field(v, "L")?)? },
            "nefify" => Invocation::Nefify {
                flavor: flavor_from(field(v, "flavor")?)?,
                r: u("r")?,
                columns: as_int_lists(field(v, "matrix")?)?,
                l: cls("L")?,
                c: as_opt_ints(field(v, "C")?)?,
            },
            "a3" => Invocation::A3 { a: i("a")?, b: i("b")? },
            "rank4" => {
                let w = u("which")?;
                let which = u8::try_from(w).map_err(|_| CliError::Schema(format!("which = {w}")))?;
                Invocation::Rank4 { which, split: as_opt_ints(field(v, "split")?)? }
            }
            "degeneration" => Invocation::Degeneration { r: u("r")?, class: cls("class")? },
            "verify" => Invocation::Verify { d: i("d")?, a: i("a")?, b: i("b")?, l: cls("L")? },
            other => return Err(CliError::Schema(format!("unknown command {other:?}"))),
        };
        // inputs must already be in canonical form
        if inv.inputs() != *v {
            return Err(CliError::Schema(format!("inputs of {command:?} are not in canonical form")));
        }
        Ok(inv)
    }

    /// Runs the command and derives the checks from the serialized result.
    pub fn execute(&self) -> Result<Document, CliError> {
        let result = self.compute()?;
        let checks = self.recheck(&result)?;
        Ok(Document { command: self.command().into(), inputs: self.inputs(), result, checks })
    }

    pub fn compute(&self) -> Result<Value, CliError> {
        match self {
            Invocation::LatticeValidate { d, a, b } => {
                let lat = validate_rank2(d.clone(), a.clone(), b.clone())?;
                let g = lat.gram();
                let red = reduce_rank2_basis(g.matrix())?;
                let sig = signature(&g);
                Ok(object(vec![
                    ("gram", matrix_rows(g.matrix())),
                    ("determinant", int(&lat.determinant())),
                    ("determinant_parity", Value::String(parity(lat.has_even_determinant()).into())),
                    ("signature", signature_json(sig.pos, sig.neg, sig.zero)),
                    ("reduced", object(vec![("gram", matrix_rows(&red.gram)), ("change", matrix_rows(&red.change))])),
                ]))
            }
            Invocation::Squares { n, k } => {
                let w = match k {
                    3 => three_squares(n)?,
                    4 => four_squares(n)?,
                    5 => five_coprime_squares(n)?,
                    _ => return Err(CliError::Usage(format!("k must be 3, 4 or 5, got {k}"))),
                };
                Ok(object(vec![
                    ("n", int(&w.n)),
                    ("k", Value::from(w.k)),
                    ("parts", ints(&w.parts)),
                    ("gcd", int(&w.gcd)),
                    ("l", Value::from(w.l)),
                ]))
            }
            Invocation::ConesEnumerate { flavor, r } => {
                let m = build_model(*flavor, *r)?;
                Ok(object(vec![
                    ("gram", matrix_rows(m.gram().matrix())),
                    ("ample_reference", class(m.ample_reference())),
                    ("count", Value::from(m.minus_two_classes().len())),
                    ("minus_two_classes", classes(m.minus_two_classes())),
                    ("cone_generators", classes(m.cone_generators())),
                ]))
            }
            Invocation::Nef { flavor, r, class: c } => {
                let m = build_model(*flavor, *r)?;
                let l = m.class(c.clone())?;
                let rep = is_nef(&m, &l)?;
                let chain = match (flavor, r) {
                    (Flavor::Odd, 2..=5) => Value::Bool(nef_inequality_odd(&m, &l)?),
                    _ => Value::Null,
                };
                Ok(object(vec![
                    ("class", class(&l)),
                    ("nef", Value::Bool(rep.nef)),
                    ("min_pairing", rep.min_pairing.as_ref().map_or(Value::Null, int)),
                    (
                        "failing",
                        rep.failing
                            .as_ref()
                            .map_or(Value::Null, |(g, p)| object(vec![("class", class(g)), ("pairing", int(p))])),
                    ),
                    ("square", int(&m.square(&l)?)),
                    ("inequality_chain", chain),
                ]))
            }
            Invocation::Zariski { flavor, r, class: c } => {
                let m = build_model(*flavor, *r)?;
                let l = m.class(c.clone())?;
                let z = zariski_decompose(&m, &l)?;
                Ok(object(vec![
                    ("class", class(&l)),
                    ("positive", rats(&z.positive.coords)),
                    ("negative", rats(&z.negative.coords)),
                    (
                        "support",
                        Value::Array(
                            z.support.iter().map(|(c, q)| object(vec![("class", class(c)), ("coefficient", rat(q))])).collect(),
                        ),
                    ),
                ]))
            }
            Invocation::Cremona { r, ijk, class: c } => {
                let m = build_model(Flavor::Even, *r)?;
                let l = m.class(c.clone())?;
                let mat = cremona_matrix(&m, (ijk[0], ijk[1], ijk[2]))?;
                let image = mat.mul_vec(&l.coords)?;
                Ok(object(vec![("matrix", matrix_rows(&mat)), ("class", class(&l)), ("image", ints(&image))]))
            }
            Invocation::Embed { d, a, b, l } => {
                let lat = validate_rank2(d.clone(), a.clone(), b.clone())?;
                let cert = if lat.has_even_determinant() { embed_even(&lat)? } else { embed_odd(&lat)? };
                let cert = match l {
                    None => cert,
                    Some(l) => {
                        positive_square(&lat.gram(), l)?;
                        let model = cert.model()?;
                        let (fin, trace) = nefify(&model, &cert.embedding, l)?;
                        Certificate::assemble(cert.source, &model, cert.embedding, trace, fin, Some(l.clone()), vec![], cert.notes)?
                    }
                };
                Ok(certificate_json(&cert))
            }
            Invocation::Nefify { flavor, r, columns, l, c } => {
                let model = build_model(*flavor, *r)?;
                let e = Embedding::from_columns(model.gram().clone(), columns)?;
                if l.len() != columns.len() {
                    return Err(k3lat::Error::DimensionMismatch { expected: columns.len(), found: l.len() }.into());
                }
                positive_square(&e.source_gram, l)?;
                let (fin, trace) = nefify(&model, &e, l)?;
                let source = Source::Explicit(e.source_gram.matrix().clone());
                let cert = Certificate::assemble(source, &model, e, trace, fin.clone(), Some(l.clone()), vec![], vec![])?;
                let mut out = certificate_json(&cert);
                if let Some(c) = c {
                    if c.len() != columns.len() {
                        return Err(k3lat::Error::DimensionMismatch { expected: columns.len(), found: c.len() }.into());
                    }
                    let p = nefify_pair(&model, &fin, l, c)?;
                    insert(&mut out, "pair", pair_json(c, &p));
                }
                Ok(out)
            }
            Invocation::A3 { a, b } => Ok(certificate_json(&embed_a3_explicit(a, b)?)),
            Invocation::Rank4 { which, split } => {
                let cert = embed_rank4(*which)?;
                let mut out = certificate_json(&cert);
                if let Some(c) = split {
                    if *which != 2 {
                        return Err(CliError::Usage("--split applies to the lattice embedded by --which 2".into()));
                    }
                    let model = cert.model()?;
                    let s = rank4_split(&model, &model.class(c.clone())?)?;
                    insert(&mut out, "split", split_json(c, &s));
                }
                Ok(out)
            }
            Invocation::Degeneration { r, class: c } => Ok(ledger_json(&restrict_and_decompose(*r, c)?)),
            Invocation::Verify { d, a, b, l } => {
                let lat = validate_rank2(d.clone(), a.clone(), b.clone())?;
                let cert = certify(&lat, l)?;
                let hyp = verify_hypotheses(&lat, l)?;
                let mut out = certificate_json(&cert);
                insert(&mut out, "hypotheses", hypotheses_json(&hyp));
                Ok(out)
            }
        }
    }

    /// Recomputes every check from `result` and the inputs.
    pub fn recheck(&self, result: &Value) -> Result<Vec<CheckEntry>, CliError> {
        match self {
            Invocation::LatticeValidate { d, a, b } => recheck_lattice(d, a, b, result),
            Invocation::Squares { n, k } => recheck_squares(n, *k, result),
            Invocation::ConesEnumerate { flavor, r } => recheck_cones(*flavor, *r, result),
            Invocation::Nef { flavor, r, class } => recheck_nef(*flavor, *r, class, result),
            Invocation::Zariski { flavor, r, class } => recheck_zariski(*flavor, *r, class, result),
            Invocation::Cremona { r, ijk, class } => recheck_cremona(*r, *ijk, class, result),
            Invocation::Embed { d, a, b, l } => {
                let (cert, mut out) = recheck_certificate(result)?;
                out.push(CheckEntry::flag("source_matches_input", cert.source == Source::Rank2(lattice(d, a, b))));
                let target = if a.is_even_int() { (Flavor::Even, 6) } else { (Flavor::Odd, 4) };
                out.push(CheckEntry::flag("target_matches_parity", (cert.flavor, cert.r) == target));
                out.push(CheckEntry::flag("l_matches_input", cert.l_coords == *l));
                Ok(out)
            }
            Invocation::Nefify { flavor, r, columns, l, c } => {
                let (cert, mut out) = recheck_certificate(result)?;
                let model = cert.model()?;
                let inputs_ok = (cert.flavor, cert.r) == (*flavor, *r)
                    && cert.initial.matrix.columns() == *columns
                    && cert.l_coords.as_ref() == Some(l)
                    && cert.source == Source::Explicit(model.gram().pullback(&cert.initial.matrix)?);
                out.push(CheckEntry::flag("inputs_match", inputs_ok));
                match c {
                    Some(c) => out.extend(recheck_pair(&model, &cert.embedding, l, c, field(result, "pair")?)?),
                    None => out.push(CheckEntry::flag("no_pair_section", result.get("pair").is_none())),
                }
                Ok(out)
            }
            Invocation::A3 { a, b } => {
                let (cert, mut out) = recheck_certificate(result)?;
                let src = Rank2Lattice { d: a.clone(), a: b.clone(), b: Int::from(-1) };
                out.push(CheckEntry::flag("source_matches_input", cert.source == Source::Rank2(src)));
                Ok(out)
            }
            Invocation::Rank4 { which, split } => {
                let (cert, mut out) = recheck_certificate(result)?;
                let fixture = rank4_gram(*which)?;
                out.push(CheckEntry::new(
                    "source_gram_matches_fixture",
                    cert.source == Source::Rank4(*which) && *cert.source.gram()?.matrix() == *fixture.matrix(),
                    object(vec![("gram", matrix_rows(fixture.matrix()))]),
                ));
                match split {
                    Some(c) => out.extend(recheck_split(&cert.model()?, c, field(result, "split")?)?),
                    None => out.push(CheckEntry::flag("no_split_section", result.get("split").is_none())),
                }
                Ok(out)
            }
            Invocation::Degeneration { r, class } => recheck_ledger(*r, class, result),
            Invocation::Verify { d, a, b, l } => {
                let (cert, mut out) = recheck_certificate(result)?;
                let lat = lattice(d, a, b);
                out.push(CheckEntry::flag("source_matches_input", cert.source == Source::Rank2(lat.clone())));
                out.push(CheckEntry::flag("l_matches_input", cert.l_coords.as_ref() == Some(l)));
                let hyp = hypotheses_from(field(result, "hypotheses")?)?;
                out.extend(flags(hyp.recheck(&lat, l)?));
                Ok(out)
            }
        }
    }
}

fn parity(even: bool) -> &'static str {
    if even {
        "even"
    } else {
        "odd"
    }
}

fn signature_json(pos: usize, neg: usize, zero: usize) -> Value {
    object(vec![("positive", Value::from(pos)), ("negative", Value::from(neg)), ("zero", Value::from(zero))])
}

fn classes(cs: &[DivisorClass]) -> Value {
    Value::Array(cs.iter().map(class).collect())
}

fn classes_from(v: &Value) -> Result<Vec<Vec<Int>>, CliError> {
    as_int_lists(v)
}

fn insert(out: &mut Value, key: &str, v: Value) {
    if let Value::Object(m) = out {
        m.insert(key.into(), v);
    }
}

fn positive_square(g: &GramMatrix, l: &[Int]) -> Result<(), CliError> {
    let sq = g.square(l)?;
    if !sq.is_positive() {
        return Err(k3lat::Error::Precondition(format!("L^2 = {sq} must be positive")).into());
    }
    Ok(())
}

fn recheck_lattice(d: &Int, a: &Int, b: &Int, v: &Value) -> Result<Vec<CheckEntry>, CliError> {
    let two = Int::from(2);
    let gram = Matrix::from_rows(as_int_lists(field(v, "gram")?)?)?;
    let expected = Matrix::from_rows(vec![vec![&two * d, a.clone()], vec![a.clone(), &two * b]])?;
    let det = as_int(field(v, "determinant")?)?;
    let fresh_det = gram.determinant()?;
    let g = GramMatrix::free(gram.clone())?;
    let sig = signature(&g);
    let stored_sig = field(v, "signature")?;
    let red = field(v, "reduced")?;
    let rg = Matrix::from_rows(as_int_lists(field(red, "gram")?)?)?;
    let change = Matrix::from_rows(as_int_lists(field(red, "change")?)?)?;
    let unimodular = change.rows() == 2 && change.cols() == 2 && change.determinant()?.abs().is_one();
    let shape = rg.rows() == 2
        && rg.cols() == 2
        && !rg[(0, 0)].is_negative()
        && !rg[(0, 1)].is_negative()
        && rg[(1, 1)].is_negative();
    Ok(vec![
        CheckEntry::flag("gram_matches_inputs", gram == expected),
        CheckEntry::new("determinant", det == fresh_det && det.is_negative(), object(vec![("value", int(&fresh_det))])),
        CheckEntry::flag(
            "determinant_parity",
            as_str(field(v, "determinant_parity")?)? == parity(fresh_det.is_even_int()),
        ),
        CheckEntry::flag(
            "signature",
            *stored_sig == signature_json(sig.pos, sig.neg, sig.zero) && sig.is_hyperbolic() && sig.pos + sig.neg == 2,
        ),
        CheckEntry::flag("reduction_unimodular", unimodular),
        CheckEntry::flag("reduction_gram", unimodular && g.pullback(&change)? == rg),
        CheckEntry::flag("reduced_shape", shape),
    ])
}

trait IsEven {
    fn is_even_int(&self) -> bool;
}

impl IsEven for Int {
    fn is_even_int(&self) -> bool {
        (self % Int::from(2)).is_zero()
    }
}

fn recheck_squares(n: &Int, k: usize, v: &Value) -> Result<Vec<CheckEntry>, CliError> {
    let l = as_usize(field(v, "l")?)?;
    let w = SquaresWitness {
        n: as_int(field(v, "n")?)?,
        k: as_usize(field(v, "k")?)?,
        parts: as_ints(field(v, "parts")?)?,
        gcd: as_int(field(v, "gcd")?)?,
        l: u32::try_from(l).map_err(|_| CliError::Schema(format!("l = {l}")))?,
    };
    let mut out = vec![
        CheckEntry::flag("inputs_match", w.n == *n && w.k == k),
        CheckEntry::flag("sum_holds", w.sum_holds()),
        CheckEntry::flag("gcd_holds", w.gcd_holds()),
        CheckEntry::flag("exponent_holds", w.exponent_holds()),
        CheckEntry::flag("canonical_order", w.is_canonical_order()),
    ];
    if k == 3 {
        out.push(CheckEntry::flag("not_excluded", is_three_square_excluded(&w.n).is_none()));
    }
    Ok(out)
}

fn recheck_cones(flavor: Flavor, r: usize, v: &Value) -> Result<Vec<CheckEntry>, CliError> {
    let stored = Matrix::from_rows(as_int_lists(field(v, "gram")?)?)?;
    let g = GramMatrix::free(stored.clone())?;
    let ample = as_ints(field(v, "ample_reference")?)?;
    let roots = classes_from(field(v, "minus_two_classes")?)?;
    let gens = classes_from(field(v, "cone_generators")?)?;
    let count = as_usize(field(v, "count")?)?;
    let mut all_minus_two = true;
    let mut ample_positive = g.square(&ample)?.is_positive();
    for c in &roots {
        all_minus_two &= g.square(c)? == Int::from(-2);
        ample_positive &= g.pair(&ample, c)?.is_positive();
    }
    let mut sorted = roots.clone();
    sorted.sort();
    sorted.dedup();
    let m = build_model(flavor, r)?;
    let lib_roots: Vec<Vec<Int>> = m.minus_two_classes().iter().map(|c| c.coords.clone()).collect();
    let lib_gens: Vec<Vec<Int>> = m.cone_generators().iter().map(|c| c.coords.clone()).collect();
    Ok(vec![
        CheckEntry::flag("gram_matches_model", stored == model_gram(flavor, r)),
        CheckEntry::flag("all_minus_two", all_minus_two),
        CheckEntry::flag("distinct", sorted.len() == roots.len()),
        CheckEntry::flag("ample_positive", ample_positive),
        CheckEntry::new("count_matches", count == roots.len(), object(vec![("count", Value::from(roots.len()))])),
        CheckEntry::flag("matches_enumeration", roots == lib_roots && ample == m.ample_reference().coords),
        CheckEntry::flag("generators_match", gens == lib_gens),
    ])
}

fn recheck_nef(flavor: Flavor, r: usize, input: &[Int], v: &Value) -> Result<Vec<CheckEntry>, CliError> {
    let m = build_model(flavor, r)?;
    let stored = as_ints(field(v, "class")?)?;
    let l = m.class(stored.clone())?;
    let rep = is_nef(&m, &l)?;
    let failing = field(v, "failing")?;
    let failing_ok = match (&rep.failing, failing.is_null()) {
        (None, true) => true,
        (Some((g, p)), false) => as_ints(field(failing, "class")?)? == g.coords && as_int(field(failing, "pairing")?)? == *p,
        _ => false,
    };
    let min = field(v, "min_pairing")?;
    let min_ok = if min.is_null() { rep.min_pairing.is_none() } else { rep.min_pairing == Some(as_int(min)?) };
    let mut out = vec![
        CheckEntry::flag("class_matches_input", stored == input),
        CheckEntry::flag(
            "report_recomputed",
            as_bool(field(v, "nef")?)? == rep.nef && min_ok && failing_ok,
        ),
        CheckEntry::flag("square", as_int(field(v, "square")?)? == m.square(&l)?),
    ];
    if let (Flavor::Odd, 2..=5) = (flavor, r) {
        let chain = nef_inequality_odd(&m, &l)?;
        let stored_chain = as_bool(field(v, "inequality_chain")?)?;
        out.push(CheckEntry::flag("inequality_chain_agrees", stored_chain == chain && chain == rep.nef));
    }
    Ok(out)
}

fn rational_class(basis: BasisId, v: &Value) -> Result<RationalClass, CliError> {
    Ok(RationalClass { basis, coords: as_rats(v)? })
}

fn recheck_zariski(flavor: Flavor, r: usize, input: &[Int], v: &Value) -> Result<Vec<CheckEntry>, CliError> {
    let m = build_model(flavor, r)?;
    let stored = as_ints(field(v, "class")?)?;
    let l = m.class(stored.clone())?;
    let support: Vec<(DivisorClass, Rat)> = as_array(field(v, "support")?)?
        .iter()
        .map(|s| Ok((m.class(as_ints(field(s, "class")?)?)?, as_rat(field(s, "coefficient")?)?)))
        .collect::<Result<_, CliError>>()?;
    let z = ZariskiDecomposition {
        positive: rational_class(m.basis(), field(v, "positive")?)?,
        negative: rational_class(m.basis(), field(v, "negative")?)?,
        support,
    };
    let dims_ok = z.positive.coords.len() == m.dim() && z.negative.coords.len() == m.dim();
    if !dims_ok {
        return Err(CliError::Schema(format!("positive and negative parts need {} coordinates", m.dim())));
    }
    let in_model = z.support.iter().all(|(c, _)| m.minus_two_classes().contains(c));
    let mut out = vec![
        CheckEntry::flag("class_matches_input", stored == input),
        CheckEntry::flag("support_in_model", in_model),
    ];
    out.extend(flags(z.recheck(&m, &l)?));
    Ok(out)
}

fn recheck_cremona(r: usize, ijk: [usize; 3], input: &[Int], v: &Value) -> Result<Vec<CheckEntry>, CliError> {
    let m = build_model(Flavor::Even, r)?;
    let mat = Matrix::from_rows(as_int_lists(field(v, "matrix")?)?)?;
    let stored = as_ints(field(v, "class")?)?;
    let image = as_ints(field(v, "image")?)?;
    let square_ok = mat.is_square() && mat.rows() == m.dim();
    if !square_ok {
        return Err(CliError::Schema(format!("matrix must be {0}x{0}", m.dim())));
    }
    let l = m.class(stored.clone())?;
    Ok(vec![
        CheckEntry::flag("class_matches_input", stored == input),
        CheckEntry::flag("matrix_matches", mat == cremona_matrix(&m, (ijk[0], ijk[1], ijk[2]))?),
        CheckEntry::flag("isometry", m.gram().is_isometry(&mat)?),
        CheckEntry::flag("involution", product_is_identity(&mat)?),
        CheckEntry::flag("image_matches", mat.mul_vec(&l.coords)? == image),
        CheckEntry::flag("square_preserved", image.len() == m.dim() && m.gram().square(&image)? == m.square(&l)?),
    ])
}

fn pair_json(c: &[Int], p: &PairNefification) -> Value {
    object(vec![
        ("C", ints(c)),
        ("normalization", Value::String(PAIR_NORMALIZATION.into())),
        ("trace", Value::Array(p.trace.iter().map(step_json).collect())),
        ("columns", matrix_columns(&p.embedding.matrix)),
        ("n_min", int(&p.n_min)),
    ])
}

fn nef_and_big(model: &ConeModel, c: &DivisorClass) -> Result<bool, CliError> {
    Ok(is_nef(model, c)?.nef && is_big(model, c)?)
}

/// Replays the pair normalisation from the final embedding of the certificate.
fn recheck_pair(model: &ConeModel, start: &Embedding, l: &[Int], c: &[Int], v: &Value) -> Result<Vec<CheckEntry>, CliError> {
    let basis = model.basis();
    let steps: Vec<TraceStep> = as_array(field(v, "trace")?)?.iter().map(|s| step_from(s, basis)).collect::<Result<_, _>>()?;
    let stored_cols = as_int_lists(field(v, "columns")?)?;
    let n_min = as_int(field(v, "n_min")?)?;
    let d = &model.ample_reference().coords;

    let sl = DivisorClass::new(basis, start.apply(l)?);
    let l_ok = nef_and_big(model, &sl)?;
    let orthogonal: Vec<&DivisorClass> =
        model.minus_two_classes().iter().filter(|r| model.pair(&sl, r).is_ok_and(|p| p.is_zero())).collect();
    let first_positive = |sc: &[Int]| -> Result<Option<&DivisorClass>, CliError> {
        for r in &orthogonal {
            if model.pair_coords(sc, &r.coords)?.is_positive() {
                return Ok(Some(*r));
            }
        }
        Ok(None)
    };

    let mut cols = start.matrix.columns();
    let mut sc = start.apply(c)?;
    let mut replays = as_str(field(v, "normalization")?)? == PAIR_NORMALIZATION && as_ints(field(v, "C")?)? == c;
    for step in &steps {
        let Some(root) = first_positive(&sc)? else {
            replays = false;
            break;
        };
        if *root != step.root || model.pair_coords(&sc, &root.coords)? != step.pairing {
            replays = false;
            break;
        }
        cols = cols.iter().map(|col| reflect_coords(model, &root.coords, col)).collect::<Result<_, _>>()?;
        sc = reflect_coords(model, &root.coords, &sc)?;
        if model.pair_coords(&sc, d)? != step.degree {
            replays = false;
            break;
        }
    }
    let normalized = first_positive(&sc)?.is_none();
    replays &= cols == stored_cols;

    let combo = |n: &Int| DivisorClass::new(basis, sl.coords.iter().zip(&sc).map(|(x, y)| n * x - y).collect());
    let n_ok = !n_min.is_negative() && nef_and_big(model, &combo(&n_min))?;
    let least = n_min.is_zero() || !nef_and_big(model, &combo(&(&n_min - Int::one())))?;
    Ok(vec![
        CheckEntry::flag("pair_l_big_and_nef", l_ok),
        CheckEntry::new("pair_trace_replays", replays, object(vec![("steps", Value::from(steps.len()))])),
        CheckEntry::flag("pair_normalized", normalized),
        CheckEntry::new("pair_n_min_nef_and_big", n_ok, object(vec![("n_min", int(&n_min))])),
        CheckEntry::flag("pair_n_min_least", least),
    ])
}

fn split_json(c: &[Int], s: &Rank4Split) -> Value {
    object(vec![
        ("class", ints(c)),
        ("permutation", usizes(&s.permutation)),
        ("sorted", class(&s.sorted)),
        ("branch", Value::String(s.branch.name().into())),
        ("summands", summands_json(&s.summands)),
    ])
}

fn branch_from(name: &str) -> Result<SplitBranch, CliError> {
    [SplitBranch::Unsplit, SplitBranch::Residual, SplitBranch::Fibre]
        .into_iter()
        .find(|b| b.name() == name)
        .ok_or_else(|| CliError::Schema(format!("unknown branch {name:?}")))
}

fn recheck_split(model: &ConeModel, input: &[Int], v: &Value) -> Result<Vec<CheckEntry>, CliError> {
    let basis = model.basis();
    let stored = as_ints(field(v, "class")?)?;
    let permutation = as_usizes(field(v, "permutation")?)?;
    let sorted = model.class(as_ints(field(v, "sorted")?)?)?;
    let s = Rank4Split {
        permutation,
        sorted,
        branch: branch_from(as_str(field(v, "branch")?)?)?,
        summands: summands_from(field(v, "summands")?, basis)?,
    };
    let mut out = vec![CheckEntry::flag("split_class_matches_input", stored == input)];
    for e in tail_permutation_checks(&stored, &s.sorted.coords, &s.permutation) {
        out.push(CheckEntry::new(format!("split_{}", e.name), e.pass, e.details));
    }
    let m1 = &s.sorted.coords[1];
    let m5 = -&s.sorted.coords[model.dim() - 1];
    let expected = if m5 <= Int::one() {
        SplitBranch::Unsplit
    } else if m1 - Int::from(2) * &m5 >= Int::one() {
        SplitBranch::Residual
    } else {
        SplitBranch::Fibre
    };
    out.push(CheckEntry::flag("split_branch_matches", s.branch == expected));
    for (name, ok) in s.recheck() {
        out.push(CheckEntry::flag(format!("split_{name}"), ok));
    }
    Ok(out)
}

fn ledger_json(g: &DegenerationLedger) -> Value {
    object(vec![
        ("r", Value::from(g.r)),
        ("permutation", usizes(&g.permutation)),
        ("sorted", ints(&g.sorted)),
        ("restriction_y1", class(&g.restriction_y1)),
        ("restriction_y2", int(&g.restriction_y2)),
        ("m_class", class(&g.m_class)),
        ("summands", summands_json(&g.summands)),
        ("anticanonical", class(&g.anticanonical)),
        ("anticanonical_square", int(&g.anticanonical_square)),
        ("m_dot_d", int(&g.m_dot_d)),
        ("lambda", int(&g.lambda)),
        ("m", int(&g.m)),
        ("support", Value::from(g.support)),
        ("m1_at_least_3", Value::Bool(g.m1_at_least_3)),
    ])
}

fn recheck_ledger(r: usize, input: &[Int], v: &Value) -> Result<Vec<CheckEntry>, CliError> {
    let stored_r = as_usize(field(v, "r")?)?;
    if stored_r != r || !(2..=5).contains(&r) {
        return Err(CliError::Schema(format!("ledger r = {stored_r} does not match input r = {r}")));
    }
    let basis = BasisId::Y1(r);
    let y1 = |k: &str| -> Result<DivisorClass, CliError> {
        let c = as_ints(field(v, k)?)?;
        if c.len() != 2 * r {
            return Err(CliError::Schema(format!("{k} needs {} coordinates", 2 * r)));
        }
        Ok(DivisorClass::new(basis, c))
    };
    let sorted = as_ints(field(v, "sorted")?)?;
    if sorted.len() != r + 1 {
        return Err(CliError::Schema(format!("sorted needs {} coordinates", r + 1)));
    }
    let g = DegenerationLedger {
        r,
        permutation: as_usizes(field(v, "permutation")?)?,
        sorted,
        restriction_y1: y1("restriction_y1")?,
        restriction_y2: as_int(field(v, "restriction_y2")?)?,
        m_class: y1("m_class")?,
        summands: summands_from(field(v, "summands")?, basis)?,
        anticanonical: y1("anticanonical")?,
        anticanonical_square: as_int(field(v, "anticanonical_square")?)?,
        m_dot_d: as_int(field(v, "m_dot_d")?)?,
        lambda: as_int(field(v, "lambda")?)?,
        m: as_int(field(v, "m")?)?,
        support: as_usize(field(v, "support")?)?,
        m1_at_least_3: as_bool(field(v, "m1_at_least_3")?)?,
    };
    let mut out = tail_permutation_checks(input, &g.sorted, &g.permutation);
    let support = (2..=r).rev().find(|&j| g.sorted[j].is_negative()).unwrap_or(1);
    out.push(CheckEntry::flag("support", support == g.support));
    out.push(CheckEntry::flag("m1_flag", g.m1_at_least_3 == (g.sorted[1] >= Int::from(3))));
    out.extend(flags(g.recheck()?));
    Ok(out)
}

fn hypotheses_json(h: &HypothesisReport) -> Value {
    let a2 = h.a2.as_ref().map_or(Value::Null, |w| Value::Array(w.parts.iter().map(|p| ints(p)).collect()));
    let a3 = h.a3.as_ref().map_or(Value::Null, |w| {
        let fl = w.flags.named().iter().map(|(n, b)| (*n, Value::Bool(*b))).collect();
        object(vec![("l1", ints(&w.l1)), ("l2", ints(&w.l2)), ("flags", object(fl))])
    });
    object(vec![("a1", Value::Bool(h.a1)), ("a2", a2), ("a3", a3), ("search_box", ints(&h.search_box))])
}

fn flags_from(v: &Value) -> Result<A3Flags, CliError> {
    let f = |k: &str| as_bool(field(v, k)?);
    let out = A3Flags {
        sum_matches: f("sum_matches")?,
        l_dot_l1_positive: f("l_dot_l1_positive")?,
        l_dot_l2_positive: f("l_dot_l2_positive")?,
        l1_square_positive: f("l1_square_positive")?,
        l2_square_minus_two: f("l2_square_minus_two")?,
        l1_not_in_2lambda: f("l1_not_in_2lambda")?,
        difference_primitive: f("difference_primitive")?,
        numerical_bound: f("numerical_bound")?,
    };
    if v.as_object().map(|m| m.len()) != Some(out.named().len()) {
        return Err(CliError::Schema("unexpected A3 flag".into()));
    }
    Ok(out)
}

fn two_coords(v: &Value) -> Result<Vec<Int>, CliError> {
    let c = as_ints(v)?;
    if c.len() != 2 {
        return Err(CliError::Schema("witness classes need 2 coordinates".into()));
    }
    Ok(c)
}

fn hypotheses_from(v: &Value) -> Result<HypothesisReport, CliError> {
    let a2 = field(v, "a2")?;
    let a2 = if a2.is_null() {
        None
    } else {
        let parts: Vec<Vec<Int>> = as_array(a2)?.iter().map(two_coords).collect::<Result<_, _>>()?;
        let parts: [Vec<Int>; 3] = parts.try_into().map_err(|_| CliError::Schema("a2 needs three parts".into()))?;
        Some(A2Witness { parts })
    };
    let a3 = field(v, "a3")?;
    let a3 = if a3.is_null() {
        None
    } else {
        Some(A3Witness {
            l1: two_coords(field(a3, "l1")?)?,
            l2: two_coords(field(a3, "l2")?)?,
            flags: flags_from(field(a3, "flags")?)?,
        })
    };
    Ok(HypothesisReport { a1: as_bool(field(v, "a1")?)?, a2, a3, search_box: as_ints(field(v, "search_box")?)? })
}
