//! Primitive embeddings into the reference lattices and their certificates.
//!
//! Every constructor returns a [`Certificate`] whose `checks` are a pure
//! function of its other fields; [`Certificate::recompute_checks`] rebuilds
//! them from scratch, replaying the reflection trace.

mod a3;
mod certify;
mod degeneration;
mod even;
mod hypotheses;
mod nefify;
mod odd;
mod rank4;

use num_traits::{Signed, Zero};

use crate::cones::{build_model, is_big, is_nef, reflect_coords, ConeModel, Flavor};
use crate::error::{Error, Result};
use crate::lattice::{primitivity, Primitivity, Rank2Lattice};
use crate::squares::SquaresConfig;
use crate::{int, DivisorClass, Embedding, GramMatrix, Int, Matrix};

pub use a3::{a3_images, embed_a3_explicit};
pub use certify::certify;
pub use degeneration::{restrict_and_decompose, y1_gram, DegenerationLedger};
pub use even::{embed_even, embed_even_with};
pub use hypotheses::{a3_flags, verify_hypotheses, verify_hypotheses_with, A2Witness, A3Flags, A3Witness, HypothesisReport};
pub use nefify::{nefify, nefify_pair, nefify_pair_with, nefify_with, PairNefification};
pub use odd::{embed_odd, embed_odd_with};
pub use rank4::{embed_rank4, rank4_gram, rank4_split, Rank4Split, SplitBranch};

pub const DEFAULT_STEP_BUDGET: usize = 100_000;
pub const DEFAULT_M1_BOUND: u64 = 10_000;
pub const DEFAULT_SEARCH_SLACK: i64 = 2;

/// Search bounds shared by the constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbedConfig {
    pub squares: SquaresConfig,
    /// Largest `m1` tried by the odd construction.
    pub m1_bound: u64,
    /// Maximum number of reflections in one nef-ification.
    pub step_budget: usize,
    /// Extra room, per coordinate, for hypothesis witness searches.
    pub search_slack: i64,
}

impl Default for EmbedConfig {
    fn default() -> Self {
        EmbedConfig {
            squares: SquaresConfig::default(),
            m1_bound: DEFAULT_M1_BOUND,
            step_budget: DEFAULT_STEP_BUDGET,
            search_slack: DEFAULT_SEARCH_SLACK,
        }
    }
}

/// What was embedded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Rank2(Rank2Lattice<Int>),
    /// One of the two fixed rank-4 lattices, numbered 1 and 2.
    Rank4(u8),
    /// A lattice given only by its Gram matrix.
    Explicit(Matrix),
}

impl Source {
    pub fn gram(&self) -> Result<GramMatrix> {
        match self {
            Source::Rank2(l) => Ok(l.gram()),
            Source::Rank4(w) => rank4_gram(*w),
            Source::Explicit(m) => GramMatrix::free(m.clone()),
        }
    }
}

/// One reflection: the root used, `σ(L).R` before it, `σ(L).D` after it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub root: DivisorClass,
    pub pairing: Int,
    pub degree: Int,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReflectionTrace {
    /// Whether the embedding was negated before the first reflection.
    pub negated: bool,
    /// `σ(L).D` after the sign normalisation.
    pub initial_degree: Option<Int>,
    pub steps: Vec<TraceStep>,
}

impl ReflectionTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Flavor-specific conditions carried by some certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtraCondition {
    /// `σ(L).A >= 3`.
    LDotAAtLeast3,
    /// `σ(L).E5 <= 2`.
    LDotE5AtMost2,
}

impl ExtraCondition {
    pub const ALL: [ExtraCondition; 2] = [ExtraCondition::LDotAAtLeast3, ExtraCondition::LDotE5AtMost2];

    pub fn from_name(name: &str) -> Option<ExtraCondition> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            ExtraCondition::LDotAAtLeast3 => "l_dot_a_at_least_3",
            ExtraCondition::LDotE5AtMost2 => "l_dot_e5_at_most_2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtraCheck {
    pub condition: ExtraCondition,
    pub pass: bool,
    pub value: Int,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NefCheck {
    pub nef: bool,
    pub min_pairing: Option<Int>,
    pub failing: Option<DivisorClass>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigCheck {
    pub big: bool,
    pub square: Int,
    pub degree: Int,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checks {
    /// Initial and final matrices both pull the target Gram back to the source Gram.
    pub gram_preserved: bool,
    pub primitive: Primitivity<Int>,
    /// Replaying the trace from the initial embedding reproduces the final one.
    pub trace_replays: bool,
    /// `image_of_l` is the final embedding applied to `l_coords`.
    pub image_consistent: bool,
    pub nef: Option<NefCheck>,
    pub big: Option<BigCheck>,
    pub extra: Vec<ExtraCheck>,
}

impl Checks {
    pub fn all_pass(&self) -> bool {
        self.gram_preserved
            && self.primitive.primitive
            && self.trace_replays
            && self.image_consistent
            && self.nef.as_ref().is_none_or(|n| n.nef)
            && self.big.as_ref().is_none_or(|b| b.big)
            && self.extra.iter().all(|e| e.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub source: Source,
    pub flavor: Flavor,
    pub r: usize,
    /// Embedding as constructed, before any sign change or reflection.
    pub initial: Embedding,
    pub trace: ReflectionTrace,
    pub embedding: Embedding,
    /// Source coordinates of the designated class, if any.
    pub l_coords: Option<Vec<Int>>,
    pub image_of_l: Option<DivisorClass>,
    pub extra_conditions: Vec<ExtraCondition>,
    /// Free-form provenance: witness choices, branch names, flags.
    pub notes: Vec<(String, String)>,
    pub checks: Checks,
}

impl Certificate {
    pub fn model(&self) -> Result<ConeModel> {
        build_model(self.flavor, self.r)
    }

    /// Recomputes every check from the raw fields.
    pub fn recompute_checks(&self) -> Result<Checks> {
        let model = self.model()?;
        compute_checks(
            &model,
            &self.source,
            &self.initial,
            &self.trace,
            &self.embedding,
            self.l_coords.as_deref(),
            self.image_of_l.as_ref(),
            &self.extra_conditions,
        )
    }

    /// Stored checks agree with a fresh recomputation.
    pub fn is_consistent(&self) -> bool {
        self.recompute_checks().is_ok_and(|c| c == self.checks)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.all_pass()
    }

    /// Builds a certificate, deriving `image_of_l` and the checks.
    #[allow(clippy::too_many_arguments)]
    pub fn assemble(
        source: Source,
        model: &ConeModel,
        initial: Embedding,
        trace: ReflectionTrace,
        embedding: Embedding,
        l_coords: Option<Vec<Int>>,
        extra_conditions: Vec<ExtraCondition>,
        notes: Vec<(String, String)>,
    ) -> Result<Certificate> {
        let image_of_l = match &l_coords {
            Some(l) => Some(DivisorClass::new(model.basis(), embedding.apply(l)?)),
            None => None,
        };
        Certificate::from_raw(source, model, initial, trace, embedding, l_coords, image_of_l, extra_conditions, notes)
    }

    /// Builds a certificate from stored fields, computing only the checks.
    #[allow(clippy::too_many_arguments)]
    pub fn from_raw(
        source: Source,
        model: &ConeModel,
        initial: Embedding,
        trace: ReflectionTrace,
        embedding: Embedding,
        l_coords: Option<Vec<Int>>,
        image_of_l: Option<DivisorClass>,
        extra_conditions: Vec<ExtraCondition>,
        notes: Vec<(String, String)>,
    ) -> Result<Certificate> {
        let checks = compute_checks(
            model,
            &source,
            &initial,
            &trace,
            &embedding,
            l_coords.as_deref(),
            image_of_l.as_ref(),
            &extra_conditions,
        )?;
        Ok(Certificate {
            source,
            flavor: model.flavor(),
            r: model.r(),
            initial,
            trace,
            embedding,
            l_coords,
            image_of_l,
            extra_conditions,
            notes,
            checks,
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn compute_checks(
    model: &ConeModel,
    source: &Source,
    initial: &Embedding,
    trace: &ReflectionTrace,
    embedding: &Embedding,
    l: Option<&[Int]>,
    image_of_l: Option<&DivisorClass>,
    extras: &[ExtraCondition],
) -> Result<Checks> {
    let source_gram = source.gram()?;
    let target_ok = |e: &Embedding| {
        e.target_gram == *model.gram()
            && e.matrix.rows() == model.dim()
            && e.matrix.cols() == source_gram.dim()
            && e.source_gram.matrix() == source_gram.matrix()
    };
    let gram_preserved = target_ok(initial)
        && target_ok(embedding)
        && model.gram().pullback(&initial.matrix)? == *source_gram.matrix()
        && model.gram().pullback(&embedding.matrix)? == *source_gram.matrix();
    let primitive = primitivity(&embedding.matrix)?;
    let trace_replays = gram_preserved && replay(model, initial, trace, l)?.is_some_and(|m| m == embedding.matrix);

    let image = match l {
        Some(l) if l.len() == embedding.matrix.cols() => Some(DivisorClass::new(model.basis(), embedding.apply(l)?)),
        _ => None,
    };
    let image_consistent = image.as_ref() == image_of_l && l.is_some() == image.is_some();

    let (nef, big, extra) = match &image {
        Some(img) => {
            let rep = is_nef(model, img)?;
            let nef = NefCheck { nef: rep.nef, min_pairing: rep.min_pairing, failing: rep.failing.map(|(c, _)| c) };
            let big = BigCheck {
                big: is_big(model, img)?,
                square: model.square(img)?,
                degree: model.pair(img, model.ample_reference())?,
            };
            let extra = extras
                .iter()
                .map(|&c| extra_check(model, img, c))
                .collect::<Result<Vec<_>>>()?;
            (Some(nef), Some(big), extra)
        }
        None => (None, None, Vec::new()),
    };
    Ok(Checks { gram_preserved, primitive, trace_replays, image_consistent, nef, big, extra })
}

fn extra_check(model: &ConeModel, img: &DivisorClass, c: ExtraCondition) -> Result<ExtraCheck> {
    Ok(match c {
        ExtraCondition::LDotAAtLeast3 => {
            let value = model.pair(img, &model.unit(0))?;
            ExtraCheck { condition: c, pass: value >= int(3), value }
        }
        ExtraCondition::LDotE5AtMost2 => {
            if model.r() < 5 {
                return Err(Error::OutOfRange("E5 needs r >= 5".into()));
            }
            let value = model.pair(img, &model.unit(5))?;
            ExtraCheck { condition: c, pass: value <= int(2), value }
        }
    })
}

/// Replays a trace; `None` if any step disagrees with the deterministic rule.
fn replay(model: &ConeModel, initial: &Embedding, trace: &ReflectionTrace, l: Option<&[Int]>) -> Result<Option<Matrix>> {
    let Some(l) = l else {
        let untouched = !trace.negated && trace.steps.is_empty() && trace.initial_degree.is_none();
        return Ok(untouched.then(|| initial.matrix.clone()));
    };
    if l.len() != initial.matrix.cols() {
        return Ok(None);
    }
    let d = &model.ample_reference().coords;
    let mut m = initial.matrix.clone();
    let mut image = m.mul_vec(l)?;
    let degree0 = model.pair_coords(&image, d)?;
    if degree0.is_negative() != trace.negated {
        return Ok(None);
    }
    if trace.negated {
        m = m.neg();
        image = image.iter().map(|x| -x).collect();
    }
    let mut degree = model.pair_coords(&image, d)?;
    if trace.initial_degree.as_ref() != Some(&degree) {
        return Ok(None);
    }
    for step in &trace.steps {
        let Some(root) = nefify::first_negative(model, &image)? else {
            return Ok(None);
        };
        if *root != step.root || model.pair_coords(&image, &root.coords)? != step.pairing {
            return Ok(None);
        }
        m = reflect_matrix_columns(model, &m, &root.coords)?;
        image = reflect_coords(model, &root.coords, &image)?;
        let next = model.pair_coords(&image, d)?;
        if next != step.degree || next >= degree {
            return Ok(None);
        }
        degree = next;
    }
    if nefify::first_negative(model, &image)?.is_some() {
        return Ok(None);
    }
    Ok(Some(m))
}

pub(crate) fn reflect_matrix_columns(model: &ConeModel, m: &Matrix, root: &[Int]) -> Result<Matrix> {
    let cols = m
        .columns()
        .iter()
        .map(|c| reflect_coords(model, root, c))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_columns(&cols)
}

/// Inverse of a 2x2 integer matrix with determinant `±1`.
pub(crate) fn unimodular_inverse(u: &Matrix) -> Result<Matrix> {
    let det = u.determinant()?;
    if det.abs() != int(1) {
        return Err(Error::Internal(format!("change of basis has determinant {det}")));
    }
    Matrix::from_rows(vec![
        vec![&det * &u[(1, 1)], -&det * &u[(0, 1)]],
        vec![-&det * &u[(1, 0)], &det * &u[(0, 0)]],
    ])
}

/// An embedding in the reduced basis, transported back to the original one.
pub(crate) fn transport(source_gram: GramMatrix, model: &ConeModel, reduced_columns: &[Vec<Int>], change: &Matrix) -> Result<Embedding> {
    let reduced = Matrix::from_columns(reduced_columns)?;
    let matrix = reduced.mul(&unimodular_inverse(change)?)?;
    Embedding::new(source_gram, model.gram().clone(), matrix)
}

pub(crate) fn is_zero_vec(v: &[Int]) -> bool {
    v.iter().all(Zero::is_zero)
}
