//! The MacNeille completion: consistent pairs, fixed pairs, closure,
//! exhaustive construction, and the canonical embedding.
//!
//! A pair of weight vectors (X, Y) is *consistent* when `Y ∘ X ⪯ C`
//! entrywise; the completion's points are exactly the pairs fixed by the
//! Isbell maps (equivalently, the maximal consistent pairs). For posets
//! over the truth values this is the classical completion by cuts; for
//! metric data it is the directed tight span. Construction enumerates
//! candidate presheaves over a finite carrier, so it is capped and may
//! run in parallel; all query operations (consistency, membership,
//! closure, hom) are exact and work over the infinite rational quantales
//! too.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::isbell::{self, Copresheaf, Presheaf};
use crate::qcategory::{QCategory, QFunctor};
use crate::qmatrix::{ObjSet, QMatrix};
use crate::quantale::QElem;

/// Default bound on enumerated candidate presheaves.
pub const DEFAULT_CANDIDATE_CAP: u128 = 10_000_000;

/// A raw pair of weight vectors over a base category: a column `X` and a
/// row `Y`, with no inequality requirements. Candidate input for
/// membership, maximality and closure queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresheafPair {
    base: QCategory,
    x: QMatrix,
    y: QMatrix,
}

impl PresheafPair {
    pub fn new(base: QCategory, x: Vec<QElem>, y: Vec<QElem>) -> Result<PresheafPair> {
        let q = base.quantale().clone();
        let xm = QMatrix::new(
            q.clone(),
            base.objects().clone(),
            ObjSet::point(),
            x.into_iter().map(|v| vec![v]).collect(),
        )?;
        let ym = QMatrix::new(q, ObjSet::point(), base.objects().clone(), vec![y])?;
        Ok(PresheafPair { base, x: xm, y: ym })
    }

    pub fn base(&self) -> &QCategory {
        &self.base
    }

    pub fn x(&self) -> &QMatrix {
        &self.x
    }

    pub fn y(&self) -> &QMatrix {
        &self.y
    }

    pub fn x_vec(&self) -> Vec<QElem> {
        self.x.col_vec(0)
    }

    pub fn y_vec(&self) -> Vec<QElem> {
        self.y.row_vec(0)
    }
}

/// A point of the completion: a presheaf and copresheaf that are each
/// other's residual against the hom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPair {
    p: Presheaf,
    r: Copresheaf,
}

impl FixedPair {
    pub fn presheaf(&self) -> &Presheaf {
        &self.p
    }

    pub fn copresheaf(&self) -> &Copresheaf {
        &self.r
    }

    pub fn base(&self) -> &QCategory {
        self.p.base()
    }

    /// The underlying raw pair.
    pub fn as_pair(&self) -> PresheafPair {
        PresheafPair {
            base: self.p.base().clone(),
            x: self.p.values().clone(),
            y: self.r.values().clone(),
        }
    }
}

/// Outcome of the exhaustive maximality scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalityReport {
    /// Whether the pair lies in the scanned set at all (`Y ∘ X ⪯ C`).
    pub consistent: bool,
    /// Whether no strictly larger consistent pair exists.
    pub maximal: bool,
    /// A strictly dominating consistent pair, when one was found.
    pub dominating: Option<PresheafPair>,
}

/// Consistency `Y ∘ X ⪯ C`: every `Y(c') ∘ X(c)` below `C(c,c')`.
pub fn is_consistent(pair: &PresheafPair) -> bool {
    pair.y
        .compose(&pair.x)
        .and_then(|yx| yx.leq(pair.base.hom()))
        .expect("pair shapes are validated at construction")
}

/// Membership in the completion: both fixed-pair equations hold,
/// `X = Y ↘ C` and `Y = C ↙ X`.
pub fn is_member(pair: &PresheafPair) -> bool {
    let hom = pair.base.hom();
    let x_back = pair.y.rlift(hom).expect("validated shapes");
    if x_back != pair.x {
        return false;
    }
    let y_back = hom.rext(&pair.x).expect("validated shapes");
    y_back == pair.y
}

/// Exhaustively verifies that no strictly larger consistent pair
/// dominates this one. Finite carriers only; agreement with [`is_member`]
/// is a theorem checked by the test suite, not assumed here.
pub fn maximality(pair: &PresheafPair) -> Result<MaximalityReport> {
    let q = pair.base.quantale();
    if !q.is_finite() {
        return Err(Error::Unsupported {
            quantale: q.to_string(),
            operation: "exhaustive maximality scan (use membership instead)".into(),
        });
    }
    if !is_consistent(pair) {
        return Ok(MaximalityReport {
            consistent: false,
            maximal: false,
            dominating: None,
        });
    }
    let carrier = q.enumerate_carrier()?;
    let n = pair.base.len();
    // Per-slot candidates: everything above the current entry.
    let mut slots: Vec<Vec<QElem>> = Vec::with_capacity(2 * n);
    for c in 0..n {
        slots.push(above(q, &carrier, pair.x.entry(c, 0))?);
    }
    for c in 0..n {
        slots.push(above(q, &carrier, pair.y.entry(0, c))?);
    }
    let total: u128 = slots.iter().map(|s| s.len() as u128).product();
    if total > DEFAULT_CANDIDATE_CAP {
        return Err(Error::ResourceCap {
            context: "maximality scan over dominating pairs".into(),
            needed: total,
            cap: DEFAULT_CANDIDATE_CAP,
        });
    }
    let mut digits = vec![0usize; 2 * n];
    loop {
        let xs: Vec<QElem> = (0..n).map(|i| slots[i][digits[i]].clone()).collect();
        let ys: Vec<QElem> = (0..n)
            .map(|i| slots[n + i][digits[n + i]].clone())
            .collect();
        let candidate = PresheafPair::new(pair.base.clone(), xs, ys)?;
        if candidate != *pair && is_consistent(&candidate) {
            return Ok(MaximalityReport {
                consistent: true,
                maximal: false,
                dominating: Some(candidate),
            });
        }
        // odometer step
        let mut i = 0;
        loop {
            if i == 2 * n {
                return Ok(MaximalityReport {
                    consistent: true,
                    maximal: true,
                    dominating: None,
                });
            }
            digits[i] += 1;
            if digits[i] < slots[i].len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

fn above(q: &crate::quantale::Quantale, carrier: &[QElem], e: &QElem) -> Result<Vec<QElem>> {
    let mut out = Vec::new();
    for c in carrier {
        if q.leq(e, c)? {
            out.push(c.clone());
        }
    }
    Ok(out)
}

/// Sends a consistent pair to the least completion point dominating it:
/// `(P, R) = ((C ↙ X) ↘ C, C ↙ X)`. Errors when the pair is not
/// consistent, since no dominating point need exist then.
pub fn closure(pair: &PresheafPair) -> Result<FixedPair> {
    if !is_consistent(pair) {
        return Err(Error::Precondition {
            context: "closure needs a consistent pair (Y ∘ X ⪯ C)".into(),
        });
    }
    let hom = pair.base.hom();
    let r_values = hom.rext(&pair.x).expect("validated shapes");
    let p_values = r_values.rlift(hom).expect("validated shapes");
    let p = Presheaf::new(pair.base.clone(), p_values)
        .expect("residuals against the hom form a presheaf");
    let r = Copresheaf::new(pair.base.clone(), r_values)
        .expect("residuals against the hom form a copresheaf");
    let fixed = FixedPair { p, r };
    debug_assert!(is_member(&fixed.as_pair()));
    debug_assert!(pair.x.leq(fixed.p.values()).unwrap());
    debug_assert!(pair.y.leq(fixed.r.values()).unwrap());
    Ok(fixed)
}

/// The MacNeille completion of a base category: all fixed pairs in
/// canonical order, their hom matrix, and the embedding of the base.
#[derive(Debug, Clone)]
pub struct Completion {
    base: QCategory,
    category: QCategory,
    objects: Vec<FixedPair>,
    embedding: QFunctor,
}

impl Completion {
    pub fn base(&self) -> &QCategory {
        &self.base
    }

    /// The completion as a category; objects are named `m0, m1, …` in
    /// canonical order.
    pub fn category(&self) -> &QCategory {
        &self.category
    }

    pub fn objects(&self) -> &[FixedPair] {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// The canonical embedding of the base into the completion.
    pub fn embedding(&self) -> &QFunctor {
        &self.embedding
    }

    /// Completion index of a base object's image.
    pub fn embedding_index(&self, c: usize) -> usize {
        self.embedding.apply(c)
    }

    /// Index of a fixed pair among the completion's objects.
    pub fn position(&self, o: &FixedPair) -> Result<usize> {
        self.objects
            .iter()
            .position(|m| m == o)
            .ok_or_else(|| Error::UnknownObject {
                id: "fixed pair outside this completion".into(),
            })
    }

    /// Hom between two completion points, by the presheaf formula.
    pub fn hom_between(&self, o: &FixedPair, o1: &FixedPair) -> Result<QElem> {
        let (i, j) = (self.position(o)?, self.position(o1)?);
        Ok(self.category.hom_at(i, j).clone())
    }
}

/// Decodes candidate `code` into a value vector, most significant digit
/// first, digits running through the carrier in enumeration order. This
/// makes enumeration order equal lexicographic order on value vectors.
fn decode_values(carrier: &[QElem], n: usize, code: usize) -> Vec<QElem> {
    let mut rest = code;
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        values.push(carrier[rest % carrier.len()].clone());
        rest /= carrier.len();
    }
    values.reverse();
    values
}

fn enumeration_size(base: &QCategory, cap: u128, what: &str) -> Result<usize> {
    let carrier_len = base.quantale().carrier_len()?;
    let total = (carrier_len as u128)
        .checked_pow(base.len() as u32)
        .unwrap_or(u128::MAX);
    if total > cap {
        return Err(Error::ResourceCap {
            context: what.into(),
            needed: total,
            cap,
        });
    }
    if total > u128::from(u32::MAX) {
        return Err(Error::ResourceCap {
            context: format!("{what} (address space)"),
            needed: total,
            cap: u128::from(u32::MAX),
        });
    }
    Ok(total as usize)
}

/// Builds the full completion by scanning all candidate presheaves.
/// Needs a finite carrier and at most `cap` candidates; candidates are
/// evaluated in parallel but collected in canonical order.
pub fn construct(base: &QCategory, cap: u128) -> Result<Completion> {
    let q = base.quantale().clone();
    if !q.is_finite() {
        return Err(Error::Unsupported {
            quantale: q.to_string(),
            operation: "completion construction (pointwise queries stay available)".into(),
        });
    }
    let total = enumeration_size(base, cap, "completion candidate presheaves")?;
    let carrier = q.enumerate_carrier()?;
    let n = base.len();
    let hom = base.hom();

    let fixed_vectors: Vec<Vec<QElem>> = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let values = decode_values(&carrier, n, code);
            // presheaf inequality first: it is the cheap filter
            for c in 0..n {
                for c1 in 0..n {
                    let moved = q.mul(&values[c1], hom.entry(c, c1)).expect("carrier");
                    if !q.leq(&moved, &values[c]).expect("carrier") {
                        return None;
                    }
                }
            }
            let x = QMatrix::new(
                q.clone(),
                base.objects().clone(),
                ObjSet::point(),
                values.iter().map(|v| vec![v.clone()]).collect(),
            )
            .expect("validated entries");
            let r = hom.rext(&x).expect("validated shapes");
            let back = r.rlift(hom).expect("validated shapes");
            (back == x).then_some(values)
        })
        .collect();

    let objects: Vec<FixedPair> = fixed_vectors
        .into_iter()
        .map(|values| {
            let p = Presheaf::from_values(base.clone(), values).expect("filtered above");
            let r = isbell::isbell_left(&p);
            FixedPair { p, r }
        })
        .collect();

    let ids =
        ObjSet::new((0..objects.len()).map(|i| format!("m{i}")).collect()).expect("fresh ids");
    let hom_matrix = QMatrix::from_fn(q.clone(), ids.clone(), ids, |i, j| {
        let by_p = isbell::presheaf_hom(objects[i].presheaf(), objects[j].presheaf())?;
        let by_r = isbell::copresheaf_hom(objects[i].copresheaf(), objects[j].copresheaf())?;
        assert_eq!(
            by_p, by_r,
            "presheaf and copresheaf hom formulas must agree on fixed pairs"
        );
        Ok(by_p)
    })?;
    let category = QCategory::new(hom_matrix)?;

    let map: Vec<usize> = (0..n)
        .map(|c| {
            let image = isbell::yoneda(base, c);
            objects
                .iter()
                .position(|o| o.presheaf() == &image)
                .expect("representable pairs are fixed")
        })
        .collect();
    let embedding = QFunctor::new(base.clone(), category.clone(), map)?;

    Ok(Completion {
        base: base.clone(),
        category,
        objects,
        embedding,
    })
}

/// Materializes the whole presheaf category over a finite carrier: all
/// presheaves as objects `p0, p1, …` in canonical order, with the
/// embedding sending each base object to its representable. Mostly a
/// counterexample factory: unlike the completion, this embedding is
/// dense but usually not codense.
pub fn presheaf_category(base: &QCategory, cap: u128) -> Result<(QCategory, QFunctor)> {
    let q = base.quantale().clone();
    if !q.is_finite() {
        return Err(Error::Unsupported {
            quantale: q.to_string(),
            operation: "materializing the presheaf category".into(),
        });
    }
    let _ = enumeration_size(base, cap, "presheaf-category candidates")?;
    let presheaves = isbell::enumerate_presheaves(base)?;
    let ids =
        ObjSet::new((0..presheaves.len()).map(|i| format!("p{i}")).collect()).expect("fresh ids");
    let hom_matrix = QMatrix::from_fn(q, ids.clone(), ids, |i, j| {
        isbell::presheaf_hom(&presheaves[i], &presheaves[j])
    })?;
    let category = QCategory::new(hom_matrix)?;
    let map: Vec<usize> = (0..base.len())
        .map(|c| {
            let image = isbell::yoneda(base, c);
            presheaves
                .iter()
                .position(|p| p == &image)
                .expect("representables are presheaves")
        })
        .collect();
    let embedding = QFunctor::new(base.clone(), category.clone(), map)?;
    Ok((category, embedding))
}
