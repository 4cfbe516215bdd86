//! Theorem-level decision procedures: powers and copowers, the three
//! legs of completeness, injectivity by retraction search, essential
//! embeddings, Kan extensions, the extension solver, ball systems, and
//! Isbell convexity.
//!
//! Everything here is decidable at desk scale and exact; searches are
//! exhaustive in canonical object order so verdicts, certificates, and
//! first counterexamples are deterministic. Operations needing an
//! enumerable scalar carrier report themselves unsupported over the
//! rational quantales instead of sampling silently — convexity over
//! those is an explicitly bounded grid search, refutation-complete on
//! the grid only.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::isbell::{coyoneda, yoneda};
use crate::macneille::{self, closure, is_consistent, FixedPair, PresheafPair};
use crate::qcategory::{QCategory, QFunctor};
use crate::qmatrix::ObjSet;
use crate::quantale::{QElem, Quantale, QuantaleKind};
use crate::rational::ExtRat;

/// Largest isomorphism-class count the order-completeness subset scan
/// will take on.
pub const MAX_ORDER_CLASSES: usize = 20;

/// The three legs of completeness, with first-failure witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletenessReport {
    pub powered: bool,
    /// First (object, scalar) with no power, when not powered.
    pub power_witness: Option<(usize, QElem)>,
    pub copowered: bool,
    pub copower_witness: Option<(usize, QElem)>,
    pub order_complete: bool,
    /// Representative objects of a class subset lacking a join or meet.
    pub order_witness: Option<Vec<usize>>,
    /// Conjunction of the three legs.
    pub complete: bool,
}

/// Injectivity verdict plus the retraction certificate when one exists.
#[derive(Debug, Clone)]
pub struct InjectivityReport {
    pub injective: bool,
    /// A retraction of the completion onto the category, witnessing
    /// injectivity.
    pub retraction: Option<QFunctor>,
}

/// A Kan extension attempt: either the object map, or the first
/// obstruction met in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KanOutcome {
    /// Object assignment for the extension, indexed like the middle
    /// category's objects.
    Extension(Vec<usize>),
    /// No extension: a copower/power or an order join/meet is missing
    /// at the named object.
    Obstructed { at: usize, why: String },
}

impl KanOutcome {
    pub fn map(&self) -> Option<&[usize]> {
        match self {
            KanOutcome::Extension(m) => Some(m),
            KanOutcome::Obstructed { .. } => None,
        }
    }
}

/// One ball of a system: a center and a left/right radius pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub at: String,
    pub x: QElem,
    pub y: QElem,
}

/// Verdict on a ball system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallReport {
    /// Pairwise compatibility — equivalently, consistency of the
    /// induced pair.
    pub consistent: bool,
    /// First object lying in every ball, if one exists.
    pub witness: Option<usize>,
    /// Completion point dominating the system (present iff consistent).
    pub hull_point: Option<FixedPair>,
    /// The weight pair induced by the system.
    pub induced: PresheafPair,
}

/// Convexity verdict with the first unwitnessed consistent pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexityVerdict {
    pub convex: bool,
    pub counterexample: Option<PresheafPair>,
}

fn require_object(c: &QCategory, obj: usize) -> Result<()> {
    if obj < c.len() {
        Ok(())
    } else {
        Err(Error::UnknownObject {
            id: format!("object index {obj} of {}", c.objects()),
        })
    }
}

/// First object `c'` with `C(d, c') = x ↘ C(d, c)` for every `d`, i.e.
/// the power of `c` by the scalar `x`. Distinct hits are isomorphic, so
/// the first in canonical order is a canonical choice.
pub fn find_power(c: &QCategory, obj: usize, x: &QElem) -> Result<Option<usize>> {
    require_object(c, obj)?;
    let q = c.quantale();
    let hom = c.hom();
    'candidates: for cand in 0..c.len() {
        for d in 0..c.len() {
            let want = q.rlift(x, hom.entry(d, obj))?;
            if hom.entry(d, cand) != &want {
                continue 'candidates;
            }
        }
        return Ok(Some(cand));
    }
    Ok(None)
}

/// First object `c'` with `C(c', d) = C(c, d) ↙ x` for every `d`: the
/// copower of `c` by `x`.
pub fn find_copower(c: &QCategory, obj: usize, x: &QElem) -> Result<Option<usize>> {
    require_object(c, obj)?;
    let q = c.quantale();
    let hom = c.hom();
    'candidates: for cand in 0..c.len() {
        for d in 0..c.len() {
            let want = q.rext(hom.entry(obj, d), x)?;
            if hom.entry(cand, d) != &want {
                continue 'candidates;
            }
        }
        return Ok(Some(cand));
    }
    Ok(None)
}

/// Isomorphism classes of the underlying preorder: per-object class
/// index plus one representative object per class, in first-seen order.
fn iso_classes(c: &QCategory) -> (Vec<usize>, Vec<usize>) {
    let pre = c.underlying_preorder();
    let n = c.len();
    let mut class = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..n {
        for (k, &r) in reps.iter().enumerate() {
            if pre[i][r] && pre[r][i] {
                class[i] = k;
                break;
            }
        }
        if class[i] == usize::MAX {
            class[i] = reps.len();
            reps.push(i);
        }
    }
    (class, reps)
}

fn order_completeness(c: &QCategory) -> Result<(bool, Option<Vec<usize>>)> {
    let (_, reps) = iso_classes(c);
    let k = reps.len();
    if k > MAX_ORDER_CLASSES {
        return Err(Error::ResourceCap {
            context: "order-completeness subset scan over isomorphism classes".into(),
            needed: 1u128 << k,
            cap: 1u128 << MAX_ORDER_CLASSES,
        });
    }
    let pre = c.underlying_preorder();
    let full: u32 = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
    let mut up = vec![0u32; k];
    let mut down = vec![0u32; k];
    for i in 0..k {
        for j in 0..k {
            if pre[reps[i]][reps[j]] {
                up[i] |= 1 << j;
                down[j] |= 1 << i;
            }
        }
    }
    // DP over subsets: bounds of S are the meet of per-element bounds
    let mut ubs = vec![0u32; 1 << k];
    let mut lbs = vec![0u32; 1 << k];
    for mask in 0..(1u32 << k) {
        let m = mask as usize;
        if mask == 0 {
            ubs[m] = full;
            lbs[m] = full;
        } else {
            let low = mask.trailing_zeros() as usize;
            let rest = (mask & (mask - 1)) as usize;
            ubs[m] = ubs[rest] & up[low];
            lbs[m] = lbs[rest] & down[low];
        }
        let join_ok = (0..k).any(|u| ubs[m] & (1 << u) != 0 && ubs[m] & !up[u] == 0);
        let meet_ok = (0..k).any(|u| lbs[m] & (1 << u) != 0 && lbs[m] & !down[u] == 0);
        if !(join_ok && meet_ok) {
            let subset = (0..k)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| reps[i])
                .collect();
            return Ok((false, Some(subset)));
        }
    }
    Ok((true, None))
}

/// Whether the isomorphism-quotient of the underlying preorder is a
/// complete lattice, by full subset scan over the classes.
pub fn is_order_complete(c: &QCategory) -> Result<bool> {
    order_completeness(c).map(|(ok, _)| ok)
}

/// Full completeness report: powered, copowered, and order-complete,
/// with first-failure witnesses. Needs an enumerable scalar carrier.
pub fn is_complete(c: &QCategory) -> Result<CompletenessReport> {
    let q = c.quantale();
    if !q.is_finite() {
        return Err(Error::Unsupported {
            quantale: q.to_string(),
            operation: "completeness report (needs an enumerable carrier; use the convexity grid checks instead)".into(),
        });
    }
    let carrier = q.enumerate_carrier()?;
    let mut power_witness = None;
    'powers: for obj in 0..c.len() {
        for x in &carrier {
            if find_power(c, obj, x)?.is_none() {
                power_witness = Some((obj, x.clone()));
                break 'powers;
            }
        }
    }
    let mut copower_witness = None;
    'copowers: for obj in 0..c.len() {
        for x in &carrier {
            if find_copower(c, obj, x)?.is_none() {
                copower_witness = Some((obj, x.clone()));
                break 'copowers;
            }
        }
    }
    let (order_complete, order_witness) = order_completeness(c)?;
    let powered = power_witness.is_none();
    let copowered = copower_witness.is_none();
    Ok(CompletenessReport {
        powered,
        power_witness,
        copowered,
        copower_witness,
        order_complete,
        order_witness,
        complete: powered && copowered && order_complete,
    })
}

/// Decides injectivity by searching for a retraction of the canonical
/// embedding into the completion (a retract of an injective object is
/// injective, and the completion is finite here). Agreement with
/// `skeletal ∧ complete` is a theorem checked by the acceptance suite.
pub fn is_injective(c: &QCategory, cap: u128) -> Result<InjectivityReport> {
    let mn = macneille::construct(c, cap)?;
    let n = c.len();
    let k = mn.len();
    // r ∘ i = id forces r on embedded points — impossible when the
    // embedding collapses an isomorphic pair
    let mut pinned: Vec<Option<usize>> = vec![None; k];
    for base_obj in 0..n {
        let m = mn.embedding_index(base_obj);
        if let Some(prev) = pinned[m] {
            if prev != base_obj {
                return Ok(InjectivityReport {
                    injective: false,
                    retraction: None,
                });
            }
        }
        pinned[m] = Some(base_obj);
    }
    let free: Vec<usize> = (0..k).filter(|m| pinned[*m].is_none()).collect();
    let space = (n as u128)
        .checked_pow(free.len() as u32)
        .unwrap_or(u128::MAX);
    if space > cap {
        return Err(Error::ResourceCap {
            context: "retraction search over completion maps".into(),
            needed: space,
            cap,
        });
    }
    if n == 0 {
        // nothing to map the completion's single point onto
        return Ok(InjectivityReport {
            injective: k == 0,
            retraction: None,
        });
    }
    let mut digits = vec![0usize; free.len()];
    loop {
        let mut map: Vec<usize> = pinned.iter().map(|p| p.unwrap_or(0)).collect();
        for (slot, &m) in free.iter().enumerate() {
            map[m] = digits[slot];
        }
        if let Ok(r) = QFunctor::new(mn.category().clone(), c.clone(), map) {
            return Ok(InjectivityReport {
                injective: true,
                retraction: Some(r),
            });
        }
        // odometer, last free slot fastest: lexicographic candidate order
        let mut slot = free.len();
        loop {
            if slot == 0 {
                return Ok(InjectivityReport {
                    injective: false,
                    retraction: None,
                });
            }
            slot -= 1;
            digits[slot] += 1;
            if digits[slot] < n {
                break;
            }
            digits[slot] = 0;
        }
    }
}

/// Least upper bound of a set of objects in the preorder reflection:
/// first canonical object below every other upper bound. Works up to
/// isomorphism, as order joins do.
fn preorder_join(c: &QCategory, pieces: &[usize]) -> Option<usize> {
    let ubs: Vec<usize> = (0..c.len())
        .filter(|&u| pieces.iter().all(|&z| c.obj_leq(z, u)))
        .collect();
    ubs.iter()
        .copied()
        .find(|&u| ubs.iter().all(|&v| c.obj_leq(u, v)))
}

fn preorder_meet(c: &QCategory, pieces: &[usize]) -> Option<usize> {
    let lbs: Vec<usize> = (0..c.len())
        .filter(|&u| pieces.iter().all(|&z| c.obj_leq(u, z)))
        .collect();
    lbs.iter()
        .copied()
        .find(|&u| lbs.iter().all(|&v| c.obj_leq(v, u)))
}

fn shared_source<'a>(f: &'a QFunctor, i: &'a QFunctor) -> Result<&'a QCategory> {
    if f.source() != i.source() {
        return Err(Error::Shape {
            context: "Kan extension needs both functors to share their source".into(),
        });
    }
    Ok(f.source())
}

/// Left Kan extension of `f` along `i`, pointwise: at each object `d`
/// the join of the copowers `D(i(c), d) ∗ f(c)`. Returns the object
/// map, or the first missing copower/join.
pub fn kan_lan(f: &QFunctor, i: &QFunctor) -> Result<KanOutcome> {
    let source = shared_source(f, i)?;
    let middle = i.target();
    let target = f.target();
    let mut map = Vec::with_capacity(middle.len());
    for d in 0..middle.len() {
        let mut pieces = Vec::with_capacity(source.len());
        for cobj in 0..source.len() {
            let weight = middle.hom_at(i.apply(cobj), d);
            match find_copower(target, f.apply(cobj), weight)? {
                Some(z) => pieces.push(z),
                None => {
                    return Ok(KanOutcome::Obstructed {
                        at: d,
                        why: format!(
                            "no copower of {} by {}",
                            target.objects().get(f.apply(cobj)),
                            target.quantale().show(weight)
                        ),
                    })
                }
            }
        }
        match preorder_join(target, &pieces) {
            Some(j) => map.push(j),
            None => {
                return Ok(KanOutcome::Obstructed {
                    at: d,
                    why: "no least upper bound for the copower family".into(),
                })
            }
        }
    }
    Ok(KanOutcome::Extension(map))
}

/// Right Kan extension: at each `d` the meet of the powers
/// `D(d, i(c)) ⋔ f(c)`.
pub fn kan_ran(f: &QFunctor, i: &QFunctor) -> Result<KanOutcome> {
    let source = shared_source(f, i)?;
    let middle = i.target();
    let target = f.target();
    let mut map = Vec::with_capacity(middle.len());
    for d in 0..middle.len() {
        let mut pieces = Vec::with_capacity(source.len());
        for cobj in 0..source.len() {
            let weight = middle.hom_at(d, i.apply(cobj));
            match find_power(target, f.apply(cobj), weight)? {
                Some(z) => pieces.push(z),
                None => {
                    return Ok(KanOutcome::Obstructed {
                        at: d,
                        why: format!(
                            "no power of {} by {}",
                            target.objects().get(f.apply(cobj)),
                            target.quantale().show(weight)
                        ),
                    })
                }
            }
        }
        match preorder_meet(target, &pieces) {
            Some(j) => map.push(j),
            None => {
                return Ok(KanOutcome::Obstructed {
                    at: d,
                    why: "no greatest lower bound for the power family".into(),
                })
            }
        }
    }
    Ok(KanOutcome::Extension(map))
}

/// All functors `g` with `g ∘ i = f`, in lexicographic order on the
/// object map. Exhaustive over maps from `i`'s target to `f`'s target
/// with the precomposition slots pinned.
pub fn solve_extension(f: &QFunctor, i: &QFunctor, cap: u128) -> Result<Vec<QFunctor>> {
    shared_source(f, i)?;
    let middle = i.target();
    let target = f.target();
    let mut pinned: Vec<Option<usize>> = vec![None; middle.len()];
    for cobj in 0..f.source().len() {
        let slot = i.apply(cobj);
        let val = f.apply(cobj);
        if let Some(prev) = pinned[slot] {
            if prev != val {
                return Ok(Vec::new());
            }
        }
        pinned[slot] = Some(val);
    }
    let free: Vec<usize> = (0..middle.len()).filter(|d| pinned[*d].is_none()).collect();
    let space = (target.len() as u128)
        .checked_pow(free.len() as u32)
        .unwrap_or(u128::MAX);
    if space > cap {
        return Err(Error::ResourceCap {
            context: "extension search over object maps".into(),
            needed: space,
            cap,
        });
    }
    if target.is_empty() && !free.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut digits = vec![0usize; free.len()];
    loop {
        let mut map: Vec<usize> = pinned.iter().map(|p| p.unwrap_or(0)).collect();
        for (slot, &d) in free.iter().enumerate() {
            map[d] = digits[slot];
        }
        if let Ok(g) = QFunctor::new(middle.clone(), target.clone(), map) {
            out.push(g);
        }
        let mut slot = free.len();
        loop {
            if slot == 0 {
                return Ok(out);
            }
            slot -= 1;
            digits[slot] += 1;
            if digits[slot] < target.len() {
                break;
            }
            digits[slot] = 0;
        }
    }
}

/// Essential embedding: fully faithful, dense, and codense.
pub fn is_essential_embedding(f: &QFunctor) -> bool {
    f.is_fully_faithful() && f.is_dense() && f.is_codense()
}

fn metric_like(q: &Quantale) -> bool {
    matches!(
        q.kind(),
        QuantaleKind::LawvereRat | QuantaleKind::ChainTrop { .. }
    )
}

/// Whether every weight of the pair is dominated by the representable
/// pair at `w` — the "`w` lies in every ball" condition.
fn dominated_by_object(c: &QCategory, pair: &PresheafPair, w: usize) -> bool {
    let y_w = yoneda(c, w);
    let cy_w = coyoneda(c, w);
    pair.x().leq(y_w.values()).expect("same shape")
        && pair.y().leq(cy_w.values()).expect("same shape")
}

/// Checks a ball system over a metric-flavored quantale: pairwise
/// consistency, a common point among the category's own objects, and
/// the completion point spanned by the system.
pub fn check_ball_system(c: &QCategory, balls: &[Ball]) -> Result<BallReport> {
    let q = c.quantale();
    if !metric_like(q) {
        return Err(Error::Unsupported {
            quantale: q.to_string(),
            operation: "ball systems (metric-flavored quantales only)".into(),
        });
    }
    let n = c.len();
    let mut xs: Vec<Vec<QElem>> = vec![Vec::new(); n];
    let mut ys: Vec<Vec<QElem>> = vec![Vec::new(); n];
    for ball in balls {
        let at = c.objects().require(&ball.at)?;
        xs[at].push(ball.x.clone());
        ys[at].push(ball.y.clone());
    }
    // tightest radius per center wins; centers without a ball are
    // unconstrained, i.e. bottom
    let x_vec: Result<Vec<QElem>> = xs.iter().map(|r| q.join(r)).collect();
    let y_vec: Result<Vec<QElem>> = ys.iter().map(|r| q.join(r)).collect();
    let induced = PresheafPair::new(c.clone(), x_vec?, y_vec?)?;
    let consistent = is_consistent(&induced);
    let witness = (0..n).find(|&w| dominated_by_object(c, &induced, w));
    let hull_point = if consistent {
        Some(closure(&induced)?)
    } else {
        None
    };
    Ok(BallReport {
        consistent,
        witness,
        hull_point,
        induced,
    })
}

/// The scalar grid for convexity scans over the rational quantale:
/// multiples of `1/den` from zero through the category's diameter,
/// plus infinity, in ascending numeric order.
fn rational_grid(c: &QCategory, den: u32) -> Result<Vec<QElem>> {
    if den == 0 {
        return Err(Error::Precondition {
            context: "convexity grid denominator must be positive".into(),
        });
    }
    let mut diameter = BigRational::zero();
    for i in 0..c.len() {
        for j in 0..c.len() {
            if let QElem::Rat(ExtRat::Fin(r)) = c.hom_at(i, j) {
                if *r > diameter {
                    diameter = r.clone();
                }
            }
        }
    }
    let den_big = BigInt::from(den);
    let steps = (diameter * BigRational::from_integer(den_big.clone()))
        .ceil()
        .to_integer();
    let steps = if steps.is_negative() {
        0u128
    } else {
        u128::try_from(steps).map_err(|_| Error::ResourceCap {
            context: "convexity grid span".into(),
            needed: u128::MAX,
            cap: macneille::DEFAULT_CANDIDATE_CAP,
        })?
    };
    if steps >= macneille::DEFAULT_CANDIDATE_CAP {
        return Err(Error::ResourceCap {
            context: "convexity grid span".into(),
            needed: steps + 2,
            cap: macneille::DEFAULT_CANDIDATE_CAP,
        });
    }
    let mut grid: Vec<QElem> = Vec::with_capacity(steps as usize + 2);
    for k in 0..=steps {
        grid.push(QElem::Rat(ExtRat::Fin(BigRational::new(
            BigInt::from(k),
            den_big.clone(),
        ))));
    }
    grid.push(QElem::Rat(ExtRat::Inf));
    Ok(grid)
}

/// Decides Isbell convexity: every consistent weight pair on the grid
/// must have an object witness. Exact over the finite chains (the grid
/// is the whole carrier); over the rational quantale it is a bounded
/// grid search, so `true` means "no counterexample on this grid" while
/// `false` is a genuine refutation.
pub fn is_isbell_convex(c: &QCategory, grid_denominator: u32) -> Result<ConvexityVerdict> {
    let q = c.quantale();
    let grid = match q.kind() {
        QuantaleKind::ChainTrop { .. } => q.enumerate_carrier()?,
        QuantaleKind::LawvereRat => rational_grid(c, grid_denominator)?,
        _ => {
            return Err(Error::Unsupported {
                quantale: q.to_string(),
                operation: "Isbell convexity scan (metric-flavored quantales only)".into(),
            })
        }
    };
    let n = c.len();
    let space = (grid.len() as u128)
        .checked_pow(2 * n as u32)
        .unwrap_or(u128::MAX);
    if space > macneille::DEFAULT_CANDIDATE_CAP {
        return Err(Error::ResourceCap {
            context: "convexity scan over grid pairs".into(),
            needed: space,
            cap: macneille::DEFAULT_CANDIDATE_CAP,
        });
    }
    let mut digits = vec![0usize; 2 * n];
    loop {
        let x_vec: Vec<QElem> = (0..n).map(|i| grid[digits[i]].clone()).collect();
        let y_vec: Vec<QElem> = (0..n).map(|i| grid[digits[n + i]].clone()).collect();
        let pair = PresheafPair::new(c.clone(), x_vec, y_vec)?;
        if is_consistent(&pair) && !(0..n).any(|w| dominated_by_object(c, &pair, w)) {
            return Ok(ConvexityVerdict {
                convex: false,
                counterexample: Some(pair),
            });
        }
        let mut slot = 2 * n;
        loop {
            if slot == 0 {
                return Ok(ConvexityVerdict {
                    convex: true,
                    counterexample: None,
                });
            }
            slot -= 1;
            digits[slot] += 1;
            if digits[slot] < grid.len() {
                break;
            }
            digits[slot] = 0;
        }
    }
}

/// All categories on a fixed object set over a finite carrier: every
/// hom matrix, filtered by the category axioms. Isomorphic duplicates
/// are kept — they cannot create false positives in theorem suites.
pub fn enumerate_categories(q: &Quantale, objects: &ObjSet, cap: u128) -> Result<Vec<QCategory>> {
    let carrier = q.enumerate_carrier()?;
    let n = objects.len();
    let cells = (n * n) as u32;
    let total = (carrier.len() as u128)
        .checked_pow(cells)
        .unwrap_or(u128::MAX);
    if total > cap {
        return Err(Error::ResourceCap {
            context: "category enumeration over hom matrices".into(),
            needed: total,
            cap,
        });
    }
    let mut out = Vec::new();
    let mut digits = vec![0usize; n * n];
    if n == 0 {
        return Ok(vec![QCategory::empty(q.clone())]);
    }
    loop {
        let entries: Vec<Vec<QElem>> = (0..n)
            .map(|i| (0..n).map(|j| carrier[digits[i * n + j]].clone()).collect())
            .collect();
        let hom =
            crate::qmatrix::QMatrix::new(q.clone(), objects.clone(), objects.clone(), entries)?;
        if let Ok(cat) = QCategory::new(hom) {
            out.push(cat);
        }
        let mut slot = n * n;
        loop {
            if slot == 0 {
                return Ok(out);
            }
            slot -= 1;
            digits[slot] += 1;
            if digits[slot] < carrier.len() {
                break;
            }
            digits[slot] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::macneille::{construct, is_member, DEFAULT_CANDIDATE_CAP};
    use crate::qmatrix::QMatrix;

    fn objs(ids: &[&str]) -> ObjSet {
        ObjSet::new(ids.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn bool_category(ids: &[&str], rel: &[&[bool]]) -> QCategory {
        let hom = QMatrix::new(
            Quantale::bool2(),
            objs(ids),
            objs(ids),
            rel.iter()
                .map(|row| row.iter().map(|&b| QElem::Idx(b as u32)).collect())
                .collect(),
        )
        .unwrap();
        QCategory::new(hom).unwrap()
    }

    fn chain_category(n: u32, ids: &[&str], d: &[&[u32]]) -> QCategory {
        let q = Quantale::chain_trop(n).unwrap();
        let hom = QMatrix::new(
            q,
            objs(ids),
            objs(ids),
            d.iter()
                .map(|row| row.iter().map(|&v| QElem::Idx(v)).collect())
                .collect(),
        )
        .unwrap();
        QCategory::new(hom).unwrap()
    }

    fn lawvere_two_points() -> QCategory {
        let q = Quantale::lawvere_rat();
        let ids = objs(&["a", "b"]);
        let hom = QMatrix::new(
            q,
            ids.clone(),
            ids,
            vec![
                vec![QElem::int(0), QElem::int(1)],
                vec![QElem::int(1), QElem::int(0)],
            ],
        )
        .unwrap();
        QCategory::new(hom).unwrap()
    }

    /// The diamond: bottom ⊥, incomparable m and w, top ⊤.
    fn diamond() -> QCategory {
        bool_category(
            &["bot", "m", "w", "top"],
            &[
                &[true, true, true, true],
                &[false, true, false, true],
                &[false, false, true, true],
                &[false, false, false, true],
            ],
        )
    }

    fn antichain2() -> QCategory {
        bool_category(&["a", "b"], &[&[true, false], &[false, true]])
    }

    #[test]
    fn powers_and_copowers_in_a_lattice() {
        let d = diamond();
        let q = Quantale::bool2();
        // power by ⊤ is the object itself; by ⊥ the top element
        for obj in 0..4 {
            assert_eq!(find_power(&d, obj, &q.top()).unwrap(), Some(obj));
            assert_eq!(find_power(&d, obj, &q.bottom()).unwrap(), Some(3));
            assert_eq!(find_copower(&d, obj, &q.top()).unwrap(), Some(obj));
            assert_eq!(find_copower(&d, obj, &q.bottom()).unwrap(), Some(0));
        }
        assert!(matches!(
            find_power(&d, 9, &q.top()),
            Err(Error::UnknownObject { .. })
        ));
    }

    #[test]
    fn discrete_metric_space_lacks_powers() {
        let c = chain_category(3, &["a", "b"], &[&[0, 3], &[3, 0]]);
        assert_eq!(find_power(&c, 0, &QElem::Idx(0)).unwrap(), Some(0));
        assert_eq!(find_power(&c, 0, &QElem::Idx(1)).unwrap(), None);
        // 2-object chain: copower of the far end by one step is missing
        let chain = chain_category(2, &["a", "b"], &[&[0, 1], &[2, 0]]);
        assert_eq!(find_copower(&chain, 1, &QElem::Idx(1)).unwrap(), None);
    }

    #[test]
    fn order_completeness_quotients_isomorphic_objects() {
        assert!(is_order_complete(&diamond()).unwrap());
        assert!(!is_order_complete(&antichain2()).unwrap());
        // two isomorphic tops over a bottom: complete after quotient
        let twin_top = bool_category(
            &["bot", "t1", "t2"],
            &[
                &[true, true, true],
                &[false, true, true],
                &[false, true, true],
            ],
        );
        assert!(is_order_complete(&twin_top).unwrap());
        // empty category has no bottom, so the empty subset has no join
        assert!(!is_order_complete(&QCategory::empty(Quantale::bool2())).unwrap());
    }

    #[test]
    fn order_scan_is_capped() {
        let n = MAX_ORDER_CLASSES + 1;
        let ids: Vec<String> = (0..n).map(|i| format!("o{i}")).collect();
        let os = ObjSet::new(ids).unwrap();
        let q = Quantale::bool2();
        let hom = QMatrix::from_fn(q.clone(), os.clone(), os, |i, j| {
            Ok(QElem::Idx((i == j) as u32))
        })
        .unwrap();
        let big = QCategory::new(hom).unwrap();
        assert!(matches!(
            is_order_complete(&big),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn completeness_report_on_small_fixtures() {
        let d = is_complete(&diamond()).unwrap();
        assert!(d.complete && d.powered && d.copowered && d.order_complete);
        let a = is_complete(&antichain2()).unwrap();
        assert!(!a.complete);
        assert!(!a.order_complete);
        assert!(a.order_witness.is_some());
        let point = bool_category(&["c"], &[&[true]]);
        assert!(is_complete(&point).unwrap().complete);
        // rational carrier is not enumerable
        assert!(matches!(
            is_complete(&lawvere_two_points()),
            Err(Error::Unsupported { .. })
        ));
    }

    #[test]
    fn completions_are_complete() {
        for c in [
            antichain2(),
            chain_category(2, &["a", "b"], &[&[0, 1], &[2, 0]]),
        ] {
            let mn = construct(&c, DEFAULT_CANDIDATE_CAP).unwrap();
            let report = is_complete(mn.category()).unwrap();
            assert!(report.complete, "completion must be complete: {report:?}");
            assert!(mn.category().is_skeletal());
        }
    }

    #[test]
    fn injectivity_by_retraction_search() {
        let d = diamond();
        let report = is_injective(&d, DEFAULT_CANDIDATE_CAP).unwrap();
        assert!(report.injective);
        let r = report.retraction.unwrap();
        // a retraction fixes the embedded copy pointwise
        let mn = construct(&d, DEFAULT_CANDIDATE_CAP).unwrap();
        for obj in 0..d.len() {
            assert_eq!(r.apply(mn.embedding_index(obj)), obj);
        }
        assert!(
            !is_injective(&antichain2(), DEFAULT_CANDIDATE_CAP)
                .unwrap()
                .injective
        );
        // isomorphic pair: complete but not skeletal, hence not injective
        let twins = bool_category(&["a", "b"], &[&[true, true], &[true, true]]);
        assert!(
            !is_injective(&twins, DEFAULT_CANDIDATE_CAP)
                .unwrap()
                .injective
        );
    }

    #[test]
    fn kan_along_identity_is_pointwise_isomorphic() {
        let d = diamond();
        let c = bool_category(&["x", "y"], &[&[true, true], &[false, true]]);
        let f = QFunctor::new(c.clone(), d.clone(), vec![0, 3]).unwrap();
        let id = QFunctor::identity(&c);
        for outcome in [kan_lan(&f, &id).unwrap(), kan_ran(&f, &id).unwrap()] {
            let map = outcome.map().expect("identity Kan always exists").to_vec();
            for (obj, &image) in map.iter().enumerate() {
                assert!(d.is_isomorphic_pair(image, f.apply(obj)));
            }
        }
    }

    #[test]
    fn kan_reports_missing_copowers() {
        // target: the 2-point discrete metric space lacks copowers
        let e = chain_category(3, &["a", "b"], &[&[0, 3], &[3, 0]]);
        let c = chain_category(3, &["p"], &[&[0]]);
        let dd = chain_category(3, &["p", "q"], &[&[0, 1], &[1, 0]]);
        let f = QFunctor::new(c.clone(), e, vec![0]).unwrap();
        let i = QFunctor::new(c, dd, vec![0]).unwrap();
        assert!(matches!(
            kan_lan(&f, &i).unwrap(),
            KanOutcome::Obstructed { at: 1, .. }
        ));
        assert!(matches!(
            kan_ran(&f, &i).unwrap(),
            KanOutcome::Obstructed { at: 1, .. }
        ));
    }

    #[test]
    fn extension_solver_respects_precomposition() {
        let c = antichain2();
        let mn = construct(&c, DEFAULT_CANDIDATE_CAP).unwrap();
        let i = mn.embedding().clone();
        // extending the embedding along itself: the identity qualifies
        let sols = solve_extension(&i, &i, DEFAULT_CANDIDATE_CAP).unwrap();
        assert!(!sols.is_empty());
        let id_map: Vec<usize> = (0..mn.len()).collect();
        assert!(sols.iter().any(|g| g.map() == &id_map[..]));
        for g in &sols {
            for obj in 0..c.len() {
                assert_eq!(g.apply(i.apply(obj)), i.apply(obj));
            }
        }
        // conflicting pin: i collapses, f separates → no solutions
        let twins = bool_category(&["a", "b"], &[&[true, true], &[true, true]]);
        let collapse =
            QFunctor::new(twins.clone(), bool_category(&["z"], &[&[true]]), vec![0, 0]).unwrap();
        let separate = QFunctor::identity(&twins);
        assert!(solve_extension(&separate, &collapse, DEFAULT_CANDIDATE_CAP)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn extension_search_is_capped() {
        let c = antichain2();
        let mn = construct(&c, DEFAULT_CANDIDATE_CAP).unwrap();
        let i = mn.embedding().clone();
        assert!(matches!(
            solve_extension(&i, &i, 1),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn canonical_embedding_is_essential() {
        for c in [
            diamond(),
            antichain2(),
            chain_category(2, &["a", "b"], &[&[0, 1], &[2, 0]]),
        ] {
            let mn = construct(&c, DEFAULT_CANDIDATE_CAP).unwrap();
            assert!(is_essential_embedding(mn.embedding()));
            assert!(is_essential_embedding(&QFunctor::identity(&c)));
        }
    }

    #[test]
    fn yoneda_into_all_presheaves_is_not_essential() {
        let two = bool_category(&["a", "b"], &[&[true, true], &[false, true]]);
        let (_, y) = macneille::presheaf_category(&two, DEFAULT_CANDIDATE_CAP).unwrap();
        assert!(y.is_fully_faithful());
        assert!(y.is_dense());
        assert!(!y.is_codense());
        assert!(!is_essential_embedding(&y));
    }

    #[test]
    fn singleton_ball_is_witnessed_by_its_center() {
        let c = lawvere_two_points();
        let report = check_ball_system(
            &c,
            &[Ball {
                at: "b".into(),
                x: QElem::int(0),
                y: QElem::int(0),
            }],
        )
        .unwrap();
        assert!(report.consistent);
        assert_eq!(report.witness, Some(1));
        let hull = report.hull_point.unwrap();
        assert!(is_member(&hull.as_pair()));
    }

    #[test]
    fn midpoint_ball_system_needs_the_completion() {
        let c = lawvere_two_points();
        let half = QElem::rat(1, 2);
        let balls: Vec<Ball> = ["a", "b"]
            .iter()
            .map(|at| Ball {
                at: at.to_string(),
                x: half.clone(),
                y: half.clone(),
            })
            .collect();
        let report = check_ball_system(&c, &balls).unwrap();
        assert!(report.consistent);
        assert_eq!(report.witness, None);
        let hull = report.hull_point.unwrap();
        assert_eq!(
            hull.presheaf().value_vec(),
            vec![half.clone(), half.clone()]
        );
        assert_eq!(hull.copresheaf().value_vec(), vec![half.clone(), half]);
        // hull dominates the induced pair
        assert!(report.induced.x().leq(hull.presheaf().values()).unwrap());
        assert!(report.induced.y().leq(hull.copresheaf().values()).unwrap());
    }

    #[test]
    fn overtight_ball_system_is_inconsistent() {
        let c = lawvere_two_points();
        let report = check_ball_system(
            &c,
            &[
                Ball {
                    at: "a".into(),
                    x: QElem::rat(1, 4),
                    y: QElem::rat(1, 4),
                },
                Ball {
                    at: "b".into(),
                    x: QElem::rat(1, 4),
                    y: QElem::rat(1, 4),
                },
            ],
        )
        .unwrap();
        assert!(!report.consistent);
        assert!(report.hull_point.is_none());
        assert_eq!(report.witness, None);
    }

    #[test]
    fn ball_systems_need_a_metric_flavor() {
        let report = check_ball_system(&diamond(), &[]);
        assert!(matches!(report, Err(Error::Unsupported { .. })));
    }

    #[test]
    fn two_point_space_is_not_isbell_convex() {
        let verdict = is_isbell_convex(&lawvere_two_points(), 2).unwrap();
        assert!(!verdict.convex);
        let pair = verdict.counterexample.unwrap();
        assert!(is_consistent(&pair));
        assert!(!(0..2).any(|w| dominated_by_object(pair.base(), &pair, w)));
        assert!(matches!(
            is_isbell_convex(&lawvere_two_points(), 0),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn convexity_matches_completeness_on_chains() {
        // a complete two-object chain is convex; a discrete pair is not
        let chain = chain_category(2, &["a", "b"], &[&[0, 0], &[1, 0]]);
        assert!(is_complete(&chain).unwrap().complete);
        assert!(is_isbell_convex(&chain, 1).unwrap().convex);
        let discrete = chain_category(2, &["a", "b"], &[&[0, 2], &[2, 0]]);
        let verdict = is_isbell_convex(&discrete, 1).unwrap();
        assert!(!verdict.convex);
        assert!(!is_complete(&discrete).unwrap().complete);
    }

    #[test]
    fn category_enumeration_counts_preorders() {
        let q = Quantale::bool2();
        assert_eq!(
            enumerate_categories(&q, &objs(&["a"]), 1 << 20)
                .unwrap()
                .len(),
            1
        );
        // reflexive + transitive relations on two points
        assert_eq!(
            enumerate_categories(&q, &objs(&["a", "b"]), 1 << 20)
                .unwrap()
                .len(),
            4
        );
        assert!(matches!(
            enumerate_categories(&q, &objs(&["a", "b", "c"]), 4),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn completion_is_invariant_under_renaming() {
        let c = chain_category(3, &["a", "b"], &[&[0, 2], &[1, 0]]);
        let renamed = {
            let ids = objs(&["zz", "aa"]);
            // same homs with objects listed in the opposite order
            let hom = QMatrix::new(
                c.quantale().clone(),
                ids.clone(),
                ids,
                vec![
                    vec![QElem::Idx(0), QElem::Idx(1)],
                    vec![QElem::Idx(2), QElem::Idx(0)],
                ],
            )
            .unwrap();
            QCategory::new(hom).unwrap()
        };
        let mn1 = construct(&c, DEFAULT_CANDIDATE_CAP).unwrap();
        let mn2 = construct(&renamed, DEFAULT_CANDIDATE_CAP).unwrap();
        assert_eq!(mn1.len(), mn2.len());
        // the bijection matches fixed pairs through the renaming
        // permutation (object k of one base is object 1−k of the other)
        let mut pairing = Vec::new();
        for o1 in mn1.objects() {
            let v1 = o1.presheaf().value_vec();
            let swapped = vec![v1[1].clone(), v1[0].clone()];
            let j = mn2
                .objects()
                .iter()
                .position(|o2| o2.presheaf().value_vec() == swapped)
                .expect("renamed completion holds the same pairs");
            pairing.push(j);
        }
        for (i1, &j1) in pairing.iter().enumerate() {
            for (i2, &j2) in pairing.iter().enumerate() {
                assert_eq!(mn1.category().hom_at(i1, i2), mn2.category().hom_at(j1, j2));
            }
        }
    }
}
