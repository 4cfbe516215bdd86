//! Matrices over a quantale: composition, the two residuals, identities
//! and the pointwise order.
//!
//! A matrix goes from its row set (domain) to its column set (codomain);
//! `X(a, b)` is the entry at row `a`, column `b`. Composition of
//! `Y: B ⇝ C` with `X: A ⇝ B` has entries `⋁_b Y(b,c) ∘ X(a,b)`, and the
//! two residuals are the pointwise largest solutions of `Y ∘ X ⪯ Z` in
//! either unknown. Empty object sets are legal: a join over an empty
//! middle set is bottom, a meet over an empty index set is top.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quantale::{QElem, Quantale};

/// An ordered set of distinct object identifiers. The order is fixed at
/// construction and is the canonical order used everywhere (entry layout,
/// enumeration, tie-breaking, serialization).
#[derive(Debug, Clone)]
pub struct ObjSet {
    ids: Arc<[String]>,
}

impl ObjSet {
    pub fn new(ids: Vec<String>) -> Result<ObjSet> {
        for (i, id) in ids.iter().enumerate() {
            if ids[..i].contains(id) {
                return Err(Error::Invalid(format!("duplicate object id {id:?}")));
            }
        }
        Ok(ObjSet { ids: ids.into() })
    }

    pub fn empty() -> ObjSet {
        ObjSet { ids: Arc::from([]) }
    }

    /// The one-object set indexing presheaf values.
    pub fn point() -> ObjSet {
        ObjSet {
            ids: Arc::from(["*".to_string()]),
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.ids.iter().map(|s| s.as_str())
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|s| s == id)
    }

    /// Index of `id`, or an unknown-object error.
    pub fn require(&self, id: &str) -> Result<usize> {
        self.index_of(id)
            .ok_or_else(|| Error::UnknownObject { id: id.to_string() })
    }
}

impl PartialEq for ObjSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ids, &other.ids) || self.ids == other.ids
    }
}

impl Eq for ObjSet {}

impl fmt::Display for ObjSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.ids.join(","))
    }
}

/// A dense matrix of quantale elements, stored row-major. Entries are
/// validated against the quantale at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    quantale: Quantale,
    rows: ObjSet,
    cols: ObjSet,
    entries: Vec<QElem>,
}

impl QMatrix {
    pub fn new(
        quantale: Quantale,
        rows: ObjSet,
        cols: ObjSet,
        entries: Vec<Vec<QElem>>,
    ) -> Result<QMatrix> {
        if entries.len() != rows.len() {
            return Err(Error::Shape {
                context: format!("matrix has {} entry rows for row set {rows}", entries.len()),
            });
        }
        let mut flat = Vec::with_capacity(rows.len() * cols.len());
        for (r, row) in entries.into_iter().enumerate() {
            if row.len() != cols.len() {
                return Err(Error::Shape {
                    context: format!(
                        "entry row {r} has length {} for column set {cols}",
                        row.len()
                    ),
                });
            }
            for e in row {
                if !quantale.contains(&e) {
                    return Err(Error::Domain {
                        quantale: quantale.to_string(),
                        element: format!("{e:?}"),
                    });
                }
                flat.push(e);
            }
        }
        Ok(QMatrix {
            quantale,
            rows,
            cols,
            entries: flat,
        })
    }

    /// Builds entry by entry from row and column indices.
    pub fn from_fn(
        quantale: Quantale,
        rows: ObjSet,
        cols: ObjSet,
        mut f: impl FnMut(usize, usize) -> Result<QElem>,
    ) -> Result<QMatrix> {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for r in 0..rows.len() {
            for c in 0..cols.len() {
                let e = f(r, c)?;
                if !quantale.contains(&e) {
                    return Err(Error::Domain {
                        quantale: quantale.to_string(),
                        element: format!("{e:?}"),
                    });
                }
                entries.push(e);
            }
        }
        Ok(QMatrix {
            quantale,
            rows,
            cols,
            entries,
        })
    }

    pub fn constant(quantale: Quantale, rows: ObjSet, cols: ObjSet, e: QElem) -> Result<QMatrix> {
        QMatrix::from_fn(quantale, rows, cols, |_, _| Ok(e.clone()))
    }

    pub fn all_bottom(quantale: Quantale, rows: ObjSet, cols: ObjSet) -> QMatrix {
        let e = quantale.bottom();
        QMatrix::constant(quantale, rows, cols, e).expect("bottom is in the carrier")
    }

    pub fn all_top(quantale: Quantale, rows: ObjSet, cols: ObjSet) -> QMatrix {
        let e = quantale.top();
        QMatrix::constant(quantale, rows, cols, e).expect("top is in the carrier")
    }

    /// The identity matrix: unit on the diagonal, bottom off it.
    pub fn diag(quantale: Quantale, objs: ObjSet) -> QMatrix {
        let unit = quantale.unit();
        let bottom = quantale.bottom();
        QMatrix::from_fn(quantale, objs.clone(), objs, |r, c| {
            Ok(if r == c { unit.clone() } else { bottom.clone() })
        })
        .expect("unit and bottom are in the carrier")
    }

    pub fn quantale(&self) -> &Quantale {
        &self.quantale
    }

    pub fn rows(&self) -> &ObjSet {
        &self.rows
    }

    pub fn cols(&self) -> &ObjSet {
        &self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &QElem {
        &self.entries[r * self.cols.len() + c]
    }

    pub fn entry_by_id(&self, row_id: &str, col_id: &str) -> Result<&QElem> {
        Ok(self.entry(self.rows.require(row_id)?, self.cols.require(col_id)?))
    }

    pub fn row_vec(&self, r: usize) -> Vec<QElem> {
        (0..self.cols.len())
            .map(|c| self.entry(r, c).clone())
            .collect()
    }

    pub fn col_vec(&self, c: usize) -> Vec<QElem> {
        (0..self.rows.len())
            .map(|r| self.entry(r, c).clone())
            .collect()
    }

    fn check_same_quantale(&self, other: &QMatrix) -> Result<()> {
        if self.quantale != other.quantale {
            return Err(Error::QuantaleMismatch {
                left: self.quantale.to_string(),
                right: other.quantale.to_string(),
            });
        }
        Ok(())
    }

    /// Composite `self ∘ x`: for `self: B ⇝ C` and `x: A ⇝ B`, the matrix
    /// `A ⇝ C` with entries `⋁_b self(b,c) ∘ x(a,b)`.
    pub fn compose(&self, x: &QMatrix) -> Result<QMatrix> {
        self.check_same_quantale(x)?;
        if self.rows != x.cols {
            return Err(Error::Shape {
                context: format!(
                    "compose: left domain {} differs from right codomain {}",
                    self.rows, x.cols
                ),
            });
        }
        let q = self.quantale.clone();
        QMatrix::from_fn(q.clone(), x.rows.clone(), self.cols.clone(), |a, c| {
            let mut acc = q.bottom();
            for b in 0..self.rows.len() {
                let prod = q.mul(self.entry(b, c), x.entry(a, b))?;
                acc = q.join2(&acc, &prod)?;
            }
            Ok(acc)
        })
    }

    /// Right extension `self ↙ x`: for `self: A ⇝ C` and `x: A ⇝ B`, the
    /// largest `Y: B ⇝ C` with `Y ∘ x ⪯ self`, given entrywise by
    /// `⋀_a self(a,c) ↙ x(a,b)`.
    pub fn rext(&self, x: &QMatrix) -> Result<QMatrix> {
        self.check_same_quantale(x)?;
        if self.rows != x.rows {
            return Err(Error::Shape {
                context: format!(
                    "right extension: domains {} and {} differ",
                    self.rows, x.rows
                ),
            });
        }
        let q = self.quantale.clone();
        QMatrix::from_fn(q.clone(), x.cols.clone(), self.cols.clone(), |b, c| {
            let mut acc = q.top();
            for a in 0..self.rows.len() {
                let r = q.rext(self.entry(a, c), x.entry(a, b))?;
                acc = q.meet2(&acc, &r)?;
            }
            Ok(acc)
        })
    }

    /// Right lifting `self ↘ z`: for `self: B ⇝ C` and `z: A ⇝ C`, the
    /// largest `X: A ⇝ B` with `self ∘ X ⪯ z`, given entrywise by
    /// `⋀_c self(b,c) ↘ z(a,c)`.
    pub fn rlift(&self, z: &QMatrix) -> Result<QMatrix> {
        self.check_same_quantale(z)?;
        if self.cols != z.cols {
            return Err(Error::Shape {
                context: format!(
                    "right lifting: codomains {} and {} differ",
                    self.cols, z.cols
                ),
            });
        }
        let q = self.quantale.clone();
        QMatrix::from_fn(q.clone(), z.rows.clone(), self.rows.clone(), |a, b| {
            let mut acc = q.top();
            for c in 0..self.cols.len() {
                let r = q.rlift(self.entry(b, c), z.entry(a, c))?;
                acc = q.meet2(&acc, &r)?;
            }
            Ok(acc)
        })
    }

    /// Pointwise order: every entry of `self` below the matching entry of
    /// `other`.
    pub fn leq(&self, other: &QMatrix) -> Result<bool> {
        self.check_same_quantale(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape {
                context: format!(
                    "order compares {}x{} against {}x{}",
                    self.rows, self.cols, other.rows, other.cols
                ),
            });
        }
        for (a, b) in self.entries.iter().zip(other.entries.iter()) {
            if !self.quantale.leq(a, b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn objs(ids: &[&str]) -> ObjSet {
        ObjSet::new(ids.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn bool_matrix(rows: &ObjSet, cols: &ObjSet, bits: &[&[bool]]) -> QMatrix {
        QMatrix::new(
            Quantale::bool2(),
            rows.clone(),
            cols.clone(),
            bits.iter()
                .map(|row| row.iter().map(|&b| QElem::Idx(b as u32)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn objset_rejects_duplicates() {
        assert!(ObjSet::new(vec!["a".into(), "a".into()]).is_err());
        assert_eq!(objs(&["a", "b"]).require("b").unwrap(), 1);
        assert!(objs(&["a"]).require("z").is_err());
    }

    #[test]
    fn compose_is_relational_composition_over_bool2() {
        let a = objs(&["a"]);
        let b = objs(&["b"]);
        let c = objs(&["c"]);
        let x = bool_matrix(&a, &b, &[&[true]]);
        let y = bool_matrix(&b, &c, &[&[true]]);
        let yx = y.compose(&x).unwrap();
        assert_eq!(yx.entry(0, 0), &QElem::Idx(1));
        assert_eq!(yx.rows(), &a);
        assert_eq!(yx.cols(), &c);
    }

    #[test]
    fn diag_is_identity_for_compose() {
        let q = Quantale::chain_trop(3).unwrap();
        let ab = objs(&["a", "b"]);
        let cd = objs(&["c", "d"]);
        let y = QMatrix::new(
            q.clone(),
            ab.clone(),
            cd.clone(),
            vec![
                vec![QElem::Idx(0), QElem::Idx(2)],
                vec![QElem::Idx(3), QElem::Idx(1)],
            ],
        )
        .unwrap();
        assert_eq!(y.compose(&QMatrix::diag(q.clone(), ab.clone())).unwrap(), y);
        assert_eq!(QMatrix::diag(q, cd).compose(&y).unwrap(), y);
    }

    #[test]
    fn residuals_along_diag_are_identity() {
        let q = Quantale::relations(2).unwrap();
        let ab = objs(&["a", "b"]);
        let z = QMatrix::new(
            q.clone(),
            ab.clone(),
            ab.clone(),
            vec![
                vec![QElem::Idx(3), QElem::Idx(5)],
                vec![QElem::Idx(0), QElem::Idx(15)],
            ],
        )
        .unwrap();
        assert_eq!(z.rext(&QMatrix::diag(q.clone(), ab.clone())).unwrap(), z);
        assert_eq!(QMatrix::diag(q, ab).rlift(&z).unwrap(), z);
    }

    /// Every 2x2 matrix over the two truth values, as a 4-bit code.
    fn all_bool_2x2(rows: &ObjSet, cols: &ObjSet) -> Vec<QMatrix> {
        (0u32..16)
            .map(|code| {
                QMatrix::from_fn(Quantale::bool2(), rows.clone(), cols.clone(), |r, c| {
                    Ok(QElem::Idx((code >> (2 * r + c)) & 1))
                })
                .unwrap()
            })
            .collect()
    }

    #[test]
    fn rext_is_the_maximum_solution_over_bool2() {
        let a = objs(&["a0", "a1"]);
        let b = objs(&["b0", "b1"]);
        let c = objs(&["c0", "c1"]);
        for z in all_bool_2x2(&a, &c) {
            for x in all_bool_2x2(&a, &b) {
                let best = z.rext(&x).unwrap();
                assert!(best.compose(&x).unwrap().leq(&z).unwrap());
                for y in all_bool_2x2(&b, &c) {
                    let solves = y.compose(&x).unwrap().leq(&z).unwrap();
                    assert_eq!(solves, y.leq(&best).unwrap());
                }
            }
        }
    }

    #[test]
    fn rlift_is_the_maximum_solution_over_bool2() {
        let a = objs(&["a0", "a1"]);
        let b = objs(&["b0", "b1"]);
        let c = objs(&["c0", "c1"]);
        for z in all_bool_2x2(&a, &c) {
            for y in all_bool_2x2(&b, &c) {
                let best = y.rlift(&z).unwrap();
                assert!(y.compose(&best).unwrap().leq(&z).unwrap());
                for x in all_bool_2x2(&a, &b) {
                    let solves = y.compose(&x).unwrap().leq(&z).unwrap();
                    assert_eq!(solves, x.leq(&best).unwrap());
                }
            }
        }
    }

    #[test]
    fn compose_matches_direct_min_plus_product() {
        let q = Quantale::chain_trop(2).unwrap();
        let ab = objs(&["a", "b"]);
        // All 2x2 matrices over the 3-element chain, paired exhaustively.
        let mats: Vec<QMatrix> = (0u32..81)
            .map(|code| {
                QMatrix::from_fn(q.clone(), ab.clone(), ab.clone(), |r, c| {
                    Ok(QElem::Idx((code / 3u32.pow(2 * r as u32 + c as u32)) % 3))
                })
                .unwrap()
            })
            .collect();
        for x in &mats {
            for y in &mats {
                let got = y.compose(x).unwrap();
                for a in 0..2 {
                    for c in 0..2 {
                        // min-plus with saturation at 2, written out directly
                        let mut best = 2u32;
                        for b in 0..2 {
                            let (QElem::Idx(yb), QElem::Idx(xb)) = (y.entry(b, c), x.entry(a, b))
                            else {
                                unreachable!()
                            };
                            best = best.min((yb + xb).min(2));
                        }
                        assert_eq!(got.entry(a, c), &QElem::Idx(best));
                    }
                }
            }
        }
    }

    #[test]
    fn one_by_one_residuals_agree_with_scalars() {
        let q = Quantale::lawvere_rat();
        let pt = ObjSet::point();
        let m = |v: QElem| QMatrix::new(q.clone(), pt.clone(), pt.clone(), vec![vec![v]]).unwrap();
        let z = m(QElem::int(3));
        let x = m(QElem::int(5));
        assert_eq!(z.rext(&x).unwrap().entry(0, 0), &QElem::int(0));
        assert_eq!(x.rext(&z).unwrap().entry(0, 0), &QElem::int(2));
        assert_eq!(
            x.rlift(&z).unwrap().entry(0, 0),
            &q.rlift(&QElem::int(5), &QElem::int(3)).unwrap()
        );
    }

    #[test]
    fn empty_sets_follow_join_meet_conventions() {
        let q = Quantale::chain_trop(2).unwrap();
        let a = objs(&["a"]);
        let e = ObjSet::empty();
        // Empty middle set: composite is all bottom.
        let x = QMatrix::all_top(q.clone(), a.clone(), e.clone());
        let y = QMatrix::all_top(q.clone(), e.clone(), a.clone());
        let yx = y.compose(&x).unwrap();
        assert_eq!(yx.entry(0, 0), &q.bottom());
        // Empty meet index set: residual is all top.
        let z = QMatrix::all_bottom(q.clone(), e.clone(), a.clone());
        let xe = QMatrix::all_bottom(q.clone(), e.clone(), a.clone());
        let r = z.rext(&xe).unwrap();
        assert_eq!(r.entry(0, 0), &q.top());
    }

    #[test]
    fn shape_and_quantale_mismatches_are_errors() {
        let a = objs(&["a"]);
        let b = objs(&["b"]);
        let x = QMatrix::all_top(Quantale::bool2(), a.clone(), b.clone());
        let y = QMatrix::all_top(Quantale::bool2(), a.clone(), b.clone());
        assert!(matches!(y.compose(&x), Err(Error::Shape { .. })));
        let z = QMatrix::all_top(Quantale::lawvere_rat(), b.clone(), a.clone());
        assert!(matches!(z.compose(&x), Err(Error::QuantaleMismatch { .. })));
    }

    fn arb_chain_matrix(q: Quantale, rows: ObjSet, cols: ObjSet) -> impl Strategy<Value = QMatrix> {
        let (r, c) = (rows.len(), cols.len());
        proptest::collection::vec(0u32..=3, r * c).prop_map(move |codes| {
            QMatrix::from_fn(q.clone(), rows.clone(), cols.clone(), |i, j| {
                Ok(QElem::Idx(codes[i * c + j]))
            })
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn adjointness_chain_on_random_matrices(
            (y, x, z) in {
                let q = Quantale::chain_trop(3).unwrap();
                let a = objs(&["a0", "a1"]);
                let b = objs(&["b0", "b1", "b2"]);
                let c = objs(&["c0"]);
                (
                    arb_chain_matrix(q.clone(), b.clone(), c.clone()),
                    arb_chain_matrix(q.clone(), a.clone(), b.clone()),
                    arb_chain_matrix(q, a, c),
                )
            }
        ) {
            let left = y.leq(&z.rext(&x).unwrap()).unwrap();
            let mid = y.compose(&x).unwrap().leq(&z).unwrap();
            let right = x.leq(&y.rlift(&z).unwrap()).unwrap();
            prop_assert_eq!(left, mid);
            prop_assert_eq!(mid, right);
        }

        #[test]
        fn compose_is_associative(
            (z, y, x) in {
                let q = Quantale::chain_trop(3).unwrap();
                let a = objs(&["a0", "a1"]);
                let b = objs(&["b0", "b1"]);
                let c = objs(&["c0", "c1"]);
                let d = objs(&["d0"]);
                (
                    arb_chain_matrix(q.clone(), c.clone(), d.clone()),
                    arb_chain_matrix(q.clone(), b.clone(), c.clone()),
                    arb_chain_matrix(q, a, b),
                )
            }
        ) {
            let lhs = z.compose(&y).unwrap().compose(&x).unwrap();
            let rhs = z.compose(&y.compose(&x).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
