//! Categories enriched in a quantale, and the structure-preserving maps
//! between them.
//!
//! A category here is a finite object set with a square hom matrix
//! satisfying the unit law (the quantale unit sits below every
//! `hom(c,c)`) and the composition law (`hom(c',c'') ∘ hom(c,c') ⪯
//! hom(c,c'')`). Over the truth values this is a preorder; over distances
//! the composition law is the triangle inequality. Construction validates
//! both laws and reports the first violation with witnesses.

use std::sync::Arc;

use crate::error::{AxiomViolation, Error, Result};
use crate::qmatrix::{ObjSet, QMatrix};
use crate::quantale::{QElem, Quantale};

/// A validated quantale-enriched category. Cloning is cheap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QCategory {
    hom: Arc<QMatrix>,
}

impl QCategory {
    /// Validates the two axioms and wraps the hom matrix. The matrix must
    /// be square with identical row and column sets; violations report the
    /// first failing witness, unit law first.
    pub fn new(hom: QMatrix) -> Result<QCategory> {
        if hom.rows() != hom.cols() {
            return Err(Error::Shape {
                context: format!(
                    "hom matrix must be square over one object set, got {} and {}",
                    hom.rows(),
                    hom.cols()
                ),
            });
        }
        let q = hom.quantale();
        let n = hom.rows().len();
        let unit = q.unit();
        for c in 0..n {
            if !q.leq(&unit, hom.entry(c, c))? {
                return Err(Error::Axiom(AxiomViolation::UnitLaw {
                    object: hom.rows().get(c).to_string(),
                    unit: q.show(&unit),
                    hom: q.show(hom.entry(c, c)),
                }));
            }
        }
        for c in 0..n {
            for c1 in 0..n {
                for c2 in 0..n {
                    let composite = q.mul(hom.entry(c1, c2), hom.entry(c, c1))?;
                    if !q.leq(&composite, hom.entry(c, c2))? {
                        return Err(Error::Axiom(AxiomViolation::CompositionLaw {
                            triple: (
                                hom.rows().get(c).to_string(),
                                hom.rows().get(c1).to_string(),
                                hom.rows().get(c2).to_string(),
                            ),
                            composite: q.show(&composite),
                            hom: q.show(hom.entry(c, c2)),
                        }));
                    }
                }
            }
        }
        Ok(QCategory { hom: Arc::new(hom) })
    }

    /// The empty category, vacuously valid.
    pub fn empty(q: Quantale) -> QCategory {
        let e = ObjSet::empty();
        QCategory {
            hom: Arc::new(QMatrix::all_bottom(q, e.clone(), e)),
        }
    }

    pub fn quantale(&self) -> &Quantale {
        self.hom.quantale()
    }

    pub fn objects(&self) -> &ObjSet {
        self.hom.rows()
    }

    pub fn len(&self) -> usize {
        self.hom.rows().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn hom(&self) -> &QMatrix {
        &self.hom
    }

    pub fn hom_at(&self, c: usize, c1: usize) -> &QElem {
        self.hom.entry(c, c1)
    }

    pub fn hom_by_id(&self, c: &str, c1: &str) -> Result<&QElem> {
        self.hom.entry_by_id(c, c1)
    }

    /// The induced preorder: `c ⪯ c'` when the unit sits below `hom(c,c')`.
    pub fn obj_leq(&self, c: usize, c1: usize) -> bool {
        let q = self.quantale();
        q.leq(&q.unit(), self.hom_at(c, c1))
            .expect("hom entries validated at construction")
    }

    pub fn underlying_preorder(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        (0..n)
            .map(|c| (0..n).map(|c1| self.obj_leq(c, c1)).collect())
            .collect()
    }

    /// Mutually related objects behave identically in every hom.
    pub fn is_isomorphic_pair(&self, c: usize, c1: usize) -> bool {
        self.obj_leq(c, c1) && self.obj_leq(c1, c)
    }

    /// No two distinct objects are isomorphic.
    pub fn is_skeletal(&self) -> bool {
        let n = self.len();
        for c in 0..n {
            for c1 in c + 1..n {
                if self.is_isomorphic_pair(c, c1) {
                    return false;
                }
            }
        }
        true
    }

    /// Collapses isomorphism classes onto their first-listed
    /// representatives. Returns the skeletal quotient and the (fully
    /// faithful, surjective) projection.
    pub fn skeletal_quotient(&self) -> (QCategory, QFunctor) {
        let n = self.len();
        // class[i] = index of i's representative in self
        let mut class = vec![0usize; n];
        let mut reps: Vec<usize> = Vec::new();
        for (i, slot) in class.iter_mut().enumerate() {
            match reps.iter().find(|&&r| self.is_isomorphic_pair(r, i)) {
                Some(&r) => *slot = r,
                None => {
                    reps.push(i);
                    *slot = i;
                }
            }
        }
        let ids = ObjSet::new(
            reps.iter()
                .map(|&r| self.objects().get(r).to_string())
                .collect(),
        )
        .expect("subset of distinct ids");
        let hom = QMatrix::from_fn(self.quantale().clone(), ids.clone(), ids, |a, b| {
            Ok(self.hom_at(reps[a], reps[b]).clone())
        })
        .expect("entries come from a validated matrix");
        let quotient = QCategory::new(hom).expect("quotient of a valid category");
        let map = class
            .iter()
            .map(|&r| reps.iter().position(|&x| x == r).expect("representative"))
            .collect();
        let projection = QFunctor::new(self.clone(), quotient.clone(), map)
            .expect("isomorphic objects share all homs");
        (quotient, projection)
    }
}

/// A map of objects that shrinks no hom: `C(c,c') ⪯ D(fc, fc')` for all
/// pairs. Construction validates the inequality and reports the first
/// failing pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFunctor {
    source: QCategory,
    target: QCategory,
    map: Vec<usize>,
}

impl QFunctor {
    pub fn new(source: QCategory, target: QCategory, map: Vec<usize>) -> Result<QFunctor> {
        if source.quantale() != target.quantale() {
            return Err(Error::QuantaleMismatch {
                left: source.quantale().to_string(),
                right: target.quantale().to_string(),
            });
        }
        if map.len() != source.len() {
            return Err(Error::Shape {
                context: format!(
                    "object map has {} entries for {} source objects",
                    map.len(),
                    source.len()
                ),
            });
        }
        if let Some(&bad) = map.iter().find(|&&t| t >= target.len()) {
            return Err(Error::Shape {
                context: format!(
                    "object map hits index {bad}, target has {} objects",
                    target.len()
                ),
            });
        }
        let q = source.quantale();
        for c in 0..source.len() {
            for c1 in 0..source.len() {
                let s = source.hom_at(c, c1);
                let t = target.hom_at(map[c], map[c1]);
                if !q.leq(s, t)? {
                    return Err(Error::Functor {
                        c: source.objects().get(c).to_string(),
                        c_prime: source.objects().get(c1).to_string(),
                        source_hom: q.show(s),
                        target_hom: q.show(t),
                    });
                }
            }
        }
        Ok(QFunctor {
            source,
            target,
            map,
        })
    }

    pub fn identity(c: &QCategory) -> QFunctor {
        QFunctor {
            source: c.clone(),
            target: c.clone(),
            map: (0..c.len()).collect(),
        }
    }

    pub fn source(&self) -> &QCategory {
        &self.source
    }

    pub fn target(&self) -> &QCategory {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, c: usize) -> usize {
        self.map[c]
    }

    pub fn apply_id(&self, id: &str) -> Result<&str> {
        let i = self.source.objects().require(id)?;
        Ok(self.target.objects().get(self.map[i]))
    }

    /// Composite `self ∘ f`, applying `f` first.
    pub fn compose(&self, f: &QFunctor) -> Result<QFunctor> {
        if f.target != self.source {
            return Err(Error::Shape {
                context: "functor composition needs matching middle category".into(),
            });
        }
        Ok(QFunctor {
            source: f.source.clone(),
            target: self.target.clone(),
            map: f.map.iter().map(|&c| self.map[c]).collect(),
        })
    }

    /// The hom inequality holds with equality everywhere: an embedding
    /// (not necessarily injective on objects).
    pub fn is_fully_faithful(&self) -> bool {
        for c in 0..self.source.len() {
            for c1 in 0..self.source.len() {
                if self.source.hom_at(c, c1) != self.target.hom_at(self.map[c], self.map[c1]) {
                    return false;
                }
            }
        }
        true
    }

    /// Distances from the image into `d`: the presheaf-shaped column
    /// `(D(fc, d))_c` over the source objects.
    pub fn restricted_presheaf(&self, d: usize) -> QMatrix {
        QMatrix::from_fn(
            self.source.quantale().clone(),
            self.source.objects().clone(),
            ObjSet::point(),
            |c, _| Ok(self.target.hom_at(self.map[c], d).clone()),
        )
        .expect("entries come from a validated matrix")
    }

    /// Distances from `d` into the image: the copresheaf-shaped row
    /// `(D(d, fc))_c` over the source objects.
    pub fn restricted_copresheaf(&self, d: usize) -> QMatrix {
        QMatrix::from_fn(
            self.source.quantale().clone(),
            ObjSet::point(),
            self.source.objects().clone(),
            |_, c| Ok(self.target.hom_at(d, self.map[c]).clone()),
        )
        .expect("entries come from a validated matrix")
    }

    /// Density: every target hom is recovered from distances out of the
    /// image, `D(d,d') = ⋀_c (D(fc,d') ↙ D(fc,d))`.
    pub fn is_dense(&self) -> bool {
        let q = self.source.quantale();
        for d in 0..self.target.len() {
            for d1 in 0..self.target.len() {
                let mut acc = q.top();
                for c in 0..self.source.len() {
                    let r = q
                        .rext(
                            self.target.hom_at(self.map[c], d1),
                            self.target.hom_at(self.map[c], d),
                        )
                        .expect("validated entries");
                    acc = q.meet2(&acc, &r).expect("validated entries");
                }
                if &acc != self.target.hom_at(d, d1) {
                    return false;
                }
            }
        }
        true
    }

    /// Codensity: every target hom is recovered from distances into the
    /// image, `D(d,d') = ⋀_c (D(d',fc) ↘ D(d,fc))`.
    pub fn is_codense(&self) -> bool {
        let q = self.source.quantale();
        for d in 0..self.target.len() {
            for d1 in 0..self.target.len() {
                let mut acc = q.top();
                for c in 0..self.source.len() {
                    let r = q
                        .rlift(
                            self.target.hom_at(d1, self.map[c]),
                            self.target.hom_at(d, self.map[c]),
                        )
                        .expect("validated entries");
                    acc = q.meet2(&acc, &r).expect("validated entries");
                }
                if &acc != self.target.hom_at(d, d1) {
                    return false;
                }
            }
        }
        true
    }
}
