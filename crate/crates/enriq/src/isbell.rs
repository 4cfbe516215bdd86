//! Presheaves, copresheaves, the Yoneda embeddings and the Isbell
//! adjunction.
//!
//! A presheaf assigns each object a weight so that moving along a hom
//! can only increase membership: `P(c') ∘ C(c,c') ⪯ P(c)`. Over the truth
//! values these are exactly the lower sets; over distances, the
//! 1-Lipschitz functions into the carrier. Copresheaves are the duals.
//! Both are represented as one-column (resp. one-row) matrices so that
//! the Isbell maps are direct applications of the matrix residuals, with
//! no second implementation of the formulas.

use crate::error::{Error, Result};
use crate::qcategory::QCategory;
use crate::qmatrix::{ObjSet, QMatrix};
use crate::quantale::QElem;

/// A weight `P: objects ⇝ point` with `P(c') ∘ C(c,c') ⪯ P(c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presheaf {
    base: QCategory,
    values: QMatrix,
}

/// A weight `R: point ⇝ objects` with `C(c,c') ∘ R(c) ⪯ R(c')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Copresheaf {
    base: QCategory,
    values: QMatrix,
}

impl Presheaf {
    /// Validates the presheaf inequality; reports the first failing pair.
    pub fn new(base: QCategory, values: QMatrix) -> Result<Presheaf> {
        if values.rows() != base.objects() || values.cols().len() != 1 {
            return Err(Error::Shape {
                context: format!(
                    "presheaf values must be a single column over {}, got {}x{}",
                    base.objects(),
                    values.rows(),
                    values.cols()
                ),
            });
        }
        let q = base.quantale();
        if values.quantale() != q {
            return Err(Error::QuantaleMismatch {
                left: values.quantale().to_string(),
                right: q.to_string(),
            });
        }
        for c in 0..base.len() {
            for c1 in 0..base.len() {
                let moved = q.mul(values.entry(c1, 0), base.hom_at(c, c1))?;
                if !q.leq(&moved, values.entry(c, 0))? {
                    return Err(Error::Weight {
                        kind: "presheaf",
                        c: base.objects().get(c).to_string(),
                        c_prime: base.objects().get(c1).to_string(),
                        lhs: q.show(&moved),
                        rhs: q.show(values.entry(c, 0)),
                    });
                }
            }
        }
        Ok(Presheaf { base, values })
    }

    /// Builds the value column from a plain vector in object order.
    pub fn from_values(base: QCategory, values: Vec<QElem>) -> Result<Presheaf> {
        let m = QMatrix::new(
            base.quantale().clone(),
            base.objects().clone(),
            ObjSet::point(),
            values.into_iter().map(|v| vec![v]).collect(),
        )?;
        Presheaf::new(base, m)
    }

    pub fn base(&self) -> &QCategory {
        &self.base
    }

    pub fn values(&self) -> &QMatrix {
        &self.values
    }

    pub fn value(&self, c: usize) -> &QElem {
        self.values.entry(c, 0)
    }

    pub fn value_vec(&self) -> Vec<QElem> {
        self.values.col_vec(0)
    }
}

impl Copresheaf {
    /// Validates the copresheaf inequality; reports the first failing pair.
    pub fn new(base: QCategory, values: QMatrix) -> Result<Copresheaf> {
        if values.cols() != base.objects() || values.rows().len() != 1 {
            return Err(Error::Shape {
                context: format!(
                    "copresheaf values must be a single row over {}, got {}x{}",
                    base.objects(),
                    values.rows(),
                    values.cols()
                ),
            });
        }
        let q = base.quantale();
        if values.quantale() != q {
            return Err(Error::QuantaleMismatch {
                left: values.quantale().to_string(),
                right: q.to_string(),
            });
        }
        for c in 0..base.len() {
            for c1 in 0..base.len() {
                let moved = q.mul(base.hom_at(c, c1), values.entry(0, c))?;
                if !q.leq(&moved, values.entry(0, c1))? {
                    return Err(Error::Weight {
                        kind: "copresheaf",
                        c: base.objects().get(c).to_string(),
                        c_prime: base.objects().get(c1).to_string(),
                        lhs: q.show(&moved),
                        rhs: q.show(values.entry(0, c1)),
                    });
                }
            }
        }
        Ok(Copresheaf { base, values })
    }

    pub fn from_values(base: QCategory, values: Vec<QElem>) -> Result<Copresheaf> {
        let m = QMatrix::new(
            base.quantale().clone(),
            ObjSet::point(),
            base.objects().clone(),
            vec![values],
        )?;
        Copresheaf::new(base, m)
    }

    pub fn base(&self) -> &QCategory {
        &self.base
    }

    pub fn values(&self) -> &QMatrix {
        &self.values
    }

    pub fn value(&self, c: usize) -> &QElem {
        self.values.entry(0, c)
    }

    pub fn value_vec(&self) -> Vec<QElem> {
        self.values.row_vec(0)
    }
}

fn check_same_base(left: &QCategory, right: &QCategory, what: &str) -> Result<()> {
    if left != right {
        return Err(Error::Shape {
            context: format!("{what} needs a shared base category"),
        });
    }
    Ok(())
}

/// Hom of the presheaf category: `⋀_c P'(c) ↙ P(c)`.
pub fn presheaf_hom(p: &Presheaf, p1: &Presheaf) -> Result<QElem> {
    check_same_base(p.base(), p1.base(), "presheaf hom")?;
    let m = p1.values.rext(&p.values)?;
    Ok(m.entry(0, 0).clone())
}

/// Hom of the copresheaf category: `⋀_c R'(c) ↘ R(c)`.
pub fn copresheaf_hom(r: &Copresheaf, r1: &Copresheaf) -> Result<QElem> {
    check_same_base(r.base(), r1.base(), "copresheaf hom")?;
    let m = r1.values.rlift(&r.values)?;
    Ok(m.entry(0, 0).clone())
}

/// The representable presheaf of `c`: the column `(C(c',c))_{c'}`.
pub fn yoneda(base: &QCategory, c: usize) -> Presheaf {
    let values = QMatrix::from_fn(
        base.quantale().clone(),
        base.objects().clone(),
        ObjSet::point(),
        |c1, _| Ok(base.hom_at(c1, c).clone()),
    )
    .expect("hom entries are validated");
    Presheaf::new(base.clone(), values).expect("hom columns satisfy the presheaf inequality")
}

/// The representable copresheaf of `c`: the row `(C(c,c'))_{c'}`.
pub fn coyoneda(base: &QCategory, c: usize) -> Copresheaf {
    let values = QMatrix::from_fn(
        base.quantale().clone(),
        ObjSet::point(),
        base.objects().clone(),
        |_, c1| Ok(base.hom_at(c, c1).clone()),
    )
    .expect("hom entries are validated");
    Copresheaf::new(base.clone(), values).expect("hom rows satisfy the copresheaf inequality")
}

/// Left leg of the Isbell adjunction: `(C ↙ P)(c) = ⋀_{c'} C(c',c) ↙ P(c')`.
pub fn isbell_left(p: &Presheaf) -> Copresheaf {
    let values = p
        .base()
        .hom()
        .rext(&p.values)
        .expect("shapes agree by construction");
    Copresheaf::new(p.base().clone(), values).expect("residuals of a hom always form a copresheaf")
}

/// Right leg of the Isbell adjunction: `(R ↘ C)(c) = ⋀_{c'} R(c') ↘ C(c,c')`.
pub fn isbell_right(r: &Copresheaf) -> Presheaf {
    let values = r
        .values
        .rlift(r.base().hom())
        .expect("shapes agree by construction");
    Presheaf::new(r.base().clone(), values).expect("residuals of a hom always form a presheaf")
}

/// The adjunction equation: maps out of `P` into `R↘C` are maps out of
/// `C↙P` into `R`. Holds for every valid pair; exposed as a test
/// primitive.
pub fn check_isbell_adjunction(p: &Presheaf, r: &Copresheaf) -> Result<bool> {
    check_same_base(p.base(), r.base(), "adjunction check")?;
    let lhs = presheaf_hom(p, &isbell_right(r))?;
    let rhs = copresheaf_hom(&isbell_left(p), r)?;
    Ok(lhs == rhs)
}

/// All presheaves over a finite-carrier quantale, in canonical value
/// order (mixed radix over the carrier enumeration, last object fastest).
pub fn enumerate_presheaves(base: &QCategory) -> Result<Vec<Presheaf>> {
    let carrier = base.quantale().enumerate_carrier()?;
    let n = base.len();
    let mut out = Vec::new();
    let total = candidate_count(carrier.len(), n)?;
    for code in 0..total {
        let mut rest = code;
        let mut values = Vec::with_capacity(n);
        for _ in 0..n {
            values.push(carrier[rest % carrier.len()].clone());
            rest /= carrier.len();
        }
        values.reverse();
        if let Ok(p) = Presheaf::from_values(base.clone(), values) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Number of value vectors to scan, kept within address space.
fn candidate_count(carrier: usize, objects: usize) -> Result<usize> {
    let total = (carrier as u128)
        .checked_pow(objects as u32)
        .unwrap_or(u128::MAX);
    if total > u128::from(u32::MAX) {
        return Err(Error::ResourceCap {
            context: format!("enumerating weights over {objects} objects"),
            needed: total,
            cap: u128::from(u32::MAX),
        });
    }
    Ok(total as usize)
}

/// All copresheaves, enumerated the same way.
pub fn enumerate_copresheaves(base: &QCategory) -> Result<Vec<Copresheaf>> {
    let carrier = base.quantale().enumerate_carrier()?;
    let n = base.len();
    let mut out = Vec::new();
    let total = candidate_count(carrier.len(), n)?;
    for code in 0..total {
        let mut rest = code;
        let mut values = Vec::with_capacity(n);
        for _ in 0..n {
            values.push(carrier[rest % carrier.len()].clone());
            rest /= carrier.len();
        }
        values.reverse();
        if let Ok(r) = Copresheaf::from_values(base.clone(), values) {
            out.push(r);
        }
    }
    Ok(out)
}
