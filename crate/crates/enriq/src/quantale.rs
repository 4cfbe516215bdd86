//! Quantales: complete lattices carrying a monoid multiplication that
//! distributes over arbitrary joins in each variable.
//!
//! Six instances are provided. Four are finite (two truth values, a
//! saturating tropical chain, powersets of a finite monoid, binary
//! relations on a small base set) and carry precomputed multiplication
//! and residual tables; the residual tables are filled from the defining
//! adjunction (join of all solutions), not from closed forms. The two
//! extended-rational instances (addition and maximum on [0, ∞]) are
//! infinite and use the classical closed forms for their residuals.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rational::ExtRat;

/// Largest `n` accepted by [`Quantale::chain_trop`]; the residual tables
/// are cubic in the chain length.
pub const MAX_CHAIN_LEN: u32 = 256;
/// Largest monoid accepted by [`Quantale::free_monoid`]; the carrier is
/// its full powerset.
pub const MAX_MONOID_SIZE: usize = 6;
/// Largest base set accepted by [`Quantale::relations`]; the carrier has
/// `2^(size^2)` relations.
pub const MAX_RELATIONS_BASE: u32 = 2;

/// An element of a quantale carrier.
///
/// Finite instances use one canonical small-integer code per abstract
/// element (`Idx`): the numeric value itself on chains, a bitmask for the
/// powerset-shaped carriers. The extended-rational instances use exact
/// rationals (`Rat`). Structural equality is therefore canonical equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QElem {
    Idx(u32),
    Rat(ExtRat),
}

impl QElem {
    /// Integer-valued rational element.
    pub fn int(n: u64) -> QElem {
        QElem::Rat(ExtRat::from_int(n))
    }

    /// Rational element `num/den`. Panics on a zero denominator; use
    /// [`ExtRat::new`] when the parts are untrusted.
    pub fn rat(num: u64, den: u64) -> QElem {
        QElem::Rat(ExtRat::new(num, den).expect("nonzero denominator"))
    }

    pub fn inf() -> QElem {
        QElem::Rat(ExtRat::Inf)
    }
}

/// Instance tag plus parameters; two quantales are interchangeable exactly
/// when their kinds are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuantaleKind {
    /// Two truth values, false below true; multiplication is conjunction.
    Bool2,
    /// Carrier `{0, …, n}` under the *reversed* numeric order, with
    /// saturating addition `min(a+b, n)`; `n` plays infinity. The finite
    /// stand-in for the extended-rational distance quantale.
    ChainTrop { n: u32 },
    /// Nonnegative rationals with infinity, reversed order, addition.
    LawvereRat,
    /// Nonnegative rationals with infinity, reversed order, maximum.
    MaxExt,
    /// Full powerset of a finite monoid (given by its multiplication
    /// table) under inclusion, with elementwise product `A·B = {a·b}`.
    FreeMonoid { table: Vec<Vec<u32>>, unit: u32 },
    /// All binary relations on `{0, …, size-1}` under inclusion, with
    /// relational composition. Bit `a*size + c` of a code is the pair
    /// `(a, c)`.
    Relations { size: u32 },
}

/// Cached operation tables for a finite instance. All tables are dense,
/// indexed by element code.
#[derive(Debug)]
struct Tables {
    len: u32,
    /// `mul[y*len + x]` is the product `y ∘ x` (left factor first).
    mul: Vec<u32>,
    /// `rext[z*len + x]` is the largest `y` with `y ∘ x ⪯ z`.
    rext: Vec<u32>,
    /// `rlift[y*len + z]` is the largest `x` with `y ∘ x ⪯ z`.
    rlift: Vec<u32>,
}

/// A quantale instance: kind plus, for finite instances, cached tables.
/// Cloning is cheap; equality compares kinds only.
#[derive(Debug, Clone)]
pub struct Quantale {
    kind: QuantaleKind,
    tables: Option<Arc<Tables>>,
}

impl PartialEq for Quantale {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Quantale {}

impl fmt::Display for Quantale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            QuantaleKind::Bool2 => write!(f, "bool2"),
            QuantaleKind::ChainTrop { n } => write!(f, "chain_trop({n})"),
            QuantaleKind::LawvereRat => write!(f, "lawvere_rat"),
            QuantaleKind::MaxExt => write!(f, "max_ext"),
            QuantaleKind::FreeMonoid { table, .. } => write!(f, "free_monoid({})", table.len()),
            QuantaleKind::Relations { size } => write!(f, "relations({size})"),
        }
    }
}

// Code-level lattice and monoid operations for the finite kinds. These
// are the single source of truth the tables are built from.

fn code_len(kind: &QuantaleKind) -> u32 {
    match kind {
        QuantaleKind::Bool2 => 2,
        QuantaleKind::ChainTrop { n } => n + 1,
        QuantaleKind::FreeMonoid { table, .. } => 1 << table.len(),
        QuantaleKind::Relations { size } => 1 << (size * size),
        _ => unreachable!("infinite carrier"),
    }
}

fn code_leq(kind: &QuantaleKind, a: u32, b: u32) -> bool {
    match kind {
        QuantaleKind::Bool2 => a <= b,
        QuantaleKind::ChainTrop { .. } => a >= b,
        QuantaleKind::FreeMonoid { .. } | QuantaleKind::Relations { .. } => a & !b == 0,
        _ => unreachable!(),
    }
}

fn code_join2(kind: &QuantaleKind, a: u32, b: u32) -> u32 {
    match kind {
        QuantaleKind::Bool2 => a.max(b),
        QuantaleKind::ChainTrop { .. } => a.min(b),
        QuantaleKind::FreeMonoid { .. } | QuantaleKind::Relations { .. } => a | b,
        _ => unreachable!(),
    }
}

fn code_meet2(kind: &QuantaleKind, a: u32, b: u32) -> u32 {
    match kind {
        QuantaleKind::Bool2 => a.min(b),
        QuantaleKind::ChainTrop { .. } => a.max(b),
        QuantaleKind::FreeMonoid { .. } | QuantaleKind::Relations { .. } => a & b,
        _ => unreachable!(),
    }
}

fn code_bottom(kind: &QuantaleKind) -> u32 {
    match kind {
        QuantaleKind::Bool2 => 0,
        QuantaleKind::ChainTrop { n } => *n,
        QuantaleKind::FreeMonoid { .. } | QuantaleKind::Relations { .. } => 0,
        _ => unreachable!(),
    }
}

fn code_top(kind: &QuantaleKind) -> u32 {
    match kind {
        QuantaleKind::Bool2 => 1,
        QuantaleKind::ChainTrop { .. } => 0,
        _ => code_len(kind) - 1,
    }
}

fn code_unit(kind: &QuantaleKind) -> u32 {
    match kind {
        QuantaleKind::Bool2 => 1,
        QuantaleKind::ChainTrop { .. } => 0,
        QuantaleKind::FreeMonoid { unit, .. } => 1 << unit,
        QuantaleKind::Relations { size } => {
            let mut d = 0u32;
            for a in 0..*size {
                d |= 1 << (a * size + a);
            }
            d
        }
        _ => unreachable!(),
    }
}

fn code_mul(kind: &QuantaleKind, y: u32, x: u32) -> u32 {
    match kind {
        QuantaleKind::Bool2 => y.min(x),
        QuantaleKind::ChainTrop { n } => (y + x).min(*n),
        QuantaleKind::FreeMonoid { table, .. } => {
            let mut out = 0u32;
            for (a, row) in table.iter().enumerate() {
                if y & (1 << a) == 0 {
                    continue;
                }
                for (b, &prod) in row.iter().enumerate() {
                    if x & (1 << b) != 0 {
                        out |= 1 << prod;
                    }
                }
            }
            out
        }
        QuantaleKind::Relations { size } => {
            // y ∘ x relates a to c when some b has (a,b) in x and (b,c) in y.
            let s = *size;
            let mut out = 0u32;
            for a in 0..s {
                for c in 0..s {
                    for b in 0..s {
                        if x & (1 << (a * s + b)) != 0 && y & (1 << (b * s + c)) != 0 {
                            out |= 1 << (a * s + c);
                            break;
                        }
                    }
                }
            }
            out
        }
        _ => unreachable!(),
    }
}

/// Position of a code in the canonical (order-ascending) enumeration.
fn code_rank(kind: &QuantaleKind, c: u32) -> u32 {
    match kind {
        QuantaleKind::ChainTrop { n } => n - c,
        _ => c,
    }
}

fn code_of_rank(kind: &QuantaleKind, r: u32) -> u32 {
    match kind {
        QuantaleKind::ChainTrop { n } => n - r,
        _ => r,
    }
}

fn build_tables(kind: &QuantaleKind) -> Tables {
    let len = code_len(kind);
    let n = len as usize;
    let mut mul = vec![0u32; n * n];
    for y in 0..len {
        for x in 0..len {
            mul[(y as usize) * n + x as usize] = code_mul(kind, y, x);
        }
    }
    // Residuals by definition: the join of all solutions is itself a
    // solution (multiplication distributes over joins), hence the largest.
    let mut rext = vec![0u32; n * n];
    for z in 0..len {
        for x in 0..len {
            let mut best = code_bottom(kind);
            for y in 0..len {
                if code_leq(kind, mul[(y as usize) * n + x as usize], z) {
                    best = code_join2(kind, best, y);
                }
            }
            rext[(z as usize) * n + x as usize] = best;
        }
    }
    let mut rlift = vec![0u32; n * n];
    for y in 0..len {
        for z in 0..len {
            let mut best = code_bottom(kind);
            for x in 0..len {
                if code_leq(kind, mul[(y as usize) * n + x as usize], z) {
                    best = code_join2(kind, best, x);
                }
            }
            rlift[(y as usize) * n + z as usize] = best;
        }
    }
    Tables {
        len,
        mul,
        rext,
        rlift,
    }
}

impl Quantale {
    fn finite(kind: QuantaleKind) -> Quantale {
        let tables = Some(Arc::new(build_tables(&kind)));
        Quantale { kind, tables }
    }

    /// The two-element quantale of truth values.
    pub fn bool2() -> Quantale {
        Quantale::finite(QuantaleKind::Bool2)
    }

    /// The saturating tropical chain `{0, …, n}` with `n` playing infinity.
    pub fn chain_trop(n: u32) -> Result<Quantale> {
        if n > MAX_CHAIN_LEN {
            return Err(Error::ResourceCap {
                context: format!("chain_trop({n}) residual tables"),
                needed: u128::from(n) + 1,
                cap: u128::from(MAX_CHAIN_LEN) + 1,
            });
        }
        Ok(Quantale::finite(QuantaleKind::ChainTrop { n }))
    }

    /// Exact extended-rational distances under addition.
    pub fn lawvere_rat() -> Quantale {
        Quantale {
            kind: QuantaleKind::LawvereRat,
            tables: None,
        }
    }

    /// Exact extended-rational distances under maximum.
    pub fn max_ext() -> Quantale {
        Quantale {
            kind: QuantaleKind::MaxExt,
            tables: None,
        }
    }

    /// Powerset quantale of the finite monoid given by `table`, where
    /// `table[a][b]` is the product of elements `a` and `b`. The table
    /// must be associative and contain a two-sided unit.
    pub fn free_monoid(table: Vec<Vec<u32>>) -> Result<Quantale> {
        let k = table.len();
        if k == 0 {
            return Err(Error::Invalid("monoid table is empty".into()));
        }
        if k > MAX_MONOID_SIZE {
            return Err(Error::ResourceCap {
                context: format!("free_monoid over a {k}-element monoid"),
                needed: 1u128 << k,
                cap: 1u128 << MAX_MONOID_SIZE,
            });
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != k {
                return Err(Error::Invalid(format!(
                    "monoid table row {a} has length {}, expected {k}",
                    row.len()
                )));
            }
            for &v in row {
                if v as usize >= k {
                    return Err(Error::Invalid(format!(
                        "monoid table entry {v} is out of range for {k} elements"
                    )));
                }
            }
        }
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let ab_c = table[table[a][b] as usize][c];
                    let a_bc = table[a][table[b][c] as usize];
                    if ab_c != a_bc {
                        return Err(Error::Invalid(format!(
                            "monoid table is not associative at ({a},{b},{c}): ({a}{b}){c} = {ab_c} but {a}({b}{c}) = {a_bc}"
                        )));
                    }
                }
            }
        }
        let unit = (0..k)
            .find(|&e| (0..k).all(|a| table[e][a] as usize == a && table[a][e] as usize == a))
            .ok_or_else(|| Error::Invalid("monoid table has no two-sided unit".into()))?;
        Ok(Quantale::finite(QuantaleKind::FreeMonoid {
            table,
            unit: unit as u32,
        }))
    }

    /// Quantale of all binary relations on a `size`-element base set.
    pub fn relations(size: u32) -> Result<Quantale> {
        if size > MAX_RELATIONS_BASE {
            return Err(Error::ResourceCap {
                context: format!("relations({size}) carrier"),
                needed: 1u128 << (u128::from(size) * u128::from(size)).min(127),
                cap: 1u128 << (MAX_RELATIONS_BASE * MAX_RELATIONS_BASE),
            });
        }
        Ok(Quantale::finite(QuantaleKind::Relations { size }))
    }

    pub fn kind(&self) -> &QuantaleKind {
        &self.kind
    }

    pub fn is_finite(&self) -> bool {
        self.tables.is_some()
    }

    fn tables(&self) -> &Tables {
        self.tables.as_ref().expect("finite quantale")
    }

    fn unsupported(&self, operation: &str) -> Error {
        Error::Unsupported {
            quantale: self.to_string(),
            operation: operation.into(),
        }
    }

    fn domain_err(&self, x: &QElem) -> Error {
        Error::Domain {
            quantale: self.to_string(),
            element: format!("{x:?}"),
        }
    }

    /// Extracts the code of a finite-carrier element, validating membership.
    fn code(&self, x: &QElem) -> Result<u32> {
        match (x, &self.tables) {
            (QElem::Idx(c), Some(t)) if *c < t.len => Ok(*c),
            _ => Err(self.domain_err(x)),
        }
    }

    /// Extracts the rational of an extended-rational element.
    fn rat<'a>(&self, x: &'a QElem) -> Result<&'a ExtRat> {
        match (x, &self.kind) {
            (QElem::Rat(r), QuantaleKind::LawvereRat | QuantaleKind::MaxExt) => Ok(r),
            _ => Err(self.domain_err(x)),
        }
    }

    pub fn contains(&self, x: &QElem) -> bool {
        self.code(x).is_ok() || self.rat(x).is_ok()
    }

    /// The partial order of the carrier.
    pub fn leq(&self, x: &QElem, y: &QElem) -> Result<bool> {
        if self.is_finite() {
            Ok(code_leq(&self.kind, self.code(x)?, self.code(y)?))
        } else {
            // Reversed numeric order: smaller distances sit higher.
            Ok(self.rat(x)? >= self.rat(y)?)
        }
    }

    pub fn bottom(&self) -> QElem {
        if self.is_finite() {
            QElem::Idx(code_bottom(&self.kind))
        } else {
            QElem::Rat(ExtRat::Inf)
        }
    }

    pub fn top(&self) -> QElem {
        if self.is_finite() {
            QElem::Idx(code_top(&self.kind))
        } else {
            QElem::Rat(ExtRat::zero())
        }
    }

    pub fn unit(&self) -> QElem {
        if self.is_finite() {
            QElem::Idx(code_unit(&self.kind))
        } else {
            QElem::Rat(ExtRat::zero())
        }
    }

    /// Binary join (least upper bound).
    pub fn join2(&self, x: &QElem, y: &QElem) -> Result<QElem> {
        if self.is_finite() {
            Ok(QElem::Idx(code_join2(
                &self.kind,
                self.code(x)?,
                self.code(y)?,
            )))
        } else {
            // Join in the reversed order is the numeric minimum.
            Ok(QElem::Rat(self.rat(x)?.min(self.rat(y)?)))
        }
    }

    /// Binary meet (greatest lower bound).
    pub fn meet2(&self, x: &QElem, y: &QElem) -> Result<QElem> {
        if self.is_finite() {
            Ok(QElem::Idx(code_meet2(
                &self.kind,
                self.code(x)?,
                self.code(y)?,
            )))
        } else {
            Ok(QElem::Rat(self.rat(x)?.max(self.rat(y)?)))
        }
    }

    /// Join of a finite set; the empty join is bottom.
    pub fn join(&self, xs: &[QElem]) -> Result<QElem> {
        let mut acc = self.bottom();
        for x in xs {
            acc = self.join2(&acc, x)?;
        }
        Ok(acc)
    }

    /// Meet of a finite set; the empty meet is top.
    pub fn meet(&self, xs: &[QElem]) -> Result<QElem> {
        let mut acc = self.top();
        for x in xs {
            acc = self.meet2(&acc, x)?;
        }
        Ok(acc)
    }

    /// Monoid multiplication `y ∘ x`, left factor first. The argument
    /// order matters for the noncommutative instances.
    pub fn mul(&self, y: &QElem, x: &QElem) -> Result<QElem> {
        if self.is_finite() {
            let t = self.tables();
            let (cy, cx) = (self.code(y)?, self.code(x)?);
            Ok(QElem::Idx(t.mul[(cy * t.len + cx) as usize]))
        } else {
            let (ry, rx) = (self.rat(y)?, self.rat(x)?);
            match self.kind {
                QuantaleKind::LawvereRat => Ok(QElem::Rat(ry.add(rx))),
                _ => Ok(QElem::Rat(ry.max(rx))),
            }
        }
    }

    /// Right extension `z ↙ x`: the largest `y` with `y ∘ x ⪯ z`.
    pub fn rext(&self, z: &QElem, x: &QElem) -> Result<QElem> {
        if self.is_finite() {
            let t = self.tables();
            let (cz, cx) = (self.code(z)?, self.code(x)?);
            Ok(QElem::Idx(t.rext[(cz * t.len + cx) as usize]))
        } else {
            let (rz, rx) = (self.rat(z)?, self.rat(x)?);
            match self.kind {
                // Truncated subtraction, with both infinity cases.
                QuantaleKind::LawvereRat => Ok(QElem::Rat(rz.truncated_sub(rx))),
                // For maximum: anything works when x already reaches z.
                _ => Ok(if rx >= rz {
                    QElem::Rat(ExtRat::zero())
                } else {
                    QElem::Rat(rz.clone())
                }),
            }
        }
    }

    /// Right lifting `y ↘ z`: the largest `x` with `y ∘ x ⪯ z`.
    pub fn rlift(&self, y: &QElem, z: &QElem) -> Result<QElem> {
        if self.is_finite() {
            let t = self.tables();
            let (cy, cz) = (self.code(y)?, self.code(z)?);
            Ok(QElem::Idx(t.rlift[(cy * t.len + cz) as usize]))
        } else {
            let (ry, rz) = (self.rat(y)?, self.rat(z)?);
            match self.kind {
                QuantaleKind::LawvereRat => Ok(QElem::Rat(rz.truncated_sub(ry))),
                _ => Ok(if ry >= rz {
                    QElem::Rat(ExtRat::zero())
                } else {
                    QElem::Rat(rz.clone())
                }),
            }
        }
    }

    /// Number of carrier elements of a finite instance.
    pub fn carrier_len(&self) -> Result<usize> {
        if self.is_finite() {
            Ok(self.tables().len as usize)
        } else {
            Err(self.unsupported("carrier_len"))
        }
    }

    /// Every carrier element exactly once, ascending in the carrier order
    /// (ties broken canonically for the powerset-shaped instances, whose
    /// mask order is a linear extension of inclusion).
    pub fn enumerate_carrier(&self) -> Result<Vec<QElem>> {
        if !self.is_finite() {
            return Err(self.unsupported("enumerate_carrier"));
        }
        let len = self.tables().len;
        Ok((0..len)
            .map(|r| QElem::Idx(code_of_rank(&self.kind, r)))
            .collect())
    }

    /// Position of an element in the canonical enumeration.
    pub fn canon_rank(&self, x: &QElem) -> Result<usize> {
        if !self.is_finite() {
            return Err(self.unsupported("canon_rank"));
        }
        Ok(code_rank(&self.kind, self.code(x)?) as usize)
    }

    /// A total order on elements for deterministic sorting: enumeration
    /// rank on finite carriers, numeric order on rationals. Not the
    /// carrier order.
    pub fn canon_cmp(&self, x: &QElem, y: &QElem) -> Ordering {
        match (x, y) {
            (QElem::Idx(a), QElem::Idx(b)) => {
                code_rank(&self.kind, *a).cmp(&code_rank(&self.kind, *b))
            }
            (QElem::Rat(a), QElem::Rat(b)) => a.cmp(b),
            (QElem::Idx(_), QElem::Rat(_)) => Ordering::Less,
            (QElem::Rat(_), QElem::Idx(_)) => Ordering::Greater,
        }
    }

    /// Human-readable form of an element, used in reports and labels.
    pub fn show(&self, x: &QElem) -> String {
        match (&self.kind, x) {
            (QuantaleKind::Bool2, QElem::Idx(c)) => {
                if *c == 0 {
                    "false".into()
                } else {
                    "true".into()
                }
            }
            (QuantaleKind::ChainTrop { .. }, QElem::Idx(c)) => c.to_string(),
            (QuantaleKind::FreeMonoid { table, .. }, QElem::Idx(mask)) => {
                let items: Vec<String> = (0..table.len() as u32)
                    .filter(|a| mask & (1 << a) != 0)
                    .map(|a| a.to_string())
                    .collect();
                format!("{{{}}}", items.join(","))
            }
            (QuantaleKind::Relations { size }, QElem::Idx(mask)) => {
                let mut items = Vec::new();
                for a in 0..*size {
                    for c in 0..*size {
                        if mask & (1 << (a * size + c)) != 0 {
                            items.push(format!("({a},{c})"));
                        }
                    }
                }
                format!("{{{}}}", items.join(","))
            }
            (_, QElem::Rat(r)) => r.to_string(),
            _ => format!("{x:?}"),
        }
    }
}
