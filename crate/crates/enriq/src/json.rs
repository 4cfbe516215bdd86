//! JSON encoding and decoding for every value the command-line front
//! end exchanges: quantale specs, scalars, matrices, categories,
//! functors, weight pairs, ball systems, completions, and reports.
//!
//! Output is canonical so identical inputs produce identical bytes:
//! object keys are sorted (the default map), rationals are in lowest
//! terms with integer output for whole values reserved — whole numbers
//! still serialize as `{"num": p, "den": 1}` — and arrays follow
//! canonical object order. Scalar encodings depend on the quantale:
//! booleans, chain codes as integers, `{"num","den"}` or `"inf"` (an
//! integer is accepted as shorthand on input), index arrays for monoid
//! subsets, and pair arrays for relations.

use serde_json::{json, Map, Value};

use crate::analysis::{Ball, BallReport, CompletenessReport, ConvexityVerdict, KanOutcome};
use crate::error::{Error, Result};
use crate::isbell::{Copresheaf, Presheaf};
use crate::laws::LawReport;
use crate::macneille::{Completion, FixedPair, PresheafPair};
use crate::qcategory::{QCategory, QFunctor};
use crate::qmatrix::{ObjSet, QMatrix};
use crate::quantale::{QElem, Quantale, QuantaleKind};
use crate::rational::ExtRat;

fn bad(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| bad(format!("{what} must be a JSON object")))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, what: &str) -> Result<&'a Value> {
    m.get(key)
        .ok_or_else(|| bad(format!("{what} is missing the \"{key}\" field")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be a JSON array")))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| bad(format!("{what} must be a nonnegative integer")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| bad(format!("{what} must be a string")))
}

/// Renders any value in canonical form: two-space pretty printing with
/// sorted keys and a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values built here always serialize");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------
// quantale specs

/// Serializes the quantale selection spec, e.g. `{"kind":"chain_trop","n":4}`.
pub fn quantale_to_json(q: &Quantale) -> Value {
    match q.kind() {
        QuantaleKind::Bool2 => json!({"kind": "bool2"}),
        QuantaleKind::ChainTrop { n } => json!({"kind": "chain_trop", "n": n}),
        QuantaleKind::LawvereRat => json!({"kind": "lawvere_rat"}),
        QuantaleKind::MaxExt => json!({"kind": "max_ext"}),
        QuantaleKind::FreeMonoid { table, .. } => json!({"kind": "free_monoid", "table": table}),
        QuantaleKind::Relations { size } => json!({"kind": "relations", "size": size}),
    }
}

pub fn quantale_from_json(v: &Value) -> Result<Quantale> {
    let m = as_object(v, "quantale spec")?;
    let kind = as_str(field(m, "kind", "quantale spec")?, "quantale kind")?;
    match kind {
        "bool2" => Ok(Quantale::bool2()),
        "chain_trop" => {
            let n = as_u64(field(m, "n", "chain_trop spec")?, "chain length n")?;
            let n = u32::try_from(n).map_err(|_| bad("chain length n is out of range"))?;
            Quantale::chain_trop(n)
        }
        "lawvere_rat" => Ok(Quantale::lawvere_rat()),
        "max_ext" => Ok(Quantale::max_ext()),
        "free_monoid" => {
            let rows = as_array(field(m, "table", "free_monoid spec")?, "monoid table")?;
            let mut table = Vec::with_capacity(rows.len());
            for row in rows {
                let cells = as_array(row, "monoid table row")?;
                let mut out = Vec::with_capacity(cells.len());
                for cell in cells {
                    let c = as_u64(cell, "monoid table cell")?;
                    out.push(
                        u32::try_from(c).map_err(|_| bad("monoid table cell is out of range"))?,
                    );
                }
                table.push(out);
            }
            Quantale::free_monoid(table)
        }
        "relations" => {
            let size = as_u64(field(m, "size", "relations spec")?, "relations size")?;
            let size = u32::try_from(size).map_err(|_| bad("relations size is out of range"))?;
            Quantale::relations(size)
        }
        other => Err(bad(format!("unknown quantale kind \"{other}\""))),
    }
}

// ---------------------------------------------------------------------
// scalars

/// Serializes one scalar in the quantale's own encoding.
pub fn elem_to_json(q: &Quantale, e: &QElem) -> Result<Value> {
    match (q.kind(), e) {
        (QuantaleKind::Bool2, QElem::Idx(code)) => Ok(Value::Bool(*code == 1)),
        (QuantaleKind::ChainTrop { .. }, QElem::Idx(code)) => Ok(json!(code)),
        (QuantaleKind::LawvereRat | QuantaleKind::MaxExt, QElem::Rat(r)) => match r.parts() {
            None => Ok(json!("inf")),
            Some((num, den)) => {
                let num = u64::try_from(num.clone())
                    .map_err(|_| bad("rational numerator too large to serialize"))?;
                let den = u64::try_from(den.clone())
                    .map_err(|_| bad("rational denominator too large to serialize"))?;
                Ok(json!({"num": num, "den": den}))
            }
        },
        (QuantaleKind::FreeMonoid { table, .. }, QElem::Idx(code)) => {
            let n = table.len() as u32;
            let members: Vec<u32> = (0..n).filter(|i| code & (1 << i) != 0).collect();
            Ok(json!(members))
        }
        (QuantaleKind::Relations { size }, QElem::Idx(code)) => {
            let mut pairs = Vec::new();
            for a in 0..*size {
                for c in 0..*size {
                    if code & (1 << (a * size + c)) != 0 {
                        pairs.push(json!([a, c]));
                    }
                }
            }
            Ok(Value::Array(pairs))
        }
        _ => Err(bad(format!("scalar {e:?} does not belong to quantale {q}"))),
    }
}

pub fn elem_from_json(q: &Quantale, v: &Value) -> Result<QElem> {
    match q.kind() {
        QuantaleKind::Bool2 => {
            let b = v.as_bool().ok_or_else(|| bad("boolean scalar expected"))?;
            Ok(QElem::Idx(b as u32))
        }
        QuantaleKind::ChainTrop { n } => {
            let code = as_u64(v, "chain scalar")?;
            if code > u64::from(*n) {
                return Err(bad(format!(
                    "chain scalar {code} exceeds the chain length {n}"
                )));
            }
            Ok(QElem::Idx(code as u32))
        }
        QuantaleKind::LawvereRat | QuantaleKind::MaxExt => {
            if let Some(s) = v.as_str() {
                if s == "inf" {
                    return Ok(QElem::inf());
                }
                return Err(bad(format!("unknown rational scalar \"{s}\"")));
            }
            if let Some(n) = v.as_u64() {
                return Ok(QElem::int(n));
            }
            let m = as_object(v, "rational scalar")?;
            let num = as_u64(field(m, "num", "rational scalar")?, "numerator")?;
            let den = as_u64(field(m, "den", "rational scalar")?, "denominator")?;
            ExtRat::new(num, den)
                .map(QElem::Rat)
                .map_err(|_| bad("rational denominator must be positive"))
        }
        QuantaleKind::FreeMonoid { table, .. } => {
            let n = table.len() as u32;
            let items = as_array(v, "monoid subset scalar")?;
            let mut code = 0u32;
            for item in items {
                let i = as_u64(item, "monoid element index")?;
                if i >= u64::from(n) {
                    return Err(bad(format!("monoid element index {i} out of range")));
                }
                code |= 1 << i;
            }
            Ok(QElem::Idx(code))
        }
        QuantaleKind::Relations { size } => {
            let items = as_array(v, "relation scalar")?;
            let mut code = 0u32;
            for item in items {
                let pair = as_array(item, "relation pair")?;
                if pair.len() != 2 {
                    return Err(bad("relation pairs must have exactly two components"));
                }
                let a = as_u64(&pair[0], "relation pair component")?;
                let c = as_u64(&pair[1], "relation pair component")?;
                if a >= u64::from(*size) || c >= u64::from(*size) {
                    return Err(bad(format!("relation pair ({a},{c}) out of range")));
                }
                code |= 1 << (a as u32 * size + c as u32);
            }
            Ok(QElem::Idx(code))
        }
    }
}

// ---------------------------------------------------------------------
// matrices, categories, functors

fn entries_to_json(
    q: &Quantale,
    rows: usize,
    cols: usize,
    at: impl Fn(usize, usize) -> QElem,
) -> Result<Value> {
    let mut out = Vec::with_capacity(rows);
    for r in 0..rows {
        let mut row = Vec::with_capacity(cols);
        for c in 0..cols {
            row.push(elem_to_json(q, &at(r, c))?);
        }
        out.push(Value::Array(row));
    }
    Ok(Value::Array(out))
}

fn ids_to_json(objects: &ObjSet) -> Value {
    Value::Array(objects.iter().map(|id| json!(id)).collect())
}

fn ids_from_json(v: &Value, what: &str) -> Result<ObjSet> {
    let items = as_array(v, what)?;
    let mut ids = Vec::with_capacity(items.len());
    for item in items {
        ids.push(as_str(item, "object id")?.to_string());
    }
    ObjSet::new(ids)
}

pub fn matrix_to_json(m: &QMatrix) -> Result<Value> {
    Ok(json!({
        "rows": ids_to_json(m.rows()),
        "cols": ids_to_json(m.cols()),
        "entries": entries_to_json(m.quantale(), m.rows().len(), m.cols().len(), |r, c| m.entry(r, c).clone())?,
    }))
}

fn entries_from_json(
    q: &Quantale,
    v: &Value,
    rows: usize,
    cols: usize,
    what: &str,
) -> Result<Vec<Vec<QElem>>> {
    let row_values = as_array(v, what)?;
    if row_values.len() != rows {
        return Err(bad(format!(
            "{what} must have {rows} rows, found {}",
            row_values.len()
        )));
    }
    let mut out = Vec::with_capacity(rows);
    for row in row_values {
        let cells = as_array(row, "entry row")?;
        if cells.len() != cols {
            return Err(bad(format!(
                "{what} rows must have {cols} entries, found {}",
                cells.len()
            )));
        }
        out.push(
            cells
                .iter()
                .map(|cell| elem_from_json(q, cell))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(out)
}

pub fn matrix_from_json(q: &Quantale, v: &Value) -> Result<QMatrix> {
    let m = as_object(v, "matrix")?;
    let rows = ids_from_json(field(m, "rows", "matrix")?, "matrix rows")?;
    let cols = ids_from_json(field(m, "cols", "matrix")?, "matrix cols")?;
    let entries = entries_from_json(
        q,
        field(m, "entries", "matrix")?,
        rows.len(),
        cols.len(),
        "matrix entries",
    )?;
    QMatrix::new(q.clone(), rows, cols, entries)
}

/// Serializes a category with its quantale spec inline.
pub fn category_to_json(c: &QCategory) -> Result<Value> {
    Ok(json!({
        "quantale": quantale_to_json(c.quantale()),
        "objects": ids_to_json(c.objects()),
        "hom": entries_to_json(c.quantale(), c.len(), c.len(), |r, s| c.hom_at(r, s).clone())?,
    }))
}

/// Reads a category section. The quantale comes from the embedded spec,
/// or from `fallback` when the section has none; an embedded spec must
/// agree with a provided fallback.
pub fn category_from_json(v: &Value, fallback: Option<&Quantale>) -> Result<QCategory> {
    let m = as_object(v, "category")?;
    let q = match (m.get("quantale"), fallback) {
        (Some(spec), Some(outer)) => {
            let inner = quantale_from_json(spec)?;
            if &inner != outer {
                return Err(bad("category quantale differs from the instance quantale"));
            }
            inner
        }
        (Some(spec), None) => quantale_from_json(spec)?,
        (None, Some(outer)) => outer.clone(),
        (None, None) => return Err(bad("category is missing the \"quantale\" field")),
    };
    let objects = ids_from_json(field(m, "objects", "category")?, "category objects")?;
    let entries = entries_from_json(
        &q,
        field(m, "hom", "category")?,
        objects.len(),
        objects.len(),
        "hom matrix",
    )?;
    let hom = QMatrix::new(q, objects.clone(), objects, entries)?;
    QCategory::new(hom)
}

/// Serializes a functor as its object map, source ids to target ids.
pub fn functor_to_json(f: &QFunctor) -> Value {
    let mut map = Map::new();
    for (c, id) in f.source().objects().iter().enumerate() {
        map.insert(id.to_string(), json!(f.target().objects().get(f.apply(c))));
    }
    json!({"map": Value::Object(map)})
}

pub fn functor_from_json(source: &QCategory, target: &QCategory, v: &Value) -> Result<QFunctor> {
    let m = as_object(v, "functor")?;
    let assignments = as_object(field(m, "map", "functor")?, "functor map")?;
    let mut map = Vec::with_capacity(source.len());
    for id in source.objects().iter() {
        let image = assignments
            .get(id)
            .ok_or_else(|| bad(format!("functor map is missing source object \"{id}\"")))?;
        map.push(target.objects().require(as_str(image, "functor image")?)?);
    }
    if assignments.len() != source.len() {
        return Err(bad("functor map names objects outside the source category"));
    }
    QFunctor::new(source.clone(), target.clone(), map)
}

// ---------------------------------------------------------------------
// weights, pairs, balls

fn values_to_json(
    q: &Quantale,
    objects: &ObjSet,
    value_at: impl Fn(usize) -> QElem,
) -> Result<Value> {
    let mut map = Map::new();
    for (c, id) in objects.iter().enumerate() {
        map.insert(id.to_string(), elem_to_json(q, &value_at(c))?);
    }
    Ok(Value::Object(map))
}

fn values_from_json(q: &Quantale, objects: &ObjSet, v: &Value, what: &str) -> Result<Vec<QElem>> {
    let m = as_object(v, what)?;
    let mut out = Vec::with_capacity(objects.len());
    for id in objects.iter() {
        let cell = m
            .get(id)
            .ok_or_else(|| bad(format!("{what} is missing object \"{id}\"")))?;
        out.push(elem_from_json(q, cell)?);
    }
    if m.len() != objects.len() {
        return Err(bad(format!("{what} names objects outside the category")));
    }
    Ok(out)
}

pub fn presheaf_to_json(p: &Presheaf) -> Result<Value> {
    let base = p.base();
    Ok(json!({
        "values": values_to_json(base.quantale(), base.objects(), |c| p.values().entry(c, 0).clone())?,
    }))
}

pub fn copresheaf_to_json(r: &Copresheaf) -> Result<Value> {
    let base = r.base();
    Ok(json!({
        "co": true,
        "values": values_to_json(base.quantale(), base.objects(), |c| r.values().entry(0, c).clone())?,
    }))
}

/// Serializes a raw weight pair as flat object-to-scalar maps.
pub fn pair_to_json(pair: &PresheafPair) -> Result<Value> {
    let base = pair.base();
    Ok(json!({
        "x": values_to_json(base.quantale(), base.objects(), |c| pair.x().entry(c, 0).clone())?,
        "y": values_to_json(base.quantale(), base.objects(), |c| pair.y().entry(0, c).clone())?,
    }))
}

pub fn pair_from_json(base: &QCategory, v: &Value) -> Result<PresheafPair> {
    let m = as_object(v, "weight pair")?;
    let x = values_from_json(
        base.quantale(),
        base.objects(),
        field(m, "x", "weight pair")?,
        "pair x values",
    )?;
    let y = values_from_json(
        base.quantale(),
        base.objects(),
        field(m, "y", "weight pair")?,
        "pair y values",
    )?;
    PresheafPair::new(base.clone(), x, y)
}

pub fn fixed_pair_to_json(o: &FixedPair) -> Result<Value> {
    Ok(json!({
        "P": presheaf_to_json(o.presheaf())?,
        "R": copresheaf_to_json(o.copresheaf())?,
    }))
}

pub fn balls_to_json(q: &Quantale, balls: &[Ball]) -> Result<Value> {
    let mut out = Vec::with_capacity(balls.len());
    for ball in balls {
        out.push(json!({
            "at": ball.at,
            "x": elem_to_json(q, &ball.x)?,
            "y": elem_to_json(q, &ball.y)?,
        }));
    }
    Ok(Value::Array(out))
}

pub fn balls_from_json(q: &Quantale, v: &Value) -> Result<Vec<Ball>> {
    let items = as_array(v, "ball system")?;
    let mut out = Vec::with_capacity(items.len());
    for item in items {
        let m = as_object(item, "ball")?;
        out.push(Ball {
            at: as_str(field(m, "at", "ball")?, "ball center")?.to_string(),
            x: elem_from_json(q, field(m, "x", "ball")?)?,
            y: elem_from_json(q, field(m, "y", "ball")?)?,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// completions and reports

/// Serializes a completion: fixed pairs in canonical order, the hom
/// matrix, and the embedding as object-id to completion-index.
pub fn completion_to_json(mn: &Completion) -> Result<Value> {
    let objects = mn
        .objects()
        .iter()
        .map(fixed_pair_to_json)
        .collect::<Result<Vec<_>>>()?;
    let q = mn.base().quantale();
    let hom = entries_to_json(q, mn.len(), mn.len(), |r, c| {
        mn.category().hom_at(r, c).clone()
    })?;
    let mut embedding = Map::new();
    for (c, id) in mn.base().objects().iter().enumerate() {
        embedding.insert(id.to_string(), json!(mn.embedding_index(c)));
    }
    Ok(json!({
        "objects": Value::Array(objects),
        "hom": hom,
        "embedding": Value::Object(embedding),
    }))
}

pub fn law_report_to_json(report: &LawReport) -> Value {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("name".into(), json!(c.name));
            m.insert("passed".into(), json!(c.passed));
            m.insert("cases".into(), json!(c.cases));
            if let Some(f) = &c.failure {
                m.insert("failure".into(), json!(f));
            }
            Value::Object(m)
        })
        .collect();
    json!({
        "quantale": report.quantale,
        "exhaustive": report.exhaustive,
        "passed": report.passed,
        "checks": checks,
    })
}

pub fn completeness_to_json(report: &CompletenessReport) -> Value {
    json!({
        "powered": report.powered,
        "copowered": report.copowered,
        "order_complete": report.order_complete,
        "complete": report.complete,
    })
}

/// Witness section for a completeness report: present keys only for
/// the legs that failed.
pub fn completeness_witnesses_to_json(
    q: &Quantale,
    objects: &ObjSet,
    report: &CompletenessReport,
) -> Result<Map<String, Value>> {
    let mut m = Map::new();
    if let Some((obj, x)) = &report.power_witness {
        m.insert(
            "missing_power".into(),
            json!({"object": objects.get(*obj), "scalar": elem_to_json(q, x)?}),
        );
    }
    if let Some((obj, x)) = &report.copower_witness {
        m.insert(
            "missing_copower".into(),
            json!({"object": objects.get(*obj), "scalar": elem_to_json(q, x)?}),
        );
    }
    if let Some(subset) = &report.order_witness {
        let ids: Vec<&str> = subset.iter().map(|&i| objects.get(i)).collect();
        m.insert("order_gap".into(), json!(ids));
    }
    Ok(m)
}

pub fn convexity_to_json(verdict: &ConvexityVerdict) -> Result<Value> {
    let mut m = Map::new();
    m.insert("convex".into(), json!(verdict.convex));
    if let Some(pair) = &verdict.counterexample {
        m.insert("counterexample".into(), pair_to_json(pair)?);
    }
    Ok(Value::Object(m))
}

pub fn ball_report_to_json(c: &QCategory, report: &BallReport) -> Result<Value> {
    let mut m = Map::new();
    m.insert("consistent".into(), json!(report.consistent));
    m.insert(
        "witness".into(),
        match report.witness {
            Some(w) => json!(c.objects().get(w)),
            None => Value::Null,
        },
    );
    m.insert(
        "hull_point".into(),
        match &report.hull_point {
            Some(o) => fixed_pair_to_json(o)?,
            None => Value::Null,
        },
    );
    m.insert("induced".into(), pair_to_json(&report.induced)?);
    Ok(Value::Object(m))
}

pub fn kan_to_json(middle: &QCategory, target: &QCategory, outcome: &KanOutcome) -> Value {
    match outcome {
        KanOutcome::Extension(map) => {
            let mut assignments = Map::new();
            for (d, id) in middle.objects().iter().enumerate() {
                assignments.insert(id.to_string(), json!(target.objects().get(map[d])));
            }
            json!({"map": Value::Object(assignments)})
        }
        KanOutcome::Obstructed { at, why } => {
            json!({"obstructed": {"at": middle.objects().get(*at), "why": why}})
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::macneille;

    fn objs(ids: &[&str]) -> ObjSet {
        ObjSet::new(ids.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn roundtrip_elem(q: &Quantale, e: &QElem) {
        let v = elem_to_json(q, e).unwrap();
        assert_eq!(&elem_from_json(q, &v).unwrap(), e, "through {v}");
    }

    #[test]
    fn quantale_specs_roundtrip() {
        for q in [
            Quantale::bool2(),
            Quantale::chain_trop(4).unwrap(),
            Quantale::lawvere_rat(),
            Quantale::max_ext(),
            Quantale::free_monoid(crate::laws::cyclic_table(3)).unwrap(),
            Quantale::relations(2).unwrap(),
        ] {
            let v = quantale_to_json(&q);
            assert_eq!(quantale_from_json(&v).unwrap(), q);
        }
        assert!(quantale_from_json(&json!({"kind": "nope"})).is_err());
        assert!(quantale_from_json(&json!("bool2")).is_err());
    }

    #[test]
    fn scalars_roundtrip_in_every_encoding() {
        let b = Quantale::bool2();
        roundtrip_elem(&b, &b.bottom());
        roundtrip_elem(&b, &b.top());
        let chain = Quantale::chain_trop(3).unwrap();
        for e in chain.enumerate_carrier().unwrap() {
            roundtrip_elem(&chain, &e);
        }
        let l = Quantale::lawvere_rat();
        for e in [QElem::int(0), QElem::rat(7, 3), QElem::inf()] {
            roundtrip_elem(&l, &e);
        }
        let monoid = Quantale::free_monoid(crate::laws::cyclic_table(3)).unwrap();
        for e in monoid.enumerate_carrier().unwrap() {
            roundtrip_elem(&monoid, &e);
        }
        let rel = Quantale::relations(2).unwrap();
        for e in rel.enumerate_carrier().unwrap() {
            roundtrip_elem(&rel, &e);
        }
    }

    #[test]
    fn integer_shorthand_and_lowest_terms() {
        let l = Quantale::lawvere_rat();
        assert_eq!(elem_from_json(&l, &json!(3)).unwrap(), QElem::int(3));
        // 6/4 parses to canonical 3/2
        let parsed = elem_from_json(&l, &json!({"num": 6, "den": 4})).unwrap();
        assert_eq!(parsed, QElem::rat(3, 2));
        assert_eq!(
            elem_to_json(&l, &parsed).unwrap(),
            json!({"num": 3, "den": 2})
        );
        assert!(elem_from_json(&l, &json!({"num": 1, "den": 0})).is_err());
        assert!(elem_from_json(&l, &json!("infinite")).is_err());
    }

    #[test]
    fn chain_scalars_are_range_checked() {
        let chain = Quantale::chain_trop(2).unwrap();
        assert!(elem_from_json(&chain, &json!(3)).is_err());
        assert!(elem_from_json(&chain, &json!(-1)).is_err());
    }

    #[test]
    fn categories_roundtrip_with_embedded_quantale() {
        let q = Quantale::chain_trop(3).unwrap();
        let ids = objs(&["a", "b"]);
        let hom = QMatrix::new(
            q.clone(),
            ids.clone(),
            ids,
            vec![
                vec![QElem::Idx(0), QElem::Idx(2)],
                vec![QElem::Idx(1), QElem::Idx(0)],
            ],
        )
        .unwrap();
        let c = QCategory::new(hom).unwrap();
        let v = category_to_json(&c).unwrap();
        let back = category_from_json(&v, None).unwrap();
        assert_eq!(back.hom(), c.hom());
        // quantale mismatch against the instance-level spec is rejected
        assert!(category_from_json(&v, Some(&Quantale::bool2())).is_err());
        // axiom violations surface as axiom errors, not parse errors
        let broken = json!({
            "quantale": {"kind": "chain_trop", "n": 3},
            "objects": ["a"],
            "hom": [[2]],
        });
        assert!(matches!(
            category_from_json(&broken, None),
            Err(Error::Axiom(_))
        ));
    }

    #[test]
    fn functors_roundtrip_by_object_names() {
        let two = {
            let ids = objs(&["a", "b"]);
            let hom = QMatrix::new(
                Quantale::bool2(),
                ids.clone(),
                ids,
                vec![
                    vec![QElem::Idx(1), QElem::Idx(1)],
                    vec![QElem::Idx(0), QElem::Idx(1)],
                ],
            )
            .unwrap();
            QCategory::new(hom).unwrap()
        };
        let f = QFunctor::identity(&two);
        let v = functor_to_json(&f);
        let back = functor_from_json(&two, &two, &v).unwrap();
        assert_eq!(back.map(), f.map());
        assert!(functor_from_json(&two, &two, &json!({"map": {"a": "b"}})).is_err());
        assert!(
            functor_from_json(&two, &two, &json!({"map": {"a": "a", "b": "b", "zz": "a"}}))
                .is_err()
        );
    }

    #[test]
    fn completion_serialization_is_canonical() {
        let ids = objs(&["a", "b"]);
        let hom = QMatrix::diag(Quantale::bool2(), ids);
        let c = QCategory::new(hom).unwrap();
        let mn = macneille::construct(&c, macneille::DEFAULT_CANDIDATE_CAP).unwrap();
        let v = completion_to_json(&mn).unwrap();
        let text = to_canonical_string(&v);
        assert!(text.contains("\"embedding\""));
        // canonical output is stable across repeated serialization
        assert_eq!(text, to_canonical_string(&completion_to_json(&mn).unwrap()));
        let objects = v.get("objects").unwrap().as_array().unwrap();
        assert_eq!(objects.len(), 4);
    }

    #[test]
    fn pairs_and_balls_roundtrip() {
        let q = Quantale::lawvere_rat();
        let ids = objs(&["a", "b"]);
        let hom = QMatrix::new(
            q.clone(),
            ids.clone(),
            ids,
            vec![
                vec![QElem::int(0), QElem::int(1)],
                vec![QElem::int(1), QElem::int(0)],
            ],
        )
        .unwrap();
        let c = QCategory::new(hom).unwrap();
        let pair = PresheafPair::new(
            c.clone(),
            vec![QElem::rat(1, 2), QElem::rat(1, 2)],
            vec![QElem::rat(1, 2), QElem::rat(1, 2)],
        )
        .unwrap();
        let v = pair_to_json(&pair).unwrap();
        assert_eq!(pair_from_json(&c, &v).unwrap(), pair);
        let balls = vec![Ball {
            at: "a".into(),
            x: QElem::rat(1, 2),
            y: QElem::int(1),
        }];
        let bv = balls_to_json(&q, &balls).unwrap();
        assert_eq!(balls_from_json(&q, &bv).unwrap(), balls);
    }
}
