//! JSON import/export for algebra tables, Hopf tables, cocycles, cleft
//! extensions, smoothness reports, and decompositions, plus the preset
//! grammar shared by the command line and the instance corpus.
//!
//! Scalars over F_p appear as JSON integers (residues); scalars over ℚ
//! appear as strings "n" or "n/d". Export is canonical: keys are sorted
//! and every re-import of an exported value re-exports byte-identically.

use crate::algebra::{AlgebraTable, AugmentedAlgebra};
use crate::cleft::{CleftExtension, SymmetricCocycle};
use crate::decompose::TruncatedDecomposition;
use crate::error::{Error, Result};
use crate::exactla::{Field, FieldSpec, Matrix};
use crate::hopf::{
    chained_power_hopf, etale_functions_hopf, group_hopf, truncated_primitive_hopf,
    CoproductTerms, HopfTable,
};
use serde_json::{json, Map, Value};

/// The field a generic computation is running over, as a serializable tag.
pub fn field_spec_of<K: Field>(f: &K) -> FieldSpec {
    match f.characteristic() {
        0 => FieldSpec::Rationals,
        p => FieldSpec::Prime(p),
    }
}

fn scalar_to_value<K: Field>(f: &K, e: &K::Elem) -> Value {
    let s = f.format(e);
    if f.characteristic() == 0 {
        Value::String(s)
    } else {
        json!(s.parse::<u64>().expect("prime-field scalars format as residues"))
    }
}

fn scalar_from_value<K: Field>(f: &K, v: &Value) -> Result<K::Elem> {
    match v {
        Value::Number(n) => f.parse(&n.to_string()),
        Value::String(s) => f.parse(s),
        other => Err(Error::BadScalar {
            text: other.to_string(),
            field: field_spec_of(f).token(),
        }),
    }
}

pub fn vec_to_value<K: Field>(f: &K, v: &[K::Elem]) -> Value {
    Value::Array(v.iter().map(|e| scalar_to_value(f, e)).collect())
}

fn vec_from_value<K: Field>(f: &K, v: &Value, what: &str) -> Result<Vec<K::Elem>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Json(format!("{what} must be an array of scalars")))?;
    arr.iter().map(|x| scalar_from_value(f, x)).collect()
}

pub fn matrix_to_value<K: Field>(m: &Matrix<K>) -> Value {
    let f = m.field();
    Value::Array((0..m.rows()).map(|i| vec_to_value(f, m.row(i))).collect())
}

fn matrix_from_value<K: Field>(
    f: &K,
    v: &Value,
    rows: usize,
    cols: usize,
    what: &str,
) -> Result<Matrix<K>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Json(format!("{what} must be an array of rows")))?;
    if arr.len() != rows {
        return Err(Error::Json(format!("{what} must have {rows} rows, got {}", arr.len())));
    }
    let mut data = Vec::with_capacity(rows);
    for row in arr {
        let r = vec_from_value(f, row, what)?;
        if r.len() != cols {
            return Err(Error::Json(format!(
                "{what} rows must have {cols} entries, got {}",
                r.len()
            )));
        }
        data.push(r);
    }
    Matrix::from_rows(f.clone(), data)
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str, what: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Json(format!("{what} is missing key {key:?}")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Json(format!("{what} must be a JSON object")))
}

/// Read the "field" key of a table-like object.
pub fn field_of_json(v: &Value) -> Result<FieldSpec> {
    let obj = as_object(v, "table")?;
    let tok = get(obj, "field", "table")?
        .as_str()
        .ok_or_else(|| Error::Json("field must be a string token".into()))?;
    FieldSpec::parse_token(tok)
}

pub fn algebra_to_json<K: Field>(t: &AlgebraTable<K>) -> Value {
    let f = t.field();
    let dim = t.dim();
    let mult: Vec<Value> = (0..dim)
        .map(|i| {
            Value::Array((0..dim).map(|j| vec_to_value(f, t.mul_basis(i, j))).collect())
        })
        .collect();
    json!({
        "field": field_spec_of(f).token(),
        "dim": dim,
        "labels": t.labels(),
        "unit": vec_to_value(f, t.unit()),
        "mult": mult,
    })
}

pub fn algebra_from_json<K: Field>(f: &K, v: &Value) -> Result<AlgebraTable<K>> {
    let obj = as_object(v, "algebra table")?;
    let spec = field_of_json(v)?;
    if spec != field_spec_of(f) {
        return Err(Error::Json(format!(
            "table is over {}, expected {}",
            spec.token(),
            field_spec_of(f).token()
        )));
    }
    let dim = get(obj, "dim", "algebra table")?
        .as_u64()
        .ok_or_else(|| Error::Json("dim must be a positive integer".into()))? as usize;
    let labels: Vec<String> = get(obj, "labels", "algebra table")?
        .as_array()
        .ok_or_else(|| Error::Json("labels must be an array".into()))?
        .iter()
        .map(|l| {
            l.as_str()
                .map(str::to_owned)
                .ok_or_else(|| Error::Json("labels must be strings".into()))
        })
        .collect::<Result<_>>()?;
    if labels.len() != dim {
        return Err(Error::Json(format!("expected {dim} labels, got {}", labels.len())));
    }
    let unit = vec_from_value(f, get(obj, "unit", "algebra table")?, "unit")?;
    if unit.len() != dim {
        return Err(Error::Json(format!("unit must have {dim} entries")));
    }
    let rows = get(obj, "mult", "algebra table")?
        .as_array()
        .ok_or_else(|| Error::Json("mult must be a dim×dim×dim array".into()))?;
    if rows.len() != dim {
        return Err(Error::Json(format!("mult must have {dim} rows")));
    }
    let mut mult = Vec::with_capacity(dim * dim * dim);
    for row in rows {
        let cells = row
            .as_array()
            .ok_or_else(|| Error::Json("mult rows must be arrays".into()))?;
        if cells.len() != dim {
            return Err(Error::Json(format!("mult rows must have {dim} cells")));
        }
        for cell in cells {
            let c = vec_from_value(f, cell, "mult cell")?;
            if c.len() != dim {
                return Err(Error::Json(format!("mult cells must have {dim} entries")));
            }
            mult.extend(c);
        }
    }
    AlgebraTable::from_structure_constants(f.clone(), labels, unit, mult)
}

fn coproduct_to_value<K: Field>(f: &K, terms: &[CoproductTerms<K>]) -> Value {
    Value::Array(
        terms
            .iter()
            .map(|t| {
                Value::Array(
                    t.iter()
                        .map(|(c, i, j)| json!([i, j, scalar_to_value(f, c)]))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn coproduct_from_value<K: Field>(
    f: &K,
    v: &Value,
    len: usize,
    what: &str,
) -> Result<Vec<CoproductTerms<K>>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Json(format!("{what} must be an array of term lists")))?;
    if arr.len() != len {
        return Err(Error::Json(format!("{what} must have {len} entries, got {}", arr.len())));
    }
    arr.iter()
        .map(|terms| {
            terms
                .as_array()
                .ok_or_else(|| Error::Json(format!("{what} entries must be arrays")))?
                .iter()
                .map(|t| {
                    let t = t
                        .as_array()
                        .filter(|t| t.len() == 3)
                        .ok_or_else(|| Error::Json(format!("{what} terms must be [i, j, c]")))?;
                    let i = t[0]
                        .as_u64()
                        .ok_or_else(|| Error::Json(format!("{what} indices must be integers")))?;
                    let j = t[1]
                        .as_u64()
                        .ok_or_else(|| Error::Json(format!("{what} indices must be integers")))?;
                    let c = scalar_from_value(f, &t[2])?;
                    Ok((c, i as usize, j as usize))
                })
                .collect()
        })
        .collect()
}

pub fn hopf_to_json<K: Field>(h: &HopfTable<K>) -> Value {
    let f = h.field();
    let mut obj = match algebra_to_json(&h.alg) {
        Value::Object(o) => o,
        _ => unreachable!(),
    };
    obj.insert("counit".into(), vec_to_value(f, &h.counit));
    obj.insert("coproduct".into(), coproduct_to_value(f, &h.coproduct));
    obj.insert("antipode".into(), matrix_to_value(&h.antipode));
    Value::Object(obj)
}

pub fn hopf_from_json<K: Field>(f: &K, v: &Value) -> Result<HopfTable<K>> {
    let obj = as_object(v, "Hopf table")?;
    let alg = algebra_from_json(f, v)?;
    let dim = alg.dim();
    let counit = vec_from_value(f, get(obj, "counit", "Hopf table")?, "counit")?;
    let coproduct = coproduct_from_value(f, get(obj, "coproduct", "Hopf table")?, dim, "coproduct")?;
    let antipode = matrix_from_value(f, get(obj, "antipode", "Hopf table")?, dim, dim, "antipode")?;
    HopfTable::new_checked(alg, counit, coproduct, antipode)
}

/// Build a Hopf table from a monomial-presentation object:
/// {"field", "kind", ...} with kind one of "group_algebra",
/// "truncated_primitive", "sample1_truncated", "etale_functions".
pub fn hopf_from_presentation_json<K: Field>(f: &K, v: &Value) -> Result<HopfTable<K>> {
    let obj = as_object(v, "presentation")?;
    let spec = field_of_json(v)?;
    if spec != field_spec_of(f) {
        return Err(Error::Json(format!(
            "presentation is over {}, expected {}",
            spec.token(),
            field_spec_of(f).token()
        )));
    }
    let kind = get(obj, "kind", "presentation")?
        .as_str()
        .ok_or_else(|| Error::Json("kind must be a string".into()))?;
    match kind {
        "group_algebra" => {
            let orders = u64_list(get(obj, "orders", "presentation")?, "orders")?;
            Ok(group_hopf(f, &orders)?.0)
        }
        "truncated_primitive" => {
            let exps = u64_list(get(obj, "exponents", "presentation")?, "exponents")?;
            let exps: Vec<u32> = exps.into_iter().map(|e| e as u32).collect();
            Ok(truncated_primitive_hopf(f, &exps)?.0)
        }
        "sample1_truncated" => {
            let n = get(obj, "n", "presentation")?
                .as_u64()
                .ok_or_else(|| Error::Json("n must be an integer".into()))? as usize;
            let m = get(obj, "M", "presentation")?
                .as_u64()
                .ok_or_else(|| Error::Json("M must be an integer".into()))? as u32;
            Ok(chained_power_hopf(f, n, m)?.0)
        }
        "etale_functions" => {
            let orders = u64_list(get(obj, "orders", "presentation")?, "orders")?;
            Ok(etale_functions_hopf(f, &orders)?.0)
        }
        other => Err(Error::Json(format!("unknown presentation kind {other:?}"))),
    }
}

fn u64_list(v: &Value, what: &str) -> Result<Vec<u64>> {
    v.as_array()
        .ok_or_else(|| Error::Json(format!("{what} must be an array of integers")))?
        .iter()
        .map(|x| {
            x.as_u64()
                .ok_or_else(|| Error::Json(format!("{what} must contain positive integers")))
        })
        .collect()
}

/// A parsed preset string, before field dispatch.
#[derive(Clone, Debug, PartialEq)]
pub struct Preset {
    pub field: FieldSpec,
    pub kind: PresetKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PresetKind {
    /// group:<field>:<o1,o2,...> — group algebra k[⊕ ℤ/o_i].
    Group(Vec<u64>),
    /// trunc:<field>:<e1,e2,...> — k[x_i]/(x_i^{p^{e_i}}), primitive x_i.
    Trunc(Vec<u32>),
    /// etale:<field>:<o1,...> — functions on ⊕ ℤ/o_i.
    Etale(Vec<u64>),
    /// sample1:<p>:<n>:<M> — chained p-power truncation, over F_p.
    Sample1 { n: usize, m: u32 },
}

pub fn parse_preset(s: &str) -> Result<Preset> {
    let bad = |msg: String| Error::InvalidInput(msg);
    let parts: Vec<&str> = s.split(':').collect();
    let numbers = |txt: &str, what: &str| -> Result<Vec<u64>> {
        txt.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| bad(format!("preset {what} list has a non-integer entry {t:?}")))
            })
            .collect()
    };
    match parts.as_slice() {
        ["group", field, orders] => Ok(Preset {
            field: FieldSpec::parse_token(field)?,
            kind: PresetKind::Group(numbers(orders, "order")?),
        }),
        ["trunc", field, exps] => Ok(Preset {
            field: FieldSpec::parse_token(field)?,
            kind: PresetKind::Trunc(
                numbers(exps, "exponent")?.into_iter().map(|e| e as u32).collect(),
            ),
        }),
        ["etale", field, orders] => Ok(Preset {
            field: FieldSpec::parse_token(field)?,
            kind: PresetKind::Etale(numbers(orders, "order")?),
        }),
        ["sample1", p, n, m] => {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| bad(format!("sample1 characteristic {p:?} is not an integer")))?;
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| bad(format!("sample1 generator count {n:?} is not an integer")))?;
            let m: u32 = m
                .trim()
                .parse()
                .map_err(|_| bad(format!("sample1 truncation {m:?} is not an integer")))?;
            Ok(Preset { field: FieldSpec::Prime(p), kind: PresetKind::Sample1 { n, m } })
        }
        _ => Err(bad(format!(
            "cannot parse preset {s:?}; expected group:<field>:<orders>, \
             trunc:<field>:<exponents>, etale:<field>:<orders>, or sample1:<p>:<n>:<M>"
        ))),
    }
}

/// Instantiate a preset over a concrete field implementation. The caller
/// is responsible for matching `preset.field` (see `FieldSpec` dispatch
/// at the CLI boundary).
pub fn build_preset_hopf<K: Field>(f: &K, kind: &PresetKind) -> Result<HopfTable<K>> {
    match kind {
        PresetKind::Group(orders) => Ok(group_hopf(f, orders)?.0),
        PresetKind::Trunc(exps) => Ok(truncated_primitive_hopf(f, exps)?.0),
        PresetKind::Etale(orders) => Ok(etale_functions_hopf(f, orders)?.0),
        PresetKind::Sample1 { n, m } => Ok(chained_power_hopf(f, *n, *m)?.0),
    }
}

/// Cocycle file: {"s": [[...]]} with an optional "hopf" (inline table or
/// identifying string, kept verbatim). The matrix is over H⁺ coordinates.
pub fn cocycle_to_json<K: Field>(
    f: &K,
    s: &SymmetricCocycle<K>,
    hopf: Option<Value>,
) -> Value {
    let mut obj = Map::new();
    if let Some(h) = hopf {
        obj.insert("hopf".into(), h);
    }
    obj.insert("s".into(), matrix_to_value(&s.matrix(f)));
    Value::Object(obj)
}

/// Returns the optional "hopf" field verbatim and the symmetric matrix as
/// a cocycle in pair coordinates.
pub fn cocycle_from_json<K: Field>(
    f: &K,
    v: &Value,
    plus_dim: usize,
) -> Result<(Option<Value>, SymmetricCocycle<K>)> {
    let obj = as_object(v, "cocycle file")?;
    let m = matrix_from_value(f, get(obj, "s", "cocycle file")?, plus_dim, plus_dim, "s")?;
    for i in 0..plus_dim {
        for j in (i + 1)..plus_dim {
            if m.get(i, j) != m.get(j, i) {
                return Err(Error::Json(format!(
                    "cocycle matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    let pairs = crate::cohomology::PairIndexer::new(plus_dim, crate::cohomology::Flavor::Symmetric);
    let mut values = vec![f.zero(); pairs.dim()];
    for i in 0..plus_dim {
        for j in i..plus_dim {
            values[pairs.index(i, j)] = m.get(i, j).clone();
        }
    }
    Ok((obj.get("hopf").cloned(), SymmetricCocycle::new(plus_dim, values)?))
}

/// Serialize a cleft extension: the carrier in the algebra-table schema
/// plus its counit, the coaction, the section, the τ action, and the
/// underlying Hopf table inline (so the file is self-contained).
pub fn extension_to_json<K: Field>(ext: &CleftExtension<K>) -> Value {
    let f = ext.hopf.field();
    let mut obj = match algebra_to_json(&ext.carrier.alg) {
        Value::Object(o) => o,
        _ => unreachable!(),
    };
    obj.insert("counit".into(), vec_to_value(f, &ext.carrier.counit));
    obj.insert("coaction".into(), coproduct_to_value(f, &ext.coaction));
    obj.insert("section".into(), matrix_to_value(&ext.section));
    obj.insert("tau_action".into(), matrix_to_value(&ext.tau_action));
    obj.insert("hopf".into(), hopf_to_json(&ext.hopf));
    Value::Object(obj)
}

/// Re-import a cleft extension; all structural axioms are re-verified.
pub fn extension_from_json<K: Field>(f: &K, v: &Value) -> Result<CleftExtension<K>> {
    let obj = as_object(v, "cleft extension")?;
    let hopf = hopf_from_json(f, get(obj, "hopf", "cleft extension")?)?;
    let alg = algebra_from_json(f, v)?;
    let da = alg.dim();
    let dh = hopf.dim();
    let counit = vec_from_value(f, get(obj, "counit", "cleft extension")?, "counit")?;
    let carrier = AugmentedAlgebra::new_checked(alg, counit)?;
    let coaction =
        coproduct_from_value(f, get(obj, "coaction", "cleft extension")?, da, "coaction")?;
    let section = matrix_from_value(f, get(obj, "section", "cleft extension")?, da, dh, "section")?;
    let tau_action =
        matrix_from_value(f, get(obj, "tau_action", "cleft extension")?, da, da, "tau_action")?;
    let ext = CleftExtension { hopf, carrier, coaction, section, tau_action };
    ext.validate()?;
    Ok(ext)
}

pub fn decomposition_to_json<K: Field>(
    f: &K,
    dec: &TruncatedDecomposition<K>,
    verified: bool,
) -> Value {
    json!({
        "exponents": dec.exponents,
        "generators": Value::Array(
            dec.generators.iter().map(|g| vec_to_value(f, g)).collect()
        ),
        "verified": verified,
    })
}

/// Canonical text form used everywhere output must be byte-deterministic.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON serialization cannot fail");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{Fp, Rationals};

    #[test]
    fn algebra_tables_round_trip_bit_exactly() {
        let f = Fp::new(3).unwrap();
        let (t, _) = crate::algebra::group_algebra_table(&f, &[3]).unwrap();
        let v = algebra_to_json(&t);
        let s1 = to_canonical_string(&v);
        let back = algebra_from_json(&f, &v).unwrap();
        let s2 = to_canonical_string(&algebra_to_json(&back));
        assert_eq!(s1, s2);
    }

    #[test]
    fn hopf_tables_round_trip_over_the_rationals() {
        let (h, _) = crate::hopf::group_hopf(&Rationals, &[2]).unwrap();
        let v = hopf_to_json(&h);
        let s1 = to_canonical_string(&v);
        let back = hopf_from_json(&Rationals, &v).unwrap();
        assert_eq!(s1, to_canonical_string(&hopf_to_json(&back)));
        // rational scalars serialize as strings
        assert!(v["unit"][0].is_string());
    }

    #[test]
    fn prime_field_scalars_serialize_as_integers() {
        let f = Fp::new(2).unwrap();
        let (h, _) = crate::hopf::group_hopf(&f, &[2]).unwrap();
        let v = hopf_to_json(&h);
        assert!(v["unit"][0].is_number());
    }

    #[test]
    fn corrupted_tables_are_rejected_on_import() {
        let f = Fp::new(2).unwrap();
        let (h, _) = crate::hopf::group_hopf(&f, &[4]).unwrap();
        let mut v = hopf_to_json(&h);
        // break the antipode: identity matrix is not an antipode for ℤ/4
        v["antipode"] = matrix_to_value(&Matrix::identity(f.clone(), 4));
        assert!(hopf_from_json(&f, &v).is_err());
    }

    #[test]
    fn presets_parse_and_build() {
        let p = parse_preset("group:F2:4,2").unwrap();
        assert_eq!(p.field, FieldSpec::Prime(2));
        assert_eq!(p.kind, PresetKind::Group(vec![4, 2]));
        let f = Fp::new(2).unwrap();
        assert_eq!(build_preset_hopf(&f, &p.kind).unwrap().dim(), 8);

        let p = parse_preset("sample1:2:2:1").unwrap();
        assert_eq!(p.field, FieldSpec::Prime(2));
        let h = build_preset_hopf(&f, &p.kind).unwrap();
        assert_eq!(h.dim(), 8);

        let p = parse_preset("trunc:Q:1").unwrap();
        assert_eq!(p.field, FieldSpec::Rationals);
        assert!(build_preset_hopf(&Rationals, &p.kind).is_err()); // needs char p

        assert!(parse_preset("weird:F2:1").is_err());
        assert!(parse_preset("group:F2:x").is_err());
    }

    #[test]
    fn presentations_build_the_documented_instances() {
        let f = Fp::new(2).unwrap();
        let h = hopf_from_presentation_json(
            &f,
            &json!({"field": "F2", "kind": "sample1_truncated", "n": 2, "M": 1}),
        )
        .unwrap();
        assert_eq!(h.dim(), 8);
        let h = hopf_from_presentation_json(
            &f,
            &json!({"field": "F2", "kind": "etale_functions", "orders": [3]}),
        )
        .unwrap();
        assert_eq!(h.dim(), 3);
        assert!(hopf_from_presentation_json(
            &f,
            &json!({"field": "F2", "kind": "mystery", "orders": [3]})
        )
        .is_err());
    }

    #[test]
    fn extensions_round_trip_and_revalidate() {
        let f = Fp::new(2).unwrap();
        let ext = crate::cleft::group_cleft_extension(&f, &[2], &[1]).unwrap();
        let v = extension_to_json(&ext);
        let back = extension_from_json(&f, &v).unwrap();
        assert_eq!(to_canonical_string(&extension_to_json(&back)), to_canonical_string(&v));
        let s = crate::cleft::extract_cocycle(&back).unwrap();
        assert_eq!(s.values, vec![1]);
    }

    #[test]
    fn cocycle_files_round_trip_through_pair_coordinates() {
        let f = Fp::new(2).unwrap();
        let ext = crate::cleft::group_cleft_extension(&f, &[4], &[1]).unwrap();
        let s = crate::cleft::extract_cocycle(&ext).unwrap();
        let v = cocycle_to_json(&f, &s, None);
        let (hopf, back) = cocycle_from_json(&f, &v, s.plus_dim).unwrap();
        assert!(hopf.is_none());
        assert_eq!(back, s);
    }
}
