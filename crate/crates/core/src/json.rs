//! Canonical JSON for every file format the tool reads or writes.
//!
//! Rationals serialize as `"p/q"` strings (`"p"` when the denominator is 1);
//! integer vectors serialize as plain JSON numbers. Everything is assembled
//! through `serde_json::Value`, whose object map keeps keys sorted, so equal
//! values always print identical bytes.

use std::cmp::Ordering;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::cone::Cone;
use crate::divisor::{DivClass, TDivisor};
use crate::error::{Error, Result};
use crate::fan::{Fan, SubdivisionReport, ValidationReport};
use crate::flip::{FlipCertificate, PipelineResult};
use crate::gkz::{SecondaryFan, WeightMatrix, WeightSource};
use crate::linalg::{IMatrix, Int, Rat};

fn schema_err(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

pub fn int_to_value(x: &Int) -> Result<Value> {
    let v: i64 = x
        .try_into()
        .map_err(|_| schema_err(format!("integer {x} does not fit into a JSON number")))?;
    Ok(json!(v))
}

pub fn int_vec_to_value(v: &[Int]) -> Result<Value> {
    Ok(Value::Array(
        v.iter().map(int_to_value).collect::<Result<_>>()?,
    ))
}

pub fn int_vec_from_value(v: &Value) -> Result<Vec<Int>> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema_err("expected an array of integers"))?;
    arr.iter()
        .map(|x| {
            x.as_i64()
                .map(Int::from)
                .ok_or_else(|| schema_err(format!("expected an integer, got {x}")))
        })
        .collect()
}

pub fn rat_to_string(r: &Rat) -> String {
    r.to_string()
}

pub fn rat_from_string(s: &str) -> Result<Rat> {
    Rat::from_str(s).map_err(|e| schema_err(format!("bad rational {s:?}: {e}")))
}

pub fn rat_vec_to_value(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|r| json!(rat_to_string(r))).collect())
}

pub fn rat_vec_from_value(v: &Value) -> Result<Vec<Rat>> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema_err("expected an array of rational strings"))?;
    arr.iter()
        .map(|x| {
            x.as_str()
                .ok_or_else(|| schema_err(format!("expected a rational string, got {x}")))
                .and_then(rat_from_string)
        })
        .collect()
}

fn int_rows_to_value(rows: &[Vec<Int>]) -> Result<Value> {
    Ok(Value::Array(
        rows.iter()
            .map(|r| int_vec_to_value(r))
            .collect::<Result<_>>()?,
    ))
}

fn int_rows_from_value(v: &Value) -> Result<Vec<Vec<Int>>> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema_err("expected an array of integer vectors"))?;
    arr.iter().map(int_vec_from_value).collect()
}

fn index_sets_to_value(sets: &[Vec<usize>]) -> Value {
    Value::Array(
        sets.iter()
            .map(|s| Value::Array(s.iter().map(|&i| json!(i)).collect()))
            .collect(),
    )
}

fn index_sets_from_value(v: &Value) -> Result<Vec<Vec<usize>>> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema_err("expected an array of index sets"))?;
    arr.iter()
        .map(|s| {
            let inner = s
                .as_array()
                .ok_or_else(|| schema_err("expected an index set"))?;
            inner
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|u| u as usize)
                        .ok_or_else(|| schema_err(format!("expected a 0-based index, got {x}")))
                })
                .collect()
        })
        .collect()
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| schema_err(format!("missing field {key:?}")))
}

fn as_object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| schema_err("expected a JSON object"))
}

/// Cone JSON: `{ "dim": n, "generators": [[..]], "halfspaces": [[..]] }`.
/// Both lists are optional on input (at least one required) and both are
/// present and canonical on output; the zero cone carries `"trivial": true`
/// instead of spelling out the ambient basis constraints.
pub fn cone_to_value(c: &Cone) -> Result<Value> {
    if c.is_trivial() {
        return Ok(json!({
            "dim": c.ambient_dim(),
            "trivial": true,
            "generators": [],
            "halfspaces": [],
        }));
    }
    Ok(json!({
        "dim": c.ambient_dim(),
        "generators": int_rows_to_value(&c.generators())?,
        "halfspaces": int_rows_to_value(&c.halfspaces())?,
    }))
}

pub fn cone_from_value(v: &Value) -> Result<Cone> {
    let obj = as_object(v)?;
    let dim = field(obj, "dim")?
        .as_u64()
        .ok_or_else(|| schema_err("cone dim must be a nonnegative integer"))?
        as usize;
    if obj.get("trivial").and_then(Value::as_bool) == Some(true) {
        return Ok(Cone::zero(dim));
    }
    if let Some(g) = obj.get("generators") {
        let gens = int_rows_from_value(g)?;
        if !gens.is_empty() || obj.get("halfspaces").is_none() {
            return Cone::from_generators(dim, &gens)
                .map_err(|e| schema_err(format!("bad cone generators: {e}")));
        }
    }
    if let Some(h) = obj.get("halfspaces") {
        let normals = int_rows_from_value(h)?;
        return Cone::from_halfspaces(dim, &normals)
            .map_err(|e| schema_err(format!("bad cone halfspaces: {e}")));
    }
    Err(schema_err(
        "cone needs \"generators\" or \"halfspaces\" (or \"trivial\": true)",
    ))
}

/// Fan JSON: `{ "dim": n, "rays": [[..], ..], "max_cones": [[0-based], ..] }`.
pub fn fan_to_value(f: &Fan) -> Result<Value> {
    let rays: Vec<Vec<Int>> = (0..f.ray_count()).map(|j| f.ray(j)).collect();
    Ok(json!({
        "dim": f.dim(),
        "rays": int_rows_to_value(&rays)?,
        "max_cones": index_sets_to_value(f.max_cones()),
    }))
}

pub fn fan_from_value(v: &Value) -> Result<Fan> {
    let obj = as_object(v)?;
    let dim = field(obj, "dim")?
        .as_u64()
        .ok_or_else(|| schema_err("fan dim must be a nonnegative integer"))? as usize;
    let rays = int_rows_from_value(field(obj, "rays")?)?;
    for (i, r) in rays.iter().enumerate() {
        if r.len() != dim {
            return Err(schema_err(format!(
                "ray {} has length {}, expected {dim}",
                i + 1,
                r.len()
            )));
        }
    }
    let cols = rays.len();
    let mut matrix = IMatrix::zero(dim, cols);
    for (j, r) in rays.iter().enumerate() {
        for (i, x) in r.iter().enumerate() {
            matrix.set(i, j, x.clone());
        }
    }
    let max_cones = index_sets_from_value(field(obj, "max_cones")?)?;
    Fan::new(matrix, max_cones).map_err(|e| schema_err(format!("bad fan: {e}")))
}

/// WeightMatrix JSON: `{ "Q": [[..]], "source": "computed" | "supplied" }`.
pub fn weights_to_value(q: &WeightMatrix) -> Result<Value> {
    Ok(json!({
        "Q": int_rows_to_value(&q.matrix().row_vecs())?,
        "source": match q.source() {
            WeightSource::Computed => "computed",
            WeightSource::Supplied => "supplied",
        },
    }))
}

/// Reads the raw `Q` rows of a weights file; validation against a fan
/// matrix happens in [`WeightMatrix::from_supplied`].
pub fn weight_rows_from_value(v: &Value) -> Result<IMatrix> {
    let obj = as_object(v)?;
    let rows = int_rows_from_value(field(obj, "Q")?)?;
    let cols = rows.first().map_or(0, |r| r.len());
    for r in &rows {
        if r.len() != cols {
            return Err(schema_err("ragged weight matrix"));
        }
    }
    Ok(IMatrix::from_rows(cols, rows))
}

/// Divisor JSON: `{ "coeffs": ["4", "2", ..] }` with rationals as strings.
pub fn divisor_to_value(d: &TDivisor) -> Value {
    json!({ "coeffs": rat_vec_to_value(d.coeffs()) })
}

pub fn divisor_from_value(v: &Value) -> Result<TDivisor> {
    let obj = as_object(v)?;
    Ok(TDivisor::new(rat_vec_from_value(field(obj, "coeffs")?)?))
}

pub fn class_to_value(c: &DivClass) -> Value {
    rat_vec_to_value(c.coords())
}

pub fn validation_to_value(report: &ValidationReport) -> Value {
    json!({
        "valid": report.is_valid(),
        "violations": Value::Array(
            report
                .violations
                .iter()
                .map(|v| {
                    json!({
                        "code": v.code,
                        "message": v.message,
                        "cones": v.cones,
                    })
                })
                .collect(),
        ),
    })
}

pub fn secondary_fan_to_value(sf: &SecondaryFan) -> Result<Value> {
    let chambers: Vec<Value> = sf
        .chambers
        .iter()
        .map(|c| {
            Ok(json!({
                "cone": cone_to_value(&c.cone)?,
                "compatible_bases": index_sets_to_value(&c.compatible_bases),
            }))
        })
        .collect::<Result<_>>()?;
    let walls: Vec<Value> = sf
        .walls
        .iter()
        .map(|w| {
            Ok(json!({
                "cone": cone_to_value(&w.cone)?,
                "chambers": [w.chambers.0, w.chambers.1],
            }))
        })
        .collect::<Result<_>>()?;
    Ok(json!({
        "weights": weights_to_value(&sf.weights)?,
        "mov": cone_to_value(&sf.mov)?,
        "chambers": chambers,
        "walls": walls,
    }))
}

pub fn certificate_to_value(cert: &FlipCertificate) -> Result<Value> {
    let mut checks = Map::new();
    for (name, ok) in &cert.checks {
        checks.insert(name.clone(), json!(ok));
    }
    Ok(json!({
        "source": fan_to_value(&cert.source)?,
        "target": fan_to_value(&cert.target)?,
        "divisor": rat_vec_to_value(cert.divisor.coeffs()),
        "class": class_to_value(&cert.divisor_class),
        "source_nef": cone_to_value(&cert.source_nef)?,
        "target_chamber": cone_to_value(&cert.target_chamber)?,
        "checks": Value::Object(checks),
    }))
}

pub fn subdivision_report_to_value(r: &SubdivisionReport) -> Result<Value> {
    Ok(json!({
        "parent": fan_to_value(&r.parent)?,
        "child": fan_to_value(&r.child)?,
        "added_walls": index_sets_to_value(&r.added_walls),
    }))
}

pub fn pipeline_to_value(p: &PipelineResult) -> Result<Value> {
    Ok(json!({
        "input": fan_to_value(&p.input)?,
        "resolution": match &p.resolution {
            Some(r) => subdivision_report_to_value(r)?,
            None => Value::Null,
        },
        "flip": match &p.flip {
            Some(c) => certificate_to_value(c)?,
            None => Value::Null,
        },
        "final": fan_to_value(&p.final_fan)?,
    }))
}

/// Canonical text form: pretty-printed with sorted keys and a trailing
/// newline. Identical values produce identical bytes.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serde_json::Value always serializes");
    s.push('\n');
    s
}

/// Deterministic order on cones: their canonical serialized forms compared
/// field by field (dimension, then generators, then halfspaces).
pub fn cone_canonical_cmp(a: &Cone, b: &Cone) -> Ordering {
    a.ambient_dim()
        .cmp(&b.ambient_dim())
        .then_with(|| a.generators().cmp(&b.generators()))
        .then_with(|| a.halfspaces().cmp(&b.halfspaces()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings() {
        let half = Rat::new(Int::from(1), Int::from(2));
        assert_eq!(rat_to_string(&half), "1/2");
        assert_eq!(rat_to_string(&Rat::from(Int::from(4))), "4");
        assert_eq!(rat_from_string("1/2").unwrap(), half);
        assert_eq!(rat_from_string("-3").unwrap(), Rat::from(Int::from(-3)));
        assert!(rat_from_string("x").is_err());
    }

    #[test]
    fn cone_round_trip_is_canonical() {
        let c = Cone::from_generators(
            2,
            &[
                vec![Int::from(2), Int::from(0)],
                vec![Int::from(1), Int::from(1)],
                vec![Int::from(0), Int::from(3)],
            ],
        )
        .unwrap();
        let v = cone_to_value(&c).unwrap();
        let back = cone_from_value(&v).unwrap();
        assert_eq!(back, c);
        assert_eq!(
            to_canonical_string(&v),
            to_canonical_string(&cone_to_value(&back).unwrap())
        );
    }

    #[test]
    fn zero_cone_uses_the_trivial_flag() {
        let c = Cone::zero(3);
        let v = cone_to_value(&c).unwrap();
        assert_eq!(v["trivial"], json!(true));
        assert_eq!(cone_from_value(&v).unwrap(), c);
    }

    #[test]
    fn fan_round_trip() {
        let f = crate::fan::tests::prism_fan();
        let v = fan_to_value(&f).unwrap();
        let back = fan_from_value(&v).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn fan_schema_errors() {
        assert!(fan_from_value(&json!({"dim": 2, "rays": [[1, 0, 0]], "max_cones": []})).is_err());
        assert!(fan_from_value(&json!({"rays": [], "max_cones": []})).is_err());
        assert!(fan_from_value(&json!({"dim": 2, "rays": [[1, 0]], "max_cones": [[7]]})).is_err());
    }

    #[test]
    fn divisor_round_trip() {
        let d = TDivisor::new(vec![
            Rat::from(Int::from(4)),
            Rat::new(Int::from(1), Int::from(2)),
        ]);
        let v = divisor_to_value(&d);
        assert_eq!(v["coeffs"], json!(["4", "1/2"]));
        assert_eq!(divisor_from_value(&v).unwrap(), d);
    }

    #[test]
    fn equal_cones_serialize_to_identical_bytes() {
        // Same cone through different constructions: scaled and reordered
        // generators, and the halfspace route.
        let a = Cone::from_generators(
            3,
            &[
                vec![Int::from(1), Int::from(0), Int::from(1)],
                vec![Int::from(1), Int::from(1), Int::from(2)],
                vec![Int::from(1), Int::from(1), Int::from(1)],
            ],
        )
        .unwrap();
        let b = Cone::from_generators(
            3,
            &[
                vec![Int::from(3), Int::from(3), Int::from(3)],
                vec![Int::from(2), Int::from(0), Int::from(2)],
                vec![Int::from(2), Int::from(2), Int::from(2)],
                vec![Int::from(5), Int::from(5), Int::from(10)],
            ],
        )
        .unwrap();
        let c = Cone::from_halfspaces(3, &a.halfspaces()).unwrap();
        let bytes_a = to_canonical_string(&cone_to_value(&a).unwrap());
        let bytes_b = to_canonical_string(&cone_to_value(&b).unwrap());
        let bytes_c = to_canonical_string(&cone_to_value(&c).unwrap());
        assert_eq!(bytes_a, bytes_b);
        assert_eq!(bytes_a, bytes_c);
    }
}
