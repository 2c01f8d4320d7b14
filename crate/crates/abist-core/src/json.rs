//! Canonical JSON emission and the on-disk scattering-data schema.
//!
//! Canonical form: object keys sorted, every float printed with 17
//! significant digits in scientific notation, complex numbers always as
//! two-element [re, im] arrays.  Re-reading a canonical document and
//! re-emitting it reproduces the bytes exactly.

use crate::error::{Error, Result};
use crate::types::{c64, C64, DiscreteMode, ScatteringData};
use serde_json::{Map, Number, Value};

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_float(v: f64) -> Result<String> {
    if !v.is_finite() {
        return Err(Error::Malformed(format!("non-finite value {v} cannot be serialized")));
    }
    Ok(format!("{v:.16e}"))
}

fn write_value(out: &mut String, v: &Value) -> Result<()> {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                let f = n.as_f64().ok_or_else(|| Error::Malformed("bad number".into()))?;
                out.push_str(&fmt_float(f)?);
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s)?);
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(out, item)?;
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k)?);
                out.push(':');
                write_value(out, &map[*k])?;
            }
            out.push('}');
        }
    }
    Ok(())
}

/// Serialize any JSON value canonically (sorted keys, 17-digit floats).
pub fn canonical(v: &Value) -> Result<String> {
    let mut out = String::new();
    write_value(&mut out, v)?;
    out.push('\n');
    Ok(out)
}

pub fn complex_value(z: C64) -> Value {
    Value::Array(vec![float_value(z.re), float_value(z.im)])
}

pub fn float_value(v: f64) -> Value {
    // Number::from_f64 only fails on non-finite input, which the canonical
    // writer rejects anyway; encode it as null there so the error surfaces.
    Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}

pub fn complex_from_value(v: &Value) -> Result<C64> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Malformed(format!("complex number must be [re, im], got {v}")))?;
    let re = float_from_value(&arr[0])?;
    let im = float_from_value(&arr[1])?;
    Ok(c64(re, im))
}

pub fn float_from_value(v: &Value) -> Result<f64> {
    v.as_f64().ok_or_else(|| Error::Malformed(format!("expected a number, got {v}")))
}

fn complex_vec_value(zs: &[C64]) -> Value {
    Value::Array(zs.iter().map(|&z| complex_value(z)).collect())
}

fn complex_vec_from_value(v: &Value, what: &str) -> Result<Vec<C64>> {
    v.as_array()
        .ok_or_else(|| Error::Malformed(format!("{what} must be an array")))?
        .iter()
        .map(complex_from_value)
        .collect()
}

pub fn scattering_to_value(d: &ScatteringData) -> Value {
    let mut map = Map::new();
    map.insert("alpha".into(), float_value(d.alpha));
    map.insert("beta".into(), float_value(d.beta));
    map.insert("kgrid".into(), Value::Array(d.kgrid.iter().map(|&k| float_value(k)).collect()));
    map.insert("s11".into(), complex_vec_value(&d.s11));
    map.insert("s12".into(), complex_vec_value(&d.s12));
    let modes: Vec<Value> = d
        .modes
        .iter()
        .map(|m| {
            let mut mm = Map::new();
            mm.insert("k".into(), complex_value(m.k));
            mm.insert("c".into(), complex_value(m.c));
            Value::Object(mm)
        })
        .collect();
    map.insert("modes".into(), Value::Array(modes));
    map.insert("unitarity_residual_max".into(), float_value(d.unitarity_residual_max));
    Value::Object(map)
}

fn field<'a>(map: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    map.get(key).ok_or_else(|| Error::Malformed(format!("missing field '{key}'")))
}

pub fn scattering_from_value(v: &Value) -> Result<ScatteringData> {
    let map =
        v.as_object().ok_or_else(|| Error::Malformed("scattering data must be an object".into()))?;
    let alpha = float_from_value(field(map, "alpha")?)?;
    let beta = float_from_value(field(map, "beta")?)?;
    let kgrid: Vec<f64> = field(map, "kgrid")?
        .as_array()
        .ok_or_else(|| Error::Malformed("kgrid must be an array".into()))?
        .iter()
        .map(float_from_value)
        .collect::<Result<_>>()?;
    let s11 = complex_vec_from_value(field(map, "s11")?, "s11")?;
    let s12 = complex_vec_from_value(field(map, "s12")?, "s12")?;
    if s11.len() != kgrid.len() || s12.len() != kgrid.len() {
        return Err(Error::Malformed(format!(
            "kgrid/s11/s12 lengths disagree: {} / {} / {}",
            kgrid.len(),
            s11.len(),
            s12.len()
        )));
    }
    let modes = field(map, "modes")?
        .as_array()
        .ok_or_else(|| Error::Malformed("modes must be an array".into()))?
        .iter()
        .map(|mv| {
            let mm = mv
                .as_object()
                .ok_or_else(|| Error::Malformed("each mode must be an object".into()))?;
            Ok(DiscreteMode {
                k: complex_from_value(field(mm, "k")?)?,
                c: complex_from_value(field(mm, "c")?)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let unitarity_residual_max = float_from_value(field(map, "unitarity_residual_max")?)?;
    Ok(ScatteringData { alpha, beta, kgrid, s11, s12, modes, unitarity_residual_max })
}

pub fn write_scattering(path: &std::path::Path, d: &ScatteringData) -> Result<()> {
    std::fs::write(path, canonical(&scattering_to_value(d))?)?;
    Ok(())
}

pub fn read_scattering(path: &std::path::Path) -> Result<ScatteringData> {
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text)?;
    scattering_from_value(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample_data() -> ScatteringData {
        ScatteringData {
            alpha: -2.0,
            beta: 1.0,
            kgrid: vec![-1.0, 0.0, 1.0],
            s11: vec![c64(0.9, 0.1), c64(1.0, 0.0), c64(0.9, -0.1)],
            s12: vec![c64(0.1, 0.0), c64(0.0, 0.0), c64(-0.1, 0.25)],
            modes: vec![DiscreteMode { k: c64(0.5, 0.5), c: c64(0.0, -1.0) }],
            unitarity_residual_max: 1.0e-12,
        }
    }

    #[test]
    fn keys_come_out_sorted_and_floats_are_pinned() {
        let text = canonical(&json!({"zeta": 1.5, "alpha": 2, "mid": [true, null, "x\"y"]}))
            .unwrap();
        assert_eq!(text, "{\"alpha\":2,\"mid\":[true,null,\"x\\\"y\"],\"zeta\":1.5000000000000000e0}\n");
    }

    #[test]
    fn float_format_has_seventeen_significant_digits() {
        assert_eq!(fmt_float(1.0).unwrap(), "1.0000000000000000e0");
        assert_eq!(fmt_float(-0.0625).unwrap(), "-6.2500000000000000e-2");
        assert_eq!(fmt_float(std::f64::consts::PI).unwrap(), "3.1415926535897931e0");
        assert!(fmt_float(f64::NAN).is_err());
        assert!(fmt_float(f64::INFINITY).is_err());
    }

    #[test]
    fn seventeen_digits_round_trip_every_float() {
        let vals = [1.0 / 3.0, 0.1 + 0.2, f64::MIN_POSITIVE, 1e300, -2.2250738585072014e-308];
        for &v in &vals {
            let s = fmt_float(v).unwrap();
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, v, "{s}");
        }
    }

    #[test]
    fn scattering_round_trip_is_byte_identical() {
        let d = sample_data();
        let text1 = canonical(&scattering_to_value(&d)).unwrap();
        let v: Value = serde_json::from_str(&text1).unwrap();
        let d2 = scattering_from_value(&v).unwrap();
        let text2 = canonical(&scattering_to_value(&d2)).unwrap();
        assert_eq!(text1, text2);
        assert_eq!(d2.modes[0].k, c64(0.5, 0.5));
        assert_eq!(d2.s12[2], c64(-0.1, 0.25));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scatter.json");
        let d = sample_data();
        write_scattering(&path, &d).unwrap();
        let d2 = read_scattering(&path).unwrap();
        assert_eq!(d2.kgrid, d.kgrid);
        assert_eq!(d2.s11, d.s11);
        assert_eq!(d2.alpha, -2.0);
    }

    #[test]
    fn complex_values_must_be_pairs() {
        assert!(complex_from_value(&json!([1.0, 2.0])).is_ok());
        assert!(complex_from_value(&json!([1.0])).is_err());
        assert!(complex_from_value(&json!("1+2i")).is_err());
        assert!(complex_from_value(&json!({"re": 1.0, "im": 2.0})).is_err());
    }

    #[test]
    fn malformed_documents_are_rejected() {
        let mut v = scattering_to_value(&sample_data());
        v.as_object_mut().unwrap().remove("s11");
        assert!(scattering_from_value(&v).is_err());

        let mut v = scattering_to_value(&sample_data());
        v.as_object_mut().unwrap().insert("s11".into(), json!([[1.0, 0.0]]));
        assert!(scattering_from_value(&v).is_err(), "length mismatch must fail");
    }
}
