//! Exact JSON encodings. Objects are emitted with sorted keys, so
//! `emit(parse(emit(x)))` reproduces `emit(x)` byte for byte.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use crate::constants::{floor_down, GrowthConstants};
use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::family::FamilyOfPoints;
use crate::iwasawa::CycMeasure;
use crate::logseries::{Certainty, LogSeries, TailClass, VhReport};
use crate::padic::PadicScalar;
use crate::solver::{SolveCase, SolveCertificate};
use crate::valuation::Valuation;

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field \"{key}\"")))
}

fn int(v: &Value, key: &str) -> Result<i64> {
    field(v, key)?.as_i64().ok_or_else(|| bad(format!("\"{key}\" must be an integer")))
}

fn uint(v: &Value, key: &str) -> Result<u32> {
    u32::try_from(int(v, key)?).map_err(|_| bad(format!("\"{key}\" must be a non-negative integer")))
}

fn array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    field(v, key)?.as_array().ok_or_else(|| bad(format!("\"{key}\" must be an array")))
}

pub fn emit(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values are always serializable")
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| bad(format!("malformed JSON: {e}")))
}

pub fn scalar_to_json(x: &PadicScalar) -> Value {
    if x.is_exact_zero() {
        json!({"v": null, "u": "0", "N": 0})
    } else if x.is_zero() {
        json!({"v": x.abs_prec(), "u": "0", "N": 0})
    } else {
        json!({"v": x.val(), "u": x.unit().expect("unit").to_str_radix(10), "N": x.rel_prec()})
    }
}

pub fn scalar_from_json(p: u32, v: &Value) -> Result<PadicScalar> {
    let unit: BigUint = field(v, "u")?
        .as_str()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad("\"u\" must be a decimal digit string"))?;
    let n = uint(v, "N")?;
    match field(v, "v")? {
        Value::Null => Ok(PadicScalar::zero(p)),
        _ if n == 0 => {
            if unit != BigUint::default() {
                return Err(bad("a scalar with N = 0 must have u = \"0\""));
            }
            Ok(PadicScalar::approx_zero(p, int(v, "v")?))
        }
        _ => PadicScalar::from_parts(p, int(v, "v")?, &unit, n),
    }
}

fn scalars_from(p: u32, items: &[Value]) -> Result<Vec<PadicScalar>> {
    items.iter().map(|c| scalar_from_json(p, c)).collect()
}

pub fn cyclotomic_to_json(x: &CyclotomicNumber) -> Value {
    json!({
        "p": x.prime(),
        "n": x.level(),
        "coeffs": x.coeffs().iter().map(scalar_to_json).collect::<Vec<_>>(),
    })
}

pub fn cyclotomic_from_json(v: &Value) -> Result<CyclotomicNumber> {
    let p = uint(v, "p")?;
    CyclotomicNumber::from_coeffs(p, uint(v, "n")?, scalars_from(p, array(v, "coeffs")?)?)
}

pub fn series_to_json(f: &LogSeries) -> Value {
    let tail = match f.tail() {
        TailClass::Unknown => json!({"kind": "unknown"}),
        TailClass::Certified(b) => json!({"kind": "certified", "bound": b.to_string()}),
    };
    json!({
        "p": f.prime(),
        "h": f.order(),
        "D": f.degree(),
        "coeffs": f.coeffs().iter().map(scalar_to_json).collect::<Vec<_>>(),
        "tail": tail,
    })
}

pub fn series_from_json(v: &Value) -> Result<LogSeries> {
    let p = uint(v, "p")?;
    let coeffs = scalars_from(p, array(v, "coeffs")?)?;
    if let Some(d) = v.get("D") {
        if d.as_u64() != Some(coeffs.len() as u64 - 1) {
            return Err(bad("\"D\" does not match the number of coefficients"));
        }
    }
    let tail = match v.get("tail") {
        None => TailClass::Certified(Valuation::Infinite),
        Some(t) => match field(t, "kind")?.as_str() {
            Some("unknown") => TailClass::Unknown,
            Some("certified") => TailClass::Certified(
                field(t, "bound")?
                    .as_str()
                    .and_then(Valuation::parse)
                    .ok_or_else(|| bad("tail bound must be a rational string or \"inf\""))?,
            ),
            _ => return Err(bad("tail kind must be \"unknown\" or \"certified\"")),
        },
    };
    LogSeries::new(p, uint(v, "h")?, coeffs, tail)
}

pub fn measure_to_json(mu: &CycMeasure) -> Value {
    let values: Map<String, Value> =
        mu.values().iter().map(|(a, x)| (a.to_string(), scalar_to_json(x))).collect();
    json!({"p": mu.prime(), "n": mu.level(), "values": values})
}

pub fn measure_from_json(v: &Value) -> Result<CycMeasure> {
    let p = uint(v, "p")?;
    let map = field(v, "values")?.as_object().ok_or_else(|| bad("\"values\" must be an object"))?;
    let mut values = BTreeMap::new();
    for (k, x) in map {
        let a: u64 = k.parse().map_err(|_| bad(format!("measure key \"{k}\" is not an integer")))?;
        values.insert(a, scalar_from_json(p, x)?);
    }
    CycMeasure::new(p, uint(v, "n")?, values)
}

pub fn family_to_json(fam: &FamilyOfPoints) -> Value {
    let entries: Vec<Value> = fam
        .entries
        .iter()
        .map(|((j, m, c), x)| json!({"j": j, "m": m, "rep": c, "value": cyclotomic_to_json(x)}))
        .collect();
    let mut out = json!({
        "p": fam.p,
        "window": [fam.window.0, fam.window.1],
        "n": fam.n,
        "entries": entries,
        "delta": fam.delta,
    });
    if let Some(label) = &fam.label {
        out["label"] = json!(label);
    }
    if let Some(b) = fam.branch {
        out["branch"] = json!(b);
    }
    out
}

pub fn family_from_json(v: &Value) -> Result<FamilyOfPoints> {
    let p = uint(v, "p")?;
    let n = uint(v, "n")?;
    let window = array(v, "window")?;
    let (l, l2) = match window.as_slice() {
        [a, b] => (
            a.as_i64().ok_or_else(|| bad("window bounds must be integers"))?,
            b.as_i64().ok_or_else(|| bad("window bounds must be integers"))?,
        ),
        _ => return Err(bad("\"window\" must have two entries")),
    };
    let mut entries = BTreeMap::new();
    for e in array(v, "entries")? {
        let key = (int(e, "j")?, uint(e, "m")?, int(e, "rep")? as u64);
        let x = cyclotomic_from_json(field(e, "value")?)?;
        if x.prime() != p {
            return Err(Error::PrimeMismatch(p, x.prime()));
        }
        if x.level() != n {
            return Err(bad(format!("entry {key:?} is not in the level-{n} ring")));
        }
        entries.insert(key, x);
    }
    let delta = match v.get("delta") {
        None | Some(Value::Null) => None,
        Some(d) => Some(d.as_i64().ok_or_else(|| bad("\"delta\" must be an integer or null"))?),
    };
    Ok(FamilyOfPoints {
        p,
        n,
        window: (l, l2),
        label: v.get("label").and_then(Value::as_str).map(str::to_owned),
        branch: v.get("branch").and_then(Value::as_u64),
        entries,
        delta,
    })
}

fn vh_to_json(r: &VhReport) -> Value {
    let certainty = match r.certainty {
        Certainty::Exact => "exact",
        Certainty::LowerBound => "lower_bound",
        Certainty::HeadOnly => "head_only",
    };
    json!({"value": r.value.to_string(), "certainty": certainty})
}

fn vh_from_json(v: &Value) -> Result<VhReport> {
    let value = field(v, "value")?
        .as_str()
        .and_then(Valuation::parse)
        .ok_or_else(|| bad("valuation must be a rational string or \"inf\""))?;
    let certainty = match field(v, "certainty")?.as_str() {
        Some("exact") => Certainty::Exact,
        Some("lower_bound") => Certainty::LowerBound,
        Some("head_only") => Certainty::HeadOnly,
        _ => return Err(bad("unknown certainty")),
    };
    Ok(VhReport { value, certainty })
}

pub fn certificate_to_json(c: &SolveCertificate) -> Value {
    let case = match c.case {
        SolveCase::A => json!({"kind": "A"}),
        SolveCase::B(j) => json!({"kind": "B", "index": j}),
    };
    json!({
        "case": case,
        "n_max": c.n_max,
        "denom_bound": c.denom_bound,
        "residual_prec": c.residual_prec,
        "measured_vh": vh_to_json(&c.measured_vh),
    })
}

pub fn certificate_from_json(v: &Value) -> Result<SolveCertificate> {
    let case_v = field(v, "case")?;
    let case = match field(case_v, "kind")?.as_str() {
        Some("A") => SolveCase::A,
        Some("B") => SolveCase::B(uint(case_v, "index")?),
        _ => return Err(bad("case kind must be \"A\" or \"B\"")),
    };
    Ok(SolveCertificate {
        case,
        n_max: uint(v, "n_max")?,
        denom_bound: int(v, "denom_bound")?,
        residual_prec: int(v, "residual_prec")?,
        measured_vh: vh_from_json(field(v, "measured_vh")?)?,
    })
}

fn real(x: f64) -> Value {
    json!({"approx": format!("{x:.10}"), "floor": floor_down(x)})
}

pub fn constants_to_json(c: &GrowthConstants) -> Value {
    json!({
        "p": c.p,
        "h": c.h,
        "c1": real(c.c1),
        "c2": real(c.c2),
        "c3": real(c.c3),
        "c4": real(c.c4),
        "c_phi": real(c.c_phi),
        "c_h": {"approx": format!("{:.10}", c.c_h_real), "floor": c.c_h},
    })
}

/// Scalars written as `v:V,u:U[,N:N]` with `v:null` for zero; `N` defaults to `prec`.
pub fn parse_scalar_spec(p: u32, spec: &str, prec: u32) -> Result<PadicScalar> {
    let mut v = None;
    let mut u = None;
    let mut n = prec;
    for part in spec.split(',') {
        let (k, val) = part.split_once(':').ok_or_else(|| bad(format!("bad scalar component \"{part}\"")))?;
        let val = val.trim();
        match k.trim() {
            "v" => v = Some(val.to_owned()),
            "u" => u = Some(val.parse::<num_bigint::BigInt>().map_err(|_| bad(format!("bad unit \"{val}\"")))?),
            "N" => n = val.parse().map_err(|_| bad(format!("bad precision \"{val}\"")))?,
            other => return Err(bad(format!("unknown scalar component \"{other}\""))),
        }
    }
    let v = v.ok_or_else(|| bad("scalar needs a \"v\" component"))?;
    if v == "null" {
        return Ok(PadicScalar::zero(p));
    }
    let v: i64 = v.parse().map_err(|_| bad(format!("bad valuation \"{v}\"")))?;
    let u = u.ok_or_else(|| bad("scalar needs a \"u\" component"))?;
    let x = PadicScalar::from_bigint(p, &u, n + 1).shift(v);
    if x.val() != Some(v) {
        return Err(bad(format!("unit {u} is divisible by {p}")));
    }
    Ok(x.truncate_rel(n))
}
