//! Number formatting and CSV / JSON rendering for command output.

use graphchain::info::Trace;
use graphchain::ProbabilityVector;
use serde_json::{json, Value};

/// Formats with 12 significant digits, `%g` style: plain decimal when the
/// exponent is in `[-5, 12)`, scientific otherwise, trailing zeros trimmed.
pub fn sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// JSON number rounded to 12 significant digits; `+∞` becomes `"Infinity"`.
pub fn json_num(x: f64) -> Value {
    if x == f64::INFINITY {
        return Value::String("Infinity".into());
    }
    let rounded: f64 = sig12(x).parse().unwrap_or(x);
    serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

pub fn json_matrix(rows: &[Vec<f64>]) -> Value {
    json!({
        "m": rows.len(),
        "rows": rows.iter().map(|r| r.iter().map(|&v| json_num(v)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn vector_csv(p: &ProbabilityVector) -> String {
    let mut out = String::from("index,p\n");
    for (i, v) in p.as_slice().iter().enumerate() {
        out.push_str(&format!("{},{}\n", i, sig12(*v)));
    }
    out
}

pub fn vector_json(p: &ProbabilityVector) -> Value {
    Value::Array(
        p.as_slice()
            .iter()
            .enumerate()
            .map(|(i, &v)| json!({"index": i, "p": json_num(v)}))
            .collect(),
    )
}

pub fn distributions_csv(rows: &[(f64, ProbabilityVector)]) -> String {
    let m = rows.first().map_or(0, |r| r.1.len());
    let mut out = String::from("step");
    for i in 0..m {
        out.push_str(&format!(",state{i}"));
    }
    out.push('\n');
    for (idx, d) in rows {
        out.push_str(&sig12(*idx));
        for v in d.as_slice() {
            out.push(',');
            out.push_str(&sig12(*v));
        }
        out.push('\n');
    }
    out
}

pub fn distributions_json(rows: &[(f64, ProbabilityVector)]) -> Value {
    Value::Array(
        rows.iter()
            .map(|(idx, d)| {
                json!({
                    "step": json_num(*idx),
                    "state": d.as_slice().iter().map(|&v| json_num(v)).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

pub fn trace_csv(t: &Trace) -> String {
    let mut out = String::from("step,value\n");
    for &(i, v) in t.points() {
        out.push_str(&format!("{},{}\n", sig12(i), sig12(v)));
    }
    out
}

pub fn trace_json(t: &Trace) -> Value {
    Value::Array(
        t.points()
            .iter()
            .map(|&(i, v)| json!({"step": json_num(i), "value": json_num(v)}))
            .collect(),
    )
}
