//! Canonical JSON rendering and parsing of integers, rationals and classes.

use k3lat::{DivisorClass, Int, Matrix, Rat};
use num_traits::One;
use serde_json::{Map, Number, Value};

use crate::error::CliError;

pub fn int(x: &Int) -> Value {
    Value::Number(x.to_string().parse::<Number>().expect("integer literal"))
}

pub fn small(x: i64) -> Value {
    Value::from(x)
}

pub fn ints(xs: &[Int]) -> Value {
    Value::Array(xs.iter().map(int).collect())
}

pub fn class(c: &DivisorClass) -> Value {
    ints(&c.coords)
}

/// Lowest-terms `"p/q"`, or `"p"` when the denominator is 1.
pub fn rat(x: &Rat) -> Value {
    if x.denom().is_one() {
        Value::String(x.numer().to_string())
    } else {
        Value::String(format!("{}/{}", x.numer(), x.denom()))
    }
}

pub fn rats(xs: &[Rat]) -> Value {
    Value::Array(xs.iter().map(rat).collect())
}

pub fn matrix_rows(m: &Matrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| ints(r)).collect())
}

pub fn matrix_columns(m: &Matrix) -> Value {
    Value::Array(m.columns().iter().map(|c| ints(c)).collect())
}

pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

pub fn field<'v>(v: &'v Value, key: &str) -> Result<&'v Value, CliError> {
    v.get(key).ok_or_else(|| schema(format!("missing field {key:?}")))
}

pub fn as_int(v: &Value) -> Result<Int, CliError> {
    match v {
        Value::Number(n) => {
            let s = n.to_string();
            s.parse::<Int>().map_err(|_| schema(format!("{s} is not an integer")))
        }
        other => Err(schema(format!("expected integer, found {other}"))),
    }
}

pub fn as_usize(v: &Value) -> Result<usize, CliError> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| schema(format!("expected non-negative integer, found {v}")))
}

pub fn as_bool(v: &Value) -> Result<bool, CliError> {
    v.as_bool().ok_or_else(|| schema(format!("expected boolean, found {v}")))
}

pub fn as_str(v: &Value) -> Result<&str, CliError> {
    v.as_str().ok_or_else(|| schema(format!("expected string, found {v}")))
}

pub fn as_array(v: &Value) -> Result<&Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| schema(format!("expected array, found {v}")))
}

pub fn as_ints(v: &Value) -> Result<Vec<Int>, CliError> {
    as_array(v)?.iter().map(as_int).collect()
}

pub fn as_opt_ints(v: &Value) -> Result<Option<Vec<Int>>, CliError> {
    if v.is_null() {
        Ok(None)
    } else {
        as_ints(v).map(Some)
    }
}

pub fn as_int_lists(v: &Value) -> Result<Vec<Vec<Int>>, CliError> {
    as_array(v)?.iter().map(as_ints).collect()
}

pub fn as_rat(v: &Value) -> Result<Rat, CliError> {
    let s = as_str(v)?;
    let parsed = match s.split_once('/') {
        Some((p, q)) => match (p.parse::<Int>(), q.parse::<Int>()) {
            (Ok(p), Ok(q)) if q > Int::from(0) => Some(Rat::new(p, q)),
            _ => None,
        },
        None => s.parse::<Int>().ok().map(Rat::from_integer),
    };
    let x = parsed.ok_or_else(|| schema(format!("{s:?} is not a rational")))?;
    // only lowest terms is canonical
    if rat(&x) != *v {
        return Err(schema(format!("{s:?} is not in lowest terms")));
    }
    Ok(x)
}

pub fn as_rats(v: &Value) -> Result<Vec<Rat>, CliError> {
    as_array(v)?.iter().map(as_rat).collect()
}

/// Parses `"c0,c1,..."` into integers.
pub fn parse_list(s: &str) -> Result<Vec<Int>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<Int>().map_err(|_| CliError::Usage(format!("{t:?} is not an integer"))))
        .collect()
}

/// Parses `"c;c;..."`, each `c` a comma list, into columns.
pub fn parse_columns(s: &str) -> Result<Vec<Vec<Int>>, CliError> {
    s.split(';').map(parse_list).collect()
}
