//! Instance parsing from flags and from the JSON schema, and canonical JSON output.

use std::collections::BTreeMap;

use hkoty_core::algebra::AlgebraSpec;
use hkoty_core::fermionic::SumInstance;
use serde_json::{json, Value};

use crate::CliError;

/// `"1,0,2"` → `[1, 0, 2]`; empty text is the empty list.
pub fn parse_list(text: &str, what: &str) -> Result<Vec<i64>, CliError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| CliError::input(format!("{what}: {x:?} is not an integer"))))
        .collect()
}

pub fn parse_algebra(name: &str) -> Result<AlgebraSpec, CliError> {
    name.parse::<AlgebraSpec>().map_err(|e| CliError::input(format!("--algebra {name}: {e}")))
}

/// Builds an instance from `--lambda` and `--n` values. Each `--n` value is
/// `α:v1,v2,...`; several may be joined with `;`. Omitted nodes are zero.
pub fn from_flags(spec: AlgebraSpec, k: usize, lambda: Option<&str>, n: &[String]) -> Result<SumInstance, CliError> {
    let r = spec.rank;
    if k == 0 {
        return Err(CliError::input("--k must be at least 1"));
    }
    let lambda = match lambda {
        Some(text) => parse_list(text, "--lambda")?,
        None => vec![0; r],
    };
    if lambda.len() != r {
        return Err(CliError::input(format!("--lambda has {} entries, {} has rank {r}", lambda.len(), spec.name())));
    }
    let mut rows: Vec<Option<Vec<i64>>> = vec![None; r];
    for part in n.iter().flat_map(|s| s.split(';')).filter(|s| !s.trim().is_empty()) {
        let (node, values) =
            part.split_once(':').ok_or_else(|| CliError::input(format!("--n {part:?}: expected node:v1,v2,...")))?;
        let a: usize = node
            .trim()
            .parse()
            .ok()
            .filter(|&a| (1..=r).contains(&a))
            .ok_or_else(|| CliError::input(format!("--n {part:?}: node must be in 1..={r}")))?;
        let row = parse_list(values, "--n")?;
        let want = spec.t[a - 1] as usize * k;
        if row.len() != want {
            return Err(CliError::input(format!("--n node {a}: expected {want} entries (t·k), got {}", row.len())));
        }
        if rows[a - 1].replace(row).is_some() {
            return Err(CliError::input(format!("--n node {a} given twice")));
        }
    }
    let n =
        rows.into_iter().enumerate().map(|(a, row)| row.unwrap_or_else(|| vec![0; spec.t[a] as usize * k])).collect();
    SumInstance::new(spec, lambda, n, k).map_err(|e| CliError::input(e.to_string()))
}

/// `{"algebra", "k", "lambda", "n": {"α": row}}` with one-based node keys.
pub fn to_json(inst: &SumInstance) -> Value {
    let n: BTreeMap<String, Vec<i64>> =
        inst.n.iter().enumerate().map(|(a, row)| ((a + 1).to_string(), row.clone())).collect();
    json!({
        "algebra": inst.spec.name(),
        "k": inst.k,
        "lambda": inst.lambda,
        "n": n,
    })
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| CliError::input(format!("/{key}: missing")))
}

fn int_array(v: &Value, pointer: &str) -> Result<Vec<i64>, CliError> {
    let items = v.as_array().ok_or_else(|| CliError::input(format!("{pointer}: expected an array of integers")))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| x.as_i64().ok_or_else(|| CliError::input(format!("{pointer}/{i}: expected an integer"))))
        .collect()
}

/// Parses the JSON instance schema; errors carry a JSON pointer to the bad field.
pub fn from_json(text: &str) -> Result<SumInstance, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::input(format!("malformed JSON: {e}")))?;
    if !v.is_object() {
        return Err(CliError::input("/: expected an object"));
    }
    let name = field(&v, "algebra")?.as_str().ok_or_else(|| CliError::input("/algebra: expected a string"))?;
    let spec: AlgebraSpec = name.parse().map_err(|e| CliError::input(format!("/algebra: {e}")))?;
    let k = field(&v, "k")?
        .as_u64()
        .filter(|&k| k >= 1)
        .ok_or_else(|| CliError::input("/k: expected a positive integer"))? as usize;
    let lambda = int_array(field(&v, "lambda")?, "/lambda")?;
    if lambda.len() != spec.rank {
        return Err(CliError::input(format!("/lambda: expected {} entries, got {}", spec.rank, lambda.len())));
    }
    let n_obj = field(&v, "n")?.as_object().ok_or_else(|| CliError::input("/n: expected an object keyed by node"))?;
    let mut n: Vec<Vec<i64>> = (0..spec.rank).map(|a| vec![0; spec.t[a] as usize * k]).collect();
    for (key, row) in n_obj {
        let a: usize = key
            .parse()
            .ok()
            .filter(|&a| (1..=spec.rank).contains(&a))
            .ok_or_else(|| CliError::input(format!("/n/{key}: node must be in 1..={}", spec.rank)))?;
        let pointer = format!("/n/{key}");
        let values = int_array(row, &pointer)?;
        if values.len() != n[a - 1].len() {
            return Err(CliError::input(format!(
                "{pointer}: expected {} entries (t·k), got {}",
                n[a - 1].len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|&x| x < 0) {
            return Err(CliError::input(format!("{pointer}/{i}: entries must be non-negative")));
        }
        n[a - 1] = values;
    }
    if let Some(i) = lambda.iter().position(|&x| x < 0) {
        return Err(CliError::input(format!("/lambda/{i}: entries must be non-negative")));
    }
    SumInstance::new(spec, lambda, n, k).map_err(|e| CliError::input(e.to_string()))
}

/// Canonical text: pretty-printed, sorted keys, trailing newline.
pub fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Root data embedded in reports.
pub fn spec_json(spec: &AlgebraSpec) -> Value {
    json!({
        "name": spec.name(),
        "cartan": spec.cartan,
        "t": spec.t,
    })
}
