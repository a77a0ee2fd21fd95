//! The shared JSON payload format and result serializers.
//!
//! States and operators travel as one object shape:
//!
//! ```json
//! {"n": 2, "m": 2, "kind": "vector", "data": [[0.7071, 0.0], ...]}
//! ```
//!
//! `data` holds `[re, im]` pairs — `n·m` of them for a vector, `(n·m)²`
//! in row-major order for an operator. Parsing is strict: unknown kinds,
//! wrong lengths, and malformed structure are reported as distinct
//! errors. Result types (norm bounds, certification verdicts, Schmidt
//! decompositions, limit reports) serialize to `serde_json` values with
//! sorted keys, so equal inputs produce byte-identical output.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{BipartiteDims, BipartiteOperator, PureState};
use crate::opnorm::NormBounds;
use crate::schmidt::SchmidtDecomposition;
use crate::werner::WernerLimitRow;
use crate::witness::Verdict;

/// A parsed payload: either raw vector amplitudes (normalization is the
/// caller's decision) or a finished operator.
#[derive(Clone, Debug)]
pub enum Payload {
    Vector {
        dims: BipartiteDims,
        amplitudes: Array1<Complex64>,
    },
    Operator(BipartiteOperator),
}

#[derive(Deserialize)]
struct RawPayload {
    n: usize,
    m: usize,
    kind: String,
    data: Vec<[f64; 2]>,
}

/// Parse the shared payload format from JSON text.
pub fn parse_payload(text: &str) -> Result<Payload> {
    let raw: RawPayload =
        serde_json::from_str(text).map_err(|e| Error::MalformedPayload(e.to_string()))?;
    let dims = BipartiteDims::new(raw.n, raw.m)?;
    let d = dims.total();
    let values: Vec<Complex64> = raw
        .data
        .iter()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    match raw.kind.as_str() {
        "vector" => {
            if values.len() != d {
                return Err(Error::LengthMismatch {
                    expected: d,
                    actual: values.len(),
                });
            }
            Ok(Payload::Vector {
                dims,
                amplitudes: Array1::from_vec(values),
            })
        }
        "operator" => {
            if values.len() != d * d {
                return Err(Error::LengthMismatch {
                    expected: d * d,
                    actual: values.len(),
                });
            }
            let entries = Array2::from_shape_vec((d, d), values)
                .expect("length checked above");
            Ok(BipartiteOperator::new(entries, dims).map(Payload::Operator)?)
        }
        other => Err(Error::MalformedPayload(format!(
            "kind must be \"vector\" or \"operator\", got \"{other}\""
        ))),
    }
}

fn pairs(iter: impl Iterator<Item = Complex64>) -> Value {
    Value::Array(iter.map(|z| json!([z.re, z.im])).collect())
}

/// Serialize a state in the shared payload format.
pub fn state_payload(v: &PureState) -> Value {
    let dims = v.dims();
    json!({
        "n": dims.n(),
        "m": dims.m(),
        "kind": "vector",
        "data": pairs(v.amplitudes().iter().copied()),
    })
}

/// Serialize an operator in the shared payload format (row-major data).
pub fn operator_payload(x: &BipartiteOperator) -> Value {
    let dims = x.dims();
    json!({
        "n": dims.n(),
        "m": dims.m(),
        "kind": "operator",
        "data": pairs(x.entries().iter().copied()),
    })
}

/// Norm-bound result with its winning methods and any witness state.
pub fn norm_bounds_json(nb: &NormBounds) -> Value {
    json!({
        "k": nb.k,
        "lower": nb.lower,
        "upper": nb.upper,
        "methods": nb.methods.iter().map(|m| m.as_str()).collect::<Vec<_>>(),
        "witness": nb.lower_witness.as_ref().map(state_payload),
    })
}

/// Certification verdict with rule, certificates, and diagnostic bounds.
pub fn verdict_json(v: &Verdict) -> Value {
    let bounds: Vec<Value> = v
        .bounds()
        .iter()
        .map(|b| json!({"name": b.name, "lower": b.lower, "upper": b.upper}))
        .collect();
    match v {
        Verdict::KBlockPositive { rule, .. } => json!({
            "status": "k_block_positive",
            "rule": rule.as_str(),
            "bounds": bounds,
        }),
        Verdict::NotKBlockPositive {
            rule,
            witness,
            negative_count,
            ..
        } => json!({
            "status": "not_k_block_positive",
            "rule": rule.as_str(),
            "witness": witness.as_ref().map(|(state, value)| json!({
                "state": state_payload(state),
                "value": value,
            })),
            "negative_count": negative_count.map(|(count, max)| json!({
                "count": count,
                "max_allowed": max,
            })),
            "bounds": bounds,
        }),
        Verdict::Inconclusive { .. } => json!({
            "status": "inconclusive",
            "bounds": bounds,
        }),
    }
}

/// Schmidt decomposition dump: coefficients, rank, and both frames as
/// arrays of vectors (columns of the frame matrices).
pub fn schmidt_json(d: &SchmidtDecomposition) -> Value {
    let dims = d.dims();
    let columns = |frame: ndarray::ArrayView2<Complex64>| -> Value {
        Value::Array(
            (0..frame.ncols())
                .map(|j| pairs(frame.column(j).iter().copied()))
                .collect(),
        )
    };
    json!({
        "n": dims.n(),
        "m": dims.m(),
        "rank": d.rank(),
        "coefficients": d.coefficients(),
        "left_vectors": columns(d.left_frame()),
        "right_vectors": columns(d.right_frame()),
    })
}

/// Limit report as a JSON array; ranks are decimal strings since they
/// outgrow every fixed-width integer.
pub fn werner_report_json(rows: &[WernerLimitRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|row| {
                json!({
                    "r": row.r,
                    "rank": row.rank.to_string(),
                    "bound_average": row.bound_average,
                    "bound_rank": row.bound_rank,
                    "heuristic": row.heuristic,
                    "threshold": row.threshold,
                    "exceeds": row.exceeds,
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, maximally_entangled_state};
    use crate::opnorm::op_norm_bounds;
    use crate::witness::certify;

    #[test]
    fn vector_payload_round_trips() {
        let v = maximally_entangled_state(3).unwrap();
        let text = state_payload(&v).to_string();
        match parse_payload(&text).unwrap() {
            Payload::Vector { dims, amplitudes } => {
                assert_eq!(dims.n(), 3);
                assert_eq!(dims.m(), 3);
                let diff = &amplitudes - &v.amplitudes().to_owned();
                assert!(diff.iter().all(|z| z.norm() < 1e-15));
            }
            Payload::Operator(_) => panic!("expected vector"),
        }
    }

    #[test]
    fn operator_payload_round_trips() {
        let e = crate::linalg::maximally_entangled_projector(2).unwrap();
        let text = operator_payload(&e).to_string();
        match parse_payload(&text).unwrap() {
            Payload::Operator(x) => {
                let diff = &x.entries().to_owned() - &e.entries().to_owned();
                assert!(max_abs(&diff.view()) < 1e-15);
                assert!(x.is_hermitian());
            }
            Payload::Vector { .. } => panic!("expected operator"),
        }
    }

    #[test]
    fn parser_reports_distinct_failures() {
        assert!(matches!(
            parse_payload("not json"),
            Err(Error::MalformedPayload(_))
        ));
        assert!(matches!(
            parse_payload(r#"{"n":2,"m":2,"kind":"matrix","data":[]}"#),
            Err(Error::MalformedPayload(_))
        ));
        assert!(matches!(
            parse_payload(r#"{"n":2,"m":2,"kind":"vector","data":[[1.0,0.0]]}"#),
            Err(Error::LengthMismatch {
                expected: 4,
                actual: 1
            })
        ));
        assert!(matches!(
            parse_payload(r#"{"n":0,"m":2,"kind":"vector","data":[]}"#),
            Err(Error::InvalidDims { .. })
        ));
    }

    #[test]
    fn serialized_results_are_deterministic() {
        let e = crate::linalg::maximally_entangled_projector(2).unwrap();
        let nb = op_norm_bounds(&e, 1).unwrap();
        let a = norm_bounds_json(&nb).to_string();
        let b = norm_bounds_json(&op_norm_bounds(&e, 1).unwrap()).to_string();
        assert_eq!(a, b);
        let parsed: Value = serde_json::from_str(&a).unwrap();
        assert!((parsed["lower"].as_f64().unwrap() - 0.5).abs() < 1e-9);
        assert!((parsed["upper"].as_f64().unwrap() - 0.5).abs() < 1e-9);

        let x = BipartiteOperator::identity(e.dims()).sub(&e.scale(1.8)).unwrap();
        let v1 = verdict_json(&certify(&x, 2).unwrap()).to_string();
        let v2 = verdict_json(&certify(&x, 2).unwrap()).to_string();
        assert_eq!(v1, v2);
        assert!(v1.contains("\"status\":\"not_k_block_positive\""));
    }

    #[test]
    fn schmidt_dump_carries_rank_and_coefficients() {
        let v = maximally_entangled_state(2).unwrap();
        let d = crate::schmidt::schmidt_decompose(&v, None).unwrap();
        let out = schmidt_json(&d);
        assert_eq!(out["rank"], 2);
        assert_eq!(out["coefficients"].as_array().unwrap().len(), 2);
        assert_eq!(out["left_vectors"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn werner_report_serializes_ranks_as_strings() {
        let rows = crate::werner::werner_limit_report(
            4,
            2,
            16,
            &crate::opnorm::HeuristicOptions::default(),
        )
        .unwrap();
        let out = werner_report_json(&rows);
        assert_eq!(out[0]["rank"], "1");
        assert_eq!(out[1]["rank"], "30");
        assert_eq!(out[1]["heuristic"], Value::Null);
    }
}
