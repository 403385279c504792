//! Scenario documents: JSON with a `schema_version`, a `kind` tag and a
//! kind-specific payload. Numbers are exact: JSON integers or `"p/q"`
//! strings. Decimal floats are rejected.

use polarize_core::exactalg::{parse_rat, QMatrix};
use polarize_core::Rat;
use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

pub const SCENARIO_SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchemaError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("missing or unsupported schema_version (expected {SCENARIO_SCHEMA_VERSION})")]
    Version,
    #[error("{0}")]
    Invalid(String),
    #[error("dimension {dim} exceeds --max-dim {max}")]
    TooLarge { dim: usize, max: usize },
}

/// An exact rational read from a JSON integer or a `"p/q"` string.
#[derive(Debug, Clone, PartialEq)]
pub struct Exact(pub Rat);

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match Value::deserialize(d)? {
            Value::Number(n) if n.is_i64() || n.is_u64() => {
                Ok(Exact(parse_rat(&n.to_string()).expect("integer literal")))
            }
            Value::Number(n) => Err(D::Error::custom(format!("decimal number {n} is not allowed; use \"p/q\""))),
            Value::String(s) => {
                parse_rat(&s).map(Exact).ok_or_else(|| D::Error::custom(format!("not a rational: {s:?}")))
            }
            other => Err(D::Error::custom(format!("expected an integer or \"p/q\" string, got {other}"))),
        }
    }
}

pub type Matrix = Vec<Vec<Exact>>;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConeSpec {
    Polyhedral {
        generators: Vec<Vec<Exact>>,
    },
    /// Positive semidefinite `n x n` symmetric matrices, flattened as
    /// upper-triangular coordinates.
    Psd {
        n: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientSpec {
    pub e0_sq: i64,
    pub pull_coeff_positive: bool,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RamificationSpec {
    pub q: i64,
    pub k: Vec<Exact>,
    pub d: Vec<Exact>,
    pub s: u64,
    pub dim_x: u64,
    pub rho: u64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductSpec {
    pub dim_y: u32,
    pub deg_g: i64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Payload {
    ConeDynamics {
        map: Matrix,
        cone: ConeSpec,
        #[serde(default)]
        q_hint: Option<Exact>,
    },
    NsExample {
        #[serde(default)]
        endomorphism: Option<Matrix>,
        #[serde(default)]
        quotient_image: Option<QuotientSpec>,
        #[serde(default)]
        ramification: Option<RamificationSpec>,
    },
    AgeCheck {
        order: u64,
        abelian_weights: Vec<u64>,
        #[serde(default)]
        projective_m: Option<u64>,
        #[serde(default)]
        scale_r: Option<u64>,
    },
    DegreeCheck {
        dim_x: u32,
        #[serde(default)]
        deg_f: Option<i64>,
        #[serde(default)]
        q: Option<i64>,
        #[serde(default)]
        product: Option<ProductSpec>,
        #[serde(default)]
        subvariety_dims: Vec<u32>,
        #[serde(default)]
        integer_matrix: Option<Matrix>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub payload: Payload,
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::ConeDynamics { .. } => "cone_dynamics",
            Payload::NsExample { .. } => "ns_example",
            Payload::AgeCheck { .. } => "age_check",
            Payload::DegreeCheck { .. } => "degree_check",
        }
    }
}

/// Parses and validates a scenario. `fallback_name` is used when the
/// document has no `name`.
pub fn parse_scenario(text: &str, fallback_name: &str, max_dim: usize) -> Result<Scenario, SchemaError> {
    let mut doc: Value = serde_json::from_str(text).map_err(|e| SchemaError::Json(e.to_string()))?;
    let obj = doc.as_object_mut().ok_or_else(|| SchemaError::Invalid("scenario must be a JSON object".into()))?;
    match obj.remove("schema_version") {
        Some(Value::Number(n)) if n.as_u64() == Some(SCENARIO_SCHEMA_VERSION) => {}
        _ => return Err(SchemaError::Version),
    }
    let name = match obj.remove("name") {
        None => fallback_name.to_string(),
        Some(Value::String(s)) => s,
        Some(_) => return Err(SchemaError::Invalid("name must be a string".into())),
    };
    let payload: Payload = serde_json::from_value(doc).map_err(|e| SchemaError::Invalid(e.to_string()))?;
    validate(&payload, max_dim)?;
    Ok(Scenario { name, payload })
}

pub fn to_matrix(m: &Matrix) -> Result<QMatrix, SchemaError> {
    let rows: Vec<Vec<Rat>> = m.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect();
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
        return Err(SchemaError::Invalid("matrix must be square and nonempty".into()));
    }
    QMatrix::from_rows(rows).map_err(|e| SchemaError::Invalid(e.to_string()))
}

pub fn to_vec(v: &[Exact]) -> Vec<Rat> {
    v.iter().map(|x| x.0.clone()).collect()
}

fn check_dim(dim: usize, max: usize) -> Result<(), SchemaError> {
    if dim > max {
        Err(SchemaError::TooLarge { dim, max })
    } else {
        Ok(())
    }
}

fn validate(p: &Payload, max_dim: usize) -> Result<(), SchemaError> {
    let invalid = |s: &str| Err(SchemaError::Invalid(s.into()));
    match p {
        Payload::ConeDynamics { map, cone, .. } => {
            let n = to_matrix(map)?.rows();
            check_dim(n, max_dim)?;
            match cone {
                ConeSpec::Polyhedral { generators } => {
                    if generators.is_empty() {
                        return invalid("cone needs at least one generator");
                    }
                    if generators.iter().any(|g| g.len() != n) {
                        return invalid("generator length differs from the map size");
                    }
                }
                ConeSpec::Psd { n: k } => {
                    if *k == 0 || k * (k + 1) / 2 != n {
                        return invalid("psd cone of size n needs a map of size n(n+1)/2");
                    }
                }
            }
        }
        Payload::NsExample { endomorphism, quotient_image, ramification } => {
            if endomorphism.is_none() && quotient_image.is_none() && ramification.is_none() {
                return invalid("ns_example needs endomorphism, quotient_image or ramification");
            }
            if let Some(e) = endomorphism {
                if to_matrix(e)?.rows() != 2 {
                    return invalid("endomorphism must be a 2x2 integer matrix");
                }
            }
            if let Some(r) = ramification {
                check_dim(r.rho as usize, max_dim)?;
            }
        }
        Payload::AgeCheck { order, abelian_weights, projective_m, scale_r } => {
            if *order == 0 {
                return invalid("order must be positive");
            }
            if let Some(pm) = projective_m {
                if pm != order {
                    return invalid("projective_m must equal order");
                }
                if scale_r.is_none() {
                    return invalid("scale_r is required with projective_m");
                }
                check_dim((pm + abelian_weights.len() as u64).saturating_sub(1) as usize, max_dim)?;
            } else {
                check_dim(abelian_weights.len(), max_dim)?;
            }
        }
        Payload::DegreeCheck { dim_x, deg_f, q, integer_matrix, .. } => {
            if deg_f.is_none() && q.is_none() && integer_matrix.is_none() {
                return invalid("degree_check needs deg_f, q or integer_matrix");
            }
            check_dim(*dim_x as usize, max_dim.max(12))?;
            if let Some(m) = integer_matrix {
                check_dim(to_matrix(m)?.rows(), max_dim)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_floats_and_bad_versions() {
        let doc = r#"{"schema_version": 1, "kind": "cone_dynamics", "map": [[1.5]],
                      "cone": {"type": "polyhedral", "generators": [[1]]}}"#;
        assert!(matches!(parse_scenario(doc, "x", 8), Err(SchemaError::Invalid(_))));
        let doc = r#"{"schema_version": 2, "kind": "age_check", "order": 2, "abelian_weights": [1]}"#;
        assert_eq!(parse_scenario(doc, "x", 8), Err(SchemaError::Version));
    }

    #[test]
    fn reads_rational_strings() {
        let doc = r#"{"schema_version": 1, "name": "half", "kind": "cone_dynamics", "map": [["3/2"]],
                      "cone": {"type": "polyhedral", "generators": [[1]]}}"#;
        let s = parse_scenario(doc, "x", 8).unwrap();
        assert_eq!(s.name, "half");
        let Payload::ConeDynamics { map, .. } = s.payload else { panic!() };
        assert_eq!(map[0][0].0, Rat::new(3.into(), 2.into()));
    }

    #[test]
    fn unknown_fields_and_caps() {
        let doc = r#"{"schema_version": 1, "kind": "age_check", "order": 4, "abelian_weights": [1], "extra": 0}"#;
        assert!(matches!(parse_scenario(doc, "x", 8), Err(SchemaError::Invalid(_))));
        let doc = r#"{"schema_version": 1, "kind": "age_check", "order": 4, "abelian_weights": [1, 1, 1],
                      "projective_m": 4, "scale_r": 2}"#;
        assert!(matches!(parse_scenario(doc, "x", 5), Err(SchemaError::TooLarge { dim: 6, max: 5 })));
        assert!(parse_scenario(doc, "x", 8).is_ok());
    }
}
