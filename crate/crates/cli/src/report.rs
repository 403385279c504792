//! Reports: an ordered tree of tagged values. Every number is either
//! `{"exact": "p/q"}` or `{"approx": 1.25}`; verdicts are plain strings.

use std::fmt::{self, Write as _};

use polarize_core::exactalg::{format_rat, rat_to_f64};
use polarize_core::Rat;
use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const REPORT_SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactTag {
    pub exact: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproxTag {
    pub approx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Val {
    Exact(ExactTag),
    Approx(ApproxTag),
    Bool(bool),
    Text(String),
    List(Vec<Val>),
    Map(Fields),
}

impl Val {
    pub fn exact(r: &Rat) -> Val {
        Val::Exact(ExactTag { exact: format_rat(r) })
    }

    pub fn int(n: impl fmt::Display) -> Val {
        Val::Exact(ExactTag { exact: n.to_string() })
    }

    pub fn approx(x: f64) -> Val {
        Val::Approx(ApproxTag { approx: x })
    }

    pub fn approx_of(r: &Rat) -> Val {
        Val::approx(rat_to_f64(r))
    }

    pub fn text(s: impl Into<String>) -> Val {
        Val::Text(s.into())
    }

    pub fn vector(v: &[Rat]) -> Val {
        Val::List(v.iter().map(Val::exact).collect())
    }

    pub fn matrix(rows: &[Vec<Rat>]) -> Val {
        Val::List(rows.iter().map(|r| Val::vector(r)).collect())
    }
}

/// Insertion-ordered string map, serialized as a JSON object.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Fields(pub Vec<(String, Val)>);

impl Fields {
    pub fn new() -> Self {
        Fields(Vec::new())
    }

    pub fn push(&mut self, key: &str, v: Val) -> &mut Self {
        self.0.push((key.to_string(), v));
        self
    }

    pub fn with(mut self, key: &str, v: Val) -> Self {
        self.push(key, v);
        self
    }

    pub fn get(&self, key: &str) -> Option<&Val> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

impl Serialize for Fields {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for Fields {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Fields;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut a: A) -> Result<Fields, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = a.next_entry::<String, Val>()? {
                    out.push((k, v));
                }
                Ok(Fields(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema_version: u64,
    pub scenario: String,
    pub kind: String,
    pub seed: ExactTag,
    pub verdict: String,
    pub body: Fields,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<ApproxTag>,
}

impl Report {
    pub fn new(scenario: &str, kind: &str, seed: u64, verdict: impl Into<String>, body: Fields) -> Self {
        Report {
            schema_version: REPORT_SCHEMA_VERSION,
            scenario: scenario.to_string(),
            kind: kind.to_string(),
            seed: ExactTag { exact: seed.to_string() },
            verdict: verdict.into(),
            body,
            timing_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Human-readable rendering. `elapsed_ms` is appended when given.
    pub fn to_text(&self, elapsed_ms: Option<f64>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario: {} ({})", self.scenario, self.kind);
        let _ = writeln!(out, "verdict:  {}", self.verdict);
        render_fields(&mut out, &self.body, 0);
        if let Some(ms) = elapsed_ms {
            let _ = writeln!(out, "time:     {ms:.1} ms");
        }
        out
    }
}

fn inline(v: &Val) -> Option<String> {
    match v {
        Val::Exact(t) => Some(t.exact.clone()),
        Val::Approx(t) => Some(format!("~{:.6}", t.approx)),
        Val::Bool(b) => Some(b.to_string()),
        Val::Text(s) => Some(s.clone()),
        Val::List(xs) => {
            let parts: Option<Vec<String>> =
                xs.iter().map(|x| if matches!(x, Val::Map(_)) { None } else { inline(x) }).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        Val::Map(_) => None,
    }
}

fn render_fields(out: &mut String, f: &Fields, depth: usize) {
    let pad = "  ".repeat(depth);
    for (k, v) in &f.0 {
        match (v, inline(v)) {
            (_, Some(s)) => {
                let _ = writeln!(out, "{pad}{k}: {s}");
            }
            (Val::Map(m), None) => {
                let _ = writeln!(out, "{pad}{k}:");
                render_fields(out, m, depth + 1);
            }
            (Val::List(xs), None) => {
                let _ = writeln!(out, "{pad}{k}:");
                for (i, x) in xs.iter().enumerate() {
                    match x {
                        Val::Map(m) => {
                            let _ = writeln!(out, "{pad}  - [{i}]");
                            render_fields(out, m, depth + 2);
                        }
                        other => {
                            let _ = writeln!(out, "{pad}  - {}", inline(other).unwrap_or_default());
                        }
                    }
                }
            }
            _ => unreachable!("inline covers scalars"),
        }
    }
}
