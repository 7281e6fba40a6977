//! JSON ingestion and export for polytopes and test-configurations.
//!
//! Polytopes come either as facets `{"dim": n, "facets": [{"normal": [...], "rhs": "p/q"}]}`
//! or as vertices `{"vertices": [["p/q", ...], ...]}`. Parse errors carry the
//! line and column reported by the JSON reader.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::TestConfiguration;
use crate::polytope::HPolytope;
use crate::rat::{self, Rat};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FacetRecord {
    #[serde(with = "rat::serde_rat_vec")]
    normal: Vec<Rat>,
    #[serde(with = "rat::serde_rat")]
    rhs: Rat,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FacetFile {
    dim: usize,
    facets: Vec<FacetRecord>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexFile {
    vertices: Vec<RatRow>,
}

#[derive(Debug, Deserialize)]
#[serde(transparent)]
struct RatRow(#[serde(with = "rat::serde_rat_vec")] Vec<Rat>);

fn parse_error(what: &str, e: serde_json::Error) -> Error {
    Error::Parse(format!("{what}: {e}"))
}

pub fn parse_polytope(text: &str) -> Result<HPolytope> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| parse_error("polytope", e))?;
    if value.get("vertices").is_some() {
        let file: VertexFile = serde_json::from_str(text).map_err(|e| parse_error("polytope", e))?;
        let points: Vec<Vec<Rat>> = file.vertices.into_iter().map(|r| r.0).collect();
        HPolytope::from_vertices(&points)
    } else {
        let file: FacetFile = serde_json::from_str(text).map_err(|e| parse_error("polytope", e))?;
        HPolytope::new(file.dim, file.facets.into_iter().map(|f| (f.normal, f.rhs)).collect())
    }
}

pub fn parse_test_configuration(text: &str) -> Result<TestConfiguration> {
    serde_json::from_str(text).map_err(|e| parse_error("test configuration", e))
}

/// Facet form with primitive integer normals.
pub fn polytope_to_json(p: &HPolytope) -> serde_json::Value {
    let facets: Vec<serde_json::Value> = p
        .facets()
        .iter()
        .map(|f| {
            serde_json::json!({
                "normal": f.normal.iter().map(|x| match x.to_i64() {
                    Some(v) => serde_json::Value::from(v),
                    None => serde_json::Value::String(x.to_string()),
                }).collect::<Vec<_>>(),
                "rhs": rat::format_rat(&f.rhs),
            })
        })
        .collect();
    serde_json::json!({ "dim": p.dim(), "facets": facets })
}
