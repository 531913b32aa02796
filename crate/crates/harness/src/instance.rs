//! Instance files: a versioned JSON schema that carries the combinatorial
//! ground set, the uncertainty set, optional precomputed geometric constants,
//! and the generator seed. Real numbers are written as decimal strings so the
//! files are byte-stable across platforms and locales.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use robustfw_core::oracles::{GraphInstance, MstOracle, TspOracle, VertexListOracle};
use robustfw_core::uncertainty::{BoxSet, BudgetedSet, ScenarioHullSet, UncertaintySet};
use robustfw_core::{GeometricConstants, Point, ProblemInstance};

use crate::error::HarnessError;

pub const SCHEMA_VERSION: u32 = 1;

/// A finite real serialized as a decimal string (shortest round-trip form).
/// Plain JSON numbers are also accepted on input.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_real(self.0))
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Number(f64),
        }
        let value = match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| D::Error::custom(format!("not a decimal real: {s:?}")))?,
            Repr::Number(v) => v,
        };
        if !value.is_finite() {
            return Err(D::Error::custom("real values must be finite"));
        }
        Ok(Real(value))
    }
}

pub fn format_real(v: f64) -> String {
    let mut s = format!("{v}");
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

fn reals(values: &[f64]) -> Vec<Real> {
    values.iter().map(|v| Real(*v)).collect()
}

fn floats(values: &[Real]) -> Vec<f64> {
    values.iter().map(|r| r.0).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Mst,
    Tsp,
    VertexList,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Mst => "mst",
            Kind::Tsp => "tsp",
            Kind::VertexList => "vertex_list",
        }
    }

    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        match text {
            "mst" => Ok(Kind::Mst),
            "tsp" => Ok(Kind::Tsp),
            "vertex_list" | "vertex-list" => Ok(Kind::VertexList),
            other => Err(HarnessError::usage(format!(
                "unknown instance kind {other:?} (expected mst, tsp, or vertex_list)"
            ))),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphData {
    pub num_vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum UncertaintyData {
    /// Box from `c_lower` to `c_lower + d` componentwise.
    Box { c_lower: Vec<Real>, d: Vec<Real> },
    Budgeted { c_lower: Vec<Real>, d: Vec<Real>, gamma: Real },
    Scenarios { scenarios: Vec<Vec<Real>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsData {
    #[serde(rename = "D")]
    pub feasible_diameter: Real,
    #[serde(rename = "M")]
    pub uncertainty_diameter: Real,
    #[serde(rename = "M_max")]
    pub uncertainty_max_norm: Real,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub version: u32,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<Real>>>,
    pub uncertainty: UncertaintyData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<ConstantsData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InstanceFile {
    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("unnamed_{}", self.kind))
    }

    pub fn to_json(&self) -> Result<String, HarnessError> {
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| HarnessError::instance(format!("cannot serialize instance: {e}")))?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let file: InstanceFile = serde_json::from_str(text)
            .map_err(|e| HarnessError::instance(format!("cannot parse instance: {e}")))?;
        if file.version != SCHEMA_VERSION {
            return Err(HarnessError::instance(format!(
                "unsupported schema version {} (expected {})",
                file.version, SCHEMA_VERSION
            )));
        }
        Ok(file)
    }

    pub fn write(&self, path: &Path) -> Result<(), HarnessError> {
        let text = self.to_json()?;
        fs::write(path, text).map_err(|e| {
            HarnessError::instance(format!("cannot write {}: {e}", path.display()))
        })
    }

    pub fn read(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| {
            HarnessError::instance(format!("cannot read {}: {e}", path.display()))
        })?;
        Self::from_json(&text)
    }

    pub fn uncertainty_set(&self) -> Result<UncertaintySet, HarnessError> {
        let set = match &self.uncertainty {
            UncertaintyData::Box { c_lower, d } => {
                let lower = floats(c_lower);
                let upper: Vec<f64> =
                    lower.iter().zip(d).map(|(lo, width)| lo + width.0).collect();
                UncertaintySet::Box(
                    BoxSet::new(lower, upper)
                        .map_err(|e| HarnessError::instance(format!("bad box set: {e}")))?,
                )
            }
            UncertaintyData::Budgeted { c_lower, d, gamma } => UncertaintySet::Budgeted(
                BudgetedSet::new(floats(c_lower), floats(d), gamma.0)
                    .map_err(|e| HarnessError::instance(format!("bad budgeted set: {e}")))?,
            ),
            UncertaintyData::Scenarios { scenarios } => UncertaintySet::ScenarioHull(
                ScenarioHullSet::new(
                    scenarios.iter().map(|s| Point::new(floats(s))).collect(),
                )
                .map_err(|e| HarnessError::instance(format!("bad scenario set: {e}")))?,
            ),
        };
        Ok(set)
    }

    pub fn to_problem(&self) -> Result<ProblemInstance, HarnessError> {
        let set = self.uncertainty_set()?;
        let name = self.display_name();
        let problem = match self.kind {
            Kind::Mst | Kind::Tsp => {
                let graph = self.graph.as_ref().ok_or_else(|| {
                    HarnessError::instance(format!("{} instance needs a graph", self.kind))
                })?;
                let edges: Vec<(usize, usize)> =
                    graph.edges.iter().map(|e| (e[0], e[1])).collect();
                let graph = GraphInstance::new(graph.num_vertices, edges)
                    .map_err(|e| HarnessError::instance(format!("bad graph: {e}")))?;
                match self.kind {
                    Kind::Mst => {
                        let oracle = MstOracle::new(graph);
                        self.finish_problem(name, Box::new(oracle), set)?
                    }
                    _ => {
                        let oracle = TspOracle::new(graph).map_err(|e| {
                            HarnessError::instance(format!("bad tour instance: {e}"))
                        })?;
                        self.finish_problem(name, Box::new(oracle), set)?
                    }
                }
            }
            Kind::VertexList => {
                let raw = self.vertices.as_ref().ok_or_else(|| {
                    HarnessError::instance("vertex_list instance needs vertices".to_string())
                })?;
                let points: Vec<Point> =
                    raw.iter().map(|v| Point::new(floats(v))).collect();
                let oracle = VertexListOracle::new(points)
                    .map_err(|e| HarnessError::instance(format!("bad vertex list: {e}")))?;
                self.finish_problem(name, Box::new(oracle), set)?
            }
        };
        Ok(problem)
    }

    fn finish_problem(
        &self,
        name: String,
        oracle: Box<dyn robustfw_core::oracles::Lmo>,
        set: UncertaintySet,
    ) -> Result<ProblemInstance, HarnessError> {
        let built = match &self.constants {
            Some(c) => {
                let constants = GeometricConstants::new(
                    c.feasible_diameter.0,
                    c.uncertainty_diameter.0,
                    c.uncertainty_max_norm.0,
                )
                .map_err(|e| HarnessError::instance(format!("bad constants: {e}")))?;
                ProblemInstance::with_constants(name, oracle, set, constants)
            }
            None => ProblemInstance::new(name, oracle, set),
        };
        built.map_err(|e| HarnessError::instance(format!("invalid instance: {e}")))
    }
}

pub fn real_vec(values: &[f64]) -> Vec<Real> {
    reals(values)
}

pub fn real_matrix(rows: &[Vec<f64>]) -> Vec<Vec<Real>> {
    rows.iter().map(|r| reals(r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> InstanceFile {
        InstanceFile {
            version: SCHEMA_VERSION,
            kind: Kind::Mst,
            name: Some("sample".to_string()),
            graph: Some(GraphData {
                num_vertices: 3,
                edges: vec![[0, 1], [0, 2], [1, 2]],
            }),
            vertices: None,
            uncertainty: UncertaintyData::Budgeted {
                c_lower: real_vec(&[1.0, 2.0, 3.0]),
                d: real_vec(&[1.0, 1.0, 2.0]),
                gamma: Real(1.5),
            },
            constants: None,
            seed: Some(7),
        }
    }

    #[test]
    fn json_round_trip_is_identity() {
        let file = sample();
        let text = file.to_json().unwrap();
        let again = InstanceFile::from_json(&text).unwrap();
        assert_eq!(file, again);
        assert_eq!(text, again.to_json().unwrap());
    }

    #[test]
    fn reals_are_written_as_strings() {
        let text = sample().to_json().unwrap();
        assert!(text.contains("\"1.5\""), "{text}");
        assert!(text.contains("\"gamma\": \"1.5\""), "{text}");
    }

    #[test]
    fn numeric_reals_are_accepted_on_input() {
        let text = sample().to_json().unwrap().replace("\"1.5\"", "1.5");
        let file = InstanceFile::from_json(&text).unwrap();
        match file.uncertainty {
            UncertaintyData::Budgeted { gamma, .. } => assert_eq!(gamma.0, 1.5),
            _ => panic!("wrong variant"),
        }
    }

    #[test]
    fn version_mismatch_is_rejected() {
        let text = sample().to_json().unwrap().replace("\"version\": 1", "\"version\": 9");
        assert!(InstanceFile::from_json(&text).is_err());
    }

    #[test]
    fn problem_construction_checks_shape() {
        let mut file = sample();
        file.graph = None;
        assert!(file.to_problem().is_err());

        let good = sample().to_problem().unwrap();
        assert_eq!(good.dimension(), 3);
        assert_eq!(good.name(), "sample");
    }

    #[test]
    fn real_formatting_round_trips_exactly() {
        for v in [
            0.0,
            1.0,
            -7.0,
            0.1,
            1.7315425952887047,
            1e-12,
            123456789.123456,
            f64::MIN_POSITIVE,
        ] {
            let s = format_real(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
    }
}
