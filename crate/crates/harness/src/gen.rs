//! Deterministic random instance generation. Every draw flows from a single
//! ChaCha stream seeded by the user, so identical parameters reproduce
//! byte-identical files.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::HarnessError;
use crate::instance::{
    format_real, real_matrix, real_vec, GraphData, InstanceFile, Kind, Real, UncertaintyData,
    SCHEMA_VERSION,
};

pub const TSP_MIN_VERTICES: usize = 3;
pub const TSP_MAX_VERTICES: usize = 16;
pub const MST_MIN_VERTICES: usize = 3;
pub const VERTEX_LIST_MAX_DIM: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UncertaintyChoice {
    Box,
    Budgeted,
    Scenarios,
}

impl UncertaintyChoice {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        match text {
            "box" => Ok(UncertaintyChoice::Box),
            "budgeted" => Ok(UncertaintyChoice::Budgeted),
            "scenarios" => Ok(UncertaintyChoice::Scenarios),
            other => Err(HarnessError::usage(format!(
                "unknown uncertainty type {other:?} (expected box, budgeted, or scenarios)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenSpec {
    pub kind: Kind,
    pub n: usize,
    pub gamma: f64,
    pub seed: u64,
    pub uncertainty: UncertaintyChoice,
    pub num_scenarios: usize,
}

impl GenSpec {
    pub fn instance_name(&self) -> String {
        let gamma_text = format_real(self.gamma).replace('.', "p");
        format!("{}_n{}_g{}_s{}", self.kind, self.n, gamma_text, self.seed)
    }
}

pub fn generate_instance(spec: &GenSpec) -> Result<InstanceFile, HarnessError> {
    if !spec.gamma.is_finite() || spec.gamma < 0.0 {
        return Err(HarnessError::usage("gamma must be finite and nonnegative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (graph, vertices, dimension) = match spec.kind {
        Kind::Mst => {
            if spec.n < MST_MIN_VERTICES {
                return Err(HarnessError::usage(format!(
                    "mst instances need at least {MST_MIN_VERTICES} vertices"
                )));
            }
            let graph = random_connected_graph(spec.n, &mut rng);
            let dim = graph.edges.len();
            (Some(graph), None, dim)
        }
        Kind::Tsp => {
            if !(TSP_MIN_VERTICES..=TSP_MAX_VERTICES).contains(&spec.n) {
                return Err(HarnessError::usage(format!(
                    "tsp instances need between {TSP_MIN_VERTICES} and {TSP_MAX_VERTICES} vertices"
                )));
            }
            let graph = complete_graph(spec.n);
            let dim = graph.edges.len();
            (Some(graph), None, dim)
        }
        Kind::VertexList => {
            if spec.n == 0 || spec.n > VERTEX_LIST_MAX_DIM {
                return Err(HarnessError::usage(format!(
                    "vertex_list dimension must be between 1 and {VERTEX_LIST_MAX_DIM}"
                )));
            }
            let vertices = random_binary_vertices(spec.n, &mut rng);
            (None, Some(vertices), spec.n)
        }
    };
    if spec.gamma > dimension as f64 {
        return Err(HarnessError::usage(format!(
            "gamma {} exceeds the cost dimension {dimension}",
            spec.gamma
        )));
    }

    let uncertainty = random_uncertainty(spec, dimension, &mut rng)?;
    Ok(InstanceFile {
        version: SCHEMA_VERSION,
        kind: spec.kind,
        name: Some(spec.instance_name()),
        graph,
        vertices,
        uncertainty,
        constants: None,
        seed: Some(spec.seed),
    })
}

/// Erdős–Rényi draw with edge probability `min(1, 2 ln(nv) / nv)`, redrawn
/// until connected. The probability sits above the connectivity threshold,
/// so retries are rare.
fn random_connected_graph(num_vertices: usize, rng: &mut ChaCha8Rng) -> GraphData {
    let nv = num_vertices as f64;
    let p = (2.0 * nv.ln() / nv).min(1.0);
    loop {
        let mut edges = Vec::new();
        for u in 0..num_vertices {
            for v in u + 1..num_vertices {
                if rng.random_range(0.0..1.0) < p {
                    edges.push([u, v]);
                }
            }
        }
        if edges.len() >= num_vertices - 1 && is_connected(num_vertices, &edges) {
            return GraphData { num_vertices, edges };
        }
    }
}

fn complete_graph(num_vertices: usize) -> GraphData {
    let mut edges = Vec::new();
    for u in 0..num_vertices {
        for v in u + 1..num_vertices {
            edges.push([u, v]);
        }
    }
    GraphData { num_vertices, edges }
}

fn is_connected(num_vertices: usize, edges: &[[usize; 2]]) -> bool {
    let mut adjacency = vec![Vec::new(); num_vertices];
    for e in edges {
        adjacency[e[0]].push(e[1]);
        adjacency[e[1]].push(e[0]);
    }
    let mut seen = vec![false; num_vertices];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1usize;
    while let Some(u) = stack.pop() {
        for &v in &adjacency[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == num_vertices
}

/// Distinct random 0/1 points, `2n` of them (capped by the number that
/// exist), so small instances stay exhaustible.
fn random_binary_vertices(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Real>> {
    let want = (2 * dim).clamp(2, 64).min(1usize << dim.min(20));
    let mut seen: Vec<Vec<u8>> = Vec::new();
    let mut out = Vec::new();
    let mut attempts = 0usize;
    while out.len() < want && attempts < 10_000 {
        attempts += 1;
        let bits: Vec<u8> = (0..dim).map(|_| rng.random_range(0..2u8)).collect();
        if seen.contains(&bits) {
            continue;
        }
        seen.push(bits.clone());
        out.push(bits.iter().map(|b| Real(*b as f64)).collect());
    }
    out
}

fn random_uncertainty(
    spec: &GenSpec,
    dimension: usize,
    rng: &mut ChaCha8Rng,
) -> Result<UncertaintyData, HarnessError> {
    let mut c_lower = Vec::with_capacity(dimension);
    let mut d = Vec::with_capacity(dimension);
    for _ in 0..dimension {
        let nominal: u32 = rng.random_range(1..=100);
        let deviation: u32 = rng.random_range(1..=nominal);
        c_lower.push(nominal as f64);
        d.push(deviation as f64);
    }
    match spec.uncertainty {
        UncertaintyChoice::Box => {
            Ok(UncertaintyData::Box { c_lower: real_vec(&c_lower), d: real_vec(&d) })
        }
        UncertaintyChoice::Budgeted => Ok(UncertaintyData::Budgeted {
            c_lower: real_vec(&c_lower),
            d: real_vec(&d),
            gamma: Real(spec.gamma),
        }),
        UncertaintyChoice::Scenarios => {
            if spec.num_scenarios == 0 {
                return Err(HarnessError::usage("need at least one scenario"));
            }
            let mut scenarios = Vec::with_capacity(spec.num_scenarios);
            for _ in 0..spec.num_scenarios {
                let row: Vec<f64> =
                    (0..dimension).map(|_| rng.random_range(1..=100u32) as f64).collect();
                scenarios.push(row);
            }
            Ok(UncertaintyData::Scenarios { scenarios: real_matrix(&scenarios) })
        }
    }
}
