//! Linear minimization oracles over combinatorial feasible regions.
//!
//! An oracle answers `argmin_{x in X} cost' x` exactly, for `X` the vertex
//! set of a polytope it represents implicitly. Solvers interact with the
//! feasible region only through this interface.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::point::{dot, Point};

/// Linear minimization oracle.
pub trait Lmo: Send + Sync {
    /// Dimension of the decision space.
    fn dimension(&self) -> usize;

    /// Upper bound on the Euclidean distance between any two outputs.
    fn diameter_bound(&self) -> f64;

    /// An exact minimizer of `cost' x` over the feasible region. Ties are
    /// broken deterministically.
    fn minimize(&self, cost: &[f64]) -> Result<Point>;
}

impl Lmo for Box<dyn Lmo> {
    fn dimension(&self) -> usize {
        self.as_ref().dimension()
    }

    fn diameter_bound(&self) -> f64 {
        self.as_ref().diameter_bound()
    }

    fn minimize(&self, cost: &[f64]) -> Result<Point> {
        self.as_ref().minimize(cost)
    }
}

/// Simple connected undirected graph. Decision variables are indexed by the
/// position of an edge in `edges`, in the order given at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphInstance {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphInstance {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if num_vertices < 2 {
            return Err(Error::Invalid("graph needs at least two vertices"));
        }
        let mut seen = vec![false; num_vertices * num_vertices];
        for &(u, v) in &edges {
            if u == v {
                return Err(Error::Invalid("self-loops are not allowed"));
            }
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::Invalid("edge endpoint out of range"));
            }
            let key = u.min(v) * num_vertices + u.max(v);
            if seen[key] {
                return Err(Error::Invalid("duplicate edge"));
            }
            seen[key] = true;
        }
        let graph = Self { num_vertices, edges };
        if !graph.is_connected() {
            return Err(Error::Invalid("graph must be connected"));
        }
        Ok(graph)
    }

    /// Complete graph on `num_vertices` vertices with edges in lexicographic
    /// order.
    pub fn complete(num_vertices: usize) -> Result<Self> {
        let mut edges = Vec::with_capacity(num_vertices * (num_vertices - 1) / 2);
        for u in 0..num_vertices {
            for v in u + 1..num_vertices {
                edges.push((u, v));
            }
        }
        Self::new(num_vertices, edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.num_vertices * (self.num_vertices - 1) / 2
    }

    fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.num_vertices);
        let mut components = self.num_vertices;
        for &(u, v) in &self.edges {
            if uf.union(u, v) {
                components -= 1;
            }
        }
        components == 1
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), rank: vec![0; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the two classes; returns false if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            core::cmp::Ordering::Less => self.parent[ra] = rb,
            core::cmp::Ordering::Greater => self.parent[rb] = ra,
            core::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Minimum spanning tree oracle (Kruskal). Outputs are 0/1 edge indicators
/// with exactly `|V| - 1` ones.
#[derive(Clone, Debug)]
pub struct MstOracle {
    graph: GraphInstance,
}

impl MstOracle {
    pub fn new(graph: GraphInstance) -> Self {
        Self { graph }
    }

    pub fn graph(&self) -> &GraphInstance {
        &self.graph
    }
}

impl Lmo for MstOracle {
    fn dimension(&self) -> usize {
        self.graph.num_edges()
    }

    fn diameter_bound(&self) -> f64 {
        // Two spanning trees differ in at most 2 (|V| - 1) coordinates.
        math::sqrt(2.0 * (self.graph.num_vertices() - 1) as f64)
    }

    fn minimize(&self, cost: &[f64]) -> Result<Point> {
        check_cost(cost, self.dimension())?;
        let mut order: Vec<usize> = (0..cost.len()).collect();
        order.sort_by(|&i, &j| cost[i].partial_cmp(&cost[j]).unwrap().then(i.cmp(&j)));

        let mut uf = UnionFind::new(self.graph.num_vertices());
        let mut indicator = vec![0.0; cost.len()];
        let mut picked = 0;
        for j in order {
            let (u, v) = self.graph.edges()[j];
            if uf.union(u, v) {
                indicator[j] = 1.0;
                picked += 1;
                if picked == self.graph.num_vertices() - 1 {
                    break;
                }
            }
        }
        if picked != self.graph.num_vertices() - 1 {
            return Err(Error::Internal("connected graph produced no spanning tree"));
        }
        Ok(Point::new(indicator))
    }
}

/// Hard cap on tour oracle size; the dynamic program is exponential in the
/// vertex count.
pub const TSP_MAX_VERTICES: usize = 16;

/// Exact traveling salesman tour oracle (Held-Karp dynamic program) over a
/// complete graph with at most [`TSP_MAX_VERTICES`] vertices. Outputs are
/// 0/1 edge indicators with exactly `|V|` ones.
#[derive(Clone, Debug)]
pub struct TspOracle {
    graph: GraphInstance,
    // edge_index[u][v] for u != v
    edge_index: Vec<usize>,
}

impl TspOracle {
    pub fn new(graph: GraphInstance) -> Result<Self> {
        if !graph.is_complete() {
            return Err(Error::Invalid("tour oracle requires a complete graph"));
        }
        let nv = graph.num_vertices();
        if nv < 3 {
            return Err(Error::Invalid("tours need at least three vertices"));
        }
        if nv > TSP_MAX_VERTICES {
            return Err(Error::TooLarge("tour oracle supports at most 16 vertices"));
        }
        let mut edge_index = vec![usize::MAX; nv * nv];
        for (j, &(u, v)) in graph.edges().iter().enumerate() {
            edge_index[u * nv + v] = j;
            edge_index[v * nv + u] = j;
        }
        Ok(Self { graph, edge_index })
    }

    pub fn graph(&self) -> &GraphInstance {
        &self.graph
    }

    #[inline]
    fn eidx(&self, u: usize, v: usize) -> usize {
        self.edge_index[u * self.graph.num_vertices() + v]
    }
}

impl Lmo for TspOracle {
    fn dimension(&self) -> usize {
        self.graph.num_edges()
    }

    fn diameter_bound(&self) -> f64 {
        // Two tours differ in at most 2 |V| coordinates.
        math::sqrt(2.0 * self.graph.num_vertices() as f64)
    }

    fn minimize(&self, cost: &[f64]) -> Result<Point> {
        check_cost(cost, self.dimension())?;
        let nv = self.graph.num_vertices();
        let others = nv - 1; // vertices 1..nv, bit v-1
        let full = (1usize << others) - 1;

        // dp[mask][last]: cheapest path from 0 through exactly `mask`,
        // ending at vertex last+1. Ties keep the earlier predecessor.
        let mut dp = vec![f64::INFINITY; (full + 1) * others];
        let mut parent = vec![usize::MAX; (full + 1) * others];
        for v in 0..others {
            dp[(1 << v) * others + v] = cost[self.eidx(0, v + 1)];
        }
        for mask in 1..=full {
            for last in 0..others {
                if mask & (1 << last) == 0 {
                    continue;
                }
                let cur = dp[mask * others + last];
                if !cur.is_finite() {
                    continue;
                }
                for next in 0..others {
                    if mask & (1 << next) != 0 {
                        continue;
                    }
                    let nmask = mask | (1 << next);
                    let cand = cur + cost[self.eidx(last + 1, next + 1)];
                    let slot = nmask * others + next;
                    if cand < dp[slot] {
                        dp[slot] = cand;
                        parent[slot] = last;
                    }
                }
            }
        }

        let mut best_last = usize::MAX;
        let mut best_cost = f64::INFINITY;
        for last in 0..others {
            let cand = dp[full * others + last] + cost[self.eidx(last + 1, 0)];
            if cand < best_cost {
                best_cost = cand;
                best_last = last;
            }
        }
        if best_last == usize::MAX {
            return Err(Error::Internal("tour reconstruction failed"));
        }

        let mut indicator = vec![0.0; cost.len()];
        indicator[self.eidx(best_last + 1, 0)] = 1.0;
        let mut mask = full;
        let mut last = best_last;
        while parent[mask * others + last] != usize::MAX {
            let prev = parent[mask * others + last];
            indicator[self.eidx(prev + 1, last + 1)] = 1.0;
            mask &= !(1 << last);
            last = prev;
        }
        indicator[self.eidx(0, last + 1)] = 1.0;
        Ok(Point::new(indicator))
    }
}

/// Oracle over an explicit list of vertices; `minimize` scans the list and
/// the first minimizer wins.
#[derive(Clone, Debug)]
pub struct VertexListOracle {
    vertices: Vec<Point>,
    diameter: f64,
}

/// Above this many vertices the diameter bound falls back to twice the
/// largest norm instead of an exact pairwise scan.
const EXACT_DIAMETER_LIMIT: usize = 2048;

impl VertexListOracle {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let dim = match vertices.first() {
            Some(v) => v.dim(),
            None => return Err(Error::Invalid("vertex list must be nonempty")),
        };
        if dim == 0 {
            return Err(Error::Invalid("vertices need at least one coordinate"));
        }
        for v in &vertices {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: v.dim() });
            }
            if !v.is_finite() {
                return Err(Error::NonFinite("vertex coordinates"));
            }
        }
        let diameter = if vertices.len() <= EXACT_DIAMETER_LIMIT {
            let mut best = 0.0f64;
            for (i, a) in vertices.iter().enumerate() {
                for b in &vertices[i + 1..] {
                    best = best.max(a.dist(b));
                }
            }
            best
        } else {
            2.0 * vertices.iter().map(|v| v.norm()).fold(0.0f64, f64::max)
        };
        Ok(Self { vertices, diameter })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }
}

impl Lmo for VertexListOracle {
    fn dimension(&self) -> usize {
        self.vertices[0].dim()
    }

    fn diameter_bound(&self) -> f64 {
        self.diameter
    }

    fn minimize(&self, cost: &[f64]) -> Result<Point> {
        check_cost(cost, self.dimension())?;
        let mut best = 0usize;
        let mut best_val = dot(self.vertices[0].coords(), cost);
        for (i, v) in self.vertices.iter().enumerate().skip(1) {
            let val = dot(v.coords(), cost);
            if val < best_val {
                best_val = val;
                best = i;
            }
        }
        Ok(self.vertices[best].clone())
    }
}

fn check_cost(cost: &[f64], dim: usize) -> Result<()> {
    if cost.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: cost.len() });
    }
    if cost.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite("oracle cost vector"));
    }
    Ok(())
}
