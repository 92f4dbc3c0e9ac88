//! Graph representation, the edge-list file format, and the matrices and
//! distributions derived from adjacency.
//!
//! Graphs are simple: no self-loops, no repeated edges. Weights are strictly
//! positive and default to `1.0`, so the unweighted case is the weighted
//! case with unit weights and "degree" always means weighted degree.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::pmf::ProbabilityVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Which adjacency relation to read off a graph.
///
/// `Undirected` applies to undirected graphs only. For directed graphs,
/// `Out` puts the weight of `i → j` at `(i, j)` and `In` puts it at `(j, i)`,
/// so row `i` of the `In` matrix lists the sources of edges entering `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Undirected,
    In,
    Out,
}

impl Orientation {
    pub fn name(self) -> &'static str {
        match self {
            Orientation::Undirected => "undirected",
            Orientation::In => "in",
            Orientation::Out => "out",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Orientation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "undirected" => Ok(Orientation::Undirected),
            "in" => Ok(Orientation::In),
            "out" => Ok(Orientation::Out),
            other => Err(format!("unknown orientation `{other}`")),
        }
    }
}

/// Families produced by [`generate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Ring,
    Complete,
    Star,
}

impl GraphKind {
    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Ring => "ring",
            GraphKind::Complete => "complete",
            GraphKind::Star => "star",
        }
    }
}

impl FromStr for GraphKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ring" => Ok(GraphKind::Ring),
            "complete" => Ok(GraphKind::Complete),
            "star" => Ok(GraphKind::Star),
            other => Err(format!("unknown graph kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<Edge>,
    directed: bool,
}

impl Graph {
    pub fn new(num_vertices: usize, edges: Vec<Edge>, directed: bool) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::InvalidGraph("graph needs at least one vertex".into()));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for e in &edges {
            if let Some(reason) = edge_problem(e, num_vertices, directed, &mut seen) {
                return Err(Error::InvalidGraph(reason));
            }
        }
        Ok(Self {
            num_vertices,
            edges,
            directed,
        })
    }

    /// Unit-weight graph from `(u, v)` pairs.
    pub fn unweighted(num_vertices: usize, pairs: &[(usize, usize)], directed: bool) -> Result<Self> {
        let edges = pairs
            .iter()
            .map(|&(u, v)| Edge { u, v, weight: 1.0 })
            .collect();
        Self::new(num_vertices, edges, directed)
    }

    pub fn weighted(
        num_vertices: usize,
        triples: &[(usize, usize, f64)],
        directed: bool,
    ) -> Result<Self> {
        let edges = triples
            .iter()
            .map(|&(u, v, weight)| Edge { u, v, weight })
            .collect();
        Self::new(num_vertices, edges, directed)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn has_unit_weights(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1.0)
    }

    /// Same vertices and edges with every weight set to one.
    pub fn unit_weight_skeleton(&self) -> Self {
        Self {
            num_vertices: self.num_vertices,
            edges: self
                .edges
                .iter()
                .map(|e| Edge { weight: 1.0, ..*e })
                .collect(),
            directed: self.directed,
        }
    }

    /// Renames vertex `i` to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.num_vertices {
            return Err(Error::DimensionMismatch {
                expected: self.num_vertices,
                got: perm.len(),
            });
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                u: perm[e.u],
                v: perm[e.v],
                weight: e.weight,
            })
            .collect();
        Self::new(self.num_vertices, edges, self.directed)
    }

    fn check_orientation(&self, orientation: Orientation) -> Result<()> {
        let ok = match orientation {
            Orientation::Undirected => !self.directed,
            Orientation::In | Orientation::Out => self.directed,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::OrientationMismatch {
                orientation: orientation.name(),
                kind: if self.directed { "directed" } else { "undirected" },
            })
        }
    }

    /// Weighted degrees, i.e. the row sums of the adjacency matrix.
    pub fn degrees(&self, orientation: Orientation) -> Result<Vec<f64>> {
        Ok(adjacency_matrix(self, orientation)?.row_sums())
    }

    /// Connectivity of the underlying undirected structure.
    pub fn is_connected(&self) -> bool {
        let n = self.num_vertices;
        let mut neighbors = vec![Vec::new(); n];
        for e in &self.edges {
            neighbors[e.u].push(e.v);
            neighbors[e.v].push(e.u);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &neighbors[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

fn edge_problem(
    e: &Edge,
    num_vertices: usize,
    directed: bool,
    seen: &mut HashSet<(usize, usize)>,
) -> Option<String> {
    if e.u >= num_vertices || e.v >= num_vertices {
        return Some(format!(
            "edge {}-{} references a vertex outside 0..{}",
            e.u, e.v, num_vertices
        ));
    }
    if e.u == e.v {
        return Some(format!("self-loop at vertex {}", e.u));
    }
    if !(e.weight.is_finite() && e.weight > 0.0) {
        return Some(format!(
            "edge {}-{} has weight {}, expected a positive value",
            e.u, e.v, e.weight
        ));
    }
    let key = if directed {
        (e.u, e.v)
    } else {
        (e.u.min(e.v), e.u.max(e.v))
    };
    if !seen.insert(key) {
        return Some(format!("duplicate edge {}-{}", e.u, e.v));
    }
    None
}

/// Parses the edge-list text format.
///
/// ```text
/// # comment
/// vertices 4        (optional, first non-comment line)
/// 0 1
/// 1 2 2.5
/// ```
///
/// Without a `vertices` header the vertex count is one more than the
/// largest id seen. Directedness is not part of the file.
pub fn parse_edge_list(text: &str, directed: bool) -> Result<Graph> {
    let mut declared: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, Edge)> = Vec::new();
    let mut seen_data = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "vertices" {
            if seen_data {
                return Err(parse_err(line_no, "`vertices` header must precede all edges"));
            }
            if fields.len() != 2 {
                return Err(parse_err(line_no, "expected `vertices <M>`"));
            }
            let m: usize = fields[1]
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad vertex count `{}`", fields[1])))?;
            if m == 0 {
                return Err(parse_err(line_no, "vertex count must be positive"));
            }
            declared = Some((m, line_no));
            seen_data = true;
            continue;
        }
        seen_data = true;
        if fields.len() != 2 && fields.len() != 3 {
            return Err(parse_err(
                line_no,
                format!("expected `<u> <v>` or `<u> <v> <w>`, found {} fields", fields.len()),
            ));
        }
        let u = parse_vertex(fields[0], line_no)?;
        let v = parse_vertex(fields[1], line_no)?;
        let weight = match fields.get(2) {
            Some(w) => {
                let w: f64 = w
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("bad weight `{w}`")))?;
                if !(w.is_finite() && w > 0.0) {
                    return Err(parse_err(line_no, format!("weight {w} is not positive")));
                }
                w
            }
            None => 1.0,
        };
        if u == v {
            return Err(parse_err(line_no, format!("self-loop at vertex {u}")));
        }
        edges.push((line_no, Edge { u, v, weight }));
    }

    let max_id = edges.iter().map(|(_, e)| e.u.max(e.v)).max();
    let num_vertices = match (declared, max_id) {
        (Some((m, _)), _) => m,
        (None, Some(id)) => id + 1,
        (None, None) => return Err(parse_err(text.lines().count().max(1), "no edges and no vertex count")),
    };

    let mut seen = HashSet::with_capacity(edges.len());
    for (line_no, e) in &edges {
        if let Some(reason) = edge_problem(e, num_vertices, directed, &mut seen) {
            return Err(parse_err(*line_no, reason));
        }
    }
    Graph::new(num_vertices, edges.into_iter().map(|(_, e)| e).collect(), directed)
}

fn parse_vertex(field: &str, line: usize) -> Result<usize> {
    field
        .parse()
        .map_err(|_| parse_err(line, format!("bad vertex id `{field}`")))
}

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

/// Renders a graph in the edge-list format accepted by [`parse_edge_list`].
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("vertices {}\n", g.num_vertices);
    for e in &g.edges {
        if e.weight == 1.0 {
            out.push_str(&format!("{} {}\n", e.u, e.v));
        } else {
            out.push_str(&format!("{} {} {}\n", e.u, e.v, e.weight));
        }
    }
    out
}

pub fn adjacency_matrix(g: &Graph, orientation: Orientation) -> Result<DenseMatrix> {
    g.check_orientation(orientation)?;
    let mut a = DenseMatrix::zeros(g.num_vertices, g.num_vertices);
    for e in &g.edges {
        match orientation {
            Orientation::Undirected => {
                a[(e.u, e.v)] = e.weight;
                a[(e.v, e.u)] = e.weight;
            }
            Orientation::Out => a[(e.u, e.v)] = e.weight,
            Orientation::In => a[(e.v, e.u)] = e.weight,
        }
    }
    Ok(a)
}

pub fn degree_matrix(g: &Graph, orientation: Orientation) -> Result<DenseMatrix> {
    Ok(DenseMatrix::diagonal(&g.degrees(orientation)?))
}

/// `L = D − A` for an undirected graph.
pub fn laplacian(g: &Graph) -> Result<DenseMatrix> {
    if g.directed {
        return Err(Error::OrientationMismatch {
            orientation: "undirected",
            kind: "directed",
        });
    }
    let a = adjacency_matrix(g, Orientation::Undirected)?;
    let d = DenseMatrix::diagonal(&a.row_sums());
    d.sub(&a)
}

/// Vertex-degree distribution `p_i = deg(i) / Σ deg`.
pub fn degree_pmf(g: &Graph, orientation: Orientation) -> Result<ProbabilityVector> {
    if g.edges.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    ProbabilityVector::from_weights(&g.degrees(orientation)?)
}

/// Ring, complete or star graph on `m` vertices, unit weights, undirected.
///
/// The star hub is the last vertex, so the adjacency matrix has its ones
/// confined to the last row and column.
pub fn generate(kind: GraphKind, m: usize) -> Result<Graph> {
    let min = match kind {
        GraphKind::Ring => 3,
        GraphKind::Complete | GraphKind::Star => 2,
    };
    if m < min {
        return Err(Error::TooFewVertices {
            kind: kind.name(),
            min,
            got: m,
        });
    }
    let pairs: Vec<(usize, usize)> = match kind {
        GraphKind::Ring => (0..m).map(|i| (i, (i + 1) % m)).collect(),
        GraphKind::Complete => (0..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
            .collect(),
        GraphKind::Star => (0..m - 1).map(|i| (i, m - 1)).collect(),
    };
    Graph::unweighted(m, &pairs, false)
}

/// Every labeled simple undirected unit-weight graph on `m` vertices,
/// including the empty one.
pub fn enumerate_undirected(m: usize) -> impl Iterator<Item = Graph> {
    let slots: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect();
    assert!(slots.len() < 32, "enumeration is limited to small graphs");
    (0u32..1 << slots.len()).map(move |mask| {
        let pairs: Vec<(usize, usize)> = slots
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask >> bit & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        Graph::unweighted(m, &pairs, false).expect("enumerated graphs are simple")
    })
}
