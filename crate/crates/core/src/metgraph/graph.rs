use std::collections::{BTreeMap, VecDeque};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{rat_str, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    #[serde(default)]
    pub genus: u32,
}

/// An edge between vertex indices. `u == v` is a loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: Rat,
    /// Hyperelliptic subtype of a non-separating node, when known.
    pub subtype: Option<u32>,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

/// Connected metrized graph with genus-marked vertices. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetrizedGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<Vertex>,
    #[serde(default)]
    pub edges: Vec<EdgeFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeFile {
    pub u: String,
    pub v: String,
    #[serde(with = "rat_str")]
    pub length: Rat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subtype: Option<u32>,
}

impl MetrizedGraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        for (a, v) in vertices.iter().enumerate() {
            if vertices[..a].iter().any(|w| w.id == v.id) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate vertex id {:?}",
                    v.id
                )));
            }
        }
        for (i, e) in edges.iter().enumerate() {
            if e.u >= vertices.len() || e.v >= vertices.len() {
                return Err(Error::InvalidGraph(format!(
                    "edge {i} has an unknown endpoint"
                )));
            }
            if !e.length.is_positive() {
                return Err(Error::InvalidGraph(format!(
                    "edge {i} has non-positive length {}",
                    e.length
                )));
            }
        }
        let g = MetrizedGraph { vertices, edges };
        if g.component_of(0, None).len() != g.vertices.len() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// Builder from `(id, genus)` pairs and `(u_id, v_id, length)` triples.
    pub fn build(vertices: &[(&str, u32)], edges: &[(&str, &str, Rat)]) -> Result<Self> {
        let file = GraphFile {
            vertices: vertices
                .iter()
                .map(|&(id, genus)| Vertex {
                    id: id.to_string(),
                    genus,
                })
                .collect(),
            edges: edges
                .iter()
                .map(|(u, v, l)| EdgeFile {
                    u: u.to_string(),
                    v: v.to_string(),
                    length: l.clone(),
                    subtype: None,
                })
                .collect(),
        };
        Self::from_file(file)
    }

    pub fn from_file(file: GraphFile) -> Result<Self> {
        let index: BTreeMap<&str, usize> = file
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.as_str(), i))
            .collect();
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex id {id:?}")))
        };
        let edges = file
            .edges
            .iter()
            .map(|e| {
                Ok(Edge {
                    u: lookup(&e.u)?,
                    v: lookup(&e.v)?,
                    length: e.length.clone(),
                    subtype: e.subtype,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.vertices.clone(), edges)
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeFile {
                    u: self.vertices[e.u].id.clone(),
                    v: self.vertices[e.v].id.clone(),
                    length: e.length.clone(),
                    subtype: e.subtype,
                })
                .collect(),
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    /// Valence, loops counted twice.
    pub fn valence(&self, v: usize) -> i64 {
        self.edges
            .iter()
            .map(|e| (e.u == v) as i64 + (e.v == v) as i64)
            .sum()
    }

    /// First Betti number `b₁ = E − V + 1`.
    pub fn betti(&self) -> u64 {
        (self.edges.len() + 1 - self.vertices.len()) as u64
    }

    /// `ĝ = b₁ + Σ g(v)`.
    pub fn total_genus(&self) -> u64 {
        self.betti() + self.vertices.iter().map(|v| v.genus as u64).sum::<u64>()
    }

    pub fn total_length(&self) -> Rat {
        self.edges.iter().map(|e| e.length.clone()).sum()
    }

    /// Vertices reachable from `start`, optionally ignoring one edge.
    pub(crate) fn component_of(&self, start: usize, skip: Option<usize>) -> Vec<usize> {
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(x) = queue.pop_front() {
            for (i, e) in self.edges.iter().enumerate() {
                if Some(i) == skip {
                    continue;
                }
                let other = if e.u == x {
                    e.v
                } else if e.v == x {
                    e.u
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    queue.push_back(other);
                }
            }
        }
        (0..seen.len()).filter(|&i| seen[i]).collect()
    }

    pub fn is_bridge(&self, e: usize) -> bool {
        let edge = &self.edges[e];
        !edge.is_loop() && !self.component_of(edge.u, Some(e)).contains(&edge.v)
    }

    /// For a bridge, the total genera of the two sides (the side of `u` first).
    pub fn bridge_split(&self, e: usize) -> Option<(u64, u64)> {
        if !self.is_bridge(e) {
            return None;
        }
        let side = self.component_of(self.edges[e].u, Some(e));
        let in_side = |x: usize| side.contains(&x);
        let side_edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, ed)| i != e && in_side(ed.u))
            .count();
        let b1 = (side_edges + 1 - side.len()) as u64;
        let g_side = b1
            + side
                .iter()
                .map(|&v| self.vertices[v].genus as u64)
                .sum::<u64>();
        Some((g_side, self.total_genus() - g_side))
    }

    /// Replaces edge `e` by two edges meeting at a new genus-0 vertex at
    /// distance `offset` from `e.u`. Returns the graph and the new vertex.
    pub fn subdivide(&self, e: usize, offset: &Rat) -> Result<(MetrizedGraph, usize)> {
        let edge = self
            .edges
            .get(e)
            .ok_or_else(|| Error::InvalidPoint(format!("no edge {e}")))?;
        if !offset.is_positive() || offset >= &edge.length {
            return Err(Error::InvalidPoint(format!(
                "offset {offset} not inside edge {e} of length {}",
                edge.length
            )));
        }
        let mut vertices = self.vertices.clone();
        let w = vertices.len();
        let mut n = 0;
        let id = loop {
            let cand = format!("{}~{}", e, n);
            if !vertices.iter().any(|v| v.id == cand) {
                break cand;
            }
            n += 1;
        };
        vertices.push(Vertex { id, genus: 0 });
        let mut edges = self.edges.clone();
        edges[e] = Edge {
            u: edge.u,
            v: w,
            length: offset.clone(),
            subtype: edge.subtype,
        };
        edges.push(Edge {
            u: w,
            v: edge.v,
            length: &edge.length - offset,
            subtype: edge.subtype,
        });
        Ok((MetrizedGraph { vertices, edges }, w))
    }

    /// All lengths multiplied by `t > 0`.
    pub fn scaled(&self, t: &Rat) -> Result<MetrizedGraph> {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                length: &e.length * t,
                ..e.clone()
            })
            .collect();
        MetrizedGraph::new(self.vertices.clone(), edges)
    }
}

/// A point of the metrized graph: a vertex, or an edge-interior point at
/// rational distance `offset` from the edge's `u` end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Point {
    Vertex(usize),
    Edge { edge: usize, offset: Rat },
}

impl Point {
    /// Validates against the graph; offsets `0` and `ℓ_e` collapse to the
    /// endpoint vertices.
    pub fn normalize(&self, g: &MetrizedGraph) -> Result<Point> {
        match self {
            Point::Vertex(v) if *v < g.num_vertices() => Ok(self.clone()),
            Point::Vertex(v) => Err(Error::InvalidPoint(format!("no vertex {v}"))),
            Point::Edge { edge, offset } => {
                let e = g
                    .edges()
                    .get(*edge)
                    .ok_or_else(|| Error::InvalidPoint(format!("no edge {edge}")))?;
                if offset.is_zero() {
                    Ok(Point::Vertex(e.u))
                } else if offset == &e.length {
                    Ok(Point::Vertex(e.v))
                } else if offset.is_negative() || offset > &e.length {
                    Err(Error::InvalidPoint(format!(
                        "offset {offset} outside edge {edge} of length {}",
                        e.length
                    )))
                } else {
                    Ok(self.clone())
                }
            }
        }
    }

    pub fn midpoint(g: &MetrizedGraph, edge: usize) -> Point {
        Point::Edge {
            edge,
            offset: &g.edges()[edge].length / Rat::from_integer(2.into()),
        }
    }
}

/// Integer-weighted divisor on the vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphDivisor(pub Vec<i64>);

impl GraphDivisor {
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn get(&self, v: usize) -> i64 {
        self.0[v]
    }
}

/// `K(v) = val(v) − 2 + 2 g(v)`.
pub fn canonical_divisor(g: &MetrizedGraph) -> GraphDivisor {
    GraphDivisor(
        (0..g.num_vertices())
            .map(|v| g.valence(v) - 2 + 2 * g.vertices()[v].genus as i64)
            .collect(),
    )
}
