//! Closed-form resistance kernel on a metrized graph.
//!
//! For an edge `e = (u, v)` of length `L`, let `κ_e = 1/(L + R_e)` where
//! `R_e` is the resistance between `u` and `v` in `Γ ∖ e` (`κ_e = 0` for a
//! bridge, `1/L` for a loop). With `r_uv` the resistance in `Γ` itself,
//! `κ_e = (L − r_uv)/L²`. Then for `x_t` at distance `t` from `u`:
//!
//! * `r(x_t, w) = (1 − t/L) r(u, w) + (t/L) r(v, w) + κ_e t (L − t)` for any
//!   point `w` off the interior of `e`;
//! * `r(x_t, x_s) = d − κ_e d²` with `d = |t − s|`.
//!
//! Everything is a polynomial of degree ≤ 2 along each edge, so potentials of
//! measures with constant edge densities integrate exactly.

use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use super::graph::{MetrizedGraph, Point};
use super::linalg::invert;
use crate::error::{Error, Result};
use crate::numeric::{int, Rat};

/// `c0 + c1 t + c2 t²`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Quad {
    pub c0: Rat,
    pub c1: Rat,
    pub c2: Rat,
}

impl Quad {
    pub fn new(c0: Rat, c1: Rat, c2: Rat) -> Self {
        Quad { c0, c1, c2 }
    }

    pub fn constant(c: Rat) -> Self {
        Quad::new(c, Rat::zero(), Rat::zero())
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        &self.c0 + t * (&self.c1 + t * &self.c2)
    }

    /// `∫_0^L`.
    pub fn integral(&self, len: &Rat) -> Rat {
        let l2 = len * len;
        let l3 = &l2 * len;
        &self.c0 * len + &self.c1 * l2 / int(2) + &self.c2 * l3 / int(3)
    }
}

impl Add for Quad {
    type Output = Quad;
    fn add(self, o: Quad) -> Quad {
        Quad::new(self.c0 + o.c0, self.c1 + o.c1, self.c2 + o.c2)
    }
}

impl Sub for Quad {
    type Output = Quad;
    fn sub(self, o: Quad) -> Quad {
        Quad::new(self.c0 - o.c0, self.c1 - o.c1, self.c2 - o.c2)
    }
}

impl Mul<&Rat> for Quad {
    type Output = Quad;
    fn mul(self, k: &Rat) -> Quad {
        Quad::new(self.c0 * k, self.c1 * k, self.c2 * k)
    }
}

/// Pseudo-inverse data of the weighted Laplacian plus per-edge `κ_e`,
/// computed once per graph. Read-only afterwards.
#[derive(Debug, Clone)]
pub struct ResistanceKernel {
    graph: MetrizedGraph,
    /// Effective resistance between vertices.
    vertex_r: Vec<Vec<Rat>>,
    kappa: Vec<Rat>,
}

/// Vertex-to-vertex effective resistances by grounding vertex 0 and
/// inverting the reduced weighted Laplacian. Parallel edges add
/// conductances; loops carry no current.
pub fn vertex_resistances(g: &MetrizedGraph) -> Result<Vec<Vec<Rat>>> {
    let n = g.num_vertices();
    if g.component_of(0, None).len() != n {
        return Err(Error::Disconnected);
    }
    let m = n - 1;
    let mut lap = vec![vec![Rat::zero(); m]; m];
    for e in g.edges().iter().filter(|e| !e.is_loop()) {
        let c = e.length.recip();
        for (a, b) in [(e.u, e.v), (e.v, e.u)] {
            if a > 0 {
                lap[a - 1][a - 1] += &c;
                if b > 0 {
                    lap[a - 1][b - 1] -= &c;
                }
            }
        }
    }
    let inv = invert(lap).ok_or(Error::Disconnected)?;
    let green = |a: usize, b: usize| -> Rat {
        if a == 0 || b == 0 {
            Rat::zero()
        } else {
            inv[a - 1][b - 1].clone()
        }
    };
    Ok((0..n)
        .map(|a| {
            (0..n)
                .map(|b| green(a, a) + green(b, b) - green(a, b) * int(2))
                .collect()
        })
        .collect())
}

impl ResistanceKernel {
    pub fn new(g: &MetrizedGraph) -> Result<Self> {
        let vertex_r = vertex_resistances(g)?;
        let kappa = g
            .edges()
            .iter()
            .map(|e| {
                let l = &e.length;
                (l - &vertex_r[e.u][e.v]) / (l * l)
            })
            .collect();
        Ok(ResistanceKernel {
            graph: g.clone(),
            vertex_r,
            kappa,
        })
    }

    pub fn graph(&self) -> &MetrizedGraph {
        &self.graph
    }

    pub fn kappa(&self, e: usize) -> &Rat {
        &self.kappa[e]
    }

    pub fn vertex_resistance(&self, a: usize, b: usize) -> &Rat {
        &self.vertex_r[a][b]
    }

    /// `r(x_t, w)` as a function of `t` on edge `e`, for a vertex `w`.
    fn edge_to_vertex(&self, e: usize, w: usize) -> Quad {
        let edge = &self.graph.edges()[e];
        let l = &edge.length;
        let ru = &self.vertex_r[edge.u][w];
        let rv = &self.vertex_r[edge.v][w];
        let k = &self.kappa[e];
        Quad::new(ru.clone(), (rv - ru) / l + k * l, -k.clone())
    }

    /// Resistance between two points.
    pub fn resistance(&self, x: &Point, y: &Point) -> Result<Rat> {
        let x = x.normalize(&self.graph)?;
        let y = y.normalize(&self.graph)?;
        Ok(match (&x, &y) {
            (Point::Vertex(a), Point::Vertex(b)) => self.vertex_r[*a][*b].clone(),
            (Point::Edge { edge, offset }, Point::Vertex(w))
            | (Point::Vertex(w), Point::Edge { edge, offset }) => {
                self.edge_to_vertex(*edge, *w).eval(offset)
            }
            (Point::Edge { edge: e, offset: t }, Point::Edge { edge: f, offset: s }) if e == f => {
                let d = if t > s { t - s } else { s - t };
                &d - &self.kappa[*e] * &d * &d
            }
            (Point::Edge { edge: e, offset: t }, Point::Edge { edge: f, offset: s }) => {
                let fe = &self.graph.edges()[*f];
                let m = &fe.length;
                let sigma = s / m;
                let rp = self.edge_to_vertex(*e, fe.u).eval(t);
                let rq = self.edge_to_vertex(*e, fe.v).eval(t);
                (Rat::one() - &sigma) * rp + sigma * rq + &self.kappa[*f] * s * (m - s)
            }
        })
    }

    /// `∫_f r(w, y) dy` over edge `f`, for a vertex `w`.
    pub fn edge_integral_from_vertex(&self, f: usize, w: usize) -> Rat {
        let fe = &self.graph.edges()[f];
        let m = &fe.length;
        m * (&self.vertex_r[w][fe.u] + &self.vertex_r[w][fe.v]) / int(2)
            + &self.kappa[f] * m * m * m / int(6)
    }

    /// `∫_e r(x_t, y) dy` over the same edge, as a function of `t`:
    /// `(t² + (L−t)²)/2 − κ (t³ + (L−t)³)/3`.
    pub fn self_edge_integral(&self, e: usize) -> Quad {
        let l = &self.graph.edges()[e].length;
        let k = &self.kappa[e];
        let l2 = l * l;
        Quad::new(
            &l2 / int(2) - k * &l2 * l / int(3),
            k * &l2 - l,
            Rat::one() - k * l,
        )
    }
}
