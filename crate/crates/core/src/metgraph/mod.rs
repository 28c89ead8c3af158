//! Potential theory on metrized reduction graphs: effective resistance,
//! canonical and admissible measures, Green's functions, and the invariants
//! ε, φ, δ. All values are exact rationals.
//!
//! The admissible measure is built as `(δ_K + 2 μ_can)/(2ĝ)` and its Green's
//! function through resistance potentials,
//! `g_μ(x, y) = ½ (j(x) + j(y) − r(x, y) − c)` with `j(z) = ∫ r(z, ζ) dμ(ζ)`
//! and `c = ∬ r dμ dμ`. [`verify_admissible`] checks the defining property
//! independently.

mod graph;
mod kernel;
mod linalg;

pub use graph::{
    canonical_divisor, Edge, EdgeFile, GraphDivisor, GraphFile, MetrizedGraph, Point, Vertex,
};
pub use kernel::{vertex_resistances, Quad, ResistanceKernel};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{int, Rat};

/// Point masses at vertices plus a constant density on each edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure {
    pub vertex_mass: Vec<Rat>,
    pub edge_density: Vec<Rat>,
}

impl Measure {
    pub fn zero(g: &MetrizedGraph) -> Self {
        Measure {
            vertex_mass: vec![Rat::zero(); g.num_vertices()],
            edge_density: vec![Rat::zero(); g.num_edges()],
        }
    }

    pub fn from_divisor(g: &MetrizedGraph, d: &GraphDivisor) -> Self {
        Measure {
            vertex_mass: d.0.iter().map(|&k| int(k)).collect(),
            ..Measure::zero(g)
        }
    }

    pub fn total_mass(&self, g: &MetrizedGraph) -> Rat {
        let point: Rat = self.vertex_mass.iter().sum();
        let cont: Rat = self
            .edge_density
            .iter()
            .zip(g.edges())
            .map(|(rho, e)| rho * &e.length)
            .sum();
        point + cont
    }

    pub fn scale(&self, k: &Rat) -> Measure {
        Measure {
            vertex_mass: self.vertex_mass.iter().map(|m| m * k).collect(),
            edge_density: self.edge_density.iter().map(|m| m * k).collect(),
        }
    }

    pub fn plus(&self, o: &Measure) -> Measure {
        Measure {
            vertex_mass: self
                .vertex_mass
                .iter()
                .zip(&o.vertex_mass)
                .map(|(a, b)| a + b)
                .collect(),
            edge_density: self
                .edge_density
                .iter()
                .zip(&o.edge_density)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn require_unit_mass(&self, g: &MetrizedGraph) -> Result<()> {
        let m = self.total_mass(g);
        if m.is_one() {
            Ok(())
        } else {
            Err(Error::MassNotOne(m.to_string()))
        }
    }
}

/// A continuous function given by its vertex values and a quadratic in arc
/// length (from the edge's `u` end) on each edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewisePoly {
    pub vertex_values: Vec<Rat>,
    pub edge_polys: Vec<Quad>,
}

impl PiecewisePoly {
    pub fn eval(&self, g: &MetrizedGraph, x: &Point) -> Result<Rat> {
        Ok(match x.normalize(g)? {
            Point::Vertex(v) => self.vertex_values[v].clone(),
            Point::Edge { edge, offset } => self.edge_polys[edge].eval(&offset),
        })
    }

    /// `∫ f dμ`.
    pub fn integrate(&self, g: &MetrizedGraph, mu: &Measure) -> Rat {
        let point: Rat = self
            .vertex_values
            .iter()
            .zip(&mu.vertex_mass)
            .map(|(f, m)| f * m)
            .sum();
        let cont: Rat = self
            .edge_polys
            .iter()
            .zip(&mu.edge_density)
            .zip(g.edges())
            .filter(|((_, rho), _)| !rho.is_zero())
            .map(|((p, rho), e)| rho * p.integral(&e.length))
            .sum();
        point + cont
    }

    /// Largest mismatch between an edge polynomial's endpoint value and the
    /// adjacent vertex value; zero for a continuous function.
    pub fn continuity_defect(&self, g: &MetrizedGraph) -> Rat {
        let mut worst = Rat::zero();
        for (p, e) in self.edge_polys.iter().zip(g.edges()) {
            for (val, v) in [(p.eval(&Rat::zero()), e.u), (p.eval(&e.length), e.v)] {
                let d = num_traits::Signed::abs(&(val - &self.vertex_values[v]));
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    fn shift(mut self, c: &Rat) -> Self {
        for v in self.vertex_values.iter_mut() {
            *v += c;
        }
        for p in self.edge_polys.iter_mut() {
            p.c0 += c;
        }
        self
    }
}

/// Effective resistance between two points; edge-interior points are turned
/// into vertices by subdividing before the Laplacian solve.
pub fn resistance(g: &MetrizedGraph, x: &Point, y: &Point) -> Result<Rat> {
    let x = x.normalize(g)?;
    let y = y.normalize(g)?;
    let (g1, a, y1) = match &x {
        Point::Vertex(a) => (g.clone(), *a, y.clone()),
        Point::Edge { edge, offset } => {
            let (g1, w) = g.subdivide(*edge, offset)?;
            // the old edge keeps [0, offset]; the tail is the last edge
            let y1 = match &y {
                Point::Edge { edge: f, offset: s } if f == edge && s == offset => Point::Vertex(w),
                Point::Edge { edge: f, offset: s } if f == edge && s > offset => Point::Edge {
                    edge: g1.num_edges() - 1,
                    offset: s - offset,
                },
                other => other.clone(),
            };
            (g1, w, y1)
        }
    };
    let (g2, b) = match &y1 {
        Point::Vertex(b) => (g1, *b),
        Point::Edge { edge, offset } => g1.subdivide(*edge, offset)?,
    };
    Ok(vertex_resistances(&g2)?[a][b].clone())
}

/// `μ_can`: mass `1 − ½ val(v)` at each vertex, density `1/(ℓ_e + R_e)` on
/// each edge.
pub fn canonical_measure(g: &MetrizedGraph) -> Result<Measure> {
    let k = ResistanceKernel::new(g)?;
    Ok(canonical_measure_with(&k))
}

fn canonical_measure_with(k: &ResistanceKernel) -> Measure {
    let g = k.graph();
    Measure {
        vertex_mass: (0..g.num_vertices())
            .map(|v| Rat::one() - Rat::new(g.valence(v).into(), 2.into()))
            .collect(),
        edge_density: (0..g.num_edges()).map(|e| k.kappa(e).clone()).collect(),
    }
}

fn require_genus(g: &MetrizedGraph) -> Result<u64> {
    let gh = g.total_genus();
    if gh < 2 {
        Err(Error::GenusTooSmall(gh))
    } else {
        Ok(gh)
    }
}

/// `μ_ad = (δ_K + 2 μ_can)/(2ĝ)`.
pub fn admissible_measure(g: &MetrizedGraph) -> Result<Measure> {
    let gh = require_genus(g)?;
    let k = ResistanceKernel::new(g)?;
    Ok(admissible_measure_with(&k, gh))
}

fn admissible_measure_with(k: &ResistanceKernel, gh: u64) -> Measure {
    let g = k.graph();
    let kdiv = Measure::from_divisor(g, &canonical_divisor(g));
    kdiv.plus(&canonical_measure_with(k).scale(&int(2)))
        .scale(&Rat::new(1.into(), (2 * gh as i64).into()))
}

/// The resistance potential `j(x) = ∫ r(x, ζ) dμ(ζ)` of a measure.
pub fn potential(k: &ResistanceKernel, mu: &Measure) -> PiecewisePoly {
    let g = k.graph();
    let nv = g.num_vertices();
    let at_vertex = |w: usize| -> Rat {
        let point: Rat = (0..nv)
            .map(|u| &mu.vertex_mass[u] * k.vertex_resistance(w, u))
            .sum();
        let cont: Rat = (0..g.num_edges())
            .filter(|&f| !mu.edge_density[f].is_zero())
            .map(|f| &mu.edge_density[f] * k.edge_integral_from_vertex(f, w))
            .sum();
        point + cont
    };
    let vertex_values: Vec<Rat> = (0..nv).map(at_vertex).collect();
    let total = mu.total_mass(g);
    let edge_polys = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let l = &edge.length;
            let rho = &mu.edge_density[e];
            // potential of μ with the interior of e removed, at the endpoints
            let a_u = &vertex_values[edge.u] - rho * k.edge_integral_from_vertex(e, edge.u);
            let a_v = &vertex_values[edge.v] - rho * k.edge_integral_from_vertex(e, edge.v);
            let off_mass = &total - rho * l;
            let kappa = k.kappa(e);
            let linear = Quad::new(a_u.clone(), (&a_v - &a_u) / l, Rat::zero());
            let bump = Quad::new(Rat::zero(), kappa * l, -kappa.clone()) * &off_mass;
            linear + bump + k.self_edge_integral(e) * rho
        })
        .collect();
    PiecewisePoly {
        vertex_values,
        edge_polys,
    }
}

/// Green's function data for a unit-mass measure.
#[derive(Debug, Clone)]
pub struct Green {
    kernel: ResistanceKernel,
    potential: PiecewisePoly,
    /// `∬ r dμ dμ`.
    energy: Rat,
}

impl Green {
    pub fn new(g: &MetrizedGraph, mu: &Measure) -> Result<Self> {
        Self::with_kernel(ResistanceKernel::new(g)?, mu)
    }

    pub fn with_kernel(kernel: ResistanceKernel, mu: &Measure) -> Result<Self> {
        mu.require_unit_mass(kernel.graph())?;
        let potential = potential(&kernel, mu);
        let energy = potential.integrate(kernel.graph(), mu);
        Ok(Green {
            kernel,
            potential,
            energy,
        })
    }

    pub fn graph(&self) -> &MetrizedGraph {
        self.kernel.graph()
    }

    pub fn kernel(&self) -> &ResistanceKernel {
        &self.kernel
    }

    pub fn potential(&self) -> &PiecewisePoly {
        &self.potential
    }

    pub fn energy(&self) -> &Rat {
        &self.energy
    }

    /// `g_μ(x, y)`.
    pub fn eval(&self, x: &Point, y: &Point) -> Result<Rat> {
        let g = self.graph();
        let jx = self.potential.eval(g, x)?;
        let jy = self.potential.eval(g, y)?;
        let r = self.kernel.resistance(x, y)?;
        Ok((jx + jy - r - &self.energy) / int(2))
    }

    /// `x ↦ g_μ(x, x) = j(x) − ½ c`.
    pub fn diagonal(&self) -> PiecewisePoly {
        self.potential.clone().shift(&(-&self.energy / int(2)))
    }

    /// `y ↦ ∫ g_μ(x, y) dν(x)` evaluated at `y`, for a vertex-supported `ν`.
    fn against_divisor(&self, d: &GraphDivisor, y: &Point) -> Result<Rat> {
        let mut s = Rat::zero();
        for (v, &m) in d.0.iter().enumerate() {
            if m != 0 {
                s += int(m) * self.eval(&Point::Vertex(v), y)?;
            }
        }
        Ok(s)
    }
}

/// `g_μ(x, y)`; `μ` must have total mass 1.
pub fn green(g: &MetrizedGraph, mu: &Measure, x: &Point, y: &Point) -> Result<Rat> {
    Green::new(g, mu)?.eval(x, y)
}

/// `x ↦ g_μ(x, x)`, quadratic on each edge.
pub fn green_diagonal(g: &MetrizedGraph, mu: &Measure) -> Result<PiecewisePoly> {
    Ok(Green::new(g, mu)?.diagonal())
}

/// The admissible pair `(μ_ad, g_ad)` of a graph with `ĝ ≥ 2`.
#[derive(Debug, Clone)]
pub struct Admissible {
    pub genus: u64,
    pub canonical: GraphDivisor,
    pub measure: Measure,
    pub green: Green,
}

impl Admissible {
    pub fn new(g: &MetrizedGraph) -> Result<Self> {
        let gh = require_genus(g)?;
        let kernel = ResistanceKernel::new(g)?;
        let measure = admissible_measure_with(&kernel, gh);
        let green = Green::with_kernel(kernel, &measure)?;
        Ok(Admissible {
            genus: gh,
            canonical: canonical_divisor(g),
            measure,
            green,
        })
    }

    /// `∫ g(x, x) (a μ_ad + b δ_K)`.
    fn diagonal_against(&self, a: &Rat, b: &Rat) -> Rat {
        let g = self.green.graph();
        let nu = self
            .measure
            .scale(a)
            .plus(&Measure::from_divisor(g, &self.canonical).scale(b));
        self.green.diagonal().integrate(g, &nu)
    }

    /// `ε = ∫ g(x, x) ((2ĝ − 2) μ_ad + δ_K)`.
    pub fn epsilon(&self) -> Rat {
        self.diagonal_against(&int(2 * self.genus as i64 - 2), &Rat::one())
    }

    /// `φ = −δ/4 + ¼ ∫ g(x, x) ((10ĝ + 2) μ_ad − δ_K)`.
    pub fn phi(&self) -> Rat {
        let integral = self.diagonal_against(&int(10 * self.genus as i64 + 2), &int(-1));
        (integral - delta(self.green.graph())) / int(4)
    }
}

pub fn epsilon(g: &MetrizedGraph) -> Result<Rat> {
    Ok(Admissible::new(g)?.epsilon())
}

pub fn phi(g: &MetrizedGraph) -> Result<Rat> {
    Ok(Admissible::new(g)?.phi())
}

/// Total edge length.
pub fn delta(g: &MetrizedGraph) -> Rat {
    g.total_length()
}

/// Spread of `y ↦ g_μ(K, y) + g_μ(y, y)` over vertices and edge midpoints:
/// `max_y |h(y) − c|` for the best constant `c`, i.e. `(max h − min h)/2`.
/// Zero exactly when `μ` is admissible (on the sampled points).
pub fn verify_admissible(g: &MetrizedGraph, mu: &Measure) -> Result<Rat> {
    let green = Green::new(g, mu)?;
    let k = canonical_divisor(g);
    let diag = green.diagonal();
    let samples: Vec<Point> = (0..g.num_vertices())
        .map(Point::Vertex)
        .chain((0..g.num_edges()).map(|e| Point::midpoint(g, e)))
        .collect();
    let mut values = Vec::with_capacity(samples.len());
    for y in &samples {
        values.push(green.against_divisor(&k, y)? + diag.eval(g, y)?);
    }
    let max = values.iter().max().cloned().unwrap_or_default();
    let min = values.iter().min().cloned().unwrap_or_default();
    Ok((max - min) / int(2))
}
