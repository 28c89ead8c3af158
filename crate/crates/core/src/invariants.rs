//! Scalar invariant algebra at a place: `d` from thickness-weighted node
//! counts, `χ` from `(d, ε, δ)`, Yamaki's lower bounds, the genus-2 table,
//! archimedean and pairing-sum plumbing, and global aggregation.
//!
//! Everything non-archimedean is exact and in ν units; real numbers enter
//! only through `log Nv`, `log‖Δ_g‖`, `δ_F` and `log|2|_v`.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metgraph::MetrizedGraph;
use crate::numeric::{int, rat, rat_str, rat_to_f64, Rat};

/// Thickness-weighted counts of singular points: `ξ0`, `ξ_j` for
/// `j = 1..⌊(g−1)/2⌋` and `δ_i` for `i = 1..⌊g/2⌋`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeCounts {
    genus: u32,
    xi0: Rat,
    xi: Vec<Rat>,
    delta: Vec<Rat>,
}

impl NodeCounts {
    pub fn new(genus: u32, xi0: Rat, xi: Vec<Rat>, delta: Vec<Rat>) -> Result<Self> {
        if genus < 2 {
            return Err(Error::InvalidConfig(format!("genus {genus} < 2")));
        }
        let (nx, nd) = Self::lengths(genus);
        if xi.len() != nx || delta.len() != nd {
            return Err(Error::LengthMismatch(format!(
                "genus {genus} needs {nx} xi and {nd} delta entries, got {} and {}",
                xi.len(),
                delta.len()
            )));
        }
        if std::iter::once(&xi0)
            .chain(&xi)
            .chain(&delta)
            .any(|c| c.is_negative())
        {
            return Err(Error::InvalidConfig("negative node count".into()));
        }
        Ok(NodeCounts {
            genus,
            xi0,
            xi,
            delta,
        })
    }

    pub fn zero(genus: u32) -> Result<Self> {
        let (nx, nd) = Self::lengths(genus);
        Self::new(
            genus,
            Rat::zero(),
            vec![Rat::zero(); nx],
            vec![Rat::zero(); nd],
        )
    }

    /// `(⌊(g−1)/2⌋, ⌊g/2⌋)`.
    pub fn lengths(genus: u32) -> (usize, usize) {
        (genus.saturating_sub(1) as usize / 2, genus as usize / 2)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn xi0(&self) -> &Rat {
        &self.xi0
    }

    /// `ξ_j`, 1-based.
    pub fn xi(&self, j: usize) -> &Rat {
        &self.xi[j - 1]
    }

    /// `δ_i`, 1-based.
    pub fn delta(&self, i: usize) -> &Rat {
        &self.delta[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.xi0.is_zero()
            && self.xi.iter().all(Zero::is_zero)
            && self.delta.iter().all(Zero::is_zero)
    }

    /// Total thickness `Σ ξ + Σ δ`.
    pub fn total(&self) -> Rat {
        &self.xi0 + self.xi.iter().sum::<Rat>() + self.delta.iter().sum::<Rat>()
    }
}

/// `d = g ξ0 + Σ_j 2(j+1)(g−j) ξ_j + Σ_i 4i(g−i) δ_i`.
pub fn d_from_counts(c: &NodeCounts) -> Rat {
    let g = c.genus as i64;
    let xi: Rat =
        c.xi.iter()
            .enumerate()
            .map(|(j0, x)| {
                let j = j0 as i64 + 1;
                int(2 * (j + 1) * (g - j)) * x
            })
            .sum();
    let de: Rat = c
        .delta
        .iter()
        .enumerate()
        .map(|(i0, x)| {
            let i = i0 as i64 + 1;
            int(4 * i * (g - i)) * x
        })
        .sum();
    int(g) * &c.xi0 + xi + de
}

/// `χ = (3d − (2g+1)(ε + δ))/(2g − 2)`.
pub fn chi_nonarch(g: u32, d: &Rat, eps: &Rat, delta: &Rat) -> Rat {
    let g = g as i64;
    (int(3) * d - int(2 * g + 1) * (eps + delta)) / int(2 * g - 2)
}

/// Yamaki's lower bound for `χ`; stated only for `g ≥ 3`.
pub fn yamaki_bound(c: &NodeCounts) -> Result<Rat> {
    let g = c.genus as i64;
    if g < 3 {
        return Err(Error::BoundNotStated(c.genus));
    }
    let xi0 = rat(2 * g - 5, 24 * g) * &c.xi0;
    let xi: Rat =
        c.xi.iter()
            .enumerate()
            .map(|(j0, x)| {
                let j = j0 as i64 + 1;
                let coeff = if g >= 5 {
                    rat(3 * j * (g - 1 - j) - g - 2, 3 * g)
                } else {
                    rat(2 * j * (g - 1 - j) - 1, 2 * g)
                };
                coeff * x
            })
            .sum();
    let de: Rat = c
        .delta
        .iter()
        .enumerate()
        .map(|(i0, x)| {
            let i = i0 as i64 + 1;
            rat(2 * i * (g - i), g) * x
        })
        .sum();
    Ok(xi0 + xi + de)
}

/// Archimedean inputs; computing them is out of scope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArchInput {
    genus: u32,
    /// `log‖Δ_g‖`.
    pub log_norm_delta: f64,
    /// Faltings' `δ_F`.
    pub delta_faltings: f64,
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

impl ArchInput {
    pub fn new(genus: u32, log_norm_delta: f64, delta_faltings: f64) -> Result<Self> {
        if genus < 2 {
            return Err(Error::InvalidConfig(format!("genus {genus} < 2")));
        }
        Ok(ArchInput {
            genus,
            log_norm_delta,
            delta_faltings,
        })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// `n = C(2g, g+1)`.
    pub fn n(&self) -> u64 {
        let g = self.genus as u64;
        binomial(2 * g, g + 1)
    }

    /// `r = C(2g+1, g+1)`.
    pub fn r(&self) -> u64 {
        let g = self.genus as u64;
        binomial(2 * g + 1, g + 1)
    }

    /// `χ = −(8g(2g+1)/(2g−2)) log 2π − (3g/((2g−2)n)) log‖Δ_g‖ − ((2g+1)/(2g−2)) δ_F`.
    pub fn chi_arch(&self) -> f64 {
        let g = self.genus as f64;
        let n = self.n() as f64;
        let m = 2.0 * g - 2.0;
        -(8.0 * g * (2.0 * g + 1.0) / m) * (2.0 * std::f64::consts::PI).ln()
            - (3.0 * g / (m * n)) * self.log_norm_delta
            - ((2.0 * g + 1.0) / m) * self.delta_faltings
    }
}

pub fn chi_arch(a: &ArchInput) -> f64 {
    a.chi_arch()
}

/// `χ = −2g (log|2|_v + Σ_{k≠i} (w_i, w_k)_a)`, for a caller-supplied pairing sum.
pub fn chi_theorem_b(g: u32, log2v: f64, pairing_sum: f64) -> f64 {
    -2.0 * g as f64 * (log2v + pairing_sum)
}

/// Largest deviation between the `χ` values obtained from the pairing
/// sums of different base points `i`; zero for consistent pairings.
pub fn theorem_b_spread(g: u32, log2v: f64, pairing_sums: &[f64]) -> f64 {
    let vals: Vec<f64> = pairing_sums
        .iter()
        .map(|s| chi_theorem_b(g, log2v, *s))
        .collect();
    let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    if vals.is_empty() {
        0.0
    } else {
        max - min
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Genus2Type {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
}

impl Genus2Type {
    pub const ALL: [Genus2Type; 7] = [
        Genus2Type::I,
        Genus2Type::II,
        Genus2Type::III,
        Genus2Type::IV,
        Genus2Type::V,
        Genus2Type::VI,
        Genus2Type::VII,
    ];

    pub fn arity(self) -> usize {
        match self {
            Genus2Type::I => 0,
            Genus2Type::II | Genus2Type::III => 1,
            Genus2Type::IV | Genus2Type::V => 2,
            Genus2Type::VI | Genus2Type::VII => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Genus2Type::I => "I",
            Genus2Type::II => "II",
            Genus2Type::III => "III",
            Genus2Type::IV => "IV",
            Genus2Type::V => "V",
            Genus2Type::VI => "VI",
            Genus2Type::VII => "VII",
        }
    }

    fn check_arity(self, params: &[Rat]) -> Result<()> {
        if params.len() != self.arity() {
            return Err(Error::Arity {
                kind: self.name().to_string(),
                expected: self.arity(),
                got: params.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Genus2Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Genus2Type {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Genus2Type::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown genus-2 type {s:?}")))
    }
}

/// One row of the genus-2 table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Genus2Row {
    #[serde(with = "rat_str")]
    pub d_half: Rat,
    #[serde(with = "rat_str")]
    pub delta: Rat,
    #[serde(with = "rat_str")]
    pub epsilon: Rat,
    #[serde(with = "rat_str")]
    pub chi: Rat,
}

impl Genus2Row {
    pub fn d(&self) -> Rat {
        &self.d_half * int(2)
    }
}

pub fn genus2_row(ty: Genus2Type, params: &[Rat]) -> Result<Genus2Row> {
    ty.check_arity(params)?;
    let p = |i: usize| params[i].clone();
    let sixth = rat(1, 6);
    let twelfth = rat(1, 12);
    let (d_half, delta, epsilon, chi) = match ty {
        Genus2Type::I => (Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()),
        Genus2Type::II => {
            let a = p(0);
            (int(2) * &a, a.clone(), a.clone(), a)
        }
        Genus2Type::III => {
            let a = p(0);
            (a.clone(), a.clone(), &a * &sixth, &a * &twelfth)
        }
        Genus2Type::IV => {
            let (a, b) = (p(0), p(1));
            (
                int(2) * &a + &b,
                &a + &b,
                &a + &b * &sixth,
                &a + &b * &twelfth,
            )
        }
        Genus2Type::V => {
            let s = p(0) + p(1);
            (s.clone(), s.clone(), &s * &sixth, &s * &twelfth)
        }
        Genus2Type::VI => {
            let (a, bc) = (p(0), p(1) + p(2));
            (
                int(2) * &a + &bc,
                &a + &bc,
                &a + &bc * &sixth,
                &a + &bc * &twelfth,
            )
        }
        Genus2Type::VII => {
            let (a, b, c) = (p(0), p(1), p(2));
            let s = &a + &b + &c;
            let den = &a * &b + &b * &c + &c * &a;
            let h = if den.is_zero() {
                Rat::zero()
            } else {
                &a * &b * &c / den
            };
            (
                s.clone(),
                s.clone(),
                (&s + &h) * &sixth,
                &s * &twelfth - rat(5, 12) * h,
            )
        }
    };
    Ok(Genus2Row {
        d_half,
        delta,
        epsilon,
        chi,
    })
}

/// Node counts of a genus-2 type; every row is `d = 2 ξ0 + 4 δ1`.
pub fn genus2_counts(ty: Genus2Type, params: &[Rat]) -> Result<NodeCounts> {
    ty.check_arity(params)?;
    let z = Rat::zero;
    let (xi0, d1) = match ty {
        Genus2Type::I => (z(), z()),
        Genus2Type::II => (z(), params[0].clone()),
        Genus2Type::III => (params[0].clone(), z()),
        Genus2Type::IV => (params[1].clone(), params[0].clone()),
        Genus2Type::V => (&params[0] + &params[1], z()),
        Genus2Type::VI => (&params[1] + &params[2], params[0].clone()),
        Genus2Type::VII => (params.iter().sum(), z()),
    };
    NodeCounts::new(2, xi0, vec![], vec![d1])
}

/// The reduction graph of a genus-2 type.
pub fn genus2_graph(ty: Genus2Type, params: &[Rat]) -> Result<MetrizedGraph> {
    ty.check_arity(params)?;
    let p = |i: usize| params[i].clone();
    match ty {
        Genus2Type::I => MetrizedGraph::build(&[("v", 2)], &[]),
        Genus2Type::II => MetrizedGraph::build(&[("x", 1), ("y", 1)], &[("x", "y", p(0))]),
        Genus2Type::III => MetrizedGraph::build(&[("v", 1)], &[("v", "v", p(0))]),
        Genus2Type::IV => {
            MetrizedGraph::build(&[("x", 1), ("y", 0)], &[("x", "y", p(0)), ("y", "y", p(1))])
        }
        Genus2Type::V => MetrizedGraph::build(&[("v", 0)], &[("v", "v", p(0)), ("v", "v", p(1))]),
        Genus2Type::VI => MetrizedGraph::build(
            &[("x", 1), ("y", 0), ("z", 0)],
            &[("x", "y", p(0)), ("y", "z", p(1)), ("y", "z", p(2))],
        ),
        Genus2Type::VII => MetrizedGraph::build(
            &[("p", 0), ("q", 0)],
            &[("p", "q", p(0)), ("p", "q", p(1)), ("p", "q", p(2))],
        ),
    }
}

/// Node counts read off a reduction graph. Bridges go to `δ_i` with `i` the
/// smaller side genus; other edges use their subtype, defaulting to `ξ0`
/// (reported in the returned warnings). Nodes of subtype `j ≥ 1` come in
/// conjugate pairs of equal thickness and a pair counts once, so each such
/// edge contributes half its length to `ξ_j`.
pub fn counts_from_graph(g: &MetrizedGraph) -> Result<(NodeCounts, Vec<String>)> {
    let genus = u32::try_from(g.total_genus())
        .map_err(|_| Error::InvalidGraph("genus out of range".into()))?;
    let mut counts = NodeCounts::zero(genus)?;
    let mut warnings = Vec::new();
    for (e, edge) in g.edges().iter().enumerate() {
        if let Some((a, b)) = g.bridge_split(e) {
            let i = a.min(b) as usize;
            if i == 0 {
                return Err(Error::InvalidGraph(format!(
                    "bridge {e} separates a genus-0 part"
                )));
            }
            counts.delta[i - 1] += &edge.length;
            continue;
        }
        match edge.subtype {
            None => {
                warnings.push(format!("edge {e}: no subtype given, counted in xi0"));
                counts.xi0 += &edge.length;
            }
            Some(0) => counts.xi0 += &edge.length,
            Some(j) => {
                let j = j as usize;
                if j > counts.xi.len() {
                    return Err(Error::InvalidGraph(format!(
                        "edge {e}: subtype {j} exceeds {} for genus {genus}",
                        counts.xi.len()
                    )));
                }
                counts.xi[j - 1] += &edge.length / int(2);
            }
        }
    }
    Ok((counts, warnings))
}

/// Place-wise invariants with their `log Nv` weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaceReport {
    pub label: String,
    pub genus: u32,
    #[serde(rename = "logNv", with = "decimal_str")]
    pub log_nv: f64,
    #[serde(with = "rat_str")]
    pub d: Rat,
    #[serde(with = "rat_str")]
    pub epsilon: Rat,
    #[serde(with = "rat_str")]
    pub delta: Rat,
    #[serde(default, with = "opt_rat_str", skip_serializing_if = "Option::is_none")]
    pub phi: Option<Rat>,
    #[serde(with = "rat_str")]
    pub chi: Rat,
}

impl PlaceReport {
    /// Builds a report with `χ` computed from `(d, ε, δ)`.
    pub fn from_invariants(
        label: impl Into<String>,
        genus: u32,
        log_nv: f64,
        d: Rat,
        epsilon: Rat,
        delta: Rat,
    ) -> Self {
        let chi = chi_nonarch(genus, &d, &epsilon, &delta);
        PlaceReport {
            label: label.into(),
            genus,
            log_nv,
            d,
            epsilon,
            delta,
            phi: None,
            chi,
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.genus < 2 {
            return Err(Error::InvalidConfig(format!(
                "place {}: genus < 2",
                self.label
            )));
        }
        if !(self.log_nv.is_finite() && self.log_nv > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "place {}: logNv must be positive",
                self.label
            )));
        }
        let expect = chi_nonarch(self.genus, &self.d, &self.epsilon, &self.delta);
        if expect != self.chi {
            return Err(Error::InvalidConfig(format!(
                "place {}: chi {} but (d, eps, delta) give {}",
                self.label, self.chi, expect
            )));
        }
        Ok(())
    }
}

/// `(ω, ω)_a = ((2g−2)/(2g+1)) Σ_v χ_v log Nv`.
pub fn aggregate_global(places: &[PlaceReport]) -> Result<f64> {
    let Some(first) = places.first() else {
        return Ok(0.0);
    };
    let g = first.genus;
    let mut sum = 0.0;
    for p in places {
        if p.genus != g {
            return Err(Error::MixedGenus(g, p.genus));
        }
        p.check()?;
        sum += rat_to_f64(&p.chi) * p.log_nv;
    }
    let g = g as f64;
    Ok((2.0 * g - 2.0) / (2.0 * g + 1.0) * sum)
}

/// Residuals of the Noether-type relations, all in `log Nv` units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NoetherReport {
    /// `Σ d − (8g+4) deg λ`.
    #[serde(with = "rat_str")]
    pub discriminant_residual: Rat,
    /// `(ω, ω) + Σ δ − 12 deg λ`.
    #[serde(with = "rat_str")]
    pub noether_residual: Rat,
    /// `(ω, ω) − Σ ε`.
    #[serde(with = "rat_str")]
    pub omega_a: Rat,
    /// `(3 Σ d − (2g+1)(Σ ε + Σ δ))/(2g+1)`, i.e. `((2g−2)/(2g+1)) Σ χ`.
    #[serde(with = "rat_str")]
    pub omega_a_from_chi: Rat,
    /// Both residuals vanish and the two values of `(ω, ω)_a` agree.
    pub consistent: bool,
}

pub fn noether_consistency(
    g: u32,
    deg_lambda: &Rat,
    omega_sq: &Rat,
    sum_d: &Rat,
    sum_delta: &Rat,
    sum_eps: &Rat,
) -> NoetherReport {
    let gi = g as i64;
    let discriminant_residual = sum_d - int(8 * gi + 4) * deg_lambda;
    let noether_residual = omega_sq + sum_delta - int(12) * deg_lambda;
    let omega_a = omega_sq - sum_eps;
    let omega_a_from_chi =
        (int(3) * sum_d - int(2 * gi + 1) * (sum_eps + sum_delta)) / int(2 * gi + 1);
    let consistent = discriminant_residual.is_zero()
        && noether_residual.is_zero()
        && omega_a == omega_a_from_chi;
    NoetherReport {
        discriminant_residual,
        noether_residual,
        omega_a,
        omega_a_from_chi,
        consistent,
    }
}

mod decimal_str {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let s = String::deserialize(d)?;
        s.trim().parse().map_err(D::Error::custom)
    }
}

mod opt_rat_str {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use crate::numeric::{format_rat, parse_rat, Rat};

    pub fn serialize<S: Serializer>(x: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(q) => s.serialize_str(&format_rat(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rat(&s).map_err(D::Error::custom))
            .transpose()
    }
}
