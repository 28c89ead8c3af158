//! Built-in verification suites. Each one is deterministic in its seed.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::gen;
use crate::clustertree::{build_tree, check_kausz_form, pairing_combination_in};
use crate::error::{Error, Result};
use crate::invariants::{
    chi_nonarch, counts_from_graph, d_from_counts, genus2_graph, genus2_row, Genus2Type,
};
use crate::metgraph::{
    admissible_measure, canonical_measure, delta, verify_admissible, Admissible, MetrizedGraph,
    Point, ResistanceKernel,
};
use crate::numeric::{int, rat, Prime, Rat};
use crate::symroots::{
    cross_ratio, pairing_crossratio, pairing_diff_thm_c, sym_discriminant, symroot_pow,
    symroot_val, RootConfig, Triple,
};

pub const SUITES: [&str; 5] = [
    "identities",
    "cluster-vs-symroots",
    "genus2-table",
    "phi-equals-chi",
    "subdivision",
];

/// Outcome of one suite run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
    /// Skip reason to count.
    pub skip_reasons: BTreeMap<String, u64>,
    /// First few failure messages.
    pub failures: Vec<String>,
}

const MAX_FAILURES: usize = 20;

impl SuiteReport {
    fn new(suite: &str, seed: u64) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            seed,
            ..Default::default()
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(what());
            }
        }
    }

    fn check_eq(&mut self, a: &Rat, b: &Rat, what: impl FnOnce() -> String) {
        self.check(a == b, || format!("{}: {a} != {b}", what()));
    }

    fn error(&mut self, e: Error, what: impl FnOnce() -> String) {
        self.check(false, || format!("{}: {e}", what()));
    }

    fn skip(&mut self, reason: &str) {
        self.skipped += 1;
        *self.skip_reasons.entry(reason.to_string()).or_default() += 1;
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Default size per suite (configs or graphs).
pub fn default_size(suite: &str) -> usize {
    match suite {
        "identities" => 100,
        "cluster-vs-symroots" => 200,
        "subdivision" => 40,
        _ => 3,
    }
}

pub fn verify_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    verify_suite_sized(name, seed, default_size(name))
}

/// Runs a suite with `size` random cases (per genus for `identities`; extra
/// random parameter tuples per type for the table suites).
pub fn verify_suite_sized(name: &str, seed: u64, size: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SuiteReport::new(name, seed);
    match name {
        "identities" => {
            for g in 2..=4 {
                for _ in 0..size {
                    let p = *[3u64, 5, 7].choose(&mut rng).expect("non-empty");
                    let cfg = gen::random_config(&mut rng, g, p);
                    identities_case(&mut rng, &mut rep, &cfg, Prime::new(p)?);
                }
            }
        }
        "cluster-vs-symroots" => cluster_suite(&mut rng, &mut rep, size)?,
        "genus2-table" => {
            for (ty, params) in genus2_cases(&mut rng, size) {
                genus2_case(&mut rep, ty, &params);
            }
        }
        "phi-equals-chi" => {
            for (ty, params) in genus2_cases(&mut rng, size) {
                phi_case(&mut rep, ty, &params);
            }
            for (name, g) in genus3_cases()? {
                phi_graph_case(&mut rep, &name, &g);
            }
        }
        "subdivision" => {
            let mut graphs: Vec<MetrizedGraph> = genus2_cases(&mut rng, 0)
                .into_iter()
                .filter(|(ty, p)| *ty != Genus2Type::I && p.iter().all(|x| x <= &int(2)))
                .map(|(ty, p)| genus2_graph(ty, &p))
                .collect::<Result<_>>()?;
            graphs.extend((0..size).map(|_| gen::random_graph(&mut rng)));
            for g in &graphs {
                structural_case(&mut rng, &mut rep, g);
            }
        }
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown suite {other:?}; expected one of {}",
                SUITES.join(", ")
            )))
        }
    }
    Ok(rep)
}

fn random_quadruple<R: Rng>(rng: &mut R, n: usize) -> (usize, usize, usize, usize) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    (idx[0], idx[1], idx[2], idx[3])
}

/// Exact identities among symmetric roots and discriminants of one config.
pub fn identities_case<R: Rng>(rng: &mut R, rep: &mut SuiteReport, cfg: &RootConfig, p: Prime) {
    let n = cfg.len();
    let g2 = 2 * cfg.genus() as i32;
    let label = |s: &str| {
        format!(
            "{s} on {:?}",
            cfg.roots()
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
        )
    };

    // symmetric-root table for every ordered triple
    let mut pow = BTreeMap::new();
    for t in cfg.triples() {
        match symroot_pow(cfg, t) {
            Ok(v) => {
                pow.insert((t.i, t.j, t.k), v);
            }
            Err(e) => return rep.error(e, || label("symroot_pow")),
        }
    }
    let l = |i: usize, j: usize, k: usize| &pow[&(i, j, k)];

    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let cyc = l(i, j, k) * l(j, k, i) * l(k, i, j);
                rep.check_eq(&cyc, &int(-1), || label(&format!("cocycle ({i},{j},{k})")));
                rep.check((l(i, j, k) * l(j, i, k)).is_one(), || {
                    label(&format!("antisymmetry ({i},{j},{k})"))
                });
            }
        }
    }

    // discriminants
    let mut disc = vec![vec![Rat::zero(); n]; n];
    for (i, row) in disc.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            if i != j {
                match sym_discriminant(cfg, i, j) {
                    Ok(d) => *slot = d,
                    Err(e) => return rep.error(e, || label("sym_discriminant")),
                }
            }
        }
    }
    for (i, row) in disc.iter().enumerate() {
        let prod: Rat = row
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .fold(Rat::one(), |acc, (_, d)| acc * d);
        rep.check_eq(&prod, &int(1), || label(&format!("product of d_{i}k")));
    }
    // one random k per pair i < j
    for i in 0..n {
        for j in i + 1..n {
            let k = loop {
                let k = rng.gen_range(0..n);
                if k != i && k != j {
                    break k;
                }
            };
            let t = Triple::new(i, j, k);
            let lhs = &disc[t.i][t.k] / &disc[t.j][t.k];
            let rhs = -num_traits::pow::Pow::pow(l(t.i, t.j, t.k), g2 + 1);
            rep.check_eq(&lhs, &rhs, || {
                label(&format!("discriminant ratio {}", t.key()))
            });
        }
    }

    // cross-ratio quotient and pairing difference, on a sample of 4-tuples
    for _ in 0..8 {
        let (i, j, k, r) = random_quadruple(rng, n);
        let mu = match cross_ratio(cfg, i, j, k, r) {
            Ok(m) => m,
            Err(e) => return rep.error(e, || label("cross_ratio")),
        };
        let lhs = l(i, j, k) / l(i, j, r);
        rep.check_eq(&lhs, &num_traits::pow::Pow::pow(&mu, g2), || {
            label(&format!("cross-ratio quotient ({i},{j},{k},{r})"))
        });
        let diff = pairing_diff_thm_c(cfg, p, Triple::new(i, j, k))
            .and_then(|a| Ok(a - pairing_diff_thm_c(cfg, p, Triple::new(i, j, r))?));
        match (diff, pairing_crossratio(cfg, p, i, j, k, r)) {
            (Ok(d), Ok(c)) => rep.check_eq(&c, &d, || {
                label(&format!("pairing cross-ratio ({i},{j},{k},{r})"))
            }),
            (Err(e), _) | (_, Err(e)) => rep.error(e, || label("pairing")),
        }
        let t = Triple::new(i, j, k);
        match (
            pairing_diff_thm_c(cfg, p, t),
            pairing_diff_thm_c(cfg, p, t.swapped()),
        ) {
            (Ok(a), Ok(b)) => rep.check_eq(&a, &-b, || {
                label(&format!("pairing antisymmetry {}", t.key()))
            }),
            (Err(e), _) | (_, Err(e)) => rep.error(e, || label("pairing")),
        }
    }

    // Möbius invariance
    for _ in 0..5 {
        let m = gen::random_moebius(rng);
        let moved = m.apply_config(cfg);
        for _ in 0..4 {
            let (i, j, k, _) = random_quadruple(rng, n);
            match symroot_pow(&moved, Triple::new(i, j, k)) {
                Ok(v) => rep.check_eq(&v, l(i, j, k), || {
                    label(&format!("Moebius invariance ({i},{j},{k})"))
                }),
                Err(e) => rep.error(e, || label("Moebius image")),
            }
        }
    }
}

fn cluster_suite<R: Rng>(rng: &mut R, rep: &mut SuiteReport, size: usize) -> Result<()> {
    // worked vector first
    let worked = RootConfig::from_finite(2, [0, 9, 1, 10, 2, 11].map(int))?;
    cluster_case(rep, &worked, Prime::new(3)?);
    for idx in 0..size {
        let p = [3u64, 5, 7][idx % 3];
        let g = [2u32, 3, 4][(idx / 3) % 3];
        let cfg = if idx % 10 == 9 {
            // unconstrained input: usually violates the normal form
            gen::random_config(rng, g, p)
        } else {
            gen::kausz_config(rng, g, p)
        };
        cluster_case(rep, &cfg, Prime::new(p)?);
    }
    Ok(())
}

/// Compares the tree-side combination with `2g(g−1) ν(ℓ)` on every triple;
/// configs outside the normal form are skipped.
pub fn cluster_case(rep: &mut SuiteReport, cfg: &RootConfig, p: Prime) {
    if !check_kausz_form(cfg, p).passed() {
        return rep.skip("precondition: not in Kausz normal form");
    }
    let tree = match build_tree(cfg, p) {
        Ok(t) => t,
        Err(e) => return rep.error(e, || "build_tree".into()),
    };
    let g = cfg.genus() as i64;
    for t in cfg.triples() {
        let lhs = pairing_combination_in(&tree, t);
        let rhs = symroot_val(cfg, p, t).map(|v| int(2 * g * (g - 1)) * v);
        match (lhs, rhs) {
            (Ok(a), Ok(b)) => rep.check_eq(&a, &b, || {
                format!(
                    "combination {} at p={} on {:?}",
                    t.key(),
                    p.get(),
                    cfg.roots()
                )
            }),
            (Err(e), _) | (_, Err(e)) => rep.error(e, || format!("triple {}", t.key())),
        }
    }
}

/// Every type with parameters in `{1,2,3}^arity`, plus `extra` random
/// rational tuples per non-trivial type.
pub fn genus2_cases<R: Rng>(rng: &mut R, extra: usize) -> Vec<(Genus2Type, Vec<Rat>)> {
    let mut out = Vec::new();
    for ty in Genus2Type::ALL {
        let k = ty.arity();
        for code in 0..3usize.pow(k as u32) {
            let params = (0..k)
                .map(|pos| int((code / 3usize.pow(pos as u32) % 3) as i64 + 1))
                .collect();
            out.push((ty, params));
        }
        if k > 0 {
            for _ in 0..extra {
                out.push((ty, (0..k).map(|_| gen::random_length(rng)).collect()));
            }
        }
    }
    out
}

fn case_label(ty: Genus2Type, params: &[Rat]) -> String {
    let ps: Vec<String> = params.iter().map(|p| p.to_string()).collect();
    format!("{ty}({})", ps.join(","))
}

/// Table row against the mapped graph: ε, δ, d, internal identity,
/// positivity and the admissibility defect.
pub fn genus2_case(rep: &mut SuiteReport, ty: Genus2Type, params: &[Rat]) {
    let name = case_label(ty, params);
    let (row, graph) = match (genus2_row(ty, params), genus2_graph(ty, params)) {
        (Ok(r), Ok(g)) => (r, g),
        (Err(e), _) | (_, Err(e)) => return rep.error(e, || name.clone()),
    };
    rep.check_eq(
        &(int(2) * &row.chi),
        &(int(3) * row.d() - int(5) * (&row.epsilon + &row.delta)),
        || format!("{name}: table identity"),
    );
    rep.check_eq(&delta(&graph), &row.delta, || format!("{name}: delta"));
    match counts_from_graph(&graph) {
        Ok((c, _)) => rep.check_eq(&d_from_counts(&c), &row.d(), || format!("{name}: d")),
        Err(e) => rep.error(e, || format!("{name}: counts")),
    }
    if params.iter().any(|x| x.is_positive()) {
        rep.check(row.chi.is_positive(), || {
            format!("{name}: chi {} not positive", row.chi)
        });
    }
    if ty == Genus2Type::I {
        return;
    }
    match Admissible::new(&graph) {
        Ok(ad) => rep.check_eq(&ad.epsilon(), &row.epsilon, || format!("{name}: epsilon")),
        Err(e) => rep.error(e, || name.clone()),
    }
    match admissible_measure(&graph).and_then(|m| verify_admissible(&graph, &m)) {
        Ok(defect) => rep.check_eq(&defect, &Rat::zero(), || {
            format!("{name}: admissibility defect")
        }),
        Err(e) => rep.error(e, || name.clone()),
    }
}

/// `φ` on the mapped graph against the table `χ`, and `χ` recomputed from
/// graph-side `(d, ε, δ)`.
pub fn phi_case(rep: &mut SuiteReport, ty: Genus2Type, params: &[Rat]) {
    let name = case_label(ty, params);
    let (row, graph) = match (genus2_row(ty, params), genus2_graph(ty, params)) {
        (Ok(r), Ok(g)) => (r, g),
        (Err(e), _) | (_, Err(e)) => return rep.error(e, || name.clone()),
    };
    let ad = match Admissible::new(&graph) {
        Ok(a) => a,
        Err(e) => return rep.error(e, || name.clone()),
    };
    rep.check_eq(&ad.phi(), &row.chi, || format!("{name}: phi vs chi"));
    let chi = chi_nonarch(2, &row.d(), &ad.epsilon(), &delta(&graph));
    rep.check_eq(&chi, &row.chi, || {
        format!("{name}: chi from graph invariants")
    });
}

/// Genus-3 hyperelliptic graphs with lengths in `{1,2,3}`: a chain of three
/// elliptic vertices, two elliptic vertices joined by a conjugate pair of
/// subtype-1 nodes, a loop at a genus-2 vertex, and a genus-2 vertex bridged
/// to an elliptic one.
pub fn genus3_cases() -> Result<Vec<(String, MetrizedGraph)>> {
    let mut out = Vec::new();
    for a in 1..=3 {
        let la = int(a);
        for b in 1..=3 {
            out.push((
                format!("chain({a},{b})"),
                MetrizedGraph::build(
                    &[("x", 1), ("y", 1), ("z", 1)],
                    &[("x", "y", la.clone()), ("y", "z", int(b))],
                )?,
            ));
        }
        let mut banana = MetrizedGraph::build(
            &[("x", 1), ("y", 1)],
            &[("x", "y", la.clone()), ("x", "y", la.clone())],
        )?
        .to_file();
        for e in banana.edges.iter_mut() {
            e.subtype = Some(1);
        }
        out.push((format!("banana({a})"), MetrizedGraph::from_file(banana)?));
        out.push((
            format!("loop({a})"),
            MetrizedGraph::build(&[("v", 2)], &[("v", "v", la.clone())])?,
        ));
        out.push((
            format!("bridge({a})"),
            MetrizedGraph::build(&[("x", 2), ("y", 1)], &[("x", "y", la)])?,
        ));
    }
    Ok(out)
}

/// `φ` against `χ` computed from the graph's node counts, `ε` and `δ`.
pub fn phi_graph_case(rep: &mut SuiteReport, name: &str, g: &MetrizedGraph) {
    let ad = match Admissible::new(g) {
        Ok(a) => a,
        Err(e) => return rep.error(e, || name.to_string()),
    };
    match counts_from_graph(g) {
        Ok((c, _)) => {
            let chi = chi_nonarch(c.genus(), &d_from_counts(&c), &ad.epsilon(), &delta(g));
            rep.check_eq(&ad.phi(), &chi, || format!("{name}: phi vs chi"));
        }
        Err(e) => rep.error(e, || name.to_string()),
    }
}

/// Subdivision invariance and homogeneity of `(ε, φ, δ)`, unit masses and
/// resistance invariance under subdivision.
pub fn structural_case<R: Rng>(rng: &mut R, rep: &mut SuiteReport, g: &MetrizedGraph) {
    let label = || {
        format!(
            "{:?}",
            g.to_file()
                .edges
                .iter()
                .map(|e| format!("{}-{}:{}", e.u, e.v, e.length))
                .collect::<Vec<_>>()
        )
    };
    let ad = match Admissible::new(g) {
        Ok(a) => a,
        Err(e) => return rep.error(e, label),
    };
    let (eps, phi, del) = (ad.epsilon(), ad.phi(), delta(g));

    match canonical_measure(g) {
        Ok(m) => rep.check_eq(&m.total_mass(g), &int(1), || {
            format!("{}: canonical mass", label())
        }),
        Err(e) => rep.error(e, label),
    }
    rep.check_eq(&ad.measure.total_mass(g), &int(1), || {
        format!("{}: admissible mass", label())
    });
    match verify_admissible(g, &ad.measure) {
        Ok(d) => rep.check_eq(&d, &Rat::zero(), || {
            format!("{}: admissibility defect", label())
        }),
        Err(e) => rep.error(e, label),
    }

    if g.num_edges() > 0 {
        let e = rng.gen_range(0..g.num_edges());
        let len = g.edges()[e].length.clone();
        let off = gen::random_offset(rng, &len);
        match g
            .subdivide(e, &off)
            .and_then(|(s, w)| Ok((Admissible::new(&s)?, s, w)))
        {
            Ok((sad, s, w)) => {
                rep.check_eq(&sad.epsilon(), &eps, || {
                    format!("{}: epsilon after subdivision", label())
                });
                rep.check_eq(&sad.phi(), &phi, || {
                    format!("{}: phi after subdivision", label())
                });
                rep.check_eq(&delta(&s), &del, || {
                    format!("{}: delta after subdivision", label())
                });
                // the admissible measure is unchanged as a measure
                let same = sad.measure.vertex_mass[w].is_zero()
                    && (0..g.num_vertices())
                        .all(|v| sad.measure.vertex_mass[v] == ad.measure.vertex_mass[v])
                    && sad.measure.edge_density[e] == ad.measure.edge_density[e]
                    && sad.measure.edge_density[s.num_edges() - 1] == ad.measure.edge_density[e];
                rep.check(same, || {
                    format!("{}: admissible measure after subdivision", label())
                });
                resistance_after_subdivision(rng, rep, g, &s, e, &off, label);
            }
            Err(e) => rep.error(e, label),
        }
    }

    let t = rat(rng.gen_range(1..=7), rng.gen_range(1..=5));
    match g.scaled(&t).and_then(|s| Admissible::new(&s)) {
        Ok(sad) => {
            rep.check_eq(&sad.epsilon(), &(&t * &eps), || {
                format!("{}: epsilon homogeneity", label())
            });
            rep.check_eq(&sad.phi(), &(&t * &phi), || {
                format!("{}: phi homogeneity", label())
            });
            rep.check_eq(&delta(sad.green.graph()), &(&t * &del), || {
                format!("{}: delta homogeneity", label())
            });
        }
        Err(e) => rep.error(e, label),
    }
}

/// Random point pairs of `g`, carried to the subdivided graph `s`.
fn resistance_after_subdivision<R: Rng>(
    rng: &mut R,
    rep: &mut SuiteReport,
    g: &MetrizedGraph,
    s: &MetrizedGraph,
    e: usize,
    off: &Rat,
    label: impl Fn() -> String,
) {
    let (kg, ks) = match (ResistanceKernel::new(g), ResistanceKernel::new(s)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(err), _) | (_, Err(err)) => return rep.error(err, &label),
    };
    let random_point = |rng: &mut R| {
        let f = rng.gen_range(0..g.num_edges());
        Point::Edge {
            edge: f,
            offset: gen::random_offset(rng, &g.edges()[f].length),
        }
    };
    let carry = |p: &Point| match p {
        Point::Edge { edge, offset } if *edge == e && offset > off => Point::Edge {
            edge: s.num_edges() - 1,
            offset: offset - off,
        },
        Point::Edge { edge, offset } if *edge == e && offset == off => {
            Point::Vertex(s.num_vertices() - 1)
        }
        other => other.clone(),
    };
    for _ in 0..3 {
        let (x, y) = (random_point(rng), random_point(rng));
        match (kg.resistance(&x, &y), ks.resistance(&carry(&x), &carry(&y))) {
            (Ok(a), Ok(b)) => rep.check_eq(&a, &b, || {
                format!("{}: resistance after subdivision", label())
            }),
            (Err(err), _) | (_, Err(err)) => rep.error(err, &label),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        for name in SUITES {
            let r = verify_suite_sized(name, 7, 2).unwrap();
            assert!(r.ok(), "{name}: {:?}", r.failures);
            assert!(r.passed > 0, "{name}");
        }
    }

    #[test]
    fn unknown_suite_rejected() {
        assert!(matches!(
            verify_suite("nope", 0),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn non_kausz_is_skipped() {
        let mut rep = SuiteReport::new("cluster-vs-symroots", 0);
        let cfg = RootConfig::from_finite(2, [0, 3, 1, 4, 2, 5].map(int)).unwrap();
        cluster_case(&mut rep, &cfg, Prime::new(3).unwrap());
        assert_eq!((rep.passed, rep.failed, rep.skipped), (0, 0, 1));
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            verify_suite_sized("subdivision", 3, 3).unwrap(),
            verify_suite_sized("subdivision", 3, 3).unwrap()
        );
    }
}
