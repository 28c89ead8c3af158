//! Batch front-end: reads curve and graph JSON, dispatches to the library and
//! emits JSON reports. Exact values are strings `"n/d"`; real numbers (logs)
//! are decimal strings placed next to the exact values they scale.
//!
//! Exit codes: 0 success, 1 validation error, 2 internal failure (including a
//! verification suite with failed checks).

pub mod gen;
pub mod suites;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::clustertree::{build_tree, check_kausz_form, pairing_combination_in};
use crate::error::Error;
use crate::invariants::{
    aggregate_global, chi_nonarch, counts_from_graph, d_from_counts, genus2_graph, genus2_row,
    Genus2Type, PlaceReport,
};
use crate::metgraph::{delta, verify_admissible, Admissible, GraphFile, MetrizedGraph};
use crate::numeric::{format_rat, parse_rat, rat_to_f64, Prime, Rat};
use crate::symroots::{
    normalize_finite, pairing_diff_thm_c, symroot_pow, symroot_val, RootConfig, Triple,
};

pub use suites::{verify_suite, verify_suite_sized, SuiteReport, SUITES};

/// Parsed command line.
#[derive(Debug, Clone, Parser)]
#[command(
    name = "admpair",
    version,
    about = "Exact invariants of semistable hyperelliptic curves"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Symmetric roots and admissible pairings of a root configuration.
    Symroots(CurveArgs),
    /// Residue-class tree and the pairing combination per triple.
    Cluster(CurveArgs),
    /// Metrized-graph invariants.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Genus-2 table row, optionally checked against the mapped graph.
    Genus2 {
        /// Reduction type, I to VII.
        #[arg(long = "type")]
        kind: String,
        /// Comma-separated rationals.
        #[arg(long, default_value = "")]
        params: String,
        /// Recompute ε, δ, φ on the mapped graph and compare.
        #[arg(long)]
        graph_check: bool,
    },
    /// Scalar invariant arithmetic.
    #[command(subcommand)]
    Invariants(InvariantsCommand),
    /// Aggregate place reports into the global quantity.
    Global {
        /// JSON list of place reports.
        #[arg(long)]
        places: PathBuf,
    },
    /// Run a built-in verification suite.
    Verify {
        /// identities, cluster-vs-symroots, genus2-table, phi-equals-chi or subdivision.
        #[arg(long)]
        suite: String,
        /// RNG seed; equal seeds give byte-identical reports.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random cases; the suite default when omitted.
        #[arg(long)]
        size: Option<usize>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    /// Curve JSON file (genus, roots, optional prime).
    #[arg(long)]
    pub curve: PathBuf,
    /// Overrides the prime in the curve file.
    #[arg(long)]
    pub prime: Option<u64>,
    /// Comma-separated indices `i,j,k`.
    #[arg(long, conflicts_with = "all_triples")]
    pub triple: Option<String>,
    /// Report every ordered triple (the default).
    #[arg(long)]
    pub all_triples: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum GraphCommand {
    /// ε, φ, δ and node counts of a graph file.
    Eval {
        /// Graph JSON file.
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum InvariantsCommand {
    /// χ from (d, ε, δ).
    Chi {
        /// Discriminant order d.
        #[arg(long)]
        d: String,
        /// ε.
        #[arg(long)]
        eps: String,
        /// δ.
        #[arg(long)]
        delta: String,
        #[arg(long)]
        genus: u32,
    },
}

/// A failure carrying the exit code and the diagnostic document.
#[derive(Debug, Clone)]
pub struct Failure {
    pub code: i32,
    pub doc: Value,
}

impl Failure {
    pub fn validation(error: &str, path: impl Into<String>, detail: impl Into<String>) -> Self {
        Failure {
            code: 1,
            doc: json!({"error": error, "path": path.into(), "detail": detail.into()}),
        }
    }

    pub fn internal(detail: impl Into<String>) -> Self {
        Failure {
            code: 2,
            doc: json!({"error": "internal", "path": "", "detail": detail.into()}),
        }
    }

    fn domain(e: Error, path: impl Into<String>) -> Self {
        Failure::validation(e.kind(), path, e.to_string())
    }
}

type Outcome = std::result::Result<Value, Failure>;

/// Executes a command: `(exit code, JSON document)`.
pub fn run(cfg: &RunConfig) -> (i32, Value) {
    let result = std::panic::catch_unwind(|| dispatch(&cfg.command));
    match result {
        Ok(Ok(v)) => (0, v),
        Ok(Err(f)) => (f.code, f.doc),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            let f = Failure::internal(msg);
            (f.code, f.doc)
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("values always serialize");
    s.push('\n');
    s
}

fn dispatch(cmd: &Command) -> Outcome {
    match cmd {
        Command::Symroots(a) => symroots_cmd(a),
        Command::Cluster(a) => cluster_cmd(a),
        Command::Graph(GraphCommand::Eval { input }) => graph_eval_cmd(input),
        Command::Genus2 {
            kind,
            params,
            graph_check,
        } => genus2_cmd(kind, params, *graph_check),
        Command::Invariants(InvariantsCommand::Chi {
            d,
            eps,
            delta,
            genus,
        }) => chi_cmd(d, eps, delta, *genus),
        Command::Global { places } => global_cmd(places),
        Command::Verify { suite, seed, size } => verify_cmd(suite, *seed, *size),
    }
}

/// Reads and deserializes a JSON file; errors name the offending JSON path.
pub fn load_json<T: DeserializeOwned>(path: &Path) -> std::result::Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::validation("io", path.display().to_string(), e.to_string()))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let at = e.path().to_string();
        let at = if at == "." { String::new() } else { at };
        Failure::validation(
            "parse",
            format!(
                "{}{}{}",
                path.display(),
                if at.is_empty() { "" } else { ":" },
                at
            ),
            e.into_inner().to_string(),
        )
    })
}

fn s(q: &Rat) -> Value {
    Value::String(format_rat(q))
}

fn real(x: f64) -> Value {
    Value::String(x.to_string())
}

#[derive(Deserialize)]
struct CurveFile {
    #[serde(flatten)]
    config: RootConfig,
    #[serde(default)]
    prime: Option<u64>,
}

fn parse_indices(text: &str, what: &str) -> std::result::Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|x| x.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Failure::validation("parse", what, format!("{text:?}: {e}")))
}

fn parse_triple(text: &str, n: usize) -> std::result::Result<Triple, Failure> {
    let idx = parse_indices(text, "--triple")?;
    if idx.len() != 3 {
        return Err(Failure::validation(
            "parse",
            "--triple",
            "expected three indices i,j,k",
        ));
    }
    let t = Triple::new(idx[0], idx[1], idx[2]);
    t.check(n).map_err(|e| Failure::domain(e, "--triple"))?;
    Ok(t)
}

fn load_curve(a: &CurveArgs) -> std::result::Result<(RootConfig, Option<Prime>), Failure> {
    let file: CurveFile = load_json(&a.curve)?;
    let prime = a
        .prime
        .or(file.prime)
        .map(|p| Prime::new(p).map_err(|e| Failure::domain(e, "prime")))
        .transpose()?;
    Ok((file.config, prime))
}

fn selected_triples(a: &CurveArgs, cfg: &RootConfig) -> std::result::Result<Vec<Triple>, Failure> {
    match &a.triple {
        Some(t) => Ok(vec![parse_triple(t, cfg.len())?]),
        None => Ok(cfg.triples().collect()),
    }
}

fn symroots_cmd(a: &CurveArgs) -> Outcome {
    let (cfg, prime) = load_curve(a)?;
    if let Some(p) = prime {
        p.require_odd().map_err(|e| Failure::domain(e, "prime"))?;
    }
    let record = |t: Triple| -> Outcome {
        let mut m = Map::new();
        let pow = symroot_pow(&cfg, t).map_err(|e| Failure::domain(e, "roots"))?;
        m.insert("l_pow_2g".into(), s(&pow));
        if let Some(p) = prime {
            let nu = symroot_val(&cfg, p, t).map_err(|e| Failure::domain(e, "roots"))?;
            let pairing =
                pairing_diff_thm_c(&cfg, p, t).map_err(|e| Failure::domain(e, "roots"))?;
            let log_p = (p.get() as f64).ln();
            m.insert("nu_l".into(), s(&nu));
            m.insert("pairing".into(), s(&pairing));
            m.insert("pairing_log".into(), real(rat_to_f64(&pairing) * log_p));
        }
        Ok(Value::Object(m))
    };
    let mut doc = Map::new();
    doc.insert("genus".into(), json!(cfg.genus()));
    doc.insert("prime".into(), json!(prime.map(|p| p.get())));
    doc.insert("normalization".into(), json!(normalize_finite(&cfg).note()));
    let triples = selected_triples(a, &cfg)?;
    if a.triple.is_some() {
        let t = triples[0];
        doc.insert("triple".into(), json!(t.key()));
        if let Value::Object(r) = record(t)? {
            doc.extend(r);
        }
    } else {
        let mut all = Map::new();
        for t in triples {
            all.insert(t.key(), record(t)?);
        }
        doc.insert("triples".into(), Value::Object(all));
    }
    Ok(Value::Object(doc))
}

fn cluster_cmd(a: &CurveArgs) -> Outcome {
    let (cfg, prime) = load_curve(a)?;
    let p = prime.ok_or_else(|| {
        Failure::validation(
            "missing_prime",
            "prime",
            "cluster needs --prime or a prime in the curve file",
        )
    })?;
    p.require_odd().map_err(|e| Failure::domain(e, "prime"))?;
    let report = check_kausz_form(&cfg, p);
    if !report.passed() {
        return Err(Failure {
            code: 1,
            doc: json!({
                "error": "not_kausz_form",
                "path": "roots",
                "detail": report.summary(),
                "kausz": report,
            }),
        });
    }
    let tree = build_tree(&cfg, p).map_err(|e| Failure::domain(e, "roots"))?;
    let g = cfg.genus() as i64;
    let mut checks = Vec::new();
    for t in selected_triples(a, &cfg)? {
        let combination =
            pairing_combination_in(&tree, t).map_err(|e| Failure::domain(e, "roots"))?;
        let nu = symroot_val(&cfg, p, t).map_err(|e| Failure::domain(e, "roots"))?;
        let expected = Rat::from_integer((2 * g * (g - 1)).into()) * &nu;
        checks.push(json!({
            "triple": t.key(),
            "combination": s(&combination),
            "expected": s(&expected),
            "nu_l": s(&nu),
            "equal": combination == expected,
        }));
    }
    let nodes: Vec<Value> = tree
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, n)| {
            json!({
                "id": i,
                "level": n.level,
                "members": n.members,
                "representative": n.representative,
                "parent": tree.parent(i),
                "mult_y": s(&tree.mult_y(n)),
            })
        })
        .collect();
    let components: Vec<usize> = (0..cfg.len())
        .map(|r| {
            let c = tree.component(r);
            tree.nodes()
                .iter()
                .position(|n| n == c)
                .expect("component is a node")
        })
        .collect();
    Ok(json!({
        "prime": p.get(),
        "genus": cfg.genus(),
        "kausz": report,
        "tree": {"nodes": nodes, "components": components},
        "checks": checks,
    }))
}

fn graph_eval_cmd(input: &Path) -> Outcome {
    let file: GraphFile = load_json(input)?;
    let g = MetrizedGraph::from_file(file).map_err(|e| Failure::domain(e, "graph"))?;
    let ad = Admissible::new(&g).map_err(|e| Failure::domain(e, "graph"))?;
    let eps = ad.epsilon();
    let phi = ad.phi();
    let del = delta(&g);
    let defect = verify_admissible(&g, &ad.measure).map_err(|e| Failure::domain(e, "graph"))?;
    let mut doc = json!({
        "genus": ad.genus.to_string(),
        "epsilon": s(&eps),
        "phi": s(&phi),
        "delta": s(&del),
        "admissibility_defect": s(&defect),
    });
    let (counts, warnings) = match counts_from_graph(&g) {
        Ok((c, w)) => {
            let d = d_from_counts(&c);
            let chi = chi_nonarch(ad.genus as u32, &d, &eps, &del);
            let (nx, nd) = crate::invariants::NodeCounts::lengths(c.genus());
            let counts = json!({
                "xi0": s(c.xi0()),
                "xi": (1..=nx).map(|j| s(c.xi(j))).collect::<Vec<_>>(),
                "delta": (1..=nd).map(|i| s(c.delta(i))).collect::<Vec<_>>(),
                "d": s(&d),
                "chi": s(&chi),
            });
            (counts, w)
        }
        Err(e) => (Value::Null, vec![format!("no node counts: {e}")]),
    };
    doc["counts"] = counts;
    doc["warnings"] = json!(warnings);
    Ok(doc)
}

fn parse_params(text: &str) -> std::result::Result<Vec<Rat>, Failure> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|x| parse_rat(x).map_err(|e| Failure::domain(e, "--params")))
        .collect()
}

fn genus2_cmd(kind: &str, params: &str, graph_check: bool) -> Outcome {
    let ty: Genus2Type = kind.parse().map_err(|e| Failure::domain(e, "--type"))?;
    let params = parse_params(params)?;
    let row = genus2_row(ty, &params).map_err(|e| Failure::domain(e, "--params"))?;
    let mut doc = json!({
        "type": ty.name(),
        "params": params.iter().map(s).collect::<Vec<_>>(),
        "d_half": s(&row.d_half),
        "d": s(&row.d()),
        "delta": s(&row.delta),
        "epsilon": s(&row.epsilon),
        "chi": s(&row.chi),
    });
    if graph_check {
        let g = genus2_graph(ty, &params).map_err(|e| Failure::domain(e, "--params"))?;
        let ad = Admissible::new(&g).map_err(|e| Failure::domain(e, "graph"))?;
        let (eps, phi, del) = (ad.epsilon(), ad.phi(), delta(&g));
        let matches = eps == row.epsilon && del == row.delta && phi == row.chi;
        doc["graph_check"] = json!({
            "graph": g.to_file().edges.iter().map(|e| json!({"u": e.u, "v": e.v, "length": s(&e.length)})).collect::<Vec<_>>(),
            "epsilon": s(&eps),
            "delta": s(&del),
            "phi": s(&phi),
            "matches": matches,
        });
    }
    Ok(doc)
}

fn chi_cmd(d: &str, eps: &str, delta: &str, genus: u32) -> Outcome {
    if genus < 2 {
        return Err(Failure::validation(
            "invalid_config",
            "--genus",
            "genus must be at least 2",
        ));
    }
    let p = |x: &str, name: &str| parse_rat(x).map_err(|e| Failure::domain(e, name));
    let (d, e, l) = (p(d, "--d")?, p(eps, "--eps")?, p(delta, "--delta")?);
    Ok(json!({"genus": genus, "chi": s(&chi_nonarch(genus, &d, &e, &l))}))
}

fn global_cmd(places: &Path) -> Outcome {
    let reports: Vec<PlaceReport> = load_json(places)?;
    for (i, r) in reports.iter().enumerate() {
        r.check()
            .map_err(|e| Failure::domain(e, format!("[{i}]")))?;
    }
    let total = aggregate_global(&reports).map_err(|e| Failure::domain(e, "places"))?;
    let chi_log: f64 = reports.iter().map(|r| rat_to_f64(&r.chi) * r.log_nv).sum();
    Ok(json!({
        "places": reports.len(),
        "genus": reports.first().map(|r| r.genus),
        "sum_chi_log_nv": real(chi_log),
        "omega_a": real(total),
    }))
}

fn verify_cmd(suite: &str, seed: u64, size: Option<usize>) -> Outcome {
    let size = size.unwrap_or_else(|| suites::default_size(suite));
    let report =
        verify_suite_sized(suite, seed, size).map_err(|e| Failure::domain(e, "--suite"))?;
    let doc = serde_json::to_value(&report).map_err(|e| Failure::internal(e.to_string()))?;
    if report.ok() {
        Ok(doc)
    } else {
        Err(Failure { code: 2, doc })
    }
}
