//! `sedwalk`: build graphs, classify vertices, emit walk series.

mod format;
mod sweep;

use std::f64::consts::PI;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use sedwalk::sedentary::{Classifier, Sharpness, Verdict};
use sedwalk::spectral::{self, DEFAULT_GROUPING_TOL};
use sedwalk::twins::{self, twin_theta};
use sedwalk::walk::InfimumMode;
use sedwalk::{dsl, edgelist, InfimumEstimate, MatrixKind, VertexClassification, WalkEvaluator, WeightedGraph};

use format::{csv, json_num, json_opt, num, opt_num, pi_multiple, table, time_label};

const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "sedwalk", version, about = "Sedentary quantum walks on weighted graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Graph summary, spectrum, twin sets and verdicts.
    Analyze {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        vertices: VertexArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Verdict certificates for the selected vertices.
    Classify {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        vertices: VertexArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// `|U(t)_{u,u}|` (or `|U(t)_{u,v}|` with --target) on a uniform grid.
    Series {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        target: Option<usize>,
        #[arg(long, default_value_t = 2.0 * PI)]
        tmax: f64,
        #[arg(long, default_value_t = 1001)]
        steps: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Closed-form verdicts over parameter ranges.
    Families {
        #[arg(long, value_enum, default_value_t = sweep::Family::All)]
        family: sweep::Family,
        /// Largest vertex count (or factor size for products).
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Twin sets with their eigenvalue for each matrix.
    Twins {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Eigenvalue supports of the selected vertices.
    Spectrum {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        vertices: VertexArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Graph expression, e.g. "join(O(2),K(6))".
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    graph: Option<String>,
    /// Edge-list file.
    #[arg(long)]
    file: Option<PathBuf>,
    /// A, L or Mq:<q>.
    #[arg(long, default_value = "A", value_parser = parse_matrix)]
    matrix: MatrixKind,
    /// Relative eigenvalue grouping tolerance.
    #[arg(long, default_value_t = DEFAULT_GROUPING_TOL)]
    tol: f64,
}

#[derive(Args, Debug)]
struct VertexArgs {
    #[arg(long, conflicts_with = "all_vertices")]
    vertex: Option<usize>,
    /// Every vertex (the default when --vertex is absent).
    #[arg(long)]
    all_vertices: bool,
}

#[derive(Args, Debug)]
struct OutArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

fn parse_matrix(s: &str) -> Result<MatrixKind, String> {
    match s {
        "A" => Ok(MatrixKind::Adjacency),
        "L" => Ok(MatrixKind::Laplacian),
        _ => {
            let q = s
                .strip_prefix("Mq:")
                .or_else(|| s.strip_prefix("Mq(").and_then(|r| r.strip_suffix(')')))
                .ok_or_else(|| format!("expected A, L or Mq:<q>, got '{s}'"))?;
            let q: f64 = q.parse().map_err(|_| format!("bad q in '{s}'"))?;
            if !q.is_finite() {
                return Err("q must be finite".into());
            }
            Ok(if q == 0.0 { MatrixKind::Adjacency } else { MatrixKind::Generalized(q) })
        }
    }
}

/// Failure with its exit status.
#[derive(Debug)]
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        Failure { code: 1, err }
    }
}

fn parse_failure(err: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, err: err.into() }
}

impl GraphArgs {
    fn load(&self) -> Result<WeightedGraph, Failure> {
        let (g, irregular) = match (&self.graph, &self.file) {
            (Some(expr), _) => {
                let p = dsl::parse_annotated(expr).map_err(parse_failure)?;
                (p.graph, p.irregular_direct_product)
            }
            (None, Some(path)) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))
                    .map_err(parse_failure)?;
                let g = edgelist::parse(&text)
                    .with_context(|| format!("parsing {}", path.display()))
                    .map_err(parse_failure)?;
                (g, false)
            }
            (None, None) => return Err(parse_failure(anyhow::anyhow!("one of --graph or --file is required"))),
        };
        let uses_degrees = self.matrix.q() != Some(0.0);
        if irregular && uses_degrees {
            return Err(Failure {
                code: 3,
                err: anyhow::anyhow!(
                    "{} walk on a direct product with a non-regular factor: no closed form is known for this case",
                    self.matrix
                ),
            });
        }
        Ok(g)
    }

    fn classifier<'a>(&self, g: &'a WeightedGraph) -> Result<Classifier<'a>, Failure> {
        let dec = spectral::decompose_with_tol(g, self.matrix, self.tol).map_err(anyhow::Error::from)?;
        Ok(Classifier::with_decomposition(g, dec))
    }
}

impl VertexArgs {
    fn select(&self, n: usize) -> Result<Vec<usize>, Failure> {
        match self.vertex {
            Some(v) if v >= n => Err(parse_failure(anyhow::anyhow!("vertex {v} out of range for {n} vertices"))),
            Some(v) => Ok(vec![v]),
            None => Ok((0..n).collect()),
        }
    }
}

impl OutArgs {
    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
            None => std::io::stdout().write_all(text.as_bytes()).context("writing stdout")?,
        }
        Ok(())
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).unwrap_or_default() + "\n"
}

fn sharpness_name(s: &Sharpness) -> &'static str {
    match s {
        Sharpness::Tight { .. } => "tight",
        Sharpness::Sharp => "sharp",
        Sharpness::LowerBound => "lower_bound",
    }
}

/// Classification plus the numeric evidence shown next to it.
struct Certificate {
    c: VertexClassification,
    evidence: Option<InfimumEstimate>,
}

fn certify(cl: &Classifier<'_>, vertices: &[usize]) -> Result<Vec<Certificate>, Failure> {
    let walk = WalkEvaluator::new(cl.decomposition().clone());
    vertices
        .par_iter()
        .map(|&u| {
            let c = cl.classify(u).map_err(anyhow::Error::from)?;
            let evidence = match c.evidence {
                Some(e) => Some(e),
                None => walk.infimum_diagonal(u).ok(),
            };
            Ok(Certificate { c, evidence })
        })
        .collect()
}

fn time_json(t: Option<f64>) -> (Value, Value) {
    (json_opt(t), t.and_then(pi_multiple).map_or(Value::Null, Value::String))
}

fn certificate_json(cert: &Certificate) -> Value {
    let c = &cert.c;
    let (tt, tt_pi) = time_json(c.tightness_time());
    let (sharpness, partner, transfer_time, zero_time) = match c.verdict {
        Verdict::Sedentary { sharpness, .. } => (Value::String(sharpness_name(&sharpness).into()), None, None, None),
        Verdict::Pst { partner, time } => (Value::Null, Some(partner), Some(time), None),
        Verdict::Pgst { partner } => (Value::Null, Some(partner), None, None),
        Verdict::NotSedentary { zero_time } => (Value::Null, None, None, zero_time),
        Verdict::Undetermined => (Value::Null, None, None, None),
    };
    let (tr, tr_pi) = time_json(transfer_time);
    let (zt, zt_pi) = time_json(zero_time);
    let evidence = cert.evidence.map_or(Value::Null, |e| {
        json!({
            "grid_min": json_num(e.value),
            "grid_argmin": json_opt(e.attained_time),
            "mode": match e.mode {
                InfimumMode::ExactOnPeriod => "period",
                InfimumMode::GridLowerConfidence => "horizon",
            },
            "horizon": json_num(e.grid.horizon),
            "points": e.grid.points,
        })
    });
    json!({
        "vertex": c.vertex,
        "matrix_kind": c.matrix_kind.label(),
        "verdict": c.verdict.name(),
        "sharpness": sharpness,
        "constant": json_opt(c.constant()),
        "tightness_time": tt,
        "tightness_time_pi": tt_pi,
        "partner": partner,
        "transfer_time": tr,
        "transfer_time_pi": tr_pi,
        "zero_time": zt,
        "zero_time_pi": zt_pi,
        "lemma_trail": c.lemma_trail,
        "evidence": evidence,
    })
}

fn verdict_label(v: &Verdict) -> String {
    match v {
        Verdict::Sedentary { sharpness, .. } => format!("sedentary ({})", sharpness_name(sharpness)),
        other => other.name().to_string(),
    }
}

fn verdict_time(v: &Verdict) -> Option<f64> {
    match *v {
        Verdict::Sedentary { sharpness: Sharpness::Tight { time }, .. } => Some(time),
        Verdict::Pst { time, .. } => Some(time),
        Verdict::NotSedentary { zero_time } => zero_time,
        _ => None,
    }
}

const CERT_HEADER: [&str; 7] = ["vertex", "verdict", "constant", "time", "partner", "grid_min", "grid_argmin"];

fn certificate_row(cert: &Certificate, pi_labels: bool) -> Vec<String> {
    let c = &cert.c;
    let t = verdict_time(&c.verdict);
    vec![
        c.vertex.to_string(),
        verdict_label(&c.verdict),
        opt_num(c.constant()),
        if pi_labels { time_label(t) } else { opt_num(t) },
        c.partner().map_or("-".into(), |p| p.to_string()),
        opt_num(cert.evidence.map(|e| e.value)),
        opt_num(cert.evidence.and_then(|e| e.attained_time)),
    ]
}

fn graph_json(g: &WeightedGraph) -> Value {
    json!({ "n": g.n(), "edges": g.edge_count() })
}

fn classify(graph: &GraphArgs, vertices: &VertexArgs, out: &OutArgs) -> Result<(), Failure> {
    let g = graph.load()?;
    let cl = graph.classifier(&g)?;
    let certs = certify(&cl, &vertices.select(g.n())?)?;
    let text = match out.format_or(Format::Json) {
        Format::Json => pretty(&json!({
            "schema": SCHEMA,
            "graph": graph_json(&g),
            "matrix_kind": graph.matrix.label(),
            "certificates": certs.iter().map(certificate_json).collect::<Vec<_>>(),
        })),
        Format::Table => table(&CERT_HEADER, &certs.iter().map(|c| certificate_row(c, true)).collect::<Vec<_>>()),
        Format::Csv => csv(&CERT_HEADER, &certs.iter().map(|c| certificate_row(c, false)).collect::<Vec<_>>()),
    };
    out.emit(&text)
}

fn support_json(dec: &spectral::SpectralDecomposition, u: usize) -> Result<Value, Failure> {
    let s = dec.support(u).map_err(anyhow::Error::from)?;
    let exact = dec.exact_support(u).map_err(anyhow::Error::from)?;
    let period = dec.is_periodic(u).map_err(anyhow::Error::from)?;
    let exact_json = exact.map_or(Value::Null, |ex| {
        json!({
            "delta": ex.delta,
            "values": ex.values.iter().map(|q| json!({"a": q.a, "b": q.b, "delta": q.delta})).collect::<Vec<_>>(),
        })
    });
    let (rho, rho_pi) = time_json(period.filter(|p| !p.trivial).map(|p| p.rho));
    Ok(json!({
        "vertex": u,
        "eigenvalues": s.values.iter().map(|&x| json_num(x)).collect::<Vec<_>>(),
        "weights": s.weights.iter().map(|&x| json_num(x)).collect::<Vec<_>>(),
        "exact": exact_json,
        "periodic": period.is_some(),
        "period": rho,
        "period_pi": rho_pi,
    }))
}

fn spectrum(graph: &GraphArgs, vertices: &VertexArgs, out: &OutArgs) -> Result<(), Failure> {
    let g = graph.load()?;
    let dec = spectral::decompose_with_tol(&g, graph.matrix, graph.tol).map_err(anyhow::Error::from)?;
    let sel = vertices.select(g.n())?;
    let supports: Vec<Value> = sel.iter().map(|&u| support_json(&dec, u)).collect::<Result<_, _>>()?;
    let text = match out.format_or(Format::Json) {
        Format::Json => pretty(&json!({
            "schema": SCHEMA,
            "graph": graph_json(&g),
            "matrix_kind": graph.matrix.label(),
            "eigenvalues": dec.eigenvalues.iter().map(|&x| json_num(x)).collect::<Vec<_>>(),
            "multiplicities": dec.multiplicities,
            "supports": supports,
        })),
        fmt => {
            let header = ["vertex", "eigenvalue", "weight"];
            let mut rows = Vec::new();
            for &u in &sel {
                let s = dec.support(u).map_err(anyhow::Error::from)?;
                for (l, w) in s.values.iter().zip(&s.weights) {
                    rows.push(vec![u.to_string(), num(*l), num(*w)]);
                }
            }
            if fmt == Format::Csv {
                csv(&header, &rows)
            } else {
                table(&header, &rows)
            }
        }
    };
    out.emit(&text)
}

fn twins_cmd(graph: &GraphArgs, out: &OutArgs) -> Result<(), Failure> {
    let g = graph.load()?;
    let sets = twins::find_twin_sets(&g, graph.matrix);
    let mut kinds = vec![MatrixKind::Adjacency, MatrixKind::Laplacian];
    if let MatrixKind::Generalized(_) = graph.matrix {
        kinds.push(graph.matrix);
    }
    let text = match out.format_or(Format::Json) {
        Format::Json => pretty(&json!({
            "schema": SCHEMA,
            "graph": graph_json(&g),
            "twin_sets": sets.iter().map(|t| json!({
                "members": t.members,
                "omega": json_num(t.omega),
                "eta": json_num(t.eta),
                "degree": json_num(t.degree),
                "theta": kinds.iter().map(|k| (k.label(), json_num(twin_theta(*k, t.degree, t.omega, t.eta)))).collect::<serde_json::Map<_, _>>(),
            })).collect::<Vec<_>>(),
        })),
        fmt => {
            let mut header = vec!["members".to_string(), "omega".into(), "eta".into()];
            header.extend(kinds.iter().map(|k| format!("theta_{}", k.label())));
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows: Vec<Vec<String>> = sets
                .iter()
                .map(|t| {
                    let mut r = vec![
                        t.members.iter().map(usize::to_string).collect::<Vec<_>>().join(" "),
                        num(t.omega),
                        num(t.eta),
                    ];
                    r.extend(kinds.iter().map(|k| num(twin_theta(*k, t.degree, t.omega, t.eta))));
                    r
                })
                .collect();
            if fmt == Format::Csv {
                csv(&header, &rows)
            } else {
                table(&header, &rows)
            }
        }
    };
    out.emit(&text)
}

fn series(graph: &GraphArgs, u: usize, target: Option<usize>, tmax: f64, steps: usize, out: &OutArgs) -> Result<(), Failure> {
    if !(tmax.is_finite() && tmax > 0.0) {
        return Err(parse_failure(anyhow::anyhow!("--tmax must be positive")));
    }
    let g = graph.load()?;
    for v in std::iter::once(u).chain(target) {
        if v >= g.n() {
            return Err(parse_failure(anyhow::anyhow!("vertex {v} out of range for {} vertices", g.n())));
        }
    }
    let dec = spectral::decompose_with_tol(&g, graph.matrix, graph.tol).map_err(anyhow::Error::from)?;
    let walk = WalkEvaluator::new(dec);
    let pts: Vec<(f64, f64)> = match target {
        None => walk.diagonal_series(u, tmax, steps).map_err(anyhow::Error::from)?,
        Some(v) => {
            let steps = steps.max(2);
            (0..steps)
                .map(|i| {
                    let t = tmax * i as f64 / (steps - 1) as f64;
                    (t, walk.magnitude(u, v, t))
                })
                .collect()
        }
    };
    let text = match out.format_or(Format::Csv) {
        Format::Json => pretty(&json!({
            "schema": SCHEMA,
            "vertex": u,
            "target": target.unwrap_or(u),
            "matrix_kind": graph.matrix.label(),
            "t": pts.iter().map(|p| json_num(p.0)).collect::<Vec<_>>(),
            "magnitude": pts.iter().map(|p| json_num(p.1)).collect::<Vec<_>>(),
        })),
        fmt => {
            let rows: Vec<Vec<String>> = pts.iter().map(|&(t, m)| vec![num(t), num(m)]).collect();
            if fmt == Format::Csv {
                csv(&["t", "magnitude"], &rows)
            } else {
                table(&["t", "magnitude"], &rows)
            }
        }
    };
    out.emit(&text)
}

fn families_cmd(family: sweep::Family, max_n: usize, out: &OutArgs) -> Result<(), Failure> {
    let rows = sweep::sweep(family, max_n);
    let header = ["family", "params", "vertex_class", "verdict", "constant", "time"];
    let fmt = out.format_or(Format::Table);
    let cells = |r: &sweep::Row| -> Vec<String> {
        let (verdict, constant) = match &r.result {
            Ok(c) => (verdict_label(&c.verdict), opt_num(c.constant())),
            Err(e) => (format!("error: {e}"), "-".into()),
        };
        let time = if fmt == Format::Table { time_label(r.time()) } else { opt_num(r.time()) };
        vec![r.family.to_string(), r.params.clone(), r.vertex_class.clone(), verdict, constant, time]
    };
    let text = match fmt {
        Format::Json => pretty(&json!({
            "schema": SCHEMA,
            "rows": rows.iter().map(|r| {
                let c = r.result.as_ref().ok();
                json!({
                    "family": r.family,
                    "params": r.params,
                    "vertex_class": r.vertex_class,
                    "verdict": c.map_or("error", |c| c.verdict.name()),
                    "constant": json_opt(c.and_then(|c| c.constant())),
                    "time": json_opt(r.time()),
                    "time_pi": r.time().and_then(pi_multiple),
                    "error": r.result.as_ref().err().map(|e| e.to_string()),
                })
            }).collect::<Vec<_>>(),
        })),
        Format::Csv => csv(&header, &rows.iter().map(cells).collect::<Vec<_>>()),
        Format::Table => table(&header, &rows.iter().map(cells).collect::<Vec<_>>()),
    };
    out.emit(&text)
}

fn analyze(graph: &GraphArgs, vertices: &VertexArgs, out: &OutArgs) -> Result<(), Failure> {
    let g = graph.load()?;
    let cl = graph.classifier(&g)?;
    let dec = cl.decomposition();
    let sel = vertices.select(g.n())?;
    let certs = certify(&cl, &sel)?;
    let twin_sets = cl.twin_sets();
    let text = match out.format_or(Format::Table) {
        Format::Json => pretty(&json!({
            "schema": SCHEMA,
            "graph": {
                "n": g.n(),
                "edges": g.edge_count(),
                "connected": g.is_connected(),
                "bipartite": g.is_bipartite(),
                "regular": g.is_weighted_regular().map(json_num),
            },
            "matrix_kind": graph.matrix.label(),
            "eigenvalues": dec.eigenvalues.iter().map(|&x| json_num(x)).collect::<Vec<_>>(),
            "multiplicities": dec.multiplicities,
            "twin_sets": twin_sets.iter().map(|t| json!({"members": t.members, "theta": json_num(t.theta)})).collect::<Vec<_>>(),
            "certificates": certs.iter().map(certificate_json).collect::<Vec<_>>(),
        })),
        Format::Csv => csv(&CERT_HEADER, &certs.iter().map(|c| certificate_row(c, false)).collect::<Vec<_>>()),
        Format::Table => {
            let mut s = format!(
                "graph: {} vertices, {} edges, matrix {}\n",
                g.n(),
                g.edge_count(),
                graph.matrix.label()
            );
            let spec: Vec<String> = dec
                .eigenvalues
                .iter()
                .zip(&dec.multiplicities)
                .map(|(l, m)| if *m > 1 { format!("{}^{m}", num(*l)) } else { num(*l) })
                .collect();
            s += &format!("spectrum: {}\n", spec.join(" "));
            for t in twin_sets {
                let members: Vec<String> = t.members.iter().map(usize::to_string).collect();
                s += &format!("twin set {{{}}} theta {}\n", members.join(","), num(t.theta));
            }
            s += "\n";
            s += &table(&CERT_HEADER, &certs.iter().map(|c| certificate_row(c, true)).collect::<Vec<_>>());
            s
        }
    };
    out.emit(&text)
}

fn configure_threads() {
    if let Some(n) = std::env::var("SEDWALK_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.cmd {
        Cmd::Analyze { graph, vertices, out } => analyze(graph, vertices, out),
        Cmd::Classify { graph, vertices, out } => classify(graph, vertices, out),
        Cmd::Series { graph, vertex, target, tmax, steps, out } => series(graph, *vertex, *target, *tmax, *steps, out),
        Cmd::Families { family, max_n, out } => families_cmd(*family, *max_n, out),
        Cmd::Twins { graph, out } => twins_cmd(graph, out),
        Cmd::Spectrum { graph, vertices, out } => spectrum(graph, vertices, out),
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}
