use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use cuspcover::algebra::{format_rational, parse_in};
use cuspcover::fixtures::tools::{self, ToolError};
use cuspcover::fixtures::{
    corpus_root_of, parse_range, read_fixture, resolve_path, run_all, run_fixture, Corpus, Fixture, FixtureError, Format,
    Report, RunOptions,
};
use cuspcover::ideal::{eliminate, groebner_basis, normal_form, saturate, Budget, IdealError, IdealFile, MonomialOrder};
use cuspcover::topology::{
    canonical_cycle, edge_determinants, graph_analyze, laufer_durfee_sw, semigroup_condition, splice_diagram, GraphError,
    GraphFile, ResolutionGraph,
};

const USAGE: u8 = 2;
const FAIL: u8 = 1;
const BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "cuspcover", version, about = "Section rings, Groebner computations and plumbing graphs for rational cuspidal curves")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Highest degree searched for generators.
    #[arg(long, global = true)]
    max_degree: Option<u64>,
    /// Cap on critical pairs per Groebner run (CUSPCOVER_BUDGET overrides).
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// text, json or tsv.
    #[arg(long, global = true, default_value = "text", value_parser = parse_format)]
    format: Format,
    /// Root of the fixture tree.
    #[arg(long, global = true)]
    fixture_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// h0(nL) and a basis for each n in a range.
    Sections {
        file: PathBuf,
        #[arg(long, default_value = "0..5", value_parser = parse_range)]
        range: (u64, u64),
    },
    /// Minimal generators and relations of the section ring.
    Ring {
        file: PathBuf,
        #[arg(long)]
        relation_degree: Option<u64>,
    },
    /// Geometric genus from the section dimensions.
    Pg { file: PathBuf },
    /// Reduced Groebner basis of an ideal file.
    Gb {
        file: PathBuf,
        /// Override the file's order: grevlex or lex.
        #[arg(long)]
        order: Option<String>,
    },
    /// Normal form of a polynomial modulo an ideal file.
    Nf {
        file: PathBuf,
        #[arg(long)]
        poly: String,
    },
    /// Intersect with the ring of the variables not listed.
    Eliminate {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        vars: Vec<String>,
    },
    /// Saturate by a polynomial.
    Saturate {
        file: PathBuf,
        #[arg(long)]
        by: String,
    },
    /// Determinant, Betti numbers and canonical cycle of a resolution graph.
    Graph {
        file: PathBuf,
        /// Geometric genus for Laufer's and Durfee's formulas.
        #[arg(long, allow_hyphen_values = true)]
        pg: Option<i64>,
    },
    /// Splice diagram and semigroup condition.
    Splice { file: PathBuf },
    /// Check one fixture.
    Verify {
        file: PathBuf,
        #[arg(long)]
        extended: bool,
    },
    /// Check every fixture in the tree.
    VerifyAll {
        #[arg(long)]
        extended: bool,
    },
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

/// Command failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(m: impl Into<String>) -> Self {
        Failure { code: USAGE, message: m.into() }
    }
    fn fail(m: impl Into<String>) -> Self {
        Failure { code: FAIL, message: m.into() }
    }
}

impl From<FixtureError> for Failure {
    fn from(e: FixtureError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<ToolError> for Failure {
    fn from(e: ToolError) -> Self {
        match e {
            ToolError::Budget(m) => Failure { code: BUDGET, message: m },
            ToolError::Other(m) => Failure::fail(m),
        }
    }
}

impl From<IdealError> for Failure {
    fn from(e: IdealError) -> Self {
        match e {
            IdealError::Budget { .. } => Failure { code: BUDGET, message: e.to_string() },
            IdealError::Algebra(_) | IdealError::UnknownVariable(_) | IdealError::VariableMismatch(_) => {
                Failure::usage(e.to_string())
            }
            _ => Failure::fail(e.to_string()),
        }
    }
}

/// Rendered output plus the exit code it implies.
struct Output {
    text: String,
    tsv: String,
    json: Value,
    code: u8,
}

impl Output {
    fn ok(text: String, tsv: String, json: Value) -> Self {
        Output { text, tsv, json, code: 0 }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Tsv => self.tsv.clone(),
            Format::Json => format!("{}\n", serde_json::to_string_pretty(&self.json).expect("json output")),
        }
    }
}

fn budget(global: &Global) -> Result<Budget, Failure> {
    let from_env = match std::env::var("CUSPCOVER_BUDGET") {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| Failure::usage(format!("CUSPCOVER_BUDGET='{v}' is not a count")))?),
        Err(_) => None,
    };
    Ok(match from_env.or(global.budget) {
        Some(n) => Budget::pairs(n),
        None => Budget::default(),
    })
}

fn locate(file: &Path, global: &Global) -> Result<PathBuf, Failure> {
    resolve_path(file, global.fixture_dir.as_deref()).ok_or_else(|| Failure::usage(format!("{}: no such fixture", file.display())))
}

/// The fixture and the corpus it lives in.
fn load(file: &Path, global: &Global) -> Result<(Corpus, Fixture), Failure> {
    let path = locate(file, global)?;
    let fx = read_fixture(&path)?;
    let root = match &global.fixture_dir {
        Some(d) => d.clone(),
        None => corpus_root_of(&path),
    };
    let mut corpus = Corpus::load(&root)?;
    if !corpus.fixtures.contains_key(fx.id()) {
        corpus.insert(fx.clone())?;
    }
    Ok((corpus, fx))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de)
        .map_err(|e| Failure::usage(format!("{}: at '{}': {}", path.display(), e.path(), e.inner())))
}

fn cmd_sections(file: &Path, range: (u64, u64), global: &Global) -> Result<Output, Failure> {
    let (corpus, fx) = load(file, global)?;
    let rows = tools::sections(&corpus, &fx, range)?;
    let mut text = String::from("n\th0\tbasis\n");
    let mut tsv = String::from("n\th0\tbasis\n");
    for r in &rows {
        let _ = writeln!(text, "{}\t{}\t{}", r.n, r.dim, if r.basis.is_empty() { "-".into() } else { r.basis.join(", ") });
        let _ = writeln!(tsv, "{}\t{}\t{}", r.n, r.dim, r.basis.join(";"));
    }
    Ok(Output::ok(text, tsv, json!({ "fixture": fx.id(), "rows": rows })))
}

fn cmd_ring(file: &Path, relation_degree: Option<u64>, global: &Global) -> Result<Output, Failure> {
    let (corpus, fx) = load(file, global)?;
    let r = tools::ring(&corpus, &fx, global.max_degree, relation_degree)?;
    let mut text = format!("{} generators\n", r.generators.len());
    let mut tsv = String::from("kind\tname\tdegree\tvalue\n");
    for g in &r.generators {
        let _ = writeln!(text, "  {} (degree {}) = {}", g.name, g.degree, g.form);
        let _ = writeln!(tsv, "generator\t{}\t{}\t{}", g.name, g.degree, g.form);
    }
    if r.searched_to > 0 {
        let _ = writeln!(text, "{} relations through degree {}", r.relations.len(), r.searched_to);
        for (rel, d) in r.relations.iter().zip(&r.relation_degrees) {
            let _ = writeln!(text, "  [{d}] {rel}");
            let _ = writeln!(tsv, "relation\t-\t{d}\t{rel}");
        }
        if !r.hilbert_numerator.is_empty() {
            let _ = writeln!(text, "hilbert numerator {:?} (palindromic {})", r.hilbert_numerator, r.palindromic);
        }
    }
    Ok(Output::ok(text, tsv, serde_json::to_value(&r).expect("ring report")))
}

fn cmd_pg(file: &Path, global: &Global) -> Result<Output, Failure> {
    let (corpus, fx) = load(file, global)?;
    let r = tools::pg(&corpus, &fx)?;
    let terms: Vec<String> = r.terms.iter().map(|t| t.1.to_string()).collect();
    let text = format!("pg {} = {} (n = 0..{} step {})\n", r.pg, terms.join(" + "), r.kappa, r.conormal);
    let mut tsv = String::from("n\th0\n");
    for (n, h) in &r.terms {
        let _ = writeln!(tsv, "{n}\t{h}");
    }
    let _ = writeln!(tsv, "pg\t{}", r.pg);
    Ok(Output::ok(text, tsv, serde_json::to_value(&r).expect("pg report")))
}

fn ideal_output(ideal: &cuspcover::ideal::IdealBasis) -> Output {
    let mut text = String::new();
    let mut tsv = String::from("generator\n");
    for g in &ideal.generators {
        let _ = writeln!(text, "{g}");
        let _ = writeln!(tsv, "{g}");
    }
    let mut file = serde_json::to_value(IdealFile::from_ideal(ideal)).expect("ideal file");
    file["text"] = json!(ideal.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>());
    Output::ok(text, tsv, file)
}

fn cmd_gb(file: &Path, order: Option<&str>, global: &Global) -> Result<Output, Failure> {
    let input: IdealFile = read_json(file)?;
    let mut ideal = input.to_ideal()?;
    match order {
        None => {}
        Some("grevlex") => ideal.order = MonomialOrder::Grevlex,
        Some("lex") => ideal.order = MonomialOrder::Lex,
        Some(o) => return Err(Failure::usage(format!("unknown order '{o}' (grevlex, lex)"))),
    }
    Ok(ideal_output(&groebner_basis(&ideal, &budget(global)?)?))
}

fn cmd_nf(file: &Path, poly: &str, global: &Global) -> Result<Output, Failure> {
    let input: IdealFile = read_json(file)?;
    let ideal = input.to_ideal()?;
    let p = parse_in(poly, &ideal.vars).map_err(|e| Failure::usage(e.to_string()))?;
    let gb = groebner_basis(&ideal, &budget(global)?)?;
    let nf = normal_form(&p, &gb)?;
    let member = nf.is_zero();
    Ok(Output::ok(
        format!("{nf}\nmember {member}\n"),
        format!("normal_form\tmember\n{nf}\t{member}\n"),
        json!({ "normalForm": nf.to_string(), "member": member }),
    ))
}

fn cmd_eliminate(file: &Path, vars: &[String], global: &Global) -> Result<Output, Failure> {
    let input: IdealFile = read_json(file)?;
    let ideal = input.to_ideal()?;
    let block: Vec<&str> = vars.iter().map(String::as_str).collect();
    Ok(ideal_output(&eliminate(&ideal, &block, &budget(global)?)?))
}

fn cmd_saturate(file: &Path, by: &str, global: &Global) -> Result<Output, Failure> {
    let input: IdealFile = read_json(file)?;
    let ideal = input.to_ideal()?;
    let f = parse_in(by, &ideal.vars).map_err(|e| Failure::usage(e.to_string()))?;
    Ok(ideal_output(&saturate(&ideal, &f, &budget(global)?)?))
}

/// A graph fixture or a bare graph file, with the fixture's p_g if any.
fn load_graph(file: &Path, global: &Global) -> Result<(Result<ResolutionGraph, GraphError>, Option<i64>), Failure> {
    let path = locate(file, global).or_else(|_| if file.is_file() { Ok(file.to_path_buf()) } else { Err(Failure::usage(format!("{}: not found", file.display()))) })?;
    let raw: Value = read_json(&path)?;
    if raw.get("kind").is_some() {
        let fx = read_fixture(&path)?;
        let (input, g) = tools::graph(&fx)?;
        Ok((g, input.pg))
    } else {
        let gf: GraphFile = read_json(&path)?;
        Ok((gf.to_graph(), None))
    }
}

fn cmd_graph(file: &Path, pg: Option<i64>, global: &Global) -> Result<Output, Failure> {
    let (g, fixture_pg) = load_graph(file, global)?;
    let g = match g {
        Ok(g) => g,
        Err(GraphError::NotNegativeDefinite(cert)) => {
            let msg = cert.to_string();
            return Ok(Output {
                text: format!("definite false\n{msg}\n"),
                tsv: format!("key\tvalue\ndefinite\tfalse\ncertificate\t{msg}\n"),
                json: json!({ "definite": false, "certificate": msg }),
                code: FAIL,
            });
        }
        Err(e) => return Err(Failure::usage(e.to_string())),
    };
    let a = graph_analyze(&g);
    let k = canonical_cycle(&g);
    let cycle: Vec<(String, String)> = k.cycle.coefficients.iter().map(|(v, c)| (v.clone(), format_rational(c))).collect();
    let mut rows: Vec<(String, String)> = vec![
        ("determinant".into(), a.determinant.clone()),
        ("definite".into(), a.definite.to_string()),
        ("b1".into(), a.b1.to_string()),
        ("b2".into(), a.b2.to_string()),
        ("K".into(), cycle.iter().map(|(v, c)| format!("{v}:{c}")).collect::<Vec<_>>().join(" ")),
        ("K^2".into(), format_rational(&k.k_squared)),
        ("integral".into(), k.integral.to_string()),
    ];
    let mut j = json!({
        "determinant": a.determinant,
        "definite": a.definite,
        "b1": a.b1,
        "b2": a.b2,
        "canonicalCycle": cycle.iter().map(|(v, c)| (v.clone(), json!(c))).collect::<serde_json::Map<_, _>>(),
        "kSquared": format_rational(&k.k_squared),
        "integral": k.integral,
    });
    if let Some(p) = pg.or(fixture_pg) {
        let ld = laufer_durfee_sw(&g, p, None);
        rows.push(("pg".into(), p.to_string()));
        rows.push(("mu".into(), format_rational(&ld.mu)));
        rows.push(("sigma".into(), format_rational(&ld.sigma)));
        j["pg"] = json!(p);
        j["mu"] = json!(format_rational(&ld.mu));
        j["sigma"] = json!(format_rational(&ld.sigma));
    }
    let mut text = String::new();
    let mut tsv = String::from("key\tvalue\n");
    for (key, v) in &rows {
        let _ = writeln!(text, "{key} {v}");
        let _ = writeln!(tsv, "{key}\t{v}");
    }
    Ok(Output::ok(text, tsv, j))
}

fn cmd_splice(file: &Path, global: &Global) -> Result<Output, Failure> {
    let (g, _) = load_graph(file, global)?;
    let g = g.map_err(|e| Failure::fail(e.to_string()))?;
    let sd = splice_diagram(&g).map_err(|e| Failure::fail(e.to_string()))?;
    let violations = semigroup_condition(&sd);
    let dets = edge_determinants(&g, &sd);
    let end = |e: &cuspcover::topology::SpliceEnd| match e.weight {
        Some(w) => format!("{}[{w}]", e.vertex),
        None => e.vertex.clone(),
    };
    let mut text = format!("nodes {}\nleaves {}\n", sd.nodes.join(" "), sd.leaves.join(" "));
    let mut tsv = String::from("from\tweight_from\tto\tweight_to\n");
    for e in &sd.edges {
        let _ = writeln!(text, "edge {} -- {}", end(&e.ends[0]), end(&e.ends[1]));
        let w = |x: Option<u64>| x.map_or("-".into(), |v| v.to_string());
        let _ = writeln!(tsv, "{}\t{}\t{}\t{}", e.ends[0].vertex, w(e.ends[0].weight), e.ends[1].vertex, w(e.ends[1].weight));
    }
    if violations.is_empty() {
        text.push_str("semigroup condition satisfied\n");
    }
    for v in &violations {
        let _ = writeln!(text, "violation: {v}");
    }
    for d in &dets {
        let _ = writeln!(text, "edge determinant {}-{}: {} vs {}", d.nodes[0], d.nodes[1], d.lhs, d.rhs);
    }
    Ok(Output::ok(text, tsv, json!({ "diagram": sd, "violations": violations, "edgeDeterminants": dets })))
}

fn report_output(report: &Report) -> Output {
    let text = report.render(Format::Text);
    let tsv = report.render(Format::Tsv);
    let json = serde_json::to_value(report).expect("report");
    Output { text, tsv, json, code: report.exit_code() as u8 }
}

fn run_options(extended: bool, global: &Global) -> Result<RunOptions, Failure> {
    Ok(RunOptions { extended, budget: budget(global)? })
}

fn cmd_verify(file: &Path, extended: bool, global: &Global) -> Result<Output, Failure> {
    let (corpus, fx) = load(file, global)?;
    let report = Report { fixtures: vec![run_fixture(&corpus, &fx, &run_options(extended, global)?)] };
    Ok(report_output(&report))
}

fn cmd_verify_all(extended: bool, global: &Global) -> Result<Output, Failure> {
    let dir = global.fixture_dir.clone().unwrap_or_else(|| PathBuf::from("fixtures"));
    if !dir.is_dir() {
        return Err(Failure::usage(format!("{}: fixture directory not found", dir.display())));
    }
    let corpus = Corpus::load(&dir)?;
    Ok(report_output(&run_all(&corpus, &run_options(extended, global)?)))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let g = &cli.global;
    match &cli.cmd {
        Cmd::Sections { file, range } => cmd_sections(file, *range, g),
        Cmd::Ring { file, relation_degree } => cmd_ring(file, *relation_degree, g),
        Cmd::Pg { file } => cmd_pg(file, g),
        Cmd::Gb { file, order } => cmd_gb(file, order.as_deref(), g),
        Cmd::Nf { file, poly } => cmd_nf(file, poly, g),
        Cmd::Eliminate { file, vars } => cmd_eliminate(file, vars, g),
        Cmd::Saturate { file, by } => cmd_saturate(file, by, g),
        Cmd::Graph { file, pg } => cmd_graph(file, *pg, g),
        Cmd::Splice { file } => cmd_splice(file, g),
        Cmd::Verify { file, extended } => cmd_verify(file, *extended, g),
        Cmd::VerifyAll { extended } => cmd_verify_all(*extended, g),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.render(cli.global.format));
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
