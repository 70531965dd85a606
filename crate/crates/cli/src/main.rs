//! `minksum`: analysis, master-polytope tables, verification and DOT export
//! for Minkowski sums of standard simplices.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use minksum::corpus;
use minksum::formulas::{self, TwoSumStats};
use minksum::master::{self, Labeling};
use minksum::repfn::{self, DEFAULT_REPFN_BUDGET};
use minksum::skeleton::{self, SkeletonOptions, DEFAULT_MAX_PARTITION_R, DEFAULT_MAX_VERTICES};
use minksum::verify::{self, Status, SuiteOptions};
use minksum::{Error, FPolynomial, SimplexFamily, SkeletonGraph};
use serde::Serialize;

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "minksum", version, about = "Exact combinatorics of Minkowski sums of simplices")]
struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Rep-function enumeration budget.
    #[arg(long, global = true, env = "MINKSUM_BUDGET", default_value_t = DEFAULT_REPFN_BUDGET)]
    budget: u128,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Labels {
    Canonical,
    Paper3,
}

impl From<Labels> for Labeling {
    fn from(l: Labels) -> Self {
        match l {
            Labels::Canonical => Labeling::Canonical,
            Labels::Paper3 => Labeling::Paper3,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Vertices, skeleton, degrees and f-vector of a family given as JSON
    /// `{"r": 3, "sets": [[1, 2], [2, 3]]}`.
    Analyze {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
        max_vertices: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_PARTITION_R)]
        max_partition_r: usize,
    },
    /// Vertex matrix of the master polytope P(k) with a degree row.
    Master {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "canonical")]
        labels: Labels,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
        max_vertices: usize,
    },
    /// Run a named check suite (`paper` or `quick`) and print a scoreboard.
    Verify {
        suite: String,
        /// Leave out the P(4) skeleton.
        #[arg(long)]
        skip_p4: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Closed forms against brute force, one row per case.
    Formulas {
        /// Largest ground size for the two-set sweeps.
        #[arg(long, default_value_t = 5)]
        max_r: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Skeleton in Graphviz DOT.
    ExportDot {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
        max_vertices: usize,
    },
}

/// Error carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Domain(_) | Error::Precondition(_) => EXIT_INPUT,
            Error::Capability(_) => EXIT_BUDGET,
            _ => EXIT_FAIL,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::new(EXIT_FAIL, format!("{e:#}"))
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn read_family(path: &Path) -> CliResult<SimplexFamily> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{e:#}")))?;
    Ok(SimplexFamily::from_json(&text)?)
}

fn print_json<T: Serialize>(value: &T) -> CliResult {
    let text = serde_json::to_string_pretty(value).context("serializing output")?;
    println!("{text}");
    Ok(())
}

#[derive(Serialize)]
struct CheckRow {
    name: &'static str,
    status: Status,
}

#[derive(Serialize)]
struct AnalysisReport {
    family: SimplexFamily,
    ground_size: usize,
    set_count: usize,
    dimension: usize,
    components: usize,
    vertex_count: Option<usize>,
    edge_count: Option<usize>,
    degree_histogram: Option<BTreeMap<usize, usize>>,
    max_degree: Option<usize>,
    degree_bound: u64,
    f_vector: Option<FPolynomial>,
    checks: Vec<CheckRow>,
    skipped: Vec<String>,
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn skeleton_checks(graph: &SkeletonGraph, r: usize) -> CliResult<Vec<CheckRow>> {
    let degrees = graph.degrees();
    let handshake = degrees.iter().sum::<usize>() == 2 * graph.edges().len();
    let bound = graph.max_degree() as u64 <= formulas::d_max(r as u64);
    let mut digraphs = true;
    for v in 0..graph.vertices().len() {
        let d = skeleton::vertex_digraph(graph, v)?;
        digraphs &= d.is_acyclic()
            && d.underlying_is_simple()
            && d.underlying_is_triangle_free()
            && d.arc_count() == degrees[v];
    }
    Ok(vec![
        CheckRow {
            name: "handshake",
            status: status(handshake),
        },
        CheckRow {
            name: "max_degree_within_bound",
            status: status(bound),
        },
        CheckRow {
            name: "vertex_digraphs",
            status: status(digraphs),
        },
        CheckRow {
            name: "connected",
            status: status(graph.is_connected()),
        },
    ])
}

fn cmd_analyze(file: &Path, budget: u128, max_vertices: usize, max_partition_r: usize) -> CliResult {
    let family = read_family(file)?;
    let r = family.ground_size();
    let mut report = AnalysisReport {
        ground_size: r,
        set_count: family.len(),
        dimension: family.dimension(),
        components: family.components().count(),
        vertex_count: None,
        edge_count: None,
        degree_histogram: None,
        max_degree: None,
        degree_bound: formulas::d_max(r as u64),
        f_vector: None,
        checks: Vec::new(),
        skipped: Vec::new(),
        family: family.clone(),
    };
    match repfn::vertices(&family, budget) {
        Ok(v) => report.vertex_count = Some(v.len()),
        Err(Error::Capability(why)) => report.skipped.push(format!("vertices: {why}")),
        Err(e) => return Err(e.into()),
    }
    if report.vertex_count.is_some() {
        let opts = SkeletonOptions {
            max_vertices,
            repfn_budget: budget,
            ..SkeletonOptions::default()
        };
        match skeleton::build_skeleton_with(&family, &opts) {
            Ok(g) => {
                report.edge_count = Some(g.edges().len());
                report.degree_histogram = Some(skeleton::degree_histogram(&g));
                report.max_degree = Some(g.max_degree());
                report.checks = skeleton_checks(&g, r)?;
            }
            Err(Error::Capability(why)) => report.skipped.push(format!("skeleton: {why}")),
            Err(e) => return Err(e.into()),
        }
    } else {
        report.skipped.push("skeleton: needs the vertex list".into());
    }
    if report.vertex_count.is_some() {
        match skeleton::f_vector(&family, max_partition_r) {
            Ok(f) => {
                report.checks.push(CheckRow {
                    name: "f0_equals_vertex_count",
                    status: status(report.vertex_count == Some(f.coefficient(0) as usize)),
                });
                if let Some(e) = report.edge_count {
                    report.checks.push(CheckRow {
                        name: "f1_equals_edge_count",
                        status: status(e == f.coefficient(1) as usize),
                    });
                }
                report.f_vector = Some(f);
            }
            Err(Error::Capability(why)) => report.skipped.push(format!("f_vector: {why}")),
            Err(e) => return Err(e.into()),
        }
    } else {
        report.skipped.push("f_vector: needs the vertex list".into());
    }
    print_json(&report)?;
    if !report.skipped.is_empty() {
        return Err(Failure::new(
            EXIT_BUDGET,
            format!("budget exceeded, skipped stages: {}", report.skipped.join("; ")),
        ));
    }
    if report.checks.iter().any(|c| c.status == Status::Fail) {
        return Err(Failure::new(EXIT_FAIL, "a consistency check failed"));
    }
    Ok(())
}

#[derive(Serialize)]
struct MasterReport {
    k: usize,
    labeling: Labeling,
    /// `signatures[i]` is the signature of coordinate `i + 1`.
    signatures: Vec<Vec<usize>>,
    sets: Vec<Vec<usize>>,
    vertex_count: usize,
    edge_count: Option<usize>,
    degree_histogram: Option<BTreeMap<usize, usize>>,
    /// Column blocks by number of positive singleton coordinates.
    groups: Vec<Vec<MasterColumn>>,
    skipped: Vec<String>,
}

#[derive(Serialize)]
struct MasterColumn {
    vertex: Vec<u32>,
    degree: Option<usize>,
}

fn master_text(report: &MasterReport) -> String {
    let rows = report.signatures.len();
    let cell = |v: String| format!("{v:>3}");
    let mut lines = vec![String::new(); rows + 2];
    for (gi, group) in report.groups.iter().enumerate() {
        for line in lines.iter_mut() {
            if gi > 0 {
                line.push_str("  |");
            }
        }
        for col in group {
            for (r, line) in lines.iter_mut().take(rows).enumerate() {
                line.push_str(&cell(col.vertex[r].to_string()));
            }
            lines[rows].push_str("---");
            lines[rows + 1].push_str(&cell(col.degree.map_or("?".into(), |d| d.to_string())));
        }
    }
    let mut out = format!(
        "P({}) with {} labeling: {} vertices",
        report.k, report.labeling, report.vertex_count
    );
    if let Some(e) = report.edge_count {
        out.push_str(&format!(", {e} edges"));
    }
    out.push('\n');
    let names: Vec<String> = report
        .signatures
        .iter()
        .map(|sig| format!("N{{{}}}", sig.iter().map(ToString::to_string).collect::<String>()))
        .collect();
    let w = names.iter().map(String::len).max().unwrap_or(0);
    for (name, line) in names.iter().zip(&lines) {
        out.push_str(&format!("{name:>w$} {}\n", line.trim_end()));
    }
    out.push_str(&format!("{:>w$} {}\n", "", lines[rows]));
    out.push_str(&format!("{:>w$} {}\n", "deg", lines[rows + 1].trim_end()));
    out
}

fn cmd_master(k: usize, labels: Labels, format: Format, budget: u128, max_vertices: usize) -> CliResult {
    let m = master::build_master(k, labels.into())?;
    let vertices = repfn::vertices(m.family(), budget)?;
    let opts = SkeletonOptions {
        max_vertices,
        repfn_budget: budget,
        ..SkeletonOptions::default()
    };
    let (graph, skipped) = match skeleton::build_skeleton_with(m.family(), &opts) {
        Ok(g) => (Some(g), Vec::new()),
        Err(Error::Capability(why)) => (None, vec![format!("skeleton: {why}")]),
        Err(e) => return Err(e.into()),
    };
    let degrees = graph.as_ref().map(SkeletonGraph::degrees);
    let groups = master::column_groups(&m, &vertices)
        .into_iter()
        .map(|g| {
            g.into_iter()
                .map(|i| MasterColumn {
                    vertex: vertices[i].coords().to_vec(),
                    degree: degrees.as_ref().map(|d| d[i]),
                })
                .collect()
        })
        .collect();
    let report = MasterReport {
        k,
        labeling: m.labeling(),
        signatures: m.signatures().to_vec(),
        sets: m.family().sets().to_vec(),
        vertex_count: vertices.len(),
        edge_count: graph.as_ref().map(|g| g.edges().len()),
        degree_histogram: graph.as_ref().map(skeleton::degree_histogram),
        groups,
        skipped,
    };
    match format {
        Format::Json => print_json(&report)?,
        Format::Text => print!("{}", master_text(&report)),
    }
    if !report.skipped.is_empty() {
        return Err(Failure::new(
            EXIT_BUDGET,
            format!("budget exceeded, skipped stages: {}", report.skipped.join("; ")),
        ));
    }
    Ok(())
}

fn cmd_verify(suite: &str, skip_p4: bool, format: Format) -> CliResult {
    let opts = SuiteOptions {
        include_p4_skeleton: !skip_p4,
        ..SuiteOptions::default()
    };
    let outcomes = verify::run_suite(suite, &opts)?;
    match format {
        Format::Json => print_json(&outcomes)?,
        Format::Text => {
            for o in &outcomes {
                println!("{}", o.line());
            }
            let passed = outcomes.iter().filter(|o| o.status == Status::Pass).count();
            println!("{passed}/{} passed", outcomes.len());
        }
    }
    if outcomes.iter().any(|o| o.status == Status::Fail) {
        return Err(Failure::new(EXIT_FAIL, "verification failed"));
    }
    Ok(())
}

#[derive(Serialize)]
struct FormulaRow {
    formula: &'static str,
    case: String,
    closed_form: String,
    brute_force: String,
    status: Status,
}

fn row(formula: &'static str, case: String, closed: impl ToString, brute: impl ToString) -> FormulaRow {
    let (closed_form, brute_force) = (closed.to_string(), brute.to_string());
    FormulaRow {
        formula,
        status: status(closed_form == brute_force),
        case,
        closed_form,
        brute_force,
    }
}

fn two_sum_rows(r: usize, rows: &mut Vec<FormulaRow>) -> CliResult {
    let mut counts = (0usize, 0usize, 0usize);
    let mut fpoly = (0usize, 0usize);
    for (a, b) in corpus::two_set_pairs(r) {
        let f = SimplexFamily::new(r, vec![a.clone(), b.clone()])?;
        let g = skeleton::build_skeleton(&f)?;
        let s = TwoSumStats::from_sets(&a, &b);
        counts.0 += 1;
        counts.1 += usize::from(formulas::two_sum_vertex_count(s) == g.vertices().len() as u64);
        counts.2 += usize::from(formulas::two_sum_edge_count(s) == g.edges().len() as u64);
        if r <= DEFAULT_MAX_PARTITION_R {
            fpoly.0 += 1;
            let faces = skeleton::f_vector(&f, DEFAULT_MAX_PARTITION_R)?;
            fpoly.1 += usize::from(formulas::two_sum_f_polynomial(&a, &b)? == faces);
        }
    }
    let case = format!("all pairs on [{r}]");
    rows.push(row("two-sum vertex count", case.clone(), counts.0, counts.1));
    rows.push(row("two-sum edge count", case.clone(), counts.0, counts.2));
    if fpoly.0 > 0 {
        rows.push(row("two-sum f-polynomial", case, fpoly.0, fpoly.1));
    }
    Ok(())
}

fn cmd_formulas(max_r: usize, format: Format) -> CliResult {
    let mut rows = Vec::new();
    for r in 2..=max_r {
        two_sum_rows(r, &mut rows)?;
    }
    for r in 2..=max_r.max(2) {
        for k in 1..=r / 2 {
            let f = formulas::lower_bound_family(k, r)?;
            let g = skeleton::build_skeleton(&f)?;
            let closed = formulas::d_k_max(k as u64, r as u64)?;
            rows.push(row("d_k(r) = k(r-k)", format!("k={k} r={r}"), closed, g.max_degree()));
        }
    }
    for n in 2..=formulas::MAX_MANTEL_N {
        for k in 1..=n / 2 {
            let rep = formulas::verify_mantel_brute(n, k)?;
            let brute = if rep.maximizers == rep.complete_bipartite_maximizers {
                rep.max_edges.to_string()
            } else {
                format!("{} (non-bipartite maximizer)", rep.max_edges)
            };
            rows.push(row("e_k(n) = k(n-k)", format!("n={n} k={k}"), rep.expected, brute));
        }
    }
    let (ok, detail) = verify::check_average_degree(40)?;
    rows.push(row(
        "r-1 <= avg deg < 10(r-1)/9",
        "all (x,y,z), r <= 40".into(),
        "holds",
        if ok { "holds".to_string() } else { detail },
    ));
    match format {
        Format::Json => print_json(&rows)?,
        Format::Text => {
            let width = |f: fn(&FormulaRow) -> usize| rows.iter().map(f).max().unwrap_or(0);
            let (w1, w2) = (width(|r| r.formula.len()), width(|r| r.case.len()));
            let (w3, w4) = (width(|r| r.closed_form.len()), width(|r| r.brute_force.len()));
            for r in &rows {
                let s = if r.status == Status::Pass { "PASS" } else { "FAIL" };
                println!(
                    "{s}  {:<w1$}  {:<w2$}  {:>w3$}  {:>w4$}",
                    r.formula, r.case, r.closed_form, r.brute_force
                );
            }
        }
    }
    if rows.iter().any(|r| r.status == Status::Fail) {
        return Err(Failure::new(EXIT_FAIL, "a closed form disagrees with brute force"));
    }
    Ok(())
}

fn cmd_export_dot(file: &Path, output: Option<&Path>, budget: u128, max_vertices: usize) -> CliResult {
    let family = read_family(file)?;
    let opts = SkeletonOptions {
        max_vertices,
        repfn_budget: budget,
        ..SkeletonOptions::default()
    };
    let dot = skeleton::build_skeleton_with(&family, &opts)?.to_dot();
    match output {
        Some(path) => fs::write(path, dot).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{dot}"),
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker threads")?;
    }
    match cli.command {
        Command::Analyze {
            file,
            max_vertices,
            max_partition_r,
        } => cmd_analyze(&file, cli.budget, max_vertices, max_partition_r),
        Command::Master {
            k,
            labels,
            format,
            max_vertices,
        } => cmd_master(k, labels, format, cli.budget, max_vertices),
        Command::Verify { suite, skip_p4, format } => cmd_verify(&suite, skip_p4, format),
        Command::Formulas { max_r, format } => cmd_formulas(max_r, format),
        Command::ExportDot {
            file,
            output,
            max_vertices,
        } => cmd_export_dot(&file, output.as_deref(), cli.budget, max_vertices),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("minksum: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
