//! Command-line front end.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::folding::{classify_orbit, fold, orbit_name, FoldConfig, FoldedSystem};
use crate::graph::{classify_finite_type, CoxeterGraph};
use crate::linalg::Matrix;
use crate::oracle::{verify_folded, Mode, VerificationReport, VerifyConfig, DEFAULT_CAP, DEFAULT_SAMPLES};
use crate::repr::build_rep;
use crate::rootbasis::{canonical_root_basis, validate_root_basis, RootBasis};
use crate::scalar::Tolerances;
use crate::symmetry::{
    automorphism_group, generate_group, orbits, parse_symmetries, SymmetryGroup, DEFAULT_AUTOMORPHISM_CAP,
    DEFAULT_GROUP_CAP,
};

#[derive(Debug, Parser)]
#[command(name = "coxfold", version, about = "Fold Coxeter graphs along graph symmetries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the orbits of the symmetry group with their types.
    Orbits {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Fold the graph and print the folded system.
    Fold {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Fold and check the result against brute-force enumeration.
    Verify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Print the generator matrices of the rooted representation.
    Repr {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Print every automorphism of the graph.
    Automorphisms {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        run: RunConfig,
    },
}

#[derive(Debug, Args)]
pub struct Input {
    /// Graph JSON file.
    #[arg(long)]
    pub graph: PathBuf,
    /// Symmetry generators JSON file; omitted means the trivial group.
    #[arg(long)]
    pub symmetry: Option<PathBuf>,
    /// Root basis JSON file; omitted means the canonical basis.
    #[arg(long)]
    pub root_basis: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunConfig {
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, default_value_t = crate::folding::DEFAULT_K_MAX, value_parser = clap::value_parser!(u32).range(3..))]
    pub k_max: u32,
    /// Element cap for group enumeration.
    #[arg(long, env = "COXFOLD_CAP", default_value_t = DEFAULT_CAP, value_parser = parse_cap)]
    pub cap: usize,
    #[arg(long, default_value_t = crate::oracle::DEFAULT_SEED)]
    pub seed: u64,
    /// Output format; each command has its own default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn parse_cap(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("cap must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit status. Normal output goes to `out`, diagnostics and
/// warnings to `err`.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command, err) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

struct Loaded {
    graph: CoxeterGraph,
    group: SymmetryGroup,
    basis: RootBasis<f64>,
}

fn load(input: &Input) -> Result<Loaded> {
    let graph = CoxeterGraph::from_json(&read(&input.graph)?)?;
    let group = match &input.symmetry {
        Some(p) => {
            let gens = parse_symmetries(&graph, &read(p)?)?;
            generate_group(&graph, &gens, DEFAULT_GROUP_CAP)?
        }
        None => SymmetryGroup::trivial(&graph),
    };
    let basis = match &input.root_basis {
        Some(p) => RootBasis::from_json(&graph, &read(p)?)?,
        None => canonical_root_basis(&graph),
    };
    Ok(Loaded { graph, group, basis })
}

fn tolerances(run: &RunConfig) -> Result<Tolerances<f64>> {
    if !(run.tolerance > 0.0) {
        return Err(Error::Parse(format!("tolerance must be positive, got {}", run.tolerance)));
    }
    Ok(Tolerances::with_eq(run.tolerance))
}

fn unsupported(cmd: &str, f: Format) -> Error {
    let name = f.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    Error::Parse(format!("format `{name}` is not available for `{cmd}`"))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn execute(cmd: &Command, err: &mut dyn Write) -> Result<(String, i32)> {
    match cmd {
        Command::Orbits { input, run } => cmd_orbits(input, run).map(|s| (s, 0)),
        Command::Fold { input, run } => cmd_fold(input, run, err).map(|s| (s, 0)),
        Command::Verify { input, run } => cmd_verify(input, run),
        Command::Repr { input, run } => cmd_repr(input, run).map(|s| (s, 0)),
        Command::Automorphisms { input, run } => cmd_automorphisms(input, run).map(|s| (s, 0)),
    }
}

#[derive(Serialize)]
struct OrbitDoc {
    name: String,
    members: Vec<String>,
    finite: bool,
    #[serde(rename = "type")]
    orbit_type: Option<String>,
}

fn cmd_orbits(input: &Input, run: &RunConfig) -> Result<String> {
    let Loaded { graph, group, .. } = load(input)?;
    let mut docs = Vec::new();
    for orbit in orbits(&group).orbits {
        let finite = classify_finite_type(&graph.full_subgraph_by_index(&orbit)).is_finite;
        let orbit_type = if finite { Some(classify_orbit(&group, &orbit)?.to_string()) } else { None };
        docs.push(OrbitDoc {
            name: orbit_name(&graph, &orbit),
            members: orbit.iter().map(|&i| graph.name(i).to_string()).collect(),
            finite,
            orbit_type,
        });
    }
    match run.format.unwrap_or(Format::Text) {
        Format::Json => Ok(to_json(&docs)),
        Format::Text => {
            let mut s = String::new();
            for d in &docs {
                let kind = match &d.orbit_type {
                    Some(t) => format!("finite, type {t}"),
                    None => "infinite".to_string(),
                };
                let _ = writeln!(s, "{} {{{}}} {kind}", d.name, d.members.join(", "));
            }
            Ok(s)
        }
        f => Err(unsupported("orbits", f)),
    }
}

fn fold_config(run: &RunConfig) -> Result<FoldConfig<f64>> {
    Ok(FoldConfig { k_max: run.k_max, tol: tolerances(run)? })
}

fn warn_excluded(graph: &CoxeterGraph, folded: &FoldedSystem<f64>, err: &mut dyn Write) {
    for orbit in &folded.excluded_orbits {
        let names: Vec<&str> = orbit.iter().map(|&i| graph.name(i)).collect();
        let _ = writeln!(
            err,
            "warning: orbit {} {{{}}} has an infinite parabolic subgroup and is left out",
            orbit_name(graph, orbit),
            names.join(", ")
        );
    }
    if folded.generators.is_empty() {
        let _ = writeln!(err, "warning: the folded graph is empty");
    }
}

/// DOT drawing of a Coxeter graph: edges only for labels `>= 3`.
pub fn to_dot(g: &CoxeterGraph) -> String {
    let mut s = String::from("graph folded {\n");
    for v in g.vertices() {
        let _ = writeln!(s, "  \"{v}\";");
    }
    for (i, j, m) in g.edges() {
        let _ = writeln!(s, "  \"{}\" -- \"{}\" [label=\"{m}\"];", g.name(i), g.name(j));
    }
    s.push_str("}\n");
    s
}

fn fold_document(graph: &CoxeterGraph, folded: &FoldedSystem<f64>) -> serde_json::Value {
    let names: Vec<&str> = folded.generators.iter().map(|x| x.name.as_str()).collect();
    let generators: Vec<_> = folded
        .generators
        .iter()
        .zip(folded.folded_root_basis.roots())
        .map(|(x, coords)| {
            json!({
                "name": x.name,
                "members": x.orbit.iter().map(|&i| graph.name(i)).collect::<Vec<_>>(),
                "type": x.orbit_type.to_string(),
                "word": x.word_names(graph),
                "norm_a": x.norm_ax,
                "root": coords,
                "root_in_v": x.eps_tilde,
            })
        })
        .collect();
    let bi_orbits: Vec<_> = folded
        .bi_orbits
        .iter()
        .map(|b| {
            json!({
                "x": b.x, "y": b.y, "v_x": b.v_x, "v_y": b.v_y, "p_x": b.p_x, "p_y": b.p_y,
                "inner": b.inner, "m_tilde": b.m_tilde, "pattern": b.pattern.to_string(),
            })
        })
        .collect();
    let excluded: Vec<Vec<&str>> =
        folded.excluded_orbits.iter().map(|o| o.iter().map(|&i| graph.name(i)).collect()).collect();
    let graph_doc: serde_json::Value =
        serde_json::from_str(&folded.folded_graph.to_json()).expect("graph JSON is valid");
    json!({
        "graph": graph_doc,
        "vertices": names,
        "coxeter_matrix": folded.m_tilde,
        "generators": generators,
        "bi_orbits": bi_orbits,
        "fixed_basis": folded.fixed.basis,
        "bilinear": folded.fixed.projected_bilinear,
        "excluded_orbits": excluded,
    })
}

fn cmd_fold(input: &Input, run: &RunConfig, err: &mut dyn Write) -> Result<String> {
    let Loaded { graph, group, basis } = load(input)?;
    let folded = fold(&basis, &group, &fold_config(run)?)?;
    warn_excluded(&graph, &folded, err);
    match run.format.unwrap_or(Format::Json) {
        Format::Json => Ok(to_json(&fold_document(&graph, &folded))),
        Format::Dot => Ok(to_dot(&folded.folded_graph)),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "folded graph: {}", folded_summary(&folded.folded_graph));
            for x in &folded.generators {
                let members: Vec<&str> = x.orbit.iter().map(|&i| graph.name(i)).collect();
                let _ = writeln!(
                    s,
                    "{} {{{}}} type {} word {}",
                    x.name,
                    members.join(", "),
                    x.orbit_type,
                    x.word_names(&graph).join(" ")
                );
            }
            for b in &folded.bi_orbits {
                let _ = writeln!(s, "m({}, {}) = {} inner {} pattern {}", b.x, b.y, b.m_tilde, b.inner, b.pattern);
            }
            Ok(s)
        }
    }
}

fn folded_summary(g: &CoxeterGraph) -> String {
    if g.is_empty() {
        return "empty".into();
    }
    classify_finite_type(g).components.iter().map(|(_, t)| t.to_string()).collect::<Vec<_>>().join(" + ")
}

fn cmd_verify(input: &Input, run: &RunConfig) -> Result<(String, i32)> {
    let Loaded { basis, group, .. } = load(input)?;
    let config = VerifyConfig {
        fold: fold_config(run)?,
        cap: run.cap,
        samples: DEFAULT_SAMPLES,
        seed: run.seed,
        reflection_tol: 1e-8,
    };
    let folded = fold(&basis, &group, &config.fold)?;
    let report = verify_folded(&basis, &folded, &config)?;
    let code = if report.passed { 0 } else { 5 };
    let text = match run.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&report),
        Format::Text => report_text(&report),
        f => return Err(unsupported("verify", f)),
    };
    Ok((text, code))
}

fn report_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    let mode = match r.mode {
        Mode::Oracle => "oracle (full enumeration)",
        Mode::Property => "property checks only (oracle inapplicable)",
    };
    let _ = writeln!(s, "mode: {mode}");
    let show = |o: Option<usize>| o.map_or("-".to_string(), |n| n.to_string());
    if r.mode == Mode::Oracle {
        let _ = writeln!(
            s,
            "|W| = {}, |W^G| = {}, |<w_X>| = {}, |W(folded)| = {}",
            show(r.order_w),
            show(r.order_fixed),
            show(r.order_generated),
            show(r.order_folded)
        );
    }
    let _ = writeln!(s, "folded graph: {}", r.folded_graph);
    for l in &r.labels {
        let _ = writeln!(s, "m({}, {}) = {}", l.x, l.y, l.m_tilde);
    }
    for c in &r.checks {
        let _ = writeln!(s, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    for w in &r.counterexamples {
        let _ = writeln!(s, "counterexample: {}", w.join(" "));
    }
    let _ = writeln!(s, "{}", if r.passed { "all checks passed" } else { "verification failed" });
    s
}

fn cmd_repr(input: &Input, run: &RunConfig) -> Result<String> {
    let Loaded { graph, basis, .. } = load(input)?;
    validate_root_basis(&basis, &tolerances(run)?)?;
    let rep = build_rep(&basis);
    let matrices: BTreeMap<&str, &Matrix<f64>> =
        graph.vertices().iter().map(String::as_str).zip(rep.matrices.iter()).collect();
    match run.format.unwrap_or(Format::Json) {
        Format::Json => Ok(to_json(&matrices)),
        Format::Text => {
            let mut s = String::new();
            for (name, m) in &matrices {
                let _ = writeln!(s, "{name}:");
                for r in 0..m.rows() {
                    let row: Vec<String> = m.row(r).iter().map(|x| x.to_string()).collect();
                    let _ = writeln!(s, "  [{}]", row.join(", "));
                }
            }
            Ok(s)
        }
        f => Err(unsupported("repr", f)),
    }
}

fn cmd_automorphisms(input: &Input, run: &RunConfig) -> Result<String> {
    let graph = CoxeterGraph::from_json(&read(&input.graph)?)?;
    let group = automorphism_group(&graph, DEFAULT_AUTOMORPHISM_CAP)?;
    let moved = |g: &crate::symmetry::Symmetry| -> BTreeMap<String, String> {
        g.to_named_map(&graph).into_iter().filter(|(a, b)| a != b).collect()
    };
    match run.format.unwrap_or(Format::Json) {
        Format::Json => {
            let docs: Vec<_> = group.elements().iter().map(|g| json!({ "map": moved(g) })).collect();
            Ok(to_json(&docs))
        }
        Format::Text => {
            let mut s = format!("order {}\n", group.order());
            for g in group.elements() {
                let _ = writeln!(s, "{}", cycle_notation(&graph, g));
            }
            Ok(s)
        }
        f => Err(unsupported("automorphisms", f)),
    }
}

fn cycle_notation(graph: &CoxeterGraph, g: &crate::symmetry::Symmetry) -> String {
    let n = graph.len();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] || g.apply(start) == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            cycle.push(graph.name(v));
            v = g.apply(v);
        }
        cycles.push(format!("({})", cycle.join(" ")));
    }
    if cycles.is_empty() {
        "()".into()
    } else {
        cycles.concat()
    }
}

/// Runs with the process arguments and standard streams.
pub fn main_with_std() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
