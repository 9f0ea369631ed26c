//! Command-line front end. Every verb builds a [`Report`]; `--json` prints
//! it as JSON, otherwise as text. Exit codes: 0 success, 1 a check failed,
//! 2 a budget ran out, 3 bad input or usage.

mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::constructions::{
    build_emn, emn_sweep, enumerate_hsat, hsat_closure, ids_of, is_hsat, one_step_resolution, quotient_graph,
    separated_of_vertex_weighted, separated_of_weighted, standard_sweep, bratteli_capped, ConstructionError, HSatSet,
    DEFAULT_EDGE_CAP,
};
use crate::graphs::text::{self, GraphFileError};
use crate::graphs::{fingerprint, BipartiteSeparatedGraph, GraphDoc, SeparatedGraph, WeightedGraph};
use crate::homs::{
    ideal_generators, phi0, phi1, phi_vw, rho_tau, verify, GeneratorMap, HomError, IdealKind, RelationSet,
    VerifyReport,
};
use crate::mnlab::{
    example_59_report, ideal_matrices, ideal_matrices_from_hsat, minimal_configurations, partition_lattice, refinement_matrix, MnError,
    MnPartition,
};
use crate::monoids::{
    congruent, grothendieck, leavitt_type, m1_of, monoid_of, order_ideals, order_ideals_weighted, Budget, Congruence,
    LeavittType, MonoidError, MonoidPresentation, NVec,
};
use crate::staralg::{eval_separated, parse_expr, Algebra, AlgebraError, ExprError, Vocabulary};

pub use report::{BudgetEcho, Provenance, Report, Status};

#[derive(Debug, Parser)]
#[command(name = "sepal", version, about = "Separated and weighted Leavitt path algebra workbench")]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a graph file.
    Validate {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Graph constructions.
    #[command(subcommand)]
    Construct(Construct),
    /// Hereditary C-saturated sets.
    #[command(subcommand)]
    Hsat(HsatCmd),
    /// Normal form of an expression.
    Nf {
        #[arg(long)]
        graph: PathBuf,
        /// Joined with spaces, so the expression need not be quoted.
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        expr: Vec<String>,
    },
    /// Check that a map sends every relation to 0.
    Verify {
        map: MapKind,
        #[arg(long, required_unless_present = "sweep")]
        graph: Option<PathBuf>,
        /// Run over the built-in sweep of small graphs instead.
        #[arg(long, conflicts_with = "graph")]
        sweep: bool,
    },
    /// Generators of one of the ideals.
    IdealGens {
        #[arg(long)]
        kind: IdealKindArg,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        bound: Option<usize>,
        /// Vertices of the hereditary C-saturated set, for `--kind hsat`.
        #[arg(long = "h", num_args = 0..)]
        h: Vec<String>,
    },
    /// Graph monoids and their invariants.
    #[command(subcommand)]
    Monoid(MonoidCmd),
    /// (m,n)-weighted graphs on one vertex.
    #[command(subcommand)]
    Mnlab(MnlabCmd),
}

#[derive(Debug, Subcommand)]
pub enum Construct {
    /// The separated graph E(m,n).
    Emn {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// (E(ω), C(ω)) of a vertex-weighted graph.
    Vw2sep {
        #[arg(long)]
        graph: PathBuf,
    },
    /// (E(ω)₁, C(ω)¹) of a weighted graph.
    W2sep {
        #[arg(long)]
        graph: PathBuf,
    },
    /// 1-step resolution of a bipartite separated graph.
    Resolve {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Layers of the separated Bratteli diagram.
    Bratteli {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_EDGE_CAP)]
        max_edges: u128,
    },
    /// Quotient by a hereditary C-saturated set.
    Quotient {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "h", num_args = 0..)]
        h: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum HsatCmd {
    /// Is the set hereditary and C-saturated? Prints a witness if not.
    Check {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "h", num_args = 0..)]
        h: Vec<String>,
    },
    /// Smallest hereditary C-saturated set containing the given vertices.
    Closure {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "h", num_args = 0..)]
        h: Vec<String>,
    },
    /// Every hereditary C-saturated set, smallest first.
    Enumerate {
        #[arg(long)]
        graph: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MapKind {
    Phi,
    Phi1,
    Phi0,
    RhoTau,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IdealKindArg {
    I0,
    Kernel,
    Commutator,
    Hsat,
}

impl From<IdealKindArg> for IdealKind {
    fn from(k: IdealKindArg) -> Self {
        match k {
            IdealKindArg::I0 => IdealKind::I0,
            IdealKindArg::Kernel => IdealKind::Kernel,
            IdealKindArg::Commutator => IdealKind::Commutator,
            IdealKindArg::Hsat => IdealKind::Hsat,
        }
    }
}

#[derive(Debug, Args)]
pub struct MonoidInput {
    #[arg(long)]
    pub graph: PathBuf,
    /// Largest coordinate sum explored by congruence search.
    #[arg(long)]
    pub max_sum: Option<u64>,
    /// Largest number of states visited by congruence search.
    #[arg(long)]
    pub max_states: Option<usize>,
}

impl MonoidInput {
    fn budget(&self) -> Budget {
        let mut b = Budget::from_env();
        if let Some(s) = self.max_sum {
            b.max_sum = s;
        }
        if let Some(s) = self.max_states {
            b.max_states = s;
        }
        b
    }
}

#[derive(Debug, Subcommand)]
pub enum MonoidCmd {
    /// M(E,C) of a separated graph or M₁(E,ω) of a weighted one.
    Present {
        #[command(flatten)]
        input: MonoidInput,
    },
    /// Grothendieck group, by Smith normal form.
    Grothendieck {
        #[command(flatten)]
        input: MonoidInput,
    },
    /// Least (p,q) with p·a ~ (p+q)·a.
    LeavittType {
        #[command(flatten)]
        input: MonoidInput,
        /// Defaults to the first generator.
        #[arg(long)]
        generator: Option<String>,
    },
    /// Order ideals, through hereditary C-saturated sets.
    OrderIdeals {
        #[command(flatten)]
        input: MonoidInput,
    },
    /// Decide `x ~ y`; vectors are written like `2v + w` or `0`.
    Congruent {
        #[command(flatten)]
        input: MonoidInput,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
}

#[derive(Debug, Args)]
pub struct MnArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: u32,
}

#[derive(Debug, Subcommand)]
pub enum MnlabCmd {
    /// The lattice of (m,n)-partitions.
    Partitions {
        #[command(flatten)]
        mn: MnArgs,
    },
    /// Refinement matrix of a partition, the largest one by default.
    Refinement {
        #[command(flatten)]
        mn: MnArgs,
        #[arg(long, num_args = 1..)]
        partition: Vec<u32>,
    },
    /// 0/1 matrices of the proper order ideals of the largest graph.
    IdealMatrices {
        #[command(flatten)]
        mn: MnArgs,
    },
    /// Minimal configurations, one per maximal ideal.
    MinConfigs {
        #[command(flatten)]
        mn: MnArgs,
    },
    /// Invariants of the smallest partition (n,1^(m−1)) and its quotient.
    Example59 {
        #[command(flatten)]
        mn: MnArgs,
        #[arg(long)]
        max_sum: Option<u64>,
        #[arg(long)]
        max_states: Option<usize>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Graph(#[from] GraphFileError),
    #[error("expression: {0}")]
    Expr(#[from] ExprError),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Mnlab(#[from] MnError),
}

impl CliError {
    /// Stable code for scripts.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Graph(GraphFileError::Syntax(_)) => "syntax",
            CliError::Graph(GraphFileError::Invalid(_)) => "invalid-graph",
            CliError::Expr(_) => "expression",
            CliError::Input(_) => "input",
            CliError::Construction(_) => "construction",
            CliError::Algebra(_) => "algebra",
            CliError::Hom(_) => "homomorphism",
            CliError::Monoid(_) => "monoid",
            CliError::Mnlab(_) => "mnlab",
        }
    }
}

type Res<T> = Result<T, CliError>;

/// Parses a graph file in the text format.
pub fn parse_graph_file(text: &str) -> Result<GraphDoc, GraphFileError> {
    text::parse(text)
}

fn read_graph(path: &Path) -> Res<(GraphDoc, String)> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let doc = parse_graph_file(&text)?;
    let hash = fingerprint(&doc.to_raw());
    Ok((doc, hash))
}

fn weighted(doc: &GraphDoc) -> Res<&WeightedGraph> {
    match doc {
        GraphDoc::Weighted(w) => Ok(w),
        other => Err(CliError::Input(format!("needs a weighted graph, got a {} graph", other.kind_name()))),
    }
}

fn separated(doc: &GraphDoc) -> Res<&SeparatedGraph> {
    doc.separated()
        .ok_or_else(|| CliError::Input("needs a separated graph, got a weighted graph".into()))
}

/// Bipartite input as given, or `(E(ω)₁, C(ω)¹)` for weighted input.
fn bipartite(doc: &GraphDoc) -> Res<BipartiteSeparatedGraph> {
    match doc {
        GraphDoc::Bipartite(b) => Ok(b.clone()),
        GraphDoc::Weighted(w) => Ok(separated_of_weighted(w)?),
        GraphDoc::Separated(_) => Err(CliError::Input("needs a bipartite separated graph".into())),
    }
}

fn graph_report(verb: &str, hash: Option<String>, g: &GraphDoc) -> Report {
    let mut r = Report::new(verb);
    let text = text::print_doc(g);
    r.provenance.graph_hash = hash;
    if let Some(s) = g.separated() {
        r.provenance.distinguished = s.distinguished_choices();
    }
    r.payload = json!({ "kind": g.kind_name(), "graph": text, "hash": fingerprint(&g.to_raw()) });
    r.text = text;
    r
}

/// Parses arguments (the first is the program name) and runs them; usage
/// errors come back as rendered clap messages.
pub fn report_for_args<I, T>(args: I) -> Result<Report, String>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| e.render().to_string())?;
    Ok(run(&cli.command))
}

/// Parses arguments and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Status::Error.exit_code() } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let report = run(&cli.command);
    let out = report.render(cli.json);
    // A closed pipe (`sepal … | head`) is not worth a panic.
    let _ = if report.status == Status::Error && !cli.json {
        writeln!(std::io::stderr(), "{out}")
    } else {
        writeln!(std::io::stdout(), "{out}")
    };
    report.status.exit_code()
}

pub fn verb_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Validate { .. } => "validate",
        Command::Construct(_) => "construct",
        Command::Hsat(_) => "hsat",
        Command::Nf { .. } => "nf",
        Command::Verify { .. } => "verify",
        Command::IdealGens { .. } => "ideal-gens",
        Command::Monoid(_) => "monoid",
        Command::Mnlab(_) => "mnlab",
    }
}

pub fn run(cmd: &Command) -> Report {
    let verb = verb_name(cmd);
    let result = match cmd {
        Command::Validate { graph } => run_validate(graph),
        Command::Construct(c) => run_construct(c),
        Command::Hsat(c) => run_hsat(c),
        Command::Nf { graph, expr } => run_nf(graph, &expr.join(" ")),
        Command::Verify { map, graph, sweep } => run_verify(*map, graph.as_deref(), *sweep),
        Command::IdealGens { kind, graph, bound, h } => run_ideal_gens(*kind, graph, *bound, h),
        Command::Monoid(c) => run_monoid(c),
        Command::Mnlab(c) => run_mnlab(c),
    };
    match result {
        Ok(mut r) => {
            r.verb = verb.to_string();
            r
        }
        Err(e) => Report::error(verb, e.code(), e.to_string()),
    }
}

fn run_validate(path: &Path) -> Res<Report> {
    let (doc, hash) = read_graph(path)?;
    let class = crate::graphs::classify(doc.directed());
    let mut r = graph_report("validate", Some(hash), &doc);
    r.payload["valid"] = json!(true);
    r.payload["class"] = serde_json::to_value(&class).expect("serializable");
    r.text = format!("valid {} graph", doc.kind_name());
    Ok(r)
}

fn run_construct(c: &Construct) -> Res<Report> {
    let (doc, hash) = match c {
        Construct::Emn { m, n } => (GraphDoc::Bipartite(build_emn(*m, *n)?), None),
        Construct::Vw2sep { graph } => {
            let (d, h) = read_graph(graph)?;
            (GraphDoc::Bipartite(separated_of_vertex_weighted(weighted(&d)?)?), Some(h))
        }
        Construct::W2sep { graph } => {
            let (d, h) = read_graph(graph)?;
            (GraphDoc::Bipartite(separated_of_weighted(weighted(&d)?)?), Some(h))
        }
        Construct::Resolve { graph } => {
            let (d, h) = read_graph(graph)?;
            (GraphDoc::Bipartite(one_step_resolution(&bipartite(&d)?)?), Some(h))
        }
        Construct::Quotient { graph, h } => {
            let (d, hash) = read_graph(graph)?;
            let g = separated(&d)?;
            let set = HSatSet::from_names(g, h)?;
            (GraphDoc::Separated(quotient_graph(g, &set)?), Some(hash))
        }
        Construct::Bratteli { graph, depth, max_edges } => {
            let (d, hash) = read_graph(graph)?;
            let tower = bratteli_capped(&bipartite(&d)?, *depth, *max_edges)?;
            let mut r = Report::new("construct");
            r.provenance.graph_hash = Some(hash);
            let layers: Vec<String> = tower.layers.iter().map(|l| text::print(&l.to_raw())).collect();
            let counts: Vec<(usize, usize)> =
                tower.layers.iter().map(|l| (l.graph().vertex_count(), l.graph().edge_count())).collect();
            r.text = layers
                .iter()
                .enumerate()
                .map(|(i, l)| format!("# layer {i}\n{l}"))
                .collect::<Vec<_>>()
                .join("\n");
            r.payload = json!({ "layers": layers, "sizes": counts });
            return Ok(r);
        }
    };
    Ok(graph_report("construct", hash, &doc))
}

fn hsat_ids(g: &SeparatedGraph, h: &[String]) -> Res<std::collections::BTreeSet<u32>> {
    Ok(ids_of(g, h)?)
}

fn run_hsat(c: &HsatCmd) -> Res<Report> {
    let mut r = Report::new("hsat");
    match c {
        HsatCmd::Check { graph, h } => {
            let (d, hash) = read_graph(graph)?;
            let g = separated(&d)?;
            let check = is_hsat(g, &hsat_ids(g, h)?);
            r.provenance.graph_hash = Some(hash);
            r.status = if check.is_hsat() { Status::Ok } else { Status::Failure };
            r.text = format!("hereditary: {}\nsaturated: {}", check.hereditary, check.saturated);
            if let Some(e) = &check.hereditary_witness {
                r.text += &format!("\nedge {e} leaves the set");
            }
            if let Some(w) = &check.saturation_witness {
                r.text += &format!("\n{} has [{}] ranging inside the set", w.vertex, w.set.join(" "));
            }
            r.payload = serde_json::to_value(&check).expect("serializable");
        }
        HsatCmd::Closure { graph, h } => {
            let (d, hash) = read_graph(graph)?;
            let g = separated(&d)?;
            let names = hsat_closure(g, &hsat_ids(g, h)?).names(g);
            r.provenance.graph_hash = Some(hash);
            r.text = format!("{{{}}}", names.join(", "));
            r.payload = json!({ "closure": names });
        }
        HsatCmd::Enumerate { graph } => {
            let (d, hash) = read_graph(graph)?;
            let g = separated(&d)?;
            let sets: Vec<Vec<String>> = enumerate_hsat(g).iter().map(|s| s.names(g)).collect();
            r.provenance.graph_hash = Some(hash);
            r.text = sets.iter().map(|s| format!("{{{}}}", s.join(", "))).collect::<Vec<_>>().join("\n");
            r.payload = json!({ "count": sets.len(), "sets": sets });
        }
    }
    Ok(r)
}

fn run_nf(path: &Path, input: &str) -> Res<Report> {
    let (doc, hash) = read_graph(path)?;
    let mut r = nf_report(&doc, input)?;
    r.provenance.graph_hash = Some(hash);
    Ok(r)
}

/// Normal form of `input` in the algebra of `doc`; weighted graphs are
/// mapped into their separated model first.
pub fn nf_report(doc: &GraphDoc, input: &str) -> Res<Report> {
    let mut r = Report::new("nf");
    let (alg, element, computed_in) = match &doc {
        GraphDoc::Weighted(w) => {
            let expr = parse_expr(input, &Vocabulary::weighted(w))?;
            let map = if w.is_vertex_weighted() { phi_vw(w)? } else { phi1(w)? };
            let x = map.apply(&expr)?;
            (map.target().clone(), x, map.name().to_string())
        }
        _ => {
            let g = separated(doc)?;
            let expr = parse_expr(input, &Vocabulary::separated(g))?;
            let alg = match doc {
                GraphDoc::Bipartite(b) => Algebra::bipartite(b),
                _ => Algebra::new(g.clone()),
            };
            let x = eval_separated(&expr, &alg)?;
            (alg, x, "L(E,C)".to_string())
        }
    };
    let nf = alg.normal_form(&element);
    r.provenance.distinguished = alg.graph().distinguished_choices();
    r.text = alg.format(&nf);
    r.payload = json!({ "input": input, "normal_form": alg.format(&nf), "terms": nf.len(), "computed_in": computed_in });
    Ok(r)
}

fn maps_for(kind: MapKind, doc: &GraphDoc) -> Res<Vec<(GeneratorMap, RelationSet)>> {
    Ok(match kind {
        MapKind::Phi => {
            let w = weighted(doc)?;
            vec![(phi_vw(w)?, RelationSet::weighted(w))]
        }
        MapKind::Phi1 => {
            let w = weighted(doc)?;
            vec![(phi1(w)?, RelationSet::l1(w))]
        }
        MapKind::Phi0 => {
            let b = bipartite(doc)?;
            vec![(phi0(&b)?, RelationSet::separated(b.separated()))]
        }
        MapKind::RhoTau => {
            let b = bipartite(doc)?;
            let map = rho_tau(&b)?;
            vec![(map.clone(), RelationSet::lv(&b)), (map, RelationSet::lw(&b))]
        }
    })
}

/// Verifies the map of the given kind against every relation family it
/// should kill.
pub fn verify_doc(kind: MapKind, doc: &GraphDoc) -> Res<Vec<VerifyReport>> {
    maps_for(kind, doc)?.iter().map(|(m, rels)| Ok(verify(m, rels)?)).collect()
}

fn run_verify(kind: MapKind, graph: Option<&Path>, sweep: bool) -> Res<Report> {
    let mut r = Report::new("verify");
    if sweep {
        let mut docs: Vec<GraphDoc> = standard_sweep()
            .into_iter()
            .filter(|w| kind != MapKind::Phi || w.is_vertex_weighted())
            .map(GraphDoc::Weighted)
            .collect();
        if matches!(kind, MapKind::Phi0 | MapKind::RhoTau) {
            docs.extend(emn_sweep(3).into_iter().map(GraphDoc::Bipartite));
        }
        let mut rows = Vec::new();
        let mut all = true;
        let mut checked = 0;
        for d in &docs {
            let reports = verify_doc(kind, d)?;
            let ok = reports.iter().all(|x| x.all_zero);
            checked += reports.iter().map(|x| x.checked).sum::<usize>();
            all &= ok;
            rows.push(json!({
                "graph": fingerprint(&d.to_raw()),
                "all_zero": ok,
                "failures": reports.iter().flat_map(|x| x.failures().cloned()).collect::<Vec<_>>(),
            }));
        }
        r.status = if all { Status::Ok } else { Status::Failure };
        r.text = format!("graphs: {}\nrelations checked: {checked}\nall_zero: {all}", docs.len());
        r.payload = json!({ "graphs": docs.len(), "checked": checked, "all_zero": all, "results": rows });
        return Ok(r);
    }
    let path = graph.ok_or_else(|| CliError::Input("--graph or --sweep is required".into()))?;
    let (doc, hash) = read_graph(path)?;
    let maps = maps_for(kind, &doc)?;
    r.provenance.graph_hash = Some(hash);
    r.provenance.distinguished = maps[0].0.target().graph().distinguished_choices();
    let reports: Vec<VerifyReport> = maps.iter().map(|(m, rels)| verify(m, rels)).collect::<Result<_, _>>()?;
    let all = reports.iter().all(|x| x.all_zero);
    r.status = if all { Status::Ok } else { Status::Failure };
    let mut lines = Vec::new();
    for x in &reports {
        lines.push(format!("{} on {}: {} relations, all_zero: {}", x.map, x.kind, x.checked, x.all_zero));
        for f in x.failures() {
            lines.push(format!("  {} -> {}", f.label, f.residue.as_deref().unwrap_or("")));
        }
    }
    r.text = lines.join("\n");
    r.payload = json!({ "all_zero": all, "reports": reports });
    Ok(r)
}

fn run_ideal_gens(kind: IdealKindArg, path: &Path, bound: Option<usize>, h: &[String]) -> Res<Report> {
    let (doc, hash) = read_graph(path)?;
    let src = ideal_generators(kind.into(), &doc, bound, h)?;
    let mut r = Report::new("ideal-gens");
    r.provenance.graph_hash = Some(hash);
    r.provenance.distinguished = src.algebra.graph().distinguished_choices();
    let gens = src.formatted();
    r.text = gens.iter().map(|(l, x)| format!("{l}: {x}")).collect::<Vec<_>>().join("\n");
    r.payload = json!({
        "kind": src.kind,
        "count": gens.len(),
        "generators": gens.iter().map(|(l, x)| json!({ "label": l, "element": x })).collect::<Vec<_>>(),
    });
    Ok(r)
}

/// `M₁(E,ω)` for weighted input, `M(E,C)` otherwise.
pub fn presentation(doc: &GraphDoc) -> MonoidPresentation {
    match doc {
        GraphDoc::Weighted(w) => m1_of(w),
        other => monoid_of(other.separated().expect("not weighted")),
    }
}

/// Reads `2v + w`, `v(e1,1)` or `0` as a vector over the generators.
pub fn parse_vector(p: &MonoidPresentation, text: &str) -> Res<NVec> {
    let mut v = vec![0; p.rank()];
    let text = text.trim();
    if text == "0" {
        return Ok(v);
    }
    for term in text.split('+') {
        let term = term.trim();
        let digits = term.chars().take_while(char::is_ascii_digit).count();
        let (c, name) = term.split_at(digits);
        let c: u64 = if c.is_empty() {
            1
        } else {
            c.parse().map_err(|_| CliError::Input(format!("bad coefficient in `{term}`")))?
        };
        let name = name.trim();
        v[p.index(name)?] += c;
    }
    Ok(v)
}

fn presentation_json(p: &MonoidPresentation) -> Value {
    json!({
        "generators": p.generators(),
        "relations": p.relations().iter().map(|(l, r)| json!([p.format_vector(l), p.format_vector(r)])).collect::<Vec<_>>(),
        "text": p.to_string(),
    })
}

fn run_monoid(c: &MonoidCmd) -> Res<Report> {
    let input = match c {
        MonoidCmd::Present { input }
        | MonoidCmd::Grothendieck { input }
        | MonoidCmd::LeavittType { input, .. }
        | MonoidCmd::OrderIdeals { input }
        | MonoidCmd::Congruent { input, .. } => input,
    };
    let (doc, hash) = read_graph(&input.graph)?;
    let p = presentation(&doc);
    let budget = input.budget();
    let mut r = Report::new("monoid");
    r.provenance.graph_hash = Some(hash);
    r.provenance.budget = Some(budget.into());
    match c {
        MonoidCmd::Present { .. } => {
            r.text = p.to_string();
            r.payload = presentation_json(&p);
        }
        MonoidCmd::Grothendieck { .. } => {
            let g = grothendieck(&p);
            r.text = g.to_string();
            r.payload = json!({ "presentation": p.to_string(), "group": g });
        }
        MonoidCmd::LeavittType { generator, .. } => {
            let a = match generator {
                Some(a) => a.clone(),
                None => p.generators().first().cloned().ok_or_else(|| CliError::Input("no generators".into()))?,
            };
            let t = leavitt_type(&p, &a, budget)?;
            r.text = match &t {
                LeavittType::Found { p, q } => format!("({p},{q})"),
                LeavittType::Unknown { reason } => {
                    r.status = Status::Unknown;
                    format!("unknown: {reason}")
                }
            };
            r.payload = json!({ "generator": a, "type": t });
        }
        MonoidCmd::OrderIdeals { .. } => {
            let lat = match &doc {
                GraphDoc::Weighted(w) => order_ideals_weighted(w)?,
                other => order_ideals(separated(other)?),
            };
            r.text = lat
                .ideals
                .iter()
                .map(|i| format!("{{{}}}", i.generators.join(", ")))
                .collect::<Vec<_>>()
                .join("\n");
            r.payload = json!({ "count": lat.len(), "lattice": lat });
        }
        MonoidCmd::Congruent { x, y, .. } => {
            let (vx, vy) = (parse_vector(&p, x)?, parse_vector(&p, y)?);
            let ans = congruent(&p, &vx, &vy, budget)?;
            r.text = match &ans {
                Congruence::Yes { trace } => {
                    let mut lines = vec![format!("yes ({} steps)", trace.len())];
                    for s in trace {
                        lines.push(format!(
                            "  {} -> {}  [relation {}{}]",
                            p.format_vector(&s.from),
                            p.format_vector(&s.to),
                            s.relation,
                            if s.forward { "" } else { ", reversed" }
                        ));
                    }
                    lines.join("\n")
                }
                Congruence::No { reason } => {
                    r.status = Status::Failure;
                    format!("no: {reason}")
                }
                Congruence::Unknown { states, reason } => {
                    r.status = Status::Unknown;
                    format!("unknown after {states} states: {reason}")
                }
            };
            r.payload = json!({ "x": p.format_vector(&vx), "y": p.format_vector(&vy), "answer": ans });
        }
    }
    Ok(r)
}

fn matrices_report(r: &mut Report, ms: &[crate::mnlab::ShapeMatrix], encoding: Option<&str>) {
    r.text = ms.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("\n\n");
    r.payload = json!({ "count": ms.len(), "matrices": ms.iter().map(|m| &m.rows).collect::<Vec<_>>() });
    if let Some(e) = encoding {
        r.payload["encoding"] = json!(e);
    }
}

const ENCODING: &str = "entry (i,j) is 1 exactly when v(e_j,i) is not in H";

fn run_mnlab(c: &MnlabCmd) -> Res<Report> {
    let mut r = Report::new("mnlab");
    match c {
        MnlabCmd::Partitions { mn } => {
            let lat = partition_lattice(mn.m, mn.n)?;
            r.text = lat.partitions.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("\n");
            r.payload = json!({
                "count": lat.partitions.len(),
                "partitions": lat.partitions.iter().map(|p| p.parts()).collect::<Vec<_>>(),
                "covers": lat.covers,
            });
        }
        MnlabCmd::Refinement { mn, partition } => {
            let p = if partition.is_empty() {
                MnPartition::largest(mn.m, mn.n)?
            } else {
                MnPartition::new(mn.m, mn.n, partition.clone())?
            };
            let rm = refinement_matrix(&p);
            let rels = rm.relations();
            r.text = format!("{rm}\n\n{rels}");
            r.payload = json!({
                "partition": p.parts(),
                "weights": p.weights(),
                "shape": p.shape().rows,
                "entries": rm.entries,
                "relations": presentation_json(&rels),
            });
        }
        MnlabCmd::IdealMatrices { mn } => {
            let ms = ideal_matrices(mn.m, mn.n)?;
            matrices_report(&mut r, &ms, Some(ENCODING));
            // Cross-check against the hsat sets where that is cheap.
            if mn.m * mn.n as usize <= 16 {
                let agrees = ideal_matrices_from_hsat(mn.m, mn.n)? == ms;
                r.payload["hsat_agrees"] = json!(agrees);
                if !agrees {
                    r.status = Status::Failure;
                    r.text.push_str("\n\nmismatch: hsat sets give a different list");
                }
            }
        }
        MnlabCmd::MinConfigs { mn } => matrices_report(&mut r, &minimal_configurations(mn.m, mn.n)?, Some(ENCODING)),
        MnlabCmd::Example59 { mn, max_sum, max_states } => {
            let mut budget = Budget::from_env();
            if let Some(s) = max_sum {
                budget.max_sum = *s;
            }
            if let Some(s) = max_states {
                budget.max_states = *s;
            }
            let rep = example_59_report(mn.m, mn.n, budget)?;
            r.provenance.budget = Some(budget.into());
            let ty = |t: &LeavittType| match t {
                LeavittType::Found { p, q } => format!("({p},{q})"),
                LeavittType::Unknown { reason } => format!("unknown ({reason})"),
            };
            if matches!(rep.leavitt_type, LeavittType::Unknown { .. })
                || matches!(rep.quotient.leavitt_type, LeavittType::Unknown { .. })
            {
                r.status = Status::Unknown;
            } else if !rep.diagonal_map.verify.all_zero {
                r.status = Status::Failure;
            }
            let matrix: Vec<String> = rep.generator_matrix.iter().map(|row| row.join(" ")).collect();
            r.text = [
                format!("M1: {}", rep.m1),
                format!("simplified: {}", rep.simplified),
                format!("group: {}", rep.group),
                format!("type: {}", ty(&rep.leavitt_type)),
                format!("nontrivial ideals: {:?}", rep.nontrivial_ideals),
                format!("quotient: {}", rep.quotient.presentation),
                format!("quotient group: {}", rep.quotient.group),
                format!("quotient type: {}", ty(&rep.quotient.leavitt_type)),
                format!("generator matrix:\n{}", matrix.join("\n")),
                format!(
                    "map into {}: {} relations, all_zero: {}",
                    rep.diagonal_map.target, rep.diagonal_map.verify.checked, rep.diagonal_map.verify.all_zero
                ),
            ]
            .join("\n");
            r.payload = serde_json::to_value(&rep).expect("serializable");
        }
    }
    Ok(r)
}
