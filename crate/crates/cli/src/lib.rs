//! The `clt` command line: argument parsing, dispatch and report output.
//!
//! Exit codes: 0 on success, 1 when a checked property fails, 2 on invalid
//! input or any library error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use clt_core::asphericity::{
    adjoin_stable_letter, cl_basis_from_transversal, coset_transversal, verify_whitehead_window, z_cover_rewrite,
    Membership, StableLetterReport, WordProblemOracle, ZCover, ZRewrite, DEFAULT_SEARCH,
};
use clt_core::chain::{build_chain, verify_bottom, BottomVerdict, ChainReport};
use clt_core::gog::{
    freiheitssatz_probe, fundamental_presentation, normal_form, FundamentalPresentation, GraphOfGroups,
    ProbeCertificates, ProbeReport, ProbeVerdict, Syllable,
};
use clt_core::homology::{
    build_complexes, check_composites, homology_trivial_coeffs, order_certificate, torsion_decomposition,
    CompositeCheck, ComplexSpec, HomologyReport, OrderCertificate, TorsionReport,
};
use clt_core::perm::Perm;
use clt_core::stagger::{check_staggered, check_strongly_staggered, find_staggering, StaggerReport, Staggering};
use clt_core::stallings::{basis_report, build_and_fold};
use clt_core::trees::{axis_footprint, axis_segment, fixes_vertex, translation_length, Axis, TreeModel};
use clt_core::words::parse_word_list;
use clt_core::{Generator, Word};

/// Node budget for the heuristic staggering search.
const SEARCH_BUDGET: usize = 100_000;

#[derive(Parser, Debug)]
#[command(name = "clt", version, about = "Free groups acting on trees: staggerings, chains and Cohen-Lyndon bases")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Translation length, footprint and a window of the axis of an element.
    Axis(AxisArgs),
    /// Check or search for a staggering of a relator set.
    Stagger(StaggerArgs),
    /// Build the descending subgroup chain for S and Phi.
    Chain(ChainArgs),
    /// Cohen-Lyndon basis window for one relator.
    Clbasis(ClBasisArgs),
    /// Free-basis or Whitehead-subset check.
    VerifyBasis(VerifyBasisArgs),
    /// Presentation, normal forms and embedding probes for a graph of groups.
    Gog(GogArgs),
    /// Torsion of the quotient and order certificates.
    Torsion(TorsionArgs),
    /// Chain complexes and trivial-coefficient homology.
    Homology(HomologyArgs),
    /// Rewriting over a kernel onto Z, or adjoining a stable letter.
    Rewrite(RewriteArgs),
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// `cayley:N` or `freeproduct:L:R`.
    #[arg(long, default_value = "cayley:2")]
    model: String,
    /// JSON graph of groups; overrides --model.
    #[arg(long)]
    input: Option<PathBuf>,
}

impl ModelArgs {
    fn load(&self) -> Result<TreeModel> {
        match &self.input {
            Some(path) => Ok(TreeModel::from_gog(read_gog(path)?)),
            None => Ok(self.model.parse()?),
        }
    }
}

#[derive(Args, Debug)]
struct AxisArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    relator: String,
    /// Number of fundamental domains in the drawn segment.
    #[arg(long, default_value_t = 3)]
    window: usize,
}

#[derive(Args, Debug)]
struct StaggerArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Comma-separated relators.
    #[arg(long, alias = "relator")]
    relators: String,
    /// Comma-separated orbit labels; searched for when absent.
    #[arg(long)]
    order: Option<String>,
    /// Also check the strong conditions.
    #[arg(long)]
    strong: bool,
}

#[derive(Args, Debug)]
struct ChainArgs {
    #[arg(long)]
    rank: usize,
    #[arg(long = "S")]
    s: String,
    #[arg(long = "Phi", default_value = "")]
    phi: String,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// `abelianized`, `dehn`, `search[:K:M]` or `finite:(1 2);(2 3)`.
    #[arg(long)]
    oracle: Option<String>,
}

#[derive(Args, Debug)]
struct ClBasisArgs {
    #[arg(long)]
    rank: usize,
    #[arg(long)]
    relator: String,
    #[command(flatten)]
    oracle: OracleArgs,
    /// Radius of the ball scanned for coset representatives.
    #[arg(long = "L", default_value_t = 2)]
    l: usize,
    /// Number of representatives kept.
    #[arg(long, default_value_t = 9)]
    window: usize,
}

#[derive(Args, Debug)]
struct VerifyBasisArgs {
    #[arg(long)]
    rank: usize,
    /// Comma-separated candidate words.
    #[arg(long)]
    words: String,
    /// Generators of the ambient subgroup; switches to the Whitehead check.
    #[arg(long)]
    gens: Option<String>,
    #[arg(long, default_value_t = 2)]
    bound: usize,
}

#[derive(Args, Debug)]
struct GogArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Words to put in normal form.
    #[arg(long, alias = "relator")]
    relators: Option<String>,
    /// Vertex-group element to probe in the quotient by the single relator.
    #[arg(long)]
    probe: Option<String>,
    /// Permutation images, `;`-separated, one per generator.
    #[arg(long)]
    perms: Option<String>,
    /// Bounded search `K:M`.
    #[arg(long)]
    search: Option<String>,
}

#[derive(Args, Debug)]
struct TorsionArgs {
    #[arg(long)]
    rank: usize,
    #[arg(long, alias = "relator")]
    relators: String,
    #[command(flatten)]
    oracle: OracleArgs,
    #[arg(long = "L", default_value_t = 2)]
    l: usize,
    /// Word whose order is certified with --perms.
    #[arg(long)]
    word: Option<String>,
    #[arg(long)]
    perms: Option<String>,
}

#[derive(Args, Debug)]
struct HomologyArgs {
    #[arg(long)]
    rank: usize,
    #[arg(long, alias = "relator", default_value = "")]
    relators: String,
    /// Oracle for the composite check; skipped when absent.
    #[command(flatten)]
    oracle: OracleArgs,
}

#[derive(Args, Debug)]
struct RewriteArgs {
    /// Degrees of the generators, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    grading: String,
    /// Number of generators in the left factor.
    #[arg(long)]
    left_rank: Option<usize>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    word: Option<String>,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    shift: i64,
    /// Adjoin a stable letter for this degree ±1 word instead of rewriting.
    #[arg(long)]
    stable: Option<String>,
    #[arg(long, default_value_t = 3)]
    window: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisReport {
    pub element: Word,
    pub fixes_vertex: bool,
    pub translation_length: Option<usize>,
    pub footprint: Vec<String>,
    pub axis: Option<Axis>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaggerOutput {
    pub feasible: bool,
    pub order: Option<Vec<String>>,
    pub report: Option<StaggerReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainOutput {
    pub report: ChainReport,
    pub bottom: BottomVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GogOutput {
    pub presentation: FundamentalPresentation,
    pub normal_forms: Vec<(Word, Vec<Syllable>)>,
    pub probe: Option<ProbeReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionOutput {
    pub report: TorsionReport,
    pub order: Option<OrderCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyOutput {
    pub cells: ComplexSpec,
    pub subdivided: ComplexSpec,
    pub homology: HomologyReport,
    pub subdivided_homology: HomologyReport,
    pub composites: Option<Vec<CompositeCheck>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RewriteOutput {
    Rewrite(ZRewrite),
    Stable(StableLetterReport),
}

/// A rendered report and whether its checked property held.
struct Report {
    json: String,
    dot: Option<String>,
    text: String,
    ok: bool,
}

impl Report {
    fn new<T: Serialize>(value: &T, text: String, ok: bool) -> Result<Report> {
        Ok(Report { json: serde_json::to_string_pretty(value)? + "\n", dot: None, text, ok })
    }

    fn with_dot(mut self, dot: String) -> Report {
        self.dot = Some(dot);
        self
    }
}

fn read_gog(path: &PathBuf) -> Result<GraphOfGroups> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn words(text: &str, rank: usize) -> Result<Vec<Word>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    Ok(parse_word_list(text, rank)?)
}

fn list(ws: &[Word]) -> String {
    ws.iter().map(Word::to_string).collect::<Vec<_>>().join(", ")
}

fn parse_perms(text: &str) -> Result<Vec<Perm>> {
    let degree = text
        .split(|c: char| !c.is_ascii_digit())
        .filter(|t| !t.is_empty())
        .map(str::parse::<usize>)
        .collect::<std::result::Result<Vec<_>, _>>()?
        .into_iter()
        .max()
        .unwrap_or(1);
    text.split(';').map(|p| Ok(Perm::parse_cycles(p.trim(), degree)?)).collect()
}

fn parse_pair(text: &str) -> Result<(usize, usize)> {
    let (k, m) = text.split_once(':').ok_or_else(|| anyhow!("expected K:M, got {text:?}"))?;
    Ok((k.trim().parse()?, m.trim().parse()?))
}

fn parse_oracle(spec: &str, rank: usize, relators: &[Word]) -> Result<WordProblemOracle> {
    let single = || -> Result<&Word> {
        match relators {
            [r] => Ok(r),
            _ => bail!("oracle {spec:?} needs exactly one relator"),
        }
    };
    let (head, rest) = spec.split_once(':').map_or((spec, None), |(h, r)| (h, Some(r)));
    Ok(match (head, rest) {
        ("abelianized", None) => WordProblemOracle::abelianized(rank, single()?)?,
        ("dehn", None) => WordProblemOracle::dehn(rank, single()?)?,
        ("search", None) => WordProblemOracle::bounded_search(rank, relators.to_vec(), DEFAULT_SEARCH.0, DEFAULT_SEARCH.1),
        ("search", Some(km)) => {
            let (k, m) = parse_pair(km)?;
            WordProblemOracle::bounded_search(rank, relators.to_vec(), k, m)
        }
        ("finite", Some(p)) => WordProblemOracle::finite_quotient(rank, relators.to_vec(), parse_perms(p)?)?,
        _ => bail!("unknown oracle {spec:?}"),
    })
}

fn axis(a: &AxisArgs) -> Result<Report> {
    let model = a.model.load()?;
    let r = Word::parse_in(&a.relator, model.rank())?;
    let fixed = fixes_vertex(&model, &r)?;
    let rep = if fixed {
        AxisReport { element: r.clone(), fixes_vertex: true, translation_length: None, footprint: vec![], axis: None }
    } else {
        AxisReport {
            element: r.clone(),
            fixes_vertex: false,
            translation_length: Some(translation_length(&model, &r)?),
            footprint: axis_footprint(&model, &r)?.into_iter().map(|o| model.orbit_label(o)).collect(),
            axis: model.axis(&r)?,
        }
    };
    let text = match rep.translation_length {
        None => format!("{r} fixes a vertex\n"),
        Some(l) => format!("{r}: translation length {l}, footprint {{{}}}\n", rep.footprint.join(", ")),
    };
    let report = Report::new(&rep, text, true)?;
    Ok(if fixed { report } else { report.with_dot(model.subtree_dot(&axis_segment(&model, &r, a.window)?)) })
}

fn stagger(a: &StaggerArgs) -> Result<Report> {
    let model = a.model.load()?;
    let rels = words(&a.relators, model.rank())?;
    let ord = match &a.order {
        Some(text) => Some(Staggering::parse(&model, text)?),
        None => find_staggering(&model, &rels, SEARCH_BUDGET)?,
    };
    let out = match ord {
        None => StaggerOutput { feasible: false, order: None, report: None },
        Some(ord) => {
            let rep =
                if a.strong { check_strongly_staggered(&model, &rels, &ord)? } else { check_staggered(&model, &rels, &ord)? };
            let ok = if a.strong { rep.strongly_staggered() } else { rep.staggered() };
            StaggerOutput { feasible: ok, order: Some(rep.order_labels.clone()), report: Some(rep) }
        }
    };
    let mut text = match &out.order {
        Some(o) if out.feasible => format!("staggered under {}\n", o.join(" < ")),
        Some(o) => format!("not staggered under {}\n", o.join(" < ")),
        None => "no staggering exists\n".to_string(),
    };
    if let Some(rep) = &out.report {
        for c in &rep.conditions {
            text += &format!("  {}: {:?}{}\n", c.condition, c.verdict, if c.witness.is_empty() { String::new() } else { format!(" ({})", c.witness.join(", ")) });
        }
    }
    let ok = out.feasible;
    Ok(Report::new(&out, text, ok)?.with_dot(model.quotient_dot()))
}

fn chain(a: &ChainArgs) -> Result<Report> {
    let model = TreeModel::cayley(a.rank);
    let s = words(&a.s, a.rank)?;
    let phi = words(&a.phi, a.rank)?;
    let report = build_chain(&model, &s, &phi)?;
    let bottom = verify_bottom(&report)?;
    let mut text = format!("chain of length {} over S+ = {{{}}}\n", report.nu, list(&report.s_plus));
    for st in &report.steps {
        text += &format!("  F{}: {}\n", st.index, if st.chose_dagger { "dagger" } else { "kernel" });
    }
    text += &format!("final basis {{{}}}\nbottom: independent {}, {:?}\n", list(&report.final_basis), bottom.independent, bottom.generation);
    let dot = report.final_graph().to_dot();
    let ok = bottom.independent;
    Ok(Report::new(&ChainOutput { report, bottom }, text, ok)?.with_dot(dot))
}

fn clbasis(a: &ClBasisArgs) -> Result<Report> {
    let r = Word::parse_in(&a.relator, a.rank)?;
    let spec = a.oracle.oracle.as_deref().unwrap_or("search");
    let oracle = parse_oracle(spec, a.rank, std::slice::from_ref(&r))?;
    let t = coset_transversal(&r, &oracle, a.l)?;
    let rep = cl_basis_from_transversal(&t, a.window)?;
    let text = format!(
        "{} conjugates of {r}, folded rank {}, independent {}, transversal complete {}\n",
        rep.conjugates.len(),
        rep.rank,
        rep.independent,
        t.complete
    );
    let dot = build_and_fold(&rep.conjugates).to_dot();
    let ok = rep.independent;
    Ok(Report::new(&rep, text, ok)?.with_dot(dot))
}

fn verify_basis(a: &VerifyBasisArgs) -> Result<Report> {
    let ws = words(&a.words, a.rank)?;
    let dot = build_and_fold(&ws).to_dot();
    match &a.gens {
        None => {
            let rep = basis_report(&ws)?;
            let text = format!("rank {} from {} words, free basis {}\n", rep.rank, ws.len(), rep.free_basis);
            let ok = rep.free_basis;
            Ok(Report::new(&rep, text, ok)?.with_dot(dot))
        }
        Some(g) => {
            let gens = words(g, a.rank)?;
            let v = verify_whitehead_window(&ws, &gens, a.bound)?;
            let text = format!(
                "transversal {{{}}}, independent {}, unverified {{{}}}, Whitehead {}\n",
                list(&v.transversal),
                v.independent,
                list(&v.unverified),
                v.whitehead
            );
            let ok = v.whitehead;
            Ok(Report::new(&v, text, ok)?.with_dot(dot))
        }
    }
}

fn gog(a: &GogArgs) -> Result<Report> {
    let model = a.model.load()?;
    let g = model.gog().clone();
    let rels = match &a.relators {
        Some(t) => words(t, g.rank())?,
        None => Vec::new(),
    };
    let normal_forms = rels.iter().map(|r| Ok((r.clone(), normal_form(&g, r)?))).collect::<Result<Vec<_>>>()?;
    let probe = match &a.probe {
        None => None,
        Some(p) => {
            let [r] = rels.as_slice() else { bail!("--probe needs exactly one relator") };
            let certs = ProbeCertificates {
                permutations: a.perms.as_deref().map(parse_perms).transpose()?,
                search: a.search.as_deref().map(parse_pair).transpose()?,
            };
            Some(freiheitssatz_probe(&g, r, &Word::parse_in(p, g.rank())?, &certs)?)
        }
    };
    let presentation = fundamental_presentation(&g);
    let mut text = format!(
        "{} generators, {} relations\n",
        presentation.generators.len(),
        presentation.relations.len()
    );
    for (w, nf) in &normal_forms {
        text += &format!("  {w}: {} syllables\n", nf.len());
    }
    if let Some(p) = &probe {
        text += &format!("probe: {:?} ({})\n", p.verdict, p.evidence);
    }
    let ok = probe.as_ref().map_or(true, |p| p.verdict != ProbeVerdict::Refuted);
    Ok(Report::new(&GogOutput { presentation, normal_forms, probe }, text, ok)?.with_dot(g.to_dot()))
}

fn torsion(a: &TorsionArgs) -> Result<Report> {
    let rels = words(&a.relators, a.rank)?;
    let oracle = a.oracle.oracle.as_deref().map(|s| parse_oracle(s, a.rank, &rels)).transpose()?;
    let report = torsion_decomposition(a.rank, &rels, oracle.as_ref().map(|o| (o, a.l)))?;
    let order = match (&a.word, &a.perms) {
        (Some(w), Some(p)) => Some(order_certificate(&Word::parse_in(w, a.rank)?, &rels, &parse_perms(p)?)?),
        (None, None) => None,
        _ => bail!("--word and --perms go together"),
    };
    let mut text = String::new();
    for e in &report.entries {
        text += &format!("{}: root {}, G_r of order {}\n", e.relator, e.root, e.exponent);
    }
    text += &format!("{}\n", report.statement);
    if let Some(c) = &order {
        text += &match c.exact {
            Some(n) => format!("order of {} is exactly {n}\n", c.word),
            None => format!("order of {} is a multiple of {}\n", c.word, c.image_order),
        };
    }
    Report::new(&TorsionOutput { report, order }, text, true)
}

fn homology(a: &HomologyArgs) -> Result<Report> {
    let rels = words(&a.relators, a.rank)?;
    let (cells, subdivided) = build_complexes(&TreeModel::cayley(a.rank), &rels)?;
    let composites = match a.oracle.oracle.as_deref() {
        Some(spec) => {
            let o = parse_oracle(spec, a.rank, &rels)?;
            Some(vec![check_composites(&cells, &o), check_composites(&subdivided, &o)])
        }
        None => None,
    };
    let homology = homology_trivial_coeffs(&cells);
    let subdivided_homology = homology_trivial_coeffs(&subdivided);
    let shown: Vec<String> = homology.groups.iter().map(ToString::to_string).collect();
    let mut text = format!("H0, H1, H2 = {}\n", shown.join(", "));
    let ok = match &composites {
        Some(cs) => {
            let zero: Vec<String> = cs.iter().map(|c| format!("{:?}", c.zero)).collect();
            text += &format!("d^2 = 0: {}\n", zero.join(", "));
            cs.iter().all(|c| c.zero != Membership::No && c.augmentation_zero)
        }
        None => true,
    };
    let out = HomologyOutput { cells, subdivided, homology, subdivided_homology, composites };
    Report::new(&out, text, ok)
}

fn rewrite(a: &RewriteArgs) -> Result<Report> {
    let grading: Vec<i64> =
        a.grading.split(',').map(|t| t.trim().parse::<i64>()).collect::<std::result::Result<_, _>>()?;
    let rank = grading.len();
    if let Some(f) = &a.stable {
        let f = Word::parse_in(f, rank)?;
        let rep = adjoin_stable_letter(rank, &f, &grading, a.window)?;
        let text = format!(
            "adjoined {} with relator {}; kernel window rank {}, combined {}, free factor {}\n",
            rep.stable_letter, rep.relator, rep.kernel_rank, rep.combined_rank, rep.free_factor
        );
        let ok = rep.free_factor;
        return Report::new(&RewriteOutput::Stable(rep), text, ok);
    }
    let left = a.left_rank.ok_or_else(|| anyhow!("--left-rank is required"))?;
    let gen = |t: &Option<String>, flag: &str| -> Result<u32> {
        Ok(Generator::parse(t.as_deref().ok_or_else(|| anyhow!("--{flag} is required"))?)?.0)
    };
    let cover = ZCover::new(left, grading, gen(&a.a, "a")?, gen(&a.b, "b")?)?;
    let w = Word::parse_in(a.word.as_deref().ok_or_else(|| anyhow!("--word is required"))?, rank)?;
    let rw = z_cover_rewrite(&w, &cover, a.shift)?;
    let text = format!(
        "{} syllables, t-indices {:?}, evaluates back: {}\n",
        rw.syllables.len(),
        rw.t_indices,
        cover.evaluate(&rw) == w
    );
    Report::new(&RewriteOutput::Rewrite(rw), text, true)
}

fn dispatch(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Axis(a) => axis(a),
        Command::Stagger(a) => stagger(a),
        Command::Chain(a) => chain(a),
        Command::Clbasis(a) => clbasis(a),
        Command::VerifyBasis(a) => verify_basis(a),
        Command::Gog(a) => gog(a),
        Command::Torsion(a) => torsion(a),
        Command::Homology(a) => homology(a),
        Command::Rewrite(a) => rewrite(a),
    }
}

fn emit(cli: &Cli, report: &Report, out: &mut dyn Write) -> Result<()> {
    let body = match cli.format {
        Format::Json => report.json.as_str(),
        Format::Text => report.text.as_str(),
        Format::Dot => report.dot.as_deref().ok_or_else(|| anyhow!("this subcommand has no DOT output"))?,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?,
        None => out.write_all(body.as_bytes())?,
    }
    Ok(())
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let result = dispatch(&cli).and_then(|r| emit(&cli, &r, out).map(|_| r.ok));
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}
