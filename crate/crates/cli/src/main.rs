//! `equivop`: enumerations, checks, extensions and worked examples from the command line.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use equivop::enumerate::{enumerate_alternating, enumerate_trees, TreeQuery};
use equivop::extension::{compare_with_oracle, level_counts, Extension};
use equivop::family::{enumerate_graph_subgroups, GSigmaFamily, SigmaProduct};
use equivop::free::check_monad_laws;
use equivop::group::{FiniteGroup, Subgroup};
use equivop::json::{ExtensionFile, FEquivalenceFile, FamilyJson, GroupJson, OperadFile};
use equivop::operad::check_operad_laws;
use equivop::pis::check_pseudo_indexing;
use equivop::random::{random_colors, random_symseq, rng};
use equivop::signature::{GSet, SigmaGroupoid, Signature};
use equivop::symseq::{is_f_equivalence, symseq_hom_count, SymSeq};
use equivop::worked::replay_all;

#[derive(Parser)]
#[command(name = "equivop", version, about = "Finite equivariant colored operads: enumerate, check, extend")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// List subgroups, graph subgroups, trees or alternating trees.
    #[command(subcommand)]
    Enumerate(EnumerateKind),
    /// Check a family, the pseudo-indexing condition, operad laws or an F-equivalence.
    #[command(subcommand)]
    Check(CheckKind),
    /// Compute an operad extension stage by stage and compare it with the colimit oracle.
    Extend {
        /// Extension problem file.
        file: PathBuf,
        /// Largest number of attached generators to consider; overrides the file.
        #[arg(long)]
        bound: Option<usize>,
        /// Skip the colimit comparison.
        #[arg(long)]
        no_oracle: bool,
    },
    /// Replay the built-in worked examples.
    Examples,
    /// Run the free-monad laws and Yoneda counts on seeded random sequences.
    Properties {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random instances.
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// Vertex bound for free operads.
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
}

#[derive(Subcommand)]
enum EnumerateKind {
    /// All subgroups of a group.
    Subgroups(GroupArg),
    /// Graph subgroups of G × Σ_n^op for every n in the arity range.
    GraphSubgroups {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, default_value = "0..3", value_parser = parse_range)]
        arity_range: (usize, usize),
    },
    /// One-colored trees with the given leaf count.
    Trees(TreeArgs),
    /// One-colored alternating trees with the given leaf count and number of inert vertices.
    Alternating {
        #[command(flatten)]
        tree: TreeArgs,
        /// Number of inert vertices.
        #[arg(long, default_value_t = 1)]
        inert: usize,
    },
}

#[derive(Args)]
struct GroupArg {
    /// `trivial`, `Zn`, `Sn`, a product such as `Z2xZ2`, or a JSON group file.
    #[arg(long)]
    group: String,
}

#[derive(Args)]
struct TreeArgs {
    /// Number of leaves.
    #[arg(long)]
    arity: usize,
    /// Allowed vertex arities, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    vertex_arities: Vec<usize>,
    /// Maximum number of vertices; required when arities 0 or 1 are allowed.
    #[arg(long)]
    bound: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Graph,
    All,
    Trivial,
}

#[derive(Subcommand)]
enum CheckKind {
    /// Closure of a family under subgroups and conjugation.
    Family { file: PathBuf },
    /// The pseudo-indexing condition over trees up to a vertex bound.
    PseudoIndexing {
        /// Family file; otherwise use `--group` with `--preset`.
        file: Option<PathBuf>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long, value_enum, default_value_t = Preset::Graph)]
        preset: Preset,
        #[arg(long, default_value = "0..3", value_parser = parse_range)]
        arity_range: (usize, usize),
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Units, associativity and equivariance of an operad file.
    OperadLaws { file: PathBuf },
    /// Whether a map of sequences is an F-equivalence.
    FEquivalence { file: PathBuf },
}

/// Machine-readable outcome of one command.
#[derive(Default, Serialize)]
struct RunReport {
    command: String,
    passed: bool,
    checks: Vec<CheckLine>,
    counts: BTreeMap<String, usize>,
    rows: Vec<String>,
}

#[derive(Serialize)]
struct CheckLine {
    name: String,
    passed: bool,
    detail: String,
}

impl RunReport {
    fn new(command: &str) -> RunReport {
        RunReport { command: command.to_string(), passed: true, ..RunReport::default() }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.passed &= passed;
        self.checks.push(CheckLine { name: name.into(), passed, detail: detail.into() });
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Text => {
                let mut out = String::new();
                for r in &self.rows {
                    out += &format!("{r}\n");
                }
                for (k, v) in &self.counts {
                    out += &format!("{k}: {v}\n");
                }
                for c in &self.checks {
                    let mark = if c.passed { "PASS" } else { "FAIL" };
                    out += &format!("{mark} {}: {}\n", c.name, c.detail);
                }
                out += &format!("status: {}\n", if self.passed { "pass" } else { "fail" });
                out
            }
        }
    }
}

/// An input problem: unreadable files, malformed JSON or invalid mathematical data.
struct InputError(String);

impl From<equivop::Error> for InputError {
    fn from(e: equivop::Error) -> InputError {
        InputError(e.to_string())
    }
}

type Outcome = Result<RunReport, InputError>;

fn parse_range(text: &str) -> Result<(usize, usize), String> {
    let (a, b) = text.split_once("..").ok_or_else(|| format!("expected a..b, got {text:?}"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: usize = a.trim().parse().map_err(|_| format!("bad lower end in {text:?}"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad upper end in {text:?}"))?;
    if a > b {
        return Err(format!("empty range {text:?}"));
    }
    Ok((a, b))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn parse_group(spec: &str) -> Result<FiniteGroup, InputError> {
    let path = Path::new(spec);
    if path.is_file() {
        return Ok(read_json::<GroupJson>(path)?.build()?);
    }
    let mut out = FiniteGroup::trivial();
    for factor in spec.split(['x', '*']) {
        let f = factor.trim();
        let g = match f.to_ascii_lowercase().as_str() {
            "trivial" | "1" | "e" => FiniteGroup::trivial(),
            "klein" | "v4" => FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2)),
            other => {
                let (kind, n) = other.split_at(1.min(other.len()));
                let n: usize = n.parse().map_err(|_| InputError(format!("unknown group {f:?}")))?;
                match kind {
                    "z" | "c" if n >= 1 => FiniteGroup::cyclic(n),
                    "s" if (1..=5).contains(&n) => FiniteGroup::symmetric(n),
                    _ => return Err(InputError(format!("unknown group {f:?}"))),
                }
            }
        };
        out = if out.order() == 1 { g } else { out.product(&g) };
    }
    Ok(out)
}

fn subgroup_labels(group: &FiniteGroup, h: &Subgroup) -> String {
    let items: Vec<&str> = h.members().iter().map(|&x| group.label(x)).collect();
    format!("{{{}}}", items.join(", "))
}

fn enumerate(kind: EnumerateKind) -> Outcome {
    match kind {
        EnumerateKind::Subgroups(g) => {
            let group = parse_group(&g.group)?;
            let mut report = RunReport::new("enumerate subgroups");
            let subs = group.subgroups();
            report.rows = subs.iter().map(|h| subgroup_labels(&group, h)).collect();
            report.counts.insert("subgroups".into(), subs.len());
            Ok(report)
        }
        EnumerateKind::GraphSubgroups { group, arity_range: (lo, hi) } => {
            let group = parse_group(&group.group)?;
            if hi > 6 {
                return Err(InputError("arities above 6 are not supported".into()));
            }
            let mut report = RunReport::new("enumerate graph-subgroups");
            for n in lo..=hi {
                let prod = SigmaProduct::new(&group, n);
                let subs = enumerate_graph_subgroups(&group, n);
                report.rows.extend(subs.iter().map(|h| format!("n={n} {}", prod.describe_subgroup(h))));
                report.counts.insert(format!("arity {n}"), subs.len());
            }
            Ok(report)
        }
        EnumerateKind::Trees(args) => {
            let colors = GSet::single();
            let (query, ok) = tree_query(&args);
            let target = Signature::new(vec![0; args.arity], 0);
            let classes = enumerate_trees(&colors, &target, query, &ok)?;
            let mut report = RunReport::new("enumerate trees");
            report.rows = classes
                .iter()
                .map(|c| format!("{}  |Aut|={}", c.tree.display(&colors), c.automorphisms.len()))
                .collect();
            report.counts.insert("classes".into(), classes.len());
            Ok(report)
        }
        EnumerateKind::Alternating { tree, inert } => {
            let colors = GSet::single();
            let (query, ok) = tree_query(&tree);
            let target = Signature::new(vec![0; tree.arity], 0);
            let classes = enumerate_alternating(&colors, &target, inert, query.max_vertex_arity, &ok, &ok);
            let mut report = RunReport::new("enumerate alternating");
            report.rows = classes
                .iter()
                .map(|c| {
                    let marks: String = c.inert.iter().map(|&i| if i { 'i' } else { 'a' }).collect();
                    format!("{}  vertices={marks}  |Aut|={}", c.tree.display(&colors), c.automorphisms.len())
                })
                .collect();
            report.counts.insert("classes".into(), classes.len());
            Ok(report)
        }
    }
}

fn tree_query(args: &TreeArgs) -> (TreeQuery, impl Fn(&Signature) -> bool) {
    let arities = args.vertex_arities.clone();
    let query = TreeQuery {
        bound: args.bound,
        max_vertex_arity: arities.iter().copied().max().unwrap_or(0),
        reduced: arities.iter().all(|&a| a >= 2),
    };
    (query, move |s: &Signature| arities.contains(&s.arity()))
}

fn preset_family(group: &FiniteGroup, preset: Preset, (lo, hi): (usize, usize)) -> GSigmaFamily {
    match preset {
        Preset::Graph => GSigmaFamily::graph(group, lo..=hi),
        Preset::All => GSigmaFamily::all(group, lo..=hi),
        Preset::Trivial => GSigmaFamily::trivial(group, lo..=hi),
    }
}

fn check(kind: CheckKind) -> Outcome {
    match kind {
        CheckKind::Family { file } => {
            let family = read_json::<FamilyJson>(&file)?.build()?;
            let mut report = RunReport::new("check family");
            for n in family.arities() {
                report.counts.insert(format!("members at arity {n}"), family.members(n)?.len());
            }
            match family.validate() {
                Ok(()) => report.check("family", true, "closed under subgroups and conjugation"),
                Err(v) => report.check("family", false, v.to_string()),
            }
            Ok(report)
        }
        CheckKind::PseudoIndexing { file, group, preset, arity_range, bound } => {
            let family = match (file, group) {
                (Some(f), None) => read_json::<FamilyJson>(&f)?.build()?,
                (None, Some(g)) => preset_family(&parse_group(&g)?, preset, arity_range),
                _ => return Err(InputError("give either a family file or --group".into())),
            };
            if let Err(v) = family.validate() {
                return Err(InputError(format!("not a family: {v}")));
            }
            let result = check_pseudo_indexing(&family, bound);
            let mut report = RunReport::new("check pseudo-indexing");
            report.counts.insert("trees checked".into(), result.trees_checked);
            report.counts.insert("subgroups checked".into(), result.subgroups_checked);
            match &result.violation {
                None => report.check("pseudo-indexing", true, format!("verified up to {bound} vertices")),
                Some(v) => {
                    let colors = GSet::single();
                    let tree =
                        if v.tree.is_stick() { "eta (the stick)".to_string() } else { v.tree.display(&colors).to_string() };
                    report.check("pseudo-indexing", false, format!("witness tree {tree}, image {}", v.description));
                }
            }
            Ok(report)
        }
        CheckKind::OperadLaws { file } => {
            let op = read_json::<OperadFile>(&file)?.build()?;
            let mut report = RunReport::new("check operad-laws");
            report.counts.insert("elements".into(), op.seq().total_size());
            match check_operad_laws(&op) {
                Ok(()) => report.check("operad laws", true, "units, associativity and equivariance hold"),
                Err(v) => report.check(
                    "operad laws",
                    false,
                    format!("{v}; tree {}", v.tree.display(op.base().colors())),
                ),
            }
            Ok(report)
        }
        CheckKind::FEquivalence { file } => {
            let (x, y, f, family) = read_json::<FEquivalenceFile>(&file)?.build()?;
            let mut report = RunReport::new("check f-equivalence");
            let base = x.base().clone();
            match is_f_equivalence(&x, &y, &f, &family)? {
                None => report.check("f-equivalence", true, "bijective on every fixed-point set"),
                Some(w) => {
                    let n = base.signature(w.signature).arity();
                    let desc = family.ambient(n)?.describe_subgroup(&w.subgroup);
                    report.check(
                        "f-equivalence",
                        false,
                        format!("not bijective on fixed points at {} for {desc}", base.name(w.signature)),
                    );
                }
            }
            Ok(report)
        }
    }
}

fn arity_row(seq: &SymSeq) -> String {
    let cells: Vec<String> =
        level_counts(seq).into_iter().filter(|&(_, c)| c > 0).map(|(n, c)| format!("{n}:{c}")).collect();
    cells.join(" ")
}

fn extend(file: &Path, bound: Option<usize>, no_oracle: bool) -> Outcome {
    let problem = read_json::<ExtensionFile>(file)?.build(bound)?;
    let ext = Extension::compute(&problem)?;
    let mut report = RunReport::new("extend");
    for stage in &ext.stages {
        report.rows.push(format!("stage {}: {}", stage.k, arity_row(&stage.value)));
    }
    report.rows.push(format!("result: {}", arity_row(ext.operad.seq())));
    report.counts.insert("stages".into(), ext.stages.len());
    report.counts.insert("bound".into(), problem.bound);
    if ext.stabilized {
        report.check("stabilization", true, "stabilized within the bound");
    } else {
        report.check("stabilization", false, "not stabilized: raise --bound");
    }
    if !no_oracle {
        let cmp = compare_with_oracle(&problem, &ext);
        report.rows.push(format!("oracle-match: {}", if cmp.agrees { "yes" } else { "no" }));
        report.check("oracle", cmp.agrees, cmp.mismatch.unwrap_or_else(|| "canonical bijection at every signature".into()));
    }
    Ok(report)
}

fn examples() -> Outcome {
    let mut report = RunReport::new("examples");
    for c in replay_all() {
        report.check(c.name, c.passed, c.detail);
    }
    Ok(report)
}

fn properties(seed: u64, count: usize, bound: usize) -> Outcome {
    let mut report = RunReport::new("properties");
    let mut r = rng(seed);
    for i in 0..count {
        let colors = random_colors(&mut r, 4, 3);
        let base = Arc::new(SigmaGroupoid::new(colors, 3));
        let x = random_symseq(&mut r, &base, 2, &[2, 3]);
        let name = format!("instance {i}");
        match check_monad_laws(&x, bound) {
            Ok(()) => report.check(format!("{name} monad laws"), true, format!("bound {bound}")),
            Err(e) => report.check(format!("{name} monad laws"), false, e),
        }
        let bad: Vec<String> = (0..base.signature_count())
            .filter(|&s| symseq_hom_count(&SymSeq::representable(base.clone(), s), &x) != x.size(s) as u128)
            .map(|s| base.name(s))
            .collect();
        report.check(format!("{name} Yoneda"), bad.is_empty(), if bad.is_empty() { "all signatures".into() } else { bad.join(" ") });
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = match cli.command {
        Command::Enumerate(kind) => enumerate(kind),
        Command::Check(kind) => check(kind),
        Command::Extend { file, bound, no_oracle } => extend(&file, bound, no_oracle),
        Command::Examples => examples(),
        Command::Properties { seed, count, bound } => properties(seed, count, bound),
    };
    match outcome {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            if cli.format == Format::Text {
                eprintln!("time: {} ms", start.elapsed().as_millis());
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
