//! Command-line driver.
//!
//! Exit codes: 0 on success, 1 for invalid input (arguments, documents,
//! frames, orders), 2 when a combination rule fails (e.g. total conflict).
//! `repro-paper` additionally exits 1 when any reproduction check fails.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{check_associativity, order_sweep_seeded, search_counterexamples, DEFAULT_SWEEP_SEED};
use crate::decision::{decide, DecisionKind};
use crate::error::Error;
use crate::frame::{Frame, Subset};
use crate::io::{
    display4, interval_entries, parse_experiment, validate, AssocReport, DecisionReport, Experiment,
    ExperimentSpec, FuseReport, IntervalEntry, MassReport, RuleDoc, SearchSummary, StepReport, SweepReport,
};
use crate::mass::MassFunction;
use crate::measures::belief_interval;
use crate::rules::{conflict_degree, conjunctive, fuse_sequential, krc, RuleKind, RuleSpec};

/// Experiment document reproduced by `repro-paper`.
pub const TABLE1_JSON: &str = include_str!("../data/table1.json");

#[derive(Debug, Parser)]
#[command(name = "belief-fusion", version, about = "Belief function fusion under Dempster's and Kenn's rules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fuse the sources of an experiment as a left fold in a given order.
    Fuse(FuseArgs),
    /// Fuse under every ordering of the sources and report the spread.
    OrderSweep(SweepArgs),
    /// Compare (a ⊕ b) ⊕ c with a ⊕ (b ⊕ c) for three sources.
    AssocCheck(AssocArgs),
    /// Random search for triples that violate associativity.
    Search(SearchArgs),
    /// Apply the belief-interval decision criterion.
    Decide(DecideArgs),
    /// Recompute the bundled three-source counter-example and check every value.
    ReproPaper(ReproArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RuleArg {
    Dempster,
    Krc,
    Conjunctive,
}

impl From<RuleArg> for RuleKind {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Dempster => RuleKind::Dempster,
            RuleArg::Krc => RuleKind::Krc,
            RuleArg::Conjunctive => RuleKind::Conjunctive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Args)]
struct SpecArgs {
    /// Experiment document (JSON).
    #[arg(long)]
    spec: PathBuf,
    /// Override the document's rule.
    #[arg(long, value_enum)]
    rule: Option<RuleArg>,
    /// Override the KRC lambda.
    #[arg(long)]
    lambda: Option<f64>,
    /// Rescale sources that do not sum to one.
    #[arg(long)]
    renormalize: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct FuseArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Comma-separated source names in fold order.
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<String>>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Run one KRC sweep per lambda.
    #[arg(long, value_delimiter = ',')]
    lambda_list: Option<Vec<f64>>,
    /// Seed for sampling orders when there are more than seven sources.
    #[arg(long, default_value_t = DEFAULT_SWEEP_SEED)]
    seed: u64,
}

#[derive(Debug, Args)]
struct AssocArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// The three source names as a,b,c; defaults to the document order.
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    lambda_list: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Frame labels.
    #[arg(long, value_delimiter = ',', default_value = "A,B")]
    frame: Vec<String>,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "krc")]
    rule: RuleArg,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    lambda_list: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct DecideArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Fuse in this order before deciding.
    #[arg(long, value_delimiter = ',', conflicts_with = "source")]
    order: Option<Vec<String>>,
    /// Decide on a single source instead of the fused result.
    #[arg(long)]
    source: Option<String>,
}

#[derive(Debug, Args)]
struct ReproArgs {
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

/// Captured result of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Rule(String),
}

impl Failure {
    fn from_error(context: &str, e: Error) -> Self {
        let message = format!("{context}: {e}");
        if e.is_rule_failure() {
            Failure::Rule(message)
        } else {
            Failure::Invalid(message)
        }
    }
}

type CmdResult = Result<(String, i32), Failure>;

/// Runs the CLI on `argv` (program name first) and captures its output.
pub fn run_cli<I, S>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CliOutput {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => CliOutput {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let result = match cli.command {
        Command::Fuse(args) => cmd_fuse(args),
        Command::OrderSweep(args) => cmd_sweep(args),
        Command::AssocCheck(args) => cmd_assoc(args),
        Command::Search(args) => cmd_search(args),
        Command::Decide(args) => cmd_decide(args),
        Command::ReproPaper(args) => cmd_repro(args),
    };
    match result {
        Ok((stdout, code)) => CliOutput {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(Failure::Invalid(msg)) => CliOutput {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Rule(msg)) => CliOutput {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn load(args: &SpecArgs) -> Result<Experiment, Failure> {
    let text = std::fs::read_to_string(&args.spec)
        .map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", args.spec.display())))?;
    let mut doc: ExperimentSpec = serde_json::from_str(&text)
        .map_err(|e| Failure::Invalid(format!("malformed experiment document: {e}")))?;
    if args.renormalize {
        doc.renormalize = true;
    }
    if args.rule.is_some() || args.lambda.is_some() {
        let kind = args.rule.map(RuleKind::from).unwrap_or(doc.rule.kind);
        let lambda = args.lambda.or(if kind == doc.rule.kind { doc.rule.lambda } else { None });
        doc.rule = RuleDoc { kind, lambda };
    }
    validate(doc).map_err(|e| Failure::Invalid(e.to_string()))
}

fn order_for(exp: &Experiment, flag: &Option<Vec<String>>) -> Result<Vec<usize>, Failure> {
    match (flag, &exp.order) {
        (Some(names), _) => exp.resolve_order(names).map_err(|e| Failure::Invalid(e.to_string())),
        (None, Some(order)) => Ok(order.clone()),
        (None, None) => Err(Failure::Invalid(
            "no fusion order: pass --order or set \"order\" in the document".into(),
        )),
    }
}

/// KRC rules for `--lambda-list`, or `None` when no list was given.
fn rule_list(lambdas: &Option<Vec<f64>>) -> Result<Option<Vec<RuleSpec<f64>>>, Failure> {
    lambdas
        .as_ref()
        .map(|ls| {
            ls.iter()
                .map(|&l| RuleSpec::krc(l).map_err(|e| Failure::Invalid(e.to_string())))
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()
}

fn fuse_report(exp: &Experiment, order: &[usize]) -> Result<(FuseReport, MassFunction<f64>), Failure> {
    let rule = exp.rule;
    let mut acc = exp.sources[order[0]].mass.clone();
    let mut steps = Vec::new();
    for (step, &i) in order.iter().enumerate().skip(1) {
        let next = &exp.sources[i];
        let conflict = conflict_degree(&acc, &next.mass).map_err(|e| Failure::from_error("fuse", e))?;
        acc = rule.combine(&acc, &next.mass).map_err(|e| {
            Failure::from_error(&format!("fusion step {step} (source `{}`)", next.name), e)
        })?;
        steps.push(StepReport {
            source: next.name.clone(),
            conflict,
            result: MassReport::new(&acc),
        });
    }
    let decision = decide(&acc).ok().map(|d| DecisionReport::new(&exp.frame, &d));
    Ok((
        FuseReport {
            rule: RuleDoc::from(&rule),
            order: exp.names(order),
            steps,
            result: MassReport::new(&acc),
            intervals: interval_entries(&acc),
            decision,
        },
        acc,
    ))
}

fn cmd_fuse(args: FuseArgs) -> CmdResult {
    let exp = load(&args.spec)?;
    let order = order_for(&exp, &args.order)?;
    let (report, _) = fuse_report(&exp, &order)?;
    let out = match args.spec.format {
        Format::Json => to_json(&report),
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "rule: {}", rule_label(&exp.rule));
            let _ = writeln!(s, "order: {}", report.order.join(", "));
            for step in &report.steps {
                let _ = writeln!(s, "  + {:<12} conflict {}", step.source, display4(step.conflict));
            }
            s.push('\n');
            s.push_str(&mass_table(&exp.frame, &report.result));
            s.push('\n');
            s.push_str(&interval_table(&report.intervals));
            if let Some(d) = &report.decision {
                s.push('\n');
                s.push_str(&decision_text(d));
            }
            s
        }
    };
    Ok((out, 0))
}

fn cmd_sweep(args: SweepArgs) -> CmdResult {
    let exp = load(&args.spec)?;
    if exp.sources.len() < 2 {
        return Err(Failure::Invalid("order-sweep needs at least two sources".into()));
    }
    let masses = exp.masses();
    let rules = rule_list(&args.lambda_list)?;
    let run = |rule: &RuleSpec<f64>| -> Result<SweepReport, Failure> {
        let report = order_sweep_seeded(rule, &masses, args.seed).map_err(|e| Failure::from_error("order-sweep", e))?;
        Ok(SweepReport::new(&exp, &report))
    };
    let reports = match &rules {
        Some(rules) => rules.iter().map(run).collect::<Result<Vec<_>, _>>()?,
        None => vec![run(&exp.rule)?],
    };
    let out = match args.spec.format {
        Format::Json if rules.is_some() => to_json(&reports),
        Format::Json => to_json(&reports[0]),
        Format::Table => reports.iter().map(sweep_table).collect::<Vec<_>>().join("\n"),
    };
    Ok((out, 0))
}

fn cmd_assoc(args: AssocArgs) -> CmdResult {
    let exp = load(&args.spec)?;
    if exp.sources.len() != 3 {
        return Err(Failure::Invalid(format!(
            "assoc-check needs exactly three sources, found {}",
            exp.sources.len()
        )));
    }
    let order = match (&args.order, &exp.order) {
        (Some(names), _) => exp.resolve_order(names).map_err(|e| Failure::Invalid(e.to_string()))?,
        (None, Some(order)) => order.clone(),
        (None, None) => vec![0, 1, 2],
    };
    let [a, b, c] = [order[0], order[1], order[2]].map(|i| &exp.sources[i].mass);
    let rules = rule_list(&args.lambda_list)?;
    let run = |rule: &RuleSpec<f64>| -> Result<AssocReport, Failure> {
        let result = check_associativity(rule, a, b, c).map_err(|e| Failure::from_error("assoc-check", e))?;
        Ok(AssocReport::new(rule, exp.names(&order), &exp.frame, &result))
    };
    let reports = match &rules {
        Some(rules) => rules.iter().map(run).collect::<Result<Vec<_>, _>>()?,
        None => vec![run(&exp.rule)?],
    };
    let out = match args.spec.format {
        Format::Json if rules.is_some() => to_json(&reports),
        Format::Json => to_json(&reports[0]),
        Format::Table => reports
            .iter()
            .map(|r| assoc_table(&exp.frame, r))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    Ok((out, 0))
}

fn cmd_search(args: SearchArgs) -> CmdResult {
    let frame = Frame::shared(args.frame.clone()).map_err(|e| Failure::Invalid(format!("invalid frame: {e}")))?;
    if args.trials == 0 {
        return Err(Failure::Invalid("--trials must be at least 1".into()));
    }
    let kind = RuleKind::from(args.rule);
    let rules: Vec<RuleSpec<f64>> = match (&args.lambda_list, kind) {
        (Some(ls), _) => ls
            .iter()
            .map(|&l| RuleSpec::krc(l))
            .collect::<Result<_, _>>()
            .map_err(|e| Failure::Invalid(e.to_string()))?,
        (None, RuleKind::Krc) => {
            let lambda = args
                .lambda
                .ok_or_else(|| Failure::Invalid("krc search requires --lambda or --lambda-list".into()))?;
            vec![RuleSpec::krc(lambda).map_err(|e| Failure::Invalid(e.to_string()))?]
        }
        (None, kind) => vec![RuleSpec::new(kind, 1.0).map_err(|e| Failure::Invalid(e.to_string()))?],
    };
    let summaries: Vec<SearchSummary> = rules
        .iter()
        .map(|rule| SearchSummary::new(&frame, &search_counterexamples(rule, &frame, args.trials, args.seed)))
        .collect();
    let out = match args.format {
        Format::Json if args.lambda_list.is_some() => to_json(&summaries),
        Format::Json => to_json(&summaries[0]),
        Format::Table => summaries.iter().map(|s| search_table(&frame, s)).collect::<Vec<_>>().join("\n"),
    };
    Ok((out, 0))
}

#[derive(Debug, Serialize)]
struct DecideReport {
    subject: String,
    intervals: Vec<IntervalEntry>,
    decision: DecisionReport,
}

fn cmd_decide(args: DecideArgs) -> CmdResult {
    let exp = load(&args.spec)?;
    let (subject, mass) = match &args.source {
        Some(name) => {
            let i = exp
                .source_index(name)
                .ok_or_else(|| Failure::Invalid(format!("unknown source `{name}`")))?;
            (name.clone(), exp.sources[i].mass.clone())
        }
        None => {
            let order = order_for(&exp, &args.order)?;
            let (_, fused) = fuse_report(&exp, &order)?;
            (format!("{} over {}", rule_label(&exp.rule), exp.names(&order).join(", ")), fused)
        }
    };
    let outcome = decide(&mass).map_err(|e| Failure::from_error("decide", e))?;
    let report = DecideReport {
        subject,
        intervals: interval_entries(&mass),
        decision: DecisionReport::new(&exp.frame, &outcome),
    };
    let out = match args.spec.format {
        Format::Json => to_json(&report),
        Format::Table => {
            let mut s = format!("subject: {}\n\n", report.subject);
            s.push_str(&interval_table(&report.intervals));
            s.push('\n');
            s.push_str(&decision_text(&report.decision));
            s
        }
    };
    Ok((out, 0))
}

fn rule_label(rule: &RuleSpec<f64>) -> String {
    match rule.kind() {
        RuleKind::Krc => format!("krc (lambda = {})", rule.lambda()),
        kind => kind.to_string(),
    }
}

fn mass_table(frame: &Frame, report: &MassReport) -> String {
    let mut s = format!("{:<16} {:>8}\n", "subset", "mass");
    for e in &report.entries {
        let name = frame.subset_name(frame.subset_from_labels(&e.subset).unwrap_or(Subset::EMPTY));
        let _ = writeln!(s, "{:<16} {:>8}", name, e.display);
    }
    s
}

fn interval_table(entries: &[IntervalEntry]) -> String {
    let mut s = format!("{:<16} {:>8} {:>8} {:>8}\n", "subset", "Bel", "Pl", "width");
    for e in entries {
        let name = if e.subset.is_empty() { "∅".to_string() } else { e.subset.join("∪") };
        let _ = writeln!(
            s,
            "{:<16} {:>8} {:>8} {:>8}",
            name,
            display4(e.bel),
            display4(e.pl),
            display4(e.width)
        );
    }
    s
}

fn decision_text(d: &DecisionReport) -> String {
    let mut s = match &d.element {
        Some(e) => format!("decision: {e}\n"),
        None => "decision: indeterminate\n".to_string(),
    };
    for j in &d.justification {
        let _ = writeln!(s, "  {j}");
    }
    s
}

fn sweep_table(r: &SweepReport) -> String {
    let mut s = format!(
        "rule: {}{}\n",
        r.rule.kind,
        r.rule.lambda.map(|l| format!(" (lambda = {l})")).unwrap_or_default()
    );
    for o in &r.orders {
        let body = match (&o.result, &o.error) {
            (Some(m), _) => m
                .entries
                .iter()
                .map(|e| format!("{}={}", e.subset.join("∪"), e.display))
                .collect::<Vec<_>>()
                .join("  "),
            (None, Some(err)) => format!("failed: {err}"),
            _ => String::new(),
        };
        let _ = writeln!(s, "  {:<24} {}  [{}]", o.order.join(","), body, o.decision);
    }
    let _ = writeln!(
        s,
        "max pairwise L∞: {} at {}",
        display4(r.max_pairwise_linf),
        if r.max_pairwise_at.is_empty() { "∅".into() } else { r.max_pairwise_at.join("∪") }
    );
    let _ = writeln!(s, "decision agreement: {}", r.decision_agreement);
    let _ = writeln!(s, "failed orders: {}", r.failed);
    s
}

fn assoc_table(frame: &Frame, r: &AssocReport) -> String {
    let [a, b, c] = [&r.sources[0], &r.sources[1], &r.sources[2]];
    let mut s = format!(
        "rule: {}{}\n",
        r.rule.kind,
        r.rule.lambda.map(|l| format!(" (lambda = {l})")).unwrap_or_default()
    );
    let _ = writeln!(
        s,
        "{:<16} {:>16} {:>16}",
        "subset",
        format!("({a}⊕{b})⊕{c}"),
        format!("{a}⊕({b}⊕{c})")
    );
    for x in frame.subsets() {
        let names = frame.subset_labels(x);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let _ = writeln!(
            s,
            "{:<16} {:>16} {:>16}",
            frame.subset_name(x),
            display4(r.left.mass_of(&refs)),
            display4(r.right.mass_of(&refs))
        );
    }
    let _ = writeln!(s, "L∞ gap: {}  L1 gap: {}", display4(r.linf_gap), display4(r.l1_gap));
    s
}

fn search_table(frame: &Frame, s: &SearchSummary) -> String {
    let mut out = format!(
        "rule: {}{}  trials: {}  seed: {}  skipped: {}\n",
        s.rule.kind,
        s.rule.lambda.map(|l| format!(" (lambda = {l})")).unwrap_or_default(),
        s.trials,
        s.seed,
        s.skipped
    );
    match &s.best {
        None => out.push_str("no admissible triple\n"),
        Some(b) => {
            let _ = writeln!(out, "best trial {}: L∞ gap {} (L1 {})", b.trial, display4(b.linf_gap), display4(b.l1_gap));
            for (i, m) in b.triple.iter().enumerate() {
                let _ = writeln!(out, "  source {}:", i + 1);
                for line in mass_table(frame, m).lines().skip(1) {
                    let _ = writeln!(out, "    {line}");
                }
            }
        }
    }
    out
}

/// One reproduced value compared against its reference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproCheck {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproReport {
    pub checks: Vec<ReproCheck>,
    pub left: MassReport,
    pub right: MassReport,
    pub left_intervals: Vec<IntervalEntry>,
    pub right_intervals: Vec<IntervalEntry>,
    pub left_decision: DecisionReport,
    pub right_decision: DecisionReport,
    pub passed: usize,
    pub total: usize,
}

/// Tolerance for values printed to four decimals.
pub const PRINTED_TOLERANCE: f64 = 5e-4;
/// Tolerance for values that are exact by construction.
pub const EXACT_TOLERANCE: f64 = 1e-12;

/// Recomputes the bundled counter-example from [`TABLE1_JSON`] and checks
/// every intermediate and final value.
pub fn reproduce_counter_example() -> Result<ReproReport, Error> {
    let exp = parse_experiment(TABLE1_JSON).expect("bundled experiment is valid");
    let frame = exp.frame.clone();
    let [m1, m2, m3] = [0, 1, 2].map(|i| exp.sources[i].mass.clone());
    let lambda = exp.rule.lambda();
    let (a, b, ab) = (Subset::from_bits(0b01), Subset::from_bits(0b10), frame.full());

    let mut checks = Vec::new();
    let mut check = |name: &str, value: f64, expected: f64, tolerance: f64| {
        checks.push(ReproCheck {
            name: name.to_string(),
            value,
            expected,
            tolerance,
            pass: (value - expected).abs() <= tolerance,
        });
    };

    check("K(m1,m2)", conflict_degree(&m1, &m2)?, 0.58, EXACT_TOLERANCE);
    let c12 = conjunctive(&m1, &m2)?;
    check("conj(m1,m2)(A)", c12.mass(a), 0.26, EXACT_TOLERANCE);
    check("conj(m1,m2)(B)", c12.mass(b), 0.15, EXACT_TOLERANCE);
    let k12 = krc(&m1, &m2, lambda)?;
    check("krc(m1,m2)(A)", k12.mass(a), 0.2941, PRINTED_TOLERANCE);
    check("krc(m1,m2)(B)", k12.mass(b), 0.1697, PRINTED_TOLERANCE);
    check("krc(m1,m2)(A∪B)", k12.mass(ab), 0.5362, PRINTED_TOLERANCE);
    check("K(krc(m1,m2),m3)", conflict_degree(&k12, &m3)?, 0.1561, PRINTED_TOLERANCE);
    let c12_3 = conjunctive(&k12, &m3)?;
    check("conj(krc(m1,m2),m3)(A)", c12_3.mass(a), 0.4204, PRINTED_TOLERANCE);
    check("conj(krc(m1,m2),m3)(B)", c12_3.mass(b), 0.2627, PRINTED_TOLERANCE);

    check("K(m2,m3)", conflict_degree(&m2, &m3)?, 0.28, EXACT_TOLERANCE);
    let c23 = conjunctive(&m2, &m3)?;
    check("conj(m2,m3)(A)", c23.mass(a), 0.60, EXACT_TOLERANCE);
    check("conj(m2,m3)(B)", c23.mass(b), 0.09, EXACT_TOLERANCE);
    let k23 = krc(&m2, &m3, lambda)?;
    check("krc(m2,m3)(A)", k23.mass(a), 0.6356, PRINTED_TOLERANCE);
    check("krc(m2,m3)(B)", k23.mass(b), 0.0953, PRINTED_TOLERANCE);
    check("krc(m2,m3)(A∪B)", k23.mass(ab), 0.2691, PRINTED_TOLERANCE);
    check("K(m1,krc(m2,m3))", conflict_degree(&m1, &k23)?, 0.4640, PRINTED_TOLERANCE);
    let c1_23 = conjunctive(&m1, &k23)?;
    check("conj(m1,krc(m2,m3))(A)", c1_23.mass(a), 0.2445, PRINTED_TOLERANCE);
    check("conj(m1,krc(m2,m3))(B)", c1_23.mass(b), 0.2646, PRINTED_TOLERANCE);

    let left = fuse_sequential(&exp.rule, &[m1.clone(), m2.clone(), m3.clone()])?;
    let right = krc(&m1, &k23, lambda)?;
    for (x, l, r) in [(a, 0.4339, 0.2695), (b, 0.2711, 0.2917), (ab, 0.2950, 0.4388)] {
        let name = frame.subset_name(x);
        check(&format!("(m1⊕m2)⊕m3 ({name})"), left.mass(x), l, PRINTED_TOLERANCE);
        check(&format!("m1⊕(m2⊕m3) ({name})"), right.mass(x), r, PRINTED_TOLERANCE);
    }

    let interval_checks = [
        ("(m1⊕m2)⊕m3", &left, [(0.4339, 0.7289), (0.2711, 0.5661)]),
        ("m1⊕(m2⊕m3)", &right, [(0.2695, 0.7083), (0.2917, 0.7305)]),
    ];
    for (label, m, expected) in interval_checks {
        for (x, (bel, pl)) in [a, b].into_iter().zip(expected) {
            let i = belief_interval(m, x)?;
            let name = frame.subset_name(x);
            check(&format!("{label} Bel({name})"), i.bel, bel, PRINTED_TOLERANCE);
            check(&format!("{label} Pl({name})"), i.pl, pl, PRINTED_TOLERANCE);
        }
        let e = belief_interval(m, Subset::EMPTY)?;
        check(&format!("{label} Bel(∅)"), e.bel, 0.0, EXACT_TOLERANCE);
        check(&format!("{label} Pl(∅)"), e.pl, 0.0, EXACT_TOLERANCE);
        let f = belief_interval(m, ab)?;
        check(&format!("{label} Bel(A∪B)"), f.bel, 1.0, EXACT_TOLERANCE);
        check(&format!("{label} Pl(A∪B)"), f.pl, 1.0, EXACT_TOLERANCE);
    }

    let left_decision = decide(&left)?;
    let right_decision = decide(&right)?;
    let indeterminate = |k: DecisionKind| if k == DecisionKind::Indeterminate { 1.0 } else { 0.0 };
    check("(m1⊕m2)⊕m3 indeterminate", indeterminate(left_decision.kind), 1.0, 0.0);
    check("m1⊕(m2⊕m3) indeterminate", indeterminate(right_decision.kind), 1.0, 0.0);

    let gap = check_associativity(&exp.rule, &m1, &m2, &m3)?;
    check("associativity L∞ gap", gap.linf_gap, 0.165, 0.005);
    let dempster_gap = check_associativity(&RuleSpec::dempster(), &m1, &m2, &m3)?;
    check("dempster L∞ gap", dempster_gap.linf_gap, 0.0, 1e-9);
    let unit_gap = check_associativity(&RuleSpec::krc(1.0)?, &m1, &m2, &m3)?;
    check("krc(lambda=1) L∞ gap", unit_gap.linf_gap, 0.0, 1e-9);

    let passed = checks.iter().filter(|c| c.pass).count();
    let total = checks.len();
    Ok(ReproReport {
        checks,
        left: MassReport::new(&left),
        right: MassReport::new(&right),
        left_intervals: interval_entries(&left),
        right_intervals: interval_entries(&right),
        left_decision: DecisionReport::new(&frame, &left_decision),
        right_decision: DecisionReport::new(&frame, &right_decision),
        passed,
        total,
    })
}

fn cmd_repro(args: ReproArgs) -> CmdResult {
    let report = reproduce_counter_example().map_err(|e| Failure::from_error("repro-paper", e))?;
    let code = if report.passed == report.total { 0 } else { 1 };
    let out = match args.format {
        Format::Json => to_json(&report),
        Format::Table => repro_table(&report),
    };
    Ok((out, code))
}

fn repro_table(r: &ReproReport) -> String {
    let exp = parse_experiment(TABLE1_JSON).expect("bundled experiment is valid");
    let frame = &exp.frame;
    let mut s = String::new();
    let _ = writeln!(s, "Three-source counter-example, frame {{A, B}}, {}", rule_label(&exp.rule));
    s.push('\n');
    let _ = writeln!(
        s,
        "{:<10} {:>8} {:>8} {:>8} {:>14} {:>14}",
        "element", "m1", "m2", "m3", "(m1⊕m2)⊕m3", "m1⊕(m2⊕m3)"
    );
    for x in frame.subsets() {
        let names = frame.subset_labels(x);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let _ = writeln!(
            s,
            "{:<10} {:>8} {:>8} {:>8} {:>14} {:>14}",
            frame.subset_name(x),
            display4(exp.sources[0].mass.mass(x)),
            display4(exp.sources[1].mass.mass(x)),
            display4(exp.sources[2].mass.mass(x)),
            display4(r.left.mass_of(&refs)),
            display4(r.right.mass_of(&refs)),
        );
    }
    s.push('\n');
    let _ = writeln!(s, "{:<10} {:>18} {:>18}", "element", "[Bel,Pl] (m1⊕m2)⊕m3", "[Bel,Pl] m1⊕(m2⊕m3)");
    for (l, rt) in r.left_intervals.iter().zip(&r.right_intervals) {
        let name = if l.subset.is_empty() { "∅".to_string() } else { l.subset.join("∪") };
        let _ = writeln!(s, "{:<10} {:>18} {:>18}", name, l.display, rt.display);
    }
    s.push('\n');
    let _ = writeln!(s, "(m1⊕m2)⊕m3 {}", decision_text(&r.left_decision).trim_end());
    let _ = writeln!(s, "m1⊕(m2⊕m3) {}", decision_text(&r.right_decision).trim_end());
    s.push('\n');
    let _ = writeln!(s, "{:<32} {:>10} {:>10} {:>8}  result", "check", "value", "expected", "tol");
    for c in &r.checks {
        let _ = writeln!(
            s,
            "{:<32} {:>10.6} {:>10.6} {:>8.0e}  {}",
            c.name,
            c.value,
            c.expected,
            c.tolerance,
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
    let _ = writeln!(s, "\n{}/{} checks passed", r.passed, r.total);
    s
}
