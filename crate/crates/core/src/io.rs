//! JSON experiment files and report serialization.
//!
//! Subsets are written as lists of labels in frame order, e.g. `["A", "B"]`
//! for `A∪B`. Reports carry every mass at full precision next to a
//! four-decimal display string.
//!
//! ```json
//! {
//!   "frame": ["A", "B"],
//!   "sources": [
//!     { "name": "m1", "masses": [ { "subset": ["A"], "mass": 0.2 },
//!                                 { "subset": ["A", "B"], "mass": 0.8 } ] }
//!   ],
//!   "rule": { "kind": "krc", "lambda": 0.2 },
//!   "order": ["m1"],
//!   "renormalize": false
//! }
//! ```

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{AssociativityResult, OrderSensitivityReport, SearchReport};
use crate::decision::{DecisionKind, DecisionOutcome};
use crate::error::Error;
use crate::frame::{Frame, Subset};
use crate::mass::MassFunction;
use crate::measures::{belief_interval, BeliefInterval};
use crate::rules::{RuleKind, RuleSpec};

/// Failures while reading or validating an experiment document.
#[derive(Debug, Error)]
pub enum SpecError {
    #[error("malformed experiment document: {0}")]
    Malformed(String),
    #[error("invalid frame: {0}")]
    Frame(#[source] Error),
    #[error("experiment defines no sources")]
    NoSources,
    #[error("source name `{0}` is used more than once")]
    DuplicateSource(String),
    #[error("source `{source_name}`: unknown label `{label}`")]
    UnknownLabel { source_name: String, label: String },
    #[error("source `{source_name}`: masses sum to {total}, a deficit of {deficit} from 1 (set \"renormalize\": true to rescale)")]
    NotNormalized {
        source_name: String,
        total: f64,
        deficit: f64,
    },
    #[error("source `{source_name}`: {error}")]
    Source { source_name: String, error: Error },
    #[error("invalid rule: {0}")]
    Rule(#[source] Error),
    #[error("krc rule requires a lambda")]
    MissingLambda,
    #[error("order must list every source exactly once: {0}")]
    Order(String),
}

/// Raw experiment document as written on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub frame: Vec<String>,
    pub sources: Vec<SourceSpec>,
    pub rule: RuleDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<String>>,
    #[serde(default)]
    pub renormalize: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub name: String,
    pub masses: Vec<MassRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MassRecord {
    pub subset: Vec<String>,
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDoc {
    pub kind: RuleKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

impl RuleDoc {
    pub fn to_rule(self) -> Result<RuleSpec<f64>, SpecError> {
        let lambda = match (self.kind, self.lambda) {
            (RuleKind::Krc, None) => return Err(SpecError::MissingLambda),
            (_, lambda) => lambda.unwrap_or(1.0),
        };
        RuleSpec::new(self.kind, lambda).map_err(SpecError::Rule)
    }
}

impl From<&RuleSpec<f64>> for RuleDoc {
    fn from(rule: &RuleSpec<f64>) -> Self {
        RuleDoc {
            kind: rule.kind(),
            lambda: (rule.kind() == RuleKind::Krc).then(|| rule.lambda()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedSource {
    pub name: String,
    pub mass: MassFunction<f64>,
    /// Factor applied by renormalization; exactly 1 when none took place.
    pub scale: f64,
}

/// A validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub frame: Arc<Frame>,
    pub sources: Vec<NamedSource>,
    pub rule: RuleSpec<f64>,
    /// Source indices, when the document fixes an order.
    pub order: Option<Vec<usize>>,
    pub renormalize: bool,
}

impl Experiment {
    pub fn source_index(&self, name: &str) -> Option<usize> {
        self.sources.iter().position(|s| s.name == name)
    }

    /// Resolves a list of names into a permutation of the sources.
    pub fn resolve_order<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>, SpecError> {
        let order = names
            .iter()
            .map(|n| {
                self.source_index(n.as_ref())
                    .ok_or_else(|| SpecError::Order(format!("unknown source `{}`", n.as_ref())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let distinct: HashSet<usize> = order.iter().copied().collect();
        if order.len() != self.sources.len() || distinct.len() != order.len() {
            return Err(SpecError::Order(format!(
                "got {} entries ({} distinct) for {} sources",
                order.len(),
                distinct.len(),
                self.sources.len()
            )));
        }
        Ok(order)
    }

    pub fn ordered(&self, order: &[usize]) -> Vec<MassFunction<f64>> {
        order.iter().map(|&i| self.sources[i].mass.clone()).collect()
    }

    pub fn names(&self, order: &[usize]) -> Vec<String> {
        order.iter().map(|&i| self.sources[i].name.clone()).collect()
    }

    pub fn masses(&self) -> Vec<MassFunction<f64>> {
        self.sources.iter().map(|s| s.mass.clone()).collect()
    }
}

pub fn parse_experiment(document: &str) -> Result<Experiment, SpecError> {
    let spec: ExperimentSpec = serde_json::from_str(document).map_err(|e| SpecError::Malformed(e.to_string()))?;
    validate(spec)
}

pub fn validate(spec: ExperimentSpec) -> Result<Experiment, SpecError> {
    let frame = Frame::shared(spec.frame).map_err(SpecError::Frame)?;
    if spec.sources.is_empty() {
        return Err(SpecError::NoSources);
    }
    let mut names = HashSet::new();
    let mut sources = Vec::with_capacity(spec.sources.len());
    for source in spec.sources {
        if !names.insert(source.name.clone()) {
            return Err(SpecError::DuplicateSource(source.name));
        }
        sources.push(build_source(&frame, source, spec.renormalize)?);
    }
    let rule = spec.rule.to_rule()?;
    let mut experiment = Experiment {
        frame,
        sources,
        rule,
        order: None,
        renormalize: spec.renormalize,
    };
    if let Some(order) = spec.order {
        experiment.order = Some(experiment.resolve_order(&order)?);
    }
    Ok(experiment)
}

fn build_source(frame: &Arc<Frame>, source: SourceSpec, renormalize: bool) -> Result<NamedSource, SpecError> {
    let name = source.name;
    let mut pairs = Vec::with_capacity(source.masses.len());
    for record in &source.masses {
        let subset = frame
            .subset_from_labels(&record.subset)
            .map_err(|e| match e {
                Error::UnknownLabel(label) => SpecError::UnknownLabel {
                    source_name: name.clone(),
                    label,
                },
                error => SpecError::Source {
                    source_name: name.clone(),
                    error,
                },
            })?;
        pairs.push((subset, record.mass));
    }
    let built = if renormalize {
        MassFunction::renormalized(frame.clone(), pairs)
    } else {
        MassFunction::new(frame.clone(), pairs).map(|m| (m, 1.0))
    };
    match built {
        Ok((mass, scale)) => Ok(NamedSource { name, mass, scale }),
        Err(Error::NotNormalized { total, .. }) => Err(SpecError::NotNormalized {
            source_name: name,
            total,
            deficit: 1.0 - total,
        }),
        Err(error) => Err(SpecError::Source {
            source_name: name,
            error,
        }),
    }
}

/// Four-decimal presentation of a value.
pub fn display4(value: f64) -> String {
    // avoid printing "-0.0000" for tiny negative round-off
    let v = if value.abs() < 5e-5 { 0.0 } else { value };
    format!("{v:.4}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassEntry {
    pub subset: Vec<String>,
    pub mass: f64,
    pub display: String,
}

/// A mass function in report form: focal elements in mask order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassReport {
    pub entries: Vec<MassEntry>,
}

impl MassReport {
    pub fn new(m: &MassFunction<f64>) -> Self {
        let frame = m.frame();
        MassReport {
            entries: m
                .iter()
                .map(|(s, mass)| MassEntry {
                    subset: frame.subset_labels(s),
                    mass,
                    display: display4(mass),
                })
                .collect(),
        }
    }

    /// Rebuilds the mass function from the full-precision fields.
    pub fn to_mass(&self, frame: &Arc<Frame>) -> Result<MassFunction<f64>, Error> {
        MassFunction::from_labels(frame.clone(), self.entries.iter().map(|e| (&e.subset, e.mass)))
    }

    pub fn mass_of(&self, labels: &[&str]) -> f64 {
        self.entries
            .iter()
            .find(|e| e.subset.len() == labels.len() && labels.iter().all(|l| e.subset.iter().any(|s| s == l)))
            .map_or(0.0, |e| e.mass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalEntry {
    pub subset: Vec<String>,
    pub bel: f64,
    pub pl: f64,
    pub width: f64,
    pub display: String,
}

impl IntervalEntry {
    pub fn new(frame: &Frame, interval: &BeliefInterval<f64>) -> Self {
        IntervalEntry {
            subset: frame.subset_labels(interval.subset),
            bel: interval.bel,
            pl: interval.pl,
            width: interval.width,
            display: format!("[{}, {}]", display4(interval.bel), display4(interval.pl)),
        }
    }
}

/// Belief intervals over the whole power set for frames small enough to
/// list, singletons and the full frame otherwise.
pub fn interval_entries(m: &MassFunction<f64>) -> Vec<IntervalEntry> {
    let frame = m.frame();
    let subsets: Vec<Subset> = if frame.len() <= 6 {
        frame.subsets().collect()
    } else {
        frame.singletons().chain([frame.full()]).collect()
    };
    subsets
        .into_iter()
        .map(|s| IntervalEntry::new(frame, &belief_interval(m, s).expect("subset drawn from the frame")))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    /// `singleton` or `indeterminate`.
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    pub justification: Vec<String>,
}

impl DecisionReport {
    pub fn new(frame: &Frame, outcome: &DecisionOutcome<f64>) -> Self {
        let label = |i: usize| frame.label(i).unwrap_or("?").to_string();
        DecisionReport {
            outcome: match outcome.kind {
                DecisionKind::Singleton(_) => "singleton".into(),
                DecisionKind::Indeterminate => "indeterminate".into(),
            },
            element: match outcome.kind {
                DecisionKind::Singleton(i) => Some(label(i)),
                DecisionKind::Indeterminate => None,
            },
            justification: outcome
                .justification
                .iter()
                .map(|c| {
                    format!(
                        "Bel({})={} {} Pl({})={}",
                        label(c.candidate),
                        display4(c.bel),
                        if c.holds { ">" } else { "<=" },
                        label(c.rival),
                        display4(c.pl)
                    )
                })
                .collect(),
        }
    }
}

pub fn decision_label(frame: &Frame, kind: Option<DecisionKind>) -> String {
    match kind {
        Some(DecisionKind::Singleton(i)) => frame.label(i).unwrap_or("?").to_string(),
        Some(DecisionKind::Indeterminate) => "indeterminate".into(),
        None => "n/a".into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepReport {
    /// Name of the source folded in at this step.
    pub source: String,
    pub conflict: f64,
    pub result: MassReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuseReport {
    pub rule: RuleDoc,
    pub order: Vec<String>,
    pub steps: Vec<StepReport>,
    pub result: MassReport,
    pub intervals: Vec<IntervalEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decision: Option<DecisionReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderEntryReport {
    pub order: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<MassReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub decision: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rule: RuleDoc,
    pub exhaustive: bool,
    pub orders: Vec<OrderEntryReport>,
    pub failed: usize,
    pub max_pairwise_linf: f64,
    pub max_pairwise_at: Vec<String>,
    pub decision_agreement: bool,
}

impl SweepReport {
    pub fn new(experiment: &Experiment, report: &OrderSensitivityReport<f64>) -> Self {
        let frame = &experiment.frame;
        SweepReport {
            rule: RuleDoc::from(&report.rule),
            exhaustive: report.exhaustive,
            orders: report
                .orders
                .iter()
                .map(|o| OrderEntryReport {
                    order: experiment.names(&o.permutation),
                    result: o.outcome.as_ref().ok().map(MassReport::new),
                    error: o.outcome.as_ref().err().map(ToString::to_string),
                    decision: decision_label(frame, o.decision),
                })
                .collect(),
            failed: report.failed(),
            max_pairwise_linf: report.max_pairwise_linf,
            max_pairwise_at: frame.subset_labels(report.max_pairwise_at),
            decision_agreement: report.decision_agreement,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssocReport {
    pub rule: RuleDoc,
    /// `[a, b, c]` as in `(a ⊕ b) ⊕ c` versus `a ⊕ (b ⊕ c)`.
    pub sources: Vec<String>,
    pub left: MassReport,
    pub right: MassReport,
    pub linf_gap: f64,
    pub linf_at: Vec<String>,
    pub l1_gap: f64,
}

impl AssocReport {
    pub fn new(rule: &RuleSpec<f64>, names: Vec<String>, frame: &Frame, result: &AssociativityResult<f64>) -> Self {
        AssocReport {
            rule: RuleDoc::from(rule),
            sources: names,
            left: MassReport::new(&result.left),
            right: MassReport::new(&result.right),
            linf_gap: result.linf_gap,
            linf_at: frame.subset_labels(result.linf_at),
            l1_gap: result.l1_gap,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterExampleReport {
    pub trial: usize,
    pub triple: Vec<MassReport>,
    pub left: MassReport,
    pub right: MassReport,
    pub linf_gap: f64,
    pub linf_at: Vec<String>,
    pub l1_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub rule: RuleDoc,
    pub frame: Vec<String>,
    pub trials: usize,
    pub seed: u64,
    pub skipped: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best: Option<CounterExampleReport>,
}

impl SearchSummary {
    pub fn new(frame: &Frame, report: &SearchReport<f64>) -> Self {
        SearchSummary {
            rule: RuleDoc::from(&report.rule),
            frame: frame.labels().to_vec(),
            trials: report.trials,
            seed: report.seed,
            skipped: report.skipped,
            best: report.best.as_ref().map(|b| CounterExampleReport {
                trial: b.trial,
                triple: b.triple.iter().map(MassReport::new).collect(),
                left: MassReport::new(&b.result.left),
                right: MassReport::new(&b.result.right),
                linf_gap: b.result.linf_gap,
                linf_at: frame.subset_labels(b.result.linf_at),
                l1_gap: b.result.l1_gap,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE1: &str = include_str!("../data/table1.json");

    #[test]
    fn parses_bundled_experiment() {
        let exp = parse_experiment(TABLE1).unwrap();
        assert_eq!(exp.frame.labels(), ["A", "B"]);
        assert_eq!(exp.sources.len(), 3);
        assert_eq!(exp.rule, RuleSpec::krc(0.2).unwrap());
        assert_eq!(exp.order, Some(vec![0, 1, 2]));
        assert!(exp.sources.iter().all(|s| s.scale == 1.0));
        let m1 = &exp.sources[0].mass;
        assert_eq!(m1.mass(Subset::from_bits(0b10)), 0.7);
    }

    fn doc(masses: &str, extra: &str) -> String {
        format!(
            r#"{{"frame":["A","B"],"sources":[{{"name":"s","masses":{masses}}}],"rule":{{"kind":"dempster"}}{extra}}}"#
        )
    }

    #[test]
    fn deficit_is_reported() {
        let text = doc(r#"[{"subset":["A"],"mass":0.5},{"subset":["B"],"mass":0.45}]"#, "");
        match parse_experiment(&text).unwrap_err() {
            SpecError::NotNormalized { source_name, deficit, .. } => {
                assert_eq!(source_name, "s");
                assert!((deficit - 0.05).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
        let text = doc(
            r#"[{"subset":["A"],"mass":0.5},{"subset":["B"],"mass":0.45}]"#,
            r#","renormalize":true"#,
        );
        let exp = parse_experiment(&text).unwrap();
        assert!((exp.sources[0].scale - 1.0 / 0.95).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(parse_experiment("{"), Err(SpecError::Malformed(_))));
        let empty = r#"{"frame":["A"],"sources":[],"rule":{"kind":"dempster"}}"#;
        assert!(matches!(parse_experiment(empty), Err(SpecError::NoSources)));
        let unknown = doc(r#"[{"subset":["C"],"mass":1.0}]"#, "");
        assert!(matches!(parse_experiment(&unknown), Err(SpecError::UnknownLabel { .. })));
        let bad_order = doc(r#"[{"subset":["A","B"],"mass":1.0}]"#, r#","order":["s","s"]"#);
        assert!(matches!(parse_experiment(&bad_order), Err(SpecError::Order(_))));
        let negative = doc(r#"[{"subset":["A"],"mass":-0.5},{"subset":["B"],"mass":1.5}]"#, "");
        assert!(matches!(parse_experiment(&negative), Err(SpecError::Source { .. })));
        let no_lambda = r#"{"frame":["A"],"sources":[{"name":"s","masses":[{"subset":["A"],"mass":1}]}],"rule":{"kind":"krc"}}"#;
        assert!(matches!(parse_experiment(no_lambda), Err(SpecError::MissingLambda)));
        let bad_lambda = r#"{"frame":["A"],"sources":[{"name":"s","masses":[{"subset":["A"],"mass":1}]}],"rule":{"kind":"krc","lambda":1.2}}"#;
        assert!(matches!(parse_experiment(bad_lambda), Err(SpecError::Rule(_))));
        let bad_frame = r#"{"frame":["A","A"],"sources":[],"rule":{"kind":"dempster"}}"#;
        assert!(matches!(parse_experiment(bad_frame), Err(SpecError::Frame(_))));
    }

    #[test]
    fn report_round_trip_is_exact() {
        let exp = parse_experiment(TABLE1).unwrap();
        let fused = crate::rules::fuse_sequential(&exp.rule, &exp.ordered(&[0, 1, 2])).unwrap();
        let report = MassReport::new(&fused);
        let text = serde_json::to_string(&report).unwrap();
        let back: MassReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_mass(&exp.frame).unwrap(), fused);
        assert_eq!(report.entries[0].display, "0.4339");
    }

    #[test]
    fn display_rounding() {
        assert_eq!(display4(0.29503), "0.2950");
        assert_eq!(display4(-1e-17), "0.0000");
        assert_eq!(display4(1.0), "1.0000");
    }
}
