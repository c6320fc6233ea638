//! Command implementations and their CSV/JSON renderings.
//!
//! Every exact quantity is emitted as a `value_decimal`, `value_num`,
//! `value_den` triple; the decimal is rounded half to even.

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::combinatorics::{Design, StratumCounts, MAX_N};
use crate::config::{OutputFormat, RunConfig, TrialRecord};
use crate::criteria::{big, sweep, Criterion, SweepRow};
use crate::error::{Error, Result};
use crate::likelihood::{fisher_exact_p_with, LikelihoodTable};
use crate::probability::{format_decimal, ExactProbability};
use crate::rules::{decide, Decision, Rationale, Rule};
use crate::svg::{LineChart, Series};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactValue {
    pub value_decimal: String,
    pub value_num: String,
    pub value_den: String,
}

impl ExactValue {
    pub fn new(value: &BigRational, digits: u32) -> Self {
        Self {
            value_decimal: format_decimal(value, digits),
            value_num: value.numer().to_string(),
            value_den: value.denom().to_string(),
        }
    }

    /// Keeps the unreduced assignment-count ratio.
    pub fn probability(p: &ExactProbability, digits: u32) -> Self {
        Self {
            value_decimal: format_decimal(&p.to_rational(), digits),
            value_num: p.numerator().to_string(),
            value_den: p.denominator().to_string(),
        }
    }

    pub fn small(value: Rational64, digits: u32) -> Self {
        Self::new(&big(value), digits)
    }

    pub fn integer(value: u64) -> Self {
        Self::new(&BigRational::from_integer(BigInt::from(value)), 0)
    }
}

/// One line of a long-format CSV report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub section: String,
    pub item: String,
    pub value: ExactValue,
}

impl ReportRow {
    fn new(section: &str, item: impl Into<String>, value: ExactValue) -> Self {
        Self {
            section: section.into(),
            item: item.into(),
            value,
        }
    }
}

fn lf_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

pub fn render_rows(rows: &[ReportRow]) -> String {
    let mut w = lf_writer();
    w.write_record(["section", "item", "value_decimal", "value_num", "value_den"])
        .expect("in-memory write");
    for r in rows {
        w.write_record([
            r.section.as_str(),
            r.item.as_str(),
            &r.value.value_decimal,
            &r.value.value_num,
            &r.value.value_den,
        ])
        .expect("in-memory write");
    }
    finish(w)
}

#[derive(Debug, Clone, Serialize)]
pub struct StratumEntry {
    pub theta: StratumCounts,
    pub likelihood: ExactValue,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeansEntry {
    pub live_regardless: ExactValue,
    pub efficacious: ExactValue,
    pub harmed: ExactValue,
    pub die_regardless: ExactValue,
}

#[derive(Debug, Clone, Serialize)]
pub struct RuleEntry {
    pub rule: Rule,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub action_probability: Option<ExactValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Everything the `analyze` command reports about one trial.
#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub trial: TrialRecord,
    pub candidate_strata: usize,
    pub positive_support: usize,
    pub mle: Vec<StratumEntry>,
    pub top: Vec<StratumEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub posterior_means: Option<MeansEntry>,
    pub fisher_alternative: crate::likelihood::FisherAlternative,
    pub fisher_p: ExactValue,
    pub rules: Vec<RuleEntry>,
}

const MEAN_NAMES: [&str; 4] = ["live_regardless", "efficacious", "harmed", "die_regardless"];

pub fn analyze(trial: &TrialRecord, cfg: &RunConfig) -> Result<AnalyzeReport> {
    cfg.validate()?;
    let (design, x) = trial.validate()?;
    let spec = cfg.utility_spec()?;
    let prior = cfg.prior.to_prior()?;
    let d = cfg.digits;

    let table = cfg.install(|| LikelihoodTable::new(&x, &design))??;
    let mle = table.mle_set();
    let entry = |theta: StratumCounts, p: &ExactProbability| StratumEntry {
        theta,
        likelihood: ExactValue::probability(p, d),
    };
    let posterior_means = match table.posterior(&prior) {
        Ok(post) => {
            let v: Vec<ExactValue> = post.means.iter().map(|m| ExactValue::new(m, d)).collect();
            let [a, b, c, e]: [ExactValue; 4] = v.try_into().expect("four means");
            Some(MeansEntry {
                live_regardless: a,
                efficacious: b,
                harmed: c,
                die_regardless: e,
            })
        }
        Err(Error::DegeneratePosterior) => None,
        Err(e) => return Err(e),
    };
    let rules = Rule::ALL
        .iter()
        .map(|&rule| match decide(rule, &x, &design, &spec, &prior) {
            Ok(dec) => RuleEntry {
                rule,
                action_probability: Some(ExactValue::new(&dec.probability.to_rational(), d)),
                error: None,
            },
            Err(e) => RuleEntry {
                rule,
                action_probability: None,
                error: Some(e.to_string()),
            },
        })
        .collect();

    Ok(AnalyzeReport {
        trial: trial.clone(),
        candidate_strata: table.strata().len(),
        positive_support: table.positive_support_count(),
        mle: mle
            .strata
            .iter()
            .map(|t| entry(*t, &mle.likelihood))
            .collect(),
        top: table
            .top(cfg.top_k)
            .iter()
            .map(|(t, p)| entry(*t, p))
            .collect(),
        posterior_means,
        fisher_alternative: cfg.fisher,
        fisher_p: ExactValue::probability(&fisher_exact_p_with(&x, &design, cfg.fisher)?, d),
        rules,
    })
}

impl AnalyzeReport {
    pub fn rows(&self) -> Vec<ReportRow> {
        let mut rows = vec![
            ReportRow::new(
                "summary",
                "candidate_strata",
                ExactValue::integer(self.candidate_strata as u64),
            ),
            ReportRow::new(
                "summary",
                "positive_support",
                ExactValue::integer(self.positive_support as u64),
            ),
        ];
        rows.extend(
            self.mle
                .iter()
                .map(|e| ReportRow::new("mle", e.theta.to_string(), e.likelihood.clone())),
        );
        rows.extend(
            self.top
                .iter()
                .map(|e| ReportRow::new("top", e.theta.to_string(), e.likelihood.clone())),
        );
        if let Some(m) = &self.posterior_means {
            let values = [
                &m.live_regardless,
                &m.efficacious,
                &m.harmed,
                &m.die_regardless,
            ];
            for (name, v) in MEAN_NAMES.iter().zip(values) {
                rows.push(ReportRow::new("posterior_mean", *name, v.clone()));
            }
        }
        rows.push(ReportRow::new(
            "fisher",
            fisher_name(self.fisher_alternative),
            self.fisher_p.clone(),
        ));
        for r in &self.rules {
            if let Some(p) = &r.action_probability {
                rows.push(ReportRow::new("rule", r.rule.name(), p.clone()));
            }
        }
        rows
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => render_rows(&self.rows()),
            OutputFormat::Json => pretty(&self),
        }
    }
}

fn fisher_name(alt: crate::likelihood::FisherAlternative) -> &'static str {
    match alt {
        crate::likelihood::FisherAlternative::Greater => "p_one_sided",
        crate::likelihood::FisherAlternative::TwoSided => "p_two_sided",
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// A single rule's decision with the quantities it was based on.
#[derive(Debug, Clone)]
pub struct DecideReport {
    pub trial: TrialRecord,
    pub decision: Decision,
    pub digits: u32,
}

pub fn decide_report(trial: &TrialRecord, rule: Rule, cfg: &RunConfig) -> Result<DecideReport> {
    cfg.validate()?;
    let (design, x) = trial.validate()?;
    let spec = cfg.utility_spec()?;
    let prior = cfg.prior.to_prior()?;
    let decision = cfg.install(|| decide(rule, &x, &design, &spec, &prior))??;
    Ok(DecideReport {
        trial: trial.clone(),
        decision,
        digits: cfg.digits,
    })
}

impl DecideReport {
    fn rationale_rows(&self) -> Vec<ReportRow> {
        let d = self.digits;
        let mut rows = Vec::new();
        match &self.decision.rationale {
            Rationale::MaximumLikelihood { mle } => {
                for t in &mle.strata {
                    rows.push(ReportRow::new(
                        "mle",
                        t.to_string(),
                        ExactValue::probability(&mle.likelihood, d),
                    ));
                }
            }
            Rationale::Bayes { posterior } => {
                for (name, v) in MEAN_NAMES.iter().zip(&posterior.means) {
                    rows.push(ReportRow::new(
                        "posterior_mean",
                        *name,
                        ExactValue::new(v, d),
                    ));
                }
            }
            Rationale::EmpiricalSuccess {
                treated_share,
                control_share,
            } => {
                rows.push(ReportRow::new(
                    "share",
                    "treated",
                    ExactValue::small(*treated_share, d),
                ));
                rows.push(ReportRow::new(
                    "share",
                    "control",
                    ExactValue::small(*control_share, d),
                ));
            }
            Rationale::Frechet {
                interval,
                effect,
                threshold,
            } => {
                let items = [
                    ("p_treated", interval.p_treated),
                    ("p_control", interval.p_control),
                    ("harmed_lower", interval.lower),
                    ("harmed_upper", interval.upper),
                    ("effect", *effect),
                    ("threshold", *threshold),
                ];
                for (name, v) in items {
                    rows.push(ReportRow::new("frechet", name, ExactValue::small(v, d)));
                }
            }
            Rationale::CoinFlip => {}
        }
        rows
    }

    pub fn rows(&self) -> Vec<ReportRow> {
        let mut rows = vec![ReportRow::new(
            "decision",
            self.decision.rule.name(),
            ExactValue::new(&self.decision.probability.to_rational(), self.digits),
        )];
        rows.extend(self.rationale_rows());
        rows
    }

    pub fn to_json(&self) -> Value {
        let mut rationale = serde_json::Map::new();
        for r in self.rationale_rows() {
            let section = rationale.entry(r.section).or_insert_with(|| json!({}));
            section[r.item] = serde_json::to_value(&r.value).expect("value serializes");
        }
        json!({
            "trial": self.trial,
            "rule": self.decision.rule,
            "action_probability": ExactValue::new(&self.decision.probability.to_rational(), self.digits),
            "rationale": rationale,
        })
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => render_rows(&self.rows()),
            OutputFormat::Json => pretty(&self.to_json()),
        }
    }
}

/// Inputs of a sweep besides the run configuration.
#[derive(Debug, Clone)]
pub struct SweepRequest {
    pub n_min: u32,
    pub n_max: u32,
    /// Skip odd `n` instead of rejecting them.
    pub even_only: bool,
    pub criteria: Vec<Criterion>,
    pub rules: Vec<Rule>,
    pub out_dir: PathBuf,
    pub svg_dir: Option<PathBuf>,
}

impl SweepRequest {
    pub fn new(n_min: u32, n_max: u32, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            n_min,
            n_max,
            even_only: false,
            criteria: Criterion::ALL.to_vec(),
            rules: Rule::ALL.to_vec(),
            out_dir: out_dir.into(),
            svg_dir: None,
        }
    }

    pub fn sample_sizes(&self) -> Result<Vec<u32>> {
        if self.n_min < 2 {
            return Err(Error::config("n_min", format!("{} is below 2", self.n_min)));
        }
        if self.n_max > MAX_N {
            return Err(Error::config(
                "n_max",
                format!("{} exceeds the maximum of {MAX_N}", self.n_max),
            ));
        }
        if self.n_min > self.n_max {
            return Err(Error::config(
                "n_max",
                format!("{} is below n_min = {}", self.n_max, self.n_min),
            ));
        }
        if self.criteria.is_empty() {
            return Err(Error::config("criteria", "no criteria selected"));
        }
        if self.rules.is_empty() {
            return Err(Error::config("rules", "no rules selected"));
        }
        let ns: Vec<u32> = (self.n_min..=self.n_max)
            .filter(|n| !self.even_only || n % 2 == 0)
            .collect();
        if ns.is_empty() {
            return Err(Error::config(
                "n_min",
                "the range contains no even sample size",
            ));
        }
        Ok(ns)
    }
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub files: Vec<PathBuf>,
}

/// Renders the rows of one criterion, ordered by `n` and then rule.
pub fn render_sweep_table(
    rows: &[SweepRow],
    criterion: Criterion,
    format: OutputFormat,
    digits: u32,
) -> String {
    let mut selected: Vec<&SweepRow> = rows.iter().filter(|r| r.criterion == criterion).collect();
    selected.sort_by_key(|r| (r.n, r.rule.position()));
    match format {
        OutputFormat::Csv => {
            let mut w = lf_writer();
            w.write_record(["n", "m", "rule", "value_decimal", "value_num", "value_den"])
                .expect("in-memory write");
            for r in selected {
                let v = ExactValue::new(&r.value, digits);
                w.write_record([
                    r.n.to_string(),
                    r.m.to_string(),
                    r.rule.name().to_string(),
                    v.value_decimal,
                    v.value_num,
                    v.value_den,
                ])
                .expect("in-memory write");
            }
            finish(w)
        }
        OutputFormat::Json => {
            let list: Vec<Value> = selected
                .iter()
                .map(|r| {
                    let v = ExactValue::new(&r.value, digits);
                    json!({
                        "n": r.n,
                        "m": r.m,
                        "rule": r.rule,
                        "value_decimal": v.value_decimal,
                        "value_num": v.value_num,
                        "value_den": v.value_den,
                    })
                })
                .collect();
            pretty(&list)
        }
    }
}

pub fn sweep_chart(rows: &[SweepRow], criterion: Criterion, include_coinflip: bool) -> LineChart {
    let mut series = Vec::new();
    for rule in Rule::ALL {
        if rule == Rule::CoinFlip && !include_coinflip {
            continue;
        }
        let points: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.criterion == criterion && r.rule == rule)
            .map(|r| (r.n as f64, r.value.to_f64().unwrap_or(f64::NAN)))
            .collect();
        if !points.is_empty() {
            series.push(Series {
                name: rule.name().to_string(),
                points,
            });
        }
    }
    LineChart {
        title: criterion.title().to_string(),
        x_label: "n".to_string(),
        y_label: "value".to_string(),
        series,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Scores every requested combination and writes one table per criterion
/// (plus one chart per criterion when an SVG directory is given).
pub fn run_sweep(req: &SweepRequest, cfg: &RunConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let ns = req.sample_sizes()?;
    let designs = ns
        .iter()
        .map(|&n| cfg.m_policy.design_for(n))
        .collect::<Result<Vec<Design>>>()?;
    let spec = cfg.utility_spec()?;
    let prior = cfg.prior.to_prior()?;
    for design in &designs {
        prior.resolve(design)?;
    }

    let rows =
        cfg.install(|| sweep(&ns, cfg.m_policy, &spec, &prior, &req.rules, &req.criteria))??;

    fs::create_dir_all(&req.out_dir).map_err(|e| Error::io(&req.out_dir, e))?;
    let mut files = Vec::new();
    for &criterion in &req.criteria {
        let path = req
            .out_dir
            .join(format!("{}.{}", criterion.name(), cfg.format.extension()));
        write_file(
            &path,
            &render_sweep_table(&rows, criterion, cfg.format, cfg.digits),
        )?;
        files.push(path);
    }
    if let Some(dir) = &req.svg_dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for &criterion in &req.criteria {
            let path = dir.join(format!("{}.svg", criterion.name()));
            write_file(
                &path,
                &sweep_chart(&rows, criterion, cfg.chart_coinflip).render(),
            )?;
            files.push(path);
        }
    }
    Ok(SweepOutput { rows, files })
}
