//! Run configuration and trial records.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{Design, StratumCounts, TrialOutcome};
use crate::criteria::MPolicy;
use crate::error::{Error, Result};
use crate::likelihood::{FisherAlternative, Prior};
use crate::rules::UtilitySpec;

/// Sufficient statistics of one two-arm trial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialRecord {
    pub n: u32,
    pub m: u32,
    pub x_i1: u32,
    pub x_i0: u32,
    pub x_c1: u32,
    pub x_c0: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

const SEPSIS_JSON: &str = include_str!("../fixtures/sepsis.json");

impl TrialRecord {
    /// The bundled 28-patient sepsis trial.
    pub fn sepsis() -> Self {
        Self::from_json(SEPSIS_JSON).expect("bundled fixture parses")
    }

    pub fn new(design: &Design, x: &TrialOutcome) -> Self {
        Self {
            n: design.n(),
            m: design.m(),
            x_i1: x.treated_alive,
            x_i0: x.treated_dead,
            x_c1: x.control_alive,
            x_c0: x.control_dead,
            label: None,
        }
    }

    pub fn outcome(&self) -> TrialOutcome {
        TrialOutcome::new(self.x_i1, self.x_i0, self.x_c1, self.x_c0)
    }

    /// Checks the design and both margins.
    pub fn validate(&self) -> Result<(Design, TrialOutcome)> {
        let design = Design::new(self.n, self.m)?;
        let x = self.outcome();
        design.check_outcome(&x)?;
        Ok((design, x))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::parse("trial record JSON", e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trial record serializes")
    }

    /// Header row plus exactly one data row. Fields are trimmed, and an
    /// empty label reads as no label.
    pub fn from_csv(s: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(s.as_bytes());
        let mut rows = reader.deserialize::<TrialRecord>();
        let record = rows
            .next()
            .ok_or_else(|| Error::parse("trial record CSV", "no data row"))?
            .map_err(|e| Error::parse("trial record CSV", e))?;
        if rows.next().is_some() {
            return Err(Error::parse(
                "trial record CSV",
                "expected a single data row",
            ));
        }
        Ok(record)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(["n", "m", "x_i1", "x_i0", "x_c1", "x_c0", "label"])
            .expect("in-memory write");
        w.write_record([
            self.n.to_string(),
            self.m.to_string(),
            self.x_i1.to_string(),
            self.x_i0.to_string(),
            self.x_c1.to_string(),
            self.x_c0.to_string(),
            self.label.clone().unwrap_or_default(),
        ])
        .expect("in-memory write");
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    /// Reads a `.json` or `.csv` trial file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::from_json(&text),
            Some("csv") => Self::from_csv(&text),
            _ => Self::from_json(&text).or_else(|_| Self::from_csv(&text)),
        }
    }
}

/// Where the prior over stratum counts comes from.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PriorSelection {
    #[default]
    Uniform,
    /// All mass on one stratum vector, in (live, efficacious, harmed, die) order.
    Point([u32; 4]),
    /// CSV with columns live_regardless, efficacious, harmed, die_regardless, weight.
    File(PathBuf),
}

impl FromStr for PriorSelection {
    type Err = Error;

    /// `uniform`, `point:a,b,c,d`, or `file:PATH`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "uniform" {
            return Ok(PriorSelection::Uniform);
        }
        if let Some(rest) = s.strip_prefix("point:") {
            let parts: Vec<u32> = rest
                .split(',')
                .map(|p| p.trim().parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::config("prior", format!("bad point prior `{rest}`: {e}")))?;
            let arr: [u32; 4] = parts
                .try_into()
                .map_err(|_| Error::config("prior", "point prior needs four counts"))?;
            return Ok(PriorSelection::Point(arr));
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(PriorSelection::File(PathBuf::from(path)));
        }
        Err(Error::config(
            "prior",
            format!("`{s}` is not uniform, point:a,b,c,d or file:PATH"),
        ))
    }
}

#[derive(Debug, Deserialize)]
struct PriorRow {
    live_regardless: u32,
    efficacious: u32,
    harmed: u32,
    die_regardless: u32,
    weight: u64,
}

impl PriorSelection {
    pub fn to_prior(&self) -> Result<Prior> {
        Ok(match self {
            PriorSelection::Uniform => Prior::Uniform,
            PriorSelection::Point(a) => Prior::Point(StratumCounts::from_array(*a)),
            PriorSelection::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                let mut reader = csv::ReaderBuilder::new()
                    .trim(csv::Trim::All)
                    .from_reader(text.as_bytes());
                let mut list = Vec::new();
                for row in reader.deserialize::<PriorRow>() {
                    let row =
                        row.map_err(|e| Error::parse(format!("prior file {}", path.display()), e))?;
                    list.push((
                        StratumCounts::new(
                            row.live_regardless,
                            row.efficacious,
                            row.harmed,
                            row.die_regardless,
                        ),
                        row.weight,
                    ));
                }
                Prior::Weights(list)
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::config(
                "format",
                format!("`{other}` is not csv or json"),
            )),
        }
    }
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Everything a command needs besides its inputs. Loaded from an optional
/// TOML file; command-line flags override individual fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Weight on efficacious participants, as `a/b` or an integer.
    pub efficacy_weight: String,
    /// Weight on harmed participants.
    pub unsafe_weight: String,
    pub per_participant: bool,
    pub prior: PriorSelection,
    pub m_policy: MPolicy,
    pub digits: u32,
    pub format: OutputFormat,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
    pub top_k: usize,
    pub fisher: FisherAlternative,
    /// Add the coin-flip series to sweep charts.
    pub chart_coinflip: bool,
    /// Output never depends on a seed or on scheduling; `false` is rejected.
    pub deterministic: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            efficacy_weight: "1/2".into(),
            unsafe_weight: "1".into(),
            per_participant: true,
            prior: PriorSelection::Uniform,
            m_policy: MPolicy::EvenHalf,
            digits: 3,
            format: OutputFormat::Csv,
            threads: 0,
            top_k: 10,
            fisher: FisherAlternative::Greater,
            chart_coinflip: false,
            deterministic: true,
        }
    }
}

pub const MAX_DIGITS: u32 = 40;

fn parse_weight(field: &str, s: &str) -> Result<Rational64> {
    s.trim().parse::<Rational64>().map_err(|e| {
        Error::config(
            field,
            format!("`{s}` is not an integer or a/b fraction: {e}"),
        )
    })
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::parse("configuration", e))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn utility_spec(&self) -> Result<UtilitySpec> {
        let we = parse_weight("efficacy_weight", &self.efficacy_weight)?;
        let wu = parse_weight("unsafe_weight", &self.unsafe_weight)?;
        if we <= Rational64::from_integer(0) {
            return Err(Error::config("efficacy_weight", "must be positive"));
        }
        if wu <= Rational64::from_integer(0) {
            return Err(Error::config("unsafe_weight", "must be positive"));
        }
        Ok(UtilitySpec {
            efficacy_weight: we,
            unsafe_weight: wu,
            per_participant: self.per_participant,
        })
    }

    /// Rejects any invalid field before computation starts.
    pub fn validate(&self) -> Result<()> {
        self.utility_spec()?;
        if self.digits > MAX_DIGITS {
            return Err(Error::config(
                "digits",
                format!("{} exceeds the maximum of {MAX_DIGITS}", self.digits),
            ));
        }
        if self.top_k == 0 {
            return Err(Error::config("top_k", "must be at least 1"));
        }
        if self.threads > 1024 {
            return Err(Error::config(
                "threads",
                format!("{} is more than 1024", self.threads),
            ));
        }
        if !self.deterministic {
            return Err(Error::config(
                "deterministic",
                "every computation is exact and seedless; only `true` is accepted",
            ));
        }
        if let PriorSelection::File(path) = &self.prior {
            if !path.exists() {
                return Err(Error::config(
                    "prior",
                    format!("prior file {} does not exist", path.display()),
                ));
            }
        }
        Ok(())
    }

    /// Runs `f` on a pool with the configured number of threads.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| Error::config("threads", e.to_string()))?;
        Ok(pool.install(f))
    }
}
