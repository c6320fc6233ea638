use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use exact_decide::config::{OutputFormat, PriorSelection, RunConfig, TrialRecord};
use exact_decide::criteria::{Criterion, MPolicy};
use exact_decide::likelihood::FisherAlternative;
use exact_decide::report::{analyze, decide_report, run_sweep, SweepRequest};
use exact_decide::rules::Rule;
use exact_decide::verify::{self, VerifyOptions};
use exact_decide::Error;

/// Exact randomization-based inference and treatment decisions for
/// two-arm trials with a binary outcome.
#[derive(Parser)]
#[command(name = "exact-decide", version)]
struct Cli {
    /// TOML run configuration; flags override its fields.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Likelihood, MLE, posterior means, Fisher p-value and every rule for one trial.
    Analyze {
        #[command(flatten)]
        trial: TrialArgs,
        /// Number of highest-likelihood strata to list.
        #[arg(long, value_name = "K")]
        top: Option<usize>,
        /// Report the two-sided Fisher p-value instead of the one-sided one.
        #[arg(long)]
        two_sided: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Apply one decision rule and show what it was based on.
    Decide {
        #[arg(long, value_parser = parse_rule)]
        rule: Rule,
        #[command(flatten)]
        trial: TrialArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Score every rule under every criterion across a range of sample sizes.
    Sweep {
        /// Smallest sample size, at least 2.
        #[arg(long)]
        n_min: u32,
        /// Largest sample size, at most 120.
        #[arg(long)]
        n_max: u32,
        /// Skip odd sample sizes.
        #[arg(long)]
        even_only: bool,
        /// even-half or floor-half.
        #[arg(long, value_parser = parse_policy)]
        m_policy: Option<MPolicy>,
        /// Comma-separated subset of maximin, maximin-normalized, bayes, ml.
        #[arg(long, value_delimiter = ',', value_parser = parse_criterion)]
        criteria: Option<Vec<Criterion>>,
        /// Comma-separated subset of ml, bayes, es, frechet, coinflip.
        #[arg(long, value_delimiter = ',', value_parser = parse_rule)]
        rules: Option<Vec<Rule>>,
        /// Also write one SVG chart per criterion here.
        #[arg(long, value_name = "DIR")]
        svg: Option<PathBuf>,
        /// Draw the coin-flip series in charts.
        #[arg(long)]
        chart_coinflip: bool,
        /// Directory for one table per criterion.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the built-in verification suites.
    Verify {
        /// Cap every suite at this sample size.
        #[arg(long, value_name = "N")]
        max_n: Option<u32>,
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct TrialArgs {
    /// Read the trial from a .json or .csv file.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["n", "m", "xi1", "xi0", "xc1", "xc0", "sepsis"])]
    trial: Option<PathBuf>,
    /// Use the bundled 28-patient sepsis trial.
    #[arg(long)]
    sepsis: bool,
    /// Total participants.
    #[arg(long)]
    n: Option<u32>,
    /// Participants assigned to the intervention arm.
    #[arg(long)]
    m: Option<u32>,
    /// Survivors in the intervention arm.
    #[arg(long)]
    xi1: Option<u32>,
    /// Deaths in the intervention arm.
    #[arg(long)]
    xi0: Option<u32>,
    /// Survivors in the control arm.
    #[arg(long)]
    xc1: Option<u32>,
    /// Deaths in the control arm.
    #[arg(long)]
    xc0: Option<u32>,
}

impl TrialArgs {
    fn record(&self) -> Result<TrialRecord, Error> {
        if let Some(path) = &self.trial {
            return TrialRecord::load(path);
        }
        if self.sepsis {
            return Ok(TrialRecord::sepsis());
        }
        let field = |v: Option<u32>, name: &str| {
            v.ok_or_else(|| Error::Config {
                field: name.to_string(),
                reason: "missing; pass --trial FILE, --sepsis, or all of --n --m --xi1 --xi0 --xc1 --xc0".into(),
            })
        };
        Ok(TrialRecord {
            n: field(self.n, "n")?,
            m: field(self.m, "m")?,
            x_i1: field(self.xi1, "xi1")?,
            x_i0: field(self.xi0, "xi0")?,
            x_c1: field(self.xc1, "xc1")?,
            x_c0: field(self.xc0, "xc0")?,
            label: None,
        })
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Weight on efficacious participants, e.g. 1/2.
    #[arg(long, value_name = "W")]
    efficacy_weight: Option<String>,
    /// Weight on harmed participants.
    #[arg(long, value_name = "W")]
    unsafe_weight: Option<String>,
    /// Use total rather than per-participant utility.
    #[arg(long)]
    total_utility: bool,
    /// uniform, point:a,b,c,d or file:PATH.
    #[arg(long, value_parser = parse_prior)]
    prior: Option<PriorSelection>,
    /// Fractional digits in value_decimal.
    #[arg(long)]
    digits: Option<u32>,
    /// csv or json.
    #[arg(long, value_parser = parse_format)]
    format: Option<OutputFormat>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    threads: Option<usize>,
}

impl CommonArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(w) = &self.efficacy_weight {
            cfg.efficacy_weight = w.clone();
        }
        if let Some(w) = &self.unsafe_weight {
            cfg.unsafe_weight = w.clone();
        }
        if self.total_utility {
            cfg.per_participant = false;
        }
        if let Some(p) = &self.prior {
            cfg.prior = p.clone();
        }
        if let Some(d) = self.digits {
            cfg.digits = d;
        }
        if let Some(f) = self.format {
            cfg.format = f;
        }
        if let Some(t) = self.threads {
            cfg.threads = t;
        }
    }
}

fn parse_rule(s: &str) -> Result<Rule, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_criterion(s: &str) -> Result<Criterion, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_policy(s: &str) -> Result<MPolicy, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_prior(s: &str) -> Result<PriorSelection, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Analyze {
            trial,
            top,
            two_sided,
            common,
        } => {
            common.apply(&mut cfg);
            if let Some(k) = top {
                cfg.top_k = k;
            }
            if two_sided {
                cfg.fisher = FisherAlternative::TwoSided;
            }
            let report = analyze(&trial.record()?, &cfg)?;
            print!("{}", report.render(cfg.format));
        }
        Command::Decide {
            rule,
            trial,
            common,
        } => {
            common.apply(&mut cfg);
            let report = decide_report(&trial.record()?, rule, &cfg)?;
            print!("{}", report.render(cfg.format));
        }
        Command::Sweep {
            n_min,
            n_max,
            even_only,
            m_policy,
            criteria,
            rules,
            svg,
            chart_coinflip,
            out,
            common,
        } => {
            common.apply(&mut cfg);
            if let Some(p) = m_policy {
                cfg.m_policy = p;
            }
            if chart_coinflip {
                cfg.chart_coinflip = true;
            }
            let mut req = SweepRequest::new(n_min, n_max, out);
            req.even_only = even_only;
            req.svg_dir = svg;
            if let Some(c) = criteria {
                req.criteria = c;
            }
            if let Some(r) = rules {
                req.rules = r;
            }
            let output = run_sweep(&req, &cfg)?;
            for path in &output.files {
                println!("{}", path.display());
            }
        }
        Command::Verify {
            max_n,
            inject_fault,
            common,
        } => {
            common.apply(&mut cfg);
            cfg.validate()?;
            let opts = VerifyOptions {
                max_n,
                spec: cfg.utility_spec()?,
                m_policy: cfg.m_policy,
                inject_fault,
            };
            let report = cfg.install(|| verify::run(&opts))??;
            print!("{report}");
            if !report.passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
