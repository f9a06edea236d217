use std::io::{self, Write};
use std::ops::{Range, RangeInclusive};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use zncomplete::bounds::{threshold, ThresholdKind};
use zncomplete::sums::{k_fold_sums, lambda, lambda_profile, subset_sums};
use zncomplete::verify::{
    self, audit_chowla, audit_final_inequality, audit_lemma_eh, audit_mainlemma, audit_olson_identities, check_conjecture,
    max_incomplete_size, replay_lemma_eh, replay_main_proof, verify_theorem, AuditReport, Budget, CampaignConfig, Exec,
    ProofTrace,
};
use zncomplete::zn::subgroup_generated;
use zncomplete::{is_complete, Modulus, ResidueSet, ZnError};

const JOBS_ENV: &str = "ZNCOMPLETE_JOBS";

#[derive(Parser)]
#[command(name = "zncomplete", version, about = "Subset sums and completeness checks in Z_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Subset sums S_A and S_A^0
    Sums(SetArgs),
    /// Sums of exactly k distinct elements
    Kfold {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        k: usize,
    },
    /// Whether S_A equals the subgroup generated by A
    Complete(SetArgs),
    /// |(B + x) \ B| for one x, or the whole profile
    Lambda {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        x: Option<u64>,
    },
    /// Completeness and conjecture thresholds
    Threshold {
        #[command(flatten)]
        range: NRange,
        #[arg(long, value_enum, default_value_t = Kind::All)]
        kind: Kind,
    },
    /// Largest incomplete unit subset, by exhaustive search
    MaxIncomplete {
        #[command(flatten)]
        range: NRange,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Check that all unit sets of the threshold size are complete
    VerifyTheorem(CampaignArgs),
    /// Check |k∧A| = n at the conjectured size
    VerifyConjecture(CampaignArgs),
    /// Audit one of the supporting inequalities
    Audit {
        #[arg(long, value_enum)]
        claim: Claim,
        #[command(flatten)]
        campaign: CampaignArgs,
    },
    /// Replay a proof on one instance
    Replay {
        #[arg(long, value_enum)]
        proof: Proof,
        #[command(flatten)]
        set: SetArgs,
        /// The set B, for the lemma-eh replay
        #[arg(long)]
        b: Option<String>,
    },
}

#[derive(Args)]
struct SetArgs {
    #[arg(long)]
    n: u64,
    /// Comma-separated residues, e.g. 1,2,3
    #[arg(long, allow_hyphen_values = true)]
    set: String,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct NRange {
    #[arg(long)]
    n: Option<u64>,
    /// Inclusive range a:b
    #[arg(long, value_parser = parse_n_range)]
    n_range: Option<RangeInclusive<u64>>,
}

impl NRange {
    fn values(&self) -> RangeInclusive<u64> {
        match (&self.n, &self.n_range) {
            (Some(n), _) => *n..=*n,
            (None, Some(r)) => r.clone(),
            (None, None) => unreachable!("clap requires one of --n, --n-range"),
        }
    }
}

#[derive(Args)]
struct BudgetArgs {
    /// Run exhaustive searches past the size budget
    #[arg(long)]
    allow_large: bool,
    /// Budget on exhaustive instance counts
    #[arg(long, default_value_t = verify::DEFAULT_BUDGET)]
    budget: u128,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            limit: self.budget,
            allow_override: self.allow_large,
        }
    }
}

#[derive(Args)]
struct CampaignArgs {
    #[command(flatten)]
    range: NRange,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    /// Trials per modulus in sampled mode
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to $ZNCOMPLETE_JOBS, then the core count
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    /// Colex rank window a:b (half-open) for subset campaigns
    #[arg(long, value_parser = parse_rank_range)]
    rank_range: Option<Range<u64>>,
    /// Witnesses kept per claim in each report
    #[arg(long, default_value_t = verify::DEFAULT_MAX_WITNESSES)]
    max_witnesses: usize,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Main,
    Olson,
    ConjectureSize,
    ConjectureK,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Claim {
    Chowla,
    Olson,
    LemmaEh,
    Mainlemma,
    FinalIneq,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Proof {
    Main,
    LemmaEh,
}

fn parse_pair<T: FromStr + PartialOrd + Copy>(s: &str) -> Result<(T, T), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got {s:?}"))?;
    let parse = |x: &str| x.parse::<T>().map_err(|_| format!("not a number: {x:?}"));
    let (a, b) = (parse(a)?, parse(b)?);
    if a > b {
        return Err(format!("lower end exceeds upper end in {s:?}"));
    }
    Ok((a, b))
}

fn parse_n_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    parse_pair(s).map(|(a, b)| a..=b)
}

fn parse_rank_range(s: &str) -> Result<Range<u64>, String> {
    parse_pair(s).map(|(a, b)| a..b)
}

enum Failure {
    Usage(String),
    Budget(String),
    Io(io::Error),
}

impl From<ZnError> for Failure {
    fn from(e: ZnError) -> Self {
        match e {
            ZnError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<bool, Failure>;

struct Out {
    format: Format,
    header_written: bool,
    sink: io::StdoutLock<'static>,
}

impl Out {
    fn record(&mut self, v: Value) -> io::Result<()> {
        match self.format {
            Format::Json => writeln!(self.sink, "{v}"),
            Format::Csv => {
                let obj = v.as_object().expect("records are objects");
                if !self.header_written {
                    writeln!(self.sink, "{}", obj.keys().cloned().collect::<Vec<_>>().join(","))?;
                    self.header_written = true;
                }
                let cells: Vec<String> = obj.values().map(csv_cell).collect();
                writeln!(self.sink, "{}", cells.join(","))
            }
        }
    }

    fn report(&mut self, r: &AuditReport) -> io::Result<()> {
        match self.format {
            Format::Json => writeln!(self.sink, "{}", r.to_json_line()),
            Format::Csv => self.record(json!({
                "check": r.check,
                "n": r.n,
                "mode": r.params.get("mode").cloned().unwrap_or(Value::Null),
                "instances_tested": r.instances_tested,
                "violations": r.violation_count(),
                "findings": r.finding_count(),
                "seed": r.seed,
            })),
        }
    }
}

fn csv_cell(v: &Value) -> String {
    let raw = match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(xs) => xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    };
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}

fn parse_set(n: u64, literal: &str) -> Result<ResidueSet, Failure> {
    Ok(ResidueSet::parse_literal(Modulus::new(n)?, literal)?)
}

fn jobs(explicit: Option<u64>) -> Result<Exec, Failure> {
    let jobs = match explicit {
        Some(j) => j as usize,
        None => match std::env::var(JOBS_ENV) {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(j) if j >= 1 => j,
                _ => return Err(Failure::Usage(format!("{JOBS_ENV} must be a positive integer, got {v:?}"))),
            },
            Err(_) => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        },
    };
    Ok(Exec::with_jobs(jobs))
}

fn campaign_config(args: &CampaignArgs) -> Result<CampaignConfig, Failure> {
    let base = match args.mode {
        ModeArg::Exhaustive => {
            if args.trials.is_some() {
                return Err(Failure::Usage("--trials applies to sampled mode only".into()));
            }
            CampaignConfig::exhaustive()
        }
        ModeArg::Sampled => match args.trials {
            Some(t) if t >= 1 => CampaignConfig::sampled(t, args.seed),
            _ => return Err(Failure::Usage("sampled mode needs --trials >= 1".into())),
        },
    };
    let mut cfg = base.with_exec(jobs(args.jobs)?).with_budget(args.budget.budget());
    cfg.max_witnesses = args.max_witnesses;
    if let Some(r) = &args.rank_range {
        cfg = cfg.with_rank_range(r.clone());
    }
    Ok(cfg)
}

fn run_campaign(out: &mut Out, args: &CampaignArgs, f: impl Fn(u64, &CampaignConfig) -> zncomplete::Result<AuditReport>) -> Outcome {
    let cfg = campaign_config(args)?;
    let mut violated = false;
    for n in args.range.values() {
        let report = f(n, &cfg)?;
        violated |= report.has_violations();
        out.report(&report)?;
    }
    Ok(violated)
}

fn kinds(kind: Kind) -> Vec<ThresholdKind> {
    match kind {
        Kind::Main => vec![ThresholdKind::MainTheorem],
        Kind::Olson => vec![ThresholdKind::Olson],
        Kind::ConjectureSize => vec![ThresholdKind::ConjectureSize],
        Kind::ConjectureK => vec![ThresholdKind::ConjectureK],
        Kind::All => ThresholdKind::ALL.to_vec(),
    }
}

fn set_record(a: &ResidueSet) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("n".into(), json!(a.n()));
    m.insert("set".into(), json!(a.literal()));
    m
}

fn run(cli: Cli, out: &mut Out) -> Outcome {
    match cli.command {
        Command::Sums(s) => {
            let a = parse_set(s.n, &s.set)?;
            let pair = subset_sums(&a);
            let mut rec = set_record(&a);
            rec.insert("result".into(), json!(pair.s.to_vec()));
            rec.insert("with_zero".into(), json!(pair.s0.to_vec()));
            out.record(Value::Object(rec))?;
        }
        Command::Kfold { set, k } => {
            let a = parse_set(set.n, &set.set)?;
            let mut rec = set_record(&a);
            rec.insert("k".into(), json!(k));
            rec.insert("result".into(), json!(k_fold_sums(&a, k)?.to_vec()));
            out.record(Value::Object(rec))?;
        }
        Command::Complete(s) => {
            let a = parse_set(s.n, &s.set)?;
            let mut rec = set_record(&a);
            rec.insert("complete".into(), json!(is_complete(&a)?));
            rec.insert("subset_sums".into(), json!(subset_sums(&a).s.len()));
            rec.insert("subgroup".into(), json!(subgroup_generated(&a)?.len()));
            out.record(Value::Object(rec))?;
        }
        Command::Lambda { set, x } => {
            let b = parse_set(set.n, &set.set)?;
            let bz = b.to_zn_set();
            let mut rec = set_record(&b);
            match x {
                Some(x) => {
                    let x = b.modulus().residue(x)?;
                    rec.insert("x".into(), json!(x));
                    rec.insert("result".into(), json!(lambda(&bz, x)?));
                }
                None => {
                    rec.insert("result".into(), json!(lambda_profile(&bz)));
                }
            }
            out.record(Value::Object(rec))?;
        }
        Command::Threshold { range, kind } => {
            let single = range.n.is_some();
            for n in range.values() {
                for k in kinds(kind) {
                    match threshold(k, n) {
                        Ok(t) => out.record(json!(t))?,
                        Err(e) if single => return Err(e.into()),
                        Err(_) => {}
                    }
                }
            }
        }
        Command::MaxIncomplete { range, budget } => {
            for n in range.values() {
                let (size, witness) = max_incomplete_size(n, &budget.budget())?;
                out.record(json!({"n": n, "size": size, "witness": witness.literal()}))?;
            }
        }
        Command::VerifyTheorem(args) => return run_campaign(out, &args, verify_theorem),
        Command::VerifyConjecture(args) => return run_campaign(out, &args, check_conjecture),
        Command::Audit { claim, campaign } => {
            let f = match claim {
                Claim::Chowla => audit_chowla,
                Claim::Olson => audit_olson_identities,
                Claim::LemmaEh => audit_lemma_eh,
                Claim::Mainlemma => audit_mainlemma,
                Claim::FinalIneq => audit_final_inequality,
            };
            return run_campaign(out, &campaign, f);
        }
        Command::Replay { proof, set, b } => {
            let a = parse_set(set.n, &set.set)?;
            let trace = match (proof, b) {
                (Proof::Main, None) => ProofTrace::Main(replay_main_proof(&a)?),
                (Proof::LemmaEh, Some(b)) => ProofTrace::LemmaEh(replay_lemma_eh(&a, &parse_set(set.n, &b)?.to_zn_set())?),
                (Proof::Main, Some(_)) => return Err(Failure::Usage("--b applies to the lemma-eh replay only".into())),
                (Proof::LemmaEh, None) => return Err(Failure::Usage("the lemma-eh replay needs --b".into())),
            };
            if out.format == Format::Csv {
                return Err(Failure::Usage("replay traces are available as JSON only".into()));
            }
            out.record(serde_json::to_value(&trace).expect("trace serializes"))?;
        }
    }
    Ok(false)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut out = Out {
        format: cli.format,
        header_written: false,
        sink: io::stdout().lock(),
    };
    let result = run(cli, &mut out);
    let _ = out.sink.flush();
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg} (pass --allow-large to run anyway)");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
