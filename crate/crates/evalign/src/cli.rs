//! The `evalign` command line.
//!
//! ```text
//! evalign match   --source FILE --target FILE [--matchers LIST] [--threshold R]
//!                 [--kmin N] [--kmax N] [--rule NAME] [--scores FILE] [--output FILE]
//! evalign combine --bbas FILE [--rule NAME]
//! evalign decide  --bba FILE [--rule mindist|betp|bel|pl|appriou] [--kmin N] [--kmax N] [--r R]
//! evalign sim     --matcher NAME A B
//! ```
//!
//! Results go to standard output, diagnostics to standard error. Exit
//! status is 0 on success, 1 for domain errors and 2 for usage or IO errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use evalign_core::combination::{combine_all, CombinationRule};
use evalign_core::decision::{self, AppriouParams, DecisionConfig, DecisionRule};
use evalign_core::pipeline::PipelineConfig;
use evalign_core::similarity::{self, MatcherKind};

use crate::catalog::read_catalog;
use crate::error::{CliError, ExitCode};
use crate::formats::{self, AlignmentJson, BbaFile, DecisionJson, Fixed6, MassTable, NamedBba};
use crate::parallel;

#[derive(Debug, Parser)]
#[command(name = "evalign", version, about = "Belief-function entity matching")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Match two entity catalogs and print the alignment as JSON.
    Match(MatchArgs),
    /// Combine the mass functions of a bba file.
    Combine(CombineArgs),
    /// Decide on the mass function of a bba file.
    Decide(DecideArgs),
    /// Print the similarity of two labels.
    Sim(SimArgs),
}

fn parse_from_str<T: std::str::FromStr<Err = evalign_core::Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: evalign_core::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct MatchArgs {
    /// Source catalog, one entity label per line.
    #[arg(long)]
    pub source: PathBuf,
    /// Target catalog.
    #[arg(long)]
    pub target: PathBuf,
    /// Comma-separated matchers.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "levenshtein,jaro,hamming",
        value_parser = parse_from_str::<MatcherKind>
    )]
    pub matchers: Vec<MatcherKind>,
    /// Proposals must score strictly above this.
    #[arg(long, default_value_t = 0.0)]
    pub threshold: f64,
    /// Smallest cardinality of a decided target set.
    #[arg(long, default_value_t = 1)]
    pub kmin: usize,
    /// Largest cardinality of a decided target set.
    #[arg(long, default_value_t = 2)]
    pub kmax: usize,
    /// Combination rule: dempster, conjunctive or disjunctive.
    #[arg(long, default_value = "dempster", value_parser = parse_from_str::<CombinationRule>)]
    pub rule: CombinationRule,
    /// Keep source entities proposed by at least one matcher, not all.
    #[arg(long)]
    pub allow_partial: bool,
    /// Injected scores (JSON list of {matcher, source, target, score}).
    #[arg(long)]
    pub scores: Option<PathBuf>,
    /// Write the alignment here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CombineArgs {
    #[arg(long)]
    pub bbas: PathBuf,
    #[arg(long, default_value = "dempster", value_parser = parse_from_str::<CombinationRule>)]
    pub rule: CombinationRule,
}

#[derive(Debug, Args)]
pub struct DecideArgs {
    /// A bba file holding exactly one mass function.
    #[arg(long)]
    pub bba: PathBuf,
    #[arg(long, default_value = "mindist", value_parser = parse_from_str::<DecisionRule>)]
    pub rule: DecisionRule,
    #[arg(long, default_value_t = 1)]
    pub kmin: usize,
    #[arg(long, default_value_t = 2)]
    pub kmax: usize,
    /// Cardinality exponent of the appriou rule, in [0, 1].
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// Also consider the whole frame as a candidate.
    #[arg(long)]
    pub full_frame: bool,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[arg(long, value_parser = parse_from_str::<MatcherKind>)]
    pub matcher: MatcherKind,
    pub a: String,
    pub b: String,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                ExitCode::Usage
            } else {
                let _ = out.write_all(text.as_bytes());
                ExitCode::Success
            };
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => ExitCode::Success,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Match(args) => cmd_match(args, out, err),
        Command::Combine(args) => cmd_combine(args, out),
        Command::Decide(args) => cmd_decide(args, out),
        Command::Sim(args) => cmd_sim(args, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(CliError::Output)
}

fn decision_config(kmin: usize, kmax: usize, include_full_frame: bool) -> DecisionConfig {
    DecisionConfig {
        min_cardinality: kmin,
        max_cardinality: kmax,
        include_full_frame,
        ..DecisionConfig::default()
    }
}

pub fn cmd_match(args: MatchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let config = PipelineConfig {
        matchers: args.matchers,
        threshold: args.threshold,
        combination: args.rule,
        decision: decision_config(args.kmin, args.kmax, false),
        require_all_matchers: !args.allow_partial,
    };
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let sources = read_catalog(&args.source)?;
    let targets = read_catalog(&args.target)?;
    let injected = match &args.scores {
        Some(path) => Some(formats::read_scores(path, &sources, &targets)?),
        None => None,
    };
    let doc = parallel::align(&sources, &targets, injected, &config)?;
    for d in &doc.diagnostics {
        let _ = writeln!(err, "warning: {}: {}", d.source, d.error);
    }
    let text = formats::to_json(&AlignmentJson::from(&doc));
    match &args.output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => emit(out, &text),
    }
}

pub fn cmd_combine(args: CombineArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let file = formats::read_bba_file(&args.bbas)?;
    let (frame, masses) = file.masses()?;
    let combined = combine_all(args.rule, &masses)?;
    let conflict = match args.rule {
        CombinationRule::Disjunctive => None,
        _ => Some(Fixed6(combine_all(CombinationRule::Conjunctive, &masses)?.empty_mass())),
    };
    let name = match file.bbas.as_slice() {
        [single] => single.name.clone(),
        many => format!(
            "{}({})",
            args.rule,
            many.iter().map(|b| b.name.as_str()).collect::<Vec<_>>().join(",")
        ),
    };
    let doc = BbaFile {
        frame: frame.labels().to_vec(),
        rule: Some(args.rule.name().into()),
        conflict,
        bbas: vec![NamedBba {
            name,
            masses: MassTable::from_mass(&combined),
        }],
    };
    emit(out, &formats::to_json(&doc))
}

pub fn cmd_decide(args: DecideArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let file = formats::read_bba_file(&args.bba)?;
    let (frame, masses) = file.masses()?;
    let [m] = masses.as_slice() else {
        return Err(evalign_core::Error::InvalidParameter("decide expects exactly one bba").into());
    };
    let config = decision_config(args.kmin, args.kmax, args.full_frame);
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let params = AppriouParams::new(args.r).map_err(|e| CliError::Usage(e.to_string()))?;
    let outcome = decision::decide(m, args.rule, &config, &params)?;
    emit(out, &formats::to_json(&DecisionJson::new(&frame, &outcome)))
}

pub fn cmd_sim(args: SimArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let score = similarity::score(args.matcher, &args.a, &args.b);
    emit(out, &format!("{:.6}\n", score.value()))
}
