use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use halfstat::compress::{BitOrder, LzOptions, SizeMode};
use halfstat::corpus::{build_manifest, BuildOptions, DEFAULT_MAX_WORDS, DEFAULT_MIN_WORDS};
use halfstat::report::{analyze_corpus, emit_tables, CompressorChoice, TableFormat};
use halfstat::transform::Rendering;
use halfstat::{RunConfig, TokenizerConfig, Variant};

#[derive(Parser)]
#[command(
    name = "halfstat",
    version,
    about = "Compare statistics of the two halves of texts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Corpus preparation.
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
    },
    /// Run the relation battery over a manifest and write tables.
    Analyze(AnalyzeArgs),
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// Scan a directory of .txt files and write a manifest.
    Build(BuildArgs),
}

#[derive(Args, Clone)]
struct TokenizerArgs {
    /// Keep letter case when comparing words.
    #[arg(long)]
    no_case_fold: bool,
    /// Map a word ending in `s` to its stem when the stem occurs in the text.
    #[arg(long)]
    merge_plural: bool,
    /// Do not treat commas as sentence delimiters.
    #[arg(long)]
    no_comma_delim: bool,
}

impl TokenizerArgs {
    fn config(&self) -> TokenizerConfig {
        TokenizerConfig {
            case_fold: !self.no_case_fold,
            merge_plural: self.merge_plural,
            comma_is_delim: !self.no_comma_delim,
            ..TokenizerConfig::default()
        }
    }
}

#[derive(Args, Clone, Copy)]
struct BoilerplateArgs {
    /// Strip Gutenberg header and footer (the default).
    #[arg(long, overrides_with = "keep_boilerplate")]
    strip_boilerplate: bool,
    /// Keep the full file contents.
    #[arg(long, overrides_with = "strip_boilerplate")]
    keep_boilerplate: bool,
}

impl BoilerplateArgs {
    fn strip(self) -> bool {
        !self.keep_boilerplate
    }
}

#[derive(Args)]
struct BuildArgs {
    /// Directory with one UTF-8 .txt file per text.
    #[arg(long = "in", value_name = "DIR")]
    input: PathBuf,
    /// Manifest path (JSON Lines).
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MIN_WORDS)]
    min_words: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_WORDS)]
    max_words: usize,
    #[command(flatten)]
    boilerplate: BoilerplateArgs,
    #[command(flatten)]
    tokenizer: TokenizerArgs,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long, value_name = "FILE")]
    manifest: PathBuf,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    #[arg(long, env = "SEED", default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    repetitions: u32,
    /// Comma-separated subset of original, shuffled, inverted-words, inverted-letters.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "original,shuffled,inverted-words,inverted-letters"
    )]
    variants: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "15,20,30")]
    mu_thresholds: Vec<usize>,
    /// Admit words into the mu average only when their count exceeds the threshold.
    #[arg(long)]
    min_count_exclusive: bool,
    #[arg(long, default_value_t = 5)]
    kappa_max: usize,
    /// deflate or none.
    #[arg(long, default_value = "deflate")]
    compressor: String,
    /// Measure LZ size as C(1 + log2 C)/8 bytes instead of C.
    #[arg(long)]
    coded_size: bool,
    /// Expand bytes to bits least significant bit first.
    #[arg(long)]
    lsb_first: bool,
    /// Divide Yule's constant by the number of distinct words.
    #[arg(long)]
    yule_per_type: bool,
    /// Units reversed by the whole-text inversion: words (tokenized) or tokens
    /// (whitespace-separated, punctuation kept).
    #[arg(long, default_value = "words")]
    inversion_rendering: String,
    /// Comma-separated table formats: csv, md.
    #[arg(long, value_delimiter = ',', default_value = "csv,md")]
    formats: Vec<String>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    boilerplate: BoilerplateArgs,
    #[command(flatten)]
    tokenizer: TokenizerArgs,
}

impl AnalyzeArgs {
    fn config(&self) -> Result<RunConfig> {
        let variants = self
            .variants
            .iter()
            .map(|v| v.parse::<Variant>())
            .collect::<halfstat::Result<Vec<_>>>()?;
        let config = RunConfig {
            manifest: self.manifest.clone(),
            tokenizer: self.tokenizer.config(),
            strip_boilerplate: self.boilerplate.strip(),
            seed: self.seed,
            shuffle_repetitions: self.repetitions,
            mu_thresholds: self.mu_thresholds.clone(),
            min_count_exclusive: self.min_count_exclusive,
            kappa_max: self.kappa_max,
            compressor: self.compressor.parse::<CompressorChoice>()?,
            lz: LzOptions {
                bit_order: if self.lsb_first {
                    BitOrder::LsbFirst
                } else {
                    BitOrder::MsbFirst
                },
                size_mode: if self.coded_size {
                    SizeMode::Coded
                } else {
                    SizeMode::Fragments
                },
            },
            yule_per_type: self.yule_per_type,
            variants,
            inversion_rendering: self.inversion_rendering.parse::<Rendering>()?,
        };
        config.validate()?;
        Ok(config)
    }
}

fn corpus_build(args: &BuildArgs) -> Result<()> {
    let options = BuildOptions {
        min_words: args.min_words,
        max_words: args.max_words,
        strip_boilerplate: args.boilerplate.strip(),
        tokenizer: args.tokenizer.config(),
        ..BuildOptions::default()
    };
    let manifest = build_manifest(&args.input, &options)
        .with_context(|| format!("building manifest from {}", args.input.display()))?;
    manifest.save(&args.out)?;
    let included = manifest.included().count();
    eprintln!(
        "{} texts, {} included, manifest written to {}",
        manifest.entries.len(),
        included,
        args.out.display()
    );
    Ok(())
}

fn analyze(args: &AnalyzeArgs) -> Result<()> {
    let config = args.config()?;
    let formats = args
        .formats
        .iter()
        .map(|f| f.parse::<TableFormat>())
        .collect::<halfstat::Result<Vec<_>>>()?;
    if formats.is_empty() {
        bail!("no table formats selected");
    }
    if let Some(jobs) = args.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring worker threads")?;
    }
    let bundle = analyze_corpus(&config)?;
    for w in &bundle.warnings {
        log::warn!("{w}");
    }
    for f in &bundle.failures {
        eprintln!("excluded {}: {}", f.id, f.reason);
    }
    let written = emit_tables(&bundle, &args.out, &formats)?;
    eprintln!(
        "{} texts analyzed, {} relation rows, {} files written under {}",
        bundle.records.len(),
        bundle.rows.len(),
        written.len(),
        args.out.display()
    );
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match &cli.command {
        Command::Corpus {
            command: CorpusCommand::Build(args),
        } => corpus_build(args),
        Command::Analyze(args) => analyze(args),
    }
}
