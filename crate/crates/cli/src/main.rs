use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use senseforge::clustering::InitMode;
use senseforge::pipeline::{
    cmd_build, cmd_demo_select, cmd_eval_rho, cmd_eval_wsi, cmd_label, Method, PipelineConfig,
    RhoInputs, Selection, WsiInputs,
};
use senseforge::sense_select::MonosemousLabel;
use senseforge::{Error, Result};

/// Word sense induction and sense selection over tagged corpora.
///
/// Log verbosity follows the SENSEFORGE_LOG environment variable
/// (error, warn, info, debug, trace); the default is warn.
#[derive(Parser)]
#[command(name = "senseforge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster the occurrences of every ambiguous word type in the corpus.
    Build {
        #[command(flatten)]
        common: Common,
    },
    /// Attach a sense label to every token of the corpus.
    Label {
        #[command(flatten)]
        common: Common,
        /// Labeled corpus to write.
        #[arg(long, short)]
        output: PathBuf,
        /// Also write `instance_id<TAB>label` rows for disambiguated tokens.
        #[arg(long)]
        instances: Option<PathBuf>,
    },
    /// Score predicted sense labels against gold labels.
    EvalWsi {
        #[command(flatten)]
        common: Common,
        /// Labeled corpus or `instance_id<TAB>label` file.
        #[arg(long)]
        predicted: PathBuf,
        /// Gold `instance_id<TAB>label` file.
        #[arg(long)]
        gold: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Row name in the CSV/TSV reports.
        #[arg(long)]
        name: Option<String>,
    },
    /// Lexical-choice scores of a system translation against a baseline.
    EvalRho {
        #[command(flatten)]
        common: Common,
        /// Tagged source corpus.
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        baseline: PathBuf,
        #[arg(long)]
        reference: PathBuf,
        /// Pharaoh alignments from the source to the system output.
        #[arg(long)]
        system_align: PathBuf,
        #[arg(long)]
        baseline_align: PathBuf,
        #[arg(long)]
        reference_align: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
    /// Write per-token sense weights under the configured selection mode.
    DemoSelect {
        #[command(flatten)]
        common: Common,
        /// JSON-lines trace file to write.
        #[arg(long, short)]
        output: PathBuf,
    },
}

/// Config file plus per-field overrides; flags win over the file.
#[derive(Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long, short)]
    config: Option<PathBuf>,
    #[arg(long)]
    inventory: Option<PathBuf>,
    #[arg(long)]
    embeddings: Option<PathBuf>,
    #[arg(long)]
    stopwords: Option<PathBuf>,
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Model directory.
    #[arg(long)]
    models: Option<PathBuf>,
    /// Weighted sense-graph edges (TSV).
    #[arg(long)]
    edges: Option<PathBuf>,
    /// kmeans, crp or graph.
    #[arg(long)]
    method: Option<Method>,
    /// definitions or examples.
    #[arg(long)]
    init_mode: Option<InitMode>,
    /// Context window size (even).
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    min_cluster_size: Option<usize>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    lambda1: Option<f64>,
    #[arg(long)]
    lambda2: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    damping: Option<f64>,
    /// top, avg_linear, avg_logistic, att_tanh or att_bilinear.
    #[arg(long)]
    selection: Option<Selection>,
    #[arg(long)]
    max_senses: Option<usize>,
    /// word or null.
    #[arg(long, value_parser = parse_monosemous)]
    monosemous_label: Option<MonosemousLabel>,
    #[arg(long)]
    pad_range: Option<f64>,
    #[arg(long)]
    word_dim: Option<usize>,
    #[arg(long)]
    attention_width: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

fn parse_monosemous(s: &str) -> std::result::Result<MonosemousLabel, String> {
    match s {
        "word" => Ok(MonosemousLabel::Word),
        "null" => Ok(MonosemousLabel::Null),
        other => Err(format!("expected `word` or `null`, got `{other}`")),
    }
}

macro_rules! set {
    ($cfg:ident . $($field:ident).+ = $value:expr) => {
        if let Some(v) = $value {
            $cfg.$($field).+ = v;
        }
    };
}

impl Common {
    fn config(self) -> Result<PipelineConfig> {
        let mut c = match &self.config {
            Some(path) => PipelineConfig::load(path)?,
            None => PipelineConfig::default(),
        };
        for (slot, value) in [
            (&mut c.inventory, self.inventory),
            (&mut c.embeddings, self.embeddings),
            (&mut c.stopwords, self.stopwords),
            (&mut c.corpus, self.corpus),
            (&mut c.models, self.models),
            (&mut c.edges, self.edges),
        ] {
            if value.is_some() {
                *slot = value;
            }
        }
        set!(c.method = self.method);
        set!(c.init_mode = self.init_mode);
        set!(c.window = self.window);
        set!(c.min_cluster_size = self.min_cluster_size);
        set!(c.max_iters = self.max_iters);
        set!(c.crp.lambda1 = self.lambda1);
        set!(c.crp.lambda2 = self.lambda2);
        set!(c.crp.gamma = self.gamma);
        set!(c.pagerank.damping = self.damping);
        set!(c.selection = self.selection);
        set!(c.max_senses = self.max_senses);
        set!(c.monosemous_label = self.monosemous_label);
        set!(c.pad_range = self.pad_range);
        set!(c.word_dim = self.word_dim);
        set!(c.attention_width = self.attention_width);
        set!(c.seed = self.seed);
        c.validate()?;
        Ok(c)
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Build { common } => {
            let manifest = cmd_build(&common.config()?)?;
            println!(
                "built {} models, skipped {} word types",
                manifest.models.len(),
                manifest.skipped.len()
            );
        }
        Command::Label {
            common,
            output,
            instances,
        } => {
            let out = cmd_label(&common.config()?, &output, instances.as_deref())?;
            println!(
                "labeled {} sentences, {} disambiguated tokens, {} fallbacks",
                out.sentences.len(),
                out.instances.len(),
                out.fallbacks
            );
        }
        Command::EvalWsi {
            common,
            predicted,
            gold,
            out_dir,
            name,
        } => {
            let config = common.config()?;
            let report = cmd_eval_wsi(
                &config,
                &WsiInputs {
                    predicted: &predicted,
                    gold: &gold,
                    out_dir: &out_dir,
                    name: name.as_deref(),
                },
            )?;
            print!(
                "{}",
                report.to_csv(name.as_deref().unwrap_or(&config.run_name()))
            );
        }
        Command::EvalRho {
            common,
            source,
            system,
            baseline,
            reference,
            system_align,
            baseline_align,
            reference_align,
            out_dir,
            name,
        } => {
            let report = cmd_eval_rho(
                &common.config()?,
                &RhoInputs {
                    source: &source,
                    targets: [&system, &baseline, &reference],
                    alignments: [&system_align, &baseline_align, &reference_align],
                    out_dir: &out_dir,
                    name: name.as_deref(),
                },
            )?;
            let r = report.rho;
            println!(
                "rho = {:.4} (improved {}, degraded {}, T = {})",
                r.rho, r.n_improved, r.n_degraded, r.t
            );
        }
        Command::DemoSelect { common, output } => {
            let traces = cmd_demo_select(&common.config()?, &output)?;
            println!("wrote {} traces", traces.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SENSEFORGE_LOG", "warn"))
        .format_timestamp(None)
        .init();
    // Usage errors are input errors, so they exit with 1 rather than clap's 2.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_input_error() {
        1
    } else {
        2
    }
}
