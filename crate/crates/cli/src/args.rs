use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "litscope", version, about = "Citation-based literature suggestions")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML configuration file; LITSCOPE_* variables override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Read publications from a fixture file instead of the public APIs.
    #[arg(long, global = true, value_name = "FILE")]
    pub fixture: Option<PathBuf>,
    #[arg(long, global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Reference year for the "new" tag and citation rates.
    #[arg(long, global = true, value_name = "YEAR")]
    pub current_year: Option<i32>,
    /// Score on the calling thread only.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Copy, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, conflicts_with = "table")]
    pub json: bool,
    #[arg(long)]
    pub table: bool,
}

impl OutputArgs {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            Format::Table
        }
    }
}

/// Where the selection comes from.
#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["seed", "session"])))]
pub struct SelectionArgs {
    /// Selected DOIs, comma separated.
    #[arg(long, value_delimiter = ',', value_name = "DOI,...")]
    pub seed: Vec<String>,
    /// Session file with the selection, exclusions and keywords.
    #[arg(long, value_name = "FILE")]
    pub session: Option<PathBuf>,
    /// Keyword boost specification, e.g. "cit, visual|graph".
    #[arg(long)]
    pub keywords: Option<String>,
    #[arg(long)]
    pub no_boost: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank the publications linked to the selection.
    Suggest(SuggestArgs),
    /// Rank the authors of the selection.
    Authors(AuthorsArgs),
    /// Export the selection of a session.
    Export(ExportArgs),
    /// Create and edit session files.
    #[command(subcommand)]
    Session(SessionCommand),
    /// Search publications by text or by the DOIs in the query.
    Search(SearchArgs),
    /// Inspect or clear the publication cache.
    #[command(subcommand)]
    Cache(CacheCommand),
    /// Run the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct SuggestArgs {
    #[command(flatten)]
    pub selection: SelectionArgs,
    /// Number of suggestions to show.
    #[arg(long, default_value_t = 50)]
    pub top: usize,
    #[arg(long, default_value_t = 0)]
    pub offset: usize,
    #[arg(long, value_name = "TAG")]
    pub filter_tag: Option<String>,
    /// Year range: 2010..2015, 2010.. or ..2015.
    #[arg(long, value_name = "A..B")]
    pub filter_year: Option<String>,
    #[arg(long, value_name = "TEXT")]
    pub filter_title: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AuthorsArgs {
    #[command(flatten)]
    pub selection: SelectionArgs,
    /// Sum publication scores instead of counting publications.
    #[arg(long)]
    pub weight_score: bool,
    /// Double first-author contributions.
    #[arg(long)]
    pub boost_first: bool,
    /// Double contributions on new publications.
    #[arg(long)]
    pub boost_new: bool,
    /// Shorthand for the flags: aa, ab, ba or bb.
    #[arg(long, conflicts_with_all = ["weight_score", "boost_first", "boost_new"])]
    pub condition: Option<String>,
    #[arg(long)]
    pub top: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long, value_name = "FILE")]
    pub session: PathBuf,
    /// Write BibTeX here; "-" for standard output.
    #[arg(long, value_name = "OUT")]
    pub bibtex: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum SessionCommand {
    /// Write an empty session file.
    New {
        file: PathBuf,
        #[arg(long)]
        keywords: Option<String>,
        #[arg(long)]
        no_boost: bool,
        /// Overwrite an existing file.
        #[arg(long)]
        force: bool,
    },
    /// Add DOIs to the selection right away.
    Add {
        file: PathBuf,
        #[arg(required = true)]
        dois: Vec<String>,
    },
    /// Set the boost keywords.
    Keywords {
        file: PathBuf,
        spec: String,
        #[arg(long)]
        no_boost: bool,
    },
    /// Mark DOIs for inclusion or exclusion on the next update.
    #[command(group(ArgGroup::new("marks").required(true).multiple(true).args(["include", "exclude", "unstage"])))]
    Stage {
        file: PathBuf,
        #[arg(long, num_args = 1.., value_name = "DOI")]
        include: Vec<String>,
        #[arg(long, num_args = 1.., value_name = "DOI")]
        exclude: Vec<String>,
        #[arg(long, num_args = 1.., value_name = "DOI")]
        unstage: Vec<String>,
    },
    /// Apply the staged marks.
    Update { file: PathBuf },
    /// Copy the committed session to OUT; refused while marks are staged.
    Save { file: PathBuf, out: PathBuf },
    /// Print the session with its selection scores and warnings.
    Show { file: PathBuf },
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    pub query: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum CacheCommand {
    Stats,
    Clear,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Listen address, e.g. 127.0.0.1:8080.
    #[arg(long)]
    pub bind: Option<String>,
    /// Persist sessions in this directory.
    #[arg(long, value_name = "DIR")]
    pub session_dir: Option<PathBuf>,
}
