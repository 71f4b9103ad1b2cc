mod args;
mod error;
mod table;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use litscope_core::{
    commit_update, export_bibtex, load_session, save_session, AuthorScoreConfig, Doi, FilterSpec, SessionState, Tag,
};
use litscope_gateway::{detect_dois, GatewayError, METADATA_WINDOW};
use litscope_service::views::{authors_page, suggestions_page, FoundPublication, SessionView};
use litscope_service::{Derived, Engine, ServiceConfig};
use serde::{Deserialize, Serialize};

use args::{
    AuthorsArgs, CacheCommand, Cli, Command, ExportArgs, Format, GlobalArgs, SearchArgs, SelectionArgs, ServeArgs,
    SessionCommand, SuggestArgs,
};
use error::{io_error, CliError, CliResult};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build().expect("tokio runtime");
    match runtime.block_on(run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

async fn run(cli: Cli) -> CliResult {
    let global = &cli.global;
    match cli.command {
        Command::Suggest(args) => suggest(global, args).await,
        Command::Authors(args) => authors(global, args).await,
        Command::Export(args) => export(global, args).await,
        Command::Session(command) => session(global, command).await,
        Command::Search(args) => search(global, args).await,
        Command::Cache(command) => cache(global, command),
        Command::Serve(args) => serve(global, args).await,
    }
}

fn config(global: &GlobalArgs) -> CliResult<ServiceConfig> {
    let mut config = ServiceConfig::load(global.config.as_deref())?;
    if let Some(fixture) = &global.fixture {
        config.fixture = Some(fixture.clone());
    }
    if let Some(dir) = &global.cache_dir {
        config.cache_dir = Some(dir.clone());
    }
    if let Some(year) = global.current_year {
        config.current_year = Some(year);
    }
    config.sequential |= global.sequential;
    Ok(config)
}

fn engine(global: &GlobalArgs) -> CliResult<Engine> {
    Ok(litscope_service::engine(&config(global)?)?)
}

fn print_json<T: Serialize>(value: &T) {
    // through a Value so keys come out sorted, as in the HTTP golden files
    let value = serde_json::to_value(value).expect("views serialize");
    let mut text = serde_json::to_string_pretty(&value).expect("values serialize");
    text.push('\n');
    emit(&text);
}

/// Writes to stdout, exiting quietly if the reader has gone away.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("{}", CliError::Data(format!("stdout: {e}")).to_json());
        std::process::exit(3);
    }
}

fn parse_doi(raw: &str) -> CliResult<Doi> {
    Ok(Doi::parse(raw)?)
}

fn parse_dois(raw: &[String]) -> CliResult<Vec<Doi>> {
    raw.iter().map(|r| parse_doi(r)).collect()
}

fn read_session(path: &Path) -> CliResult<SessionState> {
    let bytes = std::fs::read(path).map_err(|e| io_error(path, e))?;
    Ok(load_session(&bytes)?)
}

fn write_session(path: &Path, state: &SessionState) -> CliResult {
    let bytes = save_session(state)?;
    std::fs::write(path, bytes).map_err(|e| io_error(path, e))
}

/// Staged marks live next to the session file, since session files only
/// hold committed state.
#[derive(Debug, Default, Serialize, Deserialize)]
struct StagedMarks {
    include: Vec<Doi>,
    exclude: Vec<Doi>,
}

fn staged_path(file: &Path) -> PathBuf {
    let mut name = OsString::from(file.as_os_str());
    name.push(".staged.json");
    PathBuf::from(name)
}

fn with_staged(file: &Path, mut state: SessionState) -> CliResult<SessionState> {
    let path = staged_path(file);
    if !path.exists() {
        return Ok(state);
    }
    let bytes = std::fs::read(&path).map_err(|e| io_error(&path, e))?;
    let marks: StagedMarks =
        serde_json::from_slice(&bytes).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    marks.include.into_iter().for_each(|d| state.stage_include(d));
    marks.exclude.into_iter().for_each(|d| state.stage_exclude(d));
    Ok(state)
}

fn write_staged(file: &Path, state: &SessionState) -> CliResult {
    let path = staged_path(file);
    if !state.has_staged_changes() {
        return match std::fs::remove_file(&path) {
            Err(e) if e.kind() != std::io::ErrorKind::NotFound => Err(io_error(&path, e)),
            _ => Ok(()),
        };
    }
    let marks = StagedMarks {
        include: state.staged_inclusions.iter().cloned().collect(),
        exclude: state.staged_exclusions.iter().cloned().collect(),
    };
    let bytes = serde_json::to_vec_pretty(&marks).expect("marks serialize");
    std::fs::write(&path, bytes).map_err(|e| io_error(&path, e))
}

fn selection_state(args: &SelectionArgs) -> CliResult<SessionState> {
    let mut state = match &args.session {
        Some(path) => read_session(path)?,
        None => SessionState::default(),
    };
    state.select(parse_dois(&args.seed)?);
    if let Some(keywords) = &args.keywords {
        state.set_keywords(keywords, state.boost_enabled);
    }
    if args.no_boost {
        state.boost_enabled = false;
    }
    Ok(state)
}

fn parse_year_range(raw: &str) -> CliResult<(Option<i32>, Option<i32>)> {
    let bad = || CliError::Data(format!("invalid year range {raw:?}; expected A..B, A.. or ..B"));
    let (a, b) = raw.split_once("..").ok_or_else(bad)?;
    let year = |s: &str| -> CliResult<Option<i32>> {
        let s = s.trim();
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|_| bad())
        }
    };
    Ok((year(a)?, year(b)?))
}

/// Window of loaded candidates covering `offset + top`, in steps of the
/// standard window.
fn window_for(offset: usize, top: usize) -> usize {
    (offset + top).div_ceil(METADATA_WINDOW).max(1) * METADATA_WINDOW
}

async fn suggest(global: &GlobalArgs, args: SuggestArgs) -> CliResult {
    let state = selection_state(&args.selection)?;
    let (year_min, year_max) = match &args.filter_year {
        Some(range) => parse_year_range(range)?,
        None => (None, None),
    };
    let tag = match args.filter_tag.as_deref() {
        Some(t) => Some(t.parse::<Tag>().map_err(|e| CliError::Data(e.to_string()))?),
        None => None,
    };
    let filter = FilterSpec { title_query: args.filter_title.clone(), year_min, year_max, tag };
    filter.validate()?;
    let engine = engine(global)?;
    let derived = engine.recompute(&state, window_for(args.offset, args.top)).await?;
    let page = suggestions_page(&derived, &state, &filter, args.offset, args.top)?;
    match args.output.format() {
        Format::Json => print_json(&page),
        Format::Table => emit(&table::suggestions(&page)),
    }
    warn(&derived);
    Ok(())
}

fn warn(derived: &Derived) {
    for w in &derived.warnings {
        let kind = serde_json::to_value(&w.kind).expect("warning kinds serialize");
        eprintln!("warning: {} {}", w.doi, kind.as_str().unwrap_or_default());
    }
}

async fn authors(global: &GlobalArgs, args: AuthorsArgs) -> CliResult {
    let state = selection_state(&args.selection)?;
    let condition = match &args.condition {
        Some(c) => c.parse::<AuthorScoreConfig>().map_err(CliError::Usage)?,
        None => AuthorScoreConfig::new(args.weight_score, args.boost_first, args.boost_new),
    };
    let engine = engine(global)?;
    let derived = engine.recompute(&state, 0).await?;
    let ranked = engine.rank_authors(&derived, condition);
    let page = authors_page(&ranked, condition.to_string(), args.top);
    match args.output.format() {
        Format::Json => print_json(&page),
        Format::Table => emit(&table::authors(&page)),
    }
    warn(&derived);
    Ok(())
}

async fn export(global: &GlobalArgs, args: ExportArgs) -> CliResult {
    let state = with_staged(&args.session, read_session(&args.session)?)?;
    if state.has_staged_changes() {
        return Err(litscope_core::Error::StagedChangesPending.into());
    }
    let derived = engine(global)?.recompute(&state, 0).await?;
    let publications: Vec<_> = derived.selected.iter().map(|e| e.publication.clone()).collect();
    let text = export_bibtex(&publications);
    if args.bibtex.as_os_str() == "-" {
        emit(&text);
    } else {
        std::fs::write(&args.bibtex, text).map_err(|e| io_error(&args.bibtex, e))?;
    }
    warn(&derived);
    Ok(())
}

async fn session(global: &GlobalArgs, command: SessionCommand) -> CliResult {
    match command {
        SessionCommand::New { file, keywords, no_boost, force } => {
            if file.exists() && !force {
                return Err(CliError::Data(format!("{} exists; use --force to overwrite", file.display())));
            }
            let mut state = SessionState::default();
            state.set_keywords(keywords.as_deref().unwrap_or(""), !no_boost);
            write_session(&file, &state)?;
            write_staged(&file, &state)
        }
        SessionCommand::Add { file, dois } => {
            let mut state = with_staged(&file, read_session(&file)?)?;
            state.select(parse_dois(&dois)?);
            commit(&file, &state)
        }
        SessionCommand::Keywords { file, spec, no_boost } => {
            let mut state = read_session(&file)?;
            state.set_keywords(&spec, !no_boost);
            write_session(&file, &state)
        }
        SessionCommand::Stage { file, include, exclude, unstage } => {
            let mut state = with_staged(&file, read_session(&file)?)?;
            parse_dois(&include)?.into_iter().for_each(|d| state.stage_include(d));
            parse_dois(&exclude)?.into_iter().for_each(|d| state.stage_exclude(d));
            parse_dois(&unstage)?.iter().for_each(|d| state.unstage(d));
            write_staged(&file, &state)
        }
        SessionCommand::Update { file } => {
            let state = commit_update(with_staged(&file, read_session(&file)?)?);
            commit(&file, &state)
        }
        SessionCommand::Save { file, out } => {
            let state = with_staged(&file, read_session(&file)?)?;
            write_session(&out, &state)
        }
        SessionCommand::Show { file } => {
            let state = with_staged(&file, read_session(&file)?)?;
            let derived = engine(global)?.recompute(&state, METADATA_WINDOW).await?;
            let id = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            print_json(&SessionView::new(&id, 0, &state, &derived));
            Ok(())
        }
    }
}

/// Writes the committed part of `state` and its remaining staged marks.
fn commit(file: &Path, state: &SessionState) -> CliResult {
    let mut committed = state.clone();
    committed.staged_inclusions.clear();
    committed.staged_exclusions.clear();
    write_session(file, &committed)?;
    write_staged(file, state)
}

async fn search(global: &GlobalArgs, args: SearchArgs) -> CliResult {
    let engine = engine(global)?;
    let gateway = engine.gateway();
    let state = SessionState::default();
    let dois = detect_dois(&args.query);
    let mut results = Vec::new();
    if dois.is_empty() {
        for p in gateway.search(&args.query).await? {
            results.push(FoundPublication::new(&p, &state));
        }
    } else {
        for doi in dois {
            match gateway.fetch_metadata(&doi).await {
                Ok(f) if f.flags.metadata_ok => results.push(FoundPublication::new(&f.publication, &state)),
                Ok(_) | Err(GatewayError::NotFound(_)) => eprintln!("warning: {doi} not_found"),
                Err(e) => return Err(e.into()),
            }
        }
    }
    match args.output.format() {
        Format::Json => print_json(&results),
        Format::Table => emit(&table::found(&results)),
    }
    Ok(())
}

fn cache(global: &GlobalArgs, command: CacheCommand) -> CliResult {
    let config = config(global)?;
    if config.cache_dir.is_none() {
        return Err(CliError::Usage("no cache directory configured; pass --cache-dir or set LITSCOPE_CACHE_DIR".into()));
    }
    let cache = config.cache();
    let dir = config.cache_dir.as_deref().unwrap_or(Path::new(""));
    match command {
        CacheCommand::Stats => {
            let stats = cache.stats().map_err(|e| io_error(dir, e))?;
            print_json(&stats);
        }
        CacheCommand::Clear => {
            let removed = cache.clear().map_err(|e| io_error(dir, e))?;
            print_json(&serde_json::json!({ "removed": removed }));
        }
    }
    Ok(())
}

async fn serve(global: &GlobalArgs, args: ServeArgs) -> CliResult {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .with_writer(std::io::stderr)
        .init();
    let mut config = config(global)?;
    if let Some(bind) = args.bind {
        config.bind = bind;
    }
    if let Some(dir) = args.session_dir {
        config.session_dir = Some(dir);
    }
    litscope_service::serve(&config).await.map_err(|e| CliError::Data(e.to_string()))
}
