use std::path::{Path, PathBuf};

use periodic_tikhonov::experiment::DEFAULT_EVAL_POINTS;
use periodic_tikhonov::penalty::DEFAULT_EXPONENT;
use periodic_tikhonov::selection::{DEFAULT_Q, DEFAULT_T_MAX, DEFAULT_ZETA0};
use periodic_tikhonov::{gallery, parameter_grid, GalleryFunction, ParameterGrid, Strategy};
use serde::Deserialize;

use crate::args::{Command, RunArgs};
use crate::error::{CliError, CliResult};

pub const DEFAULT_N: usize = 501;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    gallery: Option<String>,
    input: Option<PathBuf>,
    n: Option<usize>,
    s: Option<f64>,
    strategy: Option<OneOrMany<String>>,
    lambda: Option<f64>,
    snr_db: Option<SnrSpec>,
    seed: Option<u64>,
    zeta0: Option<f64>,
    q: Option<f64>,
    t_max: Option<usize>,
    eval_points: Option<usize>,
    noise_norm: Option<f64>,
    output_dir: Option<PathBuf>,
    emit_curves: Option<bool>,
    refine: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SnrSpec {
    Value(f64),
    List(Vec<f64>),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Gallery(GalleryFunction),
    Input(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyChoice {
    Select(Strategy),
    Manual,
}

impl StrategyChoice {
    pub fn name(self) -> &'static str {
        match self {
            StrategyChoice::Select(s) => s.name(),
            StrategyChoice::Manual => "manual",
        }
    }
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: &'static str,
    pub source: Source,
    /// `None` for file input until the file is read.
    pub n_points: Option<usize>,
    pub exponent: f64,
    pub strategies: Vec<StrategyChoice>,
    /// `--strategy all`: individual strategy failures are recorded instead of aborting.
    pub all_strategies: bool,
    pub lambda: Option<f64>,
    pub snr_db: Vec<f64>,
    pub seed: u64,
    pub grid: ParameterGrid,
    pub eval_points: usize,
    pub noise_norm: Option<f64>,
    pub output_dir: PathBuf,
    pub emit_curves: bool,
    pub refine: bool,
}

fn load_file(path: &Path) -> CliResult<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    toml::from_str(&text).map_err(|e| {
        let line = e.span().map(|s| text[..s.start].matches('\n').count() + 1);
        let at = line.map(|l| format!(" line {l}:")).unwrap_or_default();
        CliError::Config(format!("{}:{at} {}", path.display(), e.message()))
    })
}

/// Merges flags over the config file over defaults, and validates the result.
pub fn resolve(command: &Command) -> CliResult<RunConfig> {
    let args: &RunArgs = command.args();
    let (file, base) = match &args.config {
        Some(p) => (load_file(p)?, p.parent().map(Path::to_path_buf).unwrap_or_default()),
        None => (FileConfig::default(), PathBuf::new()),
    };
    let relative = |p: PathBuf| if p.is_relative() { base.join(p) } else { p };

    let source = match (&args.gallery, &args.input) {
        (Some(g), _) => Source::Gallery(gallery(g)?),
        (None, Some(p)) => Source::Input(p.clone()),
        (None, None) => match (file.gallery, file.input) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config("config sets both gallery and input; choose one".into()))
            }
            (Some(g), None) => Source::Gallery(gallery(&g)?),
            (None, Some(p)) => Source::Input(relative(p)),
            (None, None) => return Err(CliError::Config("no data: pass --gallery NAME or --input FILE".into())),
        },
    };

    let n_points = args.n.or(file.n);
    if let Some(n) = n_points {
        check_n(n)?;
    }
    let n_points = match source {
        Source::Gallery(_) => Some(n_points.unwrap_or(DEFAULT_N)),
        Source::Input(_) => n_points,
    };

    let lambda = args.lambda.or(file.lambda);
    let strategy_text: Option<Vec<String>> = match (&args.strategy, file.strategy) {
        (Some(s), _) => Some(s.split(',').map(|t| t.trim().to_string()).collect()),
        (None, Some(OneOrMany::One(s))) => Some(s.split(',').map(|t| t.trim().to_string()).collect()),
        (None, Some(OneOrMany::Many(v))) => Some(v),
        (None, None) => None,
    };
    let (strategies, all_strategies) = parse_strategies(strategy_text, lambda, command)?;

    let snr_db = match (&args.snr_db, file.snr_db) {
        (Some(t), _) => parse_snr(t)?,
        (None, Some(SnrSpec::Value(v))) => vec![v],
        (None, Some(SnrSpec::List(v))) => v,
        (None, Some(SnrSpec::Text(t))) => parse_snr(&t)?,
        (None, None) => Vec::new(),
    };
    if snr_db.iter().any(|v| v.is_nan()) {
        return Err(CliError::Config("snr-db values must be numbers".into()));
    }

    let grid = parameter_grid(
        args.zeta0.or(file.zeta0).unwrap_or(DEFAULT_ZETA0),
        args.q.or(file.q).unwrap_or(DEFAULT_Q),
        args.t_max.or(file.t_max).unwrap_or(DEFAULT_T_MAX),
    )?;

    Ok(RunConfig {
        command: command.name(),
        source,
        n_points,
        exponent: args.s.or(file.s).unwrap_or(DEFAULT_EXPONENT),
        strategies,
        all_strategies,
        lambda,
        snr_db,
        seed: args.seed.or(file.seed).unwrap_or(0),
        grid,
        eval_points: args.eval_points.or(file.eval_points).unwrap_or(DEFAULT_EVAL_POINTS),
        noise_norm: args.noise_norm.or(file.noise_norm),
        output_dir: args
            .output_dir
            .clone()
            .or(file.output_dir.map(relative))
            .unwrap_or_else(|| PathBuf::from("out")),
        emit_curves: args.emit_curves || file.emit_curves.unwrap_or(false),
        refine: args.refine || file.refine.unwrap_or(false),
    })
}

pub fn check_n(n: usize) -> CliResult<()> {
    if n < 3 || n % 2 == 0 {
        return Err(CliError::Config(format!("N must be odd and >= 3, got {n}")));
    }
    Ok(())
}

fn parse_strategies(
    text: Option<Vec<String>>,
    lambda: Option<f64>,
    command: &Command,
) -> CliResult<(Vec<StrategyChoice>, bool)> {
    let all: Vec<StrategyChoice> = Strategy::ALL.into_iter().map(StrategyChoice::Select).collect();
    let Some(names) = text else {
        return Ok(match command {
            Command::Approximate(_) if lambda.is_some() => (vec![StrategyChoice::Manual], false),
            Command::Approximate(_) => (vec![StrategyChoice::Select(Strategy::Gcv)], false),
            _ => (all, true),
        });
    };
    let mut out = Vec::new();
    let mut is_all = false;
    for name in names.iter().filter(|n| !n.is_empty()) {
        match name.to_ascii_lowercase().as_str() {
            "all" => {
                is_all = true;
                out.extend(all.iter().copied());
            }
            "manual" => out.push(StrategyChoice::Manual),
            other => out.push(StrategyChoice::Select(other.parse()?)),
        }
    }
    let mut seen = Vec::new();
    out.retain(|s| {
        let fresh = !seen.contains(s);
        seen.push(*s);
        fresh
    });
    if out.is_empty() {
        return Err(CliError::Config("empty --strategy".into()));
    }
    if out.contains(&StrategyChoice::Manual) && lambda.is_none() {
        return Err(CliError::Config("manual strategy needs --lambda".into()));
    }
    if matches!(command, Command::Approximate(_)) && out.len() > 1 {
        return Err(CliError::Config("approximate takes a single strategy".into()));
    }
    if matches!(command, Command::Sweep(_)) && out.contains(&StrategyChoice::Manual) {
        return Err(CliError::Config("sweep runs the selection strategies only; drop manual".into()));
    }
    Ok((out, is_all))
}

/// `"20"`, `"10,20,40"` or `"10:80:10"` (inclusive).
pub fn parse_snr(text: &str) -> CliResult<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(CliError::Config("empty --snr-db".into()));
    }
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Config(format!("bad snr-db value '{t}'")))
    };
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [a, b, step] = parts[..] else {
            return Err(CliError::Config(format!("snr-db range must be start:stop:step, got '{text}'")));
        };
        let (a, b, step) = (num(a)?, num(b)?, num(step)?);
        if !(step > 0.0 && a.is_finite() && b.is_finite()) || b < a {
            return Err(CliError::Config(format!("bad snr-db range '{text}'")));
        }
        let count = ((b - a) / step + 1e-9).floor() as usize + 1;
        return Ok((0..count).map(|i| a + step * i as f64).collect());
    }
    text.split(',').map(num).collect()
}
