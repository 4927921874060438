use std::path::PathBuf;

use periodic_tikhonov::experiment::{eval_grid, SweepConfig};
use periodic_tikhonov::selection::{tabulate, SpectralProfile};
use periodic_tikhonov::{
    add_noise_snr, laplace_penalty, make_grid, select_gcv, select_lcurve, select_morozov, select_oracle,
    solve, sweep, Error as CoreError, ErrorProbe, GalleryFunction, MorozovOptions, NoisyRealization,
    PenaltySequence, SelectionReport, Strategy, TrapezoidalGrid,
};
use serde_json::{json, Map, Value};

use crate::args::Command;
use crate::config::{resolve, RunConfig, Source, StrategyChoice};
use crate::error::{CliError, CliResult};
use crate::io::{fmt_f, fmt_opt, read_samples, write_atomic, Table};

/// Files written and a short human-readable summary for stdout.
#[derive(Debug)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

pub fn run(command: &Command) -> CliResult<Outcome> {
    let cfg = resolve(command)?;
    match command {
        Command::Approximate(_) => approximate(&cfg),
        Command::Select(_) => select(&cfg),
        Command::Sweep(_) => run_sweep(&cfg),
    }
}

struct Data {
    grid: TrapezoidalGrid,
    samples: Vec<f64>,
    noise: Option<NoisyRealization>,
    truth: Option<GalleryFunction>,
    penalty: PenaltySequence,
}

impl Data {
    fn noise_norm(&self, cfg: &RunConfig) -> Option<f64> {
        cfg.noise_norm.or(self.noise.as_ref().map(|r| r.eps_wnorm))
    }
}

fn acquire(cfg: &RunConfig) -> CliResult<Data> {
    if cfg.snr_db.len() > 1 {
        return Err(CliError::Config(format!(
            "{} takes a single --snr-db value; use sweep for several",
            cfg.command
        )));
    }
    let (grid, clean, truth) = match &cfg.source {
        Source::Gallery(g) => {
            let grid = make_grid(cfg.n_points.expect("gallery runs always have N"))?;
            let clean = grid.sample(|x| g.eval(x));
            (grid, clean, Some(*g))
        }
        Source::Input(path) => {
            let (grid, y) = read_samples(path)?;
            if let Some(n) = cfg.n_points.filter(|&n| n != grid.len()) {
                return Err(CliError::Config(format!(
                    "--n {n} disagrees with the {} samples in {}",
                    grid.len(),
                    path.display()
                )));
            }
            (grid, y, None)
        }
    };
    let noise = match cfg.snr_db.first() {
        Some(&snr) => Some(add_noise_snr(&clean, snr, cfg.seed)?),
        None => None,
    };
    let samples = noise.as_ref().map_or(clean, |r| r.noisy.clone());
    let penalty = laplace_penalty(grid.max_degree(), cfg.exponent)?;
    Ok(Data { grid, samples, noise, truth, penalty })
}

fn source_name(cfg: &RunConfig) -> String {
    match &cfg.source {
        Source::Gallery(g) => format!("gallery={g}"),
        Source::Input(p) => format!("input={}", p.display()),
    }
}

fn metadata(cfg: &RunConfig, n: usize) -> Vec<String> {
    let mut meta = vec![
        format!("ptik {} {}", env!("CARGO_PKG_VERSION"), cfg.command),
        source_name(cfg),
        format!("N={n} L={} s={} seed={}", (n - 1) / 2, fmt_f(cfg.exponent), cfg.seed),
        format!(
            "zeta0={} q={} T={}",
            fmt_f(cfg.grid.zeta0()),
            fmt_f(cfg.grid.q()),
            cfg.grid.t_max()
        ),
    ];
    if !cfg.snr_db.is_empty() {
        let levels: Vec<String> = cfg.snr_db.iter().map(|v| fmt_f(*v)).collect();
        meta.push(format!("snr_db={}", levels.join(",")));
    }
    if let Some(e) = cfg.noise_norm {
        meta.push(format!("noise_norm={}", fmt_f(e)));
    }
    meta
}

fn write_json(path: PathBuf, value: &Value) -> CliResult<PathBuf> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("JSON values always serialize");
    bytes.push(b'\n');
    write_atomic(&path, &bytes)?;
    Ok(path)
}

fn write_inputs(cfg: &RunConfig, data: &Data, meta: &[String], files: &mut Vec<PathBuf>) -> CliResult<()> {
    let mut samples = Table::new(meta, &["x", "y"]);
    for (x, y) in data.grid.nodes().iter().zip(&data.samples) {
        samples.push(vec![fmt_f(*x), fmt_f(*y)]);
    }
    files.push(samples.write(&cfg.output_dir.join("samples.csv"))?);
    if let Some(r) = &data.noise {
        let mut noise = Table::new(meta, &["x", "clean", "raw_noise", "epsilon"]);
        for (j, x) in data.grid.nodes().iter().enumerate() {
            noise.push(vec![fmt_f(*x), fmt_f(r.clean[j]), fmt_f(r.raw_noise[j]), fmt_f(r.epsilon[j])]);
        }
        files.push(noise.write(&cfg.output_dir.join("noise.csv"))?);
    }
    Ok(())
}

fn check_preconditions(cfg: &RunConfig, data: &Data) -> CliResult<()> {
    if cfg.all_strategies {
        return Ok(());
    }
    for s in &cfg.strategies {
        match s {
            StrategyChoice::Select(Strategy::Morozov) if data.noise_norm(cfg).is_none() => {
                return Err(no_noise_level())
            }
            StrategyChoice::Select(Strategy::Oracle) if data.truth.is_none() => return Err(no_truth()),
            _ => {}
        }
    }
    Ok(())
}

fn no_noise_level() -> CliError {
    CoreError::StrategyInapplicable(
        "the discrepancy principle needs the noise level: pass --noise-norm or add noise with --snr-db".into(),
    )
    .into()
}

fn no_truth() -> CliError {
    CoreError::StrategyInapplicable("the oracle needs the true function: use --gallery".into()).into()
}

fn run_strategy(
    strategy: Strategy,
    cfg: &RunConfig,
    data: &Data,
    probe: Option<&ErrorProbe>,
) -> CliResult<SelectionReport> {
    let (f, g, p, s) = (&data.samples, &data.grid, &data.penalty, &cfg.grid);
    let report = match strategy {
        Strategy::Morozov => {
            let e = data.noise_norm(cfg).ok_or_else(no_noise_level)?;
            select_morozov(f, g, p, s, e, MorozovOptions { refine: cfg.refine })?
        }
        Strategy::Lcurve => select_lcurve(f, g, p, s)?,
        Strategy::Gcv => select_gcv(f, g, p, s)?,
        Strategy::Oracle => select_oracle(f, g, p, s, probe.ok_or_else(no_truth)?)?,
    };
    if report.chosen_lambda.is_none() {
        return Err(CoreError::AssumptionViolated(format!(
            "noise norm {} lies outside [||L_L f - f||, ||f - mean||] for these samples",
            fmt_opt(report.noise_norm_used)
        ))
        .into());
    }
    Ok(report)
}

fn oracle_probe(cfg: &RunConfig, data: &Data) -> CliResult<Option<ErrorProbe>> {
    let wants = cfg.strategies.contains(&StrategyChoice::Select(Strategy::Oracle));
    match (wants, data.truth) {
        (true, Some(g)) => Ok(Some(ErrorProbe::new(|x| g.eval(x), data.grid.max_degree(), cfg.eval_points)?)),
        _ => Ok(None),
    }
}

fn report_json(r: &SelectionReport) -> Value {
    json!({
        "lambda": r.chosen_lambda,
        "index": r.chosen_index,
        "refined": r.refined,
        "at_grid_floor": r.at_grid_floor,
        "assumption_ok": r.assumption_ok,
        "noise_norm_used": r.noise_norm_used,
        "sigma_mean": r.sigma_mean,
    })
}

fn error_json(e: &CliError) -> Value {
    json!({ "error": e.to_string(), "category": e.category() })
}

fn config_json(cfg: &RunConfig, n: usize) -> Value {
    json!({
        "tool": "ptik",
        "version": env!("CARGO_PKG_VERSION"),
        "command": cfg.command,
        "source": source_name(cfg),
        "n_points": n,
        "degree": (n - 1) / 2,
        "exponent": cfg.exponent,
        "seed": cfg.seed,
        "snr_db": cfg.snr_db,
        "grid": { "zeta0": cfg.grid.zeta0(), "q": cfg.grid.q(), "t_max": cfg.grid.t_max() },
        "eval_points": cfg.eval_points,
    })
}

fn noise_json(r: &NoisyRealization) -> Value {
    json!({
        "snr_db": r.snr_db,
        "alpha_scale": r.alpha_scale,
        "eps_sup": r.eps_sup,
        "eps_wnorm": r.eps_wnorm,
    })
}

fn approximate(cfg: &RunConfig) -> CliResult<Outcome> {
    let data = acquire(cfg)?;
    check_preconditions(cfg, &data)?;
    let n = data.grid.len();
    let meta = metadata(cfg, n);
    let choice = cfg.strategies[0];
    let probe = oracle_probe(cfg, &data)?;
    let (lambda, report) = match choice {
        StrategyChoice::Manual => (cfg.lambda.expect("manual strategy has a lambda"), None),
        StrategyChoice::Select(s) => {
            let r = run_strategy(s, cfg, &data, probe.as_ref())?;
            (r.chosen_lambda.expect("run_strategy returns a choice"), Some(r))
        }
    };
    let approx = solve(&data.samples, &data.grid, lambda, &data.penalty)?;
    let profile = SpectralProfile::new(&data.samples, &data.grid, &data.penalty)?;
    let node_residual = approx
        .evaluate(data.grid.nodes())
        .iter()
        .zip(&data.samples)
        .fold(0.0f64, |m, (p, y)| m.max((p - y).abs()));

    let mut files = Vec::new();
    write_inputs(cfg, &data, &meta, &mut files)?;

    let mut coeffs = Table::new(&meta, &["ell", "k", "alpha", "source_coeff"]);
    for ((idx, a), c) in approx.alpha().iter().zip(approx.source().values()) {
        coeffs.push(vec![idx.ell().to_string(), idx.k().to_string(), fmt_f(a), fmt_f(*c)]);
    }
    files.push(coeffs.write(&cfg.output_dir.join("coefficients.csv"))?);

    let xs = eval_grid(cfg.eval_points);
    let p = approx.evaluate(&xs);
    let mut header = vec!["x", "p"];
    if data.truth.is_some() {
        header.push("f");
    }
    let mut eval = Table::new(&meta, &header);
    let (mut sq, mut sup) = (0.0, 0.0f64);
    for (x, px) in xs.iter().zip(&p) {
        let mut row = vec![fmt_f(*x), fmt_f(*px)];
        if let Some(g) = data.truth {
            let fx = g.eval(*x);
            sq += (px - fx).powi(2);
            sup = sup.max((px - fx).abs());
            row.push(fmt_f(fx));
        }
        eval.push(row);
    }
    files.push(eval.write(&cfg.output_dir.join("evaluation.csv"))?);
    let errors = data.truth.map(|_| ((std::f64::consts::TAU / xs.len() as f64 * sq).sqrt(), sup));

    let summary = json!({
        "config": config_json(cfg, n),
        "strategy": choice.name(),
        "lambda": lambda,
        "selection": report.as_ref().map(report_json),
        "J": profile.j(lambda),
        "K": profile.k(lambda),
        "max_node_residual": node_residual,
        "noise": data.noise.as_ref().map(noise_json),
        "l2_error": errors.map(|e| e.0),
        "uniform_error": errors.map(|e| e.1),
    });
    files.push(write_json(cfg.output_dir.join("summary.json"), &summary)?);

    let mut line = format!(
        "approximate: strategy={} lambda={} J={} K={} max_node_residual={}",
        choice.name(),
        fmt_f(lambda),
        fmt_f(profile.j(lambda)),
        fmt_f(profile.k(lambda)),
        fmt_f(node_residual)
    );
    if let Some((l2, u)) = errors {
        line.push_str(&format!(" l2_error={} uniform_error={}", fmt_f(l2), fmt_f(u)));
    }
    line.push_str(&format!(" -> {}", cfg.output_dir.display()));
    Ok(Outcome { files, summary: line })
}

/// Chosen lambda, with the full report unless it was given manually.
type Choice = (f64, Option<SelectionReport>);

fn select(cfg: &RunConfig) -> CliResult<Outcome> {
    let data = acquire(cfg)?;
    check_preconditions(cfg, &data)?;
    let n = data.grid.len();
    let meta = metadata(cfg, n);
    let probe = oracle_probe(cfg, &data)?;
    let rows = tabulate(&data.samples, &data.grid, &data.penalty, &cfg.grid, data.noise_norm(cfg))?;

    let mut results: Vec<(StrategyChoice, CliResult<Choice>)> = Vec::new();
    for &choice in &cfg.strategies {
        let r = match choice {
            StrategyChoice::Manual => Ok((cfg.lambda.expect("manual strategy has a lambda"), None)),
            StrategyChoice::Select(s) => run_strategy(s, cfg, &data, probe.as_ref())
                .map(|r| (r.chosen_lambda.expect("run_strategy returns a choice"), Some(r))),
        };
        results.push((choice, r));
    }

    let oracle_errors: Option<Vec<Option<f64>>> = results.iter().find_map(|(_, r)| match r {
        Ok((_, Some(rep))) if rep.strategy == Strategy::Oracle => {
            Some(rep.per_lambda.iter().map(|d| d.l2_error).collect())
        }
        _ => None,
    });
    let mut header = vec!["lambda", "J", "K", "kappa", "V", "F"];
    if oracle_errors.is_some() {
        header.push("l2_error");
    }
    let mut table = Table::new(&meta, &header);
    for (i, d) in rows.iter().enumerate() {
        let mut row = vec![fmt_f(d.lambda), fmt_f(d.j), fmt_f(d.k), fmt_opt(d.kappa), fmt_opt(d.v), fmt_opt(d.f)];
        if let Some(e) = &oracle_errors {
            row.push(fmt_opt(e[i]));
        }
        table.push(row);
    }

    let mut files = Vec::new();
    write_inputs(cfg, &data, &meta, &mut files)?;
    files.push(table.write(&cfg.output_dir.join("diagnostics.csv"))?);

    let mut chosen = Map::new();
    let mut lines = vec![format!(
        "select: {} candidates, diagnostics -> {}",
        table.len(),
        cfg.output_dir.join("diagnostics.csv").display()
    )];
    for (choice, r) in &results {
        let entry = match r {
            Ok((lambda, rep)) => {
                lines.push(format!("  {:<8} lambda={}", choice.name(), fmt_f(*lambda)));
                rep.as_ref().map(report_json).unwrap_or_else(|| json!({ "lambda": lambda }))
            }
            Err(e) => {
                lines.push(format!("  {:<8} failed: {e}", choice.name()));
                error_json(e)
            }
        };
        chosen.insert(choice.name().to_string(), entry);
    }
    let summary = json!({
        "config": config_json(cfg, n),
        "noise": data.noise.as_ref().map(noise_json),
        "noise_norm": data.noise_norm(cfg),
        "strategies": Value::Object(chosen),
    });
    files.push(write_json(cfg.output_dir.join("chosen.json"), &summary)?);

    if !cfg.all_strategies {
        if let Some(Err(e)) = results.into_iter().map(|(_, r)| r).find(Result::is_err) {
            return Err(e);
        }
    }
    Ok(Outcome { files, summary: lines.join("\n") })
}

const REPORT_ORDER: [(Strategy, &str); 4] = [
    (Strategy::Oracle, "opt"),
    (Strategy::Lcurve, "corner"),
    (Strategy::Morozov, "mor"),
    (Strategy::Gcv, "gcv"),
];

fn run_sweep(cfg: &RunConfig) -> CliResult<Outcome> {
    let Source::Gallery(function) = cfg.source else {
        return Err(CliError::Config(
            "sweep needs --gallery: errors are measured against the true function".into(),
        ));
    };
    if cfg.snr_db.is_empty() {
        return Err(CliError::Config("sweep needs at least one --snr-db level".into()));
    }
    let n = cfg.n_points.expect("gallery runs always have N");
    let mut sc = SweepConfig::new(function, n);
    sc.exponent = cfg.exponent;
    sc.snr_levels = cfg.snr_db.clone();
    sc.strategies = cfg
        .strategies
        .iter()
        .filter_map(|s| match s {
            StrategyChoice::Select(s) => Some(*s),
            StrategyChoice::Manual => None,
        })
        .collect();
    sc.seed = cfg.seed;
    sc.grid = cfg.grid.clone();
    sc.eval_points = cfg.eval_points;
    sc.morozov = MorozovOptions { refine: cfg.refine };
    sc.emit_curves = cfg.emit_curves;
    let report = sweep(&sc)?;

    let meta = metadata(cfg, n);
    let mut header = vec!["snr_db".to_string()];
    header.extend(REPORT_ORDER.iter().map(|(_, t)| format!("lambda_{t}")));
    header.extend(REPORT_ORDER.iter().map(|(_, t)| format!("l2_{t}")));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut table = Table::new(&meta, &header_refs);
    let mut noise = Table::new(&meta, &["row", "snr_db", "x", "raw_noise", "epsilon"]);
    let grid = make_grid(n)?;
    let mut files = Vec::new();
    let mut lines = vec![format!("sweep: {} levels, {} -> {}", report.rows.len(), function, cfg.output_dir.display())];
    let mut rows_json = Vec::new();
    for (i, row) in report.rows.iter().enumerate() {
        let mut cells = vec![fmt_f(row.snr_db)];
        cells.extend(REPORT_ORDER.iter().map(|(s, _)| fmt_opt(row.lambda(*s))));
        cells.extend(REPORT_ORDER.iter().map(|(s, _)| fmt_opt(row.l2_error(*s))));
        lines.push(format!("  {}", cells.join(" ")));
        table.push(cells);
        for (j, x) in grid.nodes().iter().enumerate() {
            noise.push(vec![
                (i + 1).to_string(),
                fmt_f(row.snr_db),
                fmt_f(*x),
                fmt_f(row.noise.raw_noise[j]),
                fmt_f(row.noise.epsilon[j]),
            ]);
        }
        if let Some(curve) = &row.curves {
            let mut m = meta.clone();
            m.push(format!("row={} snr_db={}", i + 1, fmt_f(row.snr_db)));
            let mut t = Table::new(&m, &["lambda", "l2_error", "uniform_error"]);
            for c in curve {
                t.push(vec![fmt_f(c.lambda), fmt_f(c.l2_error), fmt_f(c.uniform_error)]);
            }
            files.push(t.write(&cfg.output_dir.join(format!("curve_{:02}.csv", i + 1)))?);
        }
        rows_json.push(json!({
            "snr_db": row.snr_db,
            "noise": noise_json(&row.noise),
            "l2_at_smallest": row.l2_at_smallest,
            "uniform_at_smallest": row.uniform_at_smallest,
            "outcomes": row.outcomes,
        }));
    }
    files.push(table.write(&cfg.output_dir.join("report.csv"))?);
    files.push(noise.write(&cfg.output_dir.join("noise.csv"))?);
    let summary = json!({ "config": config_json(cfg, n), "rows": rows_json });
    files.push(write_json(cfg.output_dir.join("summary.json"), &summary)?);
    Ok(Outcome { files, summary: lines.join("\n") })
}
