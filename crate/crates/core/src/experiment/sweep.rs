use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{add_noise_snr_stream, ErrorProbe, GalleryFunction, NoisyRealization, DEFAULT_EVAL_POINTS};
use crate::error::{Error, Result};
use crate::grid_basis::{make_grid, TrapezoidalGrid};
use crate::penalty::{laplace_penalty, PenaltySequence, DEFAULT_EXPONENT};
use crate::selection::{
    select_gcv, select_lcurve, select_morozov, select_oracle, MorozovOptions, ParameterGrid,
    SelectionReport, Strategy,
};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub function: GalleryFunction,
    /// Odd node count `N`; the degree is always `L = (N - 1) / 2`.
    pub n_points: usize,
    pub exponent: f64,
    pub snr_levels: Vec<f64>,
    pub strategies: Vec<Strategy>,
    pub seed: u64,
    pub grid: ParameterGrid,
    pub eval_points: usize,
    pub morozov: MorozovOptions,
    /// Record `L2` and uniform errors at every candidate `lambda`.
    pub emit_curves: bool,
}

impl SweepConfig {
    pub fn new(function: GalleryFunction, n_points: usize) -> Self {
        Self {
            function,
            n_points,
            exponent: DEFAULT_EXPONENT,
            snr_levels: Vec::new(),
            strategies: Strategy::ALL.to_vec(),
            seed: 0,
            grid: ParameterGrid::default(),
            eval_points: DEFAULT_EVAL_POINTS,
            morozov: MorozovOptions::default(),
            emit_curves: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub function: GalleryFunction,
    pub n_points: usize,
    pub degree: usize,
    pub exponent: f64,
    pub zeta0: f64,
    pub q: f64,
    pub t_max: usize,
    pub seed: u64,
    pub eval_points: usize,
}

/// Result of one strategy at one noise level; `error` is set instead of `lambda` on failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyOutcome {
    pub lambda: Option<f64>,
    pub index: Option<usize>,
    pub l2_error: Option<f64>,
    pub uniform_error: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub lambda: f64,
    pub l2_error: f64,
    pub uniform_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub snr_db: f64,
    pub noise: NoisyRealization,
    pub outcomes: BTreeMap<Strategy, StrategyOutcome>,
    /// Errors at `lambda_T`, the least-regularized candidate.
    pub l2_at_smallest: f64,
    pub uniform_at_smallest: f64,
    pub curves: Option<Vec<CurvePoint>>,
    #[serde(skip)]
    pub reports: BTreeMap<Strategy, SelectionReport>,
}

impl SweepRow {
    pub fn lambda(&self, s: Strategy) -> Option<f64> {
        self.outcomes.get(&s).and_then(|o| o.lambda)
    }

    pub fn l2_error(&self, s: Strategy) -> Option<f64> {
        self.outcomes.get(&s).and_then(|o| o.l2_error)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub metadata: SweepMetadata,
    pub rows: Vec<SweepRow>,
}

struct Setup<'a> {
    config: &'a SweepConfig,
    grid: TrapezoidalGrid,
    penalty: PenaltySequence,
    probe: ErrorProbe,
    clean: Vec<f64>,
}

/// One noisy realization per level (generator stream = row index), every
/// requested strategy on it, and errors at each choice. Rows run in parallel;
/// the report equals a sequential run.
pub fn sweep(config: &SweepConfig) -> Result<SweepReport> {
    let grid = make_grid(config.n_points)?;
    let degree = grid.max_degree();
    let penalty = laplace_penalty(degree, config.exponent)?;
    let function = config.function;
    let probe = ErrorProbe::new(|x| function.eval(x), degree, config.eval_points)?;
    let clean = grid.sample(|x| function.eval(x));
    let setup = Setup { config, grid, penalty, probe, clean };
    let rows = config
        .snr_levels
        .par_iter()
        .enumerate()
        .map(|(i, &snr)| run_row(&setup, i as u64, snr))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport {
        metadata: SweepMetadata {
            function,
            n_points: config.n_points,
            degree,
            exponent: config.exponent,
            zeta0: config.grid.zeta0(),
            q: config.grid.q(),
            t_max: config.grid.t_max(),
            seed: config.seed,
            eval_points: config.eval_points,
        },
        rows,
    })
}

fn shrunk(coeffs: &[f64], penalty: &PenaltySequence, lambda: f64) -> Vec<f64> {
    coeffs.iter().zip(penalty.shrinkage(lambda)).map(|(c, s)| c * s).collect()
}

fn run_row(setup: &Setup<'_>, stream: u64, snr_db: f64) -> Result<SweepRow> {
    let Setup { config, grid, penalty, probe, clean } = setup;
    let noise = add_noise_snr_stream(clean, snr_db, config.seed, stream)?;
    let samples = &noise.noisy;
    let coeffs = crate::grid_basis::analyze(samples, grid, penalty.degree())?;
    let s = &config.grid;

    let mut outcomes = BTreeMap::new();
    let mut reports = BTreeMap::new();
    for &strategy in &config.strategies {
        let result = match strategy {
            Strategy::Morozov => select_morozov(samples, grid, penalty, s, noise.eps_wnorm, config.morozov),
            Strategy::Lcurve => select_lcurve(samples, grid, penalty, s),
            Strategy::Gcv => select_gcv(samples, grid, penalty, s),
            Strategy::Oracle => select_oracle(samples, grid, penalty, s, probe),
        };
        let outcome = match &result {
            Ok(report) => match report.chosen_lambda {
                Some(lambda) => {
                    let (l2, sup) = probe.errors(&shrunk(coeffs.values(), penalty, lambda))?;
                    StrategyOutcome {
                        lambda: Some(lambda),
                        index: report.chosen_index,
                        l2_error: Some(l2),
                        uniform_error: Some(sup),
                        error: None,
                    }
                }
                None => failed(Error::AssumptionViolated(
                    "noise norm outside [||L_L f - f||, ||f - mean||]".into(),
                )),
            },
            Err(e) => failed(e.clone()),
        };
        outcomes.insert(strategy, outcome);
        if let Ok(r) = result {
            reports.insert(strategy, r);
        }
    }

    let (l2_at_smallest, uniform_at_smallest) = probe.errors(&shrunk(coeffs.values(), penalty, s.smallest()))?;
    let curves = if config.emit_curves {
        let alphas: Vec<Vec<f64>> = s.lambdas().iter().map(|&l| shrunk(coeffs.values(), penalty, l)).collect();
        let errs = probe.errors_many(&alphas)?;
        Some(
            s.lambdas()
                .iter()
                .zip(errs)
                .map(|(&lambda, (l2, sup))| CurvePoint { lambda, l2_error: l2, uniform_error: sup })
                .collect(),
        )
    } else {
        None
    };

    Ok(SweepRow {
        snr_db,
        noise,
        outcomes,
        l2_at_smallest,
        uniform_at_smallest,
        curves,
        reports,
    })
}

fn failed(e: Error) -> StrategyOutcome {
    StrategyOutcome {
        lambda: None,
        index: None,
        l2_error: None,
        uniform_error: None,
        error: Some(e.to_string()),
    }
}
