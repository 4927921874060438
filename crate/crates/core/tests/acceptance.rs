//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::f64::consts::TAU;
use std::process::ExitCode;
use std::time::Instant;

use periodic_tikhonov::experiment::{eval_grid, GalleryFunction, SweepConfig};
use periodic_tikhonov::grid_basis::{analyze, discrete_inner, dimension, eval_harmonic, BasisTable, HarmonicIndex};
use periodic_tikhonov::selection::{
    gcv_bounds, gcv_value, parameter_grid, select_morozov, tabulate, MorozovOptions, ParameterGrid,
    SpectralProfile, Strategy,
};
use periodic_tikhonov::{
    add_noise_snr, condition_number, constant_penalty, evaluate_barycentric, laplace_penalty, make_grid,
    solve, sweep, uniform_error,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 7;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn sup(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn f1(x: f64) -> f64 {
    GalleryFunction::F1.eval(x)
}

fn gram_identity() -> Outcome {
    let start = Instant::now();
    let g = make_grid(501).unwrap();
    let d = dimension(250);
    let table = BasisTable::new(g.nodes(), 250);
    let cols: Vec<Vec<f64>> = (0..d).map(|i| (0..g.len()).map(|j| table.row(j)[i]).collect()).collect();
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in i..d {
            let ip = discrete_inner(&cols[i], &cols[j], &g).unwrap();
            let delta = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((ip - delta).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(worst <= 1e-12 && secs < 5.0, format!("max deviation {worst:.3e}, {secs:.2} s"))
}

fn interpolation() -> Outcome {
    let g = make_grid(101).unwrap();
    let clean = g.sample(|x| GalleryFunction::F2.eval(x));
    let noisy = add_noise_snr(&clean, 20.0, SEED).unwrap().noisy;
    let a = solve(&noisy, &g, 0.0, &laplace_penalty(50, 1.0).unwrap()).unwrap();
    let resid = sup(a.evaluate(g.nodes()).iter().zip(&noisy).map(|(p, f)| p - f));
    let bound = 1e-8 * sup(noisy.iter().copied());
    outcome(resid <= bound, format!("node residual {resid:.3e} vs bound {bound:.3e}"))
}

fn barycentric() -> Outcome {
    let (lambda, tau) = (0.1, 2.0f64);
    let g = make_grid(101).unwrap();
    let f = g.sample(f1);
    let direct = solve(&f, &g, lambda, &constant_penalty(50, tau.sqrt()).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let pts: Vec<f64> = (0..1000).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
    let bary = evaluate_barycentric(&f, &g, lambda, tau, &pts).unwrap();
    let dir = direct.evaluate(&pts);
    let rel = bary.iter().zip(&dir).map(|(b, d)| (b - d).abs() / d.abs()).fold(0.0, f64::max);
    let at_nodes = evaluate_barycentric(&f, &g, lambda, tau, g.nodes()).unwrap();
    let node_dev = sup(at_nodes.iter().zip(&f).map(|(v, fj)| v - fj / (1.0 + lambda * tau)));
    outcome(
        rel <= 1e-8 && node_dev <= 1e-12,
        format!("max relative deviation {rel:.3e}, node limit deviation {node_dev:.3e}"),
    )
}

fn spectral_accuracy() -> Outcome {
    let g = make_grid(31).unwrap();
    let a = solve(&g.sample(f1), &g, 0.0, &laplace_penalty(15, 1.0).unwrap()).unwrap();
    let err = uniform_error(a.polynomial(), f1, 10_000).unwrap();
    outcome(err <= 1e-9, format!("uniform error {err:.3e}"))
}

fn noisy_f1(n: usize, snr: f64) -> (periodic_tikhonov::TrapezoidalGrid, periodic_tikhonov::NoisyRealization) {
    let g = make_grid(n).unwrap();
    let r = add_noise_snr(&g.sample(f1), snr, SEED).unwrap();
    (g, r)
}

fn monotonicity() -> Outcome {
    let (g, r) = noisy_f1(501, 20.0);
    let prof = SpectralProfile::new(&r.noisy, &g, &laplace_penalty(250, 1.0).unwrap()).unwrap();
    let s = ParameterGrid::default();
    let js: Vec<f64> = s.lambdas().iter().map(|&l| prof.j(l)).collect();
    let ks: Vec<f64> = s.lambdas().iter().map(|&l| prof.k(l)).collect();
    // the grid is decreasing in lambda
    let j_mono = js.windows(2).all(|w| w[1] < w[0]);
    let k_mono = ks.windows(2).all(|w| w[1] > w[0]);
    let (mut fd_worst, mut id_worst) = (0.0f64, 0.0f64);
    for i in 0..50 {
        let lambda = 10f64.powf(-6.0 + 6.0 * i as f64 / 49.0);
        let h = 1e-4 * lambda;
        let fd = (prof.j(lambda + h) - prof.j(lambda - h)) / (2.0 * h);
        let jp = prof.j_prime(lambda);
        fd_worst = fd_worst.max((fd - jp).abs() / jp);
        id_worst = id_worst.max((-lambda * prof.k_prime(lambda) - jp).abs() / jp);
    }
    outcome(
        j_mono && k_mono && fd_worst <= 1e-6 && id_worst <= 1e-12,
        format!(
            "J increasing {j_mono}, K decreasing {k_mono}, J' vs difference {fd_worst:.3e}, rho' identity {id_worst:.3e}"
        ),
    )
}

fn morozov() -> Outcome {
    let g5 = make_grid(5).unwrap();
    let p5 = laplace_penalty(2, 1.0).unwrap();
    let s10 = parameter_grid(10.0, 2f64.powf(-0.1), 400).unwrap();
    let noise = (std::f64::consts::PI / 4.0).sqrt();
    let r = select_morozov(&g5.sample(f64::cos), &g5, &p5, &s10, noise, MorozovOptions { refine: true }).unwrap();
    let root_err = (r.chosen_lambda.unwrap_or(f64::NAN) - 1.0).abs();

    let s = ParameterGrid::default();
    let p = laplace_penalty(250, 1.0).unwrap();
    let (g, n20) = noisy_f1(501, 20.0);
    let rep = select_morozov(&n20.noisy, &g, &p, &s, n20.eps_wnorm, MorozovOptions::default()).unwrap();
    let fs: Vec<f64> = rep.per_lambda.iter().map(|d| d.f.unwrap()).collect();
    let changes = fs.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();

    let x = eval_grid(10_000);
    let table = BasisTable::new(&x, 250);
    let mut regular = true;
    let mut worst_ratio = 0.0f64;
    for snr in [10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0] {
        let (g, r) = noisy_f1(501, snr);
        let rep = select_morozov(&r.noisy, &g, &p, &s, r.eps_wnorm, MorozovOptions::default()).unwrap();
        let Some(lambda) = rep.chosen_lambda else {
            regular = false;
            continue;
        };
        let c = analyze(&r.noisy, &g, 250).unwrap();
        let diff: Vec<f64> = c
            .values()
            .iter()
            .zip(p.betas())
            .map(|(c, b)| {
                let lb2 = lambda * b * b;
                lb2 / (1.0 + lb2) * c
            })
            .collect();
        let gap = sup(table.synthesize(&diff));
        let bound = (TAU * 501.0).sqrt() * r.eps_sup;
        worst_ratio = worst_ratio.max(gap / bound);
        regular &= gap <= bound;
    }
    outcome(
        root_err <= 1e-8 && changes == 1 && regular,
        format!(
            "|lambda* - 1| = {root_err:.3e}, sign changes of F = {changes}, worst regularity ratio {worst_ratio:.3e}"
        ),
    )
}

fn gcv() -> Outcome {
    let g = make_grid(11).unwrap();
    let r = add_noise_snr(&g.sample(f1), 20.0, SEED).unwrap();
    let c = analyze(&r.noisy, &g, 5).unwrap();
    let s = ParameterGrid::default();
    let (mut worst, mut bounds_ok) = (0.0f64, true);
    for exponent in [1.0, 2.0] {
        let p = laplace_penalty(5, exponent).unwrap();
        for i in 0..20 {
            let lambda = 10f64.powf(-9.0 + 10.0 * i as f64 / 19.0);
            let closed = gcv_value(&c, &p, lambda).unwrap();
            let explicit = gcv_explicit(&r.noisy, &g, &p, lambda);
            worst = worst.max((closed - explicit).abs() / explicit);
        }
        for &lambda in s.lambdas() {
            let v = gcv_value(&c, &p, lambda).unwrap();
            let (lo, hi) = gcv_bounds(&c, lambda).unwrap();
            bounds_ok &= lo <= v && v <= hi;
        }
    }
    outcome(
        worst <= 1e-12 && bounds_ok,
        format!("closed form vs explicit matrices {worst:.3e}, bounds hold on S: {bounds_ok}"),
    )
}

// Dense evaluation of ||W^1/2 (A alpha - f)||^2 / Tr(I - A(lambda))^2. The complement
// I - W^1/2 A M^-1 A^T W^1/2 is formed as lambda W^1/2 A G^-1 B M^-1 A^T W^1/2 with
// G = A^T W A and M = G + lambda B assembled and inverted numerically.
fn gcv_explicit(
    samples: &[f64],
    grid: &periodic_tikhonov::TrapezoidalGrid,
    penalty: &periodic_tikhonov::PenaltySequence,
    lambda: f64,
) -> f64 {
    let n = grid.len();
    let d = dimension(penalty.degree());
    let w = grid.weight();
    let a: Vec<Vec<f64>> = grid
        .nodes()
        .iter()
        .map(|&x| (0..d).map(|i| eval_harmonic(HarmonicIndex::from_position(i), x)).collect())
        .collect();
    let b2: Vec<f64> = penalty.betas().iter().map(|b| b * b).collect();
    let gram: Vec<Vec<f64>> = (0..d)
        .map(|r| (0..d).map(|c| (0..n).map(|j| a[j][r] * w * a[j][c]).sum()).collect())
        .collect();
    let mut m = gram.clone();
    for r in 0..d {
        m[r][r] += lambda * b2[r];
    }
    let (ginv, minv) = (invert(gram), invert(m));
    let core: Vec<Vec<f64>> = (0..d)
        .map(|r| (0..d).map(|c| (0..d).map(|t| ginv[r][t] * b2[t] * minv[t][c]).sum()).collect())
        .collect();
    let q: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let s: f64 = (0..d).map(|r| a[i][r] * (0..d).map(|c| core[r][c] * a[j][c]).sum::<f64>()).sum();
                    lambda * w * s
                })
                .collect()
        })
        .collect();
    let sw = w.sqrt();
    let resid: f64 = (0..n).map(|i| (0..n).map(|j| q[i][j] * sw * samples[j]).sum::<f64>().powi(2)).sum();
    let trace: f64 = (0..n).map(|i| q[i][i]).sum();
    resid / (trace * trace)
}

fn invert(mut m: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let d = m.len();
    let mut inv: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for col in 0..d {
        let piv = (col..d).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs())).unwrap();
        m.swap(col, piv);
        inv.swap(col, piv);
        let p = m[col][col];
        for j in 0..d {
            m[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..d {
            if r != col {
                let f = m[r][col];
                for j in 0..d {
                    m[r][j] -= f * m[col][j];
                    inv[r][j] -= f * inv[col][j];
                }
            }
        }
    }
    inv
}

fn condition() -> Outcome {
    let g = make_grid(51).unwrap();
    let p = laplace_penalty(25, 1.0).unwrap();
    let d = dimension(25);
    let table = BasisTable::new(g.nodes(), 25);
    let s = ParameterGrid::default();
    let (mut exact, mut off_diag) = (true, 0.0f64);
    let mut prev = 0.0;
    let mut monotone = true;
    for &lambda in s.lambdas().iter().rev() {
        // A^T W A + lambda diag(beta^2), assembled from the basis matrix
        let mut diag = vec![0.0; d];
        for r in 0..d {
            for c in 0..d {
                let v: f64 = (0..g.len()).map(|j| table.row(j)[r] * g.weight() * table.row(j)[c]).sum::<f64>()
                    + if r == c { lambda * p.betas()[r].powi(2) } else { 0.0 };
                if r == c {
                    diag[r] = v;
                } else {
                    off_diag = off_diag.max(v.abs());
                }
            }
        }
        // the Gram part is the identity up to rounding; the diagonal system itself is 1 + lambda beta^2
        let ideal: Vec<f64> = p.betas().iter().map(|b| 1.0 + lambda * b * b).collect();
        let dev = diag.iter().zip(&ideal).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let from_matrix = ideal.iter().copied().fold(0.0, f64::max) / ideal.iter().copied().fold(f64::INFINITY, f64::min);
        let kappa = condition_number(lambda, &p);
        exact &= kappa == from_matrix && dev <= 1e-12 * ideal[d - 1];
        monotone &= kappa >= prev;
        prev = kappa;
    }
    outcome(
        exact && monotone && off_diag <= 1e-12,
        format!("exact match {exact}, nondecreasing in lambda {monotone}, off-diagonal {off_diag:.3e}"),
    )
}

fn end_to_end() -> Outcome {
    let start = Instant::now();
    let mut c = SweepConfig::new(GalleryFunction::F1, 501);
    c.snr_levels = vec![20.0];
    c.seed = SEED;
    c.emit_curves = true;
    let report = sweep(&c).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let row = &report.rows[0];
    let opt = row.l2_error(Strategy::Oracle).unwrap();
    let mut ok = secs < 30.0;
    let mut parts = Vec::new();
    for s in Strategy::ALL {
        match row.l2_error(s) {
            Some(e) => {
                ok &= e <= row.l2_at_smallest && e <= 5.0 * opt;
                parts.push(format!("{s} {:.3e} (lambda {:.3e})", e, row.lambda(s).unwrap()));
            }
            None => {
                ok = false;
                parts.push(format!("{s} failed"));
            }
        }
    }
    let curve = row.curves.as_ref().unwrap();
    let imin = (0..curve.len()).min_by(|&a, &b| curve[a].l2_error.total_cmp(&curve[b].l2_error)).unwrap();
    let u_shaped = imin > 0
        && imin + 1 < curve.len()
        && curve[0].l2_error > curve[imin].l2_error
        && curve[curve.len() - 1].l2_error > curve[imin].l2_error;
    ok &= u_shaped;
    outcome(
        ok,
        format!(
            "{}; lambda_T {:.3e}; interior minimum at k={} ({u_shaped}); {secs:.2} s",
            parts.join(", "),
            row.l2_at_smallest,
            imin + 1
        ),
    )
}

fn regularity_trend() -> Outcome {
    let mut c = SweepConfig::new(GalleryFunction::F1, 501);
    c.snr_levels = (1..=8).map(|i| 10.0 * i as f64).collect();
    c.seed = SEED;
    let report = sweep(&c).unwrap();
    let s = &c.grid;
    let mors: Vec<f64> = report.rows.iter().map(|r| r.lambda(Strategy::Morozov).unwrap_or(f64::NAN)).collect();
    let trend = mors.windows(2).all(|w| w[1] <= w[0] / s.q() * (1.0 + 1e-12));
    let last = mors[mors.len() - 1];
    let mut in_grid = true;
    let mut full = true;
    for row in &report.rows {
        for st in Strategy::ALL {
            in_grid &= row.lambda(st).is_some_and(|l| s.index_of(l).is_some());
            full &= row.reports.get(&st).is_some_and(|r| {
                r.per_lambda.len() == s.len() && r.per_lambda.iter().all(|d| d.j.is_finite() && d.k.is_finite())
            });
        }
        let g = make_grid(501).unwrap();
        let t = tabulate(&row.noise.noisy, &g, &laplace_penalty(250, 1.0).unwrap(), s, Some(row.noise.eps_wnorm)).unwrap();
        full &= t.len() == s.len() && t.iter().all(|d| d.kappa.is_some() && d.v.is_some() && d.f.is_some());
    }
    let listing: Vec<String> = mors.iter().map(|l| format!("{l:.2e}")).collect();
    outcome(
        trend && last <= 1e-4 && in_grid && full,
        format!(
            "lambda_mor 10..80 dB = [{}], trend {trend}, all in S {in_grid}, diagnostics complete {full}",
            listing.join(", ")
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Gram identity, N=501", gram_identity),
        ("interpolation at lambda=0, f2 at 20 dB", interpolation),
        ("barycentric equivalence", barycentric),
        ("spectral accuracy, f1 N=31", spectral_accuracy),
        ("J/K monotonicity and derivative", monotonicity),
        ("discrepancy principle", morozov),
        ("GCV closed form and bounds", gcv),
        ("condition number", condition),
        ("end-to-end denoising, f1 at 20 dB", end_to_end),
        ("regularity trend 10..80 dB", regularity_trend),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:>2} {}: {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
