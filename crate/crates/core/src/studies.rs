//! Refinement and sampling studies behind the bound checks.

use crate::dirichlet::{DirichletLaplacian, SineCoeffs};
use crate::error::Result;
use crate::grid::Grid;
use crate::paraproduct::product_estimate_ratio;
use crate::report::{BoundReport, Check};
use crate::rng::{derive_seed, rng, stream};
use crate::sobolev::random_field_with_regularity;
use crate::solver::bounds::{default_t_grid, verify_gamma_bounds};
use crate::solver::SolverConfig;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

/// Log-spaced points from `10^lo` to `10^hi`.
pub fn logspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (count - 1) as f64))
        .collect()
}

/// Gaussian sine coefficients `(1+σ²λ_k)^{order/2}·g_k`, with `g_k` keyed by
/// the mode multi-index so that refinement keeps shared modes.
pub fn random_sine_coeffs(lap: &DirichletLaplacian, order: f64, seed: u64) -> SineCoeffs {
    let g = *lap.grid();
    let m = lap.modes_per_axis();
    let coeffs = lap
        .eigenvalues()
        .iter()
        .enumerate()
        .map(|(flat, &lam)| {
            let (k0, k1) = if g.d() == 1 {
                (flat + 1, 0)
            } else {
                (flat / m + 1, flat % m + 1)
            };
            let mut r = rng(seed, stream::FIELD, ((k0 as u64) << 32) | k1 as u64);
            let z: f64 = StandardNormal.sample(&mut r);
            (1.0 + lap.sigma2() * lam).powf(order / 2.0) * z
        })
        .collect();
    SineCoeffs::new(g, coeffs).expect("finite")
}

/// Max over `pairs` random `(f, g)` of the product-estimate ratio, with
/// `f` of order `1+δ` and `g` of order `−β`, at each `N`.
#[allow(clippy::too_many_arguments)]
pub fn product_ratio_study(
    base: &Grid,
    ns: &[usize],
    pairs: usize,
    seed: u64,
    delta: f64,
    beta: f64,
    p: f64,
    q: f64,
) -> Result<Vec<(usize, f64)>> {
    ns.iter()
        .map(|&n| {
            let g = base.with_n(n)?;
            let ratios = (0..pairs as u64)
                .into_par_iter()
                .map(|i| {
                    let f = random_field_with_regularity(
                        &g,
                        1.0 + delta,
                        derive_seed(seed, stream::PAIR, 2 * i),
                    );
                    let h = random_field_with_regularity(
                        &g,
                        -beta,
                        derive_seed(seed, stream::PAIR, 2 * i + 1),
                    );
                    product_estimate_ratio(&f, &h, delta, beta, p, q)
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok((n, ratios.into_iter().fold(0.0, f64::max)))
        })
        .collect()
}

/// Sup over `t ∈ [1e−4, 1]` of the smoothing ratio for a rough `w` with
/// coefficients `(1+σ²λ)^{(β−d/2−0.05)/2}·g`, at each `N`.
pub fn smoothing_study(
    base: &Grid,
    ns: &[usize],
    sigma2: f64,
    delta: f64,
    beta: f64,
    seed: u64,
) -> Result<Vec<(usize, f64)>> {
    let ts = logspace(-4.0, 0.0, 81);
    ns.iter()
        .map(|&n| {
            let g = base.with_n(n)?;
            let lap = DirichletLaplacian::new(g, sigma2)?;
            let w = random_sine_coeffs(&lap, beta - g.d() as f64 / 2.0 - 0.05, seed);
            let sup = ts
                .iter()
                .map(|&t| lap.smoothing_ratio(&w, t, delta, beta))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            Ok((n, sup))
        })
        .collect()
}

/// Max over `samples` smooth random `x` and `t ∈ [1e−6, 1]` of the
/// semigroup Hölder defect at order `alpha`.
pub fn holder_defect_study(
    g: &Grid,
    sigma2: f64,
    alpha: f64,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let lap = DirichletLaplacian::new(*g, sigma2)?;
    let ts = logspace(-6.0, 0.0, 61);
    let mut worst: f64 = 0.0;
    for s in 0..samples as u64 {
        let x = random_sine_coeffs(&lap, -4.0, derive_seed(seed, stream::SAMPLE, s));
        for &t in &ts {
            worst = worst.max(lap.holder_defect(&x, t, alpha)?);
        }
    }
    Ok(worst)
}

/// Resolution growth of the product-estimate constant allowed by the checks.
pub const PRODUCT_GROWTH_TOL: f64 = 1.2;
/// Resolution drift of the smoothing constant allowed by the checks.
pub const SMOOTHING_DRIFT_TOL: f64 = 0.2;

/// The bound checks run by `verify`: product estimate, smoothing,
/// semigroup Hölder defect and both singular-integral bounds.
pub fn verify_reports(cfg: &SolverConfig) -> Result<Vec<BoundReport>> {
    cfg.validate()?;
    let g = cfg.grid;
    let mut out = Vec::new();

    let pr = product_ratio_study(
        &g,
        &[64, 256],
        20,
        cfg.seed,
        cfg.delta,
        cfg.beta,
        2.0,
        cfg.q,
    )?;
    let growth = pr[1].1 / pr[0].1;
    out.push(
        BoundReport::new(
            "product_estimate_growth",
            growth,
            PRODUCT_GROWTH_TOL,
            0.0,
            Check::AtMost,
        )
        .with_param("ratio_n64", pr[0].1)
        .with_param("ratio_n256", pr[1].1)
        .with_param("q", cfg.q),
    );

    let sm = smoothing_study(&g, &[128, 256], cfg.sigma2, cfg.delta, cfg.beta, cfg.seed)?;
    let drift = (sm[1].1 - sm[0].1).abs() / sm[0].1;
    out.push(
        BoundReport::new(
            "smoothing_drift",
            drift,
            0.0,
            SMOOTHING_DRIFT_TOL,
            Check::AtMost,
        )
        .with_param("sup_n128", sm[0].1)
        .with_param("sup_n256", sm[1].1),
    );

    let hd = holder_defect_study(&g.with_n(128)?, cfg.sigma2, 0.2, 10, cfg.seed)?;
    out.push(
        BoundReport::new("semigroup_holder_defect", hd, 1.0, 0.0, Check::AtMost)
            .with_param("alpha", 0.2),
    );

    let rhos = [1.0, 10.0, 100.0];
    let tg = default_t_grid();
    for theta in [0.3, 0.5, 0.75] {
        out.extend(verify_gamma_bounds(theta, cfg.gamma, &rhos, &tg)?);
    }
    out.extend(verify_gamma_bounds(0.55, 0.2, &rhos, &tg)?);
    Ok(out)
}
