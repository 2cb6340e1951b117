use super::config::{Rho, SolverConfig};
use super::integral::integral_operator;
use super::path::{initial_datum, initial_term, weighted_holder_norm, TimePath};
use crate::dirichlet::{DirichletLaplacian, SineCoeffs};
use crate::error::Result;
use crate::field::RealField;
use crate::paraproduct::TransportOperator;
use crate::rng::{rng, stream};
use rand_distr::{Distribution, StandardNormal};
use std::time::Instant;

/// Everything the iteration needs besides the current iterate.
#[derive(Clone, Debug)]
pub struct Problem {
    pub cfg: SolverConfig,
    pub lap: DirichletLaplacian,
    pub op: TransportOperator,
    pub u0: SineCoeffs,
    pub init: TimePath,
}

impl Problem {
    pub fn new(z: &RealField, cfg: &SolverConfig) -> Result<Self> {
        cfg.validate()?;
        let lap = DirichletLaplacian::new(cfg.grid, cfg.sigma2)?;
        let op = TransportOperator::new(z, &lap, cfg.product_options())?;
        let u0 = initial_datum(cfg, &lap)?;
        let init = initial_term(&u0, cfg, &lap)?;
        Ok(Self {
            cfg: cfg.clone(),
            lap,
            op,
            u0,
            init,
        })
    }

    /// `‖p‖^{(ρ)}_{γ,1+δ}`.
    pub fn norm(&self, p: &TimePath, rho: f64) -> f64 {
        weighted_holder_norm(p, rho, self.cfg.gamma, self.cfg.state_order(), &self.lap)
    }

    /// `P u₀ + I(u)`.
    pub fn picard_map(&self, u: &TimePath) -> Result<(TimePath, super::integral::IntegralOutput)> {
        let out = integral_operator(u, &self.op, &self.cfg)?;
        Ok((self.init.add(&out.path), out))
    }

    /// `‖u − (P u₀ + I(u))‖^{(ρ)}`.
    pub fn fixed_point_residual(&self, u: &TimePath, rho: f64) -> Result<f64> {
        let (next, _) = self.picard_map(u)?;
        Ok(self.norm(&u.sub(&next), rho))
    }
}

/// Knot counts cycled through by the contraction study; 0 is a path
/// constant in time.
pub const KNOT_LADDER: [usize; 5] = [0, 1, 2, 4, 8];

/// Random path whose mode-`k` coefficient is a piecewise-linear spline
/// through `knots + 1` Gaussian knots on `[0, T]` (constant in time for
/// `knots = 0`), weighted by `(1+σ²λ_k)^{−(1+δ+d/2+1/2)/2}`.
pub fn random_path(
    cfg: &SolverConfig,
    lap: &DirichletLaplacian,
    stream_id: u64,
    index: u64,
    knots: usize,
) -> TimePath {
    let mut r = rng(cfg.seed, stream_id, index);
    let d = cfg.grid.d() as f64;
    let order = (1.0 + cfg.delta + d / 2.0 + 0.5) / 2.0;
    let weights: Vec<f64> = lap
        .eigenvalues()
        .iter()
        .map(|&lam| (1.0 + cfg.sigma2 * lam).powf(-order))
        .collect();
    let values: Vec<Vec<f64>> = weights
        .iter()
        .map(|w| {
            (0..=knots)
                .map(|_| {
                    let g: f64 = StandardNormal.sample(&mut r);
                    w * g
                })
                .collect()
        })
        .collect();
    let times = cfg.times();
    let states = times
        .iter()
        .map(|&t| {
            let c = if knots == 0 {
                values.iter().map(|k| k[0]).collect()
            } else {
                let x = t / cfg.t_final * knots as f64;
                let i = (x.floor() as usize).min(knots - 1);
                let f = x - i as f64;
                values
                    .iter()
                    .map(|k| (1.0 - f) * k[i] + f * k[i + 1])
                    .collect()
            };
            SineCoeffs::from_raw(cfg.grid, c)
        })
        .collect();
    TimePath::from_parts(times, states)
}

pub const AUTO_RHO_CAP: f64 = 256.0;

/// Doubles `ρ` from 1 until the single-path ratio `‖I(w)‖/‖w‖` drops below
/// 1/2, capped at 256. Returns `(ρ, ratios tried)`.
pub fn choose_rho(problem: &Problem) -> Result<(f64, Vec<(f64, f64)>)> {
    let w = random_path(&problem.cfg, &problem.lap, stream::AUTO_RHO, 0, 8);
    let iw = integral_operator(&w, &problem.op, &problem.cfg)?.path;
    let mut tried = Vec::new();
    let mut rho = 1.0;
    loop {
        let ratio = problem.norm(&iw, rho) / problem.norm(&w, rho);
        tried.push((rho, ratio));
        if ratio < 0.5 || rho >= AUTO_RHO_CAP {
            return Ok((rho, tried));
        }
        rho *= 2.0;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StartGuess {
    InitialTerm,
    Zero,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationDiag {
    pub iteration: usize,
    pub diff_norm: f64,
    /// `diff_n / diff_{n−1}`; NaN on the first iteration.
    pub ratio: f64,
    pub max_leakage: f64,
    pub unconverged_products: usize,
    pub wallclock_s: f64,
}

impl IterationDiag {
    pub const CSV_HEADER: &'static str =
        "iteration,diff_norm,ratio,max_leakage,unconverged_products,wallclock_s";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.16e},{:.16e},{:.16e},{},{:.16e}",
            self.iteration,
            self.diff_norm,
            self.ratio,
            self.max_leakage,
            self.unconverged_products,
            self.wallclock_s
        )
    }
}

#[derive(Clone, Debug)]
pub struct PicardResult {
    pub path: TimePath,
    pub diagnostics: Vec<IterationDiag>,
    pub converged: bool,
    pub rho: f64,
    /// `(ρ, ratio)` pairs probed by the auto mode; empty for fixed `ρ`.
    pub rho_probe: Vec<(f64, f64)>,
}

impl PicardResult {
    /// Largest successive-difference ratio after the first step.
    pub fn max_ratio(&self) -> f64 {
        self.diagnostics
            .iter()
            .skip(1)
            .map(|d| d.ratio)
            .filter(|r| r.is_finite())
            .fold(0.0, f64::max)
    }
}

/// Iterates `u ↦ P u₀ + I(u)` until successive iterates differ by less than
/// `tol_picard` in the `ρ`-weighted Hölder norm or `max_iter` is reached.
pub fn picard_solve_problem(problem: &Problem, start: StartGuess) -> Result<PicardResult> {
    let cfg = &problem.cfg;
    let (rho, rho_probe) = match cfg.rho {
        Rho::Fixed(r) => (r, Vec::new()),
        Rho::Auto => choose_rho(problem)?,
    };
    let mut u = match start {
        StartGuess::InitialTerm => problem.init.clone(),
        StartGuess::Zero => TimePath::zeros(cfg.grid, cfg.times()),
    };
    let clock = Instant::now();
    let mut diagnostics: Vec<IterationDiag> = Vec::new();
    let mut converged = false;
    for it in 1..=cfg.max_iter {
        let (next, out) = problem.picard_map(&u)?;
        let diff = problem.norm(&next.sub(&u), rho);
        let ratio = diagnostics
            .last()
            .map(|d| {
                if d.diff_norm > 0.0 {
                    diff / d.diff_norm
                } else {
                    f64::NAN
                }
            })
            .unwrap_or(f64::NAN);
        diagnostics.push(IterationDiag {
            iteration: it,
            diff_norm: diff,
            ratio,
            max_leakage: out.max_leakage(),
            unconverged_products: out.unconverged_products(),
            wallclock_s: clock.elapsed().as_secs_f64(),
        });
        u = next;
        if diff < cfg.tol_picard {
            converged = true;
            break;
        }
    }
    Ok(PicardResult {
        path: u,
        diagnostics,
        converged,
        rho,
        rho_probe,
    })
}

pub fn picard_solve(z: &RealField, cfg: &SolverConfig) -> Result<PicardResult> {
    picard_solve_problem(&Problem::new(z, cfg)?, StartGuess::InitialTerm)
}
