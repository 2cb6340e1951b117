use super::config::SolverConfig;
use super::integral::integral_operator;
use super::picard::{random_path, Problem, KNOT_LADDER};
use crate::error::{invalid, Result};
use crate::field::RealField;
use crate::report::{BoundReport, Check};
use crate::rng::stream;
use crate::sobolev::least_squares_slope;

#[derive(Clone, Debug, PartialEq)]
pub struct ContractionStudy {
    pub rhos: Vec<f64>,
    /// `c(ρ)`: max over pairs of `‖I(u)−I(v)‖^{(ρ)} / ‖u−v‖^{(ρ)}`.
    pub constants: Vec<f64>,
    /// Per pair, per `ρ`.
    pub ratios: Vec<Vec<f64>>,
    pub skipped_pairs: usize,
    pub slope: f64,
    /// `(δ+β+2γ−1)/2`.
    pub reference_slope: f64,
}

/// Allowed deviation of the fitted log-log slope from the reference exponent.
pub const SLOPE_TOL: f64 = 0.15;

impl ContractionStudy {
    pub fn strictly_decreasing(&self) -> bool {
        self.constants.windows(2).all(|w| w[1] < w[0])
    }

    pub fn reports(&self) -> Vec<BoundReport> {
        let mut out: Vec<BoundReport> = self
            .rhos
            .iter()
            .zip(&self.constants)
            .map(|(&rho, &c)| {
                BoundReport::flag("contraction_constant", c, c.is_finite()).with_param("rho", rho)
            })
            .collect();
        out.push(BoundReport::flag(
            "contraction_strictly_decreasing",
            self.constants.last().copied().unwrap_or(f64::NAN),
            self.strictly_decreasing(),
        ));
        out.push(BoundReport::new(
            "contraction_loglog_slope",
            self.slope,
            self.reference_slope,
            SLOPE_TOL,
            Check::Within,
        ));
        out
    }
}

/// Empirical contraction constants of the integral operator over `pairs`
/// random path pairs, each evaluated in every `ρ`-norm. Pair `p` uses
/// `KNOT_LADDER[p mod 5]` knots for both of its paths.
pub fn contraction_estimate(
    z: &RealField,
    cfg: &SolverConfig,
    rhos: &[f64],
    pairs: usize,
) -> Result<ContractionStudy> {
    if rhos.is_empty() || rhos.iter().any(|&r| !(r >= 1.0)) {
        return Err(invalid("rhos", "need a non-empty list with every rho >= 1"));
    }
    let problem = Problem::new(z, cfg)?;
    let mut ratios = Vec::new();
    let mut skipped = 0;
    for p in 0..pairs as u64 {
        let knots = KNOT_LADDER[p as usize % KNOT_LADDER.len()];
        let u = random_path(cfg, &problem.lap, stream::PAIR, 2 * p, knots);
        let v = random_path(cfg, &problem.lap, stream::PAIR, 2 * p + 1, knots);
        let iu = integral_operator(&u, &problem.op, cfg)?.path;
        let iv = integral_operator(&v, &problem.op, cfg)?.path;
        let din = u.sub(&v);
        let dout = iu.sub(&iv);
        let row: Option<Vec<f64>> = rhos
            .iter()
            .map(|&rho| {
                let den = problem.norm(&din, rho);
                if den < 1e-14 {
                    None
                } else {
                    Some(problem.norm(&dout, rho) / den)
                }
            })
            .collect();
        match row {
            Some(r) => ratios.push(r),
            None => skipped += 1,
        }
    }
    let constants: Vec<f64> = (0..rhos.len())
        .map(|i| ratios.iter().map(|r| r[i]).fold(0.0, f64::max))
        .collect();
    let slope = if constants.iter().all(|&c| c > 0.0) && rhos.len() > 1 {
        let xs: Vec<f64> = rhos.iter().map(|r| r.ln()).collect();
        let ys: Vec<f64> = constants.iter().map(|c| c.ln()).collect();
        least_squares_slope(&xs, &ys)
    } else {
        f64::NAN
    };
    Ok(ContractionStudy {
        rhos: rhos.to_vec(),
        constants,
        ratios,
        skipped_pairs: skipped,
        slope,
        reference_slope: (cfg.delta + cfg.beta + 2.0 * cfg.gamma - 1.0) / 2.0,
    })
}
