use super::config::{SolverConfig, U0Kind};
use crate::dirichlet::{DirichletLaplacian, SineCoeffs};
use crate::error::{invalid, Result};
use crate::field::RealField;
use crate::grid::Grid;

/// States on the uniform time grid `t_m = mΔt`, `m = 0..=M_t`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimePath {
    times: Vec<f64>,
    states: Vec<SineCoeffs>,
}

impl TimePath {
    pub fn new(times: Vec<f64>, states: Vec<SineCoeffs>) -> Result<Self> {
        if times.len() != states.len() || times.is_empty() {
            return Err(invalid("path", "need one state per time node"));
        }
        if times[0] != 0.0 || times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("times", "must start at 0 and increase strictly"));
        }
        let g = *states[0].grid();
        for s in &states[1..] {
            g.check_same(s.grid())?;
        }
        Ok(Self { times, states })
    }

    pub fn zeros(grid: Grid, times: Vec<f64>) -> Self {
        let states = vec![SineCoeffs::zeros(grid); times.len()];
        Self { times, states }
    }

    pub(crate) fn from_parts(times: Vec<f64>, states: Vec<SineCoeffs>) -> Self {
        Self { times, states }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[SineCoeffs] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn grid(&self) -> &Grid {
        self.states[0].grid()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&SineCoeffs, &SineCoeffs) -> SineCoeffs) -> Self {
        debug_assert_eq!(self.times, other.times);
        Self {
            times: self.times.clone(),
            states: self
                .states
                .iter()
                .zip(&other.states)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.sub(b))
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            times: self.times.clone(),
            states: self.states.iter().map(|s| s.scale(c)).collect(),
        }
    }

    /// `max_m ‖u(t_m)‖_{L₂}`.
    pub fn sup_l2(&self) -> f64 {
        self.states.iter().map(|s| s.l2_norm()).fold(0.0, f64::max)
    }
}

/// `sup_t e^{−ρt}(‖f(t)‖_{E,s} + sup_{r<t} ‖f(t)−f(r)‖_{E,s}/(t−r)^γ)` over
/// all node pairs.
pub fn weighted_holder_norm(
    path: &TimePath,
    rho: f64,
    gamma: f64,
    s: f64,
    lap: &DirichletLaplacian,
) -> f64 {
    let w = lap.norm_weights(s);
    let norm = |a: &SineCoeffs, b: Option<&SineCoeffs>| -> f64 {
        let sum: f64 = match b {
            None => a.coeffs().iter().zip(&w).map(|(x, w)| w * x * x).sum(),
            Some(b) => a
                .coeffs()
                .iter()
                .zip(b.coeffs())
                .zip(&w)
                .map(|((x, y), w)| w * (x - y) * (x - y))
                .sum(),
        };
        sum.sqrt()
    };
    let t = path.times();
    let u = path.states();
    let mut best: f64 = 0.0;
    for m in 0..u.len() {
        let mut hol: f64 = 0.0;
        for j in 0..m {
            hol = hol.max(norm(&u[m], Some(&u[j])) / (t[m] - t[j]).powf(gamma));
        }
        best = best.max((-rho * t[m]).exp() * (norm(&u[m], None) + hol));
    }
    best
}

/// Bump `exp(1 − 1/(1 − y²))` with `y = |x − c|/(0.35ℓ)`, `c` the centre of
/// `D`.
pub fn interior_bump(g: &Grid) -> RealField {
    let ell = g.domain_side();
    let centre: Vec<f64> = g.domain_offset().iter().map(|a| a + ell / 2.0).collect();
    let radius = 0.35 * ell;
    RealField::from_fn(*g, |x| {
        let r2: f64 = x
            .iter()
            .zip(&centre)
            .map(|(xi, c)| ((xi - c) / radius).powi(2))
            .sum();
        if r2 >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - r2)).exp()
        }
    })
}

pub fn initial_datum(cfg: &SolverConfig, lap: &DirichletLaplacian) -> Result<SineCoeffs> {
    match cfg.u0_kind {
        U0Kind::InteriorBump => lap.sine_analysis(&interior_bump(&cfg.grid)),
        U0Kind::EigenmodeSmooth => SineCoeffs::unit(cfg.grid, &vec![1; cfg.grid.d()]),
    }
}

/// `m ↦ P_{t_m} u₀`.
pub fn initial_term(
    u0: &SineCoeffs,
    cfg: &SolverConfig,
    lap: &DirichletLaplacian,
) -> Result<TimePath> {
    let times = cfg.times();
    let states = times
        .iter()
        .map(|&t| lap.semigroup_apply(u0, t))
        .collect::<Result<_>>()?;
    Ok(TimePath::from_parts(times, states))
}
