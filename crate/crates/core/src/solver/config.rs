use crate::error::{invalid, Result};
use crate::grid::Grid;
use crate::paraproduct::ProductOptions;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rho {
    Fixed(f64),
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum U0Kind {
    /// `C^∞` bump supported strictly inside `D`.
    InteriorBump,
    /// First sine eigenmode; only admissible when `1+δ+2γ < 3/2`.
    EigenmodeSmooth,
}

impl std::str::FromStr for U0Kind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interior_bump" => Ok(U0Kind::InteriorBump),
            "eigenmode_smooth" => Ok(U0Kind::EigenmodeSmooth),
            other => Err(invalid(
                "u0_kind",
                format!("unknown initial datum `{other}` (interior_bump, eigenmode_smooth)"),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub grid: Grid,
    pub beta: f64,
    pub delta: f64,
    pub gamma: f64,
    pub q: f64,
    pub sigma2: f64,
    pub t_final: f64,
    pub m_t: usize,
    pub rho: Rho,
    pub tol_picard: f64,
    pub tol_product: f64,
    pub max_iter: usize,
    pub u0_kind: U0Kind,
    pub dealias: bool,
    /// Root seed for random test paths (contraction study, auto `ρ`).
    pub seed: u64,
}

impl SolverConfig {
    /// `β=0.2, δ=0.3, γ=0.2`, `q = 4` in 1-d and 8 in 2-d, `σ²=1`, `T=0.5`,
    /// `M_t = 64`.
    pub fn defaults(grid: Grid) -> Self {
        Self {
            grid,
            beta: 0.2,
            delta: 0.3,
            gamma: 0.2,
            q: if grid.d() == 1 { 4.0 } else { 8.0 },
            sigma2: 1.0,
            t_final: 0.5,
            m_t: 64,
            rho: Rho::Auto,
            tol_picard: 1e-8,
            tol_product: 1e-6,
            max_iter: 30,
            u0_kind: U0Kind::InteriorBump,
            dealias: false,
            seed: 0,
        }
    }

    /// Checks the parameter gate of the existence result, strict
    /// inequalities included.
    pub fn validate(&self) -> Result<()> {
        let (b, dl, g) = (self.beta, self.delta, self.gamma);
        if !(0.0 < b && b < dl && dl < 0.5) {
            return Err(invalid(
                "beta/delta",
                format!("need 0 < beta < delta < 1/2, got beta={b}, delta={dl}"),
            ));
        }
        if !(0.0 < 2.0 * g && 2.0 * g < 1.0 - b - dl) {
            return Err(invalid(
                "gamma",
                format!(
                    "need 0 < 2*gamma < 1 - beta - delta, got 2*gamma={} and 1-beta-delta={}",
                    2.0 * g,
                    1.0 - b - dl
                ),
            ));
        }
        let d = self.grid.d() as f64;
        let qmin = 2f64.max(d / dl);
        if !(self.q > qmin) {
            return Err(invalid(
                "q",
                format!("need q > max(2, d/delta) = {qmin}, got {}", self.q),
            ));
        }
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return Err(invalid(
                "sigma2",
                format!("{} must be positive", self.sigma2),
            ));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(invalid(
                "t",
                format!("horizon {} must be positive", self.t_final),
            ));
        }
        if self.m_t < 1 {
            return Err(invalid("m_t", "need at least one time step"));
        }
        if let Rho::Fixed(r) = self.rho {
            if !(r >= 1.0 && r.is_finite()) {
                return Err(invalid("rho", format!("need rho >= 1, got {r}")));
            }
        }
        if !(self.tol_picard > 0.0) {
            return Err(invalid("tol_picard", "must be positive"));
        }
        if !(self.tol_product >= 0.0) {
            return Err(invalid("tol_product", "must be non-negative"));
        }
        if self.max_iter < 1 {
            return Err(invalid("max_iter", "must be at least 1"));
        }
        if self.u0_kind == U0Kind::EigenmodeSmooth && 1.0 + dl + 2.0 * g >= 1.5 {
            return Err(invalid(
                "u0_kind",
                format!(
                    "eigenmode initial data lie in H~^s(D) only for s < 3/2, but 1+delta+2*gamma = {}",
                    1.0 + dl + 2.0 * g
                ),
            ));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.t_final / self.m_t as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.m_t).map(|m| m as f64 * self.dt()).collect()
    }

    /// Working smoothness `1 + δ`.
    pub fn state_order(&self) -> f64 {
        1.0 + self.delta
    }

    pub fn product_options(&self) -> ProductOptions {
        ProductOptions {
            tol: self.tol_product,
            beta_probe: self.beta,
            dealias: self.dealias,
        }
    }
}
