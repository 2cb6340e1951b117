use crate::error::{invalid, Result};
use crate::quadrature::{integrate, Quad};
use crate::report::{BoundReport, Check};
use statrs::function::gamma::gamma as gamma_fn;

const ABS_TOL: f64 = 1e-14;
const REL_TOL: f64 = 1e-12;

/// `∫_s^t e^{−ρr} r^{−θ} dr` after `r = u^{1/(1−θ)}`, which removes the
/// endpoint singularity.
pub fn gamma_tail_integral(theta: f64, rho: f64, s: f64, t: f64) -> Quad {
    let k = 1.0 / (1.0 - theta);
    integrate(
        |u| (-rho * u.powf(k)).exp() * k,
        s.powf(1.0 - theta),
        t.powf(1.0 - theta),
        ABS_TOL,
        REL_TOL,
    )
}

/// `Γ(1−θ)ρ^{θ−1}`.
pub fn gamma_tail_bound(theta: f64, rho: f64) -> f64 {
    gamma_fn(1.0 - theta) * rho.powf(theta - 1.0)
}

/// `∫₀^t e^{−ρ(t−r)}(t−r)^{−θ} r^{−γ} dr`, split at `t/2` with one
/// singularity-removing substitution per half.
pub fn convolution_integral(theta: f64, gamma: f64, rho: f64, t: f64) -> Quad {
    let kg = 1.0 / (1.0 - gamma);
    let kt = 1.0 / (1.0 - theta);
    let half = t / 2.0;
    let left = integrate(
        |v| {
            let r = v.powf(kg);
            let tau = t - r;
            (-rho * tau).exp() * tau.powf(-theta) * kg
        },
        0.0,
        half.powf(1.0 - gamma),
        ABS_TOL,
        REL_TOL,
    );
    let right = integrate(
        |u| {
            let tau = u.powf(kt);
            (-rho * tau).exp() * (t - tau).powf(-gamma) * kt
        },
        0.0,
        half.powf(1.0 - theta),
        ABS_TOL,
        REL_TOL,
    );
    Quad {
        value: left.value + right.value,
        error: left.error + right.error,
    }
}

/// `sup_t J(ρ,t) / ρ^{θ−1+γ}` over `t_grid`.
pub fn convolution_constant(theta: f64, gamma: f64, rho: f64, t_grid: &[f64]) -> f64 {
    t_grid
        .iter()
        .map(|&t| convolution_integral(theta, gamma, rho, t).value)
        .fold(0.0, f64::max)
        / rho.powf(theta - 1.0 + gamma)
}

/// Allowed relative spread of the fitted constant across `ρ`.
pub const CONVOLUTION_DRIFT_TOL: f64 = 0.10;

/// Relative slack granted to the Γ-bound for quadrature error.
pub const GAMMA_QUAD_TOL: f64 = 1e-6;

/// Log-spaced `t` grid from `1e−4` to `10`.
pub fn default_t_grid() -> Vec<f64> {
    (0..=100)
        .map(|i| 10f64.powf(-4.0 + 5.0 * i as f64 / 100.0))
        .collect()
}

/// Quadrature of both singular integrals against their bounds: one row per
/// `ρ` for the first (`s = 0`, `t = max t_grid`), one fitted constant per `ρ`
/// for the second, and the spread of those constants.
pub fn verify_gamma_bounds(
    theta: f64,
    gamma: f64,
    rhos: &[f64],
    t_grid: &[f64],
) -> Result<Vec<BoundReport>> {
    if !(0.0..1.0).contains(&theta) {
        return Err(invalid("theta", format!("{theta} not in [0, 1)")));
    }
    if !(gamma >= 0.0 && theta + gamma < 1.0) {
        return Err(invalid(
            "gamma",
            format!("need gamma >= 0 and theta + gamma < 1, got {gamma}"),
        ));
    }
    if rhos.is_empty() || rhos.iter().any(|&r| !(r > 0.0)) {
        return Err(invalid("rhos", "need positive values"));
    }
    if t_grid.is_empty() || t_grid.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return Err(invalid("t_grid", "need positive finite times"));
    }
    let t_max = t_grid.iter().cloned().fold(0.0, f64::max);
    let mut out = Vec::new();
    for &rho in rhos {
        let q = gamma_tail_integral(theta, rho, 0.0, t_max);
        let bound = gamma_tail_bound(theta, rho);
        out.push(
            BoundReport::new(
                "gamma_integral_bound",
                q.value,
                bound,
                GAMMA_QUAD_TOL * bound,
                Check::AtMost,
            )
            .with_param("theta", theta)
            .with_param("rho", rho)
            .with_param("s", 0.0)
            .with_param("t", t_max)
            .with_param("quad_error", q.error),
        );
    }
    let constants: Vec<f64> = rhos
        .iter()
        .map(|&rho| convolution_constant(theta, gamma, rho, t_grid))
        .collect();
    for (&rho, &c) in rhos.iter().zip(&constants) {
        out.push(
            BoundReport::flag("convolution_constant", c, c.is_finite() && c > 0.0)
                .with_param("theta", theta)
                .with_param("gamma", gamma)
                .with_param("rho", rho),
        );
    }
    let cmin = constants.iter().cloned().fold(f64::INFINITY, f64::min);
    let cmax = constants.iter().cloned().fold(0.0, f64::max);
    out.push(
        BoundReport::new(
            "convolution_constant_drift",
            (cmax - cmin) / cmin,
            0.0,
            CONVOLUTION_DRIFT_TOL,
            Check::AtMost,
        )
        .with_param("theta", theta)
        .with_param("gamma", gamma),
    );
    Ok(out)
}
