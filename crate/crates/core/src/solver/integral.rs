use super::config::SolverConfig;
use super::path::TimePath;
use crate::dirichlet::SineCoeffs;
use crate::error::Result;
use crate::paraproduct::TransportOperator;
use rayon::prelude::*;

/// Below this value of `z = σ²λΔt` the weights use their Taylor series.
pub const SERIES_THRESHOLD: f64 = 0.5;

/// Exact weights of `∫₀^Δt e^{−aτ} [m_m τ/Δt + m_{m+1}(1 − τ/Δt)] dτ`:
/// returns `(e^{−aΔt}, w0, w1)` with the integral equal to
/// `w0·m_m + w1·m_{m+1}`.
pub fn product_weights(a: f64, dt: f64) -> (f64, f64, f64) {
    let z = a * dt;
    let e = (-z).exp();
    if z < SERIES_THRESHOLD {
        // w0/Δt = Σ (−z)^n (n+1)/(n+2)!,  w1/Δt = Σ (−z)^n/(n+2)!
        let (mut s0, mut s1) = (0.0, 0.0);
        let mut term = 0.5; // (−z)^0 / 2!
        for n in 0..30 {
            s0 += term * (n + 1) as f64;
            s1 += term;
            term *= -z / (n + 3) as f64;
        }
        (e, dt * s0, dt * s1)
    } else {
        let z2 = z * z;
        (e, dt * (1.0 - e - z * e) / z2, dt * (z - 1.0 + e) / z2)
    }
}

/// Result of one application of the integral operator.
#[derive(Clone, Debug)]
pub struct IntegralOutput {
    pub path: TimePath,
    /// Support leakage of the transport product at each node.
    pub leakage: Vec<f64>,
    /// Whether the truncation sequence met `tol_product` at each node.
    pub product_converged: Vec<bool>,
}

impl IntegralOutput {
    pub fn max_leakage(&self) -> f64 {
        self.leakage.iter().cloned().fold(0.0, f64::max)
    }

    pub fn unconverged_products(&self) -> usize {
        self.product_converged.iter().filter(|c| !**c).count()
    }
}

/// Transport products `m(t_m) = ⟨∇u(t_m), ∇Z⟩` at every node.
pub fn forcing_path(
    path: &TimePath,
    op: &TransportOperator,
) -> Result<(Vec<SineCoeffs>, Vec<f64>, Vec<bool>)> {
    let outs = path
        .states()
        .par_iter()
        .map(|u| op.apply(u))
        .collect::<Result<Vec<_>>>()?;
    let mut forcing = Vec::with_capacity(outs.len());
    let mut leakage = Vec::with_capacity(outs.len());
    let mut conv = Vec::with_capacity(outs.len());
    for o in outs {
        leakage.push(o.leakage);
        conv.push(o.report.converged);
        forcing.push(o.value);
    }
    Ok((forcing, leakage, conv))
}

/// Mode-wise product integration of `∫₀^{t_m} P_{t_m−r} m(r) dr` with `m`
/// piecewise linear between nodes.
pub fn integrate_forcing(
    forcing: &[SineCoeffs],
    times: &[f64],
    cfg: &SolverConfig,
    eigenvalues: &[f64],
) -> TimePath {
    let grid = *forcing[0].grid();
    let steps = times.len();
    let dt = cfg.dt();
    let modes = eigenvalues.len();
    let per_mode: Vec<Vec<f64>> = (0..modes)
        .into_par_iter()
        .map(|k| {
            let (e, w0, w1) = product_weights(cfg.sigma2 * eigenvalues[k], dt);
            let mut out = Vec::with_capacity(steps);
            let mut acc = 0.0;
            out.push(acc);
            for m in 0..steps - 1 {
                acc = e * acc + w0 * forcing[m].coeffs()[k] + w1 * forcing[m + 1].coeffs()[k];
                out.push(acc);
            }
            out
        })
        .collect();
    let states = (0..steps)
        .map(|m| SineCoeffs::from_raw(grid, per_mode.iter().map(|col| col[m]).collect()))
        .collect();
    TimePath::from_parts(times.to_vec(), states)
}

/// `I_t(u) = ∫₀^t P_{t−r} ⟨∇u(r), ∇Z⟩ dr` on the time grid; starts at 0.
pub fn integral_operator(
    path: &TimePath,
    op: &TransportOperator,
    cfg: &SolverConfig,
) -> Result<IntegralOutput> {
    let n = path.len();
    if op.is_zero_drift() {
        return Ok(IntegralOutput {
            path: TimePath::zeros(*path.grid(), path.times().to_vec()),
            leakage: vec![0.0; n],
            product_converged: vec![true; n],
        });
    }
    let (forcing, leakage, product_converged) = forcing_path(path, op)?;
    let out = integrate_forcing(&forcing, path.times(), cfg, op.laplacian().eigenvalues());
    Ok(IntegralOutput {
        path: out,
        leakage,
        product_converged,
    })
}
