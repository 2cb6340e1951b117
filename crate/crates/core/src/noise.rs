//! Fractional Brownian noise: exact 1-d synthesis, approximate isotropic
//! (Lévy) fields in `d ≤ 2`, a band-limited smooth test drift, the cutoff
//! product `Z = ψB`, and regularity reporting.

use crate::error::{invalid, Error, Result};
use crate::fft::plan;
use crate::field::{RealField, SpectralCoeffs};
use crate::grid::Grid;
use crate::report::BoundReport;
use crate::rng::{rng, stream};
use crate::sobolev::{fill_hermitian, lp_norm};
use crate::spectral::{apply_real_symbol, dft_forward, inverse_real_part, norm_sq};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NoiseKind {
    Fbm1dExact,
    LevySpectral,
    SmoothTest,
}

impl NoiseKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            NoiseKind::Fbm1dExact => "fbm1d_exact",
            NoiseKind::LevySpectral => "levy_spectral",
            NoiseKind::SmoothTest => "smooth_test",
        }
    }
}

impl std::str::FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fbm1d_exact" => Ok(NoiseKind::Fbm1dExact),
            "levy_spectral" => Ok(NoiseKind::LevySpectral),
            "smooth_test" => Ok(NoiseKind::SmoothTest),
            other => Err(invalid(
                "kind",
                format!("unknown noise kind `{other}` (fbm1d_exact, levy_spectral, smooth_test)"),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    pub hurst: f64,
    pub seed: u64,
    pub kind: NoiseKind,
    /// Maximal `|k_i|` of the smooth test modes.
    pub band: usize,
}

impl NoiseSpec {
    pub fn new(hurst: f64, seed: u64, kind: NoiseKind, band: usize) -> Result<Self> {
        let spec = Self {
            hurst,
            seed,
            kind,
            band,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hurst > 0.0 && self.hurst < 1.0) {
            return Err(invalid(
                "h",
                format!("Hurst parameter {} must lie in (0, 1)", self.hurst),
            ));
        }
        Ok(())
    }

    /// The solver needs `Z ∈ H^{1−β}_q`, which a Hurst-`H` field delivers for
    /// `1 − β < H`.
    pub fn validate_for_solver(&self, beta: f64) -> Result<()> {
        self.validate()?;
        if self.kind != NoiseKind::SmoothTest && !(1.0 - beta < self.hurst) {
            return Err(invalid(
                "h",
                format!("need 1 - beta < H, got 1 - {beta} >= {}", self.hurst),
            ));
        }
        Ok(())
    }
}

/// Autocovariance of unit-spaced fractional Gaussian noise scaled to step `h`.
fn fgn_autocov(k: usize, hurst: f64, h: f64) -> f64 {
    let k = k as f64;
    let e = 2.0 * hurst;
    0.5 * h.powf(e) * ((k + 1.0).powf(e) - 2.0 * k.powf(e) + (k - 1.0).abs().powf(e))
}

/// Exact fBm on the `N` torus nodes via circulant embedding of the increment
/// covariance (size `2N`), pinned to `B(0) = 0`.
pub fn synthesize_fbm_1d(spec: &NoiseSpec, g: &Grid) -> Result<RealField> {
    spec.validate()?;
    if g.d() != 1 {
        return Err(invalid("d", "exact fBm synthesis is one-dimensional"));
    }
    let n = g.n();
    let h = g.spacing();
    let m = 2 * n;
    let mut c: Vec<Complex64> = (0..m)
        .map(|j| {
            let lag = if j <= n { j } else { m - j };
            Complex64::new(fgn_autocov(lag, spec.hurst, h), 0.0)
        })
        .collect();
    plan(m, false).process(&mut c);
    let lmax = c.iter().fold(0.0f64, |a, z| a.max(z.re));
    let lmin = c.iter().fold(f64::INFINITY, |a, z| a.min(z.re));
    if lmin < -1e-9 * lmax.max(1.0) {
        return Err(Error::NegativeEmbedding(lmin));
    }
    let mut r = rng(spec.seed, stream::FBM, 0);
    let mut y: Vec<Complex64> = c
        .iter()
        .map(|lam| {
            let a: f64 = StandardNormal.sample(&mut r);
            let b: f64 = StandardNormal.sample(&mut r);
            Complex64::new(a, b) * (lam.re.max(0.0) / m as f64).sqrt()
        })
        .collect();
    plan(m, false).process(&mut y);
    let mut values = Vec::with_capacity(n);
    let mut acc = 0.0;
    for inc in y.iter().take(n) {
        values.push(acc);
        acc += inc.re;
    }
    RealField::new(*g, values)
}

/// Calibration `(A², b)`: `Var B(x) = A²·S₁(x) + b|x|²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevyCalibration {
    pub amplitude2: f64,
    pub linear_var: f64,
}

/// Radii at which the Lévy variogram is matched exactly.
pub const LEVY_CALIBRATION_RADII: [f64; 2] = [0.125, 0.375];

fn levy_exponent(hurst: f64, d: usize) -> f64 {
    -(2.0 * hurst + d as f64)
}

/// `Σ_{k≠0} |ξ_k|^{−(2H+d)} · 2(1 − cos(ξ_k·x))` for `x = (r, 0, …)`.
fn unit_variogram(g: &Grid, hurst: f64, r: f64) -> f64 {
    let e = levy_exponent(hurst, g.d());
    (1..g.len())
        .map(|flat| {
            let xi = g.frequency_vec(flat);
            norm_sq(&xi[..g.d()]).powf(e / 2.0) * 2.0 * (1.0 - (xi[0] * r).cos())
        })
        .sum()
}

/// Exact-expectation calibration of the spectral amplitude and the linear
/// compensator, cached per `(H, grid)`.
pub fn levy_calibration(hurst: f64, g: &Grid) -> LevyCalibration {
    type Key = (u64, usize, usize, u64);
    static CACHE: OnceLock<Mutex<HashMap<Key, LevyCalibration>>> = OnceLock::new();
    let key = (hurst.to_bits(), g.d(), g.n(), g.side().to_bits());
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return *c;
    }
    let [r1, r2] = LEVY_CALIBRATION_RADII;
    let (s1, s2) = (unit_variogram(g, hurst, r1), unit_variogram(g, hurst, r2));
    let (t1, t2) = (r1.powf(2.0 * hurst), r2.powf(2.0 * hurst));
    // A² s_i + b r_i² = t_i
    let det = s1 * r2 * r2 - s2 * r1 * r1;
    let a2 = (t1 * r2 * r2 - t2 * r1 * r1) / det;
    let b = (s1 * t2 - s2 * t1) / det;
    let cal = if b >= 0.0 && a2 > 0.0 {
        LevyCalibration {
            amplitude2: a2,
            linear_var: b,
        }
    } else {
        let r: f64 = 0.25;
        LevyCalibration {
            amplitude2: r.powf(2.0 * hurst) / unit_variogram(g, hurst, r),
            linear_var: 0.0,
        }
    };
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(key, cal);
    cal
}

/// Expected `Var B(x)` of [`synthesize_levy_fbm`] at `x = (r, 0, …)`.
pub fn levy_model_variance(hurst: f64, g: &Grid, r: f64) -> f64 {
    let cal = levy_calibration(hurst, g);
    cal.amplitude2 * unit_variogram(g, hurst, r) + cal.linear_var * r * r
}

/// Approximate isotropic fBm: Gaussian coefficients with variance
/// `∝ |ξ|^{−(2H+d)}` plus a random linear term `G·x`, pinned at the origin.
pub fn synthesize_levy_fbm(spec: &NoiseSpec, g: &Grid) -> Result<RealField> {
    spec.validate()?;
    let cal = levy_calibration(spec.hurst, g);
    let e = levy_exponent(spec.hurst, g.d());
    let amp = cal.amplitude2.sqrt();
    let mut c = SpectralCoeffs::zeros(*g);
    fill_hermitian(&mut c, spec.seed, stream::LEVY, |xi| {
        let r2 = norm_sq(xi);
        if r2 == 0.0 {
            0.0
        } else {
            amp * r2.powf(e / 4.0)
        }
    });
    let mut f = inverse_real_part(&c);
    let mut r = rng(spec.seed, stream::LEVY, u64::MAX);
    let slope: Vec<f64> = (0..g.d())
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut r);
            z * cal.linear_var.sqrt()
        })
        .collect();
    let origin = f.values()[0];
    for (flat, v) in f.values_mut().iter_mut().enumerate() {
        let idx = g.unravel(flat);
        let lin: f64 = (0..g.d()).map(|a| slope[a] * g.coord(idx[a])).sum();
        *v = *v - origin + lin;
    }
    Ok(f)
}

/// One term `coef · sin(ξ·x + phase)` of the smooth test drift.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothMode {
    pub k: [i64; 2],
    pub xi: [f64; 2],
    pub coef: f64,
    pub phase: f64,
}

/// Amplitude scale of the smooth test drift.
pub const SMOOTH_TEST_AMPLITUDE: f64 = 0.2;

/// Modes with `max|k_i| ≤ band`, one per `±k` pair, coefficient
/// `±0.2/|k|²` with seeded sign and a deterministic phase.
pub fn smooth_test_modes(spec: &NoiseSpec, g: &Grid) -> Vec<SmoothMode> {
    let b = spec.band as i64;
    let mut r = rng(spec.seed, stream::SMOOTH_TEST, 0);
    let mut modes = Vec::new();
    let k1_range = if g.d() == 2 { -b..=b } else { 0..=0 };
    for k0 in 0..=b {
        for k1 in k1_range.clone() {
            if k0 == 0 && k1 <= 0 {
                continue;
            }
            let k = [k0, k1];
            let kk = (k0 * k0 + k1 * k1) as f64;
            let sign = if r.random::<bool>() { 1.0 } else { -1.0 };
            let w = 2.0 * PI / g.side();
            modes.push(SmoothMode {
                k,
                xi: [w * k0 as f64, w * k1 as f64],
                coef: sign * SMOOTH_TEST_AMPLITUDE / kk,
                phase: 0.7 * k0 as f64 + 1.3 * k1 as f64,
            });
        }
    }
    modes
}

/// Band-limited drift `Σ coef·sin(ξ·x + phase)`; `band = 0` gives zero.
pub fn synthesize_smooth_test(spec: &NoiseSpec, g: &Grid) -> Result<RealField> {
    if 2 * spec.band >= g.n() {
        return Err(invalid("band", format!("{} must be below N/2", spec.band)));
    }
    let modes = smooth_test_modes(spec, g);
    Ok(RealField::from_fn(*g, |x| {
        modes
            .iter()
            .map(|m| {
                let arg: f64 = x.iter().zip(&m.xi).map(|(a, b)| a * b).sum();
                m.coef * (arg + m.phase).sin()
            })
            .sum()
    }))
}

/// Dispatches on `spec.kind`.
pub fn synthesize(spec: &NoiseSpec, g: &Grid) -> Result<RealField> {
    match spec.kind {
        NoiseKind::Fbm1dExact => synthesize_fbm_1d(spec, g),
        NoiseKind::LevySpectral => synthesize_levy_fbm(spec, g),
        NoiseKind::SmoothTest => synthesize_smooth_test(spec, g),
    }
}

/// `Z = ψ·B`.
pub fn make_noise_z(b: &RealField, psi: &RealField) -> Result<RealField> {
    b.mul(psi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegularityClass {
    Regular,
    Irregular,
}

/// Drift threshold separating the two classes.
pub const REGULARITY_DRIFT: f64 = 0.15;

#[derive(Clone, Debug, PartialEq)]
pub struct RegularityReport {
    pub order: f64,
    pub q: f64,
    pub norm_fine: f64,
    pub norm_coarse: f64,
    pub drift: f64,
    pub class: RegularityClass,
}

impl RegularityReport {
    pub fn to_bound_report(&self) -> BoundReport {
        BoundReport::new(
            "regularity_drift",
            self.drift,
            0.0,
            REGULARITY_DRIFT,
            crate::report::Check::AtMost,
        )
        .with_param("order", self.order)
        .with_param("q", self.q)
        .with_param("norm_fine", self.norm_fine)
        .with_param("norm_coarse", self.norm_coarse)
    }
}

/// `‖Z‖_{H_q^{order}}` at the working resolution and with the spectrum cut
/// to the half-resolution band `|k_i| < N/4`; relative growth below 15% is
/// "regular".
pub fn sobolev_regularity_report(z: &RealField, order: f64, q: f64) -> Result<RegularityReport> {
    if !(q >= 2.0 && q.is_finite()) {
        return Err(invalid("q", format!("{q} must be finite and >= 2")));
    }
    let g = *z.grid();
    let c = dft_forward(z);
    let fine = lp_norm(&inverse_real_part(&bessel(&c, order)), q);
    let quarter = (g.n() / 4) as i64;
    let mut coarse_c = c.clone();
    for (flat, v) in coarse_c.coeffs_mut().iter_mut().enumerate() {
        let idx = g.unravel(flat);
        if (0..g.d()).any(|a| g.wavenumber(idx[a]).abs() >= quarter) {
            *v = Complex64::default();
        }
    }
    let coarse = lp_norm(&inverse_real_part(&bessel(&coarse_c, order)), q);
    let drift = if coarse < crate::spectral::REL_FLOOR {
        fine - coarse
    } else {
        (fine - coarse) / coarse
    };
    Ok(RegularityReport {
        order,
        q,
        norm_fine: fine,
        norm_coarse: coarse,
        drift,
        class: if drift < REGULARITY_DRIFT {
            RegularityClass::Regular
        } else {
            RegularityClass::Irregular
        },
    })
}

fn bessel(c: &SpectralCoeffs, s: f64) -> SpectralCoeffs {
    apply_real_symbol(c, |xi| (1.0 + norm_sq(xi)).powf(s / 2.0))
}

/// One row of a covariance study.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovarianceRow {
    pub x: f64,
    pub y: f64,
    pub empirical: f64,
    pub formula: f64,
    pub stderr: f64,
}

impl CovarianceRow {
    pub fn within(&self, sigmas: f64) -> bool {
        (self.empirical - self.formula).abs() <= sigmas * self.stderr
    }
}

/// `½(|x|^{2H} + |y|^{2H} − |x−y|^{2H})`.
pub fn fbm_covariance(hurst: f64, x: f64, y: f64) -> f64 {
    let e = 2.0 * hurst;
    0.5 * (x.abs().powf(e) + y.abs().powf(e) - (x - y).abs().powf(e))
}

/// Monte-Carlo `E[B(x)B(y)]` over `samples` seeds derived from `spec.seed`,
/// for node pairs along axis 0.
pub fn covariance_study(
    spec: &NoiseSpec,
    g: &Grid,
    pairs: &[(f64, f64)],
    samples: usize,
) -> Result<Vec<CovarianceRow>> {
    let h = g.spacing();
    let node = |x: f64| -> Result<usize> {
        let i = (x / h).round();
        if (x / h - i).abs() > 1e-9 || i < 0.0 || i as usize >= g.n() {
            return Err(invalid("x", format!("{x} is not a grid node")));
        }
        Ok(g.ravel([i as usize, 0]))
    };
    let idx: Vec<(usize, usize)> = pairs
        .iter()
        .map(|&(x, y)| Ok((node(x)?, node(y)?)))
        .collect::<Result<_>>()?;
    let draws: Vec<Vec<f64>> = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let mut sp = *spec;
            sp.seed = crate::rng::derive_seed(spec.seed, stream::SAMPLE, s);
            let b = synthesize(&sp, g)?;
            Ok(idx
                .iter()
                .map(|&(i, j)| b.values()[i] * b.values()[j])
                .collect())
        })
        .collect::<Result<_>>()?;
    let n = samples as f64;
    Ok(pairs
        .iter()
        .enumerate()
        .map(|(p, &(x, y))| {
            let mean = draws.iter().map(|d| d[p]).sum::<f64>() / n;
            let var = draws.iter().map(|d| (d[p] - mean).powi(2)).sum::<f64>() / (n - 1.0);
            CovarianceRow {
                x,
                y,
                empirical: mean,
                formula: fbm_covariance(spec.hurst, x, y),
                stderr: (var / n).sqrt(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fbm_is_pinned_and_deterministic() {
        let g = Grid::centered(1, 128).unwrap();
        let spec = NoiseSpec::new(0.7, 3, NoiseKind::Fbm1dExact, 0).unwrap();
        let b = synthesize_fbm_1d(&spec, &g).unwrap();
        assert_eq!(b.values()[0], 0.0);
        assert_eq!(b, synthesize_fbm_1d(&spec, &g).unwrap());
        assert!(synthesize_fbm_1d(&spec, &Grid::centered(2, 32).unwrap()).is_err());
    }

    #[test]
    fn levy_is_pinned() {
        let g = Grid::centered(2, 32).unwrap();
        let spec = NoiseSpec::new(0.8, 5, NoiseKind::LevySpectral, 0).unwrap();
        let b = synthesize_levy_fbm(&spec, &g).unwrap();
        assert_eq!(b.values()[0], 0.0);
    }

    #[test]
    fn levy_model_matches_target_shape() {
        for (d, hurst, tol) in [(1, 0.9, 0.01), (2, 0.7, 0.01)] {
            let g = Grid::centered(d, 256).unwrap();
            for r in [0.125, 0.25, 0.375] {
                let v = levy_model_variance(hurst, &g, r);
                let want = r.powf(2.0 * hurst);
                assert!((v / want - 1.0).abs() < tol, "d={d} r={r} {v} {want}");
            }
        }
    }

    #[test]
    fn rejects_hurst_outside_unit_interval() {
        assert!(NoiseSpec::new(1.0, 0, NoiseKind::Fbm1dExact, 0).is_err());
        assert!(NoiseSpec::new(0.0, 0, NoiseKind::Fbm1dExact, 0).is_err());
        let spec = NoiseSpec::new(0.7, 0, NoiseKind::Fbm1dExact, 0).unwrap();
        assert!(spec.validate_for_solver(0.2).is_err());
        assert!(spec.validate_for_solver(0.4).is_ok());
    }

    #[test]
    fn smooth_test_band_zero_is_zero() {
        let g = Grid::centered(2, 32).unwrap();
        let spec = NoiseSpec::new(0.9, 1, NoiseKind::SmoothTest, 0).unwrap();
        assert_eq!(synthesize_smooth_test(&spec, &g).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn smooth_test_is_band_limited() {
        let g = Grid::centered(2, 32).unwrap();
        let spec = NoiseSpec::new(0.9, 1, NoiseKind::SmoothTest, 3).unwrap();
        let z = synthesize_smooth_test(&spec, &g).unwrap();
        let c = dft_forward(&z);
        let mut above = 0.0;
        for (flat, v) in c.coeffs().iter().enumerate() {
            let idx = g.unravel(flat);
            if g.wavenumber(idx[0]).abs() > 3 || g.wavenumber(idx[1]).abs() > 3 {
                above += v.norm_sqr();
            }
        }
        assert!(above < 1e-28);
        assert!(z.max_abs() > 0.0);
    }

    #[test]
    fn smooth_regularity_is_regular() {
        let g = Grid::centered(1, 256).unwrap();
        let spec = NoiseSpec::new(0.9, 1, NoiseKind::SmoothTest, 4).unwrap();
        let z = synthesize_smooth_test(&spec, &g).unwrap();
        let r = sobolev_regularity_report(&z, 0.8, 4.0).unwrap();
        assert_eq!(r.class, RegularityClass::Regular);
        assert!(r.drift.abs() < 0.01);
    }
}
