//! Bessel-potential norms, tilde norms, the Besov increment norm, random test
//! fields of prescribed regularity and the empirical Hölder exponent.

use crate::error::{invalid, Result};
use crate::field::{RealField, SpectralCoeffs};
use crate::grid::Grid;
use crate::rng::{rng, stream, wavenumber_key};
use crate::spectral::{bessel_potential, dft_forward, inverse_real_part, norm_sq, REL_FLOOR};
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

/// Smoothness `s` and integrability `p` of `H^s_p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SobolevIndex {
    pub s: f64,
    pub p: f64,
}

impl SobolevIndex {
    pub fn new(s: f64, p: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(invalid("s", "must be finite"));
        }
        if !(p.is_finite() && p >= 2.0) {
            return Err(invalid("p", format!("{p} must be finite and >= 2")));
        }
        Ok(Self { s, p })
    }

    pub fn l2(s: f64) -> Self {
        Self { s, p: 2.0 }
    }
}

/// Grid `L_p` norm `(h^d Σ|f|^p)^{1/p}`.
pub fn lp_norm(f: &RealField, p: f64) -> f64 {
    let w = f.grid().cell_volume();
    if p == 2.0 {
        return (w * f.values().iter().map(|v| v * v).sum::<f64>()).sqrt();
    }
    (w * f.values().iter().map(|v| v.abs().powf(p)).sum::<f64>()).powf(1.0 / p)
}

/// `‖J^s f‖_{L_p}` evaluated on the grid.
pub fn norm_hsp(f: &RealField, idx: SobolevIndex) -> Result<f64> {
    let idx = SobolevIndex::new(idx.s, idx.p)?;
    Ok(lp_norm(&bessel_potential(f, idx.s), idx.p))
}

/// `(L^d Σ (1+|ξ_k|²)^s |f̂_k|²)^{1/2}`.
pub fn norm_hs_coeffs(c: &SpectralCoeffs, s: f64) -> f64 {
    let g = c.grid();
    let vol = g.side().powi(g.d() as i32);
    let sum: f64 = c
        .coeffs()
        .iter()
        .enumerate()
        .map(|(flat, z)| {
            let xi = g.frequency_vec(flat);
            (1.0 + norm_sq(&xi[..g.d()])).powf(s) * z.norm_sqr()
        })
        .sum();
    (vol * sum).sqrt()
}

/// `H^s_2` norm through the coefficient formula.
pub fn norm_hs(f: &RealField, s: f64) -> f64 {
    norm_hs_coeffs(&dft_forward(f), s)
}

/// Ambient norm together with the fraction of squared `L₂` mass outside `D̄`.
pub fn tilde_norm(f: &RealField, idx: SobolevIndex) -> Result<(f64, f64)> {
    if idx.s <= -0.5 {
        return Err(invalid(
            "s",
            format!("{} is outside the tilde-space range s > -1/2", idx.s),
        ));
    }
    let norm = norm_hsp(f, idx)?;
    let g = f.grid();
    let (mut outside, mut total) = (0.0, 0.0);
    for (flat, v) in f.values().iter().enumerate() {
        let m = v * v;
        total += m;
        if !g.in_closed_domain(flat) {
            outside += m;
        }
    }
    let w = g.cell_volume();
    let defect = if total * w < REL_FLOOR * REL_FLOOR {
        outside * w
    } else {
        outside / total
    };
    Ok((norm, defect))
}

/// `‖f‖_{L_p} + (Σ_{0<|y|≤1} h^d ‖f(·+y) − f‖²_{L_p} / |y|^{d+2α'})^{1/2}`
/// over lattice shifts `y`, acting periodically.
pub fn besov_increment_norm(f: &RealField, alpha_prime: f64, p: f64) -> Result<f64> {
    if !(alpha_prime > 0.0 && alpha_prime < 1.0) {
        return Err(invalid(
            "alpha_prime",
            format!("{alpha_prime} not in (0, 1)"),
        ));
    }
    if !(p.is_finite() && p >= 1.0) {
        return Err(invalid("p", format!("{p} must be finite and >= 1")));
    }
    let g = *f.grid();
    let h = g.spacing();
    let n = g.n() as i64;
    let reach = (1.0 / h).floor() as i64;
    let reach = reach.min(n / 2);
    let shifts: Vec<[i64; 2]> = match g.d() {
        1 => (-reach..=reach)
            .filter(|&i| i != 0)
            .map(|i| [i, 0])
            .collect(),
        _ => (-reach..=reach)
            .flat_map(|i| (-reach..=reach).map(move |j| [i, j]))
            .filter(|&[i, j]| (i, j) != (0, 0) && ((i * i + j * j) as f64) * h * h <= 1.0 + 1e-12)
            .collect(),
    };
    let d = g.d() as f64;
    let vals = f.values();
    let n = g.n();
    let terms: Vec<f64> = shifts
        .par_iter()
        .map(|&s| {
            let mut acc = 0.0;
            for flat in 0..vals.len() {
                let idx = g.unravel(flat);
                let j0 = (idx[0] as i64 + s[0]).rem_euclid(n as i64) as usize;
                let j1 = (idx[1] as i64 + s[1]).rem_euclid(n as i64) as usize;
                let other = if g.d() == 1 { j0 } else { j0 * n + j1 };
                acc += (vals[other] - vals[flat]).abs().powf(p);
            }
            let inc = (g.cell_volume() * acc).powf(1.0 / p);
            let r = (((s[0] * s[0] + s[1] * s[1]) as f64).sqrt()) * h;
            g.cell_volume() * inc * inc / r.powf(d + 2.0 * alpha_prime)
        })
        .collect();
    let increment: f64 = terms.iter().sum();
    Ok(lp_norm(f, p) + increment.sqrt())
}

/// Regularity gap above `s` of [`random_field_with_regularity`].
pub const RANDOM_FIELD_EPS: f64 = 0.05;

/// Standard deviation of the coefficient at `ξ` for a field of order `s`.
pub fn random_field_std(xi2: f64, s: f64, d: usize) -> f64 {
    (1.0 + xi2).powf(-(s + d as f64 / 2.0 + RANDOM_FIELD_EPS) / 2.0)
}

/// Gaussian field with coefficient standard deviation
/// `(1+|ξ|²)^{−(s+d/2+ε)/2}`, `ε = 0.05`.
///
/// Each frequency draws from its own keyed stream, so refining the grid keeps
/// the coefficients of the shared frequencies.
pub fn random_field_with_regularity(g: &Grid, s: f64, seed: u64) -> RealField {
    let mut c = SpectralCoeffs::zeros(*g);
    fill_hermitian(&mut c, seed, stream::FIELD, |xi| {
        random_field_std(norm_sq(xi), s, g.d())
    });
    inverse_real_part(&c)
}

/// Fills Hermitian Gaussian coefficients with `E|c_k|² = std(ξ)²`.
/// Self-conjugate slots get a real draw.
pub(crate) fn fill_hermitian(
    c: &mut SpectralCoeffs,
    seed: u64,
    stream: u64,
    std: impl Fn(&[f64]) -> f64,
) {
    let g = *c.grid();
    for flat in 0..g.len() {
        let j = c.conjugate_index(flat);
        if j < flat {
            continue;
        }
        let idx = g.unravel(flat);
        let k = [
            g.wavenumber(idx[0]),
            if g.d() == 2 { g.wavenumber(idx[1]) } else { 0 },
        ];
        let xi = g.frequency_vec(flat);
        let sigma = std(&xi[..g.d()]);
        let mut r = rng(seed, stream, wavenumber_key(k));
        let a: f64 = StandardNormal.sample(&mut r);
        if j == flat {
            c.coeffs_mut()[flat] = Complex64::new(sigma * a, 0.0);
        } else {
            let b: f64 = StandardNormal.sample(&mut r);
            let z = Complex64::new(a, b) * (sigma / std::f64::consts::SQRT_2);
            c.coeffs_mut()[flat] = z;
            c.coeffs_mut()[j] = z.conj();
        }
    }
}

/// Result of [`holder_exponent_estimate`].
#[derive(Clone, Debug, PartialEq)]
pub struct HolderEstimate {
    pub exponent: f64,
    /// Set when some lag shows no increment at all (constant field).
    pub degenerate: bool,
    pub lags: Vec<f64>,
    pub sup_increments: Vec<f64>,
}

/// Least-squares slope of `log sup |f(x+h e_a) − f(x)|` against `log h` over
/// dyadic lags `2L/N ≤ h ≤ L/8`, pairs taken along the axes without wrapping.
/// Clamped to `[0, 1]`.
pub fn holder_exponent_estimate(f: &RealField) -> HolderEstimate {
    let g = *f.grid();
    let n = g.n();
    let vals = f.values();
    let mut lags = Vec::new();
    let mut sups = Vec::new();
    let mut step = 2;
    while step <= n / 8 {
        let mut sup: f64 = 0.0;
        for flat in 0..vals.len() {
            let idx = g.unravel(flat);
            for axis in 0..g.d() {
                if idx[axis] + step < n {
                    let mut jdx = idx;
                    jdx[axis] += step;
                    sup = sup.max((vals[g.ravel(jdx)] - vals[flat]).abs());
                }
            }
        }
        lags.push(step as f64 * g.spacing());
        sups.push(sup);
        step *= 2;
    }
    let scale = sups.iter().cloned().fold(0.0, f64::max);
    if sups.iter().any(|&s| s <= 1e-14 * scale.max(1e-300)) || scale == 0.0 {
        return HolderEstimate {
            exponent: 1.0,
            degenerate: true,
            lags,
            sup_increments: sups,
        };
    }
    let xs: Vec<f64> = lags.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = sups.iter().map(|v| v.ln()).collect();
    let slope = least_squares_slope(&xs, &ys);
    HolderEstimate {
        exponent: slope.clamp(0.0, 1.0),
        degenerate: false,
        lags,
        sup_increments: sups,
    }
}

pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
