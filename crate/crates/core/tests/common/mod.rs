//! Test-side oracles built from direct trigonometric sums, independent of
//! the FFT-based transforms and the product-integration scheme.

#![allow(dead_code)]

use ftlab_core::noise::{make_noise_z, smooth_test_modes, synthesize_fbm_1d, SmoothMode};
use ftlab_core::spectral::build_cutoff;
use ftlab_core::{Grid, NoiseKind, NoiseSpec, RealField};
use std::f64::consts::PI;

/// `ψ·B^H` from exact 1-d fBm.
pub fn fbm_noise(n: usize, hurst: f64, seed: u64) -> (Grid, RealField) {
    let g = Grid::centered(1, n).unwrap();
    let spec = NoiseSpec::new(hurst, seed, NoiseKind::Fbm1dExact, 0).unwrap();
    let b = synthesize_fbm_1d(&spec, &g).unwrap();
    (g, make_noise_z(&b, &build_cutoff(&g)).unwrap())
}

/// Sine basis on `D` evaluated by O(M²) direct sums.
pub struct DirectSine {
    pub d: usize,
    pub m: usize,
    pub h: f64,
    pub a: [f64; 2],
    pub ell: f64,
}

impl DirectSine {
    pub fn new(g: &Grid) -> Self {
        let off = g.domain_offset();
        Self {
            d: g.d(),
            m: (g.domain_side() / g.spacing()).round() as usize - 1,
            h: g.spacing(),
            a: [off[0], if g.d() == 2 { off[1] } else { 0.0 }],
            ell: g.domain_side(),
        }
    }

    pub fn len(&self) -> usize {
        self.m.pow(self.d as u32)
    }

    pub fn eigenvalue(&self, flat: usize) -> f64 {
        self.modes(flat)
            .iter()
            .take(self.d)
            .map(|&k| (k as f64 * PI / self.ell).powi(2))
            .sum()
    }

    /// 1-based mode numbers of a flat coefficient index.
    pub fn modes(&self, flat: usize) -> [usize; 2] {
        if self.d == 1 {
            [flat + 1, 0]
        } else {
            [flat / self.m + 1, flat % self.m + 1]
        }
    }

    /// Interior node coordinates in the same flat order as the modes.
    pub fn node(&self, flat: usize) -> [f64; 2] {
        let [i, j] = self.modes(flat);
        [self.a[0] + i as f64 * self.h, self.a[1] + j as f64 * self.h]
    }

    fn e(&self, k: usize, x: f64, axis: usize) -> f64 {
        (2.0 / self.ell).sqrt() * (k as f64 * PI * (x - self.a[axis]) / self.ell).sin()
    }

    fn de(&self, k: usize, x: f64, axis: usize) -> f64 {
        let w = k as f64 * PI / self.ell;
        (2.0 / self.ell).sqrt() * w * (w * (x - self.a[axis])).cos()
    }

    pub fn value(&self, c: &[f64], x: [f64; 2]) -> f64 {
        (0..self.len())
            .map(|f| {
                let k = self.modes(f);
                let mut v = c[f] * self.e(k[0], x[0], 0);
                if self.d == 2 {
                    v *= self.e(k[1], x[1], 1);
                }
                v
            })
            .sum()
    }

    pub fn gradient(&self, c: &[f64], x: [f64; 2]) -> [f64; 2] {
        let mut out = [0.0; 2];
        for (f, &cf) in c.iter().enumerate().take(self.len()) {
            let k = self.modes(f);
            if self.d == 1 {
                out[0] += cf * self.de(k[0], x[0], 0);
            } else {
                out[0] += cf * self.de(k[0], x[0], 0) * self.e(k[1], x[1], 1);
                out[1] += cf * self.e(k[0], x[0], 0) * self.de(k[1], x[1], 1);
            }
        }
        out
    }

    /// `h^d Σ_nodes f(x) e_k(x)` over the interior nodes.
    pub fn analysis(&self, vals: &[f64]) -> Vec<f64> {
        let w = self.h.powi(self.d as i32);
        (0..self.len())
            .map(|f| {
                let k = self.modes(f);
                w * (0..self.len())
                    .map(|n| {
                        let x = self.node(n);
                        let mut b = self.e(k[0], x[0], 0);
                        if self.d == 2 {
                            b *= self.e(k[1], x[1], 1);
                        }
                        vals[n] * b
                    })
                    .sum::<f64>()
            })
            .collect()
    }
}

/// Analytic `∇Z` of the smooth test drift.
pub fn smooth_gradient(modes: &[SmoothMode], x: [f64; 2]) -> [f64; 2] {
    let mut out = [0.0; 2];
    for m in modes {
        let c = (m.xi[0] * x[0] + m.xi[1] * x[1] + m.phase).cos();
        out[0] += m.coef * m.xi[0] * c;
        out[1] += m.coef * m.xi[1] * c;
    }
    out
}

pub fn smooth_modes(g: &Grid, band: usize, seed: u64) -> Vec<SmoothMode> {
    smooth_test_modes(
        &NoiseSpec::new(0.5, seed, NoiseKind::SmoothTest, band).unwrap(),
        g,
    )
}

/// `φ1(z) = (e^z − 1)/z` and `φ2(z) = (e^z − 1 − z)/z²` for `z ≤ 0`.
fn phi(z: f64) -> (f64, f64) {
    if z.abs() < 0.1 {
        let (mut p1, mut p2) = (0.0, 0.0);
        let mut term = 1.0; // z^n / n!
        for n in 0..25 {
            p1 += term / (n + 1) as f64;
            p2 += term / ((n + 1) * (n + 2)) as f64;
            term *= z / (n + 1) as f64;
        }
        (p1, p2)
    } else {
        (z.exp_m1() / z, (z.exp_m1() - z) / (z * z))
    }
}

/// Cox–Matthews ETD2RK for `c' = −σ²Λc + Π⟨∇u, ∇Z⟩` with the drift
/// gradient evaluated analytically at the interior nodes. Returns the
/// coefficients after every step.
pub fn etd2rk(
    basis: &DirectSine,
    grad_z: &dyn Fn([f64; 2]) -> [f64; 2],
    sigma2: f64,
    u0: &[f64],
    t_final: f64,
    steps: usize,
) -> Vec<Vec<f64>> {
    let dt = t_final / steps as f64;
    let gz: Vec<[f64; 2]> = (0..basis.len()).map(|n| grad_z(basis.node(n))).collect();
    let forcing = |c: &[f64]| -> Vec<f64> {
        let vals: Vec<f64> = (0..basis.len())
            .map(|n| {
                let gu = basis.gradient(c, basis.node(n));
                gu[0] * gz[n][0] + gu[1] * gz[n][1]
            })
            .collect();
        basis.analysis(&vals)
    };
    let coef: Vec<(f64, f64, f64)> = (0..basis.len())
        .map(|f| {
            let z = -sigma2 * basis.eigenvalue(f) * dt;
            let (p1, p2) = phi(z);
            (z.exp(), p1, p2)
        })
        .collect();
    let mut c = u0.to_vec();
    let mut out = vec![c.clone()];
    for _ in 0..steps {
        let n0 = forcing(&c);
        let a: Vec<f64> = (0..c.len())
            .map(|k| coef[k].0 * c[k] + dt * coef[k].1 * n0[k])
            .collect();
        let n1 = forcing(&a);
        c = (0..c.len())
            .map(|k| a[k] + dt * coef[k].2 * (n1[k] - n0[k]))
            .collect();
        out.push(c.clone());
    }
    out
}

pub fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `max_m ‖a_m − b_m‖ / max_m ‖b_m‖`.
pub fn relative_sup_l2(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let num = a
        .iter()
        .zip(b)
        .map(|(x, y)| l2(&x.iter().zip(y).map(|(p, q)| p - q).collect::<Vec<_>>()))
        .fold(0.0, f64::max);
    let den = b.iter().map(|y| l2(y)).fold(0.0, f64::max);
    num / den
}

/// Closed-form fBm covariance.
pub fn fbm_cov(h: f64, x: f64, y: f64) -> f64 {
    0.5 * (x.abs().powf(2.0 * h) + y.abs().powf(2.0 * h) - (x - y).abs().powf(2.0 * h))
}
