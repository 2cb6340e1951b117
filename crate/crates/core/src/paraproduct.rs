//! Products of a function and a distribution as limits of products of smooth
//! frequency truncations, `fg = lim_j S^j f · S^j g`, and the transport
//! nonlinearity `⟨∇u, ∇Z⟩` built on them.

use crate::dirichlet::{DirichletLaplacian, SineCoeffs};
use crate::error::{invalid, Error, Result};
use crate::fft::fft_nd;
use crate::field::{RealField, SpectralCoeffs};
use crate::grid::Grid;
use crate::sobolev::{lp_norm, norm_hs, SobolevIndex};
use crate::spectral::{
    apply_real_symbol, bessel_potential, derivative_coeffs, dft_forward, inverse_real_part,
    norm_sq, restrict_to_domain, smooth_step, REL_FLOOR,
};
use num_complex::Complex64;

/// First truncation level.
pub const J0: i32 = 2;

/// Radial profile: 1 on `r ≤ 1`, 0 on `r ≥ 3/2`.
pub fn truncation_profile(r: f64) -> f64 {
    1.0 - smooth_step((r - 1.0) / 0.5)
}

/// Smallest level `j > J0` at which `S^j` is the identity on the grid.
pub fn saturation_level(g: &Grid) -> i32 {
    let j = g.max_frequency().log2().ceil() as i32;
    j.max(J0 + 1)
}

pub(crate) fn truncate_coeffs(c: &SpectralCoeffs, j: i32) -> SpectralCoeffs {
    let scale = 2f64.powi(-j);
    apply_real_symbol(c, |xi| truncation_profile(norm_sq(xi).sqrt() * scale))
}

/// `S^j f = (ψ(ξ/2^j) f̂)^∨`.
pub fn smooth_truncate(f: &RealField, j: i32) -> RealField {
    inverse_real_part(&truncate_coeffs(&dft_forward(f), j))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductOptions {
    /// Absolute tolerance on successive differences in `H^{−β_probe}`.
    pub tol: f64,
    pub beta_probe: f64,
    /// Form pointwise products on a 3/2-padded grid.
    pub dealias: bool,
}

impl Default for ProductOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            beta_probe: 0.2,
            dealias: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductReport {
    pub value: RealField,
    pub j_used: i32,
    /// Last successive difference `‖Π_j − Π_{j−1}‖_{−β_probe}`.
    pub tail: f64,
    pub converged: bool,
    /// `S^{j_used}` is the identity, so `value` is the plain grid product.
    pub saturated: bool,
    /// All successive differences, starting at `j = J0 + 1`.
    pub tails: Vec<f64>,
}

/// Relative mass outside `D̄` tolerated before a truncation level of the
/// transport product is accepted.
pub const LEAKAGE_TOL: f64 = 1e-3;

fn iterate_levels(
    g: &Grid,
    opts: &ProductOptions,
    mut product_at: impl FnMut(i32) -> RealField,
    accept: impl Fn(&RealField) -> bool,
) -> ProductReport {
    let j_max = saturation_level(g);
    let mut prev = product_at(J0);
    let mut tails = Vec::new();
    for j in (J0 + 1)..=j_max {
        let cur = product_at(j);
        let tail = norm_hs(&cur.sub(&prev).expect("same grid"), -opts.beta_probe);
        tails.push(tail);
        prev = cur;
        if tail < opts.tol && accept(&prev) {
            return ProductReport {
                value: prev,
                j_used: j,
                tail,
                converged: true,
                saturated: j == j_max,
                tails,
            };
        }
    }
    ProductReport {
        value: prev,
        j_used: j_max,
        tail: *tails.last().unwrap_or(&0.0),
        converged: false,
        saturated: true,
        tails,
    }
}

/// Pointwise product of two real fields given by their coefficients, formed
/// on a grid padded by 3/2 and truncated back. Nyquist slots are dropped.
fn padded_product(a: &SpectralCoeffs, b: &SpectralCoeffs) -> RealField {
    let g = *a.grid();
    let n = g.n();
    let d = g.d();
    let p = 3 * n / 2;
    let plen = p.pow(d as u32);
    let slot = |i: usize| -> Option<usize> {
        let k = g.wavenumber(i);
        if g.is_nyquist(i) {
            None
        } else {
            Some(k.rem_euclid(p as i64) as usize)
        }
    };
    let place = |c: &SpectralCoeffs| -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); plen];
        for (flat, z) in c.coeffs().iter().enumerate() {
            let idx = g.unravel(flat);
            let s0 = slot(idx[0]);
            let s1 = if d == 2 { slot(idx[1]) } else { Some(0) };
            if let (Some(s0), Some(s1)) = (s0, s1) {
                out[if d == 1 { s0 } else { s0 * p + s1 }] = *z;
            }
        }
        fft_nd(&mut out, p, d, true);
        out
    };
    let pa = place(a);
    let pb = place(b);
    let mut prod: Vec<Complex64> = pa
        .iter()
        .zip(&pb)
        .map(|(x, y)| Complex64::new(x.re * y.re, 0.0))
        .collect();
    fft_nd(&mut prod, p, d, false);
    let scale = 1.0 / plen as f64;
    let mut c = SpectralCoeffs::zeros(g);
    for flat in 0..g.len() {
        let idx = g.unravel(flat);
        let s0 = slot(idx[0]);
        let s1 = if d == 2 { slot(idx[1]) } else { Some(0) };
        if let (Some(s0), Some(s1)) = (s0, s1) {
            c.coeffs_mut()[flat] = prod[if d == 1 { s0 } else { s0 * p + s1 }] * scale;
        }
    }
    inverse_real_part(&c)
}

fn level_product(fc: &SpectralCoeffs, gc: &SpectralCoeffs, j: i32, dealias: bool) -> RealField {
    let ft = truncate_coeffs(fc, j);
    let gt = truncate_coeffs(gc, j);
    if dealias {
        padded_product(&ft, &gt)
    } else {
        inverse_real_part(&ft)
            .mul(&inverse_real_part(&gt))
            .expect("same grid")
    }
}

/// `lim_j S^j f · S^j g`, iterated from `j = 2` until the successive
/// difference in `H^{−β_probe}` drops below `tol` or the truncation saturates.
pub fn paraproduct_product(
    f: &RealField,
    g: &RealField,
    opts: &ProductOptions,
) -> Result<ProductReport> {
    f.grid().check_same(g.grid())?;
    let fc = dft_forward(f);
    let gc = dft_forward(g);
    Ok(iterate_levels(
        f.grid(),
        opts,
        |j| level_product(&fc, &gc, j, opts.dealias),
        |_| true,
    ))
}

/// `‖fg‖_{H_p^{−β}} / (‖f‖_{H_p^δ} ‖g‖_{H_q^{−β}})` with `fg` the saturated
/// grid product.
pub fn product_estimate_ratio(
    f: &RealField,
    g: &RealField,
    delta: f64,
    beta: f64,
    p: f64,
    q: f64,
) -> Result<f64> {
    if !(0.0 < beta && beta < delta) {
        return Err(invalid(
            "beta/delta",
            format!("need 0 < beta < delta, got {beta}, {delta}"),
        ));
    }
    SobolevIndex::new(0.0, p)?;
    let d = f.grid().d() as f64;
    if !(q > p.max(d / delta)) {
        return Err(invalid(
            "q",
            format!("{q} must exceed max(p, d/delta) = {}", p.max(d / delta)),
        ));
    }
    f.grid().check_same(g.grid())?;
    let nf = lp_norm(&bessel_potential(f, delta), p);
    let ng = lp_norm(&bessel_potential(g, -beta), q);
    if nf * ng < REL_FLOOR {
        return Err(Error::Degenerate("denominator below 1e-14".into()));
    }
    let opts = ProductOptions {
        tol: 0.0,
        beta_probe: beta,
        dealias: false,
    };
    let fg = paraproduct_product(f, g, &opts)?.value;
    Ok(lp_norm(&bessel_potential(&fg, -beta), p) / (nf * ng))
}

/// Output of [`TransportOperator::apply`].
#[derive(Clone, Debug)]
pub struct TransportOutput {
    pub value: SineCoeffs,
    pub report: ProductReport,
    pub leakage: f64,
}

/// `u ↦ ⟨∇u, ∇Z⟩` restricted to `D̄` and expanded in the sine basis, with the
/// truncations of `∇Z` cached per level.
#[derive(Clone, Debug)]
pub struct TransportOperator {
    lap: DirichletLaplacian,
    opts: ProductOptions,
    /// `dz[j − J0][axis]`: coefficients of `S^j ∂_axis Z`.
    dz: Vec<Vec<SpectralCoeffs>>,
    /// Same, as grid fields.
    dz_fields: Vec<Vec<RealField>>,
    zero_drift: bool,
}

impl TransportOperator {
    pub fn new(z: &RealField, lap: &DirichletLaplacian, opts: ProductOptions) -> Result<Self> {
        lap.grid().check_same(z.grid())?;
        let g = *z.grid();
        let zc = dft_forward(z);
        let grads: Vec<SpectralCoeffs> = (0..g.d()).map(|a| derivative_coeffs(&zc, a)).collect();
        let zero_drift = grads
            .iter()
            .all(|c| c.coeffs().iter().all(|z| z.norm() == 0.0));
        let mut dz = Vec::new();
        let mut dz_fields = Vec::new();
        for j in J0..=saturation_level(&g) {
            let lvl: Vec<SpectralCoeffs> = grads.iter().map(|c| truncate_coeffs(c, j)).collect();
            dz_fields.push(lvl.iter().map(inverse_real_part).collect());
            dz.push(lvl);
        }
        Ok(Self {
            lap: lap.clone(),
            opts,
            dz,
            dz_fields,
            zero_drift,
        })
    }

    pub fn laplacian(&self) -> &DirichletLaplacian {
        &self.lap
    }

    pub fn options(&self) -> &ProductOptions {
        &self.opts
    }

    pub fn is_zero_drift(&self) -> bool {
        self.zero_drift
    }

    /// `∇Z` as evaluated on the grid (the saturated level).
    pub fn drift_gradient(&self) -> &[RealField] {
        self.dz_fields.last().expect("at least one level")
    }

    /// A truncation level is accepted only once its product leaks less than
    /// [`LEAKAGE_TOL`] outside `D̄`; the saturated level does not leak.
    pub fn apply(&self, u: &SineCoeffs) -> Result<TransportOutput> {
        let g = *self.lap.grid();
        g.check_same(u.grid())?;
        let grad = self.lap.gradient_on_domain(u);
        let gu: Vec<SpectralCoeffs> = grad.components().iter().map(dft_forward).collect();
        let report = iterate_levels(
            &g,
            &self.opts,
            |j| {
                let lvl = (j - J0) as usize;
                let mut acc = RealField::zeros(g);
                for (axis, cu) in gu.iter().enumerate() {
                    let term = if self.opts.dealias {
                        padded_product(&truncate_coeffs(cu, j), &self.dz[lvl][axis])
                    } else {
                        inverse_real_part(&truncate_coeffs(cu, j))
                            .mul(&self.dz_fields[lvl][axis])
                            .expect("same grid")
                    };
                    acc = acc.add(&term).expect("same grid");
                }
                acc
            },
            |v| restrict_to_domain(v).1 < LEAKAGE_TOL,
        );
        let (restricted, leakage) = restrict_to_domain(&report.value);
        let value = self.lap.sine_analysis(&restricted)?;
        Ok(TransportOutput {
            value,
            report,
            leakage,
        })
    }
}

/// Free-function form of [`TransportOperator::apply`].
pub fn transport_product(
    u: &SineCoeffs,
    z: &RealField,
    lap: &DirichletLaplacian,
    opts: ProductOptions,
) -> Result<TransportOutput> {
    TransportOperator::new(z, lap, opts)?.apply(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn saturated_truncation_is_identity() {
        let g = Grid::centered(1, 64).unwrap();
        let f = RealField::from_fn(g, |x| (x[0] * 7.0).sin().exp());
        let s = smooth_truncate(&f, saturation_level(&g));
        assert!(s.sub(&f).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn low_truncation_keeps_mean() {
        let g = Grid::centered(1, 64).unwrap();
        let f = RealField::from_fn(g, |x| 0.3 + (PI * x[0]).sin());
        // |ξ| ≥ π > 1.5·2^0, so S^0 keeps only the mean
        let s = smooth_truncate(&f, 0);
        assert!(s.values().iter().all(|v| (v - 0.3).abs() < 1e-14));
    }

    #[test]
    fn band_limited_product_is_plain() {
        let g = Grid::centered(1, 64).unwrap();
        let f = RealField::from_fn(g, |x| (PI * x[0]).cos());
        let h = RealField::from_fn(g, |x| (PI * x[0]).sin() + 0.5);
        let r = paraproduct_product(&f, &h, &ProductOptions::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.j_used, J0 + 1);
        assert!(r.tail < 1e-15);
        assert!(r.value.sub(&f.mul(&h).unwrap()).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn dealiased_product_of_resolved_modes_is_exact() {
        let g = Grid::centered(2, 32).unwrap();
        let f = RealField::from_fn(g, |x| (3.0 * PI * x[0]).cos() * (PI * x[1]).sin());
        let h = RealField::from_fn(g, |x| (5.0 * PI * x[1]).sin());
        let opts = ProductOptions {
            dealias: true,
            tol: 0.0,
            ..Default::default()
        };
        let r = paraproduct_product(&f, &h, &opts).unwrap();
        assert!(r.value.sub(&f.mul(&h).unwrap()).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn ratio_rejects_bad_parameters() {
        let g = Grid::centered(1, 32).unwrap();
        let f = RealField::constant(g, 1.0);
        assert!(product_estimate_ratio(&f, &f, 0.2, 0.3, 2.0, 4.0).is_err());
        assert!(product_estimate_ratio(&f, &f, 0.3, 0.2, 2.0, 2.0).is_err());
        assert!(product_estimate_ratio(&f, &RealField::zeros(g), 0.3, 0.2, 2.0, 4.0).is_err());
    }
}
