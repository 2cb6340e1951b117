//! Fourier transforms, multipliers, gradients, Bessel potentials and the
//! smooth cutoff on the periodic grid.
//!
//! Normalization: the forward transform carries `1/N^d` and the inverse
//! carries 1, so the DC coefficient is the mean of the field and a single
//! DC coefficient `a` inverts to the constant field `a`.

use crate::error::{Error, Result};
use crate::fft::fft_nd;
use crate::field::{RealField, SpectralCoeffs, VectorField};
use crate::grid::Grid;
use crate::sobolev::lp_norm;
use num_complex::Complex64;

/// Tolerance on the relative Hermitian defect accepted by [`dft_inverse`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Denominators below this are replaced by absolute reporting.
pub const REL_FLOOR: f64 = 1e-14;

pub fn dft_forward(f: &RealField) -> SpectralCoeffs {
    let g = *f.grid();
    let mut data: Vec<Complex64> = f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_nd(&mut data, g.n(), g.d(), false);
    let scale = 1.0 / g.len() as f64;
    for c in &mut data {
        *c *= scale;
    }
    SpectralCoeffs::new(g, data).expect("length preserved")
}

/// Inverse transform; rejects coefficients that do not represent a real field.
pub fn dft_inverse(c: &SpectralCoeffs) -> Result<RealField> {
    let defect = c.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NonHermitian { defect });
    }
    Ok(inverse_real_part(c))
}

/// Inverse transform keeping the real part, for coefficients that are
/// Hermitian by construction.
pub(crate) fn inverse_real_part(c: &SpectralCoeffs) -> RealField {
    let g = *c.grid();
    let mut data = c.coeffs().to_vec();
    fft_nd(&mut data, g.n(), g.d(), true);
    RealField::from_raw(g, data.into_iter().map(|z| z.re).collect())
}

/// Multiplies every coefficient by `symbol(ξ)`.
pub fn apply_multiplier(
    c: &SpectralCoeffs,
    symbol: impl Fn(&[f64]) -> Complex64,
) -> Result<SpectralCoeffs> {
    let g = *c.grid();
    let mut out = c.clone();
    for (flat, z) in out.coeffs_mut().iter_mut().enumerate() {
        let xi = g.frequency_vec(flat);
        let m = symbol(&xi[..g.d()]);
        if !(m.re.is_finite() && m.im.is_finite()) {
            return Err(Error::NonFiniteSymbol {
                frequency: xi[..g.d()].to_vec(),
            });
        }
        *z *= m;
    }
    Ok(out)
}

/// Real-symbol multiplier for symbols known to be finite.
pub(crate) fn apply_real_symbol(
    c: &SpectralCoeffs,
    symbol: impl Fn(&[f64]) -> f64,
) -> SpectralCoeffs {
    let g = *c.grid();
    let mut out = c.clone();
    for (flat, z) in out.coeffs_mut().iter_mut().enumerate() {
        let xi = g.frequency_vec(flat);
        *z *= symbol(&xi[..g.d()]);
    }
    out
}

pub(crate) fn norm_sq(xi: &[f64]) -> f64 {
    xi.iter().map(|x| x * x).sum()
}

/// `J^s f = ((1+|ξ|²)^{s/2} f̂)^∨`.
pub fn bessel_potential(f: &RealField, s: f64) -> RealField {
    if s == 0.0 {
        return f.clone();
    }
    let c = dft_forward(f);
    inverse_real_part(&apply_real_symbol(&c, |xi| {
        (1.0 + norm_sq(xi)).powf(s / 2.0)
    }))
}

/// Spectral derivative along `axis` of already-transformed coefficients.
/// The Nyquist slot along `axis` is zeroed.
pub(crate) fn derivative_coeffs(c: &SpectralCoeffs, axis: usize) -> SpectralCoeffs {
    let g = *c.grid();
    let mut out = c.clone();
    for (flat, z) in out.coeffs_mut().iter_mut().enumerate() {
        let i = g.unravel(flat)[axis];
        if g.is_nyquist(i) {
            *z = Complex64::default();
        } else {
            *z *= Complex64::new(0.0, g.frequency(i));
        }
    }
    out
}

/// Spectral gradient with symbol `iξ_j`; Nyquist derivative coefficients are
/// set to zero.
pub fn gradient(f: &RealField) -> VectorField {
    let c = dft_forward(f);
    let comps = (0..f.grid().d())
        .map(|axis| inverse_real_part(&derivative_coeffs(&c, axis)))
        .collect();
    VectorField::new(comps).expect("d components on one grid")
}

/// Smooth step: 0 for `x ≤ 0`, 1 for `x ≥ 1`, `C^∞` in between.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / x).exp();
    let b = (-1.0 / (1.0 - x)).exp();
    a / (a + b)
}

/// Per-axis distance from `x` to `[lo, hi]`.
fn interval_distance(x: f64, lo: f64, hi: f64) -> f64 {
    (lo - x).max(x - hi).max(0.0)
}

/// Cutoff value at a point: 1 on `D̄`, 0 beyond distance `w` on any axis.
pub fn cutoff_at(g: &Grid, x: &[f64]) -> f64 {
    let w = g.cutoff_width();
    g.domain_offset()
        .iter()
        .zip(x)
        .map(|(&a, &xi)| 1.0 - smooth_step(interval_distance(xi, a, a + g.domain_side()) / w))
        .product()
}

/// The cutoff `ψ` sampled on the grid.
pub fn build_cutoff(g: &Grid) -> RealField {
    RealField::from_fn(*g, |x| cutoff_at(g, x))
}

/// Zeroes `f` outside `D̄` and reports the relative `L₂` mass removed
/// (absolute if `‖f‖ < 1e−14`).
pub fn restrict_to_domain(f: &RealField) -> (RealField, f64) {
    let g = *f.grid();
    let mut out = f.clone();
    for (flat, v) in out.values_mut().iter_mut().enumerate() {
        if !g.in_closed_domain(flat) {
            *v = 0.0;
        }
    }
    let removed = lp_norm(&f.sub(&out).expect("same grid"), 2.0);
    let total = lp_norm(f, 2.0);
    let leakage = if total < REL_FLOOR {
        removed
    } else {
        removed / total
    };
    (out, leakage)
}
