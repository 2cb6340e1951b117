//! Dirichlet Laplacian on the box `D` in its sine eigenbasis.
//!
//! Basis `e_k(x) = Π_i √(2/ℓ) sin(k_i π (x_i − a_i)/ℓ)`, `k ∈ {1..M}^d`, with
//! eigenvalues `λ_k = (π/ℓ)²|k|²`. Interior nodes of `D` coincide with ambient
//! nodes, and analysis is the exact DST-I inverse of synthesis on them.

use crate::error::{invalid, Error, Result};
use crate::fft::plan;
use crate::field::{RealField, VectorField};
use crate::grid::Grid;
use crate::sobolev::lp_norm;
use crate::spectral::REL_FLOOR;
use num_complex::Complex64;
use rustfft::Fft;
use std::f64::consts::PI;
use std::sync::Arc;

/// Coefficients on `{1..M}^d`, row-major, stored 0-based.
#[derive(Clone, Debug, PartialEq)]
pub struct SineCoeffs {
    grid: Grid,
    coeffs: Vec<f64>,
}

impl SineCoeffs {
    pub fn new(grid: Grid, coeffs: Vec<f64>) -> Result<Self> {
        let want = grid.sine_modes().pow(grid.d() as u32);
        if coeffs.len() != want {
            return Err(Error::Degenerate(format!(
                "expected {want} sine coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Degenerate("non-finite sine coefficient".into()));
        }
        Ok(Self { grid, coeffs })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            coeffs: vec![0.0; grid.sine_modes().pow(grid.d() as u32)],
            grid,
        }
    }

    /// The basis vector `e_k`, `k` 1-based per axis.
    pub fn unit(grid: Grid, k: &[usize]) -> Result<Self> {
        let m = grid.sine_modes();
        if k.len() != grid.d() || k.iter().any(|&ki| ki == 0 || ki > m) {
            return Err(invalid(
                "k",
                format!("{k:?} outside {{1..{m}}}^{}", grid.d()),
            ));
        }
        let mut c = Self::zeros(grid);
        let flat = if grid.d() == 1 {
            k[0] - 1
        } else {
            (k[0] - 1) * m + (k[1] - 1)
        };
        c.coeffs[flat] = 1.0;
        Ok(c)
    }

    pub(crate) fn from_raw(grid: Grid, coeffs: Vec<f64>) -> Self {
        Self { grid, coeffs }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, a: f64) -> Self {
        Self::from_raw(self.grid, self.coeffs.iter().map(|c| a * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(-1.0, other)
    }

    /// `self + a·other`.
    pub fn axpy(&self, a: f64, other: &Self) -> Self {
        debug_assert_eq!(self.grid, other.grid);
        Self::from_raw(
            self.grid,
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| x + a * y)
                .collect(),
        )
    }

    /// `L₂(D)` norm, `(Σ c_k²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Order `s` of the eigen-norm `(Σ(1+σ²λ_k)^s c_k²)^{1/2}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenIndex {
    pub s: f64,
}

impl From<f64> for EigenIndex {
    fn from(s: f64) -> Self {
        Self { s }
    }
}

enum Sum {
    Sine,
    Cosine,
}

/// `−Δ_D` scaled by `σ²`, together with its cached transforms.
#[derive(Clone)]
pub struct DirichletLaplacian {
    grid: Grid,
    m: usize,
    sigma2: f64,
    eigenvalues: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for DirichletLaplacian {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DirichletLaplacian")
            .field("grid", &self.grid)
            .field("m", &self.m)
            .field("sigma2", &self.sigma2)
            .finish()
    }
}

impl DirichletLaplacian {
    pub fn new(grid: Grid, sigma2: f64) -> Result<Self> {
        if !(sigma2.is_finite() && sigma2 > 0.0) {
            return Err(invalid("sigma2", format!("{sigma2} must be positive")));
        }
        let m = grid.sine_modes();
        let base = (PI / grid.domain_side()).powi(2);
        let eigenvalues = match grid.d() {
            1 => (1..=m).map(|k| base * (k * k) as f64).collect(),
            _ => (1..=m)
                .flat_map(|k0| (1..=m).map(move |k1| base * (k0 * k0 + k1 * k1) as f64))
                .collect(),
        };
        Ok(Self {
            grid,
            m,
            sigma2,
            eigenvalues,
            fft: plan(2 * (m + 1), false),
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn modes_per_axis(&self) -> usize {
        self.m
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// `λ_k` in coefficient order (without `σ²`).
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `Σ_k b_k sin(πki/(M+1))` or the cosine analogue for `i = 0..=M+1`.
    fn trig_sum(&self, b: &[f64], kind: Sum) -> Vec<f64> {
        let m = self.m;
        let len = 2 * (m + 1);
        let mut x = vec![Complex64::default(); len];
        for (k, &v) in b.iter().enumerate() {
            let k = k + 1;
            x[k] = Complex64::new(v, 0.0);
            x[len - k] = Complex64::new(
                match kind {
                    Sum::Sine => -v,
                    Sum::Cosine => v,
                },
                0.0,
            );
        }
        self.fft.process(&mut x);
        match kind {
            Sum::Sine => {
                let mut out: Vec<f64> = x[..m + 2].iter().map(|z| -z.im / 2.0).collect();
                out[0] = 0.0;
                out[m + 1] = 0.0;
                out
            }
            Sum::Cosine => x[..m + 2].iter().map(|z| z.re / 2.0).collect(),
        }
    }

    /// Applies a 1-d map along `axis` of a `rows × cols` array.
    fn along_axis(
        data: &[f64],
        shape: [usize; 2],
        axis: usize,
        out_len: usize,
        op: impl Fn(&[f64]) -> Vec<f64>,
    ) -> (Vec<f64>, [usize; 2]) {
        let [r, c] = shape;
        if axis == 1 {
            let mut out = Vec::with_capacity(r * out_len);
            for row in data.chunks_exact(c) {
                out.extend(op(row));
            }
            (out, [r, out_len])
        } else {
            let mut out = vec![0.0; out_len * c];
            let mut line = vec![0.0; r];
            for j in 0..c {
                for i in 0..r {
                    line[i] = data[i * c + j];
                }
                for (i, v) in op(&line).into_iter().enumerate() {
                    out[i * c + j] = v;
                }
            }
            (out, [out_len, c])
        }
    }

    fn basis_scale(&self) -> f64 {
        (2.0 / self.grid.domain_side()).sqrt()
    }

    fn shape(&self, len: usize) -> [usize; 2] {
        if self.grid.d() == 1 {
            [1, len]
        } else {
            [len, len]
        }
    }

    /// Node values on `D̄` (`(M+2)^d`, boundary included) of
    /// `Σ c_k Π_i ∂^{order_i} e_{k_i}`.
    fn synthesize_closed(&self, c: &SineCoeffs, derivative_axis: Option<usize>) -> Vec<f64> {
        let m = self.m;
        let d = self.grid.d();
        let mut data = c.coeffs.clone();
        let mut shape = self.shape(m);
        let freq = PI / self.grid.domain_side();
        for axis in 0..d {
            let slot = if d == 1 { 1 } else { axis };
            let deriv = derivative_axis == Some(axis);
            let (out, sh) = Self::along_axis(&data, shape, slot, m + 2, |line| {
                if deriv {
                    let b: Vec<f64> = line
                        .iter()
                        .enumerate()
                        .map(|(k, v)| v * freq * (k + 1) as f64)
                        .collect();
                    self.trig_sum(&b, Sum::Cosine)
                } else {
                    self.trig_sum(line, Sum::Sine)
                }
            });
            data = out;
            shape = sh;
        }
        let scale = self.basis_scale().powi(d as i32);
        data.iter_mut().for_each(|v| *v *= scale);
        data
    }

    fn embed_closed(&self, vals: &[f64]) -> RealField {
        let g = self.grid;
        let m2 = self.m + 2;
        let mut out = RealField::zeros(g);
        let s0 = g.domain_start(0);
        match g.d() {
            1 => out.values_mut()[s0..s0 + m2].copy_from_slice(vals),
            _ => {
                let s1 = g.domain_start(1);
                for i in 0..m2 {
                    let row = (s0 + i) * g.n() + s1;
                    out.values_mut()[row..row + m2].copy_from_slice(&vals[i * m2..(i + 1) * m2]);
                }
            }
        }
        out
    }

    /// Values at the `M^d` interior nodes of `D`.
    fn interior_values(&self, f: &RealField) -> Vec<f64> {
        let g = self.grid;
        let m = self.m;
        let s0 = g.domain_start(0) + 1;
        match g.d() {
            1 => f.values()[s0..s0 + m].to_vec(),
            _ => {
                let s1 = g.domain_start(1) + 1;
                let mut out = Vec::with_capacity(m * m);
                for i in 0..m {
                    let row = (s0 + i) * g.n() + s1;
                    out.extend_from_slice(&f.values()[row..row + m]);
                }
                out
            }
        }
    }

    /// `c_k = h^d Σ_{interior} f e_k`.
    pub fn sine_analysis(&self, f: &RealField) -> Result<SineCoeffs> {
        self.grid.check_same(f.grid())?;
        let m = self.m;
        let d = self.grid.d();
        let mut data = self.interior_values(f);
        let mut shape = self.shape(m);
        for axis in 0..d {
            let slot = if d == 1 { 1 } else { axis };
            let (out, sh) = Self::along_axis(&data, shape, slot, m, |line| {
                self.trig_sum(line, Sum::Sine)[1..=m].to_vec()
            });
            data = out;
            shape = sh;
        }
        let scale = (self.grid.spacing() * self.basis_scale()).powi(d as i32);
        data.iter_mut().for_each(|v| *v *= scale);
        Ok(SineCoeffs::from_raw(self.grid, data))
    }

    /// Analysis plus the relative `L₂` norm of `f` off the interior nodes.
    pub fn sine_analysis_with_defect(&self, f: &RealField) -> Result<(SineCoeffs, f64)> {
        let c = self.sine_analysis(f)?;
        let inside = self.interior_values(f);
        let total = lp_norm(f, 2.0);
        let in_sq: f64 = self.grid.cell_volume() * inside.iter().map(|v| v * v).sum::<f64>();
        let off = (total * total - in_sq).max(0.0).sqrt();
        let defect = if total < REL_FLOOR { off } else { off / total };
        Ok((c, defect))
    }

    /// Ambient field `Σ c_k e_k`, zero outside `D`.
    pub fn sine_synthesis(&self, c: &SineCoeffs) -> RealField {
        self.embed_closed(&self.synthesize_closed(c, None))
    }

    /// Exact gradient of `Σ c_k e_k` on the nodes of `D̄`, zero elsewhere.
    pub fn gradient_on_domain(&self, c: &SineCoeffs) -> VectorField {
        let comps = (0..self.grid.d())
            .map(|axis| self.embed_closed(&self.synthesize_closed(c, Some(axis))))
            .collect();
        VectorField::new(comps).expect("d components")
    }

    fn diagonal(&self, c: &SineCoeffs, f: impl Fn(f64) -> f64) -> SineCoeffs {
        SineCoeffs::from_raw(
            c.grid,
            c.coeffs
                .iter()
                .zip(&self.eigenvalues)
                .map(|(v, &lam)| v * f(self.sigma2 * lam))
                .collect(),
        )
    }

    /// `P_t c`: multiplies by `exp(−σ²λ_k t)`.
    pub fn semigroup_apply(&self, c: &SineCoeffs, t: f64) -> Result<SineCoeffs> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(invalid("t", format!("{t} must be finite and >= 0")));
        }
        Ok(self.diagonal(c, |a| (-a * t).exp()))
    }

    /// `A^{α/2} c`: multiplies by `(σ²λ_k)^{α/2}`.
    pub fn fractional_power_apply(&self, c: &SineCoeffs, alpha: f64) -> SineCoeffs {
        self.diagonal(c, |a| a.powf(alpha / 2.0))
    }

    /// Per-mode weights `(1+σ²λ_k)^s` used by the eigen-norm.
    pub fn norm_weights(&self, idx: impl Into<EigenIndex>) -> Vec<f64> {
        let s = idx.into().s;
        self.eigenvalues
            .iter()
            .map(|&lam| (1.0 + self.sigma2 * lam).powf(s))
            .collect()
    }

    /// `(Σ(1+σ²λ_k)^s c_k²)^{1/2}`.
    pub fn eigen_norm(&self, c: &SineCoeffs, idx: impl Into<EigenIndex>) -> f64 {
        let s = idx.into().s;
        c.coeffs
            .iter()
            .zip(&self.eigenvalues)
            .map(|(v, &lam)| (1.0 + self.sigma2 * lam).powf(s) * v * v)
            .sum::<f64>()
            .sqrt()
    }

    /// `‖P_t w‖_{E,1+δ} t^{(1+δ+β)/2} / ‖w‖_{E,−β}`.
    pub fn smoothing_ratio(&self, w: &SineCoeffs, t: f64, delta: f64, beta: f64) -> Result<f64> {
        if !(0.0 < beta && beta < delta && delta < 0.5) {
            return Err(invalid(
                "beta/delta",
                format!("need 0 < beta < delta < 1/2, got beta={beta}, delta={delta}"),
            ));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(invalid("t", format!("{t} must be positive")));
        }
        let den = self.eigen_norm(w, -beta);
        if den < REL_FLOOR {
            return Err(Error::Degenerate("w has zero H^-beta norm".into()));
        }
        let pw = self.semigroup_apply(w, t)?;
        Ok(self.eigen_norm(&pw, 1.0 + delta) * t.powf((1.0 + delta + beta) / 2.0) / den)
    }

    /// `‖P_t x − x‖ / (t^α ‖A^α x‖)` in `L₂(D)`, with `A^α = (σ²λ)^α`.
    pub fn holder_defect(&self, x: &SineCoeffs, t: f64, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(invalid("alpha", format!("{alpha} not in (0, 1]")));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(invalid("t", format!("{t} must be positive")));
        }
        let ax = self.fractional_power_apply(x, 2.0 * alpha).l2_norm();
        if !(ax.is_finite() && ax * t.powf(alpha) >= REL_FLOOR) {
            return Err(Error::Degenerate("zero denominator t^a ||A^a x||".into()));
        }
        let num = self.semigroup_apply(x, t)?.sub(x).l2_norm();
        Ok(num / (t.powf(alpha) * ax))
    }
}
