use crate::error::{Error, Result};
use crate::grid::Grid;
use num_complex::Complex64;

/// Real grid function, row-major with axis 0 slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct RealField {
    grid: Grid,
    values: Vec<f64>,
}

impl RealField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Degenerate(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Degenerate(format!("non-finite value at node {i}")));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            values: vec![0.0; grid.len()],
            grid,
        }
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        Self {
            values: vec![c; grid.len()],
            grid,
        }
    }

    /// Samples `f` at every node; `f` receives the coordinate vector.
    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = (0..grid.len())
            .map(|flat| {
                let idx = grid.unravel(flat);
                let x = [grid.coord(idx[0]), grid.coord(idx[1])];
                f(&x[..grid.d()])
            })
            .collect();
        Self { grid, values }
    }

    pub(crate) fn from_raw(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_raw(self.grid, self.values.iter().map(|v| c * v).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    fn zip(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(Self::from_raw(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        ))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Fourier coefficients in FFT order, normalized so that the DC entry is the
/// mean of the field.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralCoeffs {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralCoeffs {
    pub fn new(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::Degenerate(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coeffs.len()
            )));
        }
        Ok(Self { grid, coeffs })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            coeffs: vec![Complex64::default(); grid.len()],
            grid,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Flat index of the mode `-k`.
    pub fn conjugate_index(&self, flat: usize) -> usize {
        let n = self.grid.n();
        let idx = self.grid.unravel(flat);
        let neg = |i: usize| (n - i) % n;
        self.grid.ravel([neg(idx[0]), neg(idx[1])])
    }

    /// `max |c_k − conj(c_{−k})|`, relative to `max |c_k|` unless that is
    /// below `1e−14`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut defect: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let j = self.conjugate_index(i);
            defect = defect.max((c - self.coeffs[j].conj()).norm());
            scale = scale.max(c.norm());
        }
        if scale < 1e-14 {
            defect
        } else {
            defect / scale
        }
    }
}

/// `d` real components on one grid.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    components: Vec<RealField>,
}

impl VectorField {
    pub fn new(components: Vec<RealField>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::Degenerate("vector field needs a component".into()))?;
        if components.len() != first.grid().d() {
            return Err(Error::Degenerate(format!(
                "{} components on a {}-d grid",
                components.len(),
                first.grid().d()
            )));
        }
        for c in &components[1..] {
            first.grid().check_same(c.grid())?;
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[RealField] {
        &self.components
    }

    pub fn grid(&self) -> &Grid {
        self.components[0].grid()
    }

    /// Pointwise Euclidean magnitude.
    pub fn magnitude(&self) -> RealField {
        let g = *self.grid();
        let values = (0..g.len())
            .map(|i| {
                self.components
                    .iter()
                    .map(|c| c.values()[i].powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .collect();
        RealField::from_raw(g, values)
    }
}
