use crate::error::{Error, Result};

/// Periodic torus `[0, L)^d` sampled at `N` nodes per axis, with an embedded
/// open box `D = Π (a_i, a_i + ℓ)` and a cutoff transition width `w`.
///
/// Node `i` on an axis sits at `x_i = i·L/N`. Box corners must be grid nodes so
/// that the sine basis on `D` samples exactly at ambient nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    d: usize,
    n: usize,
    side: f64,
    domain_offset: [f64; 2],
    domain_side: f64,
    cutoff_width: f64,
}

const ALIGN_TOL: f64 = 1e-9;

impl Grid {
    pub fn new(
        d: usize,
        n: usize,
        side: f64,
        domain_offset: &[f64],
        domain_side: f64,
        cutoff_width: f64,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidGrid(m));
        if d != 1 && d != 2 {
            return bad(format!("dimension {d} not supported (use 1 or 2)"));
        }
        if n < 16 || !n.is_power_of_two() {
            return bad(format!("N = {n} must be a power of two >= 16"));
        }
        if !(side.is_finite() && side > 0.0) {
            return bad(format!("torus side {side} must be positive"));
        }
        if domain_offset.len() != d {
            return bad(format!(
                "domain_offset has {} entries, expected {d}",
                domain_offset.len()
            ));
        }
        if !(domain_side.is_finite() && domain_side > 0.0) {
            return bad(format!("domain side {domain_side} must be positive"));
        }
        let max_w = (side - domain_side) / 2.0;
        if !(cutoff_width > 0.0 && cutoff_width <= max_w + 1e-12) {
            return bad(format!(
                "cutoff width {cutoff_width} must lie in (0, {max_w}]"
            ));
        }
        let h = side / n as f64;
        let mut offset = [0.0; 2];
        for (axis, &a) in domain_offset.iter().enumerate() {
            if !(a - cutoff_width > 0.0 && a + domain_side + cutoff_width < side) {
                return bad(format!(
                    "axis {axis}: box [{a}, {}] plus margin {cutoff_width} does not fit strictly inside (0, {side})",
                    a + domain_side
                ));
            }
            if ((a / h) - (a / h).round()).abs() > ALIGN_TOL {
                return bad(format!(
                    "axis {axis}: offset {a} is not a grid node (h = {h})"
                ));
            }
            offset[axis] = a;
        }
        let cells = domain_side / h;
        if (cells - cells.round()).abs() > ALIGN_TOL {
            return bad(format!(
                "domain side {domain_side} is not a multiple of h = {h}"
            ));
        }
        if (cells.round() as usize) < 2 {
            return bad("domain contains no interior node".into());
        }
        Ok(Self {
            d,
            n,
            side,
            domain_offset: offset,
            domain_side,
            cutoff_width,
        })
    }

    /// Torus side 2, centred box of side 0.5, cutoff width 0.25.
    pub fn centered(d: usize, n: usize) -> Result<Self> {
        Self::new(d, n, 2.0, &vec![0.75; d], 0.5, 0.25)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn spacing(&self) -> f64 {
        self.side / self.n as f64
    }

    pub fn domain_offset(&self) -> &[f64] {
        &self.domain_offset[..self.d]
    }

    pub fn domain_side(&self) -> f64 {
        self.domain_side
    }

    pub fn cutoff_width(&self) -> f64 {
        self.cutoff_width
    }

    /// Total number of nodes, `N^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Quadrature weight `h^d`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.d as i32)
    }

    /// Interior sine nodes per axis, `M = round(Nℓ/L) − 1`.
    pub fn sine_modes(&self) -> usize {
        (self.domain_side / self.spacing()).round() as usize - 1
    }

    /// Index of the node at the lower corner of `D` along `axis`.
    pub fn domain_start(&self, axis: usize) -> usize {
        (self.domain_offset[axis] / self.spacing()).round() as usize
    }

    pub fn coord(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    /// Multi-index of a flat row-major index (axis 0 slowest).
    pub fn unravel(&self, flat: usize) -> [usize; 2] {
        if self.d == 1 {
            [flat, 0]
        } else {
            [flat / self.n, flat % self.n]
        }
    }

    pub fn ravel(&self, idx: [usize; 2]) -> usize {
        if self.d == 1 {
            idx[0]
        } else {
            idx[0] * self.n + idx[1]
        }
    }

    /// Signed wavenumber of FFT slot `i`: `k ∈ {−N/2, …, N/2−1}`.
    pub fn wavenumber(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Angular frequency `2πk/L` of FFT slot `i`.
    pub fn frequency(&self, i: usize) -> f64 {
        2.0 * std::f64::consts::PI * self.wavenumber(i) as f64 / self.side
    }

    /// Frequency vector of a flat coefficient index.
    pub fn frequency_vec(&self, flat: usize) -> [f64; 2] {
        let idx = self.unravel(flat);
        let mut xi = [0.0; 2];
        for (axis, x) in xi.iter_mut().enumerate().take(self.d) {
            *x = self.frequency(idx[axis]);
        }
        xi
    }

    pub fn is_nyquist(&self, i: usize) -> bool {
        i == self.n / 2
    }

    /// Largest `|ξ|` on the grid, `√d·πN/L`.
    pub fn max_frequency(&self) -> f64 {
        (self.d as f64).sqrt() * std::f64::consts::PI * self.n as f64 / self.side
    }

    /// Whether node `flat` lies in the closed box `D̄`.
    pub fn in_closed_domain(&self, flat: usize) -> bool {
        let idx = self.unravel(flat);
        let m = self.sine_modes();
        (0..self.d).all(|axis| {
            let s = self.domain_start(axis);
            idx[axis] >= s && idx[axis] <= s + m + 1
        })
    }

    /// Same grid with `N` replaced.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(
            self.d,
            n,
            self.side,
            self.domain_offset(),
            self.domain_side,
            self.cutoff_width,
        )
    }

    pub fn check_same(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}
