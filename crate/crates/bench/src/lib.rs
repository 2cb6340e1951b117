//! Fixtures shared by the criterion benches.

use ftlab_core::noise::{make_noise_z, synthesize_fbm_1d};
use ftlab_core::spectral::build_cutoff;
use ftlab_core::{Grid, NoiseKind, NoiseSpec, RealField};

/// `ψ·B^H` with `H = 0.9` on the centred 1-d grid.
pub fn fbm_drift(n: usize, seed: u64) -> RealField {
    let g = Grid::centered(1, n).expect("valid grid");
    let spec = NoiseSpec::new(0.9, seed, NoiseKind::Fbm1dExact, 0).expect("valid spec");
    let b = synthesize_fbm_1d(&spec, &g).expect("embedding is nonnegative");
    make_noise_z(&b, &build_cutoff(&g)).expect("same grid")
}
