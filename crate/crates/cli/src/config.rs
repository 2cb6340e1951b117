//! Flat `key = value` run configuration with `FT_<KEY>` environment
//! overrides.

use crate::error::CliError;
use ftlab_core::solver::{Rho, U0Kind};
use ftlab_core::{Grid, NoiseKind, NoiseSpec, SolverConfig};
use std::collections::BTreeMap;
use std::path::Path;

/// Every accepted key, in echo order.
pub const KEYS: [&str; 19] = [
    "d",
    "n",
    "beta",
    "delta",
    "gamma",
    "q",
    "sigma2",
    "t_final",
    "m_t",
    "rho",
    "tol_picard",
    "tol_product",
    "max_iter",
    "u0_kind",
    "dealias",
    "seed",
    "hurst",
    "kind",
    "band",
];

pub const ENV_PREFIX: &str = "FT_";

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub solver: SolverConfig,
    /// Not validated here: only the noise-producing commands need it.
    pub noise: NoiseSpec,
    /// Effective values of every key after defaults and overrides.
    pub echo: Vec<(String, String)>,
}

/// Raw pairs from a config file. Comments start with `#`.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!(
                "line {}: expected `key = value`, got `{raw}`",
                lineno + 1
            ))
        })?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            return Err(CliError::Config(format!(
                "line {}: unknown key `{k}` (accepted: {})",
                lineno + 1,
                KEYS.join(", ")
            )));
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(CliError::Config(format!(
                "line {}: duplicate key `{k}`",
                lineno + 1
            )));
        }
    }
    Ok(out)
}

fn env_overrides(pairs: &mut BTreeMap<String, String>, env: impl Fn(&str) -> Option<String>) {
    for key in KEYS {
        if let Some(v) = env(&format!("{ENV_PREFIX}{}", key.to_uppercase())) {
            pairs.insert(key.to_string(), v.trim().to_string());
        }
    }
}

fn value<T: std::str::FromStr>(
    pairs: &BTreeMap<String, String>,
    key: &str,
    default: T,
) -> Result<T, CliError> {
    match pairs.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| CliError::Config(format!("key `{key}`: cannot parse `{v}`"))),
    }
}

fn u0_name(k: U0Kind) -> &'static str {
    match k {
        U0Kind::InteriorBump => "interior_bump",
        U0Kind::EigenmodeSmooth => "eigenmode_smooth",
    }
}

/// Builds the run configuration from parsed pairs. Numeric gates are left to
/// the commands so each reports its own violation.
pub fn build(
    mut pairs: BTreeMap<String, String>,
    env: impl Fn(&str) -> Option<String>,
) -> Result<RunConfig, CliError> {
    env_overrides(&mut pairs, env);
    let d: usize = value(&pairs, "d", 1)?;
    let n: usize = value(&pairs, "n", 256)?;
    let grid = Grid::centered(d, n).map_err(CliError::from)?;
    let mut s = SolverConfig::defaults(grid);
    s.beta = value(&pairs, "beta", s.beta)?;
    s.delta = value(&pairs, "delta", s.delta)?;
    s.gamma = value(&pairs, "gamma", s.gamma)?;
    s.q = value(&pairs, "q", s.q)?;
    s.sigma2 = value(&pairs, "sigma2", s.sigma2)?;
    s.t_final = value(&pairs, "t_final", s.t_final)?;
    s.m_t = value(&pairs, "m_t", s.m_t)?;
    s.rho = match pairs.get("rho").map(String::as_str) {
        None | Some("auto") => Rho::Auto,
        Some(v) => Rho::Fixed(v.parse().map_err(|_| {
            CliError::Config(format!("key `rho`: expected `auto` or a number, got `{v}`"))
        })?),
    };
    s.tol_picard = value(&pairs, "tol_picard", s.tol_picard)?;
    s.tol_product = value(&pairs, "tol_product", s.tol_product)?;
    s.max_iter = value(&pairs, "max_iter", s.max_iter)?;
    if let Some(v) = pairs.get("u0_kind") {
        s.u0_kind = v.parse().map_err(CliError::from)?;
    }
    s.dealias = value(&pairs, "dealias", s.dealias)?;
    s.seed = value(&pairs, "seed", s.seed)?;
    let kind: NoiseKind = match pairs.get("kind") {
        None => NoiseKind::Fbm1dExact,
        Some(v) => v.parse().map_err(CliError::from)?,
    };
    let noise = NoiseSpec {
        hurst: value(&pairs, "hurst", 0.9)?,
        seed: s.seed,
        kind,
        band: value(&pairs, "band", 3)?,
    };
    let rho = match s.rho {
        Rho::Auto => "auto".to_string(),
        Rho::Fixed(r) => r.to_string(),
    };
    let echo = vec![
        ("d", d.to_string()),
        ("n", n.to_string()),
        ("beta", s.beta.to_string()),
        ("delta", s.delta.to_string()),
        ("gamma", s.gamma.to_string()),
        ("q", s.q.to_string()),
        ("sigma2", s.sigma2.to_string()),
        ("t_final", s.t_final.to_string()),
        ("m_t", s.m_t.to_string()),
        ("rho", rho),
        ("tol_picard", s.tol_picard.to_string()),
        ("tol_product", s.tol_product.to_string()),
        ("max_iter", s.max_iter.to_string()),
        ("u0_kind", u0_name(s.u0_kind).to_string()),
        ("dealias", s.dealias.to_string()),
        ("seed", s.seed.to_string()),
        ("hurst", noise.hurst.to_string()),
        ("kind", noise.kind.as_str().to_string()),
        ("band", noise.band.to_string()),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    Ok(RunConfig {
        solver: s,
        noise,
        echo,
    })
}

pub fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading config {}: {e}", path.display())))?;
    build(parse_pairs(&text)?, |k| std::env::var(k).ok())
}
