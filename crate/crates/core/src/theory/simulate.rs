//! Monte-Carlo estimates of the probability that the single-layer classifier
//! labels the test point of the two-cone model correctly.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;

use super::cones::{
    case_probabilities, compositions, cone_membership, multinomial_pmf, EventConfig,
    HyperplaneCase, LnFactorials,
};
use crate::error::{Error, Result};
use crate::rng::{substream, Domain, StreamRng};
use crate::synthgen::ConeGeometry;

/// Default number of Monte-Carlo trials per configuration.
pub const DEFAULT_TRIALS: usize = 1000;

fn require_equal_cones(geom: &ConeGeometry) -> Result<()> {
    geom.validate()?;
    if !geom.equal_cones() {
        return Err(Error::Unsupported(format!(
            "simulation needs A1 == A2, got A1 = {}, A2 = {}",
            geom.a1, geom.a2
        )));
    }
    Ok(())
}

/// `r1 - r2` for one hyperplane.
fn margin(case: HyperplaneCase, geom: &ConeGeometry, u: f64) -> f64 {
    let (r1, r2) = match case {
        HyperplaneCase::CutsG2 => cone_membership(case, geom, 0.0, u),
        _ => cone_membership(case, geom, u, 0.0),
    };
    r1 - r2
}

/// Estimates, given the hyperplane counts in `cfg`, the probability that the
/// summed margin `sum (r1 - r2)` over all hyperplanes is strictly positive.
/// Each cutting hyperplane gets a fresh uniform position per trial.
///
/// Separating and `theta1`-cutting hyperplanes add exactly 1, non-separating
/// ones add 0 when `A1 == A2`, and the per-hyperplane margins of the other two
/// cases are monotone in `u`. When those bounds already decide the sign the
/// answer is returned without sampling.
pub fn simulate_conditional(
    cfg: &EventConfig,
    geom: &ConeGeometry,
    trials: usize,
    rng: &mut StreamRng,
) -> Result<f64> {
    require_equal_cones(geom)?;
    if trials == 0 {
        return Err(Error::config("trials must be at least 1"));
    }
    let base = (cfg.j + cfg.k_theta1) as f64;
    let (k2, kt2) = (cfg.k2 as f64, cfg.k_theta2 as f64);
    let g2 = |u| margin(HyperplaneCase::CutsG2, geom, u);
    let t2 = |u| margin(HyperplaneCase::CutsG1Theta2, geom, u);
    let lower = base + k2 * g2(1.0) + kt2 * t2(0.0);
    let upper = base + k2 * g2(0.0) + kt2 * t2(1.0);
    if lower > 0.0 {
        return Ok(1.0);
    }
    if upper <= 0.0 {
        return Ok(0.0);
    }
    let mut hits = 0usize;
    for _ in 0..trials {
        let mut sum = base;
        for _ in 0..cfg.k_theta2 {
            sum += t2(rng.random::<f64>());
        }
        for _ in 0..cfg.k2 {
            sum += g2(rng.random::<f64>());
        }
        if sum > 0.0 {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials as f64)
}

/// Estimate of the correct-classification probability with its Monte-Carlo
/// standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimEstimate {
    pub probability: f64,
    pub std_error: f64,
}

/// Law of total probability over all hyperplane configurations:
/// `sum_cfg P(cfg) * P(correct | cfg)`.
///
/// Configurations that share `(j + k_theta1, k_theta2, k2)` have the same
/// conditional probability, so each such group is simulated once, on its own
/// substream of `seed`.
pub fn simulate_classification_probability(
    m: usize,
    geom: &ConeGeometry,
    trials: usize,
    seed: u64,
) -> Result<SimEstimate> {
    require_equal_cones(geom)?;
    if trials == 0 {
        return Err(Error::config("trials must be at least 1"));
    }
    let probs = case_probabilities(geom);
    let ln_fact = LnFactorials::new(m);
    let mut groups: BTreeMap<(usize, usize, usize), f64> = BTreeMap::new();
    for cfg in compositions(m) {
        let p = multinomial_pmf(&cfg.parts(), &probs, &ln_fact);
        if p > 0.0 {
            *groups
                .entry((cfg.j + cfg.k_theta1, cfg.k_theta2, cfg.k2))
                .or_insert(0.0) += p;
        }
    }
    let groups: Vec<_> = groups.into_iter().collect();
    let conditional: Vec<f64> = groups
        .par_iter()
        .map(|&((s, kt2, k2), _)| {
            let cfg = EventConfig::new(s, 0, kt2, k2, m - s - kt2 - k2);
            let key = ((s as u64) << 32) | ((kt2 as u64) << 16) | k2 as u64;
            let mut rng = substream(seed, Domain::Conditional, m as u64, key);
            simulate_conditional(&cfg, geom, trials, &mut rng)
        })
        .collect::<Result<_>>()?;
    // accumulate the miss probability: near-certain groups then add exact zeros
    let mut miss = 0.0;
    let mut variance = 0.0;
    for ((_, w), q) in groups.iter().zip(&conditional) {
        miss += w * (1.0 - q);
        variance += w * w * q * (1.0 - q) / trials as f64;
    }
    Ok(SimEstimate {
        probability: (1.0 - miss).clamp(0.0, 1.0),
        std_error: variance.sqrt(),
    })
}
