//! Per-hyperplane membership values and the multinomial law of hyperplane
//! configurations for the two-cone model.

use std::f64::consts::PI;

use crate::synthgen::ConeGeometry;

/// How a hyperplane through the origin relates to the two cones, seen from
/// the test point `x` inside cone 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HyperplaneCase {
    /// Cone 2 lies entirely on the far side.
    Separates,
    /// Both cones lie entirely on `x`'s side.
    NoSeparate,
    /// Cuts cone 2.
    CutsG2,
    /// Cuts cone 1 between `x` and cone 2.
    CutsG1Theta1,
    /// Cuts cone 1 on the far side of `x`.
    CutsG1Theta2,
}

impl HyperplaneCase {
    pub const ALL: [HyperplaneCase; 5] = [
        HyperplaneCase::Separates,
        HyperplaneCase::NoSeparate,
        HyperplaneCase::CutsG2,
        HyperplaneCase::CutsG1Theta1,
        HyperplaneCase::CutsG1Theta2,
    ];
}

/// Two-class membership index from the angular measure of each cone on the
/// test point's side: `r_g = a_g |a_1 - a_2| / (a_1 + a_2)^2`.
pub fn two_class_membership(a_1: f64, a_2: f64) -> (f64, f64) {
    let diff = (a_1 - a_2).abs();
    let total = (a_1 + a_2) * (a_1 + a_2);
    (a_1 * diff / total, a_2 * diff / total)
}

/// Membership values `(r1, r2)` contributed by one hyperplane. `u` is the
/// fraction of the `theta2` sector left on `x`'s side in the
/// [`HyperplaneCase::CutsG1Theta2`] case; `u_prime` is the fraction of cone 2
/// on `x`'s side in the [`HyperplaneCase::CutsG2`] case.
pub fn cone_membership(
    case: HyperplaneCase,
    geom: &ConeGeometry,
    u: f64,
    u_prime: f64,
) -> (f64, f64) {
    match case {
        HyperplaneCase::Separates | HyperplaneCase::CutsG1Theta1 => (1.0, 0.0),
        HyperplaneCase::NoSeparate => two_class_membership(geom.a1, geom.a2),
        HyperplaneCase::CutsG2 => two_class_membership(geom.a1, geom.a2 * u_prime),
        HyperplaneCase::CutsG1Theta2 => {
            two_class_membership(geom.theta1 + geom.theta2 * u, geom.a2)
        }
    }
}

/// Counts of hyperplanes in each case: `j` separate, `k_theta1` and
/// `k_theta2` cut cone 1 on either side of `x`, `k2` cut cone 2, and `k`
/// separate nothing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventConfig {
    pub j: usize,
    pub k_theta1: usize,
    pub k_theta2: usize,
    pub k2: usize,
    pub k: usize,
}

impl EventConfig {
    pub fn new(j: usize, k_theta1: usize, k_theta2: usize, k2: usize, k: usize) -> Self {
        EventConfig {
            j,
            k_theta1,
            k_theta2,
            k2,
            k,
        }
    }

    pub fn m(&self) -> usize {
        self.j + self.k_theta1 + self.k_theta2 + self.k2 + self.k
    }

    pub fn parts(&self) -> [usize; 5] {
        [self.j, self.k_theta1, self.k_theta2, self.k2, self.k]
    }
}

/// All compositions of `m` into 5 non-negative parts in lexicographic order;
/// there are `C(m + 4, 4)` of them.
pub fn compositions(m: usize) -> impl Iterator<Item = EventConfig> {
    (0..=m).flat_map(move |j| {
        (0..=m - j).flat_map(move |a| {
            (0..=m - j - a).flat_map(move |b| {
                (0..=m - j - a - b).map(move |c| EventConfig::new(j, a, b, c, m - j - a - b - c))
            })
        })
    })
}

/// `C(m + 4, 4)`.
pub fn composition_count(m: usize) -> u128 {
    let m = m as u128;
    (m + 1) * (m + 2) * (m + 3) * (m + 4) / 24
}

/// Table of `ln(n!)` for `n = 0..=max`.
#[derive(Clone, Debug)]
pub struct LnFactorials(Vec<f64>);

impl LnFactorials {
    pub fn new(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        table.push(0.0);
        let mut acc = 0.0;
        for n in 1..=max {
            acc += (n as f64).ln();
            table.push(acc);
        }
        LnFactorials(table)
    }

    pub fn get(&self, n: usize) -> f64 {
        self.0[n]
    }

    /// `ln` of the multinomial coefficient `(sum parts)! / prod(parts!)`.
    pub fn ln_multinomial(&self, parts: &[usize]) -> f64 {
        let total: usize = parts.iter().sum();
        parts
            .iter()
            .fold(self.get(total), |acc, &p| acc - self.get(p))
    }
}

/// Multinomial probability of `parts` with cell probabilities `probs`,
/// evaluated in log space. `0^0 = 1`; a positive count on a zero-probability
/// cell gives 0.
pub fn multinomial_pmf(parts: &[usize; 5], probs: &[f64; 5], ln_fact: &LnFactorials) -> f64 {
    let mut ln_p = ln_fact.ln_multinomial(parts);
    for (&k, &p) in parts.iter().zip(probs) {
        if k == 0 {
            continue;
        }
        if p <= 0.0 {
            return 0.0;
        }
        ln_p += k as f64 * p.ln();
    }
    ln_p.exp()
}

/// Probability that a uniformly oriented line falls in each case, in
/// [`EventConfig`] order.
pub fn case_probabilities(geom: &ConeGeometry) -> [f64; 5] {
    [
        geom.a12 / PI,
        geom.theta1 / PI,
        geom.theta2 / PI,
        geom.a2 / PI,
        geom.outside() / PI,
    ]
}

/// Probability that `m = cfg.m()` independent random hyperplanes fall into
/// the cases in the counts given by `cfg`.
pub fn event_probability(cfg: &EventConfig, geom: &ConeGeometry) -> f64 {
    let ln_fact = LnFactorials::new(cfg.m());
    multinomial_pmf(&cfg.parts(), &case_probabilities(geom), &ln_fact)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom() -> ConeGeometry {
        ConeGeometry::new(PI / 12.0, PI / 12.0, PI / 6.0, PI / 24.0, PI / 24.0).unwrap()
    }

    #[test]
    fn table_rows() {
        let g = geom();
        assert_eq!(
            cone_membership(HyperplaneCase::Separates, &g, 0.3, 0.3),
            (1.0, 0.0)
        );
        assert_eq!(
            cone_membership(HyperplaneCase::NoSeparate, &g, 0.3, 0.3),
            (0.0, 0.0)
        );
        let (r1, r2) = cone_membership(HyperplaneCase::CutsG1Theta2, &g, 0.5, 0.9);
        assert!((r1 - 3.0 / 49.0).abs() < 1e-15);
        assert!((r2 - 4.0 / 49.0).abs() < 1e-15);
        // u' = 1 puts all of cone 2 on x's side
        assert_eq!(
            cone_membership(HyperplaneCase::CutsG2, &g, 0.0, 1.0),
            (0.0, 0.0)
        );
        assert_eq!(
            cone_membership(HyperplaneCase::CutsG2, &g, 0.0, 0.0),
            (1.0, 0.0)
        );
    }

    #[test]
    fn event_examples() {
        let g = geom();
        let p = event_probability(&EventConfig::new(1, 0, 0, 0, 0), &g);
        assert!((p - 1.0 / 6.0).abs() < 1e-15);
        let p = event_probability(&EventConfig::new(1, 0, 0, 0, 1), &g);
        assert!((p - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn zero_probability_cells() {
        let g = ConeGeometry::symmetric(PI / 3.0, PI / 3.0).unwrap();
        assert_eq!(case_probabilities(&g)[4], 0.0);
        assert_eq!(event_probability(&EventConfig::new(0, 0, 0, 0, 1), &g), 0.0);
        let total: f64 = compositions(6).map(|c| event_probability(&c, &g)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        for m in 0..8 {
            let all: Vec<_> = compositions(m).collect();
            assert_eq!(all.len() as u128, composition_count(m));
            assert!(all.windows(2).all(|w| w[0] < w[1]));
            assert!(all.iter().all(|c| c.m() == m));
        }
    }
}
