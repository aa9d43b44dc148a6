//! Explicit multinomial lower bound on the correct-classification
//! probability for equal cones with the test point at the center of cone 1.

use super::cones::{case_probabilities, composition_count, multinomial_pmf, LnFactorials};
use crate::error::{Error, Result};
use crate::synthgen::ConeGeometry;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundResult {
    /// `1 - excluded_mass`, clamped to `[0, 1]`.
    pub lower_bound: f64,
    /// Total probability of the excluded configurations.
    pub excluded_mass: f64,
    /// Number of configurations excluded (and summed).
    pub terms_excluded: u128,
    /// Number of all configurations, `C(m + 4, 4)`.
    pub enumeration_size: u128,
}

fn require_hypotheses(geom: &ConeGeometry) -> Result<()> {
    geom.validate()?;
    if !geom.equal_cones() || !geom.centered_point() {
        return Err(Error::Unsupported(format!(
            "bound needs A1 == A2 and theta1 == theta2, got {geom:?}"
        )));
    }
    Ok(())
}

/// Whether a configuration is excluded: `k_theta2 >= 9 (j + k_theta1)`.
pub fn is_excluded(j: usize, k_theta1: usize, k_theta2: usize) -> bool {
    k_theta2 >= 9 * (j + k_theta1)
}

/// Sum of the multinomial terms over the excluded configurations, or over
/// every configuration when `constrained` is false. Returns the sum and the
/// number of terms.
pub fn excluded_mass(m: usize, geom: &ConeGeometry, constrained: bool) -> Result<(f64, u128)> {
    require_hypotheses(geom)?;
    let probs = case_probabilities(geom);
    let ln_fact = LnFactorials::new(m);
    let mut sum = 0.0;
    let mut terms = 0u128;
    for j in 0..=m {
        for kt1 in 0..=m - j {
            let start = if constrained { 9 * (j + kt1) } else { 0 };
            for kt2 in start..=m - j - kt1 {
                let rest = m - j - kt1 - kt2;
                for k2 in 0..=rest {
                    sum += multinomial_pmf(&[j, kt1, kt2, k2, rest - k2], &probs, &ln_fact);
                    terms += 1;
                }
            }
        }
    }
    Ok((sum, terms))
}

/// Lower bound on the probability that the single-layer classifier labels
/// the test point correctly with `m` random hyperplanes:
/// one minus the probability of every configuration with
/// `k_theta2 >= 9 (j + k_theta1)`.
pub fn theorem_bound(m: usize, geom: &ConeGeometry) -> Result<BoundResult> {
    let (excluded, terms) = excluded_mass(m, geom, true)?;
    Ok(BoundResult {
        lower_bound: (1.0 - excluded).clamp(0.0, 1.0),
        excluded_mass: excluded,
        terms_excluded: terms,
        enumeration_size: composition_count(m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::counting::count_w1;

    fn geom(a12: f64) -> ConeGeometry {
        ConeGeometry::symmetric_degrees(15.0, a12).unwrap()
    }

    #[test]
    fn m_one_by_hand() {
        let r = theorem_bound(1, &geom(30.0)).unwrap();
        assert!(
            (r.lower_bound - 5.0 / 24.0).abs() < 1e-12,
            "{}",
            r.lower_bound
        );
        assert_eq!(r.terms_excluded, 3);
        assert_eq!(r.enumeration_size, 5);
    }

    #[test]
    fn m_zero_excludes_everything() {
        let r = theorem_bound(0, &geom(30.0)).unwrap();
        assert_eq!(r.lower_bound, 0.0);
    }

    #[test]
    fn unconstrained_sum_is_one() {
        for m in [1, 5, 17, 40] {
            let (s, n) = excluded_mass(m, &geom(40.0), false).unwrap();
            assert!((s - 1.0).abs() < 1e-12, "m = {m}: {s}");
            assert_eq!(n, composition_count(m));
        }
    }

    #[test]
    fn excluded_terms_follow_w1() {
        for m in [0, 9, 10, 33, 60] {
            let r = theorem_bound(m, &geom(20.0)).unwrap();
            assert_eq!(r.terms_excluded, count_w1(m as u64).unwrap());
        }
    }

    /// Exact integer multinomial coefficients for small `m`.
    fn coefficient(parts: [usize; 5]) -> u128 {
        let mut c = 1u128;
        let mut n = 0u128;
        for p in parts {
            for i in 1..=p as u128 {
                n += 1;
                c = c * n / i;
            }
        }
        c
    }

    #[test]
    fn exact_coefficients_cross_check() {
        let g = geom(40.0);
        let probs = case_probabilities(&g);
        for m in [3, 12, 25] {
            let mut want = 0.0;
            for j in 0..=m {
                for a in 0..=m - j {
                    for b in 0..=m - j - a {
                        for c in 0..=m - j - a - b {
                            if !is_excluded(j, a, b) {
                                continue;
                            }
                            let parts = [j, a, b, c, m - j - a - b - c];
                            let pw: f64 = parts
                                .iter()
                                .zip(probs)
                                .map(|(&k, p)| p.powi(k as i32))
                                .product();
                            want += coefficient(parts) as f64 * pw;
                        }
                    }
                }
            }
            let r = theorem_bound(m, &g).unwrap();
            assert!((r.excluded_mass - want).abs() < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn rejects_off_center_or_unequal() {
        let off = ConeGeometry::new(0.3, 0.3, 0.5, 0.1, 0.2).unwrap();
        assert!(matches!(theorem_bound(5, &off), Err(Error::Unsupported(_))));
        let unequal = ConeGeometry::new(0.3, 0.4, 0.5, 0.15, 0.15).unwrap();
        assert!(matches!(
            theorem_bound(5, &unequal),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn wide_gap_trend() {
        let g = geom(80.0);
        let at10 = theorem_bound(10, &g).unwrap().lower_bound;
        let at300 = theorem_bound(300, &g).unwrap().lower_bound;
        assert!(at300 >= at10);
        assert!(at300 >= 0.9, "{at300}");
    }
}
