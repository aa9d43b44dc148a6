//! Synthetic geometries: labeled Gaussian clouds in the plane, and two-cone
//! angular data for the single-layer analysis.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::measure::DataMatrix;
use crate::rng::StreamRng;

/// Radius of the circle the built-in cloud centers sit on.
pub const BUILTIN_RADIUS: f64 = 5.0;
/// Standard deviation of every built-in cloud.
pub const BUILTIN_SPREAD: f64 = 0.5;

/// A mixture of isotropic Gaussian clouds in the plane. Cloud `k` is centered
/// at `centers[k]` and belongs to class `labels[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CloudSpec {
    pub centers: Vec<[f64; 2]>,
    pub labels: Vec<usize>,
    pub spread: f64,
}

impl CloudSpec {
    pub fn new(centers: Vec<[f64; 2]>, labels: Vec<usize>, spread: f64) -> Result<Self> {
        let spec = CloudSpec {
            centers,
            labels,
            spread,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `G`, the largest class label.
    pub fn classes(&self) -> usize {
        self.labels.iter().copied().max().unwrap_or(0)
    }

    fn validate(&self) -> Result<()> {
        if self.centers.is_empty() {
            return Err(Error::Empty("cloud centers"));
        }
        if self.centers.len() != self.labels.len() {
            return Err(Error::Dimension {
                what: "cloud labels",
                expected: self.centers.len(),
                got: self.labels.len(),
            });
        }
        if !(self.spread > 0.0 && self.spread.is_finite()) {
            return Err(Error::config(format!(
                "cloud spread must be positive, got {}",
                self.spread
            )));
        }
        let g = self.classes();
        for class in 1..=g {
            if !self.labels.contains(&class) {
                return Err(Error::config(format!("class {class} has no cloud")));
            }
        }
        if self.labels.contains(&0) {
            return Err(Error::config("cloud labels are 1-based"));
        }
        Ok(())
    }
}

/// Centers evenly spaced on the circle of radius [`BUILTIN_RADIUS`], the
/// first at angle 0, with the given class sequence going counter-clockwise.
fn ring(labels: &[usize]) -> CloudSpec {
    let k = labels.len() as f64;
    let centers = (0..labels.len())
        .map(|i| {
            let phi = 2.0 * PI * i as f64 / k;
            [BUILTIN_RADIUS * phi.cos(), BUILTIN_RADIUS * phi.sin()]
        })
        .collect();
    CloudSpec {
        centers,
        labels: labels.to_vec(),
        spread: BUILTIN_SPREAD,
    }
}

/// Names accepted by [`builtin_config`].
pub const BUILTIN_NAMES: [&str; 5] = ["g3-c3", "g6-c2", "g8-c2", "g8-c3", "g8-c4"];

/// The built-in layouts as `(name, spec)` pairs:
///
/// | name    | clouds | classes | class sequence around the circle |
/// |---------|--------|---------|----------------------------------|
/// | `g3-c3` | 3      | 3       | 1 2 3                            |
/// | `g6-c2` | 6      | 2       | 1 1 2 1 2 2                      |
/// | `g8-c2` | 8      | 2       | 1 2 2 1 2 1 1 2                  |
/// | `g8-c3` | 8      | 3       | 1 2 3 1 3 2 3 2                  |
/// | `g8-c4` | 8      | 4       | 1 2 3 4 2 1 4 3                  |
pub fn builtin_configs() -> Vec<(&'static str, CloudSpec)> {
    vec![
        ("g3-c3", ring(&[1, 2, 3])),
        ("g6-c2", ring(&[1, 1, 2, 1, 2, 2])),
        ("g8-c2", ring(&[1, 2, 2, 1, 2, 1, 1, 2])),
        ("g8-c3", ring(&[1, 2, 3, 1, 3, 2, 3, 2])),
        ("g8-c4", ring(&[1, 2, 3, 4, 2, 1, 4, 3])),
    ]
}

pub fn builtin_config(name: &str) -> Result<CloudSpec> {
    builtin_configs()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| s)
        .ok_or_else(|| {
            Error::config(format!(
                "unknown config {name:?}; expected one of {}",
                BUILTIN_NAMES.join(", ")
            ))
        })
}

/// Draws exactly `count_per_class` points for every class. The `k`-th point of
/// a class goes to that class's clouds in round-robin order. Points are
/// returned grouped by class, in class order.
pub fn sample_clouds(
    spec: &CloudSpec,
    count_per_class: usize,
    rng: &mut StreamRng,
) -> Result<(DataMatrix, Vec<usize>)> {
    spec.validate()?;
    if count_per_class == 0 {
        return Err(Error::Empty("points per class"));
    }
    let g = spec.classes();
    let mut values = Vec::with_capacity(2 * g * count_per_class);
    let mut labels = Vec::with_capacity(g * count_per_class);
    for class in 1..=g {
        let clouds: Vec<usize> = (0..spec.labels.len())
            .filter(|&k| spec.labels[k] == class)
            .collect();
        for k in 0..count_per_class {
            let c = spec.centers[clouds[k % clouds.len()]];
            let dx: f64 = StandardNormal.sample(rng);
            let dy: f64 = StandardNormal.sample(rng);
            values.push(c[0] + spec.spread * dx);
            values.push(c[1] + spec.spread * dy);
            labels.push(class);
        }
    }
    Ok((DataMatrix::new(2, values)?, labels))
}

/// Two cones in the plane, all angles in radians.
///
/// Cone 1 spans polar angles `[0, A1]`, then a gap of `A12`, then cone 2 spans
/// `[A1 + A12, A1 + A12 + A2]`. The test point sits inside cone 1 so that the
/// sector of width `theta1` lies between it and cone 2 and the sector of width
/// `theta2` lies on its far side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeGeometry {
    pub a1: f64,
    pub a2: f64,
    pub a12: f64,
    pub theta1: f64,
    pub theta2: f64,
}

/// Slack used when checking the geometry identities.
const GEOM_TOL: f64 = 1e-12;

impl ConeGeometry {
    pub fn new(a1: f64, a2: f64, a12: f64, theta1: f64, theta2: f64) -> Result<Self> {
        let g = ConeGeometry {
            a1,
            a2,
            a12,
            theta1,
            theta2,
        };
        g.validate()?;
        Ok(g)
    }

    /// Equal cones with the test point in the middle of cone 1.
    pub fn symmetric(a1: f64, a12: f64) -> Result<Self> {
        ConeGeometry::new(a1, a1, a12, a1 / 2.0, a1 / 2.0)
    }

    /// Same as [`ConeGeometry::symmetric`] with angles in degrees.
    pub fn symmetric_degrees(a1: f64, a12: f64) -> Result<Self> {
        ConeGeometry::symmetric(a1.to_radians(), a12.to_radians())
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.a1, self.a2, self.a12, self.theta1, self.theta2];
        if all.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::config(format!(
                "cone angles must be finite and non-negative: {self:?}"
            )));
        }
        if (self.theta1 + self.theta2 - self.a1).abs() > GEOM_TOL * PI {
            return Err(Error::config(format!(
                "theta1 + theta2 = {} must equal A1 = {}",
                self.theta1 + self.theta2,
                self.a1
            )));
        }
        if self.a1 + self.a2 + self.a12 > PI * (1.0 + GEOM_TOL) {
            return Err(Error::config(format!(
                "A1 + A2 + A12 = {} exceeds pi; a hyperplane could cut both cones",
                self.a1 + self.a2 + self.a12
            )));
        }
        if self.a1 == 0.0 || self.a2 == 0.0 {
            return Err(Error::config("cones must have positive width"));
        }
        Ok(())
    }

    /// `pi - A1 - A2 - A12`, the angular measure of hyperplanes that leave
    /// both cones on one side. Rounding residue below the geometry tolerance
    /// is reported as zero.
    pub fn outside(&self) -> f64 {
        let rest = PI - self.a1 - self.a2 - self.a12;
        if rest <= GEOM_TOL * PI {
            0.0
        } else {
            rest
        }
    }

    /// True when `A1 == A2` (up to rounding).
    pub fn equal_cones(&self) -> bool {
        (self.a1 - self.a2).abs() <= GEOM_TOL * PI
    }

    /// True when the test point is in the middle of cone 1.
    pub fn centered_point(&self) -> bool {
        (self.theta1 - self.theta2).abs() <= GEOM_TOL * PI
    }

    /// Polar angle of the test point.
    pub fn test_angle(&self) -> f64 {
        self.a1 - self.theta1
    }

    /// Unit vector at the test point's polar angle.
    pub fn test_point(&self) -> [f64; 2] {
        let phi = self.test_angle();
        [phi.cos(), phi.sin()]
    }

    /// Polar-angle interval `[start, end]` of cone `class` (1 or 2).
    pub fn cone(&self, class: usize) -> (f64, f64) {
        match class {
            1 => (0.0, self.a1),
            _ => (self.a1 + self.a12, self.a1 + self.a12 + self.a2),
        }
    }
}

/// Unit-radius points with polar angle uniform inside each cone; cone `g`
/// receives `round(density * A_g)` points (at least one).
pub fn sample_cones(
    geom: &ConeGeometry,
    density: f64,
    rng: &mut StreamRng,
) -> Result<(DataMatrix, Vec<usize>)> {
    geom.validate()?;
    if !(density > 0.0 && density.is_finite()) {
        return Err(Error::config(format!(
            "density must be positive, got {density}"
        )));
    }
    let mut values = Vec::new();
    let mut labels = Vec::new();
    for class in 1..=2 {
        let (lo, hi) = geom.cone(class);
        let count = ((density * (hi - lo)).round() as usize).max(1);
        for _ in 0..count {
            let phi = lo + (hi - lo) * rng.random::<f64>();
            values.push(phi.cos());
            values.push(phi.sin());
            labels.push(class);
        }
    }
    Ok((DataMatrix::new(2, values)?, labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, Domain};

    fn rng(seed: u64) -> StreamRng {
        substream(seed, Domain::Sample, 0, 0)
    }

    #[test]
    fn builtin_class_counts() {
        let want = [(3, 3), (6, 2), (8, 2), (8, 3), (8, 4)];
        for ((name, spec), (clouds, classes)) in builtin_configs().into_iter().zip(want) {
            assert_eq!(spec.centers.len(), clouds, "{name}");
            assert_eq!(spec.classes(), classes, "{name}");
            spec.validate().unwrap();
        }
        assert!(builtin_config("g9-c9").is_err());
    }

    #[test]
    fn degenerate_spread_hits_centers() {
        let mut spec = builtin_config("g3-c3").unwrap();
        spec.spread = 1e-12;
        let (x, labels) = sample_clouds(&spec, 4, &mut rng(1)).unwrap();
        for (col, &l) in x.columns().zip(&labels) {
            let c = spec.centers[l - 1];
            assert!((col[0] - c[0]).abs() < 1e-9 && (col[1] - c[1]).abs() < 1e-9);
        }
    }

    #[test]
    fn exact_class_counts_and_determinism() {
        let spec = builtin_config("g8-c3").unwrap();
        let (x, labels) = sample_clouds(&spec, 25, &mut rng(2)).unwrap();
        assert_eq!(x.len(), 75);
        for g in 1..=3 {
            assert_eq!(labels.iter().filter(|&&l| l == g).count(), 25);
        }
        let again = sample_clouds(&spec, 25, &mut rng(2)).unwrap();
        assert_eq!((x, labels), again);
        assert!(sample_clouds(&spec, 0, &mut rng(2)).is_err());
    }

    #[test]
    fn geometry_validation() {
        assert!(ConeGeometry::symmetric_degrees(15.0, 30.0).is_ok());
        assert!(ConeGeometry::symmetric_degrees(60.0, 61.0).is_err());
        assert!(ConeGeometry::new(0.2, 0.2, 0.1, 0.05, 0.05).is_err());
        assert!(ConeGeometry::new(-0.1, 0.2, 0.1, 0.0, -0.1).is_err());
    }

    #[test]
    fn cone_samples_respect_the_gap() {
        let g = ConeGeometry::symmetric_degrees(15.0, 30.0).unwrap();
        let (x, labels) = sample_cones(&g, 200.0, &mut rng(3)).unwrap();
        let angles: Vec<(f64, usize)> = x
            .columns()
            .zip(&labels)
            .map(|(c, &l)| (c[1].atan2(c[0]), l))
            .collect();
        for &(p, lp) in &angles {
            let (lo, hi) = g.cone(lp);
            assert!(p >= lo - 1e-12 && p <= hi + 1e-12);
            for &(q, lq) in &angles {
                if lp == 1 && lq == 2 {
                    assert!(q - p >= g.a12 - 1e-12);
                }
            }
        }
    }

    #[test]
    fn centered_test_point_is_mid_cone() {
        let g = ConeGeometry::symmetric_degrees(15.0, 30.0).unwrap();
        assert!((g.test_angle() - 7.5f64.to_radians()).abs() < 1e-15);
    }

    #[test]
    fn cone_angles_are_uniform() {
        // chi-square over 10 equal bins of cone 1; 3-sigma threshold
        let g = ConeGeometry::symmetric_degrees(15.0, 30.0).unwrap();
        let (x, labels) = sample_cones(&g, 50_000.0 / g.a1, &mut rng(4)).unwrap();
        let bins = 10;
        let mut hist = vec![0f64; bins];
        let mut n = 0.0;
        for (c, &l) in x.columns().zip(&labels) {
            if l == 1 {
                let p = c[1].atan2(c[0]) / g.a1;
                hist[((p * bins as f64) as usize).min(bins - 1)] += 1.0;
                n += 1.0;
            }
        }
        let e = n / bins as f64;
        let chi2: f64 = hist.iter().map(|o| (o - e).powi(2) / e).sum();
        let dof = (bins - 1) as f64;
        assert!(chi2 < dof + 3.0 * (2.0 * dof).sqrt(), "chi2 {chi2}");
    }
}
