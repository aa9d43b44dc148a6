//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use onebit::synthgen::ConeGeometry;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

/// Adaptive Simpson quadrature.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        let tol = tol.max(1e-15 * whole.abs());
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 40)
}

pub fn erf_by_quadrature(x: f64) -> f64 {
    2.0 / PI.sqrt() * integrate(&|t| (-t * t).exp(), 0.0, x, 1e-14)
}

pub fn erfi_by_quadrature(x: f64) -> f64 {
    2.0 / PI.sqrt() * integrate(&|t| (t * t).exp(), 0.0, x, 1e-14)
}

/// `E[exp(sign * theta / c * U^2)]`, `U ~ Uniform(a, b)`, by quadrature.
pub fn mgf_by_quadrature(theta: f64, c: f64, a: f64, b: f64, sign: f64) -> f64 {
    integrate(&|u| (sign * theta / c * u * u).exp(), a, b, 1e-13) / (b - a)
}

/// Sample mean and standard error of the same expectation.
pub fn mgf_by_sampling(
    theta: f64,
    c: f64,
    a: f64,
    b: f64,
    sign: f64,
    n: usize,
    seed: u64,
) -> (f64, f64) {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let (mut s, mut s2) = (0.0, 0.0);
    for _ in 0..n {
        let u = a + (b - a) * rng.random::<f64>();
        let v = (sign * theta / c * u * u).exp();
        s += v;
        s2 += v * v;
    }
    let mean = s / n as f64;
    let var = (s2 / n as f64 - mean * mean).max(0.0);
    (mean, (var / n as f64).sqrt())
}

/// Measure of `[lo, hi]` inside the closed half-circle of directions centered
/// at angle `c`.
fn overlap_with_half(lo: f64, hi: f64, c: f64) -> f64 {
    let c = c.rem_euclid(2.0 * PI);
    (-1..=1)
        .map(|k| {
            let s = c - FRAC_PI_2 + 2.0 * PI * k as f64;
            let e = c + FRAC_PI_2 + 2.0 * PI * k as f64;
            (hi.min(e) - lo.max(s)).max(0.0)
        })
        .sum()
}

/// Draws `m` Gaussian lines through the origin, scores the test point of
/// `geom` with the two-class membership index of the angular mass of each
/// cone on its side, and reports how often class 1 strictly wins. Returns the
/// frequency and its standard error.
pub fn direct_classification_probability(
    geom: &ConeGeometry,
    m: usize,
    trials: usize,
    seed: u64,
) -> (f64, f64) {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let phi = geom.test_angle();
    let x = [phi.cos(), phi.sin()];
    let (c1, c2) = (geom.cone(1), geom.cone(2));
    let mut wins = 0usize;
    for _ in 0..trials {
        let mut score = 0.0;
        for _ in 0..m {
            let a: [f64; 2] = [rng.sample(StandardNormal), rng.sample(StandardNormal)];
            let psi = a[1].atan2(a[0]);
            let side = if a[0] * x[0] + a[1] * x[1] >= 0.0 {
                psi
            } else {
                psi + PI
            };
            let p1 = overlap_with_half(c1.0, c1.1, side);
            let p2 = overlap_with_half(c2.0, c2.1, side);
            // equal masses computed from different endpoints differ by rounding
            let diff = if (p1 - p2).abs() < 1e-12 {
                0.0
            } else {
                (p1 - p2).abs()
            };
            let d = diff / ((p1 + p2) * (p1 + p2));
            score += p1 * d - p2 * d;
        }
        if score > 0.0 {
            wins += 1;
        }
    }
    let p = wins as f64 / trials as f64;
    (p, (p * (1.0 - p) / trials as f64).sqrt())
}

/// Workspace-relative MNIST directory, overridable with `MNIST_DIR`.
pub fn mnist_dir() -> std::path::PathBuf {
    match std::env::var_os("MNIST_DIR") {
        Some(d) => d.into(),
        None => std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/mnist"),
    }
}
