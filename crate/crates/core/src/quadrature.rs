//! Globally adaptive 7/15-point Gauss-Kronrod quadrature.

use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-8,
            rel_tol: 1e-6,
            max_intervals: 2000,
        }
    }
}

impl QuadratureConfig {
    pub fn tight() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_intervals: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&o.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Piece {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Piece {
        a,
        b,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
    }
}

/// Integrates `f` over `[a, b]`, bisecting the worst interval until the
/// summed error estimate meets `max(abs_tol, rel_tol |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Quadrature> {
    integrate_with_breaks(f, &[a, b], cfg)
}

/// Like [`integrate`] over `[points[0], points[last]]`, with the initial
/// partition at the given (sorted) points. Kinks and discontinuities
/// should be listed here.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Quadrature> {
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        if w[1] > w[0] {
            heap.push(gk15(&f, w[0], w[1]));
        }
    }
    if heap.is_empty() {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    loop {
        let (value, error) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
        let target = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if error <= target {
            return Ok(Quadrature {
                value,
                error,
                intervals: heap.len(),
            });
        }
        if heap.len() >= cfg.max_intervals {
            return Err(Error::Quadrature {
                estimate: value,
                error,
            });
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval cannot be split further in floating point
            return Err(Error::Quadrature {
                estimate: value,
                error,
            });
        }
        heap.push(gk15(&f, worst.a, mid));
        heap.push(gk15(&f, mid, worst.b));
    }
}

/// Integrates over `[a, b]` through `x = a + (b - a)(3u^2 - 2u^3)`, whose
/// Jacobian vanishes at both ends and absorbs inverse-square-root
/// endpoint singularities.
pub fn integrate_endpoint_singular<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<Quadrature> {
    let len = b - a;
    integrate(
        |u| {
            let jac = 6.0 * u * (1.0 - u) * len;
            if jac == 0.0 {
                return 0.0;
            }
            f(a + len * u * u * (3.0 - 2.0 * u)) * jac
        },
        0.0,
        1.0,
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_are_exact() {
        let q = integrate(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, &QuadratureConfig::default()).unwrap();
        let exact = (64.0 - 1.0) / 6.0 - (8.0 + 1.0);
        assert!((q.value - exact).abs() < 1e-13);
        assert_eq!(q.intervals, 1);
    }

    #[test]
    fn smooth_and_peaked() {
        let cfg = QuadratureConfig::tight();
        let q = integrate(f64::sin, 0.0, PI, &cfg).unwrap();
        assert!((q.value - 2.0).abs() < 1e-12);
        // narrow gaussian bump
        let s = 1e-3;
        let q = integrate_with_breaks(
            |x| (-(x * x) / (2.0 * s * s)).exp(),
            &[-1.0, 0.0, 1.0],
            &cfg,
        )
        .unwrap();
        assert!((q.value - s * (2.0 * PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn discontinuity_at_break() {
        let q = integrate_with_breaks(
            |x| if x < 0.3 { 1.0 } else { 0.0 },
            &[0.0, 0.3, 1.0],
            &QuadratureConfig::tight(),
        )
        .unwrap();
        assert!((q.value - 0.3).abs() < 1e-14);
    }

    #[test]
    fn inverse_sqrt_endpoints() {
        // int_0^1 1 / sqrt(x (1 - x)) dx = pi
        let q = integrate_endpoint_singular(
            |x| 1.0 / (x * (1.0 - x)).sqrt(),
            0.0,
            1.0,
            &QuadratureConfig::tight(),
        )
        .unwrap();
        assert!((q.value - PI).abs() < 1e-9, "{}", q.value);
    }

    #[test]
    fn reports_non_convergence() {
        let cfg = QuadratureConfig {
            abs_tol: 1e-15,
            rel_tol: 1e-15,
            max_intervals: 4,
        };
        match integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, &cfg) {
            Err(Error::Quadrature { estimate, error }) => {
                assert!(estimate > 1.0 && error > 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
