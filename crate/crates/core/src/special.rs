//! Gamma, Riemann zeta, Hurwitz zeta and the hexagonal-lattice combination
//! `omega(z) = 3^-z zeta(z) (zeta(z, 1/3) - zeta(z, 2/3))`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    LANCZOS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS[0], |acc, (i, c)| acc + c / (x + i as f64 + 1.0))
}

fn check_pole(x: f64) -> Result<()> {
    if x <= 0.0 && x == x.floor() {
        return Err(domain("x", format!("gamma has a pole at {x}")));
    }
    if !x.is_finite() {
        return Err(domain("x", "not finite"));
    }
    Ok(())
}

/// Euler gamma function. Reflection is used below 1/2.
pub fn gamma_fn(x: f64) -> Result<f64> {
    check_pole(x)?;
    if x < 0.5 {
        return Ok(PI / ((PI * x).sin() * gamma_fn(1.0 - x)?));
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    Ok((2.0 * PI).sqrt() * ((x + 0.5) * t.ln() - t).exp() * lanczos_sum(x))
}

/// `ln |Gamma(x)|`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_pole(x)?;
    if x < 0.5 {
        return Ok((PI / (PI * x).sin().abs()).ln() - ln_gamma(1.0 - x)?);
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + lanczos_sum(x).ln())
}

/// Truncation control for the lattice series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesConfig {
    pub max_terms: usize,
    pub rel_tol: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            max_terms: 60,
            rel_tol: 1e-12,
        }
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_terms < 1 {
            return Err(domain("max_terms", "must be at least 1"));
        }
        if !(self.rel_tol > 0.0) {
            return Err(domain("rel_tol", "must be positive"));
        }
        Ok(())
    }
}

/// Euler-Maclaurin parameters for the Hurwitz zeta function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HurwitzConfig {
    /// terms summed directly before switching to the asymptotic tail
    pub leading_terms: usize,
    /// number of Bernoulli corrections, at most 8
    pub correction_order: usize,
}

impl Default for HurwitzConfig {
    fn default() -> Self {
        Self {
            leading_terms: 25,
            correction_order: 8,
        }
    }
}

// B_{2j} / (2j)! for j = 1..=8
const BERNOULLI_OVER_FACT: [f64; 8] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
    -3617.0 / 510.0 / 20_922_789_888_000.0,
];

/// `zeta(z, a) = sum_{k >= 0} (k + a)^-z` for `z > 1`, `a` in `(0, 1]`.
pub fn hurwitz_zeta(z: f64, a: f64) -> Result<f64> {
    hurwitz_zeta_with(z, a, HurwitzConfig::default())
}

pub fn hurwitz_zeta_with(z: f64, a: f64, cfg: HurwitzConfig) -> Result<f64> {
    if !(z > 1.0) || !z.is_finite() {
        return Err(domain("z", format!("need z > 1, got {z}")));
    }
    if !(a > 0.0 && a <= 1.0) {
        return Err(domain("a", format!("need a in (0, 1], got {a}")));
    }
    let n = cfg.leading_terms.max(1);
    let head: f64 = (0..n).map(|k| (k as f64 + a).powf(-z)).sum();
    let q = n as f64 + a;
    let mut tail = q.powf(1.0 - z) / (z - 1.0) + 0.5 * q.powf(-z);
    // rising factorial z (z+1) ... (z+2j-2) times q^{-z-2j+1}
    let mut rising = z;
    let mut qpow = q.powf(-z - 1.0);
    for (j, b) in BERNOULLI_OVER_FACT
        .iter()
        .enumerate()
        .take(cfg.correction_order.min(8))
    {
        if j > 0 {
            let k = 2.0 * j as f64;
            rising *= (z + k - 1.0) * (z + k);
            qpow /= q * q;
        }
        tail += b * rising * qpow;
    }
    Ok(head + tail)
}

/// Riemann zeta for `z > 1`.
pub fn riemann_zeta(z: f64) -> Result<f64> {
    hurwitz_zeta(z, 1.0)
}

/// `3^-z zeta(z) (zeta(z, 1/3) - zeta(z, 2/3))`.
pub fn omega(z: f64) -> Result<f64> {
    let third = hurwitz_zeta(z, 1.0 / 3.0)?;
    let two_thirds = hurwitz_zeta(z, 2.0 / 3.0)?;
    Ok(3f64.powf(-z) * riemann_zeta(z)? * (third - two_thirds))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    /// Direct summation of `n` terms plus a trapezoid-corrected tail
    /// integral; error is O(q^(-z-1)).
    fn brute_hurwitz(z: f64, a: f64, n: usize) -> f64 {
        let head: f64 = (0..n).rev().map(|k| (k as f64 + a).powf(-z)).sum();
        let q = n as f64 + a;
        let lower = q.powf(1.0 - z) / (z - 1.0);
        head + lower + 0.5 * q.powf(-z)
    }

    #[test]
    fn gamma_identities() {
        assert!(rel(gamma_fn(1.0).unwrap(), 1.0) < 1e-14);
        assert!(rel(gamma_fn(0.5).unwrap(), PI.sqrt()) < 1e-14);
        assert!(rel(gamma_fn(5.0).unwrap(), 24.0) < 1e-14);
        assert!(rel(gamma_fn(-0.5).unwrap(), -2.0 * PI.sqrt()) < 1e-13);
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-3.0).is_err());
        assert!((ln_gamma(10.0).unwrap() - 362_880f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn gamma_against_statrs() {
        let mut x = 0.1;
        while x <= 50.0 {
            let ours = gamma_fn(x).unwrap();
            let theirs = statrs::function::gamma::gamma(x);
            assert!(rel(ours, theirs) < 1e-12, "x={x}: {ours} vs {theirs}");
            let lg = statrs::function::gamma::ln_gamma(x);
            assert!((ln_gamma(x).unwrap() - lg).abs() < 1e-12 * lg.abs().max(1.0));
            x += 0.37;
        }
        // large arguments, as used by narrow beams
        for x in [143.0, 284.7, 600.25] {
            let lg = statrs::function::gamma::ln_gamma(x);
            assert!(rel(ln_gamma(x).unwrap(), lg) < 1e-13);
        }
    }

    #[test]
    fn zeta_identities() {
        assert!(rel(riemann_zeta(2.0).unwrap(), PI * PI / 6.0) < 1e-13);
        assert!(rel(riemann_zeta(4.0).unwrap(), PI.powi(4) / 90.0) < 1e-13);
        assert!(rel(hurwitz_zeta(2.0, 0.5).unwrap(), PI * PI / 2.0) < 1e-13);
        for z in [1.5, 2.0, 3.5, 7.0] {
            assert_eq!(hurwitz_zeta(z, 1.0).unwrap(), riemann_zeta(z).unwrap());
        }
        assert!(riemann_zeta(1.0).is_err());
        assert!(riemann_zeta(0.5).is_err());
        assert!(hurwitz_zeta(2.0, 0.0).is_err());
        assert!(hurwitz_zeta(2.0, 1.5).is_err());
    }

    #[test]
    fn zeta_against_brute_force() {
        let n = 10_000_000;
        assert!(rel(riemann_zeta(3.5).unwrap(), brute_hurwitz(3.5, 1.0, n)) < 1e-8);
        assert!(rel(hurwitz_zeta(3.5, 1.0 / 3.0).unwrap(), brute_hurwitz(3.5, 1.0 / 3.0, n)) < 1e-8);
        // mpmath reference values
        assert!(rel(riemann_zeta(3.5).unwrap(), 1.126_733_867_317_056_6) < 1e-13);
        assert!(rel(hurwitz_zeta(3.5, 1.0 / 3.0).unwrap(), 47.210_621_289_283_96) < 1e-13);
        assert!(rel(hurwitz_zeta(3.5, 2.0 / 3.0).unwrap(), 4.354_773_073_045_212) < 1e-13);
    }

    #[test]
    fn residue_split() {
        for z in [2.0, 3.5, 5.0] {
            let sum: f64 = [1.0 / 3.0, 2.0 / 3.0, 1.0]
                .iter()
                .map(|a| hurwitz_zeta(z, *a).unwrap())
                .sum();
            assert!(rel(sum, 3f64.powf(z) * riemann_zeta(z).unwrap()) < 1e-9);
        }
    }

    #[test]
    fn omega_values() {
        let n = 2_000_000;
        let composed = 3f64.powf(-2.0)
            * (PI * PI / 6.0)
            * (brute_hurwitz(2.0, 1.0 / 3.0, n) - brute_hurwitz(2.0, 2.0 / 3.0, n));
        assert!(rel(omega(2.0).unwrap(), composed) < 1e-9);
        assert!(rel(omega(1.75).unwrap(), 1.462_288_927_738_802_5) < 1e-12);
        let mut z = 1.05;
        while z <= 20.0 {
            assert!(omega(z).unwrap() > 0.0);
            z += 0.05;
        }
        let mut prev = omega(3.0).unwrap();
        let mut z = 3.25;
        while z <= 20.0 {
            let w = omega(z).unwrap();
            assert!(w < prev, "omega not decreasing at {z}");
            prev = w;
            z += 0.25;
        }
    }

    #[test]
    fn series_config_validation() {
        assert!(SeriesConfig::default().validate().is_ok());
        assert!(SeriesConfig { max_terms: 0, rel_tol: 1e-9 }.validate().is_err());
        assert!(SeriesConfig { max_terms: 5, rel_tol: 0.0 }.validate().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn gamma_recurrence(x in 0.1f64..49.0) {
                let lhs = gamma_fn(x + 1.0).unwrap();
                let rhs = x * gamma_fn(x).unwrap();
                prop_assert!(((lhs - rhs) / rhs).abs() < 1e-12);
            }
        }
    }
}
