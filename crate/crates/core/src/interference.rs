//! Interference-to-signal ratio at a mobile served by sector 1 of the
//! central site, its expectation, SINR and link throughput.
//!
//! The serving beam points exactly at the mobile, so its gain is 1 and the
//! useful term of the site sum is exactly 1; ISR values here are the
//! remaining (interfering) part of the sum and are never negative.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::antenna::{site_gain, PatternParams};
use crate::error::{domain, Error, Result};
use crate::geometry::{ring_sites, PlanePoint, SectorId, SiteCoord};
use crate::propagation::LinearChannel;
use crate::quadrature::QuadratureConfig;
use crate::special::{omega, SeriesConfig};
use crate::stochastic::{
    expected_gain_closed_form, expected_sector_gain, lognormal_mean, mellin_moment, BeamState,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsrSample {
    pub isr: f64,
    pub sinr: f64,
    pub noise_term: f64,
    pub throughput_bps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MimoConfig {
    pub tx: u32,
    pub rx: u32,
    pub bandwidth_hz: f64,
}

/// Transmission layers never exceed this.
pub const MAX_LAYERS: u32 = 2;

impl Default for MimoConfig {
    fn default() -> Self {
        Self {
            tx: 4,
            rx: 2,
            bandwidth_hz: 20e6,
        }
    }
}

impl MimoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tx.min(self.rx) < 1 {
            return Err(domain("tx", "need at least one antenna on each side"));
        }
        if !(self.bandwidth_hz > 0.0) {
            return Err(domain("bandwidth_hz", "must be positive"));
        }
        Ok(())
    }

    pub fn layers(&self) -> u32 {
        self.tx.min(self.rx).min(MAX_LAYERS)
    }
}

/// Draws for one site: its beams and the shadowing ratio of its link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiteDraw {
    pub coord: SiteCoord,
    pub site: PlanePoint,
    pub beams: [BeamState; 3],
    pub shadow_ratio: f64,
}

fn mobile_range(m: PlanePoint) -> Result<f64> {
    let r = m.norm();
    if r == 0.0 {
        return Err(domain("m", "mobile at the serving site"));
    }
    Ok(r)
}

/// `(r / |s - m|)^(2b) G chi`, with `r = |m|`.
pub fn isr_individual(m: PlanePoint, s: PlanePoint, gain: f64, shadow_ratio: f64, two_b: f64) -> Result<f64> {
    let r = mobile_range(m)?;
    let d = m.distance(s);
    if d == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    Ok((r / d).powf(two_b) * gain * shadow_ratio)
}

fn site_term(m: PlanePoint, d: &SiteDraw, params: &PatternParams, l_b: f64, two_b: f64) -> Result<f64> {
    let gain = if d.coord == SiteCoord::SERVING {
        // sector 1 carries the useful signal
        let mut beams = d.beams;
        beams[0].occupied = false;
        site_gain(m, d.site, &beams, params, l_b)?
    } else {
        site_gain(m, d.site, &d.beams, params, l_b)?
    };
    isr_individual(m, d.site, gain, d.shadow_ratio, two_b)
}

/// Interfering sum of all sites, the serving site's sectors 2 and 3
/// included.
pub fn isr_cumulative(
    m: PlanePoint,
    draws: &[SiteDraw],
    params: &PatternParams,
    l_b: f64,
    two_b: f64,
) -> Result<f64> {
    if !draws.iter().any(|d| d.coord == SiteCoord::SERVING) {
        return Err(domain("sites", "serving site missing"));
    }
    draws
        .iter()
        .map(|d| site_term(m, d, params, l_b, two_b))
        .sum()
}

/// The terms of [`isr_cumulative`] grouped by ring; entry `k` is ring `k`.
pub fn isr_by_ring(
    m: PlanePoint,
    draws: &[SiteDraw],
    params: &PatternParams,
    l_b: f64,
    two_b: f64,
) -> Result<Vec<f64>> {
    let n = draws.iter().map(|d| d.coord.ring()).max().unwrap_or(0) as usize;
    let mut out = vec![0.0; n + 1];
    for d in draws {
        out[d.coord.ring() as usize] += site_term(m, d, params, l_b, two_b)?;
    }
    Ok(out)
}

/// `sum_{s != 0} (r / |s - m|)^(2b)` over rings `1..=n_rings`.
pub fn lattice_sum_at(m: PlanePoint, two_b: f64, n_rings: u32, delta: f64) -> f64 {
    let r = m.norm();
    ring_sites(n_rings, delta)
        .iter()
        .filter(|(c, _)| *c != SiteCoord::SERVING)
        .map(|(_, s)| (r / m.distance(*s)).powf(two_b))
        .sum()
}

const ORACLE_BEARINGS: usize = 48;

/// Brute-force lattice sum for a mobile at distance `x delta`, averaged
/// over its bearing. The sum has period `pi/3` in the bearing, so a
/// uniform rule over one period converges geometrically.
pub fn lattice_sum_oracle(x: f64, two_b: f64, n_rings: u32) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let sites: Vec<PlanePoint> = ring_sites(n_rings, 1.0)
        .into_iter()
        .filter(|(c, _)| *c != SiteCoord::SERVING)
        .map(|(_, s)| s)
        .collect();
    let total: f64 = (0..ORACLE_BEARINGS)
        .map(|k| {
            let m = PlanePoint::from_polar(x, PI / 3.0 * k as f64 / ORACLE_BEARINGS as f64);
            // near sites last so the small tail terms are added first
            sites.iter().rev().map(|s| (x / m.distance(*s)).powf(two_b)).sum::<f64>()
        })
        .sum();
    total / ORACLE_BEARINGS as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesSum {
    pub value: f64,
    pub terms_used: usize,
    /// false when `max_terms` was reached before the tolerance
    pub converged: bool,
}

/// Lattice sum of the whole infinite network for a mobile at distance
/// `x delta`, as the power series
/// `6 x^(2b) sum_h (Gamma(b+h) / (Gamma(b) h!))^2 omega(b+h) x^(2h)`.
pub fn isr_series_approx(x: f64, b: f64, cfg: &SeriesConfig) -> Result<SeriesSum> {
    cfg.validate()?;
    if !(b > 1.0) {
        return Err(domain("b", format!("need b > 1, got {b}")));
    }
    if !(0.0..1.0).contains(&x) {
        return Err(domain("x", format!("need 0 <= x < 1, got {x}")));
    }
    if x == 0.0 {
        return Ok(SeriesSum {
            value: 0.0,
            terms_used: 0,
            converged: true,
        });
    }
    let x2 = x * x;
    let mut coef = 1.0;
    let mut xp = 1.0;
    let mut sum = 0.0;
    for h in 0..cfg.max_terms {
        if h > 0 {
            let k = (b + h as f64 - 1.0) / h as f64;
            coef *= k * k;
            xp *= x2;
        }
        let term = coef * omega(b + h as f64)? * xp;
        sum += term;
        if term <= cfg.rel_tol * sum {
            return Ok(SeriesSum {
                value: 6.0 * x.powf(2.0 * b) * sum,
                terms_used: h + 1,
                converged: true,
            });
        }
    }
    Ok(SeriesSum {
        value: 6.0 * x.powf(2.0 * b) * sum,
        terms_used: cfg.max_terms,
        converged: false,
    })
}

/// Vertical factor assumed when taking expectations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum VerticalModel {
    /// 2D beamforming, vertical factor 1
    Flat,
    /// same vertical factor for every site
    Constant(f64),
    /// fixed downtilt in radians; the factor depends on the site distance
    FixedTilt(f64),
    /// downtilt follows each beam's random target
    Variable,
}

/// How the interfering lattice is summed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LatticeRoute {
    /// infinite lattice through the power series; needs a site-independent
    /// vertical factor
    Series(SeriesConfig),
    /// site by site over the given number of rings
    Rings(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectedIsr {
    pub value: f64,
    /// sectors 2 and 3 of the serving site
    pub serving: f64,
    /// all other sites, shadowing mean included
    pub lattice: f64,
    pub series: Option<SeriesSum>,
}

/// Inputs of [`expected_isr`] that describe the network rather than the
/// mobile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectationSetup<'a> {
    pub delta: f64,
    pub ch: &'a LinearChannel,
    pub eta: f64,
    pub params: &'a PatternParams,
    pub vertical: VerticalModel,
    pub route: LatticeRoute,
    pub quadrature: QuadratureConfig,
}

fn vertical_at(setup: &ExpectationSetup, m: PlanePoint, s: PlanePoint) -> f64 {
    match setup.vertical {
        VerticalModel::Flat | VerticalModel::Variable => 1.0,
        VerticalModel::Constant(v) => v,
        VerticalModel::FixedTilt(t) => {
            setup.params.vertical((setup.ch.l_b / m.distance(s)).atan() - t)
        }
    }
}

/// Mean gain of one occupied beam of sector `c` of `s` towards `m`.
fn beam_mean_gain(setup: &ExpectationSetup, m: PlanePoint, s: PlanePoint, c: SectorId) -> Result<f64> {
    match setup.vertical {
        VerticalModel::Variable if setup.params.w_v.is_some() => mellin_moment(
            2.0,
            m,
            s,
            c,
            setup.params,
            setup.delta,
            setup.ch.l_b,
            &setup.quadrature,
        ),
        _ => Ok(expected_sector_gain(m, s, c, setup.params.w_h, &setup.quadrature)?
            * vertical_at(setup, m, s)),
    }
}

/// Mean three-sector gain of an interfering site.
fn site_mean_gain(setup: &ExpectationSetup, m: PlanePoint, s: PlanePoint) -> Result<f64> {
    match setup.vertical {
        VerticalModel::Variable if setup.params.w_v.is_some() => {
            let mut g = 0.0;
            for c in SectorId::ALL {
                g += beam_mean_gain(setup, m, s, c)?;
            }
            Ok(setup.eta * g)
        }
        _ => expected_gain_closed_form(setup.eta, vertical_at(setup, m, s), setup.params.w_h),
    }
}

/// Expected ISR at `m`. Interferer shadowing enters through its mean; the
/// serving site's co-sectors share the mast and carry ratio 1.
pub fn expected_isr(m: PlanePoint, setup: &ExpectationSetup) -> Result<ExpectedIsr> {
    let r = mobile_range(m)?;
    if !(0.0..=1.0).contains(&setup.eta) {
        return Err(domain("eta", format!("must lie in [0, 1], got {}", setup.eta)));
    }
    let origin = PlanePoint::ORIGIN;
    let mut serving = 0.0;
    for c in &SectorId::ALL[1..] {
        serving += setup.eta * beam_mean_gain(setup, m, origin, *c)?;
    }
    let shadow = lognormal_mean(setup.ch.sigma_ratio_db);
    let two_b = setup.ch.two_b;
    let (lattice, series) = match setup.route {
        LatticeRoute::Series(cfg) => {
            let v = match setup.vertical {
                VerticalModel::Flat => 1.0,
                VerticalModel::Constant(v) => v,
                _ => {
                    return Err(Error::Unsupported(
                        "series route needs a vertical factor that is the same for every site",
                    ))
                }
            };
            let sum = isr_series_approx(r / setup.delta, two_b / 2.0, &cfg)?;
            let g = expected_gain_closed_form(setup.eta, v, setup.params.w_h)?;
            (shadow * g * sum.value, Some(sum))
        }
        LatticeRoute::Rings(n) => {
            let mut total = 0.0;
            for (coord, s) in ring_sites(n, setup.delta) {
                if coord == SiteCoord::SERVING {
                    continue;
                }
                total += (r / m.distance(s)).powf(two_b) * site_mean_gain(setup, m, s)?;
            }
            (shadow * total, None)
        }
    };
    Ok(ExpectedIsr {
        value: serving + lattice,
        serving,
        lattice,
        series,
    })
}

/// `1 / (isr + y0)` with `y0 = a N r^(2b) / (A P chi0)`.
pub fn sinr(isr: f64, m: PlanePoint, chi0: f64, ch: &LinearChannel) -> Result<f64> {
    let r = mobile_range(m)?;
    Ok(sinr_from_parts(isr, ch.noise_term(r, chi0)))
}

pub fn sinr_from_parts(isr: f64, noise_term: f64) -> f64 {
    1.0 / (isr + noise_term)
}

/// `min(Tx, Rx, 2) B log2(1 + sinr)` in bit/s.
pub fn throughput(sinr: f64, mimo: &MimoConfig) -> f64 {
    mimo.layers() as f64 * mimo.bandwidth_hz * sinr.ln_1p() / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antenna::downtilt;
    use crate::propagation::ChannelParams;

    fn beam(sector: u8, occupied: bool, target_theta: f64) -> BeamState {
        BeamState {
            sector: SectorId::new(sector).unwrap(),
            occupied,
            target_theta,
            target_r: 0.3,
            tilt: downtilt(0.03, 0.3),
        }
    }

    #[test]
    fn individual_terms() {
        let m = PlanePoint::new(0.2, 0.0);
        let s = PlanePoint::new(0.2, 0.2);
        assert_eq!(isr_individual(m, s, 0.0, 1.0, 3.5).unwrap(), 0.0);
        assert!((isr_individual(m, s, 1.0, 1.0, 3.5).unwrap() - 1.0).abs() < 1e-14);
        let s2 = PlanePoint::new(0.2, 0.4);
        let v = isr_individual(m, s2, 1.0, 1.0, 3.5).unwrap();
        assert!((v - 2f64.powf(-3.5)).abs() < 1e-15);
        assert!((v - 0.0884).abs() < 1e-4);
        assert!(isr_individual(PlanePoint::ORIGIN, s, 1.0, 1.0, 3.5).is_err());
        assert_eq!(isr_individual(m, m, 1.0, 1.0, 3.5), Err(Error::CoincidentPoints));
    }

    #[test]
    fn serving_site_only() {
        let p = PatternParams::from_degrees(30.0, 8.0).unwrap();
        let m = PlanePoint::from_polar(0.3, 0.9);
        let mut d = SiteDraw {
            coord: SiteCoord::SERVING,
            site: PlanePoint::ORIGIN,
            beams: [beam(1, true, 0.9), beam(2, false, 3.0), beam(3, false, 5.0)],
            shadow_ratio: 1.0,
        };
        assert_eq!(isr_cumulative(m, &[d], &p, 0.03, 3.5).unwrap(), 0.0);
        d.beams[1] = beam(2, true, 1.5);
        let geo = crate::antenna::offsets_with_tilt(m, d.site, 1.5, d.beams[1].tilt, 0.03).unwrap();
        let expect = p.horizontal(geo.alpha) * p.vertical(geo.phi);
        assert!(expect > 0.0);
        assert!((isr_cumulative(m, &[d], &p, 0.03, 3.5).unwrap() - expect).abs() < 1e-15);
        let other = SiteDraw {
            coord: SiteCoord::new(1, 0),
            site: PlanePoint::new(0.75, 0.0),
            ..d
        };
        assert!(isr_cumulative(m, &[other], &p, 0.03, 3.5).is_err());
    }

    #[test]
    fn series_small_x_and_ratio() {
        let cfg = SeriesConfig::default();
        assert_eq!(isr_series_approx(0.0, 1.75, &cfg).unwrap().value, 0.0);
        let tiny = isr_series_approx(1e-3, 1.75, &cfg).unwrap();
        // leading term 6 omega(b) x^(2b)
        assert!((tiny.value / (6.0 * omega(1.75).unwrap() * 1e-3f64.powf(3.5)) - 1.0).abs() < 1e-5);
        assert!(isr_series_approx(1.0, 1.75, &cfg).is_err());
        assert!(isr_series_approx(0.5, 1.0, &cfg).is_err());
        let capped = isr_series_approx(0.95, 1.75, &SeriesConfig { max_terms: 10, rel_tol: 1e-12 }).unwrap();
        assert!(!capped.converged);
        assert_eq!(capped.terms_used, 10);
        // term ratio tends to x^2
        let (b, x): (f64, f64) = (1.75, 0.5);
        let term = |h: usize| {
            let mut c = 1.0;
            for k in 1..=h {
                let f = (b + k as f64 - 1.0) / k as f64;
                c *= f * f;
            }
            c * omega(b + h as f64).unwrap() * x.powi(2 * h as i32)
        };
        assert!(term(1) > 0.0);
        assert!((term(200) / term(199) / (x * x) - 1.0).abs() < 0.01);
    }

    #[test]
    fn series_increasing() {
        let cfg = SeriesConfig::default();
        let mut prev = 0.0;
        for k in 1..=90 {
            let v = isr_series_approx(k as f64 / 100.0, 1.75, &cfg).unwrap().value;
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn oracle_basics() {
        assert_eq!(lattice_sum_oracle(0.0, 3.5, 10), 0.0);
        let a = lattice_sum_oracle(0.3, 3.5, 30);
        let b = lattice_sum_oracle(0.3, 3.5, 60);
        assert!(b > a);
    }

    #[test]
    fn sinr_and_throughput() {
        let ch = ChannelParams::default().linear().unwrap();
        let m = PlanePoint::new(0.25, 0.0);
        let y0 = ch.noise_term(0.25, 1.0);
        assert!((sinr(0.0, m, 1.0, &ch).unwrap() - 1.0 / y0).abs() < 1e-9 / y0);
        assert_eq!(sinr_from_parts(0.0, 1.0), 1.0);
        assert_eq!(sinr_from_parts(4.0, 0.0), 0.25);
        let mimo = MimoConfig::default();
        assert_eq!(mimo.layers(), 2);
        assert_eq!(throughput(0.0, &mimo), 0.0);
        assert!((throughput(1.0, &mimo) - 40e6).abs() < 1e-6);
        assert!((throughput(3.0, &mimo) - 80e6).abs() < 1e-6);
        let siso = MimoConfig { tx: 1, rx: 1, bandwidth_hz: 20e6 };
        assert!((throughput(1.0, &siso) - 20e6).abs() < 1e-6);
        assert!(MimoConfig { tx: 0, ..mimo }.validate().is_err());
    }

    #[test]
    fn expected_isr_empty_network() {
        let ch = ChannelParams { sigma_db: 0.0, sigma_ratio_db: Some(0.0), ..Default::default() }
            .linear()
            .unwrap();
        let p = PatternParams::from_degrees(14.0, 8.0).unwrap();
        let setup = ExpectationSetup {
            delta: 0.75,
            ch: &ch,
            eta: 0.0,
            params: &p,
            vertical: VerticalModel::FixedTilt(8f64.to_radians()),
            route: LatticeRoute::Rings(3),
            quadrature: QuadratureConfig::default(),
        };
        let m = PlanePoint::from_polar(0.2, 1.0);
        assert_eq!(expected_isr(m, &setup).unwrap().value, 0.0);
        let series = ExpectationSetup {
            route: LatticeRoute::Series(SeriesConfig::default()),
            ..setup
        };
        assert!(matches!(expected_isr(m, &series), Err(Error::Unsupported(_))));
        let flat = ExpectationSetup { vertical: VerticalModel::Flat, eta: 1.0, ..series };
        let e = expected_isr(m, &flat).unwrap();
        assert!(e.value.is_finite() && e.value > 0.0);
        assert!(e.series.unwrap().converged);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn sinr_decreasing(i1 in 0.0f64..100.0, i2 in 0.0f64..100.0, y in 1e-6f64..10.0) {
                prop_assume!(i1 < i2);
                prop_assert!(sinr_from_parts(i1, y) > sinr_from_parts(i2, y));
                prop_assert!(sinr_from_parts(y, i1) > sinr_from_parts(y, i2));
            }
        }
    }
}
