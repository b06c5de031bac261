//! Random beam steering and load, the laws of the resulting pattern values,
//! and the expected beamforming gain.
//!
//! Every beam of sector `c` aims at a user whose angle around the site is
//! uniform on `[theta_c - pi/3, theta_c + pi/3]` and whose distance is
//! uniform on `[0, (2 delta / 3) U(angle - theta_c)]`, `U` being the
//! 65-degree sector pattern. From a user `m`, the horizontal offset `alpha`
//! is then uniform and the vertical offset `phi` is a monotone image of the
//! target distance; the densities below follow by change of variables.
//!
//! Pattern values are zero on the back lobe, so the law of `H(alpha)` is a
//! mixture of an atom at zero and a continuous part. [`pdf_h`] and
//! [`pdf_v_given_h`] describe the continuous part only.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::antenna::{downtilt, pattern_value, PatternParams};
use crate::error::{domain, Error, Result};
use crate::geometry::{bearing, normalize_angle, sector_reach, PlanePoint, SectorId};
use crate::quadrature::{integrate_with_breaks, QuadratureConfig};
use crate::special::ln_gamma;

const TWO_PI_3: f64 = 2.0 * PI / 3.0;
const ALPHA_DENSITY: f64 = 3.0 / (2.0 * PI);

/// One sector's beam for a transmit interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamState {
    pub sector: SectorId,
    pub occupied: bool,
    /// angle of the served user around the site
    pub target_theta: f64,
    /// distance of the served user from the site, km
    pub target_r: f64,
    /// beam downtilt, radians
    pub tilt: f64,
}

/// Probability that an interfering sector carries a beam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoadModel {
    eta: f64,
}

impl LoadModel {
    pub fn new(eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(domain("eta", format!("must lie in [0, 1], got {eta}")));
        }
        Ok(Self { eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

/// Draws occupancy, target angle and target distance for sector `c`.
///
/// Exactly three uniforms are consumed whether or not the sector is
/// occupied, and occupancy is `u < eta`, so draws at different loads with
/// the same stream are coupled: raising `eta` only adds beams.
pub fn sample_beam<R: Rng + ?Sized>(
    c: SectorId,
    delta: f64,
    l_b: f64,
    eta: f64,
    rng: &mut R,
) -> BeamState {
    let occupied = rng.random::<f64>() < eta;
    let offset = (rng.random::<f64>() - 0.5) * TWO_PI_3;
    let target_r = rng.random::<f64>() * sector_reach(offset, delta);
    BeamState {
        sector: c,
        occupied,
        target_theta: c.azimuth() + offset,
        target_r,
        tilt: downtilt(l_b, target_r),
    }
}

/// `10^(Y/10)` with `Y ~ N(0, sigma^2)`, sigma in dB.
pub fn sample_shadowing<R: Rng + ?Sized>(sigma_db: f64, rng: &mut R) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    10f64.powf(sigma_db * z / 10.0)
}

/// Mean of the log-normal factor, `exp((sigma ln 10 / 10)^2 / 2)`.
pub fn lognormal_mean(sigma_db: f64) -> f64 {
    let s = sigma_db * std::f64::consts::LN_10 / 10.0;
    (0.5 * s * s).exp()
}

/// Interval `[psi - 2 pi c / 3, psi + 2 pi (1 - c) / 3]` over which the
/// horizontal offset of sector `c` is uniform.
pub fn alpha_interval(m: PlanePoint, s: PlanePoint, c: SectorId) -> Result<(f64, f64)> {
    let psi = bearing(m, s)?;
    let c = c.index() as f64;
    Ok((psi - TWO_PI_3 * c, psi + TWO_PI_3 * (1.0 - c)))
}

/// Density of the horizontal offset `alpha` (not reduced modulo `2 pi`).
pub fn pdf_alpha(alpha: f64, m: PlanePoint, s: PlanePoint, c: SectorId) -> Result<f64> {
    let (lo, hi) = alpha_interval(m, s, c)?;
    Ok(if (lo..=hi).contains(&alpha) {
        ALPHA_DENSITY
    } else {
        0.0
    })
}

/// Parameters of the vertical offset given the target angle.
struct PhiLaw {
    beta: f64,
    reach: f64,
    lo: f64,
    hi: f64,
}

fn phi_law(
    m: PlanePoint,
    s: PlanePoint,
    c: SectorId,
    target_theta: f64,
    delta: f64,
    l_b: f64,
) -> Result<PhiLaw> {
    let dist = m.distance(s);
    if dist == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let offset = normalize_angle(target_theta - c.azimuth());
    let reach = sector_reach(offset, delta);
    if offset.abs() > PI / 3.0 + 1e-12 || reach <= 0.0 {
        return Err(domain(
            "target_theta",
            format!("{target_theta} is outside sector {}", c.index()),
        ));
    }
    let beta = (l_b / dist).atan();
    Ok(PhiLaw {
        beta,
        reach,
        lo: -(dist / l_b).atan(),
        hi: beta - (l_b / reach).atan(),
    })
}

/// Support of the vertical offset for a beam of sector `c` aimed at angle
/// `target_theta`.
pub fn phi_support(
    m: PlanePoint,
    s: PlanePoint,
    c: SectorId,
    target_theta: f64,
    delta: f64,
    l_b: f64,
) -> Result<(f64, f64)> {
    let law = phi_law(m, s, c, target_theta, delta, l_b)?;
    Ok((law.lo, law.hi))
}

impl PhiLaw {
    fn density(&self, phi: f64, l_b: f64) -> f64 {
        if !(self.lo..=self.hi).contains(&phi) {
            return 0.0;
        }
        let t = (phi - self.beta).tan();
        l_b / self.reach * (1.0 + 1.0 / (t * t))
    }
}

/// Density of the vertical offset `phi` given the beam's target angle.
/// `l_b` and `delta` in km.
pub fn pdf_phi_given_alpha(
    phi: f64,
    m: PlanePoint,
    s: PlanePoint,
    c: SectorId,
    target_theta: f64,
    delta: f64,
    l_b: f64,
) -> Result<f64> {
    Ok(phi_law(m, s, c, target_theta, delta, l_b)?.density(phi, l_b))
}

/// Angle in `[0, pi/2)` at which a cosine-power pattern equals `g`.
pub fn pattern_preimage(g: f64, w: f64) -> f64 {
    let (sin, cos) = preimage_sin_cos(g, w);
    sin.atan2(cos)
}

/// Sine and cosine of the pre-image angle; `sin^2 = -expm1(-ln g / w)`
/// keeps precision as `g` approaches 1.
fn preimage_sin_cos(g: f64, w: f64) -> (f64, f64) {
    let ln = g.ln();
    let sin2 = (-(-ln / w).exp_m1()).max(0.0);
    (sin2.sqrt(), (-ln / (2.0 * w)).exp())
}

/// `|d angle / d g|` on either branch of the pattern.
fn pattern_jacobian(g: f64, w: f64) -> f64 {
    let (sin, cos) = preimage_sin_cos(g, w);
    cos / (-2.0 * w * g * sin)
}

/// Number of `k` with `lo <= x + 2 pi k <= hi`, for an interval shorter
/// than `2 pi`.
fn hits(x: f64, lo: f64, hi: f64) -> u32 {
    let k = ((lo - x) / (2.0 * PI)).ceil();
    u32::from(x + 2.0 * PI * k <= hi)
}

/// Density of `H(alpha)` for sector `c` on its continuous part, `h` in
/// `(0, 1]`. Where the offset interval covers both sides of boresight each
/// value has two pre-images and the density doubles.
pub fn pdf_h(h: f64, m: PlanePoint, s: PlanePoint, c: SectorId, params: &PatternParams) -> Result<f64> {
    let (lo, hi) = alpha_interval(m, s, c)?;
    if !(h > 0.0 && h < 1.0) {
        return Ok(0.0);
    }
    let t = pattern_preimage(h, params.w_h);
    let n = hits(t, lo, hi) + hits(-t, lo, hi);
    Ok(ALPHA_DENSITY * n as f64 * pattern_jacobian(h, params.w_h))
}

/// Range `[min, max]` of the horizontal pattern over the offset interval.
pub fn h_support(m: PlanePoint, s: PlanePoint, c: SectorId, params: &PatternParams) -> Result<(f64, f64)> {
    let (lo, hi) = alpha_interval(m, s, c)?;
    let h1 = params.horizontal(lo);
    let h2 = params.horizontal(hi);
    let top = if hits(0.0, lo, hi) > 0 { 1.0 } else { h1.max(h2) };
    let bottom = if lobe_measure(lo, hi) < hi - lo { 0.0 } else { h1.min(h2) };
    Ok((bottom, top))
}

/// Length of `[lo, hi]` that falls on a front lobe `(-pi/2, pi/2) + 2 pi k`.
fn lobe_measure(lo: f64, hi: f64) -> f64 {
    let k0 = ((lo - FRAC_PI_2) / (2.0 * PI)).floor() as i64;
    let k1 = ((hi + FRAC_PI_2) / (2.0 * PI)).ceil() as i64;
    (k0..=k1)
        .map(|k| {
            let centre = 2.0 * PI * k as f64;
            let a = lo.max(centre - FRAC_PI_2);
            let b = hi.min(centre + FRAC_PI_2);
            (b - a).max(0.0)
        })
        .sum()
}

/// Probability that the horizontal offset lands on the front lobe, i.e.
/// the mass of the continuous part of `H(alpha)`.
pub fn h_continuous_mass(m: PlanePoint, s: PlanePoint, c: SectorId) -> Result<f64> {
    let (lo, hi) = alpha_interval(m, s, c)?;
    Ok(ALPHA_DENSITY * lobe_measure(lo, hi))
}

/// Density of `V(phi)` given the beam's target angle. The offset `phi`
/// never reaches `+-pi/2`, so this law has no atom.
#[allow(clippy::too_many_arguments)]
pub fn pdf_v_given_h(
    v: f64,
    m: PlanePoint,
    s: PlanePoint,
    c: SectorId,
    target_theta: f64,
    params: &PatternParams,
    delta: f64,
    l_b: f64,
) -> Result<f64> {
    let w_v = params
        .w_v
        .ok_or(Error::Unsupported("vertical law of a flat vertical pattern"))?;
    let law = phi_law(m, s, c, target_theta, delta, l_b)?;
    if !(v > 0.0 && v < 1.0) {
        return Ok(0.0);
    }
    let t = pattern_preimage(v, w_v);
    let density = law.density(t, l_b) + law.density(-t, l_b);
    Ok(density * pattern_jacobian(v, w_v))
}

/// Range `[min, max]` of the vertical pattern over the offset support.
#[allow(clippy::too_many_arguments)]
pub fn v_support(
    m: PlanePoint,
    s: PlanePoint,
    c: SectorId,
    target_theta: f64,
    params: &PatternParams,
    delta: f64,
    l_b: f64,
) -> Result<(f64, f64)> {
    let law = phi_law(m, s, c, target_theta, delta, l_b)?;
    let v1 = params.vertical(law.lo);
    let v2 = params.vertical(law.hi);
    let top = if law.lo <= 0.0 && law.hi >= 0.0 { 1.0 } else { v1.max(v2) };
    Ok((v1.min(v2), top))
}

/// `E[(H V)^(s - 1)]` for sector `c` of site `s` seen from `m`, by nested
/// quadrature over the horizontal offset and, given it, the vertical
/// offset. `s_order = 2` gives the mean gain of one occupied beam.
#[allow(clippy::too_many_arguments)]
pub fn mellin_moment(
    s_order: f64,
    m: PlanePoint,
    site: PlanePoint,
    c: SectorId,
    params: &PatternParams,
    delta: f64,
    l_b: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(s_order >= 1.0) {
        return Err(domain("s_order", format!("need s >= 1, got {s_order}")));
    }
    let (lo, hi) = alpha_interval(m, site, c)?;
    let psi = bearing(m, site)?;
    let power = s_order - 1.0;

    let mut breaks = vec![lo, hi];
    for k in -2..=2 {
        for x in [0.0, -FRAC_PI_2, FRAC_PI_2] {
            let p = x + 2.0 * PI * k as f64;
            if p > lo && p < hi {
                breaks.push(p);
            }
        }
    }
    breaks.sort_by(f64::total_cmp);

    // the inner quadrature can fail; carry the first error out of the closure
    let failure = std::cell::RefCell::new(None);
    let outer = integrate_with_breaks(
        |alpha| {
            let h = params.horizontal(alpha);
            let hp = h.powf(power);
            if hp == 0.0 {
                return 0.0;
            }
            let target_theta = psi - alpha;
            let inner = phi_law(m, site, c, target_theta, delta, l_b).and_then(|law| {
                let mut pts = vec![law.lo, law.hi];
                if law.lo < 0.0 && law.hi > 0.0 {
                    pts.insert(1, 0.0);
                }
                integrate_with_breaks(
                    |phi| law.density(phi, l_b) * params.vertical(phi).powf(power),
                    &pts,
                    cfg,
                )
            });
            match inner {
                Ok(q) => ALPHA_DENSITY * hp * q.value,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        },
        &breaks,
        cfg,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(outer.value)
}

/// Mean horizontal gain `E[H(alpha)]` of one occupied beam of sector `c`.
pub fn expected_sector_gain(
    m: PlanePoint,
    site: PlanePoint,
    c: SectorId,
    w_h: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let (lo, hi) = alpha_interval(m, site, c)?;
    let mut breaks = vec![lo, hi];
    for k in -2..=2 {
        let p = 2.0 * PI * k as f64;
        if p > lo && p < hi {
            breaks.push(p);
        }
    }
    breaks.sort_by(f64::total_cmp);
    let q = integrate_with_breaks(|a| pattern_value(a, w_h), &breaks, cfg)?;
    Ok(ALPHA_DENSITY * q.value)
}

/// Expected three-sector gain of a site when the vertical factor is a
/// constant `v_fixed` (fixed downtilt):
/// `3 eta v Gamma(1/2 - w) / (2 sqrt(pi) Gamma(1 - w))`.
///
/// The horizontal pattern is zero on the back lobe, so only half a period
/// of `cos^(-2w)` contributes.
pub fn expected_gain_closed_form(eta: f64, v_fixed: f64, w_h: f64) -> Result<f64> {
    if !(w_h < 0.0) {
        return Err(domain("w_h", format!("must be negative, got {w_h}")));
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(domain("eta", format!("must lie in [0, 1], got {eta}")));
    }
    let ratio = (ln_gamma(0.5 - w_h)? - ln_gamma(1.0 - w_h)?).exp();
    Ok(3.0 * eta * v_fixed * ratio / (2.0 * PI.sqrt()))
}
