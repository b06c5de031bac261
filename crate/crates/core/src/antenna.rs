//! Cosine-power (Mogensen) beam patterns and the per-site beamforming gain.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{bearing, normalize_angle, PlanePoint};
use crate::stochastic::BeamState;

/// Exponent `w = ln 2 / ln(cos^2(theta_3dB / 2))`, negative for any
/// beam width in `(0, pi)`.
pub fn beam_exponent(theta_3db: f64) -> Result<f64> {
    if !(theta_3db > 0.0 && theta_3db < PI) {
        return Err(Error::DegenerateBeamWidth(theta_3db));
    }
    let c = (theta_3db / 2.0).cos();
    Ok(std::f64::consts::LN_2 / (c * c).ln())
}

/// `cos(angle)^(-2w)` on the front lobe, zero for `|angle| >= pi/2`.
pub fn pattern_value(angle: f64, w: f64) -> f64 {
    let a = normalize_angle(angle);
    if a.abs() >= FRAC_PI_2 {
        0.0
    } else {
        a.cos().powf(-2.0 * w)
    }
}

/// Natural log of [`pattern_value`]; `-inf` on the back lobe. Useful for
/// narrow beams where the pattern underflows.
pub fn ln_pattern_value(angle: f64, w: f64) -> f64 {
    let a = normalize_angle(angle);
    if a.abs() >= FRAC_PI_2 {
        f64::NEG_INFINITY
    } else {
        -2.0 * w * a.cos().ln()
    }
}

/// Horizontal and vertical beam shapes. A `None` vertical exponent means
/// the vertical factor is constant 1 (2D beamforming).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatternParams {
    pub theta_h3db: f64,
    pub theta_v3db: Option<f64>,
    pub w_h: f64,
    pub w_v: Option<f64>,
}

impl PatternParams {
    /// Both widths in radians.
    pub fn new(theta_h3db: f64, theta_v3db: f64) -> Result<Self> {
        Ok(Self {
            theta_h3db,
            theta_v3db: Some(theta_v3db),
            w_h: beam_exponent(theta_h3db)?,
            w_v: Some(beam_exponent(theta_v3db)?),
        })
    }

    pub fn horizontal_only(theta_h3db: f64) -> Result<Self> {
        Ok(Self {
            theta_h3db,
            theta_v3db: None,
            w_h: beam_exponent(theta_h3db)?,
            w_v: None,
        })
    }

    pub fn from_degrees(theta_h3db: f64, theta_v3db: f64) -> Result<Self> {
        Self::new(theta_h3db.to_radians(), theta_v3db.to_radians())
    }

    pub fn horizontal(&self, alpha: f64) -> f64 {
        pattern_value(alpha, self.w_h)
    }

    pub fn vertical(&self, phi: f64) -> f64 {
        match self.w_v {
            Some(w) => pattern_value(phi, w),
            None => 1.0,
        }
    }
}

/// Offsets between a beam axis and the direction of a user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamGeometry {
    /// horizontal offset, in `(-pi, pi]`
    pub alpha: f64,
    /// vertical offset
    pub phi: f64,
    /// downtilt of the beam
    pub tilt: f64,
}

/// Downtilt `atan(l_b / r)` of a beam aimed at a user `r` km away; `pi/2`
/// for a user at the mast.
pub fn downtilt(l_b: f64, target_r: f64) -> f64 {
    if target_r <= 0.0 {
        FRAC_PI_2
    } else {
        (l_b / target_r).atan()
    }
}

/// Offsets seen by `m` from a beam of site `s` aimed at the user at polar
/// position `(target_r, target_theta)` around `s`. `l_b` in km.
pub fn beam_offsets(
    m: PlanePoint,
    s: PlanePoint,
    target_theta: f64,
    target_r: f64,
    l_b: f64,
) -> Result<BeamGeometry> {
    offsets_with_tilt(m, s, target_theta, downtilt(l_b, target_r), l_b)
}

/// Same as [`beam_offsets`] with the downtilt given directly.
pub fn offsets_with_tilt(
    m: PlanePoint,
    s: PlanePoint,
    target_theta: f64,
    tilt: f64,
    l_b: f64,
) -> Result<BeamGeometry> {
    let psi = bearing(m, s)?;
    let dist = m.distance(s);
    Ok(BeamGeometry {
        alpha: normalize_angle(psi - target_theta),
        phi: (l_b / dist).atan() - tilt,
        tilt,
    })
}

/// Gain radiated towards `m` by the three sectors of site `s`: the sum of
/// `H(alpha) V(phi)` over the occupied beams.
pub fn site_gain(
    m: PlanePoint,
    s: PlanePoint,
    beams: &[BeamState; 3],
    params: &PatternParams,
    l_b: f64,
) -> Result<f64> {
    let mut g = 0.0;
    for b in beams.iter().filter(|b| b.occupied) {
        let geo = offsets_with_tilt(m, s, b.target_theta, b.tilt, l_b)?;
        g += params.horizontal(geo.alpha) * params.vertical(geo.phi);
    }
    Ok(g)
}
