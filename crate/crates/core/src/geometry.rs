//! Hexagonal lattice of tri-sectorized sites.
//!
//! Sites sit on the lattice `delta * (u + v e^{i pi/3})`, the serving site is
//! the origin, and every site carries three sectors whose azimuths are
//! `pi/3`, `pi` and `5 pi/3` measured from the real axis. All positions are
//! planar, in kilometres.

use std::f64::consts::{FRAC_PI_3, PI};
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::antenna::{beam_exponent, pattern_value};
use crate::error::{Error, Result};

/// Half-power width of the sector-wide antenna that bounds the user region.
pub const SECTOR_BEAM_WIDTH_DEG: f64 = 65.0;

/// Lattice indices of a site; `(0, 0)` is the serving site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SiteCoord {
    pub u: i32,
    pub v: i32,
}

impl SiteCoord {
    pub const SERVING: SiteCoord = SiteCoord { u: 0, v: 0 };

    pub fn new(u: i32, v: i32) -> Self {
        Self { u, v }
    }

    /// Hexagonal ring index `max(|u|, |v|, |u + v|)`.
    pub fn ring(&self) -> u32 {
        let (u, v) = (self.u as i64, self.v as i64);
        u.abs().max(v.abs()).max((u + v).abs()) as u32
    }
}

/// Sector index `c` in `{1, 2, 3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct SectorId(u8);

impl SectorId {
    pub const ALL: [SectorId; 3] = [SectorId(1), SectorId(2), SectorId(3)];

    pub fn new(c: u8) -> Result<Self> {
        match c {
            1..=3 => Ok(SectorId(c)),
            _ => Err(Error::InvalidSector(c)),
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// Boresight azimuth `pi (2c - 1) / 3`.
    pub fn azimuth(self) -> f64 {
        FRAC_PI_3 * (2.0 * self.0 as f64 - 1.0)
    }
}

impl TryFrom<u8> for SectorId {
    type Error = Error;

    fn try_from(c: u8) -> Result<Self> {
        SectorId::new(c)
    }
}

impl From<SectorId> for u8 {
    fn from(c: SectorId) -> u8 {
        c.0
    }
}

/// A point of the plane in km, read as the complex number `x + i y`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub const ORIGIN: PlanePoint = PlanePoint { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        Self {
            x: r * theta.cos(),
            y: r * theta.sin(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Principal argument in `(-pi, pi]`.
    pub fn arg(&self) -> f64 {
        normalize_angle(self.y.atan2(self.x))
    }

    pub fn distance(&self, other: PlanePoint) -> f64 {
        (*self - other).norm()
    }
}

impl Add for PlanePoint {
    type Output = PlanePoint;
    fn add(self, o: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for PlanePoint {
    type Output = PlanePoint;
    fn sub(self, o: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for PlanePoint {
    type Output = PlanePoint;
    fn neg(self) -> PlanePoint {
        PlanePoint::new(-self.x, -self.y)
    }
}

impl Mul<f64> for PlanePoint {
    type Output = PlanePoint;
    fn mul(self, k: f64) -> PlanePoint {
        PlanePoint::new(self.x * k, self.y * k)
    }
}

/// Maps an angle into `(-pi, pi]`.
pub fn normalize_angle(a: f64) -> f64 {
    let mut r = a % (2.0 * PI);
    if r <= -PI {
        r += 2.0 * PI;
    } else if r > PI {
        r -= 2.0 * PI;
    }
    r
}

/// Position of a lattice site: `delta * (u + v e^{i pi/3})`.
pub fn site_position(coord: SiteCoord, delta: f64) -> PlanePoint {
    let (u, v) = (coord.u as f64, coord.v as f64);
    PlanePoint::new(
        delta * (u + v * FRAC_PI_3.cos()),
        delta * v * FRAC_PI_3.sin(),
    )
}

/// All sites with ring index `1..=n_rings`, ring by ring. Ring `k` holds
/// `6k` sites, so the total is `3 n (n + 1)`.
pub fn ring_sites(n_rings: u32, delta: f64) -> Vec<(SiteCoord, PlanePoint)> {
    let n = n_rings as i32;
    let mut out = Vec::with_capacity(3 * n_rings as usize * (n_rings as usize + 1));
    for k in 1..=n {
        for u in -k..=k {
            for v in -k..=k {
                let c = SiteCoord::new(u, v);
                if c.ring() == k as u32 {
                    out.push((c, site_position(c, delta)));
                }
            }
        }
    }
    out
}

pub fn azimuth(c: SectorId) -> f64 {
    c.azimuth()
}

/// `arg(m - s)` in `(-pi, pi]`.
pub fn bearing(m: PlanePoint, s: PlanePoint) -> Result<f64> {
    let d = m - s;
    if d.x == 0.0 && d.y == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    Ok(d.arg())
}

/// Largest distance from the site at which a user can sit when its angle
/// is `offset` away from the sector boresight: `(2 delta / 3) U(offset)`,
/// `U` being the 65-degree sector pattern.
pub fn sector_reach(offset: f64, delta: f64) -> f64 {
    let w = beam_exponent(SECTOR_BEAM_WIDTH_DEG.to_radians())
        .expect("sector beam width is valid");
    2.0 * delta / 3.0 * pattern_value(offset, w)
}

/// Draws the tagged user in sector 1 of the serving site: angle uniform on
/// `[0, 2 pi/3]`, distance uniform on `(0, sector_reach]`.
pub fn sample_serving_mobile<R: Rng + ?Sized>(delta: f64, rng: &mut R) -> PlanePoint {
    let theta = rng.random::<f64>() * 2.0 * FRAC_PI_3;
    // (0, 1] so the user never lands on the mast
    let u = 1.0 - rng.random::<f64>();
    let c1 = SectorId::ALL[0].azimuth();
    PlanePoint::from_polar(u * sector_reach(theta - c1, delta), theta)
}
