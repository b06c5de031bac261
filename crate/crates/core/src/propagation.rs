//! Distance path loss and received power.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geometry::PlanePoint;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Channel constants as quoted: dB, dBm, dBi and metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelParams {
    /// propagation constant `a`, loss at 1 km
    pub a_factor_db: f64,
    /// path loss exponent `2b`
    pub path_exp_2b: f64,
    /// shadowing standard deviation of a single link
    pub sigma_db: f64,
    /// standard deviation of the interferer/serving shadowing ratio;
    /// `None` means `sqrt(2) sigma` (two independent links)
    pub sigma_ratio_db: Option<f64>,
    pub power_dbm: f64,
    pub antenna_gain_dbi: f64,
    pub noise_dbm: f64,
    pub bs_height_m: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            a_factor_db: 130.0,
            path_exp_2b: 3.5,
            sigma_db: 5.5,
            sigma_ratio_db: None,
            power_dbm: 40.0,
            antenna_gain_dbi: 17.0,
            noise_dbm: -93.0,
            bs_height_m: 30.0,
        }
    }
}

impl ChannelParams {
    pub fn sigma_ratio(&self) -> f64 {
        self.sigma_ratio_db
            .unwrap_or(std::f64::consts::SQRT_2 * self.sigma_db)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.path_exp_2b > 2.0) {
            return Err(domain("path_exp_2b", format!("must exceed 2, got {}", self.path_exp_2b)));
        }
        if !(self.sigma_db >= 0.0) {
            return Err(domain("sigma_db", "must be non-negative"));
        }
        if !(self.sigma_ratio() >= 0.0) {
            return Err(domain("sigma_ratio_db", "must be non-negative"));
        }
        if !(self.bs_height_m > 0.0) {
            return Err(domain("bs_height_m", "must be positive"));
        }
        for (name, v) in [
            ("a_factor_db", self.a_factor_db),
            ("power_dbm", self.power_dbm),
            ("antenna_gain_dbi", self.antenna_gain_dbi),
            ("noise_dbm", self.noise_dbm),
        ] {
            if !v.is_finite() {
                return Err(domain(name, "must be finite"));
            }
        }
        Ok(())
    }

    /// Validates and converts to linear units (mW, km).
    pub fn linear(&self) -> Result<LinearChannel> {
        self.validate()?;
        Ok(LinearChannel {
            a: db_to_linear(self.a_factor_db),
            two_b: self.path_exp_2b,
            sigma_db: self.sigma_db,
            sigma_ratio_db: self.sigma_ratio(),
            power_mw: db_to_linear(self.power_dbm),
            antenna_gain: db_to_linear(self.antenna_gain_dbi),
            noise_mw: db_to_linear(self.noise_dbm),
            l_b: self.bs_height_m / 1000.0,
        })
    }
}

/// Channel constants in linear units; distances in km.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearChannel {
    pub a: f64,
    pub two_b: f64,
    pub sigma_db: f64,
    pub sigma_ratio_db: f64,
    pub power_mw: f64,
    pub antenna_gain: f64,
    pub noise_mw: f64,
    pub l_b: f64,
}

impl LinearChannel {
    /// Noise term `a N r^(2b) / (A P chi0)`.
    pub fn noise_term(&self, r: f64, chi0: f64) -> f64 {
        self.a * self.noise_mw * r.powf(self.two_b) / (self.antenna_gain * self.power_mw * chi0)
    }
}

/// `a |s - m|^(2b)`, distance in km.
pub fn path_loss(s: PlanePoint, m: PlanePoint, a_lin: f64, two_b: f64) -> Result<f64> {
    let d = s.distance(m);
    if d == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    Ok(a_lin * d.powf(two_b))
}

/// `P A G chi / L` in mW.
pub fn received_power(
    m: PlanePoint,
    s: PlanePoint,
    gain: f64,
    shadow: f64,
    ch: &LinearChannel,
) -> Result<f64> {
    let loss = path_loss(s, m, ch.a, ch.two_b)?;
    Ok(ch.power_mw * ch.antenna_gain * gain * shadow / loss)
}
