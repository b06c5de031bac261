//! Monte Carlo runner: coverage curves, throughput against load and
//! scenario comparisons.
//!
//! Trials are cut into fixed blocks of [`BLOCK_TRIALS`]; block `k` draws
//! from ChaCha8 stream `k` of the scenario seed. Each trial consumes a
//! fixed number of variates, so outputs depend only on the seed and the
//! trial count, never on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::antenna::PatternParams;
use crate::error::{domain, Result};
use crate::geometry::{ring_sites, sample_serving_mobile, PlanePoint, SectorId, SiteCoord};
use crate::interference::{isr_cumulative, sinr_from_parts, throughput, IsrSample, MimoConfig, SiteDraw};
use crate::propagation::{ChannelParams, LinearChannel};
use crate::stochastic::{sample_beam, sample_shadowing, BeamState};

pub const BLOCK_TRIALS: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Beamforming3d,
    Beamforming2d,
    SectorNoBf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Downtilt {
    Variable,
    /// degrees
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub mode: Mode,
    pub theta_h3db_deg: f64,
    pub theta_v3db_deg: f64,
    pub downtilt: Downtilt,
    pub eta: f64,
    pub n_rings: u32,
    pub n_trials: u64,
    pub seed: u64,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            mode: Mode::Beamforming3d,
            theta_h3db_deg: 14.0,
            theta_v3db_deg: 8.0,
            downtilt: Downtilt::Variable,
            eta: 1.0,
            n_rings: 5,
            n_trials: 20_000,
            seed: 1,
        }
    }
}

/// Beam width and tilt of the conventional sector antenna.
pub const SECTOR_H3DB_DEG: f64 = 65.0;
pub const SECTOR_V3DB_DEG: f64 = 32.0;
pub const SECTOR_TILT_DEG: f64 = 8.0;

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(domain("scenario.eta", format!("must lie in [0, 1], got {}", self.eta)));
        }
        for (name, deg) in [
            ("scenario.theta_h3db_deg", self.theta_h3db_deg),
            ("scenario.theta_v3db_deg", self.theta_v3db_deg),
        ] {
            if !(deg > 0.0 && deg < 180.0) {
                return Err(domain(name, format!("must lie in (0, 180), got {deg}")));
            }
        }
        if let Downtilt::Fixed(t) = self.downtilt {
            if !(t > -90.0 && t <= 90.0) {
                return Err(domain("scenario.downtilt", format!("fixed tilt {t} out of range")));
            }
        }
        if self.n_trials < 1 {
            return Err(domain("scenario.n_trials", "must be at least 1"));
        }
        Ok(())
    }

    /// Pattern parameters actually used, after the mode's overrides.
    pub fn pattern(&self) -> Result<PatternParams> {
        match self.mode {
            Mode::Beamforming3d => PatternParams::from_degrees(self.theta_h3db_deg, self.theta_v3db_deg),
            Mode::Beamforming2d => PatternParams::horizontal_only(self.theta_h3db_deg.to_radians()),
            Mode::SectorNoBf => PatternParams::from_degrees(SECTOR_H3DB_DEG, SECTOR_V3DB_DEG),
        }
    }

    /// Fixed tilt in radians, if any, after the mode's overrides.
    pub fn fixed_tilt(&self) -> Option<f64> {
        match (self.mode, self.downtilt) {
            (Mode::SectorNoBf, _) => Some(SECTOR_TILT_DEG.to_radians()),
            (_, Downtilt::Fixed(t)) => Some(t.to_radians()),
            (_, Downtilt::Variable) => None,
        }
    }
}

/// Shadowing ratio applied to the serving site's own co-sectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ServingShadow {
    /// same mast as the useful signal: ratio 1
    #[default]
    Unit,
    /// independent draw like any other site
    Independent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkConfig {
    /// inter-site distance, km
    pub delta_km: f64,
    pub channel: ChannelParams,
    pub mimo: MimoConfig,
    pub serving_shadow: ServingShadow,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            delta_km: 0.75,
            channel: ChannelParams::default(),
            mimo: MimoConfig::default(),
            serving_shadow: ServingShadow::Unit,
        }
    }
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta_km > 0.0) {
            return Err(domain("network.delta_km", "must be positive"));
        }
        self.channel.validate()?;
        self.mimo.validate()
    }
}

/// All random draws of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub mobile: PlanePoint,
    pub chi0: f64,
    /// serving site first, then rings outwards
    pub draws: Vec<SiteDraw>,
}

/// A validated scenario with everything precomputed that trials share.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub scenario: Scenario,
    pub network: NetworkConfig,
    pub params: PatternParams,
    pub channel: LinearChannel,
    sites: Vec<(SiteCoord, PlanePoint)>,
    fixed_tilt: Option<f64>,
}

impl Simulation {
    pub fn new(network: &NetworkConfig, scenario: &Scenario) -> Result<Self> {
        network.validate()?;
        scenario.validate()?;
        let mut sites = vec![(SiteCoord::SERVING, PlanePoint::ORIGIN)];
        sites.extend(ring_sites(scenario.n_rings, network.delta_km));
        Ok(Self {
            scenario: *scenario,
            network: *network,
            params: scenario.pattern()?,
            channel: network.channel.linear()?,
            sites,
            fixed_tilt: scenario.fixed_tilt(),
        })
    }

    fn beam<R: Rng + ?Sized>(&self, c: SectorId, rng: &mut R) -> BeamState {
        let delta = self.network.delta_km;
        let mut b = sample_beam(c, delta, self.channel.l_b, self.scenario.eta, rng);
        if self.scenario.mode == Mode::SectorNoBf {
            b.target_theta = c.azimuth();
        }
        if let Some(t) = self.fixed_tilt {
            b.tilt = t;
        }
        b
    }

    /// Draws the mobile, its shadowing and every site's beams.
    pub fn sample_trial<R: Rng + ?Sized>(&self, rng: &mut R) -> Trial {
        let mobile = sample_serving_mobile(self.network.delta_km, rng);
        let chi0 = sample_shadowing(self.channel.sigma_db, rng);
        let draws = self
            .sites
            .iter()
            .map(|&(coord, site)| {
                let ratio = sample_shadowing(self.channel.sigma_ratio_db, rng);
                let beams = SectorId::ALL.map(|c| self.beam(c, rng));
                let shadow_ratio = if coord == SiteCoord::SERVING && self.network.serving_shadow == ServingShadow::Unit {
                    1.0
                } else {
                    ratio
                };
                SiteDraw {
                    coord,
                    site,
                    beams,
                    shadow_ratio,
                }
            })
            .collect();
        Trial { mobile, chi0, draws }
    }

    pub fn evaluate(&self, t: &Trial) -> Result<IsrSample> {
        let ch = &self.channel;
        let isr = isr_cumulative(t.mobile, &t.draws, &self.params, ch.l_b, ch.two_b)?;
        let noise_term = ch.noise_term(t.mobile.norm(), t.chi0);
        let sinr = sinr_from_parts(isr, noise_term);
        Ok(IsrSample {
            isr,
            sinr,
            noise_term,
            throughput_bps: throughput(sinr, &self.network.mimo),
        })
    }

    pub fn run_trial<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<IsrSample> {
        let t = self.sample_trial(rng);
        self.evaluate(&t)
    }

    /// Random stream of block `k`.
    pub fn block_rng(&self, k: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.scenario.seed);
        rng.set_stream(k);
        rng
    }

    fn run_block(&self, k: u64) -> Result<Vec<IsrSample>> {
        let start = k * BLOCK_TRIALS;
        let n = BLOCK_TRIALS.min(self.scenario.n_trials - start);
        let mut rng = self.block_rng(k);
        (0..n).map(|_| self.run_trial(&mut rng)).collect()
    }

    /// Every trial in order. Runs on the current rayon pool when the
    /// `parallel` feature is on.
    pub fn run(&self) -> Result<Vec<IsrSample>> {
        let blocks = self.scenario.n_trials.div_ceil(BLOCK_TRIALS);
        #[cfg(feature = "parallel")]
        let out: Vec<Vec<IsrSample>> = {
            use rayon::prelude::*;
            (0..blocks)
                .into_par_iter()
                .map(|k| self.run_block(k))
                .collect::<Result<_>>()?
        };
        #[cfg(not(feature = "parallel"))]
        let out: Vec<Vec<IsrSample>> = (0..blocks).map(|k| self.run_block(k)).collect::<Result<_>>()?;
        Ok(out.into_iter().flatten().collect())
    }
}

/// Empirical `P(SINR > threshold)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CcdfCurve {
    pub thresholds_db: Vec<f64>,
    pub coverage: Vec<f64>,
    /// binomial standard error `sqrt(p (1 - p) / n)`
    pub stderr: Vec<f64>,
    pub n_trials: u64,
}

impl CcdfCurve {
    pub fn from_samples(samples: &[IsrSample], thresholds_db: &[f64]) -> Self {
        let db: Vec<f64> = samples.iter().map(|s| 10.0 * s.sinr.log10()).collect();
        let n = db.len() as f64;
        let coverage: Vec<f64> = thresholds_db
            .iter()
            .map(|g| db.iter().filter(|x| **x > *g).count() as f64 / n)
            .collect();
        let stderr = coverage.iter().map(|p| (p * (1.0 - p) / n).sqrt()).collect();
        Self {
            thresholds_db: thresholds_db.to_vec(),
            coverage,
            stderr,
            n_trials: samples.len() as u64,
        }
    }

    /// Coverage at a threshold on the grid.
    pub fn at(&self, threshold_db: f64) -> Option<f64> {
        self.thresholds_db
            .iter()
            .position(|t| (t - threshold_db).abs() < 1e-9)
            .map(|i| self.coverage[i])
    }
}

/// -10 dB to 30 dB in 0.5 dB steps.
pub fn default_thresholds() -> Vec<f64> {
    (0..=80).map(|k| -10.0 + 0.5 * k as f64).collect()
}

/// 0.01, then 0.1 to 1.0 in steps of 0.1.
pub fn default_eta_grid() -> Vec<f64> {
    std::iter::once(0.01)
        .chain((1..=10).map(|k| k as f64 / 10.0))
        .collect()
}

pub fn coverage_curve(network: &NetworkConfig, scenario: &Scenario, thresholds_db: &[f64]) -> Result<CcdfCurve> {
    let sim = Simulation::new(network, scenario)?;
    Ok(CcdfCurve::from_samples(&sim.run()?, thresholds_db))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoadPoint {
    pub eta: f64,
    pub mean_throughput_bps: f64,
    pub stderr_bps: f64,
    pub n_trials: u64,
}

/// Mean throughput at each load. Every load reuses the scenario seed, so
/// the points share mobiles, shadowing and targets and differ only in
/// which beams are on.
pub fn throughput_vs_load(network: &NetworkConfig, scenario: &Scenario, eta_grid: &[f64]) -> Result<Vec<LoadPoint>> {
    eta_grid
        .iter()
        .map(|&eta| {
            let sim = Simulation::new(network, &Scenario { eta, ..*scenario })?;
            let samples = sim.run()?;
            let n = samples.len() as f64;
            let mean = samples.iter().map(|s| s.throughput_bps).sum::<f64>() / n;
            let var = samples
                .iter()
                .map(|s| (s.throughput_bps - mean).powi(2))
                .sum::<f64>()
                / (n - 1.0).max(1.0);
            Ok(LoadPoint {
                eta,
                mean_throughput_bps: mean,
                stderr_bps: (var / n).sqrt(),
                n_trials: samples.len() as u64,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDelta {
    pub first: usize,
    pub second: usize,
    /// coverage of `first` minus coverage of `second`
    pub delta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub thresholds_db: Vec<f64>,
    pub curves: Vec<CcdfCurve>,
    pub deltas: Vec<PairDelta>,
}

pub fn compare_scenarios(
    network: &NetworkConfig,
    scenarios: &[Scenario],
    thresholds_db: &[f64],
) -> Result<Comparison> {
    if scenarios.len() < 2 {
        return Err(domain("scenarios", "need at least two scenarios to compare"));
    }
    let curves = scenarios
        .iter()
        .map(|s| coverage_curve(network, s, thresholds_db))
        .collect::<Result<Vec<_>>>()?;
    let mut deltas = Vec::new();
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            deltas.push(PairDelta {
                first: i,
                second: j,
                delta: curves[i]
                    .coverage
                    .iter()
                    .zip(&curves[j].coverage)
                    .map(|(a, b)| a - b)
                    .collect(),
            });
        }
    }
    Ok(Comparison {
        thresholds_db: thresholds_db.to_vec(),
        curves,
        deltas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(mode: Mode) -> Scenario {
        Scenario {
            mode,
            n_trials: 3000,
            n_rings: 3,
            ..Default::default()
        }
    }

    #[test]
    fn empty_network_is_noise_limited() {
        let network = NetworkConfig {
            channel: ChannelParams { sigma_db: 0.0, sigma_ratio_db: Some(0.0), ..Default::default() },
            ..Default::default()
        };
        let sc = Scenario { eta: 0.0, ..small(Mode::Beamforming3d) };
        let sim = Simulation::new(&network, &sc).unwrap();
        let mut rng = sim.block_rng(0);
        for _ in 0..200 {
            let s = sim.run_trial(&mut rng).unwrap();
            assert_eq!(s.isr, 0.0);
            assert_eq!(s.sinr, 1.0 / s.noise_term);
        }
    }

    #[test]
    fn repeatable() {
        let network = NetworkConfig::default();
        let sim = Simulation::new(&network, &small(Mode::Beamforming3d)).unwrap();
        let a = sim.run_trial(&mut sim.block_rng(3)).unwrap();
        let b = sim.run_trial(&mut sim.block_rng(3)).unwrap();
        assert_eq!(a, b);
        let sc = Scenario { n_trials: 2500, ..small(Mode::SectorNoBf) };
        let c1 = coverage_curve(&network, &sc, &default_thresholds()).unwrap();
        let c2 = coverage_curve(&network, &sc, &default_thresholds()).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn trial_layout() {
        let network = NetworkConfig::default();
        let sim = Simulation::new(&network, &small(Mode::SectorNoBf)).unwrap();
        let t = sim.sample_trial(&mut sim.block_rng(0));
        assert_eq!(t.draws.len(), 1 + 3 * 3 * 4);
        assert_eq!(t.draws[0].coord, SiteCoord::SERVING);
        assert_eq!(t.draws[0].shadow_ratio, 1.0);
        for d in &t.draws {
            for b in &d.beams {
                assert_eq!(b.target_theta, b.sector.azimuth());
                assert_eq!(b.tilt, 8f64.to_radians());
            }
        }
        assert!(sim.params.w_v.is_some());
        let s2 = Scenario { downtilt: Downtilt::Fixed(4.0), ..small(Mode::Beamforming2d) };
        assert!(Simulation::new(&network, &s2).unwrap().params.w_v.is_none());
    }

    #[test]
    fn curve_is_a_ccdf() {
        let network = NetworkConfig::default();
        let sim = Simulation::new(&network, &small(Mode::Beamforming3d)).unwrap();
        let samples = sim.run().unwrap();
        assert_eq!(samples.len(), 3000);
        let mut grid = default_thresholds();
        grid.insert(0, -60.0);
        let c = CcdfCurve::from_samples(&samples, &grid);
        assert!(c.coverage[0] > 0.999);
        for w in c.coverage.windows(2) {
            assert!(w[1] <= w[0]);
        }
        let g = 7.5;
        let direct = samples.iter().filter(|s| 10.0 * s.sinr.log10() > g).count() as f64 / 3000.0;
        assert_eq!(c.at(g), Some(direct));
        for (p, se) in c.coverage.iter().zip(&c.stderr) {
            assert!((se - (p * (1.0 - p) / 3000.0).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn load_endpoints() {
        let network = NetworkConfig::default();
        for mode in [Mode::Beamforming3d, Mode::Beamforming2d, Mode::SectorNoBf] {
            let pts = throughput_vs_load(&network, &Scenario { n_trials: 1500, ..small(mode) }, &[0.0, 1.0]).unwrap();
            assert!(pts[0].mean_throughput_bps >= pts[1].mean_throughput_bps);
        }
    }

    #[test]
    fn grids_and_validation() {
        let g = default_thresholds();
        assert_eq!(g.len(), 81);
        assert_eq!((g[0], g[80]), (-10.0, 30.0));
        assert_eq!(default_eta_grid().len(), 11);
        assert!(Scenario { eta: 1.5, ..Default::default() }.validate().is_err());
        assert!(Scenario { theta_h3db_deg: 0.0, ..Default::default() }.validate().is_err());
        assert!(Scenario { n_trials: 0, ..Default::default() }.validate().is_err());
        let network = NetworkConfig::default();
        assert!(compare_scenarios(&network, &[Scenario::default()], &g).is_err());
    }
}
