//! One function per subcommand, each producing a numeric table.

use hexbeam::engine::{compare_scenarios, coverage_curve, throughput_vs_load, Downtilt, Mode, Scenario};
use hexbeam::geometry::PlanePoint;
use hexbeam::interference::{expected_isr, ExpectationSetup, LatticeRoute, VerticalModel};
use hexbeam::quadrature::QuadratureConfig;
use hexbeam::special::SeriesConfig;

use crate::config::{Route, RunConfig};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

pub fn coverage(cfg: &RunConfig) -> Result<Table, CliError> {
    let curve = coverage_curve(&cfg.network, &cfg.scenario, &cfg.thresholds_db)?;
    let mut t = Table::new(&["threshold_dB", "coverage", "stderr", "n_trials"]);
    for i in 0..curve.thresholds_db.len() {
        t.rows.push(vec![
            curve.thresholds_db[i],
            curve.coverage[i],
            curve.stderr[i],
            curve.n_trials as f64,
        ]);
    }
    Ok(t)
}

pub fn throughput(cfg: &RunConfig) -> Result<Table, CliError> {
    let points = throughput_vs_load(&cfg.network, &cfg.scenario, &cfg.eta_grid)?;
    let mut t = Table::new(&["eta", "mean_throughput_bps", "stderr_bps", "n_trials"]);
    for p in points {
        t.rows
            .push(vec![p.eta, p.mean_throughput_bps, p.stderr_bps, p.n_trials as f64]);
    }
    Ok(t)
}

/// Scenarios compared: the configured list, or the main scenario in 3D
/// and 2D.
pub fn compared(cfg: &RunConfig) -> Vec<Scenario> {
    if cfg.compare.is_empty() {
        vec![
            Scenario { mode: Mode::Beamforming3d, ..cfg.scenario },
            Scenario { mode: Mode::Beamforming2d, ..cfg.scenario },
        ]
    } else {
        cfg.compare.clone()
    }
}

pub fn compare(cfg: &RunConfig) -> Result<Table, CliError> {
    let cmp = compare_scenarios(&cfg.network, &compared(cfg), &cfg.thresholds_db)?;
    let mut header = vec!["threshold_dB".to_string()];
    header.extend((0..cmp.curves.len()).map(|i| format!("coverage_{i}")));
    header.extend(cmp.deltas.iter().map(|d| format!("delta_{}_{}", d.first, d.second)));
    let mut t = Table { header, rows: Vec::new() };
    for (k, g) in cmp.thresholds_db.iter().enumerate() {
        let mut row = vec![*g];
        row.extend(cmp.curves.iter().map(|c| c.coverage[k]));
        row.extend(cmp.deltas.iter().map(|d| d.delta[k]));
        t.rows.push(row);
    }
    Ok(t)
}

pub fn expected(cfg: &RunConfig) -> Result<Table, CliError> {
    let sc = &cfg.scenario;
    let vertical = match (sc.mode, sc.downtilt) {
        (Mode::Beamforming2d, _) => VerticalModel::Flat,
        (Mode::Beamforming3d, Downtilt::Fixed(t)) => VerticalModel::FixedTilt(t.to_radians()),
        (Mode::Beamforming3d, Downtilt::Variable) => VerticalModel::Variable,
        (Mode::SectorNoBf, _) => {
            return Err(CliError::Runtime(
                "expected-isr needs randomly steered beams; sector_no_bf has none".into(),
            ))
        }
    };
    let route = match cfg.expected_isr.route {
        Route::Rings => LatticeRoute::Rings(sc.n_rings),
        Route::Series => LatticeRoute::Series(SeriesConfig::default()),
    };
    let params = sc.pattern()?;
    let ch = cfg.network.channel.linear()?;
    let setup = ExpectationSetup {
        delta: cfg.network.delta_km,
        ch: &ch,
        eta: sc.eta,
        params: &params,
        vertical,
        route,
        quadrature: QuadratureConfig::default(),
    };
    let e = &cfg.expected_isr;
    let m = PlanePoint::from_polar(e.x * cfg.network.delta_km, e.bearing_deg.to_radians());
    let v = expected_isr(m, &setup)?;
    let mut t = Table::new(&["x", "bearing_deg", "expected_isr", "serving", "lattice", "series_terms"]);
    t.rows.push(vec![
        e.x,
        e.bearing_deg,
        v.value,
        v.serving,
        v.lattice,
        v.series.map_or(0.0, |s| s.terms_used as f64),
    ]);
    Ok(t)
}

/// Patterns from -180 to 180 degrees; the vertical column is 1 for 2D.
pub fn pattern_dump(cfg: &RunConfig) -> Result<Table, CliError> {
    let params = cfg.scenario.pattern()?;
    let step = cfg.pattern_dump.step_deg;
    let n = (360.0 / step).floor() as i64;
    let mut t = Table::new(&["angle_deg", "H", "V"]);
    for k in 0..=n {
        let deg = -180.0 + step * k as f64;
        let a = deg.to_radians();
        t.rows.push(vec![deg, params.horizontal(a), params.vertical(a)]);
    }
    Ok(t)
}
