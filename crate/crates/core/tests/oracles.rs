use std::f64::consts::PI;

use hexbeam::antenna::PatternParams;
use hexbeam::engine::{Mode, NetworkConfig, Scenario, Simulation};
use hexbeam::geometry::{PlanePoint, SiteCoord};
use hexbeam::interference::{isr_by_ring, isr_cumulative, isr_series_approx, lattice_sum_at, lattice_sum_oracle};
use hexbeam::special::{omega, SeriesConfig};

/// Direct re-derivation of the interfering sum on the same draws, written
/// without the library's gain helpers.
fn direct_isr(m: PlanePoint, trial: &hexbeam::engine::Trial, p: &PatternParams, l_b: f64, two_b: f64) -> f64 {
    let cosp = |a: f64, w: f64| {
        let a = a.sin().atan2(a.cos());
        if a.abs() >= PI / 2.0 {
            0.0
        } else {
            a.cos().powf(-2.0 * w)
        }
    };
    let r = (m.x * m.x + m.y * m.y).sqrt();
    let mut total = -1.0;
    for d in &trial.draws {
        let dx = m.x - d.site.x;
        let dy = m.y - d.site.y;
        let dist = (dx * dx + dy * dy).sqrt();
        let psi = dy.atan2(dx);
        let mut g = 0.0;
        for (i, b) in d.beams.iter().enumerate() {
            if d.coord == SiteCoord::SERVING && i == 0 {
                continue;
            }
            if b.occupied {
                let v = p.w_v.map_or(1.0, |w| cosp((l_b / dist).atan() - b.tilt, w));
                g += cosp(psi - b.target_theta, p.w_h) * v;
            }
        }
        if d.coord == SiteCoord::SERVING {
            g += 1.0;
        }
        total += (r / dist).powf(two_b) * g * d.shadow_ratio;
    }
    total
}

#[test]
fn cumulative_isr_matches_direct_sum() {
    let network = NetworkConfig::default();
    for mode in [Mode::Beamforming3d, Mode::Beamforming2d, Mode::SectorNoBf] {
        let sc = Scenario { mode, eta: 1.0, n_rings: 5, theta_h3db_deg: 20.0, ..Default::default() };
        let sim = Simulation::new(&network, &sc).unwrap();
        let mut rng = sim.block_rng(11);
        for _ in 0..500 {
            let t = sim.sample_trial(&mut rng);
            let ch = &sim.channel;
            let ours = isr_cumulative(t.mobile, &t.draws, &sim.params, ch.l_b, ch.two_b).unwrap();
            let oracle = direct_isr(t.mobile, &t, &sim.params, ch.l_b, ch.two_b);
            assert!(ours >= 0.0);
            assert!((ours - oracle).abs() <= 1e-12 * ours.max(1.0), "{mode:?}: {ours} vs {oracle}");
        }
    }
}

#[test]
fn ring_contributions_shrink() {
    let network = NetworkConfig::default();
    let sc = Scenario { eta: 1.0, n_rings: 5, ..Default::default() };
    let sim = Simulation::new(&network, &sc).unwrap();
    let mut rng = sim.block_rng(0);
    let n = 10_000;
    let mut mean = [0.0; 6];
    for _ in 0..n {
        let t = sim.sample_trial(&mut rng);
        let rings = isr_by_ring(t.mobile, &t.draws, &sim.params, sim.channel.l_b, sim.channel.two_b).unwrap();
        let mut partial = 0.0;
        for (k, v) in rings.iter().enumerate() {
            assert!(*v >= 0.0);
            partial += v;
            mean[k] += v / n as f64;
        }
        let total = isr_cumulative(t.mobile, &t.draws, &sim.params, sim.channel.l_b, sim.channel.two_b).unwrap();
        assert!((partial - total).abs() <= 1e-12 * total.max(1.0));
    }
    assert!(mean[5] < mean[2], "{mean:?}");
}

#[test]
fn lattice_sum_symmetry() {
    let delta = 0.75;
    let x: f64 = 0.3;
    for t in [0.1, 0.4, 1.0] {
        let a = lattice_sum_at(PlanePoint::from_polar(x * delta, t), 3.5, 60, delta);
        let b = lattice_sum_at(PlanePoint::from_polar(x * delta, t + PI / 3.0), 3.5, 60, delta);
        let c = lattice_sum_at(PlanePoint::from_polar(x * delta, -t), 3.5, 60, delta);
        assert!((a - b).abs() < 1e-12 * a);
        assert!((a - c).abs() < 1e-12 * a);
    }
}

#[test]
fn omega_is_the_lattice_zeta() {
    // sum over the unit hexagonal lattice of |s|^(-2z) equals 6 omega(z)
    let z = 2.5;
    let s: f64 = hexbeam::geometry::ring_sites(1500, 1.0)
        .iter()
        .rev()
        .map(|(_, p)| p.norm().powf(-2.0 * z))
        .sum();
    // tail beyond ring n is about the integral 2 pi / sqrt(3) * n^(2 - 2z) / (2z - 2)
    let n = 1500f64;
    let tail = 2.0 * PI / 3f64.sqrt() * n.powf(2.0 - 2.0 * z) / (2.0 * z - 2.0);
    assert!(((s + tail) / (6.0 * omega(z).unwrap()) - 1.0).abs() < 1e-8);
}

#[test]
fn series_tracks_oracle_for_small_x() {
    let cfg = SeriesConfig::default();
    for x in [0.05, 0.15] {
        let series = isr_series_approx(x, 1.75, &cfg).unwrap();
        assert!(series.converged);
        let oracle = lattice_sum_oracle(x, 3.5, 200);
        assert!((series.value / oracle - 1.0).abs() < 0.01, "x={x}: {} vs {oracle}", series.value);
    }
}

#[test]
fn results_ignore_thread_count() {
    let network = NetworkConfig::default();
    let sc = Scenario { n_trials: 5000, n_rings: 3, ..Default::default() };
    let sim = Simulation::new(&network, &sc).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| sim.run().unwrap())
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one.len(), 5000);
    assert!(one.iter().zip(&four).all(|(a, b)| a.sinr.to_bits() == b.sinr.to_bits()));
}
