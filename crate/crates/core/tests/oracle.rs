mod common;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use relayarea_core::geometry::{sector_grid, CellLayout, Point};
use relayarea_core::oracle::{audit_points, error_ratios, sample_decision, SamplerSetup, Thresholds};
use relayarea_core::schemes::SchemeKind;

fn layout(grid: f64) -> CellLayout {
    CellLayout::new(800.0, vec![Point::new(300.0, 0.0), Point::new(273.0, 288.0), Point::new(273.0, -288.0)], grid)
        .unwrap()
}

/// Second, straight-line implementation of the sampler: returns the
/// relaying count, the outage count and the summed consumed energy.
fn reference_sampler(s: &SamplerSetup, n: u64, seed: u64, stream: u64) -> (u64, u64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let (mut relayed, mut outage, mut energy) = (0, 0, 0.0);
    for _ in 0..n {
        let zd: f64 = StandardNormal.sample(&mut rng);
        let zb: f64 = StandardNormal.sample(&mut rng);
        let zr: f64 = StandardNormal.sample(&mut rng);
        let ed = s.e_d0 * (s.sigma_d * zd).exp();
        let direct_ok = !s.direct_capped || ed <= s.e_b_max;
        let (relay_ok, relay_cost) = match s.relay {
            Some((b0, sb, r0, sr)) => {
                let eb = b0 * (sb * zb).exp();
                let er = r0 * (sr * zr).exp();
                (eb <= s.e_b_max && er <= s.e_r_max, s.eta_b * eb + s.eta_r * er + s.dsp)
            }
            None => (false, f64::INFINITY),
        };
        let direct_cost = s.eta_b * ed;
        if relay_ok && (!direct_ok || relay_cost <= direct_cost) {
            relayed += 1;
            energy += relay_cost;
        } else if direct_ok {
            energy += direct_cost;
        } else {
            outage += 1;
        }
    }
    (relayed, outage, energy)
}

#[test]
fn sampler_matches_reference_implementation() {
    let l = layout(80.0);
    let c = common::ctx();
    let bs = l.bs();
    let grid = sector_grid(&l).unwrap();
    for (i, u) in grid.iter().enumerate().step_by(7) {
        let j = c.serving_relay(u, &l).unwrap();
        let raw = c.raw_inputs(&bs, u, j.map(|j| &l.relays[j])).unwrap();
        let s = SamplerSetup::new(&raw, &c.profile, c.scheme);
        let est = sample_decision(&s, 3000, 11, i as u64);
        let (relayed, outage, energy) = reference_sampler(&s, 3000, 11, i as u64);
        assert_eq!(est.k_cr + est.k_er, relayed, "point {i}");
        assert_eq!(est.k_out, outage, "point {i}");
        assert!((est.e_total() - energy / 3000.0).abs() <= 1e-12 * energy.max(1e-300), "point {i}");
    }
}

#[test]
fn streams_are_independent_of_evaluation_order() {
    let l = layout(100.0);
    let c = common::ctx();
    let grid = sector_grid(&l).unwrap();
    let all = audit_points(&grid, &l, &c, 500, 3).unwrap();
    let bs = l.bs();
    let k = grid.len() / 2;
    let u = &grid[k];
    let j = c.serving_relay(u, &l).unwrap();
    let raw = c.raw_inputs(&bs, u, j.map(|j| &l.relays[j])).unwrap();
    let alone = sample_decision(&SamplerSetup::new(&raw, &c.profile, c.scheme), 500, 3, k as u64);
    assert_eq!(all[k].oracle, alone);
}

#[test]
fn zero_shadowing_models_equal_the_indicator() {
    let l = layout(50.0);
    let grid = sector_grid(&l).unwrap();
    for kind in SchemeKind::ALL {
        let c = common::ctx_sigma0().with_scheme(kind);
        for a in audit_points(&grid, &l, &c, 4, 5).unwrap() {
            let (m, o) = (&a.model, &a.oracle);
            let p_relay = (o.k_cr + o.k_er) as f64 / o.n as f64;
            assert!((m.probs.p_relay() - p_relay).abs() <= 1e-9, "{kind:?} {:?}", a.pos);
            assert!((m.probs.p_cr - o.p_cr()).abs() <= 1e-9);
            assert!((m.probs.p_cd - o.p_cd()).abs() <= 1e-9);
            assert_eq!(m.probs.outage_ok, o.k_out == 0);
            let scale = o.e_total().abs().max(1.0);
            assert!((m.energy.total - o.e_total()).abs() <= 1e-9 * scale, "{kind:?} {:?}", a.pos);
            assert!((m.relay_rf - o.e_relay()).abs() <= 1e-9 * o.e_relay().max(1.0));
        }
    }
}

#[test]
fn zero_shadowing_uncapped_direct_is_a_lower_bound() {
    let l = layout(50.0);
    let grid = sector_grid(&l).unwrap();
    for kind in SchemeKind::ALL {
        let c = common::ctx_sigma0().with_scheme(kind).with_direct_cap(false);
        for a in audit_points(&grid, &l, &c, 4, 5).unwrap() {
            let p_relay = (a.oracle.k_cr + a.oracle.k_er) as f64 / a.oracle.n as f64;
            assert!(a.model.probs.p_relay() <= p_relay + 1e-9, "{kind:?} {:?}", a.pos);
            assert!(a.model.relay_rf <= a.oracle.e_relay() * (1.0 + 1e-9) + 1e-300);
        }
    }
}

#[test]
fn zero_shadowing_error_ratios_vanish() {
    let l = layout(50.0);
    let th = Thresholds { p_t: vec![0.3, 0.5, 0.8], e_t: vec![0.3, 0.6, 1.0], e_t_relay: vec![0.02, 0.05] };
    let r = error_ratios(&l, &th, &common::ctx_sigma0(), 16, 9).unwrap();
    assert_eq!((r.zeta_r, r.zeta_e, r.zeta_i), (0.0, 0.0, 0.0));
    assert!(r.per_threshold.iter().all(|e| e.mismatched == 0));
}

#[test]
fn same_seed_same_report() {
    let l = layout(100.0);
    let th = Thresholds { p_t: vec![0.5], e_t: vec![0.4], e_t_relay: vec![0.05] };
    let a = error_ratios(&l, &th, &common::ctx(), 400, 21).unwrap();
    let b = error_ratios(&l, &th, &common::ctx(), 400, 21).unwrap();
    assert_eq!(a, b);
}
