use k3lab::curves::CurveConfig;
use k3lab::families::{roots_of_unity, unit_root};
use k3lab::modulipath::{
    connect_to_canonical, cusp_limit_path, node_transfer_path, permutation_path, track_beta, verify_path, verify_path_with, PathError, PathReport,
    Permutation, TraceOptions, ViolationKind,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn config(m: &[u32]) -> CurveConfig {
    let mut v = m.to_vec();
    v.resize(12, 0);
    let g = v.iter().map(|&x| x as u64).sum::<u64>() as u32;
    CurveConfig::new(g, v).unwrap()
}

fn assert_valid(r: &PathReport) {
    assert!(r.verified);
    assert!(r.invariant_violations.is_empty(), "{:#?}", &r.invariant_violations[..r.invariant_violations.len().min(5)]);
    assert!(r.continuous && r.endpoint_match, "residual {}", r.endpoint_residual);
}

#[test]
fn beta_is_constant_on_a_constant_path() {
    let ks = vec![c(0.25); 50];
    let b = track_beta(&ks, c(1.0)).unwrap();
    assert!(b.iter().all(|x| (x - b[0]).norm() < 1e-15));
    assert!((b[0].powi(12) - c(0.5)).norm() < 1e-14);
}

#[test]
fn beta_returns_after_a_loop_that_does_not_wind() {
    let ks: Vec<Complex64> = (0..=512).map(|i| Complex64::from_polar(0.25, std::f64::consts::TAU * i as f64 / 512.0)).collect();
    let b = track_beta(&ks, c(1.0)).unwrap();
    for (k, x) in ks.iter().zip(&b) {
        assert!((x.powi(12) - (c(1.0) - k * 2.0)).norm() < 1e-10);
        assert!((c(1.0) - k * 2.0).re > 0.0);
    }
    assert!((b[512] - b[0]).norm() < 1e-12);
}

#[test]
fn beta_tends_to_one() {
    let ks: Vec<Complex64> = (0..=256).map(|i| c(0.25 * (1.0 - i as f64 / 256.0))).collect();
    let b = track_beta(&ks, c(1.0)).unwrap();
    for (k, x) in ks.iter().zip(&b) {
        assert!((x.powi(12) - (c(1.0) - k * 2.0)).norm() < 1e-10);
    }
    assert!((b[256] - c(1.0)).norm() < 1e-8);
}

#[test]
fn degenerate_k_is_rejected() {
    assert_eq!(track_beta(&[c(0.25), c(0.5)], c(1.0)), Err(PathError::DegenerateK));
}

#[test]
fn identity_permutation_is_a_single_sample() {
    let r = permutation_path(&roots_of_unity(), &Permutation::identity(12), &config(&[3]), 0.25, &TraceOptions::default()).unwrap();
    assert_eq!(r.samples.len(), 1);
    assert_valid(&r);
}

#[test]
fn transposition_returns_the_same_family() {
    let a = roots_of_unity();
    let sigma: Permutation = "(1 2)".parse().unwrap();
    let r = permutation_path(&a, &sigma, &config(&[2, 1]), 0.25, &TraceOptions::default()).unwrap();
    assert_valid(&r);
    let first = r.samples.first().unwrap();
    let last = r.last();
    // the same set of points, hence the same surface
    for p in &first.a {
        assert!(last.a.iter().any(|q| (p - q).norm() < 1e-12));
    }
    assert!((last.a[0] - a[1]).norm() < 1e-12 && (last.a[1] - a[0]).norm() < 1e-12);
    assert_eq!(last.m, first.m);
}

#[test]
fn twelve_cycle_takes_eleven_valid_legs() {
    let sigma: Permutation = "(1 2 3 4 5 6 7 8 9 10 11 12)".parse().unwrap();
    assert_eq!(sigma.transpositions().len(), 11);
    let opts = TraceOptions { steps: 64, ..TraceOptions::default() };
    let r = permutation_path(&roots_of_unity(), &sigma, &config(&[1, 1, 1]), 0.25, &opts).unwrap();
    assert_valid(&r);
    let legs: std::collections::BTreeSet<u64> = r.samples.iter().map(|s| (s.t * 11.0).floor() as u64).collect();
    assert!(legs.len() >= 11);
    assert!(r.min_fibre_separation() > opts.eps_sep);
}

#[test]
fn permutation_then_inverse_comes_back() {
    let a = roots_of_unity();
    let sigma: Permutation = "(1 5 3)(2 7)".parse().unwrap();
    let opts = TraceOptions { steps: 64, ..TraceOptions::default() };
    let m = config(&[2, 0, 1]);
    let there = permutation_path(&a, &sigma, &m, 0.25, &opts).unwrap();
    assert_valid(&there);
    let mid = there.last().a.clone();
    let back = permutation_path(&mid, &sigma.inverse(), &m, 0.25, &opts).unwrap();
    assert_valid(&back);
    // label i sits at a_{σ(i)}, then back at a_i
    let eps = there.eps_cont.min(back.eps_cont);
    assert!(back.last().a.iter().zip(&a).all(|(x, y)| (x - y).norm() < eps));
    assert_eq!(back.last().m, m.multiplicities.iter().chain(&[0; 12]).copied().collect::<Vec<_>>());
}

#[test]
fn cusp_limit_turns_nodes_into_cusps() {
    let m = config(&[3]);
    let r = cusp_limit_path(&roots_of_unity(), &m, 0.25, &TraceOptions::default()).unwrap();
    assert_valid(&r);
    assert_eq!(r.samples[0].fibres.len(), 24);
    assert!(r.samples[0].fibres.iter().all(|f| f.mult == 1));
    let end = r.last();
    assert!(end.is_cuspidal());
    assert_eq!(end.fibres.len(), 12);
    assert!(end.fibres.iter().all(|f| f.mult == 2));
    assert_eq!(end.m, m.multiplicities);
    for (f, a) in end.fibres.iter().zip(roots_of_unity()) {
        assert_eq!(f.pos, a);
    }
}

#[test]
fn node_transfer_endpoints_and_separation() {
    let k = 0.25;
    let r = node_transfer_path(&config(&[2, 1]), k, &TraceOptions::default()).unwrap();
    assert_valid(&r);
    let beta = c(0.5).powf(1.0 / 12.0);
    let alpha = roots_of_unity();
    let moving = |s: &k3lab::modulipath::ModuliPathSample| s.fibres[12..].iter().zip(&s.m[12..]).find(|(_, &m)| m == 1).unwrap().0.pos;
    let (p0, p1) = (moving(&r.samples[0]), moving(r.last()));
    assert!((p0 - beta * alpha[0]).norm() < 1e-8);
    assert!((p1 - beta * alpha[1]).norm() < 1e-8);
    assert!((r.samples[0].k - c(k)).norm() < 1e-12 && (r.last().k - c(k)).norm() < 1e-12);
    let bound = (1.0 - 0.5f64.powf(1.0 / 12.0)) / 2.0;
    for s in &r.samples {
        let p = moving(s);
        assert!(s.a.iter().all(|x| (p - x).norm() > bound));
    }
    let sweep = (p1 / p0).arg();
    assert!((sweep - std::f64::consts::PI / 6.0).abs() < 1e-8);
    assert!((unit_root(1) - Complex64::from_polar(1.0, sweep)).norm() < 1e-8);
}

#[test]
fn node_transfer_needs_sorted_support() {
    assert!(node_transfer_path(&config(&[3]), 0.25, &TraceOptions::default()).is_err());
    assert!(node_transfer_path(&config(&[1, 2]), 0.25, &TraceOptions::default()).is_err());
    assert!(node_transfer_path(&config(&[2, 1]), 0.5, &TraceOptions::default()).is_err());
}

#[test]
fn canonical_config_is_a_trivial_path() {
    let r = connect_to_canonical(&config(&[4]), 0.25, &TraceOptions::default()).unwrap();
    assert_eq!(r.samples.len(), 1);
    assert_valid(&r);
}

#[test]
fn three_ones_take_two_rounds() {
    let opts = TraceOptions { steps: 64, ..TraceOptions::default() };
    let r = connect_to_canonical(&config(&[1, 1, 1]), 0.25, &opts).unwrap();
    assert_valid(&r);
    let mut rounds = 0;
    let mut prev = "";
    for s in &r.samples {
        if s.provenance == "node-transfer" && prev != "node-transfer" {
            rounds += 1;
        }
        prev = &s.provenance;
    }
    assert_eq!(rounds, 2);
    assert_eq!(r.last().m, config(&[3]).multiplicities);
}

#[test]
fn random_configs_reach_the_canonical_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let opts = TraceOptions { steps: 32, ..TraceOptions::default() };
    for g in 3..=5u32 {
        let mut m = vec![0u32; 12];
        for _ in 0..g {
            m[rng.gen_range(0..12)] += 1;
        }
        let r = connect_to_canonical(&CurveConfig::new(g, m.clone()).unwrap(), 0.25, &opts).unwrap();
        assert_valid(&r);
        assert_eq!(r.last().m[0], g, "{m:?}");
        assert!(r.samples.iter().all(|s| s.genus() == g as u64));
    }
}

#[test]
fn single_sample_is_continuous() {
    let r = permutation_path(&roots_of_unity(), &Permutation::identity(12), &config(&[1]), 0.25, &TraceOptions::default()).unwrap();
    let again = verify_path(r, 1);
    assert!(again.continuous);
}

#[test]
fn deleted_sample_is_flagged() {
    let m = config(&[2, 1]);
    let fine = node_transfer_path(&m, 0.25, &TraceOptions::default()).unwrap();
    let coarse = node_transfer_path(&m, 0.25, &TraceOptions { steps: 32, ..TraceOptions::default() }).unwrap();
    let whole = verify_path_with(coarse.clone(), 3, fine.eps_cont);
    assert!(whole.continuous);
    let mut cut = coarse;
    cut.samples.remove(16);
    let cut = verify_path_with(cut, 3, fine.eps_cont);
    assert!(!cut.continuous);
    assert!(cut.invariant_violations.iter().any(|v| v.kind == ViolationKind::Discontinuity && v.sample == 16));
}

#[test]
fn wrong_genus_is_flagged() {
    let r = cusp_limit_path(&roots_of_unity(), &config(&[2]), 0.25, &TraceOptions { steps: 16, ..TraceOptions::default() }).unwrap();
    let r = verify_path(r, 3);
    assert!(r.invariant_violations.iter().any(|v| v.kind == ViolationKind::Mass));
}

#[test]
fn seed_is_read_from_the_environment() {
    std::env::set_var("K3LAB_SEED", "42");
    assert_eq!(TraceOptions::from_env().seed, 42);
    std::env::remove_var("K3LAB_SEED");
    assert_eq!(TraceOptions::from_env().seed, 0);
}
