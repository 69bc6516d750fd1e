//! Acceptance suite: one pass/fail line per criterion, with a wall-clock
//! budget asserted for each.

use dlab_cli::pipeline::run_experiment;
use dlab_cli::spec::ExperimentConfig;
use dlab_core::numeric::rat;
use dlab_core::{
    build_level, case_fact, gap_spectrum_bruteforce, group_structure, intersect_levels,
    landscape_min, log_convexity_check, predict_levels, s_formula, s_piecewise,
    spectrum_matches_groups, ContinuedFraction, ErrorFunction, GrowthExpr, GrowthSpec,
    IntervalSet, MassDistribution, Rat, SampleStrategy, Schedule,
};
use num::bigint::BigInt;
use num::rational::Ratio;
use num::{BigUint, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn bi(v: i64) -> BigInt {
    BigInt::from(v)
}

fn finish(tag: &str, desc: &str, ok: bool, t0: Instant, budget_s: f64) {
    let dt = t0.elapsed().as_secs_f64();
    println!("{tag} {desc}: {} ({dt:.2}s)", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{tag} failed");
    assert!(dt < budget_s, "{tag} exceeded {budget_s}s budget ({dt:.2}s)");
}

/// Depth-3 fixture where a huge quotient after each scheduled index forces
/// the merged (Case 1) regime at K = 3/2; every level count is divisible
/// by q_(n_i).
fn case1_fixture() -> (ContinuedFraction, Schedule, Ratio<i64>) {
    let mut quotients = vec![20, 5, 11, 80, 350];
    quotients.extend(std::iter::repeat(6).take(40));
    let mut cf = ContinuedFraction::from_quotients(quotients).unwrap();
    // q_1 = 20, q_2 = 101, q_3 = 1131, q_4 = 90581
    let s = Schedule::explicit(&mut cf, &[(1, bi(80)), (2, bi(888)), (4, bi(91469))]).unwrap();
    (cf, s, Ratio::new(3, 2))
}

#[test]
fn a1_gamma_law_box_slope() {
    let t0 = Instant::now();
    let cfg = ExperimentConfig::preset("gamma-law").unwrap();
    let report = run_experiment(&cfg).unwrap();
    let slope = report.box_report.slope;
    let ok = (0.45..=0.55).contains(&slope) && report.all_hard_passed();
    finish(
        "A1",
        &format!("gamma-law box slope {slope:.4} in [0.45, 0.55]"),
        ok,
        t0,
        60.0,
    );
}

#[test]
fn a2_case_geometry_exact() {
    let t0 = Instant::now();
    let mut ok = true;

    // Case 1: component count collapses to q_(n_i) when q_(n_i) | N_i,
    // and all components share the same exact length
    let (mut cf, s, k) = case1_fixture();
    for lvl in &s.levels {
        let n_points = lvl.n_points();
        if (&n_points % &lvl.q_n) != bi(0) {
            continue;
        }
        let (set, geom) = build_level(&mut cf, lvl, k, Default::default(), 128).unwrap();
        ok &= geom.case_tag == 1;
        ok &= BigInt::from(set.component_count()) == lvl.q_n;
        ok &= geom.predicted_count == lvl.q_n;
        ok &= set.components().iter().all(|(lo, hi)| hi - lo == geom.length);
    }

    // Case 2: golden at K = 3 keeps all N_i arcs separate at length q^(-3)
    let mut cf = ContinuedFraction::golden();
    let s = Schedule::explicit(&mut cf, &[(5, bi(13)), (10, bi(144)), (15, bi(1597))]).unwrap();
    for lvl in &s.levels {
        let (set, geom) =
            build_level(&mut cf, lvl, Ratio::new(3, 1), Default::default(), 128).unwrap();
        ok &= geom.case_tag == 2;
        ok &= BigInt::from(set.component_count()) == lvl.n_points();
        ok &= geom.predicted_count == lvl.n_points();
        let len = Rat::new(BigInt::one(), lvl.q_n.pow(3));
        ok &= geom.length == len;
        ok &= set.components().iter().all(|(lo, hi)| hi - lo == len);
    }

    finish("A2", "Case 1/2 exact component counts and lengths", ok, t0, 30.0);
}

#[test]
fn a3_formula_identities_randomized() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut ok = true;
    for _ in 0..100_000 {
        let n = rat(rng.gen_range(1..=40), rng.gen_range(1..=8));
        let n = if n < rat(1, 1) { rat(1, 1) / n } else { n };
        let b = &n + rat(rng.gen_range(0..=30), rng.gen_range(1..=7));
        let k = rat(1, 1) + rat(rng.gen_range(1..=50), rng.gen_range(1..=9));
        let s = s_formula(&n, &b, &k).unwrap();
        ok &= s == s_piecewise(&n, &b, &k).unwrap();
        let (nk, fb, fact) = case_fact(&n, &b, &k).unwrap();
        // the strict dichotomy degenerates at its measure-zero boundary
        let boundary = b == k && (n == rat(1, 1) || n == b);
        ok &= fact || boundary;
        // case-split value identities
        if b >= k {
            ok &= s == (Rat::one() / &k).max(fb.clone());
        } else {
            ok &= s == nk.min(fb);
        }
    }
    for _ in 0..100_000 {
        let l = rat(rng.gen_range(0..=24), 48);
        let u = (&l + rat(rng.gen_range(0..=24), 48)).min(rat(1, 1));
        let beta = rat(rng.gen_range(10..=80), 10);
        let (f1, f2) = dlab_core::theorem2_both_forms(&u, &l, &beta).unwrap();
        ok &= f1 == f2;
    }
    finish("A3", "2 x 10^5 exact formula identities", ok, t0, 10.0);
}

#[test]
fn a4_landscape_optimizer() {
    let t0 = Instant::now();
    let (argmin, min) = landscape_min(0.5, 3.0, 4000).unwrap();
    let mut ok = (min - 0.375).abs() < 1e-4 && (argmin - 4.0 / 3.0).abs() < 1e-3;
    let (_, min2) = landscape_min(0.5, 2.0, 4000).unwrap();
    ok &= (min2 - 0.5).abs() < 1e-4;
    finish(
        "A4",
        &format!("landscape minima {min:.6} @ {argmin:.4} and {min2:.6}"),
        ok,
        t0,
        5.0,
    );
}

#[test]
fn a5_log_convexity_lemma() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(73);
    let mut ok = true;
    for _ in 0..100_000 {
        let a: f64 = rng.gen_range(0.001..0.999);
        let b = a * rng.gen_range(0.05..0.95);
        let c: f64 = rng.gen_range(0.001..0.999);
        let d = c * rng.gen_range(0.05..0.95);
        let t = rng.gen_range(0.0..=1.0);
        let (lhs, rhs, holds) = log_convexity_check(a, b, c, d, t).unwrap();
        ok &= holds && lhs >= rhs - 1e-12;
    }
    // endpoints hit one of the min arguments exactly
    for _ in 0..1000 {
        let a: f64 = rng.gen_range(0.001..0.999);
        let b = a * rng.gen_range(0.05..0.95);
        let c: f64 = rng.gen_range(0.001..0.999);
        let d = c * rng.gen_range(0.05..0.95);
        let (lhs0, _, _) = log_convexity_check(a, b, c, d, 0.0).unwrap();
        ok &= (lhs0 - c.ln() / d.ln()).abs() < 1e-12;
        let (lhs1, _, _) = log_convexity_check(a, b, c, d, 1.0).unwrap();
        ok &= (lhs1 - a.ln() / b.ln()).abs() < 1e-12;
    }
    finish("A5", "10^5 interpolation inequalities + endpoint equality", ok, t0, 5.0);
}

#[test]
fn a6_example3_reproduction() {
    let t0 = Instant::now();
    let mut cf = ContinuedFraction::synthesize(GrowthSpec::Band {
        lo: GrowthExpr::parse("q^2").unwrap(),
        hi: GrowthExpr::parse("2*q^2").unwrap(),
        seed_q1: 2,
    })
    .unwrap();
    // the band q_(k+1) in [q_k^2, 2 q_k^2] holds exactly for 8 levels
    let mut ok = true;
    for k in 1..=8 {
        let q = cf.q(k).unwrap();
        let q_next = cf.q(k + 1).unwrap();
        ok &= q_next >= (&q * &q) && q_next <= bi(2) * &q * &q;
    }
    let beta_hat = cf.estimate_type_window(2, 9).unwrap().beta_hat;
    ok &= (beta_hat - 2.0).abs() <= 0.1;

    let qs: Vec<BigUint> = (1..=12).map(|k| cf.q(k).unwrap().magnitude().clone()).collect();
    let phi = ErrorFunction::example3(Ratio::new(1, 3), Ratio::new(1, 2), qs.clone()).unwrap();
    for k in 5..=8 {
        let r = phi.ratio_at(&qs[k - 1]).unwrap().unwrap();
        ok &= (r - 1.0 / 3.0).abs() < 0.05;
    }
    let est = phi.estimate_exponents(2, 1_000_000, SampleStrategy::FamilyAware).unwrap();
    ok &= est.u_hat >= 0.45;
    finish(
        "A6",
        &format!("band exact, beta_hat {beta_hat:.3}, ratio -> 1/3, u_hat {:.3}", est.u_hat),
        ok,
        t0,
        60.0,
    );
}

#[test]
fn a7_three_distance_oracle() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut ok = true;

    // 200 random (alpha, N): never more than three distinct gap lengths
    for _ in 0..200 {
        let quotients: Vec<u64> = (0..220).map(|_| rng.gen_range(1..=8)).collect();
        let mut cf = ContinuedFraction::from_quotients(quotients).unwrap();
        let n: u64 = rng.gen_range(2..=10_000);
        let spec = gap_spectrum_bruteforce(&mut cf, &BigInt::zero(), &bi(n as i64), 96).unwrap();
        ok &= spec.distinct() <= 3;
        let total = spec.classes.iter().fold(Rat::zero(), |acc, c| {
            acc + c.length.mid() * Rat::from_integer(bi(c.multiplicity as i64))
        });
        ok &= (total - Rat::one()).abs() < rat(1, 1000);
    }

    // 50 admissible levels: the predicted group structure reproduces the
    // brute-force gap multiset
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 50 && attempts < 500 {
        attempts += 1;
        let quotients: Vec<u64> = (0..220).map(|_| rng.gen_range(1..=8)).collect();
        let mut cf = ContinuedFraction::from_quotients(quotients).unwrap();
        // deepest convergent index still within the 10^4 point budget
        let mut last = 1;
        while cf.q(last + 1).unwrap() <= bi(10_000) {
            last += 1;
        }
        if last < 2 {
            continue;
        }
        let n_index = rng.gen_range(2..=last);
        let q_n = cf.q(n_index).unwrap().to_i64().unwrap();
        let q_next = cf.q(n_index + 1).unwrap().to_i64().unwrap().min(10_000);
        if q_next <= q_n + 1 {
            continue;
        }
        let m = rng.gen_range(q_n + 1..=q_next);
        let gs = group_structure(&mut cf, n_index, &BigInt::zero(), &bi(m), 96).unwrap();
        if !gs.admissible {
            continue;
        }
        let spec = gap_spectrum_bruteforce(&mut cf, &BigInt::zero(), &bi(m), 96).unwrap();
        ok &= spectrum_matches_groups(&gs, &spec);
        checked += 1;
    }
    ok &= checked == 50;
    finish("A7", "200 gap spectra <= 3 lengths; 50 group-structure matches", ok, t0, 120.0);
}

#[test]
fn a8_mass_distribution_local_dimension() {
    let t0 = Instant::now();
    let (mut cf, s, k) = case1_fixture();
    let mut nested: Vec<IntervalSet> = Vec::new();
    let mut sets = Vec::new();
    for lvl in &s.levels {
        let (set, geom) = build_level(&mut cf, lvl, k, Default::default(), 128).unwrap();
        assert_eq!(geom.case_tag, 1, "fixture must stay in the merged regime");
        sets.push(set);
    }
    let (_, _counts) = intersect_levels(&sets).unwrap();
    // cumulative nesting F_j
    for set in sets {
        let next = match nested.last() {
            Some(parent) => set.retained_within(parent),
            None => set,
        };
        nested.push(next);
    }
    let md = MassDistribution::new(nested).unwrap();
    let deep = md.deepest().components();
    assert!(deep.len() >= 50, "need at least 50 deepest components, got {}", deep.len());

    // local mass exponent ln mu(B(y, r)) / ln r at r = component length
    let n_hat = s.n_hat();
    let b_hat = s.b_hat();
    let k_f: f64 = 1.5;
    let threshold = (1.0 / k_f).max(1.0 / (1.0 + b_hat - n_hat)) - 0.1;
    let step = deep.len() / 50;
    let mut ok = true;
    let mut worst = f64::INFINITY;
    for j in 0..50 {
        let (lo, hi) = &deep[j * step];
        let center = (lo + hi) / Rat::from_integer(bi(2));
        let r = hi - lo;
        let mu = md.mass_of_ball(&center, &r).unwrap();
        let f = (mu.numer().to_f64().unwrap() / mu.denom().to_f64().unwrap()).ln()
            / (r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap()).ln();
        worst = worst.min(f);
        ok &= f >= threshold;
    }
    finish(
        "A8",
        &format!("local exponent min {worst:.4} >= {threshold:.4} at 50 points"),
        ok,
        t0,
        60.0,
    );
}

#[test]
fn a9_cover_sum_decay() {
    let t0 = Instant::now();
    let mut cf = ContinuedFraction::golden();
    let phi = ErrorFunction::power(Ratio::new(2, 1)).unwrap();
    let s = Schedule::auto(&mut cf, &phi, 4, dlab_core::DEFAULT_GROWTH_EXP).unwrap();
    let k = Ratio::new(2, 1);
    let pred = predict_levels(&mut cf, &s, k, 128).unwrap();
    let pairs: Vec<(f64, f64)> = pred.iter().map(|p| (p.ln_count, p.ln_len)).collect();
    let n_hat = s.n_hat();
    let b_hat = s.b_hat();
    let s_val = (n_hat / 2.0).min((1.0f64 / 2.0).max(1.0 / (1.0 + b_hat - n_hat)));
    let above = dlab_core::cover_sum_ln(&pairs, s_val + 0.05);
    let below = dlab_core::cover_sum_ln(&pairs, s_val - 0.05);
    let decays = above.windows(2).all(|w| w[1] < w[0]);
    let no_decay = !below.windows(2).all(|w| w[1] < w[0]);
    let ok = decays && no_decay && above.len() == 4;
    finish("A9", &format!("cover sums decay at s = {:.3} + 0.05 only", s_val), ok, t0, 5.0);
}
