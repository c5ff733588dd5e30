//! Acceptance suite. One test per criterion; each prints a PASS/FAIL line
//! with the measured quantities before asserting, so a full run documents
//! every criterion:
//!
//!   cargo test --test acceptance -- --nocapture --test-threads=1

mod common;

use common::{group_records, pooled_runs, pooled_static, random_triple, triple_rng, PooledStatic};
use oppnet_core::analytic::{
    access_probability_bound, access_probability_exact, closed_form_metrics,
    effective_rate, expected_delay_bound, expected_delay_exact, multihop_delay,
    multihop_delay_harmonic, pareto_metrics, AggregateRateLaw, Metric, Weighting,
};
use oppnet_core::models::{
    AvailabilityRule, PopularityModel, RateDist, RateModel, RhoFn,
};
use oppnet_core::numerics::{RunningMoments, Z95};
use oppnet_core::offload::{
    baseline_allocation, qos_allocation, run_popularity_blind, sqrt_allocation,
    temporal_offload_experiment, BlindInputs, PolicyKind, TemporalSetup,
};
use oppnet_core::rng::derive_seed;
use oppnet_core::sim::{
    build_scenario, build_scenario_with_counts, simulate_multihop, simulate_static, BuildSpec,
    HolderSelection, Protocol,
};

fn verdict(id: &str, pass: bool, detail: &str) -> bool {
    println!("{} {id}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

/// 95% intervals of two estimates (mean, se) do not overlap, lower first.
fn separated(lower: (f64, f64), upper: (f64, f64)) -> bool {
    lower.0 + Z95 * lower.1 < upper.0 - Z95 * upper.1
}

// ---------------------------------------------------------------------------
// AC-1: prediction accuracy across network sizes
// ---------------------------------------------------------------------------
#[test]
fn ac1_prediction_accuracy_by_network_size() {
    let started = std::time::Instant::now();
    let dist = RateDist::Gamma { mean: 1.0, cv: 1.0 };
    let rate = RateModel::exponential(dist.clone());
    let pop = PopularityModel::bounded_pareto(2.0, 50, 500).unwrap();
    let rule = AvailabilityRule::deterministic(RhoFn::Linear { c: 0.2 });
    let law = AggregateRateLaw::for_rates(&dist, 1, 0);
    let horizon = 2.8; // ~50x the mean-statistics delay bound

    let predicted_delay = expected_delay_exact(&pop, &rule, &law)
        .unwrap()
        .value()
        .unwrap();

    let cases = [
        (500u32, 240u32, 0.06, 0.065),
        (1000, 320, 0.025, 0.018),
        (2000, 400, 0.016, 0.012),
    ];
    let mut all_pass = true;
    for (i, &(n_nodes, scenarios, delay_tol, prob_tol)) in cases.iter().enumerate() {
        let spec = BuildSpec {
            rate: &rate,
            popularity: &pop,
            n_nodes,
            n_contents: 50,
            selection: HolderSelection::UniformRandom,
            protocol: Protocol::Static,
        };
        let pooled = pooled_static(&spec, &rule, scenarios, 1, horizon, 1000 + i as u64);
        let (sim_delay, _) = pooled.mean_delay();
        let delay_err = (sim_delay - predicted_delay).abs() / predicted_delay;

        let ttl = pooled.delay_quantile(0.5);
        let predicted_p = access_probability_exact(&pop, &rule, &law, ttl).unwrap().value;
        let (sim_p, _) = pooled.access_probability(ttl);
        let prob_err = (sim_p - predicted_p).abs() / predicted_p;

        all_pass &= verdict(
            &format!("AC-1[N={n_nodes}]"),
            delay_err <= delay_tol && prob_err <= prob_tol,
            &format!(
                "delay err {:.2}% (≤{:.1}%), access err {:.2}% (≤{:.1}%) over {} requests (sim {:.5} vs exact {:.5}; P {:.4} vs exact {:.4} at ttl {:.4})",
                delay_err * 100.0,
                delay_tol * 100.0,
                prob_err * 100.0,
                prob_tol * 100.0,
                pooled.records(),
                sim_delay,
                predicted_delay,
                sim_p,
                predicted_p,
                ttl
            ),
        );
    }
    let elapsed = started.elapsed().as_secs_f64();
    all_pass &= verdict(
        "AC-1[runtime]",
        elapsed < 180.0,
        &format!("{elapsed:.1} s (< 180 s)"),
    );
    assert!(all_pass, "AC-1 failed");
}

// ---------------------------------------------------------------------------
// AC-2: bound bracketing over randomized triples, analytic + simulated
// ---------------------------------------------------------------------------
#[test]
fn ac2_bound_bracketing() {
    let mut rng = triple_rng(777);
    let n_triples = 200;
    let mut analytic_ok = true;
    let mut equality_checked = 0;
    let mut comparisons = 0u32;
    let mut violations = 0u32;

    for case in 0..n_triples {
        let t = random_triple(&mut rng, 400);
        let mu = t.rate.mean();
        let law = AggregateRateLaw::for_rates(&t.rate, 20_000, 9_000 + case);
        let exact = expected_delay_exact(&t.pop, &t.rule, &law).unwrap();
        let bound = expected_delay_bound(&t.pop, &t.rule, mu).unwrap();
        if let (Metric::Finite(e), Metric::Finite(b)) = (exact, bound) {
            if b.value > e.value + 3.0 * e.se + 1e-9 {
                analytic_ok = false;
                eprintln!("case {case}: delay bound above exact ({} > {})", b.value, e.value);
            }
        }
        let scale = bound.value().unwrap_or(0.5).max(1e-3);
        let ttl = 1.2 * scale;
        let pe = access_probability_exact(&t.pop, &t.rule, &law, ttl).unwrap();
        let pb = access_probability_bound(&t.pop, &t.rule, mu, ttl).unwrap();
        if pe.value > pb + 3.0 * pe.se + 1e-9 {
            analytic_ok = false;
            eprintln!("case {case}: access exact above bound ({} > {pb})", pe.value);
        }
        if matches!(t.rate, RateDist::Constant { .. })
            && t.rule.deterministic_rho(t.pop.min_n()).is_some()
        {
            equality_checked += 1;
            let (e, b) = (exact.value().unwrap(), bound.value().unwrap());
            if (e - b).abs() > 1e-9 || (pe.value - pb).abs() > 1e-9 {
                analytic_ok = false;
                eprintln!("case {case}: Jensen equality violated");
            }
        }

        // Simulation side: CI-overlap against both bounds.
        let rate_model = RateModel::exponential(t.rate.clone());
        let spec = BuildSpec {
            rate: &rate_model,
            popularity: &t.pop,
            n_nodes: 400,
            n_contents: 15,
            selection: HolderSelection::UniformRandom,
            protocol: Protocol::Static,
        };
        let horizon = (50.0 * scale).max(ttl);
        let rule = &t.rule;
        let pooled = pooled_runs(6, |s| {
            let scn = build_scenario(&spec, rule, derive_seed(5_000 + case, 11, u64::from(s)))
                .expect("build");
            simulate_static(&scn, 1, horizon, derive_seed(6_000 + case, 13, u64::from(s)))
                .expect("sim")
        });
        if !exact.is_infinite() {
            comparisons += 1;
            let (mean, se) = pooled.mean_delay();
            if mean + Z95 * se < bound.value().unwrap_or(f64::INFINITY) {
                violations += 1;
            }
        }
        comparisons += 1;
        let (sim_p, p_se) = pooled.access_probability(ttl);
        if sim_p - Z95 * p_se > pb {
            violations += 1;
        }
    }

    let frac = f64::from(violations) / f64::from(comparisons);
    let mut all = verdict(
        "AC-2[analytic]",
        analytic_ok && equality_checked >= 5,
        &format!(
            "orderings held on {n_triples} triples; Jensen equality checked on {equality_checked} Constant+Deterministic draws"
        ),
    );
    all &= verdict(
        "AC-2[simulation]",
        frac <= 0.05,
        &format!(
            "{violations}/{comparisons} CI-overlap violations ({:.1}% ≤ 5%)",
            frac * 100.0
        ),
    );
    assert!(all, "AC-2 failed");
}

// ---------------------------------------------------------------------------
// AC-3: closed-form cross-checks
// ---------------------------------------------------------------------------

/// Composite Simpson rule on [a, b] with 2·n panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / (2 * n) as f64;
    let mut acc = f(a) + f(b);
    for i in 1..2 * n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64);
    }
    acc * h / 3.0
}

#[test]
fn ac3_closed_form_cross_check() {
    let mut all = true;

    // Independent high-resolution integration of the exact predictors under
    // the continuous Pareto(n0, shape 2) + Gamma assumptions. With the
    // substitution u = n0/n the request-weighted tail becomes ∫_0^1 h(n0/u) du.
    for &(c, n0, mu, cv, ttl) in &[
        (0.2, 50.0, 1.0, 1.0, 1.0),
        (0.2, 50.0, 1.0, 0.5, 0.5),
        (0.5, 20.0, 2.0, 1.5, 0.3),
        (2.0, 50.0, 1.0, 1.0, 1.0),
    ] {
        let t2 = closed_form_metrics(c, n0, mu, cv, ttl).unwrap();
        let k = 1.0 / (cv * cv);
        let theta = mu * cv * cv;
        let delay_num = simpson(
            |u| {
                if u == 0.0 {
                    0.0
                } else {
                    1.0 / (theta * (c * (n0 / u) * k - 1.0))
                }
            },
            0.0,
            1.0,
            400_000,
        );
        let ln_gamma = (c / (cv * cv)) * (1.0 + mu * cv * cv * ttl).ln();
        let prob_num = 1.0
            - simpson(
                |u| if u == 0.0 { 0.0 } else { (n0 / u).powf(-ln_gamma) },
                0.0,
                1.0,
                400_000,
            );
        let delay_err = (t2.delay - delay_num).abs() / delay_num;
        let prob_err = (t2.probability - prob_num).abs() / prob_num;
        all &= verdict(
            &format!("AC-3[integral c={c} n0={n0} cv={cv}]"),
            delay_err <= 1e-3 && prob_err <= 1e-3,
            &format!(
                "delay {:.6} vs ∫ {:.6} ({:.4}%), prob {:.6} vs ∫ {:.6} ({:.4}%); ≤ 0.1%",
                t2.delay,
                delay_num,
                delay_err * 100.0,
                t2.probability,
                prob_num,
                prob_err * 100.0
            ),
        );
    }

    // Agreement with the discrete-bounded generic path for n_max ≥ 20·n0.
    // The natively discrete bounded Pareto renormalizes away the continuous
    // tail (request mass n0/n_max), which the delay row feels in full; the
    // documented grid shows the convergence.
    let (c, n0, mu, cv, ttl) = (0.2, 50.0, 1.0, 1.0, 1.0);
    let t2 = closed_form_metrics(2.0, n0, mu, cv, ttl).unwrap(); // prob row uses c = 2
    let t2_delay = closed_form_metrics(c, n0, mu, cv, ttl).unwrap().delay;
    let law = AggregateRateLaw::for_rates(&RateDist::Gamma { mean: mu, cv }, 1, 0);
    for mult in [20u32, 40, 100] {
        let pop = PopularityModel::bounded_pareto(2.0, 50, 50 * mult).unwrap();
        let delay = expected_delay_exact(
            &pop,
            &AvailabilityRule::deterministic(RhoFn::Linear { c }),
            &law,
        )
        .unwrap()
        .value()
        .unwrap();
        let prob = access_probability_exact(
            &pop,
            &AvailabilityRule::deterministic(RhoFn::Log { c: 2.0 }),
            &law,
            ttl,
        )
        .unwrap()
        .value;
        let delay_err = (delay - t2_delay).abs() / t2_delay;
        let prob_err = (prob - t2.probability).abs() / t2.probability;
        all &= verdict(
            &format!("AC-3[discrete n_max={}·n0]", mult),
            delay_err <= 0.03 && prob_err <= 0.03,
            &format!(
                "delay {:.6} vs closed {:.6} ({:.2}%), prob {:.6} vs closed {:.6} ({:.3}%); ≤ 3%",
                delay,
                t2_delay,
                delay_err * 100.0,
                prob,
                t2.probability,
                prob_err * 100.0
            ),
        );
    }
    assert!(all, "AC-3 failed");
}

// ---------------------------------------------------------------------------
// AC-4: multi-hop accuracy
// ---------------------------------------------------------------------------
#[test]
fn ac4_multihop_accuracy() {
    let pop = PopularityModel::bounded_pareto(2.0, 50, 500).unwrap();
    let rule = AvailabilityRule::deterministic(RhoFn::Linear { c: 0.2 });
    let mut all = true;

    for (i, &cv) in [0.5f64, 1.0].iter().enumerate() {
        let dist = RateDist::pareto_from_mean_cv(1.0, cv).unwrap();
        let rate = RateModel::exponential(dist);
        let spec = BuildSpec {
            rate: &rate,
            popularity: &pop,
            n_nodes: 2000,
            n_contents: 20,
            selection: HolderSelection::UniformRandom,
            protocol: Protocol::MultiHop {
                cooperation: 1.0,
                limit: None,
            },
        };
        let rule_ref = &rule;
        let spec_ref = &spec;
        let pooled = pooled_runs(50, |s| {
            let scn =
                build_scenario(spec_ref, rule_ref, derive_seed(40 + i as u64, 3, u64::from(s)))
                    .expect("build");
            simulate_multihop(&scn, 2, 1e4, derive_seed(41 + i as u64, 5, u64::from(s)))
                .expect("sim")
                .records
        });
        let (sim, se) = pooled.mean_delay();
        let ln_form = multihop_delay(&pop, &rule, 1.0).unwrap().value().unwrap();
        let harmonic = multihop_delay_harmonic(&pop, &rule, 1.0)
            .unwrap()
            .value()
            .unwrap();
        let ln_err = (ln_form - sim).abs() / sim;
        let h_err = (harmonic - sim).abs() / sim;
        all &= verdict(
            &format!("AC-4[CV={cv}]"),
            ln_err <= 0.10 && h_err <= 0.03,
            &format!(
                "sim {sim:.5} ± {se:.5} ({} requests): ln-form {ln_form:.5} ({:.2}% ≤ 10%), harmonic oracle {harmonic:.5} ({:.2}% ≤ 3%)",
                pooled.records(),
                ln_err * 100.0,
                h_err * 100.0
            ),
        );
    }

    // Homogeneous sub-case: n = 10, m = 2, constant λ — exact within 3 SE of
    // the harmonic sum (1/(10λ))·Σ_{k=2}^{11} 1/k.
    let lambda = 1.5;
    let n_nodes = 12u32;
    let scn = oppnet_core::sim::Scenario {
        n_nodes,
        weights: oppnet_core::sim::PairWeights::dense_from(n_nodes, |_, _| lambda),
        second_window: None,
        contents: vec![oppnet_core::sim::ContentSpec {
            id: 0,
            requesters: (0..10).collect(),
            holders: vec![10, 11],
        }],
        protocol: Protocol::MultiHop {
            cooperation: 1.0,
            limit: None,
        },
        contact_law: oppnet_core::models::ContactLaw::Exponential,
    };
    let out = simulate_multihop(&scn, 30_000, 1e5, 99).unwrap();
    let grouped = group_records(&out.records, |r| r.replication);
    let (mean, se) = grouped.mean_delay();
    let truth: f64 = (2..=11).map(|k| 1.0 / k as f64).sum::<f64>() / (10.0 * lambda);
    all &= verdict(
        "AC-4[homogeneous]",
        (mean - truth).abs() < 3.0 * se,
        &format!("sim {mean:.5} ± {se:.5} vs harmonic {truth:.5} (3 SE)"),
    );
    assert!(all, "AC-4 failed");
}

// ---------------------------------------------------------------------------
// AC-5: square-root optimality
// ---------------------------------------------------------------------------
#[test]
fn ac5_sqrt_optimality() {
    let dist = RateDist::Gamma { mean: 1.0, cv: 0.5 };
    let rate = RateModel::exponential(dist);
    let budget = 10.0;
    let ks = [0.25, 0.5, 0.75, 1.0];
    let mut all = true;

    for &alpha in &[1.0f64, 2.0, 3.0] {
        let pop = PopularityModel::zipf(alpha, 1, 30).unwrap();
        let scenarios = 640u32;
        let reps = (800_000.0 / (f64::from(scenarios) * 50.0 * pop.mean())).ceil() as u32;
        let mut results = Vec::new();
        for &k in &ks {
            let policy = baseline_allocation(PolicyKind::PowerLaw { k }, &pop, budget).unwrap();
            let spec = BuildSpec {
                rate: &rate,
                popularity: &pop,
                n_nodes: 400,
                n_contents: 50,
                selection: HolderSelection::UniformRandom,
                protocol: Protocol::Static,
            };
            let policy_ref = &policy;
            let pooled = pooled_runs(scenarios, |s| {
                // common build seeds across k: arms share contents/requesters
                let scn = build_scenario_with_counts(
                    &spec,
                    |ns| policy_ref.realize(ns, derive_seed(70, 3, u64::from(s))),
                    derive_seed(71, 7, u64::from(s)),
                )
                .expect("build");
                simulate_static(
                    &scn,
                    reps,
                    1e4,
                    derive_seed(72 + (k * 100.0) as u64, 11, u64::from(s)),
                )
                .expect("sim")
            });
            results.push(pooled.mean_delay());
        }
        let argmin = results
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
            .unwrap()
            .0;
        let best = results[1];
        let mut pass = ks[argmin] == 0.5;
        let mut margins = String::new();
        for (i, &k) in ks.iter().enumerate() {
            if k == 0.5 {
                continue;
            }
            let sep = separated(best, results[i]);
            pass &= sep;
            margins.push_str(&format!(
                " k={k}: {:.5}±{:.5}{}",
                results[i].0,
                results[i].1,
                if sep { "" } else { " (NOT separated)" }
            ));
        }
        all &= verdict(
            &format!("AC-5[α={alpha}]"),
            pass,
            &format!(
                "argmin k={} with k=0.5 at {:.5}±{:.5};{margins}",
                ks[argmin], best.0, best.1
            ),
        );
    }
    assert!(all, "AC-5 failed");
}

// ---------------------------------------------------------------------------
// AC-6: QoS solver against baselines
// ---------------------------------------------------------------------------
#[test]
fn ac6_qos_beats_baselines() {
    let pop = PopularityModel::zipf(1.0, 1, 30).unwrap();
    let dist = RateDist::Gamma { mean: 1.0, cv: 1.0 };
    let rate = RateModel::exponential(dist);
    let ttl = 0.4;
    let mut all = true;

    // Toy two-class KKT instance against an exhaustive grid search.
    let two = PopularityModel::explicit(std::collections::BTreeMap::from([
        (1, 0.5),
        (4, 0.5),
    ]))
    .unwrap();
    let sol = qos_allocation(&two, 1.0, 1.0, 1.0).unwrap();
    let mut grid_best = f64::INFINITY;
    let mut r = 0.0f64;
    while r <= 2.0 {
        grid_best = grid_best.min(0.5 * (-r).exp() + 2.0 * (-(2.0 - r)).exp());
        r += 1e-3;
    }
    all &= verdict(
        "AC-6[kkt-grid]",
        (sol.objective - grid_best).abs() <= 1e-6,
        &format!(
            "KKT objective {:.9} vs grid-search {:.9} (|Δ| ≤ 1e-6)",
            sol.objective, grid_best
        ),
    );

    for &budget in &[1.0f64, 2.0] {
        let policies = [
            ("qos", qos_allocation(&pop, 1.0, ttl, budget).unwrap().policy),
            ("log", baseline_allocation(PolicyKind::Log, &pop, budget).unwrap()),
            ("sqrt", sqrt_allocation(&pop, budget)),
            ("random", baseline_allocation(PolicyKind::Random, &pop, budget).unwrap()),
        ];
        let mut r_off = Vec::new();
        for (pi, (_, policy)) in policies.iter().enumerate() {
            let spec = BuildSpec {
                rate: &rate,
                popularity: &pop,
                n_nodes: 300,
                n_contents: 50,
                selection: HolderSelection::UniformRandom,
                protocol: Protocol::Static,
            };
            let pooled = pooled_runs(240, |s| {
                let scn = build_scenario_with_counts(
                    &spec,
                    |ns| policy.realize(ns, derive_seed(80 + pi as u64, 3, u64::from(s))),
                    derive_seed(81, 7, u64::from(s)), // shared worlds across policies
                )
                .expect("build");
                simulate_static(&scn, 1, ttl, derive_seed(82 + pi as u64, 11, u64::from(s)))
                    .expect("sim")
            });
            r_off.push(pooled.access_probability(ttl));
        }
        let (qos, log, sqrt, random) = (r_off[0], r_off[1], r_off[2], r_off[3]);
        let qos_best = separated(log, qos) && separated(sqrt, qos) && separated(random, qos);
        let random_worst = separated(random, log) && separated(random, sqrt);
        all &= verdict(
            &format!("AC-6[budget={budget}]"),
            qos_best && random_worst,
            &format!(
                "R_off qos {:.4}±{:.4} > log {:.4} / sqrt {:.4}; random worst {:.4} (middle log-vs-sqrt ordering recorded, not asserted: log {} sqrt)",
                qos.0,
                qos.1,
                log.0,
                sqrt.0,
                random.0,
                if log.0 > sqrt.0 { ">" } else { "<=" }
            ),
        );
    }
    assert!(all, "AC-6 failed");
}

// ---------------------------------------------------------------------------
// AC-7: Pareto inter-contact times
// ---------------------------------------------------------------------------
#[test]
fn ac7_pareto_inter_contact() {
    let pop = PopularityModel::bounded_pareto(2.0, 50, 100).unwrap();
    let rule = AvailabilityRule::deterministic(RhoFn::Linear { c: 0.2 });
    let mut all = true;

    for (i, &alpha_max) in [4.0f64, 6.0].iter().enumerate() {
        let shapes = RateDist::Uniform { min: 1.5, max: alpha_max };
        let rate = RateModel::ParetoShape {
            shapes: shapes.clone(),
            t0: 1.0,
        };
        let spec = BuildSpec {
            rate: &rate,
            popularity: &pop,
            n_nodes: 1000,
            n_contents: 30,
            selection: HolderSelection::UniformRandom,
            protocol: Protocol::Static,
        };
        let pooled = pooled_static(&spec, &rule, 60, 2, 100.0, 300 + i as u64);
        let (sim_delay, delay_se) = pooled.mean_delay();
        let ttl = pooled.delay_quantile(0.5);
        let (sim_p, p_se) = pooled.access_probability(ttl);

        let m = pareto_metrics(&shapes, 1.0, &pop, &rule, ttl, 100_000, 17 + i as u64).unwrap();
        let delay_exact = m.delay.value().unwrap();
        let delay_err = (delay_exact - sim_delay).abs() / sim_delay;
        let prob_err = (m.probability.value - sim_p).abs() / sim_p;
        let brackets = m.delay_bound.value().unwrap() <= sim_delay + 3.0 * delay_se
            && m.probability_bound >= sim_p - 3.0 * p_se;
        all &= verdict(
            &format!("AC-7[α∈[1.5,{alpha_max}]]"),
            delay_err <= 0.05 && prob_err <= 0.05 && brackets,
            &format!(
                "delay sim {sim_delay:.5} vs exact {delay_exact:.5} ({:.2}% ≤ 5%); access sim {sim_p:.4} vs exact {:.4} ({:.2}% ≤ 5%); bounds bracket: delay {:.5} ≤ sim, prob {:.4} ≥ sim",
                delay_err * 100.0,
                m.probability.value,
                prob_err * 100.0,
                m.delay_bound.value().unwrap(),
                m.probability_bound
            ),
        );
    }
    assert!(all, "AC-7 failed");
}

// ---------------------------------------------------------------------------
// AC-8: popularity-blind sandwich
// ---------------------------------------------------------------------------
#[test]
fn ac8_popularity_blind_sandwich() {
    let dist = RateDist::Gamma { mean: 1.0, cv: 1.0 };
    let rate = RateModel::exponential(dist);
    let pop = PopularityModel::zipf(1.0, 1, 30).unwrap();
    let (n_nodes, n_contents, budget) = (150u32, 20u32, 5.0);
    let horizon = 10.0; // ~50x the Uniform-policy bound
    let worlds = 400u32;

    // popularity-blind runs (Algorithm-2 dynamics)
    let blind_inputs = BlindInputs {
        rate: &rate,
        popularity: &pop,
        n_nodes,
        n_contents,
    };
    let blind_run =
        run_popularity_blind(&blind_inputs, budget, 10, worlds, horizon, 91).unwrap();
    let blind = group_records(&blind_run.records, |r| r.replication).mean_delay();

    // static arms with the same world scale
    let arm = |policy: &oppnet_core::offload::AllocationPolicy, salt: u64| -> (f64, f64) {
        let spec = BuildSpec {
            rate: &rate,
            popularity: &pop,
            n_nodes,
            n_contents,
            selection: HolderSelection::UniformRandom,
            protocol: Protocol::Static,
        };
        pooled_runs(worlds, |s| {
            let scn = build_scenario_with_counts(
                &spec,
                |ns| policy.realize(ns, derive_seed(salt, 3, u64::from(s))),
                derive_seed(salt, 7, u64::from(s)),
            )
            .expect("build");
            simulate_static(&scn, 1, horizon, derive_seed(salt, 11, u64::from(s)))
                .expect("sim")
        })
        .mean_delay()
    };
    let uniform = arm(
        &baseline_allocation(PolicyKind::Uniform, &pop, budget).unwrap(),
        1100,
    );
    let optimal = arm(&sqrt_allocation(&pop, budget), 1200);

    let pass = separated(blind, uniform) && separated(optimal, uniform) && blind.0 >= optimal.0;
    let ok = verdict(
        "AC-8",
        pass,
        &format!(
            "mean delay: optimal {:.4}±{:.4} ≤ blind {:.4}±{:.4} ≤ uniform {:.4}±{:.4}; blind and optimal CI-separated from uniform",
            optimal.0, optimal.1, blind.0, blind.1, uniform.0, uniform.1
        ),
    );
    assert!(ok, "AC-8 failed");
}

// ---------------------------------------------------------------------------
// AC-9: temporal windows
// ---------------------------------------------------------------------------
#[test]
fn ac9_temporal_windows() {
    let rate1 = RateDist::Gamma { mean: 1.0, cv: 1.0 };
    let rate2 = RateDist::Gamma { mean: 5.0, cv: 1.0 };
    let pop = PopularityModel::zipf(2.0, 1, 100).unwrap();
    let ttl = 0.17;
    let windows = [0.5 * ttl, 0.625 * ttl, 0.75 * ttl];
    let setup = TemporalSetup {
        rate1: &rate1,
        rate2: &rate2,
        popularity: &pop,
        n_nodes: 400,
        n_contents: 50,
        ttl,
        budget: 5.0,
    };

    // pooled over independent worlds; each call shares matrices/placements
    // across mechanisms and windows (common random numbers)
    let calls = 60u32;
    let mut sums = vec![[RunningMoments::default(); 3]; windows.len()];
    for call in 0..calls {
        let cells =
            temporal_offload_experiment(&setup, &windows, 12, derive_seed(1300, 3, u64::from(call)))
                .unwrap();
        for (w, cell) in cells.iter().enumerate() {
            for (acc, est) in sums[w].iter_mut().zip(&cell.r_off) {
                acc.push(est.value);
            }
        }
    }
    let cell = |w: usize, m: usize| (sums[w][m].mean(), sums[w][m].std_error());

    let mut all = true;
    let mut gaps = Vec::new();
    for (w, &win) in windows.iter().enumerate() {
        let (avg, win_based, log) = (cell(w, 0), cell(w, 1), cell(w, 2));
        let ordered = avg.0 >= win_based.0 && win_based.0 >= log.0;
        gaps.push(avg.0 - win_based.0);
        all &= verdict(
            &format!("AC-9[window={win:.4}]"),
            ordered,
            &format!(
                "R_off avg {:.4}±{:.4} ≥ window-based {:.4}±{:.4} ≥ log {:.4}±{:.4}",
                avg.0, avg.1, win_based.0, win_based.1, log.0, log.1
            ),
        );
    }
    let monotone = gaps.windows(2).all(|g| g[1] <= g[0]);
    all &= verdict(
        "AC-9[gap]",
        monotone,
        &format!(
            "average−window gaps {:.4} ≥ {:.4} ≥ {:.4} (non-increasing in window length)",
            gaps[0], gaps[1], gaps[2]
        ),
    );
    assert!(all, "AC-9 failed");
}

// ---------------------------------------------------------------------------
// AC-10: mobility-dependent allocation (Result 4)
// ---------------------------------------------------------------------------
#[test]
fn ac10_weighted_selection_effect() {
    // The product-weight mechanism's effective rate tilt matches the
    // linear approximation π(λ) ∝ λ only while the per-candidate
    // log-weights stay comparable, i.e. for small popularity; with large
    // requester sets the top-weight candidates win regardless of any single
    // pairwise rate and the tilt dilutes. The scenario therefore uses a
    // small-N_p content population, squarely inside the approximation's
    // domain of validity.
    let dist = RateDist::Gamma { mean: 1.0, cv: 0.5 };
    let rate = RateModel::exponential(dist.clone());
    let pop = PopularityModel::degenerate(10).unwrap();
    let rule = AvailabilityRule::deterministic(RhoFn::Linear { c: 0.2 }); // m = 2
    let horizon = 200.0;

    let mu_pi = effective_rate(&dist, &Weighting::Linear).unwrap().value;

    let mut realized_rates = RunningMoments::default();
    let mut run = |selection: HolderSelection, salt: u64, collect: bool| -> PooledStatic {
        let spec = BuildSpec {
            rate: &rate,
            popularity: &pop,
            n_nodes: 800,
            n_contents: 30,
            selection,
            protocol: Protocol::Static,
        };
        pooled_runs(24, |s| {
            let scn = build_scenario(&spec, &rule, derive_seed(salt, 3, u64::from(s)))
                .expect("build");
            if collect {
                for content in &scn.contents {
                    for &j in &content.requesters {
                        for &i in &content.holders {
                            realized_rates.push(scn.weight(i, j));
                        }
                    }
                }
            }
            simulate_static(&scn, 4, horizon, derive_seed(salt, 11, u64::from(s))).expect("sim")
        })
    };
    let weighted = run(HolderSelection::WeightedByRatesToRequesters, 1500, true);
    let uniform = run(HolderSelection::UniformRandom, 1600, false);

    let (w_mean, w_se) = weighted.mean_delay();
    let (u_mean, u_se) = uniform.mean_delay();
    let bound = expected_delay_bound(&pop, &rule, mu_pi)
        .unwrap()
        .value()
        .unwrap();
    let ratio = realized_rates.mean() / dist.mean();
    let ratio_ok = (ratio - 1.25).abs() / 1.25 <= 0.03;
    let bound_ok = bound <= w_mean + 3.0 * w_se;
    let faster = separated((w_mean, w_se), (u_mean, u_se));

    let ok = verdict(
        "AC-10",
        ratio_ok && bound_ok && faster,
        &format!(
            "μ^(π)/μ recovered {ratio:.4} (within 3% of 1.25: {ratio_ok}); effective-rate bound {bound:.5} ≤ weighted sim {w_mean:.5}±{w_se:.5}; weighted < uniform {u_mean:.5}±{u_se:.5} (CI-separated)"
        ),
    );
    assert!(ok, "AC-10 failed");
}
