//! Property suites for the allocation policies and the QoS solver.

mod common;

use common::{random_popularity, triple_rng};
use oppnet_core::models::PopularityModel;
use oppnet_core::offload::{
    baseline_allocation, qos_allocation, sqrt_allocation, PolicyKind,
};
use rand::Rng;

#[test]
fn budget_feasibility_across_policies() {
    let mut rng = triple_rng(55);
    for _ in 0..100 {
        let pop = random_popularity(&mut rng);
        let budget = rng.random_range(0.5..8.0);
        let mut policies = vec![
            sqrt_allocation(&pop, budget),
            baseline_allocation(PolicyKind::Uniform, &pop, budget).unwrap(),
            baseline_allocation(PolicyKind::PowerLaw { k: 0.7 }, &pop, budget).unwrap(),
            qos_allocation(&pop, 1.0, 0.5, budget).unwrap().policy,
        ];
        if pop.max_n() > 1 || pop.min_n() > 1 {
            if let Ok(log) = baseline_allocation(PolicyKind::Log, &pop, budget) {
                policies.push(log);
            }
        }
        for p in &policies {
            let mean = p.mean_under(&pop);
            assert!(
                (mean - budget).abs() < 1e-6 * budget.max(1.0),
                "{:?}: E_p[rho] = {mean} vs budget {budget}",
                p.kind
            );
            assert!(p.table().iter().all(|&(_, r)| r >= 0.0));
        }
        // Random: realized totals are exact
        let random = baseline_allocation(PolicyKind::Random, &pop, budget).unwrap();
        let ns = vec![pop.min_n(); 64];
        let total: u64 = random.realize(&ns, 3).iter().map(|&c| u64::from(c)).sum();
        assert_eq!(total, (budget * 64.0).round() as u64);
    }
}

#[test]
fn qos_kkt_certificate_and_dominance_over_baselines() {
    // Stationarity, feasibility, complementary slackness, and objective
    // dominance over every same-budget baseline, across random instances.
    let mut rng = triple_rng(99);
    for case in 0..100 {
        let pop = random_popularity(&mut rng);
        let mu = rng.random_range(0.3..3.0);
        let ttl = rng.random_range(0.1..2.0);
        let budget = rng.random_range(0.5..6.0);
        let s = mu * ttl;
        let sol = qos_allocation(&pop, mu, ttl, budget).unwrap();

        // primal feasibility
        assert!((sol.policy.mean_under(&pop) - budget).abs() < 1e-8 * budget.max(1.0));
        for n in pop.pmf().support() {
            let rho = sol.policy.rho(n);
            assert!(rho >= 0.0);
            let stationarity = f64::from(n) * s * (-rho * s).exp();
            if rho > 0.0 {
                // active set: n·s·e^{−ρs} = λ0
                assert!(
                    (stationarity - sol.multiplier).abs() <= 1e-8 * sol.multiplier,
                    "case {case}: stationarity {stationarity} vs {}",
                    sol.multiplier
                );
            } else {
                // complementary slackness: gradient cannot push below zero
                assert!(stationarity <= sol.multiplier + 1e-8 * sol.multiplier);
            }
        }

        // objective dominance
        let objective = |policy: &oppnet_core::offload::AllocationPolicy| {
            pop.expect(|n| f64::from(n) * (-policy.rho(n) * s).exp())
        };
        let mut baselines = vec![
            sqrt_allocation(&pop, budget),
            baseline_allocation(PolicyKind::Uniform, &pop, budget).unwrap(),
        ];
        for k in [0.25, 0.75, 1.0] {
            baselines.push(baseline_allocation(PolicyKind::PowerLaw { k }, &pop, budget).unwrap());
        }
        if let Ok(log) = baseline_allocation(PolicyKind::Log, &pop, budget) {
            baselines.push(log);
        }
        for b in &baselines {
            assert!(
                sol.objective <= objective(b) + 1e-9,
                "case {case}: qos objective {} above {:?} objective {}",
                sol.objective,
                b.kind,
                objective(b)
            );
        }
    }
}

#[test]
fn sqrt_exponent_is_the_exact_argmin_of_the_delay_form() {
    // Among PowerLaw k ∈ {0, 0.25, 0.5, 0.75, 1}, the mean-statistics delay form
    // (1/(μ·E_p[n]))·E_p[n/ρ_k(n)] is minimized at k = 0.5 exactly, for
    // every popularity model with a non-degenerate support.
    let pops = vec![
        PopularityModel::zipf(1.0, 1, 30).unwrap(),
        PopularityModel::zipf(2.0, 1, 30).unwrap(),
        PopularityModel::zipf(3.0, 1, 30).unwrap(),
        PopularityModel::bounded_pareto(2.0, 50, 500).unwrap(),
        PopularityModel::explicit(std::collections::BTreeMap::from([
            (2, 0.3),
            (7, 0.5),
            (19, 0.2),
        ]))
        .unwrap(),
    ];
    let budget = 10.0;
    for pop in &pops {
        let delay_form = |k: f64| {
            let policy = baseline_allocation(PolicyKind::PowerLaw { k }, pop, budget).unwrap();
            pop.expect(|n| f64::from(n) / policy.rho(n)) / pop.mean()
        };
        let ks = [0.0, 0.25, 0.5, 0.75, 1.0];
        let values: Vec<f64> = ks.iter().map(|&k| delay_form(k)).collect();
        let argmin = values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert_eq!(
            ks[argmin], 0.5,
            "argmin {} for {:?}: {values:?}",
            ks[argmin],
            pop.family()
        );
        // ... and it coincides with the closed-form optimum
        let sqrt = sqrt_allocation(pop, budget);
        let direct = pop.expect(|n| f64::from(n) / sqrt.rho(n)) / pop.mean();
        assert!((direct - values[2]).abs() < 1e-12);
    }
}
