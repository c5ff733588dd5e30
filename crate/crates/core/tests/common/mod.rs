//! Shared helpers for the integration suites: randomized model triples and
//! simulation summaries.

#![allow(dead_code)]

use oppnet_core::models::{AvailabilityRule, PopularityModel, RateDist, RhoFn};
use oppnet_core::numerics::RunningMoments;
use oppnet_core::pmf::Pmf;
use oppnet_core::rng::derive_rng;
use oppnet_core::sim::DeliveryRecord;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub struct Triple {
    pub rate: RateDist,
    pub pop: PopularityModel,
    pub rule: AvailabilityRule,
    pub label: String,
}

pub fn triple_rng(seed: u64) -> ChaCha8Rng {
    derive_rng(seed, 0x7472_6970, 0)
}

pub fn random_rate(rng: &mut impl Rng) -> RateDist {
    match rng.random_range(0..5) {
        0 => RateDist::Gamma {
            mean: rng.random_range(0.3..3.0),
            cv: rng.random_range(0.2..2.0),
        },
        1 => RateDist::pareto_from_mean_cv(
            rng.random_range(0.3..3.0),
            rng.random_range(0.3..1.2),
        )
        .unwrap(),
        2 => {
            let min = rng.random_range(0.1..1.0);
            RateDist::Uniform {
                min,
                max: min + rng.random_range(0.1..2.0),
            }
        }
        3 => RateDist::Constant {
            value: rng.random_range(0.3..3.0),
        },
        _ => RateDist::Empirical {
            values: (0..rng.random_range(5..30))
                .map(|_| rng.random_range(0.1..3.0))
                .collect(),
        },
    }
}

pub fn random_popularity(rng: &mut impl Rng) -> PopularityModel {
    match rng.random_range(0..4) {
        0 => {
            let n_min = rng.random_range(1..5);
            let n_max = n_min + rng.random_range(3..36);
            PopularityModel::zipf(rng.random_range(0.3..3.0), n_min, n_max).unwrap()
        }
        1 => {
            let n_min = rng.random_range(1..5);
            let n_max = n_min + rng.random_range(3..36);
            PopularityModel::bounded_pareto(rng.random_range(0.3..3.0), n_min, n_max).unwrap()
        }
        2 => PopularityModel::degenerate(rng.random_range(2..40)).unwrap(),
        _ => {
            let k = rng.random_range(3..7);
            let mut entries = BTreeMap::new();
            while entries.len() < k {
                entries.insert(rng.random_range(1..40u32), rng.random_range(0.05..1.0f64));
            }
            let total: f64 = entries.values().sum();
            PopularityModel::explicit(
                entries.into_iter().map(|(n, w)| (n, w / total)).collect(),
            )
            .unwrap()
        }
    }
}

/// Availability rule that stays valid for `pop` in a network of `n_nodes`.
/// Deterministic tables carry integer values so that the realized holder
/// counts equal the declared mean exactly.
pub fn random_rule(rng: &mut impl Rng, pop: &PopularityModel, n_nodes: u32) -> AvailabilityRule {
    let cap = |n: u32| (n_nodes - pop.max_n()).min(n.clamp(1, 30)).max(1);
    match rng.random_range(0..3) {
        0 => {
            let values: BTreeMap<u32, f64> = pop
                .pmf()
                .support()
                .map(|n| (n, f64::from(rng.random_range(1..=cap(n).max(1)))))
                .collect();
            AvailabilityRule::deterministic(RhoFn::Table { values })
        }
        1 => {
            let values: BTreeMap<u32, f64> = pop
                .pmf()
                .support()
                .map(|n| (n, rng.random_range(0.5..f64::from(cap(n)).max(0.6))))
                .collect();
            AvailabilityRule::binomial(RhoFn::Table { values })
        }
        _ => {
            let k = rng.random_range(2..5);
            let mut entries = BTreeMap::new();
            while entries.len() < k {
                entries.insert(
                    rng.random_range(1..=30u32.min(n_nodes - pop.max_n()).max(1)),
                    rng.random_range(0.05..1.0f64),
                );
            }
            AvailabilityRule::uncorrelated(
                Pmf::from_weights(entries.into_iter().collect()).unwrap(),
            )
        }
    }
}

pub fn random_triple(rng: &mut impl Rng, n_nodes: u32) -> Triple {
    let rate = random_rate(rng);
    let pop = random_popularity(rng);
    let rule = random_rule(rng, &pop, n_nodes);
    let label = format!("rate={rate:?} pop={:?} rule kind={rule:?}", pop.family());
    Triple {
        rate,
        pop,
        rule,
        label,
    }
}

/// Pooled results over independent scenario builds. Replications of a fixed
/// scenario share its rate matrix and content assignments, so honest
/// standard errors of pooled estimates live at the scenario level.
pub struct PooledStatic {
    /// Delivered delays, grouped per scenario.
    pub per_scenario: Vec<Vec<f64>>,
    /// Censored records per scenario.
    pub censored: Vec<u64>,
}

impl PooledStatic {
    pub fn records(&self) -> u64 {
        self.delays_count() + self.censored.iter().sum::<u64>()
    }

    pub fn delays_count(&self) -> u64 {
        self.per_scenario.iter().map(|v| v.len() as u64).sum()
    }

    pub fn censored_total(&self) -> u64 {
        self.censored.iter().sum()
    }

    /// Overall mean of the delivered delays and its scenario-level SE.
    pub fn mean_delay(&self) -> (f64, f64) {
        let mut overall = RunningMoments::default();
        let mut across = RunningMoments::default();
        for group in &self.per_scenario {
            let mut m = RunningMoments::default();
            for &d in group {
                overall.push(d);
                m.push(d);
            }
            if m.count() > 0 {
                across.push(m.mean());
            }
        }
        (overall.mean(), across.std_error())
    }

    /// Empirical P{delay <= ttl} (censored records count as misses) and its
    /// scenario-level SE. Only valid for ttl at or below the horizon.
    pub fn access_probability(&self, ttl: f64) -> (f64, f64) {
        let mut hits_total = 0u64;
        let mut across = RunningMoments::default();
        for (group, &cens) in self.per_scenario.iter().zip(&self.censored) {
            let hits = group.iter().filter(|&&d| d <= ttl).count() as u64;
            hits_total += hits;
            let n = group.len() as u64 + cens;
            if n > 0 {
                across.push(hits as f64 / n as f64);
            }
        }
        (
            hits_total as f64 / self.records() as f64,
            across.std_error(),
        )
    }

    /// The q-quantile of the delivered delays.
    pub fn delay_quantile(&self, q: f64) -> f64 {
        let mut sorted: Vec<f64> = self.per_scenario.iter().flatten().copied().collect();
        sorted.sort_by(f64::total_cmp);
        sorted[((sorted.len() - 1) as f64 * q).round() as usize]
    }
}

/// Build `scenarios` independent worlds from `spec` + `rule` and pool the
/// static-simulation delays.
pub fn pooled_static(
    spec: &oppnet_core::sim::BuildSpec<'_>,
    rule: &AvailabilityRule,
    scenarios: u32,
    reps_per: u32,
    horizon: f64,
    seed: u64,
) -> PooledStatic {
    pooled_runs(scenarios, |s| {
        use oppnet_core::rng::derive_seed;
        use oppnet_core::sim::{build_scenario, simulate_static};
        let scn = build_scenario(spec, rule, derive_seed(seed, 0x5345_454e, u64::from(s)))
            .expect("scenario build");
        simulate_static(
            &scn,
            reps_per,
            horizon,
            derive_seed(seed, 0x53_494d, u64::from(s)),
        )
        .expect("simulate")
    })
}

/// Pool any record-producing closure over independent scenario indices.
pub fn pooled_runs(scenarios: u32, mut run: impl FnMut(u32) -> Vec<DeliveryRecord>) -> PooledStatic {
    let mut per_scenario = Vec::with_capacity(scenarios as usize);
    let mut censored = Vec::with_capacity(scenarios as usize);
    for s in 0..scenarios {
        let records = run(s);
        let mut group = Vec::with_capacity(records.len());
        let mut cens = 0u64;
        for r in &records {
            match r.delay() {
                Some(d) => group.push(d),
                None => cens += 1,
            }
        }
        per_scenario.push(group);
        censored.push(cens);
    }
    PooledStatic {
        per_scenario,
        censored,
    }
}

/// Group flat records into per-cluster pools by an arbitrary key (e.g. the
/// replication index for runs that manage their own replications).
pub fn group_records(
    records: &[DeliveryRecord],
    key: impl Fn(&DeliveryRecord) -> u32,
) -> PooledStatic {
    let mut groups: std::collections::BTreeMap<u32, (Vec<f64>, u64)> = Default::default();
    for r in records {
        let entry = groups.entry(key(r)).or_default();
        match r.delay() {
            Some(d) => entry.0.push(d),
            None => entry.1 += 1,
        }
    }
    let mut per_scenario = Vec::with_capacity(groups.len());
    let mut censored = Vec::with_capacity(groups.len());
    for (_, (delays, cens)) in groups {
        per_scenario.push(delays);
        censored.push(cens);
    }
    PooledStatic {
        per_scenario,
        censored,
    }
}

/// Sample mean and standard error of the delivered delays.
pub fn delay_summary(records: &[DeliveryRecord]) -> (f64, f64, f64) {
    let mut acc = RunningMoments::default();
    let mut censored = 0u64;
    for r in records {
        match r.delay() {
            Some(d) => acc.push(d),
            None => censored += 1,
        }
    }
    (
        acc.mean(),
        acc.std_error(),
        censored as f64 / records.len() as f64,
    )
}
