//! Subcommand implementations: analyze, simulate, validate, optimize,
//! offload-sim, ingest.

use crate::config::Resolved;
use crate::report::{scenario_hash, PlotRow, Reporter, ResultRecord};
use crate::trace::ingest_trace;
use anyhow::{bail, Context, Result};
use oppnet_core::analytic::{
    access_probability_bound, access_probability_exact, closed_form_metrics,
    expected_delay_bound, expected_delay_exact, multihop_delay, multihop_delay_cooperation,
    multihop_delay_harmonic, multihop_delay_limited, pareto_metrics, AggregateRateLaw, Metric,
    DEFAULT_MC_POOL,
};
use oppnet_core::models::{ContactLaw, PopularityFamily, RateDist, RateModel, RhoFn};
use oppnet_core::numerics::Z95;
use oppnet_core::offload::{
    baseline_allocation, qos_allocation, run_popularity_blind, sqrt_allocation, AllocationPolicy,
    BlindInputs, PolicyKind,
};
use oppnet_core::rng::derive_seed;
use oppnet_core::sim::{
    build_scenario, build_scenario_with_counts, estimate_metrics, replay_trace, simulate_multihop,
    simulate_static, simulate_temporal, BuildSpec, DeliveryRecord, MeanDelay, MetricsReport,
    PairWeights, Protocol, SecondWindow,
};

pub struct RunContext {
    pub resolved: Resolved,
    pub reporter: Reporter,
    pub hash: String,
}

impl RunContext {
    pub fn new(resolved: Resolved, reporter: Reporter) -> RunContext {
        let hash = scenario_hash(&resolved.config);
        RunContext {
            resolved,
            reporter,
            hash,
        }
    }

    fn spec(&self) -> BuildSpec<'_> {
        BuildSpec {
            rate: &self.resolved.rate,
            popularity: &self.resolved.popularity,
            n_nodes: self.resolved.config.nodes,
            n_contents: self.resolved.config.contents,
            selection: self.resolved.selection,
            protocol: self.resolved.protocol,
        }
    }

    fn law(&self) -> AggregateRateLaw {
        AggregateRateLaw::for_rates(
            self.resolved.rate.pair_weight_dist(),
            DEFAULT_MC_POOL,
            derive_seed(self.resolved.config.seed, 0x4d43, 0),
        )
    }

    /// Censoring horizon: explicit, or 50× the mean-statistics delay bound.
    fn horizon(&self) -> Result<f64> {
        if let Some(h) = self.resolved.config.horizon {
            return Ok(h);
        }
        let mu = self.resolved.rate.mean_rate();
        let bound = expected_delay_bound(&self.resolved.popularity, &self.resolved.availability, mu)?;
        match bound.value() {
            Some(b) if b > 0.0 => Ok(50.0 * b),
            _ => bail!(
                "cannot derive a censoring horizon (delay bound is infinite); set `horizon` explicitly"
            ),
        }
    }
}

fn push_metric(
    records: &mut Vec<ResultRecord>,
    hash: &str,
    name: &str,
    metric: Metric,
) {
    match metric {
        Metric::Finite(e) => {
            let mut rec = ResultRecord::plain(name, e.value, hash);
            if e.se > 0.0 {
                rec = rec.with_ci(e.value - Z95 * e.se, e.value + Z95 * e.se);
            }
            records.push(rec);
            println!("  {name:<42} {:.6}", e.value);
        }
        Metric::Infinite => {
            println!("  {name:<42} infinite (not written to results.jsonl)");
        }
    }
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------
pub fn analyze(ctx: &RunContext) -> Result<Vec<ResultRecord>> {
    let r = &ctx.resolved;
    let mut out = Vec::new();
    let mu = r.rate.mean_rate();
    println!("analyze (scenario {})", ctx.hash);

    match r.rate.contact_law() {
        ContactLaw::Exponential => {
            let law = ctx.law();
            push_metric(
                &mut out,
                &ctx.hash,
                "expected_delay_exact",
                expected_delay_exact(&r.popularity, &r.availability, &law)?,
            );
            push_metric(
                &mut out,
                &ctx.hash,
                "expected_delay_bound",
                expected_delay_bound(&r.popularity, &r.availability, mu)?,
            );
            for &ttl in &r.config.ttl {
                let exact = access_probability_exact(&r.popularity, &r.availability, &law, ttl)?;
                push_metric(
                    &mut out,
                    &ctx.hash,
                    &format!("access_probability_exact@ttl={ttl}"),
                    Metric::Finite(exact),
                );
                let bound = access_probability_bound(&r.popularity, &r.availability, mu, ttl)?;
                push_metric(
                    &mut out,
                    &ctx.hash,
                    &format!("access_probability_bound@ttl={ttl}"),
                    Metric::exact(bound),
                );
            }
            if let Protocol::MultiHop { cooperation, limit } = r.protocol {
                let base = multihop_delay(&r.popularity, &r.availability, mu)?;
                push_metric(&mut out, &ctx.hash, "multihop_delay", base);
                if cooperation < 1.0 && cooperation > 0.0 {
                    let coop =
                        multihop_delay_cooperation(&r.popularity, &r.availability, mu, cooperation)?;
                    push_metric(&mut out, &ctx.hash, "multihop_delay_cooperation", coop);
                }
                if let Some(l) = limit {
                    let lim = multihop_delay_limited(&r.popularity, &r.availability, mu, l)?;
                    if lim.clamped {
                        println!("  note: (n - L) clamped at 0 on part of the support");
                    }
                    push_metric(&mut out, &ctx.hash, "multihop_delay_limited", lim.value);
                }
                let harmonic = multihop_delay_harmonic(&r.popularity, &r.availability, mu)?;
                push_metric(&mut out, &ctx.hash, "multihop_delay_harmonic_oracle", harmonic);
            }
            analyze_closed_forms(ctx, &mut out)?;
        }
        ContactLaw::ParetoRenewal { t0 } => {
            let shapes = r.rate.pair_weight_dist();
            let ttls: Vec<f64> = if r.config.ttl.is_empty() {
                vec![t0]
            } else {
                r.config.ttl.clone()
            };
            for (i, &ttl) in ttls.iter().enumerate() {
                let m = pareto_metrics(
                    shapes,
                    t0,
                    &r.popularity,
                    &r.availability,
                    ttl,
                    DEFAULT_MC_POOL,
                    derive_seed(r.config.seed, 0x70, i as u64),
                )?;
                if i == 0 {
                    push_metric(&mut out, &ctx.hash, "pareto_delay_exact", m.delay);
                    push_metric(&mut out, &ctx.hash, "pareto_delay_bound", m.delay_bound);
                }
                push_metric(
                    &mut out,
                    &ctx.hash,
                    &format!("pareto_access_exact@ttl={ttl}"),
                    Metric::Finite(m.probability),
                );
                push_metric(
                    &mut out,
                    &ctx.hash,
                    &format!("pareto_access_bound@ttl={ttl}"),
                    Metric::exact(m.probability_bound),
                );
            }
        }
    }
    ctx.reporter.write_results(&out)?;
    Ok(out)
}

/// When the configuration matches the closed-form case study (Gamma rates,
/// bounded Pareto popularity with shape 2, ρ = c·n or c·ln n), emit the
/// closed forms and their deltas against the generic discrete path.
fn analyze_closed_forms(ctx: &RunContext, out: &mut Vec<ResultRecord>) -> Result<()> {
    let r = &ctx.resolved;
    let RateModel::Rates {
        dist: RateDist::Gamma { mean, cv },
    } = &r.rate
    else {
        return Ok(());
    };
    let PopularityFamily::BoundedPareto { alpha, n_min, .. } = *r.popularity.family() else {
        return Ok(());
    };
    if (alpha - 2.0).abs() > 1e-9 || *cv == 0.0 {
        return Ok(());
    }
    let ttl = r.config.ttl.first().copied().unwrap_or(1.0);
    let law = ctx.law();
    match r.availability.clone() {
        oppnet_core::models::AvailabilityRule::Deterministic { rho: RhoFn::Linear { c } } => {
            let t2 = closed_form_metrics(c, f64::from(n_min), *mean, *cv, ttl.max(1e-6))?;
            let generic = expected_delay_exact(&r.popularity, &r.availability, &law)?
                .value()
                .unwrap_or(f64::NAN);
            out.push(
                ResultRecord::plain("closed_form_delay", t2.delay, &ctx.hash)
                    .with_counterpart(generic),
            );
            println!(
                "  {:<42} {:.6} (generic discrete path {:.6}, delta {:+.2}%)",
                "closed_form_delay",
                t2.delay,
                generic,
                (generic - t2.delay) / t2.delay * 100.0
            );
        }
        oppnet_core::models::AvailabilityRule::Deterministic { rho: RhoFn::Log { c } } => {
            let t2 = closed_form_metrics(c, f64::from(n_min), *mean, *cv, ttl)?;
            let generic =
                access_probability_exact(&r.popularity, &r.availability, &law, ttl)?.value;
            out.push(
                ResultRecord::plain("closed_form_access", t2.probability, &ctx.hash)
                    .with_counterpart(generic),
            );
            println!(
                "  {:<42} {:.6} (generic discrete path {:.6}, delta {:+.3}%)",
                "closed_form_access",
                t2.probability,
                generic,
                (generic - t2.probability) / t2.probability * 100.0
            );
        }
        _ => {}
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

/// Pool records over the configured number of independently built scenarios.
fn run_pooled(ctx: &RunContext) -> Result<Vec<DeliveryRecord>> {
    let r = &ctx.resolved;
    let horizon = ctx.horizon()?;
    let mut all = Vec::new();
    for s in 0..r.config.scenarios {
        let build_seed = derive_seed(r.config.seed, 0x100, u64::from(s));
        let sim_seed = derive_seed(r.config.seed, 0x200, u64::from(s));
        let mut scn = build_scenario(&ctx.spec(), &r.availability, build_seed)?;
        let records = match (&r.windows, r.protocol) {
            (Some((dist, window)), Protocol::Static) => {
                scn.second_window = Some(SecondWindow {
                    weights: PairWeights::sampled(
                        dist.clone(),
                        derive_seed(r.config.seed, 0x300, u64::from(s)),
                    ),
                    window: *window,
                });
                simulate_temporal(&scn, r.config.replications, horizon, sim_seed)?
            }
            (None, Protocol::Static) => {
                simulate_static(&scn, r.config.replications, horizon, sim_seed)?
            }
            (_, Protocol::MultiHop { .. }) => {
                simulate_multihop(&scn, r.config.replications, horizon, sim_seed)?.records
            }
        };
        all.extend(records);
    }
    Ok(all)
}

fn report_metrics(
    ctx: &RunContext,
    report: &MetricsReport,
    counter_delay: Option<f64>,
    counter_access: &[Option<f64>],
) -> Result<Vec<ResultRecord>> {
    let mut out = Vec::new();
    println!(
        "simulated {} records over {} replications (censored fraction {:.4})",
        report.records, report.replications, report.censored_fraction
    );
    match report.mean_delay {
        MeanDelay::Estimated {
            mean,
            ci_half,
            uncensored,
        } => {
            let mut rec = ResultRecord::plain("mean_delay_sim", mean, &ctx.hash)
                .with_ci(mean - ci_half, mean + ci_half);
            if let Some(c) = counter_delay {
                rec = rec.with_counterpart(c);
            }
            out.push(rec);
            println!("  mean_delay_sim                     {mean:.6} ± {ci_half:.6} ({uncensored} uncensored)");
        }
        MeanDelay::AtLeast { horizon } => {
            println!("  mean_delay_sim                     ≥ {horizon} (all records censored)");
        }
    }
    for (i, a) in report.access.iter().enumerate() {
        let mut rec = ResultRecord::plain(
            format!("access_probability_sim@ttl={}", a.ttl),
            a.probability,
            &ctx.hash,
        )
        .with_ci(a.probability - a.ci_half, a.probability + a.ci_half);
        if let Some(Some(c)) = counter_access.get(i) {
            rec = rec.with_counterpart(*c);
        }
        out.push(rec);
        println!(
            "  access_probability_sim@ttl={:<7} {:.6} ± {:.6}",
            a.ttl, a.probability, a.ci_half
        );
    }
    out.push(ResultRecord::plain(
        "censored_fraction",
        report.censored_fraction,
        &ctx.hash,
    ));

    let rows: Vec<PlotRow> = report
        .by_popularity
        .iter()
        .filter_map(|c| {
            c.mean_delay.map(|m| PlotRow {
                x: f64::from(c.popularity),
                series: "mean_delay".into(),
                y: m,
                y_err: 0.0,
            })
        })
        .collect();
    if !rows.is_empty() {
        ctx.reporter.write_plot("delay_by_popularity", &rows)?;
    }
    ctx.reporter.write_results(&out)?;
    Ok(out)
}

pub fn simulate(ctx: &RunContext, trace: Option<&str>) -> Result<Vec<ResultRecord>> {
    let r = &ctx.resolved;
    println!("simulate (scenario {})", ctx.hash);
    let records = match trace {
        Some(text) => {
            // Replay deliveries over a recorded contact trace: contents are
            // drawn from the configured popularity/availability models over
            // the trace's node universe.
            let (trace, _fitted, summary) = ingest_trace(text)?;
            println!(
                "  trace: {} contacts, {} nodes, duration {:.3}",
                summary.contacts, trace.node_count(), trace.duration
            );
            if u64::from(r.popularity.max_n()) > u64::from(trace.node_count()) {
                bail!(
                    "popularity support up to {} exceeds the trace's {} nodes",
                    r.popularity.max_n(),
                    trace.node_count()
                );
            }
            let spec = BuildSpec {
                n_nodes: trace.node_count(),
                ..ctx.spec()
            };
            let scn = build_scenario(&spec, &r.availability, r.config.seed)?;
            replay_trace(
                &trace.to_events(),
                &scn.contents,
                r.config.replications,
                derive_seed(r.config.seed, 0x400, 0),
            )?
        }
        None => run_pooled(ctx)?,
    };

    let report = estimate_metrics(&records, &r.config.ttl)?;
    // analytic counterparts, when the exponential predictors apply
    let (counter_delay, counter_access) = analytic_counterparts(ctx)?;
    report_metrics(ctx, &report, counter_delay, &counter_access)
}

fn analytic_counterparts(ctx: &RunContext) -> Result<(Option<f64>, Vec<Option<f64>>)> {
    let r = &ctx.resolved;
    match (r.rate.contact_law(), r.protocol, &r.windows) {
        (ContactLaw::Exponential, Protocol::Static, None) => {
            let law = ctx.law();
            let delay = expected_delay_exact(&r.popularity, &r.availability, &law)?.value();
            let access = r
                .config
                .ttl
                .iter()
                .map(|&t| {
                    access_probability_exact(&r.popularity, &r.availability, &law, t)
                        .map(|e| Some(e.value))
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Ok((delay, access))
        }
        (ContactLaw::Exponential, Protocol::MultiHop { .. }, None) => {
            let mu = r.rate.mean_rate();
            let delay = multihop_delay(&r.popularity, &r.availability, mu)?.value();
            Ok((delay, vec![None; r.config.ttl.len()]))
        }
        (ContactLaw::ParetoRenewal { t0 }, Protocol::Static, None) => {
            let shapes = r.rate.pair_weight_dist();
            let mut access = Vec::new();
            let mut delay = None;
            for (i, &ttl) in r.config.ttl.iter().enumerate() {
                let m = pareto_metrics(
                    shapes,
                    t0,
                    &r.popularity,
                    &r.availability,
                    ttl,
                    DEFAULT_MC_POOL,
                    derive_seed(r.config.seed, 0x70, i as u64),
                )?;
                delay = m.delay.value();
                access.push(Some(m.probability.value));
            }
            if r.config.ttl.is_empty() {
                let m = pareto_metrics(
                    shapes,
                    t0,
                    &r.popularity,
                    &r.availability,
                    t0,
                    DEFAULT_MC_POOL,
                    derive_seed(r.config.seed, 0x70, 0),
                )?;
                delay = m.delay.value();
            }
            Ok((delay, access))
        }
        _ => Ok((None, vec![None; r.config.ttl.len()])),
    }
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------
pub fn validate(ctx: &RunContext, sweep_nodes: Option<Vec<u32>>) -> Result<Vec<ResultRecord>> {
    let r = &ctx.resolved;
    let nodes_list = sweep_nodes.unwrap_or_else(|| vec![r.config.nodes]);
    println!("validate (scenario {})", ctx.hash);
    let (counter_delay, counter_access) = analytic_counterparts(ctx)?;

    let mut out = Vec::new();
    let mut plot = Vec::new();
    println!(
        "  {:>7} {:>14} {:>14} {:>10}",
        "N", "sim", "analytic", "rel.err"
    );
    for (i, &n_nodes) in nodes_list.iter().enumerate() {
        let mut sub = ctx.resolved.clone();
        sub.config.nodes = n_nodes;
        sub.config.seed = derive_seed(r.config.seed, 0x500, i as u64);
        let sub_ctx = RunContext {
            hash: ctx.hash.clone(),
            resolved: sub,
            reporter: Reporter::new(ctx.reporter.dir())?,
        };
        let records = run_pooled(&sub_ctx)?;
        let report = estimate_metrics(&records, &r.config.ttl)?;

        if let (Some(pred), MeanDelay::Estimated { mean, .. }) =
            (counter_delay, report.mean_delay)
        {
            let rel = (mean - pred).abs() / pred;
            out.push(
                ResultRecord::plain(
                    format!("validate_delay_rel_error@N={n_nodes}"),
                    rel,
                    &ctx.hash,
                )
                .with_counterpart(pred),
            );
            plot.push(PlotRow {
                x: f64::from(n_nodes),
                series: "delay_rel_error".into(),
                y: rel,
                y_err: 0.0,
            });
            println!("  {n_nodes:>7} {mean:>14.6} {pred:>14.6} {:>9.2}%", rel * 100.0);
        }
        for (a, pred) in report.access.iter().zip(&counter_access) {
            if let Some(pred) = pred {
                let rel = (a.probability - pred).abs() / pred;
                out.push(
                    ResultRecord::plain(
                        format!("validate_access_rel_error@N={n_nodes},ttl={}", a.ttl),
                        rel,
                        &ctx.hash,
                    )
                    .with_counterpart(*pred),
                );
                plot.push(PlotRow {
                    x: f64::from(n_nodes),
                    series: format!("access_rel_error@ttl={}", a.ttl),
                    y: rel,
                    y_err: 0.0,
                });
                println!(
                    "  {n_nodes:>7} {:>14.6} {pred:>14.6} {:>9.2}%",
                    a.probability,
                    rel * 100.0
                );
            }
        }
    }
    ctx.reporter.write_plot("validate_rel_error", &plot)?;
    ctx.reporter.write_results(&out)?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------
fn named_policy(ctx: &RunContext, name: &str) -> Result<AllocationPolicy> {
    let r = &ctx.resolved;
    let budget = r.config.offload.budget;
    let pop = &r.popularity;
    Ok(match name {
        "qos" => {
            let ttl = *r
                .config
                .ttl
                .first()
                .context("the qos policy needs a ttl; set `ttl = [..]`")?;
            qos_allocation(pop, r.rate.mean_rate(), ttl, budget)?.policy
        }
        "sqrt" => sqrt_allocation(pop, budget),
        "log" => baseline_allocation(PolicyKind::Log, pop, budget)?,
        "uniform" => baseline_allocation(PolicyKind::Uniform, pop, budget)?,
        "power" => baseline_allocation(
            PolicyKind::PowerLaw {
                k: r.config.offload.k.unwrap_or(0.5),
            },
            pop,
            budget,
        )?,
        "random" => baseline_allocation(PolicyKind::Random, pop, budget)?,
        other => bail!("unknown policy \"{other}\" (qos, sqrt, log, uniform, power, random)"),
    })
}

pub fn optimize(ctx: &RunContext) -> Result<Vec<ResultRecord>> {
    let r = &ctx.resolved;
    let name = r.config.offload.policy.clone();
    println!("optimize: {name} allocation (scenario {})", ctx.hash);
    let policy = named_policy(ctx, &name)?;
    if policy.table().is_empty() {
        bail!("the random policy has no deterministic table to optimize");
    }
    let mut out = vec![ResultRecord::plain(
        format!("allocation_mean_copies[{name}]"),
        policy.mean_under(&r.popularity),
        &ctx.hash,
    )
    .with_counterpart(r.config.offload.budget)];
    if name == "qos" {
        let ttl = r.config.ttl[0];
        let sol = qos_allocation(&r.popularity, r.rate.mean_rate(), ttl, r.config.offload.budget)?;
        out.push(ResultRecord::plain("qos_multiplier", sol.multiplier, &ctx.hash));
        out.push(ResultRecord::plain("qos_objective", sol.objective, &ctx.hash));
        println!(
            "  multiplier λ0 = {:.6}, objective = {:.6}, active classes = {}",
            sol.multiplier,
            sol.objective,
            sol.active.len()
        );
    }
    println!("  n -> rho(n):");
    for &(n, rho) in policy.table() {
        println!("  {n:>6} {rho:>10.4}");
    }
    ctx.reporter.write_table(
        &format!("allocation_{name}"),
        "n,rho",
        policy.table().iter().map(|(n, rho)| format!("{n},{rho}")),
    )?;
    ctx.reporter.write_results(&out)?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// offload-sim
// ---------------------------------------------------------------------------
pub fn offload_sim(ctx: &RunContext) -> Result<Vec<ResultRecord>> {
    let r = &ctx.resolved;
    if !matches!(r.protocol, Protocol::Static) {
        bail!("offload-sim compares static-delivery policies");
    }
    let ttl = r.config.ttl.first().copied();
    let horizon = match ttl {
        Some(t) => ctx.horizon()?.max(t),
        None => ctx.horizon()?,
    };
    println!("offload-sim (scenario {})", ctx.hash);

    let mut out = Vec::new();
    let mut plot = Vec::new();
    for name in &r.config.offload.policies {
        let records = if name == "blind" {
            let inputs = BlindInputs {
                rate: &r.rate,
                popularity: &r.popularity,
                n_nodes: r.config.nodes,
                n_contents: r.config.contents,
            };
            run_popularity_blind(
                &inputs,
                r.config.offload.budget,
                r.config.offload.update_every,
                r.config.scenarios * r.config.replications,
                horizon,
                derive_seed(r.config.seed, 0x600, 0),
            )?
            .records
        } else {
            let policy = named_policy(ctx, name)?;
            let mut all = Vec::new();
            for s in 0..r.config.scenarios {
                let scn = build_scenario_with_counts(
                    &ctx.spec(),
                    |ns| policy.realize(ns, derive_seed(r.config.seed, 0x700, u64::from(s))),
                    derive_seed(r.config.seed, 0x100, u64::from(s)),
                )?;
                all.extend(simulate_static(
                    &scn,
                    r.config.replications,
                    horizon,
                    derive_seed(r.config.seed, 0x800, u64::from(s)),
                )?);
            }
            all
        };
        let report = estimate_metrics(&records, ttl.as_slice())?;
        if let MeanDelay::Estimated { mean, ci_half, .. } = report.mean_delay {
            out.push(
                ResultRecord::plain(format!("mean_delay[{name}]"), mean, &ctx.hash)
                    .with_ci(mean - ci_half, mean + ci_half),
            );
            println!("  {name:<10} mean delay {mean:.5} ± {ci_half:.5}");
        }
        if let Some(a) = report.access.first() {
            out.push(
                ResultRecord::plain(format!("r_off[{name}]"), a.probability, &ctx.hash)
                    .with_ci(a.probability - a.ci_half, a.probability + a.ci_half),
            );
            plot.push(PlotRow {
                x: a.ttl,
                series: name.clone(),
                y: a.probability,
                y_err: a.ci_half,
            });
            println!(
                "  {name:<10} R_off@ttl={:<8} {:.4} ± {:.4}",
                a.ttl, a.probability, a.ci_half
            );
        }
    }
    if !plot.is_empty() {
        ctx.reporter.write_plot("offloading_ratio", &plot)?;
    }
    ctx.reporter.write_results(&out)?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// ingest
// ---------------------------------------------------------------------------
pub fn ingest(ctx: &RunContext, text: &str) -> Result<Vec<ResultRecord>> {
    let (trace, model, summary) = ingest_trace(text)?;
    println!(
        "ingested {} contacts between {} nodes over duration {:.4}",
        summary.contacts,
        summary.nodes,
        trace.duration
    );
    println!(
        "  {} pairs with ≥1 contact: fitted μ̂_λ = {:.6}, CV̂_λ = {:.4}",
        summary.pairs_with_contact, summary.mean_rate, summary.rate_cv
    );
    let out = vec![
        ResultRecord::plain("trace_contacts", summary.contacts as f64, &ctx.hash),
        ResultRecord::plain("trace_nodes", f64::from(summary.nodes), &ctx.hash),
        ResultRecord::plain("trace_duration", trace.duration, &ctx.hash),
        ResultRecord::plain(
            "trace_pairs_with_contact",
            summary.pairs_with_contact as f64,
            &ctx.hash,
        ),
        ResultRecord::plain("fitted_mean_rate", summary.mean_rate, &ctx.hash),
        ResultRecord::plain("fitted_rate_cv", summary.rate_cv, &ctx.hash),
    ];
    if let RateModel::Rates {
        dist: RateDist::Empirical { values },
    } = &model
    {
        ctx.reporter.write_table(
            "fitted_pair_rates",
            "rate",
            values.iter().map(|v| format!("{v}")),
        )?;
    }
    ctx.reporter.write_results(&out)?;
    Ok(out)
}
