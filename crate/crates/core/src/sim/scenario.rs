//! Materialized network instances: nodes, pairwise contact weights, and
//! per-content requester/holder assignments.

use crate::error::SimError;
use crate::models::{AvailabilityRule, ContactLaw, PopularityModel, RateDist, RateModel};
use crate::rng::{derive_rng, pair_key, salt};
use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub type NodeId = u32;

/// One content item: who wants it and who holds it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContentSpec {
    pub id: u32,
    pub requesters: Vec<NodeId>,
    pub holders: Vec<NodeId>,
}

impl ContentSpec {
    /// N_p = |C_p|.
    pub fn popularity(&self) -> u32 {
        self.requesters.len() as u32
    }

    /// N_a = |C_a|.
    pub fn availability(&self) -> u32 {
        self.holders.len() as u32
    }
}

/// Pairwise symmetric weights λ_ij (or α_ij under the Pareto law).
///
/// The implicit form derives each entry from (seed, pair index) on demand,
/// which keeps 10^4-node networks free: entries are i.i.d. samples of the
/// weight distribution and byte-reproducible for a fixed seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "storage", rename_all = "kebab-case")]
pub enum PairWeights {
    Implicit { dist: RateDist, seed: u64 },
    /// Explicit upper-triangular matrix, row-major: entry (i, j), i < j, at
    /// index i·(2n−i−1)/2 + (j−i−1).
    Dense { n_nodes: u32, upper: Vec<f64> },
}

impl PairWeights {
    pub fn sampled(dist: RateDist, seed: u64) -> Self {
        PairWeights::Implicit { dist, seed }
    }

    pub fn dense_from(n_nodes: u32, mut entry: impl FnMut(u32, u32) -> f64) -> Self {
        let n = n_nodes as usize;
        let mut upper = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n_nodes {
            for j in (i + 1)..n_nodes {
                upper.push(entry(i, j));
            }
        }
        PairWeights::Dense { n_nodes, upper }
    }

    /// λ_ij (symmetric, i ≠ j).
    pub fn get(&self, n_nodes: u32, a: NodeId, b: NodeId) -> f64 {
        debug_assert_ne!(a, b);
        match self {
            PairWeights::Implicit { dist, seed } => {
                let mut rng = derive_rng(*seed, salt::RATE_MATRIX, pair_key(n_nodes, a, b));
                dist.sampler().sample(&mut rng)
            }
            PairWeights::Dense { n_nodes: n, upper } => {
                debug_assert_eq!(*n, n_nodes);
                let (i, j) = if a < b { (a, b) } else { (b, a) };
                let (n, i, j) = (u64::from(*n), u64::from(i), u64::from(j));
                upper[(i * (2 * n - i - 1) / 2 + (j - i - 1)) as usize]
            }
        }
    }
}

/// Delivery protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "protocol", rename_all = "kebab-case")]
pub enum Protocol {
    /// Holder sets fixed for the whole delivery.
    Static,
    /// Served requesters join the holder set with probability `cooperation`,
    /// up to `limit` new holders per content (`None` = unlimited).
    MultiHop {
        cooperation: f64,
        limit: Option<u32>,
    },
}

impl Protocol {
    pub fn name(&self) -> &'static str {
        match self {
            Protocol::Static => "static",
            Protocol::MultiHop { .. } => "multi-hop",
        }
    }
}

/// Alternate rate matrix for the two-window temporal variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecondWindow {
    pub weights: PairWeights,
    /// Length of each alternating window (both windows share it).
    pub window: f64,
}

/// A fully materialized network instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub n_nodes: u32,
    pub weights: PairWeights,
    /// Present only for the piecewise-constant temporal variant.
    pub second_window: Option<SecondWindow>,
    pub contents: Vec<ContentSpec>,
    pub protocol: Protocol,
    pub contact_law: ContactLaw,
}

impl Scenario {
    /// λ_ij under the first (or only) window.
    pub fn weight(&self, a: NodeId, b: NodeId) -> f64 {
        self.weights.get(self.n_nodes, a, b)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.n_nodes < 2 {
            return Err(SimError::InvalidScenario("need at least 2 nodes".into()));
        }
        if let Protocol::MultiHop { cooperation, .. } = self.protocol {
            if !(0.0..=1.0).contains(&cooperation) {
                return Err(SimError::InvalidScenario(format!(
                    "cooperation probability must be in [0, 1], got {cooperation}"
                )));
            }
            if !matches!(self.contact_law, ContactLaw::Exponential) {
                return Err(SimError::Unsupported(
                    "multi-hop requires exponential contacts".into(),
                ));
            }
        }
        if let Some(w) = &self.second_window {
            if !(w.window > 0.0) {
                return Err(SimError::InvalidScenario(
                    "window length must be > 0".into(),
                ));
            }
            if !matches!(self.contact_law, ContactLaw::Exponential) {
                return Err(SimError::Unsupported(
                    "temporal windows require exponential contacts".into(),
                ));
            }
        }
        for c in &self.contents {
            if c.requesters.is_empty() {
                return Err(SimError::InvalidScenario(format!(
                    "content {} has no requesters",
                    c.id
                )));
            }
            let mut seen = std::collections::HashSet::new();
            for &v in c.requesters.iter().chain(&c.holders) {
                if v >= self.n_nodes {
                    return Err(SimError::InvalidScenario(format!(
                        "content {}: node {v} out of range",
                        c.id
                    )));
                }
                if !seen.insert(v) {
                    return Err(SimError::InvalidScenario(format!(
                        "content {}: node {v} appears twice (requesters and holders must be disjoint)",
                        c.id
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Holder-placement mechanism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HolderSelection {
    UniformRandom,
    /// Each candidate i gets weight Π_{j∈C_p} λ_ij; holders are drawn
    /// without replacement proportionally to these weights, which realizes
    /// the π(λ) ≈ c·λ mobility-dependent allocation.
    WeightedByRatesToRequesters,
}

/// Everything needed to materialize a synthetic scenario except the
/// holder-count source (an [`AvailabilityRule`] or an allocation policy).
#[derive(Debug, Clone)]
pub struct BuildSpec<'a> {
    pub rate: &'a RateModel,
    pub popularity: &'a PopularityModel,
    pub n_nodes: u32,
    pub n_contents: u32,
    pub selection: HolderSelection,
    pub protocol: Protocol,
}

const PLACEMENT_RETRIES: u32 = 100;

/// Materialize a scenario: sample the rate matrix seed-implicitly, draw
/// (N_p, N_a) per content, and place disjoint requester/holder sets.
pub fn build_scenario(
    spec: &BuildSpec<'_>,
    availability: &AvailabilityRule,
    seed: u64,
) -> Result<Scenario, SimError> {
    spec.rate.validate()?;
    availability.validate(spec.popularity, spec.n_nodes)?;
    if spec.n_nodes < 2 || spec.n_contents < 1 {
        return Err(SimError::InvalidScenario(
            "need at least 2 nodes and 1 content".into(),
        ));
    }
    if u64::from(spec.popularity.max_n()) > u64::from(spec.n_nodes) {
        return Err(SimError::InvalidScenario(format!(
            "popularity support up to {} exceeds {} nodes",
            spec.popularity.max_n(),
            spec.n_nodes
        )));
    }

    let weights = PairWeights::sampled(
        spec.rate.pair_weight_dist().clone(),
        crate::rng::derive_seed(seed, salt::RATE_MATRIX, 0),
    );

    // Phase 1: popularity and holder-count draws.
    let mut counts = Vec::with_capacity(spec.n_contents as usize);
    for c in 0..spec.n_contents {
        let mut rng = derive_rng(seed, salt::CONTENT, u64::from(c));
        let mut attempt = 0;
        let (n, m) = loop {
            let n = spec.popularity.sample(&mut rng);
            let m = availability.sample(n, &mut rng);
            if u64::from(n) + u64::from(m) <= u64::from(spec.n_nodes) {
                break (n, m);
            }
            attempt += 1;
            if attempt >= PLACEMENT_RETRIES {
                return Err(SimError::PlacementRetriesExhausted {
                    nodes: spec.n_nodes,
                    attempts: PLACEMENT_RETRIES,
                });
            }
        };
        counts.push((n, m));
    }

    // Phase 2: node placement.
    let contents = place_contents(&counts, spec, &weights, seed)?;

    let scenario = Scenario {
        n_nodes: spec.n_nodes,
        weights,
        second_window: None,
        contents,
        protocol: spec.protocol,
        contact_law: spec.rate.contact_law(),
    };
    scenario.validate()?;
    Ok(scenario)
}

/// Materialize a scenario with externally chosen holder counts (one per
/// content) — the allocation-policy path. Popularities are still drawn from
/// the popularity model with the same streams as [`build_scenario`], so two
/// builds with equal seeds share contents and requester sets.
pub fn build_scenario_with_counts(
    spec: &BuildSpec<'_>,
    holder_counts: impl FnOnce(&[u32]) -> Vec<u32>,
    seed: u64,
) -> Result<Scenario, SimError> {
    spec.rate.validate()?;
    if u64::from(spec.popularity.max_n()) > u64::from(spec.n_nodes) {
        return Err(SimError::InvalidScenario(format!(
            "popularity support up to {} exceeds {} nodes",
            spec.popularity.max_n(),
            spec.n_nodes
        )));
    }
    let weights = PairWeights::sampled(
        spec.rate.pair_weight_dist().clone(),
        crate::rng::derive_seed(seed, salt::RATE_MATRIX, 0),
    );
    let ns: Vec<u32> = (0..spec.n_contents)
        .map(|c| {
            let mut rng = derive_rng(seed, salt::CONTENT, u64::from(c));
            spec.popularity.sample(&mut rng)
        })
        .collect();
    let ms = holder_counts(&ns);
    assert_eq!(ms.len(), ns.len(), "one holder count per content");
    let counts: Vec<(u32, u32)> = ns.into_iter().zip(ms).collect();
    for &(n, m) in &counts {
        if u64::from(n) + u64::from(m) > u64::from(spec.n_nodes) {
            return Err(SimError::InvalidScenario(format!(
                "allocated {m} holders for a content with {n} requesters in a {} node network",
                spec.n_nodes
            )));
        }
    }
    let contents = place_contents(&counts, spec, &weights, seed)?;
    let scenario = Scenario {
        n_nodes: spec.n_nodes,
        weights,
        second_window: None,
        contents,
        protocol: spec.protocol,
        contact_law: spec.rate.contact_law(),
    };
    scenario.validate()?;
    Ok(scenario)
}

fn place_contents(
    counts: &[(u32, u32)],
    spec: &BuildSpec<'_>,
    weights: &PairWeights,
    seed: u64,
) -> Result<Vec<ContentSpec>, SimError> {
    let mut contents = Vec::with_capacity(counts.len());
    for (c, &(n, m)) in counts.iter().enumerate() {
        // Placement stream is separate from the count stream so that
        // policy-driven builds share requester sets with rule-driven ones.
        let mut rng = derive_rng(seed, salt::CONTENT ^ 0xff, c as u64);
        let requesters: Vec<NodeId> = index::sample(&mut rng, spec.n_nodes as usize, n as usize)
            .into_iter()
            .map(|i| i as NodeId)
            .collect();
        let holders = match spec.selection {
            HolderSelection::UniformRandom => {
                sample_complement(&mut rng, spec.n_nodes, &requesters, m)
            }
            HolderSelection::WeightedByRatesToRequesters => weighted_holders(
                &mut rng,
                spec.n_nodes,
                &requesters,
                m,
                |i, j| weights.get(spec.n_nodes, i, j),
            ),
        };
        contents.push(ContentSpec {
            id: c as u32,
            requesters,
            holders,
        });
    }
    Ok(contents)
}

/// Uniform sample of `m` nodes outside `excluded`.
fn sample_complement(
    rng: &mut impl Rng,
    n_nodes: u32,
    excluded: &[NodeId],
    m: u32,
) -> Vec<NodeId> {
    let mut sorted = excluded.to_vec();
    sorted.sort_unstable();
    let free = n_nodes as usize - sorted.len();
    index::sample(rng, free, m as usize)
        .into_iter()
        .map(|slot| remap_skipping(slot as u32, &sorted))
        .collect()
}

/// The `slot`-th node id not present in the sorted exclusion list.
fn remap_skipping(slot: u32, sorted_excluded: &[NodeId]) -> NodeId {
    let mut id = slot;
    for &e in sorted_excluded {
        if id >= e {
            id += 1;
        } else {
            break;
        }
    }
    id
}

/// Weighted sampling without replacement with per-candidate weight
/// Π_j λ_ij (Efraimidis–Spirakis via Gumbel-perturbed log weights).
fn weighted_holders(
    rng: &mut impl Rng,
    n_nodes: u32,
    requesters: &[NodeId],
    m: u32,
    weight: impl Fn(NodeId, NodeId) -> f64,
) -> Vec<NodeId> {
    let requester_set: std::collections::HashSet<NodeId> = requesters.iter().copied().collect();
    let mut keys: Vec<(f64, NodeId)> = Vec::with_capacity(n_nodes as usize - requesters.len());
    for i in 0..n_nodes {
        if requester_set.contains(&i) {
            continue;
        }
        let log_w: f64 = requesters.iter().map(|&j| weight(i, j).ln()).sum();
        let u: f64 = rng.random();
        let gumbel = -(-u.ln()).ln();
        keys.push((log_w + gumbel, i));
    }
    let m = m as usize;
    if m >= keys.len() {
        return keys.into_iter().map(|(_, i)| i).collect();
    }
    keys.select_nth_unstable_by(m, |a, b| b.0.total_cmp(&a.0));
    let mut out: Vec<NodeId> = keys[..m].iter().map(|&(_, i)| i).collect();
    out.sort_unstable();
    out
}
