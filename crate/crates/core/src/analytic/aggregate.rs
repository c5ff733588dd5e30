//! The law of X = Σ λ_i, a sum of m i.i.d. pairwise weights: the delivery
//! rate seen by a requester with m holders (or the aggregate Pareto shape
//! A = Σ α_i under Pareto inter-contact times).
//!
//! Gamma and constant weight distributions admit closed forms (the m-fold
//! convolution of Gamma(k, θ) is Gamma(m·k, θ)); everything else is
//! evaluated on a seeded Monte Carlo pool of sums, with the standard error
//! reported alongside each expectation.

use crate::error::AnalyticError;
use crate::models::RateDist;
use crate::rng::{derive_rng, salt};

/// Default Monte Carlo pool size (sums per holder count).
pub const DEFAULT_MC_POOL: usize = 100_000;

/// A value with the standard error of its estimator (zero for closed forms).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub se: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, se: 0.0 }
    }
}

/// Result of an expectation that may diverge (e.g. E[1/X] with mass near 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    Finite(Estimate),
    Infinite,
}

impl Metric {
    pub fn exact(value: f64) -> Self {
        Metric::Finite(Estimate::exact(value))
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Metric::Finite(e) => Some(e.value),
            Metric::Infinite => None,
        }
    }

    pub fn estimate(&self) -> Option<Estimate> {
        match self {
            Metric::Finite(e) => Some(*e),
            Metric::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Metric::Infinite)
    }

    /// `f` applied to the value, standard error scaled by |f'| implicitly
    /// through the caller; used for affine transforms only.
    pub fn scale(&self, factor: f64) -> Metric {
        match self {
            Metric::Finite(e) => Metric::Finite(Estimate {
                value: e.value * factor,
                se: e.se * factor.abs(),
            }),
            Metric::Infinite => Metric::Infinite,
        }
    }
}

/// Weighted accumulator over [`Metric`] terms. Any infinite term with
/// positive weight makes the total infinite. Standard errors add linearly:
/// the Monte Carlo pools share common random numbers across holder counts,
/// so quadrature combination would understate the error.
#[derive(Debug, Clone, Copy, Default)]
pub struct MetricSum {
    value: f64,
    se: f64,
    infinite: bool,
}

impl MetricSum {
    pub fn add(&mut self, weight: f64, term: &Metric) {
        if weight == 0.0 {
            return;
        }
        match term {
            Metric::Finite(e) => {
                self.value += weight * e.value;
                self.se += weight.abs() * e.se;
            }
            Metric::Infinite => self.infinite = true,
        }
    }

    pub fn add_exact(&mut self, weight: f64, value: f64) {
        self.value += weight * value;
    }

    pub fn finish(self) -> Metric {
        if self.infinite {
            Metric::Infinite
        } else {
            Metric::Finite(Estimate {
                value: self.value,
                se: self.se,
            })
        }
    }
}

/// The expectations of X needed by the predictors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SumFunctional {
    /// E[1/X] — per-request expected delay under exponential contacts.
    MeanInverse,
    /// E[e^{-X·t}] — survival beyond t under exponential contacts.
    Laplace(f64),
    /// E[1/(X - shift)] — Pareto residual mean needs E[1/(A-1)].
    MeanInverseShifted(f64),
    /// E[r^X] with 0 < r <= 1 — Pareto survival (t0/(t0+t))^A.
    Power(f64),
}

impl SumFunctional {
    fn eval(&self, x: f64) -> f64 {
        match *self {
            SumFunctional::MeanInverse => 1.0 / x,
            SumFunctional::Laplace(t) => (-x * t).exp(),
            SumFunctional::MeanInverseShifted(s) => 1.0 / (x - s),
            SumFunctional::Power(r) => r.powf(x),
        }
    }

    /// Value at an empty holder set (X = 0): delays diverge, survival is 1.
    fn at_zero(&self) -> Metric {
        match self {
            SumFunctional::MeanInverse | SumFunctional::MeanInverseShifted(_) => Metric::Infinite,
            SumFunctional::Laplace(_) | SumFunctional::Power(_) => Metric::exact(1.0),
        }
    }

    /// Divergence threshold: the functional is undefined when X can reach
    /// this value or below.
    fn pole(&self) -> Option<f64> {
        match *self {
            SumFunctional::MeanInverse => Some(0.0),
            SumFunctional::MeanInverseShifted(s) => Some(s),
            _ => None,
        }
    }
}

/// Law of the sum of m i.i.d. pairwise weights, conditioned on m.
#[derive(Debug, Clone)]
pub enum AggregateRateLaw {
    /// f_λ ~ Gamma(shape, scale): X|m ~ Gamma(m·shape, scale).
    GammaClosed { shape: f64, scale: f64 },
    /// Constant weights: X|m = m·unit exactly.
    Degenerate { unit: f64 },
    /// Seeded pool of sums; `pool` entries per holder count.
    MonteCarlo {
        dist: RateDist,
        pool: usize,
        seed: u64,
    },
}

impl AggregateRateLaw {
    /// Choose the evaluation route for a weight distribution: closed for
    /// Gamma and degenerate families, Monte Carlo otherwise.
    pub fn for_rates(dist: &RateDist, pool: usize, seed: u64) -> AggregateRateLaw {
        match dist {
            RateDist::Gamma { mean, cv } if *cv > 0.0 => AggregateRateLaw::GammaClosed {
                shape: 1.0 / (cv * cv),
                scale: mean * cv * cv,
            },
            RateDist::Gamma { mean, .. } => AggregateRateLaw::Degenerate { unit: *mean },
            RateDist::Constant { value } => AggregateRateLaw::Degenerate { unit: *value },
            RateDist::Uniform { min, max } if min == max => {
                AggregateRateLaw::Degenerate { unit: *min }
            }
            _ => AggregateRateLaw::MonteCarlo {
                dist: dist.clone(),
                pool: pool.max(1),
                seed,
            },
        }
    }

    pub fn is_closed(&self) -> bool {
        !matches!(self, AggregateRateLaw::MonteCarlo { .. })
    }

    /// E[X | m] = m·μ. Holder counts may be real on closed routes.
    pub fn conditional_mean(&self, m: f64) -> f64 {
        match self {
            AggregateRateLaw::GammaClosed { shape, scale } => m * shape * scale,
            AggregateRateLaw::Degenerate { unit } => m * unit,
            AggregateRateLaw::MonteCarlo { dist, .. } => m * dist.mean(),
        }
    }

    /// Closed-form E[f(X) | m] for real m; `None` on the Monte Carlo route.
    pub fn expect_closed(&self, m: f64, f: SumFunctional) -> Option<Metric> {
        if m == 0.0 {
            return Some(f.at_zero());
        }
        match self {
            AggregateRateLaw::GammaClosed { shape, scale } => {
                let k = m * shape;
                Some(match f {
                    SumFunctional::MeanInverse => {
                        // E[1/X] = 1/(θ(mk−1)) for mk > 1, divergent otherwise
                        if k > 1.0 {
                            Metric::exact(1.0 / (scale * (k - 1.0)))
                        } else {
                            Metric::Infinite
                        }
                    }
                    SumFunctional::Laplace(t) => {
                        Metric::exact((1.0 + scale * t).powf(-k))
                    }
                    SumFunctional::MeanInverseShifted(s) => {
                        // Gamma has mass below any positive shift: divergent.
                        if s > 0.0 {
                            Metric::Infinite
                        } else {
                            Metric::exact(1.0 / (scale * (k - 1.0)))
                        }
                    }
                    SumFunctional::Power(r) => {
                        // r^X = e^{-X ln(1/r)}
                        Metric::exact((1.0 - scale * r.ln()).powf(-k))
                    }
                })
            }
            AggregateRateLaw::Degenerate { unit } => {
                let x = m * unit;
                Some(match f.pole() {
                    Some(p) if x <= p => Metric::Infinite,
                    _ => Metric::exact(f.eval(x)),
                })
            }
            AggregateRateLaw::MonteCarlo { .. } => None,
        }
    }

    /// E[f(X) | m] for each requested integer holder count and functional,
    /// indexed `[functional][position of m in ms]`. On the Monte Carlo route
    /// all requests are served by one streaming pass over a shared pool.
    pub fn expect_batch(
        &self,
        ms: &[u32],
        fs: &[SumFunctional],
    ) -> Result<Vec<Vec<Metric>>, AnalyticError> {
        if self.is_closed() {
            return Ok(fs
                .iter()
                .map(|f| {
                    ms.iter()
                        .map(|&m| self.expect_closed(f64::from(m), *f).expect("closed"))
                        .collect()
                })
                .collect());
        }
        let AggregateRateLaw::MonteCarlo { dist, pool, seed } = self else {
            unreachable!()
        };
        let sampler = dist.sampler();
        let mut rng = derive_rng(*seed, salt::MC_POOL, 0);
        let mut out: Vec<Vec<Metric>> = vec![vec![Metric::exact(f64::NAN); ms.len()]; fs.len()];

        let mut wanted: Vec<(u32, usize)> = ms.iter().copied().enumerate().map(|(i, m)| (m, i)).collect();
        wanted.sort_unstable();
        for &(m, pos) in wanted.iter().take_while(|&&(m, _)| m == 0) {
            let _ = m;
            for (fi, f) in fs.iter().enumerate() {
                out[fi][pos] = f.at_zero();
            }
        }
        let wanted: Vec<(u32, usize)> = wanted.into_iter().filter(|&(m, _)| m > 0).collect();
        let Some(&(max_m, _)) = wanted.last() else {
            return Ok(out);
        };

        let mut sums = vec![0.0f64; *pool];
        let mut next = 0usize; // index into `wanted`
        for m in 1..=max_m {
            for s in sums.iter_mut() {
                *s += sampler.sample(&mut rng);
            }
            while next < wanted.len() && wanted[next].0 == m {
                let pos = wanted[next].1;
                for (fi, f) in fs.iter().enumerate() {
                    out[fi][pos] = pool_expectation(&sums, *f);
                }
                next += 1;
            }
        }
        Ok(out)
    }
}

fn pool_expectation(sums: &[f64], f: SumFunctional) -> Metric {
    if let Some(pole) = f.pole() {
        if sums.iter().any(|&x| x <= pole) {
            return Metric::Infinite;
        }
    }
    let n = sums.len() as f64;
    let mut mean = 0.0;
    for &x in sums {
        mean += f.eval(x);
    }
    mean /= n;
    let mut var = 0.0;
    for &x in sums {
        var += (f.eval(x) - mean).powi(2);
    }
    var /= (n - 1.0).max(1.0);
    Metric::Finite(Estimate {
        value: mean,
        se: (var / n).sqrt(),
    })
}
