//! Exact finite probability distributions and divergence metrics.
//!
//! `FiniteDist` is the currency every other module trades in: randomizer
//! rows, priors, posteriors, and transcript distributions are all exact
//! pmfs over a finite ordered support.

use std::collections::BTreeMap;

use crate::error::{LdpError, Result};
use crate::rng::SeededRng;

/// Construction-time normalization tolerance: sums within this of 1 are
/// renormalized, anything worse is rejected.
pub const NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDist {
    support: Vec<String>,
    probs: Vec<f64>,
}

impl FiniteDist {
    pub fn new(support: Vec<String>, probs: Vec<f64>) -> Result<Self> {
        if support.is_empty() {
            return Err(LdpError::EmptySupport);
        }
        if support.len() != probs.len() {
            return Err(LdpError::InvalidParameter(format!(
                "support has {} symbols but {} probabilities given",
                support.len(),
                probs.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for s in &support {
            if !seen.insert(s.as_str()) {
                return Err(LdpError::DuplicateSymbol(s.clone()));
            }
        }
        for (i, &p) in probs.iter().enumerate() {
            if !(p >= 0.0) || !p.is_finite() {
                return Err(LdpError::InvalidProbability { index: i, value: p });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(LdpError::NotNormalized { sum });
        }
        let probs = probs.iter().map(|p| p / sum).collect();
        Ok(Self { support, probs })
    }

    pub fn uniform(support: Vec<String>) -> Result<Self> {
        let n = support.len();
        Self::new(support, vec![1.0 / n as f64; n])
    }

    pub fn point_mass(support: Vec<String>, symbol: &str) -> Result<Self> {
        let probs = support
            .iter()
            .map(|s| if s == symbol { 1.0 } else { 0.0 })
            .collect();
        Self::new(support, probs)
    }

    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(LdpError::InvalidParameter(format!(
                "bernoulli parameter {p} outside [0,1]"
            )));
        }
        Self::new(vec!["0".into(), "1".into()], vec![1.0 - p, p])
    }

    pub fn support(&self) -> &[String] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.support.iter().position(|s| s == symbol)
    }

    /// Probability of `symbol`; 0 for symbols outside the support.
    pub fn prob(&self, symbol: &str) -> f64 {
        self.index_of(symbol).map_or(0.0, |i| self.probs[i])
    }

    /// Draw a symbol index by inverse-CDF walk.
    pub fn sample_index(&self, rng: &mut SeededRng) -> usize {
        let u = rng.next_f64();
        let mut acc = 0.0;
        for (i, &p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        self.probs.len() - 1
    }

    pub fn sample(&self, rng: &mut SeededRng) -> &str {
        &self.support[self.sample_index(rng)]
    }

    /// Reweight by a per-symbol likelihood and renormalize.
    pub fn reweight(&self, likelihood: &[f64]) -> Result<Self> {
        assert_eq!(likelihood.len(), self.probs.len());
        let weighted: Vec<f64> = self
            .probs
            .iter()
            .zip(likelihood)
            .map(|(p, l)| p * l)
            .collect();
        let total: f64 = weighted.iter().sum();
        if total <= 0.0 {
            return Err(LdpError::ZeroEvidence);
        }
        Ok(Self {
            support: self.support.clone(),
            probs: weighted.iter().map(|w| w / total).collect(),
        })
    }
}

/// Union support of two distributions, preserving first-seen order.
fn union_support<'a>(p: &'a FiniteDist, q: &'a FiniteDist) -> Vec<&'a str> {
    let mut out: Vec<&str> = p.support.iter().map(String::as_str).collect();
    for s in &q.support {
        if p.index_of(s).is_none() {
            out.push(s);
        }
    }
    out
}

/// Total variation distance, (1/2) sum |p - q| over the union support.
pub fn tv_distance(p: &FiniteDist, q: &FiniteDist) -> f64 {
    union_support(p, q)
        .iter()
        .map(|s| (p.prob(s) - q.prob(s)).abs())
        .sum::<f64>()
        / 2.0
}

/// KL divergence sum p ln(p/q), natural log. Errors where p > 0 but q = 0.
pub fn kl_divergence(p: &FiniteDist, q: &FiniteDist) -> Result<f64> {
    let mut kl = 0.0;
    for s in union_support(p, q) {
        let pp = p.prob(s);
        if pp == 0.0 {
            continue;
        }
        let qq = q.prob(s);
        if qq == 0.0 {
            return Err(LdpError::SupportViolation { symbol: s.into() });
        }
        kl += pp * (pp / qq).ln();
    }
    Ok(kl.max(0.0))
}

/// Squared Hellinger distance, 1 - sum sqrt(p q).
pub fn hellinger_sq(p: &FiniteDist, q: &FiniteDist) -> f64 {
    let bc: f64 = union_support(p, q)
        .iter()
        .map(|s| (p.prob(s) * q.prob(s)).sqrt())
        .sum();
    (1.0 - bc).max(0.0)
}

/// Entropy in nats.
pub fn entropy(p: &FiniteDist) -> f64 {
    p.probs
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.ln())
        .sum()
}

/// A random distribution over `support`, for property tests.
pub fn random_dist(support: &[String], rng: &mut SeededRng) -> FiniteDist {
    loop {
        let raw: Vec<f64> = support.iter().map(|_| rng.next_f64() + 1e-6).collect();
        let sum: f64 = raw.iter().sum();
        let probs: Vec<f64> = raw.iter().map(|r| r / sum).collect();
        if let Ok(d) = FiniteDist::new(support.to_vec(), probs) {
            return d;
        }
    }
}

/// Counts of repeated draws, keyed by symbol. Used by goodness-of-fit checks.
pub fn empirical_counts(d: &FiniteDist, draws: u64, rng: &mut SeededRng) -> BTreeMap<String, u64> {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for _ in 0..draws {
        *counts.entry(d.sample(rng).to_string()).or_insert(0) += 1;
    }
    counts
}
