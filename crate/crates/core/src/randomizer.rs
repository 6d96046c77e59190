//! Local randomizers as exact conditional-probability tables.
//!
//! A randomizer is a finite domain-by-range table of exact rows. Keeping
//! randomizers as tables (never black-box samplers) is what lets posteriors,
//! rejection-sampling acceptance ratios, and privacy audits be exact.

use serde::{Deserialize, Serialize};

use crate::dist::FiniteDist;
use crate::error::{LdpError, Result};
use crate::rng::SeededRng;

#[derive(Debug, Clone)]
pub struct Randomizer {
    domain: Vec<String>,
    range: Vec<String>,
    rows: Vec<FiniteDist>,
    declared_eps: f64,
    declared_delta: f64,
}

impl Randomizer {
    pub fn new(
        domain: Vec<String>,
        range: Vec<String>,
        rows: Vec<FiniteDist>,
        declared_eps: f64,
        declared_delta: f64,
    ) -> Result<Self> {
        if domain.is_empty() || range.is_empty() {
            return Err(LdpError::EmptySupport);
        }
        if rows.len() != domain.len() {
            return Err(LdpError::InvalidParameter(format!(
                "{} rows for domain of size {}",
                rows.len(),
                domain.len()
            )));
        }
        for row in &rows {
            if row.support() != range.as_slice() {
                return Err(LdpError::InvalidParameter(
                    "row support differs from declared range".into(),
                ));
            }
        }
        if declared_eps < 0.0 || !(0.0..=1.0).contains(&declared_delta) {
            return Err(LdpError::InvalidParameter(format!(
                "declared (eps, delta) = ({declared_eps}, {declared_delta})"
            )));
        }
        Ok(Self {
            domain,
            range,
            rows,
            declared_eps,
            declared_delta,
        })
    }

    /// Build a randomizer from raw row probabilities (one row per domain symbol).
    pub fn from_rows(
        domain: Vec<String>,
        range: Vec<String>,
        row_probs: Vec<Vec<f64>>,
        declared_eps: f64,
        declared_delta: f64,
    ) -> Result<Self> {
        let rows = row_probs
            .into_iter()
            .map(|p| FiniteDist::new(range.clone(), p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, range, rows, declared_eps, declared_delta)
    }

    /// k-ary randomized response over domain {"0", ..., "k-1"}: outputs the
    /// truth with probability e^eps / (e^eps + k - 1).
    pub fn randomized_response(k: usize, eps: f64) -> Result<Self> {
        if k < 2 {
            return Err(LdpError::InvalidParameter(format!("domain size {k} < 2")));
        }
        if eps <= 0.0 {
            return Err(LdpError::InvalidParameter(format!("eps {eps} <= 0")));
        }
        let symbols: Vec<String> = (0..k).map(|i| i.to_string()).collect();
        let truth = eps.exp() / (eps.exp() + (k - 1) as f64);
        let lie = 1.0 / (eps.exp() + (k - 1) as f64);
        let rows = (0..k)
            .map(|x| {
                let probs = (0..k).map(|y| if y == x { truth } else { lie }).collect();
                FiniteDist::new(symbols.clone(), probs)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(symbols.clone(), symbols, rows, eps, 0.0)
    }

    /// Data-independent coin over range {"0","1"}: every domain symbol maps
    /// to Ber(p). A 0-DP randomizer.
    pub fn bernoulli(p: f64, domain: Vec<String>) -> Result<Self> {
        let row = FiniteDist::bernoulli(p)?;
        let rows = vec![row; domain.len()];
        Self::new(domain, vec!["0".into(), "1".into()], rows, 0.0, 0.0)
    }

    /// Data-independent randomizer: one fixed distribution for every input.
    pub fn constant(domain: Vec<String>, dist: FiniteDist) -> Result<Self> {
        let range = dist.support().to_vec();
        let rows = vec![dist; domain.len()];
        Self::new(domain, range, rows, 0.0, 0.0)
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn range(&self) -> &[String] {
        &self.range
    }

    pub fn rows(&self) -> &[FiniteDist] {
        &self.rows
    }

    pub fn row(&self, x: &str) -> Result<&FiniteDist> {
        let i = self
            .domain
            .iter()
            .position(|s| s == x)
            .ok_or_else(|| LdpError::UnknownSymbol(x.into()))?;
        Ok(&self.rows[i])
    }

    pub fn row_by_index(&self, i: usize) -> &FiniteDist {
        &self.rows[i]
    }

    pub fn declared_eps(&self) -> f64 {
        self.declared_eps
    }

    pub fn declared_delta(&self) -> f64 {
        self.declared_delta
    }

    /// Smallest eps for which the table is (eps, 0)-DP: the max over all
    /// x, x', y of ln(row(x)(y) / row(x')(y)). Returns +inf when a
    /// zero/nonzero probability pair exists.
    pub fn minimal_eps(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for yi in 0..self.range.len() {
            let mut min = f64::INFINITY;
            let mut max: f64 = 0.0;
            for row in &self.rows {
                let p = row.probs()[yi];
                min = min.min(p);
                max = max.max(p);
            }
            if max > 0.0 && min == 0.0 {
                return f64::INFINITY;
            }
            if max > 0.0 {
                worst = worst.max((max / min).ln());
            }
        }
        worst
    }

    /// Full-enumeration check of the (eps, delta) table condition:
    /// row(x)(y) <= e^eps row(x')(y) + delta for all x, x', y.
    pub fn passes_table_check(&self, eps: f64, delta: f64) -> bool {
        for yi in 0..self.range.len() {
            for a in &self.rows {
                for b in &self.rows {
                    if a.probs()[yi] > eps.exp() * b.probs()[yi] + delta + 1e-12 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Apply to a datum, drawing a fresh message.
    pub fn apply(&self, x: &str, rng: &mut SeededRng) -> Result<String> {
        Ok(self.row(x)?.sample(rng).to_string())
    }
}

/// Lemma-decomp mixture decomposition: R(x) = gamma R~(x) + (1 - gamma) mu,
/// with mu data-independent and R~ a 2*eps randomizer.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub gamma: f64,
    pub mu: FiniteDist,
    pub r_tilde: Randomizer,
    pub eps_prime: f64,
    pub eps: f64,
    pub anchor_x0: String,
    /// True when eps_prime = 0 and the mixture collapses to mu alone.
    pub degenerate: bool,
}

/// Decompose a pure randomizer at target privacy `eps >= minimal_eps(r)`.
///
/// gamma = (e^{-eps'} - 1) / (e^{-eps} - 1) with eps' the minimal eps of r.
/// The data-dependent part is r~(x) = mu + (1/gamma)(r(x) - mu) with
/// mu = r's row at the anchor.
pub fn decompose(r: &Randomizer, eps: f64, anchor_x0: &str) -> Result<Decomposition> {
    if r.declared_delta() != 0.0 {
        return Err(LdpError::NonPureRandomizer("delta > 0".into()));
    }
    let eps_prime = r.minimal_eps();
    if !eps_prime.is_finite() {
        return Err(LdpError::NonPureRandomizer(
            "zero/nonzero probability pair".into(),
        ));
    }
    let mu = r.row(anchor_x0)?.clone();
    if eps_prime == 0.0 {
        let r_tilde = Randomizer::constant(r.domain().to_vec(), mu.clone())?;
        return Ok(Decomposition {
            gamma: 0.0,
            mu,
            r_tilde,
            eps_prime,
            eps,
            anchor_x0: anchor_x0.into(),
            degenerate: true,
        });
    }
    if eps < eps_prime - 1e-12 {
        return Err(LdpError::InvalidParameter(format!(
            "target eps {eps} below minimal eps {eps_prime}"
        )));
    }
    let eps = eps.max(eps_prime);
    let gamma = ((-eps_prime).exp() - 1.0) / ((-eps).exp() - 1.0);
    let range = r.range().to_vec();
    let rows = r
        .rows()
        .iter()
        .map(|row| {
            let probs: Vec<f64> = row
                .probs()
                .iter()
                .zip(mu.probs())
                // nonnegative by the decomposition lemma; clamp float dust
                .map(|(&p, &m)| (m + (p - m) / gamma).max(0.0))
                .collect();
            FiniteDist::new(range.clone(), probs)
        })
        .collect::<Result<Vec<_>>>()?;
    let r_tilde = Randomizer::new(r.domain().to_vec(), range, rows, 2.0 * eps, 0.0)?;
    Ok(Decomposition {
        gamma,
        mu,
        r_tilde,
        eps_prime,
        eps,
        anchor_x0: anchor_x0.into(),
        degenerate: false,
    })
}

impl Decomposition {
    /// Max absolute per-cell error of gamma r~(x)(y) + (1-gamma) mu(y)
    /// against the original table.
    pub fn reconstruction_error(&self, original: &Randomizer) -> f64 {
        let mut worst: f64 = 0.0;
        for (xi, row) in original.rows().iter().enumerate() {
            for (yi, &p) in row.probs().iter().enumerate() {
                let mixed = self.gamma * self.r_tilde.rows()[xi].probs()[yi]
                    + (1.0 - self.gamma) * self.mu.probs()[yi];
                worst = worst.max((mixed - p).abs());
            }
        }
        worst
    }
}

/// JSON wire format: probabilities as decimal strings with 18 significant
/// digits so tables round-trip exactly.
#[derive(Serialize, Deserialize)]
pub struct RandomizerJson {
    pub domain: Vec<String>,
    pub range: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub eps: f64,
    pub delta: f64,
}

impl From<&Randomizer> for RandomizerJson {
    fn from(r: &Randomizer) -> Self {
        RandomizerJson {
            domain: r.domain.clone(),
            range: r.range.clone(),
            rows: r
                .rows
                .iter()
                .map(|row| row.probs().iter().map(|p| format!("{p:.17e}")).collect())
                .collect(),
            eps: r.declared_eps,
            delta: r.declared_delta,
        }
    }
}

impl TryFrom<RandomizerJson> for Randomizer {
    type Error = LdpError;

    fn try_from(j: RandomizerJson) -> Result<Self> {
        let rows = j
            .rows
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|s| {
                        s.parse::<f64>()
                            .map_err(|e| LdpError::Serialization(format!("bad probability: {e}")))
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Randomizer::from_rows(j.domain, j.range, rows, j.eps, j.delta)
    }
}
