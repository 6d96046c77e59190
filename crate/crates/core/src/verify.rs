//! Independent oracles: exact transcript-distribution enumeration,
//! exhaustive privacy auditing, and statistical equivalence testing.

use std::collections::BTreeMap;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::dist::FiniteDist;
use crate::error::{LdpError, Result};
use crate::protocol::{posterior, NextRound, Protocol, RoundRecord, Transcript, DEFAULT_TREE_CAP};
use crate::randomizer::decompose;

/// Exact distribution over serialized transcripts.
#[derive(Debug, Clone, PartialEq)]
pub struct TranscriptDist {
    pub entries: BTreeMap<String, f64>,
}

impl TranscriptDist {
    pub fn total_mass(&self) -> f64 {
        self.entries.values().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Semantics {
    Follow,
    Bayes,
}

/// Exact forward enumeration of the transcript distribution.
///
/// Follow semantics fixes each user's datum across rounds (marginalizing
/// over the joint data draw); Bayes semantics resamples the selected
/// user's datum from its exact posterior each round.
pub fn enumerate_transcripts(
    p: &Protocol,
    prior: &FiniteDist,
    n: usize,
    semantics: Semantics,
) -> Result<TranscriptDist> {
    let mut entries = BTreeMap::new();
    let mut nodes = 0usize;
    match semantics {
        Semantics::Follow => {
            // enumerate joint data assignments, then the message tree
            let mut assignment = vec![0usize; n];
            loop {
                let weight: f64 = assignment.iter().map(|&i| prior.probs()[i]).product();
                if weight > 0.0 {
                    let data: Vec<&str> = assignment
                        .iter()
                        .map(|&i| prior.support()[i].as_str())
                        .collect();
                    let mut t = Transcript::new();
                    follow_branch(p, &data, &mut t, weight, &mut entries, &mut nodes)?;
                }
                // odometer over support^n
                let mut pos = 0;
                loop {
                    if pos == n {
                        return finish(entries);
                    }
                    assignment[pos] += 1;
                    if assignment[pos] < prior.len() {
                        break;
                    }
                    assignment[pos] = 0;
                    pos += 1;
                }
            }
        }
        Semantics::Bayes => {
            let mut t = Transcript::new();
            bayes_branch(p, prior, &mut t, 1.0, &mut entries, &mut nodes)?;
            finish(entries)
        }
    }
}

fn finish(entries: BTreeMap<String, f64>) -> Result<TranscriptDist> {
    let d = TranscriptDist { entries };
    let mass = d.total_mass();
    if (mass - 1.0).abs() > 1e-9 {
        return Err(LdpError::NotNormalized { sum: mass });
    }
    Ok(d)
}

fn follow_branch(
    p: &Protocol,
    data: &[&str],
    t: &mut Transcript,
    weight: f64,
    entries: &mut BTreeMap<String, f64>,
    nodes: &mut usize,
) -> Result<()> {
    *nodes += 1;
    if *nodes > DEFAULT_TREE_CAP {
        return Err(LdpError::TreeOverflow(DEFAULT_TREE_CAP));
    }
    let Some(next) = p.step(t) else {
        *entries.entry(t.key()).or_insert(0.0) += weight;
        return Ok(());
    };
    let r = p.randomizer(&next.randomizer_id)?;
    let row = r.row(data[next.user])?.clone();
    for (yi, y) in row.support().iter().enumerate() {
        let py = row.probs()[yi];
        if py == 0.0 {
            continue;
        }
        t.rounds.push(record(&next, y));
        follow_branch(p, data, t, weight * py, entries, nodes)?;
        t.rounds.pop();
    }
    Ok(())
}

fn bayes_branch(
    p: &Protocol,
    prior: &FiniteDist,
    t: &mut Transcript,
    weight: f64,
    entries: &mut BTreeMap<String, f64>,
    nodes: &mut usize,
) -> Result<()> {
    *nodes += 1;
    if *nodes > DEFAULT_TREE_CAP {
        return Err(LdpError::TreeOverflow(DEFAULT_TREE_CAP));
    }
    let Some(next) = p.step(t) else {
        *entries.entry(t.key()).or_insert(0.0) += weight;
        return Ok(());
    };
    let r = p.randomizer(&next.randomizer_id)?;
    let view = t.user_view(next.user);
    let q = posterior(prior, &view, p.registry())?;
    for y in r.range().to_vec() {
        // marginal message probability under the posterior
        let mut py = 0.0;
        for (xi, x) in q.support().iter().enumerate() {
            py += q.probs()[xi] * r.row(x)?.prob(&y);
        }
        if py == 0.0 {
            continue;
        }
        t.rounds.push(record(&next, &y));
        bayes_branch(p, prior, t, weight * py, entries, nodes)?;
        t.rounds.pop();
    }
    Ok(())
}

fn record(next: &NextRound, message: &str) -> RoundRecord {
    RoundRecord {
        user: next.user,
        randomizer_id: next.randomizer_id.clone(),
        eps_t: next.eps,
        delta_t: next.delta,
        message: message.to_string(),
    }
}

/// Result of an exhaustive worst-case privacy audit.
#[derive(Debug, Clone)]
pub struct AuditReport {
    /// Max over neighboring datasets and transcripts of the log probability
    /// ratio. Infinite when a zero/nonzero pair exists.
    pub realized_eps: f64,
    /// (transcript key, user index, datum, datum') achieving the max.
    pub witness: Option<(String, usize, String, String)>,
}

/// Exact worst-case LDP audit of FollowExpt(protocol) over all datasets in
/// domain^n differing in one coordinate. The ratio telescopes over the
/// differing user's own rounds, so the audit scans, per reachable
/// transcript, each user's per-datum log-likelihood spread.
pub fn audit_protocol(p: &Protocol, n: usize) -> Result<AuditReport> {
    // the data domain is the union of all registry domains
    let mut domain: Vec<String> = Vec::new();
    for r in p.registry().values() {
        for s in r.domain() {
            if !domain.contains(s) {
                domain.push(s.clone());
            }
        }
    }
    let mut report = AuditReport {
        realized_eps: 0.0,
        witness: None,
    };
    let mut t = Transcript::new();
    let mut nodes = 0usize;
    audit_branch(p, n, &domain, &mut t, &mut nodes, &mut report)?;
    Ok(report)
}

fn audit_branch(
    p: &Protocol,
    n: usize,
    domain: &[String],
    t: &mut Transcript,
    nodes: &mut usize,
    report: &mut AuditReport,
) -> Result<()> {
    *nodes += 1;
    if *nodes > DEFAULT_TREE_CAP {
        return Err(LdpError::TreeOverflow(DEFAULT_TREE_CAP));
    }
    let Some(next) = p.step(t) else {
        audit_leaf(p, n, domain, t, report)?;
        return Ok(());
    };
    let r = p.randomizer(&next.randomizer_id)?;
    for y in r.range().to_vec() {
        let reachable = r.rows().iter().any(|row| row.prob(&y) > 0.0);
        if !reachable {
            continue;
        }
        t.rounds.push(record(&next, &y));
        audit_branch(p, n, domain, t, nodes, report)?;
        t.rounds.pop();
    }
    Ok(())
}

fn audit_leaf(
    p: &Protocol,
    n: usize,
    domain: &[String],
    t: &Transcript,
    report: &mut AuditReport,
) -> Result<()> {
    // transcript must be reachable: every involved user needs a datum with
    // positive likelihood
    let mut per_user: Vec<Option<Vec<f64>>> = vec![None; n];
    for rec in &t.rounds {
        let r = p.randomizer(&rec.randomizer_id)?;
        let logliks = per_user[rec.user].get_or_insert_with(|| vec![0.0; domain.len()]);
        for (xi, x) in domain.iter().enumerate() {
            let prob = if r.domain().contains(x) {
                r.row(x)?.prob(&rec.message)
            } else {
                // datum outside this randomizer's domain cannot occur here
                0.0
            };
            logliks[xi] += if prob > 0.0 { prob.ln() } else { f64::NEG_INFINITY };
        }
    }
    for (user, logliks) in per_user.iter().enumerate() {
        let Some(logliks) = logliks else { continue };
        let finite: Vec<(usize, f64)> = logliks
            .iter()
            .cloned()
            .enumerate()
            .filter(|(_, l)| l.is_finite())
            .collect();
        if finite.is_empty() {
            // no datum can produce this view: branch unreachable via this user
            return Ok(());
        }
        let has_zero = logliks.iter().any(|l| !l.is_finite());
        let (max_i, max_l) = finite
            .iter()
            .cloned()
            .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
        let spread;
        let min_i;
        if has_zero {
            spread = f64::INFINITY;
            min_i = logliks.iter().position(|l| !l.is_finite()).unwrap();
        } else {
            let (i, min_l) = finite
                .iter()
                .cloned()
                .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
            spread = max_l - min_l;
            min_i = i;
        }
        if spread > report.realized_eps {
            report.realized_eps = spread;
            report.witness = Some((
                t.key(),
                user,
                domain[max_i].clone(),
                domain[min_i].clone(),
            ));
        }
    }
    Ok(())
}

/// Recompute the log ratio for an audit witness. Used to validate reports.
pub fn recheck_witness(p: &Protocol, report: &AuditReport) -> Result<f64> {
    let Some((key, user, x, x_prime)) = &report.witness else {
        return Ok(0.0);
    };
    let mut ratio = 0.0;
    for part in key.split(';').filter(|s| !s.is_empty()) {
        let fields: Vec<&str> = part.split(':').collect();
        let (u, rid, msg) = (fields[0].parse::<usize>().unwrap(), fields[1], fields[2]);
        if u != *user {
            continue;
        }
        let r = p.randomizer(rid)?;
        ratio += r.row(x)?.prob(msg).ln() - r.row(x_prime)?.prob(msg).ln();
    }
    Ok(ratio)
}

/// Exhaustive per-user-view audit of the compiled (reduction) protocol.
///
/// For every reachable simulated-transcript prefix where the reduction
/// would run rejection sampling, this enumerates the physical user's full
/// output distribution (the accept bit, plus the 2-eps randomizer message
/// on accept) per datum, and reports the worst log ratios for the full
/// view and for the accept bit alone.
#[derive(Debug, Clone)]
pub struct ReductionAuditReport {
    pub realized_full_eps: f64,
    pub realized_accept_eps: f64,
    pub contexts_audited: usize,
}

pub fn audit_reduction(p: &Protocol, prior: &FiniteDist, eps: f64) -> Result<ReductionAuditReport> {
    let mut report = ReductionAuditReport {
        realized_full_eps: 0.0,
        realized_accept_eps: 0.0,
        contexts_audited: 0,
    };
    let mut t = Transcript::new();
    let mut nodes = 0usize;
    reduction_audit_branch(p, prior, eps, &mut t, &mut nodes, &mut report)?;
    Ok(report)
}

fn reduction_audit_branch(
    p: &Protocol,
    prior: &FiniteDist,
    eps: f64,
    t: &mut Transcript,
    nodes: &mut usize,
    report: &mut ReductionAuditReport,
) -> Result<()> {
    *nodes += 1;
    if *nodes > DEFAULT_TREE_CAP {
        return Err(LdpError::TreeOverflow(DEFAULT_TREE_CAP));
    }
    let Some(next) = p.step(t) else {
        return Ok(());
    };
    let r = p.randomizer(&next.randomizer_id)?;
    let view = t.user_view(next.user);
    if !view.is_empty() {
        // follow-up round: the reduction decomposes and may rejection-sample
        let dec = decompose(r, eps, &r.domain()[0])?;
        if dec.gamma > 0.0 {
            report.contexts_audited += 1;
            audit_rejsamp_context(p, &view, &dec.r_tilde, report)?;
        }
    }
    for y in r.range().to_vec() {
        let reachable = r.rows().iter().any(|row| row.prob(&y) > 0.0);
        if !reachable {
            continue;
        }
        // only recurse into prefixes reachable under the prior
        let mut py = 0.0;
        let q = posterior(prior, &view, p.registry());
        let q = match q {
            Ok(q) => q,
            Err(LdpError::ZeroEvidence) => return Ok(()),
            Err(e) => return Err(e),
        };
        for (xi, x) in q.support().iter().enumerate() {
            py += q.probs()[xi] * r.row(x)?.prob(&y);
        }
        if py == 0.0 {
            continue;
        }
        t.rounds.push(record(&next, &y));
        reduction_audit_branch(p, prior, eps, t, nodes, report)?;
        t.rounds.pop();
    }
    Ok(())
}

fn audit_rejsamp_context(
    p: &Protocol,
    view: &[(String, String)],
    target: &crate::randomizer::Randomizer,
    report: &mut ReductionAuditReport,
) -> Result<()> {
    let domain = target.domain().to_vec();
    // per-datum likelihood of the simulated view
    let mut lik = vec![1.0f64; domain.len()];
    for (rid, msg) in view {
        let r = p.randomizer(rid)?;
        for (xi, x) in domain.iter().enumerate() {
            lik[xi] *= r.row(x)?.prob(msg);
        }
    }
    let max_lik = lik.iter().cloned().fold(0.0, f64::max);
    if max_lik == 0.0 {
        return Err(LdpError::ZeroLikelihood);
    }
    let accept_prob: Vec<f64> = lik.iter().map(|l| l / max_lik / 2.0).collect();

    // accept-bit channel alone
    for &pa in &accept_prob {
        for &pb in &accept_prob {
            let r1 = (pa / pb).ln();
            let r0 = ((1.0 - pa) / (1.0 - pb)).ln();
            report.realized_accept_eps = report.realized_accept_eps.max(r1).max(r0);
        }
    }
    // full physical view: {reject} plus {accept} x range
    let range_len = target.range().len();
    for a in 0..domain.len() {
        for b in 0..domain.len() {
            let reject = ((1.0 - accept_prob[a]) / (1.0 - accept_prob[b])).ln();
            report.realized_full_eps = report.realized_full_eps.max(reject);
            for yi in 0..range_len {
                let pa = accept_prob[a] * target.rows()[a].probs()[yi];
                let pb = accept_prob[b] * target.rows()[b].probs()[yi];
                if pa > 0.0 && pb > 0.0 {
                    report.realized_full_eps = report.realized_full_eps.max((pa / pb).ln());
                } else if pa > 0.0 {
                    report.realized_full_eps = f64::INFINITY;
                }
            }
        }
    }
    Ok(())
}

/// G-test (likelihood-ratio goodness of fit) outcome.
#[derive(Debug, Clone)]
pub struct GTestResult {
    pub pass: bool,
    pub p_value: f64,
    pub g_statistic: f64,
    pub df: usize,
}

const GTEST_MIN_TOTAL: u64 = 1000;
const GTEST_MIN_EXPECTED: f64 = 10.0;

/// Likelihood-ratio goodness-of-fit test of observed counts against an
/// exact distribution, with small expected cells merged into a tail
/// bucket. Passes iff p_value >= significance.
pub fn gtest_equivalence(
    observed: &BTreeMap<String, u64>,
    expected: &BTreeMap<String, f64>,
    significance: f64,
) -> Result<GTestResult> {
    let total: u64 = observed.values().sum();
    if total < GTEST_MIN_TOTAL {
        return Err(LdpError::InsufficientCount {
            got: total,
            need: GTEST_MIN_TOTAL,
        });
    }
    for key in observed.keys() {
        if !expected.contains_key(key) {
            // observed an impossible outcome
            return Ok(GTestResult {
                pass: false,
                p_value: 0.0,
                g_statistic: f64::INFINITY,
                df: expected.len(),
            });
        }
    }
    // bucket cells: keep cells with expected count >= threshold, merge rest
    let mut cells: Vec<(f64, f64)> = Vec::new(); // (observed, expected) counts
    let mut tail_obs = 0.0;
    let mut tail_exp = 0.0;
    for (key, &prob) in expected {
        let exp = prob * total as f64;
        let obs = *observed.get(key).unwrap_or(&0) as f64;
        if exp >= GTEST_MIN_EXPECTED {
            cells.push((obs, exp));
        } else {
            tail_obs += obs;
            tail_exp += exp;
        }
    }
    if tail_exp > 0.0 {
        cells.push((tail_obs, tail_exp));
    }
    if cells.len() < 2 {
        return Err(LdpError::InsufficientCount {
            got: cells.len() as u64,
            need: 2,
        });
    }
    let mut g = 0.0;
    for &(obs, exp) in &cells {
        if obs > 0.0 {
            g += 2.0 * obs * (obs / exp).ln();
        }
    }
    g = g.max(0.0);
    let df = cells.len() - 1;
    let chi = ChiSquared::new(df as f64)
        .map_err(|e| LdpError::InvalidParameter(e.to_string()))?;
    let p_value = 1.0 - chi.cdf(g);
    Ok(GTestResult {
        pass: p_value >= significance,
        p_value,
        g_statistic: g,
        df,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::protocol::{Protocol, Registry};
    use crate::randomizer::Randomizer;
    use crate::rng::SeededRng;

    #[test]
    fn immediate_halt_enumerates_to_single_transcript() {
        let p = Protocol::new(Registry::new(), 0, |_| None);
        let prior = FiniteDist::uniform(vec!["0".into(), "1".into()]).unwrap();
        let d = enumerate_transcripts(&p, &prior, 1, Semantics::Follow).unwrap();
        assert_eq!(d.entries.len(), 1);
        assert!((d.entries[""] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_rr_round_uniform_prior_is_symmetric() {
        let eps = 3.0f64.ln();
        let mut reg = Registry::new();
        reg.insert("rr".into(), Randomizer::randomized_response(2, eps).unwrap());
        let p = Protocol::new(reg, 1, move |t: &Transcript| {
            (t.len() < 1).then(|| NextRound {
                user: 0,
                randomizer_id: "rr".into(),
                eps,
                delta: 0.0,
            })
        });
        let prior = FiniteDist::uniform(vec!["0".into(), "1".into()]).unwrap();
        let d = enumerate_transcripts(&p, &prior, 1, Semantics::Follow).unwrap();
        assert_eq!(d.entries.len(), 2);
        for v in d.entries.values() {
            assert!((v - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn follow_and_bayes_agree_on_corpus() {
        for entry in corpus::corpus() {
            let f =
                enumerate_transcripts(&entry.protocol, &entry.prior, entry.n, Semantics::Follow)
                    .unwrap();
            let b = enumerate_transcripts(&entry.protocol, &entry.prior, entry.n, Semantics::Bayes)
                .unwrap();
            assert_eq!(f.entries.len(), b.entries.len(), "{}", entry.name);
            for (k, pf) in &f.entries {
                let pb = b.entries.get(k).unwrap_or(&0.0);
                assert!(
                    (pf - pb).abs() < 1e-9,
                    "{}: transcript {k} follow {pf} bayes {pb}",
                    entry.name
                );
            }
        }
    }

    #[test]
    fn enumeration_matches_analytic_single_user_mixture() {
        let entry = &corpus::corpus()[2]; // one user, three identical RR rounds
        let d = enumerate_transcripts(&entry.protocol, &entry.prior, 1, Semantics::Follow).unwrap();
        let r = entry.protocol.randomizer("rr_a").unwrap();
        for (key, prob) in &d.entries {
            let msgs: Vec<&str> = key
                .split(';')
                .filter(|s| !s.is_empty())
                .map(|part| part.rsplit(':').next().unwrap())
                .collect();
            let mut expect = 0.0;
            for (xi, x) in entry.prior.support().iter().enumerate() {
                let mut lik = entry.prior.probs()[xi];
                for m in &msgs {
                    lik *= r.row(x).unwrap().prob(m);
                }
                expect += lik;
            }
            assert!((prob - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn enumeration_is_replay_stable() {
        let entry = &corpus::corpus()[0];
        let a = enumerate_transcripts(&entry.protocol, &entry.prior, entry.n, Semantics::Follow)
            .unwrap();
        let b = enumerate_transcripts(&entry.protocol, &entry.prior, entry.n, Semantics::Follow)
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn audit_data_independent_protocol_is_zero() {
        let mut reg = Registry::new();
        reg.insert(
            "coin".into(),
            Randomizer::bernoulli(0.5, vec!["0".into(), "1".into()]).unwrap(),
        );
        let p = Protocol::new(reg, 1, |t: &Transcript| {
            (t.len() < 2).then(|| NextRound {
                user: 0,
                randomizer_id: "coin".into(),
                eps: 0.0,
                delta: 0.0,
            })
        });
        let rep = audit_protocol(&p, 1).unwrap();
        assert_eq!(rep.realized_eps, 0.0);
    }

    #[test]
    fn audit_single_rr_round_is_eps() {
        let mut reg = Registry::new();
        reg.insert("rr".into(), Randomizer::randomized_response(2, 1.0).unwrap());
        let p = Protocol::new(reg, 1, |t: &Transcript| {
            (t.len() < 1).then(|| NextRound {
                user: 0,
                randomizer_id: "rr".into(),
                eps: 1.0,
                delta: 0.0,
            })
        });
        let rep = audit_protocol(&p, 1).unwrap();
        assert!((rep.realized_eps - 1.0).abs() < 1e-12);
        let rechecked = recheck_witness(&p, &rep).unwrap();
        assert!((rechecked - rep.realized_eps).abs() < 1e-12);
    }

    #[test]
    fn audit_example2_is_eps_despite_round_sums() {
        let (p, _prior) = corpus::example2_histogram(2, 1.0, 1);
        let rep = audit_protocol(&p, 1).unwrap();
        assert!(
            (rep.realized_eps - 1.0).abs() < 1e-9,
            "realized {}",
            rep.realized_eps
        );
    }

    #[test]
    fn gtest_passes_under_the_null() {
        let expected: BTreeMap<String, f64> = [
            ("a".to_string(), 0.5),
            ("b".to_string(), 0.3),
            ("c".to_string(), 0.2),
        ]
        .into();
        let d = FiniteDist::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![0.5, 0.3, 0.2],
        )
        .unwrap();
        let mut rng = SeededRng::new(17);
        let observed = crate::dist::empirical_counts(&d, 100_000, &mut rng);
        let res = gtest_equivalence(&observed, &expected, 0.01).unwrap();
        assert!(res.pass, "p = {}", res.p_value);
    }

    #[test]
    fn gtest_detects_a_tv_005_shift() {
        let expected: BTreeMap<String, f64> =
            [("a".to_string(), 0.5), ("b".to_string(), 0.5)].into();
        let d = FiniteDist::new(vec!["a".into(), "b".into()], vec![0.55, 0.45]).unwrap();
        let mut rng = SeededRng::new(23);
        let observed = crate::dist::empirical_counts(&d, 100_000, &mut rng);
        let res = gtest_equivalence(&observed, &expected, 0.01).unwrap();
        assert!(!res.pass);
    }

    #[test]
    fn gtest_degenerate_exact_match_passes() {
        let expected: BTreeMap<String, f64> =
            [("a".to_string(), 0.5), ("b".to_string(), 0.5)].into();
        let observed: BTreeMap<String, u64> =
            [("a".to_string(), 5000u64), ("b".to_string(), 5000u64)].into();
        let res = gtest_equivalence(&observed, &expected, 0.01).unwrap();
        assert!(res.pass);
        assert!(res.p_value > 0.99);
    }

    #[test]
    fn gtest_rejects_insufficient_counts() {
        let expected: BTreeMap<String, f64> =
            [("a".to_string(), 0.5), ("b".to_string(), 0.5)].into();
        let observed: BTreeMap<String, u64> = [("a".to_string(), 10u64)].into();
        assert!(matches!(
            gtest_equivalence(&observed, &expected, 0.01),
            Err(LdpError::InsufficientCount { .. })
        ));
    }

    #[test]
    fn chi_square_sample_quality_of_finite_dist() {
        // dist-core sampling invariant: p-value > 0.001 at 1e5 draws
        let d = FiniteDist::new(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec![0.4, 0.3, 0.2, 0.1],
        )
        .unwrap();
        let expected: BTreeMap<String, f64> = d
            .support()
            .iter()
            .zip(d.probs())
            .map(|(s, p)| (s.clone(), *p))
            .collect();
        let mut rng = SeededRng::new(31);
        let observed = crate::dist::empirical_counts(&d, 100_000, &mut rng);
        let res = gtest_equivalence(&observed, &expected, 0.001).unwrap();
        assert!(res.pass, "p = {}", res.p_value);
    }
}
