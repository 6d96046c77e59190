//! Compiling a fully interactive pure-LDP protocol into a sequentially
//! interactive one with the identical transcript distribution.
//!
//! Follow-up rounds for an already-queried simulated user are served by
//! splitting the round randomizer into a data-dependent part (fed by
//! private rejection sampling over fresh users) and a data-independent
//! part the server draws itself.

use crate::dist::FiniteDist;
use crate::error::{LdpError, Result};
use crate::protocol::{Protocol, Registry, RoundRecord, Transcript, DEFAULT_ROUND_CAP};
use crate::randomizer::{decompose, Randomizer};
use crate::rng::SeededRng;

pub const DEFAULT_MAX_DRAWS: u64 = 1_000_000;

/// One compiled run: the simulated transcript plus the physical-side
/// consumption bookkeeping.
#[derive(Debug, Clone)]
pub struct ReductionRun {
    pub transcript: Transcript,
    /// Total fresh prior draws: first-touch users plus all rejection-
    /// sampling draws (accepted and rejected).
    pub samples_used: u64,
    /// Per transcript round: rejected draws before acceptance (0 for
    /// first-touch and data-independent rounds).
    pub per_round_rejections: Vec<u64>,
    /// (round index, physical users consumed in that round); rounds that
    /// consumed no user are omitted.
    pub fresh_user_log: Vec<(usize, u64)>,
}

/// Private rejection sampling: simulate `target` applied to a posterior
/// draw using only fresh prior draws.
///
/// Each fresh draw x accepts with probability p_x/2 where p_x is the
/// likelihood of `user_view` under x relative to the maximizing datum; on
/// accept the message is `target` applied to x. Returns the message and
/// the number of prior draws consumed.
pub fn rej_samp(
    user_view: &[(String, String)],
    prior: &FiniteDist,
    registry: &Registry,
    target: &Randomizer,
    rng: &mut SeededRng,
    max_draws: u64,
) -> Result<(String, u64)> {
    let mut lik = vec![1.0f64; prior.len()];
    for (rid, msg) in user_view {
        let r = registry
            .get(rid)
            .ok_or_else(|| LdpError::UnknownRandomizer(rid.clone()))?;
        for (i, x) in prior.support().iter().enumerate() {
            lik[i] *= r.row(x)?.prob(msg);
        }
    }
    let max_lik = lik.iter().cloned().fold(0.0, f64::max);
    if max_lik == 0.0 {
        return Err(LdpError::ZeroLikelihood);
    }
    let mut draws = 0u64;
    while draws < max_draws {
        let xi = prior.sample_index(rng);
        draws += 1;
        if rng.gen_bool(lik[xi] / max_lik / 2.0) {
            let msg = target.apply(&prior.support()[xi], rng)?;
            return Ok((msg, draws));
        }
    }
    Err(LdpError::MaxDrawsExceeded(max_draws))
}

/// Run the compiled protocol with the default anchor (first domain symbol
/// of each round randomizer).
pub fn reduction_expt(
    p: &Protocol,
    prior: &FiniteDist,
    n: usize,
    eps: f64,
    rng: &mut SeededRng,
) -> Result<ReductionRun> {
    reduction_expt_with_anchor(p, prior, n, eps, None, rng)
}

/// Run the compiled protocol. Per round with simulated user i:
/// - first touch of i: one fresh prior draw, round randomizer applied
///   directly;
/// - later touches: split the round randomizer at privacy `eps` into a
///   gamma-mixture; with probability gamma serve via rejection sampling
///   against the doubled-privacy part (consuming fresh users), otherwise
///   the server draws the data-independent part itself.
pub fn reduction_expt_with_anchor(
    p: &Protocol,
    prior: &FiniteDist,
    n: usize,
    eps: f64,
    anchor: Option<&str>,
    rng: &mut SeededRng,
) -> Result<ReductionRun> {
    if eps <= 0.0 {
        return Err(LdpError::InvalidParameter(format!("eps {eps} <= 0")));
    }
    if n < p.n_declared() {
        return Err(LdpError::InvalidParameter(format!(
            "n = {n} below protocol's declared user count {}",
            p.n_declared()
        )));
    }
    let mut touched = vec![false; n];
    let mut run = ReductionRun {
        transcript: Transcript::new(),
        samples_used: 0,
        per_round_rejections: Vec::new(),
        fresh_user_log: Vec::new(),
    };
    loop {
        let round = run.transcript.len();
        if round >= DEFAULT_ROUND_CAP {
            return Err(LdpError::RunawayProtocol(DEFAULT_ROUND_CAP));
        }
        let Some(next) = p.step(&run.transcript) else {
            return Ok(run);
        };
        if next.delta != 0.0 {
            return Err(LdpError::NonPureRandomizer(next.randomizer_id.clone()));
        }
        let r = p.randomizer(&next.randomizer_id)?;
        if next.user >= n {
            return Err(LdpError::InvalidParameter(format!(
                "user {} out of range",
                next.user
            )));
        }
        let message;
        let mut rejections = 0;
        if !touched[next.user] {
            touched[next.user] = true;
            let x = prior.sample(rng).to_string();
            run.samples_used += 1;
            run.fresh_user_log.push((round, 1));
            message = r.apply(&x, rng)?;
        } else {
            let x0 = anchor.unwrap_or(&r.domain()[0]);
            let dec = decompose(r, eps, x0)?;
            if dec.gamma > 0.0 && rng.gen_bool(dec.gamma) {
                let view = run.transcript.user_view(next.user);
                let (msg, draws) = rej_samp(
                    &view,
                    prior,
                    p.registry(),
                    &dec.r_tilde,
                    rng,
                    DEFAULT_MAX_DRAWS,
                )?;
                run.samples_used += draws;
                run.fresh_user_log.push((round, draws));
                rejections = draws - 1;
                message = msg;
            } else {
                message = dec.mu.sample(rng).to_string();
            }
        }
        run.per_round_rejections.push(rejections);
        run.transcript.rounds.push(RoundRecord {
            user: next.user,
            randomizer_id: next.randomizer_id,
            eps_t: next.eps,
            delta_t: next.delta,
            message,
        });
    }
}

/// Distribution summary of samples_used over repeated compiled runs.
#[derive(Debug, Clone, Copy)]
pub struct SampleComplexitySummary {
    pub trials: u64,
    pub mean: f64,
    pub q50: u64,
    pub q90: u64,
    pub q99: u64,
}

/// Run the compiled protocol `trials` times with derived child seeds and
/// summarize the fresh-sample counts.
pub fn empirical_sample_complexity(
    p: &Protocol,
    prior: &FiniteDist,
    n: usize,
    eps: f64,
    trials: u64,
    rng: &SeededRng,
) -> Result<SampleComplexitySummary> {
    if trials < 1 {
        return Err(LdpError::InvalidParameter("trials < 1".into()));
    }
    let mut counts = Vec::with_capacity(trials as usize);
    for t in 0..trials {
        let mut child = rng.child(t);
        counts.push(reduction_expt(p, prior, n, eps, &mut child)?.samples_used);
    }
    counts.sort_unstable();
    let quantile = |q: f64| {
        let idx = ((counts.len() as f64 * q).ceil() as usize).clamp(1, counts.len()) - 1;
        counts[idx]
    };
    Ok(SampleComplexitySummary {
        trials,
        mean: counts.iter().sum::<u64>() as f64 / trials as f64,
        q50: quantile(0.5),
        q90: quantile(0.9),
        q99: quantile(0.99),
    })
}
