//! Transcripts, deterministic protocols, and the experiment semantics.
//!
//! A protocol is a deterministic map from a transcript prefix to the next
//! (user, randomizer, privacy parameters) assignment or a halt. The two
//! experiment semantics are `follow_expt` (data fixed per user) and
//! `bayes_expt` (datum resampled from its exact posterior each round);
//! the two induce identical transcript distributions.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dist::FiniteDist;
use crate::error::{LdpError, Result};
use crate::randomizer::Randomizer;
use crate::rng::SeededRng;

pub const DEFAULT_ROUND_CAP: usize = 1_000_000;
pub const DEFAULT_TREE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub user: usize,
    pub randomizer_id: String,
    pub eps_t: f64,
    pub delta_t: f64,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Transcript {
    pub rounds: Vec<RoundRecord>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    /// The (randomizer id, message) view of one user's own rounds.
    pub fn user_view(&self, user: usize) -> Vec<(String, String)> {
        self.rounds
            .iter()
            .filter(|r| r.user == user)
            .map(|r| (r.randomizer_id.clone(), r.message.clone()))
            .collect()
    }

    /// Canonical string key: eps/delta omitted since they are deterministic
    /// given the prefix.
    pub fn key(&self) -> String {
        let mut out = String::new();
        for r in &self.rounds {
            out.push_str(&format!("{}:{}:{};", r.user, r.randomizer_id, r.message));
        }
        out
    }
}

/// Next-round assignment returned by a protocol step.
#[derive(Debug, Clone, PartialEq)]
pub struct NextRound {
    pub user: usize,
    pub randomizer_id: String,
    pub eps: f64,
    pub delta: f64,
}

pub type Registry = BTreeMap<String, Randomizer>;

type StepFn = dyn Fn(&Transcript) -> Option<NextRound> + Send + Sync;

/// A deterministic protocol: a pure step function over transcript prefixes
/// plus the registry of randomizer tables it may assign.
#[derive(Clone)]
pub struct Protocol {
    registry: Arc<Registry>,
    n_declared: usize,
    step_fn: Arc<StepFn>,
}

impl Protocol {
    pub fn new<F>(registry: Registry, n_declared: usize, step_fn: F) -> Self
    where
        F: Fn(&Transcript) -> Option<NextRound> + Send + Sync + 'static,
    {
        Self {
            registry: Arc::new(registry),
            n_declared,
            step_fn: Arc::new(step_fn),
        }
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn n_declared(&self) -> usize {
        self.n_declared
    }

    pub fn step(&self, transcript: &Transcript) -> Option<NextRound> {
        (self.step_fn)(transcript)
    }

    pub fn randomizer(&self, id: &str) -> Result<&Randomizer> {
        self.registry
            .get(id)
            .ok_or_else(|| LdpError::UnknownRandomizer(id.into()))
    }

    /// Validate an assignment: known randomizer, pure round, and a minimal
    /// eps no larger than the declared round eps.
    fn check_assignment(&self, round: usize, next: &NextRound) -> Result<&Randomizer> {
        let r = self.randomizer(&next.randomizer_id)?;
        if next.delta != 0.0 {
            return Err(LdpError::NonPureRandomizer(next.randomizer_id.clone()));
        }
        let minimal = r.minimal_eps();
        if minimal > next.eps + 1e-9 {
            return Err(LdpError::EpsMismatch {
                round,
                id: next.randomizer_id.clone(),
                minimal,
                declared: next.eps,
            });
        }
        Ok(r)
    }
}

fn check_prior_domain(p: &Protocol, prior: &FiniteDist) -> Result<()> {
    for r in p.registry().values() {
        for s in prior.support() {
            if !r.domain().contains(s) {
                return Err(LdpError::DomainMismatch(s.clone()));
            }
        }
    }
    Ok(())
}

/// Run the protocol as written: draw n users i.i.d. from the prior, then
/// follow the step function until halt.
pub fn follow_expt(
    p: &Protocol,
    prior: &FiniteDist,
    n: usize,
    rng: &mut SeededRng,
) -> Result<Transcript> {
    if n < p.n_declared() {
        return Err(LdpError::InvalidParameter(format!(
            "n = {n} below protocol's declared user count {}",
            p.n_declared()
        )));
    }
    check_prior_domain(p, prior)?;
    let data: Vec<String> = (0..n).map(|_| prior.sample(rng).to_string()).collect();
    let mut transcript = Transcript::new();
    loop {
        if transcript.len() >= DEFAULT_ROUND_CAP {
            return Err(LdpError::RunawayProtocol(DEFAULT_ROUND_CAP));
        }
        let Some(next) = p.step(&transcript) else {
            return Ok(transcript);
        };
        let r = p.check_assignment(transcript.len(), &next)?;
        let x = data
            .get(next.user)
            .ok_or_else(|| LdpError::InvalidParameter(format!("user {} out of range", next.user)))?;
        let message = r.apply(x, rng)?;
        transcript.rounds.push(RoundRecord {
            user: next.user,
            randomizer_id: next.randomizer_id,
            eps_t: next.eps,
            delta_t: next.delta,
            message,
        });
    }
}

/// Exact posterior on a user's datum given their own rounds: prior(x)
/// reweighted by the product of row likelihoods, renormalized.
pub fn posterior(
    prior: &FiniteDist,
    user_view: &[(String, String)],
    registry: &Registry,
) -> Result<FiniteDist> {
    let mut likelihood = vec![1.0; prior.len()];
    for (rid, msg) in user_view {
        let r = registry
            .get(rid)
            .ok_or_else(|| LdpError::UnknownRandomizer(rid.clone()))?;
        for (i, x) in prior.support().iter().enumerate() {
            likelihood[i] *= r.row(x)?.prob(msg);
        }
    }
    prior.reweight(&likelihood)
}

/// The Bayesian-resampling thought experiment: identical loop to
/// `follow_expt` except the selected user's datum is redrawn from its
/// posterior before every round. First touch uses the prior.
pub fn bayes_expt(
    p: &Protocol,
    prior: &FiniteDist,
    n: usize,
    rng: &mut SeededRng,
) -> Result<Transcript> {
    if n < p.n_declared() {
        return Err(LdpError::InvalidParameter(format!(
            "n = {n} below protocol's declared user count {}",
            p.n_declared()
        )));
    }
    check_prior_domain(p, prior)?;
    // n prior draws up front, matching FollowExpt's sample complexity
    let _data: Vec<String> = (0..n).map(|_| prior.sample(rng).to_string()).collect();
    let mut transcript = Transcript::new();
    loop {
        if transcript.len() >= DEFAULT_ROUND_CAP {
            return Err(LdpError::RunawayProtocol(DEFAULT_ROUND_CAP));
        }
        let Some(next) = p.step(&transcript) else {
            return Ok(transcript);
        };
        let r = p.check_assignment(transcript.len(), &next)?;
        let view = transcript.user_view(next.user);
        let q = posterior(prior, &view, p.registry())?;
        let x = q.sample(rng).to_string();
        let message = r.apply(&x, rng)?;
        transcript.rounds.push(RoundRecord {
            user: next.user,
            randomizer_id: next.randomizer_id,
            eps_t: next.eps,
            delta_t: next.delta,
            message,
        });
    }
}

/// Interactivity and compositionality classification.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionReport {
    /// Worst-case (over transcript branches) per-user sum of minimal round eps.
    pub per_user_eps_sum: Vec<f64>,
    pub overall_eps: f64,
    pub k_worst: f64,
    pub k_average: f64,
    pub is_sequential: bool,
    pub is_noninteractive: bool,
}

/// Walk every reachable transcript branch and report worst-case per-user
/// eps sums (charging the minimal eps of each assigned randomizer), the
/// compositionality factors, and the interactivity class. `overall_eps` is
/// supplied by the caller (typically from `verify::audit_protocol`).
pub fn classify(p: &Protocol, n: usize, overall_eps: f64) -> Result<CompositionReport> {
    struct Walk<'a> {
        p: &'a Protocol,
        n: usize,
        nodes: usize,
        per_user_max: Vec<f64>,
        total_max: f64,
        // assignment seen at each depth; None once two branches disagree
        depth_assignment: Vec<Option<Option<NextRound>>>,
        sequential: bool,
    }

    impl Walk<'_> {
        fn go(
            &mut self,
            transcript: &mut Transcript,
            sums: &mut Vec<f64>,
            users_seen: &mut Vec<bool>,
        ) -> Result<()> {
            self.nodes += 1;
            if self.nodes > DEFAULT_TREE_CAP {
                return Err(LdpError::TreeOverflow(DEFAULT_TREE_CAP));
            }
            let depth = transcript.len();
            let next = self.p.step(transcript);
            if self.depth_assignment.len() <= depth {
                self.depth_assignment.push(Some(next.clone()));
            } else if let Some(seen) = &self.depth_assignment[depth] {
                if *seen != next {
                    self.depth_assignment[depth] = None;
                }
            }
            let Some(next) = next else {
                for (i, s) in sums.iter().enumerate() {
                    self.per_user_max[i] = self.per_user_max[i].max(*s);
                }
                self.total_max = self.total_max.max(sums.iter().sum());
                return Ok(());
            };
            let r = self.p.check_assignment(depth, &next)?;
            if next.user >= self.n {
                return Err(LdpError::InvalidParameter(format!(
                    "user {} out of range",
                    next.user
                )));
            }
            if users_seen[next.user] {
                self.sequential = false;
            }
            let charged = r.minimal_eps();
            let was_seen = users_seen[next.user];
            users_seen[next.user] = true;
            sums[next.user] += charged;
            let range: Vec<String> = r.range().to_vec();
            for y in range {
                // a message is reachable if some datum gives it positive mass
                let reachable = r.rows().iter().any(|row| row.prob(&y) > 0.0);
                if !reachable {
                    continue;
                }
                transcript.rounds.push(RoundRecord {
                    user: next.user,
                    randomizer_id: next.randomizer_id.clone(),
                    eps_t: next.eps,
                    delta_t: next.delta,
                    message: y,
                });
                self.go(transcript, sums, users_seen)?;
                transcript.rounds.pop();
            }
            sums[next.user] -= charged;
            users_seen[next.user] = was_seen;
            Ok(())
        }
    }

    let mut w = Walk {
        p,
        n,
        nodes: 0,
        per_user_max: vec![0.0; n],
        total_max: 0.0,
        depth_assignment: Vec::new(),
        sequential: true,
    };
    let mut t = Transcript::new();
    let mut sums = vec![0.0; n];
    let mut seen = vec![false; n];
    w.go(&mut t, &mut sums, &mut seen)?;

    // noninteractive: the assignment at every depth is independent of the
    // transcript prefix
    let noninteractive = w.depth_assignment.iter().all(|a| a.is_some());
    let worst_user = w.per_user_max.iter().cloned().fold(0.0, f64::max);
    let (k_worst, k_average) = if overall_eps > 0.0 {
        (
            worst_user / overall_eps,
            w.total_max / (overall_eps * n as f64),
        )
    } else {
        (0.0, 0.0)
    };
    Ok(CompositionReport {
        per_user_eps_sum: w.per_user_max,
        overall_eps,
        k_worst,
        k_average,
        is_sequential: w.sequential,
        is_noninteractive: noninteractive,
    })
}
