//! Noninteractive locally private hypothesis testing: the randomized-
//! response likelihood vote for simple hypotheses and the event-
//! distribution minimax tester for compound (convex-hull) hypotheses.

use crate::dist::{tv_distance, FiniteDist};
use crate::error::{LdpError, Result};
use crate::protocol::{NextRound, Protocol, Registry, Transcript};
use crate::randomizer::Randomizer;
use crate::rng::SeededRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    H0,
    H1,
}

/// Laplace(mean 0, scale b) draw by inverse CDF.
pub fn laplace_sample(scale: f64, rng: &mut SeededRng) -> f64 {
    let v = rng.next_f64();
    if v < 0.5 {
        scale * (2.0 * v).max(f64::MIN_POSITIVE).ln()
    } else {
        -scale * (2.0 * (1.0 - v)).max(f64::MIN_POSITIVE).ln()
    }
}

pub fn laplace_density(x: f64, mean: f64, scale: f64) -> f64 {
    (-(x - mean).abs() / scale).exp() / (2.0 * scale)
}

/// A simple-vs-simple testing instance.
#[derive(Debug, Clone)]
pub struct SimpleTestInstance {
    pub p0: FiniteDist,
    pub p1: FiniteDist,
    pub alpha: f64,
}

impl SimpleTestInstance {
    pub fn new(p0: FiniteDist, p1: FiniteDist) -> Result<Self> {
        if p0.support() != p1.support() {
            return Err(LdpError::DomainMismatch(
                "hypotheses must share a ground set".into(),
            ));
        }
        let alpha = tv_distance(&p0, &p1);
        if alpha <= 0.0 {
            return Err(LdpError::InvalidParameter(
                "hypotheses are identical (alpha = 0)".into(),
            ));
        }
        Ok(Self { p0, p1, alpha })
    }

    /// Per-symbol likelihood-argmax bit; ties break toward hypothesis 0.
    fn vote_bits(&self) -> Vec<bool> {
        self.p0
            .support()
            .iter()
            .map(|x| self.p1.prob(x) > self.p0.prob(x))
            .collect()
    }
}

/// Unbiased inversion of the randomized-response count expectation:
/// (e^eps+1)/(e^eps-1) * (n_hat - n/(e^eps+1)).
pub fn debias(n_hat: f64, n: u64, eps: f64) -> f64 {
    let e = eps.exp();
    (e + 1.0) / (e - 1.0) * (n_hat - n as f64 / (e + 1.0))
}

/// The randomized-response likelihood vote: each user publishes its
/// likelihood-argmax bit through RR(2, eps); the analyst debiases the two
/// counts and outputs the argmax hypothesis (tie toward H0).
pub fn simple_test(
    inst: &SimpleTestInstance,
    eps: f64,
    n: u64,
    true_dist: &FiniteDist,
    rng: &mut SeededRng,
) -> Result<Hypothesis> {
    if n < 1 {
        return Err(LdpError::InvalidParameter("n < 1".into()));
    }
    if eps <= 0.0 {
        return Err(LdpError::InvalidParameter(format!("eps {eps} <= 0")));
    }
    let bits = inst.vote_bits();
    let q = eps.exp() / (eps.exp() + 1.0);
    let mut ones = 0u64;
    for _ in 0..n {
        let xi = true_dist.sample_index(rng);
        let b = bits[xi];
        let sent = if rng.gen_bool(q) { b } else { !b };
        ones += u64::from(sent);
    }
    let n1 = debias(ones as f64, n, eps);
    let n0 = debias((n - ones) as f64, n, eps);
    Ok(if n1 > n0 { Hypothesis::H1 } else { Hypothesis::H0 })
}

/// The vote test expressed as an engine protocol (one fixed randomizer,
/// one round per user), for interactivity classification.
pub fn simple_test_protocol(inst: &SimpleTestInstance, eps: f64, n: usize) -> Result<Protocol> {
    let bits = inst.vote_bits();
    let q = eps.exp() / (eps.exp() + 1.0);
    let rows: Vec<Vec<f64>> = bits
        .iter()
        .map(|&b| if b { vec![1.0 - q, q] } else { vec![q, 1.0 - q] })
        .collect();
    let mut reg = Registry::new();
    reg.insert(
        "vote".into(),
        Randomizer::from_rows(
            inst.p0.support().to_vec(),
            vec!["0".into(), "1".into()],
            rows,
            eps,
            0.0,
        )?,
    );
    Ok(Protocol::new(reg, n, move |t: &Transcript| {
        (t.len() < n).then(|| NextRound {
            user: t.len(),
            randomizer_id: "vote".into(),
            eps,
            delta: 0.0,
        })
    }))
}

/// Compound instance: each hypothesis is the convex hull of its vertex
/// distributions over a shared ordered ground set.
#[derive(Debug, Clone)]
pub struct CompoundInstance {
    pub ground_set: Vec<String>,
    pub h0_vertices: Vec<FiniteDist>,
    pub h1_vertices: Vec<FiniteDist>,
    /// Certified game value; 0 until solve_event_game runs.
    pub alpha: f64,
}

impl CompoundInstance {
    pub fn new(
        ground_set: Vec<String>,
        h0_vertices: Vec<FiniteDist>,
        h1_vertices: Vec<FiniteDist>,
    ) -> Result<Self> {
        if h0_vertices.is_empty() || h1_vertices.is_empty() {
            return Err(LdpError::EmptySupport);
        }
        for v in h0_vertices.iter().chain(&h1_vertices) {
            if v.support() != ground_set.as_slice() {
                return Err(LdpError::DomainMismatch(
                    "hull vertex support differs from ground set".into(),
                ));
            }
        }
        Ok(Self {
            ground_set,
            h0_vertices,
            h1_vertices,
            alpha: 0.0,
        })
    }
}

/// A distribution over events (subsets of the ground set) separating the
/// two hulls: E_P[score] - E_Q[score] >= value for every vertex pair.
#[derive(Debug, Clone)]
pub struct EventDistribution {
    pub ground_set: Vec<String>,
    pub events: Vec<Vec<String>>,
    pub weights: Vec<f64>,
    /// Certified (exact best-response) game value.
    pub value: f64,
}

impl EventDistribution {
    /// score(x) = weighted membership of x across events, in [0, 1].
    pub fn score_table(&self) -> Vec<f64> {
        self.ground_set
            .iter()
            .map(|x| {
                self.events
                    .iter()
                    .zip(&self.weights)
                    .filter(|(e, _)| e.contains(x))
                    .map(|(_, w)| w)
                    .sum()
            })
            .collect()
    }
}

const GROUND_SET_LIMIT: usize = 16;
const SIMPLEX_MAX_PIVOTS: u64 = 1_000_000;
const PIVOT_EPS: f64 = 1e-9;

/// Bland's-rule pivots on a dense tableau: max cost over basis-feasible
/// points of a x = rhs, x >= 0. `enterable` bounds the entering columns.
fn pivot_loop(
    tab: &mut [Vec<f64>],
    basis: &mut [usize],
    cost: &[f64],
    enterable: usize,
    budget: &mut u64,
) -> Result<()> {
    let m = tab.len();
    let width = tab[0].len();
    loop {
        // Bland: smallest-index column with positive reduced cost
        let mut enter = None;
        for j in 0..enterable {
            let mut z = 0.0;
            for i in 0..m {
                z += cost[basis[i]] * tab[i][j];
            }
            if cost[j] - z > PIVOT_EPS {
                enter = Some(j);
                break;
            }
        }
        let Some(j) = enter else { return Ok(()) };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            if tab[i][j] > PIVOT_EPS {
                let ratio = tab[i][width - 1] / tab[i][j];
                let better = ratio < best - PIVOT_EPS
                    || (ratio < best + PIVOT_EPS
                        && leave.is_some_and(|l| basis[i] < basis[l]));
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            return Err(LdpError::InvalidParameter("unbounded linear program".into()));
        };
        if *budget == 0 {
            return Err(LdpError::SolverConvergence {
                iters: SIMPLEX_MAX_PIVOTS,
                gap: f64::NAN,
            });
        }
        *budget -= 1;
        let piv = tab[r][j];
        for v in tab[r].iter_mut() {
            *v /= piv;
        }
        for i in 0..m {
            if i != r && tab[i][j].abs() > 0.0 {
                let f = tab[i][j];
                for k in 0..width {
                    tab[i][k] -= f * tab[r][k];
                }
            }
        }
        basis[r] = j;
    }
}

/// Two-phase simplex: max c x s.t. a x = b, x >= 0, b >= 0.
/// Returns (x, duals y = c_B B^{-1}).
fn simplex_max(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = a.len();
    let n = c.len();
    let width = n + m + 1;
    let mut tab: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut row = vec![0.0; width];
            row[..n].copy_from_slice(&a[i]);
            row[n + i] = 1.0; // artificial
            row[width - 1] = b[i];
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut budget = SIMPLEX_MAX_PIVOTS;

    let mut phase1 = vec![0.0; n + m];
    for v in phase1[n..].iter_mut() {
        *v = -1.0;
    }
    pivot_loop(&mut tab, &mut basis, &phase1, n + m, &mut budget)?;
    let infeas: f64 = basis
        .iter()
        .zip(tab.iter())
        .filter(|(&bv, _)| bv >= n)
        .map(|(_, row)| row[width - 1])
        .sum();
    if infeas > 1e-7 {
        return Err(LdpError::InvalidParameter("infeasible linear program".into()));
    }

    let mut phase2 = vec![0.0; n + m];
    phase2[..n].copy_from_slice(c);
    // artificials may not re-enter
    pivot_loop(&mut tab, &mut basis, &phase2, n, &mut budget)?;

    let mut x = vec![0.0; n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab[i][width - 1];
        }
    }
    // artificial column i holds B^{-1} e_i, so duals price out through it
    let duals = (0..m)
        .map(|i| {
            (0..m)
                .map(|k| phase2[basis[k]] * tab[k][n + i])
                .sum::<f64>()
        })
        .collect();
    Ok((x, duals))
}

/// Solve the event game sup_{S over events} inf_{vertex pairs}
/// E_S[P(E) - Q(E)] exactly over the 2^|X| enumerated events, with an
/// exact best-response duality certificate.
///
/// The returned value is the certified inf-player best response against
/// the returned S; the gap to the dual upper bound must be <= tol.
pub fn solve_event_game(inst: &CompoundInstance, tol: f64) -> Result<EventDistribution> {
    if tol <= 0.0 {
        return Err(LdpError::InvalidParameter(format!("tol {tol} <= 0")));
    }
    let k = inst.ground_set.len();
    if k > GROUND_SET_LIMIT {
        return Err(LdpError::IntractableGroundSet(k));
    }
    let n_events = 1usize << k;
    // per-pair signed mass differences
    let mut diffs: Vec<Vec<f64>> = Vec::new();
    for p in &inst.h0_vertices {
        for q in &inst.h1_vertices {
            diffs.push(
                (0..k)
                    .map(|x| p.probs()[x] - q.probs()[x])
                    .collect(),
            );
        }
    }
    let n_pairs = diffs.len();
    // payoff[e][j] = P_j(E) - Q_j(E), built by lowest-bit recursion
    let mut payoff: Vec<Vec<f64>> = vec![vec![0.0; n_pairs]; n_events];
    for e in 1..n_events {
        let low = e.trailing_zeros() as usize;
        let rest = e & (e - 1);
        for j in 0..n_pairs {
            payoff[e][j] = payoff[rest][j] + diffs[j][low];
        }
    }
    // LP: max v s.t. for each pair j: sum_E (payoff+2) w_E - v - s_j = 0;
    // sum_E w_E = 1. The +2 shift keeps v > 0 so v >= 0 is harmless.
    let n_vars = n_events + 1 + n_pairs;
    let mut a: Vec<Vec<f64>> = Vec::with_capacity(n_pairs + 1);
    for j in 0..n_pairs {
        let mut row = vec![0.0; n_vars];
        for e in 0..n_events {
            row[e] = payoff[e][j] + 2.0;
        }
        row[n_events] = -1.0;
        row[n_events + 1 + j] = -1.0;
        a.push(row);
    }
    let mut sum_row = vec![0.0; n_vars];
    for v in sum_row[..n_events].iter_mut() {
        *v = 1.0;
    }
    a.push(sum_row);
    let mut b = vec![0.0; n_pairs + 1];
    b[n_pairs] = 1.0;
    let mut c = vec![0.0; n_vars];
    c[n_events] = 1.0;

    let (x, duals) = simplex_max(&a, &b, &c)?;

    let total_w: f64 = x[..n_events].iter().sum();
    if total_w <= 0.0 {
        return Err(LdpError::SolverConvergence {
            iters: SIMPLEX_MAX_PIVOTS,
            gap: f64::INFINITY,
        });
    }
    let w: Vec<f64> = x[..n_events].iter().map(|v| v / total_w).collect();
    // exact lower certificate: inf player's best response to w
    let value = (0..n_pairs)
        .map(|j| {
            (0..n_events)
                .map(|e| w[e] * payoff[e][j])
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min);
    // exact upper bound: sup player's best response to the dual mixture
    let mut lambda: Vec<f64> = duals[..n_pairs].iter().map(|&y| (-y).max(0.0)).collect();
    let lsum: f64 = lambda.iter().sum();
    let upper = if lsum > 0.0 {
        for l in lambda.iter_mut() {
            *l /= lsum;
        }
        (0..k)
            .map(|xi| {
                let d: f64 = (0..n_pairs).map(|j| lambda[j] * diffs[j][xi]).sum();
                d.max(0.0)
            })
            .sum::<f64>()
    } else {
        f64::INFINITY
    };
    let gap = upper - value;
    if !(gap <= tol) {
        return Err(LdpError::SolverConvergence {
            iters: SIMPLEX_MAX_PIVOTS,
            gap,
        });
    }
    if value <= tol {
        return Err(LdpError::DegenerateInstance { value, tol });
    }
    let mut events = Vec::new();
    let mut weights = Vec::new();
    for (e, &we) in w.iter().enumerate() {
        if we > 1e-12 {
            events.push(
                (0..k)
                    .filter(|x| e >> x & 1 == 1)
                    .map(|x| inst.ground_set[x].clone())
                    .collect(),
            );
            weights.push(we);
        }
    }
    let wsum: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= wsum;
    }
    Ok(EventDistribution {
        ground_set: inst.ground_set.clone(),
        events,
        weights,
        value,
    })
}

/// Laplace-channel compound test: each user publishes its event score plus
/// Lap(1/eps) noise; the analyst compares the mean against the midpoint of
/// the two hulls' nearest expected scores.
pub fn compound_test(
    inst: &CompoundInstance,
    s: &EventDistribution,
    eps: f64,
    n: u64,
    true_dist: &FiniteDist,
    rng: &mut SeededRng,
) -> Result<Hypothesis> {
    if n < 1 {
        return Err(LdpError::InvalidParameter("n < 1".into()));
    }
    if eps <= 0.0 {
        return Err(LdpError::InvalidParameter(format!("eps {eps} <= 0")));
    }
    let scores = s.score_table();
    let expect = |p: &FiniteDist| -> f64 {
        p.probs().iter().zip(&scores).map(|(pr, sc)| pr * sc).sum()
    };
    let h0_min = inst
        .h0_vertices
        .iter()
        .map(expect)
        .fold(f64::INFINITY, f64::min);
    let h1_max = inst
        .h1_vertices
        .iter()
        .map(expect)
        .fold(f64::NEG_INFINITY, f64::max);
    let threshold = (h0_min + h1_max) / 2.0;
    let mut sum = 0.0;
    for _ in 0..n {
        let xi = true_dist.sample_index(rng);
        sum += scores[xi] + laplace_sample(1.0 / eps, rng);
    }
    let mean = sum / n as f64;
    Ok(if mean >= threshold {
        Hypothesis::H0
    } else {
        Hypothesis::H1
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::classify;

    fn bern(p: f64) -> FiniteDist {
        FiniteDist::bernoulli(p).unwrap()
    }

    #[test]
    fn laplace_density_ratio_bounded_by_sensitivity() {
        let eps = 1.3;
        let scale = 1.0 / eps;
        let mut y = 0.0;
        while y <= 1.0 {
            let mut yp = 0.0;
            while yp <= 1.0 {
                let mut x = -5.0;
                while x <= 6.0 {
                    let ratio = laplace_density(x, y, scale) / laplace_density(x, yp, scale);
                    assert!(ratio <= ((y - yp).abs() * eps).exp() + 1e-9);
                    assert!(ratio <= eps.exp() + 1e-9);
                    x += 0.25;
                }
                yp += 0.1;
            }
            y += 0.1;
        }
    }

    #[test]
    fn laplace_sampling_moments() {
        let mut rng = SeededRng::new(71);
        let scale = 0.7;
        let n = 200_000;
        let mut sum = 0.0;
        let mut within = 0u64;
        for _ in 0..n {
            let x = laplace_sample(scale, &mut rng);
            sum += x;
            // |X| <= b ln 2 is the interquartile event, probability 1/2
            within += u64::from(x.abs() <= scale * 2.0f64.ln());
        }
        assert!((sum / n as f64).abs() < 0.01);
        assert!((within as f64 / n as f64 - 0.5).abs() < 0.005);
    }

    #[test]
    fn debias_inverts_the_expectation_map() {
        for &eps in &[0.3f64, 1.0, 2.5] {
            let e = eps.exp();
            let n = 50u64;
            for truth in 0..=n {
                let expected_count = (truth as f64 * (e - 1.0) + n as f64) / (e + 1.0);
                let back = debias(expected_count, n, eps);
                assert!((back - truth as f64).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn debias_endpoints_and_large_eps() {
        let eps = 1.0f64;
        let e = eps.exp();
        let n = 100u64;
        assert!(debias(n as f64 / (e + 1.0), n, eps).abs() < 1e-9);
        assert!((debias(n as f64 * e / (e + 1.0), n, eps) - n as f64).abs() < 1e-9);
        assert!((debias(73.0, n, 30.0) - 73.0).abs() < 1e-6);
    }

    #[test]
    fn debias_preserves_count_argmax() {
        let eps = 0.8;
        let n = 50u64;
        for ones in 0..=n {
            let zeros = n - ones;
            let raw = ones > zeros;
            let deb = debias(ones as f64, n, eps) > debias(zeros as f64, n, eps);
            assert_eq!(raw, deb, "ones = {ones}");
        }
    }

    #[test]
    fn near_noiseless_disjoint_test_is_almost_perfect() {
        let support = vec!["a".into(), "b".into()];
        let p0 = FiniteDist::point_mass(support.clone(), "a").unwrap();
        let p1 = FiniteDist::point_mass(support, "b").unwrap();
        let inst = SimpleTestInstance::new(p0.clone(), p1).unwrap();
        let root = SeededRng::new(73);
        let mut correct = 0;
        for t in 0..1000u64 {
            let mut rng = root.child(t);
            if simple_test(&inst, 20.0, 10, &p0, &mut rng).unwrap() == Hypothesis::H0 {
                correct += 1;
            }
        }
        assert!(correct >= 998, "{correct}/1000");
    }

    #[test]
    fn calibrated_bernoulli_test_beats_two_thirds() {
        let inst = SimpleTestInstance::new(bern(0.4), bern(0.6)).unwrap();
        assert!((inst.alpha - 0.2).abs() < 1e-12);
        let eps = 1.0f64;
        let n = (16.0 / (eps * eps * inst.alpha * inst.alpha)).ceil() as u64;
        let root = SeededRng::new(79);
        let mut correct = 0;
        for t in 0..500u64 {
            let mut rng = root.child(t);
            if simple_test(&inst, eps, n, &inst.p1, &mut rng).unwrap() == Hypothesis::H1 {
                correct += 1;
            }
        }
        assert!(correct as f64 / 500.0 >= 2.0 / 3.0, "{correct}/500");
    }

    #[test]
    fn vote_protocol_is_noninteractive() {
        let inst = SimpleTestInstance::new(bern(0.4), bern(0.6)).unwrap();
        let p = simple_test_protocol(&inst, 1.0, 3).unwrap();
        let rep = classify(&p, 3, 1.0).unwrap();
        assert!(rep.is_noninteractive);
        assert!(rep.is_sequential);
        assert!((rep.k_worst - 1.0).abs() < 1e-9);
    }

    fn dist3(probs: [f64; 3]) -> FiniteDist {
        FiniteDist::new(
            vec!["a".into(), "b".into(), "c".into()],
            probs.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn singleton_hulls_recover_tv_with_the_tv_event() {
        let p = FiniteDist::new(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec![0.4, 0.3, 0.2, 0.1],
        )
        .unwrap();
        let q = FiniteDist::new(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec![0.1, 0.2, 0.3, 0.4],
        )
        .unwrap();
        let tv = tv_distance(&p, &q);
        let inst = CompoundInstance::new(
            p.support().to_vec(),
            vec![p.clone()],
            vec![q.clone()],
        )
        .unwrap();
        let s = solve_event_game(&inst, 1e-6).unwrap();
        assert!((s.value - tv).abs() < 1e-6, "value {} tv {tv}", s.value);
        // brute-force single-event oracle: best event is {x: p(x) > q(x)}
        let oracle = (0..16)
            .map(|e: u32| {
                (0..4)
                    .filter(|x| e >> x & 1 == 1)
                    .map(|x| p.probs()[x] - q.probs()[x])
                    .sum::<f64>()
            })
            .fold(0.0, f64::max);
        assert!((oracle - tv).abs() < 1e-12);
    }

    #[test]
    fn identical_hypotheses_are_degenerate() {
        let p = dist3([0.5, 0.3, 0.2]);
        let inst =
            CompoundInstance::new(p.support().to_vec(), vec![p.clone()], vec![p.clone()]).unwrap();
        assert!(matches!(
            solve_event_game(&inst, 1e-6),
            Err(LdpError::DegenerateInstance { .. })
        ));
    }

    #[test]
    fn two_vertex_instance_matches_hand_value() {
        // H0 = hull{(.6,.2,.2), (.2,.6,.2)}, H1 = {(.2,.2,.6)}: the event
        // {a,b} gives gap 0.4 against both vertices, and the balanced hull
        // mixture caps the value at 0.4
        let inst = CompoundInstance::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![dist3([0.6, 0.2, 0.2]), dist3([0.2, 0.6, 0.2])],
            vec![dist3([0.2, 0.2, 0.6])],
        )
        .unwrap();
        let s = solve_event_game(&inst, 1e-4).unwrap();
        assert!((s.value - 0.4).abs() < 1e-4, "value {}", s.value);
        // certificate re-check: every vertex pair separated by >= value
        let scores = s.score_table();
        for p in &inst.h0_vertices {
            for q in &inst.h1_vertices {
                let gap: f64 = (0..3)
                    .map(|x| (p.probs()[x] - q.probs()[x]) * scores[x])
                    .sum();
                assert!(gap >= s.value - 1e-9);
            }
        }
    }

    #[test]
    fn oversized_ground_set_rejected() {
        let support: Vec<String> = (0..17).map(|i| format!("x{i}")).collect();
        let u = FiniteDist::uniform(support.clone()).unwrap();
        let p = FiniteDist::point_mass(support.clone(), "x0").unwrap();
        let inst = CompoundInstance::new(support, vec![u], vec![p]).unwrap();
        assert!(matches!(
            solve_event_game(&inst, 1e-4),
            Err(LdpError::IntractableGroundSet(17))
        ));
    }

    #[test]
    fn compound_test_near_noiseless_is_correct() {
        let inst = CompoundInstance::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![dist3([0.6, 0.2, 0.2]), dist3([0.2, 0.6, 0.2])],
            vec![dist3([0.2, 0.2, 0.6])],
        )
        .unwrap();
        let s = solve_event_game(&inst, 1e-4).unwrap();
        let root = SeededRng::new(83);
        let mut correct = 0;
        for t in 0..200u64 {
            let mut rng = root.child(t);
            let out = compound_test(&inst, &s, 20.0, 50, &inst.h1_vertices[0], &mut rng).unwrap();
            correct += u32::from(out == Hypothesis::H1);
        }
        assert!(correct >= 198, "{correct}/200");
    }

    #[test]
    fn compound_test_calibrated_singleton_hulls() {
        let p = dist3([0.5, 0.3, 0.2]);
        let q = dist3([0.2, 0.3, 0.5]);
        let alpha = tv_distance(&p, &q);
        let inst =
            CompoundInstance::new(p.support().to_vec(), vec![p.clone()], vec![q]).unwrap();
        let s = solve_event_game(&inst, 1e-6).unwrap();
        assert!((s.value - alpha).abs() < 1e-6);
        let eps = 1.0f64;
        let n = (64.0 / (eps * eps * alpha * alpha)).ceil() as u64;
        let root = SeededRng::new(89);
        let mut correct = 0;
        for t in 0..500u64 {
            let mut rng = root.child(t);
            let out = compound_test(&inst, &s, eps, n, &p, &mut rng).unwrap();
            correct += u32::from(out == Hypothesis::H0);
        }
        assert!(correct as f64 / 500.0 >= 2.0 / 3.0, "{correct}/500");
    }

    #[test]
    fn one_sample_tiny_gap_is_a_coin_flip() {
        let p = dist3([0.34, 0.33, 0.33]);
        let q = dist3([0.33, 0.33, 0.34]);
        let inst =
            CompoundInstance::new(p.support().to_vec(), vec![p.clone()], vec![q]).unwrap();
        let s = solve_event_game(&inst, 1e-6).unwrap();
        let root = SeededRng::new(97);
        let mut h0 = 0u64;
        for t in 0..4000u64 {
            let mut rng = root.child(t);
            if compound_test(&inst, &s, 0.5, 1, &p, &mut rng).unwrap() == Hypothesis::H0 {
                h0 += 1;
            }
        }
        let rate = h0 as f64 / 4000.0;
        assert!((0.35..=0.65).contains(&rate), "rate {rate}");
    }
}
