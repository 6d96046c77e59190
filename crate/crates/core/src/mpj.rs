//! Multi-party pointer jumping: the labeled s-ary tree problem whose
//! root-to-leaf path is recovered by a fully interactive eps-LDP protocol
//! in which every user answers one bit per level.

use crate::error::{LdpError, Result};
use crate::protocol::{classify, NextRound, Protocol, Registry, Transcript};
use crate::randomizer::Randomizer;
use crate::rng::SeededRng;

/// Memory cap on total tree cells across levels.
const MAX_CELLS: u64 = 100_000_000;

/// An instance: depth-d tree of arity s, level i holding s^{i-1} pointers,
/// and the induced root-to-leaf path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MpjInstance {
    pub d: usize,
    pub s: u32,
    /// levels[i] has s^i entries, each in 0..s.
    pub levels: Vec<Vec<u32>>,
    pub path: Vec<u32>,
}

/// Path recursion: descend one level at a time, indexing level i by the
/// base-s number formed by the pointers chosen so far (0-based).
pub fn compute_path(levels: &[Vec<u32>], s: u32) -> Vec<u32> {
    let mut path = Vec::with_capacity(levels.len());
    let mut idx = 0usize;
    for level in levels {
        let p = level[idx];
        path.push(p);
        idx = idx * s as usize + p as usize;
    }
    path
}

/// Default arity from the separation construction.
pub fn default_arity(d: usize) -> u32 {
    (d as u32).pow(4)
}

/// A uniformly random instance.
pub fn random_instance(d: usize, s: u32, rng: &mut SeededRng) -> Result<MpjInstance> {
    if d < 1 || s < 2 {
        return Err(LdpError::InvalidParameter(format!("d = {d}, s = {s}")));
    }
    let mut cells = 0u64;
    let mut size = 1u64;
    for _ in 0..d {
        cells = cells
            .checked_add(size)
            .ok_or_else(|| LdpError::SizeOverflow(format!("d = {d}, s = {s}")))?;
        size = size
            .checked_mul(s as u64)
            .ok_or_else(|| LdpError::SizeOverflow(format!("d = {d}, s = {s}")))?;
        if cells > MAX_CELLS {
            return Err(LdpError::SizeOverflow(format!(
                "instance needs {cells}+ cells, cap {MAX_CELLS}"
            )));
        }
    }
    let mut levels = Vec::with_capacity(d);
    let mut len = 1usize;
    for _ in 0..d {
        let level: Vec<u32> = (0..len).map(|_| rng.uniform_u64(s as u64) as u32).collect();
        levels.push(level);
        len *= s as usize;
    }
    let path = compute_path(&levels, s);
    Ok(MpjInstance { d, s, levels, path })
}

/// A user's datum: level 0 is the uninformative dummy, level l in 1..=d
/// carries that level's full pointer table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MpjDatum {
    pub level: usize,
    pub payload: Vec<u32>,
}

/// Level draw for the data distribution: dummy with probability 1/2, else
/// uniform on 1..=d.
pub fn sample_level(d: usize, rng: &mut SeededRng) -> usize {
    if rng.gen_bool(0.5) {
        0
    } else {
        1 + rng.uniform_u64(d as u64) as usize
    }
}

pub fn sample_datum(inst: &MpjInstance, rng: &mut SeededRng) -> MpjDatum {
    let level = sample_level(inst.d, rng);
    let payload = if level == 0 {
        Vec::new()
    } else {
        inst.levels[level - 1].clone()
    };
    MpjDatum { level, payload }
}

/// Bits per pointer: ceil(log2 s).
pub fn group_count(s: u32) -> usize {
    (32 - (s - 1).leading_zeros()) as usize
}

/// The solver's per-group cohort size from the upper-bound theorem,
/// 512 d^2 ln(d) (e^eps+1)^2/(e^eps-1)^2, with ln(d) floored at 1 so the
/// formula stays usable at d = 1.
pub fn paper_m(d: usize, eps: f64) -> usize {
    let ratio = (eps.exp() + 1.0) / (eps.exp() - 1.0);
    (512.0 * (d * d) as f64 * (d as f64).ln().max(1.0) * ratio * ratio).ceil() as usize
}

fn majority(ones: u64, total: u64) -> u32 {
    // ties break toward 1
    u32::from(2 * ones >= total)
}

/// Fully interactive solver: u = ceil(log2 s) groups of m users, all drawn
/// once up front; in round r the users holding level r answer randomized
/// response on their group's bit of the pointer at the currently decoded
/// index, everyone else sends a fair coin. Group majorities assemble each
/// decoded pointer most-significant-group-first.
///
/// Returns the decoded path and whether it matches the instance path.
pub fn solve_full(inst: &MpjInstance, eps: f64, m: usize, rng: &mut SeededRng) -> (Vec<u32>, bool) {
    let u = group_count(inst.s);
    let n = u * m;
    let user_levels: Vec<u8> = (0..n).map(|_| sample_level(inst.d, rng) as u8).collect();
    let q = eps.exp() / (eps.exp() + 1.0);
    let mut decoded = Vec::with_capacity(inst.d);
    let mut idx = 0usize;
    for r in 1..=inst.d {
        let v = inst.levels[r - 1][idx];
        let mut pointer = 0u32;
        for g in 1..=u {
            let b = (v >> (u - g)) & 1;
            let mut ones = 0u64;
            for j in 0..m {
                let level = user_levels[(g - 1) * m + j];
                let bit = if level as usize == r {
                    if rng.gen_bool(q) {
                        b
                    } else {
                        1 - b
                    }
                } else {
                    u32::from(rng.gen_bool(0.5))
                };
                ones += bit as u64;
            }
            pointer = (pointer << 1) | majority(ones, m as u64);
        }
        let pointer = pointer.min(inst.s - 1);
        decoded.push(pointer);
        idx = idx * inst.s as usize + pointer as usize;
    }
    let success = decoded == inst.path;
    (decoded, success)
}

/// Sequentially interactive comparison harness: a fresh cohort of
/// u * m_per_level users answers each level, so each user speaks once.
/// Provided for empirical comparison only.
pub fn solve_sequential_cohorts(
    inst: &MpjInstance,
    eps: f64,
    m_per_level: usize,
    rng: &mut SeededRng,
) -> (Vec<u32>, bool) {
    let u = group_count(inst.s);
    let q = eps.exp() / (eps.exp() + 1.0);
    let mut decoded = Vec::with_capacity(inst.d);
    let mut idx = 0usize;
    for r in 1..=inst.d {
        let v = inst.levels[r - 1][idx];
        let mut pointer = 0u32;
        for g in 1..=u {
            let b = (v >> (u - g)) & 1;
            let mut ones = 0u64;
            for _ in 0..m_per_level {
                let level = sample_level(inst.d, rng);
                let bit = if level == r {
                    if rng.gen_bool(q) {
                        b
                    } else {
                        1 - b
                    }
                } else {
                    u32::from(rng.gen_bool(0.5))
                };
                ones += bit as u64;
            }
            pointer = (pointer << 1) | majority(ones, m_per_level as u64);
        }
        let pointer = pointer.min(inst.s - 1);
        decoded.push(pointer);
        idx = idx * inst.s as usize + pointer as usize;
    }
    let success = decoded == inst.path;
    (decoded, success)
}

/// The solver expressed as an engine protocol over datum symbols
/// {"dummy", "l1", ..., "ld"}, for exhaustive audits and classification.
/// Only viable at tiny (d, s, m): the registry enumerates every decoded
/// index and the transcript tree has 2^(d*u*m) leaves.
pub fn mpj_engine_protocol(inst: &MpjInstance, eps: f64, m: usize) -> Result<Protocol> {
    let d = inst.d;
    let s = inst.s;
    let u = group_count(s);
    let n = u * m;
    if d * n > 24 {
        return Err(LdpError::SizeOverflow(format!(
            "engine protocol with {} rounds is not enumerable",
            d * n
        )));
    }
    let mut domain: Vec<String> = vec!["dummy".into()];
    for l in 1..=d {
        domain.push(format!("l{l}"));
    }
    let q = eps.exp() / (eps.exp() + 1.0);
    let mut reg = Registry::new();
    for r in 1..=d {
        for g in 1..=u {
            for (idx, &v) in inst.levels[r - 1].iter().enumerate() {
                let b = (v >> (u - g)) & 1;
                let rows: Vec<Vec<f64>> = domain
                    .iter()
                    .map(|x| {
                        if x == &format!("l{r}") {
                            if b == 1 {
                                vec![1.0 - q, q]
                            } else {
                                vec![q, 1.0 - q]
                            }
                        } else {
                            vec![0.5, 0.5]
                        }
                    })
                    .collect();
                reg.insert(
                    format!("mpj_r{r}_g{g}_i{idx}"),
                    Randomizer::from_rows(
                        domain.clone(),
                        vec!["0".into(), "1".into()],
                        rows,
                        eps,
                        0.0,
                    )?,
                );
            }
        }
    }
    let step = move |t: &Transcript| -> Option<NextRound> {
        let pos = t.len();
        if pos >= d * u * m {
            return None;
        }
        let r = pos / (u * m) + 1;
        let within = pos % (u * m);
        let g = within / m + 1;
        let j = within % m;
        // decode the index from completed levels' group majorities
        let mut idx = 0usize;
        for rp in 1..r {
            let mut pointer = 0u32;
            for gp in 1..=u {
                let start = (rp - 1) * u * m + (gp - 1) * m;
                let ones = (start..start + m)
                    .filter(|&k| t.rounds[k].message == "1")
                    .count() as u64;
                pointer = (pointer << 1) | majority(ones, m as u64);
            }
            idx = idx * s as usize + pointer.min(s - 1) as usize;
        }
        Some(NextRound {
            user: (g - 1) * m + j,
            randomizer_id: format!("mpj_r{r}_g{g}_i{idx}"),
            eps,
            delta: 0.0,
        })
    };
    Ok(Protocol::new(reg, n, step))
}

/// Per-user compositionality factor of the solver at depth d: the
/// worst-case sum of per-round minimal eps over a user's d answers,
/// divided by eps, computed by exhaustive classification of the engine
/// protocol at m = 1. Grows linearly in d.
pub fn compositionality_of_mpj(d: usize, s: u32, eps: f64) -> Result<f64> {
    let mut rng = SeededRng::new(0);
    let inst = random_instance(d, s, &mut rng)?;
    let p = mpj_engine_protocol(&inst, eps, 1)?;
    let u = group_count(s);
    Ok(classify(&p, u, eps)?.k_worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::audit_protocol;

    fn instance(d: usize, s: u32, levels: Vec<Vec<u32>>) -> MpjInstance {
        let path = compute_path(&levels, s);
        MpjInstance { d, s, levels, path }
    }

    #[test]
    fn depth_one_path_is_the_root_pointer() {
        let inst = instance(1, 2, vec![vec![1]]);
        assert_eq!(inst.path, vec![1]);
    }

    #[test]
    fn worked_binary_instance_path() {
        let inst = instance(3, 2, vec![vec![0], vec![1, 0], vec![0, 1, 1, 0]]);
        assert_eq!(inst.path, vec![0, 1, 1]);
    }

    #[test]
    fn exhaustive_depth_two_arity_three_indices_in_bounds() {
        for z1 in 0..3u32 {
            for code in 0..27u32 {
                let z2 = vec![code / 9, (code / 3) % 3, code % 3];
                let inst = instance(2, 3, vec![vec![z1], z2.clone()]);
                assert_eq!(inst.path[0], z1);
                assert_eq!(inst.path[1], z2[z1 as usize]);
            }
        }
    }

    #[test]
    fn random_instance_path_round_trips() {
        let mut rng = SeededRng::new(13);
        for _ in 0..20 {
            let inst = random_instance(3, 4, &mut rng).unwrap();
            assert_eq!(compute_path(&inst.levels, inst.s), inst.path);
            for (i, level) in inst.levels.iter().enumerate() {
                assert_eq!(level.len(), 4usize.pow(i as u32));
                assert!(level.iter().all(|&z| z < 4));
            }
        }
    }

    #[test]
    fn random_instance_rejects_oversize() {
        let mut rng = SeededRng::new(1);
        assert!(matches!(
            random_instance(10, 1000, &mut rng),
            Err(LdpError::SizeOverflow(_))
        ));
    }

    #[test]
    fn datum_distribution_matches_definition() {
        let mut rng = SeededRng::new(17);
        let inst = random_instance(1, 2, &mut rng).unwrap();
        let draws = 100_000;
        let dummies = (0..draws)
            .filter(|_| sample_datum(&inst, &mut rng).level == 0)
            .count();
        let freq = dummies as f64 / draws as f64;
        assert!((freq - 0.5).abs() < 0.006, "dummy freq {freq}");

        let inst4 = random_instance(4, 2, &mut rng).unwrap();
        let mut counts = [0u64; 5];
        for _ in 0..100_000 {
            let datum = sample_datum(&inst4, &mut rng);
            counts[datum.level] += 1;
            if datum.level == 0 {
                assert!(datum.payload.is_empty());
            } else {
                assert_eq!(datum.payload, inst4.levels[datum.level - 1]);
            }
        }
        for level in 1..=4 {
            let freq = counts[level] as f64 / 100_000.0;
            assert!((freq - 0.125).abs() < 0.004, "level {level} freq {freq}");
        }
    }

    #[test]
    fn group_count_is_bit_width() {
        assert_eq!(group_count(2), 1);
        assert_eq!(group_count(3), 2);
        assert_eq!(group_count(4), 2);
        assert_eq!(group_count(81), 7);
        assert_eq!(group_count(256), 8);
    }

    #[test]
    fn depth_one_large_m_nearly_always_succeeds() {
        let root = SeededRng::new(19);
        let mut successes = 0;
        for t in 0..100u64 {
            let mut rng = root.child(t);
            let inst = random_instance(1, 2, &mut rng).unwrap();
            let (_, ok) = solve_full(&inst, 1.0, 10_000, &mut rng);
            successes += u32::from(ok);
        }
        assert!(successes >= 99, "{successes}/100");
    }

    #[test]
    fn near_noiseless_depth_three_beats_target_rate() {
        // eps = 20 makes randomized response essentially exact
        let d = 3;
        let m = (64.0 * (d * d) as f64 * (d as f64).ln()).ceil() as usize;
        let root = SeededRng::new(23);
        let mut successes = 0;
        for t in 0..100u64 {
            let mut rng = root.child(t);
            let inst = random_instance(d, default_arity(d), &mut rng).unwrap();
            let (_, ok) = solve_full(&inst, 20.0, m, &mut rng);
            successes += u32::from(ok);
        }
        assert!(
            successes as f64 / 100.0 >= 1.0 - 1.0 / d as f64,
            "{successes}/100"
        );
    }

    #[test]
    fn success_rate_is_monotone_in_m() {
        let d = 2;
        let m0 = 40;
        let trials = 200u64;
        let mut rates = Vec::new();
        for (i, m) in [m0, 2 * m0, 4 * m0].into_iter().enumerate() {
            let root = SeededRng::new(29 + i as u64);
            let mut successes = 0u64;
            for t in 0..trials {
                let mut rng = root.child(t);
                let inst = random_instance(d, 2, &mut rng).unwrap();
                let (_, ok) = solve_full(&inst, 0.5, m, &mut rng);
                successes += u64::from(ok);
            }
            rates.push(successes as f64 / trials as f64);
        }
        // 2 sigma of a rate difference at 200 trials
        let sigma2 = 2.0 * (2.0 * 0.25 / trials as f64).sqrt();
        assert!(rates[1] >= rates[0] - sigma2, "{rates:?}");
        assert!(rates[2] >= rates[1] - sigma2, "{rates:?}");
    }

    #[test]
    fn engine_protocol_audits_to_eps() {
        let mut rng = SeededRng::new(31);
        let inst = random_instance(2, 2, &mut rng).unwrap();
        let eps = 1.0;
        let p = mpj_engine_protocol(&inst, eps, 2).unwrap();
        let report = audit_protocol(&p, 2).unwrap();
        assert!(
            report.realized_eps <= eps + 1e-9,
            "realized {}",
            report.realized_eps
        );
    }

    #[test]
    fn compositionality_grows_linearly_and_exceeds_one() {
        let eps = 1.0f64;
        let per_round = ((eps.exp() + 1.0) / 2.0).ln();
        let k1 = compositionality_of_mpj(1, 2, eps).unwrap();
        let k3 = compositionality_of_mpj(3, 2, eps).unwrap();
        assert!(k1 <= 1.0);
        assert!((k1 - per_round).abs() < 1e-9);
        assert!((k3 - 3.0 * per_round).abs() < 1e-9);
        assert!(k3 > 1.0, "k3 = {k3}");
        assert!((k3 / k1 - 3.0).abs() < 1e-6);
    }

    #[test]
    fn sequential_cohorts_run_and_report() {
        let mut rng = SeededRng::new(37);
        let inst = random_instance(2, 2, &mut rng).unwrap();
        let (decoded, _) = solve_sequential_cohorts(&inst, 1.0, 200, &mut rng);
        assert_eq!(decoded.len(), 2);
        assert!(decoded.iter().all(|&p| p < 2));
    }
}
