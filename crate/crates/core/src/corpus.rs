//! Small named protocols used throughout the verification suite.
//!
//! All corpus entries are fully interactive, use binary messages, at most
//! 3 users, at most 4 rounds, and data domains of at most 3 symbols, so
//! their transcript trees enumerate exactly in microseconds. Every round
//! randomizer has minimal eps <= 0.45 so the corpus can be compiled by the
//! reduction at declared eps as low as 0.5.

use crate::dist::FiniteDist;
use crate::protocol::{NextRound, Protocol, Registry, Transcript};
use crate::randomizer::Randomizer;

pub struct CorpusEntry {
    pub name: &'static str,
    pub protocol: Protocol,
    pub prior: FiniteDist,
    pub n: usize,
}

fn binary_uniform() -> FiniteDist {
    FiniteDist::uniform(vec!["0".into(), "1".into()]).unwrap()
}

fn base_registry() -> Registry {
    let mut reg = Registry::new();
    reg.insert("rr_a".into(), Randomizer::randomized_response(2, 0.3).unwrap());
    reg.insert("rr_b".into(), Randomizer::randomized_response(2, 0.45).unwrap());
    // asymmetric binary table, minimal eps = ln(0.5/0.4) ~ 0.223
    reg.insert(
        "skew".into(),
        Randomizer::from_rows(
            vec!["0".into(), "1".into()],
            vec!["0".into(), "1".into()],
            vec![vec![0.6, 0.4], vec![0.5, 0.5]],
            0.25,
            0.0,
        )
        .unwrap(),
    );
    reg
}

fn next(user: usize, id: &str, eps: f64) -> Option<NextRound> {
    Some(NextRound {
        user,
        randomizer_id: id.into(),
        eps,
        delta: 0.0,
    })
}

/// One user, two rounds; the second randomizer depends on the first message.
fn one_user_adaptive() -> CorpusEntry {
    let p = Protocol::new(base_registry(), 1, |t: &Transcript| match t.len() {
        0 => next(0, "rr_a", 0.3),
        1 => {
            if t.rounds[0].message == "0" {
                next(0, "rr_b", 0.45)
            } else {
                next(0, "skew", 0.25)
            }
        }
        _ => None,
    });
    CorpusEntry {
        name: "one_user_adaptive",
        protocol: p,
        prior: binary_uniform(),
        n: 1,
    }
}

/// Two users, three rounds, returning to user 0 with a randomizer chosen
/// by user 1's message.
fn two_user_return() -> CorpusEntry {
    let p = Protocol::new(base_registry(), 2, |t: &Transcript| match t.len() {
        0 => next(0, "rr_a", 0.3),
        1 => next(1, "rr_a", 0.3),
        2 => {
            if t.rounds[1].message == "1" {
                next(0, "rr_b", 0.45)
            } else {
                next(0, "skew", 0.25)
            }
        }
        _ => None,
    });
    CorpusEntry {
        name: "two_user_return",
        protocol: p,
        prior: binary_uniform(),
        n: 2,
    }
}

/// One user queried three times with the same randomizer.
fn one_user_three_rounds() -> CorpusEntry {
    let p = Protocol::new(base_registry(), 1, |t: &Transcript| {
        (t.len() < 3).then(|| next(0, "rr_a", 0.3).unwrap())
    });
    CorpusEntry {
        name: "one_user_three_rounds",
        protocol: p,
        prior: binary_uniform(),
        n: 1,
    }
}

/// Two users alternating over four rounds on a 3-symbol domain; the later
/// randomizers depend on the message parity so far.
fn alternating_three_symbol() -> CorpusEntry {
    let mut reg = Registry::new();
    // 3-symbol domain, binary range, minimal eps ~ 0.318
    reg.insert(
        "tri".into(),
        Randomizer::from_rows(
            vec!["0".into(), "1".into(), "2".into()],
            vec!["0".into(), "1".into()],
            vec![vec![0.6, 0.4], vec![0.5, 0.5], vec![0.45, 0.55]],
            0.35,
            0.0,
        )
        .unwrap(),
    );
    reg.insert(
        "tri2".into(),
        Randomizer::from_rows(
            vec!["0".into(), "1".into(), "2".into()],
            vec!["0".into(), "1".into()],
            vec![vec![0.55, 0.45], vec![0.45, 0.55], vec![0.5, 0.5]],
            0.25,
            0.0,
        )
        .unwrap(),
    );
    let p = Protocol::new(reg, 2, |t: &Transcript| match t.len() {
        0 => next(0, "tri", 0.35),
        1 => next(1, "tri", 0.35),
        2 | 3 => {
            let ones = t.rounds.iter().filter(|r| r.message == "1").count();
            let id = if ones % 2 == 0 { "tri" } else { "tri2" };
            next(t.len() % 2, id, 0.35)
        }
        _ => None,
    });
    CorpusEntry {
        name: "alternating_three_symbol",
        protocol: p,
        prior: FiniteDist::new(
            vec!["0".into(), "1".into(), "2".into()],
            vec![0.5, 0.3, 0.2],
        )
        .unwrap(),
        n: 2,
    }
}

/// Three users; the second user queried is chosen by the first message,
/// then user 0 is queried again.
fn adaptive_user_choice() -> CorpusEntry {
    let p = Protocol::new(base_registry(), 3, |t: &Transcript| match t.len() {
        0 => next(0, "rr_a", 0.3),
        1 => next(if t.rounds[0].message == "0" { 1 } else { 2 }, "rr_b", 0.45),
        2 => next(0, "skew", 0.25),
        _ => None,
    });
    CorpusEntry {
        name: "adaptive_user_choice",
        protocol: p,
        prior: binary_uniform(),
        n: 3,
    }
}

/// The d-round histogram protocol over basis-vector data: in round j the
/// queried user answers randomized response on "is my datum e_j" when it
/// is, and a fair coin otherwise. eps-LDP overall even though per-user
/// round eps sums grow with d.
pub fn example2_histogram(d: usize, eps: f64, n: usize) -> (Protocol, FiniteDist) {
    assert!(d >= 1 && n >= 1 && eps > 0.0);
    let domain: Vec<String> = (1..=d).map(|j| format!("e{j}")).collect();
    let q = eps.exp() / (eps.exp() + 1.0);
    let mut reg = Registry::new();
    // minimal eps of each round table: the binding ratio is the "0" column,
    // 0.5 / (1-q) = (e^eps + 1)/2
    let round_eps = ((eps.exp() + 1.0) / 2.0).ln();
    for j in 1..=d {
        let rows = (1..=d)
            .map(|x| {
                if x == j {
                    vec![1.0 - q, q]
                } else {
                    vec![0.5, 0.5]
                }
            })
            .collect();
        reg.insert(
            format!("hist_r{j}"),
            Randomizer::from_rows(
                domain.clone(),
                vec!["0".into(), "1".into()],
                rows,
                round_eps,
                0.0,
            )
            .unwrap(),
        );
    }
    let p = Protocol::new(reg, n, move |t: &Transcript| {
        let step = t.len();
        if step >= d * n {
            return None;
        }
        let j = step / n + 1;
        next(step % n, &format!("hist_r{j}"), round_eps)
    });
    let prior = FiniteDist::uniform(domain).unwrap();
    (p, prior)
}

/// Example-2 histogram at corpus scale: d = 2, one user, two rounds.
fn example2_small() -> CorpusEntry {
    let (p, prior) = example2_histogram(2, 0.4, 1);
    CorpusEntry {
        name: "example2_d2_n1",
        protocol: p,
        prior,
        n: 1,
    }
}

/// The verification corpus of fully interactive protocols.
pub fn corpus() -> Vec<CorpusEntry> {
    vec![
        one_user_adaptive(),
        two_user_return(),
        one_user_three_rounds(),
        alternating_three_symbol(),
        adaptive_user_choice(),
        example2_small(),
    ]
}
