//! The cabled representation `ρ_K`, where every lane becomes `K` parallel
//! lanes carrying at most one ball each, and only the number of balls per
//! group of `K` lanes is tracked.
//!
//! At a cabled crossing `σ_i` with `a` balls in the over group (entering at
//! position `i`) and `b` in the under group, exactly `c` balls fall with
//! probability [`falling_probability`]`(K, a, b, c)`. The over group leaves at
//! position `i + 1` with `a - c` balls and the under group leaves at position
//! `i` with `b + c`.
//!
//! [`crossing_oracle`] recomputes the same distribution by simulating the
//! `K²` individual lane crossings one at a time.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::braid::{check_generator, BraidWord};
use crate::error::{precondition, Result};
use crate::multiball::rho_matrix;
use crate::qpoly::{falling_probability, QPoly};
use crate::report::{CheckReport, Mismatch, Value};
use crate::transition::{push_word, Capacity, Outcomes, StateSpace, TransitionMatrix};

/// Largest cable width the lane-level enumeration accepts.
pub const MAX_ORACLE_CABLE: u32 = 4;

/// Ball counts per group of `cable` parallel lanes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CableState {
    counts: Vec<u32>,
    cable: u32,
}

impl CableState {
    pub fn new(counts: Vec<u32>, cable: u32) -> Result<Self> {
        StateSpace::new(counts.len(), cable)?.validate(&counts)?;
        Ok(CableState { counts, cable })
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn cable(&self) -> u32 {
        self.cable
    }
}

/// `table[a][b]` lists `(c, f^a_b(c))` for the nonzero probabilities.
type FallTable = Vec<Vec<Vec<(u32, QPoly)>>>;

fn fall_table(cable: u32) -> Result<FallTable> {
    (0..=cable)
        .map(|a| {
            (0..=cable)
                .map(|b| {
                    (0..=a.min(cable - b))
                        .map(|c| Ok((c, falling_probability(cable, a, b, c)?)))
                        .filter(|r| !matches!(r, Ok((_, p)) if p.is_zero()))
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn cabled_rule(table: &FallTable, i: usize, counts: &[u32]) -> Outcomes {
    let (a, b) = (counts[i - 1], counts[i]);
    table[a as usize][b as usize]
        .iter()
        .map(|(c, p)| {
            let mut out = counts.to_vec();
            out[i - 1] = b + c;
            out[i] = a - c;
            (out, p.clone())
        })
        .collect()
}

/// Distribution of group counts after one cabled crossing `σ_i`, by
/// increasing number of fallen balls.
pub fn apply_generator_cabled(i: usize, state: &CableState) -> Result<Vec<(CableState, QPoly)>> {
    check_generator(i, state.counts.len())?;
    let table = fall_table(state.cable)?;
    Ok(cabled_rule(&table, i, &state.counts)
        .into_iter()
        .map(|(counts, p)| {
            (
                CableState {
                    counts,
                    cable: state.cable,
                },
                p,
            )
        })
        .collect())
}

/// The matrix `ρ_K(word)` on `(K + 1)^n` group-count states.
pub fn rho_cabled_matrix(word: &BraidWord, cable: u32) -> Result<TransitionMatrix> {
    let space = StateSpace::new(word.strands(), cable)?;
    let table = fall_table(cable)?;
    let matrix = push_word(space, word.letters(), |i, counts| {
        cabled_rule(&table, i, counts)
    });
    Ok(TransitionMatrix::new(space, Capacity::Cable(cable), matrix))
}

/// Probabilities that exactly `c` balls fall at one cabled crossing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FallDistribution {
    pub cable: u32,
    pub a: u32,
    pub b: u32,
    /// Nonzero probabilities keyed by `c`.
    pub dist: BTreeMap<u32, QPoly>,
}

impl FallDistribution {
    /// From the closed form, `c` ranging over `0..=min(a, K - b)`.
    pub fn from_formula(cable: u32, a: u32, b: u32) -> Result<Self> {
        falling_probability(cable, a, b, 0)?;
        let dist = (0..=a.min(cable - b))
            .map(|c| Ok((c, falling_probability(cable, a, b, c)?)))
            .filter(|r| !matches!(r, Ok((_, p)) if p.is_zero()))
            .collect::<Result<_>>()?;
        Ok(FallDistribution { cable, a, b, dist })
    }

    pub fn get(&self, c: u32) -> QPoly {
        self.dist.get(&c).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> QPoly {
        self.dist.values().cloned().sum()
    }

    /// `{"K", "a", "b", "dist": {"0": {"coeffs": [...]}, ...}}`
    pub fn to_json(&self) -> serde_json::Value {
        let dist: serde_json::Map<String, serde_json::Value> = self
            .dist
            .iter()
            .map(|(c, p)| (c.to_string(), p.to_json()))
            .collect();
        serde_json::json!({"K": self.cable, "a": self.a, "b": self.b, "dist": dist})
    }

    pub fn pretty(&self) -> String {
        let mut out = format!("K = {}, a = {}, b = {}\n", self.cable, self.a, self.b);
        for (c, p) in &self.dist {
            out.push_str(&format!("c = {c}: {p}\n"));
        }
        out
    }
}

/// Order in which the `K²` lane crossings of one cabled crossing are visited.
///
/// Upper lanes are numbered `0..K` from the side away from the lower group, so
/// upper lane `K - 1` is the first to meet the lower group; lower lanes are
/// numbered `0..K` from the side nearest the upper group. Every order here is
/// a linear extension of the geometric constraints: upper lane `p` meets
/// lower lane `r` after meeting lower lane `r - 1`, and after upper lane
/// `p + 1` has met lower lane `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MicroOrder {
    /// Each upper lane, nearest first, crosses the whole lower group.
    UpperMajor,
    /// Each lower lane, nearest first, passes under the whole upper group.
    LowerMajor,
    /// Anti-diagonal sweep of the crossing grid.
    Diagonal,
}

impl MicroOrder {
    pub const ALL: [MicroOrder; 3] = [
        MicroOrder::UpperMajor,
        MicroOrder::LowerMajor,
        MicroOrder::Diagonal,
    ];

    /// `(upper lane, lower lane)` pairs in visiting order.
    pub fn crossings(self, cable: usize) -> Vec<(usize, usize)> {
        let k = cable;
        match self {
            MicroOrder::UpperMajor => (0..k)
                .rev()
                .flat_map(|p| (0..k).map(move |r| (p, r)))
                .collect(),
            MicroOrder::LowerMajor => (0..k)
                .flat_map(|r| (0..k).rev().map(move |p| (p, r)))
                .collect(),
            MicroOrder::Diagonal => (0..(2 * k).saturating_sub(1))
                .flat_map(|d| {
                    (0..k).filter_map(move |r| {
                        // depth of upper lane p is k - 1 - p
                        let depth = d.checked_sub(r)?;
                        (depth < k).then(|| (k - 1 - depth, r))
                    })
                })
                .collect(),
        }
    }
}

/// Lane-level simulation of one cabled crossing from an explicit placement.
///
/// `upper[p]` / `lower[r]` say whether the lane starts with a ball. A ball
/// passing over an empty lane falls into it with weight `1 - q` and passes
/// with weight `q`; every other micro-crossing is deterministic. Returns the
/// distribution of the number of fallen balls.
pub fn lane_level_distribution(
    upper: &[bool],
    lower: &[bool],
    order: MicroOrder,
) -> BTreeMap<u32, QPoly> {
    assert_eq!(upper.len(), lower.len(), "groups must have equal width");
    type Lanes = (Vec<bool>, Vec<bool>, u32);
    let mut states: BTreeMap<Lanes, QPoly> =
        BTreeMap::from([((upper.to_vec(), lower.to_vec(), 0), QPoly::one())]);
    let fall = QPoly::one_minus_q();
    let pass = QPoly::q();
    for (p, r) in order.crossings(upper.len()) {
        let mut next: BTreeMap<Lanes, QPoly> = BTreeMap::new();
        for ((up, low, fallen), weight) in states {
            if up[p] && !low[r] {
                let (mut up2, mut low2) = (up.clone(), low.clone());
                up2[p] = false;
                low2[r] = true;
                *next.entry((up2, low2, fallen + 1)).or_default() += &weight * &fall;
                *next.entry((up, low, fallen)).or_default() += &weight * &pass;
            } else {
                *next.entry((up, low, fallen)).or_default() += weight;
            }
        }
        next.retain(|_, w| !w.is_zero());
        states = next;
    }
    let mut by_count: BTreeMap<u32, QPoly> = BTreeMap::new();
    for ((_, _, fallen), w) in states {
        *by_count.entry(fallen).or_default() += w;
    }
    by_count.retain(|_, w| !w.is_zero());
    by_count
}

fn leftmost(cable: u32, count: u32) -> Vec<bool> {
    (0..cable).map(|lane| lane < count).collect()
}

fn check_counts(cable: u32, a: u32, b: u32) -> Result<()> {
    if cable == 0 {
        return Err(precondition("cable width must be at least 1"));
    }
    if a > cable || b > cable {
        return Err(precondition(format!(
            "ball counts a={a}, b={b} must not exceed the cable width {cable}"
        )));
    }
    Ok(())
}

/// Fall-count distribution by direct lane-level enumeration, with the
/// leftmost `a` upper lanes and leftmost `b` lower lanes occupied.
pub fn crossing_oracle(cable: u32, a: u32, b: u32) -> Result<FallDistribution> {
    crossing_oracle_ordered(cable, a, b, MicroOrder::UpperMajor)
}

pub fn crossing_oracle_ordered(
    cable: u32,
    a: u32,
    b: u32,
    order: MicroOrder,
) -> Result<FallDistribution> {
    check_counts(cable, a, b)?;
    let dist = lane_level_distribution(&leftmost(cable, a), &leftmost(cable, b), order);
    Ok(FallDistribution { cable, a, b, dist })
}

fn dist_mismatch(
    label: String,
    a: u32,
    b: u32,
    c: u32,
    expected: QPoly,
    actual: QPoly,
) -> Mismatch {
    Mismatch {
        words: vec![label],
        u: vec![a, b],
        v: vec![c],
        expected: Value::Poly(expected),
        actual: Value::Poly(actual),
    }
}

/// `crossing_oracle(K, a, b)[c] = falling_probability(K, a, b, c)` for all
/// `a, b` in `0..=K` and `c` in `0..=K`.
pub fn check_cabled_formula(cable: u32) -> Result<CheckReport> {
    if cable == 0 || cable > MAX_ORACLE_CABLE {
        return Err(precondition(format!(
            "cable width must lie in 1..={MAX_ORACLE_CABLE}"
        )));
    }
    let mut report = CheckReport::new("falling-formula", format!("K={cable}"));
    for a in 0..=cable {
        for b in 0..=cable {
            let oracle = crossing_oracle(cable, a, b)?;
            for c in 0..=cable {
                let formula = falling_probability(cable, a, b, c)?;
                let found = oracle.get(c);
                report.record((formula != found).then(|| {
                    dist_mismatch("formula vs lane oracle".into(), a, b, c, formula, found)
                }));
            }
        }
    }
    Ok(report)
}

/// Every placement of `a` balls among the upper lanes and `b` among the
/// lower lanes gives the same fall-count distribution.
pub fn check_oracle_placement_invariance(cable: u32, a: u32, b: u32) -> Result<CheckReport> {
    check_counts(cable, a, b)?;
    if cable > MAX_ORACLE_CABLE {
        return Err(precondition(format!(
            "placement enumeration is limited to K <= {MAX_ORACLE_CABLE}"
        )));
    }
    let k = cable as usize;
    let placements = |count: u32| -> Vec<Vec<bool>> {
        (0..k)
            .combinations(count as usize)
            .map(|chosen| (0..k).map(|lane| chosen.contains(&lane)).collect())
            .collect()
    };
    let pairs: Vec<(Vec<bool>, Vec<bool>)> = placements(a)
        .into_iter()
        .cartesian_product(placements(b))
        .collect();
    let dists: Vec<BTreeMap<u32, QPoly>> = pairs
        .par_iter()
        .map(|(up, low)| lane_level_distribution(up, low, MicroOrder::UpperMajor))
        .collect();
    let reference = crossing_oracle(cable, a, b)?.dist;
    let mut report = CheckReport::new("placement-invariance", format!("K={cable}, a={a}, b={b}"));
    for ((up, low), dist) in pairs.iter().zip(&dists) {
        let bad = (0..=cable).find(|c| reference.get(c) != dist.get(c));
        report.record(bad.map(|c| {
            let label = format!(
                "placement upper={} lower={}",
                up.iter().map(|&x| u8::from(x)).join(""),
                low.iter().map(|&x| u8::from(x)).join("")
            );
            dist_mismatch(
                label,
                a,
                b,
                c,
                reference.get(&c).cloned().unwrap_or_default(),
                dist.get(&c).cloned().unwrap_or_default(),
            )
        }));
    }
    Ok(report)
}

/// Every [`MicroOrder`] gives the same distribution for all `a, b`.
pub fn check_micro_order_invariance(cable: u32) -> Result<CheckReport> {
    if cable == 0 || cable > MAX_ORACLE_CABLE {
        return Err(precondition(format!(
            "cable width must lie in 1..={MAX_ORACLE_CABLE}"
        )));
    }
    let mut report = CheckReport::new("micro-order-invariance", format!("K={cable}"));
    for a in 0..=cable {
        for b in 0..=cable {
            let reference = crossing_oracle_ordered(cable, a, b, MicroOrder::UpperMajor)?;
            for order in &MicroOrder::ALL[1..] {
                let other = crossing_oracle_ordered(cable, a, b, *order)?;
                let bad = (0..=cable).find(|&c| reference.get(c) != other.get(c));
                report.record(bad.map(|c| {
                    dist_mismatch(
                        format!("{order:?} order"),
                        a,
                        b,
                        c,
                        reference.get(c),
                        other.get(c),
                    )
                }));
            }
        }
    }
    Ok(report)
}

fn compare_words(
    report: &mut CheckReport,
    left: &BraidWord,
    right: &BraidWord,
    cable: u32,
) -> Result<()> {
    let l = rho_cabled_matrix(left, cable)?;
    let r = rho_cabled_matrix(right, cable)?;
    let space = l.space();
    report.record(
        l.matrix()
            .first_difference(r.matrix())
            .map(|(row, col, e, a)| Mismatch {
                words: vec![left.to_string(), right.to_string()],
                u: space.state(col).expect("in range"),
                v: space.state(row).expect("in range"),
                expected: Value::Poly(e),
                actual: Value::Poly(a),
            }),
    );
    Ok(())
}

/// Braid relation for `ρ_K` on every adjacent pair of generators.
pub fn check_cabled_braid_relation(strands: usize, cable: u32) -> Result<CheckReport> {
    if strands < 3 {
        return Err(precondition("the braid relation needs n >= 3"));
    }
    let mut report = CheckReport::new("cabled-braid-relation", format!("n={strands}, K={cable}"));
    for i in 1..strands - 1 {
        let left = BraidWord::new(strands, vec![i, i + 1, i])?;
        let right = BraidWord::new(strands, vec![i + 1, i, i + 1])?;
        compare_words(&mut report, &left, &right, cable)?;
    }
    Ok(report)
}

/// Far commutativity for `ρ_K`.
pub fn check_cabled_far_commutativity(strands: usize, cable: u32) -> Result<CheckReport> {
    if strands < 4 {
        return Err(precondition("far commutativity needs n >= 4"));
    }
    let mut report = CheckReport::new(
        "cabled-far-commutativity",
        format!("n={strands}, K={cable}"),
    );
    for i in 1..strands {
        for j in i + 2..strands {
            let left = BraidWord::new(strands, vec![i, j])?;
            let right = BraidWord::new(strands, vec![j, i])?;
            compare_words(&mut report, &left, &right, cable)?;
        }
    }
    Ok(report)
}

/// Column sums and ball conservation for `ρ_K` over the given words.
pub fn check_cabled_stochastic(words: &[BraidWord], cable: u32) -> Result<CheckReport> {
    let mut report = CheckReport::new(
        "cabled-stochastic",
        format!("K={cable}, {} word(s)", words.len()),
    );
    for word in words {
        let m = rho_cabled_matrix(word, cable)?;
        let space = m.space();
        report.record(m.column_sum_violation().map(|(col, sum)| Mismatch {
            words: vec![word.to_string(), "column sum".into()],
            u: space.state(col).expect("in range"),
            v: Vec::new(),
            expected: Value::Poly(QPoly::one()),
            actual: Value::Poly(sum),
        }));
        report.record(m.conservation_violation().map(|(row, col)| Mismatch {
            words: vec![word.to_string(), "ball conservation".into()],
            u: space.state(col).expect("in range"),
            v: space.state(row).expect("in range"),
            expected: Value::Poly(QPoly::zero()),
            actual: Value::Poly(m.matrix().get(row, col)),
        }));
    }
    Ok(report)
}

/// With one lane per group, `ρ_1(w) = ρ(w)` at `N = 1` for every given word.
pub fn check_unit_cable(words: &[BraidWord]) -> Result<CheckReport> {
    let mut report = CheckReport::new("unit-cable", format!("{} word(s)", words.len()));
    for word in words {
        let cabled = rho_cabled_matrix(word, 1)?;
        let plain = rho_matrix(word, 1)?;
        let space = plain.space();
        report.record(
            plain
                .matrix()
                .first_difference(cabled.matrix())
                .map(|(row, col, e, a)| Mismatch {
                    words: vec![format!("ρ({word})"), format!("ρ_1({word})")],
                    u: space.state(col).expect("in range"),
                    v: space.state(row).expect("in range"),
                    expected: Value::Poly(e),
                    actual: Value::Poly(a),
                }),
        );
    }
    Ok(report)
}

/// All words on `strands` strands with at most `max_len` letters, shortest first.
pub fn all_words(strands: usize, max_len: usize) -> Result<Vec<BraidWord>> {
    let mut words = vec![BraidWord::identity(strands)?];
    if strands < 2 {
        return Ok(words);
    }
    for len in 1..=max_len {
        for letters in (0..len).map(|_| 1..strands).multi_cartesian_product() {
            words.push(BraidWord::new(strands, letters)?);
        }
    }
    Ok(words)
}
