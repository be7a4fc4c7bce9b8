//! The multi-ball bowling representation of the positive braid monoid.
//!
//! At a crossing `σ_i` the lane entering at position `i` passes over the lane
//! entering at position `i + 1`. With `a` balls on the over lane and `b` on the
//! under lane:
//!
//! * `a <= b`: nothing falls, both lanes carry their balls across
//!   (the tuple entries swap);
//! * `a > b`: with probability `q` nothing falls (swap); with probability
//!   `1 - q` the surplus `a - b` falls, leaving `b` on the over lane (now at
//!   `i + 1`) and `a` on the under lane (now at `i`), so the tuple is unchanged.
//!
//! A word `w_1 .. w_m` is read first to last, so its matrix is
//! `M(w_m) ... M(w_1)` acting on column vectors and the `(v, u)` entry is the
//! probability that bowling `u` collects `v`.

use num_traits::{One, Zero};

use crate::braid::{check_generator, specht_element, specht_half, BraidWord, HeckeElement};
use crate::error::{precondition, Error, Result};
use crate::matrix::{PolyMatrix, RationalMatrix};
use crate::qpoly::{QPoly, QScalar};
use crate::report::{CheckReport, Mismatch, Value};
use crate::transition::{push_word, Capacity, Outcomes, StateSpace, TransitionMatrix};

/// Ball counts per position, each at most `capacity`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BallState {
    counts: Vec<u32>,
    capacity: u32,
}

impl BallState {
    pub fn new(counts: Vec<u32>, capacity: u32) -> Result<Self> {
        StateSpace::new(counts.len(), capacity)?.validate(&counts)?;
        Ok(BallState { counts, capacity })
    }

    pub fn from_index(index: usize, strands: usize, capacity: u32) -> Result<Self> {
        let counts = StateSpace::new(strands, capacity)?.state(index)?;
        Ok(BallState { counts, capacity })
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    /// `Σ u_i (N + 1)^(i - 1)`.
    pub fn index(&self) -> usize {
        StateSpace::new(self.counts.len(), self.capacity)
            .and_then(|s| s.index(&self.counts))
            .expect("validated on construction")
    }
}

/// Outcomes of `σ_i` (1-based) on raw counts; `i` must already be valid.
pub(crate) fn generator_rule(i: usize, counts: &[u32]) -> Outcomes {
    let (a, b) = (counts[i - 1], counts[i]);
    let mut swapped = counts.to_vec();
    swapped.swap(i - 1, i);
    if a <= b {
        vec![(swapped, QPoly::one())]
    } else {
        vec![
            (swapped, QPoly::q()),
            (counts.to_vec(), QPoly::one_minus_q()),
        ]
    }
}

/// Distribution of states after one crossing `σ_i`.
pub fn apply_generator(i: usize, state: &BallState) -> Result<Vec<(BallState, QPoly)>> {
    check_generator(i, state.counts.len())?;
    Ok(generator_rule(i, &state.counts)
        .into_iter()
        .map(|(counts, p)| {
            (
                BallState {
                    counts,
                    capacity: state.capacity,
                },
                p,
            )
        })
        .collect())
}

/// The matrix `ρ(word)` with at most `capacity` balls per position.
pub fn rho_matrix(word: &BraidWord, capacity: u32) -> Result<TransitionMatrix> {
    let space = StateSpace::new(word.strands(), capacity)?;
    let matrix = push_word(space, word.letters(), generator_rule);
    Ok(TransitionMatrix::new(
        space,
        Capacity::Balls(capacity),
        matrix,
    ))
}

pub fn generator_matrix(strands: usize, capacity: u32, i: usize) -> Result<PolyMatrix> {
    Ok(rho_matrix(&BraidWord::generator(strands, i)?, capacity)?.into_matrix())
}

/// `Σ c_w ρ(w)` over the terms of `x`.
pub fn rho_element(x: &HeckeElement, capacity: u32) -> Result<PolyMatrix> {
    let space = StateSpace::new(x.strands(), capacity)?;
    let mut acc = PolyMatrix::zero(space.dim());
    for (word, coeff) in x.terms() {
        let m = rho_matrix(word, capacity)?.into_matrix();
        acc = acc.add(&m.scale(coeff));
    }
    Ok(acc)
}

fn compare<T>(
    space: &StateSpace,
    words: &[String],
    expected: &crate::matrix::SparseMatrix<T>,
    actual: &crate::matrix::SparseMatrix<T>,
) -> Option<Mismatch>
where
    T: crate::matrix::Entry + Into<Value>,
{
    expected
        .first_difference(actual)
        .map(|(row, col, e, a)| Mismatch {
            words: words.to_vec(),
            u: space.state(col).expect("in range"),
            v: space.state(row).expect("in range"),
            expected: e.into(),
            actual: a.into(),
        })
}

fn params(n: usize, capacity: u32) -> String {
    format!("n={n}, N={capacity}")
}

/// `ρ(σ_i σ_{i+1} σ_i) = ρ(σ_{i+1} σ_i σ_{i+1})` for every adjacent pair.
pub fn check_braid_relation(strands: usize, capacity: u32) -> Result<CheckReport> {
    if strands < 3 {
        return Err(precondition("the braid relation needs n >= 3"));
    }
    let space = StateSpace::new(strands, capacity)?;
    let mut report = CheckReport::new("braid-relation", params(strands, capacity));
    for i in 1..strands - 1 {
        let left = BraidWord::new(strands, vec![i, i + 1, i])?;
        let right = BraidWord::new(strands, vec![i + 1, i, i + 1])?;
        let (l, r) = (rho_matrix(&left, capacity)?, rho_matrix(&right, capacity)?);
        report.record(compare(
            &space,
            &[left.to_string(), right.to_string()],
            l.matrix(),
            r.matrix(),
        ));
    }
    Ok(report)
}

/// `ρ(σ_i σ_j) = ρ(σ_j σ_i)` whenever `|i - j| > 1`.
pub fn check_far_commutativity(strands: usize, capacity: u32) -> Result<CheckReport> {
    if strands < 4 {
        return Err(precondition("far commutativity needs n >= 4"));
    }
    let space = StateSpace::new(strands, capacity)?;
    let mut report = CheckReport::new("far-commutativity", params(strands, capacity));
    for i in 1..strands {
        for j in i + 2..strands {
            let left = BraidWord::new(strands, vec![i, j])?;
            let right = BraidWord::new(strands, vec![j, i])?;
            let (l, r) = (rho_matrix(&left, capacity)?, rho_matrix(&right, capacity)?);
            report.record(compare(
                &space,
                &[left.to_string(), right.to_string()],
                l.matrix(),
                r.matrix(),
            ));
        }
    }
    Ok(report)
}

/// `(qI + ρ(σ_i))(I - ρ(σ_i)) = 0` for every generator.
pub fn check_hecke(strands: usize, capacity: u32) -> Result<CheckReport> {
    check_hecke_with(strands, capacity, |i| {
        generator_matrix(strands, capacity, i)
    })
}

/// [`check_hecke`] against caller-supplied generator matrices.
pub fn check_hecke_with<F>(strands: usize, capacity: u32, generator: F) -> Result<CheckReport>
where
    F: Fn(usize) -> Result<PolyMatrix>,
{
    if strands < 2 {
        return Err(precondition("the quadratic relation needs n >= 2"));
    }
    let space = StateSpace::new(strands, capacity)?;
    let dim = space.dim();
    let id = PolyMatrix::identity(dim);
    let q_id = PolyMatrix::scalar(dim, QPoly::q());
    let mut report = CheckReport::new("hecke-quadratic", params(strands, capacity));
    for i in 1..strands {
        let g = generator(i)?;
        let product = q_id.add(&g).mul(&id.sub(&g));
        report.record(compare(
            &space,
            &[format!("(q + σ{i})(1 - σ{i})"), "0".into()],
            &PolyMatrix::zero(dim),
            &product,
        ));
    }
    Ok(report)
}

/// `ρ(x_k) = 0`, the factorization `ρ(x_k) = ρ(half_i)(I - ρ(σ_i))` for every
/// `i` in the window, and `ρ(x_k) ρ(σ_j) = -q ρ(x_k)` for window generators.
pub fn check_specht(strands: usize, capacity: u32, k: usize) -> Result<CheckReport> {
    let x = specht_element(strands, capacity, k)?;
    let space = StateSpace::new(strands, capacity)?;
    let dim = space.dim();
    let mut report = CheckReport::new(
        "specht-kernel",
        format!("{}, k={k}", params(strands, capacity)),
    );
    let rho_x = rho_element(&x, capacity)?;
    report.record(compare(
        &space,
        &[format!("x_{k}"), "0".into()],
        &PolyMatrix::zero(dim),
        &rho_x,
    ));

    let id = PolyMatrix::identity(dim);
    let minus_q = -QPoly::q();
    for i in k..=k + capacity as usize {
        let g = generator_matrix(strands, capacity, i)?;
        let half = rho_element(&specht_half(strands, capacity, k, i)?, capacity)?;
        report.record(compare(
            &space,
            &[format!("x_{k}"), format!("half_{i} (1 - σ{i})")],
            &rho_x,
            &half.mul(&id.sub(&g)),
        ));
        report.record(compare(
            &space,
            &[format!("-q x_{k}"), format!("x_{k} σ{i}")],
            &rho_x.scale(&minus_q),
            &rho_x.mul(&g),
        ));
    }
    Ok(report)
}

/// At `q = x`, `ρ(σ_i)` is inverted by `x^{-1}(ρ(σ_i) + (x - 1)I)` on both sides.
pub fn check_inverse(strands: usize, capacity: u32, x: &QScalar) -> Result<CheckReport> {
    if x.is_zero() {
        return Err(Error::NotInvertible);
    }
    if strands < 2 {
        return Err(precondition("the inverse formula needs n >= 2"));
    }
    let space = StateSpace::new(strands, capacity)?;
    let dim = space.dim();
    let id = RationalMatrix::identity(dim);
    let shift = RationalMatrix::scalar(dim, x - QScalar::one());
    let x_inv = x.recip();
    let mut report = CheckReport::new(
        "inverse-formula",
        format!("{}, q={x}", params(strands, capacity)),
    );
    for i in 1..strands {
        let g = generator_matrix(strands, capacity, i)?.eval(x);
        let inv = g.add(&shift).scale(&x_inv);
        let words = [format!("σ{i} σ{i}^-1"), "1".into()];
        report.record(compare(&space, &words, &id, &g.mul(&inv)));
        let words = [format!("σ{i}^-1 σ{i}"), "1".into()];
        report.record(compare(&space, &words, &id, &inv.mul(&g)));
    }
    Ok(report)
}

/// Column sums equal 1 and ball totals are preserved, for each word.
pub fn check_stochastic(words: &[BraidWord], capacity: u32) -> Result<CheckReport> {
    let label = match words.first() {
        Some(w) => format!("{}, {} word(s)", params(w.strands(), capacity), words.len()),
        None => "no words".into(),
    };
    let mut report = CheckReport::new("stochastic", label);
    for word in words {
        let m = rho_matrix(word, capacity)?;
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

/// The 0/1 matrix of a deterministic map on states.
fn map_matrix(space: &StateSpace, f: impl Fn(&[u32]) -> Vec<u32>) -> RationalMatrix {
    let mut m = RationalMatrix::zero(space.dim());
    for (col, u) in space.states().enumerate() {
        let row = space.index(&f(&u)).expect("map keeps states valid");
        m.set(row, col, QScalar::one());
    }
    m
}

/// At `q = 1` each `ρ(σ_i)` swaps positions `i, i + 1`; at `q = 0` it swaps
/// only when `u_i <= u_{i+1}` (so the pair ends in non-increasing order).
pub fn check_specializations(strands: usize, capacity: u32) -> Result<CheckReport> {
    if strands < 2 {
        return Err(precondition("specializations need n >= 2"));
    }
    let space = StateSpace::new(strands, capacity)?;
    let mut report = CheckReport::new("q-specializations", params(strands, capacity));
    for i in 1..strands {
        let g = generator_matrix(strands, capacity, i)?;
        let swap = map_matrix(&space, |u| {
            let mut v = u.to_vec();
            v.swap(i - 1, i);
            v
        });
        report.record(compare(
            &space,
            &[format!("σ{i} at q=1"), "swap".into()],
            &swap,
            &g.eval(&QScalar::one()),
        ));
        let sort = map_matrix(&space, |u| {
            let mut v = u.to_vec();
            if v[i - 1] <= v[i] {
                v.swap(i - 1, i);
            }
            v
        });
        report.record(compare(
            &space,
            &[format!("σ{i} at q=0"), "sort".into()],
            &sort,
            &g.eval(&QScalar::zero()),
        ));
    }
    Ok(report)
}
