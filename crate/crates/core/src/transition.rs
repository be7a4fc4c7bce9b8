//! State spaces of per-position ball counts and the column-stochastic
//! matrices that act on them.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use itertools::Itertools;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::qpoly::{scalar_to_json, QPoly, QScalar};

/// Tuples `(u_1, .., u_n)` with `0 <= u_i <= capacity`, indexed in mixed
/// radix `capacity + 1` with `u_1` least significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StateSpace {
    strands: usize,
    capacity: u32,
}

impl StateSpace {
    pub fn new(strands: usize, capacity: u32) -> Result<Self> {
        if strands == 0 {
            return Err(Error::NoStrands);
        }
        if capacity == 0 {
            return Err(Error::ZeroCapacity);
        }
        Ok(StateSpace { strands, capacity })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    /// `(capacity + 1)^strands`, or `None` on overflow.
    pub fn checked_dim(&self) -> Option<usize> {
        (self.capacity as usize + 1).checked_pow(self.strands as u32)
    }

    pub fn dim(&self) -> usize {
        self.checked_dim().expect("state space too large to index")
    }

    pub fn validate(&self, counts: &[u32]) -> Result<()> {
        if counts.len() != self.strands || counts.iter().any(|&u| u > self.capacity) {
            return Err(Error::InvalidState {
                counts: counts.to_vec(),
                capacity: self.capacity,
            });
        }
        Ok(())
    }

    pub fn index(&self, counts: &[u32]) -> Result<usize> {
        self.validate(counts)?;
        let radix = self.capacity as usize + 1;
        Ok(counts
            .iter()
            .rev()
            .fold(0, |acc, &u| acc * radix + u as usize))
    }

    pub fn state(&self, index: usize) -> Result<Vec<u32>> {
        let dim = self.dim();
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let radix = self.capacity as usize + 1;
        let mut rest = index;
        Ok((0..self.strands)
            .map(|_| {
                let u = (rest % radix) as u32;
                rest /= radix;
                u
            })
            .collect())
    }

    /// All states in index order.
    pub fn states(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        (0..self.dim()).map(|i| self.state(i).expect("index in range"))
    }
}

/// Which kind of state space a [`TransitionMatrix`] acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Capacity {
    /// Multi-ball representation: at most `N` balls per position.
    Balls(u32),
    /// Cabled representation: `K` parallel lanes per position.
    Cable(u32),
}

impl Capacity {
    pub fn value(self) -> u32 {
        match self {
            Capacity::Balls(n) | Capacity::Cable(n) => n,
        }
    }

    fn json_key(self) -> &'static str {
        match self {
            Capacity::Balls(_) => "N",
            Capacity::Cable(_) => "K",
        }
    }
}

/// One step of a local rule: the outcomes of a single crossing `σ_i`
/// applied to a state, with their probabilities.
pub(crate) type Outcomes = Vec<(Vec<u32>, QPoly)>;

/// Pushes every basis state through `letters` as a sparse distribution.
///
/// Column `j` of the result is the distribution of final states when the
/// balls start in state `j`.
pub(crate) fn push_word<R>(space: StateSpace, letters: &[usize], rule: R) -> PolyMatrix
where
    R: Fn(usize, &[u32]) -> Outcomes + Sync,
{
    let columns = (0..space.dim())
        .into_par_iter()
        .map(|col| {
            let start = space.state(col).expect("index in range");
            let mut dist: BTreeMap<Vec<u32>, QPoly> = BTreeMap::from([(start, QPoly::one())]);
            for &i in letters {
                let mut next: BTreeMap<Vec<u32>, QPoly> = BTreeMap::new();
                for (state, p) in &dist {
                    for (out, w) in rule(i, state) {
                        *next.entry(out).or_default() += p * &w;
                    }
                }
                next.retain(|_, p| !p.is_zero());
                dist = next;
            }
            dist.into_iter()
                .map(|(state, p)| (space.index(&state).expect("rule keeps states valid"), p))
                .collect()
        })
        .collect();
    PolyMatrix::from_columns(columns)
}

/// A matrix whose `(v, u)` entry is the probability that state `u` bowls to
/// state `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMatrix {
    space: StateSpace,
    capacity: Capacity,
    matrix: PolyMatrix,
}

impl TransitionMatrix {
    pub(crate) fn new(space: StateSpace, capacity: Capacity, matrix: PolyMatrix) -> Self {
        debug_assert_eq!(space.dim(), matrix.dim());
        TransitionMatrix {
            space,
            capacity,
            matrix,
        }
    }

    pub fn space(&self) -> StateSpace {
        self.space
    }

    pub fn capacity(&self) -> Capacity {
        self.capacity
    }

    pub fn strands(&self) -> usize {
        self.space.strands()
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> PolyMatrix {
        self.matrix
    }

    /// Probability that input `u` produces output `v`.
    pub fn entry(&self, v: &[u32], u: &[u32]) -> Result<QPoly> {
        Ok(self.matrix.get(self.space.index(v)?, self.space.index(u)?))
    }

    /// Output distribution of input `u`, sorted by output index.
    pub fn column(&self, u: &[u32]) -> Result<Vec<(Vec<u32>, QPoly)>> {
        let col = self.space.index(u)?;
        Ok(self
            .matrix
            .column(col)
            .iter()
            .map(|(&row, p)| (self.space.state(row).expect("row in range"), p.clone()))
            .collect())
    }

    /// First column whose entries do not sum to 1, with its sum.
    pub fn column_sum_violation(&self) -> Option<(usize, QPoly)> {
        self.matrix
            .column_sums()
            .into_iter()
            .enumerate()
            .find(|(_, s)| !s.is_one())
    }

    /// First nonzero entry `(row, col)` that moves between different ball totals.
    pub fn conservation_violation(&self) -> Option<(usize, usize)> {
        let total = |idx: usize| -> u32 { self.space.state(idx).expect("in range").iter().sum() };
        self.matrix
            .entries()
            .find(|&(row, col, _)| total(row) != total(col))
            .map(|(row, col, _)| (row, col))
    }

    fn header(&self) -> serde_json::Map<String, serde_json::Value> {
        let mut obj = serde_json::Map::new();
        obj.insert("n".into(), self.strands().into());
        obj.insert(
            self.capacity.json_key().into(),
            self.capacity.value().into(),
        );
        obj.insert("dim".into(), self.dim().into());
        obj
    }

    /// `{"n", "N"|"K", "dim", "entries": [[row, col, {"coeffs": [...]}], ...]}`,
    /// entries sorted by `(col, row)`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = self.header();
        let entries = self
            .matrix
            .entries()
            .map(|(row, col, p)| serde_json::json!([row, col, p.to_json()]))
            .collect::<Vec<_>>();
        obj.insert("entries".into(), entries.into());
        obj.into()
    }

    /// Same layout as [`Self::to_json`] with `q` substituted; entries are
    /// `{"num", "den"}` rationals and zero entries are dropped.
    pub fn eval_json(&self, x: &QScalar) -> serde_json::Value {
        let mut obj = self.header();
        obj.insert("q".into(), scalar_to_json(x));
        let evaluated = self.matrix.eval(x);
        let entries = evaluated
            .entries()
            .map(|(row, col, v)| serde_json::json!([row, col, scalar_to_json(v)]))
            .collect::<Vec<_>>();
        obj.insert("entries".into(), entries.into());
        obj.into()
    }

    /// One line per nonzero entry: `[u] -> [v]: p`.
    pub fn pretty(&self, at: Option<&QScalar>) -> String {
        let mut out = String::new();
        let fmt_state = |idx| {
            format!(
                "[{}]",
                self.space.state(idx).expect("in range").iter().join(",")
            )
        };
        let _ = writeln!(
            out,
            "n = {}, {} = {}, dim = {}",
            self.strands(),
            self.capacity.json_key(),
            self.capacity.value(),
            self.dim()
        );
        for (row, col, p) in self.matrix.entries() {
            let value = match at {
                Some(x) => {
                    let v = p.eval(x);
                    if v.is_zero() {
                        continue;
                    }
                    v.to_string()
                }
                None => p.to_string(),
            };
            let _ = writeln!(out, "{} -> {}: {}", fmt_state(col), fmt_state(row), value);
        }
        out
    }
}
