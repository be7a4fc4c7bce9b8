//! Column-sparse square matrices over `Z[q]` or the rationals.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::qpoly::{QPoly, QScalar};

/// Scalars a [`SparseMatrix`] can hold.
pub trait Entry:
    Clone
    + PartialEq
    + Zero
    + One
    + Send
    + Sync
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
}

impl<T> Entry for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Send
        + Sync
        + Neg<Output = T>
        + for<'a> Add<&'a T, Output = T>
        + for<'a> Sub<&'a T, Output = T>
        + for<'a> Mul<&'a T, Output = T>
{
}

/// Square matrix stored by column; zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix<T> {
    dim: usize,
    columns: Vec<BTreeMap<usize, T>>,
}

pub type PolyMatrix = SparseMatrix<QPoly>;
pub type RationalMatrix = SparseMatrix<QScalar>;

impl<T: Entry> SparseMatrix<T> {
    pub fn zero(dim: usize) -> Self {
        SparseMatrix {
            dim,
            columns: vec![BTreeMap::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, T::one())
    }

    pub fn scalar(dim: usize, c: T) -> Self {
        let mut m = Self::zero(dim);
        if !c.is_zero() {
            for (j, col) in m.columns.iter_mut().enumerate() {
                col.insert(j, c.clone());
            }
        }
        m
    }

    pub(crate) fn from_columns(columns: Vec<BTreeMap<usize, T>>) -> Self {
        let dim = columns.len();
        let columns = columns
            .into_iter()
            .map(|col| col.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        SparseMatrix { dim, columns }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.columns[col].get(&row).cloned().unwrap_or_else(T::zero)
    }

    pub fn column(&self, col: usize) -> &BTreeMap<usize, T> {
        &self.columns[col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: T) {
        if value.is_zero() {
            self.columns[col].remove(&row);
        } else {
            self.columns[col].insert(row, value);
        }
    }

    /// Nonzero entries as `(row, col, value)`, sorted by `(col, row)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(&i, v)| (i, j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(BTreeMap::is_empty)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, &T) -> T + Sync) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| {
                let mut col = a.clone();
                for (&i, v) in b {
                    let cur = col.remove(&i).unwrap_or_else(T::zero);
                    let next = f(cur, v);
                    if !next.is_zero() {
                        col.insert(i, next);
                    }
                }
                col
            })
            .collect();
        SparseMatrix {
            dim: self.dim,
            columns,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        let columns = self
            .columns
            .iter()
            .map(|col| {
                col.iter()
                    .map(|(&i, v)| (i, v.clone() * c))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        SparseMatrix {
            dim: self.dim,
            columns,
        }
    }

    /// Matrix product `self * rhs`; `rhs` acts first on column vectors.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let columns = rhs
            .columns
            .par_iter()
            .map(|rcol| {
                let mut out: BTreeMap<usize, T> = BTreeMap::new();
                for (&k, coeff) in rcol {
                    for (&i, v) in &self.columns[k] {
                        let slot = out.entry(i).or_insert_with(T::zero);
                        *slot = std::mem::replace(slot, T::zero()) + &(v.clone() * coeff);
                    }
                }
                out.retain(|_, v| !v.is_zero());
                out
            })
            .collect();
        SparseMatrix {
            dim: self.dim,
            columns,
        }
    }

    /// Column sums as a row vector.
    pub fn column_sums(&self) -> Vec<T> {
        self.columns
            .iter()
            .map(|col| col.values().fold(T::zero(), |acc, v| acc + v))
            .collect()
    }

    /// First entry, in `(col, row)` order, where `self` and `other` differ,
    /// as `(row, col, self value, other value)`.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize, T, T)> {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        for col in 0..self.dim {
            let (a, b) = (&self.columns[col], &other.columns[col]);
            if a == b {
                continue;
            }
            let rows: std::collections::BTreeSet<usize> =
                a.keys().chain(b.keys()).copied().collect();
            for row in rows {
                let (x, y) = (self.get(row, col), other.get(row, col));
                if x != y {
                    return Some((row, col, x, y));
                }
            }
        }
        None
    }

    pub fn map<U: Entry>(&self, f: impl Fn(&T) -> U + Sync) -> SparseMatrix<U> {
        let columns = self
            .columns
            .iter()
            .map(|col| {
                col.iter()
                    .map(|(&i, v)| (i, f(v)))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        SparseMatrix {
            dim: self.dim,
            columns,
        }
    }
}

impl PolyMatrix {
    /// Substitute `q = x` in every entry.
    pub fn eval(&self, x: &QScalar) -> RationalMatrix {
        self.map(|p| p.eval(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> QPoly {
        QPoly::from_coeffs(c.iter().copied())
    }

    #[test]
    fn identity_is_neutral() {
        let mut m = PolyMatrix::zero(3);
        m.set(0, 1, poly(&[1, -1]));
        m.set(2, 1, QPoly::q());
        m.set(1, 2, QPoly::one());
        let id = PolyMatrix::identity(3);
        assert_eq!(m.mul(&id), m);
        assert_eq!(id.mul(&m), m);
        assert!(m.sub(&m).is_zero());
        assert_eq!(m.add(&m), m.scale(&QPoly::constant(2)));
    }

    #[test]
    fn product_order() {
        // a maps e0 -> e1, b maps e1 -> e2; a first then b is b * a
        let mut a = PolyMatrix::zero(3);
        a.set(1, 0, QPoly::one());
        let mut b = PolyMatrix::zero(3);
        b.set(2, 1, QPoly::q());
        let ba = b.mul(&a);
        assert_eq!(ba.get(2, 0), QPoly::q());
        assert!(a.mul(&b).is_zero());
    }

    #[test]
    fn first_difference_reports_entry() {
        let a = PolyMatrix::identity(2);
        let mut b = a.clone();
        b.set(1, 1, QPoly::q());
        assert_eq!(
            a.first_difference(&b),
            Some((1, 1, QPoly::one(), QPoly::q()))
        );
        assert_eq!(a.first_difference(&a), None);
    }

    #[test]
    fn evaluation() {
        let mut m = PolyMatrix::zero(2);
        m.set(0, 0, poly(&[0, 0, 1]));
        m.set(1, 0, poly(&[1, -1]));
        let at_one = m.eval(&QScalar::from_integer(1.into()));
        assert_eq!(at_one.nnz(), 1);
        assert_eq!(at_one.get(0, 0), QScalar::one());
        let sums = m.column_sums();
        assert_eq!(sums[0], poly(&[1, -1, 1]));
        assert!(sums[1].is_zero());
    }
}
