//! Positive braid words, their permutations, and formal linear combinations
//! of words.
//!
//! Conventions used throughout the crate:
//!
//! * letters act first to last: the leftmost letter is the crossing the balls
//!   meet first;
//! * a [`Permutation`] records where each lane ends up, `images[i - 1] = w(i)`
//!   means the lane entering at position `i` leaves at position `w(i)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::qpoly::{inversions_perm, QPoly};

/// A positive braid word on `strands` strands. Letter `i` is `σ_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BraidWord {
    #[serde(rename = "n")]
    strands: usize,
    letters: Vec<usize>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<usize>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::NoStrands);
        }
        for &index in &letters {
            check_generator(index, strands)?;
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Result<Self> {
        Self::new(strands, Vec::new())
    }

    pub fn generator(strands: usize, index: usize) -> Result<Self> {
        Self::new(strands, vec![index])
    }

    /// Parses whitespace-separated generator indices, e.g. `"1 2 1"`.
    pub fn parse(text: &str, strands: usize) -> Result<Self> {
        let letters = text
            .split_whitespace()
            .map(|token| {
                token.parse::<usize>().map_err(|_| Error::MalformedToken {
                    token: token.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.strands != other.strands {
            return Err(Error::StrandMismatch {
                left: self.strands,
                right: other.strands,
            });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord {
            strands: self.strands,
            letters,
        })
    }

    /// Underlying permutation: adjacent transpositions composed in reading order.
    pub fn permutation(&self) -> Permutation {
        // position_of[lane] tracks where each lane currently sits
        let mut position_of: Vec<usize> = (1..=self.strands).collect();
        for &i in &self.letters {
            for pos in position_of.iter_mut() {
                if *pos == i {
                    *pos = i + 1;
                } else if *pos == i + 1 {
                    *pos = i;
                }
            }
        }
        Permutation {
            images: position_of,
        }
    }
}

pub(crate) fn check_generator(index: usize, strands: usize) -> Result<()> {
    if index == 0 || index >= strands {
        return Err(Error::GeneratorOutOfRange {
            index,
            strands,
            max: strands.saturating_sub(1),
        });
    }
    Ok(())
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("ε");
        }
        write!(f, "{}", self.letters.iter().join(" "))
    }
}

/// A bijection of `{1, .., n}`; `images[i - 1] = w(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &w in &images {
            if w == 0 || w > images.len() || seen[w - 1] {
                return Err(precondition(format!("{images:?} is not a permutation")));
            }
            seen[w - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `w(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn inversions(&self) -> usize {
        inversions_perm(&self.images)
    }

    pub fn sign(&self) -> i64 {
        if self.inversions().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&i| self.apply(i)).collect(),
        }
    }

    /// The positive permutation braid realizing `self` with the fewest crossings.
    ///
    /// Bubble sort on the lanes keyed by their destination: each pass scans
    /// positions left to right and crosses two neighbours whenever they are
    /// out of order. Only inversions get crossed, so the length equals the
    /// inversion count.
    pub fn minimal_braid(&self) -> BraidWord {
        let n = self.images.len();
        // destination of the lane currently sitting at each position
        let mut dest = self.images.clone();
        let mut letters = Vec::new();
        loop {
            let mut swapped = false;
            for i in 0..n.saturating_sub(1) {
                if dest[i] > dest[i + 1] {
                    dest.swap(i, i + 1);
                    letters.push(i + 1);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        BraidWord {
            strands: n.max(1),
            letters,
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.images.iter().join(","))
    }
}

/// A formal `Z[q]`-linear combination of positive words on a fixed strand count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeElement {
    strands: usize,
    terms: BTreeMap<BraidWord, QPoly>,
}

impl HeckeElement {
    pub fn zero(strands: usize) -> Self {
        HeckeElement {
            strands,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_word(word: BraidWord) -> Self {
        let mut x = Self::zero(word.strands());
        x.terms.insert(word, QPoly::one());
        x
    }

    /// `c` times the empty word.
    pub fn scalar(strands: usize, c: QPoly) -> Result<Self> {
        let mut x = Self::zero(strands);
        x.add_term(BraidWord::identity(strands)?, c)?;
        Ok(x)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn add_term(&mut self, word: BraidWord, coeff: QPoly) -> Result<()> {
        if word.strands() != self.strands {
            return Err(Error::StrandMismatch {
                left: self.strands,
                right: word.strands(),
            });
        }
        let slot = self.terms.entry(word).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BraidWord, &QPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &BraidWord) -> QPoly {
        self.terms.get(word).cloned().unwrap_or_default()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &HeckeElement) -> Result<HeckeElement> {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c.clone())?;
        }
        Ok(out)
    }

    /// Bilinear extension of word concatenation, `self` read first.
    pub fn product(&self, other: &HeckeElement) -> Result<HeckeElement> {
        let mut out = HeckeElement::zero(self.strands);
        for (u, a) in self.terms() {
            for (v, b) in other.terms() {
                out.add_term(u.concat(v)?, a * b)?;
            }
        }
        Ok(out)
    }
}

impl Mul for &HeckeElement {
    type Output = Result<HeckeElement>;

    fn mul(self, rhs: &HeckeElement) -> Result<HeckeElement> {
        self.product(rhs)
    }
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts = self.terms.iter().map(|(w, c)| format!("({c})·[{w}]"));
        write!(f, "{}", parts.format(" + "))
    }
}

fn check_window(strands: usize, capacity: u32, k: usize) -> Result<usize> {
    let width = capacity as usize + 2;
    if capacity == 0 {
        return Err(Error::ZeroCapacity);
    }
    if strands < width {
        return Err(precondition(format!(
            "need n >= N + 2 = {width} strands, got {strands}"
        )));
    }
    if k == 0 || k > strands - width + 1 {
        return Err(precondition(format!(
            "window start k = {k} must lie in 1..={}",
            strands - width + 1
        )));
    }
    Ok(width)
}

fn window_sum(
    strands: usize,
    k: usize,
    width: usize,
    keep: impl Fn(&Permutation) -> bool,
) -> HeckeElement {
    let mut x = HeckeElement::zero(strands);
    let window: Vec<usize> = (k..k + width).collect();
    for arrangement in window.iter().copied().permutations(width) {
        let mut images: Vec<usize> = (1..=strands).collect();
        images[k - 1..k - 1 + width].copy_from_slice(&arrangement);
        let w = Permutation { images };
        if !keep(&w) {
            continue;
        }
        let mut word = w.minimal_braid();
        word.strands = strands;
        x.add_term(word, QPoly::constant(w.sign()))
            .expect("window words share the strand count");
    }
    x
}

/// `x_k`: signed sum of the permutation braids of the `N + 2` positions
/// `k, .., k + N + 1`.
pub fn specht_element(strands: usize, capacity: u32, k: usize) -> Result<HeckeElement> {
    let width = check_window(strands, capacity, k)?;
    Ok(window_sum(strands, k, width, |_| true))
}

/// The part of `x_k` over window permutations with `w(i) < w(i + 1)`.
///
/// Prefixing each of its words with `(1 - σ_i)` recovers `x_k`, so under
/// `ρ` it satisfies `ρ(x_k) = ρ(half) (I - ρ(σ_i))`.
pub fn specht_half(strands: usize, capacity: u32, k: usize, i: usize) -> Result<HeckeElement> {
    let width = check_window(strands, capacity, k)?;
    if i < k || i > k + capacity as usize {
        return Err(precondition(format!(
            "i = {i} must lie in {k}..={}",
            k + capacity as usize
        )));
    }
    Ok(window_sum(strands, k, width, |w| {
        w.apply(i) < w.apply(i + 1)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(text: &str, n: usize) -> BraidWord {
        BraidWord::parse(text, n).unwrap()
    }

    fn perm(images: &[usize]) -> Permutation {
        Permutation::new(images.to_vec()).unwrap()
    }

    fn signed(terms: &[(i64, &str)], n: usize) -> HeckeElement {
        let mut x = HeckeElement::zero(n);
        for &(c, w) in terms {
            x.add_term(word(w, n), QPoly::constant(c)).unwrap();
        }
        x
    }

    #[test]
    fn parsing() {
        assert_eq!(word("1 2 1", 3).letters(), &[1, 2, 1]);
        assert!(word("", 3).is_empty());
        assert!(word("  \t ", 3).is_empty());
        assert!(matches!(
            BraidWord::parse("3", 3),
            Err(Error::GeneratorOutOfRange { index: 3, .. })
        ));
        assert!(matches!(
            BraidWord::parse("0", 3),
            Err(Error::GeneratorOutOfRange { index: 0, .. })
        ));
        assert!(matches!(
            BraidWord::parse("1 x", 3),
            Err(Error::MalformedToken { .. })
        ));
        assert!(BraidWord::parse("-1", 3).is_err());
        assert!(BraidWord::parse("1", 1).is_err());
        assert!(BraidWord::parse("", 1).is_ok());
        assert!(matches!(BraidWord::parse("", 0), Err(Error::NoStrands)));
    }

    #[test]
    fn word_json() {
        let w = word("1 2 1", 3);
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(json, r#"{"n":3,"letters":[1,2,1]}"#);
        assert_eq!(serde_json::from_str::<BraidWord>(&json).unwrap(), w);
    }

    #[test]
    fn permutations_of_words() {
        assert_eq!(word("", 3).permutation(), perm(&[1, 2, 3]));
        assert_eq!(word("1", 3).permutation(), perm(&[2, 1, 3]));
        assert_eq!(word("1 2 1", 3).permutation(), perm(&[3, 2, 1]));
        assert_eq!(word("2 1", 3).permutation(), perm(&[2, 3, 1]));
        assert_eq!(word("1 2", 3).permutation(), perm(&[3, 1, 2]));
    }

    #[test]
    fn signs() {
        assert_eq!(perm(&[1, 2, 3]).sign(), 1);
        assert_eq!(perm(&[2, 1, 3]).sign(), -1);
        assert_eq!(perm(&[3, 2, 1]).sign(), -1);
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
    }

    #[test]
    fn minimal_braids() {
        assert!(perm(&[1, 2, 3]).minimal_braid().is_empty());
        assert_eq!(perm(&[2, 1, 3]).minimal_braid(), word("1", 3));
        assert_eq!(perm(&[3, 2, 1]).minimal_braid(), word("1 2 1", 3));
    }

    // Exhaustive search over positive words of length 3 on 3 strands.
    #[test]
    fn reversal_braid_found_by_search() {
        let realizing: Vec<Vec<usize>> = (0..3)
            .map(|_| 1..3usize)
            .multi_cartesian_product()
            .filter(|letters| {
                BraidWord::new(3, letters.clone()).unwrap().permutation() == perm(&[3, 2, 1])
            })
            .collect();
        assert_eq!(realizing, vec![vec![1, 2, 1], vec![2, 1, 2]]);
        assert!(realizing.contains(&perm(&[3, 2, 1]).minimal_braid().letters().to_vec()));
    }

    #[test]
    fn specht_elements() {
        let x = specht_element(3, 1, 1).unwrap();
        let expected = signed(
            &[
                (1, ""),
                (-1, "1"),
                (-1, "2"),
                (1, "1 2"),
                (1, "2 1"),
                (-1, "1 2 1"),
            ],
            3,
        );
        assert_eq!(x, expected);

        let shifted = specht_element(4, 1, 2).unwrap();
        let expected = signed(
            &[
                (1, ""),
                (-1, "2"),
                (-1, "3"),
                (1, "2 3"),
                (1, "3 2"),
                (-1, "2 3 2"),
            ],
            4,
        );
        assert_eq!(shifted, expected);

        assert!(specht_element(3, 2, 1).is_err());
        assert!(specht_element(4, 1, 3).is_err());
        assert!(specht_element(4, 1, 0).is_err());
        assert_eq!(specht_element(4, 2, 1).unwrap().num_terms(), 24);
    }

    #[test]
    fn specht_halves() {
        assert_eq!(
            specht_half(3, 1, 1, 1).unwrap(),
            signed(&[(1, ""), (-1, "2"), (1, "2 1")], 3)
        );
        assert_eq!(
            specht_half(3, 1, 1, 2).unwrap(),
            signed(&[(1, ""), (-1, "1"), (1, "1 2")], 3)
        );
        assert!(specht_half(3, 1, 1, 3).is_err());
        assert!(specht_half(4, 1, 2, 1).is_err());
    }

    #[test]
    fn hecke_products() {
        let s1 = HeckeElement::from_word(word("1", 2));
        let q = HeckeElement::scalar(2, QPoly::q()).unwrap();
        let one = HeckeElement::scalar(2, QPoly::one()).unwrap();
        let lhs = (&q.add(&s1).unwrap() * &one.add(&signed(&[(-1, "1")], 2)).unwrap()).unwrap();
        let mut expected = HeckeElement::zero(2);
        expected.add_term(word("", 2), QPoly::q()).unwrap();
        expected
            .add_term(word("1", 2), QPoly::one_minus_q())
            .unwrap();
        expected
            .add_term(word("1 1", 2), QPoly::constant(-1))
            .unwrap();
        assert_eq!(lhs, expected);
    }

    #[test]
    fn cancelling_terms_are_dropped() {
        let mut x = signed(&[(1, "1"), (-1, "1")], 2);
        assert!(x.is_zero());
        assert!(x.add_term(word("", 3), QPoly::one()).is_err());
    }
}
