//! Weighted multigraphs with exact rational weights, cuts and weight statistics.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::rational::{common_denominator, Rational};

/// Symmetric nonnegative weight matrix on a labelled, totally ordered vertex set.
///
/// Immutable after construction: zero diagonal, symmetry, nonnegativity and
/// distinct labels are checked once in [`Multigraph::new`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    labels: Vec<String>,
    weights: Vec<Rational>,
}

impl Multigraph {
    /// `weights` is row-major `n × n`.
    pub fn new(labels: Vec<String>, weights: Vec<Rational>) -> Result<Self, Error> {
        let n = labels.len();
        if weights.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: weights.len() });
        }
        let distinct: BTreeSet<&str> = labels.iter().map(String::as_str).collect();
        if distinct.len() != n {
            return Err(Error::InvalidGraph("vertex labels are not distinct".into()));
        }
        for i in 0..n {
            if !weights[i * n + i].is_zero() {
                return Err(Error::InvalidGraph(format!("nonzero diagonal at {i}")));
            }
            for j in (i + 1)..n {
                let w = &weights[i * n + j];
                if w != &weights[j * n + i] {
                    return Err(Error::InvalidGraph(format!("asymmetric at ({i},{j})")));
                }
                if w.is_negative() {
                    return Err(Error::InvalidGraph(format!("negative weight at ({i},{j})")));
                }
            }
        }
        Ok(Multigraph { labels, weights })
    }

    /// Builds a graph from the positive edges `(i, j, w)`; unlisted pairs get weight zero.
    pub fn from_edges(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self, Error> {
        let n = labels.len();
        let mut weights = vec![Rational::zero(); n * n];
        for (i, j, w) in edges {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange { index: i.max(j), len: n });
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("loop at {i}")));
            }
            if !weights[i * n + j].is_zero() {
                return Err(Error::InvalidGraph(format!("duplicate edge ({i},{j})")));
            }
            weights[i * n + j] = w.clone();
            weights[j * n + i] = w;
        }
        Self::new(labels, weights)
    }

    /// Builds a graph from an integer weight function evaluated on `i < j`.
    pub fn from_fn(labels: Vec<String>, mut weight: impl FnMut(usize, usize) -> i64) -> Result<Self, Error> {
        let n = labels.len();
        let mut weights = vec![Rational::zero(); n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let w = weight(i, j);
                if w != 0 {
                    let q = Rational::from_integer(BigInt::from(w));
                    weights[i * n + j] = q.clone();
                    weights[j * n + i] = q;
                }
            }
        }
        Self::new(labels, weights)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weight(&self, i: usize, j: usize) -> &Rational {
        &self.weights[i * self.n() + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        let n = self.n();
        &self.weights[i * n..(i + 1) * n]
    }

    /// Positive-weight pairs `i < j`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |i| {
            ((i + 1)..n).filter_map(move |j| {
                let w = self.weight(i, j);
                (!w.is_zero()).then_some((i, j, w))
            })
        })
    }

    /// Sum of all weights over unordered pairs.
    pub fn total_weight(&self) -> Rational {
        self.edges().fold(Rational::zero(), |acc, (_, _, w)| acc + w)
    }

    pub fn cut_weight(&self, cut: &Cut) -> Result<Rational, Error> {
        if cut.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: cut.len() });
        }
        Ok(self
            .edges()
            .filter(|&(i, j, _)| cut.contains(i) != cut.contains(j))
            .fold(Rational::zero(), |acc, (_, _, w)| acc + w))
    }

    pub fn weight_histogram(&self) -> WeightHistogram {
        let n = self.n() as u64;
        let mut counts = BTreeMap::new();
        let mut positive = 0u64;
        for (_, _, w) in self.edges() {
            *counts.entry(w.clone()).or_insert(0u64) += 1;
            positive += 1;
        }
        WeightHistogram { counts, zero_pairs: n * n.saturating_sub(1) / 2 - positive }
    }

    pub fn weighted_degree(&self, i: usize) -> Result<Rational, Error> {
        if i >= self.n() {
            return Err(Error::IndexOutOfRange { index: i, len: self.n() });
        }
        Ok(self.row(i).iter().fold(Rational::zero(), |acc, w| acc + w))
    }

    /// The common weighted degree, if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<Rational> {
        let d = self.weighted_degree(0).ok()?;
        (1..self.n()).all(|i| self.weighted_degree(i).ok().as_ref() == Some(&d)).then_some(d)
    }

    /// Sorted row of weights at `i`; the multiset of these is an isomorphism invariant.
    pub fn weight_profile(&self, i: usize) -> Vec<Rational> {
        let mut row = self.row(i).to_vec();
        row.sort();
        row
    }

    /// Weights rescaled to machine integers, if they fit with headroom for sums.
    pub fn integer_weights(&self) -> Option<IntWeights> {
        let scale = common_denominator(self.weights.iter());
        let n = self.n();
        let mut w = Vec::with_capacity(n * n);
        let mut total: i128 = 0;
        for q in &self.weights {
            let v = (q.numer() * (&scale / q.denom())).to_i64()?;
            total += i128::from(v);
            w.push(v);
        }
        // every partial cut or gain sum stays below 2·total
        if total >= i128::from(i64::MAX / 4) {
            return None;
        }
        Some(IntWeights { n, scale, weights: w })
    }
}

/// Integer image of a multigraph's weights: `weight(i,j) = weights[i*n+j] / scale`.
#[derive(Debug, Clone)]
pub struct IntWeights {
    pub n: usize,
    pub scale: BigInt,
    pub weights: Vec<i64>,
}

impl IntWeights {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.weights[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.weights[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rational(&self, v: i64) -> Rational {
        Rational::new(BigInt::from(v), self.scale.clone())
    }

    /// Scaled cut weight for a membership predicate.
    pub fn cut_weight(&self, in_s: impl Fn(usize) -> bool) -> i64 {
        let mut total = 0;
        for i in 0..self.n {
            if !in_s(i) {
                continue;
            }
            let row = self.row(i);
            for (j, &w) in row.iter().enumerate() {
                if !in_s(j) {
                    total += w;
                }
            }
        }
        total
    }
}

/// A cut `(S, S^c)` as a membership bitmask over the vertex indexing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cut {
    len: usize,
    words: Vec<u64>,
}

impl Cut {
    /// The cut with `S` empty.
    pub fn empty(len: usize) -> Self {
        Cut { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_members(len: usize, members: impl IntoIterator<Item = usize>) -> Result<Self, Error> {
        let mut cut = Cut::empty(len);
        for i in members {
            if i >= len {
                return Err(Error::IndexOutOfRange { index: i, len });
            }
            cut.set(i, true);
        }
        Ok(cut)
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut cut = Cut::empty(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            cut.set(i, b);
        }
        cut
    }

    /// Cut of at most 64 vertices from a `u64` mask (bit `i` is vertex `i`).
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= 64, "from_mask supports at most 64 vertices");
        let mut cut = Cut::empty(len);
        if len > 0 {
            let keep = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
            cut.words[0] = mask & keep;
        }
        cut
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, member: bool) {
        let bit = 1u64 << (i % 64);
        if member {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn complement(&self) -> Self {
        let mut c = Cut::empty(self.len);
        for i in 0..self.len {
            c.set(i, !self.contains(i));
        }
        c
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    pub fn size(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest 64 vertices as a mask.
    pub fn low_mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    /// Big-endian hex of the membership bitmask (bit `i` is vertex `i`).
    pub fn to_hex(&self) -> String {
        let mut s = String::from("0x");
        let mut started = false;
        for w in self.words.iter().rev() {
            if started {
                let _ = write!(s, "{w:016x}");
            } else if *w != 0 {
                let _ = write!(s, "{w:x}");
                started = true;
            }
        }
        if !started {
            s.push('0');
        }
        s
    }
}

/// Number of unordered pairs per positive weight value, plus the zero-weight pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightHistogram {
    counts: BTreeMap<Rational, u64>,
    zero_pairs: u64,
}

impl WeightHistogram {
    /// `S_k`, zero when weight `k` never occurs.
    pub fn count(&self, k: &Rational) -> u64 {
        self.counts.get(k).copied().unwrap_or(0)
    }

    pub fn count_int(&self, k: i64) -> u64 {
        self.count(&Rational::from_integer(BigInt::from(k)))
    }

    pub fn contains(&self, k: &Rational) -> bool {
        self.counts.contains_key(k)
    }

    pub fn zero_pairs(&self) -> u64 {
        self.zero_pairs
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Rational, u64)> {
        self.counts.iter().map(|(k, &c)| (k, c))
    }

    pub fn positive_pairs(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `Σ k·S_k`, the total weight.
    pub fn weighted_sum(&self) -> Rational {
        self.iter()
            .fold(Rational::zero(), |acc, (k, c)| acc + k * Rational::from_integer(c.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use alloc::string::ToString;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn single_edge_cut() {
        let g = Multigraph::from_edges(labels(2), [(0, 1, int(2))]).unwrap();
        let s = Cut::from_members(2, [1]).unwrap();
        assert_eq!(g.cut_weight(&s).unwrap(), int(2));
        assert_eq!(g.cut_weight(&Cut::empty(2)).unwrap(), int(0));
        assert!(matches!(
            g.cut_weight(&Cut::empty(3)),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn rejects_malformed_matrices() {
        let w = vec![int(0), int(1), int(2), int(0)];
        assert!(matches!(Multigraph::new(labels(2), w), Err(Error::InvalidGraph(_))));
        let w = vec![int(1), int(0), int(0), int(0)];
        assert!(Multigraph::new(labels(2), w).is_err());
        let w = vec![int(0), int(-1), int(-1), int(0)];
        assert!(Multigraph::new(labels(2), w).is_err());
        let dup = vec!["a".to_string(), "a".to_string()];
        assert!(Multigraph::new(dup, vec![int(0); 4]).is_err());
        assert!(Multigraph::from_edges(labels(2), [(0, 0, int(1))]).is_err());
    }

    #[test]
    fn isolated_vertex_degree() {
        let g = Multigraph::from_edges(labels(1), []).unwrap();
        assert_eq!(g.weighted_degree(0).unwrap(), int(0));
        assert!(matches!(g.weighted_degree(1), Err(Error::IndexOutOfRange { .. })));
        assert_eq!(g.weight_histogram().zero_pairs(), 0);
    }

    #[test]
    fn histogram_and_integer_image() {
        let g = Multigraph::from_edges(labels(3), [(0, 1, ratio(1, 2)), (1, 2, ratio(1, 3))]).unwrap();
        let h = g.weight_histogram();
        assert_eq!(h.count(&ratio(1, 2)), 1);
        assert_eq!(h.zero_pairs(), 1);
        assert_eq!(h.weighted_sum(), ratio(5, 6));
        let iw = g.integer_weights().unwrap();
        assert_eq!(iw.scale, BigInt::from(6));
        assert_eq!(iw.get(0, 1), 3);
        assert_eq!(iw.to_rational(iw.cut_weight(|i| i == 1)), ratio(5, 6));
    }

    #[test]
    fn cut_hex_and_complement() {
        let c = Cut::from_members(70, [0, 3, 65]).unwrap();
        assert_eq!(c.to_hex(), "0x20000000000000009");
        assert_eq!(c.complement().size(), 67);
        assert_eq!(Cut::empty(5).to_hex(), "0x0");
        assert_eq!(Cut::from_mask(4, 0b1010).members().collect::<Vec<_>>(), vec![1, 3]);
    }
}
