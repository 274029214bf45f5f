use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use super::combinat::{binomial, factorial};
use crate::error::{Error, Result};

/// A finitely supported sequence `(m_1, m_2, ...)` of nonnegative integers,
/// stored sparsely as `(index, multiplicity)` pairs with strictly increasing
/// indices and nonzero multiplicities.
///
/// Indexes κ monomials: `{1:3}` is κ₁³, `{1:1,2:1}` is κ₁κ₂.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<(u32, u32)>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn single(index: u32, mult: u32) -> Self {
        Self::from_pairs([(index, mult)]).expect("index must be positive")
    }

    /// Builds from arbitrary pairs; repeated indices accumulate and zero
    /// multiplicities vanish. Index 0 is rejected.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut v: Vec<(u32, u32)> = Vec::new();
        for (i, m) in pairs {
            if i == 0 {
                return Err(Error::invalid("multi-index entries are indexed from 1"));
            }
            v.push((i, m));
        }
        v.sort_unstable();
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(v.len());
        for (i, m) in v {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 += m,
                _ => out.push((i, m)),
            }
        }
        out.retain(|&(_, m)| m > 0);
        Ok(MultiIndex(out))
    }

    /// Multi-index of a multiset of positive indices, e.g. `[1,1,2]` → `{1:2,2:1}`.
    pub fn from_indices(indices: &[u32]) -> Result<Self> {
        Self::from_pairs(indices.iter().map(|&i| (i, 1)))
    }

    pub fn entries(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: u32) -> u32 {
        self.0
            .binary_search_by_key(&index, |&(i, _)| i)
            .map(|p| self.0[p].1)
            .unwrap_or(0)
    }

    /// `|m| = Σ i·m_i`
    pub fn weight(&self) -> u32 {
        self.0.iter().map(|&(i, m)| i * m).sum()
    }

    /// `‖m‖ = Σ m_i`
    pub fn size(&self) -> u32 {
        self.0.iter().map(|&(_, m)| m).sum()
    }

    pub fn norms(&self) -> (u32, u32) {
        self.0
            .iter()
            .fold((0, 0), |(w, s), &(i, m)| (w + i * m, s + m))
    }

    pub fn max_index(&self) -> u32 {
        self.0.last().map_or(0, |&(i, _)| i)
    }

    /// `m! = ∏ m_i!`
    pub fn factorial(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, &(_, m)| acc * factorial(m as u64))
    }

    /// `∏ C(b_i, l_i)`; zero unless `sub ≤ self` componentwise.
    pub fn binomial(&self, sub: &MultiIndex) -> BigInt {
        let mut acc = BigInt::one();
        for &(i, l) in &sub.0 {
            let b = self.get(i);
            if l > b {
                return BigInt::from(0);
            }
            acc *= binomial(b as u64, l as u64);
        }
        acc
    }

    pub fn contains(&self, sub: &MultiIndex) -> bool {
        sub.0.iter().all(|&(i, l)| self.get(i) >= l)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        Self::from_pairs(self.0.iter().chain(other.0.iter()).copied())
            .expect("entries already validated")
    }

    /// `self − other`, or `None` when `other` is not contained in `self`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !self.contains(other) {
            return None;
        }
        let v = self
            .0
            .iter()
            .map(|&(i, m)| (i, m - other.get(i)))
            .filter(|&(_, m)| m > 0)
            .collect();
        Some(MultiIndex(v))
    }

    /// All `L ≤ self`, in lexicographic order of `(l_1, l_2, ...)`.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::new()];
        for &(i, m) in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (m as usize + 1));
            for prefix in &out {
                for l in 0..=m {
                    let mut p: Vec<(u32, u32)> = prefix.clone();
                    if l > 0 {
                        p.push((i, l));
                    }
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// All pairs `(L, L')` with `L + L' = self`, lexicographic in `L`.
    /// There are exactly `∏ (b_i + 1)` of them.
    pub fn splits(&self) -> Vec<(MultiIndex, MultiIndex)> {
        self.sub_indices()
            .into_iter()
            .map(|l| {
                let rest = self.checked_sub(&l).expect("sub-index");
                (l, rest)
            })
            .collect()
    }

    /// Every multi-index of weight exactly `w`, i.e. the partitions of `w`.
    pub fn all_of_weight(w: u32) -> Vec<MultiIndex> {
        fn rec(remaining: u32, max_part: u32, acc: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if remaining == 0 {
                out.push(MultiIndex::from_indices(acc).expect("positive parts"));
                return;
            }
            for part in (1..=remaining.min(max_part)).rev() {
                acc.push(part);
                rec(remaining - part, part, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        rec(w, w, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// Every multi-index of weight at most `w`, ordered by weight.
    pub fn all_up_to_weight(w: u32) -> Vec<MultiIndex> {
        (0..=w).flat_map(Self::all_of_weight).collect()
    }

    /// Expanded list of indices with repetition, e.g. `{1:2,3:1}` → `[1,1,3]`.
    pub fn to_indices(&self) -> Vec<u32> {
        self.0
            .iter()
            .flat_map(|&(i, m)| std::iter::repeat_n(i, m as usize))
            .collect()
    }
}

/// `(weight, size)` of a multi-index.
pub fn multiindex_norms(m: &MultiIndex) -> (u32, u32) {
    m.norms()
}

pub fn multiindex_binomial(b: &MultiIndex, l: &MultiIndex) -> BigInt {
    b.binomial(l)
}

pub fn enumerate_sub_multiindices(b: &MultiIndex) -> Vec<(MultiIndex, MultiIndex)> {
    b.splits()
}

impl fmt::Display for MultiIndex {
    /// `i:m,i:m`; the empty index renders as the empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &(i, m)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}:{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(MultiIndex::empty());
        }
        let pairs = s
            .split(',')
            .map(|item| {
                let (i, m) = item
                    .split_once(':')
                    .ok_or_else(|| Error::invalid(format!("expected index:mult, got {item:?}")))?;
                let i = i
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| Error::invalid(format!("bad index in {item:?}")))?;
                let m = m
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| Error::invalid(format!("bad multiplicity in {item:?}")))?;
                Ok((i, m))
            })
            .collect::<Result<Vec<_>>>()?;
        MultiIndex::from_pairs(pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(s: &str) -> MultiIndex {
        s.parse().unwrap()
    }

    #[test]
    fn norms() {
        assert_eq!(multiindex_norms(&MultiIndex::empty()), (0, 0));
        assert_eq!(multiindex_norms(&mi("1:2,2:1")), (4, 3));
        assert_eq!(multiindex_norms(&mi("3:1")), (3, 1));
    }

    #[test]
    fn binomials() {
        assert_eq!(multiindex_binomial(&mi("1:2"), &mi("1:1")), BigInt::from(2));
        assert_eq!(multiindex_binomial(&mi("1:2,4:7"), &MultiIndex::empty()), BigInt::from(1));
        assert_eq!(multiindex_binomial(&mi("1:1"), &mi("2:1")), BigInt::from(0));
    }

    #[test]
    fn splits_are_ordered_and_complete() {
        assert_eq!(
            enumerate_sub_multiindices(&MultiIndex::empty()),
            vec![(MultiIndex::empty(), MultiIndex::empty())]
        );
        assert_eq!(
            enumerate_sub_multiindices(&mi("1:1")),
            vec![(MultiIndex::empty(), mi("1:1")), (mi("1:1"), MultiIndex::empty())]
        );
        let s = enumerate_sub_multiindices(&mi("1:1,2:1"));
        assert_eq!(s.len(), 4);
        let ls: Vec<_> = s.iter().map(|(l, _)| l.clone()).collect();
        assert_eq!(ls, vec![mi(""), mi("2:1"), mi("1:1"), mi("1:1,2:1")]);
        for (l, r) in s {
            assert_eq!(l.add(&r), mi("1:1,2:1"));
        }
    }

    #[test]
    fn canonical_form() {
        assert_eq!(mi("2:1,1:1,2:0"), mi("1:1,2:1"));
        assert_eq!(MultiIndex::from_indices(&[1, 3, 1]).unwrap(), mi("1:2,3:1"));
        assert!("0:1".parse::<MultiIndex>().is_err());
        assert_eq!(mi("1:2,3:1").to_string(), "1:2,3:1");
        assert_eq!(mi("1:2,3:1").factorial(), BigInt::from(2));
    }

    #[test]
    fn partitions() {
        assert_eq!(MultiIndex::all_of_weight(0), vec![MultiIndex::empty()]);
        assert_eq!(MultiIndex::all_of_weight(3).len(), 3);
        assert_eq!(MultiIndex::all_of_weight(6).len(), 11);
        assert_eq!(MultiIndex::all_up_to_weight(4).len(), 1 + 1 + 2 + 3 + 5);
    }
}
