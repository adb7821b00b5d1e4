//! Channel identifiers and available-channel sets.

use std::fmt;

use crate::error::{Error, Result};

/// A globally labeled channel, numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChannelId(pub u32);

impl ChannelId {
    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub(crate) fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ChannelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for ChannelId {
    fn from(v: u32) -> Self {
        ChannelId(v)
    }
}

/// A nonempty set of channels kept sorted ascending without duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChannelSet {
    members: Vec<ChannelId>,
}

impl ChannelSet {
    /// Builds a set from arbitrary channel numbers; duplicates collapse.
    pub fn new<I>(channels: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<ChannelId>,
    {
        let mut members: Vec<ChannelId> = channels.into_iter().map(Into::into).collect();
        if members.is_empty() {
            return Err(Error::InvalidInput("channel set is empty".into()));
        }
        if members.iter().any(|c| c.0 == 0) {
            return Err(Error::InvalidInput("channel ids start at 1".into()));
        }
        members.sort_unstable();
        members.dedup();
        Ok(ChannelSet { members })
    }

    /// `{1, 2, ..., n}`.
    pub fn full(n: u32) -> Result<Self> {
        ChannelSet::new(1..=n)
    }

    pub fn singleton(c: ChannelId) -> Result<Self> {
        ChannelSet::new([c])
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// Always false; kept for API symmetry with collections.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    #[inline]
    pub fn members(&self) -> &[ChannelId] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = ChannelId> + '_ {
        self.members.iter().copied()
    }

    #[inline]
    pub fn contains(&self, c: ChannelId) -> bool {
        self.members.binary_search(&c).is_ok()
    }

    #[inline]
    pub fn min(&self) -> ChannelId {
        self.members[0]
    }

    #[inline]
    pub fn max(&self) -> ChannelId {
        self.members[self.members.len() - 1]
    }

    pub fn is_subset(&self, other: &ChannelSet) -> bool {
        let mut j = 0;
        for &c in &self.members {
            while j < other.members.len() && other.members[j] < c {
                j += 1;
            }
            if j == other.members.len() || other.members[j] != c {
                return false;
            }
        }
        true
    }

    /// `None` when the sets are disjoint.
    pub fn intersection(&self, other: &ChannelSet) -> Option<ChannelSet> {
        let (a, b) = (&self.members, &other.members);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(a.len().min(b.len()));
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        if out.is_empty() {
            None
        } else {
            Some(ChannelSet { members: out })
        }
    }

    pub fn intersection_len(&self, other: &ChannelSet) -> usize {
        let (a, b) = (&self.members, &other.members);
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    pub fn union(&self, other: &ChannelSet) -> ChannelSet {
        let (a, b) = (&self.members, &other.members);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i] < b[j]) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j] < a[i] {
                out.push(b[j]);
                j += 1;
            } else {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
        ChannelSet { members: out }
    }

    /// Intersection of every set in `sets`; `None` if empty input or disjoint.
    pub fn intersect_all<'a, I>(sets: I) -> Option<ChannelSet>
    where
        I: IntoIterator<Item = &'a ChannelSet>,
    {
        let mut iter = sets.into_iter();
        let mut acc = iter.next()?.clone();
        for s in iter {
            acc = acc.intersection(s)?;
        }
        Some(acc)
    }

    /// Union of every set in `sets`; `None` on empty input.
    pub fn union_all<'a, I>(sets: I) -> Option<ChannelSet>
    where
        I: IntoIterator<Item = &'a ChannelSet>,
    {
        let mut iter = sets.into_iter();
        let mut acc = iter.next()?.clone();
        for s in iter {
            acc = acc.union(s);
        }
        Some(acc)
    }

    /// The set with `c` removed, or `None` if that would leave it empty.
    pub fn without(&self, c: ChannelId) -> Option<ChannelSet> {
        let members: Vec<ChannelId> = self.members.iter().copied().filter(|&x| x != c).collect();
        if members.is_empty() {
            None
        } else {
            Some(ChannelSet { members })
        }
    }

    /// Bit `i - 1` is set for channel `i`. Only meaningful for channels up to 64.
    pub fn to_mask(&self) -> u64 {
        self.members.iter().fold(0u64, |m, c| m | (1u64 << (c.0 - 1)))
    }

    pub fn from_mask(mask: u64) -> Option<ChannelSet> {
        if mask == 0 {
            return None;
        }
        let members = (0..64).filter(|b| mask & (1u64 << b) != 0).map(|b| ChannelId(b + 1)).collect();
        Some(ChannelSet { members })
    }
}

/// Bitset view of a channel set for constant-time membership tests.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChannelMask {
    words: Vec<u64>,
}

impl ChannelMask {
    pub fn from_set(set: &ChannelSet) -> Self {
        let mut words = vec![0u64; set.max().index() / 64 + 1];
        for c in set.iter() {
            words[c.index() / 64] |= 1 << (c.index() % 64);
        }
        ChannelMask { words }
    }

    #[inline]
    pub fn contains(&self, c: ChannelId) -> bool {
        let i = c.index();
        self.words.get(i / 64).is_some_and(|w| w & (1 << (i % 64)) != 0)
    }
}

/// A channel set together with its bitset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskedSet {
    set: ChannelSet,
    mask: ChannelMask,
}

impl MaskedSet {
    pub fn new(set: ChannelSet) -> Self {
        let mask = ChannelMask::from_set(&set);
        MaskedSet { set, mask }
    }

    #[inline]
    pub fn set(&self) -> &ChannelSet {
        &self.set
    }

    #[inline]
    pub fn mask(&self) -> &ChannelMask {
        &self.mask
    }

    #[inline]
    pub fn contains(&self, c: ChannelId) -> bool {
        self.mask.contains(c)
    }
}

impl From<ChannelSet> for MaskedSet {
    fn from(set: ChannelSet) -> Self {
        MaskedSet::new(set)
    }
}

impl fmt::Display for ChannelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}
