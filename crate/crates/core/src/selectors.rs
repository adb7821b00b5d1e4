//! Channel selection functions and the consistency property.
//!
//! A selector is consistent when shrinking the available set never changes
//! its choice as long as the chosen channel survives. Every consistent
//! selector is "pick the smallest label" after some relabeling, which is why
//! the rest of the crate represents selectors by permutations.

use rand::Rng;

use crate::channel::{ChannelId, ChannelSet};
use crate::error::{Error, Result};
use crate::permutation::Permutation;

/// Largest channel count for which explicit tables are built.
pub const MAX_TABLE_CHANNELS: usize = 12;
/// Largest channel count accepted by [`count_consistent`].
pub const MAX_COUNT_CHANNELS: usize = 6;

#[inline]
pub fn phi_min(c: &ChannelSet) -> ChannelId {
    c.min()
}

#[inline]
pub fn phi_max(c: &ChannelSet) -> ChannelId {
    c.max()
}

/// `argmin` of an injective score over `c`.
pub fn score_select<F>(score: F, c: &ChannelSet) -> Result<ChannelId>
where
    F: Fn(ChannelId) -> f64,
{
    let mut scored: Vec<(f64, ChannelId)> = c.iter().map(|ch| (score(ch), ch)).collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in scored.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::InvalidScore(w[0].1.get(), w[1].1.get()));
        }
    }
    Ok(scored[0].1)
}

/// `π⁻¹(min π(c))`: the member of `c` with the smallest relabeled value.
#[inline]
pub fn conjugate_select(pi: &Permutation, c: &ChannelSet) -> ChannelId {
    c.iter().min_by_key(|&ch| pi.apply(ch.get())).expect("channel sets are nonempty")
}

/// A priority order `σ`: the selector returns the first `σ(i)` present in the set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrioritySigma(pub Permutation);

impl PrioritySigma {
    pub fn new(order: Permutation) -> Self {
        PrioritySigma(order)
    }
}

pub fn selector_from_priority(sigma: &PrioritySigma, c: &ChannelSet) -> ChannelId {
    sigma
        .0
        .images()
        .iter()
        .map(|&v| ChannelId(v))
        .find(|&ch| c.contains(ch))
        .expect("a permutation of 1..=N meets every nonempty subset")
}

/// An explicit selector over every nonempty subset of `{1, ..., N}`, keyed by
/// bitmask (bit `i - 1` for channel `i`). A zero entry marks an undefined subset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SelectorTable {
    n: usize,
    choice: Vec<u8>,
}

impl SelectorTable {
    pub fn from_fn<F>(n: usize, f: F) -> Result<Self>
    where
        F: Fn(&ChannelSet) -> ChannelId,
    {
        check_table_size(n)?;
        let mut choice = vec![0u8; 1 << n];
        for (mask, slot) in choice.iter_mut().enumerate().skip(1) {
            let set = ChannelSet::from_mask(mask as u64).expect("nonzero mask");
            let ch = f(&set);
            if !set.contains(ch) {
                return Err(Error::InvalidInput(format!("selector picked {ch} outside {set}")));
            }
            *slot = ch.get() as u8;
        }
        Ok(SelectorTable { n, choice })
    }

    /// Raw table; entry `mask` holds the chosen channel (or 0 if undefined).
    pub fn from_choices(n: usize, choice: Vec<u8>) -> Result<Self> {
        check_table_size(n)?;
        if choice.len() != 1 << n {
            return Err(Error::InvalidInput(format!("table for N={n} needs {} entries, got {}", 1 << n, choice.len())));
        }
        for (mask, &ch) in choice.iter().enumerate().skip(1) {
            if ch != 0 && (ch as usize > n || mask & (1 << (ch - 1)) == 0) {
                return Err(Error::InvalidInput(format!(
                    "entry for mask {mask:#b} picks channel {ch} outside the set"
                )));
            }
        }
        Ok(SelectorTable { n, choice })
    }

    /// Each subset picks a uniformly random member; almost never consistent.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_table_size(n)?;
        let mut choice = vec![0u8; 1 << n];
        for (mask, slot) in choice.iter_mut().enumerate().skip(1) {
            let members: Vec<u8> = (0..n).filter(|b| mask & (1 << b) != 0).map(|b| b as u8 + 1).collect();
            *slot = members[rng.random_range(0..members.len())];
        }
        Ok(SelectorTable { n, choice })
    }

    #[inline]
    pub fn channels(&self) -> usize {
        self.n
    }

    /// `None` for an undefined entry.
    #[inline]
    pub fn get_mask(&self, mask: usize) -> Option<ChannelId> {
        match self.choice[mask] {
            0 => None,
            ch => Some(ChannelId(ch as u32)),
        }
    }

    pub fn get(&self, c: &ChannelSet) -> Option<ChannelId> {
        if c.max().get() as usize > self.n {
            return None;
        }
        self.get_mask(c.to_mask() as usize)
    }

    pub fn is_complete(&self) -> bool {
        self.choice.iter().skip(1).all(|&ch| ch != 0)
    }
}

fn check_table_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_TABLE_CHANNELS {
        return Err(Error::ResourceLimit(format!(
            "explicit selector tables need 1 <= N <= {MAX_TABLE_CHANNELS}, got {n}"
        )));
    }
    Ok(())
}

/// Consistency via single-element removals. Any pair `c' ⊂ c''` is reached by
/// a chain of removals, so checking each removal is enough.
pub fn check_consistent(table: &SelectorTable) -> Result<bool> {
    if !table.is_complete() {
        return Err(Error::InvalidInput("selector table is incomplete".into()));
    }
    let n = table.channels();
    for mask in 1usize..(1 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let chosen = table.choice[mask];
        for b in 0..n {
            let bit = 1 << b;
            if mask & bit == 0 || b as u8 + 1 == chosen {
                continue;
            }
            if table.choice[mask & !bit] != chosen {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Number of distinct consistent selectors on `N` channels, found by a
/// depth-first search over selector tables that prunes inconsistent prefixes.
pub fn count_consistent(n: usize) -> Result<u64> {
    if n == 0 || n > MAX_COUNT_CHANNELS {
        return Err(Error::ResourceLimit(format!("count_consistent supports 1 <= N <= {MAX_COUNT_CHANNELS}, got {n}")));
    }
    let mut masks: Vec<usize> = (1..(1usize << n)).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let mut table = vec![0u8; 1 << n];
    Ok(extend(&masks, 0, n, &mut table))
}

fn extend(masks: &[usize], at: usize, n: usize, table: &mut [u8]) -> u64 {
    let Some(&mask) = masks.get(at) else {
        return 1;
    };
    let mut total = 0;
    for b in 0..n {
        if mask & (1 << b) == 0 {
            continue;
        }
        let y = b as u8 + 1;
        // every removal of some x != y must already pick y
        let ok = (0..n).all(|x| {
            let bit = 1 << x;
            mask & bit == 0 || x == b || table[mask & !bit] == y
        });
        if ok {
            table[mask] = y;
            total += extend(masks, at + 1, n, table);
            table[mask] = 0;
        }
    }
    total
}
