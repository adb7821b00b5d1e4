//! Permutations of `{1, ..., N}` and the modular one-cycle construction.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::channel::{ChannelId, ChannelSet};
use crate::error::{Error, Result};
use crate::rng::{stream, StreamTag};

/// A bijection of `{1, ..., N}` stored as its forward table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    forward: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { forward: (1..=n as u32).collect() }
    }

    /// `images[i - 1]` is the image of `i`.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v as usize > n || seen[v as usize] {
                return Err(Error::InvalidInput(format!("{images:?} is not a permutation of 1..={n}")));
            }
            seen[v as usize] = true;
        }
        Ok(Permutation { forward: images })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.forward.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: u32) -> u32 {
        self.forward[i as usize - 1]
    }

    #[inline]
    pub fn apply_channel(&self, c: ChannelId) -> ChannelId {
        ChannelId(self.apply(c.0))
    }

    pub fn images(&self) -> &[u32] {
        &self.forward
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.forward.len()];
        for (i, &v) in self.forward.iter().enumerate() {
            inv[v as usize - 1] = i as u32 + 1;
        }
        Permutation { forward: inv }
    }

    /// `self ∘ other`, i.e. `other` is applied first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different sizes");
        Permutation { forward: other.forward.iter().map(|&i| self.apply(i)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.forward.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    /// `π^t` by repeated squaring; `π^0` is the identity.
    pub fn power(&self, mut t: u64) -> Permutation {
        let mut result = Permutation::identity(self.len());
        let mut base = self.clone();
        while t > 0 {
            if t & 1 == 1 {
                result = result.compose(&base);
            }
            t >>= 1;
            if t > 0 {
                base = base.compose(&base);
            }
        }
        result
    }

    /// Lengths of the cycles in the decomposition, in order of smallest element.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.len();
        let mut visited = vec![false; n + 1];
        let mut lengths = Vec::new();
        for start in 1..=n {
            if visited[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !visited[i] {
                visited[i] = true;
                i = self.forward[i - 1] as usize;
                len += 1;
            }
            lengths.push(len);
        }
        lengths
    }

    pub fn is_one_cycle(&self) -> bool {
        !self.is_empty() && self.cycle_lengths() == [self.len()]
    }

    /// Relabels every channel of `set`.
    pub fn image_of(&self, set: &ChannelSet) -> ChannelSet {
        ChannelSet::new(set.iter().map(|c| self.apply_channel(c))).expect("image of a nonempty set is nonempty")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.forward.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// A uniformly random permutation drawn with a Fisher–Yates shuffle.
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut forward: Vec<u32> = (1..=n as u32).collect();
    forward.shuffle(rng);
    Permutation { forward }
}

/// The `index`-th permutation of the stream keyed by `seed`.
pub fn seeded_permutation(n: usize, seed: u64, index: u64) -> Permutation {
    random_permutation(n, &mut stream(seed, StreamTag::Permutation, index))
}

/// The cyclic shift `i ↦ (i mod N) + 1`.
pub fn rotation(n: usize) -> Permutation {
    Permutation { forward: (1..=n as u32).map(|i| (i % n as u32) + 1).collect() }
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Whether `g` generates the multiplicative group modulo the prime `p`.
pub fn is_generator(p: u64, g: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if g == 0 || g >= p {
        return Err(Error::InvalidInput(format!("generator {g} outside [1, {}]", p - 1)));
    }
    let order = p - 1;
    Ok(distinct_prime_factors(order).into_iter().all(|q| mod_pow(g, order / q, p) != 1))
}

/// The largest primitive root modulo `p`. Small generators spread a fixed
/// available set unevenly across the period, so the search runs downward.
pub fn find_generator(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    for g in (1..p).rev() {
        if is_generator(p, g)? {
            return Ok(g);
        }
    }
    unreachable!("every prime has a primitive root")
}

/// Smallest prime `P >= n + 1` and the padded channel count `P - 1`.
/// Channels `n + 1 ..= P - 1` are fictitious and never available to a user.
pub fn next_prime_pad(n: u64) -> (u64, u64) {
    let mut p = n + 1;
    while !is_prime(p) {
        p += 1;
    }
    (p, p - 1)
}

/// Parameters of the permutation `i ↦ g·i mod P` on `{1, ..., P - 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModuloParams {
    prime: u64,
    generator: u64,
}

impl ModuloParams {
    pub fn new(prime: u64, generator: u64) -> Result<Self> {
        if !is_generator(prime, generator)? {
            return Err(Error::InvalidInput(format!("{generator} is not a primitive root modulo {prime}")));
        }
        Ok(ModuloParams { prime, generator })
    }

    /// Padded parameters for `n` real channels with the largest generator.
    pub fn for_channels(n: u64) -> Self {
        let (prime, _) = next_prime_pad(n);
        let generator = find_generator(prime).expect("prime by construction");
        ModuloParams { prime, generator }
    }

    #[inline]
    pub fn prime(&self) -> u64 {
        self.prime
    }

    #[inline]
    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// The padded channel count `P - 1`, which is also the schedule period.
    #[inline]
    pub fn channel_count(&self) -> u64 {
        self.prime - 1
    }

    /// `g^t mod P`, the multiplier of `π^t`.
    #[inline]
    pub fn multiplier(&self, t: u64) -> u64 {
        mod_pow(self.generator, t, self.prime)
    }

    pub fn as_permutation(&self) -> Permutation {
        let p = self.prime;
        Permutation { forward: (1..p).map(|i| (self.generator * i % p) as u32).collect() }
    }
}
