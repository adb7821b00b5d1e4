//! Time-indexed consistent selectors.
//!
//! A schedule assigns a relabeling `π_t` to every slot `t ≥ 1` and selects
//! `argmin_{c ∈ set} π_t(c)`. Slots are numbered from 1.

use crate::channel::{ChannelId, ChannelSet, MaskedSet};
use crate::error::{Error, Result};
use crate::permutation::{mod_pow, rotation, seeded_permutation, ModuloParams, Permutation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SelectorSchedule {
    /// A fresh pseudo-random permutation per slot, drawn from stream `(seed, t)`.
    RandomPerm { channels: usize, seed: u64 },
    /// `π_t = π^t` for a fixed permutation (one-cycle in the interesting case).
    OneCyclePower(Permutation),
    /// `π_t(c) = g^t · c mod P` over the padded channel range `1..P`.
    Modulo(ModuloParams),
    /// Rotation-based relabeling: rank of `c` at slot `t` is `π₁(c) − π₂(t)` cyclically.
    Lsh2 { pi1: Permutation, pi2: Permutation },
}

impl SelectorSchedule {
    pub fn random_perm(channels: usize, seed: u64) -> Result<Self> {
        if channels == 0 {
            return Err(Error::InvalidInput("schedule needs at least one channel".into()));
        }
        Ok(SelectorSchedule::RandomPerm { channels, seed })
    }

    pub fn rotation(channels: usize) -> Result<Self> {
        if channels == 0 {
            return Err(Error::InvalidInput("schedule needs at least one channel".into()));
        }
        Ok(SelectorSchedule::OneCyclePower(rotation(channels)))
    }

    pub fn lsh2(pi1: Permutation, pi2: Permutation) -> Result<Self> {
        if pi1.len() != pi2.len() || pi1.is_empty() {
            return Err(Error::InvalidInput(format!(
                "LSH2 permutations must share a nonzero length, got {} and {}",
                pi1.len(),
                pi2.len()
            )));
        }
        Ok(SelectorSchedule::Lsh2 { pi1, pi2 })
    }

    /// Size of the (possibly padded) label range the schedule permutes.
    pub fn channel_count(&self) -> usize {
        match self {
            SelectorSchedule::RandomPerm { channels, .. } => *channels,
            SelectorSchedule::OneCyclePower(pi) => pi.len(),
            SelectorSchedule::Modulo(m) => m.channel_count() as usize,
            SelectorSchedule::Lsh2 { pi1, .. } => pi1.len(),
        }
    }

    /// The relabeling in force at slot `t`.
    pub fn slot(&self, t: u64) -> SlotSelector {
        debug_assert!(t >= 1, "slots are numbered from 1");
        match self {
            SelectorSchedule::RandomPerm { channels, seed } => {
                SlotSelector::from_permutation(seeded_permutation(*channels, *seed, t))
            }
            SelectorSchedule::OneCyclePower(pi) => SlotSelector::from_permutation(pi.power(t % pi.len() as u64)),
            SelectorSchedule::Modulo(m) => {
                let period = m.prime() - 1;
                let mult = m.multiplier(t);
                let inv = mod_pow(m.generator(), period - t % period, m.prime());
                SlotSelector::Modulo { prime: m.prime(), mult, inv }
            }
            SelectorSchedule::Lsh2 { pi1, pi2 } => SlotSelector::from_permutation(lsh2_equivalent_pi(pi1, pi2, t)),
        }
    }

    /// Validated single selection. Hot loops should use [`SelectorSchedule::slot`] once per slot.
    pub fn select(&self, t: u64, c: &ChannelSet) -> Result<ChannelId> {
        if t == 0 {
            return Err(Error::InvalidInput("slots are numbered from 1".into()));
        }
        if c.max().index() > self.channel_count() {
            return Err(Error::InvalidInput(format!(
                "channel {} exceeds the schedule's range of {}",
                c.max(),
                self.channel_count()
            )));
        }
        Ok(self.slot(t).select(c))
    }
}

/// `select(sched, t, c)` as a free function.
pub fn select(sched: &SelectorSchedule, t: u64, c: &ChannelSet) -> Result<ChannelId> {
    sched.select(t, c)
}

/// The relabeling `π_t` for one slot, shared by every user hopping in that slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlotSelector {
    /// `rank[c]` is `π_t(c)`; `order[k - 1]` is the channel with rank `k`.
    Perm { rank: Vec<u32>, order: Vec<u32> },
    /// Rank `mult · c mod P`; the channel with rank `k` is `inv · k mod P`.
    Modulo { prime: u64, mult: u64, inv: u64 },
}

impl SlotSelector {
    pub fn from_permutation(pi: Permutation) -> Self {
        let order = pi.inverse().images().to_vec();
        let mut rank = Vec::with_capacity(pi.len() + 1);
        rank.push(0);
        rank.extend_from_slice(pi.images());
        SlotSelector::Perm { rank, order }
    }

    #[inline]
    pub fn rank(&self, c: ChannelId) -> u64 {
        match self {
            SlotSelector::Perm { rank, .. } => rank[c.index()] as u64,
            SlotSelector::Modulo { prime, mult, .. } => mult * c.get() as u64 % prime,
        }
    }

    fn label_count(&self) -> usize {
        match self {
            SlotSelector::Perm { order, .. } => order.len(),
            SlotSelector::Modulo { prime, .. } => *prime as usize - 1,
        }
    }

    /// Minimum-rank member of `c`.
    #[inline]
    pub fn select(&self, c: &ChannelSet) -> ChannelId {
        c.iter().min_by_key(|&ch| self.rank(ch)).expect("channel sets are nonempty")
    }

    /// Same result as [`SlotSelector::select`], but walks labels in rank order when
    /// the set is dense enough that the walk is shorter than a scan of its members.
    #[inline]
    pub fn select_masked(&self, c: &MaskedSet) -> ChannelId {
        let len = c.set().len();
        let labels = self.label_count();
        if len * len <= labels {
            return self.select(c.set());
        }
        match self {
            SlotSelector::Perm { order, .. } => {
                order.iter().map(|&v| ChannelId(v)).find(|&ch| c.contains(ch)).expect("every member has a rank")
            }
            SlotSelector::Modulo { prime, inv, .. } => (1..*prime)
                .map(|k| ChannelId((inv * k % prime) as u32))
                .find(|&ch| c.contains(ch))
                .expect("every member has a rank"),
        }
    }
}

/// `((π^rot)⁻¹)^{π₂(t)} ∘ π₁`, with `π₂` indexed cyclically for `t > N`.
pub fn lsh2_equivalent_pi(pi1: &Permutation, pi2: &Permutation, t: u64) -> Permutation {
    let n = pi1.len() as u64;
    let shift = pi2.apply(((t - 1) % n) as u32 + 1) as u64;
    let images = pi1.images().iter().map(|&v| ((v as u64 + n - shift - 1) % n) as u32 + 1).collect();
    Permutation::from_images(images).expect("a rotation of a permutation is a permutation")
}

/// One clock per available channel, advanced by multiplication with the generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualClocks {
    params: ModuloParams,
    t: u64,
    clocks: Vec<(ChannelId, u64)>,
}

impl VirtualClocks {
    pub fn new(params: ModuloParams, c: &ChannelSet) -> Result<Self> {
        if c.max().get() as u64 >= params.prime() {
            return Err(Error::InvalidInput(format!("channel {} is outside 1..{}", c.max(), params.prime())));
        }
        let clocks = c.iter().map(|ch| (ch, ch.get() as u64)).collect();
        Ok(VirtualClocks { params, t: 0, clocks })
    }

    pub fn slot(&self) -> u64 {
        self.t
    }

    pub fn value(&self, c: ChannelId) -> Option<u64> {
        self.clocks.iter().find(|(ch, _)| *ch == c).map(|&(_, v)| v)
    }

    pub fn step(&mut self) {
        let (p, g) = (self.params.prime(), self.params.generator());
        for (_, v) in &mut self.clocks {
            *v = *v * g % p;
        }
        self.t += 1;
    }

    /// The channel whose clock currently reads lowest.
    pub fn argmin(&self) -> ChannelId {
        self.clocks.iter().min_by_key(|&&(_, v)| v).expect("channel sets are nonempty").0
    }
}

pub fn modulo_step(mut vc: VirtualClocks) -> VirtualClocks {
    vc.step();
    vc
}
