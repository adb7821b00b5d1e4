//! Slotted K-user rendezvous simulator.
//!
//! Every user picks one channel per slot; users on the same channel in the
//! same slot meet. A run ends when all users share a channel (the TTR) or
//! when the slot budget is exhausted.

use std::collections::HashMap;

use rand::Rng;

use crate::channel::{ChannelId, ChannelSet, MaskedSet};
use crate::error::{Error, Result};
use crate::rng::{stream, unit, StreamTag};
use crate::schedule::{SelectorSchedule, SlotSelector};
use crate::strategy::{self, apply_spreadout3, HopSet, SpreadOutPhase, StrategyKind};

/// Default slot budget per run.
pub const DEFAULT_MAX_SLOTS: u64 = 20_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UserState {
    pub id: usize,
    /// Local slot minus global slot (async only).
    pub offset: u64,
    pub seed: u64,
    /// Available channels.
    pub c: MaskedSet,
    /// Channels known to be common to everyone this user has learned about.
    pub c_known: MaskedSet,
    /// Set hopped on by the stick-together rule.
    pub c_stick: MaskedSet,
}

impl UserState {
    pub fn new(id: usize, c: ChannelSet, seed: u64) -> Self {
        let c = MaskedSet::new(c);
        UserState { id, offset: 0, seed, c_known: c.clone(), c_stick: c.clone(), c }
    }

    pub fn with_offset(mut self, offset: u64) -> Self {
        self.offset = offset;
        self
    }

    #[inline]
    fn local_slot(&self, global: u64) -> u64 {
        global + self.offset
    }
}

/// How users pick channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Algorithm {
    /// A shared consistent schedule.
    Consistent(SelectorSchedule),
    /// A uniform pick per slot from each user's seeded stream.
    RandomBaseline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub max_slots: u64,
    /// Stop at the first slot where all users meet; otherwise observe every slot up to `max_slots`.
    pub stop_at_full: bool,
    pub record_events: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { max_slots: DEFAULT_MAX_SLOTS, stop_at_full: true, record_events: false }
    }
}

/// What an unsynchronized user does when the coin says "not from the multiset".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AsyncFallback {
    /// A uniformly random channel of the hop set.
    #[default]
    UniformChannel,
    /// The selector of the user's current local slot.
    CurrentSlot,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsyncParams {
    /// Size of the selector multiset.
    pub t0: u64,
    /// Probability of drawing from the multiset.
    pub p0: f64,
    pub fallback: AsyncFallback,
}

impl Default for AsyncParams {
    fn default() -> Self {
        AsyncParams { t0: 20, p0: 0.75, fallback: AsyncFallback::UniformChannel }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RendezvousEvent {
    pub global_slot: u64,
    /// Ids of the users that met, ascending.
    pub group: Vec<usize>,
    pub channel: ChannelId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    /// First slot at which every user shared a channel; `None` on timeout.
    pub ttr: Option<u64>,
    pub events: Vec<RendezvousEvent>,
    /// Every slot at which all users met (only tracked with `record_events`).
    pub full_slots: Vec<u64>,
    /// Spread-out runs where no meeting with the pending user could be predicted.
    pub anomalies: u32,
    pub final_states: Vec<UserState>,
}

impl RunResult {
    pub fn timed_out(&self) -> bool {
        self.ttr.is_none()
    }
}

/// Groups of two or more users on the same channel, ordered by their smallest member.
pub fn detect_groups(selections: &[ChannelId]) -> Vec<Vec<usize>> {
    if selections.len() == 2 {
        return if selections[0] == selections[1] { vec![vec![0, 1]] } else { Vec::new() };
    }
    let mut by_channel: HashMap<ChannelId, Vec<usize>> = HashMap::new();
    for (u, &ch) in selections.iter().enumerate() {
        by_channel.entry(ch).or_default().push(u);
    }
    let mut groups: Vec<Vec<usize>> = by_channel.into_values().filter(|g| g.len() >= 2).collect();
    groups.sort_by_key(|g| g[0]);
    groups
}

/// Uniform channel of `set` from the stream `(seed, t)`.
pub fn random_baseline_select(seed: u64, t: u64, set: &ChannelSet) -> ChannelId {
    let i = stream(seed, StreamTag::Channel, t).random_range(0..set.len());
    set.members()[i]
}

fn validate(users: &[UserState], algorithm: &Algorithm, strategy: StrategyKind) -> Result<ChannelSet> {
    if users.len() < 2 {
        return Err(Error::InvalidInput(format!("need at least two users, got {}", users.len())));
    }
    if strategy == StrategyKind::SpreadOut3 && users.len() != 3 {
        return Err(Error::Unsupported(format!("spread-out is defined for three users, got {}", users.len())));
    }
    if let Algorithm::Consistent(s) = algorithm {
        let range = s.channel_count();
        if let Some(u) = users.iter().find(|u| u.c.set().max().index() > range) {
            return Err(Error::InvalidInput(format!(
                "user {} has channel {} beyond the schedule's {range} labels",
                u.id,
                u.c.set().max()
            )));
        }
    }
    ChannelSet::intersect_all(users.iter().map(|u| u.c.set()))
        .ok_or_else(|| Error::InvalidScenario("users share no common channel".into()))
}

struct Tracker {
    k: usize,
    opts: RunOptions,
    ttr: Option<u64>,
    events: Vec<RendezvousEvent>,
    full_slots: Vec<u64>,
}

impl Tracker {
    fn new(k: usize, opts: RunOptions) -> Self {
        Tracker { k, opts, ttr: None, events: Vec::new(), full_slots: Vec::new() }
    }

    /// Records one slot; returns true when the run should stop.
    fn observe(&mut self, t: u64, groups: &[Vec<usize>], choice: &[ChannelId]) -> bool {
        let full = groups.iter().any(|g| g.len() == self.k);
        if self.opts.record_events {
            for g in groups {
                self.events.push(RendezvousEvent { global_slot: t, group: g.clone(), channel: choice[g[0]] });
            }
            if full {
                self.full_slots.push(t);
            }
        }
        if full && self.ttr.is_none() {
            self.ttr = Some(t);
        }
        full && self.opts.stop_at_full
    }

    fn finish(self, anomalies: u32, users: Vec<UserState>) -> RunResult {
        RunResult { ttr: self.ttr, events: self.events, full_slots: self.full_slots, anomalies, final_states: users }
    }
}

fn check_safety(users: &[UserState], common: &ChannelSet) {
    if cfg!(debug_assertions) {
        for u in users {
            debug_assert!(common.is_subset(u.c_known.set()), "user {} lost a common channel", u.id);
            debug_assert!(u.c_known.set().is_subset(u.c.set()));
            debug_assert!(u.c_stick.set().is_subset(u.c.set()));
        }
    }
}

/// Members adopt the clock and seed of their smallest-id member.
fn synchronize(group: &[usize], users: &mut [UserState]) {
    let (offset, seed) = (users[group[0]].offset, users[group[0]].seed);
    for &u in &group[1..] {
        users[u].offset = offset;
        users[u].seed = seed;
    }
}

fn apply_stateless(
    kind: StrategyKind,
    groups: &[Vec<usize>],
    users: &mut [UserState],
    t_of: impl Fn(&UserState) -> u64,
) {
    for g in groups {
        match kind {
            StrategyKind::Generic => strategy::apply_generic(g, users),
            StrategyKind::StickTogether => strategy::apply_stick(g, users),
            StrategyKind::Hybrid => {
                let t = t_of(&users[g[0]]);
                strategy::apply_hybrid(g, users, t)
            }
            StrategyKind::SpreadOut3 => unreachable!("spread-out is stateful"),
        }
    }
}

/// Synchronous run: every user is on global slot `t`.
pub fn run_sync(
    users: Vec<UserState>,
    algorithm: &Algorithm,
    strategy: StrategyKind,
    opts: &RunOptions,
) -> Result<RunResult> {
    let common = validate(&users, algorithm, strategy)?;
    if let Some(u) = users.iter().find(|u| u.offset != 0) {
        return Err(Error::InvalidInput(format!("user {} has a clock offset in a synchronous run", u.id)));
    }
    let mut users = users;
    let k = users.len();
    let mut tracker = Tracker::new(k, *opts);
    let mut phase = SpreadOutPhase::Initial;
    let mut anomalies = 0;
    let mut choice = vec![ChannelId(0); k];

    for t in 1..=opts.max_slots {
        let slot = match algorithm {
            Algorithm::Consistent(s) => Some(s.slot(t)),
            Algorithm::RandomBaseline => None,
        };
        for u in 0..k {
            let hop = match strategy {
                StrategyKind::SpreadOut3 => phase.hop_set(u),
                kind => strategy::hop_set(kind, t),
            };
            let user = &users[u];
            choice[u] = match &slot {
                Some(s) => s.select_masked(hop.of(user)),
                None if phase.is_passer(u) => random_passer_select(&users, &phase, u, t),
                None => random_baseline_select(user.seed, t, hop.of(user).set()),
            };
        }
        let groups = detect_groups(&choice);
        if tracker.observe(t, &groups, &choice) {
            break;
        }
        if groups.is_empty() {
            continue;
        }
        match strategy {
            StrategyKind::SpreadOut3 => {
                let before = phase;
                phase = apply_spreadout3(&groups, &mut users, phase, |users, informed, pending| {
                    predict_passer(algorithm, users, informed, pending, t, opts.max_slots)
                })?;
                if let SpreadOutPhase::SecondMet { passer: None, .. } = phase {
                    if !matches!(before, SpreadOutPhase::SecondMet { .. }) {
                        anomalies += 1;
                    }
                }
                if algorithm == &Algorithm::RandomBaseline {
                    share_seed_on_switch(&mut users, &before, &phase);
                }
            }
            StrategyKind::Generic => {}
            kind => {
                apply_stateless(kind, &groups, &mut users, |_| t);
                if algorithm == &Algorithm::RandomBaseline {
                    for g in &groups {
                        synchronize(g, &mut users);
                    }
                }
            }
        }
        check_safety(&users, &common);
    }
    Ok(tracker.finish(anomalies, users))
}

/// Earliest slot after `t` at which `pending`'s own selection lands in an
/// informed user's set; that user passes the information. Ties go to the
/// smaller id, and at a tie all three meet anyway.
fn predict_passer(
    algorithm: &Algorithm,
    users: &[UserState],
    informed: [usize; 2],
    pending: usize,
    t: u64,
    horizon: u64,
) -> Option<usize> {
    let mut candidates = informed;
    candidates.sort_unstable();
    for s in t + 1..=horizon {
        let ch = match algorithm {
            Algorithm::Consistent(sched) => sched.slot(s).select_masked(&users[pending].c),
            Algorithm::RandomBaseline => random_baseline_select(users[pending].seed, s, users[pending].c.set()),
        };
        if let Some(&x) = candidates.iter().find(|&&x| users[x].c.contains(ch)) {
            return Some(x);
        }
    }
    None
}

/// A random-baseline passer follows the pending user's predicted channel when it can.
fn random_passer_select(users: &[UserState], phase: &SpreadOutPhase, u: usize, t: u64) -> ChannelId {
    let SpreadOutPhase::SecondMet { pending, .. } = *phase else {
        unreachable!("only a second-meeting phase has a passer")
    };
    let target = random_baseline_select(users[pending].seed, t, users[pending].c.set());
    if users[u].c.contains(target) {
        target
    } else {
        random_baseline_select(users[u].seed, t, users[u].c_stick.set())
    }
}

/// Users moving onto the triple intersection share one seed so their random picks agree.
fn share_seed_on_switch(users: &mut [UserState], before: &SpreadOutPhase, after: &SpreadOutPhase) {
    let seed = users[0].seed;
    match (*before, *after) {
        (SpreadOutPhase::FirstMet { .. }, SpreadOutPhase::SecondMet { informed, passer, .. }) => {
            for u in informed {
                if Some(u) != passer {
                    users[u].seed = seed;
                }
            }
        }
        (SpreadOutPhase::SecondMet { .. }, SpreadOutPhase::Aware) => {
            for user in users.iter_mut() {
                user.seed = seed;
            }
        }
        _ => {}
    }
}

/// Asynchronous run. Each user's local slot is the global slot plus its
/// offset. In every slot a user flips coin `G1(seed, t)`: below `p0` it uses
/// selector `t' = ⌊T0·G2(seed, t)⌋ + 1` of the shared multiset, otherwise the
/// configured fallback. Users that meet adopt the clock and seed of the
/// group's smallest-id member.
pub fn run_async(
    users: Vec<UserState>,
    algorithm: &Algorithm,
    strategy: StrategyKind,
    params: &AsyncParams,
    opts: &RunOptions,
) -> Result<RunResult> {
    let common = validate(&users, algorithm, strategy)?;
    if strategy == StrategyKind::SpreadOut3 {
        return Err(Error::Unsupported("spread-out is only simulated with synchronized clocks".into()));
    }
    if params.t0 == 0 || !(0.0..=1.0).contains(&params.p0) {
        return Err(Error::InvalidInput(format!("need T0 >= 1 and p0 in [0, 1], got {} and {}", params.t0, params.p0)));
    }
    let mut users = users;
    let k = users.len();
    let multiset: Vec<SlotSelector> = match algorithm {
        Algorithm::Consistent(s) => (1..=params.t0).map(|i| s.slot(i)).collect(),
        Algorithm::RandomBaseline => Vec::new(),
    };
    let mut tracker = Tracker::new(k, *opts);
    let mut choice = vec![ChannelId(0); k];
    let mut current: HashMap<u64, SlotSelector> = HashMap::new();

    for g in 1..=opts.max_slots {
        current.clear();
        for u in 0..k {
            let user = &users[u];
            let t = user.local_slot(g);
            let hop: HopSet = strategy::hop_set(strategy, t);
            let set = hop.of(user);
            choice[u] = match algorithm {
                Algorithm::RandomBaseline => random_baseline_select(user.seed, t, set.set()),
                Algorithm::Consistent(sched) => {
                    if unit(user.seed, StreamTag::Coin, t) < params.p0 {
                        let idx = (params.t0 as f64 * unit(user.seed, StreamTag::MultisetIndex, t)) as usize;
                        multiset[idx.min(multiset.len() - 1)].select_masked(set)
                    } else {
                        match params.fallback {
                            AsyncFallback::UniformChannel => random_baseline_select(user.seed, t, set.set()),
                            AsyncFallback::CurrentSlot => {
                                current.entry(t).or_insert_with(|| sched.slot(t)).select_masked(set)
                            }
                        }
                    }
                }
            };
        }
        let groups = detect_groups(&choice);
        if tracker.observe(g, &groups, &choice) {
            break;
        }
        for grp in &groups {
            synchronize(grp, &mut users);
        }
        apply_stateless(strategy, &groups, &mut users, |u| u.local_slot(g));
        check_safety(&users, &common);
    }
    Ok(tracker.finish(0, users))
}
