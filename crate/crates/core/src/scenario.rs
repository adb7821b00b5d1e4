//! Random available-channel sets for experiments.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::analytic::ThreeUserProfile;
use crate::channel::{ChannelId, ChannelSet};
use crate::error::{Error, Result};

/// Two users on `N` channels holding `n1` and `n2` channels, `n12` of them shared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoUserSpec {
    pub n: u64,
    pub n1: u64,
    pub n2: u64,
    pub n12: u64,
}

impl TwoUserSpec {
    pub fn new(n: u64, n1: u64, n2: u64, n12: u64) -> Result<Self> {
        if n12 == 0 || n12 > n1.min(n2) || n1 + n2 - n12 > n {
            return Err(Error::InvalidInput(format!("infeasible two-user spec N={n} n1={n1} n2={n2} n12={n12}")));
        }
        Ok(TwoUserSpec { n, n1, n2, n12 })
    }
}

fn shuffled(n: u64, rng: &mut (impl Rng + ?Sized)) -> Vec<ChannelId> {
    let mut all: Vec<ChannelId> = (1..=n as u32).map(ChannelId).collect();
    all.shuffle(rng);
    all
}

fn collect(parts: &[&[ChannelId]]) -> ChannelSet {
    ChannelSet::new(parts.iter().flat_map(|p| p.iter().copied())).expect("parts are nonempty")
}

/// Common channels first, then each user's exclusive channels, all distinct.
pub fn gen_two_user<R: Rng + ?Sized>(spec: &TwoUserSpec, rng: &mut R) -> Result<(ChannelSet, ChannelSet)> {
    let spec = TwoUserSpec::new(spec.n, spec.n1, spec.n2, spec.n12)?;
    let all = shuffled(spec.n, rng);
    let (common, rest) = all.split_at(spec.n12 as usize);
    let (only1, rest) = rest.split_at((spec.n1 - spec.n12) as usize);
    let only2 = &rest[..(spec.n2 - spec.n12) as usize];
    Ok((collect(&[common, only1]), collect(&[common, only2])))
}

/// Carves the seven Venn regions of `profile` out of a random ordering of `1..=N`.
pub fn gen_three_user<R: Rng + ?Sized>(profile: &ThreeUserProfile, rng: &mut R) -> Result<[ChannelSet; 3]> {
    let r = profile.regions()?;
    if profile.union() > profile.n {
        return Err(Error::InvalidProfile(format!("union of {} channels exceeds N={}", profile.union(), profile.n)));
    }
    let all = shuffled(profile.n, rng);
    let mut rest: &[ChannelId] = &all;
    let mut take = |k: u64| {
        let (head, tail) = rest.split_at(k as usize);
        rest = tail;
        head
    };
    let all3 = take(r.all);
    let p12 = take(r.only12);
    let p13 = take(r.only13);
    let p23 = take(r.only23);
    let o1 = take(r.only1);
    let o2 = take(r.only2);
    let o3 = take(r.only3);
    Ok([collect(&[all3, p12, p13, o1]), collect(&[all3, p12, p23, o2]), collect(&[all3, p13, p23, o3])])
}

/// Secondary users in a square field, blocked by the channels of nearby primary users.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CognitiveRadioSpec {
    pub n: u64,
    pub users: usize,
    pub primary_users: usize,
    pub area_side: f64,
    pub interference_range: f64,
    /// Channels no primary user occupies.
    pub core_size: u64,
}

impl Default for CognitiveRadioSpec {
    fn default() -> Self {
        CognitiveRadioSpec {
            n: 256,
            users: 100,
            primary_users: 50,
            area_side: 1000.0,
            interference_range: 500.0,
            core_size: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CognitiveRadioScenario {
    pub sets: Vec<ChannelSet>,
    pub core: ChannelSet,
    /// Primary users left after dropping those that interfere with nobody.
    pub active_primary_users: usize,
    /// Whether the intersection of all sets is exactly the core.
    pub core_exact: bool,
}

pub fn gen_cognitive_radio<R: Rng + ?Sized>(spec: &CognitiveRadioSpec, rng: &mut R) -> Result<CognitiveRadioScenario> {
    if spec.core_size == 0 || spec.core_size > spec.n {
        return Err(Error::InvalidInput(format!("core size {} outside 1..={}", spec.core_size, spec.n)));
    }
    if spec.users < 2 || spec.area_side <= 0.0 || spec.interference_range < 0.0 {
        return Err(Error::InvalidInput("need two or more users, a positive area and a non-negative range".into()));
    }
    let all = shuffled(spec.n, rng);
    let (core, primary_channels) = all.split_at(spec.core_size as usize);
    let core = collect(&[core]);

    let mut place = || (rng.random_range(0.0..=spec.area_side), rng.random_range(0.0..=spec.area_side));
    let secondary: Vec<(f64, f64)> = (0..spec.users).map(|_| place()).collect();
    let primary: Vec<(f64, f64)> = (0..spec.primary_users).map(|_| place()).collect();
    let near = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).hypot(a.1 - b.1) < spec.interference_range;
    let active: Vec<(f64, f64)> = primary.into_iter().filter(|&p| secondary.iter().any(|&s| near(p, s))).collect();

    // split the primary channels as evenly as possible, in random order
    let mut primary_channels = primary_channels.to_vec();
    primary_channels.shuffle(rng);
    let mut blocks: Vec<&[ChannelId]> = Vec::with_capacity(active.len());
    if !active.is_empty() {
        let (base, extra) = (primary_channels.len() / active.len(), primary_channels.len() % active.len());
        let mut rest: &[ChannelId] = &primary_channels;
        for i in 0..active.len() {
            let (head, tail) = rest.split_at(base + usize::from(i < extra));
            blocks.push(head);
            rest = tail;
        }
    }

    let mut sets = Vec::with_capacity(spec.users);
    for &s in &secondary {
        let mut blocked = vec![false; spec.n as usize + 1];
        for (p, block) in active.iter().zip(&blocks) {
            if near(*p, s) {
                for ch in *block {
                    blocked[ch.index()] = true;
                }
            }
        }
        sets.push(ChannelSet::new((1..=spec.n as u32).filter(|&c| !blocked[c as usize]))?);
    }
    let common = ChannelSet::intersect_all(&sets).expect("the core is never blocked");
    debug_assert!(core.is_subset(&common));
    Ok(CognitiveRadioScenario { core_exact: common == core, sets, core, active_primary_users: active.len() })
}

/// Clock offsets drawn uniformly from `[0, period)`.
pub fn gen_offsets<R: Rng + ?Sized>(users: usize, period: u64, rng: &mut R) -> Vec<u64> {
    (0..users).map(|_| rng.random_range(0..period.max(1))).collect()
}
