//! Exact closed forms for expected rendezvous times.
//!
//! Everything is computed with arbitrary-precision rationals; convert with
//! [`to_f64`] only when printing or comparing with simulations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::channel::ChannelSet;
use crate::error::{Error, Result};

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// An expected time that may be infinite (no common channel at all).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expectation {
    Finite(BigRational),
    Infinite,
}

impl Expectation {
    pub fn to_f64(&self) -> f64 {
        match self {
            Expectation::Finite(r) => to_f64(r),
            Expectation::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Expectation::Finite(r) => Some(r),
            Expectation::Infinite => None,
        }
    }
}

/// `|∩| / |∪|` of a family of sets; `disjoint` flags a zero index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Jaccard {
    pub value: BigRational,
    pub common: usize,
    pub union: usize,
}

impl Jaccard {
    pub fn disjoint(&self) -> bool {
        self.common == 0
    }
}

pub fn jaccard(sets: &[ChannelSet]) -> Result<Jaccard> {
    let union = ChannelSet::union_all(sets).ok_or_else(|| Error::InvalidInput("no sets given".into()))?;
    let common = ChannelSet::intersect_all(sets).map_or(0, |s| s.len());
    Ok(Jaccard { value: ratio(common as u64, union.len() as u64), common, union: union.len() })
}

/// `n12 / (n1 + n2 - n12)`.
pub fn jaccard_two(n1: u64, n2: u64, n12: u64) -> Result<BigRational> {
    if n12 > n1.min(n2) || n1 == 0 || n2 == 0 {
        return Err(Error::InvalidInput(format!("inconsistent sizes n1={n1} n2={n2} n12={n12}")));
    }
    Ok(ratio(n12, n1 + n2 - n12))
}

/// `1/J` for a consistent schedule built from random permutations.
pub fn ettr_consistent(j: &BigRational) -> Expectation {
    if j.is_zero() {
        Expectation::Infinite
    } else {
        Expectation::Finite(j.recip())
    }
}

/// Worst-case rendezvous time `N - common + 1` of a one-cycle schedule over `N` labels.
pub fn mttr_bound(n: u64, common: u64) -> Result<u64> {
    if common == 0 || common > n {
        return Err(Error::InvalidInput(format!("need 1 <= common <= N, got common={common}, N={n}")));
    }
    Ok(n - common + 1)
}

/// Overlap sizes of three channel sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThreeUserProfile {
    pub n1: u64,
    pub n2: u64,
    pub n3: u64,
    pub n12: u64,
    pub n13: u64,
    pub n23: u64,
    pub n123: u64,
    /// Total number of channels.
    pub n: u64,
}

/// Sizes of the seven regions of a three-set Venn diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Regions {
    pub only1: u64,
    pub only2: u64,
    pub only3: u64,
    pub only12: u64,
    pub only13: u64,
    pub only23: u64,
    pub all: u64,
}

impl ThreeUserProfile {
    #[allow(clippy::too_many_arguments)]
    pub fn new(n1: u64, n2: u64, n3: u64, n12: u64, n13: u64, n23: u64, n123: u64, n: u64) -> Result<Self> {
        let p = ThreeUserProfile { n1, n2, n3, n12, n13, n23, n123, n };
        p.regions()?;
        if n1 == 0 || n2 == 0 || n3 == 0 {
            return Err(Error::InvalidProfile("every user needs at least one channel".into()));
        }
        if p.union() > n {
            return Err(Error::InvalidProfile(format!("union of {} channels exceeds N={n}", p.union())));
        }
        Ok(p)
    }

    /// All users hold `n` channels; each pair shares `n_core + n_exclusive`, all three share `n_core`.
    pub fn symmetric(n_user: u64, n_core: u64, n_exclusive: u64, n: u64) -> Result<Self> {
        let pair = n_core + n_exclusive;
        ThreeUserProfile::new(n_user, n_user, n_user, pair, pair, pair, n_core, n)
    }

    pub fn from_sets(c1: &ChannelSet, c2: &ChannelSet, c3: &ChannelSet, n: u64) -> Result<Self> {
        let n123 = ChannelSet::intersect_all([c1, c2, c3]).map_or(0, |s| s.len());
        ThreeUserProfile::new(
            c1.len() as u64,
            c2.len() as u64,
            c3.len() as u64,
            c1.intersection_len(c2) as u64,
            c1.intersection_len(c3) as u64,
            c2.intersection_len(c3) as u64,
            n123 as u64,
            n,
        )
    }

    pub fn regions(&self) -> Result<Regions> {
        let sub = |a: i64, what: &str| -> Result<u64> {
            u64::try_from(a).map_err(|_| Error::InvalidProfile(format!("region {what} would have {a} channels")))
        };
        let (n1, n2, n3) = (self.n1 as i64, self.n2 as i64, self.n3 as i64);
        let (n12, n13, n23, n123) = (self.n12 as i64, self.n13 as i64, self.n23 as i64, self.n123 as i64);
        Ok(Regions {
            only12: sub(n12 - n123, "12")?,
            only13: sub(n13 - n123, "13")?,
            only23: sub(n23 - n123, "23")?,
            only1: sub(n1 - n12 - n13 + n123, "1")?,
            only2: sub(n2 - n12 - n23 + n123, "2")?,
            only3: sub(n3 - n13 - n23 + n123, "3")?,
            all: self.n123,
        })
    }

    pub fn union(&self) -> u64 {
        self.n1 + self.n2 + self.n3 + self.n123 - self.n12 - self.n13 - self.n23
    }

    pub fn jaccard(&self) -> BigRational {
        ratio(self.n123, self.union())
    }

    fn user(&self, k: usize) -> u64 {
        [self.n1, self.n2, self.n3][k]
    }

    fn overlap(&self, a: usize, b: usize) -> u64 {
        match (a.min(b), a.max(b)) {
            (0, 1) => self.n12,
            (0, 2) => self.n13,
            (1, 2) => self.n23,
            _ => unreachable!("pairs of three users"),
        }
    }
}

/// Per-slot probabilities of the five mutually exclusive meeting patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventProbs {
    pub p12: BigRational,
    pub p13: BigRational,
    pub p23: BigRational,
    pub p123: BigRational,
    pub p0: BigRational,
}

impl EventProbs {
    /// Probability that exactly the pair `(a, b)` meets.
    pub fn pair(&self, a: usize, b: usize) -> &BigRational {
        match (a.min(b), a.max(b)) {
            (0, 1) => &self.p12,
            (0, 2) => &self.p13,
            (1, 2) => &self.p23,
            _ => unreachable!("pairs of three users"),
        }
    }
}

/// Exactly one pair meets when the global minimum lies in that pair's private
/// overlap, or when it lies in the third user's private channels and the pair's
/// own union has its minimum in common.
pub fn three_user_event_probs(p: &ThreeUserProfile) -> EventProbs {
    let r = p.regions().expect("validated profile");
    let u = p.union();
    let pair = |a: usize, b: usize, private: u64, third_only: u64| -> BigRational {
        let nab = p.overlap(a, b);
        ratio(private, u) + ratio(nab, p.user(a) + p.user(b) - nab) * ratio(third_only, u)
    };
    let p12 = pair(0, 1, r.only12, r.only3);
    let p13 = pair(0, 2, r.only13, r.only2);
    let p23 = pair(1, 2, r.only23, r.only1);
    let p123 = ratio(p.n123, u);
    let p0 = BigRational::one() - &p12 - &p13 - &p23 - &p123;
    EventProbs { p12, p13, p23, p123, p0 }
}

/// ETTR with the third user after the pair `(a, b)` merged onto `c_a ∩ c_b`.
pub fn pairwise_stick_ettr(p: &ThreeUserProfile, a: usize, b: usize) -> Expectation {
    if p.n123 == 0 {
        return Expectation::Infinite;
    }
    let third = 3 - a - b;
    Expectation::Finite(ratio(p.overlap(a, b) + p.user(third) - p.n123, p.n123))
}

/// ETTR of the three-user stick-together strategy.
pub fn stick_ettr3(p: &ThreeUserProfile) -> Expectation {
    if p.n123 == 0 {
        return Expectation::Infinite;
    }
    let e = three_user_event_probs(p);
    let mut num = BigRational::one();
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let ettr = pairwise_stick_ettr(p, a, b);
        num += e.pair(a, b) * ettr.finite().expect("n123 >= 1");
    }
    let den = BigRational::one() - &e.p0;
    Expectation::Finite(num / den)
}

pub const CHAIN_STATES: usize = 12;

/// The 12-state chain of the three-user spread-out protocol:
/// 1 initial, 2-4 first meetings (12, 13, 23), 5-10 second meetings
/// (12→13, 12→23, 13→12, 13→23, 23→12, 23→13), 11 mutual awareness,
/// 12 all met. States are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpreadOutChain {
    p: Vec<Vec<BigRational>>,
}

impl SpreadOutChain {
    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.p[i - 1][j - 1]
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.p[i - 1]
    }

    pub fn rows_sum_to_one(&self) -> bool {
        self.p.iter().all(|row| row.iter().fold(BigRational::zero(), |acc, x| acc + x).is_one())
    }

    pub fn is_upper_triangular(&self) -> bool {
        (1..=CHAIN_STATES).all(|i| (1..i).all(|j| self.get(i, j).is_zero()))
    }

    /// Expected slots to absorption from every state, by back-substitution.
    pub fn absorption_times(&self) -> Result<Vec<BigRational>> {
        let mut t = vec![BigRational::zero(); CHAIN_STATES];
        for i in (1..CHAIN_STATES).rev() {
            let stay = self.get(i, i);
            if stay.is_one() {
                return Err(Error::DegenerateChain(i));
            }
            let mut num = BigRational::one();
            for j in i + 1..=CHAIN_STATES {
                num += self.get(i, j) * &t[j - 1];
            }
            t[i - 1] = num / (BigRational::one() - stay);
        }
        Ok(t)
    }
}

/// Pending user of second-meeting state `i` (5..=10), as a 0-based index.
pub fn pending_user(state: usize) -> usize {
    match state {
        5 => 1,
        6 => 0,
        7 => 2,
        8 => 0,
        9 => 2,
        10 => 1,
        _ => panic!("state {state} is not a second-meeting state"),
    }
}

pub fn spreadout_matrix(p: &ThreeUserProfile) -> Result<SpreadOutChain> {
    p.regions()?;
    let e = three_user_event_probs(p);
    let zero = BigRational::zero();
    let mut m = vec![vec![zero; CHAIN_STATES]; CHAIN_STATES];
    let set = |m: &mut Vec<Vec<BigRational>>, i: usize, j: usize, v: BigRational| m[i - 1][j - 1] = v;

    set(&mut m, 1, 1, e.p0.clone());
    set(&mut m, 1, 2, e.p12.clone());
    set(&mut m, 1, 3, e.p13.clone());
    set(&mut m, 1, 4, e.p23.clone());
    set(&mut m, 1, 12, e.p123.clone());

    // first-meeting state i leads to 2i+1 and 2i+2 through the two other pairs
    let pairs = [(0, 1), (0, 2), (1, 2)];
    for (k, &(a, b)) in pairs.iter().enumerate() {
        let i = 2 + k;
        let others: Vec<(usize, usize)> = pairs.iter().copied().filter(|&q| q != (a, b)).collect();
        set(&mut m, i, i, e.pair(a, b) + &e.p0);
        set(&mut m, i, 2 * i + 1, e.pair(others[0].0, others[0].1).clone());
        set(&mut m, i, 2 * i + 2, e.pair(others[1].0, others[1].1).clone());
        set(&mut m, i, 12, e.p123.clone());
    }

    for i in 5..=10 {
        let q = pending_user(i);
        let np = p.user(q);
        let overlaps: u64 = (0..3).filter(|&x| x != q).map(|x| p.overlap(q, x)).sum();
        set(&mut m, i, 12, ratio(p.n123, np));
        set(&mut m, i, 11, ratio(overlaps - 2 * p.n123, np));
        set(&mut m, i, i, ratio(np + p.n123 - overlaps, np));
    }

    set(&mut m, 11, 12, BigRational::one());
    set(&mut m, 12, 12, BigRational::one());
    Ok(SpreadOutChain { p: m })
}

/// ETTR of the three-user spread-out strategy.
pub fn spreadout_ettr3(p: &ThreeUserProfile) -> Result<Expectation> {
    if p.n123 == 0 {
        return Ok(Expectation::Infinite);
    }
    let times = spreadout_matrix(p)?.absorption_times()?;
    Ok(Expectation::Finite(times[0].clone()))
}
