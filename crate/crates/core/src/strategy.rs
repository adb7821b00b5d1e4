//! Multi-user update rules applied when a group of users meets.

use std::fmt;
use std::str::FromStr;

use crate::channel::{ChannelSet, MaskedSet};
use crate::engine::UserState;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    /// Every user keeps hopping on its own available set.
    Generic,
    /// Members of a group merge onto the intersection of their known sets.
    StickTogether,
    /// Three-user information passing; see [`SpreadOutPhase`].
    SpreadOut3,
    /// Stick-together on odd slots, own set on even slots.
    Hybrid,
}

impl StrategyKind {
    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Generic => "generic",
            StrategyKind::StickTogether => "stick",
            StrategyKind::SpreadOut3 => "spreadout3",
            StrategyKind::Hybrid => "hybrid",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(StrategyKind::Generic),
            "stick" => Ok(StrategyKind::StickTogether),
            "spreadout3" => Ok(StrategyKind::SpreadOut3),
            "hybrid" => Ok(StrategyKind::Hybrid),
            other => Err(Error::Usage(format!("unknown strategy `{other}`"))),
        }
    }
}

/// Which of a user's sets it hops on in a given slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HopSet {
    Own,
    Stick,
}

impl HopSet {
    pub fn of(self, user: &UserState) -> &MaskedSet {
        match self {
            HopSet::Own => &user.c,
            HopSet::Stick => &user.c_stick,
        }
    }
}

/// Hop set for the stateless strategies at slot `t` (local slot in async runs).
pub fn hop_set(kind: StrategyKind, t: u64) -> HopSet {
    match kind {
        StrategyKind::Generic | StrategyKind::SpreadOut3 => HopSet::Own,
        StrategyKind::StickTogether => HopSet::Stick,
        StrategyKind::Hybrid if t % 2 == 1 => HopSet::Stick,
        StrategyKind::Hybrid => HopSet::Own,
    }
}

fn merged_known(group: &[usize], users: &[UserState]) -> ChannelSet {
    ChannelSet::intersect_all(group.iter().map(|&u| users[u].c_known.set()))
        .expect("known sets always contain the global common channels")
}

/// Users keep their sequences.
pub fn apply_generic(_group: &[usize], _users: &mut [UserState]) {}

/// Members adopt the intersection of their known sets as known and hopping set.
pub fn apply_stick(group: &[usize], users: &mut [UserState]) {
    let known = MaskedSet::new(merged_known(group, users));
    for &u in group {
        users[u].c_known = known.clone();
        users[u].c_stick = known.clone();
    }
}

/// Known sets always merge; the stick set follows only on odd slots.
pub fn apply_hybrid(group: &[usize], users: &mut [UserState], t: u64) {
    let known = MaskedSet::new(merged_known(group, users));
    for &u in group {
        users[u].c_known = known.clone();
        if t % 2 == 1 {
            users[u].c_stick = known.clone();
        }
    }
}

/// Progress of the three-user spread-out protocol. Users are indexed 0, 1, 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpreadOutPhase {
    /// Nobody has met.
    Initial,
    /// One pair has met and exchanged sets; everyone keeps its own sequence.
    FirstMet { pair: [usize; 2] },
    /// A member of the first pair met the third user. `pending` still lacks the
    /// full picture. The passer hops on its overlap with `pending`, the other
    /// informed user on the triple intersection. `passer` is `None` when no
    /// meeting with `pending` could be predicted.
    SecondMet { first: [usize; 2], informed: [usize; 2], pending: usize, passer: Option<usize> },
    /// Everyone knows the triple intersection and hops on it.
    Aware,
    /// All three met.
    Done,
}

fn pair_code(a: usize, b: usize) -> usize {
    match (a.min(b), a.max(b)) {
        (0, 1) => 0,
        (0, 2) => 1,
        (1, 2) => 2,
        _ => unreachable!("pairs of three users"),
    }
}

impl SpreadOutPhase {
    /// Position in the 12-state chain: 1 initial, 2-4 first meetings,
    /// 5-10 second meetings, 11 aware, 12 done.
    pub fn state_index(&self) -> usize {
        match *self {
            SpreadOutPhase::Initial => 1,
            SpreadOutPhase::FirstMet { pair } => 2 + pair_code(pair[0], pair[1]),
            SpreadOutPhase::SecondMet { first, informed, .. } => {
                let i = 2 + pair_code(first[0], first[1]);
                let second = pair_code(informed[0], informed[1]);
                // the two successors of first-meeting state i are 2i+1 and 2i+2, ordered by pair
                let others: Vec<usize> = (0..3).filter(|&p| p != pair_code(first[0], first[1])).collect();
                2 * i + 1 + others.iter().position(|&p| p == second).expect("second pair differs from first")
            }
            SpreadOutPhase::Aware => 11,
            SpreadOutPhase::Done => 12,
        }
    }

    pub fn hop_set(&self, user: usize) -> HopSet {
        match *self {
            SpreadOutPhase::Initial | SpreadOutPhase::FirstMet { .. } | SpreadOutPhase::Done => HopSet::Own,
            SpreadOutPhase::SecondMet { pending, .. } if pending == user => HopSet::Own,
            SpreadOutPhase::SecondMet { .. } | SpreadOutPhase::Aware => HopSet::Stick,
        }
    }

    /// Whether `user` is the information passer.
    pub fn is_passer(&self, user: usize) -> bool {
        matches!(*self, SpreadOutPhase::SecondMet { passer: Some(p), .. } if p == user)
    }
}

/// Advances the spread-out protocol after the groups seen in one slot.
///
/// `choose_passer(informed, pending)` predicts which informed user meets
/// `pending` first when hopping on its overlap with `pending`'s set.
pub fn apply_spreadout3<F>(
    groups: &[Vec<usize>],
    users: &mut [UserState],
    phase: SpreadOutPhase,
    choose_passer: F,
) -> Result<SpreadOutPhase>
where
    F: FnOnce(&[UserState], [usize; 2], usize) -> Option<usize>,
{
    if users.len() != 3 {
        return Err(Error::Unsupported(format!("spread-out is defined for three users, got {}", users.len())));
    }
    if groups.iter().any(|g| g.len() == 3) {
        return Ok(SpreadOutPhase::Done);
    }
    // three users split at most into one pair and a singleton
    let Some(pair) = groups.first().map(|g| [g[0], g[1]]) else {
        return Ok(phase);
    };
    let next = match phase {
        SpreadOutPhase::Initial => {
            let known = MaskedSet::new(merged_known(&pair, users));
            for u in pair {
                users[u].c_known = known.clone();
            }
            SpreadOutPhase::FirstMet { pair }
        }
        SpreadOutPhase::FirstMet { pair: first } => {
            if pair_code(pair[0], pair[1]) == pair_code(first[0], first[1]) {
                return Ok(phase);
            }
            let pending = if pair.contains(&first[0]) { first[1] } else { first[0] };
            let triple = triple_intersection(users);
            for u in pair {
                users[u].c_known = triple.clone();
                users[u].c_stick = triple.clone();
            }
            let passer = choose_passer(users, pair, pending);
            if let Some(p) = passer {
                let overlap =
                    users[p].c.set().intersection(users[pending].c.set()).expect("the triple intersection is nonempty");
                users[p].c_stick = MaskedSet::new(overlap);
            }
            SpreadOutPhase::SecondMet { first, informed: pair, pending, passer }
        }
        SpreadOutPhase::SecondMet { pending, passer, informed, .. } => {
            let reached = pair.contains(&pending)
                && match passer {
                    Some(p) => pair.contains(&p),
                    None => pair.iter().any(|u| informed.contains(u)),
                };
            if !reached {
                return Ok(phase);
            }
            let triple = triple_intersection(users);
            for user in users.iter_mut() {
                user.c_known = triple.clone();
                user.c_stick = triple.clone();
            }
            SpreadOutPhase::Aware
        }
        SpreadOutPhase::Aware | SpreadOutPhase::Done => phase,
    };
    Ok(next)
}

fn triple_intersection(users: &[UserState]) -> MaskedSet {
    MaskedSet::new(ChannelSet::intersect_all(users.iter().map(|u| u.c.set())).expect("global intersection is nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u32]) -> ChannelSet {
        ChannelSet::new(v.iter().copied()).unwrap()
    }

    fn users(sets: &[&[u32]]) -> Vec<UserState> {
        sets.iter().enumerate().map(|(i, s)| UserState::new(i, set(s), i as u64)).collect()
    }

    #[test]
    fn parse_names() {
        for k in [StrategyKind::Generic, StrategyKind::StickTogether, StrategyKind::SpreadOut3, StrategyKind::Hybrid] {
            assert_eq!(k.name().parse::<StrategyKind>().unwrap(), k);
        }
        assert!("bogus".parse::<StrategyKind>().is_err());
    }

    #[test]
    fn generic_leaves_users_alone() {
        let mut u = users(&[&[1, 2, 3], &[2, 3, 4]]);
        let before = u.clone();
        apply_generic(&[0, 1], &mut u);
        assert_eq!(u, before);
    }

    #[test]
    fn stick_merges() {
        let mut u = users(&[&[1, 2, 3], &[2, 3, 4], &[3, 9]]);
        apply_stick(&[0, 1], &mut u);
        assert_eq!(u[0].c_stick.set(), &set(&[2, 3]));
        assert_eq!(u[1].c_stick.set(), &set(&[2, 3]));
        assert_eq!(u[1].c_known.set(), &set(&[2, 3]));
        assert_eq!(u[2].c_stick.set(), &set(&[3, 9]));
        assert_eq!(hop_set(StrategyKind::StickTogether, 4), HopSet::Stick);
    }

    #[test]
    fn hybrid_updates_stick_set_only_on_odd_slots() {
        let mut u = users(&[&[1, 2, 3], &[2, 3, 4]]);
        apply_hybrid(&[0, 1], &mut u, 2);
        assert_eq!(u[0].c_known.set(), &set(&[2, 3]));
        assert_eq!(u[0].c_stick.set(), &set(&[1, 2, 3]));
        apply_hybrid(&[0, 1], &mut u, 3);
        assert_eq!(u[0].c_stick.set(), &set(&[2, 3]));
        assert_eq!(hop_set(StrategyKind::Hybrid, 3), HopSet::Stick);
        assert_eq!(hop_set(StrategyKind::Hybrid, 4), HopSet::Own);
    }

    #[test]
    fn spreadout_walks_the_phases() {
        let mut u = users(&[&[1, 2, 3, 4], &[1, 2, 5], &[1, 3, 6]]);
        let mut phase = SpreadOutPhase::Initial;
        assert_eq!(phase.state_index(), 1);

        phase = apply_spreadout3(&[vec![0, 1]], &mut u, phase, |_, _, _| unreachable!()).unwrap();
        assert_eq!(phase, SpreadOutPhase::FirstMet { pair: [0, 1] });
        assert_eq!(phase.state_index(), 2);
        assert_eq!(u[0].c_known.set(), &set(&[1, 2]));
        assert_eq!(phase.hop_set(0), HopSet::Own);

        // user 0 meets user 2; user 1 is pending and user 2 passes
        phase = apply_spreadout3(&[vec![0, 2]], &mut u, phase, |_, informed, pending| {
            assert_eq!(informed, [0, 2]);
            assert_eq!(pending, 1);
            Some(2)
        })
        .unwrap();
        assert_eq!(phase.state_index(), 5);
        assert!(phase.is_passer(2));
        assert_eq!(u[2].c_stick.set(), &set(&[1]));
        assert_eq!(u[0].c_stick.set(), &set(&[1]));
        assert_eq!(phase.hop_set(1), HopSet::Own);

        // meeting the non-passer alone changes nothing
        let same = apply_spreadout3(&[vec![0, 1]], &mut u, phase, |_, _, _| None).unwrap();
        assert_eq!(same, phase);

        phase = apply_spreadout3(&[vec![1, 2]], &mut u, phase, |_, _, _| None).unwrap();
        assert_eq!(phase, SpreadOutPhase::Aware);
        assert!(u.iter().all(|x| x.c_stick.set() == &set(&[1])));
        phase = apply_spreadout3(&[vec![0, 1, 2]], &mut u, phase, |_, _, _| None).unwrap();
        assert_eq!(phase, SpreadOutPhase::Done);
    }

    #[test]
    fn second_meeting_states_follow_chain_labels() {
        let expected = [
            ([0, 1], [0, 2], 5),
            ([0, 1], [1, 2], 6),
            ([0, 2], [0, 1], 7),
            ([0, 2], [1, 2], 8),
            ([1, 2], [0, 1], 9),
            ([1, 2], [0, 2], 10),
        ];
        for (first, informed, index) in expected {
            let phase = SpreadOutPhase::SecondMet { first, informed, pending: 0, passer: None };
            assert_eq!(phase.state_index(), index);
        }
    }

    #[test]
    fn spreadout_needs_three_users() {
        let mut u = users(&[&[1], &[1]]);
        assert!(matches!(
            apply_spreadout3(&[vec![0, 1]], &mut u, SpreadOutPhase::Initial, |_, _, _| None),
            Err(Error::Unsupported(_))
        ));
    }
}
