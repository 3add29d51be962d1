//! Augmented forms: game forms whose subpositions may carry a Left and/or
//! Right tombstone.
//!
//! A tombstone is a flag, not an option; nothing ever moves to it. A form is
//! Left end-like when it has no ordinary Left options or carries a Left
//! tombstone, and the misère outcome treats end-like exactly like an end.
//!
//! Plain games share the interning table, so [`AugId::from`] a [`GameId`]
//! is free and embedding commutes with sums and conjugation by construction.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::games::{GameId, OutcomePair};
use crate::store::{self, Raw};

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct AugId(pub(crate) Raw);

/// Which of the two end-like predicates hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EndLike {
    pub left_end_like: bool,
    pub right_end_like: bool,
}

impl From<GameId> for AugId {
    fn from(g: GameId) -> AugId {
        AugId(g.0)
    }
}

impl AugId {
    pub fn zero() -> AugId {
        GameId::zero().into()
    }

    pub fn lefts(self) -> impl ExactSizeIterator<Item = AugId> + Clone {
        store::node(self.0).lefts.iter().map(|&l| AugId(l))
    }

    pub fn rights(self) -> impl ExactSizeIterator<Item = AugId> + Clone {
        store::node(self.0).rights.iter().map(|&r| AugId(r))
    }

    pub fn left_tomb(self) -> bool {
        store::node(self.0).left_tomb
    }

    pub fn right_tomb(self) -> bool {
        store::node(self.0).right_tomb
    }

    pub fn is_left_end_like(self) -> bool {
        store::node(self.0).left_end_like()
    }

    pub fn is_right_end_like(self) -> bool {
        store::node(self.0).right_end_like()
    }

    pub fn is_left_end(self) -> bool {
        store::node(self.0).lefts.is_empty()
    }

    pub fn is_right_end(self) -> bool {
        store::node(self.0).rights.is_empty()
    }

    /// No tombstone anywhere in the tree.
    pub fn is_plain(self) -> bool {
        store::node(self.0).plain
    }

    pub fn as_game(self) -> Option<GameId> {
        self.is_plain().then_some(GameId(self.0))
    }

    pub fn birthday(self) -> u32 {
        store::node(self.0).birthday
    }

    pub fn outcome(self) -> OutcomePair {
        aug_outcome(self)
    }

    pub fn conjugate(self) -> AugId {
        aug_conjugate(self)
    }

    /// Same options, with the given tombstone flags.
    pub fn with_tombs(self, left_tomb: bool, right_tomb: bool) -> AugId {
        let n = store::node(self.0);
        AugId(store::intern(
            n.lefts.to_vec(),
            n.rights.to_vec(),
            left_tomb,
            right_tomb,
        ))
    }

    pub fn subpositions(self) -> Vec<AugId> {
        store::subpositions(self.0).into_iter().map(AugId).collect()
    }

    pub fn tombstone_count(self) -> usize {
        usize::from(self.left_tomb()) + usize::from(self.right_tomb())
    }
}

impl PartialOrd for AugId {
    fn partial_cmp(&self, other: &AugId) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AugId {
    fn cmp(&self, other: &AugId) -> Ordering {
        store::canonical_cmp(self.0, other.0)
    }
}

impl fmt::Debug for AugId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::notation::print(*self))
    }
}

impl fmt::Display for AugId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::notation::print(*self))
    }
}

pub fn mk_aug(
    lefts: impl IntoIterator<Item = AugId>,
    rights: impl IntoIterator<Item = AugId>,
    left_tomb: bool,
    right_tomb: bool,
) -> AugId {
    AugId(store::intern(
        lefts.into_iter().map(|a| a.0).collect(),
        rights.into_iter().map(|a| a.0).collect(),
        left_tomb,
        right_tomb,
    ))
}

pub fn end_like(a: AugId) -> EndLike {
    EndLike {
        left_end_like: a.is_left_end_like(),
        right_end_like: a.is_right_end_like(),
    }
}

/// Swaps sides and tombstones recursively.
pub fn aug_conjugate(a: AugId) -> AugId {
    AugId(store::conjugate(a.0))
}

/// Disjunctive sum. Ordinary options are the usual ones; the sum carries a
/// Left tombstone iff both summands are Left end-like and at least one has a
/// Left tombstone (mirror on the Right).
pub fn aug_sum(a: AugId, b: AugId) -> AugId {
    let mut unlimited = u64::MAX;
    AugId(store::add(a.0, b.0, &mut unlimited).expect("unlimited sum"))
}

pub fn try_aug_sum(a: AugId, b: AugId, budget: u64) -> Result<AugId> {
    let mut remaining = budget;
    store::add(a.0, b.0, &mut remaining)
        .map(AugId)
        .map_err(|_| Error::BudgetExceeded { limit: budget })
}

pub fn aug_sum_all(forms: impl IntoIterator<Item = AugId>) -> AugId {
    forms.into_iter().fold(AugId::zero(), aug_sum)
}

/// Left moving first wins iff the form is Left end-like or some ordinary Left
/// option is won by Left with Right to move; mirror for Right.
pub fn aug_outcome(a: AugId) -> OutcomePair {
    store::node(a.0).outcome
}
