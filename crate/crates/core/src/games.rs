//! Short partizan game forms under misère play.
//!
//! A [`GameId`] is a handle into the interning table: two handles are equal
//! exactly when the forms are isomorphic. Sums are expanded eagerly into
//! interned forms, so commutativity and associativity hold at the handle
//! level.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::store::{self, Raw};

/// Largest absolute value accepted by [`integer`].
pub const MAX_INTEGER: i64 = 1_000;

/// Interned, tombstone-free game form.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct GameId(pub(crate) Raw);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    Left,
    Right,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Left => Player::Right,
            Player::Right => Player::Left,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Left => "L",
            Player::Right => "R",
        })
    }
}

/// Winner with Left moving first and winner with Right moving first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OutcomePair {
    pub left_start: Player,
    pub right_start: Player,
}

impl OutcomePair {
    pub fn class(self) -> Outcome {
        Outcome::from(self)
    }

    /// Outcome pair of the conjugate form.
    pub fn conjugated(self) -> OutcomePair {
        OutcomePair {
            left_start: self.right_start.opponent(),
            right_start: self.left_start.opponent(),
        }
    }
}

/// Misère outcome class, partially ordered by `R < N < L` and `R < P < L`
/// with `N` and `P` incomparable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    L,
    N,
    P,
    R,
}

impl From<OutcomePair> for Outcome {
    fn from(pair: OutcomePair) -> Outcome {
        match (pair.left_start, pair.right_start) {
            (Player::Left, Player::Left) => Outcome::L,
            (Player::Left, Player::Right) => Outcome::N,
            (Player::Right, Player::Left) => Outcome::P,
            (Player::Right, Player::Right) => Outcome::R,
        }
    }
}

impl Outcome {
    /// Inverse of the `From<OutcomePair>` conversion.
    pub fn pair(self) -> OutcomePair {
        let (left_start, right_start) = match self {
            Outcome::L => (Player::Left, Player::Left),
            Outcome::N => (Player::Left, Player::Right),
            Outcome::P => (Player::Right, Player::Left),
            Outcome::R => (Player::Right, Player::Right),
        };
        OutcomePair {
            left_start,
            right_start,
        }
    }

    fn rank(self) -> (u8, u8) {
        // (Left wins moving first, Left wins moving second)
        let p = self.pair();
        (
            u8::from(p.left_start == Player::Left),
            u8::from(p.right_start == Player::Left),
        )
    }
}

impl PartialOrd for Outcome {
    fn partial_cmp(&self, other: &Outcome) -> Option<Ordering> {
        let (a, b) = (self.rank(), other.rank());
        match (a.0.cmp(&b.0), a.1.cmp(&b.1)) {
            (x, y) if x == y => Some(x),
            (Ordering::Equal, y) => Some(y),
            (x, Ordering::Equal) => Some(x),
            _ => None,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// End and dicot flags of a form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Classification {
    pub is_left_end: bool,
    pub is_right_end: bool,
    pub is_dead_left_end: bool,
    pub is_dead_right_end: bool,
    pub is_dicot: bool,
}

impl GameId {
    pub fn zero() -> GameId {
        mk_game([], [])
    }

    pub fn star() -> GameId {
        let zero = GameId::zero();
        mk_game([zero], [zero])
    }

    pub fn lefts(self) -> impl ExactSizeIterator<Item = GameId> + Clone {
        store::node(self.0).lefts.iter().map(|&l| GameId(l))
    }

    pub fn rights(self) -> impl ExactSizeIterator<Item = GameId> + Clone {
        store::node(self.0).rights.iter().map(|&r| GameId(r))
    }

    pub fn is_zero(self) -> bool {
        self == GameId::zero()
    }

    pub fn is_left_end(self) -> bool {
        store::node(self.0).lefts.is_empty()
    }

    pub fn is_right_end(self) -> bool {
        store::node(self.0).rights.is_empty()
    }

    pub fn birthday(self) -> u32 {
        birthday(self)
    }

    pub fn outcome(self) -> OutcomePair {
        outcome(self)
    }

    pub fn conjugate(self) -> GameId {
        conjugate(self)
    }

    pub fn classify(self) -> Classification {
        classify(self)
    }

    /// Every end subposition is a dead end.
    pub fn is_dead_ending(self) -> bool {
        store::node(self.0).dead_ending
    }

    /// Distinct subpositions, options before the forms containing them.
    pub fn subpositions(self) -> Vec<GameId> {
        store::subpositions(self.0)
            .into_iter()
            .map(GameId)
            .collect()
    }

    /// If this form is a game integer, its value.
    pub fn as_integer(self) -> Option<i64> {
        let mut n = 0i64;
        let mut g = self;
        if g.is_left_end() && !g.is_right_end() {
            while !g.is_zero() {
                let mut rights = g.rights();
                if !g.is_left_end() || rights.len() != 1 {
                    return None;
                }
                g = rights.next()?;
                n -= 1;
            }
        } else {
            while !g.is_zero() {
                let mut lefts = g.lefts();
                if !g.is_right_end() || lefts.len() != 1 {
                    return None;
                }
                g = lefts.next()?;
                n += 1;
            }
        }
        Some(n)
    }
}

impl PartialOrd for GameId {
    fn partial_cmp(&self, other: &GameId) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Structural order used for canonical option lists; independent of the
/// order in which forms were interned.
impl Ord for GameId {
    fn cmp(&self, other: &GameId) -> Ordering {
        store::canonical_cmp(self.0, other.0)
    }
}

impl fmt::Debug for GameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::notation::print_game(*self))
    }
}

impl fmt::Display for GameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::notation::print_game(*self))
    }
}

pub fn mk_game(
    lefts: impl IntoIterator<Item = GameId>,
    rights: impl IntoIterator<Item = GameId>,
) -> GameId {
    GameId(store::intern(
        lefts.into_iter().map(|g| g.0).collect(),
        rights.into_iter().map(|g| g.0).collect(),
        false,
        false,
    ))
}

/// Game integer: `n > 0` is `{n-1|·}`, `n < 0` the conjugate of `-n`.
pub fn integer(n: i64) -> Result<GameId> {
    if n.abs() > MAX_INTEGER {
        return Err(Error::DepthLimit {
            value: n,
            limit: MAX_INTEGER,
        });
    }
    let mut g = GameId::zero();
    for _ in 0..n.abs() {
        g = if n > 0 {
            mk_game([g], [])
        } else {
            mk_game([], [g])
        };
    }
    Ok(g)
}

pub fn conjugate(g: GameId) -> GameId {
    GameId(store::conjugate(g.0))
}

pub fn sum(g: GameId, h: GameId) -> GameId {
    let mut unlimited = u64::MAX;
    GameId(store::add(g.0, h.0, &mut unlimited).expect("unlimited sum"))
}

/// [`sum`] that fails once more than `budget` new sum nodes would be built.
pub fn try_sum(g: GameId, h: GameId, budget: u64) -> Result<GameId> {
    let mut remaining = budget;
    store::add(g.0, h.0, &mut remaining)
        .map(GameId)
        .map_err(|_| Error::BudgetExceeded { limit: budget })
}

/// `n` copies of `g` added together; `0` for `n == 0`.
pub fn multiple(n: usize, g: GameId) -> GameId {
    (0..n).fold(GameId::zero(), |acc, _| sum(acc, g))
}

pub fn sum_all(games: impl IntoIterator<Item = GameId>) -> GameId {
    games.into_iter().fold(GameId::zero(), sum)
}

pub fn birthday(g: GameId) -> u32 {
    store::node(g.0).birthday
}

pub fn classify(g: GameId) -> Classification {
    let n = store::node(g.0);
    Classification {
        is_left_end: n.lefts.is_empty(),
        is_right_end: n.rights.is_empty(),
        is_dead_left_end: n.dead_left_end,
        is_dead_right_end: n.dead_right_end,
        is_dicot: n.dicot,
    }
}

/// Misère outcome: a player who cannot move wins. Computed once per form
/// when it is interned.
pub fn outcome(g: GameId) -> OutcomePair {
    store::node(g.0).outcome
}
