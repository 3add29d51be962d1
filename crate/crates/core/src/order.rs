//! Universe-relative comparison of augmented forms.
//!
//! [`geq`] runs the recursive comparison test: the maintenance conditions
//! (a) and (b) on options, then the proviso (c) and (d) through the strong
//! test of the universe. Verdicts are three-valued and combine pessimistically,
//! so a bounded strong answer anywhere downgrades the result to
//! [`TriVerdict::BoundedTrue`].
//!
//! The oracle functions compare forms by definition, outcome by outcome, over
//! an explicit finite domain. They work for any set of games, universe or
//! not, and serve as an independent check of the recursive test.

use std::cmp::Ordering;

use crate::augmented::{aug_sum, AugId};
use crate::error::Result;
use crate::games::{GameId, Outcome, Player};
use crate::universes::{Meter, StrongVerdict, Universe};

/// Which part of the comparison test failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    /// Some `G^R` is matched by no `H^R` and no `G^RL`.
    A,
    /// Some `H^L` is matched by no `G^L` and no `H^LR`.
    B,
    /// `H` is Left end-like but `G` is not Left strong.
    C,
    /// `G` is Right end-like but `H` is not Right strong.
    D,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Failure {
    pub condition: Condition,
    /// The unmatched option for (a) and (b).
    pub option: Option<AugId>,
    /// The defeating end for (c) and (d).
    pub end: Option<GameId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TriVerdict {
    ProvenTrue,
    ProvenFalse(Failure),
    /// True as far as every Left end up to the bound can tell.
    BoundedTrue(u32),
}

impl TriVerdict {
    fn rank(self) -> u8 {
        match self {
            TriVerdict::ProvenFalse(_) => 0,
            TriVerdict::BoundedTrue(_) => 1,
            TriVerdict::ProvenTrue => 2,
        }
    }

    /// Conjunction: the weaker verdict wins, the first failure is kept.
    pub fn meet(self, other: TriVerdict) -> TriVerdict {
        if other.rank() < self.rank() {
            other
        } else {
            self
        }
    }

    /// Disjunction: the stronger verdict wins.
    pub fn join(self, other: TriVerdict) -> TriVerdict {
        if other.rank() > self.rank() {
            other
        } else {
            self
        }
    }

    pub fn is_true(self) -> bool {
        matches!(self, TriVerdict::ProvenTrue)
    }

    pub fn is_false(self) -> bool {
        matches!(self, TriVerdict::ProvenFalse(_))
    }

    pub fn is_bounded(self) -> bool {
        matches!(self, TriVerdict::BoundedTrue(_))
    }

    pub fn failure(self) -> Option<Failure> {
        match self {
            TriVerdict::ProvenFalse(f) => Some(f),
            _ => None,
        }
    }
}

/// Answer to a derived yes/no question, with the bound when it is not proven.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Proven(bool),
    Bounded { value: bool, bound: u32 },
}

impl Answer {
    pub fn value(self) -> bool {
        match self {
            Answer::Proven(v) | Answer::Bounded { value: v, .. } => v,
        }
    }
}

fn strong_to_tri(v: StrongVerdict, condition: Condition) -> TriVerdict {
    match v {
        StrongVerdict::ProvenStrong => TriVerdict::ProvenTrue,
        StrongVerdict::BoundedStrong(b) => TriVerdict::BoundedTrue(b),
        StrongVerdict::ProvenNotStrong(x) => TriVerdict::ProvenFalse(Failure {
            condition,
            option: None,
            end: Some(x),
        }),
    }
}

/// `g >= h` modulo the universe.
pub fn geq(u: &Universe, g: AugId, h: AugId) -> Result<TriVerdict> {
    u.run(|m| geq_in(u, g, h, m))
}

pub(crate) fn geq_in(u: &Universe, g: AugId, h: AugId, m: &mut Meter) -> Result<TriVerdict> {
    if g == h {
        return Ok(TriVerdict::ProvenTrue);
    }
    if let Some(&v) = u.geq_memo.lock().get(&(g, h)) {
        return Ok(v);
    }
    m.tick()?;
    let v = compare(u, g, h, m)?;
    u.geq_memo.lock().insert((g, h), v);
    Ok(v)
}

fn compare(u: &Universe, g: AugId, h: AugId, m: &mut Meter) -> Result<TriVerdict> {
    let mut acc = maintenance(u, g, h, m)?;
    if acc.is_false() {
        return Ok(acc);
    }
    acc = acc.meet(proviso(u, g, h, m)?);
    Ok(acc)
}

fn maintenance(u: &Universe, g: AugId, h: AugId, m: &mut Meter) -> Result<TriVerdict> {
    let mut acc = TriVerdict::ProvenTrue;
    for gr in g.rights() {
        let mut best = TriVerdict::ProvenFalse(Failure {
            condition: Condition::A,
            option: Some(gr),
            end: None,
        });
        for hr in h.rights() {
            best = best.join(geq_in(u, gr, hr, m)?);
            if best.is_true() {
                break;
            }
        }
        if !best.is_true() {
            for grl in gr.lefts() {
                best = best.join(geq_in(u, grl, h, m)?);
                if best.is_true() {
                    break;
                }
            }
        }
        acc = acc.meet(best);
        if acc.is_false() {
            return Ok(acc);
        }
    }
    for hl in h.lefts() {
        let mut best = TriVerdict::ProvenFalse(Failure {
            condition: Condition::B,
            option: Some(hl),
            end: None,
        });
        for gl in g.lefts() {
            best = best.join(geq_in(u, gl, hl, m)?);
            if best.is_true() {
                break;
            }
        }
        if !best.is_true() {
            for hlr in hl.rights() {
                best = best.join(geq_in(u, g, hlr, m)?);
                if best.is_true() {
                    break;
                }
            }
        }
        acc = acc.meet(best);
        if acc.is_false() {
            return Ok(acc);
        }
    }
    Ok(acc)
}

fn proviso(u: &Universe, g: AugId, h: AugId, m: &mut Meter) -> Result<TriVerdict> {
    let mut acc = TriVerdict::ProvenTrue;
    if h.is_left_end_like() {
        acc = acc.meet(strong_to_tri(u.left_strong_in(g, m)?, Condition::C));
    }
    if g.is_right_end_like() && !acc.is_false() {
        acc = acc.meet(strong_to_tri(u.right_strong_in(h, m)?, Condition::D));
    }
    Ok(acc)
}

/// Conditions (c) and (d) of the comparison test on their own.
pub fn proviso_holds(u: &Universe, g: AugId, h: AugId) -> Result<TriVerdict> {
    u.run(|m| proviso(u, g, h, m))
}

/// Conditions (a) and (b) of the comparison test on their own.
pub fn maintenance_in(u: &Universe, g: AugId, h: AugId) -> Result<TriVerdict> {
    u.run(|m| maintenance(u, g, h, m))
}

pub fn equiv(u: &Universe, g: AugId, h: AugId) -> Result<TriVerdict> {
    let forward = geq(u, g, h)?;
    if forward.is_false() {
        return Ok(forward);
    }
    Ok(forward.meet(geq(u, h, g)?))
}

/// `g > h`: `g >= h` and not `h >= g`.
pub fn strictly_greater(u: &Universe, g: AugId, h: AugId) -> Result<Answer> {
    let forward = geq(u, g, h)?;
    if forward.is_false() {
        return Ok(Answer::Proven(false));
    }
    let backward = geq(u, h, g)?;
    Ok(match (forward, backward) {
        (_, TriVerdict::ProvenTrue) => Answer::Proven(false),
        (_, TriVerdict::BoundedTrue(bound)) => Answer::Bounded {
            value: false,
            bound,
        },
        (TriVerdict::ProvenTrue, TriVerdict::ProvenFalse(_)) => Answer::Proven(true),
        (TriVerdict::BoundedTrue(bound), _) => Answer::Bounded { value: true, bound },
        (TriVerdict::ProvenFalse(_), _) => unreachable!(),
    })
}

/// Whether at least one of `g >= h` and `h >= g` holds.
pub fn comparable(u: &Universe, g: AugId, h: AugId) -> Result<Answer> {
    let v = geq(u, g, h)?.join(geq(u, h, g)?);
    Ok(match v {
        TriVerdict::ProvenTrue => Answer::Proven(true),
        TriVerdict::ProvenFalse(_) => Answer::Proven(false),
        TriVerdict::BoundedTrue(bound) => Answer::Bounded { value: true, bound },
    })
}

/// Result of a definitional comparison over a finite domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    /// No counterexample among `checked` domain elements.
    Holds { checked: usize },
    /// `o(G + X) >= o(H + X)` fails for this `X`.
    Fails(GameId),
}

impl OracleVerdict {
    pub fn holds(self) -> bool {
        matches!(self, OracleVerdict::Holds { .. })
    }
}

/// `o(g + x) >= o(h + x)` in the outcome order.
pub fn outcome_geq_at(g: AugId, h: AugId, x: GameId) -> bool {
    let og = Outcome::from(aug_sum(g, x.into()).outcome());
    let oh = Outcome::from(aug_sum(h, x.into()).outcome());
    matches!(
        og.partial_cmp(&oh),
        Some(Ordering::Greater | Ordering::Equal)
    )
}

/// Definitional comparison: `o(g + X) >= o(h + X)` for every `X` in `domain`.
pub fn oracle_geq(domain: &[GameId], g: AugId, h: AugId) -> OracleVerdict {
    match domain.iter().find(|&&x| !outcome_geq_at(g, h, x)) {
        Some(&x) => OracleVerdict::Fails(x),
        None => OracleVerdict::Holds {
            checked: domain.len(),
        },
    }
}

pub fn oracle_equiv(domain: &[GameId], g: AugId, h: AugId) -> OracleVerdict {
    match oracle_geq(domain, g, h) {
        OracleVerdict::Holds { .. } => oracle_geq(domain, h, g),
        fails => fails,
    }
}

/// Definitional Left strength over the Left ends of `domain`.
pub fn oracle_left_strong(domain: &[GameId], g: AugId) -> bool {
    domain
        .iter()
        .filter(|x| x.is_left_end())
        .all(|&x| aug_sum(g, x.into()).outcome().left_start == Player::Left)
}

pub fn oracle_right_strong(domain: &[GameId], g: AugId) -> bool {
    domain
        .iter()
        .filter(|x| x.is_right_end())
        .all(|&x| aug_sum(g, x.into()).outcome().right_start == Player::Right)
}

/// Conditions (a) and (b) with every comparison decided by the oracle.
pub fn maintenance_holds(domain: &[GameId], g: AugId, h: AugId) -> bool {
    let ge = |a: AugId, b: AugId| oracle_geq(domain, a, b).holds();
    g.rights()
        .all(|gr| h.rights().any(|hr| ge(gr, hr)) || gr.lefts().any(|grl| ge(grl, h)))
        && h.lefts()
            .all(|hl| g.lefts().any(|gl| ge(gl, hl)) || hl.rights().any(|hlr| ge(g, hlr)))
}

/// Conditions (c) and (d) with strength decided by the oracle.
pub fn proviso_holds_on(domain: &[GameId], g: AugId, h: AugId) -> bool {
    (!h.is_left_end_like() || oracle_left_strong(domain, g))
        && (!g.is_right_end_like() || oracle_right_strong(domain, h))
}
