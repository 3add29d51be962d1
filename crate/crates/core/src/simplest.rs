//! Reduction of augmented forms to their simplest form in a universe.
//!
//! Every subposition is reduced bottom-up. At each node the three local
//! reductions run to a fixpoint, one step at a time: remove a dominated
//! option, bypass a reversible option (an option reversing through a Left
//! end-like form becomes a tombstone), drop a tombstone whose removal keeps
//! the form equivalent.
//!
//! By default a step is taken only on proven comparisons. With
//! [`Universe::assume_bounded`] bounded evidence is accepted as well and the
//! trace says so; otherwise refused bounded evidence marks the result as
//! possibly not fully reduced.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::augmented::{mk_aug, AugId};
use crate::error::Result;
use crate::games::Player;
use crate::order::{geq_in, TriVerdict};
use crate::universes::{Meter, Universe};

/// How much the comparisons behind a reduction can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Every comparison used was proven.
    Exact,
    /// Some step relied on a comparison that is only bounded.
    BoundedAssumed(u32),
    /// A bounded comparison was refused, so the form may reduce further.
    Partial(u32),
}

impl Mode {
    fn rank(self) -> u8 {
        match self {
            Mode::Exact => 0,
            Mode::BoundedAssumed(_) => 1,
            Mode::Partial(_) => 2,
        }
    }

    pub fn combine(self, other: Mode) -> Mode {
        if other.rank() > self.rank() {
            other
        } else {
            self
        }
    }

    pub fn is_exact(self) -> bool {
        self == Mode::Exact
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    /// `option` is dominated by `by` and removed.
    RemoveDominated {
        side: Player,
        option: AugId,
        by: AugId,
    },
    /// `option` reverses through `target` and is replaced by its options.
    Bypass {
        side: Player,
        option: AugId,
        target: AugId,
    },
    /// `option` reverses through an end-like `target`; it is bypassed and a
    /// tombstone is added.
    EndReverse {
        side: Player,
        option: AugId,
        target: AugId,
    },
    DropTombstone {
        side: Player,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub before: AugId,
    pub action: Action,
    pub after: AugId,
}

impl Action {
    /// Applies the action structurally, without any comparison.
    pub fn apply(self, form: AugId) -> AugId {
        let mut lefts: Vec<AugId> = form.lefts().collect();
        let mut rights: Vec<AugId> = form.rights().collect();
        let (mut lt, mut rt) = (form.left_tomb(), form.right_tomb());
        let (side, option) = match self {
            Action::RemoveDominated { side, option, .. }
            | Action::Bypass { side, option, .. }
            | Action::EndReverse { side, option, .. } => (side, Some(option)),
            Action::DropTombstone { side } => (side, None),
        };
        let (opts, tomb) = match side {
            Player::Left => (&mut lefts, &mut lt),
            Player::Right => (&mut rights, &mut rt),
        };
        if let Some(option) = option {
            opts.retain(|&o| o != option);
        }
        match self {
            Action::RemoveDominated { .. } => {}
            Action::Bypass { target, .. } | Action::EndReverse { target, .. } => {
                match side {
                    Player::Left => opts.extend(target.lefts()),
                    Player::Right => opts.extend(target.rights()),
                }
                if matches!(self, Action::EndReverse { .. }) {
                    *tomb = true;
                }
            }
            Action::DropTombstone { .. } => *tomb = false,
        }
        mk_aug(lefts, rights, lt, rt)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    /// Steps in the order they were taken, each keyed by the form it starts from.
    pub steps: Vec<Step>,
    pub mode: Mode,
}

impl ReductionTrace {
    /// Reproduces the reduction of `input` from the recorded steps alone.
    pub fn replay(&self, input: AugId) -> AugId {
        let by_start: HashMap<AugId, Step> = self.steps.iter().map(|s| (s.before, *s)).collect();
        let mut memo = HashMap::new();
        replay_node(input, &by_start, &mut memo)
    }
}

fn replay_node(a: AugId, steps: &HashMap<AugId, Step>, memo: &mut HashMap<AugId, AugId>) -> AugId {
    if let Some(&r) = memo.get(&a) {
        return r;
    }
    let lefts: Vec<AugId> = a.lefts().map(|l| replay_node(l, steps, memo)).collect();
    let rights: Vec<AugId> = a.rights().map(|r| replay_node(r, steps, memo)).collect();
    let mut cur = mk_aug(lefts, rights, a.left_tomb(), a.right_tomb());
    let mut seen = HashSet::new();
    while let Some(step) = steps.get(&cur) {
        if !seen.insert(cur) {
            break;
        }
        cur = step.action.apply(cur);
    }
    memo.insert(a, cur);
    cur
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplified {
    pub form: AugId,
    pub trace: ReductionTrace,
}

/// Memoized reduction of one input form.
#[derive(Debug)]
pub(crate) struct Entry {
    form: AugId,
    /// Steps taken at this node after its options were reduced.
    local: Vec<Step>,
    mode: Mode,
}

struct Reducer<'a> {
    u: &'a Universe,
    mode: Mode,
}

impl Reducer<'_> {
    fn accept(&mut self, v: TriVerdict) -> bool {
        match v {
            TriVerdict::ProvenTrue => true,
            TriVerdict::ProvenFalse(_) => false,
            TriVerdict::BoundedTrue(b) => {
                if self.u.assumes_bounded() {
                    self.mode = self.mode.combine(Mode::BoundedAssumed(b));
                    true
                } else {
                    self.mode = self.mode.combine(Mode::Partial(b));
                    false
                }
            }
        }
    }

    fn ge(&mut self, g: AugId, h: AugId, m: &mut Meter) -> Result<bool> {
        let v = geq_in(self.u, g, h, m)?;
        Ok(self.accept(v))
    }

    fn dominated(&mut self, a: AugId, m: &mut Meter) -> Result<Option<Action>> {
        let lefts: Vec<AugId> = a.lefts().collect();
        for &l in &lefts {
            for &other in &lefts {
                if other != l && self.ge(other, l, m)? {
                    return Ok(Some(Action::RemoveDominated {
                        side: Player::Left,
                        option: l,
                        by: other,
                    }));
                }
            }
        }
        let rights: Vec<AugId> = a.rights().collect();
        for &r in &rights {
            for &other in &rights {
                if other != r && self.ge(r, other, m)? {
                    return Ok(Some(Action::RemoveDominated {
                        side: Player::Right,
                        option: r,
                        by: other,
                    }));
                }
            }
        }
        Ok(None)
    }

    fn reversible(&mut self, a: AugId, m: &mut Meter) -> Result<Option<Action>> {
        for l in a.lefts() {
            for lr in l.rights() {
                if self.ge(a, lr, m)? {
                    return Ok(Some(if lr.is_left_end_like() {
                        Action::EndReverse {
                            side: Player::Left,
                            option: l,
                            target: lr,
                        }
                    } else {
                        Action::Bypass {
                            side: Player::Left,
                            option: l,
                            target: lr,
                        }
                    }));
                }
            }
        }
        for r in a.rights() {
            for rl in r.lefts() {
                if self.ge(rl, a, m)? {
                    return Ok(Some(if rl.is_right_end_like() {
                        Action::EndReverse {
                            side: Player::Right,
                            option: r,
                            target: rl,
                        }
                    } else {
                        Action::Bypass {
                            side: Player::Right,
                            option: r,
                            target: rl,
                        }
                    }));
                }
            }
        }
        Ok(None)
    }

    fn unnecessary_tomb(&mut self, a: AugId, m: &mut Meter) -> Result<Option<Action>> {
        for side in [Player::Left, Player::Right] {
            let (has, without) = match side {
                Player::Left => (a.left_tomb(), a.with_tombs(false, a.right_tomb())),
                Player::Right => (a.right_tomb(), a.with_tombs(a.left_tomb(), false)),
            };
            if has && self.ge(a, without, m)? && self.ge(without, a, m)? {
                return Ok(Some(Action::DropTombstone { side }));
            }
        }
        Ok(None)
    }
}

pub(crate) fn simplest_in(u: &Universe, a: AugId, m: &mut Meter) -> Result<Arc<Entry>> {
    if let Some(e) = u.simplest_memo.lock().get(&a) {
        return Ok(e.clone());
    }
    m.tick()?;
    let mut mode = Mode::Exact;
    let mut lefts = Vec::with_capacity(a.lefts().len());
    for l in a.lefts() {
        let e = simplest_in(u, l, m)?;
        mode = mode.combine(e.mode);
        lefts.push(e.form);
    }
    let mut rights = Vec::with_capacity(a.rights().len());
    for r in a.rights() {
        let e = simplest_in(u, r, m)?;
        mode = mode.combine(e.mode);
        rights.push(e.form);
    }
    let mut cur = mk_aug(lefts, rights, a.left_tomb(), a.right_tomb());
    let mut reducer = Reducer { u, mode };
    let mut local = Vec::new();
    loop {
        m.tick()?;
        let action = match reducer.dominated(cur, m)? {
            Some(act) => Some(act),
            None => match reducer.reversible(cur, m)? {
                Some(act) => Some(act),
                None => reducer.unnecessary_tomb(cur, m)?,
            },
        };
        let Some(action) = action else { break };
        let after = action.apply(cur);
        local.push(Step {
            before: cur,
            action,
            after,
        });
        cur = after;
    }
    let entry = Arc::new(Entry {
        form: cur,
        local,
        mode: reducer.mode,
    });
    let mut memo = u.simplest_memo.lock();
    memo.insert(a, entry.clone());
    memo.entry(cur).or_insert_with(|| {
        Arc::new(Entry {
            form: cur,
            local: Vec::new(),
            mode: entry.mode,
        })
    });
    Ok(entry)
}

fn collect_steps(u: &Universe, a: AugId, seen: &mut HashSet<AugId>, out: &mut Vec<Step>) {
    if !seen.insert(a) {
        return;
    }
    for o in a.lefts().chain(a.rights()) {
        collect_steps(u, o, seen, out);
    }
    let entry = u.simplest_memo.lock().get(&a).cloned();
    if let Some(e) = entry {
        out.extend(e.local.iter().copied());
    }
}

/// The simplest form of `a` in the universe, with the steps that produced it.
pub fn simplest_form(u: &Universe, a: AugId) -> Result<Simplified> {
    u.run(|m| {
        let entry = simplest_in(u, a, m)?;
        let mut steps = Vec::new();
        collect_steps(u, a, &mut HashSet::new(), &mut steps);
        let mut starts = HashSet::new();
        steps.retain(|s| starts.insert(s.before));
        Ok(Simplified {
            form: entry.form,
            trace: ReductionTrace {
                steps,
                mode: entry.mode,
            },
        })
    })
}

fn one_step(
    u: &Universe,
    a: AugId,
    pick: impl Fn(&mut Reducer, AugId, &mut Meter) -> Result<Option<Action>>,
) -> Result<AugId> {
    u.run(|m| {
        let mut reducer = Reducer {
            u,
            mode: Mode::Exact,
        };
        let mut cur = a;
        while let Some(act) = pick(&mut reducer, cur, m)? {
            cur = act.apply(cur);
        }
        Ok(cur)
    })
}

/// Removes dominated options at the top level until none remain.
pub fn remove_dominated(u: &Universe, a: AugId) -> Result<AugId> {
    one_step(u, a, |r, g, m| r.dominated(g, m))
}

/// Bypasses reversible options at the top level until none remain.
pub fn bypass_reversible(u: &Universe, a: AugId) -> Result<AugId> {
    one_step(u, a, |r, g, m| r.reversible(g, m))
}

/// Drops tombstones at the top level whose removal keeps the form equivalent.
pub fn prune_tombstones(u: &Universe, a: AugId) -> Result<AugId> {
    one_step(u, a, |r, g, m| r.unnecessary_tomb(g, m))
}
