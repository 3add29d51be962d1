//! Universes of games and the Left/Right strong test.
//!
//! A universe is described by a [`UniverseSpec`]; the runtime [`Universe`]
//! owns the memo tables of every universe-relative computation (strong tests,
//! comparisons, simplest forms) together with the work budget.
//!
//! Left-strength is decided exactly when the universe is known to be weak (a
//! form is then strong iff it is Left end-like) or when its Left ends are a
//! finite, fully enumerated set. Otherwise it is tested against every Left
//! end up to the configured birthday bound and reported as bounded.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, OnceLock};

use parking_lot::Mutex;

use crate::augmented::{aug_conjugate, AugId};
use crate::enumerate::{self, DEFAULT_LEVEL_LIMIT};
use crate::error::{Error, Result};
use crate::games::{integer, mk_game, GameId, Player};
use crate::notation::{self, ParseError, ParseErrorKind, UniverseText};
use crate::store;

pub const DEFAULT_END_BOUND: u32 = 3;
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum UniverseKind {
    Dicot,
    DeadEnding,
    FullMisere,
    /// Smallest universe containing the given Left ends.
    EndClosure(Vec<GameId>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniverseSpec {
    pub kind: UniverseKind,
    pub end_bound: u32,
    pub budget: u64,
}

impl UniverseSpec {
    fn of(kind: UniverseKind) -> UniverseSpec {
        UniverseSpec {
            kind,
            end_bound: DEFAULT_END_BOUND,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn dicot() -> UniverseSpec {
        UniverseSpec::of(UniverseKind::Dicot)
    }

    pub fn dead_ending() -> UniverseSpec {
        UniverseSpec::of(UniverseKind::DeadEnding)
    }

    pub fn full_misere() -> UniverseSpec {
        UniverseSpec::of(UniverseKind::FullMisere)
    }

    pub fn end_closure(generators: impl IntoIterator<Item = GameId>) -> Result<UniverseSpec> {
        let mut gens: Vec<GameId> = generators.into_iter().collect();
        if let Some(g) = gens.iter().find(|g| !g.is_left_end()) {
            return Err(Error::GeneratorNotLeftEnd(g.to_string()));
        }
        gens.sort();
        gens.dedup();
        Ok(UniverseSpec::of(UniverseKind::EndClosure(gens)))
    }

    pub fn with_bound(mut self, end_bound: u32) -> UniverseSpec {
        self.end_bound = end_bound;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> UniverseSpec {
        self.budget = budget;
        self
    }

    pub fn parse(text: &str) -> std::result::Result<UniverseSpec, ParseError> {
        Ok(match notation::parse_universe(text)? {
            UniverseText::Dicot => UniverseSpec::dicot(),
            UniverseText::DeadEnding => UniverseSpec::dead_ending(),
            UniverseText::FullMisere => UniverseSpec::full_misere(),
            UniverseText::EndClosure(gens) => {
                UniverseSpec::end_closure(gens).expect("generators checked by parser")
            }
            UniverseText::Monoid(_) => {
                return Err(ParseError {
                    pos: 0,
                    kind: ParseErrorKind::UnknownUniverse(
                        "mon(...) is a monoid, not a universe".into(),
                    ),
                })
            }
        })
    }

    /// Stable text identifying the universe and its bound, for caches and reports.
    pub fn fingerprint(&self) -> String {
        format!("{self}@{}", self.end_bound)
    }
}

impl fmt::Display for UniverseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            UniverseKind::Dicot => f.write_str("D"),
            UniverseKind::DeadEnding => f.write_str("E"),
            UniverseKind::FullMisere => f.write_str("M"),
            UniverseKind::EndClosure(gens) => {
                let parts: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
                write!(f, "cl({})", parts.join(";"))
            }
        }
    }
}

/// Answer to "is this form Left strong?".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrongVerdict {
    ProvenStrong,
    /// A Left end `X` of the universe with `o^L(G + X) = R`.
    ProvenNotStrong(GameId),
    /// No failing Left end of birthday at most the bound.
    BoundedStrong(u32),
}

impl StrongVerdict {
    pub fn is_proven(self) -> bool {
        !matches!(self, StrongVerdict::BoundedStrong(_))
    }

    pub fn holds(self) -> bool {
        !matches!(self, StrongVerdict::ProvenNotStrong(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeakCertificate {
    /// The universe contains a Left end with a Right option to an integer `n >= 2`.
    WeakeningEnd(GameId),
    FullMisereRule,
    /// A form that is proven Left strong without being Left end-like.
    NotWeak(AugId),
    /// Nothing decisive found; `candidate` is Left strong up to the bound.
    Unknown {
        bound: u32,
        candidate: Option<AugId>,
    },
}

impl WeakCertificate {
    pub fn is_weak(&self) -> bool {
        matches!(
            self,
            WeakCertificate::WeakeningEnd(_) | WeakCertificate::FullMisereRule
        )
    }
}

/// Counts fresh (unmemoized) work inside one top-level call.
pub(crate) struct Meter {
    limit: u64,
    used: u64,
}

impl Meter {
    pub(crate) fn tick(&mut self) -> Result<()> {
        if self.used >= self.limit {
            return Err(Error::BudgetExceeded { limit: self.limit });
        }
        self.used += 1;
        Ok(())
    }

    pub(crate) fn sum(&mut self, a: AugId, b: AugId) -> Result<AugId> {
        let mut remaining = self.limit.saturating_sub(self.used);
        let before = remaining;
        let s = store::add(a.0, b.0, &mut remaining);
        self.used += before - remaining;
        s.map(AugId)
            .map_err(|_| Error::BudgetExceeded { limit: self.limit })
    }
}

#[derive(Default)]
struct Caches {
    member_levels: Vec<Arc<Vec<GameId>>>,
    left_ends: HashMap<u32, Arc<Vec<GameId>>>,
    closure: HashMap<u32, Arc<HashSet<GameId>>>,
}

/// A universe together with its memo tables.
pub struct Universe {
    spec: UniverseSpec,
    assume_bounded: bool,
    level_limit: usize,
    base: Vec<GameId>,
    weakening: OnceLock<Option<GameId>>,
    caches: Mutex<Caches>,
    pub(crate) strong: Mutex<HashMap<AugId, StrongVerdict>>,
    pub(crate) geq_memo: Mutex<HashMap<(AugId, AugId), crate::order::TriVerdict>>,
    pub(crate) simplest_memo: Mutex<HashMap<AugId, Arc<crate::simplest::Entry>>>,
    work: AtomicU64,
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Universe")
            .field("spec", &self.spec)
            .field("assume_bounded", &self.assume_bounded)
            .finish_non_exhaustive()
    }
}

impl Universe {
    pub fn new(spec: UniverseSpec) -> Universe {
        let base = match &spec.kind {
            UniverseKind::EndClosure(gens) => closure_base(gens),
            _ => Vec::new(),
        };
        Universe {
            spec,
            assume_bounded: false,
            level_limit: DEFAULT_LEVEL_LIMIT,
            base,
            weakening: OnceLock::new(),
            caches: Mutex::default(),
            strong: Mutex::default(),
            geq_memo: Mutex::default(),
            simplest_memo: Mutex::default(),
            work: AtomicU64::new(0),
        }
    }

    pub fn dicot() -> Universe {
        Universe::new(UniverseSpec::dicot())
    }

    pub fn dead_ending() -> Universe {
        Universe::new(UniverseSpec::dead_ending())
    }

    pub fn full_misere() -> Universe {
        Universe::new(UniverseSpec::full_misere())
    }

    /// Accept bounded comparison evidence when reducing forms.
    pub fn assume_bounded(mut self, yes: bool) -> Universe {
        self.assume_bounded = yes;
        self
    }

    pub fn with_level_limit(mut self, limit: usize) -> Universe {
        self.level_limit = limit;
        self
    }

    pub fn spec(&self) -> &UniverseSpec {
        &self.spec
    }

    pub fn bound(&self) -> u32 {
        self.spec.end_bound
    }

    pub fn level_limit(&self) -> usize {
        self.level_limit
    }

    pub fn assumes_bounded(&self) -> bool {
        self.assume_bounded
    }

    /// Total fresh work performed by this universe so far.
    pub fn work_done(&self) -> u64 {
        self.work.load(AtomicOrdering::Relaxed)
    }

    /// Runs `f` with a fresh meter and records its usage.
    pub(crate) fn run<T>(&self, f: impl FnOnce(&mut Meter) -> Result<T>) -> Result<T> {
        let mut meter = Meter {
            limit: self.spec.budget,
            used: 0,
        };
        let out = f(&mut meter);
        self.work.fetch_add(meter.used, AtomicOrdering::Relaxed);
        out
    }

    /// Left-end subpositions of the generators and of their conjugates.
    pub fn closure_base(&self) -> &[GameId] {
        &self.base
    }

    /// Whether the Left ends of the universe are a finite set that is
    /// enumerated in full, making bounded searches exact.
    pub fn ends_complete(&self) -> bool {
        match &self.spec.kind {
            UniverseKind::Dicot => true,
            UniverseKind::EndClosure(_) => self.base.iter().all(|g| g.is_zero()),
            _ => false,
        }
    }

    /// Does the form lie in the universe?
    pub fn member(&self, g: GameId) -> bool {
        match &self.spec.kind {
            UniverseKind::Dicot => store::node(g.0).dicot,
            UniverseKind::DeadEnding => g.is_dead_ending(),
            UniverseKind::FullMisere => true,
            UniverseKind::EndClosure(_) => g.subpositions().into_iter().all(|s| {
                (!s.is_left_end() || self.in_closure(s))
                    && (!s.is_right_end() || self.in_closure(s.conjugate()))
            }),
        }
    }

    fn in_closure(&self, left_end: GameId) -> bool {
        self.closure_up_to(left_end.birthday()).contains(&left_end)
    }

    fn closure_up_to(&self, b: u32) -> Arc<HashSet<GameId>> {
        if let Some(c) = self.caches.lock().closure.get(&b) {
            return c.clone();
        }
        let parts: Vec<GameId> = self.base.iter().copied().filter(|g| !g.is_zero()).collect();
        let mut all: HashSet<GameId> = HashSet::from([GameId::zero()]);
        let mut frontier = vec![GameId::zero()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &x in &frontier {
                for &e in &parts {
                    if x.birthday() + e.birthday() > b || all.len() >= self.level_limit {
                        continue;
                    }
                    let y = crate::games::sum(x, e);
                    if all.insert(y) {
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        let c = Arc::new(all);
        self.caches.lock().closure.insert(b, c.clone());
        c
    }

    /// Members born by day `b`, width-capped per level.
    pub fn members_up_to(&self, b: u32) -> Arc<Vec<GameId>> {
        let mut day = {
            let caches = self.caches.lock();
            if let Some(l) = caches.member_levels.get(b as usize) {
                return l.clone();
            }
            caches.member_levels.len() as u32
        };
        while day <= b {
            let level = if day == 0 {
                vec![GameId::zero()]
            } else {
                let prev = self.members_up_to(day - 1);
                enumerate::next_level(&prev, |l, r| self.local_rule(l, r), self.level_limit)
            };
            self.caches.lock().member_levels.push(Arc::new(level));
            day += 1;
        }
        self.caches.lock().member_levels[b as usize].clone()
    }

    /// Whether `{l|r}` is a member, given that every option is.
    fn local_rule(&self, l: &[GameId], r: &[GameId]) -> bool {
        match &self.spec.kind {
            UniverseKind::Dicot => l.is_empty() == r.is_empty(),
            UniverseKind::DeadEnding => {
                (!l.is_empty() || r.iter().all(|x| store::node(x.0).dead_left_end))
                    && (!r.is_empty() || l.iter().all(|x| store::node(x.0).dead_right_end))
            }
            UniverseKind::FullMisere => true,
            UniverseKind::EndClosure(_) => {
                let g = mk_game(l.iter().copied(), r.iter().copied());
                (!l.is_empty() || self.in_closure(g))
                    && (!r.is_empty() || self.in_closure(g.conjugate()))
            }
        }
    }

    /// Left ends of the universe born by day `b`, sorted by birthday.
    pub fn left_ends_up_to(&self, b: u32) -> Arc<Vec<GameId>> {
        if let Some(l) = self.caches.lock().left_ends.get(&b) {
            return l.clone();
        }
        let ends = match &self.spec.kind {
            UniverseKind::Dicot => vec![GameId::zero()],
            UniverseKind::FullMisere => {
                if b == 0 {
                    vec![GameId::zero()]
                } else {
                    let pool = self.members_up_to(b - 1);
                    enumerate::left_ends_over(&pool, |_| true, self.level_limit)
                }
            }
            UniverseKind::DeadEnding => {
                if b == 0 {
                    vec![GameId::zero()]
                } else {
                    let pool = self.left_ends_up_to(b - 1);
                    enumerate::left_ends_over(&pool, |_| true, self.level_limit)
                }
            }
            UniverseKind::EndClosure(_) => {
                let mut v: Vec<GameId> = self.closure_up_to(b).iter().copied().collect();
                v.sort();
                v
            }
        };
        let ends = Arc::new(ends);
        self.caches.lock().left_ends.insert(b, ends.clone());
        ends
    }

    /// A Left end of the universe with a Right option to an integer `n >= 2`.
    pub fn weakening_end(&self) -> Option<GameId> {
        *self.weakening.get_or_init(|| {
            // A sum of non-zero Left ends never has an integer Right option,
            // so the closure base is the whole search space.
            let candidates: Vec<GameId> = match &self.spec.kind {
                UniverseKind::EndClosure(_) => self.base.clone(),
                _ => Vec::new(),
            };
            candidates
                .into_iter()
                .find(|x| x.rights().any(|r| r.as_integer().is_some_and(|n| n >= 2)))
        })
    }

    pub fn contains_weakening_end(&self) -> WeakCertificate {
        match (&self.spec.kind, self.weakening_end()) {
            (UniverseKind::FullMisere, _) => WeakCertificate::FullMisereRule,
            (_, Some(end)) => WeakCertificate::WeakeningEnd(end),
            _ => WeakCertificate::Unknown {
                bound: self.bound(),
                candidate: None,
            },
        }
    }

    /// Known weak, so that strength coincides with being end-like.
    pub fn known_weak(&self) -> bool {
        matches!(self.spec.kind, UniverseKind::FullMisere) || self.weakening_end().is_some()
    }

    pub fn is_left_strong(&self, a: AugId) -> Result<StrongVerdict> {
        self.run(|m| self.left_strong_in(a, m))
    }

    pub fn is_right_strong(&self, a: AugId) -> Result<StrongVerdict> {
        self.run(|m| self.right_strong_in(a, m))
    }

    pub(crate) fn right_strong_in(&self, a: AugId, m: &mut Meter) -> Result<StrongVerdict> {
        Ok(match self.left_strong_in(aug_conjugate(a), m)? {
            StrongVerdict::ProvenNotStrong(x) => StrongVerdict::ProvenNotStrong(x.conjugate()),
            other => other,
        })
    }

    pub(crate) fn left_strong_in(&self, a: AugId, m: &mut Meter) -> Result<StrongVerdict> {
        if a.is_left_end_like() {
            return Ok(StrongVerdict::ProvenStrong);
        }
        if let Some(&v) = self.strong.lock().get(&a) {
            return Ok(v);
        }
        m.tick()?;
        let v = self.decide_left_strong(a, m)?;
        self.strong.lock().insert(a, v);
        Ok(v)
    }

    fn decide_left_strong(&self, a: AugId, m: &mut Meter) -> Result<StrongVerdict> {
        if let Some(x) = self.weak_witness(a) {
            if fails_for_left(a, x, m)? {
                return Ok(StrongVerdict::ProvenNotStrong(x));
            }
        }
        if matches!(self.spec.kind, UniverseKind::Dicot) {
            return Ok(if a.outcome().left_start == Player::Left {
                StrongVerdict::ProvenStrong
            } else {
                StrongVerdict::ProvenNotStrong(GameId::zero())
            });
        }
        let ends = self.left_ends_up_to(self.bound());
        for &x in ends.iter() {
            if fails_for_left(a, x, m)? {
                return Ok(StrongVerdict::ProvenNotStrong(x));
            }
        }
        Ok(if self.ends_complete() {
            StrongVerdict::ProvenStrong
        } else {
            StrongVerdict::BoundedStrong(self.bound())
        })
    }

    /// The Left end that defeats a non-end-like form in a weak universe.
    fn weak_witness(&self, a: AugId) -> Option<GameId> {
        let b = i64::from(a.birthday());
        if matches!(self.spec.kind, UniverseKind::FullMisere) {
            return Some(mk_game([], [integer(b).ok()?]));
        }
        let w = self.weakening_end()?;
        Some(crate::games::multiple(b as usize, w))
    }

    pub fn is_weak(&self) -> Result<WeakCertificate> {
        let cert = self.contains_weakening_end();
        if cert.is_weak() {
            return Ok(cert);
        }
        let mut candidates: Vec<AugId> = Vec::new();
        for g in self
            .members_up_to(1)
            .iter()
            .filter(|g| !g.is_left_end() && !g.is_right_end())
        {
            candidates.push(crate::games::sum(*g, g.conjugate()).into());
        }
        candidates.extend(self.members_up_to(2).iter().map(|&g| AugId::from(g)));
        let mut bounded = None;
        for c in candidates {
            if c.is_left_end_like() {
                continue;
            }
            match self.is_left_strong(c)? {
                StrongVerdict::ProvenStrong => return Ok(WeakCertificate::NotWeak(c)),
                StrongVerdict::BoundedStrong(_) if bounded.is_none() => bounded = Some(c),
                _ => {}
            }
        }
        Ok(WeakCertificate::Unknown {
            bound: self.bound(),
            candidate: bounded,
        })
    }
}

/// Does Right win `a + x` with Left moving first?
fn fails_for_left(a: AugId, x: GameId, m: &mut Meter) -> Result<bool> {
    let s = m.sum(a, x.into())?;
    Ok(s.outcome().left_start == Player::Right)
}

fn closure_base(gens: &[GameId]) -> Vec<GameId> {
    let mut set: HashSet<GameId> = HashSet::from([GameId::zero()]);
    for &g in gens {
        for s in g
            .subpositions()
            .into_iter()
            .chain(g.conjugate().subpositions())
        {
            if s.is_left_end() {
                set.insert(s);
            }
        }
    }
    let mut v: Vec<GameId> = set.into_iter().collect();
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augmented::mk_aug;
    use crate::games::{multiple, sum};
    use crate::notation::parse_game;

    fn g(s: &str) -> GameId {
        parse_game(s).unwrap()
    }

    fn cl2() -> Universe {
        Universe::new(UniverseSpec::parse("cl({.|2})").unwrap())
    }

    #[test]
    fn spec_text() {
        assert_eq!(
            UniverseSpec::parse("cl({.|2})").unwrap().to_string(),
            "cl({.|2})"
        );
        assert!(UniverseSpec::parse("mon(~1)").is_err());
        assert!(UniverseSpec::end_closure([g("1")]).is_err());
    }

    #[test]
    fn left_ends() {
        assert_eq!(*Universe::dicot().left_ends_up_to(5), vec![GameId::zero()]);
        let e = Universe::dead_ending().left_ends_up_to(2);
        assert_eq!(*e, vec![g("0"), g("~1"), g("{.|~1}"), g("{.|0,~1}")]);
        let u = cl2();
        assert_eq!(*u.left_ends_up_to(1), vec![g("0"), g("~1")]);
        let ends3 = u.left_ends_up_to(3);
        assert!(ends3.contains(&g("{.|2}")) && ends3.contains(&g("~2")));
        assert!(u.left_ends_up_to(6).contains(&g("2x{.|2}")));
    }

    #[test]
    fn membership() {
        let d = Universe::dicot();
        assert!(d.member(g("*")) && !d.member(g("1")));
        assert!(
            Universe::dead_ending().member(g("{.|~1}"))
                && !Universe::dead_ending().member(g("{.|2}"))
        );
        assert!(!Universe::dead_ending().member(g("{.|*}")));
        let u = cl2();
        assert!(u.member(g("{.|2}+{.|2}")));
        assert!(u.member(g("{*|{.|2}}")));
        assert!(!u.member(g("{.|*}")));
    }

    #[test]
    fn weakening_ends() {
        assert_eq!(
            cl2().contains_weakening_end(),
            WeakCertificate::WeakeningEnd(g("{.|2}"))
        );
        let u = Universe::new(UniverseSpec::parse("cl({.|2,5})").unwrap());
        assert_eq!(
            u.contains_weakening_end(),
            WeakCertificate::WeakeningEnd(g("{.|2,5}"))
        );
        assert!(matches!(
            Universe::dicot().contains_weakening_end(),
            WeakCertificate::Unknown { .. }
        ));
        assert_eq!(
            Universe::full_misere().contains_weakening_end(),
            WeakCertificate::FullMisereRule
        );
    }

    #[test]
    fn strength() {
        let d = Universe::dicot();
        assert_eq!(
            d.is_left_strong(g("*+*").into()).unwrap(),
            StrongVerdict::ProvenStrong
        );
        assert_eq!(
            d.is_left_strong(g("1").into()).unwrap(),
            StrongVerdict::ProvenNotStrong(GameId::zero())
        );
        let u = cl2();
        assert!(matches!(
            u.is_left_strong(g("1+~1").into()).unwrap(),
            StrongVerdict::ProvenNotStrong(_)
        ));
        let m = Universe::full_misere();
        let t = mk_aug([AugId::zero()], [AugId::zero()], true, false);
        assert_eq!(m.is_left_strong(t).unwrap(), StrongVerdict::ProvenStrong);
        let e = Universe::dead_ending();
        assert_eq!(
            e.is_left_strong(g("1+~1").into()).unwrap(),
            StrongVerdict::BoundedStrong(3)
        );
        assert!(matches!(
            e.is_left_strong(g("*+*").into()).unwrap(),
            StrongVerdict::ProvenNotStrong(_)
        ));
    }

    #[test]
    fn weak_witnesses_win_for_right() {
        let w = g("{.|2}");
        for x in [g("*"), g("1"), g("{1|*}"), g("{*,1|~1}")] {
            let s = sum(x, multiple(x.birthday() as usize, w));
            assert_eq!(s.outcome().left_start, Player::Right, "{x}");
        }
    }

    #[test]
    fn weakness() {
        assert_eq!(
            Universe::full_misere().is_weak().unwrap(),
            WeakCertificate::FullMisereRule
        );
        assert!(cl2().is_weak().unwrap().is_weak());
        assert_eq!(
            Universe::dicot().is_weak().unwrap(),
            WeakCertificate::NotWeak(g("*+*").into())
        );
    }

    #[test]
    fn right_strong_mirrors() {
        let d = Universe::dicot();
        assert_eq!(
            d.is_right_strong(g("*+*").into()).unwrap(),
            StrongVerdict::ProvenStrong
        );
        assert_eq!(
            d.is_right_strong(g("1").into()).unwrap(),
            StrongVerdict::ProvenStrong
        );
    }

    #[test]
    fn budget_is_enforced() {
        let u = Universe::new(UniverseSpec::dead_ending().with_budget(3));
        assert!(matches!(
            u.is_left_strong(g("{*,1|*}+{1|~1}").into()),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
