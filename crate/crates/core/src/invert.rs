//! Invertibility in a universe.
//!
//! A form is invertible iff `G + ~G` is Left strong and every option of its
//! simplest form is invertible; the inverse is then always the conjugate.
//! For the forms born by day 1 this reduces to searching the Left ends of
//! the universe for disintegrators, starkillers and super starkillers.
//!
//! Whether an augmented form lies in the tombstone extension `Û` of a
//! universe is not decided here. Callers state it through
//! [`UhatAssertions`], and reports carry those assumptions.

use std::collections::HashMap;
use std::sync::LazyLock;

use parking_lot::RwLock;

use crate::augmented::{aug_conjugate, mk_aug, AugId};
use crate::error::{Error, Result};
use crate::games::{GameId, Player};
use crate::order::{equiv, geq_in, TriVerdict};
use crate::simplest::{simplest_form, Mode};
use crate::universes::{Meter, StrongVerdict, Universe};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Predicate {
    Disintegrator,
    Starkiller,
    SuperStarkiller,
}

impl Predicate {
    pub const ALL: [Predicate; 3] = [
        Predicate::Disintegrator,
        Predicate::Starkiller,
        Predicate::SuperStarkiller,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Predicate::Disintegrator => "disintegrator",
            Predicate::Starkiller => "starkiller",
            Predicate::SuperStarkiller => "super starkiller",
        }
    }

    /// The day-1 form whose invertibility this predicate governs, added to
    /// a Left end to probe it: `~1`, `*` and `{#,0|0}`.
    pub fn probe(self) -> AugId {
        let zero = AugId::zero();
        match self {
            Predicate::Disintegrator => mk_aug([], [zero], false, false),
            Predicate::Starkiller => mk_aug([zero], [zero], false, false),
            Predicate::SuperStarkiller => mk_aug([zero], [zero], true, false),
        }
    }

    /// The day-1 form that is invertible iff no Left end satisfies the predicate.
    pub fn governed_form(self) -> AugId {
        let zero = AugId::zero();
        match self {
            Predicate::Disintegrator => mk_aug([zero], [], false, false),
            Predicate::Starkiller => mk_aug([zero], [zero], false, false),
            Predicate::SuperStarkiller => mk_aug([zero], [zero], true, false),
        }
    }

    fn gate(self, r: GameId) -> bool {
        let not_end = !r.is_left_end();
        let right_wins = r.outcome().right_start == Player::Right;
        match self {
            Predicate::Disintegrator => not_end,
            Predicate::Starkiller => right_wins,
            Predicate::SuperStarkiller => not_end && right_wins,
        }
    }
}

static PREDICATES: LazyLock<RwLock<HashMap<(Predicate, GameId), bool>>> =
    LazyLock::new(Default::default);

/// Some Right option passes the gate of the predicate and each of its Left
/// options is either lost by Left moving first or satisfies the predicate.
pub fn holds(p: Predicate, g: GameId) -> bool {
    if let Some(&v) = PREDICATES.read().get(&(p, g)) {
        return v;
    }
    let v = g.rights().any(|r| {
        p.gate(r)
            && r.lefts()
                .all(|rl| rl.outcome().left_start == Player::Right || holds(p, rl))
    });
    PREDICATES.write().insert((p, g), v);
    v
}

pub fn is_disintegrator(g: GameId) -> bool {
    holds(Predicate::Disintegrator, g)
}

pub fn is_starkiller(g: GameId) -> bool {
    holds(Predicate::Starkiller, g)
}

pub fn is_super_starkiller(g: GameId) -> bool {
    holds(Predicate::SuperStarkiller, g)
}

/// Checks the outcome claim attached to the predicate directly: if `x`
/// satisfies it, Right wins `probe + x` moving first; if not and Left wins
/// `x` moving first, Left wins `probe + x` with Right moving first.
pub fn predicate_lemma_oracle(p: Predicate, x: GameId) -> Result<bool> {
    let winner = crate::augmented::aug_sum(p.probe(), x.into())
        .outcome()
        .right_start;
    if holds(p, x) {
        Ok(winner == Player::Right)
    } else if x.outcome().left_start == Player::Left {
        Ok(winner == Player::Left)
    } else {
        Err(Error::Precondition(format!(
            "{x} is not a {} and Right wins it moving second",
            p.name()
        )))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndSearch {
    Found(GameId),
    /// No Left end up to `bound` qualifies; `complete` when that covers
    /// every Left end of the universe.
    Exhausted {
        bound: u32,
        complete: bool,
    },
}

/// First Left end of the universe, up to `bound`, satisfying the predicate.
pub fn search_end_with(u: &Universe, p: Predicate, bound: u32) -> Result<EndSearch> {
    let ends = u.left_ends_up_to(bound);
    match ends.iter().copied().find(|&x| holds(p, x)) {
        Some(x) => {
            if !predicate_lemma_oracle(p, x)? {
                return Err(Error::Precondition(format!(
                    "lemma check failed for {} {x}",
                    p.name()
                )));
            }
            Ok(EndSearch::Found(x))
        }
        None => Ok(EndSearch::Exhausted {
            bound,
            complete: u.ends_complete(),
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Invertibility {
    Invertible {
        inverse: AugId,
    },
    /// Invertible if the bounded strong tests hold in general.
    BoundedInvertible {
        inverse: AugId,
        bound: u32,
    },
    /// `form + ~form` loses to the Left end `end`, where `form` is the
    /// simplest form or one of its subpositions.
    NotInvertible {
        form: AugId,
        end: GameId,
    },
    /// A subposition failed, but the simplest form was not certified.
    Inconclusive {
        form: AugId,
        mode: Mode,
    },
}

impl Invertibility {
    pub fn is_invertible(self) -> bool {
        matches!(self, Invertibility::Invertible { .. })
    }

    pub fn is_refuted(self) -> bool {
        matches!(self, Invertibility::NotInvertible { .. })
    }
}

/// Strong test of `form + ~form` for one subposition of the simplest form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvertCheck {
    pub form: AugId,
    pub strong: StrongVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvertVerdict {
    pub result: Invertibility,
    pub simplest: AugId,
    pub mode: Mode,
    /// Checks in the order they were made, the simplest form first.
    pub checks: Vec<InvertCheck>,
}

pub fn is_invertible(u: &Universe, a: AugId) -> Result<InvertVerdict> {
    let s = simplest_form(u, a)?;
    u.run(|m| {
        let mut checks = Vec::new();
        let mut memo = HashMap::new();
        let state = mirror(u, s.form, m, &mut checks, &mut memo)?;
        let inverse = aug_conjugate(a);
        let result = match state {
            Mirror::Holds(None) => Invertibility::Invertible { inverse },
            Mirror::Holds(Some(bound)) => Invertibility::BoundedInvertible { inverse, bound },
            Mirror::Fails { form, end } if form == s.form || s.trace.mode.is_exact() => {
                Invertibility::NotInvertible { form, end }
            }
            Mirror::Fails { form, .. } => Invertibility::Inconclusive {
                form,
                mode: s.trace.mode,
            },
        };
        Ok(InvertVerdict {
            result,
            simplest: s.form,
            mode: s.trace.mode,
            checks,
        })
    })
}

#[derive(Clone, Copy)]
enum Mirror {
    /// Every subposition passes; `Some(bound)` if some pass was bounded.
    Holds(Option<u32>),
    Fails {
        form: AugId,
        end: GameId,
    },
}

fn mirror(
    u: &Universe,
    s: AugId,
    m: &mut Meter,
    checks: &mut Vec<InvertCheck>,
    memo: &mut HashMap<AugId, Mirror>,
) -> Result<Mirror> {
    if let Some(&r) = memo.get(&s) {
        return Ok(r);
    }
    let doubled = m.sum(s, aug_conjugate(s))?;
    let strong = u.left_strong_in(doubled, m)?;
    checks.push(InvertCheck { form: s, strong });
    let mut state = match strong {
        StrongVerdict::ProvenNotStrong(end) => Mirror::Fails { form: s, end },
        StrongVerdict::BoundedStrong(b) => Mirror::Holds(Some(b)),
        StrongVerdict::ProvenStrong => Mirror::Holds(None),
    };
    if let Mirror::Holds(mut bounded) = state {
        for o in s.lefts().chain(s.rights()) {
            match mirror(u, o, m, checks, memo)? {
                f @ Mirror::Fails { .. } => {
                    state = f;
                    break;
                }
                Mirror::Holds(b) => bounded = bounded.or(b),
            }
        }
        if let Mirror::Holds(_) = state {
            state = Mirror::Holds(bounded);
        }
    }
    memo.insert(s, state);
    Ok(state)
}

/// Definitional search for an inverse among `candidates`: some `h` with
/// `g + h` proven equivalent to 0. Candidates are filtered by the outcome
/// of `g + h`, which must be `N` like the outcome of 0.
pub fn find_inverse(u: &Universe, g: AugId, candidates: &[GameId]) -> Result<Option<GameId>> {
    let zero = AugId::zero();
    let conj = aug_conjugate(g);
    let ordered = conj.as_game().into_iter().chain(candidates.iter().copied());
    for h in ordered {
        let s = crate::augmented::aug_sum(g, h.into());
        let o = s.outcome();
        if o.left_start != Player::Left || o.right_start != Player::Right {
            continue;
        }
        let forward = u.run(|m| geq_in(u, s, zero, m))?;
        if forward.is_true() && u.run(|m| geq_in(u, zero, s, m))?.is_true() {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// Checks that the sum of two invertible forms is invertible with the sum
/// of their conjugates as inverse.
pub fn group_closure_check(u: &Universe, g: AugId, h: AugId) -> Result<bool> {
    for x in [g, h] {
        let v = is_invertible(u, x)?;
        if !matches!(
            v.result,
            Invertibility::Invertible { .. } | Invertibility::BoundedInvertible { .. }
        ) {
            return Err(Error::Precondition(format!("{x} is not invertible")));
        }
    }
    let s = crate::augmented::aug_sum(g, h);
    let expected = crate::augmented::aug_sum(aug_conjugate(g), aug_conjugate(h));
    Ok(match is_invertible(u, s)?.result {
        Invertibility::Invertible { inverse }
        | Invertibility::BoundedInvertible { inverse, .. } => inverse == expected,
        _ => false,
    })
}

/// The 16 augmented forms with options among `{0}`.
pub fn day1_forms() -> Vec<AugId> {
    let zero = AugId::zero();
    let mut out = Vec::with_capacity(16);
    for bits in 0u8..16 {
        let lefts = if bits & 1 != 0 { vec![zero] } else { vec![] };
        let rights = if bits & 2 != 0 { vec![zero] } else { vec![] };
        out.push(mk_aug(lefts, rights, bits & 4 != 0, bits & 8 != 0));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusClass {
    /// Simplest form, oriented so that Left has at least as much as Right.
    pub representative: AugId,
    pub members: Vec<AugId>,
}

fn balance(a: AugId) -> i64 {
    let weight = |n: usize, t: bool| n as i64 + i64::from(t);
    weight(a.lefts().len(), a.left_tomb()) - weight(a.rights().len(), a.right_tomb())
}

/// The day-1 forms modulo equivalence in `u` and conjugation.
pub fn day1_census(u: &Universe) -> Result<Vec<CensusClass>> {
    let forms = day1_forms();
    let n = forms.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    let index: HashMap<AugId, usize> = forms.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    for i in 0..n {
        let c = index[&aug_conjugate(forms[i])];
        let (a, b) = (find(&mut parent, i), find(&mut parent, c));
        parent[a] = b;
        for j in i + 1..n {
            if equiv(u, forms[i], forms[j])?.is_true() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut classes: Vec<(usize, Vec<AugId>)> = Vec::new();
    for (i, &f) in forms.iter().enumerate() {
        let r = find(&mut parent, i);
        match classes.iter_mut().find(|(root, _)| *root == r) {
            Some((_, members)) => members.push(f),
            None => classes.push((r, vec![f])),
        }
    }
    let mut out = Vec::new();
    for (_, members) in classes {
        let mut candidates = Vec::new();
        for &f in &members {
            candidates.push(simplest_form(u, f)?.form);
        }
        candidates.sort_by_key(|&c| {
            (
                std::cmp::Reverse(balance(c).signum()),
                c.birthday(),
                c.to_string(),
            )
        });
        out.push(CensusClass {
            representative: candidates[0],
            members,
        });
    }
    out.sort_by_key(|c| {
        (
            c.representative.birthday(),
            c.representative.tombstone_count(),
            c.representative.to_string(),
        )
    });
    Ok(out)
}

/// Which augmented forms the caller asserts to lie in `Û`, or not.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UhatAssertions {
    pub present: Vec<AugId>,
    pub absent: Vec<AugId>,
}

impl UhatAssertions {
    /// `Some(true)` if asserted present, `Some(false)` if asserted absent.
    /// Assertions cover conjugates, since `Û` is closed under conjugation.
    pub fn status(&self, a: AugId) -> Option<bool> {
        let hit = |set: &[AugId]| set.iter().any(|&x| x == a || aug_conjugate(x) == a);
        if hit(&self.present) {
            Some(true)
        } else if hit(&self.absent) {
            Some(false)
        } else {
            None
        }
    }

    fn in_uhat(&self, u: &Universe, a: AugId) -> Option<bool> {
        if let Some(g) = a.as_game() {
            if u.member(g) {
                return Some(true);
            }
        }
        self.status(a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Day1Status {
    Invertible {
        inverse: AugId,
    },
    NotInvertible {
        end: GameId,
    },
    NotInUhat,
    /// Membership in `Û` was not asserted.
    UhatUnresolved,
    /// No qualifying Left end up to the bound, but the search is incomplete.
    SearchExhausted {
        bound: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Day1Item {
    pub form: AugId,
    pub status: Day1Status,
}

/// Invertibility of the five non-zero day-1 representatives.
pub fn day1_invertibles(u: &Universe, uhat: &UhatAssertions) -> Result<Vec<Day1Item>> {
    let mut out = Vec::new();
    for p in Predicate::ALL {
        let form = p.governed_form();
        let status = match uhat.in_uhat(u, form) {
            Some(false) => Day1Status::NotInUhat,
            None if p != Predicate::Starkiller => Day1Status::UhatUnresolved,
            _ => match search_end_with(u, p, u.bound())? {
                EndSearch::Found(end) => Day1Status::NotInvertible { end },
                EndSearch::Exhausted { complete: true, .. } => Day1Status::Invertible {
                    inverse: aug_conjugate(form),
                },
                EndSearch::Exhausted { bound, .. } => Day1Status::SearchExhausted { bound },
            },
        };
        out.push(Day1Item { form, status });
    }
    for form in [tomb_zero_left_end(), tomb_both()] {
        let status = match uhat.in_uhat(u, form) {
            Some(true) => Day1Status::Invertible {
                inverse: aug_conjugate(form),
            },
            Some(false) => Day1Status::NotInUhat,
            None => Day1Status::UhatUnresolved,
        };
        out.push(Day1Item { form, status });
    }
    Ok(out)
}

fn tomb_zero_left_end() -> AugId {
    mk_aug([AugId::zero()], [], true, false)
}

fn tomb_both() -> AugId {
    mk_aug([AugId::zero()], [AugId::zero()], true, true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Evidence {
    End(GameId),
    Asserted,
    /// The premise of the item does not hold.
    PremiseFalse,
    /// Implied because the universe is weak.
    Weakness,
    /// Every Left end of the universe was checked.
    NoEnd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnknownReason {
    UhatUnresolved,
    SearchExhausted(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ItemStatus {
    Satisfied(Evidence),
    Violated(Evidence),
    Unknown(UnknownReason),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Overall {
    Reduced,
    /// An invertible day-1 form exists.
    NotReduced(AugId),
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedReport {
    /// The five conditions, each paired with the day-1 form it concerns.
    pub items: Vec<(AugId, ItemStatus)>,
    pub overall: Overall,
    pub weak: bool,
    pub assumptions: UhatAssertions,
}

/// The universe is reduced iff 1, `*` and `{#,0|0}` each meet a governing
/// Left end (1 and `{#,0|0}` only when in `Û`), and `{#,0|.}` and
/// `{#,0|0,#}` are not in `Û`.
pub fn is_reduced(u: &Universe, uhat: &UhatAssertions) -> Result<ReducedReport> {
    let weak = u.known_weak();
    if weak {
        for f in [tomb_zero_left_end(), tomb_both()] {
            if uhat.status(f) == Some(true) {
                return Err(Error::ContradictoryAssertion(format!(
                    "{f} cannot lie in the tombstone extension of the weak universe {}",
                    u.spec()
                )));
            }
        }
    }
    let mut items = Vec::new();
    for p in Predicate::ALL {
        let form = p.governed_form();
        let premise = if p == Predicate::Starkiller {
            Some(true)
        } else {
            uhat.in_uhat(u, form)
        };
        let status = if premise == Some(false) {
            ItemStatus::Satisfied(Evidence::PremiseFalse)
        } else {
            match search_end_with(u, p, u.bound())? {
                EndSearch::Found(end) => ItemStatus::Satisfied(Evidence::End(end)),
                _ if weak => ItemStatus::Satisfied(Evidence::Weakness),
                EndSearch::Exhausted { complete: true, .. } if premise == Some(true) => {
                    ItemStatus::Violated(Evidence::NoEnd)
                }
                EndSearch::Exhausted { complete: true, .. } => {
                    ItemStatus::Unknown(UnknownReason::UhatUnresolved)
                }
                EndSearch::Exhausted { bound, .. } => {
                    ItemStatus::Unknown(UnknownReason::SearchExhausted(bound))
                }
            }
        };
        items.push((form, status));
    }
    for form in [tomb_zero_left_end(), tomb_both()] {
        let status = match uhat.status(form) {
            _ if weak => ItemStatus::Satisfied(Evidence::Weakness),
            Some(false) => ItemStatus::Satisfied(Evidence::Asserted),
            Some(true) => ItemStatus::Violated(Evidence::Asserted),
            None => ItemStatus::Unknown(UnknownReason::UhatUnresolved),
        };
        items.push((form, status));
    }
    let overall = if let Some(&(form, _)) = items
        .iter()
        .find(|(_, s)| matches!(s, ItemStatus::Violated(_)))
    {
        Overall::NotReduced(form)
    } else if weak
        || items
            .iter()
            .all(|(_, s)| matches!(s, ItemStatus::Satisfied(_)))
    {
        Overall::Reduced
    } else {
        Overall::Inconclusive
    };
    Ok(ReducedReport {
        items,
        overall,
        weak,
        assumptions: uhat.clone(),
    })
}

/// Whether `g + ~g` is equivalent to 0, as a three-valued verdict.
pub fn conjugate_sum_is_zero(u: &Universe, g: AugId) -> Result<TriVerdict> {
    equiv(
        u,
        crate::augmented::aug_sum(g, aug_conjugate(g)),
        AugId::zero(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{parse_aug, parse_game};

    fn g(s: &str) -> GameId {
        parse_game(s).unwrap()
    }

    #[test]
    fn predicate_table() {
        let rows = [
            ("{.|{*|0}}", [true, false, false]),
            ("~1", [false, true, false]),
            ("{.|{*|1}}", [true, true, true]),
        ];
        for (s, expected) in rows {
            let x = g(s);
            assert_eq!(
                [
                    is_disintegrator(x),
                    is_starkiller(x),
                    is_super_starkiller(x)
                ],
                expected,
                "{s}"
            );
        }
    }

    #[test]
    fn counterexample_end() {
        let ce = g("{.|{1|0,~1}+{~1,1|.}}");
        let twice = crate::games::sum(ce, ce);
        for p in Predicate::ALL {
            assert!(!holds(p, ce) && holds(p, twice), "{}", p.name());
        }
    }

    #[test]
    fn lemma_oracle_small() {
        for s in ["~1", "{.|{*|0}}", "{.|{*|1}}", "0", "{.|2}"] {
            for p in Predicate::ALL {
                assert!(predicate_lemma_oracle(p, g(s)).unwrap(), "{s} {}", p.name());
            }
        }
    }

    #[test]
    fn star_invertibility() {
        let d = Universe::dicot();
        let v = is_invertible(&d, g("*").into()).unwrap();
        assert_eq!(
            v.result,
            Invertibility::Invertible {
                inverse: g("*").into()
            }
        );
        let e = Universe::dead_ending();
        assert_eq!(
            search_end_with(&e, Predicate::Starkiller, 2).unwrap(),
            EndSearch::Found(g("~1"))
        );
        assert!(is_invertible(&e, g("*").into())
            .unwrap()
            .result
            .is_refuted());
    }

    #[test]
    fn zero_is_always_invertible() {
        for u in [
            Universe::dicot(),
            Universe::dead_ending(),
            Universe::full_misere(),
        ] {
            assert!(is_invertible(&u, AugId::zero())
                .unwrap()
                .result
                .is_invertible());
        }
    }

    #[test]
    fn census_has_six_classes() {
        let m = Universe::full_misere();
        let reps: Vec<String> = day1_census(&m)
            .unwrap()
            .iter()
            .map(|c| c.representative.to_string())
            .collect();
        let mut expected: Vec<String> = ["0", "1", "*", "{#,0|.}", "{#,0|0}", "{#,0|0,#}"]
            .iter()
            .map(|s| parse_aug(s).unwrap().to_string())
            .collect();
        let mut got = reps.clone();
        got.sort();
        expected.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn reduced_reports() {
        let cl2 = Universe::new(crate::universes::UniverseSpec::parse("cl({.|2})").unwrap());
        assert_eq!(
            is_reduced(&cl2, &UhatAssertions::default())
                .unwrap()
                .overall,
            Overall::Reduced
        );
        let d = Universe::dicot();
        assert_eq!(
            is_reduced(&d, &UhatAssertions::default()).unwrap().overall,
            Overall::NotReduced(g("*").into())
        );
        let bad = UhatAssertions {
            present: vec![parse_aug("{#,0|.}").unwrap()],
            absent: vec![],
        };
        assert!(matches!(
            is_reduced(&Universe::full_misere(), &bad),
            Err(Error::ContradictoryAssertion(_))
        ));
    }

    #[test]
    fn closure_under_sums() {
        let d = Universe::dicot();
        assert!(group_closure_check(&d, g("*").into(), g("*").into()).unwrap());
        assert!(group_closure_check(&d, AugId::zero(), AugId::zero()).unwrap());
    }
}
