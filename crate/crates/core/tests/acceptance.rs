//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use misere_core::enumerate::{dicots, plain_forms, DEFAULT_LEVEL_LIMIT};
use misere_core::invert::{
    day1_census, find_inverse, holds, is_invertible, is_reduced, predicate_lemma_oracle,
    search_end_with, EndSearch, Invertibility, Overall, Predicate, UhatAssertions,
};
use misere_core::order::{equiv, geq, oracle_geq, TriVerdict};
use misere_core::sample::{Sampler, Shape};
use misere_core::simplest::simplest_form;
use misere_core::{
    aug_conjugate, aug_sum, integer, mk_game, multiple, parse_aug, parse_game, sum, AugId, GameId,
    Outcome, OutcomePair, Player, Universe, UniverseSpec,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn g(s: &str) -> GameId {
    parse_game(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn a(s: &str) -> AugId {
    parse_aug(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Plain recursive search with no memo and no interning shortcuts.
fn slow_wins(g: GameId, mover: Player) -> bool {
    let opts: Vec<GameId> = match mover {
        Player::Left => g.lefts().collect(),
        Player::Right => g.rights().collect(),
    };
    opts.is_empty() || opts.into_iter().any(|o| !slow_wins(o, mover.opponent()))
}

fn slow_outcome(g: GameId) -> OutcomePair {
    let pick = |mover: Player| {
        if slow_wins(g, mover) {
            mover
        } else {
            mover.opponent()
        }
    };
    OutcomePair {
        left_start: pick(Player::Left),
        right_start: pick(Player::Right),
    }
}

fn outcome_engine() -> Check {
    let forms = plain_forms(3, DEFAULT_LEVEL_LIMIT);
    for &f in &forms {
        ensure(f.outcome() == slow_outcome(f), || {
            format!("{f}: {:?} vs {:?}", f.outcome(), slow_outcome(f))
        })?;
    }
    Ok(format!("{} forms born by day 3", forms.len()))
}

fn identities() -> Check {
    let lhs = sum(sum(GameId::star(), GameId::star()), g("~1"));
    ensure(lhs.outcome().left_start == Player::Right, || {
        "o^L(*+*+~1) is not R".into()
    })?;
    for (s, o) in [("0", Outcome::N), ("*", Outcome::P), ("1", Outcome::R)] {
        ensure(g(s).outcome().class() == o, || {
            format!("o({s}) = {:?}", g(s).outcome().class())
        })?;
    }
    let b = a("{#,0|0}");
    let sums = [
        (
            b,
            aug_conjugate(b),
            format!("{{{b},{}|{b},{}}}", aug_conjugate(b), aug_conjugate(b)),
        ),
        (
            a("{#,0|.}"),
            a("{.|0,#}"),
            "{#,{.|0,#}|{#,0|.},#}".to_string(),
        ),
        (
            a("{#,0|0,#}"),
            a("{#,0|0,#}"),
            "{#,{#,0|0,#}|{#,0|0,#},#}".to_string(),
        ),
    ];
    for (x, y, expected) in sums {
        let got = aug_sum(x, y);
        ensure(got == a(&expected), || {
            format!("{x} + {y} = {got}, expected {expected}")
        })?;
    }
    Ok("4 outcomes and 3 augmented sums".into())
}

fn j_grid() -> Check {
    let bar1 = g("~1");
    let w = g("{.|2}");
    let mut cells = 0;
    for n in 0..=4 {
        for m in 0..=4 {
            let x = sum(multiple(n, bar1), multiple(m, w));
            let expected = if n > m { Outcome::L } else { Outcome::N };
            ensure(x.outcome().class() == expected, || {
                format!("{n}*~1 + {m}*{{.|2}}: {:?}", x.outcome().class())
            })?;
            cells += 1;
        }
    }
    Ok(format!("{cells}/25 cells"))
}

fn predicate_table() -> Check {
    let rows = [
        ("{.|{*|0}}", [true, false, false]),
        ("~1", [false, true, false]),
        ("{.|{*|~1}}", [true, true, true]),
    ];
    let mut bad = Vec::new();
    for (s, expected) in rows {
        let x = g(s);
        let got = Predicate::ALL.map(|p| holds(p, x));
        if got != expected {
            bad.push(format!("{s}: got {got:?}, table says {expected:?}"));
        }
    }
    let ce = g("{.|{1|0,~1}+{~1,1|.}}");
    let twice = sum(ce, ce);
    for p in Predicate::ALL {
        ensure(!holds(p, ce) && holds(p, twice), || {
            format!("counterexample fails for {}", p.name())
        })?;
    }
    if bad.is_empty() {
        Ok("9 cells and the doubling counterexample".into())
    } else {
        Err(bad.join("; "))
    }
}

fn lemma_coherence() -> Check {
    let m = Universe::full_misere();
    let ends = m.left_ends_up_to(3);
    for &x in ends.iter() {
        for p in Predicate::ALL {
            let ok = predicate_lemma_oracle(p, x).map_err(|e| e.to_string())?;
            ensure(ok, || format!("{} lemma fails at {x}", p.name()))?;
        }
    }
    Ok(format!("{} Left ends x 3 predicates", ends.len()))
}

fn census() -> Check {
    let m = Universe::full_misere();
    let classes = day1_census(&m).map_err(|e| e.to_string())?;
    let mut got: Vec<AugId> = classes.iter().map(|c| c.representative).collect();
    let mut want: Vec<AugId> = ["0", "1", "*", "{#,0|.}", "{#,0|0}", "{#,0|0,#}"]
        .map(a)
        .to_vec();
    got.sort();
    want.sort();
    let total: usize = classes.iter().map(|c| c.members.len()).sum();
    ensure(total == 16, || format!("{total} forms"))?;
    ensure(got == want, || {
        format!(
            "representatives {}",
            got.iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        )
    })?;
    Ok("16 forms in 6 classes".into())
}

fn comparison_soundness() -> Check {
    let d = Universe::dicot();
    let small = dicots(2, DEFAULT_LEVEL_LIMIT);
    let domain = dicots(3, DEFAULT_LEVEL_LIMIT);
    let mut proven = 0;
    for &x in &small {
        for &y in &small {
            let v = geq(&d, x.into(), y.into()).map_err(|e| e.to_string())?;
            let truth = oracle_geq(&domain, x.into(), y.into());
            let agree = match v {
                TriVerdict::ProvenTrue => truth.holds(),
                TriVerdict::ProvenFalse(_) => !truth.holds(),
                TriVerdict::BoundedTrue(_) => continue,
            };
            ensure(agree, || {
                format!("geq({x}, {y}) = {v:?} but oracle says {truth:?}")
            })?;
            proven += 1;
        }
    }
    Ok(format!(
        "{proven} proven verdicts over {} pairs, domain {}",
        small.len() * small.len(),
        domain.len()
    ))
}

fn simplest_laws() -> Check {
    let mut checked = 0;
    for (u, shape) in [
        (Universe::dicot(), Shape::Dicot),
        (Universe::full_misere(), Shape::Augmented),
    ] {
        let mut s = Sampler::new(20_240_501);
        for _ in 0..500 {
            let f = s.form(shape, 3);
            let once = simplest_form(&u, f).map_err(|e| e.to_string())?;
            let twice = simplest_form(&u, once.form).map_err(|e| e.to_string())?;
            ensure(twice.form == once.form, || {
                format!("{}: {f} -> {} -> {}", u.spec(), once.form, twice.form)
            })?;
            let kept = equiv(&u, f, once.form).map_err(|e| e.to_string())?;
            ensure(!kept.is_false(), || {
                format!("{}: {f} not equivalent to {}", u.spec(), once.form)
            })?;
            checked += 1;
        }
    }
    let d = Universe::dicot();
    let small = dicots(2, DEFAULT_LEVEL_LIMIT);
    let mut pairs = 0;
    for (i, &x) in small.iter().enumerate() {
        for &y in &small[i + 1..] {
            if equiv(&d, x.into(), y.into())
                .map_err(|e| e.to_string())?
                .is_true()
            {
                let (sx, sy) = (simplest_form(&d, x.into()), simplest_form(&d, y.into()));
                let (sx, sy) = (
                    sx.map_err(|e| e.to_string())?.form,
                    sy.map_err(|e| e.to_string())?.form,
                );
                ensure(sx == sy, || format!("{x} and {y} reduce to {sx} and {sy}"))?;
                pairs += 1;
            }
        }
    }
    let mut s = Sampler::new(7);
    let mut reduced: Vec<(AugId, AugId)> = Vec::new();
    for _ in 0..300 {
        let x: AugId = s.dicot(3).into();
        let sx = simplest_form(&d, x).map_err(|e| e.to_string())?.form;
        for &(y, sy) in &reduced {
            if sx != sy && equiv(&d, x, y).map_err(|e| e.to_string())?.is_true() {
                return Err(format!("{x} and {y} are equivalent but reduce to {sx} and {sy}"));
            }
        }
        reduced.push((x, sx));
    }
    Ok(format!(
        "{checked} idempotence samples, {pairs} equivalent day-2 pairs, 300 sampled day-3 dicots"
    ))
}

fn invertibility() -> Check {
    let d = Universe::dicot();
    let star = is_invertible(&d, GameId::star().into()).map_err(|e| e.to_string())?;
    ensure(
        star.result
            == Invertibility::Invertible {
                inverse: GameId::star().into(),
            },
        || format!("* gives {:?}", star.result),
    )?;
    let mut invertible = 0;
    let small = dicots(2, DEFAULT_LEVEL_LIMIT);
    let pool = dicots(3, DEFAULT_LEVEL_LIMIT);
    for &x in &small {
        let v = is_invertible(&d, x.into())
            .map_err(|e| e.to_string())?
            .result;
        if v.is_invertible() {
            let zero = equiv(
                &d,
                aug_sum(x.into(), aug_conjugate(x.into())),
                AugId::zero(),
            )
            .map_err(|e| e.to_string())?;
            ensure(zero.is_true(), || format!("{x} + ~{x} is not 0"))?;
            invertible += 1;
        } else {
            ensure(v.is_refuted(), || format!("{x}: {v:?}"))?;
        }
        let candidates: Vec<GameId> = pool
            .iter()
            .copied()
            .filter(|c| c.birthday() <= x.birthday() + 1)
            .collect();
        let found = find_inverse(&d, x.into(), &candidates).map_err(|e| e.to_string())?;
        ensure(found.is_some() == v.is_invertible(), || {
            format!("{x}: characterisation {v:?}, search {found:?}")
        })?;
    }
    Ok(format!("{invertible} of {} dicots invertible", small.len()))
}

fn weakness() -> Check {
    let cl2 = Universe::new(UniverseSpec::parse("cl({.|2})").map_err(|e| e.to_string())?);
    let w = g("{.|2}");
    let mut s = Sampler::new(5);
    for _ in 0..100 {
        let x = s.non_left_end(3);
        let b = x.birthday() as usize;
        let probe = sum(x, multiple(b, w));
        ensure(probe.outcome().left_start == Player::Right, || {
            format!("{x} + {b}x{{.|2}}")
        })?;
    }
    let mut s = Sampler::new(6);
    let mut sampled = 0;
    while sampled < 100 {
        let x = s.form(Shape::Augmented, 3);
        if x.is_left_end_like() {
            continue;
        }
        let b = i64::from(x.birthday());
        let witness = mk_game([], [integer(b).map_err(|e| e.to_string())?]);
        ensure(
            aug_sum(x, witness.into()).outcome().left_start == Player::Right,
            || format!("{x} + {witness}"),
        )?;
        sampled += 1;
    }
    let none = UhatAssertions::default();
    let r = is_reduced(&cl2, &none).map_err(|e| e.to_string())?;
    ensure(r.overall == Overall::Reduced, || {
        format!("cl({{.|2}}): {:?}", r.overall)
    })?;
    let r = is_reduced(&Universe::dicot(), &none).map_err(|e| e.to_string())?;
    ensure(
        r.overall == Overall::NotReduced(GameId::star().into()),
        || format!("D: {:?}", r.overall),
    )?;
    Ok("100 samples in each universe, both reports".into())
}

fn dead_ending() -> Check {
    let e = Universe::dead_ending();
    let x = aug_sum(g("1").into(), g("~1").into());
    let v = equiv(&e, x, AugId::zero()).map_err(|e| e.to_string())?;
    ensure(v == TriVerdict::BoundedTrue(3), || {
        format!("1+~1 vs 0: {v:?}")
    })?;
    let found = search_end_with(&e, Predicate::Starkiller, e.bound()).map_err(|e| e.to_string())?;
    ensure(found == EndSearch::Found(g("~1")), || {
        format!("starkiller search: {found:?}")
    })?;
    let inv = is_invertible(&e, GameId::star().into())
        .map_err(|e| e.to_string())?
        .result;
    ensure(
        matches!(inv, Invertibility::NotInvertible { end, .. } if end == g("~1")),
        || format!("*: {inv:?}"),
    )?;
    Ok("bounded equivalence and starkiller ~1".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("outcome engine against plain search", outcome_engine),
        ("stated identities", identities),
        ("J monoid grid", j_grid),
        ("predicate table", predicate_table),
        ("predicate lemmas on Left ends", lemma_coherence),
        ("day-1 census", census),
        ("comparison soundness", comparison_soundness),
        ("simplest form laws", simplest_laws),
        ("invertibility", invertibility),
        ("weakness certificates", weakness),
        ("dead-ending facts", dead_ending),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
