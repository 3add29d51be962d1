use misere_core::invert::{
    day1_census, holds, is_invertible, is_reduced, predicate_lemma_oracle, Evidence, InvertCheck,
    Invertibility, ItemStatus, Overall, Predicate, UhatAssertions, UnknownReason,
};
use misere_core::notation::UniverseText;
use misere_core::order::{geq, oracle_geq, Condition, Failure, OracleVerdict, TriVerdict};
use misere_core::persist;
use misere_core::sample::{Sampler, Shape};
use misere_core::simplest::{Action, Mode};
use misere_core::{
    aug_sum, integer, mk_game, multiple, parse_aug, parse_form, parse_game, parse_universe, print,
    print_game, sum, AugId, Error, Form, GameId, OutcomePair, ParseError, Player, StrongVerdict,
    Universe, UniverseSpec, WeakCertificate,
};
use serde_json::{json, Value};

use crate::report::Report;
use crate::{Cli, Command, EXIT_BUDGET, EXIT_USAGE};

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn parse_err(what: &str, text: &str, e: ParseError) -> CliError {
    usage(format!("cannot parse {what} {text:?}: {e}"))
}

fn aug(text: &str) -> Result<AugId, CliError> {
    parse_aug(text).map_err(|e| parse_err("form", text, e))
}

fn game(text: &str) -> Result<GameId, CliError> {
    match parse_form(text).map_err(|e| parse_err("form", text, e))? {
        Form::Game(g) => Ok(g),
        Form::Aug(_) => Err(usage(format!(
            "{text:?} has tombstones; a plain form is needed here"
        ))),
    }
}

struct Session<'a> {
    cli: &'a Cli,
    universe: Universe,
}

impl<'a> Session<'a> {
    fn open(cli: &'a Cli, text: &str) -> Result<Session<'a>, CliError> {
        let spec = UniverseSpec::parse(text)
            .map_err(|e| parse_err("universe", text, e))?
            .with_bound(cli.bound)
            .with_budget(cli.budget);
        let universe = Universe::new(spec).assume_bounded(cli.assume_bounded);
        if let Some(dir) = &cli.cache_dir {
            if let Err(e) = persist::load(&universe, &persist::cache_path(dir, &universe)) {
                eprintln!("warning: ignoring cache: {e}");
            }
        }
        Ok(Session { cli, universe })
    }

    fn report(&self, command: &str) -> Report {
        Report::new(command, Some(self.universe.spec().fingerprint()))
    }

    fn close(self, mut report: Report) -> Report {
        report.budget_used = self.universe.work_done();
        if let Some(dir) = &self.cli.cache_dir {
            if let Err(e) = persist::save(&self.universe, &persist::cache_path(dir, &self.universe))
            {
                eprintln!("warning: cannot write cache: {e}");
            }
        }
        report
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Outcome { expr } => outcome(expr),
        Command::Compare { universe, a, b } => compare(cli, universe, a, b),
        Command::Simplify { universe, expr } => simplify(cli, universe, expr),
        Command::Invertible {
            universe,
            expr,
            present,
            absent,
        } => invertible(cli, universe, expr, present, absent),
        Command::Predicates { expr } => predicates(expr),
        Command::Census { universe } => census(cli, universe),
        Command::Probe {
            universe,
            present,
            absent,
        } => probe(cli, universe, present, absent),
        Command::OracleCompare { set, a, b } => oracle_compare(cli, set, a, b),
        Command::Jtable { n, m } => jtable(*n, *m),
        Command::Selftest { samples } => selftest(cli, *samples),
    }
}

fn letter(p: Player) -> &'static str {
    match p {
        Player::Left => "L",
        Player::Right => "R",
    }
}

fn outcome_json(o: OutcomePair) -> Value {
    json!({ "left_start": letter(o.left_start), "right_start": letter(o.right_start), "class": o.class().to_string() })
}

fn outcome(expr: &str) -> Result<Report, CliError> {
    let a = aug(expr)?;
    let o = a.outcome();
    let mut r = Report::new("outcome", None);
    r.line(format!("form: {}", print(a)));
    r.line(format!("o^L = {}", letter(o.left_start)));
    r.line(format!("o^R = {}", letter(o.right_start)));
    r.line(format!("outcome: {}", o.class()));
    r.verdict = outcome_json(o);
    Ok(r)
}

fn condition_name(c: Condition) -> &'static str {
    match c {
        Condition::A => "a",
        Condition::B => "b",
        Condition::C => "c",
        Condition::D => "d",
    }
}

fn failure_json(f: Failure) -> Value {
    json!({
        "condition": condition_name(f.condition),
        "option": f.option.map(print),
        "end": f.end.map(print_game),
    })
}

fn failure_text(f: Failure) -> String {
    let mut s = format!("condition ({}) fails", condition_name(f.condition));
    if let Some(o) = f.option {
        s += &format!(" at option {}", print(o));
    }
    if let Some(x) = f.end {
        s += &format!(" against Left end {}", print_game(x));
    }
    s
}

fn tri_text(v: TriVerdict) -> String {
    match v {
        TriVerdict::ProvenTrue => "proven".into(),
        TriVerdict::ProvenFalse(f) => format!("refuted, {}", failure_text(f)),
        TriVerdict::BoundedTrue(b) => format!("holds for Left ends up to birthday {b}"),
    }
}

fn relation(forward: bool, backward: bool) -> &'static str {
    match (forward, backward) {
        (true, true) => "≡",
        (true, false) => "≥",
        (false, true) => "≤",
        (false, false) => "incomparable",
    }
}

fn compare(cli: &Cli, universe: &str, a: &str, b: &str) -> Result<Report, CliError> {
    let s = Session::open(cli, universe)?;
    let (g, h) = (aug(a)?, aug(b)?);
    let forward = geq(&s.universe, g, h)?;
    let backward = geq(&s.universe, h, g)?;
    let mut r = s.report("compare");
    for v in [forward, backward] {
        if let TriVerdict::BoundedTrue(bound) = v {
            r.bounded(bound);
        }
    }
    let rel = relation(forward.is_true(), backward.is_true());
    let how = if r.bound.is_some() {
        "bounded"
    } else {
        "proven"
    };
    r.line(format!("{} {rel} {}", print(g), print(h)));
    r.line(format!("relation: {rel} ({how})"));
    r.line(format!("G >= H: {}", tri_text(forward)));
    r.line(format!("H >= G: {}", tri_text(backward)));
    r.verdict = json!({ "relation": rel, "geq": tri_json(forward), "leq": tri_json(backward) });
    let witnesses: Vec<Value> = [forward, backward]
        .iter()
        .filter_map(|v| v.failure())
        .map(failure_json)
        .collect();
    if !witnesses.is_empty() {
        r.witness = Some(Value::Array(witnesses));
    }
    Ok(s.close(r))
}

fn tri_json(v: TriVerdict) -> Value {
    match v {
        TriVerdict::ProvenTrue => json!("proven-true"),
        TriVerdict::ProvenFalse(_) => json!("proven-false"),
        TriVerdict::BoundedTrue(b) => json!({ "bounded-true": b }),
    }
}

fn action_text(a: Action) -> (String, Value) {
    let side = |p: Player| if p == Player::Left { "left" } else { "right" };
    match a {
        Action::RemoveDominated {
            side: p,
            option,
            by,
        } => (
            format!(
                "remove {} option {} (dominated by {})",
                side(p),
                print(option),
                print(by)
            ),
            json!({ "kind": "remove-dominated", "side": side(p), "option": print(option), "by": print(by) }),
        ),
        Action::Bypass {
            side: p,
            option,
            target,
        } => (
            format!(
                "bypass {} option {} through {}",
                side(p),
                print(option),
                print(target)
            ),
            json!({ "kind": "bypass", "side": side(p), "option": print(option), "target": print(target) }),
        ),
        Action::EndReverse {
            side: p,
            option,
            target,
        } => (
            format!(
                "end-reverse {} option {} through {}",
                side(p),
                print(option),
                print(target)
            ),
            json!({ "kind": "end-reverse", "side": side(p), "option": print(option), "target": print(target) }),
        ),
        Action::DropTombstone { side: p } => (
            format!("drop {} tombstone", side(p)),
            json!({ "kind": "drop-tombstone", "side": side(p) }),
        ),
    }
}

fn apply_mode(r: &mut Report, mode: Mode) {
    match mode {
        Mode::Exact => {}
        Mode::BoundedAssumed(b) => {
            r.bounded(b);
            r.mode = format!("bounded-assumed({b})");
        }
        Mode::Partial(b) => {
            r.bounded(b);
            r.mode = format!("partial({b})");
        }
    }
}

fn simplify(cli: &Cli, universe: &str, expr: &str) -> Result<Report, CliError> {
    let s = Session::open(cli, universe)?;
    let a = aug(expr)?;
    let out = misere_core::simplest_form(&s.universe, a)?;
    let mut r = s.report("simplify");
    r.line(format!("input: {}", print(a)));
    r.line(format!("simplest: {}", print(out.form)));
    let mut trace = Vec::new();
    for step in &out.trace.steps {
        let (text, mut v) = action_text(step.action);
        r.line(format!(
            "  {}: {text} -> {}",
            print(step.before),
            print(step.after)
        ));
        v["before"] = json!(print(step.before));
        v["after"] = json!(print(step.after));
        trace.push(v);
    }
    apply_mode(&mut r, out.trace.mode);
    if out.trace.mode != Mode::Exact && !cli.assume_bounded {
        r.line("some reductions need bounded evidence; rerun with --assume-bounded to apply them");
    }
    r.verdict = json!({ "simplest": print(out.form), "steps": out.trace.steps.len() });
    r.trace = Some(trace);
    Ok(s.close(r))
}

fn assertions(present: &[String], absent: &[String]) -> Result<UhatAssertions, CliError> {
    Ok(UhatAssertions {
        present: present.iter().map(|t| aug(t)).collect::<Result<_, _>>()?,
        absent: absent.iter().map(|t| aug(t)).collect::<Result<_, _>>()?,
    })
}

fn assertions_json(u: &UhatAssertions) -> Option<Value> {
    if u.present.is_empty() && u.absent.is_empty() {
        return None;
    }
    let list = |v: &[AugId]| v.iter().map(|&a| print(a)).collect::<Vec<_>>();
    Some(json!({ "in_uhat": list(&u.present), "not_in_uhat": list(&u.absent) }))
}

fn strong_json(v: StrongVerdict) -> Value {
    match v {
        StrongVerdict::ProvenStrong => json!("proven-strong"),
        StrongVerdict::ProvenNotStrong(x) => json!({ "not-strong": print_game(x) }),
        StrongVerdict::BoundedStrong(b) => json!({ "bounded-strong": b }),
    }
}

fn invertible(
    cli: &Cli,
    universe: &str,
    expr: &str,
    present: &[String],
    absent: &[String],
) -> Result<Report, CliError> {
    let s = Session::open(cli, universe)?;
    let a = aug(expr)?;
    let uhat = assertions(present, absent)?;
    let mut r = s.report("invertible");
    r.assumptions = assertions_json(&uhat);
    r.line(format!("form: {}", print(a)));
    if uhat.status(a) == Some(false) {
        r.line("verdict: not in the tombstone extension (asserted), so not an element to invert");
        r.verdict = json!("not-in-uhat");
        return Ok(s.close(r));
    }
    match a.as_game() {
        Some(g) if !s.universe.member(g) => {
            r.line("note: the form is not a member of the universe")
        }
        None if uhat.status(a).is_none() => {
            r.line("note: membership in the tombstone extension is assumed, not asserted")
        }
        _ => {}
    }
    let v = is_invertible(&s.universe, a)?;
    r.line(format!("simplest form: {}", print(v.simplest)));
    apply_mode(&mut r, v.mode);
    match v.result {
        Invertibility::Invertible { inverse } => {
            r.line(format!("verdict: invertible, inverse {}", print(inverse)));
            r.verdict = json!("invertible");
            r.witness = Some(json!({ "inverse": print(inverse) }));
        }
        Invertibility::BoundedInvertible { inverse, bound } => {
            r.bounded(bound);
            r.line(format!(
                "verdict: invertible if the bounded strength tests hold, inverse {}",
                print(inverse)
            ));
            r.verdict = json!("bounded-invertible");
            r.witness = Some(json!({ "inverse": print(inverse) }));
        }
        Invertibility::NotInvertible { form, end } => {
            r.line(format!(
                "verdict: not invertible; Left loses {} + ~({}) + {} moving first",
                print(form),
                print(form),
                print_game(end)
            ));
            r.verdict = json!("not-invertible");
            r.witness = Some(json!({ "form": print(form), "end": print_game(end) }));
        }
        Invertibility::Inconclusive { form, mode } => {
            r.inconclusive();
            r.line(format!(
                "verdict: inconclusive; subposition {} fails but the simplest form is {mode:?}",
                print(form)
            ));
            r.verdict = json!("inconclusive");
        }
    }
    let checks: Vec<Value> = v
        .checks
        .iter()
        .map(|InvertCheck { form, strong }| json!({ "form": print(*form), "doubled_strong": strong_json(*strong) }))
        .collect();
    r.trace = Some(checks);
    Ok(s.close(r))
}

fn predicates(expr: &str) -> Result<Report, CliError> {
    let g = game(expr)?;
    let mut r = Report::new("predicates", None);
    r.line(format!("form: {}", print_game(g)));
    if !g.is_left_end() {
        r.line("note: not a Left end");
    }
    let mut verdict = serde_json::Map::new();
    for p in Predicate::ALL {
        let v = holds(p, g);
        r.line(format!("{}: {}", p.name(), if v { "yes" } else { "no" }));
        verdict.insert(p.name().replace(' ', "_"), json!(v));
    }
    r.verdict = Value::Object(verdict);
    Ok(r)
}

fn census(cli: &Cli, universe: &str) -> Result<Report, CliError> {
    let s = Session::open(cli, universe)?;
    let classes = day1_census(&s.universe)?;
    let mut r = s.report("census");
    r.line(format!("{} classes", classes.len()));
    let mut out = Vec::new();
    for c in &classes {
        let members: Vec<String> = c.members.iter().map(|&m| print(m)).collect();
        r.line(format!(
            "{}: {}",
            print(c.representative),
            members.join(" ")
        ));
        out.push(json!({ "representative": print(c.representative), "members": members }));
    }
    r.verdict = json!({ "classes": out });
    Ok(s.close(r))
}

fn item_text(status: ItemStatus) -> (String, Value) {
    let evidence = |e: Evidence| match e {
        Evidence::End(x) => format!("Left end {}", print_game(x)),
        Evidence::Asserted => "assertion".into(),
        Evidence::PremiseFalse => "premise false".into(),
        Evidence::Weakness => "weak universe".into(),
        Evidence::NoEnd => "no qualifying Left end exists".into(),
    };
    match status {
        ItemStatus::Satisfied(e) => (
            format!("satisfied ({})", evidence(e)),
            json!({ "satisfied": evidence(e) }),
        ),
        ItemStatus::Violated(e) => (
            format!("violated ({})", evidence(e)),
            json!({ "violated": evidence(e) }),
        ),
        ItemStatus::Unknown(UnknownReason::UhatUnresolved) => (
            "unknown (membership not asserted)".into(),
            json!({ "unknown": "uhat-unresolved" }),
        ),
        ItemStatus::Unknown(UnknownReason::SearchExhausted(b)) => (
            format!("unknown (no Left end up to birthday {b})"),
            json!({ "unknown": format!("search-exhausted({b})") }),
        ),
    }
}

fn probe(
    cli: &Cli,
    universe: &str,
    present: &[String],
    absent: &[String],
) -> Result<Report, CliError> {
    let s = Session::open(cli, universe)?;
    let uhat = assertions(present, absent)?;
    let weak = s.universe.is_weak()?;
    let reduced = is_reduced(&s.universe, &uhat)?;
    let mut r = s.report("probe");
    r.assumptions = assertions_json(&uhat);
    let (weak_text, weak_json) = match &weak {
        WeakCertificate::WeakeningEnd(x) => (
            format!("yes (weakening end {})", print_game(*x)),
            json!({ "weak": true, "weakening_end": print_game(*x) }),
        ),
        WeakCertificate::FullMisereRule => ("yes (full misère)".into(), json!({ "weak": true })),
        WeakCertificate::NotWeak(w) => (
            format!("no ({} is Left strong but not Left end-like)", print(*w)),
            json!({ "weak": false, "witness": print(*w) }),
        ),
        WeakCertificate::Unknown { bound, candidate } => {
            r.bounded(*bound);
            let c = candidate.map(print);
            let text = match &c {
                Some(c) => format!("unknown ({c} is Left strong up to birthday {bound})"),
                None => format!("unknown (nothing decisive up to birthday {bound})"),
            };
            (text, json!({ "weak": null, "candidate": c }))
        }
    };
    r.line(format!("weak: {weak_text}"));
    let overall = match reduced.overall {
        Overall::Reduced => json!("reduced"),
        Overall::NotReduced(w) => {
            r.witness = Some(json!({ "invertible": print(w) }));
            json!("not-reduced")
        }
        Overall::Inconclusive => {
            r.inconclusive();
            json!("inconclusive")
        }
    };
    r.line(match reduced.overall {
        Overall::Reduced => "reduced: yes".to_string(),
        Overall::NotReduced(w) => format!("reduced: no ({} is invertible)", print(w)),
        Overall::Inconclusive => "reduced: inconclusive".to_string(),
    });
    let mut items = Vec::new();
    for (form, status) in &reduced.items {
        let (text, v) = item_text(*status);
        r.line(format!("  {}: {text}", print(*form)));
        items.push(json!({ "form": print(*form), "status": v }));
    }
    r.verdict = json!({ "weak": weak_json, "reduced": overall, "items": items });
    Ok(s.close(r))
}

/// Sums of at most `count` generators, with repetition.
fn monoid_words(generators: &[GameId], count: u32) -> Vec<GameId> {
    let mut words = vec![GameId::zero()];
    let mut frontier = vec![GameId::zero()];
    for _ in 0..count {
        let mut next = Vec::new();
        for &w in &frontier {
            for &g in generators {
                let s = sum(w, g);
                if !words.contains(&s) {
                    words.push(s);
                    next.push(s);
                }
            }
        }
        frontier = next;
    }
    words
}

fn oracle_compare(cli: &Cli, set: &str, a: &str, b: &str) -> Result<Report, CliError> {
    let (g, h) = (aug(a)?, aug(b)?);
    let text = parse_universe(set).map_err(|e| parse_err("set", set, e))?;
    let (domain, label, what) = match text {
        UniverseText::Monoid(generators) => {
            let label = format!(
                "mon({})",
                generators
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(";")
            );
            (
                monoid_words(&generators, cli.bound),
                label,
                format!("sums of at most {} generators", cli.bound),
            )
        }
        _ => {
            let s = Session::open(cli, set)?;
            let members = s.universe.members_up_to(cli.bound).to_vec();
            (
                members,
                s.universe.spec().to_string(),
                format!("members born by day {}", cli.bound),
            )
        }
    };
    let forward = oracle_geq(&domain, g, h);
    let backward = oracle_geq(&domain, h, g);
    let mut r = Report::new("oracle-compare", Some(label));
    r.line(format!("domain: {} ({} games)", what, domain.len()));
    let rel = relation(forward.holds(), backward.holds());
    r.line(format!("relation: {rel}"));
    let mut witnesses = Vec::new();
    for (name, v) in [("G >= H", forward), ("H >= G", backward)] {
        match v {
            OracleVerdict::Holds { checked } => {
                r.line(format!("{name}: holds on all {checked} games checked"))
            }
            OracleVerdict::Fails(x) => {
                r.line(format!("{name}: fails at X = {}", print_game(x)));
                witnesses.push(json!({ "direction": name, "x": print_game(x) }));
            }
        }
    }
    if forward.holds() || backward.holds() {
        r.bounded(cli.bound);
    }
    r.verdict = json!({ "relation": rel, "domain_size": domain.len() });
    if !witnesses.is_empty() {
        r.witness = Some(Value::Array(witnesses));
    }
    Ok(r)
}

fn jtable(n_max: usize, m_max: usize) -> Result<Report, CliError> {
    let bar1 = integer(-1)?;
    let weak_end = mk_game([], [integer(2)?]);
    let mut r = Report::new("jtable", Some("mon(~1;{.|2})".into()));
    r.line(format!(
        "rows n copies of ~1, columns m copies of {{.|2}}, m = 0..{m_max}"
    ));
    let mut grid = Vec::new();
    let mut matches = true;
    for n in 0..=n_max {
        let mut row = Vec::new();
        for m in 0..=m_max {
            let o = sum(multiple(n, bar1), multiple(m, weak_end))
                .outcome()
                .class()
                .to_string();
            let expected = if n > m { "L" } else { "N" };
            matches &= o == expected;
            row.push(o);
        }
        r.line(format!("n={n}: {}", row.join(" ")));
        grid.push(row);
    }
    r.line(format!(
        "matches \"L iff n > m, else N\": {}",
        if matches { "yes" } else { "no" }
    ));
    r.verdict = json!({ "grid": grid, "matches_formula": matches });
    Ok(r)
}

fn selftest(cli: &Cli, samples: usize) -> Result<Report, CliError> {
    let mut sampler = Sampler::new(cli.seed);
    let mut r = Report::new("selftest", None);
    let mut failures: Vec<String> = Vec::new();
    let mut counts = serde_json::Map::new();

    for _ in 0..samples {
        let a = sampler.form(Shape::Augmented, 4);
        if parse_aug(&print(a)).ok() != Some(a) {
            failures.push(format!("round trip: {}", print(a)));
        }
    }
    counts.insert("round_trip".into(), json!(samples));

    for text in ["D", "M"] {
        let s = Session::open(cli, text)?;
        let shape = if text == "D" {
            Shape::Dicot
        } else {
            Shape::Augmented
        };
        for _ in 0..samples {
            let a = sampler.form(shape, 3);
            let once = misere_core::simplest_form(&s.universe, a)?.form;
            if misere_core::simplest_form(&s.universe, once)?.form != once {
                failures.push(format!("idempotence in {text}: {}", print(a)));
            }
        }
        r.budget_used += s.universe.work_done();
        s.close(Report::new("selftest", None));
        counts.insert(format!("idempotence_{text}"), json!(samples));
    }

    let weak_end = parse_game("{.|2}").expect("literal");
    for _ in 0..samples {
        let x = sampler.non_left_end(3);
        let b = x.birthday() as usize;
        if sum(x, multiple(b, weak_end)).outcome().left_start != Player::Right {
            failures.push(format!("weak witness: {}", print_game(x)));
        }
        let m_witness = mk_game([], [integer(b as i64)?]);
        if aug_sum(x.into(), m_witness.into()).outcome().left_start != Player::Right {
            failures.push(format!("full misère witness: {}", print_game(x)));
        }
    }
    counts.insert("weak_witnesses".into(), json!(samples));

    let mut ends = 0;
    while ends < samples {
        let x = sampler.game(3);
        if !x.is_left_end() {
            continue;
        }
        for p in Predicate::ALL {
            if !predicate_lemma_oracle(p, x)? {
                failures.push(format!("{} lemma: {}", p.name(), print_game(x)));
            }
        }
        ends += 1;
    }
    counts.insert("predicate_lemmas".into(), json!(samples));

    r.line(format!("seed {}: {} samples per check", cli.seed, samples));
    for f in &failures {
        r.line(format!("FAIL {f}"));
    }
    r.line(if failures.is_empty() {
        "all checks passed".to_string()
    } else {
        format!("{} failures", failures.len())
    });
    r.verdict = json!({ "seed": cli.seed, "checks": counts, "failures": failures });
    if failures.is_empty() {
        Ok(r)
    } else {
        Err(CliError {
            code: 1,
            message: format!(
                "{} selftest failures: {}",
                failures.len(),
                failures.join("; ")
            ),
        })
    }
}
