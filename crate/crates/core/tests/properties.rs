use misere_core::enumerate::{dicots, DEFAULT_LEVEL_LIMIT};
use misere_core::invert::{holds, is_disintegrator, is_starkiller, is_super_starkiller, Predicate};
use misere_core::order::{geq, maintenance_holds, oracle_geq, proviso_holds_on, TriVerdict};
use misere_core::sample::{Sampler, Shape};
use misere_core::*;
use proptest::prelude::*;

fn form(seed: u64, shape: Shape, birthday: u32) -> AugId {
    Sampler::new(seed).form(shape, birthday)
}

fn game(seed: u64, birthday: u32) -> GameId {
    Sampler::new(seed).game(birthday)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let a = form(seed, Shape::Augmented, 4);
        prop_assert_eq!(parse_aug(&print(a)).unwrap(), a);
        let g = game(seed, 4);
        prop_assert_eq!(parse_game(&print_game(g)).unwrap(), g);
    }

    #[test]
    fn sums_commute_and_associate(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let (g, h, k) = (game(s1, 2), game(s2, 2), game(s3, 1));
        prop_assert_eq!(sum(g, h), sum(h, g));
        prop_assert_eq!(sum(g, sum(h, k)), sum(sum(g, h), k));
        prop_assert_eq!(sum(GameId::zero(), g), g);
    }

    #[test]
    fn conjugation_laws(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (g, h) = (game(s1, 3), game(s2, 2));
        prop_assert_eq!(conjugate(conjugate(g)), g);
        prop_assert_eq!(conjugate(sum(g, h)), sum(conjugate(g), conjugate(h)));
        let (o, c) = (outcome(g), outcome(conjugate(g)));
        prop_assert_eq!(c.left_start, o.right_start.opponent());
        prop_assert_eq!(c.right_start, o.left_start.opponent());
        let (a, b) = (form(s1, Shape::Augmented, 2), form(s2, Shape::Augmented, 2));
        prop_assert_eq!(aug_conjugate(aug_sum(a, b)), aug_sum(aug_conjugate(a), aug_conjugate(b)));
    }

    #[test]
    fn augmented_sums(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (a, b) = (form(s1, Shape::Augmented, 2), form(s2, Shape::Augmented, 2));
        let s = aug_sum(a, b);
        prop_assert_eq!(s.is_left_end_like(), a.is_left_end_like() && b.is_left_end_like());
        prop_assert_eq!(s.is_right_end_like(), a.is_right_end_like() && b.is_right_end_like());
        let (g, h) = (game(s1, 2), game(s2, 2));
        prop_assert_eq!(aug_sum(g.into(), h.into()), AugId::from(sum(g, h)));
        prop_assert_eq!(aug_outcome(g.into()), outcome(g));
    }

    #[test]
    fn left_ends_add_to_left_ends(s1 in any::<u64>(), s2 in any::<u64>()) {
        let mut s = Sampler::new(s1 ^ s2);
        let ends: Vec<GameId> = (0..40).map(|_| s.game(3)).filter(|g| g.is_left_end()).take(2).collect();
        if let [x, y] = ends[..] {
            prop_assert!(sum(x, y).is_left_end());
            if x.classify().is_dead_left_end && y.classify().is_dead_left_end {
                prop_assert!(sum(x, y).classify().is_dead_left_end);
            }
        }
    }

    #[test]
    fn comparison_is_antitone_under_conjugation(s1 in any::<u64>(), s2 in any::<u64>()) {
        let u = Universe::full_misere();
        let (g, h) = (form(s1, Shape::Augmented, 2), form(s2, Shape::Augmented, 2));
        let forward = geq(&u, g, h).unwrap();
        let mirrored = geq(&u, aug_conjugate(h), aug_conjugate(g)).unwrap();
        prop_assert_eq!(forward.is_true(), mirrored.is_true());
        prop_assert_eq!(geq(&u, g, g).unwrap(), TriVerdict::ProvenTrue);
    }

    #[test]
    fn weak_universes_agree(s1 in any::<u64>(), s2 in any::<u64>()) {
        let m = Universe::full_misere();
        let cl2 = Universe::new(UniverseSpec::parse("cl({.|2})").unwrap());
        let (g, h) = (form(s1, Shape::Augmented, 2), form(s2, Shape::Augmented, 2));
        let (a, b) = (geq(&m, g, h).unwrap(), geq(&cl2, g, h).unwrap());
        prop_assert!(a.is_true() == b.is_true() && a.is_false() == b.is_false());
    }

    #[test]
    fn dicot_sums_are_monotone(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let d = Universe::dicot();
        let mut s = Sampler::new(s1 ^ s2.rotate_left(7) ^ s3.rotate_left(19));
        let (g, h, j) = (s.dicot(2), s.dicot(2), s.dicot(1));
        if geq(&d, g.into(), h.into()).unwrap().is_true() {
            prop_assert!(geq(&d, sum(g, j).into(), sum(h, j).into()).unwrap().is_true());
        }
    }

    #[test]
    fn simplest_form_is_stable(seed in any::<u64>()) {
        for (u, shape) in [(Universe::dicot(), Shape::Dicot), (Universe::full_misere(), Shape::Augmented)] {
            let a = form(seed, shape, 3);
            let s = simplest_form(&u, a).unwrap();
            prop_assert_eq!(s.trace.replay(a), s.form);
            prop_assert_eq!(simplest_form(&u, s.form).unwrap().form, s.form);
            prop_assert!(!equiv(&u, a, s.form).unwrap().is_false());
        }
    }

    #[test]
    fn predicate_implications(seed in any::<u64>()) {
        let x = game(seed, 4);
        if is_super_starkiller(x) {
            prop_assert!(is_disintegrator(x) && is_starkiller(x));
        }
        let tail = game(seed.wrapping_add(1), 2);
        let with_star_option = mk_game(x.lefts(), x.rights().chain([mk_game([GameId::star()], [tail])]));
        prop_assert!(is_disintegrator(with_star_option));
        let terminable = mk_game([], x.rights().chain([GameId::zero()]));
        prop_assert!(is_starkiller(terminable));
    }
}

#[test]
fn comparison_halves_against_oracle() {
    let domain = dicots(3, DEFAULT_LEVEL_LIMIT);
    let small = dicots(2, DEFAULT_LEVEL_LIMIT);
    for &g in &small {
        for &h in &small {
            let (g, h) = (AugId::from(g), AugId::from(h));
            let truth = oracle_geq(&domain, g, h).holds();
            let proviso = proviso_holds_on(&domain, g, h);
            if truth {
                assert!(proviso, "{g} >= {h} but the proviso fails");
            }
            if maintenance_holds(&domain, g, h) && proviso {
                assert!(
                    truth,
                    "{g}, {h}: maintenance and proviso hold but the oracle disagrees"
                );
            }
        }
    }
}

#[test]
fn predicate_recursion_matches_lemma_on_dead_ends() {
    let e = Universe::dead_ending();
    for &x in e.left_ends_up_to(3).iter() {
        let probe = aug_sum(Predicate::Starkiller.probe(), x.into());
        assert_eq!(
            holds(Predicate::Starkiller, x),
            probe.outcome().right_start == Player::Right,
            "{x}"
        );
    }
}
