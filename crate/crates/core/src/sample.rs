//! Seeded random forms for property suites.
//!
//! The generator is ChaCha8, so a seed reproduces the same forms on every
//! platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::augmented::{mk_aug, AugId};
use crate::games::{mk_game, GameId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Any plain form.
    Plain,
    /// Both sides empty or both non-empty, hereditarily.
    Dicot,
    /// Plain form with random tombstones.
    Augmented,
}

pub struct Sampler {
    rng: ChaCha8Rng,
    /// Maximum number of options drawn per side.
    pub max_options: usize,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_options: 3,
        }
    }

    /// A form of birthday at most `max_birthday`.
    pub fn form(&mut self, shape: Shape, max_birthday: u32) -> AugId {
        if max_birthday == 0 {
            return self.leaf(shape);
        }
        let both_or_none = shape == Shape::Dicot;
        let (nl, nr) = if both_or_none {
            if self.rng.gen_bool(0.15) {
                (0, 0)
            } else {
                (
                    self.rng.gen_range(1..=self.max_options),
                    self.rng.gen_range(1..=self.max_options),
                )
            }
        } else {
            (
                self.rng.gen_range(0..=self.max_options),
                self.rng.gen_range(0..=self.max_options),
            )
        };
        let side = |n: usize, s: &mut Sampler| -> Vec<AugId> {
            (0..n)
                .map(|_| {
                    let b = s.rng.gen_range(0..max_birthday);
                    s.form(shape, b)
                })
                .collect()
        };
        let lefts = side(nl, self);
        let rights = side(nr, self);
        let (lt, rt) = if shape == Shape::Augmented {
            (self.rng.gen_bool(0.2), self.rng.gen_bool(0.2))
        } else {
            (false, false)
        };
        mk_aug(lefts, rights, lt, rt)
    }

    fn leaf(&mut self, shape: Shape) -> AugId {
        if shape == Shape::Augmented {
            mk_aug([], [], self.rng.gen_bool(0.2), self.rng.gen_bool(0.2))
        } else {
            AugId::zero()
        }
    }

    pub fn game(&mut self, max_birthday: u32) -> GameId {
        self.form(Shape::Plain, max_birthday)
            .as_game()
            .expect("plain shape")
    }

    pub fn dicot(&mut self, max_birthday: u32) -> GameId {
        self.form(Shape::Dicot, max_birthday)
            .as_game()
            .expect("dicot shape")
    }

    /// A plain form that is not a Left end.
    pub fn non_left_end(&mut self, max_birthday: u32) -> GameId {
        loop {
            let g = self.game(max_birthday.max(1));
            if !g.is_left_end() {
                return g;
            }
            if max_birthday == 0 {
                return mk_game([GameId::zero()], []);
            }
        }
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a: Vec<AugId> = (0..20)
            .map({
                let mut s = Sampler::new(7);
                move |_| s.form(Shape::Augmented, 3)
            })
            .collect();
        let b: Vec<AugId> = (0..20)
            .map({
                let mut s = Sampler::new(7);
                move |_| s.form(Shape::Augmented, 3)
            })
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn shapes_respected() {
        let mut s = Sampler::new(1);
        for _ in 0..100 {
            let d = s.dicot(3);
            assert!(d.classify().is_dicot && d.birthday() <= 3);
            assert!(!s.non_left_end(3).is_left_end());
        }
    }
}
