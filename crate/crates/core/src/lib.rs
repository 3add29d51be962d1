//! Partizan misère game forms and their universe-relative algebra.
//!
//! Forms are hash-consed into a process-wide table, so [`GameId`] and
//! [`AugId`] are cheap copyable handles and structural equality is `==`.

mod store;

pub mod augmented;
pub mod enumerate;
pub mod error;
pub mod games;
pub mod invert;
pub mod notation;
pub mod order;
pub mod persist;
pub mod sample;
pub mod simplest;
pub mod universes;

pub use augmented::{
    aug_conjugate, aug_outcome, aug_sum, aug_sum_all, end_like, mk_aug, AugId, EndLike,
};
pub use error::{Error, Result};
pub use games::{
    birthday, classify, conjugate, integer, mk_game, multiple, outcome, sum, sum_all,
    Classification, GameId, Outcome, OutcomePair, Player,
};
pub use invert::{
    day1_census, is_invertible, is_reduced, Invertibility, Predicate, UhatAssertions,
};
pub use notation::{
    parse_aug, parse_form, parse_game, parse_universe, print, print_game, Form, ParseError,
};
pub use order::{equiv, geq, TriVerdict};
pub use simplest::{simplest_form, Mode, Simplified};
pub use store::interned_count;
pub use universes::{StrongVerdict, Universe, UniverseSpec, WeakCertificate};
