//! Level-by-level enumeration of game forms with a width cap.
//!
//! The number of forms born by day `n` grows as a tower of exponentials, so
//! each level is built from subsets of the previous level of at most `w`
//! options per side, where `w` is the largest width whose level fits in the
//! configured limit. Small levels are always complete.

use std::collections::HashSet;

use crate::games::{mk_game, GameId};

/// Default cap on the number of candidate forms generated for one level.
pub const DEFAULT_LEVEL_LIMIT: usize = 50_000;

fn subsets_up_to(p: usize, w: usize) -> u128 {
    let mut total: u128 = 0;
    let mut c: u128 = 1;
    for k in 0..=w.min(p) {
        total = total.saturating_add(c);
        c = c.saturating_mul((p - k) as u128) / (k as u128 + 1);
    }
    total
}

/// Largest width `w >= 1` whose `sides`-fold product of subset counts stays
/// within `limit`; the full width `p` when everything fits.
pub fn width_for(p: usize, sides: u32, limit: usize) -> usize {
    let fits = |w: usize| subsets_up_to(p, w).saturating_pow(sides) <= limit as u128;
    if fits(p) {
        return p;
    }
    let mut w = 1;
    while w < p && fits(w + 1) {
        w += 1;
    }
    w
}

/// Whether [`width_for`] had to cap the width for this pool.
pub fn is_capped(p: usize, sides: u32, limit: usize) -> bool {
    width_for(p, sides, limit) < p
}

/// All subsets of `pool` with at most `w` elements, smallest first.
pub fn subsets<T: Copy>(pool: &[T], w: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    let mut current: Vec<(Vec<T>, usize)> = vec![(Vec::new(), 0)];
    for _ in 0..w.min(pool.len()) {
        let mut next = Vec::new();
        for (set, start) in &current {
            for (i, &x) in pool.iter().enumerate().skip(*start) {
                let mut s = set.clone();
                s.push(x);
                out.push(s.clone());
                next.push((s, i + 1));
            }
        }
        current = next;
    }
    out
}

fn sorted(set: HashSet<GameId>) -> Vec<GameId> {
    let mut v: Vec<GameId> = set.into_iter().collect();
    v.sort();
    v
}

/// The next level: `prev` together with every `{L|R}` over subsets of `prev`
/// that satisfies `rule`.
pub fn next_level(
    prev: &[GameId],
    rule: impl Fn(&[GameId], &[GameId]) -> bool,
    limit: usize,
) -> Vec<GameId> {
    let w = width_for(prev.len(), 2, limit);
    let subs = subsets(prev, w);
    let mut out: HashSet<GameId> = prev.iter().copied().collect();
    for l in &subs {
        for r in &subs {
            if rule(l, r) {
                out.insert(mk_game(l.iter().copied(), r.iter().copied()));
            }
        }
    }
    sorted(out)
}

/// Levels `0..=day` of the hereditary class described by `rule`.
pub fn levels(
    rule: impl Fn(&[GameId], &[GameId]) -> bool,
    day: u32,
    limit: usize,
) -> Vec<Vec<GameId>> {
    let mut out = vec![if rule(&[], &[]) {
        vec![GameId::zero()]
    } else {
        Vec::new()
    }];
    for _ in 0..day {
        let next = next_level(out.last().unwrap(), &rule, limit);
        out.push(next);
    }
    out
}

/// Left ends `{.|R}` for subsets `R` of `pool` accepted by `rule`.
pub fn left_ends_over(
    pool: &[GameId],
    rule: impl Fn(&[GameId]) -> bool,
    limit: usize,
) -> Vec<GameId> {
    let w = width_for(pool.len(), 1, limit);
    let out: HashSet<GameId> = subsets(pool, w)
        .into_iter()
        .filter(|r| rule(r))
        .map(|r| mk_game([], r))
        .collect();
    sorted(out)
}

/// All plain forms born by day `day` (width-capped).
pub fn plain_forms(day: u32, limit: usize) -> Vec<GameId> {
    levels(|_, _| true, day, limit).pop().unwrap()
}

/// All dicots born by day `day` (width-capped).
pub fn dicots(day: u32, limit: usize) -> Vec<GameId> {
    levels(|l, r| l.is_empty() == r.is_empty(), day, limit)
        .pop()
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths() {
        assert_eq!(width_for(4, 2, DEFAULT_LEVEL_LIMIT), 4);
        assert_eq!(width_for(10, 2, DEFAULT_LEVEL_LIMIT), 3);
        assert_eq!(width_for(256, 1, DEFAULT_LEVEL_LIMIT), 2);
        assert_eq!(width_for(16, 1, DEFAULT_LEVEL_LIMIT), 8);
        assert_eq!(width_for(256, 2, DEFAULT_LEVEL_LIMIT), 1);
        assert!(!is_capped(4, 2, DEFAULT_LEVEL_LIMIT));
    }

    #[test]
    fn subset_counts() {
        assert_eq!(subsets(&[1, 2, 3, 4], 4).len(), 16);
        assert_eq!(subsets(&[1, 2, 3, 4], 2).len(), 11);
        assert_eq!(subsets::<u8>(&[], 3), vec![Vec::<u8>::new()]);
    }

    #[test]
    fn small_levels_are_complete() {
        assert_eq!(plain_forms(1, DEFAULT_LEVEL_LIMIT).len(), 4);
        assert_eq!(plain_forms(2, DEFAULT_LEVEL_LIMIT).len(), 256);
        assert_eq!(dicots(1, DEFAULT_LEVEL_LIMIT).len(), 2);
        assert_eq!(dicots(2, DEFAULT_LEVEL_LIMIT).len(), 10);
    }

    #[test]
    fn capped_dicot_day_three() {
        let d3 = dicots(3, DEFAULT_LEVEL_LIMIT);
        // 175 non-empty subsets per side of at most 3 options, plus 0
        assert_eq!(d3.len(), 175 * 175 + 1);
        assert!(d3.windows(2).all(|w| w[0].birthday() <= w[1].birthday()));
    }
}
