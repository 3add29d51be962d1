//! Process-wide hash-consing table for (augmented) game forms.
//!
//! Every form is interned exactly once. Option lists are deduplicated and
//! sorted by a structural total order, so two forms receive the same index if
//! and only if their option trees (including tombstone flags) are isomorphic.
//! Nodes are leaked into `'static` storage: an interned form lives for the
//! rest of the process, which lets every lookup hand out plain references
//! without holding the table lock.
//!
//! Facts that only depend on the options of a node (birthday, structural
//! hash, misère outcome, dicot and dead-end flags) are computed once, when
//! the node is created.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::LazyLock;

use parking_lot::RwLock;

use crate::games::{OutcomePair, Player};

pub(crate) type Raw = u32;

pub(crate) struct Node {
    pub lefts: Box<[Raw]>,
    pub rights: Box<[Raw]>,
    pub left_tomb: bool,
    pub right_tomb: bool,
    pub birthday: u32,
    pub hash: u64,
    /// No tombstone anywhere in the tree.
    pub plain: bool,
    pub outcome: OutcomePair,
    pub dicot: bool,
    pub dead_left_end: bool,
    pub dead_right_end: bool,
    /// Every end subposition is a dead end of the matching side.
    pub dead_ending: bool,
}

impl Node {
    pub fn left_end_like(&self) -> bool {
        self.lefts.is_empty() || self.left_tomb
    }

    pub fn right_end_like(&self) -> bool {
        self.rights.is_empty() || self.right_tomb
    }
}

#[derive(PartialEq, Eq, Hash)]
struct Key {
    lefts: Box<[Raw]>,
    rights: Box<[Raw]>,
    left_tomb: bool,
    right_tomb: bool,
}

#[derive(Default)]
struct Table {
    nodes: Vec<&'static Node>,
    index: HashMap<Key, Raw>,
}

static TABLE: LazyLock<RwLock<Table>> = LazyLock::new(|| RwLock::new(Table::default()));

pub(crate) fn node(id: Raw) -> &'static Node {
    TABLE.read().nodes[id as usize]
}

/// Number of forms interned so far.
pub fn interned_count() -> usize {
    TABLE.read().nodes.len()
}

const SEED: u64 = 0x9e37_79b9_7f4a_7c15;

fn mix(h: u64, v: u64) -> u64 {
    // splitmix64 finaliser over the running state
    let mut z = h ^ v
        .wrapping_add(SEED)
        .wrapping_add(h << 6)
        .wrapping_add(h >> 2);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Structural total order: birthday, then structural hash, then a full
/// recursive comparison (only reached on a 64-bit hash collision).
pub(crate) fn canonical_cmp(a: Raw, b: Raw) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let (na, nb) = (node(a), node(b));
    na.birthday
        .cmp(&nb.birthday)
        .then(na.hash.cmp(&nb.hash))
        .then_with(|| structural_cmp(na, nb))
}

fn structural_cmp(na: &Node, nb: &Node) -> Ordering {
    (na.left_tomb, na.right_tomb)
        .cmp(&(nb.left_tomb, nb.right_tomb))
        .then_with(|| slice_cmp(&na.lefts, &nb.lefts))
        .then_with(|| slice_cmp(&na.rights, &nb.rights))
}

fn slice_cmp(a: &[Raw], b: &[Raw]) -> Ordering {
    for (&x, &y) in a.iter().zip(b) {
        match canonical_cmp(x, y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

fn canonicalise(mut ids: Vec<Raw>) -> Box<[Raw]> {
    ids.sort_unstable_by(|&a, &b| canonical_cmp(a, b));
    ids.dedup();
    ids.into_boxed_slice()
}

pub(crate) fn intern(lefts: Vec<Raw>, rights: Vec<Raw>, left_tomb: bool, right_tomb: bool) -> Raw {
    let key = Key {
        lefts: canonicalise(lefts),
        rights: canonicalise(rights),
        left_tomb,
        right_tomb,
    };
    if let Some(&id) = TABLE.read().index.get(&key) {
        return id;
    }
    let built = build(&key);
    let mut table = TABLE.write();
    if let Some(&id) = table.index.get(&key) {
        return id;
    }
    let id = Raw::try_from(table.nodes.len()).expect("interning table overflow");
    table.nodes.push(Box::leak(Box::new(built)));
    table.index.insert(key, id);
    id
}

fn build(key: &Key) -> Node {
    let lefts: Vec<&Node> = key.lefts.iter().map(|&l| node(l)).collect();
    let rights: Vec<&Node> = key.rights.iter().map(|&r| node(r)).collect();

    let birthday = lefts
        .iter()
        .chain(&rights)
        .map(|n| n.birthday + 1)
        .max()
        .unwrap_or(0);

    let mut hash = mix(
        SEED,
        u64::from(key.left_tomb) | (u64::from(key.right_tomb) << 1),
    );
    hash = mix(hash, lefts.len() as u64);
    for n in &lefts {
        hash = mix(hash, n.hash);
    }
    hash = mix(hash, 0xffff_0000 | rights.len() as u64);
    for n in &rights {
        hash = mix(hash, n.hash);
    }

    let left_end_like = lefts.is_empty() || key.left_tomb;
    let right_end_like = rights.is_empty() || key.right_tomb;
    // Misère: a player who cannot move (or is end-like) wins moving first.
    let left_start = if left_end_like || lefts.iter().any(|n| n.outcome.right_start == Player::Left)
    {
        Player::Left
    } else {
        Player::Right
    };
    let right_start =
        if right_end_like || rights.iter().any(|n| n.outcome.left_start == Player::Right) {
            Player::Right
        } else {
            Player::Left
        };

    let plain = !key.left_tomb && !key.right_tomb && lefts.iter().chain(&rights).all(|n| n.plain);
    let dicot =
        lefts.is_empty() == rights.is_empty() && lefts.iter().chain(&rights).all(|n| n.dicot);
    let dead_left_end = lefts.is_empty() && rights.iter().all(|n| n.dead_left_end);
    let dead_right_end = rights.is_empty() && lefts.iter().all(|n| n.dead_right_end);
    let dead_ending = (!lefts.is_empty() || dead_left_end)
        && (!rights.is_empty() || dead_right_end)
        && lefts.iter().chain(&rights).all(|n| n.dead_ending);

    Node {
        lefts: key.lefts.clone(),
        rights: key.rights.clone(),
        left_tomb: key.left_tomb,
        right_tomb: key.right_tomb,
        birthday,
        hash,
        plain,
        outcome: OutcomePair {
            left_start,
            right_start,
        },
        dicot,
        dead_left_end,
        dead_right_end,
        dead_ending,
    }
}

static CONJ: LazyLock<RwLock<HashMap<Raw, Raw>>> = LazyLock::new(Default::default);

pub(crate) fn conjugate(id: Raw) -> Raw {
    if let Some(&c) = CONJ.read().get(&id) {
        return c;
    }
    let n = node(id);
    let lefts = n.rights.iter().map(|&r| conjugate(r)).collect();
    let rights = n.lefts.iter().map(|&l| conjugate(l)).collect();
    let c = intern(lefts, rights, n.right_tomb, n.left_tomb);
    let mut memo = CONJ.write();
    memo.insert(id, c);
    memo.insert(c, id);
    c
}

static SUMS: LazyLock<RwLock<HashMap<(Raw, Raw), Raw>>> = LazyLock::new(Default::default);

/// Signals that a sum needed more fresh expansions than it was allowed.
#[derive(Debug)]
pub(crate) struct OverBudget;

/// Disjunctive sum of augmented forms. `remaining` counts memo misses.
///
/// The sum carries a Left tombstone iff both summands are Left end-like and
/// at least one of them carries a Left tombstone (mirror on the Right), so the
/// sum is Left end-like exactly when both summands are.
pub(crate) fn add(a: Raw, b: Raw, remaining: &mut u64) -> Result<Raw, OverBudget> {
    let (na, nb) = (node(a), node(b));
    if is_zero(na) {
        return Ok(b);
    }
    if is_zero(nb) {
        return Ok(a);
    }
    let key = if a <= b { (a, b) } else { (b, a) };
    if let Some(&s) = SUMS.read().get(&key) {
        return Ok(s);
    }
    if *remaining == 0 {
        return Err(OverBudget);
    }
    *remaining -= 1;

    let mut lefts = Vec::with_capacity(na.lefts.len() + nb.lefts.len());
    for &l in na.lefts.iter() {
        lefts.push(add(l, b, remaining)?);
    }
    for &l in nb.lefts.iter() {
        lefts.push(add(a, l, remaining)?);
    }
    let mut rights = Vec::with_capacity(na.rights.len() + nb.rights.len());
    for &r in na.rights.iter() {
        rights.push(add(r, b, remaining)?);
    }
    for &r in nb.rights.iter() {
        rights.push(add(a, r, remaining)?);
    }
    let left_tomb = na.left_end_like() && nb.left_end_like() && (na.left_tomb || nb.left_tomb);
    let right_tomb = na.right_end_like() && nb.right_end_like() && (na.right_tomb || nb.right_tomb);
    let s = intern(lefts, rights, left_tomb, right_tomb);
    SUMS.write().insert(key, s);
    Ok(s)
}

fn is_zero(n: &Node) -> bool {
    n.lefts.is_empty() && n.rights.is_empty() && !n.left_tomb && !n.right_tomb
}

/// All distinct subpositions (including `id` itself), children before parents.
pub(crate) fn subpositions(id: Raw) -> Vec<Raw> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    fn walk(id: Raw, seen: &mut std::collections::HashSet<Raw>, out: &mut Vec<Raw>) {
        if !seen.insert(id) {
            return;
        }
        let n = node(id);
        for &c in n.lefts.iter().chain(n.rights.iter()) {
            walk(c, seen, out);
        }
        out.push(id);
    }
    walk(id, &mut seen, &mut out);
    out
}
