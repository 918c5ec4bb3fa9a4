//! Conflicts between transformations of `B_bf(n)` and the pruning loop that
//! shows `W<=5(n)` / `W>=6(n)` are the only largest semigroups for small `n`.

use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::par;
use crate::semigroups::{self, in_bbf, middle_pairs, pair_masks};
use crate::transmap::{State, Transformation};
use crate::{Error, Result};

/// How the "forces every pair" condition reads the pair census of
/// `close({t1, t2})`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForcesMode {
    /// Every pair is colliding or focused, pair by pair.
    EachPair,
    /// All pairs are colliding, or all pairs are focused.
    #[default]
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConflictReason {
    EscapesBbf,
    FocusesCollidingPair,
    ForcesAllPairs,
}

impl ConflictReason {
    fn code(self) -> u8 {
        match self {
            ConflictReason::EscapesBbf => 1,
            ConflictReason::FocusesCollidingPair => 2,
            ConflictReason::ForcesAllPairs => 3,
        }
    }

    fn from_code(c: u8) -> Option<Self> {
        match c {
            1 => Some(ConflictReason::EscapesBbf),
            2 => Some(ConflictReason::FocusesCollidingPair),
            3 => Some(ConflictReason::ForcesAllPairs),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConflictWitness {
    /// A product outside `B_bf(n)`.
    Element(Transformation),
    /// A pair collided by one product and focused by another.
    Pair {
        pair: (State, State),
        colliding: Transformation,
        focused: Transformation,
    },
    /// Bitmasks over the middle pairs of the full census.
    Census { colliding: u64, focused: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConflictVerdict {
    pub conflicting: bool,
    pub reason: Option<ConflictReason>,
    pub witness: Option<ConflictWitness>,
}

impl ConflictVerdict {
    fn clear() -> Self {
        Self {
            conflicting: false,
            reason: None,
            witness: None,
        }
    }

    fn found(reason: ConflictReason, witness: ConflictWitness) -> Self {
        Self {
            conflicting: true,
            reason: Some(reason),
            witness: Some(witness),
        }
    }
}

/// Closes `{t1, t2}` and stops at the first product outside `B_bf(n)` or the
/// first pair that is both colliding and focused.
pub fn conflict(t1: &Transformation, t2: &Transformation, mode: ForcesMode) -> Result<ConflictVerdict> {
    if t1.n() != t2.n() {
        return Err(Error::Dimension("conflict between different n".into()));
    }
    if !in_bbf(t1) || !in_bbf(t2) {
        return Err(Error::Precondition("conflict needs members of B_bf(n)".into()));
    }
    Ok(conflict_unchecked(t1, t2, mode))
}

fn conflict_unchecked(t1: &Transformation, t2: &Transformation, mode: ForcesMode) -> ConflictVerdict {
    let n = t1.n();
    let pairs = middle_pairs(n).len();
    let mut col_w: Vec<Option<Transformation>> = vec![None; pairs];
    let mut foc_w: Vec<Option<Transformation>> = vec![None; pairs];
    let (mut col, mut foc) = (0u64, 0u64);
    let gens = [*t1, *t2];
    let mut seen = FxHashSet::default();
    let mut queue = Vec::new();
    for g in gens {
        if seen.insert(g.packed()) {
            queue.push(g);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let e = queue[head];
        head += 1;
        if !in_bbf(&e) {
            return ConflictVerdict::found(ConflictReason::EscapesBbf, ConflictWitness::Element(e));
        }
        let (c, f) = pair_masks(&e);
        for i in 0..pairs {
            let bit = 1u64 << i;
            if c & bit != 0 && col_w[i].is_none() {
                col_w[i] = Some(e);
            }
            if f & bit != 0 && foc_w[i].is_none() {
                foc_w[i] = Some(e);
            }
        }
        col |= c;
        foc |= f;
        let both = col & foc;
        if both != 0 {
            let i = both.trailing_zeros() as usize;
            return ConflictVerdict::found(
                ConflictReason::FocusesCollidingPair,
                ConflictWitness::Pair {
                    pair: middle_pairs(n)[i],
                    colliding: col_w[i].unwrap(),
                    focused: foc_w[i].unwrap(),
                },
            );
        }
        for g in &gens {
            let p = e.then(g);
            if seen.insert(p.packed()) {
                queue.push(p);
            }
        }
    }
    let all = (1u64 << pairs) - 1;
    let forces = match mode {
        ForcesMode::EachPair => col | foc == all,
        ForcesMode::Uniform => col == all || foc == all,
    };
    if forces {
        ConflictVerdict::found(
            ConflictReason::ForcesAllPairs,
            ConflictWitness::Census {
                colliding: col,
                focused: foc,
            },
        )
    } else {
        ConflictVerdict::clear()
    }
}

/// Greedy maximal matching: edges are scanned in lexicographic order of
/// their (smaller, larger) endpoints and taken when both ends are free.
pub fn greedy_matching(edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut sorted: Vec<(usize, usize)> = edges
        .iter()
        .filter(|(a, b)| a != b)
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect();
    sorted.sort_unstable();
    sorted.dedup();
    let mut matched = FxHashSet::default();
    let mut out = Vec::new();
    for (a, b) in sorted {
        if !matched.contains(&a) && !matched.contains(&b) {
            matched.insert(a);
            matched.insert(b);
            out.push((a, b));
        }
    }
    out
}

/// Symmetric conflict relation over an indexed list of transformations.
#[derive(Clone, Debug)]
pub struct ConflictTable {
    len: usize,
    words: usize,
    adj: Vec<u64>,
    /// Reason codes of the upper triangle, row by row.
    reasons: Vec<u8>,
}

fn tri_offset(len: usize, i: usize) -> usize {
    i * (2 * len - i - 1) / 2
}

impl ConflictTable {
    /// Evaluates every unordered pair, in parallel over rows.
    pub fn build(items: &[Transformation], mode: ForcesMode) -> Self {
        let len = items.len();
        let rows = par::map_range(len, |i| {
            items[i + 1..]
                .iter()
                .map(|u| {
                    conflict_unchecked(&items[i], u, mode)
                        .reason
                        .map_or(0, ConflictReason::code)
                })
                .collect::<Vec<u8>>()
        });
        let words = len.div_ceil(64);
        let mut adj = vec![0u64; len * words];
        let mut reasons = Vec::with_capacity(len * len.saturating_sub(1) / 2);
        for (i, row) in rows.into_iter().enumerate() {
            for (d, &r) in row.iter().enumerate() {
                if r != 0 {
                    let j = i + 1 + d;
                    adj[i * words + j / 64] |= 1 << (j % 64);
                    adj[j * words + i / 64] |= 1 << (i % 64);
                }
            }
            reasons.extend(row);
        }
        Self {
            len,
            words,
            adj,
            reasons,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.adj[i * self.words..(i + 1) * self.words]
    }

    pub fn conflicts(&self, i: usize, j: usize) -> bool {
        self.row(i)[j / 64] >> (j % 64) & 1 == 1
    }

    pub fn reason(&self, i: usize, j: usize) -> Option<ConflictReason> {
        if i == j {
            return None;
        }
        let (a, b) = (i.min(j), i.max(j));
        ConflictReason::from_code(self.reasons[tri_offset(self.len, a) + (b - a - 1)])
    }

    /// Number of conflicting pairs per reason.
    pub fn reason_counts(&self) -> [usize; 3] {
        let mut c = [0; 3];
        for &r in &self.reasons {
            if r != 0 {
                c[r as usize - 1] += 1;
            }
        }
        c
    }
}

/// `1 + |B'| - |M|` for one element, with its ingredients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRecord {
    pub t: Transformation,
    pub partners: usize,
    pub matching: usize,
    pub bound: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReasonCounts {
    pub escapes_bbf: usize,
    pub focuses_colliding_pair: usize,
    pub forces_all_pairs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PruneTrace {
    pub n: usize,
    pub mode: ForcesMode,
    pub threshold: usize,
    pub sizes: Vec<usize>,
    pub failed: bool,
    /// Conflicting pairs of `B_0` by reason.
    pub reasons: ReasonCounts,
    /// Per round, the bound of every element of `B_i`.
    pub rounds: Vec<Vec<BoundRecord>>,
}

impl PruneTrace {
    /// The JSON summary without per-element records.
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "threshold": self.threshold,
            "sizes": self.sizes,
            "failed": self.failed,
            "mode": self.mode,
            "reasons": self.reasons,
        })
    }
}

/// Largest `n` accepted by [`prune`].
pub const MAX_PRUNE_STATES: usize = 7;

/// Size of the greedy matching of the conflict graph induced on `alive`,
/// scanning vertices in index order.
fn matching_size(table: &ConflictTable, alive: &[u64]) -> usize {
    let words = alive.len();
    let mut free = alive.to_vec();
    let mut size = 0;
    for w in 0..words {
        loop {
            let bits = free[w];
            if bits == 0 {
                break;
            }
            let u = w * 64 + bits.trailing_zeros() as usize;
            free[w] &= !(1 << (u % 64));
            let row = table.row(u);
            for (&r, f) in row.iter().zip(free.iter_mut()).skip(w) {
                let cand = r & *f;
                if cand != 0 {
                    *f &= !(1 << cand.trailing_zeros());
                    size += 1;
                    break;
                }
            }
        }
    }
    size
}

/// One element's bound within the alive set.
fn bound_for(table: &ConflictTable, alive: &[u64], i: usize) -> (usize, usize) {
    let row = table.row(i);
    let mut partners: Vec<u64> = alive.iter().zip(row).map(|(a, r)| a & !r).collect();
    partners[i / 64] &= !(1 << (i % 64));
    let count = partners.iter().map(|w| w.count_ones() as usize).sum();
    (count, matching_size(table, &partners))
}

/// Iterated removal of elements whose independent-set bound is below
/// `max(|W<=5(n)|, |W>=6(n)|)`, starting from `B_bf(n)`.
pub fn prune(n: usize, mode: ForcesMode) -> Result<PruneTrace> {
    if n < 3 {
        return Err(Error::Domain(format!("pruning needs n >= 3, got {n}")));
    }
    if n > MAX_PRUNE_STATES {
        return Err(Error::ResourceGuard(format!(
            "pruning is limited to n <= {MAX_PRUNE_STATES}, got {n}"
        )));
    }
    let b0 = semigroups::enumerate_bbf(n)?;
    let items = b0.sorted();
    let threshold = semigroups::enumerate_wle5(n)?
        .len()
        .max(semigroups::enumerate_wge6(n)?.len());
    let table = ConflictTable::build(&items, mode);
    let [a, b, c] = table.reason_counts();
    let words = items.len().div_ceil(64);
    let mut alive = vec![0u64; words];
    for i in 0..items.len() {
        alive[i / 64] |= 1 << (i % 64);
    }
    let mut sizes = vec![items.len()];
    let mut rounds = Vec::new();
    let mut failed = false;
    while sizes.last() != Some(&0) {
        let members: Vec<usize> = (0..items.len())
            .filter(|&i| alive[i / 64] >> (i % 64) & 1 == 1)
            .collect();
        let records: Vec<BoundRecord> = par::map(&members, |&i| {
            let (partners, matching) = bound_for(&table, &alive, i);
            BoundRecord {
                t: items[i],
                partners,
                matching,
                bound: 1 + partners - matching,
            }
        });
        let mut next = vec![0u64; words];
        for (&i, r) in members.iter().zip(&records) {
            if r.bound >= threshold {
                next[i / 64] |= 1 << (i % 64);
            }
        }
        rounds.push(records);
        let size = next.iter().map(|w| w.count_ones() as usize).sum();
        if size == *sizes.last().unwrap() {
            failed = true;
            break;
        }
        sizes.push(size);
        alive = next;
    }
    Ok(PruneTrace {
        n,
        mode,
        threshold,
        sizes,
        failed,
        reasons: ReasonCounts {
            escapes_bbf: a,
            focuses_colliding_pair: b,
            forces_all_pairs: c,
        },
        rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[usize]) -> Transformation {
        Transformation::from_images(v)
    }

    #[test]
    fn focus_of_colliding_pair() {
        let t1 = t(&[1, 2, 5, 5, 5, 5]);
        let t2 = t(&[5, 4, 4, 5, 5, 5]);
        let v = conflict(&t1, &t2, ForcesMode::EachPair).unwrap();
        assert!(v.conflicting);
        assert_eq!(v.reason, Some(ConflictReason::FocusesCollidingPair));
        match v.witness {
            Some(ConflictWitness::Pair { pair, .. }) => assert_eq!(pair, (1, 2)),
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn type2_element_alone_is_harmless() {
        let x = t(&[4, 5, 5, 5, 5, 5]);
        for mode in [ForcesMode::EachPair, ForcesMode::Uniform] {
            assert!(!conflict(&x, &x, mode).unwrap().conflicting);
        }
    }

    #[test]
    fn witness_letters_at_seven_do_not_clash_on_pairs() {
        let letters = semigroups::witness_letters(7).unwrap();
        for a in &letters[..6] {
            for b in &letters[..6] {
                let v = conflict(a, b, ForcesMode::Uniform).unwrap();
                assert_ne!(v.reason, Some(ConflictReason::EscapesBbf));
                assert_ne!(v.reason, Some(ConflictReason::FocusesCollidingPair));
            }
        }
    }

    #[test]
    fn rejects_non_members() {
        assert!(conflict(&t(&[1, 1, 3, 3]), &t(&[1, 2, 3, 3]), ForcesMode::Uniform).is_err());
        assert!(conflict(&t(&[1, 2, 3, 3]), &t(&[1, 1, 1]), ForcesMode::Uniform).is_err());
    }

    #[test]
    fn matching_examples() {
        assert_eq!(greedy_matching(&[(0, 1), (1, 2), (0, 2)]).len(), 1);
        assert!(greedy_matching(&[]).is_empty());
        assert_eq!(greedy_matching(&[(2, 3), (1, 2), (0, 1)]), vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn small_prunes_reach_zero() {
        for n in [3, 4, 5] {
            let tr = prune(n, ForcesMode::Uniform).unwrap();
            assert_eq!(tr.sizes.last(), Some(&0), "n={n}: {:?}", tr.sizes);
            assert!(!tr.failed);
        }
        assert!(matches!(prune(8, ForcesMode::Uniform), Err(Error::ResourceGuard(_))));
    }

    #[test]
    fn table_agrees_with_predicate() {
        let items = semigroups::enumerate_bbf(5).unwrap().sorted();
        let table = ConflictTable::build(&items, ForcesMode::EachPair);
        for i in 0..items.len() {
            for j in 0..items.len() {
                if i != j {
                    let v = conflict(&items[i], &items[j], ForcesMode::EachPair).unwrap();
                    assert_eq!(table.conflicts(i, j), v.conflicting);
                    assert_eq!(table.reason(i, j).is_some(), v.conflicting);
                }
            }
        }
    }

    #[test]
    fn bitset_matching_matches_edge_scan() {
        let items = semigroups::enumerate_bbf(5).unwrap().sorted();
        let table = ConflictTable::build(&items, ForcesMode::Uniform);
        let words = items.len().div_ceil(64);
        let mut alive = vec![0u64; words];
        for i in (0..items.len()).step_by(2) {
            alive[i / 64] |= 1 << (i % 64);
        }
        let mut edges = Vec::new();
        for i in (0..items.len()).step_by(2) {
            for j in (i + 2..items.len()).step_by(2) {
                if table.conflicts(i, j) {
                    edges.push((i, j));
                }
            }
        }
        assert_eq!(matching_size(&table, &alive), greedy_matching(&edges).len());
    }
}
