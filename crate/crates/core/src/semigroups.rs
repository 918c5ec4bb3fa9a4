//! Closure of generator sets and the canonical transformation sets of
//! bifix-free languages: `B_bf(n)`, `W>=6(n)`, `W<=5(n)` and the witness
//! alphabet that generates `W>=6(n)`.
//!
//! State conventions follow the minimal DFA of a bifix-free language: `0` is
//! initial, `n-2` is the unique final state, `n-1` is the empty state and
//! `1..=n-3` are the middle states `Q_M`.

use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::automata::Dfa;
use crate::par;
use crate::transmap::{State, Transformation};
use crate::{Error, Result};

/// A finite set of transformations with insertion order and generator
/// provenance. Produced closed by [`close`]; enumerations that are not
/// semigroups (such as `B_bf(n)`) reuse the type as a plain ordered set.
#[derive(Clone, Debug, Default)]
pub struct Semigroup {
    n: usize,
    elements: Vec<Transformation>,
    index: FxHashMap<Transformation, usize>,
    generator: Vec<bool>,
}

impl Semigroup {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            ..Self::default()
        }
    }

    /// An ordered set without generators. Duplicates are dropped, the first
    /// occurrence keeps its position.
    pub fn from_set(n: usize, items: impl IntoIterator<Item = Transformation>) -> Result<Self> {
        let mut s = Self::empty(n);
        for t in items {
            s.insert(t, false)?;
        }
        Ok(s)
    }

    fn insert(&mut self, t: Transformation, generator: bool) -> Result<bool> {
        if t.n() != self.n {
            return Err(Error::Dimension(format!(
                "transformation of {} states in a set of {}",
                t.n(),
                self.n
            )));
        }
        if let Some(&i) = self.index.get(&t) {
            self.generator[i] |= generator;
            return Ok(false);
        }
        self.index.insert(t, self.elements.len());
        self.elements.push(t);
        self.generator.push(generator);
        Ok(true)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Transformation> {
        self.elements.iter()
    }

    pub fn contains(&self, t: &Transformation) -> bool {
        self.index.contains_key(t)
    }

    pub fn position(&self, t: &Transformation) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn generators(&self) -> Vec<Transformation> {
        self.elements
            .iter()
            .zip(&self.generator)
            .filter(|(_, &g)| g)
            .map(|(t, _)| *t)
            .collect()
    }

    pub fn is_generator(&self, t: &Transformation) -> bool {
        self.position(t).is_some_and(|i| self.generator[i])
    }

    /// Set equality, ignoring order and generator marks.
    pub fn same_set(&self, other: &Semigroup) -> bool {
        self.n == other.n
            && self.len() == other.len()
            && self.elements.iter().all(|t| other.contains(t))
    }

    pub fn is_subset_of(&self, other: &Semigroup) -> bool {
        self.elements.iter().all(|t| other.contains(t))
    }

    /// Elements sorted by canonical key.
    pub fn sorted(&self) -> Vec<Transformation> {
        let mut v = self.elements.clone();
        v.sort_unstable();
        v
    }

    /// Checks `a b` is a member for all members `a`, `b`.
    pub fn is_closed(&self) -> bool {
        let els = &self.elements;
        par::map_chunks(els, 64, |chunk| {
            chunk
                .iter()
                .all(|a| els.iter().all(|b| self.contains(&a.then(b))))
        })
        .into_iter()
        .all(|ok| ok)
    }
}

impl<'a> IntoIterator for &'a Semigroup {
    type Item = &'a Transformation;
    type IntoIter = std::slice::Iter<'a, Transformation>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// The least composition-closed set containing `gens`.
///
/// Elements are ordered breadth-first by word length: first the distinct
/// generators in the given order, then each further level sorted by canonical
/// key. Levels are expanded by multiplying on the right by generators only,
/// which reaches every product `g1 .. gk`. An empty generator list gives an
/// empty semigroup over zero states.
pub fn close(gens: &[Transformation]) -> Result<Semigroup> {
    let Some(first) = gens.first() else {
        return Ok(Semigroup::empty(0));
    };
    let mut s = Semigroup::empty(first.n());
    for g in gens {
        s.insert(*g, true)?;
    }
    let gens = s.generators();
    let mut frontier = gens.clone();
    while !frontier.is_empty() {
        let seen = &s;
        let parts = par::map_chunks(&frontier, 256, |chunk| {
            let mut local = FxHashSet::default();
            for a in chunk {
                for g in &gens {
                    let p = a.then(g);
                    if !seen.contains(&p) {
                        local.insert(p);
                    }
                }
            }
            local
        });
        let mut next: Vec<Transformation> = parts.into_iter().flatten().collect();
        next.sort_unstable();
        next.dedup();
        for t in &next {
            s.insert(*t, false)?;
        }
        frontier = next;
    }
    Ok(s)
}

/// Membership in `B_bf(n)`: `0` has no preimage, `n-2` and `n-1` go to `n-1`,
/// and for every `j >= 1` either `0 t^j = n-1` or `0 t^j` differs from
/// `q t^j` for every `0 < q < n-1`.
///
/// Checking `j = 1..=n` decides the condition for all `j`. From `j = n-1` on,
/// both `0 t^j` and `q t^j` lie on cycles of `t`, where `t` acts as a
/// permutation, so whether they coincide no longer changes.
pub fn in_bbf(t: &Transformation) -> bool {
    let n = t.n();
    if n < 2 {
        return false;
    }
    let empty = n - 1;
    if t.image_mask() & 1 != 0 || t.apply(empty) != empty || t.apply(n - 2) != empty {
        return false;
    }
    let mut cur = *t;
    for _ in 1..=n {
        let a = cur.apply(0);
        if a != empty && (1..empty).any(|q| cur.apply(q) == a) {
            return false;
        }
        cur = cur.then(t);
    }
    true
}

fn is_middle(n: usize, q: State) -> bool {
    q >= 1 && q + 3 <= n
}

/// Membership in `W>=6(n)`.
pub fn in_wge6(t: &Transformation) -> bool {
    let n = t.n();
    if n < 3 || !in_bbf(t) {
        return false;
    }
    let p = t.apply(0);
    p >= n - 2 || (is_middle(n, p) && (1..n - 2).all(|q| t.apply(q) >= n - 2))
}

/// Membership in `W<=5(n)`: on `Q_M` the map is injective except that
/// several states may share the image `n-1`.
pub fn in_wle5(t: &Transformation) -> bool {
    let n = t.n();
    if n < 3 || !in_bbf(t) {
        return false;
    }
    let mut seen = 0u32;
    for q in 1..n - 2 {
        let x = t.apply(q);
        if x == n - 1 {
            continue;
        }
        if seen & (1 << x) != 0 {
            return false;
        }
        seen |= 1 << x;
    }
    true
}

/// Largest `n` accepted by the exhaustive enumerations.
pub const MAX_ENUM_STATES: usize = 8;

fn guard(n: usize, min: usize, what: &str) -> Result<()> {
    if n < min {
        return Err(Error::Domain(format!("{what} needs n >= {min}, got {n}")));
    }
    if n > MAX_ENUM_STATES {
        return Err(Error::ResourceGuard(format!(
            "{what} is limited to n <= {MAX_ENUM_STATES}, got {n}"
        )));
    }
    Ok(())
}

/// All of `B_bf(n)` in canonical key order, `2 <= n <= 8`.
///
/// Only maps with `n-2, n-1 -> n-1` and `0` outside the image are scanned,
/// `(n-1)^(n-2)` candidates in all.
pub fn enumerate_bbf(n: usize) -> Result<Semigroup> {
    guard(n, 2, "B_bf enumeration")?;
    let free = n - 2;
    let radix = n - 1;
    let total = radix.pow(free as u32);
    let found = par::map_range(total, |mut code| {
        let mut img = vec![n - 1; n];
        for q in (0..free).rev() {
            img[q] = 1 + code % radix;
            code /= radix;
        }
        let t = Transformation::from_images(&img);
        in_bbf(&t).then_some(t)
    });
    Semigroup::from_set(n, found.into_iter().flatten())
}

/// Builds every map that agrees with `base` outside `free` and sends each
/// state of `free` into `targets`, in canonical key order.
fn product_maps(base: &Transformation, free: &[State], targets: &[State]) -> Vec<Transformation> {
    let mut out = Vec::new();
    let mut digits = vec![0usize; free.len()];
    loop {
        let mut t = *base;
        for (q, d) in free.iter().zip(&digits) {
            t.set(*q, targets[*d]);
        }
        out.push(t);
        let mut i = free.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < targets.len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Type 1 of `W>=6(n)`: `{0, n-2, n-1} -> n-1`, `Q_M` into `Q \ {0}`.
fn wge6_type1(n: usize) -> Vec<Transformation> {
    let base = Transformation::constant(n, n - 1);
    let middle: Vec<State> = (1..n - 2).collect();
    let targets: Vec<State> = (1..n).collect();
    product_maps(&base, &middle, &targets)
}

/// Type 2: `0 -> n-2`, `{n-2, n-1} -> n-1`, `Q_M` into `Q \ {0, n-2}`.
fn wge6_type2(n: usize) -> Vec<Transformation> {
    let mut base = Transformation::constant(n, n - 1);
    base.set(0, n - 2);
    let middle: Vec<State> = (1..n - 2).collect();
    let targets: Vec<State> = (1..n - 2).chain([n - 1]).collect();
    product_maps(&base, &middle, &targets)
}

/// Type 3: `0 -> q` for `q` in `Q_M`, `Q_M` into `{n-2, n-1}`.
fn wge6_type3(n: usize) -> Vec<Transformation> {
    let middle: Vec<State> = (1..n - 2).collect();
    let mut out = Vec::new();
    for &q in &middle {
        let mut base = Transformation::constant(n, n - 1);
        base.set(0, q);
        out.extend(product_maps(&base, &middle, &[n - 2, n - 1]));
    }
    out
}

/// `W>=6(n)` built type by type, in canonical key order.
pub fn enumerate_wge6(n: usize) -> Result<Semigroup> {
    if n < 3 {
        return Err(Error::Domain(format!("W>=6 needs n >= 3, got {n}")));
    }
    if n > 10 {
        return Err(Error::ResourceGuard(format!(
            "W>=6 construction is limited to n <= 10, got {n}"
        )));
    }
    let mut all = wge6_type1(n);
    all.extend(wge6_type2(n));
    all.extend(wge6_type3(n));
    all.sort_unstable();
    Semigroup::from_set(n, all)
}

/// `(n-1)^(n-3) + (n-2)^(n-3) + (n-3) 2^(n-3)`, the size of `W>=6(n)`.
pub fn wge6_size(n: usize) -> u64 {
    assert!(n >= 3);
    let e = (n - 3) as u32;
    let n = n as u64;
    (n - 1).pow(e) + (n - 2).pow(e) + (n - 3) * 2u64.pow(e)
}

/// `(n-2)^(n-3) + (n-3) 2^(n-3) - 1`, the witness alphabet size.
pub fn witness_alphabet_size(n: usize) -> u64 {
    assert!(n >= 4);
    let e = (n - 3) as u32;
    let n = n as u64;
    (n - 2).pow(e) + (n - 3) * 2u64.pow(e) - 1
}

/// `W<=5(n)` in canonical key order, `3 <= n <= 8`.
pub fn enumerate_wle5(n: usize) -> Result<Semigroup> {
    guard(n, 3, "W<=5 enumeration")?;
    let bbf = enumerate_bbf(n)?;
    Semigroup::from_set(n, bbf.iter().copied().filter(in_wle5))
}

/// Letters of the witness automaton `W(n)`, `n >= 4`: the `b_i` in ascending
/// `i`, then the `c` letters, then the `d` letters grouped by the image of
/// `0`, each group in canonical key order.
pub fn witness_letters(n: usize) -> Result<Vec<Transformation>> {
    if n < 4 {
        return Err(Error::Domain(format!("witness needs n >= 4, got {n}")));
    }
    if n > 10 {
        return Err(Error::ResourceGuard(format!(
            "witness is limited to n <= 10, got {n}"
        )));
    }
    let empty = n - 1;
    let fin = n - 2;
    let mut letters = Vec::new();
    for i in 1..=n - 3 {
        let mut b = Transformation::identity(n);
        b.set(0, empty);
        b.set(i, fin);
        b.set(fin, empty);
        letters.push(b);
    }
    let mut c_all = wge6_type2(n);
    c_all.sort_unstable();
    let mut excluded = Transformation::constant(n, empty);
    excluded.set(0, fin);
    letters.extend(c_all.into_iter().filter(|t| *t != excluded));
    let mut d_all = wge6_type3(n);
    d_all.sort_unstable();
    letters.extend(d_all.into_iter().filter(|t| (1..fin).any(|q| t.apply(q) != empty)));
    Ok(letters)
}

/// The witness automaton `W(n)`: initial `0`, final `n-2`, one letter per
/// witness transformation.
pub fn witness_dfa(n: usize) -> Result<Dfa> {
    let letters = witness_letters(n)?;
    Dfa::new(n, letters, 0, vec![n - 2])
}

/// Collision and focus status of one unordered pair of middle states.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairStatus {
    pub pair: (State, State),
    /// Some `t` with `0 t` in the pair and `r t` the other state, `r` middle.
    pub colliding_witness: Option<Transformation>,
    /// Some `(u, r)` with both states mapped by `u` to `r`, `r` in
    /// `Q_M ∪ {n-2}`.
    pub focused_witness: Option<(Transformation, State)>,
}

impl PairStatus {
    pub fn is_colliding(&self) -> bool {
        self.colliding_witness.is_some()
    }

    pub fn is_focused(&self) -> bool {
        self.focused_witness.is_some()
    }
}

/// Unordered pairs `p < q` of middle states, lexicographically.
pub fn middle_pairs(n: usize) -> Vec<(State, State)> {
    let mut v = Vec::new();
    if n >= 5 {
        for p in 1..n - 2 {
            for q in p + 1..n - 2 {
                v.push((p, q));
            }
        }
    }
    v
}

/// Index of pair `(p, q)`, `p < q`, in [`middle_pairs`] order.
pub fn pair_index(n: usize, p: State, q: State) -> usize {
    let (p, q) = if p < q { (p, q) } else { (q, p) };
    let m = n - 3;
    // Pairs starting at 1..p come first.
    let before = (p - 1) * (2 * m - p) / 2;
    before + (q - p - 1)
}

/// Bitmasks over [`middle_pairs`] of the pairs collided and focused by `t`.
pub fn pair_masks(t: &Transformation) -> (u64, u64) {
    let n = t.n();
    let mut colliding = 0u64;
    let mut focused = 0u64;
    if n < 5 {
        return (0, 0);
    }
    let p = t.apply(0);
    if is_middle(n, p) {
        for r in 1..n - 2 {
            let q = t.apply(r);
            if is_middle(n, q) && q != p {
                colliding |= 1 << pair_index(n, p, q);
            }
        }
    }
    for a in 1..n - 2 {
        let x = t.apply(a);
        if x == n - 1 {
            continue;
        }
        for b in a + 1..n - 2 {
            if t.apply(b) == x {
                focused |= 1 << pair_index(n, a, b);
            }
        }
    }
    (colliding, focused)
}

/// Collision/focus census of every pair of middle states. Witnesses are the
/// first members of `set` (in its order) that exhibit each property.
pub fn pair_statuses(set: &Semigroup) -> Result<Vec<PairStatus>> {
    let n = set.n();
    if set.is_empty() {
        return Err(Error::Precondition("pair census of an empty set".into()));
    }
    if n < 4 {
        return Err(Error::Precondition(format!("pair census needs n >= 4, got {n}")));
    }
    let pairs = middle_pairs(n);
    let mut out: Vec<PairStatus> = pairs
        .iter()
        .map(|&pair| PairStatus {
            pair,
            colliding_witness: None,
            focused_witness: None,
        })
        .collect();
    let mut open_c = (1u64 << pairs.len()) - 1;
    let mut open_f = open_c;
    for t in set {
        if open_c == 0 && open_f == 0 {
            break;
        }
        let (c, f) = pair_masks(t);
        let new_c = c & open_c;
        let new_f = f & open_f;
        for (i, st) in out.iter_mut().enumerate() {
            if new_c & (1 << i) != 0 {
                st.colliding_witness = Some(*t);
            }
            if new_f & (1 << i) != 0 {
                st.focused_witness = Some((*t, t.apply(st.pair.0)));
            }
        }
        open_c &= !new_c;
        open_f &= !new_f;
    }
    Ok(out)
}

/// Members of a closed set that are not a product of two members. Every
/// generating set must contain all of them.
pub fn irreducible_elements(set: &Semigroup) -> Result<Vec<Transformation>> {
    let els = set.elements();
    let parts = par::map_chunks(els, 16, |chunk| {
        let mut hit = vec![false; els.len()];
        for a in chunk {
            for b in els {
                match set.position(&a.then(b)) {
                    Some(i) => hit[i] = true,
                    None => return None,
                }
            }
        }
        Some(hit)
    });
    let mut reducible = vec![false; els.len()];
    for part in parts {
        let part = part.ok_or_else(|| {
            Error::Precondition("set is not closed under composition".into())
        })?;
        for (r, h) in reducible.iter_mut().zip(part) {
            *r |= h;
        }
    }
    Ok(els
        .iter()
        .zip(reducible)
        .filter(|(_, r)| !r)
        .map(|(t, _)| *t)
        .collect())
}

/// Bounds on the least number of generators of `W>=6(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankCertificate {
    pub n: usize,
    pub irreducible: usize,
    /// Middle states `q` such that every factorization `a b` of
    /// `(0 -> n-1)(q -> n-2)(n-2 -> n-1)` has `0 b = n-1` and
    /// `Q_M b` restricted to `Q_M` is `Q_M \ {q}`, and no irreducible element
    /// has that shape.
    /// Each such `q` needs its own generator outside the irreducibles.
    pub forced: usize,
    pub lower_bound: usize,
    pub witness_letters: usize,
    pub witness_generates: bool,
}

impl RankCertificate {
    pub fn is_tight(&self) -> bool {
        self.witness_generates && self.lower_bound == self.witness_letters
    }
}

/// Checks the generator lower bound of `W>=6(n)` by exhausting all
/// two-factor products, and the witness alphabet as the matching upper
/// bound.
pub fn wge6_rank_certificate(n: usize) -> Result<RankCertificate> {
    if n < 5 {
        return Err(Error::Domain(format!("rank certificate needs n >= 5, got {n}")));
    }
    if n > 7 {
        return Err(Error::ResourceGuard(format!(
            "rank certificate is limited to n <= 7, got {n}"
        )));
    }
    let w = enumerate_wge6(n)?;
    let irreducible = irreducible_elements(&w)?;
    let middle: Vec<State> = (1..n - 2).collect();
    let full: u32 = middle.iter().map(|&q| 1 << q).sum();
    let shape = |b: &Transformation, q: State| {
        let image = middle.iter().map(|&r| 1u32 << b.apply(r)).fold(0, |x, y| x | y);
        b.apply(0) == n - 1 && image & full == full & !(1 << q)
    };
    let targets: Vec<Transformation> = middle
        .iter()
        .map(|&q| {
            let mut t = Transformation::identity(n);
            t.set(0, n - 1);
            t.set(q, n - 2);
            t.set(n - 2, n - 1);
            t
        })
        .collect();
    let bad = par::map(w.elements(), |b| {
        let mut bad = 0u32;
        for a in w.iter() {
            let p = a.then(b);
            if let Some(i) = targets.iter().position(|t| *t == p) {
                if !shape(b, middle[i]) {
                    bad |= 1 << i;
                }
            }
        }
        bad
    })
    .into_iter()
    .fold(0, |x, y| x | y);
    let forced = middle
        .iter()
        .enumerate()
        .filter(|&(i, &q)| {
            bad & (1 << i) == 0
                && w.contains(&targets[i])
                && shape(&targets[i], q)
                && irreducible.iter().all(|g| !shape(g, q))
        })
        .count();
    let letters = witness_letters(n)?;
    let witness_generates = close(&letters)?.same_set(&w);
    Ok(RankCertificate {
        n,
        irreducible: irreducible.len(),
        forced,
        lower_bound: irreducible.len() + forced,
        witness_letters: letters.len(),
        witness_generates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transmap::Transformation as T;

    fn t(v: &[usize]) -> T {
        T::from_images(v)
    }

    /// Every self-map of an n-element set, in canonical order.
    fn all_maps(n: usize) -> Vec<T> {
        let base = T::identity(n);
        let all: Vec<State> = (0..n).collect();
        product_maps(&base, &all, &all)
    }

    #[test]
    fn in_bbf_examples() {
        assert!(in_bbf(&t(&[1, 2, 3, 3])));
        assert!(!in_bbf(&t(&[1, 1, 3, 3])));
        assert!(!in_bbf(&t(&[1, 2, 3, 0])));
    }

    #[test]
    fn in_bbf_horizon_matches_longer_check() {
        fn slow(t: &T) -> bool {
            let n = t.n();
            if t.image_mask() & 1 != 0 || t.apply(n - 1) != n - 1 || t.apply(n - 2) != n - 1 {
                return false;
            }
            (1..=2 * n).all(|j| {
                let a = t.apply_pow(0, j);
                a == n - 1 || (1..n - 1).all(|q| t.apply_pow(q, j) != a)
            })
        }
        for n in 2..=5 {
            for m in all_maps(n) {
                assert_eq!(in_bbf(&m), slow(&m), "{m:?}");
            }
        }
    }

    #[test]
    fn bbf_small_cases_match_exhaustive_filter() {
        for n in 2..=5 {
            let oracle: Vec<T> = all_maps(n).into_iter().filter(in_bbf).collect();
            assert_eq!(enumerate_bbf(n).unwrap().elements(), oracle.as_slice(), "n={n}");
        }
        assert_eq!(enumerate_bbf(2).unwrap().elements(), &[t(&[1, 1])]);
    }

    #[test]
    fn enumeration_guards() {
        assert!(matches!(enumerate_bbf(9), Err(Error::ResourceGuard(_))));
        assert!(matches!(enumerate_bbf(1), Err(Error::Domain(_))));
        assert!(matches!(enumerate_wle5(9), Err(Error::ResourceGuard(_))));
        assert!(matches!(witness_dfa(3), Err(Error::Domain(_))));
    }

    #[test]
    fn wge6_matches_definition_filter() {
        for n in 3..=6 {
            let oracle: Vec<T> = all_maps(n)
                .into_iter()
                .filter(|m| {
                    in_bbf(m) && {
                        let p = m.apply(0);
                        p >= n - 2 || (1..n - 2).all(|q| m.apply(q) >= n - 2)
                    }
                })
                .collect();
            let w = enumerate_wge6(n).unwrap();
            assert_eq!(w.elements(), oracle.as_slice(), "n={n}");
            assert_eq!(w.len() as u64, wge6_size(n));
        }
    }

    #[test]
    fn close_examples() {
        let id = T::identity(3);
        let c = close(&[id]).unwrap();
        assert_eq!(c.elements(), &[id]);
        assert!(close(&[]).unwrap().is_empty());
        let w4 = witness_letters(4).unwrap();
        assert_eq!(close(&w4).unwrap().len(), 7);
        let w6 = witness_letters(6).unwrap();
        assert_eq!(close(&w6).unwrap().len(), 213);
        assert!(close(&[t(&[0, 1]), t(&[0, 1, 2])]).is_err());
    }

    #[test]
    fn close_order_is_generators_then_levels() {
        let a = t(&[1, 2, 3, 3]);
        let c = close(&[a]).unwrap();
        assert_eq!(c.elements(), &[a, t(&[2, 3, 3, 3]), t(&[3, 3, 3, 3])]);
        assert_eq!(c.generators(), vec![a]);
        assert!(c.is_generator(&a));
        assert!(!c.is_generator(&t(&[3, 3, 3, 3])));
    }

    #[test]
    fn witness_alphabets() {
        let w4 = witness_letters(4).unwrap();
        assert_eq!(w4, vec![t(&[3, 2, 3, 3]), t(&[2, 1, 3, 3]), t(&[1, 2, 3, 3])]);
        assert_eq!(witness_letters(5).unwrap().len(), 16);
        assert_eq!(witness_letters(6).unwrap().len(), 87);
        for n in 4..=7 {
            assert_eq!(witness_letters(n).unwrap().len() as u64, witness_alphabet_size(n));
        }
    }

    #[test]
    fn wle5_small_cases() {
        for n in [3, 4] {
            assert!(enumerate_wle5(n).unwrap().same_set(&enumerate_wge6(n).unwrap()));
        }
        let w5 = enumerate_wle5(5).unwrap();
        let g5 = enumerate_wge6(5).unwrap();
        assert_eq!(g5.len(), 33);
        assert!(w5.len() > g5.len());
        assert!(w5.is_closed());
    }

    #[test]
    fn pair_index_matches_order() {
        for n in 5..=10 {
            for (i, (p, q)) in middle_pairs(n).into_iter().enumerate() {
                assert_eq!(pair_index(n, p, q), i);
                assert_eq!(pair_index(n, q, p), i);
            }
        }
    }

    #[test]
    fn census_examples() {
        let id = Semigroup::from_set(6, [T::identity(6)]).unwrap();
        let st = pair_statuses(&id).unwrap();
        assert_eq!(st.len(), 3);
        assert!(st.iter().all(|s| !s.is_colliding() && !s.is_focused()));
        assert!(pair_statuses(&Semigroup::empty(6)).is_err());
    }

    #[test]
    fn irreducible_examples() {
        let id = Semigroup::from_set(4, [T::identity(4)]).unwrap();
        assert!(irreducible_elements(&id).unwrap().is_empty());
        let w = enumerate_wge6(5).unwrap();
        let irr = irreducible_elements(&w).unwrap();
        for x in w.iter() {
            let rest: Vec<T> = w.iter().filter(|y| *y != x).copied().collect();
            assert_eq!(!close(&rest).unwrap().contains(x), irr.contains(x), "{x}");
        }
        assert_eq!(irr.len(), 14);
        let cert = wge6_rank_certificate(5).unwrap();
        assert_eq!((cert.forced, cert.lower_bound), (2, 16));
        assert!(cert.is_tight());
        let open = Semigroup::from_set(4, [t(&[1, 2, 3, 3])]).unwrap();
        assert!(matches!(irreducible_elements(&open), Err(Error::Precondition(_))));
    }
}
