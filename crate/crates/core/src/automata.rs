//! Complete DFAs over an indexed alphabet: minimality, prefix/suffix-freeness
//! and the transition semigroup.

use std::collections::hash_map::Entry;
use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::semigroups::{self, Semigroup};
use crate::transmap::{State, Transformation, MAX_STATES};
use crate::{Error, Result};

/// Letter index into a [`Dfa`] alphabet.
pub type Letter = usize;

/// A complete DFA; letter `a` acts on the states as `delta[a]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    n: usize,
    delta: Vec<Transformation>,
    initial: State,
    finals: Vec<State>,
}

#[derive(Serialize, Deserialize)]
struct DfaJson {
    n: usize,
    alphabet: usize,
    delta: Vec<Vec<usize>>,
    initial: usize,
    finals: Vec<usize>,
}

impl Dfa {
    pub fn new(n: usize, delta: Vec<Transformation>, initial: State, mut finals: Vec<State>) -> Result<Self> {
        if n == 0 || n > MAX_STATES {
            return Err(Error::Dimension(format!("DFA needs 1..={MAX_STATES} states, got {n}")));
        }
        if let Some(t) = delta.iter().find(|t| t.n() != n) {
            return Err(Error::Dimension(format!(
                "letter acts on {} states, DFA has {n}",
                t.n()
            )));
        }
        if initial >= n {
            return Err(Error::Domain(format!("initial state {initial} out of range")));
        }
        finals.sort_unstable();
        finals.dedup();
        if let Some(f) = finals.iter().find(|&&f| f >= n) {
            return Err(Error::Domain(format!("final state {f} out of range")));
        }
        Ok(Self {
            n,
            delta,
            initial,
            finals,
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: DfaJson = serde_json::from_str(s)?;
        if raw.delta.len() != raw.alphabet {
            return Err(Error::Parse(format!(
                "alphabet is {} but delta has {} rows",
                raw.alphabet,
                raw.delta.len()
            )));
        }
        let mut delta = Vec::with_capacity(raw.delta.len());
        for row in &raw.delta {
            if row.len() != raw.n {
                return Err(Error::Dimension(format!(
                    "delta row of length {} for {} states",
                    row.len(),
                    raw.n
                )));
            }
            delta.push(Transformation::new(row)?);
        }
        Self::new(raw.n, delta, raw.initial, raw.finals)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&DfaJson {
            n: self.n,
            alphabet: self.delta.len(),
            delta: self.delta.iter().map(|t| t.images()).collect(),
            initial: self.initial,
            finals: self.finals.clone(),
        })
        .expect("serializable")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet_size(&self) -> usize {
        self.delta.len()
    }

    pub fn delta(&self) -> &[Transformation] {
        &self.delta
    }

    pub fn step(&self, q: State, a: Letter) -> State {
        self.delta[a].apply(q)
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn finals(&self) -> &[State] {
        &self.finals
    }

    pub fn is_final(&self, q: State) -> bool {
        self.finals.binary_search(&q).is_ok()
    }

    pub fn run(&self, from: State, word: &[Letter]) -> State {
        word.iter().fold(from, |q, &a| self.step(q, a))
    }

    pub fn accepts(&self, word: &[Letter]) -> bool {
        self.is_final(self.run(self.initial, word))
    }

    /// The same automaton with state `q` renamed to `perm[q]`.
    pub fn rename(&self, perm: &[State]) -> Result<Self> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n {
            return Err(Error::Dimension("permutation length differs from n".into()));
        }
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Domain("not a permutation".into()));
            }
        }
        let delta = self
            .delta
            .iter()
            .map(|t| {
                let mut img = vec![0; self.n];
                for q in 0..self.n {
                    img[perm[q]] = perm[t.apply(q)];
                }
                Transformation::from_images(&img)
            })
            .collect();
        let finals = self.finals.iter().map(|&f| perm[f]).collect();
        Self::new(self.n, delta, perm[self.initial], finals)
    }

    /// Shortest words from `from` to each state, `None` where unreachable.
    fn paths_from(&self, from: &[State]) -> Vec<Option<Vec<Letter>>> {
        let mut paths: Vec<Option<Vec<Letter>>> = vec![None; self.n];
        let mut queue = VecDeque::new();
        for &q in from {
            if paths[q].is_none() {
                paths[q] = Some(Vec::new());
                queue.push_back(q);
            }
        }
        while let Some(q) = queue.pop_front() {
            for (a, t) in self.delta.iter().enumerate() {
                let r = t.apply(q);
                if paths[r].is_none() {
                    let mut w = paths[q].clone().unwrap();
                    w.push(a);
                    paths[r] = Some(w);
                    queue.push_back(r);
                }
            }
        }
        paths
    }

    pub fn reachable(&self) -> Vec<bool> {
        self.paths_from(&[self.initial]).iter().map(Option::is_some).collect()
    }

    /// Nerode classes of all states by Moore refinement.
    pub fn equivalence_classes(&self) -> Vec<usize> {
        let mut class: Vec<usize> = (0..self.n).map(|q| self.is_final(q) as usize).collect();
        let mut count = 0;
        loop {
            let mut sigs: Vec<(Vec<usize>, State)> = (0..self.n)
                .map(|q| {
                    let mut s = Vec::with_capacity(self.delta.len() + 1);
                    s.push(class[q]);
                    s.extend(self.delta.iter().map(|t| class[t.apply(q)]));
                    (s, q)
                })
                .collect();
            sigs.sort();
            let mut next = vec![0; self.n];
            let mut k = 0;
            for i in 0..sigs.len() {
                if i > 0 && sigs[i].0 != sigs[i - 1].0 {
                    k += 1;
                }
                next[sigs[i].1] = k;
            }
            let new_count = k + 1;
            class = next;
            if new_count == count {
                return class;
            }
            count = new_count;
        }
    }

    /// States from which no final state is reachable.
    pub fn empty_states(&self) -> Vec<State> {
        (0..self.n)
            .filter(|&q| {
                self.paths_from(&[q])
                    .iter()
                    .enumerate()
                    .all(|(r, p)| p.is_none() || !self.is_final(r))
            })
            .collect()
    }
}

/// Every state reachable and no two states equivalent.
pub fn is_minimal(d: &Dfa) -> bool {
    if !d.reachable().iter().all(|&r| r) {
        return false;
    }
    let classes = d.equivalence_classes();
    let mut seen = vec![false; d.n()];
    classes.iter().all(|&c| !std::mem::replace(&mut seen[c], true))
}

/// Structural properties shared by all minimal bifix-free DFAs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureRule {
    /// There is an empty state.
    EmptyState,
    /// Exactly one final state, sent to the empty state by every letter.
    SingleFinal,
    /// Every transformation sends the initial state to the empty state by
    /// some power.
    InitialReachesEmpty,
}

/// A failed [`StructureRule`] with its witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureViolation {
    pub rule: StructureRule,
    pub word: Option<Vec<Letter>>,
    pub transformation: Option<Transformation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BifixReport {
    pub is_prefix_free: bool,
    pub is_suffix_free: bool,
    /// `w` and `wv` both accepted, `v` nonempty.
    pub prefix_witness: Option<(Vec<Letter>, Vec<Letter>)>,
    /// An accepted word with a proper accepted suffix.
    pub suffix_witness: Option<Vec<Letter>>,
    pub structure_violations: Vec<StructureViolation>,
    /// False when [`StructureRule::InitialReachesEmpty`] was skipped because
    /// the closure was too large.
    pub initial_reaches_empty_checked: bool,
}

impl BifixReport {
    pub fn is_bifix(&self) -> bool {
        self.is_prefix_free && self.is_suffix_free
    }
}

/// Closure size beyond which [`StructureRule::InitialReachesEmpty`] is not
/// evaluated.
pub const REACH_EMPTY_CLOSURE_LIMIT: usize = 200_000;

/// Decides prefix- and suffix-freeness of the accepted language.
pub fn is_bifix_free(d: &Dfa) -> Result<BifixReport> {
    if !is_minimal(d) {
        return Err(Error::Precondition("DFA is not minimal".into()));
    }
    let prefix_witness = prefix_witness(d);
    let suffix_witness = suffix_witness(d);
    let (structure_violations, initial_reaches_empty_checked) = structure(d);
    Ok(BifixReport {
        is_prefix_free: prefix_witness.is_none(),
        is_suffix_free: suffix_witness.is_none(),
        prefix_witness,
        suffix_witness,
        structure_violations,
        initial_reaches_empty_checked,
    })
}

fn prefix_witness(d: &Dfa) -> Option<(Vec<Letter>, Vec<Letter>)> {
    let to = d.paths_from(&[d.initial()]);
    for &f in d.finals() {
        let Some(w) = &to[f] else { continue };
        for a in 0..d.alphabet_size() {
            let from = d.paths_from(&[d.step(f, a)]);
            if let Some(g) = d.finals().iter().find(|&&g| from[g].is_some()) {
                let mut long = w.clone();
                long.push(a);
                long.extend(from[*g].as_ref().unwrap());
                return Some((w.clone(), long));
            }
        }
    }
    None
}

/// States of the automaton for `Σ⁺L`: a start state, a looping state that has
/// read a nonempty prefix, and a copy of `d`.
#[derive(Clone, Copy)]
enum Guess {
    Start,
    Loop,
    Copy(State),
}

/// BFS over `d` times the subset automaton of `Σ⁺L`. Subsets are bitmasks
/// over `Loop` and the copy of `Q`.
fn suffix_witness(d: &Dfa) -> Option<Vec<Letter>> {
    let n = d.n();
    let loop_bit = 1u32 << n;
    let accepting = |q: State, set: u32| {
        d.is_final(q)
            && ((set & loop_bit != 0 && d.is_final(d.initial()))
                || d.finals().iter().any(|&f| set & (1 << f) != 0))
    };
    let step_set = |set: u32, a: Letter, started: bool| -> u32 {
        let mut next = 0u32;
        let mut from = Vec::new();
        if !started {
            from.push(Guess::Start);
        }
        if set & loop_bit != 0 {
            from.push(Guess::Loop);
        }
        from.extend((0..n).filter(|&q| set & (1 << q) != 0).map(Guess::Copy));
        for g in from {
            match g {
                Guess::Start => next |= loop_bit,
                Guess::Loop => next |= loop_bit | (1 << d.step(d.initial(), a)),
                Guess::Copy(q) => next |= 1 << d.step(q, a),
            }
        }
        next
    };
    let mut seen = std::collections::HashMap::new();
    let mut queue = VecDeque::new();
    for a in 0..d.alphabet_size() {
        let key = (d.step(d.initial(), a), step_set(0, a, false));
        if let Entry::Vacant(e) = seen.entry(key) {
            e.insert(vec![a]);
            queue.push_back(key);
        }
    }
    while let Some((q, set)) = queue.pop_front() {
        let word = seen[&(q, set)].clone();
        if accepting(q, set) {
            return Some(word);
        }
        for a in 0..d.alphabet_size() {
            let key = (d.step(q, a), step_set(set, a, true));
            if let Entry::Vacant(e) = seen.entry(key) {
                let mut w = word.clone();
                w.push(a);
                e.insert(w);
                queue.push_back(key);
            }
        }
    }
    None
}

fn structure(d: &Dfa) -> (Vec<StructureViolation>, bool) {
    let mut out = Vec::new();
    let empties = d.empty_states();
    let to = d.paths_from(&[d.initial()]);
    if empties.is_empty() {
        out.push(StructureViolation {
            rule: StructureRule::EmptyState,
            word: None,
            transformation: None,
        });
    }
    let empty = empties.first().copied();
    match d.finals() {
        [f] => {
            if let Some(a) = (0..d.alphabet_size()).find(|&a| Some(d.step(*f, a)) != empty) {
                let mut w = to[*f].clone().unwrap_or_default();
                w.push(a);
                out.push(StructureViolation {
                    rule: StructureRule::SingleFinal,
                    word: Some(w),
                    transformation: None,
                });
            }
        }
        _ => out.push(StructureViolation {
            rule: StructureRule::SingleFinal,
            word: d.finals().get(1).and_then(|&f| to[f].clone()),
            transformation: None,
        }),
    }
    let mut checked = false;
    if let Some(e) = empty {
        if let Some((t, ok)) = initial_reaches_empty(d, e) {
            checked = ok;
            if let Some(t) = t {
                out.push(StructureViolation {
                    rule: StructureRule::InitialReachesEmpty,
                    word: None,
                    transformation: Some(t),
                });
            }
        }
    }
    (out, checked)
}

/// Searches the transition semigroup for a `t` with `q0 t^j != e` for all
/// `j`. Returns the counterexample (if any) and whether the search finished.
fn initial_reaches_empty(d: &Dfa, e: State) -> Option<(Option<Transformation>, bool)> {
    if d.alphabet_size() == 0 {
        return None;
    }
    let gens = d.delta();
    let mut seen = rustc_hash::FxHashSet::default();
    let mut queue: VecDeque<Transformation> = VecDeque::new();
    for g in gens {
        if seen.insert(*g) {
            queue.push_back(*g);
        }
    }
    let bad = |t: &Transformation| {
        let mut q = d.initial();
        for _ in 0..=d.n() {
            if q == e {
                return false;
            }
            q = t.apply(q);
        }
        q != e
    };
    while let Some(t) = queue.pop_front() {
        if bad(&t) {
            return Some((Some(t), true));
        }
        for g in gens {
            let p = t.then(g);
            if seen.insert(p) {
                if seen.len() > REACH_EMPTY_CLOSURE_LIMIT {
                    return Some((None, false));
                }
                queue.push_back(p);
            }
        }
    }
    Some((None, true))
}

/// Renames states so that `0` is initial, `n-2` the final state, `n-1` the
/// empty state and the remaining states keep their relative order.
pub fn normalize(d: &Dfa) -> Result<Dfa> {
    let report = is_bifix_free(d)?;
    if !report.is_bifix() {
        return Err(Error::Precondition("language is not bifix-free".into()));
    }
    let n = d.n();
    let [fin] = d.finals() else {
        return Err(Error::Domain(format!(
            "expected one final state, found {}",
            d.finals().len()
        )));
    };
    let empties = d.empty_states();
    let [empty] = empties.as_slice() else {
        return Err(Error::Domain("expected exactly one empty state".into()));
    };
    let mut perm = vec![usize::MAX; n];
    perm[*empty] = n - 1;
    perm[*fin] = n - 2;
    if d.initial() != *fin {
        perm[d.initial()] = 0;
    } else if n != 2 {
        return Err(Error::Domain("initial state is final".into()));
    }
    for (next, q) in (1..).zip(perm.iter_mut().filter(|q| **q == usize::MAX)) {
        *q = next;
    }
    d.rename(&perm)
}

/// Closure of the letter transformations under composition.
pub fn transition_semigroup(d: &Dfa) -> Result<Semigroup> {
    if d.alphabet_size() == 0 {
        return Ok(Semigroup::empty(d.n()));
    }
    semigroups::close(d.delta())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[usize]) -> Transformation {
        Transformation::from_images(v)
    }

    fn single_a() -> Dfa {
        Dfa::new(3, vec![t(&[1, 2, 2])], 0, vec![1]).unwrap()
    }

    /// {a, ab}: 0 -a-> 1 (final) -b-> 2 (final), everything else to 3.
    fn a_ab() -> Dfa {
        Dfa::new(4, vec![t(&[1, 3, 3, 3]), t(&[3, 2, 3, 3])], 0, vec![1, 2]).unwrap()
    }

    /// {a, ba}: 0 -a-> 2, 0 -b-> 1 -a-> 2, 2 final, 3 empty.
    fn a_ba() -> Dfa {
        Dfa::new(4, vec![t(&[2, 2, 3, 3]), t(&[1, 3, 3, 3])], 0, vec![2]).unwrap()
    }

    #[test]
    fn minimality_examples() {
        assert!(is_minimal(&semigroups::witness_dfa(4).unwrap()));
        assert!(is_minimal(&single_a()));
        let unreachable = Dfa::new(4, vec![t(&[1, 2, 2, 3])], 0, vec![1]).unwrap();
        assert!(!is_minimal(&unreachable));
        let twin_sinks = Dfa::new(4, vec![t(&[1, 2, 3, 3]), t(&[1, 3, 2, 2])], 0, vec![1]).unwrap();
        assert!(!is_minimal(&twin_sinks));
    }

    #[test]
    fn bifix_examples() {
        let r = is_bifix_free(&single_a()).unwrap();
        assert!(r.is_bifix() && r.structure_violations.is_empty() && r.initial_reaches_empty_checked);

        let r = is_bifix_free(&a_ab()).unwrap();
        assert!(!r.is_prefix_free);
        let (w, wv) = r.prefix_witness.unwrap();
        assert!(a_ab().accepts(&w) && a_ab().accepts(&wv) && wv.starts_with(&w) && wv.len() > w.len());
        assert!(r.structure_violations.iter().any(|v| v.rule == StructureRule::SingleFinal));

        let r = is_bifix_free(&a_ba()).unwrap();
        assert!(r.is_prefix_free && !r.is_suffix_free);
        let w = r.suffix_witness.unwrap();
        assert_eq!(w, vec![1, 0]);
    }

    #[test]
    fn bifix_requires_minimal() {
        let unreachable = Dfa::new(4, vec![t(&[1, 2, 2, 3])], 0, vec![1]).unwrap();
        assert!(matches!(is_bifix_free(&unreachable), Err(Error::Precondition(_))));
    }

    #[test]
    fn witness_is_bifix_free() {
        for n in 4..=6 {
            let r = is_bifix_free(&semigroups::witness_dfa(n).unwrap()).unwrap();
            assert!(r.is_bifix(), "n={n}");
            assert!(r.structure_violations.is_empty());
        }
    }

    #[test]
    fn transition_semigroup_examples() {
        let w4 = transition_semigroup(&semigroups::witness_dfa(4).unwrap()).unwrap();
        assert!(w4.same_set(&semigroups::enumerate_wge6(4).unwrap()));
        let w5 = transition_semigroup(&semigroups::witness_dfa(5).unwrap()).unwrap();
        assert_eq!(w5.len(), 33);
        let id = Dfa::new(3, vec![Transformation::identity(3)], 0, vec![1]).unwrap();
        assert_eq!(transition_semigroup(&id).unwrap().elements(), &[Transformation::identity(3)]);
    }

    #[test]
    fn json_round_trip() {
        let d = a_ba();
        let s = d.to_json();
        assert_eq!(
            s,
            r#"{"n":4,"alphabet":2,"delta":[[2,2,3,3],[1,3,3,3]],"initial":0,"finals":[2]}"#
        );
        assert_eq!(Dfa::from_json(&s).unwrap(), d);
        assert!(Dfa::from_json(r#"{"n":2,"alphabet":2,"delta":[[1,1]],"initial":0,"finals":[]}"#).is_err());
        assert!(Dfa::from_json(r#"{"n":2,"alphabet":1,"delta":[[1,2]],"initial":0,"finals":[]}"#).is_err());
        assert!(Dfa::from_json(r#"{"n":2,"alphabet":1,"delta":[[1,1]],"initial":5,"finals":[]}"#).is_err());
    }

    #[test]
    fn normalize_moves_states_to_conventions() {
        // {a} with the empty state first and the final state last.
        let d = Dfa::new(3, vec![t(&[0, 2, 0])], 1, vec![2]).unwrap();
        let m = normalize(&d).unwrap();
        assert_eq!(m.initial(), 0);
        assert_eq!(m.finals(), &[1]);
        assert_eq!(m.delta(), &[t(&[1, 2, 2])]);
        assert!(normalize(&a_ab()).is_err());
        let w = semigroups::witness_dfa(5).unwrap();
        assert_eq!(normalize(&w).unwrap(), w);
    }
}
