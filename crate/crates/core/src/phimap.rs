//! The injection `phi` from a transition semigroup of a bifix-free language
//! into `W>=6(n)`: case classification, construction of the image and an
//! injectivity audit.

use std::fmt;

use serde::Serialize;

use crate::par;
use crate::semigroups::{self, in_bbf, in_wge6, Semigroup};
use crate::transmap::{distance, in_degree, State, Transformation};
use crate::{Error, Result};

/// Smallest `n` for which the construction is guaranteed to land in
/// `W>=6(n)` and to be injective on every transition semigroup.
pub const BOUND_MIN_STATES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case {
    S1,
    C2_1,
    C2_2,
    C2_3,
    C2_4_1,
    C2_4_2,
    C2_4_3,
    C2_4_4,
    C2_4_5,
    C2_5_1,
    C2_5_2,
    C3_1,
    C3_2_1,
    C3_2_2,
    C3_2_3,
    C3_2_4,
    C3_3,
    C3_4_1,
    C3_4_2,
    C3_4_3,
    C3_5_1,
    C3_5_2,
    C3_5_3,
}

impl Case {
    pub const ALL: [Case; 23] = [
        Case::S1,
        Case::C2_1,
        Case::C2_2,
        Case::C2_3,
        Case::C2_4_1,
        Case::C2_4_2,
        Case::C2_4_3,
        Case::C2_4_4,
        Case::C2_4_5,
        Case::C2_5_1,
        Case::C2_5_2,
        Case::C3_1,
        Case::C3_2_1,
        Case::C3_2_2,
        Case::C3_2_3,
        Case::C3_2_4,
        Case::C3_3,
        Case::C3_4_1,
        Case::C3_4_2,
        Case::C3_4_3,
        Case::C3_5_1,
        Case::C3_5_2,
        Case::C3_5_3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Case::S1 => "1",
            Case::C2_1 => "2.1",
            Case::C2_2 => "2.2",
            Case::C2_3 => "2.3",
            Case::C2_4_1 => "2.4.1",
            Case::C2_4_2 => "2.4.2",
            Case::C2_4_3 => "2.4.3",
            Case::C2_4_4 => "2.4.4",
            Case::C2_4_5 => "2.4.5",
            Case::C2_5_1 => "2.5.1",
            Case::C2_5_2 => "2.5.2",
            Case::C3_1 => "3.1",
            Case::C3_2_1 => "3.2.1",
            Case::C3_2_2 => "3.2.2",
            Case::C3_2_3 => "3.2.3",
            Case::C3_2_4 => "3.2.4",
            Case::C3_3 => "3.3",
            Case::C3_4_1 => "3.4.1",
            Case::C3_4_2 => "3.4.2",
            Case::C3_4_3 => "3.4.3",
            Case::C3_5_1 => "3.5.1",
            Case::C3_5_2 => "3.5.2",
            Case::C3_5_3 => "3.5.3",
        }
    }

    pub fn supercase(self) -> u8 {
        match self {
            Case::S1 => 1,
            c if c <= Case::C2_5_2 => 2,
            _ => 3,
        }
    }

    pub fn is_split(self) -> bool {
        matches!(self, Case::C2_4_3 | Case::C3_2_1 | Case::C3_2_3)
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Case {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subsubcase {
    I,
    II,
}

impl Subsubcase {
    pub fn as_str(self) -> &'static str {
        match self {
            Subsubcase::I => "i",
            Subsubcase::II => "ii",
        }
    }
}

impl Serialize for Subsubcase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CaseLabel {
    pub case: Case,
    pub subsubcase: Option<Subsubcase>,
}

impl CaseLabel {
    fn plain(case: Case) -> Self {
        Self {
            case,
            subsubcase: None,
        }
    }

    fn split(case: Case, first: bool) -> Self {
        Self {
            case,
            subsubcase: Some(if first { Subsubcase::I } else { Subsubcase::II }),
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.subsubcase {
            Some(s) => write!(f, "{}({})", self.case, s.as_str()),
            None => write!(f, "{}", self.case),
        }
    }
}

/// The states and counts a case refers to. Fields a case does not use stay
/// empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CaseContext {
    pub p: State,
    /// Largest `k` with `p t^k` outside `{n-2, n-1}`; absent when `p` itself
    /// is in that set.
    pub k: Option<usize>,
    pub r: Option<State>,
    pub z: Option<State>,
    pub f: Option<State>,
    pub f1: Option<State>,
    pub f2: Option<State>,
    pub x: Option<State>,
    pub ell: Option<usize>,
    pub y: Option<State>,
    pub q_list: Vec<State>,
    pub r_list: Vec<State>,
    pub c: Option<usize>,
    pub q_m: Option<State>,
}

fn min_cycle_state(t: &Transformation) -> Option<(State, State)> {
    let r = (0..t.n()).find(|&q| t.in_cycle(q))?;
    let z = (0..t.n()).find(|&q| q != r && t.apply(q) == r && t.in_cycle(q))?;
    Some((r, z))
}

/// Fixed points other than `n-1` whose only preimage is themselves.
fn lonely_fixed_points(t: &Transformation) -> Vec<State> {
    (0..t.n() - 1)
        .filter(|&q| t.is_fixed(q) && in_degree(t, q) == 1)
        .collect()
}

/// `x t^l` for the largest `l` with `x t^l` outside `{x t^(l-1), n-2, n-1}`,
/// with that `l`. Requires `x t` itself to qualify.
fn walk(t: &Transformation, x: State) -> (usize, State) {
    let n = t.n();
    let mut ell = 1;
    let mut cur = t.apply(x);
    for _ in 0..n {
        let nxt = t.apply(cur);
        if nxt == cur || nxt >= n - 2 {
            break;
        }
        cur = nxt;
        ell += 1;
    }
    (ell, cur)
}

/// Among states passing `admit` with `x t` outside `{x, n-2, n-1}`, the one
/// with the largest `l`, ties broken by the smallest state.
fn choose_x(t: &Transformation, admit: impl Fn(State) -> bool) -> Option<(State, usize, State)> {
    let n = t.n();
    let mut best: Option<(State, usize, State)> = None;
    for x in 1..n {
        let xt = t.apply(x);
        if xt == x || xt >= n - 2 || !admit(x) {
            continue;
        }
        let (ell, top) = walk(t, x);
        if best.is_none_or(|(_, l, _)| ell > l) {
            best = Some((x, ell, top));
        }
    }
    best
}

fn unclassifiable(t: &Transformation, why: &str) -> Error {
    Error::Domain(format!("no case applies to {t:?}: {why}"))
}

/// Assigns `t` to the first case, in order, whose conditions hold.
pub fn classify(t: &Transformation) -> Result<(CaseLabel, CaseContext)> {
    let n = t.n();
    if n < 3 {
        return Err(Error::Domain(format!("case analysis needs n >= 3, got {n}")));
    }
    if !in_bbf(t) {
        return Err(Error::Precondition(format!("{t:?} is not in B_bf({n})")));
    }
    let p = t.apply(0);
    let mut ctx = CaseContext {
        p,
        ..Default::default()
    };
    if p < n - 2 {
        let mut k = 0;
        let mut cur = p;
        while t.apply(cur) < n - 2 && k < n {
            cur = t.apply(cur);
            k += 1;
        }
        ctx.k = Some(k);
    }
    if in_wge6(t) {
        return Ok((CaseLabel::plain(Case::S1), ctx));
    }
    let k = ctx.k.expect("p is a middle state outside W>=6");
    let top = t.apply_pow(p, k);
    if t.apply(top) == n - 1 {
        supercase2(t, ctx, k).map_err(|e| e.unwrap_or_else(|| unclassifiable(t, "supercase 2")))
    } else {
        supercase3(t, ctx, k, top).map_err(|e| e.unwrap_or_else(|| unclassifiable(t, "supercase 3")))
    }
}

type CaseResult = std::result::Result<(CaseLabel, CaseContext), Option<Error>>;

fn supercase2(t: &Transformation, mut ctx: CaseContext, k: usize) -> CaseResult {
    let n = t.n();
    let p = ctx.p;
    if let Some((r, z)) = min_cycle_state(t) {
        ctx.r = Some(r);
        ctx.z = Some(z);
        return Ok((CaseLabel::plain(Case::C2_1), ctx));
    }
    if k >= 1 {
        return Ok((CaseLabel::plain(Case::C2_2), ctx));
    }
    let lonely = lonely_fixed_points(t);
    if lonely.len() >= 2 {
        ctx.f1 = Some(lonely[0]);
        ctx.f2 = Some(lonely[1]);
        return Ok((CaseLabel::plain(Case::C2_3), ctx));
    }
    if let Some((x, ell, top)) = choose_x(t, |x| in_degree(t, x) == 0) {
        ctx.x = Some(x);
        ctx.ell = Some(ell);
        let end = t.apply(top);
        let xt = t.apply(x);
        let label = if end == n - 1 && ell >= 2 {
            CaseLabel::plain(Case::C2_4_1)
        } else if end == n - 1 && in_degree(t, xt) > 1 {
            ctx.y = (0..n).find(|&y| y != x && t.apply(y) == xt);
            CaseLabel::plain(Case::C2_4_2)
        } else if end == n - 1 {
            CaseLabel::split(Case::C2_4_3, p < xt)
        } else if end == n - 2 {
            CaseLabel::plain(Case::C2_4_4)
        } else {
            CaseLabel::plain(Case::C2_4_5)
        };
        return Ok((label, ctx));
    }
    let f = (1..n - 2).find(|&q| t.is_fixed(q)).ok_or(None)?;
    ctx.f = Some(f);
    let rs: Vec<State> = (1..n - 2).filter(|&q| q != p && t.apply(q) == n - 1).collect();
    if rs.len() >= 2 {
        ctx.r_list = rs;
        return Ok((CaseLabel::plain(Case::C2_5_1), ctx));
    }
    ctx.q_list = (1..n - 2).filter(|&q| t.apply(q) == n - 2).collect();
    Ok((CaseLabel::plain(Case::C2_5_2), ctx))
}

fn supercase3(t: &Transformation, mut ctx: CaseContext, k: usize, top: State) -> CaseResult {
    let n = t.n();
    let p = ctx.p;
    if k >= 1 {
        let qs: Vec<State> = (1..n - 2).filter(|&q| q != top && t.apply(q) == n - 2).collect();
        if qs.is_empty() {
            if in_degree(t, top) == 1 {
                return Ok((CaseLabel::plain(Case::C3_5_1), ctx));
            }
            let before = t.apply_pow(p, k - 1);
            ctx.y = (0..n).find(|&y| y != before && t.apply(y) == top);
            return Ok((CaseLabel::plain(Case::C3_5_2), ctx));
        }
        let c = qs
            .iter()
            .flat_map(|&qi| (0..n).filter_map(move |q| distance(t, q, qi)))
            .max()
            .unwrap_or(0);
        let x = (0..n)
            .find(|&q| qs.contains(&t.apply_pow(q, c)))
            .expect("some state reaches a q_i in c steps");
        ctx.c = Some(c);
        ctx.x = Some(x);
        ctx.q_m = Some(t.apply_pow(x, c));
        ctx.q_list = qs;
        return Ok((CaseLabel::plain(Case::C3_5_3), ctx));
    }
    ctx.q_list = (1..n - 2).filter(|&q| q != p && t.apply(q) == n - 2).collect();
    if let Some((r, z)) = min_cycle_state(t) {
        ctx.r = Some(r);
        ctx.z = Some(z);
        return Ok((CaseLabel::plain(Case::C3_1), ctx));
    }
    if let Some((x, ell, top)) = choose_x(t, |_| true) {
        ctx.x = Some(x);
        ctx.ell = Some(ell);
        let end = t.apply(top);
        let xt = t.apply(x);
        let label = if end == n - 1 && ell >= 2 {
            CaseLabel::split(Case::C3_2_1, ctx.q_list.iter().any(|&q| q < x))
        } else if end == n - 1 && in_degree(t, xt) > 1 {
            ctx.y = (0..n).find(|&y| y != x && t.apply(y) == xt);
            CaseLabel::plain(Case::C3_2_2)
        } else if end == n - 1 {
            CaseLabel::split(Case::C3_2_3, !ctx.q_list.is_empty() || p < xt)
        } else if end == top {
            CaseLabel::plain(Case::C3_2_4)
        } else {
            return Err(Some(unclassifiable(t, "a chain from x ends in n-2")));
        };
        return Ok((label, ctx));
    }
    let lonely = lonely_fixed_points(t);
    if lonely.len() >= 2 {
        ctx.f1 = Some(lonely[0]);
        ctx.f2 = Some(lonely[1]);
        return Ok((CaseLabel::plain(Case::C3_3), ctx));
    }
    let f = *lonely.first().ok_or(None)?;
    ctx.f = Some(f);
    let others: Vec<State> = (1..n - 2).filter(|&q| q != p && q != f).collect();
    ctx.q_list = others.iter().copied().filter(|&q| t.apply(q) == n - 2).collect();
    ctx.r_list = others.iter().copied().filter(|&q| t.apply(q) == n - 1).collect();
    let case = match ctx.q_list.len() {
        0 => Case::C3_4_3,
        1 => Case::C3_4_2,
        _ => Case::C3_4_1,
    };
    Ok((CaseLabel::plain(case), ctx))
}

/// Which image Case 2.3 assigns to `p`.
///
/// `Standard` sends `p` to `f1`, so `s` coincides with the Case 2.1 image of
/// the map that swaps `f1` and `f2`; both maps can occur in one transition
/// semigroup. `Amended` sends `p` to `f2`, the non-minimal cycle state, as in
/// Case 3.3.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    Standard,
    Amended,
}

/// Builds `phi(t)` from a classification.
pub fn construct(t: &Transformation, label: &CaseLabel, ctx: &CaseContext) -> Transformation {
    construct_with(t, label, ctx, Variant::Standard)
}

pub fn construct_with(
    t: &Transformation,
    label: &CaseLabel,
    ctx: &CaseContext,
    variant: Variant,
) -> Transformation {
    let n = t.n();
    let (fin, empty) = (n - 2, n - 1);
    let mut s = *t;
    if label.case == Case::S1 {
        return s;
    }
    let p = ctx.p;
    let k = ctx.k.unwrap_or(0);
    let first = label.subsubcase == Some(Subsubcase::I);
    let chain: Vec<State> = (0..=k).map(|i| t.apply_pow(p, i)).collect();
    let reverse_chain = |s: &mut Transformation| {
        for i in 1..=k {
            s.set(chain[i], chain[i - 1]);
        }
    };
    let qs = &ctx.q_list;
    let rs = &ctx.r_list;
    let x = ctx.x.unwrap_or(0);
    let xt = t.apply(x);
    let top = t.apply_pow(x, ctx.ell.unwrap_or(0));
    s.set(0, if label.case.supercase() == 2 { empty } else { fin });
    match label.case {
        Case::S1 => unreachable!(),
        Case::C2_1 => {
            s.set(p, ctx.r.unwrap());
            reverse_chain(&mut s);
        }
        Case::C2_2 | Case::C3_5_1 => {
            s.set(p, p);
            reverse_chain(&mut s);
        }
        Case::C2_3 => {
            let (f1, f2) = (ctx.f1.unwrap(), ctx.f2.unwrap());
            s.set(f1, f2);
            s.set(f2, f1);
            s.set(p, if variant == Variant::Amended { f2 } else { f1 });
        }
        Case::C2_4_1 | Case::C2_4_5 => s.set(p, top),
        Case::C2_4_2 => {
            let y = ctx.y.unwrap();
            s.set(p, y);
            s.set(xt, x);
            s.set(x, y);
        }
        Case::C2_4_3 => {
            s.set(p, x);
            s.set(xt, x);
            s.set(x, if first { fin } else { empty });
        }
        Case::C2_4_4 => s.set(p, fin),
        Case::C2_5_1 => {
            s.set(p, ctx.f.unwrap());
            rotate(&mut s, rs, true);
        }
        Case::C2_5_2 => {
            s.set(p, ctx.f.unwrap());
            rotate(&mut s, qs, false);
        }
        Case::C3_1 => {
            s.set(p, ctx.r.unwrap());
            send_all(&mut s, qs, p);
        }
        Case::C3_2_1 => {
            s.set(p, top);
            s.set(top, if first { top } else { empty });
            send_all(&mut s, qs, p);
        }
        Case::C3_2_2 => {
            let y = ctx.y.unwrap();
            s.set(p, y);
            s.set(xt, x);
            s.set(x, y);
            send_all(&mut s, qs, p);
        }
        Case::C3_2_3 => {
            s.set(p, x);
            s.set(xt, x);
            s.set(x, if first { x } else { empty });
            send_all(&mut s, qs, p);
        }
        Case::C3_2_4 => {
            s.set(p, top);
            for i in 1..=ctx.ell.unwrap() {
                s.set(t.apply_pow(x, i), t.apply_pow(x, i - 1));
            }
            s.set(x, p);
            send_all(&mut s, qs, x);
        }
        Case::C3_3 => {
            let (f1, f2) = (ctx.f1.unwrap(), ctx.f2.unwrap());
            s.set(f1, f2);
            s.set(f2, f1);
            s.set(p, f2);
            send_all(&mut s, qs, p);
        }
        Case::C3_4_1 => {
            s.set(p, ctx.f.unwrap());
            rotate(&mut s, qs, true);
            send_all(&mut s, rs, *qs.last().unwrap());
        }
        Case::C3_4_2 => {
            let f = ctx.f.unwrap();
            s.set(p, f);
            s.set(qs[0], f);
            send_all(&mut s, rs, p);
        }
        Case::C3_4_3 => {
            let f = ctx.f.unwrap();
            s.set(p, f);
            if let Some((&r1, rest)) = rs.split_first() {
                s.set(r1, p);
                send_all(&mut s, rest, f);
            }
        }
        Case::C3_5_2 => {
            let y = ctx.y.unwrap();
            s.set(p, y);
            s.set(y, empty);
            reverse_chain(&mut s);
        }
        Case::C3_5_3 => {
            s.set(p, ctx.x.unwrap());
            reverse_chain(&mut s);
            rotate(&mut s, qs, true);
        }
    }
    s
}

/// Cycles through `states` in ascending order (`forward`) or descending.
fn rotate(s: &mut Transformation, states: &[State], forward: bool) {
    let m = states.len();
    for i in 0..m {
        let j = if forward { (i + 1) % m } else { (i + m - 1) % m };
        s.set(states[i], states[j]);
    }
}

fn send_all(s: &mut Transformation, states: &[State], to: State) {
    for &q in states {
        s.set(q, to);
    }
}

pub fn phi(t: &Transformation) -> Result<Transformation> {
    phi_with(t, Variant::Standard)
}

pub fn phi_with(t: &Transformation, variant: Variant) -> Result<Transformation> {
    let (label, ctx) = classify(t)?;
    Ok(construct_with(t, &label, &ctx, variant))
}

/// Classification, image and codomain check of one element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiRecord {
    pub t: Transformation,
    pub label: CaseLabel,
    pub s: Transformation,
    pub in_wge6: bool,
}

pub fn phi_record(t: &Transformation, variant: Variant) -> Result<PhiRecord> {
    let (label, ctx) = classify(t)?;
    let s = construct_with(t, &label, &ctx, variant);
    Ok(PhiRecord {
        t: *t,
        label,
        s,
        in_wge6: in_wge6(&s),
    })
}

/// Two distinct elements with the same image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiCollision {
    pub s: Transformation,
    pub first: (Transformation, CaseLabel),
    pub second: (Transformation, CaseLabel),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectivityReport {
    pub n: usize,
    pub variant: Variant,
    pub size: usize,
    pub wge6_size: u64,
    pub injective: bool,
    pub image_in_wge6: bool,
    /// Images outside `W>=6(n)`, by canonical key of the preimage.
    pub outside: Vec<PhiRecord>,
    /// Sorted by canonical key of the shared image.
    pub collisions: Vec<PhiCollision>,
    pub has_colliding_pair: bool,
    /// `|T| < |W>=6(n)|`; only asserted when a colliding pair exists.
    pub strictly_smaller: bool,
    /// The witness of strictness for the first colliding pair, if any.
    pub sentinel: Option<Transformation>,
    pub sentinel_absent: Option<bool>,
    pub label_counts: Vec<(CaseLabel, usize)>,
}

impl InjectivityReport {
    /// Injective, inside `W>=6(n)`, and strictly smaller whenever a
    /// colliding pair exists.
    pub fn holds(&self) -> bool {
        self.injective
            && self.image_in_wge6
            && (!self.has_colliding_pair || (self.strictly_smaller && self.sentinel_absent == Some(true)))
    }
}

/// The transformation that no element of a semigroup with the colliding pair
/// `{p1, p2}` is mapped to: `0 -> n-1`, `p1, r1 -> p2`, `r2 <-> r3`,
/// `n-2 -> n-1`, all other states fixed, where `r1 < r2 < r3` are the
/// smallest middle states outside the pair.
pub fn sentinel(n: usize, p1: State, p2: State) -> Result<Transformation> {
    let rs: Vec<State> = (1..n.saturating_sub(2)).filter(|&q| q != p1 && q != p2).take(3).collect();
    if rs.len() < 3 || p1 == p2 || !(1..n - 2).contains(&p1) || !(1..n - 2).contains(&p2) {
        return Err(Error::Domain(format!(
            "sentinel needs two middle states and three more, n={n}"
        )));
    }
    let mut s = Transformation::identity(n);
    s.set(0, n - 1);
    s.set(n - 2, n - 1);
    s.set(p1, p2);
    s.set(rs[0], p2);
    s.set(rs[1], rs[2]);
    s.set(rs[2], rs[1]);
    Ok(s)
}

/// Applies `phi` to every element of `set` and checks injectivity, the
/// codomain, and the strict bound when `set` has a colliding pair.
pub fn audit_injectivity(set: &Semigroup) -> Result<InjectivityReport> {
    audit_injectivity_with(set, Variant::Standard)
}

pub fn audit_injectivity_with(set: &Semigroup, variant: Variant) -> Result<InjectivityReport> {
    let n = set.n();
    let records: Vec<Result<PhiRecord>> = par::map(set.elements(), |t| phi_record(t, variant));
    let records: Vec<PhiRecord> = records.into_iter().collect::<Result<_>>()?;
    let mut by_image: Vec<&PhiRecord> = records.iter().collect();
    by_image.sort_by_key(|r| (r.s, r.t));
    let mut collisions = Vec::new();
    for w in by_image.windows(2) {
        if w[0].s == w[1].s {
            collisions.push(PhiCollision {
                s: w[0].s,
                first: (w[0].t, w[0].label),
                second: (w[1].t, w[1].label),
            });
        }
    }
    let mut outside: Vec<PhiRecord> = records.iter().filter(|r| !r.in_wge6).cloned().collect();
    outside.sort_by_key(|r| r.t);
    let mut counts = std::collections::BTreeMap::new();
    for r in &records {
        *counts.entry(r.label).or_insert(0usize) += 1;
    }
    let wge6_size = semigroups::wge6_size(n);
    let colliding = if n >= 5 && !set.is_empty() {
        semigroups::pair_statuses(set)?
            .into_iter()
            .find(|st| st.is_colliding())
            .map(|st| st.pair)
    } else {
        None
    };
    let sentinel = match colliding {
        Some((p1, p2)) => sentinel(n, p1, p2).ok(),
        None => None,
    };
    let sentinel_absent = sentinel.map(|s| records.iter().all(|r| r.s != s));
    Ok(InjectivityReport {
        n,
        variant,
        size: set.len(),
        wge6_size,
        injective: collisions.is_empty(),
        image_in_wge6: outside.is_empty(),
        outside,
        collisions,
        has_colliding_pair: colliding.is_some(),
        strictly_smaller: (set.len() as u64) < wge6_size,
        sentinel,
        sentinel_absent,
        label_counts: counts.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[usize]) -> Transformation {
        Transformation::from_images(v)
    }

    fn label(v: &[usize]) -> CaseLabel {
        classify(&t(v)).unwrap().0
    }

    #[test]
    fn there_are_23_labels() {
        assert_eq!(Case::ALL.len(), 23);
        let mut names: Vec<_> = Case::ALL.iter().map(|c| c.as_str()).collect();
        names.dedup();
        assert_eq!(names.len(), 23);
        assert_eq!(Case::C2_5_2.supercase(), 2);
        assert_eq!(Case::C3_1.supercase(), 3);
    }

    #[test]
    fn supercase_one_is_identity() {
        for w in semigroups::enumerate_wge6(6).unwrap().iter() {
            let (l, _) = classify(w).unwrap();
            assert_eq!(l.case, Case::S1);
            assert_eq!(phi(w).unwrap(), *w);
        }
        assert_eq!(label(&[1, 6, 7, 7, 7, 7, 7, 7]).case, Case::S1);
    }

    #[test]
    fn chain_to_empty_without_cycle() {
        let x = t(&[1, 2, 7, 7, 7, 7, 7, 7]);
        let (l, ctx) = classify(&x).unwrap();
        assert_eq!(l.case, Case::C2_2);
        assert_eq!((ctx.p, ctx.k), (1, Some(1)));
        assert_eq!(phi(&x).unwrap(), t(&[7, 1, 1, 7, 7, 7, 7, 7]));
    }

    #[test]
    fn chain_to_final_without_branching() {
        let x = t(&[1, 2, 6, 7, 7, 7, 7, 7]);
        assert_eq!(label(&x.images()).case, Case::C3_5_1);
        assert_eq!(phi(&x).unwrap(), t(&[6, 1, 1, 7, 7, 7, 7, 7]));
    }

    #[test]
    fn hand_checked_labels() {
        // 2.1: cycle (2 3).
        let x = t(&[1, 7, 3, 2, 7, 7, 7, 7]);
        let (l, ctx) = classify(&x).unwrap();
        assert_eq!(l.case, Case::C2_1);
        assert_eq!((ctx.r, ctx.z), (Some(2), Some(3)));
        assert_eq!(phi(&x).unwrap(), t(&[7, 2, 3, 2, 7, 7, 7, 7]));
        // 2.3: fixed points 2 and 3 of in-degree 1.
        let x = t(&[1, 7, 2, 3, 7, 7, 7, 7]);
        assert_eq!(label(&x.images()).case, Case::C2_3);
        assert_eq!(phi(&x).unwrap(), t(&[7, 2, 3, 2, 7, 7, 7, 7]));
        // 2.4.4: 2 -> 3 -> 6.
        let x = t(&[1, 7, 3, 6, 7, 7, 7, 7]);
        assert_eq!(label(&x.images()).case, Case::C2_4_4);
        assert_eq!(phi(&x).unwrap(), t(&[7, 6, 3, 6, 7, 7, 7, 7]));
        // 3.4.3: fixed point 2, everything else to n-1.
        let x = t(&[1, 6, 2, 7, 7, 7, 7, 7]);
        let (l, ctx) = classify(&x).unwrap();
        assert_eq!(l.case, Case::C3_4_3);
        assert_eq!(ctx.r_list, vec![3, 4, 5]);
        assert_eq!(phi(&x).unwrap(), t(&[6, 2, 2, 1, 2, 2, 7, 7]));
    }

    #[test]
    fn rejects_outside_bbf() {
        assert!(matches!(classify(&t(&[1, 1, 3, 3])), Err(Error::Precondition(_))));
    }

    #[test]
    fn sentinel_shape() {
        let s = sentinel(8, 2, 4).unwrap();
        assert_eq!(s, t(&[7, 4, 4, 5, 4, 3, 7, 7]));
        assert!(in_wge6(&s));
        assert!(sentinel(6, 1, 2).is_err());
    }
}
