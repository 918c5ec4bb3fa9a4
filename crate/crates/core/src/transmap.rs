//! Transformations of a finite state set `Q = {0, .., n-1}` and the digraph
//! queries used throughout the case analysis.
//!
//! Composition is written left to right: `s.then(&t)` (or [`compose`]) is the
//! transformation `q -> (q s) t`, i.e. apply `s` first, then `t`.

use std::fmt;
use std::io::{BufRead, Write};

use crate::{Error, Result};

/// Largest supported state count. Images are packed four bits each into a
/// `u64` for hashing, which caps `n` at 16.
pub const MAX_STATES: usize = 16;

/// A state index.
pub type State = usize;

/// A total self-map of `{0, .., n-1}` stored as a dense image array.
///
/// Equality, hashing and ordering are by `(n, images)`. Ordering is the
/// canonical key order used by every enumeration in the crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation {
    n: u8,
    img: [u8; MAX_STATES],
}

impl Transformation {
    /// Builds a transformation from its images, `images[q] = q t`.
    pub fn new(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n == 0 || n > MAX_STATES {
            return Err(Error::Dimension(format!(
                "state count {n} outside 1..={MAX_STATES}"
            )));
        }
        let mut img = [0u8; MAX_STATES];
        for (q, &x) in images.iter().enumerate() {
            if x >= n {
                return Err(Error::Dimension(format!(
                    "image {x} of state {q} is not a state of a {n}-state set"
                )));
            }
            img[q] = x as u8;
        }
        Ok(Self { n: n as u8, img })
    }

    /// Like [`Transformation::new`] but panics on invalid input. Meant for
    /// literals in tests and examples.
    pub fn from_images(images: &[usize]) -> Self {
        Self::new(images).expect("invalid transformation literal")
    }

    pub fn identity(n: usize) -> Self {
        assert!((1..=MAX_STATES).contains(&n), "state count {n} out of range");
        let mut img = [0u8; MAX_STATES];
        for (q, x) in img.iter_mut().enumerate().take(n) {
            *x = q as u8;
        }
        Self { n: n as u8, img }
    }

    /// The constant transformation `(Q -> q)`.
    pub fn constant(n: usize, q: State) -> Self {
        let mut t = Self::identity(n);
        for x in t.img.iter_mut().take(n) {
            *x = q as u8;
        }
        t
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// The image `q t`.
    #[inline]
    pub fn apply(&self, q: State) -> State {
        debug_assert!(q < self.n());
        self.img[q] as usize
    }

    /// `q t^i`.
    pub fn apply_pow(&self, mut q: State, i: usize) -> State {
        for _ in 0..i {
            q = self.apply(q);
        }
        q
    }

    pub fn images(&self) -> Vec<State> {
        self.img[..self.n()].iter().map(|&x| x as usize).collect()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.img[..self.n()]
    }

    /// Redirects `q` to `to`. Used when building transformations piecewise.
    #[inline]
    pub fn set(&mut self, q: State, to: State) {
        debug_assert!(q < self.n() && to < self.n());
        self.img[q] = to as u8;
    }

    /// Composition `self` then `other`: `q -> (q self) other`.
    #[inline]
    pub fn then(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut img = [0u8; MAX_STATES];
        for (dst, &src) in img.iter_mut().zip(&self.img[..self.n()]) {
            *dst = other.img[src as usize];
        }
        Self { n: self.n, img }
    }

    /// `self^k` for `k >= 1`; `self^0` is the identity.
    pub fn pow(&self, k: usize) -> Self {
        let mut r = Self::identity(self.n());
        for _ in 0..k {
            r = r.then(self);
        }
        r
    }

    /// Canonical byte encoding: `n` followed by the images.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut key = Vec::with_capacity(self.n() + 1);
        key.push(self.n);
        key.extend_from_slice(self.as_bytes());
        key
    }

    /// The images packed four bits each. Injective for a fixed `n`.
    #[inline]
    pub fn packed(&self) -> u64 {
        self.img[..self.n()]
            .iter()
            .enumerate()
            .fold(0u64, |acc, (q, &x)| acc | ((x as u64) << (4 * q)))
    }

    /// `Q t` as a bitmask.
    pub fn image_mask(&self) -> u32 {
        self.img[..self.n()].iter().fold(0, |m, &x| m | 1 << x)
    }

    pub fn is_fixed(&self, q: State) -> bool {
        self.apply(q) == q
    }

    /// True when `q` lies on a cycle of length at least 2.
    pub fn in_cycle(&self, q: State) -> bool {
        let mut p = self.apply(q);
        for _ in 0..self.n() {
            if p == q {
                return !self.is_fixed(q);
            }
            p = self.apply(p);
        }
        false
    }

    pub fn has_cycle(&self) -> bool {
        (0..self.n()).any(|q| self.in_cycle(q))
    }

    /// Fixed points in ascending order.
    pub fn fixed_points(&self) -> Vec<State> {
        (0..self.n()).filter(|&q| self.is_fixed(q)).collect()
    }

    /// States of in-degree 0 are exactly the ones outside the image.
    pub fn preimages(&self, q: State) -> Vec<State> {
        (0..self.n()).filter(|&p| self.apply(p) == q).collect()
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_bytes())
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.as_bytes().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl serde::Serialize for Transformation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.as_bytes().iter())
    }
}

impl<'de> serde::Deserialize<'de> for Transformation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<usize> = serde::Deserialize::deserialize(d)?;
        Transformation::new(&v).map_err(serde::de::Error::custom)
    }
}

/// `s` then `t`: the result maps `q` to `(q s) t`.
pub fn compose(s: &Transformation, t: &Transformation) -> Result<Transformation> {
    if s.n != t.n {
        return Err(Error::Dimension(format!(
            "cannot compose transformations of {} and {} states",
            s.n, t.n
        )));
    }
    Ok(s.then(t))
}

/// The semiconstant transformation `(S -> q)`: every state of `set` goes to
/// `q`, the rest are fixed.
pub fn semiconstant(set: &[State], q: State, n: usize) -> Result<Transformation> {
    if n == 0 || n > MAX_STATES {
        return Err(Error::Dimension(format!("state count {n} out of range")));
    }
    if q >= n {
        return Err(Error::Dimension(format!("target {q} is not a state")));
    }
    let mut t = Transformation::identity(n);
    for &p in set {
        if p >= n {
            return Err(Error::Dimension(format!("state {p} is not a state")));
        }
        t.set(p, q);
    }
    Ok(t)
}

/// The unitary transformation `(p -> q)`.
pub fn unitary(p: State, q: State, n: usize) -> Result<Transformation> {
    semiconstant(&[p], q, n)
}

/// The core of an orbit: its unique cycle or fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitCore {
    /// States of the cycle in traversal order, starting at the smallest.
    Cycle(Vec<State>),
    FixedPoint(State),
}

impl OrbitCore {
    pub fn states(&self) -> &[State] {
        match self {
            OrbitCore::Cycle(c) => c,
            OrbitCore::FixedPoint(f) => std::slice::from_ref(f),
        }
    }
}

/// Weakly connected components of the functional digraph `q -> q t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDecomposition {
    /// `orbit_id[q]` is the index of the orbit containing `q`.
    pub orbit_id: Vec<usize>,
    /// Per orbit, its cycle or fixed point. Orbits are numbered in order of
    /// their smallest state.
    pub cores: Vec<OrbitCore>,
}

impl OrbitDecomposition {
    pub fn len(&self) -> usize {
        self.cores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cores.is_empty()
    }

    pub fn members(&self, orbit: usize) -> Vec<State> {
        (0..self.orbit_id.len())
            .filter(|&q| self.orbit_id[q] == orbit)
            .collect()
    }

    pub fn cycles(&self) -> impl Iterator<Item = &[State]> {
        self.cores.iter().filter_map(|c| match c {
            OrbitCore::Cycle(c) => Some(c.as_slice()),
            OrbitCore::FixedPoint(_) => None,
        })
    }
}

/// Splits `t` into orbits and identifies each orbit's cycle or fixed point.
pub fn analyze(t: &Transformation) -> OrbitDecomposition {
    let n = t.n();
    // Every state reaches its orbit's core within n steps, so t^n maps each
    // state onto a core state.
    let mut root = (0..n).collect::<Vec<_>>();
    for _ in 0..n {
        for r in root.iter_mut() {
            *r = t.apply(*r);
        }
    }
    let mut core_of = vec![usize::MAX; n];
    let mut cores = Vec::new();
    let mut orbit_id = vec![usize::MAX; n];
    for q in 0..n {
        let r = root[q];
        if core_of[r] == usize::MAX {
            // Walk the cycle through r once, starting at its smallest state.
            let mut cyc = vec![r];
            let mut p = t.apply(r);
            while p != r {
                cyc.push(p);
                p = t.apply(p);
            }
            let start = cyc.iter().enumerate().min_by_key(|(_, &s)| s).unwrap().0;
            cyc.rotate_left(start);
            let id = cores.len();
            for &s in &cyc {
                core_of[s] = id;
            }
            cores.push(if cyc.len() == 1 {
                OrbitCore::FixedPoint(cyc[0])
            } else {
                OrbitCore::Cycle(cyc)
            });
        }
        orbit_id[q] = core_of[r];
    }
    OrbitDecomposition { orbit_id, cores }
}

/// Number of preimages of `q`.
pub fn in_degree(t: &Transformation, q: State) -> usize {
    (0..t.n()).filter(|&p| t.apply(p) == q).count()
}

/// Length of the path from `p` to `q` in `t`, `None` when `q` is unreachable.
pub fn distance(t: &Transformation, p: State, q: State) -> Option<usize> {
    let mut cur = p;
    for i in 0..t.n() {
        if cur == q {
            return Some(i);
        }
        cur = t.apply(cur);
    }
    None
}

/// All states with a path to `q`, including `q`. Only defined for states
/// outside cycles.
pub fn tree_of(t: &Transformation, q: State) -> Result<Vec<State>> {
    if t.in_cycle(q) {
        return Err(Error::Domain(format!("state {q} lies on a cycle")));
    }
    Ok((0..t.n())
        .filter(|&p| distance(t, p, q).is_some())
        .collect())
}

/// Writes a set of transformations in the line format: a header `n=<n>`
/// followed by one transformation per line.
pub fn write_lines<'a, W: Write>(
    mut w: W,
    n: usize,
    items: impl IntoIterator<Item = &'a Transformation>,
) -> Result<()> {
    writeln!(w, "n={n}")?;
    for t in items {
        if t.n() != n {
            return Err(Error::Dimension(format!(
                "transformation of {} states in a set of {n}",
                t.n()
            )));
        }
        writeln!(w, "{t}")?;
    }
    Ok(())
}

/// Reads the line format back. Rows keep their file order.
pub fn read_lines<R: BufRead>(r: R) -> Result<(usize, Vec<Transformation>)> {
    let mut lines = r.lines().enumerate();
    let n = loop {
        let Some((i, line)) = lines.next() else {
            return Err(Error::Parse("missing `n=` header".into()));
        };
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let value = line
            .strip_prefix("n=")
            .ok_or_else(|| Error::Parse(format!("line {}: expected `n=<int>`", i + 1)))?;
        break value
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
    };
    let mut out = Vec::new();
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let images = line
            .split_whitespace()
            .map(|x| x.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
        if images.len() != n {
            return Err(Error::Parse(format!(
                "line {}: expected {n} images, found {}",
                i + 1,
                images.len()
            )));
        }
        out.push(Transformation::new(&images).map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?);
    }
    Ok((n, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[usize]) -> Transformation {
        Transformation::from_images(v)
    }

    #[test]
    fn compose_examples() {
        assert_eq!(compose(&t(&[2, 1, 3, 3]), &t(&[1, 2, 3, 3])).unwrap(), t(&[3, 2, 3, 3]));
        assert_eq!(
            compose(&Transformation::identity(4), &t(&[1, 2, 3, 3])).unwrap(),
            t(&[1, 2, 3, 3])
        );
        assert_eq!(compose(&t(&[1, 2, 3, 3]), &t(&[1, 2, 3, 3])).unwrap(), t(&[2, 3, 3, 3]));
        assert!(matches!(
            compose(&t(&[0, 1]), &t(&[0, 1, 2])),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn semiconstant_examples() {
        assert_eq!(semiconstant(&[1, 2], 3, 5).unwrap(), t(&[0, 3, 3, 3, 4]));
        assert_eq!(semiconstant(&[], 0, 3).unwrap(), t(&[0, 1, 2]));
        assert_eq!(semiconstant(&[0, 1, 2], 2, 3).unwrap(), t(&[2, 2, 2]));
        assert_eq!(semiconstant(&[0, 1, 2], 2, 3).unwrap(), Transformation::constant(3, 2));
        assert_eq!(unitary(1, 0, 3).unwrap(), t(&[0, 0, 2]));
        assert!(semiconstant(&[5], 0, 3).is_err());
        assert!(semiconstant(&[0], 3, 3).is_err());
    }

    #[test]
    fn analyze_examples() {
        let d = analyze(&t(&[1, 2, 0, 3]));
        assert_eq!(d.len(), 2);
        assert_eq!(d.cores[0], OrbitCore::Cycle(vec![0, 1, 2]));
        assert_eq!(d.cores[1], OrbitCore::FixedPoint(3));
        assert_eq!(d.members(0), vec![0, 1, 2]);

        let d = analyze(&Transformation::identity(3));
        assert_eq!(d.len(), 3);
        assert!(d.cores.iter().all(|c| matches!(c, OrbitCore::FixedPoint(_))));

        let d = analyze(&t(&[1, 2, 3, 3]));
        assert_eq!(d.len(), 1);
        assert_eq!(d.cores[0], OrbitCore::FixedPoint(3));
        assert_eq!(d.members(0), vec![0, 1, 2, 3]);
    }

    #[test]
    fn cycle_starts_at_smallest_state() {
        let d = analyze(&t(&[3, 0, 1, 2, 4]));
        assert_eq!(d.cores[0], OrbitCore::Cycle(vec![0, 3, 2, 1]));
    }

    #[test]
    fn in_degree_examples() {
        assert_eq!(in_degree(&t(&[1, 2, 3, 3]), 3), 2);
        assert_eq!(in_degree(&Transformation::identity(4), 0), 1);
        assert_eq!(in_degree(&t(&[1, 2, 3, 3]), 0), 0);
    }

    #[test]
    fn distance_examples() {
        let x = t(&[1, 2, 3, 3]);
        assert_eq!(distance(&x, 0, 3), Some(3));
        assert_eq!(distance(&x, 2, 2), Some(0));
        assert_eq!(distance(&x, 3, 0), None);
    }

    #[test]
    fn tree_examples() {
        assert_eq!(tree_of(&t(&[1, 2, 3, 3]), 2).unwrap(), vec![0, 1, 2]);
        assert_eq!(tree_of(&t(&[1, 2, 3, 3]), 0).unwrap(), vec![0]);
        assert!(matches!(tree_of(&t(&[1, 2, 0, 3]), 0), Err(Error::Domain(_))));
    }

    #[test]
    fn line_format_is_exact() {
        let items = [t(&[1, 2, 3, 3]), t(&[0, 0, 3, 3])];
        let mut buf = Vec::new();
        write_lines(&mut buf, 4, &items).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "n=4\n1 2 3 3\n0 0 3 3\n");
        let (n, back) = read_lines(buf.as_slice()).unwrap();
        assert_eq!(n, 4);
        assert_eq!(back, items);
        assert!(read_lines("n=3\n0 1\n".as_bytes()).is_err());
        assert!(read_lines("0 1 2\n".as_bytes()).is_err());
        assert!(read_lines("n=3\n0 1 3\n".as_bytes()).is_err());
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        assert!(t(&[0, 2, 1]) < t(&[1, 0, 0]));
        assert_eq!(t(&[1, 2, 3, 3]).canonical_key(), vec![4, 1, 2, 3, 3]);
    }
}
