//! Sylvester's duads, trios, double trios and synthemes on `[1,6]`, graph
//! indexings, and the generator tags built from them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Duad(pub u8, pub u8);

impl Duad {
    pub fn new(a: u8, b: u8) -> Self {
        assert!(a != b && (1..=6).contains(&a) && (1..=6).contains(&b), "invalid duad");
        Duad(a.min(b), a.max(b))
    }

    pub fn contains(&self, x: u8) -> bool {
        self.0 == x || self.1 == x
    }

    pub fn mask(&self) -> u8 {
        1 << self.0 | 1 << self.1
    }
}

impl fmt::Display for Duad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{})", self.0, self.1)
    }
}

pub fn all_duads() -> Vec<Duad> {
    let mut v = Vec::new();
    for a in 1..=6 {
        for b in a + 1..=6 {
            v.push(Duad(a, b));
        }
    }
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trio(pub [u8; 3]);

impl Trio {
    pub fn new(mut x: [u8; 3]) -> Self {
        x.sort();
        assert!(x[0] != x[1] && x[1] != x[2] && x[0] >= 1 && x[2] <= 6, "invalid trio");
        Trio(x)
    }

    pub fn mask(&self) -> u8 {
        self.0.iter().fold(0, |m, &x| m | 1 << x)
    }

    pub fn complement(&self) -> Trio {
        let rest: Vec<u8> = (1..=6).filter(|x| !self.0.contains(x)).collect();
        Trio([rest[0], rest[1], rest[2]])
    }

    pub fn contains_duad(&self, d: Duad) -> bool {
        self.0.contains(&d.0) && self.0.contains(&d.1)
    }
}

impl fmt::Display for Trio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{}{})", self.0[0], self.0[1], self.0[2])
    }
}

/// A double trio, stored as its trio containing `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DoubleTrio(pub Trio);

impl DoubleTrio {
    pub fn from_trio(t: Trio) -> Self {
        if t.0.contains(&1) {
            DoubleTrio(t)
        } else {
            DoubleTrio(t.complement())
        }
    }

    pub fn trios(&self) -> [Trio; 2] {
        [self.0, self.0.complement()]
    }

    /// True iff the duad lies inside one of the two trios.
    pub fn splits_not(&self, d: Duad) -> bool {
        self.trios().iter().any(|t| t.contains_duad(d))
    }
}

impl fmt::Display for DoubleTrio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn all_double_trios() -> Vec<DoubleTrio> {
    let mut v = Vec::new();
    for b in 2..=6 {
        for c in b + 1..=6 {
            v.push(DoubleTrio(Trio([1, b, c])));
        }
    }
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syntheme(pub [Duad; 3]);

impl Syntheme {
    pub fn new(mut d: [Duad; 3]) -> Self {
        d.sort();
        assert_eq!(d.iter().fold(0u8, |m, x| m | x.mask()), 0b111_1110, "duads must partition [1,6]");
        Syntheme(d)
    }

    /// Incidence with a double trio: every duad meets every trio in one point.
    pub fn incident(&self, theta: DoubleTrio) -> bool {
        self.0.iter().all(|d| theta.trios().iter().all(|t| (d.mask() & t.mask()).count_ones() == 1))
    }
}

impl fmt::Display for Syntheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.0[0], self.0[1], self.0[2])
    }
}

pub fn all_synthemes() -> Vec<Syntheme> {
    let mut out = BTreeSet::new();
    for d1 in all_duads() {
        for d2 in all_duads() {
            if d1.mask() & d2.mask() != 0 {
                continue;
            }
            let rest: Vec<u8> = (1..=6).filter(|&x| !d1.contains(x) && !d2.contains(x)).collect();
            out.insert(Syntheme::new([d1, d2, Duad::new(rest[0], rest[1])]));
        }
    }
    out.into_iter().collect()
}

/// All permutations of `[1,6]` as images `p[i] = π(i+1)`, in lexicographic order.
pub fn permutations6() -> Vec<[u8; 6]> {
    let mut out = Vec::with_capacity(720);
    let mut cur = [1u8, 2, 3, 4, 5, 6];
    loop {
        out.push(cur);
        // next lexicographic permutation
        let Some(i) = (0..5).rev().find(|&i| cur[i] < cur[i + 1]) else { break };
        let j = (i + 1..6).rev().find(|&j| cur[j] > cur[i]).expect("exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

// Vertex names a..f as indices 0..5.
const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;
const E: usize = 4;
const F: usize = 5;

pub const TRIPOD_EDGES: [(usize, usize); 6] = [(B, E), (E, F), (F, C), (E, D), (F, D), (D, A)];
const THETA9: [[usize; 3]; 3] = [[A, E, F], [B, D, F], [C, D, E]];
pub const PENTA_EDGES: [(usize, usize); 5] = [(A, B), (B, C), (C, D), (D, E), (E, A)];
const THETA10: [[usize; 3]; 5] = [[A, C, D], [B, D, E], [C, E, A], [D, A, B], [E, B, C]];

fn parse_digits(s: &str, n: usize) -> Option<Vec<u8>> {
    let d: Vec<u8> = s
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| c.to_digit(10).map(|x| x as u8))
        .collect::<Option<_>>()?;
    if d.len() != n || d.iter().any(|&x| !(1..=6).contains(&x)) {
        return None;
    }
    let set: BTreeSet<u8> = d.iter().copied().collect();
    (set.len() == n).then_some(d)
}

/// An indexing of the tripod, written `[t(a)…t(f)]`; canonical when the arms
/// `(a,d), (b,e), (c,f)` are ordered by their leaf labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TripodIndex(pub [u8; 6]);

impl TripodIndex {
    pub fn new(labels: [u8; 6]) -> Self {
        let mut arms = [(labels[A], labels[D]), (labels[B], labels[E]), (labels[C], labels[F])];
        arms.sort();
        TripodIndex([arms[0].0, arms[1].0, arms[2].0, arms[0].1, arms[1].1, arms[2].1])
    }

    pub fn all() -> Vec<TripodIndex> {
        let set: BTreeSet<TripodIndex> = permutations6().into_iter().map(TripodIndex::new).collect();
        set.into_iter().collect()
    }

    pub fn duads(&self) -> Vec<Duad> {
        let mut v: Vec<Duad> = TRIPOD_EDGES.iter().map(|&(x, y)| Duad::new(self.0[x], self.0[y])).collect();
        v.sort();
        v
    }

    pub fn double_trios(&self) -> Vec<DoubleTrio> {
        let mut v: Vec<DoubleTrio> = THETA9
            .iter()
            .map(|t| DoubleTrio::from_trio(Trio::new([self.0[t[0]], self.0[t[1]], self.0[t[2]]])))
            .collect();
        v.sort();
        v
    }

    /// The seven duads of the `Γ₇` graph obtained by joining the two leaves
    /// whose labels lie in the trio of `theta` meeting the leaves in two points.
    pub fn gamma7_duads(&self, theta: DoubleTrio) -> Vec<Duad> {
        let leaves = [self.0[A], self.0[B], self.0[C]];
        let trio = theta
            .trios()
            .into_iter()
            .find(|t| leaves.iter().filter(|x| t.0.contains(x)).count() == 2)
            .expect("one trio meets the leaves in a duad");
        let pair: Vec<u8> = leaves.iter().copied().filter(|x| trio.0.contains(x)).collect();
        let mut v = self.duads();
        v.push(Duad::new(pair[0], pair[1]));
        v.sort();
        v
    }
}

impl fmt::Display for TripodIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for x in self.0 {
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// An indexing of the pentagon `a-b-c-d-e-a` (vertex `f` isolated), written
/// `[p(a)…p(e)]`; canonical as the least rotation/reflection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PentaIndex(pub [u8; 5]);

impl PentaIndex {
    pub fn new(cycle: [u8; 5]) -> Self {
        let mut best: Option<[u8; 5]> = None;
        for r in 0..5 {
            for dir in [1usize, 4] {
                let mut c = [0u8; 5];
                for (k, ck) in c.iter_mut().enumerate() {
                    *ck = cycle[(r + dir * k) % 5];
                }
                if best.is_none_or(|b| c < b) {
                    best = Some(c);
                }
            }
        }
        PentaIndex(best.expect("nonempty"))
    }

    pub fn all() -> Vec<PentaIndex> {
        let set: BTreeSet<PentaIndex> = permutations6().into_iter().map(|p| PentaIndex::new([p[0], p[1], p[2], p[3], p[4]])).collect();
        set.into_iter().collect()
    }

    pub fn labels(&self) -> [u8; 6] {
        let f = (1..=6).find(|x| !self.0.contains(x)).expect("one label is free");
        [self.0[0], self.0[1], self.0[2], self.0[3], self.0[4], f]
    }

    pub fn duads(&self) -> Vec<Duad> {
        let l = self.labels();
        let mut v: Vec<Duad> = PENTA_EDGES.iter().map(|&(x, y)| Duad::new(l[x], l[y])).collect();
        v.sort();
        v
    }

    pub fn double_trios(&self) -> Vec<DoubleTrio> {
        let l = self.labels();
        let mut v: Vec<DoubleTrio> = THETA10.iter().map(|t| DoubleTrio::from_trio(Trio::new([l[t[0]], l[t[1]], l[t[2]]]))).collect();
        v.sort();
        v
    }
}

impl fmt::Display for PentaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for x in self.0 {
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// Names of the extra-automorphisms, by wall family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorTag {
    G5(u8),
    G6(DoubleTrio, DoubleTrio),
    G7(u8),
    G8(Duad),
    G9(TripodIndex),
    G10(PentaIndex),
}

impl GeneratorTag {
    pub fn g6(a: DoubleTrio, b: DoubleTrio) -> Self {
        assert!(a != b, "g6 needs two distinct double trios");
        GeneratorTag::G6(a.min(b), a.max(b))
    }

    pub fn family(&self) -> u8 {
        match self {
            GeneratorTag::G5(_) => 5,
            GeneratorTag::G6(..) => 6,
            GeneratorTag::G7(_) => 7,
            GeneratorTag::G8(_) => 8,
            GeneratorTag::G9(_) => 9,
            GeneratorTag::G10(_) => 10,
        }
    }

    pub fn all() -> Vec<GeneratorTag> {
        let mut v = Vec::new();
        v.extend((1..=6).map(GeneratorTag::G5));
        let dts = all_double_trios();
        for i in 0..dts.len() {
            for j in i + 1..dts.len() {
                v.push(GeneratorTag::g6(dts[i], dts[j]));
            }
        }
        v.extend((1..=6).map(GeneratorTag::G7));
        v.extend(all_duads().into_iter().map(GeneratorTag::G8));
        v.extend(TripodIndex::all().into_iter().map(GeneratorTag::G9));
        v.extend(PentaIndex::all().into_iter().map(GeneratorTag::G10));
        v
    }
}

impl fmt::Display for GeneratorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorTag::G5(n) => write!(f, "g5({n})"),
            GeneratorTag::G6(a, b) => write!(f, "g6({{{a},{b}}})"),
            GeneratorTag::G7(n) => write!(f, "g7({n})"),
            GeneratorTag::G8(d) => write!(f, "g8({d})"),
            GeneratorTag::G9(t) => write!(f, "g9({t})"),
            GeneratorTag::G10(p) => write!(f, "g10({p})"),
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("cannot parse generator tag {0:?}")]
pub struct TagParseError(pub String);

/// Normalises the TeX spelling (`\gamma_{6}(\{(123), (124)\})`) to tag syntax.
pub fn normalize_tex(s: &str) -> String {
    let mut t = s.replace("\\gamma", "g").replace("γ", "g").replace("\\sb", "_");
    t = t.replace("\\{", "{").replace("\\}", "}");
    let mut out = String::new();
    let mut chars = t.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '_' {
            if chars.peek() == Some(&'{') {
                chars.next();
                for d in chars.by_ref() {
                    if d == '}' {
                        break;
                    }
                    out.push(d);
                }
            }
            continue;
        }
        if !c.is_whitespace() {
            out.push(c);
        }
    }
    out
}

impl FromStr for GeneratorTag {
    type Err = TagParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || TagParseError(s.to_string());
        let t = normalize_tex(s);
        let t = t.strip_prefix('g').ok_or_else(err)?;
        let open = t.find('(').ok_or_else(err)?;
        let family: u8 = t[..open].parse().map_err(|_| err())?;
        let arg = t[open + 1..].strip_suffix(')').ok_or_else(err)?;
        let number = || -> Result<u8, TagParseError> {
            let n: u8 = arg.parse().map_err(|_| err())?;
            if (1..=6).contains(&n) {
                Ok(n)
            } else {
                Err(err())
            }
        };
        let trio = |s: &str| -> Result<Trio, TagParseError> {
            let d = parse_digits(s.trim_start_matches('(').trim_end_matches(')'), 3).ok_or_else(err)?;
            Ok(Trio::new([d[0], d[1], d[2]]))
        };
        match family {
            5 => Ok(GeneratorTag::G5(number()?)),
            7 => Ok(GeneratorTag::G7(number()?)),
            8 => {
                let d = parse_digits(arg.trim_start_matches('(').trim_end_matches(')'), 2).ok_or_else(err)?;
                Ok(GeneratorTag::G8(Duad::new(d[0], d[1])))
            }
            6 => {
                let inner = arg.strip_prefix('{').and_then(|x| x.strip_suffix('}')).ok_or_else(err)?;
                let (x, y) = inner.split_once(',').ok_or_else(err)?;
                let (a, b) = (DoubleTrio::from_trio(trio(x)?), DoubleTrio::from_trio(trio(y)?));
                if a == b {
                    return Err(err());
                }
                Ok(GeneratorTag::g6(a, b))
            }
            9 => {
                let d = parse_digits(arg.trim_start_matches('[').trim_end_matches(']'), 6).ok_or_else(err)?;
                Ok(GeneratorTag::G9(TripodIndex::new([d[0], d[1], d[2], d[3], d[4], d[5]])))
            }
            10 => {
                let d = parse_digits(arg.trim_start_matches('[').trim_end_matches(']'), 5).ok_or_else(err)?;
                Ok(GeneratorTag::G10(PentaIndex::new([d[0], d[1], d[2], d[3], d[4]])))
            }
            _ => Err(err()),
        }
    }
}

/// A signed sequence of generators `(g_m, …, g_1)`, read left to right as a
/// matrix product.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<(GeneratorTag, i8)>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&(t, e)| (t, -e)).collect())
    }

    pub fn rotate(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let n = v.len();
            v.rotate_left(k % n);
        }
        Word(v)
    }

    /// Cyclic words equal up to rotation and inversion.
    pub fn cyclically_equivalent(&self, other: &Word) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let inv = other.inverse();
        (0..self.len().max(1)).any(|k| {
            let r = self.rotate(k);
            r == *other || r == inv
        })
    }

    /// Plain text: letters separated by spaces, inverses as `^-1`.
    pub fn to_gap(&self) -> String {
        self.0
            .iter()
            .map(|(t, e)| if *e < 0 { format!("{t}^-1") } else { t.to_string() })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(t, e)| if *e < 0 { format!("{t}^-1") } else { t.to_string() }).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl FromStr for Word {
    type Err = TagParseError;

    /// Accepts `(g5(1), g7(1)^-1, …)` as well as the TeX spelling.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = normalize_tex(s);
        let t = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(&t);
        let mut letters = Vec::new();
        let mut depth = 0i32;
        let mut cur = String::new();
        for c in t.chars() {
            match c {
                '(' | '{' | '[' => depth += 1,
                ')' | '}' | ']' => depth -= 1,
                _ => {}
            }
            if c == ',' && depth == 0 {
                letters.push(std::mem::take(&mut cur));
            } else {
                cur.push(c);
            }
        }
        if !cur.is_empty() {
            letters.push(cur);
        }
        let mut out = Vec::new();
        for l in letters {
            let (body, e) = match l.strip_suffix("^-1") {
                Some(b) => (b.to_string(), -1),
                None => (l.clone(), 1),
            };
            out.push((body.parse::<GeneratorTag>()?, e));
        }
        Ok(Word(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(all_duads().len(), 15);
        assert_eq!(all_double_trios().len(), 10);
        assert_eq!(all_synthemes().len(), 15);
        assert_eq!(permutations6().len(), 720);
        assert_eq!(TripodIndex::all().len(), 120);
        assert_eq!(PentaIndex::all().len(), 72);
        assert_eq!(GeneratorTag::all().len(), 264);
    }

    #[test]
    fn syntheme_incidence() {
        for s in all_synthemes() {
            assert_eq!(all_double_trios().into_iter().filter(|&t| s.incident(t)).count(), 4);
        }
    }

    #[test]
    fn tags_round_trip() {
        for t in GeneratorTag::all() {
            assert_eq!(t.to_string().parse::<GeneratorTag>().unwrap(), t);
        }
        assert_eq!(GeneratorTag::G9(TripodIndex::new([2, 3, 4, 1, 5, 6])).to_string(), "g9([234156])");
        assert_eq!(GeneratorTag::G10(PentaIndex::new([1, 3, 5, 2, 6])).to_string(), "g10([13526])");
        assert_eq!("g6({(123), (124)})".parse::<GeneratorTag>().unwrap().to_string(), "g6({(123),(124)})");
        assert_eq!("\\gamma_{8}((12))".parse::<GeneratorTag>().unwrap().to_string(), "g8((12))");
        assert!("g5(7)".parse::<GeneratorTag>().is_err());
        assert!("g6({(123),(456)})".parse::<GeneratorTag>().is_err());
    }

    #[test]
    fn tex_words() {
        let w: Word = "(\\gamma_{7}(2), \\gamma_{5}(1), \\gamma_{8}((12)), \\gamma_{5}(1))".parse().unwrap();
        assert_eq!(w.to_string(), "(g7(2), g5(1), g8((12)), g5(1))");
        assert!(w.cyclically_equivalent(&w.rotate(1)));
        assert!(w.cyclically_equivalent(&w.inverse()));
        assert_eq!(w.inverse().to_gap(), "g5(1)^-1 g8((12))^-1 g5(1)^-1 g7(2)^-1");
    }

    #[test]
    fn theta_sets() {
        let t = TripodIndex::new([1, 2, 3, 4, 5, 6]);
        assert_eq!(t.double_trios().len(), 3);
        assert_eq!(t.duads().len(), 6);
        for th in t.double_trios() {
            assert_eq!(t.gamma7_duads(th).len(), 7);
        }
        let p = PentaIndex::new([1, 2, 3, 4, 5]);
        let dts = p.double_trios();
        assert_eq!(dts.iter().collect::<BTreeSet<_>>().len(), 5);
        assert_eq!(p.labels()[5], 6);
    }
}
