//! Finite root systems of (−2)-vectors: simple roots and ADE types.

use std::collections::HashSet;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::exactalg::matrix::vec_sub;
use crate::exactalg::Rational;
use crate::lattice::{Lattice, QVector};

/// Positive roots under the ordering `positive`, minus those that split as a
/// sum of two positive roots.
pub fn simple_roots(roots: &[QVector], positive: impl Fn(&QVector) -> bool) -> Vec<QVector> {
    let pos: Vec<QVector> = roots.iter().filter(|r| positive(r)).cloned().collect();
    let set: HashSet<&QVector> = pos.iter().collect();
    let mut out: Vec<QVector> = pos
        .iter()
        .filter(|r| !pos.iter().any(|s| *s != **r && set.contains(&vec_sub(r, s)) && positive(&vec_sub(r, s))))
        .cloned()
        .collect();
    out.sort();
    out
}

/// Positivity by the sign of the first nonzero coordinate.
pub fn lex_positive(v: &QVector) -> bool {
    v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ade {
    A(usize),
    D(usize),
    E(usize),
}

impl fmt::Display for Ade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ade::A(n) => write!(f, "A{n}"),
            Ade::D(n) => write!(f, "D{n}"),
            Ade::E(n) => write!(f, "E{n}"),
        }
    }
}

/// A sorted list of ADE components.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RootType(pub Vec<Ade>);

impl RootType {
    pub fn rank(&self) -> usize {
        self.0
            .iter()
            .map(|c| match c {
                Ade::A(n) | Ade::D(n) | Ade::E(n) => *n,
            })
            .sum()
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let j = (i..self.0.len()).find(|&j| self.0[j] != self.0[i]).unwrap_or(self.0.len());
            let m = j - i;
            parts.push(if m == 1 { self.0[i].to_string() } else { format!("{m}{}", self.0[i]) });
            i = j;
        }
        write!(f, "{}", parts.join("+"))
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RootError {
    #[error("simple roots are not of norm -2")]
    NotRoots,
    #[error("non-ADE configuration: {0}")]
    NotAde(String),
}

/// ADE type of the configuration of simple roots (negative-definite, norm −2).
pub fn ade_type(l: &Lattice, simple: &[QVector]) -> Result<RootType, RootError> {
    let n = simple.len();
    let two = Rational::from_integer(2.into());
    if simple.iter().any(|s| l.norm(s) != -two.clone()) {
        return Err(RootError::NotRoots);
    }
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            let p = l.pair(&simple[i], &simple[j]);
            if !p.is_zero() {
                if p.abs() != Rational::from_integer(1.into()) {
                    return Err(RootError::NotAde(format!("pairing {p} between simple roots")));
                }
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            for &t in &adj[comp[k]] {
                if !seen[t] {
                    seen[t] = true;
                    comp.push(t);
                }
            }
            k += 1;
        }
        let m = comp.len();
        let edges: usize = comp.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
        if edges != m - 1 {
            return Err(RootError::NotAde(format!("component with {m} nodes and {edges} edges")));
        }
        let branch: Vec<usize> = comp.iter().copied().filter(|&v| adj[v].len() >= 3).collect();
        let ty = match branch.as_slice() {
            [] => Ade::A(m),
            [c] if adj[*c].len() == 3 => {
                let mut arms: Vec<usize> = adj[*c]
                    .iter()
                    .map(|&start| {
                        let (mut prev, mut cur, mut len) = (*c, start, 1);
                        while let Some(&nx) = adj[cur].iter().find(|&&x| x != prev) {
                            prev = cur;
                            cur = nx;
                            len += 1;
                        }
                        len
                    })
                    .collect();
                arms.sort();
                match arms.as_slice() {
                    [1, 1, _] => Ade::D(m),
                    [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => Ade::E(m),
                    _ => return Err(RootError::NotAde(format!("tree with arms {arms:?}"))),
                }
            }
            _ => return Err(RootError::NotAde(format!("component with {} branch nodes", branch.len()))),
        };
        comps.push(ty);
    }
    comps.sort();
    Ok(RootType(comps))
}

/// ADE type of a full root set (closed under negation).
pub fn root_system_type(l: &Lattice, roots: &[QVector]) -> Result<RootType, RootError> {
    ade_type(l, &simple_roots(roots, lex_positive))
}

/// Number of roots of the given type.
pub fn root_count(t: &RootType) -> usize {
    t.0.iter()
        .map(|c| match *c {
            Ade::A(n) => n * (n + 1),
            Ade::D(n) => 2 * n * (n - 1),
            Ade::E(6) => 72,
            Ade::E(7) => 126,
            Ade::E(_) => 240,
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enum_negdef;
    use crate::exactalg::rat_int;

    fn cartan_neg(kind: &str, n: usize) -> Lattice {
        let mut g = vec![vec![0i64; n]; n];
        for i in 0..n {
            g[i][i] = -2;
        }
        let link = |g: &mut Vec<Vec<i64>>, i: usize, j: usize| {
            g[i][j] = 1;
            g[j][i] = 1;
        };
        match kind {
            "A" => (1..n).for_each(|i| link(&mut g, i - 1, i)),
            "D" => {
                (1..n - 1).for_each(|i| link(&mut g, i - 1, i));
                link(&mut g, n - 3, n - 1);
            }
            "E" => {
                (1..n - 1).for_each(|i| link(&mut g, i - 1, i));
                link(&mut g, 2, n - 1);
            }
            _ => unreachable!(),
        }
        Lattice::from_i64(kind, &g).unwrap()
    }

    #[test]
    fn classifies_cartan_lattices() {
        for (k, n, want) in [("A", 1, "A1"), ("A", 3, "A3"), ("D", 4, "D4"), ("D", 5, "D5"), ("E", 6, "E6"), ("E", 7, "E7")] {
            let l = cartan_neg(k, n);
            let roots = enum_negdef(&l, &rat_int(-2)).unwrap();
            let t = root_system_type(&l, &roots).unwrap();
            assert_eq!(t.to_string(), want);
            assert_eq!(root_count(&t), roots.len());
        }
    }

    #[test]
    fn display_groups_components() {
        let t = RootType(vec![Ade::A(1), Ade::A(1), Ade::A(3), Ade::D(4), Ade::D(4)]);
        assert_eq!(t.to_string(), "2A1+A3+2D4");
        assert_eq!(t.rank(), 13);
    }
}
