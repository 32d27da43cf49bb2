//! Reference values for the two fixtures, loaded from `data/golden.json`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;

use crate::exactalg::rational::serde_rational;
use crate::exactalg::Rational;
use crate::k3::combinat::{GeneratorTag, Word};

const GOLDEN_JSON: &str = include_str!("../data/golden.json");

#[derive(Clone, Debug, Deserialize)]
pub struct Golden {
    pub leech: LeechGolden,
    pub s16: FixtureGolden,
    pub s15: FixtureGolden,
}

#[derive(Clone, Debug, Deserialize)]
pub struct LeechGolden {
    pub octads: usize,
    pub golay_codewords: usize,
    pub norm_minus2: usize,
    pub norm_minus4: usize,
}

#[derive(Clone, Debug, Deserialize)]
pub struct WallOrbitGolden {
    pub size: usize,
    pub outer: bool,
    #[serde(with = "serde_rational")]
    pub n: Rational,
    #[serde(with = "serde_rational")]
    pub a: Rational,
    #[serde(with = "serde_rational")]
    pub d: Rational,
    #[serde(default)]
    pub family: Option<u8>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct FaceOrbitGolden {
    pub size: usize,
    pub face: [String; 2],
    pub word: String,
}

impl FaceOrbitGolden {
    pub fn tags(&self) -> (GeneratorTag, GeneratorTag) {
        (self.face[0].parse().expect("golden tag"), self.face[1].parse().expect("golden tag"))
    }

    pub fn parsed_word(&self) -> Word {
        self.word.parse().expect("golden word")
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct PentadGolden {
    #[serde(rename = "type")]
    pub kind: u8,
    pub nodes: String,
    pub word: String,
}

impl PentadGolden {
    pub fn parsed_word(&self) -> Word {
        self.word.parse().expect("golden word")
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct FixtureGolden {
    pub rank: usize,
    pub discriminant: String,
    pub complement_rank: usize,
    pub complement_roots: String,
    #[serde(with = "serde_rational")]
    pub alpha_norm: Rational,
    pub walls: usize,
    pub wall_orbits: Vec<WallOrbitGolden>,
    pub chamber_group_order: usize,
    pub aut_d0_order: usize,
    #[serde(default)]
    pub curves: BTreeMap<u32, usize>,
    #[serde(default)]
    pub generators: usize,
    #[serde(default)]
    pub square_relations: usize,
    #[serde(default)]
    pub inverse_pairs: usize,
    #[serde(default)]
    pub inner_faces: usize,
    #[serde(default)]
    pub face_orbits: Vec<FaceOrbitGolden>,
    #[serde(default)]
    pub pentads: Vec<PentadGolden>,
}

impl FixtureGolden {
    /// Wall orbit sizes as a sorted multiset.
    pub fn wall_orbit_sizes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.wall_orbits.iter().map(|o| o.size).collect();
        v.sort();
        v
    }

    pub fn face_orbit_sizes(&self) -> Vec<usize> {
        self.face_orbits.iter().map(|o| o.size).collect()
    }
}

pub fn golden() -> &'static Golden {
    static G: OnceLock<Golden> = OnceLock::new();
    G.get_or_init(|| serde_json::from_str(GOLDEN_JSON).expect("golden data parses"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_parses_and_is_consistent() {
        let g = golden();
        assert_eq!(g.s16.wall_orbits.iter().map(|o| o.size).sum::<usize>(), g.s16.walls);
        assert_eq!(g.s15.wall_orbits.iter().map(|o| o.size).sum::<usize>(), g.s15.walls);
        assert_eq!(g.s15.face_orbits.iter().map(|o| o.size).sum::<usize>(), g.s15.inner_faces);
        let inner: usize = g.s15.wall_orbits.iter().filter(|o| !o.outer).map(|o| o.size).sum();
        assert_eq!(inner, g.s15.generators);
        assert_eq!(g.s15.square_relations + 2 * g.s15.inverse_pairs, g.s15.generators);
        for o in &g.s15.face_orbits {
            o.tags();
            o.parsed_word();
        }
        assert_eq!(g.s15.pentads.len(), 9);
        for p in &g.s15.pentads {
            p.parsed_word();
        }
    }
}
