//! Implementations of the subcommands.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use weylwalk::autgrp::{order_class, run_borcherds, Borcherds, IMat, OrderClass, Presentation};
use weylwalk::chambers::{compute_walls, isometries_between, wall_orbits, Chamber, Face2, WallOrbit};
use weylwalk::exactalg::{fmt_rational, rat_int, Rational};
use weylwalk::fixtures::{build_s15, build_s16, complement_root_type, K3Bundle};
use weylwalk::golden::{golden, FixtureGolden};
use weylwalk::k3::rational_curves_up_to;
use weylwalk::lattice::{Isometry, IsometryFile};
use weylwalk::leech::standard;

use crate::cache::{chamber_key, ChamberCache};
use crate::config::{Format, RunConfig};
use crate::report::GoldenReport;
use crate::FixtureName;

pub struct Session {
    pub cfg: RunConfig,
    cache: ChamberCache,
}

fn profile(orbits: &[WallOrbit]) -> Vec<String> {
    let mut v: Vec<String> = orbits
        .iter()
        .map(|o| {
            format!(
                "{}x{} n={} a={} d={}",
                o.walls.len(),
                if o.outer { "outer" } else { "inner" },
                fmt_rational(&o.n),
                fmt_rational(&o.a),
                fmt_rational(&o.d)
            )
        })
        .collect();
    v.sort();
    v
}

fn golden_profile(g: &FixtureGolden) -> Vec<String> {
    let mut v: Vec<String> = g
        .wall_orbits
        .iter()
        .map(|o| {
            format!(
                "{}x{} n={} a={} d={}",
                o.size,
                if o.outer { "outer" } else { "inner" },
                fmt_rational(&o.n),
                fmt_rational(&o.a),
                fmt_rational(&o.d)
            )
        })
        .collect();
    v.sort();
    v
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn sorted<T: Ord + Clone>(v: &[T]) -> Vec<T> {
    let mut v = v.to_vec();
    v.sort();
    v
}

#[derive(Serialize)]
struct WallRow {
    index: usize,
    #[serde(with = "weylwalk::exactalg::rational::serde_rational::vec")]
    v: Vec<Rational>,
    #[serde(with = "weylwalk::exactalg::rational::serde_rational")]
    n: Rational,
    #[serde(with = "weylwalk::exactalg::rational::serde_rational")]
    a: Rational,
    outer: bool,
    orbit: usize,
}

#[derive(Serialize)]
struct FaceRow {
    walls: (usize, usize),
    inner: bool,
}

#[derive(Serialize)]
struct GeneratorRow {
    tag: String,
    wall: usize,
    family: u8,
    #[serde(with = "weylwalk::exactalg::rational::serde_rational")]
    degree: Rational,
    inverse: String,
}

#[derive(Serialize)]
struct FixtureJson {
    name: String,
    lattice: weylwalk::lattice::LatticeFile,
    embedding: Vec<Vec<String>>,
    #[serde(with = "weylwalk::exactalg::rational::serde_rational::vec")]
    alpha: Vec<Rational>,
    discriminant: String,
    complement_roots: String,
}

impl Session {
    pub fn new(cfg: RunConfig) -> Self {
        let cache = ChamberCache::new(cfg.cache_dir.clone());
        Session { cfg, cache }
    }

    fn json(&self, flag: bool) -> bool {
        flag || self.cfg.format == Format::Json
    }

    pub fn fixture(&self, f: FixtureName) -> Result<K3Bundle> {
        let s16 = build_s16()?;
        Ok(match f {
            FixtureName::S16 => s16,
            FixtureName::S15 => build_s15(&s16)?,
        })
    }

    /// The chamber induced by `w₀`, read from or written to the cache.
    pub fn chamber(&self, b: &K3Bundle) -> Result<Chamber> {
        let w0 = standard().w0();
        let key = chamber_key(b.s.gram(), &b.embedding.image, &w0);
        let (c, _) = self.cache.get_or_compute(&key, || Ok(compute_walls(b, &w0)?))?;
        Ok(c)
    }

    fn fixture_checks(&self, r: &mut GoldenReport, b: &K3Bundle, g: &FixtureGolden) {
        let t = Instant::now();
        r.eq("rank", g.rank, b.rank(), t);
        r.eq("discriminant", g.discriminant.clone(), b.s.discriminant_group().describe(), t);
        r.eq("complement rank", g.complement_rank, b.complement.source.rank(), t);
        let t = Instant::now();
        r.eq("complement roots", g.complement_roots.clone(), complement_root_type(b).to_string(), t);
        r.eq("alpha norm", fmt_rational(&g.alpha_norm), fmt_rational(&b.s.norm(&b.alpha)), t);
    }

    fn chamber_checks(&self, r: &mut GoldenReport, b: &K3Bundle, g: &FixtureGolden) -> Result<(Chamber, Vec<Isometry>)> {
        let t = Instant::now();
        let ch = self.chamber(b)?;
        r.eq("walls", g.walls, ch.walls.len(), t);
        let t = Instant::now();
        let group = isometries_between(&b.s, &ch, &ch);
        r.eq("chamber group order", g.chamber_group_order, group.len(), t);
        let omega = b.s.omega_test();
        r.eq("O^omega part", g.aut_d0_order, group.iter().filter(|x| omega.contains(x)).count(), t);
        let t = Instant::now();
        let orbits = wall_orbits(b, &ch, &group)?;
        r.eq("wall orbits", golden_profile(g).join("; "), profile(&orbits).join("; "), t);
        Ok((ch, group))
    }

    pub fn pipeline_s16_walls(&self) -> Result<GoldenReport> {
        let g = &golden().s16;
        let mut r = GoldenReport::new("s16-walls");
        let b = self.fixture(FixtureName::S16)?;
        self.fixture_checks(&mut r, &b, g);
        self.chamber_checks(&mut r, &b, g)?;
        Ok(r)
    }

    fn borcherds(&self) -> Result<Borcherds> {
        let b = self.fixture(FixtureName::S15)?;
        let ch = self.chamber(&b)?;
        Ok(run_borcherds(&b, &ch)?)
    }

    fn presentation(&self, bo: &Borcherds) -> Result<(Vec<Face2>, Presentation)> {
        let faces = bo.faces();
        let p = bo.relations_r2(&faces)?;
        Ok((faces, p))
    }

    pub fn pipeline_s15(&self) -> Result<GoldenReport> {
        let g = &golden().s15;
        let mut r = GoldenReport::new("s15");
        let b = self.fixture(FixtureName::S15)?;
        self.fixture_checks(&mut r, &b, g);
        let (ch, _) = self.chamber_checks(&mut r, &b, g)?;
        let t = Instant::now();
        let bo = run_borcherds(&b, &ch)?;
        r.eq("generators", g.generators, bo.report.generators, t);
        let mut want: BTreeMap<u8, String> = BTreeMap::new();
        for o in g.wall_orbits.iter().filter(|o| !o.outer) {
            want.insert(o.family.expect("inner orbits carry a family"), fmt_rational(&o.d));
        }
        let got: BTreeMap<u8, String> = bo
            .report
            .degrees
            .iter()
            .map(|(f, ds)| (*f, ds.iter().map(fmt_rational).collect::<Vec<_>>().join("|")))
            .collect();
        r.eq("generator degrees", format!("{want:?}"), format!("{got:?}"), t);
        let t = Instant::now();
        let mut orders: BTreeMap<u8, String> = BTreeMap::new();
        for gen in bo.generators.values() {
            let sq = gen.matrix.mul(&gen.matrix)?.is_identity();
            let kind = if sq {
                "involution".to_string()
            } else {
                match order_class(&gen.isometry) {
                    Some(OrderClass::Infinite) => "infinite".to_string(),
                    Some(OrderClass::Finite) => "finite".to_string(),
                    None => "undecided".to_string(),
                }
            };
            let e = orders.entry(gen.tag.family()).or_insert_with(|| kind.clone());
            if *e != kind {
                *e = "mixed".into();
            }
        }
        let want_orders: BTreeMap<u8, String> = [
            (5, "involution"),
            (6, "involution"),
            (7, "involution"),
            (8, "involution"),
            (9, "infinite"),
            (10, "involution"),
        ]
        .into_iter()
        .map(|(f, k)| (f, k.to_string()))
        .collect();
        r.eq("generator orders", format!("{want_orders:?}"), format!("{orders:?}"), t);
        let t = Instant::now();
        let r1 = bo.relations_r1();
        let squares = r1.iter().filter(|(a, b)| a == b).count();
        r.eq("square relations", g.square_relations, squares, t);
        r.eq("inverse pairs", g.inverse_pairs, r1.len() - squares, t);
        let t = Instant::now();
        let (faces, p) = self.presentation(&bo)?;
        r.push("codim-2 faces", "-", faces.len(), true, t);
        r.eq("inner faces", g.inner_faces, p.r2.len(), t);
        let sizes: Vec<usize> = p.orbits.iter().map(|o| o.faces.len()).collect();
        r.eq("face orbit sizes", join(&sorted(&g.face_orbit_sizes())), join(&sorted(&sizes)), t);
        let t = Instant::now();
        let mut identity = 0;
        for rel in &p.r2 {
            if bo.evaluate(&rel.word)?.is_identity() {
                identity += 1;
            }
        }
        r.eq("relations evaluating to identity", p.r2.len(), identity, t);
        let t = Instant::now();
        let reference: Vec<_> = g
            .face_orbits
            .iter()
            .map(|o| {
                let (t1, t2) = o.tags();
                (t1, t2, o.size, o.parsed_word())
            })
            .collect();
        let m = bo.match_face_orbits(&p, &reference)?;
        r.eq(
            "reference words evaluating to identity",
            m.len(),
            m.iter().filter(|x| x.reference_is_identity).count(),
            t,
        );
        r.eq(
            "reference orbit sizes located",
            m.len(),
            m.iter().filter(|x| x.computed_size == Some(x.expected_size)).count(),
            t,
        );
        r.eq("reference words matched", m.len(), m.iter().filter(|x| x.words_match).count(), t);
        self.pentad_checks(&mut r, &bo)?;
        Ok(r)
    }

    fn pentad_checks(&self, r: &mut GoldenReport, bo: &Borcherds) -> Result<()> {
        for p in &golden().s15.pentads {
            let t = Instant::now();
            let c = bo.verify_pentad(&p.parsed_word(), self.cfg.seed)?;
            let got = format!("involution={} omega={} round_trip={}", c.involution, c.in_omega, c.round_trip);
            r.eq(&format!("pentad {}", p.kind), "involution=true omega=true round_trip=true".to_string(), got, t);
        }
        Ok(())
    }

    pub fn pentads(&self) -> Result<GoldenReport> {
        let bo = self.borcherds()?;
        let mut r = GoldenReport::new("pentads");
        self.pentad_checks(&mut r, &bo)?;
        Ok(r)
    }

    pub fn walls(&self, f: FixtureName, json: bool) -> Result<String> {
        let b = self.fixture(f)?;
        let ch = self.chamber(&b)?;
        let group = isometries_between(&b.s, &ch, &ch);
        let orbits = wall_orbits(&b, &ch, &group)?;
        let mut orbit_of = vec![0; ch.walls.len()];
        for (k, o) in orbits.iter().enumerate() {
            for &w in &o.walls {
                orbit_of[w] = k;
            }
        }
        if self.json(json) {
            let rows: Vec<WallRow> = ch
                .walls
                .iter()
                .enumerate()
                .map(|(i, w)| WallRow {
                    index: i,
                    v: w.v.clone(),
                    n: w.n.clone(),
                    a: w.a.clone(),
                    outer: orbits[orbit_of[i]].outer,
                    orbit: orbit_of[i],
                })
                .collect();
            let v = serde_json::json!({ "walls": rows, "orbits": orbits });
            return Ok(serde_json::to_string_pretty(&v)? + "\n");
        }
        let mut s = format!("{} walls, {} orbits, |O(S,D)| = {}\n", ch.walls.len(), orbits.len(), group.len());
        s.push_str("orbit  size  type   n      a      d\n");
        for (k, o) in orbits.iter().enumerate() {
            s.push_str(&format!(
                "{:<6} {:<5} {:<6} {:<6} {:<6} {}\n",
                k + 1,
                o.walls.len(),
                if o.outer { "outer" } else { "inner" },
                fmt_rational(&o.n),
                fmt_rational(&o.a),
                fmt_rational(&o.d)
            ));
        }
        Ok(s)
    }

    pub fn faces(&self, f: FixtureName, json: bool) -> Result<String> {
        if f != FixtureName::S15 {
            bail!("faces are computed for the s15 fixture only");
        }
        let bo = self.borcherds()?;
        let faces = bo.faces();
        let rows: Vec<FaceRow> = faces
            .iter()
            .map(|x| FaceRow {
                walls: x.walls,
                inner: !bo.outer[x.walls.0] && !bo.outer[x.walls.1],
            })
            .collect();
        if self.json(json) {
            return Ok(serde_json::to_string_pretty(&serde_json::json!({ "faces": rows }))? + "\n");
        }
        let inner = rows.iter().filter(|r| r.inner).count();
        let mut s = format!("{} faces, {} inner\n", rows.len(), inner);
        for r in &rows {
            s.push_str(&format!("{} {} {}\n", r.walls.0, r.walls.1, if r.inner { "inner" } else { "outer" }));
        }
        Ok(s)
    }

    pub fn generators(&self, json: bool) -> Result<String> {
        let bo = self.borcherds()?;
        let rows: Vec<GeneratorRow> = bo
            .generators
            .values()
            .map(|g| GeneratorRow {
                tag: g.tag.to_string(),
                wall: g.wall,
                family: g.tag.family(),
                degree: g.degree.clone(),
                inverse: bo.index.tags[bo.partner[g.wall].expect("inner wall")].expect("indexed").to_string(),
            })
            .collect();
        if self.json(json) {
            return Ok(serde_json::to_string_pretty(&serde_json::json!({ "generators": rows }))? + "\n");
        }
        let mut s = format!("{} generators\n", rows.len());
        for r in &rows {
            s.push_str(&format!("{} wall={} degree={} inverse={}\n", r.tag, r.wall, fmt_rational(&r.degree), r.inverse));
        }
        Ok(s)
    }

    pub fn relations(&self, gap: bool) -> Result<String> {
        let bo = self.borcherds()?;
        let (_, p) = self.presentation(&bo)?;
        if gap {
            return Ok(p.to_gap());
        }
        if self.cfg.format == Format::Json {
            let v = serde_json::json!({
                "r1": p.r1.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect::<Vec<_>>(),
                "orbits": p.orbits.iter().map(|o| serde_json::json!({
                    "size": o.faces.len(),
                    "face": o.faces[0],
                    "word": o.word.to_string(),
                })).collect::<Vec<_>>(),
            });
            return Ok(serde_json::to_string_pretty(&v)? + "\n");
        }
        let mut s = format!(
            "{} generators, {} R1 relations, {} R2 relations in {} orbits\n",
            p.generators.len(),
            p.r1.len(),
            p.r2.len(),
            p.orbits.len()
        );
        for o in &p.orbits {
            s.push_str(&format!("{} {}\n", o.faces.len(), o.word));
        }
        Ok(s)
    }

    pub fn wordify(&self, path: &Path) -> Result<String> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let f: IsometryFile = serde_json::from_str(&text).context("parsing isometry JSON")?;
        let g = Isometry::from_file(&f)?;
        let bo = self.borcherds()?;
        if g.matrix.nrows() != bo.bundle.rank() {
            bail!("matrix has size {}, expected {}", g.matrix.nrows(), bo.bundle.rank());
        }
        let m = IMat::from_isometry(&g)?;
        let w = bo.wordify(&m, self.cfg.seed)?;
        if bo.evaluate(&w)? != m {
            return Err(anyhow!("word does not evaluate to the input"));
        }
        Ok(format!("{w}\n"))
    }

    /// Curve counts by degree; the flag reports agreement with golden counts
    /// where they exist.
    pub fn curves(&self, f: FixtureName) -> Result<(String, bool)> {
        let b = self.fixture(f)?;
        let curves = rational_curves_up_to(&b, &rat_int(self.cfg.max_degree as i64))?;
        let expected = match f {
            FixtureName::S16 => &golden().s16.curves,
            FixtureName::S15 => &golden().s15.curves,
        };
        let mut pass = true;
        let mut rows = Vec::new();
        for (d, cs) in &curves {
            let want = if d.is_integer() {
                u32::try_from(d.to_integer()).ok().and_then(|k| expected.get(&k))
            } else {
                None
            };
            if let Some(w) = want {
                pass &= *w == cs.len();
            }
            rows.push((fmt_rational(d), cs.len(), want.copied()));
        }
        if self.cfg.format == Format::Json {
            let v: Vec<_> = rows
                .iter()
                .map(|(d, n, w)| serde_json::json!({ "degree": d, "count": n, "expected": w }))
                .collect();
            return Ok((serde_json::to_string_pretty(&serde_json::json!({ "curves": v, "pass": pass }))? + "\n", pass));
        }
        let mut s = String::from("degree count expected\n");
        for (d, n, w) in rows {
            s.push_str(&format!("{d} {n} {}\n", w.map(|x| x.to_string()).unwrap_or_else(|| "-".into())));
        }
        Ok((s, pass))
    }

    pub fn fixture_json(&self, f: FixtureName) -> Result<String> {
        let b = self.fixture(f)?;
        let j = FixtureJson {
            name: b.name.clone(),
            lattice: b.s.to_file(),
            embedding: b.embedding.image.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
            alpha: b.alpha.clone(),
            discriminant: b.s.discriminant_group().describe(),
            complement_roots: complement_root_type(&b).to_string(),
        };
        Ok(serde_json::to_string_pretty(&j)? + "\n")
    }
}
