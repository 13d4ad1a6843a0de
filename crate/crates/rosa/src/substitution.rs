//! Substitution rules built from edgewords, their action on lifted patches,
//! primitivity, the star seed and the Planar Rosa selection.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::edgeword::{billiard_prefix, candidate_edgeword, Edgeword};
use crate::error::{Result, RosaError};
use crate::geometry::{check_n, LiftedPoint, Tile};
use crate::kenyon::{
    boundary_polygon, build_matching, corner_crossing_check, is_symmetric_tiling, tile_interior,
    tileability_criterion, BoundaryPolygon, CriterionOutcome, InteriorTiling,
};
use crate::spectral::{
    classify_planarity, expansion_matrix, spectrum, Classification, PseudoCirculant, Spectrum,
    DEFAULT_CLASSIFY_TOL,
};

/// Default cap on the number of tiles of a generated patch.
pub const DEFAULT_TILE_CAP: usize = 5_000_000;

/// A finite set of tiles lifted to `Z^n`. Tiles flagged `half` stick out of
/// the region covered by the metatiles they came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedPatch {
    pub n: usize,
    pub tiles: BTreeMap<Tile, bool>,
}

impl LiftedPatch {
    pub fn new(n: usize) -> Self {
        LiftedPatch {
            n,
            tiles: BTreeMap::new(),
        }
    }

    pub fn from_tiles(n: usize, tiles: impl IntoIterator<Item = Tile>) -> Self {
        LiftedPatch {
            n,
            tiles: tiles.into_iter().map(|t| (t, false)).collect(),
        }
    }

    pub fn single(tile: Tile) -> Self {
        Self::from_tiles(tile.n(), [tile])
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn contains(&self, t: &Tile) -> bool {
        self.tiles.contains_key(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Tile> {
        self.tiles.keys()
    }

    pub fn half_count(&self) -> usize {
        self.tiles.values().filter(|h| **h).count()
    }

    /// Whether every tile of `o` is a tile of `self`.
    pub fn contains_patch(&self, o: &LiftedPatch) -> bool {
        o.iter().all(|t| self.contains(t))
    }

    pub fn rotate(&self, steps: i64) -> LiftedPatch {
        LiftedPatch {
            n: self.n,
            tiles: self
                .tiles
                .iter()
                .map(|(t, h)| (t.rotate(steps), *h))
                .collect(),
        }
    }

    pub fn translate(&self, by: &LiftedPoint) -> LiftedPatch {
        LiftedPatch {
            n: self.n,
            tiles: self
                .tiles
                .iter()
                .map(|(t, h)| (t.translate(by), *h))
                .collect(),
        }
    }

    /// Setwise invariance under the rotation by `π/n`.
    pub fn is_rotation_invariant(&self) -> bool {
        self.tiles
            .keys()
            .all(|t| self.tiles.contains_key(&t.rotate(1)))
    }

    /// Distinct vertices of all tiles.
    pub fn vertices(&self) -> BTreeSet<LiftedPoint> {
        self.iter().flat_map(|t| t.vertices()).collect()
    }

    /// Tile count per type `(i, j)`.
    pub fn type_census(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for t in self.iter() {
            *out.entry(t.ty).or_default() += 1;
        }
        out
    }

    /// Embedded segments of the edges that belong to exactly one tile.
    pub fn boundary_segments(&self) -> Vec<([f64; 2], [f64; 2])> {
        let mut count: HashMap<crate::geometry::EdgeKey, usize> = HashMap::new();
        for t in self.iter() {
            for e in t.edges() {
                *count.entry(e).or_default() += 1;
            }
        }
        let mut out: Vec<_> = count
            .into_iter()
            .filter(|(_, c)| *c == 1)
            .map(|(e, _)| {
                let a = e.start.embed();
                let b = e.start.add(&LiftedPoint::unit(self.n, e.t)).embed();
                (a, b)
            })
            .collect();
        out.sort_by(|x, y| x.partial_cmp(y).expect("finite coordinates"));
        out
    }

    /// Checks that the patch is a tiling of its support: every edge lies on
    /// at most two tiles, no two tiles overlap at a vertex, and vertices all
    /// of whose edges are shared carry a full turn of angle.
    pub fn audit(&self) -> Result<()> {
        let n = self.n;
        let mut count: HashMap<crate::geometry::EdgeKey, usize> = HashMap::new();
        for t in self.iter() {
            if t.n() != n {
                return Err(RosaError::DimensionMismatch {
                    expected: n,
                    got: t.n(),
                });
            }
            for e in t.edges() {
                *count.entry(e).or_default() += 1;
            }
        }
        if let Some((e, c)) = count.iter().find(|(_, c)| **c > 2) {
            return Err(RosaError::Consistency(format!(
                "edge {:?}/{} lies on {c} tiles",
                e.start.coords, e.t
            )));
        }
        let mut angle: HashMap<LiftedPoint, usize> = HashMap::new();
        let mut open: HashSet<LiftedPoint> = HashSet::new();
        for t in self.iter() {
            for (idx, v) in t.vertices().into_iter().enumerate() {
                *angle.entry(v).or_default() += t.vertex_angle_units(idx);
            }
        }
        for (e, c) in &count {
            if *c == 1 {
                open.insert(e.start.clone());
                open.insert(e.start.add(&LiftedPoint::unit(n, e.t)));
            }
        }
        for (v, a) in &angle {
            if *a > 2 * n || (!open.contains(v) && *a != 2 * n) {
                return Err(RosaError::Consistency(format!(
                    "angle sum {a} at vertex {:?}",
                    v.coords
                )));
            }
        }
        let mut centers: HashMap<(i64, i64), Vec<&Tile>> = HashMap::new();
        for t in self.iter() {
            let c = t.embedded_center();
            let key = ((c[0] * 1e6).round() as i64, (c[1] * 1e6).round() as i64);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(others) = centers.get(&(key.0 + dx, key.1 + dy)) {
                        for o in others {
                            let oc = o.embedded_center();
                            if (oc[0] - c[0]).hypot(oc[1] - c[1]) < 1e-6 {
                                return Err(RosaError::Conflict(format!(
                                    "tiles {:?} and {:?} overlap",
                                    t, o
                                )));
                            }
                        }
                    }
                }
            }
            centers.entry(key).or_default().push(t);
        }
        Ok(())
    }

    pub fn to_file(&self, meta: PatchMeta) -> PatchFile {
        PatchFile {
            n: self.n,
            tiles: self
                .tiles
                .iter()
                .map(|(t, h)| PatchTile {
                    pos: t.pos.coords.clone(),
                    ty: [t.ty.0, t.ty.1],
                    half: *h,
                })
                .collect(),
            meta,
        }
    }

    pub fn from_file(f: &PatchFile) -> Result<Self> {
        check_n(f.n)?;
        let mut tiles = BTreeMap::new();
        for t in &f.tiles {
            if t.pos.len() != f.n {
                return Err(RosaError::DimensionMismatch {
                    expected: f.n,
                    got: t.pos.len(),
                });
            }
            let tile = Tile::new(LiftedPoint::from_coords(t.pos.clone()), t.ty[0], t.ty[1])?;
            tiles.insert(tile, t.half);
        }
        Ok(LiftedPatch { n: f.n, tiles })
    }
}

/// One tile of the JSON patch schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchTile {
    pub pos: Vec<i64>,
    #[serde(rename = "type")]
    pub ty: [usize; 2],
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub half: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchMeta {
    #[serde(default)]
    pub edgeword: String,
    #[serde(default)]
    pub iterations: usize,
    #[serde(default)]
    pub seed: String,
}

/// The JSON patch file: `{"n", "tiles": [{"pos", "type"}], "meta"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchFile {
    pub n: usize,
    pub tiles: Vec<PatchTile>,
    #[serde(default)]
    pub meta: PatchMeta,
}

/// The patch replacing the tile `(0, k)` at the origin.
#[derive(Clone, Debug)]
pub struct Metatile {
    pub k: usize,
    pub polygon: BoundaryPolygon,
    pub interior: InteriorTiling,
    pub half_tiles: Vec<Tile>,
}

/// A substitution built from a palindromic edgeword.
#[derive(Clone, Debug)]
pub struct SubstitutionRule {
    pub n: usize,
    pub edgeword: Edgeword,
    pub expansion: PseudoCirculant,
    /// Metatiles of the classes `k = 1, …, n/2`.
    pub metatiles: Vec<Metatile>,
    /// `σ` of the tile of each type at the origin, with half flags.
    canon: BTreeMap<(usize, usize), Vec<(Tile, bool)>>,
}

/// The star pattern: the `2n` narrow rhombi around the origin.
pub fn star(n: usize) -> Result<LiftedPatch> {
    check_n(n)?;
    let t = Tile::new(LiftedPoint::zero(n), 0, 1)?;
    Ok(LiftedPatch::from_tiles(
        n,
        (0..2 * n as i64).map(|s| t.rotate(s)),
    ))
}

/// All tile types `(i, j)`, `i < j < n`.
pub fn tile_types(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

pub fn build_substitution(n: usize, u: &Edgeword) -> Result<SubstitutionRule> {
    build_substitution_with(n, u, true)
}

/// Builds the rule, optionally without placing the corner rhombi first.
pub fn build_substitution_with(
    n: usize,
    u: &Edgeword,
    force_corners: bool,
) -> Result<SubstitutionRule> {
    check_n(n)?;
    if let CriterionOutcome::Witness { x, letter, j } = tileability_criterion(n, u)? {
        return Err(RosaError::PreconditionFailed(format!(
            "the edgeword fails the tileability test at x = {x} (letter {letter}, j = {j})"
        )));
    }
    if !u.is_palindrome() {
        return Err(RosaError::PreconditionFailed(
            "sides of adjacent metatiles only glue for palindromic edgewords".into(),
        ));
    }
    let expansion = expansion_matrix(n, u)?;
    let mut metatiles = Vec::new();
    for k in 1..=n / 2 {
        let polygon = boundary_polygon(n, u, k)?;
        let matching = build_matching(&polygon)?;
        let interior = tile_interior(&polygon, &matching, force_corners)?;
        if !is_symmetric_tiling(&polygon, &interior) {
            return Err(RosaError::Consistency(format!(
                "no symmetric tiling found for class {k}"
            )));
        }
        let half_tiles = polygon.half_tiles.clone();
        metatiles.push(Metatile {
            k,
            polygon,
            interior,
            half_tiles,
        });
    }
    let mut rule = SubstitutionRule {
        n,
        edgeword: u.clone(),
        expansion,
        metatiles,
        canon: BTreeMap::new(),
    };
    for (i, j) in tile_types(n) {
        let placed = rule.canonical_image(i, j);
        rule.canon.insert((i, j), placed);
    }
    if !rule.is_rotation_equivariant() {
        return Err(RosaError::Consistency(
            "substitution does not commute with the rotation".into(),
        ));
    }
    let side = &rule.metatiles[0].polygon.side_vectors[0];
    if side.coords != rule.expansion.first_column {
        return Err(RosaError::Consistency(
            "metatile side differs from the expansion of e_0".into(),
        ));
    }
    Ok(rule)
}

impl SubstitutionRule {
    fn canonical_image(&self, i: usize, j: usize) -> Vec<(Tile, bool)> {
        let n = self.n;
        let d = j - i;
        let (class, steps, shift) = if d <= n / 2 {
            (d, i as i64, LiftedPoint::zero(n))
        } else {
            (n - d, j as i64, self.phi(&LiftedPoint::unit(n, i)))
        };
        let m = &self.metatiles[class - 1];
        let mut out: Vec<(Tile, bool)> = m
            .interior
            .tiles
            .iter()
            .map(|t| (t.rotate(steps).translate(&shift), false))
            .chain(
                m.half_tiles
                    .iter()
                    .map(|t| (t.rotate(steps).translate(&shift), true)),
            )
            .collect();
        out.sort();
        out
    }

    /// Whether `σ(ρ t) = ρ σ(t)` for the tile of every type at the origin.
    pub fn is_rotation_equivariant(&self) -> bool {
        tile_types(self.n).into_iter().all(|(i, j)| {
            let t = Tile::new(LiftedPoint::zero(self.n), i, j).expect("valid type");
            let mut a = self.image(&t.rotate(1));
            let mut b: Vec<_> = self
                .image(&t)
                .into_iter()
                .map(|(s, h)| (s.rotate(1), h))
                .collect();
            a.sort();
            b.sort();
            a == b
        })
    }

    /// `φ(x)`.
    pub fn phi(&self, x: &LiftedPoint) -> LiftedPoint {
        LiftedPoint::from_coords(self.expansion.apply(&x.coords))
    }

    /// `φ^k(x)`.
    pub fn phi_pow(&self, x: &LiftedPoint, k: usize) -> LiftedPoint {
        (0..k).fold(x.clone(), |p, _| self.phi(&p))
    }

    /// `σ` of the tile of type `ty` at the origin, with half flags.
    pub fn image_of_type(&self, ty: (usize, usize)) -> &[(Tile, bool)] {
        &self.canon[&ty]
    }

    /// `σ(t)` as a list of tiles with half flags.
    pub fn image(&self, t: &Tile) -> Vec<(Tile, bool)> {
        let shift = self.phi(&t.pos);
        self.canon[&t.ty]
            .iter()
            .map(|(s, h)| (s.translate(&shift), *h))
            .collect()
    }
}

/// `φ(e_i)`.
pub fn expansion_vector(rule: &SubstitutionRule, i: usize) -> LiftedPoint {
    rule.phi(&LiftedPoint::unit(rule.n, i))
}

/// Area bookkeeping of one application.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AreaAudit {
    pub full_tiles: usize,
    pub half_tiles: usize,
    /// Tile area with half tiles counted for half.
    pub tile_area: f64,
    /// Area of the expanded input region.
    pub expanded_area: f64,
}

impl AreaAudit {
    pub fn holds(&self, tol: f64) -> bool {
        (self.tile_area - self.expanded_area).abs() <= tol * self.expanded_area.max(1.0)
    }
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub fn apply(rule: &SubstitutionRule, patch: &LiftedPatch) -> Result<LiftedPatch> {
    apply_audited(rule, patch, usize::MAX).map(|(p, _)| p)
}

/// Replaces each tile by its metatile; shared boundary rhombi are merged.
pub fn apply_audited(
    rule: &SubstitutionRule,
    patch: &LiftedPatch,
    cap: usize,
) -> Result<(LiftedPatch, AreaAudit)> {
    if patch.n != rule.n {
        return Err(RosaError::DimensionMismatch {
            expected: rule.n,
            got: patch.n,
        });
    }
    let n = rule.n;
    let cols: Vec<[f64; 2]> = (0..n).map(|i| expansion_vector(rule, i).embed()).collect();
    let mut expanded_area = 0.0;
    let mut seen: HashMap<Tile, (u32, u32)> = HashMap::new();
    for t in patch.iter() {
        expanded_area += cross(cols[t.ty.0], cols[t.ty.1]).abs();
        let shift = rule.phi(&t.pos);
        for (s, half) in &rule.canon[&t.ty] {
            let e = seen.entry(s.translate(&shift)).or_insert((0, 0));
            if *half {
                e.1 += 1;
            } else {
                e.0 += 1;
            }
        }
        if seen.len() > cap {
            return Err(RosaError::CapExceeded(format!("more than {cap} tiles")));
        }
    }
    let mut out = LiftedPatch::new(n);
    let mut tile_area = 0.0;
    let mut half_tiles = 0;
    for (t, (full, halves)) in seen {
        let half = match (full, halves) {
            (1, 0) | (0, 2) => false,
            (0, 1) => true,
            _ => {
                return Err(RosaError::Conflict(format!(
                    "tile {:?} placed {full} times inside and {halves} times on a side",
                    t
                )))
            }
        };
        tile_area += if half { t.area() / 2.0 } else { t.area() };
        half_tiles += half as usize;
        out.tiles.insert(t, half);
    }
    let audit = AreaAudit {
        full_tiles: out.len() - half_tiles,
        half_tiles,
        tile_area,
        expanded_area,
    };
    Ok((out, audit))
}

pub fn iterate(rule: &SubstitutionRule, seed: &LiftedPatch, k: usize) -> Result<LiftedPatch> {
    iterate_audited(rule, seed, k, DEFAULT_TILE_CAP).map(|(p, _)| p)
}

/// `σ^k(seed)` with the audit of every step.
pub fn iterate_audited(
    rule: &SubstitutionRule,
    seed: &LiftedPatch,
    k: usize,
    cap: usize,
) -> Result<(LiftedPatch, Vec<AreaAudit>)> {
    let mut p = seed.clone();
    let mut audits = Vec::with_capacity(k);
    for _ in 0..k {
        let (next, audit) = apply_audited(rule, &p, cap)?;
        audits.push(audit);
        p = next;
    }
    Ok((p, audits))
}

/// Tile types occurring in `σ^m` of each prototile.
pub fn type_closure(
    rule: &SubstitutionRule,
    m: usize,
) -> BTreeMap<(usize, usize), BTreeSet<(usize, usize)>> {
    let types = tile_types(rule.n);
    let mut cur: BTreeMap<_, BTreeSet<_>> =
        types.iter().map(|&t| (t, BTreeSet::from([t]))).collect();
    for _ in 0..m {
        cur = types
            .iter()
            .map(|&t| {
                let set = rule.canon[&t]
                    .iter()
                    .flat_map(|(s, _)| cur[&s.ty].iter().copied())
                    .collect();
                (t, set)
            })
            .collect();
    }
    cur
}

/// Whether `σ^m` of every prototile contains every tile type.
pub fn is_primitive_order(rule: &SubstitutionRule, m: usize) -> bool {
    let all = tile_types(rule.n).len();
    m >= 1 && type_closure(rule, m).values().all(|s| s.len() == all)
}

/// Tiles around a vertex, translated so that the vertex is the origin.
type Configuration = Vec<Tile>;

fn configurations(n: usize, tiles: &[Tile], complete_only: bool) -> BTreeSet<Configuration> {
    let mut at: HashMap<LiftedPoint, (usize, Vec<Tile>)> = HashMap::new();
    for t in tiles {
        for (idx, v) in t.vertices().into_iter().enumerate() {
            let e = at.entry(v).or_default();
            e.0 += t.vertex_angle_units(idx);
            e.1.push(t.clone());
        }
    }
    at.into_iter()
        .filter(|(_, (a, _))| !complete_only || *a == 2 * n)
        .map(|(v, (_, ts))| {
            let mut c: Vec<Tile> = ts.iter().map(|t| t.translate(&v.neg())).collect();
            c.sort();
            c
        })
        .collect()
}

impl SubstitutionRule {
    /// The configuration at `φ(P)` in `σ(patch)`, given the configuration at `P`.
    pub fn expand_configuration(&self, c: &[Tile]) -> Configuration {
        let origin = LiftedPoint::zero(self.n);
        let mut out: BTreeSet<Tile> = BTreeSet::new();
        for t in c {
            for (s, _) in self.image(t) {
                if s.vertices().contains(&origin) {
                    out.insert(s);
                }
            }
        }
        out.into_iter().collect()
    }
}

/// Outcome of the star seed checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeedReport {
    /// `σ(star)` has the star at the origin.
    pub star_at_center: bool,
    /// Distance from the origin to the boundary of `σ(star)`.
    pub inscribed_radius: f64,
    /// Circumradius of the star, `2 cos(π/2n)`.
    pub star_radius: f64,
    /// Smallest `m ≤ n/2 + 1` with the star found in `σ^m(t)`, per prototile.
    pub star_found: BTreeMap<String, Option<usize>>,
}

impl SeedReport {
    pub fn holds(&self) -> bool {
        self.star_at_center
            && self.inscribed_radius > self.star_radius
            && self.star_found.values().all(|m| m.is_some())
    }
}

/// Looks for the star among the vertex configurations of `σ^m(t)`.
///
/// Configurations are followed through `φ` from complete vertices of single
/// metatiles, so a `None` means the star was not found this way.
pub fn star_search(
    rule: &SubstitutionRule,
    ty: (usize, usize),
    max_m: usize,
) -> Result<Option<usize>> {
    let n = rule.n;
    let target: Configuration = star(n)?.iter().cloned().collect();
    let local: BTreeMap<(usize, usize), BTreeSet<Configuration>> = tile_types(n)
        .into_iter()
        .map(|t| {
            let tiles: Vec<Tile> = rule.canon[&t].iter().map(|(s, _)| s.clone()).collect();
            (t, configurations(n, &tiles, true))
        })
        .collect();
    let closure: Vec<_> = (0..max_m).map(|m| type_closure(rule, m)).collect();
    let mut found: BTreeSet<Configuration> = BTreeSet::new();
    for m in 1..=max_m {
        let mut next: BTreeSet<Configuration> =
            found.iter().map(|c| rule.expand_configuration(c)).collect();
        for t in &closure[m - 1][&ty] {
            next.extend(local[t].iter().cloned());
        }
        if next.contains(&target) {
            return Ok(Some(m));
        }
        found = next;
    }
    Ok(None)
}

pub fn seed_report(rule: &SubstitutionRule) -> Result<SeedReport> {
    let n = rule.n;
    let s = star(n)?;
    let star_tiles: Configuration = s.iter().cloned().collect();
    let star_at_center = rule.expand_configuration(&star_tiles) == star_tiles;
    let image = apply(rule, &s)?;
    let inscribed_radius = image
        .boundary_segments()
        .iter()
        .map(|&(a, b)| point_segment_distance([0.0, 0.0], a, b))
        .fold(f64::INFINITY, f64::min);
    let star_radius = 2.0 * (std::f64::consts::PI / (2 * n) as f64).cos();
    let mut star_found = BTreeMap::new();
    for ty in tile_types(n) {
        star_found.insert(
            format!("{},{}", ty.0, ty.1),
            star_search(rule, ty, n / 2 + 1)?,
        );
    }
    Ok(SeedReport {
        star_at_center,
        inscribed_radius,
        star_radius,
        star_found,
    })
}

pub fn verify_star_seed(rule: &SubstitutionRule) -> bool {
    seed_report(rule).map(|r| r.holds()).unwrap_or(false)
}

fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    };
    let q = [a[0] + t * d[0], a[1] + t * d[1]];
    (p[0] - q[0]).hypot(p[1] - q[1])
}

/// The five checks of one candidate index.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelectionEntry {
    pub i: usize,
    pub edgeword: String,
    pub letters_present: bool,
    pub tileable: bool,
    pub corners_cross: bool,
    pub planar_spectrum: bool,
    pub primitive: bool,
    pub note: String,
}

impl SelectionEntry {
    pub fn accepted(&self) -> bool {
        self.letters_present
            && self.tileable
            && self.corners_cross
            && self.planar_spectrum
            && self.primitive
    }
}

#[derive(Clone, Debug)]
pub struct Selection {
    pub i: usize,
    pub rule: SubstitutionRule,
    pub spectrum: Spectrum,
    pub log: Vec<SelectionEntry>,
}

fn evaluate_candidate(
    n: usize,
    i: usize,
) -> Result<(SelectionEntry, Option<(SubstitutionRule, Spectrum)>)> {
    let u = candidate_edgeword(n, i)?;
    let mut e = SelectionEntry {
        i,
        edgeword: u.to_string(),
        letters_present: billiard_prefix(n, i)?.has_all_letters(),
        tileable: false,
        corners_cross: false,
        planar_spectrum: false,
        primitive: false,
        note: String::new(),
    };
    if !e.letters_present {
        e.note = "prefix misses a letter".into();
        return Ok((e, None));
    }
    match tileability_criterion(n, &u) {
        Ok(CriterionOutcome::Ok) => e.tileable = true,
        Ok(CriterionOutcome::Witness { x, letter, j }) => {
            e.note = format!("witness x={x} letter={letter} j={j}");
        }
        Err(err) => e.note = err.to_string(),
    }
    let mut corners = true;
    for k in 1..n {
        corners &= corner_crossing_check(n, &u, k)?;
    }
    e.corners_cross = corners;
    let s = spectrum(n, &u)?;
    e.planar_spectrum =
        classify_planarity(&s, DEFAULT_CLASSIFY_TOL) == Classification::PlanarSlope0;
    if !(e.tileable && e.corners_cross && e.planar_spectrum) {
        return Ok((e, None));
    }
    match build_substitution(n, &u) {
        Ok(rule) => {
            e.primitive = is_primitive_order(&rule, 2);
            if !e.primitive {
                e.note = "not primitive of order 2".into();
            }
            Ok((e, Some((rule, s))))
        }
        Err(err) => {
            e.note = err.to_string();
            Ok((e, None))
        }
    }
}

/// Scans `i = 1, …, max_i` and returns the first accepted candidate, with
/// the log of every index examined.
pub fn scan_planar_rosa(
    n: usize,
    max_i: usize,
) -> Result<(Option<Selection>, Vec<SelectionEntry>)> {
    check_n(n)?;
    let mut log = Vec::new();
    for i in 1..=max_i {
        let (entry, built) = evaluate_candidate(n, i)?;
        let ok = entry.accepted();
        log.push(entry);
        if ok {
            let (rule, spectrum) = built.expect("accepted candidates carry their rule");
            return Ok((
                Some(Selection {
                    i,
                    rule,
                    spectrum,
                    log: log.clone(),
                }),
                log,
            ));
        }
    }
    Ok((None, log))
}

pub fn select_planar_rosa(n: usize, max_i: usize) -> Result<Selection> {
    match scan_planar_rosa(n, max_i)? {
        (Some(s), _) => Ok(s),
        (None, _) => Err(RosaError::NotFound { max_i }),
    }
}
