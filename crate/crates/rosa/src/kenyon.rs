//! Metatile boundaries, the counting-function tileability test, Kenyon
//! matchings and interior tilings of metatiles.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::edgeword::{balance_constant, counting, counting_inverse, CountBound, Edgeword};
use crate::error::{KenyonProperty, Result, RosaError};
use crate::geometry::{check_n, DirectionIndex, EdgeKey, LiftedPoint, Tile};

/// Default node budget of the brute-force fallback.
pub const DEFAULT_NODE_LIMIT: usize = 2_000_000;

/// One unit edge of a boundary polygon with its provenance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryEdge {
    pub dir: DirectionIndex,
    pub side: usize,
    pub position: usize,
    pub letter: u32,
}

/// The region of a metatile left after removing the halves of the rhombi cut
/// by its sides, traversed counterclockwise from the origin.
#[derive(Clone, Debug)]
pub struct BoundaryPolygon {
    pub n: usize,
    pub k: usize,
    pub edges: Vec<BoundaryEdge>,
    /// Rhombi cut in half by the sides of the metatile, in boundary order.
    pub half_tiles: Vec<Tile>,
    /// Index of the first edge of each side.
    pub side_starts: Vec<usize>,
    /// Displacement of each side in `Z^n`.
    pub side_vectors: Vec<LiftedPoint>,
}

impl BoundaryPolygon {
    /// A polygon given by its edge directions from the origin.
    pub fn from_directions(n: usize, dirs: &[DirectionIndex]) -> Result<Self> {
        check_n(n)?;
        let edges: Vec<BoundaryEdge> = dirs
            .iter()
            .enumerate()
            .map(|(t, &dir)| BoundaryEdge {
                dir,
                side: 0,
                position: t,
                letter: 0,
            })
            .collect();
        let p = BoundaryPolygon {
            n,
            k: 0,
            edges,
            half_tiles: Vec::new(),
            side_starts: vec![0],
            side_vectors: Vec::new(),
        };
        if p.vertices().last() != Some(&LiftedPoint::zero(n)) {
            return Err(RosaError::NotClosed(
                "edge vectors do not sum to zero".into(),
            ));
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn directions(&self) -> Vec<DirectionIndex> {
        self.edges.iter().map(|e| e.dir).collect()
    }

    /// Vertices `P_0 = 0, P_1, …, P_m = P_0`.
    pub fn vertices(&self) -> Vec<LiftedPoint> {
        let mut out = Vec::with_capacity(self.edges.len() + 1);
        let mut p = LiftedPoint::zero(self.n);
        out.push(p.clone());
        for e in &self.edges {
            p.step(e.dir);
            out.push(p.clone());
        }
        out
    }

    pub fn area(&self) -> f64 {
        walk_area(&LiftedPoint::zero(self.n), &self.directions())
    }
}

fn walk_points(start: &LiftedPoint, dirs: &[DirectionIndex]) -> Vec<LiftedPoint> {
    let mut out = Vec::with_capacity(dirs.len() + 1);
    let mut p = start.clone();
    out.push(p.clone());
    for &d in dirs {
        p.step(d);
        out.push(p.clone());
    }
    out
}

fn walk_area(start: &LiftedPoint, dirs: &[DirectionIndex]) -> f64 {
    let pts: Vec<[f64; 2]> = walk_points(start, dirs).iter().map(|p| p.embed()).collect();
    let mut a = 0.0;
    for w in pts.windows(2) {
        a += w[0][0] * w[1][1] - w[1][0] * w[0][1];
    }
    a / 2.0
}

fn turn_units(n: usize, din: DirectionIndex, dout: DirectionIndex) -> i64 {
    let two_n = 2 * n as i64;
    let t = (dout.raw(n) as i64 - din.raw(n) as i64).rem_euclid(two_n);
    if t > n as i64 {
        t - two_n
    } else {
        t
    }
}

fn left_turn(n: usize, a: DirectionIndex, b: DirectionIndex) -> bool {
    let t = turn_units(n, a, b);
    t > 0 && t < n as i64
}

/// The metatile region of class `k` with edgeword `u`: sides along `v_0`,
/// `v_k`, `-v_0`, `-v_k`, the last two reading `u` backwards.
pub fn boundary_polygon(n: usize, u: &Edgeword, k: usize) -> Result<BoundaryPolygon> {
    check_n(n)?;
    if u.n() != n {
        return Err(RosaError::DimensionMismatch {
            expected: n,
            got: u.n(),
        });
    }
    if k < 1 || k > n / 2 {
        return Err(RosaError::OutOfRange {
            what: "metatile class",
            value: k as i64,
            allowed: format!("1..={}", n / 2),
        });
    }
    if u.is_empty() {
        return Err(RosaError::PreconditionFailed("empty edgeword".into()));
    }
    let side_dirs = [0i64, k as i64, n as i64, (n + k) as i64];
    let rev = u.reversed();
    let words = [u, u, &rev, &rev];
    let mut edges = Vec::new();
    let mut half_tiles = Vec::new();
    let mut side_starts = Vec::new();
    let mut side_vectors = Vec::new();
    let mut p = LiftedPoint::zero(n);
    for side in 0..4 {
        side_starts.push(edges.len());
        let side_start = p.clone();
        let s = side_dirs[side];
        for (position, &letter) in words[side].letters().iter().enumerate() {
            if letter == 0 {
                let dir = DirectionIndex::from_raw(n, s);
                edges.push(BoundaryEdge {
                    dir,
                    side,
                    position,
                    letter,
                });
                p.step(dir);
            } else {
                let m = (letter / 2) as i64;
                let a = DirectionIndex::from_raw(n, s + m);
                let b = DirectionIndex::from_raw(n, s - m);
                half_tiles.push(Tile::from_corner(&p, a, b)?);
                for dir in [a, b] {
                    edges.push(BoundaryEdge {
                        dir,
                        side,
                        position,
                        letter,
                    });
                    p.step(dir);
                }
            }
        }
        side_vectors.push(p.sub(&side_start));
    }
    if p != LiftedPoint::zero(n) {
        return Err(RosaError::NotClosed(format!("ends at {:?}", p.coords)));
    }
    Ok(BoundaryPolygon {
        n,
        k,
        edges,
        half_tiles,
        side_starts,
        side_vectors,
    })
}

/// Outcome of [`tileability_criterion`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum CriterionOutcome {
    Ok,
    Witness { x: usize, letter: u32, j: u32 },
}

/// The counting-function test: every `x` and even `j` with `u_x < j < n` must
/// satisfy `f_{|j-2|}^{-1}(f_j(x+1)) < f_{|u_x-2|}^{-1}(f_{u_x}(x+1))`.
pub fn tileability_criterion(n: usize, u: &Edgeword) -> Result<CriterionOutcome> {
    check_n(n)?;
    if !u.has_all_letters() {
        return Err(RosaError::PreconditionFailed(
            "every letter must occur in the edgeword".into(),
        ));
    }
    if balance_constant(u) > 2 {
        return Err(RosaError::PreconditionFailed(
            "the edgeword is not 2-almost-balanced".into(),
        ));
    }
    let letters = u.letters();
    for x in 0..letters.len() {
        let ux = letters[x];
        let rhs = counting_inverse(u, ux.abs_diff(2), counting(u, ux, x + 1));
        let mut j = ux + 2;
        while (j as usize) < n {
            let lhs = counting_inverse(u, j.abs_diff(2), counting(u, j, x + 1));
            if lhs >= rhs {
                return Ok(CriterionOutcome::Witness { x, letter: ux, j });
            }
            j += 2;
        }
    }
    Ok(CriterionOutcome::Ok)
}

/// Whether the chains of the first edge `0` and the first rhombus `2` cross
/// in the corner of angle `kπ/n`, `1 ≤ k < n`.
pub fn corner_crossing_check(n: usize, u: &Edgeword, k: usize) -> Result<bool> {
    check_n(n)?;
    if u.letters().len() < 2 || u.letters()[0] != 0 || u.letters()[1] != 2 {
        return Err(RosaError::PreconditionFailed(
            "the edgeword must start with 02".into(),
        ));
    }
    if k < 1 || k >= n {
        return Err(RosaError::OutOfRange {
            what: "corner angle index",
            value: k as i64,
            allowed: format!("1..{n}"),
        });
    }
    if k <= n / 2 + 1 {
        return Ok(true);
    }
    let kp = (n - k) as u32;
    let len = u.len();
    let lhs = counting_inverse(u, 0, counting(u, 2 * kp, len) + 1);
    let rhs = counting_inverse(u, 2, counting(u, 2 * kp + 2, len) + 1);
    Ok(match (lhs, rhs) {
        (CountBound::Infinite, CountBound::Infinite) => false,
        _ => lhs > rhs,
    })
}

/// A pairing of boundary edges: `partner[t]` is matched with `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KenyonMatching {
    pub partner: Vec<usize>,
}

impl KenyonMatching {
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.partner.len())
            .filter(|&a| a < self.partner[a])
            .map(|a| (a, self.partner[a]))
            .collect()
    }
}

fn inside_open(a: usize, b: usize, x: usize) -> bool {
    a < x && x < b
}

fn interleave(p: (usize, usize), q: (usize, usize)) -> bool {
    let (a, b) = (p.0.min(p.1), p.0.max(p.1));
    inside_open(a, b, q.0) != inside_open(a, b, q.1)
}

/// Nearest non-crossing pairing per edge type, checked against K1–K4.
pub fn build_matching(p: &BoundaryPolygon) -> Result<KenyonMatching> {
    let n = p.n;
    let m = p.edges.len();
    let mut partner = vec![usize::MAX; m];
    for t in 0..n {
        let idx: Vec<usize> = (0..m).filter(|&e| p.edges[e].dir.i == t).collect();
        let plus = idx.iter().filter(|&&e| p.edges[e].dir.sign > 0).count();
        if 2 * plus != idx.len() {
            return Err(RosaError::NoMatching(KenyonProperty::K1));
        }
        let mut stack: Vec<usize> = Vec::new();
        for _ in 0..2 {
            for &e in &idx {
                if partner[e] != usize::MAX {
                    continue;
                }
                match stack.last() {
                    Some(&top) if p.edges[top].dir.sign != p.edges[e].dir.sign => {
                        stack.pop();
                        partner[top] = e;
                        partner[e] = top;
                    }
                    _ => stack.push(e),
                }
            }
            stack.clear();
        }
        if idx.iter().any(|&e| partner[e] == usize::MAX) {
            return Err(RosaError::NoMatching(KenyonProperty::K2));
        }
    }
    let matching = KenyonMatching { partner };
    if let Some(prop) = check_matching(p, &matching) {
        return Err(RosaError::NoMatching(prop));
    }
    Ok(matching)
}

/// Interior angle, in units of `π/n`, at every vertex of a closed walk with
/// the region on its left. Pinched vertices get the sum of their sectors.
fn interior_angles(
    n: usize,
    start: &LiftedPoint,
    dirs: &[DirectionIndex],
) -> HashMap<LiftedPoint, i64> {
    let pts = walk_points(start, dirs);
    let m = dirs.len();
    let mut rays: HashMap<LiftedPoint, Vec<(usize, bool)>> = HashMap::new();
    for t in 0..m {
        rays.entry(pts[t].clone())
            .or_default()
            .push((dirs[t].raw(n), true));
        rays.entry(pts[t + 1].clone())
            .or_default()
            .push((dirs[t].opposite().raw(n), false));
    }
    rays.into_iter()
        .map(|(v, rs)| (v, out_sectors(n, &rs).iter().map(|x| x.1).sum()))
        .collect()
}

/// For each outgoing ray, the ccw angle to the next incident ray.
fn out_sectors(n: usize, rays: &[(usize, bool)]) -> Vec<(usize, i64)> {
    let two_n = 2 * n;
    rays.iter()
        .filter(|r| r.1)
        .map(|&(o, _)| {
            let gap = rays
                .iter()
                .map(|&(r, _)| (r + two_n - o) % two_n)
                .filter(|&g| g > 0)
                .min()
                .unwrap_or(two_n);
            (o, gap as i64)
        })
        .collect()
}

/// The first of K1–K4 that the matching violates, if any.
///
/// K3 is checked through its monotone consequence: the matched edge lies
/// strictly further along `a^⊥` than the edge `a`.
pub fn check_matching(p: &BoundaryPolygon, mt: &KenyonMatching) -> Option<KenyonProperty> {
    let n = p.n;
    let m = p.edges.len();
    if mt.partner.len() != m {
        return Some(KenyonProperty::K1);
    }
    for a in 0..m {
        let b = mt.partner[a];
        if b >= m || mt.partner[b] != a || b == a {
            return Some(KenyonProperty::K1);
        }
        if p.edges[a].dir != p.edges[b].dir.opposite() {
            return Some(KenyonProperty::K1);
        }
    }
    let pairs = mt.pairs();
    for (x, &pa) in pairs.iter().enumerate() {
        for &pb in &pairs[x + 1..] {
            if p.edges[pa.0].dir.i == p.edges[pb.0].dir.i && interleave(pa, pb) {
                return Some(KenyonProperty::K2);
            }
        }
    }
    let verts: Vec<[f64; 2]> = p.vertices().iter().map(|v| v.embed()).collect();
    let mid = |e: usize| {
        [
            (verts[e][0] + verts[e + 1][0]) / 2.0,
            (verts[e][1] + verts[e + 1][1]) / 2.0,
        ]
    };
    for &(a, b) in &pairs {
        let v = p.edges[a].dir.vector(n);
        let perp = [-v[1], v[0]];
        let (ma, mb) = (mid(a), mid(b));
        let h = (mb[0] - ma[0]) * perp[0] + (mb[1] - ma[1]) * perp[1];
        if h <= 1e-9 {
            return Some(KenyonProperty::K3);
        }
    }
    for (x, &pa) in pairs.iter().enumerate() {
        for &pb in &pairs[x + 1..] {
            if p.edges[pa.0].dir.i == p.edges[pb.0].dir.i || !interleave(pa, pb) {
                continue;
            }
            let inner = if inside_open(pa.0, pa.1, pb.0) {
                pb.0
            } else {
                pb.1
            };
            if !left_turn(n, p.edges[pa.0].dir, p.edges[inner].dir) {
                return Some(KenyonProperty::K4);
            }
        }
    }
    None
}

/// A set of tiles filling a boundary polygon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InteriorTiling {
    pub tiles: Vec<Tile>,
}

struct Peeler {
    n: usize,
    start: LiftedPoint,
    dirs: Vec<DirectionIndex>,
    chain: Vec<usize>,
    tiles: Vec<Tile>,
}

enum Move {
    Collapse(usize),
    Peel(usize, Tile),
}

impl Peeler {
    fn new(p: &BoundaryPolygon, mt: &KenyonMatching) -> Self {
        Peeler {
            n: p.n,
            start: LiftedPoint::zero(p.n),
            dirs: p.directions(),
            chain: (0..p.len()).map(|e| e.min(mt.partner[e])).collect(),
            tiles: Vec::new(),
        }
    }

    fn other_ends(&self) -> Vec<usize> {
        let mut first: HashMap<usize, usize> = HashMap::new();
        let mut other = vec![usize::MAX; self.dirs.len()];
        for (pos, &c) in self.chain.iter().enumerate() {
            if let Some(q) = first.remove(&c) {
                other[q] = pos;
                other[pos] = q;
            } else {
                first.insert(c, pos);
            }
        }
        other
    }

    fn moves(&self) -> Vec<Move> {
        let m = self.dirs.len();
        let other = self.other_ends();
        let pts = walk_points(&self.start, &self.dirs);
        let mut out = Vec::new();
        for p in 0..m {
            let q = (p + 1) % m;
            let (d1, d2) = (self.dirs[p], self.dirs[q]);
            if d1.i == d2.i {
                if d2 == d1.opposite() && self.chain[p] == self.chain[q] {
                    out.push(Move::Collapse(p));
                }
                continue;
            }
            if !left_turn(self.n, d1, d2) {
                continue;
            }
            let (o1, o2) = (other[p], other[q]);
            if o1 == usize::MAX || o2 == usize::MAX {
                continue;
            }
            let dist = |x: usize| (x + m - q) % m;
            if dist(o1) < dist(o2) {
                if let Ok(t) = Tile::from_corner(&pts[p], d1, d2) {
                    out.push(Move::Peel(p, t));
                }
            }
        }
        out
    }

    fn first_move(&self) -> Option<Move> {
        self.moves().into_iter().next()
    }

    fn apply(&mut self, mv: Move) {
        let m = self.dirs.len();
        match mv {
            Move::Collapse(p) => {
                let q = (p + 1) % m;
                if q == 0 {
                    self.start.step(self.dirs[0]);
                }
                let (hi, lo) = (p.max(q), p.min(q));
                self.dirs.remove(hi);
                self.dirs.remove(lo);
                self.chain.remove(hi);
                self.chain.remove(lo);
            }
            Move::Peel(p, t) => {
                let q = (p + 1) % m;
                if q == 0 {
                    let (d1, d2) = (self.dirs[p], self.dirs[q]);
                    self.start.step(d1.opposite());
                    self.start.step(d2);
                }
                self.dirs.swap(p, q);
                self.chain.swap(p, q);
                self.tiles.push(t);
            }
        }
    }

    fn collapse_all(&mut self) {
        while let Some(mv) = self
            .moves()
            .into_iter()
            .find(|mv| matches!(mv, Move::Collapse(_)))
        {
            self.apply(mv);
        }
    }

    /// Peels whole orbits of tiles under the symmetry `g` while possible.
    fn run_symmetric(&mut self, g: impl Fn(&Tile) -> Tile) {
        'outer: loop {
            self.collapse_all();
            if self.dirs.is_empty() {
                return;
            }
            for mv in self.moves() {
                let Move::Peel(_, t) = &mv else { continue };
                let mut orbit = Vec::new();
                let mut cur = g(t);
                while cur != *t && orbit.len() < 2 * self.n {
                    orbit.push(cur.clone());
                    cur = g(&cur);
                }
                let mut trial = Peeler {
                    n: self.n,
                    start: self.start.clone(),
                    dirs: self.dirs.clone(),
                    chain: self.chain.clone(),
                    tiles: Vec::new(),
                };
                trial.apply(mv);
                trial.collapse_all();
                let mut complete = true;
                for target in orbit {
                    if trial.tiles.contains(&target) {
                        continue;
                    }
                    let twin = trial
                        .moves()
                        .into_iter()
                        .find(|m| matches!(m, Move::Peel(_, u) if *u == target));
                    match twin {
                        Some(twin) => {
                            trial.apply(twin);
                            trial.collapse_all();
                        }
                        None => {
                            complete = false;
                            break;
                        }
                    }
                }
                if complete {
                    let mut tiles = std::mem::take(&mut self.tiles);
                    tiles.append(&mut trial.tiles);
                    *self = Peeler { tiles, ..trial };
                    continue 'outer;
                }
            }
            return;
        }
    }

    fn run(&mut self) -> Result<()> {
        while !self.dirs.is_empty() {
            match self.first_move() {
                Some(mv) => self.apply(mv),
                None => {
                    return Err(RosaError::Stuck {
                        remaining: self.dirs.len(),
                    })
                }
            }
        }
        Ok(())
    }
}

/// The narrow rhombi required at the two ends of every side.
fn corner_tiles(p: &BoundaryPolygon) -> Option<Vec<Tile>> {
    let verts = p.vertices();
    let m = p.len();
    let mut out = Vec::new();
    for s in 0..p.side_starts.len() {
        let a = p.side_starts[s];
        let b = if s + 1 < p.side_starts.len() {
            p.side_starts[s + 1]
        } else {
            m
        };
        if b < a + 2 {
            return None;
        }
        let ends = [(a, a + 1), (b - 2, b - 1)];
        let first_ok = p.edges[a].letter == 0 && p.edges[a + 1].letter == 2;
        let last_ok = p.edges[b - 1].letter == 0 && p.edges[b - 2].letter == 2;
        if !(first_ok && last_ok) {
            return None;
        }
        for (x, y) in ends {
            let t = Tile::from_corner(&verts[x], p.edges[x].dir, p.edges[y].dir).ok()?;
            if !out.contains(&t) {
                out.push(t);
            }
        }
    }
    Some(out)
}

/// Tiles a metatile region by peeling crossings of matched chains off the
/// boundary, optionally placing the narrow corner rhombi first.
///
/// If the peeling gets stuck, the remaining region is handed to the
/// brute-force search. The result is validated before it is returned.
pub fn tile_interior(
    p: &BoundaryPolygon,
    mt: &KenyonMatching,
    force_corners: bool,
) -> Result<InteriorTiling> {
    let mut peeler = Peeler::new(p, mt);
    if force_corners {
        let targets = corner_tiles(p).ok_or(RosaError::CornerConditionFailed { k: p.k })?;
        for target in targets {
            if peeler.tiles.contains(&target) {
                continue;
            }
            let mv = peeler
                .moves()
                .into_iter()
                .find(|mv| matches!(mv, Move::Peel(_, t) if *t == target));
            match mv {
                Some(mv) => peeler.apply(mv),
                None => return Err(RosaError::CornerConditionFailed { k: p.k }),
            }
            peeler.collapse_all();
        }
    }
    if let Some(g) = metatile_symmetry(p) {
        peeler.run_symmetric(g);
    }
    if let Err(RosaError::Stuck { remaining }) = peeler.run() {
        match search_walk(p.n, &peeler.start, &peeler.dirs, DEFAULT_NODE_LIMIT) {
            BruteForceOutcome::Tiled(rest) => peeler.tiles.extend(rest.tiles),
            _ => return Err(RosaError::Stuck { remaining }),
        }
    }
    let tiling = InteriorTiling {
        tiles: peeler.tiles,
    };
    validate_tiling(p, &tiling)?;
    Ok(tiling)
}

/// The rotation of a metatile onto itself: a half turn, or a quarter turn
/// for the class `n/2`.
fn metatile_symmetry(p: &BoundaryPolygon) -> Option<impl Fn(&Tile) -> Tile> {
    if p.side_vectors.len() != 4 {
        return None;
    }
    let n = p.n as i64;
    let (steps, shift) = if 2 * p.k == p.n {
        (n / 2, p.side_vectors[0].clone())
    } else {
        (n, p.side_vectors[0].add(&p.side_vectors[1]))
    };
    Some(move |t: &Tile| t.rotate(steps).translate(&shift))
}

/// Whether the tiling of a metatile has the rotational symmetry of its
/// boundary.
pub fn is_symmetric_tiling(p: &BoundaryPolygon, tiling: &InteriorTiling) -> bool {
    let Some(g) = metatile_symmetry(p) else {
        return false;
    };
    let set: HashSet<&Tile> = tiling.tiles.iter().collect();
    tiling.tiles.iter().all(|t| set.contains(&g(t)))
}

/// Checks area, edge-to-edge adjacency, the boundary, and the angle sum at
/// every vertex.
pub fn validate_tiling(p: &BoundaryPolygon, tiling: &InteriorTiling) -> Result<()> {
    let n = p.n;
    let unique: HashSet<&Tile> = tiling.tiles.iter().collect();
    if unique.len() != tiling.tiles.len() {
        return Err(RosaError::Consistency("duplicate tiles".into()));
    }
    let area: f64 = tiling.tiles.iter().map(|t| t.area()).sum();
    let want = p.area();
    if (area - want).abs() > 1e-9 * want.abs().max(1.0) {
        return Err(RosaError::Consistency(format!(
            "tile area {area} differs from polygon area {want}"
        )));
    }
    let verts = p.vertices();
    let mut boundary: HashSet<EdgeKey> = HashSet::new();
    for (e, edge) in p.edges.iter().enumerate() {
        if !boundary.insert(EdgeKey::from_step(&verts[e], edge.dir)) {
            return Err(RosaError::Consistency("boundary reuses an edge".into()));
        }
    }
    let mut count: HashMap<EdgeKey, usize> = HashMap::new();
    for t in &tiling.tiles {
        for e in t.edges() {
            *count.entry(e).or_default() += 1;
        }
    }
    for b in &boundary {
        if count.get(b) != Some(&1) {
            return Err(RosaError::Consistency(format!(
                "boundary edge {:?}/{} covered {:?} times",
                b.start.coords,
                b.t,
                count.get(b)
            )));
        }
    }
    for (e, c) in &count {
        if !boundary.contains(e) && *c != 2 {
            return Err(RosaError::Consistency(format!(
                "interior edge {:?}/{} shared by {c} tiles",
                e.start.coords, e.t
            )));
        }
    }
    let expected = interior_angles(n, &LiftedPoint::zero(n), &p.directions());
    let mut angle: HashMap<LiftedPoint, i64> = HashMap::new();
    for t in &tiling.tiles {
        for (idx, v) in t.vertices().into_iter().enumerate() {
            *angle.entry(v).or_default() += t.vertex_angle_units(idx) as i64;
        }
    }
    for (v, a) in &angle {
        let want = expected.get(v).copied().unwrap_or(2 * n as i64);
        if *a != want {
            return Err(RosaError::Consistency(format!(
                "angle sum {a} at {:?}, expected {want}",
                v.coords
            )));
        }
    }
    Ok(())
}

/// The chains of a tiling as a matching of the polygon's boundary edges.
pub fn matching_from_tiling(
    p: &BoundaryPolygon,
    tiling: &InteriorTiling,
) -> Result<KenyonMatching> {
    let verts = p.vertices();
    let keys: Vec<EdgeKey> = p
        .edges
        .iter()
        .enumerate()
        .map(|(e, edge)| EdgeKey::from_step(&verts[e], edge.dir))
        .collect();
    let index: HashMap<&EdgeKey, usize> = keys.iter().enumerate().map(|(e, k)| (k, e)).collect();
    let mut by_edge: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (ti, t) in tiling.tiles.iter().enumerate() {
        for e in t.edges() {
            by_edge.entry(e).or_default().push(ti);
        }
    }
    let mut partner = vec![usize::MAX; keys.len()];
    for (e, key) in keys.iter().enumerate() {
        let mut cur = key.clone();
        let mut prev = usize::MAX;
        loop {
            let next = by_edge
                .get(&cur)
                .and_then(|ts| ts.iter().copied().find(|&t| t != prev))
                .ok_or_else(|| RosaError::Consistency("chain leaves the tiling".into()))?;
            let t = &tiling.tiles[next];
            let (i, j) = t.ty;
            let n = t.n();
            let other_dir = if cur.t == i { j } else { i };
            let opposite = if cur.start == t.pos {
                EdgeKey {
                    start: t.pos.add(&LiftedPoint::unit(n, other_dir)),
                    t: cur.t,
                }
            } else {
                EdgeKey {
                    start: t.pos.clone(),
                    t: cur.t,
                }
            };
            if let Some(&end) = index.get(&opposite) {
                partner[e] = end;
                break;
            }
            prev = next;
            cur = opposite;
        }
    }
    Ok(KenyonMatching { partner })
}

/// Outcome of the exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteForceOutcome {
    Tiled(InteriorTiling),
    Untileable,
    LimitExceeded,
}

/// Exhaustive backtracking: always fills the corner at the lowest, then
/// leftmost, boundary vertex.
pub fn brute_force_tile(p: &BoundaryPolygon, node_limit: usize) -> BruteForceOutcome {
    match search_walk(p.n, &LiftedPoint::zero(p.n), &p.directions(), node_limit) {
        BruteForceOutcome::Tiled(t) => match validate_tiling(p, &t) {
            Ok(()) => BruteForceOutcome::Tiled(t),
            Err(_) => BruteForceOutcome::Untileable,
        },
        other => other,
    }
}

type DirectedEdge = (LiftedPoint, usize);

struct Search {
    n: usize,
    nodes: usize,
    limit: usize,
    failed: HashSet<u128>,
}

fn region_hash(region: &[DirectedEdge]) -> u128 {
    use std::hash::{Hash, Hasher};
    let mut out = 0u128;
    for salt in 0..2u8 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        salt.hash(&mut h);
        region.hash(&mut h);
        out = (out << 64) | h.finish() as u128;
    }
    out
}

enum Found {
    Yes(Vec<Tile>),
    No,
    Limit,
}

fn winding(edges: &[([f64; 2], [f64; 2])], q: [f64; 2]) -> i32 {
    let mut w = 0;
    for &(a, b) in edges {
        let cross = (b[0] - a[0]) * (q[1] - a[1]) - (q[0] - a[0]) * (b[1] - a[1]);
        if a[1] <= q[1] {
            if b[1] > q[1] && cross > 0.0 {
                w += 1;
            }
        } else if b[1] <= q[1] && cross < 0.0 {
            w -= 1;
        }
    }
    w
}

fn segment_hits_interior(quad: &[[f64; 2]; 4], a: [f64; 2], b: [f64; 2]) -> bool {
    let eps = 1e-9;
    let mut axes = Vec::with_capacity(3);
    for t in 0..2 {
        let e = [quad[t + 1][0] - quad[t][0], quad[t + 1][1] - quad[t][1]];
        axes.push([-e[1], e[0]]);
    }
    axes.push([-(b[1] - a[1]), b[0] - a[0]]);
    for ax in axes {
        let proj = |p: [f64; 2]| p[0] * ax[0] + p[1] * ax[1];
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in quad {
            lo = lo.min(proj(*v));
            hi = hi.max(proj(*v));
        }
        let (sa, sb) = (proj(a), proj(b));
        let (slo, shi) = (sa.min(sb), sa.max(sb));
        if shi <= lo + eps || slo >= hi - eps {
            return false;
        }
    }
    true
}

impl Search {
    fn run(&mut self, region: &[DirectedEdge]) -> Found {
        if region.is_empty() {
            return Found::Yes(Vec::new());
        }
        let key = region_hash(region);
        if self.failed.contains(&key) {
            return Found::No;
        }
        let n = self.n;
        let seg: Vec<([f64; 2], [f64; 2])> = region
            .iter()
            .map(|(p, d)| {
                let q = p.stepped(DirectionIndex::from_raw(n, *d as i64));
                (p.embed(), q.embed())
            })
            .collect();
        let mut best = 0;
        for t in 1..region.len() {
            let (a, b) = (seg[t].0, seg[best].0);
            let lower = a[1] < b[1] - 1e-9 || (a[1] <= b[1] + 1e-9 && a[0] < b[0] - 1e-9);
            let same = (a[1] - b[1]).abs() <= 1e-9 && (a[0] - b[0]).abs() <= 1e-9;
            if lower || (same && region[t].1 < region[best].1) {
                best = t;
            }
        }
        let corner = region[best].0.clone();
        let dout = DirectionIndex::from_raw(n, region[best].1 as i64);
        let mut rays: Vec<(usize, bool)> = Vec::new();
        for (p, d) in region {
            let dir = DirectionIndex::from_raw(n, *d as i64);
            if *p == corner {
                rays.push((*d, true));
            }
            if p.stepped(dir) == corner {
                rays.push((dir.opposite().raw(n), false));
            }
        }
        let steps = out_sectors(n, &rays)
            .into_iter()
            .find(|x| x.0 == dout.raw(n))
            .map_or(0, |x| x.1 as usize);
        for s in 1..=steps {
            let d = DirectionIndex::from_raw(n, (dout.raw(n) + s) as i64);
            if d.i == dout.i {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.limit {
                return Found::Limit;
            }
            let tile = match Tile::from_corner(&corner, dout, d) {
                Ok(t) => t,
                Err(_) => continue,
            };
            let quad = tile.embedded_vertices();
            if winding(&seg, tile.embedded_center()) != 1 {
                continue;
            }
            if seg.iter().any(|&(a, b)| segment_hits_interior(&quad, a, b)) {
                continue;
            }
            let Some(next) = remove_tile(n, region, &corner, dout, d) else {
                continue;
            };
            match self.run(&next) {
                Found::Yes(mut ts) => {
                    ts.push(tile);
                    return Found::Yes(ts);
                }
                Found::Limit => return Found::Limit,
                Found::No => {}
            }
        }
        self.failed.insert(key);
        Found::No
    }
}

/// The boundary of the region minus the rhombus at `corner` spanned by `a`
/// then `b` counterclockwise, or `None` if the rhombus overlaps the outside.
fn remove_tile(
    n: usize,
    region: &[DirectedEdge],
    corner: &LiftedPoint,
    a: DirectionIndex,
    b: DirectionIndex,
) -> Option<Vec<DirectedEdge>> {
    let mut set: std::collections::BTreeSet<DirectedEdge> = region.iter().cloned().collect();
    let mut p = corner.clone();
    for d in [a, b, a.opposite(), b.opposite()] {
        let q = p.stepped(d);
        if !set.remove(&(p.clone(), d.raw(n))) {
            let rev = (q.clone(), d.opposite().raw(n));
            if !set.insert(rev) {
                return None;
            }
        }
        p = q;
    }
    Some(set.into_iter().collect())
}

fn search_walk(
    n: usize,
    start: &LiftedPoint,
    dirs: &[DirectionIndex],
    node_limit: usize,
) -> BruteForceOutcome {
    let mut s = Search {
        n,
        nodes: 0,
        limit: node_limit,
        failed: HashSet::new(),
    };
    let pts = walk_points(start, dirs);
    let mut set: std::collections::BTreeSet<DirectedEdge> = std::collections::BTreeSet::new();
    for (t, d) in dirs.iter().enumerate() {
        let rev = (pts[t + 1].clone(), d.opposite().raw(n));
        if !set.remove(&rev) {
            set.insert((pts[t].clone(), d.raw(n)));
        }
    }
    let region: Vec<DirectedEdge> = set.into_iter().collect();
    match s.run(&region) {
        Found::Yes(mut tiles) => {
            tiles.reverse();
            BruteForceOutcome::Tiled(InteriorTiling { tiles })
        }
        Found::No => BruteForceOutcome::Untileable,
        Found::Limit => BruteForceOutcome::LimitExceeded,
    }
}
