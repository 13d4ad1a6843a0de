//! The de Bruijn multigrid with all offsets `1/2` and its dual rhombus tiling.
//!
//! Family `j` consists of the lines `⟨x, v_j⟩ = k + 1/2`, `k ∈ Z`, with
//! `v_j = (cos(jπ/n), sin(jπ/n))`. A point off the lines lies in the strip
//! `K_j(x) = round(⟨x, v_j⟩)` of every family; the intersection of a line of
//! family `a` with a line of family `b` is dual to the rhombus of type `(a, b)`
//! whose lowest vertex is the vector of strip indices.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::f64::consts::PI;

use crate::edgeword::Edgeword;
use crate::error::{Result, RosaError};
use crate::geometry::{
    check_n, compare_exact, AlgebraicReal, DirectionIndex, EdgeKey, LiftedPoint, Tile,
};
use crate::substitution::LiftedPatch;

/// Largest number of grid intersections a patch may use.
pub const DEFAULT_INTERSECTION_CAP: usize = 4_000_000;

const TRIPLE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Multigrid {
    pub n: usize,
    normals: Vec<[f64; 2]>,
}

impl Multigrid {
    pub fn new(n: usize) -> Result<Self> {
        check_n(n)?;
        let normals = (0..n)
            .map(|j| {
                let a = j as f64 * PI / n as f64;
                [a.cos(), a.sin()]
            })
            .collect();
        Ok(Multigrid { n, normals })
    }

    /// Offset of every family.
    pub fn offset(&self) -> f64 {
        0.5
    }

    /// `⟨x, v_j⟩`.
    pub fn level(&self, j: usize, x: [f64; 2]) -> f64 {
        x[0] * self.normals[j][0] + x[1] * self.normals[j][1]
    }

    /// Intersection of the line `k` of family `a` with the line `l` of family `b`.
    pub fn intersection(&self, a: usize, k: i64, b: usize, l: i64) -> [f64; 2] {
        let (p, q) = (self.normals[a], self.normals[b]);
        let (r, s) = (k as f64 + 0.5, l as f64 + 0.5);
        let det = p[0] * q[1] - p[1] * q[0];
        [(r * q[1] - s * p[1]) / det, (p[0] * s - q[0] * r) / det]
    }

    /// The dual rhombus of an intersection.
    pub fn dual_tile(&self, a: usize, k: i64, b: usize, l: i64) -> Result<Tile> {
        let x = self.intersection(a, k, b, l);
        let mut pos = vec![0i64; self.n];
        for (j, c) in pos.iter_mut().enumerate() {
            if j == a {
                *c = k;
            } else if j == b {
                *c = l;
            } else {
                let t = self.level(j, x);
                if (t - t.floor() - 0.5).abs() < TRIPLE_TOL {
                    return Err(RosaError::TripleIntersection { x: x[0], y: x[1] });
                }
                *c = t.round() as i64;
            }
        }
        Tile::new(LiftedPoint::from_coords(pos), a.min(b), a.max(b))
    }

    fn tiles_where(
        &self,
        reach: f64,
        cap: usize,
        keep: impl Fn([f64; 2]) -> bool,
    ) -> Result<Vec<Tile>> {
        let n = self.n;
        let kmax = reach.ceil() as i64 + 1;
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for k in -kmax..kmax {
                    for l in -kmax..kmax {
                        let x = self.intersection(a, k, b, l);
                        if !keep(x) {
                            continue;
                        }
                        out.push(self.dual_tile(a, k, b, l)?);
                        if out.len() > cap {
                            return Err(RosaError::CapExceeded(format!(
                                "more than {cap} intersections"
                            )));
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Dual tiles of the intersections at distance at most `radius` from the
/// origin.
pub fn dual_patch(n: usize, radius: f64) -> Result<LiftedPatch> {
    dual_patch_capped(n, radius, DEFAULT_INTERSECTION_CAP)
}

pub fn dual_patch_capped(n: usize, radius: f64, cap: usize) -> Result<LiftedPatch> {
    if !(radius > 0.0) {
        return Err(RosaError::PreconditionFailed(
            "radius must be positive".into(),
        ));
    }
    let g = Multigrid::new(n)?;
    let tiles = g.tiles_where(radius, cap, |x| x[0].hypot(x[1]) <= radius)?;
    Ok(LiftedPatch::from_tiles(n, tiles))
}

/// Crossings of the positive horizontal half-line with the grid lines.
///
/// A line of family `0` is crossed alone and emits `0`. The lines `(j, k)` and
/// `(n - j, -k - 1)` are mirror images across the axis, so they cross it
/// together and emit `2 min(j, n - j)`. Family `n/2` is parallel to the axis.
pub fn halfline_word(n: usize, len: usize) -> Result<Edgeword> {
    check_n(n)?;
    if len == 0 {
        return Edgeword::empty(n);
    }
    let h = n / 2;
    let total: f64 = (0..h).map(|j| (j as f64 * PI / n as f64).cos()).sum();
    let mut reach = (len as f64 + h as f64) / total + 1.0;
    loop {
        let mut events: Vec<(f64, usize, AlgebraicReal)> = Vec::new();
        let mut seen: HashSet<(usize, i64)> = HashSet::new();
        for j in 0..n {
            if 2 * j == n {
                continue;
            }
            let c = (j as f64 * PI / n as f64).cos();
            let kmax = (reach * c.abs()).ceil() as i64 + 1;
            for k in -kmax..=kmax {
                let t = (k as f64 + 0.5) / c;
                if t <= 0.0 || t > reach {
                    continue;
                }
                let (fam, idx) = if j > h { (n - j, -k - 1) } else { (j, k) };
                if !seen.insert((fam, idx)) {
                    continue;
                }
                let exact = AlgebraicReal::rational(2 * idx + 1, 2)
                    .div(&AlgebraicReal::cos_pi(fam as i64, n as i64));
                events.push((t, 2 * fam, exact));
            }
        }
        let failure: RefCell<Option<RosaError>> = RefCell::new(None);
        events.sort_by(|a, b| {
            if (a.0 - b.0).abs() > 1e-6 {
                return a.0.total_cmp(&b.0);
            }
            compare_exact(&a.2, &b.2).unwrap_or_else(|e| {
                failure.borrow_mut().get_or_insert(e);
                Ordering::Equal
            })
        });
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        if events.len() > len && events[len - 1].0 < reach - 1.0 {
            let letters = events[..len].iter().map(|e| e.1 as u32).collect();
            return Edgeword::new(n, letters);
        }
        reach *= 2.0;
    }
}

/// Reads the word along the side of the cone at the origin in direction
/// `v_side`, following edges and bisected rhombi present in `patch`, for at
/// most `depth` letters.
pub fn cone_side_word(patch: &LiftedPatch, side: usize, depth: usize) -> Result<Edgeword> {
    let n = patch.n;
    let edges: HashSet<EdgeKey> = patch.iter().flat_map(|t| t.edges()).collect();
    let s = side as i64;
    let mut p = LiftedPoint::zero(n);
    let mut letters = Vec::with_capacity(depth);
    while letters.len() < depth {
        let m = (1..n as i64 / 2).find(|&m| {
            let a = DirectionIndex::from_raw(n, s + m);
            let b = DirectionIndex::from_raw(n, s - m);
            Tile::from_corner(&p, a, b).is_ok_and(|t| patch.contains(&t))
        });
        if let Some(m) = m {
            letters.push(2 * m as u32);
            p.step(DirectionIndex::from_raw(n, s + m));
            p.step(DirectionIndex::from_raw(n, s - m));
            continue;
        }
        let d0 = DirectionIndex::from_raw(n, s);
        if !edges.contains(&EdgeKey::from_step(&p, d0)) {
            break;
        }
        letters.push(0);
        p.step(d0);
    }
    Edgeword::new(n, letters)
}

/// The part of the dual tiling near both sides of the cone between `v_0`
/// and `v_1`, far enough to read `depth` letters.
pub fn cone_patch(n: usize, depth: usize) -> Result<LiftedPatch> {
    let g = Multigrid::new(n)?;
    let length = 2.0 * depth as f64 + 2.0;
    let scale = n as f64 / 2.0;
    let band = n as f64;
    let dirs: Vec<[f64; 2]> = (0..2)
        .map(|s| {
            let a = s as f64 * PI / n as f64;
            [a.cos(), a.sin()]
        })
        .collect();
    let near = |x: [f64; 2]| {
        let y = [x[0] * scale, x[1] * scale];
        dirs.iter().any(|d| {
            let t = (y[0] * d[0] + y[1] * d[1]).clamp(0.0, length);
            (y[0] - t * d[0]).hypot(y[1] - t * d[1]) <= band
        })
    };
    let tiles = g.tiles_where(length / scale + 2.0, DEFAULT_INTERSECTION_CAP, near)?;
    Ok(LiftedPatch::from_tiles(n, tiles))
}

/// Whether both sides of the cone of angle `π/n` at the origin carry the
/// word `w` up to `depth` letters.
pub fn cone_carries_word(n: usize, depth: usize) -> Result<bool> {
    let w = crate::edgeword::billiard_prefix(n, depth)?;
    let patch = cone_patch(n, depth)?;
    for side in 0..2 {
        if cone_side_word(&patch, side, depth)? != w {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Distinct tile types of a patch.
pub fn type_set(p: &LiftedPatch) -> BTreeSet<(usize, usize)> {
    p.iter().map(|t| t.ty).collect()
}
