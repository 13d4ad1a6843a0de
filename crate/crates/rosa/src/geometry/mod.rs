//! Edge directions, lifted points and tiles in `Z^n`, the planes `E_n^k`,
//! and exact comparison of algebraic reals.

mod algebraic;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use algebraic::{compare_exact, compare_exact_with, AlgebraicReal, Interval, DEFAULT_MAX_BITS};

use crate::error::{Result, RosaError};

/// Absolute tolerance used for float comparisons unless configured otherwise.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Rejects odd `n` and `n < 4`.
pub fn check_n(n: usize) -> Result<()> {
    if n < 4 || n % 2 != 0 {
        return Err(RosaError::InvalidN(n));
    }
    Ok(())
}

/// One of the `2n` unit directions `±v_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DirectionIndex {
    pub i: usize,
    pub sign: i8,
}

impl DirectionIndex {
    pub fn new(i: usize, sign: i8) -> Self {
        DirectionIndex {
            i,
            sign: if sign < 0 { -1 } else { 1 },
        }
    }

    /// The direction `v_d` for any integer `d`, using `v_{d+n} = -v_d`.
    pub fn from_raw(n: usize, d: i64) -> Self {
        let r = d.rem_euclid(2 * n as i64) as usize;
        if r < n {
            DirectionIndex::new(r, 1)
        } else {
            DirectionIndex::new(r - n, -1)
        }
    }

    /// Index in `0..2n`.
    pub fn raw(&self, n: usize) -> usize {
        if self.sign > 0 {
            self.i
        } else {
            self.i + n
        }
    }

    pub fn opposite(&self) -> Self {
        DirectionIndex::new(self.i, -self.sign)
    }

    /// Unit vector in the plane.
    pub fn vector(&self, n: usize) -> [f64; 2] {
        let a = self.i as f64 * PI / n as f64;
        let s = self.sign as f64;
        [s * a.cos(), s * a.sin()]
    }
}

/// `sign * (cos(iπ/n), sin(iπ/n))`.
pub fn direction_vector(n: usize, d: DirectionIndex) -> Result<[f64; 2]> {
    check_n(n)?;
    if d.i >= n {
        return Err(RosaError::OutOfRange {
            what: "direction index",
            value: d.i as i64,
            allowed: format!("0..{n}"),
        });
    }
    Ok(d.vector(n))
}

/// A point of `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LiftedPoint {
    pub coords: Vec<i64>,
}

impl LiftedPoint {
    pub fn zero(n: usize) -> Self {
        LiftedPoint { coords: vec![0; n] }
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut p = Self::zero(n);
        p.coords[i] = 1;
        p
    }

    pub fn from_coords(coords: Vec<i64>) -> Self {
        LiftedPoint { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn add(&self, o: &LiftedPoint) -> LiftedPoint {
        LiftedPoint {
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, o: &LiftedPoint) -> LiftedPoint {
        LiftedPoint {
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> LiftedPoint {
        LiftedPoint {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, s: i64) -> LiftedPoint {
        LiftedPoint {
            coords: self.coords.iter().map(|a| a * s).collect(),
        }
    }

    /// Adds `sign * e_i` in place.
    pub fn step(&mut self, d: DirectionIndex) {
        self.coords[d.i] += d.sign as i64;
    }

    pub fn stepped(&self, d: DirectionIndex) -> LiftedPoint {
        let mut p = self.clone();
        p.step(d);
        p
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|&c| c as f64).collect()
    }

    /// Image in the tiling plane: `Σ x_i v_i`.
    pub fn embed(&self) -> [f64; 2] {
        let n = self.coords.len();
        let mut x = 0.0;
        let mut y = 0.0;
        for (i, &c) in self.coords.iter().enumerate() {
            if c != 0 {
                let a = i as f64 * PI / n as f64;
                x += c as f64 * a.cos();
                y += c as f64 * a.sin();
            }
        }
        [x, y]
    }

    pub fn norm_sq(&self) -> i64 {
        self.coords.iter().map(|c| c * c).sum()
    }
}

/// Applies the rotation by `steps · π/n`: `e_i ↦ e_{i+1}`, `e_{n-1} ↦ -e_0`.
pub fn rotate_lifted(p: &LiftedPoint, steps: i64) -> LiftedPoint {
    let n = p.dim();
    let s = steps.rem_euclid(2 * n as i64) as usize;
    let mut out = vec![0; n];
    for (i, &c) in p.coords.iter().enumerate() {
        let t = i + s;
        let sign = if (t / n) % 2 == 0 { 1 } else { -1 };
        out[t % n] = sign * c;
    }
    LiftedPoint { coords: out }
}

/// Undirected unit edge `[start, start + e_t]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeKey {
    pub start: LiftedPoint,
    pub t: usize,
}

impl EdgeKey {
    /// Key of the edge from `p` in direction `d`.
    pub fn from_step(p: &LiftedPoint, d: DirectionIndex) -> Self {
        if d.sign > 0 {
            EdgeKey {
                start: p.clone(),
                t: d.i,
            }
        } else {
            EdgeKey {
                start: p.stepped(d),
                t: d.i,
            }
        }
    }
}

/// The unit square `pos + [0,1] e_i + [0,1] e_j` of `Z^n`, `i < j`, which
/// projects to a rhombus with edges `v_i` and `v_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Tile {
    pub pos: LiftedPoint,
    #[serde(rename = "type")]
    pub ty: (usize, usize),
}

impl Tile {
    pub fn new(pos: LiftedPoint, i: usize, j: usize) -> Result<Self> {
        let n = pos.dim();
        if !(i < j && j < n) {
            return Err(RosaError::OutOfRange {
                what: "tile type",
                value: j as i64,
                allowed: format!("i < j < {n}, got ({i}, {j})"),
            });
        }
        Ok(Tile { pos, ty: (i, j) })
    }

    /// The tile with a vertex at `p` and edges along directions `a` and `b`.
    pub fn from_corner(p: &LiftedPoint, a: DirectionIndex, b: DirectionIndex) -> Result<Self> {
        if a.i == b.i {
            return Err(RosaError::Consistency(format!(
                "parallel edges {a:?} and {b:?} do not span a tile"
            )));
        }
        let mut pos = p.clone();
        if a.sign < 0 {
            pos.coords[a.i] -= 1;
        }
        if b.sign < 0 {
            pos.coords[b.i] -= 1;
        }
        Ok(Tile {
            pos,
            ty: (a.i.min(b.i), a.i.max(b.i)),
        })
    }

    pub fn n(&self) -> usize {
        self.pos.dim()
    }

    /// Angle at `pos`, in units of `π/n`.
    pub fn angle_units(&self) -> usize {
        self.ty.1 - self.ty.0
    }

    /// Metatile class `k ∈ 1..=n/2`: the tile has angles `kπ/n` and `(n-k)π/n`.
    pub fn class(&self) -> usize {
        let a = self.angle_units();
        a.min(self.n() - a)
    }

    pub fn area(&self) -> f64 {
        (self.angle_units() as f64 * PI / self.n() as f64).sin()
    }

    /// Vertices in counterclockwise order starting at `pos`.
    pub fn vertices(&self) -> [LiftedPoint; 4] {
        let n = self.n();
        let a = self.pos.clone();
        let b = a.add(&LiftedPoint::unit(n, self.ty.0));
        let c = b.add(&LiftedPoint::unit(n, self.ty.1));
        let d = a.add(&LiftedPoint::unit(n, self.ty.1));
        [a, b, c, d]
    }

    pub fn embedded_vertices(&self) -> [[f64; 2]; 4] {
        let v = self.vertices();
        [v[0].embed(), v[1].embed(), v[2].embed(), v[3].embed()]
    }

    pub fn embedded_center(&self) -> [f64; 2] {
        let v = self.embedded_vertices();
        [(v[0][0] + v[2][0]) / 2.0, (v[0][1] + v[2][1]) / 2.0]
    }

    pub fn edges(&self) -> [EdgeKey; 4] {
        let n = self.n();
        let (i, j) = self.ty;
        let pi = self.pos.add(&LiftedPoint::unit(n, i));
        let pj = self.pos.add(&LiftedPoint::unit(n, j));
        [
            EdgeKey {
                start: self.pos.clone(),
                t: i,
            },
            EdgeKey {
                start: self.pos.clone(),
                t: j,
            },
            EdgeKey { start: pi, t: j },
            EdgeKey { start: pj, t: i },
        ]
    }

    pub fn translate(&self, by: &LiftedPoint) -> Tile {
        Tile {
            pos: self.pos.add(by),
            ty: self.ty,
        }
    }

    /// Interior angle at vertex `idx` (in the order of [`Tile::vertices`]), in units of `π/n`.
    pub fn vertex_angle_units(&self, idx: usize) -> usize {
        if idx % 2 == 0 {
            self.angle_units()
        } else {
            self.n() - self.angle_units()
        }
    }

    /// The tile rotated by `steps · π/n` about the origin.
    pub fn rotate(&self, steps: i64) -> Tile {
        let n = self.n();
        let p = rotate_lifted(&self.pos, steps);
        let a = DirectionIndex::from_raw(n, self.ty.0 as i64 + steps);
        let b = DirectionIndex::from_raw(n, self.ty.1 as i64 + steps);
        Tile::from_corner(&p, a, b).expect("rotation keeps edges independent")
    }
}

/// Generators of the plane `E_n^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneBasis {
    pub n: usize,
    pub k: usize,
    pub cos_row: Vec<f64>,
    pub sin_row: Vec<f64>,
}

/// The plane spanned by `(cos((2k+1)iπ/n))_i` and `(sin((2k+1)iπ/n))_i`.
pub fn plane_basis(n: usize, k: usize) -> Result<PlaneBasis> {
    check_n(n)?;
    if k >= n / 2 {
        return Err(RosaError::OutOfRange {
            what: "plane index",
            value: k as i64,
            allowed: format!("0..{}", n / 2),
        });
    }
    let f = (2 * k + 1) as f64 * PI / n as f64;
    Ok(PlaneBasis {
        n,
        k,
        cos_row: (0..n).map(|i| (f * i as f64).cos()).collect(),
        sin_row: (0..n).map(|i| (f * i as f64).sin()).collect(),
    })
}

impl PlaneBasis {
    /// Coordinates of the orthogonal projection in the orthonormal frame
    /// `(cos_row, sin_row) / sqrt(n/2)`.
    pub fn project(&self, p: &[f64]) -> [f64; 2] {
        let s = (self.n as f64 / 2.0).sqrt();
        let a: f64 = p.iter().zip(&self.cos_row).map(|(x, c)| x * c).sum();
        let b: f64 = p.iter().zip(&self.sin_row).map(|(x, c)| x * c).sum();
        [a / s, b / s]
    }

    /// Coordinates of the projection of an integer point.
    pub fn project_lifted(&self, p: &LiftedPoint) -> [f64; 2] {
        let s = (self.n as f64 / 2.0).sqrt();
        let mut a = 0.0;
        let mut b = 0.0;
        for (i, &c) in p.coords.iter().enumerate() {
            if c != 0 {
                a += c as f64 * self.cos_row[i];
                b += c as f64 * self.sin_row[i];
            }
        }
        [a / s, b / s]
    }
}

/// Euclidean distance from `p` to the plane spanned by `basis`.
pub fn slope_distance_f64(p: &[f64], basis: &PlaneBasis) -> Result<f64> {
    if p.len() != basis.n {
        return Err(RosaError::DimensionMismatch {
            expected: basis.n,
            got: p.len(),
        });
    }
    let [a, b] = basis.project(p);
    let s = (basis.n as f64 / 2.0).sqrt();
    let r: f64 = p
        .iter()
        .enumerate()
        .map(|(i, x)| x - (a * basis.cos_row[i] + b * basis.sin_row[i]) / s)
        .map(|d| d * d)
        .sum();
    Ok(r.sqrt())
}

/// Euclidean distance from the lifted point `p` to the plane spanned by `basis`.
pub fn slope_distance(p: &LiftedPoint, basis: &PlaneBasis) -> Result<f64> {
    slope_distance_f64(&p.as_f64(), basis)
}
