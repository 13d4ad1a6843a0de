//! Deviation of lifted patches from the slope `E_n^0` and growth estimates.
//!
//! Patches `σ^k(seed)` grow geometrically, so deviations are computed from the
//! self-similar structure of the vertex set instead of from explicit patches:
//! for a direction `u` the support function of the vertices of `σ^k(t)`
//! satisfies a recursion over the metatiles. Maximising the support over unit
//! directions orthogonal to the slope gives the deviation.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Result, RosaError};
use crate::geometry::{plane_basis, slope_distance, LiftedPoint, PlaneBasis};
use crate::substitution::{apply_audited, tile_types, LiftedPatch, SubstitutionRule};

/// Directions sampled per plane when bounding the projections.
pub const PLANE_SAMPLES: usize = 64;

/// Growth allowed over the deviation at iteration 2 before a profile stops
/// counting as bounded.
pub const BOUNDED_EVIDENCE_FACTOR: f64 = 3.0;

const ASCENT_STARTS: usize = 8;
const ASCENT_STEPS: usize = 30;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviationRow {
    pub iteration: usize,
    /// Number of distinct vertices, when the patch was built explicitly.
    pub vertices: Option<usize>,
    /// Largest distance of a vertex to `E_n^0`, attained by an actual vertex.
    pub deviation: f64,
    /// Upper bound on the deviation; equal to it for explicit patches.
    pub upper: f64,
    /// Largest projection norm of a vertex onto each plane `E_n^j`.
    pub planes: Vec<f64>,
    /// `deviation_k / deviation_{k-1}`.
    pub ratio: Option<f64>,
    /// A vertex attaining the deviation.
    pub witness: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviationProfile {
    pub n: usize,
    pub rows: Vec<DeviationRow>,
}

impl DeviationProfile {
    pub fn deviations(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.deviation).collect()
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.ratio).collect()
    }

    fn fill_ratios(&mut self) {
        for k in 1..self.rows.len() {
            let prev = self.rows[k - 1].deviation;
            self.rows[k].ratio = (prev > 0.0).then(|| self.rows[k].deviation / prev);
        }
    }
}

/// Heuristic verdict from a deviation profile. It is evidence, not a proof.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum PlanarityVerdict {
    BoundedEvidence,
    GrowthEvidence { rate: f64 },
}

/// Growth when the last three ratios all exceed `1 + growth_tol`, with their
/// geometric mean as the rate.
pub fn planarity_verdict(p: &DeviationProfile, growth_tol: f64) -> Result<PlanarityVerdict> {
    let r = p.ratios();
    if p.rows.len() < 4 || r.len() < 3 {
        return Err(RosaError::PreconditionFailed(
            "a verdict needs at least three iterations after the seed".into(),
        ));
    }
    let last = &r[r.len() - 3..];
    if last.iter().all(|x| *x > 1.0 + growth_tol) {
        let rate = last.iter().product::<f64>().cbrt();
        Ok(PlanarityVerdict::GrowthEvidence { rate })
    } else {
        Ok(PlanarityVerdict::BoundedEvidence)
    }
}

/// Whether no deviation exceeds `factor` times the deviation at iteration 2.
pub fn bounded_evidence(p: &DeviationProfile, factor: f64) -> bool {
    let Some(base) = p.rows.get(2).map(|r| r.deviation) else {
        return false;
    };
    p.rows.iter().all(|r| r.deviation <= factor * base + 1e-12)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn unit_in_plane(b: &PlaneBasis, theta: f64) -> Vec<f64> {
    let s = (b.n as f64 / 2.0).sqrt();
    (0..b.n)
        .map(|i| (theta.cos() * b.cos_row[i] + theta.sin() * b.sin_row[i]) / s)
        .collect()
}

/// Vertex sets of `σ^k(seed)` through the metatile recursion.
struct Support<'a> {
    rule: &'a SubstitutionRule,
    n: usize,
    /// Per type: the tiles of its image as `(position, type index)`.
    children: Vec<Vec<(LiftedPoint, usize)>>,
    /// Per type: the four vertices of the tile at the origin.
    corners: Vec<Vec<LiftedPoint>>,
    seed: Vec<(LiftedPoint, usize)>,
}

impl<'a> Support<'a> {
    fn new(rule: &'a SubstitutionRule, seed: &LiftedPatch) -> Self {
        let n = rule.n;
        let types = tile_types(n);
        let index: HashMap<(usize, usize), usize> =
            types.iter().enumerate().map(|(a, t)| (*t, a)).collect();
        let children = types
            .iter()
            .map(|t| {
                rule.image_of_type(*t)
                    .iter()
                    .map(|(s, _)| (s.pos.clone(), index[&s.ty]))
                    .collect()
            })
            .collect();
        let corners = types
            .iter()
            .map(|&(i, j)| {
                crate::geometry::Tile::new(LiftedPoint::zero(n), i, j)
                    .expect("valid type")
                    .vertices()
                    .to_vec()
            })
            .collect();
        let seed = seed.iter().map(|t| (t.pos.clone(), index[&t.ty])).collect();
        Support {
            rule,
            n,
            children,
            corners,
            seed,
        }
    }

    /// The vertex of `σ^k(seed)` maximising `⟨v, u⟩`.
    fn argmax(&self, u: &[f64], k: usize) -> LiftedPoint {
        let mut w = vec![u.to_vec()];
        for m in 1..=k {
            w.push(self.rule.expansion.apply_f64(&w[m - 1]));
        }
        let mut h: Vec<f64> = Vec::new();
        let mut choice: Vec<Vec<usize>> = Vec::with_capacity(k + 1);
        let mut c0 = Vec::new();
        for cs in &self.corners {
            let (best, val) = cs
                .iter()
                .enumerate()
                .map(|(a, v)| (a, dot(&v.as_f64(), u)))
                .fold(
                    (0, f64::NEG_INFINITY),
                    |acc, x| if x.1 > acc.1 { x } else { acc },
                );
            c0.push(best);
            h.push(val);
        }
        choice.push(c0);
        for m in 1..=k {
            let mut nh = Vec::with_capacity(h.len());
            let mut cm = Vec::with_capacity(h.len());
            for kids in &self.children {
                let (best, val) = kids
                    .iter()
                    .enumerate()
                    .map(|(a, (p, t))| (a, dot(&p.as_f64(), &w[m - 1]) + h[*t]))
                    .fold(
                        (0, f64::NEG_INFINITY),
                        |acc, x| if x.1 > acc.1 { x } else { acc },
                    );
                cm.push(best);
                nh.push(val);
            }
            h = nh;
            choice.push(cm);
        }
        let (s, _) = self
            .seed
            .iter()
            .enumerate()
            .map(|(a, (p, t))| (a, dot(&p.as_f64(), &w[k]) + h[*t]))
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, x| if x.1 > acc.1 { x } else { acc },
            );
        let (pos, mut ty) = self.seed[s].clone();
        let mut v = self.rule.phi_pow(&pos, k);
        for m in (1..=k).rev() {
            let (p, t) = &self.children[ty][choice[m][ty]];
            v = v.add(&self.rule.phi_pow(p, m - 1));
            ty = *t;
        }
        v.add(&self.corners[ty][choice[0][ty]])
    }
}

fn orthogonal_part(v: &[f64], slope: &PlaneBasis) -> Vec<f64> {
    let [a, b] = slope.project(v);
    let s = (slope.n as f64 / 2.0).sqrt();
    (0..slope.n)
        .map(|i| v[i] - (a * slope.cos_row[i] + b * slope.sin_row[i]) / s)
        .collect()
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

fn recursive_row(sup: &Support, k: usize, bases: &[PlaneBasis]) -> Result<DeviationRow> {
    let n = sup.n;
    let slope = &bases[0];
    let step = std::f64::consts::TAU / PLANE_SAMPLES as f64;
    let inflate = 1.0 / (std::f64::consts::PI / PLANE_SAMPLES as f64).cos();
    let mut planes = Vec::with_capacity(bases.len());
    let mut bounds = Vec::with_capacity(bases.len());
    let mut candidates: Vec<(f64, LiftedPoint)> = Vec::new();
    for b in bases {
        let mut best: f64 = 0.0;
        let mut support: f64 = 0.0;
        for s in 0..PLANE_SAMPLES {
            let u = unit_in_plane(b, s as f64 * step);
            let v = sup.argmax(&u, k);
            let vf = v.as_f64();
            support = support.max(dot(&vf, &u));
            let [x, y] = b.project(&vf);
            best = best.max(x.hypot(y));
            if b.k > 0 {
                candidates.push((slope_distance(&v, slope)?, v));
            }
        }
        planes.push(best);
        bounds.push(support.max(0.0) * inflate);
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    candidates.dedup_by(|a, b| a.1 == b.1);
    let mut best = (0.0, LiftedPoint::zero(n));
    for (d0, v0) in candidates.into_iter().take(ASCENT_STARTS) {
        let (mut d, mut v) = (d0, v0);
        for _ in 0..ASCENT_STEPS {
            let perp = orthogonal_part(&v.as_f64(), slope);
            let len = norm(&perp);
            if len == 0.0 {
                break;
            }
            let u: Vec<f64> = perp.iter().map(|x| x / len).collect();
            let next = sup.argmax(&u, k);
            let nd = slope_distance(&next, slope)?;
            if nd <= d + 1e-12 {
                break;
            }
            d = nd;
            v = next;
        }
        if d > best.0 || (d == best.0 && v < best.1) {
            best = (d, v);
        }
    }
    let upper = bounds[1..].iter().map(|r| r * r).sum::<f64>().sqrt();
    Ok(DeviationRow {
        iteration: k,
        vertices: None,
        deviation: best.0,
        upper: upper.max(best.0),
        planes,
        ratio: None,
        witness: best.1.coords,
    })
}

/// Deviation of `σ^k(seed)` from `E_n^0` for `k = 0, …, k_max`.
pub fn deviation_profile(
    rule: &SubstitutionRule,
    seed: &LiftedPatch,
    k_max: usize,
) -> Result<DeviationProfile> {
    if seed.n != rule.n {
        return Err(RosaError::DimensionMismatch {
            expected: rule.n,
            got: seed.n,
        });
    }
    if seed.is_empty() {
        return Err(RosaError::PreconditionFailed("empty seed".into()));
    }
    let n = rule.n;
    let bases = (0..n / 2)
        .map(|k| plane_basis(n, k))
        .collect::<Result<Vec<_>>>()?;
    let sup = Support::new(rule, seed);
    let mut p = DeviationProfile {
        n,
        rows: (0..=k_max)
            .map(|k| recursive_row(&sup, k, &bases))
            .collect::<Result<_>>()?,
    };
    p.fill_ratios();
    Ok(p)
}

fn explicit_row(patch: &LiftedPatch, k: usize, bases: &[PlaneBasis]) -> Result<DeviationRow> {
    let verts = patch.vertices();
    let mut best = (0.0, LiftedPoint::zero(patch.n));
    let mut planes = vec![0.0f64; bases.len()];
    for v in &verts {
        let d = slope_distance(v, &bases[0])?;
        if d > best.0 {
            best = (d, v.clone());
        }
        for (j, b) in bases.iter().enumerate() {
            let [x, y] = b.project_lifted(v);
            planes[j] = planes[j].max(x.hypot(y));
        }
    }
    Ok(DeviationRow {
        iteration: k,
        vertices: Some(verts.len()),
        deviation: best.0,
        upper: best.0,
        planes,
        ratio: None,
        witness: best.1.coords,
    })
}

/// The same profile from explicitly generated patches, enumerating every
/// vertex once per patch.
pub fn explicit_deviation_profile(
    rule: &SubstitutionRule,
    seed: &LiftedPatch,
    k_max: usize,
    tile_cap: usize,
) -> Result<DeviationProfile> {
    let n = rule.n;
    let bases = (0..n / 2)
        .map(|k| plane_basis(n, k))
        .collect::<Result<Vec<_>>>()?;
    let mut patch = seed.clone();
    let mut rows = vec![explicit_row(&patch, 0, &bases)?];
    for k in 1..=k_max {
        patch = apply_audited(rule, &patch, tile_cap)?.0;
        rows.push(explicit_row(&patch, k, &bases)?);
    }
    let mut p = DeviationProfile { n, rows };
    p.fill_ratios();
    Ok(p)
}
