//! Metrics on points and finite point clouds.
//!
//! The plane carries the Euclidean metric; the sphere carries the chordal
//! metric d(z, w) = 2|z − w| / √((1+|z|²)(1+|w|²)), which is the straight
//! chord length between images on the unit Riemann sphere (diameter 2).
//! [`hausdorff`] is the convergence yardstick for everything else in the
//! crate: the plain version is the brute-force reference, and
//! [`hausdorff_bucketed`] is a grid accelerator that must (and is tested to)
//! agree with it exactly.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ifs::{ExtComplex, MetricPoint, SpaceTag};

/// A finite nonempty point set approximating a compact set, with the δ used
/// to build it (if pruned) recorded as `resolution`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<MetricPoint>,
    space: SpaceTag,
    resolution: Option<f64>,
}

impl PointCloud {
    pub fn new(points: Vec<MetricPoint>) -> Result<Self> {
        let space = match points.first() {
            Some(p) => p.space_tag(),
            None => return Err(Error::InvalidInput("point cloud must be nonempty".into())),
        };
        if points.iter().any(|p| p.space_tag() != space) {
            return Err(Error::SpaceMismatch);
        }
        Ok(PointCloud {
            points,
            space,
            resolution: None,
        })
    }

    pub fn from_point(p: MetricPoint) -> Self {
        PointCloud {
            points: vec![p],
            space: p.space_tag(),
            resolution: None,
        }
    }

    pub fn points(&self) -> &[MetricPoint] {
        &self.points
    }

    pub fn space_tag(&self) -> SpaceTag {
        self.space
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructors reject empty clouds
    }

    /// The pruning resolution this cloud was built at, if any.
    pub fn resolution(&self) -> Option<f64> {
        self.resolution
    }
}

/// Distance between two points of the same space. Symmetric, nonnegative,
/// zero exactly on equal points.
pub fn point_distance(p: MetricPoint, q: MetricPoint) -> Result<f64> {
    match (p, q) {
        (MetricPoint::Planar { x: px, y: py }, MetricPoint::Planar { x: qx, y: qy }) => {
            let (dx, dy) = (px - qx, py - qy);
            Ok((dx * dx + dy * dy).sqrt())
        }
        (MetricPoint::Sphere(z), MetricPoint::Sphere(w)) => Ok(chordal(z, w)),
        _ => Err(Error::SpaceMismatch),
    }
}

fn chordal(z: ExtComplex, w: ExtComplex) -> f64 {
    match (z, w) {
        (ExtComplex::Infinity, ExtComplex::Infinity) => 0.0,
        (ExtComplex::Finite(z), ExtComplex::Infinity)
        | (ExtComplex::Infinity, ExtComplex::Finite(z)) => 2.0 / 1f64.hypot(z.norm()),
        (ExtComplex::Finite(z), ExtComplex::Finite(w)) => {
            2.0 * (z - w).norm() / (1f64.hypot(z.norm()) * 1f64.hypot(w.norm()))
        }
    }
}

/// Unit-sphere embedding of a sphere point; the chordal metric is the
/// Euclidean distance between these images. Used for grid bucketing.
fn sphere_embed(z: ExtComplex) -> [f64; 3] {
    match z {
        ExtComplex::Infinity => [0.0, 0.0, 1.0],
        ExtComplex::Finite(z) => {
            let n = z.norm_sqr();
            [
                2.0 * z.re / (1.0 + n),
                2.0 * z.im / (1.0 + n),
                (n - 1.0) / (n + 1.0),
            ]
        }
    }
}

/// d(b, C) = min over the finite cloud (the infimum is attained).
pub fn dist_point_cloud(b: MetricPoint, c: &PointCloud) -> Result<f64> {
    if b.space_tag() != c.space_tag() {
        return Err(Error::SpaceMismatch);
    }
    let mut best = f64::INFINITY;
    for &q in c.points() {
        let d = point_distance(b, q)?;
        if d < best {
            best = d;
        }
    }
    Ok(best)
}

/// Hausdorff distance between finite clouds:
/// max(sup_{x∈b} d(x, c), sup_{y∈c} d(y, b)). Brute-force O(nm) reference.
pub fn hausdorff(b: &PointCloud, c: &PointCloud) -> Result<f64> {
    if b.space_tag() != c.space_tag() {
        return Err(Error::SpaceMismatch);
    }
    Ok(one_sided_sup(b, c).max(one_sided_sup(c, b)))
}

fn one_sided_sup(from: &PointCloud, to: &PointCloud) -> f64 {
    from.points()
        .par_iter()
        .map(|&p| dist_point_cloud(p, to).expect("tags checked"))
        .reduce(|| 0.0, f64::max)
}

/// Smallest distance between any pair of points drawn from the two clouds.
pub fn min_distance(b: &PointCloud, c: &PointCloud) -> Result<f64> {
    if b.space_tag() != c.space_tag() {
        return Err(Error::SpaceMismatch);
    }
    Ok(b.points()
        .par_iter()
        .map(|&p| dist_point_cloud(p, c).expect("tags checked"))
        .reduce(|| f64::INFINITY, f64::min))
}

/// Strict ε-neighborhood membership: true iff d(p, b) < ε.
pub fn in_epsilon_neighborhood(p: MetricPoint, b: &PointCloud, epsilon: f64) -> Result<bool> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidInput("epsilon must be > 0".into()));
    }
    Ok(dist_point_cloud(p, b)? < epsilon)
}

// Grid coordinates for bucketing. Plane points bucket in 2D with cell size
// `cell`; sphere points bucket their R^3 embedding. Casts saturate, which is
// harmless: a saturated cell is merely a coarse bucket.
fn cell_of(p: MetricPoint, cell: f64) -> [i64; 3] {
    match p {
        MetricPoint::Planar { x, y } => [(x / cell).floor() as i64, (y / cell).floor() as i64, 0],
        MetricPoint::Sphere(z) => {
            let e = sphere_embed(z);
            [
                (e[0] / cell).floor() as i64,
                (e[1] / cell).floor() as i64,
                (e[2] / cell).floor() as i64,
            ]
        }
    }
}

struct Grid {
    cell: f64,
    buckets: HashMap<[i64; 3], Vec<MetricPoint>>,
}

impl Grid {
    fn build(cloud: &PointCloud, cell: f64) -> Self {
        let mut buckets: HashMap<[i64; 3], Vec<MetricPoint>> = HashMap::new();
        for &p in cloud.points() {
            buckets.entry(cell_of(p, cell)).or_default().push(p);
        }
        Grid { cell, buckets }
    }

    /// Exact nearest-neighbor distance from `p` into the grid. Points in a
    /// cell at Chebyshev ring k from the query's cell are at least
    /// (k−1)·cell away, so after scanning rings 0..=R everything unscanned
    /// is at distance ≥ R·cell; if the best candidate beats that, it is the
    /// true minimum. Queries far from every bucket (relative to the cell
    /// size) fall back to a full scan instead of marching empty rings.
    /// Either path only skips provably-farther points, so the result equals
    /// the brute-force minimum exactly.
    fn nearest(&self, p: MetricPoint, points: &[MetricPoint]) -> f64 {
        const RING_CAP: i64 = 4;
        let center = cell_of(p, self.cell);
        let dim = if matches!(p, MetricPoint::Planar { .. }) {
            2
        } else {
            3
        };
        let mut best = f64::INFINITY;
        for ring in 0..=RING_CAP {
            if best <= ((ring - 1).max(0) as f64) * self.cell {
                return best;
            }
            self.for_ring(center, ring, dim, |cell| {
                if let Some(bucket) = self.buckets.get(&cell) {
                    for &q in bucket {
                        let d = point_distance(p, q).expect("tags checked");
                        if d < best {
                            best = d;
                        }
                    }
                }
            });
        }
        if best <= RING_CAP as f64 * self.cell {
            return best;
        }
        for &q in points {
            let d = point_distance(p, q).expect("tags checked");
            if d < best {
                best = d;
            }
        }
        best
    }

    fn for_ring(&self, center: [i64; 3], ring: i64, dim: usize, mut f: impl FnMut([i64; 3])) {
        let r = ring;
        let zs: Vec<i64> = if dim == 2 {
            vec![0]
        } else {
            (-r..=r).collect()
        };
        for dx in -r..=r {
            for dy in -r..=r {
                for &dz in &zs {
                    if dx.abs().max(dy.abs()).max(dz.abs()) != r {
                        continue;
                    }
                    f([
                        center[0].wrapping_add(dx),
                        center[1].wrapping_add(dy),
                        center[2].wrapping_add(dz),
                    ]);
                }
            }
        }
    }
}

/// Grid-bucketed Hausdorff distance. Same arithmetic as [`hausdorff`]
/// (identical per-pair distance calls, minima over supersets of the argmin),
/// so the two agree exactly; only the search order differs.
pub fn hausdorff_bucketed(b: &PointCloud, c: &PointCloud) -> Result<f64> {
    if b.space_tag() != c.space_tag() {
        return Err(Error::SpaceMismatch);
    }
    Ok(bucketed_sup(b, c).max(bucketed_sup(c, b)))
}

fn bucketed_sup(from: &PointCloud, to: &PointCloud) -> f64 {
    // Cell size aimed at O(1) points per bucket for evenly spread clouds.
    let cell = match to.resolution() {
        Some(delta) if delta > 0.0 => delta.max(1e-9),
        _ => {
            let extent = if to.space_tag() == SpaceTag::Sphere {
                2.0
            } else {
                bounding_extent(to).max(1e-9)
            };
            (extent / (to.len() as f64).sqrt().max(1.0)).max(1e-9)
        }
    };
    let grid = Grid::build(to, cell);
    from.points()
        .par_iter()
        .map(|&p| grid.nearest(p, to.points()))
        .reduce(|| 0.0, f64::max)
}

fn bounding_extent(cloud: &PointCloud) -> f64 {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for &p in cloud.points() {
        if let MetricPoint::Planar { x, y } = p {
            lo[0] = lo[0].min(x);
            lo[1] = lo[1].min(y);
            hi[0] = hi[0].max(x);
            hi[1] = hi[1].max(y);
        }
    }
    (hi[0] - lo[0]).max(hi[1] - lo[1])
}

/// Largest pairwise distance within a cloud.
pub fn diameter(cloud: &PointCloud) -> f64 {
    let pts = cloud.points();
    pts.par_iter()
        .enumerate()
        .map(|(i, &p)| {
            pts[i + 1..]
                .iter()
                .map(|&q| point_distance(p, q).expect("same cloud"))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

/// Keeps one representative (the first seen, in input order) per δ-cell.
/// Guarantees h(result, input) ≤ δ·√2 on the plane and ≤ δ on the sphere:
/// plane cells are δ-squares; sphere points are bucketed on the embedded
/// unit sphere with cell side δ/√3, so any two points sharing a cell are
/// within chordal distance δ.
pub fn prune(b: &PointCloud, delta: f64) -> Result<PointCloud> {
    if !(delta > 0.0) {
        return Err(Error::InvalidInput(
            "prune resolution delta must be > 0".into(),
        ));
    }
    let cell = match b.space_tag() {
        SpaceTag::Plane => delta,
        SpaceTag::Sphere => delta / 3f64.sqrt(),
    };
    let mut seen: HashMap<[i64; 3], ()> = HashMap::new();
    let mut points = Vec::new();
    for &p in b.points() {
        if seen.insert(cell_of(p, cell), ()).is_none() {
            points.push(p);
        }
    }
    Ok(PointCloud {
        points,
        space: b.space_tag(),
        resolution: Some(delta),
    })
}
