//! Chaos-game orbits and their metric diagnostics.
//!
//! An orbit is the sequence x_k = f_{σ_k}(x_{k−1}) driven by a symbol
//! stream. The central objects measured here are the orbit *tails*
//! {x_k : k ≥ K}: pruned tail clouds, their Hausdorff distance to a
//! reference attractor, whether they meet every fibre, and whether they are
//! carried into themselves by the system. The `duality` half handles
//! invertible systems: attractor/repeller pairs, shift commutation of the
//! address maps, and the escape experiment for orbits started on the
//! repeller.

mod duality;
mod search;

pub use duality::{
    attractor_repeller_pair, attractor_repeller_pair_from, rapunzel_experiment,
    shift_commutation_check, RapunzelParams, RapunzelReport,
};
pub use search::{
    wandering_search, wandering_search_with_budget, WanderingResult, WANDERING_NODE_BUDGET,
};

use crate::error::{Error, Result};
use crate::hyperspace::{
    diameter, hausdorff_bucketed, min_distance, point_distance, prune, PointCloud,
};
use crate::ifs::{FiniteWord, Ifs, MetricPoint};
use crate::symbols::SymbolStream;

/// Planar orbits whose points leave this magnitude are reported as escaped;
/// the underlying system is being run outside any attractor's basin.
pub const ESCAPE_BOUND: f64 = 1e9;

/// A finite chaos-game orbit: points[k] = f_{σ_k}(points[k−1]), with the
/// consumed symbol history recorded for replay.
#[derive(Debug, Clone)]
pub struct Orbit {
    ifs: Ifs,
    x0: MetricPoint,
    symbols: FiniteWord,
    points: Vec<MetricPoint>,
}

impl Orbit {
    /// All orbit points, points[0] = x0.
    pub fn points(&self) -> &[MetricPoint] {
        &self.points
    }

    /// The consumed symbols, σ_1 … σ_kmax.
    pub fn symbols(&self) -> &FiniteWord {
        &self.symbols
    }

    pub fn x0(&self) -> MetricPoint {
        self.x0
    }

    pub fn kmax(&self) -> usize {
        self.points.len() - 1
    }

    pub fn ifs(&self) -> &Ifs {
        &self.ifs
    }
}

/// Runs the orbit of `x0` for `kmax` steps, consuming symbols from `stream`.
/// Planar orbits that leave [`ESCAPE_BOUND`] produce a diagnostic error
/// carrying the first escaped index.
pub fn run_orbit(
    ifs: &Ifs,
    x0: MetricPoint,
    stream: &mut SymbolStream,
    kmax: usize,
) -> Result<Orbit> {
    if kmax == 0 {
        return Err(Error::InvalidInput("kmax must be >= 1".into()));
    }
    if stream.alphabet_size() != ifs.alphabet_size() {
        return Err(Error::InvalidInput(
            "stream alphabet does not match the IFS".into(),
        ));
    }
    let word = stream.take_word(kmax)?;
    run_orbit_word(ifs, x0, &word)
}

/// Runs the orbit along an explicit symbol history (σ_1 … σ_k). Useful to
/// replay a recorded run or to drive two systems with the same symbols.
pub fn run_orbit_word(ifs: &Ifs, x0: MetricPoint, word: &FiniteWord) -> Result<Orbit> {
    if x0.space_tag() != ifs.space_tag() {
        return Err(Error::SpaceMismatch);
    }
    if word.alphabet_size() != ifs.alphabet_size() {
        return Err(Error::InvalidInput(
            "word alphabet does not match the IFS".into(),
        ));
    }
    let mut points = Vec::with_capacity(word.len() + 1);
    points.push(x0);
    let mut current = x0;
    for (k, &sigma) in word.symbols().iter().enumerate() {
        current = ifs.apply(sigma, current)?;
        if let MetricPoint::Planar { x, y } = current {
            if !(x.abs() <= ESCAPE_BOUND && y.abs() <= ESCAPE_BOUND) {
                return Err(Error::OrbitEscaped { index: k + 1 });
            }
        }
        points.push(current);
    }
    Ok(Orbit {
        ifs: ifs.clone(),
        x0,
        symbols: word.clone(),
        points,
    })
}

/// A pruned truncation of the orbit tail {x_k : k ≥ K}.
#[derive(Debug, Clone)]
pub struct TailEstimate {
    /// The truncation index K.
    pub start: usize,
    /// The last orbit index that went in.
    pub kmax: usize,
    /// prune({x_K, …, x_kmax}, δ).
    pub cloud: PointCloud,
}

/// The tail cloud from index `start` on, pruned at `delta`.
pub fn tail_estimate(orbit: &Orbit, start: usize, delta: f64) -> Result<TailEstimate> {
    if start >= orbit.points.len() {
        return Err(Error::InvalidInput(format!(
            "tail start {start} out of range (orbit has indices 0..={})",
            orbit.kmax()
        )));
    }
    let raw = PointCloud::new(orbit.points[start..].to_vec())?;
    Ok(TailEstimate {
        start,
        kmax: orbit.kmax(),
        cloud: prune(&raw, delta)?,
    })
}

/// Hausdorff distance from each requested tail to a trusted attractor
/// approximation: one (K, h) row per K. For a disjunctive stream on a
/// strongly-fibred attractor the values decay to the resolution floor; a
/// stream with a forbidden word leaves a persistent gap instead.
pub fn convergence_profile(
    orbit: &Orbit,
    a_ref: &PointCloud,
    ks: &[usize],
    delta: f64,
) -> Result<Vec<(usize, f64)>> {
    ks.iter()
        .map(|&k| {
            let tail = tail_estimate(orbit, k, delta)?;
            Ok((k, hausdorff_bucketed(&tail.cloud, a_ref)?))
        })
        .collect()
}

/// A depth-K fibre approximation: the image of a reference attractor cloud
/// under f_{ρ1} ∘ … ∘ f_{ρK}, pruned, with its diameter.
#[derive(Debug, Clone)]
pub struct FibreEstimate {
    pub address_prefix: FiniteWord,
    pub cloud: PointCloud,
    /// Max pairwise distance within `cloud`. Shrinks with depth exactly when
    /// the fibre over this address is a single point.
    pub diameter: f64,
}

/// Pushes `a_ref` through the address prefix ρ (leftmost map outermost) and
/// prunes at `delta`.
pub fn fibre_estimate(
    ifs: &Ifs,
    a_ref: &PointCloud,
    rho_prefix: &FiniteWord,
    delta: f64,
) -> Result<FibreEstimate> {
    let image: Vec<MetricPoint> = a_ref
        .points()
        .iter()
        .map(|&p| ifs.apply_word(rho_prefix, p))
        .collect::<Result<_>>()?;
    let cloud = prune(&PointCloud::new(image)?, delta)?;
    let diameter = diameter(&cloud);
    Ok(FibreEstimate {
        address_prefix: rho_prefix.clone(),
        cloud,
        diameter,
    })
}

/// Result of a tail-meets-fibre test: the smallest tail↔fibre distance and
/// whether it is within tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntersectionCheck {
    pub intersects: bool,
    pub min_distance: f64,
}

/// True iff some tail point comes within `epsilon` of some fibre point.
pub fn fibre_intersection_check(
    tail: &TailEstimate,
    fibre: &FibreEstimate,
    epsilon: f64,
) -> Result<IntersectionCheck> {
    let min = min_distance(&tail.cloud, &fibre.cloud)?;
    Ok(IntersectionCheck {
        intersects: min <= epsilon,
        min_distance: min,
    })
}

/// True iff every tail point lies within `epsilon` of the tail's own
/// Hutchinson image — the checkable trace of F(C) ⊃ C for the limit tail.
pub fn forward_invariance_check(tail: &TailEstimate, ifs: &Ifs, epsilon: f64) -> Result<bool> {
    let image = ifs.hutchinson(&tail.cloud)?;
    for &p in tail.cloud.points() {
        if crate::hyperspace::dist_point_cloud(p, &image)? > epsilon {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Recomputes the orbit recursion and confirms points[k] = f_{σ_k}(points[k−1])
/// bitwise. Diagnostic used by tests; any drift indicates corrupted state.
pub fn verify_orbit_recursion(orbit: &Orbit) -> Result<bool> {
    let symbols = orbit.symbols.symbols();
    for k in 1..orbit.points.len() {
        let expect = orbit.ifs.apply(symbols[k - 1], orbit.points[k - 1])?;
        if point_distance(expect, orbit.points[k])? != 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest fibre diameter over `count` seeded-random addresses of length
/// `depth`: small values are the checkable evidence that the attractor is
/// point-fibred (each infinite address names a single point).
pub fn point_fibre_evidence(
    ifs: &Ifs,
    a_ref: &PointCloud,
    depth: usize,
    count: usize,
    delta: f64,
    seed: u64,
) -> Result<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = ifs.alphabet_size();
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let symbols: Vec<u32> = (0..depth).map(|_| rng.random_range(1..=n)).collect();
        let rho = FiniteWord::new(symbols, n)?;
        let fibre = fibre_estimate(ifs, a_ref, &rho, delta)?;
        worst = worst.max(fibre.diameter);
    }
    Ok(worst)
}
