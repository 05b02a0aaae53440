//! Attractor/repeller pairs of invertible systems, address-map shift
//! commutation, and the escape experiment for orbits started on the
//! repeller.

use crate::chaosgame::{convergence_profile, run_orbit_word, tail_estimate};
use crate::error::{Error, Result};
use crate::hyperspace::{hausdorff_bucketed, point_distance, PointCloud};
use crate::ifs::{mobius_fixed_points, ExtComplex, FiniteWord, Ifs, MetricPoint, SpaceTag};
use crate::symbols::SymbolStream;

/// Seeds for the pair iteration, read off the first map's fixed points: the
/// attracting one lies on the attractor, the repelling one on the dual
/// repeller (it attracts under the inverse map).
fn seeds_from_first_map(ifs: &Ifs) -> Result<(MetricPoint, MetricPoint)> {
    if ifs.space_tag() != SpaceTag::Sphere {
        return Err(Error::InvalidInput(
            "automatic seeds need a sphere IFS; use attractor_repeller_pair_from".into(),
        ));
    }
    let fixed = mobius_fixed_points(ifs.map(1)?)?;
    let attracting = fixed
        .iter()
        .find(|f| f.multiplier_abs < 1.0 - 1e-9)
        .ok_or_else(|| {
            Error::InvalidInput("first map has no attracting fixed point; provide seeds".into())
        })?;
    let repelling = fixed
        .iter()
        .find(|f| f.multiplier_abs > 1.0 + 1e-9)
        .ok_or_else(|| {
            Error::InvalidInput("first map has no repelling fixed point; provide seeds".into())
        })?;
    Ok((
        MetricPoint::Sphere(attracting.point),
        MetricPoint::Sphere(repelling.point),
    ))
}

/// Deterministic approximations (A, A*) of the attractor and its dual
/// repeller: `k` Hutchinson steps of the system from a seed on A, and of the
/// dual system from a seed on A*. Seeds are derived from the first map's
/// attracting/repelling fixed points.
pub fn attractor_repeller_pair(
    ifs: &Ifs,
    k: usize,
    delta: f64,
) -> Result<(PointCloud, PointCloud)> {
    let (seed_a, seed_star) = seeds_from_first_map(ifs)?;
    attractor_repeller_pair_from(ifs, seed_a, seed_star, k, delta)
}

/// As [`attractor_repeller_pair`] with explicit seeds, each asserted by the
/// caller to lie in the respective basin.
pub fn attractor_repeller_pair_from(
    ifs: &Ifs,
    seed_a: MetricPoint,
    seed_star: MetricPoint,
    k: usize,
    delta: f64,
) -> Result<(PointCloud, PointCloud)> {
    let a = ifs.iterate_hutchinson(&PointCloud::from_point(seed_a), k, delta)?;
    let dual = ifs.dual()?;
    let a_star = dual.iterate_hutchinson(&PointCloud::from_point(seed_star), k, delta)?;
    Ok((a, a_star))
}

/// Checks the shift identity of the address map on a finite address: with
/// π(ς) estimated by the depth-fold composition f_{ς1} ∘ … ∘ f_{ς_depth} of a
/// base point, the address of the shifted word S(ς) = ς2 ς3 … must satisfy
/// π(Sς) = f_{ς1}⁻¹(π(ς)) within `tol`.
///
/// Running this on the dual system checks the dual half of the identity,
/// π*(Sς) = f_{ς1}(π*(ς)), since dual maps invert to the originals.
/// Needs `word` at least depth+1 long and a contractive, point-fibred
/// example for the estimates to stabilize.
pub fn shift_commutation_check(
    ifs: &Ifs,
    word: &FiniteWord,
    depth: usize,
    tol: f64,
) -> Result<bool> {
    if word.len() < depth + 1 {
        return Err(Error::PrefixTooShort {
            required: depth + 1,
            actual: word.len(),
        });
    }
    if depth == 0 {
        return Err(Error::InvalidInput("depth must be >= 1".into()));
    }
    let base = estimation_base(ifs)?;
    let n = ifs.alphabet_size();
    let symbols = word.symbols();
    let pi = ifs.apply_word(&FiniteWord::new(symbols[..depth].to_vec(), n)?, base)?;
    let pi_shifted = ifs.apply_word(&FiniteWord::new(symbols[1..=depth].to_vec(), n)?, base)?;
    let inv_first = ifs.map(symbols[0])?.inverse(symbols[0] as usize)?;
    let rhs = inv_first.apply(pi)?;
    Ok(point_distance(pi_shifted, rhs)? <= tol)
}

/// Base point for address estimates: any basin point works, the composition
/// forgets it at the contraction rate. Plane: the origin. Sphere: the first
/// map's attracting fixed point when it has one, else 0.
fn estimation_base(ifs: &Ifs) -> Result<MetricPoint> {
    Ok(match ifs.space_tag() {
        SpaceTag::Plane => MetricPoint::planar(0.0, 0.0),
        SpaceTag::Sphere => mobius_fixed_points(ifs.map(1)?)
            .ok()
            .and_then(|fps| {
                fps.into_iter()
                    .find(|f| f.multiplier_abs < 1.0 - 1e-9)
                    .map(|f| MetricPoint::Sphere(f.point))
            })
            .unwrap_or(MetricPoint::Sphere(ExtComplex::Finite(
                num_complex::Complex64::ZERO,
            ))),
    })
}

/// Parameters of [`rapunzel_experiment`].
#[derive(Debug, Clone)]
pub struct RapunzelParams {
    /// Hutchinson steps for the (A, A*) references.
    pub hutchinson_iters: usize,
    /// Pruning resolution for references and tails.
    pub delta: f64,
    /// Orbit length.
    pub kmax: usize,
    /// Tail truncation index used for the final distances.
    pub tail_start: usize,
    /// Truncations for the primal convergence profile.
    pub ks: Vec<usize>,
    /// d(x_k, A*) above this counts as having escaped the repeller.
    pub escape_threshold: f64,
    /// Start point for the dual orbit.
    pub x0_dual: MetricPoint,
    /// Both final tail distances must be at or below this to count as
    /// converged.
    pub tolerance: f64,
}

/// Outcome of the dual-orbit escape experiment.
#[derive(Debug, Clone)]
pub struct RapunzelReport {
    /// First orbit index at distance > escape_threshold from A*, if any.
    pub escape_index: Option<usize>,
    /// h(tail of the orbit under F, A-reference).
    pub final_h_primal: f64,
    /// h(tail of the orbit under F* from `x0_dual`, A*-reference).
    pub final_h_dual: f64,
    /// The start point is fixed by every map: the orbit is pinned and the
    /// run says nothing about convergence.
    pub exceptional: bool,
    /// (K, h) rows of the primal orbit against the A-reference.
    pub primal_profile: Vec<(usize, f64)>,
    /// Whether both final distances met `tolerance` (always false when
    /// `exceptional`; an exceptional run is not a failure, just pinned).
    pub converged: bool,
}

/// Runs the escape experiment: a chaos-game orbit of `x0` (typically chosen
/// on the dual repeller) under the system, and of `x0_dual` under the dual
/// system, both driven by the same symbols from `stream`. For a disjunctive
/// stream and a start that is not a common fixed point, the primal tail
/// lands on A and the dual tail on A*.
pub fn rapunzel_experiment(
    ifs: &Ifs,
    x0: MetricPoint,
    stream: &mut SymbolStream,
    params: &RapunzelParams,
) -> Result<RapunzelReport> {
    if params.kmax == 0 || params.tail_start >= params.kmax {
        return Err(Error::InvalidInput(
            "need kmax >= 1 and tail_start < kmax".into(),
        ));
    }
    let (a_ref, a_star_ref) = attractor_repeller_pair(ifs, params.hutchinson_iters, params.delta)?;

    // Pinned start: every map fixes x0, the orbit never moves.
    let exceptional = {
        let mut pinned = true;
        for sigma in 1..=ifs.alphabet_size() {
            if point_distance(ifs.apply(sigma, x0)?, x0)? > 1e-12 {
                pinned = false;
                break;
            }
        }
        pinned
    };

    let symbols = stream.take_word(params.kmax)?;
    let primal = run_orbit_word(ifs, x0, &symbols)?;
    let dual = run_orbit_word(&ifs.dual()?, params.x0_dual, &symbols)?;

    let escape_index = primal.points().iter().position(|&p| {
        crate::hyperspace::dist_point_cloud(p, &a_star_ref).expect("same space")
            > params.escape_threshold
    });

    let primal_tail = tail_estimate(&primal, params.tail_start, params.delta)?;
    let final_h_primal = hausdorff_bucketed(&primal_tail.cloud, &a_ref)?;
    let dual_tail = tail_estimate(&dual, params.tail_start, params.delta)?;
    let final_h_dual = hausdorff_bucketed(&dual_tail.cloud, &a_star_ref)?;
    let primal_profile = convergence_profile(&primal, &a_ref, &params.ks, params.delta)?;

    Ok(RapunzelReport {
        escape_index,
        final_h_primal,
        final_h_dual,
        exceptional,
        primal_profile,
        converged: !exceptional
            && final_h_primal <= params.tolerance
            && final_h_dual <= params.tolerance,
    })
}
