//! Best-first search for words steering a point near a target.

use crate::error::{Error, Result};
use crate::hyperspace::point_distance;
use crate::ifs::{FiniteWord, Ifs, MetricPoint};

/// Node budget for [`wandering_search`]; hitting it yields `Inconclusive`.
pub const WANDERING_NODE_BUDGET: usize = 10_000_000;

/// Outcome of a word search. `Inconclusive` means the budgeted search found
/// nothing — never that no word exists: for any target on the attractor a
/// word exists at *some* depth, just not necessarily within budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WanderingResult {
    /// A symbol history (σ1, …, σm) with d(f_{σm} ∘ … ∘ f_{σ1}(x0), y) < ε.
    Found(FiniteWord),
    Inconclusive,
}

/// Greedy best-first search over the word tree for a history whose endpoint
/// lands strictly within `epsilon` of `y`. The frontier is pruned to the
/// `beam_width` endpoints closest to the target at each depth, so
/// completeness is traded for the node budget.
pub fn wandering_search(
    ifs: &Ifs,
    x0: MetricPoint,
    y: MetricPoint,
    epsilon: f64,
    max_depth: usize,
    beam_width: usize,
) -> Result<WanderingResult> {
    wandering_search_with_budget(
        ifs,
        x0,
        y,
        epsilon,
        max_depth,
        beam_width,
        WANDERING_NODE_BUDGET,
    )
}

/// As [`wandering_search`] with an explicit node budget.
pub fn wandering_search_with_budget(
    ifs: &Ifs,
    x0: MetricPoint,
    y: MetricPoint,
    epsilon: f64,
    max_depth: usize,
    beam_width: usize,
    node_budget: usize,
) -> Result<WanderingResult> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidInput("epsilon must be > 0".into()));
    }
    if max_depth == 0 || beam_width == 0 {
        return Err(Error::InvalidInput(
            "max_depth and beam_width must be >= 1".into(),
        ));
    }
    if x0.space_tag() != ifs.space_tag() || y.space_tag() != ifs.space_tag() {
        return Err(Error::SpaceMismatch);
    }
    let n = ifs.alphabet_size();
    let mut frontier: Vec<(f64, MetricPoint, Vec<u32>)> = vec![(f64::INFINITY, x0, Vec::new())];
    let mut expanded = 0usize;
    for _depth in 1..=max_depth {
        let mut children = Vec::with_capacity(frontier.len() * n as usize);
        for (_, p, hist) in &frontier {
            for sigma in 1..=n {
                let q = ifs.apply(sigma, *p)?;
                let d = point_distance(q, y)?;
                let mut h = hist.clone();
                h.push(sigma);
                if d < epsilon {
                    return Ok(WanderingResult::Found(FiniteWord::new(h, n)?));
                }
                children.push((d, q, h));
            }
        }
        expanded += children.len();
        if expanded > node_budget {
            return Ok(WanderingResult::Inconclusive);
        }
        // stable sort keeps insertion order among ties, so runs are
        // deterministic
        children.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("distances are not NaN"));
        children.truncate(beam_width);
        frontier = children;
    }
    Ok(WanderingResult::Inconclusive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::ifs::{MapSpec, SpaceTag};

    #[test]
    fn fixed_point_target_found_by_single_symbol() {
        // f1 fixes the origin, so from x0 = origin the word (1) qualifies.
        let ifs = builtin::sierpinski();
        let origin = MetricPoint::planar(0.0, 0.0);
        match wandering_search(&ifs, origin, origin, 1e-9, 5, 16).unwrap() {
            WanderingResult::Found(w) => assert_eq!(w.symbols(), &[1]),
            other => panic!("expected Found, got {other:?}"),
        }
    }

    #[test]
    fn centroid_steers_to_origin_with_all_ones() {
        let ifs = builtin::sierpinski();
        let centroid = MetricPoint::planar(0.5, 3f64.sqrt() / 6.0);
        let eps = 0.01;
        let d0 = point_distance(centroid, MetricPoint::planar(0.0, 0.0)).unwrap();
        let depth_needed = (d0 / eps).log2().ceil() as usize;
        match wandering_search(
            &ifs,
            centroid,
            MetricPoint::planar(0.0, 0.0),
            eps,
            depth_needed + 1,
            8,
        )
        .unwrap()
        {
            WanderingResult::Found(w) => {
                assert!(w.symbols().iter().all(|&s| s == 1));
                assert!(w.len() <= depth_needed);
                // endpoint really is close: replay the history
                let endpoint = ifs.apply_word(&w.reversed(), centroid).unwrap();
                assert!(point_distance(endpoint, MetricPoint::planar(0.0, 0.0)).unwrap() < eps);
            }
            other => panic!("expected Found, got {other:?}"),
        }
    }

    #[test]
    fn unreachable_target_is_inconclusive() {
        let ifs = builtin::sierpinski();
        // far outside the attractor's neighborhood: all maps contract into
        // the unit triangle, so no endpoint ever gets near (50, 50)
        let result = wandering_search(
            &ifs,
            MetricPoint::planar(0.2, 0.2),
            MetricPoint::planar(50.0, 50.0),
            0.5,
            20,
            32,
        )
        .unwrap();
        assert_eq!(result, WanderingResult::Inconclusive);
    }

    #[test]
    fn budget_exhaustion_is_inconclusive_not_an_error() {
        let ifs = Ifs::new(
            SpaceTag::Plane,
            vec![
                MapSpec::affine([0.99, 0.0, 0.0, 0.99], [0.0, 0.0]),
                MapSpec::affine([0.99, 0.0, 0.0, 0.99], [0.01, 0.0]),
            ],
        )
        .unwrap();
        let result = wandering_search_with_budget(
            &ifs,
            MetricPoint::planar(0.0, 0.0),
            MetricPoint::planar(100.0, 100.0),
            1e-9,
            1000,
            64,
            5_000,
        )
        .unwrap();
        assert_eq!(result, WanderingResult::Inconclusive);
    }
}
