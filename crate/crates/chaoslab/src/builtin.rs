//! Ready-made systems and kernels used throughout the tests, the guide and
//! the CLI's built-in experiments.

use crate::ifs::{Ifs, MapSpec, MetricPoint, SpaceTag};
use crate::symbols::StochasticKernel;

/// The classical Sierpinski triangle IFS: three half-scale maps toward the
/// corners of the side-1 equilateral triangle (0,0), (1,0), (1/2, √3/2).
pub fn sierpinski() -> Ifs {
    let s = 3f64.sqrt();
    Ifs::new(
        SpaceTag::Plane,
        vec![
            MapSpec::affine([0.5, 0.0, 0.0, 0.5], [0.0, 0.0]),
            MapSpec::affine([0.5, 0.0, 0.0, 0.5], [0.5, 0.0]),
            MapSpec::affine([0.5, 0.0, 0.0, 0.5], [0.25, s / 4.0]),
        ],
    )
    .expect("valid by construction")
}

/// Corners of the Sierpinski triangle, indexed like the maps (vertex i is
/// the fixed point of map i).
pub fn sierpinski_vertices() -> [MetricPoint; 3] {
    let s = 3f64.sqrt();
    [
        MetricPoint::planar(0.0, 0.0),
        MetricPoint::planar(1.0, 0.0),
        MetricPoint::planar(0.5, s / 2.0),
    ]
}

/// The Möbius homeomorphism pair {z/2, (3z+1)/(z+3)} on the sphere.
/// Its attractor is the segment [0, 1] (fixed points 0 and 1, multipliers
/// 1/2); the dual repeller is [−∞, −1] (fixed points ∞ and −1).
pub fn mobius_pair() -> Ifs {
    Ifs::new(
        SpaceTag::Sphere,
        vec![
            MapSpec::mobius_real(1.0, 0.0, 0.0, 2.0),
            MapSpec::mobius_real(3.0, 1.0, 1.0, 3.0),
        ],
    )
    .expect("valid by construction")
}

/// The affine pair {z/2, (z+1)/2} viewed on the sphere. Both maps fix ∞,
/// so ∞ is pinned: the orbit of ∞ never leaves it, and the dual system
/// collapses every compact set onto {∞}.
pub fn affine_doubling_pair() -> Ifs {
    Ifs::new(
        SpaceTag::Sphere,
        vec![
            MapSpec::mobius_real(1.0, 0.0, 0.0, 2.0),
            MapSpec::mobius_real(1.0, 1.0, 0.0, 2.0),
        ],
    )
    .expect("valid by construction")
}

/// Two-state Markov chain in which the word "22" is forbidden: from state 2
/// the chain always returns to 1, from state 1 it is a fair coin.
pub fn markov_forbidden_22() -> StochasticKernel {
    StochasticKernel::markov(vec![0.5, 0.5], vec![vec![0.5, 0.5], vec![1.0, 0.0]])
        .expect("valid by construction")
}

/// Three-symbol variant of the forbidden-22 chain: state 2 never repeats,
/// the other states branch uniformly.
pub fn markov3_forbidden_22() -> StochasticKernel {
    let third = 1.0 / 3.0;
    StochasticKernel::markov(
        vec![third, third, third],
        vec![
            vec![third, third, third],
            vec![0.5, 0.0, 0.5],
            vec![third, third, third],
        ],
    )
    .expect("valid by construction")
}

/// The built-in chain with complete connections: the forbidden-22 Markov
/// kernel mixed with the uniform distribution at weight `alpha`. Every
/// conditional probability is at least alpha/2, so the chain is minorized
/// and (unlike its base) disjunctive.
pub fn ccc_uniform_markov(alpha: f64) -> StochasticKernel {
    StochasticKernel::ccc(markov_forbidden_22(), alpha).expect("valid for 0 < alpha <= 1")
}
