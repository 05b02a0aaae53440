//! Maps, iterated function systems and word composition.
//!
//! An [`Ifs`] is a finite ordered list of continuous self-maps of a tagged
//! metric space (the Euclidean plane or the Riemann sphere). Symbols `1..=N`
//! index the maps; a [`FiniteWord`] `w = (w1, ..., wk)` acts by
//! `f_w = f_{w1} ∘ ... ∘ f_{wk}` (leftmost symbol applied last).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hyperspace::{prune, PointCloud};

/// Which space an IFS and its points live on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceTag {
    Plane,
    Sphere,
}

/// A point of the extended complex plane. `Infinity` is the single point at
/// infinity of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

/// Finite values this large are indistinguishable from the point at infinity
/// in the chordal metric (distance < 2e-100), and folding them early keeps
/// every downstream formula free of overflow and NaN.
const SPHERE_OVERFLOW: f64 = 1e100;

impl ExtComplex {
    /// Folds overflowed or astronomically large values onto the point at
    /// infinity so sphere arithmetic stays NaN-free.
    pub fn normalized(z: Complex64) -> Self {
        // the comparison is false for NaN, so non-finite values also fold
        if z.re.abs() <= SPHERE_OVERFLOW && z.im.abs() <= SPHERE_OVERFLOW {
            ExtComplex::Finite(z)
        } else {
            ExtComplex::Infinity
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }
}

/// A point of the ambient space: a planar pair or an extended complex number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricPoint {
    Planar { x: f64, y: f64 },
    Sphere(ExtComplex),
}

impl MetricPoint {
    pub fn planar(x: f64, y: f64) -> Self {
        MetricPoint::Planar { x, y }
    }

    pub fn sphere(re: f64, im: f64) -> Self {
        MetricPoint::Sphere(ExtComplex::normalized(Complex64::new(re, im)))
    }

    pub fn infinity() -> Self {
        MetricPoint::Sphere(ExtComplex::Infinity)
    }

    pub fn space_tag(&self) -> SpaceTag {
        match self {
            MetricPoint::Planar { .. } => SpaceTag::Plane,
            MetricPoint::Sphere(_) => SpaceTag::Sphere,
        }
    }
}

/// One map of an IFS: a planar affine map or a Möbius transformation given by
/// its coefficient matrix [[a, b], [c, d]], acting as z ↦ (az + b)/(cz + d).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapSpec {
    Affine2d {
        /// Row-major 2×2 linear part.
        matrix: [[f64; 2]; 2],
        translation: [f64; 2],
    },
    Mobius {
        matrix: [[Complex64; 2]; 2],
    },
}

/// Invertibility floor for [`MapSpec::inverse`]; maps with |det| at or below
/// this are rejected when an inverse is requested, but are legal otherwise.
pub const DET_FLOOR: f64 = 1e-12;

impl MapSpec {
    /// Affine map from a flat row-major matrix [a, b, c, d].
    pub fn affine(matrix: [f64; 4], translation: [f64; 2]) -> Self {
        MapSpec::Affine2d {
            matrix: [[matrix[0], matrix[1]], [matrix[2], matrix[3]]],
            translation,
        }
    }

    /// Möbius map z ↦ (az + b)/(cz + d).
    pub fn mobius(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        MapSpec::Mobius {
            matrix: [[a, b], [c, d]],
        }
    }

    /// Möbius map with real coefficients.
    pub fn mobius_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::mobius(
            Complex64::new(a, 0.0),
            Complex64::new(b, 0.0),
            Complex64::new(c, 0.0),
            Complex64::new(d, 0.0),
        )
    }

    pub fn space_tag(&self) -> SpaceTag {
        match self {
            MapSpec::Affine2d { .. } => SpaceTag::Plane,
            MapSpec::Mobius { .. } => SpaceTag::Sphere,
        }
    }

    /// |det| of the linear part (affine) or the coefficient matrix (Möbius).
    pub fn det_abs(&self) -> f64 {
        match self {
            MapSpec::Affine2d { matrix: m, .. } => (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs(),
            MapSpec::Mobius { matrix: m } => (m[0][0] * m[1][1] - m[0][1] * m[1][0]).norm(),
        }
    }

    /// Evaluates the map. Möbius maps follow the extended-plane conventions:
    /// a pole maps to ∞, and ∞ maps to a/c (or to ∞ when c = 0).
    pub fn apply(&self, p: MetricPoint) -> Result<MetricPoint> {
        match (self, p) {
            (
                MapSpec::Affine2d {
                    matrix: m,
                    translation: t,
                },
                MetricPoint::Planar { x, y },
            ) => Ok(MetricPoint::Planar {
                x: m[0][0] * x + m[0][1] * y + t[0],
                y: m[1][0] * x + m[1][1] * y + t[1],
            }),
            (MapSpec::Mobius { matrix: m }, MetricPoint::Sphere(z)) => {
                Ok(MetricPoint::Sphere(mobius_apply(m, z)))
            }
            _ => Err(Error::SpaceMismatch),
        }
    }

    /// Inverse map: (M, t) ↦ (M⁻¹, −M⁻¹t) for affine maps, the adjugate
    /// matrix for Möbius maps. `index` is only used in the error report.
    pub fn inverse(&self, index: usize) -> Result<MapSpec> {
        let det = self.det_abs();
        if det <= DET_FLOOR {
            return Err(Error::NotInvertible { index, det });
        }
        match self {
            MapSpec::Affine2d {
                matrix: m,
                translation: t,
            } => {
                let d = m[0][0] * m[1][1] - m[0][1] * m[1][0];
                let inv = [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]];
                Ok(MapSpec::Affine2d {
                    matrix: inv,
                    translation: [
                        -(inv[0][0] * t[0] + inv[0][1] * t[1]),
                        -(inv[1][0] * t[0] + inv[1][1] * t[1]),
                    ],
                })
            }
            // The adjugate inverts up to scale, which is all a Möbius map needs.
            MapSpec::Mobius { matrix: m } => Ok(MapSpec::Mobius {
                matrix: [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]],
            }),
        }
    }
}

/// Extended-plane Möbius evaluation; never yields NaN.
fn mobius_apply(m: &[[Complex64; 2]; 2], z: ExtComplex) -> ExtComplex {
    let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
    match z {
        ExtComplex::Infinity => {
            if c == Complex64::ZERO {
                ExtComplex::Infinity
            } else {
                ExtComplex::normalized(a / c)
            }
        }
        ExtComplex::Finite(z) => {
            let den = c * z + d;
            if den == Complex64::ZERO {
                ExtComplex::Infinity
            } else {
                ExtComplex::normalized((a * z + b) / den)
            }
        }
    }
}

/// A fixed point of a Möbius map together with |f'| there (the multiplier
/// modulus: < 1 attracting, > 1 repelling).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusFixedPoint {
    pub point: ExtComplex,
    pub multiplier_abs: f64,
}

/// Fixed points of a Möbius map with their multiplier moduli. Returns one
/// entry for a parabolic map, two otherwise; errors on a non-Möbius map or
/// on a scalar matrix (every point fixed).
pub fn mobius_fixed_points(map: &MapSpec) -> Result<Vec<MobiusFixedPoint>> {
    let m = match map {
        MapSpec::Mobius { matrix } => matrix,
        MapSpec::Affine2d { .. } => {
            return Err(Error::InvalidInput(
                "fixed-point analysis requires a mobius map".into(),
            ))
        }
    };
    let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
    let det = a * d - b * c;
    // |f'(z)| = |det| / |cz + d|^2 at finite z.
    let deriv_abs = |z: Complex64| det.norm() / (c * z + d).norm_sqr();
    if c == Complex64::ZERO {
        if a == d {
            if b == Complex64::ZERO {
                return Err(Error::InvalidInput(
                    "scalar matrix: every point is fixed".into(),
                ));
            }
            // Pure translation: parabolic fixed point at infinity.
            return Ok(vec![MobiusFixedPoint {
                point: ExtComplex::Infinity,
                multiplier_abs: 1.0,
            }]);
        }
        // z = b/(d-a) and infinity; multiplier at infinity is |d/a|.
        let zf = b / (d - a);
        return Ok(vec![
            MobiusFixedPoint {
                point: ExtComplex::normalized(zf),
                multiplier_abs: deriv_abs(zf),
            },
            MobiusFixedPoint {
                point: ExtComplex::Infinity,
                multiplier_abs: (d / a).norm(),
            },
        ]);
    }
    // c z^2 + (d - a) z - b = 0.
    let disc = ((d - a) * (d - a) + 4.0 * b * c).sqrt();
    let z1 = ((a - d) + disc) / (2.0 * c);
    let z2 = ((a - d) - disc) / (2.0 * c);
    let mut out = vec![MobiusFixedPoint {
        point: ExtComplex::normalized(z1),
        multiplier_abs: deriv_abs(z1),
    }];
    if (z1 - z2).norm() > 0.0 {
        out.push(MobiusFixedPoint {
            point: ExtComplex::normalized(z2),
            multiplier_abs: deriv_abs(z2),
        });
    }
    Ok(out)
}

/// A finite word over the alphabet `1..=N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteWord {
    symbols: Vec<u32>,
    alphabet_size: u32,
}

impl FiniteWord {
    pub fn new(symbols: Vec<u32>, alphabet_size: u32) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::InvalidInput(
                "alphabet_size must be at least 1".into(),
            ));
        }
        if symbols.is_empty() {
            return Err(Error::InvalidInput("word must be nonempty".into()));
        }
        for &s in &symbols {
            if s == 0 || s > alphabet_size {
                return Err(Error::SymbolOutOfRange {
                    symbol: s,
                    alphabet: alphabet_size,
                });
            }
        }
        Ok(FiniteWord {
            symbols,
            alphabet_size,
        })
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor rejects empty words
    }

    /// Concatenation `uw` (self followed by `other`).
    pub fn concat(&self, other: &FiniteWord) -> Result<FiniteWord> {
        if self.alphabet_size != other.alphabet_size {
            return Err(Error::InvalidInput(
                "concatenated words must share an alphabet".into(),
            ));
        }
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        FiniteWord::new(symbols, self.alphabet_size)
    }

    /// The word read back to front. Orbit code uses this to turn a consumed
    /// symbol history (σ1, ..., σk) into the composition word for
    /// `apply_word`, since x_k = f_{σk} ∘ ... ∘ f_{σ1}(x0).
    pub fn reversed(&self) -> FiniteWord {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        FiniteWord {
            symbols,
            alphabet_size: self.alphabet_size,
        }
    }

    /// First `k` symbols as a word; errors if `k` is 0 or past the end.
    pub fn prefix(&self, k: usize) -> Result<FiniteWord> {
        if k == 0 || k > self.len() {
            return Err(Error::PrefixTooShort {
                required: k.max(1),
                actual: self.len(),
            });
        }
        Ok(FiniteWord {
            symbols: self.symbols[..k].to_vec(),
            alphabet_size: self.alphabet_size,
        })
    }
}

/// Default cap on cloud growth inside [`Ifs::iterate_hutchinson`].
pub const DEFAULT_POINT_BUDGET: usize = 5_000_000;

/// An iterated function system over a tagged space. Symbols `1..=N` index
/// the maps in order.
#[derive(Debug, Clone, PartialEq)]
pub struct Ifs {
    space: SpaceTag,
    maps: Vec<MapSpec>,
}

impl Ifs {
    pub fn new(space: SpaceTag, maps: Vec<MapSpec>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::InvalidInput("an IFS needs at least one map".into()));
        }
        if maps.iter().any(|m| m.space_tag() != space) {
            return Err(Error::SpaceMismatch);
        }
        Ok(Ifs { space, maps })
    }

    pub fn space_tag(&self) -> SpaceTag {
        self.space
    }

    pub fn alphabet_size(&self) -> u32 {
        self.maps.len() as u32
    }

    pub fn maps(&self) -> &[MapSpec] {
        &self.maps
    }

    /// The map for symbol `sigma` (1-based).
    pub fn map(&self, sigma: u32) -> Result<&MapSpec> {
        if sigma == 0 || sigma as usize > self.maps.len() {
            return Err(Error::SymbolOutOfRange {
                symbol: sigma,
                alphabet: self.alphabet_size(),
            });
        }
        Ok(&self.maps[(sigma - 1) as usize])
    }

    /// Applies the map for `sigma` to `p`.
    pub fn apply(&self, sigma: u32, p: MetricPoint) -> Result<MetricPoint> {
        self.map(sigma)?.apply(p)
    }

    /// Word composition f_w(p) = f_{w1}(f_{w2}(... f_{wk}(p) ...)): the
    /// leftmost symbol is applied last. A consumed orbit history must be
    /// reversed first (see [`FiniteWord::reversed`]).
    pub fn apply_word(&self, w: &FiniteWord, p: MetricPoint) -> Result<MetricPoint> {
        let mut q = p;
        for &sigma in w.symbols().iter().rev() {
            q = self.apply(sigma, q)?;
        }
        Ok(q)
    }

    /// The dual IFS (X, f_σ⁻¹ : σ ∈ Σ), same alphabet order.
    pub fn dual(&self) -> Result<Ifs> {
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(i, m)| m.inverse(i + 1))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ifs {
            space: self.space,
            maps,
        })
    }

    /// One application of the Hutchinson operator:
    /// F(B) = { f_σ(p) : σ ∈ Σ, p ∈ B }. Output order is (map-major, then
    /// input order), independent of scheduling.
    pub fn hutchinson(&self, b: &PointCloud) -> Result<PointCloud> {
        if b.space_tag() != self.space {
            return Err(Error::SpaceMismatch);
        }
        let pts = b.points();
        let n = self.maps.len();
        let images: Vec<MetricPoint> = (0..n * pts.len())
            .into_par_iter()
            .map(|idx| {
                let map = &self.maps[idx / pts.len()];
                // space compatibility was checked above, so apply cannot fail
                map.apply(pts[idx % pts.len()]).expect("space checked")
            })
            .collect();
        PointCloud::new(images)
    }

    /// `k` Hutchinson steps from `seed`, pruning to one representative per
    /// δ-cell after every step, with the default point budget.
    pub fn iterate_hutchinson(
        &self,
        seed: &PointCloud,
        k: usize,
        delta: f64,
    ) -> Result<PointCloud> {
        self.iterate_hutchinson_with_budget(seed, k, delta, DEFAULT_POINT_BUDGET)
    }

    /// As [`Ifs::iterate_hutchinson`] with an explicit point budget. The
    /// budget bounds the pre-prune size N·|cloud| of every step.
    pub fn iterate_hutchinson_with_budget(
        &self,
        seed: &PointCloud,
        k: usize,
        delta: f64,
        budget: usize,
    ) -> Result<PointCloud> {
        if k == 0 {
            return Err(Error::InvalidInput("iteration count k must be >= 1".into()));
        }
        if !(delta > 0.0) {
            return Err(Error::InvalidInput("resolution delta must be > 0".into()));
        }
        let n = self.maps.len();
        let mut cloud = seed.clone();
        for _ in 0..k {
            let required = n.saturating_mul(cloud.len());
            if required > budget {
                return Err(Error::PointBudgetExceeded { budget, required });
            }
            cloud = prune(&self.hutchinson(&cloud)?, delta)?;
        }
        Ok(cloud)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperspace::{hausdorff, point_distance};
    use proptest::prelude::*;

    fn sierpinski() -> Ifs {
        crate::builtin::sierpinski()
    }

    #[test]
    fn identity_affine_is_identity() {
        let id = MapSpec::affine([1.0, 0.0, 0.0, 1.0], [0.0, 0.0]);
        let p = MetricPoint::planar(0.3, 0.7);
        assert_eq!(id.apply(p).unwrap(), p);
    }

    #[test]
    fn scalar_scaling() {
        let f1 = MapSpec::affine([0.5, 0.0, 0.0, 0.5], [0.0, 0.0]);
        assert_eq!(
            f1.apply(MetricPoint::planar(1.0, 1.0)).unwrap(),
            MetricPoint::planar(0.5, 0.5)
        );
    }

    #[test]
    fn mobius_fixed_point_by_substitution() {
        // (3z+1)/(z+3) fixes z = 1: (3+1)/(1+3) = 1.
        let f = MapSpec::mobius_real(3.0, 1.0, 1.0, 3.0);
        let out = f.apply(MetricPoint::sphere(1.0, 0.0)).unwrap();
        let d = point_distance(out, MetricPoint::sphere(1.0, 0.0)).unwrap();
        assert!(d < 1e-15, "fixed point moved by {d}");
    }

    #[test]
    fn mobius_at_infinity_is_a_over_c() {
        let f = MapSpec::mobius_real(3.0, 1.0, 1.0, 3.0);
        assert_eq!(
            f.apply(MetricPoint::infinity()).unwrap(),
            MetricPoint::sphere(3.0, 0.0)
        );
    }

    #[test]
    fn mobius_pole_goes_to_infinity() {
        let f = MapSpec::mobius_real(3.0, 1.0, 1.0, 3.0);
        let out = f.apply(MetricPoint::sphere(-3.0, 0.0)).unwrap();
        assert_eq!(out, MetricPoint::infinity());
    }

    #[test]
    fn mobius_with_c_zero_fixes_infinity() {
        let f = MapSpec::mobius_real(1.0, 0.0, 0.0, 2.0); // z/2
        assert_eq!(
            f.apply(MetricPoint::infinity()).unwrap(),
            MetricPoint::infinity()
        );
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        let f = MapSpec::affine([1.0, 0.0, 0.0, 1.0], [0.0, 0.0]);
        assert_eq!(
            f.apply(MetricPoint::infinity()).unwrap_err(),
            Error::SpaceMismatch
        );
    }

    #[test]
    fn length_one_word_is_the_map() {
        let ifs = sierpinski();
        let w = FiniteWord::new(vec![2], 3).unwrap();
        let p = MetricPoint::planar(0.1, 0.2);
        assert_eq!(ifs.apply_word(&w, p).unwrap(), ifs.apply(2, p).unwrap());
    }

    #[test]
    fn repeated_contraction_reaches_fixed_point() {
        // f1 = x/2 fixes the origin; 20 applications shrink |p| by 2^-20.
        let ifs = sierpinski();
        let w = FiniteWord::new(vec![1; 20], 3).unwrap();
        let out = ifs.apply_word(&w, MetricPoint::planar(1.0, 0.0)).unwrap();
        let d = point_distance(out, MetricPoint::planar(0.0, 0.0)).unwrap();
        assert!(d <= 3f64.sqrt() / 2f64.powi(20), "d = {d:e}");
    }

    #[test]
    fn dual_of_halving_is_doubling() {
        let f = MapSpec::mobius_real(1.0, 0.0, 0.0, 2.0); // z/2
        let dual = f.inverse(1).unwrap();
        let out = dual.apply(MetricPoint::sphere(3.0, 0.0)).unwrap();
        let d = point_distance(out, MetricPoint::sphere(6.0, 0.0)).unwrap();
        assert!(d < 1e-15);
    }

    #[test]
    fn dual_ifs_round_trips_points() {
        let ifs = sierpinski();
        let dual = ifs.dual().unwrap();
        for (i, &(x, y)) in [(0.2, 0.3), (0.9, 0.05), (-1.0, 2.0)].iter().enumerate() {
            let p = MetricPoint::planar(x, y);
            let sigma = (i % 3 + 1) as u32;
            let there = ifs.apply(sigma, p).unwrap();
            let back = dual.apply(sigma, there).unwrap();
            assert!(point_distance(back, p).unwrap() < 1e-10);
        }
    }

    #[test]
    fn double_dual_acts_like_the_original() {
        let ifs = crate::builtin::mobius_pair();
        let dd = ifs.dual().unwrap().dual().unwrap();
        for &(re, im) in &[(0.0, 0.0), (1.0, 1.0), (-2.0, 0.5), (0.3, -0.7)] {
            let p = MetricPoint::sphere(re, im);
            for sigma in 1..=2 {
                let a = ifs.apply(sigma, p).unwrap();
                let b = dd.apply(sigma, p).unwrap();
                assert!(point_distance(a, b).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn non_invertible_map_rejected_at_dual() {
        let ifs = Ifs::new(
            SpaceTag::Plane,
            vec![MapSpec::affine([1.0, 2.0, 2.0, 4.0], [0.0, 0.0])],
        )
        .unwrap();
        match ifs.dual().unwrap_err() {
            Error::NotInvertible { index: 1, .. } => {}
            e => panic!("expected NotInvertible, got {e:?}"),
        }
    }

    #[test]
    fn hutchinson_of_singleton() {
        let ifs = sierpinski();
        let b = PointCloud::from_point(MetricPoint::planar(0.0, 0.0));
        let image = ifs.hutchinson(&b).unwrap();
        let expect = [
            MetricPoint::planar(0.0, 0.0),
            MetricPoint::planar(0.5, 0.0),
            MetricPoint::planar(0.25, 3f64.sqrt() / 4.0),
        ];
        assert_eq!(image.points(), &expect);
    }

    #[test]
    fn hutchinson_fixes_attractor_approximation() {
        let ifs = sierpinski();
        let delta = 0.01;
        let a = ifs
            .iterate_hutchinson(
                &PointCloud::from_point(MetricPoint::planar(0.0, 0.0)),
                10,
                delta,
            )
            .unwrap();
        let fa = ifs.hutchinson(&a).unwrap();
        let h = hausdorff(&a, &fa).unwrap();
        assert!(h <= 2.0 * delta, "residual {h} > {}", 2.0 * delta);
    }

    #[test]
    fn iterate_once_equals_hutchinson_then_prune() {
        let ifs = sierpinski();
        let b = PointCloud::new(vec![
            MetricPoint::planar(0.0, 0.0),
            MetricPoint::planar(1.0, 0.0),
        ])
        .unwrap();
        let lhs = ifs.iterate_hutchinson(&b, 1, 0.01).unwrap();
        let rhs = prune(&ifs.hutchinson(&b).unwrap(), 0.01).unwrap();
        assert_eq!(lhs.points(), rhs.points());
    }

    #[test]
    fn successive_iterates_contract() {
        let ifs = sierpinski();
        let seed = PointCloud::from_point(MetricPoint::planar(0.0, 0.0));
        let delta = 0.005;
        let c12 = ifs.iterate_hutchinson(&seed, 12, delta).unwrap();
        let c13 = ifs.iterate_hutchinson(&seed, 13, delta).unwrap();
        let h = hausdorff(&c12, &c13).unwrap();
        // diam(A) = 1 for this triangle, contraction factor 1/2 per step.
        assert!(h <= 2f64.powi(-12) + 2.0 * delta, "h = {h}");
    }

    #[test]
    fn point_budget_is_reported() {
        let ifs = sierpinski();
        let b = PointCloud::new(
            (0..100)
                .map(|i| MetricPoint::planar(i as f64, 0.0))
                .collect(),
        )
        .unwrap();
        match ifs.iterate_hutchinson_with_budget(&b, 3, 1e-9, 200) {
            Err(Error::PointBudgetExceeded {
                budget: 200,
                required,
            }) => {
                assert!(required > 200);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn fixed_points_of_builtin_pair() {
        let ifs = crate::builtin::mobius_pair();
        let fp1 = mobius_fixed_points(ifs.map(1).unwrap()).unwrap();
        // z/2: attracting 0, repelling infinity.
        assert!(fp1
            .iter()
            .any(|f| f.point == ExtComplex::Finite(Complex64::ZERO)
                && (f.multiplier_abs - 0.5).abs() < 1e-12));
        assert!(fp1
            .iter()
            .any(|f| f.point.is_infinity() && (f.multiplier_abs - 2.0).abs() < 1e-12));
        let fp2 = mobius_fixed_points(ifs.map(2).unwrap()).unwrap();
        // (3z+1)/(z+3): attracting 1, repelling -1.
        for f in &fp2 {
            if let ExtComplex::Finite(z) = f.point {
                if (z - Complex64::new(1.0, 0.0)).norm() < 1e-12 {
                    assert!((f.multiplier_abs - 0.5).abs() < 1e-12);
                } else {
                    assert!((z - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
                    assert!((f.multiplier_abs - 2.0).abs() < 1e-12);
                }
            } else {
                panic!("unexpected fixed point at infinity");
            }
        }
    }

    proptest! {
        // f_{uw} = f_u ∘ f_w, bitwise: both sides perform the identical
        // sequence of map applications.
        #[test]
        fn concatenation_law(
            u in proptest::collection::vec(1u32..=3, 1..6),
            w in proptest::collection::vec(1u32..=3, 1..6),
            x in -2.0f64..2.0,
            y in -2.0f64..2.0,
        ) {
            let ifs = sierpinski();
            let u = FiniteWord::new(u, 3).unwrap();
            let w = FiniteWord::new(w, 3).unwrap();
            let p = MetricPoint::planar(x, y);
            let uw = u.concat(&w).unwrap();
            let lhs = ifs.apply_word(&uw, p).unwrap();
            let rhs = ifs.apply_word(&u, ifs.apply_word(&w, p).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        // Extended-plane evaluation must never produce NaN, whatever the
        // input; poles and infinities route through the closed-form rules.
        #[test]
        fn mobius_never_nan(
            re in -1e6f64..1e6,
            im in -1e6f64..1e6,
            coeffs in proptest::collection::vec(-10.0f64..10.0, 8),
        ) {
            let f = MapSpec::mobius(
                Complex64::new(coeffs[0], coeffs[1]),
                Complex64::new(coeffs[2], coeffs[3]),
                Complex64::new(coeffs[4], coeffs[5]),
                Complex64::new(coeffs[6], coeffs[7]),
            );
            for p in [MetricPoint::sphere(re, im), MetricPoint::infinity()] {
                if let MetricPoint::Sphere(ExtComplex::Finite(z)) = f.apply(p).unwrap() {
                    prop_assert!(z.re.is_finite() && z.im.is_finite());
                }
            }
        }
    }
}
