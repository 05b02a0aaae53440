//! The code space: infinite words under the Baire metric
//! ϱ(σ, υ) = 2^(−first index of disagreement).
//!
//! Everything here works on finite prefixes, and the APIs are honest about
//! what a prefix can certify. Distances may come back *undetermined* (two
//! words that agree on their whole common prefix may or may not be equal),
//! and membership in the avoid-a-word sets may come back *consistent so
//! far*; neither is ever collapsed to a boolean. Dyadic radii are kept as
//! integer exponents, so every verification below is exact integer and
//! symbol comparison — no floating point on the decision path.
//!
//! Indexing is 1-based throughout this module: position k means the k-th
//! symbol of the word.

use crate::error::{Error, Result};
use crate::ifs::FiniteWord;
use crate::symbols::occurrences;

/// Baire distance computed from finite prefixes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaireDistance {
    /// The words disagree first at `index` (1-based): ϱ = 2^(−index) exactly,
    /// whatever their tails are.
    Determined { index: u32 },
    /// The prefixes agree on their whole common length `L`; the prefixes
    /// only certify ϱ ≤ 2^(−(L+1)).
    Undetermined { common_len: u32 },
}

impl BaireDistance {
    /// The exact distance, when determined.
    pub fn value(&self) -> Option<f64> {
        match self {
            BaireDistance::Determined { index } => Some((-(*index as f64)).exp2()),
            BaireDistance::Undetermined { .. } => None,
        }
    }

    /// An upper bound that always holds: the value itself when determined,
    /// 2^(−(L+1)) otherwise.
    pub fn bound(&self) -> f64 {
        match self {
            BaireDistance::Determined { index } => (-(*index as f64)).exp2(),
            BaireDistance::Undetermined { common_len } => (-((*common_len + 1) as f64)).exp2(),
        }
    }
}

/// Baire distance between two finite prefixes, compared over their common
/// length.
pub fn baire_distance(a: &FiniteWord, b: &FiniteWord) -> Result<BaireDistance> {
    if a.alphabet_size() != b.alphabet_size() {
        return Err(Error::InvalidInput(
            "baire distance requires words over one alphabet".into(),
        ));
    }
    let common = a.len().min(b.len());
    for i in 0..common {
        if a.symbols()[i] != b.symbols()[i] {
            return Ok(BaireDistance::Determined {
                index: (i + 1) as u32,
            });
        }
    }
    Ok(BaireDistance::Undetermined {
        common_len: common as u32,
    })
}

/// A cylinder {ψ1} × … × {ψn} × Σ^∞: the set of infinite words extending
/// `fixed_prefix`. The prefix may be empty (the whole space).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderSpec {
    pub fixed_prefix: Vec<u32>,
    pub alphabet_size: u32,
}

impl CylinderSpec {
    /// Whether `word`'s prefix is compatible with membership. Only the
    /// first `fixed_prefix.len()` symbols matter.
    pub fn admits(&self, word: &FiniteWord) -> bool {
        word.len() >= self.fixed_prefix.len()
            && word.symbols()[..self.fixed_prefix.len()] == self.fixed_prefix[..]
    }
}

/// The number of leading symbols a ball of radius `r` fixes: the unique
/// n ≥ 1 with 2^(−(n+1)) < r ≤ 2^(−n). Requires 0 < r ≤ 1/2.
pub fn ball_prefix_len(r: f64) -> Result<u32> {
    if !(r > 0.0 && r <= 0.5) {
        return Err(Error::InvalidInput(
            "ball radius must satisfy 0 < r <= 1/2".into(),
        ));
    }
    let mut n = 1u32;
    while r <= (-((n + 1) as f64)).exp2() {
        n += 1;
    }
    Ok(n)
}

/// Balls in the Baire metric are cylinders: N_r{ψ} fixes the first n symbols
/// of ψ, with n as in [`ball_prefix_len`]. Errors if the supplied prefix is
/// too short to name those symbols.
pub fn ball_as_cylinder(psi_prefix: &FiniteWord, r: f64) -> Result<CylinderSpec> {
    let n = ball_prefix_len(r)? as usize;
    if psi_prefix.len() < n {
        return Err(Error::PrefixTooShort {
            required: n,
            actual: psi_prefix.len(),
        });
    }
    Ok(CylinderSpec {
        fixed_prefix: psi_prefix.symbols()[..n].to_vec(),
        alphabet_size: psi_prefix.alphabet_size(),
    })
}

/// What a finite prefix can say about membership in Ψ(τ, p), the set of
/// infinite words with no occurrence of τ starting at or after position p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiMembership {
    /// The prefix already contains τ at a position ≥ p, so no extension
    /// belongs to Ψ(τ, p).
    CertainlyNotIn,
    /// No such occurrence yet; membership is a tail property and stays
    /// undecidable from any prefix.
    ConsistentSoFar,
}

/// Prefix-level membership test for Ψ(τ, p). `p` below 1 is treated as 1.
pub fn psi_membership(prefix: &FiniteWord, tau: &FiniteWord, p: usize) -> PsiMembership {
    if occurrences(prefix, tau, p.max(1)).is_empty() {
        PsiMembership::ConsistentSoFar
    } else {
        PsiMembership::CertainlyNotIn
    }
}

/// A porosity witness for Ψ(τ, p) at scale 2^(−n) around ψ: a center υ and
/// dyadic factor λ = 2^(−lambda_exponent) such that the ball of radius
/// λ·2^(−n) around υ sits inside N_{2^(−n)}{ψ} and misses Ψ(τ, p) entirely.
///
/// The construction keeps ψ's symbols below position ñ = n + p and continues
/// with τ repeated, so the hole's cylinder pins an occurrence of τ at
/// position ñ ≥ p; λ is 2^(−(2m+p)) with m = |τ|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PorosityWitness {
    pub upsilon_prefix: FiniteWord,
    /// λ = 2^(−lambda_exponent), stored exactly as the exponent.
    pub lambda_exponent: u32,
    pub n: u32,
    pub tau: FiniteWord,
    pub p: u32,
}

impl PorosityWitness {
    pub fn lambda(&self) -> f64 {
        (-(self.lambda_exponent as f64)).exp2()
    }

    /// How many leading symbols the hole N_{λ·2^(−n)}{υ} fixes.
    pub fn cylinder_len(&self) -> usize {
        (self.lambda_exponent + self.n) as usize
    }
}

/// Builds the porosity witness for Ψ(τ, p) at scale n around a prefix of ψ.
///
/// Requires |ψ-prefix| ≥ ñ−1 with ñ = n + p (the symbols υ copies), and the
/// prefix must still be consistent with Ψ(τ, p): the construction mirrors a
/// point of Ψ, not an arbitrary word.
pub fn porosity_witness(
    psi_prefix: &FiniteWord,
    tau: &FiniteWord,
    p: usize,
    n: usize,
) -> Result<PorosityWitness> {
    if psi_prefix.alphabet_size() != tau.alphabet_size() {
        return Err(Error::InvalidInput(
            "psi and tau must share an alphabet".into(),
        ));
    }
    if p == 0 || n == 0 {
        return Err(Error::InvalidInput("positions p and n must be >= 1".into()));
    }
    let m = tau.len();
    let n_tilde = n + p;
    if psi_prefix.len() < n_tilde - 1 {
        return Err(Error::PrefixTooShort {
            required: n_tilde - 1,
            actual: psi_prefix.len(),
        });
    }
    if psi_membership(psi_prefix, tau, p) == PsiMembership::CertainlyNotIn {
        return Err(Error::InvalidInput(
            "psi_prefix already contains tau at or after position p".into(),
        ));
    }
    let lambda_exponent = (2 * m + p) as u32;
    let total = 2 * m + p + n; // the hole's cylinder length
    let mut symbols = Vec::with_capacity(total);
    for i in 1..=total {
        if i < n_tilde {
            symbols.push(psi_prefix.symbols()[i - 1]);
        } else {
            symbols.push(tau.symbols()[(i - n_tilde) % m]);
        }
    }
    Ok(PorosityWitness {
        upsilon_prefix: FiniteWord::new(symbols, psi_prefix.alphabet_size())?,
        lambda_exponent,
        n: n as u32,
        tau: tau.clone(),
        p: p as u32,
    })
}

/// Checks a porosity witness against the ψ-prefix it was built from. All
/// three conditions are exact finite checks:
///
/// 1. λ is the dyadic the construction demands, 2^(−(2m+p)) — a tampered
///    radius never verifies;
/// 2. every word in the hole's cylinder agrees with ψ on the first n
///    symbols, hence lies in N_{2^(−n)}{ψ};
/// 3. the cylinder pins a complete occurrence of τ at a position ≥ p, hence
///    every word in it is outside Ψ(τ, p) regardless of tail.
///
/// For condition 3, pinning a complete occurrence is also necessary over an
/// alphabet with N ≥ 2: if no occurrence fits inside the fixed prefix, a
/// tail of a constant symbol differing from τ's last symbol extends the
/// prefix to a member of Ψ(τ, p) inside the cylinder.
pub fn verify_porosity_witness(witness: &PorosityWitness, psi_prefix: &FiniteWord) -> bool {
    let upsilon = &witness.upsilon_prefix;
    let tau = &witness.tau;
    let m = tau.len();
    let n = witness.n as usize;
    let p = witness.p as usize;
    if upsilon.alphabet_size() != psi_prefix.alphabet_size()
        || upsilon.alphabet_size() != tau.alphabet_size()
    {
        return false;
    }
    // (1) the radius invariant
    if witness.lambda_exponent as usize != 2 * m + p {
        return false;
    }
    // the hole's cylinder, from the stored radius
    let q = witness.cylinder_len();
    if upsilon.len() < q || psi_prefix.len() < n || q < n {
        return false;
    }
    // (2) agreement with psi on the first n symbols
    if upsilon.symbols()[..n] != psi_prefix.symbols()[..n] {
        return false;
    }
    // (3) a complete occurrence of tau within the fixed q symbols, at >= p
    occurrences(upsilon, tau, p).iter().any(|&k| k + m - 1 <= q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(symbols: &[u32], n: u32) -> FiniteWord {
        FiniteWord::new(symbols.to_vec(), n).unwrap()
    }

    #[test]
    fn equal_prefixes_are_undetermined() {
        let a = word(&[1, 2, 1], 2);
        let d = baire_distance(&a, &a).unwrap();
        assert_eq!(d, BaireDistance::Undetermined { common_len: 3 });
        assert_eq!(d.bound(), 2f64.powi(-4));
        assert_eq!(d.value(), None);
    }

    #[test]
    fn first_disagreement_sets_the_distance() {
        let a = word(&[1, 2, 2], 3);
        let b = word(&[1, 3, 1], 3);
        let d = baire_distance(&a, &b).unwrap();
        assert_eq!(d, BaireDistance::Determined { index: 2 });
        assert_eq!(d.value(), Some(0.25));
    }

    #[test]
    fn different_lengths_compare_over_common_prefix() {
        let a = word(&[1, 2], 2);
        let b = word(&[1, 2, 1, 1], 2);
        assert_eq!(
            baire_distance(&a, &b).unwrap(),
            BaireDistance::Undetermined { common_len: 2 }
        );
    }

    /// Exhaustive ultrametric check on all determined triples of words of
    /// length ≤ `max_len`; exact exponent comparison, no floats.
    fn ultrametric_exhaustive(n: u32, max_len: usize) {
        let mut words = Vec::new();
        for len in 1..=max_len {
            for code in 0..(n as usize).pow(len as u32) {
                let mut symbols = vec![1u32; len];
                let mut rest = code;
                for s in symbols.iter_mut().rev() {
                    *s = (rest % n as usize) as u32 + 1;
                    rest /= n as usize;
                }
                words.push(word(&symbols, n));
            }
        }
        for a in &words {
            for b in &words {
                for c in &words {
                    let (dab, dbc, dac) = (
                        baire_distance(a, b).unwrap(),
                        baire_distance(b, c).unwrap(),
                        baire_distance(a, c).unwrap(),
                    );
                    if let (
                        BaireDistance::Determined { index: iab },
                        BaireDistance::Determined { index: ibc },
                        BaireDistance::Determined { index: iac },
                    ) = (dab, dbc, dac)
                    {
                        // 2^-iac <= max(2^-iab, 2^-ibc) <=> iac >= min(iab, ibc)
                        assert!(
                            iac >= iab.min(ibc),
                            "ultrametric violated: {a:?} {b:?} {c:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn ultrametric_on_short_words() {
        ultrametric_exhaustive(2, 4);
        ultrametric_exhaustive(3, 3);
        ultrametric_exhaustive(4, 2);
    }

    #[test]
    fn ball_prefix_lengths() {
        assert_eq!(ball_prefix_len(0.5).unwrap(), 1);
        assert_eq!(ball_prefix_len(2f64.powi(-3)).unwrap(), 3); // boundary included
        assert_eq!(ball_prefix_len(0.3).unwrap(), 1); // 2^-2 < 0.3 <= 2^-1
        assert_eq!(ball_prefix_len(0.2).unwrap(), 2); // 2^-3 < 0.2 <= 2^-2
        assert!(ball_prefix_len(0.6).is_err());
        assert!(ball_prefix_len(0.0).is_err());
    }

    #[test]
    fn ball_as_cylinder_fixes_prefix() {
        let psi = word(&[2, 1, 2, 2], 2);
        let cyl = ball_as_cylinder(&psi, 0.5).unwrap();
        assert_eq!(cyl.fixed_prefix, vec![2]);
        let cyl = ball_as_cylinder(&psi, 0.125).unwrap();
        assert_eq!(cyl.fixed_prefix, vec![2, 1, 2]);
    }

    #[test]
    fn ball_as_cylinder_reports_required_length() {
        let psi = word(&[2, 1], 2);
        match ball_as_cylinder(&psi, 2f64.powi(-5)) {
            Err(Error::PrefixTooShort {
                required: 5,
                actual: 2,
            }) => {}
            other => panic!("expected PrefixTooShort, got {other:?}"),
        }
    }

    /// Membership round-trip at small lengths: words inside the cylinder
    /// have distance-to-ψ bounds strictly below r, words outside have
    /// determined distance ≥ r.
    #[test]
    fn ball_membership_round_trip() {
        let n_alpha = 2u32;
        let len = 6usize;
        let all_words: Vec<FiniteWord> = (0..(n_alpha as usize).pow(len as u32))
            .map(|code| {
                let mut symbols = vec![1u32; len];
                let mut rest = code;
                for s in symbols.iter_mut().rev() {
                    *s = (rest % n_alpha as usize) as u32 + 1;
                    rest /= n_alpha as usize;
                }
                word(&symbols, n_alpha)
            })
            .collect();
        let psi = word(&[1, 2, 2, 1, 2, 1], 2);
        for r in [0.5, 0.25, 0.3, 2f64.powi(-3), 2f64.powi(-5), 0.1] {
            let cyl = ball_as_cylinder(&psi, r).unwrap();
            for w in &all_words {
                let d = baire_distance(w, &psi).unwrap();
                if cyl.admits(w) {
                    assert!(d.bound() < r, "inside but bound {} >= {r}", d.bound());
                } else {
                    assert!(d.value().unwrap() >= r);
                }
            }
        }
    }

    #[test]
    fn psi_membership_examples() {
        let all_ones = word(&[1; 8], 2);
        let tau = word(&[2], 2);
        assert_eq!(
            psi_membership(&all_ones, &tau, 1),
            PsiMembership::ConsistentSoFar
        );

        let w = word(&[1, 1, 2, 1], 2);
        assert_eq!(psi_membership(&w, &tau, 1), PsiMembership::CertainlyNotIn);
        // occurrence only before p: still consistent
        assert_eq!(psi_membership(&w, &tau, 4), PsiMembership::ConsistentSoFar);
    }

    #[test]
    fn witness_construction_matches_the_formula() {
        // tau = (2), p = 1, psi all-ones, n = 2: upsilon = 1,1,2,2,2 and
        // lambda = 2^-3 (m = 1).
        let psi = word(&[1; 10], 2);
        let tau = word(&[2], 2);
        let w = porosity_witness(&psi, &tau, 1, 2).unwrap();
        assert_eq!(w.upsilon_prefix.symbols(), &[1, 1, 2, 2, 2]);
        assert_eq!(w.lambda_exponent, 3);
        assert_eq!(w.lambda(), 0.125);
        // distance from psi determined at index n~ = 3: 2^-3 < 2^-2
        let d = baire_distance(&w.upsilon_prefix, &psi).unwrap();
        assert_eq!(d, BaireDistance::Determined { index: 3 });
        // tau occurs at position 3 >= p
        assert_eq!(occurrences(&w.upsilon_prefix, &tau, 1), vec![3, 4, 5]);
        assert!(verify_porosity_witness(&w, &psi));
    }

    #[test]
    fn witness_with_swapped_symbols() {
        let psi = word(&[2; 12], 2);
        let tau = word(&[1], 2);
        for n in 1..=5 {
            let w = porosity_witness(&psi, &tau, 1, n).unwrap();
            assert!(verify_porosity_witness(&w, &psi), "n = {n}");
        }
    }

    #[test]
    fn corrupted_lambda_fails_verification() {
        let psi = word(&[1; 12], 2);
        let tau = word(&[2, 1], 2);
        let mut w = porosity_witness(&psi, &tau, 2, 3).unwrap();
        assert!(verify_porosity_witness(&w, &psi));
        w.lambda_exponent -= 1; // lambda doubled: radius no longer the construction's
        assert!(!verify_porosity_witness(&w, &psi));
    }

    #[test]
    fn witness_needs_a_consistent_prefix() {
        let psi = word(&[1, 2, 1, 1], 2); // contains tau = (2) at position 2
        let tau = word(&[2], 2);
        assert!(porosity_witness(&psi, &tau, 1, 2).is_err());
        // but with p beyond the occurrence the same prefix is fine
        assert!(porosity_witness(&psi, &tau, 3, 2).is_ok());
    }

    #[test]
    fn witness_reports_short_prefix() {
        let psi = word(&[1, 1], 2);
        let tau = word(&[2], 2);
        match porosity_witness(&psi, &tau, 2, 4) {
            Err(Error::PrefixTooShort {
                required: 5,
                actual: 2,
            }) => {}
            other => panic!("expected PrefixTooShort, got {other:?}"),
        }
    }

    /// Inflating the radius far enough genuinely breaks the hole: the
    /// shortened cylinder no longer pins any occurrence of tau, and an
    /// explicit continuation stays inside Psi(tau, p). This is the
    /// geometric failure mode behind the radius invariant in
    /// `verify_porosity_witness`.
    #[test]
    fn overinflated_radius_admits_a_tau_free_continuation() {
        let psi = word(&[1; 12], 2);
        let tau = word(&[2], 2);
        let (p, n) = (1usize, 2usize);
        let w = porosity_witness(&psi, &tau, p, n).unwrap();
        let m = tau.len();
        // shrink the exponent past the construction's slack of m+1 steps
        let inflated = w.lambda_exponent as usize - (m + 2);
        // the shorter cylinder: no complete occurrence of tau fits in its
        // first q symbols...
        let q = inflated + n;
        assert!(occurrences(&w.upsilon_prefix, &tau, p)
            .iter()
            .all(|&k| k + m - 1 > q));
        // ...so extending those q symbols by all-ones avoids tau entirely:
        let mut continuation = w.upsilon_prefix.symbols()[..q].to_vec();
        continuation.extend([1u32; 16]);
        let continuation = word(&continuation, 2);
        assert_eq!(
            psi_membership(&continuation, &tau, p),
            PsiMembership::ConsistentSoFar
        );
    }

    /// Prefix-level decomposition of "non-disjunctive sequences are covered
    /// by the avoid sets": a prefix is certainly outside every Psi(tau, 1)
    /// with |tau| <= m exactly when it has no missing words up to length m.
    #[test]
    fn certainly_not_in_matches_missing_words() {
        use crate::symbols::{missing_words, SymbolStream};
        let mut prefixes = vec![
            word(&[1, 2, 1, 1, 2, 2, 1], 2),
            word(&[1, 1, 1, 1], 2),
            word(&[1, 2].repeat(20), 2),
        ];
        let mut champ = SymbolStream::champernowne(2).unwrap();
        prefixes.push(champ.take_word(100).unwrap());
        for prefix in &prefixes {
            for m in 1..=3usize {
                let all_not_in = (0..(2usize.pow(m as u32))).all(|code| {
                    let mut symbols = vec![1u32; m];
                    let mut rest = code;
                    for s in symbols.iter_mut().rev() {
                        *s = (rest % 2) as u32 + 1;
                        rest /= 2;
                    }
                    psi_membership(prefix, &word(&symbols, 2), 1) == PsiMembership::CertainlyNotIn
                });
                let none_missing = missing_words(prefix, m).unwrap().is_empty();
                assert_eq!(all_not_in, none_missing, "prefix {prefix:?}, m = {m}");
            }
        }
    }
}
