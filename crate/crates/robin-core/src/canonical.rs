//! Canonicalization: replace arbitrary primes by the first m primes and
//! sort exponents nonincreasing, together with the pairwise and product
//! rearrangement inequalities that make the reduction safe. The
//! canonical form can only shrink l(n), so it is the worst case for the
//! gap — `theorem1_gap_pair` certifies that dominance per input.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::factor::Factorization;
use crate::functional::little_l_at;
use crate::interval::{CertifiedReal, EscalationPolicy, RealCtx};
use crate::primes::first_primes;

/// Exponents sorted nonincreasing over the implied first m primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    exponents: Vec<u32>,
}

impl CanonicalForm {
    /// Validates the nonincreasing-positive invariant.
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidArgument("canonical form must be nonempty"));
        }
        if exponents.iter().any(|&b| b == 0) {
            return Err(Error::InvalidArgument("canonical exponents must be positive"));
        }
        if exponents.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument("canonical exponents must be nonincreasing"));
        }
        Ok(CanonicalForm { exponents })
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Materializes ∏ p_k^(β_k) over the first m primes.
    pub fn to_factorization(&self) -> Factorization {
        let primes = first_primes(self.exponents.len());
        Factorization::new(primes.into_iter().zip(self.exponents.iter().copied()).collect())
            .expect("first primes ascend")
    }
}

/// Sorts the exponent multiset of `f` nonincreasing onto the first m
/// primes. Idempotent on already-canonical inputs.
pub fn canonicalize(f: &Factorization) -> Result<CanonicalForm> {
    if f.is_one() {
        return Err(Error::InvalidArgument("cannot canonicalize n = 1"));
    }
    let mut exponents: Vec<u32> = f.exponents().collect();
    exponents.sort_unstable_by(|a, b| b.cmp(a));
    CanonicalForm::new(exponents)
}

/// Whether (1 − a^(−α))(1 − b^(−β)) ≤ (1 − a^(−β))(1 − b^(−α)).
///
/// Inputs are sorted to meet the hypotheses 1 ≤ α ≤ β, 1 ≤ a ≤ b before
/// evaluation, so unordered fuzz tuples are fine. Integer exponents are
/// decided in exact rationals; real exponents by certified enclosures
/// with precision escalation.
pub fn pair_inequality_holds(a: f64, b: f64, alpha: f64, beta: f64) -> Result<bool> {
    if !(a >= 1.0 && b >= 1.0 && alpha >= 1.0 && beta >= 1.0) {
        return Err(Error::InvalidArgument("pair inequality requires all parameters ≥ 1"));
    }
    if ![a, b, alpha, beta].iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidArgument("pair inequality requires finite parameters"));
    }
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let (alpha, beta) = if alpha <= beta { (alpha, beta) } else { (beta, alpha) };
    // Equal bases or equal exponents give exact equality.
    if a == b || alpha == beta {
        return Ok(true);
    }

    let integral = |v: f64| v.fract() == 0.0 && v <= u32::MAX as f64;
    if integral(alpha) && integral(beta) {
        return Ok(pair_inequality_rational(a, b, alpha as u32, beta as u32));
    }

    let policy = EscalationPolicy::default();
    let mut ctx = RealCtx::new();
    let mut bits = policy.start_bits;
    for _ in 0..=policy.max_escalations {
        let lhs = pair_side(a, alpha, b, beta, bits, &mut ctx);
        let rhs = pair_side(a, beta, b, alpha, bits, &mut ctx);
        match rhs.ge_certified(&lhs) {
            Some(v) => return Ok(v),
            None => bits *= 2,
        }
    }
    Err(Error::Indeterminate)
}

/// (1 − x^(−u))(1 − y^(−v)) as an enclosure.
fn pair_side(x: f64, u: f64, y: f64, v: f64, bits: usize, ctx: &mut RealCtx) -> CertifiedReal {
    let one = CertifiedReal::exact_u64(1);
    let term = |base: f64, exp: f64, ctx: &mut RealCtx| {
        let b = CertifiedReal::exact_f64(base);
        let ln_b = b.ln(bits, ctx).expect("base ≥ 1");
        let p = CertifiedReal::exact_f64(-exp).mul(&ln_b, bits).exp(bits, ctx);
        one.sub(&p, bits)
    };
    let l = term(x, u, ctx);
    let r = term(y, v, ctx);
    l.mul(&r, bits)
}

/// Exact-rational decision for integer exponents: compares
/// (1 − a^(−α))(1 − b^(−β)) against (1 − a^(−β))(1 − b^(−α)) after
/// clearing denominators. `f64` bases are exact binary rationals.
fn pair_inequality_rational(a: f64, b: f64, alpha: u32, beta: u32) -> bool {
    use num_rational::BigRational;
    let a = BigRational::from_float(a).expect("finite");
    let b = BigRational::from_float(b).expect("finite");
    let one = BigRational::one();
    let side = |x: &BigRational, u: u32, y: &BigRational, v: u32| {
        (&one - x.pow(-(u as i32))) * (&one - y.pow(-(v as i32)))
    };
    side(&a, alpha, &b, beta) <= side(&a, beta, &b, alpha)
}

/// Enclosure of ∏ (q_i − q_i^(−α_i)).
///
/// Repeated primes are allowed (the underlying inequality only needs
/// q₁ ≤ q₂ ≤ …); the list must be nondecreasing. Small inputs go through
/// exact rationals.
pub fn rearrangement_product(
    primes: &[u64],
    exponents: &[u32],
    bits: usize,
    ctx: &mut RealCtx,
) -> Result<CertifiedReal> {
    if primes.len() != exponents.len() {
        return Err(Error::LengthMismatch);
    }
    if primes.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("primes must be nondecreasing"));
    }
    if exponents.iter().any(|&a| a == 0) {
        return Err(Error::InvalidArgument("exponents must be positive"));
    }
    if let Some((num, den)) = rearrangement_product_rational(primes, exponents) {
        return Ok(CertifiedReal::from_ratio(&num, &den, bits));
    }
    let mut acc = CertifiedReal::exact_u64(1);
    for (&q, &a) in primes.iter().zip(exponents) {
        let q_pow = ctx
            .ln_u64(q, bits)
            .mul(&CertifiedReal::exact_i64(-(a as i64)), bits)
            .exp(bits, ctx);
        acc = acc.mul(&CertifiedReal::exact_u64(q).sub(&q_pow, bits), bits);
    }
    Ok(acc)
}

/// ∏ (q − q^(−α)) = ∏ (q^(α+1) − 1) / ∏ q^α, exact while the powers stay
/// materializable.
fn rearrangement_product_rational(primes: &[u64], exponents: &[u32]) -> Option<(BigUint, BigUint)> {
    if primes
        .iter()
        .zip(exponents)
        .any(|(&q, &a)| a > 64 || q > 1_000_000)
    {
        return None;
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (&q, &a) in primes.iter().zip(exponents) {
        let qb = BigUint::from(q);
        num *= qb.pow(a + 1) - 1u32;
        den *= qb.pow(a);
    }
    Some((num, den))
}

/// Exact comparison of ∏ q_k^(α_k) against ∏ q_k^(β_k), where β is the
/// exponent multiset sorted nonincreasing. Always ≥ under the
/// nondecreasing-primes hypothesis.
pub fn power_product_compare(primes: &[u64], exponents: &[u32]) -> Result<core::cmp::Ordering> {
    if primes.len() != exponents.len() {
        return Err(Error::LengthMismatch);
    }
    if primes.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("primes must be nondecreasing"));
    }
    let original = power_product(primes, exponents);
    let mut sorted: Vec<u32> = exponents.to_vec();
    sorted.sort_unstable_by(|x, y| y.cmp(x));
    let descending = power_product(primes, &sorted);
    Ok(original.cmp(&descending))
}

fn power_product(primes: &[u64], exponents: &[u32]) -> BigUint {
    primes
        .iter()
        .zip(exponents)
        .fold(BigUint::one(), |acc, (&q, &a)| acc * BigUint::from(q).pow(a))
}

/// Outcome of the gap-dominance certification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominanceVerdict {
    /// l(original) ≥ l(canonical) certified by separated enclosures.
    Dominates,
    /// The input already is its canonical form; the values coincide.
    Identical,
    /// Enclosures still overlapped after tolerance escalation.
    Indeterminate,
}

/// Both sides of the canonicalization inequality.
#[derive(Debug, Clone)]
pub struct Theorem1Gap {
    pub l_original: CertifiedReal,
    pub l_canonical: CertifiedReal,
    pub verdict: DominanceVerdict,
}

/// Evaluates l on `f` and on its canonical form and certifies that the
/// original dominates. Overlapping enclosures escalate the tolerance by
/// 10⁻¹⁰ twice before reporting `Indeterminate`.
pub fn theorem1_gap_pair(
    f: &Factorization,
    tolerance: f64,
    policy: &EscalationPolicy,
    ctx: &mut RealCtx,
) -> Result<Theorem1Gap> {
    let canonical = canonicalize(f)?.to_factorization();
    if *f == canonical {
        let l = crate::functional::little_l(f, tolerance, policy, ctx)?;
        return Ok(Theorem1Gap {
            l_original: l.clone(),
            l_canonical: l,
            verdict: DominanceVerdict::Identical,
        });
    }
    value_at_least_three(f)?;
    value_at_least_three(&canonical)?;

    let mut tol = tolerance;
    let mut result = None;
    for _ in 0..3 {
        let bits = policy
            .bits_for_tolerance(f.num_primes() as i64 + 8, tol)
            .max(policy.start_bits);
        let l_original = little_l_at(f, bits, ctx)?;
        let l_canonical = little_l_at(&canonical, bits, ctx)?;
        if let Some(dominates) = l_original.ge_certified(&l_canonical) {
            let verdict = if dominates {
                DominanceVerdict::Dominates
            } else {
                // would falsify the inequality; surface it loudly
                return Err(Error::InvalidArgument(
                    "canonical form exceeded the original gap",
                ));
            };
            return Ok(Theorem1Gap {
                l_original,
                l_canonical,
                verdict,
            });
        }
        result = Some(Theorem1Gap {
            l_original,
            l_canonical,
            verdict: DominanceVerdict::Indeterminate,
        });
        tol *= 1e-10;
    }
    Ok(result.expect("at least one evaluation"))
}

fn value_at_least_three(f: &Factorization) -> Result<()> {
    match f.entries() {
        [] => Err(Error::Domain("n = 1: log log n undefined")),
        [(2, 1)] => Err(Error::Domain("n = 2: below the n ≥ 3 domain cutoff")),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::parse_factorization;

    fn fac(s: &str) -> Factorization {
        parse_factorization(s).unwrap()
    }

    #[test]
    fn canonicalize_fixtures() {
        // {(3,2),(7,1)} → β = (2,1), canonical n = 2²·3 = 12
        let c = canonicalize(&fac("3^2*7")).unwrap();
        assert_eq!(c.exponents(), &[2, 1]);
        assert_eq!(c.to_factorization(), fac("2^2*3"));

        // already canonical is a fixed point
        let c = canonicalize(&fac("2*3*5")).unwrap();
        assert_eq!(c.exponents(), &[1, 1, 1]);
        assert_eq!(c.to_factorization(), fac("2*3*5"));

        // {(5,1),(11,3),(13,2)} → β = (3,2,1), canonical 2³·3²·5 = 360
        let c = canonicalize(&fac("5*11^3*13^2")).unwrap();
        assert_eq!(c.exponents(), &[3, 2, 1]);
        assert_eq!(c.to_factorization(), fac("2^3*3^2*5"));

        assert!(canonicalize(&Factorization::one()).is_err());
    }

    #[test]
    fn canonicalize_is_idempotent() {
        for text in ["3^2*7", "5*11^3*13^2", "2^4*3^2*5*7", "101^5"] {
            let once = canonicalize(&fac(text)).unwrap().to_factorization();
            let twice = canonicalize(&once).unwrap().to_factorization();
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn canonical_form_validation() {
        assert!(CanonicalForm::new(vec![3, 2, 1]).is_ok());
        assert!(CanonicalForm::new(vec![1, 2]).is_err());
        assert!(CanonicalForm::new(vec![2, 0]).is_err());
        assert!(CanonicalForm::new(vec![]).is_err());
    }

    #[test]
    fn pair_inequality_fixture() {
        // (a,b,α,β) = (2,3,1,2): LHS = (1/2)(8/9) = 4/9, RHS = (3/4)(2/3) = 1/2
        assert!(pair_inequality_holds(2.0, 3.0, 1.0, 2.0).unwrap());
        // equality cases
        assert!(pair_inequality_holds(2.0, 2.0, 1.0, 5.0).unwrap());
        assert!(pair_inequality_holds(2.0, 7.0, 3.0, 3.0).unwrap());
        // unordered inputs are sorted first
        assert!(pair_inequality_holds(3.0, 2.0, 2.0, 1.0).unwrap());
        // real exponents take the certified path
        assert!(pair_inequality_holds(2.0, 3.0, 1.5, 2.25).unwrap());
        assert!(pair_inequality_holds(1.5, 9.75, 1.25, 7.5).unwrap());
        // domain errors
        assert!(pair_inequality_holds(0.5, 3.0, 1.0, 2.0).is_err());
        assert!(pair_inequality_holds(2.0, 3.0, 0.0, 2.0).is_err());
    }

    #[test]
    fn rearrangement_product_fixtures() {
        let mut ctx = RealCtx::new();
        // (2 − 1/2)(3 − 1/9) = 13/3
        let p = rearrangement_product(&[2, 3], &[1, 2], 128, &mut ctx).unwrap();
        let r = CertifiedReal::from_ratio(&BigUint::from(13u32), &BigUint::from(3u32), 192);
        assert!(p.overlaps(&r));
        // descending arrangement dominates: (2 − 1/4)(3 − 1/3) = 14/3
        let q = rearrangement_product(&[2, 3], &[2, 1], 128, &mut ctx).unwrap();
        let r2 = CertifiedReal::from_ratio(&BigUint::from(14u32), &BigUint::from(3u32), 192);
        assert!(q.overlaps(&r2));
        assert_eq!(p.cmp_certified(&q), Some(core::cmp::Ordering::Less));
        // single prime: q − q^(−α)
        let s = rearrangement_product(&[5], &[2], 128, &mut ctx).unwrap();
        let r3 = CertifiedReal::from_ratio(&BigUint::from(124u32), &BigUint::from(25u32), 192);
        assert!(s.overlaps(&r3));
        // repeats allowed; descending order rejected
        assert!(rearrangement_product(&[3, 3], &[1, 2], 128, &mut ctx).is_ok());
        assert!(rearrangement_product(&[3, 2], &[1, 2], 128, &mut ctx).is_err());
        assert!(rearrangement_product(&[2], &[1, 2], 128, &mut ctx).is_err());
    }

    #[test]
    fn rearrangement_huge_exponent_interval_path() {
        let mut ctx = RealCtx::new();
        // exponent beyond the rational bound: factor ≈ q exactly minus a
        // vanishing power
        let p = rearrangement_product(&[2, 3], &[1, 1_000], 160, &mut ctx).unwrap();
        // (2 − 1/2)·(3 − 3^(−1000)) < 4.5, > 4.4999…
        assert!(p.approx_f64() > 4.4999 && p.approx_f64() <= 4.5);
    }

    #[test]
    fn power_product_fixtures() {
        use core::cmp::Ordering;
        // 2¹·3² = 18 ≥ 2²·3¹ = 12
        assert_eq!(power_product_compare(&[2, 3], &[1, 2]).unwrap(), Ordering::Greater);
        // already descending → equal
        assert_eq!(power_product_compare(&[2, 3], &[2, 1]).unwrap(), Ordering::Equal);
        // 2·3·5³ = 750 ≥ 2³·3·5 = 120
        assert_eq!(
            power_product_compare(&[2, 3, 5], &[1, 1, 3]).unwrap(),
            Ordering::Greater
        );
        assert!(power_product_compare(&[2], &[1, 2]).is_err());
    }

    #[test]
    fn theorem1_gap_fixtures() {
        let mut ctx = RealCtx::new();
        let policy = EscalationPolicy::default();
        // n' = 63 = 3²·7 vs canonical 12
        let gap = theorem1_gap_pair(&fac("3^2*7"), 1e-30, &policy, &mut ctx).unwrap();
        assert_eq!(gap.verdict, DominanceVerdict::Dominates);
        assert!(gap.l_original.lo() >= gap.l_canonical.hi());

        // already canonical → values coincide
        let gap = theorem1_gap_pair(&fac("2^3*3^2*5"), 1e-30, &policy, &mut ctx).unwrap();
        assert_eq!(gap.verdict, DominanceVerdict::Identical);

        // {(5,1),(11,3),(13,2)} vs canonical 360
        let gap = theorem1_gap_pair(&fac("5*11^3*13^2"), 1e-30, &policy, &mut ctx).unwrap();
        assert_eq!(gap.verdict, DominanceVerdict::Dominates);
    }
}
