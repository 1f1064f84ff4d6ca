//! The central functionals: l(n) = D(n)/n, the certified sign of
//! D(n) = e^γ n log log n − σ(n), Wójtowicz's ratio k(n), the exponent
//! excess ε and its prefix trace, the exponent-shift identity, the
//! scaled gap R(x), and the minimum-at-consecutive-primes comparison.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::factor::Factorization;
use crate::interval::{CertifiedReal, CertifiedSign, EscalationPolicy, RealCtx};
use crate::primes::first_primes;

/// Euler's constant and its exponential, bundled at one precision.
#[derive(Debug, Clone)]
pub struct EulerGamma {
    pub gamma: CertifiedReal,
    pub exp_gamma: CertifiedReal,
}

impl EulerGamma {
    pub fn at(bits: usize, ctx: &mut RealCtx) -> Self {
        EulerGamma {
            gamma: ctx.gamma(bits),
            exp_gamma: ctx.exp_gamma(bits),
        }
    }
}

/// Per-n record of every certified quantity the scan and check commands
/// report.
#[derive(Debug, Clone)]
pub struct RobinReport {
    pub factorization: Factorization,
    pub log_n: CertifiedReal,
    pub loglog_n: CertifiedReal,
    pub sigma_over_n: CertifiedReal,
    pub little_l: CertifiedReal,
    pub d_sign: CertifiedSign,
    /// Exponent excess, present only for canonical-support inputs.
    pub epsilon_m: Option<CertifiedReal>,
}

/// The prefix sequence ε₁ ≥ ε₂ ≥ … ≥ ε_m (nonincreasing whenever the
/// source exponents are).
#[derive(Debug, Clone)]
pub struct EpsilonTrace {
    pub values: Vec<CertifiedReal>,
}

fn reject_below_three(f: &Factorization) -> Result<()> {
    match f.entries() {
        [] => Err(Error::Domain("n = 1: log log n undefined")),
        [(2, 1)] => Err(Error::Domain("n = 2: below the n ≥ 3 domain cutoff")),
        _ => Ok(()),
    }
}

/// Working precision for a target width around the functional's terms.
fn start_bits(f: &Factorization, tolerance: f64, policy: &EscalationPolicy) -> usize {
    let magnitude = f.num_primes() as i64 + 8;
    policy
        .bits_for_tolerance(magnitude, tolerance)
        .max(policy.start_bits)
}

/// One evaluation of l(n) = e^γ·log log n − σ(n)/n at a fixed precision.
pub fn little_l_at(f: &Factorization, bits: usize, ctx: &mut RealCtx) -> Result<CertifiedReal> {
    let log_n = f.log_n(bits, ctx);
    let loglog_n = log_n.ln(bits, ctx)?;
    let lhs = ctx.exp_gamma(bits).mul(&loglog_n, bits);
    let rhs = f.sigma_over_n_at(bits, ctx);
    Ok(lhs.sub(&rhs, bits))
}

/// Enclosure of l(n) with width at most `tolerance` (where the precision
/// ladder suffices; the widest rung is returned otherwise).
pub fn little_l(
    f: &Factorization,
    tolerance: f64,
    policy: &EscalationPolicy,
    ctx: &mut RealCtx,
) -> Result<CertifiedReal> {
    reject_below_three(f)?;
    let mut bits = start_bits(f, tolerance, policy);
    let mut value = little_l_at(f, bits, ctx)?;
    for _ in 0..policy.max_escalations {
        if value.width_below(tolerance) {
            break;
        }
        bits *= 2;
        value = little_l_at(f, bits, ctx)?;
    }
    Ok(value)
}

/// Certified sign of D(n) (equals the sign of l(n) since n > 0).
///
/// `Indeterminate` is only reported after the full precision ladder
/// fails to separate the enclosure from zero; it is never a claim that
/// D(n) = 0.
pub fn d_sign(
    f: &Factorization,
    policy: &EscalationPolicy,
    ctx: &mut RealCtx,
) -> Result<CertifiedSign> {
    reject_below_three(f)?;
    let mut bits = policy.start_bits;
    for _ in 0..=policy.max_escalations {
        let value = little_l_at(f, bits, ctx)?;
        let sign = value.sign();
        if sign != CertifiedSign::Indeterminate {
            return Ok(sign);
        }
        bits *= 2;
    }
    Ok(CertifiedSign::Indeterminate)
}

/// Wójtowicz's ratio k(n) = σ(n) / (e^γ n log log n); k(n) < 1 iff D(n) > 0.
pub fn wojtowicz_k(
    f: &Factorization,
    tolerance: f64,
    policy: &EscalationPolicy,
    ctx: &mut RealCtx,
) -> Result<CertifiedReal> {
    reject_below_three(f)?;
    let mut bits = start_bits(f, tolerance, policy);
    let mut value = wojtowicz_k_at(f, bits, ctx)?;
    for _ in 0..policy.max_escalations {
        if value.width_below(tolerance) {
            break;
        }
        bits *= 2;
        value = wojtowicz_k_at(f, bits, ctx)?;
    }
    Ok(value)
}

fn wojtowicz_k_at(f: &Factorization, bits: usize, ctx: &mut RealCtx) -> Result<CertifiedReal> {
    let log_n = f.log_n(bits, ctx);
    let loglog_n = log_n.ln(bits, ctx)?;
    let den = ctx.exp_gamma(bits).mul(&loglog_n, bits);
    let num = f.sigma_over_n_at(bits, ctx);
    Ok(num.div(&den, bits))
}

/// Checks that `f` is supported exactly on the first m consecutive
/// primes and returns m.
fn canonical_support(f: &Factorization) -> Result<usize> {
    let m = f.num_primes();
    if m == 0 {
        return Err(Error::Domain("ε requires canonical support (n = 1 given)"));
    }
    let expected = first_primes(m);
    for (have, want) in f.primes().zip(expected) {
        if have != want {
            return Err(Error::Domain("ε requires canonical support"));
        }
    }
    Ok(m)
}

/// Exponent excess ε_m(n) = (Σ α_k ln p_k)/(Σ ln p_k) − 1 for n supported
/// on the first m primes. Constant exponent vectors are returned exactly.
pub fn epsilon_m(f: &Factorization, bits: usize, ctx: &mut RealCtx) -> Result<CertifiedReal> {
    canonical_support(f)?;
    Ok(epsilon_of_prefix(f.entries(), bits, ctx))
}

fn epsilon_of_prefix(entries: &[(u64, u32)], bits: usize, ctx: &mut RealCtx) -> CertifiedReal {
    let first = entries[0].1;
    if entries.iter().all(|&(_, a)| a == first) {
        // ratio is exactly the common exponent
        return CertifiedReal::exact_u64(first as u64 - 1);
    }
    let mut num = CertifiedReal::zero();
    let mut den = CertifiedReal::zero();
    for &(q, a) in entries {
        let ln_q = ctx.ln_u64(q, bits);
        num = num.add(&ln_q.mul(&CertifiedReal::exact_u64(a as u64), bits), bits);
        den = den.add(&ln_q, bits);
    }
    num.div(&den, bits).sub(&CertifiedReal::exact_u64(1), bits)
}

/// The full prefix sequence ε₁ … ε_m.
pub fn epsilon_trace(f: &Factorization, bits: usize, ctx: &mut RealCtx) -> Result<EpsilonTrace> {
    let m = canonical_support(f)?;
    let mut values = Vec::with_capacity(m);
    for s in 1..=m {
        values.push(epsilon_of_prefix(&f.entries()[..s], bits, ctx));
    }
    Ok(EpsilonTrace { values })
}

/// ε of the factorization with every exponent raised by `t`; the shift
/// identity guarantees this equals ε_m(n) + t.
pub fn epsilon_shift(
    f: &Factorization,
    t: u32,
    bits: usize,
    ctx: &mut RealCtx,
) -> Result<CertifiedReal> {
    if t == 0 {
        return Err(Error::InvalidArgument("shift step t must be positive"));
    }
    canonical_support(f)?;
    let shifted: Vec<(u64, u32)> = f
        .entries()
        .iter()
        .map(|&(q, a)| {
            a.checked_add(t)
                .map(|a2| (q, a2))
                .ok_or(Error::Overflow("shifted exponent exceeds the exponent bound"))
        })
        .collect::<Result<_>>()?;
    let shifted = Factorization::new(shifted)?;
    epsilon_m(&shifted, bits, ctx)
}

/// R(x) = e^γ·log log ∏ p^(αx) − ∏ (p − (p^(−α))^x)/(p − 1) for x ∈ [1, 2].
///
/// R(1) coincides with l(n); R(2) with l(n²). Integer x keeps the
/// product on the exact rational path.
pub fn robin_scaled(
    f: &Factorization,
    x: f64,
    tolerance: f64,
    policy: &EscalationPolicy,
    ctx: &mut RealCtx,
) -> Result<CertifiedReal> {
    if !(1.0..=2.0).contains(&x) {
        return Err(Error::InvalidArgument("scale x must lie in [1, 2]"));
    }
    canonical_support(f)?;
    if x == 1.0 || x == 2.0 {
        let k = x as u32;
        let scaled: Vec<(u64, u32)> = f
            .entries()
            .iter()
            .map(|&(q, a)| {
                a.checked_mul(k)
                    .map(|a2| (q, a2))
                    .ok_or(Error::Overflow("scaled exponent exceeds the exponent bound"))
            })
            .collect::<Result<_>>()?;
        return little_l(&Factorization::new(scaled)?, tolerance, policy, ctx);
    }
    let mut bits = start_bits(f, tolerance, policy);
    let mut value = robin_scaled_at(f, x, bits, ctx)?;
    for _ in 0..policy.max_escalations {
        if value.width_below(tolerance) {
            break;
        }
        bits *= 2;
        value = robin_scaled_at(f, x, bits, ctx)?;
    }
    Ok(value)
}

fn robin_scaled_at(
    f: &Factorization,
    x: f64,
    bits: usize,
    ctx: &mut RealCtx,
) -> Result<CertifiedReal> {
    let xv = CertifiedReal::exact_f64(x);
    // log log ∏ p^(αx) = ln(x · Σ α ln p)
    let log_n = f.log_n(bits, ctx);
    let loglog = xv.mul(&log_n, bits).ln(bits, ctx)?;
    let lhs = ctx.exp_gamma(bits).mul(&loglog, bits);
    let mut product = CertifiedReal::exact_u64(1);
    for &(q, a) in f.entries() {
        let exponent = xv
            .mul(&CertifiedReal::exact_i64(-(a as i64)), bits)
            .mul(&ctx.ln_u64(q, bits), bits);
        let q_pow = exponent.exp(bits, ctx);
        let num = CertifiedReal::exact_u64(q).sub(&q_pow, bits);
        let den = CertifiedReal::exact_u64(q - 1);
        product = product.mul(&num.div(&den, bits), bits);
    }
    Ok(lhs.sub(&product, bits))
}

/// Certifies the effect of replacing the k-th prime (0-based) by
/// `replacement` on f(q₁, …, q_m) = e^γ log log ∏q^α − ∏(q − q^(−α))/(q−1):
/// the value must not decrease when the prime moves up.
pub fn f_prime_monotonicity(
    primes: &[u64],
    exponents: &[u32],
    k: usize,
    replacement: u64,
    policy: &EscalationPolicy,
    ctx: &mut RealCtx,
) -> Result<core::cmp::Ordering> {
    if primes.len() != exponents.len() {
        return Err(Error::LengthMismatch);
    }
    if k >= primes.len() {
        return Err(Error::InvalidArgument("replacement index out of range"));
    }
    if replacement == primes[k] {
        return Ok(core::cmp::Ordering::Equal);
    }
    if replacement < primes[k] {
        return Err(Error::InvalidArgument("replacement must move the prime up"));
    }
    let original = zip_factorization(primes, exponents)?;
    let mut swapped: Vec<u64> = primes.to_vec();
    swapped[k] = replacement;
    if swapped.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "replacement breaks the strictly ascending prime list",
        ));
    }
    let modified = zip_factorization(&swapped, exponents)?;

    let mut bits = policy.start_bits;
    for _ in 0..=policy.max_escalations {
        let f_orig = little_l_at(&original, bits, ctx)?;
        let f_new = little_l_at(&modified, bits, ctx)?;
        if let Some(ord) = f_new.cmp_certified(&f_orig) {
            return Ok(ord);
        }
        bits *= 2;
    }
    Err(Error::Indeterminate)
}

fn zip_factorization(primes: &[u64], exponents: &[u32]) -> Result<Factorization> {
    Factorization::new(primes.iter().copied().zip(exponents.iter().copied()).collect())
}

/// Assembles the full per-n record.
pub fn robin_report(
    f: &Factorization,
    tolerance: f64,
    policy: &EscalationPolicy,
    ctx: &mut RealCtx,
) -> Result<RobinReport> {
    reject_below_three(f)?;
    let bits = start_bits(f, tolerance, policy);
    let log_n = f.log_n(bits, ctx);
    let loglog_n = log_n.ln(bits, ctx)?;
    let sigma_over_n = f.sigma_over_n_at(bits, ctx);
    let little_l = little_l(f, tolerance, policy, ctx)?;
    let d_sign = d_sign(f, policy, ctx)?;
    let epsilon_m = match canonical_support(f) {
        Ok(_) => Some(epsilon_of_prefix(f.entries(), bits, ctx)),
        Err(_) => None,
    };
    Ok(RobinReport {
        factorization: f.clone(),
        log_n,
        loglog_n,
        sigma_over_n,
        little_l,
        d_sign,
        epsilon_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::parse_factorization;
    use astro_float::{BigFloat, Radix, RoundingMode};

    fn fac(s: &str) -> Factorization {
        parse_factorization(s).unwrap()
    }

    fn ctx() -> RealCtx {
        RealCtx::new()
    }

    /// Reference enclosure from a truncated decimal literal plus an upper
    /// pad for the dropped digits.
    fn dec(s: &str, pad: &str, bits: usize, ctx: &mut RealCtx) -> CertifiedReal {
        let lo = BigFloat::parse(s, Radix::Dec, bits, RoundingMode::Down, ctx.consts());
        let hi = BigFloat::parse(s, Radix::Dec, bits, RoundingMode::Up, ctx.consts());
        let pad = BigFloat::parse(pad, Radix::Dec, bits, RoundingMode::Up, ctx.consts());
        CertifiedReal::from_endpoints(lo, hi.add(&pad, bits, RoundingMode::Up))
    }

    #[test]
    fn little_l_fixture_5040() {
        let mut c = ctx();
        let policy = EscalationPolicy::default();
        let l = little_l(&fac("2^4*3^2*5*7"), 1e-30, &policy, &mut c).unwrap();
        assert_eq!(l.sign(), CertifiedSign::Negative);
        // independently computed: l(5040) = −0.02121795006672661336498895494443869789…
        let reference = dec(
            "-0.02121795006672661336498895494443869789",
            "1e-37",
            192,
            &mut c,
        );
        assert!(l.overlaps(&reference), "l(5040) enclosure drifted: {l:?}");
        assert!(l.width_f64() <= 1e-30);
    }

    #[test]
    fn little_l_fixture_5041() {
        let mut c = ctx();
        let policy = EscalationPolicy::default();
        let l = little_l(&fac("71^2"), 1e-30, &policy, &mut c).unwrap();
        assert_eq!(l.sign(), CertifiedSign::Positive);
        // l(5041) = 2.80263585533460164178225787787963542139…
        let reference = dec(
            "2.80263585533460164178225787787963542139",
            "1e-37",
            192,
            &mut c,
        );
        assert!(l.overlaps(&reference));
    }

    #[test]
    fn little_l_small_domain_boundary() {
        let mut c = ctx();
        let policy = EscalationPolicy::default();
        // n = 3: log log 3 ≈ 0.0940 > 0 but l < 0
        let l = little_l(&fac("3"), 1e-25, &policy, &mut c).unwrap();
        assert_eq!(l.sign(), CertifiedSign::Negative);
        // l(3) = −1.16582734159333389761226417583454867262…
        let reference = dec(
            "-1.16582734159333389761226417583454867263",
            "1e-37",
            192,
            &mut c,
        );
        assert!(l.overlaps(&reference));

        assert!(matches!(
            little_l(&Factorization::one(), 1e-10, &policy, &mut c),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            little_l(&fac("2"), 1e-10, &policy, &mut c),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn d_sign_fixtures() {
        let mut c = ctx();
        let policy = EscalationPolicy::default();
        assert_eq!(
            d_sign(&fac("2^4*3^2*5*7"), &policy, &mut c).unwrap(),
            CertifiedSign::Negative
        );
        assert_eq!(
            d_sign(&fac("71^2"), &policy, &mut c).unwrap(),
            CertifiedSign::Positive
        );
        // primorial(10): n = 6469693230
        let primorial10 = fac("2*3*5*7*11*13*17*19*23*29");
        assert_eq!(
            d_sign(&primorial10, &policy, &mut c).unwrap(),
            CertifiedSign::Positive
        );
    }

    #[test]
    fn wojtowicz_duality() {
        let mut c = ctx();
        let policy = EscalationPolicy::default();
        let one = CertifiedReal::exact_u64(1);

        let k5040 = wojtowicz_k(&fac("2^4*3^2*5*7"), 1e-25, &policy, &mut c).unwrap();
        assert_eq!(
            k5040.cmp_certified(&one),
            Some(core::cmp::Ordering::Greater)
        );
        let k5041 = wojtowicz_k(&fac("71^2"), 1e-25, &policy, &mut c).unwrap();
        assert_eq!(k5041.cmp_certified(&one), Some(core::cmp::Ordering::Less));

        // sign(1 − k(n)) must match d_sign on assorted inputs
        for text in ["3", "2^2", "2*3*5", "2^6*3^4*5^2", "97^3", "2^4*3^2*5*7"] {
            let f = fac(text);
            let k = wojtowicz_k(&f, 1e-25, &policy, &mut c).unwrap();
            let lhs = one.sub(&k, 192).sign();
            let rhs = d_sign(&f, &policy, &mut c).unwrap();
            assert_eq!(lhs, rhs, "duality broken for {text}");
        }
    }

    #[test]
    fn epsilon_primorial_is_exact_zero() {
        let mut c = ctx();
        let f = fac("2*3*5*7*11");
        let eps = epsilon_m(&f, 128, &mut c).unwrap();
        assert!(eps.lo().is_zero() && eps.hi().is_zero());
    }

    #[test]
    fn epsilon_constant_exponents_exact() {
        let mut c = ctx();
        let f = fac("2^4*3^4*5^4");
        let eps = epsilon_m(&f, 128, &mut c).unwrap();
        assert_eq!(eps.lo(), eps.hi());
        assert!(eps.contains(&BigFloat::from_u64(3, 64)));
    }

    #[test]
    fn epsilon_mixed_fixture() {
        let mut c = ctx();
        // (3ln2 + 2ln3 + ln5)/ln30 − 1 = 0.73059760165216685524423805277515289189…
        let f = fac("2^3*3^2*5");
        let eps = epsilon_m(&f, 192, &mut c).unwrap();
        let reference = dec(
            "0.73059760165216685524423805277515289189",
            "1e-37",
            192,
            &mut c,
        );
        assert!(eps.overlaps(&reference));
    }

    #[test]
    fn epsilon_requires_canonical_support() {
        let mut c = ctx();
        assert!(matches!(
            epsilon_m(&fac("3*5"), 128, &mut c),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            epsilon_m(&fac("2*3*7"), 128, &mut c),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            epsilon_m(&Factorization::one(), 128, &mut c),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn epsilon_trace_factorial_tower_m3() {
        let mut c = ctx();
        // exponents (3!, 2!, 1!) = (6, 2, 1)
        let f = fac("2^6*3^2*5");
        let tr = epsilon_trace(&f, 192, &mut c).unwrap();
        assert_eq!(tr.values.len(), 3);
        // ε₁ = 6/1 − 1 = 5 exactly
        assert!(tr.values[0].contains(&BigFloat::from_u64(5, 64)));
        // ε₂ = (6ln2 + 2ln3)/ln6 − 1 = 2.54741122893816634748098455387128350586…
        let e2 = dec(
            "2.54741122893816634748098455387128350586",
            "1e-37",
            192,
            &mut c,
        );
        assert!(tr.values[1].overlaps(&e2), "ε₂ drifted: {:?}", tr.values[1]);
        // ε₃ = (6ln2 + 2ln3 + ln5)/ln30 − 1 = 1.34198274292368542534247230038497024108…
        let e3 = dec(
            "1.34198274292368542534247230038497024108",
            "1e-37",
            192,
            &mut c,
        );
        assert!(tr.values[2].overlaps(&e3), "ε₃ drifted: {:?}", tr.values[2]);
        // strictly decreasing
        for w in tr.values.windows(2) {
            assert_eq!(
                w[1].cmp_certified(&w[0]),
                Some(core::cmp::Ordering::Less),
                "trace not strictly decreasing"
            );
        }
    }

    #[test]
    fn epsilon_shift_identity() {
        let mut c = ctx();
        // primorial, t = 1 → exactly 1
        let prim = fac("2*3*5*7");
        let shifted = epsilon_shift(&prim, 1, 128, &mut c).unwrap();
        assert!(shifted.contains(&BigFloat::from_u64(1, 64)));

        // mixed exponents: ε(n_t) = ε(n) + t within enclosure width
        let f = fac("2^3*3^2*5");
        let base = epsilon_m(&f, 192, &mut c).unwrap();
        for t in 1..=5u32 {
            let lhs = epsilon_shift(&f, t, 192, &mut c).unwrap();
            let rhs = base.add(&CertifiedReal::exact_u64(t as u64), 192);
            assert!(lhs.overlaps(&rhs), "shift identity failed at t = {t}");
        }
        assert!(epsilon_shift(&f, 0, 192, &mut c).is_err());
    }

    #[test]
    fn robin_scaled_endpoints() {
        let mut c = ctx();
        let policy = EscalationPolicy::default();
        let f = fac("2^2*3*5");
        // x = 1 coincides with little_l
        let r1 = robin_scaled(&f, 1.0, 1e-25, &policy, &mut c).unwrap();
        let l = little_l(&f, 1e-25, &policy, &mut c).unwrap();
        assert!(r1.overlaps(&l));
        // x = 2 equals little_l of the squared form
        let r2 = robin_scaled(&f, 2.0, 1e-25, &policy, &mut c).unwrap();
        let l2 = little_l(&fac("2^4*3^2*5^2"), 1e-25, &policy, &mut c).unwrap();
        assert!(r2.overlaps(&l2));
        // fractional x stays consistent with the interval path at x = 1
        let r1b = robin_scaled_at(&f, 1.0, 192, &mut c).unwrap();
        assert!(r1b.overlaps(&l));

        assert!(robin_scaled(&f, 0.5, 1e-10, &policy, &mut c).is_err());
        assert!(robin_scaled(&fac("3*5"), 1.5, 1e-10, &policy, &mut c).is_err());
    }

    #[test]
    fn prime_replacement_increases_f() {
        let mut c = ctx();
        let policy = EscalationPolicy::default();
        // (2,3) → (2,5) with α = (1,1)
        let ord = f_prime_monotonicity(&[2, 3], &[1, 1], 1, 5, &policy, &mut c).unwrap();
        assert_eq!(ord, core::cmp::Ordering::Greater);
        // (2,3,5) → (2,3,7) with α = (2,1,1)
        let ord = f_prime_monotonicity(&[2, 3, 5], &[2, 1, 1], 2, 7, &policy, &mut c).unwrap();
        assert_eq!(ord, core::cmp::Ordering::Greater);
        // identity replacement
        let ord = f_prime_monotonicity(&[2, 3], &[1, 1], 1, 3, &policy, &mut c).unwrap();
        assert_eq!(ord, core::cmp::Ordering::Equal);
        // broken ordering
        assert!(f_prime_monotonicity(&[2, 3, 5], &[1, 1, 1], 0, 3, &policy, &mut c).is_err());
        assert!(f_prime_monotonicity(&[2, 3], &[1, 1], 0, 1, &policy, &mut c).is_err());
    }

    #[test]
    fn report_assembles_consistent_fields() {
        let mut c = ctx();
        let policy = EscalationPolicy::default();
        let r = robin_report(&fac("2^4*3^2*5*7"), 1e-20, &policy, &mut c).unwrap();
        assert_eq!(r.d_sign, CertifiedSign::Negative);
        assert_eq!(r.little_l.sign(), CertifiedSign::Negative);
        assert!(r.epsilon_m.is_some(), "5040 has canonical support");
        // l = e^γ·loglog − σ/n, re-derived from the report's own fields
        let recomposed = c
            .exp_gamma(192)
            .mul(&r.loglog_n, 192)
            .sub(&r.sigma_over_n, 192);
        assert!(recomposed.overlaps(&r.little_l));

        let r2 = robin_report(&fac("71^2"), 1e-20, &policy, &mut c).unwrap();
        assert!(r2.epsilon_m.is_none());
    }
}
