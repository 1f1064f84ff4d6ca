//! Candidate families: primorials, descending-exponent numbers, the
//! factorial tower, and colossally abundant numbers generated from the
//! classical Alaoglu–Erdős exponent rule, plus a brute-force
//! superabundant oracle used to validate the CA construction.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::factor::{sigma_sieve, Factorization};
use crate::interval::{CertifiedReal, EscalationPolicy, RealCtx};
use crate::primes::{first_primes, PrimeTable};

/// ∏ of the first m primes (all exponents one).
pub fn primorial(m: usize) -> Result<Factorization> {
    if m == 0 {
        return Err(Error::InvalidArgument("primorial requires m >= 1"));
    }
    let primes = first_primes(m);
    Factorization::new(primes.into_iter().map(|p| (p, 1)).collect())
}

/// ∏ p_k^(β_k) for a nonincreasing positive exponent list.
pub fn descending_number(beta: &[u32]) -> Result<Factorization> {
    if beta.is_empty() {
        return Err(Error::InvalidArgument("exponent list must be nonempty"));
    }
    if beta.iter().any(|&b| b == 0) {
        return Err(Error::InvalidArgument("exponents must be positive"));
    }
    if beta.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument("exponents must be nonincreasing"));
    }
    let primes = first_primes(beta.len());
    Factorization::new(primes.into_iter().zip(beta.iter().copied()).collect())
}

/// Largest m for which (m)! still fits the u32 exponent bound.
pub const FACTORIAL_TOWER_MAX_M: usize = 12;

/// ∏ p_k^((m−k+1)!) with materialized exponents; m ≤ 12. Larger towers
/// are available in log-domain form via [`factorial_tower_log`].
pub fn factorial_tower(m: usize) -> Result<Factorization> {
    if m == 0 {
        return Err(Error::InvalidArgument("factorial tower requires m >= 1"));
    }
    if m > FACTORIAL_TOWER_MAX_M {
        return Err(Error::Overflow("tower exponent (m)! exceeds the exponent bound"));
    }
    let primes = first_primes(m);
    let entries = primes
        .into_iter()
        .enumerate()
        .map(|(i, p)| (p, factorial_u32(m - i)))
        .collect();
    Factorization::new(entries)
}

fn factorial_u32(k: usize) -> u32 {
    (2..=k as u32).product::<u32>().max(1)
}

/// A number on the first m primes whose exponents may exceed any machine
/// word; only log-scale quantities are evaluated, n is never built.
#[derive(Debug, Clone)]
pub struct LogScaleNumber {
    entries: Vec<(u64, BigUint)>,
}

impl LogScaleNumber {
    pub fn entries(&self) -> &[(u64, BigUint)] {
        &self.entries
    }

    /// ln n = Σ α_k ln p_k with exact big-integer coefficients.
    pub fn log_n(&self, bits: usize, ctx: &mut RealCtx) -> CertifiedReal {
        let mut acc = CertifiedReal::zero();
        for (q, a) in &self.entries {
            let coeff = CertifiedReal::exact_biguint(a);
            acc = acc.add(&ctx.ln_u64(*q, bits).mul(&coeff, bits), bits);
        }
        acc
    }

    /// ε_m(n) = (Σ α_k ln p_k)/(Σ ln p_k) − 1.
    pub fn epsilon(&self, bits: usize, ctx: &mut RealCtx) -> CertifiedReal {
        let mut num = CertifiedReal::zero();
        let mut den = CertifiedReal::zero();
        for (q, a) in &self.entries {
            let ln_q = ctx.ln_u64(*q, bits);
            num = num.add(&ln_q.mul(&CertifiedReal::exact_biguint(a), bits), bits);
            den = den.add(&ln_q, bits);
        }
        num.div(&den, bits).sub(&CertifiedReal::exact_u64(1), bits)
    }
}

/// The factorial tower in log-domain form, valid for any m.
pub fn factorial_tower_log(m: usize) -> Result<LogScaleNumber> {
    if m == 0 {
        return Err(Error::InvalidArgument("factorial tower requires m >= 1"));
    }
    let primes = first_primes(m);
    let mut fact = BigUint::one();
    let mut exps: Vec<BigUint> = Vec::with_capacity(m);
    for k in 1..=m {
        fact *= BigUint::from(k);
        exps.push(fact.clone());
    }
    exps.reverse();
    Ok(LogScaleNumber {
        entries: primes.into_iter().zip(exps).collect(),
    })
}

/// Exponent of `p` in the colossally abundant number for parameter ε:
/// ⌊log_p((p^(1+ε) − 1)/(p^ε − 1))⌋ − 1, certified by interval floor with
/// precision escalation. Rational ε never hits a step boundary, so the
/// escalation terminates in practice; a residual straddle is an error.
fn ca_exponent(p: u64, epsilon: f64, policy: &EscalationPolicy, ctx: &mut RealCtx) -> Result<u32> {
    let mut bits = policy.start_bits;
    for _ in 0..=policy.max_escalations {
        let ln_p = ctx.ln_u64(p, bits);
        let eps = CertifiedReal::exact_f64(epsilon);
        let p_eps = eps.mul(&ln_p, bits).exp(bits, ctx);
        let p_one_eps = eps
            .add(&CertifiedReal::exact_u64(1), bits)
            .mul(&ln_p, bits)
            .exp(bits, ctx);
        let one = CertifiedReal::exact_u64(1);
        let ratio = p_one_eps.sub(&one, bits).div(&p_eps.sub(&one, bits), bits);
        let log_p_ratio = ratio.ln(bits, ctx)?.div(&ln_p, bits);
        let lo = crate::interval::bigfloat_to_f64_down(log_p_ratio.lo()).floor();
        let hi = crate::interval::bigfloat_to_f64_up(log_p_ratio.hi()).floor();
        if lo == hi && lo >= 1.0 {
            return Ok(lo as u32 - 1);
        }
        if hi < 1.0 {
            // certified below 1 before flooring can matter
            return Ok(0);
        }
        bits *= 2;
    }
    Err(Error::Indeterminate)
}

/// The colossally abundant number for parameter ε > 0.
///
/// Exponents follow the classical rule; they are nonincreasing in p, so
/// generation stops at the first prime receiving exponent zero. For
/// ε ≥ log₂3 − 1 every exponent is zero and the result is n = 1.
pub fn ca_number(epsilon: f64) -> Result<Factorization> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidArgument("ε must be a positive real"));
    }
    let policy = EscalationPolicy::default();
    let mut ctx = RealCtx::new();
    // a_p ≥ 1 needs ε·ln p ≤ ln(1 + 1/p); primes beyond ~(1/ε)·guard are out.
    let mut limit = (4.0 / epsilon).max(16.0).min(1e9) as u64;
    let mut entries: Vec<(u64, u32)> = Vec::new();
    'outer: loop {
        let table = PrimeTable::sieve(limit)?;
        entries.clear();
        for &p in table.primes() {
            let a = ca_exponent(p, epsilon, &policy, &mut ctx)?;
            if a == 0 {
                break 'outer;
            }
            entries.push((p, a));
        }
        // table exhausted before the exponents hit zero
        limit = limit.saturating_mul(4);
    }
    Factorization::new(entries)
}

/// One critical value of the CA sweep: at ε(p, k) the exponent of p
/// steps from k−1 to k.
#[derive(Debug, Clone)]
struct Critical {
    prime: u64,
    exponent: u32,
}

impl Critical {
    /// ε(p, k) = ln((p^(k+1) − 1)/(p^k − 1))/ln p − 1 as an enclosure.
    fn value(&self, bits: usize, ctx: &mut RealCtx) -> CertifiedReal {
        let p = BigUint::from(self.prime);
        let num = p.pow(self.exponent + 1) - 1u32;
        let den = p.pow(self.exponent) - 1u32;
        let ratio = CertifiedReal::from_ratio(&num, &den, bits);
        let ln_ratio = ratio.ln(bits, ctx).expect("ratio > 1");
        let ln_p = ctx.ln_u64(self.prime, bits);
        ln_ratio
            .div(&ln_p, bits)
            .sub(&CertifiedReal::exact_u64(1), bits)
    }
}

/// First `count` colossally abundant numbers in increasing order,
/// generated by sweeping ε downward through its critical values.
///
/// Two criticals that resist separation at maximal precision are treated
/// as a tie: both steps are taken at once, yielding one chain element.
pub fn ca_chain(count: usize) -> Result<Vec<Factorization>> {
    if count == 0 {
        return Err(Error::InvalidArgument("chain length must be at least 1"));
    }
    let policy = EscalationPolicy::default();
    let mut ctx = RealCtx::new();

    // Every critical needed is ≥ ε(p_count, 1), since the first-entry
    // criticals of the first `count` primes are that many already.
    let primes = first_primes(count);
    let cutoff_seed = Critical {
        prime: *primes.last().expect("count >= 1"),
        exponent: 1,
    };
    let cutoff = cutoff_seed.value(policy.start_bits, &mut ctx);

    let mut candidates: Vec<(Critical, CertifiedReal)> = Vec::new();
    for &p in &primes {
        for k in 1u32.. {
            let c = Critical { prime: p, exponent: k };
            let v = c.value(policy.start_bits, &mut ctx);
            let below_cutoff = v.cmp_certified(&cutoff) == Some(core::cmp::Ordering::Less);
            candidates.push((c, v));
            if below_cutoff {
                break;
            }
        }
    }

    // Descending sort by midpoint, then certify adjacent separations.
    candidates.sort_by(|a, b| {
        b.1.approx_f64()
            .partial_cmp(&a.1.approx_f64())
            .expect("finite critical values")
    });

    let mut chain: Vec<Factorization> = Vec::with_capacity(count);
    let mut exponents: BTreeMap<u64, u32> = BTreeMap::new();
    let mut i = 0usize;
    while chain.len() < count && i < candidates.len() {
        // group ties: step while the next candidate cannot be separated
        let mut group = vec![&candidates[i].0];
        let mut j = i + 1;
        while j < candidates.len() {
            if separated(&candidates[i].0, &candidates[j].0, &policy, &mut ctx)? {
                break;
            }
            group.push(&candidates[j].0);
            j += 1;
        }
        for c in group {
            let slot = exponents.entry(c.prime).or_insert(0);
            *slot = (*slot).max(c.exponent);
        }
        chain.push(Factorization::new(
            exponents.iter().map(|(&p, &a)| (p, a)).collect(),
        )?);
        i = j;
    }
    if chain.len() < count {
        return Err(Error::InvalidArgument("candidate pool exhausted before count"));
    }
    Ok(chain)
}

/// Certifies that two criticals have strictly different values,
/// escalating precision; `false` means they are treated as simultaneous.
fn separated(
    a: &Critical,
    b: &Critical,
    policy: &EscalationPolicy,
    ctx: &mut RealCtx,
) -> Result<bool> {
    if a.prime == b.prime && a.exponent == b.exponent {
        return Ok(false);
    }
    let mut bits = policy.start_bits;
    for _ in 0..=policy.max_escalations {
        let va = a.value(bits, ctx);
        let vb = b.value(bits, ctx);
        if va.cmp_certified(&vb).is_some() {
            return Ok(true);
        }
        bits *= 2;
    }
    Ok(false)
}

/// All n ≤ limit whose abundancy σ(n)/n strictly exceeds that of every
/// smaller integer, by exact cross-multiplied comparison over the σ sieve.
pub fn superabundant_oracle(limit: u64) -> Result<Vec<u64>> {
    if limit < 1 {
        return Err(Error::InvalidArgument("limit must be at least 1"));
    }
    if limit > 10_000_000 {
        return Err(Error::MemoryBudget);
    }
    let sigma = sigma_sieve(limit)?;
    let mut out = Vec::new();
    let mut best: (u64, u64) = (0, 1); // σ/n record as a fraction
    for n in 1..=limit {
        let s = sigma[n as usize];
        if (s as u128) * (best.1 as u128) > (best.0 as u128) * (n as u128) {
            best = (s, n);
            out.push(n);
        }
    }
    Ok(out)
}
