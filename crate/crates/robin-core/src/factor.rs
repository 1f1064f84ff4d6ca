//! Exact factorization arithmetic: n, σ(n), σ(n)/n, log n — all computed
//! from the factorization, never requiring n to fit in machine words.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::interval::{CertifiedReal, RealCtx};
use crate::primes::{is_prime, PrimeTable};

/// Largest exponent a factorization entry may carry.
pub const MAX_EXPONENT: u32 = u32::MAX;

/// Default trial-division budget for [`factorize`].
pub const FACTOR_BUDGET: u64 = 1_000_000_000_000;

/// Exponent/prime bounds under which products are evaluated in exact
/// rationals before being converted to enclosures.
const RATIONAL_PATH_MAX_EXPONENT: u32 = 64;
const RATIONAL_PATH_MAX_PRIME: u64 = 1_000_000;

/// A multiset of (prime, exponent) pairs with strictly ascending primes.
/// The empty list represents n = 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    entries: Vec<(u64, u32)>,
}

impl Factorization {
    /// Validates primality, strict ascent, and nonzero exponents.
    pub fn new(entries: Vec<(u64, u32)>) -> Result<Self> {
        for &(q, a) in &entries {
            if a == 0 {
                return Err(Error::ZeroExponent(q));
            }
            if !is_prime(q) {
                return Err(Error::NonPrimeBase(q));
            }
        }
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicatePrime(w[0].0));
            }
            if w[0].0 > w[1].0 {
                return Err(Error::InvalidArgument("primes must ascend"));
            }
        }
        Ok(Factorization { entries })
    }

    /// The factorization of 1 (empty product).
    pub fn one() -> Self {
        Factorization { entries: Vec::new() }
    }

    pub fn entries(&self) -> &[(u64, u32)] {
        &self.entries
    }

    pub fn num_primes(&self) -> usize {
        self.entries.len()
    }

    pub fn is_one(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(|&(q, _)| q)
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().map(|&(_, a)| a)
    }

    /// Exact n = ∏ qᵏ.
    pub fn value(&self) -> BigUint {
        self.entries
            .iter()
            .fold(BigUint::one(), |acc, &(q, a)| acc * BigUint::from(q).pow(a))
    }

    /// Exact σ(n) = ∏ (q^(a+1) − 1)/(q − 1).
    pub fn sigma(&self) -> BigUint {
        self.entries.iter().fold(BigUint::one(), |acc, &(q, a)| {
            let q = BigUint::from(q);
            let num = q.pow(a + 1) - 1u32;
            let den = q - 1u32;
            acc * (num / den)
        })
    }

    /// Enclosure of the abundancy σ(n)/n with width at most `tolerance`.
    ///
    /// Small factorizations go through the exact rational
    /// ∏ (q^(a+1) − 1) / ∏ q^a(q − 1); entries with huge exponents or
    /// primes fall back to interval evaluation of (q − q^(−a))/(q − 1).
    pub fn sigma_over_n(&self, tolerance: f64, ctx: &mut RealCtx) -> CertifiedReal {
        if self.is_one() {
            return CertifiedReal::exact_u64(1);
        }
        let bits = bits_for(self.abundancy_log2_bound(), tolerance);
        self.sigma_over_n_at(bits, ctx)
    }

    /// Abundancy enclosure at an explicit working precision.
    pub fn sigma_over_n_at(&self, bits: usize, ctx: &mut RealCtx) -> CertifiedReal {
        let mut acc = CertifiedReal::exact_u64(1);
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for &(q, a) in &self.entries {
            if a <= RATIONAL_PATH_MAX_EXPONENT && q <= RATIONAL_PATH_MAX_PRIME {
                let qb = BigUint::from(q);
                num *= qb.pow(a + 1) - 1u32;
                den *= qb.pow(a) * (q - 1);
            } else {
                acc = acc.mul(&abundancy_factor(q, a, bits, ctx), bits);
            }
        }
        if !num.is_one() || !den.is_one() {
            acc = acc.mul(&CertifiedReal::from_ratio(&num, &den, bits), bits);
        }
        acc
    }

    /// Enclosure of ln n = Σ a·ln q. Exactly zero for n = 1 (the
    /// degenerate empty product).
    pub fn log_n(&self, bits: usize, ctx: &mut RealCtx) -> CertifiedReal {
        let mut acc = CertifiedReal::zero();
        for &(q, a) in &self.entries {
            let term = ctx.ln_u64(q, bits).mul(&CertifiedReal::exact_u64(a as u64), bits);
            acc = acc.add(&term, bits);
        }
        acc
    }

    /// Crude upper bound on log₂ of σ(n)/n, for precision sizing.
    fn abundancy_log2_bound(&self) -> i64 {
        // σ(n)/n < ∏ q/(q−1) ≤ 2^m
        self.entries.len() as i64 + 1
    }

    /// Renders in the factorization grammar, e.g. `2^4*3^2*5*7`; `1` for
    /// the empty product.
    pub fn to_grammar_string(&self) -> alloc::string::String {
        use core::fmt::Write;
        if self.entries.is_empty() {
            return "1".to_string();
        }
        let mut s = alloc::string::String::new();
        for (i, &(q, a)) in self.entries.iter().enumerate() {
            if i > 0 {
                s.push('*');
            }
            if a == 1 {
                let _ = write!(s, "{q}");
            } else {
                let _ = write!(s, "{q}^{a}");
            }
        }
        s
    }
}

impl core::fmt::Display for Factorization {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.to_grammar_string())
    }
}

/// Interval (q − q^(−a))/(q − 1) for entries outside the rational path.
fn abundancy_factor(q: u64, a: u32, bits: usize, ctx: &mut RealCtx) -> CertifiedReal {
    let qv = CertifiedReal::exact_u64(q);
    let neg_a_ln_q = ctx
        .ln_u64(q, bits)
        .mul(&CertifiedReal::exact_i64(-(a as i64)), bits);
    let q_pow_neg_a = neg_a_ln_q.exp(bits, ctx);
    let num = qv.sub(&q_pow_neg_a, bits);
    let den = CertifiedReal::exact_u64(q - 1);
    num.div(&den, bits)
}

fn bits_for(magnitude_log2: i64, tolerance: f64) -> usize {
    let tol = if tolerance > 0.0 { tolerance } else { 1e-12 };
    let needed = magnitude_log2 as f64 - tol.log2() + 24.0;
    ((needed as usize).next_multiple_of(64)).max(128)
}

/// Parses the grammar `term ("*" term)*` with `term = prime ("^" exponent)?`.
///
/// The empty string (or the literal `1`) denotes the empty product.
/// Entries are sorted ascending; duplicate primes, composite bases, and
/// zero exponents are rejected.
pub fn parse_factorization(text: &str) -> Result<Factorization> {
    let trimmed = text.trim();
    if trimmed.is_empty() || trimmed == "1" {
        return Ok(Factorization::one());
    }
    let mut entries: Vec<(u64, u32)> = Vec::new();
    let mut offset = 0usize;
    for term in trimmed.split('*') {
        let position = offset;
        offset += term.len() + 1;
        let term = term.trim();
        if term.is_empty() {
            return Err(Error::ParseSyntax {
                position,
                message: "empty term".to_string(),
            });
        }
        let (base_text, exp_text) = match term.split_once('^') {
            Some((b, e)) => (b.trim(), Some(e.trim())),
            None => (term.trim(), None),
        };
        let base: u64 = base_text.parse().map_err(|_| Error::ParseSyntax {
            position,
            message: alloc::format!("invalid prime literal `{base_text}`"),
        })?;
        let exponent: u32 = match exp_text {
            None => 1,
            Some(e) => e.parse().map_err(|_| Error::ParseSyntax {
                position,
                message: alloc::format!("invalid exponent literal `{e}`"),
            })?,
        };
        if exponent == 0 {
            return Err(Error::ZeroExponent(base));
        }
        if !is_prime(base) {
            return Err(Error::NonPrimeBase(base));
        }
        entries.push((base, exponent));
    }
    entries.sort_unstable_by_key(|&(q, _)| q);
    for w in entries.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::DuplicatePrime(w[0].0));
        }
    }
    Ok(Factorization { entries })
}

/// Factorizes by trial division against a sieved prime table.
///
/// Values above [`FACTOR_BUDGET`] are rejected outright; callers with
/// larger inputs should supply factorizations directly.
pub fn factorize(n: &BigUint) -> Result<Factorization> {
    let n64 = u64::try_from(n).map_err(|_| Error::TooLargeToFactor)?;
    if n64 > FACTOR_BUDGET {
        return Err(Error::TooLargeToFactor);
    }
    factorize_u64(n64)
}

/// [`factorize`] for machine-word inputs.
pub fn factorize_u64(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factor 0"));
    }
    if n > FACTOR_BUDGET {
        return Err(Error::TooLargeToFactor);
    }
    if n == 1 {
        return Ok(Factorization::one());
    }
    let mut rest = n;
    let mut entries = Vec::new();
    // Any n ≤ 10^12 with no prime factor ≤ 10^6 is itself prime.
    let table = PrimeTable::sieve(1_000_000.min(n.isqrt().max(2)))?;
    for &p in table.primes() {
        if p * p > rest {
            break;
        }
        if rest % p == 0 {
            let mut a = 0u32;
            while rest % p == 0 {
                rest /= p;
                a += 1;
            }
            entries.push((p, a));
        }
    }
    if rest > 1 {
        debug_assert!(is_prime(rest));
        entries.push((rest, 1));
    }
    Ok(Factorization { entries })
}

/// Table of exact σ(n) for 1 ≤ n ≤ limit, by linear sieve over the
/// smallest-prime-factor decomposition. Index 0 is unused.
pub fn sigma_sieve(limit: u64) -> Result<Vec<u64>> {
    if limit < 1 {
        return Err(Error::InvalidArgument("sigma_sieve requires limit >= 1"));
    }
    // Three words per entry while sieving; keep well under the sandbox.
    if limit > 100_000_000 {
        return Err(Error::MemoryBudget);
    }
    let n = limit as usize;
    let mut sigma = vec![0u64; n + 1];
    // spf_pow[i] = p^e for p = spf(i) with multiplicity e;
    // spf_sigma[i] = σ(p^e) for that prime power.
    let mut spf_pow = vec![0u32; n + 1];
    let mut spf_sigma = vec![0u64; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    sigma[1] = 1;
    for i in 2..=n {
        if spf_pow[i] == 0 {
            primes.push(i);
            spf_pow[i] = i as u32;
            spf_sigma[i] = 1 + i as u64;
        }
        sigma[i] = spf_sigma[i] * sigma[i / spf_pow[i] as usize];
        for &p in &primes {
            let j = i * p;
            if j > n {
                break;
            }
            if i % p == 0 {
                spf_pow[j] = spf_pow[i] * p as u32;
                spf_sigma[j] = spf_sigma[i] * p as u64 + 1;
                break;
            }
            spf_pow[j] = p as u32;
            spf_sigma[j] = 1 + p as u64;
        }
    }
    Ok(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Divisor-enumeration oracle, independent of the multiplicative form.
    pub fn sigma_by_enumeration(n: u64) -> u64 {
        let mut s = 0u64;
        let mut d = 1u64;
        while d * d <= n {
            if n % d == 0 {
                s += d;
                if d != n / d {
                    s += n / d;
                }
            }
            d += 1;
        }
        s
    }

    fn fac(text: &str) -> Factorization {
        parse_factorization(text).unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        let f = fac("2^3*3^2*5");
        assert_eq!(f.entries(), &[(2, 3), (3, 2), (5, 1)]);
        assert_eq!(f.to_grammar_string(), "2^3*3^2*5");
        assert_eq!(parse_factorization("").unwrap(), Factorization::one());
        assert_eq!(parse_factorization("1").unwrap(), Factorization::one());
        assert_eq!(Factorization::one().to_grammar_string(), "1");
        // unordered input is normalized
        assert_eq!(fac("5*2^3*3^2"), fac("2^3*3^2*5"));
    }

    #[test]
    fn parse_rejections() {
        assert_eq!(parse_factorization("4^2"), Err(Error::NonPrimeBase(4)));
        assert_eq!(parse_factorization("2*2"), Err(Error::DuplicatePrime(2)));
        assert_eq!(parse_factorization("7^0"), Err(Error::ZeroExponent(7)));
        assert!(matches!(
            parse_factorization("2^"),
            Err(Error::ParseSyntax { .. })
        ));
        assert!(matches!(
            parse_factorization("abc"),
            Err(Error::ParseSyntax { .. })
        ));
        assert!(matches!(
            parse_factorization("2**3"),
            Err(Error::ParseSyntax { .. })
        ));
    }

    #[test]
    fn value_fixtures() {
        assert_eq!(Factorization::one().value(), BigUint::from(1u32));
        assert_eq!(fac("2^2*3").value(), BigUint::from(12u32));
        assert_eq!(fac("2^4*3^2*5*7").value(), BigUint::from(5040u32));
        assert_eq!(fac("2^64").value(), BigUint::from(2u32).pow(64));
    }

    #[test]
    fn sigma_fixtures() {
        assert_eq!(Factorization::one().sigma(), BigUint::from(1u32));
        assert_eq!(fac("7").sigma(), BigUint::from(8u32));
        assert_eq!(fac("2^2*3").sigma(), BigUint::from(28u32));
        assert_eq!(fac("2^4*3^2*5*7").sigma(), BigUint::from(19344u32));
    }

    #[test]
    fn factorize_fixtures() {
        assert_eq!(factorize_u64(12).unwrap(), fac("2^2*3"));
        assert_eq!(factorize_u64(1).unwrap(), Factorization::one());
        assert_eq!(factorize_u64(5040).unwrap(), fac("2^4*3^2*5*7"));
        assert_eq!(factorize_u64(10_544_113).unwrap(), fac("10544113"));
        assert!(factorize_u64(0).is_err());
        assert!(factorize(&BigUint::from(2u64).pow(64)).is_err());
    }

    #[test]
    fn factorize_round_trips_value() {
        for n in (1u64..2_000).chain([999_983, 1_000_000, 123_456_789]) {
            let f = factorize_u64(n).unwrap();
            assert_eq!(f.value(), BigUint::from(n), "value mismatch at {n}");
        }
    }

    #[test]
    fn sigma_matches_enumeration_oracle() {
        for n in 1..=2_000u64 {
            let f = factorize_u64(n).unwrap();
            let got = u64::try_from(f.sigma()).unwrap();
            assert_eq!(got, sigma_by_enumeration(n), "σ mismatch at {n}");
        }
    }

    #[test]
    fn sigma_sieve_fixtures() {
        let table = sigma_sieve(10).unwrap();
        assert_eq!(&table[1..], &[1, 3, 4, 7, 6, 12, 8, 15, 13, 18]);
        let table = sigma_sieve(6000).unwrap();
        assert_eq!(table[1], 1);
        assert_eq!(table[5040], 19344);
        for n in 1..=6000u64 {
            assert_eq!(table[n as usize], sigma_by_enumeration(n), "sieve mismatch at {n}");
        }
    }

    #[test]
    fn sigma_is_multiplicative_on_coprime_parts() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x517e5e);
        let table = PrimeTable::sieve(1000).unwrap();
        for _ in 0..2_000 {
            let k = rng.gen_range(1..=3usize);
            let mut left: Vec<(u64, u32)> = Vec::new();
            let mut right: Vec<(u64, u32)> = Vec::new();
            let mut used = alloc::collections::BTreeSet::new();
            for _ in 0..(2 * k) {
                let p = table.primes()[rng.gen_range(0..table.len())];
                if !used.insert(p) {
                    continue;
                }
                let a = rng.gen_range(1..=5u32);
                if rng.gen_bool(0.5) {
                    left.push((p, a));
                } else {
                    right.push((p, a));
                }
            }
            left.sort_unstable();
            right.sort_unstable();
            let f = Factorization::new(left.clone()).unwrap();
            let g = Factorization::new(right.clone()).unwrap();
            let mut merged = left;
            merged.extend(right);
            merged.sort_unstable();
            let fg = Factorization::new(merged).unwrap();
            assert_eq!(fg.sigma(), f.sigma() * g.sigma());
        }
    }

    #[test]
    fn sigma_over_n_encloses_exact_rational() {
        let mut ctx = RealCtx::new();
        let one = Factorization::one().sigma_over_n(1e-20, &mut ctx);
        assert_eq!(one.lo(), one.hi());
        assert!(one.contains(&astro_float::BigFloat::from_u64(1, 64)));

        let half = fac("2").sigma_over_n(1e-20, &mut ctx);
        assert!(half.contains(&astro_float::BigFloat::from_f64(1.5, 64)));

        let f = fac("2^4*3^2*5*7");
        let enc = f.sigma_over_n(1e-30, &mut ctx);
        assert!(enc.width_f64() < 1e-30);
        // 19344/5040 = 3.8380952...
        let exact = CertifiedReal::from_ratio(
            &BigUint::from(19344u32),
            &BigUint::from(5040u32),
            256,
        );
        assert!(enc.overlaps(&exact));
    }

    #[test]
    fn sigma_over_n_huge_exponent_path() {
        let mut ctx = RealCtx::new();
        // exponent beyond the rational-path bound: factor ≈ q/(q−1)
        let f = Factorization::new(vec![(2, 1_000_000)]).unwrap();
        let enc = f.sigma_over_n(1e-12, &mut ctx);
        // true value is 2 − 2^(−1000000): certifying a strict bound away
        // from 2 would need a million bits, but the enclosure must stay
        // at or below 2 and extremely close to it.
        let two = astro_float::BigFloat::from_u64(2, 64);
        assert!(enc.hi() <= &two);
        assert!(enc.approx_f64() > 1.999999);
    }

    #[test]
    fn log_n_fixtures() {
        let mut ctx = RealCtx::new();
        let ln2 = fac("2").log_n(128, &mut ctx);
        assert!(ln2.contains_interval(&ctx.ln_u64(2, 128)));

        // 3ln2 + 2ln3 + ln5 = ln 360
        let f = fac("2^3*3^2*5");
        let l = f.log_n(192, &mut ctx);
        let direct = CertifiedReal::ln_point_u64(360, 192, ctx.consts());
        assert!(l.overlaps(&direct));

        let zero = Factorization::one().log_n(128, &mut ctx);
        assert!(zero.lo().is_zero() && zero.hi().is_zero());
    }

    #[test]
    fn log_n_matches_big_value_log() {
        let mut ctx = RealCtx::new();
        // value has ~332 bits; compare against ln of the exact integer
        let f = fac("2^100*3^50*101^10");
        let l = f.log_n(160, &mut ctx);
        let v = f.value();
        let direct = CertifiedReal::exact_biguint(&v).ln(160, &mut ctx).unwrap();
        assert!(l.overlaps(&direct));
    }

    #[test]
    fn constructor_rejects_bad_entries() {
        assert!(Factorization::new(vec![(4, 1)]).is_err());
        assert!(Factorization::new(vec![(3, 1), (2, 1)]).is_err());
        assert!(Factorization::new(vec![(2, 0)]).is_err());
        assert!(Factorization::new(vec![(2, 1), (2, 2)]).is_err());
    }
}
