//! Prime generation and the prime-counting/Chebyshev functions.
//!
//! The table is produced by a segmented sieve of Eratosthenes (odd
//! numbers only, cache-sized segments) and is read-only afterwards, so
//! it can be shared freely across threads. θ sums are certified: bulk
//! prefixes go through exact batch products with one enclosed logarithm
//! per batch, and per-prime increments use directed-rounded logarithms.

use alloc::vec;
use alloc::vec::Vec;

use astro_float::{BigFloat, Consts, RoundingMode};
use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::interval::{biguint_to_certified, CertifiedReal, RealCtx};

/// Sieve segment size in bytes; covers twice as many integers (odds only).
const SEGMENT_BYTES: usize = 1 << 15;

/// Number of primes multiplied together per batch in bulk θ sums.
const THETA_BATCH: usize = 512;

/// Sorted table of all primes up to `limit`.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    /// Sieve of Eratosthenes up to and including `limit`.
    pub fn sieve(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidArgument("sieve limit must be at least 2"));
        }
        let mut primes = Vec::with_capacity(estimate_prime_count(limit));
        primes.push(2);

        // Odd base primes up to √limit, by a plain byte sieve.
        let root = limit.isqrt();
        let mut base_composite = vec![false; (root as usize + 1) / 2 + 1];
        let mut base_primes: Vec<u64> = Vec::new();
        let mut i = 3u64;
        while i <= root {
            if !base_composite[(i / 2) as usize] {
                base_primes.push(i);
                let mut j = i * i;
                while j <= root {
                    base_composite[(j / 2) as usize] = true;
                    j += 2 * i;
                }
            }
            i += 2;
        }

        // Segmented sweep over odd numbers in [3, limit].
        let seg_span = (SEGMENT_BYTES as u64) * 2;
        let mut seg = vec![false; SEGMENT_BYTES];
        let mut low = 3u64;
        while low <= limit {
            let mut high = (low + seg_span - 1).min(limit);
            if high % 2 == 0 {
                high -= 1;
            }
            seg.fill(false);
            for &p in &base_primes {
                if p * p > high {
                    break;
                }
                let mut start = p * p;
                if start < low {
                    let mut first = low.div_ceil(p) * p;
                    if first % 2 == 0 {
                        first += p;
                    }
                    start = first;
                }
                let mut j = start;
                while j <= high {
                    seg[((j - low) / 2) as usize] = true;
                    j += 2 * p;
                }
            }
            let mut n = low;
            while n <= high {
                if !seg[((n - low) / 2) as usize] {
                    primes.push(n);
                }
                n += 2;
            }
            low = high + 2;
        }

        Ok(PrimeTable { limit, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// The k-th prime, 1-based; `None` when the table is too short.
    pub fn nth(&self, k: usize) -> Option<u64> {
        if k == 0 {
            return None;
        }
        self.primes.get(k - 1).copied()
    }

    /// π(x) for x within the sieved range.
    pub fn prime_count(&self, x: u64) -> u64 {
        assert!(x <= self.limit, "prime_count beyond sieved limit");
        self.primes.partition_point(|&p| p <= x) as u64
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }

    /// Iterator over primes in `(lo, hi]`.
    pub fn primes_in(&self, lo: u64, hi: u64) -> &[u64] {
        let a = self.primes.partition_point(|&p| p <= lo);
        let b = self.primes.partition_point(|&p| p <= hi);
        &self.primes[a..b]
    }

    /// Certified enclosure of θ(x) = Σ_{p ≤ x} ln p with width ≤ `tolerance`.
    pub fn theta(&self, x: u64, tolerance: f64, ctx: &mut RealCtx) -> Result<CertifiedReal> {
        if x < 2 {
            return Err(Error::InvalidArgument("theta requires x >= 2"));
        }
        assert!(x <= self.limit, "theta beyond sieved limit");
        let count = self.prime_count(x).max(1);
        let bits = theta_bits(x, count, tolerance);
        let mut sum = ThetaAccumulator::new(bits);
        sum.extend_bulk(&self.primes[..count as usize], ctx.consts());
        Ok(sum.value())
    }

    /// Walker yielding (p, θ(p)) for each prime in `(from, to]`, seeded
    /// by a bulk-batched enclosure of θ(from).
    pub fn theta_walker(
        &self,
        from: u64,
        to: u64,
        tolerance: f64,
        ctx: &mut RealCtx,
    ) -> Result<ThetaWalker<'_>> {
        assert!(to <= self.limit, "walker beyond sieved limit");
        let count = self.prime_count(to).max(1);
        let bits = theta_bits(to, count, tolerance);
        let mut acc = ThetaAccumulator::new(bits);
        let prefix = self.prime_count(from) as usize;
        acc.extend_bulk(&self.primes[..prefix], ctx.consts());
        Ok(ThetaWalker {
            rest: self.primes_in(from, to),
            acc,
        })
    }
}

/// Running certified sum of logarithms of primes.
struct ThetaAccumulator {
    bits: usize,
    lo: BigFloat,
    hi: BigFloat,
}

impl ThetaAccumulator {
    fn new(bits: usize) -> Self {
        ThetaAccumulator {
            bits,
            lo: BigFloat::from_u64(0, bits),
            hi: BigFloat::from_u64(0, bits),
        }
    }

    fn add(&mut self, term: &CertifiedReal) {
        self.lo = self.lo.add(term.lo(), self.bits, RoundingMode::Down);
        self.hi = self.hi.add(term.hi(), self.bits, RoundingMode::Up);
    }

    /// Adds Σ ln p over `primes` via exact batch products: one enclosed
    /// logarithm per [`THETA_BATCH`] primes instead of one per prime.
    fn extend_bulk(&mut self, primes: &[u64], cc: &mut Consts) {
        for chunk in primes.chunks(THETA_BATCH) {
            if chunk.len() == 1 {
                self.add(&CertifiedReal::ln_point_u64(chunk[0], self.bits, cc));
                continue;
            }
            let product: BigUint = chunk.iter().fold(BigUint::from(1u32), |acc, &p| acc * p);
            let enclosed = biguint_to_certified(&product, self.bits + 16);
            let lo = enclosed.lo().ln(self.bits, RoundingMode::Down, cc);
            let hi = enclosed.hi().ln(self.bits, RoundingMode::Up, cc);
            self.add(&CertifiedReal::from_endpoints(lo, hi));
        }
    }

    fn value(&self) -> CertifiedReal {
        CertifiedReal::from_endpoints(self.lo.clone(), self.hi.clone())
    }
}

/// One step of a θ walk: the prime, its enclosed logarithm, and the
/// running θ(p) through it.
pub struct ThetaStep {
    pub prime: u64,
    pub ln_prime: CertifiedReal,
    pub theta: CertifiedReal,
}

/// Streams (p, ln p, θ(p)) over a prime range with a certified running sum.
pub struct ThetaWalker<'a> {
    rest: &'a [u64],
    acc: ThetaAccumulator,
}

impl ThetaWalker<'_> {
    pub fn next_with(&mut self, cc: &mut Consts) -> Option<ThetaStep> {
        let (&p, rest) = self.rest.split_first()?;
        self.rest = rest;
        let ln_prime = CertifiedReal::ln_point_u64(p, self.acc.bits, cc);
        self.acc.add(&ln_prime);
        Some(ThetaStep {
            prime: p,
            ln_prime,
            theta: self.acc.value(),
        })
    }

    pub fn remaining(&self) -> usize {
        self.rest.len()
    }
}

/// Precision for a θ sum: per-term budget `tolerance / count` plus the
/// headroom to accumulate `count` terms of magnitude up to ln x.
fn theta_bits(x: u64, count: u64, tolerance: f64) -> usize {
    let tol = if tolerance > 0.0 { tolerance } else { 1e-12 };
    let magnitude = (x as f64).log2().max(1.0); // θ(x) < 1.01 x for our ranges
    let needed = magnitude + (count as f64).log2() - tol.log2() + 24.0;
    ((needed as usize).next_multiple_of(64)).max(128)
}

fn estimate_prime_count(limit: u64) -> usize {
    let x = limit as f64;
    if x < 17.0 {
        8
    } else {
        (x / (x.ln() - 1.12)) as usize + 16
    }
}

/// Deterministic Miller–Rabin for `u64` (12 fixed witnesses).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// The k-th prime (1-based), sieving a freshly sized table.
///
/// The table is sized from the classical upper bound
/// p_k < k(ln k + ln ln k) for k ≥ 6 and grown if that ever falls short.
pub fn nth_prime(k: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidArgument("nth_prime requires k >= 1"));
    }
    let mut limit = nth_prime_upper_bound(k);
    loop {
        let table = PrimeTable::sieve(limit)?;
        if let Some(p) = table.nth(k as usize) {
            return Ok(p);
        }
        limit = limit.saturating_mul(2);
    }
}

fn nth_prime_upper_bound(k: u64) -> u64 {
    if k < 6 {
        16
    } else {
        let kf = k as f64;
        (kf * (kf.ln() + kf.ln().ln())) as u64 + 16
    }
}

/// π(x) by direct sieve.
pub fn prime_count(x: u64) -> u64 {
    if x < 2 {
        return 0;
    }
    PrimeTable::sieve(x)
        .expect("x >= 2")
        .prime_count(x)
}

/// The first `m` primes.
pub fn first_primes(m: usize) -> Vec<u64> {
    if m == 0 {
        return Vec::new();
    }
    let mut limit = nth_prime_upper_bound(m as u64);
    loop {
        let table = PrimeTable::sieve(limit).expect("limit >= 2");
        if table.len() >= m {
            return table.primes()[..m].to_vec();
        }
        limit = limit.saturating_mul(2);
    }
}
