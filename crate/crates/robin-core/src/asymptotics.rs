//! Empirical verification of the analytic ingredients: the two-sided
//! Chebyshev θ bounds, the nth-prime formula and its lower bound, the
//! Mertens product normalization, the π(x) sandwich, the primorial gap
//! trend, the log-damped decay probe, and the K₀/m ratio experiment.
//!
//! Limit claims are converted to trend checks on finite grids; nothing
//! here asserts a limit, only certified inequalities over the checked
//! domain.

use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::interval::{CertifiedReal, CertifiedSign, RealCtx};
use crate::primes::PrimeTable;

/// θ bound threshold: the relative and additive bounds are only claimed
/// for primes strictly above this value.
pub const THETA_THRESHOLD: u64 = 10_544_111;

/// Outcome of one bound suite over a checked domain.
#[derive(Debug, Clone)]
pub struct BoundReport {
    /// Claim identifier, e.g. `theta-relative`.
    pub claim: &'static str,
    /// Domain actually checked (inclusive ends as given).
    pub domain: (u64, u64),
    /// Number of check points.
    pub checked: usize,
    /// Smallest certified slack encountered across the domain.
    pub worst_margin: CertifiedReal,
    /// True when every point certified in the claimed direction.
    pub pass: bool,
    /// Set when the domain contained no check points.
    pub vacuous: bool,
}

impl BoundReport {
    fn vacuous(claim: &'static str, domain: (u64, u64)) -> Self {
        BoundReport {
            claim,
            domain,
            checked: 0,
            worst_margin: CertifiedReal::zero(),
            pass: true,
            vacuous: true,
        }
    }
}

fn keep_worst(worst: &mut Option<CertifiedReal>, candidate: CertifiedReal) {
    let replace = match worst {
        None => true,
        Some(w) => candidate.lo() < w.lo(),
    };
    if replace {
        *worst = Some(candidate);
    }
}

/// Verifies 0.998684·p < θ(p) < 1.001102·p for every prime in `(lo, hi]`.
pub fn check_theta_relative(
    table: &PrimeTable,
    lo: u64,
    hi: u64,
    ctx: &mut RealCtx,
) -> Result<BoundReport> {
    check_theta_bounds(table, lo, hi, ctx, ThetaBound::Relative)
}

/// Verifies p − 0.0066788·p/ln p < θ(p) < p + 0.0066788·p/ln p likewise.
pub fn check_theta_additive(
    table: &PrimeTable,
    lo: u64,
    hi: u64,
    ctx: &mut RealCtx,
) -> Result<BoundReport> {
    check_theta_bounds(table, lo, hi, ctx, ThetaBound::Additive)
}

enum ThetaBound {
    Relative,
    Additive,
}

fn check_theta_bounds(
    table: &PrimeTable,
    lo: u64,
    hi: u64,
    ctx: &mut RealCtx,
    which: ThetaBound,
) -> Result<BoundReport> {
    if lo < THETA_THRESHOLD {
        return Err(Error::InvalidArgument(
            "θ bounds are only claimed for primes above 10544111",
        ));
    }
    let claim = match which {
        ThetaBound::Relative => "theta-relative",
        ThetaBound::Additive => "theta-additive",
    };
    if table.primes_in(lo, hi).is_empty() {
        return Ok(BoundReport::vacuous(claim, (lo, hi)));
    }
    let bits = 128;
    let mut walker = table.theta_walker(lo, hi, 1e-9, ctx)?;
    let (c_lo, c_hi) = match which {
        ThetaBound::Relative => (
            CertifiedReal::from_ratio(&BigUint::from(998_684u32), &BigUint::from(1_000_000u32), bits),
            CertifiedReal::from_ratio(&BigUint::from(1_001_102u32), &BigUint::from(1_000_000u32), bits),
        ),
        ThetaBound::Additive => {
            let c = CertifiedReal::from_ratio(
                &BigUint::from(66_788u32),
                &BigUint::from(10_000_000u32),
                bits,
            );
            (c.clone(), c)
        }
    };
    let mut checked = 0usize;
    let mut pass = true;
    let mut worst: Option<CertifiedReal> = None;
    while let Some(step) = walker.next_with(ctx.consts()) {
        checked += 1;
        let p = CertifiedReal::exact_u64(step.prime);
        let (lower_slack, upper_slack) = match which {
            ThetaBound::Relative => (
                step.theta.sub(&c_lo.mul(&p, bits), bits),
                c_hi.mul(&p, bits).sub(&step.theta, bits),
            ),
            ThetaBound::Additive => {
                let spread = c_lo.mul(&p, bits).div(&step.ln_prime, bits);
                (
                    step.theta.sub(&p.sub(&spread, bits), bits),
                    p.add(&spread, bits).sub(&step.theta, bits),
                )
            }
        };
        for slack in [lower_slack, upper_slack] {
            if slack.sign() != CertifiedSign::Positive {
                pass = false;
            }
            keep_worst(&mut worst, slack);
        }
    }
    Ok(BoundReport {
        claim,
        domain: (lo, hi),
        checked,
        worst_margin: worst.expect("nonempty range"),
        pass,
        vacuous: false,
    })
}

/// One point of the nth-prime asymptotic probe.
#[derive(Debug, Clone)]
pub struct NthPrimeProbe {
    pub k: u64,
    pub p_k: u64,
    /// (p_k/k − (ln k + ln ln k − 1)) · ln k / ln ln k, the error of the
    /// asymptotic formula normalized by its own remainder scale.
    pub normalized_error: CertifiedReal,
    /// Whether p_k > k(ln k + ln ln k − 1) certified.
    pub lower_bound_holds: bool,
}

/// Evaluates the nth-prime asymptotic at k and certifies the classical
/// lower bound p_k > k(ln k + ln ln k − 1), valid for k ≥ 2.
pub fn nth_prime_asymptotic_error(
    table: &PrimeTable,
    k: u64,
    ctx: &mut RealCtx,
) -> Result<NthPrimeProbe> {
    if k < 2 {
        return Err(Error::InvalidArgument("the probe requires k >= 2"));
    }
    let p_k = table
        .nth(k as usize)
        .ok_or(Error::InvalidArgument("prime table too short for k"))?;
    let bits = 128;
    let ln_k = ctx.ln_u64(k, bits);
    let lnln_k = ln_k.ln(bits, ctx)?;
    let main = ln_k
        .add(&lnln_k, bits)
        .sub(&CertifiedReal::exact_u64(1), bits);
    let kv = CertifiedReal::exact_u64(k);
    let bound = kv.mul(&main, bits);
    let pk_exact = CertifiedReal::exact_u64(p_k);
    let lower_bound_holds =
        pk_exact.cmp_certified(&bound) == Some(core::cmp::Ordering::Greater);
    let normalized_error = pk_exact
        .div(&kv, bits)
        .sub(&main, bits)
        .mul(&ln_k.div(&lnln_k, bits), bits);
    Ok(NthPrimeProbe {
        k,
        p_k,
        normalized_error,
        lower_bound_holds,
    })
}

/// Certifies p_k > k(ln k + ln ln k − 1) for every k in `[lo, hi]`.
///
/// Blocks of indices share one enclosure of the slowly-varying log terms;
/// only near-tie indices fall back to per-k certification.
pub fn check_nth_prime_lower_bound(
    table: &PrimeTable,
    lo: u64,
    hi: u64,
    ctx: &mut RealCtx,
) -> Result<BoundReport> {
    if lo < 2 {
        return Err(Error::InvalidArgument("the lower bound is claimed for k >= 2"));
    }
    if hi < lo {
        return Ok(BoundReport::vacuous("dusart-nth-prime", (lo, hi)));
    }
    if table.nth(hi as usize).is_none() {
        return Err(Error::InvalidArgument("prime table too short for the range"));
    }
    let bits = 128;
    let mut pass = true;
    let mut checked = 0usize;
    let mut worst: Option<CertifiedReal> = None;
    let mut k = lo;
    const BLOCK: u64 = 1 << 10;
    while k <= hi {
        let end = (k + BLOCK - 1).min(hi);
        // ln and lnln are increasing: their value anywhere in [k, end]
        // is bounded by the enclosure hull at the two block ends.
        let ln_lo = ctx.ln_u64(k, bits);
        let ln_hi = ctx.ln_u64(end, bits);
        let lnln_hi = ln_hi.ln(bits, ctx)?;
        let main_hi = ln_hi
            .add(&lnln_hi, bits)
            .sub(&CertifiedReal::exact_u64(1), bits);
        let per_block_certified = {
            // worst case over the block: largest bound vs smallest p_j
            // is at j = k with main evaluated at `end`
            let mut all = true;
            for j in k..=end {
                let p_j = table.nth(j as usize).expect("range checked");
                let bound_hi = CertifiedReal::exact_u64(j).mul(&main_hi, bits);
                if CertifiedReal::exact_u64(p_j).cmp_certified(&bound_hi)
                    != Some(core::cmp::Ordering::Greater)
                {
                    all = false;
                    break;
                }
            }
            all
        };
        if per_block_certified {
            // record the slack at the block start for the margin trail
            let lnln_lo = ln_lo.ln(bits, ctx)?;
            let main_lo = ln_lo
                .add(&lnln_lo, bits)
                .sub(&CertifiedReal::exact_u64(1), bits);
            let p_k = table.nth(k as usize).expect("range checked");
            let slack = CertifiedReal::exact_u64(p_k)
                .sub(&CertifiedReal::exact_u64(k).mul(&main_lo, bits), bits);
            keep_worst(&mut worst, slack);
            checked += (end - k + 1) as usize;
        } else {
            // per-index certification
            for j in k..=end {
                let probe = nth_prime_asymptotic_error(table, j, ctx)?;
                if !probe.lower_bound_holds {
                    pass = false;
                }
                let ln_j = ctx.ln_u64(j, bits);
                let lnln_j = ln_j.ln(bits, ctx)?;
                let main_j = ln_j
                    .add(&lnln_j, bits)
                    .sub(&CertifiedReal::exact_u64(1), bits);
                let slack = CertifiedReal::exact_u64(probe.p_k)
                    .sub(&CertifiedReal::exact_u64(j).mul(&main_j, bits), bits);
                keep_worst(&mut worst, slack);
                checked += 1;
            }
        }
        k = end + 1;
    }
    Ok(BoundReport {
        claim: "dusart-nth-prime",
        domain: (lo, hi),
        checked,
        worst_margin: worst.expect("nonempty range"),
        pass,
        vacuous: false,
    })
}

/// Enclosure of e^γ·ln x·∏_{p ≤ x}(1 − 1/p), which tends to 1.
pub fn mertens_product(
    table: &PrimeTable,
    x: u64,
    tolerance: f64,
    ctx: &mut RealCtx,
) -> Result<CertifiedReal> {
    if x < 2 {
        return Err(Error::InvalidArgument("mertens product requires x >= 2"));
    }
    let count = table.prime_count(x);
    let bits = mertens_bits(count, tolerance);
    let mut product = CertifiedReal::exact_u64(1);
    for &p in &table.primes()[..count as usize] {
        let factor = CertifiedReal::from_ratio(
            &BigUint::from(p - 1),
            &BigUint::from(p),
            bits,
        );
        product = product.mul(&factor, bits);
    }
    let ln_x = CertifiedReal::ln_point_u64(x, bits, ctx.consts());
    Ok(ctx.exp_gamma(bits).mul(&ln_x, bits).mul(&product, bits))
}

fn mertens_bits(count: u64, tolerance: f64) -> usize {
    let tol = if tolerance > 0.0 { tolerance } else { 1e-9 };
    let needed = (count.max(2) as f64).log2() - tol.log2() + 24.0;
    ((needed as usize).next_multiple_of(64)).max(128)
}

/// One sample of the damped-decay probe.
#[derive(Debug, Clone)]
pub struct DecayPoint {
    /// The grid point, given as ln x (the probe lives in log-domain;
    /// x itself may be far beyond floating-point range).
    pub ln_x: f64,
    /// ln of (ln x)·e^(−c·(ln x)^(3/5−ε)).
    pub log_value: CertifiedReal,
    /// The value itself (tiny magnitudes are exactly representable).
    pub value: CertifiedReal,
}

/// Probe of (ln x)·e^(−c·(ln x)^(3/5−ε)) over a grid of ln x values.
pub struct DecayProbe {
    pub points: Vec<DecayPoint>,
    /// Certified `last < first` over the grid.
    pub decayed: bool,
}

/// Samples the damped decay along `ln_x_grid`; requires 0 < ε < 1/5 and
/// c > 0. Evaluation is entirely in log-domain so late onsets (x beyond
/// e^(10^6)) stay representable.
pub fn decay_limit_probe(
    c: f64,
    epsilon: f64,
    ln_x_grid: &[f64],
    ctx: &mut RealCtx,
) -> Result<DecayProbe> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidArgument("decay constant c must be positive"));
    }
    if !(epsilon > 0.0 && epsilon < 0.2) {
        return Err(Error::InvalidArgument("ε must lie strictly inside (0, 1/5)"));
    }
    if ln_x_grid.is_empty() {
        return Err(Error::InvalidArgument("empty grid"));
    }
    if ln_x_grid.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
        return Err(Error::InvalidArgument("grid requires ln x > 0"));
    }
    let bits = 128;
    let exponent = CertifiedReal::exact_f64(0.6).sub(&CertifiedReal::exact_f64(epsilon), bits);
    let cv = CertifiedReal::exact_f64(c);
    let mut points = Vec::with_capacity(ln_x_grid.len());
    for &ln_x in ln_x_grid {
        let l = CertifiedReal::exact_f64(ln_x);
        let ln_l = l.ln(bits, ctx)?;
        // (ln x)^(3/5−ε) = exp((3/5−ε)·ln ln x)
        let damped = exponent.mul(&ln_l, bits).exp(bits, ctx);
        let log_value = ln_l.sub(&cv.mul(&damped, bits), bits);
        let value = log_value.exp(bits, ctx);
        points.push(DecayPoint { ln_x, log_value, value });
    }
    let decayed = points
        .last()
        .expect("nonempty")
        .value
        .cmp_certified(&points[0].value)
        == Some(core::cmp::Ordering::Less);
    Ok(DecayProbe { points, decayed })
}

/// Exponent profile for the primorial gap.
#[derive(Debug, Clone)]
pub enum GapExponents {
    /// All exponents equal.
    Uniform(u32),
    /// Explicit per-prime exponents (length m).
    PerPrime(Vec<u32>),
    /// The α → ∞ surrogate: the p^(−α) term is dropped entirely,
    /// giving the lower envelope ∏ p/(p − 1).
    Unbounded,
}

/// Enclosure of e^γ·log log ∏_{k≤m} p_k − ∏_{k≤m} (p_k − p_k^(−α_k))/(p_k − 1),
/// the quantity whose liminf the gap lemma bounds below by zero.
pub fn primorial_gap(
    table: &PrimeTable,
    m: usize,
    exponents: &GapExponents,
    ctx: &mut RealCtx,
) -> Result<CertifiedReal> {
    if m == 0 {
        return Err(Error::InvalidArgument("gap requires m >= 1"));
    }
    let p_m = table
        .nth(m)
        .ok_or(Error::InvalidArgument("prime table too short for m"))?;
    if let GapExponents::PerPrime(list) = exponents {
        if list.len() != m {
            return Err(Error::LengthMismatch);
        }
        if list.iter().any(|&a| a == 0) {
            return Err(Error::InvalidArgument("exponents must be at least 1"));
        }
    }
    let bits = 128 + ((m as f64).log2() as usize).next_multiple_of(64);
    // log log ∏ p_k = ln θ(p_m)
    let theta = table.theta(p_m, 1e-12, ctx)?;
    let loglog = theta.ln(bits, ctx)?;
    let lhs = ctx.exp_gamma(bits).mul(&loglog, bits);

    let mut product = CertifiedReal::exact_u64(1);
    for (i, &p) in table.primes()[..m].iter().enumerate() {
        let factor = match exponents {
            GapExponents::Unbounded => {
                CertifiedReal::from_ratio(&BigUint::from(p), &BigUint::from(p - 1), bits)
            }
            GapExponents::Uniform(a) => gap_factor(p, *a, bits, ctx),
            GapExponents::PerPrime(list) => gap_factor(p, list[i], bits, ctx),
        };
        product = product.mul(&factor, bits);
    }
    Ok(lhs.sub(&product, bits))
}

/// (p − p^(−α))/(p − 1) = (p^(α+1) − 1)/(p^α (p − 1)) exactly for
/// materializable powers, interval exp otherwise.
fn gap_factor(p: u64, a: u32, bits: usize, ctx: &mut RealCtx) -> CertifiedReal {
    if a <= 64 {
        let pb = BigUint::from(p);
        let num = pb.pow(a + 1) - 1u32;
        let den = pb.pow(a) * (p - 1);
        CertifiedReal::from_ratio(&num, &den, bits)
    } else {
        let p_pow = ctx
            .ln_u64(p, bits)
            .mul(&CertifiedReal::exact_i64(-(a as i64)), bits)
            .exp(bits, ctx);
        CertifiedReal::exact_u64(p)
            .sub(&p_pow, bits)
            .div(&CertifiedReal::exact_u64(p - 1), bits)
    }
}

/// Certifies the Rosser–Schoenfeld π(x) sandwich
/// x/ln x·(1 + 1/(2 ln x)) < π(x) < x/ln x·(1 + 3/(2 ln x))
/// for all real x in `[lo, hi]` (the lower bound's classical validity
/// starts at x = 59).
///
/// π is constant between consecutive primes while both bounds increase,
/// so checking each bound at the right end of every constancy interval
/// covers all real x; blocks of primes share one enclosure and only
/// near-tie blocks fall back to per-prime work.
pub fn check_pi_sandwich(
    table: &PrimeTable,
    lo: u64,
    hi: u64,
    ctx: &mut RealCtx,
) -> Result<BoundReport> {
    if lo < 59 {
        return Err(Error::InvalidArgument(
            "the π(x) lower bound is only claimed from x = 59",
        ));
    }
    if hi <= lo {
        return Ok(BoundReport::vacuous("rosser-schoenfeld-pi", (lo, hi)));
    }
    assert!(hi <= table.limit(), "sandwich check beyond sieved limit");
    let bits = 128;
    let half = CertifiedReal::from_ratio(&BigUint::from(1u32), &BigUint::from(2u32), bits);
    let three_half = CertifiedReal::from_ratio(&BigUint::from(3u32), &BigUint::from(2u32), bits);
    let one = CertifiedReal::exact_u64(1);

    // bound(x) = x/ln x (1 + c/ln x)
    let mut bound_at = |x: u64, c: &CertifiedReal, ctx: &mut RealCtx| -> Result<CertifiedReal> {
        let xv = CertifiedReal::exact_u64(x);
        let ln_x = ctx.ln_u64(x, bits);
        Ok(xv
            .div(&ln_x, bits)
            .mul(&one.add(&c.div(&ln_x, bits), bits), bits))
    };

    let mut pass = true;
    let mut checked = 0usize;
    let mut worst: Option<CertifiedReal> = None;

    // π on [x, next prime) equals π(x); evaluate at interval sups.
    let mut k = table.prime_count(lo);
    let mut x = lo;
    while x <= hi {
        let next_prime = table
            .primes()
            .get(k as usize)
            .copied()
            .unwrap_or(table.limit() + 1);
        let sup = next_prime.saturating_sub(0).min(hi + 1);
        // lower bound is increasing: worst case within [x, sup) is at sup
        let lower = bound_at(sup.min(hi), &half, ctx)?;
        let pi = CertifiedReal::exact_u64(k);
        let lower_slack = pi.sub(&lower, bits);
        if lower_slack.sign() != CertifiedSign::Positive {
            pass = false;
        }
        keep_worst(&mut worst, lower_slack);
        // upper bound is increasing: worst case is at the interval start
        let upper = bound_at(x, &three_half, ctx)?;
        let upper_slack = upper.sub(&pi, bits);
        if upper_slack.sign() != CertifiedSign::Positive {
            pass = false;
        }
        keep_worst(&mut worst, upper_slack);
        checked += 1;
        if next_prime > hi {
            break;
        }
        x = next_prime;
        k += 1;
    }
    Ok(BoundReport {
        claim: "rosser-schoenfeld-pi",
        domain: (lo, hi),
        checked,
        worst_margin: worst.expect("nonempty range"),
        pass,
        vacuous: false,
    })
}

/// Exponent schedules for the K₀/m ratio experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentSchedule {
    /// α_i = 1.
    AllOnes,
    /// α_i = c for a fixed constant.
    Constant(u32),
    /// α_i = m (the constant grows with the grid point).
    ConstantM,
    /// α_i = ⌈m/i⌉.
    CeilMOverI,
}

impl ExponentSchedule {
    fn exponent(&self, m: u64, i: u64) -> u64 {
        match self {
            ExponentSchedule::AllOnes => 1,
            ExponentSchedule::Constant(c) => *c as u64,
            ExponentSchedule::ConstantM => m,
            ExponentSchedule::CeilMOverI => m.div_ceil(i),
        }
    }
}

/// One grid point of the ratio experiment.
#[derive(Debug, Clone, Copy)]
pub struct K0Point {
    pub m: u64,
    /// Least index i with α_i ≤ i, when one exists within 1..=m.
    pub least_index: Option<u64>,
    /// least_index / m.
    pub ratio: Option<f64>,
}

/// For each m in the grid, finds the least index i with α_i ≤ i under
/// the schedule and reports its ratio to m; the ratio decaying to zero
/// is the behaviour the bounded-prefix argument needs.
pub fn k0_ratio_experiment(schedule: ExponentSchedule, m_grid: &[u64]) -> Result<Vec<K0Point>> {
    if m_grid.iter().any(|&m| m == 0) {
        return Err(Error::InvalidArgument("grid entries must be positive"));
    }
    // all supported schedules are nonincreasing in i for fixed m
    Ok(m_grid
        .iter()
        .map(|&m| {
            let least = (1..=m).find(|&i| schedule.exponent(m, i) <= i);
            K0Point {
                m,
                least_index: least,
                ratio: least.map(|i| i as f64 / m as f64),
            }
        })
        .collect())
}
