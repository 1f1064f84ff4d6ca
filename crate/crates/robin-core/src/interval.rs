//! Rigorous real enclosures on arbitrary-precision floats.
//!
//! A [`CertifiedReal`] is a pair `[lo, hi]` of binary floats guaranteed to
//! bracket the exact real value. All arithmetic rounds the lower endpoint
//! toward −∞ and the upper endpoint toward +∞, so enclosures stay valid
//! under composition. Transcendental endpoints rely on the backing
//! library's correctly-directed rounding; point evaluations additionally
//! pad the cheap side by two ulps.
//!
//! Sign and ordering queries answer only when the enclosures separate;
//! callers escalate the working precision (see [`EscalationPolicy`])
//! rather than ever guessing.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use astro_float::{BigFloat, Consts, Exponent, Radix, RoundingMode, Sign};
use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Working precision all certified evaluations start from.
pub const DEFAULT_PRECISION_BITS: usize = 128;

/// Default number of times the working precision is doubled before an
/// evaluation reports an indeterminate sign.
pub const DEFAULT_MAX_ESCALATIONS: u32 = 4;

/// Euler–Mascheroni constant, 65 correctly rounded decimal digits.
const GAMMA_DIGITS: &str =
    "5.7721566490153286060651209008240243104215933593992359880576723488e-1";

/// `exp(γ)`, 65 correctly rounded decimal digits. Used as a cross-check;
/// the working enclosure of `e^γ` is always derived from [`GAMMA_DIGITS`].
const EXP_GAMMA_DIGITS: &str =
    "1.7810724179901979852365041031071795491696452143034302053576658765";

/// Outcome of a certified sign query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertifiedSign {
    Negative,
    /// The enclosure straddles zero even at maximal precision.
    Indeterminate,
    Positive,
}

impl CertifiedSign {
    pub fn as_i8(self) -> i8 {
        match self {
            CertifiedSign::Negative => -1,
            CertifiedSign::Indeterminate => 0,
            CertifiedSign::Positive => 1,
        }
    }
}

/// Precision escalation schedule: start at `start_bits` and double up to
/// `max_escalations` times when a sign or ordering fails to certify.
#[derive(Debug, Clone, Copy)]
pub struct EscalationPolicy {
    pub start_bits: usize,
    pub max_escalations: u32,
}

impl Default for EscalationPolicy {
    fn default() -> Self {
        EscalationPolicy {
            start_bits: DEFAULT_PRECISION_BITS,
            max_escalations: DEFAULT_MAX_ESCALATIONS,
        }
    }
}

impl EscalationPolicy {
    /// Precision ladder: `start_bits`, `2·start_bits`, ….
    pub fn ladder(&self) -> impl Iterator<Item = usize> + '_ {
        (0..=self.max_escalations).map(|i| self.start_bits << i)
    }

    /// Smallest rung of the ladder that can represent `magnitude` with
    /// absolute resolution `tolerance`, or the top rung.
    pub fn bits_for_tolerance(&self, magnitude_log2: i64, tolerance: f64) -> usize {
        let tol_log2 = if tolerance > 0.0 { tolerance.log2() } else { -1074.0 };
        let needed = (magnitude_log2 as f64 - tol_log2) + 16.0;
        self.ladder()
            .find(|&b| (b as f64) >= needed)
            .unwrap_or(self.start_bits << self.max_escalations)
    }
}

/// Shared evaluation context: the constants cache of the backing library
/// plus memoized enclosures of γ, `e^γ`, and logarithms of small primes.
pub struct RealCtx {
    cc: Consts,
    gamma: Vec<(usize, CertifiedReal)>,
    exp_gamma: Vec<(usize, CertifiedReal)>,
    prime_ln: BTreeMap<(u64, usize), CertifiedReal>,
}

impl RealCtx {
    pub fn new() -> Self {
        RealCtx {
            cc: Consts::new().expect("constants cache allocation"),
            gamma: Vec::new(),
            exp_gamma: Vec::new(),
            prime_ln: BTreeMap::new(),
        }
    }

    pub fn consts(&mut self) -> &mut Consts {
        &mut self.cc
    }

    /// Enclosure of the Euler–Mascheroni constant at `bits` precision.
    ///
    /// The embedded literal is correctly rounded to 65 digits, so the
    /// true constant lies within ±0.5·10⁻⁶⁴ of it; the enclosure pads by
    /// 10⁻⁶⁴ on both sides before rounding outward.
    pub fn gamma(&mut self, bits: usize) -> CertifiedReal {
        if let Some((_, g)) = self.gamma.iter().find(|(b, _)| *b == bits) {
            return g.clone();
        }
        let p = bits.max(240);
        let lit_lo = BigFloat::parse(GAMMA_DIGITS, Radix::Dec, p, RoundingMode::Down, &mut self.cc);
        let lit_hi = BigFloat::parse(GAMMA_DIGITS, Radix::Dec, p, RoundingMode::Up, &mut self.cc);
        let pad = BigFloat::parse("1e-64", Radix::Dec, p, RoundingMode::Up, &mut self.cc);
        let enc = CertifiedReal::from_endpoints(
            lit_lo.sub(&pad, bits, RoundingMode::Down),
            lit_hi.add(&pad, bits, RoundingMode::Up),
        );
        self.gamma.push((bits, enc.clone()));
        enc
    }

    /// Enclosure of `e^γ`, derived by exponentiating [`Self::gamma`].
    pub fn exp_gamma(&mut self, bits: usize) -> CertifiedReal {
        if let Some((_, g)) = self.exp_gamma.iter().find(|(b, _)| *b == bits) {
            return g.clone();
        }
        let g = self.gamma(bits + 8);
        let enc = g.exp(bits, self);
        self.exp_gamma.push((bits, enc.clone()));
        enc
    }

    /// Reference decimal digits of `e^γ` for consistency tests.
    pub fn exp_gamma_reference(&mut self, bits: usize) -> CertifiedReal {
        let p = bits.max(240);
        let lo = BigFloat::parse(EXP_GAMMA_DIGITS, Radix::Dec, p, RoundingMode::Down, &mut self.cc);
        let hi = BigFloat::parse(EXP_GAMMA_DIGITS, Radix::Dec, p, RoundingMode::Up, &mut self.cc);
        let pad = BigFloat::parse("1e-64", Radix::Dec, p, RoundingMode::Up, &mut self.cc);
        CertifiedReal::from_endpoints(
            lo.sub(&pad, p, RoundingMode::Down),
            hi.add(&pad, p, RoundingMode::Up),
        )
    }

    /// Memoized `ln p` for prime (or any exact `u64`) arguments.
    ///
    /// Only intended for arguments that recur, such as small primes in
    /// factorizations; bulk θ-style sums bypass the cache.
    pub fn ln_u64(&mut self, v: u64, bits: usize) -> CertifiedReal {
        debug_assert!(v >= 1);
        if let Some(c) = self.prime_ln.get(&(v, bits)) {
            return c.clone();
        }
        let enc = CertifiedReal::ln_point_u64(v, bits, &mut self.cc);
        if self.prime_ln.len() < (1 << 22) {
            self.prime_ln.insert((v, bits), enc.clone());
        }
        enc
    }
}

impl Default for RealCtx {
    fn default() -> Self {
        Self::new()
    }
}

/// A closed interval of binary floats certified to contain an exact real.
#[derive(Debug, Clone)]
pub struct CertifiedReal {
    lo: BigFloat,
    hi: BigFloat,
}

/// `2^t` as an exact float.
fn pow2(t: Exponent) -> BigFloat {
    BigFloat::from_words(&[1], Sign::Pos, t.saturating_add(1))
}

/// Two units in the last place of `x` at precision `p`, used to pad a
/// correctly rounded-down result into an enclosure.
fn two_ulps(x: &BigFloat, p: usize) -> BigFloat {
    let e = x.exponent().unwrap_or(0);
    pow2(e.saturating_sub(p as Exponent).saturating_add(1))
}

fn assert_finite(x: &BigFloat) {
    assert!(!x.is_nan() && !x.is_inf(), "non-finite endpoint: {x:?}");
}

impl CertifiedReal {
    /// Wraps endpoints already known to satisfy `lo ≤ hi`.
    pub fn from_endpoints(lo: BigFloat, hi: BigFloat) -> Self {
        assert_finite(&lo);
        assert_finite(&hi);
        debug_assert!(lo <= hi, "inverted enclosure");
        CertifiedReal { lo, hi }
    }

    /// A degenerate (exact) enclosure.
    pub fn point(x: BigFloat) -> Self {
        assert_finite(&x);
        CertifiedReal { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(BigFloat::from_u64(0, 64))
    }

    pub fn exact_u64(v: u64) -> Self {
        Self::point(BigFloat::from_u64(v, 64))
    }

    pub fn exact_i64(v: i64) -> Self {
        Self::point(BigFloat::from_i64(v, 64))
    }

    /// Exact conversion; every finite `f64` is a binary rational.
    pub fn exact_f64(v: f64) -> Self {
        assert!(v.is_finite());
        Self::point(BigFloat::from_f64(v, 64))
    }

    /// Exact conversion of an arbitrary-precision natural number.
    pub fn exact_biguint(n: &BigUint) -> Self {
        Self::point(biguint_to_bigfloat_exact(n))
    }

    /// Enclosure of the ratio `num/den` at `bits` precision.
    pub fn from_ratio(num: &BigUint, den: &BigUint, bits: usize) -> Self {
        let n = biguint_to_bigfloat_exact(num);
        let d = biguint_to_bigfloat_exact(den);
        CertifiedReal::from_endpoints(
            n.div(&d, bits, RoundingMode::Down),
            n.div(&d, bits, RoundingMode::Up),
        )
    }

    /// Enclosure of a signed ratio.
    pub fn from_ratio_signed(neg: bool, num: &BigUint, den: &BigUint, bits: usize) -> Self {
        let r = Self::from_ratio(num, den, bits);
        if neg {
            r.neg()
        } else {
            r
        }
    }

    pub fn lo(&self) -> &BigFloat {
        &self.lo
    }

    pub fn hi(&self) -> &BigFloat {
        &self.hi
    }

    pub fn neg(&self) -> Self {
        CertifiedReal {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn add(&self, rhs: &Self, bits: usize) -> Self {
        CertifiedReal::from_endpoints(
            self.lo.add(&rhs.lo, bits, RoundingMode::Down),
            self.hi.add(&rhs.hi, bits, RoundingMode::Up),
        )
    }

    pub fn sub(&self, rhs: &Self, bits: usize) -> Self {
        CertifiedReal::from_endpoints(
            self.lo.sub(&rhs.hi, bits, RoundingMode::Down),
            self.hi.sub(&rhs.lo, bits, RoundingMode::Up),
        )
    }

    pub fn mul(&self, rhs: &Self, bits: usize) -> Self {
        // Fast path for the ubiquitous nonnegative × nonnegative case.
        if !self.lo.is_negative() && !rhs.lo.is_negative() {
            return CertifiedReal::from_endpoints(
                self.lo.mul(&rhs.lo, bits, RoundingMode::Down),
                self.hi.mul(&rhs.hi, bits, RoundingMode::Up),
            );
        }
        let cand = |rm: RoundingMode| {
            [
                self.lo.mul(&rhs.lo, bits, rm),
                self.lo.mul(&rhs.hi, bits, rm),
                self.hi.mul(&rhs.lo, bits, rm),
                self.hi.mul(&rhs.hi, bits, rm),
            ]
        };
        let lo = cand(RoundingMode::Down)
            .into_iter()
            .reduce(|a, b| a.min(&b))
            .unwrap();
        let hi = cand(RoundingMode::Up)
            .into_iter()
            .reduce(|a, b| a.max(&b))
            .unwrap();
        CertifiedReal::from_endpoints(lo, hi)
    }

    /// Division; `rhs` must not contain zero.
    pub fn div(&self, rhs: &Self, bits: usize) -> Self {
        assert!(
            rhs.sign() != CertifiedSign::Indeterminate,
            "division by an interval containing zero"
        );
        let cand = |rm: RoundingMode| {
            [
                self.lo.div(&rhs.lo, bits, rm),
                self.lo.div(&rhs.hi, bits, rm),
                self.hi.div(&rhs.lo, bits, rm),
                self.hi.div(&rhs.hi, bits, rm),
            ]
        };
        let lo = cand(RoundingMode::Down)
            .into_iter()
            .reduce(|a, b| a.min(&b))
            .unwrap();
        let hi = cand(RoundingMode::Up)
            .into_iter()
            .reduce(|a, b| a.max(&b))
            .unwrap();
        CertifiedReal::from_endpoints(lo, hi)
    }

    /// Natural logarithm; requires a strictly positive enclosure.
    pub fn ln(&self, bits: usize, ctx: &mut RealCtx) -> Result<Self> {
        if !self.lo.is_positive() || self.lo.is_zero() {
            return Err(Error::Domain("ln of a non-positive enclosure"));
        }
        let lo = self.lo.ln(bits, RoundingMode::Down, &mut ctx.cc);
        let hi = self.hi.ln(bits, RoundingMode::Up, &mut ctx.cc);
        Ok(CertifiedReal::from_endpoints(lo, hi))
    }

    /// `ln` of an exact positive point, padding one directed call by two
    /// ulps instead of paying for a second transcendental evaluation.
    pub fn ln_point_u64(v: u64, bits: usize, cc: &mut Consts) -> Self {
        debug_assert!(v >= 1);
        if v == 1 {
            return Self::zero();
        }
        let x = BigFloat::from_u64(v, bits);
        let lo = x.ln(bits, RoundingMode::Down, cc);
        let hi = lo.add(&two_ulps(&lo, bits), bits, RoundingMode::Up);
        CertifiedReal::from_endpoints(lo, hi)
    }

    /// `ln` of an exact positive big float.
    pub fn ln_point(x: &BigFloat, bits: usize, cc: &mut Consts) -> Result<Self> {
        if !x.is_positive() || x.is_zero() {
            return Err(Error::Domain("ln of a non-positive value"));
        }
        let lo = x.ln(bits, RoundingMode::Down, cc);
        let hi = lo.add(&two_ulps(&lo, bits), bits, RoundingMode::Up);
        Ok(CertifiedReal::from_endpoints(lo, hi))
    }

    pub fn exp(&self, bits: usize, ctx: &mut RealCtx) -> Self {
        let lo = self.lo.exp(bits, RoundingMode::Down, &mut ctx.cc);
        let hi = self.hi.exp(bits, RoundingMode::Up, &mut ctx.cc);
        CertifiedReal::from_endpoints(lo, hi)
    }

    /// Integer power of a nonnegative enclosure.
    pub fn powi(&self, n: usize, bits: usize) -> Self {
        assert!(!self.lo.is_negative(), "powi on a negative enclosure");
        CertifiedReal::from_endpoints(
            self.lo.powi(n, bits, RoundingMode::Down),
            self.hi.powi(n, bits, RoundingMode::Up),
        )
    }

    pub fn sign(&self) -> CertifiedSign {
        if self.lo.is_positive() && !self.lo.is_zero() {
            CertifiedSign::Positive
        } else if self.hi.is_negative() && !self.hi.is_zero() {
            CertifiedSign::Negative
        } else {
            CertifiedSign::Indeterminate
        }
    }

    /// Certified strict ordering against another enclosure, when the
    /// intervals separate. Exact point coincidence reports `Equal`.
    pub fn cmp_certified(&self, rhs: &Self) -> Option<core::cmp::Ordering> {
        use core::cmp::Ordering;
        if self.hi < rhs.lo {
            return Some(Ordering::Less);
        }
        if self.lo > rhs.hi {
            return Some(Ordering::Greater);
        }
        if self.lo == self.hi && rhs.lo == rhs.hi && self.lo == rhs.lo {
            return Some(Ordering::Equal);
        }
        None
    }

    /// Certified `self ≥ rhs` (true also when both are the same exact point).
    pub fn ge_certified(&self, rhs: &Self) -> Option<bool> {
        match self.cmp_certified(rhs) {
            Some(core::cmp::Ordering::Less) => Some(false),
            Some(_) => Some(true),
            // Not separated; still certified when the lower end already
            // clears the other upper end.
            None => {
                if self.lo >= rhs.hi {
                    Some(true)
                } else {
                    None
                }
            }
        }
    }

    pub fn width(&self, bits: usize) -> BigFloat {
        self.hi.sub(&self.lo, bits, RoundingMode::Up)
    }

    /// Upper bound of the width as an `f64` (+∞ on overflow).
    pub fn width_f64(&self) -> f64 {
        bigfloat_to_f64_up(&self.width(64))
    }

    pub fn width_below(&self, tolerance: f64) -> bool {
        self.width_f64() <= tolerance
    }

    pub fn contains(&self, x: &BigFloat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Approximate midpoint for diagnostics; never used for certification.
    pub fn approx_f64(&self) -> f64 {
        (bigfloat_to_f64_down(&self.lo) + bigfloat_to_f64_up(&self.hi)) / 2.0
    }

    /// Decimal rendering of the lower endpoint, rounded toward −∞.
    pub fn decimal_lo(&self, ctx: &mut RealCtx) -> String {
        format_decimal(&self.lo, RoundingMode::Down, &mut ctx.cc)
    }

    /// Decimal rendering of the upper endpoint, rounded toward +∞.
    pub fn decimal_hi(&self, ctx: &mut RealCtx) -> String {
        format_decimal(&self.hi, RoundingMode::Up, &mut ctx.cc)
    }
}

fn format_decimal(x: &BigFloat, rm: RoundingMode, cc: &mut Consts) -> String {
    x.format(Radix::Dec, rm, cc).expect("decimal formatting")
}

/// Exact `BigUint` → `BigFloat` conversion (precision = bit length).
pub fn biguint_to_bigfloat_exact(n: &BigUint) -> BigFloat {
    if n.bits() == 0 {
        return BigFloat::from_u64(0, 64);
    }
    assert!(n.bits() < Exponent::MAX as u64, "value too wide");
    let words: Vec<u64> = n.to_u64_digits();
    BigFloat::from_words(&words, Sign::Pos, (words.len() * 64) as Exponent)
}

/// Enclosure of a `BigUint` rounded to `bits` of precision.
///
/// Only the top `bits` of mantissa are kept; the binary point is placed
/// by exponent, so enclosing a huge integer stays cheap.
pub fn biguint_to_certified(n: &BigUint, bits: usize) -> CertifiedReal {
    let total = n.bits() as usize;
    if total <= bits {
        return CertifiedReal::exact_biguint(n);
    }
    assert!(total < Exponent::MAX as usize, "value too wide");
    let shift = total - bits;
    let trunc = n >> shift;
    // value = int(words) · 2^(e − 64·len), so e = shift + 64·len
    let words_lo = trunc.to_u64_digits();
    let lo = BigFloat::from_words(&words_lo, Sign::Pos, (shift + 64 * words_lo.len()) as Exponent);
    let words_hi = (&trunc + 1u32).to_u64_digits();
    let hi = BigFloat::from_words(&words_hi, Sign::Pos, (shift + 64 * words_hi.len()) as Exponent);
    CertifiedReal::from_endpoints(lo, hi)
}

/// `f64` lower bound of a big float (rounds toward −∞).
pub fn bigfloat_to_f64_down(x: &BigFloat) -> f64 {
    bigfloat_to_f64(x, false)
}

/// `f64` upper bound of a big float (rounds toward +∞).
pub fn bigfloat_to_f64_up(x: &BigFloat) -> f64 {
    bigfloat_to_f64(x, true)
}

fn bigfloat_to_f64(x: &BigFloat, round_up: bool) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let Some((words, _p, sign, e, _inexact)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    // Top word carries the leading 64 mantissa bits (normalized).
    let top = *words.last().expect("nonempty mantissa");
    let mut mag = top as f64; // may round either way
    // Pad by one part in 2^52 in the requested direction to stay rigorous
    // against both this rounding and the discarded low words.
    let pad = mag * (f64::EPSILON / 2.0) * 2.0;
    let outward = (sign == Sign::Pos) == round_up;
    if outward {
        mag += pad;
    } else {
        mag -= pad;
    }
    let v = mag * exp2i(e as i64 - 64);
    if sign == Sign::Pos {
        v
    } else {
        -v
    }
}

fn exp2i(e: i64) -> f64 {
    if e >= 1024 {
        f64::INFINITY
    } else if e < -1074 {
        0.0
    } else if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else {
        // subnormal range
        f64::from_bits(1u64 << (e + 1074))
    }
}
