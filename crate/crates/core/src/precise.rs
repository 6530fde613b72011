//! Fixed-point evaluation of `arccos(x)/π` with a rigorous error radius.
//!
//! Values are enclosures `exact + mid·2^-w ± radius·2^-w`: the rational part
//! carries the arguments where `arccos(x)/π` is rational (`x ∈ {0, ±1/2, ±1}`,
//! the only rational cosines of rational multiples of π), and the fixed-point
//! part carries everything else. Radii count truncation errors operation by
//! operation, with input errors propagated through derivative bounds.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::rational::{ratio, Rational};

/// Extra working bits on top of the requested precision.
const GUARD_BITS: u32 = 24;

/// `exact + mid/2^bits`, with absolute error at most `radius/2^bits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub exact: Rational,
    pub mid: BigInt,
    pub radius: BigInt,
    pub bits: u32,
}

impl Enclosure {
    pub fn zero(bits: u32) -> Self {
        Enclosure { exact: Rational::zero(), mid: BigInt::zero(), radius: BigInt::zero(), bits }
    }

    pub fn exact(q: Rational, bits: u32) -> Self {
        Enclosure { exact: q, ..Self::zero(bits) }
    }

    /// True when no fixed-point part is present, so the value is exactly `self.exact`.
    pub fn is_exact(&self) -> bool {
        self.mid.is_zero() && self.radius.is_zero()
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        assert_eq!(self.bits, other.bits, "enclosures at different precisions");
        Enclosure {
            exact: &self.exact + &other.exact,
            mid: &self.mid + &other.mid,
            radius: &self.radius + &other.radius,
            bits: self.bits,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Enclosure {
        Enclosure {
            exact: &self.exact * Rational::from_integer(k.clone()),
            mid: &self.mid * k,
            radius: &self.radius * k.abs(),
            bits: self.bits,
        }
    }

    fn fixed(&self, v: &BigInt) -> Rational {
        Rational::new(v.clone(), BigInt::one() << self.bits)
    }

    pub fn lower(&self) -> Rational {
        &self.exact + self.fixed(&(&self.mid - &self.radius))
    }

    pub fn upper(&self) -> Rational {
        &self.exact + self.fixed(&(&self.mid + &self.radius))
    }

    pub fn midpoint(&self) -> Rational {
        &self.exact + self.fixed(&self.mid)
    }

    pub fn to_f64(&self) -> f64 {
        crate::rational::to_f64(&self.midpoint())
    }

    pub fn radius_f64(&self) -> f64 {
        crate::rational::to_f64(&self.fixed(&self.radius))
    }

    /// `⌈value⌉`, provided no integer lies within `2^-guard` of the enclosure.
    pub fn certified_ceil(&self, guard: u32) -> Option<BigInt> {
        if self.is_exact() {
            return Some(self.exact.ceil().to_integer());
        }
        let g = Rational::new(BigInt::one(), BigInt::one() << guard);
        let lo = self.lower() - &g;
        let hi = self.upper() + &g;
        let below = lo.floor().to_integer();
        (hi.floor().to_integer() == below && !lo.is_integer()).then_some(below + 1)
    }
}

fn isqrt(v: &BigInt) -> BigInt {
    v.sqrt()
}

/// `Σ (-1)^k / ((2k+1) m^{2k+1})` at scale `2^w`, with its error in ulps.
fn atan_inverse(m: u32, w: u32) -> (BigInt, u64) {
    let m = BigInt::from(m);
    let m2 = &m * &m;
    let mut power = (BigInt::one() << w) / &m;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let term = &power / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &m2;
        k += 1;
    }
    // each power truncation and each division costs at most one ulp; the tail is below one ulp
    (sum, 2 * k + 2)
}

/// π at scale `2^w` with its error in ulps.
pub fn pi_fixed(w: u32) -> (BigInt, u64) {
    let (a5, e5) = atan_inverse(5, w);
    let (a239, e239) = atan_inverse(239, w);
    (BigInt::from(16) * a5 - BigInt::from(4) * a239, 16 * e5 + 4 * e239)
}

/// `atan(t)` for `0 ≤ t ≤ 1/4` at scale `2^w`; returns the ulps added by truncation.
fn atan_small(t: &BigInt, w: u32) -> (BigInt, u64) {
    let t2 = (t * t) >> w;
    let mut p = t.clone();
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let term = &p / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        p = (&p * &t2) >> w;
        k += 1;
    }
    // t² ≤ 1/16 contracts inherited power errors, so each power stays within 2 ulps
    (sum, 3 * k + 2)
}

/// `t ↦ t/(1 + √(1+t²))`, so that `atan(t) = 2·atan(t')`; the map is 1/2-Lipschitz.
fn halve_angle(t: &BigInt, err: u64, w: u32) -> (BigInt, u64) {
    let one = BigInt::one() << w;
    let s = isqrt(&((&one * &one) + t * t));
    let t_next = (t << w) / (one + s);
    (t_next, err.div_ceil(2) + 2)
}

/// Fixed-point `arccos(x)/π` for `0 < x < 1`, at scale `2^w`.
fn arccos_turns_fixed(x: &Rational, w: u32) -> (BigInt, u64) {
    // arccos x = 2·atan(√((1-x)/(1+x))), with t ∈ (0, 1)
    let q = (Rational::one() - x) / (Rational::one() + x);
    let scaled = (q.numer() << (2 * w)) / q.denom();
    let t = isqrt(&scaled);
    let (t, e) = halve_angle(&t, 2, w);
    let (t, e) = halve_angle(&t, e, w);
    let (a, added) = atan_small(&t, w);
    // arccos = 8·atan(t'')
    let arccos = a * BigInt::from(8);
    let err_arccos = 8 * (e + added);
    let (pi, e_pi) = pi_fixed(w);
    let turns = (arccos << w) / &pi;
    // π > 3 divides the numerator error; the ratio is below 1 so π's error enters at most once
    (turns, err_arccos / 3 + e_pi + 2)
}

/// Exact `arccos(x)/π` for the rational arguments where it is rational.
pub fn exact_turns(x: &Rational) -> Option<Rational> {
    let table = [
        (ratio(-1, 1), ratio(1, 1)),
        (ratio(-1, 2), ratio(2, 3)),
        (ratio(0, 1), ratio(1, 2)),
        (ratio(1, 2), ratio(1, 3)),
        (ratio(1, 1), ratio(0, 1)),
    ];
    table.into_iter().find(|(c, _)| c == x).map(|(_, v)| v)
}

/// `arccos(x)/π` for rational `x ∈ [-1, 1]`, with at least `bits` correct fractional bits.
pub fn arccos_over_pi(x: &Rational, bits: u32) -> Result<Enclosure, Error> {
    let w = bits + GUARD_BITS;
    if x.abs() > Rational::one() {
        return Err(Error::Domain("arccos argument outside [-1, 1]"));
    }
    if let Some(v) = exact_turns(x) {
        return Ok(Enclosure::exact(v, w));
    }
    if x.is_negative() {
        // arccos(-x) = π - arccos(x)
        let (v, e) = arccos_turns_fixed(&-x, w);
        return Ok(Enclosure { exact: Rational::one(), mid: -v, radius: BigInt::from(e), bits: w });
    }
    let (v, e) = arccos_turns_fixed(x, w);
    Ok(Enclosure { exact: Rational::zero(), mid: v, radius: BigInt::from(e), bits: w })
}

/// Minimum of the Goemans–Williamson ratio `(2/π)·θ/(1 - cos θ)` on `(0, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GwAlpha {
    pub theta: f64,
    pub alpha: f64,
}

pub fn gw_objective(theta: f64) -> f64 {
    2.0 / core::f64::consts::PI * theta / (1.0 - libm::cos(theta))
}

/// Bisection on the stationarity condition `1 - cos θ - θ sin θ = 0` over `[2, 3]`.
pub fn gw_alpha_constant() -> GwAlpha {
    let g = |t: f64| 1.0 - libm::cos(t) - t * libm::sin(t);
    let (mut lo, mut hi) = (2.0f64, 3.0f64);
    debug_assert!(g(lo) < 0.0 && g(hi) > 0.0);
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    GwAlpha { theta, alpha: gw_objective(theta) }
}

/// `α_G = (2/π)·arccos(λ₁/d)/(1 - λ₁/d)`.
pub fn performance_ratio(lambda1: &Rational, d: &Rational) -> Result<f64, Error> {
    if !d.is_positive() {
        return Err(Error::Domain("performance ratio needs a positive degree"));
    }
    let x = lambda1 / d;
    if x < -Rational::one() || !x.is_negative() {
        return Err(Error::Domain("performance ratio needs -1 <= lambda1/d < 0"));
    }
    let turns = arccos_over_pi(&x, 64)?;
    let factor = Rational::from_integer(2.into()) / (Rational::one() - &x);
    if turns.is_exact() {
        return Ok(crate::rational::to_f64(&(turns.exact * factor)));
    }
    Ok(turns.to_f64() * crate::rational::to_f64(&factor))
}

/// Digits of `v/2^bits` as an `f64`, for diagnostics only.
pub fn fixed_to_f64(v: &BigInt, bits: u32) -> f64 {
    let (sign, mag) = (v.sign(), v.abs());
    let shift = bits.saturating_sub(60);
    let top = (&mag >> shift).to_f64().unwrap_or(f64::INFINITY);
    let value = top / libm::pow(2.0, f64::from(bits - shift));
    if sign == Sign::Minus {
        -value
    } else {
        value
    }
}
