//! Interval types: exact rational intervals for root isolation and
//! outward-rounded `f64` intervals for the fast sign path.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::Sign;

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RationalInterval {
    /// Builds `[lo, hi]`; returns `None` when `lo > hi`.
    pub fn new(lo: BigRational, hi: BigRational) -> Option<Self> {
        if lo > hi {
            None
        } else {
            Some(Self { lo, hi })
        }
    }

    pub fn point(x: BigRational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn from_ints(lo: i64, hi: i64) -> Option<Self> {
        Self::new(BigRational::from_integer(lo.into()), BigRational::from_integer(hi.into()))
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// True when `other` lies inside `self`.
    pub fn encloses(&self, other: &RationalInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &RationalInterval) -> Option<RationalInterval> {
        let lo = if self.lo > other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi < other.hi { &self.hi } else { &other.hi };
        RationalInterval::new(lo.clone(), hi.clone())
    }

    /// Outward-rounded `f64` enclosure.
    pub fn to_f64_interval(&self) -> F64Interval {
        let lo = F64Interval::from_ratio(&self.lo);
        let hi = F64Interval::from_ratio(&self.hi);
        F64Interval { lo: lo.lo, hi: hi.hi }
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// `f64` interval whose operations round outward, so the true value of any
/// computation on contained reals stays inside the result.
///
/// Each primitive operation is rounded to nearest by the FPU (error at most
/// half an ulp); stepping one ulp outward afterwards restores containment.
/// Non-finite results make the interval useless, which callers detect with
/// [`F64Interval::is_finite`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct F64Interval {
    pub lo: f64,
    pub hi: f64,
}

impl F64Interval {
    pub const ENTIRE: F64Interval = F64Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        if n.bits() <= 53 {
            // exactly representable
            return Self::point(n.to_f64().unwrap_or(f64::NAN));
        }
        match n.to_f64() {
            Some(x) if x.is_finite() => Self { lo: x.next_down(), hi: x.next_up() },
            _ => Self::ENTIRE,
        }
    }

    pub fn from_ratio(r: &BigRational) -> Self {
        let n = Self::from_bigint(r.numer());
        if r.denom() == &BigInt::from(1) {
            return n;
        }
        n.div(&Self::from_bigint(r.denom()))
    }

    fn widen(lo: f64, hi: f64) -> Self {
        if lo.is_nan() || hi.is_nan() {
            return Self::ENTIRE;
        }
        Self { lo: lo.next_down(), hi: hi.next_up() }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::widen(self.lo + o.lo, self.hi + o.hi)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::widen(self.lo - o.hi, self.hi - o.lo)
    }

    pub fn neg(&self) -> Self {
        Self { lo: -self.hi, hi: -self.lo }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        if p.iter().any(|x| x.is_nan()) {
            return Self::ENTIRE;
        }
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::widen(lo, hi)
    }

    /// Division; the entire line when the divisor straddles zero.
    pub fn div(&self, o: &Self) -> Self {
        if o.lo <= 0.0 && o.hi >= 0.0 {
            return Self::ENTIRE;
        }
        let q = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        if q.iter().any(|x| x.is_nan()) {
            return Self::ENTIRE;
        }
        let lo = q.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::widen(lo, hi)
    }

    pub fn abs(&self) -> Self {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            Self { lo: 0.0, hi: (-self.lo).max(self.hi) }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        if self.is_finite() {
            self.lo + (self.hi - self.lo) / 2.0
        } else {
            f64::NAN
        }
    }

    /// Certain sign, if the interval excludes zero (or is exactly zero).
    pub fn sign(&self) -> Option<Sign> {
        if self.lo > 0.0 {
            Some(Sign::Positive)
        } else if self.hi < 0.0 {
            Some(Sign::Negative)
        } else if self.lo == 0.0 && self.hi == 0.0 {
            Some(Sign::Zero)
        } else {
            None
        }
    }

    pub fn overlaps(&self, o: &Self) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    /// Horner evaluation of an integer polynomial over the interval.
    pub fn eval_poly(coeffs: &[BigInt], x: &Self) -> Self {
        let mut acc = Self::point(0.0);
        for c in coeffs.iter().rev() {
            acc = acc.mul(x).add(&Self::from_bigint(c));
        }
        acc
    }
}

/// Exact rational interval Horner evaluation of an integer polynomial.
pub(crate) fn eval_poly_rational_interval(coeffs: &[BigInt], iv: &RationalInterval) -> (BigRational, BigRational) {
    if iv.is_point() {
        let v = super::poly::eval_coeffs_rational(coeffs, &iv.lo);
        return (v.clone(), v);
    }
    let mut it = coeffs.iter().rev();
    let top = match it.next() {
        Some(c) => BigRational::from_integer(c.clone()),
        None => return (BigRational::zero(), BigRational::zero()),
    };
    let mut lo = top.clone();
    let mut hi = top;
    for c in it {
        let c = BigRational::from_integer(c.clone());
        let p = [&lo * &iv.lo, &lo * &iv.hi, &hi * &iv.lo, &hi * &iv.hi];
        let mut mn = p[0].clone();
        let mut mx = p[0].clone();
        for v in &p[1..] {
            if v < &mn {
                mn = v.clone();
            }
            if v > &mx {
                mx = v.clone();
            }
        }
        lo = mn + &c;
        hi = mx + c;
    }
    (lo, hi)
}

pub(crate) fn rational_sign(r: &BigRational) -> Sign {
    if r.is_positive() {
        Sign::Positive
    } else if r.is_negative() {
        Sign::Negative
    } else {
        Sign::Zero
    }
}
