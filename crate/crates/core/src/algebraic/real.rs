//! Real root isolation and the `AlgebraicReal` type.

use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::interval::{F64Interval, RationalInterval};
use super::poly::{sign_i8, IntPolynomial};
use super::AlgebraicError;

/// Sturm sequence of a squarefree polynomial.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    seq: Vec<IntPolynomial>,
}

impl SturmSequence {
    pub fn new(p: &IntPolynomial) -> Self {
        let mut seq = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            seq.push(d);
        }
        while seq.len() >= 2 {
            let n = seq.len();
            if seq[n - 1].deg() == 0 {
                break;
            }
            let r = seq[n - 2].pseudo_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            // negate, then divide by the positive content
            let g = r.content();
            let next = IntPolynomial::new(r.coeffs().iter().map(|c| -(c / &g)).collect());
            seq.push(next);
        }
        Self { seq }
    }

    fn variations(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        Self::variations(self.seq.iter().map(|p| p.sign_at(x)))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::variations(self.seq.iter().map(|p| {
            let s = sign_i8(p.leading().unwrap());
            if !positive && p.deg() % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_half_open(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    /// Number of distinct real roots in the closed interval `[a, b]`.
    pub fn count_closed(&self, a: &BigRational, b: &BigRational) -> usize {
        let at_a = usize::from(self.seq[0].sign_at(a) == 0);
        self.count_half_open(a, b) + at_a
    }

    pub fn count_real(&self) -> usize {
        self.variations_at_infinity(false).saturating_sub(self.variations_at_infinity(true))
    }
}

/// Power of two strictly exceeding the modulus of every complex root.
pub fn root_bound(p: &IntPolynomial) -> BigRational {
    let lc = p.leading().expect("nonzero polynomial").abs();
    let max = p.coeffs()[..p.deg()].iter().map(|c| c.abs()).max().unwrap_or_default();
    // Cauchy: 1 + max|a_i| / |a_n|
    let bound = BigRational::one() + BigRational::new(max, lc);
    let mut b = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    while b <= bound {
        b *= &two;
    }
    b
}

/// Isolates the distinct real roots of `p` (its squarefree part).
///
/// Intervals are closed, pairwise disjoint and sorted; the polynomial is
/// nonzero at every endpoint, so each interval brackets a sign change.
pub fn isolate_real_roots(p: &IntPolynomial) -> Vec<RationalInterval> {
    if p.deg() == 0 {
        return Vec::new();
    }
    let s = p.squarefree_part();
    let sturm = SturmSequence::new(&s);
    let b = root_bound(&s);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = sturm.count_half_open(&lo, &hi);
        match n {
            0 => {}
            1 => out.push(RationalInterval { lo, hi }),
            _ => {
                let mid = split_point(&s, &lo, &hi);
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    // neighbours from the same split share an endpoint; pull the left one in
    for i in 1..out.len() {
        while out[i - 1].hi >= out[i].lo {
            let RationalInterval { lo, hi } = out[i - 1].clone();
            let mid = split_point(&s, &lo, &hi);
            out[i - 1] = if s.sign_at(&lo) * s.sign_at(&mid) < 0 {
                RationalInterval { lo, hi: mid }
            } else {
                RationalInterval { lo: mid, hi }
            };
        }
    }
    out
}

/// A point strictly inside `(lo, hi)` where `p` does not vanish.
fn split_point(p: &IntPolynomial, lo: &BigRational, hi: &BigRational) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    let mid = (lo + hi) / &two;
    if p.sign_at(&mid) != 0 {
        return mid;
    }
    let mut step = (hi - lo) / BigRational::from_integer(BigInt::from(4));
    loop {
        let c = &mid + &step;
        if p.sign_at(&c) != 0 {
            return c;
        }
        step /= &two;
    }
}

#[derive(Clone, Debug)]
struct IsoState {
    iso: RationalInterval,
    /// sign of the defining polynomial at `iso.lo` (0 when `iso` is a point)
    lo_sign: i8,
    approx: F64Interval,
    /// `iso` is narrow enough that `approx` is within a few ulps
    fine: bool,
}

impl IsoState {
    fn new(iso: RationalInterval, lo_sign: i8) -> Self {
        let fine = iso.width() <= fine_width();
        Self { approx: iso.to_f64_interval(), iso, lo_sign, fine }
    }
}

fn fine_width() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << 64)
}

/// A real algebraic number: a squarefree defining polynomial together with
/// an isolating interval containing exactly one of its roots.
///
/// The cached interval only ever shrinks. It sits behind a lock so that a
/// shared number (the context of many field elements) can be refined from
/// any thread; readers always observe a valid, possibly wider, interval.
pub struct AlgebraicReal {
    defpoly: IntPolynomial,
    state: RwLock<IsoState>,
}

impl AlgebraicReal {
    /// Root of `defpoly` inside `iso`.
    pub fn new(defpoly: IntPolynomial, iso: RationalInterval) -> Result<Self, AlgebraicError> {
        if defpoly.is_zero() {
            return Err(AlgebraicError::ZeroPolynomial);
        }
        let p = defpoly.primitive();
        if p.deg() == 0 {
            return Err(AlgebraicError::NotIsolating { lo: iso.lo.to_string(), hi: iso.hi.to_string(), count: 0 });
        }
        if !p.is_squarefree() {
            return Err(AlgebraicError::NotSquarefree);
        }
        let count = SturmSequence::new(&p).count_closed(&iso.lo, &iso.hi);
        if count != 1 {
            return Err(AlgebraicError::NotIsolating { lo: iso.lo.to_string(), hi: iso.hi.to_string(), count });
        }
        let state = if p.sign_at(&iso.lo) == 0 {
            IsoState::new(RationalInterval::point(iso.lo), 0)
        } else if p.sign_at(&iso.hi) == 0 {
            IsoState::new(RationalInterval::point(iso.hi), 0)
        } else {
            let s = p.sign_at(&iso.lo);
            IsoState::new(iso, s)
        };
        Ok(Self { defpoly: p, state: RwLock::new(state) })
    }

    /// Root of `defpoly` in `[lo, hi]`.
    pub fn from_root_in(defpoly: IntPolynomial, lo: BigRational, hi: BigRational) -> Result<Self, AlgebraicError> {
        let iso = RationalInterval::new(lo, hi).ok_or(AlgebraicError::InvalidInterval)?;
        Self::new(defpoly, iso)
    }

    /// Degree-one number `r`, with defining polynomial `den·x − num`.
    pub fn from_rational(r: &BigRational) -> Self {
        let p = IntPolynomial::new(vec![-r.numer().clone(), r.denom().clone()]);
        Self { defpoly: p, state: RwLock::new(IsoState::new(RationalInterval::point(r.clone()), 0)) }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(n.into()))
    }

    /// All distinct real roots of `p`, ascending, each over the squarefree part.
    pub fn real_roots(p: &IntPolynomial) -> Vec<AlgebraicReal> {
        let s = p.squarefree_part();
        isolate_real_roots(&s)
            .into_iter()
            .map(|iv| AlgebraicReal::new(s.clone(), iv).expect("isolating interval"))
            .collect()
    }

    /// Largest real root of `p`, if any.
    pub fn largest_real_root(p: &IntPolynomial) -> Option<AlgebraicReal> {
        Self::real_roots(p).pop()
    }

    pub fn defpoly(&self) -> &IntPolynomial {
        &self.defpoly
    }

    pub fn degree(&self) -> usize {
        self.defpoly.deg()
    }

    /// Snapshot of the current isolating interval.
    pub fn iso(&self) -> RationalInterval {
        self.state.read().unwrap().iso.clone()
    }

    /// The exact value when the isolating interval has collapsed to a point
    /// or the defining polynomial is linear.
    pub fn rational_value(&self) -> Option<BigRational> {
        if self.defpoly.deg() == 1 {
            let c = self.defpoly.coeffs();
            return Some(BigRational::new(-c[0].clone(), c[1].clone()));
        }
        let st = self.state.read().unwrap();
        st.iso.is_point().then(|| st.iso.lo.clone())
    }

    /// Shrinks the cached interval to width at most `eps` and returns it.
    pub fn refine(&self, eps: &BigRational) -> Result<RationalInterval, AlgebraicError> {
        if !eps.is_positive() {
            return Err(AlgebraicError::NonPositiveTolerance);
        }
        let snapshot = self.state.read().unwrap().clone();
        if snapshot.iso.width() <= *eps {
            return Ok(snapshot.iso);
        }
        let mut iso = snapshot.iso;
        let mut lo_sign = snapshot.lo_sign;
        let two = BigRational::from_integer(BigInt::from(2));
        while iso.width() > *eps {
            let mid = (&iso.lo + &iso.hi) / &two;
            let s = self.defpoly.sign_at(&mid);
            if s == 0 {
                iso = RationalInterval::point(mid);
                lo_sign = 0;
                break;
            } else if s == lo_sign {
                iso.lo = mid;
            } else {
                iso.hi = mid;
            }
        }
        let mut st = self.state.write().unwrap();
        if iso.width() < st.iso.width() {
            *st = IsoState::new(iso, lo_sign);
        }
        Ok(st.iso.clone())
    }

    /// Outward-rounded `f64` enclosure, refined to near machine precision.
    pub fn approx(&self) -> F64Interval {
        {
            let st = self.state.read().unwrap();
            if st.fine {
                return st.approx;
            }
        }
        self.refine(&fine_width()).expect("positive tolerance");
        self.state.read().unwrap().approx
    }

    pub fn to_f64(&self) -> f64 {
        self.approx().mid()
    }

    /// Whether two numbers are equal (same defining polynomial and root).
    pub fn same_number(&self, other: &AlgebraicReal) -> bool {
        if std::ptr::eq(self, other) {
            return true;
        }
        // equal iff gcd(defpolys) has a root in both isolating intervals;
        // each interval holds one root of its own polynomial, so that root
        // is then shared
        let g = self.defpoly.gcd(&other.defpoly);
        if g.deg() == 0 {
            return false;
        }
        match self.iso().intersect(&other.iso()) {
            None => false,
            Some(iv) => SturmSequence::new(&g).count_closed(&iv.lo, &iv.hi) == 1,
        }
    }

    /// Exact comparison of the number with a rational.
    pub fn cmp_rational(&self, r: &BigRational) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        loop {
            let iso = self.iso();
            if iso.is_point() {
                return iso.lo.cmp(r);
            }
            // the root lies strictly inside a nondegenerate interval
            if *r <= iso.lo {
                return Ordering::Greater;
            }
            if *r >= iso.hi {
                return Ordering::Less;
            }
            if self.defpoly.sign_at(r) == 0 {
                return Ordering::Equal;
            }
            let w = iso.width() / BigRational::from_integer(BigInt::from(4));
            self.refine(&w).expect("positive tolerance");
        }
    }
}

impl Clone for AlgebraicReal {
    fn clone(&self) -> Self {
        Self { defpoly: self.defpoly.clone(), state: RwLock::new(self.state.read().unwrap().clone()) }
    }
}

impl fmt::Debug for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebraicReal")
            .field("defpoly", &self.defpoly.to_string())
            .field("iso", &self.iso().to_string())
            .finish()
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of {} in {}", self.defpoly, self.iso())
    }
}
