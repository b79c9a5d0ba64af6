use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use super::interval::{eval_poly_rational_interval, rational_sign, F64Interval, RationalInterval};
use super::poly::{
    format_term, from_rational_scaled, mul_coeffs, parse_polynomial_in, rational_inverse_mod, to_rational,
    IntPolynomial,
};
use super::{AlgebraicError, Context, Sign};

/// Interval width after which the exact sign procedure also tries the gcd
/// zero test.
const EXACT_ZERO_TEST_BITS: usize = 64;

/// An element of `Q(q)`: `num(q) / den` with `deg num < deg defpoly(q)`.
///
/// Stored canonically: `num` reduced modulo the defining polynomial,
/// `den > 0`, `gcd(content(num), den) = 1`, and `den = 1` for zero. When the
/// defining polynomial is irreducible this form is unique; otherwise equal
/// values may have distinct representations, which is why equality is
/// decided through [`FieldElement::sign`].
#[derive(Clone)]
pub struct FieldElement {
    num: IntPolynomial,
    den: BigInt,
    ctx: Context,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic on field elements.
pub fn element_arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement, AlgebraicError> {
    if !a.same_context(b) {
        return Err(AlgebraicError::ContextMismatch);
    }
    Ok(match op {
        ArithOp::Add => a.add_unchecked(b),
        ArithOp::Sub => a.add_unchecked(&b.neg()),
        ArithOp::Mul => a.mul_unchecked(b),
        ArithOp::Div => a.mul_unchecked(&b.inv()?),
    })
}

fn reduce(mut r: Vec<BigInt>, mut den: BigInt, p: &IntPolynomial) -> (Vec<BigInt>, BigInt) {
    let pc = p.coeffs();
    let d = p.deg();
    let lc = &pc[d];
    let monic = lc.is_one();
    while r.last().is_some_and(|c| c.is_zero()) {
        r.pop();
    }
    while r.len() > d {
        let top = r.pop().unwrap();
        let shift = r.len() - d;
        if !monic {
            for c in r.iter_mut() {
                *c *= lc;
            }
            den *= lc;
        }
        for (i, pi) in pc[..d].iter().enumerate() {
            if !pi.is_zero() {
                r[i + shift] -= &top * pi;
            }
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    (r, den)
}

impl FieldElement {
    /// `num(q) / den`, normalized. Panics if `den` is zero.
    pub fn from_parts(ctx: &Context, num: IntPolynomial, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (r, mut den) = reduce(num.into_coeffs(), den, ctx.defpoly());
        let mut num = IntPolynomial::new(r);
        if den.is_negative() {
            den = -den;
            num = -num;
        }
        if num.is_zero() {
            den = BigInt::one();
        } else {
            let g = num.content().gcd(&den);
            if !g.is_one() {
                num = IntPolynomial::new(num.coeffs().iter().map(|c| c / &g).collect());
                den /= g;
            }
        }
        Self { num, den, ctx: Arc::clone(ctx) }
    }

    pub fn zero(ctx: &Context) -> Self {
        Self { num: IntPolynomial::zero(), den: BigInt::one(), ctx: Arc::clone(ctx) }
    }

    pub fn one(ctx: &Context) -> Self {
        Self::from_integer(ctx, 1)
    }

    pub fn from_integer(ctx: &Context, n: i64) -> Self {
        Self::from_bigint(ctx, BigInt::from(n))
    }

    pub fn from_bigint(ctx: &Context, n: BigInt) -> Self {
        Self::from_parts(ctx, IntPolynomial::constant(n), BigInt::one())
    }

    pub fn from_rational(ctx: &Context, r: &BigRational) -> Self {
        Self::from_parts(ctx, IntPolynomial::constant(r.numer().clone()), r.denom().clone())
    }

    /// The generator `q` itself.
    pub fn generator(ctx: &Context) -> Self {
        Self::from_parts(ctx, IntPolynomial::monomial(1), BigInt::one())
    }

    /// `Σ c_i q^i` for rational coefficients.
    pub fn from_rational_coeffs(ctx: &Context, coeffs: &[BigRational]) -> Self {
        let (num, den) = from_rational_scaled(&coeffs.to_vec());
        Self::from_parts(ctx, num, den)
    }

    /// `Σ c_i q^i` for integer coefficients.
    pub fn from_int_coeffs(ctx: &Context, coeffs: &[i64]) -> Self {
        Self::from_parts(ctx, IntPolynomial::from_i64s(coeffs), BigInt::one())
    }

    pub fn num(&self) -> &IntPolynomial {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    /// True when both elements live in the same field with the same
    /// representation modulus.
    pub fn same_context(&self, other: &FieldElement) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx)
            || (self.ctx.defpoly() == other.ctx.defpoly() && self.ctx.same_number(&other.ctx))
    }

    /// Zero in the canonical form (sufficient, not necessary, for value zero).
    pub fn is_structurally_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == Sign::Zero
    }

    /// Rational value if the numerator is constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.num.degree() {
            None => Some(BigRational::zero()),
            Some(0) => Some(BigRational::new(self.num.coeff(0), self.den.clone())),
            _ => None,
        }
    }

    fn add_unchecked(&self, o: &FieldElement) -> FieldElement {
        if o.num.is_zero() {
            return self.clone();
        }
        if self.num.is_zero() {
            return o.clone();
        }
        let l = self.den.lcm(&o.den);
        let fa = &l / &self.den;
        let fb = &l / &o.den;
        let n = self.num.coeffs().len().max(o.num.coeffs().len());
        let coeffs = (0..n).map(|i| self.num.coeff(i) * &fa + o.num.coeff(i) * &fb).collect();
        FieldElement::from_parts(&self.ctx, IntPolynomial::new(coeffs), l)
    }

    fn mul_unchecked(&self, o: &FieldElement) -> FieldElement {
        if self.num.is_zero() || o.num.is_zero() {
            return FieldElement::zero(&self.ctx);
        }
        FieldElement::from_parts(
            &self.ctx,
            IntPolynomial::new(mul_coeffs(self.num.coeffs(), o.num.coeffs())),
            &self.den * &o.den,
        )
    }

    pub fn checked_add(&self, o: &FieldElement) -> Result<FieldElement, AlgebraicError> {
        element_arith(self, o, ArithOp::Add)
    }

    pub fn checked_sub(&self, o: &FieldElement) -> Result<FieldElement, AlgebraicError> {
        element_arith(self, o, ArithOp::Sub)
    }

    pub fn checked_mul(&self, o: &FieldElement) -> Result<FieldElement, AlgebraicError> {
        element_arith(self, o, ArithOp::Mul)
    }

    pub fn checked_div(&self, o: &FieldElement) -> Result<FieldElement, AlgebraicError> {
        element_arith(self, o, ArithOp::Div)
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement { num: -self.num.clone(), den: self.den.clone(), ctx: Arc::clone(&self.ctx) }
    }

    pub fn abs(&self) -> FieldElement {
        if self.sign() == Sign::Negative {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<FieldElement, AlgebraicError> {
        if let Some(r) = self.as_rational() {
            if r.is_zero() {
                return Err(AlgebraicError::DivisionByZero);
            }
            return Ok(FieldElement::from_rational(&self.ctx, &r.recip()));
        }
        if self.sign() == Sign::Zero {
            return Err(AlgebraicError::DivisionByZero);
        }
        // the root is not a root of g = gcd(num, p), so it is a root of p/g,
        // which is coprime to num
        let p = self.ctx.defpoly();
        let g = self.num.gcd(p);
        let modulus = if g.deg() > 0 { p.div_exact(&g).expect("gcd divides") } else { p.clone() };
        let s = rational_inverse_mod(&to_rational(&self.num), &to_rational(&modulus))
            .expect("coprime after removing the gcd");
        let (snum, sden) = from_rational_scaled(&s);
        // (num/den)^-1 = den · s
        Ok(FieldElement::from_parts(
            &self.ctx,
            IntPolynomial::new(snum.coeffs().iter().map(|c| c * &self.den).collect()),
            sden,
        ))
    }

    pub fn pow(&self, mut e: u32) -> FieldElement {
        let mut base = self.clone();
        let mut acc = FieldElement::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// `q · self`.
    pub fn mul_generator(&self) -> FieldElement {
        if self.num.is_zero() {
            return self.clone();
        }
        let mut c = Vec::with_capacity(self.num.coeffs().len() + 1);
        c.push(BigInt::zero());
        c.extend(self.num.coeffs().iter().cloned());
        FieldElement::from_parts(&self.ctx, IntPolynomial::new(c), self.den.clone())
    }

    /// `r · self` for a rational scalar.
    pub fn scale(&self, r: &BigRational) -> FieldElement {
        FieldElement::from_parts(
            &self.ctx,
            IntPolynomial::new(self.num.coeffs().iter().map(|c| c * r.numer()).collect()),
            &self.den * r.denom(),
        )
    }

    /// Exact sign of the value at the root of the context.
    ///
    /// Fast path: outward-rounded `f64` evaluation at a tight enclosure of
    /// the root. Otherwise the isolating interval is refined and the
    /// numerator evaluated in exact rational interval arithmetic; once the
    /// interval is narrower than `2^-64` the gcd of numerator and defining
    /// polynomial decides whether the value is exactly zero, after which
    /// refinement continues until the sign is constant (this terminates
    /// because the value is then known to be nonzero).
    pub fn sign(&self) -> Sign {
        match self.num.degree() {
            None => return Sign::Zero,
            Some(0) => return Sign::from_i8(crate::algebraic::poly::sign_i8(&self.num.coeffs()[0])),
            _ => {}
        }
        let a = self.ctx.approx();
        match F64Interval::eval_poly(self.num.coeffs(), &a).sign() {
            Some(s @ (Sign::Positive | Sign::Negative)) => s,
            _ => self.sign_exact(),
        }
    }

    fn sign_exact(&self) -> Sign {
        let threshold = BigRational::new(BigInt::one(), BigInt::one() << EXACT_ZERO_TEST_BITS);
        let shrink = BigRational::from_integer(BigInt::one() << 16);
        let mut zero_tested = false;
        loop {
            let iso = self.ctx.iso();
            if iso.is_point() {
                return rational_sign(&self.num.eval_rational(&iso.lo));
            }
            let (lo, hi) = eval_poly_rational_interval(self.num.coeffs(), &iso);
            if lo.is_positive() {
                return Sign::Positive;
            }
            if hi.is_negative() {
                return Sign::Negative;
            }
            let width = iso.width();
            if !zero_tested && width <= threshold {
                zero_tested = true;
                if self.vanishes_in(&iso) {
                    return Sign::Zero;
                }
            }
            let target = if zero_tested || width <= threshold { width / &shrink } else { threshold.clone() };
            self.ctx.refine(&target).expect("positive tolerance");
        }
    }

    /// Whether `gcd(num, defpoly)` has its root inside the isolating interval.
    fn vanishes_in(&self, iso: &RationalInterval) -> bool {
        let g = self.num.gcd(self.ctx.defpoly());
        if g.deg() == 0 {
            return false;
        }
        // endpoints are not roots of defpoly, hence not of g; g has at most
        // one (simple) root inside, detected by a sign change
        g.sign_at(&iso.lo) * g.sign_at(&iso.hi) < 0
    }

    pub fn compare(&self, o: &FieldElement) -> Result<Ordering, AlgebraicError> {
        let d = self.checked_sub(o)?;
        Ok(match d.sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        })
    }

    /// Exact comparison with a rational, trying the `f64` enclosure first.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        let e = self.enclosure();
        let rf = F64Interval::from_ratio(r);
        if e.is_finite() && rf.is_finite() {
            if e.lo > rf.hi {
                return Ordering::Greater;
            }
            if e.hi < rf.lo {
                return Ordering::Less;
            }
        }
        match (self - &FieldElement::from_rational(&self.ctx, r)).sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        let mut k = match self.as_rational() {
            Some(r) => return r.floor().to_integer(),
            None => {
                let e = self.enclosure();
                if e.is_finite() && e.width() < 0.5 {
                    BigInt::from_f64(e.mid().floor()).unwrap_or_default()
                } else {
                    self.enclose(&BigRational::new(BigInt::one(), BigInt::from(4))).lo.floor().to_integer()
                }
            }
        };
        while self.cmp_rational(&BigRational::from_integer(k.clone())) == Ordering::Less {
            k -= 1;
        }
        while self.cmp_rational(&BigRational::from_integer(&k + 1)) != Ordering::Less {
            k += 1;
        }
        k
    }

    /// Distance to the nearest integer, exactly, with that integer
    /// (`floor(x + 1/2)`).
    pub fn nearest_integer_distance(&self) -> (FieldElement, BigInt) {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let shifted = self + &FieldElement::from_rational(&self.ctx, &half);
        let k = shifted.floor();
        let d = self - &FieldElement::from_bigint(&self.ctx, k.clone());
        (d.abs(), k)
    }

    /// Exact comparison; panics on context mismatch.
    pub fn cmp_exact(&self, o: &FieldElement) -> Ordering {
        self.compare(o).expect("field elements from different contexts")
    }

    /// Outward-rounded `f64` enclosure of the value.
    pub fn enclosure(&self) -> F64Interval {
        if let Some(r) = self.as_rational() {
            return F64Interval::from_ratio(&r);
        }
        let a = self.ctx.approx();
        let v = F64Interval::eval_poly(self.num.coeffs(), &a).div(&F64Interval::from_bigint(&self.den));
        if v.is_finite() {
            return v;
        }
        self.enclose(&BigRational::new(BigInt::one(), BigInt::one() << 60)).to_f64_interval()
    }

    /// Rational interval of width at most `eps` containing the value.
    pub fn enclose(&self, eps: &BigRational) -> RationalInterval {
        let den = BigRational::from_integer(self.den.clone());
        let shrink = BigRational::from_integer(BigInt::one() << 8);
        loop {
            let iso = self.ctx.iso();
            let (lo, hi) = eval_poly_rational_interval(self.num.coeffs(), &iso);
            let (lo, hi) = (lo / &den, hi / &den);
            if &hi - &lo <= *eps || iso.is_point() {
                return RationalInterval { lo, hi };
            }
            self.ctx.refine(&(iso.width() / &shrink)).expect("positive tolerance");
        }
    }

    /// Nearest `f64`, accurate to within a couple of ulps.
    pub fn to_f64(&self) -> f64 {
        let e = self.enclosure();
        let mid = e.mid();
        if e.is_finite() && e.width() <= 1e-15 * mid.abs().max(1.0) {
            return mid;
        }
        let r = self.enclose(&BigRational::new(BigInt::one(), BigInt::one() << 80));
        r.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    /// Polynomial-in-`var` rendering: positive terms first (descending
    /// degree), then negative terms; `(…)/den` when `den > 1`.
    pub fn to_poly_string(&self, var: &str) -> String {
        if self.num.is_zero() {
            return "0".to_string();
        }
        let c = self.num.coeffs();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for i in (0..c.len()).rev() {
            if c[i].is_positive() {
                pos.push(format_term(&c[i], i, var));
            } else if c[i].is_negative() {
                neg.push(format_term(&(-&c[i]), i, var));
            }
        }
        let mut s = pos.join("+");
        for t in &neg {
            s.push('-');
            s.push_str(t);
        }
        if self.den.is_one() {
            s
        } else if pos.len() + neg.len() == 1 {
            format!("{s}/{}", self.den)
        } else {
            format!("({s})/{}", self.den)
        }
    }

    /// Inverse of [`FieldElement::to_poly_string`].
    pub fn parse(ctx: &Context, text: &str, var: char) -> Result<FieldElement, AlgebraicError> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (body, den) = match t.rfind('/') {
            Some(i) => {
                let den: BigInt = t[i + 1..].parse().map_err(|_| AlgebraicError::Syntax {
                    position: i + 1,
                    message: "expected integer denominator".into(),
                })?;
                if den.is_zero() {
                    return Err(AlgebraicError::DivisionByZero);
                }
                (&t[..i], den)
            }
            None => (t.as_str(), BigInt::one()),
        };
        let body = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).unwrap_or(body);
        let num = parse_polynomial_in(body, var)?;
        Ok(FieldElement::from_parts(ctx, num, den))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_poly_string("q"))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({} ≈ {})", self.to_poly_string("q"), self.to_f64())
    }
}

/// Value equality (exact); elements of different fields are unequal.
impl PartialEq for FieldElement {
    fn eq(&self, o: &FieldElement) -> bool {
        if !self.same_context(o) {
            return false;
        }
        (self.num == o.num && self.den == o.den) || self.add_unchecked(&o.neg()).sign() == Sign::Zero
    }
}

impl Eq for FieldElement {}

macro_rules! checked_op {
    ($tr:ident, $m:ident, $op:expr) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            /// Panics if the operands come from different fields.
            fn $m(self, o: &FieldElement) -> FieldElement {
                element_arith(self, o, $op).expect("field elements from different contexts")
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                (&self).$m(&o)
            }
        }
    };
}

checked_op!(Add, add, ArithOp::Add);
checked_op!(Sub, sub, ArithOp::Sub);
checked_op!(Mul, mul, ArithOp::Mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(&self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.total_cmp(&o.0)
    }
}

/// Set of field elements (one context) with exact, certified deduplication.
///
/// Lookup first tries the canonical representation, then every stored
/// element whose `f64` enclosure overlaps the candidate's, settling those
/// with an exact comparison. Elements with disjoint enclosures are
/// certainly distinct, so no exact work is spent on them.
#[derive(Default)]
pub struct ElementIndex {
    items: Vec<FieldElement>,
    enclosures: Vec<F64Interval>,
    exact: HashMap<(IntPolynomial, BigInt), usize>,
    by_lo: BTreeMap<OrdF64, Vec<usize>>,
    unbounded: Vec<usize>,
    max_width: f64,
}

impl ElementIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[FieldElement] {
        &self.items
    }

    pub fn get(&self, i: usize) -> &FieldElement {
        &self.items[i]
    }

    pub fn into_items(self) -> Vec<FieldElement> {
        self.items
    }

    fn find_with(&self, e: &FieldElement, iv: &F64Interval) -> Option<usize> {
        if let Some(&i) = self.exact.get(&(e.num.clone(), e.den.clone())) {
            return Some(i);
        }
        let equal = |i: usize| e.cmp_exact(&self.items[i]) == Ordering::Equal;
        if !iv.is_finite() {
            return (0..self.items.len()).find(|&i| equal(i));
        }
        if let Some(&i) = self.unbounded.iter().find(|&&i| equal(i)) {
            return Some(i);
        }
        let from = OrdF64(iv.lo - self.max_width);
        let to = OrdF64(iv.hi);
        for (_, ids) in self.by_lo.range(from..=to) {
            for &i in ids {
                if self.enclosures[i].overlaps(iv) && equal(i) {
                    return Some(i);
                }
            }
        }
        None
    }

    pub fn find(&self, e: &FieldElement) -> Option<usize> {
        self.find_with(e, &e.enclosure())
    }

    /// Index of `e`, inserting it if new; the flag is true on insertion.
    pub fn insert(&mut self, e: FieldElement) -> (usize, bool) {
        let iv = e.enclosure();
        if let Some(i) = self.find_with(&e, &iv) {
            return (i, false);
        }
        let i = self.items.len();
        self.exact.insert((e.num.clone(), e.den.clone()), i);
        if iv.is_finite() {
            self.by_lo.entry(OrdF64(iv.lo)).or_default().push(i);
            self.max_width = self.max_width.max(iv.width());
        } else {
            self.unbounded.push(i);
        }
        self.enclosures.push(iv);
        self.items.push(e);
        (i, true)
    }
}
