//! Dense univariate polynomials with arbitrary-precision integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::AlgebraicError;

/// Integer polynomial, coefficients in ascending degree order.
///
/// Trailing zero coefficients are always trimmed, so the last stored
/// coefficient is the leading one. Normalization to primitive form is
/// explicit ([`IntPolynomial::primitive`]) because field-element numerators
/// reuse this type and must keep their scale.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Content 1 and positive leading coefficient.
    pub fn primitive(&self) -> Self {
        let g = self.content();
        if g.is_zero() {
            return Self::zero();
        }
        let g = if self.leading().unwrap().is_negative() { -g } else { g };
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    /// `x^deg · p(1/x)`.
    pub fn reversal(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// `p(-x)`.
    pub fn negate_variable(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect())
    }

    /// Integer multiple of `p(r·x)` for rational `r = u/v`; its roots are `α/r`.
    pub fn scale_variable(&self, r: &BigRational) -> Self {
        let d = self.deg();
        let (u, v) = (r.numer(), r.denom());
        Self::new(self.coeffs.iter().enumerate().map(|(i, c)| c * u.pow(i as u32) * v.pow((d - i) as u32)).collect())
    }

    pub fn eval_bigint(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        eval_coeffs_rational(&self.coeffs, x)
    }

    /// Sign of `p(x)` as `-1`, `0` or `1`, computed in integers.
    pub fn sign_at(&self, x: &BigRational) -> i8 {
        // v^d p(u/v) = sum c_i u^i v^(d-i), v > 0
        let (u, v) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut vpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * u + c * &vpow;
            vpow *= v;
        }
        sign_i8(&acc)
    }

    /// Positive integer multiple of the remainder of `self` by `divisor` over Q.
    pub fn pseudo_rem(&self, divisor: &Self) -> Self {
        let db = divisor.degree().expect("division by zero polynomial");
        let lb = divisor.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        let mut steps = 0u32;
        while r.len() > db && !r.is_empty() {
            let top = r.last().unwrap().clone();
            let shift = r.len() - 1 - db;
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (i, b) in divisor.coeffs.iter().enumerate() {
                r[i + shift] -= &top * b;
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
            steps += 1;
        }
        let mut r = Self::new(r);
        if lb.is_negative() && steps % 2 == 1 {
            r = -r;
        }
        r
    }

    /// Exact quotient over Z, or `None` when `divisor` does not divide.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let db = divisor.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let lb = divisor.leading().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return None;
        }
        let mut q = vec![BigInt::zero(); r.len() - db];
        while r.len() > db {
            let top = r.last().unwrap().clone();
            let shift = r.len() - 1 - db;
            let (c, rem) = top.div_rem(lb);
            if !rem.is_zero() {
                return None;
            }
            for (i, b) in divisor.coeffs.iter().enumerate() {
                r[i + shift] -= &c * b;
            }
            q[shift] = c;
            r.pop();
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(Self::new(q))
        } else {
            None
        }
    }

    /// Primitive gcd (positive leading coefficient), via primitive remainder sequences.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive()
    }

    pub fn is_squarefree(&self) -> bool {
        self.is_zero() || self.gcd(&self.derivative()).deg() == 0
    }

    /// Primitive squarefree part.
    pub fn squarefree_part(&self) -> Self {
        let p = self.primitive();
        let g = p.gcd(&p.derivative());
        if g.deg() == 0 {
            return p;
        }
        p.div_exact(&g).expect("gcd divides").primitive()
    }

    /// Yun decomposition: pairs `(f_i, i)` with `self ~ Π f_i^i`, each `f_i`
    /// squarefree, primitive and nonconstant.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let f = to_rational(&self.primitive());
        if f.len() <= 1 {
            return Vec::new();
        }
        let df = q_derivative(&f);
        let a = q_gcd(&f, &df);
        let mut b = rational_div(&f, &a).0;
        let c = rational_div(&df, &a).0;
        let mut d = q_sub(&c, &q_derivative(&b));
        let mut out = Vec::new();
        let mut i = 1;
        while b.len() > 1 {
            let a = q_gcd(&b, &d);
            if a.len() > 1 {
                out.push((from_rational_scaled(&a).0.primitive(), i));
            }
            let bn = rational_div(&b, &a).0;
            let c = rational_div(&d, &a).0;
            d = q_sub(&c, &q_derivative(&bn));
            b = bn;
            i += 1;
        }
        out
    }

    /// Number of sign variations in the coefficient sequence.
    pub fn coefficient_sign_variations(&self) -> usize {
        let signs: Vec<i8> = self.coeffs.iter().map(sign_i8).filter(|&s| s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&format_term(&a, i, var));
        }
        out
    }
}

/// `|coeff|·var^i` rendered compactly (`x`, `3x^2`, `5`).
pub(crate) fn format_term(a: &BigInt, i: usize, var: &str) -> String {
    match (i, a.is_one()) {
        (0, _) => a.to_string(),
        (1, true) => var.to_string(),
        (1, false) => format!("{a}{var}"),
        (_, true) => format!("{var}^{i}"),
        (_, false) => format!("{a}{var}^{i}"),
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x"))
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, o: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, o: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, o: &IntPolynomial) -> IntPolynomial {
        IntPolynomial::new(mul_coeffs(&self.coeffs, &o.coeffs))
    }
}

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

pub(crate) fn mul_coeffs(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub(crate) fn eval_coeffs_rational(coeffs: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + BigRational::from_integer(c.clone());
    }
    acc
}

pub(crate) fn sign_i8(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

// --- rational polynomial helpers (ascending, trimmed) ---

pub(crate) type QPoly = Vec<BigRational>;

pub(crate) fn to_rational(p: &IntPolynomial) -> QPoly {
    p.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn trim_q(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Quotient and remainder over Q.
pub(crate) fn rational_div(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut r = a.clone();
    trim_q(&mut r);
    let mut b = b.clone();
    trim_q(&mut b);
    let db = b.len() - 1;
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let lb = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap() / &lb;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &c * bc;
        }
        q[shift] = c;
        r.pop();
        trim_q(&mut r);
        if r.len() <= db {
            break;
        }
    }
    trim_q(&mut q);
    (q, r)
}

fn q_mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim_q(&mut out);
    out
}

fn q_derivative(a: &QPoly) -> QPoly {
    let mut out: QPoly =
        a.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect();
    trim_q(&mut out);
    out
}

/// Monic gcd over Q.
fn q_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    trim_q(&mut x);
    trim_q(&mut y);
    while !y.is_empty() {
        let r = rational_div(&x, &y).1;
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        for c in x.iter_mut() {
            *c /= &l;
        }
    }
    x
}

fn q_sub(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let mut out: QPoly = (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(BigRational::zero) - b.get(i).cloned().unwrap_or_else(BigRational::zero)
        })
        .collect();
    trim_q(&mut out);
    out
}

/// Inverse of `a` modulo `m` over Q; `None` unless `gcd(a, m)` is constant.
pub(crate) fn rational_inverse_mod(a: &QPoly, m: &QPoly) -> Option<QPoly> {
    // extended Euclid tracking only the coefficient of `a`
    let (mut r0, mut r1) = (m.clone(), rational_div(a, m).1);
    let (mut s0, mut s1): (QPoly, QPoly) = (Vec::new(), vec![BigRational::one()]);
    trim_q(&mut r0);
    while !r1.is_empty() {
        let (q, r) = rational_div(&r0, &r1);
        let s2 = q_sub(&s0, &q_mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    if r0.len() != 1 {
        return None;
    }
    let inv = &r0[0];
    let mut s: QPoly = s0.iter().map(|c| c / inv).collect();
    trim_q(&mut s);
    Some(rational_div(&s, m).1)
}

/// Clears denominators: returns `(P, d)` with `P / d` equal to the input,
/// `d > 0` and `gcd(content(P), d) = 1`.
pub(crate) fn from_rational_scaled(p: &QPoly) -> (IntPolynomial, BigInt) {
    let d = p.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let num = IntPolynomial::new(p.iter().map(|c| c.numer() * (&d / c.denom())).collect());
    let g = num.content().gcd(&d);
    if g.is_zero() || g.is_one() {
        return (num, d);
    }
    (IntPolynomial::new(num.coeffs.iter().map(|c| c / &g).collect()), d / g)
}

/// Parses the polynomial grammar
/// `poly := term (('+'|'-') term)*`, `term := int | int? var ('^' uint)?`
/// with whitespace ignored. A leading sign on the first term is accepted.
/// Coefficients are returned raw, without normalization.
pub fn parse_polynomial_in(text: &str, var: char) -> Result<IntPolynomial, AlgebraicError> {
    let chars: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(AlgebraicError::EmptyInput);
    }
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut i = 0;
    let mut first = true;
    let syntax = |pos: usize, message: &str| AlgebraicError::Syntax { position: pos, message: message.to_string() };
    while i < chars.len() {
        let mut negative = false;
        match chars[i].1 {
            '+' | '-' => {
                negative = chars[i].1 == '-';
                i += 1;
            }
            _ if !first => return Err(syntax(chars[i].0, "expected '+' or '-'")),
            _ => {}
        }
        first = false;
        if i >= chars.len() {
            return Err(syntax(text.len(), "dangling sign"));
        }
        let start = i;
        while i < chars.len() && chars[i].1.is_ascii_digit() {
            i += 1;
        }
        let coef: Option<BigInt> = if i > start {
            let digits: String = chars[start..i].iter().map(|(_, c)| c).collect();
            Some(digits.parse().expect("ascii digits"))
        } else {
            None
        };
        if i < chars.len() && matches!(chars[i].1, '.' | '/' | 'e' | 'E') && coef.is_some() {
            return Err(AlgebraicError::NonIntegerCoefficient { position: chars[start].0 });
        }
        let mut exponent = 0usize;
        if i < chars.len() && chars[i].1 == var {
            i += 1;
            exponent = 1;
            if i < chars.len() && chars[i].1 == '^' {
                i += 1;
                let es = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                if i == es {
                    let pos = chars.get(i).map_or(text.len(), |c| c.0);
                    return Err(syntax(pos, "expected exponent after '^'"));
                }
                let digits: String = chars[es..i].iter().map(|(_, c)| c).collect();
                exponent = match digits.parse::<usize>() {
                    Ok(e) if e <= 100_000 => e,
                    _ => return Err(syntax(chars[es].0, "exponent too large")),
                };
            }
        } else if coef.is_none() {
            let pos = chars.get(i).map_or(text.len(), |c| c.0);
            return Err(syntax(pos, "expected integer or variable"));
        }
        let mut c = coef.unwrap_or_else(BigInt::one);
        if negative {
            c = -c;
        }
        if coeffs.len() <= exponent {
            coeffs.resize(exponent + 1, BigInt::zero());
        }
        coeffs[exponent] += c;
    }
    Ok(IntPolynomial::new(coeffs))
}

/// Parses a polynomial in `x` and normalizes it to primitive form.
pub fn parse_polynomial(text: &str) -> Result<IntPolynomial, AlgebraicError> {
    Ok(parse_polynomial_in(text, 'x')?.primitive())
}
