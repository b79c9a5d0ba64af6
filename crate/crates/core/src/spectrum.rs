//! Spectra of a number `q > 1`: sums `Σ ε_i q^i` over finite digit
//! alphabets, their gaps, minimal nonzero signed-digit values and the
//! distances of `λ q^n` to the integers.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebraic::{Context, ElementIndex, F64Interval, FieldElement, IntPolynomial, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectrumError {
    #[error("digit set must be nonempty, contain 0 and have no negative digits")]
    InvalidDigits,
    #[error("bound must be positive")]
    BoundNonPositive,
    #[error("q must be greater than one")]
    NotGreaterThanOne,
    #[error("at least two points are needed for gap statistics")]
    TooFewPoints,
    #[error("search space contains no nonzero value")]
    AllZero,
    #[error("lambda must be nonzero")]
    LambdaZero,
    #[error("m and n must be positive")]
    NonPositiveParameter,
    #[error("exhaustive search over {size} digit strings exceeds the limit {limit}")]
    TooLarge { size: u128, limit: u128 },
    #[error("csv output failed: {0}")]
    Csv(String),
}

/// Distinct digits, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitSet {
    digits: Vec<BigRational>,
}

impl DigitSet {
    pub fn new(mut digits: Vec<BigRational>) -> Result<Self, SpectrumError> {
        digits.sort();
        digits.dedup();
        if digits.is_empty() {
            return Err(SpectrumError::InvalidDigits);
        }
        Ok(Self { digits })
    }

    pub fn from_integers(d: &[i64]) -> Result<Self, SpectrumError> {
        Self::new(d.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    /// `{0, 1, …, m}`.
    pub fn nonnegative(m: u32) -> Self {
        Self::from_integers(&(0..=i64::from(m)).collect::<Vec<_>>()).expect("nonempty")
    }

    /// `{−m, …, m}`.
    pub fn signed(m: u32) -> Self {
        let m = i64::from(m);
        Self::from_integers(&(-m..=m).collect::<Vec<_>>()).expect("nonempty")
    }

    pub fn digits(&self) -> &[BigRational] {
        &self.digits
    }

    /// Every digit multiplied by `t`.
    pub fn scaled(&self, t: &BigRational) -> Self {
        Self::new(self.digits.iter().map(|d| d * t).collect()).expect("nonempty")
    }
}

/// All representable values up to a bound, sorted strictly increasing.
#[derive(Clone, Debug)]
pub struct SpectrumSlice {
    pub q: Context,
    pub digits: DigitSet,
    pub bound: BigRational,
    /// Largest exponent that can occur in a representation of a value `≤ bound`.
    pub degree_cap: usize,
    pub points: Vec<FieldElement>,
    pub approx: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct GapStats {
    pub gaps: Vec<FieldElement>,
    pub min_gap: FieldElement,
    pub max_gap: FieldElement,
    pub min_gap_f64: f64,
    pub max_gap_f64: f64,
}

#[derive(Clone, Debug)]
pub struct MinValue {
    pub value: FieldElement,
    pub approx: f64,
    /// `ε_0, …, ε_{n−1}` with `|Σ ε_i q^i| = value`.
    pub witness: Vec<i64>,
    /// Number of merged search states visited.
    pub states: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PowerNorm {
    pub n: u32,
    /// `‖λ q^n‖` as a polynomial in `q`.
    pub norm_exact: String,
    pub nearest_integer: String,
    pub norm: f64,
    /// `|norm − ‖λ q^n‖| ≤ norm_error`.
    pub norm_error: f64,
    pub partial_sum: f64,
    pub partial_sum_error: f64,
}

fn require_q_above_one(q: &Context) -> Result<(), SpectrumError> {
    if q.cmp_rational(&BigRational::one()) == Ordering::Greater {
        Ok(())
    } else {
        Err(SpectrumError::NotGreaterThanOne)
    }
}

fn powers(q: &Context, n: usize) -> Vec<FieldElement> {
    let mut out = Vec::with_capacity(n + 1);
    let mut p = FieldElement::one(q);
    for _ in 0..=n {
        let next = p.mul_generator();
        out.push(p);
        p = next;
    }
    out
}

/// Largest `n` with `c·q^n ≤ bound` for `c > 0`, or `None` if `c > bound`.
fn degree_cap(q: &Context, c: &BigRational, bound: &BigRational) -> Option<usize> {
    let mut t = FieldElement::from_rational(q, c);
    if t.cmp_rational(bound) == Ordering::Greater {
        return None;
    }
    let mut n = 0;
    loop {
        t = t.mul_generator();
        if t.cmp_rational(bound) == Ordering::Greater {
            return Some(n);
        }
        n += 1;
    }
}

/// `{Σ_{i≤n} ε_i q^i ≤ B}` for nonnegative digits containing 0.
///
/// Every term is nonnegative, so a representation of a value `≤ B` only uses
/// exponents `n` with `ε_min⁺ q^n ≤ B`; all such strings are explored from the
/// top exponent down, cutting branches whose partial sum already exceeds `B`.
pub fn enumerate_spectrum(q: &Context, digits: &DigitSet, bound: &BigRational) -> Result<SpectrumSlice, SpectrumError> {
    let d = digits.digits();
    if d.iter().any(|x| x.is_negative()) || !d.iter().any(|x| x.is_zero()) {
        return Err(SpectrumError::InvalidDigits);
    }
    if !bound.is_positive() {
        return Err(SpectrumError::BoundNonPositive);
    }
    require_q_above_one(q)?;
    let positive: Vec<&BigRational> = d.iter().filter(|x| x.is_positive()).collect();
    let cap = positive.first().and_then(|c| degree_cap(q, c, bound)).unwrap_or(0);
    let pw = powers(q, cap);
    let mut index = ElementIndex::new();
    let mut stack = vec![(cap as isize, FieldElement::zero(q))];
    while let Some((i, s)) = stack.pop() {
        if i < 0 {
            index.insert(s);
            continue;
        }
        for e in d {
            let next = if e.is_zero() { s.clone() } else { &s + &pw[i as usize].scale(e) };
            if next.cmp_rational(bound) != Ordering::Greater {
                stack.push((i - 1, next));
            }
        }
    }
    let mut points = index.into_items();
    points.sort_by(|a, b| a.cmp_exact(b));
    let approx = points.iter().map(FieldElement::to_f64).collect();
    Ok(SpectrumSlice { q: q.clone(), digits: digits.clone(), bound: bound.clone(), degree_cap: cap, points, approx })
}

/// Exact consecutive differences with their extremes.
pub fn gap_stats(s: &SpectrumSlice) -> Result<GapStats, SpectrumError> {
    if s.points.len() < 2 {
        return Err(SpectrumError::TooFewPoints);
    }
    let gaps: Vec<FieldElement> = s.points.windows(2).map(|w| &w[1] - &w[0]).collect();
    let mut min = &gaps[0];
    let mut max = &gaps[0];
    for g in &gaps[1..] {
        if g.cmp_exact(min) == Ordering::Less {
            min = g;
        }
        if g.cmp_exact(max) == Ordering::Greater {
            max = g;
        }
    }
    Ok(GapStats {
        min_gap: min.clone(),
        max_gap: max.clone(),
        min_gap_f64: min.to_f64(),
        max_gap_f64: max.to_f64(),
        gaps,
    })
}

/// CSV with columns `index,value_exact,value_float,gap_to_next`.
pub fn write_spectrum_csv<W: Write>(s: &SpectrumSlice, w: W) -> Result<(), SpectrumError> {
    let err = |e: csv::Error| SpectrumError::Csv(e.to_string());
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["index", "value_exact", "value_float", "gap_to_next"]).map_err(err)?;
    for (i, p) in s.points.iter().enumerate() {
        let gap = s.points.get(i + 1).map(|n| (n - p).to_poly_string("q")).unwrap_or_default();
        out.write_record([i.to_string(), p.to_poly_string("q"), s.approx[i].to_string(), gap]).map_err(err)?;
    }
    out.flush().map_err(|e| SpectrumError::Csv(e.to_string()))
}

/// Back-pointer of a merged search state: `state = σ·(q·parent + digit)`
/// with `σ = −1` when `flip`.
#[derive(Clone, Copy)]
struct Link {
    parent: u32,
    digit: i32,
    flip: bool,
}

/// Reconstructs ascending digits of the state `idx` at `level` (1-based,
/// level `j` holding the top `j` digits), padded to length `n`.
fn witness_of(links: &[Vec<Link>], level: usize, idx: usize, n: usize) -> Vec<i64> {
    let mut out = vec![0i64; n];
    let mut sign = 1i64;
    let mut i = idx;
    // the digit chosen at level l multiplies q^(level − l)
    for l in (1..=level).rev() {
        let link = links[l - 1][i];
        if link.flip {
            sign = -sign;
        }
        out[level - l] = sign * i64::from(link.digit);
        i = link.parent as usize;
    }
    out
}

/// Certified test of `q^k·x − tail_k > best`, i.e. whether no completion
/// of the state `x ≥ 0` can reach a value of modulus at most `best`.
fn beyond_reach(
    x: &FieldElement,
    qk: &(FieldElement, F64Interval),
    tail: &(FieldElement, F64Interval),
    best: &(FieldElement, F64Interval),
) -> bool {
    let lhs = x.enclosure().mul(&qk.1).sub(&tail.1);
    if lhs.is_finite() && best.1.is_finite() {
        if lhs.lo > best.1.hi {
            return true;
        }
        if lhs.hi < best.1.lo {
            return false;
        }
    }
    (&(&(x * &qk.0) - &tail.0) - &best.0).sign() == Sign::Positive
}

fn with_enclosure(e: FieldElement) -> (FieldElement, F64Interval) {
    let iv = e.enclosure();
    (e, iv)
}

/// Minimum of `|Σ_{i<n} ε_i q^i|` over digit vectors in `{−m..m}^n` with a
/// nonzero value, exactly, with a witness.
///
/// Runs [`min_nonzero_value_bnb`] while its levels stay small and hands over
/// to [`min_nonzero_value_split`] once a level would outgrow the split
/// search's enumeration (as happens for non-Pisot `q`, where the number of
/// surviving prefixes grows exponentially).
pub fn min_nonzero_value(q: &Context, m: u32, n: usize) -> Result<MinValue, SpectrumError> {
    check_min_args(q, m, n)?;
    let split_cost = split_size(m, n);
    let abort = (split_cost <= SPLIT_LIMIT).then_some(split_cost as usize);
    match branch_and_bound(q, m, n, abort) {
        Some(r) => Ok(r),
        None => min_nonzero_value_split(q, m, n),
    }
}

fn check_min_args(q: &Context, m: u32, n: usize) -> Result<(), SpectrumError> {
    if m == 0 || n == 0 {
        return Err(SpectrumError::NonPositiveParameter);
    }
    require_q_above_one(q)
}

/// Branch-and-bound alone, without the hand-over to the split search.
///
/// Level-synchronous over Horner prefixes `x_{j+1} = q·x_j + ε`. Prefixes
/// with equal value are merged (the source of polynomial behaviour for Pisot
/// `q`), stored up to sign since the alphabet is symmetric. Every nonzero
/// prefix value is itself attained by a vector of length `n` (digits shifted
/// to the bottom), which keeps the incumbent tight. A prefix with `k` digits
/// left is dropped once `q^k·|x| − m(q^{k−1} + … + 1) > best`, decided exactly.
pub fn min_nonzero_value_bnb(q: &Context, m: u32, n: usize) -> Result<MinValue, SpectrumError> {
    check_min_args(q, m, n)?;
    Ok(branch_and_bound(q, m, n, None).expect("no abort threshold"))
}

/// `None` when some level would exceed `abort` states.
fn branch_and_bound(q: &Context, m: u32, n: usize, abort: Option<usize>) -> Option<MinValue> {
    let pw = powers(q, n);
    let mf = BigRational::from_integer(BigInt::from(m));
    let mut tails = Vec::with_capacity(n + 1);
    let mut acc = FieldElement::zero(q);
    for p in pw.iter().take(n + 1) {
        tails.push(with_enclosure(acc.scale(&mf)));
        acc = &acc + p;
    }
    let qk: Vec<_> = pw.into_iter().map(with_enclosure).collect();

    // incumbent: the vector (1, 0, …, 0)
    let mut best = with_enclosure(FieldElement::one(q));
    let mut best_at: (usize, usize) = (0, 0);
    let mut links: Vec<Vec<Link>> = Vec::with_capacity(n);
    let mut level: Vec<FieldElement> = vec![FieldElement::zero(q)];
    let mut states = 1usize;
    let digits: Vec<i32> = (-(m as i32)..=(m as i32)).collect();

    for j in 1..=n {
        if abort.is_some_and(|a| level.len() * digits.len() > a) {
            return None;
        }
        let k = n - j;
        let mut next: Vec<FieldElement> = Vec::new();
        let mut next_links: Vec<Link> = Vec::new();
        let mut seen: HashMap<(IntPolynomial, BigInt), usize> = HashMap::new();
        for (pi, x) in level.iter().enumerate() {
            let qx = x.mul_generator();
            for &e in &digits {
                let raw = &qx + &FieldElement::from_integer(q, i64::from(e));
                let (v, flip) = match raw.sign() {
                    Sign::Negative => (raw.neg(), true),
                    _ => (raw, false),
                };
                let key = (v.num().clone(), v.den().clone());
                if seen.contains_key(&key) {
                    continue;
                }
                if k > 0 && beyond_reach(&v, &qk[k], &tails[k], &best) {
                    continue;
                }
                seen.insert(key, next.len());
                next_links.push(Link { parent: pi as u32, digit: e, flip });
                next.push(v);
            }
        }
        // nonzero prefixes are attainable values: tighten the incumbent
        for (i, v) in next.iter().enumerate() {
            if v.is_structurally_zero() {
                continue;
            }
            let ord = v.cmp_exact(&best.0);
            if ord == Ordering::Less && v.sign() != Sign::Zero {
                best = with_enclosure(v.clone());
                best_at = (j, i);
            }
        }
        states += next.len();
        links.push(next_links);
        level = next;
    }
    let witness = if best_at.0 == 0 {
        let mut w = vec![0; n];
        w[0] = 1;
        w
    } else {
        witness_of(&links, best_at.0, best_at.1, n)
    };
    Some(MinValue { approx: best.0.to_f64(), value: best.0, witness, states })
}

/// Limit on `(2m+1)^⌈n/2⌉` for [`min_nonzero_value_split`].
pub const SPLIT_LIMIT: u128 = 5_000_000;

fn split_size(m: u32, n: usize) -> u128 {
    (2 * u128::from(m) + 1).checked_pow(n.div_ceil(2) as u32).unwrap_or(u128::MAX)
}

/// A nonnegative half-sum with its digit vector packed in base `2m+1`.
struct HalfValue {
    value: FieldElement,
    encl: F64Interval,
    code: u64,
}

/// Certified order: disjoint enclosures decide, otherwise exact comparison.
fn cmp_half(a: &HalfValue, b: &HalfValue) -> Ordering {
    if a.encl.hi < b.encl.lo {
        Ordering::Less
    } else if a.encl.lo > b.encl.hi {
        Ordering::Greater
    } else {
        a.value.cmp_exact(&b.value)
    }
}

/// Sorted distinct nonnegative values of `Σ_{i<len} ε_i q^{shift+i}`.
fn half_values(pw: &[FieldElement], m: u32, shift: usize, len: usize) -> Vec<HalfValue> {
    let q = pw[0].ctx();
    let base = 2 * u64::from(m) + 1;
    let terms: Vec<Vec<FieldElement>> = (0..len)
        .map(|i| (-(m as i64)..=m as i64).map(|e| pw[shift + i].scale(&BigRational::from_integer(e.into()))).collect())
        .collect();
    let mut out = Vec::new();
    let mut stack = vec![(0usize, FieldElement::zero(q), 0u64)];
    while let Some((pos, partial, code)) = stack.pop() {
        if pos == len {
            if partial.sign() != Sign::Negative {
                let encl = partial.enclosure();
                out.push(HalfValue { value: partial, encl, code });
            }
            continue;
        }
        for (d, t) in terms[pos].iter().enumerate() {
            stack.push((pos + 1, &partial + t, code * base + d as u64));
        }
    }
    out.sort_by(cmp_half);
    out.dedup_by(|a, b| cmp_half(a, b) == Ordering::Equal);
    out
}

/// Digits of a packed half, placed at `shift..shift+len` of `w` times `sign`.
fn unpack(code: u64, m: u32, shift: usize, len: usize, sign: i64, w: &mut [i64]) {
    let base = 2 * u64::from(m) + 1;
    let mut c = code;
    for pos in (0..len).rev() {
        w[shift + pos] = sign * ((c % base) as i64 - i64::from(m));
        c /= base;
    }
}

/// Incumbent of the split search: value, its enclosure and the signed packed
/// digits of the low and high halves (sign 0 for an unused half).
type SplitBest = (FieldElement, F64Interval, (u64, i64), (u64, i64));

fn offer(best: &mut Option<SplitBest>, v: FieldElement, lo: (u64, i64), hi: (u64, i64)) {
    let e = v.enclosure();
    let better = match best {
        None => true,
        Some((b, be, _, _)) => {
            if e.hi < be.lo {
                true
            } else if e.lo > be.hi {
                false
            } else {
                v.cmp_exact(b) == Ordering::Less
            }
        }
    };
    if better {
        *best = Some((v, e, lo, hi));
    }
}

/// Meet-in-the-middle search for the same minimum as [`min_nonzero_value`].
///
/// Splits `Σ ε_i q^i` into a low half `L` (exponents `< a`) and a high half
/// `H`. Both value sets are symmetric, so with `L⁺`, `H⁺` their nonnegative
/// parts the minimum is the smaller of the least positive element of
/// `L⁺ ∪ H⁺` and the least nonzero `|l − h|`, `l ∈ L⁺`, `h ∈ H⁺`; the latter
/// is attained by neighbours in the merged order. Guarded by
/// `(2m+1)^⌈n/2⌉ ≤` [`SPLIT_LIMIT`].
pub fn min_nonzero_value_split(q: &Context, m: u32, n: usize) -> Result<MinValue, SpectrumError> {
    check_min_args(q, m, n)?;
    let size = split_size(m, n);
    if size > SPLIT_LIMIT {
        return Err(SpectrumError::TooLarge { size, limit: SPLIT_LIMIT });
    }
    let a = n / 2;
    let pw = powers(q, n);
    let low = half_values(&pw, m, 0, a);
    let high = half_values(&pw, m, a, n - a);

    let mut best: Option<SplitBest> = None;
    // values are distinct and nonnegative, so index 1 is the least positive one
    if let Some(l) = low.get(1) {
        offer(&mut best, l.value.clone(), (l.code, 1), (0, 0));
    }
    if let Some(h) = high.get(1) {
        offer(&mut best, h.value.clone(), (0, 0), (h.code, 1));
    }
    let mut j = 0;
    for l in &low {
        while j < high.len() && cmp_half(&high[j], l) == Ordering::Less {
            j += 1;
        }
        let above = match high.get(j) {
            Some(h) if cmp_half(h, l) == Ordering::Equal => high.get(j + 1),
            other => other,
        };
        let below = j.checked_sub(1).map(|i| &high[i]);
        for h in above.into_iter().chain(below) {
            let bound = best.as_ref().map(|b| b.1.hi);
            let gap = h.encl.sub(&l.encl);
            let reach = gap.lo.abs().min(gap.hi.abs());
            if gap.lo.signum() == gap.hi.signum() && bound.is_some_and(|b| reach > b) {
                continue;
            }
            offer(&mut best, (&h.value - &l.value).abs(), (l.code, -1), (h.code, 1));
        }
    }
    let (value, _, (lc, ls), (hc, hs)) = best.ok_or(SpectrumError::AllZero)?;
    let mut witness = vec![0i64; n];
    if ls != 0 {
        unpack(lc, m, 0, a, ls, &mut witness);
    }
    if hs != 0 {
        unpack(hc, m, a, n - a, hs, &mut witness);
    }
    Ok(MinValue { approx: value.to_f64(), value, witness, states: low.len() + high.len() })
}

/// Limit on `(2m+1)^n` for [`min_nonzero_value_exhaustive`].
pub const EXHAUSTIVE_LIMIT: u128 = 20_000_000;

/// Oracle for [`min_nonzero_value`]: evaluates every digit vector directly.
pub fn min_nonzero_value_exhaustive(q: &Context, m: u32, n: usize) -> Result<MinValue, SpectrumError> {
    if m == 0 || n == 0 {
        return Err(SpectrumError::NonPositiveParameter);
    }
    require_q_above_one(q)?;
    let base = 2 * u128::from(m) + 1;
    let size = base.checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > EXHAUSTIVE_LIMIT {
        return Err(SpectrumError::TooLarge { size, limit: EXHAUSTIVE_LIMIT });
    }
    let pw = powers(q, n);
    let mi = i64::from(m);
    let mut digits = vec![-mi; n];
    let mut best: Option<(FieldElement, Vec<i64>)> = None;
    loop {
        let mut v = FieldElement::zero(q);
        for (i, &e) in digits.iter().enumerate() {
            if e != 0 {
                v = &v + &pw[i].scale(&BigRational::from_integer(e.into()));
            }
        }
        let a = v.abs();
        if a.sign() != Sign::Zero && best.as_ref().is_none_or(|(b, _)| a.cmp_exact(b) == Ordering::Less) {
            best = Some((a, digits.clone()));
        }
        // odometer increment
        let mut i = 0;
        while i < n && digits[i] == mi {
            digits[i] = -mi;
            i += 1;
        }
        if i == n {
            break;
        }
        digits[i] += 1;
    }
    let (value, witness) = best.ok_or(SpectrumError::AllZero)?;
    Ok(MinValue { approx: value.to_f64(), value, witness, states: size as usize })
}

/// `‖λ q^n‖` for `n = 1..=count`, each certified to `10⁻¹²`, with running sums.
pub fn power_norms(lambda: &BigRational, q: &Context, count: u32) -> Result<Vec<PowerNorm>, SpectrumError> {
    if lambda.is_zero() {
        return Err(SpectrumError::LambdaZero);
    }
    let eps = BigRational::new(BigInt::one(), BigInt::from(10u64.pow(13)));
    let mut x = FieldElement::from_rational(q, lambda);
    let mut out = Vec::with_capacity(count as usize);
    let mut sum = 0.0f64;
    let mut sum_err = 0.0f64;
    for n in 1..=count {
        x = x.mul_generator();
        let (d, k) = x.nearest_integer_distance();
        let iv = d.enclose(&eps);
        let mid = iv.midpoint();
        let norm = mid.to_f64().unwrap_or(f64::NAN);
        // half the enclosure width plus the rounding of the midpoint
        let half = (iv.width() / BigRational::from_integer(2.into())).to_f64().unwrap_or(f64::INFINITY);
        let err = half + norm.abs() * f64::EPSILON;
        sum += norm;
        sum_err += err + sum.abs() * f64::EPSILON;
        out.push(PowerNorm {
            n,
            norm_exact: d.to_poly_string("q"),
            nearest_integer: k.to_string(),
            norm,
            norm_error: err,
            partial_sum: sum,
            partial_sum_error: sum_err,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::AlgebraicReal;
    use std::sync::Arc;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn golden() -> Context {
        Arc::new(AlgebraicReal::largest_real_root(&IntPolynomial::from_i64s(&[-1, -1, 1])).unwrap())
    }

    fn rational(n: i64, d: i64) -> Context {
        Arc::new(AlgebraicReal::from_rational(&rat(n, d)))
    }

    #[test]
    fn binary_spectrum() {
        let s = enumerate_spectrum(&rational(2, 1), &DigitSet::nonnegative(1), &rat(7, 1)).unwrap();
        let v: Vec<_> = s.points.iter().map(|p| p.as_rational().unwrap()).collect();
        assert_eq!(v, (0..=7).map(|i| rat(i, 1)).collect::<Vec<_>>());
        let g = gap_stats(&s).unwrap();
        assert!(g.gaps.iter().all(|x| x.as_rational() == Some(rat(1, 1))));
    }

    #[test]
    fn golden_spectrum_to_two() {
        let ctx = golden();
        let s = enumerate_spectrum(&ctx, &DigitSet::nonnegative(1), &rat(2, 1)).unwrap();
        let q = FieldElement::generator(&ctx);
        assert_eq!(s.points, vec![FieldElement::zero(&ctx), FieldElement::one(&ctx), q.clone()]);
        let g = gap_stats(&s).unwrap();
        assert_eq!(g.min_gap, &q - &FieldElement::one(&ctx));
        assert!((g.min_gap_f64 - 0.618_033_988_749_895).abs() < 1e-15);
    }

    #[test]
    fn zero_only_digits() {
        let ctx = golden();
        let s = enumerate_spectrum(&ctx, &DigitSet::from_integers(&[0]).unwrap(), &rat(1, 1)).unwrap();
        assert_eq!(s.points.len(), 1);
        assert_eq!(gap_stats(&s).unwrap_err(), SpectrumError::TooFewPoints);
    }

    #[test]
    fn spectrum_errors() {
        let ctx = golden();
        let neg = DigitSet::from_integers(&[-1, 0, 1]).unwrap();
        assert_eq!(enumerate_spectrum(&ctx, &neg, &rat(1, 1)).unwrap_err(), SpectrumError::InvalidDigits);
        let no_zero = DigitSet::from_integers(&[1, 2]).unwrap();
        assert_eq!(enumerate_spectrum(&ctx, &no_zero, &rat(1, 1)).unwrap_err(), SpectrumError::InvalidDigits);
        let d = DigitSet::nonnegative(1);
        assert_eq!(enumerate_spectrum(&ctx, &d, &rat(0, 1)).unwrap_err(), SpectrumError::BoundNonPositive);
        assert_eq!(enumerate_spectrum(&rational(1, 2), &d, &rat(1, 1)).unwrap_err(), SpectrumError::NotGreaterThanOne);
    }

    #[test]
    fn min_value_examples() {
        let r = min_nonzero_value(&rational(2, 1), 1, 5).unwrap();
        assert_eq!(r.value.as_rational(), Some(rat(1, 1)));
        let r = min_nonzero_value(&rational(3, 2), 1, 3).unwrap();
        assert_eq!(r.value.as_rational(), Some(rat(1, 4)));
        let w = &r.witness;
        let v = rat(w[0], 1) + rat(3 * w[1], 2) + rat(9 * w[2], 4);
        assert_eq!(v.abs(), rat(1, 4));
    }

    #[test]
    fn witness_reproduces_value() {
        let ctx = golden();
        for n in 1..=9 {
            let r = min_nonzero_value(&ctx, 1, n).unwrap();
            let v = FieldElement::from_int_coeffs(&ctx, &r.witness);
            assert_eq!(v.abs(), r.value, "n = {n}");
        }
    }

    #[test]
    fn branch_and_bound_matches_exhaustive() {
        for ctx in [golden(), rational(3, 2)] {
            for n in 1..=6 {
                let a = min_nonzero_value(&ctx, 1, n).unwrap();
                let b = min_nonzero_value_exhaustive(&ctx, 1, n).unwrap();
                assert_eq!(a.value, b.value, "n = {n}");
            }
        }
    }

    #[test]
    fn exhaustive_guard() {
        assert!(matches!(min_nonzero_value_exhaustive(&golden(), 1, 20), Err(SpectrumError::TooLarge { .. })));
    }

    #[test]
    fn power_norm_examples() {
        let r = power_norms(&rat(1, 1), &rational(3, 2), 3).unwrap();
        let v: Vec<f64> = r.iter().map(|p| p.norm).collect();
        assert_eq!(v, vec![0.5, 0.25, 0.375]);
        assert_eq!(r[2].norm_exact, "3/8");
        let r = power_norms(&rat(1, 1), &rational(2, 1), 5).unwrap();
        assert!(r.iter().all(|p| p.norm == 0.0 && p.norm_exact == "0"));
        assert_eq!(power_norms(&rat(0, 1), &golden(), 3).unwrap_err(), SpectrumError::LambdaZero);
    }

    #[test]
    fn golden_power_norms() {
        let q = 1.618_033_988_749_895f64;
        // q^n − L_n = −(−1/q)^n, and L_n is the nearest integer once q^−n < 1/2
        for p in power_norms(&rat(1, 1), &golden(), 20).unwrap().into_iter().skip(1) {
            let expected = q.powi(-(p.n as i32));
            assert!((p.norm - expected).abs() <= 1e-12 + p.norm_error, "n = {}", p.n);
            assert!(p.norm_error <= 1e-12);
        }
    }

    #[test]
    fn csv_columns() {
        let s = enumerate_spectrum(&golden(), &DigitSet::nonnegative(1), &rat(2, 1)).unwrap();
        let mut buf = Vec::new();
        write_spectrum_csv(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "index,value_exact,value_float,gap_to_next");
        assert!(lines[2].starts_with("1,1,"));
        assert!(lines[2].ends_with(",q-1"));
        assert_eq!(lines.len(), 4);
    }
}
