//! Pisot, Salem and Perron classification by exact root counting relative
//! to circles centred at the origin.
//!
//! Roots on the unit circle are split off through the self-reciprocal part
//! `gcd(p, x^deg p(1/x))` and counted with a Sturm sequence after the
//! substitution `y = x + 1/x`. The circle-free remainder is handled by the
//! Schur–Cohn Hermitian form, whose inertia is read off the characteristic
//! polynomial with Descartes' rule (exact for symmetric matrices).

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebraic::{AlgebraicReal, FieldElement, IntPolynomial, Sign, SturmSequence};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("the number must be greater than one")]
    NotGreaterThanOne,
    #[error("the zero polynomial has no roots to count")]
    ZeroPolynomial,
    #[error("digit bound m must be positive")]
    NonPositiveM,
}

/// Root counts of a polynomial relative to the unit circle, with multiplicity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct RootCircleCounts {
    pub inside: usize,
    pub on: usize,
    pub outside: usize,
}

impl RootCircleCounts {
    pub fn total(&self) -> usize {
        self.inside + self.on + self.outside
    }

    fn add_scaled(&mut self, o: &RootCircleCounts, k: usize) {
        self.inside += o.inside * k;
        self.on += o.on * k;
        self.outside += o.outside * k;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ClassTag {
    Pisot,
    Salem,
    PerronNotPisotSalem,
    AlgebraicNonPerron,
    NotAlgebraicInteger,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NumberClass {
    pub tag: ClassTag,
    pub counts: RootCircleCounts,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum NotDenseReason {
    Pisot,
    TooLarge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DensityVerdict {
    Dense,
    NotDense(NotDenseReason),
}

/// Monic after normalization to primitive form.
pub fn is_algebraic_integer(p: &IntPolynomial) -> bool {
    !p.is_zero() && p.primitive().is_monic()
}

/// Exact root counts inside, on and outside the unit circle.
pub fn unit_circle_root_counts(p: &IntPolynomial) -> Result<RootCircleCounts, ClassifyError> {
    if p.is_zero() {
        return Err(ClassifyError::ZeroPolynomial);
    }
    let mut total = RootCircleCounts::default();
    for (f, k) in p.squarefree_decomposition() {
        total.add_scaled(&squarefree_counts(f), k);
    }
    Ok(total)
}

/// Counts relative to the circle `|z| = r`, for rational `r > 0`.
pub fn root_counts_at_radius(p: &IntPolynomial, r: &BigRational) -> Result<RootCircleCounts, ClassifyError> {
    assert!(r.is_positive(), "radius must be positive");
    unit_circle_root_counts(&p.scale_variable(r))
}

fn divide_linear(f: &IntPolynomial, root: i64) -> IntPolynomial {
    f.div_exact(&IntPolynomial::from_i64s(&[-root, 1])).expect("linear factor divides")
}

fn squarefree_counts(mut f: IntPolynomial) -> RootCircleCounts {
    let mut c = RootCircleCounts::default();
    while f.deg() > 0 && f.coeff(0).is_zero() {
        c.inside += 1;
        f = divide_linear(&f, 0);
    }
    for root in [1i64, -1] {
        while f.deg() > 0 && f.eval_bigint(&BigInt::from(root)).is_zero() {
            c.on += 1;
            f = divide_linear(&f, root);
        }
    }
    if f.deg() == 0 {
        return c;
    }
    let g = f.gcd(&f.reversal());
    if g.deg() > 0 {
        let (on, pairs) = self_reciprocal_counts(&g);
        c.on += on;
        c.inside += pairs;
        c.outside += pairs;
        f = f.div_exact(&g).expect("gcd divides");
    }
    if f.deg() > 0 {
        let inside = schur_cohn_inside(&f);
        c.inside += inside;
        c.outside += f.deg() - inside;
    }
    c
}

/// For a squarefree palindromic `g` of degree `2k` without roots `±1`:
/// returns (roots on the circle, reciprocal pairs off the circle).
fn self_reciprocal_counts(g: &IntPolynomial) -> (usize, usize) {
    let n = g.deg();
    debug_assert!(n.is_multiple_of(2));
    debug_assert!((0..=n).all(|i| g.coeff(i) == g.coeff(n - i)));
    let k = n / 2;
    // g(x)/x^k = a_k + Σ_j a_{k+j} (x^j + x^-j), with x^j + x^-j = D_j(x + 1/x)
    let y = IntPolynomial::monomial(1);
    let mut d_prev = IntPolynomial::constant(BigInt::from(2));
    let mut d_cur = y.clone();
    let mut h = IntPolynomial::constant(g.coeff(k));
    for j in 1..=k {
        h = &h + &(&IntPolynomial::constant(g.coeff(k + j)) * &d_cur);
        let next = &(&y * &d_cur) - &d_prev;
        d_prev = std::mem::replace(&mut d_cur, next);
    }
    // y in (-2, 2) corresponds to a conjugate pair on the circle
    let two = BigRational::from_integer(BigInt::from(2));
    let s = SturmSequence::new(&h).count_half_open(&-&two, &two);
    (2 * s, k - s)
}

/// Roots strictly inside the unit disk of a polynomial with no roots on the
/// circle and no reciprocal pairs.
fn schur_cohn_inside(f: &IntPolynomial) -> usize {
    let n = f.deg();
    let a = f.coeffs();
    // A: lower-triangular Toeplitz, first column a_n..a_1
    // B: lower-triangular Toeplitz, first column a_0..a_{n-1}
    let mut h = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in h.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut s = BigInt::zero();
            for l in 0..=i.min(j) {
                s += &a[n - (i - l)] * &a[n - (j - l)];
                s -= &a[i - l] * &a[j - l];
            }
            *cell = s;
        }
    }
    let cp = characteristic_polynomial(&h);
    debug_assert!(!cp.coeff(0).is_zero(), "Schur-Cohn form is singular");
    // all eigenvalues are real, so Descartes' count is exact
    cp.coefficient_sign_variations()
}

/// `det(tI - M)` by the Faddeev–LeVerrier recurrence (exact divisions).
fn characteristic_polynomial(m: &[Vec<BigInt>]) -> IntPolynomial {
    let n = m.len();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut mk = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = M·M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigInt::zero();
                for l in 0..n {
                    if !mk[l][j].is_zero() {
                        s += &m[i][l] * &mk[l][j];
                    }
                }
                next[i][j] = s;
            }
            next[i][i] += &coeffs[n - k + 1];
        }
        mk = next;
        let mut tr = BigInt::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &m[i][l] * &mk[l][i];
            }
        }
        coeffs[n - k] = -(tr / BigInt::from(k));
    }
    IntPolynomial::new(coeffs)
}

fn require_greater_than_one(a: &AlgebraicReal) -> Result<(), ClassifyError> {
    if a.cmp_rational(&BigRational::one()) == Ordering::Greater {
        Ok(())
    } else {
        Err(ClassifyError::NotGreaterThanOne)
    }
}

/// Classification of `a > 1` relative to its defining polynomial.
///
/// The defining polynomial is taken as the minimal polynomial; for a
/// reducible one the roots of the other factors count as conjugates.
pub fn classify_number(a: &AlgebraicReal) -> Result<NumberClass, ClassifyError> {
    require_greater_than_one(a)?;
    let p = a.defpoly();
    let counts = unit_circle_root_counts(p)?;
    let tag = if !is_algebraic_integer(p) {
        ClassTag::NotAlgebraicInteger
    } else if counts.outside == 1 && counts.on == 0 {
        ClassTag::Pisot
    } else if counts.outside == 1 {
        ClassTag::Salem
    } else if is_perron(a) {
        ClassTag::PerronNotPisotSalem
    } else {
        ClassTag::AlgebraicNonPerron
    };
    Ok(NumberClass { tag, counts })
}

/// Whether every other root of the (monic) defining polynomial of `a > 1`
/// has modulus strictly below `a`.
pub fn is_perron(a: &AlgebraicReal) -> bool {
    let p = a.defpoly();
    if p.deg() == 1 {
        return true;
    }
    if has_modulus_tie(a) {
        return false;
    }
    // no other root has modulus exactly a, so refinement decides
    loop {
        let iso = a.iso();
        if iso.is_point() {
            let c = root_counts_at_radius(p, &iso.lo).expect("nonzero");
            return c.outside + c.on == 1;
        }
        let out = root_counts_at_radius(p, &iso.hi).expect("nonzero");
        if out.outside > 0 {
            return false;
        }
        if iso.lo.is_positive() {
            let c = root_counts_at_radius(p, &iso.lo).expect("nonzero");
            if c.outside + c.on == 1 {
                return true;
            }
        }
        let w = iso.width() / BigRational::from_integer(BigInt::from(4));
        a.refine(&w).expect("positive tolerance");
    }
}

/// Whether `a²` is a multiple root of `Π_{i,j} (y − α_i α_j)`.
///
/// A second product `α_i α_j = a²` forces a root of modulus at least `a`
/// besides `a`, and a root of modulus exactly `a` always yields one, so a
/// multiple root means `a` is not Perron and a simple root rules out ties.
fn has_modulus_tie(a: &AlgebraicReal) -> bool {
    let p = a.defpoly();
    let d = p.deg();
    let lc = p.leading().unwrap().clone();
    let c = p.coeffs();
    let n = d * d;
    // power sums s_k = Σ α_i^k by Newton's identities (p monic)
    debug_assert!(lc.is_one());
    let mut s = vec![BigInt::zero(); n + 1];
    s[0] = BigInt::from(d);
    for k in 1..=n {
        let mut acc = BigInt::zero();
        for i in 1..=k.min(d) {
            let ci = &c[d - i];
            if ci.is_zero() {
                continue;
            }
            if i == k {
                acc += ci * BigInt::from(k);
            } else {
                acc += ci * &s[k - i];
            }
        }
        s[k] = -acc;
    }
    // products α_i α_j have power sums s_k²; recover the monic polynomial
    let big_s: Vec<BigInt> = s.iter().map(|x| x * x).collect();
    let mut r = vec![BigInt::zero(); n + 1];
    r[n] = BigInt::one();
    for k in 1..=n {
        let mut acc = big_s[k].clone();
        for i in 1..k {
            acc += &r[n - i] * &big_s[k - i];
        }
        r[n - k] = -(acc / BigInt::from(k));
    }
    let dr = IntPolynomial::new(r).derivative();
    let ctx = Arc::new(a.clone());
    let q2 = FieldElement::generator(&ctx).pow(2);
    let mut acc = FieldElement::zero(&ctx);
    for coef in dr.coeffs().iter().rev() {
        acc = &(&acc * &q2) + &FieldElement::from_bigint(&ctx, coef.clone());
    }
    acc.sign() == Sign::Zero
}

/// Density of the signed-digit spectrum with digits up to `m` for `a > 1`:
/// dense exactly when `a < m + 1` and `a` is not Pisot.
pub fn density_verdict(a: &AlgebraicReal, m: u32) -> Result<DensityVerdict, ClassifyError> {
    if m == 0 {
        return Err(ClassifyError::NonPositiveM);
    }
    require_greater_than_one(a)?;
    let bound = BigRational::from_integer(BigInt::from(m) + 1);
    if a.cmp_rational(&bound) != Ordering::Less {
        return Ok(DensityVerdict::NotDense(NotDenseReason::TooLarge));
    }
    Ok(match classify_number(a)?.tag {
        ClassTag::Pisot => DensityVerdict::NotDense(NotDenseReason::Pisot),
        _ => DensityVerdict::Dense,
    })
}
