//! Exact real-root counting for univariate rational polynomials via Sturm
//! sequences, plus the homogeneous-bivariate wrapper used by the
//! injectivity argument.
//!
//! The signed remainder sequence is computed fraction-free with content
//! stripping at every step; only positive constants are divided out so the
//! Sturm sign convention survives. Signs at +-infinity are read from
//! leading coefficients and degree parity, never from numeric evaluation.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::{gcd, BigInt, Rational};
use crate::poly::{Polynomial, PolyError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RealRootsError {
    #[error("operation not defined for the zero polynomial")]
    ZeroPolynomial,
    #[error("expected a homogeneous polynomial")]
    NotHomogeneous,
    #[error("polynomial shape: {0}")]
    Poly(#[from] PolyError),
}

/// Dense univariate polynomial with integer coefficients; index = power.
/// Integer scaling is harmless here, root sets are scale-invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<BigInt>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> UniPoly {
        while coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// From a univariate rational polynomial; denominators are cleared.
    pub fn from_polynomial(p: &Polynomial) -> Result<UniPoly, RealRootsError> {
        assert_eq!(p.vars().len(), 1, "expected a univariate polynomial");
        let mut den = BigInt::one();
        for t in p.terms() {
            den = num_integer::Integer::lcm(&den, t.coeff.denom());
        }
        let deg = p.degree().unwrap_or(0) as usize;
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for t in p.terms() {
            coeffs[t.mono.exps()[0] as usize] = t.coeff.numer() * (&den / t.coeff.denom());
        }
        Ok(UniPoly::new(coeffs))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::new(vec![]);
        }
        UniPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * (i as u64 + 1))
                .collect(),
        )
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + Rational::from_integer(c.clone());
        }
        acc
    }

    /// Divide out the positive integer content; sign preserved.
    pub fn primitive(&self) -> UniPoly {
        let mut c = BigInt::zero();
        for k in &self.coeffs {
            c = gcd(&c, k);
        }
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|k| k / &c).collect(),
        }
    }

    fn scale(&self, s: &BigInt) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) - other.coeff(k));
        }
        UniPoly::new(coeffs)
    }

    fn mul_xk(&self, k: usize) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs }
    }
}

/// Pseudo-remainder with the overall multiplier sign corrected to be
/// positive: the result is a positive rational multiple of rem(a, b).
fn signed_pseudo_rem(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let db = b.degree().expect("divisor nonzero");
    let mut r = a.clone();
    let mut mult_negative = false;
    while let Some(dr) = r.degree() {
        if dr < db {
            break;
        }
        let lr = r.leading().clone();
        // r := lc(b) * r - lc(r) * x^(dr-db) * b
        r = r.scale(b.leading()).sub(&b.scale(&lr).mul_xk(dr - db));
        if b.leading().is_negative() {
            mult_negative = !mult_negative;
        }
        debug_assert!(r.degree().map_or(true, |d| d < dr));
    }
    if mult_negative {
        r = r.neg();
    }
    r.primitive()
}

/// Primitive gcd of two integer polynomials (positive leading coefficient).
pub fn uni_gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let (mut f, mut g) = (a.primitive(), b.primitive());
    while !g.is_zero() {
        let r = signed_pseudo_rem(&f, &g);
        f = g;
        g = r;
    }
    if !f.is_zero() && f.leading().is_negative() {
        f = f.neg();
    }
    f
}

/// Exact quotient a / b (b must divide a); panics otherwise, which would
/// indicate a broken gcd upstream.
fn exact_div(a: &UniPoly, b: &UniPoly) -> UniPoly {
    if a.is_zero() {
        return a.clone();
    }
    let da = a.degree().unwrap();
    let db = b.degree().expect("division by zero polynomial");
    assert!(da >= db);
    // rational long division, then the result is checked to be exact
    let mut rem: Vec<Rational> = a
        .coeffs
        .iter()
        .map(|c| Rational::from_integer(c.clone()))
        .collect();
    let mut q = vec![Rational::zero(); da - db + 1];
    let lb = Rational::from_integer(b.leading().clone());
    for k in (0..q.len()).rev() {
        let c = rem[k + db].clone() / &lb;
        q[k] = c.clone();
        for (i, bc) in b.coeffs.iter().enumerate() {
            let sub = &c * Rational::from_integer(bc.clone());
            rem[k + i] -= sub;
        }
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
    // clear denominators, return primitive with the quotient's sign
    let mut den = BigInt::one();
    for c in &q {
        den = num_integer::Integer::lcm(&den, c.denom());
    }
    UniPoly::new(
        q.iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect::<Vec<_>>(),
    )
    .primitive()
}

/// f / gcd(f, f'), primitive. Rejects the zero polynomial.
pub fn squarefree_part(f: &UniPoly) -> Result<UniPoly, RealRootsError> {
    if f.is_zero() {
        return Err(RealRootsError::ZeroPolynomial);
    }
    if f.degree() == Some(0) {
        return Ok(UniPoly::new(vec![BigInt::one()]));
    }
    let g = uni_gcd(f, &f.derivative());
    Ok(exact_div(&f.primitive(), &g))
}

/// The signed remainder sequence p0 = f*, p1 = f*', p_{i+1} = -rem(p_{i-1}, p_i),
/// for the squarefree part f* of f; ends at a nonzero constant.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<UniPoly>,
}

impl SturmSequence {
    pub fn new(f: &UniPoly) -> Result<SturmSequence, RealRootsError> {
        let fstar = squarefree_part(f)?;
        let mut chain = vec![fstar.clone()];
        let d = fstar.derivative();
        if !d.is_zero() {
            chain.push(d.primitive());
            loop {
                let n = chain.len();
                let r = signed_pseudo_rem(&chain[n - 2], &chain[n - 1]);
                if r.is_zero() {
                    break;
                }
                chain.push(r.neg());
            }
        }
        let last = chain.last().expect("nonempty chain");
        debug_assert!(
            last.degree() == Some(0),
            "squarefree input must end the chain at a nonzero constant"
        );
        Ok(SturmSequence { chain })
    }

    pub fn chain(&self) -> &[UniPoly] {
        &self.chain
    }

    fn variations(signs: impl Iterator<Item = i8>) -> usize {
        let mut count = 0usize;
        let mut prev = 0i8;
        for s in signs {
            if s == 0 {
                continue;
            }
            if prev != 0 && s != prev {
                count += 1;
            }
            prev = s;
        }
        count
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        Self::variations(self.chain.iter().map(|p| {
            let d = p.degree().expect("chain elements are nonzero");
            let s = if p.leading().is_negative() { -1 } else { 1 };
            if d % 2 == 0 {
                s
            } else {
                -s
            }
        }))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        Self::variations(
            self.chain
                .iter()
                .map(|p| if p.leading().is_negative() { -1 } else { 1 }),
        )
    }

    pub fn variations_at(&self, t: &Rational) -> usize {
        Self::variations(self.chain.iter().map(|p| {
            let v = p.eval(t);
            if v.is_zero() {
                0
            } else if v.is_negative() {
                -1
            } else {
                1
            }
        }))
    }

    /// Distinct real roots in the half-open interval (a, b]; a and b must
    /// not be roots of the squarefree part for the textbook count.
    pub fn count_in_interval(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a) - self.variations_at(b)
    }
}

/// Number of distinct real roots of f, via V(-inf) - V(+inf).
pub fn count_real_roots(f: &UniPoly) -> Result<usize, RealRootsError> {
    if f.is_zero() {
        return Err(RealRootsError::ZeroPolynomial);
    }
    let s = SturmSequence::new(f)?;
    Ok(s.variations_at_neg_inf() - s.variations_at_pos_inf())
}

pub fn count_real_roots_poly(f: &Polynomial) -> Result<usize, RealRootsError> {
    count_real_roots(&UniPoly::from_polynomial(f)?)
}

/// True iff the homogeneous bivariate F(a, b) vanishes at some real point
/// other than the origin: either F(a, 1) has a real root, or the pure
/// a-power coefficient vanishes (so (1, 0) is a root).
pub fn homogeneous_has_nonzero_real_root(f: &Polynomial) -> Result<bool, RealRootsError> {
    if f.is_zero() {
        return Err(RealRootsError::ZeroPolynomial);
    }
    if !f.is_homogeneous() {
        return Err(RealRootsError::NotHomogeneous);
    }
    let deg = f.degree().expect("nonzero");
    let dehom = f.dehomogenize()?;
    let uni = UniPoly::from_polynomial(&dehom)?;
    // the a-axis: coefficient of a^deg
    if uni.degree() != Some(deg as usize) {
        return Ok(true);
    }
    Ok(count_real_roots(&uni)? > 0)
}
