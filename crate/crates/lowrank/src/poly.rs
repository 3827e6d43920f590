//! Sparse multivariate polynomials over Q with pluggable monomial orders.
//!
//! Terms are stored canonically sorted (descending grevlex) with no zero
//! coefficients and no duplicate monomials, so structural equality is
//! mathematical equality. Orders other than grevlex only matter to the
//! Groebner engine, which re-sorts internally.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::{format_rational, parse_rational, BigInt, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable sets do not match")]
    VariableSetMismatch,
    #[error("operation not defined for the zero polynomial")]
    ZeroPolynomial,
    #[error("expected a bivariate polynomial")]
    NotBivariate,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("cannot parse polynomial near `{0}`")]
    Parse(String),
}

/// Ordered list of variable names, fixed for the lifetime of a computation.
#[derive(Clone, Debug)]
pub struct VariableSet {
    inner: Arc<VarsInner>,
}

#[derive(Debug)]
struct VarsInner {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl PartialEq for VariableSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.names == other.inner.names
    }
}
impl Eq for VariableSet {}

impl VariableSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect::<HashMap<_, _>>();
        assert_eq!(index.len(), names.len(), "variable names must be unique");
        VariableSet {
            inner: Arc::new(VarsInner { names, index }),
        }
    }

    pub fn len(&self) -> usize {
        self.inner.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.inner.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.inner.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.inner.index.get(name).copied()
    }
}

/// Exponent vector over a VariableSet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u16>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Self {
        let degree = exps.iter().map(|&e| u32::from(e)).sum();
        Monomial { exps, degree }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial::new(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial::new(exps)
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a + b)
            .collect();
        Monomial::new(exps)
    }

    /// self / other, None when not divisible.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            if a < b {
                return None;
            }
            exps.push(a - b);
        }
        Some(Monomial::new(exps))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| *a.max(b))
            .collect();
        Monomial::new(exps)
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }
}

fn grevlex_slice(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| u32::from(e)).sum();
    let db: u32 = b.iter().map(|&e| u32::from(e)).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    // equal degree: the last differing exponent decides, smaller is greater
    for (x, y) in a.iter().zip(b.iter()).rev() {
        match x.cmp(y) {
            Ordering::Equal => {}
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

/// Canonical ordering on monomials is grevlex.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree.cmp(&other.degree) {
            Ordering::Equal => grevlex_slice(&self.exps, &other.exps),
            o => o,
        }
    }
}
impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A total, multiplicative, well-founded term order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    GrevLex,
    Lex,
    /// Variables with index < split form the eliminated block (compared
    /// grevlex first); the kept block breaks ties, also by grevlex.
    Block { split: usize },
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::GrevLex => a.cmp(b),
            MonomialOrder::Lex => {
                for (x, y) in a.exps.iter().zip(b.exps.iter()) {
                    match x.cmp(y) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Block { split } => {
                match grevlex_slice(&a.exps[..*split], &b.exps[..*split]) {
                    Ordering::Equal => grevlex_slice(&a.exps[*split..], &b.exps[*split..]),
                    o => o,
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Rational,
    pub mono: Monomial,
}

/// Sparse polynomial over Q; terms strictly descending in grevlex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    vars: VariableSet,
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero(vars: &VariableSet) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(vars: &VariableSet, c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero(vars);
        }
        Polynomial {
            vars: vars.clone(),
            terms: vec![Term {
                coeff: c,
                mono: Monomial::one(vars.len()),
            }],
        }
    }

    pub fn one(vars: &VariableSet) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn variable(vars: &VariableSet, i: usize) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: vec![Term {
                coeff: Rational::one(),
                mono: Monomial::var(vars.len(), i),
            }],
        }
    }

    /// Build from arbitrary (coeff, monomial) pairs: merges duplicates,
    /// drops zeros, sorts canonically.
    pub fn from_terms(vars: &VariableSet, terms: Vec<(Rational, Monomial)>) -> Self {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (c, m) in terms {
            assert_eq!(m.exps().len(), vars.len());
            let entry = map.entry(m).or_insert_with(Rational::zero);
            *entry += c;
        }
        let terms = map
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(mono, coeff)| Term { coeff, mono })
            .collect();
        Polynomial {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn vars(&self) -> &VariableSet {
        &self.vars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|t| t.mono.is_one())
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            Some(self.terms[0].coeff.clone())
        } else {
            None
        }
    }

    /// Total degree; None stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.mono.degree()).max()
    }

    /// Zero is homogeneous by convention.
    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some(t0) => {
                let d = self
                    .terms
                    .iter()
                    .map(|t| t.mono.degree())
                    .max()
                    .unwrap_or(t0.mono.degree());
                self.terms.iter().all(|t| t.mono.degree() == d)
            }
        }
    }

    fn check_vars(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::VariableSetMismatch)
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_vars(other)?;
        // merge two canonically sorted term lists
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].mono.cmp(&other.terms[j].mono) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].coeff + &other.terms[j].coeff;
                    if !c.is_zero() {
                        out.push(Term {
                            coeff: c,
                            mono: self.terms[i].mono.clone(),
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Ok(Polynomial {
            vars: self.vars.clone(),
            terms: out,
        })
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: -t.coeff.clone(),
                    mono: t.mono.clone(),
                })
                .collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: &t.coeff * c,
                    mono: t.mono.clone(),
                })
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_vars(other)?;
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let m = a.mono.mul(&b.mono);
                let entry = map.entry(m).or_insert_with(Rational::zero);
                *entry += &a.coeff * &b.coeff;
            }
        }
        let terms = map
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(mono, coeff)| Term { coeff, mono })
            .collect();
        Ok(Polynomial {
            vars: self.vars.clone(),
            terms,
        })
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.vars);
        for _ in 0..e {
            acc = acc.mul(self).expect("same variable set");
        }
        acc
    }

    /// Substitute variables by polynomials over the same VariableSet;
    /// unassigned variables map to themselves.
    pub fn substitute(&self, assignment: &HashMap<usize, Polynomial>) -> Polynomial {
        let mut acc = Polynomial::zero(&self.vars);
        for t in &self.terms {
            let mut prod = Polynomial::constant(&self.vars, t.coeff.clone());
            for (i, &e) in t.mono.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match assignment.get(&i) {
                    Some(img) => {
                        prod = prod.mul(&img.pow(u32::from(e))).expect("same variable set");
                    }
                    None => {
                        let m = Monomial::new(
                            (0..self.vars.len())
                                .map(|k| if k == i { e } else { 0 })
                                .collect(),
                        );
                        prod = prod
                            .mul(&Polynomial {
                                vars: self.vars.clone(),
                                terms: vec![Term {
                                    coeff: Rational::one(),
                                    mono: m,
                                }],
                            })
                            .expect("same variable set");
                    }
                }
            }
            acc = acc.add(&prod).expect("same variable set");
        }
        acc
    }

    /// Re-express over `target`, matching variables by name. Fails if a
    /// variable actually present in self is missing from `target`.
    pub fn project(&self, target: &VariableSet) -> Result<Polynomial, PolyError> {
        let mut map = Vec::with_capacity(self.vars.len());
        for i in 0..self.vars.len() {
            map.push(target.index_of(self.vars.name(i)));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut exps = vec![0u16; target.len()];
            for (i, &e) in t.mono.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => exps[j] += e,
                    None => {
                        return Err(PolyError::UnknownVariable(self.vars.name(i).to_string()))
                    }
                }
            }
            terms.push((t.coeff.clone(), Monomial::new(exps)));
        }
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Maximal term under the given order; error on zero.
    pub fn leading_term(&self, order: MonomialOrder) -> Result<(Rational, Monomial), PolyError> {
        let mut best: Option<&Term> = None;
        for t in &self.terms {
            best = match best {
                None => Some(t),
                Some(b) => {
                    if order.cmp(&t.mono, &b.mono) == Ordering::Greater {
                        Some(t)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best.map(|t| (t.coeff.clone(), t.mono.clone()))
            .ok_or(PolyError::ZeroPolynomial)
    }

    /// F(a, 1) for a bivariate F; result lives over {first variable}.
    pub fn dehomogenize(&self) -> Result<Polynomial, PolyError> {
        if self.vars.len() != 2 {
            return Err(PolyError::NotBivariate);
        }
        let uni = VariableSet::new([self.vars.name(0).to_string()]);
        let terms = self
            .terms
            .iter()
            .map(|t| (t.coeff.clone(), Monomial::new(vec![t.mono.exps()[0]])))
            .collect();
        Ok(Polynomial::from_terms(&uni, terms))
    }

    /// Rational content: the positive gcd of the coefficients over Q
    /// (gcd of numerators / lcm of denominators). Zero for the zero poly.
    pub fn content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for t in &self.terms {
            num = crate::exactnum::gcd(&num, t.coeff.numer());
            den = num_integer::Integer::lcm(&den, t.coeff.denom());
        }
        if num.is_zero() {
            Rational::zero()
        } else {
            Rational::new(num, den)
        }
    }

    /// Divide out the content and fix the sign so the leading coefficient
    /// under `order` is positive: the canonical representative up to
    /// nonzero rational scalars. Integer coefficients with gcd 1.
    pub fn primitive_normalize(&self, order: MonomialOrder) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        let mut p = self.scale(&c.recip());
        let (lc, _) = p.leading_term(order).expect("nonzero");
        if lc.is_negative() {
            p = p.neg();
        }
        p
    }

    /// True when self = lambda * other for some nonzero rational lambda.
    pub fn proportional_to(&self, other: &Polynomial) -> bool {
        if self.vars != other.vars {
            return false;
        }
        self.primitive_normalize(MonomialOrder::GrevLex)
            == other.primitive_normalize(MonomialOrder::GrevLex)
    }

    pub fn parse(vars: &VariableSet, text: &str) -> Result<Polynomial, PolyError> {
        parse_polynomial(vars, text)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let c = &t.coeff;
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = c.abs();
            let mut wrote_coeff = false;
            if !abs.is_one() || t.mono.is_one() {
                write!(f, "{}", format_rational(&abs))?;
                wrote_coeff = true;
            }
            for (i, &e) in t.mono.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if wrote_coeff {
                    write!(f, "*")?;
                }
                wrote_coeff = true;
                write!(f, "{}", self.vars.name(i))?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

/// Text format: sum of terms "c*x11^2*x12" with integer or rational c,
/// whitespace-insensitive; a bare "-" flips the following term.
fn parse_polynomial(vars: &VariableSet, text: &str) -> Result<Polynomial, PolyError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(PolyError::Parse(text.to_string()));
    }
    // split into signed terms at top-level + and -
    let bytes = s.as_bytes();
    let mut terms: Vec<(Rational, Monomial)> = Vec::new();
    let mut pos = 0usize;
    while pos < bytes.len() {
        let mut sign = Rational::one();
        while pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
            if bytes[pos] == b'-' {
                sign = -sign;
            }
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos] != b'+' && bytes[pos] != b'-' {
            pos += 1;
        }
        let chunk = &s[start..pos];
        if chunk.is_empty() {
            return Err(PolyError::Parse(s[start.min(s.len() - 1)..].to_string()));
        }
        let (c, m) = parse_term(vars, chunk)?;
        terms.push((sign * c, m));
    }
    Ok(Polynomial::from_terms(vars, terms))
}

fn parse_term(vars: &VariableSet, chunk: &str) -> Result<(Rational, Monomial), PolyError> {
    let mut coeff = Rational::one();
    let mut exps = vec![0u16; vars.len()];
    for factor in chunk.split('*') {
        if factor.is_empty() {
            return Err(PolyError::Parse(chunk.to_string()));
        }
        let first = factor.chars().next().unwrap();
        if first.is_ascii_digit() {
            let c = parse_rational(factor).map_err(|_| PolyError::Parse(factor.to_string()))?;
            coeff *= c;
        } else {
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e: u16 = e.parse().map_err(|_| PolyError::Parse(factor.to_string()))?;
                    (n, e)
                }
                None => (factor, 1),
            };
            let idx = vars
                .index_of(name)
                .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
            exps[idx] = exps[idx]
                .checked_add(exp)
                .ok_or_else(|| PolyError::Parse(factor.to_string()))?;
        }
    }
    Ok((coeff, Monomial::new(exps)))
}
