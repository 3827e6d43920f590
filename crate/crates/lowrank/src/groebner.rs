//! Buchberger-style Groebner basis engine with fraction-free integer
//! reduction, normal-strategy pair selection with sugar tie-break,
//! product and chain criteria, and block-order elimination.
//!
//! Coefficients are kept as primitive integer polynomials (content
//! stripped, positive leading coefficient) throughout; the target
//! instances swell past 100 decimal digits otherwise.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::{gcd, BigInt, Rational};
use crate::poly::{Monomial, MonomialOrder, Polynomial, VariableSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResourceKind {
    PairCap,
    DegreeCap,
    TimeCap,
}

#[derive(Debug, Error)]
pub enum GroebnerError {
    #[error("resource cap exceeded: {kind:?} (pairs processed {pairs}, max degree {max_degree})")]
    ResourceExceeded {
        kind: ResourceKind,
        pairs: u64,
        max_degree: u32,
    },
}

/// Resource caps; exceeding any aborts the run so certification can
/// report INDETERMINATE instead of guessing.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_pairs: u64,
    pub max_degree: u32,
    pub timeout: Option<Duration>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_pairs: 1_000_000,
            max_degree: 64,
            timeout: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Stats {
    pub pairs_processed: u64,
    pub max_intermediate_degree: u32,
    pub basis_size: usize,
}

#[derive(Debug, Clone)]
pub struct Ideal {
    vars: VariableSet,
    gens: Vec<Polynomial>,
}

impl Ideal {
    /// Zero generators are dropped.
    pub fn new(vars: &VariableSet, gens: Vec<Polynomial>) -> Ideal {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal {
            vars: vars.clone(),
            gens,
        }
    }

    pub fn vars(&self) -> &VariableSet {
        &self.vars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }
}

#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    vars: VariableSet,
    order: MonomialOrder,
    polys: Vec<Polynomial>,
    stats: Stats,
}

/// Integer polynomial sorted strictly descending under the active order.
#[derive(Clone, Debug)]
struct ZPoly {
    terms: Vec<(BigInt, Monomial)>,
}

impl ZPoly {
    fn lm(&self) -> &Monomial {
        &self.terms[0].1
    }

    fn lc(&self) -> &BigInt {
        &self.terms[0].0
    }

    fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.1.degree()).max().unwrap_or(0)
    }

    fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1.is_one()
    }

    /// Divide out the integer content; returns the (positive) content.
    fn strip_content(&mut self) -> BigInt {
        let mut c = BigInt::zero();
        for (k, _) in &self.terms {
            c = gcd(&c, k);
            if c.is_one() {
                return c;
            }
        }
        if !c.is_one() && !c.is_zero() {
            for (k, _) in &mut self.terms {
                *k /= &c;
            }
        }
        c
    }

    fn negate_if_lc_negative(&mut self) -> bool {
        if self.lc().is_negative() {
            for (k, _) in &mut self.terms {
                *k = -std::mem::take(k);
            }
            true
        } else {
            false
        }
    }
}

fn sort_terms(terms: &mut [(BigInt, Monomial)], order: MonomialOrder) {
    terms.sort_by(|a, b| order.cmp(&b.1, &a.1));
}

/// Clear denominators and strip content: the primitive integer image of a
/// nonzero rational polynomial, terms sorted under `order`.
fn to_zpoly(p: &Polynomial, order: MonomialOrder) -> Option<ZPoly> {
    if p.is_zero() {
        return None;
    }
    let mut den = BigInt::one();
    for t in p.terms() {
        den = num_integer::Integer::lcm(&den, t.coeff.denom());
    }
    let mut terms: Vec<(BigInt, Monomial)> = p
        .terms()
        .iter()
        .map(|t| (t.coeff.numer() * (&den / t.coeff.denom()), t.mono.clone()))
        .collect();
    sort_terms(&mut terms, order);
    let mut zp = ZPoly { terms };
    zp.strip_content();
    Some(zp)
}

fn to_polynomial(zp: &ZPoly, vars: &VariableSet) -> Polynomial {
    Polynomial::from_terms(
        vars,
        zp.terms
            .iter()
            .map(|(c, m)| (Rational::from_integer(c.clone()), m.clone()))
            .collect(),
    )
}

/// r := a*r - b * shift * g, merging sorted term lists.
fn combine(
    r: &[(BigInt, Monomial)],
    a: &BigInt,
    b: &BigInt,
    shift: &Monomial,
    g: &ZPoly,
    order: MonomialOrder,
) -> Vec<(BigInt, Monomial)> {
    let mut out = Vec::with_capacity(r.len() + g.terms.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < r.len() && j < g.terms.len() {
        let gm = g.terms[j].1.mul(shift);
        match order.cmp(&r[i].1, &gm) {
            Ordering::Greater => {
                out.push((a * &r[i].0, r[i].1.clone()));
                i += 1;
            }
            Ordering::Less => {
                out.push((-(b * &g.terms[j].0), gm));
                j += 1;
            }
            Ordering::Equal => {
                let c = a * &r[i].0 - b * &g.terms[j].0;
                if !c.is_zero() {
                    out.push((c, gm));
                }
                i += 1;
                j += 1;
            }
        }
    }
    while i < r.len() {
        out.push((a * &r[i].0, r[i].1.clone()));
        i += 1;
    }
    while j < g.terms.len() {
        out.push((-(b * &g.terms[j].0), g.terms[j].1.mul(shift)));
        j += 1;
    }
    out
}

/// Fraction-free full reduction of f modulo `basis`. Returns the remainder
/// together with the accumulated rational multiplier u: remainder == u * f
/// modulo the ideal generated by `basis`. The remainder has no term
/// divisible by any basis leading term; content is stripped as we go and
/// folded into u.
fn reduce_full(
    f: ZPoly,
    basis: &[ZPoly],
    skip: Option<usize>,
    order: MonomialOrder,
) -> (Option<ZPoly>, Rational) {
    let mut rem = f.terms;
    let mut u = Rational::one();
    let mut i = 0usize;
    while i < rem.len() {
        let mono = rem[i].1.clone();
        let mut hit = None;
        for (gi, g) in basis.iter().enumerate() {
            if Some(gi) == skip {
                continue;
            }
            if g.lm().divides(&mono) {
                hit = Some(gi);
                break;
            }
        }
        let Some(gi) = hit else {
            i += 1;
            continue;
        };
        let g = &basis[gi];
        let c = rem[i].0.clone();
        let d = gcd(&c, g.lc());
        let a = g.lc() / &d; // positive: basis leading coefficients are positive
        let b = &c / &d;
        let shift = mono.checked_div(g.lm()).expect("divisibility checked");
        rem = combine(&rem, &a, &b, &shift, g, order);
        u *= Rational::from_integer(a);
        // strip content to fight swell
        let mut zp = ZPoly { terms: rem };
        let content = zp.strip_content();
        if !content.is_zero() && !content.is_one() {
            u /= Rational::from_integer(content);
        }
        rem = zp.terms;
        // everything before position i stayed irreducible; the cancelled
        // leading term is gone, so re-examine from i
    }
    if rem.is_empty() {
        (None, u)
    } else {
        (Some(ZPoly { terms: rem }), u)
    }
}

struct PairEntry {
    lcm_degree: u32,
    sugar: u32,
    i: usize,
    j: usize,
}

impl PartialEq for PairEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for PairEntry {}
impl Ord for PairEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; invert for minimal selection
        (other.lcm_degree, other.sugar, other.i, other.j).cmp(&(
            self.lcm_degree,
            self.sugar,
            self.i,
            self.j,
        ))
    }
}
impl PartialOrd for PairEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Engine {
    order: MonomialOrder,
    basis: Vec<ZPoly>,
    sugar: Vec<u32>,
    pairs: BinaryHeap<PairEntry>,
    pending: HashSet<(usize, usize)>,
    stats: Stats,
    limits: Limits,
    start: Instant,
}

impl Engine {
    fn new(order: MonomialOrder, limits: Limits) -> Engine {
        Engine {
            order,
            basis: Vec::new(),
            sugar: Vec::new(),
            pairs: BinaryHeap::new(),
            pending: HashSet::new(),
            stats: Stats::default(),
            limits,
            start: Instant::now(),
        }
    }

    fn push_poly(&mut self, mut p: ZPoly) {
        p.negate_if_lc_negative();
        let deg = p.degree();
        self.stats.max_intermediate_degree = self.stats.max_intermediate_degree.max(deg);
        let idx = self.basis.len();
        for k in 0..idx {
            let lcm = self.basis[k].lm().lcm(p.lm());
            let sugar = (self.sugar[k] + (lcm.degree() - self.basis[k].lm().degree()))
                .max(deg + (lcm.degree() - p.lm().degree()));
            self.pairs.push(PairEntry {
                lcm_degree: lcm.degree(),
                sugar,
                i: k,
                j: idx,
            });
            self.pending.insert((k, idx));
        }
        self.basis.push(p);
        self.sugar.push(deg);
    }

    fn check_caps(&self) -> Result<(), GroebnerError> {
        let fail = |kind| GroebnerError::ResourceExceeded {
            kind,
            pairs: self.stats.pairs_processed,
            max_degree: self.stats.max_intermediate_degree,
        };
        if self.stats.pairs_processed > self.limits.max_pairs {
            return Err(fail(ResourceKind::PairCap));
        }
        if self.stats.max_intermediate_degree > self.limits.max_degree {
            return Err(fail(ResourceKind::DegreeCap));
        }
        if let Some(t) = self.limits.timeout {
            if self.start.elapsed() > t {
                return Err(fail(ResourceKind::TimeCap));
            }
        }
        Ok(())
    }

    /// Chain criterion: some k divides the pair lcm with both side lcms
    /// proper divisors, and (i,k), (j,k) have already been considered
    /// (treated or discarded). Properness keeps discard chains acyclic.
    fn chain_criterion(&self, i: usize, j: usize, lcm: &Monomial) -> bool {
        for k in 0..self.basis.len() {
            if k == i || k == j {
                continue;
            }
            if !self.basis[k].lm().divides(lcm) {
                continue;
            }
            let lik = self.basis[i].lm().lcm(self.basis[k].lm());
            let ljk = self.basis[j].lm().lcm(self.basis[k].lm());
            if lik != *lcm
                && ljk != *lcm
                && !self.pending.contains(&key(i, k))
                && !self.pending.contains(&key(j, k))
            {
                return true;
            }
        }
        false
    }

    fn run(&mut self) -> Result<(), GroebnerError> {
        while let Some(pair) = self.pairs.pop() {
            let (i, j) = (pair.i, pair.j);
            self.pending.remove(&key(i, j));
            self.check_caps()?;
            let (gi, gj) = (&self.basis[i], &self.basis[j]);
            let lcm = gi.lm().lcm(gj.lm());
            if gi.lm().coprime(gj.lm()) {
                continue; // product criterion
            }
            if self.chain_criterion(i, j, &lcm) {
                continue;
            }
            self.stats.pairs_processed += 1;
            // fraction-free S-polynomial
            let d = gcd(gi.lc(), gj.lc());
            let a = gj.lc() / &d;
            let b = gi.lc() / &d;
            let shift_i = lcm.checked_div(gi.lm()).expect("lcm divisible");
            let shift_j = lcm.checked_div(gj.lm()).expect("lcm divisible");
            let mut s_terms = combine(
                &scale_shift(gi, &a, &shift_i),
                &BigInt::one(),
                &b,
                &shift_j,
                gj,
                self.order,
            );
            // leading terms cancel by construction
            debug_assert!(s_terms.first().map(|t| &t.1) != Some(&lcm));
            if s_terms.is_empty() {
                continue;
            }
            let mut sp = ZPoly {
                terms: std::mem::take(&mut s_terms),
            };
            sp.strip_content();
            let (rem, _) = reduce_full(sp, &self.basis, None, self.order);
            if let Some(mut r) = rem {
                r.strip_content();
                self.stats.max_intermediate_degree =
                    self.stats.max_intermediate_degree.max(r.degree());
                self.check_caps()?;
                let trivial = r.is_constant();
                self.push_poly(r);
                if trivial {
                    // 1 lies in the ideal; the reduced basis is {1}
                    self.basis = vec![ZPoly {
                        terms: vec![(BigInt::one(), Monomial::one(lcm.exps().len()))],
                    }];
                    self.sugar = vec![0];
                    self.pairs.clear();
                    self.pending.clear();
                    return Ok(());
                }
            }
        }
        Ok(())
    }

    /// Minimize and tail-reduce into the reduced Groebner basis.
    fn reduce_basis(&mut self) {
        // minimize: drop any element whose lm is divisible by another's
        let mut keep: Vec<bool> = vec![true; self.basis.len()];
        for i in 0..self.basis.len() {
            if !keep[i] {
                continue;
            }
            for j in 0..self.basis.len() {
                if i == j || !keep[j] {
                    continue;
                }
                if self.basis[j].lm().divides(self.basis[i].lm())
                    && (self.basis[i].lm() != self.basis[j].lm() || j < i)
                {
                    keep[i] = false;
                    break;
                }
            }
        }
        let mut minimal: Vec<ZPoly> = self
            .basis
            .iter()
            .zip(&keep)
            .filter(|(_, k)| **k)
            .map(|(p, _)| p.clone())
            .collect();
        // tail-reduce each against the others
        for i in 0..minimal.len() {
            let f = minimal[i].clone();
            let (rem, _) = reduce_full(f, &minimal, Some(i), self.order);
            let mut r = rem.expect("leading term of a minimal element survives reduction");
            r.strip_content();
            r.negate_if_lc_negative();
            minimal[i] = r;
        }
        let order = self.order;
        minimal.sort_by(|a, b| order.cmp(b.lm(), a.lm()));
        self.basis = minimal;
    }
}

fn key(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

fn scale_shift(g: &ZPoly, a: &BigInt, shift: &Monomial) -> Vec<(BigInt, Monomial)> {
    g.terms
        .iter()
        .map(|(c, m)| (c * a, m.mul(shift)))
        .collect()
}

/// Reduced Groebner basis of the ideal under `order`, or a
/// resource-exceeded signal when a cap is hit.
pub fn buchberger(
    ideal: &Ideal,
    order: MonomialOrder,
    limits: Limits,
) -> Result<GroebnerBasis, GroebnerError> {
    let mut engine = Engine::new(order, limits);
    for g in &ideal.gens {
        if let Some(zp) = to_zpoly(g, order) {
            engine.check_caps()?;
            if zp.is_constant() {
                engine.basis = vec![ZPoly {
                    terms: vec![(BigInt::one(), Monomial::one(ideal.vars.len()))],
                }];
                engine.stats.basis_size = 1;
                return Ok(GroebnerBasis {
                    vars: ideal.vars.clone(),
                    order,
                    polys: vec![Polynomial::one(&ideal.vars)],
                    stats: engine.stats,
                });
            }
            // interreduce incoming generators against the current basis
            let (rem, _) = reduce_full(zp, &engine.basis, None, order);
            if let Some(mut r) = rem {
                r.strip_content();
                engine.push_poly(r);
            }
        }
    }
    engine.run()?;
    engine.reduce_basis();
    engine.stats.basis_size = engine.basis.len();
    let polys = engine
        .basis
        .iter()
        .map(|zp| to_polynomial(zp, &ideal.vars))
        .collect();
    Ok(GroebnerBasis {
        vars: ideal.vars.clone(),
        order,
        polys,
        stats: engine.stats,
    })
}

impl GroebnerBasis {
    pub fn vars(&self) -> &VariableSet {
        &self.vars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    pub fn is_trivial(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].as_constant().map_or(false, |c| c.is_one())
    }

    /// Remainder r with f - r in the ideal and no term of r divisible by
    /// any basis leading term; deterministic given the basis ordering.
    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        assert_eq!(f.vars(), &self.vars, "variable set mismatch");
        if f.is_zero() || self.polys.is_empty() {
            return f.clone();
        }
        // exact (non-primitive) integer image: keep track of the cleared
        // denominator so the result is a true remainder of f itself
        let mut den = BigInt::one();
        for t in f.terms() {
            den = num_integer::Integer::lcm(&den, t.coeff.denom());
        }
        let mut terms: Vec<(BigInt, Monomial)> = f
            .terms()
            .iter()
            .map(|t| (t.coeff.numer() * (&den / t.coeff.denom()), t.mono.clone()))
            .collect();
        sort_terms(&mut terms, self.order);
        let zbasis: Vec<ZPoly> = self
            .polys
            .iter()
            .map(|p| to_zpoly(p, self.order).expect("basis elements are nonzero"))
            .collect();
        let (rem, u) = reduce_full(ZPoly { terms }, &zbasis, None, self.order);
        match rem {
            None => Polynomial::zero(&self.vars),
            Some(r) => {
                let scale = (Rational::from_integer(den) * u).recip();
                to_polynomial(&r, &self.vars).scale(&scale)
            }
        }
    }

    /// Basis dump: header naming order and variables, then one polynomial
    /// per line in the shared text format.
    pub fn dump(&self) -> String {
        let mut out = format!(
            "# order: {:?}\n# vars: {}\n",
            self.order,
            self.vars.names().join(",")
        );
        for p in &self.polys {
            out.push_str(&p.to_string());
            out.push('\n');
        }
        out
    }
}

/// True iff the reduced basis is {1}.
pub fn contains_one(
    ideal: &Ideal,
    order: MonomialOrder,
    limits: Limits,
) -> Result<bool, GroebnerError> {
    let gb = buchberger(ideal, order, limits)?;
    Ok(gb.is_trivial())
}

#[derive(Debug, Clone)]
pub struct Elimination {
    /// Generators of the elimination ideal, over a VariableSet holding
    /// just the kept variables.
    pub generators: Vec<Polynomial>,
    pub kept: VariableSet,
    pub stats: Stats,
}

/// Generators of ideal ∩ Q[keep]: the block-order basis elements that
/// involve only kept variables. `keep` must name variables of the ideal.
pub fn elimination_ideal(
    ideal: &Ideal,
    keep: &[String],
    limits: Limits,
) -> Result<Elimination, GroebnerError> {
    let vars = ideal.vars();
    for k in keep {
        assert!(vars.index_of(k).is_some(), "unknown kept variable `{k}`");
    }
    let keep_set: HashSet<&String> = keep.iter().collect();
    // eliminated block first, kept block last, both in canonical order
    let mut reordered: Vec<String> = vars
        .names()
        .iter()
        .filter(|n| !keep_set.contains(n))
        .cloned()
        .collect();
    let split = reordered.len();
    reordered.extend(vars.names().iter().filter(|n| keep_set.contains(n)).cloned());
    let work_vars = VariableSet::new(reordered);
    let gens: Vec<Polynomial> = ideal
        .gens
        .iter()
        .map(|g| g.project(&work_vars).expect("same variable names"))
        .collect();
    let work_ideal = Ideal::new(&work_vars, gens);
    let gb = buchberger(&work_ideal, MonomialOrder::Block { split }, limits)?;
    let kept_vars = VariableSet::new(
        work_vars.names()[split..]
            .iter()
            .cloned()
            .collect::<Vec<_>>(),
    );
    let mut generators = Vec::new();
    for p in gb.polys() {
        let only_kept = p
            .terms()
            .iter()
            .all(|t| t.mono.exps()[..split].iter().all(|&e| e == 0));
        if only_kept {
            generators.push(p.project(&kept_vars).expect("kept variables only"));
        }
    }
    Ok(Elimination {
        generators,
        kept: kept_vars,
        stats: gb.stats(),
    })
}
