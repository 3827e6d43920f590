//! End-to-end injectivity certification for a measurement ensemble:
//! build the ideal of (2r+1)-minors of a symbolic unknown plus the linear
//! measurement forms, eliminate down to a bivariate f0, count its real
//! roots, run the coordinate-slice membership checks, and emit a verdict
//! with a full audit trail.
//!
//! A verdict of INJECTIVE is sound: the measurement map is injective on
//! rank <= r matrices. FAIL is one-sided; it only says which check did
//! not go through. Any resource-cap abort surfaces as INDETERMINATE.

use std::collections::HashMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{format_rational, parse_rational, Rational};
use crate::groebner::{buchberger, elimination_ideal, GroebnerError, Ideal, Limits, Stats};
use crate::poly::MonomialOrder;
use crate::linalg::{frobenius_inner, Matrix};
use crate::poly::{Monomial, Polynomial, VariableSet};
use crate::realroots::{count_real_roots_poly, homogeneous_has_nonzero_real_root};

pub use crate::groebner::Limits as ResourceLimits;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("ensemble is invalid: {0}")]
    InvalidEnsemble(String),
    #[error("rank bound must satisfy 2r <= n, got n={n}, r={r}")]
    RankTooLarge { n: usize, r: u32 },
    #[error("unknown matrix size must be at least 2, got {0}")]
    TooSmall(usize),
    #[error("minor size {s} out of range for n={n}")]
    MinorSize { s: usize, n: usize },
    #[error("kept variable `{0}` is not a variable of the unknown")]
    BadKeptVariable(String),
    #[error("cannot parse `{0}`")]
    Parse(String),
}

/// The matrices A_1..A_m with the problem parameters. The symmetric flag
/// says the unknown is treated as symmetric; the A_j themselves need not
/// be symmetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementEnsemble {
    pub n: usize,
    pub r: u32,
    pub symmetric: bool,
    pub matrices: Vec<Matrix>,
}

#[derive(Serialize, Deserialize)]
struct EnsembleJson {
    n: usize,
    r: u32,
    symmetric: bool,
    matrices: Vec<Vec<Vec<String>>>,
}

impl MeasurementEnsemble {
    pub fn new(
        n: usize,
        r: u32,
        symmetric: bool,
        matrices: Vec<Matrix>,
    ) -> Result<Self, CertifyError> {
        if matrices.is_empty() {
            return Err(CertifyError::InvalidEnsemble(
                "ensemble must contain at least one matrix".into(),
            ));
        }
        for (idx, a) in matrices.iter().enumerate() {
            if a.rows() != n || a.cols() != n {
                return Err(CertifyError::InvalidEnsemble(format!(
                    "matrix {} is {}x{}, expected {n}x{n}",
                    idx + 1,
                    a.rows(),
                    a.cols()
                )));
            }
        }
        Ok(MeasurementEnsemble {
            n,
            r,
            symmetric,
            matrices,
        })
    }

    pub fn from_integers(
        n: usize,
        r: u32,
        symmetric: bool,
        entries: &[Vec<Vec<i64>>],
    ) -> Result<Self, CertifyError> {
        let matrices = entries
            .iter()
            .map(|rows| {
                Matrix::new(
                    n,
                    n,
                    rows.iter()
                        .flatten()
                        .map(|&v| Rational::from_integer(v.into()))
                        .collect(),
                )
            })
            .collect();
        Self::new(n, r, symmetric, matrices)
    }

    pub fn to_json(&self) -> String {
        let matrices = self
            .matrices
            .iter()
            .map(|a| {
                (0..a.rows())
                    .map(|i| (0..a.cols()).map(|j| format_rational(a.at(i, j))).collect())
                    .collect()
            })
            .collect();
        serde_json::to_string_pretty(&EnsembleJson {
            n: self.n,
            r: self.r,
            symmetric: self.symmetric,
            matrices,
        })
        .expect("ensemble serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CertifyError> {
        let raw: EnsembleJson =
            serde_json::from_str(text).map_err(|e| CertifyError::Parse(e.to_string()))?;
        let mut matrices = Vec::with_capacity(raw.matrices.len());
        for rows in &raw.matrices {
            let mut data = Vec::with_capacity(raw.n * raw.n);
            if rows.len() != raw.n {
                return Err(CertifyError::InvalidEnsemble(format!(
                    "matrix has {} rows, expected {}",
                    rows.len(),
                    raw.n
                )));
            }
            for row in rows {
                if row.len() != raw.n {
                    return Err(CertifyError::InvalidEnsemble(format!(
                        "matrix row has {} entries, expected {}",
                        row.len(),
                        raw.n
                    )));
                }
                for e in row {
                    data.push(parse_rational(e).map_err(|_| CertifyError::Parse(e.clone()))?);
                }
            }
            matrices.push(Matrix::new(raw.n, raw.n, data));
        }
        Self::new(raw.n, raw.r, raw.symmetric, matrices)
    }
}

/// n x n grid of variable references; symmetric grids share the variable
/// between entries (j,k) and (k,j).
#[derive(Debug, Clone)]
pub struct SymbolicMatrix {
    pub n: usize,
    pub symmetric: bool,
    pub vars: VariableSet,
    grid: Vec<Vec<usize>>,
}

/// Canonical variable grid in row-major order; the symmetric grid uses
/// the upper-triangular variables x11, x12, ..., x44.
pub fn symbolic_unknown(n: usize, symmetric: bool) -> Result<SymbolicMatrix, CertifyError> {
    if n < 2 {
        return Err(CertifyError::TooSmall(n));
    }
    assert!(n <= 9, "variable naming scheme covers n <= 9");
    let mut names = Vec::new();
    let mut grid = vec![vec![0usize; n]; n];
    if symmetric {
        let mut idx = HashMap::new();
        for j in 1..=n {
            for k in j..=n {
                idx.insert((j, k), names.len());
                names.push(format!("x{j}{k}"));
            }
        }
        for j in 1..=n {
            for k in 1..=n {
                let key = if j <= k { (j, k) } else { (k, j) };
                grid[j - 1][k - 1] = idx[&key];
            }
        }
    } else {
        for j in 1..=n {
            for k in 1..=n {
                grid[j - 1][k - 1] = names.len();
                names.push(format!("x{j}{k}"));
            }
        }
    }
    Ok(SymbolicMatrix {
        n,
        symmetric,
        vars: VariableSet::new(names),
        grid,
    })
}

impl SymbolicMatrix {
    pub fn entry(&self, row: usize, col: usize) -> Polynomial {
        Polynomial::variable(&self.vars, self.grid[row][col])
    }

    fn det(&self, rows: &[usize], cols: &[usize]) -> Polynomial {
        if rows.len() == 1 {
            return self.entry(rows[0], cols[0]);
        }
        let mut acc = Polynomial::zero(&self.vars);
        let sub_rows = &rows[1..];
        for (i, &c) in cols.iter().enumerate() {
            let sub_cols: Vec<usize> = cols
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, &v)| v)
                .collect();
            let mut term = self
                .entry(rows[0], c)
                .mul(&self.det(sub_rows, &sub_cols))
                .expect("same variable set");
            if i % 2 == 1 {
                term = term.neg();
            }
            acc = acc.add(&term).expect("same variable set");
        }
        acc
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// All s x s minors of the symbolic unknown, homogeneous of degree s;
/// duplicates coming from symmetry are removed.
pub fn minors(q: &SymbolicMatrix, s: usize) -> Result<Vec<Polynomial>, CertifyError> {
    if s < 1 || s > q.n {
        return Err(CertifyError::MinorSize { s, n: q.n });
    }
    let idx = combinations(q.n, s);
    let mut out: Vec<Polynomial> = Vec::new();
    for rows in &idx {
        for cols in &idx {
            let d = q.det(rows, cols);
            if q.symmetric {
                if out.iter().any(|p| *p == d) {
                    continue;
                }
            }
            out.push(d);
        }
    }
    Ok(out)
}

/// The linear forms l_j = <A_j, Q> = sum over entries; for a symmetric
/// unknown the (j,k) and (k,j) coefficients merge onto the shared variable.
pub fn measurement_forms(
    e: &MeasurementEnsemble,
    q: &SymbolicMatrix,
) -> Result<Vec<Polynomial>, CertifyError> {
    if e.n != q.n {
        return Err(CertifyError::InvalidEnsemble(format!(
            "ensemble is {}x{}, unknown is {}x{}",
            e.n, e.n, q.n, q.n
        )));
    }
    let nv = q.vars.len();
    Ok(e
        .matrices
        .iter()
        .map(|a| {
            let mut terms = Vec::new();
            for j in 0..q.n {
                for k in 0..q.n {
                    let c = a.at(j, k).clone();
                    if c.is_zero() {
                        continue;
                    }
                    terms.push((c, Monomial::var(nv, q.grid[j][k])));
                }
            }
            Polynomial::from_terms(&q.vars, terms)
        })
        .collect())
}

/// Exact measurement vector b_j = <A_j, M>.
pub fn evaluate_measurements(
    e: &MeasurementEnsemble,
    m: &Matrix,
) -> Result<Vec<Rational>, CertifyError> {
    if m.rows() != e.n || m.cols() != e.n {
        return Err(CertifyError::InvalidEnsemble(format!(
            "matrix is {}x{}, expected {}x{}",
            m.rows(),
            m.cols(),
            e.n,
            e.n
        )));
    }
    Ok(e.matrices.iter().map(|a| frobenius_inner(a, m)).collect())
}

/// Result of eliminating pivot variables with the linear forms: the
/// substituted system over the surviving variables. The elimination ideal
/// in the kept variables is unchanged by this preprocessing.
#[derive(Debug, Clone)]
pub struct PreprocessedSystem {
    pub vars: VariableSet,
    /// Images of the non-linear generators (zero images dropped).
    pub images: Vec<Polynomial>,
    /// Linear rows that could not take a pivot (supported on kept
    /// variables only); they stay as generators.
    pub residual: Vec<Polynomial>,
    /// Pivot substitutions, by variable name, expressed over `vars`.
    pub substitution: HashMap<String, Polynomial>,
    /// Set when a row reduced to a nonzero constant: 1 lies in the ideal.
    pub inconsistent: bool,
}

/// Gaussian elimination over Q on degree <= 1 forms. Pivot variables are
/// never taken from `keep`; each pivot variable is substituted out of
/// `others` and of the remaining rows.
pub fn linear_preprocess(
    vars: &VariableSet,
    linears: &[Polynomial],
    others: &[Polynomial],
    keep: &[String],
) -> PreprocessedSystem {
    let nv = vars.len();
    let keep_idx: Vec<usize> = keep
        .iter()
        .map(|k| vars.index_of(k).expect("kept variable exists"))
        .collect();
    // row = coefficients over vars plus a trailing constant column
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for l in linears {
        assert!(
            l.degree().unwrap_or(0) <= 1,
            "linear_preprocess expects degree <= 1 forms"
        );
        let mut row = vec![Rational::zero(); nv + 1];
        for t in l.terms() {
            match t.mono.exps().iter().position(|&e| e > 0) {
                Some(i) => row[i] = t.coeff.clone(),
                None => row[nv] = t.coeff.clone(),
            }
        }
        rows.push(row);
    }
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut inconsistent = false;
    let mut residual_rows: Vec<usize> = Vec::new();
    let mut used = vec![false; rows.len()];
    for col in 0..nv {
        if keep_idx.contains(&col) {
            continue;
        }
        let Some(r) = (0..rows.len()).find(|&r| !used[r] && !rows[r][col].is_zero()) else {
            continue;
        };
        used[r] = true;
        pivots.push((r, col));
        let p = rows[r][col].clone();
        for c in 0..=nv {
            rows[r][c] /= &p;
        }
        for r2 in 0..rows.len() {
            if r2 == r || rows[r2][col].is_zero() {
                continue;
            }
            let f = rows[r2][col].clone();
            for c in 0..=nv {
                let s = &f * &rows[r][c];
                rows[r2][c] -= s;
            }
        }
    }
    for r in 0..rows.len() {
        if used[r] {
            continue;
        }
        let any_var = rows[r][..nv].iter().any(|c| !c.is_zero());
        if any_var {
            residual_rows.push(r);
        } else if !rows[r][nv].is_zero() {
            inconsistent = true;
        }
    }
    // surviving variables in canonical order
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let survivors: Vec<String> = (0..nv)
        .filter(|i| !pivot_cols.contains(i))
        .map(|i| vars.name(i).to_string())
        .collect();
    let new_vars = VariableSet::new(survivors);
    // pivot var -> -(rest of its row), expressed over the full vars first
    let mut assignment: HashMap<usize, Polynomial> = HashMap::new();
    let mut substitution = HashMap::new();
    for &(r, col) in &pivots {
        let mut terms = Vec::new();
        for c in 0..nv {
            if c == col || rows[r][c].is_zero() {
                continue;
            }
            terms.push((-rows[r][c].clone(), Monomial::var(nv, c)));
        }
        if !rows[r][nv].is_zero() {
            terms.push((-rows[r][nv].clone(), Monomial::one(nv)));
        }
        let img = Polynomial::from_terms(vars, terms);
        assignment.insert(col, img.clone());
        substitution.insert(
            vars.name(col).to_string(),
            img.project(&new_vars).expect("pivot rows are fully reduced"),
        );
    }
    let images = others
        .iter()
        .map(|p| {
            p.substitute(&assignment)
                .project(&new_vars)
                .expect("pivot variables eliminated")
        })
        .filter(|p| !p.is_zero())
        .collect();
    let residual = residual_rows
        .iter()
        .map(|&r| {
            let mut terms = Vec::new();
            for c in 0..nv {
                if !rows[r][c].is_zero() {
                    terms.push((rows[r][c].clone(), Monomial::var(nv, c)));
                }
            }
            if !rows[r][nv].is_zero() {
                terms.push((rows[r][nv].clone(), Monomial::one(nv)));
            }
            Polynomial::from_terms(vars, terms)
                .project(&new_vars)
                .expect("residual rows avoid pivot variables")
        })
        .collect();
    PreprocessedSystem {
        vars: new_vars,
        images,
        residual,
        substitution,
        inconsistent,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "INJECTIVE")]
    Injective,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "INDETERMINATE")]
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceResult {
    pub variable: String,
    pub contains_one: bool,
}

/// Full audit trail of one certification run. The f0 field is the
/// bivariate elimination polynomial in the kept-variable pair, in the
/// shared polynomial text format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub f0: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub f0_degree: Option<u32>,
    pub kept: (String, String),
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub root_count: Option<usize>,
    pub slices: Vec<SliceResult>,
    pub stats: Stats,
}

impl Certificate {
    pub fn kept_vars(&self) -> VariableSet {
        VariableSet::new([self.kept.0.clone(), self.kept.1.clone()])
    }

    pub fn f0_poly(&self) -> Option<Polynomial> {
        let text = self.f0.as_deref()?;
        Some(Polynomial::parse(&self.kept_vars(), text).expect("stored f0 parses"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Certificate, CertifyError> {
        serde_json::from_str(text).map_err(|e| CertifyError::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct CertifyConfig {
    /// Kept-variable pair; None picks the last two of the canonical order
    /// (x43,x44 for a general 4x4 unknown, x34,x44 for a symmetric one).
    pub keep: Option<(String, String)>,
    pub limits: Limits,
    /// Substitute the linear forms away before the elimination run.
    pub preprocess: bool,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            keep: None,
            limits: Limits::default(),
            preprocess: true,
        }
    }
}

fn aggregate(total: &mut Stats, s: Stats) {
    total.pairs_processed += s.pairs_processed;
    total.max_intermediate_degree = total.max_intermediate_degree.max(s.max_intermediate_degree);
}

/// Deterministic f0 choice: minimum degree, then smallest normalized
/// coefficient sequence. When the elimination basis is exactly the two
/// kept variables the bivariate variety is empty, and the sum of squares
/// of the generators is the canonical ideal member without real zeros.
fn select_f0(generators: &[Polynomial], kept: &VariableSet) -> Option<Polynomial> {
    let mut best: Option<Polynomial> = None;
    for g in generators {
        if g.is_zero() {
            continue;
        }
        let g = g.primitive_normalize(MonomialOrder::GrevLex);
        best = Some(match best {
            None => g,
            Some(b) => {
                let (db, dg) = (b.degree().unwrap(), g.degree().unwrap());
                if dg < db || (dg == db && g.to_string() < b.to_string()) {
                    g
                } else {
                    b
                }
            }
        });
    }
    let chosen = best?;
    if generators.len() == 2 {
        let a = Polynomial::variable(kept, 0);
        let b = Polynomial::variable(kept, 1);
        let is_axes = (generators[0] == a && generators[1] == b)
            || (generators[0] == b && generators[1] == a);
        if is_axes {
            let sq = a.mul(&a).unwrap().add(&b.mul(&b).unwrap()).unwrap();
            return Some(sq);
        }
    }
    Some(chosen)
}

/// The certification pipeline (minors + linear forms, elimination to f0,
/// Sturm count, slice checks).
pub fn vinzant_certify(
    e: &MeasurementEnsemble,
    config: &CertifyConfig,
) -> Result<Certificate, CertifyError> {
    if 2 * (e.r as usize) > e.n {
        return Err(CertifyError::RankTooLarge { n: e.n, r: e.r });
    }
    let q = symbolic_unknown(e.n, e.symmetric)?;
    let s = 2 * (e.r as usize) + 1;
    let minor_polys = if s <= e.n { minors(&q, s)? } else { Vec::new() };
    let linear_polys = measurement_forms(e, &q)?;
    let kept_names = match &config.keep {
        Some((a, b)) => {
            for v in [a, b] {
                if q.vars.index_of(v).is_none() {
                    return Err(CertifyError::BadKeptVariable(v.clone()));
                }
            }
            vec![a.clone(), b.clone()]
        }
        None => {
            let nv = q.vars.len();
            vec![q.vars.name(nv - 2).to_string(), q.vars.name(nv - 1).to_string()]
        }
    };
    let kept_pair = (kept_names[0].clone(), kept_names[1].clone());

    let run = || -> Result<Certificate, GroebnerError> {
        let mut stats_local = Stats::default();
        // elimination down to the kept pair
        let elim = if config.preprocess {
            let pre = linear_preprocess(&q.vars, &linear_polys, &minor_polys, &kept_names);
            let mut gens = pre.images.clone();
            gens.extend(pre.residual.clone());
            if pre.inconsistent {
                gens.push(Polynomial::one(&pre.vars));
            }
            elimination_ideal(&Ideal::new(&pre.vars, gens), &kept_names, config.limits)?
        } else {
            let mut gens = linear_polys.clone();
            gens.extend(minor_polys.clone());
            elimination_ideal(&Ideal::new(&q.vars, gens), &kept_names, config.limits)?
        };
        aggregate(&mut stats_local, elim.stats);
        let kept_vars = elim.kept.clone();

        let fail = |reason: &str,
                    f0: Option<&Polynomial>,
                    root_count: Option<usize>,
                    slices: Vec<SliceResult>,
                    stats: Stats| Certificate {
            verdict: Verdict::Fail,
            reason: Some(reason.to_string()),
            f0: f0.map(|p| p.to_string()),
            f0_degree: f0.and_then(|p| p.degree()),
            kept: kept_pair.clone(),
            root_count,
            slices,
            stats,
        };

        let Some(f0) = select_f0(&elim.generators, &kept_vars) else {
            let mut s = stats_local;
            s.basis_size = 0;
            return Ok(fail("zero elimination ideal", None, None, Vec::new(), s));
        };
        stats_local.basis_size = elim.generators.len();

        // the elimination ideal of a homogeneous ideal is homogeneous
        debug_assert!(f0.is_homogeneous());
        let has_root = homogeneous_has_nonzero_real_root(&f0)
            .expect("f0 nonzero and homogeneous by construction");
        let root_count = count_real_roots_poly(&f0.dehomogenize().expect("f0 is bivariate"))
            .expect("dehomogenized f0 nonzero");
        if has_root {
            return Ok(fail(
                "f0 has a nonzero real root",
                Some(&f0),
                Some(root_count),
                Vec::new(),
                stats_local,
            ));
        }

        // slice checks: for every variable v of the unknown, the ideal
        // with v = 1 and the kept pair zeroed must contain 1
        let mut slices = Vec::new();
        let mut all_ok = true;
        for vi in 0..q.vars.len() {
            let vname = q.vars.name(vi).to_string();
            let ok = slice_contains_one(&q, &minor_polys, &linear_polys, &kept_names, vi, config)?;
            aggregate(&mut stats_local, ok.1);
            slices.push(SliceResult {
                variable: vname,
                contains_one: ok.0,
            });
            if !ok.0 {
                all_ok = false;
            }
        }
        if !all_ok {
            return Ok(fail(
                "slice has solutions",
                Some(&f0),
                Some(root_count),
                slices,
                stats_local,
            ));
        }
        Ok(Certificate {
            verdict: Verdict::Injective,
            reason: None,
            f0: Some(f0.to_string()),
            f0_degree: f0.degree(),
            kept: kept_pair.clone(),
            root_count: Some(root_count),
            slices,
            stats: stats_local,
        })
    };

    match run() {
        Ok(cert) => Ok(cert),
        // the only engine failure is a resource cap: INDETERMINATE
        Err(err) => {
            Ok(Certificate {
                verdict: Verdict::Indeterminate,
                reason: Some(err.to_string()),
                f0: None,
                f0_degree: None,
                kept: kept_pair,
                root_count: None,
                slices: Vec::new(),
                stats: Stats::default(),
            })
        }
    }
}

/// One slice check: 1 in <v - 1, a, b, minors, linears>?
fn slice_contains_one(
    q: &SymbolicMatrix,
    minor_polys: &[Polynomial],
    linear_polys: &[Polynomial],
    kept: &[String],
    var_index: usize,
    config: &CertifyConfig,
) -> Result<(bool, Stats), GroebnerError> {
    let v_minus_one = Polynomial::variable(&q.vars, var_index)
        .sub(&Polynomial::one(&q.vars))
        .expect("same variable set");
    let kept_polys: Vec<Polynomial> = kept
        .iter()
        .map(|k| Polynomial::variable(&q.vars, q.vars.index_of(k).expect("kept variable")))
        .collect();
    if config.preprocess {
        let mut lin = vec![v_minus_one];
        lin.extend(kept_polys);
        lin.extend_from_slice(linear_polys);
        let pre = linear_preprocess(&q.vars, &lin, minor_polys, &[]);
        if pre.inconsistent {
            return Ok((true, Stats::default()));
        }
        let mut gens = pre.images;
        gens.extend(pre.residual);
        let ideal = Ideal::new(&pre.vars, gens);
        let gb = buchberger(&ideal, MonomialOrder::GrevLex, config.limits)?;
        Ok((gb.is_trivial(), gb.stats()))
    } else {
        // linear generators first so the minors interreduce on arrival
        let mut gens = vec![v_minus_one];
        gens.extend(kept_polys);
        gens.extend_from_slice(linear_polys);
        gens.extend_from_slice(minor_polys);
        let ideal = Ideal::new(&q.vars, gens);
        let gb = buchberger(&ideal, MonomialOrder::GrevLex, config.limits)?;
        Ok((gb.is_trivial(), gb.stats()))
    }
}

/// Independent post-hoc audit of an INJECTIVE certificate: f0 must be
/// homogeneous, lie in the full un-preprocessed ideal, have a nonzero
/// pure-power leading coefficient, and every slice check must hold when
/// re-run without preprocessing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub f0_homogeneous: bool,
    pub f0_in_full_ideal: bool,
    pub leading_pure_power_nonzero: bool,
    pub all_slices_contain_one: bool,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.f0_homogeneous
            && self.f0_in_full_ideal
            && self.leading_pure_power_nonzero
            && self.all_slices_contain_one
    }
}

pub fn audit_certificate(
    e: &MeasurementEnsemble,
    cert: &Certificate,
    limits: Limits,
) -> Result<AuditReport, CertifyError> {
    let q = symbolic_unknown(e.n, e.symmetric)?;
    let s = 2 * (e.r as usize) + 1;
    let minor_polys = if s <= e.n { minors(&q, s)? } else { Vec::new() };
    let linear_polys = measurement_forms(e, &q)?;
    let f0 = cert
        .f0_poly()
        .ok_or_else(|| CertifyError::InvalidEnsemble("certificate carries no f0".into()))?;
    let f0_homogeneous = f0.is_homogeneous();
    // coefficient of a^deg where a is the first kept variable
    let leading_pure_power_nonzero = match f0.degree() {
        None => false,
        Some(d) => f0
            .terms()
            .iter()
            .any(|t| t.mono.exps()[0] == d as u16 && t.mono.exps()[1] == 0),
    };
    // membership in the full ideal, computed from scratch under grevlex;
    // linear generators first so the minors interreduce on arrival
    let mut gens = linear_polys.clone();
    gens.extend(minor_polys.clone());
    let full = Ideal::new(&q.vars, gens);
    let gb = buchberger(&full, MonomialOrder::GrevLex, limits)
        .map_err(|err| CertifyError::InvalidEnsemble(err.to_string()))?;
    let f0_full = f0.project(&q.vars).expect("kept variables are unknowns");
    let f0_in_full_ideal = gb.normal_form(&f0_full).is_zero();
    // slice checks, no preprocessing
    let kept = vec![cert.kept.0.clone(), cert.kept.1.clone()];
    let no_pre = CertifyConfig {
        keep: Some(cert.kept.clone()),
        limits,
        preprocess: false,
    };
    let mut all_slices = true;
    for vi in 0..q.vars.len() {
        let (ok, _) = slice_contains_one(&q, &minor_polys, &linear_polys, &kept, vi, &no_pre)
            .map_err(|err| CertifyError::InvalidEnsemble(err.to_string()))?;
        if !ok {
            all_slices = false;
        }
    }
    Ok(AuditReport {
        f0_homogeneous,
        f0_in_full_ideal,
        leading_pure_power_nonzero,
        all_slices_contain_one: all_slices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::BigInt;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    #[test]
    fn symbolic_unknown_shapes() {
        let g = symbolic_unknown(4, false).unwrap();
        assert_eq!(g.vars.len(), 16);
        assert_eq!(g.vars.name(0), "x11");
        assert_eq!(g.vars.name(15), "x44");
        let s = symbolic_unknown(4, true).unwrap();
        assert_eq!(s.vars.len(), 10);
        // entry (2,1) shares the x12 variable
        assert_eq!(s.entry(1, 0), Polynomial::variable(&s.vars, 1));
        assert_eq!(s.vars.name(1), "x12");
        assert_eq!(symbolic_unknown(2, false).unwrap().vars.len(), 4);
        assert!(symbolic_unknown(1, false).is_err());
    }

    #[test]
    fn minors_counts_and_degrees() {
        let g = symbolic_unknown(4, false).unwrap();
        let m3 = minors(&g, 3).unwrap();
        assert_eq!(m3.len(), 16);
        assert!(m3
            .iter()
            .all(|p| p.is_homogeneous() && p.degree() == Some(3)));

        let g2 = symbolic_unknown(2, false).unwrap();
        let m2 = minors(&g2, 2).unwrap();
        assert_eq!(m2.len(), 1);
        assert_eq!(
            m2[0],
            Polynomial::parse(&g2.vars, "x11*x22 - x12*x21").unwrap()
        );

        let s = symbolic_unknown(4, true).unwrap();
        let sm = minors(&s, 3).unwrap();
        assert_eq!(sm.len(), 10);

        assert!(minors(&g, 0).is_err());
        assert!(minors(&g, 5).is_err());
    }

    #[test]
    fn measurement_form_examples() {
        let g = symbolic_unknown(4, false).unwrap();
        let identity = MeasurementEnsemble::new(4, 1, false, vec![Matrix::identity(4)]).unwrap();
        let forms = measurement_forms(&identity, &g).unwrap();
        assert_eq!(
            forms[0],
            Polynomial::parse(&g.vars, "x11 + x22 + x33 + x44").unwrap()
        );
        let mut single = Matrix::zero(4, 4);
        *single.at_mut(0, 1) = q(1);
        let e = MeasurementEnsemble::new(4, 1, false, vec![single]).unwrap();
        let forms = measurement_forms(&e, &g).unwrap();
        assert_eq!(forms[0], Polynomial::parse(&g.vars, "x12").unwrap());
    }

    #[test]
    fn evaluate_examples() {
        let e = MeasurementEnsemble::new(4, 1, false, vec![Matrix::identity(4)]).unwrap();
        assert_eq!(
            evaluate_measurements(&e, &Matrix::identity(4)).unwrap(),
            vec![q(4)]
        );
        assert_eq!(
            evaluate_measurements(&e, &Matrix::zero(4, 4)).unwrap(),
            vec![q(0)]
        );
    }

    #[test]
    fn preprocess_examples() {
        let vars = VariableSet::new(["x11", "x12", "x22"]);
        let p = |s: &str| Polynomial::parse(&vars, s).unwrap();
        let pre = linear_preprocess(&vars, &[p("x11 - x12")], &[p("x11*x22")], &[]);
        assert!(!pre.inconsistent);
        assert_eq!(pre.vars.names(), &["x12".to_string(), "x22".to_string()]);
        assert_eq!(
            pre.images,
            vec![Polynomial::parse(&pre.vars, "x12*x22").unwrap()]
        );
        assert_eq!(
            pre.substitution["x11"],
            Polynomial::parse(&pre.vars, "x12").unwrap()
        );

        // keep-protection: a form supported only on kept variables stays
        let vars2 = VariableSet::new(["x43", "x44"]);
        let p2 = |s: &str| Polynomial::parse(&vars2, s).unwrap();
        let pre2 = linear_preprocess(
            &vars2,
            &[p2("x43")],
            &[],
            &["x43".to_string(), "x44".to_string()],
        );
        assert_eq!(pre2.vars.names(), vars2.names());
        assert_eq!(pre2.residual, vec![p2("x43")]);
    }

    #[test]
    fn preprocess_inconsistency() {
        let vars = VariableSet::new(["x", "y"]);
        let p = |s: &str| Polynomial::parse(&vars, s).unwrap();
        // x = 1 and x = 0 cannot both hold
        let pre = linear_preprocess(&vars, &[p("x - 1"), p("x")], &[], &[]);
        assert!(pre.inconsistent);
    }

    #[test]
    fn ensemble_json_round_trip() {
        let e = MeasurementEnsemble::new(
            2,
            1,
            false,
            vec![Matrix::new(
                2,
                2,
                vec![q(1), Rational::new(BigInt::from(1), BigInt::from(2)), q(-3), q(0)],
            )],
        )
        .unwrap();
        let text = e.to_json();
        let back = MeasurementEnsemble::from_json(&text).unwrap();
        assert_eq!(back, e);
        assert_eq!(back.to_json(), text);
        assert!(MeasurementEnsemble::from_json("{}").is_err());
        assert!(MeasurementEnsemble::from_json("{\"n\":2,\"r\":1,\"symmetric\":false,\"matrices\":[[[\"a\",\"0\"],[\"0\",\"0\"]]]}").is_err());
    }

    #[test]
    fn preprocessing_transparent_on_small_symmetric() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        // the elimination ideal in the kept pair must not depend on
        // whether the linear forms are substituted away first
        let q3 = symbolic_unknown(3, true).unwrap();
        let minor_polys = minors(&q3, 3).unwrap();
        let keep = vec!["x23".to_string(), "x33".to_string()];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..6 {
            let m = rng.gen_range(2..=6usize);
            let matrices: Vec<Matrix> = (0..m)
                .map(|_| {
                    Matrix::new(
                        3,
                        3,
                        (0..9)
                            .map(|_| Rational::from_integer(rng.gen_range(-4i64..=4).into()))
                            .collect(),
                    )
                })
                .collect();
            let e = MeasurementEnsemble::new(3, 1, true, matrices).unwrap();
            let linear_polys = measurement_forms(&e, &q3).unwrap();

            let pre = linear_preprocess(&q3.vars, &linear_polys, &minor_polys, &keep);
            assert!(!pre.inconsistent);
            let mut gens = pre.images.clone();
            gens.extend(pre.residual.clone());
            let with = elimination_ideal(&Ideal::new(&pre.vars, gens), &keep, Limits::default())
                .unwrap();

            let mut gens = linear_polys.clone();
            gens.extend(minor_polys.clone());
            let without =
                elimination_ideal(&Ideal::new(&q3.vars, gens), &keep, Limits::default()).unwrap();

            let normalize = |polys: &[Polynomial]| {
                let mut v: Vec<String> = polys
                    .iter()
                    .map(|p| p.primitive_normalize(MonomialOrder::GrevLex).to_string())
                    .collect();
                v.sort();
                v
            };
            assert_eq!(normalize(&with.generators), normalize(&without.generators));
        }
    }

    #[test]
    fn certify_full_rank_2x2() {
        // 4 independent forms on R^{2x2}, rank bound vacuous: only the
        // zero matrix maps to zero, so the map is injective
        let e = MeasurementEnsemble::from_integers(
            2,
            1,
            false,
            &[
                vec![vec![1, 0], vec![0, 0]],
                vec![vec![0, 1], vec![0, 0]],
                vec![vec![0, 0], vec![1, 0]],
                vec![vec![0, 0], vec![0, 1]],
            ],
        )
        .unwrap();
        let cert = vinzant_certify(&e, &CertifyConfig::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Injective);
        assert_eq!(cert.root_count, Some(0));
        assert!(cert.slices.iter().all(|s| s.contains_one));
        // preprocessing must not change the verdict
        let no_pre = CertifyConfig {
            preprocess: false,
            ..CertifyConfig::default()
        };
        assert_eq!(vinzant_certify(&e, &no_pre).unwrap().verdict, Verdict::Injective);
    }

    #[test]
    fn certify_too_few_measurements_fails() {
        // a single form cannot separate rank-1 differences
        let e = MeasurementEnsemble::from_integers(
            2,
            1,
            false,
            &[vec![vec![1, 0], vec![0, 1]]],
        )
        .unwrap();
        let cert = vinzant_certify(&e, &CertifyConfig::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Fail);
    }

    #[test]
    fn certify_rank_bound_validation() {
        let e = MeasurementEnsemble::from_integers(
            2,
            2,
            false,
            &[vec![vec![1, 0], vec![0, 1]]],
        )
        .unwrap();
        assert!(matches!(
            vinzant_certify(&e, &CertifyConfig::default()),
            Err(CertifyError::RankTooLarge { .. })
        ));
    }

    #[test]
    fn certify_resource_cap_is_indeterminate() {
        let e = MeasurementEnsemble::from_integers(
            2,
            1,
            false,
            &[
                vec![vec![1, 2], vec![3, 4]],
                vec![vec![0, 1], vec![1, 0]],
                vec![vec![2, 0], vec![0, 1]],
                vec![vec![1, 1], vec![0, 3]],
            ],
        )
        .unwrap();
        let cfg = CertifyConfig {
            limits: Limits {
                max_degree: 0,
                ..Limits::default()
            },
            preprocess: false,
            ..CertifyConfig::default()
        };
        let cert = vinzant_certify(&e, &cfg).unwrap();
        assert_eq!(cert.verdict, Verdict::Indeterminate);
        assert!(cert.reason.is_some());
    }

    #[test]
    fn certificate_json_round_trip() {
        let cert = Certificate {
            verdict: Verdict::Fail,
            reason: Some("slice has solutions".into()),
            f0: Some("x43^2 + x44^2".into()),
            f0_degree: Some(2),
            kept: ("x43".into(), "x44".into()),
            root_count: Some(0),
            slices: vec![SliceResult {
                variable: "x11".into(),
                contains_one: false,
            }],
            stats: Stats::default(),
        };
        let text = cert.to_json();
        let back = Certificate::from_json(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_json(), text);
    }
}
