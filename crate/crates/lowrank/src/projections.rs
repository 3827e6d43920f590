//! Phase retrieval by projections: exact orthogonal projectors from
//! rational subspace bases, reduction to the symmetric rank-1
//! certification pipeline, and the finite-complement-property check.
//!
//! The map x -> (||P_1 x||^2, ..., ||P_m x||^2) determines x up to sign
//! exactly when Q -> (<A_j, Q>) is injective on symmetric rank <= 1
//! differences, with A_j the projector onto W_j; certify_phase_retrieval
//! runs that reduction.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::{
    vinzant_certify, Certificate, CertifyConfig, CertifyError, MeasurementEnsemble,
};
use crate::exactnum::{format_rational, parse_rational, Rational};
use crate::linalg::{clear_denominators, integer_rank, Matrix};

#[derive(Debug, Error)]
pub enum ProjectionError {
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("expected vectors of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("subset enumeration over {m} vectors exceeds the cap of {cap}")]
    TooManyVectors { m: usize, cap: usize },
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error(transparent)]
    Certify(#[from] CertifyError),
}

/// A subspace of R^n given by a rational basis (not necessarily
/// orthonormal).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    pub n: usize,
    pub basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn new(n: usize, basis: Vec<Vec<Rational>>) -> Result<Subspace, ProjectionError> {
        if basis.is_empty() {
            return Err(ProjectionError::DependentBasis);
        }
        for v in &basis {
            if v.len() != n {
                return Err(ProjectionError::DimensionMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
        }
        Ok(Subspace { n, basis })
    }

    pub fn from_integers(n: usize, basis: &[Vec<i64>]) -> Result<Subspace, ProjectionError> {
        Self::new(
            n,
            basis
                .iter()
                .map(|v| v.iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn projector(&self) -> Result<Matrix, ProjectionError> {
        projection_matrix(&self.basis)
    }
}

/// The orthogonal projector onto span(basis): P = B (B^T B)^{-1} B^T,
/// exact over Q. The Gram matrix is invertible iff the basis is
/// independent.
pub fn projection_matrix(basis: &[Vec<Rational>]) -> Result<Matrix, ProjectionError> {
    if basis.is_empty() {
        return Err(ProjectionError::DependentBasis);
    }
    let n = basis[0].len();
    for v in basis {
        if v.len() != n {
            return Err(ProjectionError::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
    }
    let b = Matrix::from_columns(basis);
    let bt = b.transpose();
    let gram = bt.mul(&b);
    let inv = gram.invert().ok_or(ProjectionError::DependentBasis)?;
    Ok(b.mul(&inv).mul(&bt))
}

/// Measurement ensemble of the projectors: symmetric unknown, r = 1.
pub fn projection_ensemble(
    subspaces: &[Subspace],
    n: usize,
) -> Result<MeasurementEnsemble, ProjectionError> {
    let mut matrices = Vec::with_capacity(subspaces.len());
    for w in subspaces {
        if w.n != n {
            return Err(ProjectionError::DimensionMismatch {
                expected: n,
                got: w.n,
            });
        }
        matrices.push(w.projector()?);
    }
    Ok(MeasurementEnsemble::new(n, 1, true, matrices)?)
}

/// INJECTIVE means the subspace family does phase retrieval: the norms
/// ||P_j x|| determine x in R^n up to sign.
pub fn certify_phase_retrieval(
    subspaces: &[Subspace],
    n: usize,
    config: &CertifyConfig,
) -> Result<Certificate, ProjectionError> {
    let e = projection_ensemble(subspaces, n)?;
    Ok(vinzant_certify(&e, config)?)
}

/// True iff for every index subset I, the vectors indexed by I or those
/// indexed by its complement span R^n. Exhaustive over 2^m subsets with
/// exact integer rank, so m is capped.
pub fn complement_property(
    vectors: &[Vec<Rational>],
    cap: usize,
) -> Result<bool, ProjectionError> {
    let m = vectors.len();
    assert!(m >= 1, "need at least one vector");
    if m > cap {
        return Err(ProjectionError::TooManyVectors { m, cap });
    }
    let n = vectors[0].len();
    for v in vectors {
        if v.len() != n {
            return Err(ProjectionError::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
    }
    let rows: Vec<Vec<crate::exactnum::BigInt>> =
        vectors.iter().map(|v| clear_denominators(v)).collect();
    let spans = |mask: u64| {
        let picked: Vec<Vec<crate::exactnum::BigInt>> = (0..m)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| rows[i].clone())
            .collect();
        integer_rank(&picked) == n
    };
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    for mask in 0..=full {
        if !spans(mask) && !spans(full ^ mask) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Serialize, Deserialize)]
struct SubspacesJson {
    n: usize,
    subspaces: Vec<Vec<Vec<String>>>,
}

/// A family of subspaces of a common R^n, as stored on disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceFamily {
    pub n: usize,
    pub subspaces: Vec<Subspace>,
}

impl SubspaceFamily {
    pub fn to_json(&self) -> String {
        let subspaces = self
            .subspaces
            .iter()
            .map(|w| {
                w.basis
                    .iter()
                    .map(|v| v.iter().map(format_rational).collect())
                    .collect()
            })
            .collect();
        serde_json::to_string_pretty(&SubspacesJson {
            n: self.n,
            subspaces,
        })
        .expect("subspace family serializes")
    }

    pub fn from_json(text: &str) -> Result<SubspaceFamily, ProjectionError> {
        let raw: SubspacesJson =
            serde_json::from_str(text).map_err(|e| ProjectionError::Parse(e.to_string()))?;
        let mut subspaces = Vec::with_capacity(raw.subspaces.len());
        for basis in &raw.subspaces {
            let mut vs = Vec::with_capacity(basis.len());
            for v in basis {
                vs.push(
                    v.iter()
                        .map(|e| parse_rational(e).map_err(|_| ProjectionError::Parse(e.clone())))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
            subspaces.push(Subspace::new(raw.n, vs)?);
        }
        Ok(SubspaceFamily {
            n: raw.n,
            subspaces,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::Verdict;
    use crate::exactnum::BigInt;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn qv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    fn e(n: usize, i: usize) -> Vec<Rational> {
        (0..n).map(|k| if k == i { q(1) } else { q(0) }).collect()
    }

    #[test]
    fn projector_examples() {
        // {e1, e2} in R^4 -> diag(1,1,0,0)
        let p = projection_matrix(&[e(4, 0), e(4, 1)]).unwrap();
        let mut expect = Matrix::zero(4, 4);
        *expect.at_mut(0, 0) = q(1);
        *expect.at_mut(1, 1) = q(1);
        assert_eq!(p, expect);
        // {(1,1)} in R^2 -> all entries 1/2
        let p = projection_matrix(&[qv(&[1, 1])]).unwrap();
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        assert!((0..2).all(|i| (0..2).all(|j| *p.at(i, j) == half)));
        // dependent basis rejected
        assert!(matches!(
            projection_matrix(&[qv(&[1, 2]), qv(&[2, 4])]),
            Err(ProjectionError::DependentBasis)
        ));
    }

    #[test]
    fn projector_of_orthogonal_pair_is_sum_of_rank_ones() {
        // orthogonal pair: P = u u^T/|u|^2 + v v^T/|v|^2
        let u = qv(&[1, 0, -4, -3]);
        let v = qv(&[-17, 4, -2, -3]);
        let dot: Rational = u.iter().zip(&v).map(|(a, b)| a * b).sum();
        assert!(dot.is_zero());
        let nu: Rational = u.iter().map(|a| a * a).sum();
        let nv: Rational = v.iter().map(|a| a * a).sum();
        assert_eq!(nu, q(26));
        assert_eq!(nv, q(318));
        let mut expect = Matrix::zero(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                *expect.at_mut(i, j) = &u[i] * &u[j] / &nu + &v[i] * &v[j] / &nv;
            }
        }
        assert_eq!(projection_matrix(&[u, v]).unwrap(), expect);
    }

    #[test]
    fn basis_invariance() {
        // two bases of the same plane in R^3
        let p1 = projection_matrix(&[qv(&[1, 0, 1]), qv(&[0, 1, 1])]).unwrap();
        let p2 = projection_matrix(&[qv(&[1, 1, 2]), qv(&[1, -1, 0])]).unwrap();
        assert_eq!(p1, p2);
    }

    #[test]
    fn ensemble_examples() {
        let full = Subspace::from_integers(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]])
            .unwrap();
        let e1 = projection_ensemble(&[full], 3).unwrap();
        assert_eq!(e1.matrices[0], Matrix::identity(3));
        assert!(e1.symmetric);
        assert_eq!(e1.r, 1);

        let span_e1 = Subspace::from_integers(4, &[vec![1, 0, 0, 0]]).unwrap();
        let e2 = projection_ensemble(&[span_e1], 4).unwrap();
        let mut expect = Matrix::zero(4, 4);
        *expect.at_mut(0, 0) = q(1);
        assert_eq!(e2.matrices[0], expect);
    }

    #[test]
    fn phase_retrieval_small_plane() {
        // e1, e2, and the diagonal span three independent forms on the
        // 3-dimensional space of symmetric 2x2 matrices
        let ws = vec![
            Subspace::from_integers(2, &[vec![1, 0]]).unwrap(),
            Subspace::from_integers(2, &[vec![0, 1]]).unwrap(),
            Subspace::from_integers(2, &[vec![1, 1]]).unwrap(),
        ];
        let cert = certify_phase_retrieval(&ws, 2, &CertifyConfig::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Injective);
        // one projector alone cannot do it
        let one = vec![Subspace::from_integers(2, &[vec![1, 0]]).unwrap()];
        let cert = certify_phase_retrieval(&one, 2, &CertifyConfig::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Fail);
    }

    #[test]
    fn complement_property_examples() {
        let cap = 24;
        assert!(complement_property(&[e(2, 0), e(2, 1), qv(&[1, 1])], cap).unwrap());
        assert!(!complement_property(&[e(2, 0), e(2, 1)], cap).unwrap());
        // m <= 2n-2 can never have it: split a spanning set off both halves
        assert!(!complement_property(&[e(3, 0), e(3, 1), e(3, 2), qv(&[1, 1, 1])], cap).unwrap());
        assert!(matches!(
            complement_property(&vec![e(2, 0); 5], 4),
            Err(ProjectionError::TooManyVectors { .. })
        ));
    }

    #[test]
    fn subspace_json_round_trip() {
        let fam = SubspaceFamily {
            n: 3,
            subspaces: vec![
                Subspace::from_integers(3, &[vec![1, 0, 1], vec![0, 1, 1]]).unwrap(),
                Subspace::new(3, vec![vec![q(1), Rational::new(1.into(), 2.into()), q(0)]])
                    .unwrap(),
            ],
        };
        let text = fam.to_json();
        let back = SubspaceFamily::from_json(&text).unwrap();
        assert_eq!(back, fam);
        assert_eq!(back.to_json(), text);
        assert!(SubspaceFamily::from_json("{\"n\":2,\"subspaces\":[[[\"x\",\"0\"]]]}").is_err());
    }

    fn arb_subspace() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
        (2usize..=5).prop_flat_map(|n| {
            (1usize..=3.min(n)).prop_flat_map(move |d| {
                proptest::collection::vec(proptest::collection::vec(-5i64..=5, n), d)
                    .prop_map(move |basis| (n, basis))
            })
        })
    }

    proptest! {
        #[test]
        fn projector_laws((n, basis) in arb_subspace()) {
            let rat: Vec<Vec<Rational>> = basis
                .iter()
                .map(|v| v.iter().map(|&x| q(x)).collect())
                .collect();
            match projection_matrix(&rat) {
                Err(ProjectionError::DependentBasis) => {} // fine for random data
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
                Ok(p) => {
                    prop_assert!(p.is_symmetric());
                    prop_assert_eq!(p.mul(&p), p.clone());
                    let dim = integer_rank(
                        &rat.iter().map(|v| clear_denominators(v)).collect::<Vec<_>>(),
                    );
                    prop_assert_eq!(p.trace(), q(dim as i64));
                    for v in &rat {
                        prop_assert_eq!(p.mul_vec(v), v.clone());
                    }
                    // measurement identity: x^T P x = ||P x||^2
                    let x: Vec<Rational> = (0..n).map(|i| q(i as i64 + 1)).collect();
                    let px = p.mul_vec(&x);
                    let lhs: Rational = x.iter().zip(&px).map(|(a, b)| a * b).sum();
                    let rhs: Rational = px.iter().map(|a| a * a).sum();
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
