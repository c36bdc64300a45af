use num_complex::Complex64;

use super::operator::LinearOperator;
use super::space::TruncatedSpace;
use crate::algebra::{monomial_product, star_phase, AlgebraElement, ThetaMatrix};
use crate::clifford::CMatrix;
use crate::error::{Error, Result};

/// Left-regular GNS action π(U^q)|k⟩ = phase(q,k)|q+k⟩ ⊗ 1, dropping shifts that
/// leave the cutoff box.
pub fn represent(a: &AlgebraElement, space: &TruncatedSpace) -> Result<LinearOperator> {
    if a.dim() != space.k {
        return Err(Error::DimensionMismatch {
            expected: space.k,
            got: a.dim(),
        });
    }
    let sd = space.spinor_dim;
    let points = space.lattice_points();
    let mut entries = Vec::with_capacity(a.len() * space.dim());
    for (q, c) in a.terms() {
        for (col, k) in points.iter().enumerate() {
            let (phase, target) = monomial_product(q, k, a.theta())?;
            if let Some(row) = space.lattice_index(&target) {
                let v = c * phase;
                for s in 0..sd {
                    entries.push((row * sd + s, col * sd + s, v));
                }
            }
        }
    }
    Ok(LinearOperator::from_triplets(
        *space,
        entries,
        false,
        a.degree(),
    ))
}

/// δ_j|k⟩ = k_j|k⟩ (0-based j).
pub fn derivation_operator(j: usize, space: &TruncatedSpace) -> Result<LinearOperator> {
    if j >= space.k {
        return Err(Error::IndexOutOfRange {
            index: j,
            bound: space.k,
        });
    }
    Ok(LinearOperator::lattice_diagonal(*space, |k| {
        Complex64::new(k[j] as f64, 0.0)
    }))
}

/// J(|k⟩ ⊗ s) = J₀|k⟩ ⊗ C s̄, where J₀(c U^k) = c̄ (U^k)* is the Tomita involution.
pub fn tomita_j(
    space: &TruncatedSpace,
    theta: &ThetaMatrix,
    c: &CMatrix,
) -> Result<LinearOperator> {
    if theta.dim() != space.k {
        return Err(Error::DimensionMismatch {
            expected: space.k,
            got: theta.dim(),
        });
    }
    let sd = space.spinor_dim;
    if c.nrows() != sd || c.ncols() != sd {
        return Err(Error::DimensionMismatch {
            expected: sd,
            got: c.nrows(),
        });
    }
    let mut entries = Vec::with_capacity(space.dim() * sd);
    for (col, k) in space.lattice_points().iter().enumerate() {
        let neg: Vec<i32> = k.iter().map(|x| -x).collect();
        let row = space.lattice_index(&neg).expect("box is symmetric");
        let ph = star_phase(k, theta);
        for r in 0..sd {
            for s in 0..sd {
                entries.push((row * sd + r, col * sd + s, ph * c[(r, s)]));
            }
        }
    }
    Ok(LinearOperator::from_triplets(*space, entries, true, 0))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::clifford::{build_gammas, pauli};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn theta() -> Arc<ThetaMatrix> {
        Arc::new(ThetaMatrix::from_upper(3, &[0.211, 0.37, -0.093]).unwrap())
    }

    #[test]
    fn unit_is_identity() {
        let th = theta();
        let s = TruncatedSpace::for_torus(3, 2).unwrap();
        let one = represent(&AlgebraElement::one(&th), &s).unwrap();
        assert_eq!(
            one.interior_deviation(&LinearOperator::identity(s), Some(0))
                .unwrap(),
            0.0
        );
    }

    #[test]
    fn commutative_circle_shift() {
        let th = Arc::new(ThetaMatrix::zero(1));
        let s = TruncatedSpace::for_torus(1, 2).unwrap();
        let u = represent(&AlgebraElement::generator(&th, 0).unwrap(), &s).unwrap();
        let d = u.to_dense();
        for r in 0..5 {
            for col in 0..5 {
                let want = if r == col + 1 {
                    c(1.0, 0.0)
                } else {
                    c(0.0, 0.0)
                };
                assert_eq!(d[(r, col)], want);
            }
        }
    }

    #[test]
    fn vacuum_reproduces_trace() {
        let th = theta();
        let s = TruncatedSpace::for_torus(3, 2).unwrap();
        let a = AlgebraElement::from_terms(
            &th,
            [(vec![0, 0, 0], c(0.3, -1.0)), (vec![1, 2, 0], c(2.0, 0.0))],
        )
        .unwrap();
        let pa = represent(&a, &s).unwrap();
        let vac = s.index(&[0, 0, 0], 0).unwrap();
        assert_eq!(pa.get(vac, vac), a.trace());
    }

    #[test]
    fn derivation_kills_vacuum_and_commutes() {
        let s = TruncatedSpace::for_torus(3, 2).unwrap();
        let d0 = derivation_operator(0, &s).unwrap();
        let d2 = derivation_operator(2, &s).unwrap();
        let vac = s.index(&[0, 0, 0], 1).unwrap();
        assert_eq!(d0.get(vac, vac), c(0.0, 0.0));
        assert_eq!(
            LinearOperator::commutator(&d0, &d2)
                .unwrap()
                .max_abs_entry(),
            0.0
        );
        assert!(derivation_operator(3, &s).is_err());
    }

    #[test]
    fn j_squares_to_epsilon_and_anticommutes_with_derivations() {
        let th = theta();
        let s = TruncatedSpace::for_torus(3, 2).unwrap();
        let g = build_gammas(3).unwrap();
        let j = tomita_j(&s, &th, &g.charge_conj).unwrap();
        let j2 = j.compose(&j).unwrap();
        assert!(!j2.is_antilinear());
        let minus_one = LinearOperator::identity(s).scale_real(-1.0);
        assert!(j2.interior_deviation(&minus_one, Some(0)).unwrap() < 1e-14);
        for i in 0..3 {
            let d = derivation_operator(i, &s).unwrap();
            let anti = d
                .compose(&j)
                .unwrap()
                .try_add(&j.compose(&d).unwrap())
                .unwrap();
            assert_eq!(anti.max_abs_entry(), 0.0);
        }
        assert_eq!(g.charge_conj, pauli(2) * c(0.0, 1.0));
    }

    #[test]
    fn j_implements_right_multiplication_by_adjoint() {
        // J π(a)* J⁻¹ |k⟩ = |k⟩·a  (right regular action) on the interior
        let th = theta();
        let s = TruncatedSpace::for_torus(3, 3).unwrap();
        let g = build_gammas(3).unwrap();
        let j = tomita_j(&s, &th, &g.charge_conj).unwrap();
        let a = AlgebraElement::from_terms(
            &th,
            [(vec![1, 0, -1], c(0.5, 0.2)), (vec![0, 1, 1], c(-1.0, 0.7))],
        )
        .unwrap();
        let right = represent(&a, &s)
            .unwrap()
            .adjoint()
            .conjugate_by(&j)
            .unwrap();
        let mut entries = Vec::new();
        for (col, k) in s.lattice_points().iter().enumerate() {
            let km = AlgebraElement::monomial(&th, k.clone(), c(1.0, 0.0)).unwrap();
            for (idx, v) in (&km * &a).terms() {
                if let Some(row) = s.lattice_index(idx) {
                    for sp in 0..2 {
                        entries.push((row * 2 + sp, col * 2 + sp, *v));
                    }
                }
            }
        }
        let want = LinearOperator::from_triplets(s, entries, false, 2);
        assert!(right.interior_deviation(&want, Some(2)).unwrap() < 1e-13);
    }
}
