//! Euclidean Clifford generators, chirality, charge conjugation and the
//! KR-dimension sign table.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Signs (ε, ε′, ε″) with J² = ε, JD = ε′DJ, Jγ = ε″γJ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KRSigns {
    pub dim_mod8: u8,
    pub eps: i8,
    pub eps_prime: i8,
    /// Only defined for even KR-dimension.
    pub eps_double_prime: Option<i8>,
}

pub fn kr_signs(d: usize) -> KRSigns {
    let r = (d % 8) as u8;
    let (eps, eps_prime, eps_double_prime) = match r {
        0 => (1, 1, Some(1)),
        1 => (1, -1, None),
        2 => (-1, 1, Some(-1)),
        3 => (-1, 1, None),
        4 => (-1, 1, Some(1)),
        5 => (-1, -1, None),
        6 => (1, 1, Some(-1)),
        _ => (1, 1, None),
    };
    KRSigns {
        dim_mod8: r,
        eps,
        eps_prime,
        eps_double_prime,
    }
}

pub fn pauli(k: usize) -> CMatrix {
    match k {
        1 => CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        2 => CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        3 => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        _ => CMatrix::identity(2, 2),
    }
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Irreducible gamma matrices for Cl(d) with the matching chirality and
/// charge conjugation J = C∘(complex conjugation).
#[derive(Clone, Debug)]
pub struct GammaSet {
    pub d: usize,
    pub matrices: Vec<CMatrix>,
    pub chirality: Option<CMatrix>,
    pub charge_conj: CMatrix,
    pub signs: KRSigns,
}

impl GammaSet {
    pub fn spinor_dim(&self) -> usize {
        self.matrices.first().map_or(1, |m| m.nrows())
    }
}

fn product(ms: &[CMatrix], dim: usize) -> CMatrix {
    ms.iter()
        .fold(CMatrix::identity(dim, dim), |acc, m| acc * m)
}

/// Generators only. Odd d = 2p+1 appends (−i)^p γ¹⋯γ^{2p} to the even set;
/// even d = 2p+2 takes γ^i ⊗ σ³ from the odd set and appends 1 ⊗ σ¹.
fn generators(d: usize) -> Vec<CMatrix> {
    match d {
        0 => Vec::new(),
        1 => vec![CMatrix::from_element(1, 1, ONE)],
        2 => vec![pauli(1), pauli(2)],
        _ if d % 2 == 1 => {
            let mut g = generators(d - 1);
            let p = (d - 1) / 2;
            let dim = g[0].nrows();
            let phase = (-I).powi(p as i32);
            g.push(product(&g, dim) * phase);
            g
        }
        _ => {
            let odd = generators(d - 1);
            let dim = odd[0].nrows();
            let mut g: Vec<CMatrix> = odd.iter().map(|m| kron(m, &pauli(3))).collect();
            g.push(kron(&CMatrix::identity(dim, dim), &pauli(1)));
            g
        }
    }
}

/// Solves C γ̄ⁱ C⁻¹ = s γⁱ for all i by averaging X over the Clifford group.
fn charge_conjugation(g: &[CMatrix], s: f64) -> Option<CMatrix> {
    let dim = g.first().map_or(1, |m| m.nrows());
    let d = g.len();
    for seed in 0..dim * dim {
        let mut x = CMatrix::zeros(dim, dim);
        x[(seed / dim, seed % dim)] = ONE;
        let mut c = CMatrix::zeros(dim, dim);
        for mask in 0u32..(1 << d) {
            let sel: Vec<CMatrix> = (0..d)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| g[i].clone())
                .collect();
            let gi = product(&sel, dim);
            let gi_bar_inv = gi.map(|z| z.conj()).try_inverse()?;
            let sign = s.powi(mask.count_ones() as i32);
            c += (&gi * &x * gi_bar_inv) * Complex64::new(sign, 0.0);
        }
        let norm = c.norm();
        if norm > 1e-8 {
            // C†C is a positive multiple of 1 by irreducibility
            let scale = (c.adjoint() * &c)[(0, 0)].re.sqrt();
            let mut c = c / Complex64::new(scale, 0.0);
            if let Some(first) = (0..dim)
                .flat_map(|r| (0..dim).map(move |col| (r, col)))
                .map(|rc| c[rc])
                .find(|z| z.norm() > 1e-12)
            {
                c *= first.conj() / first.norm();
            }
            return Some(c.map(clean));
        }
    }
    None
}

/// Snaps rounding noise to exact 0, ±1, ±i.
fn clean(z: Complex64) -> Complex64 {
    let snap = |x: f64| {
        for t in [-1.0, 0.0, 1.0] {
            if (x - t).abs() < 1e-12 {
                return t;
            }
        }
        x
    };
    Complex64::new(snap(z.re), snap(z.im))
}

pub fn build_gammas(d: usize) -> Result<GammaSet> {
    if d == 0 {
        return Err(Error::InvalidArgument(
            "Clifford dimension must be at least 1".into(),
        ));
    }
    let matrices = generators(d);
    let dim = matrices[0].nrows();
    let signs = kr_signs(d);
    let chirality = d
        .is_multiple_of(2)
        .then(|| product(&matrices, dim) * (-I).powi((d / 2) as i32));
    let s = -f64::from(signs.eps_prime);
    let charge_conj = charge_conjugation(&matrices, s)
        .ok_or_else(|| Error::Degenerate(format!("no charge conjugation for d={d}")))?;
    Ok(GammaSet {
        d,
        matrices,
        chirality,
        charge_conj,
        signs,
    })
}

/// Γ = phase·γ¹⋯γⁿ with phase ∈ {1, i} chosen so that Γ is Hermitian and Γ² = 1.
pub fn vertical_grading(gammas: &GammaSet, n: usize) -> Result<CMatrix> {
    if n > gammas.d {
        return Err(Error::IndexOutOfRange {
            index: n,
            bound: gammas.d + 1,
        });
    }
    let dim = gammas.spinor_dim();
    let phase = if (n * n.saturating_sub(1) / 2).is_multiple_of(2) {
        ONE
    } else {
        I
    };
    Ok(product(&gammas.matrices[..n], dim) * phase)
}

/// Max-modulus entry of a − b.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conj(m: &CMatrix) -> CMatrix {
        m.map(|z| z.conj())
    }

    #[test]
    fn sign_table_rows() {
        assert_eq!(
            (
                kr_signs(3).eps,
                kr_signs(3).eps_prime,
                kr_signs(3).eps_double_prime
            ),
            (-1, 1, None)
        );
        assert_eq!(
            (
                kr_signs(0).eps,
                kr_signs(0).eps_prime,
                kr_signs(0).eps_double_prime
            ),
            (1, 1, Some(1))
        );
        assert_eq!(
            kr_signs(11),
            KRSigns {
                dim_mod8: 3,
                ..kr_signs(3)
            }
        );
    }

    #[test]
    fn three_dimensional_set_is_pauli() {
        let g = build_gammas(3).unwrap();
        for k in 0..3 {
            assert_eq!(g.matrices[k], pauli(k + 1));
        }
        let i_sigma2 = pauli(2) * I;
        assert_eq!(g.charge_conj, i_sigma2);
    }

    #[test]
    fn one_dimensional_set_is_scalar() {
        let g = build_gammas(1).unwrap();
        assert_eq!(g.spinor_dim(), 1);
        assert_eq!(g.matrices[0][(0, 0)], ONE);
    }

    #[test]
    fn clifford_relations_up_to_nine() {
        for d in 1..=9 {
            let g = build_gammas(d).unwrap();
            let dim = g.spinor_dim();
            assert_eq!(dim, 1 << (d / 2));
            let id = CMatrix::identity(dim, dim);
            for i in 0..d {
                assert!(max_abs_diff(&g.matrices[i], &g.matrices[i].adjoint()) < 1e-14);
                for j in 0..d {
                    let ac = &g.matrices[i] * &g.matrices[j] + &g.matrices[j] * &g.matrices[i];
                    let want = if i == j {
                        &id * Complex64::new(2.0, 0.0)
                    } else {
                        CMatrix::zeros(dim, dim)
                    };
                    assert!(max_abs_diff(&ac, &want) < 1e-14, "d={d} i={i} j={j}");
                }
            }
            if let Some(chi) = &g.chirality {
                assert!(max_abs_diff(&(chi * chi), &id) < 1e-14);
                assert!(max_abs_diff(chi, &chi.adjoint()) < 1e-14);
                for m in &g.matrices {
                    assert!(max_abs_diff(&(chi * m), &-(m * chi)) < 1e-14);
                }
            }
        }
    }

    #[test]
    fn charge_conjugation_realizes_signs() {
        for d in 1..=9 {
            let g = build_gammas(d).unwrap();
            let c = &g.charge_conj;
            let dim = g.spinor_dim();
            assert!(max_abs_diff(&(c.adjoint() * c), &CMatrix::identity(dim, dim)) < 1e-14);
            let j2 = c * conj(c);
            let eps = Complex64::new(f64::from(g.signs.eps), 0.0);
            assert!(
                max_abs_diff(&j2, &(CMatrix::identity(dim, dim) * eps)) < 1e-14,
                "d={d}"
            );
            let s = Complex64::new(-f64::from(g.signs.eps_prime), 0.0);
            for m in &g.matrices {
                assert!(max_abs_diff(&(c * conj(m)), &(m * c * s)) < 1e-14, "d={d}");
            }
            if let (Some(chi), Some(e2)) = (&g.chirality, g.signs.eps_double_prime) {
                let e2 = Complex64::new(f64::from(e2), 0.0);
                assert!(
                    max_abs_diff(&(c * conj(chi)), &(chi * c * e2)) < 1e-14,
                    "d={d}"
                );
            }
        }
    }

    #[test]
    fn vertical_grading_properties() {
        let g = build_gammas(3).unwrap();
        let gamma = vertical_grading(&g, 2).unwrap();
        // i·σ¹σ² = i·iσ³ = −σ³
        assert_eq!(gamma, -pauli(3));
        for d in 1..=8 {
            let g = build_gammas(d).unwrap();
            let dim = g.spinor_dim();
            for n in 0..=d {
                let v = vertical_grading(&g, n).unwrap();
                assert!(max_abs_diff(&(&v * &v), &CMatrix::identity(dim, dim)) < 1e-14);
                assert!(max_abs_diff(&v, &v.adjoint()) < 1e-14);
                for m in &g.matrices[n..] {
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    assert!(max_abs_diff(&(&v * m), &(m * &v * Complex64::new(sign, 0.0))) < 1e-14);
                }
            }
            if let Some(chi) = &g.chirality {
                let v = vertical_grading(&g, d).unwrap();
                let ratio = (chi * &v).trace() / Complex64::new(dim as f64, 0.0);
                assert!((ratio.norm() - 1.0).abs() < 1e-14);
            }
        }
    }
}
