use num_complex::Complex64;
use sprs::{CsMat, TriMat};

use super::space::TruncatedSpace;
use crate::clifford::CMatrix;
use crate::error::{Error, Result};

/// A finite matrix on a truncated space, acting either linearly (v ↦ Mv) or
/// antilinearly (v ↦ Mv̄).
///
/// `shift_radius` bounds how far, in |·|_∞, the operator moves lattice sectors.
/// Identities between operators of total radius r are exact on basis vectors
/// with |k|_∞ ≤ Λ − r.
#[derive(Clone, Debug)]
pub struct LinearOperator {
    space: TruncatedSpace,
    matrix: CsMat<Complex64>,
    antilinear: bool,
    shift_radius: u32,
}

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl LinearOperator {
    pub fn from_triplets(
        space: TruncatedSpace,
        entries: impl IntoIterator<Item = (usize, usize, Complex64)>,
        antilinear: bool,
        shift_radius: u32,
    ) -> Self {
        let n = space.dim();
        let mut tri = TriMat::new((n, n));
        for (r, c, v) in entries {
            if v != czero() {
                tri.add_triplet(r, c, v);
            }
        }
        LinearOperator {
            space,
            matrix: tri.to_csr(),
            antilinear,
            shift_radius,
        }
    }

    pub(crate) fn from_csr(
        space: TruncatedSpace,
        matrix: CsMat<Complex64>,
        antilinear: bool,
        shift_radius: u32,
    ) -> Self {
        let matrix = if matrix.is_csr() {
            matrix
        } else {
            matrix.to_csr()
        };
        LinearOperator {
            space,
            matrix,
            antilinear,
            shift_radius,
        }
    }

    pub fn zero(space: TruncatedSpace) -> Self {
        Self::from_triplets(space, std::iter::empty(), false, 0)
    }

    pub fn identity(space: TruncatedSpace) -> Self {
        Self::from_csr(space, CsMat::eye(space.dim()), false, 0)
    }

    /// 1 ⊗ M on the spinor factor.
    pub fn spinor_constant(space: TruncatedSpace, m: &CMatrix) -> Result<Self> {
        Self::lattice_local(space, |_| Some(m.clone()))
    }

    /// Block-diagonal operator with block f(k) on each lattice sector.
    pub fn lattice_local<F>(space: TruncatedSpace, f: F) -> Result<Self>
    where
        F: Fn(&[i32]) -> Option<CMatrix>,
    {
        let sd = space.spinor_dim;
        let mut entries = Vec::new();
        for li in 0..space.lattice_size() {
            if let Some(block) = f(&space.point(li)) {
                if block.nrows() != sd || block.ncols() != sd {
                    return Err(Error::DimensionMismatch {
                        expected: sd,
                        got: block.nrows(),
                    });
                }
                for r in 0..sd {
                    for c in 0..sd {
                        entries.push((li * sd + r, li * sd + c, block[(r, c)]));
                    }
                }
            }
        }
        Ok(Self::from_triplets(space, entries, false, 0))
    }

    /// Diagonal f(k) ⊗ 1.
    pub fn lattice_diagonal<F>(space: TruncatedSpace, f: F) -> Self
    where
        F: Fn(&[i32]) -> Complex64,
    {
        let sd = space.spinor_dim;
        let entries = (0..space.lattice_size()).flat_map(|li| {
            let v = f(&space.point(li));
            (0..sd).map(move |s| (li * sd + s, li * sd + s, v))
        });
        Self::from_triplets(space, entries.collect::<Vec<_>>(), false, 0)
    }

    pub fn space(&self) -> &TruncatedSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CsMat<Complex64> {
        &self.matrix
    }

    pub fn is_antilinear(&self) -> bool {
        self.antilinear
    }

    pub fn shift_radius(&self) -> u32 {
        self.shift_radius
    }

    pub fn with_shift_radius(mut self, r: u32) -> Self {
        self.shift_radius = r;
        self
    }

    pub fn nnz(&self) -> usize {
        self.matrix.nnz()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix.get(row, col).copied().unwrap_or_default()
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    fn conj_matrix(m: &CsMat<Complex64>) -> CsMat<Complex64> {
        m.map(|z| z.conj())
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        let rhs = if self.antilinear {
            Self::conj_matrix(&other.matrix)
        } else {
            other.matrix.clone()
        };
        let m = &self.matrix * &rhs;
        Ok(Self::from_csr(
            self.space,
            m,
            self.antilinear ^ other.antilinear,
            self.shift_radius + other.shift_radius,
        ))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        if self.antilinear != other.antilinear {
            return Err(Error::LinearityMismatch);
        }
        Ok(Self::from_csr(
            self.space,
            &self.matrix + &other.matrix,
            self.antilinear,
            self.shift_radius.max(other.shift_radius),
        ))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Left multiplication by the scalar c.
    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_csr(
            self.space,
            self.matrix.map(|z| z * c),
            self.antilinear,
            self.shift_radius,
        )
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Hilbert-space adjoint: M† for linear operators, Mᵀ for antilinear ones.
    pub fn adjoint(&self) -> Self {
        let t = self.matrix.transpose_view().to_csr();
        let m = if self.antilinear {
            t
        } else {
            Self::conj_matrix(&t)
        };
        Self::from_csr(self.space, m, self.antilinear, self.shift_radius)
    }

    /// AB + sign·BA; sign = −1 gives the commutator, +1 the anticommutator.
    pub fn bracket(a: &Self, b: &Self, sign: f64) -> Result<Self> {
        a.compose(b)?.try_add(&b.compose(a)?.scale_real(sign))
    }

    pub fn commutator(a: &Self, b: &Self) -> Result<Self> {
        Self::bracket(a, b, -1.0)
    }

    pub fn anticommutator(a: &Self, b: &Self) -> Result<Self> {
        Self::bracket(a, b, 1.0)
    }

    /// U A U⁻¹ for a unitary (possibly antilinear) U, using U⁻¹ = U†.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.compose(self)?.compose(&u.adjoint())
    }

    /// Action on a coefficient vector.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.space.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim(),
                got: v.len(),
            });
        }
        let mut out = vec![czero(); v.len()];
        for (r, row) in self.matrix.outer_iterator().enumerate() {
            let mut acc = czero();
            for (c, z) in row.iter() {
                acc += z * if self.antilinear { v[c].conj() } else { v[c] };
            }
            out[r] = acc;
        }
        Ok(out)
    }

    fn abs_sums(&self, cols: Option<&[bool]>) -> (f64, f64) {
        let n = self.space.dim();
        let mut col = vec![0.0; n];
        let mut max_row: f64 = 0.0;
        for row in self.matrix.outer_iterator() {
            let mut s = 0.0;
            for (c, z) in row.iter() {
                if cols.is_none_or(|m| m[c]) {
                    let a = z.norm();
                    s += a;
                    col[c] += a;
                }
            }
            max_row = max_row.max(s);
        }
        (col.into_iter().fold(0.0, f64::max), max_row)
    }

    /// Upper bound √(‖·‖₁‖·‖_∞) on the 2-norm of the full matrix.
    pub fn norm_bound(&self) -> f64 {
        let (c, r) = self.abs_sums(None);
        (c * r).sqrt()
    }

    /// Upper bound on the 2-norm of the operator restricted to basis vectors
    /// with |k|_∞ ≤ Λ − r.
    pub fn interior_norm(&self, r: u32) -> f64 {
        let mask = self.space.interior_mask(r);
        let (c, rw) = self.abs_sums(Some(&mask));
        (c * rw).sqrt()
    }

    /// Largest column 2-norm over interior basis vectors, i.e. sup ‖Av‖ over
    /// interior basis vectors v.
    pub fn interior_column_sup(&self, r: u32) -> f64 {
        let mask = self.space.interior_mask(r);
        let mut col = vec![0.0; self.space.dim()];
        for row in self.matrix.outer_iterator() {
            for (c, z) in row.iter() {
                if mask[c] {
                    col[c] += z.norm_sqr();
                }
            }
        }
        col.into_iter().fold(0.0, f64::max).sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs_entry(&self) -> f64 {
        self.matrix
            .data()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Interior-norm bound of self − other at radius max of the two radii
    /// (or `r` if given). Returns +∞ on mismatched linearity.
    pub fn interior_deviation(&self, other: &Self, r: Option<u32>) -> Result<f64> {
        if self.antilinear != other.antilinear {
            return Ok(f64::INFINITY);
        }
        let r = r.unwrap_or(self.shift_radius.max(other.shift_radius));
        Ok(self.try_sub(other)?.interior_norm(r))
    }

    /// ‖A − A†‖ (bound) over the whole truncated space.
    pub fn selfadjoint_deviation(&self) -> f64 {
        self.try_sub(&self.adjoint())
            .map(|d| d.norm_bound())
            .unwrap_or(f64::INFINITY)
    }

    /// P A P onto the basis vectors listed in `indices`, re-indexed as `target`.
    pub fn restrict(&self, indices: &[usize], target: TruncatedSpace) -> Result<Self> {
        if indices.len() != target.dim() {
            return Err(Error::DimensionMismatch {
                expected: target.dim(),
                got: indices.len(),
            });
        }
        let mut pos = vec![usize::MAX; self.space.dim()];
        for (new, old) in indices.iter().enumerate() {
            pos[*old] = new;
        }
        let mut entries = Vec::new();
        for (new_r, old_r) in indices.iter().enumerate() {
            if let Some(row) = self.matrix.outer_view(*old_r) {
                for (c, z) in row.iter() {
                    if pos[c] != usize::MAX {
                        entries.push((new_r, pos[c], *z));
                    }
                }
            }
        }
        Ok(Self::from_triplets(
            target,
            entries,
            self.antilinear,
            self.shift_radius,
        ))
    }

    /// Dense copy of the matrix (for export and small oracles).
    pub fn to_dense(&self) -> CMatrix {
        let n = self.space.dim();
        let mut m = CMatrix::zeros(n, n);
        for (r, row) in self.matrix.outer_iterator().enumerate() {
            for (c, z) in row.iter() {
                m[(r, c)] = *z;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> TruncatedSpace {
        TruncatedSpace::new(1, 2, 1).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn shift() -> LinearOperator {
        LinearOperator::from_triplets(space(), (0..4).map(|i| (i + 1, i, c(0.0, 1.0))), false, 1)
    }

    fn conj_op() -> LinearOperator {
        LinearOperator::from_triplets(space(), (0..5).map(|i| (i, i, c(1.0, 0.0))), true, 0)
    }

    #[test]
    fn antilinear_flag_algebra() {
        let k = conj_op();
        assert!(!k.compose(&k).unwrap().is_antilinear());
        let v = vec![c(1.0, 2.0); 5];
        let kv = k.apply(&v).unwrap();
        assert_eq!(kv[0], c(1.0, -2.0));
        // K (iS) K = −iS conjugated entries
        let ks = k.compose(&shift()).unwrap().compose(&k).unwrap();
        assert_eq!(ks.get(1, 0), c(0.0, -1.0));
        assert!(ks.try_add(&k).is_err());
    }

    #[test]
    fn adjoint_is_involutive_and_tracks_radius() {
        let s = shift();
        assert_eq!(s.adjoint().adjoint().to_dense(), s.to_dense());
        assert_eq!(s.adjoint().shift_radius(), 1);
        assert_eq!(s.compose(&s).unwrap().shift_radius(), 2);
        let j = LinearOperator::from_triplets(
            space(),
            (0..5).map(|i| (4 - i, i, c(0.0, 1.0))),
            true,
            0,
        );
        // ⟨w, Jv⟩ = conj⟨J†w, v⟩
        let v: Vec<_> = (0..5).map(|i| c(i as f64, 1.0 - i as f64)).collect();
        let w: Vec<_> = (0..5).map(|i| c(0.5 * i as f64, 2.0)).collect();
        let inner = |a: &[Complex64], b: &[Complex64]| {
            a.iter()
                .zip(b)
                .map(|(x, y)| x.conj() * y)
                .sum::<Complex64>()
        };
        let lhs = inner(&w, &j.apply(&v).unwrap());
        let rhs = inner(&j.adjoint().apply(&w).unwrap(), &v).conj();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn self_commutator_vanishes() {
        let s = shift();
        assert_eq!(LinearOperator::commutator(&s, &s).unwrap().nnz(), 0);
    }

    #[test]
    fn interior_norm_ignores_boundary_columns() {
        let s = shift();
        let t = LinearOperator::from_triplets(
            space(),
            (0..4)
                .map(|i| (i + 1, i, c(0.0, 1.0)))
                .chain([(0, 4, c(5.0, 0.0))]),
            false,
            1,
        );
        assert_eq!(s.interior_deviation(&t, Some(1)).unwrap(), 0.0);
        assert!(s.interior_deviation(&t, Some(0)).unwrap() >= 5.0);
    }

    #[test]
    fn commutator_norm_matches_dense() {
        let a = shift();
        let b = LinearOperator::lattice_diagonal(space(), |k| c(k[0] as f64, 0.0));
        let comm = LinearOperator::commutator(&b, &a).unwrap();
        let dense = a.to_dense();
        let bd = b.to_dense();
        let want = &bd * &dense - &dense * &bd;
        let svd = want.clone().svd(false, false);
        let two_norm = svd.singular_values.max();
        assert!((comm.norm_bound() - two_norm).abs() < 1e-12);
        assert!(crate::clifford::max_abs_diff(&comm.to_dense(), &want) < 1e-15);
    }

    #[test]
    fn restrict_reindexes() {
        let b = LinearOperator::lattice_diagonal(space(), |k| c(k[0] as f64, 0.0));
        let target = TruncatedSpace::new(0, 2, 1).unwrap();
        let r = b.restrict(&[4], target).unwrap();
        assert_eq!(r.get(0, 0), c(2.0, 0.0));
        assert!(b.restrict(&[0, 1], target).is_err());
    }
}
