use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// span{|k⟩ : k ∈ ℤᵏ, |k|_∞ ≤ Λ} ⊗ ℂ^spinor_dim.
///
/// Basis vector (k, s) has index `lattice_index(k) * spinor_dim + s`, with the
/// lattice enumerated lexicographically (first coordinate most significant).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncatedSpace {
    pub k: usize,
    #[serde(rename = "lambda")]
    pub cutoff: u32,
    pub spinor_dim: usize,
}

impl TruncatedSpace {
    pub fn new(k: usize, cutoff: u32, spinor_dim: usize) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::InvalidArgument("cutoff must be positive".into()));
        }
        if spinor_dim == 0 {
            return Err(Error::InvalidArgument(
                "spinor dimension must be positive".into(),
            ));
        }
        Ok(TruncatedSpace {
            k,
            cutoff,
            spinor_dim,
        })
    }

    /// Spinor dimension 2^{⌊k/2⌋}, the irreducible Clifford module size.
    pub fn for_torus(k: usize, cutoff: u32) -> Result<Self> {
        Self::new(k, cutoff, 1 << (k / 2))
    }

    pub fn side(&self) -> usize {
        2 * self.cutoff as usize + 1
    }

    pub fn lattice_size(&self) -> usize {
        self.side().pow(self.k as u32)
    }

    pub fn dim(&self) -> usize {
        self.lattice_size() * self.spinor_dim
    }

    pub fn contains(&self, point: &[i32]) -> bool {
        let l = self.cutoff as i32;
        point.iter().all(|x| (-l..=l).contains(x))
    }

    pub fn lattice_index(&self, point: &[i32]) -> Option<usize> {
        if point.len() != self.k || !self.contains(point) {
            return None;
        }
        let side = self.side();
        let l = self.cutoff as i32;
        Some(point.iter().fold(0, |acc, x| acc * side + (x + l) as usize))
    }

    pub fn point(&self, lattice_index: usize) -> Vec<i32> {
        let side = self.side();
        let l = self.cutoff as i32;
        let mut out = vec![0; self.k];
        let mut rest = lattice_index;
        for slot in out.iter_mut().rev() {
            *slot = (rest % side) as i32 - l;
            rest /= side;
        }
        out
    }

    pub fn index(&self, point: &[i32], spinor: usize) -> Option<usize> {
        self.lattice_index(point)
            .map(|i| i * self.spinor_dim + spinor)
    }

    /// All lattice points in basis order.
    pub fn lattice_points(&self) -> Vec<Vec<i32>> {
        (0..self.lattice_size()).map(|i| self.point(i)).collect()
    }

    /// Basis indices whose lattice point satisfies |k|_∞ ≤ Λ − r.
    pub fn interior_mask(&self, r: u32) -> Vec<bool> {
        let bound = self.cutoff as i64 - r as i64;
        let mut mask = Vec::with_capacity(self.dim());
        for i in 0..self.lattice_size() {
            let inside = bound >= 0 && self.point(i).iter().all(|x| (*x as i64).abs() <= bound);
            mask.extend(std::iter::repeat_n(inside, self.spinor_dim));
        }
        mask
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_roundtrip() {
        let s = TruncatedSpace::for_torus(3, 2).unwrap();
        assert_eq!(s.dim(), 125 * 2);
        for i in 0..s.lattice_size() {
            assert_eq!(s.lattice_index(&s.point(i)), Some(i));
        }
        assert_eq!(s.point(0), vec![-2, -2, -2]);
        assert_eq!(s.point(1), vec![-2, -2, -1]);
        assert_eq!(s.lattice_index(&[3, 0, 0]), None);
    }

    #[test]
    fn interior_counts() {
        let s = TruncatedSpace::for_torus(2, 3).unwrap();
        let count = |r| s.interior_mask(r).iter().filter(|b| **b).count();
        assert_eq!(count(0), 49 * 2);
        assert_eq!(count(1), 25 * 2);
        assert_eq!(count(3), 2);
        assert_eq!(count(4), 0);
    }

    #[test]
    fn zero_dimensional_lattice_is_a_point() {
        let s = TruncatedSpace::new(0, 2, 2).unwrap();
        assert_eq!(s.lattice_size(), 1);
        assert_eq!(s.point(0), Vec::<i32>::new());
        assert_eq!(s.interior_mask(2), vec![true, true]);
    }
}
