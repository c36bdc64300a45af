use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Real antisymmetric deformation matrix of a noncommutative torus.
///
/// Serializes as a row-major array of rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct ThetaMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl ThetaMatrix {
    pub fn zero(dim: usize) -> Self {
        ThetaMatrix {
            dim,
            entries: vec![0.0; dim * dim],
        }
    }

    /// Builds θ from its full row-major form, rejecting anything that is not
    /// exactly antisymmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::RaggedTheta);
        }
        for i in 0..dim {
            for j in 0..dim {
                if rows[i][j] != -rows[j][i] {
                    return Err(Error::NotAntisymmetric { row: i, col: j });
                }
            }
        }
        Ok(ThetaMatrix {
            dim,
            entries: rows.iter().flatten().copied().collect(),
        })
    }

    /// Builds θ from the strict upper triangle, listed row by row
    /// (θ₀₁, θ₀₂, …, θ₁₂, …).
    pub fn from_upper(dim: usize, upper: &[f64]) -> Result<Self> {
        let expected = dim * dim.saturating_sub(1) / 2;
        if upper.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: upper.len(),
            });
        }
        let mut theta = ThetaMatrix::zero(dim);
        let mut it = upper.iter();
        for i in 0..dim {
            for j in i + 1..dim {
                theta.set(i, j, *it.next().unwrap());
            }
        }
        Ok(theta)
    }

    /// Sets θᵢⱼ and θⱼᵢ = −θᵢⱼ together.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(i != j || value == 0.0, "diagonal of theta must vanish");
        self.entries[i * self.dim + j] = value;
        self.entries[j * self.dim + i] = -value;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries
            .chunks(self.dim.max(1))
            .take(self.dim)
            .map(|r| r.to_vec())
            .collect()
    }

    /// Exponent Σ_{i>j} kᵢ lⱼ θᵢⱼ of the phase picked up when the normal-ordered
    /// monomials U^k and U^l are multiplied.
    pub fn product_exponent(&self, k: &[i32], l: &[i32]) -> f64 {
        let mut acc = 0.0;
        for i in 1..self.dim {
            if k[i] == 0 {
                continue;
            }
            let row = &self.entries[i * self.dim..i * self.dim + i];
            let mut s = 0.0;
            for (j, t) in row.iter().enumerate() {
                s += l[j] as f64 * t;
            }
            acc += k[i] as f64 * s;
        }
        acc
    }
}

impl TryFrom<Vec<Vec<f64>>> for ThetaMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        ThetaMatrix::from_rows(&rows)
    }
}

impl From<ThetaMatrix> for Vec<Vec<f64>> {
    fn from(t: ThetaMatrix) -> Self {
        t.rows()
    }
}
