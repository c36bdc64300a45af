use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::operator::LinearOperator;
use super::space::TruncatedSpace;
use super::spectrum::merge_multiplicities;
use crate::error::{Error, Result};

/// Dense JSON form `{space, antilinear, matrix: [[[re, im], ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub space: TruncatedSpace,
    pub antilinear: bool,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl From<&LinearOperator> for OperatorJson {
    fn from(op: &LinearOperator) -> Self {
        let d = op.to_dense();
        OperatorJson {
            space: *op.space(),
            antilinear: op.is_antilinear(),
            matrix: (0..d.nrows())
                .map(|r| {
                    (0..d.ncols())
                        .map(|c| [d[(r, c)].re, d[(r, c)].im])
                        .collect()
                })
                .collect(),
        }
    }
}

impl OperatorJson {
    /// Rebuilds the operator; the shift radius is not part of the format and
    /// must be supplied.
    pub fn into_operator(self, shift_radius: u32) -> Result<LinearOperator> {
        let n = self.space.dim();
        if self.matrix.len() != n || self.matrix.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.matrix.len(),
            });
        }
        let entries = self.matrix.iter().enumerate().flat_map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(move |(c, [re, im])| (r, c, Complex64::new(*re, *im)))
        });
        Ok(LinearOperator::from_triplets(
            self.space,
            entries.collect::<Vec<_>>(),
            self.antilinear,
            shift_radius,
        ))
    }
}

pub const MULTIPLICITY_RESOLUTION: f64 = 1e-9;

/// Renders `index,eigenvalue,multiplicity` rows for an ascending spectrum.
/// Values are printed with 12 fractional digits; −0 is written as 0.
pub fn spectrum_csv(sorted: &[f64]) -> String {
    let mut out = String::from("index,eigenvalue,multiplicity\n");
    for (i, (v, m)) in merge_multiplicities(sorted, MULTIPLICITY_RESOLUTION)
        .into_iter()
        .enumerate()
    {
        let v = if v.abs() < 5e-13 { 0.0 } else { v };
        writeln!(out, "{i},{v:.12},{m}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_rows() {
        let csv = spectrum_csv(&[-1.0, -1.0 + 1e-12, -1e-15, 2.0]);
        assert_eq!(
            csv,
            "index,eigenvalue,multiplicity\n0,-1.000000000000,2\n1,0.000000000000,1\n2,2.000000000000,1\n"
        );
    }

    #[test]
    fn json_roundtrip() {
        let s = TruncatedSpace::new(1, 1, 1).unwrap();
        let op = LinearOperator::from_triplets(s, [(0, 2, Complex64::new(0.5, -1.0))], true, 2);
        let json = serde_json::to_string(&OperatorJson::from(&op)).unwrap();
        assert!(json
            .starts_with("{\"space\":{\"k\":1,\"lambda\":1,\"spinor_dim\":1},\"antilinear\":true"));
        let back: OperatorJson = serde_json::from_str(&json).unwrap();
        let op2 = back.into_operator(2).unwrap();
        assert_eq!(op2.to_dense(), op.to_dense());
        assert!(op2.is_antilinear());
    }
}
