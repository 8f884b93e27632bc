//! Published `(n, beta, a, b, c)` values, bundled as versioned JSON data.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::candidate::{pair_count, CandidateParams};
use crate::error::{Error, Result};
use crate::roots::find_roots;

const BUNDLED: &str = include_str!("../data/reference.json");

/// The degrees for which a locally extremal candidate is known.
pub const DEGREES: [usize; 9] = [8, 9, 12, 13, 14, 15, 19, 20, 26];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub n: usize,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceSet {
    pub version: u32,
    pub rows: Vec<ReferenceRow>,
}

impl ReferenceSet {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED).expect("bundled reference data is valid")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let set: ReferenceSet = serde_json::from_str(text)?;
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows.is_empty() {
            return Err(Error::Reference("no rows".into()));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.n < 5 {
                return Err(Error::Reference(format!("row {i}: n = {} < 5", row.n)));
            }
            if ![row.beta, row.a, row.b, row.c].iter().all(|v| v.is_finite()) {
                return Err(Error::Reference(format!("row {i}: non-finite value")));
            }
            if self.rows[..i].iter().any(|r| r.n == row.n) {
                return Err(Error::Reference(format!("row {i}: duplicate n = {}", row.n)));
            }
        }
        Ok(())
    }

    pub fn row(&self, n: usize) -> Option<&ReferenceRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

impl ReferenceRow {
    pub fn scalars(&self) -> [f64; 4] {
        [self.beta, self.a, self.b, self.c]
    }

    /// Recovers `d_i = -2 Re z` from the roots of the published polynomial
    /// closest to the unit circle in the upper half plane, sorted ascending.
    pub fn circle_coefficients(&self) -> Result<Vec<f64>> {
        let probe = CandidateParams {
            n: self.n,
            beta: self.beta,
            a: self.a,
            b: self.b,
            c: self.c,
            d: Vec::new(),
        };
        let p = crate::candidate::build_candidate(&probe)?;
        let mut upper: Vec<Complex64> = find_roots(&p)?
            .into_iter()
            .filter(|z| z.im > 1e-6)
            .collect();
        upper.sort_by(|x, y| (x.norm() - 1.0).abs().total_cmp(&(y.norm() - 1.0).abs()));
        let want = pair_count(self.n);
        if upper.len() < want {
            return Err(Error::Reference(format!(
                "n = {}: only {} complex roots",
                self.n,
                upper.len()
            )));
        }
        let mut d: Vec<f64> = upper[..want].iter().map(|z| -2.0 * z.re).collect();
        d.sort_by(f64::total_cmp);
        Ok(d)
    }

    /// The full candidate with `d` recovered from the roots.
    pub fn to_params(&self) -> Result<CandidateParams> {
        CandidateParams::new(self.n, self.beta, self.a, self.b, self.c, self.circle_coefficients()?)
    }

    /// Constructor seed: the unknown vector rounded to `decimals` places.
    pub fn seed(&self, decimals: i32) -> Result<Vec<f64>> {
        Ok(round_all(&self.to_params()?.to_vector(), decimals))
    }
}

pub fn round_to(x: f64, decimals: i32) -> f64 {
    let s = 10f64.powi(decimals);
    (x * s).round() / s
}

pub fn round_all(x: &[f64], decimals: i32) -> Vec<f64> {
    x.iter().map(|&v| round_to(v, decimals)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_has_nine_rows() {
        let set = ReferenceSet::bundled();
        assert_eq!(set.rows.iter().map(|r| r.n).collect::<Vec<_>>(), DEGREES);
        assert_eq!(set.row(8).unwrap().beta, 0.7290857513);
    }

    #[test]
    fn rejects_corrupt_data() {
        assert!(ReferenceSet::parse("{").is_err());
        assert!(ReferenceSet::parse(r#"{"version":1,"rows":[]}"#).is_err());
        assert!(ReferenceSet::parse(
            r#"{"version":1,"rows":[{"n":3,"beta":0.7,"a":-0.2,"b":-0.5,"c":0.7}]}"#
        )
        .is_err());
    }

    #[test]
    fn rounding() {
        assert_eq!(round_to(0.7290857513, 3), 0.729);
        assert_eq!(round_to(-0.2035409790, 3), -0.204);
    }
}
