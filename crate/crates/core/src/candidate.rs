//! Candidate polynomials `P(z) = int_beta^z (w - a)^(n-3) (w^2 + b w + c) dw`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::roots::quadratic_roots;

/// The real unknowns of one candidate. `d` holds the linear coefficients of
/// the unit-circle quadratics `z^2 + d_i z + 1`: three of them for odd `n`,
/// two for even `n` (where `-1` supplies the fifth circle root).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateParams {
    pub n: usize,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: Vec<f64>,
}

/// Number of circle quadratics for degree `n`.
pub fn pair_count(n: usize) -> usize {
    if n % 2 == 1 {
        3
    } else {
        2
    }
}

impl CandidateParams {
    pub fn new(n: usize, beta: f64, a: f64, b: f64, c: f64, d: Vec<f64>) -> Result<Self> {
        let p = Self { n, beta, a, b, c, d };
        p.validate()?;
        Ok(p)
    }

    /// Checks every invariant: `n >= 5`, finite values, `d` length matching
    /// the parity of `n`, and `|d_i| < 2`.
    pub fn validate(&self) -> Result<()> {
        self.check_structure()?;
        let want = pair_count(self.n);
        if self.d.len() != want {
            return Err(Error::InvalidCandidate(format!(
                "n = {} needs {} circle quadratics, got {}",
                self.n,
                want,
                self.d.len()
            )));
        }
        if self.d.iter().any(|d| !d.is_finite()) {
            return Err(Error::NonFinite("candidate d"));
        }
        if let Some(d) = self.d.iter().find(|d| d.abs() >= 2.0) {
            return Err(Error::InvalidCandidate(format!(
                "|d| = {} must be < 2 for a pair on the unit circle",
                d.abs()
            )));
        }
        Ok(())
    }

    /// The weaker check needed to build `P`: degree and finite scalars.
    pub(crate) fn check_structure(&self) -> Result<()> {
        if self.n < 5 {
            return Err(Error::InvalidCandidate(format!("n = {} < 5", self.n)));
        }
        if ![self.beta, self.a, self.b, self.c].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("candidate beta/a/b/c"));
        }
        Ok(())
    }

    /// Multiplicity of the real critical point `a`.
    pub fn multiplicity(&self) -> usize {
        self.n - 3
    }

    /// The unknown vector `(beta, a, b, c, d_1, ..)` used by the constructor.
    pub fn to_vector(&self) -> Vec<f64> {
        let mut x = vec![self.beta, self.a, self.b, self.c];
        x.extend_from_slice(&self.d);
        x
    }

    pub fn from_vector(n: usize, x: &[f64]) -> Result<Self> {
        let want = 4 + pair_count(n);
        if x.len() != want {
            return Err(Error::Shape(format!(
                "n = {n} needs {want} unknowns, got {}",
                x.len()
            )));
        }
        Self::new(n, x[0], x[1], x[2], x[3], x[4..].to_vec())
    }

    /// Critical points in the canonical order `[zeta_1, zeta_2, a, .., a]`,
    /// where `zeta_1` is the root of `z^2 + b z + c` with non-negative
    /// imaginary part.
    pub fn critical_points(&self) -> Vec<Complex64> {
        let [z1, z2] = quadratic_roots(self.b, self.c);
        let mut out = vec![z1, z2];
        out.extend(std::iter::repeat_n(Complex64::new(self.a, 0.0), self.multiplicity()));
        out
    }

    /// `P'(z) = (z - a)^(n-3) (z^2 + b z + c)`, expanded.
    pub fn derivative_poly(&self) -> ComplexPoly {
        let mut coeffs = vec![0.0; self.n];
        // binomial expansion of (z - a)^(n-3)
        let k = self.multiplicity();
        let mut lin = vec![0.0; k + 1];
        lin[0] = 1.0;
        for step in 1..=k {
            for j in (1..=step).rev() {
                lin[j] = lin[j - 1] - self.a * lin[j];
            }
            lin[0] *= -self.a;
        }
        for (j, &l) in lin.iter().enumerate() {
            coeffs[j] += self.c * l;
            coeffs[j + 1] += self.b * l;
            coeffs[j + 2] += l;
        }
        ComplexPoly::from_finite(coeffs.into_iter().map(|c| Complex64::new(c, 0.0)).collect())
    }
}

/// Expands `P'`, integrates term-wise to `Q` with `Q(0) = 0` and returns
/// `Q(z) - Q(beta)`, so that `P(beta) = 0` by construction.
pub fn build_candidate(params: &CandidateParams) -> Result<ComplexPoly> {
    params.check_structure()?;
    let q = params.derivative_poly().antiderivative();
    let at_beta = q.eval(Complex64::new(params.beta, 0.0));
    let mut coeffs = q.into_coeffs();
    coeffs[0] -= at_beta;
    Ok(ComplexPoly::from_finite(coeffs))
}

/// `int_base^z prod_j (w - crit_j) dw` for arbitrary complex data; the
/// perturbed polynomials of the probe are built this way.
pub fn integrate_from_critical_points(base: Complex64, crits: &[Complex64]) -> ComplexPoly {
    let q = ComplexPoly::from_roots(crits).antiderivative();
    let at_base = q.eval(base);
    let mut coeffs = q.into_coeffs();
    coeffs[0] -= at_base;
    ComplexPoly::from_finite(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_case() {
        let p = CandidateParams::new(5, 0.0, 0.0, 0.0, 0.0, vec![0.0, 0.5, -0.5]).unwrap();
        let poly = build_candidate(&p).unwrap();
        assert_eq!(poly.degree(), 5);
        for (k, c) in poly.coeffs().iter().enumerate() {
            let want = if k == 5 { 0.2 } else { 0.0 };
            assert!((c.re - want).abs() < 1e-16 && c.im == 0.0, "coeff {k}: {c}");
        }
    }

    #[test]
    fn rejects_low_degree() {
        let p = CandidateParams {
            n: 4,
            beta: 0.5,
            a: 0.0,
            b: 0.0,
            c: 0.0,
            d: vec![0.0, 0.0],
        };
        assert!(build_candidate(&p).is_err());
        assert!(p.validate().is_err());
    }

    #[test]
    fn validates_d() {
        assert!(CandidateParams::new(8, 0.7, -0.2, 0.0, 0.5, vec![0.1]).is_err());
        assert!(CandidateParams::new(8, 0.7, -0.2, 0.0, 0.5, vec![0.1, 2.0]).is_err());
        assert!(CandidateParams::new(9, 0.7, -0.2, 0.0, 0.5, vec![0.1, 0.2]).is_err());
        assert!(CandidateParams::new(9, 0.7, -0.2, 0.0, 0.5, vec![0.1, 0.2, -1.9]).is_ok());
        assert!(CandidateParams::new(9, f64::NAN, -0.2, 0.0, 0.5, vec![0.1, 0.2, -1.9]).is_err());
    }

    #[test]
    fn vector_round_trip() {
        let p = CandidateParams::new(9, 0.7, -0.2, -0.8, 0.9, vec![0.1, 0.2, -1.9]).unwrap();
        let back = CandidateParams::from_vector(9, &p.to_vector()).unwrap();
        assert_eq!(p, back);
        assert!(CandidateParams::from_vector(8, &p.to_vector()).is_err());
    }

    #[test]
    fn critical_point_order() {
        let p = CandidateParams::new(8, 0.729, -0.2035, -0.541, 0.7327, vec![0.0, 1.0]).unwrap();
        let z = p.critical_points();
        assert_eq!(z.len(), 7);
        assert!(z[0].im > 0.0 && z[1].im < 0.0);
        assert!(z[2..].iter().all(|w| w.re == -0.2035 && w.im == 0.0));
    }

    #[test]
    fn integrate_from_crits_matches_build() {
        let p = CandidateParams::new(8, 0.729, -0.2035, -0.541, 0.7327, vec![0.0, 1.0]).unwrap();
        let direct = build_candidate(&p).unwrap();
        let via = integrate_from_critical_points(Complex64::new(p.beta, 0.0), &p.critical_points());
        for (x, y) in direct.coeffs().iter().zip(via.coeffs()) {
            assert!((x - y).norm() < 1e-15);
        }
    }
}
