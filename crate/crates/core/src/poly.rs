//! Dense complex polynomials in ascending-degree order.

use std::fmt;
use std::ops::{Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients below this fraction of the largest one are trimmed when
/// determining the degree.
pub const TRIM_RELATIVE: f64 = 1e-14;

/// A polynomial is flagged real when every imaginary part is at most this
/// fraction of the largest coefficient magnitude.
pub const REAL_RELATIVE: f64 = 1e-12;

/// `coeffs[k]` multiplies `z^k`. Always holds at least one coefficient; the
/// zero polynomial is `[0]`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    /// Builds a polynomial, trimming negligible leading coefficients.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("polynomial coefficients"));
        }
        Ok(Self::from_finite(coeffs))
    }

    pub(crate) fn from_finite(mut coeffs: Vec<Complex64>) -> Self {
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let cutoff = TRIM_RELATIVE * scale;
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= cutoff) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0)],
        }
    }

    pub fn one() -> Self {
        Self {
            coeffs: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// The monic linear factor `z - root`.
    pub fn linear(root: Complex64) -> Self {
        Self {
            coeffs: vec![-root, Complex64::new(1.0, 0.0)],
        }
    }

    /// `prod (z - r)` over the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            coeffs.push(Complex64::new(0.0, 0.0));
            for k in (1..coeffs.len()).rev() {
                coeffs[k] = coeffs[k - 1] - r * coeffs[k];
            }
            coeffs[0] = -r * coeffs[0];
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().expect("nonempty")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex64::new(0.0, 0.0)
    }

    /// Largest coefficient magnitude.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_real(&self) -> bool {
        let tol = REAL_RELATIVE * self.scale();
        self.coeffs.iter().all(|c| c.im.abs() <= tol)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let mut p = zero;
        let mut dp = zero;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// The constant polynomial differentiates to zero.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Self::from_finite(coeffs)
    }

    /// Term-wise antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k + 1) as f64),
        );
        Self::from_finite(coeffs)
    }

    /// `int_from^to p(w) dw` via the exact antiderivative.
    pub fn integrate(&self, from: Complex64, to: Complex64) -> Complex64 {
        let anti = self.antiderivative();
        anti.eval(to) - anti.eval(from)
    }

    /// Multiplies by a scalar.
    pub fn scaled(&self, k: Complex64) -> Self {
        Self::from_finite(self.coeffs.iter().map(|&c| c * k).collect())
    }

    /// Divides by the monic linear factor `z - root` by synthetic division.
    /// Returns the quotient and the remainder `p(root)`.
    pub fn div_linear(&self, root: Complex64) -> (Self, Complex64) {
        let n = self.coeffs.len();
        if n == 1 {
            return (Self::zero(), self.coeffs[0]);
        }
        let mut q = vec![Complex64::new(0.0, 0.0); n - 1];
        let mut carry = Complex64::new(0.0, 0.0);
        for k in (1..n).rev() {
            carry = carry * root + self.coeffs[k];
            q[k - 1] = carry;
        }
        let rem = carry * root + self.coeffs[0];
        (Self { coeffs: q }, rem)
    }

    /// Divides a real polynomial by `z^2 + d z + 1`.
    ///
    /// Returns `(quotient, r1, r0)` with `p = (z^2 + d z + 1) q + r1 z + r0`.
    pub fn divmod_quadratic(&self, d: f64) -> Result<(Self, f64, f64)> {
        if !self.is_real() {
            return Err(Error::NotReal);
        }
        let p: Vec<f64> = self.coeffs.iter().map(|c| c.re).collect();
        let (q, r1, r0) = divmod_unit_quadratic(&p, d);
        let q = ComplexPoly::from_real(&q)?;
        Ok((q, r1, r0))
    }
}

/// Synthetic division of real coefficients by `z^2 + d z + 1`.
///
/// `q[k] = p[k+2] - d q[k+1] - q[k+2]`, then `r1 = p[1] - d q[0] - q[1]` and
/// `r0 = p[0] - q[0]`.
pub fn divmod_unit_quadratic(p: &[f64], d: f64) -> (Vec<f64>, f64, f64) {
    match p.len() {
        0 => return (vec![0.0], 0.0, 0.0),
        1 => return (vec![0.0], 0.0, p[0]),
        2 => return (vec![0.0], p[1], p[0]),
        _ => {}
    }
    let deg = p.len() - 1;
    let mut q = vec![0.0; deg - 1];
    for k in (0..deg - 1).rev() {
        let q1 = q.get(k + 1).copied().unwrap_or(0.0);
        let q2 = q.get(k + 2).copied().unwrap_or(0.0);
        q[k] = p[k + 2] - d * q1 - q2;
    }
    let q1 = q.get(1).copied().unwrap_or(0.0);
    let r1 = p[1] - d * q[0] - q1;
    let r0 = p[0] - q[0];
    (q, r1, r0)
}

impl Mul for &ComplexPoly {
    type Output = ComplexPoly;

    fn mul(self, rhs: &ComplexPoly) -> ComplexPoly {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPoly::from_finite(out)
    }
}

impl Sub for &ComplexPoly {
    type Output = ComplexPoly;

    fn sub(self, rhs: &ComplexPoly) -> ComplexPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        let out = (0..len)
            .map(|k| {
                self.coeffs.get(k).copied().unwrap_or(zero) - rhs.coeffs.get(k).copied().unwrap_or(zero)
            })
            .collect();
        ComplexPoly::from_finite(out)
    }
}

impl Neg for &ComplexPoly {
    type Output = ComplexPoly;

    fn neg(self) -> ComplexPoly {
        ComplexPoly {
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }
}

impl TryFrom<Vec<Complex64>> for ComplexPoly {
    type Error = Error;

    fn try_from(coeffs: Vec<Complex64>) -> Result<Self> {
        ComplexPoly::new(coeffs)
    }
}

impl From<ComplexPoly> for Vec<Complex64> {
    fn from(p: ComplexPoly) -> Self {
        p.coeffs
    }
}

impl fmt::Debug for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}
