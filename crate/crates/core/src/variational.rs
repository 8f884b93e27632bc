//! First- and second-order sensitivities of the unit-circle roots and the
//! linearized constraint system built from them.
//!
//! Write `P'(w) = prod_j (w - zeta_j)` with `zeta_1, zeta_2` the roots of
//! `w^2 + b w + c` and `zeta_j = a` for `j >= 3`. A simple root `z` of
//! `P(z) = int_beta^z P'(w) dw` then moves as
//!
//! ```text
//! dz/dbeta   = P'(beta) / P'(z)
//! dz/dzeta_j = (1 / P'(z)) int_beta^z P'(w) / (w - zeta_j) dw
//! ```
//!
//! Every path integral here has a polynomial integrand: the factor is divided
//! out of `P'` exactly and the quotient integrated term by term.
//!
//! The seven real variables are, in this order,
//! `(dbeta, Re dzeta_1, Im dzeta_1, Re dzeta_2, Im dzeta_2, Re S, Im S)`
//! with `S = sum_{j>=3} dzeta_j`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::candidate::CandidateParams;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::ComplexPoly;
use crate::spectrum::Spectrum;

pub const VARIABLES: [&str; 7] = ["dbeta", "re_dz1", "im_dz1", "re_dz2", "im_dz2", "re_S", "im_S"];

/// Remainder tolerance, relative to the coefficient scale of `P'`, for a
/// factor to count as an exact divisor.
pub const DIVISOR_TOL: f64 = 1e-10;

/// `|P'(z)|` below this means `z` is not a simple root.
pub const SIMPLE_ROOT_TOL: f64 = 1e-12;

/// The divisor taken out of `P'` before integrating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Factor {
    /// `w - zeta` for a critical point `zeta`.
    Linear(Complex64),
    /// `(w - a)^2`, always a divisor because `n >= 5`.
    SquaredA,
}

/// `int_beta^{z_end} P'(w) / factor(w) dw`.
pub fn integral_pprime_over_factor(
    params: &CandidateParams,
    z_end: Complex64,
    factor: Factor,
) -> Result<Complex64> {
    let pprime = params.derivative_poly();
    integral_over_factor(&pprime, Complex64::new(params.beta, 0.0), z_end, factor, params.a)
}

pub(crate) fn integral_over_factor(
    pprime: &ComplexPoly,
    beta: Complex64,
    z_end: Complex64,
    factor: Factor,
    a: f64,
) -> Result<Complex64> {
    let tol = DIVISOR_TOL * pprime.scale();
    let divide = |p: &ComplexPoly, root: Complex64| -> Result<ComplexPoly> {
        let (q, rem) = p.div_linear(root);
        if rem.norm() > tol {
            return Err(Error::NotExactDivisor {
                remainder: rem.norm(),
            });
        }
        Ok(q)
    };
    let quotient = match factor {
        Factor::Linear(zeta) => divide(pprime, zeta)?,
        Factor::SquaredA => {
            let root = Complex64::new(a, 0.0);
            let once = divide(pprime, root)?;
            divide(&once, root)?
        }
    };
    Ok(quotient.integrate(beta, z_end))
}

/// Derivatives of one simple root with respect to `beta` and the critical
/// points, plus the multiplier of `sum_{j>=3} (Im dzeta_j)^2` in the
/// second-order expansion of `|z|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootSensitivity {
    pub z: Complex64,
    pub dz_dbeta: Complex64,
    pub dz_dzeta1: Complex64,
    pub dz_dzeta2: Complex64,
    /// With respect to any one copy of the collapsed critical point `a`.
    pub dz_dzeta3: Complex64,
    pub f_coeff: f64,
}

/// Sensitivities of a single simple root `z != beta`.
pub fn root_sensitivity(params: &CandidateParams, z: Complex64) -> Result<RootSensitivity> {
    let pprime = params.derivative_poly();
    let beta = Complex64::new(params.beta, 0.0);
    let crits = params.critical_points();
    let dp = pprime.eval(z);
    if dp.norm() < SIMPLE_ROOT_TOL {
        return Err(Error::MultipleRoot {
            root: z.to_string(),
            derivative: dp.norm(),
        });
    }
    let lin = |zeta: Complex64| -> Result<Complex64> {
        Ok(integral_over_factor(&pprime, beta, z, Factor::Linear(zeta), params.a)? / dp)
    };
    let sq = integral_over_factor(&pprime, beta, z, Factor::SquaredA, params.a)?;
    Ok(RootSensitivity {
        z,
        dz_dbeta: pprime.eval(beta) / dp,
        dz_dzeta1: lin(crits[0])?,
        dz_dzeta2: lin(crits[1])?,
        dz_dzeta3: lin(crits[2])?,
        f_coeff: -(sq / (2.0 * z * dp)).re,
    })
}

/// Sensitivities of the `m` unit-circle roots, in spectrum order.
pub fn root_sensitivities(params: &CandidateParams, spectrum: &Spectrum) -> Result<Vec<RootSensitivity>> {
    spectrum
        .circle_roots()
        .iter()
        .map(|&z| root_sensitivity(params, z))
        .collect()
}

/// Second derivatives of a root with respect to the collapsed critical
/// points, evaluated at `zeta_j = zeta_k = a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondDerivatives {
    /// `d^2 z / d zeta_j^2`.
    pub pure: Complex64,
    /// `d^2 z / d zeta_j d zeta_k`, `j != k`.
    pub mixed: Complex64,
    /// `pure - mixed`, which should equal
    /// `(1 / P'(z)) int_beta^z P'(w) / (w - a)^2 dw`.
    pub difference: Complex64,
}

pub fn second_derivatives(params: &CandidateParams, z: Complex64) -> Result<SecondDerivatives> {
    let pprime = params.derivative_poly();
    let beta = Complex64::new(params.beta, 0.0);
    let dp = pprime.eval(z);
    if dp.norm() < SIMPLE_ROOT_TOL {
        return Err(Error::MultipleRoot {
            root: z.to_string(),
            derivative: dp.norm(),
        });
    }
    let ddp = pprime.derivative().eval(z);
    let a = Complex64::new(params.a, 0.0);
    let g = integral_over_factor(&pprime, beta, z, Factor::Linear(a), params.a)? / dp;
    let sq = integral_over_factor(&pprime, beta, z, Factor::SquaredA, params.a)?;
    let curvature = ddp / dp * g * g;
    let pure = 2.0 / (z - a) * g - curvature;
    let mixed = 2.0 / (z - a) * g - curvature - sq / dp;
    Ok(SecondDerivatives {
        pure,
        mixed,
        difference: pure - mixed,
    })
}

/// The `(m+3) x 7` coefficient matrix `E` and the multipliers `f`, where the
/// quadratic term of constraint `k` is `f_k * sum_{j>=3} (Im dzeta_j)^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationalSystem {
    #[serde(rename = "E")]
    pub e: Matrix,
    pub f: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub c: Option<Vec<f64>>,
}

impl VariationalSystem {
    pub fn rows(&self) -> usize {
        self.e.rows()
    }

    /// The `{"E", "f", "variables"}` export record.
    pub fn export(&self) -> SystemExport {
        SystemExport {
            e: self.e.to_rows(),
            f: self.f.clone(),
            variables: VARIABLES.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemExport {
    #[serde(rename = "E")]
    pub e: Vec<Vec<f64>>,
    pub f: Vec<f64>,
    pub variables: Vec<String>,
}

pub fn build_system(
    params: &CandidateParams,
    spectrum: &Spectrum,
    sens: &[RootSensitivity],
) -> Result<VariationalSystem> {
    let m = spectrum.m;
    if m < 5 {
        return Err(Error::TooFewCircleRoots {
            expected: 5,
            actual: m,
        });
    }
    if sens.len() != m {
        return Err(Error::Shape(format!(
            "{} sensitivities for {} circle roots",
            sens.len(),
            m
        )));
    }
    let beta = params.beta;
    let gap = beta - params.a;
    let mut e = Matrix::zeros(m + 3, 7);
    let mut f = vec![0.0; m + 3];

    // E_k = -Re[(dzeta_k - dbeta) / (zeta_k - beta)] for k = 1, 2
    for k in 0..2 {
        let w = (spectrum.critical_points[k] - beta).inv();
        e[(k, 0)] = w.re;
        e[(k, 1 + 2 * k)] = -w.re;
        e[(k, 2 + 2 * k)] = w.im;
    }

    // E_3 = (Re S - (n-3) dbeta) / (beta - a)
    e[(2, 0)] = -(params.multiplicity() as f64) / gap;
    e[(2, 5)] = 1.0 / gap;
    f[2] = -1.0 / (2.0 * gap * gap);

    // E_{i+3} = Re[(1/z_i) dz_i], with Re[(p + iq)(x + iy)] = p x - q y
    for (i, s) in sens.iter().enumerate() {
        let row = i + 3;
        let zinv = s.z.inv();
        e[(row, 0)] = (s.dz_dbeta * zinv).re;
        for (col, d) in [(1, s.dz_dzeta1), (3, s.dz_dzeta2), (5, s.dz_dzeta3)] {
            let pq = d * zinv;
            e[(row, col)] = pq.re;
            e[(row, col + 1)] = -pq.im;
        }
        f[row] = s.f_coeff;
    }
    Ok(VariationalSystem { e, f, c: None })
}

/// Convenience: spectrum-driven sensitivities and system in one call.
pub fn system_for(params: &CandidateParams, spectrum: &Spectrum) -> Result<VariationalSystem> {
    let sens = root_sensitivities(params, spectrum)?;
    build_system(params, spectrum, &sens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squared_factor_on_monomial() {
        // P' = w^2 with a = 0: (w - 0)^2 divides out to 1, int_0^1 1 dw = 1
        let pprime = ComplexPoly::from_real(&[0.0, 0.0, 1.0]).unwrap();
        let v = integral_over_factor(
            &pprime,
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Factor::SquaredA,
            0.0,
        )
        .unwrap();
        assert_eq!(v, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn rejects_non_divisor() {
        let pprime = ComplexPoly::from_real(&[0.0, 0.0, 1.0]).unwrap();
        let err = integral_over_factor(
            &pprime,
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Factor::Linear(Complex64::new(0.5, 0.0)),
            0.0,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotExactDivisor { .. }));
    }

    #[test]
    fn too_few_circle_roots() {
        let params = CandidateParams::new(8, 0.5, -0.2, -0.5, 0.7, vec![0.0, 1.0]).unwrap();
        let spectrum = Spectrum {
            roots: vec![],
            critical_points: params.critical_points(),
            m: 4,
            beta_index: 0,
            r: 0.0,
            big_r: 0.0,
            d_p: 0.0,
        };
        assert!(matches!(
            build_system(&params, &spectrum, &[]),
            Err(Error::TooFewCircleRoots { .. })
        ));
    }
}
