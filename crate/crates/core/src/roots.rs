//! All roots of a complex polynomial by Aberth–Ehrlich iteration.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;

/// Acceptance bound on `|p(z)| / (max|coeff| * max(1,|z|)^deg)`.
pub const RESIDUAL_TOL: f64 = 1e-10;

const MAX_ITERATIONS: usize = 500;
const POLISH_STEPS: usize = 4;
// offset keeps the start off any symmetry axis of a real polynomial
const START_ANGLE: f64 = 0.4;

/// Scaled residual used for acceptance.
pub fn scaled_residual(p: &ComplexPoly, z: Complex64) -> f64 {
    let deg = p.degree() as i32;
    let bound = p.scale() * z.norm().max(1.0).powi(deg);
    if bound == 0.0 {
        return 0.0;
    }
    p.eval(z).norm() / bound
}

/// Finds every root of `p`, with multiplicity.
///
/// Exact zero roots are split off first, the remainder is scaled monic and
/// solved by simultaneous Aberth–Ehrlich updates from a rotated circle, then
/// each root gets a few Newton steps on the original polynomial, kept only
/// when they lower the residual.
pub fn find_roots(p: &ComplexPoly) -> Result<Vec<Complex64>> {
    let deg = p.degree();
    if deg < 1 {
        return Err(Error::DegreeTooLow {
            expected: 1,
            actual: deg,
        });
    }
    let zero = Complex64::new(0.0, 0.0);

    let coeffs = p.coeffs();
    let zeros = coeffs.iter().take_while(|c| **c == zero).count();
    let mut roots = vec![zero; zeros];
    if zeros == deg {
        return Ok(roots);
    }

    let lead = p.leading();
    let monic: Vec<Complex64> = coeffs[zeros..].iter().map(|&c| c / lead).collect();
    let reduced = ComplexPoly::from_finite(monic);
    let (found, iterations) = aberth(&reduced);

    let mut worst = 0.0_f64;
    for z in found {
        let z = polish(p, z);
        worst = worst.max(scaled_residual(p, z));
        roots.push(z);
    }
    if !(worst <= RESIDUAL_TOL) {
        return Err(Error::RootsNotConverged {
            iterations,
            residual: worst,
        });
    }
    Ok(roots)
}

fn initial_guesses(p: &ComplexPoly) -> Vec<Complex64> {
    let deg = p.degree();
    // geometric mean of the root moduli for a monic polynomial
    let radius = p.coeffs()[0].norm().powf(1.0 / deg as f64).max(1e-3);
    (0..deg)
        .map(|k| Complex64::from_polar(radius, TAU * k as f64 / deg as f64 + START_ANGLE))
        .collect()
}

/// Gauss–Seidel Aberth sweeps. Returns the iterates and the sweep count.
fn aberth(p: &ComplexPoly) -> (Vec<Complex64>, usize) {
    let deg = p.degree();
    let mut z = initial_guesses(p);
    if deg == 1 {
        return (vec![-p.coeffs()[0]], 0);
    }
    let mut done = vec![false; deg];
    for iter in 1..=MAX_ITERATIONS {
        let mut all_done = true;
        for k in 0..deg {
            if done[k] {
                continue;
            }
            let (val, der) = p.eval_with_derivative(z[k]);
            // below the rounding floor of Horner's scheme nothing more can be gained
            if val.norm() <= 8.0 * f64::EPSILON * abs_eval(p, z[k].norm()) {
                done[k] = true;
                continue;
            }
            let ratio = if der.norm() == 0.0 {
                // stationary point: step outward by the current spread
                Complex64::new(1e-8 * z[k].norm().max(1.0), 0.0)
            } else {
                val / der
            };
            let repulsion: Complex64 = (0..deg)
                .filter(|&j| j != k)
                .map(|j| {
                    let diff = z[k] - z[j];
                    if diff.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom.norm() == 0.0 { ratio } else { ratio / denom };
            if !(step.re.is_finite() && step.im.is_finite()) {
                continue;
            }
            z[k] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[k].norm().max(f64::MIN_POSITIVE) {
                done[k] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return (z, iter);
        }
    }
    (z, MAX_ITERATIONS)
}

/// `sum |c_k| x^k`, the scale of rounding error in evaluating at `|z| = x`.
fn abs_eval(p: &ComplexPoly, x: f64) -> f64 {
    p.coeffs().iter().rev().fold(0.0, |acc, c| acc * x + c.norm())
}

fn polish(p: &ComplexPoly, mut z: Complex64) -> Complex64 {
    let mut best = p.eval(z).norm();
    for _ in 0..POLISH_STEPS {
        let (val, der) = p.eval_with_derivative(z);
        if der.norm() == 0.0 || val.norm() == 0.0 {
            break;
        }
        let candidate = z - val / der;
        let res = p.eval(candidate).norm();
        if !(res < best) {
            break;
        }
        best = res;
        z = candidate;
    }
    z
}

/// Both roots of the real monic quadratic `z^2 + b z + c`, the one with
/// non-negative imaginary part first.
pub fn quadratic_roots(b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * c;
    if disc < 0.0 {
        let re = -b / 2.0;
        let im = (-disc).sqrt() / 2.0;
        [Complex64::new(re, im), Complex64::new(re, -im)]
    } else {
        // avoid cancellation in the smaller root
        let s = disc.sqrt();
        let q = -0.5 * (b + b.signum() * s);
        if q == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        let r1 = q;
        let r2 = c / q;
        let (hi, lo) = if r1 >= r2 { (r1, r2) } else { (r2, r1) };
        [Complex64::new(hi, 0.0), Complex64::new(lo, 0.0)]
    }
}

/// The conjugate pair of `z^2 + d z + 1` for `|d| < 2`, placed exactly on the
/// unit circle at `cos(theta) = -d/2`.
pub fn unit_circle_pair(d: f64) -> [Complex64; 2] {
    let theta = (-d / 2.0).clamp(-1.0, 1.0).acos();
    let (s, c) = theta.sin_cos();
    [Complex64::new(c, s), Complex64::new(c, -s)]
}
