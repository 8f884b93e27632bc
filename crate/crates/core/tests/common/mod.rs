#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use sendov_core::constructor::{newton_solve, NewtonOptions};
use sendov_core::reference::ReferenceSet;
use sendov_core::{CandidateParams, Complex64};

/// Converged candidate for a published degree, seeded from 3-decimal
/// roundings. Cached per process.
pub fn solved(n: usize) -> CandidateParams {
    static CACHE: OnceLock<Mutex<HashMap<usize, CandidateParams>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let row = *ReferenceSet::bundled().row(n).expect("published degree");
    let out = newton_solve(n, &row.seed(3).unwrap(), &NewtonOptions::default()).unwrap();
    assert!(out.converged, "n = {n} did not converge");
    let p = CandidateParams::from_vector(n, &out.x).unwrap();
    cache.lock().unwrap().insert(n, p.clone());
    p
}

/// Naive convolution expansion of `(z - a)^k (z^2 + b z + c)`.
pub fn expand_by_convolution(a: f64, k: usize, b: f64, c: f64) -> Vec<f64> {
    let mut acc = vec![c, b, 1.0];
    for _ in 0..k {
        let mut next = vec![0.0; acc.len() + 1];
        for (i, &x) in acc.iter().enumerate() {
            next[i] += -a * x;
            next[i + 1] += x;
        }
        acc = next;
    }
    acc
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn kronrod_panel(f: &dyn Fn(Complex64) -> Complex64, a: Complex64, b: Complex64) -> (Complex64, Complex64) {
    let mid = (a + b) * 0.5;
    let half = (b - a) * 0.5;
    let fc = f(mid);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(mid - dx) + f(mid + dx);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * half, g * half)
}

/// Adaptive Gauss–Kronrod (7/15) quadrature along the straight segment.
pub fn quad_segment(f: &dyn Fn(Complex64) -> Complex64, a: Complex64, b: Complex64, tol: f64) -> Complex64 {
    fn rec(f: &dyn Fn(Complex64) -> Complex64, a: Complex64, b: Complex64, tol: f64, depth: usize) -> Complex64 {
        let (k, g) = kronrod_panel(f, a, b);
        if (k - g).norm() <= tol || depth >= 30 {
            return k;
        }
        let m = (a + b) * 0.5;
        rec(f, a, m, tol / 2.0, depth + 1) + rec(f, m, b, tol / 2.0, depth + 1)
    }
    rec(f, a, b, tol, 0)
}

/// `prod (w - crit)` over the given critical points.
pub fn product(crits: &[Complex64], w: Complex64) -> Complex64 {
    crits.iter().fold(Complex64::new(1.0, 0.0), |acc, z| acc * (w - z))
}
