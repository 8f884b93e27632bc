//! The eight sufficient conditions A–H, checked numerically.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::candidate::{build_candidate, CandidateParams};
use crate::error::{Error, Result};
use crate::linalg::{jacobi_svd, left_null_space};
use crate::poly::ComplexPoly;
use crate::spectrum::{spectrum_of, Spectrum};
use crate::variational::{system_for, VariationalSystem};

/// Every threshold the certifier uses. Recorded verbatim in each report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// A: `|max |z_i| - 1|` must be below this.
    pub max_modulus: f64,
    /// B: minimum pairwise root distance must exceed this.
    pub min_root_gap: f64,
    /// C: open interval for `beta`.
    pub beta_low: f64,
    pub beta_high: f64,
    /// D: spread of `|zeta_j - beta|` must be below this ...
    pub equidistance: f64,
    /// ... and the common distance must exceed this.
    pub min_radius: f64,
    /// E: `beta - a` must exceed this.
    pub min_gap: f64,
    /// F: `r` below this and `r - R` above `separation`.
    pub max_r: f64,
    pub separation: f64,
    /// G: every certificate weight must exceed this.
    pub min_certificate: f64,
    /// G: singular values of `E^T` below this span the left null space.
    pub null_space: f64,
    /// H: the seventh singular value must exceed this.
    pub min_sigma7: f64,
    /// G: angles scanned for a two-dimensional null space.
    pub angle_samples: usize,
    /// Unit-circle membership tolerance used to count `m`.
    pub circle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            max_modulus: 1e-8,
            min_root_gap: 0.1,
            beta_low: 0.7,
            beta_high: 0.9,
            equidistance: 1e-9,
            min_radius: 0.9,
            min_gap: 0.9,
            max_r: 0.97,
            separation: 0.02,
            min_certificate: 0.3,
            null_space: 1e-8,
            min_sigma7: 0.04,
            angle_samples: 2048,
            circle: crate::spectrum::TOL_CIRCLE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PropertyId {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One property's outcome. `margin` is positive exactly when the matching
/// measurement is on the passing side of its threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub id: PropertyId,
    pub measured: Vec<f64>,
    pub threshold: Vec<f64>,
    pub margin: Vec<f64>,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Copy)]
enum Bound {
    Above(f64),
    Below(f64),
}

fn check(id: PropertyId, detail: impl Into<String>, items: &[(f64, Bound)]) -> PropertyCheck {
    let mut measured = Vec::new();
    let mut threshold = Vec::new();
    let mut margin = Vec::new();
    for &(value, bound) in items {
        measured.push(value);
        let (t, m) = match bound {
            Bound::Above(t) => (t, value - t),
            Bound::Below(t) => (t, t - value),
        };
        threshold.push(t);
        margin.push(m);
    }
    let pass = margin.iter().all(|m| *m > 0.0);
    PropertyCheck {
        id,
        measured,
        threshold,
        margin,
        pass,
        detail: detail.into(),
    }
}

/// Properties A–F from the roots and critical points.
pub fn check_geometry(params: &CandidateParams, spectrum: &Spectrum, tol: &Tolerances) -> Vec<PropertyCheck> {
    let beta = Complex64::new(params.beta, 0.0);
    let roots = &spectrum.roots;

    let max_mod = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let a = check(
        PropertyId::A,
        "|max |z_i| - 1|",
        &[((max_mod - 1.0).abs(), Bound::Below(tol.max_modulus))],
    );

    let mut gap = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            gap = gap.min((roots[i] - roots[j]).norm());
        }
    }
    let b = check(PropertyId::B, "min pairwise root distance", &[(gap, Bound::Above(tol.min_root_gap))]);

    let c = check(
        PropertyId::C,
        "beta in the open interval",
        &[
            (params.beta, Bound::Above(tol.beta_low)),
            (params.beta, Bound::Below(tol.beta_high)),
        ],
    );

    let dists: Vec<f64> = spectrum.critical_points.iter().map(|z| (z - beta).norm()).collect();
    let dmin = dists.iter().copied().fold(f64::INFINITY, f64::min);
    let dmax = dists.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let d = check(
        PropertyId::D,
        "spread of |zeta_j - beta|, common distance",
        &[
            (dmax - dmin, Bound::Below(tol.equidistance)),
            (dmin, Bound::Above(tol.min_radius)),
        ],
    );

    let e = check(PropertyId::E, "beta - a", &[(params.beta - params.a, Bound::Above(tol.min_gap))]);

    let f = check(
        PropertyId::F,
        "r, r - R",
        &[
            (spectrum.r, Bound::Below(tol.max_r)),
            (spectrum.r - spectrum.big_r, Bound::Above(tol.separation)),
        ],
    );
    vec![a, b, c, d, e, f]
}

/// Result of the positivity search for property G.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub c: Vec<f64>,
    pub min_c: f64,
    pub pass: bool,
    pub null_dimension: usize,
    /// Singular values of `E^T`, largest first.
    pub singular_values: Vec<f64>,
    pub detail: String,
}

/// Searches the left null space of `E` for weights `c` with `c . f = 1`
/// maximizing `min_k c_k`.
///
/// A one-dimensional null space fixes `c` outright. A two-dimensional one is
/// parametrized as `cos(t) u_1 + sin(t) u_2` rescaled to `c . f = 1`; the
/// angle is scanned over `[0, pi)` and the best sample refined by golden
/// section search. Larger null spaces are reported as unsupported.
pub fn certify_g(system: &VariationalSystem, tol: &Tolerances) -> Certificate {
    let rows = system.rows();
    let (basis, singular_values) = left_null_space(&system.e, tol.null_space);
    let fail = |c: Vec<f64>, detail: String| Certificate {
        min_c: min_of(&c),
        c,
        pass: false,
        null_dimension: basis.len(),
        singular_values: singular_values.clone(),
        detail,
    };
    let dot = |u: &[f64]| -> f64 { u.iter().zip(&system.f).map(|(x, y)| x * y).sum() };
    // c . f this small relative to |c| is treated as zero
    let degenerate = 1e-12;

    let c = match basis.len() {
        0 => return fail(vec![0.0; rows], "left null space is trivial".into()),
        1 => {
            let u = &basis[0];
            let uf = dot(u);
            if uf.abs() <= degenerate {
                return fail(vec![0.0; rows], "null vector is orthogonal to f".into());
            }
            u.iter().map(|x| x / uf).collect::<Vec<_>>()
        }
        2 => {
            let (u1, u2) = (&basis[0], &basis[1]);
            let (f1, f2) = (dot(u1), dot(u2));
            if f1.abs() <= degenerate && f2.abs() <= degenerate {
                return fail(vec![0.0; rows], "null space is orthogonal to f".into());
            }
            let at = |t: f64| -> Option<Vec<f64>> {
                let (s, co) = t.sin_cos();
                let cf = co * f1 + s * f2;
                if cf.abs() <= degenerate {
                    return None;
                }
                Some(u1.iter().zip(u2).map(|(x, y)| (co * x + s * y) / cf).collect())
            };
            let score = |t: f64| at(t).map_or(f64::NEG_INFINITY, |c| min_of(&c));
            let best = best_angle(score, tol.angle_samples);
            at(best).expect("best angle has finite score")
        }
        k => {
            return fail(
                vec![0.0; rows],
                format!("null space of dimension {k} is not searched"),
            )
        }
    };
    let min_c = min_of(&c);
    Certificate {
        pass: min_c > tol.min_certificate,
        min_c,
        c,
        null_dimension: basis.len(),
        singular_values,
        detail: String::new(),
    }
}

fn min_of(c: &[f64]) -> f64 {
    c.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Grid scan of `[0, pi)` followed by golden-section refinement on the
/// bracket around the best sample.
pub(crate) fn best_angle(score: impl Fn(f64) -> f64, samples: usize) -> f64 {
    let step = std::f64::consts::PI / samples as f64;
    let (mut best_t, mut best_v) = (0.0, f64::NEG_INFINITY);
    for k in 0..samples {
        let t = k as f64 * step;
        let v = score(t);
        if v > best_v {
            best_t = t;
            best_v = v;
        }
    }
    if best_v == f64::NEG_INFINITY {
        return best_t;
    }
    let (mut lo, mut hi) = (best_t - step, best_t + step);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut v1, mut v2) = (score(x1), score(x2));
    for _ in 0..80 {
        if v1 < v2 {
            lo = x1;
            x1 = x2;
            v1 = v2;
            x2 = lo + ratio * (hi - lo);
            v2 = score(x2);
        } else {
            hi = x2;
            x2 = x1;
            v2 = v1;
            x1 = hi - ratio * (hi - lo);
            v1 = score(x1);
        }
    }
    let t = 0.5 * (lo + hi);
    if score(t) >= best_v {
        t
    } else {
        best_t
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankCheck {
    pub sigma7: f64,
    pub singular_values: Vec<f64>,
    pub pass: bool,
}

/// Property H: the seventh largest singular value of `E`.
pub fn certify_h(system: &VariationalSystem, tol: &Tolerances) -> RankCheck {
    let s = jacobi_svd(&system.e).singular_values;
    let sigma7 = s.get(6).copied().unwrap_or(0.0);
    RankCheck {
        pass: sigma7 > tol.min_sigma7,
        sigma7,
        singular_values: s,
    }
}

/// Full outcome for one candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub candidate: CandidateParams,
    pub properties: Vec<PropertyCheck>,
    pub overall: bool,
    pub tolerances: Tolerances,
    pub spectrum: Spectrum,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rank: Option<RankCheck>,
    /// The two-dimensional certificate search picks one of many valid
    /// solutions; this flags when that happened.
    pub certificate_resolution: String,
}

impl PropertyReport {
    pub fn get(&self, id: PropertyId) -> &PropertyCheck {
        self.properties.iter().find(|p| p.id == id).expect("all eight present")
    }

    pub fn failures(&self) -> Vec<PropertyId> {
        self.properties.iter().filter(|p| !p.pass).map(|p| p.id).collect()
    }
}

/// Builds the candidate, computes its spectrum and variational system, and
/// evaluates all eight properties. Never short-circuits: when the system
/// cannot be assembled (too few circle roots, a multiple root) G and H are
/// reported as failed with the reason.
pub fn certify_all(params: &CandidateParams) -> Result<PropertyReport> {
    certify_with(params, &Tolerances::default())
}

pub fn certify_with(params: &CandidateParams, tol: &Tolerances) -> Result<PropertyReport> {
    params.validate()?;
    let p = build_candidate(params)?;
    certify_poly(params, &p, tol)
}

/// As [`certify_with`] but taking the polynomial's coefficients directly;
/// `p` may be any nonzero multiple of the candidate.
pub fn certify_poly(params: &CandidateParams, p: &ComplexPoly, tol: &Tolerances) -> Result<PropertyReport> {
    params.validate()?;
    if p.degree() != params.n {
        return Err(Error::Shape(format!(
            "polynomial of degree {} for n = {}",
            p.degree(),
            params.n
        )));
    }
    let spectrum = spectrum_of(params, p)?;
    let mut properties = check_geometry(params, &spectrum, tol);

    let (certificate, rank, resolution) = match system_for(params, &spectrum) {
        Ok(system) => {
            let cert = certify_g(&system, tol);
            let rank = certify_h(&system, tol);
            let resolution = match cert.null_dimension {
                2 => "angle scan over a two-dimensional null space; one of many valid certificates",
                1 => "unique up to normalization",
                _ => "none",
            };
            properties.push(PropertyCheck {
                id: PropertyId::G,
                measured: vec![cert.min_c],
                threshold: vec![tol.min_certificate],
                margin: vec![cert.min_c - tol.min_certificate],
                pass: cert.pass,
                detail: if cert.detail.is_empty() {
                    format!("min c_k over a {}-dimensional left null space", cert.null_dimension)
                } else {
                    cert.detail.clone()
                },
            });
            properties.push(PropertyCheck {
                id: PropertyId::H,
                measured: vec![rank.sigma7],
                threshold: vec![tol.min_sigma7],
                margin: vec![rank.sigma7 - tol.min_sigma7],
                pass: rank.pass,
                detail: "seventh singular value of E".into(),
            });
            (Some(cert), Some(rank), resolution.to_string())
        }
        Err(e @ (Error::TooFewCircleRoots { .. } | Error::MultipleRoot { .. })) => {
            let reason = format!("system not assembled: {e}");
            for (id, t) in [(PropertyId::G, tol.min_certificate), (PropertyId::H, tol.min_sigma7)] {
                properties.push(PropertyCheck {
                    id,
                    measured: vec![0.0],
                    threshold: vec![t],
                    margin: vec![-t],
                    pass: false,
                    detail: reason.clone(),
                });
            }
            (None, None, "none".to_string())
        }
        Err(e) => return Err(e),
    };

    let overall = properties.iter().all(|p| p.pass);
    Ok(PropertyReport {
        candidate: params.clone(),
        properties,
        overall,
        tolerances: *tol,
        spectrum,
        certificate,
        rank,
        certificate_resolution: resolution,
    })
}
