//! The optimistic-limit potential
//!
//! ```text
//! V_p(ξ, η) = H(ξ, η) + (p/4)(log η)² - 2πi log η
//! ```
//!
//! of the `(p, 1)` filling, its critical point, and the comparison of the
//! critical value with `-CS + i·Vol`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};
use crate::potential::{dh_deta, dh_dxi, h_two};
use crate::special_fn::li2;
use crate::surgery::{canonical_cs, vol_cs_p1};

const I: Complex64 = Complex64::new(0.0, 1.0);

pub const GRAD_TOL: f64 = 1e-10;
const MAX_ITER: usize = 100;
const MAX_HALVINGS: usize = 40;
const JACOBIAN_STEP: f64 = 1e-6;

/// Newton start: the complete structure, `(e^{-iπ/3}, 1)`.
pub fn base_point() -> (Complex64, Complex64) {
    (
        Complex64::from_polar(1.0, -PI / 3.0),
        Complex64::new(1.0, 0.0),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub p: i64,
    pub xi0: Complex64,
    pub eta0: Complex64,
    pub grad_norm: f64,
    pub value: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub p: i64,
    /// `V_p` at the critical point.
    pub lhs: Complex64,
    /// `-CS + i·Vol` of the `(p, 1)` filling.
    pub rhs: Complex64,
    pub agree_digits: i32,
}

pub fn v_p(xi: Complex64, eta: Complex64, p: i64) -> Result<Complex64> {
    let log_eta = eta.ln();
    Ok(h_two(xi, eta)?.value + p as f64 / 4.0 * log_eta * log_eta - 2.0 * PI * I * log_eta)
}

/// `Li2(1/(ξη)) - Li2(ξ/η) + log(-ξ) log η - πi log η + (p/4)(log η)²`.
pub fn v_p_expanded(xi: Complex64, eta: Complex64, p: i64) -> Result<Complex64> {
    ensure_finite(xi, "xi")?;
    ensure_finite(eta, "eta")?;
    let log_eta = eta.ln();
    Ok(
        li2((xi * eta).inv())? - li2(xi / eta)? + (-xi).ln() * log_eta - PI * I * log_eta
            + p as f64 / 4.0 * log_eta * log_eta,
    )
}

/// Closed-form `(∂V_p/∂ξ, ∂V_p/∂η)`.
pub fn gradient(xi: Complex64, eta: Complex64, p: i64) -> [Complex64; 2] {
    let log_eta = eta.ln();
    [
        dh_dxi(xi, eta),
        dh_deta(xi, eta) + p as f64 * log_eta / (2.0 * eta) - 2.0 * PI * I / eta,
    ]
}

fn grad_norm(g: [Complex64; 2]) -> f64 {
    (g[0].norm_sqr() + g[1].norm_sqr()).sqrt()
}

fn jacobian(xi: Complex64, eta: Complex64, p: i64) -> [[Complex64; 2]; 2] {
    let h = JACOBIAN_STEP;
    let gx_p = gradient(xi + h, eta, p);
    let gx_m = gradient(xi - h, eta, p);
    let ge_p = gradient(xi, eta + h, p);
    let ge_m = gradient(xi, eta - h, p);
    let d = |a: Complex64, b: Complex64| (a - b) / (2.0 * h);
    [
        [d(gx_p[0], gx_m[0]), d(ge_p[0], ge_m[0])],
        [d(gx_p[1], gx_m[1]), d(ge_p[1], ge_m[1])],
    ]
}

/// Critical point of `V_p` by damped Newton from [`base_point`].
pub fn critical_point(p: i64) -> Result<CriticalPoint> {
    if p.abs() <= 4 {
        return Err(Error::ExceptionalSlope { p, q: 1 });
    }
    let not_found = |reason: String| Error::CriticalPointNotFound { p, reason };
    let (mut xi, mut eta) = base_point();
    let mut g = gradient(xi, eta, p);
    let mut norm = grad_norm(g);
    for _ in 0..MAX_ITER {
        if norm <= GRAD_TOL {
            break;
        }
        let j = jacobian(xi, eta, p);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if !det.is_finite() || det.norm() == 0.0 {
            return Err(not_found(format!("singular Jacobian at ({xi}, {eta})")));
        }
        let dxi = (j[1][1] * g[0] - j[0][1] * g[1]) / det;
        let deta = (j[0][0] * g[1] - j[1][0] * g[0]) / det;
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let (tx, te) = (xi - dxi * scale, eta - deta * scale);
            let tg = gradient(tx, te, p);
            let tn = grad_norm(tg);
            if tn.is_finite() && tn < norm {
                accepted = Some((tx, te, tg, tn));
                break;
            }
            scale *= 0.5;
        }
        match accepted {
            Some((tx, te, tg, tn)) => {
                (xi, eta, g, norm) = (tx, te, tg, tn);
            }
            None => break,
        }
    }
    if norm > GRAD_TOL {
        return Err(not_found(format!("gradient norm {norm:e} after Newton")));
    }
    Ok(CriticalPoint {
        p,
        xi0: xi,
        eta0: eta,
        grad_norm: norm,
        value: v_p(xi, eta, p)?,
    })
}

/// Upper limit of [`agreement_digits`]. Reducing the real part mod π²
/// costs a few ulps of a number of size ~10, so finer agreement is noise.
pub const MAX_DIGITS: i32 = 12;

/// `-log10` of the larger of the real-part mismatch (mod π²) and the
/// imaginary-part mismatch, floored and capped at [`MAX_DIGITS`].
pub fn agreement_digits(lhs: Complex64, rhs: Complex64) -> i32 {
    let d_re = canonical_cs(lhs.re - rhs.re).abs();
    let d_im = (lhs.im - rhs.im).abs();
    let worst = d_re.max(d_im);
    if !worst.is_finite() {
        i32::MIN
    } else if worst == 0.0 {
        MAX_DIGITS
    } else {
        ((-worst.log10()).floor() as i32).min(MAX_DIGITS)
    }
}

pub fn observation_check(p: i64) -> Result<Observation> {
    let cp = critical_point(p)?;
    observation_at(p, cp.xi0, cp.eta0)
}

/// Compares `V_p(ξ, η)` at an arbitrary point with `-CS + i·Vol`.
pub fn observation_at(p: i64, xi: Complex64, eta: Complex64) -> Result<Observation> {
    let lhs = v_p(xi, eta, p)?;
    let s = vol_cs_p1(p)?;
    let rhs = Complex64::new(-s.cs, s.vol);
    Ok(Observation {
        p,
        lhs,
        rhs,
        agree_digits: agreement_digits(lhs, rhs),
    })
}
