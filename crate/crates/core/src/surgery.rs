//! Generalized Dehn filling `pu + qv = 2πi` and the volume / Chern–Simons
//! formula
//!
//! ```text
//! Vol + i·CS ≡ H(u)/i - πu - uv/(4i) - (π/2)λ   (mod iπ²)
//! ```
//!
//! where `λ` is the complex length of the core geodesic. For `(p, 1)`
//! fillings `λ = (2πi - v)/p = u`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::cusp::{dv_du, holonomy_state, DeformationParam, HolonomyState, U_MAX};
use crate::error::{ensure_finite, Error, Result};
use crate::potential::h_of_state;

const I: Complex64 = Complex64::new(0.0, 1.0);

pub const FILLING_TOL: f64 = 1e-12;
const MAX_ITER: usize = 50;
const MAX_HALVINGS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FillingSlope {
    p: f64,
    q: f64,
}

impl FillingSlope {
    /// Generalized slope; any finite real pair other than `(0, 0)`.
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p.is_finite() && q.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "slope ({p}, {q}) is not finite"
            )));
        }
        if p == 0.0 && q == 0.0 {
            return Err(Error::InvalidInput("slope (0, 0) is not allowed".into()));
        }
        Ok(Self { p, q })
    }

    /// Topological slope; `p` and `q` must be coprime.
    pub fn integral(p: i64, q: i64) -> Result<Self> {
        if gcd(p.unsigned_abs(), q.unsigned_abs()) != 1 {
            return Err(Error::InvalidInput(format!(
                "slope ({p}, {q}) is not primitive"
            )));
        }
        Self::new(p as f64, q as f64)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurgeryResult {
    pub slope: FillingSlope,
    pub u: Complex64,
    pub v: Complex64,
    pub lambda: Complex64,
    pub vol: f64,
    /// Representative in `[-π²/2, π²/2)`.
    pub cs: f64,
}

/// The cusp shape `τ₀ = dv/du(0)`.
pub fn cusp_shape() -> Complex64 {
    static TAU0: OnceLock<Complex64> = OnceLock::new();
    *TAU0.get_or_init(|| dv_du(DeformationParam::complete()).expect("u = 0 is in the disk"))
}

fn residual(slope: FillingSlope, s: &HolonomyState) -> Complex64 {
    slope.p * s.u + slope.q * s.v - 2.0 * PI * I
}

fn out_of_range(slope: FillingSlope, reason: String) -> Error {
    Error::NonHyperbolicOrOutOfRange {
        p: slope.p,
        q: slope.q,
        reason,
    }
}

/// Solves `pu + qv(u) = 2πi` from `u₀ = 2πi/(p + qτ₀)`.
pub fn solve_filling(slope: FillingSlope) -> Result<(Complex64, Complex64)> {
    let u0 = 2.0 * PI * I / (slope.p + slope.q * cusp_shape());
    solve_filling_from(slope, u0)
}

/// Damped Newton iteration from a caller-supplied start.
pub fn solve_filling_from(slope: FillingSlope, u0: Complex64) -> Result<(Complex64, Complex64)> {
    ensure_finite(u0, "u0")?;
    let param = DeformationParam::new(u0)
        .map_err(|_| out_of_range(slope, format!("start {u0} outside |u| <= {U_MAX}")))?;
    let mut state = holonomy_state(param)?;
    let mut g = residual(slope, &state);
    for _ in 0..MAX_ITER {
        if g.norm() <= FILLING_TOL {
            return Ok((state.u, state.v));
        }
        let deriv = slope.p
            + slope.q
                * dv_du(DeformationParam::new(state.u)?)
                    .map_err(|e| out_of_range(slope, e.to_string()))?;
        if deriv.norm() == 0.0 {
            return Err(out_of_range(slope, "vanishing derivative".into()));
        }
        let step = g / deriv;
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial = state.u - step * scale;
            if let Ok(p) = DeformationParam::new(trial) {
                if let Ok(s) = holonomy_state(p) {
                    let gt = residual(slope, &s);
                    if gt.norm() < g.norm() {
                        accepted = Some((s, gt));
                        break;
                    }
                }
            }
            scale *= 0.5;
        }
        match accepted {
            Some((s, gt)) => {
                state = s;
                g = gt;
            }
            None => {
                if g.norm() <= 10.0 * FILLING_TOL {
                    // stalled at rounding level
                    break;
                }
                return Err(out_of_range(
                    slope,
                    format!("no decrease from u = {} (|g| = {:e})", state.u, g.norm()),
                ));
            }
        }
    }
    if g.norm() <= FILLING_TOL {
        Ok((state.u, state.v))
    } else {
        Err(out_of_range(
            slope,
            format!(
                "no convergence in {MAX_ITER} iterations (|g| = {:e})",
                g.norm()
            ),
        ))
    }
}

/// Reduces `x` modulo `π²` into `[-π²/2, π²/2)`.
pub fn canonical_cs(x: f64) -> f64 {
    let p2 = PI * PI;
    let mut r = x - p2 * ((x + 0.5 * p2) / p2).floor();
    if r >= 0.5 * p2 {
        r -= p2;
    }
    r
}

/// The uncanonicalized value `H(u)/i - πu - uv/(4i) - (π/2)λ`.
pub fn vol_cs_raw(param: DeformationParam, lambda: Complex64) -> Result<Complex64> {
    ensure_finite(lambda, "lambda")?;
    let s = holonomy_state(param)?;
    let h = h_of_state(&s)?.value;
    let u = s.u;
    Ok(h / I - PI * u - u * s.v / (4.0 * I) - 0.5 * PI * lambda)
}

/// `(Vol, CS)` with `CS` reduced into `[-π²/2, π²/2)`.
pub fn vol_cs(param: DeformationParam, lambda: Complex64) -> Result<(f64, f64)> {
    let raw = vol_cs_raw(param, lambda)?;
    Ok((raw.re, canonical_cs(raw.im)))
}

/// `(p, 1)` filling with `λ = u`.
pub fn vol_cs_p1(p: i64) -> Result<SurgeryResult> {
    if p.abs() <= 4 {
        return Err(Error::ExceptionalSlope { p, q: 1 });
    }
    let slope = FillingSlope::integral(p, 1)?;
    let (u, v) = solve_filling(slope)?;
    let (vol, cs) = vol_cs(DeformationParam::new(u)?, u)?;
    Ok(SurgeryResult {
        slope,
        u,
        v,
        lambda: u,
        vol,
        cs,
    })
}
