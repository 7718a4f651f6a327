//! Deformation data of the figure-eight knot complement.
//!
//! For a meridian log-holonomy `u` we set `m = -exp(u/2)` and solve for the
//! tetrahedron shapes `z, w`, the saddle value `y` and the longitude
//! log-holonomy `v = 2 log(z(1-z))`. The square root of the discriminant
//!
//! ```text
//! Δ(m) = (m²+m+1)(m²+m-1)(m²-m+1)(m²-m-1)
//! ```
//!
//! is continued along the straight segment from `u = 0`, where `√Δ = i√3`
//! so that `z = w = e^{iπ/3}`, `y = e^{-iπ/3}` and `v = 0`. The closest zeros
//! of `Δ` sit at `u = ±0.9624` (real) and `u = ±2πi/3`; segments passing
//! too close to them are rejected as [`Error::BranchAmbiguity`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};

/// Radius of the disk of accepted `u`.
pub const U_MAX: f64 = 1.5;

const MAX_STEP: f64 = 0.02;
const MIN_STEP: f64 = 1e-7;
// Candidate selection is ambiguous when the rejected root is not at least
// this many times farther from the previous value than the accepted one.
const SEPARATION: f64 = 4.0;

/// Step used by [`dv_du`].
pub const DV_DU_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationParam {
    u: Complex64,
}

impl DeformationParam {
    pub fn new(u: Complex64) -> Result<Self> {
        ensure_finite(u, "u")?;
        let abs = u.norm();
        if abs > U_MAX {
            return Err(Error::OutsideValidityDisk { abs, max: U_MAX });
        }
        Ok(Self { u })
    }

    pub fn complete() -> Self {
        Self {
            u: Complex64::new(0.0, 0.0),
        }
    }

    pub fn u(&self) -> Complex64 {
        self.u
    }

    pub fn conj(&self) -> Self {
        Self { u: self.u.conj() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolonomyState {
    pub u: Complex64,
    pub m: Complex64,
    pub z: Complex64,
    pub w: Complex64,
    pub y: Complex64,
    pub v: Complex64,
}

impl HolonomyState {
    /// `|log w + log(1-z) - u|` and `|log z + log(1-z) + log w + log(1-w)|`,
    /// principal logarithms.
    pub fn gluing_residuals(&self) -> (f64, f64) {
        let one = Complex64::new(1.0, 0.0);
        let (z, w) = (self.z, self.w);
        let first = w.ln() + (one - z).ln() - self.u;
        let second = z.ln() + (one - z).ln() + w.ln() + (one - w).ln();
        (first.norm(), second.norm())
    }

    /// `|y + 1/y - (m² - 1 + m⁻²)|`.
    pub fn saddle_residual(&self) -> f64 {
        let m2 = self.m * self.m;
        (self.y + self.y.inv() - (m2 - 1.0 + m2.inv())).norm()
    }

    /// `Δ(m)` at this state.
    pub fn discriminant(&self) -> Complex64 {
        discriminant(self.m)
    }
}

pub fn discriminant(m: Complex64) -> Complex64 {
    let m2 = m * m;
    (m2 + m + 1.0) * (m2 + m - 1.0) * (m2 - m + 1.0) * (m2 - m - 1.0)
}

fn meridian(u: Complex64) -> Complex64 {
    -(u * 0.5).exp()
}

fn shapes(m: Complex64, sqrt_disc: Complex64) -> (Complex64, Complex64, Complex64) {
    let m2 = m * m;
    let m4 = m2 * m2;
    let denom = 2.0 * m2;
    let z = (-m4 + m2 + 1.0 + sqrt_disc) / denom;
    let w = (m4 + m2 - 1.0 + sqrt_disc) / denom;
    let y = (m4 - m2 + 1.0 - sqrt_disc) / denom;
    (z, w, y)
}

fn log_z_one_minus_z(z: Complex64) -> Complex64 {
    (z * (Complex64::new(1.0, 0.0) - z)).ln()
}

fn nearest_branch(value: Complex64, reference: Complex64) -> Complex64 {
    let k = ((reference.im - value.im) / (2.0 * PI)).round();
    value + Complex64::new(0.0, 2.0 * PI * k)
}

fn complete_state() -> HolonomyState {
    let e = Complex64::new(0.5, 3f64.sqrt() / 2.0);
    HolonomyState {
        u: Complex64::new(0.0, 0.0),
        m: Complex64::new(-1.0, 0.0),
        z: e,
        w: e,
        y: e.conj(),
        v: Complex64::new(0.0, 0.0),
    }
}

/// Holonomy data at `u`, continued from the complete structure.
pub fn holonomy_state(param: DeformationParam) -> Result<HolonomyState> {
    let u = param.u();
    if u == Complex64::new(0.0, 0.0) {
        return Ok(complete_state());
    }
    let base_steps = (u.norm() / MAX_STEP).ceil().max(1.0);
    let base_h = 1.0 / base_steps;

    let mut sqrt_disc = Complex64::new(0.0, 3f64.sqrt());
    let mut half_v = Complex64::new(0.0, 0.0);
    let mut t = 0.0_f64;
    let mut h = base_h;
    while t < 1.0 {
        let t_next = (t + h).min(1.0);
        let m = meridian(u * t_next);
        let candidate = discriminant(m).sqrt();
        let near = (candidate - sqrt_disc).norm();
        let far = (candidate + sqrt_disc).norm();
        let (chosen, best, worst) = if near <= far {
            (candidate, near, far)
        } else {
            (-candidate, far, near)
        };
        if best * SEPARATION > worst {
            if h * 0.5 < MIN_STEP * base_h {
                return Err(Error::BranchAmbiguity { at: u * t_next });
            }
            h *= 0.5;
            continue;
        }
        let (z, _, _) = shapes(m, chosen);
        let next_half_v = nearest_branch(log_z_one_minus_z(z), half_v);
        if (next_half_v - half_v).norm() > 0.5 && h * 0.5 >= MIN_STEP * base_h {
            h *= 0.5;
            continue;
        }
        sqrt_disc = chosen;
        half_v = next_half_v;
        t = t_next;
        h = (h * 2.0).min(base_h);
    }

    let m = meridian(u);
    let (z, w, y) = shapes(m, sqrt_disc);
    Ok(HolonomyState {
        u,
        m,
        z,
        w,
        y,
        v: 2.0 * half_v,
    })
}

/// Convenience wrapper: validate `u` and compute the state.
pub fn state_at(u: Complex64) -> Result<HolonomyState> {
    holonomy_state(DeformationParam::new(u)?)
}

/// Central difference `dv/du` with step `h`.
pub fn dv_du_with_step(param: DeformationParam, h: f64) -> Result<Complex64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "step must be positive, got {h}"
        )));
    }
    let u = param.u();
    if u.norm() + h > U_MAX {
        return Err(Error::OutsideValidityDisk {
            abs: u.norm() + h,
            max: U_MAX,
        });
    }
    let dh = Complex64::new(h, 0.0);
    let plus = holonomy_state(DeformationParam { u: u + dh })?.v;
    let minus = holonomy_state(DeformationParam { u: u - dh })?.v;
    Ok((plus - minus) / (2.0 * h))
}

/// Central difference `dv/du` with the default step [`DV_DU_STEP`].
pub fn dv_du(param: DeformationParam) -> Result<Complex64> {
    dv_du_with_step(param, DV_DU_STEP)
}
