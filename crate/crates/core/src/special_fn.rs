//! Complex dilogarithm, Rogers dilogarithm and the Lobachevsky function.
//!
//! `li2` uses the principal branch with its cut on `(1, +inf)`. A point that
//! lies exactly on the cut is evaluated as the limit from the lower half-plane
//! (`Im z -> 0-`); pass a tiny positive imaginary part to get the other side.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};

pub const PI2_6: f64 = PI * PI / 6.0;

// B_{2k} / (2k+1)! for k = 1..=11.
const BERNOULLI_COEFFS: [f64; 11] = [
    1.0 / 6.0 / 6.0,
    -1.0 / 30.0 / 120.0,
    1.0 / 42.0 / 5040.0,
    -1.0 / 30.0 / 362_880.0,
    5.0 / 66.0 / 39_916_800.0,
    -691.0 / 2730.0 / 6_227_020_800.0,
    7.0 / 6.0 / 1_307_674_368_000.0,
    -3617.0 / 510.0 / 355_687_428_096_000.0,
    43867.0 / 798.0 / 121_645_100_408_832_000.0,
    -174_611.0 / 330.0 / 51_090_942_171_709_440_000.0,
    854_513.0 / 138.0 / 25_852_016_738_884_976_640_000.0,
];

/// An angle in radians. Any finite value is accepted; functions reduce it.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle(pub f64);

impl Angle {
    /// Representative in `[-pi/2, pi/2]`.
    pub fn reduced_mod_pi(self) -> f64 {
        self.0 - PI * (self.0 / PI).round()
    }
}

impl From<f64> for Angle {
    fn from(theta: f64) -> Self {
        Angle(theta)
    }
}

/// `ln(1 + z)` without cancellation for small `|z|`.
pub(crate) fn ln_1p(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        let (x, y) = (z.re, z.im);
        let re = 0.5 * (2.0 * x + x * x + y * y).ln_1p();
        let im = y.atan2(1.0 + x);
        Complex64::new(re, im)
    } else {
        (Complex64::new(1.0, 0.0) + z).ln()
    }
}

/// Bernoulli series `sum B_n w^{n+1} / (n+1)!` for `Li2(1 - e^{-w})`.
fn bernoulli_series(w: Complex64) -> Complex64 {
    let w2 = w * w;
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in BERNOULLI_COEFFS.iter().rev() {
        acc = acc * w2 + c;
    }
    w - 0.25 * w2 + acc * w2 * w
}

/// Complex dilogarithm `Li2(z) = -int_0^z log(1-t)/t dt`.
///
/// The argument is mapped into `|z| <= 1, Re z <= 1/2` with the inversion
/// and reflection relations, where the Bernoulli series in `-log(1-z)`
/// converges geometrically (ratio below `(1.05 / 2pi)^2`).
pub fn li2(z: Complex64) -> Result<Complex64> {
    ensure_finite(z, "li2 argument")?;
    let mut z = z;
    if z.im == 0.0 {
        if z.re == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if z.re == 1.0 {
            return Ok(Complex64::new(PI2_6, 0.0));
        }
        if z.re > 1.0 {
            // lower side of the cut
            z.im = -0.0;
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let nz = z.norm_sqr();
    let value = if z.re <= 0.5 {
        if nz <= 1.0 {
            bernoulli_series(-ln_1p(-z))
        } else {
            let lz = (-z).ln();
            -bernoulli_series(-ln_1p(-z.inv())) - 0.5 * lz * lz - PI2_6
        }
    } else if nz <= 2.0 * z.re {
        let lz = ln_1p(z - one);
        -bernoulli_series(-lz) + PI2_6 - lz * (one - z).ln()
    } else {
        let lz = (-z).ln();
        -bernoulli_series(-ln_1p(-z.inv())) - 0.5 * lz * lz - PI2_6
    };
    Ok(value)
}

/// Lobachevsky function `Л(θ) = Im Li2(e^{2iθ}) / 2`; odd and pi-periodic.
pub fn lobachevsky(theta: impl Into<Angle>) -> Result<f64> {
    let theta = theta.into();
    if !theta.0.is_finite() {
        return Err(Error::InvalidInput(format!(
            "lobachevsky argument is not finite: {}",
            theta.0
        )));
    }
    let t = theta.reduced_mod_pi();
    let magnitude = 0.5 * li2(Complex64::from_polar(1.0, 2.0 * t.abs()))?.im;
    Ok(if t < 0.0 { -magnitude } else { magnitude })
}

/// What `rogers` returns at the removable endpoints `ξ ∈ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Endpoints {
    #[default]
    Reject,
    Limit,
}

/// Rogers dilogarithm `R(ξ) = ½ log ξ log(1-ξ) + Li2(ξ)` with principal logs.
pub fn rogers(xi: Complex64, endpoints: Endpoints) -> Result<Complex64> {
    ensure_finite(xi, "rogers argument")?;
    if xi.im == 0.0 {
        if xi.re == 0.0 || xi.re == 1.0 {
            return match endpoints {
                Endpoints::Limit if xi.re == 0.0 => Ok(Complex64::new(0.0, 0.0)),
                Endpoints::Limit => Ok(Complex64::new(PI2_6, 0.0)),
                Endpoints::Reject => Err(Error::DomainError(format!(
                    "rogers dilogarithm is singular at {}",
                    xi.re
                ))),
            };
        }
        if xi.re < 0.0 || xi.re > 1.0 {
            return Err(Error::DomainError(format!(
                "rogers argument {} lies on a logarithm cut",
                xi.re
            )));
        }
    }
    let one = Complex64::new(1.0, 0.0);
    Ok(0.5 * xi.ln() * (one - xi).ln() + li2(xi)?)
}
