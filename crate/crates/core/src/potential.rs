//! Potential functions built from the dilogarithm.
//!
//! * `H(ξ,η) = Li2(1/(ξη)) - Li2(ξ/η) + (log(-ξ) + πi) log η`
//! * `H(u) = H(y, m²)`
//! * `f(u) = H(u) - πiu - uv/4 - i·Vol`
//! * `Φ(u) = 4f(u) + uv`
//!
//! `log(-ξ) + πi` is `log ξ` with its cut moved onto the positive real axis.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::cusp::{holonomy_state, DeformationParam, HolonomyState};
use crate::error::{ensure_finite, Error, Result};
use crate::special_fn::{li2, lobachevsky, rogers, Endpoints, PI2_6};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Hyperbolic volume of the figure-eight knot complement, `6Л(π/3)`.
pub fn figure_eight_volume() -> f64 {
    static VOL: OnceLock<f64> = OnceLock::new();
    *VOL.get_or_init(|| 6.0 * lobachevsky(PI / 3.0).expect("finite argument"))
}

/// A potential value together with the log convention that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialValue {
    pub value: Complex64,
    pub branch_note: &'static str,
}

const NOTE_PRINCIPAL: &str = "principal Li2 (cut (1,inf)), principal log, log(-xi)+pi*i";
const NOTE_ROGERS: &str = "principal Rogers dilogarithm of z and w";

impl PotentialValue {
    fn principal(value: Complex64) -> Self {
        Self {
            value,
            branch_note: NOTE_PRINCIPAL,
        }
    }
}

fn on_li2_cut(z: Complex64) -> bool {
    z.im == 0.0 && z.re > 1.0
}

/// `H(ξ, η)`.
pub fn h_two(xi: Complex64, eta: Complex64) -> Result<PotentialValue> {
    ensure_finite(xi, "xi")?;
    ensure_finite(eta, "eta")?;
    if xi.norm_sqr() == 0.0 || eta.norm_sqr() == 0.0 {
        return Err(Error::DomainError("H(xi, eta) needs xi, eta != 0".into()));
    }
    let a = (xi * eta).inv();
    let b = xi / eta;
    if on_li2_cut(a) || on_li2_cut(b) {
        return Err(Error::DomainError(format!(
            "Li2 argument on the cut (1, inf): 1/(xi eta) = {a}, xi/eta = {b}"
        )));
    }
    let log_eta = eta.ln();
    if xi.im == 0.0 && xi.re > 0.0 && log_eta.norm_sqr() != 0.0 {
        return Err(Error::DomainError(format!(
            "log(-xi) is on its cut for xi = {xi}"
        )));
    }
    let value = li2(a)? - li2(b)? + ((-xi).ln() + I * PI) * log_eta;
    Ok(PotentialValue::principal(value))
}

/// `H` evaluated on a holonomy state, `H(y, m²)`.
pub fn h_of_state(state: &HolonomyState) -> Result<PotentialValue> {
    h_two(state.y, state.m * state.m)
}

pub fn h_of_u(param: DeformationParam) -> Result<PotentialValue> {
    h_of_state(&holonomy_state(param)?)
}

fn f_from_state(state: &HolonomyState) -> Result<Complex64> {
    let h = h_of_state(state)?.value;
    let u = state.u;
    Ok(h - I * PI * u - u * state.v / 4.0 - I * figure_eight_volume())
}

/// `f(u) = H(u) - πiu - uv/4 - i·Vol`; vanishes at `u = 0`.
pub fn f_of_u(param: DeformationParam) -> Result<PotentialValue> {
    let state = holonomy_state(param)?;
    Ok(PotentialValue::principal(f_from_state(&state)?))
}

/// The alternative normalisation
/// `(1/2π){R(z) + R(w) - π²/6} - (i/2π)·Vol` built from Rogers dilogarithms.
///
/// Numerically this equals `f(u)/(2π)`, so it satisfies `Φ' = 2v` only
/// after rescaling by `2π`.
pub fn f_rogers(param: DeformationParam) -> Result<PotentialValue> {
    let s = holonomy_state(param)?;
    let r = rogers(s.z, Endpoints::Reject)? + rogers(s.w, Endpoints::Reject)?;
    let value = (r - PI2_6) / (2.0 * PI) - I * figure_eight_volume() / (2.0 * PI);
    Ok(PotentialValue {
        value,
        branch_note: NOTE_ROGERS,
    })
}

/// `Φ(u) = 4f(u) + uv`.
pub fn phi_of_u(param: DeformationParam) -> Result<PotentialValue> {
    let state = holonomy_state(param)?;
    let f = f_from_state(&state)?;
    Ok(PotentialValue::principal(4.0 * f + state.u * state.v))
}

/// Closed form `r² y^{-2/r} (y⁻¹ - y)` of `∂²H(z^r, m²)/∂z²` at the saddle
/// `z = y^{1/r}`, where `y` belongs to `u = 2πi(r-1)`.
pub fn d2h_dz2_at_saddle(r: Complex64) -> Result<Complex64> {
    ensure_finite(r, "r")?;
    if r.norm_sqr() == 0.0 {
        return Err(Error::DomainError("r must be nonzero".into()));
    }
    let u = 2.0 * PI * I * (r - 1.0);
    let y = holonomy_state(DeformationParam::new(u)?)?.y;
    let y_pow = (-2.0 / r * y.ln()).exp();
    Ok(r * r * y_pow * (y.inv() - y))
}

/// `∂H/∂ξ = (1/ξ) log(η + η⁻¹ - ξ - ξ⁻¹)`.
pub fn dh_dxi(xi: Complex64, eta: Complex64) -> Complex64 {
    (eta + eta.inv() - xi - xi.inv()).ln() / xi
}

/// `∂H/∂η = (1/η){log((1 - ξη)/(η - ξ)) + πi}`.
pub fn dh_deta(xi: Complex64, eta: Complex64) -> Complex64 {
    (((1.0 - xi * eta) / (eta - xi)).ln() + I * PI) / eta
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cusp::state_at;

    fn param(re: f64, im: f64) -> DeformationParam {
        DeformationParam::new(Complex64::new(re, im)).unwrap()
    }

    #[test]
    fn volume_constant() {
        let vol = figure_eight_volume();
        assert!((vol - 2.0298832128).abs() < 1e-10);
        assert!((4.0 * lobachevsky(PI / 6.0).unwrap() - vol).abs() <= 1e-13);
    }

    #[test]
    fn h_at_complete_structure() {
        let h = h_of_u(DeformationParam::complete()).unwrap().value;
        assert!((h - I * figure_eight_volume()).norm() <= 1e-12);
    }

    #[test]
    fn h_on_unit_circle() {
        for k in 1..20 {
            let theta = 2.0 * PI * k as f64 / 20.0;
            let h = h_two(Complex64::from_polar(1.0, theta), Complex64::new(1.0, 0.0))
                .unwrap()
                .value;
            let want = -4.0 * I * lobachevsky(theta / 2.0).unwrap();
            assert!((h - want).norm() <= 1e-12, "theta = {theta}");
        }
        let h = h_two(
            Complex64::from_polar(1.0, -PI / 3.0),
            Complex64::new(1.0, 0.0),
        )
        .unwrap()
        .value;
        assert!((h - I * 2.0298832128).norm() < 1e-10);
    }

    #[test]
    fn h_two_domain_errors() {
        let one = Complex64::new(1.0, 0.0);
        assert!(h_two(Complex64::new(0.0, 0.0), one).is_err());
        // ξ/η = 2 lies on the cut
        assert!(matches!(
            h_two(Complex64::new(2.0, 0.0), one),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn f_and_phi_vanish_at_zero() {
        let p = DeformationParam::complete();
        assert!(f_of_u(p).unwrap().value.norm() <= 1e-13);
        assert!(phi_of_u(p).unwrap().value.norm() <= 1e-13);
    }

    #[test]
    fn dh_du_matches_v_over_two_plus_pi_i() {
        let h = 1e-5;
        for &(re, im) in &[(0.2, 0.0), (0.1, 0.1), (-0.15, 0.2)] {
            let u = Complex64::new(re, im);
            let plus = h_of_u(param(re + h, im)).unwrap().value;
            let minus = h_of_u(param(re - h, im)).unwrap().value;
            let fd = (plus - minus) / (2.0 * h);
            let want = state_at(u).unwrap().v / 2.0 + I * PI;
            assert!(
                (fd - want).norm() <= 1e-8 * want.norm(),
                "{u}: {fd} vs {want}"
            );
        }
    }

    #[test]
    fn second_derivative_at_r_one() {
        let d2 = d2h_dz2_at_saddle(Complex64::new(1.0, 0.0)).unwrap();
        let want = Complex64::new(-1.5, -3f64.sqrt() / 2.0);
        assert!((d2 - want).norm() <= 1e-12);
    }

    #[test]
    fn rogers_form_is_f_over_two_pi() {
        for &(re, im) in &[(0.1, 0.0), (0.2, 0.1), (-0.1, 0.25), (0.3, -0.2)] {
            let p = param(re, im);
            let a = f_of_u(p).unwrap().value;
            let b = f_rogers(p).unwrap().value;
            assert!((a - 2.0 * PI * b).norm() <= 1e-12, "{a} vs {b}");
        }
    }
}
