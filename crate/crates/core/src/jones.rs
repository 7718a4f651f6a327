//! The colored Jones polynomial of the figure-eight knot,
//!
//! ```text
//! J_N(t) = Σ_{n=0}^{N-1} Π_{k=1}^{n} t^N (1 - t^{-N-k}) (1 - t^{-N+k}),
//! ```
//!
//! evaluated at `t = exp((u + 2πi)/N)` in O(N) through the ratio of
//! consecutive summands, and the Riemann-sum discrepancy `φ_{N,±}(n)` of the
//! factor products.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::cusp::U_MAX;
use crate::error::{ensure_finite, Error, Result};
use crate::logcomplex::LogComplex;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Evaluation point: `t = exp((u + 2πi)/N)`, `r = 1 + u/(2πi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesPoint {
    n: usize,
    u: Complex64,
}

impl JonesPoint {
    pub fn new(n: usize, u: Complex64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("N must be at least 1".into()));
        }
        ensure_finite(u, "u")?;
        if u.norm() > U_MAX {
            return Err(Error::OutsideValidityDisk {
                abs: u.norm(),
                max: U_MAX,
            });
        }
        Ok(Self { n, u })
    }

    /// Point with `q_r = exp(2πri/N)`.
    pub fn from_r(n: usize, r: Complex64) -> Result<Self> {
        Self::new(n, 2.0 * PI * I * (r - 1.0))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn u(&self) -> Complex64 {
        self.u
    }

    pub fn r(&self) -> Complex64 {
        1.0 + self.u / (2.0 * PI * I)
    }

    pub fn t(&self) -> Complex64 {
        ((self.u + 2.0 * PI * I) / self.n as f64).exp()
    }
}

/// `exp(z) - 1` without cancellation near `z = 0`.
pub(crate) fn exp_m1(z: Complex64) -> Complex64 {
    let half_sin = (0.5 * z.im).sin();
    Complex64::new(
        z.re.exp_m1() * z.im.cos() - 2.0 * half_sin * half_sin,
        z.re.exp() * z.im.sin(),
    )
}

/// `ln(1 - e^w)`, principal branch.
fn ln_one_minus_exp(w: Complex64) -> Complex64 {
    (-exp_m1(w)).ln()
}

/// `J_N(t)` as a [`LogComplex`].
///
/// The k-th factor contributes `u + Log(1 - t^{-N-k}) + Log(1 - t^{-N+k})`
/// to the logarithm of the summand, with `t^N` represented by `e^u`, so the
/// summands carry a continuous branch of `log`. The returned phase is put
/// on the sheet within π of the largest summand's phase; this is the
/// representative for which `(u + 2πi) log J_N / N` converges.
pub fn jones_eval(pt: JonesPoint) -> LogComplex {
    let u = pt.u;
    let a = (u + 2.0 * PI * I) / pt.n as f64;
    let mut term = LogComplex::ONE;
    let mut sum = LogComplex::ONE;
    let mut dominant = LogComplex::ONE;
    for k in 1..pt.n {
        let ak = a * k as f64;
        let log_factor = u + ln_one_minus_exp(-u - ak) + ln_one_minus_exp(-u + ak);
        if !(log_factor.re.is_finite() && log_factor.im.is_finite()) {
            // a vanishing factor kills this and every later summand
            break;
        }
        term = term * LogComplex::from_log(log_factor);
        if term.log_mag() > dominant.log_mag() {
            dominant = term;
        }
        sum = sum + term;
    }
    sum.with_phase_near(dominant.phase())
}

/// Emitted when `r` lies outside `(5/6, 7/6)`, where the cone-manifold
/// interpretation is not available. The value is still computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityWarning {
    pub r: f64,
}

/// `J_N(q_r)` for real `r`, as sign and log-magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealJones {
    pub n: usize,
    pub r: f64,
    /// `+1`, `-1`, or `0` for an exactly vanishing sum.
    pub sign: f64,
    pub log_abs: f64,
    /// Number of negative factors in the largest summand, plus one if the
    /// total has the opposite sign. `π·phase_count` is the branch of
    /// `Im log J_N` obtained by giving every negative factor phase `+π`.
    pub phase_count: i64,
    pub warning: Option<ValidityWarning>,
}

impl RealJones {
    pub fn value(&self) -> f64 {
        self.sign * self.log_abs.exp()
    }
}

#[derive(Debug, Clone, Copy)]
struct SignedLog {
    sign: f64,
    log_abs: f64,
}

impl SignedLog {
    const ZERO: SignedLog = SignedLog {
        sign: 0.0,
        log_abs: f64::NEG_INFINITY,
    };

    fn add(self, other: SignedLog) -> SignedLog {
        if self.sign == 0.0 {
            return other;
        }
        if other.sign == 0.0 {
            return self;
        }
        let (big, small) = if self.log_abs >= other.log_abs {
            (self, other)
        } else {
            (other, self)
        };
        let ratio = (small.log_abs - big.log_abs).exp() * big.sign * small.sign;
        if ratio == -1.0 {
            return SignedLog::ZERO;
        }
        SignedLog {
            sign: big.sign,
            log_abs: big.log_abs + ratio.ln_1p(),
        }
    }
}

/// `J_N(q_r)` for real `r` through the real factors
/// `t^N (1 - t^{-N-k})(1 - t^{-N+k}) = 2cos(2πr) - 2cos(2πrk/N)`.
pub fn jones_eval_real_r(n: usize, r: f64) -> Result<RealJones> {
    if n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    if !r.is_finite() {
        return Err(Error::InvalidInput(format!("r is not finite: {r}")));
    }
    let warning = (!(r > 5.0 / 6.0 && r < 7.0 / 6.0)).then_some(ValidityWarning { r });
    let c = 2.0 * (TAU * r).cos();
    let mut term = SignedLog {
        sign: 1.0,
        log_abs: 0.0,
    };
    let mut sum = term;
    let mut negatives = 0_i64;
    let mut dominant = (0.0_f64, 0_i64);
    for k in 1..n {
        let factor = c - 2.0 * (TAU * r * k as f64 / n as f64).cos();
        if factor == 0.0 {
            break;
        }
        if factor < 0.0 {
            negatives += 1;
        }
        term = SignedLog {
            sign: term.sign * factor.signum(),
            log_abs: term.log_abs + factor.abs().ln(),
        };
        if term.log_abs > dominant.0 {
            dominant = (term.log_abs, negatives);
        }
        sum = sum.add(term);
    }
    let dominant_sign = if dominant.1 % 2 == 0 { 1.0 } else { -1.0 };
    let phase_count = if sum.sign == dominant_sign || sum.sign == 0.0 {
        dominant.1
    } else {
        dominant.1 + 1
    };
    Ok(RealJones {
        n,
        r,
        sign: sum.sign,
        log_abs: sum.log_abs,
        phase_count,
        warning,
    })
}

/// Sign choice in `φ_{N,±}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Target absolute accuracy of the integral in [`riemann_discrepancy`].
pub const QUADRATURE_TOL: f64 = 1e-10;

/// `φ_{N,±}(n) = Σ_{k=1}^{n} (2π/N) g(2πk/N) - ∫_0^{2πn/N} g(s) ds` with
/// `g(s) = log(1 - exp(±isr - 2πir))`.
pub fn riemann_discrepancy(
    n_big: usize,
    n: usize,
    r: Complex64,
    branch: Branch,
) -> Result<Complex64> {
    ensure_finite(r, "r")?;
    if r.im == 0.0 {
        return Err(Error::DomainError(
            "the Riemann-sum estimates need r off the real axis".into(),
        ));
    }
    if n_big == 0 || n >= n_big {
        return Err(Error::InvalidInput(format!(
            "need 0 <= n <= N-1, got n = {n}, N = {n_big}"
        )));
    }
    let sigma = branch.sign();
    let w = move |s: f64| I * r * (sigma * s) - 2.0 * PI * I * r;
    let g = move |s: f64| ln_one_minus_exp(w(s));

    let h = TAU / n_big as f64;
    let sum: Complex64 = (1..=n).map(|k| g(h * k as f64) * h).sum();
    let upper = h * n as f64;

    // Points where 1 - e^{w(s)} crosses the negative real axis split the
    // range into pieces on which the principal log is continuous.
    let mut breaks = vec![0.0, upper];
    if r.re != 0.0 && upper > 0.0 {
        let spacing = TAU / r.re.abs();
        let reach = (upper / spacing).ceil() as i64 + 2;
        for j in -reach..=reach {
            let s = sigma * TAU * (1.0 + j as f64 / r.re);
            if s > 0.0 && s < upper && w(s).re > 0.0 {
                breaks.push(s);
            }
        }
    }
    breaks.sort_by(|a, b| a.total_cmp(b));
    breaks.dedup();

    let mut integral = Complex64::new(0.0, 0.0);
    for piece in breaks.windows(2) {
        let (lo, hi) = (piece[0], piece[1]);
        if hi <= lo {
            continue;
        }
        let reference = g(0.5 * (lo + hi)).im;
        let on_piece = |s: f64| {
            let v = g(s);
            let k = ((reference - v.im) / TAU).round();
            v + Complex64::new(0.0, TAU * k)
        };
        let tol = QUADRATURE_TOL * (hi - lo) / upper;
        integral += adaptive_simpson(&on_piece, lo, hi, tol);
    }
    Ok(sum - integral)
}

fn adaptive_simpson<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64) -> Complex64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// One side of the two-sided estimates on `log|1 - exp(±isr - 2πir)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
    /// The upper inequality is strict for the minus sign.
    pub strict_upper: bool,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        let upper_ok = if self.strict_upper {
            self.value < self.upper
        } else {
            self.value <= self.upper
        };
        self.lower <= self.value && upper_ok
    }
}

/// Evaluates the stated extreme-value bounds at `(r, s)` for both signs:
///
/// ```text
/// log|1 - e^{2πb/N}| <= log|1 - exp( isr - 2πir)| <= log(1 + e^{2πb})
/// log|1 - e^{2πb}|   <= log|1 - exp(-isr - 2πir)| <  log(1 + e^{4π|b|})
/// ```
///
/// with `r = a + bi`, `b != 0`, `0 <= s <= 2π - 2π/N`.
pub fn max_min_bounds(r: Complex64, s: f64, n_big: usize) -> Result<(BoundCheck, BoundCheck)> {
    ensure_finite(r, "r")?;
    if r.im == 0.0 {
        return Err(Error::DomainError("bounds need Im r != 0".into()));
    }
    if n_big == 0 || !(0.0..=TAU - TAU / n_big as f64).contains(&s) {
        return Err(Error::InvalidInput(format!(
            "s = {s} outside [0, 2π - 2π/N] for N = {n_big}"
        )));
    }
    let b = r.im;
    let nf = n_big as f64;
    let plus = BoundCheck {
        lower: (1.0 - (TAU * b / nf).exp()).abs().ln(),
        value: (-exp_m1(I * s * r - TAU * I * r)).norm().ln(),
        upper: (TAU * b).exp().ln_1p(),
        strict_upper: false,
    };
    let minus = BoundCheck {
        lower: (1.0 - (TAU * b).exp()).abs().ln(),
        value: (-exp_m1(-I * s * r - TAU * I * r)).norm().ln(),
        upper: (2.0 * TAU * b.abs()).exp().ln_1p(),
        strict_upper: true,
    };
    Ok((plus, minus))
}

/// Right-hand side of `|Re φ_{N,+}(n)| < (2πd/N){log(1+e^{2πb}) - log(2π|b|δ/N)}`.
pub fn log_n_envelope_plus(n_big: usize, b: f64, d: f64, delta: f64) -> f64 {
    let nf = n_big as f64;
    TAU * d / nf * ((TAU * b).exp().ln_1p() - (TAU * b.abs() * delta / nf).ln())
}

/// Right-hand side of `|Re φ_{N,-}(n)| < (2πd/N){log(1+e^{4π|b|}) - log|1-e^{2πb}|}`.
pub fn log_n_envelope_minus(n_big: usize, b: f64, d: f64) -> f64 {
    let nf = n_big as f64;
    TAU * d / nf * ((2.0 * TAU * b.abs()).exp().ln_1p() - (1.0 - (TAU * b).exp()).abs().ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_equals_one_is_one() {
        let pt = JonesPoint::new(1, Complex64::new(0.3, -0.2)).unwrap();
        let j = jones_eval(pt);
        assert_eq!(j.log_mag(), 0.0);
        assert_eq!(j.phase(), 0.0);
    }

    #[test]
    fn complete_point_is_positive() {
        for n in [2usize, 7, 50, 333] {
            let j = jones_eval(JonesPoint::new(n, Complex64::new(0.0, 0.0)).unwrap());
            assert!(j.phase().abs() < 1e-10, "N = {n}: phase {}", j.phase());
        }
    }

    #[test]
    fn complete_point_terms_are_chord_products() {
        let n = 6;
        let q = Complex64::from_polar(1.0, TAU / n as f64);
        let mut want = 0.0;
        for m in 0..n {
            want += (1..=m)
                .map(|k| (1.0 - q.powi(k as i32)).norm_sqr())
                .product::<f64>();
        }
        let got = jones_eval(JonesPoint::new(n, Complex64::new(0.0, 0.0)).unwrap());
        assert!((got.to_complex().re - want).abs() < 1e-12 * want);
    }

    #[test]
    fn real_r_agrees_with_complex_at_r_one() {
        for n in [5usize, 40, 300] {
            let real = jones_eval_real_r(n, 1.0).unwrap();
            let cplx = jones_eval(JonesPoint::new(n, Complex64::new(0.0, 0.0)).unwrap());
            assert_eq!(real.sign, 1.0);
            assert!((real.log_abs - cplx.log_mag()).abs() <= 1e-10 * cplx.log_mag().abs().max(1.0));
        }
    }

    #[test]
    fn real_r_five_direct_products() {
        let n = 5;
        let mut want = 0.0;
        for m in 0..n {
            let mut prod = 1.0;
            for k in 1..=m {
                prod *= 2.0 * TAU.cos() - 2.0 * (TAU * k as f64 / n as f64).cos();
            }
            want += prod;
        }
        let got = jones_eval_real_r(n, 1.0).unwrap();
        assert!((got.value() - want).abs() < 1e-12 * want.abs());
        // 1 + 3.618.. + 3.618.. * 1.381.. + ... = 1 + (ζ-chords)
        assert!(got.warning.is_none());
    }

    #[test]
    fn real_r_outside_interval_warns() {
        let j = jones_eval_real_r(20, 0.7).unwrap();
        assert_eq!(j.warning, Some(ValidityWarning { r: 0.7 }));
    }

    #[test]
    fn discrepancy_edge_cases() {
        let r = Complex64::new(1.0, 0.1);
        assert_eq!(
            riemann_discrepancy(100, 0, r, Branch::Plus).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert!(matches!(
            riemann_discrepancy(100, 10, Complex64::new(1.0, 0.0), Branch::Plus),
            Err(Error::DomainError(_))
        ));
        assert!(riemann_discrepancy(100, 100, r, Branch::Minus).is_err());
    }

    #[test]
    fn quadrature_reproduces_sum_for_fine_grids() {
        // With N large the right-endpoint sum converges to the integral.
        let r = Complex64::new(1.02, 0.05);
        let coarse = riemann_discrepancy(400, 200, r, Branch::Minus).unwrap();
        let fine = riemann_discrepancy(3200, 1600, r, Branch::Minus).unwrap();
        assert!(fine.norm() < coarse.norm());
        assert!(fine.norm() < 0.05);
    }

    #[test]
    fn bounds_hold_for_positive_b() {
        let (plus, minus) = max_min_bounds(Complex64::new(1.0, 0.2), 2.0, 100).unwrap();
        assert!(plus.holds());
        assert!(minus.holds());
    }

    #[test]
    fn exp_m1_small_arguments() {
        let z = Complex64::new(1e-12, -2e-12);
        let e = exp_m1(z);
        assert!((e - z).norm() < 1e-22);
    }
}
