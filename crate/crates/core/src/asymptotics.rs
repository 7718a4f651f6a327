//! Limit sweeps of `(u + 2πi) log J_N / N`, extrapolation in `N`, the
//! saddle-point leading term, and cone-manifold volumes for real `r`.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, SVD};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::cusp::{holonomy_state, DeformationParam};
use crate::error::{Error, Result};
use crate::jones::{jones_eval, jones_eval_real_r, JonesPoint, RealJones};
use crate::logcomplex::LogComplex;
use crate::potential::h_two;
use crate::special_fn::lobachevsky;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub log_j: LogComplex,
    /// `(u + 2πi) log J_N / N`.
    pub estimate: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub limit: Complex64,
    pub log_coeff: Complex64,
    pub const_coeff: Complex64,
    /// Root-mean-square of `|estimate - model|` over the fitted rows.
    pub residual: f64,
}

impl FitResult {
    pub fn eval(&self, n: f64) -> Complex64 {
        self.limit + (self.log_coeff * n.ln() + self.const_coeff) / n
    }
}

/// `start, start·ratio, ...` up to and including `stop`.
pub fn geometric_ladder(start: usize, stop: usize, ratio: usize) -> Vec<usize> {
    let mut out = Vec::new();
    if start == 0 || ratio < 2 {
        return out;
    }
    let mut n = start;
    while n <= stop {
        out.push(n);
        n = match n.checked_mul(ratio) {
            Some(next) => next,
            None => break,
        };
    }
    out
}

fn check_ladder(ns: &[usize], min: usize) -> Result<()> {
    if let Some(&bad) = ns.iter().find(|&&n| n < min) {
        return Err(Error::InvalidInput(format!(
            "N must be at least {min}, got {bad}"
        )));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(
            "N values must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// One row per `N`, evaluated in parallel and returned in input order.
pub fn limit_sweep(param: DeformationParam, ns: &[usize]) -> Result<Vec<ConvergenceRow>> {
    check_ladder(ns, 2)?;
    let u = param.u();
    ns.par_iter()
        .map(|&n| {
            let log_j = jones_eval(JonesPoint::new(n, u)?);
            let l = log_j
                .ln()
                .ok_or_else(|| Error::DomainError(format!("J_{n} vanishes at u = {u}")))?;
            let estimate = (u + 2.0 * PI * I) * l / n as f64;
            Ok(ConvergenceRow { n, log_j, estimate })
        })
        .collect()
}

/// Least-squares fit of `value(N) = L + (a log N + b)/N`.
pub fn fit_sequence(ns: &[usize], values: &[Complex64]) -> Result<FitResult> {
    if ns.len() != values.len() {
        return Err(Error::FitError("length mismatch".into()));
    }
    if ns.len() < 4 {
        return Err(Error::FitError(format!(
            "need at least 4 rows, got {}",
            ns.len()
        )));
    }
    let rows = ns.len();
    let design = DMatrix::from_fn(rows, 3, |i, j| {
        let n = ns[i] as f64;
        match j {
            0 => 1.0,
            1 => n.ln() / n,
            _ => 1.0 / n,
        }
    });
    let rhs = DMatrix::from_fn(
        rows,
        2,
        |i, j| if j == 0 { values[i].re } else { values[i].im },
    );
    let svd = SVD::new(design.clone(), true, true);
    let s_max = svd.singular_values.max();
    let s_min = svd.singular_values.min();
    if !s_max.is_finite() || s_max <= 0.0 || s_min <= 1e-12 * s_max {
        return Err(Error::FitError("rank-deficient design matrix".into()));
    }
    let coeffs = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::FitError(e.to_string()))?;
    let c = |k: usize| Complex64::new(coeffs[(k, 0)], coeffs[(k, 1)]);
    let fitted = &design * &coeffs;
    let ss: f64 = (0..rows)
        .map(|i| (fitted[(i, 0)] - rhs[(i, 0)]).powi(2) + (fitted[(i, 1)] - rhs[(i, 1)]).powi(2))
        .sum();
    Ok(FitResult {
        limit: c(0),
        log_coeff: c(1),
        const_coeff: c(2),
        residual: (ss / rows as f64).sqrt(),
    })
}

pub fn extrapolate(rows: &[ConvergenceRow]) -> Result<FitResult> {
    let ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    let values: Vec<Complex64> = rows.iter().map(|r| r.estimate).collect();
    fit_sequence(&ns, &values)
}

/// `log[(N/2πi) · √(2π) / (r√N √(y - y⁻¹)) · exp(N H(y, m²)/(2πri))]`.
pub fn saddle_prediction(pt: JonesPoint) -> Result<LogComplex> {
    if pt.n() < 2 {
        return Err(Error::InvalidInput("saddle prediction needs N >= 2".into()));
    }
    let state = holonomy_state(DeformationParam::new(pt.u())?)?;
    let r = pt.r();
    let n = pt.n() as f64;
    let h = h_two(state.y, state.m * state.m)?.value;
    let log_prefactor = (n / (2.0 * PI * I)).ln() + 0.5 * TAU.ln()
        - r.ln()
        - 0.5 * n.ln()
        - (state.y - state.y.inv()).sqrt().ln();
    Ok(LogComplex::from_log(
        log_prefactor + n * h / (2.0 * PI * r * I),
    ))
}

fn check_cone_interval(r: f64) -> Result<()> {
    if !(r > 5.0 / 6.0 && r < 7.0 / 6.0) {
        return Err(Error::DomainError(format!("r = {r} outside (5/6, 7/6)")));
    }
    Ok(())
}

/// `α(r) = arccos(cos(2πr) - 1/2)`.
pub fn cone_alpha(r: f64) -> Result<f64> {
    check_cone_interval(r)?;
    Ok(((TAU * r).cos() - 0.5).acos())
}

/// `2{Л(πr + α/2) - Л(πr - α/2)}`.
pub fn cone_volume(r: f64) -> Result<f64> {
    let alpha = cone_alpha(r)?;
    let x = PI * r;
    Ok(2.0 * (lobachevsky(x + 0.5 * alpha)? - lobachevsky(x - 0.5 * alpha)?))
}

/// Closed form of `H(y, m²)` for real `r`:
/// `-2π²(r-1) + 2i{Л(πr + α/2) - Л(πr - α/2)}`.
pub fn h_at_real_r(r: f64) -> Result<Complex64> {
    Ok(Complex64::new(-2.0 * PI * PI * (r - 1.0), cone_volume(r)?))
}

/// `⌊N(1-r)/r⌋`; the predicted sign of `J_N(q_r)` is `(-1)` to this power.
pub fn sign_law_exponent(n: usize, r: f64) -> i64 {
    (n as f64 * (1.0 - r) / r).floor() as i64
}

pub fn real_r_sweep(r: f64, ns: &[usize]) -> Result<Vec<RealJones>> {
    check_ladder(ns, 1)?;
    ns.par_iter().map(|&n| jones_eval_real_r(n, r)).collect()
}

/// Extrapolated real-`r` limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealLimit {
    /// Fit of `2πr log|J_N|/N` (real part) and `2πr·π·phase_count/N`
    /// (imaginary part).
    pub fit: FitResult,
}

impl RealLimit {
    pub fn volume(&self) -> f64 {
        self.fit.limit.re
    }

    pub fn im_part(&self) -> f64 {
        self.fit.limit.im
    }
}

pub fn real_r_limit(r: f64, ns: &[usize]) -> Result<RealLimit> {
    let rows = real_r_sweep(r, ns)?;
    let values: Vec<Complex64> = rows
        .iter()
        .map(|j| {
            let scale = TAU * r / j.n as f64;
            Complex64::new(scale * j.log_abs, scale * PI * j.phase_count as f64)
        })
        .collect();
    Ok(RealLimit {
        fit: fit_sequence(ns, &values)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{figure_eight_volume, h_of_u};

    #[test]
    fn ladder_shapes() {
        assert_eq!(
            geometric_ladder(100, 6400, 2),
            vec![100, 200, 400, 800, 1600, 3200, 6400]
        );
        assert_eq!(geometric_ladder(3, 2, 2), Vec::<usize>::new());
    }

    #[test]
    fn fit_recovers_its_own_model() {
        let ns = [50usize, 100, 200, 400, 800];
        let limit = Complex64::new(0.7, -1.3);
        let values: Vec<_> = ns
            .iter()
            .map(|&n| {
                let n = n as f64;
                limit + Complex64::new(2.0 * n.ln() + 1.0, 0.5) / n
            })
            .collect();
        let fit = fit_sequence(&ns, &values).unwrap();
        assert!((fit.limit - limit).norm() <= 1e-10);
        assert!(fit.residual <= 1e-12);
    }

    #[test]
    fn fit_rejects_degenerate_input() {
        let v = vec![Complex64::new(1.0, 0.0); 4];
        assert!(matches!(
            fit_sequence(&[10, 10, 10, 10], &v),
            Err(Error::FitError(_))
        ));
        assert!(matches!(
            fit_sequence(&[10, 20, 40], &v[..3]),
            Err(Error::FitError(_))
        ));
    }

    #[test]
    fn sweep_validates_and_orders() {
        let p = DeformationParam::complete();
        assert!(limit_sweep(p, &[1, 4]).is_err());
        assert!(limit_sweep(p, &[8, 4]).is_err());
        let rows = limit_sweep(p, &[2]).unwrap();
        assert_eq!(rows.len(), 1);
        let rows = limit_sweep(p, &[10, 20, 30]).unwrap();
        assert_eq!(
            rows.iter().map(|r| r.n).collect::<Vec<_>>(),
            vec![10, 20, 30]
        );
    }

    #[test]
    fn short_ladder_at_point_one() {
        let p = DeformationParam::new(Complex64::new(0.1, 0.0)).unwrap();
        let rows = limit_sweep(p, &[100, 200, 400, 800]).unwrap();
        let fit = extrapolate(&rows).unwrap();
        let h = h_of_u(p).unwrap().value;
        assert!((fit.limit - h).norm() <= 1e-3, "{} vs {h}", fit.limit);
    }

    #[test]
    fn cone_volume_at_one() {
        assert!((cone_alpha(1.0).unwrap() - PI / 3.0).abs() < 1e-15);
        assert!((cone_volume(1.0).unwrap() - figure_eight_volume()).abs() < 1e-13);
        assert!(matches!(cone_volume(0.8), Err(Error::DomainError(_))));
    }

    #[test]
    fn closed_form_h_at_real_r() {
        for &r in &[0.9, 0.95, 1.0, 1.03, 1.1] {
            let u = 2.0 * PI * I * (r - 1.0);
            let s = holonomy_state(DeformationParam::new(u).unwrap()).unwrap();
            let h = h_two(s.y, s.m * s.m).unwrap().value;
            let want = h_at_real_r(r).unwrap();
            assert!((h - want).norm() <= 1e-10, "r = {r}: {h} vs {want}");
        }
    }

    #[test]
    fn saddle_real_part_at_r_one() {
        let s = holonomy_state(DeformationParam::complete()).unwrap();
        let h = h_two(s.y, s.m * s.m).unwrap().value;
        let x = (h / (2.0 * PI * I)).re;
        let want = 2.0 * lobachevsky(PI / 6.0).unwrap() / PI;
        assert!((x - want).abs() <= 1e-12);
        assert!((want - 0.3230659).abs() < 1e-7);
    }

    #[test]
    fn saddle_prediction_slope() {
        let a =
            saddle_prediction(JonesPoint::new(1000, Complex64::new(0.0, 0.0)).unwrap()).unwrap();
        let b =
            saddle_prediction(JonesPoint::new(2000, Complex64::new(0.0, 0.0)).unwrap()).unwrap();
        let slope = (b.log_mag() - a.log_mag() - 0.5 * 2f64.ln()) / 1000.0;
        assert!((slope - figure_eight_volume() / TAU).abs() < 1e-12);
    }
}
