//! Property suites that can be run outside `cargo test`, e.g. from the CLI.
//!
//! Sample points come from additive (Weyl) sequences so every run checks
//! the same inputs.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::asymptotics::{
    extrapolate, geometric_ladder, limit_sweep, real_r_limit, real_r_sweep, sign_law_exponent,
};
use crate::cusp::{holonomy_state, state_at, DeformationParam};
use crate::jones::{jones_eval, max_min_bounds, JonesPoint};
use crate::optimistic::{agreement_digits, critical_point, gradient, observation_check, v_p};
use crate::potential::{h_of_u, h_two, phi_of_u};
use crate::special_fn::{li2, lobachevsky, PI2_6};
use crate::surgery::{canonical_cs, solve_filling, vol_cs_p1, vol_cs_raw, FillingSlope};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn() -> std::result::Result<String, String>;

/// Every suite, in a fixed order.
pub fn suites() -> Vec<(&'static str, Check)> {
    vec![
        ("special_fn/dilog-on-circle", dilog_on_circle as Check),
        ("special_fn/lobachevsky-symmetry", lobachevsky_symmetry),
        ("special_fn/duplication", duplication),
        ("special_fn/li2-reflection", li2_reflection),
        ("cusp/state-invariants", state_invariants),
        ("cusp/radial-continuity", radial_continuity),
        ("cusp/conjugation", conjugation),
        ("potential/critical-point", potential_critical_point),
        ("potential/dh-du", dh_du),
        ("potential/phi", phi_identities),
        ("jones/naive-equivalence", naive_equivalence),
        ("jones/positivity", positivity),
        ("jones/max-min-bounds", max_min),
        ("asymptotics/limit-at-u", limit_at_u),
        ("asymptotics/imaginary-part-law", imaginary_part_law),
        ("asymptotics/sign-law", sign_law),
        ("surgery/filling-residuals", filling_residuals),
        ("surgery/volume-monotone", volume_monotone),
        ("surgery/cs-canonical", cs_canonical),
        ("optimistic/analytic-gradient", analytic_gradient),
        ("optimistic/fd-gradient", fd_gradient),
        ("optimistic/observation", observation),
        ("optimistic/mod-pi2", mod_pi2),
    ]
}

/// Runs every suite; output order is that of [`suites`].
pub fn run_all() -> Vec<SuiteOutcome> {
    suites()
        .into_par_iter()
        .map(|(name, check)| match check() {
            Ok(detail) => SuiteOutcome {
                name,
                passed: true,
                detail,
            },
            Err(detail) => SuiteOutcome {
                name,
                passed: false,
                detail,
            },
        })
        .collect()
}

fn weyl(k: usize, alpha: f64) -> f64 {
    (k as f64 * alpha).fract()
}

const A1: f64 = 0.618_033_988_749_894_8;
const A2: f64 = 0.414_213_562_373_095_1;
const A3: f64 = 0.732_050_807_568_877_2;

/// `count` points spread over the disk `|u| <= radius`.
pub fn disk_samples(count: usize, radius: f64) -> Vec<Complex64> {
    (0..count)
        .map(|k| {
            let rho = radius * weyl(k + 1, A2).sqrt();
            Complex64::from_polar(rho, TAU * weyl(k + 1, A1))
        })
        .collect()
}

fn verdict(worst: f64, tol: f64, what: &str) -> std::result::Result<String, String> {
    let msg = format!("{what}: worst {worst:.3e} (tol {tol:.0e})");
    if worst <= tol {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn err_s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Direct `O(N²)` evaluation of the defining sum with plain complex
/// arithmetic.
pub fn naive_jones(n: usize, u: Complex64) -> Complex64 {
    let t = ((u + 2.0 * PI * I) / n as f64).exp();
    let big = n as i32;
    let mut sum = Complex64::new(0.0, 0.0);
    for m in 0..n {
        let mut prod = Complex64::new(1.0, 0.0);
        for k in 1..=m as i32 {
            prod *= t.powi(big) * (1.0 - t.powi(-big - k)) * (1.0 - t.powi(-big + k));
        }
        sum += prod;
    }
    sum
}

fn dilog_on_circle() -> std::result::Result<String, String> {
    let mut worst: f64 = 0.0;
    for k in 1..1000 {
        let beta = TAU * k as f64 / 1000.0;
        let lhs = li2(Complex64::from_polar(1.0, beta)).map_err(err_s)?;
        let rhs = Complex64::new(
            PI2_6 - beta / 2.0 * (PI - beta / 2.0),
            2.0 * lobachevsky(beta / 2.0).map_err(err_s)?,
        );
        worst = worst.max((lhs - rhs).norm());
    }
    verdict(worst, 1e-12, "999 angles")
}

fn lobachevsky_symmetry() -> std::result::Result<String, String> {
    let (mut odd, mut per): (f64, f64) = (0.0, 0.0);
    for k in 0..200 {
        let th = -4.0 + 8.0 * k as f64 / 199.0;
        let l = lobachevsky(th).map_err(err_s)?;
        odd = odd.max((lobachevsky(-th).map_err(err_s)? + l).abs());
        per = per.max((lobachevsky(th + PI).map_err(err_s)? - l).abs());
    }
    if odd <= 1e-14 && per <= 1e-13 {
        Ok(format!("oddness {odd:.1e}, period {per:.1e}"))
    } else {
        Err(format!(
            "oddness {odd:.1e} (tol 1e-14), period {per:.1e} (tol 1e-13)"
        ))
    }
}

fn duplication() -> std::result::Result<String, String> {
    let mut worst: f64 = 0.0;
    for k in 0..300 {
        let th = -3.0 + 6.0 * k as f64 / 299.0;
        let d = lobachevsky(2.0 * th).map_err(err_s)? - 2.0 * lobachevsky(th).map_err(err_s)?
            + 2.0 * lobachevsky(PI / 2.0 - th).map_err(err_s)?;
        worst = worst.max(d.abs());
    }
    verdict(worst, 1e-12, "300 angles")
}

fn li2_reflection() -> std::result::Result<String, String> {
    let mut worst: f64 = 0.0;
    for k in 0..400 {
        let rho = 0.9 * weyl(k + 1, A2).sqrt();
        let z = Complex64::from_polar(rho, PI * weyl(k + 1, A1));
        if z.norm() < 1e-3 {
            continue;
        }
        let one_minus = 1.0 - z;
        let d = li2(z).map_err(err_s)? + li2(one_minus).map_err(err_s)? - PI2_6
            + z.ln() * one_minus.ln();
        worst = worst.max(d.norm());
    }
    verdict(worst, 1e-12, "upper half disk r <= 0.9")
}

fn state_invariants() -> std::result::Result<String, String> {
    let mut worst = [0.0f64; 3];
    for u in disk_samples(200, 0.3) {
        let s = state_at(u).map_err(err_s)?;
        let (g1, g2) = s.gluing_residuals();
        worst[0] = worst[0].max(g1.max(g2));
        worst[1] = worst[1].max(s.saddle_residual());
        worst[2] = worst[2].max((s.m + (u / 2.0).exp()).norm());
    }
    if worst[0] <= 1e-12 && worst[1] <= 1e-13 && worst[2] <= 1e-15 {
        Ok(format!(
            "200 points: gluing {:.1e}, saddle {:.1e}",
            worst[0], worst[1]
        ))
    } else {
        Err(format!(
            "gluing {:.1e} (1e-12), saddle {:.1e} (1e-13), meridian {:.1e}",
            worst[0], worst[1], worst[2]
        ))
    }
}

fn radial_continuity() -> std::result::Result<String, String> {
    let mut worst: f64 = 0.0;
    for k in 0..8 {
        let dir = Complex64::from_polar(1.0, TAU * k as f64 / 8.0);
        let mut prev = holonomy_state(DeformationParam::complete())
            .map_err(err_s)?
            .z;
        for j in 1..=100 {
            let z = state_at(dir * (0.3 * j as f64 / 100.0)).map_err(err_s)?.z;
            worst = worst.max((z - prev).norm());
            prev = z;
        }
    }
    if worst < 0.1 {
        Ok(format!("largest jump {worst:.2e}"))
    } else {
        Err(format!("jump {worst:.2e} >= 0.1"))
    }
}

/// `z(ū) = 1 - conj w(u)`, `w(ū) = 1 - conj z(u)`, `y(ū) = 1/conj y(u)`,
/// `v(ū) = -conj v(u)`, and `H(ū) = -conj H(u)`.
fn conjugation() -> std::result::Result<String, String> {
    let mut worst: f64 = 0.0;
    for u in disk_samples(50, 0.3) {
        let a = state_at(u).map_err(err_s)?;
        let b = state_at(u.conj()).map_err(err_s)?;
        let pairs = [
            (a.m.conj(), b.m),
            (1.0 - a.w.conj(), b.z),
            (1.0 - a.z.conj(), b.w),
            (a.y.conj().inv(), b.y),
            (-a.v.conj(), b.v),
        ];
        for (x, y) in pairs {
            worst = worst.max((x - y).norm());
        }
        let ha = h_of_u(DeformationParam::new(u).map_err(err_s)?)
            .map_err(err_s)?
            .value;
        let hb = h_of_u(DeformationParam::new(u.conj()).map_err(err_s)?)
            .map_err(err_s)?
            .value;
        worst = worst.max((hb + ha.conj()).norm());
    }
    verdict(worst, 1e-12, "50 points")
}

fn potential_critical_point() -> std::result::Result<String, String> {
    let h = 1e-3;
    let mut worst: f64 = 0.0;
    for u in disk_samples(50, 0.3) {
        let s = state_at(u).map_err(err_s)?;
        let eta = s.m * s.m;
        let at = |d: f64| h_two(s.y + d, eta).map(|v| v.value).map_err(err_s);
        // five-point stencil
        let d = (at(-2.0 * h)? - 8.0 * at(-h)? + 8.0 * at(h)? - at(2.0 * h)?) / (12.0 * h);
        worst = worst.max(d.norm());
    }
    verdict(worst, 1e-10, "|dH/dxi| at xi = y, 50 points")
}

fn dh_du() -> std::result::Result<String, String> {
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for u in disk_samples(20, 0.3) {
        let plus = h_of_u(DeformationParam::new(u + h).map_err(err_s)?)
            .map_err(err_s)?
            .value;
        let minus = h_of_u(DeformationParam::new(u - h).map_err(err_s)?)
            .map_err(err_s)?
            .value;
        let fd = (plus - minus) / (2.0 * h);
        let want = state_at(u).map_err(err_s)?.v / 2.0 + PI * I;
        worst = worst.max((fd - want).norm() / want.norm());
    }
    verdict(worst, 1e-8, "relative, 20 points")
}

fn phi_identities() -> std::result::Result<String, String> {
    let at0 = phi_of_u(DeformationParam::complete())
        .map_err(err_s)?
        .value
        .norm();
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for u in disk_samples(20, 0.3) {
        let plus = phi_of_u(DeformationParam::new(u + h).map_err(err_s)?)
            .map_err(err_s)?
            .value;
        let minus = phi_of_u(DeformationParam::new(u - h).map_err(err_s)?)
            .map_err(err_s)?
            .value;
        let fd = (plus - minus) / (2.0 * h);
        let want = 2.0 * state_at(u).map_err(err_s)?.v;
        worst = worst.max((fd - want).norm() / want.norm());
    }
    if at0 <= 1e-13 && worst <= 1e-7 {
        Ok(format!("Phi(0) = {at0:.1e}, dPhi/du relative {worst:.1e}"))
    } else {
        Err(format!(
            "Phi(0) = {at0:.1e} (1e-13), dPhi/du relative {worst:.1e} (1e-7)"
        ))
    }
}

fn naive_equivalence() -> std::result::Result<String, String> {
    let (mut mag, mut phase): (f64, f64) = (0.0, 0.0);
    for u in disk_samples(20, 1.0) {
        for n in 1..=50 {
            let fast = jones_eval(JonesPoint::new(n, u).map_err(err_s)?);
            let slow = naive_jones(n, u);
            let l = fast.ln().ok_or("zero sum")?;
            let ls = slow.ln();
            mag = mag.max((l.re - ls.re).abs() / ls.re.abs().max(1.0));
            let dp = (l.im - ls.im) / TAU;
            phase = phase.max((dp - dp.round()).abs() * TAU);
        }
    }
    if mag <= 1e-11 && phase <= 1e-11 {
        Ok(format!(
            "N <= 50, 20 points: log|J| {mag:.1e}, phase {phase:.1e}"
        ))
    } else {
        Err(format!("log|J| {mag:.1e}, phase {phase:.1e} (tol 1e-11)"))
    }
}

fn positivity() -> std::result::Result<String, String> {
    let mut worst: f64 = 0.0;
    for n in (2..=2000).step_by(37) {
        let j = jones_eval(JonesPoint::new(n, Complex64::new(0.0, 0.0)).map_err(err_s)?);
        worst = worst.max(j.principal_phase().abs());
    }
    verdict(worst, 1e-10, "phase at u = 0")
}

fn max_min() -> std::result::Result<String, String> {
    let mut failures = Vec::new();
    for k in 0..50 {
        let a = 0.9 + 0.2 * weyl(k + 1, A1);
        let mut b = -0.3 + 0.6 * weyl(k + 1, A2);
        if b == 0.0 {
            b = 0.1;
        }
        let n = [50usize, 100, 400][k % 3];
        let s = (TAU - TAU / n as f64) * weyl(k + 1, A3);
        let (plus, minus) = max_min_bounds(Complex64::new(a, b), s, n).map_err(err_s)?;
        if !plus.holds() || !minus.holds() {
            failures.push(format!("r = {a:.4}{b:+.4}i, s = {s:.4}, N = {n}"));
        }
    }
    if failures.is_empty() {
        Ok("50 samples".into())
    } else {
        Err(format!(
            "{} of 50 violate; first: {}",
            failures.len(),
            failures[0]
        ))
    }
}

/// Sample points for the limit `(u + 2πi) lim log J_N / N = H(u)`.
pub const LIMIT_SAMPLES: [(f64, f64); 5] = [
    (0.1, 0.0),
    (0.1, 0.1),
    (0.15, -0.05),
    (0.2, -0.1),
    (0.05, 0.2),
];

fn limit_at_u() -> std::result::Result<String, String> {
    let ladder = geometric_ladder(100, 6400, 2);
    let mut worst: f64 = 0.0;
    for (re, im) in LIMIT_SAMPLES {
        let p = DeformationParam::new(Complex64::new(re, im)).map_err(err_s)?;
        let fit = extrapolate(&limit_sweep(p, &ladder).map_err(err_s)?).map_err(err_s)?;
        let h = h_of_u(p).map_err(err_s)?.value;
        worst = worst.max((fit.limit - h).norm());
    }
    verdict(worst, 1e-3, "5 sample u, N up to 6400")
}

fn imaginary_part_law() -> std::result::Result<String, String> {
    let r = 0.93;
    let lim = real_r_limit(r, &[625, 1250, 2500, 5000]).map_err(err_s)?;
    let want = 2.0 * PI * PI * (1.0 - r);
    verdict((lim.im_part() - want).abs(), 5e-2, "r = 0.93")
}

fn sign_law() -> std::result::Result<String, String> {
    let ns: Vec<usize> = (50..=500).collect();
    let mut report = Vec::new();
    let mut ok = true;
    for r in [0.90 + 1.0 / (100.0 * PI), 0.93, 1.05] {
        let rows = real_r_sweep(r, &ns).map_err(err_s)?;
        let bad = rows
            .iter()
            .filter(|j| {
                let want = if sign_law_exponent(j.n, r).rem_euclid(2) == 0 {
                    1.0
                } else {
                    -1.0
                };
                j.sign != want
            })
            .count();
        ok &= bad == 0;
        report.push(format!("r = {r:.4}: {bad}/451 mismatches"));
    }
    if ok {
        Ok(report.join("; "))
    } else {
        Err(report.join("; "))
    }
}

fn filling_residuals() -> std::result::Result<String, String> {
    let (mut res, mut lam): (f64, f64) = (0.0, 0.0);
    for p in (-12i64..=-5).chain(5..=12) {
        let s = vol_cs_p1(p).map_err(err_s)?;
        res = res.max((p as f64 * s.u + s.v - 2.0 * PI * I).norm());
        lam = lam.max(((2.0 * PI * I - s.v) / p as f64 - s.u).norm());
    }
    if res <= 1e-12 && lam <= 1e-12 {
        Ok(format!(
            "|p| in 5..12: residual {res:.1e}, lambda {lam:.1e}"
        ))
    } else {
        Err(format!(
            "residual {res:.1e}, lambda identity {lam:.1e} (tol 1e-12)"
        ))
    }
}

fn volume_monotone() -> std::result::Result<String, String> {
    let vols: Vec<f64> = (5..=100)
        .into_par_iter()
        .map(|p| vol_cs_p1(p).map(|s| s.vol))
        .collect::<crate::Result<_>>()
        .map_err(err_s)?;
    let increasing = vols.windows(2).all(|w| w[0] < w[1]);
    let bounded = vols.iter().all(|&v| v < 2.0298833);
    if increasing && bounded {
        Ok(format!(
            "vol(5,1) = {:.10}, vol(100,1) = {:.10}",
            vols[0], vols[95]
        ))
    } else {
        Err(format!("increasing: {increasing}, bounded: {bounded}"))
    }
}

fn cs_canonical() -> std::result::Result<String, String> {
    let half = PI * PI / 2.0;
    for p in [5i64, -6, 9] {
        let s = vol_cs_p1(p).map_err(err_s)?;
        let raw = vol_cs_raw(DeformationParam::new(s.u).map_err(err_s)?, s.u).map_err(err_s)?;
        if !(-half..half).contains(&s.cs) {
            return Err(format!("p = {p}: cs = {} outside range", s.cs));
        }
        if (canonical_cs(raw.im + PI * PI) - s.cs).abs() > 1e-12 {
            return Err(format!("p = {p}: shift by pi^2 changes cs"));
        }
    }
    Ok("cs in [-pi^2/2, pi^2/2), invariant under pi^2 shifts".into())
}

fn analytic_gradient() -> std::result::Result<String, String> {
    let mut worst: f64 = 0.0;
    for p in (-12i64..=-5).chain(5..=12) {
        let (u, _) = solve_filling(FillingSlope::integral(p, 1).map_err(err_s)?).map_err(err_s)?;
        let s = state_at(u).map_err(err_s)?;
        let g = gradient(s.y, s.m * s.m, p);
        worst = worst.max(g[0].norm().max(g[1].norm()));
    }
    verdict(worst, 1e-10, "closed-form partials at (y, m^2)")
}

fn fd_gradient() -> std::result::Result<String, String> {
    let h = 1e-6;
    let (xi0, eta0) = crate::optimistic::base_point();
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let xi = xi0 + Complex64::from_polar(0.2 * weyl(k + 1, A1), TAU * weyl(k + 1, A2));
        let eta = eta0 + Complex64::from_polar(0.2 * weyl(k + 1, A3), TAU * weyl(k + 1, A1 + A2));
        let p = 5 + k as i64 % 8;
        let g = gradient(xi, eta, p);
        let fx =
            (v_p(xi + h, eta, p).map_err(err_s)? - v_p(xi - h, eta, p).map_err(err_s)?) / (2.0 * h);
        let fe =
            (v_p(xi, eta + h, p).map_err(err_s)? - v_p(xi, eta - h, p).map_err(err_s)?) / (2.0 * h);
        let scale = g[0].norm().max(g[1].norm()).max(1.0);
        worst = worst.max(((fx - g[0]).norm()).max((fe - g[1]).norm()) / scale);
    }
    verdict(worst, 1e-6, "20 points near the base point")
}

fn observation() -> std::result::Result<String, String> {
    let mut lines = Vec::new();
    let mut ok = true;
    for p in (-12i64..=-5).chain(5..=12) {
        let cp = critical_point(p).map_err(err_s)?;
        let (u, _) = solve_filling(FillingSlope::integral(p, 1).map_err(err_s)?).map_err(err_s)?;
        let s = state_at(u).map_err(err_s)?;
        let dist = (cp.xi0 - s.y).norm().max((cp.eta0 - s.m * s.m).norm());
        let obs = observation_check(p).map_err(err_s)?;
        let good = cp.grad_norm <= 1e-10 && dist <= 1e-8 && obs.agree_digits >= 8;
        ok &= good;
        if !good {
            lines.push(format!(
                "p = {p}: dist {dist:.1e}, digits {}",
                obs.agree_digits
            ));
        }
    }
    if ok {
        Ok("|p| in 5..12: critical point matches, >= 8 digits".into())
    } else {
        Err(lines.join("; "))
    }
}

fn mod_pi2() -> std::result::Result<String, String> {
    for p in [5i64, -8, 12] {
        let obs = observation_check(p).map_err(err_s)?;
        for k in -2..=2 {
            let shifted = obs.lhs + Complex64::new(k as f64 * PI * PI, 0.0);
            if agreement_digits(shifted, obs.rhs) != obs.agree_digits {
                return Err(format!("p = {p}: shift by {k} pi^2 changes digits"));
            }
        }
    }
    Ok("digits unchanged under k pi^2 shifts, |k| <= 2".into())
}
