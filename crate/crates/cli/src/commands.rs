use std::f64::consts::{PI, TAU};

use clap::{Args, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;
use volconj::asymptotics::{
    cone_alpha, cone_volume, extrapolate, limit_sweep, real_r_limit, real_r_sweep,
    saddle_prediction,
};
use volconj::cusp::holonomy_state;
use volconj::jones::{jones_eval, jones_eval_real_r};
use volconj::optimistic::{critical_point, observation_at};
use volconj::potential::{f_of_u, f_rogers, h_of_u, phi_of_u};
use volconj::surgery::{solve_filling, vol_cs, vol_cs_p1};
use volconj::{selftest, DeformationParam, Error, FillingSlope, JonesPoint, U_MAX};

use crate::nlist::parse_n_list;
use crate::table::{Cell, Table};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Fraction of [`U_MAX`] past which a proximity warning is printed.
const EDGE_FRACTION: f64 = 0.9;

#[derive(Debug, Clone, PartialEq)]
pub struct NList(pub Vec<usize>);

fn n_list(s: &str) -> Result<NList, String> {
    parse_n_list(s).map(NList)
}

#[derive(Debug, Clone, Args)]
pub struct Point {
    /// Real part of the meridian log-holonomy u.
    #[arg(long = "u-re", default_value_t = 0.0, allow_negative_numbers = true)]
    pub u_re: f64,
    /// Imaginary part of u.
    #[arg(long = "u-im", default_value_t = 0.0, allow_negative_numbers = true)]
    pub u_im: f64,
}

impl Point {
    fn u(&self) -> Complex64 {
        Complex64::new(self.u_re, self.u_im)
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Holonomy data m, z, w, y, v at u.
    Geom(Point),
    /// H(u), f(u), its Rogers form and Φ(u).
    Potential(Point),
    /// log J_N at u (with the saddle-point prediction), or J_N at real r.
    Jones {
        #[command(flatten)]
        point: Point,
        /// Evaluate on the real-r path instead of at u.
        #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["u_re", "u_im"])]
        r: Option<f64>,
        /// N values: `500`, `100,200`, `start:stop:x2` or `start:stop:+k`.
        #[arg(long, value_parser = n_list)]
        n: NList,
    },
    /// Sweep of (u + 2πi) log J_N / N with an extrapolated limit.
    Limit {
        #[command(flatten)]
        point: Point,
        #[arg(long, value_parser = n_list, default_value = "100:6400:x2")]
        n: NList,
    },
    /// Real-r sweep compared with the cone-manifold volume.
    Cone {
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
        #[arg(long, value_parser = n_list, default_value = "625:5000:x2")]
        n: NList,
    },
    /// Solves the filling equation p·u + q·v = 2πi (p, q real).
    Fill {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
        q: f64,
    },
    /// Volume and Chern–Simons invariant of the (p, 1) filling, or of an
    /// explicit (u, λ).
    Volcs {
        #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["u_re", "u_im", "lambda_re", "lambda_im"])]
        p: Option<i64>,
        #[arg(long = "u-re", allow_negative_numbers = true)]
        u_re: Option<f64>,
        #[arg(long = "u-im", allow_negative_numbers = true)]
        u_im: Option<f64>,
        #[arg(long = "lambda-re", allow_negative_numbers = true)]
        lambda_re: Option<f64>,
        #[arg(long = "lambda-im", allow_negative_numbers = true)]
        lambda_im: Option<f64>,
    },
    /// Critical point of V_p compared with -CS + i·Vol of the (p, 1) filling.
    #[command(group = clap::ArgGroup::new("which").required(true).args(["p", "range", "full"]))]
    Optimistic {
        #[arg(long, allow_negative_numbers = true)]
        p: Option<i64>,
        /// Inclusive range `a:b`; exceptional |p| <= 4 are skipped.
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
        /// Every non-exceptional p in [-100, 100].
        #[arg(long)]
        full: bool,
    },
    /// Runs every property suite.
    Selftest,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Lib(e) if e.is_convergence_failure() => 2,
            Failure::Lib(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(s) => f.write_str(s),
            Failure::Lib(e) => write!(f, "{e}"),
        }
    }
}

pub struct Output {
    pub table: Table,
    pub warnings: Vec<String>,
    pub exit_code: i32,
}

impl Output {
    fn new(table: Table, warnings: Vec<String>) -> Self {
        Self {
            table,
            warnings,
            exit_code: 0,
        }
    }
}

fn c(z: Complex64) -> [Cell; 2] {
    [z.re.into(), z.im.into()]
}

fn row<const K: usize>(parts: [&[Cell]; K]) -> Vec<Cell> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

/// `(p, q)` with `q <= 100` and `r = p/q`, if any.
fn small_fraction(r: f64) -> Option<(i64, i64)> {
    (1..=100i64).find_map(|q| {
        let x = r * q as f64;
        let p = x.round();
        ((x - p).abs() <= 1e-9).then_some((p as i64, q))
    })
}

fn warn_rational_r(r: f64, warnings: &mut Vec<String>) {
    if r == 1.0 {
        return;
    }
    if let Some((p, q)) = small_fraction(r) {
        warnings.push(format!(
            "r = {p}/{q} is rational; the limit statements exclude such points"
        ));
    }
}

fn warn_point(u: Complex64, warnings: &mut Vec<String>) {
    if u.re == 0.0 && u.im != 0.0 {
        warn_rational_r(1.0 + u.im / TAU, warnings);
    }
    warn_edge(u, warnings);
}

fn warn_edge(u: Complex64, warnings: &mut Vec<String>) {
    if u.norm() >= EDGE_FRACTION * U_MAX {
        warnings.push(format!(
            "|u| = {} is close to the validity radius {U_MAX}",
            u.norm()
        ));
    }
}

pub fn run(cmd: &Command, tol: f64) -> Result<Output, Failure> {
    match cmd {
        Command::Geom(pt) => geom(pt.u()),
        Command::Potential(pt) => potential(pt.u()),
        Command::Jones { r: Some(r), n, .. } => jones_real(*r, &n.0),
        Command::Jones { point, r: None, n } => jones(point.u(), &n.0),
        Command::Limit { point, n } => limit(point.u(), &n.0),
        Command::Cone { r, n } => cone(*r, &n.0),
        Command::Fill { p, q } => fill(*p, *q, tol),
        Command::Volcs { p: Some(p), .. } => volcs_p1(*p),
        Command::Volcs {
            p: None,
            u_re,
            u_im,
            lambda_re,
            lambda_im,
            ..
        } => volcs_direct(*u_re, *u_im, *lambda_re, *lambda_im),
        Command::Optimistic { p, range, full } => {
            let ps = if let Some(p) = p {
                vec![*p]
            } else if let Some(range) = range {
                p_range(range)?
            } else {
                debug_assert!(*full);
                (-100..=100).filter(|p: &i64| p.abs() > 4).collect()
            };
            optimistic(&ps, tol)
        }
        Command::Selftest => Ok(run_selftest()),
    }
}

fn geom(u: Complex64) -> Result<Output, Failure> {
    let mut warnings = Vec::new();
    warn_edge(u, &mut warnings);
    let s = holonomy_state(DeformationParam::new(u)?)?;
    let mut t = Table::new(&[
        "u_re", "u_im", "m_re", "m_im", "z_re", "z_im", "w_re", "w_im", "y_re", "y_im", "v_re",
        "v_im",
    ]);
    t.push(row([&c(s.u), &c(s.m), &c(s.z), &c(s.w), &c(s.y), &c(s.v)]));
    Ok(Output::new(t, warnings))
}

fn potential(u: Complex64) -> Result<Output, Failure> {
    let mut warnings = Vec::new();
    warn_edge(u, &mut warnings);
    let param = DeformationParam::new(u)?;
    let h = h_of_u(param)?.value;
    let f = f_of_u(param)?.value;
    let fr = f_rogers(param)?.value;
    let phi = phi_of_u(param)?.value;
    let mut t = Table::new(&[
        "u_re",
        "u_im",
        "H_re",
        "H_im",
        "f_re",
        "f_im",
        "f_rogers_re",
        "f_rogers_im",
        "Phi_re",
        "Phi_im",
    ]);
    t.push(row([&c(u), &c(h), &c(f), &c(fr), &c(phi)]));
    Ok(Output::new(t, warnings))
}

fn jones(u: Complex64, ns: &[usize]) -> Result<Output, Failure> {
    let mut warnings = Vec::new();
    warn_point(u, &mut warnings);
    let rows: Vec<Vec<Cell>> = ns
        .par_iter()
        .map(|&n| {
            let pt = JonesPoint::new(n, u)?;
            let lj = jones_eval(pt)
                .ln()
                .ok_or_else(|| Error::DomainError(format!("J_{n} vanishes at u = {u}")))?;
            let pred = saddle_prediction(pt)?
                .ln()
                .ok_or_else(|| Error::DomainError("saddle prediction vanishes".into()))?;
            Ok(row([&[n.into()], &c(lj), &c(pred)]))
        })
        .collect::<Result<_, Error>>()?;
    let mut t = Table::new(&["N", "logJ_re", "logJ_im", "saddle_re", "saddle_im"]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(Output::new(t, warnings))
}

fn jones_real(r: f64, ns: &[usize]) -> Result<Output, Failure> {
    let mut warnings = Vec::new();
    warn_rational_r(r, &mut warnings);
    let rows = ns
        .par_iter()
        .map(|&n| jones_eval_real_r(n, r))
        .collect::<Result<Vec<_>, Error>>()?;
    if rows.iter().any(|j| j.warning.is_some()) {
        warnings.push(format!("r = {r} lies outside (5/6, 7/6)"));
    }
    let mut t = Table::new(&["N", "r", "sign", "log_abs", "phase_count"]);
    for j in rows {
        t.push(vec![
            j.n.into(),
            j.r.into(),
            j.sign.into(),
            j.log_abs.into(),
            j.phase_count.into(),
        ]);
    }
    Ok(Output::new(t, warnings))
}

fn limit(u: Complex64, ns: &[usize]) -> Result<Output, Failure> {
    let mut warnings = Vec::new();
    warn_point(u, &mut warnings);
    let rows = limit_sweep(DeformationParam::new(u)?, ns)?;
    let mut t = Table::new(&["N", "logJ_re", "logJ_im", "est_re", "est_im"]);
    for r in &rows {
        let lj = r.log_j.ln().expect("nonzero rows only");
        t.push(row([&[r.n.into()], &c(lj), &c(r.estimate)]));
    }
    if rows.len() >= 4 {
        let fit = extrapolate(&rows)?;
        t.comment("extrapolated", c(fit.limit).to_vec());
    } else {
        warnings.push("fewer than 4 N values; no extrapolation".into());
    }
    Ok(Output::new(t, warnings))
}

fn cone(r: f64, ns: &[usize]) -> Result<Output, Failure> {
    let mut warnings = Vec::new();
    warn_rational_r(r, &mut warnings);
    let alpha = cone_alpha(r)?;
    let vol = cone_volume(r)?;
    let rows = real_r_sweep(r, ns)?;
    let mut t = Table::new(&["N", "sign", "log_abs", "phase_count", "est_re", "est_im"]);
    for j in &rows {
        let scale = TAU * r / j.n as f64;
        t.push(vec![
            j.n.into(),
            j.sign.into(),
            j.log_abs.into(),
            j.phase_count.into(),
            (scale * j.log_abs).into(),
            (scale * PI * j.phase_count as f64).into(),
        ]);
    }
    if rows.len() >= 4 {
        let lim = real_r_limit(r, ns)?;
        t.comment(
            "extrapolated",
            vec![lim.volume().into(), lim.im_part().into()],
        );
    } else {
        warnings.push("fewer than 4 N values; no extrapolation".into());
    }
    t.comment("alpha", vec![alpha.into()]);
    t.comment(
        "predicted",
        vec![vol.into(), (-2.0 * PI * PI * (r - 1.0)).into()],
    );
    Ok(Output::new(t, warnings))
}

fn fill(p: f64, q: f64, tol: f64) -> Result<Output, Failure> {
    let slope = FillingSlope::new(p, q)?;
    let (u, v) = solve_filling(slope)?;
    let residual = (p * u + q * v - TAU * I).norm();
    if residual > tol {
        return Err(Error::NonHyperbolicOrOutOfRange {
            p,
            q,
            reason: format!("residual {residual:e} exceeds --tol {tol:e}"),
        }
        .into());
    }
    let mut warnings = Vec::new();
    warn_edge(u, &mut warnings);
    let mut t = Table::new(&["p", "q", "u_re", "u_im", "v_re", "v_im", "residual"]);
    t.push(row([
        &[p.into(), q.into()],
        &c(u),
        &c(v),
        &[residual.into()],
    ]));
    Ok(Output::new(t, warnings))
}

fn volcs_p1(p: i64) -> Result<Output, Failure> {
    let r = vol_cs_p1(p)?;
    let (u, lambda, vol, cs) = (r.u, r.lambda, r.vol, r.cs);
    let mut warnings = Vec::new();
    warn_edge(u, &mut warnings);
    let mut t = Table::new(&["p", "u_re", "u_im", "lambda_re", "lambda_im", "vol", "cs"]);
    t.push(row([
        &[p.into()],
        &c(u),
        &c(lambda),
        &[vol.into(), cs.into()],
    ]));
    Ok(Output::new(t, warnings))
}

fn volcs_direct(
    u_re: Option<f64>,
    u_im: Option<f64>,
    lambda_re: Option<f64>,
    lambda_im: Option<f64>,
) -> Result<Output, Failure> {
    if lambda_re.is_none() && lambda_im.is_none() {
        return Err(Failure::Usage(
            "volcs needs either --p or --lambda-re/--lambda-im with --u-re/--u-im".into(),
        ));
    }
    let u = Complex64::new(u_re.unwrap_or(0.0), u_im.unwrap_or(0.0));
    let lambda = Complex64::new(lambda_re.unwrap_or(0.0), lambda_im.unwrap_or(0.0));
    let mut warnings = Vec::new();
    warn_edge(u, &mut warnings);
    let (vol, cs) = vol_cs(DeformationParam::new(u)?, lambda)?;
    let mut t = Table::new(&["u_re", "u_im", "lambda_re", "lambda_im", "vol", "cs"]);
    t.push(row([&c(u), &c(lambda), &[vol.into(), cs.into()]]));
    Ok(Output::new(t, warnings))
}

fn p_range(s: &str) -> Result<Vec<i64>, Failure> {
    let bad = || Failure::Usage(format!("--range `{s}` must look like a:b with a <= b"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    let ps: Vec<i64> = (a..=b).filter(|p| p.abs() > 4).collect();
    if ps.is_empty() {
        return Err(Failure::Usage(format!(
            "--range `{s}` holds only exceptional p"
        )));
    }
    Ok(ps)
}

fn optimistic(ps: &[i64], tol: f64) -> Result<Output, Failure> {
    let rows: Vec<Vec<Cell>> = ps
        .par_iter()
        .map(|&p| {
            let cp = critical_point(p)?;
            if cp.grad_norm > tol {
                return Err(Error::CriticalPointNotFound {
                    p,
                    reason: format!("gradient {:e} exceeds --tol {tol:e}", cp.grad_norm),
                });
            }
            let obs = observation_at(p, cp.xi0, cp.eta0)?;
            Ok(row([
                &[p.into()],
                &c(cp.xi0),
                &c(cp.eta0),
                &[cp.grad_norm.into()],
                &c(obs.lhs),
                &c(obs.rhs),
                &[i64::from(obs.agree_digits).into()],
            ]))
        })
        .collect::<Result<_, Error>>()?;
    let mut t = Table::new(&[
        "p",
        "xi0_re",
        "xi0_im",
        "eta0_re",
        "eta0_im",
        "grad_norm",
        "lhs_re",
        "lhs_im",
        "rhs_re",
        "rhs_im",
        "agree_digits",
    ]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(Output::new(t, Vec::new()))
}

fn run_selftest() -> Output {
    let outcomes = selftest::run_all();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let mut t = Table::new(&["suite", "status", "detail"]);
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        t.push(vec![o.name.into(), status.into(), o.detail.clone().into()]);
    }
    t.comment("passed", vec![passed.into(), outcomes.len().into()]);
    Output {
        table: t,
        warnings: Vec::new(),
        exit_code: if passed == outcomes.len() { 0 } else { 3 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions() {
        assert_eq!(small_fraction(0.93), Some((93, 100)));
        assert_eq!(small_fraction(1.5), Some((3, 2)));
        assert_eq!(small_fraction(1.0 + 0.5 / TAU), None);
        assert_eq!(small_fraction(2f64.sqrt()), None);
    }

    #[test]
    fn ranges() {
        assert_eq!(p_range("3:6").unwrap(), vec![5, 6]);
        assert_eq!(p_range("-6:-5").unwrap(), vec![-6, -5]);
        assert!(p_range("-4:4").is_err());
        assert!(p_range("6:5").is_err());
    }
}
