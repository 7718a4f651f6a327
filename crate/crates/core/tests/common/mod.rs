//! Reference implementations used as oracles. None of them share code with
//! the library.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// `ζ(s)` for integer `s >= 2` by direct summation with an Euler–Maclaurin tail.
fn zeta(s: i32) -> f64 {
    let n = 2000.0_f64;
    let head: f64 = (1..2000).map(|k| (k as f64).powi(-s)).sum();
    let sf = s as f64;
    head + n.powf(1.0 - sf) / (sf - 1.0) + 0.5 * n.powi(-s) + sf / 12.0 * n.powf(-sf - 1.0)
}

/// Clausen function `Cl₂(θ)` for `0 < θ < 2π` from
/// `Cl₂(θ) = θ - θ log θ + Σ_{k>=1} 2ζ(2k) θ^{2k+1} / (2k(2k+1)(2π)^{2k})`.
pub fn clausen(theta: f64) -> f64 {
    assert!(theta > 0.0 && theta < 2.0 * PI);
    let mut acc = theta - theta * theta.ln();
    let x = theta / (2.0 * PI);
    let mut pow = theta;
    for k in 1..200 {
        pow *= x * x;
        let kk = 2.0 * k as f64;
        let term = 2.0 * zeta(2 * k) * pow / (kk * (kk + 1.0));
        acc += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    acc
}

/// `Л(θ) = Cl₂(2θ)/2` for `0 < θ < π`, using `Л(θ) = -Л(π - θ)` above π/2.
pub fn lobachevsky_oracle(theta: f64) -> f64 {
    if theta > 0.5 * PI {
        -0.5 * clausen(2.0 * (PI - theta))
    } else {
        0.5 * clausen(2.0 * theta)
    }
}

/// `6Л(π/3)` from the Clausen series.
pub fn volume_oracle() -> f64 {
    6.0 * lobachevsky_oracle(PI / 3.0)
}

/// Maclaurin series `Σ zⁿ/n²` for `|z| < 1`.
pub fn li2_series(z: Complex64, terms: usize) -> Complex64 {
    let mut pow = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..=terms {
        pow *= z;
        acc += pow / (n * n) as f64;
    }
    acc
}

/// Direct evaluation of the Habiro sum with explicit powers of `t`.
pub fn jones_direct(n: usize, u: Complex64) -> Complex64 {
    let t = ((u + 2.0 * PI * I) / n as f64).exp();
    let tn = t.powi(n as i32);
    let mut total = Complex64::new(0.0, 0.0);
    for m in 0..n {
        let mut term = Complex64::new(1.0, 0.0);
        for k in 1..=m {
            let a = t.powi(-(n as i32) - k as i32);
            let b = t.powi(-(n as i32) + k as i32);
            term = term * tn * (1.0 - a) * (1.0 - b);
        }
        total += term;
    }
    total
}

/// `J_N(q_r)` for real `r` from the unsimplified complex factors.
pub fn jones_real_direct(n: usize, r: f64) -> f64 {
    jones_direct(n, 2.0 * PI * I * (r - 1.0)).re
}
