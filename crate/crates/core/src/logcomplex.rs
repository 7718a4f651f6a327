//! Complex numbers stored as `(ln|z|, arg z)`.
//!
//! The phase is not reduced modulo 2π: products add phases, and a sum takes
//! the phase of its larger operand plus the principal argument of the
//! correction factor. This keeps a continuous branch of `log` across long
//! products whose magnitudes would overflow `f64`.

use std::fmt;
use std::ops::{Add, Mul};

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex {
    log_mag: f64,
    phase: f64,
    zero: bool,
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        log_mag: f64::NEG_INFINITY,
        phase: 0.0,
        zero: true,
    };

    pub const ONE: LogComplex = LogComplex {
        log_mag: 0.0,
        phase: 0.0,
        zero: false,
    };

    pub fn new(log_mag: f64, phase: f64) -> Self {
        debug_assert!(log_mag.is_finite() && phase.is_finite());
        Self {
            log_mag,
            phase,
            zero: false,
        }
    }

    /// `exp(l)` for a complex logarithm `l`.
    pub fn from_log(l: Complex64) -> Self {
        Self::new(l.re, l.im)
    }

    /// Principal representation of a plain complex number.
    pub fn from_complex(z: Complex64) -> Self {
        if z.norm_sqr() == 0.0 {
            Self::ZERO
        } else {
            Self::new(z.norm().ln(), z.arg())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn log_mag(&self) -> f64 {
        self.log_mag
    }

    /// Continuous phase.
    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Phase reduced into `(-π, π]`.
    pub fn principal_phase(&self) -> f64 {
        let two_pi = std::f64::consts::TAU;
        let mut p = self.phase - two_pi * (self.phase / two_pi).round();
        if p <= -std::f64::consts::PI {
            p += two_pi;
        }
        p
    }

    /// Same value with the phase moved by a multiple of 2π to lie within π
    /// of `reference`.
    pub fn with_phase_near(self, reference: f64) -> Self {
        if self.zero {
            return self;
        }
        let two_pi = std::f64::consts::TAU;
        let k = ((reference - self.phase) / two_pi).round();
        Self::new(self.log_mag, self.phase + two_pi * k)
    }

    /// `log_mag + i·phase`; `None` for zero.
    pub fn ln(&self) -> Option<Complex64> {
        (!self.zero).then(|| Complex64::new(self.log_mag, self.phase))
    }

    /// Back to a plain complex number; overflows to infinity for large magnitudes.
    pub fn to_complex(&self) -> Complex64 {
        if self.zero {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar(self.log_mag.exp(), self.phase)
        }
    }
}

impl Default for LogComplex {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;

    fn mul(self, rhs: LogComplex) -> LogComplex {
        if self.zero || rhs.zero {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.log_mag + rhs.log_mag, self.phase + rhs.phase)
    }
}

impl Add for LogComplex {
    type Output = LogComplex;

    fn add(self, rhs: LogComplex) -> LogComplex {
        if self.zero {
            return rhs;
        }
        if rhs.zero {
            return self;
        }
        let (big, small) = if self.log_mag >= rhs.log_mag {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let ratio = Complex64::new(small.log_mag - big.log_mag, small.phase - big.phase).exp();
        let factor = Complex64::new(1.0, 0.0) + ratio;
        if factor.norm_sqr() == 0.0 {
            return LogComplex::ZERO;
        }
        LogComplex::new(big.log_mag + factor.norm().ln(), big.phase + factor.arg())
    }
}

impl fmt::Display for LogComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            write!(f, "0")
        } else {
            write!(f, "exp({} + {}i)", self.log_mag, self.phase)
        }
    }
}
