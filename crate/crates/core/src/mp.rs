//! Minimal multiprecision complex arithmetic on top of MPFR floats.
//!
//! The Schröder recurrence and the Gauss map need well beyond double
//! precision (small denominators, exponentially ill-conditioned quotient
//! extraction), but only a handful of operations: ring arithmetic,
//! division, abs, and the trigonometric pieces of `tan` on complex
//! arguments. We keep a small dedicated type instead of pulling in MPC.

use num_complex::Complex64;
use rug::float::Round;
use rug::ops::Pow;
use rug::Float;

/// Convert a decimal-digit precision request into MPFR bits with guard.
pub fn digits_to_bits(digits: u32) -> u32 {
    // log2(10) ~ 3.3219
    (digits as f64 * 3.3219716).ceil() as u32 + 16
}

/// Complex number with both parts at the same MPFR precision.
#[derive(Clone, Debug)]
pub struct MpComplex {
    pub re: Float,
    pub im: Float,
}

impl MpComplex {
    pub fn new(re: Float, im: Float) -> Self {
        Self { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self {
            re: Float::with_val(prec, 0),
            im: Float::with_val(prec, 0),
        }
    }

    pub fn one(prec: u32) -> Self {
        Self {
            re: Float::with_val(prec, 1),
            im: Float::with_val(prec, 0),
        }
    }

    pub fn from_f64(prec: u32, z: Complex64) -> Self {
        Self {
            re: Float::with_val(prec, z.re),
            im: Float::with_val(prec, z.im),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let prec = re.prec();
        Self {
            im: Float::with_val(prec, 0),
            re,
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self {
            re: Float::with_val(self.prec(), &self.re + &rhs.re),
            im: Float::with_val(self.prec(), &self.im + &rhs.im),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self {
            re: Float::with_val(self.prec(), &self.re - &rhs.re),
            im: Float::with_val(self.prec(), &self.im - &rhs.im),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            re: Float::with_val(self.prec(), -&self.re),
            im: Float::with_val(self.prec(), -&self.im),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let prec = self.prec();
        let re = Float::with_val(prec, &self.re * &rhs.re) - Float::with_val(prec, &self.im * &rhs.im);
        let im = Float::with_val(prec, &self.re * &rhs.im) + Float::with_val(prec, &self.im * &rhs.re);
        Self {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn mul_real(&self, rhs: &Float) -> Self {
        Self {
            re: Float::with_val(self.prec(), &self.re * rhs),
            im: Float::with_val(self.prec(), &self.im * rhs),
        }
    }

    pub fn mul_i64(&self, rhs: i64) -> Self {
        Self {
            re: Float::with_val(self.prec(), &self.re * rhs),
            im: Float::with_val(self.prec(), &self.im * rhs),
        }
    }

    pub fn div(&self, rhs: &Self) -> Self {
        let prec = self.prec();
        let den = rhs.norm_sqr();
        let num = self.mul(&rhs.conj());
        Self {
            re: Float::with_val(prec, &num.re / &den),
            im: Float::with_val(prec, &num.im / &den),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: Float::with_val(self.prec(), -&self.im),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let prec = self.prec();
        Float::with_val(prec, self.re.clone().square() + self.im.clone().square())
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }

    /// Natural log of |self|, staying in MPFR so huge moduli do not overflow.
    pub fn ln_abs(&self) -> Float {
        let prec = self.prec();
        Float::with_val(prec, self.norm_sqr().ln() / 2)
    }

    /// exp(self) = e^re (cos im + i sin im).
    pub fn exp(&self) -> Self {
        let prec = self.prec();
        let m = self.re.clone().exp();
        let (sin, cos) = self.im.clone().sin_cos(Float::with_val(prec, 0));
        Self {
            re: Float::with_val(prec, &m * &cos),
            im: Float::with_val(prec, &m * &sin),
        }
    }

    /// tan(x+iy) = (sin 2x + i sinh 2y) / (cos 2x + cosh 2y).
    pub fn tan(&self) -> Self {
        let prec = self.prec();
        let two_x = Float::with_val(prec, &self.re * 2u32);
        let two_y = Float::with_val(prec, &self.im * 2u32);
        let (sin, cos) = two_x.sin_cos(Float::with_val(prec, 0));
        let sinh = two_y.clone().sinh();
        let cosh = two_y.cosh();
        let den = Float::with_val(prec, &cos + &cosh);
        Self {
            re: Float::with_val(prec, &sin / &den),
            im: Float::with_val(prec, &sinh / &den),
        }
    }
}

/// pi at the given precision.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, rug::float::Constant::Pi)
}

/// e^{2 pi i theta} at the precision of `theta`.
pub fn unit_circle_point(theta: &Float) -> MpComplex {
    let prec = theta.prec();
    let angle = Float::with_val(prec, 2 * pi(prec) * theta);
    let (sin, cos) = angle.sin_cos(Float::with_val(prec, 0));
    MpComplex { re: cos, im: sin }
}

/// (p + q*sqrt(d)) / den at the given precision.
pub fn quadratic_value(p: i64, q: i64, d: u64, den: i64, prec: u32) -> Float {
    let sqrt_d = Float::with_val(prec, d).sqrt();
    Float::with_val(prec, (p + Float::with_val(prec, q * sqrt_d)) / den)
}

/// Round a Float toward nearest f64 without double rounding surprises.
pub fn to_f64(x: &Float) -> f64 {
    x.to_f64_round(Round::Nearest)
}

/// x^n for small integer n, at x's precision.
pub fn pow_u32(x: &Float, n: u32) -> Float {
    Float::with_val(x.prec(), x.clone().pow(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_field_ops() {
        let prec = 200;
        let a = MpComplex::from_f64(prec, Complex64::new(1.5, -0.25));
        let b = MpComplex::from_f64(prec, Complex64::new(-0.75, 2.0));
        let prod = a.mul(&b);
        let back = prod.div(&b);
        assert!((back.to_c64() - a.to_c64()).norm() < 1e-50);
    }

    #[test]
    fn tan_matches_f64() {
        let prec = 200;
        let z = Complex64::new(0.3, 0.7);
        let t = MpComplex::from_f64(prec, z).tan().to_c64();
        assert!((t - z.tan()).norm() < 1e-13);
    }

    #[test]
    fn unit_circle_modulus() {
        let theta = Float::with_val(200, 0.61803398874989);
        let lam = unit_circle_point(&theta);
        let m = lam.abs();
        assert!((m - 1u32).abs() < 1e-50);
    }
}
