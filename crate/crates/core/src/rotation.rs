//! Rotation-number arithmetic: continued fractions via the Gauss map,
//! convergents, bounded-type prefixes, Brjuno partial sums, and the
//! multiplier e^{2 pi i theta}.
//!
//! Quotient extraction is exponentially ill-conditioned, so the Gauss map
//! runs in MPFR at the requested precision; quadratic irrationals can be
//! constructed exactly from (p, q, d, den) to avoid decimal input error.

use crate::mp::{self, MpComplex};
use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use rug::Float;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RotationError {
    #[error("input must lie strictly between 0 and 1, got {0}")]
    OutOfRange(f64),
    #[error("depth must be at least 1")]
    BadDepth,
    #[error("expansion terminated (rational input) before depth {requested}; {available} quotients available")]
    RationalInput { requested: usize, available: usize },
}

/// Threshold below which a Gauss-map remainder is declared zero.
const RATIONAL_EPS_LOG10: i32 = -30;

/// Exact descriptor theta = (p + q*sqrt(d)) / den.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadraticIrrational {
    pub p: i64,
    pub q: i64,
    pub d: u64,
    pub den: i64,
}

/// A rotation number in (0,1) together with its continued-fraction data.
#[derive(Debug, Clone)]
pub struct RotationNumber {
    theta: Float,
    quotients: Vec<u64>,
    terminated: bool,
    exact: Option<QuadraticIrrational>,
}

impl RotationNumber {
    /// Continued-fraction expansion of x by the Gauss map, at
    /// `precision_digits` significant digits.
    pub fn from_real(x: f64, depth: usize, precision_digits: u32) -> Result<Self, RotationError> {
        if !(x > 0.0 && x < 1.0) {
            return Err(RotationError::OutOfRange(x));
        }
        if depth == 0 {
            return Err(RotationError::BadDepth);
        }
        let prec = mp::digits_to_bits(precision_digits);
        let theta = Float::with_val(prec, x);
        Ok(Self::expand(theta, depth, None))
    }

    /// Exact quadratic irrational (p + q*sqrt(d)) / den in (0,1).
    pub fn from_quadratic(
        desc: QuadraticIrrational,
        depth: usize,
        precision_digits: u32,
    ) -> Result<Self, RotationError> {
        if depth == 0 {
            return Err(RotationError::BadDepth);
        }
        let prec = mp::digits_to_bits(precision_digits);
        let theta = mp::quadratic_value(desc.p, desc.q, desc.d, desc.den, prec);
        let x = theta.to_f64();
        if !(x > 0.0 && x < 1.0) {
            return Err(RotationError::OutOfRange(x));
        }
        Ok(Self::expand(theta, depth, Some(desc)))
    }

    /// The golden mean (sqrt(5) - 1) / 2: all partial quotients 1.
    pub fn golden(depth: usize, precision_digits: u32) -> Self {
        Self::from_quadratic(
            QuadraticIrrational { p: -1, q: 1, d: 5, den: 2 },
            depth,
            precision_digits,
        )
        .expect("golden mean is in (0,1)")
    }

    /// sqrt(2) - 1: all partial quotients 2.
    pub fn sqrt2_minus_1(depth: usize, precision_digits: u32) -> Self {
        Self::from_quadratic(
            QuadraticIrrational { p: -1, q: 1, d: 2, den: 1 },
            depth,
            precision_digits,
        )
        .expect("sqrt(2)-1 is in (0,1)")
    }

    fn expand(theta: Float, depth: usize, exact: Option<QuadraticIrrational>) -> Self {
        let prec = theta.prec();
        let eps = Float::with_val(prec, Float::parse(format!("1e{RATIONAL_EPS_LOG10}")).unwrap());
        let mut quotients = Vec::with_capacity(depth);
        let mut x = theta.clone();
        let mut terminated = false;
        for _ in 0..depth {
            if x < eps {
                terminated = true;
                break;
            }
            let inv = Float::with_val(prec, x.recip_ref());
            let a = inv.clone().floor();
            quotients.push(a.to_f64() as u64);
            x = inv - a;
        }
        Self {
            theta,
            quotients,
            terminated,
            exact,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta.to_f64()
    }

    /// The rotation number at full working precision.
    pub fn theta_hp(&self) -> &Float {
        &self.theta
    }

    pub fn quotients(&self) -> &[u64] {
        &self.quotients
    }

    pub fn depth(&self) -> usize {
        self.quotients.len()
    }

    /// True when the Gauss map hit (numerically) zero: rational input.
    pub fn is_rational(&self) -> bool {
        self.terminated
    }

    pub fn exact_descriptor(&self) -> Option<QuadraticIrrational> {
        self.exact
    }

    /// Convergents p_k/q_k by the standard recurrence; q strictly increasing,
    /// gcd(p_k, q_k) = 1 automatically.
    pub fn convergents(&self) -> Vec<(BigUint, BigUint)> {
        let mut out = Vec::with_capacity(self.quotients.len());
        let mut p_prev = BigUint::one(); // p_{-1}... for [0; a1, a2, ...]: p_0 = 0, p_{-1} = 1
        let mut p = BigUint::zero();
        let mut q_prev = BigUint::zero();
        let mut q = BigUint::one();
        for &a in &self.quotients {
            let a = BigUint::from(a);
            let p_next = &a * &p + &p_prev;
            let q_next = &a * &q + &q_prev;
            p_prev = p;
            q_prev = q;
            p = p_next;
            q = q_next;
            out.push((p.clone(), q.clone()));
        }
        out
    }

    /// Largest partial quotient seen over the computed depth. Only a prefix
    /// certificate: it cannot prove the full expansion unbounded.
    pub fn bounded_type_prefix(&self) -> BoundedTypePrefix {
        BoundedTypePrefix {
            max_quotient: self.quotients.iter().copied().max().unwrap_or(0),
            depth: self.quotients.len(),
        }
    }

    /// Partial Brjuno sum  sum_{k=0}^{n-1} beta_{k-1} log(1/theta_k)
    /// with beta_{-1} = 1, beta_k = prod_{j<=k} theta_j (Yoccoz normalization).
    pub fn brjuno_partial(&self, n: usize) -> Result<BrjunoPartial, RotationError> {
        if self.terminated && n > self.quotients.len() {
            return Err(RotationError::RationalInput {
                requested: n,
                available: self.quotients.len(),
            });
        }
        let prec = self.theta.prec();
        let mut sum = Float::with_val(prec, 0);
        let mut beta = Float::with_val(prec, 1); // beta_{k-1}
        let mut x = self.theta.clone(); // theta_k
        for _ in 0..n {
            let log_term = Float::with_val(prec, x.clone().recip().ln());
            sum += Float::with_val(prec, &beta * &log_term);
            beta *= &x;
            // Gauss step
            let inv = Float::with_val(prec, x.recip_ref());
            let a = inv.clone().floor();
            x = inv - a;
        }
        Ok(BrjunoPartial {
            n,
            value: sum.to_f64(),
            beta_tail: beta.to_f64(),
        })
    }

    /// The multiplier e^{2 pi i theta} on the unit circle.
    pub fn multiplier(&self) -> Complex64 {
        self.multiplier_hp().to_c64()
    }

    /// Multiplier at full working precision (for the Schröder recurrence).
    pub fn multiplier_hp(&self) -> MpComplex {
        mp::unit_circle_point(&self.theta)
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundedTypePrefix {
    pub max_quotient: u64,
    pub depth: usize,
}

impl BoundedTypePrefix {
    pub fn is_bounded_by(&self, bound: u64) -> bool {
        self.max_quotient <= bound
    }
}

/// Partial Brjuno sum with the beta product kept for tail bookkeeping.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BrjunoPartial {
    pub n: usize,
    pub value: f64,
    pub beta_tail: f64,
}

/// Convergent pair as f64 ratio, for diagnostics.
pub fn convergent_f64(pq: &(BigUint, BigUint)) -> f64 {
    pq.0.to_f64().unwrap_or(f64::NAN) / pq.1.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_is_all_ones() {
        let rn = RotationNumber::golden(30, 50);
        assert_eq!(rn.quotients().len(), 30);
        assert!(rn.quotients().iter().all(|&a| a == 1));
        assert!(!rn.is_rational());
    }

    #[test]
    fn sqrt2m1_is_all_twos() {
        let rn = RotationNumber::sqrt2_minus_1(20, 50);
        assert!(rn.quotients().iter().all(|&a| a == 2));
    }

    #[test]
    fn quarter_is_rational() {
        let rn = RotationNumber::from_real(0.25, 10, 50).unwrap();
        assert_eq!(rn.quotients(), &[4]);
        assert!(rn.is_rational());
    }

    #[test]
    fn e_minus_2_quotients() {
        // e - 2 = [0; 1, 2, 1, 1, 4, 1, 1, 6, ...]
        let x = std::f64::consts::E - 2.0;
        let rn = RotationNumber::from_real(x, 12, 50).unwrap();
        assert_eq!(&rn.quotients()[..8], &[1, 2, 1, 1, 4, 1, 1, 6]);
        assert!(rn.bounded_type_prefix().max_quotient >= 6);
    }

    #[test]
    fn golden_convergents_are_fibonacci() {
        let rn = RotationNumber::golden(8, 50);
        let cs = rn.convergents();
        let expect: [(u64, u64); 5] = [(1, 1), (1, 2), (2, 3), (3, 5), (5, 8)];
        for (got, want) in cs.iter().zip(expect) {
            assert_eq!(got.0, BigUint::from(want.0));
            assert_eq!(got.1, BigUint::from(want.1));
        }
    }

    #[test]
    fn all_twos_convergents() {
        let rn = RotationNumber::sqrt2_minus_1(3, 50);
        let cs = rn.convergents();
        let expect: [(u64, u64); 3] = [(1, 2), (2, 5), (5, 12)];
        for (got, want) in cs.iter().zip(expect) {
            assert_eq!(got.0, BigUint::from(want.0));
            assert_eq!(got.1, BigUint::from(want.1));
        }
    }

    #[test]
    fn single_quotient_convergent() {
        let rn = RotationNumber::from_real(0.25, 5, 50).unwrap();
        let cs = rn.convergents();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].0, BigUint::from(1u32));
        assert_eq!(cs[0].1, BigUint::from(4u32));
    }

    #[test]
    fn convergent_quality_and_alternation() {
        let rn = RotationNumber::golden(25, 50);
        let theta = rn.theta();
        let cs = rn.convergents();
        let mut prev_sign = 0.0;
        for (i, pq) in cs.iter().enumerate() {
            let q = pq.1.to_f64().unwrap();
            let err = theta - convergent_f64(pq);
            assert!(err.abs() < 1.0 / (q * q), "depth {i}");
            if prev_sign != 0.0 {
                assert!(err.signum() != prev_sign, "alternation at depth {i}");
            }
            prev_sign = err.signum();
        }
        // |theta - p_k/q_k| < 1/(q_k q_{k+1})
        for w in cs.windows(2) {
            let q0 = w[0].1.to_f64().unwrap();
            let q1 = w[1].1.to_f64().unwrap();
            let err = (theta - convergent_f64(&w[0])).abs();
            assert!(err < 1.0 / (q0 * q1));
        }
    }

    #[test]
    fn brjuno_first_term_golden() {
        let rn = RotationNumber::golden(40, 50);
        let b1 = rn.brjuno_partial(1).unwrap();
        let expected = ((5.0_f64.sqrt() + 1.0) / 2.0).ln();
        assert!((b1.value - expected).abs() < 1e-12);
    }

    #[test]
    fn brjuno_partials_increase_and_converge() {
        let rn = RotationNumber::golden(60, 50);
        let mut prev = 0.0;
        let mut prev_tail = 1.0;
        let mut increments = Vec::new();
        for n in 1..=20 {
            let b = rn.brjuno_partial(n).unwrap();
            assert!(b.value > prev, "partials nondecreasing");
            assert!(b.beta_tail > 0.0 && b.beta_tail < prev_tail);
            increments.push(b.value - prev);
            prev = b.value;
            prev_tail = b.beta_tail;
        }
        // golden mean: theta_k constant, increments shrink geometrically
        for w in increments.windows(2) {
            assert!(w[1] < w[0]);
        }
        // Cauchy tail: increments scale with beta ~ theta^n
        let b40 = rn.brjuno_partial(40).unwrap();
        let b30 = rn.brjuno_partial(30).unwrap();
        assert!(b40.value - b30.value < 1e-5);
    }

    #[test]
    fn brjuno_rejects_terminated() {
        let rn = RotationNumber::from_real(0.25, 10, 50).unwrap();
        assert!(matches!(
            rn.brjuno_partial(5),
            Err(RotationError::RationalInput { .. })
        ));
    }

    #[test]
    fn multiplier_values() {
        let rn = RotationNumber::from_real(0.25, 1, 50).unwrap();
        let m = rn.multiplier();
        assert!((m - Complex64::new(0.0, 1.0)).norm() < 1e-15);

        let rn = RotationNumber::golden(40, 50);
        let m = rn.multiplier();
        assert!((m.norm() - 1.0).abs() < 1e-15);
        assert!((m - Complex64::new(-0.737_368_878_078_321, -0.675_490_294_261_524)).norm() < 1e-12);

        let rn = RotationNumber::from_real(1e-9, 1, 50).unwrap();
        assert!((rn.multiplier() - Complex64::new(1.0, 0.0)).norm() < 1e-7);
    }

    #[test]
    fn multiplier_conjugate_symmetry() {
        for theta in [0.618033988749895, 0.4142135623, 0.3333, 0.123456789] {
            let a = RotationNumber::from_real(theta, 5, 50).unwrap().multiplier();
            let b = RotationNumber::from_real(1.0 - theta, 5, 50).unwrap().multiplier();
            assert!((a * b - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn gauss_reconstruction() {
        // evaluating [0; a1..an] back reproduces theta to 1/q_n^2
        let rn = RotationNumber::from_real(0.37651928374, 12, 50).unwrap();
        let mut v = 0.0_f64;
        for &a in rn.quotients().iter().rev() {
            v = 1.0 / (a as f64 + v);
        }
        let q = rn.convergents().last().unwrap().1.to_f64().unwrap();
        assert!((v - rn.theta()).abs() < 1.0 / (q * q));
    }
}
