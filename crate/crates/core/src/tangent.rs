//! The tangent family f(z) = lambda * tan(z): evaluation, covering
//! structure, inverse branches, curve lifting, and half-plane geometry.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TangentError {
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("{0} is an omitted asymptotic value and has no preimage")]
    OmittedValue(Complex64),
    #[error("curve passes within {dist} of the asymptotic value {value} (clearance {clearance})")]
    ClearanceViolation {
        value: Complex64,
        dist: f64,
        clearance: f64,
    },
    #[error("lift refinement stalled near curve parameter {at}")]
    LiftDivergence { at: f64 },
    #[error("base point maps to {got}, curve starts at {want}")]
    BaseMismatch { got: Complex64, want: Complex64 },
    #[error("disk radius must satisfy 0 < r < |lambda|, got {0}")]
    InvalidRadius(f64),
    #[error("Moebius map is degenerate: ad - bc = 0")]
    DegenerateMoebius,
    #[error("polyline needs at least one point, with consecutive points distinct")]
    BadPolyline,
}

/// Result of evaluating the map at a point: finite value, or a pole hit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalResult {
    Finite(Complex64),
    Pole,
}

impl EvalResult {
    pub fn finite(&self) -> Option<Complex64> {
        match self {
            EvalResult::Finite(v) => Some(*v),
            EvalResult::Pole => None,
        }
    }

    pub fn is_pole(&self) -> bool {
        matches!(self, EvalResult::Pole)
    }
}

/// z -> (az + b) / (cz + d), ad - bc != 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

/// A finite complex number or the point at infinity on the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

impl MoebiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self, TangentError> {
        let m = Self { a, b, c, d };
        if m.det().norm() == 0.0 {
            return Err(TangentError::DegenerateMoebius);
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Self {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
        }
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// Evaluation on the sphere, sending the pole -d/c to infinity.
    pub fn apply_ext(&self, z: ExtComplex) -> ExtComplex {
        match z {
            ExtComplex::Infinity => {
                if self.c.norm() == 0.0 {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite(self.a / self.c)
                }
            }
            ExtComplex::Finite(z) => {
                let den = self.c * z + self.d;
                if den.norm() == 0.0 {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    pub fn compose(&self, inner: &MoebiusMap) -> MoebiusMap {
        MoebiusMap {
            a: self.a * inner.a + self.b * inner.c,
            b: self.a * inner.b + self.b * inner.d,
            c: self.c * inner.a + self.d * inner.c,
            d: self.c * inner.b + self.d * inner.d,
        }
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }
}

/// z -> alpha*z + beta, alpha != 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearMap {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl LinearMap {
    pub fn new(alpha: Complex64, beta: Complex64) -> Self {
        assert!(alpha.norm() != 0.0, "linear part must be nonzero");
        Self { alpha, beta }
    }

    pub fn identity() -> Self {
        Self {
            alpha: Complex64::new(1.0, 0.0),
            beta: Complex64::new(0.0, 0.0),
        }
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.alpha * z + self.beta
    }
}

/// Ordered list of points tracing a curve in the plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polyline {
    points: Vec<Complex64>,
    closed: bool,
}

impl Polyline {
    /// A single point is accepted as the degenerate constant curve.
    pub fn new(points: Vec<Complex64>, closed: bool) -> Result<Self, TangentError> {
        if points.is_empty() {
            return Err(TangentError::BadPolyline);
        }
        for w in points.windows(2) {
            if w[0] == w[1] {
                return Err(TangentError::BadPolyline);
            }
        }
        Ok(Self { points, closed })
    }

    pub fn segment(a: Complex64, b: Complex64, samples: usize) -> Result<Self, TangentError> {
        let n = samples.max(2);
        let pts = (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                a + (b - a) * t
            })
            .collect();
        Self::new(pts, false)
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_segment_length(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| (w[1] - w[0]).norm())
            .fold(0.0, f64::max)
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[i + 1..] {
                d = d.max((p - q).norm());
            }
        }
        d
    }
}

/// Horizontal strip S_R = { |Im z| < R }.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StripSpec {
    pub half_width: f64,
}

impl StripSpec {
    pub fn new(half_width: f64) -> Self {
        assert!(half_width > 0.0);
        Self { half_width }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.im.abs() < self.half_width
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

/// Relative tolerance deciding when a point counts as a pole of tan.
pub const POLE_TOL: f64 = 1e-12;
/// Minimum clearance of a curve from the omitted values, relative to |lambda|.
pub const LIFT_CLEARANCE: f64 = 1e-3;
/// Consecutive lifted points must stay within this gap (branch sheets are pi apart).
pub const LIFT_STEP_BOUND: f64 = PI / 4.0;
const LIFT_MAX_DEPTH: u32 = 48;

/// The map f(z) = lambda * tan(z) for a fixed nonzero parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentMap {
    lambda: Complex64,
}

/// Numerically stable complex tangent: divides through by cosh(2y) so the
/// deep half-planes saturate to +-i instead of overflowing.
pub fn tan_stable(z: Complex64) -> Complex64 {
    let (s, c) = (2.0 * z.re).sin_cos();
    let t = (2.0 * z.im).tanh();
    let ch = (2.0 * z.im).cosh();
    if ch.is_infinite() {
        Complex64::new(0.0, t)
    } else {
        Complex64::new(s / ch, t) / Complex64::new(c / ch + 1.0, 0.0)
    }
}

impl TangentMap {
    pub fn new(lambda: Complex64) -> Result<Self, TangentError> {
        if lambda.norm() == 0.0 {
            return Err(TangentError::ZeroLambda);
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    /// Multiplier of the fixed point at 0.
    pub fn multiplier(&self) -> Complex64 {
        self.lambda
    }

    /// The two asymptotic (and omitted) values, as (i*lambda, -i*lambda).
    pub fn asymptotic_values(&self) -> (Complex64, Complex64) {
        let iv = Complex64::new(0.0, 1.0) * self.lambda;
        (iv, -iv)
    }

    /// Distance from z to the nearest pole pi/2 + k*pi of tan.
    pub fn pole_distance(z: Complex64) -> f64 {
        let k = ((z.re - PI / 2.0) / PI).round();
        let nearest = PI / 2.0 + k * PI;
        ((z.re - nearest).powi(2) + z.im * z.im).sqrt()
    }

    fn near_pole(z: Complex64) -> bool {
        Self::pole_distance(z) < POLE_TOL * z.re.abs().max(1.0)
    }

    pub fn evaluate(&self, z: Complex64) -> EvalResult {
        if Self::near_pole(z) {
            EvalResult::Pole
        } else {
            EvalResult::Finite(self.lambda * tan_stable(z))
        }
    }

    /// f'(z) = lambda * (1 + tan(z)^2); exactly lambda at z = 0.
    pub fn derivative(&self, z: Complex64) -> EvalResult {
        if Self::near_pole(z) {
            EvalResult::Pole
        } else {
            let t = tan_stable(z);
            EvalResult::Finite(self.lambda * (Complex64::new(1.0, 0.0) + t * t))
        }
    }

    /// f = M1 o exp o M2 with M1(z) = -lambda*i (z-1)/(z+1) and M2(z) = 2iz.
    pub fn decompose(&self) -> (MoebiusMap, LinearMap) {
        let i = Complex64::new(0.0, 1.0);
        let m1 = MoebiusMap {
            a: -self.lambda * i,
            b: self.lambda * i,
            c: Complex64::new(1.0, 0.0),
            d: Complex64::new(1.0, 0.0),
        };
        let m2 = LinearMap::new(2.0 * i, Complex64::new(0.0, 0.0));
        (m1, m2)
    }

    /// The k-th preimage branch: arctan(w/lambda) + k*pi (principal arctan).
    pub fn inverse_branch(&self, w: Complex64, k: i32) -> Result<Complex64, TangentError> {
        let (av1, av2) = self.asymptotic_values();
        if w == av1 || w == av2 {
            return Err(TangentError::OmittedValue(w));
        }
        let u = w / self.lambda;
        let z0 = u.atan();
        if !z0.re.is_finite() || !z0.im.is_finite() {
            return Err(TangentError::OmittedValue(w));
        }
        Ok(z0 + Complex64::new(k as f64 * PI, 0.0))
    }

    /// Continuous lift of `curve` through the inverse of f, starting at
    /// `base_preimage`. Branch translates differ by k*pi.
    pub fn lift_curve(&self, curve: &Polyline, base_preimage: Complex64) -> Result<Polyline, TangentError> {
        let clearance = LIFT_CLEARANCE * self.lambda.norm();
        let (av1, av2) = self.asymptotic_values();
        for (idx, &w) in curve.points().iter().enumerate() {
            let d = (w - av1).norm().min((w - av2).norm());
            if d < clearance {
                let value = if (w - av1).norm() < (w - av2).norm() { av1 } else { av2 };
                let _ = idx;
                return Err(TangentError::ClearanceViolation {
                    value,
                    dist: d,
                    clearance,
                });
            }
        }
        let w0 = curve.points()[0];
        match self.evaluate(base_preimage) {
            EvalResult::Finite(v) if (v - w0).norm() <= 1e-8 * (1.0 + w0.norm()) => {}
            EvalResult::Finite(v) => return Err(TangentError::BaseMismatch { got: v, want: w0 }),
            EvalResult::Pole => {
                return Err(TangentError::BaseMismatch {
                    got: Complex64::new(f64::INFINITY, 0.0),
                    want: w0,
                })
            }
        }

        let mut lifted = vec![base_preimage];
        let mut current = base_preimage;
        let n = curve.len();
        if n == 1 {
            return Polyline::new(lifted, curve.is_closed());
        }
        for (i, seg) in curve.points().windows(2).enumerate() {
            let param = i as f64 / (n - 1) as f64;
            current = self.lift_segment(seg[0], seg[1], current, 0, param, &mut lifted)?;
        }
        // Adaptive refinement may have produced duplicate consecutive points
        // at segment joins; drop them.
        lifted.dedup();
        Polyline::new(lifted, curve.is_closed())
    }

    /// Lift one segment, bisecting in the image until each lifted step stays
    /// on a single branch sheet.
    fn lift_segment(
        &self,
        wa: Complex64,
        wb: Complex64,
        za: Complex64,
        depth: u32,
        param: f64,
        out: &mut Vec<Complex64>,
    ) -> Result<Complex64, TangentError> {
        let zb = self.nearest_branch_point(wb, za)?;
        if (zb - za).norm() < LIFT_STEP_BOUND {
            if out.last() != Some(&zb) {
                out.push(zb);
            }
            return Ok(zb);
        }
        if depth >= LIFT_MAX_DEPTH {
            return Err(TangentError::LiftDivergence { at: param });
        }
        let mid = (wa + wb) * 0.5;
        let zm = self.lift_segment(wa, mid, za, depth + 1, param, out)?;
        self.lift_segment(mid, wb, zm, depth + 1, param, out)
    }

    fn nearest_branch_point(&self, w: Complex64, near: Complex64) -> Result<Complex64, TangentError> {
        let z0 = self.inverse_branch(w, 0)?;
        let k0 = ((near.re - z0.re) / PI).round();
        let mut best = z0 + Complex64::new(k0 * PI, 0.0);
        let mut best_d = (best - near).norm();
        for dk in [-1.0, 1.0] {
            let cand = z0 + Complex64::new((k0 + dk) * PI, 0.0);
            let d = (cand - near).norm();
            if d < best_d {
                best = cand;
                best_d = d;
            }
        }
        Ok(best)
    }

    /// Image of the horizontal line {Im z = +-R}: a circle around +-i*lambda.
    /// Closed form: center = +-i*lambda*coth(2R), radius = |lambda|/sinh(2R).
    pub fn line_image_circle(&self, half_height: f64, side: Side) -> (Complex64, f64) {
        assert!(half_height > 0.0);
        let x = 2.0 * half_height;
        let coth = 1.0 / x.tanh();
        let radius = self.lambda.norm() / x.sinh();
        let i = Complex64::new(0.0, 1.0);
        let center = match side {
            Side::Upper => i * self.lambda * coth,
            Side::Lower => -i * self.lambda * coth,
        };
        (center, radius)
    }

    /// Minimal R such that f maps {Im z = R} into the closed disk of radius r
    /// around i*lambda. Containment is monotone in R, solved by bisection.
    pub fn halfplane_radius_for_disk(&self, r: f64) -> Result<StripSpec, TangentError> {
        let mag = self.lambda.norm();
        if !(r > 0.0 && r < mag) {
            return Err(TangentError::InvalidRadius(r));
        }
        // sup-distance of the image circle from i*lambda:
        //   |lambda| * (coth(2R) - 1) + |lambda| / sinh(2R)
        let excess = |rr: f64| {
            let x = 2.0 * rr;
            mag * (1.0 / x.tanh() - 1.0) + mag / x.sinh() - r
        };
        let mut lo = 1e-12;
        let mut hi = 50.0;
        if excess(hi) > 0.0 {
            return Err(TangentError::InvalidRadius(r));
        }
        while hi - lo > 1e-9 {
            let mid = 0.5 * (lo + hi);
            if excess(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(StripSpec::new(hi))
    }
}

/// Singular values of f = M o exp o A: the images of the exp-omitted points,
/// (M(0), M(infinity)). The linear factor does not move them.
pub fn normal_form_singular_values(
    moebius: &MoebiusMap,
    _linear: &LinearMap,
) -> Result<(ExtComplex, ExtComplex), TangentError> {
    if moebius.det().norm() == 0.0 {
        return Err(TangentError::DegenerateMoebius);
    }
    Ok((
        moebius.apply_ext(ExtComplex::Finite(Complex64::new(0.0, 0.0))),
        moebius.apply_ext(ExtComplex::Infinity),
    ))
}
