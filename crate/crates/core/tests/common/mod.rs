//! Shared helpers for integration tests.

use tanlab_core::mp::{self, MpComplex};
use tanlab_core::rotation::RotationNumber;
use tanlab_core::siegel;

/// Linearizer coefficients by a route independent of the production
/// recurrence: solve phi(lambda w) = lambda tan(phi(w)) degree by degree,
/// expanding tan(phi) as an explicit composition of the exact tan series
/// with powers of phi.
pub fn composition_oracle(rn: &RotationNumber, n: usize, digits: u32) -> Vec<MpComplex> {
    let prec = mp::digits_to_bits(digits);
    let theta = match rn.exact_descriptor() {
        Some(d) => mp::quadratic_value(d.p, d.q, d.d, d.den, prec),
        None => rug::Float::with_val(prec, rn.theta_hp()),
    };
    let lam = mp::unit_circle_point(&theta);
    let tan = siegel::tan_series_rational(n);
    let tan_hp: Vec<MpComplex> = tan
        .iter()
        .map(|r| MpComplex::from_real(rug::Float::with_val(prec, r)))
        .collect();

    // phi coefficients, 1-based; c[0] unused
    let mut c = vec![MpComplex::zero(prec); n + 1];
    c[1] = MpComplex::one(prec);
    let mut lam_pow_n = lam.clone(); // lambda^n at step n = 1

    for deg in 2..=n {
        lam_pow_n = lam_pow_n.mul(&lam);
        // tan(phi) contribution at this degree from odd powers k >= 3,
        // which only involve already-known coefficients
        let mut rhs = MpComplex::zero(prec);
        let phi = series_truncate(&c, deg);
        let phi2 = series_mul(&phi, &phi, deg);
        let mut phi_pow = phi.clone(); // phi^k, starting at k = 1
        let mut k = 1usize;
        while k + 2 <= deg {
            phi_pow = series_mul(&phi_pow, &phi2, deg);
            k += 2;
            if !tan_hp[k].is_zero() {
                rhs = rhs.add(&tan_hp[k].mul(&phi_pow[deg]));
            }
        }
        // (lambda^deg - lambda) c_deg = lambda * rhs
        let denom = lam_pow_n.sub(&lam);
        c[deg] = lam.mul(&rhs).div(&denom);
    }
    c.split_off(1)
}

/// Copy of the phi series truncated to `deg`, indices = degrees.
fn series_truncate(c: &[MpComplex], deg: usize) -> Vec<MpComplex> {
    let prec = c[1].prec();
    let mut out = vec![MpComplex::zero(prec); deg + 1];
    for d in 1..=deg.min(c.len() - 1) {
        out[d] = c[d].clone();
    }
    out
}

/// Product of two series, truncated to `deg`.
fn series_mul(a: &[MpComplex], b: &[MpComplex], deg: usize) -> Vec<MpComplex> {
    let prec = a[0].prec();
    let mut out = vec![MpComplex::zero(prec); deg + 1];
    for i in 0..=deg.min(a.len() - 1) {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..=(deg - i).min(b.len() - 1) {
            if b[j].is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&a[i].mul(&b[j]));
        }
    }
    out
}
