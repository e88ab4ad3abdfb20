//! Scalar helpers shared by training and scoring.

/// Largest `f64` strictly below one.
pub const ONE_MINUS_ULP: f64 = 1.0 - f64::EPSILON / 2.0;

/// Logistic function clamped to the open interval (0, 1).
pub fn logistic(z: f64) -> f64 {
    let p = if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    };
    p.clamp(f64::MIN_POSITIVE, ONE_MINUS_ULP)
}

/// `ln(1 + e^z)` without overflow.
pub fn softplus(z: f64) -> f64 {
    let a = if z > 0.0 { z } else { 0.0 };
    a + libm::log1p(libm::exp(-libm::fabs(z)))
}

/// Unclamped logistic, used inside the gradient so it stays exact for large margins.
pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}
