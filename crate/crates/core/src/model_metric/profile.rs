use crate::error::{Error, Result};

/// Revolution profile `f(r) = r^p` of a cusp cone factor.
///
/// The Gauss curvature of `dr^2 + r^(2p) dtheta^2` is `-p(p-1)/r^2`, negative
/// everywhere and unbounded near the wall `r = 0`, and the circumference of
/// the `theta`-circle collapses like `r^p`. Exponent `p >= 2` keeps the cone
/// nonpositively curved after completion; the default is cubic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CuspProfile {
    p: f64,
}

impl Default for CuspProfile {
    fn default() -> Self {
        Self { p: 3.0 }
    }
}

impl CuspProfile {
    pub fn new(p: f64) -> Result<Self> {
        if !(p >= 2.0 && p.is_finite()) {
            return Err(Error::ConstraintViolated(format!(
                "profile exponent must be finite and >= 2, got {p}"
            )));
        }
        Ok(Self { p })
    }

    pub fn exponent(self) -> f64 {
        self.p
    }

    /// Circumferential radius `f(r) = r^p`.
    pub fn f(self, r: f64) -> f64 {
        r.powf(self.p)
    }

    /// Inverse of `f` on `r >= 0`.
    pub fn f_inv(self, v: f64) -> f64 {
        v.powf(1.0 / self.p)
    }

    pub fn gauss_curvature(self, r: f64) -> f64 {
        -self.p * (self.p - 1.0) / (r * r)
    }
}
