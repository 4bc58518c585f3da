//! Scalars of the max-plus semiring and the tolerance policy for comparing
//! quantities derived from float arithmetic.
//!
//! The max-plus semiring is R united with -inf, where addition is `max`
//! (written oplus) and multiplication is `+` (written otimes). The zero
//! element is -inf (neutral for max, absorbing for plus) and the unit is 0.
//! The completed semiring adds +inf with the convention that zero stays
//! absorbing: (-inf) otimes (+inf) = -inf. +inf arises only in closure
//! results of matrices with circuits of positive weight.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// Element of the completed max-plus semiring.
///
/// Wraps a non-NaN f64. `-inf` is the semiring zero, `0.0` the unit. The
/// wrapped value is normalized so `-0.0` never occurs, which makes `==` and
/// `Ord` plain value comparisons.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Trop(f64);

impl Trop {
    /// Semiring zero, -inf.
    pub const ZERO: Trop = Trop(f64::NEG_INFINITY);
    /// Semiring unit, numeric 0.
    pub const ONE: Trop = Trop(0.0);
    /// Top of the completed semiring, +inf.
    pub const TOP: Trop = Trop(f64::INFINITY);

    /// Wraps a float. Panics on NaN; -0.0 is normalized to 0.0.
    pub fn new(v: f64) -> Trop {
        assert!(!v.is_nan(), "NaN is not a max-plus scalar");
        Trop(if v == 0.0 { 0.0 } else { v })
    }

    /// The wrapped float (-inf for zero, +inf for top).
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn is_top(self) -> bool {
        self.0 == f64::INFINITY
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// Max-plus addition: max(a, b). Idempotent, with `ZERO` neutral.
    pub fn oplus(self, rhs: Trop) -> Trop {
        if self.0 >= rhs.0 {
            self
        } else {
            rhs
        }
    }

    /// Max-plus multiplication: a + b, with `ZERO` absorbing even against
    /// `TOP`. The explicit zero check avoids the IEEE (-inf) + (+inf) = NaN.
    pub fn otimes(self, rhs: Trop) -> Trop {
        if self.is_zero() || rhs.is_zero() {
            Trop::ZERO
        } else {
            Trop::new(self.0 + rhs.0)
        }
    }

    /// Multiplicative inverse (negation); defined for finite scalars only.
    pub fn recip(self) -> Trop {
        assert!(self.is_finite(), "only finite scalars are invertible");
        Trop::new(-self.0)
    }
}

impl Eq for Trop {}

impl PartialOrd for Trop {
    fn partial_cmp(&self, other: &Trop) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Trop {
    fn cmp(&self, other: &Trop) -> Ordering {
        // No NaN and no -0.0 by construction, so total order = value order.
        self.0.total_cmp(&other.0)
    }
}

impl From<f64> for Trop {
    fn from(v: f64) -> Trop {
        Trop::new(v)
    }
}

impl fmt::Display for Trop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "-inf")
        } else if self.is_top() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for Trop {
    type Err = std::num::ParseFloatError;

    fn from_str(s: &str) -> Result<Trop, Self::Err> {
        match s {
            "-inf" => return Ok(Trop::ZERO),
            "inf" | "+inf" => return Ok(Trop::TOP),
            _ => {}
        }
        let v: f64 = s.parse()?;
        // std's float parser accepts "NaN"; map it to an error through the
        // same path a garbage token would take.
        if v.is_nan() {
            "nan-rejected".parse::<f64>().map(Trop::new)
        } else {
            Ok(Trop::new(v))
        }
    }
}

/// Comparison policy for scalars produced by float arithmetic.
///
/// Integer-weight inputs stay exact (max and + are exact on representable
/// integers), so `eps = 0` is meaningful there; harmonic-weight inputs need
/// the default slack. Decisions whose margin is within a factor of ten of
/// eps are reported as marginal, since they could flip under a slightly
/// different tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(eps: f64) -> Tolerance {
        assert!(eps >= 0.0 && !eps.is_nan(), "eps must be nonnegative");
        Tolerance { eps }
    }

    /// Equality up to eps; zero and top only equal themselves.
    pub fn eq(self, a: Trop, b: Trop) -> bool {
        if a.is_finite() && b.is_finite() {
            (a.value() - b.value()).abs() <= self.eps
        } else {
            a == b
        }
    }

    /// a <= b up to eps; `ZERO <= anything`, `anything <= TOP`.
    pub fn le(self, a: Trop, b: Trop) -> bool {
        if a.is_zero() || b.is_top() {
            true
        } else if b.is_zero() || a.is_top() {
            false
        } else {
            a.value() <= b.value() + self.eps
        }
    }

    /// Is the scalar equal to the unit (numeric 0) up to eps?
    pub fn is_one(self, a: Trop) -> bool {
        a.is_finite() && a.value().abs() <= self.eps
    }

    /// A deviation close enough to the pass/fail boundary that the verdict
    /// could flip under a tenfold change of eps.
    pub fn marginal(self, deviation: f64) -> bool {
        if self.eps == 0.0 || !deviation.is_finite() {
            return false;
        }
        let d = deviation.abs();
        d >= self.eps / 10.0 && d <= self.eps * 10.0
    }
}
