//! Thin wrappers over `libm` so the numerics behave identically with and
//! without `std`.

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn exp_m1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

/// Unevaluated sum `hi + lo` of two doubles (about 106 significant bits),
/// used where character sums cancel down to far below their terms.
#[derive(Debug, Default, Clone, Copy, PartialEq)]
pub(crate) struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl DoubleDouble {
    pub(crate) const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub(crate) const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    pub(crate) fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// `a * b` without rounding.
    pub(crate) fn product(a: f64, b: f64) -> Self {
        let p = a * b;
        Self {
            hi: p,
            lo: libm::fma(a, b, -p),
        }
    }

    pub(crate) fn value(self) -> f64 {
        self.hi + self.lo
    }

    pub(crate) fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }

    pub(crate) fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub(crate) fn sub(self, o: Self) -> Self {
        self.add(o.neg())
    }

    pub(crate) fn mul(self, o: Self) -> Self {
        let p = Self::product(self.hi, o.hi);
        let (hi, lo) = quick_two_sum(p.hi, p.lo + self.hi * o.lo + self.lo * o.hi);
        Self { hi, lo }
    }

    /// Multiplication by a power of two (exact).
    pub(crate) fn scale(self, k: f64) -> Self {
        Self {
            hi: self.hi * k,
            lo: self.lo * k,
        }
    }

    pub(crate) fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Self::new(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Self::new(q2)));
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }.add(Self::new(q3))
    }

    pub(crate) fn powi(self, n: u32) -> Self {
        let mut base = self;
        let mut e = n;
        let mut acc = Self::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_double_keeps_small_terms() {
        let one = DoubleDouble::ONE;
        let tiny = DoubleDouble::new(1e-20);
        assert_eq!(one.add(tiny).sub(one).value(), 1e-20);
        let third = one.div(DoubleDouble::new(3.0));
        let back = third.mul(DoubleDouble::new(3.0)).sub(one).value();
        assert!(back.abs() < 1e-31);
        // (1 + 2^-40)^2 - 1 - 2^-39 = 2^-80, invisible in plain doubles
        let x = DoubleDouble::new(1.0 + libm::exp2(-40.0));
        let r = x.powi(2).sub(one).sub(DoubleDouble::new(libm::exp2(-39.0)));
        assert_eq!(r.value(), libm::exp2(-80.0));
    }
}
