//! Forward-mode dual numbers.

use crate::real::Real;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// `v + d·ε` with `ε² = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<T> {
    pub v: T,
    pub d: T,
}

impl<T: Real> Dual<T> {
    pub fn new(v: T, d: T) -> Self {
        Dual { v, d }
    }

    pub fn constant(v: T) -> Self {
        Dual { v, d: T::zero() }
    }

    /// Seed for differentiation with respect to this value.
    pub fn variable(v: T) -> Self {
        Dual { v, d: T::one() }
    }

    #[inline]
    fn chain(self, f: T, df: T) -> Self {
        Dual { v: f, d: self.d * df }
    }
}

impl<T: Real> Add for Dual<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Dual { v: self.v + o.v, d: self.d + o.d }
    }
}

impl<T: Real> Sub for Dual<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Dual { v: self.v - o.v, d: self.d - o.d }
    }
}

impl<T: Real> Mul for Dual<T> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Dual { v: self.v * o.v, d: self.d * o.v + self.v * o.d }
    }
}

impl<T: Real> Div for Dual<T> {
    type Output = Self;
    #[inline]
    fn div(self, o: Self) -> Self {
        let q = self.v / o.v;
        Dual { v: q, d: (self.d - q * o.d) / o.v }
    }
}

impl<T: Real> Neg for Dual<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Dual { v: -self.v, d: -self.d }
    }
}

impl<T: Real> Real for Dual<T> {
    fn from_f64(v: f64) -> Self {
        Dual::constant(T::from_f64(v))
    }

    fn value(&self) -> f64 {
        self.v.value()
    }

    fn is_constant(&self) -> bool {
        self.v.is_constant() && self.d == T::zero() && self.d.is_constant()
    }

    fn sin(self) -> Self {
        self.chain(self.v.sin(), self.v.cos())
    }

    fn cos(self) -> Self {
        self.chain(self.v.cos(), -self.v.sin())
    }

    fn tan(self) -> Self {
        let t = self.v.tan();
        self.chain(t, T::one() + t * t)
    }

    fn atan(self) -> Self {
        self.chain(self.v.atan(), T::one() / (T::one() + self.v * self.v))
    }

    fn atan2(self, x: Self) -> Self {
        let r2 = self.v * self.v + x.v * x.v;
        Dual {
            v: self.v.atan2(x.v),
            d: (x.v * self.d - self.v * x.d) / r2,
        }
    }

    fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e)
    }

    fn ln(self) -> Self {
        self.chain(self.v.ln(), T::one() / self.v)
    }

    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, T::from_f64(0.5) / s)
    }

    fn abs(self) -> Self {
        self.chain(self.v.abs(), self.v.sgn())
    }

    fn sgn(self) -> Self {
        Dual::constant(self.v.sgn())
    }

    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Dual::constant(T::one());
        }
        let nf = T::from_f64(n as f64);
        self.chain(self.v.powi(n), nf * self.v.powi(n - 1))
    }

    fn powf(self, n: Self) -> Self {
        if n.is_constant() {
            let p = self.v.powf(n.v);
            let dp = n.v * self.v.powf(n.v - T::one());
            self.chain(p, dp)
        } else {
            (n * self.ln()).exp()
        }
    }
}

/// Value, first and second derivative of `f` at `x`.
pub fn second_order<F>(f: F, x: f64) -> (f64, f64, f64)
where
    F: Fn(Dual<Dual<f64>>) -> Dual<Dual<f64>>,
{
    let seed = Dual::new(Dual::variable(x), Dual::constant(1.0));
    let r = f(seed);
    (r.v.v, r.v.d, r.d.d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn product_rule() {
        let x = Dual::variable(3.0);
        let y = x * x * x;
        assert_eq!(y.v, 27.0);
        assert_eq!(y.d, 27.0);
    }

    #[test]
    fn nested_gives_second_derivative() {
        let (v, d1, d2) = second_order(|x| x.sin() * x.exp(), 0.7);
        let (s, c, e) = (0.7f64.sin(), 0.7f64.cos(), 0.7f64.exp());
        assert_relative_eq!(v, s * e, epsilon = 1e-15);
        assert_relative_eq!(d1, (s + c) * e, epsilon = 1e-14);
        assert_relative_eq!(d2, 2.0 * c * e, epsilon = 1e-14);
    }

    #[test]
    fn atan2_matches_atan_quotient() {
        let y = Dual::variable(0.4);
        let x = Dual::constant(1.3);
        let a = y.atan2(x);
        let b = (y / x).atan();
        assert_relative_eq!(a.v, b.v, epsilon = 1e-15);
        assert_relative_eq!(a.d, b.d, epsilon = 1e-15);
    }

    #[test]
    fn constant_exponent_power() {
        let x = Dual::variable(2.0);
        let y = x.powf(Dual::constant(1.5));
        assert_relative_eq!(y.d, 1.5 * 2.0f64.sqrt(), epsilon = 1e-14);
    }
}
