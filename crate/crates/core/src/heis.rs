//! The first Heisenberg group in exponential coordinates.
//!
//! Group law `(a,b,c)·(α,β,γ) = (a+α, b+β, c+γ+½(aβ−αb))`, dilations
//! `(x,y,t) ↦ (sx, sy, s²t)` and the left-invariant frame
//! `X₁ = ∂x − (y/2)∂t`, `X₂ = ∂y + (x/2)∂t`, `T = ∂t`.
//!
//! Everything here is generic over the scalar so the group identities can be
//! checked in exact rational arithmetic as well as in floating point.

use num_traits::{Float, Num, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance used for "exact" group identities in floating point,
/// valid for coordinate magnitudes up to about 10.
pub const GROUP_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum HeisError {
    #[error("dilation factor must be positive")]
    NonPositiveDilation,
}

#[inline]
fn half<T: Num>() -> T {
    T::one() / (T::one() + T::one())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HPoint<T> {
    pub x: T,
    pub y: T,
    pub t: T,
}

impl<T: Num + Copy> HPoint<T> {
    pub fn new(x: T, y: T, t: T) -> Self {
        HPoint { x, y, t }
    }

    pub fn identity() -> Self {
        HPoint::new(T::zero(), T::zero(), T::zero())
    }

    pub fn mul(&self, h: &Self) -> Self {
        mul(self, h)
    }

    pub fn inv(&self) -> Self {
        inv(self)
    }
}

impl<T: Float> HPoint<T> {
    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.t.is_finite()
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        (self.x - other.x).abs() <= tol
            && (self.y - other.y).abs() <= tol
            && (self.t - other.t).abs() <= tol
    }
}

pub fn mul<T: Num + Copy>(g: &HPoint<T>, h: &HPoint<T>) -> HPoint<T> {
    HPoint {
        x: g.x + h.x,
        y: g.y + h.y,
        t: g.t + h.t + half::<T>() * (g.x * h.y - h.x * g.y),
    }
}

pub fn inv<T: Num + Copy>(g: &HPoint<T>) -> HPoint<T> {
    let zero = T::zero();
    HPoint { x: zero - g.x, y: zero - g.y, t: zero - g.t }
}

pub fn dilate<T: Num + Copy + PartialOrd>(s: T, g: &HPoint<T>) -> Result<HPoint<T>, HeisError> {
    if !(s > T::zero()) {
        return Err(HeisError::NonPositiveDilation);
    }
    Ok(HPoint { x: s * g.x, y: s * g.y, t: s * s * g.t })
}

/// A vector of the plane with the fixed convention `(a,b)^⊥ = (b,−a)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanarVector<T> {
    pub a: T,
    pub b: T,
}

impl<T: Num + Copy> PlanarVector<T> {
    pub fn new(a: T, b: T) -> Self {
        PlanarVector { a, b }
    }

    pub fn perp(&self) -> Self {
        PlanarVector { a: self.b, b: T::zero() - self.a }
    }

    pub fn dot(&self, o: &Self) -> T {
        self.a * o.a + self.b * o.b
    }
}

impl<T: Num + Copy> std::ops::Neg for PlanarVector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        PlanarVector { a: T::zero() - self.a, b: T::zero() - self.b }
    }
}

/// Tangent vector at `base` in the frame `{X₁, X₂, T}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameVector<T> {
    pub a: T,
    pub b: T,
    pub w: T,
    pub base: HPoint<T>,
}

impl<T: Num + Copy> FrameVector<T> {
    /// Coordinate velocity `(ẋ, ẏ, ṫ)` represented by this frame vector.
    pub fn to_coordinates(&self) -> [T; 3] {
        let h = half::<T>();
        [self.a, self.b, self.w - h * self.base.y * self.a + h * self.base.x * self.b]
    }

    pub fn horizontal_part(&self) -> PlanarVector<T> {
        PlanarVector::new(self.a, self.b)
    }

    /// Exact horizontality, for exact scalar types.
    pub fn is_horizontal_exact(&self) -> bool
    where
        T: Zero + PartialEq,
    {
        self.w == T::zero()
    }
}

impl<T: Float> FrameVector<T> {
    pub fn is_horizontal(&self, tol: T) -> bool {
        self.w.abs() <= tol
    }
}

/// Decompose a coordinate velocity at `base` in the left-invariant frame.
pub fn frame_decompose<T: Num + Copy>(base: &HPoint<T>, v: [T; 3]) -> FrameVector<T> {
    let h = half::<T>();
    FrameVector {
        a: v[0],
        b: v[1],
        w: v[2] + h * base.y * v[0] - h * base.x * v[1],
        base: *base,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn q(n: i64) -> Q {
        Q::from_integer(n)
    }

    #[test]
    fn identity_left_unit() {
        let g = HPoint::new(1.5, -2.0, 0.25);
        assert_eq!(mul(&HPoint::identity(), &g), g);
    }

    #[test]
    fn central_term() {
        let g = mul(&HPoint::new(1.0, 0.0, 0.0), &HPoint::new(0.0, 1.0, 0.0));
        assert_eq!(g, HPoint::new(1.0, 1.0, 0.5));
    }

    #[test]
    fn inverse_cancels_exactly() {
        let g = HPoint::new(q(1), q(2), q(3));
        assert_eq!(inv(&g), HPoint::new(q(-1), q(-2), q(-3)));
        assert_eq!(mul(&g, &inv(&g)), HPoint::identity());
        assert_eq!(mul(&HPoint::new(1.0, 2.0, 3.0), &HPoint::new(-1.0, -2.0, -3.0)), HPoint::identity());
    }

    #[test]
    fn dilation() {
        let g = HPoint::new(1.0, 1.0, 1.0);
        assert_eq!(dilate(2.0, &g).unwrap(), HPoint::new(2.0, 2.0, 4.0));
        assert_eq!(dilate(1.0, &g).unwrap(), g);
        assert_eq!(dilate(0.0, &g), Err(HeisError::NonPositiveDilation));
        assert_eq!(dilate(-1.0, &g), Err(HeisError::NonPositiveDilation));
        let r = dilate(q(3), &dilate(Ratio::new(1, 2), &HPoint::new(q(1), q(-2), q(5))).unwrap()).unwrap();
        assert_eq!(r, dilate(Ratio::new(3, 2), &HPoint::new(q(1), q(-2), q(5))).unwrap());
    }

    #[test]
    fn frame_at_origin_and_offset() {
        let f = frame_decompose(&HPoint::identity(), [0.0, 0.0, 1.0]);
        assert_eq!((f.a, f.b, f.w), (0.0, 0.0, 1.0));
        let base = HPoint::new(0.0, 2.0, 0.0);
        let f = frame_decompose(&base, [1.0, 0.0, 0.0]);
        assert_eq!((f.a, f.b, f.w), (1.0, 0.0, 1.0));
        // X₁ at (0,2,·) is (1, 0, −1); subtracting it leaves T.
        let x1 = [1.0, 0.0, -base.y / 2.0];
        let rest = [1.0 - x1[0], 0.0 - x1[1], 0.0 - x1[2]];
        assert_eq!(rest, [0.0, 0.0, 1.0]);
        assert_eq!(f.to_coordinates(), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn frame_of_translated_circle() {
        // c(θ) = (1−cosθ, sinθ, f(θ)): w = f′ − cosθ/2 + ½.
        for k in 0..16 {
            let th = k as f64 * 0.4;
            let fp = 0.3 * th.cos();
            let base = HPoint::new(1.0 - th.cos(), th.sin(), 0.0);
            let v = [th.sin(), th.cos(), fp];
            let w = frame_decompose(&base, v).w;
            assert!((w - (fp - th.cos() / 2.0 + 0.5)).abs() < 1e-15);
        }
    }

    #[test]
    fn perp_convention() {
        let v = PlanarVector::new(q(3), q(-7));
        assert_eq!(v.perp(), PlanarVector::new(q(-7), q(-3)));
        assert_eq!(v.perp().perp(), -v);
        assert_eq!(v.perp().dot(&v), q(0));
    }

    #[test]
    fn exact_horizontality() {
        let base = HPoint::new(q(2), q(4), q(1));
        // X₂ at base: (0, 1, x/2).
        let f = frame_decompose(&base, [q(0), q(1), q(1)]);
        assert!(f.is_horizontal_exact());
    }
}
