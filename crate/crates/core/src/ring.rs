//! The small ring interface shared by scalars, polynomials and fractions.

use core::fmt::Debug;

use crate::scalar::{Characteristic, Scalar};

/// Commutative ring elements carrying a copyable context (characteristic, monomial order, ...).
///
/// Elements are combined by reference; no element is ever mutated in place by these methods.
pub trait Ring: Clone + PartialEq + Debug {
    type Ctx: Copy + PartialEq + Debug;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: Self::Ctx) -> Self;
    fn one(ctx: Self::Ctx) -> Self;
    fn from_scalar(ctx: Self::Ctx, s: &Scalar) -> Self;
    fn characteristic(ctx: Self::Ctx) -> Characteristic;

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;

    /// Multiplicative inverse when it exists inside the ring.
    fn try_inv(&self) -> Option<Self>;

    fn from_i64(ctx: Self::Ctx, n: i64) -> Self {
        Self::from_scalar(ctx, &Scalar::from_i64(Self::characteristic(ctx), n))
    }

    fn scale(&self, s: &Scalar) -> Self {
        self.mul(&Self::from_scalar(self.ctx(), s))
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.ctx());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Rings in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Self {
        self.try_inv().expect("inverse of zero")
    }

    fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }
}

impl Ring for Scalar {
    type Ctx = Characteristic;

    fn ctx(&self) -> Characteristic {
        self.characteristic()
    }
    fn zero(ctx: Characteristic) -> Self {
        Scalar::zero(ctx)
    }
    fn one(ctx: Characteristic) -> Self {
        Scalar::one(ctx)
    }
    fn from_scalar(_ctx: Characteristic, s: &Scalar) -> Self {
        s.clone()
    }
    fn characteristic(ctx: Characteristic) -> Characteristic {
        ctx
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Scalar::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        Scalar::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Scalar::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Scalar::mul(self, o)
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
    fn try_inv(&self) -> Option<Self> {
        Scalar::inv(self)
    }
}

impl Field for Scalar {}
