//! Exact division, multivariate gcd and reduced fractions of polynomials.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::poly::{scalar_text, CoeffText, MonoOrder, Monomial, Poly, PolyCtx};
use crate::ring::{Field, Ring};
use crate::scalar::{Characteristic, Scalar};

/// `a / b` when `b` divides `a` exactly.
pub fn div_exact<C: Field>(a: &Poly<C>, b: &Poly<C>) -> Option<Poly<C>> {
    assert!(!b.is_zero(), "division by the zero polynomial");
    let order = a.order();
    let b = b.with_order(MonoOrder::Lex);
    let mut r = a.with_order(MonoOrder::Lex);
    let (bm, bc) = b.lt().cloned().expect("nonzero");
    let bc_inv = bc.inv();
    let mut q: Vec<(Monomial, C)> = Vec::new();
    while let Some((rm, rc)) = r.lt().cloned() {
        if !bm.divides(&rm) {
            return None;
        }
        let t = rm.div(&bm);
        let c = rc.mul(&bc_inv);
        r = r.minus(&b.mul_term(&t, &c));
        q.push((t, c));
    }
    Some(Poly::from_terms(PolyCtx::new(a.poly_ctx().coeff, order), q))
}

fn lc_in<C: Field>(p: &Poly<C>, v: u32) -> (u32, Poly<C>) {
    let cs = p.coeffs_in(v);
    let d = cs.len() as u32 - 1;
    (d, cs.into_iter().last().expect("nonempty"))
}

fn content_in<C: Field>(p: &Poly<C>, v: u32) -> Poly<C> {
    let mut g: Option<Poly<C>> = None;
    for c in p.coeffs_in(v).into_iter().filter(|c| !c.is_zero()) {
        g = Some(match g {
            None => c.monic(),
            Some(g) => gcd(&g, &c),
        });
        if g.as_ref().is_some_and(|g| g.is_constant()) {
            return Poly::one(p.poly_ctx());
        }
    }
    g.unwrap_or_else(|| Poly::zero(p.poly_ctx()))
}

fn primitive_in<C: Field>(p: &Poly<C>, v: u32) -> Poly<C> {
    let c = content_in(p, v);
    if c.is_constant() {
        p.monic()
    } else {
        div_exact(p, &c).expect("content divides").monic()
    }
}

fn pseudo_rem<C: Field>(a: &Poly<C>, b: &Poly<C>, v: u32) -> Poly<C> {
    let (db, lcb) = lc_in(b, v);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let (dr, lcr) = lc_in(&r, v);
        let shift = Poly::monomial(r.poly_ctx(), Monomial::var(v, dr - db), C::one(r.poly_ctx().coeff));
        r = r.times(&lcb).minus(&lcr.times(&shift).times(b));
        if r.vars().len() <= 1 {
            r = r.monic();
        }
    }
    r
}

/// Monic greatest common divisor (in the order of `a`).
pub fn gcd<C: Field>(a: &Poly<C>, b: &Poly<C>) -> Poly<C> {
    let order = a.order();
    let g = gcd_lex(&a.with_order(MonoOrder::Lex), &b.with_order(MonoOrder::Lex));
    g.with_order(order).monic()
}

fn gcd_lex<C: Field>(a: &Poly<C>, b: &Poly<C>) -> Poly<C> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let ctx = a.poly_ctx();
    if a.is_constant() || b.is_constant() {
        return Poly::one(ctx);
    }
    if a.len() == 1 && b.len() == 1 {
        let m = a.lm().expect("nonzero").gcd(b.lm().expect("nonzero"));
        return Poly::monomial(ctx, m, C::one(ctx.coeff));
    }
    let va = a.vars();
    let vb = b.vars();
    let v = *va.iter().chain(vb.iter()).max().expect("nonconstant");
    if !va.contains(&v) {
        return gcd_lex(a, &content_in(b, v));
    }
    if !vb.contains(&v) {
        return gcd_lex(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let gc = gcd_lex(&ca, &cb);
    let mut p = primitive_in(a, v);
    let mut q = primitive_in(b, v);
    if p.degree_in(v) < q.degree_in(v) {
        core::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = pseudo_rem(&p, &q, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            q = Poly::one(ctx);
            break;
        }
        p = q;
        q = primitive_in(&r, v);
    }
    gc.times(&primitive_in(&q, v)).monic()
}

/// A reduced fraction: numerator and denominator share no factor and the denominator is monic.
#[derive(Clone, Debug, PartialEq)]
pub struct Frac<C: Field> {
    num: Poly<C>,
    den: Poly<C>,
}

impl<C: Field + Eq> Eq for Frac<C> {}

impl<C: Field + Ord> PartialOrd for Frac<C> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<C: Field + Ord> Ord for Frac<C> {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num, &self.den).cmp(&(&other.num, &other.den))
    }
}

impl<C: Field> Frac<C> {
    pub fn new(num: Poly<C>, den: Poly<C>) -> Frac<C> {
        assert!(!den.is_zero(), "zero denominator");
        let ctx = num.poly_ctx();
        let den = den.with_order(ctx.order);
        if num.is_zero() {
            return Frac {
                num,
                den: Poly::one(ctx),
            };
        }
        if den.is_constant() {
            let inv = den.lc().expect("nonzero").inv();
            return Frac {
                num: num.scale_by(&inv),
                den: Poly::one(ctx),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                div_exact(&num, &g).expect("gcd divides"),
                div_exact(&den, &g).expect("gcd divides"),
            )
        };
        let inv = den.lc().expect("nonzero").inv();
        Frac {
            num: num.scale_by(&inv),
            den: den.scale_by(&inv),
        }
    }

    pub fn from_poly(p: Poly<C>) -> Frac<C> {
        let ctx = p.poly_ctx();
        Frac {
            num: p,
            den: Poly::one(ctx),
        }
    }

    pub fn constant(ctx: PolyCtx<C::Ctx>, c: C) -> Frac<C> {
        Frac::from_poly(Poly::constant(ctx, c))
    }

    pub fn var(ctx: PolyCtx<C::Ctx>, v: u32) -> Frac<C> {
        Frac::from_poly(Poly::var(ctx, v))
    }

    pub fn num(&self) -> &Poly<C> {
        &self.num
    }

    pub fn den(&self) -> &Poly<C> {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    /// The value as a coefficient when the fraction is constant.
    pub fn as_constant(&self) -> Option<C> {
        if self.is_constant() {
            Some(self.num.constant_coeff())
        } else {
            None
        }
    }

    pub fn map_polys(&self, f: impl Fn(&Poly<C>) -> Poly<C>) -> Frac<C> {
        Frac::new(f(&self.num), f(&self.den))
    }

    pub fn render(&self, names: &dyn Fn(u32) -> String, coeff: &dyn Fn(&C) -> CoeffText) -> String {
        self.text(names, coeff).signed()
    }

    /// Text split into sign and body, for use as a coefficient.
    pub fn text(&self, names: &dyn Fn(u32) -> String, coeff: &dyn Fn(&C) -> CoeffText) -> CoeffText {
        let single = self.num.len() == 1;
        let (negative, num_text) = if single {
            let neg = coeff(self.num.lc().expect("nonzero")).negative;
            let body = if neg {
                self.num.negated().render(names, coeff)
            } else {
                self.num.render(names, coeff)
            };
            (neg, body)
        } else {
            (false, self.num.render(names, coeff))
        };
        if self.den.is_one() {
            return CoeffText {
                text: num_text,
                negative,
                atomic: single,
            };
        }
        let den_atomic = self.den.len() == 1 && self.den.lm().is_some_and(|m| m.pairs().len() == 1);
        let den_text = self.den.render(names, coeff);
        let mut text = String::new();
        if single {
            text.push_str(&num_text);
        } else {
            text.push('(');
            text.push_str(&num_text);
            text.push(')');
        }
        text.push('/');
        if den_atomic {
            text.push_str(&den_text);
        } else {
            text.push('(');
            text.push_str(&den_text);
            text.push(')');
        }
        CoeffText {
            text,
            negative,
            atomic: true,
        }
    }
}

impl CoeffText {
    pub fn signed(self) -> String {
        if self.negative {
            let mut s = String::from("-");
            if self.atomic {
                s.push_str(&self.text);
            } else {
                s.push('(');
                s.push_str(&self.text);
                s.push(')');
            }
            s
        } else {
            self.text
        }
    }
}

impl<C: Field> Ring for Frac<C> {
    type Ctx = PolyCtx<C::Ctx>;

    fn ctx(&self) -> Self::Ctx {
        self.num.poly_ctx()
    }
    fn zero(ctx: Self::Ctx) -> Self {
        Frac::from_poly(Poly::zero(ctx))
    }
    fn one(ctx: Self::Ctx) -> Self {
        Frac::from_poly(Poly::one(ctx))
    }
    fn from_scalar(ctx: Self::Ctx, s: &Scalar) -> Self {
        Frac::from_poly(Poly::from_scalar(ctx, s))
    }
    fn characteristic(ctx: Self::Ctx) -> Characteristic {
        C::characteristic(ctx.coeff)
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    fn add(&self, o: &Self) -> Self {
        if self.num.is_zero() {
            return o.clone();
        }
        if o.num.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return Frac::from_poly(self.num.plus(&o.num));
            }
            return Frac::new(self.num.plus(&o.num), self.den.clone());
        }
        Frac::new(
            self.num.times(&o.den).plus(&o.num.times(&self.den)),
            self.den.times(&o.den),
        )
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.num.is_zero() || o.num.is_zero() {
            return Frac::zero(self.ctx());
        }
        if self.den.is_one() && o.den.is_one() {
            return Frac::from_poly(self.num.times(&o.num));
        }
        Frac::new(self.num.times(&o.num), self.den.times(&o.den))
    }
    fn neg(&self) -> Self {
        Frac {
            num: self.num.negated(),
            den: self.den.clone(),
        }
    }
    fn try_inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Frac::new(self.den.clone(), self.num.clone()))
        }
    }
}

impl<C: Field> Field for Frac<C> {}

/// Rational functions over the prime field: the coefficient field `k(gens)` of base fields.
pub type RatFunc = Frac<Scalar>;

/// Context for rational functions of a given characteristic (canonical order `Lex`).
pub fn rf_ctx(c: Characteristic) -> PolyCtx<Characteristic> {
    PolyCtx::new(c, MonoOrder::Lex)
}

pub fn rf_scalar(c: Characteristic, s: Scalar) -> RatFunc {
    Frac::constant(rf_ctx(c), s)
}

pub fn rf_int(c: Characteristic, n: i64) -> RatFunc {
    RatFunc::from_i64(rf_ctx(c), n)
}

/// Text of a rational function as a polynomial coefficient, generators named by `names`.
pub fn rf_text(x: &RatFunc, names: &dyn Fn(u32) -> String) -> CoeffText {
    x.text(names, &scalar_text)
}

pub fn rf_render(x: &RatFunc, names: &dyn Fn(u32) -> String) -> String {
    x.render(names, &scalar_text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PolyCtx<Characteristic> {
        rf_ctx(Characteristic::ZERO)
    }

    fn v(i: u32) -> Poly<Scalar> {
        Poly::var(ctx(), i)
    }

    fn n(k: i64) -> Poly<Scalar> {
        Poly::from_i64(ctx(), k)
    }

    #[test]
    fn gcd_bivariate() {
        // (x + y)(x - y) and (x + y)^2
        let a = v(1).plus(&v(0)).times(&v(1).minus(&v(0)));
        let b = v(1).plus(&v(0)).times(&v(1).plus(&v(0)));
        assert_eq!(gcd(&a, &b), v(1).plus(&v(0)));
    }

    #[test]
    fn gcd_with_content() {
        // y*(x+1) and y^2*(x+2): gcd y
        let a = v(0).times(&v(1).plus(&n(1)));
        let b = v(0).times(&v(0)).times(&v(1).plus(&n(2)));
        assert_eq!(gcd(&a, &b), v(0));
    }

    #[test]
    fn gcd_univariate_coprime() {
        let a = v(0).times(&v(0)).minus(&n(2));
        let b = v(0).minus(&n(1));
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn fraction_reduces() {
        let num = v(0).times(&v(0)).minus(&n(1));
        let den = v(0).minus(&n(1)).scale_by(&Scalar::from_i64(Characteristic::ZERO, 3));
        let f = Frac::new(num, den);
        assert!(f.is_poly());
        assert_eq!(f.num(), &v(0).plus(&n(1)).scale_by(&Scalar::parse(Characteristic::ZERO, "1/3").unwrap()));
    }

    #[test]
    fn fraction_text() {
        let names = |i: u32| String::from(["t", "s"][i as usize]);
        let f = Frac::new(n(-1), v(0));
        assert_eq!(rf_render(&f, &names), "-1/t");
        let g = Frac::new(v(0).plus(&n(1)), v(0).times(&v(1)));
        assert_eq!(rf_render(&g, &names), "(t + 1)/(s*t)");
    }
}
