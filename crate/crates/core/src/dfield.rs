//! Operator fields `K = k(t_1..t_n)` with `e_u: K → D_u(K)` given on generators.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{frobenius_assumption, DCtx, DElem, DVector, FrobeniusVerdict, LocalAlgebra};
use crate::error::ParseError;
use crate::expr;
use crate::frac::{rf_ctx, rf_int, rf_scalar, Frac, RatFunc};
use crate::gamma::{GammaSystem, OperatorAlgebras, Partials};
use crate::index::{OpIndex, OpSet};
use crate::poly::Poly;
use crate::ring::{Field, Ring};
use crate::scalar::{Characteristic, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DFieldError {
    #[error("GAMMA_FAIL: d_({i}) d_({j}) {gen} violates the commutation rule")]
    GammaFail { i: OpIndex, j: OpIndex, gen: String },
    #[error("NOT_SEPARABLE: f'(a) = 0 modulo f")]
    NotSeparable,
    #[error("not inseparable: {0}")]
    NotInseparable(String),
    #[error("DIV_FAIL: denominator has zero residue")]
    DivFail,
    #[error("invalid field: {0}")]
    Invalid(String),
}

impl DFieldError {
    pub fn code(&self) -> &'static str {
        match self {
            DFieldError::GammaFail { .. } => "GAMMA_FAIL",
            DFieldError::NotSeparable => "NOT_SEPARABLE",
            DFieldError::DivFail => "DIV_FAIL",
            DFieldError::NotInseparable(_) | DFieldError::Invalid(_) => "INVALID",
        }
    }
}

/// A purely transcendental operator field over the prime field.
#[derive(Clone, Debug, PartialEq)]
pub struct DField {
    algebras: OperatorAlgebras,
    gens: Vec<String>,
    // action[g][rank of op] = ∂_op(t_g)
    action: Vec<Vec<RatFunc>>,
}

impl DField {
    /// `values(g, op)` gives `∂_op(t_g)`; anything not supplied is zero.
    pub fn new(
        algebras: OperatorAlgebras,
        gens: Vec<String>,
        values: &[(usize, OpIndex, RatFunc)],
    ) -> Result<DField, DFieldError> {
        let ops = algebras.opset();
        let ch = algebras.characteristic();
        for (k, g) in gens.iter().enumerate() {
            if gens[..k].contains(g) {
                return Err(DFieldError::Invalid(alloc::format!("generator `{}` declared twice", g)));
            }
        }
        let mut action = alloc::vec![alloc::vec![rf_int(ch, 0); ops.len()]; gens.len()];
        for (g, op, v) in values {
            if *g >= gens.len() {
                return Err(DFieldError::Invalid(alloc::format!("no generator number {}", g)));
            }
            if !ops.contains(*op) {
                return Err(DFieldError::Invalid(alloc::format!("operator ({}) is not in the system", op)));
            }
            if v.num().vars().iter().chain(v.den().vars().iter()).any(|&x| x as usize >= gens.len()) {
                return Err(DFieldError::Invalid(alloc::format!("value of d_({}) {} uses unknown variables", op, gens[*g])));
            }
            if Frac::<Scalar>::characteristic(v.ctx()) != ch {
                return Err(DFieldError::Invalid("value has the wrong characteristic".into()));
            }
            action[*g][ops.rank(*op)] = v.clone();
        }
        Ok(DField { algebras, gens, action })
    }

    /// The field `k` itself with the trivial action.
    pub fn prime(algebras: OperatorAlgebras) -> DField {
        DField { algebras, gens: Vec::new(), action: Vec::new() }
    }

    pub fn characteristic(&self) -> Characteristic {
        self.algebras.characteristic()
    }

    pub fn algebras(&self) -> &OperatorAlgebras {
        &self.algebras
    }

    pub fn opset(&self) -> OpSet {
        self.algebras.opset()
    }

    pub fn gens(&self) -> &[String] {
        &self.gens
    }

    pub fn gen_name(&self, v: u32) -> String {
        self.gens.get(v as usize).cloned().unwrap_or_else(|| alloc::format!("t{}", v))
    }

    pub fn gen(&self, g: usize) -> RatFunc {
        Frac::var(rf_ctx(self.characteristic()), g as u32)
    }

    pub fn action(&self, g: usize, op: OpIndex) -> &RatFunc {
        &self.action[g][self.opset().rank(op)]
    }

    pub fn zero(&self) -> RatFunc {
        rf_int(self.characteristic(), 0)
    }

    /// Parses an expression in the generator names.
    pub fn parse(&self, src: &str) -> Result<RatFunc, ParseError> {
        let e = expr::parse(src)?;
        let ch = self.characteristic();
        expr::eval_frac(&e, rf_ctx(ch), &|name: &str| {
            self.gens.iter().position(|g| g == name).map(|k| self.gen(k))
        })
    }

    pub fn render(&self, x: &RatFunc) -> String {
        crate::frac::rf_render(x, &|v| self.gen_name(v))
    }

    /// `e_u(t_g)` as a vector of coordinates.
    pub fn gen_image(&self, u: u8, g: usize) -> DVector<RatFunc> {
        let ops = self.opset();
        let mut coords = alloc::vec![self.gen(g)];
        for op in ops.ops_of(u) {
            coords.push(self.action[g][ops.rank(op)].clone());
        }
        DVector { coords }
    }

    /// `e_u(x)`; a missing `D_u` gives the one-coordinate vector `[x]`.
    pub fn apply_e(&self, u: u8, x: &RatFunc) -> DVector<RatFunc> {
        let Some(alg) = self.algebras.algebra(u) else {
            return DVector { coords: alloc::vec![x.clone()] };
        };
        self.try_apply_e(alg, u, x).expect("valid field elements have units as denominators")
    }

    fn try_apply_e(&self, alg: &LocalAlgebra, u: u8, x: &RatFunc) -> Result<DVector<RatFunc>, DFieldError> {
        let ch = self.characteristic();
        let ctx = DCtx { alg, inner: rf_ctx(ch) };
        let ev = |p: &Poly<Scalar>| -> DElem<'_, RatFunc> {
            p.eval(
                ctx,
                |s| DElem::new(alg, alg.embed(rf_scalar(ch, s.clone()))),
                |v| DElem::new(alg, self.gen_image(u, v as usize)),
            )
        };
        let num = ev(x.num());
        if x.den().is_one() {
            return Ok(num.v);
        }
        let den = ev(x.den()).try_inv().ok_or(DFieldError::DivFail)?;
        Ok(num.mul(&den).v)
    }

    pub fn apply_partial(&self, op: OpIndex, x: &RatFunc) -> RatFunc {
        if x.is_constant() {
            return self.zero();
        }
        self.apply_e(op.u, x).coords[op.i].clone()
    }

    /// `∂_ξ x`, rightmost operator first.
    pub fn apply_word(&self, xi: &[OpIndex], x: &RatFunc) -> RatFunc {
        let mut acc = x.clone();
        for &op in xi.iter().rev() {
            acc = self.apply_partial(op, &acc);
        }
        acc
    }

    pub fn is_constant(&self, x: &RatFunc) -> bool {
        self.opset().ops().into_iter().all(|op| self.apply_partial(op, x).is_zero())
    }

    /// Γ-commutativity on generators.
    pub fn validate(&self, gamma: &GammaSystem) -> Result<(), DFieldError> {
        if gamma.opset() != self.opset() {
            return Err(DFieldError::Invalid("the commutation system has a different operator set".into()));
        }
        let ops = self.opset().ops();
        for g in 0..self.gens.len() {
            let t = self.gen(g);
            for &i in &ops {
                for &j in &ops {
                    let mut d = self.apply_partial(i, &self.apply_partial(j, &t));
                    if !(i.is_hs() && j.is_hs()) {
                        d = d.sub(&self.apply_partial(j, &self.apply_partial(i, &t)));
                    }
                    for (l, c) in gamma.c_terms(i, j) {
                        d = d.sub(&c.mul(&self.apply_partial(l, &t)));
                    }
                    if !d.is_zero() {
                        return Err(DFieldError::GammaFail { i, j, gen: self.gens[g].clone() });
                    }
                }
            }
        }
        Ok(())
    }

    /// Adjoins a transcendental `name` with the declared operator values, then revalidates.
    pub fn extend_transcendental(
        &self,
        name: &str,
        values: &[(OpIndex, RatFunc)],
        gamma: &GammaSystem,
    ) -> Result<DField, DFieldError> {
        let mut gens = self.gens.clone();
        gens.push(String::from(name));
        let g = self.gens.len();
        let ops = self.opset();
        let mut vals: Vec<(usize, OpIndex, RatFunc)> = Vec::new();
        for (k, row) in self.action.iter().enumerate() {
            for op in ops.ops() {
                vals.push((k, op, row[ops.rank(op)].clone()));
            }
        }
        vals.extend(values.iter().map(|(op, v)| (g, *op, v.clone())));
        let f = DField::new(self.algebras.clone(), gens, &vals)?;
        f.validate(gamma)?;
        Ok(f)
    }

    /// The unique extension of the operators to `K[a]/(f)` for separable `f` (variable 0 of `f`).
    pub fn extend_separable(&self, f: &Poly<RatFunc>) -> Result<SeparableExtension, DFieldError> {
        let vars = f.vars();
        if vars.len() != 1 || !vars.contains(&0) {
            return Err(DFieldError::Invalid("minimal polynomial must be univariate in variable 0".into()));
        }
        let ch = self.characteristic();
        let dense = uni::from_poly(f);
        let monic = uni::monic(&dense);
        if monic.len() < 2 {
            return Err(DFieldError::Invalid("minimal polynomial must have positive degree".into()));
        }
        let mctx = ModCtx { modulus: &monic, ch };
        let a = ModElem::new(mctx, alloc::vec![rf_int(ch, 0), rf_int(ch, 1)]);
        let fprime = uni::derivative(&monic);
        let fp_at_a = ModElem::new(mctx, fprime);
        let fp_inv = fp_at_a.try_inv().ok_or(DFieldError::NotSeparable)?;
        let mut values: Vec<(OpIndex, Vec<RatFunc>)> = Vec::new();
        for u in [1u8, 2] {
            let Some(alg) = self.algebras.algebra(u) else { continue };
            if alg.m() == 0 {
                continue;
            }
            let coeffs: Vec<DVector<ModElem<'_>>> = monic
                .iter()
                .map(|c| self.apply_e(u, c).map(|x| ModElem::constant(mctx, x.clone())))
                .collect();
            let all: Vec<usize> = (1..=alg.m()).collect();
            let sol = solve_root(alg, &a, &fp_inv, &all, &mut |x: &DVector<ModElem<'_>>, _i| {
                horner(alg, &coeffs, x)
            });
            for i in 1..=alg.m() {
                values.push((OpIndex { u, i }, sol.coords[i].c.clone()));
            }
        }
        Ok(SeparableExtension { minpoly: monic.clone(), values })
    }

    /// Whether an inseparable root of `f = g(x^p)` admits an extension of the operators.
    pub fn extend_inseparable_decide(&self, f: &Poly<RatFunc>) -> Result<InseparableVerdict, DFieldError> {
        let p = self.characteristic().value();
        if p == 0 {
            return Err(DFieldError::NotInseparable("characteristic zero".into()));
        }
        let vars = f.vars();
        if vars.len() != 1 || !vars.contains(&0) {
            return Err(DFieldError::Invalid("minimal polynomial must be univariate in variable 0".into()));
        }
        if f.terms().iter().any(|(m, _)| !(m.exp(0) as u64).is_multiple_of(p)) {
            return Err(DFieldError::NotInseparable("f is not a polynomial in x^p".into()));
        }
        let frobenius = frobenius_assumption(&self.algebras.lie, self.algebras.hs.as_ref());
        let monic = uni::monic(&uni::from_poly(f));
        let bad = monic.iter().position(|c| !self.is_constant(c));
        Ok(InseparableVerdict { extendable: bad.is_none(), witness_degree: bad, frobenius })
    }
}

impl Partials for DField {
    fn partial(&self, op: OpIndex, c: &RatFunc) -> RatFunc {
        self.apply_partial(op, c)
    }
}

/// Operator values of a separable root `a`: `values[k] = (op, ∂_op(a))` as dense polynomials in `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparableExtension {
    /// Monic minimal polynomial, coefficients low to high.
    pub minpoly: Vec<RatFunc>,
    pub values: Vec<(OpIndex, Vec<RatFunc>)>,
}

impl SeparableExtension {
    pub fn value(&self, op: OpIndex) -> Option<&[RatFunc]> {
        self.values.iter().find(|(o, _)| *o == op).map(|(_, v)| v.as_slice())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InseparableVerdict {
    pub extendable: bool,
    /// Degree of the first non-constant coefficient of the monic minimal polynomial.
    pub witness_degree: Option<usize>,
    pub frobenius: FrobeniusVerdict,
}

impl fmt::Display for InseparableVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.witness_degree {
            None => write!(f, "EXTENDABLE")?,
            Some(k) => write!(f, "NOT_EXTENDABLE: coefficient of x^{} is not constant", k)?,
        }
        write!(f, " (Frobenius assumption: {})", self.frobenius)
    }
}

/// `Σ_k c_k x^k` in `D(R)` for coefficient images `c_k`, by Horner.
pub fn horner<R: Ring>(alg: &LocalAlgebra, coeffs: &[DVector<R>], x: &DVector<R>) -> DVector<R> {
    let mut acc = coeffs.last().expect("nonempty").clone();
    for c in coeffs.iter().rev().skip(1) {
        acc = alg.mul(&acc, x).add(c);
    }
    acc
}

/// Solves `F(x) = 0` for the coordinates `targets` of `x = (a0, U_1, ..., U_m)`, in order.
///
/// `targets` must be ascending and closed under passing to lower grades. `eval(x, i)` must return
/// `F(x)` correctly in coordinate `i` when `x` carries the solved coordinates and zeros elsewhere;
/// `deriv_inv` is `1/f'(a0)`, the coefficient of `U_i` in that coordinate.
pub fn solve_root<R: Ring>(
    alg: &LocalAlgebra,
    a0: &R,
    deriv_inv: &R,
    targets: &[usize],
    eval: &mut dyn FnMut(&DVector<R>, usize) -> DVector<R>,
) -> DVector<R> {
    let mut x = alg.embed(a0.clone());
    for &i in targets {
        let e = eval(&x, i);
        x.coords[i] = e.coords[i].mul(deriv_inv).neg();
    }
    x
}

/// Context of [`ModElem`]: a monic modulus over `K`.
#[derive(Clone, Copy, Debug)]
pub struct ModCtx<'a> {
    pub modulus: &'a [RatFunc],
    pub ch: Characteristic,
}

impl PartialEq for ModCtx<'_> {
    fn eq(&self, o: &Self) -> bool {
        core::ptr::eq(self.modulus, o.modulus) && self.ch == o.ch
    }
}

/// An element of `K[a]/(f)`, dense and reduced (degree below `deg f`).
#[derive(Clone, Debug)]
pub struct ModElem<'a> {
    pub ctx: ModCtx<'a>,
    pub c: Vec<RatFunc>,
}

impl PartialEq for ModElem<'_> {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}

impl<'a> ModElem<'a> {
    pub fn new(ctx: ModCtx<'a>, c: Vec<RatFunc>) -> ModElem<'a> {
        ModElem { ctx, c: uni::rem(&c, ctx.modulus) }
    }

    pub fn constant(ctx: ModCtx<'a>, x: RatFunc) -> ModElem<'a> {
        ModElem::new(ctx, alloc::vec![x])
    }
}

impl<'a> Ring for ModElem<'a> {
    type Ctx = ModCtx<'a>;

    fn ctx(&self) -> ModCtx<'a> {
        self.ctx
    }
    fn zero(ctx: ModCtx<'a>) -> Self {
        ModElem { ctx, c: Vec::new() }
    }
    fn one(ctx: ModCtx<'a>) -> Self {
        ModElem::constant(ctx, rf_int(ctx.ch, 1))
    }
    fn from_scalar(ctx: ModCtx<'a>, s: &Scalar) -> Self {
        ModElem::constant(ctx, rf_scalar(ctx.ch, s.clone()))
    }
    fn characteristic(ctx: ModCtx<'a>) -> Characteristic {
        ctx.ch
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }
    fn add(&self, o: &Self) -> Self {
        ModElem { ctx: self.ctx, c: uni::add(&self.c, &o.c) }
    }
    fn sub(&self, o: &Self) -> Self {
        ModElem { ctx: self.ctx, c: uni::add(&self.c, &uni::neg(&o.c)) }
    }
    fn mul(&self, o: &Self) -> Self {
        ModElem::new(self.ctx, uni::mul(&self.c, &o.c))
    }
    fn neg(&self) -> Self {
        ModElem { ctx: self.ctx, c: uni::neg(&self.c) }
    }
    fn try_inv(&self) -> Option<Self> {
        uni::inverse_mod(&self.c, self.ctx.modulus).map(|c| ModElem::new(self.ctx, c))
    }
}

/// Dense univariate polynomials over `K`, coefficients low to high, no trailing zeros.
pub mod uni {
    use super::*;

    pub fn trim(mut v: Vec<RatFunc>) -> Vec<RatFunc> {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }

    pub fn from_poly(f: &Poly<RatFunc>) -> Vec<RatFunc> {
        let cs = f.coeffs_in(0);
        trim(cs.into_iter().map(|p| p.constant_coeff()).collect())
    }

    pub fn monic(f: &[RatFunc]) -> Vec<RatFunc> {
        let lc = f.last().expect("nonzero polynomial").inv();
        f.iter().map(|c| c.mul(&lc)).collect()
    }

    pub fn add(a: &[RatFunc], b: &[RatFunc]) -> Vec<RatFunc> {
        let n = a.len().max(b.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(match (a.get(k), b.get(k)) {
                (Some(x), Some(y)) => x.add(y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            });
        }
        trim(out)
    }

    pub fn neg(a: &[RatFunc]) -> Vec<RatFunc> {
        a.iter().map(|c| c.neg()).collect()
    }

    pub fn mul(a: &[RatFunc], b: &[RatFunc]) -> Vec<RatFunc> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let z = a[0].sub(&a[0]);
        let mut out = alloc::vec![z; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        trim(out)
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divrem(a: &[RatFunc], b: &[RatFunc]) -> (Vec<RatFunc>, Vec<RatFunc>) {
        let mut r = trim(a.to_vec());
        let db = b.len() - 1;
        let lc_inv = b[db].inv();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let z = b[0].sub(&b[0]);
        let mut q = alloc::vec![z; r.len() - db];
        while r.len() >= b.len() {
            let k = r.len() - 1 - db;
            let c = r[r.len() - 1].mul(&lc_inv);
            for (j, y) in b.iter().enumerate() {
                r[k + j] = r[k + j].sub(&c.mul(y));
            }
            q[k] = c;
            r.pop();
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn rem(a: &[RatFunc], m: &[RatFunc]) -> Vec<RatFunc> {
        divrem(a, m).1
    }

    pub fn derivative(a: &[RatFunc]) -> Vec<RatFunc> {
        trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul(&RatFunc::from_i64(c.ctx(), k as i64)))
                .collect(),
        )
    }

    /// `a^{-1} mod m` when `gcd(a, m) = 1`.
    pub fn inverse_mod(a: &[RatFunc], m: &[RatFunc]) -> Option<Vec<RatFunc>> {
        let a = rem(a, m);
        if a.is_empty() {
            return None;
        }
        let one = RatFunc::one(a[0].ctx());
        let (mut r0, mut r1) = (m.to_vec(), a);
        let (mut s0, mut s1): (Vec<RatFunc>, Vec<RatFunc>) = (Vec::new(), alloc::vec![one]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1);
            let s = add(&s0, &neg(&mul(&q, &s1)));
            r0 = core::mem::replace(&mut r1, r);
            s0 = core::mem::replace(&mut s1, s);
        }
        if r0.len() != 1 {
            return None;
        }
        let inv = r0[0].inv();
        Some(rem(&s0.iter().map(|c| c.mul(&inv)).collect::<Vec<_>>(), m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{derivations, truncated};
    use crate::gamma::CoeffTensor;
    use crate::poly::MonoOrder;
    use proptest::prelude::*;

    fn q() -> Characteristic {
        Characteristic::ZERO
    }

    /// ℚ(t) with ∂t = 1.
    fn qt() -> DField {
        let alg = OperatorAlgebras::new(derivations(q(), 1), None).unwrap();
        DField::new(alg, alloc::vec!["t".into()], &[(0, OpIndex::lie(1), rf_int(q(), 1))]).unwrap()
    }

    fn char2_fixture() -> DField {
        let c = Characteristic::new(2).unwrap();
        let alg = OperatorAlgebras::new(truncated(c, 2), None).unwrap();
        let s = Frac::var(rf_ctx(c), 0);
        DField::new(alg, alloc::vec!["s".into(), "t".into()], &[(1, OpIndex::lie(2), s)]).unwrap()
    }

    #[test]
    fn partial_examples() {
        let k = qt();
        let d = OpIndex::lie(1);
        assert_eq!(k.apply_partial(d, &k.parse("t^2").unwrap()), k.parse("2*t").unwrap());
        assert_eq!(k.apply_partial(d, &k.parse("1/t").unwrap()), k.parse("-1/t^2").unwrap());
        assert!(k.apply_partial(d, &k.parse("7/3").unwrap()).is_zero());
        assert!(!k.is_constant(&k.gen(0)));
        let f = char2_fixture();
        let ts = f.parse("t*s").unwrap();
        assert_eq!(f.apply_partial(OpIndex::lie(2), &ts), f.parse("s^2").unwrap());
    }

    #[test]
    fn constants_under_zero_action() {
        let alg = OperatorAlgebras::new(derivations(q(), 1), None).unwrap();
        let k = DField::new(alg, alloc::vec!["t".into()], &[]).unwrap();
        assert!(k.is_constant(&k.parse("t^2 - t").unwrap()));
    }

    #[test]
    fn truncated_second_coordinate() {
        let alg = OperatorAlgebras::new(truncated(q(), 2), None).unwrap();
        let c = q();
        let x = Frac::var(rf_ctx(c), 0);
        let y = Frac::var(rf_ctx(c), 1);
        let x1 = Frac::var(rf_ctx(c), 2);
        let x2 = Frac::var(rf_ctx(c), 3);
        let y1 = Frac::var(rf_ctx(c), 4);
        let y2 = Frac::var(rf_ctx(c), 5);
        let k = DField::new(
            alg,
            ["x", "y", "x1", "x2", "y1", "y2"].iter().map(|s| String::from(*s)).collect(),
            &[
                (0, OpIndex::lie(1), x1.clone()),
                (0, OpIndex::lie(2), x2.clone()),
                (1, OpIndex::lie(1), y1.clone()),
                (1, OpIndex::lie(2), y2.clone()),
            ],
        )
        .unwrap();
        let e = k.apply_e(1, &x.mul(&y));
        assert_eq!(e.coords[2], x2.mul(&y).add(&x.mul(&y2)).add(&x1.mul(&y1)));
    }

    #[test]
    fn transcendental_extension_validation() {
        let c = q();
        let g1 = GammaSystem::trivial(OperatorAlgebras::new(derivations(c, 1), None).unwrap());
        let k = DField::prime(g1.algebras.clone());
        let x = Frac::var(rf_ctx(c), 0);
        assert!(k.extend_transcendental("x", &[(OpIndex::lie(1), x.mul(&x))], &g1).is_ok());
        let g2 = GammaSystem::trivial(OperatorAlgebras::new(derivations(c, 2), None).unwrap());
        let k2 = DField::prime(g2.algebras.clone());
        assert!(k2.extend_transcendental("x", &[], &g2).is_ok());
        let r = k2.extend_transcendental("x", &[(OpIndex::lie(1), rf_int(c, 1)), (OpIndex::lie(2), x)], &g2);
        assert!(matches!(r, Err(DFieldError::GammaFail { .. })));
    }

    fn upoly(k: &DField, cs: &[&str]) -> Poly<RatFunc> {
        let ctx = crate::poly::PolyCtx::new(rf_ctx(k.characteristic()), MonoOrder::Lex);
        Poly::from_terms(
            ctx,
            cs.iter()
                .enumerate()
                .map(|(e, c)| (crate::poly::Monomial::var(0, e as u32), k.parse(c).unwrap()))
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn separable_examples() {
        let k = qt();
        let d = OpIndex::lie(1);
        // a² = t: ∂a = 1/(2a) = a/(2t)
        let ext = k.extend_separable(&upoly(&k, &["-t", "0", "1"])).unwrap();
        assert_eq!(ext.value(d).unwrap(), &[rf_int(q(), 0), k.parse("1/(2*t)").unwrap()][..]);
        // a = g: ∂a = ∂g
        let ext = k.extend_separable(&upoly(&k, &["-t^3", "1"])).unwrap();
        assert_eq!(ext.value(d).unwrap(), &[k.parse("3*t^2").unwrap()][..]);
        // a² − a − t: ∂a = 1/(2a − 1)
        let ext = k.extend_separable(&upoly(&k, &["-t", "-1", "1"])).unwrap();
        let v = ext.value(d).unwrap().to_vec();
        let mctx = ModCtx { modulus: &ext.minpoly, ch: q() };
        let a = ModElem::new(mctx, alloc::vec![rf_int(q(), 0), rf_int(q(), 1)]);
        let two_a_minus_1 = a.add(&a).sub(&ModElem::one(mctx));
        assert!(ModElem::new(mctx, v).mul(&two_a_minus_1).is_one());
        assert_eq!(k.extend_separable(&upoly(&k, &["-t", "-1", "1"])).unwrap(), ext);
    }

    #[test]
    fn inseparable_counterexample() {
        let f = char2_fixture();
        let v = f.extend_inseparable_decide(&upoly(&f, &["t", "0", "1"])).unwrap();
        assert!(!v.extendable);
        assert!(matches!(v.frobenius, FrobeniusVerdict::Fail { .. }));
        let v = f.extend_inseparable_decide(&upoly(&f, &["1", "0", "1"])).unwrap();
        assert!(v.extendable);
        let v = f.extend_inseparable_decide(&upoly(&f, &["s", "0", "1"])).unwrap();
        assert!(v.extendable);
    }

    #[test]
    fn generator_gamma_check_uses_coefficients() {
        let c = q();
        let t = CoeffTensor::from_entries([((1, 2, 1), rf_int(c, 1)), ((2, 1, 1), rf_int(c, -1))]);
        let g = GammaSystem::new(OperatorAlgebras::new(derivations(c, 2), None).unwrap(), t, CoeffTensor::new()).unwrap();
        let x = Frac::var(rf_ctx(c), 0);
        // [∂1, ∂2] x = ∂1 x: ∂1 x = 1, ∂2 x = x works
        let k = DField::new(g.algebras.clone(), alloc::vec!["x".into()], &[(0, OpIndex::lie(1), rf_int(c, 1)), (0, OpIndex::lie(2), x)]).unwrap();
        assert!(k.validate(&g).is_ok());
    }

    fn small_poly() -> impl Strategy<Value = String> {
        (-3i64..4, -3i64..4, 0u32..3).prop_map(|(a, b, e)| alloc::format!("({})*t^{} + ({})", a, e, b))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn e_is_a_homomorphism(a in small_poly(), b in small_poly(), c in small_poly()) {
            let k = qt();
            let x = k.parse(&a).unwrap();
            let y = if k.parse(&c).unwrap().is_zero() { k.parse(&b).unwrap() } else { k.parse(&b).unwrap().div(&k.parse(&c).unwrap()) };
            let alg = k.algebras().lie.clone();
            let ex = k.apply_e(1, &x);
            let ey = k.apply_e(1, &y);
            prop_assert_eq!(k.apply_e(1, &x.mul(&y)), alg.mul(&ex, &ey));
            prop_assert_eq!(k.apply_e(1, &x.add(&y)), ex.add(&ey));
            prop_assert_eq!(&ex.coords[0], &x);
        }
    }
}
