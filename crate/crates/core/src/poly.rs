//! Sparse multivariate polynomials over an arbitrary coefficient ring.
//!
//! Variables are plain indices. Both monomial orders treat a larger index as a larger
//! variable, so appending variables (new jets) keeps every existing comparison intact.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write;

use crate::ring::{Field, Ring};
use crate::scalar::{Characteristic, Scalar};

/// A power product, stored as `(variable, exponent)` pairs sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: u32, e: u32) -> Monomial {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(alloc::vec![(v, e)])
        }
    }

    /// Builds a monomial from unsorted pairs, merging repeats and dropping zero exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Monomial {
        let mut map: BTreeMap<u32, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exp(&self, v: u32) -> u32 {
        match self.0.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(k) => self.0[k].1,
            Err(_) => 0,
        }
    }

    pub fn max_var(&self) -> Option<u32> {
        self.0.last().map(|&(v, _)| v)
    }

    fn merge(&self, o: &Monomial, f: impl Fn(u32, u32) -> u32) -> Monomial {
        let (a, b) = (&self.0, &o.0);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() || j < b.len() {
            let (v, e) = if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                i += 1;
                (a[i - 1].0, f(a[i - 1].1, 0))
            } else if i == a.len() || b[j].0 < a[i].0 {
                j += 1;
                (b[j - 1].0, f(0, b[j - 1].1))
            } else {
                i += 1;
                j += 1;
                (a[i - 1].0, f(a[i - 1].1, b[j - 1].1))
            };
            if e > 0 {
                out.push((v, e));
            }
        }
        Monomial(out)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        self.merge(o, |x, y| x + y)
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        self.merge(o, |x, y| x.max(y))
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        self.merge(o, |x, y| x.min(y))
    }

    /// Whether `self` divides `o`.
    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().all(|&(v, e)| o.exp(v) >= e)
    }

    /// `self / o`; the caller guarantees divisibility.
    pub fn div(&self, o: &Monomial) -> Monomial {
        debug_assert!(o.divides(self));
        self.merge(o, |x, y| x - y)
    }

    pub fn is_coprime(&self, o: &Monomial) -> bool {
        self.gcd(o).is_one()
    }

    pub fn remap(&self, f: &dyn Fn(u32) -> u32) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(v, e)| (f(v), e)))
    }

    pub fn without(&self, v: u32) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(w, _)| w != v).collect())
    }

    pub fn render(&self, names: &dyn Fn(u32) -> String) -> String {
        let mut s = String::new();
        for (k, &(v, e)) in self.0.iter().rev().enumerate() {
            if k > 0 {
                s.push('*');
            }
            s.push_str(&names(v));
            if e > 1 {
                let _ = write!(s, "^{}", e);
            }
        }
        s
    }
}

/// Monomial orders. `Lex` is an elimination order for every initial segment of variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonoOrder {
    Lex,
    GrevLex,
}

impl MonoOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonoOrder::Lex => lex_cmp(a, b),
            MonoOrder::GrevLex => a.degree().cmp(&b.degree()).then_with(|| revlex_cmp(a, b)),
        }
    }
}

fn lex_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    let (mut i, mut j) = (a.0.len(), b.0.len());
    loop {
        match (i, j) {
            (0, 0) => return Ordering::Equal,
            (0, _) => return Ordering::Less,
            (_, 0) => return Ordering::Greater,
            _ => {}
        }
        let (va, ea) = a.0[i - 1];
        let (vb, eb) = b.0[j - 1];
        if va != vb {
            return va.cmp(&vb);
        }
        if ea != eb {
            return ea.cmp(&eb);
        }
        i -= 1;
        j -= 1;
    }
}

// Equal total degree assumed: the smaller exponent at the smallest differing variable wins.
fn revlex_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (i < a.0.len(), j < b.0.len()) {
            (false, false) => return Ordering::Equal,
            (false, true) => return Ordering::Greater,
            (true, false) => return Ordering::Less,
            _ => {}
        }
        let (va, ea) = a.0[i];
        let (vb, eb) = b.0[j];
        if va != vb {
            return if va < vb { Ordering::Less } else { Ordering::Greater };
        }
        if ea != eb {
            return eb.cmp(&ea);
        }
        i += 1;
        j += 1;
    }
}

/// Context of a polynomial ring: the coefficient context and the active order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolyCtx<X> {
    pub coeff: X,
    pub order: MonoOrder,
}

impl<X> PolyCtx<X> {
    pub fn new(coeff: X, order: MonoOrder) -> PolyCtx<X> {
        PolyCtx { coeff, order }
    }
}

/// A polynomial: terms sorted strictly descending under the context order, no zero coefficients.
#[derive(Clone, Debug)]
pub struct Poly<C: Ring> {
    ctx: PolyCtx<C::Ctx>,
    terms: Vec<(Monomial, C)>,
}

impl<C: Ring> PartialEq for Poly<C> {
    fn eq(&self, o: &Self) -> bool {
        if self.ctx.order == o.ctx.order {
            self.terms == o.terms
        } else {
            self.terms == o.with_order(self.ctx.order).terms
        }
    }
}

impl<C: Ring + Eq> Eq for Poly<C> {}

impl<C: Ring + Ord> PartialOrd for Poly<C> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<C: Ring + Ord> Ord for Poly<C> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.cmp(&other.terms)
    }
}

impl<C: Ring> Poly<C> {
    pub fn zero_in(ctx: PolyCtx<C::Ctx>) -> Poly<C> {
        Poly {
            ctx,
            terms: Vec::new(),
        }
    }

    pub fn constant(ctx: PolyCtx<C::Ctx>, c: C) -> Poly<C> {
        Poly::monomial(ctx, Monomial::one(), c)
    }

    pub fn monomial(ctx: PolyCtx<C::Ctx>, m: Monomial, c: C) -> Poly<C> {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            alloc::vec![(m, c)]
        };
        Poly { ctx, terms }
    }

    pub fn var(ctx: PolyCtx<C::Ctx>, v: u32) -> Poly<C> {
        Poly::monomial(ctx, Monomial::var(v, 1), C::one(ctx.coeff))
    }

    /// Collects arbitrary terms, combining equal monomials.
    pub fn from_terms(ctx: PolyCtx<C::Ctx>, terms: impl IntoIterator<Item = (Monomial, C)>) -> Poly<C> {
        let mut map: BTreeMap<Monomial, C> = BTreeMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            match map.get_mut(&m) {
                Some(acc) => *acc = acc.add(&c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        let mut terms: Vec<(Monomial, C)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let order = ctx.order;
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Poly { ctx, terms }
    }

    pub fn poly_ctx(&self) -> PolyCtx<C::Ctx> {
        self.ctx
    }

    pub fn order(&self) -> MonoOrder {
        self.ctx.order
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, C)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lt(&self) -> Option<&(Monomial, C)> {
        self.terms.first()
    }

    pub fn lm(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn lc(&self) -> Option<&C> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The coefficient of the monomial `1`.
    pub fn constant_coeff(&self) -> C {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| C::zero(self.ctx.coeff))
    }

    pub fn coeff_of(&self, m: &Monomial) -> C {
        self.terms
            .iter()
            .find(|(n, _)| n == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| C::zero(self.ctx.coeff))
    }

    pub fn with_order(&self, order: MonoOrder) -> Poly<C> {
        if order == self.ctx.order {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Poly {
            ctx: PolyCtx::new(self.ctx.coeff, order),
            terms,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: u32) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    pub fn max_var(&self) -> Option<u32> {
        self.terms.iter().filter_map(|(m, _)| m.max_var()).max()
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        self.terms
            .iter()
            .flat_map(|(m, _)| m.pairs().iter().map(|&(v, _)| v))
            .collect()
    }

    fn merge_with(&self, o: &Poly<C>, negate: bool) -> Poly<C> {
        debug_assert_eq!(self.ctx.order, o.ctx.order);
        let order = self.ctx.order;
        let (a, b) = (&self.terms, &o.terms);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let sign = |c: &C| if negate { c.neg() } else { c.clone() };
        while i < a.len() && j < b.len() {
            match order.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), sign(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { a[i].1.sub(&b[j].1) } else { a[i].1.add(&b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), sign(c))));
        Poly {
            ctx: self.ctx,
            terms: out,
        }
    }

    fn aligned(&self, o: &Poly<C>) -> Option<Poly<C>> {
        if o.ctx.order == self.ctx.order {
            None
        } else {
            Some(o.with_order(self.ctx.order))
        }
    }

    pub fn plus(&self, o: &Poly<C>) -> Poly<C> {
        match self.aligned(o) {
            Some(o) => self.merge_with(&o, false),
            None => self.merge_with(o, false),
        }
    }

    pub fn minus(&self, o: &Poly<C>) -> Poly<C> {
        match self.aligned(o) {
            Some(o) => self.merge_with(&o, true),
            None => self.merge_with(o, true),
        }
    }

    pub fn negated(&self) -> Poly<C> {
        Poly {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &C) -> Poly<C> {
        if c.is_zero() {
            return Poly::zero_in(self.ctx);
        }
        // Multiplying by a monomial preserves the order of the terms.
        let terms = self
            .terms
            .iter()
            .map(|(n, d)| (n.mul(m), d.mul(c)))
            .filter(|(_, d)| !d.is_zero())
            .collect();
        Poly { ctx: self.ctx, terms }
    }

    pub fn scale_by(&self, c: &C) -> Poly<C> {
        self.mul_term(&Monomial::one(), c)
    }

    pub fn times(&self, o: &Poly<C>) -> Poly<C> {
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return o.with_order(self.ctx.order).mul_term(m, c);
        }
        if o.terms.len() == 1 {
            let (m, c) = &o.terms[0];
            return self.mul_term(m, c);
        }
        let mut map: BTreeMap<Monomial, C> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (n, d) in &o.terms {
                let mn = m.mul(n);
                let cd = c.mul(d);
                match map.get_mut(&mn) {
                    Some(acc) => *acc = acc.add(&cd),
                    None => {
                        map.insert(mn, cd);
                    }
                }
            }
        }
        Poly::from_terms(self.ctx, map)
    }

    /// Coefficients with respect to `v`: entry `k` is the coefficient of `v^k` (free of `v`).
    pub fn coeffs_in(&self, v: u32) -> Vec<Poly<C>> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, C)>> = (0..=deg).map(|_| Vec::new()).collect();
        for (m, c) in &self.terms {
            buckets[m.exp(v) as usize].push((m.without(v), c.clone()));
        }
        // Removing one variable keeps the relative order of terms within a bucket.
        buckets
            .into_iter()
            .map(|terms| Poly { ctx: self.ctx, terms })
            .collect()
    }

    pub fn derivative(&self, v: u32) -> Poly<C> {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(v);
            if e == 0 {
                return None;
            }
            let mut pairs: Vec<(u32, u32)> = m.pairs().to_vec();
            for p in pairs.iter_mut() {
                if p.0 == v {
                    p.1 -= 1;
                }
            }
            Some((Monomial::from_pairs(pairs), c.mul(&C::from_i64(self.ctx.coeff, e as i64))))
        });
        Poly::from_terms(self.ctx, terms.collect::<Vec<_>>())
    }

    /// Evaluates the polynomial homomorphically into another ring.
    pub fn eval<R: Ring>(
        &self,
        rctx: R::Ctx,
        mut coeff: impl FnMut(&C) -> R,
        mut var: impl FnMut(u32) -> R,
    ) -> R {
        let mut cache: BTreeMap<u32, Vec<R>> = BTreeMap::new();
        let mut acc = R::zero(rctx);
        for (m, c) in &self.terms {
            let mut t = coeff(c);
            for &(v, e) in m.pairs() {
                let powers = cache.entry(v).or_insert_with(|| alloc::vec![R::one(rctx)]);
                if powers.len() == 1 {
                    powers.push(var(v));
                }
                while powers.len() <= e as usize {
                    let next = powers[powers.len() - 1].mul(&powers[1]);
                    powers.push(next);
                }
                t = t.mul(&powers[e as usize]);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Replaces each variable by a polynomial of the same ring.
    pub fn substitute(&self, f: &dyn Fn(u32) -> Poly<C>) -> Poly<C> {
        let ctx = self.ctx;
        self.eval(ctx, |c| Poly::constant(ctx, c.clone()), f)
    }

    pub fn map_coeffs<D: Ring>(&self, dctx: D::Ctx, f: impl Fn(&C) -> D) -> Poly<D> {
        let ctx = PolyCtx::new(dctx, self.ctx.order);
        let terms: Vec<(Monomial, D)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), f(c)))
            .filter(|(_, d)| !d.is_zero())
            .collect();
        Poly { ctx, terms }
    }

    pub fn remap_vars(&self, f: &dyn Fn(u32) -> u32) -> Poly<C> {
        Poly::from_terms(self.ctx, self.terms.iter().map(|(m, c)| (m.remap(f), c.clone())).collect::<Vec<_>>())
    }

    pub fn render(&self, names: &dyn Fn(u32) -> String, coeff: &dyn Fn(&C) -> CoeffText) -> String {
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let ct = coeff(c);
            if k == 0 {
                if ct.negative {
                    s.push('-');
                }
            } else {
                s.push_str(if ct.negative { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&ct.text);
            } else if ct.text == "1" {
                s.push_str(&m.render(names));
            } else {
                if ct.atomic {
                    s.push_str(&ct.text);
                } else {
                    let _ = write!(s, "({})", ct.text);
                }
                s.push('*');
                s.push_str(&m.render(names));
            }
        }
        s
    }
}

impl<C: Field> Poly<C> {
    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly<C> {
        match self.lc() {
            Some(c) if !c.is_one() => self.scale_by(&c.inv()),
            _ => self.clone(),
        }
    }
}

/// How a coefficient prints inside a term: sign split off, and whether it needs parentheses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffText {
    pub text: String,
    pub negative: bool,
    pub atomic: bool,
}

pub fn scalar_text(s: &Scalar) -> CoeffText {
    let negative = s.is_negative();
    let text = if negative { s.neg().to_literal() } else { s.to_literal() };
    CoeffText {
        text,
        negative,
        atomic: true,
    }
}

impl<C: Ring> Ring for Poly<C> {
    type Ctx = PolyCtx<C::Ctx>;

    fn ctx(&self) -> Self::Ctx {
        self.ctx
    }
    fn zero(ctx: Self::Ctx) -> Self {
        Poly::zero_in(ctx)
    }
    fn one(ctx: Self::Ctx) -> Self {
        Poly::constant(ctx, C::one(ctx.coeff))
    }
    fn from_scalar(ctx: Self::Ctx, s: &Scalar) -> Self {
        Poly::constant(ctx, C::from_scalar(ctx.coeff, s))
    }
    fn characteristic(ctx: Self::Ctx) -> Characteristic {
        C::characteristic(ctx.coeff)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }
    fn add(&self, o: &Self) -> Self {
        self.plus(o)
    }
    fn sub(&self, o: &Self) -> Self {
        self.minus(o)
    }
    fn mul(&self, o: &Self) -> Self {
        self.times(o)
    }
    fn neg(&self) -> Self {
        self.negated()
    }
    fn try_inv(&self) -> Option<Self> {
        if self.terms.len() == 1 && self.terms[0].0.is_one() {
            self.terms[0].1.try_inv().map(|c| Poly::constant(self.ctx, c))
        } else {
            None
        }
    }
}
