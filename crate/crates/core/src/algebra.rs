//! Finite dimensional local algebras with ranked bases and arithmetic in `D(R) = D ⊗ R`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::ring::{Field, Ring};
use crate::scalar::{Characteristic, Scalar};

/// Unvalidated algebra data: `products` lists `(p, q, [(i, α_i^{pq})])`, zeros may be omitted.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraSpec {
    pub characteristic: Characteristic,
    pub m: usize,
    pub grades: Vec<u32>,
    pub products: Vec<(usize, usize, Vec<(usize, Scalar)>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("malformed algebra table: {0}")]
    Shape(alloc::string::String),
    #[error("ASSOC_FAIL: (e{p} e{q}) e{r} != e{p} (e{q} e{r})")]
    AssocFail { p: usize, q: usize, r: usize },
    #[error("ASSOC_FAIL: multiplication not commutative, e{p} e{q} != e{q} e{p}")]
    CommFail { p: usize, q: usize },
    #[error("NOT_LOCAL: {0}")]
    NotLocal(alloc::string::String),
    #[error("RANK_FAIL: alpha_{i}^({p},{q}) != 0 with grade({p}) + grade({q}) > grade({i})")]
    RankFail { i: usize, p: usize, q: usize },
    #[error("RANK_FAIL: basis element e{p} declared of grade {declared} but the filtration gives {actual}")]
    GradeMismatch { p: usize, declared: u32, actual: u32 },
}

impl AlgebraError {
    pub fn code(&self) -> &'static str {
        match self {
            AlgebraError::Shape(_) => "PARSE_ERROR",
            AlgebraError::AssocFail { .. } | AlgebraError::CommFail { .. } => "ASSOC_FAIL",
            AlgebraError::NotLocal(_) => "NOT_LOCAL",
            AlgebraError::RankFail { .. } | AlgebraError::GradeMismatch { .. } => "RANK_FAIL",
        }
    }
}

/// A validated local algebra. Basis `ε_0 = 1, ε_1..ε_m` with `ε_1..ε_m` spanning the maximal ideal.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalAlgebra {
    characteristic: Characteristic,
    m: usize,
    grades: Vec<u32>,
    // products[p-1][q-1] = nonzero (i, α_i^{pq}) sorted by i
    products: Vec<Vec<Vec<(usize, Scalar)>>>,
    d: u32,
}

/// An element of `D(R)`: coordinates `a_0..a_m` in the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DVector<R> {
    pub coords: Vec<R>,
}

impl<R: Ring> DVector<R> {
    pub fn coord(&self, i: usize) -> &R {
        &self.coords[i]
    }

    pub fn add(&self, o: &DVector<R>) -> DVector<R> {
        DVector {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &DVector<R>) -> DVector<R> {
        DVector {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &R) -> DVector<R> {
        DVector {
            coords: self.coords.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn map<S>(&self, f: impl Fn(&R) -> S) -> DVector<S> {
        DVector {
            coords: self.coords.iter().map(f).collect(),
        }
    }
}

impl LocalAlgebra {
    pub fn validate(spec: &AlgebraSpec) -> Result<LocalAlgebra, AlgebraError> {
        let m = spec.m;
        let shape = |s: alloc::string::String| Err(AlgebraError::Shape(s));
        if spec.grades.len() != m {
            return shape(alloc::format!("expected {} grades, found {}", m, spec.grades.len()));
        }
        for k in 0..m {
            if spec.grades[k] == 0 {
                return shape(alloc::format!("grade of e{} must be positive", k + 1));
            }
            if k > 0 && spec.grades[k] < spec.grades[k - 1] {
                return shape(alloc::format!("grades must be non-decreasing (e{} < e{})", k + 1, k));
            }
        }
        let mut products: Vec<Vec<BTreeMap<usize, Scalar>>> = (0..m).map(|_| (0..m).map(|_| BTreeMap::new()).collect()).collect();
        let mut seen = BTreeMap::new();
        for (p, q, coeffs) in &spec.products {
            let (p, q) = (*p, *q);
            if p == 0 || q == 0 || p > m || q > m {
                return shape(alloc::format!("product index ({},{}) outside 1..{}", p, q, m));
            }
            if seen.insert((p, q), ()).is_some() {
                return shape(alloc::format!("product ({},{}) listed twice", p, q));
            }
            for (i, c) in coeffs {
                if *i > m {
                    return shape(alloc::format!("target index {} outside 0..{}", i, m));
                }
                if c.characteristic() != spec.characteristic {
                    return shape(alloc::format!("coefficient {} has the wrong characteristic", c));
                }
                if c.is_zero() {
                    continue;
                }
                if *i == 0 {
                    return Err(AlgebraError::NotLocal(alloc::format!(
                        "e{} e{} has a nonzero unit coordinate, so the span of e1..em is not an ideal",
                        p, q
                    )));
                }
                products[p - 1][q - 1].insert(*i, c.clone());
            }
        }
        let mut alg = LocalAlgebra {
            characteristic: spec.characteristic,
            m,
            grades: spec.grades.clone(),
            products: products
                .into_iter()
                .map(|row| row.into_iter().map(|cell| cell.into_iter().collect()).collect())
                .collect(),
            d: 0,
        };
        for p in 1..=m {
            for q in 1..p {
                if alg.products[p - 1][q - 1] != alg.products[q - 1][p - 1] {
                    return Err(AlgebraError::CommFail { p: q, q: p });
                }
            }
        }
        // sparse (e_p e_q) e_r against e_p (e_q e_r)
        let times = |x: &[(usize, Scalar)], r: usize, left: bool| -> BTreeMap<usize, Scalar> {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (i, a) in x {
                let cell = if left { &alg.products[i - 1][r - 1] } else { &alg.products[r - 1][i - 1] };
                for (k, b) in cell {
                    let e = acc.entry(*k).or_insert_with(|| Scalar::zero(spec.characteristic));
                    *e = e.add(&a.mul(b));
                }
            }
            acc.retain(|_, v| !v.is_zero());
            acc
        };
        for p in 1..=m {
            for q in 1..=m {
                for r in 1..=m {
                    let lhs = times(&alg.products[p - 1][q - 1], r, true);
                    let rhs = times(&alg.products[q - 1][r - 1], p, false);
                    if lhs != rhs {
                        return Err(AlgebraError::AssocFail { p, q, r });
                    }
                }
            }
        }
        let powers = alg.ideal_powers()?;
        alg.d = powers.len() as u32;
        for i in 1..=m {
            for p in 1..=m {
                for q in 1..=m {
                    if !alg.alpha(i, p, q).is_zero() && alg.grade(p) + alg.grade(q) > alg.grade(i) {
                        return Err(AlgebraError::RankFail { i, p, q });
                    }
                }
            }
        }
        // m^k must be the span of the basis vectors of grade >= k.
        for p in 1..=m {
            let actual = powers
                .iter()
                .enumerate()
                .filter(|(_, span)| span.iter().any(|v| !v[p].is_zero()))
                .map(|(k, _)| k as u32 + 1)
                .max()
                .unwrap_or(0);
            if actual != alg.grade(p) {
                return Err(AlgebraError::GradeMismatch {
                    p,
                    declared: alg.grade(p),
                    actual,
                });
            }
        }
        for (k, span) in powers.iter().enumerate() {
            let expected = (1..=m).filter(|&p| alg.grade(p) > k as u32).count();
            if span.len() != expected {
                return Err(AlgebraError::GradeMismatch {
                    p: (1..=m).find(|&p| alg.grade(p) == k as u32 + 1).unwrap_or(1),
                    declared: k as u32 + 1,
                    actual: k as u32,
                });
            }
        }
        Ok(alg)
    }

    // Echelon bases of m, m^2, ... until the zero ideal.
    fn ideal_powers(&self) -> Result<Vec<Vec<Vec<Scalar>>>, AlgebraError> {
        let c = self.characteristic;
        let unit = |i: usize| -> Vec<Scalar> { (0..=self.m).map(|k| Scalar::from_i64(c, (k == i) as i64)).collect() };
        let mut powers: Vec<Vec<Vec<Scalar>>> = Vec::new();
        let mut current: Vec<Vec<Scalar>> = echelon((1..=self.m).map(unit).collect());
        while !current.is_empty() {
            if powers.len() > self.m {
                return Err(AlgebraError::NotLocal(alloc::string::String::from(
                    "the span of e1..em is not nilpotent",
                )));
            }
            if powers.last().is_some_and(|prev| prev.len() == current.len()) {
                return Err(AlgebraError::NotLocal(alloc::string::String::from(
                    "the span of e1..em is not nilpotent",
                )));
            }
            powers.push(current.clone());
            let mut next = Vec::new();
            for v in &current {
                for q in 1..=self.m {
                    let prod = self.mul(&DVector { coords: v.clone() }, &self.basis(q));
                    next.push(prod.coords);
                }
            }
            current = echelon(next);
        }
        Ok(powers)
    }

    pub fn characteristic(&self) -> Characteristic {
        self.characteristic
    }

    /// Dimension minus one.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.m + 1
    }

    /// σ(p) for 1 ≤ p ≤ m, and σ(0) = 0.
    pub fn grade(&self, p: usize) -> u32 {
        if p == 0 {
            0
        } else {
            self.grades[p - 1]
        }
    }

    pub fn grades(&self) -> &[u32] {
        &self.grades
    }

    /// Nilpotency index: m^d ≠ 0 and m^{d+1} = 0.
    pub fn nilpotency(&self) -> u32 {
        self.d
    }

    /// Breakpoints D_{-1} = 0, D_j = number of basis elements of grade ≤ j (ε_0 included).
    pub fn breakpoints(&self) -> Vec<usize> {
        let mut out = alloc::vec![0usize];
        for j in 0..=self.d {
            out.push(1 + (1..=self.m).filter(|&p| self.grade(p) <= j).count());
        }
        out
    }

    pub fn alpha(&self, i: usize, p: usize, q: usize) -> Scalar {
        if p == 0 || q == 0 {
            let other = if p == 0 { q } else { p };
            return Scalar::from_i64(self.characteristic, (i == other) as i64);
        }
        self.products[p - 1][q - 1]
            .iter()
            .find(|(j, _)| *j == i)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| Scalar::zero(self.characteristic))
    }

    /// Nonzero `(i, α_i^{pq})` for `p, q ≥ 1`.
    pub fn product(&self, p: usize, q: usize) -> &[(usize, Scalar)] {
        &self.products[p - 1][q - 1]
    }

    /// All `(i, p, q, α)` with nonzero α and `p, q ≥ 1`.
    pub fn nonzero_alphas(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let mut out = Vec::new();
        for p in 1..=self.m {
            for q in 1..=self.m {
                for (i, c) in self.product(p, q) {
                    out.push((*i, p, q, c.clone()));
                }
            }
        }
        out.sort_by_key(|a| (a.0, a.1, a.2));
        out
    }

    pub fn basis(&self, i: usize) -> DVector<Scalar> {
        DVector {
            coords: (0..=self.m)
                .map(|k| Scalar::from_i64(self.characteristic, (k == i) as i64))
                .collect(),
        }
    }

    pub fn one<R: Ring>(&self, ctx: R::Ctx) -> DVector<R> {
        self.embed(R::one(ctx))
    }

    /// `x ↦ 1 ⊗ x`, the trivial (ι) embedding.
    pub fn embed<R: Ring>(&self, x: R) -> DVector<R> {
        let ctx = x.ctx();
        let mut coords = alloc::vec![x];
        coords.extend((0..self.m).map(|_| R::zero(ctx)));
        DVector { coords }
    }

    pub fn mul<R: Ring>(&self, a: &DVector<R>, b: &DVector<R>) -> DVector<R> {
        debug_assert_eq!(a.coords.len(), self.m + 1);
        let ctx = a.coords[0].ctx();
        let mut c: Vec<R> = Vec::with_capacity(self.m + 1);
        c.push(a.coords[0].mul(&b.coords[0]));
        for i in 1..=self.m {
            c.push(a.coords[0].mul(&b.coords[i]).add(&a.coords[i].mul(&b.coords[0])));
        }
        for p in 1..=self.m {
            if a.coords[p].is_zero() {
                continue;
            }
            for q in 1..=self.m {
                if b.coords[q].is_zero() {
                    continue;
                }
                let cell = &self.products[p - 1][q - 1];
                if cell.is_empty() {
                    continue;
                }
                let apbq = a.coords[p].mul(&b.coords[q]);
                for (i, alpha) in cell {
                    let term = if alpha.is_one() { apbq.clone() } else { apbq.mul(&R::from_scalar(ctx, alpha)) };
                    c[*i] = c[*i].add(&term);
                }
            }
        }
        DVector { coords: c }
    }

    pub fn pow<R: Ring>(&self, a: &DVector<R>, e: u32) -> DVector<R> {
        let mut acc = self.one(a.coords[0].ctx());
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Inverse via `a_0^{-1} Σ_{j ≤ d} (-n)^j` with `n` the nilpotent part scaled by `a_0^{-1}`.
    pub fn invert<R: Ring>(&self, a: &DVector<R>) -> Result<DVector<R>, NotUnit> {
        let a0inv = a.coords[0].try_inv().ok_or(NotUnit)?;
        let ctx = a0inv.ctx();
        let mut minus_n = a.scale(&a0inv.neg());
        minus_n.coords[0] = R::zero(ctx);
        let mut sum = self.one(ctx);
        let mut term = self.one(ctx);
        for _ in 0..self.d {
            term = self.mul(&term, &minus_n);
            sum = sum.add(&term);
        }
        Ok(sum.scale(&a0inv))
    }

    /// `{q : α_i^{pq} = 0 for all i, p}`.
    pub fn null_set(&self) -> Vec<usize> {
        (1..=self.m)
            .filter(|&q| (1..=self.m).all(|p| self.product(p, q).is_empty()))
            .collect()
    }

    /// supp(i) = supp¹(i) ∪ ... ∪ supp^{σ(i)}(i), iterating supp¹ on the previous layer.
    pub fn support(&self, i: usize) -> Vec<usize> {
        let supp1 = |k: usize| -> Vec<usize> {
            (1..=self.m)
                .filter(|&q| (1..=self.m).any(|p| !self.alpha(k, p, q).is_zero()))
                .collect()
        };
        let mut all: Vec<usize> = Vec::new();
        let mut layer = alloc::vec![i];
        for _ in 0..self.grade(i) {
            let mut next: Vec<usize> = Vec::new();
            for k in layer {
                for q in supp1(k) {
                    if !next.contains(&q) {
                        next.push(q);
                    }
                }
            }
            for q in &next {
                if !all.contains(q) {
                    all.push(*q);
                }
            }
            layer = next;
        }
        all.sort_unstable();
        all
    }

    /// First basis element of the maximal ideal whose p-th power is nonzero (char p only).
    pub fn frobenius_witness(&self) -> Option<usize> {
        let p = self.characteristic.value();
        if p == 0 {
            return None;
        }
        (1..=self.m).find(|&q| self.pow(&self.basis(q), p as u32).coords.iter().any(|c| !c.is_zero()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("NOT_UNIT: residue of the element is zero")]
pub struct NotUnit;

fn echelon(rows: Vec<Vec<Scalar>>) -> Vec<Vec<Scalar>> {
    let mut rows: Vec<Vec<Scalar>> = rows.into_iter().filter(|r| r.iter().any(|c| !c.is_zero())).collect();
    let mut out: Vec<Vec<Scalar>> = Vec::new();
    let width = rows.first().map(|r| r.len()).unwrap_or(0);
    for col in 0..width {
        let Some(k) = rows.iter().position(|r| !r[col].is_zero()) else {
            continue;
        };
        let pivot = rows.remove(k);
        let inv = pivot[col].inv().expect("nonzero pivot");
        let pivot: Vec<Scalar> = pivot.iter().map(|c| c.mul(&inv)).collect();
        for r in rows.iter_mut() {
            if !r[col].is_zero() {
                let f = r[col].clone();
                for (x, y) in r.iter_mut().zip(&pivot) {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        rows.retain(|r| r.iter().any(|c| !c.is_zero()));
        out.push(pivot);
    }
    out
}

/// Verdict of the Frobenius assumption check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrobeniusVerdict {
    Pass,
    /// `u` is 1 or 2, `index` the basis element with nonzero p-th power.
    Fail { u: u8, index: usize },
}

impl fmt::Display for FrobeniusVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrobeniusVerdict::Pass => write!(f, "PASS"),
            FrobeniusVerdict::Fail { u, index } => {
                write!(f, "FAIL: e{} of algebra {} has nonzero p-th power", index, u)
            }
        }
    }
}

/// PASS if char 0 or dim D1 = 1; otherwise every basis element of each maximal ideal must have p-th power 0.
pub fn frobenius_assumption(d1: &LocalAlgebra, d2: Option<&LocalAlgebra>) -> FrobeniusVerdict {
    if d1.characteristic().is_zero() || d1.dim() == 1 {
        return FrobeniusVerdict::Pass;
    }
    if let Some(index) = d1.frobenius_witness() {
        return FrobeniusVerdict::Fail { u: 1, index };
    }
    if let Some(index) = d2.and_then(|d| d.frobenius_witness()) {
        return FrobeniusVerdict::Fail { u: 2, index };
    }
    FrobeniusVerdict::Pass
}

/// `D1 ⊗ D2` with basis ordered by total grade then lexicographically; `pairs[k]` is the
/// `(i, j)` of basis element `k` (`pairs[0] = (0, 0)`).
#[derive(Clone, Debug, PartialEq)]
pub struct TensorAlgebra {
    pub algebra: LocalAlgebra,
    pub pairs: Vec<(usize, usize)>,
}

impl TensorAlgebra {
    pub fn index_of(&self, i: usize, j: usize) -> usize {
        self.pairs.iter().position(|&p| p == (i, j)).expect("pair in range")
    }
}

pub fn tensor(d1: &LocalAlgebra, d2: &LocalAlgebra) -> Result<TensorAlgebra, AlgebraError> {
    assert_eq!(d1.characteristic(), d2.characteristic(), "tensor of algebras over different fields");
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..=d1.m() {
        for j in 0..=d2.m() {
            pairs.push((i, j));
        }
    }
    pairs.sort_by_key(|&(i, j)| (d1.grade(i) + d2.grade(j), i, j));
    let pos: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut products = Vec::new();
    for a in 1..pairs.len() {
        for b in 1..pairs.len() {
            let (i, j) = pairs[a];
            let (k, l) = pairs[b];
            let mut coeffs: BTreeMap<usize, Scalar> = BTreeMap::new();
            for x in 0..=d1.m() {
                let ax = d1.alpha(x, i, k);
                if ax.is_zero() {
                    continue;
                }
                for y in 0..=d2.m() {
                    let by = d2.alpha(y, j, l);
                    if by.is_zero() {
                        continue;
                    }
                    let t = pos[&(x, y)];
                    let v = ax.mul(&by);
                    let e = coeffs.entry(t).or_insert_with(|| Scalar::zero(d1.characteristic()));
                    *e = e.add(&v);
                }
            }
            let coeffs: Vec<(usize, Scalar)> = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if !coeffs.is_empty() {
                products.push((a, b, coeffs));
            }
        }
    }
    let spec = AlgebraSpec {
        characteristic: d1.characteristic(),
        m: pairs.len() - 1,
        grades: pairs[1..].iter().map(|&(i, j)| d1.grade(i) + d2.grade(j)).collect(),
        products,
    };
    Ok(TensorAlgebra {
        algebra: LocalAlgebra::validate(&spec)?,
        pairs,
    })
}

/// `k[ε_1..ε_m]/(ε)^2`, the algebra of `m` derivations.
pub fn derivations(c: Characteristic, m: usize) -> LocalAlgebra {
    LocalAlgebra::validate(&AlgebraSpec {
        characteristic: c,
        m,
        grades: alloc::vec![1; m],
        products: Vec::new(),
    })
    .expect("dual numbers are local")
}

/// `k[ε]/(ε^{m+1})` with basis `ε^1..ε^m` (truncated power series).
pub fn truncated(c: Characteristic, m: usize) -> LocalAlgebra {
    let mut products = Vec::new();
    for p in 1..=m {
        for q in 1..=m {
            if p + q <= m {
                products.push((p, q, alloc::vec![(p + q, Scalar::one(c))]));
            }
        }
    }
    LocalAlgebra::validate(&AlgebraSpec {
        characteristic: c,
        m,
        grades: (1..=m as u32).collect(),
        products,
    })
    .expect("truncated polynomial algebras are local")
}

/// The one dimensional algebra `k`.
pub fn trivial(c: Characteristic) -> LocalAlgebra {
    derivations(c, 0)
}

/// Extract a field inverse helper for DVectors over fields.
pub fn invert_field<R: Field>(alg: &LocalAlgebra, a: &DVector<R>) -> Result<DVector<R>, NotUnit> {
    alg.invert(a)
}

/// Context of [`DElem`]: the algebra plus the context of the coefficient ring.
#[derive(Clone, Copy, Debug)]
pub struct DCtx<'a, X> {
    pub alg: &'a LocalAlgebra,
    pub inner: X,
}

impl<X: PartialEq> PartialEq for DCtx<'_, X> {
    fn eq(&self, o: &Self) -> bool {
        core::ptr::eq(self.alg, o.alg) && self.inner == o.inner
    }
}

/// `D(R)` as a [`Ring`], so polynomials can be evaluated into it.
#[derive(Clone, Debug)]
pub struct DElem<'a, R: Ring> {
    pub alg: &'a LocalAlgebra,
    pub v: DVector<R>,
}

impl<R: Ring> PartialEq for DElem<'_, R> {
    fn eq(&self, o: &Self) -> bool {
        self.v == o.v
    }
}

impl<'a, R: Ring> DElem<'a, R> {
    pub fn new(alg: &'a LocalAlgebra, v: DVector<R>) -> Self {
        DElem { alg, v }
    }
}

impl<'a, R: Ring> Ring for DElem<'a, R> {
    type Ctx = DCtx<'a, R::Ctx>;

    fn ctx(&self) -> Self::Ctx {
        DCtx { alg: self.alg, inner: self.v.coords[0].ctx() }
    }
    fn zero(ctx: Self::Ctx) -> Self {
        DElem::new(ctx.alg, ctx.alg.embed(R::zero(ctx.inner)))
    }
    fn one(ctx: Self::Ctx) -> Self {
        DElem::new(ctx.alg, ctx.alg.embed(R::one(ctx.inner)))
    }
    fn from_scalar(ctx: Self::Ctx, s: &Scalar) -> Self {
        DElem::new(ctx.alg, ctx.alg.embed(R::from_scalar(ctx.inner, s)))
    }
    fn characteristic(ctx: Self::Ctx) -> Characteristic {
        R::characteristic(ctx.inner)
    }
    fn is_zero(&self) -> bool {
        self.v.coords.iter().all(|c| c.is_zero())
    }
    fn is_one(&self) -> bool {
        self.v.coords[0].is_one() && self.v.coords[1..].iter().all(|c| c.is_zero())
    }
    fn add(&self, o: &Self) -> Self {
        DElem::new(self.alg, self.v.add(&o.v))
    }
    fn sub(&self, o: &Self) -> Self {
        DElem::new(self.alg, self.v.sub(&o.v))
    }
    fn mul(&self, o: &Self) -> Self {
        DElem::new(self.alg, self.alg.mul(&self.v, &o.v))
    }
    fn neg(&self) -> Self {
        DElem::new(self.alg, self.v.map(|c| c.neg()))
    }
    fn try_inv(&self) -> Option<Self> {
        self.alg.invert(&self.v).ok().map(|v| DElem::new(self.alg, v))
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    const Q: Characteristic = Characteristic::ZERO;

    fn s(n: i64) -> Scalar {
        Scalar::from_i64(Q, n)
    }

    #[test]
    fn dual_numbers_accept() {
        let d = derivations(Q, 1);
        assert_eq!(d.nilpotency(), 1);
        let a = DVector { coords: alloc::vec![s(2), s(3)] };
        let b = DVector { coords: alloc::vec![s(5), s(7)] };
        assert_eq!(d.mul(&a, &b).coords, alloc::vec![s(10), s(29)]);
    }

    #[test]
    fn idempotent_not_local() {
        let spec = AlgebraSpec {
            characteristic: Q,
            m: 1,
            grades: alloc::vec![1],
            products: alloc::vec![(1, 1, alloc::vec![(1, s(1))])],
        };
        assert!(matches!(LocalAlgebra::validate(&spec), Err(AlgebraError::NotLocal(_))));
    }

    #[test]
    fn misgraded_cube() {
        let spec = AlgebraSpec {
            characteristic: Q,
            m: 2,
            grades: alloc::vec![1, 1],
            products: alloc::vec![(1, 1, alloc::vec![(2, s(1))])],
        };
        assert_eq!(LocalAlgebra::validate(&spec), Err(AlgebraError::RankFail { i: 2, p: 1, q: 1 }));
    }

    #[test]
    fn grade_too_high_is_caught() {
        let spec = AlgebraSpec {
            characteristic: Q,
            m: 1,
            grades: alloc::vec![2],
            products: Vec::new(),
        };
        assert!(matches!(LocalAlgebra::validate(&spec), Err(AlgebraError::GradeMismatch { p: 1, .. })));
    }

    #[test]
    fn non_associative_table() {
        // e1 e1 = e2, e1 e2 = 0 but e2 e1 = e3 would break commutativity; instead
        // e1 e1 = e2, e2 e1 = e1 e2 = e3, e1 e3 = 0, e3 e1 = 0 with e1 e1 e1 paths agreeing is associative,
        // so break it with e1 e2 = e3 and e2 e2 = e3 (grade-consistent) but (e1 e1) e2 = e3 != e1 (e1 e2) = 0.
        let spec = AlgebraSpec {
            characteristic: Q,
            m: 3,
            grades: alloc::vec![1, 2, 3],
            products: alloc::vec![
                (1, 1, alloc::vec![(2, s(1))]),
                (1, 2, alloc::vec![(3, s(1))]),
                (2, 1, alloc::vec![(3, s(1))]),
                (2, 2, alloc::vec![(3, s(1))]),
            ],
        };
        assert!(matches!(LocalAlgebra::validate(&spec), Err(AlgebraError::AssocFail { .. })));
    }

    #[test]
    fn cube_products_and_inverse() {
        let d = truncated(Q, 2);
        let e = d.basis(1);
        assert_eq!(d.mul(&e, &e), d.basis(2));
        let a = DVector { coords: alloc::vec![s(2), s(1), s(0)] };
        let inv = d.invert(&a).unwrap();
        assert_eq!(d.mul(&a, &inv), d.one(Q));
        assert!(d.invert(&d.basis(1)).is_err());
    }

    #[test]
    fn null_and_support() {
        assert_eq!(derivations(Q, 3).null_set(), alloc::vec![1, 2, 3]);
        assert_eq!(truncated(Q, 2).null_set(), alloc::vec![2]);
        assert_eq!(truncated(Q, 3).null_set(), alloc::vec![3]);
        assert!(truncated(Q, 3).support(1).is_empty());
        assert_eq!(truncated(Q, 2).support(2), alloc::vec![1]);
        assert_eq!(truncated(Q, 3).support(3), alloc::vec![1, 2]);
    }

    #[test]
    fn frobenius() {
        let f2 = Characteristic::new(2).unwrap();
        assert_eq!(frobenius_assumption(&truncated(Q, 2), None), FrobeniusVerdict::Pass);
        assert_eq!(frobenius_assumption(&truncated(f2, 1), Some(&truncated(f2, 1))), FrobeniusVerdict::Pass);
        assert_eq!(frobenius_assumption(&truncated(f2, 2), None), FrobeniusVerdict::Fail { u: 1, index: 1 });
    }

    #[test]
    fn tensor_shapes() {
        let f2 = Characteristic::new(2).unwrap();
        let t = tensor(&truncated(f2, 1), &truncated(f2, 1)).unwrap();
        assert_eq!(t.algebra.dim(), 4);
        let a = t.algebra.basis(t.index_of(1, 0));
        let b = t.algebra.basis(t.index_of(0, 1));
        assert_eq!(t.algebra.mul(&a, &b), t.algebra.basis(t.index_of(1, 1)));
        assert!(t.algebra.mul(&a, &a).coords.iter().all(|c| c.is_zero()));
        let u = tensor(&derivations(Q, 1), &derivations(Q, 1)).unwrap();
        assert_eq!(u.algebra.nilpotency(), 2);
        assert_eq!(u.algebra.grade(u.index_of(1, 1)), 2);
    }
}
