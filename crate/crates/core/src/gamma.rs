//! LHS commutation systems as coefficient tensors and their validators.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{tensor, trivial, AlgebraError, DVector, LocalAlgebra};
use crate::frac::{rf_ctx, rf_int, rf_scalar, RatFunc};
use crate::index::{OpIndex, OpSet};
use crate::ring::Ring;
use crate::scalar::{Characteristic, Scalar};

/// The pair `(D1, D2)`. A system without HS part has `hs = None`; a pure HS system uses `lie = k`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorAlgebras {
    pub lie: LocalAlgebra,
    pub hs: Option<LocalAlgebra>,
}

impl OperatorAlgebras {
    pub fn new(lie: LocalAlgebra, hs: Option<LocalAlgebra>) -> Result<OperatorAlgebras, GammaError> {
        if let Some(h) = &hs {
            if h.characteristic() != lie.characteristic() {
                return Err(GammaError::Invalid("D1 and D2 have different characteristics".into()));
            }
        }
        Ok(OperatorAlgebras { lie, hs })
    }

    pub fn pure_hs(hs: LocalAlgebra) -> OperatorAlgebras {
        OperatorAlgebras { lie: trivial(hs.characteristic()), hs: Some(hs) }
    }

    pub fn characteristic(&self) -> Characteristic {
        self.lie.characteristic()
    }

    pub fn opset(&self) -> OpSet {
        OpSet { m1: self.lie.m(), m2: self.hs.as_ref().map_or(0, |h| h.m()) }
    }

    pub fn algebra(&self, u: u8) -> Option<&LocalAlgebra> {
        match u {
            1 => Some(&self.lie),
            _ => self.hs.as_ref(),
        }
    }

    /// α_i^{pq}, zero across types.
    pub fn alpha(&self, i: OpIndex, p: OpIndex, q: OpIndex) -> Scalar {
        if !(i.same_type(p) && i.same_type(q)) {
            return Scalar::zero(self.characteristic());
        }
        match self.algebra(i.u) {
            Some(a) => a.alpha(i.i, p.i, q.i),
            None => Scalar::zero(self.characteristic()),
        }
    }

    /// Nonzero `(p, q, α_i^{pq})` for a fixed `i`.
    pub fn alphas_of(&self, i: OpIndex) -> Vec<(OpIndex, OpIndex, Scalar)> {
        let Some(a) = self.algebra(i.u) else { return Vec::new() };
        let mk = |k| OpIndex { u: i.u, i: k };
        let mut out = Vec::new();
        for p in 1..=a.m() {
            for q in 1..=a.m() {
                let x = a.alpha(i.i, p, q);
                if !x.is_zero() {
                    out.push((mk(p), mk(q), x));
                }
            }
        }
        out
    }
}

/// Sparse `c_ℓ^{ij}` keyed by `(i, j, ℓ)`; zeros are never stored.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CoeffTensor {
    entries: BTreeMap<(usize, usize, usize), RatFunc>,
}

impl CoeffTensor {
    pub fn new() -> CoeffTensor {
        CoeffTensor::default()
    }

    pub fn from_entries(it: impl IntoIterator<Item = ((usize, usize, usize), RatFunc)>) -> CoeffTensor {
        let mut t = CoeffTensor::new();
        for ((i, j, l), c) in it {
            t.set(l, i, j, c);
        }
        t
    }

    pub fn set(&mut self, l: usize, i: usize, j: usize, c: RatFunc) {
        if c.is_zero() {
            self.entries.remove(&(i, j, l));
        } else {
            self.entries.insert((i, j, l), c);
        }
    }

    pub fn get(&self, l: usize, i: usize, j: usize) -> Option<&RatFunc> {
        self.entries.get(&(i, j, l))
    }

    /// `(i, j, ℓ) → c_ℓ^{ij}` in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &RatFunc)> {
        self.entries.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_index(&self) -> usize {
        self.entries.keys().map(|&(i, j, l)| i.max(j).max(l)).max().unwrap_or(0)
    }
}

/// How operators act on coefficients: `∂_op(c)`.
pub trait Partials {
    fn partial(&self, op: OpIndex, c: &RatFunc) -> RatFunc;
}

/// The trivial action ι: every coefficient is a constant.
#[derive(Clone, Copy, Debug)]
pub struct ConstantCoeffs(pub Characteristic);

impl Partials for ConstantCoeffs {
    fn partial(&self, _op: OpIndex, _c: &RatFunc) -> RatFunc {
        RatFunc::zero(rf_ctx(self.0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GammaError {
    #[error("invalid commutation system: {0}")]
    Invalid(String),
    #[error("invalid commutation system: Lie coefficient c_{l}^({i},{j}) is nonzero but {bad} is not in Null(D1)")]
    NotLieType { l: usize, i: usize, j: usize, bad: usize },
    #[error("invalid commutation system: HS coefficients require positive characteristic")]
    HsInCharZero,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The first violated identity, with its index tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GammaFailure {
    /// `r(ε_p) r(ε_q) ≠ r(ε_p ε_q)`.
    Hom { which: u8, p: usize, q: usize },
    /// Skew symmetry (or a nonzero diagonal) of `(c_ℓ^{ij})`.
    Skew { l: usize, i: usize, j: usize },
    Jacobi { i: usize, j: usize, k: usize, r: usize },
    JacobiDerivDiag { i: usize, j: usize, k: usize, r: usize },
    JacobiDerivPair { i: usize, j: usize, k: usize, q: usize, r: usize },
    Assoc { i: usize, j: usize, k: usize, r: usize },
    /// `∂_{u,k}(c_{v,r}^{ij}) ≠ 0` for `u ≠ v`.
    Cross { u: u8, k: usize, v: u8, r: usize, i: usize, j: usize },
}

impl fmt::Display for GammaFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaFailure::Hom { which, p, q } => {
                write!(f, "HOM_FAIL: r{which}(e{p}) r{which}(e{q}) != r{which}(e{p} e{q})")
            }
            GammaFailure::Skew { l, i, j } => write!(f, "JACOBI_FAIL(1): c_{l}^({i},{j}) is not skew-symmetric"),
            GammaFailure::Jacobi { i, j, k, r } => write!(f, "JACOBI_FAIL(2) at (i,j,k,r)=({i},{j},{k},{r})"),
            GammaFailure::JacobiDerivDiag { i, j, k, r } => {
                write!(f, "JACOBI_FAIL(3) at (i,j,k,r)=({i},{j},{k},{r})")
            }
            GammaFailure::JacobiDerivPair { i, j, k, q, r } => {
                write!(f, "JACOBI_FAIL(3) at (i,j,k,q,r)=({i},{j},{k},{q},{r})")
            }
            GammaFailure::Assoc { i, j, k, r } => write!(f, "ASSOC_FAIL at (i,j,k,r)=({i},{j},{k},{r})"),
            GammaFailure::Cross { u, k, v, r, i, j } => {
                write!(f, "CROSS_FAIL: d_({u},{k}) c_({v},{r})^({i},{j}) != 0")
            }
        }
    }
}

impl GammaFailure {
    pub fn code(&self) -> &'static str {
        match self {
            GammaFailure::Hom { .. } => "HOM_FAIL",
            GammaFailure::Skew { .. }
            | GammaFailure::Jacobi { .. }
            | GammaFailure::JacobiDerivDiag { .. }
            | GammaFailure::JacobiDerivPair { .. } => "JACOBI_FAIL",
            GammaFailure::Assoc { .. } => "ASSOC_FAIL",
            GammaFailure::Cross { .. } => "CROSS_FAIL",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomKind {
    Lie,
    Hs,
}

/// One homomorphism `r: D → D ⊗ D(F)` given by its coefficient tensor.
#[derive(Clone, Debug)]
pub struct CommutationMap<'a> {
    pub algebra: &'a LocalAlgebra,
    pub kind: HomKind,
    pub coeffs: &'a CoeffTensor,
}

impl CommutationMap<'_> {
    /// Checks `r(ε_p) r(ε_q) = Σ_i α_i^{pq} r(ε_i)` for all `p, q ≥ 1`.
    pub fn check_hom(&self) -> Result<(), (usize, usize)> {
        let d = self.algebra;
        let c = d.characteristic();
        let tt = tensor(d, d).expect("tensor square of a valid algebra");
        let zero = rf_int(c, 0);
        let image = |l: usize| -> DVector<RatFunc> {
            let mut v = DVector { coords: alloc::vec![zero.clone(); tt.pairs.len()] };
            if l == 0 {
                v.coords[0] = rf_int(c, 1);
                return v;
            }
            v.coords[tt.index_of(0, l)] = rf_int(c, 1);
            if self.kind == HomKind::Hs {
                v.coords[tt.index_of(l, 0)] = rf_int(c, 1);
            }
            for i in 1..=d.m() {
                for j in 1..=d.m() {
                    // Lie: ε_i ⊗ ε_j carries c_ℓ^{ji}; HS: c_ℓ^{ij}
                    let key = match self.kind {
                        HomKind::Lie => self.coeffs.get(l, j, i),
                        HomKind::Hs => self.coeffs.get(l, i, j),
                    };
                    if let Some(x) = key {
                        let k = tt.index_of(i, j);
                        v.coords[k] = v.coords[k].add(x);
                    }
                }
            }
            v
        };
        let images: Vec<DVector<RatFunc>> = (0..=d.m()).map(image).collect();
        for p in 1..=d.m() {
            for q in 1..=d.m() {
                let lhs = tt.algebra.mul(&images[p], &images[q]);
                let mut rhs = DVector { coords: alloc::vec![zero.clone(); tt.pairs.len()] };
                for (i, a) in d.product(p, q) {
                    rhs = rhs.add(&images[*i].scale(&rf_scalar(c, a.clone())));
                }
                if lhs != rhs {
                    return Err((p, q));
                }
            }
        }
        Ok(())
    }
}

/// `Γ = {r1, r2}`: Lie coefficients on `D1` and HS coefficients on `D2`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaSystem {
    pub algebras: OperatorAlgebras,
    pub lie: CoeffTensor,
    pub hs: CoeffTensor,
}

impl GammaSystem {
    pub fn new(algebras: OperatorAlgebras, lie: CoeffTensor, hs: CoeffTensor) -> Result<GammaSystem, GammaError> {
        let ops = algebras.opset();
        if lie.max_index() > ops.m1 {
            return Err(GammaError::Invalid(alloc::format!(
                "Lie coefficient index {} exceeds m1 = {}",
                lie.max_index(),
                ops.m1
            )));
        }
        if hs.max_index() > ops.m2 {
            return Err(GammaError::Invalid(alloc::format!(
                "HS coefficient index {} exceeds m2 = {}",
                hs.max_index(),
                ops.m2
            )));
        }
        let null = algebras.lie.null_set();
        for (&(i, j, l), _) in lie.entries() {
            if i == 0 || j == 0 || l == 0 {
                return Err(GammaError::Invalid("coefficient indices start at 1".into()));
            }
            for bad in [i, j] {
                if !null.contains(&bad) {
                    return Err(GammaError::NotLieType { l, i, j, bad });
                }
            }
        }
        if hs.entries().any(|(&(i, j, l), _)| i == 0 || j == 0 || l == 0) {
            return Err(GammaError::Invalid("coefficient indices start at 1".into()));
        }
        if !hs.is_empty() && algebras.characteristic().is_zero() {
            return Err(GammaError::HsInCharZero);
        }
        Ok(GammaSystem { algebras, lie, hs })
    }

    /// Zero coefficients on the given algebras.
    pub fn trivial(algebras: OperatorAlgebras) -> GammaSystem {
        GammaSystem { algebras, lie: CoeffTensor::new(), hs: CoeffTensor::new() }
    }

    pub fn characteristic(&self) -> Characteristic {
        self.algebras.characteristic()
    }

    pub fn opset(&self) -> OpSet {
        self.algebras.opset()
    }

    pub fn tensor_of(&self, u: u8) -> &CoeffTensor {
        if u == 1 {
            &self.lie
        } else {
            &self.hs
        }
    }

    /// `c_ℓ^{ij}` over 𝔡, zero across types.
    pub fn c(&self, l: OpIndex, i: OpIndex, j: OpIndex) -> RatFunc {
        if !(l.same_type(i) && l.same_type(j)) {
            return rf_int(self.characteristic(), 0);
        }
        self.tensor_of(l.u)
            .get(l.i, i.i, j.i)
            .cloned()
            .unwrap_or_else(|| rf_int(self.characteristic(), 0))
    }

    /// Nonzero `(ℓ, c_ℓ^{ij})`.
    pub fn c_terms(&self, i: OpIndex, j: OpIndex) -> Vec<(OpIndex, RatFunc)> {
        if !i.same_type(j) {
            return Vec::new();
        }
        self.tensor_of(i.u)
            .entries()
            .filter(|(&(a, b, _), _)| a == i.i && b == j.i)
            .map(|(&(_, _, l), c)| (OpIndex { u: i.u, i: l }, c.clone()))
            .collect()
    }

    pub fn map(&self, which: u8) -> Option<CommutationMap<'_>> {
        Some(CommutationMap {
            algebra: self.algebras.algebra(which)?,
            kind: if which == 1 { HomKind::Lie } else { HomKind::Hs },
            coeffs: self.tensor_of(which),
        })
    }

    /// An absent `D2` counts as a pass.
    pub fn check_hom(&self, which: u8) -> Result<(), GammaFailure> {
        match self.map(which) {
            None => Ok(()),
            Some(m) => m.check_hom().map_err(|(p, q)| GammaFailure::Hom { which, p, q }),
        }
    }

    pub fn check_jacobi(&self, d: &dyn Partials) -> Result<(), GammaFailure> {
        let m = self.algebras.lie.m();
        let ch = self.characteristic();
        let c = |l: usize, i: usize, j: usize| -> RatFunc {
            self.lie.get(l, i, j).cloned().unwrap_or_else(|| rf_int(ch, 0))
        };
        let dp = |p: usize, x: &RatFunc| d.partial(OpIndex::lie(p), x);
        let al = |i: usize, p: usize, q: usize| rf_scalar(ch, self.algebras.lie.alpha(i, p, q));
        for i in 1..=m {
            for j in 1..=m {
                for l in 1..=m {
                    let ok = if i == j { c(l, i, i).is_zero() } else { c(l, i, j).add(&c(l, j, i)).is_zero() };
                    if !ok {
                        return Err(GammaFailure::Skew { l, i, j });
                    }
                }
            }
        }
        for i in 1..=m {
            for j in 1..=m {
                for k in 1..=m {
                    for r in 1..=m {
                        let mut lhs = rf_int(ch, 0);
                        for l in 1..=m {
                            lhs = lhs
                                .add(&c(l, i, j).mul(&c(r, l, k)))
                                .add(&c(l, k, i).mul(&c(r, l, j)))
                                .add(&c(l, j, k).mul(&c(r, l, i)));
                        }
                        let rhs = dp(i, &c(r, j, k)).add(&dp(k, &c(r, i, j))).add(&dp(j, &c(r, k, i)));
                        if lhs != rhs {
                            return Err(GammaFailure::Jacobi { i, j, k, r });
                        }
                    }
                }
            }
        }
        // the α-weighted sums; q plays the role of the second α index
        let wsum = |i: usize, j: usize, k: usize, q: usize, r: usize| -> RatFunc {
            let mut s = rf_int(ch, 0);
            for p in 1..=m {
                s = s
                    .add(&al(i, p, q).mul(&dp(p, &c(r, j, k))))
                    .add(&al(k, p, q).mul(&dp(p, &c(r, i, j))))
                    .add(&al(j, p, q).mul(&dp(p, &c(r, k, i))));
            }
            s
        };
        for i in 1..=m {
            for j in 1..=m {
                for k in 1..=m {
                    for r in 1..=m {
                        if !wsum(i, j, k, r, r).is_zero() {
                            return Err(GammaFailure::JacobiDerivDiag { i, j, k, r });
                        }
                    }
                }
            }
        }
        for i in 1..=m {
            for j in 1..=m {
                for k in 1..=m {
                    for q in 1..=m {
                        for r in (q + 1)..=m {
                            if !wsum(i, j, k, q, r).add(&wsum(i, j, k, r, q)).is_zero() {
                                return Err(GammaFailure::JacobiDerivPair { i, j, k, q, r });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Trivially passes without an HS part.
    pub fn check_associative(&self, d: &dyn Partials) -> Result<(), GammaFailure> {
        let Some(hs) = self.algebras.hs.as_ref() else { return Ok(()) };
        check_associative_table(hs, &self.hs, &|p, x| d.partial(OpIndex::hs(p), x))
    }

    pub fn check_cross(&self, d: &dyn Partials) -> Result<(), GammaFailure> {
        let ops = self.opset();
        for (v, tens) in [(1u8, &self.lie), (2u8, &self.hs)] {
            let u = 3 - v;
            let mu = if u == 1 { ops.m1 } else { ops.m2 };
            for k in 1..=mu {
                for (&(i, j, r), c) in tens.entries() {
                    if !d.partial(OpIndex { u, i: k }, c).is_zero() {
                        return Err(GammaFailure::Cross { u, k, v, r, i, j });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_jacobi_associative(&self, d: &dyn Partials) -> Result<(), GammaFailure> {
        self.check_jacobi(d)?;
        self.check_associative(d)?;
        self.check_cross(d)
    }

    /// Hom checks for both maps followed by Jacobi-associativity.
    pub fn check_all(&self, d: &dyn Partials) -> Result<(), GammaFailure> {
        self.check_hom(1)?;
        self.check_hom(2)?;
        self.check_jacobi_associative(d)
    }
}

/// The associativity identity for an HS table on `alg`, with `dp(p, c) = ∂_p(c)`.
pub fn check_associative_table(
    alg: &LocalAlgebra,
    t: &CoeffTensor,
    dp: &dyn Fn(usize, &RatFunc) -> RatFunc,
) -> Result<(), GammaFailure> {
    let m = alg.m();
    let ch = alg.characteristic();
    let c = |l: usize, i: usize, j: usize| -> RatFunc { t.get(l, i, j).cloned().unwrap_or_else(|| rf_int(ch, 0)) };
    let alphas: Vec<Vec<(usize, usize, RatFunc)>> = (0..=m)
        .map(|i| {
            let mut v = Vec::new();
            if i == 0 {
                return v;
            }
            for p in 1..=m {
                for q in 1..=m {
                    let a = alg.alpha(i, p, q);
                    if !a.is_zero() {
                        v.push((p, q, rf_scalar(ch, a)));
                    }
                }
            }
            v
        })
        .collect();
    for i in 1..=m {
        for j in 1..=m {
            for k in 1..=m {
                for r in 1..=m {
                    let mut lhs = rf_int(ch, 0);
                    for l in 1..=m {
                        lhs = lhs.add(&c(l, i, j).mul(&c(r, l, k))).sub(&c(l, j, k).mul(&c(r, i, l)));
                        let cjk = c(l, j, k);
                        for (p, q, a) in &alphas[i] {
                            let crq = c(r, *q, l);
                            if crq.is_zero() {
                                continue;
                            }
                            lhs = lhs.sub(&a.mul(&dp(*p, &cjk)).mul(&crq));
                        }
                    }
                    if lhs != dp(i, &c(r, j, k)) {
                        return Err(GammaFailure::Assoc { i, j, k, r });
                    }
                }
            }
        }
    }
    Ok(())
}

/// `binom(n, k) mod p` via Pascal's rule.
fn binom_mod(n: usize, k: usize, p: u64) -> u64 {
    let mut row = alloc::vec![0u64; n + 1];
    row[0] = 1 % p;
    for i in 1..=n {
        for j in (1..=i).rev() {
            row[j] = (row[j] + row[j - 1]) % p;
        }
    }
    row[k]
}

/// `F_p[ε]/(ε^{p^n})` with the binomial HS table.
pub fn iterative_hs_coeffs(p: u64, n: u32) -> (LocalAlgebra, CoeffTensor) {
    let ch = Characteristic::new(p).expect("prime characteristic");
    let top = (p.pow(n) - 1) as usize;
    let alg = crate::algebra::truncated(ch, top);
    let mut t = CoeffTensor::new();
    for i in 1..=top {
        for j in 1..=top {
            if i + j <= top {
                let b = binom_mod(i + j, i, p);
                if b != 0 {
                    t.set(i + j, i, j, rf_int(ch, b as i64));
                }
            }
        }
    }
    (alg, t)
}

/// HS coefficient with the index-0 extension `c_ℓ^{0j} = [ℓ=j]`, `c_ℓ^{i0} = [ℓ=i]`.
fn c_ext(t: &CoeffTensor, ch: Characteristic, l: usize, i: usize, j: usize) -> RatFunc {
    if i == 0 {
        return rf_int(ch, (l == j) as i64);
    }
    if j == 0 {
        return rf_int(ch, (l == i) as i64);
    }
    if l == 0 {
        return rf_int(ch, 0);
    }
    t.get(l, i, j).cloned().unwrap_or_else(|| rf_int(ch, 0))
}

/// Binary step: `D1 ⊗ D2` with coefficients multiplied factorwise.
pub fn hs_tensor_reduce_pair(
    a: (&LocalAlgebra, &CoeffTensor),
    b: (&LocalAlgebra, &CoeffTensor),
) -> Result<(crate::algebra::TensorAlgebra, CoeffTensor), GammaError> {
    let ch = a.0.characteristic();
    let tt = tensor(a.0, b.0)?;
    let mut out = CoeffTensor::new();
    let n = tt.pairs.len();
    for x in 1..n {
        for y in 1..n {
            let (i, i2) = tt.pairs[x];
            let (j, j2) = tt.pairs[y];
            for z in 1..n {
                let (l, l2) = tt.pairs[z];
                let v = c_ext(a.1, ch, l, i, j).mul(&c_ext(b.1, ch, l2, i2, j2));
                out.set(z, x, y, v);
            }
        }
    }
    Ok((tt, out))
}

/// Iterated reduction of a list of HS systems to a single one.
pub fn hs_tensor_reduce(systems: &[(LocalAlgebra, CoeffTensor)]) -> Result<(LocalAlgebra, CoeffTensor), GammaError> {
    let (first, rest) = systems
        .split_first()
        .ok_or_else(|| GammaError::Invalid("nothing to reduce".into()))?;
    let mut acc = first.clone();
    for s in rest {
        if s.0.characteristic() != acc.0.characteristic() {
            return Err(GammaError::Invalid("systems over different characteristics".into()));
        }
        let (tt, c) = hs_tensor_reduce_pair((&acc.0, &acc.1), (&s.0, &s.1))?;
        acc = (tt.algebra, c);
    }
    Ok(acc)
}
