//! The free Γ-commuting operator module `V_F` on symbols `w^ξ`, and the corrections `ℓ_ξ`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::frac::{rf_int, rf_render, rf_scalar, RatFunc};
use crate::gamma::{GammaSystem, Partials};
use crate::index::{OpIndex, Word};
use crate::ring::Ring;

/// A finite F-combination of `w^ξ` with `ξ` normal; zeros are never stored.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FreeVector {
    terms: BTreeMap<Word, RatFunc>,
}

impl FreeVector {
    pub fn zero() -> FreeVector {
        FreeVector::default()
    }

    pub fn basis(w: Word, one: RatFunc) -> FreeVector {
        let mut v = FreeVector::zero();
        v.add_term(w, &one);
        v
    }

    pub fn add_term(&mut self, w: Word, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(x) => {
                *x = x.add(c);
                if x.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, o: &FreeVector, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &o.terms {
            self.add_term(w.clone(), &x.mul(c));
        }
    }

    pub fn plus(&self, o: &FreeVector) -> FreeVector {
        let mut v = self.clone();
        for (w, x) in &o.terms {
            v.add_term(w.clone(), x);
        }
        v
    }

    pub fn minus(&self, o: &FreeVector) -> FreeVector {
        let mut v = self.clone();
        for (w, x) in &o.terms {
            v.add_term(w.clone(), &x.neg());
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &RatFunc)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Option<&RatFunc> {
        self.terms.get(w)
    }

    /// Largest `|ξ|` present (0 for the zero vector).
    pub fn order(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// `c*w[...] + ...`, generators named by `names`.
    pub fn text(&self, names: &dyn Fn(u32) -> String) -> String {
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut s = String::new();
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                s.push_str(" + ");
            }
            if c.is_one() {
                s.push_str(&alloc::format!("w{}", w));
            } else {
                s.push_str(&alloc::format!("({})*w{}", rf_render(c, names), w));
            }
        }
        s
    }
}

/// `V_F` for a fixed Γ, with `∂_i(w^ξ)` memoized.
pub struct FreeModule<'a> {
    gamma: &'a GammaSystem,
    field: &'a dyn Partials,
    memo: RefCell<BTreeMap<(OpIndex, Word), FreeVector>>,
    active: RefCell<BTreeSet<(OpIndex, Word)>>,
}

impl<'a> FreeModule<'a> {
    pub fn new(gamma: &'a GammaSystem, field: &'a dyn Partials) -> FreeModule<'a> {
        FreeModule {
            gamma,
            field,
            memo: RefCell::new(BTreeMap::new()),
            active: RefCell::new(BTreeSet::new()),
        }
    }

    pub fn gamma(&self) -> &'a GammaSystem {
        self.gamma
    }

    pub fn field(&self) -> &'a dyn Partials {
        self.field
    }

    fn one_c(&self) -> RatFunc {
        rf_int(self.gamma.characteristic(), 1)
    }

    pub fn w(&self, xi: Word) -> FreeVector {
        FreeVector::basis(xi, self.one_c())
    }

    /// `∂_i(w^ξ)` for normal `ξ`.
    pub fn apply_basis(&self, i: OpIndex, xi: &Word) -> FreeVector {
        debug_assert!(xi.is_normal(), "apply_basis on a non-normal index {}", xi);
        let key = (i, xi.clone());
        if let Some(v) = self.memo.borrow().get(&key) {
            return v.clone();
        }
        assert!(
            self.active.borrow_mut().insert(key.clone()),
            "circular definition of d_({}) w{}",
            i,
            xi
        );
        let v = self.compute_basis(i, xi);
        self.active.borrow_mut().remove(&key);
        self.memo.borrow_mut().insert(key, v.clone());
        v
    }

    fn compute_basis(&self, i: OpIndex, xi: &Word) -> FreeVector {
        let Some(j) = xi.first() else {
            return self.w(Word(alloc::vec![i]));
        };
        let eta = xi.tail();
        let mut out = FreeVector::zero();
        if i >= j {
            if i.is_lie() {
                return self.w(xi.prepend(i));
            }
            // i is HS, so is j: χ_{ij} = 0
            for (l, c) in self.gamma.c_terms(i, j) {
                out.add_scaled(&self.apply_basis(l, &eta), &c);
            }
            return out;
        }
        if i.is_lie() || j.is_lie() {
            let inner = self.apply_basis(i, &eta);
            out = self.apply_vec(j, &inner);
        }
        for (l, c) in self.gamma.c_terms(i, j) {
            out.add_scaled(&self.apply_basis(l, &eta), &c);
        }
        out
    }

    /// `∂_i(Σ c_ξ w^ξ)` via the twisted Leibniz rule.
    pub fn apply_vec(&self, i: OpIndex, v: &FreeVector) -> FreeVector {
        let alphas = self.gamma.algebras.alphas_of(i);
        let ch = self.gamma.characteristic();
        let mut out = FreeVector::zero();
        for (xi, c) in v.terms() {
            let dc = self.field.partial(i, c);
            out.add_term(xi.clone(), &dc);
            out.add_scaled(&self.apply_basis(i, xi), c);
            for (p, q, a) in &alphas {
                let dpc = self.field.partial(*p, c);
                if dpc.is_zero() {
                    continue;
                }
                out.add_scaled(&self.apply_basis(*q, xi), &dpc.mul(&rf_scalar(ch, a.clone())));
            }
        }
        out
    }

    /// `∂_ξ v`, rightmost operator first.
    pub fn apply_word(&self, xi: &Word, v: &FreeVector) -> FreeVector {
        let mut acc = v.clone();
        for &op in xi.entries().iter().rev() {
            acc = self.apply_vec(op, &acc);
        }
        acc
    }

    /// `ℓ_ξ = ∂_ξ w^∅ − χ_ξ w^{ρ(ξ)}`.
    pub fn ell(&self, xi: &Word) -> FreeVector {
        let full = self.apply_word(xi, &self.w(Word::empty()));
        if xi.chi() == 1 {
            full.minus(&self.w(xi.rho()))
        } else {
            full
        }
    }

    /// `∂_i ∂_j v − χ_{ij} ∂_j ∂_i v − Σ_ℓ c_ℓ^{ij} ∂_ℓ v`; zero when Γ-commutativity holds at `v`.
    pub fn commutator_defect(&self, i: OpIndex, j: OpIndex, v: &FreeVector) -> FreeVector {
        let ij = self.apply_vec(i, &self.apply_vec(j, v));
        let mut d = ij;
        if !(i.is_hs() && j.is_hs()) {
            d = d.minus(&self.apply_vec(j, &self.apply_vec(i, v)));
        }
        for (l, c) in self.gamma.c_terms(i, j) {
            d.add_scaled(&self.apply_vec(l, v), &c.neg());
        }
        d
    }

    /// The first `(i, j, λ)` with nonzero defect among normal `λ` of length at most `max_len`.
    pub fn first_commutation_failure(&self, max_len: usize) -> Option<(OpIndex, OpIndex, Word)> {
        let ops = self.gamma.opset();
        for lambda in crate::index::normal_words_upto(&ops, max_len) {
            let v = self.w(lambda.clone());
            for &i in &ops.ops() {
                for &j in &ops.ops() {
                    if !self.commutator_defect(i, j, &v).is_zero() {
                        return Some((i, j, lambda));
                    }
                }
            }
        }
        None
    }

    /// The full action table `(i, ξ) ↦ ∂_i(w^ξ)` for `|ξ| ≤ r`.
    pub fn table(&self, r: usize) -> Vec<(OpIndex, Word, FreeVector)> {
        let ops = self.gamma.opset();
        let mut out = Vec::new();
        for xi in crate::index::normal_words_upto(&ops, r) {
            for &i in &ops.ops() {
                out.push((i, xi.clone(), self.apply_basis(i, &xi)));
            }
        }
        out
    }
}
