//! Kernels: finitely many jets of `n` points cut out by polynomial relations, and their prolongation.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{frobenius_assumption, DCtx, DElem, DVector, FrobeniusVerdict};
use crate::dfield::{solve_root, DField, DFieldError};
use crate::error::{DegreeCapExceeded, ParseError};
use crate::expr;
use crate::frac::{rf_ctx, rf_text, Frac, RatFunc};
use crate::free::{FreeModule, FreeVector};
use crate::gamma::{GammaFailure, GammaSystem};
use crate::groebner::{groebner, normal_form, pick_min_poly, GbConfig};
use crate::index::{dickson_minimize, normal_words, OpIndex, OpSet, Word};
use crate::poly::{MonoOrder, Poly, PolyCtx};
use crate::ring::{Field, Ring};
use crate::scalar::Characteristic;

/// Polynomials in jet variables with coefficients in the base field.
pub type JetPoly = Poly<RatFunc>;
/// Fractions of jet polynomials: elements of the kernel's function field.
pub type JetFrac = Frac<RatFunc>;

pub type Jet = (Word, usize);

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum KernelError {
    #[error("PARSE_ERROR: {0}")]
    Parse(String),
    #[error("invalid kernel: {0}")]
    Invalid(String),
    #[error(transparent)]
    DegreeCap(#[from] DegreeCapExceeded),
    #[error(transparent)]
    Field(#[from] DFieldError),
    #[error("{0}")]
    Gamma(GammaFailure),
    #[error("NOT_A_KERNEL: e_{u} is not well defined on relation {relation} (coordinate {i})")]
    NotWellDefined { relation: String, u: u8, i: usize },
    #[error("NOT_A_KERNEL: d_({i}) d_({j}) {jet} violates the commutation rule")]
    NotGammaCommuting { jet: String, i: OpIndex, j: OpIndex },
    #[error("INSEPARABLE_KERNEL: {jet} is an inseparable leader of top order")]
    InseparableKernel { jet: String },
    #[error("FROBENIUS_FAIL: {0}")]
    Frobenius(FrobeniusVerdict),
    #[error("CRITERION_FAIL: new minimal-separable leader {witness}")]
    CriterionFail { witness: String },
    #[error("CRITERION_FAIL: kernel is not separable")]
    NotSeparable,
    #[error("kernel has length {have}, at least {need} is required")]
    TooShort { need: usize, have: usize },
    #[error("NO_PROLONGATION: {0}")]
    NoProlongation(String),
    #[error("generic prolongation changed the minimal-separable leaders at order {order}")]
    LeadersChanged { order: usize },
}

impl KernelError {
    pub fn code(&self) -> &'static str {
        match self {
            KernelError::Parse(_) => "PARSE_ERROR",
            KernelError::Invalid(_) | KernelError::TooShort { .. } => "INVALID",
            KernelError::DegreeCap(_) => "DEGREE_CAP",
            KernelError::Field(f) => f.code(),
            KernelError::Gamma(g) => g.code(),
            KernelError::NotWellDefined { .. } | KernelError::NotGammaCommuting { .. } => "NOT_A_KERNEL",
            KernelError::InseparableKernel { .. } => "INSEPARABLE_KERNEL",
            KernelError::Frobenius(_) => "FROBENIUS_FAIL",
            KernelError::CriterionFail { .. } | KernelError::NotSeparable => "CRITERION_FAIL",
            KernelError::LeadersChanged { .. } => "LEADERS_CHANGED",
            KernelError::NoProlongation(_) => "NO_PROLONGATION",
        }
    }

    /// Errors caused by malformed input rather than a failed check.
    pub fn is_malformed(&self) -> bool {
        matches!(
            self,
            KernelError::Parse(_)
                | KernelError::Invalid(_)
                | KernelError::TooShort { .. }
                | KernelError::Field(DFieldError::Invalid(_))
        )
    }
}

pub fn jet_name(w: &Word, t: usize) -> String {
    alloc::format!("x{}_{}", t, w.text())
}

/// Parses `x<t>_[...]`.
pub fn parse_jet_name(s: &str) -> Option<(Word, usize)> {
    let rest = s.strip_prefix('x')?;
    let (t, w) = rest.split_once('_')?;
    let t: usize = t.parse().ok()?;
    let w = Word::parse(w).ok()?;
    (t >= 1).then_some((w, t))
}

/// Jet variables `x_t^ξ`, `ξ` normal with `|ξ| ≤ r`, numbered in ⊴ order.
#[derive(Clone, Debug, PartialEq)]
pub struct JetSpace {
    pub ops: OpSet,
    pub n: usize,
    pub r: usize,
    jets: Vec<Jet>,
    index: BTreeMap<Jet, u32>,
}

impl JetSpace {
    pub fn new(ops: OpSet, n: usize, r: usize) -> JetSpace {
        let mut jets = Vec::new();
        for len in 0..=r {
            let words = normal_words(&ops, len);
            for t in 1..=n {
                for w in &words {
                    jets.push((w.clone(), t));
                }
            }
        }
        let index = jets.iter().enumerate().map(|(k, j)| (j.clone(), k as u32)).collect();
        JetSpace { ops, n, r, jets, index }
    }

    pub fn len(&self) -> usize {
        self.jets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jets.is_empty()
    }

    pub fn jet(&self, v: u32) -> &Jet {
        &self.jets[v as usize]
    }

    pub fn jets(&self) -> &[Jet] {
        &self.jets
    }

    pub fn index_of(&self, w: &Word, t: usize) -> Option<u32> {
        self.index.get(&(w.clone(), t)).copied()
    }

    pub fn order(&self, v: u32) -> usize {
        self.jets[v as usize].0.len()
    }

    pub fn name(&self, v: u32) -> String {
        match self.jets.get(v as usize) {
            Some((w, t)) => jet_name(w, *t),
            None => alloc::format!("z{}", v),
        }
    }

    /// Variables of order exactly `k`.
    pub fn of_order(&self, k: usize) -> impl Iterator<Item = u32> + '_ {
        (0..self.jets.len() as u32).filter(move |&v| self.order(v) == k)
    }
}

/// Shared data for kernels over one field and commutation system.
pub struct KernelEnv<'a> {
    pub field: &'a DField,
    pub gamma: &'a GammaSystem,
    pub free: FreeModule<'a>,
    pub cfg: GbConfig,
}

impl<'a> KernelEnv<'a> {
    /// Checks Γ-commutativity of the field and Jacobi-associativity of Γ.
    pub fn new(field: &'a DField, gamma: &'a GammaSystem, cfg: GbConfig) -> Result<KernelEnv<'a>, KernelError> {
        field.validate(gamma)?;
        gamma.check_all(field).map_err(KernelError::Gamma)?;
        Ok(KernelEnv { field, gamma, free: FreeModule::new(gamma, field), cfg })
    }

    pub fn characteristic(&self) -> Characteristic {
        self.field.characteristic()
    }

    pub fn ops(&self) -> OpSet {
        self.gamma.opset()
    }

    pub fn pctx(&self) -> PolyCtx<PolyCtx<Characteristic>> {
        PolyCtx::new(rf_ctx(self.characteristic()), MonoOrder::Lex)
    }

    pub fn constant(&self, c: RatFunc) -> JetPoly {
        Poly::constant(self.pctx(), c)
    }

    pub fn var(&self, v: u32) -> JetPoly {
        Poly::var(self.pctx(), v)
    }

    /// `Σ c_ξ x_t^ξ`.
    pub fn eval_free(&self, space: &JetSpace, v: &FreeVector, t: usize) -> JetPoly {
        let mut out = Poly::zero(self.pctx());
        for (w, c) in v.terms() {
            let k = space
                .index_of(w, t)
                .unwrap_or_else(|| panic!("jet {} outside the jet space of length {}", jet_name(w, t), space.r));
            out = out.plus(&self.var(k).scale_by(c));
        }
        out
    }

    /// `∂_i(x_t^ξ)` read off the free module.
    pub fn partial_jet(&self, space: &JetSpace, i: OpIndex, xi: &Word, t: usize) -> JetPoly {
        self.eval_free(space, &self.free.apply_basis(i, xi), t)
    }

    /// `∂_ξ` applied to `x_t^∅` for an arbitrary word: `χ_ξ x^{ρ(ξ)} + ℓ_ξ(x_t)`.
    pub fn word_jet(&self, space: &JetSpace, xi: &Word, t: usize) -> JetPoly {
        let mut p = self.eval_free(space, &self.free.ell(xi), t);
        if xi.chi() == 1 {
            let k = space.index_of(&xi.rho(), t).expect("jet in range");
            p = p.plus(&self.var(k));
        }
        p
    }

    /// `e_u(c)` for a base-field coefficient, lifted into another ring.
    fn coeff_image<R: Ring>(&self, u: u8, c: &RatFunc, lift: &dyn Fn(RatFunc) -> R) -> DVector<R> {
        let alg = self.gamma.algebras.algebra(u).expect("algebra present");
        if c.is_constant() {
            return alg.embed(lift(c.clone()));
        }
        self.field.apply_e(u, c).map(|x| lift(x.clone()))
    }

    /// `e_u(p)` with the given images of the variables.
    pub fn e_of_poly<R: Ring>(
        &self,
        u: u8,
        p: &JetPoly,
        rctx: R::Ctx,
        lift: &dyn Fn(RatFunc) -> R,
        var: &mut dyn FnMut(u32) -> DVector<R>,
    ) -> DVector<R> {
        let alg = self.gamma.algebras.algebra(u).expect("algebra present");
        let ctx = DCtx { alg, inner: rctx };
        p.eval(
            ctx,
            |c| DElem::new(alg, self.coeff_image(u, c, lift)),
            |v| DElem::new(alg, var(v)),
        )
        .v
    }

    /// `e_u(p)` for `p` in jets of order below `space.r`.
    pub fn e_poly(&self, space: &JetSpace, u: u8, p: &JetPoly) -> DVector<JetPoly> {
        let ops = space.ops.ops_of(u);
        let pctx = self.pctx();
        self.e_of_poly(u, p, pctx, &|c| Poly::constant(pctx, c), &mut |v| {
            let (w, t) = space.jet(v).clone();
            let mut coords = alloc::vec![self.var(v)];
            coords.extend(ops.iter().map(|&q| self.partial_jet(space, q, &w, t)));
            DVector { coords }
        })
    }

    pub fn partial_poly(&self, space: &JetSpace, op: OpIndex, p: &JetPoly) -> JetPoly {
        self.e_poly(space, op.u, p).coords[op.i].clone()
    }

    /// Parses a relation in jet names and base-field generators; non-normal jets are rewritten.
    pub fn parse_relation(&self, space: &JetSpace, src: &str) -> Result<JetPoly, KernelError> {
        let e = expr::parse(src).map_err(|e| KernelError::Parse(alloc::format!("{} in `{}`", e, src)))?;
        let pctx = self.pctx();
        let mut unknown: Option<String> = None;
        let cell = core::cell::RefCell::new(&mut unknown);
        let resolve = |name: &str| -> Option<JetFrac> {
            if let Some(g) = self.field.gens().iter().position(|g| g == name) {
                return Some(Frac::constant(pctx, self.field.gen(g)));
            }
            let Some((w, t)) = parse_jet_name(name) else {
                **cell.borrow_mut() = Some(alloc::format!("unknown name `{}`", name));
                return None;
            };
            if t > space.n || w.len() > space.r || w.entries().iter().any(|&o| !space.ops.contains(o)) {
                **cell.borrow_mut() = Some(alloc::format!("jet `{}` is outside the kernel", name));
                return None;
            }
            Some(Frac::from_poly(self.word_jet(space, &w, t)))
        };
        let f = expr::eval_frac(&e, pctx, &resolve).map_err(|e: ParseError| {
            let extra = cell.borrow().clone().unwrap_or_default();
            KernelError::Parse(alloc::format!("{} in `{}` {}", e, src, extra).trim_end().into())
        })?;
        Ok(f.num().clone())
    }

    pub fn render(&self, space: &JetSpace, p: &JetPoly) -> String {
        let gens = |v: u32| self.field.gen_name(v);
        p.render(&|v| space.name(v), &|c| rf_text(c, &gens))
    }
}

/// A leader `(ξ, t)` with the minimal polynomial witnessing it.
#[derive(Clone, Debug, PartialEq)]
pub struct Leader {
    pub jet: Jet,
    pub separable: bool,
    pub min_poly: JetPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LeaderReport {
    pub leaders: Vec<Leader>,
    pub minimal_separable: Vec<Jet>,
    pub inseparable: Vec<Jet>,
    /// No inseparable leader of top order.
    pub separable: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RouteChoice {
    Least,
    Greatest,
}

/// All routes `(i, η)` reaching one new jet, and whether their values agree modulo the relations.
#[derive(Clone, Debug, PartialEq)]
pub struct RouteReport {
    pub jet: Jet,
    pub routes: Vec<(OpIndex, Word)>,
    pub chosen: usize,
    pub agree: bool,
}

pub struct Prolongation<'a> {
    pub kernel: Kernel<'a>,
    pub routes: Vec<RouteReport>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionVerdict {
    pub holds: bool,
    pub separable: bool,
    /// `dim D1 = 1`: no normal index has length above one, so the leader condition is automatic.
    pub shortcut: bool,
    pub witness: Option<Jet>,
}

/// A kernel presentation of length `r` in `n` variables; relations form a reduced lex basis.
#[derive(Clone)]
pub struct Kernel<'a> {
    env: &'a KernelEnv<'a>,
    space: JetSpace,
    relations: Vec<JetPoly>,
}

impl fmt::Debug for Kernel<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel")
            .field("n", &self.space.n)
            .field("r", &self.space.r)
            .field("relations", &self.relation_texts())
            .finish()
    }
}

impl<'a> Kernel<'a> {
    /// Builds and checks a presentation: `e` must be well defined below the top order and the
    /// operators must Γ-commute two orders below it.
    pub fn new(env: &'a KernelEnv<'a>, n: usize, r: usize, relations: Vec<JetPoly>) -> Result<Kernel<'a>, KernelError> {
        if n == 0 {
            return Err(KernelError::Invalid("a kernel needs at least one variable".into()));
        }
        let space = JetSpace::new(env.ops(), n, r);
        let gens: Vec<JetPoly> = relations.into_iter().filter(|p| !p.is_zero()).collect();
        if let Some(p) = gens.iter().find(|p| p.max_var().is_some_and(|v| v as usize >= space.len())) {
            return Err(KernelError::Invalid(alloc::format!("relation {} uses jets beyond the length", env.render(&space, p))));
        }
        let gb = groebner(&gens, MonoOrder::Lex, env.cfg)?;
        if gb.iter().any(|g| g.is_constant()) {
            return Err(KernelError::Invalid("relations generate the unit ideal".into()));
        }
        let k = Kernel { env, space, relations: gb };
        k.check_well_defined()?;
        k.check_gamma_commuting()?;
        Ok(k)
    }

    /// Parses relation texts.
    pub fn from_texts(env: &'a KernelEnv<'a>, n: usize, r: usize, texts: &[String]) -> Result<Kernel<'a>, KernelError> {
        let space = JetSpace::new(env.ops(), n, r);
        let rels = texts.iter().map(|s| env.parse_relation(&space, s)).collect::<Result<Vec<_>, _>>()?;
        Kernel::new(env, n, r, rels)
    }

    pub fn env(&self) -> &'a KernelEnv<'a> {
        self.env
    }

    pub fn n(&self) -> usize {
        self.space.n
    }

    pub fn r(&self) -> usize {
        self.space.r
    }

    pub fn space(&self) -> &JetSpace {
        &self.space
    }

    pub fn relations(&self) -> &[JetPoly] {
        &self.relations
    }

    pub fn relation_texts(&self) -> Vec<String> {
        self.relations.iter().map(|p| self.env.render(&self.space, p)).collect()
    }

    pub fn normal_form(&self, p: &JetPoly) -> JetPoly {
        normal_form(p, &self.relations)
    }

    pub fn contains(&self, p: &JetPoly) -> bool {
        self.normal_form(p).is_zero()
    }

    fn check_well_defined(&self) -> Result<(), KernelError> {
        let r = self.space.r;
        if r == 0 {
            return Ok(());
        }
        for g in &self.relations {
            let low = g.vars().iter().all(|&v| self.space.order(v) < r);
            if !low {
                continue;
            }
            for u in [1u8, 2] {
                let Some(alg) = self.env.gamma.algebras.algebra(u) else { continue };
                if alg.m() == 0 {
                    continue;
                }
                let e = self.env.e_poly(&self.space, u, g);
                for i in 1..=alg.m() {
                    if !self.contains(&e.coords[i]) {
                        return Err(KernelError::NotWellDefined { relation: self.env.render(&self.space, g), u, i });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_gamma_commuting(&self) -> Result<(), KernelError> {
        if self.space.r < 2 {
            return Ok(());
        }
        let ops = self.space.ops.ops();
        for v in 0..self.space.len() as u32 {
            if self.space.order(v) + 2 > self.space.r {
                break;
            }
            let (w, t) = self.space.jet(v).clone();
            if let Some((i, j)) = self.commutation_defect(&w, t, &ops) {
                return Err(KernelError::NotGammaCommuting { jet: jet_name(&w, t), i, j });
            }
        }
        Ok(())
    }

    fn commutation_defect(&self, w: &Word, t: usize, ops: &[OpIndex]) -> Option<(OpIndex, OpIndex)> {
        let env = self.env;
        let sp = &self.space;
        for &i in ops {
            for &j in ops {
                let dj = env.partial_jet(sp, j, w, t);
                let mut d = env.partial_poly(sp, i, &dj);
                if !(i.is_hs() && j.is_hs()) {
                    let di = env.partial_jet(sp, i, w, t);
                    d = d.minus(&env.partial_poly(sp, j, &di));
                }
                for (l, c) in env.gamma.c_terms(i, j) {
                    d = d.minus(&env.partial_jet(sp, l, w, t).scale_by(&c));
                }
                if !self.contains(&d) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Γ-commutativity on jets of order at most `max_order` (must be below `r - 1`).
    pub fn gamma_commuting_upto(&self, max_order: usize) -> bool {
        let ops = self.space.ops.ops();
        (0..self.space.len() as u32)
            .filter(|&v| self.space.order(v) <= max_order)
            .all(|v| {
                let (w, t) = self.space.jet(v).clone();
                self.commutation_defect(&w, t, &ops).is_none()
            })
    }

    pub fn leaders(&self) -> LeaderReport {
        let mut leaders = Vec::new();
        for v in 0..self.space.len() as u32 {
            if let Some(f) = pick_min_poly(&self.relations, v) {
                let separable = !self.normal_form(&f.derivative(v)).is_zero();
                leaders.push(Leader { jet: self.space.jet(v).clone(), separable, min_poly: f });
            }
        }
        let seps: Vec<Jet> = leaders.iter().filter(|l| l.separable).map(|l| l.jet.clone()).collect();
        let inseparable: Vec<Jet> = leaders.iter().filter(|l| !l.separable).map(|l| l.jet.clone()).collect();
        let separable = !inseparable.iter().any(|(w, _)| w.len() == self.space.r);
        LeaderReport { minimal_separable: dickson_minimize(&seps), inseparable, separable, leaders }
    }

    /// The presentation of length `s ≤ r` obtained by forgetting higher jets.
    pub fn truncate(&self, s: usize) -> Result<Kernel<'a>, KernelError> {
        assert!(s <= self.space.r, "truncation above the length");
        let space = JetSpace::new(self.space.ops, self.space.n, s);
        let keep: Vec<JetPoly> = self
            .relations
            .iter()
            .filter(|g| g.max_var().is_none_or(|v| (v as usize) < space.len()))
            .cloned()
            .collect();
        Kernel::new(self.env, self.space.n, s, keep)
    }

    /// One step of generic prolongation.
    pub fn generic_prolong(&self, choice: RouteChoice) -> Result<Prolongation<'a>, KernelError> {
        let env = self.env;
        let algs = &env.gamma.algebras;
        if !env.characteristic().is_zero() {
            let fv = frobenius_assumption(&algs.lie, algs.hs.as_ref());
            if fv != FrobeniusVerdict::Pass {
                return Err(KernelError::Frobenius(fv));
            }
        }
        let report = self.leaders();
        let s = self.space.r;
        if let Some((w, t)) = report.inseparable.iter().find(|(w, _)| w.len() == s) {
            return Err(KernelError::InseparableKernel { jet: jet_name(w, *t) });
        }
        let space = JetSpace::new(self.space.ops, self.space.n, s + 1);
        let mut top_leaders: BTreeMap<u32, JetPoly> = BTreeMap::new();
        for l in &report.leaders {
            if l.jet.0.len() == s {
                let v = self.space.index_of(&l.jet.0, l.jet.1).expect("leader is a jet");
                top_leaders.insert(v, l.min_poly.clone());
            }
        }
        let mut pr = Prolonger { k: self, space, values: BTreeMap::new(), leaders: top_leaders, solved: BTreeMap::new() };
        let mut reports = Vec::new();
        let mut rels: Vec<JetPoly> = self.relations.clone();
        let mut dens: Vec<JetPoly> = Vec::new();
        let new_vars: Vec<u32> = pr.space.of_order(s + 1).collect();
        for mv in new_vars {
            let (mu, t) = pr.space.jet(mv).clone();
            let mut routes: Vec<(OpIndex, Word)> = Vec::new();
            for op in pr.space.ops.ops() {
                if let Some(eta) = mu.remove_one(op) {
                    let ev = self.space.index_of(&eta, t).expect("jet of order s");
                    if pr.leaders.contains_key(&ev) {
                        routes.push((op, eta));
                    }
                }
            }
            if routes.is_empty() {
                pr.values.insert(mv, Frac::var(env.pctx(), mv));
                continue;
            }
            // routes come out in ascending op order, i.e. descending η
            routes.reverse();
            let cands: Vec<JetFrac> = routes.iter().map(|(i, eta)| pr.candidate(*i, eta, t)).collect();
            let chosen = match choice {
                RouteChoice::Least => 0,
                RouteChoice::Greatest => routes.len() - 1,
            };
            let val = cands[chosen].clone();
            rels.push(val.den().times(&env.var(mv)).minus(val.num()));
            if !val.den().is_constant() {
                dens.push(val.den().clone());
            }
            pr.values.insert(mv, val);
            reports.push((mv, routes, chosen, cands));
        }
        let gb = saturate(env, &rels, &dens, pr.space.len() as u32)?;
        let routes = reports
            .into_iter()
            .map(|(mv, routes, chosen, cands)| {
                let agree = cands
                    .iter()
                    .all(|c| normal_form(c.sub(&cands[chosen]).num(), &gb).is_zero());
                RouteReport { jet: pr.space.jet(mv).clone(), routes, chosen, agree }
            })
            .collect();
        // the old jets are forced to satisfy new relations: nothing extends this kernel
        let kernel = Kernel::new(env, self.space.n, s + 1, gb).map_err(|e| match e {
            KernelError::NotWellDefined { .. } | KernelError::NotGammaCommuting { .. } | KernelError::Invalid(_) => {
                KernelError::NoProlongation(alloc::format!("{}", e))
            }
            e => e,
        })?;
        Ok(Prolongation { kernel, routes })
    }

    /// Generic prolongation up to length `s`.
    pub fn prolong_to(&self, s: usize, choice: RouteChoice) -> Result<Kernel<'a>, KernelError> {
        let mut k = self.clone();
        while k.r() < s {
            k = k.generic_prolong(choice)?.kernel;
        }
        Ok(k)
    }

    /// The leader criterion for a principal realisation, on a presentation of length at least `2r`.
    pub fn realisation_criterion(&self, r: usize) -> Result<CriterionVerdict, KernelError> {
        if self.space.r < 2 * r {
            return Err(KernelError::TooShort { need: 2 * r, have: self.space.r });
        }
        let rep = self.leaders();
        let separable = !rep.inseparable.iter().any(|(w, _)| w.len() == 2 * r);
        let witness = rep.minimal_separable.iter().find(|(w, _)| w.len() > r && w.len() <= 2 * r).cloned();
        Ok(CriterionVerdict {
            holds: separable && witness.is_none(),
            separable,
            shortcut: self.space.ops.m1 == 0,
            witness,
        })
    }

    /// Principal realisation up to length `s`: prolong to `2r` if needed, test the criterion,
    /// then prolong generically, checking that the minimal-separable leaders stay put.
    pub fn realize(&self, r: usize, s: usize, choice: RouteChoice) -> Result<Kernel<'a>, KernelError> {
        if s < 2 * r {
            return Err(KernelError::Invalid(alloc::format!("target order {} is below 2r = {}", s, 2 * r)));
        }
        let mut k = self.prolong_to(2 * r, choice)?;
        if k.r() > 2 * r {
            k = k.truncate(2 * r)?;
        }
        let v = k.realisation_criterion(r)?;
        if !v.separable {
            return Err(KernelError::NotSeparable);
        }
        if let Some((w, t)) = v.witness {
            return Err(KernelError::CriterionFail { witness: jet_name(&w, t) });
        }
        let base = k.leaders();
        while k.r() < s {
            k = k.generic_prolong(choice)?.kernel;
            let now = k.leaders();
            if now.minimal_separable != base.minimal_separable || now.inseparable != base.inseparable {
                return Err(KernelError::LeadersChanged { order: k.r() });
            }
        }
        Ok(k)
    }

    /// Whether `x_t^ξ ↦ ∂_ξ b_t` kills every relation; on failure, the first relation not killed.
    pub fn specialize_check(&self, b: &[RatFunc]) -> Result<(), String> {
        assert_eq!(b.len(), self.space.n, "one value per variable");
        let field = self.env.field;
        let vals: Vec<RatFunc> = self
            .space
            .jets()
            .iter()
            .map(|(w, t)| field.apply_word(w.entries(), &b[t - 1]))
            .collect();
        let ctx = rf_ctx(self.env.characteristic());
        for g in &self.relations {
            let x = g.eval(ctx, |c| c.clone(), |v| vals[v as usize].clone());
            if !x.is_zero() {
                return Err(self.env.render(&self.space, g));
            }
        }
        Ok(())
    }

    /// Same `n`, length and relation ideal.
    pub fn isomorphic(&self, o: &Kernel<'_>) -> bool {
        self.space == o.space && self.relations == o.relations
    }

    /// `∂_i(x_t^ξ)` as a fraction reduced modulo the relations (jets of order below `r`).
    pub fn partial_of_jet(&self, i: OpIndex, w: &Word, t: usize) -> JetPoly {
        self.normal_form(&self.env.partial_jet(&self.space, i, w, t))
    }
}

/// `(rels + (Z·Πdens − 1)) ∩ k[x]` via lex elimination of `z`.
fn saturate(env: &KernelEnv<'_>, rels: &[JetPoly], dens: &[JetPoly], z: u32) -> Result<Vec<JetPoly>, KernelError> {
    if dens.is_empty() {
        return Ok(groebner(rels, MonoOrder::Lex, env.cfg)?);
    }
    let mut prod = Poly::one(env.pctx());
    let mut seen: Vec<&JetPoly> = Vec::new();
    for d in dens {
        if !seen.contains(&d) {
            seen.push(d);
            prod = prod.times(d);
        }
    }
    let mut gens = rels.to_vec();
    gens.push(env.var(z).times(&prod).minus(&Poly::one(env.pctx())));
    let gb = groebner(&gens, MonoOrder::Lex, env.cfg)?;
    Ok(gb.into_iter().filter(|g| g.degree_in(z) == 0).collect())
}

struct Prolonger<'k, 'a> {
    k: &'k Kernel<'a>,
    space: JetSpace,
    values: BTreeMap<u32, JetFrac>,
    leaders: BTreeMap<u32, JetPoly>,
    solved: BTreeMap<(u32, OpIndex), JetFrac>,
}

impl Prolonger<'_, '_> {
    fn env(&self) -> &KernelEnv<'_> {
        self.k.env
    }

    fn frac(&self, p: JetPoly) -> JetFrac {
        Frac::from_poly(p)
    }

    /// `∂_q(x_{t}^τ)` with everything of order `s + 1` already substituted.
    fn der(&self, q: OpIndex, tau: &Word, t: usize) -> JetFrac {
        let env = self.env();
        let s = self.k.space.r;
        if tau.len() < s {
            return self.frac(env.partial_jet(&self.space, q, tau, t));
        }
        let w = tau.prepend(q);
        let mut val = self.frac(env.eval_free(&self.space, &env.free.ell(&w), t));
        if w.chi() == 1 {
            let rv = self.space.index_of(&w.rho(), t).expect("jet of order s+1");
            let x = self
                .values
                .get(&rv)
                .unwrap_or_else(|| panic!("{} needed before it was determined", self.space.name(rv)));
            val = val.add(x);
        }
        val
    }

    /// `∂_i(a)` for the leader variable `v` of order `s`, by the triangular solve on its minimal polynomial.
    fn solve(&mut self, v: u32, i: OpIndex) -> JetFrac {
        if let Some(x) = self.solved.get(&(v, i)) {
            return x.clone();
        }
        let env = self.k.env;
        let alg = env.gamma.algebras.algebra(i.u).expect("algebra present");
        let f = self.leaders[&v].clone();
        let g = alg.grade(i.i);
        let targets: Vec<usize> = (1..=alg.m()).filter(|&q| q == i.i || alg.grade(q) < g).collect();
        let fctx: PolyCtx<PolyCtx<Characteristic>> = env.pctx();
        let a0 = Frac::var(fctx, v);
        let deriv_inv = self.frac(f.derivative(v)).inv();
        let sol = {
            let this = &*self;
            let mut eval = |x: &DVector<JetFrac>, target: usize| -> DVector<JetFrac> {
                env.e_of_poly(i.u, &f, fctx, &|c| Frac::constant(fctx, c), &mut |w| {
                    if w == v {
                        return x.clone();
                    }
                    let (tau, t) = this.k.space.jet(w).clone();
                    let mut coords = alloc::vec![Frac::var(fctx, w)];
                    for q in 1..=alg.m() {
                        if q == target || alg.grade(q) < alg.grade(target) {
                            coords.push(this.der(OpIndex { u: i.u, i: q }, &tau, t));
                        } else {
                            coords.push(Frac::zero(fctx));
                        }
                    }
                    DVector { coords }
                })
            };
            solve_root(alg, &a0, &deriv_inv, &targets, &mut eval)
        };
        for q in targets {
            self.solved.insert((v, OpIndex { u: i.u, i: q }), sol.coords[q].clone());
        }
        self.solved[&(v, i)].clone()
    }

    /// `∂_i(a_t^η) − ℓ_{i,η}(L_{s,t})`.
    fn candidate(&mut self, i: OpIndex, eta: &Word, t: usize) -> JetFrac {
        let v = self.k.space.index_of(eta, t).expect("jet of order s");
        let d = self.solve(v, i);
        let env = self.k.env;
        let ell = env.eval_free(&self.space, &env.free.ell(&eta.prepend(i)), t);
        d.sub(&self.frac(ell))
    }
}
