//! One line per acceptance criterion. Runs without the libtest harness so the lines stay in order.
//!
//! A criterion with an `unattainable` entry still runs and still prints FAIL; the process only
//! tolerates it when the failure matches the recorded witness exactly.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use workbench::files::{load_field, load_gamma, load_kernel, FileKind, KernelSetup};
use workbench_core::algebra::{frobenius_assumption, truncated, DVector, FrobeniusVerdict, LocalAlgebra};
use workbench_core::dfield::{DField, ModCtx, ModElem};
use workbench_core::frac::{rf_ctx, rf_int, RatFunc};
use workbench_core::free::FreeModule;
use workbench_core::gamma::{
    check_associative_table, hs_tensor_reduce, hs_tensor_reduce_pair, iterative_hs_coeffs, CoeffTensor, ConstantCoeffs,
    GammaSystem, OperatorAlgebras,
};
use workbench_core::groebner::GbConfig;
use workbench_core::index::{dickson_minimize, minimal_vectors, normal_words_upto, OpIndex, OpSet, Word};
use workbench_core::kernel::{jet_name, Kernel, KernelEnv, RouteChoice};
use workbench_core::poly::{Monomial, MonoOrder, Poly, PolyCtx};
use workbench_core::ring::Ring;
use workbench_core::scalar::Characteristic;

type Check = Result<String, String>;

/// Perturbed tables that are still associative. Associativity alone does not pin down the
/// binomial table, so these are accepted by any correct checker. The two with `hom PASS` are
/// consistent operator systems in their own right, just not iterative ones.
const STILL_ASSOCIATIVE: &[&str] = &[
    "(2,1): perturbation c_1^{1,1} += 1 accepted, hom PASS",
    "(2,2): perturbation c_2^{1,1} += 1 accepted, hom FAIL",
    "(2,2): perturbation c_3^{1,1} += 1 accepted, hom FAIL",
    "(2,2): perturbation c_3^{1,2} += 1 accepted, hom FAIL",
    "(2,2): perturbation c_3^{2,1} += 1 accepted, hom FAIL",
    "(2,2): perturbation c_1^{2,2} += 1 accepted, hom PASS",
    "(2,2): perturbation c_3^{2,2} += 1 accepted, hom FAIL",
    "(3,1): perturbation c_1^{1,1} += 1 accepted, hom FAIL",
    "(3,1): perturbation c_1^{1,1} += 2 accepted, hom FAIL",
    "(3,1): perturbation c_2^{1,1} += 1 accepted, hom FAIL",
    "(3,1): perturbation c_2^{1,1} += 2 accepted, hom FAIL",
];

/// Criteria that cannot hold as stated, with the exact failure text they are expected to produce.
fn unattainable(n: u32) -> Option<String> {
    (n == 3).then(|| STILL_ASSOCIATIVE.join("; "))
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn fx(rel: &str) -> PathBuf {
    fixtures().join(rel)
}

fn cfg() -> GbConfig {
    GbConfig::capped(12)
}

fn q() -> Characteristic {
    Characteristic::ZERO
}

// --- 1, 2 ---------------------------------------------------------------------------------------

const COMMUTATION_FIXTURES: &[&str] = &[
    "gammas/derivation.json",
    "gammas/sl2.json",
    "gammas/hs_2_2.json",
    "gammas/hs_3_1.json",
    "gammas/mixed_f2.json",
];

fn free_commutativity() -> Check {
    let mut notes = Vec::new();
    for rel in COMMUTATION_FIXTURES {
        let (field, g) = load_gamma(&fx(rel)).map_err(|e| e.to_string())?;
        g.check_all(&field).map_err(|e| format!("{}: fixture does not validate: {}", rel, e))?;
        let v = FreeModule::new(&g, &field);
        if let Some((i, j, w)) = v.first_commutation_failure(4) {
            return Err(format!("{}: defect at ({}, {}) on w{}", rel, i, j, w));
        }
        let words = normal_words_upto(&g.opset(), 4).len();
        notes.push(format!("{} ops/{} words", g.opset().len(), words));
    }
    Ok(notes.join(", "))
}

fn perturbed(g: &GammaSystem, u: u8, key: (usize, usize, usize)) -> Option<GammaSystem> {
    let ch = g.characteristic();
    let (i, j, l) = key;
    let mut lie = g.lie.clone();
    let mut hs = g.hs.clone();
    let t = if u == 1 { &mut lie } else { &mut hs };
    let old = t.get(l, i, j).cloned().unwrap_or_else(|| rf_int(ch, 0));
    t.set(l, i, j, old.add(&rf_int(ch, 1)));
    GammaSystem::new(g.algebras.clone(), lie, hs).ok()
}

/// Four perturbations per fixture that break Jacobi-associativity; each must show up as a defect.
fn perturbation_converse() -> Check {
    let mut total = 0;
    for rel in COMMUTATION_FIXTURES {
        let (field, g) = load_gamma(&fx(rel)).map_err(|e| e.to_string())?;
        let ops = g.opset();
        let mut found = 0;
        'outer: for (u, m) in [(1u8, ops.m1), (2u8, ops.m2)] {
            for i in 1..=m {
                for j in 1..=m {
                    for l in 1..=m {
                        let Some(p) = perturbed(&g, u, (i, j, l)) else { continue };
                        if p.check_jacobi_associative(&field).is_ok() {
                            continue;
                        }
                        let v = FreeModule::new(&p, &field);
                        if v.first_commutation_failure(3).is_none() {
                            return Err(format!("{}: r{} entry ({},{},{}) fails a validator but commutes", rel, u, i, j, l));
                        }
                        found += 1;
                        if found == 4 {
                            break 'outer;
                        }
                    }
                }
            }
        }
        if found == 0 {
            return Err(format!("{}: no perturbation breaks the validators", rel));
        }
        total += found;
    }
    Ok(format!("{} perturbations, all detected by length 3", total))
}

// --- 3 ------------------------------------------------------------------------------------------

/// `(∂_i ∂_j) ∂_k = ∂_i (∂_j ∂_k)` for constant coefficients, expanded over all indices including the unit.
fn associative_oracle(t: &CoeffTensor, ch: Characteristic, m: usize) -> bool {
    let c = |l: usize, i: usize, j: usize| -> RatFunc {
        match (i, j) {
            (0, _) => rf_int(ch, (l == j) as i64),
            (_, 0) => rf_int(ch, (l == i) as i64),
            _ => t.get(l, i, j).cloned().unwrap_or_else(|| rf_int(ch, 0)),
        }
    };
    for i in 0..=m {
        for j in 0..=m {
            for k in 0..=m {
                for r in 0..=m {
                    let mut left = rf_int(ch, 0);
                    let mut right = rf_int(ch, 0);
                    for l in 0..=m {
                        left = left.add(&c(l, i, j).mul(&c(r, l, k)));
                        right = right.add(&c(l, j, k).mul(&c(r, i, l)));
                    }
                    if left != right {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn binomial_associativity() -> Check {
    let zero = |_: usize, x: &RatFunc| x.sub(x);
    let mut accepted = Vec::new();
    let mut rejected = 0;
    for (p, n) in [(2u64, 1u32), (2, 2), (3, 1)] {
        let (alg, t) = iterative_hs_coeffs(p, n);
        check_associative_table(&alg, &t, &zero).map_err(|e| format!("({},{}) rejected: {}", p, n, e))?;
        let ch = alg.characteristic();
        let m = alg.m();
        for i in 1..=m {
            for j in 1..=m {
                for l in 1..=m {
                    for delta in 1..p as i64 {
                        let mut bad = t.clone();
                        let old = t.get(l, i, j).cloned().unwrap_or_else(|| rf_int(ch, 0));
                        bad.set(l, i, j, old.add(&rf_int(ch, delta)));
                        if check_associative_table(&alg, &bad, &zero).is_ok() {
                            if !associative_oracle(&bad, ch, m) {
                                return Err(format!("({},{}): c_{}^{{{},{}}} accepted but not associative", p, n, l, i, j));
                            }
                            let hom = GammaSystem::new(OperatorAlgebras::pure_hs(alg.clone()), CoeffTensor::new(), bad.clone())
                                .is_ok_and(|g| g.check_hom(2).is_ok());
                            let hom = if hom { "hom PASS" } else { "hom FAIL" };
                            accepted.push(format!("({},{}): perturbation c_{}^{{{},{}}} += {} accepted, {}", p, n, l, i, j, delta, hom));
                        } else {
                            rejected += 1;
                        }
                    }
                }
            }
        }
    }
    if accepted.is_empty() {
        Ok(format!("{} perturbations rejected", rejected))
    } else {
        Err(accepted.join("; "))
    }
}

// --- 4 ------------------------------------------------------------------------------------------

/// `r(ε_l)` as `(i, j) ↦ coefficient` with the unit terms written out.
fn coproduct(t: &CoeffTensor, ch: Characteristic, m: usize, l: usize) -> Vec<((usize, usize), RatFunc)> {
    let one = rf_int(ch, 1);
    if l == 0 {
        return vec![((0, 0), one)];
    }
    let mut out = vec![((0, l), one.clone()), ((l, 0), one)];
    for i in 1..=m {
        for j in 1..=m {
            if let Some(c) = t.get(l, i, j) {
                out.push(((i, j), c.clone()));
            }
        }
    }
    out
}

fn tensor_reduction() -> Check {
    let mut notes = Vec::new();
    for (a, b) in [((2u64, 1u32), (2u64, 1u32)), ((2, 1), (2, 2)), ((3, 1), (3, 1))] {
        let (alg_a, ta) = iterative_hs_coeffs(a.0, a.1);
        let (alg_b, tb) = iterative_hs_coeffs(b.0, b.1);
        let ch = alg_a.characteristic();
        let (tt, c) = hs_tensor_reduce_pair((&alg_a, &ta), (&alg_b, &tb)).map_err(|e| e.to_string())?;
        let (alg, c2) = hs_tensor_reduce(&[(alg_a.clone(), ta.clone()), (alg_b.clone(), tb.clone())]).map_err(|e| e.to_string())?;
        if c2 != c || alg != tt.algebra {
            return Err("list reduction differs from the pairwise step".into());
        }
        let n = tt.pairs.len();
        let pos = |p: (usize, usize)| tt.pairs.iter().position(|&x| x == p).expect("pair in basis");
        // (r_a ⊗ r_b)(ε_l ⊗ ε_l') expanded term by term
        for z in 0..n {
            let (l, l2) = tt.pairs[z];
            let mut expect = vec![vec![rf_int(ch, 0); n]; n];
            for ((i, j), x) in coproduct(&ta, ch, alg_a.m(), l) {
                for ((i2, j2), y) in coproduct(&tb, ch, alg_b.m(), l2) {
                    let (xi, yi) = (pos((i, i2)), pos((j, j2)));
                    expect[xi][yi] = expect[xi][yi].add(&x.mul(&y));
                }
            }
            for x in 0..n {
                for y in 0..n {
                    let got = match (x, y) {
                        (0, _) => rf_int(ch, (y == z) as i64),
                        (_, 0) => rf_int(ch, (x == z) as i64),
                        _ if z == 0 => rf_int(ch, 0),
                        _ => c.get(z, x, y).cloned().unwrap_or_else(|| rf_int(ch, 0)),
                    };
                    if got != expect[x][y] {
                        return Err(format!("{:?}x{:?}: coefficient ({},{},{}) differs", a, b, x, y, z));
                    }
                }
            }
        }
        let g = GammaSystem::new(OperatorAlgebras::pure_hs(alg.clone()), CoeffTensor::new(), c)
            .map_err(|e| e.to_string())?;
        let consts = ConstantCoeffs(ch);
        g.check_hom(2).map_err(|e| format!("{:?}x{:?}: {}", a, b, e))?;
        g.check_associative(&consts).map_err(|e| format!("{:?}x{:?}: {}", a, b, e))?;
        // ∂_{(i,j)} = ∂_{(i,0)} ∂_{(0,j)} on the free module
        let v = FreeModule::new(&g, &consts);
        let mut words = 0;
        for w in normal_words_upto(&g.opset(), 3) {
            words += 1;
            let base = v.w(w.clone());
            for i in 1..=alg_a.m() {
                for j in 1..=alg_b.m() {
                    let lhs = v.apply_vec(OpIndex::hs(pos((i, j))), &base);
                    let rhs = v.apply_vec(OpIndex::hs(pos((i, 0))), &v.apply_vec(OpIndex::hs(pos((0, j))), &base));
                    if lhs != rhs {
                        return Err(format!("{:?}x{:?}: composite ({},{}) differs on w{}", a, b, i, j, w));
                    }
                }
            }
        }
        notes.push(format!("{:?}x{:?} dim {} ({} words)", a, b, alg.dim(), words));
    }
    Ok(notes.join(", "))
}

// --- 5, 6 ---------------------------------------------------------------------------------------

/// y' = y²: differentiate a polynomial in y by the chain rule, `D p = p'(y) y²`.
fn riccati_oracle(k: usize) -> Vec<i64> {
    let mut p = vec![0i64, 1];
    for _ in 0..k {
        let mut d = vec![0i64; p.len() + 1];
        for (e, c) in p.iter().enumerate().skip(1) {
            d[e + 1] += c * e as i64;
        }
        p = d;
    }
    p
}

fn setup_kernel<'a>(setup: &'a KernelSetup, env: &'a KernelEnv<'a>) -> Result<Kernel<'a>, String> {
    Kernel::from_texts(env, setup.n, setup.r, &setup.relations).map_err(|e| e.to_string())
}

fn riccati_realisation() -> Check {
    let setup = load_kernel(&fx("kernels/riccati.json")).map_err(|e| e.to_string())?;
    let env = setup.env(cfg()).map_err(|e| e.to_string())?;
    let k = setup_kernel(&setup, &env)?;
    let real = k.realize(2, 6, RouteChoice::Least).map_err(|e| e.to_string())?;
    let d = OpIndex::lie(1);
    for order in 1..=6 {
        let poly = riccati_oracle(order);
        let mut text = jet_name(&Word(vec![d; order]), 1);
        for (e, c) in poly.iter().enumerate().filter(|(_, c)| **c != 0) {
            text.push_str(&format!(" - {}*x1_[]^{}", c, e));
        }
        let rel = env.parse_relation(real.space(), &text).map_err(|e| e.to_string())?;
        if !real.contains(&rel) {
            return Err(format!("order {}: `{}` is not in the ideal", order, text));
        }
    }
    let b = setup.field.parse("-1/t").map_err(|e| e.to_string())?;
    k.specialize_check(&[b]).map_err(|r| format!("-1/t rejected at {}", r))?;
    let one = setup.field.parse("1").map_err(|e| e.to_string())?;
    if k.specialize_check(&[one]).is_ok() {
        return Err("b = 1 accepted".into());
    }
    Ok(format!("x^(k) = k! x^(k+1) for k <= 6 in a kernel of {} jets; -1/t accepted, 1 rejected", real.space().len()))
}

fn generic_realisation() -> Check {
    let setup = load_kernel(&fx("kernels/generic_two_derivations.json")).map_err(|e| e.to_string())?;
    let env = setup.env(cfg()).map_err(|e| e.to_string())?;
    let k = setup_kernel(&setup, &env)?;
    let real = k.realize(0, 4, RouteChoice::Least).map_err(|e| e.to_string())?;
    if !real.relations().is_empty() {
        return Err(format!("relations appeared: {:?}", real.relation_texts()));
    }
    let expect = normal_words_upto(&env.ops(), 4).len();
    if real.space().len() != expect {
        return Err(format!("{} jets, expected {}", real.space().len(), expect));
    }
    Ok(format!("{} free jets", expect))
}

// --- 7, 8, 9 ------------------------------------------------------------------------------------

const KERNEL_FIXTURES: &[&str] = &[
    "kernels/riccati.json",
    "kernels/generic_two_derivations.json",
    "kernels/exp_two_derivations.json",
    "kernels/late_leader.json",
    "kernels/sl2_eigen.json",
    "kernels/hs_2_2.json",
    "kernels/hs_2_2_stuck.json",
    "kernels/mixed_f2.json",
];

fn uniqueness() -> Check {
    let mut same = 0;
    let mut stuck = Vec::new();
    for rel in KERNEL_FIXTURES {
        let setup = load_kernel(&fx(rel)).map_err(|e| e.to_string())?;
        let env = setup.env(cfg()).map_err(|e| e.to_string())?;
        let a = setup_kernel(&setup, &env)?.prolong_to(3, RouteChoice::Least);
        // a second, independent run: fresh environment and the other route choice
        let env2 = setup.env(cfg()).map_err(|e| e.to_string())?;
        let b = setup_kernel(&setup, &env2)?.prolong_to(3, RouteChoice::Greatest);
        match (a, b) {
            (Ok(a), Ok(b)) if a.isomorphic(&b) => same += 1,
            (Ok(_), Ok(_)) => return Err(format!("{}: runs differ", rel)),
            (Err(x), Err(y)) if x == y => stuck.push(format!("{} ({})", rel, x.code())),
            (x, y) => return Err(format!("{}: one run failed: {:?} / {:?}", rel, x.err(), y.err())),
        }
    }
    Ok(format!("{} isomorphic pairs; consistently stuck: {}", same, stuck.join(", ")))
}

fn route_agreement() -> Check {
    let mut reports = 0;
    let mut multi = 0;
    for rel in KERNEL_FIXTURES {
        let setup = load_kernel(&fx(rel)).map_err(|e| e.to_string())?;
        let env = setup.env(cfg()).map_err(|e| e.to_string())?;
        if env.ops().len() < 2 {
            continue;
        }
        let mut k = setup_kernel(&setup, &env)?;
        while k.r() < 4 {
            let p = match k.generic_prolong(RouteChoice::Least) {
                Ok(p) => p,
                Err(e) if e.code() == "NO_PROLONGATION" => break,
                Err(e) => return Err(format!("{}: {}", rel, e)),
            };
            for r in &p.routes {
                reports += 1;
                if r.routes.len() > 1 {
                    multi += 1;
                }
                if !r.agree {
                    return Err(format!("{}: routes to {} disagree", rel, jet_name(&r.jet.0, r.jet.1)));
                }
            }
            k = p.kernel;
        }
    }
    Ok(format!("{} jets checked, {} with several routes", reports, multi))
}

fn leader_structure() -> Check {
    let mut checked = 0;
    for rel in ["kernels/riccati.json", "kernels/exp_two_derivations.json", "kernels/late_leader.json", "kernels/sl2_eigen.json", "kernels/hs_2_2.json"] {
        let setup = load_kernel(&fx(rel)).map_err(|e| e.to_string())?;
        let env = setup.env(cfg()).map_err(|e| e.to_string())?;
        let k = setup_kernel(&setup, &env)?.prolong_to(4, RouteChoice::Least).map_err(|e| format!("{}: {}", rel, e))?;
        let rep = k.leaders();
        let seps: BTreeSet<(Word, usize)> = rep.leaders.iter().filter(|l| l.separable).map(|l| l.jet.clone()).collect();
        for (w, t) in &seps {
            for (x, s) in k.space().jets() {
                if s == t && w.divides(x) && !seps.contains(&(x.clone(), *s)) {
                    return Err(format!("{}: {} lies above {} but is no separable leader", rel, jet_name(x, *s), jet_name(w, *t)));
                }
            }
            checked += 1;
        }
    }
    let mut rng = StdRng::seed_from_u64(7);
    let ops = OpSet { m1: 3, m2: 0 };
    for _ in 0..50 {
        let size = rng.gen_range(0..25);
        let vs: Vec<Vec<u32>> = (0..size).map(|_| (0..3).map(|_| rng.gen_range(0..4)).collect()).collect();
        // pairwise oracle: keep v unless some other distinct vector sits below it
        let mut oracle: Vec<Vec<u32>> = Vec::new();
        for v in &vs {
            let below = vs.iter().any(|w| w != v && w.iter().zip(v).all(|(a, b)| a <= b));
            if !below && !oracle.contains(v) {
                oracle.push(v.clone());
            }
        }
        let mut got = minimal_vectors(&vs);
        got.sort();
        oracle.sort();
        if got != oracle {
            return Err(format!("minimal_vectors on {:?}", vs));
        }
        let words: Vec<(Word, usize)> = vs
            .iter()
            .map(|v| {
                let w: Vec<OpIndex> = (0..3).rev().flat_map(|k| std::iter::repeat_n(OpIndex::lie(3 - k), v[k] as usize)).collect();
                let mut w = Word(w);
                w.0.sort();
                (w, 1)
            })
            .collect();
        let mut mins: Vec<Vec<u32>> = dickson_minimize(&words).iter().map(|(w, _)| w.psi(&ops)).collect();
        mins.sort();
        if mins != oracle {
            return Err(format!("dickson_minimize on {:?}", vs));
        }
    }
    Ok(format!("{} separable leaders closed upward; 50 random sets minimized", checked))
}

// --- 10 -----------------------------------------------------------------------------------------

fn univariate(f: &DField, cs: &[RatFunc]) -> Poly<RatFunc> {
    let ctx = PolyCtx::new(rf_ctx(f.characteristic()), MonoOrder::Lex);
    Poly::from_terms(
        ctx,
        cs.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (if e == 0 { Monomial::one() } else { Monomial::var(0, e as u32) }, c.clone()))
            .collect::<Vec<_>>(),
    )
}

fn random_coeff(rng: &mut StdRng, f: &DField) -> RatFunc {
    let (a, b, c) = (rng.gen_range(-3..4), rng.gen_range(-3..4), rng.gen_range(0..3));
    let den = if rng.gen_bool(0.3) { format!("(t + {})", rng.gen_range(1..3)) } else { "1".into() };
    f.parse(&format!("(({})*t^{} + ({}))/{}", a, c, b, den)).expect("parsable")
}

fn extension_lemmas() -> Check {
    let k = load_field(&fx("fields/q_t.json")).map_err(|e| e.to_string())?;
    let alg: &LocalAlgebra = &k.algebras().lie;
    let mut rng = StdRng::seed_from_u64(11);
    let mut done = 0;
    let mut draws = 0;
    while done < 20 {
        draws += 1;
        let deg = rng.gen_range(1..=3);
        let mut cs: Vec<RatFunc> = (0..=deg).map(|_| random_coeff(&mut rng, &k)).collect();
        if cs[deg].is_zero() {
            cs[deg] = rf_int(q(), 1);
        }
        let f = univariate(&k, &cs);
        let ext = match k.extend_separable(&f) {
            Ok(x) => x,
            Err(workbench_core::dfield::DFieldError::NotSeparable) => continue,
            Err(e) => return Err(e.to_string()),
        };
        let mctx = ModCtx { modulus: &ext.minpoly, ch: q() };
        let mut a = vec![ModElem::new(mctx, vec![rf_int(q(), 0), rf_int(q(), 1)])];
        for i in 1..=alg.m() {
            a.push(ModElem::new(mctx, ext.value(OpIndex::lie(i)).expect("value").to_vec()));
        }
        let ea = DVector { coords: a };
        // Σ e(c_k) e(a)^k, summed term by term
        let mut total = DVector { coords: vec![ModElem::zero(mctx); alg.dim()] };
        for (e, c) in cs.iter().enumerate() {
            let ec = k.apply_e(1, c).map(|x| ModElem::constant(mctx, x.clone()));
            total = total.add(&alg.mul(&ec, &alg.pow(&ea, e as u32)));
        }
        if total.coords.iter().any(|x| !x.is_zero()) {
            return Err(format!("f^e(e(a)) != 0 for coefficients {:?}", cs.iter().map(|c| k.render(c)).collect::<Vec<_>>()));
        }
        done += 1;
    }
    let c2 = load_field(&fx("fields/char2_counterexample.json")).map_err(|e| e.to_string())?;
    let t = c2.parse("t").map_err(|e| e.to_string())?;
    let ch = c2.characteristic();
    let f = univariate(&c2, &[t, rf_int(ch, 0), rf_int(ch, 1)]);
    let v = c2.extend_inseparable_decide(&f).map_err(|e| e.to_string())?;
    if v.extendable {
        return Err("x^2 + t reported extendable".into());
    }
    let fv = frobenius_assumption(&truncated(ch, 2), None);
    if !matches!(fv, FrobeniusVerdict::Fail { .. }) {
        return Err("Frobenius assumption passes for F2[e]/(e^3)".into());
    }
    Ok(format!("20 separable roots ({} draws); x^2 + t: {}; F2[e]/(e^3): {}", draws, v, fv))
}

// --- 11 -----------------------------------------------------------------------------------------

fn cli(args: &[&str]) -> workbench::Outcome {
    workbench::run(std::iter::once("workbench").chain(args.iter().copied()))
}

fn all_fixture_files() -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![fixtures()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).expect("fixture dir") {
            let p = e.expect("entry").path();
            if p.is_dir() {
                stack.push(p);
            } else if p.extension().is_some_and(|x| x == "json") {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

fn schema(name: &str) -> jsonschema::Validator {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{}.schema.json", name));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(p).expect("schema")).expect("schema json");
    jsonschema::validator_for(&v).expect("valid schema")
}

fn cli_contract() -> Check {
    let files = all_fixture_files();
    let mut canon = 0;
    for p in &files {
        let s = p.to_str().expect("utf8 path");
        let out = cli(&["fmt", s]);
        if out.code != 0 {
            continue; // a fixture meant to be rejected
        }
        let src = std::fs::read_to_string(p).map_err(|e| e.to_string())?;
        if out.stdout != src {
            return Err(format!("{} is not in canonical form", s));
        }
        // minified copy in the same directory so relative refs resolve
        let v: Value = serde_json::from_str(&src).map_err(|e| e.to_string())?;
        let tmp = tempfile::Builder::new().suffix(".json").tempfile_in(p.parent().expect("dir")).map_err(|e| e.to_string())?;
        std::fs::write(tmp.path(), serde_json::to_string(&v).expect("json")).map_err(|e| e.to_string())?;
        let again = cli(&["fmt", tmp.path().to_str().expect("utf8")]);
        if again.stdout != src {
            return Err(format!("{}: whitespace variant does not canonicalize", s));
        }
        canon += 1;
    }
    let cases: &[(&[&str], i32)] = &[
        (&["gamma", "check", "gammas/sl2.json", "--jacobi"], 0),
        (&["algebra", "validate", "bad.json"], 1),
        (&["kernel", "realize", "kernels/riccati.json", "--r", "2", "--order", "6"], 0),
        (&["algebra", "validate", "algebras/rank_fail.json"], 1),
        (&["gamma", "check", "gammas/not_skew.json"], 1),
        (&["kernel", "check-point", "kernels/riccati.json", "--values", "1"], 1),
        (&["kernel", "frobnicate"], 2),
        (&["algebra", "validate", "no_such_file.json"], 2),
    ];
    let report = schema("report");
    for (args, code) in cases {
        let mut full: Vec<String> = vec!["--format".into(), "json".into()];
        for a in args.iter() {
            let p = fx(a);
            full.push(if a.ends_with(".json") { p.to_string_lossy().into_owned() } else { a.to_string() });
        }
        let refs: Vec<&str> = full.iter().map(String::as_str).collect();
        let a = cli(&refs);
        let b = cli(&refs);
        if a.code != *code {
            return Err(format!("{:?}: exit {} instead of {}", args, a.code, code));
        }
        if a.stdout != b.stdout || a.code != b.code {
            return Err(format!("{:?}: output differs between runs", args));
        }
        if a.code != 2 || !a.stdout.is_empty() {
            let v: Value = serde_json::from_str(&a.stdout).map_err(|e| format!("{:?}: {}", args, e))?;
            let first = report.iter_errors(&v).next().map(|e| e.to_string());
            if let Some(err) = first {
                return Err(format!("{:?}: report violates schema: {}", args, err));
            }
        }
    }
    let mut malformed = tempfile::Builder::new().suffix(".json").tempfile().map_err(|e| e.to_string())?;
    std::io::Write::write_all(&mut malformed, b"{\"char\": 0, \"dim\": ").map_err(|e| e.to_string())?;
    let m = cli(&["algebra", "validate", malformed.path().to_str().expect("utf8")]);
    if m.code != 2 || !m.stdout.contains("PARSE_ERROR") {
        return Err(format!("malformed input: exit {}, {}", m.code, m.stdout));
    }
    let mut valid = 0;
    for p in &files {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let name = match FileKind::detect(&v) {
            Some(FileKind::Algebra) => "algebra",
            Some(FileKind::Field) => "dfield",
            Some(FileKind::Gamma) => "gamma",
            Some(FileKind::Kernel) => "kernel",
            None => return Err(format!("{}: unknown file kind", p.display())),
        };
        let first = schema(name).iter_errors(&v).next().map(|e| e.to_string());
        if let Some(err) = first {
            return Err(format!("{}: {}", p.display(), err));
        }
        valid += 1;
    }
    Ok(format!("{} canonical fixtures, {} exit-code cases, {} schema-valid files", canon, cases.len() + 1, valid))
}

fn main() {
    let criteria: Vec<(u32, &str, fn() -> Check)> = vec![
        (1, "free-module commutativity, |lambda| <= 4", free_commutativity),
        (2, "perturbation converse", perturbation_converse),
        (3, "associativity of binomial tables", binomial_associativity),
        (4, "HS tensor reduction", tensor_reduction),
        (5, "Riccati realisation vs recurrence oracle", riccati_realisation),
        (6, "generic kernel stays free", generic_realisation),
        (7, "generic prolongation uniqueness", uniqueness),
        (8, "route agreement", route_agreement),
        (9, "leader structure and Dickson minimization", leader_structure),
        (10, "extension lemmas", extension_lemmas),
        (11, "CLI round-trip, exit codes, schemas", cli_contract),
    ];
    let mut unexpected = 0;
    for (n, title, f) in criteria {
        let t0 = Instant::now();
        let res = f();
        let ms = t0.elapsed().as_millis();
        match &res {
            Ok(detail) => println!("criterion {:>2} PASS ({} ms) {}: {}", n, ms, title, detail),
            Err(why) => println!("criterion {:>2} FAIL ({} ms) {}: {}", n, ms, title, why),
        }
        match (res, unattainable(n)) {
            (Ok(_), None) => {}
            (Err(why), Some(expected)) if why == expected => {
                println!("             known unattainable, see the decisions ledger");
            }
            (Ok(_), Some(_)) => {
                println!("             recorded as unattainable but passed; update the ledger");
                unexpected += 1;
            }
            (Err(_), _) => unexpected += 1,
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
