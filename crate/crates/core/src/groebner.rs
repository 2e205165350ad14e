//! Buchberger's algorithm with the normal selection strategy, reduced bases, normal forms
//! and minimal polynomials by lex elimination.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cell::OnceCell;
use core::cmp::Ordering;

use crate::error::DegreeCapExceeded;
use crate::poly::{MonoOrder, Monomial, Poly};
use crate::ring::{Field, Ring};

/// Optional guard against runaway computations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GbConfig {
    pub degree_cap: Option<u32>,
}

impl GbConfig {
    pub fn unbounded() -> GbConfig {
        GbConfig { degree_cap: None }
    }

    pub fn capped(cap: u32) -> GbConfig {
        GbConfig {
            degree_cap: Some(cap),
        }
    }

    fn check(&self, p: &Poly<impl Field>) -> Result<(), DegreeCapExceeded> {
        match self.degree_cap {
            Some(cap) if p.total_degree() > cap => Err(DegreeCapExceeded {
                cap,
                reached: p.total_degree(),
            }),
            _ => Ok(()),
        }
    }
}

/// Fully reduces `f` by `basis` (every term, not only the leading one).
pub fn reduce<C: Field>(f: &Poly<C>, basis: &[Poly<C>]) -> Poly<C> {
    let order = basis.first().map(|b| b.order()).unwrap_or(f.order());
    let mut p = f.with_order(order);
    let ctx = p.poly_ctx();
    let mut rem: Vec<(Monomial, C)> = Vec::new();
    'outer: while let Some((m, c)) = p.lt().cloned() {
        for g in basis {
            let (gm, gc) = g.lt().expect("basis elements are nonzero");
            if gm.divides(&m) {
                let t = m.div(gm);
                let k = c.mul(&gc.inv());
                p = p.minus(&g.mul_term(&t, &k));
                continue 'outer;
            }
        }
        rem.push((m.clone(), c));
        p = p.minus(&Poly::monomial(ctx, m, rem.last().expect("pushed").1.clone()));
    }
    // Remainder terms were produced in descending order.
    let mut out = Poly::zero(ctx);
    for (m, c) in rem {
        out = out.plus(&Poly::monomial(ctx, m, c));
    }
    out
}

fn spoly<C: Field>(f: &Poly<C>, g: &Poly<C>) -> Poly<C> {
    let (fm, fc) = f.lt().expect("nonzero");
    let (gm, gc) = g.lt().expect("nonzero");
    let l = fm.lcm(gm);
    f.mul_term(&l.div(fm), &fc.inv())
        .minus(&g.mul_term(&l.div(gm), &gc.inv()))
}

/// The reduced Gröbner basis of the ideal generated by `gens`, sorted by descending leading monomial.
pub fn groebner<C: Field>(gens: &[Poly<C>], order: MonoOrder, cfg: GbConfig) -> Result<Vec<Poly<C>>, DegreeCapExceeded> {
    let mut basis: Vec<Poly<C>> = Vec::new();
    for g in gens {
        let g = g.with_order(order);
        if !g.is_zero() {
            cfg.check(&g)?;
            basis.push(g.monic());
        }
    }
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.insert((i, j));
        }
    }
    let lm = |b: &Vec<Poly<C>>, i: usize| b[i].lm().expect("nonzero").clone();
    while !pairs.is_empty() {
        // Normal strategy: smallest lcm first, ties by index.
        let &(i, j) = pairs
            .iter()
            .min_by(|a, b| {
                let la = lm(&basis, a.0).lcm(&lm(&basis, a.1));
                let lb = lm(&basis, b.0).lcm(&lm(&basis, b.1));
                match order.cmp(&la, &lb) {
                    Ordering::Equal => a.cmp(b),
                    o => o,
                }
            })
            .expect("nonempty");
        pairs.remove(&(i, j));
        let (mi, mj) = (lm(&basis, i), lm(&basis, j));
        if mi.is_coprime(&mj) {
            continue;
        }
        let l = mi.lcm(&mj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lm(&basis, k).divides(&l)
                && !pairs.contains(&(i.min(k), i.max(k)))
                && !pairs.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let h = reduce(&spoly(&basis[i], &basis[j]), &basis);
        if h.is_zero() {
            continue;
        }
        cfg.check(&h)?;
        let k = basis.len();
        basis.push(h.monic());
        for i in 0..k {
            pairs.insert((i, k));
        }
    }
    Ok(interreduce(basis, order))
}

fn interreduce<C: Field>(basis: Vec<Poly<C>>, order: MonoOrder) -> Vec<Poly<C>> {
    // Drop elements whose leading monomial is divisible by another one.
    let mut minimal: Vec<Poly<C>> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let m = g.lm().expect("nonzero");
        let redundant = basis.iter().enumerate().any(|(l, h)| {
            let hm = h.lm().expect("nonzero");
            l != k && hm.divides(m) && (hm != m || l < k)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out: Vec<Poly<C>> = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Poly<C>> = minimal
            .iter()
            .enumerate()
            .filter(|&(l, _)| l != k)
            .map(|(_, p)| p.clone())
            .collect();
        let (m, c) = minimal[k].lt().cloned().expect("nonzero");
        let tail = minimal[k].minus(&Poly::monomial(minimal[k].poly_ctx(), m.clone(), c.clone()));
        let red = reduce(&tail, &others);
        out.push(red.plus(&Poly::monomial(minimal[k].poly_ctx(), m, c)).monic());
    }
    out.sort_by(|a, b| order.cmp(b.lm().expect("nonzero"), a.lm().expect("nonzero")));
    out
}

/// Remainder of `f` modulo a Gröbner basis.
pub fn normal_form<C: Field>(f: &Poly<C>, gb: &[Poly<C>]) -> Poly<C> {
    reduce(f, gb)
}

/// An ideal with lazily computed, cached reduced bases.
#[derive(Clone, Debug)]
pub struct Ideal<C: Field> {
    gens: Vec<Poly<C>>,
    cfg: GbConfig,
    lex: OnceCell<Vec<Poly<C>>>,
    grevlex: OnceCell<Vec<Poly<C>>>,
}

impl<C: Field> Ideal<C> {
    pub fn new(gens: Vec<Poly<C>>, cfg: GbConfig) -> Ideal<C> {
        Ideal {
            gens,
            cfg,
            lex: OnceCell::new(),
            grevlex: OnceCell::new(),
        }
    }

    pub fn gens(&self) -> &[Poly<C>] {
        &self.gens
    }

    pub fn basis(&self, order: MonoOrder) -> Result<&[Poly<C>], DegreeCapExceeded> {
        let cell = match order {
            MonoOrder::Lex => &self.lex,
            MonoOrder::GrevLex => &self.grevlex,
        };
        if cell.get().is_none() {
            let gb = groebner(&self.gens, order, self.cfg)?;
            let _ = cell.set(gb);
        }
        Ok(cell.get().expect("just set"))
    }

    pub fn normal_form(&self, f: &Poly<C>, order: MonoOrder) -> Result<Poly<C>, DegreeCapExceeded> {
        Ok(reduce(f, self.basis(order)?))
    }

    pub fn contains(&self, f: &Poly<C>) -> Result<bool, DegreeCapExceeded> {
        Ok(self.normal_form(f, MonoOrder::GrevLex)?.is_zero())
    }
}

/// Minimal polynomial of `v` over the variables `preds` modulo the ideal, by lex elimination.
///
/// Variables outside `preds ∪ {v}` are eliminated; `None` means `v` is transcendental.
pub fn min_poly<C: Field>(
    v: u32,
    ideal: &[Poly<C>],
    preds: &BTreeSet<u32>,
    cfg: GbConfig,
) -> Result<Option<Poly<C>>, DegreeCapExceeded> {
    // Rank preds lowest, then v, then everything else, keeping relative order inside blocks.
    let mut all: BTreeSet<u32> = ideal.iter().flat_map(|p| p.vars()).collect();
    all.insert(v);
    let mut ranked: Vec<u32> = preds.iter().copied().filter(|p| *p != v).collect();
    ranked.push(v);
    ranked.extend(all.iter().copied().filter(|x| *x != v && !preds.contains(x)));
    let pos = |x: u32| ranked.iter().position(|&y| y == x).expect("ranked") as u32;
    let back = |x: u32| ranked[x as usize];
    let gens: Vec<Poly<C>> = ideal.iter().map(|p| p.remap_vars(&pos)).collect();
    let gb = groebner(&gens, MonoOrder::Lex, cfg)?;
    let vk = pos(v);
    Ok(pick_min_poly(&gb, vk).map(|p| p.remap_vars(&back)))
}

/// Given a lex basis, the element with largest variable `v` of least `v`-degree.
pub fn pick_min_poly<C: Field>(gb: &[Poly<C>], v: u32) -> Option<Poly<C>> {
    gb.iter()
        .filter(|g| g.max_var() == Some(v))
        .min_by(|a, b| {
            a.degree_in(v)
                .cmp(&b.degree_in(v))
                .then_with(|| MonoOrder::Lex.cmp(a.lm().expect("nonzero"), b.lm().expect("nonzero")))
        })
        .cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyCtx;
    use crate::scalar::{Characteristic, Scalar};

    fn ctx(order: MonoOrder) -> PolyCtx<Characteristic> {
        PolyCtx::new(Characteristic::ZERO, order)
    }

    // variables: y = 0, x = 1, so x > y
    fn x(o: MonoOrder) -> Poly<Scalar> {
        Poly::var(ctx(o), 1)
    }
    fn y(o: MonoOrder) -> Poly<Scalar> {
        Poly::var(ctx(o), 0)
    }

    #[test]
    fn small_lex_basis() {
        let o = MonoOrder::Lex;
        let gb = groebner(&[x(o).times(&x(o)).minus(&y(o)), y(o)], o, GbConfig::unbounded()).unwrap();
        assert_eq!(gb, alloc::vec![x(o).times(&x(o)), y(o)]);
    }

    #[test]
    fn empty_and_duplicate() {
        let o = MonoOrder::GrevLex;
        assert!(groebner::<Scalar>(&[], o, GbConfig::unbounded()).unwrap().is_empty());
        assert_eq!(groebner(&[x(o), x(o)], o, GbConfig::unbounded()).unwrap(), alloc::vec![x(o)]);
    }

    #[test]
    fn normal_forms() {
        let o = MonoOrder::Lex;
        let one = Poly::one(ctx(o));
        let gx = groebner(&[x(o)], o, GbConfig::unbounded()).unwrap();
        assert!(normal_form(&x(o).times(&x(o)), &gx).is_zero());
        let gx2 = groebner(&[x(o).times(&x(o))], o, GbConfig::unbounded()).unwrap();
        assert_eq!(normal_form(&x(o).plus(&one), &gx2), x(o).plus(&one));
        let gxy = groebner(&[x(o).minus(&y(o))], o, GbConfig::unbounded()).unwrap();
        assert_eq!(normal_form(&x(o).times(&y(o)), &gxy), y(o).times(&y(o)));
    }

    #[test]
    fn min_polys() {
        let o = MonoOrder::Lex;
        let preds: BTreeSet<u32> = [0].into_iter().collect();
        // here the variable of interest is y = index 1 and the predecessor x = index 0
        let xv = Poly::<Scalar>::var(ctx(o), 0);
        let yv = Poly::<Scalar>::var(ctx(o), 1);
        let f = yv.minus(&xv.times(&xv));
        assert_eq!(min_poly(1, core::slice::from_ref(&f), &preds, GbConfig::unbounded()).unwrap(), Some(f));
        assert_eq!(min_poly::<Scalar>(1, &[], &preds, GbConfig::unbounded()).unwrap(), None);
        let g = yv.times(&yv).minus(&xv);
        assert_eq!(min_poly(1, core::slice::from_ref(&g), &preds, GbConfig::unbounded()).unwrap(), Some(g));
    }

    #[test]
    fn degree_cap_trips() {
        let o = MonoOrder::GrevLex;
        let f = x(o).pow(5).minus(&y(o));
        assert!(groebner(&[f], o, GbConfig::capped(3)).is_err());
    }
}
