//! Operator indices, words over them, normal indices and the orders used by jets.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::ParseError;

/// `(u, i)`: `u = 1` for Lie type, `u = 2` for HS type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OpIndex {
    pub u: u8,
    pub i: usize,
}

impl OpIndex {
    pub const fn lie(i: usize) -> OpIndex {
        OpIndex { u: 1, i }
    }

    pub const fn hs(i: usize) -> OpIndex {
        OpIndex { u: 2, i }
    }

    pub fn is_lie(self) -> bool {
        self.u == 1
    }

    pub fn is_hs(self) -> bool {
        self.u == 2
    }

    pub fn same_type(self, o: OpIndex) -> bool {
        self.u == o.u
    }
}

// HS indices sit below all Lie indices.
impl Ord for OpIndex {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.u == 1, self.i).cmp(&(o.u == 1, o.i))
    }
}

impl PartialOrd for OpIndex {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for OpIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.u, self.i)
    }
}

impl OpIndex {
    pub fn parse(s: &str) -> Result<OpIndex, ParseError> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| ParseError::new(0, "expected `u,i`"))?;
        let u: u8 = a.trim().parse().map_err(|_| ParseError::new(0, "bad operator type"))?;
        let i: usize = b
            .trim()
            .parse()
            .map_err(|_| ParseError::new(a.len() + 1, "bad operator index"))?;
        if !(u == 1 || u == 2) || i == 0 {
            return Err(ParseError::new(0, "operator must be `1,i` or `2,i` with i >= 1"));
        }
        Ok(OpIndex { u, i })
    }
}

/// The operator alphabet: `m1` Lie indices and `m2` HS indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OpSet {
    pub m1: usize,
    pub m2: usize,
}

impl OpSet {
    pub fn len(&self) -> usize {
        self.m1 + self.m2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All indices in ascending order.
    pub fn ops(&self) -> Vec<OpIndex> {
        (1..=self.m2)
            .map(OpIndex::hs)
            .chain((1..=self.m1).map(OpIndex::lie))
            .collect()
    }

    pub fn ops_of(&self, u: u8) -> Vec<OpIndex> {
        match u {
            1 => (1..=self.m1).map(OpIndex::lie).collect(),
            _ => (1..=self.m2).map(OpIndex::hs).collect(),
        }
    }

    pub fn contains(&self, op: OpIndex) -> bool {
        op.i >= 1 && op.i <= if op.is_lie() { self.m1 } else { self.m2 }
    }

    /// Position in the ascending order.
    pub fn rank(&self, op: OpIndex) -> usize {
        if op.is_hs() {
            op.i - 1
        } else {
            self.m2 + op.i - 1
        }
    }

    pub fn max(&self) -> Option<OpIndex> {
        self.ops().last().copied()
    }
}

/// A finite word over the operator alphabet; `ξ = (i_1, ..., i_r)` acts as `∂_{i_1} ⋯ ∂_{i_r}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<OpIndex>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[OpIndex] {
        &self.0
    }

    pub fn first(&self) -> Option<OpIndex> {
        self.0.first().copied()
    }

    /// `(i, ξ)`.
    pub fn prepend(&self, i: OpIndex) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(i);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    /// `ξ` without its first entry.
    pub fn tail(&self) -> Word {
        Word(self.0[1..].to_vec())
    }

    pub fn hs_count(&self) -> usize {
        self.0.iter().filter(|o| o.is_hs()).count()
    }

    /// 0 iff at least two HS entries.
    pub fn chi(&self) -> u8 {
        (self.hs_count() < 2) as u8
    }

    /// Non-increasing with at most one HS entry.
    pub fn is_normal(&self) -> bool {
        self.hs_count() <= 1 && self.0.windows(2).all(|w| w[0] >= w[1])
    }

    /// ∅ when two or more HS entries, else the descending reordering.
    pub fn rho(&self) -> Word {
        if self.hs_count() >= 2 {
            return Word::empty();
        }
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Word(v)
    }

    /// Occurrence count of `op`.
    pub fn count(&self, op: OpIndex) -> u32 {
        self.0.iter().filter(|&&o| o == op).count() as u32
    }

    /// Multidegree counts listed from the largest index down.
    pub fn psi(&self, ops: &OpSet) -> Vec<u32> {
        ops.ops().iter().rev().map(|&o| self.count(o)).collect()
    }

    /// The normal word with one occurrence of `op` removed.
    pub fn remove_one(&self, op: OpIndex) -> Option<Word> {
        let k = self.0.iter().position(|&o| o == op)?;
        let mut v = self.0.clone();
        v.remove(k);
        Some(Word(v))
    }

    /// Product order: multiset inclusion (componentwise ψ dominance).
    pub fn divides(&self, o: &Word) -> bool {
        let mut seen: Vec<OpIndex> = Vec::new();
        for &op in &self.0 {
            if seen.contains(&op) {
                continue;
            }
            seen.push(op);
            if self.count(op) > o.count(op) {
                return false;
            }
        }
        true
    }

    /// `[u,i;u,i;...]`.
    pub fn text(&self) -> String {
        let mut s = String::from("[");
        for (k, op) in self.0.iter().enumerate() {
            if k > 0 {
                s.push(';');
            }
            s.push_str(&alloc::format!("{}", op));
        }
        s.push(']');
        s
    }

    pub fn parse(s: &str) -> Result<Word, ParseError> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| ParseError::new(0, "index must be written `[u,i;...]`"))?;
        if inner.trim().is_empty() {
            return Ok(Word::empty());
        }
        let mut v = Vec::new();
        let mut pos = 1;
        for part in inner.split(';') {
            let op = OpIndex::parse(part).map_err(|e| ParseError::new(pos + e.pos, e.msg))?;
            v.push(op);
            pos += part.len() + 1;
        }
        Ok(Word(v))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

/// The ⊴ order on normal indices tagged by a variable number: `(|ξ|, t, ψ(ξ))` lexicographically.
///
/// For normal words comparing ψ lexicographically agrees with comparing the words themselves.
pub fn tri_cmp(a: (&Word, usize), b: (&Word, usize)) -> Ordering {
    (a.0.len(), a.1).cmp(&(b.0.len(), b.1)).then_with(|| a.0.0.cmp(&b.0.0))
}

pub fn tri_leq(a: (&Word, usize), b: (&Word, usize)) -> bool {
    tri_cmp(a, b) != Ordering::Greater
}

/// ℕ^𝔡 of length exactly `r`, ascending in ⊴.
pub fn normal_words(ops: &OpSet, r: usize) -> Vec<Word> {
    fn lie_multisets(m1: usize, r: usize, max: usize, prefix: &mut Vec<OpIndex>, out: &mut Vec<Vec<OpIndex>>) {
        if r == 0 {
            out.push(prefix.clone());
            return;
        }
        for i in (1..=max.min(m1)).rev() {
            prefix.push(OpIndex::lie(i));
            lie_multisets(m1, r - 1, i, prefix, out);
            prefix.pop();
        }
    }
    let mut out: Vec<Word> = Vec::new();
    let mut lie_r = Vec::new();
    lie_multisets(ops.m1, r, ops.m1, &mut Vec::new(), &mut lie_r);
    out.extend(lie_r.into_iter().map(Word));
    if r >= 1 {
        let mut lie_r1 = Vec::new();
        lie_multisets(ops.m1, r - 1, ops.m1, &mut Vec::new(), &mut lie_r1);
        for w in lie_r1 {
            for j in 1..=ops.m2 {
                let mut v = w.clone();
                v.push(OpIndex::hs(j));
                out.push(Word(v));
            }
        }
    }
    out.sort();
    out
}

/// ℕ^𝔡_{≤r} in ⊴ order (length first).
pub fn normal_words_upto(ops: &OpSet, r: usize) -> Vec<Word> {
    (0..=r).flat_map(|k| normal_words(ops, k)).collect()
}

/// Componentwise dominance of count vectors.
pub fn dominates(big: &[u32], small: &[u32]) -> bool {
    big.len() == small.len() && big.iter().zip(small).all(|(a, b)| a >= b)
}

/// Minimal elements under componentwise order; keeps first-occurrence order, drops duplicates.
pub fn minimal_vectors(vs: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = Vec::new();
    for (k, v) in vs.iter().enumerate() {
        let dominated = vs
            .iter()
            .enumerate()
            .any(|(j, w)| j != k && dominates(v, w) && (v != w || j < k));
        if !dominated {
            out.push(v.clone());
        }
    }
    out
}

/// Minimal `(ξ, t)` under the product order (same `t`, multiset inclusion), in ⊴ order.
pub fn dickson_minimize(items: &[(Word, usize)]) -> Vec<(Word, usize)> {
    let mut sorted: Vec<(Word, usize)> = items.to_vec();
    sorted.sort_by(|a, b| tri_cmp((&a.0, a.1), (&b.0, b.1)));
    sorted.dedup();
    let mut out: Vec<(Word, usize)> = Vec::new();
    for (w, t) in sorted {
        if !out.iter().any(|(m, s)| *s == t && m.divides(&w)) {
            out.push((w, t));
        }
    }
    out
}
