//! Generic PBW straightening for algebras presented by ordered generators
//! `g_0 < g_1 < ...` and commutators `[g_a, g_b]` (`a > b`) given in normal form.
//!
//! A normal monomial is an exponent vector; its word is the generators in
//! increasing order. Multiplication moves each new generator leftwards past
//! larger ones, `u g_a g_b = u g_b g_a + u [g_a, g_b]`, which terminates whenever
//! the commutator table is compatible with a filtration (all tables built in this
//! crate are).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::polyseries::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PbwMonomial(Vec<u32>);

impl PbwMonomial {
    pub fn one(ngens: usize) -> Self {
        PbwMonomial(vec![0; ngens])
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        PbwMonomial(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn last_gen(&self) -> Option<usize> {
        self.0.iter().rposition(|&e| e > 0)
    }

    fn with_extra(&self, g: usize) -> Self {
        let mut v = self.0.clone();
        v[g] += 1;
        PbwMonomial(v)
    }

    /// The generators of the monomial, in increasing order with multiplicity.
    pub fn word(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(g, &e)| std::iter::repeat(g).take(e as usize))
            .collect()
    }
}

/// A linear combination of normal monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PbwElem {
    field: Field,
    terms: BTreeMap<PbwMonomial, Scalar>,
}

impl PbwElem {
    pub fn zero(field: Field) -> Self {
        PbwElem {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(field: Field, m: PbwMonomial) -> Self {
        Self::term(m, field.one())
    }

    pub fn term(m: PbwMonomial, c: Scalar) -> Self {
        let mut e = Self::zero(c.field());
        e.add_term(m, c);
        e
    }

    pub fn scalar(ngens: usize, c: Scalar) -> Self {
        Self::term(PbwMonomial::one(ngens), c)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &PbwMonomial) -> Scalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, m: PbwMonomial, c: Scalar) {
        assert_eq!(c.field(), self.field, "scalar characteristic mismatch");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &PbwElem, c: &Scalar) {
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn add(&self, other: &PbwElem) -> PbwElem {
        let mut out = self.clone();
        out.add_scaled(other, &self.field.one());
        out
    }

    pub fn sub(&self, other: &PbwElem) -> PbwElem {
        let mut out = self.clone();
        out.add_scaled(other, &-&self.field.one());
        out
    }

    pub fn scale(&self, c: &Scalar) -> PbwElem {
        let mut out = PbwElem::zero(self.field);
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> PbwElem {
        self.scale(&-&self.field.one())
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(PbwMonomial::degree).max()
    }

    /// Reduces all coefficients into another field.
    pub fn reduce(&self, field: Field) -> Result<PbwElem, crate::polyseries::ScalarError> {
        let mut out = PbwElem::zero(field);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.reduce(field)?);
        }
        Ok(out)
    }
}

impl fmt::Display for PbwElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*g{:?}", m.exps())?;
        }
        Ok(())
    }
}

/// Which redex a word-rewriting normalizer contracts first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewriteStrategy {
    /// Right multiplication through the memoized engine.
    Engine,
    /// Leftmost adjacent inversion first.
    Leftmost,
    /// Rightmost adjacent inversion first.
    Rightmost,
    /// A seeded random adjacent inversion.
    Random(u64),
}

/// Ordered generators plus a commutator table, with memoized straightening.
#[derive(Debug)]
pub struct PbwEngine {
    field: Field,
    ngens: usize,
    /// `comm[a * ngens + b]` holds `g_a g_b - g_b g_a` for `a > b`.
    comm: Vec<PbwElem>,
    memo: Mutex<HashMap<(PbwMonomial, usize), PbwElem>>,
}

impl Clone for PbwEngine {
    fn clone(&self) -> Self {
        PbwEngine {
            field: self.field,
            ngens: self.ngens,
            comm: self.comm.clone(),
            memo: Mutex::new(HashMap::new()),
        }
    }
}

impl PbwEngine {
    /// An engine whose generators all commute; fill the table with [`Self::set_commutator`].
    pub fn new(field: Field, ngens: usize) -> Self {
        PbwEngine {
            field,
            ngens,
            comm: vec![PbwElem::zero(field); ngens * ngens],
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    /// Sets `[g_a, g_b]` (normal form). Either order of `a`, `b` is accepted.
    pub fn set_commutator(&mut self, a: usize, b: usize, value: PbwElem) {
        assert_ne!(a, b);
        let (hi, lo, v) = if a > b { (a, b, value) } else { (b, a, value.neg()) };
        self.comm[hi * self.ngens + lo] = v;
        self.memo.get_mut().expect("memo lock").clear();
    }

    /// `[g_a, g_b]` in normal form.
    pub fn gen_commutator(&self, a: usize, b: usize) -> PbwElem {
        match a.cmp(&b) {
            std::cmp::Ordering::Equal => PbwElem::zero(self.field),
            std::cmp::Ordering::Greater => self.comm[a * self.ngens + b].clone(),
            std::cmp::Ordering::Less => self.comm[b * self.ngens + a].neg(),
        }
    }

    pub fn one(&self) -> PbwElem {
        PbwElem::scalar(self.ngens, self.field.one())
    }

    pub fn constant(&self, c: Scalar) -> PbwElem {
        PbwElem::scalar(self.ngens, c)
    }

    pub fn gen(&self, g: usize) -> PbwElem {
        PbwElem::monomial(self.field, PbwMonomial::one(self.ngens).with_extra(g))
    }

    fn mul_mono_gen(&self, m: &PbwMonomial, g: usize) -> PbwElem {
        match m.last_gen() {
            None => return PbwElem::monomial(self.field, m.with_extra(g)),
            Some(h) if h <= g => return PbwElem::monomial(self.field, m.with_extra(g)),
            Some(_) => {}
        }
        let key = (m.clone(), g);
        if let Some(hit) = self.memo.lock().expect("memo lock").get(&key) {
            return hit.clone();
        }
        let h = m.last_gen().expect("checked above");
        let mut rest = m.clone();
        rest.0[h] -= 1;
        // rest * g_h * g = rest * g * g_h + rest * [g_h, g]
        let swapped = self.mul_elem_gen(&self.mul_mono_gen(&rest, g), h);
        let bracket = &self.comm[h * self.ngens + g];
        let mut out = swapped;
        if !bracket.is_zero() {
            let tail = self.mul_mono_elem(&rest, bracket);
            out.add_scaled(&tail, &self.field.one());
        }
        self.memo
            .lock()
            .expect("memo lock")
            .insert(key, out.clone());
        out
    }

    fn mul_mono_elem(&self, m: &PbwMonomial, e: &PbwElem) -> PbwElem {
        let mut out = PbwElem::zero(self.field);
        for (u, c) in e.terms() {
            let mut acc = PbwElem::monomial(self.field, m.clone());
            for g in u.word() {
                acc = self.mul_elem_gen(&acc, g);
            }
            out.add_scaled(&acc, c);
        }
        out
    }

    pub fn mul_elem_gen(&self, e: &PbwElem, g: usize) -> PbwElem {
        let mut out = PbwElem::zero(self.field);
        for (m, c) in e.terms() {
            out.add_scaled(&self.mul_mono_gen(m, g), c);
        }
        out
    }

    pub fn mul(&self, a: &PbwElem, b: &PbwElem) -> PbwElem {
        let mut out = PbwElem::zero(self.field);
        for (u, c) in b.terms() {
            let mut acc = a.clone();
            for g in u.word() {
                acc = self.mul_elem_gen(&acc, g);
            }
            out.add_scaled(&acc, c);
        }
        out
    }

    pub fn commutator(&self, a: &PbwElem, b: &PbwElem) -> PbwElem {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    pub fn pow(&self, a: &PbwElem, mut e: u32) -> PbwElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Normal form of a product of generators.
    pub fn word(&self, w: &[usize]) -> PbwElem {
        w.iter()
            .fold(self.one(), |acc, &g| self.mul_elem_gen(&acc, g))
    }

    /// Normal form of a linear combination of words under the given strategy.
    pub fn normalize(&self, words: &[(Scalar, Vec<usize>)], strategy: RewriteStrategy) -> PbwElem {
        match strategy {
            RewriteStrategy::Engine => {
                let mut out = PbwElem::zero(self.field);
                for (c, w) in words {
                    out.add_scaled(&self.word(w), c);
                }
                out
            }
            other => self.rewrite_words(words, other),
        }
    }

    /// Plain word rewriting, independent of the memoized multiplication: repeatedly
    /// replace an adjacent inversion `g_a g_b` (`a > b`) by `g_b g_a + [g_a, g_b]`.
    fn rewrite_words(&self, words: &[(Scalar, Vec<usize>)], strategy: RewriteStrategy) -> PbwElem {
        let mut rng = match strategy {
            RewriteStrategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        let mut pending: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
        let push = |pending: &mut BTreeMap<Vec<usize>, Scalar>, w: Vec<usize>, c: Scalar| {
            if c.is_zero() {
                return;
            }
            let entry = pending.entry(w).or_insert_with(|| self.field.zero());
            *entry = &*entry + &c;
        };
        for (c, w) in words {
            push(&mut pending, w.clone(), c.clone());
        }
        let mut out = PbwElem::zero(self.field);
        while let Some((w, c)) = pending.pop_last() {
            if c.is_zero() {
                continue;
            }
            let inversions: Vec<usize> = (0..w.len().saturating_sub(1))
                .filter(|&p| w[p] > w[p + 1])
                .collect();
            if inversions.is_empty() {
                let mut exps = vec![0u32; self.ngens];
                for &g in &w {
                    exps[g] += 1;
                }
                out.add_term(PbwMonomial(exps), c);
                continue;
            }
            let p = match strategy {
                RewriteStrategy::Leftmost => inversions[0],
                RewriteStrategy::Rightmost => *inversions.last().expect("nonempty"),
                RewriteStrategy::Random(_) => {
                    let r = rng.as_mut().expect("seeded");
                    inversions[r.gen_range(0..inversions.len())]
                }
                RewriteStrategy::Engine => unreachable!(),
            };
            let (a, b) = (w[p], w[p + 1]);
            let mut swapped = w.clone();
            swapped.swap(p, p + 1);
            push(&mut pending, swapped, c.clone());
            for (u, k) in self.comm[a * self.ngens + b].terms() {
                let mut nw = w[..p].to_vec();
                nw.extend(u.word());
                nw.extend_from_slice(&w[p + 2..]);
                push(&mut pending, nw, &c * k);
            }
        }
        out
    }
}

/// Number of exponent vectors over `ngens` generators with total degree `<= d`,
/// by direct enumeration.
pub fn count_monomials(ngens: usize, d: u32) -> u64 {
    fn go(left: usize, budget: u32) -> u64 {
        if left == 0 {
            return 1;
        }
        (0..=budget).map(|e| go(left - 1, budget - e)).sum()
    }
    go(ngens, d)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The Heisenberg algebra: p < q < z with [q, p] = z central.
    fn heisenberg() -> PbwEngine {
        let mut e = PbwEngine::new(Field::Rational, 3);
        let z = e.gen(2);
        e.set_commutator(1, 0, z);
        e
    }

    #[test]
    fn straightening_heisenberg() {
        let h = heisenberg();
        // q p = p q + z
        let qp = h.word(&[1, 0]);
        let expected = h.word(&[0, 1]).add(&h.gen(2));
        assert_eq!(qp, expected);
    }

    #[test]
    fn strategies_agree() {
        let h = heisenberg();
        let words = vec![
            (Field::Rational.int(1), vec![1, 1, 0, 0, 2]),
            (Field::Rational.int(3), vec![1, 0, 1, 0]),
        ];
        let reference = h.normalize(&words, RewriteStrategy::Engine);
        for s in [
            RewriteStrategy::Leftmost,
            RewriteStrategy::Rightmost,
            RewriteStrategy::Random(7),
        ] {
            assert_eq!(h.normalize(&words, s), reference, "{s:?}");
        }
    }

    #[test]
    fn monomial_counts() {
        for ngens in 1..5 {
            for d in 0..4 {
                assert_eq!(
                    count_monomials(ngens, d),
                    binomial(ngens as u64 + d as u64, d as u64)
                );
            }
        }
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(10, 2), 45);
    }
}
