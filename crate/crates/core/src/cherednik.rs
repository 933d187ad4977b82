//! The infinitesimal Cherednik algebra `H_b` of gl_n.
//!
//! Generators are ordered triangularly, `x | strictly lower e | diagonal e |
//! strictly upper e | y`, so a normal monomial reads as an element of
//! `H_- * U(C) * H_+` and the same normal form drives the Verma module action.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::envelope::{EnvelopeError, UgAlgebra, UgElem};
use crate::invariants::{cprime_top_symbol, dualize, r_series, InvariantError};
use crate::linalg::Matrix;
use crate::pbw::{binomial, count_monomials, PbwElem, PbwEngine, PbwMonomial, RewriteStrategy};
use crate::polyseries::{Field, Monomial, Poly, Scalar, ScalarError, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CherednikError {
    #[error("parameter b must be monic (last entry 1), got {0}")]
    NonMonic(String),
    #[error("m = 0 is not supported")]
    DegreeZero,
    #[error("n = {0} outside the supported range 1..=4")]
    BadRank(usize),
    #[error("b has {got} entries, expected m + 1 = {expected}")]
    BadParameterLength { got: usize, expected: usize },
    #[error("characteristic {p} is not admissible: need a prime p > n + m = {bound}")]
    InadmissiblePrime { p: u64, bound: u64 },
    #[error("parameter {0} does not live in the algebra's field")]
    FieldMismatch(String),
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("centrality system for t_{0} is inconsistent")]
    InconsistentSystem(usize),
    #[error("centrality system for t_{i} has {nullity} extra solutions; ansatz bound too large")]
    NonUnique { i: usize, nullity: usize },
    #[error("postcondition failed: {0}")]
    Postcondition(String),
    #[error("zero element has no symbol")]
    ZeroElement,
    #[error("exp(ad v) needs v to be a combination of x's only or of y's only")]
    NotPureLinear,
    #[error("ad(v) reached order {order} >= p = {p}")]
    NilpotencyExceedsChar { order: u32, p: u64 },
    #[error("ad(v) is not nilpotent within {0} steps")]
    NotNilpotent(u32),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A generator of `H_b` (1-based indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HbGen {
    X(usize),
    E(usize, usize),
    Y(usize),
}

/// An element of `H_b` in triangular PBW normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HbElem(pub(crate) PbwElem);

impl HbElem {
    pub fn as_pbw(&self) -> &PbwElem {
        &self.0
    }

    pub fn from_pbw(p: PbwElem) -> Self {
        HbElem(p)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, o: &HbElem) -> HbElem {
        HbElem(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &HbElem) -> HbElem {
        HbElem(self.0.sub(&o.0))
    }

    pub fn scale(&self, c: &Scalar) -> HbElem {
        HbElem(self.0.scale(c))
    }

    pub fn neg(&self) -> HbElem {
        HbElem(self.0.neg())
    }
}

/// Exponents of a normal monomial split by block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HbMonomial {
    pub xexp: Vec<u32>,
    /// Over the e-generators in the order lower, diagonal, upper.
    pub gexp: Vec<u32>,
    pub yexp: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiltrationSpec {
    /// `deg x = deg y = 1`, `deg g = 0`.
    Standard,
    /// `deg x = m`, `deg y = 1`, `deg g = 1`.
    Weighted,
    /// `deg g = 1`, `deg x = deg y = 0`.
    GOnly,
}

/// Output of the Casimir solver.
#[derive(Debug, Clone)]
pub struct Casimir {
    pub i: usize,
    pub t: HbElem,
    pub c: UgElem,
    /// `s` with `symbol(c_i, GONLY) = s * dualize(coefficient of t^{n-i} tau^m in c')`.
    pub sign: i8,
    /// Number of products of alphas in the ansatz, including the constant.
    pub ansatz_dim: usize,
    pub solve_rank: usize,
}

/// A diagnostic from the rewrite-order probe.
#[derive(Debug, Clone)]
pub struct PbwReport {
    /// `(d, normal monomials of degree <= d, C(n^2 + 2n + d, d))`
    pub counts: Vec<(u32, u64, u64)>,
    pub words_checked: usize,
    /// Words whose normal forms differed across strategies.
    pub mismatches: Vec<Vec<HbGen>>,
}

impl PbwReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.counts.iter().all(|&(_, a, b)| a == b)
    }
}

/// Largest degree bound accepted by the PBW probe.
pub const MAX_PBW_DEGREE: u32 = 6;

#[derive(Debug)]
pub struct HbContext {
    n: usize,
    m: usize,
    b: Vec<Scalar>,
    field: Field,
    ug: UgAlgebra,
    engine: PbwEngine,
    gens: Vec<HbGen>,
    /// `[y_i, x_j]` at `(i - 1) * n + (j - 1)`.
    bracket_table: Vec<UgElem>,
    casimirs: OnceLock<Result<Vec<Casimir>, CherednikError>>,
}

/// The generators in triangular order.
pub fn triangular_order(n: usize) -> Vec<HbGen> {
    let mut gens: Vec<HbGen> = (1..=n).map(HbGen::X).collect();
    for i in 1..=n {
        for j in 1..i {
            gens.push(HbGen::E(i, j));
        }
    }
    gens.extend((1..=n).map(|i| HbGen::E(i, i)));
    for i in 1..=n {
        for j in i + 1..=n {
            gens.push(HbGen::E(i, j));
        }
    }
    gens.extend((1..=n).map(HbGen::Y));
    gens
}

/// The smallest characteristic accepted for `(n, m)` is the first prime above `n + m`.
pub fn admissible_prime(n: usize, m: usize, p: u64) -> bool {
    crate::polyseries::is_prime(p) && p > (n + m) as u64
}

impl HbContext {
    pub fn new(n: usize, m: usize, b: Vec<Scalar>, char: u64) -> Result<Self, CherednikError> {
        if n == 0 || n > 4 {
            return Err(CherednikError::BadRank(n));
        }
        if m == 0 {
            return Err(CherednikError::DegreeZero);
        }
        if b.len() != m + 1 {
            return Err(CherednikError::BadParameterLength {
                got: b.len(),
                expected: m + 1,
            });
        }
        let field = Field::from_char(char)?;
        if char != 0 && !admissible_prime(n, m, char) {
            return Err(CherednikError::InadmissiblePrime {
                p: char,
                bound: (n + m) as u64,
            });
        }
        if let Some(bad) = b.iter().find(|s| s.field() != field) {
            return Err(CherednikError::FieldMismatch(bad.to_string()));
        }
        if !b[m].is_one() {
            return Err(CherednikError::NonMonic(b[m].to_string()));
        }

        let gens = triangular_order(n);
        let ug = UgAlgebra::new(field, n);
        let mut engine = PbwEngine::new(field, gens.len());
        let idx = |g: HbGen| gens.iter().position(|&h| h == g).expect("generator");
        for (a, &ga) in gens.iter().enumerate() {
            for (bi, &gb) in gens.iter().enumerate() {
                if a <= bi {
                    continue;
                }
                let mut v = PbwElem::zero(field);
                match (ga, gb) {
                    (HbGen::E(i, j), HbGen::E(k, l)) => {
                        if j == k {
                            v = v.add(&engine.gen(idx(HbGen::E(i, l))));
                        }
                        if l == i {
                            v = v.sub(&engine.gen(idx(HbGen::E(k, j))));
                        }
                    }
                    // [e_ij, x_k] = -d_ik x_j
                    (HbGen::E(i, j), HbGen::X(k)) if i == k => {
                        v = v.sub(&engine.gen(idx(HbGen::X(j))));
                    }
                    // [y_k, e_ij] = -[e_ij, y_k] = -d_jk y_i
                    (HbGen::Y(k), HbGen::E(i, j)) if j == k => {
                        v = v.sub(&engine.gen(idx(HbGen::Y(i))));
                    }
                    _ => {}
                }
                if !v.is_zero() {
                    engine.set_commutator(a, bi, v);
                }
            }
        }

        let r = r_series(field, n, m as u32 + 1)?;
        let mut bracket_table = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                let mut acc = ug.zero();
                for (k, bk) in b.iter().enumerate() {
                    if bk.is_zero() {
                        continue;
                    }
                    let sym = ug.symmetrize(&dualize(r.get(j, i, k as u32)))?;
                    acc = acc.add(&sym.scale(bk));
                }
                bracket_table.push(acc);
            }
        }
        let mut ctx = HbContext {
            n,
            m,
            b,
            field,
            ug,
            engine,
            gens,
            bracket_table,
            casimirs: OnceLock::new(),
        };
        for i in 1..=n {
            for j in 1..=n {
                let v = ctx.embed(&ctx.bracket_table[(i - 1) * n + (j - 1)]).0;
                let (a, bi) = (ctx.index(HbGen::Y(i)), ctx.index(HbGen::X(j)));
                ctx.engine.set_commutator(a, bi, v);
            }
        }
        Ok(ctx)
    }

    /// Convenience constructor with integer parameters.
    pub fn with_ints(n: usize, m: usize, b: &[i64], char: u64) -> Result<Self, CherednikError> {
        let field = Field::from_char(char)?;
        Self::new(n, m, b.iter().map(|&k| field.int(k)).collect(), char)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn b(&self) -> &[Scalar] {
        &self.b
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ug(&self) -> &UgAlgebra {
        &self.ug
    }

    pub fn engine(&self) -> &PbwEngine {
        &self.engine
    }

    pub fn gens(&self) -> &[HbGen] {
        &self.gens
    }

    pub fn index(&self, g: HbGen) -> usize {
        let n = self.n;
        match g {
            HbGen::X(i) => i - 1,
            HbGen::Y(i) => n + n * n + i - 1,
            HbGen::E(..) => self
                .gens
                .iter()
                .position(|&h| h == g)
                .expect("generator in range"),
        }
    }

    pub fn check_gen(&self, g: HbGen) -> Result<(), CherednikError> {
        let bad = match g {
            HbGen::X(i) | HbGen::Y(i) => (i == 0 || i > self.n).then_some(i),
            HbGen::E(i, j) => (i == 0 || j == 0 || i > self.n || j > self.n).then_some(i.max(j)),
        };
        match bad {
            Some(index) => Err(CherednikError::IndexOutOfRange { index, n: self.n }),
            None => Ok(()),
        }
    }

    pub fn gen(&self, g: HbGen) -> HbElem {
        HbElem(self.engine.gen(self.index(g)))
    }

    pub fn x(&self, i: usize) -> HbElem {
        self.gen(HbGen::X(i))
    }

    pub fn y(&self, i: usize) -> HbElem {
        self.gen(HbGen::Y(i))
    }

    pub fn e(&self, i: usize, j: usize) -> HbElem {
        self.gen(HbGen::E(i, j))
    }

    pub fn one(&self) -> HbElem {
        HbElem(self.engine.one())
    }

    pub fn zero(&self) -> HbElem {
        HbElem(PbwElem::zero(self.field))
    }

    pub fn constant(&self, c: Scalar) -> HbElem {
        HbElem(self.engine.constant(c))
    }

    pub fn int(&self, k: i64) -> HbElem {
        self.constant(self.field.int(k))
    }

    /// `[y_i, x_j]` from the precomputed table.
    pub fn bracket_entry(&self, i: usize, j: usize) -> &UgElem {
        &self.bracket_table[(i - 1) * self.n + (j - 1)]
    }

    /// The image of a U(gl_n) element, re-straightened into triangular order.
    pub fn embed(&self, u: &UgElem) -> HbElem {
        let basis = self.ug.basis();
        let mut out = PbwElem::zero(self.field);
        for (m, c) in u.as_pbw().terms() {
            let word: Vec<usize> = m
                .word()
                .into_iter()
                .map(|k| {
                    let (i, j) = basis[k];
                    self.index(HbGen::E(i, j))
                })
                .collect();
            out.add_scaled(&self.engine.word(&word), c);
        }
        HbElem(out)
    }

    /// Rewrites an element free of x and y back into U(gl_n).
    pub fn restrict_to_ug(&self, a: &HbElem) -> Option<UgElem> {
        let mut out = self.ug.zero();
        for (m, c) in a.0.terms() {
            let split = self.split(m);
            if split.xexp.iter().chain(&split.yexp).any(|&e| e > 0) {
                return None;
            }
            let mut word = Vec::new();
            for (k, &e) in split.gexp.iter().enumerate() {
                let HbGen::E(i, j) = self.gens[self.n + k] else {
                    unreachable!()
                };
                for _ in 0..e {
                    word.push(UgAlgebra::index(self.n, i, j));
                }
            }
            out = out.add(&UgElem(self.ug.engine().word(&word)).scale(c));
        }
        Some(out)
    }

    pub fn split(&self, m: &PbwMonomial) -> HbMonomial {
        let n = self.n;
        let e = m.exps();
        HbMonomial {
            xexp: e[..n].to_vec(),
            gexp: e[n..n + n * n].to_vec(),
            yexp: e[n + n * n..].to_vec(),
        }
    }

    pub fn check(&self, a: &HbElem) -> Result<(), CherednikError> {
        if a.0.field() != self.field {
            return Err(CherednikError::FieldMismatch(a.0.field().to_string()));
        }
        if a.0.terms().any(|(m, _)| m.exps().len() != self.gens.len()) {
            return Err(CherednikError::FieldMismatch("monomial length".into()));
        }
        Ok(())
    }

    /// Normal form of a linear combination of generator words.
    pub fn normal_form(&self, words: &[(Scalar, Vec<HbGen>)]) -> Result<HbElem, CherednikError> {
        self.normal_form_with(words, RewriteStrategy::Engine)
    }

    pub fn normal_form_with(
        &self,
        words: &[(Scalar, Vec<HbGen>)],
        strategy: RewriteStrategy,
    ) -> Result<HbElem, CherednikError> {
        let mut idx_words = Vec::with_capacity(words.len());
        for (c, w) in words {
            if c.field() != self.field {
                return Err(CherednikError::FieldMismatch(c.to_string()));
            }
            for &g in w {
                self.check_gen(g)?;
            }
            idx_words.push((c.clone(), w.iter().map(|&g| self.index(g)).collect()));
        }
        Ok(HbElem(self.engine.normalize(&idx_words, strategy)))
    }

    /// Normal form of a single word with coefficient one.
    pub fn word(&self, w: &[HbGen]) -> HbElem {
        let idx: Vec<usize> = w.iter().map(|&g| self.index(g)).collect();
        HbElem(self.engine.word(&idx))
    }

    pub fn mul(&self, a: &HbElem, b: &HbElem) -> HbElem {
        HbElem(self.engine.mul(&a.0, &b.0))
    }

    pub fn try_mul(&self, a: &HbElem, b: &HbElem) -> Result<HbElem, CherednikError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn commutator(&self, a: &HbElem, b: &HbElem) -> HbElem {
        HbElem(self.engine.commutator(&a.0, &b.0))
    }

    pub fn try_commutator(&self, a: &HbElem, b: &HbElem) -> Result<HbElem, CherednikError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.commutator(a, b))
    }

    pub fn pow(&self, a: &HbElem, e: u32) -> HbElem {
        HbElem(self.engine.pow(&a.0, e))
    }

    /// All generators: x's, e's, y's.
    pub fn all_gens(&self) -> Vec<HbElem> {
        self.gens.iter().map(|&g| self.gen(g)).collect()
    }

    pub fn is_central(&self, a: &HbElem) -> bool {
        self.gens
            .iter()
            .all(|&g| self.commutator(a, &self.gen(g)).is_zero())
    }

    fn weight(&self, g: HbGen, f: FiltrationSpec) -> u32 {
        match (f, g) {
            (FiltrationSpec::Standard, HbGen::E(..)) => 0,
            (FiltrationSpec::Standard, _) => 1,
            (FiltrationSpec::Weighted, HbGen::X(_)) => self.m as u32,
            (FiltrationSpec::Weighted, _) => 1,
            (FiltrationSpec::GOnly, HbGen::E(..)) => 1,
            (FiltrationSpec::GOnly, _) => 0,
        }
    }

    fn monomial_weight(&self, m: &PbwMonomial, f: FiltrationSpec) -> u32 {
        m.exps()
            .iter()
            .zip(&self.gens)
            .map(|(&e, &g)| e * self.weight(g, f))
            .sum()
    }

    /// Maximum monomial weight; `None` for zero.
    pub fn filtration_degree(&self, a: &HbElem, f: FiltrationSpec) -> Option<u32> {
        a.0.terms().map(|(m, _)| self.monomial_weight(m, f)).max()
    }

    /// The top-weight part as a commutative polynomial in `e`, `x`, `y`.
    pub fn symbol(&self, a: &HbElem, f: FiltrationSpec) -> Result<Poly, CherednikError> {
        let top = self.filtration_degree(a, f).ok_or(CherednikError::ZeroElement)?;
        Ok(Poly::from_terms(
            self.field,
            a.0.terms()
                .filter(|(m, _)| self.monomial_weight(m, f) == top)
                .map(|(m, c)| (self.to_commutative(m), c.clone())),
        ))
    }

    pub fn gen_var(g: HbGen) -> Var {
        match g {
            HbGen::X(i) => Var::X(i as u8),
            HbGen::Y(i) => Var::Y(i as u8),
            HbGen::E(i, j) => Var::E(i as u8, j as u8),
        }
    }

    pub fn to_commutative(&self, m: &PbwMonomial) -> Monomial {
        Monomial::from_pairs(
            self.gens
                .iter()
                .zip(m.exps())
                .map(|(&g, &e)| (Self::gen_var(g), e)),
        )
    }

    /// Every term as a commutative polynomial (the serialization view).
    pub fn to_poly(&self, a: &HbElem) -> Poly {
        Poly::from_terms(
            self.field,
            a.0.terms().map(|(m, c)| (self.to_commutative(m), c.clone())),
        )
    }

    /// Reads a commutative polynomial as the triangular-ordered element with the same
    /// exponents.
    pub fn from_ordered_poly(&self, p: &Poly) -> Result<HbElem, CherednikError> {
        let mut out = PbwElem::zero(self.field);
        for (m, c) in p.terms() {
            let mut exps = vec![0u32; self.gens.len()];
            for &(v, e) in m.pairs() {
                let g = match v {
                    Var::X(i) => HbGen::X(i as usize),
                    Var::Y(i) => HbGen::Y(i as usize),
                    Var::E(i, j) => HbGen::E(i as usize, j as usize),
                    other => {
                        return Err(CherednikError::FieldMismatch(format!(
                            "variable {other} is not a generator"
                        )))
                    }
                };
                self.check_gen(g)?;
                exps[self.index(g)] += e;
            }
            out.add_term(PbwMonomial::from_exps(exps), c.reduce(self.field)?);
        }
        Ok(HbElem(out))
    }

    /// `exp(ad v)(a) = sum_k ad(v)^k(a) / k!` for `v` a combination of x's only or of
    /// y's only.
    pub fn exp_ad(&self, v: &HbElem, a: &HbElem) -> Result<HbElem, CherednikError> {
        let pure = |pred: &dyn Fn(HbGen) -> bool| {
            v.0.terms().all(|(m, _)| {
                m.degree() == 1
                    && m.exps()
                        .iter()
                        .zip(&self.gens)
                        .all(|(&e, &g)| e == 0 || pred(g))
            })
        };
        if !pure(&|g| matches!(g, HbGen::X(_))) && !pure(&|g| matches!(g, HbGen::Y(_))) {
            return Err(CherednikError::NotPureLinear);
        }
        const MAX_STEPS: u32 = 64;
        let mut term = a.clone();
        let mut out = a.clone();
        let mut fact = self.field.one();
        for k in 1..=MAX_STEPS {
            term = self.commutator(v, &term);
            if term.is_zero() {
                return Ok(out);
            }
            if let Field::Prime(p) = self.field {
                if k as u64 >= p {
                    return Err(CherednikError::NilpotencyExceedsChar { order: k, p });
                }
            }
            fact = &fact * &self.field.int(k as i64);
            out = out.add(&term.scale(&fact.inv()?));
        }
        Err(CherednikError::NotNilpotent(MAX_STEPS))
    }

    /// `sum_j [alpha_i, y_j] x_j`.
    pub fn casimir_core(&self, i: usize) -> Result<HbElem, CherednikError> {
        let alpha = self.embed(&self.ug.alpha(i)?);
        let mut s = self.zero();
        for j in 1..=self.n {
            let br = self.commutator(&alpha, &self.y(j));
            s = s.add(&self.mul(&br, &self.x(j)));
        }
        Ok(s)
    }

    /// `sum_j y_j [x_j, alpha_i]`.
    pub fn casimir_core_right(&self, i: usize) -> Result<HbElem, CherednikError> {
        let alpha = self.embed(&self.ug.alpha(i)?);
        let mut s = self.zero();
        for j in 1..=self.n {
            let br = self.commutator(&self.x(j), &alpha);
            s = s.add(&self.mul(&self.y(j), &br));
        }
        Ok(s)
    }

    /// Exponent vectors `k` with `sum_j j k_j <= bound`, excluding zero.
    fn alpha_exponents(n: usize, bound: usize) -> Vec<Vec<u32>> {
        fn go(j: usize, n: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if j > n {
                if cur.iter().any(|&k| k > 0) {
                    out.push(cur.clone());
                }
                return;
            }
            for k in 0..=left / j {
                cur.push(k as u32);
                go(j + 1, n, left - k * j, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(1, n, bound, &mut Vec::new(), &mut out);
        out
    }

    /// Solves for the central correction `c_i` and returns `t_i = sum_j [alpha_i, y_j] x_j - c_i`.
    pub fn casimir(&self, i: usize) -> Result<Casimir, CherednikError> {
        if !(1..=self.n).contains(&i) {
            return Err(CherednikError::IndexOutOfRange { index: i, n: self.n });
        }
        let s = self.casimir_core(i)?;
        let alphas: Vec<UgElem> = (1..=self.n)
            .map(|j| self.ug.alpha(j))
            .collect::<Result<_, _>>()?;
        let exps = Self::alpha_exponents(self.n, self.m + i);
        let products: Vec<UgElem> = exps
            .iter()
            .map(|k| {
                k.iter()
                    .zip(&alphas)
                    .fold(self.ug.one(), |acc, (&e, a)| self.ug.mul(&acc, &self.ug.pow(a, e)))
            })
            .collect();
        let embedded: Vec<HbElem> = products.iter().map(|u| self.embed(u)).collect();

        // Rows: (generator, monomial) coordinates of [., g] for g in x's and y's.
        let probes: Vec<HbElem> = (1..=self.n)
            .flat_map(|k| [self.x(k), self.y(k)])
            .collect();
        let mut rows: BTreeMap<(usize, PbwMonomial), usize> = BTreeMap::new();
        let mut columns: Vec<Vec<(usize, PbwMonomial, Scalar)>> = Vec::new();
        let mut rhs_terms: Vec<(usize, PbwMonomial, Scalar)> = Vec::new();
        for (gi, g) in probes.iter().enumerate() {
            for (m, c) in self.commutator(&s, g).0.terms() {
                rhs_terms.push((gi, m.clone(), c.clone()));
            }
        }
        for prod in &embedded {
            let mut col = Vec::new();
            for (gi, g) in probes.iter().enumerate() {
                for (m, c) in self.commutator(prod, g).0.terms() {
                    col.push((gi, m.clone(), c.clone()));
                }
            }
            columns.push(col);
        }
        for (gi, m, _) in rhs_terms.iter().chain(columns.iter().flatten()) {
            let next = rows.len();
            rows.entry((*gi, m.clone())).or_insert(next);
        }
        let mut mat = Matrix::zeros(self.field, rows.len(), columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (gi, m, c) in col {
                mat.set(rows[&(*gi, m.clone())], j, c.clone());
            }
        }
        let mut rhs = vec![self.field.zero(); rows.len()];
        for (gi, m, c) in &rhs_terms {
            rhs[rows[&(*gi, m.clone())]] = c.clone();
        }
        let solve_rank = mat.rank();
        let nullity = columns.len() - solve_rank;
        if nullity > 0 {
            return Err(CherednikError::NonUnique { i, nullity });
        }
        let coeffs = mat.solve(&rhs).ok_or(CherednikError::InconsistentSystem(i))?;

        let mut c = self.ug.zero();
        for (k, prod) in coeffs.iter().zip(&products) {
            c = c.add(&prod.scale(k));
        }
        let t = s.sub(&self.embed(&c));

        if !self.is_central(&t) {
            return Err(CherednikError::Postcondition(format!("t_{i} is not central")));
        }
        if self.casimir_core_right(i)? != s {
            return Err(CherednikError::Postcondition(format!(
                "the two expressions for t_{i} differ"
            )));
        }
        let sign = self.cprime_sign(i, &c)?;
        Ok(Casimir {
            i,
            t,
            c,
            sign,
            ansatz_dim: products.len() + 1,
            solve_rank,
        })
    }

    fn cprime_sign(&self, i: usize, c: &UgElem) -> Result<i8, CherednikError> {
        let top = self.ug.symbol(c).unwrap_or_else(|| Poly::zero(self.field));
        let expected = dualize(&cprime_top_symbol(self.field, self.n, self.m, i)?).into_poly();
        if top == expected {
            Ok(1)
        } else if top == -&expected {
            Ok(-1)
        } else {
            Err(CherednikError::Postcondition(format!(
                "top symbol of c_{i} ({top}) is not +-({expected})"
            )))
        }
    }

    /// `t_1, ..., t_n`, solved once and cached.
    pub fn casimirs(&self) -> Result<&[Casimir], CherednikError> {
        self.casimirs
            .get_or_init(|| (1..=self.n).map(|i| self.casimir(i)).collect())
            .as_deref()
            .map_err(Clone::clone)
    }

    /// Rewrite-order probe: monomial counts for every degree up to `d` and agreement of
    /// four rewriting strategies on `samples` seeded random words of length
    /// `1..=word_len`.
    pub fn pbw_check(&self, d: u32, word_len: u32, samples: usize, seed: u64) -> PbwReport {
        assert!(
            d <= MAX_PBW_DEGREE && word_len <= MAX_PBW_DEGREE,
            "degree bound above {MAX_PBW_DEGREE}"
        );
        let ngens = self.gens.len();
        let counts = (0..=d)
            .map(|k| {
                (
                    k,
                    count_monomials(ngens, k),
                    binomial((self.n * self.n + 2 * self.n) as u64 + k as u64, k as u64),
                )
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut mismatches = Vec::new();
        let mut words_checked = 0;
        if word_len > 0 {
            for s in 0..samples {
                let len = rng.gen_range(1..=word_len as usize);
                let w: Vec<HbGen> = (0..len)
                    .map(|_| self.gens[rng.gen_range(0..ngens)])
                    .collect();
                let words = vec![(self.field.one(), w.clone())];
                let reference = self
                    .normal_form_with(&words, RewriteStrategy::Engine)
                    .expect("generators in range");
                let strategies = [
                    RewriteStrategy::Leftmost,
                    RewriteStrategy::Rightmost,
                    RewriteStrategy::Random(seed ^ (s as u64).wrapping_mul(0x9e37_79b9)),
                ];
                let agree = strategies.iter().all(|&st| {
                    self.normal_form_with(&words, st).expect("generators in range") == reference
                });
                if !agree {
                    mismatches.push(w);
                }
                words_checked += 1;
            }
        }
        PbwReport {
            counts,
            words_checked,
            mismatches,
        }
    }

    pub fn pbw_dimension_check(&self, d: u32) -> bool {
        self.pbw_check(d, d, 50, 0).passed()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn ctx(n: usize, m: usize, b: &[i64]) -> HbContext {
        HbContext::with_ints(n, m, b, 0).unwrap()
    }

    #[test]
    fn constructor_errors() {
        assert!(matches!(
            HbContext::with_ints(1, 1, &[0, 2], 0),
            Err(CherednikError::NonMonic(_))
        ));
        assert!(matches!(
            HbContext::with_ints(1, 0, &[1], 0),
            Err(CherednikError::DegreeZero)
        ));
        assert!(matches!(
            HbContext::with_ints(1, 1, &[1], 0),
            Err(CherednikError::BadParameterLength { .. })
        ));
        assert!(matches!(
            HbContext::with_ints(2, 1, &[0, 1], 3),
            Err(CherednikError::InadmissiblePrime { .. })
        ));
        assert!(HbContext::with_ints(2, 1, &[0, 1], 9).is_err());
        let mixed = vec![Q.int(0), Field::Prime(5).int(1)];
        assert!(HbContext::new(1, 1, mixed, 5).is_err());
    }

    #[test]
    fn bracket_tables() {
        let h = ctx(1, 1, &[3, 1]);
        let u = h.ug();
        assert_eq!(
            h.bracket_entry(1, 1),
            &u.constant(Q.int(3)).add(&u.e(1, 1).scale(&Q.int(2)))
        );

        let h = ctx(2, 1, &[5, 1]);
        let u = h.ug();
        assert_eq!(h.bracket_entry(1, 2), &u.e(1, 2));
        assert_eq!(
            h.bracket_entry(1, 1),
            &u.constant(Q.int(5))
                .add(&u.e(1, 1).scale(&Q.int(2)))
                .add(&u.e(2, 2))
        );

        let h = ctx(1, 2, &[3, 7, 1]);
        let u = h.ug();
        let e = u.e(1, 1);
        assert_eq!(
            h.bracket_entry(1, 1),
            &u.constant(Q.int(3))
                .add(&e.scale(&Q.int(14)))
                .add(&u.pow(&e, 2).scale(&Q.int(3)))
        );
    }

    #[test]
    fn normal_form_examples() {
        let b0 = 4;
        let h = ctx(1, 1, &[b0, 1]);
        let yx = h.word(&[HbGen::Y(1), HbGen::X(1)]);
        let expected = h
            .word(&[HbGen::X(1), HbGen::Y(1)])
            .add(&h.int(b0))
            .add(&h.e(1, 1).scale(&Q.int(2)));
        assert_eq!(yx, expected);
        assert_eq!(h.word(&[HbGen::X(1), HbGen::Y(1)]).as_pbw().len(), 1);
        let ex = h.word(&[HbGen::E(1, 1), HbGen::X(1)]);
        assert_eq!(ex, h.word(&[HbGen::X(1), HbGen::E(1, 1)]).sub(&h.x(1)));
        assert!(h
            .normal_form(&[(Q.one(), vec![HbGen::X(2)])])
            .is_err());
    }

    #[test]
    fn commutator_examples() {
        let h = ctx(2, 1, &[1, 1]);
        assert_eq!(h.commutator(&h.e(1, 1), &h.y(1)), h.y(1));
        for i in 1..=2 {
            for j in 1..=2 {
                assert_eq!(
                    h.commutator(&h.y(i), &h.x(j)),
                    h.embed(h.bracket_entry(i, j))
                );
            }
        }
        let xy = h.mul(&h.x(1), &h.y(1));
        let lhs = h.mul(&xy, &xy);
        let rhs = h.mul(&h.mul(&h.x(1), &h.mul(&h.y(1), &h.x(1))), &h.y(1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn filtration_examples() {
        let h = ctx(1, 1, &[3, 1]);
        let a = h.word(&[HbGen::Y(1), HbGen::X(1)]);
        let sym = h.symbol(&a, FiltrationSpec::Weighted).unwrap();
        // deg e = 1 < deg xy = m + 1, so only xy survives.
        let expected = &Poly::var(Q, Var::X(1)) * &Poly::var(Q, Var::Y(1));
        assert_eq!(sym, expected);
        let gonly = h.symbol(&a, FiltrationSpec::GOnly).unwrap();
        assert_eq!(gonly, Poly::var(Q, Var::E(1, 1)).scale(&Q.int(2)));
        assert_eq!(h.filtration_degree(&h.e(1, 1), FiltrationSpec::Standard), Some(0));
        let h2 = ctx(1, 2, &[0, 0, 1]);
        assert_eq!(h2.filtration_degree(&h2.x(1), FiltrationSpec::Weighted), Some(2));
        assert!(matches!(
            h.symbol(&h.zero(), FiltrationSpec::GOnly),
            Err(CherednikError::ZeroElement)
        ));
    }

    #[test]
    fn exp_ad_examples() {
        let b0 = 2;
        let h = ctx(1, 1, &[b0, 1]);
        assert_eq!(h.exp_ad(&h.x(1), &h.x(1)).unwrap(), h.x(1));
        let got = h.exp_ad(&h.y(1), &h.x(1)).unwrap();
        let expected = h
            .x(1)
            .add(&h.int(b0))
            .add(&h.e(1, 1).scale(&Q.int(2)))
            .sub(&h.y(1));
        assert_eq!(got, expected);
        assert!(matches!(
            h.exp_ad(&h.e(1, 1), &h.x(1)),
            Err(CherednikError::NotPureLinear)
        ));
        let mixed = h.x(1).add(&h.y(1));
        assert!(h.exp_ad(&mixed, &h.x(1)).is_err());
    }

    #[test]
    fn casimir_n1_m1_matches_hand_formula() {
        for b0 in [-3i64, 0, 1, 5] {
            let h = ctx(1, 1, &[b0, 1]);
            let cas = h.casimir(1).unwrap();
            let u = h.ug();
            let e = u.e(1, 1);
            let expected_c = u
                .pow(&e, 2)
                .scale(&Q.int(-1))
                .add(&e.scale(&Q.int(1 - b0)));
            assert_eq!(cas.c, expected_c, "b0 = {b0}");
            let he = h.e(1, 1);
            let expected_t = h
                .word(&[HbGen::X(1), HbGen::Y(1)])
                .add(&h.int(b0))
                .add(&he.scale(&Q.int(2)))
                .add(&h.pow(&he, 2))
                .add(&he.scale(&Q.int(b0 - 1)));
            assert_eq!(cas.t, expected_t);
            assert_eq!(cas.sign, -1);
            assert!(h.is_central(&cas.t));
        }
    }

    #[test]
    fn casimirs_commute_n2() {
        let h = ctx(2, 1, &[1, 1]);
        let cs = h.casimirs().unwrap();
        assert_eq!(cs.len(), 2);
        assert!(h.commutator(&cs[0].t, &cs[1].t).is_zero());
        for c in cs {
            assert!(h.is_central(&c.t));
        }
        assert!(h.casimir(3).is_err());
    }

    #[test]
    fn centrality_basics() {
        let h = ctx(1, 1, &[0, 1]);
        assert!(h.is_central(&h.one()));
        assert!(!h.is_central(&h.x(1)));
    }

    #[test]
    fn pbw_counts() {
        let h = ctx(1, 1, &[0, 1]);
        let r = h.pbw_check(3, 5, 20, 1);
        assert_eq!(r.counts[3], (3, 20, 20));
        assert!(r.passed());
        let h = ctx(2, 1, &[0, 1]);
        let r = h.pbw_check(2, 4, 20, 1);
        assert_eq!(r.counts[2], (2, 45, 45));
        assert!(r.passed());
        assert_eq!(r.counts[0], (0, 1, 1));
    }

    #[test]
    fn alpha_exponent_enumeration() {
        // n = 2, bound 3: a + 2b <= 3 minus the zero vector.
        assert_eq!(HbContext::alpha_exponents(2, 3).len(), 5);
        assert_eq!(HbContext::alpha_exponents(1, 2), vec![vec![1], vec![2]]);
    }
}
