//! The enveloping algebra U(gl_n) on the row-major basis `e[1,1], e[1,2], ..., e[n,n]`.

use std::collections::HashMap;
use std::sync::Mutex;

use thiserror::Error;

use crate::invariants::{dualize, q_invariant, InvariantError, SymG};
use crate::pbw::{PbwElem, PbwEngine, PbwMonomial};
use crate::polyseries::{Field, Monomial, Poly, Scalar, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvelopeError {
    #[error("symmetrization of degree {degree} needs p > degree (p = {p})")]
    DegreeTooHigh { degree: u32, p: u64 },
    #[error("index {0} out of range for gl_{1}")]
    IndexOutOfRange(usize, usize),
    #[error("element does not belong to this algebra: {0}")]
    ContextMismatch(String),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

/// An element of U(gl_n) in PBW normal form over the row-major basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UgElem(pub(crate) PbwElem);

impl UgElem {
    pub fn as_pbw(&self) -> &PbwElem {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, o: &UgElem) -> UgElem {
        UgElem(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &UgElem) -> UgElem {
        UgElem(self.0.sub(&o.0))
    }

    pub fn scale(&self, c: &Scalar) -> UgElem {
        UgElem(self.0.scale(c))
    }
}

/// U(gl_n) over a fixed field.
#[derive(Debug)]
pub struct UgAlgebra {
    n: usize,
    engine: PbwEngine,
    sym_memo: Mutex<HashMap<Monomial, UgElem>>,
}

impl UgAlgebra {
    pub fn new(field: Field, n: usize) -> Self {
        assert!(n >= 1, "gl_0 is not supported");
        let mut engine = PbwEngine::new(field, n * n);
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for l in 1..=n {
                        let (a, b) = (Self::index(n, i, j), Self::index(n, k, l));
                        if a <= b {
                            continue;
                        }
                        // [e_ij, e_kl] = d_jk e_il - d_li e_kj
                        let mut v = PbwElem::zero(field);
                        if j == k {
                            v = v.add(&engine.gen(Self::index(n, i, l)));
                        }
                        if l == i {
                            v = v.sub(&engine.gen(Self::index(n, k, j)));
                        }
                        engine.set_commutator(a, b, v);
                    }
                }
            }
        }
        UgAlgebra {
            n,
            engine,
            sym_memo: Mutex::new(HashMap::new()),
        }
    }

    /// Row-major position of `e[i,j]` (1-based indices).
    pub fn index(n: usize, i: usize, j: usize) -> usize {
        (i - 1) * n + (j - 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.engine.field()
    }

    pub fn engine(&self) -> &PbwEngine {
        &self.engine
    }

    pub fn e(&self, i: usize, j: usize) -> UgElem {
        UgElem(self.engine.gen(Self::index(self.n, i, j)))
    }

    pub fn one(&self) -> UgElem {
        UgElem(self.engine.one())
    }

    pub fn constant(&self, c: Scalar) -> UgElem {
        UgElem(self.engine.constant(c))
    }

    pub fn zero(&self) -> UgElem {
        UgElem(PbwElem::zero(self.field()))
    }

    /// The generator behind each basis position, as `(i, j)`.
    pub fn basis(&self) -> Vec<(usize, usize)> {
        (1..=self.n)
            .flat_map(|i| (1..=self.n).map(move |j| (i, j)))
            .collect()
    }

    /// Checks that `u` has this algebra's shape and characteristic.
    pub fn check(&self, u: &UgElem) -> Result<(), EnvelopeError> {
        if u.0.field() != self.field() {
            return Err(EnvelopeError::ContextMismatch(format!(
                "field {} vs {}",
                u.0.field(),
                self.field()
            )));
        }
        if u.0.terms().any(|(m, _)| m.exps().len() != self.n * self.n) {
            return Err(EnvelopeError::ContextMismatch("monomial length".into()));
        }
        Ok(())
    }

    pub fn mul(&self, a: &UgElem, b: &UgElem) -> UgElem {
        UgElem(self.engine.mul(&a.0, &b.0))
    }

    pub fn try_mul(&self, a: &UgElem, b: &UgElem) -> Result<UgElem, EnvelopeError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn commutator(&self, a: &UgElem, b: &UgElem) -> UgElem {
        UgElem(self.engine.commutator(&a.0, &b.0))
    }

    pub fn pow(&self, a: &UgElem, e: u32) -> UgElem {
        UgElem(self.engine.pow(&a.0, e))
    }

    /// True iff `u` commutes with every `e[i,j]`.
    pub fn is_central(&self, u: &UgElem) -> bool {
        self.basis()
            .into_iter()
            .all(|(i, j)| self.commutator(u, &self.e(i, j)).is_zero())
    }

    /// The canonical symmetrization `v_1...v_k -> (1/k!) sum_sigma v_sigma(1)...v_sigma(k)`.
    pub fn symmetrize(&self, s: &SymG) -> Result<UgElem, EnvelopeError> {
        let mut out = self.zero();
        for (m, c) in s.poly().terms() {
            let sym = self.symmetrize_monomial(m)?;
            out = out.add(&sym.scale(c));
        }
        Ok(out)
    }

    fn symmetrize_monomial(&self, m: &Monomial) -> Result<UgElem, EnvelopeError> {
        if let Some(hit) = self.sym_memo.lock().expect("memo lock").get(m) {
            return Ok(hit.clone());
        }
        let degree = m.degree();
        if let Field::Prime(p) = self.field() {
            if degree as u64 >= p {
                return Err(EnvelopeError::DegreeTooHigh { degree, p });
            }
        }
        let mut gens: Vec<usize> = Vec::with_capacity(degree as usize);
        for &(v, e) in m.pairs() {
            let Var::E(i, j) = v else {
                unreachable!("SymG holds only e-variables");
            };
            let (i, j) = (i as usize, j as usize);
            if i == 0 || j == 0 || i > self.n || j > self.n {
                return Err(EnvelopeError::IndexOutOfRange(i.max(j), self.n));
            }
            gens.extend(std::iter::repeat(Self::index(self.n, i, j)).take(e as usize));
        }
        gens.sort_unstable();
        // Distinct permutations of the multiset each occur equally often among all k!.
        let mut sum = PbwElem::zero(self.field());
        let mut count: i64 = 0;
        let mut perm = gens.clone();
        loop {
            sum = sum.add(&self.engine.word(&perm));
            count += 1;
            if !next_permutation(&mut perm) {
                break;
            }
        }
        let inv = self
            .field()
            .int(count)
            .inv()
            .expect("permutation count invertible below p");
        let out = UgElem(sum.scale(&inv));
        self.sym_memo
            .lock()
            .expect("memo lock")
            .insert(m.clone(), out.clone());
        Ok(out)
    }

    /// The central element `symmetrize(dualize(Q_i))`.
    pub fn alpha(&self, i: usize) -> Result<UgElem, EnvelopeError> {
        if !(1..=self.n).contains(&i) {
            return Err(EnvelopeError::IndexOutOfRange(i, self.n));
        }
        let q = q_invariant(self.field(), self.n, i)?;
        self.symmetrize(&dualize(&q))
    }

    /// All terms as a commutative polynomial in the `e[i,j]`.
    pub fn to_poly(&self, u: &UgElem) -> Poly {
        Poly::from_terms(
            self.field(),
            u.0.terms().map(|(m, c)| (self.monomial_to_commutative(m), c.clone())),
        )
    }

    fn monomial_to_commutative(&self, m: &PbwMonomial) -> Monomial {
        Monomial::from_pairs(
            self.basis()
                .into_iter()
                .zip(m.exps())
                .map(|((i, j), &e)| (Var::E(i as u8, j as u8), e)),
        )
    }

    /// Reads a commutative polynomial in the `e[i,j]` as the PBW-ordered element with
    /// the same exponents.
    pub fn from_ordered_poly(&self, p: &Poly) -> Result<UgElem, EnvelopeError> {
        let mut out = PbwElem::zero(self.field());
        for (m, c) in p.terms() {
            let mut exps = vec![0u32; self.n * self.n];
            for &(v, e) in m.pairs() {
                match v {
                    Var::E(i, j)
                        if (1..=self.n).contains(&(i as usize))
                            && (1..=self.n).contains(&(j as usize)) =>
                    {
                        exps[Self::index(self.n, i as usize, j as usize)] += e;
                    }
                    other => {
                        return Err(EnvelopeError::ContextMismatch(format!(
                            "variable {other} is not a generator of gl_{}",
                            self.n
                        )))
                    }
                }
            }
            out.add_term(PbwMonomial::from_exps(exps), c.clone());
        }
        Ok(UgElem(out))
    }

    /// Top-degree part of `u` as an element of Sym g (the symbol for `deg g = 1`).
    pub fn symbol(&self, u: &UgElem) -> Option<Poly> {
        self.to_poly(u).top_part(Monomial::degree).map(|(_, p)| p)
    }
}

/// Advances to the next lexicographic permutation; false once the last is reached.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len())
        .rev()
        .find(|&j| v[j] > v[i])
        .expect("successor exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn half() -> Scalar {
        Q.ratio(1, 2).unwrap()
    }

    #[test]
    fn straightening_examples() {
        let u = UgAlgebra::new(Q, 2);
        let e12e21 = u.mul(&u.e(1, 2), &u.e(2, 1));
        assert_eq!(e12e21.as_pbw().len(), 1);
        let e21e12 = u.mul(&u.e(2, 1), &u.e(1, 2));
        let expected = e12e21.sub(&u.e(1, 1)).add(&u.e(2, 2));
        assert_eq!(e21e12, expected);
        assert_eq!(u.commutator(&u.e(1, 1), &u.e(1, 2)), u.e(1, 2));
    }

    #[test]
    fn symmetrize_examples() {
        let u = UgAlgebra::new(Q, 2);
        let e = |i, j| Poly::var(Q, Var::E(i, j));
        let s = SymG::new(e(1, 1).pow(2)).unwrap();
        assert_eq!(u.symmetrize(&s).unwrap(), u.pow(&u.e(1, 1), 2));

        let s = SymG::new(&e(1, 2) * &e(2, 1)).unwrap();
        let expected = u
            .mul(&u.e(1, 2), &u.e(2, 1))
            .sub(&u.e(1, 1).sub(&u.e(2, 2)).scale(&half()));
        assert_eq!(u.symmetrize(&s).unwrap(), expected);

        let s = SymG::new(e(1, 2)).unwrap();
        assert_eq!(u.symmetrize(&s).unwrap(), u.e(1, 2));
    }

    #[test]
    fn symmetrize_rejects_high_degree_mod_p() {
        let u = UgAlgebra::new(Field::Prime(3), 1);
        let s = SymG::new(Poly::var(Field::Prime(3), Var::E(1, 1)).pow(3)).unwrap();
        assert!(matches!(
            u.symmetrize(&s),
            Err(EnvelopeError::DegreeTooHigh { degree: 3, p: 3 })
        ));
    }

    #[test]
    fn alpha_examples() {
        let u1 = UgAlgebra::new(Q, 1);
        assert_eq!(u1.alpha(1).unwrap(), u1.e(1, 1));

        let u = UgAlgebra::new(Q, 2);
        assert_eq!(u.alpha(1).unwrap(), u.e(1, 1).add(&u.e(2, 2)));
        let a2 = u.alpha(2).unwrap();
        let expected = u
            .mul(&u.e(1, 1), &u.e(2, 2))
            .sub(&u.mul(&u.e(1, 2), &u.e(2, 1)))
            .add(&u.e(1, 1).sub(&u.e(2, 2)).scale(&half()));
        assert_eq!(a2, expected);
        assert!(u.is_central(&a2));
        assert!(u.is_central(&u.alpha(1).unwrap()));
        assert!(!u.is_central(&u.e(1, 2)));
        assert!(u.alpha(3).is_err());
    }

    #[test]
    fn alphas_central_for_gl3() {
        let u = UgAlgebra::new(Q, 3);
        for i in 1..=3 {
            assert!(u.is_central(&u.alpha(i).unwrap()), "alpha_{i}");
        }
    }

    #[test]
    fn next_permutation_counts_multiset() {
        let mut v = vec![0, 0, 1, 2];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 12);
    }

    #[test]
    fn context_check() {
        let u = UgAlgebra::new(Q, 2);
        let other = UgAlgebra::new(Field::Prime(7), 2);
        assert!(u.try_mul(&u.e(1, 1), &other.e(1, 1)).is_err());
        let small = UgAlgebra::new(Q, 1);
        assert!(u.try_mul(&u.e(1, 1), &small.e(1, 1)).is_err());
    }
}
