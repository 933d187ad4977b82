use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::{Field, Scalar, ScalarError};

/// A commutative variable. The derived order (kind, then indices) is the
/// canonical term order used for storage and serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// Matrix coordinate `a[u,v]` of a point of gl_n.
    A(u8, u8),
    /// Lie generator `e[i,j]`, viewed in Sym g.
    E(u8, u8),
    /// Covector `x[i]`.
    X(u8),
    /// Vector `y[i]`.
    Y(u8),
    T,
    Tau,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::A(u, v) => write!(f, "a[{u},{v}]"),
            Var::E(i, j) => write!(f, "e[{i},{j}]"),
            Var::X(i) => write!(f, "x[{i}]"),
            Var::Y(i) => write!(f, "y[{i}]"),
            Var::T => write!(f, "t"),
            Var::Tau => write!(f, "tau"),
        }
    }
}

impl Var {
    /// Largest index mentioned by the variable (0 for `t`, `tau`).
    pub fn max_index(&self) -> u8 {
        match *self {
            Var::A(u, v) | Var::E(u, v) => u.max(v),
            Var::X(i) | Var::Y(i) => i,
            Var::T | Var::Tau => 0,
        }
    }
}

/// A commutative monomial: sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Builds a monomial from arbitrary pairs, merging repeats and dropping zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (Var, u32)>>(pairs: I) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Removes one power of `v`, returning the exponent it had.
    pub fn derive(&self, v: Var) -> Option<(u32, Monomial)> {
        let pos = self.0.iter().position(|(w, _)| *w == v)?;
        let e = self.0[pos].1;
        let mut out = self.0.clone();
        if e == 1 {
            out.remove(pos);
        } else {
            out[pos].1 -= 1;
        }
        Some((e, Monomial(out)))
    }

    /// Splits off the powers of `v`: returns `(exponent of v, rest)`.
    pub fn split(&self, v: Var) -> (u32, Monomial) {
        let e = self.exponent(v);
        let rest = Monomial(self.0.iter().copied().filter(|(w, _)| *w != v).collect());
        (e, rest)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse commutative polynomial over a fixed field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Exact `a op b`; fails on mixed characteristic.
pub fn poly_arith(a: &Poly, b: &Poly, op: PolyOp) -> Result<Poly, ScalarError> {
    if a.field != b.field {
        return Err(ScalarError::CharMismatch(a.field, b.field));
    }
    Ok(match op {
        PolyOp::Add => a + b,
        PolyOp::Sub => a - b,
        PolyOp::Mul => a * b,
    })
}

impl Poly {
    pub fn zero(field: Field) -> Self {
        Poly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = Poly::zero(c.field());
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one(field: Field) -> Self {
        Poly::constant(field.one())
    }

    pub fn var(field: Field, v: Var) -> Self {
        Poly::term(Monomial::var(v), field.one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut p = Poly::zero(c.field());
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(field: Field, it: I) -> Self {
        let mut p = Poly::zero(field);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// The constant coefficient.
    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one())
    }

    /// Adds `c * m` in place, keeping the map free of zero coefficients.
    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        assert_eq!(c.field(), self.field, "scalar characteristic mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::from_terms(self.field, self.terms.iter().map(|(m, a)| (m.clone(), a * c)))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            field: self.field,
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// True if every term has total degree `d`.
    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    /// Every variable occurring in the polynomial.
    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn derivative(&self, v: Var) -> Poly {
        let mut out = Poly::zero(self.field);
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.derive(v) {
                out.add_term(rest, c * &self.field.int(e as i64));
            }
        }
        out
    }

    /// Substitutes a polynomial for each variable accepted by `subst`; others are kept.
    pub fn substitute<F>(&self, mut subst: F) -> Poly
    where
        F: FnMut(Var) -> Option<Poly>,
    {
        let mut out = Poly::zero(self.field);
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            for &(v, e) in m.pairs() {
                let factor = match subst(v) {
                    Some(p) => p.pow(e),
                    None => Poly::term(Monomial::from_pairs([(v, e)]), self.field.one()),
                };
                acc = &acc * &factor;
            }
            out = &out + &acc;
        }
        out
    }

    /// Evaluates with every variable mapped to a scalar.
    pub fn eval<F>(&self, mut value: F) -> Scalar
    where
        F: FnMut(Var) -> Scalar,
    {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.pairs() {
                t = &t * &value(v).pow(e);
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Groups terms by the power of `v`: coefficient polynomials free of `v`.
    pub fn collect(&self, v: Var) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            out.entry(e)
                .or_insert_with(|| Poly::zero(self.field))
                .add_term(rest, c.clone());
        }
        out
    }

    /// The part of highest weight under `weight`, with that weight.
    pub fn top_part<W: Fn(&Monomial) -> u32>(&self, weight: W) -> Option<(u32, Poly)> {
        let top = self.terms.keys().map(&weight).max()?;
        let p = Poly::from_terms(
            self.field,
            self.terms
                .iter()
                .filter(|(m, _)| weight(m) == top)
                .map(|(m, c)| (m.clone(), c.clone())),
        );
        Some((top, p))
    }

    /// Reduces every coefficient into `field`.
    pub fn reduce(&self, field: Field) -> Result<Poly, ScalarError> {
        let mut out = Poly::zero(field);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.reduce(field)?);
        }
        Ok(out)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.field, rhs.field, "polynomial characteristic mismatch");
        let mut out = Poly::zero(self.field);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{m}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(u: u8, v: u8) -> Poly {
        Poly::var(Field::Rational, Var::A(u, v))
    }

    #[test]
    fn difference_of_squares() {
        let one = Poly::one(Field::Rational);
        let p = &(&a(1, 1) + &one) * &(&a(1, 1) - &one);
        let expected = &a(1, 1).pow(2) - &one;
        assert_eq!(p, expected);
    }

    #[test]
    fn additive_identity() {
        let p = &a(1, 2) + &a(2, 1).pow(3);
        assert_eq!(&p + &Poly::zero(Field::Rational), p);
    }

    #[test]
    fn mod_five_product() {
        let f = Field::Prime(5);
        let x = Poly::var(f, Var::A(1, 1));
        let p = &x.scale(&f.int(2)) * &x.scale(&f.int(3));
        assert_eq!(p, x.pow(2));
    }

    #[test]
    fn mixed_characteristic_rejected() {
        let p = Poly::one(Field::Rational);
        let q = Poly::one(Field::Prime(3));
        assert!(poly_arith(&p, &q, PolyOp::Add).is_err());
        assert_eq!(
            poly_arith(&p, &p, PolyOp::Sub).unwrap(),
            Poly::zero(Field::Rational)
        );
    }

    #[test]
    fn no_zero_terms_after_cancellation() {
        let p = &a(1, 1) - &a(1, 1);
        assert!(p.is_zero());
        assert_eq!(p.len(), 0);
    }

    #[test]
    fn derivative_and_collect() {
        let p = &a(1, 1).pow(3) + &(&a(1, 1) * &a(2, 2));
        let d = p.derivative(Var::A(1, 1));
        assert_eq!(d, &a(1, 1).pow(2).scale(&Field::Rational.int(3)) + &a(2, 2));
        let c = p.collect(Var::A(2, 2));
        assert_eq!(c[&1], a(1, 1));
        assert_eq!(c[&0], a(1, 1).pow(3));
    }
}
