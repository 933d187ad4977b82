//! Invariant theory of gl_n needed to define the algebra and its center:
//! the `r_k` pairing series, characteristic-polynomial coefficients `Q_j`,
//! the trace pairing `a[u,v] -> e[v,u]`, and top symbols of the central
//! corrections read off the bivariate series `c'`.

use thiserror::Error;

use crate::polyseries::{
    matrix_resolvent, poly_det, Field, Monomial, Poly, PolyMatrix, TruncSeries, Var,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("polynomial contains variable {0} outside the expected kind")]
    WrongVariable(Var),
    #[error("gl_{0} exceeds the supported size")]
    TooLarge(usize),
}

/// A polynomial function on gl_n, in the coordinates `a[u,v]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyFn(Poly);

/// An element of Sym g, in the variables `e[i,j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymG(Poly);

impl PolyFn {
    pub fn new(p: Poly) -> Result<Self, InvariantError> {
        match p.vars().into_iter().find(|v| !matches!(v, Var::A(..))) {
            Some(v) => Err(InvariantError::WrongVariable(v)),
            None => Ok(PolyFn(p)),
        }
    }

    pub fn poly(&self) -> &Poly {
        &self.0
    }

    pub fn into_poly(self) -> Poly {
        self.0
    }
}

impl SymG {
    pub fn new(p: Poly) -> Result<Self, InvariantError> {
        match p.vars().into_iter().find(|v| !matches!(v, Var::E(..))) {
            Some(v) => Err(InvariantError::WrongVariable(v)),
            None => Ok(SymG(p)),
        }
    }

    pub fn poly(&self) -> &Poly {
        &self.0
    }

    pub fn into_poly(self) -> Poly {
        self.0
    }
}

/// The coefficients `r_k(x_i, y_j)` for `k < order`.
#[derive(Debug, Clone)]
pub struct RTable {
    n: usize,
    order: u32,
    entries: Vec<PolyFn>,
}

impl RTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `r_k(x_i, y_j)` with 1-based `i`, `j`.
    pub fn get(&self, i: usize, j: usize, k: u32) -> &PolyFn {
        assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j) && k < self.order);
        &self.entries[(((i - 1) * self.n) + (j - 1)) * self.order as usize + k as usize]
    }
}

fn one_minus_var_times_a(field: Field, n: usize, var: Var) -> Poly {
    let tv = Poly::var(field, var);
    let m = PolyMatrix::from_fn(n, |i, j| {
        let delta = if i == j { Poly::one(field) } else { Poly::zero(field) };
        &delta - &(&tv * &Poly::var(field, Var::A(i as u8 + 1, j as u8 + 1)))
    });
    poly_det(&m).expect("size checked by caller")
}

fn check_size(n: usize) -> Result<(), InvariantError> {
    if n == 0 || n > crate::polyseries::matrix::DEFAULT_DET_BOUND {
        Err(InvariantError::TooLarge(n))
    } else {
        Ok(())
    }
}

/// Expands `(x, (1 - tA)^{-1} y) det(1 - tA)^{-1}` through `t^{order-1}`.
///
/// Since `x_i` is the dual basis, `(x_i, M y_j) = M_{ij}`, so `r_k(x_i, y_j)` is the
/// `t^k` coefficient of the `(i,j)` resolvent entry times the inverse determinant.
pub fn r_series(field: Field, n: usize, order: u32) -> Result<RTable, InvariantError> {
    check_size(n)?;
    assert!(order >= 1, "order must be positive");
    let resolvent = matrix_resolvent(field, n, order);
    let det = TruncSeries::from_poly(&one_minus_var_times_a(field, n, Var::T), order, 1);
    let det_inv = det.inverse().expect("det(1 - tA) has constant term 1");
    let mut entries = Vec::with_capacity(n * n * order as usize);
    for row in &resolvent {
        for entry in row {
            let prod = entry.mul(&det_inv);
            for k in 0..order {
                entries.push(PolyFn(prod.coeff(k, 0)));
            }
        }
    }
    Ok(RTable { n, order, entries })
}

/// The trace pairing: `a[u,v] -> e[v,u]`, extended multiplicatively.
pub fn dualize(f: &PolyFn) -> SymG {
    let p = f.poly();
    let out = Poly::from_terms(
        p.field(),
        p.terms().map(|(m, c)| {
            let pairs = m.pairs().iter().map(|&(v, e)| match v {
                Var::A(u, w) => (Var::E(w, u), e),
                other => unreachable!("PolyFn holds only a-variables, found {other}"),
            });
            (Monomial::from_pairs(pairs), c.clone())
        }),
    );
    SymG(out)
}

/// `det(t Id - A)` as a polynomial in `t` and the `a[u,v]`.
pub fn char_poly(field: Field, n: usize) -> Result<Poly, InvariantError> {
    check_size(n)?;
    let t = Poly::var(field, Var::T);
    let m = PolyMatrix::from_fn(n, |i, j| {
        let d = if i == j { t.clone() } else { Poly::zero(field) };
        &d - &Poly::var(field, Var::A(i as u8 + 1, j as u8 + 1))
    });
    Ok(poly_det(&m).expect("size checked"))
}

/// `Q_j` from `det(t Id - A) = sum_j (-1)^j t^{n-j} Q_j(A)`.
pub fn q_invariant(field: Field, n: usize, j: usize) -> Result<PolyFn, InvariantError> {
    if j > n {
        return Err(InvariantError::IndexOutOfRange { index: j, max: n });
    }
    let by_t = char_poly(field, n)?.collect(Var::T);
    let coeff = by_t
        .get(&((n - j) as u32))
        .cloned()
        .unwrap_or_else(|| Poly::zero(field));
    let signed = if j % 2 == 0 { coeff } else { -&coeff };
    Ok(PolyFn(signed))
}

/// The `t^{n-i} tau^m` coefficient of `det(t - A) / ((t tau - 1) det(1 - tau A))`,
/// with `(t tau - 1)^{-1}` expanded as the power series `-sum_k (t tau)^k`.
pub fn cprime_top_symbol(
    field: Field,
    n: usize,
    m: usize,
    i: usize,
) -> Result<PolyFn, InvariantError> {
    check_size(n)?;
    if !(1..=n).contains(&i) {
        return Err(InvariantError::IndexOutOfRange { index: i, max: n });
    }
    if m == 0 {
        return Err(InvariantError::IndexOutOfRange { index: m, max: 0 });
    }
    let (t_order, tau_order) = (n as u32 + 1, m as u32 + 1);
    let numerator = TruncSeries::from_poly(&char_poly(field, n)?, t_order, tau_order);
    let mut geometric = TruncSeries::zero(field, t_order, tau_order);
    for k in 0..t_order.min(tau_order) {
        geometric.set(k, k, Poly::constant(-&field.one()));
    }
    let det_tau = TruncSeries::from_poly(
        &one_minus_var_times_a(field, n, Var::Tau),
        t_order,
        tau_order,
    );
    let det_inv = det_tau.inverse().expect("det(1 - tau A) has constant term 1");
    let c = numerator.mul(&geometric).mul(&det_inv);
    Ok(PolyFn(c.coeff((n - i) as u32, m as u32)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn a(u: u8, v: u8) -> Poly {
        Poly::var(Q, Var::A(u, v))
    }

    fn e(i: u8, j: u8) -> Poly {
        Poly::var(Q, Var::E(i, j))
    }

    fn k(c: i64) -> Poly {
        Poly::constant(Q.int(c))
    }

    /// Independent oracle for n = 1: 1/(1 - ta)^2 = sum (k+1) a^k t^k.
    #[test]
    fn r_series_n1_matches_binomial_expansion() {
        let r = r_series(Q, 1, 5).unwrap();
        for deg in 0..5u32 {
            assert_eq!(
                r.get(1, 1, deg).poly(),
                &(&k(deg as i64 + 1) * &a(1, 1).pow(deg))
            );
        }
        assert_eq!(r.get(1, 1, 2).poly(), &(&k(3) * &a(1, 1).pow(2)));
    }

    #[test]
    fn r_series_n2_first_order() {
        let r = r_series(Q, 2, 3).unwrap();
        assert_eq!(r.get(1, 1, 0).poly(), &k(1));
        assert_eq!(r.get(1, 2, 0).poly(), &Poly::zero(Q));
        // (x_i, A y_j) + delta_ij tr A
        assert_eq!(r.get(1, 1, 1).poly(), &(&(&k(2) * &a(1, 1)) + &a(2, 2)));
        assert_eq!(r.get(1, 2, 1).poly(), &a(1, 2));
        assert_eq!(r.get(2, 1, 1).poly(), &a(2, 1));
        for i in 1..=2 {
            for j in 1..=2 {
                for deg in 0..3 {
                    assert!(r.get(i, j, deg).poly().is_homogeneous(deg));
                }
            }
        }
    }

    #[test]
    fn dualize_examples() {
        let f = PolyFn::new(a(1, 2)).unwrap();
        assert_eq!(dualize(&f).poly(), &e(2, 1));
        let f = PolyFn::new(&a(1, 1) + &a(2, 2)).unwrap();
        assert_eq!(dualize(&f).poly(), &(&e(1, 1) + &e(2, 2)));
        let f = PolyFn::new(&(&a(1, 1) * &a(2, 2)) - &(&a(1, 2) * &a(2, 1))).unwrap();
        assert_eq!(
            dualize(&f).poly(),
            &(&(&e(1, 1) * &e(2, 2)) - &(&e(2, 1) * &e(1, 2)))
        );
        assert!(PolyFn::new(e(1, 1)).is_err());
        assert!(SymG::new(a(1, 1)).is_err());
    }

    #[test]
    fn q_invariants() {
        assert_eq!(q_invariant(Q, 2, 0).unwrap().poly(), &k(1));
        assert_eq!(q_invariant(Q, 2, 1).unwrap().poly(), &(&a(1, 1) + &a(2, 2)));
        assert_eq!(
            q_invariant(Q, 2, 2).unwrap().poly(),
            &(&(&a(1, 1) * &a(2, 2)) - &(&a(1, 2) * &a(2, 1)))
        );
        assert!(q_invariant(Q, 2, 3).is_err());
        for j in 0..=3 {
            assert!(q_invariant(Q, 3, j).unwrap().poly().is_homogeneous(j as u32));
        }
    }

    /// Complete homogeneous symmetric polynomial in eigenvalues, via
    /// `det(1 - tau A)^{-1} = sum_k h_k tau^k`, computed here by brute-force
    /// recursion `h_k = sum_{j>=1} (-1)^{j+1} Q_j h_{k-j}`.
    fn h(n: usize, deg: usize) -> Poly {
        let mut hs = vec![k(1)];
        for d in 1..=deg {
            let mut acc = Poly::zero(Q);
            for j in 1..=d.min(n) {
                let term = q_invariant(Q, n, j).unwrap().poly() * &hs[d - j];
                acc = if j % 2 == 1 { &acc + &term } else { &acc - &term };
            }
            hs.push(acc);
        }
        hs[deg].clone()
    }

    #[test]
    fn cprime_matches_closed_form() {
        // Closed form: -sum_j (-1)^j Q_j h_{m+i-j}, j from 0..=n with n - j >= n - i.
        for n in 1..=3usize {
            for m in 1..=3usize {
                for i in 1..=n {
                    let got = cprime_top_symbol(Q, n, m, i).unwrap();
                    let mut expected = Poly::zero(Q);
                    // Coefficient of t^{n-i} tau^m: det(t-A) contributes t^{n-j} with
                    // coefficient (-1)^j Q_j; the geometric factor supplies (t tau)^{j-i};
                    // the remaining tau^{m-(j-i)} comes from h.
                    for j in i..=n {
                        if j - i > m {
                            continue;
                        }
                        let q = q_invariant(Q, n, j).unwrap();
                        let term = q.poly() * &h(n, m - (j - i));
                        expected = if j % 2 == 0 { &expected - &term } else { &expected + &term };
                    }
                    assert_eq!(got.poly(), &expected, "n={n} m={m} i={i}");
                    assert!(got.poly().is_homogeneous((m + i) as u32));
                }
            }
        }
    }

    #[test]
    fn cprime_examples() {
        assert_eq!(cprime_top_symbol(Q, 1, 1, 1).unwrap().poly(), &a(1, 1).pow(2));
        assert_eq!(cprime_top_symbol(Q, 1, 2, 1).unwrap().poly(), &a(1, 1).pow(3));
        let q2 = &(&a(1, 1) * &a(2, 2)) - &(&a(1, 2) * &a(2, 1));
        assert_eq!(
            cprime_top_symbol(Q, 2, 1, 2).unwrap().poly(),
            &-&(&q2 * &(&a(1, 1) + &a(2, 2)))
        );
        assert!(cprime_top_symbol(Q, 2, 1, 3).is_err());
        assert!(cprime_top_symbol(Q, 2, 1, 0).is_err());
    }
}
