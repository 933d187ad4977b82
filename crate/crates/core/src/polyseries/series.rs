use std::collections::BTreeMap;

use thiserror::Error;

use super::poly::{Monomial, Poly, Var};
use super::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("constant term of the series is not a nonzero scalar")]
    NonUnit,
}

/// Power series in `t` and `tau` with polynomial coefficients, truncated at
/// `t^t_order` and `tau^tau_order`. A univariate series has `tau_order == 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    field: Field,
    t_order: u32,
    tau_order: u32,
    coeffs: BTreeMap<(u32, u32), Poly>,
}

impl TruncSeries {
    pub fn zero(field: Field, t_order: u32, tau_order: u32) -> Self {
        TruncSeries {
            field,
            t_order,
            tau_order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(field: Field, t_order: u32, tau_order: u32) -> Self {
        let mut s = Self::zero(field, t_order, tau_order);
        s.set(0, 0, Poly::one(field));
        s
    }

    /// Splits a polynomial by its `t` and `tau` powers, dropping what lies beyond the bounds.
    pub fn from_poly(p: &Poly, t_order: u32, tau_order: u32) -> Self {
        let mut s = Self::zero(p.field(), t_order, tau_order);
        for (m, c) in p.terms() {
            let (i, rest) = m.split(Var::T);
            let (j, rest) = rest.split(Var::Tau);
            if i < t_order && j < tau_order {
                let mut cur = s.coeff(i, j);
                cur.add_term(rest, c.clone());
                s.set(i, j, cur);
            }
        }
        s
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn orders(&self) -> (u32, u32) {
        (self.t_order, self.tau_order)
    }

    pub fn coeff(&self, i: u32, j: u32) -> Poly {
        self.coeffs
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.field))
    }

    pub fn set(&mut self, i: u32, j: u32, p: Poly) {
        if i >= self.t_order || j >= self.tau_order || p.is_zero() {
            self.coeffs.remove(&(i, j));
        } else {
            self.coeffs.insert((i, j), p);
        }
    }

    /// Reassembles the series as a polynomial in `t`, `tau` and the coefficient variables.
    pub fn to_poly(&self) -> Poly {
        let mut out = Poly::zero(self.field);
        for (&(i, j), p) in &self.coeffs {
            let m = Monomial::from_pairs([(Var::T, i), (Var::Tau, j)]);
            out = &out + &p.mul_monomial(&m);
        }
        out
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        let (to, uo) = self.common_orders(other);
        let mut out = Self::zero(self.field, to, uo);
        for (&(i, j), p) in self.coeffs.iter().chain(other.coeffs.iter()) {
            let cur = out.coeff(i, j);
            out.set(i, j, &cur + p);
        }
        out
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        let (to, uo) = self.common_orders(other);
        let mut out = Self::zero(self.field, to, uo);
        for (&(i, j), p) in &self.coeffs {
            for (&(k, l), q) in &other.coeffs {
                if i + k < to && j + l < uo {
                    let cur = out.coeff(i + k, j + l);
                    out.set(i + k, j + l, &cur + &(p * q));
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> TruncSeries {
        let mut out = Self::zero(self.field, self.t_order, self.tau_order);
        for (&(i, j), p) in &self.coeffs {
            out.set(i, j, p.scale(c));
        }
        out
    }

    fn common_orders(&self, other: &TruncSeries) -> (u32, u32) {
        (
            self.t_order.min(other.t_order),
            self.tau_order.min(other.tau_order),
        )
    }

    /// Multiplicative inverse up to the series' own truncation bounds.
    pub fn inverse(&self) -> Result<TruncSeries, SeriesError> {
        let c0 = self.coeff(0, 0);
        if c0.len() != 1 || c0.constant_term().is_zero() {
            return Err(SeriesError::NonUnit);
        }
        let c0_inv = c0
            .constant_term()
            .inv()
            .map_err(|_| SeriesError::NonUnit)?;
        let mut g = Self::zero(self.field, self.t_order, self.tau_order);
        g.set(0, 0, Poly::constant(c0_inv.clone()));
        // Solve f*g = 1 coefficient by coefficient in increasing total degree.
        let mut targets: Vec<(u32, u32)> = (0..self.t_order)
            .flat_map(|i| (0..self.tau_order).map(move |j| (i, j)))
            .filter(|&k| k != (0, 0))
            .collect();
        targets.sort_by_key(|&(i, j)| (i + j, i));
        for (i, j) in targets {
            let mut acc = Poly::zero(self.field);
            for (&(a, b), f) in &self.coeffs {
                if (a, b) == (0, 0) || a > i || b > j {
                    continue;
                }
                acc = &acc + &(f * &g.coeff(i - a, j - b));
            }
            g.set(i, j, acc.scale(&-&c0_inv));
        }
        Ok(g)
    }
}

/// Inverse of a unit series in `t`, truncated below `t^order`.
pub fn series_inverse(f: &TruncSeries, order: u32) -> Result<TruncSeries, SeriesError> {
    let mut g = TruncSeries::zero(f.field(), order, 1);
    for i in 0..order {
        g.set(i, 0, f.coeff(i, 0));
    }
    g.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyseries::matrix::{poly_det, PolyMatrix};

    fn a(u: u8, v: u8) -> Poly {
        Poly::var(Field::Rational, Var::A(u, v))
    }

    fn t() -> Poly {
        Poly::var(Field::Rational, Var::T)
    }

    #[test]
    fn geometric_series() {
        let f = TruncSeries::from_poly(&(&Poly::one(Field::Rational) - &(&t() * &a(1, 1))), 3, 1);
        let g = series_inverse(&f, 3).unwrap();
        let expected = &(&Poly::one(Field::Rational) + &(&t() * &a(1, 1)))
            + &(&t().pow(2) * &a(1, 1).pow(2));
        assert_eq!(g.to_poly(), expected);
    }

    #[test]
    fn constant_inverse() {
        let f = TruncSeries::from_poly(&Poly::constant(Field::Rational.int(2)), 4, 1);
        let g = series_inverse(&f, 4).unwrap();
        assert_eq!(g.to_poly(), Poly::constant(Field::Rational.ratio(1, 2).unwrap()));
    }

    #[test]
    fn non_unit_rejected() {
        let f = TruncSeries::from_poly(&a(1, 1), 3, 1);
        assert_eq!(series_inverse(&f, 3), Err(SeriesError::NonUnit));
        let z = TruncSeries::zero(Field::Rational, 3, 1);
        assert_eq!(z.inverse(), Err(SeriesError::NonUnit));
        let g = TruncSeries::from_poly(&(&a(1, 1) + &Poly::one(Field::Rational)), 3, 1);
        assert_eq!(g.inverse(), Err(SeriesError::NonUnit));
    }

    #[test]
    fn inverse_of_det_one_minus_t_a() {
        // n = 2, order 2 means coefficients through t^2 are exact.
        let f = Field::Rational;
        let m = PolyMatrix::from_fn(2, |i, j| {
            let delta = if i == j { Poly::one(f) } else { Poly::zero(f) };
            &delta - &(&t() * &a(i as u8 + 1, j as u8 + 1))
        });
        let det = poly_det(&m).unwrap();
        let g = series_inverse(&TruncSeries::from_poly(&det, 3, 1), 3).unwrap();
        let expected = &(&Poly::one(f) + &(&t() * &(&a(1, 1) + &a(2, 2))))
            + &(&t().pow(2)
                * &(&(&a(1, 1).pow(2) + &(&a(1, 2) * &a(2, 1)))
                    + &(&(&a(1, 1) * &a(2, 2)) + &a(2, 2).pow(2))));
        assert_eq!(g.to_poly(), expected);
        let back = g.mul(&TruncSeries::from_poly(&det, 3, 1));
        assert_eq!(back.to_poly(), Poly::one(f));
    }

    #[test]
    fn bivariate_inverse() {
        // (1 - t*tau)^{-1} = sum (t*tau)^k
        let f = Field::Rational;
        let tau = Poly::var(f, Var::Tau);
        let s = TruncSeries::from_poly(&(&Poly::one(f) - &(&t() * &tau)), 3, 4);
        let g = s.inverse().unwrap();
        for i in 0..3 {
            for j in 0..4 {
                let expected = if i == j { Poly::one(f) } else { Poly::zero(f) };
                assert_eq!(g.coeff(i, j), expected, "({i},{j})");
            }
        }
    }
}
