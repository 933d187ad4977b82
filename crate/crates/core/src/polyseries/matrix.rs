use thiserror::Error;

use super::poly::{Poly, Var};
use super::scalar::Field;
use super::series::TruncSeries;

/// Largest matrix size accepted by [`poly_det`].
pub const DEFAULT_DET_BOUND: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix of size {size} exceeds the determinant bound {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("matrix is not square")]
    NotSquare,
}

/// Dense square matrix of polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    size: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn from_fn<F: FnMut(usize, usize) -> Poly>(size: usize, mut f: F) -> Self {
        let mut entries = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                entries.push(f(i, j));
            }
        }
        PolyMatrix { size, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Result<Self, MatrixError> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(MatrixError::NotSquare);
        }
        Ok(PolyMatrix {
            size,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// The generic matrix `A = (a[u,v])`.
    pub fn generic(field: Field, n: usize) -> Self {
        Self::from_fn(n, |i, j| Poly::var(field, Var::A(i as u8 + 1, j as u8 + 1)))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Zero-based entry access.
    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.size + j]
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        let field = self.entries[0].field();
        PolyMatrix::from_fn(self.size, |i, j| {
            (0..self.size).fold(Poly::zero(field), |acc, k| {
                &acc + &(self.get(i, k) * other.get(k, j))
            })
        })
    }

    fn minor(&self, row: usize, col: usize) -> PolyMatrix {
        let mut entries = Vec::with_capacity((self.size - 1) * (self.size - 1));
        for i in (0..self.size).filter(|&i| i != row) {
            for j in (0..self.size).filter(|&j| j != col) {
                entries.push(self.get(i, j).clone());
            }
        }
        PolyMatrix {
            size: self.size - 1,
            entries,
        }
    }
}

/// Determinant by cofactor expansion along the first row, for sizes up to
/// [`DEFAULT_DET_BOUND`].
pub fn poly_det(m: &PolyMatrix) -> Result<Poly, MatrixError> {
    poly_det_bounded(m, DEFAULT_DET_BOUND)
}

pub fn poly_det_bounded(m: &PolyMatrix, bound: usize) -> Result<Poly, MatrixError> {
    if m.size > bound {
        return Err(MatrixError::TooLarge {
            size: m.size,
            bound,
        });
    }
    Ok(cofactor(m))
}

fn cofactor(m: &PolyMatrix) -> Poly {
    match m.size {
        0 => panic!("empty matrix"),
        1 => m.get(0, 0).clone(),
        _ => {
            let field = m.get(0, 0).field();
            let mut acc = Poly::zero(field);
            for j in 0..m.size {
                if m.get(0, j).is_zero() {
                    continue;
                }
                let term = m.get(0, j) * &cofactor(&m.minor(0, j));
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Truncated Neumann series `sum_{k < order} t^k A^k` of the generic `n x n` matrix,
/// entry by entry.
pub fn matrix_resolvent(field: Field, n: usize, order: u32) -> Vec<Vec<TruncSeries>> {
    assert!(order >= 1, "resolvent order must be positive");
    let a = PolyMatrix::generic(field, n);
    let mut power = PolyMatrix::from_fn(n, |i, j| {
        if i == j {
            Poly::one(field)
        } else {
            Poly::zero(field)
        }
    });
    let mut out: Vec<Vec<TruncSeries>> = (0..n)
        .map(|_| (0..n).map(|_| TruncSeries::zero(field, order, 1)).collect())
        .collect();
    for k in 0..order {
        for (i, row) in out.iter_mut().enumerate() {
            for (j, s) in row.iter_mut().enumerate() {
                s.set(k, 0, power.get(i, j).clone());
            }
        }
        power = power.mul(&a);
    }
    out
}
