//! The Poisson algebra `A_m = Sym(g + h + h*)` obtained from the weighted filtration,
//! the symbols `gr t_i`, and the determinants `f_x`, `f_y` cutting out cyclic data.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cherednik::{CherednikError, FiltrationSpec, HbContext};
use crate::invariants::{dualize, q_invariant, r_series, InvariantError};
use crate::linalg::Matrix;
use crate::polyseries::{poly_det_bounded, Field, MatrixError, Poly, PolyMatrix, Scalar, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PoissonError {
    #[error("elements belong to different algebras: (n, m) = {0:?} vs {1:?}")]
    Mismatch((usize, usize), (usize, usize)),
    #[error("variable {0} is not a generator of A_m for n = {1}")]
    BadVariable(Var, usize),
    #[error("gr t_{0} is not Poisson-central")]
    NotCentral(usize),
    #[error("the elimination system is singular at this point")]
    Singular,
    #[error("gr t_{0} is not linear in the unknown vector")]
    NotLinear(usize),
    #[error("point has the wrong shape")]
    Shape,
    #[error(transparent)]
    Cherednik(#[from] CherednikError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// `A_m` for fixed `n`: the generator bracket table.
#[derive(Debug, Clone)]
pub struct PoissonAlgebra {
    n: usize,
    m: usize,
    field: Field,
    table: HashMap<(Var, Var), Poly>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoissonElem {
    n: usize,
    m: usize,
    poly: Poly,
}

impl PoissonElem {
    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Weighted degree (`x` has weight `m`, `y` and `e` weight 1) of each term.
    pub fn weighted_degrees(&self) -> Vec<u32> {
        self.poly
            .terms()
            .map(|(mono, _)| weighted_weight(self.m, mono))
            .collect()
    }
}

fn weighted_weight(m: usize, mono: &crate::polyseries::Monomial) -> u32 {
    mono.pairs()
        .iter()
        .map(|&(v, e)| match v {
            Var::X(_) => e * m as u32,
            _ => e,
        })
        .sum()
}

pub fn generators(n: usize) -> Vec<Var> {
    let mut out = Vec::new();
    for i in 1..=n as u8 {
        for j in 1..=n as u8 {
            out.push(Var::E(i, j));
        }
    }
    out.extend((1..=n as u8).map(Var::X));
    out.extend((1..=n as u8).map(Var::Y));
    out
}

impl PoissonAlgebra {
    pub fn new(field: Field, n: usize, m: usize) -> Result<Self, PoissonError> {
        let r = r_series(field, n, m as u32 + 1)?;
        let var = |v| Poly::var(field, v);
        let mut table = HashMap::new();
        let gens = generators(n);
        for &u in &gens {
            for &v in &gens {
                let val = match (u, v) {
                    (Var::E(i, j), Var::E(k, l)) => {
                        let mut p = Poly::zero(field);
                        if j == k {
                            p = &p + &var(Var::E(i, l));
                        }
                        if l == i {
                            p = &p - &var(Var::E(k, j));
                        }
                        p
                    }
                    (Var::E(i, j), Var::X(k)) if i == k => -&var(Var::X(j)),
                    (Var::E(i, j), Var::Y(k)) if j == k => var(Var::Y(i)),
                    (Var::Y(i), Var::X(j)) => {
                        dualize(r.get(j as usize, i as usize, m as u32)).into_poly()
                    }
                    _ => continue,
                };
                if !val.is_zero() {
                    table.insert((v, u), -&val);
                    table.insert((u, v), val);
                }
            }
        }
        Ok(PoissonAlgebra { n, m, field, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn elem(&self, p: Poly) -> Result<PoissonElem, PoissonError> {
        for v in p.vars() {
            let ok = match v {
                Var::E(i, j) => (1..=self.n as u8).contains(&i) && (1..=self.n as u8).contains(&j),
                Var::X(i) | Var::Y(i) => (1..=self.n as u8).contains(&i),
                _ => false,
            };
            if !ok {
                return Err(PoissonError::BadVariable(v, self.n));
            }
        }
        Ok(PoissonElem {
            n: self.n,
            m: self.m,
            poly: p,
        })
    }

    pub fn gen(&self, v: Var) -> PoissonElem {
        self.elem(Poly::var(self.field, v)).expect("generator")
    }

    pub fn gen_bracket(&self, u: Var, v: Var) -> Poly {
        self.table
            .get(&(u, v))
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.field))
    }

    /// `{f, g} = sum_{u, v} df/du dg/dv {u, v}`.
    pub fn bracket(&self, f: &PoissonElem, g: &PoissonElem) -> Result<PoissonElem, PoissonError> {
        for e in [f, g] {
            if (e.n, e.m) != (self.n, self.m) {
                return Err(PoissonError::Mismatch((e.n, e.m), (self.n, self.m)));
            }
        }
        let fv = f.poly.vars();
        let gv = g.poly.vars();
        let mut out = Poly::zero(self.field);
        for &u in &fv {
            let du = f.poly.derivative(u);
            for &v in &gv {
                let Some(b) = self.table.get(&(u, v)) else {
                    continue;
                };
                out = &out + &(&(&du * &g.poly.derivative(v)) * b);
            }
        }
        Ok(PoissonElem {
            n: self.n,
            m: self.m,
            poly: out,
        })
    }

    pub fn is_central(&self, f: &PoissonElem) -> Result<bool, PoissonError> {
        for v in generators(self.n) {
            if !self.bracket(f, &self.gen(v))?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Jacobi identity on every ordered triple of generators; returns the failing triples.
    pub fn jacobi_failures(&self) -> Result<Vec<(Var, Var, Var)>, PoissonError> {
        let gens = generators(self.n);
        let mut bad = Vec::new();
        for &a in &gens {
            for &b in &gens {
                for &c in &gens {
                    let (ga, gb, gc) = (self.gen(a), self.gen(b), self.gen(c));
                    let t1 = self.bracket(&ga, &self.bracket(&gb, &gc)?)?;
                    let t2 = self.bracket(&gb, &self.bracket(&gc, &ga)?)?;
                    let t3 = self.bracket(&gc, &self.bracket(&ga, &gb)?)?;
                    if !(&(&t1.poly + &t2.poly) + &t3.poly).is_zero() {
                        bad.push((a, b, c));
                    }
                }
            }
        }
        Ok(bad)
    }
}

/// `symbol(t_i, WEIGHTED)`, checked to be Poisson-central.
pub fn gr_t(ctx: &HbContext, i: usize) -> Result<PoissonElem, PoissonError> {
    let alg = PoissonAlgebra::new(ctx.field(), ctx.n(), ctx.m())?;
    gr_t_in(ctx, &alg, i)
}

pub fn gr_t_in(ctx: &HbContext, alg: &PoissonAlgebra, i: usize) -> Result<PoissonElem, PoissonError> {
    let cas = ctx.casimirs()?;
    let c = cas.get(i.wrapping_sub(1)).ok_or(CherednikError::IndexOutOfRange {
        index: i,
        n: ctx.n(),
    })?;
    let sym = ctx.symbol(&c.t, FiltrationSpec::Weighted)?;
    let elem = alg.elem(sym)?;
    if !alg.is_central(&elem)? {
        return Err(PoissonError::NotCentral(i));
    }
    Ok(elem)
}

/// `f_x = det({dualize(Q_i), x_j})` and `f_y = det({dualize(Q_i), y_j})`.
pub fn f_dets(field: Field, n: usize) -> Result<(Poly, Poly), PoissonError> {
    // the e-x and e-y brackets do not depend on m
    let alg = PoissonAlgebra::new(field, n, 1)?;
    let qs: Vec<PoissonElem> = (1..=n)
        .map(|i| -> Result<_, PoissonError> {
            alg.elem(dualize(&q_invariant(field, n, i)?).into_poly())
        })
        .collect::<Result<_, _>>()?;
    let det_with = |mk: fn(u8) -> Var| -> Result<Poly, PoissonError> {
        let mut rows = Vec::with_capacity(n);
        for q in &qs {
            let mut row = Vec::with_capacity(n);
            for j in 1..=n as u8 {
                row.push(alg.bracket(q, &alg.gen(mk(j)))?.into_poly());
            }
            rows.push(row);
        }
        Ok(poly_det_bounded(&PolyMatrix::from_rows(rows)?, 4)?)
    };
    Ok((det_with(Var::X)?, det_with(Var::Y)?))
}

/// Evaluates a polynomial at `e[i,j] = A[i][j]`, `x = xi`, `y = eta` (missing vectors
/// are treated as zero).
pub fn eval_point(p: &Poly, a: &Matrix, xi: Option<&[Scalar]>, eta: Option<&[Scalar]>) -> Scalar {
    let f = p.field();
    p.eval(|v| match v {
        Var::E(i, j) => a.get(i as usize - 1, j as usize - 1).clone(),
        Var::X(i) => xi.map_or_else(|| f.zero(), |x| x[i as usize - 1].clone()),
        Var::Y(i) => eta.map_or_else(|| f.zero(), |y| y[i as usize - 1].clone()),
        _ => f.zero(),
    })
}

/// Whether `v, Av, ..., A^{n-1} v` are linearly independent.
pub fn cyclicity_check(a: &Matrix, v: &[Scalar]) -> bool {
    let n = a.rows();
    if a.cols() != n || v.len() != n {
        return false;
    }
    let mut cols = vec![v.to_vec()];
    for _ in 1..n {
        let next = a.mul_vec(cols.last().expect("nonempty"));
        cols.push(next);
    }
    Matrix::from_rows(a.field(), cols).rank() == n
}

/// A sample where `det != 0` (lhs) and Krylov rank `n` (rhs) disagree.
#[derive(Debug, Clone)]
pub struct CorrespondenceFailure {
    pub point: Value,
    pub lhs: bool,
    pub rhs: bool,
}

#[derive(Debug, Clone)]
pub struct CorrespondenceReport {
    pub n: usize,
    pub samples: usize,
    pub passes: usize,
    /// Samples where the relevant determinant was nonzero.
    pub nonvanishing: usize,
    pub failures: Vec<CorrespondenceFailure>,
}

impl CorrespondenceReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "samples": self.samples,
            "passes": self.passes,
            "nonvanishing": self.nonvanishing,
            "failures": self.failures.iter().map(|f| json!({
                "point": f.point, "lhs": f.lhs, "rhs": f.rhs
            })).collect::<Vec<_>>(),
        })
    }
}

fn random_int(rng: &mut ChaCha8Rng) -> i64 {
    rng.gen_range(-9..=9)
}

/// A seeded sample `(A, v)` with integer entries in `[-9, 9]`. Every fourth sample is
/// made degenerate (a scalar matrix or a zero vector) so both sides of the
/// correspondence are exercised.
pub fn random_point(n: usize, rng: &mut ChaCha8Rng, k: usize) -> (Matrix, Vec<Scalar>) {
    let q = Field::Rational;
    let mut rows: Vec<Vec<i64>> = (0..n)
        .map(|_| (0..n).map(|_| random_int(rng)).collect())
        .collect();
    let mut v: Vec<i64> = (0..n).map(|_| random_int(rng)).collect();
    if k % 4 == 3 {
        if n > 1 && k % 8 == 3 {
            let c = random_int(rng);
            rows = (0..n)
                .map(|i| (0..n).map(|j| if i == j { c } else { 0 }).collect())
                .collect();
        } else {
            v = vec![0; n];
        }
    }
    (
        Matrix::from_i64(q, &rows),
        v.into_iter().map(|x| q.int(x)).collect(),
    )
}

fn point_json(a: &Matrix, v: &[Scalar]) -> Value {
    json!({
        "A": (0..a.rows()).map(|i| (0..a.cols()).map(|j| a.get(i, j).to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "v": v.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
    })
}

/// For seeded `(A, v)`: `f_y(A, v) != 0` iff `v` is cyclic for `A`, and
/// `f_x(A, v) != 0` iff `v` is cyclic for `A^T`. Both are checked on each sample.
pub fn zero_locus_correspondence(n: usize, samples: usize, seed: u64) -> Result<CorrespondenceReport, PoissonError> {
    let (fx, fy) = f_dets(Field::Rational, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CorrespondenceReport {
        n,
        samples,
        passes: 0,
        nonvanishing: 0,
        failures: Vec::new(),
    };
    for k in 0..samples {
        let (a, v) = random_point(n, &mut rng, k);
        let y_side = !eval_point(&fy, &a, None, Some(&v)).is_zero();
        let y_cyc = cyclicity_check(&a, &v);
        let x_side = !eval_point(&fx, &a, Some(&v), None).is_zero();
        let x_cyc = cyclicity_check(&a.transpose(), &v);
        if y_side {
            report.nonvanishing += 1;
        }
        for (det, cyc) in [(y_side, y_cyc), (x_side, x_cyc)] {
            if det != cyc {
                report.failures.push(CorrespondenceFailure {
                    point: point_json(&a, &v),
                    lhs: det,
                    rhs: cyc,
                });
            }
        }
        if y_side == y_cyc && x_side == x_cyc {
            report.passes += 1;
        }
    }
    Ok(report)
}

/// Which vector is known at the point.
#[derive(Debug, Clone)]
pub enum Known {
    X(Vec<Scalar>),
    Y(Vec<Scalar>),
}

/// Solves `gr t_i(A, xi, eta) = 0`, `i = 1..n`, for the unknown vector; each `gr t_i`
/// is linear in it.
pub fn eliminate_at_point(ctx: &HbContext, a: &Matrix, known: &Known) -> Result<Vec<Scalar>, PoissonError> {
    let n = ctx.n();
    let f = ctx.field();
    if a.rows() != n || a.cols() != n {
        return Err(PoissonError::Shape);
    }
    let (vals, unknown): (&[Scalar], fn(u8) -> Var) = match known {
        Known::X(v) => (v, Var::Y),
        Known::Y(v) => (v, Var::X),
    };
    if vals.len() != n {
        return Err(PoissonError::Shape);
    }
    let alg = PoissonAlgebra::new(f, n, ctx.m())?;
    let mut mat = Matrix::zeros(f, n, n);
    let mut rhs = Vec::with_capacity(n);
    for i in 1..=n {
        let g = gr_t_in(ctx, &alg, i)?;
        // substitute the known data, keep the unknown variables
        let sub = g.poly().substitute(|v| match v {
            Var::E(r, c) => Some(Poly::constant(a.get(r as usize - 1, c as usize - 1).clone())),
            Var::X(k) if matches!(known, Known::X(_)) => Some(Poly::constant(vals[k as usize - 1].clone())),
            Var::Y(k) if matches!(known, Known::Y(_)) => Some(Poly::constant(vals[k as usize - 1].clone())),
            _ => None,
        });
        if sub.terms().any(|(m, _)| m.degree() > 1) {
            return Err(PoissonError::NotLinear(i));
        }
        for j in 1..=n {
            let c = sub.coeff(&crate::polyseries::Monomial::var(unknown(j as u8)));
            mat.set(i - 1, j - 1, c);
        }
        rhs.push(-&sub.constant_term());
    }
    if mat.rank() < n {
        return Err(PoissonError::Singular);
    }
    mat.solve(&rhs).ok_or(PoissonError::Singular)
}

/// Residuals `gr t_i(A, xi, eta)` at a full point.
pub fn residuals(ctx: &HbContext, a: &Matrix, xi: &[Scalar], eta: &[Scalar]) -> Result<Vec<Scalar>, PoissonError> {
    (1..=ctx.n())
        .map(|i| Ok(eval_point(gr_t(ctx, i)?.poly(), a, Some(xi), Some(eta))))
        .collect()
}

/// Outcome of pointwise elimination on seeded samples.
#[derive(Debug, Clone, Default)]
pub struct EliminationReport {
    /// Points with `f_y(A, eta) != 0`, solved for `xi`.
    pub from_y: usize,
    /// Points with `f_x(A, xi) != 0`, solved for `eta`.
    pub from_x: usize,
    pub zero_residual: usize,
    pub failures: Vec<String>,
}

impl EliminationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.zero_residual == self.from_x + self.from_y
    }
}

/// Draws seeded points until `target` of them have a nonzero determinant on each side,
/// eliminates the complementary vector, and checks every `gr t_i` vanishes exactly.
pub fn elimination_trials(ctx: &HbContext, target: usize, seed: u64) -> Result<EliminationReport, PoissonError> {
    let n = ctx.n();
    let f = ctx.field();
    let (fx, fy) = f_dets(f, n)?;
    let grs: Vec<Poly> = (1..=n)
        .map(|i| gr_t(ctx, i).map(PoissonElem::into_poly))
        .collect::<Result<_, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = EliminationReport::default();
    let mut k = 0usize;
    let budget = 20 * target + 100;
    while (report.from_y < target || report.from_x < target) && k < budget {
        let (a, v) = random_point(n, &mut rng, k);
        k += 1;
        let (a, v) = (
            Matrix::from_rows(f, (0..n).map(|i| (0..n).map(|j| a.get(i, j).reduce(f).expect("integer")).collect()).collect()),
            v.iter().map(|s| s.reduce(f).expect("integer")).collect::<Vec<_>>(),
        );
        for side in [Known::Y(v.clone()), Known::X(v.clone())] {
            let (det, done) = match side {
                Known::Y(_) => (&fy, report.from_y >= target),
                Known::X(_) => (&fx, report.from_x >= target),
            };
            let nonzero = match &side {
                Known::Y(eta) => !eval_point(det, &a, None, Some(eta)).is_zero(),
                Known::X(xi) => !eval_point(det, &a, Some(xi), None).is_zero(),
            };
            if done || !nonzero {
                continue;
            }
            let (xi, eta) = match eliminate_at_point(ctx, &a, &side) {
                Ok(sol) => match &side {
                    Known::Y(eta) => (sol, eta.clone()),
                    Known::X(xi) => (xi.clone(), sol),
                },
                Err(e) => {
                    report.failures.push(format!("{}: {e}", point_json(&a, &v)));
                    continue;
                }
            };
            match side {
                Known::Y(_) => report.from_y += 1,
                Known::X(_) => report.from_x += 1,
            }
            if grs
                .iter()
                .all(|g| eval_point(g, &a, Some(&xi), Some(&eta)).is_zero())
            {
                report.zero_residual += 1;
            } else {
                report.failures.push(format!("nonzero residual at {}", point_json(&a, &v)));
            }
        }
    }
    if report.from_y < target || report.from_x < target {
        report
            .failures
            .push(format!("only {}/{} usable points after {k} draws", report.from_y.min(report.from_x), target));
    }
    Ok(report)
}
