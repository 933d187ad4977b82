//! Characteristic-p probes: restricted powers, the central subalgebra `Z_0`, and the
//! Casimirs over `F_p`.

use std::time::Instant;

use serde_json::{json, Value};
use thiserror::Error;

use crate::cherednik::{Casimir, CherednikError, HbContext, HbElem, HbGen};
use crate::linalg::Matrix;
use crate::polyseries::{Field, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModpError {
    #[error("operation needs a context of positive characteristic")]
    NotModular,
    #[error("reduction needs a characteristic-0 source with the same n, m")]
    IncompatibleSource,
    #[error("{0} is not central")]
    NotCentral(String),
    #[error(transparent)]
    Cherednik(#[from] CherednikError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// `g^[p]`, the p-th matrix power.
pub fn matrix_p_power(g: &Matrix) -> Result<Matrix, ModpError> {
    let Field::Prime(p) = g.field() else {
        return Err(ModpError::NotModular);
    };
    let n = g.rows();
    let mut acc = Matrix::zeros(g.field(), n, n);
    for i in 0..n {
        acc.set(i, i, g.field().one());
    }
    let mut base = g.clone();
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    Ok(acc)
}

/// The matrix unit for `e[i,j]`.
pub fn unit_matrix(field: Field, n: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(field, n, n);
    m.set(i - 1, j - 1, field.one());
    m
}

/// A matrix re-expressed in the `e`-basis inside `H_b`.
pub fn matrix_to_hb(ctx: &HbContext, m: &Matrix) -> HbElem {
    let mut out = ctx.zero();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let c = m.get(i, j);
            if !c.is_zero() {
                out = out.add(&ctx.e(i + 1, j + 1).scale(c));
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct ModpEntry {
    pub label: String,
    /// Per generator: whether the element commutes with it.
    pub checks: Vec<(String, bool)>,
}

impl ModpEntry {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

#[derive(Debug, Clone)]
pub struct ModpReport {
    pub p: u64,
    pub n: usize,
    pub m: usize,
    pub entries: Vec<ModpEntry>,
    pub elapsed_ms: u128,
}

impl ModpReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(ModpEntry::passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "n": self.n,
            "m": self.m,
            "admissibility": format!("p > n + m = {}", self.n + self.m),
            "entries": self.entries.iter().map(|e| json!({
                "label": e.label,
                "pass": e.passed(),
                "failed_generators": e.checks.iter().filter(|(_, ok)| !ok).map(|(g, _)| g.clone()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "elapsed_ms": self.elapsed_ms as u64,
        })
    }
}

pub fn gen_label(g: HbGen) -> String {
    match g {
        HbGen::X(i) => format!("x[{i}]"),
        HbGen::Y(i) => format!("y[{i}]"),
        HbGen::E(i, j) => format!("e[{i},{j}]"),
    }
}

fn centrality_entry(ctx: &HbContext, label: String, a: &HbElem) -> ModpEntry {
    let checks = ctx
        .gens()
        .iter()
        .map(|&g| (gen_label(g), ctx.commutator(a, &ctx.gen(g)).is_zero()))
        .collect();
    ModpEntry { label, checks }
}

fn prime_of(ctx: &HbContext) -> Result<u64, ModpError> {
    match ctx.field() {
        Field::Prime(p) => Ok(p),
        Field::Rational => Err(ModpError::NotModular),
    }
}

/// `y_i^p`, `x_i^p` and `e[i,j]^p - e[i,j]^[p]`, each with a centrality audit.
pub fn frobenius_central_elements(ctx: &HbContext) -> Result<(Vec<(String, HbElem)>, ModpReport), ModpError> {
    let p = prime_of(ctx)?;
    let start = Instant::now();
    let n = ctx.n();
    let pe = p as u32;
    let mut elems = Vec::new();
    for i in 1..=n {
        elems.push((format!("y[{i}]^{p}"), ctx.pow(&ctx.y(i), pe)));
        elems.push((format!("x[{i}]^{p}"), ctx.pow(&ctx.x(i), pe)));
    }
    for i in 1..=n {
        for j in 1..=n {
            let restricted = matrix_p_power(&unit_matrix(ctx.field(), n, i, j))?;
            let elem = ctx.pow(&ctx.e(i, j), pe).sub(&matrix_to_hb(ctx, &restricted));
            elems.push((format!("e[{i},{j}]^{p} - e[{i},{j}]^[{p}]"), elem));
        }
    }
    let entries = elems
        .iter()
        .map(|(l, a)| centrality_entry(ctx, l.clone(), a))
        .collect();
    let report = ModpReport {
        p,
        n,
        m: ctx.m(),
        entries,
        elapsed_ms: start.elapsed().as_millis(),
    };
    Ok((elems, report))
}

/// The Casimir solver over `F_p`; every output is re-audited for centrality.
pub fn modp_casimirs(ctx: &HbContext) -> Result<Vec<Casimir>, ModpError> {
    prime_of(ctx)?;
    let cs = ctx.casimirs()?.to_vec();
    for c in &cs {
        if !ctx.is_central(&c.t) {
            return Err(ModpError::NotCentral(format!("t_{}", c.i)));
        }
    }
    Ok(cs)
}

/// Per Casimir: (mod-p image of the char-0 `t_i` is central over `F_p`, and it equals
/// the `t_i` solved directly over `F_p`).
pub fn reduction_compatibility(ctx0: &HbContext, ctxp: &HbContext) -> Result<Vec<(bool, bool)>, ModpError> {
    prime_of(ctxp)?;
    if ctx0.field() != Field::Rational || ctx0.n() != ctxp.n() || ctx0.m() != ctxp.m() {
        return Err(ModpError::IncompatibleSource);
    }
    for (a, b) in ctx0.b().iter().zip(ctxp.b()) {
        if a.reduce(ctxp.field())? != *b {
            return Err(ModpError::IncompatibleSource);
        }
    }
    let direct = ctxp.casimirs()?;
    ctx0.casimirs()?
        .iter()
        .zip(direct)
        .map(|(c0, cp)| {
            let reduced = HbElem::from_pbw(c0.t.as_pbw().reduce(ctxp.field())?);
            Ok((ctxp.is_central(&reduced), reduced == cp.t))
        })
        .collect()
}

/// Algebraic independence of `Z_0` generators through their leading monomials: each
/// element's top total-degree part must be a single monomial and the exponent
/// vectors must be linearly independent over Q.
///
/// A Jacobian test is useless here: `d(x^p) = 0` in characteristic p.
pub fn leading_monomials_independent(ctx: &HbContext, elems: &[HbElem]) -> bool {
    let q = Field::Rational;
    let mut rows = Vec::new();
    for a in elems {
        let Some(top) = a.as_pbw().max_degree() else {
            return false;
        };
        let mut lead = a.as_pbw().terms().filter(|(m, _)| m.degree() == top);
        let (Some((m, _)), None) = (lead.next(), lead.next()) else {
            return false;
        };
        rows.push(m.exps().iter().map(|&e| q.int(e as i64)).collect::<Vec<_>>());
    }
    let count = rows.len();
    debug_assert!(rows.iter().all(|r| r.len() == ctx.gens().len()));
    count == 0 || Matrix::from_rows(q, rows).rank() == count
}
