//! Verma modules `M(lambda) = H_b (x) C_lambda` over the Cartan part plus `H_+`.
//!
//! A basis is given by the normal monomials in `x` and the strictly lower `e[i,j]`
//! applied to `v_lambda`; the triangular normal form of `a * u` acts by truncation.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cherednik::{CherednikError, HbContext, HbElem, HbGen};
use crate::linalg::Matrix;
use crate::pbw::PbwMonomial;
use crate::polyseries::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VermaError {
    #[error("weight has {got} entries, expected {expected}")]
    WeightLength { got: usize, expected: usize },
    #[error("weight entry {0} is not in the algebra's field")]
    FieldMismatch(String),
    #[error("t_{0} does not act on v_lambda by a scalar")]
    NotProportional(usize),
    #[error("t_{i} - chi does not annihilate the module at depth {depth}")]
    NotScalar { i: usize, depth: u32 },
    #[error("ad(delta) has the wrong sign on {0:?}")]
    DeltaSign(HbGen),
    #[error(transparent)]
    Cherednik(#[from] CherednikError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weight(Vec<Scalar>);

impl Weight {
    pub fn new(ctx: &HbContext, lambda: Vec<Scalar>) -> Result<Self, VermaError> {
        if lambda.len() != ctx.n() {
            return Err(VermaError::WeightLength {
                got: lambda.len(),
                expected: ctx.n(),
            });
        }
        if let Some(bad) = lambda.iter().find(|s| s.field() != ctx.field()) {
            return Err(VermaError::FieldMismatch(bad.to_string()));
        }
        Ok(Weight(lambda))
    }

    pub fn values(&self) -> &[Scalar] {
        &self.0
    }
}

/// Exponents of `x_1..x_n` and of the strictly lower `e[i,j]` (row-major).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VermaMonomial {
    pub xexp: Vec<u32>,
    pub lexp: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VermaVector {
    field: Field,
    terms: BTreeMap<VermaMonomial, Scalar>,
}

impl VermaVector {
    pub fn zero(field: Field) -> Self {
        VermaVector {
            field,
            terms: BTreeMap::new(),
        }
    }

    /// The highest-weight vector `v_lambda`.
    pub fn highest(ctx: &HbContext) -> Self {
        Self::basis(ctx, monomial_one(ctx))
    }

    pub fn basis(ctx: &HbContext, m: VermaMonomial) -> Self {
        let mut v = Self::zero(ctx.field());
        v.add_term(m, ctx.field().one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&VermaMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &VermaMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, m: VermaMonomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&m) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn add(&self, o: &VermaVector) -> VermaVector {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> VermaVector {
        let mut out = Self::zero(self.field);
        for (m, k) in &self.terms {
            out.add_term(m.clone(), k * c);
        }
        out
    }

    pub fn sub(&self, o: &VermaVector) -> VermaVector {
        self.add(&o.scale(&-&self.field.one()))
    }
}

fn lower_gens(n: usize) -> Vec<HbGen> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..i {
            out.push(HbGen::E(i, j));
        }
    }
    out
}

fn upper_gens(n: usize) -> Vec<HbGen> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(HbGen::E(i, j));
        }
    }
    out
}

/// The generators of `H_-` in basis order: x's, then strictly lower e's.
pub fn minus_gens(n: usize) -> Vec<HbGen> {
    (1..=n).map(HbGen::X).chain(lower_gens(n)).collect()
}

/// The generators killing `v_lambda`: y's and strictly upper e's.
pub fn plus_gens(n: usize) -> Vec<HbGen> {
    (1..=n).map(HbGen::Y).chain(upper_gens(n)).collect()
}

fn monomial_one(ctx: &HbContext) -> VermaMonomial {
    let n = ctx.n();
    VermaMonomial {
        xexp: vec![0; n],
        lexp: vec![0; n * (n - 1) / 2],
    }
}

fn to_hb(ctx: &HbContext, m: &VermaMonomial) -> HbElem {
    let n = ctx.n();
    let mut exps = vec![0u32; ctx.gens().len()];
    exps[..n].copy_from_slice(&m.xexp);
    exps[n..n + m.lexp.len()].copy_from_slice(&m.lexp);
    let mut p = crate::pbw::PbwElem::zero(ctx.field());
    p.add_term(PbwMonomial::from_exps(exps), ctx.field().one());
    HbElem::from_pbw(p)
}

/// `a . v`.
pub fn verma_act(ctx: &HbContext, lambda: &Weight, a: &HbElem, v: &VermaVector) -> VermaVector {
    let n = ctx.n();
    let nl = n * (n - 1) / 2;
    let diag_start = n + nl;
    let mut out = VermaVector::zero(ctx.field());
    for (m, c) in v.terms() {
        let prod = ctx.mul(a, &to_hb(ctx, m));
        for (pm, pc) in prod.as_pbw().terms() {
            let e = pm.exps();
            // upper e's and y's sit after the diagonal block and kill v_lambda
            if e[diag_start + n..].iter().any(|&k| k > 0) {
                continue;
            }
            let mut coef = pc * c;
            for (k, &d) in e[diag_start..diag_start + n].iter().enumerate() {
                if d > 0 {
                    coef = &coef * &lambda.0[k].pow(d);
                }
            }
            out.add_term(
                VermaMonomial {
                    xexp: e[..n].to_vec(),
                    lexp: e[n..diag_start].to_vec(),
                },
                coef,
            );
        }
    }
    out
}

/// The grading element `delta = diag(n, ..., 1)` and the weights it induces.
#[derive(Debug, Clone)]
pub struct DeltaGrading {
    pub delta: Vec<i64>,
    /// Drop of each `H_-` generator, in `minus_gens` order.
    pub drops: Vec<u32>,
    /// C-weight shift (integer vector) of each `H_-` generator.
    pub shifts: Vec<Vec<i64>>,
}

/// Reads `[h, g] = k g` for a single generator `g`, returning `k`.
fn eigen(ctx: &HbContext, h: &HbElem, g: HbGen) -> Option<Scalar> {
    let br = ctx.commutator(h, &ctx.gen(g));
    let gm = ctx.gen(g);
    let (mono, _) = gm.as_pbw().terms().next()?;
    let k = br.as_pbw().coeff(mono);
    (br == gm.scale(&k)).then_some(k)
}

fn small_int(s: &Scalar) -> i64 {
    let r = match s {
        Scalar::Rat(r) => r.clone(),
        Scalar::Mod { value, p } => {
            // centred representative
            let v = *value as i64;
            let p = *p as i64;
            return if v > p / 2 { v - p } else { v };
        }
    };
    i64::try_from(r.to_integer()).expect("small integer eigenvalue")
}

pub fn delta_grading(ctx: &HbContext) -> Result<DeltaGrading, VermaError> {
    let n = ctx.n();
    let f = ctx.field();
    let delta: Vec<i64> = (0..n).map(|k| (n - k) as i64).collect();
    let mut h = ctx.zero();
    for (k, &d) in delta.iter().enumerate() {
        h = h.add(&ctx.e(k + 1, k + 1).scale(&f.int(d)));
    }
    for g in plus_gens(n) {
        let ev = eigen(ctx, &h, g).ok_or(VermaError::DeltaSign(g))?;
        if small_int(&ev) <= 0 {
            return Err(VermaError::DeltaSign(g));
        }
    }
    let mut drops = Vec::new();
    let mut shifts = Vec::new();
    for g in minus_gens(n) {
        let ev = eigen(ctx, &h, g).ok_or(VermaError::DeltaSign(g))?;
        let k = small_int(&ev);
        if k >= 0 {
            return Err(VermaError::DeltaSign(g));
        }
        drops.push((-k) as u32);
        let shift = (1..=n)
            .map(|c| {
                eigen(ctx, &ctx.e(c, c), g)
                    .map(|s| small_int(&s))
                    .ok_or(VermaError::DeltaSign(g))
            })
            .collect::<Result<Vec<_>, _>>()?;
        shifts.push(shift);
    }
    Ok(DeltaGrading {
        delta,
        drops,
        shifts,
    })
}

/// Basis monomials of `H_- v_lambda` whose delta-drop is exactly `k`.
pub fn depth_basis(ctx: &HbContext, grading: &DeltaGrading, k: u32) -> Vec<VermaMonomial> {
    fn go(drops: &[u32], idx: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if idx == drops.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for e in 0..=left / drops[idx] {
            cur.push(e);
            go(drops, idx + 1, left - e * drops[idx], cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    go(&grading.drops, 0, k, &mut Vec::new(), &mut raw);
    let n = ctx.n();
    raw.into_iter()
        .map(|e| VermaMonomial {
            xexp: e[..n].to_vec(),
            lexp: e[n..].to_vec(),
        })
        .collect()
}

pub fn weight_space_dim(ctx: &HbContext, k: u32) -> Result<usize, VermaError> {
    Ok(depth_basis(ctx, &delta_grading(ctx)?, k).len())
}

/// C-weight shift of a basis monomial relative to `lambda`.
pub fn weight_shift(grading: &DeltaGrading, m: &VermaMonomial) -> Vec<i64> {
    let mut out = vec![0i64; grading.delta.len()];
    for (e, s) in m.xexp.iter().chain(&m.lexp).zip(&grading.shifts) {
        for (o, d) in out.iter_mut().zip(s) {
            *o += *e as i64 * d;
        }
    }
    out
}

/// Whether `a` kills every basis vector of depth `<= depth`.
pub fn annihilates(ctx: &HbContext, lambda: &Weight, a: &HbElem, depth: u32) -> Result<bool, VermaError> {
    let grading = delta_grading(ctx)?;
    for k in 0..=depth {
        for m in depth_basis(ctx, &grading, k) {
            if !verma_act(ctx, lambda, a, &VermaVector::basis(ctx, m)).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `chi_i(lambda)` for every Casimir, checked to act by that scalar to `depth`.
pub fn central_character(ctx: &HbContext, lambda: &Weight, depth: u32) -> Result<Vec<Scalar>, VermaError> {
    let hw = VermaVector::highest(ctx);
    let one = monomial_one(ctx);
    let mut out = Vec::new();
    for cas in ctx.casimirs()? {
        let img = verma_act(ctx, lambda, &cas.t, &hw);
        let chi = img.coeff(&one);
        if img != hw.scale(&chi) {
            return Err(VermaError::NotProportional(cas.i));
        }
        let shifted = cas.t.sub(&ctx.constant(chi.clone()));
        let grading = delta_grading(ctx)?;
        for k in 0..=depth {
            for m in depth_basis(ctx, &grading, k) {
                if !verma_act(ctx, lambda, &shifted, &VermaVector::basis(ctx, m)).is_zero() {
                    return Err(VermaError::NotScalar { i: cas.i, depth: k });
                }
            }
        }
        out.push(chi);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct SingularVector {
    pub depth: u32,
    pub weight_shift: Vec<i64>,
    pub vector: VermaVector,
}

/// A basis of the weight vectors at depths `1..=depth` killed by every `y_j` and
/// every strictly upper `e[i,j]`.
pub fn singular_vectors(ctx: &HbContext, lambda: &Weight, depth: u32) -> Result<Vec<SingularVector>, VermaError> {
    let grading = delta_grading(ctx)?;
    let plus: Vec<HbElem> = plus_gens(ctx.n()).into_iter().map(|g| ctx.gen(g)).collect();
    let f = ctx.field();
    let mut out = Vec::new();
    for k in 1..=depth {
        let mut groups: BTreeMap<Vec<i64>, Vec<VermaMonomial>> = BTreeMap::new();
        for m in depth_basis(ctx, &grading, k) {
            groups.entry(weight_shift(&grading, &m)).or_default().push(m);
        }
        for (shift, basis) in groups {
            let mut rows: BTreeMap<(usize, VermaMonomial), usize> = BTreeMap::new();
            let mut cols = Vec::new();
            for m in &basis {
                let v = VermaVector::basis(ctx, m.clone());
                let mut col = Vec::new();
                for (gi, g) in plus.iter().enumerate() {
                    for (pm, c) in verma_act(ctx, lambda, g, &v).terms() {
                        let next = rows.len();
                        let r = *rows.entry((gi, pm.clone())).or_insert(next);
                        col.push((r, c.clone()));
                    }
                }
                cols.push(col);
            }
            let mut mat = Matrix::zeros(f, rows.len(), basis.len());
            for (j, col) in cols.iter().enumerate() {
                for (r, c) in col {
                    mat.set(*r, j, c.clone());
                }
            }
            for null in mat.nullspace() {
                let mut v = VermaVector::zero(f);
                for (m, c) in basis.iter().zip(null) {
                    v.add_term(m.clone(), c);
                }
                out.push(SingularVector {
                    depth: k,
                    weight_shift: shift.clone(),
                    vector: v,
                });
            }
        }
    }
    Ok(out)
}

/// `count` seeded weights with entries `p/q`, `p` in `[-9, 9]`, `q` in `[1, 4]`.
pub fn random_weights(ctx: &HbContext, count: usize, seed: u64) -> Vec<Weight> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = ctx.field();
    (0..count)
        .map(|_| {
            let lambda = (0..ctx.n())
                .map(|_| {
                    let num = rng.gen_range(-9i64..=9);
                    let den = rng.gen_range(1i64..=4);
                    // a denominator divisible by p falls back to the integer part
                    f.ratio(num, den).unwrap_or_else(|_| f.int(num))
                })
                .collect();
            Weight(lambda)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn ctx(n: usize, m: usize, b: &[i64]) -> HbContext {
        HbContext::with_ints(n, m, b, 0).unwrap()
    }

    fn wt(h: &HbContext, l: &[i64]) -> Weight {
        Weight::new(h, l.iter().map(|&k| Q.int(k)).collect()).unwrap()
    }

    fn xv(h: &HbContext, k: u32) -> VermaVector {
        VermaVector::basis(
            h,
            VermaMonomial {
                xexp: vec![k],
                lexp: vec![],
            },
        )
    }

    #[test]
    fn action_examples() {
        let (b0, l) = (3, 2);
        let h = ctx(1, 1, &[b0, 1]);
        let lam = wt(&h, &[l]);
        let hw = VermaVector::highest(&h);
        assert!(verma_act(&h, &lam, &h.y(1), &hw).is_zero());
        let got = verma_act(&h, &lam, &h.y(1), &xv(&h, 1));
        assert_eq!(got, hw.scale(&Q.int(b0 + 2 * l)));
        let got = verma_act(&h, &lam, &h.e(1, 1), &xv(&h, 1));
        assert_eq!(got, xv(&h, 1).scale(&Q.int(l - 1)));
        assert!(Weight::new(&h, vec![]).is_err());
    }

    #[test]
    fn depth_dimensions_match_enumeration() {
        let h = ctx(1, 1, &[0, 1]);
        for k in 0..6 {
            assert_eq!(weight_space_dim(&h, k).unwrap(), 1);
        }
        let h = ctx(2, 1, &[0, 1]);
        let g = delta_grading(&h).unwrap();
        assert_eq!(g.drops, vec![2, 1, 1]);
        // independent oracle: #{(a, b, c) : 2a + b + c = k}
        for k in 0..6u32 {
            let mut count = 0;
            for a in 0..=k {
                for b in 0..=k {
                    for c in 0..=k {
                        if 2 * a + b + c == k {
                            count += 1;
                        }
                    }
                }
            }
            assert_eq!(weight_space_dim(&h, k).unwrap(), count, "depth {k}");
        }
        assert_eq!(weight_space_dim(&h, 2).unwrap(), 4);
    }

    #[test]
    fn central_character_n1() {
        for b0 in [0i64, 2, -3] {
            let h = ctx(1, 1, &[b0, 1]);
            for l in [-2i64, 0, 1, 5] {
                let chi = central_character(&h, &wt(&h, &[l]), 3).unwrap();
                assert_eq!(chi, vec![Q.int((l + 1) * (l + b0))]);
                let mirror = central_character(&h, &wt(&h, &[-l - 1 - b0]), 0).unwrap();
                assert_eq!(chi, mirror);
            }
        }
    }

    #[test]
    fn singular_vector_examples() {
        let h = ctx(1, 1, &[0, 1]);
        let sv = singular_vectors(&h, &wt(&h, &[0]), 4).unwrap();
        assert_eq!(sv.len(), 1);
        assert_eq!(sv[0].depth, 1);
        // y x^k v = k(b0 + 2 lambda - k + 1) x^(k-1) v: lambda = 1 is singular at depth 3
        let at_one = singular_vectors(&h, &wt(&h, &[1]), 4).unwrap();
        assert_eq!(at_one.iter().map(|s| s.depth).collect::<Vec<_>>(), vec![3]);
        let generic = Weight::new(&h, vec![Q.ratio(1, 3).unwrap()]).unwrap();
        assert!(singular_vectors(&h, &generic, 4).unwrap().is_empty());
        assert!(singular_vectors(&h, &wt(&h, &[0]), 0).unwrap().is_empty());
    }

    #[test]
    fn module_action_n2() {
        let h = ctx(2, 1, &[1, 1]);
        let lam = Weight::new(&h, vec![Q.ratio(1, 2).unwrap(), Q.int(-1)]).unwrap();
        let gens = h.all_gens();
        let grading = delta_grading(&h).unwrap();
        let vs: Vec<VermaVector> = (0..=2)
            .flat_map(|k| depth_basis(&h, &grading, k))
            .map(|m| VermaVector::basis(&h, m))
            .collect();
        for a in gens.iter().step_by(2) {
            for b in gens.iter().step_by(3) {
                let ab = h.mul(a, b);
                for v in &vs {
                    let lhs = verma_act(&h, &lam, a, &verma_act(&h, &lam, b, v));
                    assert_eq!(lhs, verma_act(&h, &lam, &ab, v));
                }
            }
        }
    }
}
