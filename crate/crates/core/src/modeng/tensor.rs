//! Graded modules as a trait, tensor products, evaluation modules and audits.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::commalg::{CofiniteIdeal, QuotientAlgebra};
use crate::hwdata::{n_lambda_alpha, Psi, Weight};
use crate::linalg::{kernel_of_columns, normalize, SparseVec, Subspace};
use crate::rootsys::Gcm;
use crate::{height, Eta, Q};

use super::engine::{Element, Gen, GenKind, MapAlgebra};
use super::module::{build_W, weights_upto, ActResult, BuildOptions, DimRow, ModuleState};
use super::{map_algebra, ModError};

/// A module graded by `η ∈ Q₊` below a highest weight, known up to a height bound.
/// Vectors are sparse in a fixed basis of each weight space; index 0 at `η = 0`
/// is the highest-weight vector.
pub trait GradedModule: Send + Sync {
    fn algebra(&self) -> &Arc<MapAlgebra>;
    fn highest_weight(&self) -> Vec<i64>;
    fn height_bound(&self) -> u32;
    fn dim(&self, eta: &[u32]) -> usize;
    fn act(&self, g: Gen, eta: &[u32], w: &SparseVec) -> Result<ActResult, ModError>;

    fn dims(&self) -> Vec<DimRow> {
        let l = self.algebra().g.rank();
        weights_upto(l, self.height_bound())
            .into_iter()
            .map(|eta| {
                let d = self.dim(&eta);
                DimRow { height: height(&eta), dim: d, ambient: d, eta }
            })
            .collect()
    }

    fn total_dim(&self) -> usize {
        self.dims().iter().map(|r| r.dim).sum()
    }
}

impl GradedModule for ModuleState {
    fn algebra(&self) -> &Arc<MapAlgebra> {
        ModuleState::algebra(self)
    }

    fn highest_weight(&self) -> Vec<i64> {
        self.psi().weight.coroot_values.clone()
    }

    fn height_bound(&self) -> u32 {
        ModuleState::height_bound(self)
    }

    fn dim(&self, eta: &[u32]) -> usize {
        self.dim_at(eta).unwrap_or(0)
    }

    fn act(&self, g: Gen, eta: &[u32], w: &SparseVec) -> Result<ActResult, ModError> {
        ModuleState::act(self, g, eta, w)
    }

    fn dims(&self) -> Vec<DimRow> {
        ModuleState::dims(self)
    }
}

/// Applies a homogeneous element.
pub fn act_element(m: &dyn GradedModule, el: &Element, eta: &[u32], w: &SparseVec) -> Result<ActResult, ModError> {
    let mut target = None;
    let mut acc = Vec::new();
    for (g, c) in el {
        match m.act(*g, eta, w)? {
            ActResult::Zero => {}
            ActResult::Beyond => return Ok(ActResult::Beyond),
            ActResult::Vector(t, v) => {
                acc.extend(v.into_iter().map(|(k, x)| (k, x * c)));
                target = Some(t);
            }
        }
    }
    let acc = normalize(acc);
    Ok(match target {
        Some(t) if !acc.is_empty() => ActResult::Vector(t, acc),
        _ => ActResult::Zero,
    })
}

/// Applies `word[0] ⋯ word[n-1]` (the last element acts first).
pub fn apply_word(m: &dyn GradedModule, word: &[Element], eta: &[u32], w: &SparseVec) -> Result<ActResult, ModError> {
    let mut cur = (eta.to_vec(), w.clone());
    for el in word.iter().rev() {
        match act_element(m, el, &cur.0, &cur.1)? {
            ActResult::Vector(t, v) => cur = (t, v),
            other => return Ok(other),
        }
    }
    Ok(ActResult::Vector(cur.0, cur.1))
}

struct TensorSpace {
    basis: Vec<(Eta, usize, usize)>,
    index: HashMap<(Eta, usize, usize), usize>,
}

/// `M₁ ⊗ M₂` with the coproduct action `g(w₁⊗w₂) = gw₁⊗w₂ + w₁⊗gw₂`.
///
/// The coefficient algebra is `A/(I₁ ∩ I₂)` where `B_k = A/I_k`; each factor sees
/// a generator `x ⊗ b` through the projection `B → B_k`.
pub struct TensorModule {
    alg: Arc<MapAlgebra>,
    factors: [Arc<dyn GradedModule>; 2],
    /// Generator of the tensor algebra ↦ element of each factor's algebra.
    translate: [Vec<Element>; 2],
    h: u32,
    spaces: BTreeMap<Eta, TensorSpace>,
}

impl std::fmt::Debug for TensorModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TensorModule").field("height_bound", &self.h).finish()
    }
}

impl TensorModule {
    pub fn factors(&self) -> &[Arc<dyn GradedModule>; 2] {
        &self.factors
    }

    /// Index of `w₁ ⊗ w₂` for basis vectors `k₁` at `η₁` and `k₂` at `η − η₁`.
    pub fn pair_index(&self, eta: &[u32], eta1: &[u32], k1: usize, k2: usize) -> Option<usize> {
        self.spaces.get(eta)?.index.get(&(eta1.to_vec(), k1, k2)).copied()
    }

    pub fn basis(&self, eta: &[u32]) -> &[(Eta, usize, usize)] {
        self.spaces.get(eta).map(|s| s.basis.as_slice()).unwrap_or(&[])
    }

    /// Generator of the tensor algebra as an element of factor `slot`.
    pub fn factor_element(&self, slot: usize, g: Gen) -> &Element {
        &self.translate[slot][g as usize]
    }
}

impl GradedModule for TensorModule {
    fn algebra(&self) -> &Arc<MapAlgebra> {
        &self.alg
    }

    fn highest_weight(&self) -> Vec<i64> {
        let a = self.factors[0].highest_weight();
        let b = self.factors[1].highest_weight();
        a.iter().zip(&b).map(|(x, y)| x + y).collect()
    }

    fn height_bound(&self) -> u32 {
        self.h
    }

    fn dim(&self, eta: &[u32]) -> usize {
        self.spaces.get(eta).map(|s| s.basis.len()).unwrap_or(0)
    }

    fn act(&self, g: Gen, eta: &[u32], w: &SparseVec) -> Result<ActResult, ModError> {
        let Some(target) = self.alg.shift(g, eta) else {
            return Ok(ActResult::Zero);
        };
        if height(&target) > self.h {
            return Ok(ActResult::Beyond);
        }
        let src = &self.spaces[eta];
        let dst = &self.spaces[&target];
        let mut acc = Vec::new();
        for (idx, c) in w {
            let (e1, k1, k2) = &src.basis[*idx];
            let e2: Eta = eta.iter().zip(e1).map(|(a, b)| a - b).collect();
            match act_element(self.factors[0].as_ref(), &self.translate[0][g as usize], e1, &vec![(*k1, Q::one())])? {
                ActResult::Vector(t1, v) => {
                    for (k, x) in v {
                        acc.push((dst.index[&(t1.clone(), k, *k2)], x * c));
                    }
                }
                ActResult::Beyond => return Ok(ActResult::Beyond),
                ActResult::Zero => {}
            }
            match act_element(self.factors[1].as_ref(), &self.translate[1][g as usize], &e2, &vec![(*k2, Q::one())])? {
                ActResult::Vector(_, v) => {
                    for (k, x) in v {
                        acc.push((dst.index[&(e1.clone(), *k1, k)], x * c));
                    }
                }
                ActResult::Beyond => return Ok(ActResult::Beyond),
                ActResult::Zero => {}
            }
        }
        let acc = normalize(acc);
        Ok(if acc.is_empty() { ActResult::Zero } else { ActResult::Vector(target, acc) })
    }
}

/// Forms `M₁ ⊗ M₂`. Both factors must be modules for the same `g` over
/// quotients of the same polynomial ring.
pub fn tensor_module(m1: Arc<dyn GradedModule>, m2: Arc<dyn GradedModule>) -> Result<TensorModule, ModError> {
    let a1 = m1.algebra().clone();
    let a2 = m2.algebra().clone();
    if !a1.same_lie_algebra(&a2) {
        return Err(ModError::AlgebraMismatch("factors are modules for different Lie algebras".into()));
    }
    if a1.b.nvars() != a2.b.nvars() {
        return Err(ModError::AlgebraMismatch("coefficient algebras have different numbers of variables".into()));
    }
    let i1 = a1.b.ideal();
    let i2 = a2.b.ideal();
    let alg = if i1 == i2 {
        a1.clone()
    } else {
        let it = i1.intersect(i2)?;
        Arc::new(MapAlgebra::new(a1.g.clone(), Arc::new(QuotientAlgebra::new(&it)?)))
    };
    let mut translate: [Vec<Element>; 2] = [Vec::new(), Vec::new()];
    for (slot, fa) in [&a1, &a2].into_iter().enumerate() {
        let proj: Vec<SparseVec> = if Arc::ptr_eq(fa, &alg) {
            (0..alg.dim_b()).map(|j| vec![(j, Q::one())]).collect()
        } else {
            alg.b.basis().iter().map(|p| fa.b.coords(p)).collect::<Result<_, _>>()?
        };
        translate[slot] = (0..alg.num_gens() as Gen)
            .map(|g| {
                let (x, j) = alg.split(g);
                fa.element(x, &proj[j])
            })
            .collect();
    }
    let h = m1.height_bound().min(m2.height_bound());
    let l = alg.g.rank();
    let mut spaces = BTreeMap::new();
    for eta in weights_upto(l, h) {
        let mut basis = Vec::new();
        for e1 in weights_upto(l, height(&eta)) {
            if !crate::rootsys::eta_leq(&e1, &eta) {
                continue;
            }
            let e2: Eta = eta.iter().zip(&e1).map(|(a, b)| a - b).collect();
            let (d1, d2) = (m1.dim(&e1), m2.dim(&e2));
            for k1 in 0..d1 {
                for k2 in 0..d2 {
                    basis.push((e1.clone(), k1, k2));
                }
            }
        }
        let index = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        spaces.insert(eta, TensorSpace { basis, index });
    }
    Ok(TensorModule { alg, factors: [m1, m2], translate, h, spaces })
}

/// `⊗_k V(λ_k)` with `x ⊗ a` acting by `a(p_k)·x` in slot `k`; each `V(λ_k)` is
/// built as a Weyl module over `A/𝔪_{p_k} = ℚ`.
pub fn evaluation_module(gcm: &Gcm, psi: &Psi, h: u32) -> Result<Arc<dyn GradedModule>, ModError> {
    let pts = &psi.evaluation_data;
    for (a, p) in pts.iter().enumerate() {
        if pts[..a].iter().any(|q| q.point == p.point) {
            let parts: Vec<String> = p.point.iter().map(|x| x.to_string()).collect();
            return Err(ModError::DuplicatePoint(format!("({})", parts.join(","))));
        }
    }
    if pts.is_empty() {
        return Err(ModError::IncompatibleCoefficients("evaluation module needs at least one point".into()));
    }
    let mut out: Option<Arc<dyn GradedModule>> = None;
    for e in pts {
        let m = CofiniteIdeal::point_power(e.point.clone(), 1);
        let alg = map_algebra(gcm, &m)?;
        let single = Psi::single(e.point.clone(), e.weight.clone(), m.clone());
        let w: Arc<dyn GradedModule> = Arc::new(build_W(alg, &single, &m, h, &BuildOptions::default())?);
        out = Some(match out {
            None => w,
            Some(acc) => Arc::new(tensor_module(acc, w)?),
        });
    }
    Ok(out.unwrap())
}

/// Basis of the vectors at `η` killed by every raising generator `e_i ⊗ b`.
pub fn singular_vectors(m: &dyn GradedModule, eta: &[u32]) -> Result<Vec<SparseVec>, ModError> {
    let alg = m.algebra().clone();
    let n = m.dim(eta);
    let mut columns: Vec<SparseVec> = vec![Vec::new(); n];
    let mut offset = 0;
    for i in 0..alg.g.rank() {
        if eta[i] == 0 {
            continue;
        }
        let mut t = eta.to_vec();
        t[i] -= 1;
        let rows = m.dim(&t);
        for j in 0..alg.dim_b() {
            let g = alg.gen(alg.g.e(i), j);
            for (k, col) in columns.iter_mut().enumerate() {
                if let ActResult::Vector(_, v) = m.act(g, eta, &vec![(k, Q::one())])? {
                    col.extend(v.into_iter().map(|(r, x)| (r + offset, x)));
                }
            }
            offset += rows;
        }
    }
    Ok(kernel_of_columns(&columns, offset))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanRow {
    pub eta: Eta,
    pub height: u32,
    pub span: usize,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclicityReport {
    pub highest_vector: bool,
    pub rows: Vec<SpanRow>,
    pub pass: bool,
}

/// Span of `U(g̃)·v` at each weight up to the height bound, compared with the
/// full weight spaces. `v` must be a highest-weight vector, which is checked.
pub fn cyclic_span(m: &dyn GradedModule) -> Result<CyclicityReport, ModError> {
    let alg = m.algebra().clone();
    let l = alg.g.rank();
    let zero = vec![0; l];
    let mut highest = m.dim(&zero) == 1;
    if highest {
        let v = vec![(0, Q::one())];
        for g in 0..alg.num_gens() as Gen {
            match (alg.kind(g), m.act(g, &zero, &v)?) {
                (GenKind::Raising(_), ActResult::Zero) => {}
                (GenKind::Raising(_), _) => highest = false,
                (GenKind::Cartan(_), ActResult::Vector(t, w)) if t == zero => {
                    highest &= w.iter().all(|(k, _)| *k == 0);
                }
                (GenKind::Cartan(_), ActResult::Zero) | (GenKind::Lowering(_), _) => {}
                (GenKind::Cartan(_), _) => highest = false,
            }
        }
    }
    let mut spans: BTreeMap<Eta, Subspace> = BTreeMap::new();
    let mut rows = Vec::new();
    for eta in weights_upto(l, m.height_bound()) {
        let n = m.dim(&eta);
        let mut s = Subspace::new(n);
        if height(&eta) == 0 {
            if n > 0 {
                s.insert(&vec![(0, Q::one())]);
            }
        } else {
            'outer: for i in 0..l {
                if eta[i] == 0 {
                    continue;
                }
                let mut from = eta.clone();
                from[i] -= 1;
                let src: Vec<SparseVec> = spans[&from].rows().to_vec();
                for j in 0..alg.dim_b() {
                    let g = alg.gen(alg.g.f(i), j);
                    for r in &src {
                        if s.is_full() {
                            break 'outer;
                        }
                        if let ActResult::Vector(_, w) = m.act(g, &from, r)? {
                            s.insert(&w);
                        }
                    }
                }
            }
        }
        rows.push(SpanRow { height: height(&eta), span: s.rank(), dim: n, eta: eta.clone() });
        spans.insert(eta, s);
    }
    let pass = highest && rows.iter().all(|r| r.span == r.dim);
    Ok(CyclicityReport { highest_vector: highest, rows, pass })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationAudit {
    pub checks: Vec<RelationCheck>,
    pub pass: bool,
}

/// Checks the defining relations of `W(ψ, I)` on the highest vector of `m`:
/// `Ñ⁺v = 0`, `hv = ψ(h)v`, `(X_{−β} ⊗ I^{N_{λ,β}})v = 0` and
/// `(X_{−α_i} ⊗ 1)^{λ(α_i^∨)+1} v = 0`.
pub fn weyl_relation_audit(m: &dyn GradedModule, psi: &Psi, ideal: &CofiniteIdeal) -> Result<RelationAudit, ModError> {
    let alg = m.algebra().clone();
    let l = alg.g.rank();
    let zero = vec![0; l];
    let v = vec![(0, Q::one())];
    let lambda = Weight::new(m.highest_weight());
    let mut checks = Vec::new();
    let mut push = |relation: String, pass: bool| checks.push(RelationCheck { relation, pass });

    let raising_ok = (0..alg.num_gens() as Gen)
        .filter(|&g| matches!(alg.kind(g), GenKind::Raising(_)))
        .map(|g| m.act(g, &zero, &v))
        .collect::<Result<Vec<_>, _>>()?
        .iter()
        .all(|r| *r == ActResult::Zero);
    push("raising currents kill v".into(), raising_ok);

    let mut cartan_ok = lambda.coroot_values == psi.weight.coroot_values;
    for i in 0..l {
        for j in 0..alg.dim_b() {
            let mut val = Q::zero();
            for e in &psi.evaluation_data {
                val += Q::from_int(e.weight.coroot_values[i]) * alg.b.eval_basis(j, &e.point);
            }
            let got = m.act(alg.gen(alg.g.cartan(i), j), &zero, &v)?;
            let want = if val.is_zero() { ActResult::Zero } else { ActResult::Vector(zero.clone(), vec![(0, val)]) };
            cartan_ok &= got == want;
        }
    }
    push("Cartan currents act by ψ".into(), cartan_ok);

    for (r, root) in alg.g.table.roots.iter().enumerate() {
        let n = n_lambda_alpha(&lambda, root)?;
        let mut ok = true;
        for c in alg.b.ideal_image(&ideal.power(n)?)? {
            let el = alg.element(alg.g.neg(r), &c);
            ok &= act_element(m, &el, &zero, &v)? == ActResult::Zero;
        }
        push(format!("X_-{:?} ⊗ I^{n} kills v", root.coords), ok);
    }

    for i in 0..l {
        let p = lambda.coroot_values[i] as usize + 1;
        let word = vec![alg.with_unit(alg.g.f(i)); p];
        let res = apply_word(m, &word, &zero, &v)?;
        push(format!("f_{}^{} kills v", i + 1, p), res == ActResult::Zero);
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(RelationAudit { checks, pass })
}
