//! Explicit highest-weight modules as quotients of the induced module `M(ψ)`.
//!
//! Weight spaces are indexed by `η ∈ Q₊` (the weight is `λ − η`). For each
//! `η` we keep the sorted PBW words of weight `η` and the relation submodule
//! in reduced echelon form; free columns index a basis of the quotient.
//!
//! The submodule generated by relation vectors `R` is `U(Ñ⁻)·U(b̃⁺)·R`. Phase 1
//! closes `R` under simple raising and Cartan currents; phase 2 applies simple
//! lowering letters height by height.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::commalg::{CofiniteIdeal, Presentation};
use crate::hwdata::{standard_sequence, IdealSequence, Psi};
use crate::linalg::{normalize, SparseVec, Subspace};
use crate::{height, Eta, Q};

use super::engine::{Element, Gen, GenKind, MapAlgebra, Mono, PbwEngine, PbwOrder};
use super::ModError;

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub order: PbwOrder,
    /// Cap on the number of PBW words in one weight space.
    pub max_dim: Option<usize>,
    /// Skip the integrability audit of `build_W`.
    pub skip_audit: bool,
}

/// Environment variable holding the default cap on PBW words per weight space.
pub const MAX_DIM_ENV: &str = "WEYLFORGE_MAX_DIM";

impl Default for BuildOptions {
    /// Ascending order, audit on, cap taken from `WEYLFORGE_MAX_DIM` if set.
    fn default() -> Self {
        let max_dim = std::env::var(MAX_DIM_ENV).ok().and_then(|v| v.trim().parse().ok());
        BuildOptions { order: PbwOrder::default(), max_dim, skip_audit: false }
    }
}

#[derive(Debug)]
struct Space {
    monos: Vec<Mono>,
    index: HashMap<Mono, usize>,
    /// Relation submodule; `None` until phase 2 has run at this weight.
    sub: Option<Subspace>,
    free_pos: HashMap<usize, usize>,
    free: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ModuleKind {
    Induced,
    Truncated,
    Weyl,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub pass: bool,
    pub vectors_checked: usize,
    pub max_height_reached: u32,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimRow {
    pub eta: Eta,
    pub height: u32,
    pub dim: usize,
    pub ambient: usize,
}

/// Vector of the module in quotient coordinates or its image under a generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActResult {
    Zero,
    Vector(Eta, SparseVec),
    /// The target weight lies above the height bound.
    Beyond,
}

pub struct ModuleState {
    alg: Arc<MapAlgebra>,
    psi: Psi,
    seq: Option<Vec<CofiniteIdeal>>,
    kind: ModuleKind,
    height_bound: u32,
    opts: BuildOptions,
    engine: Mutex<PbwEngine>,
    spaces: BTreeMap<Eta, Space>,
    phase1: BTreeMap<Eta, Subspace>,
    relation_count: usize,
    audit: Option<AuditReport>,
}

impl std::fmt::Debug for ModuleState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModuleState")
            .field("kind", &self.kind)
            .field("height_bound", &self.height_bound)
            .field("weight", &self.psi.weight)
            .finish()
    }
}

/// All `η ∈ Q₊` of rank `l` with height `≤ h`, sorted by height then lex.
pub fn weights_upto(l: usize, h: u32) -> Vec<Eta> {
    let mut out = Vec::new();
    fn rec(out: &mut Vec<Eta>, cur: &mut Eta, pos: usize, left: u32) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[pos] = v;
            rec(out, cur, pos + 1, left - v);
        }
        cur[pos] = 0;
    }
    rec(&mut out, &mut vec![0; l], 0, h);
    out.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| a.cmp(b)));
    out
}

fn psi_values(alg: &MapAlgebra, psi: &Psi) -> Result<Vec<Q>, ModError> {
    let b = &alg.b;
    if psi.rank() != alg.g.rank() {
        return Err(ModError::IncompatibleCoefficients(format!(
            "ψ has rank {}, the Lie algebra has rank {}",
            psi.rank(),
            alg.g.rank()
        )));
    }
    for e in &psi.evaluation_data {
        if e.point.len() != b.nvars() {
            return Err(ModError::IncompatibleCoefficients("evaluation point has the wrong arity".into()));
        }
        let vanishes = match b.ideal().presentation() {
            Presentation::PointSupported(m) => m.contains_key(&e.point),
            Presentation::Generated { generators, .. } => generators.iter().all(|g| g.eval(&e.point).is_zero()),
        };
        if !vanishes && e.weight.coroot_values.iter().any(|&c| c != 0) {
            return Err(ModError::IncompatibleCoefficients(
                "ψ does not factor through B: an evaluation point lies off the support of the coefficient ideal"
                    .into(),
            ));
        }
    }
    let mut vals = vec![Q::zero(); alg.num_gens()];
    for i in 0..alg.g.rank() {
        for j in 0..alg.dim_b() {
            let mut s = Q::zero();
            for e in &psi.evaluation_data {
                let c = e.weight.coroot_values[i];
                if c != 0 {
                    s += Q::from_int(c) * b.eval_basis(j, &e.point);
                }
            }
            vals[alg.gen(alg.g.cartan(i), j) as usize] = s;
        }
    }
    Ok(vals)
}

impl ModuleState {
    fn empty(
        alg: Arc<MapAlgebra>,
        psi: &Psi,
        kind: ModuleKind,
        h: u32,
        opts: &BuildOptions,
    ) -> Result<ModuleState, ModError> {
        let vals = psi_values(&alg, psi)?;
        let engine = PbwEngine::new(alg.clone(), vals, opts.order);
        Ok(ModuleState {
            alg,
            psi: psi.clone(),
            seq: None,
            kind,
            height_bound: h,
            opts: opts.clone(),
            engine: Mutex::new(engine),
            spaces: BTreeMap::new(),
            phase1: BTreeMap::new(),
            relation_count: 0,
            audit: None,
        })
    }

    pub fn algebra(&self) -> &Arc<MapAlgebra> {
        &self.alg
    }

    pub fn psi(&self) -> &Psi {
        &self.psi
    }

    pub fn kind(&self) -> &ModuleKind {
        &self.kind
    }

    pub fn height_bound(&self) -> u32 {
        self.height_bound
    }

    pub fn relation_count(&self) -> usize {
        self.relation_count
    }

    pub fn audit(&self) -> Option<&AuditReport> {
        self.audit.as_ref()
    }

    pub fn order(&self) -> PbwOrder {
        self.opts.order
    }

    /// Ideal entries `I_β` indexed like the roots of `g`, when built with a sequence.
    pub fn sequence(&self) -> Option<&[CofiniteIdeal]> {
        self.seq.as_deref()
    }

    fn ensure_ambient(&mut self, eta: &[u32]) -> Result<(), ModError> {
        if self.spaces.contains_key(eta) {
            return Ok(());
        }
        let monos = self.engine.get_mut().unwrap().monomials(eta);
        if let Some(cap) = self.opts.max_dim {
            if monos.len() > cap {
                return Err(ModError::ResourceCap(format!(
                    "weight space {eta:?} has {} PBW words, above the cap {cap}",
                    monos.len()
                )));
            }
        }
        let index = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        self.spaces.insert(
            eta.to_vec(),
            Space { monos, index, sub: None, free_pos: HashMap::new(), free: Vec::new() },
        );
        Ok(())
    }

    /// Applies a generator to an ambient vector (no reduction).
    fn act_ambient(&mut self, g: Gen, eta: &[u32], v: &SparseVec) -> Result<Option<(Eta, SparseVec)>, ModError> {
        let Some(target) = self.alg.shift(g, eta) else {
            return Ok(None);
        };
        self.ensure_ambient(eta)?;
        self.ensure_ambient(&target)?;
        let monos: Vec<Mono> = {
            let sp = &self.spaces[eta];
            v.iter().map(|(c, _)| sp.monos[*c].clone()).collect()
        };
        let engine = self.engine.get_mut().unwrap();
        let tsp = &self.spaces[&target];
        let mut acc = Vec::new();
        for ((_, x), m) in v.iter().zip(&monos) {
            for (w, c) in engine.act_mono(g, m).iter() {
                acc.push((tsp.index[w], x * c));
            }
        }
        Ok(Some((target, normalize(acc))))
    }

    fn act_element_ambient(
        &mut self,
        el: &Element,
        eta: &[u32],
        v: &SparseVec,
    ) -> Result<Option<(Eta, SparseVec)>, ModError> {
        let mut target = None;
        let mut acc = Vec::new();
        for (g, c) in el {
            if let Some((t, w)) = self.act_ambient(*g, eta, v)? {
                acc.extend(w.into_iter().map(|(k, x)| (k, x * c)));
                target = Some(t);
            }
        }
        Ok(target.map(|t| (t, normalize(acc))))
    }

    /// Adds relation vectors and closes them under raising and Cartan currents.
    fn phase1(&mut self, relations: Vec<(Eta, SparseVec)>) -> Result<(), ModError> {
        self.relation_count += relations.len();
        let mut work: VecDeque<(Eta, SparseVec)> = VecDeque::new();
        for (eta, v) in relations {
            self.ensure_ambient(&eta)?;
            let n = self.spaces[&eta].monos.len();
            if self.phase1.entry(eta.clone()).or_insert_with(|| Subspace::new(n)).insert(&v) {
                work.push_back((eta, v));
            }
        }
        let alg = self.alg.clone();
        let l = alg.g.rank();
        let d = alg.dim_b();
        let mut gens = Vec::new();
        for i in 0..l {
            for j in 0..d {
                gens.push(alg.gen(alg.g.e(i), j));
                gens.push(alg.gen(alg.g.cartan(i), j));
            }
        }
        while let Some((eta, v)) = work.pop_front() {
            for &g in &gens {
                let Some((t, w)) = self.act_ambient(g, &eta, &v)? else { continue };
                if w.is_empty() {
                    continue;
                }
                let n = self.spaces[&t].monos.len();
                if self.phase1.entry(t.clone()).or_insert_with(|| Subspace::new(n)).insert(&w) {
                    work.push_back((t, w));
                }
            }
        }
        Ok(())
    }

    /// Runs phase 2 at `eta` (and recursively below it).
    pub fn ensure_weight(&mut self, eta: &[u32]) -> Result<(), ModError> {
        self.ensure_ambient(eta)?;
        if self.spaces[eta].sub.is_some() {
            return Ok(());
        }
        let alg = self.alg.clone();
        let l = alg.g.rank();
        let mut lower = Vec::new();
        for i in 0..l {
            if eta[i] > 0 {
                let mut e = eta.to_vec();
                e[i] -= 1;
                self.ensure_weight(&e)?;
                lower.push((i, e));
            }
        }
        let n = self.spaces[eta].monos.len();
        let mut sub = self.phase1.get(eta).cloned().unwrap_or_else(|| Subspace::new(n));
        'outer: for (i, e) in lower {
            let rows: Vec<SparseVec> = self.spaces[&e].sub.as_ref().unwrap().rows().to_vec();
            for j in 0..alg.dim_b() {
                let g = alg.gen(alg.g.f(i), j);
                for r in &rows {
                    if sub.is_full() {
                        break 'outer;
                    }
                    if let Some((_, w)) = self.act_ambient(g, &e, r)? {
                        sub.insert(&w);
                    }
                }
            }
        }
        let free = sub.free_columns();
        let sp = self.spaces.get_mut(eta).unwrap();
        sp.free_pos = free.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        sp.free = free;
        sp.sub = Some(sub);
        Ok(())
    }

    fn finish(&mut self) -> Result<(), ModError> {
        for eta in weights_upto(self.alg.g.rank(), self.height_bound) {
            self.ensure_weight(&eta)?;
        }
        Ok(())
    }

    /// Quotient dimension at `η`, or `None` if not computed.
    pub fn dim_at(&self, eta: &[u32]) -> Option<usize> {
        self.spaces.get(eta).and_then(|s| s.sub.as_ref().map(|_| s.free.len()))
    }

    pub fn ambient_dim(&self, eta: &[u32]) -> Option<usize> {
        self.spaces.get(eta).map(|s| s.monos.len())
    }

    /// Dimension table for heights `≤ H`.
    pub fn dims(&self) -> Vec<DimRow> {
        weights_upto(self.alg.g.rank(), self.height_bound)
            .into_iter()
            .map(|eta| DimRow {
                height: height(&eta),
                dim: self.dim_at(&eta).unwrap_or(0),
                ambient: self.ambient_dim(&eta).unwrap_or(0),
                eta,
            })
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims().iter().map(|r| r.dim).sum()
    }

    pub fn monomials(&self, eta: &[u32]) -> Option<&[Mono]> {
        self.spaces.get(eta).map(|s| s.monos.as_slice())
    }

    /// PBW word of the `k`-th quotient basis vector at `η`.
    pub fn basis_word(&self, eta: &[u32], k: usize) -> Option<&Mono> {
        let sp = self.spaces.get(eta)?;
        sp.free.get(k).map(|&c| &sp.monos[c])
    }

    /// Ambient coordinates of a PBW word at `η`.
    pub fn word_vector(&mut self, eta: &[u32], word: &[u16]) -> Result<SparseVec, ModError> {
        self.ensure_ambient(eta)?;
        Ok(vec![(self.spaces[eta].index[word], Q::one())])
    }

    /// The highest-weight vector `v` as an ambient vector at `η = 0`.
    pub fn vacuum(&self) -> (Eta, SparseVec) {
        (vec![0; self.alg.g.rank()], vec![(0, Q::one())])
    }

    /// Whether an ambient vector lies in the relation submodule.
    pub fn in_closure(&mut self, eta: &[u32], v: &SparseVec) -> Result<bool, ModError> {
        self.ensure_weight(eta)?;
        Ok(self.spaces[eta].sub.as_ref().unwrap().contains(v))
    }

    /// Normal form of an ambient vector: its quotient coordinates.
    pub fn normal_form(&mut self, eta: &[u32], v: &SparseVec) -> Result<SparseVec, ModError> {
        self.ensure_weight(eta)?;
        Ok(self.reduce_to_quotient(eta, v))
    }

    fn reduce_to_quotient(&self, eta: &[u32], v: &SparseVec) -> SparseVec {
        let sp = &self.spaces[eta];
        sp.sub.as_ref().unwrap().reduce(v).into_iter().map(|(c, x)| (sp.free_pos[&c], x)).collect()
    }

    fn lift(&self, eta: &[u32], w: &SparseVec) -> SparseVec {
        let sp = &self.spaces[eta];
        w.iter().map(|(k, x)| (sp.free[*k], x.clone())).collect()
    }

    /// Applies a word of elements right to left (`word[last]` acts first) to an
    /// ambient vector, extending the computed weights as needed.
    pub fn apply_word(
        &mut self,
        word: &[Element],
        start: (Eta, SparseVec),
    ) -> Result<Option<(Eta, SparseVec)>, ModError> {
        let (mut eta, mut v) = start;
        for el in word.iter().rev() {
            match self.act_element_ambient(el, &eta, &v)? {
                Some((t, w)) => {
                    eta = t;
                    v = w;
                }
                None => return Ok(None),
            }
        }
        Ok(Some((eta, v)))
    }

    /// Action on quotient coordinates within the height bound.
    pub fn act(&self, g: Gen, eta: &[u32], w: &SparseVec) -> Result<ActResult, ModError> {
        let Some(target) = self.alg.shift(g, eta) else {
            return Ok(ActResult::Zero);
        };
        if height(&target) > self.height_bound || self.dim_at(&target).is_none() {
            return Ok(ActResult::Beyond);
        }
        let v = self.lift(eta, w);
        let sp = &self.spaces[eta];
        let tsp = &self.spaces[&target];
        let mut engine = self.engine.lock().unwrap();
        let mut acc = Vec::new();
        for (c, x) in &v {
            for (m, y) in engine.act_mono(g, &sp.monos[*c]).iter() {
                acc.push((tsp.index[m], x * y));
            }
        }
        drop(engine);
        let r = self.reduce_to_quotient(&target, &normalize(acc));
        Ok(if r.is_empty() { ActResult::Zero } else { ActResult::Vector(target, r) })
    }

    /// Like [`ModuleState::act`] but reports results above `H` as an error.
    pub fn act_checked(&self, g: Gen, eta: &[u32], w: &SparseVec) -> Result<ActResult, ModError> {
        match self.act(g, eta, w)? {
            ActResult::Beyond => Err(ModError::WeightOverflow { eta: eta.to_vec(), bound: self.height_bound }),
            r => Ok(r),
        }
    }

    /// Grows the height bound to `h` and computes the new weight spaces.
    pub fn extend_to(&mut self, h: u32) -> Result<(), ModError> {
        if h > self.height_bound {
            self.height_bound = h;
            self.finish()?;
        }
        Ok(())
    }

    pub fn engine_memo_len(&self) -> usize {
        self.engine.lock().unwrap().memo_len()
    }

    fn run_audit(&mut self) -> Result<AuditReport, ModError> {
        let alg = self.alg.clone();
        let gcm = alg.g.gcm().clone();
        let l = gcm.rank();
        let lambda = self.psi.weight.coroot_values.clone();
        let mut checked = 0;
        let mut max_h = self.height_bound;
        for eta in weights_upto(l, self.height_bound) {
            let dim = self.dim_at(&eta).unwrap_or(0);
            if dim == 0 {
                continue;
            }
            let signed: Vec<i64> = eta.iter().map(|&x| x as i64).collect();
            for i in 0..l {
                let c = lambda[i] - gcm.pair_coroot(&signed, i);
                let m = c + eta[i] as i64 + 1;
                if m <= 0 {
                    return Ok(AuditReport {
                        pass: false,
                        vectors_checked: checked,
                        max_height_reached: max_h,
                        failure: Some(format!("weight space {eta:?} is nonzero but λ−η is not a weight of an integrable module")),
                    });
                }
                let f = alg.with_unit(alg.g.f(i));
                for k in 0..dim {
                    let v = self.lift(&eta, &vec![(k, Q::one())]);
                    let word = vec![f.clone(); m as usize];
                    let Some((t, w)) = self.apply_word(&word, (eta.clone(), v))? else { continue };
                    max_h = max_h.max(height(&t));
                    checked += 1;
                    if !self.in_closure(&t, &w)? {
                        return Ok(AuditReport {
                            pass: false,
                            vectors_checked: checked,
                            max_height_reached: max_h,
                            failure: Some(format!("f_{}^{} does not kill basis vector {k} at {eta:?}", i + 1, m)),
                        });
                    }
                }
            }
        }
        Ok(AuditReport { pass: true, vectors_checked: checked, max_height_reached: max_h, failure: None })
    }
}

/// Relation vectors `(X_{−β} ⊗ a) v` for `a` in the image of `I_β` in `B`.
fn sequence_relations(st: &mut ModuleState, entries: &[CofiniteIdeal]) -> Result<Vec<(Eta, SparseVec)>, ModError> {
    let alg = st.alg.clone();
    let mut rels = Vec::new();
    for (r, ideal) in entries.iter().enumerate() {
        let x = alg.g.neg(r);
        for a in alg.b.ideal_image(ideal)? {
            let el = alg.element(x, &a);
            let (eta0, v0) = st.vacuum();
            if let Some((t, w)) = st.act_element_ambient(&el, &eta0, &v0)? {
                if !w.is_empty() {
                    rels.push((t, w));
                }
            }
        }
    }
    Ok(rels)
}

fn align_sequence(alg: &MapAlgebra, seq: &IdealSequence) -> Result<Vec<CofiniteIdeal>, ModError> {
    if seq.table.gcm != *alg.g.gcm() {
        return Err(ModError::AlgebraMismatch("ideal sequence over a different root system".into()));
    }
    let b_ideal = alg.b.ideal();
    alg.g
        .table
        .roots
        .iter()
        .map(|r| {
            let e = seq.entry(&r.coords).ok_or_else(|| {
                ModError::IncompatibleCoefficients(format!("sequence table does not list the root {:?}", r.coords))
            })?;
            if !b_ideal.contained_in(e)? {
                return Err(ModError::IncompatibleCoefficients(format!(
                    "coefficient ideal {b_ideal} is not contained in I_{:?} = {e}",
                    r.coords
                )));
            }
            Ok(e.clone())
        })
        .collect()
}

/// `M(ψ, {I_α})`, or `M(ψ)` over `g ⊗ B` when `seq` is `None`.
#[allow(non_snake_case)]
pub fn build_M(
    alg: Arc<MapAlgebra>,
    psi: &Psi,
    seq: Option<&IdealSequence>,
    h: u32,
    opts: &BuildOptions,
) -> Result<ModuleState, ModError> {
    let kind = if seq.is_some() { ModuleKind::Truncated } else { ModuleKind::Induced };
    let mut st = ModuleState::empty(alg.clone(), psi, kind, h, opts)?;
    if let Some(seq) = seq {
        let entries = align_sequence(&alg, seq)?;
        let rels = sequence_relations(&mut st, &entries)?;
        st.seq = Some(entries);
        st.phase1(rels)?;
    }
    st.finish()?;
    Ok(st)
}

/// Builds `M(ψ, {I_α})` from explicitly supplied entries, bypassing sequence
/// validation. Used for negative controls.
#[allow(non_snake_case)]
pub fn build_M_with_entries(
    alg: Arc<MapAlgebra>,
    psi: &Psi,
    entries: Vec<CofiniteIdeal>,
    h: u32,
    opts: &BuildOptions,
) -> Result<ModuleState, ModError> {
    let mut st = ModuleState::empty(alg, psi, ModuleKind::Truncated, h, opts)?;
    let rels = sequence_relations(&mut st, &entries)?;
    st.seq = Some(entries);
    st.phase1(rels)?;
    st.finish()?;
    Ok(st)
}

/// `W(ψ, I)`: the standard sequence relations plus `(X_{−α_i} ⊗ 1)^{λ(α_i^∨)+1} v`.
#[allow(non_snake_case)]
pub fn build_W(
    alg: Arc<MapAlgebra>,
    psi: &Psi,
    ideal: &CofiniteIdeal,
    h: u32,
    opts: &BuildOptions,
) -> Result<ModuleState, ModError> {
    psi.weight.ensure_dominant()?;
    let seq = standard_sequence(&psi.weight, ideal, alg.g.table.clone())?;
    let entries = align_sequence(&alg, &seq)?;
    let mut st = ModuleState::empty(alg.clone(), psi, ModuleKind::Weyl, h, opts)?;
    let mut rels = sequence_relations(&mut st, &entries)?;
    for i in 0..alg.g.rank() {
        let n = psi.weight.coroot_values[i] as usize + 1;
        let f = alg.with_unit(alg.g.f(i));
        if let Some((t, w)) = st.apply_word(&vec![f; n], st.vacuum())? {
            if !w.is_empty() {
                rels.push((t, w));
            }
        }
    }
    st.seq = Some(entries);
    st.phase1(rels)?;
    st.finish()?;
    if !opts.skip_audit {
        let report = st.run_audit()?;
        let ok = report.pass;
        let msg = report.failure.clone();
        st.audit = Some(report);
        if !ok {
            return Err(ModError::IntegrabilityAuditFailed(msg.unwrap_or_default()));
        }
    }
    Ok(st)
}

/// Raising, Cartan and lowering generator of a kind, for convenience in callers.
pub fn gens_of_kind(alg: &MapAlgebra, pick: impl Fn(GenKind) -> bool) -> Vec<Gen> {
    (0..alg.num_gens() as Gen).filter(|&g| pick(alg.kind(g))).collect()
}

/// Checks `X_{−β} I_β^{n+1} X_{−γ₁}a₁ ⋯ X_{−γₙ}aₙ v = 0` in a module built with a sequence,
/// for every basis element of the image of `I_β^{n+1}` in `B`.
pub fn verify_lemma_l1(
    st: &mut ModuleState,
    beta: &[u32],
    gammas: &[Eta],
    coeffs: &[SparseVec],
) -> Result<bool, ModError> {
    if gammas.len() != coeffs.len() {
        return Err(ModError::OrderViolation("one coefficient per γ is required".into()));
    }
    let alg = st.alg.clone();
    let table = alg.g.table.clone();
    let rb = table
        .index_of(beta)
        .ok_or_else(|| ModError::OrderViolation(format!("{beta:?} is not a positive root")))?;
    let mut word = Vec::with_capacity(gammas.len() + 1);
    word.push(Vec::new());
    for (g, a) in gammas.iter().zip(coeffs) {
        if !crate::rootsys::eta_leq(g, beta) {
            return Err(ModError::OrderViolation(format!("{g:?} is not below {beta:?}")));
        }
        let rg = table
            .index_of(g)
            .ok_or_else(|| ModError::OrderViolation(format!("{g:?} is not a positive root")))?;
        word.push(alg.element(alg.g.neg(rg), a));
    }
    let ib = match st.seq.as_ref() {
        Some(s) => s[rb].clone(),
        None => return Err(ModError::IncompatibleCoefficients("module was built without an ideal sequence".into())),
    };
    let power = ib.power(gammas.len() as u32 + 1)?;
    for c in alg.b.ideal_image(&power)? {
        word[0] = alg.element(alg.g.neg(rb), &c);
        if let Some((t, w)) = st.apply_word(&word, st.vacuum())? {
            if !st.in_closure(&t, &w)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
